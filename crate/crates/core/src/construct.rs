//! Recursive block families whose every large subset has a large distance
//! ratio, the parameter solver that sizes them, and structural verifiers.
//!
//! A level-`i` block is `q^i` weight-`p` vectors of diameter `2p/a^(t-i)`,
//! split into `q` level-`(i-1)` blocks with every cross pair at exactly that
//! diameter. Any `q + 1` members of the level-`t` family then contain a close
//! pair inside one sub-block and a far pair across two, so their ratio is at
//! least `a`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::vector::{PairDistance, SupportVector, VectorFamily};

/// Upper bounds that keep construction within a desk-sized budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_family_size: u64,
    pub max_dimension: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_family_size: 1 << 20,
            max_dimension: 1 << 24,
        }
    }
}

/// Explicit values that replace the solver's rule for individual fields.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParamOverrides {
    pub t: Option<u64>,
    pub a: Option<u64>,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub n: Option<u64>,
}

/// The tuple `(t, a, p, q, n)` together with the `(alpha, C, lambda)` it was
/// solved for. Construction through [`CisParams::new`] enforces all four
/// admissibility conditions exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CisParams {
    pub t: usize,
    pub a: usize,
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub alpha: Rational,
    pub c: Rational,
    pub lambda: Rational,
}

impl CisParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        t: usize,
        a: usize,
        p: usize,
        q: usize,
        n: usize,
        alpha: Rational,
        c: Rational,
        lambda: Rational,
    ) -> Result<Self> {
        let params = Self {
            t,
            a,
            p,
            q,
            n,
            alpha,
            c,
            lambda,
        };
        let violations = params.violations();
        if violations.is_empty() {
            Ok(params)
        } else {
            Err(Error::InvalidParams(violations))
        }
    }

    /// Every admissibility condition the tuple fails, as readable text.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = check_domain(&self.alpha, &self.c, &self.lambda) {
            out.push(e.to_string());
        }
        if [self.t, self.a, self.p, self.q, self.n].contains(&0) {
            out.push("t, a, p, q, n must all be positive".into());
            return out;
        }
        // condition 1
        if Rational::new(1.into(), BigInt::from(self.t)) >= self.alpha {
            out.push(format!(
                "condition 1: 1/t = 1/{} is not < alpha = {}",
                self.t,
                rational::display(&self.alpha)
            ));
        }
        if rational::integer(self.a as u64) <= self.c {
            out.push(format!(
                "condition 1: a = {} is not > C = {}",
                self.a,
                rational::display(&self.c)
            ));
        }
        // condition 2
        let a_pow_t = num_traits::pow(BigUint::from(self.a), self.t);
        if !(BigUint::from(self.p) % &a_pow_t).is_zero() {
            out.push(format!(
                "condition 2: p = {} is not a multiple of a^t = {}",
                self.p, a_pow_t
            ));
        }
        // condition 3
        let q_pow_t = num_traits::pow(BigUint::from(self.q), self.t);
        if !power_at_most(&self.lambda, self.p, &q_pow_t) {
            out.push(format!(
                "condition 3: q^t = {} is below lambda^p = ({})^{}",
                q_pow_t,
                rational::display(&self.lambda),
                self.p
            ));
        }
        // condition 4; the bound is only meaningful once condition 2 holds
        if out.iter().all(|v| !v.starts_with("condition 2")) {
            let bound = capacity_closed_form(self.t, self);
            if !rational::int_at_least(self.n as u64, &bound) {
                out.push(format!(
                    "condition 4: n = {} is below p + p(q-1)·Σ(q/a)^(t-j) = {}",
                    self.n,
                    rational::display(&bound)
                ));
            }
        }
        out
    }

    /// `q^t`, the number of vectors in the full construction.
    pub fn family_size(&self) -> usize {
        self.q.pow(self.t as u32)
    }

    /// `p / a^(t-i)`, half the diameter of a level-`i` block.
    pub fn half_span(&self, level: usize) -> usize {
        self.p / self.a.pow((self.t - level) as u32)
    }

    /// `2p / a^(t-i)`: the diameter of, and every cross distance inside, a
    /// level-`i` block.
    pub fn span_distance(&self, level: usize) -> usize {
        2 * self.half_span(level)
    }

    /// `p - p/a^(t-i)`: the number of coordinates shared by a whole
    /// level-`i` block.
    pub fn core_size(&self, level: usize) -> usize {
        self.p - self.half_span(level)
    }
}

impl fmt::Display for CisParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={} a={} p={} q={} n={} alpha={} C={} lambda={}",
            self.t,
            self.a,
            self.p,
            self.q,
            self.n,
            rational::display(&self.alpha),
            rational::display(&self.c),
            rational::display(&self.lambda)
        )
    }
}

fn check_domain(alpha: &Rational, c: &Rational, lambda: &Rational) -> Result<()> {
    let zero = Rational::zero();
    let one = Rational::one();
    if *alpha <= zero || *alpha > one {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1], got {}",
            rational::display(alpha)
        )));
    }
    if *c < one {
        return Err(Error::InvalidArgument(format!(
            "C must be >= 1, got {}",
            rational::display(c)
        )));
    }
    if *lambda <= one {
        return Err(Error::InvalidArgument(format!(
            "lambda must be > 1, got {}",
            rational::display(lambda)
        )));
    }
    Ok(())
}

/// Decides `base^exp <= bound` exactly. Left-to-right binary exponentiation
/// only ever holds `base^e` for prefixes `e <= exp`, so for `base >= 1` it can
/// stop as soon as a partial power passes the bound.
fn power_at_most(base: &Rational, exp: usize, bound: &BigUint) -> bool {
    let bound = BigInt::from(bound.clone());
    let exceeds = |v: &Rational| *v.numer() > &bound * v.denom();
    let mut acc = Rational::one();
    for bit in (0..usize::BITS - exp.leading_zeros()).rev() {
        acc = &acc * &acc;
        if (exp >> bit) & 1 == 1 {
            acc *= base;
        }
        if exceeds(&acc) {
            return false;
        }
    }
    true
}

/// Smallest `q` with `q^t >= lambda^p`, or `None` when that would need
/// `q^t > max_family_size`.
fn minimal_q(lambda: &Rational, p: usize, t: usize, max_family_size: u64) -> Option<BigUint> {
    let cap = BigUint::from(max_family_size);
    if !power_at_most(lambda, p, &cap) {
        return None;
    }
    let target = rational::pow(lambda, p).ceil().to_integer().to_biguint()?;
    let mut q = target.nth_root(t as u32);
    if num_traits::pow(q.clone(), t) < target {
        q += 1u32;
    }
    (num_traits::pow(q.clone(), t) <= cap).then_some(q)
}

fn describe(value: &BigUint) -> String {
    let digits = value.to_string();
    if digits.len() <= 40 {
        digits
    } else {
        format!("~10^{}", digits.len() - 1)
    }
}

/// Minimal admissible tuple for `(alpha, C, lambda)`:
/// `t = floor(1/alpha) + 1`, `a = floor(C) + 1`, `p = a^t`, `q` the least
/// integer with `q^t >= lambda^p`, and `n` the capacity bound at level `t`.
pub fn solve_params(
    alpha: &Rational,
    c: &Rational,
    lambda: &Rational,
    limits: Limits,
) -> Result<CisParams> {
    solve_params_with(alpha, c, lambda, ParamOverrides::default(), limits)
}

/// As [`solve_params`], with any field replaced by an explicit override. The
/// remaining fields are derived from the overridden ones and the result is
/// validated against all four conditions.
pub fn solve_params_with(
    alpha: &Rational,
    c: &Rational,
    lambda: &Rational,
    overrides: ParamOverrides,
    limits: Limits,
) -> Result<CisParams> {
    check_domain(alpha, c, lambda)?;
    let limit = |what: String| Error::LimitsExceeded(what);
    let to_usize =
        |v: u64| usize::try_from(v).map_err(|_| limit(format!("{v} does not fit in memory")));

    let t = match overrides.t {
        Some(t) => t,
        None => (alpha.recip().floor().to_integer() + BigInt::one())
            .to_u64()
            .ok_or_else(|| limit("t = floor(1/alpha) + 1 overflows".into()))?,
    };
    let a = match overrides.a {
        Some(a) => a,
        None => (c.floor().to_integer() + BigInt::one())
            .to_u64()
            .ok_or_else(|| limit("a = floor(C) + 1 overflows".into()))?,
    };
    if t == 0 || a == 0 {
        return Err(Error::InvalidParams(
            vec!["t and a must be positive".into()],
        ));
    }
    let max_dim = BigUint::from(limits.max_dimension);
    let p = match overrides.p {
        Some(p) => BigUint::from(p),
        None => {
            // a^t grows past any limit quickly; stop multiplying once it does
            let mut p = BigUint::one();
            for _ in 0..t {
                p *= a;
                if p > max_dim {
                    return Err(limit(format!(
                        "p = a^t = {a}^{t} exceeds max_dimension {} (n >= p)",
                        limits.max_dimension
                    )));
                }
            }
            p
        }
    };
    if p > max_dim {
        return Err(limit(format!(
            "p = {} exceeds max_dimension {} (n >= p)",
            describe(&p),
            limits.max_dimension
        )));
    }
    let p = to_usize(p.to_u64().expect("bounded by max_dimension"))?;
    let t = to_usize(t)?;

    let q = match overrides.q {
        Some(q) => BigUint::from(q),
        None => minimal_q(lambda, p, t, limits.max_family_size).ok_or_else(|| {
            limit(format!(
                "q^t >= lambda^p = ({})^{} needs q^t > max_family_size {}",
                rational::display(lambda),
                p,
                limits.max_family_size
            ))
        })?,
    };
    let family = num_traits::pow(q.clone(), t);
    if family > BigUint::from(limits.max_family_size) {
        return Err(limit(format!(
            "q^t = {}^{} = {} exceeds max_family_size {}",
            q,
            t,
            describe(&family),
            limits.max_family_size
        )));
    }
    let q = to_usize(q.to_u64().expect("bounded by max_family_size"))?;
    let a = to_usize(a)?;

    let n = match overrides.n {
        Some(n) => n,
        None => {
            let shape = CisParams {
                t,
                a,
                p,
                q,
                n: 0,
                alpha: alpha.clone(),
                c: c.clone(),
                lambda: lambda.clone(),
            };
            rational::ceil_u64(&capacity_closed_form(t, &shape))
        }
    };
    if n > limits.max_dimension {
        return Err(limit(format!(
            "n = {} exceeds max_dimension {}",
            n, limits.max_dimension
        )));
    }
    CisParams::new(
        t,
        a,
        p,
        q,
        to_usize(n)?,
        alpha.clone(),
        c.clone(),
        lambda.clone(),
    )
}

fn capacity_closed_form(level: usize, params: &CisParams) -> Rational {
    let p = BigInt::from(params.p);
    let q = BigInt::from(params.q);
    let a = BigInt::from(params.a);
    let sum = (1..=level).fold(Rational::zero(), |acc, j| {
        acc + Rational::new(
            num_traits::pow(q.clone(), level - j),
            num_traits::pow(a.clone(), params.t - j),
        )
    });
    Rational::from_integer(p.clone()) + Rational::from_integer(p * (q - 1)) * sum
}

/// `f_i = p + p(q-1)·Σ_{j=1..i} q^(i-j)/a^(t-j)`: the least `|T|` from which a
/// level-`i` block with core `|S| = p - p/a^(t-i)` can be carved.
pub fn capacity(level: usize, params: &CisParams) -> Result<Rational> {
    if level > params.t {
        return Err(Error::LevelOutOfRange { level, t: params.t });
    }
    Ok(capacity_closed_form(level, params))
}

/// The `(S, T)` pair a block was built between: every member is one on `S`
/// and zero outside `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionFrame {
    pub level: usize,
    pub core: Vec<usize>,
    pub room: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    /// Index of the vector in the output family.
    Leaf(usize),
    Split(Vec<BlockTree>),
}

/// Recursive partition of a constructed family. Trees loaded from files carry
/// no frames.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTree {
    pub level: usize,
    pub frame: Option<RecursionFrame>,
    pub block: Block,
}

impl BlockTree {
    pub fn leaf(index: usize) -> Self {
        Self {
            level: 0,
            frame: None,
            block: Block::Leaf(index),
        }
    }

    /// A split node; its level is one above its children's.
    pub fn split(children: Vec<BlockTree>) -> Result<Self> {
        let level = children
            .first()
            .map(|c| c.level + 1)
            .ok_or_else(|| Error::TreeMismatch("split node without children".into()))?;
        if children.iter().any(|c| c.level + 1 != level) {
            return Err(Error::TreeMismatch("children at unequal levels".into()));
        }
        Ok(Self {
            level,
            frame: None,
            block: Block::Split(children),
        })
    }

    pub fn children(&self) -> &[BlockTree] {
        match &self.block {
            Block::Leaf(_) => &[],
            Block::Split(c) => c,
        }
    }

    /// Vector indices spanned by this node, left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match &self.block {
            Block::Leaf(i) => out.push(*i),
            Block::Split(children) => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Pre-order traversal with the child-index path to each node.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&[usize], &'a BlockTree)) {
        fn go<'a>(
            node: &'a BlockTree,
            path: &mut Vec<usize>,
            visit: &mut impl FnMut(&[usize], &'a BlockTree),
        ) {
            visit(path, node);
            for (k, child) in node.children().iter().enumerate() {
                path.push(k);
                go(child, path, visit);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), visit);
    }
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Elements of sorted `room` not in sorted `core` (`core ⊆ room`).
fn difference(room: &[usize], core: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(room.len() - core.len().min(room.len()));
    let mut k = 0;
    for &x in room {
        if k < core.len() && core[k] == x {
            k += 1;
        } else {
            out.push(x);
        }
    }
    out
}

struct Builder<'a> {
    params: &'a CisParams,
    capacities: Vec<usize>,
    vectors: Vec<SupportVector>,
}

impl Builder<'_> {
    fn node(&mut self, level: usize, core: Vec<usize>, room: Vec<usize>) -> Result<BlockTree> {
        let params = self.params;
        debug_assert_eq!(core.len(), params.core_size(level));
        let free = difference(&room, &core);
        let block = if level == 0 {
            let fill = params.p - core.len();
            if free.len() < fill {
                return Err(Error::CapacityViolated {
                    level,
                    found: room.len(),
                    required: params.p,
                });
            }
            let support = merge_sorted(&core, &free[..fill]);
            self.vectors.push(SupportVector::new(params.n, support)?);
            Block::Leaf(self.vectors.len() - 1)
        } else {
            let q = params.q;
            let (base, extra) = (free.len() / q, free.len() % q);
            let grow = params.half_span(level) - params.half_span(level - 1);
            let mut children = Vec::with_capacity(q);
            let mut start = 0;
            for r in 0..q {
                let run = &free[start..start + base + usize::from(r < extra)];
                start += run.len();
                let child_room = merge_sorted(&core, run);
                if child_room.len() < self.capacities[level - 1] || run.len() < grow {
                    return Err(Error::CapacityViolated {
                        level,
                        found: child_room.len(),
                        required: self.capacities[level - 1],
                    });
                }
                let child_core = merge_sorted(&core, &run[..grow]);
                children.push(self.node(level - 1, child_core, child_room)?);
            }
            Block::Split(children)
        };
        Ok(BlockTree {
            level,
            frame: Some(RecursionFrame { level, core, room }),
            block,
        })
    }
}

/// Builds the level-`t` family between `(∅, [n])` with its block tree.
///
/// Choices are fixed: `T \ S` is cut into `q` consecutive runs in ascending
/// order, the first `|T \ S| mod q` one longer; each child's new core is the
/// lowest part of its run; a leaf takes the lowest free coordinates.
pub fn build_cis(params: &CisParams) -> Result<(VectorFamily, BlockTree)> {
    let problems = structural_violations(params);
    if !problems.is_empty() {
        return Err(Error::InvalidParams(problems));
    }
    let capacities = (0..=params.t)
        .map(|i| rational::ceil_u64(&capacity_closed_form(i, params)) as usize)
        .collect();
    let mut builder = Builder {
        params,
        capacities,
        vectors: Vec::with_capacity(params.family_size()),
    };
    let tree = builder.node(params.t, Vec::new(), (1..=params.n).collect())?;
    let family = VectorFamily::new(params.n, params.p, builder.vectors)?;
    Ok((family, tree))
}

/// The conditions the builder itself depends on: divisibility (2) and room
/// (4). Conditions 1 and 3 only give the family its meaning.
fn structural_violations(params: &CisParams) -> Vec<String> {
    params
        .violations()
        .into_iter()
        .filter(|v| {
            v.starts_with("condition 2") || v.starts_with("condition 4") || v.starts_with("t, a")
        })
        .collect()
}

/// Which clause of the block definition a node breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    SpanSize,
    Diameter,
    ChildCount,
    CrossDistance,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::SpanSize => "span-size",
            Clause::Diameter => "max-distance",
            Clause::ChildCount => "child-count",
            Clause::CrossDistance => "cross-distance",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: Vec<usize>,
    pub level: usize,
    pub clause: Clause,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "node /{} (level {}): {}: {}",
            join_path(&self.path),
            self.level,
            self.clause,
            self.detail
        )
    }
}

fn join_path(path: &[usize]) -> String {
    path.iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join("/")
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CisReport {
    pub nodes_checked: usize,
    pub violations: Vec<Violation>,
}

impl CisReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `tree` spans every family index exactly once with leaves at
/// level 0, and that its height does not exceed `t`.
pub fn check_tree(family: &VectorFamily, tree: &BlockTree, params: &CisParams) -> Result<()> {
    if tree.level > params.t {
        return Err(Error::TreeMismatch(format!(
            "tree height {} exceeds t = {}",
            tree.level, params.t
        )));
    }
    let mut bad_level = None;
    tree.walk(&mut |path, node| {
        let ok = match &node.block {
            Block::Leaf(_) => node.level == 0,
            Block::Split(c) => !c.is_empty() && c.iter().all(|c| c.level + 1 == node.level),
        };
        if !ok && bad_level.is_none() {
            bad_level = Some(join_path(path));
        }
    });
    if let Some(path) = bad_level {
        return Err(Error::TreeMismatch(format!(
            "inconsistent levels at node /{path}"
        )));
    }
    let mut leaves = tree.leaves();
    leaves.sort_unstable();
    if leaves != (0..family.len()).collect::<Vec<_>>() {
        return Err(Error::TreeMismatch(format!(
            "tree spans {} leaves but the family has {} vectors (or indices repeat)",
            leaves.len(),
            family.len()
        )));
    }
    Ok(())
}

/// Checks every level-`i >= 1` node: it spans `q^i` vectors, has exactly `q`
/// children, its diameter is `2p/a^(t-i)`, and every pair across two of its
/// children sits at exactly that distance.
pub fn verify_cis(
    family: &VectorFamily,
    tree: &BlockTree,
    params: &CisParams,
) -> Result<CisReport> {
    check_tree(family, tree, params)?;
    let dist = PairDistance::for_family(family);
    let mut report = CisReport::default();
    tree.walk(&mut |path, node| {
        if node.level == 0 {
            return;
        }
        report.nodes_checked += 1;
        let level = node.level;
        let mut flag = |clause, detail| {
            report.violations.push(Violation { path: path.to_vec(), level, clause, detail });
        };
        let span = node.leaves();
        let expected_span = params.q.pow(level as u32);
        if span.len() != expected_span {
            flag(Clause::SpanSize, format!("spans {} vectors, expected q^i = {}", span.len(), expected_span));
        }
        let children = node.children();
        if children.len() != params.q {
            flag(Clause::ChildCount, format!("has {} children, expected q = {}", children.len(), params.q));
        }
        let target = params.span_distance(level);
        if let Some((_, diameter)) = dist.min_max(&span) {
            if diameter != target {
                flag(Clause::Diameter, format!("max distance {diameter}, expected 2p/a^(t-i) = {target}"));
            }
        }
        let spans: Vec<Vec<usize>> = children.iter().map(BlockTree::leaves).collect();
        'scan: for r in 0..spans.len() {
            for s in r + 1..spans.len() {
                for &x in &spans[r] {
                    for &y in &spans[s] {
                        let d = dist.get(x, y);
                        if d != target {
                            flag(
                                Clause::CrossDistance,
                                format!(
                                    "vectors {} and {} (children {r}, {s}) at distance {d}, expected {target}",
                                    x + 1,
                                    y + 1
                                ),
                            );
                            break 'scan;
                        }
                    }
                }
            }
        }
    });
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterexampleMode {
    /// Pigeonhole bound per tree node.
    Structural,
    /// Every `(q+1)`-subset, refused above `max_subsets`.
    Exhaustive { max_subsets: u64 },
}

pub const DEFAULT_MAX_SUBSETS: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleViolation {
    /// Offending subset (0-based family indices), when one is exhibited.
    pub subset: Option<Vec<usize>>,
    /// Offending tree node, in structural mode.
    pub path: Option<Vec<usize>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    /// Subsets enumerated (exhaustive) or tree nodes bounded (structural).
    pub checked: u64,
    pub violation: Option<CounterexampleViolation>,
}

impl CounterexampleReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Confirms that every subset of more than `q` vectors has ratio `>= a`.
///
/// Since the ratio only grows under supersets, subsets of size exactly `q+1`
/// suffice. Exhaustive mode enumerates them in lexicographic order and needs
/// no tree. Structural mode bounds each node whose span exceeds `q`: any
/// `q+1` vectors whose lowest common node is that node meet two children and
/// put two members in one child, so the ratio is at least
/// `min cross distance / max child diameter`.
pub fn verify_counterexample(
    family: &VectorFamily,
    tree: Option<&BlockTree>,
    params: &CisParams,
    mode: CounterexampleMode,
) -> Result<CounterexampleReport> {
    let dist = PairDistance::for_family(family);
    let a = params.a;
    match mode {
        CounterexampleMode::Exhaustive { max_subsets } => {
            let k = params.q + 1;
            let m = family.len();
            let needed = rational::binomial(m as u64, k as u64);
            if needed > BigUint::from(max_subsets) {
                return Err(Error::SubsetCap {
                    needed: needed.to_string(),
                    cap: max_subsets,
                });
            }
            let mut report = CounterexampleReport {
                checked: 0,
                violation: None,
            };
            if m < k {
                return Ok(report);
            }
            let mut combo: Vec<usize> = (0..k).collect();
            loop {
                report.checked += 1;
                let (lo, hi) = dist.min_max(&combo).expect("k >= 2");
                if hi < a * lo {
                    report.violation = Some(CounterexampleViolation {
                        subset: Some(combo.clone()),
                        path: None,
                        detail: format!("ratio {hi}/{lo} < a = {a}"),
                    });
                    return Ok(report);
                }
                if !next_combination(&mut combo, m) {
                    return Ok(report);
                }
            }
        }
        CounterexampleMode::Structural => {
            let tree = tree.ok_or_else(|| {
                Error::InvalidArgument("structural mode needs a block tree".into())
            })?;
            check_tree(family, tree, params)?;
            let mut report = CounterexampleReport {
                checked: 0,
                violation: None,
            };
            tree.walk(&mut |path, node| {
                if report.violation.is_some() || node.level == 0 || node.leaves().len() <= params.q {
                    return;
                }
                report.checked += 1;
                let children = node.children();
                if children.len() > params.q {
                    report.violation = Some(CounterexampleViolation {
                        subset: None,
                        path: Some(path.to_vec()),
                        detail: format!("{} children exceed q = {}; pigeonhole fails", children.len(), params.q),
                    });
                    return;
                }
                let spans: Vec<Vec<usize>> = children.iter().map(BlockTree::leaves).collect();
                let diameter = spans.iter().filter_map(|s| dist.min_max(s).map(|(_, hi)| hi)).max();
                let mut min_cross = usize::MAX;
                for r in 0..spans.len() {
                    for s in r + 1..spans.len() {
                        for &x in &spans[r] {
                            for &y in &spans[s] {
                                min_cross = min_cross.min(dist.get(x, y));
                            }
                        }
                    }
                }
                if let Some(diameter) = diameter {
                    if min_cross < a * diameter {
                        report.violation = Some(CounterexampleViolation {
                            subset: None,
                            path: Some(path.to_vec()),
                            detail: format!(
                                "min cross distance {min_cross} < a · max child diameter = {a} · {diameter}"
                            ),
                        });
                    }
                }
            });
            Ok(report)
        }
    }
}

/// Advances a strictly increasing index list to the next `k`-combination of
/// `0..m` in lexicographic order.
pub(crate) fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let k = combo.len();
    let Some(pos) = (0..k).rev().find(|&i| combo[i] < m - k + i) else {
        return false;
    };
    combo[pos] += 1;
    for i in pos + 1..k {
        combo[i] = combo[i - 1] + 1;
    }
    true
}
