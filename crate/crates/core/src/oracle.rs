//! Exponential-time ground truth for small families, and the seeded family
//! generator shared by tests and experiments.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::rng::SplitMix64;
use crate::vector::{DistanceStats, PairDistance, SupportVector, VectorFamily};

pub const DEFAULT_BRUTE_CAP: usize = 20;
pub const BRUTE_CAP_ENV: &str = "DRKIT_MAX_BRUTE";

/// The brute-force cap: an explicit value wins, then `DRKIT_MAX_BRUTE`, then
/// [`DEFAULT_BRUTE_CAP`].
pub fn resolve_cap(explicit: Option<usize>) -> Result<usize> {
    if let Some(cap) = explicit {
        return Ok(cap);
    }
    match std::env::var(BRUTE_CAP_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{BRUTE_CAP_ENV}={raw:?} is not a count"))),
        Err(_) => Ok(DEFAULT_BRUTE_CAP),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// 0-based input indices, ascending.
    pub subset: Vec<usize>,
    pub size: usize,
    pub ratio: Rational,
    /// Feasible subsets visited.
    pub explored: u64,
    /// Extensions cut because they already exceeded `C`.
    pub pruned: u64,
}

struct Search<'a> {
    dist: PairDistance<'a>,
    /// `allowed[lo]` is the largest max distance compatible with min `lo`.
    allowed: Vec<u64>,
    current: Vec<usize>,
    best: Vec<usize>,
    explored: u64,
    pruned: u64,
}

impl Search<'_> {
    fn descend(&mut self, from: usize, lo: usize, hi: usize) {
        self.explored += 1;
        if self.current.len() > self.best.len() {
            self.best.clone_from(&self.current);
        }
        let m = self.dist.len();
        for j in from..m {
            if self.current.len() + (m - j) <= self.best.len() {
                break;
            }
            let (mut lo2, mut hi2) = (lo, hi);
            for &x in &self.current {
                let d = self.dist.get(x, j);
                lo2 = lo2.min(d);
                hi2 = hi2.max(d);
            }
            let feasible = self.current.is_empty() || hi2 as u64 <= self.allowed[lo2];
            if feasible {
                self.current.push(j);
                self.descend(j + 1, lo2, hi2);
                self.current.pop();
            } else {
                self.pruned += 1;
            }
        }
    }
}

/// A maximum-cardinality subset with ratio at most `C`, the lexicographically
/// smallest index list among ties.
///
/// Depth-first over index lists in lexicographic order; a branch is cut as
/// soon as its subset exceeds `C` (every superset does too) or it cannot beat
/// the best size found.
pub fn best_subset_bruteforce(
    family: &VectorFamily,
    c: &Rational,
    cap: usize,
) -> Result<OracleResult> {
    if family.len() > cap {
        return Err(Error::BruteForceCap {
            size: family.len(),
            cap,
        });
    }
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if *c < rational::integer(1) {
        return Err(Error::InvalidArgument(format!(
            "C must be >= 1, got {}",
            rational::display(c)
        )));
    }
    let diameter = 2 * family.weight();
    let allowed = (0..=diameter)
        .map(|lo| rational::floor_u64(&(c * rational::integer(lo as u64))))
        .collect();
    let mut search = Search {
        dist: PairDistance::for_family(family),
        allowed,
        current: Vec::new(),
        best: Vec::new(),
        explored: 0,
        pruned: 0,
    };
    search.descend(0, usize::MAX, 0);
    let ratio = match search.dist.min_max(&search.best) {
        Some((lo, hi)) => DistanceStats::from_min_max(lo, hi).ratio,
        None => rational::integer(1),
    };
    Ok(OracleResult {
        size: search.best.len(),
        subset: search.best,
        ratio,
        explored: search.explored,
        pruned: search.pruned,
    })
}

/// One empirical sample of the best exponent for a family.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSample {
    pub family_size: usize,
    pub oracle_size: usize,
    /// `ln(oracle_size) / ln(family_size)`; for display only.
    pub exponent: f64,
}

impl AlphaSample {
    pub fn exponent_display(&self) -> String {
        format_exponent(self.exponent)
    }
}

pub fn format_exponent(exponent: f64) -> String {
    format!("{exponent:.4}")
}

pub fn exponent(size: usize, total: usize) -> f64 {
    (size as f64).ln() / (total as f64).ln()
}

pub fn empirical_alpha(family: &VectorFamily, c: &Rational, cap: usize) -> Result<AlphaSample> {
    if family.len() < 2 {
        return Err(Error::RatioUndefined);
    }
    let best = best_subset_bruteforce(family, c, cap)?;
    Ok(AlphaSample {
        family_size: family.len(),
        oracle_size: best.size,
        exponent: exponent(best.size, family.len()),
    })
}

/// `m` distinct weight-`p` vectors of dimension `n`, reproducible from `seed`.
///
/// Each vector takes a fresh pool `[1, 2, ..., n]`, runs `p` steps of
/// Fisher-Yates (`j = i + next_u64() % (n - i)`, swap `pool[i]` and
/// `pool[j]`) on a SplitMix64 stream seeded with `seed`, and sorts the first `p`
/// entries. Supports already drawn are rejected and redrawn.
pub fn random_family(n: usize, p: usize, m: usize, seed: u64) -> Result<VectorFamily> {
    if n == 0 || p > n {
        return Err(Error::Infeasible(format!(
            "need 0 <= p <= n and n >= 1, got n={n} p={p}"
        )));
    }
    let available = rational::binomial(n as u64, p as u64);
    if BigUint::from(m) > available {
        return Err(Error::Infeasible(format!(
            "m = {m} exceeds C({n},{p}) = {available}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut seen: HashSet<Vec<usize>> = HashSet::with_capacity(m);
    let mut vectors = Vec::with_capacity(m);
    let mut pool: Vec<usize> = Vec::with_capacity(n);
    while vectors.len() < m {
        pool.clear();
        pool.extend(1..=n);
        for i in 0..p {
            let j = i + rng.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        let mut support = pool[..p].to_vec();
        support.sort_unstable();
        if seen.insert(support.clone()) {
            vectors.push(SupportVector::new(n, support)?);
        }
    }
    VectorFamily::new(n, p, vectors)
}
