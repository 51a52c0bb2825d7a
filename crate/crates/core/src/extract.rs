//! Large subsets with distance ratio at most `C > 2`.
//!
//! Starting from `K_1 = K`, each round keeps a maximal subset `K_{i+1}` of
//! `K_i` whose pairwise distances are at least `θ_i = C^i / 2^(i-1)`. If some
//! net point has a ball of radius `θ_i` in `K_i` holding at least `|K|^(1/t)`
//! vectors, that ball is the answer; otherwise the last net `K_t` is. Either
//! way the ratio is at most `C`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::vector::{distance_ratio, PairDistance, VectorFamily};

/// Depth `t` and per-round thresholds for a weight `p` and ratio bound `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractParams {
    pub c: Rational,
    pub t: usize,
    pub alpha: Rational,
    /// `θ_1, ..., θ_{t-1}`.
    pub thresholds: Vec<Rational>,
}

impl ExtractParams {
    pub fn new(p: usize, c: &Rational) -> Result<Self> {
        let (t, alpha) = compute_depth(p, c)?;
        let thresholds = (1..t).map(|i| threshold(c, i)).collect();
        Ok(Self {
            c: c.clone(),
            t,
            alpha,
            thresholds,
        })
    }

    /// `θ_i` for `0 <= i < t`; `θ_0 = 2` is the least distance between
    /// distinct equal-weight vectors.
    pub fn threshold(&self, level: usize) -> Rational {
        threshold(&self.c, level)
    }
}

fn threshold(c: &Rational, level: usize) -> Rational {
    // C^i / 2^(i-1), written as 2 (C/2)^i to cover i = 0
    rational::pow(&(c / rational::integer(2)), level) * rational::integer(2)
}

fn check_c(c: &Rational) -> Result<()> {
    if *c <= rational::integer(2) {
        return Err(Error::ExtractDomain(rational::display(c)));
    }
    Ok(())
}

/// Least `t >= 1` with `(C/2)^t >= p/2`, found by exact comparison, and
/// `alpha = 1/t`.
pub fn compute_depth(p: usize, c: &Rational) -> Result<(usize, Rational)> {
    check_c(c)?;
    // (C/2)^t >= p/2  <=>  2 u^t >= p v^t  with C/2 = u/v
    let half_c = c / rational::integer(2);
    let (u, v) = (half_c.numer(), half_c.denom());
    let target = BigInt::from(p);
    let mut t = 1;
    let (mut num, mut den) = (u.clone() * 2, v.clone());
    while num < &target * &den {
        num *= u;
        den *= v;
        t += 1;
    }
    Ok((t, Rational::new(BigInt::one(), BigInt::from(t))))
}

/// `size^t >= total` without overflow.
pub fn size_meets(size: usize, t: usize, total: usize) -> bool {
    let total = total as u128;
    if size == 0 {
        return if t == 0 { total <= 1 } else { total == 0 };
    }
    let mut acc: u128 = 1;
    for _ in 0..t {
        if acc >= total {
            break;
        }
        acc = acc.saturating_mul(size as u128);
    }
    acc >= total
}

/// Greedy scan of `members` in order, keeping a member iff it is at least
/// `min_dist` from everything kept so far.
fn separated(dist: &PairDistance<'_>, members: &[usize], min_dist: u64) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for &x in members {
        if kept.iter().all(|&y| dist.get(x, y) as u64 >= min_dist) {
            kept.push(x);
        }
    }
    kept
}

fn within(dist: &PairDistance<'_>, members: &[usize], center: usize, radius: u64) -> Vec<usize> {
    members
        .iter()
        .copied()
        .filter(|&x| dist.get(x, center) as u64 <= radius)
        .collect()
}

/// A maximal subset with all pairwise distances `>= threshold`, admitted in
/// stored order.
pub fn greedy_separated(family: &VectorFamily, threshold: &Rational) -> VectorFamily {
    let dist = PairDistance::for_family(family);
    let all: Vec<usize> = (0..family.len()).collect();
    let kept = separated(&dist, &all, rational::ceil_u64(threshold));
    family.select(&kept).expect("indices come from the family")
}

/// Members within `radius` of `family[center]`, in stored order.
pub fn ball(family: &VectorFamily, center: usize, radius: &Rational) -> Result<VectorFamily> {
    if center >= family.len() {
        return Err(Error::IndexOutOfRange {
            index: center,
            len: family.len(),
        });
    }
    let dist = PairDistance::for_family(family);
    let all: Vec<usize> = (0..family.len()).collect();
    family.select(&within(&dist, &all, center, rational::floor_u64(radius)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// Ball of radius `θ_level` in `K_level` around input vector `center`.
    Ball { level: usize, center: usize },
    /// The final net `K_t`.
    Net { level: usize },
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateKind::Ball { level, center } => {
                write!(f, "ball(level={level}, center={})", center + 1)
            }
            CertificateKind::Net { level } => write!(f, "net(level={level})"),
        }
    }
}

/// How an extraction ended, with enough to replay it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionCertificate {
    pub c: Rational,
    pub t: usize,
    pub kind: CertificateKind,
    /// `|K_1|, |K_2|, ...` for the rounds actually built.
    pub chain_sizes: Vec<usize>,
    /// 0-based input indices of the returned subset.
    pub subset: Vec<usize>,
}

struct Run {
    chain: Vec<Vec<usize>>,
    kind: CertificateKind,
    subset: Vec<usize>,
}

fn run(family: &VectorFamily, params: &ExtractParams, stop_at_ball: bool) -> Run {
    let dist = PairDistance::for_family(family);
    let total = family.len();
    let mut chain = vec![(0..total).collect::<Vec<_>>()];
    for level in 1..params.t {
        let theta = &params.thresholds[level - 1];
        let current = chain.last().expect("chain starts non-empty");
        let next = separated(&dist, current, rational::ceil_u64(theta));
        if stop_at_ball {
            let radius = rational::floor_u64(theta);
            for &center in &next {
                let members = within(&dist, current, center, radius);
                if size_meets(members.len(), params.t, total) {
                    chain.push(next);
                    return Run {
                        chain,
                        kind: CertificateKind::Ball { level, center },
                        subset: members,
                    };
                }
            }
        }
        chain.push(next);
    }
    let subset = chain.last().expect("chain starts non-empty").clone();
    Run {
        chain,
        kind: CertificateKind::Net { level: params.t },
        subset,
    }
}

/// Returns a subset `K'` with `dr(K') <= C` and `|K'|^t >= |K|`, plus the
/// certificate describing which branch produced it.
pub fn extract_subset(
    family: &VectorFamily,
    c: &Rational,
) -> Result<(VectorFamily, ExtractionCertificate)> {
    check_c(c)?;
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let params = ExtractParams::new(family.weight(), c)?;
    let Run {
        chain,
        kind,
        subset,
    } = run(family, &params, true);
    let cert = ExtractionCertificate {
        c: c.clone(),
        t: params.t,
        kind,
        chain_sizes: chain.iter().map(Vec::len).collect(),
        subset,
    };
    Ok((family.select(&cert.subset)?, cert))
}

/// The full chain `K_1 ⊇ ... ⊇ K_t` as index lists, ignoring the ball exit.
pub fn net_chain(family: &VectorFamily, c: &Rational) -> Result<Vec<Vec<usize>>> {
    check_c(c)?;
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let params = ExtractParams::new(family.weight(), c)?;
    Ok(run(family, &params, false).chain)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CertificateReport {
    pub problems: Vec<String>,
}

impl CertificateReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Replays the extraction and checks the certificate and the subset against
/// it, then re-checks both guarantees on `subset_family` directly.
pub fn validate_certificate(
    family: &VectorFamily,
    c: &Rational,
    cert: &ExtractionCertificate,
    subset_family: &VectorFamily,
) -> CertificateReport {
    let mut problems = Vec::new();
    let params = match (check_c(c), family.is_empty()) {
        (Err(e), _) => {
            return CertificateReport {
                problems: vec![e.to_string()],
            }
        }
        (_, true) => {
            return CertificateReport {
                problems: vec!["empty input family".into()],
            }
        }
        _ => ExtractParams::new(family.weight(), c).expect("domain checked"),
    };
    if cert.c != *c {
        problems.push(format!(
            "certificate C = {} differs from {}",
            rational::display(&cert.c),
            rational::display(c)
        ));
    }
    if cert.t != params.t {
        problems.push(format!(
            "depth: certificate t = {}, recomputed t = {}",
            cert.t, params.t
        ));
    }
    if let Some(&bad) = cert.subset.iter().find(|&&i| i >= family.len()) {
        problems.push(format!("subset index {} out of range", bad + 1));
        return CertificateReport { problems };
    }

    let replay = run(family, &params, true);
    let sizes: Vec<usize> = replay.chain.iter().map(Vec::len).collect();
    if sizes != cert.chain_sizes {
        problems.push(format!(
            "chain sizes {:?} differ from replay {:?}",
            cert.chain_sizes, sizes
        ));
    }
    if replay.kind != cert.kind {
        problems.push(format!(
            "branch {} differs from replay {}",
            cert.kind, replay.kind
        ));
    }
    if replay.subset != cert.subset {
        problems.push(format!(
            "subset of {} vectors differs from the {} replayed",
            cert.subset.len(),
            replay.subset.len()
        ));
    }
    match family.select(&cert.subset) {
        Ok(expected) if expected == *subset_family => {}
        _ => problems.push("output family does not match the certified subset".into()),
    }

    // independent of the replay
    let dist = PairDistance::for_family(family);
    match cert.kind {
        CertificateKind::Ball { level, center } => {
            let radius = params.threshold(level);
            if !cert.subset.contains(&center) {
                problems.push("ball does not contain its center".into());
            }
            if center < family.len()
                && cert
                    .subset
                    .iter()
                    .any(|&x| !rational::int_at_most(dist.get(x, center) as u64, &radius))
            {
                problems.push(format!(
                    "ball member farther than θ_{level} = {}",
                    rational::display(&radius)
                ));
            }
        }
        CertificateKind::Net { level } => {
            let floor = params.threshold(level.saturating_sub(1));
            if let Some((lo, _)) = dist.min_max(&cert.subset) {
                if !rational::int_at_least(lo as u64, &floor) {
                    problems.push(format!(
                        "net pair at distance {lo} is closer than θ_{} = {}",
                        level.saturating_sub(1),
                        rational::display(&floor)
                    ));
                }
            }
        }
    }
    match distance_ratio(subset_family) {
        Ok(ratio) if ratio <= *c => {}
        Ok(ratio) => problems.push(format!("ratio {} exceeds C", rational::display(&ratio))),
        Err(e) => problems.push(format!("ratio: {e}")),
    }
    if !size_meets(subset_family.len(), params.t, family.len()) {
        problems.push(format!(
            "size: {}^{} < {}",
            subset_family.len(),
            params.t,
            family.len()
        ));
    }
    CertificateReport { problems }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};
    use crate::vector::SupportVector;

    fn a1() -> VectorFamily {
        let vs = [[1, 2, 3, 4], [1, 2, 5, 6], [7, 8, 9, 10], [7, 8, 11, 12]];
        VectorFamily::new(
            12,
            4,
            vs.iter()
                .map(|s| SupportVector::new(12, s.to_vec()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(compute_depth(4, &integer(3)).unwrap(), (2, ratio(1, 2)));
        for c in [ratio(21, 10), integer(3), integer(100)] {
            assert_eq!(compute_depth(2, &c).unwrap().0, 1);
        }
        assert_eq!(compute_depth(64, &integer(4)).unwrap().0, 5);
        assert_eq!(compute_depth(3, &integer(3)).unwrap().0, 1);
        assert_eq!(
            compute_depth(4, &integer(2)),
            Err(Error::ExtractDomain("2/1".into()))
        );
    }

    #[test]
    fn thresholds() {
        let params = ExtractParams::new(64, &integer(4)).unwrap();
        // 4^i / 2^(i-1) = 2^(i+1)
        assert_eq!(
            params.thresholds,
            vec![integer(4), integer(8), integer(16), integer(32)]
        );
        assert_eq!(params.threshold(0), integer(2));
        let params = ExtractParams::new(128, &ratio(5, 2)).unwrap();
        assert!(params.thresholds.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(params.thresholds[1], ratio(25, 8));
    }

    #[test]
    fn greedy_examples() {
        let k = a1();
        assert_eq!(greedy_separated(&k, &integer(2)), k);
        assert_eq!(greedy_separated(&k, &ratio(3, 2)), k);
        assert_eq!(greedy_separated(&k, &integer(9)).len(), 1);
        assert_eq!(greedy_separated(&k, &integer(3)), k);
        assert_eq!(
            greedy_separated(&k, &integer(5)),
            k.select(&[0, 2]).unwrap()
        );
    }

    #[test]
    fn ball_examples() {
        let k = a1();
        assert_eq!(ball(&k, 0, &integer(0)).unwrap(), k.select(&[0]).unwrap());
        assert_eq!(ball(&k, 2, &integer(8)).unwrap(), k);
        assert_eq!(
            ball(&k, 0, &integer(4)).unwrap(),
            k.select(&[0, 1]).unwrap()
        );
        assert_eq!(ball(&k, 0, &ratio(7, 2)).unwrap(), k.select(&[0]).unwrap());
        assert_eq!(
            ball(&k, 4, &integer(1)),
            Err(Error::IndexOutOfRange { index: 4, len: 4 })
        );
    }

    #[test]
    fn extraction_on_small_family() {
        let k = a1();
        let (out, cert) = extract_subset(&k, &integer(3)).unwrap();
        assert_eq!(cert.t, 2);
        assert_eq!(cert.kind, CertificateKind::Net { level: 2 });
        assert_eq!(cert.chain_sizes, vec![4, 4]);
        assert_eq!(out, k);
        assert!(validate_certificate(&k, &integer(3), &cert, &out).is_valid());
    }

    #[test]
    fn ball_branch_fires_when_one_cluster_is_large() {
        // Nine vectors sharing {1,2,3} plus one far vector; with C = 3 and
        // p = 4, t = 2, θ_1 = 3: the net keeps the first vector, whose ball
        // covers the cluster.
        let mut vs: Vec<SupportVector> = (4..=12)
            .map(|x| SupportVector::new(20, vec![1, 2, 3, x]).unwrap())
            .collect();
        vs.push(SupportVector::new(20, vec![13, 14, 15, 16]).unwrap());
        let k = VectorFamily::new(20, 4, vs).unwrap();
        let (out, cert) = extract_subset(&k, &integer(3)).unwrap();
        assert_eq!(
            cert.kind,
            CertificateKind::Ball {
                level: 1,
                center: 0
            }
        );
        assert_eq!(cert.subset, (0..9).collect::<Vec<_>>());
        assert_eq!(distance_ratio(&out).unwrap(), integer(1));
        assert!(validate_certificate(&k, &integer(3), &cert, &out).is_valid());
    }

    #[test]
    fn degenerate_inputs() {
        let k = a1();
        let (out, cert) = extract_subset(&k, &integer(4)).unwrap();
        assert_eq!((cert.t, cert.kind), (1, CertificateKind::Net { level: 1 }));
        assert_eq!(out, k);
        let single = k.select(&[2]).unwrap();
        let (out, cert) = extract_subset(&single, &integer(3)).unwrap();
        assert_eq!(out, single);
        assert!(validate_certificate(&single, &integer(3), &cert, &out).is_valid());
        assert_eq!(
            extract_subset(&k, &integer(2)).unwrap_err(),
            Error::ExtractDomain("2/1".into())
        );
        assert_eq!(
            extract_subset(&VectorFamily::empty(12, 4).unwrap(), &integer(3)).unwrap_err(),
            Error::EmptyFamily
        );
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let k = a1();
        let c = integer(3);
        let (out, cert) = extract_subset(&k, &c).unwrap();

        let mut short = cert.clone();
        short.subset.pop();
        let short_out = k.select(&short.subset).unwrap();
        let report = validate_certificate(&k, &c, &short, &short_out);
        assert!(
            report.problems.iter().any(|p| p.starts_with("subset of 3")),
            "{:?}",
            report.problems
        );

        // swap in a vector one step from v1: the net now holds a pair at distance 2 < θ_1
        let close = SupportVector::new(12, vec![1, 2, 3, 5]).unwrap();
        let mut vs = k.clone().into_vectors();
        vs[3] = close;
        let k2 = VectorFamily::new(12, 4, vs).unwrap();
        let report = validate_certificate(&k2, &c, &cert, &k2);
        assert!(
            report
                .problems
                .iter()
                .any(|p| p.contains("closer than θ_1")),
            "{:?}",
            report.problems
        );

        let report = validate_certificate(&k, &integer(5), &cert, &out);
        assert!(!report.is_valid());
    }

    #[test]
    fn size_test_is_integral() {
        assert!(size_meets(2, 2, 4));
        assert!(!size_meets(2, 2, 5));
        assert!(size_meets(1, 5, 1));
        assert!(!size_meets(1, 5, 2));
        assert!(size_meets(3, 200, usize::MAX));
        assert!(!size_meets(0, 1, 1));
        assert!(size_meets(0, 1, 0));
    }
}
