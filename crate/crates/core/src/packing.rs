//! Greedy minimum-distance packings over the slice of all weight-`p`
//! vectors, the deterministic stand-in for the Varshamov-Gilbert style
//! existence bound.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::oracle::random_family;
use crate::rational::{self, Rational};
use crate::vector::{SupportVector, VectorFamily};

/// All `C(n, p)` supports in lexicographic order, generated lazily.
#[derive(Debug, Clone)]
pub struct SliceIter {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for SliceIter {
    type Item = SupportVector;

    fn next(&mut self) -> Option<SupportVector> {
        let current = self.next.take()?;
        let p = current.len();
        let mut succ = current.clone();
        // rightmost position that can still move up
        if let Some(pos) = (0..p).rev().find(|&i| succ[i] < self.n - p + i + 1) {
            succ[pos] += 1;
            for i in pos + 1..p {
                succ[i] = succ[i - 1] + 1;
            }
            self.next = Some(succ);
        }
        Some(SupportVector::new(self.n, current).expect("combinations are valid supports"))
    }
}

pub fn enumerate_slice(n: usize, p: usize) -> SliceIter {
    let next = (n > 0 && p <= n).then(|| (1..=p).collect());
    SliceIter { n, next }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    FullLex,
    SeededSample { seed: u64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingParams {
    pub n: usize,
    pub p: usize,
    /// Always even.
    pub d_min: usize,
    pub enumeration: Enumeration,
}

impl PackingParams {
    /// Rounds an odd `d_min` up to the next even value, since equal-weight
    /// distances are even.
    pub fn new(n: usize, p: usize, d_min: usize, enumeration: Enumeration) -> Result<Self> {
        if n == 0 || p > n {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= n and p <= n, got n={n} p={p}"
            )));
        }
        if d_min == 0 {
            return Err(Error::InvalidArgument("d_min must be positive".into()));
        }
        Ok(Self {
            n,
            p,
            d_min: d_min + d_min % 2,
            enumeration,
        })
    }
}

/// `⌈(p+1)/4⌉` rounded up to even: the separation that keeps the packing's
/// ratio `2p/d_min` below 8.
pub fn classic_threshold(p: usize) -> usize {
    let d = (p + 1).div_ceil(4);
    d + d % 2
}

/// Scans the enumeration and keeps each vector at distance `>= d_min` from
/// everything kept so far.
pub fn greedy_packing(params: &PackingParams) -> Result<VectorFamily> {
    let stream: Box<dyn Iterator<Item = SupportVector>> = match params.enumeration {
        Enumeration::FullLex => Box::new(enumerate_slice(params.n, params.p)),
        Enumeration::SeededSample { seed, count } => Box::new(
            random_family(params.n, params.p, count, seed)?
                .into_vectors()
                .into_iter(),
        ),
    };
    let d_min = params.d_min;
    let mut kept: Vec<SupportVector> = Vec::new();
    if params.n <= 128 {
        let mask = |v: &SupportVector| v.support().iter().fold(0u128, |m, &i| m | 1u128 << (i - 1));
        let mut masks: Vec<u128> = Vec::new();
        for v in stream {
            let m = mask(&v);
            if masks
                .iter()
                .all(|&k| (k ^ m).count_ones() as usize >= d_min)
            {
                masks.push(m);
                kept.push(v);
            }
        }
    } else {
        for v in stream {
            if kept
                .iter()
                .all(|k| crate::vector::distance(k, &v).expect("same dimension") >= d_min)
            {
                kept.push(v);
            }
        }
    }
    VectorFamily::new(params.n, params.p, kept)
}

/// `size >= slice^beta`, decided as `size^den >= slice^num` for `beta = num/den`.
pub fn meets_size_floor(size: usize, slice: &BigUint, beta: &Rational) -> bool {
    let (Some(num), Some(den)) = (beta.numer().to_usize(), beta.denom().to_usize()) else {
        return false;
    };
    if num == 0 {
        return size >= 1;
    }
    num_traits::pow(BigUint::from(size), den) >= num_traits::pow(slice.clone(), num)
}

/// `C(n, p)`, the slice size.
pub fn slice_size(n: usize, p: usize) -> BigUint {
    if p > n {
        return BigUint::from(0u32);
    }
    rational::binomial(n as u64, p as u64)
}
