//! Constant-weight binary vectors as sorted supports, and their pairwise
//! Hamming statistics.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// An `n`-dimensional binary vector, stored as the strictly increasing list
/// of its 1-based one-coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportVector {
    dimension: usize,
    support: Vec<usize>,
}

impl SupportVector {
    pub fn new(dimension: usize, support: Vec<usize>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidVector("dimension must be positive".into()));
        }
        if let Some(w) = support.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidVector(format!(
                "support not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        match (support.first(), support.last()) {
            (Some(&0), _) => return Err(Error::InvalidVector("indices are 1-based".into())),
            (_, Some(&hi)) if hi > dimension => {
                return Err(Error::InvalidVector(format!(
                    "index {hi} exceeds dimension {dimension}"
                )))
            }
            _ => {}
        }
        Ok(Self { dimension, support })
    }

    /// Builds a vector from indices in any order; duplicates are rejected.
    pub fn from_indices(dimension: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        Self::new(dimension, indices)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn contains(&self, index: usize) -> bool {
        self.support.binary_search(&index).is_ok()
    }

    /// Number of shared one-coordinates, by sorted merge.
    pub fn overlap(&self, other: &Self) -> usize {
        let (a, b) = (&self.support, &other.support);
        let (mut i, mut j, mut shared) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        shared
    }

    fn distance_unchecked(&self, other: &Self) -> usize {
        self.weight() + other.weight() - 2 * self.overlap(other)
    }

    fn mask(&self) -> u128 {
        self.support
            .iter()
            .fold(0u128, |m, &i| m | (1u128 << (i - 1)))
    }
}

impl fmt::Display for SupportVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.support.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Hamming distance: the size of the symmetric difference of the supports.
pub fn distance(u: &SupportVector, v: &SupportVector) -> Result<usize> {
    if u.dimension != v.dimension {
        return Err(Error::DimensionMismatch(u.dimension, v.dimension));
    }
    Ok(u.distance_unchecked(v))
}

/// An ordered set of distinct vectors sharing dimension `n` and weight `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFamily {
    dimension: usize,
    weight: usize,
    vectors: Vec<SupportVector>,
}

impl VectorFamily {
    pub fn new(dimension: usize, weight: usize, vectors: Vec<SupportVector>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidVector("dimension must be positive".into()));
        }
        if weight > dimension {
            return Err(Error::InvalidVector(format!(
                "weight {weight} exceeds dimension {dimension}"
            )));
        }
        let mut seen: HashMap<&[usize], usize> = HashMap::with_capacity(vectors.len());
        for (index, v) in vectors.iter().enumerate() {
            if v.dimension != dimension {
                return Err(Error::DimensionMismatch(dimension, v.dimension));
            }
            if v.weight() != weight {
                return Err(Error::WeightMismatch {
                    index,
                    expected: weight,
                    found: v.weight(),
                });
            }
            if let Some(first) = seen.insert(v.support(), index) {
                return Err(Error::DuplicateVector {
                    first,
                    second: index,
                });
            }
        }
        Ok(Self {
            dimension,
            weight,
            vectors,
        })
    }

    pub fn empty(dimension: usize, weight: usize) -> Result<Self> {
        Self::new(dimension, weight, Vec::new())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&SupportVector> {
        self.vectors.get(index)
    }

    pub fn vectors(&self) -> &[SupportVector] {
        &self.vectors
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SupportVector> {
        self.vectors.iter()
    }

    /// The members at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let vectors = indices
            .iter()
            .map(|&i| {
                self.vectors.get(i).cloned().ok_or(Error::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.dimension, self.weight, vectors)
    }

    pub fn into_vectors(self) -> Vec<SupportVector> {
        self.vectors
    }
}

impl<'a> IntoIterator for &'a VectorFamily {
    type Item = &'a SupportVector;
    type IntoIter = std::slice::Iter<'a, SupportVector>;

    fn into_iter(self) -> Self::IntoIter {
        self.vectors.iter()
    }
}

/// Pairwise distance lookups over a slice of equal-dimension vectors.
///
/// For `n <= 128` each support is packed into a `u128` and distances are a
/// single popcount; otherwise the sorted-merge path is used.
pub struct PairDistance<'a> {
    vectors: &'a [SupportVector],
    masks: Option<Vec<u128>>,
}

impl<'a> PairDistance<'a> {
    pub fn new(vectors: &'a [SupportVector]) -> Self {
        let packable = vectors.first().is_some_and(|v| v.dimension <= 128);
        let masks = packable.then(|| vectors.iter().map(SupportVector::mask).collect());
        Self { vectors, masks }
    }

    pub fn for_family(family: &'a VectorFamily) -> Self {
        Self::new(&family.vectors)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        match &self.masks {
            Some(m) => (m[i] ^ m[j]).count_ones() as usize,
            None => self.vectors[i].distance_unchecked(&self.vectors[j]),
        }
    }

    /// Min over distinct pairs and max over all pairs of `indices`, or
    /// `None` below two members.
    pub fn min_max(&self, indices: &[usize]) -> Option<(usize, usize)> {
        if indices.len() < 2 {
            return None;
        }
        let (mut lo, mut hi) = (usize::MAX, 0);
        for (k, &i) in indices.iter().enumerate() {
            for &j in &indices[k + 1..] {
                let d = self.get(i, j);
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
        Some((lo, hi))
    }
}

/// Minimum and maximum pairwise distance with their exact ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceStats {
    pub min_dist: usize,
    pub max_dist: usize,
    pub ratio: Rational,
}

impl DistanceStats {
    pub fn from_min_max(min_dist: usize, max_dist: usize) -> Self {
        let ratio = Rational::new(BigInt::from(max_dist), BigInt::from(min_dist));
        Self {
            min_dist,
            max_dist,
            ratio,
        }
    }
}

impl fmt::Display for DistanceStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "min={} max={} ratio={}",
            self.min_dist,
            self.max_dist,
            crate::rational::display(&self.ratio)
        )
    }
}

pub fn distance_stats(family: &VectorFamily) -> Result<DistanceStats> {
    let all: Vec<usize> = (0..family.len()).collect();
    PairDistance::for_family(family)
        .min_max(&all)
        .map(|(lo, hi)| DistanceStats::from_min_max(lo, hi))
        .ok_or(Error::RatioUndefined)
}

/// Distance ratio; a single vector has ratio 1 by convention.
pub fn distance_ratio(family: &VectorFamily) -> Result<Rational> {
    match family.len() {
        0 => Err(Error::EmptyFamily),
        1 => Ok(Rational::from_integer(1.into())),
        _ => distance_stats(family).map(|s| s.ratio),
    }
}
