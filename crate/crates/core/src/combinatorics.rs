//! Lexicographic ranking of k-subsets of `[m] = {1, ..., m}`.
//!
//! Subsets are kept as strictly increasing element lists and ordered
//! lexicographically on those lists, so `{1,2,3}` comes first and
//! `{m-k+1, ..., m}` last. Ranks are 0-based; elements are 1-based.
//! The empty subset (`k = 0`) is allowed and is the only 0-subset.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("binomial coefficient C({n}, {k}) overflows u64")]
    Overflow { n: usize, k: usize },
    #[error("rank {rank} out of range: only {count} subsets of size {k} in [{m}]")]
    RankOutOfRange {
        m: usize,
        k: usize,
        rank: u64,
        count: u64,
    },
    #[error("subset size {k} exceeds ground set size {m}")]
    SizeOutOfRange { m: usize, k: usize },
    #[error("invalid subset of [{m}]: {reason}")]
    InvalidSubset { m: usize, reason: String },
}

/// Checked binomial coefficient.
pub fn binomial(n: usize, k: usize) -> Result<u64, CombinatoricsError> {
    if k > n {
        return Ok(0);
    }
    let k_small = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k_small {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > u64::MAX as u128 {
            return Err(CombinatoricsError::Overflow { n, k });
        }
    }
    Ok(c as u64)
}

/// Binomial coefficient for arguments known to be small. Panics on overflow.
pub fn choose(n: usize, k: usize) -> usize {
    let c = binomial(n, k).unwrap_or_else(|e| panic!("{e}"));
    usize::try_from(c).expect("binomial coefficient exceeds usize")
}

/// A strictly increasing list of elements of `[m]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    elements: Vec<usize>,
}

impl Subset {
    pub fn new(m: usize, elements: Vec<usize>) -> Result<Self, CombinatoricsError> {
        if let Some(&e) = elements.iter().find(|&&e| e == 0 || e > m) {
            return Err(CombinatoricsError::InvalidSubset {
                m,
                reason: format!("element {e} not in 1..={m}"),
            });
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CombinatoricsError::InvalidSubset {
                m,
                reason: format!("elements {elements:?} not strictly increasing"),
            });
        }
        Ok(Subset { elements })
    }

    pub fn empty() -> Self {
        Subset {
            elements: Vec::new(),
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// The subset with `x` removed (no-op if absent).
    pub fn without(&self, x: usize) -> Subset {
        Subset {
            elements: self.elements.iter().copied().filter(|&e| e != x).collect(),
        }
    }

    /// The subset with `x` inserted (no-op if present).
    pub fn with(&self, x: usize) -> Subset {
        let mut elements = self.elements.clone();
        if let Err(pos) = elements.binary_search(&x) {
            elements.insert(pos, x);
        }
        Subset { elements }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Position of a subset inside the lexicographic listing of `[m]`'s k-subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetIndex {
    pub m: usize,
    pub k: usize,
    pub rank: u64,
}

impl SubsetIndex {
    pub fn new(m: usize, k: usize, rank: u64) -> Result<Self, CombinatoricsError> {
        if k > m {
            return Err(CombinatoricsError::SizeOutOfRange { m, k });
        }
        let count = binomial(m, k)?;
        if rank >= count {
            return Err(CombinatoricsError::RankOutOfRange { m, k, rank, count });
        }
        Ok(SubsetIndex { m, k, rank })
    }

    pub fn subset(&self) -> Subset {
        unrank(self.m, self.k, self.rank).expect("SubsetIndex is validated on construction")
    }
}

/// Subset at position `rank` of the lexicographic order of k-subsets of `[m]`.
pub fn unrank(m: usize, k: usize, rank: u64) -> Result<Subset, CombinatoricsError> {
    SubsetIndex::new(m, k, rank)?;
    let mut rest = rank;
    let mut elements = Vec::with_capacity(k);
    let mut v = 1;
    for i in 0..k {
        // Subsets whose i-th element is v, with later elements from (v, m].
        loop {
            let block = binomial(m - v, k - i - 1)?;
            if rest < block {
                break;
            }
            rest -= block;
            v += 1;
        }
        elements.push(v);
        v += 1;
    }
    Ok(Subset { elements })
}

/// Inverse of [`unrank`]. Uses `O(k)` binomial evaluations.
pub fn rank(m: usize, subset: &Subset) -> Result<u64, CombinatoricsError> {
    let k = subset.len();
    if k > m {
        return Err(CombinatoricsError::SizeOutOfRange { m, k });
    }
    if subset.elements.last().is_some_and(|&e| e > m) {
        return Err(CombinatoricsError::InvalidSubset {
            m,
            reason: format!("{subset:?} has elements above {m}"),
        });
    }
    // Skipped blocks at position i: sum over v in (prev, s_i) of C(m - v, k - i - 1),
    // which telescopes to C(m - prev, k - i) - C(m - s_i + 1, k - i).
    let mut total = 0u64;
    let mut prev = 0;
    for (i, &s) in subset.elements.iter().enumerate() {
        let j = k - i;
        total += binomial(m - prev, j)? - binomial(m + 1 - s, j)?;
        prev = s;
    }
    Ok(total)
}

/// All k-subsets of `[m]` in lexicographic order.
pub fn enumerate(m: usize, k: usize) -> Vec<Subset> {
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(choose(m, k));
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(Subset {
            elements: cur.clone(),
        });
        // Rightmost position that can still advance.
        let Some(i) = (0..k).rev().find(|&i| cur[i] < m - (k - 1 - i)) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// True iff every element of `inner` is in `outer`.
pub fn is_subset(inner: &Subset, outer: &Subset) -> bool {
    let mut it = outer.elements.iter();
    inner.elements.iter().all(|e| it.by_ref().any(|o| o == e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(e: &[usize]) -> Subset {
        Subset::new(e.len().max(*e.iter().max().unwrap_or(&0)), e.to_vec()).unwrap()
    }

    #[test]
    fn binomial_values_and_overflow() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(5, 0).unwrap(), 1);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(67, 33).unwrap(), 14226520737620288370);
        assert!(matches!(
            binomial(68, 34),
            Err(CombinatoricsError::Overflow { .. })
        ));
    }

    #[test]
    fn unrank_fig1_headers() {
        assert_eq!(unrank(5, 3, 0).unwrap(), s(&[1, 2, 3]));
        assert_eq!(unrank(5, 3, 9).unwrap(), s(&[3, 4, 5]));
        assert_eq!(unrank(6, 6, 0).unwrap(), s(&[1, 2, 3, 4, 5, 6]));
        assert!(matches!(
            unrank(5, 3, 10),
            Err(CombinatoricsError::RankOutOfRange { count: 10, .. })
        ));
    }

    #[test]
    fn rank_fig1_headers() {
        assert_eq!(rank(5, &s(&[1, 2])).unwrap(), 0);
        assert_eq!(rank(5, &s(&[4, 5])).unwrap(), 9);
        assert_eq!(rank(7, &s(&[7])).unwrap(), 6);
        assert_eq!(rank(4, &Subset::empty()).unwrap(), 0);
        let big = Subset::new(9, vec![2, 9]).unwrap();
        assert!(rank(5, &big).is_err());
    }

    #[test]
    fn enumerate_small_cases() {
        let rows: Vec<String> = enumerate(5, 2).iter().map(|x| format!("{x:?}")).collect();
        assert_eq!(
            rows,
            [
                "{1,2}", "{1,3}", "{1,4}", "{1,5}", "{2,3}", "{2,4}", "{2,5}", "{3,4}", "{3,5}",
                "{4,5}"
            ]
        );
        assert_eq!(enumerate(3, 3), vec![s(&[1, 2, 3])]);
        assert_eq!(enumerate(4, 1), vec![s(&[1]), s(&[2]), s(&[3]), s(&[4])]);
        assert_eq!(enumerate(4, 0), vec![Subset::empty()]);
    }

    #[test]
    fn subset_containment() {
        assert!(is_subset(&s(&[1, 2]), &s(&[1, 2, 3])));
        assert!(!is_subset(&s(&[1, 2]), &s(&[3, 4, 5])));
        assert!(is_subset(&s(&[1]), &s(&[1])));
        assert!(is_subset(&Subset::empty(), &s(&[2])));
        assert!(!is_subset(&s(&[2, 4]), &s(&[1, 2, 3])));
    }

    #[test]
    fn invalid_subsets_rejected() {
        assert!(Subset::new(5, vec![0, 1]).is_err());
        assert!(Subset::new(5, vec![2, 2]).is_err());
        assert!(Subset::new(5, vec![3, 1]).is_err());
        assert!(Subset::new(5, vec![6]).is_err());
    }

    #[test]
    fn round_trip_exhaustive_small() {
        for m in 0..=12 {
            for k in 0..=m {
                let all = enumerate(m, k);
                assert_eq!(all.len(), choose(m, k));
                for (i, sub) in all.iter().enumerate() {
                    assert_eq!(unrank(m, k, i as u64).unwrap(), *sub);
                    assert_eq!(rank(m, sub).unwrap(), i as u64);
                }
            }
        }
    }

    #[test]
    fn with_without() {
        let a = s(&[1, 3]);
        assert_eq!(a.with(2), s(&[1, 2, 3]));
        assert_eq!(a.with(3), a);
        assert_eq!(a.without(1), s(&[3]));
    }
}
