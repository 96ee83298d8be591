//! Availability certificates: per coordinate, `t` disjoint repair groups.
//!
//! A group `R` repairs coordinate `i` when the indicator of `R ∪ {i}` is a
//! dual codeword; the repaired value is then the XOR of the group.

use std::ops::ControlFlow;

use crate::codec::systematize;
use crate::combinatorics::{self, choose, enumerate};
use crate::constructions::LinearCode;
use crate::gf2::BitVector;

use super::distance::{for_each_combination, ColumnSearch, DEPENDENCY_BUDGET};
use super::AnalysisError;

/// Largest dual dimension enumerated exhaustively by [`certify_search`].
pub const MAX_DUAL_ENUMERATION_DIM: usize = 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityCertificate {
    n: usize,
    r: usize,
    t: usize,
    /// `groups[i][j]` is the j-th repair group of coordinate i, increasing.
    groups: Vec<Vec<Vec<usize>>>,
}

impl AvailabilityCertificate {
    pub fn new(n: usize, r: usize, t: usize, groups: Vec<Vec<Vec<usize>>>) -> Self {
        AvailabilityCertificate { n, r, t, groups }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn locality(&self) -> usize {
        self.r
    }

    pub fn availability(&self) -> usize {
        self.t
    }

    pub fn groups(&self, coordinate: usize) -> &[Vec<usize>] {
        &self.groups[coordinate]
    }

    /// Checks every structural and algebraic condition against `code`.
    pub fn validate(&self, code: &LinearCode) -> Result<(), AnalysisError> {
        let bad = |msg: String| Err(AnalysisError::InvalidCertificate(msg));
        if code.n() != self.n || self.groups.len() != self.n {
            return bad(format!(
                "certificate covers {} coordinates, code has length {}",
                self.groups.len(),
                code.n()
            ));
        }
        let generator = match code.generator() {
            Some(g) => g.matrix.clone(),
            None => systematize(code).matrix,
        };
        for (i, groups) in self.groups.iter().enumerate() {
            if groups.len() != self.t {
                return bad(format!(
                    "coordinate {i} has {} groups, need {}",
                    groups.len(),
                    self.t
                ));
            }
            let mut used = BitVector::zeros(self.n);
            for group in groups {
                if group.len() > self.r {
                    return bad(format!(
                        "coordinate {i}: group {group:?} larger than {}",
                        self.r
                    ));
                }
                if group.windows(2).any(|w| w[0] >= w[1]) || group.iter().any(|&c| c >= self.n) {
                    return bad(format!("coordinate {i}: malformed group {group:?}"));
                }
                if group.contains(&i) {
                    return bad(format!("coordinate {i}: group {group:?} contains it"));
                }
                let members = BitVector::from_support(self.n, group.iter().copied());
                if members.intersects(&used) {
                    return bad(format!("coordinate {i}: group {group:?} overlaps another"));
                }
                used.xor_assign(&members);
                let mut check = members;
                check.set(i, true);
                if !generator.mat_vec_mul(&check).expect("length n").is_zero() {
                    return bad(format!(
                        "coordinate {i}: {group:?} plus {i} is not a dual codeword"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Certificate read off the rows of `H(m, t)`.
///
/// Coordinate `j` is the t-subset `F`; each (t-1)-subset `E ⊂ F` names a row
/// whose support, minus `j`, is one group. Groups are ordered by row rank.
pub fn certify_structural(m: usize, t: usize) -> Result<AvailabilityCertificate, AnalysisError> {
    if !(1..m).contains(&t) {
        return Err(AnalysisError::InvalidParameters(format!(
            "need m > t >= 1, got m={m}, t={t}"
        )));
    }
    let r = m - t;
    let n = choose(m, t);
    let mut all_groups = Vec::with_capacity(n);
    for (j, column) in enumerate(m, t).iter().enumerate() {
        let mut rows: Vec<(u64, Vec<usize>)> = column
            .elements()
            .iter()
            .map(|&e| {
                let row = column.without(e);
                let support: Vec<usize> = (1..=m)
                    .filter(|b| !row.contains(*b))
                    .map(|b| combinatorics::rank(m, &row.with(b)).expect("valid subset") as usize)
                    .filter(|&c| c != j)
                    .collect();
                let row_rank = combinatorics::rank(m, &row).expect("valid subset");
                (row_rank, support)
            })
            .collect();
        rows.sort();
        let groups: Vec<Vec<usize>> = rows
            .into_iter()
            .map(|(_, mut g)| {
                g.sort_unstable();
                g
            })
            .collect();
        let mut used = BitVector::zeros(n);
        for g in &groups {
            let members = BitVector::from_support(n, g.iter().copied());
            if g.len() != r || members.intersects(&used) {
                return Err(AnalysisError::StructuralViolation(format!(
                    "coordinate {j}: group {g:?} is not a fresh {r}-set"
                )));
            }
            used.xor_assign(&members);
        }
        all_groups.push(groups);
    }
    Ok(AvailabilityCertificate::new(n, r, t, all_groups))
}

/// Supports of all dual codewords of weight in `1..=max_weight`.
pub fn low_weight_dual_supports(
    code: &LinearCode,
    max_weight: usize,
) -> Result<Vec<Vec<usize>>, AnalysisError> {
    let n = code.n();
    let dual_dim = code.parity_rank();
    let dependency_cost: u128 = (0..max_weight).map(|w| choose_u128(n, w)).sum();
    let enumerate_cost: u128 = 1u128 << dual_dim.min(127);
    if dual_dim <= MAX_DUAL_ENUMERATION_DIM && enumerate_cost <= dependency_cost {
        let (rref, pivots) = code.parity().rref();
        let basis = rref.submatrix(0, 0, pivots.len(), n);
        let mut out = Vec::new();
        for_each_combination(&basis, |c| {
            if c.weight() <= max_weight {
                out.push(c.support());
            }
        });
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        return Ok(out);
    }
    // Dual codewords are the zero-sum column sets of the generator.
    let generator = match code.generator() {
        Some(g) => g.matrix.clone(),
        None => systematize(code).matrix,
    };
    let mut budget = DEPENDENCY_BUDGET;
    ColumnSearch::new(&generator).all_up_to(max_weight, &mut budget)
}

fn choose_u128(n: usize, k: usize) -> u128 {
    combinatorics::binomial(n, k).map_or(u128::MAX / 4, u128::from)
}

/// Finds `t` disjoint repair groups of size at most `r` for every
/// coordinate, using only dual codewords of weight at most `r + 1`.
///
/// Candidate groups through a coordinate are tried smallest first, then in
/// lexicographic order, with exact backtracking.
pub fn certify_search(
    code: &LinearCode,
    r: usize,
    t: usize,
) -> Result<AvailabilityCertificate, AnalysisError> {
    let n = code.n();
    let supports = low_weight_dual_supports(code, r + 1)?;
    let mut through: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for s in &supports {
        for &i in s {
            through[i].push(s.iter().copied().filter(|&c| c != i).collect());
        }
    }
    let mut all_groups = Vec::with_capacity(n);
    for (i, candidates) in through.iter_mut().enumerate() {
        candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let sets: Vec<BitVector> = candidates
            .iter()
            .map(|g| BitVector::from_support(n, g.iter().copied()))
            .collect();
        let mut chosen = Vec::with_capacity(t);
        let packed = pack(&sets, t, 0, &BitVector::zeros(n), &mut chosen);
        if packed.is_continue() {
            return Err(AnalysisError::NoCertificate { coordinate: i });
        }
        all_groups.push(chosen.iter().map(|&c| candidates[c].clone()).collect());
    }
    Ok(AvailabilityCertificate::new(n, r, t, all_groups))
}

/// Backtracking exact set packing; breaks once `need` disjoint sets are chosen.
fn pack(
    sets: &[BitVector],
    need: usize,
    start: usize,
    used: &BitVector,
    chosen: &mut Vec<usize>,
) -> ControlFlow<()> {
    if chosen.len() == need {
        return ControlFlow::Break(());
    }
    if sets.len() - start < need - chosen.len() {
        return ControlFlow::Continue(());
    }
    for c in start..sets.len() {
        if sets[c].intersects(used) {
            continue;
        }
        let mut next = used.clone();
        next.xor_assign(&sets[c]);
        chosen.push(c);
        pack(sets, need, c + 1, &next, chosen)?;
        chosen.pop();
    }
    ControlFlow::Continue(())
}
