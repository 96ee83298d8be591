//! Exact minimum distance and low-weight codeword enumeration.
//!
//! Two exhaustive routes are available. Gray-code enumeration walks all
//! `2^dim` combinations of a basis with one row XOR per step. Column
//! dependency search lists the sets of at most `w` columns of a matrix that
//! sum to zero, which are exactly the codewords of weight `<= w` of the code
//! having that matrix as parity check; its cost depends on `w` and the
//! length, not on the dimension.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::codec::systematize;
use crate::constructions::LinearCode;
use crate::gf2::{BitMatrix, BitVector};

use super::AnalysisError;

/// Largest message dimension enumerated by Gray code.
pub const MAX_ENUMERATION_DIM: usize = 26;

/// Number of search-tree nodes the column dependency search may visit.
pub const DEPENDENCY_BUDGET: u64 = 1 << 28;

/// Calls `visit` with every nonzero combination of the rows of `basis`,
/// in Gray-code order.
pub fn for_each_combination<F>(basis: &BitMatrix, mut visit: F)
where
    F: FnMut(&BitVector),
{
    let dim = basis.rows();
    assert!(dim < 64, "dimension {dim} too large to enumerate");
    let rows: Vec<BitVector> = (0..dim).map(|i| basis.row(i)).collect();
    let mut acc = BitVector::zeros(basis.cols());
    for step in 1u64..(1u64 << dim) {
        acc.xor_assign(&rows[step.trailing_zeros() as usize]);
        visit(&acc);
    }
}

/// Enumerates zero-sum column subsets of a fixed matrix.
pub(crate) struct ColumnSearch {
    columns: Vec<BitVector>,
    by_value: HashMap<BitVector, Vec<usize>>,
    height: usize,
}

impl ColumnSearch {
    pub(crate) fn new(matrix: &BitMatrix) -> Self {
        let t = matrix.transpose();
        let columns: Vec<BitVector> = (0..t.rows()).map(|j| t.row(j)).collect();
        let mut by_value: HashMap<BitVector, Vec<usize>> = HashMap::new();
        for (j, c) in columns.iter().enumerate() {
            by_value.entry(c.clone()).or_default().push(j);
        }
        ColumnSearch {
            columns,
            by_value,
            height: matrix.rows(),
        }
    }

    /// Calls `found` with each set of exactly `size` column indices
    /// (increasing) whose columns XOR to zero.
    pub(crate) fn for_each_of_size<F>(
        &self,
        size: usize,
        budget: &mut u64,
        found: &mut F,
    ) -> Result<ControlFlow<()>, AnalysisError>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if size == 0 || size > self.columns.len() {
            return Ok(ControlFlow::Continue(()));
        }
        let mut prefix = Vec::with_capacity(size);
        let acc = BitVector::zeros(self.height);
        self.descend(0, size - 1, &acc, &mut prefix, budget, found)
    }

    fn descend<F>(
        &self,
        start: usize,
        remaining: usize,
        acc: &BitVector,
        prefix: &mut Vec<usize>,
        budget: &mut u64,
        found: &mut F,
    ) -> Result<ControlFlow<()>, AnalysisError>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if *budget == 0 {
            return Err(AnalysisError::BudgetExceeded(
                "column dependency search ran out of nodes".into(),
            ));
        }
        *budget -= 1;
        if remaining == 0 {
            // The last column must equal the running sum.
            if let Some(matches) = self.by_value.get(acc) {
                for &j in matches.iter().filter(|&&j| j >= start) {
                    prefix.push(j);
                    let flow = found(prefix);
                    prefix.pop();
                    if flow.is_break() {
                        return Ok(flow);
                    }
                }
            }
            return Ok(ControlFlow::Continue(()));
        }
        let n = self.columns.len();
        for i in start..n.saturating_sub(remaining) {
            let mut next = acc.clone();
            next.xor_assign(&self.columns[i]);
            prefix.push(i);
            let flow = self.descend(i + 1, remaining - 1, &next, prefix, budget, found)?;
            prefix.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// All zero-sum column subsets of size `1..=max_size`.
    pub(crate) fn all_up_to(
        &self,
        max_size: usize,
        budget: &mut u64,
    ) -> Result<Vec<Vec<usize>>, AnalysisError> {
        let mut out = Vec::new();
        for size in 1..=max_size {
            let _ = self.for_each_of_size(size, budget, &mut |s: &[usize]| {
                out.push(s.to_vec());
                ControlFlow::Continue(())
            })?;
        }
        Ok(out)
    }
}

/// Minimum-weight nonzero codeword found by Gray-code enumeration of the
/// message space.
pub fn min_codeword_by_enumeration(code: &LinearCode) -> Result<BitVector, AnalysisError> {
    let k = code.k();
    if k == 0 {
        return Err(AnalysisError::NoNonzeroCodeword);
    }
    if k > MAX_ENUMERATION_DIM {
        return Err(AnalysisError::BudgetExceeded(format!(
            "dimension {k} exceeds the enumeration limit {MAX_ENUMERATION_DIM}"
        )));
    }
    let generator = systematize(code).matrix;
    let mut best: Option<BitVector> = None;
    let mut best_weight = usize::MAX;
    for_each_combination(&generator, |c| {
        let w = c.weight();
        if w < best_weight {
            best_weight = w;
            best = Some(c.clone());
        }
    });
    Ok(best.expect("k > 0 gives at least one nonzero codeword"))
}

/// Minimum-weight nonzero codeword found by searching for the smallest set
/// of linearly dependent parity-check columns.
pub fn min_codeword_by_dependency(
    code: &LinearCode,
    budget: u64,
) -> Result<BitVector, AnalysisError> {
    if code.k() == 0 {
        return Err(AnalysisError::NoNonzeroCodeword);
    }
    let search = ColumnSearch::new(code.parity());
    let mut remaining = budget;
    for size in 1..=code.n() {
        let mut hit = None;
        let _ = search.for_each_of_size(size, &mut remaining, &mut |s: &[usize]| {
            hit = Some(s.to_vec());
            ControlFlow::Break(())
        })?;
        if let Some(support) = hit {
            return Ok(BitVector::from_support(code.n(), support));
        }
    }
    unreachable!("k > 0 implies the parity columns are dependent")
}

/// A nonzero codeword of minimum weight.
///
/// Small dimensions are enumerated directly; otherwise the dependency search
/// runs first, and Gray-code enumeration is the fallback while the dimension
/// stays within [`MAX_ENUMERATION_DIM`].
pub fn minimum_weight_codeword(code: &LinearCode) -> Result<BitVector, AnalysisError> {
    let k = code.k();
    if k == 0 {
        return Err(AnalysisError::NoNonzeroCodeword);
    }
    if k <= 20 {
        return min_codeword_by_enumeration(code);
    }
    match min_codeword_by_dependency(code, DEPENDENCY_BUDGET) {
        Err(AnalysisError::BudgetExceeded(_)) if k <= MAX_ENUMERATION_DIM => {
            min_codeword_by_enumeration(code)
        }
        other => other,
    }
}

pub fn minimum_distance(code: &LinearCode) -> Result<usize, AnalysisError> {
    minimum_weight_codeword(code).map(|c| c.weight())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_direct_product, build_reduced_parity, build_simplex};

    /// Brute force over all 2^n words.
    fn brute_distance(code: &LinearCode) -> usize {
        let n = code.n();
        (1u64..(1 << n))
            .filter_map(|x| {
                let v = BitVector::from_support(n, (0..n).filter(|i| (x >> i) & 1 == 1));
                code.parity()
                    .mat_vec_mul(&v)
                    .unwrap()
                    .is_zero()
                    .then(|| v.weight())
            })
            .min()
            .unwrap()
    }

    #[test]
    fn distances_of_small_codes() {
        let c = build_reduced_parity(2, 3).unwrap();
        assert_eq!(brute_distance(&c), 4);
        assert_eq!(minimum_distance(&c).unwrap(), 4);
        assert_eq!(
            min_codeword_by_dependency(&c, DEPENDENCY_BUDGET)
                .unwrap()
                .weight(),
            4
        );

        let c = build_direct_product(2, 2).unwrap();
        assert_eq!(minimum_distance(&c).unwrap(), 4);
        assert_eq!(
            min_codeword_by_dependency(&c, DEPENDENCY_BUDGET)
                .unwrap()
                .weight(),
            4
        );

        let c = build_reduced_parity(1, 1).unwrap();
        assert_eq!(minimum_distance(&c).unwrap(), 2);

        let c = build_simplex(3).unwrap();
        assert_eq!(minimum_distance(&c).unwrap(), 4);
    }

    #[test]
    fn routes_agree_with_brute_force() {
        for (r, t) in [
            (1, 2),
            (2, 2),
            (3, 2),
            (1, 3),
            (2, 3),
            (1, 4),
            (3, 1),
            (4, 1),
        ] {
            let c = build_reduced_parity(r, t).unwrap();
            if c.n() > 16 {
                continue;
            }
            let brute = brute_distance(&c);
            assert_eq!(
                min_codeword_by_enumeration(&c).unwrap().weight(),
                brute,
                "({r},{t})"
            );
            assert_eq!(
                min_codeword_by_dependency(&c, DEPENDENCY_BUDGET)
                    .unwrap()
                    .weight(),
                brute
            );
        }
    }

    #[test]
    fn trivial_code_has_no_distance() {
        let c = LinearCode::from_parity(BitMatrix::identity(3));
        assert_eq!(minimum_distance(&c), Err(AnalysisError::NoNonzeroCodeword));
    }

    #[test]
    fn budget_is_enforced() {
        let c = build_reduced_parity(2, 3).unwrap();
        assert!(matches!(
            min_codeword_by_dependency(&c, 3),
            Err(AnalysisError::BudgetExceeded(_))
        ));
    }

    #[test]
    fn gray_enumeration_visits_every_combination() {
        let basis: BitMatrix = "3 3\n100\n010\n001\n".parse().unwrap();
        let mut seen = Vec::new();
        for_each_combination(&basis, |v| seen.push(v.to_string()));
        seen.sort();
        assert_eq!(seen, ["001", "010", "011", "100", "101", "110", "111"]);
    }
}
