//! Checks of the recursive structure of `H(m, t)`.

use crate::combinatorics::{self, choose, enumerate, Subset};
use crate::constructions::{block_split, build_h};
use crate::gf2::BitMatrix;

use super::AnalysisError;

fn require_split(m: usize, t: usize) -> Result<(), AnalysisError> {
    if m > t && t > 1 {
        Ok(())
    } else {
        Err(AnalysisError::InvalidParameters(format!(
            "need m > t > 1, got m={m}, t={t}"
        )))
    }
}

fn require_dependency_range(m: usize, t: usize) -> Result<(), AnalysisError> {
    if t >= 1 && t <= m {
        Ok(())
    } else {
        Err(AnalysisError::InvalidParameters(format!(
            "need 1 <= t <= m, got m={m}, t={t}"
        )))
    }
}

/// True iff `H(m,t) = [H(m-1,t-1), 0; I, H(m-1,t)]`.
pub fn verify_block_decomposition(m: usize, t: usize) -> Result<bool, AnalysisError> {
    require_split(m, t)?;
    check_block_decomposition(&build_h(m, t)?, m, t)
}

/// Block-form check on an arbitrary matrix claimed to be `H(m, t)`.
pub fn check_block_decomposition(h: &BitMatrix, m: usize, t: usize) -> Result<bool, AnalysisError> {
    require_split(m, t)?;
    let (top, left) = block_split(m, t);
    if h.rows() != top + left || h.cols() != left + choose(m - 1, t) {
        return Ok(false);
    }
    let bottom = h.rows() - top;
    let right = h.cols() - left;
    Ok(h.submatrix(0, 0, top, left) == build_h(m - 1, t - 1)?
        && h.submatrix(0, left, top, right).is_zero()
        && h.submatrix(top, 0, bottom, left) == BitMatrix::identity(left)
        && h.submatrix(top, left, bottom, right) == build_h(m - 1, t)?)
}

/// True iff every upper-block row `{1, a..}` of `H(m,t)` equals the XOR of
/// the lower-block rows `{a.., b}` over all `b` outside `{1, a..}`.
///
/// Defined for `1 <= t <= m`; for `t = 1` there are no rows containing 1 and
/// the check is vacuous.
pub fn verify_row_dependency(m: usize, t: usize) -> Result<bool, AnalysisError> {
    require_dependency_range(m, t)?;
    check_row_dependency(&build_h(m, t)?, m, t)
}

/// Row-dependency check on an arbitrary matrix whose rows are indexed by
/// the (t-1)-subsets of `[m]`.
pub fn check_row_dependency(h: &BitMatrix, m: usize, t: usize) -> Result<bool, AnalysisError> {
    require_dependency_range(m, t)?;
    if h.rows() != choose(m, t - 1) {
        return Ok(false);
    }
    if t == 1 {
        return Ok(true);
    }
    for rest in enumerate(m - 1, t - 2) {
        // Shift {a..} from [m-1] onto {2..m}.
        let a: Vec<usize> = rest.elements().iter().map(|x| x + 1).collect();
        let base = Subset::new(m, a).expect("shifted subset is valid");
        let upper = base.with(1);
        let lower_rows = (2..=m)
            .filter(|b| !base.contains(*b))
            .map(|b| combinatorics::rank(m, &base.with(b)).expect("valid subset") as usize);
        let sum = h.row_sum(lower_rows)?;
        let upper_rank = combinatorics::rank(m, &upper)? as usize;
        if sum != h.row(upper_rank) {
            return Ok(false);
        }
    }
    Ok(true)
}
