//! Certification, exact parameters, recursive structure checks and bound comparisons.

mod bounds;
mod certificate;
mod distance;
mod structure;

use thiserror::Error;

use crate::constructions::{ConstructionError, LinearCode};
use crate::gf2::Gf2Error;

pub use bounds::{
    construction_rate, construction_rate_at_simplex_params, direct_product_rate, fraction,
    prakash_bound, ratio, simplex_rate, song_bound, tamo_distance_bound, tamo_rate_bound,
    to_decimal, Rational,
};
pub use certificate::{
    certify_search, certify_structural, low_weight_dual_supports, AvailabilityCertificate,
    MAX_DUAL_ENUMERATION_DIM,
};
pub use distance::{
    for_each_combination, min_codeword_by_dependency, min_codeword_by_enumeration,
    minimum_distance, minimum_weight_codeword, DEPENDENCY_BUDGET, MAX_ENUMERATION_DIM,
};
pub use structure::{
    check_block_decomposition, check_row_dependency, verify_block_decomposition,
    verify_row_dependency,
};

/// Significant digits used for decimal columns.
pub const DECIMAL_DIGITS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("code has no nonzero codeword")]
    NoNonzeroCodeword,
    #[error("no availability certificate: coordinate {coordinate} cannot be covered")]
    NoCertificate { coordinate: usize },
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("structural property violated: {0}")]
    StructuralViolation(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

impl From<crate::combinatorics::CombinatoricsError> for AnalysisError {
    fn from(e: crate::combinatorics::CombinatoricsError) -> Self {
        AnalysisError::Construction(e.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeProfile {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub r: usize,
    pub t: usize,
    pub rate: Rational,
    pub tamo_rate_bound: Rational,
    pub tamo_distance_bound: i128,
    pub song_bound: Rational,
}

impl CodeProfile {
    pub const CSV_HEADER: &'static str =
        "n,k,d,r,t,rate,tamo_rate_bound,tamo_distance_bound,song_bound,rate_decimal,tamo_rate_bound_decimal,song_bound_decimal";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.d,
            self.r,
            self.t,
            fraction(&self.rate),
            fraction(&self.tamo_rate_bound),
            self.tamo_distance_bound,
            fraction(&self.song_bound),
            to_decimal(&self.rate, DECIMAL_DIGITS),
            to_decimal(&self.tamo_rate_bound, DECIMAL_DIGITS),
            to_decimal(&self.song_bound, DECIMAL_DIGITS),
        )
    }
}

/// Measures `(n, k, d)`, certifies locality `r` and availability `t`, and
/// evaluates the comparison bounds.
pub fn profile(code: &LinearCode, r: usize, t: usize) -> Result<CodeProfile, AnalysisError> {
    let d = minimum_distance(code)?;
    let certificate = certify_search(code, r, t)?;
    certificate.validate(code)?;
    let (n, k) = (code.n(), code.k());
    Ok(CodeProfile {
        n,
        k,
        d,
        r,
        t,
        rate: ratio(k, n),
        tamo_rate_bound: tamo_rate_bound(r, t),
        tamo_distance_bound: tamo_distance_bound(n, k, r, t)?,
        song_bound: song_bound(r, t + 1)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateRow {
    pub t: usize,
    pub construction_rate: Rational,
    pub direct_product_rate: Rational,
    pub tamo_bound: Rational,
}

pub const RATE_CSV_HEADER: &str = "t,construction_rate,direct_product_rate,tamo_bound,construction_rate_decimal,direct_product_rate_decimal,tamo_bound_decimal";

impl RateRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.t,
            fraction(&self.construction_rate),
            fraction(&self.direct_product_rate),
            fraction(&self.tamo_bound),
            to_decimal(&self.construction_rate, DECIMAL_DIGITS),
            to_decimal(&self.direct_product_rate, DECIMAL_DIGITS),
            to_decimal(&self.tamo_bound, DECIMAL_DIGITS),
        )
    }
}

pub fn rate_table(r: usize, t_max: usize) -> Result<Vec<RateRow>, AnalysisError> {
    if r == 0 || t_max == 0 {
        return Err(AnalysisError::InvalidParameters(format!(
            "need r >= 1 and t_max >= 1, got r={r}, t_max={t_max}"
        )));
    }
    Ok((1..=t_max)
        .map(|t| RateRow {
            t,
            construction_rate: construction_rate(r, t),
            direct_product_rate: direct_product_rate(r, t),
            tamo_bound: tamo_rate_bound(r, t),
        })
        .collect())
}

/// Header plus one line per row, each ending in `\n`.
pub fn rate_table_csv(rows: &[RateRow]) -> String {
    let mut out = String::from(RATE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_row());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_direct_product, build_reduced_parity, build_simplex};

    #[test]
    fn profiles_of_table_rows() {
        let p = profile(&build_reduced_parity(2, 3).unwrap(), 2, 3).unwrap();
        assert_eq!((p.n, p.k, p.d), (10, 4, 4));
        assert_eq!(p.rate, ratio(2, 5));
        assert_eq!(p.song_bound, p.rate);
        assert_eq!(p.tamo_distance_bound, 6);

        let p = profile(&build_direct_product(2, 2).unwrap(), 2, 2).unwrap();
        assert_eq!((p.n, p.k, p.d), (9, 4, 4));
        assert_eq!(p.rate, ratio(4, 9));

        let p = profile(&build_simplex(3).unwrap(), 2, 3).unwrap();
        assert_eq!((p.n, p.k, p.d, p.r, p.t), (7, 3, 4, 2, 3));
        assert_eq!(p.rate, ratio(3, 7));
        assert_eq!(
            p.csv_row(),
            "7,3,4,2,3,3/7,16/35,4,2/5,0.428571,0.457143,0.400000"
        );
    }

    #[test]
    fn rate_table_ordering() {
        for r in [2, 10] {
            for row in rate_table(r, 16).unwrap() {
                assert!(row.direct_product_rate <= row.construction_rate);
                assert!(row.construction_rate <= row.tamo_bound);
                if row.t > 1 {
                    assert!(row.direct_product_rate < row.construction_rate);
                }
            }
        }
        let one = rate_table(3, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].construction_rate, one[0].direct_product_rate);
        assert!(rate_table(0, 3).is_err());
    }

    #[test]
    fn rate_csv_shape() {
        let csv = rate_table_csv(&rate_table(10, 2).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], RATE_CSV_HEADER);
        assert_eq!(lines[1], "1,10/11,10/11,10/11,0.909091,0.909091,0.909091");
        assert_eq!(lines[2], "2,5/6,100/121,200/231,0.833333,0.826446,0.865801");
    }
}
