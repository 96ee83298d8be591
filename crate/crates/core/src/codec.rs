//! Systematic encoding and erasure decoding.
//!
//! Repair first peels erasures through certified repair groups, one group
//! XOR per recovered coordinate; Gaussian elimination on the parity checks
//! is the fallback and the reference decoder.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::analysis::AvailabilityCertificate;
use crate::constructions::{Generator, LinearCode};
use crate::gf2::{free_columns, BitMatrix, BitVector, Gf2Error};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("erasure pattern is ambiguous: {free} degrees of freedom remain")]
    Ambiguous { free: usize },
    #[error("received values violate the parity checks (data corruption)")]
    Inconsistent,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("requested {requested} read sets but at most {max} exist")]
    TooManyReadSets { requested: usize, max: usize },
    #[error("coordinate {0} out of range")]
    CoordinateOutOfRange(usize),
    #[error("invalid received word: {0}")]
    Parse(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Systematic generator whose information positions are the non-pivot
/// columns of the canonical RREF of the parity-check matrix.
pub fn systematize(code: &LinearCode) -> Generator {
    let (_, pivots) = code.parity().rref();
    Generator {
        matrix: code.parity().nullspace_basis(),
        info_positions: free_columns(code.n(), &pivots),
    }
}

/// `message · generator`.
pub fn encode(generator: &BitMatrix, message: &BitVector) -> Result<BitVector, CodecError> {
    if message.len() != generator.rows() {
        return Err(CodecError::LengthMismatch {
            expected: generator.rows(),
            actual: message.len(),
        });
    }
    Ok(generator.vec_mat_mul(message)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    n: usize,
    erased: BTreeSet<usize>,
}

impl ErasurePattern {
    pub fn new(n: usize, erased: impl IntoIterator<Item = usize>) -> Result<Self, CodecError> {
        let erased: BTreeSet<usize> = erased.into_iter().collect();
        if let Some(&bad) = erased.iter().find(|&&i| i >= n) {
            return Err(CodecError::CoordinateOutOfRange(bad));
        }
        Ok(ErasurePattern { n, erased })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn erased(&self) -> &BTreeSet<usize> {
        &self.erased
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }
}

/// A codeword with some positions marked as erased (`None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivedWord {
    values: Vec<Option<bool>>,
}

impl ReceivedWord {
    pub fn new(values: Vec<Option<bool>>) -> Self {
        ReceivedWord { values }
    }

    pub fn erase(codeword: &BitVector, pattern: &ErasurePattern) -> Result<Self, CodecError> {
        if codeword.len() != pattern.n() {
            return Err(CodecError::LengthMismatch {
                expected: pattern.n(),
                actual: codeword.len(),
            });
        }
        let values = (0..codeword.len())
            .map(|i| (!pattern.erased.contains(&i)).then(|| codeword.get(i)))
            .collect();
        Ok(ReceivedWord { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.values[i]
    }

    pub fn erased_positions(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i].is_none())
            .collect()
    }

    pub fn pattern(&self) -> ErasurePattern {
        ErasurePattern {
            n: self.len(),
            erased: self.erased_positions().into_iter().collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Known values with erasures read as zero.
    pub fn known_part(&self) -> BitVector {
        BitVector::from_support(
            self.len(),
            (0..self.len()).filter(|&i| self.values[i] == Some(true)),
        )
    }

    pub fn to_codeword(&self) -> Option<BitVector> {
        self.is_complete().then(|| self.known_part())
    }
}

/// `{0,1,?}` string, `?` marking an erasure.
impl fmt::Display for ReceivedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            f.write_str(match v {
                Some(false) => "0",
                Some(true) => "1",
                None => "?",
            })?;
        }
        Ok(())
    }
}

impl FromStr for ReceivedWord {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '?' => Ok(None),
                other => Err(CodecError::Parse(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ReceivedWord::new)
    }
}

/// Order in which erased coordinates, and their repair groups, are tried
/// within a peeling round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeelOrder {
    #[default]
    Ascending,
    Descending,
}

/// One recovered coordinate: which group served it and in which round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairStep {
    pub round: usize,
    pub coordinate: usize,
    pub group: Vec<usize>,
    pub value: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelOutcome {
    pub word: ReceivedWord,
    pub rounds: usize,
    pub steps: Vec<RepairStep>,
}

pub fn peel_decode(cert: &AvailabilityCertificate, word: &ReceivedWord) -> PeelOutcome {
    peel_decode_with_order(cert, word, PeelOrder::Ascending)
}

/// Repeatedly restores each erased coordinate that has a fully known
/// repair group. Each round reads only values known when the round
/// started. `rounds` counts rounds that recovered at least one coordinate.
pub fn peel_decode_with_order(
    cert: &AvailabilityCertificate,
    word: &ReceivedWord,
    order: PeelOrder,
) -> PeelOutcome {
    assert_eq!(cert.n(), word.len(), "certificate and word lengths differ");
    let mut current = word.clone();
    let mut rounds = 0;
    let mut steps = Vec::new();
    loop {
        let mut erased = current.erased_positions();
        if order == PeelOrder::Descending {
            erased.reverse();
        }
        let snapshot = current.values.clone();
        let mut progressed = false;
        for i in erased {
            let known = |g: &&Vec<usize>| g.iter().all(|&c| snapshot[c].is_some());
            let usable = match order {
                PeelOrder::Ascending => cert.groups(i).iter().find(known),
                PeelOrder::Descending => cert.groups(i).iter().rev().find(known),
            };
            if let Some(group) = usable {
                let value = group.iter().fold(false, |acc, &c| {
                    acc ^ snapshot[c].expect("group is fully known")
                });
                current.values[i] = Some(value);
                steps.push(RepairStep {
                    round: rounds + 1,
                    coordinate: i,
                    group: group.clone(),
                    value,
                });
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
        rounds += 1;
    }
    PeelOutcome {
        word: current,
        rounds,
        steps,
    }
}

/// Solves the parity checks for the erased positions. Succeeds only when
/// the solution is unique.
pub fn ge_decode(code: &LinearCode, word: &ReceivedWord) -> Result<BitVector, CodecError> {
    let n = code.n();
    if word.len() != n {
        return Err(CodecError::LengthMismatch {
            expected: n,
            actual: word.len(),
        });
    }
    let erased = word.erased_positions();
    let known = word.known_part();
    let syndrome = code.parity().mat_vec_mul(&known)?;
    // [H_E | s] with H_E x_E = s.
    let unknowns = code.parity().select_columns(&erased);
    let rhs = BitMatrix::from_rows(syndrome.len(), &[syndrome])?.transpose();
    let augmented = unknowns.hconcat(&rhs)?;
    let (reduced, pivots) = augmented.rref();
    if pivots.last() == Some(&erased.len()) {
        return Err(CodecError::Inconsistent);
    }
    if pivots.len() < erased.len() {
        return Err(CodecError::Ambiguous {
            free: erased.len() - pivots.len(),
        });
    }
    let mut out = known;
    for (row, &p) in pivots.iter().enumerate() {
        if reduced.get(row, erased.len()) {
            out.set(erased[p], true);
        }
    }
    Ok(out)
}

/// Up to `count` pairwise disjoint coordinate sets that can each serve a
/// read of `coordinate`: the coordinate itself, then its repair groups.
pub fn plan_parallel_reads(
    cert: &AvailabilityCertificate,
    coordinate: usize,
    count: usize,
) -> Result<Vec<Vec<usize>>, CodecError> {
    if coordinate >= cert.n() {
        return Err(CodecError::CoordinateOutOfRange(coordinate));
    }
    let max = cert.availability() + 1;
    if count > max {
        return Err(CodecError::TooManyReadSets {
            requested: count,
            max,
        });
    }
    Ok(std::iter::once(vec![coordinate])
        .chain(cert.groups(coordinate).iter().cloned())
        .take(count)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{certify_structural, minimum_weight_codeword};
    use crate::constructions::{build_reduced_parity, LinearCode};

    #[test]
    fn systematize_reduced_parity() {
        let code = build_reduced_parity(2, 3).unwrap();
        let g = systematize(&code);
        assert_eq!(g.info_positions, vec![6, 7, 8, 9]);
        let right = code.parity().submatrix(0, 6, 6, 4);
        assert_eq!(g.matrix.submatrix(0, 0, 4, 6), right.transpose());
        assert_eq!(g.matrix.submatrix(0, 6, 4, 4), BitMatrix::identity(4));
        assert!(code.parity().mul_transpose(&g.matrix).unwrap().is_zero());
    }

    #[test]
    fn systematize_degenerate() {
        let g = systematize(&LinearCode::from_parity(BitMatrix::identity(4)));
        assert_eq!((g.matrix.rows(), g.matrix.cols()), (0, 4));
        assert!(g.info_positions.is_empty());

        let g = systematize(&LinearCode::from_parity(BitMatrix::ones(1, 4)));
        assert_eq!(g.info_positions, vec![1, 2, 3]);
        assert_eq!(g.matrix.to_string(), "3 4\n1100\n1010\n1001\n");
    }

    #[test]
    fn encode_basics() {
        let code = build_reduced_parity(2, 2).unwrap();
        let g = systematize(&code).matrix;
        assert!(encode(&g, &BitVector::zeros(3)).unwrap().is_zero());
        for i in 0..3 {
            let unit = BitVector::from_support(3, [i]);
            assert_eq!(encode(&g, &unit).unwrap(), g.row(i));
        }
        assert!(encode(&g, &BitVector::zeros(2)).is_err());
        let mut weights = Vec::new();
        for m in 0u32..8 {
            let msg = BitVector::from_support(3, (0..3).filter(|i| (m >> i) & 1 == 1));
            let c = encode(&g, &msg).unwrap();
            assert!(code.parity().mat_vec_mul(&c).unwrap().is_zero());
            weights.push(c.weight());
        }
        assert!(weights.iter().all(|&w| w == 0 || w >= 3));
    }

    #[test]
    fn received_word_format() {
        let w: ReceivedWord = "01?1".parse().unwrap();
        assert_eq!(w.erased_positions(), vec![2]);
        assert_eq!(w.to_string(), "01?1");
        assert!("01x".parse::<ReceivedWord>().is_err());
    }

    #[test]
    fn peel_single_erasure_one_round() {
        let code = build_reduced_parity(2, 3).unwrap();
        let cert = certify_structural(5, 3).unwrap();
        let g = systematize(&code).matrix;
        let c = encode(&g, &"1011".parse().unwrap()).unwrap();
        for i in 0..10 {
            let w = ReceivedWord::erase(&c, &ErasurePattern::new(10, [i]).unwrap()).unwrap();
            let out = peel_decode(&cert, &w);
            assert_eq!(out.rounds, 1);
            assert_eq!(out.word.to_codeword().unwrap(), c);
        }
    }

    #[test]
    fn min_weight_support_is_ambiguous() {
        let code = build_reduced_parity(2, 3).unwrap();
        let cert = certify_structural(5, 3).unwrap();
        let support = minimum_weight_codeword(&code).unwrap().support();
        let zero = BitVector::zeros(10);
        let w = ReceivedWord::erase(&zero, &ErasurePattern::new(10, support).unwrap()).unwrap();
        assert_eq!(ge_decode(&code, &w), Err(CodecError::Ambiguous { free: 1 }));
        assert!(!peel_decode(&cert, &w).word.is_complete());
    }

    #[test]
    fn ge_decode_cases() {
        let code = build_reduced_parity(2, 2).unwrap();
        let g = systematize(&code).matrix;
        let c = encode(&g, &"110".parse().unwrap()).unwrap();
        let w = ReceivedWord::erase(&c, &ErasurePattern::new(6, []).unwrap()).unwrap();
        assert_eq!(ge_decode(&code, &w).unwrap(), c);
        let w = ReceivedWord::erase(&c, &ErasurePattern::new(6, [0, 4]).unwrap()).unwrap();
        assert_eq!(ge_decode(&code, &w).unwrap(), c);
        let mut bad = c.clone();
        bad.flip(1);
        let w = ReceivedWord::erase(&bad, &ErasurePattern::new(6, [0]).unwrap()).unwrap();
        // One erasure plus a flipped known bit: two checks through it disagree.
        assert_eq!(ge_decode(&code, &w), Err(CodecError::Inconsistent));
    }

    #[test]
    fn parallel_read_plans() {
        let cert = certify_structural(5, 3).unwrap();
        assert_eq!(plan_parallel_reads(&cert, 4, 1).unwrap(), vec![vec![4]]);
        let plan = plan_parallel_reads(&cert, 0, 4).unwrap();
        assert_eq!(plan, vec![vec![0], vec![1, 2], vec![3, 4], vec![6, 7]]);
        assert!(matches!(
            plan_parallel_reads(&cert, 0, 5),
            Err(CodecError::TooManyReadSets {
                requested: 5,
                max: 4
            })
        ));
        assert!(plan_parallel_reads(&cert, 10, 1).is_err());
    }
}
