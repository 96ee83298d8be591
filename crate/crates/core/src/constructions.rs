//! Parity-check matrices for the subset-incidence construction and the
//! codes it is compared against (direct product, simplex).

use std::fmt;

use thiserror::Error;

use crate::combinatorics::{self, choose, enumerate};
use crate::gf2::BitMatrix;

/// Largest matrix (in entries) any builder here will allocate.
const MAX_ENTRIES: u128 = 1 << 34;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("generator rejected: {0}")]
    InvalidGenerator(String),
    #[error(transparent)]
    Combinatorics(#[from] combinatorics::CombinatoricsError),
}

/// Parameters of the construction with locality `r` and availability `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub r: usize,
    pub t: usize,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub d_claimed: usize,
}

impl CodeParams {
    pub fn new(r: usize, t: usize) -> Result<Self, ConstructionError> {
        if r == 0 || t == 0 {
            return Err(ConstructionError::InvalidParameters(format!(
                "r and t must be positive (r={r}, t={t})"
            )));
        }
        let m = r + t;
        let n = to_usize(combinatorics::binomial(m, t)?)?;
        let k = to_usize(combinatorics::binomial(m - 1, t)?)?;
        Ok(CodeParams {
            r,
            t,
            m,
            n,
            k,
            d_claimed: t + 1,
        })
    }

    /// Number of independent parity checks, `C(m-1, t-1)`.
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }
}

fn to_usize(x: u64) -> Result<usize, ConstructionError> {
    usize::try_from(x)
        .map_err(|_| ConstructionError::InvalidParameters(format!("{x} exceeds usize")))
}

fn check_size(rows: u128, cols: u128) -> Result<(), ConstructionError> {
    if rows * cols > MAX_ENTRIES {
        return Err(ConstructionError::InvalidParameters(format!(
            "{rows}x{cols} matrix is too large"
        )));
    }
    Ok(())
}

/// A generator matrix together with the coordinates on which it is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub matrix: BitMatrix,
    /// `info_positions[i]` is the coordinate carrying message bit `i`.
    pub info_positions: Vec<usize>,
}

/// Binary linear code given by a (possibly redundant) parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    parity: BitMatrix,
    parity_rank: usize,
    generator: Option<Generator>,
}

impl LinearCode {
    pub fn from_parity(parity: BitMatrix) -> Self {
        let parity_rank = parity.rank();
        LinearCode {
            parity,
            parity_rank,
            generator: None,
        }
    }

    /// Attaches a generator after checking it spans exactly this code and is
    /// the identity on its information positions.
    pub fn with_generator(mut self, generator: Generator) -> Result<Self, ConstructionError> {
        let g = &generator.matrix;
        if g.cols() != self.n() || g.rows() != self.k() {
            return Err(ConstructionError::InvalidGenerator(format!(
                "shape {}x{} but code is [{}, {}]",
                g.rows(),
                g.cols(),
                self.n(),
                self.k()
            )));
        }
        if generator.info_positions.len() != g.rows() {
            return Err(ConstructionError::InvalidGenerator(
                "one information position per row required".into(),
            ));
        }
        if !g
            .select_columns(&generator.info_positions)
            .eq(&BitMatrix::identity(g.rows()))
        {
            return Err(ConstructionError::InvalidGenerator(
                "not the identity on the information positions".into(),
            ));
        }
        let product = self
            .parity
            .mul_transpose(g)
            .map_err(|e| ConstructionError::InvalidGenerator(e.to_string()))?;
        if !product.is_zero() {
            return Err(ConstructionError::InvalidGenerator(
                "rows are not codewords".into(),
            ));
        }
        self.generator = Some(generator);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.parity.cols()
    }

    pub fn k(&self) -> usize {
        self.n() - self.parity_rank
    }

    pub fn parity(&self) -> &BitMatrix {
        &self.parity
    }

    pub fn parity_rank(&self) -> usize {
        self.parity_rank
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }
}

/// The incidence matrix between (t-1)-subsets (rows) and t-subsets
/// (columns) of `[m]`, both in lexicographic order.
pub fn build_h(m: usize, t: usize) -> Result<BitMatrix, ConstructionError> {
    if t == 0 || t > m {
        return Err(ConstructionError::InvalidParameters(format!(
            "need 1 <= t <= m, got m={m}, t={t}"
        )));
    }
    let rows = combinatorics::binomial(m, t - 1)?;
    let cols = combinatorics::binomial(m, t)?;
    check_size(rows as u128, cols as u128)?;
    let mut h = BitMatrix::zeros(rows as usize, cols as usize);
    for (j, column) in enumerate(m, t).iter().enumerate() {
        for &e in column.elements() {
            let i = combinatorics::rank(m, &column.without(e))?;
            h.set(i as usize, j, true);
        }
    }
    Ok(h)
}

/// The full-rank parity check `(I | H(m-1, t))` with `m = r + t`.
pub fn build_reduced_parity(r: usize, t: usize) -> Result<LinearCode, ConstructionError> {
    let params = CodeParams::new(r, t)?;
    let right = build_h(params.m - 1, t)?;
    let parity = BitMatrix::identity(right.rows())
        .hconcat(&right)
        .expect("row counts agree by construction");
    Ok(LinearCode::from_parity(parity))
}

/// The code whose parity check is the full (redundant) `H(r + t, t)`.
pub fn build_full_parity(r: usize, t: usize) -> Result<LinearCode, ConstructionError> {
    let params = CodeParams::new(r, t)?;
    Ok(LinearCode::from_parity(build_h(params.m, t)?))
}

/// Parity checks of the t-fold product of `(r+1, r)` single-parity-check codes.
///
/// Coordinates are the points of the grid `{0..=r}^t` in row-major order
/// (axis 0 most significant). Rows come axis by axis; within an axis, one
/// row per line, ordered by the line's starting point.
pub fn direct_product_parity(r: usize, t: usize) -> Result<BitMatrix, ConstructionError> {
    if r == 0 || t == 0 {
        return Err(ConstructionError::InvalidParameters(format!(
            "r and t must be positive (r={r}, t={t})"
        )));
    }
    let side = r + 1;
    let n = u32::try_from(t)
        .ok()
        .and_then(|e| side.checked_pow(e))
        .ok_or_else(|| ConstructionError::InvalidParameters(format!("({side})^{t} overflows")))?;
    let lines_per_axis = n / side;
    check_size((t * lines_per_axis) as u128, n as u128)?;
    let mut parity = BitMatrix::zeros(t * lines_per_axis, n);
    let mut row = 0;
    for axis in 0..t {
        let stride = side.pow((t - 1 - axis) as u32);
        for start in (0..n).filter(|p| (p / stride).is_multiple_of(side)) {
            for step in 0..side {
                parity.set(row, start + step * stride, true);
            }
            row += 1;
        }
    }
    Ok(parity)
}

pub fn build_direct_product(r: usize, t: usize) -> Result<LinearCode, ConstructionError> {
    Ok(LinearCode::from_parity(direct_product_parity(r, t)?))
}

/// Generator of the simplex code: every nonzero `m`-bit column, in
/// increasing integer order, with row 0 holding the most significant bit.
pub fn simplex_generator(m: usize) -> Result<Generator, ConstructionError> {
    if !(2..=20).contains(&m) {
        return Err(ConstructionError::InvalidParameters(format!(
            "simplex order must be in 2..=20, got {m}"
        )));
    }
    let n = (1usize << m) - 1;
    let mut g = BitMatrix::zeros(m, n);
    for j in 0..n {
        let value = j + 1;
        for i in 0..m {
            if (value >> (m - 1 - i)) & 1 == 1 {
                g.set(i, j, true);
            }
        }
    }
    let info_positions = (0..m).map(|i| (1usize << (m - 1 - i)) - 1).collect();
    Ok(Generator {
        matrix: g,
        info_positions,
    })
}

pub fn build_simplex(m: usize) -> Result<LinearCode, ConstructionError> {
    let generator = simplex_generator(m)?;
    let parity = generator.matrix.nullspace_basis();
    LinearCode::from_parity(parity).with_generator(generator)
}

/// Code families the toolkit can build, with their locality and availability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFamily {
    Construction { r: usize, t: usize },
    DirectProduct { r: usize, t: usize },
    Simplex { m: usize },
}

impl CodeFamily {
    pub fn build(&self) -> Result<LinearCode, ConstructionError> {
        match *self {
            CodeFamily::Construction { r, t } => build_reduced_parity(r, t),
            CodeFamily::DirectProduct { r, t } => build_direct_product(r, t),
            CodeFamily::Simplex { m } => build_simplex(m),
        }
    }

    pub fn locality(&self) -> usize {
        match *self {
            CodeFamily::Construction { r, .. } | CodeFamily::DirectProduct { r, .. } => r,
            CodeFamily::Simplex { .. } => 2,
        }
    }

    pub fn availability(&self) -> usize {
        match *self {
            CodeFamily::Construction { t, .. } | CodeFamily::DirectProduct { t, .. } => t,
            CodeFamily::Simplex { m } => (1 << (m - 1)) - 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CodeFamily::Construction { .. } => "construction",
            CodeFamily::DirectProduct { .. } => "product",
            CodeFamily::Simplex { .. } => "simplex",
        }
    }
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CodeFamily::Construction { r, t } | CodeFamily::DirectProduct { r, t } => {
                write!(f, "{} r={r} t={t}", self.name())
            }
            CodeFamily::Simplex { m } => write!(f, "simplex m={m}"),
        }
    }
}

/// Outcome of reading a matrix as the incidence matrix of a 1-design
/// (rows are blocks, columns are points).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignReport {
    pub points: usize,
    pub blocks: usize,
    /// Common block size, or `None` if blocks differ in size.
    pub block_size: Option<usize>,
    /// Common number of blocks through each point, or `None` if it varies.
    pub replication: Option<usize>,
    pub max_intersection: usize,
    pub expected_block_size: usize,
    pub expected_replication: usize,
    pub intersection_bound: usize,
    pub passed: bool,
}

fn uniform(mut values: impl Iterator<Item = usize>) -> Option<usize> {
    let first = values.next()?;
    values.all(|v| v == first).then_some(first)
}

pub fn design_check(
    incidence: &BitMatrix,
    lambda_expected: usize,
    block_size_expected: usize,
    intersection_bound: usize,
) -> DesignReport {
    let b = incidence.rows();
    let v = incidence.cols();
    let block_size = uniform((0..b).map(|i| incidence.row_weight(i)));
    let transposed = incidence.transpose();
    let replication = uniform((0..v).map(|j| transposed.row_weight(j)));
    let rows: Vec<_> = (0..b).map(|i| incidence.row(i)).collect();
    let mut max_intersection = 0;
    for i in 0..b {
        for j in i + 1..b {
            let common: usize = rows[i]
                .words()
                .iter()
                .zip(rows[j].words())
                .map(|(x, y)| (x & y).count_ones() as usize)
                .sum();
            max_intersection = max_intersection.max(common);
        }
    }
    let passed = block_size == Some(block_size_expected)
        && replication == Some(lambda_expected)
        && max_intersection <= intersection_bound;
    DesignReport {
        points: v,
        blocks: b,
        block_size,
        replication,
        max_intersection,
        expected_block_size: block_size_expected,
        expected_replication: lambda_expected,
        intersection_bound,
        passed,
    }
}

/// `key=value` lines, one per field.
impl fmt::Display for DesignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<usize>| x.map_or_else(|| "nonuniform".to_string(), |v| v.to_string());
        writeln!(f, "points={}", self.points)?;
        writeln!(f, "blocks={}", self.blocks)?;
        writeln!(f, "block_size={}", opt(self.block_size))?;
        writeln!(f, "replication={}", opt(self.replication))?;
        writeln!(f, "max_intersection={}", self.max_intersection)?;
        writeln!(f, "expected_block_size={}", self.expected_block_size)?;
        writeln!(f, "expected_replication={}", self.expected_replication)?;
        writeln!(f, "intersection_bound={}", self.intersection_bound)?;
        writeln!(f, "pass={}", self.passed)
    }
}

/// Sizes of the four blocks of `H(m, t)` at the split used by its
/// recursive decomposition: `(upper rows, left cols)`.
pub fn block_split(m: usize, t: usize) -> (usize, usize) {
    (choose(m - 1, t - 2), choose(m - 1, t - 1))
}
