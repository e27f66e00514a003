//! Exact max-plus arithmetic.
//!
//! Scalars live in ℝ_max = ℚ ∪ {ε} with `a ⊕ b = max(a, b)` and
//! `a ⊗ b = a + b`. The bottom element ε (written `-inf` in text) is a
//! separate variant, so it can never leak into rational arithmetic.

use std::fmt;
use std::ops::{Index, Range};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Text spelling of ε, the only one accepted or emitted.
pub const BOTTOM_TOKEN: &str = "-inf";

/// An element of ℝ_max over exact rationals.
///
/// The derived order puts `Bottom` below every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MaxPlus {
    Bottom,
    Finite(BigRational),
}

impl MaxPlus {
    pub fn int(value: i64) -> Self {
        MaxPlus::Finite(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        MaxPlus::Finite(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// The ⊗-unit, 0.
    pub fn unit() -> Self {
        MaxPlus::Finite(BigRational::zero())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, MaxPlus::Bottom)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_bottom()
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, MaxPlus::Finite(r) if r.is_zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            MaxPlus::Bottom => None,
            MaxPlus::Finite(r) => Some(r),
        }
    }

    /// `self ⊕ other`.
    pub fn oplus(&self, other: &MaxPlus) -> MaxPlus {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `self ⊗ other`.
    pub fn otimes(&self, other: &MaxPlus) -> MaxPlus {
        match (self, other) {
            (MaxPlus::Finite(a), MaxPlus::Finite(b)) => MaxPlus::Finite(a + b),
            _ => MaxPlus::Bottom,
        }
    }

    /// The ⊗-inverse `-self`; ε has none.
    pub fn inverse(&self) -> Option<MaxPlus> {
        self.as_rational().map(|r| MaxPlus::Finite(-r))
    }

    /// Largest λ with `λ ⊗ by ≤ self`, or `None` when every λ qualifies
    /// (that is, `by = ε`).
    pub fn residual(&self, by: &MaxPlus) -> Option<MaxPlus> {
        match (self, by) {
            (_, MaxPlus::Bottom) => None,
            (MaxPlus::Bottom, MaxPlus::Finite(_)) => Some(MaxPlus::Bottom),
            (MaxPlus::Finite(x), MaxPlus::Finite(v)) => Some(MaxPlus::Finite(x - v)),
        }
    }

    /// Floating-point view, ε mapping to `-∞`. Diagnostics only.
    pub fn to_f64(&self) -> f64 {
        match self {
            MaxPlus::Bottom => f64::NEG_INFINITY,
            MaxPlus::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<i64> for MaxPlus {
    fn from(value: i64) -> Self {
        MaxPlus::int(value)
    }
}

impl From<BigRational> for MaxPlus {
    fn from(value: BigRational) -> Self {
        MaxPlus::Finite(value)
    }
}

impl fmt::Display for MaxPlus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxPlus::Bottom => f.write_str(BOTTOM_TOKEN),
            MaxPlus::Finite(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            MaxPlus::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let magnitude = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    Some(if text.starts_with('-') {
        -magnitude
    } else {
        magnitude
    })
}

fn parse_rational(text: &str) -> Option<BigRational> {
    if let Some((numer, denom)) = text.split_once('/') {
        if !denom.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let numer = parse_integer(numer)?;
        let denom = parse_integer(denom)?;
        if denom.is_zero() {
            return None;
        }
        return Some(BigRational::new(numer, denom));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole_int = parse_integer(whole)?;
        let frac_int = BigInt::parse_bytes(frac.as_bytes(), 10)?;
        let scale = num_traits::pow(BigInt::from(10u8), frac.len());
        let magnitude = whole_int.abs() * &scale + frac_int;
        let numer = if whole.starts_with('-') {
            -magnitude
        } else {
            magnitude
        };
        return Some(BigRational::new(numer, scale));
    }
    parse_integer(text).map(BigRational::from_integer)
}

impl FromStr for MaxPlus {
    type Err = Error;

    /// Accepts `-inf`, integers, decimals (`-1.25`) and fractions (`3/4`).
    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        if text == BOTTOM_TOKEN {
            return Ok(MaxPlus::Bottom);
        }
        parse_rational(text)
            .map(MaxPlus::Finite)
            .ok_or_else(|| Error::parse("scalar", format!("invalid scalar {text:?}")))
    }
}

/// `|exp(a) − exp(b)|` with `exp(ε) = 0`. Floating point, diagnostics only.
pub fn metric(a: &MaxPlus, b: &MaxPlus) -> f64 {
    (a.to_f64().exp() - b.to_f64().exp()).abs()
}

pub(crate) fn dot_slices(a: &[MaxPlus], b: &[MaxPlus]) -> MaxPlus {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x.otimes(y))
        .max()
        .unwrap_or(MaxPlus::Bottom)
}

/// A vector of ℝ_max^n, ordered componentwise for `≤` and
/// lexicographically by [`Ord`] (used only for canonical sorting).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaxPlusVector(Vec<MaxPlus>);

impl MaxPlusVector {
    pub fn new(entries: Vec<MaxPlus>) -> Self {
        MaxPlusVector(entries)
    }

    /// ε_n.
    pub fn bottom(n: usize) -> Self {
        MaxPlusVector(vec![MaxPlus::Bottom; n])
    }

    /// The i-th canonical basis vector: 0 at `i`, ε elsewhere.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut entries = vec![MaxPlus::Bottom; n];
        entries[i] = MaxPlus::unit();
        MaxPlusVector(entries)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        MaxPlusVector(values.iter().copied().map(MaxPlus::int).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[MaxPlus] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<MaxPlus> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MaxPlus> {
        self.0.iter()
    }

    /// True when every entry is ε.
    pub fn is_bottom(&self) -> bool {
        self.0.iter().all(MaxPlus::is_bottom)
    }

    fn check_len(&self, other: &MaxPlusVector, what: &str) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::dims(what, self.len(), other.len()))
        }
    }

    pub fn oplus(&self, other: &MaxPlusVector) -> Result<MaxPlusVector> {
        self.check_len(other, "vector sum")?;
        Ok(self.oplus_unchecked(other))
    }

    pub(crate) fn oplus_unchecked(&self, other: &MaxPlusVector) -> MaxPlusVector {
        debug_assert_eq!(self.len(), other.len());
        MaxPlusVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.oplus(b))
                .collect(),
        )
    }

    /// `λ · self`.
    pub fn scale(&self, lambda: &MaxPlus) -> MaxPlusVector {
        MaxPlusVector(self.0.iter().map(|x| lambda.otimes(x)).collect())
    }

    /// The scalar product `(self | other)`.
    pub fn dot(&self, other: &MaxPlusVector) -> Result<MaxPlus> {
        self.check_len(other, "scalar product")?;
        Ok(dot_slices(&self.0, &other.0))
    }

    pub(crate) fn dot_unchecked(&self, other: &MaxPlusVector) -> MaxPlus {
        dot_slices(&self.0, &other.0)
    }

    /// Componentwise `self ≤ other`.
    pub fn is_leq(&self, other: &MaxPlusVector) -> Result<bool> {
        self.check_len(other, "vector comparison")?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// First `r` coordinates.
    pub fn truncate(&self, r: usize) -> MaxPlusVector {
        MaxPlusVector(self.0[..r.min(self.len())].to_vec())
    }

    /// Drops the first coordinate.
    pub fn tail(&self) -> MaxPlusVector {
        MaxPlusVector(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn prepend(&self, head: MaxPlus) -> MaxPlusVector {
        let mut entries = Vec::with_capacity(self.len() + 1);
        entries.push(head);
        entries.extend(self.0.iter().cloned());
        MaxPlusVector(entries)
    }
}

impl Index<usize> for MaxPlusVector {
    type Output = MaxPlus;

    fn index(&self, index: usize) -> &MaxPlus {
        &self.0[index]
    }
}

impl<'a> IntoIterator for &'a MaxPlusVector {
    type Item = &'a MaxPlus;
    type IntoIter = std::slice::Iter<'a, MaxPlus>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<MaxPlus> for MaxPlusVector {
    fn from_iter<I: IntoIterator<Item = MaxPlus>>(iter: I) -> Self {
        MaxPlusVector(iter.into_iter().collect())
    }
}

impl fmt::Display for MaxPlusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for MaxPlusVector {
    type Err = Error;

    /// Accepts `[0, -inf, 1]`, `(0,-inf,1)` or `0 -inf 1`.
    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let inner = text
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .or_else(|| text.strip_prefix('(').and_then(|t| t.strip_suffix(')')))
            .unwrap_or(text);
        inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|token| !token.is_empty())
            .enumerate()
            .map(|(i, token)| {
                token.parse::<MaxPlus>().map_err(|_| {
                    Error::parse(
                        format!("vector entry {i}"),
                        format!("invalid scalar {token:?}"),
                    )
                })
            })
            .collect()
    }
}

/// A dense `rows × cols` matrix over ℝ_max, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxPlusMatrix {
    rows: usize,
    cols: usize,
    data: Vec<MaxPlus>,
}

impl MaxPlusMatrix {
    /// The all-ε matrix.
    pub fn bottom(rows: usize, cols: usize) -> Self {
        MaxPlusMatrix {
            rows,
            cols,
            data: vec![MaxPlus::Bottom; rows * cols],
        }
    }

    /// 0 on the diagonal, ε elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::bottom(n, n);
        for i in 0..n {
            m.set(i, i, MaxPlus::unit());
        }
        m
    }

    /// Builds a matrix with `cols` columns from rows; fails on ragged input.
    pub fn from_rows(cols: usize, rows: Vec<Vec<MaxPlus>>) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::dims(format!("matrix row {i}"), cols, row.len()));
            }
            data.extend(row);
        }
        Ok(MaxPlusMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().copied().map(MaxPlus::int).collect())
                .collect(),
        )
    }

    /// The matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[MaxPlusVector]) -> Result<Self> {
        let mut m = Self::bottom(rows, columns.len());
        for (j, column) in columns.iter().enumerate() {
            if column.len() != rows {
                return Err(Error::dims(
                    format!("matrix column {j}"),
                    rows,
                    column.len(),
                ));
            }
            for (i, x) in column.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MaxPlus {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: MaxPlus) {
        self.data[i * self.cols + j] = value;
    }

    /// Copies `block` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &MaxPlusMatrix) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j).clone());
            }
        }
    }

    pub fn row(&self, i: usize) -> &[MaxPlus] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> MaxPlusVector {
        MaxPlusVector::new(self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> MaxPlusVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = MaxPlusVector> + '_ {
        (0..self.rows).map(|i| self.row_vector(i))
    }

    /// The block with the given (half-open, 0-based) row and column ranges.
    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Result<MaxPlusMatrix> {
        if rows.start > rows.end || rows.end > self.rows {
            return Err(Error::dims("submatrix rows", self.rows, rows.end));
        }
        if cols.start > cols.end || cols.end > self.cols {
            return Err(Error::dims("submatrix columns", self.cols, cols.end));
        }
        let mut out = Self::bottom(rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out.set(oi, oj, self.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> MaxPlusMatrix {
        let mut out = Self::bottom(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// `self ⊗ x`.
    pub fn mul_vec(&self, x: &MaxPlusVector) -> Result<MaxPlusVector> {
        if x.len() != self.cols {
            return Err(Error::dims("matrix-vector product", self.cols, x.len()));
        }
        Ok((0..self.rows)
            .map(|i| dot_slices(self.row(i), x.entries()))
            .collect())
    }

    /// `self ⊗ other`.
    pub fn mul(&self, other: &MaxPlusMatrix) -> Result<MaxPlusMatrix> {
        if other.rows != self.cols {
            return Err(Error::dims("matrix product", self.cols, other.rows));
        }
        let mut out = Self::bottom(self.rows, other.cols);
        for j in 0..other.cols {
            let column = other.column(j);
            for i in 0..self.rows {
                out.set(i, j, dot_slices(self.row(i), column.entries()));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for MaxPlusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{}", self.row_vector(i))?;
        }
        Ok(())
    }
}
