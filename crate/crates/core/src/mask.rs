//! Masks of Hermite subdivision operators.
//!
//! A mask of order `d` is a finitely supported sequence of `(d+1)x(d+1)`
//! rational matrices. [`MatrixSequence`] is the general finitely supported
//! sequence (the zero sequence included); [`Mask`] adds the operator
//! invariants: `d >= 1` and a nonzero, tightly stored support.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, pow2, ratio, RatMatrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn offset(self) -> i64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];
}

/// Finitely supported sequence of square matrices, stored tight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixSequence {
    dim: usize,
    offset: i64,
    coeffs: Vec<RatMatrix>,
}

impl MatrixSequence {
    /// Builds a sequence whose entry `i` sits at index `offset + i`.
    /// Leading and trailing zero matrices are trimmed.
    pub fn new(dim: usize, offset: i64, coeffs: Vec<RatMatrix>) -> Result<Self> {
        if let Some(bad) = coeffs
            .iter()
            .position(|m| m.rows() != dim || m.cols() != dim)
        {
            return Err(Error::DimensionMismatch(format!(
                "matrix {bad} is {}x{}, expected {dim}x{dim}",
                coeffs[bad].rows(),
                coeffs[bad].cols()
            )));
        }
        let mut seq = Self {
            dim,
            offset,
            coeffs,
        };
        seq.trim();
        Ok(seq)
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            offset: 0,
            coeffs: Vec::new(),
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(RatMatrix::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|m| m.is_zero()).count();
        self.coeffs.drain(..lead);
        self.offset = if self.coeffs.is_empty() {
            0
        } else {
            self.offset + lead as i64
        };
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Tight support `[lo, hi]`, or `None` for the zero sequence.
    pub fn support(&self) -> Option<(i64, i64)> {
        (!self.coeffs.is_empty()).then(|| (self.offset, self.offset + self.coeffs.len() as i64 - 1))
    }

    pub fn get(&self, index: i64) -> Option<&RatMatrix> {
        let i = index - self.offset;
        if i < 0 {
            return None;
        }
        self.coeffs.get(i as usize)
    }

    /// Matrix at `index`, zero outside the support.
    pub fn at(&self, index: i64) -> RatMatrix {
        self.get(index)
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.dim, self.dim))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &RatMatrix)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, m)| (self.offset + i as i64, m))
    }

    pub fn coeffs(&self) -> &[RatMatrix] {
        &self.coeffs
    }

    /// `P_r^(eps) = sum over n of parity eps of n^r A_n`
    pub fn parity_moment(&self, r: u32, parity: Parity) -> RatMatrix {
        let mut acc = RatMatrix::zeros(self.dim, self.dim);
        for (n, m) in self.iter().filter(|(n, _)| Parity::of(*n) == parity) {
            let w = Rational::from_integer(BigInt::from(n).pow(r));
            if !w.is_zero() {
                acc = &acc + &m.scale(&w);
            }
        }
        acc
    }

    /// `M_r = sum_k k^r A_k`
    pub fn moment(&self, r: u32) -> RatMatrix {
        &self.parity_moment(r, Parity::Even) + &self.parity_moment(r, Parity::Odd)
    }

    /// `N_r = sum_k (-1)^k k^r A_k`
    pub fn alt_moment(&self, r: u32) -> RatMatrix {
        &self.parity_moment(r, Parity::Even) - &self.parity_moment(r, Parity::Odd)
    }

    /// `j -> A_{-j}`
    pub fn reflect(&self) -> Self {
        let Some((_, hi)) = self.support() else {
            return self.clone();
        };
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self {
            dim: self.dim,
            offset: -hi,
            coeffs,
        }
    }

    pub fn map<F: FnMut(i64, &RatMatrix) -> RatMatrix>(&self, mut f: F) -> Result<Self> {
        let coeffs = self.iter().map(|(i, m)| f(i, m)).collect();
        Self::new(self.dim, self.offset, coeffs)
    }
}

/// `D = diag(1, 1/2, ..., 2^-d)`
pub fn dilation(d: usize) -> RatMatrix {
    dilation_power(d, 1)
}

/// `D^n` for any integer `n`.
pub fn dilation_power(d: usize, n: i64) -> RatMatrix {
    RatMatrix::diagonal((0..=d as i64).map(|j| pow2(-j * n)).collect())
}

/// `E = diag(1, -1, 1, ...)`, the derivative sign flip under `x -> -x`.
pub fn sign_flip(d: usize) -> RatMatrix {
    RatMatrix::diagonal(
        (0..=d)
            .map(|j| {
                if j % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                }
            })
            .collect(),
    )
}

/// Mask of a subdivision operator of order `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    seq: MatrixSequence,
}

impl Mask {
    pub fn new(d: usize, support_min: i64, coeffs: Vec<RatMatrix>) -> Result<Self> {
        MatrixSequence::new(d + 1, support_min, coeffs).and_then(Self::try_from)
    }

    /// Order `d` (matrices are `(d+1)x(d+1)`).
    pub fn d(&self) -> usize {
        self.seq.dim - 1
    }

    pub fn support(&self) -> (i64, i64) {
        self.seq.support().expect("masks are nonzero")
    }

    pub fn support_min(&self) -> i64 {
        self.support().0
    }

    pub fn sequence(&self) -> &MatrixSequence {
        &self.seq
    }

    pub fn into_sequence(self) -> MatrixSequence {
        self.seq
    }

    pub fn get(&self, index: i64) -> Option<&RatMatrix> {
        self.seq.get(index)
    }

    pub fn at(&self, index: i64) -> RatMatrix {
        self.seq.at(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &RatMatrix)> + '_ {
        self.seq.iter()
    }

    pub fn parity_moment(&self, r: u32, parity: Parity) -> RatMatrix {
        self.seq.parity_moment(r, parity)
    }

    pub fn moment(&self, r: u32) -> RatMatrix {
        self.seq.moment(r)
    }

    pub fn alt_moment(&self, r: u32) -> RatMatrix {
        self.seq.alt_moment(r)
    }

    /// `A_0 = D` and every other even-index matrix vanishes.
    pub fn is_interpolatory(&self) -> bool {
        self.iter().filter(|(n, _)| n % 2 == 0).all(|(n, m)| {
            if n == 0 {
                *m == dilation(self.d())
            } else {
                m.is_zero()
            }
        }) && self.get(0).is_some()
    }

    /// `A_{-j} = E A_j E` for every `j`.
    pub fn is_symmetric(&self) -> bool {
        let e = sign_flip(self.d());
        let (lo, hi) = self.support();
        lo == -hi && self.iter().all(|(j, m)| self.at(-j) == &(&e * m) * &e)
    }

    pub fn reflect(&self) -> Self {
        Self {
            seq: self.seq.reflect(),
        }
    }

    pub fn to_json(&self) -> String {
        serialize_mask(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_mask(text.as_bytes())
    }
}

impl TryFrom<MatrixSequence> for Mask {
    type Error = Error;

    fn try_from(seq: MatrixSequence) -> Result<Self> {
        if seq.dim < 2 {
            return Err(Error::InvalidMask(format!(
                "matrices must be at least 2x2 (d >= 1), got {}x{}",
                seq.dim, seq.dim
            )));
        }
        if seq.is_zero() {
            return Err(Error::InvalidMask("support is entirely zero".into()));
        }
        Ok(Self { seq })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaskFile {
    d: usize,
    support_min: i64,
    coefficients: Vec<Vec<Vec<String>>>,
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::MaskParse {
        location: location.into(),
        message: message.into(),
    }
}

/// Reads a mask from its JSON interchange form.
pub fn parse_mask(text: &[u8]) -> Result<Mask> {
    let file: MaskFile = serde_json::from_slice(text).map_err(|e| {
        let location = format!("line {} column {}", e.line(), e.column());
        let message = e.to_string();
        let message = message
            .strip_suffix(&format!(" at {location}"))
            .unwrap_or(&message)
            .to_string();
        parse_error(location, message)
    })?;
    if file.d == 0 {
        return Err(parse_error("d", "order d must be at least 1"));
    }
    if file.coefficients.is_empty() {
        return Err(parse_error("coefficients", "no coefficient matrices"));
    }
    let n = file.d + 1;
    let mut matrices = Vec::with_capacity(file.coefficients.len());
    for (i, rows) in file.coefficients.iter().enumerate() {
        if rows.len() != n {
            return Err(parse_error(
                format!("coefficients[{i}]"),
                format!("expected {n} rows for d = {}, found {}", file.d, rows.len()),
            ));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(parse_error(
                    format!("coefficients[{i}][{r}]"),
                    format!("expected {n} entries, found {}", row.len()),
                ));
            }
            for (c, text) in row.iter().enumerate() {
                let v = parse_rational(text).map_err(|e| {
                    parse_error(format!("coefficients[{i}][{r}][{c}]"), e.to_string())
                })?;
                entries.push(v);
            }
        }
        matrices.push(RatMatrix::new(n, n, entries)?);
    }
    let seq = MatrixSequence::new(n, file.support_min, matrices)?;
    if seq.is_zero() {
        return Err(parse_error("coefficients", "support is entirely zero"));
    }
    Mask::try_from(seq)
}

/// Canonical JSON form: `{"d": 1, "support_min": -2, "coefficients": [[["1/128","7/256"],["0","1/16"]], ...]}`.
pub fn serialize_mask(mask: &Mask) -> String {
    let matrices: Vec<String> = mask
        .seq
        .coeffs
        .iter()
        .map(|m| {
            let rows: Vec<String> = (0..m.rows())
                .map(|r| {
                    let cells: Vec<String> = m
                        .row(r)
                        .iter()
                        .map(|v| format!("\"{}\"", format_rational(v)))
                        .collect();
                    format!("[{}]", cells.join(","))
                })
                .collect();
            format!("[{}]", rows.join(","))
        })
        .collect();
    format!(
        "{{\"d\": {}, \"support_min\": {}, \"coefficients\": [{}]}}",
        mask.d(),
        mask.support_min(),
        matrices.join(", ")
    )
}

pub const CATALOG_NAMES: [&str; 2] = ["han05_a1", "han05_a2"];

fn m2(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> RatMatrix {
    RatMatrix::new(
        2,
        2,
        vec![
            ratio(a.0, a.1),
            ratio(b.0, b.1),
            ratio(c.0, c.1),
            ratio(d.0, d.1),
        ],
    )
    .expect("2x2")
}

/// Built-in masks, listed at indices -2..=2.
pub fn catalog(name: &str) -> Result<Mask> {
    let coeffs = match name {
        "han05_a1" => vec![
            m2((1, 128), (7, 256), (0, 1), (1, 16)),
            m2((1, 2), (-1, 16), (15, 16), (-7, 32)),
            m2((63, 64), (0, 1), (0, 1), (3, 8)),
            m2((1, 2), (1, 16), (-15, 16), (-7, 32)),
            m2((1, 128), (-7, 256), (0, 1), (1, 16)),
        ],
        "han05_a2" => vec![
            m2((7, 96), (-25, 1344), (77, 384), (-19, 384)),
            m2((1, 2), (-5, 56), (7, 12), (-1, 24)),
            m2((41, 48), (0, 1), (0, 1), (19, 96)),
            m2((1, 2), (5, 56), (-7, 12), (-1, 24)),
            m2((7, 96), (25, 1344), (-77, 384), (-19, 384)),
        ],
        _ => {
            return Err(Error::UnknownCatalogMask {
                name: name.to_string(),
                available: CATALOG_NAMES.join(", "),
            })
        }
    };
    Mask::new(1, -2, coeffs)
}
