use super::matrix::RatMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Power series in one formal variable with matrix coefficients, truncated
/// after `t^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSeries {
    coeffs: Vec<RatMatrix>,
}

impl MatrixSeries {
    pub fn new(coeffs: Vec<RatMatrix>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidArgument(
                "a series needs at least its constant coefficient".into(),
            ));
        };
        let (r, c) = (first.rows(), first.cols());
        if let Some(bad) = coeffs.iter().position(|m| m.rows() != r || m.cols() != c) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient {bad} is {}x{}, expected {r}x{c}",
                coeffs[bad].rows(),
                coeffs[bad].cols()
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RatMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, s: usize) -> &RatMatrix {
        &self.coeffs[s]
    }

    pub fn rows(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.coeffs[0].cols()
    }

    /// `t -> c t` applied to the formal variable.
    pub fn rescale(&self, c: &Rational) -> Self {
        let mut factor = Rational::from_integer(1.into());
        let coeffs = self
            .coeffs
            .iter()
            .map(|m| {
                let out = m.scale(&factor);
                factor *= c;
                out
            })
            .collect();
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatMatrix::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::SeriesTooShort {
                have: self.order(),
                want: order,
            });
        }
        Ok(Self {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }
}

/// Cauchy product of two series, truncated after `t^order`.
pub fn series_mul(a: &MatrixSeries, b: &MatrixSeries, order: usize) -> Result<MatrixSeries> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "series product of {}x{} and {}x{} coefficients",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    for s in [a, b] {
        if s.order() < order {
            return Err(Error::SeriesTooShort {
                have: s.order(),
                want: order,
            });
        }
    }
    let coeffs = (0..=order)
        .map(|n| {
            let mut acc = RatMatrix::zeros(a.rows(), b.cols());
            for s in 0..=n {
                let (x, y) = (a.coeff(s), b.coeff(n - s));
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                acc = &acc + &(x * y);
            }
            acc
        })
        .collect();
    Ok(MatrixSeries { coeffs })
}
