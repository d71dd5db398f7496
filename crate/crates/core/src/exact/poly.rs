use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{format_rational, inv_factorial, Rational};

/// Dense univariate polynomial over the rationals, lowest degree first.
/// Trailing zeros are always trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn monomial(power: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    /// `(x + shift)^k / k!`
    pub fn shifted_monomial(shift: &Rational, k: usize) -> Self {
        Self::monomial(k, inv_factorial(k)).compose_affine(&Rational::one(), shift)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derive(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn derive_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derive())
    }

    /// `x -> p(a x + b)`
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Self {
        let inner = Self::new(vec![b.clone(), a.clone()]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * &inner) + &Self::constant(c.clone())
        })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

pub fn poly_eval(p: &RatPoly, x: &Rational) -> Rational {
    p.eval(x)
}

pub fn poly_derive(p: &RatPoly) -> RatPoly {
    p.derive()
}

pub fn poly_compose_affine(p: &RatPoly, a: &Rational, b: &Rational) -> RatPoly {
    p.compose_affine(a, b)
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = format_rational(c);
            let (sign, mag) = match text.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", text),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.as_str()) {
                (0, m) => write!(f, "{m}")?,
                (1, "1") => write!(f, "x")?,
                (1, m) => write!(f, "{m}*x")?,
                (_, "1") => write!(f, "x^{i}")?,
                (_, m) => write!(f, "{m}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};

    fn p(c: &[(i64, i64)]) -> RatPoly {
        RatPoly::new(c.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn eval_examples() {
        let sp = p(&[(-1, 12), (0, 1), (1, 2)]);
        assert_eq!(poly_eval(&sp, &int(1)), ratio(5, 12));
        assert_eq!(poly_eval(&RatPoly::zero(), &ratio(3, 7)), int(0));
        let tau = ratio(-2, 9);
        assert_eq!(poly_eval(&RatPoly::x(), &tau), tau);
    }

    #[test]
    fn derive_examples() {
        let cubic = RatPoly::monomial(3, ratio(1, 6));
        assert_eq!(poly_derive(&cubic), p(&[(0, 1), (0, 1), (1, 2)]));
        assert!(poly_derive(&RatPoly::constant(int(4))).is_zero());
        let sp = p(&[(-1, 12), (0, 1), (1, 2)]);
        assert_eq!(sp.derive_n(2), RatPoly::constant(int(1)));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(
            poly_compose_affine(&RatPoly::x(), &int(2), &int(1)),
            p(&[(1, 1), (2, 1)])
        );
        let tau = ratio(3, 5);
        let half_sq = RatPoly::monomial(2, ratio(1, 2));
        let expected = RatPoly::new(vec![&tau * &tau / int(2), tau.clone(), ratio(1, 2)]);
        assert_eq!(poly_compose_affine(&half_sq, &int(1), &tau), expected);
        let sp = p(&[(-1, 12), (0, 1), (1, 2)]);
        assert_eq!(
            poly_compose_affine(&sp, &int(2), &int(0)),
            p(&[(-1, 12), (0, 1), (2, 1)])
        );
    }

    #[test]
    fn trimming_and_display() {
        let q = RatPoly::new(vec![int(1), int(0), int(0)]);
        assert_eq!(q.degree(), Some(0));
        assert_eq!(RatPoly::zero().degree(), None);
        assert_eq!(p(&[(-1, 12), (0, 1), (1, 2)]).to_string(), "1/2*x^2 - 1/12");
        assert_eq!(
            RatPoly::shifted_monomial(&ratio(-1, 2), 1).to_string(),
            "x - 1/2"
        );
    }
}
