//! De Rham transform of a mask and the matching spectral polynomials.
//!
//! The transformed mask is `D^-1 (A *_2 A)_{2j+1}`: two refinement steps
//! followed by keeping the odd-indexed values. If `S_A` has spectral
//! polynomials `p_k`, the transform has spectral polynomials
//!
//! ```text
//!   pbar_0 = 1,   pbar_k = p_k + sum_{m<k} mu_{k,m} pbar_m
//! ```
//!
//! where `p_k(2x+1) = 2^k p_k(x) + sum_{m<k} lambda_{k,m} pbar_m(x)` and
//! `mu_{k,m} = -lambda_{k,m} 2^{m-k} / (2^k - 2^m)`. For shifted monomials
//! `(x+tau)^k/k!` this yields `(x + (3 tau - 1)/2)^k / k!`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{inv_factorial, pow2, powi, text, RatPoly, Rational};
use crate::mask::{dilation_power, Mask, MatrixSequence};
use crate::operator::conv2;
use crate::spectral::check_shifted_monomial;

/// Transformed mask. The result may be the zero sequence (for example when
/// `A *_2 A` has no odd-indexed terms), so it is returned as a plain sequence;
/// use `Mask::try_from` to get an operator mask.
pub fn derham(mask: &Mask) -> MatrixSequence {
    let sq = conv2(mask.sequence(), mask.sequence()).expect("same order");
    let d_inv = dilation_power(mask.d(), -1);
    let Some((lo, hi)) = sq.support() else {
        return MatrixSequence::zero(mask.d() + 1);
    };
    let first = (lo - 1).div_euclid(2) + ((lo - 1).rem_euclid(2) != 0) as i64;
    let last = (hi - 1).div_euclid(2);
    let coeffs = (first..=last).map(|j| &d_inv * &sq.at(2 * j + 1)).collect();
    MatrixSequence::new(mask.d() + 1, first, coeffs).expect("square")
}

/// [`derham`] as a mask; fails when the transform vanishes.
pub fn derham_mask(mask: &Mask) -> Result<Mask> {
    Mask::try_from(derham(mask))
}

/// `(3 tau - 1) / 2`
pub fn derham_parameter(tau: &Rational) -> Rational {
    (tau * Rational::from_integer(3.into()) - Rational::one()) / Rational::from_integer(2.into())
}

fn check_lower(k: usize, m: usize) -> Result<()> {
    if m >= k {
        return Err(Error::InvalidArgument(format!(
            "need m < k, got m = {m}, k = {k}"
        )));
    }
    Ok(())
}

/// `mu_{k,m} = -lambda_{k,m} 2^{m-k} / (2^k - 2^m)`
pub fn mu_from_lambda(k: usize, m: usize, lambda: &Rational) -> Result<Rational> {
    check_lower(k, m)?;
    let gap = pow2(k as i64) - pow2(m as i64);
    Ok(-(lambda * pow2(m as i64 - k as i64)) / gap)
}

/// Closed forms for shifted monomials:
/// `lambda_{k,m} = (2^k - 2^m) (1-tau)^{k-m} / (k-m)!` and
/// `mu_{k,m} = -2^{m-k} (1-tau)^{k-m} / (k-m)!`.
pub fn lambda_mu(k: usize, m: usize, tau: &Rational) -> Result<(Rational, Rational)> {
    check_lower(k, m)?;
    let base = powi(&(Rational::one() - tau), (k - m) as i64)? * inv_factorial(k - m);
    let lambda = (pow2(k as i64) - pow2(m as i64)) * &base;
    let mu = -(pow2(m as i64 - k as i64) * base);
    Ok((lambda, mu))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeRhamCoefficients {
    pub k: usize,
    #[serde(serialize_with = "text::rational_vec")]
    pub lambda: Vec<Rational>,
    #[serde(serialize_with = "text::rational_vec")]
    pub mu: Vec<Rational>,
}

impl DeRhamCoefficients {
    /// `mu_{k,m} = -lambda_{k,m} 2^{m-k} / (2^k - 2^m)` for every `m < k`.
    pub fn is_consistent(&self) -> bool {
        self.lambda.len() == self.k
            && self.mu.len() == self.k
            && self
                .lambda
                .iter()
                .zip(&self.mu)
                .enumerate()
                .all(|(m, (l, mu))| mu_from_lambda(self.k, m, l).is_ok_and(|v| &v == mu))
    }
}

/// Spectral polynomials of the transform from those of the original
/// operator, together with the expansion coefficients of each step.
pub fn derham_spectral_recursion_with_coefficients(
    p_list: &[RatPoly],
) -> Result<Vec<(RatPoly, DeRhamCoefficients)>> {
    let mut out: Vec<(RatPoly, DeRhamCoefficients)> = Vec::with_capacity(p_list.len());
    for (k, p) in p_list.iter().enumerate() {
        if p.degree() != Some(k) || p.leading() != Some(&inv_factorial(k)) {
            return Err(Error::Normalization(format!(
                "p_{k} must have degree {k} and leading coefficient 1/{k}!, got {p}"
            )));
        }
        if k == 0 {
            if *p != RatPoly::constant(Rational::one()) {
                return Err(Error::Normalization(format!("p_0 must be 1, got {p}")));
            }
            out.push((
                p.clone(),
                DeRhamCoefficients {
                    k: 0,
                    lambda: Vec::new(),
                    mu: Vec::new(),
                },
            ));
            continue;
        }
        // Expand p_k(2x+1) - 2^k p_k(x) in the triangular basis pbar_0..pbar_{k-1}.
        let two = Rational::from_integer(2.into());
        let mut rem = &p.compose_affine(&two, &Rational::one()) - &p.scale(&pow2(k as i64));
        let mut lambda = vec![Rational::zero(); k];
        for m in (0..k).rev() {
            let (basis, _) = &out[m];
            let l = rem.coeff(m) / basis.leading().expect("nonzero basis polynomial");
            rem = &rem - &basis.scale(&l);
            lambda[m] = l;
        }
        debug_assert!(rem.is_zero());
        let mu = lambda
            .iter()
            .enumerate()
            .map(|(m, l)| mu_from_lambda(k, m, l))
            .collect::<Result<Vec<_>>>()?;
        let mut pbar = p.clone();
        for (m, coeff) in mu.iter().enumerate() {
            pbar = &pbar + &out[m].0.scale(coeff);
        }
        out.push((pbar, DeRhamCoefficients { k, lambda, mu }));
    }
    Ok(out)
}

pub fn derham_spectral_recursion(p_list: &[RatPoly]) -> Result<Vec<RatPoly>> {
    Ok(derham_spectral_recursion_with_coefficients(p_list)?
        .into_iter()
        .map(|(p, _)| p)
        .collect())
}

/// Reproduction of degree `<= ell` w.r.t. `tau` carries over to the transform
/// w.r.t. `(3 tau - 1)/2`. Errors if the hypothesis does not hold for `mask`.
pub fn verify_lemma3(mask: &Mask, tau: &Rational, ell: usize) -> Result<bool> {
    if !check_shifted_monomial(mask, tau, ell) {
        return Err(Error::HypothesisUnmet(format!(
            "mask does not satisfy the shifted-monomial spectral condition of order {ell} for tau = {}",
            crate::exact::format_rational(tau)
        )));
    }
    let Ok(transformed) = derham_mask(mask) else {
        return Ok(false);
    };
    Ok(check_shifted_monomial(
        &transformed,
        &derham_parameter(tau),
        ell,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio, RatMatrix};
    use crate::mask::{catalog, dilation};
    use crate::operator::IndexInterval;
    use crate::spectral::synthesize_mask;

    fn a1() -> Mask {
        catalog("han05_a1").unwrap()
    }

    /// Direct double sum `D^-1 sum_m A_{2(j-m)+1} A_m`.
    fn derham_oracle(mask: &Mask, j: i64) -> RatMatrix {
        let (lo, hi) = mask.support();
        let mut acc = RatMatrix::zeros(mask.d() + 1, mask.d() + 1);
        for m in lo..=hi {
            acc = &acc + &(&mask.at(2 * (j - m) + 1) * &mask.at(m));
        }
        &dilation_power(mask.d(), -1) * &acc
    }

    #[test]
    fn transform_matches_double_sum() {
        let a1 = a1();
        let t = derham(&a1);
        let (lo, hi) = t.support().unwrap();
        assert!(lo >= -3 && hi <= 2);
        for j in -6..=6 {
            assert_eq!(t.at(j), derham_oracle(&a1, j), "j = {j}");
        }
    }

    #[test]
    fn delta_dilation_mask_vanishes() {
        let m = Mask::new(1, 0, vec![dilation(1)]).unwrap();
        assert!(derham(&m).is_zero());
        assert!(derham_mask(&m).is_err());
    }

    #[test]
    fn closed_forms() {
        let (l, mu) = lambda_mu(2, 1, &int(0)).unwrap();
        assert_eq!(l, int(2));
        assert_eq!(mu, ratio(-1, 2));
        let (l, mu) = lambda_mu(4, 1, &int(1)).unwrap();
        assert!(l.is_zero() && mu.is_zero());
        assert!(lambda_mu(2, 2, &int(0)).is_err());
        let tau = ratio(-3, 7);
        for k in 1..6 {
            for m in 0..k {
                let (l, mu) = lambda_mu(k, m, &tau).unwrap();
                assert_eq!(mu_from_lambda(k, m, &l).unwrap(), mu);
            }
        }
    }

    #[test]
    fn recursion_on_shifted_monomials() {
        for (tau, expected_shift) in [(int(0), ratio(-1, 2)), (int(1), int(1))] {
            let ps: Vec<RatPoly> = (0..=2)
                .map(|k| RatPoly::shifted_monomial(&tau, k))
                .collect();
            let out = derham_spectral_recursion_with_coefficients(&ps).unwrap();
            for (k, (p, coeffs)) in out.iter().enumerate() {
                assert_eq!(*p, RatPoly::shifted_monomial(&expected_shift, k));
                assert!(coeffs.is_consistent());
                for m in 0..k {
                    assert_eq!(
                        (coeffs.lambda[m].clone(), coeffs.mu[m].clone()),
                        lambda_mu(k, m, &tau).unwrap()
                    );
                }
            }
        }
        let base = derham_spectral_recursion(&[RatPoly::constant(int(1))]).unwrap();
        assert_eq!(base, vec![RatPoly::constant(int(1))]);
    }

    #[test]
    fn recursion_rejects_bad_input() {
        assert!(derham_spectral_recursion(&[RatPoly::constant(int(2))]).is_err());
        assert!(derham_spectral_recursion(&[
            RatPoly::constant(int(1)),
            RatPoly::monomial(1, int(2))
        ])
        .is_err());
    }

    #[test]
    fn lemma3_examples() {
        assert!(verify_lemma3(&a1(), &int(0), 1).unwrap());
        assert!(verify_lemma3(&catalog("han05_a2").unwrap(), &int(0), 1).unwrap());
        let tau = ratio(-1, 2);
        let m = synthesize_mask(1, &tau, 1, IndexInterval::new(0, 1)).unwrap();
        assert_eq!(derham_parameter(&tau), ratio(-5, 4));
        assert!(verify_lemma3(&m, &tau, 1).unwrap());
        assert!(matches!(
            verify_lemma3(&a1(), &int(0), 2),
            Err(Error::HypothesisUnmet(_))
        ));
    }
}
