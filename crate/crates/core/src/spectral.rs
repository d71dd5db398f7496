//! Spectral conditions of a subdivision operator.
//!
//! For a polynomial `p` of degree `k` with leading coefficient `1/k!`, the
//! spectral condition asks `S_A v_p = 2^-k v_p`, where `(v_p)_j` collects
//! `p(j), p'(j), ..., p^(d)(j)`. Restricted to output indices `2j + eps`, both
//! sides are vectors of polynomials in `j`:
//!
//! ```text
//!   sum_i A_{2i+eps} G_p(j - i)   and   2^-k G_p(2j + eps)
//! ```
//!
//! with `G_p(x) = [p(x), ..., p^(d)(x)]`. Conditions are decided by comparing
//! these coefficientwise, so no sampling window is involved. Since both sides
//! are linear in `p` (and in the mask), solving for spectral polynomials or for
//! masks reduces to exact linear systems.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{inv_factorial, pow2, solve_linear, text, RatMatrix, RatPoly, Rational};
use crate::mask::{Mask, Parity};
use crate::operator::{
    forward_window, hermite_iterate, pullback_window, sample_hermite, IndexInterval,
};

/// `x -> [p(x), p'(x), ..., p^(d)(x)]`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVector {
    components: Vec<RatPoly>,
}

impl PolyVector {
    pub fn from_poly(p: &RatPoly, d: usize) -> Self {
        let mut components = Vec::with_capacity(d + 1);
        let mut q = p.clone();
        for _ in 0..=d {
            let next = q.derive();
            components.push(q);
            q = next;
        }
        Self { components }
    }

    pub fn d(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[RatPoly] {
        &self.components
    }

    pub fn eval(&self, x: &Rational) -> Vec<Rational> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// Componentwise `x -> G(a x + b)`. The result is a plain polynomial
    /// vector: its components are no longer derivatives of one another.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Vec<RatPoly> {
        self.components
            .iter()
            .map(|c| c.compose_affine(a, b))
            .collect()
    }
}

/// `j -> (S_A v_p)_{2j+eps}` for both parities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityImage {
    pub even: Vec<RatPoly>,
    pub odd: Vec<RatPoly>,
}

impl ParityImage {
    pub fn get(&self, parity: Parity) -> &[RatPoly] {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    pub fn eval(&self, parity: Parity, j: &Rational) -> Vec<Rational> {
        self.get(parity).iter().map(|c| c.eval(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.even.iter().chain(&self.odd).all(RatPoly::is_zero)
    }
}

fn mat_poly_vec_add(a: &RatMatrix, g: &[RatPoly], acc: &mut [RatPoly]) {
    for (r, out) in acc.iter_mut().enumerate() {
        for (c, gc) in g.iter().enumerate() {
            let w = a.get(r, c);
            if !w.is_zero() && !gc.is_zero() {
                *out = &*out + &gc.scale(w);
            }
        }
    }
}

/// Symbolic action of `S_A` on `v_p`, split by output parity.
pub fn apply_symbolic(mask: &Mask, p: &RatPoly) -> ParityImage {
    let g = PolyVector::from_poly(p, mask.d());
    let mut parts = [
        vec![RatPoly::zero(); mask.d() + 1],
        vec![RatPoly::zero(); mask.d() + 1],
    ];
    for (idx, a) in mask.iter() {
        let parity = Parity::of(idx);
        let i = (idx - parity.offset()) / 2;
        let shifted = g.compose_affine(&Rational::one(), &Rational::from_integer((-i).into()));
        mat_poly_vec_add(a, &shifted, &mut parts[parity.offset() as usize]);
    }
    let [even, odd] = parts;
    ParityImage { even, odd }
}

/// `S_A v_p - 2^-k v_p` per parity.
fn residual(mask: &Mask, p: &RatPoly, k: usize) -> ParityImage {
    let image = apply_symbolic(mask, p);
    let g = PolyVector::from_poly(p, mask.d());
    let scale = pow2(-(k as i64));
    let sub = |lhs: &[RatPoly], parity: Parity| -> Vec<RatPoly> {
        let rhs = g.compose_affine(
            &Rational::from_integer(2.into()),
            &Rational::from_integer(parity.offset().into()),
        );
        lhs.iter()
            .zip(rhs)
            .map(|(l, r)| l - &r.scale(&scale))
            .collect()
    };
    ParityImage {
        even: sub(&image.even, Parity::Even),
        odd: sub(&image.odd, Parity::Odd),
    }
}

/// Coefficients of every component of both parities, each padded to `len`.
fn flatten(image: &ParityImage, len: usize) -> Vec<Rational> {
    image
        .even
        .iter()
        .chain(&image.odd)
        .flat_map(|c| (0..len).map(move |i| c.coeff(i)))
        .collect()
}

fn check_normalized(p: &RatPoly, k: usize) -> Result<()> {
    if p.degree() != Some(k) || p.leading() != Some(&inv_factorial(k)) {
        return Err(Error::Normalization(format!(
            "expected degree {k} with leading coefficient 1/{k}!, got {p}"
        )));
    }
    Ok(())
}

/// `S_A v_p = 2^-k v_p`, decided as a polynomial identity.
pub fn check_spectral(mask: &Mask, p: &RatPoly, k: usize) -> Result<bool> {
    check_normalized(p, k)?;
    Ok(residual(mask, p, k).is_zero())
}

/// Solutions of the degree-`k` spectral equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralSolution {
    pub k: usize,
    /// Canonical solution with free lower coefficients set to zero.
    pub particular: Option<RatPoly>,
    /// Polynomials of degree `< k` that may be added to `particular`.
    pub homogeneous: Vec<RatPoly>,
}

impl SpectralSolution {
    pub fn is_feasible(&self) -> bool {
        self.particular.is_some()
    }

    pub fn is_unique(&self) -> bool {
        self.particular.is_some() && self.homogeneous.is_empty()
    }
}

/// Solves for the lower coefficients of a degree-`k` spectral polynomial.
pub fn solve_spectral(mask: &Mask, k: usize) -> SpectralSolution {
    let len = k + 1;
    let columns: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            flatten(
                &residual(mask, &RatPoly::monomial(i, Rational::one()), k),
                len,
            )
        })
        .collect();
    let lead = RatPoly::monomial(k, inv_factorial(k));
    let rhs: Vec<Rational> = flatten(&residual(mask, &lead, k), len)
        .into_iter()
        .map(|v| -v)
        .collect();
    let rows = rhs.len();
    let mut entries = Vec::with_capacity(rows * k);
    for r in 0..rows {
        for col in &columns {
            entries.push(col[r].clone());
        }
    }
    let a = RatMatrix::new(rows, k, entries).expect("shape");
    let sol = solve_linear(&a, &rhs).expect("shape");
    let with_lead = |mut c: Vec<Rational>| {
        c.push(inv_factorial(k));
        RatPoly::new(c)
    };
    SpectralSolution {
        k,
        particular: sol.particular.map(with_lead),
        homogeneous: sol.nullspace.into_iter().map(RatPoly::new).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeStatus {
    Solved,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub k: usize,
    pub status: DegreeStatus,
    pub particular: Option<RatPoly>,
    pub homogeneous_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub entries: Vec<DegreeEntry>,
    /// Largest `K` with every degree `k <= K` solvable; `-1` if degree 0 fails.
    pub order: i64,
}

impl SpectralReport {
    /// Spectral polynomials for degrees `0..=order`.
    pub fn polynomials(&self) -> Vec<RatPoly> {
        self.entries
            .iter()
            .filter_map(|e| e.particular.clone())
            .collect()
    }
}

/// Solves degrees `0..=k_max` in order, stopping after the first infeasible one.
pub fn spectral_order(mask: &Mask, k_max: usize) -> SpectralReport {
    let mut entries = Vec::new();
    let mut order = -1;
    for k in 0..=k_max {
        let sol = solve_spectral(mask, k);
        let solved = sol.is_feasible();
        entries.push(DegreeEntry {
            k,
            status: if solved {
                DegreeStatus::Solved
            } else {
                DegreeStatus::Infeasible
            },
            homogeneous_dim: sol.homogeneous.len(),
            particular: sol.particular,
        });
        if !solved {
            break;
        }
        order = k as i64;
    }
    SpectralReport { entries, order }
}

/// Spectral condition with polynomials `(x + tau)^k / k!`, `k = 0..=ell`;
/// equivalent to reproduction of polynomials of degree `<= ell` w.r.t. `tau`.
pub fn check_shifted_monomial(mask: &Mask, tau: &Rational, ell: usize) -> bool {
    (0..=ell).all(|k| residual(mask, &RatPoly::shifted_monomial(tau, k), k).is_zero())
}

/// Largest `ell <= ell_max` passing [`check_shifted_monomial`].
pub fn reproduction_order(mask: &Mask, tau: &Rational, ell_max: usize) -> Option<usize> {
    (0..=ell_max)
        .take_while(|&k| residual(mask, &RatPoly::shifted_monomial(tau, k), k).is_zero())
        .last()
}

/// The parameter `tau` read off a unique first spectral polynomial `x + tau`.
pub fn infer_tau(mask: &Mask) -> Option<Rational> {
    let sol = solve_spectral(mask, 1);
    if !sol.is_unique() {
        return None;
    }
    sol.particular.map(|p| p.coeff(0))
}

/// Builds a mask on `support` satisfying the shifted-monomial spectral
/// condition of order `ell` for `tau`: the canonical solution (free entries
/// zero) of the linear constraints on the mask entries.
pub fn synthesize_mask(
    d: usize,
    tau: &Rational,
    ell: usize,
    support: IndexInterval,
) -> Result<Mask> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if support.is_empty() {
        return Err(Error::InvalidArgument("empty support".into()));
    }
    let n = d + 1;
    let indices: Vec<i64> = support.iter().collect();
    let unknowns = indices.len() * n * n;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for k in 0..=ell {
        let g = PolyVector::from_poly(&RatPoly::shifted_monomial(tau, k), d);
        let scale = pow2(-(k as i64));
        for parity in Parity::BOTH {
            let target = g.compose_affine(
                &Rational::from_integer(2.into()),
                &Rational::from_integer(parity.offset().into()),
            );
            // Contribution of entry (idx, r, c) to component r at this parity.
            let shifted: Vec<(usize, Vec<RatPoly>)> = indices
                .iter()
                .enumerate()
                .filter(|(_, &idx)| Parity::of(idx) == parity)
                .map(|(slot, &idx)| {
                    let i = (idx - parity.offset()) / 2;
                    (
                        slot,
                        g.compose_affine(&Rational::one(), &Rational::from_integer((-i).into())),
                    )
                })
                .collect();
            for r in 0..n {
                for power in 0..=k {
                    let mut row = vec![Rational::zero(); unknowns];
                    for (slot, gs) in &shifted {
                        for c in 0..n {
                            row[slot * n * n + r * n + c] = gs[c].coeff(power);
                        }
                    }
                    rows.push(row);
                    rhs.push(target[r].coeff(power) * &scale);
                }
            }
        }
    }
    let a = RatMatrix::new(rows.len(), unknowns, rows.into_iter().flatten().collect())?;
    let sol = solve_linear(&a, &rhs)?;
    let Some(x) = sol.particular else {
        return Err(Error::Infeasible(format!(
            "no mask of order {d} on [{}, {}] satisfies the condition of order {ell}",
            support.lo, support.hi
        )));
    };
    let matrices = x
        .chunks(n * n)
        .map(|c| RatMatrix::new(n, n, c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Mask::new(d, support.lo, matrices)
        .map_err(|_| Error::Infeasible("the canonical solution is the zero mask".into()))
}

/// Reproduction checked by running the scheme: for every `k <= ell`, data
/// sampled from `x^k/k!` at `j + tau` is iterated exactly and compared with
/// the resampled polynomial at every level `1..=levels`. Windows are sized so
/// that each level holds at least `k + 2` exact indices per parity.
pub fn reproduces_by_iteration(
    mask: &Mask,
    tau: &Rational,
    ell: usize,
    levels: usize,
) -> Result<bool> {
    let d = mask.d();
    for k in 0..=ell {
        let q = RatPoly::monomial(k, inv_factorial(k));
        let g = PolyVector::from_poly(&q, d);
        let half = (1i64 << levels) * (k as i64 + 2);
        let target = IndexInterval::new(-half, half);
        let known = pullback_window(mask, target, levels);
        let c0 = sample_hermite(
            &RatPoly::shifted_monomial(tau, k),
            d,
            &Rational::zero(),
            known,
        );
        for n in 1..=levels {
            let frame = hermite_iterate(mask, &c0, n, tau)?;
            let window = forward_window(mask, known, n);
            for j in window.iter() {
                if frame.sequence.at(j) != g.eval(&frame.abscissa(j)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproductionSummary {
    #[serde(serialize_with = "text::rational")]
    pub tau: Rational,
    pub order: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use crate::mask::catalog;

    fn a1() -> Mask {
        catalog("han05_a1").unwrap()
    }

    fn a2() -> Mask {
        catalog("han05_a2").unwrap()
    }

    fn quad(c0: Rational) -> RatPoly {
        RatPoly::new(vec![c0, int(0), ratio(1, 2)])
    }

    #[test]
    fn symbolic_action_values() {
        let img = apply_symbolic(&a1(), &RatPoly::x());
        assert_eq!(img.eval(Parity::Even, &int(0)), vec![int(0), ratio(1, 2)]);
        assert_eq!(
            img.eval(Parity::Odd, &int(0)),
            vec![ratio(1, 2), ratio(1, 2)]
        );
        assert!(apply_symbolic(&a1(), &RatPoly::zero()).is_zero());
    }

    #[test]
    fn spectral_checks() {
        assert!(check_spectral(&a1(), &quad(ratio(-1, 12)), 2).unwrap());
        assert!(!check_spectral(&a1(), &quad(int(0)), 2).unwrap());
        assert!(check_spectral(&a2(), &quad(ratio(-1, 21)), 2).unwrap());
        assert!(matches!(
            check_spectral(&a1(), &RatPoly::new(vec![int(0), int(0), int(1)]), 2),
            Err(Error::Normalization(_))
        ));
        assert!(check_spectral(&a1(), &quad(int(0)), 3).is_err());
    }

    #[test]
    fn solver_examples() {
        let s = solve_spectral(&a1(), 1);
        assert!(s.is_unique());
        assert_eq!(s.particular, Some(RatPoly::x()));
        assert!(!solve_spectral(&a1(), 3).is_feasible());
        assert_eq!(
            solve_spectral(&a2(), 2).particular,
            Some(quad(ratio(-1, 21)))
        );
    }

    #[test]
    fn orders() {
        for m in [a1(), a2()] {
            let r = spectral_order(&m, 8);
            assert_eq!(r.order, 2);
            assert_eq!(r.entries.len(), 4);
            assert_eq!(r.entries[3].status, DegreeStatus::Infeasible);
        }
    }

    #[test]
    fn shifted_monomials() {
        assert!(check_shifted_monomial(&a1(), &int(0), 1));
        assert!(!check_shifted_monomial(&a1(), &int(0), 2));
        assert!(check_shifted_monomial(&a2(), &int(0), 1));
        assert_eq!(reproduction_order(&a1(), &int(0), 8), Some(1));
        assert_eq!(reproduction_order(&a2(), &int(0), 8), Some(1));
        assert_eq!(reproduction_order(&a1(), &ratio(1, 3), 8), Some(0));
        let id = Mask::new(1, 0, vec![RatMatrix::identity(2).scale(&int(3))]).unwrap();
        assert_eq!(reproduction_order(&id, &int(0), 8), None);
    }

    #[test]
    fn tau_inference() {
        assert_eq!(infer_tau(&a1()), Some(int(0)));
        assert_eq!(infer_tau(&a2()), Some(int(0)));
        // A_0 = I only: S v_x at even indices is j, not x/2 at 2j.
        let id = Mask::new(1, 0, vec![RatMatrix::identity(2)]).unwrap();
        assert!(!solve_spectral(&id, 1).is_feasible());
        assert_eq!(infer_tau(&id), None);
    }

    #[test]
    fn synthesized_fixtures() {
        let m = synthesize_mask(1, &int(0), 1, IndexInterval::new(0, 1)).unwrap();
        let a0 = RatMatrix::diagonal(vec![int(1), ratio(1, 2)]);
        let a1 = RatMatrix::new(2, 2, vec![int(1), ratio(1, 2), int(0), ratio(1, 2)]).unwrap();
        assert_eq!(m.at(0), a0);
        assert_eq!(m.at(1), a1);
        assert!(spectral_order(&m, 1).order >= 1);

        let tau = ratio(-1, 2);
        let dual = synthesize_mask(1, &tau, 1, IndexInterval::new(0, 1)).unwrap();
        assert_eq!(
            dual.at(0),
            RatMatrix::new(2, 2, vec![int(1), ratio(1, 4), int(0), ratio(1, 2)]).unwrap()
        );
        assert_eq!(
            dual.at(1),
            RatMatrix::new(2, 2, vec![int(1), ratio(3, 4), int(0), ratio(1, 2)]).unwrap()
        );
        assert_eq!(reproduction_order(&dual, &tau, 1), Some(1));

        let d2 = synthesize_mask(2, &int(0), 2, IndexInterval::new(-1, 1)).unwrap();
        assert!(check_shifted_monomial(&d2, &int(0), 2));

        assert!(matches!(
            synthesize_mask(1, &int(0), 3, IndexInterval::point(0)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn iteration_agrees_on_catalog() {
        assert!(reproduces_by_iteration(&a1(), &int(0), 1, 3).unwrap());
        assert!(!reproduces_by_iteration(&a1(), &int(0), 2, 3).unwrap());
    }
}
