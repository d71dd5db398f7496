//! Special sum rules as exact linear feasibility problems.
//!
//! The sum rule of order `ell` is stated on derivatives of the mask symbol at
//! the frequencies `0` and `pi`. With the imaginary unit absorbed into a
//! formal variable `t`, the symbol at `0` becomes `A0(t) = 1/2 sum_s M_s t^s/s!`
//! and at `pi` becomes `Api(t) = 1/2 sum_s N_s t^s/s!`, where `M_s` and `N_s`
//! are the plain and alternating moments of the mask. Writing the normalized
//! moments of the sequence `y` as `Y(t) = sum_s nu_s t^s`, the rule asks for
//!
//! ```text
//!   A0(t) Y(2t) = Y(t)   and   Api(t) Y(2t) = 0   (mod t^(ell+1))
//! ```
//!
//! with `nu_j = sign^j e_j` fixed for `j <= d`. Extracting the coefficient of
//! `t^j` gives
//!
//! ```text
//!   sum_{s<=j} 2^(s-1) M_{j-s} nu_s / (j-s)! = nu_j
//!   sum_{s<=j} 2^(s-1) N_{j-s} nu_s / (j-s)! = 0
//! ```
//!
//! All levels `j = 0..=ell` are solved as one linear system in the free
//! `nu_{d+1}, ..., nu_ell`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    inv_factorial, pow2, series_mul, solve_linear, text, MatrixSeries, RatMatrix, Rational,
};
use crate::mask::Mask;
use crate::spectral::spectral_order;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `sign^j`
    pub fn pow(self, j: usize) -> Rational {
        if self == Sign::Minus && j % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// How the low-order moments `nu_0, ..., nu_d` are pinned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `nu_j = sign^j e_j` for `j <= d`.
    #[default]
    Strict,
    /// `nu_j[j] = sign^j` and `nu_j[i] = 0` for `i > j`; the entries above the
    /// diagonal (`i < j`) are free. They carry the lower-order terms of the
    /// spectral polynomials, which the strict form forces to vanish.
    Triangular,
}

/// Normalized moments `nu_0, ..., nu_ell` realizing a sum rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentWitness {
    pub d: usize,
    pub ell: usize,
    #[serde(serialize_with = "text::rational_vecs")]
    pub nu: Vec<Vec<Rational>>,
    pub sign: Sign,
    pub normalization: Normalization,
}

impl MomentWitness {
    pub fn is_normalized(&self) -> bool {
        self.nu.len() == self.ell + 1
            && self.nu.iter().all(|v| v.len() == self.d + 1)
            && (0..=self.d.min(self.ell)).all(|j| {
                (0..=self.d).all(
                    |i| match slot(self.d, j, i, self.sign, self.normalization) {
                        Slot::Fixed(v) => self.nu[j][i] == v,
                        Slot::Free => true,
                    },
                )
            })
    }

    /// Re-checks the witness through the truncated series products
    /// `A0(t) Y(2t) - Y(t)` and `Api(t) Y(2t)`, independently of the
    /// coefficient formulas used by the solver.
    pub fn verify(&self, mask: &Mask) -> bool {
        if mask.d() != self.d || !self.is_normalized() {
            return false;
        }
        let (a0, api) = symbol_series(mask, self.ell);
        let y = MatrixSeries::new(
            self.nu
                .iter()
                .map(|v| RatMatrix::column(v.clone()))
                .collect(),
        )
        .expect("uniform columns");
        let y2 = y.rescale(&Rational::from_integer(2.into()));
        let (Ok(at_zero), Ok(at_pi)) = (
            series_mul(&a0, &y2, self.ell),
            series_mul(&api, &y2, self.ell),
        ) else {
            return false;
        };
        at_zero == y && at_pi.is_zero()
    }
}

enum Slot {
    Fixed(Rational),
    Free,
}

fn slot(d: usize, j: usize, i: usize, sign: Sign, norm: Normalization) -> Slot {
    if j > d {
        return Slot::Free;
    }
    match (i.cmp(&j), norm) {
        (std::cmp::Ordering::Equal, _) => Slot::Fixed(sign.pow(j)),
        (std::cmp::Ordering::Less, Normalization::Triangular) => Slot::Free,
        _ => Slot::Fixed(Rational::zero()),
    }
}

/// `(1/2 sum_s M_s t^s / s!, 1/2 sum_s N_s t^s / s!)` up to `t^ell`.
pub fn symbol_series(mask: &Mask, ell: usize) -> (MatrixSeries, MatrixSeries) {
    let half = pow2(-1);
    let build = |moment: &dyn Fn(u32) -> RatMatrix| {
        MatrixSeries::new(
            (0..=ell)
                .map(|s| moment(s as u32).scale(&(&half * inv_factorial(s))))
                .collect(),
        )
        .expect("square coefficients")
    };
    (build(&|s| mask.moment(s)), build(&|s| mask.alt_moment(s)))
}

/// Decides the special sum rule of order `ell` with moment sign `sign` under
/// the strict normalization. Returns the canonical witness (free entries
/// zero) or `None`.
pub fn sumrule_feasible(mask: &Mask, ell: usize, sign: Sign) -> Result<Option<MomentWitness>> {
    sumrule_feasible_with(mask, ell, sign, Normalization::Strict)
}

pub fn sumrule_feasible_with(
    mask: &Mask,
    ell: usize,
    sign: Sign,
    norm: Normalization,
) -> Result<Option<MomentWitness>> {
    let d = mask.d();
    if ell < d {
        return Err(Error::InvalidArgument(format!(
            "sum rule order {ell} is below the operator order {d}"
        )));
    }
    let n = d + 1;
    let moments: Vec<RatMatrix> = (0..=ell).map(|s| mask.moment(s as u32)).collect();
    let alt: Vec<RatMatrix> = (0..=ell).map(|s| mask.alt_moment(s as u32)).collect();

    // Each entry of each nu_s is either a constant or an unknown column.
    let mut unknowns = 0;
    let entries: Vec<Vec<std::result::Result<Rational, usize>>> = (0..=ell)
        .map(|s| {
            (0..n)
                .map(|i| match slot(d, s, i, sign, norm) {
                    Slot::Fixed(v) => Ok(v),
                    Slot::Free => {
                        unknowns += 1;
                        Err(unknowns - 1)
                    }
                })
                .collect()
        })
        .collect();

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for j in 0..=ell {
        for (mats, is_fixed_point) in [(&moments, true), (&alt, false)] {
            for r in 0..n {
                let mut row = vec![Rational::zero(); unknowns];
                let mut constant = Rational::zero();
                for s in 0..=j {
                    let w = pow2(s as i64 - 1) * inv_factorial(j - s);
                    let m = &mats[j - s];
                    for (c, entry) in entries[s].iter().enumerate() {
                        match entry {
                            Ok(v) => constant += &w * m.get(r, c) * v,
                            Err(u) => row[*u] += &w * m.get(r, c),
                        }
                    }
                }
                if is_fixed_point {
                    match &entries[j][r] {
                        Ok(v) => constant -= v,
                        Err(u) => row[*u] -= Rational::one(),
                    }
                }
                rows.push(row);
                rhs.push(-constant);
            }
        }
    }
    let sol = if unknowns == 0 {
        // Nothing to solve for; every equation must hold as stated.
        rhs.iter().all(Zero::is_zero).then(Vec::new)
    } else {
        let a = RatMatrix::new(rows.len(), unknowns, rows.into_iter().flatten().collect())?;
        solve_linear(&a, &rhs)?.particular
    };
    Ok(sol.map(|x| {
        let nu = entries
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|e| e.unwrap_or_else(|u| x[u].clone()))
                    .collect()
            })
            .collect();
        MomentWitness {
            d,
            ell,
            nu,
            sign,
            normalization: norm,
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumRuleReport {
    /// Largest feasible order, or `None` when even order `d` fails.
    pub order: Option<usize>,
    pub sign: Option<Sign>,
    pub witness: Option<MomentWitness>,
}

impl SumRuleReport {
    pub fn below_minimal(&self) -> bool {
        self.order.is_none()
    }
}

/// Largest order `<= ell_max` over both signs, strict normalization.
pub fn sumrule_order(mask: &Mask, ell_max: usize) -> Result<SumRuleReport> {
    sumrule_order_with(mask, ell_max, Normalization::Strict)
}

/// Feasibility is monotone in the order, so each sign is scanned upward
/// until its first failure. Ties go to the negative sign.
pub fn sumrule_order_with(
    mask: &Mask,
    ell_max: usize,
    norm: Normalization,
) -> Result<SumRuleReport> {
    let d = mask.d();
    if ell_max < d {
        return Err(Error::InvalidArgument(format!(
            "maximal order {ell_max} is below the operator order {d}"
        )));
    }
    let mut best = SumRuleReport {
        order: None,
        sign: None,
        witness: None,
    };
    for sign in [Sign::Minus, Sign::Plus] {
        let mut last = None;
        for ell in d..=ell_max {
            match sumrule_feasible_with(mask, ell, sign, norm)? {
                Some(w) => last = Some(w),
                None => break,
            }
        }
        if let Some(w) = last {
            if best.order.is_none_or(|o| w.ell > o) {
                best = SumRuleReport {
                    order: Some(w.ell),
                    sign: Some(sign),
                    witness: Some(w),
                };
            }
        }
    }
    Ok(best)
}

/// Whether a sum rule of order `d` holds for either sign.
pub fn sumrule_minimal_feasible(mask: &Mask, norm: Normalization) -> bool {
    [Sign::Minus, Sign::Plus].into_iter().any(|s| {
        sumrule_feasible_with(mask, mask.d(), s, norm)
            .expect("order d is admissible")
            .is_some()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lemma4Report {
    /// Spectral condition of order `d` holds.
    pub spectral_minimal: bool,
    /// Special sum rule of order `d` holds (strict normalization).
    pub sumrule_minimal: bool,
    pub consistent: bool,
    /// Same comparison under the triangular normalization.
    pub sumrule_minimal_triangular: bool,
    pub consistent_triangular: bool,
}

/// Compares the spectral condition and the sum rule at order `d`.
pub fn lemma4_crosscheck(mask: &Mask) -> Lemma4Report {
    let spectral_minimal = spectral_order(mask, mask.d()).order >= mask.d() as i64;
    let sumrule_minimal = sumrule_minimal_feasible(mask, Normalization::Strict);
    let sumrule_minimal_triangular = sumrule_minimal_feasible(mask, Normalization::Triangular);
    Lemma4Report {
        spectral_minimal,
        sumrule_minimal,
        consistent: spectral_minimal == sumrule_minimal,
        sumrule_minimal_triangular,
        consistent_triangular: spectral_minimal == sumrule_minimal_triangular,
    }
}
