#![allow(dead_code)]

pub mod brute;

use hermite_core::exact::{int, ratio};
use hermite_core::mask::CATALOG_NAMES;
use hermite_core::spectral::{check_shifted_monomial, synthesize_mask};
use hermite_core::{
    catalog, HermiteSequence, IndexInterval, Mask, MatrixSequence, RatMatrix, Rational,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub label: String,
    pub mask: Mask,
    pub tau: Rational,
    pub ell: usize,
}

pub fn taus() -> Vec<Rational> {
    vec![int(0), ratio(-1, 2), ratio(1, 3)]
}

/// The catalog masks reproduce linears in the primal parametrization.
pub fn catalog_fixtures() -> Vec<Fixture> {
    CATALOG_NAMES
        .iter()
        .map(|name| Fixture {
            label: (*name).to_string(),
            mask: catalog(name).unwrap(),
            tau: int(0),
            ell: 1,
        })
        .collect()
}

/// One mask per `(d, tau, ell)` for `d in {1, 2}`, `ell <= 3`, on the smallest
/// symmetric support `[-s, s]` that admits one, plus the two-point fixtures.
pub fn synthesized_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for d in 1..=2 {
        for tau in taus() {
            for ell in 0..=3 {
                let found = (1..=3)
                    .find_map(|s| synthesize_mask(d, &tau, ell, IndexInterval::new(-s, s)).ok());
                let mask =
                    found.unwrap_or_else(|| panic!("no fixture for d={d} tau={tau} ell={ell}"));
                out.push(Fixture {
                    label: format!("synth(d={d}, tau={tau}, ell={ell})"),
                    mask,
                    tau: tau.clone(),
                    ell,
                });
            }
        }
    }
    for tau in [int(0), ratio(-1, 2)] {
        out.push(Fixture {
            label: format!("synth(d=1, tau={tau}, ell=1, support [0,1])"),
            mask: synthesize_mask(1, &tau, 1, IndexInterval::new(0, 1)).unwrap(),
            tau,
            ell: 1,
        });
    }
    out.push(Fixture {
        label: "synth(d=2, tau=0, ell=2, support [-1,1])".into(),
        mask: synthesize_mask(2, &int(0), 2, IndexInterval::new(-1, 1)).unwrap(),
        tau: int(0),
        ell: 2,
    });
    out
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    const DENOMS: [i64; 5] = [1, 2, 3, 4, 8];
    ratio(
        rng.gen_range(-8..=8),
        DENOMS[rng.gen_range(0..DENOMS.len())],
    )
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> RatMatrix {
    RatMatrix::new(n, n, (0..n * n).map(|_| random_rational(rng)).collect()).unwrap()
}

/// Nonzero mask of order `d` with entries in `[lo, lo + len)`.
pub fn random_mask(rng: &mut ChaCha8Rng, d: usize) -> Mask {
    loop {
        let lo = rng.gen_range(-3..=1);
        let len = rng.gen_range(1..=4);
        let coeffs = (0..len).map(|_| random_matrix(rng, d + 1)).collect();
        if let Ok(m) = Mask::new(d, lo, coeffs) {
            return m;
        }
    }
}

pub fn random_matrix_sequence(rng: &mut ChaCha8Rng, n: usize) -> MatrixSequence {
    let lo = rng.gen_range(-3..=2);
    let len = rng.gen_range(0..=4);
    MatrixSequence::new(n, lo, (0..len).map(|_| random_matrix(rng, n)).collect()).unwrap()
}

pub fn random_sequence(rng: &mut ChaCha8Rng, d: usize) -> HermiteSequence {
    let lo = rng.gen_range(-4..=4);
    let len = rng.gen_range(1..=5);
    let values = (0..len)
        .map(|_| (0..=d).map(|_| random_rational(rng)).collect())
        .collect();
    HermiteSequence::new(d, lo, values).unwrap()
}

/// Synthesized fixtures with one entry nudged so that the shifted-monomial
/// condition of the fixture's own order fails.
pub fn perturbed_fixtures(rng: &mut ChaCha8Rng, count: usize) -> Vec<Fixture> {
    let base: Vec<Fixture> = synthesized_fixtures()
        .into_iter()
        .filter(|f| f.ell >= 1)
        .collect();
    let mut out = Vec::new();
    while out.len() < count {
        let f = &base[rng.gen_range(0..base.len())];
        let (lo, hi) = f.mask.support();
        let target = rng.gen_range(lo..=hi);
        let n = f.mask.d() + 1;
        let (r, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let bump = random_rational(rng);
        let Ok(mask) = f.mask.sequence().map(|j, a| {
            let mut a = a.clone();
            if j == target {
                *a.get_mut(r, c) += &bump;
            }
            a
        }) else {
            continue;
        };
        let Ok(mask) = Mask::try_from(mask) else {
            continue;
        };
        if check_shifted_monomial(&mask, &f.tau, f.ell) {
            continue;
        }
        out.push(Fixture {
            label: format!("perturbed {} at A_{target}[{r}][{c}] by {bump}", f.label),
            mask,
            tau: f.tau.clone(),
            ell: f.ell,
        });
    }
    out
}
