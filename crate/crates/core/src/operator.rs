//! Subdivision operator action and exact Hermite iteration.
//!
//! The operator acts as `(S_A c)_j = sum_k A_{j-2k} c_k`. Iterates are
//! `c^[n] = D^-n S_A^n c^[0]`, and entry `j` of level `n` is attached to the
//! abscissa `2^-n (j + tau)`.
//!
//! Initial data is either genuinely finitely supported ([`Known::Everywhere`])
//! or a finite window of a bi-infinite sequence ([`Known::Window`]). In the
//! second case only indices whose whole dependency cone lies inside the window
//! are reported, so every emitted value equals the value of the bi-infinite
//! scheme.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{pow2, to_decimal, RatMatrix, RatPoly, Rational};
use crate::mask::{Mask, MatrixSequence};

/// Closed integer interval `[lo, hi]`; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexInterval {
    pub lo: i64,
    pub hi: i64,
}

impl IndexInterval {
    pub fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn point(j: i64) -> Self {
        Self { lo: j, hi: j }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn contains(&self, j: i64) -> bool {
        self.lo <= j && j <= self.hi
    }

    pub fn contains_interval(&self, other: &IndexInterval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

/// What is known about initial data outside its stored values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Known {
    /// The data is zero outside its support.
    Everywhere,
    /// Only indices inside the window are known.
    Window(IndexInterval),
}

/// Finitely supported sequence of `(d+1)`-vectors, stored tight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HermiteSequence {
    d: usize,
    offset: i64,
    values: Vec<Vec<Rational>>,
}

impl HermiteSequence {
    pub fn new(d: usize, offset: i64, values: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(bad) = values.iter().position(|v| v.len() != d + 1) {
            return Err(Error::DimensionMismatch(format!(
                "entry {bad} has {} components, expected {}",
                values[bad].len(),
                d + 1
            )));
        }
        let mut s = Self { d, offset, values };
        s.trim();
        Ok(s)
    }

    pub fn zero(d: usize) -> Self {
        Self {
            d,
            offset: 0,
            values: Vec::new(),
        }
    }

    /// Unit vector `e_component` at `index`.
    pub fn delta(d: usize, index: i64, component: usize) -> Result<Self> {
        if component > d {
            return Err(Error::InvalidArgument(format!(
                "component {component} out of range for d = {d}"
            )));
        }
        let mut v = vec![Rational::zero(); d + 1];
        v[component] = Rational::from_integer(1.into());
        Self::new(d, index, vec![v])
    }

    fn trim(&mut self) {
        let is_zero = |v: &Vec<Rational>| v.iter().all(Zero::is_zero);
        while self.values.last().is_some_and(is_zero) {
            self.values.pop();
        }
        let lead = self.values.iter().take_while(|v| is_zero(v)).count();
        self.values.drain(..lead);
        self.offset = if self.values.is_empty() {
            0
        } else {
            self.offset + lead as i64
        };
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> Option<IndexInterval> {
        (!self.values.is_empty())
            .then(|| IndexInterval::new(self.offset, self.offset + self.values.len() as i64 - 1))
    }

    pub fn get(&self, j: i64) -> Option<&[Rational]> {
        let i = j - self.offset;
        if i < 0 {
            return None;
        }
        self.values.get(i as usize).map(Vec::as_slice)
    }

    /// Value at `j`, zero outside the support.
    pub fn at(&self, j: i64) -> Vec<Rational> {
        self.get(j)
            .map(<[Rational]>::to_vec)
            .unwrap_or_else(|| vec![Rational::zero(); self.d + 1])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &[Rational])> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.offset + i as i64, v.as_slice()))
    }

    /// Applies `m` to every entry.
    pub fn map_values(&self, m: &RatMatrix) -> Result<Self> {
        let values = self
            .values
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.d, self.offset, values)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let values = self
            .values
            .iter()
            .map(|v| v.iter().map(|x| x * s).collect())
            .collect();
        Self::new(self.d, self.offset, values).expect("same shape")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_d(self.d, other.d)?;
        let span = match (self.support(), other.support()) {
            (None, _) => return Ok(other.clone()),
            (_, None) => return Ok(self.clone()),
            (Some(a), Some(b)) => IndexInterval::new(a.lo.min(b.lo), a.hi.max(b.hi)),
        };
        let values = span
            .iter()
            .map(|j| {
                self.at(j)
                    .iter()
                    .zip(other.at(j))
                    .map(|(x, y)| x + y)
                    .collect()
            })
            .collect();
        Self::new(self.d, span.lo, values)
    }

    /// `j -> c_{j - s}`
    pub fn shift(&self, s: i64) -> Self {
        Self {
            d: self.d,
            offset: if self.values.is_empty() {
                0
            } else {
                self.offset + s
            },
            values: self.values.clone(),
        }
    }

    /// Keeps only the entries inside `window`.
    pub fn restrict(&self, window: IndexInterval) -> Self {
        if window.is_empty() {
            return Self::zero(self.d);
        }
        let values = window.iter().map(|j| self.at(j)).collect();
        Self::new(self.d, window.lo, values).expect("same shape")
    }
}

fn check_d(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!(
            "order {a} against order {b}"
        )));
    }
    Ok(())
}

/// One application of the subdivision operator.
pub fn apply(mask: &Mask, c: &HermiteSequence) -> Result<HermiteSequence> {
    check_d(mask.d(), c.d())?;
    let Some(input) = c.support() else {
        return Ok(HermiteSequence::zero(c.d()));
    };
    let (lo_m, hi_m) = mask.support();
    let lo = 2 * input.lo + lo_m;
    let hi = 2 * input.hi + hi_m;
    let mut out = vec![vec![Rational::zero(); c.d() + 1]; (hi - lo + 1) as usize];
    for (k, ck) in c.iter() {
        for (i, a) in mask.iter() {
            let j = 2 * k + i;
            a.mul_vec_add_into(ck, &mut out[(j - lo) as usize]);
        }
    }
    HermiteSequence::new(c.d(), lo, out)
}

/// `(B *_2 C)_j = sum_m B_{j-2m} C_m`
pub fn conv2(b: &MatrixSequence, c: &MatrixSequence) -> Result<MatrixSequence> {
    if b.dim() != c.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} against {}x{} matrices",
            b.dim(),
            b.dim(),
            c.dim(),
            c.dim()
        )));
    }
    let (Some((b0, b1)), Some((c0, c1))) = (b.support(), c.support()) else {
        return Ok(MatrixSequence::zero(b.dim()));
    };
    let lo = 2 * c0 + b0;
    let hi = 2 * c1 + b1;
    let mut out = vec![RatMatrix::zeros(b.dim(), b.dim()); (hi - lo + 1) as usize];
    for (m, cm) in c.iter() {
        for (i, bi) in b.iter() {
            let slot = &mut out[(2 * m + i - lo) as usize];
            *slot = &*slot + &(bi * cm);
        }
    }
    MatrixSequence::new(b.dim(), lo, out)
}

/// Level `n` of a Hermite iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterateFrame {
    pub level: usize,
    pub sequence: HermiteSequence,
    pub tau: Rational,
}

impl IterateFrame {
    /// `2^-n (j + tau)`
    pub fn abscissa(&self, j: i64) -> Rational {
        (Rational::from_integer(j.into()) + &self.tau) * pow2(-(self.level as i64))
    }
}

/// Scales component `m` by `2^(n m)`, i.e. applies `D^-n`.
fn undilate(c: &HermiteSequence, n: usize) -> HermiteSequence {
    let values = c
        .iter()
        .map(|(_, v)| {
            v.iter()
                .enumerate()
                .map(|(m, x)| x * pow2((n * m) as i64))
                .collect()
        })
        .collect();
    let offset = c.support().map_or(0, |s| s.lo);
    HermiteSequence::new(c.d(), offset, values).expect("same shape")
}

/// `c^[n] = D^-n S_A^n c^[0]`, computed exactly.
pub fn hermite_iterate(
    mask: &Mask,
    c0: &HermiteSequence,
    n: usize,
    tau: &Rational,
) -> Result<IterateFrame> {
    check_d(mask.d(), c0.d())?;
    let mut raw = c0.clone();
    for _ in 0..n {
        raw = apply(mask, &raw)?;
    }
    Ok(IterateFrame {
        level: n,
        sequence: undilate(&raw, n),
        tau: tau.clone(),
    })
}

/// All levels `0..=n` of a Hermite iteration.
pub fn hermite_levels(
    mask: &Mask,
    c0: &HermiteSequence,
    n: usize,
    tau: &Rational,
) -> Result<Vec<IterateFrame>> {
    check_d(mask.d(), c0.d())?;
    let mut raw = c0.clone();
    let mut frames = Vec::with_capacity(n + 1);
    for level in 0..=n {
        if level > 0 {
            raw = apply(mask, &raw)?;
        }
        frames.push(IterateFrame {
            level,
            sequence: undilate(&raw, level),
            tau: tau.clone(),
        });
    }
    Ok(frames)
}

/// Smallest input interval from which every output index in `target` is
/// computed from known entries only, after `n` applications.
pub fn pullback_window(mask: &Mask, target: IndexInterval, n: usize) -> IndexInterval {
    let (lo_m, hi_m) = mask.support();
    let ceil_half = |x: i64| -(-x).div_euclid(2);
    (0..n).fold(target, |t, _| {
        IndexInterval::new(ceil_half(t.lo - hi_m), (t.hi - lo_m).div_euclid(2))
    })
}

/// Output indices computed exactly after `n` applications when the input is
/// only known on `known`.
pub fn forward_window(mask: &Mask, known: IndexInterval, n: usize) -> IndexInterval {
    let (lo_m, hi_m) = mask.support();
    (0..n).fold(known, |w, _| {
        if w.is_empty() {
            w
        } else {
            IndexInterval::new(2 * w.lo + hi_m - 1, 2 * w.hi + lo_m + 1)
        }
    })
}

/// Indices of level `n` whose values are exact for the given initial data.
pub fn computable_window(
    mask: &Mask,
    initial: &HermiteSequence,
    known: Known,
    n: usize,
) -> IndexInterval {
    match known {
        Known::Window(w) => forward_window(mask, w, n),
        Known::Everywhere => {
            let Some(s) = initial.support() else {
                return IndexInterval::new(1, 0);
            };
            let (lo_m, hi_m) = mask.support();
            (0..n).fold(s, |w, _| {
                IndexInterval::new(2 * w.lo + lo_m, 2 * w.hi + hi_m)
            })
        }
    }
}

/// Entry `j` is `[p(j+tau), p'(j+tau), ..., p^(d)(j+tau)]`.
pub fn sample_hermite(
    p: &RatPoly,
    d: usize,
    tau: &Rational,
    window: IndexInterval,
) -> HermiteSequence {
    if window.is_empty() {
        return HermiteSequence::zero(d);
    }
    let derivatives: Vec<RatPoly> = (0..=d).map(|m| p.derive_n(m)).collect();
    let values = window
        .iter()
        .map(|j| {
            let x = Rational::from_integer(j.into()) + tau;
            derivatives.iter().map(|q| q.eval(&x)).collect()
        })
        .collect();
    HermiteSequence::new(d, window.lo, values).expect("d+1 components")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRow {
    pub index: i64,
    pub abscissa: Rational,
    pub values: Vec<Rational>,
}

/// Level-`levels` iterate on its exactly computable window, tagged with abscissas.
pub fn limit_samples(
    mask: &Mask,
    initial: &HermiteSequence,
    known: Known,
    levels: usize,
    tau: &Rational,
) -> Result<Vec<SampleRow>> {
    if levels == 0 {
        return Err(Error::InvalidArgument("levels must be at least 1".into()));
    }
    let window = computable_window(mask, initial, known, levels);
    if window.is_empty() {
        return Err(Error::EmptyWindow(format!(
            "no index of level {levels} is determined by the initial data; \
             enlarge the initial support (the mask support is {:?})",
            mask.support()
        )));
    }
    let frame = hermite_iterate(mask, initial, levels, tau)?;
    Ok(window
        .iter()
        .map(|j| SampleRow {
            index: j,
            abscissa: frame.abscissa(j),
            values: frame.sequence.at(j),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeRow {
    pub level: usize,
    pub deviation: Rational,
}

/// For `n = 1..levels-1`, the largest `|c^[n+1]_{2j} - c^[n]_j|` over the
/// indices exact at both levels. A heuristic convergence indicator only.
pub fn convergence_probe(
    mask: &Mask,
    initial: &HermiteSequence,
    known: Known,
    levels: usize,
) -> Result<Vec<ProbeRow>> {
    if levels < 2 {
        return Err(Error::InvalidArgument("levels must be at least 2".into()));
    }
    let frames = hermite_levels(mask, initial, levels, &Rational::zero())?;
    let rows = (1..levels)
        .map(|n| {
            let coarse = computable_window(mask, initial, known, n);
            let fine = computable_window(mask, initial, known, n + 1);
            let deviation = coarse
                .iter()
                .filter(|j| fine.contains(2 * j))
                .flat_map(|j| {
                    let a = frames[n + 1].sequence.at(2 * j);
                    let b = frames[n].sequence.at(j);
                    a.into_iter()
                        .zip(b)
                        .map(|(x, y)| (x - y).abs())
                        .collect::<Vec<_>>()
                })
                .max()
                .unwrap_or_else(Rational::zero);
            ProbeRow {
                level: n,
                deviation,
            }
        })
        .collect();
    Ok(rows)
}

/// CSV with header `x,c0,...,cd`, one row per index.
pub fn samples_to_csv(rows: &[SampleRow], d: usize, digits: usize) -> String {
    let mut out = String::from("x");
    for m in 0..=d {
        let _ = write!(out, ",c{m}");
    }
    out.push('\n');
    for row in rows {
        out.push_str(&to_decimal(&row.abscissa, digits));
        for v in &row.values {
            out.push(',');
            out.push_str(&to_decimal(v, digits));
        }
        out.push('\n');
    }
    out
}

/// CSV with header `level,deviation`.
pub fn probe_to_csv(rows: &[ProbeRow], digits: usize) -> String {
    let mut out = String::from("level,deviation\n");
    for row in rows {
        let _ = writeln!(out, "{},{}", row.level, to_decimal(&row.deviation, digits));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use crate::mask::{catalog, dilation};

    fn a1() -> Mask {
        catalog("han05_a1").unwrap()
    }

    fn v(xs: &[Rational]) -> Vec<Rational> {
        xs.to_vec()
    }

    #[test]
    fn apply_on_linear_data() {
        let c = HermiteSequence::new(
            1,
            -1,
            vec![
                v(&[int(-1), int(1)]),
                v(&[int(0), int(1)]),
                v(&[int(1), int(1)]),
            ],
        )
        .unwrap();
        let out = apply(&a1(), &c).unwrap();
        assert_eq!(out.at(0), v(&[int(0), ratio(1, 2)]));
    }

    #[test]
    fn apply_zero_and_delta() {
        let a1 = a1();
        assert!(apply(&a1, &HermiteSequence::zero(1)).unwrap().is_zero());
        let e0 = HermiteSequence::delta(1, 0, 0).unwrap();
        let out = apply(&a1, &e0).unwrap();
        for j in -2..=2 {
            let a = a1.at(j);
            assert_eq!(out.at(j), v(&[a.get(0, 0).clone(), a.get(1, 0).clone()]));
        }
        assert!(apply(&a1, &HermiteSequence::zero(2)).is_err());
    }

    #[test]
    fn conv2_with_deltas() {
        let a1 = a1();
        let delta = MatrixSequence::new(2, 0, vec![RatMatrix::identity(2)]).unwrap();
        let up = conv2(&delta, a1.sequence()).unwrap();
        for j in -4..=4 {
            let expected = if j % 2 == 0 {
                a1.at(j / 2)
            } else {
                RatMatrix::zeros(2, 2)
            };
            assert_eq!(up.at(j), expected);
        }
        assert_eq!(&conv2(a1.sequence(), &delta).unwrap(), a1.sequence());
        assert_eq!(
            conv2(a1.sequence(), a1.sequence()).unwrap().support(),
            Some((-6, 6))
        );
    }

    #[test]
    fn iterate_zero_levels_is_identity() {
        let c = HermiteSequence::new(1, 3, vec![v(&[ratio(1, 3), int(2)])]).unwrap();
        let f = hermite_iterate(&a1(), &c, 0, &int(0)).unwrap();
        assert_eq!(f.sequence, c);
    }

    #[test]
    fn one_step_matches_recurrence() {
        let a1 = a1();
        let c0 = HermiteSequence::new(1, 0, vec![v(&[int(1), int(2)]), v(&[int(-3), ratio(1, 2)])])
            .unwrap();
        let c1 = hermite_iterate(&a1, &c0, 1, &int(0)).unwrap().sequence;
        assert_eq!(
            c1.map_values(&dilation(1)).unwrap(),
            apply(&a1, &c0).unwrap()
        );
    }

    #[test]
    fn linear_reproduction_two_levels() {
        let a1 = a1();
        let target = IndexInterval::new(-4, 4);
        let w = pullback_window(&a1, target, 2);
        let c0 = sample_hermite(&RatPoly::x(), 1, &int(0), w);
        let f = hermite_iterate(&a1, &c0, 2, &int(0)).unwrap();
        assert!(forward_window(&a1, w, 2).contains_interval(&target));
        for j in target.iter() {
            assert_eq!(f.sequence.at(j), v(&[ratio(j, 4), int(1)]), "j = {j}");
        }
    }

    #[test]
    fn pullback_examples() {
        let a1 = a1();
        assert_eq!(
            pullback_window(&a1, IndexInterval::point(0), 1),
            IndexInterval::new(-1, 1)
        );
        let m01 = Mask::new(1, 0, vec![RatMatrix::identity(2), RatMatrix::identity(2)]).unwrap();
        for j in -5..=5 {
            // brute force: every k with j - 2k in [0, 1]
            let ks: Vec<i64> = (-10..=10)
                .filter(|k| (0..=1).contains(&(j - 2 * k)))
                .collect();
            let expected = IndexInterval::new(ks[0], *ks.last().unwrap());
            assert_eq!(
                pullback_window(&m01, IndexInterval::point(j), 1),
                expected,
                "j = {j}"
            );
        }
        let t = IndexInterval::new(-3, 7);
        assert_eq!(
            pullback_window(&a1, t, 2),
            pullback_window(&a1, pullback_window(&a1, t, 1), 1)
        );
    }

    #[test]
    fn sampling_examples() {
        let tau = ratio(2, 7);
        let w = IndexInterval::new(-2, 2);
        let ones = sample_hermite(&RatPoly::constant(int(1)), 2, &tau, w);
        for j in w.iter() {
            assert_eq!(ones.at(j), v(&[int(1), int(0), int(0)]));
        }
        let lin = sample_hermite(&RatPoly::x(), 1, &int(0), w);
        for j in w.iter() {
            assert_eq!(lin.at(j), v(&[int(j), int(1)]));
        }
        let half_sq = RatPoly::monomial(2, ratio(1, 2));
        let s = sample_hermite(&half_sq, 1, &ratio(-1, 2), IndexInterval::point(0));
        assert_eq!(s.at(0), v(&[ratio(1, 8), ratio(-1, 2)]));
    }

    #[test]
    fn limit_samples_delta_counts_rows() {
        let a1 = a1();
        let e0 = HermiteSequence::delta(1, 0, 0).unwrap();
        let rows = limit_samples(&a1, &e0, Known::Everywhere, 3, &int(0)).unwrap();
        // Span after three levels: [-2*(2^3-1), 2*(2^3-1)].
        assert_eq!(rows.len(), 29);
        assert!(
            limit_samples(&a1, &e0, Known::Window(IndexInterval::point(0)), 1, &int(0)).is_err()
        );
    }

    #[test]
    fn limit_samples_constant_and_abscissas() {
        let a1 = a1();
        let w = IndexInterval::new(-6, 6);
        let ones = sample_hermite(&RatPoly::constant(int(1)), 1, &int(0), w);
        let rows = limit_samples(&a1, &ones, Known::Window(w), 2, &int(0)).unwrap();
        assert!(!rows.is_empty());
        for r in &rows {
            assert_eq!(r.values, v(&[int(1), int(0)]));
        }
        let tau = ratio(-1, 2);
        let rows = limit_samples(&a1, &ones, Known::Window(w), 1, &tau).unwrap();
        for r in &rows {
            assert_eq!(r.abscissa, (int(r.index) + &tau) / int(2));
        }
    }

    #[test]
    fn probe_examples() {
        let interp = Mask::new(
            1,
            -1,
            vec![
                RatMatrix::new(
                    2,
                    2,
                    vec![ratio(1, 2), ratio(-1, 8), ratio(3, 4), ratio(-1, 8)],
                )
                .unwrap(),
                dilation(1),
                RatMatrix::new(
                    2,
                    2,
                    vec![ratio(1, 2), ratio(1, 8), ratio(-3, 4), ratio(-1, 8)],
                )
                .unwrap(),
            ],
        )
        .unwrap();
        assert!(interp.is_interpolatory());
        let c0 =
            HermiteSequence::new(1, 0, vec![v(&[int(1), int(3)]), v(&[int(-2), int(1)])]).unwrap();
        let rows = convergence_probe(&interp, &c0, Known::Everywhere, 4).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.deviation.is_zero()));

        let zero =
            convergence_probe(&a1(), &HermiteSequence::zero(1), Known::Everywhere, 3).unwrap();
        assert!(zero.iter().all(|r| r.deviation.is_zero()));

        let e0 = HermiteSequence::delta(1, 0, 0).unwrap();
        let rows = convergence_probe(&a1(), &e0, Known::Everywhere, 5).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(convergence_probe(&a1(), &e0, Known::Everywhere, 1).is_err());
    }

    #[test]
    fn csv_format() {
        let rows = vec![SampleRow {
            index: 1,
            abscissa: ratio(1, 4),
            values: vec![ratio(1, 3), int(-2)],
        }];
        assert_eq!(samples_to_csv(&rows, 1, 5), "x,c0,c1\n0.25,0.33333,-2\n");
        let probe = vec![ProbeRow {
            level: 1,
            deviation: ratio(1, 8),
        }];
        assert_eq!(probe_to_csv(&probe, 17), "level,deviation\n1,0.125\n");
    }
}
