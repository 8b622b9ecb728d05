//! Empirical measures `(1/N^2) sum_{m,n<N} delta_{a^m b^n x}` and the
//! diagnostics built on them: Fourier (Birkhoff) averages, a weak* metric,
//! invariance defects and the semiequidistribution profile.

use std::sync::Arc as Shared;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::orbit::{Orbit, OrbitPoint};
use crate::scalar::Scalar;
use crate::torus::TorusPoint;

/// Default number of Fourier modes compared by the weak* metric.
pub const DEFAULT_FOURIER_ORDER: usize = 16;

/// Default slack applied to semiequidistribution verdicts.
pub const DEFAULT_EQUIDIST_TOLERANCE: f64 = 0.05;

/// `e^{2 pi i k y}` for `k >= 0` evaluated from the exactly reduced phase.
#[inline]
fn character<F: Scalar>(p: &OrbitPoint<'_>, k: u64) -> Complex<F> {
    if k == 0 {
        return Complex::new(F::one(), F::zero());
    }
    let theta = F::TAU() * p.scaled_fraction::<F>(k);
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
fn signed_character<F: Scalar>(p: &OrbitPoint<'_>, k: i64) -> Complex<F> {
    let c = character(p, k.unsigned_abs());
    if k < 0 {
        c.conj()
    } else {
        c
    }
}

/// Truncated Fourier coefficients `c_k`, `0 <= k <= K`, of a probability
/// measure; `c_{-k}` is the conjugate of `c_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients<F> {
    coeffs: Vec<Complex<F>>,
}

impl<F: Scalar> FourierCoefficients<F> {
    /// Builds from `c_0, ..., c_K`. `c_0` is forced to exactly 1.
    pub fn new(mut coeffs: Vec<Complex<F>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("coeffs", "at least c_0 is required"));
        }
        coeffs[0] = Complex::new(F::one(), F::zero());
        Ok(Self { coeffs })
    }

    /// Lebesgue measure: every nonzero mode vanishes.
    pub fn lebesgue(order: usize) -> Self {
        let mut coeffs = vec![Complex::new(F::zero(), F::zero()); order + 1];
        coeffs[0] = Complex::new(F::one(), F::zero());
        Self { coeffs }
    }

    /// The largest stored mode `K`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, k: i64) -> Option<Complex<F>> {
        let c = *self.coeffs.get(k.unsigned_abs() as usize)?;
        Some(if k < 0 { c.conj() } else { c })
    }

    /// `c_0, ..., c_K`.
    pub fn nonnegative(&self) -> &[Complex<F>] {
        &self.coeffs
    }
}

/// `sum_{1 <= |k| <= K} 2^{-|k|} |mu_k - nu_k|`.
pub fn weak_star_distance<F: Scalar>(
    mu: &FourierCoefficients<F>,
    nu: &FourierCoefficients<F>,
) -> Result<F> {
    if mu.order() != nu.order() {
        return Err(Error::MismatchedOrder {
            left: mu.order(),
            right: nu.order(),
        });
    }
    let two = F::of(2.0);
    let mut weight = F::one();
    let mut total = F::zero();
    for k in 1..=mu.order() {
        weight /= two;
        total += weight * (mu.coeffs[k] - nu.coeffs[k]).norm();
    }
    // the k and -k terms contribute equally
    Ok(two * total)
}

/// Orbit point and multipliers an empirical measure was built from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureSource {
    pub x: TorusPoint,
    pub a: u64,
    pub b: u64,
}

/// The `N`-empirical measure of a point, as a histogram over `I_d` plus
/// Fourier coefficients up to order `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure<F> {
    horizon: usize,
    counts: Vec<u64>,
    weights: Vec<F>,
    fourier: FourierCoefficients<F>,
    source: MeasureSource,
}

impl<F: Scalar> EmpiricalMeasure<F> {
    /// Histogram depth `d`.
    pub fn depth(&self) -> usize {
        self.counts.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Number of orbit points in each cell; sums to `N^2`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn fourier(&self) -> &FourierCoefficients<F> {
        &self.fourier
    }

    pub fn source(&self) -> &MeasureSource {
        &self.source
    }

    pub fn distance_to(&self, other: &Self) -> Result<F> {
        weak_star_distance(&self.fourier, &other.fourier)
    }
}

fn check_horizon(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("N", "horizon must be at least 1"))
    } else {
        Ok(())
    }
}

/// Builds `delta^N_{x}` with a depth-`d` histogram and modes `0..=K`.
pub fn empirical_measure<F: Scalar>(
    x: &TorusPoint,
    a: u64,
    b: u64,
    horizon: usize,
    depth: usize,
    order: usize,
) -> Result<EmpiricalMeasure<F>> {
    check_horizon(horizon)?;
    if depth == 0 {
        return Err(invalid("d", "histogram depth must be positive"));
    }
    let orbit = Orbit::new(x, a, b)?;
    let d = depth as u64;
    let rows = orbit.rows(
        horizon,
        |_| {
            (
                Vec::with_capacity(horizon),
                vec![Complex::new(F::zero(), F::zero()); order + 1],
            )
        },
        |(cells, sums), _, p| {
            cells.push(p.cell(d) as usize);
            for (k, s) in sums.iter_mut().enumerate() {
                *s += character::<F>(&p, k as u64);
            }
        },
    );
    let mut counts = vec![0u64; depth];
    let mut sums = vec![Complex::new(F::zero(), F::zero()); order + 1];
    for (cells, row) in rows {
        for c in cells {
            counts[c] += 1;
        }
        for (s, r) in sums.iter_mut().zip(row) {
            *s += r;
        }
    }
    let total = F::of_usize(horizon * horizon);
    let weights = counts.iter().map(|&c| F::of(c as f64) / total).collect();
    let coeffs = sums.into_iter().map(|s| s / total).collect();
    Ok(EmpiricalMeasure {
        horizon,
        counts,
        weights,
        fourier: FourierCoefficients::new(coeffs)?,
        source: MeasureSource { x: x.clone(), a, b },
    })
}

/// The Birkhoff average `N^{-2} sum_{m,n<N} e_k(a^m b^n x)`.
pub fn fourier_average<F: Scalar>(
    x: &TorusPoint,
    a: u64,
    b: u64,
    horizon: usize,
    k: i64,
) -> Result<Complex<F>> {
    check_horizon(horizon)?;
    if k == 0 {
        return Ok(Complex::new(F::one(), F::zero()));
    }
    let orbit = Orbit::new(x, a, b)?;
    let sum = orbit
        .rows(
            horizon,
            |_| Complex::new(F::zero(), F::zero()),
            |acc, _, p| *acc += signed_character::<F>(&p, k),
        )
        .into_iter()
        .fold(Complex::new(F::zero(), F::zero()), |s, r| s + r);
    Ok(sum / F::of_usize(horizon * horizon))
}

/// Which generator an invariance defect is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MapChoice {
    A,
    B,
}

/// `|delta^N_x(e_k o T) - delta^N_x(e_k)|` for `T = T_a` or `T_b`; at most
/// `2/N` by telescoping along the chosen direction.
pub fn invariance_defect<F: Scalar>(
    x: &TorusPoint,
    a: u64,
    b: u64,
    horizon: usize,
    k: i64,
    map: MapChoice,
) -> Result<F> {
    check_horizon(horizon)?;
    if k == 0 {
        return Err(invalid("k", "frequency must be nonzero"));
    }
    let orbit = Orbit::new(x, a, b)?;
    let c = match map {
        MapChoice::A => a,
        MapChoice::B => b,
    };
    let shifted = k
        .checked_mul(c as i64)
        .ok_or_else(|| invalid("k", "frequency times multiplier overflows"))?;
    let diff = orbit
        .rows(
            horizon,
            |_| Complex::new(F::zero(), F::zero()),
            |acc, _, p| *acc += signed_character::<F>(&p, shifted) - signed_character::<F>(&p, k),
        )
        .into_iter()
        .fold(Complex::new(F::zero(), F::zero()), |s, r| s + r);
    Ok(diff.norm() / F::of_usize(horizon * horizon))
}

/// For each requested horizon `N_h` (ascending), sums the per-point
/// contributions over the `N_h x N_h` grid. One sweep to the largest
/// horizon: each row keeps its prefix sums at the requested horizons, then
/// rows `m < N_h` are folded in order.
fn horizon_sums<T>(
    orbit: &Orbit<'_>,
    horizons: &[usize],
    width: usize,
    fill: impl Fn(&OrbitPoint<'_>, &mut [T]) + Sync,
) -> Vec<Vec<T>>
where
    T: Copy + Default + std::ops::AddAssign + Send + Sync,
{
    let max = horizons.iter().copied().max().unwrap_or(0);
    let rows = orbit.rows(
        max,
        |_| {
            (
                vec![T::default(); width],
                Vec::with_capacity(horizons.len() * width),
            )
        },
        |(running, snaps), n, p| {
            fill(&p, running);
            for &h in horizons {
                if h == n + 1 {
                    snaps.extend_from_slice(running);
                }
            }
        },
    );
    horizons
        .iter()
        .enumerate()
        .map(|(hi, &h)| {
            let mut out = vec![T::default(); width];
            for (_, snaps) in rows.iter().take(h) {
                for (o, &s) in out.iter_mut().zip(&snaps[hi * width..(hi + 1) * width]) {
                    *o += s;
                }
            }
            out
        })
        .collect()
}

fn check_horizons(horizons: &[usize]) -> Result<()> {
    if horizons.is_empty() {
        return Err(invalid("horizons", "at least one horizon is required"));
    }
    if horizons.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid("horizons", "must be ascending"));
    }
    if horizons[0] == 0 {
        return Err(invalid("horizons", "must be positive"));
    }
    Ok(())
}

/// Weak* distance from `delta^{N_h}_x` to Lebesgue measure at each horizon.
pub fn convergence_diagnostic<F: Scalar>(
    x: &TorusPoint,
    a: u64,
    b: u64,
    horizons: &[usize],
    order: usize,
) -> Result<Vec<F>> {
    check_horizons(horizons)?;
    let orbit = Orbit::new(x, a, b)?;
    if order == 0 {
        return Ok(vec![F::zero(); horizons.len()]);
    }
    let sums = horizon_sums::<F>(&orbit, horizons, 2 * order, |p, out| {
        for k in 1..=order {
            let c = character::<F>(p, k as u64);
            out[2 * (k - 1)] += c.re;
            out[2 * (k - 1) + 1] += c.im;
        }
    });
    let reference = FourierCoefficients::lebesgue(order);
    horizons
        .iter()
        .zip(sums)
        .map(|(&h, s)| {
            let total = F::of_usize(h * h);
            let mut coeffs = vec![Complex::new(F::one(), F::zero())];
            coeffs.extend(
                s.chunks(2)
                    .map(|c| Complex::new(c[0] / total, c[1] / total)),
            );
            weak_star_distance(&FourierCoefficients::new(coeffs)?, &reference)
        })
        .collect()
}

/// An open arc `(start, start + length)` of the circle, or the whole circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleArc {
    start: BigRational,
    length: BigRational,
    full: bool,
}

impl CircleArc {
    /// The open arc `(lo, hi) mod Z`; needs `lo < hi <= lo + 1`. An arc of
    /// length one omits its endpoint.
    pub fn open(lo: BigRational, hi: BigRational) -> Result<Self> {
        let length = &hi - &lo;
        if !length.is_positive() || length > BigRational::one() {
            return Err(invalid("arc", "need lo < hi <= lo + 1"));
        }
        let start = &lo - lo.floor();
        Ok(Self {
            start,
            length,
            full: false,
        })
    }

    pub fn full() -> Self {
        Self {
            start: BigRational::zero(),
            length: BigRational::one(),
            full: true,
        }
    }

    /// Lebesgue measure of the arc.
    pub fn measure(&self) -> BigRational {
        self.length.clone()
    }

    /// Exact membership of an orbit point.
    pub fn contains(&self, p: &OrbitPoint<'_>) -> bool {
        if self.full {
            return true;
        }
        if let OrbitPoint::Small { num, den } = *p {
            if let Some(inside) = self.contains_small(num, den) {
                return inside;
            }
        }
        self.contains_big(&p.num_big(), &p.den_big())
    }

    fn contains_small(&self, num: u64, den: u64) -> Option<bool> {
        let small = |v: &BigInt| v.to_i128().filter(|x| x.unsigned_abs() < (1 << 31));
        let (sn, sd) = (small(self.start.numer())?, small(self.start.denom())?);
        let (ln, ld) = (small(self.length.numer())?, small(self.length.denom())?);
        if den >= 1 << 63 {
            return None;
        }
        let (r, d) = (num as i128, den as i128);
        // y - start = (r sd - sn d) / (d sd), reduced mod 1
        let modulus = d * sd;
        let u = (r * sd - sn * d).rem_euclid(modulus);
        Some(u > 0 && u * ld < ln * modulus)
    }

    fn contains_big(&self, num: &BigUint, den: &BigUint) -> bool {
        let (r, d) = (BigInt::from(num.clone()), BigInt::from(den.clone()));
        let (sn, sd) = (self.start.numer(), self.start.denom());
        let modulus = &d * sd;
        let u = (&r * sd - sn * &d).mod_floor(&modulus);
        u.is_positive() && &u * self.length.denom() < self.length.numer() * &modulus
    }
}

/// A nonnegative continuous test function with its Lebesgue integral.
#[derive(Clone)]
pub struct TestFunction<F> {
    pub f: Shared<dyn Fn(F) -> F + Send + Sync>,
    pub integral: F,
}

impl<F> std::fmt::Debug for TestFunction<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("TestFunction")
    }
}

/// What a semiequidistribution profile averages.
#[derive(Clone, Debug)]
pub enum Target<F> {
    Arc(CircleArc),
    Function(TestFunction<F>),
}

impl<F: Scalar> Target<F> {
    fn reference(&self) -> F {
        match self {
            Target::Arc(arc) => F::of(arc.measure().to_f64().unwrap_or(f64::NAN)),
            Target::Function(tf) => tf.integral,
        }
    }
}

/// Finite-horizon record of `(1/N^2) sum f(a^m b^n x)` against
/// `t * int f dm`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemiEquidistReport<F> {
    pub t_claim: F,
    /// `m(U)` or `int f dm`.
    pub reference: F,
    pub horizons: Vec<usize>,
    pub averages: Vec<F>,
    /// Minimum of the averages over the last quartile of horizons.
    pub liminf_estimate: F,
    pub tolerance: F,
    pub threshold: F,
    pub pass: bool,
}

/// Profiles the visit frequency of the orbit to a target. The verdict passes
/// iff the minimum over the last quartile of horizons is at least
/// `t_claim * reference - tolerance`.
pub fn semiequidist_profile<F: Scalar>(
    x: &TorusPoint,
    a: u64,
    b: u64,
    target: &Target<F>,
    horizons: &[usize],
    t_claim: F,
    tolerance: F,
) -> Result<SemiEquidistReport<F>> {
    check_horizons(horizons)?;
    if !(t_claim > F::zero() && t_claim <= F::one()) {
        return Err(invalid("t_claim", "must lie in (0, 1]"));
    }
    let orbit = Orbit::new(x, a, b)?;
    let averages: Vec<F> = match target {
        Target::Arc(arc) => {
            let counts = horizon_sums::<u64>(&orbit, horizons, 1, |p, out| {
                if arc.contains(p) {
                    out[0] += 1;
                }
            });
            horizons
                .iter()
                .zip(counts)
                .map(|(&h, c)| F::of(c[0] as f64) / F::of_usize(h * h))
                .collect()
        }
        Target::Function(tf) => {
            let sums = horizon_sums::<F>(&orbit, horizons, 1, |p, out| {
                out[0] += (tf.f)(p.fraction::<F>());
            });
            horizons
                .iter()
                .zip(sums)
                .map(|(&h, s)| s[0] / F::of_usize(h * h))
                .collect()
        }
    };
    let quartile = horizons.len().div_ceil(4);
    let liminf_estimate = averages[averages.len() - quartile..]
        .iter()
        .copied()
        .fold(F::infinity(), F::min);
    let reference = target.reference();
    let threshold = t_claim * reference - tolerance;
    Ok(SemiEquidistReport {
        t_claim,
        reference,
        horizons: horizons.to_vec(),
        averages,
        liminf_estimate,
        tolerance,
        threshold,
        pass: liminf_estimate >= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(p: i64, q: i64) -> TorusPoint {
        TorusPoint::new(p, q).unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn measure_of_fixed_point_is_dirac() {
        let mu = empirical_measure::<f64>(&TorusPoint::zero(), 2, 3, 5, 4, 3).unwrap();
        assert_eq!(mu.counts(), &[25, 0, 0, 0]);
        for k in -3..=3 {
            assert_eq!(mu.fourier().get(k).unwrap(), Complex::new(1.0, 0.0));
        }
    }

    #[test]
    fn measure_of_one_fifth() {
        // orbit points 1/5, 3/5, 2/5, 1/5
        let mu = empirical_measure::<f64>(&pt(1, 5), 2, 3, 2, 5, 2).unwrap();
        assert_eq!(mu.weights(), &[0.0, 0.5, 0.25, 0.25, 0.0]);
        assert_eq!(mu.counts(), &[0, 2, 1, 1, 0]);
    }

    #[test]
    fn fourier_average_examples() {
        let c = fourier_average::<f64>(&pt(1, 2), 2, 3, 2, 1).unwrap();
        assert!(c.norm() < 1e-15);
        let c = fourier_average::<f64>(&TorusPoint::zero(), 2, 3, 7, 5).unwrap();
        assert_eq!(c, Complex::new(1.0, 0.0));
        let c = fourier_average::<f64>(&pt(3, 11), 2, 3, 7, 0).unwrap();
        assert_eq!(c, Complex::new(1.0, 0.0));
        let mu = empirical_measure::<f64>(&pt(3, 11), 2, 3, 7, 3, 4).unwrap();
        for k in -4i64..=4 {
            let direct = fourier_average::<f64>(&pt(3, 11), 2, 3, 7, k).unwrap();
            assert!((direct - mu.fourier().get(k).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn weak_star_examples() {
        let delta = empirical_measure::<f64>(&TorusPoint::zero(), 2, 3, 3, 1, 2).unwrap();
        let leb = FourierCoefficients::lebesgue(2);
        assert!((weak_star_distance(delta.fourier(), &leb).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(delta.distance_to(&delta).unwrap(), 0.0);
        let other = empirical_measure::<f64>(&pt(2, 7), 2, 3, 3, 1, 2).unwrap();
        assert_eq!(
            delta.distance_to(&other).unwrap(),
            other.distance_to(&delta).unwrap()
        );
        assert!(weak_star_distance(&leb, &FourierCoefficients::<f64>::lebesgue(3)).is_err());
    }

    #[test]
    fn invariance_defect_examples() {
        let z = invariance_defect::<f64>(&TorusPoint::zero(), 2, 3, 10, 1, MapChoice::A).unwrap();
        assert_eq!(z, 0.0);
        let x = pt(17, 1013);
        let (a, b, n, k) = (2u64, 3u64, 12usize, 1i64);
        let defect = invariance_defect::<f64>(&x, a, b, n, k, MapChoice::A).unwrap();
        // telescoped form: only the m = N and m = 0 layers survive
        let mut tele = Complex::new(0.0, 0.0);
        let mut y = x.clone();
        for _ in 0..n {
            let top = (0..n).fold(y.clone(), |p, _| p.times(a));
            tele += Complex::from_polar(1.0, std::f64::consts::TAU * top.to_f64())
                - Complex::from_polar(1.0, std::f64::consts::TAU * y.to_f64());
            y = y.times(b);
        }
        let tele = tele.norm() / (n * n) as f64;
        assert!((defect - tele).abs() < 1e-12);
        assert!(defect <= 2.0 / n as f64);
    }

    #[test]
    fn convergence_examples() {
        let d = convergence_diagnostic::<f64>(&TorusPoint::zero(), 2, 3, &[1, 4, 9], 2).unwrap();
        assert_eq!(d, vec![1.5, 1.5, 1.5]);
        let d = convergence_diagnostic::<f64>(&pt(5, 97), 2, 3, &[3, 8], 0).unwrap();
        assert_eq!(d, vec![0.0, 0.0]);
        assert!(convergence_diagnostic::<f64>(&pt(5, 97), 2, 3, &[], 2).is_err());
    }

    #[test]
    fn horizon_sums_match_direct_measures() {
        let x = pt(123, 4567);
        let horizons = [2, 5, 5, 11];
        let d = convergence_diagnostic::<f64>(&x, 3, 5, &horizons, 4).unwrap();
        for (&h, dist) in horizons.iter().zip(d) {
            let mu = empirical_measure::<f64>(&x, 3, 5, h, 1, 4).unwrap();
            let direct =
                weak_star_distance(mu.fourier(), &FourierCoefficients::lebesgue(4)).unwrap();
            assert!((direct - dist).abs() < 1e-12, "h={h}: {direct} vs {dist}");
        }
    }

    #[test]
    fn arc_membership() {
        let arc = CircleArc::open(q(-1, 10), q(1, 10)).unwrap();
        assert!(arc.contains(&OrbitPoint::Small { num: 0, den: 1 }));
        assert!(arc.contains(&OrbitPoint::Small { num: 95, den: 100 }));
        assert!(!arc.contains(&OrbitPoint::Small { num: 9, den: 10 }));
        assert!(!arc.contains(&OrbitPoint::Small { num: 1, den: 10 }));
        let big_den = BigUint::from(10u32).pow(30);
        let big_num = BigUint::from(5u32) * BigUint::from(10u32).pow(28);
        let p = OrbitPoint::Big {
            num: &big_num,
            den: &big_den,
        };
        assert!(arc.contains(&p));
        let half = CircleArc::open(q(0, 1), q(1, 2)).unwrap();
        assert!(!half.contains(&OrbitPoint::Small { num: 0, den: 1 }));
        assert!(!half.contains(&OrbitPoint::Small { num: 1, den: 2 }));
        assert!(half.contains(&OrbitPoint::Small { num: 1, den: 3 }));
        assert!(CircleArc::open(q(1, 2), q(1, 2)).is_err());
    }

    #[test]
    fn semiequidist_examples() {
        let stuck = TorusPoint::zero();
        let middle = Target::Arc(CircleArc::open(q(2, 5), q(3, 5)).unwrap());
        let r =
            semiequidist_profile::<f64>(&stuck, 2, 3, &middle, &[5, 10, 20], 0.5, 0.05).unwrap();
        assert!(r.averages.iter().all(|&v| v == 0.0));
        assert!(!r.pass);
        let around_zero = Target::Arc(CircleArc::open(q(-1, 10), q(1, 10)).unwrap());
        let r = semiequidist_profile::<f64>(&stuck, 2, 3, &around_zero, &[5, 10, 20], 1.0, 0.05)
            .unwrap();
        assert!(r.averages.iter().all(|&v| v == 1.0));
        assert!(r.pass);
        let whole = Target::Arc(CircleArc::full());
        let r = semiequidist_profile::<f64>(&pt(3, 7), 2, 3, &whole, &[4, 9], 1.0, 0.0).unwrap();
        assert_eq!(r.averages, vec![1.0, 1.0]);
        assert!(semiequidist_profile::<f64>(&stuck, 2, 3, &whole, &[], 1.0, 0.0).is_err());
        assert!(semiequidist_profile::<f64>(&stuck, 2, 3, &whole, &[3], 0.0, 0.0).is_err());
    }

    #[test]
    fn semiequidist_with_test_function() {
        let f = TestFunction::<f64> {
            f: Shared::new(|y: f64| 1.0 + (std::f64::consts::TAU * y).cos()),
            integral: 1.0,
        };
        let x = pt(1, 7);
        let r =
            semiequidist_profile(&x, 2, 3, &Target::Function(f.clone()), &[6], 0.5, 0.0).unwrap();
        let c = fourier_average::<f64>(&x, 2, 3, 6, 1).unwrap();
        assert!((r.averages[0] - (1.0 + c.re)).abs() < 1e-12);
    }
}
