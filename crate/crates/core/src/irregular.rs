//! Points whose empirical measures oscillate.
//!
//! Digits are base `ab`. Level `k` of a synthesized word copies the digits of
//! a donor point from `X_{k,N_k}` on `[L_{k-1}, N_k)`, fills `[N_k, floor(r L_k))`
//! freely and puts zeros on `[floor(r L_k), L_k)`. Along `N_k` the empirical
//! averages of the test family stay close to Lebesgue measure; along `L_k`
//! the zero block pushes mass onto a neighbourhood of `0`.
//!
//! The condition `m(X_{k,N}) > r` is estimated by Monte Carlo; every
//! synthesized word is then checked directly by [`verify_irregular`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::moran::{MoranStructure, Sequence};
use crate::numtheory::next_prime;
use crate::orbit::{Orbit, OrbitPoint};
use crate::scalar::Scalar;
use crate::torus::{DigitWord, TorusPoint};

/// Floor of the test functions.
pub const DEFAULT_ETA: f64 = 0.01;

/// Donor samples tried per level before giving up.
pub const DEFAULT_SAMPLING_BUDGET: u64 = 1000;

/// Default Monte Carlo sample count for the measure condition.
pub const DEFAULT_MEASURE_SAMPLES: usize = 100;

/// Default upper end of the search for `N_k`.
pub const DEFAULT_MAX_HORIZON: u64 = 20_000;

/// `z` for a two-sided 95% normal interval.
const Z95: f64 = 1.959_963_984_540_054;

/// Denominator of Monte Carlo donor points: the first prime above `10^18`.
/// Random numerators over it behave like Lebesgue-typical points while
/// keeping every orbit step in 128-bit arithmetic.
pub fn donor_denominator() -> u64 {
    next_prime(1_000_000_000_000_000_000)
}

// Independent generator per (seed, stream, index), so parallel sampling does
// not depend on how indices are spread over threads.
fn sub_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn donor_point(seed: u64, stream: u64, index: u64) -> TorusPoint {
    let p = donor_denominator();
    let u = sub_rng(seed, stream, index).gen_range(1..p);
    TorusPoint::new(u, p).expect("nonzero denominator")
}

/// Trigonometric phase of a test function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Cos,
    Sin,
}

/// `psi(x) = eta + (1 - eta)(1 + trig(2 pi j x))/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrigBump {
    pub frequency: u64,
    pub phase: Phase,
}

/// `psi_1, ..., psi_count` with `psi_{2j-1}` the cosine and `psi_{2j}` the
/// sine at frequency `j`. Each lies in `[eta, 1]` and is
/// `(1 - eta) pi j`-Lipschitz; all share the integral `eta + (1 - eta)/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestFamily<F> {
    eta: F,
    functions: Vec<TrigBump>,
}

impl<F: Scalar> TestFamily<F> {
    pub fn count(&self) -> usize {
        self.functions.len()
    }

    pub fn eta(&self) -> F {
        self.eta
    }

    pub fn functions(&self) -> &[TrigBump] {
        &self.functions
    }

    /// `psi_i(x)`, `1 <= i <= count`.
    pub fn eval(&self, i: usize, x: F) -> F {
        let f = self.functions[i - 1];
        let theta = F::TAU() * (F::of(f.frequency as f64) * x).fract();
        let trig = match f.phase {
            Phase::Cos => theta.cos(),
            Phase::Sin => theta.sin(),
        };
        self.shape(trig)
    }

    #[inline]
    fn shape(&self, trig: F) -> F {
        let half = F::of(0.5);
        self.eta + (F::one() - self.eta) * half * (F::one() + trig)
    }

    /// `int psi_i dm = eta + (1 - eta)/2`.
    pub fn integral(&self) -> F {
        (F::one() + self.eta) * F::of(0.5)
    }

    /// Lipschitz constant of `psi_1, ..., psi_k`.
    pub fn lipschitz(&self, k: usize) -> F {
        F::one().sub(self.eta) * F::PI() * F::of(k.div_ceil(2) as f64)
    }

    /// `psi_1(y), ..., psi_k(y)` at an orbit point, with phases reduced
    /// exactly.
    fn eval_point(&self, k: usize, p: &OrbitPoint<'_>, out: &mut [F]) {
        let mut j = 1;
        while 2 * j - 1 <= k {
            let (s, c) = (F::TAU() * p.scaled_fraction::<F>(j as u64)).sin_cos();
            out[2 * j - 2] += self.shape(c);
            if 2 * j <= k {
                out[2 * j - 1] += self.shape(s);
            }
            j += 1;
        }
    }
}

/// The first `count` test functions with floor `eta`.
pub fn build_test_family<F: Scalar>(count: usize, eta: F) -> Result<TestFamily<F>> {
    if count == 0 {
        return Err(invalid("count", "at least one function is required"));
    }
    if !(eta > F::zero() && eta < F::one()) {
        return Err(invalid("eta", "floor must lie in (0, 1)"));
    }
    let functions = (1..=count)
        .map(|i| TrigBump {
            frequency: i.div_ceil(2) as u64,
            phase: if i % 2 == 1 { Phase::Cos } else { Phase::Sin },
        })
        .collect();
    Ok(TestFamily { eta, functions })
}

fn check_level<F: Scalar>(k: usize, family: &TestFamily<F>) -> Result<()> {
    if k == 0 || k > family.count() {
        return Err(invalid("k", format!("must lie in 1..={}", family.count())));
    }
    Ok(())
}

/// `(1/N^2) sum_{m,n<N} psi_i(a^m b^n x)` for `i = 1..=k`.
pub fn family_averages<F: Scalar>(
    x: &TorusPoint,
    a: u64,
    b: u64,
    k: usize,
    horizon: usize,
    family: &TestFamily<F>,
) -> Result<Vec<F>> {
    check_level(k, family)?;
    if horizon == 0 {
        return Err(invalid("N", "horizon must be at least 1"));
    }
    let orbit = Orbit::new(x, a, b)?;
    let rows = orbit.rows(
        horizon,
        |_| vec![F::zero(); k],
        |acc, _, p| family.eval_point(k, &p, acc),
    );
    let total = F::of_usize(horizon * horizon);
    let mut sums = vec![F::zero(); k];
    for row in rows {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    Ok(sums.into_iter().map(|s| s / total).collect())
}

/// Membership in `X_{k,N}`: every `psi_i`, `i <= k`, averages to within
/// `1/(3k)` of its integral along the `N x N` grid.
pub fn membership_x<F: Scalar>(
    x: &TorusPoint,
    a: u64,
    b: u64,
    k: usize,
    horizon: usize,
    family: &TestFamily<F>,
) -> Result<bool> {
    let avgs = family_averages(x, a, b, k, horizon, family)?;
    let tol = F::one() / F::of_usize(3 * k);
    let int = family.integral();
    Ok(avgs.iter().all(|&v| (v - int).abs() < tol))
}

/// Monte Carlo estimate of `m(X_{k,N})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub samples: usize,
    pub hits: usize,
    pub estimate: f64,
    /// Half-width of the 95% normal-approximation interval.
    pub half_width: f64,
}

impl MeasureEstimate {
    pub fn lower(&self) -> f64 {
        self.estimate - self.half_width
    }
}

/// Fraction of `samples` random donor points lying in `X_{k,N}`.
pub fn estimate_x_measure<F: Scalar>(
    a: u64,
    b: u64,
    k: usize,
    horizon: usize,
    family: &TestFamily<F>,
    samples: usize,
    seed: u64,
) -> Result<MeasureEstimate> {
    if samples < 100 {
        return Err(invalid("samples", "at least 100 samples are required"));
    }
    check_level(k, family)?;
    Orbit::new(&TorusPoint::zero(), a, b)?;
    let stream = (1 << 32) | k as u64;
    let hits = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let x = donor_point(seed, stream, i);
            membership_x(&x, a, b, k, horizon, family).map(usize::from)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    let p = hits as f64 / samples as f64;
    Ok(MeasureEstimate {
        samples,
        hits,
        estimate: p,
        half_width: Z95 * (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

/// Smallest `l` with `lip_k (ab)^{-l} < 1/(3k)`, so that points within
/// `(ab)^{-l}` give `psi_1..psi_k` values closer than `1/(3k)`.
pub fn modulus_l<F: Scalar>(a: u64, b: u64, k: usize, family: &TestFamily<F>) -> Result<u32> {
    check_level(k, family)?;
    let ab = check_pair(a, b)? as f64;
    let lip = family.lipschitz(k).to_f64_lossy();
    let target = 1.0 / (3 * k) as f64;
    let mut l = 0u32;
    while lip * ab.powi(-(l as i32)) >= target {
        l += 1;
    }
    Ok(l)
}

fn check_pair(a: u64, b: u64) -> Result<u64> {
    if a < 2 || b < 2 {
        return Err(invalid("a, b", "multipliers must be at least 2"));
    }
    a.checked_mul(b)
        .filter(|&ab| ab <= u32::MAX as u64)
        .ok_or_else(|| invalid("a, b", "digit base ab must fit in 32 bits"))
}

fn check_ratio(r: &BigRational) -> Result<()> {
    if !r.is_positive() || *r >= BigRational::one() {
        return Err(invalid("r", "must lie in (0, 1)"));
    }
    Ok(())
}

fn floor_mul(r: &BigRational, v: u64) -> u64 {
    (r * BigInt::from(v))
        .floor()
        .to_integer()
        .to_u64()
        .expect("0 <= r v < v")
}

fn serialize_rational<S: Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn deserialize_rational<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    crate::moran::rational_from_str(&s).map_err(serde::de::Error::custom)
}

/// `phi`: 1 on `[0, (ab)^{-l}]`, linear down to 0 at `2 (ab)^{-l}`, 0 on the
/// rest of `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpFunction {
    pub a: u64,
    pub b: u64,
    pub l: u32,
    /// `(3/2)(ab)^{-l}`.
    #[serde(
        serialize_with = "serialize_rational",
        deserialize_with = "deserialize_rational"
    )]
    pub integral: BigRational,
}

impl BumpFunction {
    pub fn width(&self) -> f64 {
        ((self.a * self.b) as f64).powi(-(self.l as i32))
    }

    pub fn eval<F: Scalar>(&self, y: F) -> F {
        let w = F::of(self.width());
        if y <= w {
            F::one()
        } else if y < w + w {
            (w + w - y) / w
        } else {
            F::zero()
        }
    }
}

/// The bump with the least `l` such that `3 (ab)^{-l} < (1 - r)^2`, which
/// puts its integral below `(1 - r)^2 / 2`.
pub fn bump_function(a: u64, b: u64, r: &BigRational) -> Result<BumpFunction> {
    let ab = check_pair(a, b)?;
    check_ratio(r)?;
    let gap = (BigRational::one() - r).pow(2);
    let three = BigRational::from_integer(3.into());
    let mut l = 1u32;
    let mut scale = BigRational::new(1.into(), ab.into());
    while &three * &scale >= gap {
        l += 1;
        scale /= BigRational::from_integer(ab.into());
    }
    Ok(BumpFunction {
        a,
        b,
        l,
        integral: scale * BigRational::new(3.into(), 2.into()),
    })
}

/// Controls for the measure-condition search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleTargets {
    pub samples: usize,
    /// Seed for the Monte Carlo estimates.
    pub seed: u64,
    /// Largest `N_k` tried before reporting failure.
    pub max_horizon: u64,
}

impl Default for ScheduleTargets {
    fn default() -> Self {
        Self {
            samples: DEFAULT_MEASURE_SAMPLES,
            seed: 0,
            max_horizon: DEFAULT_MAX_HORIZON,
        }
    }
}

/// `l_k`, `N_k`, `L_k` for `k = 1..=depth`, with the measure estimate that
/// accepted each `N_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub l: Vec<u32>,
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    #[serde(rename = "L")]
    pub big_l: Vec<u64>,
    #[serde(skip_deserializing)]
    pub measure: Vec<Option<MeasureEstimate>>,
}

impl Schedule {
    pub fn depth(&self) -> usize {
        self.n.len()
    }

    /// `sum_{i<k} (N_i + L_i)`, with `N_0 = L_0 = 0`.
    fn prefix(&self, k: usize) -> u64 {
        (0..k - 1).map(|i| self.n[i] + self.big_l[i]).sum()
    }

    fn prev_l(&self, k: usize) -> u64 {
        if k == 1 {
            0
        } else {
            self.big_l[k - 2]
        }
    }
}

fn n_conditions(k: u64, prev_big_l: u64, l_k: u64, prefix: u64, n: u64) -> bool {
    if n <= prev_big_l + l_k {
        return false;
    }
    let (nn, inner) = (n as u128, (n - prev_big_l - l_k) as u128);
    let edge = nn * nn - inner * inner;
    edge * 6 * (k as u128) < nn * nn && (prefix as u128) * (k as u128) < nn
}

fn l_conditions(k: u64, r: &BigRational, n_k: u64, prefix: u64, bump_l: u64, big_l: u64) -> bool {
    let rl = floor_mul(r, big_l);
    if !(n_k < rl && rl < big_l && rl + bump_l < big_l) {
        return false;
    }
    if (prefix as u128 + n_k as u128) * k as u128 >= big_l as u128 {
        return false;
    }
    let one_minus = BigRational::one() - r;
    let lf = BigRational::from_integer(big_l.into());
    let bl = BigRational::from_integer(bump_l.into());
    let lhs =
        (BigRational::from_integer(2.into()) * &one_minus * &bl * &lf - &bl * &bl) / (&lf * &lf);
    lhs < one_minus.pow(2) / BigRational::from_integer(2.into())
}

/// Checks every schedule inequality exactly. Returns the first violation.
pub fn check_schedule(
    r: &BigRational,
    schedule: &Schedule,
    bump_l: u32,
) -> std::result::Result<(), String> {
    let depth = schedule.depth();
    if depth == 0 || schedule.l.len() != depth || schedule.big_l.len() != depth {
        return Err("schedule lists must be nonempty and of equal length".into());
    }
    for k in 1..=depth {
        let (n_k, l_k, big) = (
            schedule.n[k - 1],
            schedule.l[k - 1] as u64,
            schedule.big_l[k - 1],
        );
        let (prev, prefix) = (schedule.prev_l(k), schedule.prefix(k));
        if !n_conditions(k as u64, prev, l_k, prefix, n_k) {
            return Err(format!("level {k}: N_k = {n_k} violates its inequalities"));
        }
        if !l_conditions(k as u64, r, n_k, prefix, bump_l as u64, big) {
            return Err(format!("level {k}: L_k = {big} violates its inequalities"));
        }
    }
    Ok(())
}

/// Builds `l_k`, `N_k`, `L_k` level by level. `N_k` is the least value that
/// passes the exact inequalities and whose estimated `m(X_{k,N_k})` has a
/// 95% lower confidence bound above `r`; `L_k` is the least value passing
/// its inequalities, including those needed for the bump lower bound.
pub fn choose_schedule<F: Scalar>(
    a: u64,
    b: u64,
    r: &BigRational,
    depth: usize,
    family: &TestFamily<F>,
    targets: &ScheduleTargets,
) -> Result<Schedule> {
    check_pair(a, b)?;
    check_ratio(r)?;
    if depth == 0 {
        return Err(invalid("depth", "at least one level is required"));
    }
    check_level(depth, family)?;
    let bump = bump_function(a, b, r)?;
    let rf = r.to_f64().expect("finite");
    let mut sched = Schedule {
        l: Vec::new(),
        n: Vec::new(),
        big_l: Vec::new(),
        measure: Vec::new(),
    };
    for k in 1..=depth {
        let l_k = modulus_l(a, b, k, family)?;
        let prev = sched.prev_l(k);
        let prefix = if k == 1 { 0 } else { sched.prefix(k) };
        let mut n = prev + l_k as u64 + 1;
        while !n_conditions(k as u64, prev, l_k as u64, prefix, n) {
            n += 1;
        }
        let mut best = (n, f64::NEG_INFINITY);
        let estimate = loop {
            if n > targets.max_horizon {
                return Err(Error::MeasureCondition {
                    level: k,
                    best_n: best.0,
                    best_lower: best.1,
                });
            }
            let est =
                estimate_x_measure(a, b, k, n as usize, family, targets.samples, targets.seed)?;
            if est.lower() > rf {
                break est;
            }
            if est.lower() > best.1 {
                best = (n, est.lower());
            }
            n += (n / 8).max(1);
        };
        let mut big = n + 1;
        while !l_conditions(k as u64, r, n, prefix, bump.l as u64, big) {
            big += 1;
        }
        sched.l.push(l_k);
        sched.n.push(n);
        sched.big_l.push(big);
        sched.measure.push(Some(estimate));
    }
    Ok(sched)
}

/// Inputs of [`synthesize_point`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisInputs {
    pub a: u64,
    pub b: u64,
    #[serde(
        serialize_with = "serialize_rational",
        deserialize_with = "deserialize_rational"
    )]
    pub r: BigRational,
    pub depth: usize,
    pub eta: f64,
    pub targets: ScheduleTargets,
    pub sampling_budget: u64,
}

impl SynthesisInputs {
    pub fn new(a: u64, b: u64, r: BigRational, depth: usize) -> Self {
        Self {
            a,
            b,
            r,
            depth,
            eta: DEFAULT_ETA,
            targets: ScheduleTargets::default(),
            sampling_budget: DEFAULT_SAMPLING_BUDGET,
        }
    }
}

/// Digits written at one level, with SHA-256 digests of their text form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelBlocks {
    pub level: usize,
    /// The accepted member of `X_{k,N_k}`.
    pub donor: TorusPoint,
    pub donor_index: u64,
    /// Digits on `[L_{k-1}, N_k)`, copied from the donor.
    pub donor_block: String,
    pub donor_sha256: String,
    /// Digits on `[N_k, floor(r L_k))`.
    pub free_block: String,
    pub free_sha256: String,
    /// `floor(r L_k)`; zeros fill `[zero_start, L_k)`.
    pub zero_start: u64,
}

/// Everything needed to rebuild and re-verify a synthesized word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrregularRecipe {
    pub a: u64,
    pub b: u64,
    #[serde(
        serialize_with = "serialize_rational",
        deserialize_with = "deserialize_rational"
    )]
    pub r: BigRational,
    pub depth: usize,
    pub eta: f64,
    pub seed: u64,
    pub schedule: Schedule,
    pub bump: BumpFunction,
    pub blocks: Vec<LevelBlocks>,
}

impl IrregularRecipe {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("recipe serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn digit_text(base: u32, digits: &[u32]) -> String {
    DigitWord::new(base, digits.to_vec())
        .expect("digits below base")
        .to_string()
        .split_once(':')
        .map(|(_, d)| d.to_string())
        .unwrap_or_default()
}

fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// Builds a base-`ab` word of length `L_depth` following a freshly chosen
/// schedule. Pure in `(inputs, seed)`.
pub fn synthesize_point(
    inputs: &SynthesisInputs,
    seed: u64,
) -> Result<(DigitWord, IrregularRecipe)> {
    let (a, b) = (inputs.a, inputs.b);
    let ab = check_pair(a, b)?;
    let family = build_test_family::<f64>(inputs.depth.max(1), inputs.eta)?;
    let schedule = choose_schedule(a, b, &inputs.r, inputs.depth, &family, &inputs.targets)?;
    let bump = bump_function(a, b, &inputs.r)?;
    let total = *schedule.big_l.last().expect("depth >= 1") as usize;
    let mut digits = vec![0u32; total];
    let mut blocks = Vec::with_capacity(inputs.depth);
    for k in 1..=inputs.depth {
        let n_k = schedule.n[k - 1] as usize;
        let prev = schedule.prev_l(k) as usize;
        let big = schedule.big_l[k - 1];
        let zero_start = floor_mul(&inputs.r, big);

        let stream = (2 << 32) | k as u64;
        let mut found = None;
        for i in 0..inputs.sampling_budget {
            let x = donor_point(seed, stream, i);
            if membership_x(&x, a, b, k, n_k, &family)? {
                found = Some((i, x));
                break;
            }
        }
        let (donor_index, donor) = found.ok_or(Error::SamplingExhausted {
            level: k,
            budget: inputs.sampling_budget,
        })?;
        let donor_digits = donor.digits(ab as u32, n_k)?;
        digits[prev..n_k].copy_from_slice(&donor_digits.digits()[prev..n_k]);

        let mut rng = sub_rng(seed, (3 << 32) | k as u64, 0);
        for d in &mut digits[n_k..zero_start as usize] {
            *d = rng.gen_range(0..ab as u32);
        }

        let donor_block = digit_text(ab as u32, &digits[prev..n_k]);
        let free_block = digit_text(ab as u32, &digits[n_k..zero_start as usize]);
        blocks.push(LevelBlocks {
            level: k,
            donor,
            donor_index,
            donor_sha256: sha256_hex(&donor_block),
            donor_block,
            free_sha256: sha256_hex(&free_block),
            free_block,
            zero_start,
        });
    }
    let word = DigitWord::new(ab as u32, digits)?;
    let recipe = IrregularRecipe {
        a,
        b,
        r: inputs.r.clone(),
        depth: inputs.depth,
        eta: inputs.eta,
        seed,
        schedule,
        bump,
        blocks,
    };
    Ok((word, recipe))
}

/// Per-level verification results.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport<F> {
    pub level: usize,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "L")]
    pub big_l: u64,
    /// `delta^{N_k}(psi_i)` for `i <= k`.
    pub averages: Vec<F>,
    pub integral: F,
    /// `1/k - max_i |delta^{N_k}(psi_i) - int psi_i dm|`.
    pub margin_a: F,
    pub pass_a: bool,
    /// `delta^{L_k}(phi)`.
    pub bump_average: F,
    /// `(1 - r)^2 / 2`.
    pub threshold_b: F,
    pub margin_b: F,
    pub pass_b: bool,
    /// `(L_k - l - floor(r L_k))^2 / L_k^2`, the share of the grid forced
    /// into `[0, (ab)^{-l}]` by the zero block.
    pub zero_block_bound: F,
    /// Digits on `[floor(r L_k), L_k)` are all zero.
    pub zero_block_ok: bool,
    /// Digits on `[L_{k-1}, N_k)` match the donor and its digest.
    pub donor_block_ok: bool,
}

/// Outcome of [`verify_irregular`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrregularReport<F> {
    pub point: TorusPoint,
    pub schedule_ok: bool,
    pub schedule_error: Option<String>,
    pub levels: Vec<LevelReport<F>>,
    pub pass: bool,
}

/// Checks a word against its recipe: the literal digit constraints, the
/// schedule inequalities, and at every level `k`
///
/// * (A) `|delta^{N_k}(psi_i) - int psi_i dm| < 1/k` for `i <= k`;
/// * (B) `delta^{L_k}(phi) > (1 - r)^2 / 2`.
pub fn verify_irregular<F: Scalar>(
    word: &DigitWord,
    recipe: &IrregularRecipe,
) -> Result<IrregularReport<F>> {
    let (a, b) = (recipe.a, recipe.b);
    let ab = check_pair(a, b)? as u32;
    let sched = &recipe.schedule;
    if recipe.depth == 0 || sched.depth() != recipe.depth || recipe.blocks.len() != recipe.depth {
        return Err(invalid(
            "recipe",
            "depth does not match schedule and blocks",
        ));
    }
    if word.base() != ab {
        return Err(invalid(
            "word",
            format!("expected base {ab}, found {}", word.base()),
        ));
    }
    let total = *sched.big_l.last().expect("depth >= 1") as usize;
    if word.len() < total {
        return Err(invalid(
            "word",
            format!("length {} below L_depth = {total}", word.len()),
        ));
    }
    let family = build_test_family::<F>(recipe.depth, F::of(recipe.eta))?;
    let schedule_error = check_schedule(&recipe.r, sched, recipe.bump.l).err();
    let x = word.point();
    let orbit = Orbit::new(&x, a, b)?;
    let one_minus = BigRational::one() - &recipe.r;
    let threshold_b = F::of(
        (one_minus.pow(2) / BigRational::from_integer(2.into()))
            .to_f64()
            .expect("finite"),
    );
    let digits = word.digits();

    let mut levels = Vec::with_capacity(recipe.depth);
    for k in 1..=recipe.depth {
        let n_k = sched.n[k - 1];
        let big = sched.big_l[k - 1];
        let prev = sched.prev_l(k) as usize;
        let blocks = &recipe.blocks[k - 1];

        let averages = family_averages(&x, a, b, k, n_k as usize, &family)?;
        let integral = family.integral();
        let worst = averages
            .iter()
            .map(|&v| (v - integral).abs())
            .fold(F::zero(), F::max);
        let margin_a = F::one() / F::of_usize(k) - worst;

        let bump = &recipe.bump;
        let sum = orbit
            .rows(
                big as usize,
                |_| F::zero(),
                |acc, _, p| *acc += bump.eval(p.fraction::<F>()),
            )
            .into_iter()
            .fold(F::zero(), |s, v| s + v);
        let bump_average = sum / F::of_usize((big * big) as usize);
        let margin_b = bump_average - threshold_b;

        let zs = blocks.zero_start as usize;
        let zero_block_ok = zs == floor_mul(&recipe.r, big) as usize
            && digits[zs..big as usize].iter().all(|&d| d == 0);
        let forced = big.saturating_sub(bump.l as u64 + blocks.zero_start) as f64;
        let zero_block_bound = F::of(forced * forced / (big as f64 * big as f64));

        let block_text = digit_text(ab, &digits[prev..n_k as usize]);
        let donor_block_ok = blocks
            .donor
            .digits(ab, n_k as usize)
            .map(|w| w.digits()[prev..] == digits[prev..n_k as usize])
            .unwrap_or(false)
            && block_text == blocks.donor_block
            && sha256_hex(&block_text) == blocks.donor_sha256;

        levels.push(LevelReport {
            level: k,
            n: n_k,
            big_l: big,
            averages,
            integral,
            margin_a,
            pass_a: margin_a > F::zero(),
            bump_average,
            threshold_b,
            margin_b,
            pass_b: margin_b > F::zero(),
            zero_block_bound,
            zero_block_ok,
            donor_block_ok,
        });
    }
    let schedule_ok = schedule_error.is_none();
    let pass = schedule_ok
        && levels
            .iter()
            .all(|l| l.pass_a && l.pass_b && l.zero_block_ok && l.donor_block_ok);
    Ok(IrregularReport {
        point: x,
        schedule_ok,
        schedule_error,
        levels,
        pass,
    })
}

/// The Moran structure carried by the digit constraints of a schedule.
/// Level `k` contributes one step for the donor cylinders, one step of `ab`
/// children per free digit and one step for the zero block. The donor count
/// is the lower bound `floor(r (ab)^{N_k - L_{k-1}}) + 1`.
pub fn induced_moran_structure(
    a: u64,
    b: u64,
    r: &BigRational,
    schedule: &Schedule,
) -> Result<MoranStructure> {
    let ab = check_pair(a, b)?;
    check_ratio(r)?;
    let abq = BigRational::from_integer(ab.into());
    let mut n = Vec::new();
    let mut c = Vec::new();
    for k in 1..=schedule.depth() {
        let (n_k, big) = (schedule.n[k - 1], schedule.big_l[k - 1]);
        let prev = schedule.prev_l(k);
        let span = (n_k - prev) as u32;
        let cells = BigUint::from(ab).pow(span);
        let count = (r * BigRational::from_integer(BigInt::from(cells.clone())))
            .floor()
            .to_integer()
            .to_biguint()
            .expect("nonnegative")
            + 1u32;
        n.push(count);
        c.push(abq.pow(-(span as i32)));
        let rl = floor_mul(r, big);
        for _ in n_k..rl {
            n.push(BigUint::from(ab));
            c.push(abq.recip());
        }
        n.push(BigUint::one());
        c.push(abq.pow(-((big - rl) as i32)));
    }
    if n.iter().any(Zero::is_zero) {
        return Err(invalid("schedule", "empty level"));
    }
    MoranStructure::new(Sequence::explicit(n), Sequence::explicit(c))
}
