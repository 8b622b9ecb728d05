//! k-distributions, Shannon entropy, type-class counting and the
//! dimension-bound formulas for points with low entropy under `T_a`.
//!
//! Symbols are `0..k`. Logarithms are natural.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::numtheory::ln_biguint;
use crate::orbit::trajectory;
use crate::scalar::Scalar;
use crate::torus::TorusPoint;

/// Slack on entropy threshold comparisons in [`count_r`]; ties count as
/// inside.
pub const ENTROPY_TOLERANCE: f64 = 1e-12;

/// Largest alphabet `d^M` an itinerary may use.
pub const MAX_ITINERARY_ALPHABET: u64 = 1 << 24;

/// A probability vector on `k` symbols. Instances built from counts keep
/// the counts so that the rational values stay exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KDistribution<F> {
    p: Vec<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<Vec<u64>>,
}

impl<F: Scalar> KDistribution<F> {
    /// Validates nonnegativity and `sum p = 1` up to `1e-12` (or a few ulps
    /// of `F` when `F` is coarser).
    pub fn new(p: Vec<F>) -> Result<Self> {
        if p.is_empty() {
            return Err(invalid("p", "at least one symbol is required"));
        }
        if p.iter().any(|v| !(*v >= F::zero())) {
            return Err(invalid("p", "entries must be nonnegative"));
        }
        let tol = (F::epsilon().to_f64_lossy() * 4.0 * p.len() as f64).max(1e-12);
        let sum: f64 = p.iter().map(|v| v.to_f64_lossy()).sum();
        if (sum - 1.0).abs() > tol {
            return Err(invalid("p", format!("entries sum to {sum}, not 1")));
        }
        Ok(Self { p, counts: None })
    }

    /// `p_i = counts_i / sum(counts)`.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(invalid("counts", "total count must be positive"));
        }
        let t = total as f64;
        Ok(Self {
            p: counts.iter().map(|&c| F::of(c as f64 / t)).collect(),
            counts: Some(counts),
        })
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    pub fn probs(&self) -> &[F] {
        &self.p
    }

    pub fn counts(&self) -> Option<&[u64]> {
        self.counts.as_deref()
    }

    /// Exact values, available for count-backed instances.
    pub fn rationals(&self) -> Option<Vec<BigRational>> {
        let counts = self.counts.as_ref()?;
        let total: u64 = counts.iter().sum();
        Some(
            counts
                .iter()
                .map(|&c| BigRational::new(c.into(), total.into()))
                .collect(),
        )
    }

    pub fn entropy(&self) -> F {
        entropy(self)
    }
}

/// `H(p) = -sum p_i log p_i` with `0 log 0 = 0`.
pub fn entropy<F: Scalar>(p: &KDistribution<F>) -> F {
    if let Some(counts) = &p.counts {
        let total: u64 = counts.iter().sum();
        return F::of(count_entropy(counts.iter().copied(), total));
    }
    let h: F =
        p.p.iter()
            .filter(|v| **v > F::zero())
            .map(|&v| -v * v.ln())
            .sum();
    h.max(F::zero())
}

// sum (c/N) log(N/c), each term nonnegative.
fn count_entropy(counts: impl Iterator<Item = u64>, total: u64) -> f64 {
    let n = total as f64;
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let c = c as f64;
            c / n * (n / c).ln()
        })
        .sum()
}

/// Empirical symbol distribution of a word over `0..k`.
pub fn dist<F: Scalar>(word: &[u32], k: usize) -> Result<KDistribution<F>> {
    if word.is_empty() {
        return Err(invalid("word", "must be nonempty"));
    }
    if k == 0 {
        return Err(invalid("k", "alphabet must be nonempty"));
    }
    let mut counts = vec![0u64; k];
    for &s in word {
        let slot = counts
            .get_mut(s as usize)
            .ok_or_else(|| invalid("word", format!("symbol {s} outside 0..{k}")))?;
        *slot += 1;
    }
    KDistribution::from_counts(counts)
}

/// `|R(k, N, t)|`: the number of words of length `N` over `k` symbols
/// whose symbol distribution has entropy at most `t`.
///
/// Sums multinomial coefficients over all compositions of `N` into `k`
/// parts; the first part is split across threads and the partial sums are
/// added in order.
pub fn count_r(k: usize, n: usize, t: f64) -> Result<BigUint> {
    if k == 0 {
        return Err(invalid("k", "alphabet must be nonempty"));
    }
    if n == 0 {
        return Err(invalid("N", "word length must be positive"));
    }
    if !(t >= 0.0) {
        return Err(invalid("t", "threshold must be nonnegative"));
    }
    let nf = n as f64;
    // c log c for each possible part, so H = log N - (1/N) sum c log c
    let clogc: Vec<f64> = (0..=n)
        .map(|c| {
            if c == 0 {
                0.0
            } else {
                c as f64 * (c as f64).ln()
            }
        })
        .collect();
    let limit = t + ENTROPY_TOLERANCE;
    let ln_n = nf.ln();

    // binom(n, c) for all c
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    for i in 0..=n {
        row.push(c.clone());
        c = c * (n - i) / (i + 1);
    }

    struct Walk<'a> {
        k: usize,
        n: usize,
        clogc: &'a [f64],
        limit: f64,
        ln_n: f64,
    }

    impl Walk<'_> {
        // Parts `level..k` sum to `rem`; `acc` is the partial sum of c log c.
        fn go(&self, level: usize, rem: usize, mult: &BigUint, acc: f64, out: &mut BigUint) {
            if level + 1 == self.k {
                let s = acc + self.clogc[rem];
                let h = self.ln_n - s / self.n as f64;
                if h <= self.limit {
                    *out += mult;
                }
                return;
            }
            let mut binom = BigUint::one();
            for c in 0..=rem {
                let next = mult * &binom;
                self.go(level + 1, rem - c, &next, acc + self.clogc[c], out);
                binom = binom * (rem - c) / (c + 1);
            }
        }
    }

    let walk = Walk {
        k,
        n,
        clogc: &clogc,
        limit,
        ln_n,
    };
    if k == 1 {
        return Ok(BigUint::one());
    }
    let parts: Vec<BigUint> = (0..=n)
        .into_par_iter()
        .map(|first| {
            let mut out = BigUint::zero();
            walk.go(1, n - first, &row[first], clogc[first], &mut out);
            out
        })
        .collect();
    Ok(parts.into_iter().fold(BigUint::zero(), |s, p| s + p))
}

/// One row of a growth profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthPoint<F> {
    pub n: usize,
    /// `(1/N) log |R(k, N, t)|`.
    pub value: F,
    /// `t + k log(N + 1) / N`.
    pub bound: F,
}

/// `t + k log(N+1)/N`: at most `(N+1)^k` compositions, each contributing at
/// most `e^{N t}` words.
pub fn growth_bound(k: usize, n: usize, t: f64) -> f64 {
    t + k as f64 * ((n + 1) as f64).ln() / n as f64
}

/// `(1/N) log |R(k, N, t)|` for each `N` in ascending `ns`.
pub fn growth_profile<F: Scalar>(k: usize, t: f64, ns: &[usize]) -> Result<Vec<GrowthPoint<F>>> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("N_list", "must be strictly ascending"));
    }
    ns.iter()
        .map(|&n| {
            let count = count_r(k, n, t)?;
            Ok(GrowthPoint {
                n,
                value: F::of(ln_biguint(&count) / n as f64),
                bound: F::of(growth_bound(k, n, t)),
            })
        })
        .collect()
}

/// The `N`-choice of `x` for `T_a` with respect to `alpha_M`, the `M`-fold
/// `T_a`-refinement of the partition `I_d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChoiceRecord<F> {
    pub x: TorusPoint,
    pub a: u64,
    pub d: u64,
    pub m: usize,
    pub n: usize,
    /// `alpha_M`-cell of `T_a^j x`, `j < N`, written as the base-`d` number
    /// of its `M` consecutive `I_d` cells.
    pub indices: Vec<u32>,
    /// `dist(indices)` over `d^M` symbols.
    pub q: KDistribution<F>,
    /// `q_{M,l} = dist(i_l, i_{l+M}, ...)` for `0 <= l < M`.
    pub q_decimated: Vec<KDistribution<F>>,
}

impl<F: Scalar> ChoiceRecord<F> {
    /// `N q = sum_l |subword_l| q_{M,l}`, checked on the exact counts.
    pub fn decimation_identity_holds(&self) -> bool {
        let Some(total) = self.q.counts() else {
            return false;
        };
        let mut acc = vec![0u64; total.len()];
        for q in &self.q_decimated {
            let Some(c) = q.counts() else { return false };
            for (s, v) in acc.iter_mut().zip(c) {
                *s += v;
            }
        }
        acc == total
    }

    /// Index of a decimated distribution with `H(q_{M,l}) <= H(q)`.
    pub fn dominated_subword(&self) -> Option<usize> {
        let h = entropy(&self.q);
        let slack = F::of(ENTROPY_TOLERANCE);
        self.q_decimated
            .iter()
            .position(|ql| entropy(ql) <= h + slack)
    }
}

/// Itinerary of `x` under `T_a` through the cells of `alpha_M` over the
/// first `N` steps.
pub fn itinerary_choices<F: Scalar>(
    x: &TorusPoint,
    a: u64,
    d: u64,
    m: usize,
    n: usize,
) -> Result<ChoiceRecord<F>> {
    if a < 2 {
        return Err(invalid("a", "multiplier must be at least 2"));
    }
    if d < 2 {
        return Err(invalid("d", "partition needs at least 2 cells"));
    }
    if m == 0 {
        return Err(invalid("M", "refinement depth must be positive"));
    }
    if n < m {
        return Err(invalid("N", "horizon must be at least M"));
    }
    let alphabet = u32::try_from(m)
        .ok()
        .and_then(|m| d.checked_pow(m))
        .filter(|&s| s <= MAX_ITINERARY_ALPHABET)
        .ok_or_else(|| {
            invalid(
                "M",
                format!("alphabet d^M exceeds {MAX_ITINERARY_ALPHABET}"),
            )
        })?;
    let mut cells = Vec::with_capacity(n + m - 1);
    trajectory(x, a, n + m - 1, |_, p| cells.push(p.cell(d)));
    let top = alphabet / d;
    let mut indices = Vec::with_capacity(n);
    let mut cur = cells[..m].iter().fold(0u64, |s, &c| s * d + c);
    indices.push(cur as u32);
    for j in 1..n {
        cur = (cur % top) * d + cells[j + m - 1];
        indices.push(cur as u32);
    }
    let k = alphabet as usize;
    let q = dist(&indices, k)?;
    let q_decimated = (0..m)
        .map(|l| {
            let sub: Vec<u32> = indices[l..].iter().step_by(m).copied().collect();
            dist(&sub, k)
        })
        .collect::<Result<_>>()?;
    Ok(ChoiceRecord {
        x: x.clone(),
        a,
        d,
        m,
        n,
        indices,
        q,
        q_decimated,
    })
}

/// `H(q)/M` for the itinerary record: a finite-horizon stand-in for the
/// entropy of `T_a` relative to `I_d`.
pub fn block_entropy_estimate<F: Scalar>(
    x: &TorusPoint,
    a: u64,
    d: u64,
    m: usize,
    n: usize,
) -> Result<F> {
    let rec = itinerary_choices::<F>(x, a, d, m, n)?;
    Ok(entropy(&rec.q) / F::of_usize(m))
}

fn check_multiplier(name: &'static str, v: u64) -> Result<()> {
    if v < 2 {
        Err(invalid(name, "must be at least 2"))
    } else {
        Ok(())
    }
}

/// `2 sqrt(log b) sqrt(t) / (log a + sqrt(log b) sqrt(t))` without range
/// checks; used for limits at the ends of the admissible interval.
pub fn kt_bound_formula<F: Scalar>(a: u64, b: u64, t: F) -> F {
    let la = F::of((a as f64).ln());
    let root = (F::of((b as f64).ln()) * t).sqrt();
    let two = F::one() + F::one();
    two * root / (la + root)
}

/// Upper bound on the dimension of points whose empirical measures only
/// accumulate on measures of `T_a`-entropy at most `t`. Requires
/// `0 < t < min(log b, (log a)^2 / log b)`.
pub fn kt_bound<F: Scalar>(a: u64, b: u64, t: F) -> Result<F> {
    check_multiplier("a", a)?;
    check_multiplier("b", b)?;
    let (la, lb) = ((a as f64).ln(), (b as f64).ln());
    let tv = t.to_f64_lossy();
    if !(tv > 0.0) {
        return Err(Error::OutOfRange {
            value: tv,
            bound: "t > 0".into(),
        });
    }
    if tv >= lb {
        return Err(Error::OutOfRange {
            value: tv,
            bound: format!("t < log b = {lb}"),
        });
    }
    let cap = la * la / lb;
    if tv >= cap {
        return Err(Error::OutOfRange {
            value: tv,
            bound: format!("t < (log a)^2 / log b = {cap}"),
        });
    }
    Ok(kt_bound_formula(a, b, t))
}

/// `2t / (log a + t)` for `0 < t < log a`.
pub fn q_bound<F: Scalar>(a: u64, t: F) -> Result<F> {
    check_multiplier("a", a)?;
    let la = (a as f64).ln();
    let tv = t.to_f64_lossy();
    if !(tv > 0.0) {
        return Err(Error::OutOfRange {
            value: tv,
            bound: "t > 0".into(),
        });
    }
    if tv >= la {
        return Err(Error::OutOfRange {
            value: tv,
            bound: format!("t < log a = {la}"),
        });
    }
    let two = F::one() + F::one();
    Ok(two * t / (F::of(la) + t))
}
