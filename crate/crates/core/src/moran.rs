//! Homogeneous Moran structures.
//!
//! A structure is given by child counts `n_k >= 1` and contraction ratios
//! `0 < c_k < 1` with `n_k c_k <= 1`. Every level-`(k-1)` interval holds
//! `n_k` children of relative length `c_k` with disjoint interiors. The
//! limit set `E` satisfies `s2 <= dim_H E <= s1` where
//!
//! ```text
//! s1 = liminf log(n_1...n_k) / -log(c_1...c_k)
//! s2 = liminf log(n_1...n_k) / -log(c_1...c_k c_{k+1} n_{k+1})
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numtheory::{ln_bigint, ln_biguint};
use crate::scalar::Scalar;

/// Default cap on the number of intervals a realization may produce.
pub const DEFAULT_INTERVAL_BUDGET: u64 = 1_000_000;

/// Terms discarded before the running minimum of an explicit list.
pub const LIMINF_BURN_IN: usize = 10;

// Validation of periodic structures walks preamble + one full period; the
// period (lcm of the two cycle lengths) is capped.
const MAX_PERIOD: usize = 1 << 20;

/// A sequence indexed from 1: a finite list, or a preamble followed by a
/// cycle repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequence<T> {
    pub preamble: Vec<T>,
    pub cycle: Vec<T>,
}

impl<T> Sequence<T> {
    pub fn explicit(terms: Vec<T>) -> Self {
        Self {
            preamble: terms,
            cycle: Vec::new(),
        }
    }

    pub fn periodic(preamble: Vec<T>, cycle: Vec<T>) -> Self {
        Self { preamble, cycle }
    }

    pub fn is_periodic(&self) -> bool {
        !self.cycle.is_empty()
    }

    /// Number of terms, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        (!self.is_periodic()).then_some(self.preamble.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Term `k >= 1`.
    pub fn get(&self, k: usize) -> Option<&T> {
        let i = k.checked_sub(1)?;
        if i < self.preamble.len() {
            return self.preamble.get(i);
        }
        if self.cycle.is_empty() {
            return None;
        }
        self.cycle.get((i - self.preamble.len()) % self.cycle.len())
    }
}

/// Child counts and ratios of a homogeneous Moran structure.
#[derive(Clone, Debug, PartialEq)]
pub struct MoranStructure {
    n: Sequence<BigUint>,
    c: Sequence<BigRational>,
    ratio_bound: BigRational,
}

impl MoranStructure {
    /// Validates `n_k >= 1`, `0 < c_k < 1` and `n_k c_k <= 1` on every
    /// defined term (one full period for periodic sequences).
    pub fn new(n: Sequence<BigUint>, c: Sequence<BigRational>) -> Result<Self> {
        let len = match (n.len(), c.len()) {
            (None, None) => {
                let period = n.cycle.len().lcm(&c.cycle.len());
                if period > MAX_PERIOD {
                    return Err(invalid("cycle", "combined period too long"));
                }
                n.preamble.len().max(c.preamble.len()) + period
            }
            (Some(l), None) | (None, Some(l)) => l,
            (Some(l), Some(m)) => l.min(m),
        };
        if len == 0 {
            return Err(invalid("structure", "at least one level is required"));
        }
        let mut ratio_bound = BigRational::zero();
        for k in 1..=len {
            let (nk, ck) = (n.get(k).expect("in range"), c.get(k).expect("in range"));
            let fail = |reason: &str| Error::InvalidStructure {
                level: k,
                reason: reason.to_string(),
            };
            if nk.is_zero() {
                return Err(fail("n_k must be positive"));
            }
            if !ck.is_positive() || *ck >= BigRational::one() {
                return Err(fail("c_k must lie in (0, 1)"));
            }
            if BigRational::from(BigInt::from(nk.clone())) * ck > BigRational::one() {
                return Err(fail("n_k c_k exceeds 1"));
            }
            if *ck > ratio_bound {
                ratio_bound = ck.clone();
            }
        }
        Ok(Self { n, c, ratio_bound })
    }

    /// Finite structure from parallel lists.
    pub fn explicit(n: Vec<u64>, c: Vec<BigRational>) -> Result<Self> {
        Self::new(
            Sequence::explicit(n.into_iter().map(BigUint::from).collect()),
            Sequence::explicit(c),
        )
    }

    /// Purely periodic structure; the two cycles may differ in length.
    pub fn periodic(n: Vec<u64>, c: Vec<BigRational>) -> Result<Self> {
        if n.is_empty() || c.is_empty() {
            return Err(invalid("cycle", "cycles must be nonempty"));
        }
        Self::new(
            Sequence::periodic(Vec::new(), n.into_iter().map(BigUint::from).collect()),
            Sequence::periodic(Vec::new(), c),
        )
    }

    /// Number of levels, `None` for eventually periodic structures.
    pub fn levels(&self) -> Option<usize> {
        match (self.n.len(), self.c.len()) {
            (None, None) => None,
            (Some(l), None) | (None, Some(l)) => Some(l),
            (Some(l), Some(m)) => Some(l.min(m)),
        }
    }

    pub fn is_eventually_periodic(&self) -> bool {
        self.levels().is_none()
    }

    pub fn n(&self, k: usize) -> Option<&BigUint> {
        self.n
            .get(k)
            .filter(|_| self.levels().is_none_or(|l| k <= l))
    }

    pub fn c(&self, k: usize) -> Option<&BigRational> {
        self.c
            .get(k)
            .filter(|_| self.levels().is_none_or(|l| k <= l))
    }

    /// `max c_k`, the recorded bound `c_k <= c_bar < 1`.
    pub fn ratio_bound(&self) -> &BigRational {
        &self.ratio_bound
    }

    pub fn counts(&self) -> &Sequence<BigUint> {
        &self.n
    }

    pub fn ratios(&self) -> &Sequence<BigRational> {
        &self.c
    }
}

fn neg_ln_ratio(c: &BigRational) -> f64 {
    ln_bigint(c.denom()) - ln_bigint(c.numer())
}

/// The dimension bounds `s2 <= s1` of a Moran structure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DimensionPair<F> {
    pub s1: F,
    pub s2: F,
    /// The liminfs are exact limits (eventually periodic structure).
    pub exact: bool,
}

/// Evaluates `s1` and `s2`.
///
/// Eventually periodic structures get the exact limit from one period:
/// both ratios converge to `sum log n_k / sum -log c_k` over the cycle.
/// Explicit lists use the running minimum of the ratios for
/// `k <= max_level`, skipping the first [`LIMINF_BURN_IN`] terms when
/// enough are available; `s2` needs term `k + 1` and stops one level short
/// when the list ends at `max_level`.
pub fn moran_dims<F: Scalar>(s: &MoranStructure, max_level: usize) -> Result<DimensionPair<F>> {
    if max_level < 2 {
        return Err(invalid("K", "at least two levels are required"));
    }
    if s.is_eventually_periodic() {
        let start = s.n.preamble.len().max(s.c.preamble.len()) + 1;
        let period = s.n.cycle.len().lcm(&s.c.cycle.len());
        let (mut num, mut den) = (0.0, 0.0);
        for k in start..start + period {
            num += ln_biguint(s.n.get(k).expect("periodic"));
            den += neg_ln_ratio(s.c.get(k).expect("periodic"));
        }
        let v = F::of(num / den);
        return Ok(DimensionPair {
            s1: v,
            s2: v,
            exact: true,
        });
    }
    let levels = s.levels().expect("explicit");
    if max_level > levels {
        return Err(invalid(
            "K",
            format!("structure has only {levels} levels, {max_level} requested"),
        ));
    }
    let mut log_n = Vec::with_capacity(levels + 1);
    let mut log_c = Vec::with_capacity(levels + 1);
    let (mut sn, mut sc) = (0.0, 0.0);
    log_n.push(0.0);
    log_c.push(0.0);
    for k in 1..=levels {
        sn += ln_biguint(s.n(k).expect("in range"));
        sc += neg_ln_ratio(s.c(k).expect("in range"));
        log_n.push(sn);
        log_c.push(sc);
    }
    let window = |upper: usize| {
        let from = if upper > LIMINF_BURN_IN {
            LIMINF_BURN_IN + 1
        } else {
            1
        };
        from..=upper
    };
    let s1 = window(max_level)
        .map(|k| log_n[k] / log_c[k])
        .fold(f64::INFINITY, f64::min);
    let s2_upper = max_level.min(levels - 1);
    let s2 = if s2_upper == 0 {
        0.0
    } else {
        window(s2_upper)
            .map(|k| {
                let extra = log_n[k + 1] - log_n[k] - (log_c[k + 1] - log_c[k]);
                log_n[k] / (log_c[k] - extra)
            })
            .fold(f64::INFINITY, f64::min)
    };
    Ok(DimensionPair {
        s1: F::of(s1),
        s2: F::of(s2.min(s1)),
        exact: false,
    })
}

/// A realized interval `[left, left + length]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoranInterval {
    pub left: BigRational,
    pub length: BigRational,
}

impl MoranInterval {
    pub fn right(&self) -> BigRational {
        &self.left + &self.length
    }
}

/// The level-`depth` intervals `J_sigma`, `sigma in D_depth`, in
/// lexicographic order of `sigma`. Children are packed flush against the
/// parent's left edge: child `i` of `[l, l + L]` is `[l + i c L, l + (i+1) c L]`.
pub fn realize_intervals(
    s: &MoranStructure,
    depth: usize,
    budget: u64,
) -> Result<Vec<MoranInterval>> {
    if let Some(levels) = s.levels() {
        if depth > levels {
            return Err(invalid(
                "depth",
                format!("structure has only {levels} levels"),
            ));
        }
    }
    let mut total = BigUint::one();
    for k in 1..=depth {
        total *= s.n(k).expect("checked");
        if total > BigUint::from(budget) {
            let mut required = total.clone();
            for j in k + 1..=depth {
                required *= s.n(j).expect("checked");
            }
            return Err(Error::BudgetExceeded {
                required: required.to_string(),
                budget,
            });
        }
    }
    let mut level = vec![MoranInterval {
        left: BigRational::zero(),
        length: BigRational::one(),
    }];
    for k in 1..=depth {
        let nk = s.n(k).expect("checked").to_u64().expect("within budget");
        let ck = s.c(k).expect("checked");
        let length = &level[0].length * ck;
        let mut next = Vec::with_capacity(level.len() * nk as usize);
        for parent in &level {
            let mut left = parent.left.clone();
            for _ in 0..nk {
                next.push(MoranInterval {
                    left: left.clone(),
                    length: length.clone(),
                });
                left += &length;
            }
        }
        level = next;
    }
    Ok(level)
}

/// Number of boxes `[i eps, (i+1) eps)` meeting the union of half-open
/// intervals `[left, left + length)`; `intervals` must be sorted by `left`.
pub fn box_count(intervals: &[MoranInterval], eps: &BigRational) -> BigUint {
    let mut count = BigUint::zero();
    let mut covered_to: Option<BigInt> = None; // exclusive end of last range
    for iv in intervals {
        let first = (&iv.left / eps).floor().to_integer();
        let end = (iv.right() / eps).ceil().to_integer();
        let first = match &covered_to {
            Some(c) if *c > first => c.clone(),
            _ => first,
        };
        if end > first {
            count += (&end - &first).to_biguint().expect("positive");
            covered_to = Some(end);
        }
    }
    count
}

/// Least-squares slope of `log N(eps)` against `log(1/eps)`.
pub fn box_counting_estimate<F: Scalar>(
    intervals: &[MoranInterval],
    scales: &[BigRational],
) -> Result<F> {
    if scales.len() < 3 {
        return Err(invalid("scales", "at least three scales are required"));
    }
    if scales
        .iter()
        .any(|e| !e.is_positive() || *e >= BigRational::one())
    {
        return Err(invalid("scales", "every scale must lie in (0, 1)"));
    }
    if intervals.is_empty() {
        return Err(invalid("intervals", "empty family"));
    }
    let xs: Vec<f64> = scales.iter().map(neg_ln_ratio).collect();
    let ys: Vec<f64> = scales
        .iter()
        .map(|e| ln_biguint(&box_count(intervals, e)))
        .collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 1e-24 {
        return Err(Error::DegenerateRegression(
            "all scales are identical".to_string(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(F::of(sxy / sxx))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("`{t}`: {e}")))
    };
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (parse(p)?, parse(q)?),
        None => (parse(s)?, BigInt::one()),
    };
    if q.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(p, q))
}

/// Parses `p/q` (or an integer) into an exact rational.
pub fn rational_from_str(s: &str) -> Result<BigRational> {
    parse_rational(s)
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| item(t.trim())).collect()
}

fn parse_seq<T>(s: &str, periodic: bool, item: impl Fn(&str) -> Result<T>) -> Result<Sequence<T>> {
    match s.split_once('|') {
        Some((pre, cyc)) if periodic => Ok(Sequence::periodic(
            parse_list(pre, &item)?,
            parse_list(cyc, &item)?,
        )),
        Some(_) => Err(Error::Parse("`|` is only valid in periodic specs".into())),
        None if periodic => Ok(Sequence::periodic(Vec::new(), parse_list(s, &item)?)),
        None => Ok(Sequence::explicit(parse_list(s, &item)?)),
    }
}

impl FromStr for MoranStructure {
    type Err = Error;

    /// Compact text form: `n=2,4;c=1/4 periodic` (cycles), `n=3|2;c=1/4|1/3
    /// periodic` (preamble `|` cycle), or `n=2,2;c=1/3,1/3` (explicit lists).
    /// A JSON object `{"n": [...], "c": [...]}` is also accepted, where each
    /// side is a list or `{"preamble": [...], "cycle": [...]}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let spec: StructureJson =
                serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return spec.into_structure();
        }
        let (body, periodic) = match s.strip_suffix("periodic") {
            Some(b) => (b.trim(), true),
            None => (s, false),
        };
        let mut n = None;
        let mut c = None;
        for part in body.split(';') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in `{part}`")))?;
            match key.trim() {
                "n" => {
                    n = Some(parse_seq(value, periodic, |t| {
                        t.parse::<BigUint>()
                            .map_err(|e| Error::Parse(format!("`{t}`: {e}")))
                    })?)
                }
                "c" => c = Some(parse_seq(value, periodic, parse_rational)?),
                other => return Err(Error::Parse(format!("unknown key `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing `n=`".into()))?;
        let c = c.ok_or_else(|| Error::Parse("missing `c=`".into()))?;
        if periodic && (n.cycle.is_empty() || c.cycle.is_empty()) {
            return Err(Error::Parse("periodic cycles must be nonempty".into()));
        }
        MoranStructure::new(n, c)
    }
}

impl fmt::Display for MoranStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
        }
        fn side<T: fmt::Display>(s: &Sequence<T>) -> String {
            if s.is_periodic() {
                if s.preamble.is_empty() {
                    join(&s.cycle)
                } else {
                    format!("{}|{}", join(&s.preamble), join(&s.cycle))
                }
            } else {
                join(&s.preamble)
            }
        }
        write!(f, "n={};c={}", side(&self.n), side(&self.c))?;
        if self.is_eventually_periodic() {
            f.write_str(" periodic")?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Term {
    Int(u64),
    Text(String),
}

impl Term {
    fn text(&self) -> String {
        match self {
            Term::Int(v) => v.to_string(),
            Term::Text(s) => s.clone(),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SideJson {
    List(Vec<Term>),
    Periodic {
        #[serde(default)]
        preamble: Vec<Term>,
        cycle: Vec<Term>,
    },
}

#[derive(Deserialize)]
struct StructureJson {
    n: SideJson,
    c: SideJson,
}

impl StructureJson {
    fn into_structure(self) -> Result<MoranStructure> {
        fn side<T>(s: SideJson, item: impl Fn(&str) -> Result<T>) -> Result<Sequence<T>> {
            let conv = |v: Vec<Term>| {
                v.iter()
                    .map(|t| item(&t.text()))
                    .collect::<Result<Vec<_>>>()
            };
            Ok(match s {
                SideJson::List(v) => Sequence::explicit(conv(v)?),
                SideJson::Periodic { preamble, cycle } => {
                    if cycle.is_empty() {
                        return Err(Error::Parse("periodic cycle must be nonempty".into()));
                    }
                    Sequence::periodic(conv(preamble)?, conv(cycle)?)
                }
            })
        }
        let n = side(self.n, |t| {
            t.parse::<BigUint>()
                .map_err(|e| Error::Parse(format!("`{t}`: {e}")))
        })?;
        let c = side(self.c, parse_rational)?;
        MoranStructure::new(n, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn dims_examples() {
        let full = MoranStructure::periodic(vec![2], vec![q(1, 2)]).unwrap();
        let d = moran_dims::<f64>(&full, 5).unwrap();
        assert_eq!((d.s1, d.s2, d.exact), (1.0, 1.0, true));

        let cantor = MoranStructure::periodic(vec![2], vec![q(1, 3)]).unwrap();
        let d = moran_dims::<f64>(&cantor, 5).unwrap();
        let expected = 2f64.ln() / 3f64.ln();
        assert!((d.s1 - expected).abs() < 1e-12 && (d.s2 - expected).abs() < 1e-12);

        let alt = MoranStructure::periodic(vec![2, 4], vec![q(1, 4)]).unwrap();
        let d = moran_dims::<f64>(&alt, 5).unwrap();
        assert!((d.s1 - 0.75).abs() < 1e-12 && (d.s2 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn explicit_dims_use_running_minimum() {
        let n = vec![2; 30];
        let c = vec![q(1, 3); 30];
        let s = MoranStructure::explicit(n, c).unwrap();
        let d = moran_dims::<f64>(&s, 29).unwrap();
        let expected = 2f64.ln() / 3f64.ln();
        assert!((d.s1 - expected).abs() < 1e-12);
        // s2 at level k is k log 2 / ((k+1) log 3 - log 2), smallest at k = 11
        let s2 = 11.0 * 2f64.ln() / (12.0 * 3f64.ln() - 2f64.ln());
        assert!((d.s2 - s2).abs() < 1e-12);
        assert!(!d.exact);
        assert!(moran_dims::<f64>(&s, 31).is_err());
        assert!(moran_dims::<f64>(&s, 1).is_err());
    }

    #[test]
    fn rejects_invalid_structures() {
        assert!(MoranStructure::explicit(vec![3], vec![q(1, 2)]).is_err());
        assert!(MoranStructure::explicit(vec![1], vec![q(1, 1)]).is_err());
        assert!(MoranStructure::explicit(vec![0], vec![q(1, 2)]).is_err());
        assert!(MoranStructure::periodic(vec![2, 3], vec![q(1, 2)]).is_err());
        let s = MoranStructure::periodic(vec![2, 3], vec![q(1, 4), q(1, 3)]).unwrap();
        assert_eq!(s.ratio_bound(), &q(1, 3));
    }

    #[test]
    fn realize_examples() {
        let s = MoranStructure::periodic(vec![2], vec![q(1, 3)]).unwrap();
        let j0 = realize_intervals(&s, 0, DEFAULT_INTERVAL_BUDGET).unwrap();
        assert_eq!(
            j0,
            vec![MoranInterval {
                left: q(0, 1),
                length: q(1, 1)
            }]
        );
        let j1 = realize_intervals(&s, 1, DEFAULT_INTERVAL_BUDGET).unwrap();
        let lefts: Vec<_> = j1.iter().map(|i| i.left.clone()).collect();
        assert_eq!(lefts, vec![q(0, 1), q(1, 3)]);
        assert!(j1.iter().all(|i| i.length == q(1, 3)));
        let j2 = realize_intervals(&s, 2, DEFAULT_INTERVAL_BUDGET).unwrap();
        let lefts: Vec<_> = j2.iter().map(|i| i.left.clone()).collect();
        assert_eq!(lefts, vec![q(0, 1), q(1, 9), q(1, 3), q(4, 9)]);
        assert!(j2.iter().all(|i| i.length == q(1, 9)));
        assert!(matches!(
            realize_intervals(&s, 21, DEFAULT_INTERVAL_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn box_count_on_cantor_family() {
        let s = MoranStructure::periodic(vec![2], vec![q(1, 3)]).unwrap();
        let j = realize_intervals(&s, 6, DEFAULT_INTERVAL_BUDGET).unwrap();
        for e in 1..=6u32 {
            let eps = q(1, 3i64.pow(e));
            assert_eq!(box_count(&j, &eps), BigUint::from(2u32).pow(e));
        }
    }

    #[test]
    fn box_estimate_errors() {
        let s = MoranStructure::periodic(vec![2], vec![q(1, 2)]).unwrap();
        let j = realize_intervals(&s, 4, DEFAULT_INTERVAL_BUDGET).unwrap();
        assert!(box_counting_estimate::<f64>(&j, &[q(1, 4), q(1, 8)]).is_err());
        assert!(matches!(
            box_counting_estimate::<f64>(&j, &[q(1, 4), q(1, 4), q(1, 4)]),
            Err(Error::DegenerateRegression(_))
        ));
        assert!(box_counting_estimate::<f64>(&j, &[q(1, 4), q(1, 1), q(1, 8)]).is_err());
        let est = box_counting_estimate::<f64>(&j, &[q(1, 2), q(1, 4), q(1, 8)]).unwrap();
        assert!((est - 1.0).abs() < 1e-12);
    }

    #[test]
    fn text_and_json_specs() {
        let s: MoranStructure = "n=2,4;c=1/4 periodic".parse().unwrap();
        assert!(s.is_eventually_periodic());
        assert_eq!(s.n(3), Some(&BigUint::from(2u32)));
        assert_eq!(s.to_string(), "n=2,4;c=1/4 periodic");
        let s: MoranStructure = "n=3|2;c=1/4|1/3 periodic".parse().unwrap();
        assert_eq!(s.n(1), Some(&BigUint::from(3u32)));
        assert_eq!(s.c(5), Some(&q(1, 3)));
        let s: MoranStructure = "n=2,2,1;c=1/3,1/3,1/2".parse().unwrap();
        assert_eq!(s.levels(), Some(3));
        let s: MoranStructure = r#"{"n": [2, 2], "c": ["1/3", "1/3"]}"#.parse().unwrap();
        assert_eq!(s.levels(), Some(2));
        let s: MoranStructure =
            r#"{"n": {"cycle": [2, 4]}, "c": {"preamble": ["1/2"], "cycle": ["1/4"]}}"#
                .parse()
                .unwrap();
        assert!(s.is_eventually_periodic());
        assert!("n=2;c=2/3".parse::<MoranStructure>().is_err());
        assert!("n=2;x=1/3".parse::<MoranStructure>().is_err());
    }
}
