//! Exact arithmetic on the circle `R/Z`.
//!
//! Points are reduced rationals `num/den` with `0 <= num < den`. Multiplication
//! maps `T_c(x) = c x mod 1`, base-`q` digit expansions and the cylinder
//! intervals `I_{d,j} = [j/d, (j+1)/d)` all work on exact big integers.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// A point of the circle, stored as a reduced fraction in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    num: BigUint,
    den: BigUint,
}

impl TorusPoint {
    /// `(p mod q) / q`, reduced. Rejects `q = 0`; a negative `q` flips the sign
    /// of the fraction before reduction.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (p, q) = if q.sign() == Sign::Minus {
            (-p, -q)
        } else {
            (p, q)
        };
        let r = p.mod_floor(&q);
        let num = r
            .to_biguint()
            .expect("mod_floor by positive is nonnegative");
        let den = q.to_biguint().expect("positive");
        Ok(Self::from_residue(num, den))
    }

    /// Builds a point from a residue `num < den`, reducing the fraction.
    pub(crate) fn from_residue(num: BigUint, den: BigUint) -> Self {
        debug_assert!(num < den);
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        if g.is_one() {
            Self { num, den }
        } else {
            Self {
                num: num / &g,
                den: den / &g,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new_raw(
            BigInt::from(self.num.clone()),
            BigInt::from(self.den.clone()),
        )
    }

    /// Nearest `f64`, accurate to about `2^-64` in absolute terms.
    pub fn to_f64(&self) -> f64 {
        crate::orbit::ratio_to_f64(&self.num, &self.den)
    }

    /// `T_c(x) = c x mod 1`.
    pub fn times(&self, c: u64) -> Self {
        let prod = &self.num * c;
        Self::from_residue(prod % &self.den, self.den.clone())
    }

    /// The first `len` digits of the greedy base-`base` expansion. At points
    /// with two expansions this picks the one ending in zeros.
    pub fn digits(&self, base: u32, len: usize) -> Result<DigitWord> {
        if base < 2 {
            return Err(invalid("base", "must be at least 2"));
        }
        let mut digits = Vec::with_capacity(len);
        let mut rem = self.num.clone();
        for _ in 0..len {
            rem *= base;
            let (q, r) = rem.div_rem(&self.den);
            digits.push(q.to_u32().expect("digit < base"));
            rem = r;
        }
        Ok(DigitWord { base, digits })
    }

    /// The cell `j = floor(d x)` of the partition `I_d` containing `x`.
    pub fn cylinder(&self, d: u64) -> Result<CylinderInterval> {
        if d == 0 {
            return Err(invalid("d", "partition depth must be positive"));
        }
        let j = (&self.num * d) / &self.den;
        Ok(CylinderInterval {
            depth: d,
            index: j.to_u64().expect("index < d"),
        })
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for TorusPoint {
    type Err = Error;

    /// Accepts `p/q` (any integers, `q != 0`) or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("`{t}`: {e}")))
        };
        match s.split_once('/') {
            Some((p, q)) => TorusPoint::new(parse(p)?, parse(q)?),
            None => TorusPoint::new(parse(s)?, 1),
        }
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite word over `{0, ..., base-1}`, read as the base-`base` fraction
/// `sum w_i base^-(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitWord {
    base: u32,
    digits: Vec<u32>,
}

impl DigitWord {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(invalid("base", "must be at least 2"));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(invalid(
                "digits",
                format!("digit {d} out of range for base {base}"),
            ));
        }
        Ok(Self { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Left endpoint of the depth-`len` cylinder coded by this word.
    pub fn point(&self) -> TorusPoint {
        if self.digits.is_empty() {
            return TorusPoint::zero();
        }
        let mut num = BigUint::zero();
        for &d in &self.digits {
            num *= self.base;
            num += d;
        }
        let den = BigUint::from(self.base).pow(self.digits.len() as u32);
        TorusPoint::from_residue(num, den)
    }
}

const DIGIT_CHARS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl fmt::Display for DigitWord {
    /// `b6:205`; bases above 36 use dot-separated decimal digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}:", self.base)?;
        if self.base <= 36 {
            let s: String = self
                .digits
                .iter()
                .map(|&d| DIGIT_CHARS[d as usize] as char)
                .collect();
            f.write_str(&s)
        } else {
            let parts: Vec<String> = self.digits.iter().map(u32::to_string).collect();
            f.write_str(&parts.join("."))
        }
    }
}

impl FromStr for DigitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s
            .strip_prefix('b')
            .ok_or_else(|| Error::Parse(format!("digit word `{s}` must start with `b<base>:`")))?;
        let (base, body) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("digit word `{s}` lacks `:`")))?;
        let base: u32 = base
            .parse()
            .map_err(|e| Error::Parse(format!("base `{base}`: {e}")))?;
        let digits = if base <= 36 {
            body.chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| Error::Parse(format!("bad digit `{c}`")))
                })
                .collect::<Result<Vec<_>>>()?
        } else if body.is_empty() {
            Vec::new()
        } else {
            body.split('.')
                .map(|t| {
                    t.parse()
                        .map_err(|e| Error::Parse(format!("digit `{t}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        DigitWord::new(base, digits)
    }
}

impl Serialize for DigitWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DigitWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The cell `I_{d,j} = [j/d, (j+1)/d)` of the equal partition of the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CylinderInterval {
    pub depth: u64,
    pub index: u64,
}

impl CylinderInterval {
    pub fn left(&self) -> BigRational {
        BigRational::new(self.index.into(), self.depth.into())
    }

    pub fn right(&self) -> BigRational {
        BigRational::new((self.index + 1).into(), self.depth.into())
    }

    pub fn length(&self) -> BigRational {
        BigRational::new(1.into(), self.depth.into())
    }

    /// Left-closed membership test.
    pub fn contains(&self, x: &TorusPoint) -> bool {
        x.cylinder(self.depth)
            .map(|c| c.index == self.index)
            .unwrap_or(false)
    }
}

/// The `N x N` grid of orbit points `T_a^m T_b^n x`, indexed `[m][n]`.
///
/// Each entry is `(a^m b^n num mod den)/den`, with `a^m mod den` and
/// `b^n mod den` precomputed, so every entry costs two modular products
/// regardless of `m, n`. Rows are computed in parallel.
pub fn orbit_grid(x: &TorusPoint, a: u64, b: u64, n: usize) -> Result<Vec<Vec<TorusPoint>>> {
    if a < 2 || b < 2 {
        return Err(invalid("a, b", "multipliers must be at least 2"));
    }
    if n == 0 {
        return Err(invalid("N", "horizon must be at least 1"));
    }
    let den = x.den();
    let powers = |c: u64| {
        let mut out = Vec::with_capacity(n);
        let mut p = BigUint::one() % den;
        for _ in 0..n {
            out.push(p.clone());
            p = (p * c) % den;
        }
        out
    };
    let pa = powers(a);
    let pb = powers(b);
    Ok(pa
        .par_iter()
        .map(|am| {
            let row_start = (x.num() * am) % den;
            pb.iter()
                .map(|bn| TorusPoint::from_residue((&row_start * bn) % den, den.clone()))
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(p: i64, q: i64) -> TorusPoint {
        TorusPoint::new(p, q).unwrap()
    }

    #[test]
    fn make_point_normalizes() {
        assert_eq!(pt(1, 3).to_string(), "1/3");
        assert_eq!(pt(7, 3).to_string(), "1/3");
        assert_eq!(pt(0, 5).to_string(), "0/1");
        assert_eq!(pt(-1, 3).to_string(), "2/3");
        assert_eq!(pt(2, -6).to_string(), "2/3");
        assert_eq!(TorusPoint::new(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn times_examples() {
        assert_eq!(pt(1, 3).times(2), pt(2, 3));
        assert_eq!(pt(2, 5).times(3), pt(1, 5));
        assert_eq!(pt(1, 7).times(6), pt(6, 7));
    }

    #[test]
    fn orbit_grid_examples() {
        let g = orbit_grid(&pt(1, 5), 2, 3, 2).unwrap();
        assert_eq!(g, vec![vec![pt(1, 5), pt(3, 5)], vec![pt(2, 5), pt(1, 5)]]);
        let g = orbit_grid(&pt(1, 3), 2, 3, 2).unwrap();
        assert_eq!(g, vec![vec![pt(1, 3), pt(0, 1)], vec![pt(2, 3), pt(0, 1)]]);
        let g = orbit_grid(&TorusPoint::zero(), 5, 6, 4).unwrap();
        assert!(g.iter().flatten().all(TorusPoint::is_zero));
        assert!(orbit_grid(&pt(1, 3), 1, 3, 2).is_err());
    }

    #[test]
    fn digits_examples() {
        assert_eq!(pt(1, 3).digits(6, 3).unwrap().digits(), &[2, 0, 0]);
        assert_eq!(pt(1, 7).digits(6, 4).unwrap().digits(), &[0, 5, 0, 5]);
        assert_eq!(TorusPoint::zero().digits(6, 2).unwrap().digits(), &[0, 0]);
    }

    #[test]
    fn point_of_word_examples() {
        assert_eq!(DigitWord::new(6, vec![2, 0, 0]).unwrap().point(), pt(1, 3));
        assert_eq!(DigitWord::new(6, vec![0, 5]).unwrap().point(), pt(5, 36));
        assert_eq!(
            DigitWord::new(6, vec![]).unwrap().point(),
            TorusPoint::zero()
        );
        assert!(DigitWord::new(6, vec![6]).is_err());
    }

    #[test]
    fn cylinder_examples() {
        assert_eq!(pt(1, 3).cylinder(6).unwrap().index, 2);
        assert_eq!(TorusPoint::zero().cylinder(10).unwrap().index, 0);
        assert_eq!(pt(5, 36).cylinder(6).unwrap().index, 0);
        let c = pt(1, 3).cylinder(6).unwrap();
        assert!(c.contains(&pt(1, 3)));
        assert_eq!(c.length(), BigRational::new(1.into(), 6.into()));
        assert!(pt(1, 3).cylinder(0).is_err());
    }

    #[test]
    fn text_forms() {
        let w: DigitWord = "b6:205".parse().unwrap();
        assert_eq!(w.digits(), &[2, 0, 5]);
        assert_eq!(w.to_string(), "b6:205");
        let w = DigitWord::new(40, vec![39, 0, 12]).unwrap();
        assert_eq!(w.to_string(), "b40:39.0.12");
        assert_eq!(w.to_string().parse::<DigitWord>().unwrap(), w);
        assert!("b6:207".parse::<DigitWord>().is_err());
        assert_eq!("3/9".parse::<TorusPoint>().unwrap(), pt(1, 3));
        assert!("1/0".parse::<TorusPoint>().is_err());
        let json = serde_json::to_string(&pt(2, 6)).unwrap();
        assert_eq!(json, "\"1/3\"");
    }
}
