//! Row-wise traversal of the orbit grid `T_a^m T_b^n x`.
//!
//! Every orbit point of `x = num/den` is a residue `r/den` over the same
//! denominator, so the sweep keeps one running residue per row and advances
//! it by a single small multiplication and reduction per step. Denominators
//! that fit in `u64` take a `u128` fast path; larger ones use `BigUint`.
//!
//! Rows are processed in parallel, each into its own accumulator, and the
//! accumulators come back in row order so that any later fold is
//! independent of the thread count.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use crate::torus::TorusPoint;

/// `num/den` as `f64` for `num < den`, accurate to about `2^-64`.
pub(crate) fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    let width = den.iter_u64_digits().len();
    if width <= 2 {
        let n = num.to_u128().expect("num < den fits");
        let d = den.to_u128().expect("fits");
        return n as f64 / d as f64;
    }
    let top = |v: &BigUint| -> u128 {
        let mut it = v.iter_u64_digits().skip(width - 2);
        let lo = it.next().unwrap_or(0) as u128;
        let hi = it.next().unwrap_or(0) as u128;
        (hi << 64) | lo
    };
    top(num) as f64 / top(den) as f64
}

/// One orbit point, as an unreduced residue over the starting denominator.
#[derive(Clone, Copy, Debug)]
pub enum OrbitPoint<'a> {
    Small { num: u64, den: u64 },
    Big { num: &'a BigUint, den: &'a BigUint },
}

impl OrbitPoint<'_> {
    /// The point as a real number in `[0, 1)`.
    #[inline]
    pub fn fraction<F: Scalar>(&self) -> F {
        F::of(self.fraction_f64())
    }

    #[inline]
    pub fn fraction_f64(&self) -> f64 {
        match *self {
            OrbitPoint::Small { num, den } => num as f64 / den as f64,
            OrbitPoint::Big { num, den } => ratio_to_f64(num, den),
        }
    }

    /// `frac(k y)`, reduced exactly before conversion.
    pub fn scaled_fraction<F: Scalar>(&self, k: u64) -> F {
        match *self {
            OrbitPoint::Small { num, den } => {
                let r = (num as u128 * k as u128) % den as u128;
                F::of(r as f64 / den as f64)
            }
            OrbitPoint::Big { num, den } => {
                if k == 1 {
                    return F::of(ratio_to_f64(num, den));
                }
                let r = (num * k) % den;
                F::of(ratio_to_f64(&r, den))
            }
        }
    }

    /// Index of the cell of `I_d` containing the point: `floor(d y)`.
    pub fn cell(&self, d: u64) -> u64 {
        match *self {
            OrbitPoint::Small { num, den } => ((num as u128 * d as u128) / den as u128) as u64,
            OrbitPoint::Big { num, den } => ((num * d) / den).to_u64().expect("cell < d"),
        }
    }

    /// Reduced copy of the point.
    pub fn to_point(&self) -> TorusPoint {
        match *self {
            OrbitPoint::Small { num, den } => {
                TorusPoint::from_residue(BigUint::from(num), BigUint::from(den))
            }
            OrbitPoint::Big { num, den } => TorusPoint::from_residue(num.clone(), den.clone()),
        }
    }

    /// Residue numerator, widened.
    pub fn num_big(&self) -> BigUint {
        match *self {
            OrbitPoint::Small { num, .. } => BigUint::from(num),
            OrbitPoint::Big { num, .. } => num.clone(),
        }
    }

    pub fn den_big(&self) -> BigUint {
        match *self {
            OrbitPoint::Small { den, .. } => BigUint::from(den),
            OrbitPoint::Big { den, .. } => den.clone(),
        }
    }
}

/// The orbit of a point under the commuting pair `T_a`, `T_b`.
#[derive(Clone, Debug)]
pub struct Orbit<'a> {
    x: &'a TorusPoint,
    a: u64,
    b: u64,
}

impl<'a> Orbit<'a> {
    pub fn new(x: &'a TorusPoint, a: u64, b: u64) -> Result<Self> {
        if a < 2 || b < 2 {
            return Err(invalid("a, b", "multipliers must be at least 2"));
        }
        Ok(Self { x, a, b })
    }

    pub fn point(&self) -> &TorusPoint {
        self.x
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Visits `(m, n, T_a^m T_b^n x)` for `0 <= m, n < horizon`. Row `m` gets
    /// a fresh accumulator `init(m)`; the accumulators are returned in row
    /// order.
    pub fn rows<T, I, V>(&self, horizon: usize, init: I, visit: V) -> Vec<T>
    where
        T: Send,
        I: Fn(usize) -> T + Sync,
        V: Fn(&mut T, usize, OrbitPoint<'_>) + Sync,
    {
        if horizon == 0 {
            return Vec::new();
        }
        match self.x.den().to_u64() {
            Some(den) => {
                let num = self.x.num().to_u64().expect("num < den");
                let (a, b) = (self.a as u128, self.b as u128);
                let modulus = den as u128;
                let start = |m: usize| {
                    (num as u128 * pow_mod_u128(a % modulus, m as u64, modulus)) % modulus
                };
                (0..horizon)
                    .into_par_iter()
                    .map(|m| {
                        let mut acc = init(m);
                        let mut cur = start(m);
                        for n in 0..horizon {
                            visit(
                                &mut acc,
                                n,
                                OrbitPoint::Small {
                                    num: cur as u64,
                                    den,
                                },
                            );
                            cur = (cur * b) % modulus;
                        }
                        acc
                    })
                    .collect()
            }
            None => {
                let den = self.x.den();
                let a = BigUint::from(self.a);
                (0..horizon)
                    .into_par_iter()
                    .map(|m| {
                        let mut acc = init(m);
                        let am = a.modpow(&BigUint::from(m), den);
                        let mut cur = (self.x.num() * am) % den;
                        for n in 0..horizon {
                            visit(&mut acc, n, OrbitPoint::Big { num: &cur, den });
                            step_big(&mut cur, self.b, den);
                        }
                        acc
                    })
                    .collect()
            }
        }
    }
}

/// Visits `T_c^n x` for `0 <= n < len`, sequentially.
pub fn trajectory(
    x: &TorusPoint,
    c: u64,
    len: usize,
    mut visit: impl FnMut(usize, OrbitPoint<'_>),
) {
    match x.den().to_u64() {
        Some(den) => {
            let modulus = den as u128;
            let mut cur = x.num().to_u64().expect("num < den") as u128;
            for n in 0..len {
                visit(
                    n,
                    OrbitPoint::Small {
                        num: cur as u64,
                        den,
                    },
                );
                cur = (cur * c as u128) % modulus;
            }
        }
        None => {
            let den = x.den();
            let mut cur = x.num().clone();
            for n in 0..len {
                visit(n, OrbitPoint::Big { num: &cur, den });
                step_big(&mut cur, c, den);
            }
        }
    }
}

#[inline]
fn step_big(cur: &mut BigUint, c: u64, den: &BigUint) {
    *cur *= c;
    if c <= 16 {
        while &*cur >= den {
            *cur -= den;
        }
    } else {
        *cur %= den;
    }
}

pub(crate) fn pow_mod_u128(mut base: u128, mut exp: u64, modulus: u128) -> u128 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, modulus);
        }
        base = mul_mod_u128(base, base, modulus);
        exp >>= 1;
    }
    acc
}

// Operands are below a 64-bit modulus, so the product fits in u128.
#[inline]
fn mul_mod_u128(x: u128, y: u128, modulus: u128) -> u128 {
    (x * y) % modulus
}

/// Convenience: sum of `f` over the full `horizon x horizon` grid, folded in
/// row order.
pub fn grid_sum<F: Scalar>(
    orbit: &Orbit<'_>,
    horizon: usize,
    f: impl Fn(OrbitPoint<'_>) -> F + Sync,
) -> F {
    orbit
        .rows(horizon, |_| F::zero(), |acc, _, p| *acc += f(p))
        .into_iter()
        .fold(F::zero(), |s, r| s + r)
}
