//! Small integer helpers: deterministic primality for `u64`, exact integer
//! roots and the multiplicative-independence test for `(a, b)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

use crate::orbit::pow_mod_u128;

/// Natural log of a positive big integer, without overflowing `f64`.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().expect("fits").max(1) as f64).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `|n|` for nonzero `n`.
pub fn ln_bigint(n: &BigInt) -> f64 {
    ln_biguint(&n.abs().to_biguint().expect("nonnegative"))
}

/// Deterministic Miller-Rabin for all `u64` (fixed witness set).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let m = n as u128;
    'witness: for a in SMALL {
        let mut x = pow_mod_u128(a as u128, d, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % m;
            if x == m - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`. Panics past the largest `u64` prime.
pub fn next_prime(n: u64) -> u64 {
    (n.max(2)..)
        .find(|&p| is_prime(p))
        .expect("prime below u64::MAX")
}

/// `floor(n^(1/k))` for `k >= 1`.
pub fn integer_root(n: u64, k: u32) -> u64 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    let pow_le = |r: u64| r.checked_pow(k).is_some_and(|v| v <= n);
    while !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    r
}

/// The smallest `c` with `n = c^e` for some `e >= 1`, paired with that `e`.
pub fn primitive_base(n: u64) -> (u64, u32) {
    if n < 4 {
        return (n, 1);
    }
    let max_exp = 63 - n.leading_zeros();
    for e in (2..=max_exp).rev() {
        let r = integer_root(n, e);
        if r.checked_pow(e) == Some(n) {
            return (r, e);
        }
    }
    (n, 1)
}

/// `false` iff `a = c^k` and `b = c^l` for some integer `c >= 2`, i.e. iff
/// `log a / log b` is rational. Inputs below 2 are rejected by returning
/// `false`.
///
/// Two integers are powers of a common base exactly when their primitive
/// bases coincide.
pub fn mult_indep_check(a: u64, b: u64) -> bool {
    if a < 2 || b < 2 {
        return false;
    }
    primitive_base(a).0 != primitive_base(b).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let brute = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..2000 {
            assert_eq!(is_prime(n), brute(n), "{n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert_eq!(next_prime(100_000), 100_003);
    }

    #[test]
    fn roots_and_bases() {
        assert_eq!(integer_root(80, 4), 2);
        assert_eq!(integer_root(81, 4), 3);
        assert_eq!(integer_root(u64::MAX, 2), 4_294_967_295);
        assert_eq!(primitive_base(64), (2, 6));
        assert_eq!(primitive_base(36), (6, 2));
        assert_eq!(primitive_base(12), (12, 1));
    }

    #[test]
    fn independence_examples() {
        assert!(mult_indep_check(2, 3));
        assert!(!mult_indep_check(4, 8));
        assert!(mult_indep_check(6, 12));
        assert!(!mult_indep_check(8, 8));
        assert!(!mult_indep_check(27, 9));
    }

    #[test]
    fn independence_matches_exhaustive_search() {
        // a, b dependent iff some c in [2, min(a, b)] has both as powers
        let is_power_of = |n: u64, c: u64| {
            let mut v = c;
            while v < n {
                v *= c;
            }
            v == n
        };
        for a in 2..200u64 {
            for b in 2..200u64 {
                let dependent = (2..=a.min(b)).any(|c| is_power_of(a, c) && is_power_of(b, c));
                assert_eq!(mult_indep_check(a, b), !dependent, "({a},{b})");
            }
        }
    }
}
