//! Integer number theory on machine words: primality, factorisation,
//! valuations and the Kronecker symbol.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Prime factorisation of `|n|`, primes ascending. `factor(0)` and `factor(±1)` are empty.
pub fn factor(n: i128) -> Vec<(u64, u32)> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut d: u128 = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d as u64, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

pub fn prime_divisors(n: i128) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// p-adic valuation of a nonzero integer. Panics on zero.
pub fn valuation(n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn big_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n as u128);
        r * r == n as u128
    }
}

/// Splits `n != 0` as `core * s^2` with `core` squarefree (sign kept on `core`).
pub fn squarefree_split(n: i128) -> (i128, u128) {
    assert!(n != 0);
    let mut core: i128 = n.signum();
    let mut root: u128 = 1;
    for (p, e) in factor(n) {
        let p = p as u128;
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p as i128;
        }
    }
    (core, root)
}

pub fn pow_i128(base: i128, exp: u32) -> i128 {
    base.checked_pow(exp).expect("integer overflow in pow")
}

pub fn big_pow(base: i64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut r: u128 = 1 % m128;
    let mut b128 = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    b = r as u64;
    b
}

/// Legendre symbol of `a` modulo an odd prime `p`.
pub fn legendre(a: i128, p: u64) -> i8 {
    let r = a.rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(a / n)` with the usual conventions at `n = 0`, `n = -1` and 2.
pub fn kronecker(a: i128, n: i128) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= v;
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol (a / n), n odd positive.
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn big_from_i128(x: i128) -> BigInt {
    BigInt::from(x)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    ds.sort_unstable();
    ds
}

pub fn sigma(n: u64, k: u32) -> BigInt {
    divisors(n).into_iter().map(|d| num_traits::pow(BigInt::from(d), k as usize)).fold(BigInt::zero(), |a, b| a + b)
}

pub fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn big_one() -> BigInt {
    BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_small_values() {
        for n in 1..30 {
            assert_eq!(kronecker(1, n), 1);
        }
        for a in -10..10 {
            assert_eq!(kronecker(a, 1), 1);
        }
        // squares mod 3 are {0, 1}
        let squares: Vec<i128> = (0..3).map(|x| x * x % 3).collect();
        assert!(!squares.contains(&2));
        assert_eq!(kronecker(2, 3), -1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(3, 0), 0);
    }

    #[test]
    fn kronecker_matches_euler_criterion_on_odd_primes() {
        for p in primes_up_to(50).into_iter().filter(|&p| p > 2) {
            for a in -60i128..60 {
                assert_eq!(kronecker(a, p as i128), legendre(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn factor_and_squarefree() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(squarefree_split(-12), (-3, 2));
        assert_eq!(squarefree_split(64), (1, 8));
        assert!(is_square(49) && !is_square(50) && !is_square(-4));
    }
}
