//! Primality testing: deterministic Miller-Rabin below 2^64, BPSW above.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The primes below 10^6, computed once.
pub fn primes_below_million() -> &'static [u64] {
    static P: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    P.get_or_init(|| small_primes(1_000_000))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic for every `u64` (Jaeschke/Sinclair base set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'outer: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigInt, a: u64) -> bool {
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s as usize;
    let mut x = BigInt::from(a).modpow(&d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    assert!(n.is_positive() && n.is_odd());
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz as usize;
        let r = (&n % 8u32).to_u32().unwrap();
        if tz % 2 == 1 && (r == 3 || r == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas_prp(n: &BigInt) -> bool {
    // D in 5, -7, 9, -11, ... with (D/n) = -1
    let mut d: i64 = 5;
    loop {
        let j = jacobi(&BigInt::from(d), n);
        if j == -1 {
            break;
        }
        if j == 0 && BigInt::from(d.abs()) != *n {
            return false;
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
        if d.abs() == 13 {
            // a perfect square never yields (D/n) = -1
            let r = num_integer::Roots::sqrt(n);
            if &r * &r == *n {
                return false;
            }
        }
    }
    let p = BigInt::one();
    let q = BigInt::from((1 - d) / 4);
    let dd = BigInt::from(d);
    let np1: BigInt = n + 1u32;
    let s = np1.trailing_zeros().unwrap_or(0);
    let k = &np1 >> s as usize;

    let half = |x: BigInt| -> BigInt {
        let x = x.mod_floor(n);
        if x.is_odd() {
            (x + n) >> 1usize
        } else {
            x >> 1usize
        }
    };

    let mut u = BigInt::zero();
    let mut v = BigInt::from(2);
    let mut qk = BigInt::one();
    let bits = k.bits();
    for i in (0..bits).rev() {
        // doubling
        u = (&u * &v).mod_floor(n);
        v = (&v * &v - &qk * 2u32).mod_floor(n);
        qk = (&qk * &qk).mod_floor(n);
        if k.bit(i) {
            let nu = half(&p * &u + &v);
            let nv = half(&dd * &u + &p * &v);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(n);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2u32).mod_floor(n);
        qk = (&qk * &qk).mod_floor(n);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Primality of an arbitrary integer. Exact below 2^64, BPSW above.
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != num_bigint::Sign::Plus {
        return false;
    }
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in primes_below_million().iter().take(168) {
        if (n % p).is_zero() {
            return false;
        }
    }
    strong_probable_prime(n, 2) && strong_lucas_prp(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_sieve() {
        let ps = small_primes(20000);
        let mut idx = 0;
        for n in 0..=20000u64 {
            let expect = idx < ps.len() && ps[idx] == n;
            if expect {
                idx += 1;
            }
            assert_eq!(is_prime_u64(n), expect, "{n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        for n in [2047u64, 1373653, 25326001, 3215031751, 2152302898747, 3825123056546413051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(18446744073709551555));
    }

    #[test]
    fn big_values() {
        let m127 = (BigInt::one() << 127usize) - 1;
        assert!(is_prime(&m127));
        let m128 = (BigInt::one() << 128usize) + 1;
        assert!(!is_prime(&m128));
        let p = BigInt::from(18446744073709551557u64);
        assert!(!is_prime(&(&p * &p)));
        assert!(is_prime(&"170141183460469231731687303715884105727".parse().unwrap()));
        // strong base-2 pseudoprime above 2^64
        let sp: BigInt = "3317044064679887385961981".parse().unwrap();
        assert!(!is_prime(&sp));
    }

    #[test]
    fn jacobi_small() {
        assert_eq!(jacobi(&BigInt::from(2), &BigInt::from(7)), 1);
        assert_eq!(jacobi(&BigInt::from(5), &BigInt::from(7)), -1);
        assert_eq!(jacobi(&BigInt::from(-7), &BigInt::from(15)), 1);
        assert_eq!(jacobi(&BigInt::from(6), &BigInt::from(9)), 0);
    }
}
