//! Integer helpers: a Lehmer gcd, primality, factorisation and p-adic valuations.
//!
//! `num-bigint`'s own gcd is a plain binary algorithm, quadratic in the bit
//! length with a large constant; denominators of elliptic multiples reach
//! millions of bits, so the workbench routes every big gcd through [`gcd`].

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Greatest common divisor of two integers (always non-negative).
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    BigInt::from(gcd_uint(a.magnitude(), b.magnitude()))
}

/// Lehmer's algorithm on 63-bit leading digits (Knuth, Algorithm L).
pub fn gcd_uint(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = if a >= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    while b.bits() > 126 {
        let n = a.bits();
        if n - b.bits() > 32 {
            let r = &a % &b;
            a = b;
            b = r;
            continue;
        }
        let shift = n - 63;
        let mut x: i128 = (&a >> shift).to_i128().unwrap();
        let mut y: i128 = (&b >> shift).to_i128().unwrap();
        let (mut ca, mut cb, mut cc, mut cd) = (1i128, 0i128, 0i128, 1i128);
        loop {
            if y + cc == 0 || y + cd == 0 {
                break;
            }
            let q = (x + ca) / (y + cc);
            if q != (x + cb) / (y + cd) {
                break;
            }
            let t = ca - q * cc;
            ca = cc;
            cc = t;
            let t = cb - q * cd;
            cb = cd;
            cd = t;
            let t = x - q * y;
            x = y;
            y = t;
        }
        if cb == 0 {
            let r = &a % &b;
            a = b;
            b = r;
        } else {
            let ai = BigInt::from_biguint(Sign::Plus, a);
            let bi = BigInt::from_biguint(Sign::Plus, b);
            let na = &ai * ca + &bi * cb;
            let nb = &ai * cc + &bi * cd;
            a = na.into_parts().1;
            b = nb.into_parts().1;
        }
    }
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a / gcd(a, b) * b).abs()
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Exponent of `p` in `n` (`n != 0`).
pub fn valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut m = n.abs();
    let pb = BigInt::from(p);
    // Strip p^(2^k) blocks first so that huge valuations stay cheap.
    let mut powers = vec![pb.clone()];
    while m.is_multiple_of(powers.last().unwrap()) {
        let last = powers.last().unwrap().clone();
        if last.bits() * 2 > m.bits() + 1 {
            break;
        }
        powers.push(&last * &last);
    }
    for (k, pk) in powers.iter().enumerate().rev() {
        while m.is_multiple_of(pk) && !m.is_zero() {
            m /= pk;
            v += 1u64 << k;
        }
    }
    v
}

/// Largest divisor of `n` composed only of primes dividing `d`.
pub fn coprime_support_part(n: &BigInt, d: &BigInt) -> BigInt {
    let mut rest = n.abs();
    let mut part = BigInt::one();
    if rest.is_zero() {
        return BigInt::zero();
    }
    let mut c = gcd(&rest, d);
    while !c.is_one() {
        while rest.is_multiple_of(&c) {
            rest /= &c;
            part *= &c;
        }
        let r = &rest % &c;
        c = gcd(&c, &r);
    }
    part
}

/// Whether `d` divides the numerator of `a / b` written in lowest terms,
/// computed without reducing the (possibly enormous) fraction.
pub fn divides_reduced_numerator(d: &BigInt, a: &BigInt, b: &BigInt) -> bool {
    debug_assert!(!b.is_zero());
    if a.is_zero() {
        return true;
    }
    let d = d.abs();
    if d.is_one() {
        return true;
    }
    let b_part = coprime_support_part(b, &d);
    a.is_multiple_of(&(&d * &b_part))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = egcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with a fixed set of bases; deterministic below 3.3e24 and a
/// strong probable-prime test beyond.
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let a = BigUint::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const TRIAL_BOUND: u64 = 20_000;

/// Prime factorisation of `|n|` (`n != 0`) by trial division and Brent's rho.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "factor(0)");
    let mut m = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        while m.is_multiple_of(&pb) {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let mut stack = vec![m];
        let mut big: Vec<BigInt> = Vec::new();
        while let Some(c) = stack.pop() {
            if c.is_one() {
                continue;
            }
            if is_prime(&c) {
                big.push(c);
                continue;
            }
            let f = rho(&c);
            stack.push(&c / &f);
            stack.push(f);
        }
        big.sort();
        for q in big {
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    out.sort();
    out
}

fn rho(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    for c in 1u32.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut g = BigInt::one();
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 64u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (&q * (&x - &y).abs()) % n;
                }
                g = gcd(&q, n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = gcd(&(&x - &ys).abs(), n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

/// Positive divisors of `|n|`, ascending.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in factor(n) {
        let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
        for d in &ds {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= &p;
                next.push(pk.clone());
            }
        }
        ds = next;
    }
    ds.sort();
    ds
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n as usize {
        if sieve[i] {
            let mut j = i * i;
            while j <= n as usize {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n/d` in lowest terms, reduced with [`gcd`] rather than num-bigint's.
pub fn ratio(n: BigInt, d: BigInt) -> num_rational::BigRational {
    assert!(!d.is_zero(), "zero denominator");
    let g = gcd(&n, &d);
    let (mut n, mut d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    num_rational::BigRational::new_raw(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factor_small_values() {
        let f = factor(&BigInt::from(-108));
        assert_eq!(f, vec![(BigInt::from(2), 2), (BigInt::from(3), 3)]);
        let p1 = BigInt::from(1_000_003u64);
        let p2 = BigInt::from(998_244_353u64);
        let f = factor(&(&p1 * &p2 * &p2));
        assert_eq!(f, vec![(p1, 1), (p2, 2)]);
    }

    #[test]
    fn primality_edges() {
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(3_215_031_751));
        assert!(is_prime(&"170141183460469231731687303715884105727".parse().unwrap()));
    }

    #[test]
    fn valuation_of_large_power() {
        let n = BigInt::from(3).pow(1000u32) * 7;
        assert_eq!(valuation(&n, 3), 1000);
        assert_eq!(valuation(&n, 7), 1);
        assert_eq!(valuation(&n, 5), 0);
    }

    #[test]
    fn reduced_numerator_divisibility() {
        // 12/18 = 2/3: 2 divides the reduced numerator, 4 does not.
        let (a, b) = (BigInt::from(12), BigInt::from(18));
        assert!(divides_reduced_numerator(&BigInt::from(2), &a, &b));
        assert!(!divides_reduced_numerator(&BigInt::from(4), &a, &b));
        assert!(!divides_reduced_numerator(&BigInt::from(3), &a, &b));
    }

    proptest! {
        #[test]
        fn lehmer_matches_binary_gcd(a in proptest::collection::vec(any::<u64>(), 1..12),
                                     b in proptest::collection::vec(any::<u64>(), 1..12),
                                     k in proptest::collection::vec(any::<u64>(), 0..6)) {
            let mk = |v: &Vec<u64>| BigUint::from_slice(&v.iter().flat_map(|x| [*x as u32, (*x >> 32) as u32]).collect::<Vec<_>>());
            let common = mk(&k) + 1u32;
            let a = mk(&a) * &common;
            let b = mk(&b) * &common;
            prop_assert_eq!(gcd_uint(&a, &b), a.gcd(&b));
        }
    }
}
