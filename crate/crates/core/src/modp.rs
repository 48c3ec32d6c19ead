//! Polynomials over a prime field F_p (p < 2^63) and their factorisation.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{inv_mod, mul_mod};

/// A polynomial over F_p, ascending coefficients in `[0, p)`, trimmed.
pub type FpPoly = Vec<u64>;

pub fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &FpPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                ((x as u128 + y as u128) % p as u128) as u64
            })
            .collect(),
    )
}

pub fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                ((x as u128 + p as u128 - y as u128) % p as u128) as u64
            })
            .collect(),
    )
}

pub fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(out)
}

pub fn scale(a: &FpPoly, c: u64, p: u64) -> FpPoly {
    trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
}

pub fn monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(a, inv_mod(l, p).expect("nonzero leading coefficient"), p),
    }
}

pub fn div_rem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mul_mod(r[k + db], inv, p);
        if c == 0 {
            continue;
        }
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            let t = mul_mod(c, bj, p);
            r[k + j] = ((r[k + j] as u128 + p as u128 - t as u128) % p as u128) as u64;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    div_rem(a, b, p).1
}

pub fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn derivative(a: &FpPoly, p: u64) -> FpPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect(),
    )
}

pub fn pow_mod(base: &FpPoly, e: &BigUint, modulus: &FpPoly, p: u64) -> FpPoly {
    let mut result: FpPoly = vec![1];
    result = rem(&result, modulus, p);
    let base = rem(base, modulus, p);
    for i in (0..e.bits()).rev() {
        result = rem(&mul(&result, &result, p), modulus, p);
        if e.bit(i) {
            result = rem(&mul(&result, &base, p), modulus, p);
        }
    }
    result
}

/// Reduce integer coefficients modulo p.
pub fn from_ints(coeffs: &[num_bigint::BigInt], p: u64) -> FpPoly {
    let pb = num_bigint::BigInt::from(p);
    trim(
        coeffs
            .iter()
            .map(|c| {
                let r = ((c % &pb) + &pb) % &pb;
                u64::try_from(&r).unwrap()
            })
            .collect(),
    )
}

/// Squarefree decomposition of a monic polynomial: pairs (g_i, i) with
/// f = prod g_i^i and each g_i squarefree.
pub fn squarefree_decomposition(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let f = monic(f, p);
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = derivative(&f, p);
    if df.is_empty() {
        // f = g(x^p), and a^p = a in F_p.
        let g: FpPoly = f.iter().step_by(p as usize).copied().collect();
        return squarefree_decomposition(&g, p)
            .into_iter()
            .map(|(h, m)| (h, m * p as u32))
            .collect();
    }
    let mut out = Vec::new();
    let mut c = gcd(&f, &df, p);
    let mut w = div_rem(&f, &c, p).0;
    let mut i = 1u32;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &c, p);
        let z = div_rem(&w, &y, p).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(&z, p), i));
        }
        i += 1;
        w = y;
        c = div_rem(&c, &w, p).0;
    }
    if degree(&c).unwrap_or(0) > 0 {
        let g: FpPoly = c.iter().step_by(p as usize).copied().collect();
        for (h, m) in squarefree_decomposition(&g, p) {
            out.push((h, m * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = monic(f, p);
    let x: FpPoly = vec![0, 1];
    let mut h = rem(&x, &rest, p);
    let pe = BigUint::from(p);
    let mut d = 0;
    while degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = pow_mod(&h, &pe, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if degree(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), d));
            rest = div_rem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
        }
    }
    if degree(&rest).unwrap_or(0) > 0 {
        let dr = degree(&rest).unwrap();
        out.push((rest, dr));
    }
    out
}

fn poly_from_index(mut t: u64, p: u64, len: usize) -> FpPoly {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push(t % p);
        t /= p;
    }
    trim(v)
}

fn equal_degree(f: &FpPoly, d: usize, p: u64) -> Vec<FpPoly> {
    let n = degree(f).unwrap_or(0);
    if n == d {
        return vec![monic(f, p)];
    }
    if p == 2 {
        return trial_split(f, d, p);
    }
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / 2u32;
    for t in (p..).take(100_000) {
        let a = poly_from_index(t, p, n);
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = sub(&pow_mod(&a, &e, f, p), &vec![1], p);
        let g = gcd(&b, f, p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(&g, d, p);
            out.extend(equal_degree(&div_rem(f, &g, p).0, d, p));
            return out;
        }
    }
    unreachable!("equal-degree splitting did not terminate")
}

fn trial_split(f: &FpPoly, d: usize, p: u64) -> Vec<FpPoly> {
    let mut rest = monic(f, p);
    let mut out = Vec::new();
    let count = p.pow(d as u32);
    while degree(&rest).unwrap_or(0) > d {
        let mut found = false;
        for t in 0..count {
            let mut cand = poly_from_index(t, p, d);
            cand.resize(d, 0);
            cand.push(1);
            let (q, r) = div_rem(&rest, &cand, p);
            if r.is_empty() {
                out.push(cand);
                rest = q;
                found = true;
                break;
            }
        }
        assert!(found, "trial splitting failed");
    }
    out.push(rest);
    out
}

/// Complete factorisation of a nonzero polynomial into monic irreducibles with
/// multiplicities, sorted by (degree, coefficients).
pub fn factor(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f, p) {
        for (h, d) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, d, p) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

pub fn is_zero(a: &FpPoly) -> bool {
    a.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(fs: &[(FpPoly, u32)], p: u64) -> FpPoly {
        let mut acc = vec![1];
        for (g, m) in fs {
            for _ in 0..*m {
                acc = mul(&acc, g, p);
            }
        }
        acc
    }

    #[test]
    fn factors_x2_plus_5_mod_3() {
        let fs = factor(&vec![2, 0, 1], 3);
        assert_eq!(fs, vec![(vec![1, 1], 1), (vec![2, 1], 1)]);
    }

    #[test]
    fn inert_mod_11() {
        let fs = factor(&vec![5, 0, 1], 11);
        assert_eq!(fs, vec![(vec![5, 0, 1], 1)]);
    }

    #[test]
    fn ramified_and_repeated_factors() {
        // x^3 - 2 = x^3 mod 2; x^2 + 1 = (x + 1)^2 mod 2.
        assert_eq!(factor(&vec![0, 0, 0, 1], 2), vec![(vec![0, 1], 3)]);
        assert_eq!(factor(&vec![1, 0, 1], 2), vec![(vec![1, 1], 2)]);
        let f = vec![3, 1, 4, 1, 5, 9, 2, 6, 1];
        for p in [2u64, 3, 5, 7, 101, 1_000_000_007] {
            let fp = monic(&trim(f.iter().map(|c| c % p).collect()), p);
            assert_eq!(expand(&factor(&fp, p), p), fp, "p = {p}");
        }
    }
}
