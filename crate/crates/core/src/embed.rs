//! Certified complex embeddings: each root of f is enclosed in a disk with a
//! rational radius, and |sigma(x)| is bounded by an interval with rational
//! endpoints. Nothing here is decided by floating-point rounding.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::poly::{approximate_roots, CPoly, Poly};

/// A closed interval `[lo, hi]` of non-negative rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo * &other.lo, hi: &self.hi * &other.hi }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.lo.to_f64().unwrap_or(f64::NAN), self.hi.to_f64().unwrap_or(f64::NAN))
    }
}

/// Root of f enclosed in the disk `|z - (re + i im) / 2^bits| <= rho`.
#[derive(Clone, Debug)]
pub struct RootDisk {
    re: BigInt,
    im: BigInt,
    bits: u32,
    rho: BigRational,
}

impl RootDisk {
    pub fn radius(&self) -> &BigRational {
        &self.rho
    }

    pub fn center(&self) -> Complex64 {
        let s = 2f64.powi(self.bits as i32);
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN) / s,
            self.im.to_f64().unwrap_or(f64::NAN) / s,
        )
    }
}

/// `(lo, hi)` with `lo^2 <= q <= hi^2`, both multiples of `2^-bits`.
pub fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    if !q.is_positive() {
        return (BigRational::zero(), BigRational::zero());
    }
    let scaled = (q.numer() << (2 * bits as usize)) / q.denom();
    let s = scaled.sqrt();
    let den = BigInt::one() << bits as usize;
    (crate::arith::ratio(s.clone(), den.clone()), crate::arith::ratio(s + 1, den))
}

/// Floating-point roots ordered as r real ones (imaginary part dropped), then
/// one representative with positive imaginary part per complex pair, then
/// the conjugates. The first r + s entries index the embeddings up to
/// conjugation.
pub fn float_roots(field: &NumberField) -> Vec<Complex64> {
    let f = field.min_poly();
    let cp: CPoly = Poly::new(
        f.iter()
            .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect(),
    );
    let mut roots = approximate_roots(&cp);
    let (r, _) = field.signature();
    roots.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap());
    let mut real: Vec<Complex64> = roots[..r].iter().map(|z| Complex64::new(z.re, 0.0)).collect();
    real.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    let mut upper: Vec<Complex64> = roots[r..].iter().filter(|z| z.im > 0.0).copied().collect();
    upper.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    let lower: Vec<Complex64> = upper.iter().map(|z| z.conj()).collect();
    real.extend(upper);
    real.extend(lower);
    real
}

fn horner_scaled(coeffs: &[BigInt], w: (&BigInt, &BigInt), s: &BigInt) -> (BigInt, BigInt) {
    // Returns P(w/s) * s^(len-1) as a Gaussian integer.
    let Some(last) = coeffs.last() else {
        return (BigInt::zero(), BigInt::zero());
    };
    let (mut re, mut im) = (last.clone(), BigInt::zero());
    let mut spow = BigInt::one();
    for c in coeffs[..coeffs.len() - 1].iter().rev() {
        spow *= s;
        let nre = &re * w.0 - &im * w.1 + c * &spow;
        let nim = &re * w.1 + &im * w.0;
        re = nre;
        im = nim;
    }
    (re, im)
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // Nearest integer to a / b with b > 0.
    let two_a = a * 2 + b;
    num_integer::Integer::div_floor(&two_a, &(b * 2))
}

/// Isolate all n roots of f in pairwise disjoint disks at the given precision.
pub fn isolate_roots(field: &NumberField, bits: u32) -> Result<Vec<RootDisk>> {
    let f = field.min_poly();
    let n = field.degree();
    if n == 1 {
        return Ok(vec![RootDisk {
            re: -f[0].clone(),
            im: BigInt::zero(),
            bits: 0,
            rho: BigRational::zero(),
        }]);
    }
    let df: Vec<BigInt> = (1..=n).map(|k| &f[k] * k).collect();
    let s = BigInt::one() << bits as usize;
    let (r, _) = field.signature();
    let mut disks = Vec::with_capacity(n);
    for (idx, z0) in float_roots(field).into_iter().enumerate() {
        let real = idx < r;
        let scale = 2f64.powi(bits.min(1000) as i32);
        let to_big = |v: f64| -> BigInt {
            let shifted = v * scale;
            if bits <= 1000 && shifted.is_finite() {
                BigInt::from(shifted.round() as i128)
            } else {
                BigInt::from((v * 2f64.powi(50)).round() as i128) << (bits as usize - 50)
            }
        };
        let mut re = to_big(z0.re);
        let mut im = if real { BigInt::zero() } else { to_big(z0.im) };
        for _ in 0..(bits as usize / 8 + 40) {
            let (h_re, h_im) = horner_scaled(f, (&re, &im), &s);
            let (g_re, g_im) = horner_scaled(&df, (&re, &im), &s);
            let g2 = &g_re * &g_re + &g_im * &g_im;
            if g2.is_zero() {
                return Err(Error::PrecisionExhausted(bits));
            }
            // H / G = H * conj(G) / |G|^2.
            let q_re = round_div(&(&h_re * &g_re + &h_im * &g_im), &g2);
            let q_im = if real {
                BigInt::zero()
            } else {
                round_div(&(&h_im * &g_re - &h_re * &g_im), &g2)
            };
            let done = q_re.abs() <= BigInt::one() && q_im.abs() <= BigInt::one();
            re -= q_re;
            im -= q_im;
            if done {
                break;
            }
        }
        let (h_re, h_im) = horner_scaled(f, (&re, &im), &s);
        let (g_re, g_im) = horner_scaled(&df, (&re, &im), &s);
        let h2 = &h_re * &h_re + &h_im * &h_im;
        let g2 = &g_re * &g_re + &g_im * &g_im;
        if g2.is_zero() {
            return Err(Error::PrecisionExhausted(bits));
        }
        // rho = n |f(z)| / |f'(z)| = n |H| / (s |G|).
        let rho2 = crate::arith::ratio(h2 * (n * n), g2 * &s * &s);
        let (_, rho) = sqrt_bounds(&rho2, bits + 8);
        disks.push(RootDisk { re, im, bits, rho });
    }
    let s2 = BigRational::from_integer(&s * &s);
    for i in 0..n {
        for j in i + 1..n {
            let dre = &disks[i].re - &disks[j].re;
            let dim = &disks[i].im - &disks[j].im;
            let dist2 = BigRational::from_integer(&dre * &dre + &dim * &dim) / &s2;
            let sum = &disks[i].rho + &disks[j].rho;
            if dist2 <= &sum * &sum {
                return Err(Error::PrecisionExhausted(bits));
            }
        }
    }
    Ok(disks)
}

fn abs_interval_at(x: &FieldElement, disk: &RootDisk, bits: u32) -> Interval {
    let s = BigInt::one() << disk.bits as usize;
    let num = x.num();
    let n = num.len();
    let (v_re, v_im) = horner_scaled(num, (&disk.re, &disk.im), &s);
    let scale = s.pow(n as u32 - 1) * x.den();
    let val2 = crate::arith::ratio(&v_re * &v_re + &v_im * &v_im, &scale * &scale);
    let (vlo, vhi) = sqrt_bounds(&val2, bits + 8);
    // |x(w) - x(c)| <= rho * sum_k k |c_k| (|c| + rho)^(k-1) / den.
    let c2 = crate::arith::ratio(&disk.re * &disk.re + &disk.im * &disk.im, &s * &s);
    let (_, cabs) = sqrt_bounds(&c2, bits + 8);
    let reach = &cabs + &disk.rho;
    let mut slope = BigRational::zero();
    let mut rpow = BigRational::one();
    for (k, c) in num.iter().enumerate().skip(1) {
        slope += BigRational::from_integer(c.abs() * k) * &rpow;
        rpow *= &reach;
    }
    let delta = &disk.rho * slope / BigRational::from_integer(x.den().clone());
    let lo = &vlo - &delta;
    Interval {
        lo: if lo.is_negative() { BigRational::zero() } else { lo },
        hi: vhi + delta,
    }
}

/// Certified enclosures of |sigma(x)| for all n embeddings (conjugate pairs
/// listed separately), in the order of [`float_roots`].
pub fn embeddings_abs(x: &FieldElement, bits: u32) -> Result<Vec<Interval>> {
    if bits < 32 {
        return Err(Error::PrecisionExhausted(bits));
    }
    let n = x.field().degree();
    if let Some(q) = x.as_rational() {
        return Ok(vec![Interval::point(q.abs()); n]);
    }
    let disks = isolate_roots(x.field(), bits)?;
    Ok(disks.iter().map(|d| abs_interval_at(x, d, bits)).collect())
}

/// Decide `(2 |sigma(x)|)^k <= bound` for every embedding, doubling the
/// precision while an interval straddles the threshold.
pub fn certified_half_root_bound(
    x: &FieldElement,
    k: u32,
    bound: &BigRational,
    start_bits: u32,
    cap_bits: u32,
) -> Result<bool> {
    let two = BigRational::from_integer(2.into());
    if x.field().is_imaginary_quadratic() && !bound.is_negative() {
        // |sigma(x)|^2 = N(x) for both embeddings: compare squares exactly.
        let lhs = num_traits::pow(two.clone(), 2 * k as usize) * num_traits::pow(x.norm(), k as usize);
        return Ok(lhs <= bound * bound);
    }
    let mut bits = start_bits.max(32);
    loop {
        let ivs = embeddings_abs(x, bits)?;
        let mut undecided = false;
        for iv in &ivs {
            let hi = num_traits::pow(&two * &iv.hi, k as usize);
            if &hi <= bound {
                continue;
            }
            let lo = num_traits::pow(&two * &iv.lo, k as usize);
            if &lo > bound {
                return Ok(false);
            }
            undecided = true;
        }
        if !undecided {
            return Ok(true);
        }
        if bits >= cap_bits {
            return Err(Error::PrecisionExhausted(bits));
        }
        bits = (bits * 2).min(cap_bits);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn gaussian_unit_has_modulus_one() {
        let k = NumberField::from_i64("g", &[1, 0, 1], 1).unwrap();
        for iv in embeddings_abs(&k.theta(), 64).unwrap() {
            assert!(iv.contains(&q(1, 1)));
        }
    }

    #[test]
    fn boundary_case_is_decided_exactly() {
        let k = NumberField::from_i64("g", &[1, 0, 1], 1).unwrap();
        // (2 |i|)^2 = 4.
        assert!(certified_half_root_bound(&k.theta(), 2, &q(4, 1), 32, 64).unwrap());
        assert!(!certified_half_root_bound(&k.theta(), 2, &q(39, 10), 32, 64).unwrap());
    }

    #[test]
    fn rational_is_exact() {
        let k = NumberField::from_i64("c", &[-2, 0, 0, 1], 1).unwrap();
        let ivs = embeddings_abs(&k.from_int(3), 32).unwrap();
        assert_eq!(ivs.len(), 3);
        assert!(ivs.iter().all(|iv| iv.lo == q(3, 1) && iv.hi == q(3, 1)));
    }

    #[test]
    fn cube_root_of_two_and_shrinking_widths() {
        let k = NumberField::from_i64("c", &[-2, 0, 0, 1], 1).unwrap();
        let coarse = embeddings_abs(&k.theta(), 32).unwrap();
        let fine = embeddings_abs(&k.theta(), 128).unwrap();
        let c = 2f64.powf(1.0 / 3.0);
        for (a, b) in coarse.iter().zip(&fine) {
            let (lo, hi) = b.to_f64_pair();
            assert!(lo <= c + 1e-15 && c - 1e-15 <= hi);
            assert!(b.width() <= a.width());
        }
        // 1.25992104989 < 2^(1/3) < 1.25992104990 pins the enclosure.
        for iv in &fine {
            assert!(iv.lo > q(125992104989, 100000000000));
            assert!(iv.hi < q(125992104990, 100000000000));
        }
    }

    #[test]
    fn certified_bound_decides_both_ways() {
        let k = NumberField::from_i64("g", &[1, 0, 1], 1).unwrap();
        let one = k.theta();
        // (2 |i|)^2 = 4 <= 1024 and 4 > 3.
        assert!(certified_half_root_bound(&one, 2, &q(1024, 1), 32, 512).unwrap());
        assert!(!certified_half_root_bound(&one, 2, &q(3, 1), 32, 512).unwrap());
    }
}
