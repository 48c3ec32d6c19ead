//! Dense univariate polynomials, generic over the coefficient scalar.
//!
//! Coefficients are stored in ascending degree order and kept trimmed, so the
//! zero polynomial is the empty vector.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Num + Clone> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::new(vec![T::one()])
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Division with remainder; requires an invertible leading coefficient of
    /// the divisor (a field, or a monic divisor over a ring).
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Substitute `x -> x(t)` for a polynomial `t`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc.mul(inner).add(&Poly::constant(c.clone())))
    }
}

impl<T: Num + Clone> Poly<T> {
    /// Monic gcd over a field.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading();
        Poly::new(a.coeffs.into_iter().map(|c| c / lead.clone()).collect())
    }
}

impl<T: Num + Clone + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

pub type ZPoly = Poly<BigInt>;
pub type QPoly = Poly<BigRational>;
pub type CPoly = Poly<Complex64>;

pub fn to_qpoly(p: &ZPoly) -> QPoly {
    Poly::new(
        p.coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect(),
    )
}

/// Number of distinct real roots of a squarefree rational polynomial, by
/// Sturm's theorem (sign variations at -inf minus those at +inf).
pub fn sturm_real_root_count(f: &QPoly) -> usize {
    let Some(deg) = f.degree() else { return 0 };
    if deg == 0 {
        return 0;
    }
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(Poly::new(r.coeffs().iter().map(|c| -c.clone()).collect()));
    }
    let sign_at = |p: &QPoly, plus_inf: bool| -> i32 {
        let lead = p.leading();
        let s = if lead.is_positive() { 1 } else { -1 };
        let odd = p.degree().unwrap_or(0) % 2 == 1;
        if plus_inf || !odd {
            s
        } else {
            -s
        }
    };
    let variations = |plus_inf: bool| -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| sign_at(p, plus_inf))
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    variations(false) - variations(true)
}

/// Complex roots of a polynomial by the Aberth-Ehrlich iteration.
pub fn approximate_roots(p: &CPoly) -> Vec<Complex64> {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let lead = p.leading();
    let monic: Vec<Complex64> = p.coeffs().iter().map(|c| c / lead).collect();
    // Fujiwara bound on the root moduli.
    let radius = 2.0
        * (0..n)
            .map(|k| {
                let c = monic[k].norm();
                if k == 0 {
                    (c / 2.0).powf(1.0 / n as f64)
                } else {
                    c.powf(1.0 / (n - k) as f64)
                }
            })
            .fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5 + 0.01, ang)
        })
        .collect();
    let mp = Poly::new(monic);
    let dp = mp.derivative();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let fz = mp.eval(&z[i]);
            let dz = dp.eval(&z[i]);
            let ratio = if dz.norm() == 0.0 { Complex64::new(1e-8, 1e-8) } else { fz / dz };
            let mut s = Complex64::zero();
            for j in 0..n {
                if i != j {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        s += Complex64::one() / d;
                    }
                }
            }
            let denom = Complex64::one() - ratio * s;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QPoly {
        Poly::new(v.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(sturm_real_root_count(&q(&[1, 0, 1])), 0);
        assert_eq!(sturm_real_root_count(&q(&[-2, 0, 0, 1])), 1);
        assert_eq!(sturm_real_root_count(&q(&[-2, 0, 1])), 2);
        assert_eq!(sturm_real_root_count(&q(&[-2, 0, 0, 0, 1])), 2);
        assert_eq!(sturm_real_root_count(&q(&[1, 0, 0, 0, 1])), 0);
    }

    #[test]
    fn div_rem_identity() {
        let a = q(&[5, -3, 0, 2, 1]);
        let b = q(&[1, 1, 1]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(qq.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn aberth_finds_cube_roots_of_two() {
        let p: CPoly = Poly::new(vec![
            Complex64::new(-2.0, 0.0),
            Complex64::zero(),
            Complex64::zero(),
            Complex64::one(),
        ]);
        for z in approximate_roots(&p) {
            assert!((z.norm() - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
        }
    }
}
