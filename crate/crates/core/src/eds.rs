//! Division-polynomial values psi_n at an integral point of an integral
//! rational model, computed with the elliptic-net block ladder. This is the
//! fast path for x_n, y_n at indices in the thousands.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::curve::Point;
use crate::field::FieldElement;

#[derive(Clone, Debug)]
pub struct RationalModel {
    pub a: [BigInt; 5],
    pub x: BigInt,
    pub y: BigInt,
    b: [BigInt; 4],
    /// Primes dividing the discriminant; the only possible common factors
    /// of phi_n and psi_n^2.
    pub bad_primes: Vec<u64>,
}

impl RationalModel {
    /// Applies when all coefficients and the generator are rational integers.
    pub fn try_new(a: &[FieldElement; 5], gen: &Point, disc: &FieldElement) -> Option<Self> {
        let coeffs: Vec<BigInt> = a.iter().map(|c| c.as_integer()).collect::<Option<_>>()?;
        let (x, y) = match gen {
            Point::Affine(x, y) => (x.as_integer()?, y.as_integer()?),
            Point::Infinity => return None,
        };
        let d = disc.as_integer()?;
        let bad_primes = arith::factor(&d)
            .into_iter()
            .map(|(p, _)| p.to_u64())
            .collect::<Option<Vec<u64>>>()?;
        let [a1, a2, a3, a4, a6] = [0, 1, 2, 3, 4].map(|i| coeffs[i].clone());
        let b2 = &a1 * &a1 + &a2 * 4;
        let b4 = &a4 * 2 + &a1 * &a3;
        let b6 = &a3 * &a3 + &a6 * 4;
        let b8 = &a1 * &a1 * &a6 + &a2 * &a6 * 4 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let w2: BigInt = &y * 2 + &a1 * &x + &a3;
        if w2.is_zero() {
            return None;
        }
        Some(RationalModel { a: [a1, a2, a3, a4, a6], x, y, b: [b2, b4, b6, b8], bad_primes })
    }

    fn w2(&self) -> BigInt {
        &self.y * 2 + &self.a[0] * &self.x + &self.a[2]
    }

    fn w3(&self) -> BigInt {
        let [b2, b4, b6, b8] = &self.b;
        let x = &self.x;
        let x2 = x * x;
        &x2 * &x2 * 3 + b2 * &x2 * x + b4 * &x2 * 3 + b6 * x * 3 + b8
    }

    fn w4(&self) -> BigInt {
        let [b2, b4, b6, b8] = &self.b;
        let x = &self.x;
        let p = |k: u32| x.pow(k);
        self.w2()
            * (p(6) * 2 + b2 * p(5) + b4 * p(4) * 5 + b6 * p(3) * 10 + b8 * p(2) * 10
                + (b2 * b8 - b4 * b6) * x
                + (b4 * b8 - b6 * b6))
    }

    /// W_{k-3}, ..., W_{k+4} for k >= 1.
    pub fn window(&self, k: u64) -> [BigInt; 8] {
        assert!(k >= 1);
        let w2 = self.w2();
        let (w3, w4) = (self.w3(), self.w4());
        let w5 = &w4 * w2.pow(3) - w3.pow(3);
        let mut v: [BigInt; 8] = [-w2.clone(), -BigInt::one(), BigInt::zero(), BigInt::one(), w2.clone(), w3, w4, w5];
        let bits = 64 - k.leading_zeros();
        for i in (0..bits - 1).rev() {
            let odd = (k >> i) & 1 == 1;
            v = step(&v, &w2, odd);
        }
        v
    }

    /// psi_n for any integer n (psi_{-n} = -psi_n).
    pub fn psi(&self, n: i64) -> BigInt {
        if n == 0 {
            return BigInt::zero();
        }
        let w = self.window(n.unsigned_abs());
        if n < 0 {
            -w[3].clone()
        } else {
            w[3].clone()
        }
    }

    /// Reduce num/den; common factors can only sit at bad primes.
    fn strip(&self, mut num: BigInt, mut den: BigInt) -> (BigInt, BigInt) {
        if num.is_zero() {
            return (num, BigInt::one());
        }
        for &p in &self.bad_primes {
            let t = arith::valuation(&num, p).min(arith::valuation(&den, p));
            if t > 0 {
                let pt = BigInt::from(p).pow(t as u32);
                num /= &pt;
                den /= &pt;
            }
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        (num, den)
    }

    /// x_n as a reduced fraction (numerator, positive denominator).
    pub fn x_fraction(&self, n: i64) -> (BigInt, BigInt) {
        let w = self.window(n.unsigned_abs());
        let (pm, p0, pp) = (&w[2], &w[3], &w[4]);
        let psi2 = p0 * p0;
        let phi = &self.x * &psi2 - pp * pm;
        self.strip(phi, psi2)
    }

    /// (x_n, y_n) as reduced fractions.
    pub fn xy_fractions(&self, n: i64) -> ((BigInt, BigInt), (BigInt, BigInt)) {
        let m = n.unsigned_abs();
        let w = self.window(m);
        let (pm2, pm, p0, pp, pp2) = (&w[1], &w[2], &w[3], &w[4], &w[5]);
        let psi2 = p0 * p0;
        let psi3 = &psi2 * p0;
        let phi = &self.x * &psi2 - pp * pm;
        // psi_{2n} / psi_n = (psi_{n+2} psi_{n-1}^2 - psi_{n-2} psi_{n+1}^2) / psi_2.
        let ratio = (pp2 * pm * pm - pm2 * pp * pp).div_floor(&self.w2());
        let two_omega = ratio - &self.a[0] * &phi * p0 - &self.a[2] * &psi3;
        let omega: BigInt = two_omega / 2;
        let (mut yn, yd) = (omega, psi3);
        let (xn, xd) = self.strip(phi, psi2);
        if n < 0 {
            // y_{-n} = -y_n - a1 x_n - a3.
            let t = &self.a[0] * &xn * &yd / &xd + &self.a[2] * &yd;
            yn = -yn - t;
        }
        let (yn, yd) = self.strip(yn, yd);
        ((xn, xd), (yn, yd))
    }

    /// Denominator of x_n.
    pub fn x_denominator(&self, n: i64) -> BigInt {
        self.x_fraction(n).1
    }
}

/// From W_{k-3..k+4} compute W_{2k-3..2k+4} (or the window shifted by one
/// when `odd`).
fn step(v: &[BigInt; 8], w2: &BigInt, odd: bool) -> [BigInt; 8] {
    // v[i] = W_{k-3+i}; W(j) for j in k-3..=k+4.
    let w = |j: i64| -> &BigInt { &v[(j + 3) as usize] };
    let sq: Vec<BigInt> = v.iter().map(|t| t * t).collect();
    let cube: Vec<BigInt> = v.iter().zip(&sq).map(|(t, s)| t * s).collect();
    let s = |j: i64| -> &BigInt { &sq[(j + 3) as usize] };
    let c = |j: i64| -> &BigInt { &cube[(j + 3) as usize] };
    // Offsets relative to k: W_{2(k+d)+1} and W_{2(k+d)}.
    let odd_term = |d: i64| w(d + 2) * c(d) - w(d - 1) * c(d + 1);
    let even_term = |d: i64| {
        let t = (w(d + 2) * s(d - 1) - w(d - 2) * s(d + 1)) * w(d);
        if w2.is_one() {
            t
        } else {
            t / w2
        }
    };
    // Terms W_{2k+j} for j = -3..=5.
    let all: [BigInt; 9] = [
        odd_term(-2),  // 2k-3
        even_term(-1), // 2k-2
        odd_term(-1),  // 2k-1
        even_term(0),  // 2k
        odd_term(0),   // 2k+1
        even_term(1),  // 2k+2
        odd_term(1),   // 2k+3
        even_term(2),  // 2k+4
        odd_term(2),   // 2k+5
    ];
    let off = usize::from(odd);
    std::array::from_fn(|i| all[i + off].clone())
}

/// Small-index sanity: ratio of bit lengths, exposed for reports.
pub fn approx_digits(n: &BigInt) -> u64 {
    (n.bits() as f64 * std::f64::consts::LOG10_2).ceil().to_u64().unwrap_or(0)
}
