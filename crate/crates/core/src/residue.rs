//! Residue fields O_K / P = F_p[t]/(g) and elliptic-curve arithmetic over them.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::ideals::{valuation, PrimeIdeal};
use crate::modp::{self, FpPoly};

pub type Fq = FpPoly;

#[derive(Clone, Debug)]
pub struct ResidueField {
    pub p: u64,
    pub g: FpPoly,
    pub degree: usize,
    prime: PrimeIdeal,
}

impl ResidueField {
    pub fn new(prime: &PrimeIdeal) -> Self {
        let g = modp::from_ints(&prime.g, prime.p);
        ResidueField { p: prime.p, degree: modp::degree(&g).unwrap(), g, prime: prime.clone() }
    }

    pub fn prime(&self) -> &PrimeIdeal {
        &self.prime
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree as u32)
    }

    pub fn zero(&self) -> Fq {
        Vec::new()
    }

    pub fn one(&self) -> Fq {
        vec![1]
    }

    pub fn from_u64(&self, c: u64) -> Fq {
        modp::trim(vec![c % self.p])
    }

    fn reduce_integral(&self, num: &[BigInt]) -> Fq {
        modp::rem(&modp::from_ints(num, self.p), &self.g, self.p)
    }

    /// Image of x in O/P, or `None` when v_P(x) < 0.
    pub fn reduce(&self, x: &FieldElement) -> Result<Option<Fq>> {
        if x.is_zero() {
            return Ok(Some(self.zero()));
        }
        let pb = BigInt::from(self.p);
        if !(x.den() % &pb).is_zero() {
            let a = self.reduce_integral(x.num());
            let d = self.reduce_integral(&[x.den().clone()]);
            return Ok(Some(self.mul(&a, &self.inv(&d)?)));
        }
        if valuation(x, &self.prime)? < 0 {
            return Ok(None);
        }
        // Multiply numerator and denominator by (beta/p)^k, a P-adic unit
        // adjustment that clears p from the denominator at P.
        let field = x.field();
        let k = crate::arith::valuation(x.den(), self.p) * self.prime.e as u64;
        let beta_over_p = field.from_int_coords(self.prime_beta()).div_int(&pb);
        let adj = beta_over_p.pow(k);
        let a = &field.from_int_coords(x.num().to_vec()) * &adj;
        let d = &field.from_bigint(x.den().clone()) * &adj;
        if !a.is_integral() || !d.is_integral() {
            return Err(Error::Unsupported("residue reduction left a denominator".into()));
        }
        let ra = self.reduce_integral(a.num());
        let rd = self.reduce_integral(d.num());
        Ok(Some(self.mul(&ra, &self.inv(&rd)?)))
    }

    fn prime_beta(&self) -> Vec<BigInt> {
        self.prime.beta_coords().to_vec()
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        modp::add(a, b, self.p)
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        modp::sub(a, b, self.p)
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        modp::sub(&Vec::new(), a, self.p)
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        modp::rem(&modp::mul(a, b, self.p), &self.g, self.p)
    }

    pub fn scale(&self, a: &Fq, c: u64) -> Fq {
        modp::scale(a, c % self.p, self.p)
    }

    pub fn pow(&self, a: &Fq, e: &BigUint) -> Fq {
        modp::pow_mod(a, e, &self.g, self.p)
    }

    pub fn inv(&self, a: &Fq) -> Result<Fq> {
        if a.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let e = self.order() - 2u32;
        Ok(self.pow(a, &e))
    }

    /// Quadratic character (p odd): 0, 1 or -1.
    pub fn chi(&self, a: &Fq) -> i32 {
        if a.is_empty() {
            return 0;
        }
        let e = (self.order() - 1u32) / 2u32;
        if self.pow(a, &e) == vec![1] {
            1
        } else {
            -1
        }
    }

    /// All elements, as base-p digit vectors.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        let q = self.order().to_u64().expect("residue field too large to enumerate");
        (0..q).map(move |mut t| {
            let mut v = Vec::with_capacity(self.degree);
            for _ in 0..self.degree {
                v.push(t % self.p);
                t /= self.p;
            }
            modp::trim(v)
        })
    }
}

/// A long Weierstrass curve reduced modulo P (possibly singular).
#[derive(Clone, Debug)]
pub struct ReducedCurve {
    pub k: ResidueField,
    /// a1, a2, a3, a4, a6.
    pub a: [Fq; 5],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RPoint {
    Infinity,
    Affine(Fq, Fq),
}

impl ReducedCurve {
    pub fn new(k: ResidueField, a: [Fq; 5]) -> Self {
        ReducedCurve { k, a }
    }

    fn lhs_minus_rhs(&self, x: &Fq, y: &Fq) -> Fq {
        let k = &self.k;
        let [a1, a2, a3, a4, a6] = &self.a;
        let y2 = k.mul(y, y);
        let a1xy = k.mul(&k.mul(a1, x), y);
        let a3y = k.mul(a3, y);
        let x2 = k.mul(x, x);
        let x3 = k.mul(&x2, x);
        let rhs = k.add(&k.add(&x3, &k.mul(a2, &x2)), &k.add(&k.mul(a4, x), a6));
        k.sub(&k.add(&k.add(&y2, &a1xy), &a3y), &rhs)
    }

    pub fn contains(&self, pt: &RPoint) -> bool {
        match pt {
            RPoint::Infinity => true,
            RPoint::Affine(x, y) => self.lhs_minus_rhs(x, y).is_empty(),
        }
    }

    /// Both partial derivatives of the Weierstrass equation vanish.
    pub fn is_singular_point(&self, x: &Fq, y: &Fq) -> bool {
        let k = &self.k;
        let [a1, a2, a3, a4, _] = &self.a;
        let fy = k.add(&k.add(&k.scale(y, 2), &k.mul(a1, x)), a3);
        let fx = k.sub(
            &k.mul(a1, y),
            &k.add(&k.add(&k.scale(&k.mul(x, x), 3), &k.scale(&k.mul(a2, x), 2)), a4),
        );
        fx.is_empty() && fy.is_empty()
    }

    pub fn neg(&self, pt: &RPoint) -> RPoint {
        match pt {
            RPoint::Infinity => RPoint::Infinity,
            RPoint::Affine(x, y) => {
                let k = &self.k;
                let t = k.add(&k.mul(&self.a[0], x), &self.a[2]);
                RPoint::Affine(x.clone(), k.sub(&k.neg(y), &t))
            }
        }
    }

    pub fn add(&self, p1: &RPoint, p2: &RPoint) -> RPoint {
        let k = &self.k;
        let [a1, a2, a3, a4, _] = &self.a;
        let (x1, y1, x2, y2) = match (p1, p2) {
            (RPoint::Infinity, q) | (q, RPoint::Infinity) => return q.clone(),
            (RPoint::Affine(x1, y1), RPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let (lambda, nu);
        if x1 == x2 {
            let den = k.add(&k.add(&k.scale(y1, 2), &k.mul(a1, x1)), a3);
            if den.is_empty() || y1 != y2 {
                return RPoint::Infinity;
            }
            let num = k.sub(
                &k.add(&k.add(&k.scale(&k.mul(x1, x1), 3), &k.scale(&k.mul(a2, x1), 2)), a4),
                &k.mul(a1, y1),
            );
            lambda = k.mul(&num, &k.inv(&den).unwrap());
        } else {
            lambda = k.mul(&k.sub(y2, y1), &k.inv(&k.sub(x2, x1)).unwrap());
        }
        nu = k.sub(y1, &k.mul(&lambda, x1));
        let x3 = k.sub(
            &k.sub(&k.sub(&k.add(&k.mul(&lambda, &lambda), &k.mul(a1, &lambda)), a2), x1),
            x2,
        );
        let y3 = k.sub(
            &k.sub(&k.neg(&k.mul(&k.add(&lambda, a1), &x3)), &nu),
            a3,
        );
        RPoint::Affine(x3, y3)
    }

    pub fn mul(&self, pt: &RPoint, n: u64) -> RPoint {
        let mut acc = RPoint::Infinity;
        let mut base = pt.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    /// Order of a point by stepping through multiples, up to `cap`.
    pub fn point_order(&self, pt: &RPoint, cap: u64) -> Option<u64> {
        let mut cur = pt.clone();
        for k in 1..=cap {
            if cur == RPoint::Infinity {
                return Some(k);
            }
            cur = self.add(&cur, pt);
        }
        None
    }

    /// #E(F_q) including the point at infinity. Odd characteristic uses the
    /// quadratic character of the discriminant of y^2 + (a1 x + a3) y - rhs(x);
    /// characteristic 2 enumerates pairs.
    pub fn count_points(&self) -> u64 {
        let k = &self.k;
        if k.p == 2 {
            let elems: Vec<Fq> = k.elements().collect();
            let mut total = 1;
            for x in &elems {
                for y in &elems {
                    if self.lhs_minus_rhs(x, y).is_empty() {
                        total += 1;
                    }
                }
            }
            return total;
        }
        let [a1, a2, a3, a4, a6] = &self.a;
        let mut total: i64 = 1;
        for x in k.elements() {
            let b = k.add(&k.mul(a1, &x), a3);
            let x2 = k.mul(&x, &x);
            let rhs = k.add(
                &k.add(&k.mul(&x2, &x), &k.mul(a2, &x2)),
                &k.add(&k.mul(a4, &x), a6),
            );
            let disc = k.add(&k.mul(&b, &b), &k.scale(&rhs, 4));
            total += 1 + k.chi(&disc) as i64;
        }
        total as u64
    }
}

pub fn is_one(a: &Fq) -> bool {
    a.len() == 1 && a[0].is_one()
}

pub fn is_zero(a: &Fq) -> bool {
    a.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use crate::curve::EllipticCurve;
    use crate::field::NumberField;
    use crate::ideals::factor_prime;

    #[test]
    fn point_counts_37a() {
        let q = NumberField::rationals();
        let e = EllipticCurve::from_i64("37a", &q, [0, 0, 1, -1, 0], (0, 0), "").unwrap();
        // Brute-force oracle over F_p for comparison.
        for p in [2u64, 3, 5, 7, 11] {
            let pr = factor_prime(&q, p).unwrap().remove(0);
            let red = e.reduce_at(&pr).unwrap();
            let mut brute = 1;
            for x in 0..p as i64 {
                for y in 0..p as i64 {
                    if (y * y + y - x * x * x + x).rem_euclid(p as i64) == 0 {
                        brute += 1;
                    }
                }
            }
            assert_eq!(red.count_points(), brute, "p = {p}");
        }
        let red2 = e.reduce_at(&factor_prime(&q, 2).unwrap()[0]).unwrap();
        assert_eq!(red2.count_points(), 5);
    }

    #[test]
    fn gaussian_residue_field_of_order_nine() {
        let k = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
        let pr = factor_prime(&k, 3).unwrap().remove(0);
        assert_eq!(pr.f, 2);
        let e = EllipticCurve::from_i64("37a", &k, [0, 0, 1, -1, 0], (0, 0), "").unwrap();
        let n = e.reduce_at(&pr).unwrap().count_points();
        // a_3 = 3 + 1 - 7 = -3, a_9 = a_3^2 - 2*3 = 3, #E(F_9) = 9 + 1 - 3.
        assert_eq!(n, 7);
    }
}
