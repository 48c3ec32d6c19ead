//! Long Weierstrass curves over K with an exact chord-tangent group law.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::eds::RationalModel;
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::ideals::{factor_element, valuation, IdealFactorization, PrimeIdeal};
use crate::residue::{RPoint, ReducedCurve, ResidueField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(FieldElement, FieldElement),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&FieldElement> {
        match self {
            Point::Affine(x, _) => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&FieldElement> {
        match self {
            Point::Affine(_, y) => Some(y),
            Point::Infinity => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Point::Infinity => json!("infinity"),
            Point::Affine(x, y) => json!({"x": x.to_string_coords(), "y": y.to_string_coords()}),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Debug)]
pub struct EllipticCurve {
    pub label: String,
    field: NumberField,
    /// a1, a2, a3, a4, a6.
    pub a: [FieldElement; 5],
    pub b2: FieldElement,
    pub b4: FieldElement,
    pub b6: FieldElement,
    pub b8: FieldElement,
    pub disc: FieldElement,
    pub generator: Point,
    pub rank_assertion: String,
    rational: Option<RationalModel>,
    memo: RwLock<HashMap<i64, Point>>,
    memo_cap: i64,
}

pub type Curve = Arc<EllipticCurve>;

impl EllipticCurve {
    pub fn new(
        label: &str,
        field: &NumberField,
        a: [FieldElement; 5],
        generator: (FieldElement, FieldElement),
        rank_assertion: &str,
    ) -> Result<Curve> {
        if a.iter().any(|c| !c.is_integral()) {
            return Err(Error::NotIntegral);
        }
        if a.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let [a1, a2, a3, a4, a6] = &a;
        let four = field.from_int(4);
        let b2 = &(a1 * a1) + &(&four * a2);
        let b4 = &(&field.from_int(2) * a4) + &(a1 * a3);
        let b6 = &(a3 * a3) + &(&four * a6);
        let b8 = &(&(&(&(&(a1 * a1) * a6) + &(&(&four * a2) * a6)) - &(&(a1 * a3) * a4))
            + &(&(a2 * a3) * a3))
            - &(a4 * a4);
        let disc = &(&(&(-&(&(&b2 * &b2) * &b8)) - &(&field.from_int(8) * &(&(&b4 * &b4) * &b4)))
            - &(&field.from_int(27) * &(&b6 * &b6)))
            + &(&field.from_int(9) * &(&(&b2 * &b4) * &b6));
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let gen = Point::Affine(generator.0, generator.1);
        let rational = RationalModel::try_new(&a, &gen, &disc);
        let curve = EllipticCurve {
            label: label.to_string(),
            field: field.clone(),
            a,
            b2,
            b4,
            b6,
            b8,
            disc,
            generator: gen,
            rank_assertion: rank_assertion.to_string(),
            rational,
            memo: RwLock::new(HashMap::new()),
            memo_cap: 64,
        };
        if !curve.contains(&curve.generator) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(Arc::new(curve))
    }

    /// Convenience constructor from small integer coefficients.
    pub fn from_i64(
        label: &str,
        field: &NumberField,
        a: [i64; 5],
        gen: (i64, i64),
        rank_assertion: &str,
    ) -> Result<Curve> {
        Self::new(
            label,
            field,
            a.map(|c| field.from_int(c)),
            (field.from_int(gen.0), field.from_int(gen.1)),
            rank_assertion,
        )
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn rational_model(&self) -> Option<&RationalModel> {
        self.rational.as_ref()
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let [a1, a2, a3, a4, a6] = &self.a;
                let lhs = &(&(y * y) + &(&(a1 * x) * y)) + &(a3 * y);
                let x2 = x * x;
                let rhs = &(&(&(&x2 * x) + &(a2 * &x2)) + &(a4 * x)) + a6;
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let t = &(&self.a[0] * x) + &self.a[2];
                Point::Affine(x.clone(), &(-y) - &t)
            }
        }
    }

    pub fn add(&self, p1: &Point, p2: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (Point::Infinity, q) | (q, Point::Infinity) => return q.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, _] = &self.a;
        let k = &self.field;
        let lambda = if x1 == x2 {
            let den = &(&(&k.from_int(2) * y1) + &(a1 * x1)) + a3;
            if den.is_zero() || y1 != y2 {
                return Point::Infinity;
            }
            let num = &(&(&(&k.from_int(3) * &(x1 * x1)) + &(&k.from_int(2) * &(a2 * x1))) + a4)
                - &(a1 * y1);
            num.try_div(&den).expect("nonzero denominator")
        } else {
            (y2 - y1).try_div(&(x2 - x1)).expect("distinct x")
        };
        let nu = y1 - &(&lambda * x1);
        let x3 = &(&(&(&(&lambda * &lambda) + &(a1 * &lambda)) - a2) - x1) - x2;
        let y3 = &(&(-&(&(&lambda + a1) * &x3)) - &nu) - a3;
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, pt: &Point, n: i64) -> Point {
        let base0 = if n < 0 { self.neg(pt) } else { pt.clone() };
        let mut n = n.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut base = base0;
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

    /// nP for the configured generator; rational integral models use the
    /// division-polynomial ladder, everything else the group law.
    pub fn multiple(&self, n: i64) -> Point {
        if n == 0 {
            return Point::Infinity;
        }
        if let Some(p) = self.memo.read().unwrap().get(&n) {
            return p.clone();
        }
        let pt = match &self.rational {
            Some(model) => {
                let ((xn, xd), (yn, yd)) = model.xy_fractions(n);
                Point::Affine(
                    self.field.from_rational(&num_rational::BigRational::new_raw(xn, xd)),
                    self.field.from_rational(&num_rational::BigRational::new_raw(yn, yd)),
                )
            }
            None => self.mul(&self.generator, n),
        };
        if n.abs() <= self.memo_cap {
            self.memo.write().unwrap().insert(n, pt.clone());
        }
        pt
    }

    /// Ideal factorisation of the discriminant.
    pub fn disc_factorization(&self) -> Result<IdealFactorization> {
        factor_element(&self.disc)
    }

    pub fn reduce_at(&self, pr: &PrimeIdeal) -> Result<ReducedCurve> {
        let k = ResidueField::new(pr);
        let mut a: [Vec<u64>; 5] = Default::default();
        for (slot, c) in a.iter_mut().zip(&self.a) {
            *slot = k.reduce(c)?.expect("integral coefficient");
        }
        Ok(ReducedCurve::new(k, a))
    }

    /// Reduction of `pt` modulo P, with points of negative x-valuation
    /// reducing to the identity.
    pub fn reduce_point(&self, red: &ReducedCurve, pt: &Point) -> Result<RPoint> {
        match pt {
            Point::Infinity => Ok(RPoint::Infinity),
            Point::Affine(x, y) => {
                if !x.is_zero() && valuation(x, red.k.prime())? < 0 {
                    return Ok(RPoint::Infinity);
                }
                let rx = red.k.reduce(x)?.expect("x is P-integral");
                let ry = red.k.reduce(y)?.ok_or_else(|| {
                    Error::Unsupported("y has a pole where x does not".into())
                })?;
                Ok(RPoint::Affine(rx, ry))
            }
        }
    }

    /// Whether `pt` reduces to a non-singular point of the curve mod P.
    pub fn reduction_is_nonsingular(&self, pt: &Point, pr: &PrimeIdeal) -> Result<bool> {
        let red = self.reduce_at(pr)?;
        match self.reduce_point(&red, pt)? {
            RPoint::Infinity => Ok(true),
            RPoint::Affine(x, y) => Ok(!red.is_singular_point(&x, &y)),
        }
    }

    /// Primes P with v_P(disc) != 0, with the valuation.
    pub fn bad_primes(&self) -> Result<Vec<(PrimeIdeal, i64)>> {
        Ok(self.disc_factorization()?.factors.into_iter().collect())
    }

    pub fn coefficients_json(&self) -> Value {
        Value::Array(self.a.iter().map(|c| json!(c.to_string_coords())).collect())
    }
}

pub fn big(c: i64) -> BigInt {
    BigInt::from(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn e37() -> Curve {
        let k = NumberField::rationals();
        EllipticCurve::from_i64("37a", &k, [0, 0, 1, -1, 0], (0, 0), "rank 1").unwrap()
    }

    #[test]
    fn discriminant_of_37a() {
        assert_eq!(e37().disc.as_integer(), Some(big(37)));
        let k = NumberField::rationals();
        let e = EllipticCurve::from_i64("da", &k, [0, 0, 0, 8, 0], (1, 3), "rank 1").unwrap();
        assert_eq!(e.disc.as_integer(), Some(-(big(1) << 15usize)));
    }

    #[test]
    fn rejects_singular_and_off_curve() {
        let k = NumberField::rationals();
        assert_eq!(
            EllipticCurve::from_i64("s", &k, [0, 0, 0, 0, 0], (0, 0), "").unwrap_err(),
            Error::SingularCurve
        );
        assert_eq!(
            EllipticCurve::from_i64("s", &k, [0, 0, 1, -1, 0], (1, 1), "").unwrap_err(),
            Error::PointNotOnCurve
        );
    }

    #[test]
    fn small_multiples_by_group_law() {
        let e = e37();
        let k = e.field().clone();
        let expect = [(1, 0), (-1, -1), (2, -3)];
        for (n, (x, y)) in (2..=4).zip(expect) {
            assert_eq!(e.mul(&e.generator, n), Point::Affine(k.from_int(x), k.from_int(y)));
        }
        assert_eq!(
            e.mul(&e.generator, 5),
            Point::Affine(k.from_rational(&q(1, 4)), k.from_rational(&q(-5, 8)))
        );
        assert_eq!(e.mul(&e.generator, 0), Point::Infinity);
        assert_eq!(e.mul(&e.generator, -1), Point::Affine(k.zero(), k.from_int(-1)));
    }

    #[test]
    fn ladder_matches_group_law() {
        let e = e37();
        for n in -25..=25 {
            assert_eq!(e.multiple(n), e.mul(&e.generator, n), "n = {n}");
        }
        let k = NumberField::rationals();
        let e = EllipticCurve::from_i64("da", &k, [0, 0, 0, 8, 0], (1, 3), "rank 1").unwrap();
        for n in 1..=15 {
            assert_eq!(e.multiple(n), e.mul(&e.generator, n), "n = {n}");
        }
        // A long model with every coefficient nonzero.
        let e = EllipticCurve::from_i64("long", &k, [1, -1, 1, -2, 4], (-1, -2), "").unwrap();
        for n in -12..=12 {
            assert_eq!(e.multiple(n), e.mul(&e.generator, n), "n = {n}");
        }
    }
}
