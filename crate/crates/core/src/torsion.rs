//! Torsion subgroup order: a multiplicative bound from reductions at good
//! primes, then an exhaustive search for the points it allows, layer by
//! layer for each prime power.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::arith;
use crate::curve::{EllipticCurve, Point};
use crate::embed::float_roots;
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::ideals::{factor_prime, valuation};
use crate::poly::{approximate_roots, CPoly, Poly};

/// Polynomials over K, ascending, trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct KPoly {
    pub c: Vec<FieldElement>,
}

impl KPoly {
    pub fn new(mut c: Vec<FieldElement>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        KPoly { c }
    }

    pub fn constant(x: FieldElement) -> Self {
        KPoly::new(vec![x])
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn get(&self, i: usize, k: &NumberField) -> FieldElement {
        self.c.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn add(&self, o: &Self, k: &NumberField) -> Self {
        let n = self.c.len().max(o.c.len());
        KPoly::new((0..n).map(|i| &self.get(i, k) + &o.get(i, k)).collect())
    }

    pub fn sub(&self, o: &Self, k: &NumberField) -> Self {
        let n = self.c.len().max(o.c.len());
        KPoly::new((0..n).map(|i| &self.get(i, k) - &o.get(i, k)).collect())
    }

    pub fn mul(&self, o: &Self, k: &NumberField) -> Self {
        if self.is_zero() || o.is_zero() {
            return KPoly::new(Vec::new());
        }
        let mut out = vec![k.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        KPoly::new(out)
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        KPoly::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn derivative(&self, k: &NumberField) -> Self {
        KPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * &k.from_int(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self, k: &NumberField) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.c[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (KPoly::new(Vec::new()), self.clone());
        }
        let mut q = vec![k.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * dj);
            }
            q[i] = c;
        }
        r.truncate(dd);
        (KPoly::new(q), KPoly::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn gcd(&self, o: &Self, k: &NumberField) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b, k).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &FieldElement, k: &NumberField) -> FieldElement {
        self.c.iter().rev().fold(k.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn pow(&self, e: u32, k: &NumberField) -> Self {
        (0..e).fold(KPoly::constant(k.one()), |acc, _| acc.mul(self, k))
    }
}

/// Division polynomials in x: f_n with psi_n = f_n for odd n and
/// psi_n = psi_2 f_n for even n, plus F = psi_2^2.
pub struct DivisionPolys {
    k: NumberField,
    pub big_f: KPoly,
    f: Vec<KPoly>,
}

impl DivisionPolys {
    pub fn new(e: &EllipticCurve, up_to: usize) -> Self {
        let k = e.field().clone();
        let i = |c: i64| k.from_int(c);
        let (b2, b4, b6, b8) = (&e.b2, &e.b4, &e.b6, &e.b8);
        let big_f = KPoly::new(vec![b6.clone(), b4 * &i(2), b2.clone(), i(4)]);
        let f3 = KPoly::new(vec![b8.clone(), b6 * &i(3), b4 * &i(3), b2.clone(), i(3)]);
        let f4 = KPoly::new(vec![
            &(b4 * b8) - &(b6 * b6),
            &(b2 * b8) - &(b4 * b6),
            b8 * &i(10),
            b6 * &i(10),
            b4 * &i(5),
            b2.clone(),
            i(2),
        ]);
        let zero = KPoly::new(Vec::new());
        let one = KPoly::constant(i(1));
        let mut dp = DivisionPolys { k: k.clone(), big_f, f: vec![zero, one.clone(), one, f3, f4] };
        for n in 5..=up_to.max(4) {
            let m = n / 2;
            let f = |j: usize| &dp.f[j];
            let next = if n % 2 == 1 {
                let f2 = dp.big_f.mul(&dp.big_f, &k);
                let t1 = f(m + 2).mul(&f(m).pow(3, &k), &k);
                let t2 = f(m - 1).mul(&f(m + 1).pow(3, &k), &k);
                if m % 2 == 0 {
                    f2.mul(&t1, &k).sub(&t2, &k)
                } else {
                    t1.sub(&f2.mul(&t2, &k), &k)
                }
            } else {
                let a = f(m + 2).mul(&f(m - 1).pow(2, &k), &k);
                let b = f(m - 2).mul(&f(m + 1).pow(2, &k), &k);
                f(m).mul(&a.sub(&b, &k), &k)
            };
            dp.f.push(next);
        }
        dp
    }

    /// psi_n^2 as a polynomial in x.
    pub fn psi_sq(&self, n: usize) -> KPoly {
        let s = self.f[n].mul(&self.f[n], &self.k);
        if n.is_multiple_of(2) {
            s.mul(&self.big_f, &self.k)
        } else {
            s
        }
    }

    /// phi_n = x psi_n^2 - psi_{n+1} psi_{n-1}.
    pub fn phi(&self, n: usize) -> KPoly {
        let x = KPoly::new(vec![self.k.zero(), self.k.one()]);
        let nb = self.f[n + 1].mul(&self.f[n - 1], &self.k);
        let nb = if n % 2 == 1 { nb.mul(&self.big_f, &self.k) } else { nb };
        x.mul(&self.psi_sq(n), &self.k).sub(&nb, &self.k)
    }

    /// Polynomial whose roots are the x-coordinates of the nonzero points
    /// killed by l (l prime).
    pub fn kernel_poly(&self, l: usize) -> KPoly {
        if l == 2 {
            self.big_f.clone()
        } else {
            self.f[l].clone()
        }
    }
}

/// Numerical solve of the Vandermonde-type system giving power-basis
/// coordinates from embedding values (r real, then s complex).
#[allow(clippy::needless_range_loop)]
fn coords_from_embeddings(roots: &[Complex64], r: usize, vals: &[Complex64]) -> Option<Vec<f64>> {
    let n = r + 2 * (roots.len() - r) / 2;
    let s = (n - r) / 2;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for j in 0..r + s {
        let z = roots[j];
        let powers: Vec<Complex64> = (0..n).map(|k| z.powu(k as u32)).collect();
        rows.push(powers.iter().map(|p| p.re).collect());
        rhs.push(vals[j].re);
        if j >= r {
            rows.push(powers.iter().map(|p| p.im).collect());
            rhs.push(vals[j].im);
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap())?;
        if rows[piv][col].abs() < 1e-300 {
            return None;
        }
        rows.swap(col, piv);
        rhs.swap(col, piv);
        for r2 in 0..n {
            if r2 != col {
                let f = rows[r2][col] / rows[col][col];
                for k in col..n {
                    rows[r2][k] -= f * rows[col][k];
                }
                rhs[r2] -= f * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / rows[i][i]).collect())
}

/// Roots in K of a nonzero polynomial over K: numerical roots under each
/// embedding are combined, the coordinates recovered and rounded, and every
/// candidate is confirmed by exact evaluation.
pub fn roots_in_field(g: &KPoly, k: &NumberField) -> Vec<FieldElement> {
    let Some(deg) = g.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let sq = g.gcd(&g.derivative(k), k);
    let g = if sq.degree().unwrap_or(0) > 0 { g.div_rem(&sq, k).0.monic() } else { g.monic() };
    let deg = g.degree().unwrap();
    // d * alpha is integral for every root alpha, d clearing denominators.
    let mut d = BigInt::one();
    for c in &g.c {
        d = arith::lcm(&d, c.den());
    }
    let thetas = float_roots(k);
    let (r, s) = k.signature();
    let mut per_embedding: Vec<Vec<Complex64>> = Vec::with_capacity(r + s);
    for z in thetas.iter().take(r + s) {
        let cp: CPoly = Poly::new(g.c.iter().map(|c| c.eval_complex(*z)).collect());
        per_embedding.push(approximate_roots(&cp));
    }
    let mut found: Vec<FieldElement> = Vec::new();
    let total = deg.pow((r + s) as u32);
    let df = d.to_f64().unwrap_or(f64::INFINITY);
    for mut idx in 0..total {
        let vals: Vec<Complex64> = (0..r + s)
            .map(|j| {
                let v = per_embedding[j][idx % deg];
                idx /= deg;
                v
            })
            .collect();
        if (0..r).any(|j| vals[j].im.abs() > 1e-6 * (1.0 + vals[j].re.abs())) {
            continue;
        }
        let Some(c) = coords_from_embeddings(&thetas, r, &vals) else { continue };
        if c.iter().any(|x| !(x * df).is_finite() || (x * df).abs() > 1e15) {
            continue;
        }
        let coords: Vec<BigRational> = c
            .iter()
            .map(|x| BigRational::new(BigInt::from((x * df).round() as i64), d.clone()))
            .collect();
        let cand = k.from_coords(&coords);
        if g.eval(&cand, k).is_zero() && !found.contains(&cand) {
            found.push(cand);
        }
    }
    found
}

/// Points Q over K with x(Q) a root of `xpoly` (any y).
fn points_over_roots(e: &EllipticCurve, xpoly: &KPoly) -> Vec<Point> {
    let k = e.field();
    let [a1, a2, a3, a4, a6] = &e.a;
    let mut out = Vec::new();
    for x0 in roots_in_field(xpoly, k) {
        let b = &(a1 * &x0) + a3;
        let x2 = &x0 * &x0;
        let rhs = &(&(&(&x2 * &x0) + &(a2 * &x2)) + &(a4 * &x0)) + a6;
        let ypoly = KPoly::new(vec![-&rhs, b, k.one()]);
        for y0 in roots_in_field(&ypoly, k) {
            let pt = Point::Affine(x0.clone(), y0);
            if e.contains(&pt) {
                out.push(pt);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub order: u64,
    pub bound: u64,
    pub reductions: Vec<(u64, u64, u64)>,
    pub points: Vec<Point>,
}

/// #E~(F_P) at good primes above odd p <= cap (at most `max_primes` of them).
pub fn reduction_counts(e: &EllipticCurve, cap: u64, max_primes: usize) -> Result<Vec<(u64, u64, u64)>> {
    let k = e.field();
    let mut out = Vec::new();
    for p in arith::primes_up_to(cap) {
        if p == 2 || out.len() >= max_primes {
            continue;
        }
        let Ok(primes) = factor_prime(k, p) else { continue };
        for pr in primes {
            if out.len() >= max_primes {
                break;
            }
            if (pr.e as u64) >= p - 1 || valuation(&e.disc, &pr)? != 0 {
                continue;
            }
            if pr.norm() > BigInt::from(200_000) {
                continue;
            }
            let red = e.reduce_at(&pr)?;
            out.push((p, pr.f as u64, red.count_points()));
        }
    }
    Ok(out)
}

pub fn torsion(e: &EllipticCurve, cap: u64) -> Result<TorsionReport> {
    if cap < 16 {
        return Err(Error::CapTooSmall(format!("torsion cap {cap} < 16")));
    }
    let counts = reduction_counts(e, cap, 8)?;
    if counts.len() < 3 {
        return Err(Error::InsufficientGoodPrimes);
    }
    let bound = counts.iter().fold(0u64, |g, &(_, _, c)| num_integer::gcd(g, c));
    let mut order = 1u64;
    let mut points = vec![Point::Infinity];
    for (l, kexp) in arith::factor(&BigInt::from(bound)) {
        let l = l.to_u64().unwrap() as usize;
        let dp = DivisionPolys::new(e, l + 1);
        let mut layer = vec![Point::Infinity];
        for _ in 0..kexp {
            let mut next = layer.clone();
            for r in &layer {
                let preimages = match r {
                    Point::Infinity => points_over_roots(e, &dp.kernel_poly(l)),
                    Point::Affine(xr, _) => {
                        let poly = dp.phi(l).sub(&dp.psi_sq(l).scale(xr), e.field());
                        points_over_roots(e, &poly)
                    }
                };
                for q in preimages {
                    if e.mul(&q, l as i64) == *r && !next.contains(&q) {
                        next.push(q);
                    }
                }
            }
            if next.len() == layer.len() {
                break;
            }
            layer = next;
        }
        order *= layer.len() as u64;
        let mut combined = Vec::new();
        for a in &points {
            for b in &layer {
                combined.push(e.add(a, b));
            }
        }
        points = combined;
    }
    for pt in &points {
        if !e.mul(pt, order as i64).is_infinity() {
            return Err(Error::LemmaViolation(format!("torsion point {pt} not killed by {order}")));
        }
    }
    Ok(TorsionReport { order, bound, reductions: counts, points })
}

pub fn torsion_order(e: &EllipticCurve, cap: u64) -> Result<u64> {
    Ok(torsion(e, cap)?.order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_orders_over_q() {
        let q = NumberField::rationals();
        let e = EllipticCurve::from_i64("37a", &q, [0, 0, 1, -1, 0], (0, 0), "").unwrap();
        let t = torsion(&e, 50).unwrap();
        assert_eq!(t.order, 1);
        let e = EllipticCurve::from_i64("da", &q, [0, 0, 0, 8, 0], (1, 3), "").unwrap();
        assert_eq!(torsion_order(&e, 50).unwrap(), 2);
        let e = EllipticCurve::from_i64("cm", &q, [0, 0, 0, -1, 0], (0, 0), "").unwrap();
        assert_eq!(torsion_order(&e, 50).unwrap(), 4);
        let e = EllipticCurve::from_i64("t7", &q, [1, -1, 1, -3, 3], (1, 0), "").unwrap();
        assert_eq!(torsion_order(&e, 50).unwrap(), 7);
    }

    #[test]
    fn torsion_over_gaussian_field() {
        let k = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
        let e = EllipticCurve::from_i64("cm", &k, [0, 0, 0, -1, 0], (0, 0), "").unwrap();
        // Over Q(i), y^2 = x^3 - x gains (i, 1 - i)-type points of order 4.
        let t = torsion_order(&e, 50).unwrap();
        assert_eq!(t % 4, 0);
        let e = EllipticCurve::from_i64("37a", &k, [0, 0, 1, -1, 0], (0, 0), "").unwrap();
        assert_eq!(torsion_order(&e, 50).unwrap(), 1);
    }

    #[test]
    fn division_polynomial_roots_are_torsion() {
        let q = NumberField::rationals();
        let e = EllipticCurve::from_i64("t7", &q, [1, -1, 1, -3, 3], (1, 0), "").unwrap();
        let dp = DivisionPolys::new(&e, 8);
        let x = q.from_int(1);
        assert!(dp.kernel_poly(7).eval(&x, &q).is_zero());
    }
}
