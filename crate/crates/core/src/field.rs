//! Number fields K = Q[t]/(f) with an asserted power integral basis, and
//! exact elements stored as an integer coordinate vector over a common
//! positive denominator.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, gcd};
use crate::error::{Error, Result};
use crate::modp;
use crate::poly::{approximate_roots, sturm_real_root_count, to_qpoly, CPoly, Poly, ZPoly};

#[derive(Debug)]
struct FieldData {
    label: String,
    /// Ascending coefficients of the monic minimal polynomial, length n + 1.
    f: Vec<BigInt>,
    h: u64,
    r: usize,
    s: usize,
    disc: BigInt,
}

#[derive(Clone, Debug)]
pub struct NumberField(Arc<FieldData>);

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.f == other.0.f
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Validates `f` (monic, irreducible, degree at most 8), computes the
    /// signature and discriminant, and checks that Z[t] is maximal at every
    /// prime whose square divides the discriminant.
    pub fn new(min_poly: Vec<BigInt>, class_number: u64) -> Result<Self> {
        Self::with_label("", min_poly, class_number)
    }

    pub fn with_label(label: &str, mut min_poly: Vec<BigInt>, class_number: u64) -> Result<Self> {
        while min_poly.last().is_some_and(|c| c.is_zero()) {
            min_poly.pop();
        }
        if min_poly.len() <= 1 {
            return Err(Error::DegreeZero);
        }
        if !min_poly.last().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        if class_number == 0 {
            return Err(Error::BadClassNumber);
        }
        let n = min_poly.len() - 1;
        if n > 8 {
            return Err(Error::Unsupported(format!("degree {n} > 8")));
        }
        check_irreducible(&min_poly)?;
        let r = sturm_real_root_count(&to_qpoly(&Poly::new(min_poly.clone())));
        let mut data = FieldData {
            label: label.to_string(),
            f: min_poly,
            h: class_number,
            r,
            s: (n - r) / 2,
            disc: BigInt::zero(),
        };
        let provisional = NumberField(Arc::new(FieldData {
            label: String::new(),
            f: data.f.clone(),
            h: 1,
            r,
            s: data.s,
            disc: BigInt::zero(),
        }));
        data.disc = provisional.compute_disc();
        for (p, e) in arith::factor(&data.disc) {
            if e < 2 {
                continue;
            }
            let pu = p
                .to_u64()
                .filter(|&x| x < 1 << 62)
                .ok_or_else(|| Error::Unsupported(format!("discriminant prime {p}")))?;
            if !dedekind_maximal(&data.f, pu) {
                return Err(Error::DedekindFailure(p.to_string()));
            }
        }
        Ok(NumberField(Arc::new(data)))
    }

    pub fn from_i64(label: &str, min_poly: &[i64], class_number: u64) -> Result<Self> {
        Self::with_label(label, min_poly.iter().map(|&c| BigInt::from(c)).collect(), class_number)
    }

    /// The field Q, presented as Q[t]/(t).
    pub fn rationals() -> Self {
        Self::from_i64("Q", &[0, 1], 1).expect("Q is a field")
    }

    /// Same field with a different asserted class number.
    pub fn with_class_number(&self, h: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::BadClassNumber);
        }
        Ok(NumberField(Arc::new(FieldData {
            label: self.0.label.clone(),
            f: self.0.f.clone(),
            h,
            r: self.0.r,
            s: self.0.s,
            disc: self.0.disc.clone(),
        })))
    }

    fn compute_disc(&self) -> BigInt {
        let n = self.degree();
        let df: Vec<BigInt> = (1..=n).map(|k| &self.0.f[k] * k).collect();
        let nm = self.from_int_coords(df).norm();
        let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        nm.numer() * sign
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn degree(&self) -> usize {
        self.0.f.len() - 1
    }

    pub fn class_number(&self) -> u64 {
        self.0.h
    }

    /// (r, s): real embeddings and pairs of complex embeddings.
    pub fn signature(&self) -> (usize, usize) {
        (self.0.r, self.0.s)
    }

    pub fn unit_rank(&self) -> usize {
        self.0.r + self.0.s - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.0.f
    }

    pub fn min_zpoly(&self) -> ZPoly {
        Poly::new(self.0.f.clone())
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.0.disc
    }

    pub fn is_imaginary_quadratic(&self) -> bool {
        self.degree() == 2 && self.0.r == 0
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The generator t (for degree 1 this is the rational -f(0)).
    pub fn theta(&self) -> FieldElement {
        if self.degree() == 1 {
            return self.from_bigint(-self.0.f[0].clone());
        }
        let mut v = vec![BigInt::zero(); self.degree()];
        v[1] = BigInt::one();
        self.from_int_coords(v)
    }

    pub fn from_int(&self, c: i64) -> FieldElement {
        self.from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(&self, c: BigInt) -> FieldElement {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = c;
        FieldElement { field: self.clone(), num: v, den: BigInt::one() }
    }

    pub fn from_rational(&self, q: &BigRational) -> FieldElement {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = q.numer().clone();
        // A BigRational is already in lowest terms with a positive denominator.
        FieldElement::from_coprime(self.clone(), v, q.denom().clone())
    }

    /// Integer coordinates, padded or reduced modulo f as needed.
    pub fn from_int_coords(&self, coords: Vec<BigInt>) -> FieldElement {
        FieldElement::from_parts(self.clone(), coords, BigInt::one())
    }

    pub fn from_i64_coords(&self, coords: &[i64]) -> FieldElement {
        self.from_int_coords(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_coords(&self, coords: &[BigRational]) -> FieldElement {
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| arith::lcm(&acc, c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        FieldElement::from_parts(self.clone(), num, den)
    }

    /// Reduce a polynomial in t of arbitrary length modulo f.
    fn reduce(&self, mut t: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.degree();
        let f = &self.0.f;
        if n == 1 {
            // t = -f0, so a polynomial evaluates at -f0.
            let root = -f[0].clone();
            let v = t.iter().rev().fold(BigInt::zero(), |acc, c| acc * &root + c);
            return vec![v];
        }
        for k in (n..t.len()).rev() {
            let c = std::mem::take(&mut t[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                if !f[j].is_zero() {
                    t[k - n + j] -= &c * &f[j];
                }
            }
        }
        t.resize(n, BigInt::zero());
        t
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[t]/({})", Poly::new(self.0.f.clone()))
    }
}

/// An element of K: `num[0] + num[1] t + ... ` over `den > 0`, with the
/// content of `num` coprime to `den`.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: NumberField,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl FieldElement {
    pub fn from_parts(field: NumberField, num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let num = field.reduce(num);
        let mut e = FieldElement { field, num, den };
        e.normalize();
        e
    }

    /// Skips the gcd: the caller guarantees content(num) and den are coprime.
    pub fn from_coprime(field: NumberField, num: Vec<BigInt>, den: BigInt) -> Self {
        debug_assert!(den.is_positive());
        let num = field.reduce(num);
        FieldElement { field, num, den }
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        if self.den.is_one() {
            return;
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = gcd(&g, c);
            }
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn num(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| arith::ratio(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// Integral iff every power-basis coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(|c| c.is_zero())
            // The content is |num[0]|, which normalisation made coprime to den.
            .then(|| BigRational::new_raw(self.num[0].clone(), self.den.clone()))
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        (self.den.is_one() && self.num[1..].iter().all(|c| c.is_zero())).then(|| self.num[0].clone())
    }

    pub fn is_rational_integer(&self) -> bool {
        self.as_integer().is_some()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let (a, b) = (&self.den, &other.den);
        if a == b {
            let num = self.num.iter().zip(&other.num).map(|(x, y)| x + y).collect();
            return Ok(FieldElement::from_parts(self.field.clone(), num, a.clone()));
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(x, y)| x * b + y * a)
            .collect();
        Ok(FieldElement::from_parts(self.field.clone(), num, a * b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let n = self.field.degree();
        let num = if n == 1 {
            vec![&self.num[0] * &other.num[0]]
        } else if let Some(q) = other.as_integer() {
            self.num.iter().map(|c| c * &q).collect()
        } else if let Some(q) = self.as_integer() {
            other.num.iter().map(|c| c * &q).collect()
        } else {
            let mut t = vec![BigInt::zero(); 2 * n - 1];
            for (i, x) in self.num.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in other.num.iter().enumerate() {
                    if !y.is_zero() {
                        t[i + j] += x * y;
                    }
                }
            }
            t
        };
        Ok(FieldElement::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        FieldElement::from_parts(self.field.clone(), self.num.iter().map(|c| c * k).collect(), self.den.clone())
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        FieldElement::from_parts(self.field.clone(), self.num.clone(), &self.den * k)
    }

    /// Columns are the coordinates of `num * t^j`.
    fn mult_matrix(&self) -> Vec<Vec<BigInt>> {
        let n = self.field.degree();
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.num.clone();
        for _ in 0..n {
            cols.push(cur.clone());
            let mut shifted = vec![BigInt::zero()];
            shifted.extend(cur);
            cur = self.field.reduce(shifted);
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    #[allow(clippy::needless_range_loop)]
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.from_rational(&q.recip()));
        }
        // Solve (num * y) = den over Q by Gaussian elimination.
        let n = self.field.degree();
        let m = self.mult_matrix();
        let mut a: Vec<Vec<BigRational>> = m
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r: Vec<BigRational> = row.into_iter().map(BigRational::from_integer).collect();
                r.push(if i == 0 {
                    BigRational::from_integer(self.den.clone())
                } else {
                    BigRational::zero()
                });
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap(col, piv);
            let pv = a[col][col].clone();
            for k in col..=n {
                a[col][k] = &a[col][k] / &pv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let fct = a[r][col].clone();
                    for k in col..=n {
                        let t = &fct * &a[col][k];
                        a[r][k] -= t;
                    }
                }
            }
        }
        let coords: Vec<BigRational> = a.into_iter().map(|row| row[n].clone()).collect();
        Ok(self.field.from_coords(&coords))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Determinant of multiplication by the integer numerator, an integer.
    pub fn numerator_norm(&self) -> BigInt {
        let n = self.field.degree();
        if let Some(q) = self.num[1..].iter().all(|c| c.is_zero()).then(|| &self.num[0]) {
            return q.pow(n as u32);
        }
        if n == 2 {
            let f = &self.field.0.f;
            let (a, b) = (&self.num[0], &self.num[1]);
            return a * a - &f[1] * a * b + &f[0] * b * b;
        }
        bareiss_det(self.mult_matrix())
    }

    /// N^K_Q(x).
    pub fn norm(&self) -> BigRational {
        let n = self.field.degree() as u32;
        arith::ratio(self.numerator_norm(), self.den.pow(n))
    }

    /// Trace of multiplication by x.
    pub fn trace(&self) -> BigRational {
        let m = self.mult_matrix();
        let t = (0..m.len()).fold(BigInt::zero(), |acc, i| acc + &m[i][i]);
        arith::ratio(t, self.den.clone())
    }

    /// Whether `self` divides `b` in O_K.
    pub fn divides(&self, b: &Self) -> Result<bool> {
        self.same_field(b)?;
        if !self.is_integral() || !b.is_integral() {
            return Err(Error::NotIntegral);
        }
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if b.is_zero() {
            return Ok(true);
        }
        if let Some(a) = self.as_integer() {
            return Ok(b.num.iter().all(|c| c.is_multiple_of(&a)));
        }
        Ok(b.try_div(self)?.is_integral())
    }

    /// Value at a complex approximation of a root of f.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let d = self.den.to_f64().unwrap_or(f64::INFINITY);
        let v = self
            .num
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN));
        v / d
    }

    pub fn to_string_coords(&self) -> Vec<String> {
        self.coords().iter().map(|c| c.to_string()).collect()
    }
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

macro_rules! binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl std::ops::$tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$call(rhs).expect("field mismatch")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = arith::ratio(c.clone(), self.den.clone());
            parts.push(match i {
                0 => format!("{q}"),
                1 => format!("{q}*t"),
                _ => format!("{q}*t^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Elementwise field operation by name, for the command-line driver.
pub fn elem_op(op: &str, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
    match op {
        "add" => x.try_add(y),
        "sub" => x.try_sub(y),
        "mul" => x.try_mul(y),
        "div" => x.try_div(y),
        other => Err(Error::Unknown(other.to_string())),
    }
}

/// Dedekind's criterion: is Z[t] maximal at p?
pub fn dedekind_maximal(f: &[BigInt], p: u64) -> bool {
    let fp = modp::from_ints(f, p);
    let facs = modp::factor(&fp, p);
    if facs.iter().all(|(_, e)| *e == 1) {
        return true;
    }
    let mut g: modp::FpPoly = vec![1];
    let mut h: modp::FpPoly = vec![1];
    for (gi, e) in &facs {
        g = modp::mul(&g, gi, p);
        for _ in 1..*e {
            h = modp::mul(&h, gi, p);
        }
    }
    let lift = |a: &modp::FpPoly| -> ZPoly { Poly::new(a.iter().map(|&c| BigInt::from(c)).collect()) };
    let gh = lift(&g).mul(&lift(&h));
    let diff = gh.sub(&Poly::new(f.to_vec()));
    let pb = BigInt::from(p);
    let big_f: Vec<BigInt> = diff.coeffs().iter().map(|c| c / &pb).collect();
    let fbar = modp::from_ints(&big_f, p);
    let common = modp::gcd(&g, &h, p);
    let d = if fbar.is_empty() { common } else { modp::gcd(&fbar, &common, p) };
    modp::degree(&d).unwrap_or(0) == 0
}

fn subset_sums(degrees: &[usize], n: usize) -> Vec<bool> {
    let mut can = vec![false; n + 1];
    can[0] = true;
    for &d in degrees {
        for s in (d..=n).rev() {
            if can[s - d] {
                can[s] = true;
            }
        }
    }
    can
}

/// Irreducibility over Q for monic integer f of degree at most 8: rational
/// roots, then a mod-p degree sieve, then a search over subsets of numerical
/// roots for the degrees that survive, each candidate confirmed by exact
/// division.
pub fn check_irreducible(f: &[BigInt]) -> Result<()> {
    let n = f.len() - 1;
    if n == 1 {
        return Ok(());
    }
    let zf: ZPoly = Poly::new(f.to_vec());
    if f[0].is_zero() {
        return Err(Error::Reducible("t divides f".into()));
    }
    for d in arith::divisors(&f[0]) {
        for c in [d.clone(), -d] {
            if zf.eval(&c).is_zero() {
                return Err(Error::Reducible(format!("rational root {c}")));
            }
        }
    }
    let mut possible = vec![true; n + 1];
    let mut used = 0;
    for p in arith::primes_up_to(2000) {
        if used >= 40 || (1..n).all(|d| !possible[d]) {
            break;
        }
        let fp = modp::from_ints(f, p);
        if modp::degree(&fp) != Some(n) {
            continue;
        }
        let g = modp::gcd(&fp, &modp::derivative(&fp, p), p);
        if modp::degree(&g).unwrap_or(0) > 0 {
            continue;
        }
        used += 1;
        let degs: Vec<usize> = modp::factor(&fp, p)
            .iter()
            .map(|(g, _)| modp::degree(g).unwrap())
            .collect();
        let can = subset_sums(&degs, n);
        for d in 0..=n {
            possible[d] &= can[d];
        }
    }
    let remaining: Vec<usize> = (2..=n / 2).filter(|&d| possible[d]).collect();
    if remaining.is_empty() {
        return Ok(());
    }
    let cp: CPoly = Poly::new(
        f.iter()
            .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect(),
    );
    let roots = approximate_roots(&cp);
    for d in remaining {
        for subset in combinations(n, d) {
            let mut prod: CPoly = Poly::one();
            for &i in &subset {
                prod = prod.mul(&Poly::new(vec![-roots[i], Complex64::one()]));
            }
            let Some(cand) = prod
                .coeffs()
                .iter()
                .map(|c| {
                    (c.im.abs() < 1e-6 * (1.0 + c.re.abs()) && c.re.abs() < 1e15)
                        .then(|| BigInt::from(c.re.round() as i64))
                })
                .collect::<Option<Vec<BigInt>>>()
            else {
                continue;
            };
            let g: ZPoly = Poly::new(cand);
            if zf.div_rem(&g).1.is_zero() {
                return Err(Error::Reducible(format!("factor {g}")));
            }
        }
    }
    Ok(())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Content-free helper: lcm of a list of positive integers.
pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> NumberField {
        NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap()
    }

    fn sqrt_m5() -> NumberField {
        NumberField::from_i64("sqrtm5", &[5, 0, 1], 2).unwrap()
    }

    fn cbrt2() -> NumberField {
        NumberField::from_i64("cbrt2", &[-2, 0, 0, 1], 1).unwrap()
    }

    #[test]
    fn signatures_and_discriminants() {
        assert_eq!(gauss().signature(), (0, 1));
        assert_eq!(sqrt_m5().signature(), (0, 1));
        assert_eq!(cbrt2().signature(), (1, 1));
        assert_eq!(gauss().discriminant(), &BigInt::from(-4));
        assert_eq!(sqrt_m5().discriminant(), &BigInt::from(-20));
        assert_eq!(cbrt2().discriminant(), &BigInt::from(-108));
        let q4 = NumberField::from_i64("q4", &[-2, 0, 0, 0, 1], 1).unwrap();
        assert_eq!(q4.signature(), (2, 1));
        assert_eq!(q4.discriminant(), &BigInt::from(-2048));
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert_eq!(NumberField::from_i64("", &[1, 0, 2], 1).unwrap_err(), Error::NotMonic);
        assert_eq!(NumberField::from_i64("", &[3], 1).unwrap_err(), Error::DegreeZero);
        assert!(matches!(NumberField::from_i64("", &[-1, 0, 1], 1), Err(Error::Reducible(_))));
        // (t^2 + 1)(t^2 + 2): no rational roots, split only by the factor search.
        assert!(matches!(NumberField::from_i64("", &[2, 0, 3, 0, 1], 1), Err(Error::Reducible(_))));
        // Z[sqrt(-3)] is not maximal at 2.
        assert!(matches!(NumberField::from_i64("", &[3, 0, 1], 1), Err(Error::DedekindFailure(_))));
    }

    #[test]
    fn elementary_arithmetic() {
        let k = gauss();
        let a = k.from_i64_coords(&[1, 1]);
        let b = k.from_i64_coords(&[1, -1]);
        assert_eq!(&a * &b, k.from_int(2));
        let k5 = sqrt_m5();
        let x = k5.from_i64_coords(&[1, 1]).div_int(&BigInt::from(2));
        assert_eq!(x.coords(), vec![BigRational::new(1.into(), 2.into()); 2]);
        let c = cbrt2();
        let t = c.theta();
        assert_eq!(&(&t * &t) * &t, c.from_int(2));
        let inv = a.inv().unwrap();
        assert_eq!(&inv * &a, k.one());
        let ti = t.inv().unwrap();
        assert_eq!(&ti * &t, c.one());
    }

    #[test]
    fn norms() {
        let k = gauss();
        assert_eq!(k.from_i64_coords(&[1, 1]).norm(), BigRational::from_integer(2.into()));
        assert_eq!(k.from_int(32).norm(), BigRational::from_integer(1024.into()));
        let k5 = sqrt_m5();
        assert_eq!(k5.from_i64_coords(&[2, -1]).norm(), BigRational::from_integer(9.into()));
        let c = cbrt2();
        let x = c.from_i64_coords(&[1, 1, 1]);
        // N(1 + a + a^2) = (a^3 - 1)/(a - 1) norms: N(a^3-1)/N(a-1) = 1/1.
        assert_eq!(x.norm(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn divisibility() {
        let k = gauss();
        assert!(k.from_i64_coords(&[1, 1]).divides(&k.from_int(2)).unwrap());
        let q = NumberField::rationals();
        assert!(!q.from_int(3).divides(&q.from_int(2)).unwrap());
        let k5 = sqrt_m5();
        assert!(!k5.from_int(2).divides(&k5.from_i64_coords(&[1, 1])).unwrap());
        assert_eq!(k.zero().divides(&k.one()), Err(Error::ZeroDivisor));
    }

    #[test]
    fn rational_integer_predicate() {
        let k5 = sqrt_m5();
        assert!(k5.from_int(7).is_rational_integer());
        assert!(!gauss().theta().is_rational_integer());
        assert!(!k5.from_i64_coords(&[1, 1]).div_int(&BigInt::from(2)).is_rational_integer());
    }
}
