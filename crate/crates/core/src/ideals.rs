//! Prime ideals via Dedekind's criterion, element factorisation, principal
//! generators, class-number verification, and weak numerators/denominators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{dedekind_maximal, FieldElement, NumberField};
use crate::modp;
use crate::poly::Poly;

/// P = (p, g(t)) with g a monic lift of an irreducible factor of f mod p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub g: Vec<BigInt>,
    pub e: u32,
    pub f: u32,
    /// Integral coordinates of beta with v_P(beta / p) = -1 and beta / p
    /// integral at every other prime above p.
    beta: Vec<BigInt>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.f)
    }

    pub fn beta_coords(&self) -> &[BigInt] {
        &self.beta
    }

    pub fn gen_poly(&self) -> String {
        Poly::new(self.g.clone()).to_string()
    }

    pub fn to_json(&self) -> Value {
        json!({"p": self.p.to_string(), "gen_poly": self.gen_poly(), "e": self.e, "f": self.f})
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.gen_poly())
    }
}

/// Primes above p, sorted by (f, g).
pub fn factor_prime(field: &NumberField, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !arith::is_prime_u64(p) {
        return Err(Error::Unsupported(format!("{p} is not prime")));
    }
    if !dedekind_maximal(field.min_poly(), p) {
        return Err(Error::DedekindFailure(p.to_string()));
    }
    let facs = modp::factor(&modp::from_ints(field.min_poly(), p), p);
    let mut out = Vec::with_capacity(facs.len());
    for (i, (gi, ei)) in facs.iter().enumerate() {
        let mut h: modp::FpPoly = vec![1];
        for (j, (gj, ej)) in facs.iter().enumerate() {
            let k = if i == j { ej - 1 } else { *ej };
            for _ in 0..k {
                h = modp::mul(&h, gj, p);
            }
        }
        let beta = field
            .from_int_coords(h.iter().map(|&c| BigInt::from(c)).collect())
            .num()
            .to_vec();
        out.push(PrimeIdeal {
            p,
            g: gi.iter().map(|&c| BigInt::from(c)).collect(),
            e: *ei,
            f: modp::degree(gi).unwrap() as u32,
            beta,
        });
    }
    Ok(out)
}

fn prime_u64(p: &BigInt) -> Result<u64> {
    p.to_u64()
        .filter(|&x| x < 1 << 62)
        .ok_or_else(|| Error::Unsupported(format!("prime {p} exceeds 62 bits")))
}

fn integral_valuation(field: &NumberField, a: &[BigInt], pr: &PrimeIdeal) -> u64 {
    let elem = field.from_int_coords(a.to_vec());
    if let Some(m) = elem.as_integer() {
        return pr.e as u64 * arith::valuation(&m, pr.p);
    }
    let pb = BigInt::from(pr.p);
    let beta = field.from_int_coords(pr.beta.clone());
    let mut cur = elem;
    let mut v = 0;
    loop {
        let t = &cur * &beta;
        if !t.num().iter().all(|c| c.is_multiple_of(&pb)) {
            return v;
        }
        cur = t.div_int(&pb);
        v += 1;
    }
}

/// v_P(x) for nonzero x.
pub fn valuation(x: &FieldElement, pr: &PrimeIdeal) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let vn = integral_valuation(x.field(), x.num(), pr) as i64;
    let vd = pr.e as i64 * arith::valuation(x.den(), pr.p) as i64;
    Ok(vn - vd)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdealFactorization {
    pub factors: BTreeMap<PrimeIdeal, i64>,
}

impl IdealFactorization {
    pub fn is_integral(&self) -> bool {
        self.factors.values().all(|&e| e >= 0)
    }

    pub fn norm(&self) -> BigRational {
        self.factors.iter().fold(BigRational::one(), |acc, (pr, &e)| {
            let n = BigRational::from_integer(pr.norm());
            if e >= 0 {
                acc * num_traits::pow(n, e as usize)
            } else {
                acc / num_traits::pow(n, (-e) as usize)
            }
        })
    }

    pub fn pow(&self, k: i64) -> Self {
        IdealFactorization {
            factors: self
                .factors
                .iter()
                .filter(|_| k != 0)
                .map(|(p, &e)| (p.clone(), e * k))
                .collect(),
        }
    }

    pub fn shares_prime_with(&self, other: &Self) -> bool {
        self.factors.keys().any(|p| other.factors.contains_key(p))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.factors
                .iter()
                .map(|(p, &k)| {
                    let mut v = p.to_json();
                    v["exponent"] = json!(k);
                    v
                })
                .collect(),
        )
    }
}

/// Factorisation of the principal fractional ideal (x).
pub fn factor_element(x: &FieldElement) -> Result<IdealFactorization> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = x.field();
    let numer = field.from_int_coords(x.num().to_vec());
    let mut primes: Vec<BigInt> = arith::factor(&numer.numerator_norm().abs())
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    primes.extend(arith::factor(x.den()).into_iter().map(|(p, _)| p));
    primes.sort();
    primes.dedup();
    let mut out = IdealFactorization::default();
    for p in primes {
        let pu = prime_u64(&p)?;
        for pr in factor_prime(field, pu)? {
            let v = valuation(x, &pr)?;
            if v != 0 {
                out.factors.insert(pr, v);
            }
        }
    }
    Ok(out)
}

/// Whether (a, b) = O_K, read off the factorisations.
pub fn coprime(a: &FieldElement, b: &FieldElement) -> Result<bool> {
    Ok(!factor_element(a)?.shares_prime_with(&factor_element(b)?))
}

/// Vectors in [-r, r]^n with max |c| = r and first nonzero coordinate positive.
fn shell(n: usize, r: i64) -> Vec<Vec<i64>> {
    if r == 0 {
        return vec![vec![0; n]];
    }
    let side = (2 * r + 1) as usize;
    let total = side.pow(n as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut t = idx;
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push((t % side) as i64 - r);
            t /= side;
        }
        if v.iter().all(|c| c.abs() < r) {
            continue;
        }
        if v.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
            continue;
        }
        out.push(v);
    }
    out
}

fn shell_key(v: &[i64]) -> (Vec<i64>, Vec<i64>) {
    (v.iter().rev().map(|c| c.abs()).collect(), v.to_vec())
}

/// Coordinate bound beyond which an imaginary quadratic field has no element
/// of norm `norm`.
fn imag_quadratic_box(field: &NumberField, norm: &BigInt) -> BigInt {
    let f = field.min_poly();
    let (a0, a1) = (&f[0], &f[1]);
    let dprime = a0 * 4 - a1 * a1;
    // |b| <= sqrt(4N / D'), |a| <= sqrt(N) + |a1| |b| / 2.
    let q: BigInt = norm * 4 / &dprime;
    let bmax: BigInt = q.sqrt() + 1;
    let amax = norm.sqrt() + 1 + (a1.abs() * &bmax) / 2 + 1;
    bmax.max(amax)
}

/// A generator of the integral ideal `ideal`, searched shell by shell in the
/// box of power-basis coordinates bounded by `cap`. `Ok(None)` is returned
/// only when the box provably contains every candidate (degree 1 or
/// imaginary quadratic); otherwise an unsuccessful search is `CapTooSmall`.
pub fn is_principal(
    field: &NumberField,
    ideal: &IdealFactorization,
    cap: u64,
) -> Result<Option<FieldElement>> {
    if !ideal.is_integral() {
        return Err(Error::Unsupported("ideal has negative exponents".into()));
    }
    let norm = ideal.norm().to_integer();
    if field.degree() == 1 {
        return Ok(Some(field.from_bigint(norm)));
    }
    let n = field.degree();
    for r in 0..=cap as i64 {
        let mut found: Vec<Vec<i64>> = Vec::new();
        for v in shell(n, r) {
            let g = field.from_i64_coords(&v);
            if g.is_zero() || g.numerator_norm().abs() != norm {
                continue;
            }
            let mut ok = true;
            for (pr, &e) in &ideal.factors {
                if valuation(&g, pr)? < e {
                    ok = false;
                    break;
                }
            }
            if ok {
                found.push(v);
            }
        }
        if let Some(best) = found.into_iter().min_by_key(|v| shell_key(v)) {
            return Ok(Some(field.from_i64_coords(&best)));
        }
    }
    if field.is_imaginary_quadratic() && BigInt::from(cap) >= imag_quadratic_box(field, &norm) {
        return Ok(None);
    }
    Err(Error::CapTooSmall(format!(
        "no generator of norm {norm} with coordinates up to {cap}"
    )))
}

pub fn minkowski_bound(field: &NumberField) -> f64 {
    let n = field.degree();
    let (_, s) = field.signature();
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let disc = field.discriminant().abs().to_f64().unwrap_or(f64::INFINITY);
    (4.0 / std::f64::consts::PI).powi(s as i32) * fact / (n as f64).powi(n as i32) * disc.sqrt()
}

/// Prime ideals of norm at most `bound`.
pub fn primes_of_norm_up_to(field: &NumberField, bound: f64) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for p in arith::primes_up_to(bound.floor().max(0.0) as u64) {
        for pr in factor_prime(field, p)? {
            if pr.norm().to_f64().unwrap() <= bound + 1e-9 {
                out.push(pr);
            }
        }
    }
    Ok(out)
}

/// Checks the asserted class number: P^h principal for every P below the
/// Minkowski bound, and for each prime q | h some such P with P^(h/q) not
/// principal.
pub fn verify_class_number(field: &NumberField, cap: u64) -> Result<bool> {
    let h = field.class_number();
    let primes = primes_of_norm_up_to(field, minkowski_bound(field))?;
    let single = |pr: &PrimeIdeal, k: u64| IdealFactorization {
        factors: BTreeMap::from([(pr.clone(), k as i64)]),
    };
    for pr in &primes {
        if is_principal(field, &single(pr, h), cap)?.is_none() {
            return Ok(false);
        }
    }
    for (q, _) in arith::factor(&BigInt::from(h)) {
        let k = h / q.to_u64().unwrap();
        let mut witnessed = false;
        for pr in &primes {
            if is_principal(field, &single(pr, k), cap)?.is_none() {
                witnessed = true;
                break;
            }
        }
        if !witnessed {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Weak numerator and denominator: integral, coprime, wn / wd = x^h exactly.
/// The denominator is the normalised generator of J^h, J the denominator
/// ideal of x; rational inputs use their reduced fraction directly.
pub fn weak_num_denom(x: &FieldElement, cap: u64) -> Result<(FieldElement, FieldElement)> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = x.field();
    let h = field.class_number();
    if let Some(q) = x.as_rational() {
        return Ok((
            field.from_bigint(q.numer().pow(h as u32)),
            field.from_bigint(q.denom().pow(h as u32)),
        ));
    }
    let xh = x.pow(h);
    if x.is_integral() {
        return Ok((xh, field.one()));
    }
    let fac = factor_element(x)?;
    let denom_ideal = IdealFactorization {
        factors: fac
            .factors
            .iter()
            .filter(|(_, &e)| e < 0)
            .map(|(p, &e)| (p.clone(), -e * h as i64))
            .collect(),
    };
    let wd = is_principal(field, &denom_ideal, cap)?.ok_or_else(|| {
        Error::LemmaViolation(format!("J^h is not principal in a field asserted to have h = {h}"))
    })?;
    let wn = &xh * &wd;
    if !wn.is_integral() {
        return Err(Error::LemmaViolation("weak numerator is not integral".into()));
    }
    Ok((wn, wd))
}

/// Whether `u` is a unit of O_K.
pub fn is_unit(u: &FieldElement) -> bool {
    u.is_integral() && u.norm().abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5() -> NumberField {
        NumberField::from_i64("sqrtm5", &[5, 0, 1], 2).unwrap()
    }

    #[test]
    fn splitting_types() {
        let g = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
        let p2 = factor_prime(&g, 2).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!((p2[0].e, p2[0].f), (2, 1));
        let p3 = factor_prime(&k5(), 3).unwrap();
        assert_eq!(p3.len(), 2);
        assert!(p3.iter().all(|p| p.e == 1 && p.f == 1));
        let p11 = factor_prime(&k5(), 11).unwrap();
        assert_eq!(p11.len(), 1);
        assert_eq!(p11[0].f, 2);
    }

    #[test]
    fn valuations_of_half_one_plus_root() {
        let k = k5();
        let x = k.from_i64_coords(&[1, 1]).div_int(&BigInt::from(2));
        let fac = factor_element(&x).unwrap();
        let by_p: Vec<(u64, i64)> = fac.factors.iter().map(|(p, &e)| (p.p, e)).collect();
        assert_eq!(by_p.len(), 2);
        assert!(by_p.contains(&(2, -1)));
        assert!(by_p.contains(&(3, 1)));
        assert_eq!(fac.norm(), x.norm().abs());
        let g = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
        let f2 = factor_element(&g.from_int(2)).unwrap();
        assert_eq!(f2.factors.values().copied().collect::<Vec<_>>(), vec![2]);
        assert!(factor_element(&g.one()).unwrap().factors.is_empty());
    }

    #[test]
    fn principal_generators() {
        let k = k5();
        let p2 = factor_prime(&k, 2).unwrap().remove(0);
        let single = |e| IdealFactorization { factors: BTreeMap::from([(p2.clone(), e)]) };
        assert_eq!(is_principal(&k, &single(2), 10).unwrap(), Some(k.from_int(2)));
        assert_eq!(is_principal(&k, &single(1), 10).unwrap(), None);
        assert!(matches!(is_principal(&k, &single(1), 1), Err(Error::CapTooSmall(_))));
    }

    #[test]
    fn class_numbers() {
        let g = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
        assert!(verify_class_number(&g, 10).unwrap());
        assert!(verify_class_number(&k5(), 10).unwrap());
        assert!(!verify_class_number(&k5().with_class_number(1).unwrap(), 10).unwrap());
        let c = NumberField::from_i64("cbrt2", &[-2, 0, 0, 1], 1).unwrap();
        assert!(verify_class_number(&c, 4).unwrap());
    }

    #[test]
    fn weak_numerators() {
        let q = NumberField::rationals();
        let x = q.from_rational(&BigRational::new(3.into(), 2.into()));
        let (wn, wd) = weak_num_denom(&x, 10).unwrap();
        assert_eq!((wn, wd), (q.from_int(3), q.from_int(2)));
        let k = k5();
        let x = k.from_i64_coords(&[1, 1]).div_int(&BigInt::from(2));
        let (wn, wd) = weak_num_denom(&x, 10).unwrap();
        assert_eq!(wd, k.from_int(2));
        assert_eq!(wn, k.from_i64_coords(&[-2, 1]));
        assert_eq!(wn.try_div(&wd).unwrap(), x.pow(2));
        let y = k.from_i64_coords(&[3, 7]);
        assert_eq!(weak_num_denom(&y, 10).unwrap().1, k.one());
    }
}
