//! Divisibility-sequence lemmas on the multiples of the generator: EDS
//! records, the stability and divisibility multipliers, the constructive
//! multiple of a given element, the congruence on quotients of multiples,
//! and the formal-group valuation law.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith;
use crate::curve::{EllipticCurve, Point};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::ideals::{factor_element, factor_prime, valuation, weak_num_denom, PrimeIdeal};
use crate::residue::RPoint;

/// Cap passed to principal-ideal searches inside weak numerators.
pub const WD_CAP: u64 = 64;

/// v_P(x), with a fast path for rational x.
pub fn val(x: &FieldElement, pr: &PrimeIdeal) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    if let Some(q) = x.as_rational() {
        let v = arith::valuation(q.numer(), pr.p) as i64 - arith::valuation(q.denom(), pr.p) as i64;
        return Ok(pr.e as i64 * v);
    }
    valuation(x, pr)
}

/// Weak denominator; wd(0) = 1.
pub fn wd(x: &FieldElement) -> Result<FieldElement> {
    if x.is_zero() {
        return Ok(x.field().one());
    }
    Ok(weak_num_denom(x, WD_CAP)?.1)
}

/// Weak numerator; wn(0) = 0.
pub fn wn(x: &FieldElement) -> Result<FieldElement> {
    if x.is_zero() {
        return Ok(x.clone());
    }
    Ok(weak_num_denom(x, WD_CAP)?.0)
}

/// a | b in O_K, with a rational-integer fast path.
pub fn divides(a: &FieldElement, b: &FieldElement) -> Result<bool> {
    if let (Some(x), Some(y)) = (a.as_integer(), b.as_integer()) {
        if x.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        return Ok(y.is_multiple_of(&x));
    }
    a.divides(b)
}

/// Prime ideals at which x has negative valuation.
pub fn pole_primes(x: &FieldElement) -> Result<Vec<PrimeIdeal>> {
    if x.is_zero() {
        return Ok(Vec::new());
    }
    if let Some(q) = x.as_rational() {
        let mut out = Vec::new();
        for (p, _) in arith::factor(q.denom()) {
            let p = p.to_u64().ok_or_else(|| Error::Unsupported("prime beyond u64".into()))?;
            out.extend(factor_prime(x.field(), p)?);
        }
        return Ok(out);
    }
    Ok(factor_element(x)?
        .factors
        .into_iter()
        .filter(|(_, e)| *e < 0)
        .map(|(p, _)| p)
        .collect())
}

fn affine(e: &EllipticCurve, n: i64) -> Result<(FieldElement, FieldElement)> {
    match e.multiple(n) {
        Point::Infinity => Err(Error::PointAtInfinity),
        Point::Affine(x, y) => Ok((x, y)),
    }
}

#[derive(Clone, Debug)]
pub struct EdsRecord {
    pub n: i64,
    pub x: FieldElement,
    pub y: FieldElement,
    pub wn: FieldElement,
    pub wd: FieldElement,
    pub valuations: Vec<(PrimeIdeal, i64)>,
}

impl EdsRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "x": self.x.to_string_coords(),
            "y": self.y.to_string_coords(),
            "wn": self.wn.to_string_coords(),
            "wd": self.wd.to_string_coords(),
            "valuations": self.valuations.iter().map(|(p, v)| json!({"prime": p.to_string(), "v": v})).collect::<Vec<_>>(),
        })
    }
}

/// Record for nP with valuations of x_n at `tracked` primes (plus its own
/// pole primes when `tracked` is empty).
pub fn eds_record(e: &EllipticCurve, n: i64, tracked: &[PrimeIdeal]) -> Result<EdsRecord> {
    let (x, y) = affine(e, n)?;
    let (wn_, wd_) = if x.is_zero() {
        (x.clone(), x.field().one())
    } else {
        weak_num_denom(&x, WD_CAP)?
    };
    let primes = if tracked.is_empty() { pole_primes(&x)? } else { tracked.to_vec() };
    let mut valuations = Vec::with_capacity(primes.len());
    for p in primes {
        let v = if x.is_zero() { i64::MAX } else { val(&x, &p)? };
        valuations.push((p, v));
    }
    Ok(EdsRecord { n, x, y, wn: wn_, wd: wd_, valuations })
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    /// 4 times the product of v_P(disc) over bad primes (1 with none).
    pub formula: u64,
    /// Smallest k <= formula with kP non-singular at every bad prime.
    pub empirical: Option<u64>,
    pub bad_primes: Vec<(PrimeIdeal, i64)>,
    /// Value used downstream.
    pub r0: u64,
}

impl StabilityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "formula": self.formula,
            "empirical": self.empirical,
            "r0": self.r0,
            "bad_primes": self.bad_primes.iter().map(|(p, v)| json!({"prime": p.to_string(), "v": v})).collect::<Vec<_>>(),
        })
    }
}

fn nonsingular_everywhere(e: &EllipticCurve, pt: &Point, bad: &[(PrimeIdeal, i64)]) -> Result<bool> {
    for (pr, _) in bad {
        if !e.reduction_is_nonsingular(pt, pr)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// r0 for the model as given. The product formula is returned after a
/// post-check that r0 P reduces to a non-singular point at every bad prime.
pub fn stability_multiplier(e: &EllipticCurve) -> Result<StabilityReport> {
    let bad = e.bad_primes()?;
    let formula = if bad.is_empty() {
        1
    } else {
        bad.iter().fold(4u64, |acc, (_, v)| acc.saturating_mul(v.unsigned_abs()))
    };
    let mut empirical = None;
    for k in 1..=formula.min(256) {
        if nonsingular_everywhere(e, &e.multiple(k as i64), &bad)? {
            empirical = Some(k);
            break;
        }
    }
    let pt = e.multiple(formula as i64);
    if !nonsingular_everywhere(e, &pt, &bad)? {
        return Err(Error::StabilityNotFound(format!(
            "{}P is singular modulo some bad prime of {}",
            formula, e.label
        )));
    }
    Ok(StabilityReport { formula, empirical, bad_primes: bad, r0: formula })
}

#[derive(Clone, Debug)]
pub struct DivisibilityReport {
    pub r0: u64,
    pub m0: u64,
    pub r: u64,
    pub scan_cap: u64,
    /// (M, whether x_M has a primitive divisor).
    pub evidence: Vec<(u64, bool)>,
}

impl DivisibilityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "r0": self.r0,
            "m0": self.m0,
            "r": self.r,
            "scan_cap": self.scan_cap,
            "evidence": self.evidence.iter().map(|(m, p)| json!({"M": m, "primitive": p})).collect::<Vec<_>>(),
        })
    }
}

/// Whether x_1..x_cap have primitive divisors, index by index.
pub fn primitive_divisor_scan(e: &EllipticCurve, cap: u64) -> Result<Vec<(u64, bool)>> {
    let mut out = Vec::with_capacity(cap as usize);
    let mut seen_den = BigInt::one();
    let mut seen: BTreeSet<PrimeIdeal> = BTreeSet::new();
    for m in 1..=cap {
        let pt = e.multiple(m as i64);
        let Some(x) = pt.x() else {
            out.push((m, false));
            continue;
        };
        let primitive = if let Some(q) = x.as_rational() {
            let d = q.denom();
            let old = arith::coprime_support_part(d, &seen_den);
            let fresh = !(d / old).is_one();
            seen_den = arith::lcm(&seen_den, d);
            fresh
        } else {
            let poles = pole_primes(x)?;
            let fresh = poles.iter().any(|p| !seen.contains(p));
            seen.extend(poles);
            fresh
        };
        out.push((m, primitive));
    }
    Ok(out)
}

/// r = r0 * M0, M0 the least index from which every scanned index has a
/// primitive divisor.
pub fn divisibility_multiplier(e: &EllipticCurve, r0: u64, scan_cap: u64) -> Result<DivisibilityReport> {
    if scan_cap < 2 {
        return Err(Error::ScanCapTooSmall(format!("scan cap {scan_cap} < 2")));
    }
    let evidence = primitive_divisor_scan(e, scan_cap)?;
    let mut m0 = scan_cap + 1;
    for &(m, prim) in evidence.iter().rev() {
        if !prim {
            break;
        }
        m0 = m;
    }
    if m0 > scan_cap {
        return Err(Error::ScanCapTooSmall(format!(
            "index {scan_cap} has no primitive divisor; raise the scan cap"
        )));
    }
    Ok(DivisibilityReport { r0, m0, r: r0 * m0, scan_cap, evidence })
}

#[derive(Clone, Debug)]
pub struct Ec3Report {
    pub n: i64,
    pub r0: u64,
    /// (prime, v_P(xi), order of r0 P in the reduction, residue characteristic).
    pub factors: Vec<(PrimeIdeal, i64, u64, u64)>,
    pub verified: bool,
}

impl Ec3Report {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "r0": self.r0,
            "verified": self.verified,
            "factors": self.factors.iter().map(|(p, e, nv, pv)| json!({
                "prime": p.to_string(), "e": e, "n_v": nv, "p": pv,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Order of the reduction of `pt` modulo P, searched up to the Hasse bound.
pub fn reduced_order(e: &EllipticCurve, pt: &Point, pr: &PrimeIdeal) -> Result<u64> {
    let red = e.reduce_at(pr)?;
    let rp = e.reduce_point(&red, pt)?;
    if let RPoint::Affine(x, y) = &rp {
        if red.is_singular_point(x, y) {
            return Err(Error::OrderSearchFailed(format!("point reduces to a singular point mod {pr}")));
        }
    }
    let q = pr.norm().to_f64().unwrap_or(f64::INFINITY);
    let cap = (q + 1.0 + 2.0 * q.sqrt()).ceil() as u64 + 1;
    red.point_order(&rp, cap)
        .ok_or_else(|| Error::OrderSearchFailed(format!("no order below {cap} mod {pr}")))
}

/// n = r0 * prod n_v p_v^{e_v} with xi | wd(x_n), post-verified.
pub fn lemma_ec3_multiple(e: &EllipticCurve, xi: &FieldElement, r0: u64) -> Result<Ec3Report> {
    if xi.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !xi.is_integral() {
        return Err(Error::NotIntegral);
    }
    let base = e.multiple(r0 as i64);
    let mut n: i64 = r0 as i64;
    let mut factors = Vec::new();
    for (pr, ev) in factor_element(xi)?.factors {
        let nv = reduced_order(e, &base, &pr)?;
        let pe = (pr.p as i64)
            .checked_pow(ev as u32)
            .and_then(|t| t.checked_mul(nv as i64))
            .ok_or_else(|| Error::CapExceeded("constructive multiple index overflows".into()))?;
        n = n.checked_mul(pe).ok_or_else(|| Error::CapExceeded("constructive multiple index overflows".into()))?;
        factors.push((pr.clone(), ev, nv, pr.p));
    }
    let (x, _) = affine(e, n)?;
    let verified = divides(xi, &wd(&x)?)?;
    if !verified {
        return Err(Error::LemmaViolation(format!("xi does not divide wd(x_{n})")));
    }
    Ok(Ec3Report { n, r0, factors, verified })
}

#[derive(Clone, Debug)]
pub struct Ec4Report {
    pub m: i64,
    pub n: i64,
    pub q: i64,
    pub zeta_zero: bool,
    pub holds: bool,
}

impl Ec4Report {
    pub fn to_json(&self) -> Value {
        json!({"m": self.m, "n": self.n, "q": self.q, "zeta_zero": self.zeta_zero, "holds": self.holds})
    }
}

/// Whether wd(x_m) divides wn(x_n y_m / (y_n x_m) - c).
pub fn ec4_divisibility(
    xm: &FieldElement,
    ym: &FieldElement,
    xn: &FieldElement,
    yn: &FieldElement,
    c: &FieldElement,
) -> Result<(bool, bool)> {
    if ym.is_zero() || yn.is_zero() {
        return Err(Error::TorsionDegenerate("y-coordinate vanishes".into()));
    }
    if xm.is_zero() {
        return Err(Error::TorsionDegenerate("x_m = 0".into()));
    }
    let all: Option<Vec<_>> = [xm, ym, xn, yn].iter().map(|t| t.as_rational()).collect();
    if let (Some(v), true) = (all, c.is_integral()) {
        // zeta = A - c with A = a/b rational. For P | D = den(x_m), the
        // condition is v_P(a - c b) >= v_P(D) + v_P(b), i.e. divisibility of
        // the integral element a - c b by D times the D-supported part of b.
        let [xm, ym, xn, yn] = [0, 1, 2, 3].map(|i| &v[i]);
        let b: BigInt = xn.denom() * ym.denom() * yn.numer() * xm.numer();
        let a: BigInt = xn.numer() * ym.numer() * yn.denom() * xm.denom();
        let mut coords: Vec<BigInt> = c.num().iter().map(|ci| -(ci * &b)).collect();
        coords[0] += &a;
        let zero = coords.iter().all(|t| t.is_zero());
        let d = xm.denom();
        let modulus = d * arith::coprime_support_part(&b, d);
        let holds = coords.iter().all(|t| t.is_multiple_of(&modulus));
        return Ok((zero, holds));
    }
    let zeta = &(&(xn * ym) * &(yn * xm).inv()?) - c;
    if zeta.is_zero() {
        return Ok((true, true));
    }
    Ok((false, divides(&wd(xm)?, &wn(&zeta)?)?))
}

/// The congruence for n = m q.
pub fn lemma_ec4_check(e: &EllipticCurve, m: i64, n: i64) -> Result<Ec4Report> {
    if m == 0 || n % m != 0 {
        return Err(Error::NotDivisible(m, n));
    }
    let q = n / m;
    let degenerate = |err: Error| match err {
        Error::PointAtInfinity => Error::TorsionDegenerate("multiple is the point at infinity".into()),
        other => other,
    };
    let (xm, ym) = affine(e, m).map_err(degenerate)?;
    let (xn, yn) = affine(e, n).map_err(degenerate)?;
    let (zeta_zero, holds) = ec4_divisibility(&xm, &ym, &xn, &yn, &e.field().from_int(q))?;
    Ok(Ec4Report { m, n, q, zeta_zero, holds })
}

#[derive(Clone, Debug, Default)]
pub struct LawReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn to_json(&self) -> Value {
        json!({"checked": self.checked, "violations": self.violations})
    }
}

/// v(x_{mt}) = v(x_m) - 2 v(t) whenever v(x_m) < 0, for m <= m_max, t <= t_max.
pub fn formal_group_check(e: &EllipticCurve, m_max: i64, t_max: i64) -> Result<LawReport> {
    let mut rep = LawReport::default();
    for m in 1..=m_max {
        let Some(xm) = e.multiple(m).x().cloned() else { continue };
        for pr in pole_primes(&xm)? {
            let vm = val(&xm, &pr)?;
            for t in 1..=t_max {
                let Some(xmt) = e.multiple(m * t).x().cloned() else {
                    rep.violations.push(format!("x_{} undefined", m * t));
                    continue;
                };
                let vt = val(&e.field().from_int(t), &pr)?;
                let got = val(&xmt, &pr)?;
                rep.checked += 1;
                if got != vm - 2 * vt {
                    rep.violations.push(format!("{pr}: v(x_{}) = {got}, expected {}", m * t, vm - 2 * vt));
                }
            }
        }
    }
    Ok(rep)
}

/// m | n iff wd(x_{rm}) | wd(x_{rn}) for 1 <= m, n <= cap.
pub fn ec2_biconditional(e: &EllipticCurve, r: u64, cap: i64) -> Result<LawReport> {
    let mut wds = Vec::with_capacity(cap as usize);
    for m in 1..=cap {
        let (x, _) = affine(e, r as i64 * m)?;
        wds.push(wd(&x)?);
    }
    let mut rep = LawReport::default();
    for m in 1..=cap {
        for n in 1..=cap {
            let lhs = n % m == 0;
            let rhs = divides(&wds[m as usize - 1], &wds[n as usize - 1])?;
            rep.checked += 1;
            if lhs != rhs {
                rep.violations.push(format!("m = {m}, n = {n}: m | n is {lhs}, wd divisibility is {rhs}"));
            }
        }
    }
    Ok(rep)
}

/// Common poles of x_{r0 m} and x_{r0 n} are poles of x_{gcd(r0 m, r0 n)}.
pub fn gcd_trick_check(e: &EllipticCurve, r0: u64, cap: i64) -> Result<LawReport> {
    let r0 = r0 as i64;
    let mut rep = LawReport::default();
    for m in 1..=cap {
        for n in m + 1..=cap {
            let (Some(a), Some(b)) = (e.multiple(r0 * m).x().cloned(), e.multiple(r0 * n).x().cloned()) else {
                continue;
            };
            let g = (r0 * m).gcd(&(r0 * n));
            let pg = e.multiple(g);
            let pb = pole_primes(&b)?;
            for pr in pole_primes(&a)?.into_iter().filter(|p| pb.contains(p)) {
                rep.checked += 1;
                let ok = match pg.x() {
                    None => true,
                    Some(xg) => xg.is_zero() || val(xg, &pr)? < 0,
                };
                if !ok {
                    rep.violations.push(format!("{pr} at indices {}, {}", r0 * m, r0 * n));
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::field::NumberField;

    fn c37() -> Curve {
        EllipticCurve::from_i64("37a", &NumberField::rationals(), [0, 0, 1, -1, 0], (0, 0), "").unwrap()
    }

    #[test]
    fn records_and_stability() {
        let e = c37();
        let r5 = eds_record(&e, 5, &[]).unwrap();
        assert_eq!(r5.wd.as_integer().unwrap(), BigInt::from(4));
        assert_eq!(r5.valuations[0].1, -2);
        let r10 = eds_record(&e, 10, &[]).unwrap();
        assert_eq!(r10.valuations[0].1, -4);
        assert!(eds_record(&e, 1, &[]).unwrap().wd.is_one());
        let s = stability_multiplier(&e).unwrap();
        assert_eq!(s.formula, 4);
        assert!(s.empirical.unwrap() <= 4);
    }

    #[test]
    fn stability_of_cm_curve() {
        let q = NumberField::rationals();
        let e = EllipticCurve::from_i64("da", &q, [0, 0, 0, 8, 0], (1, 3), "").unwrap();
        assert_eq!(stability_multiplier(&e).unwrap().formula, 60);
    }

    #[test]
    fn divisibility_multiplier_37a() {
        let e = c37();
        let d = divisibility_multiplier(&e, 4, 20).unwrap();
        assert_eq!(d.m0, 11);
        assert_eq!(d.r, 44);
        assert!(!d.evidence[9].1);
        assert!(matches!(divisibility_multiplier(&e, 4, 1), Err(Error::ScanCapTooSmall(_))));
    }

    #[test]
    fn ec3_small() {
        let e = c37();
        let q = NumberField::rationals();
        let r = lemma_ec3_multiple(&e, &q.from_int(2), 4).unwrap();
        assert_eq!(r.factors[0].2, 5);
        assert_eq!(r.n, 4 * 5 * 2);
        let r = lemma_ec3_multiple(&e, &q.from_int(3), 4).unwrap();
        assert_eq!(r.factors[0].2, 7);
        assert_eq!(lemma_ec3_multiple(&e, &q.from_int(-1), 4).unwrap().n, 4);
    }

    #[test]
    fn ec4_small() {
        let e = c37();
        let r = lemma_ec4_check(&e, 5, 10).unwrap();
        assert!(r.holds && r.q == 2);
        let r = lemma_ec4_check(&e, 3, 3).unwrap();
        assert!(r.zeta_zero && r.holds);
        assert!(matches!(lemma_ec4_check(&e, 2, 5), Err(Error::NotDivisible(2, 5))));
    }

    #[test]
    fn formal_group_and_gcd() {
        let e = c37();
        let rep = formal_group_check(&e, 12, 5).unwrap();
        assert!(rep.checked > 0 && rep.violations.is_empty(), "{:?}", rep.violations);
        let rep = gcd_trick_check(&e, 4, 8).unwrap();
        assert!(rep.violations.is_empty());
    }
}
