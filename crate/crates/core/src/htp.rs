//! The Denef-Lipshitz lemma and the four-condition definition of Z in O_K:
//! witness search, witness verification and the integrality descent.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith;
use crate::curve::{Curve, Point};
use crate::divample::{density_witness, norm_bound_witness, DivisionAmpleSet, Source};
use crate::embed::certified_half_root_bound;
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::lemmas::{divides, ec4_divisibility, lemma_ec3_multiple, wd};

/// Largest supported field degree (n! appears in exponents).
pub const MAX_DEGREE: usize = 4;

pub const START_BITS: u32 = 64;

fn factorial_exponent(n_deg: usize) -> Result<u64> {
    if n_deg == 0 || n_deg > MAX_DEGREE {
        return Err(Error::FactorialOverflow(n_deg));
    }
    Ok((1..=n_deg as u64).product())
}

/// 2^{N+1} prod_{i<N} (xi^{ell N} + i)^N with N = n_deg!.
pub fn dl_product(xi: &FieldElement, ell: u64, n_deg: usize) -> Result<FieldElement> {
    if xi.is_zero() {
        return Err(Error::ZeroXi);
    }
    let nf = factorial_exponent(n_deg)?;
    let k = xi.field();
    let base = xi.pow(ell * nf);
    let mut acc = k.from_bigint(BigInt::one() << (nf + 1) as usize);
    for i in 0..nf {
        let t = &base + &k.from_int(i as i64);
        acc = &acc * &t.pow(nf);
    }
    Ok(acc)
}

/// The displayed product divides u.
pub fn dl_condition(xi: &FieldElement, u: &FieldElement, ell: u64, n_deg: usize) -> Result<bool> {
    if u.is_zero() {
        return Err(Error::ZeroElement);
    }
    let p = dl_product(xi, ell, n_deg)?;
    if p.is_zero() {
        return Ok(false);
    }
    divides(&p, u)
}

/// |sigma(xi)| <= 1/2 |N(u)|^{1/(ell n_deg!)} at every embedding.
pub fn dl_bound(xi: &FieldElement, u: &FieldElement, ell: u64, n_deg: usize, cap_bits: u32) -> Result<bool> {
    if xi.is_zero() {
        return Ok(true);
    }
    let k = ell * factorial_exponent(n_deg)?;
    let norm = u.norm().abs();
    let k = u32::try_from(k).map_err(|_| Error::FactorialOverflow(n_deg))?;
    certified_half_root_bound(xi, k, &norm, START_BITS, cap_bits)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DescentCheck {
    pub bound_holds: bool,
    pub congruence_holds: bool,
    pub concluded: bool,
}

/// Both hypotheses of the descent: |sigma(xi)| <= 1/2 N(u~)^{1/n!} with
/// N(u~) = |u~|^n, and u~ | xi - q. When both hold xi must be a rational
/// integer; anything else is reported as a lemma violation.
pub fn dl_descent(xi: &FieldElement, q: &BigInt, ut: &BigInt, cap_bits: u32) -> Result<DescentCheck> {
    if ut.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let k = xi.field();
    let n_deg = k.degree();
    let nf = factorial_exponent(n_deg)?;
    let norm = BigRational::from_integer(ut.abs().pow(n_deg as u32));
    let bound_holds = xi.is_zero()
        || certified_half_root_bound(xi, nf as u32, &norm, START_BITS, cap_bits)?;
    let diff = xi - &k.from_bigint(q.clone());
    let congruence_holds = divides(&k.from_bigint(ut.clone()), &diff)?;
    let concluded = bound_holds && congruence_holds;
    if concluded && !xi.is_rational_integer() {
        return Err(Error::LemmaViolation(format!(
            "descent hypotheses hold for {xi} (q = {q}, u~ = {ut}) but it is not a rational integer"
        )));
    }
    Ok(DescentCheck { bound_holds, congruence_holds, concluded })
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteReport {
    pub tested: usize,
    pub passing: usize,
    pub passing_non_integers: usize,
    pub integers_certified: Vec<String>,
}

/// Exhaustive descent over xi = a + b theta in a box, against a grid of
/// (q, u~). A lemma violation aborts with an error.
pub fn descent_bruteforce(
    k: &NumberField,
    half_box: i64,
    q_range: i64,
    ut_max: i64,
    cap_bits: u32,
) -> Result<BruteReport> {
    let mut rep = BruteReport { tested: 0, passing: 0, passing_non_integers: 0, integers_certified: Vec::new() };
    let mut coords = vec![0i64; k.degree()];
    for a in -half_box..=half_box {
        for b in -half_box..=half_box {
            coords[0] = a;
            if coords.len() > 1 {
                coords[1] = b;
            } else if b != 0 {
                continue;
            }
            let xi = k.from_i64_coords(&coords);
            let mut passed = false;
            for q in -q_range..=q_range {
                for ut in (-ut_max..=ut_max).filter(|t| *t != 0) {
                    rep.tested += 1;
                    let d = dl_descent(&xi, &BigInt::from(q), &BigInt::from(ut), cap_bits)?;
                    passed |= d.concluded;
                }
            }
            if passed {
                rep.passing += 1;
                if xi.is_rational_integer() {
                    rep.integers_certified.push(xi.to_string());
                } else {
                    rep.passing_non_integers += 1;
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct Caps {
    pub max_index: u64,
    pub precision_bits: u32,
    /// |q| bound for the fallback search over n = m q when xi is not in Z.
    pub fallback_q: i64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_index: 20_000, precision_bits: 4096, fallback_q: 3 }
    }
}

/// Everything the definition of Z in O_K depends on.
#[derive(Clone, Debug)]
pub struct HtpSetup {
    /// Rank-one curve over K.
    pub curve: Curve,
    pub set: DivisionAmpleSet,
    pub r0: u64,
    pub r: u64,
    pub torsion: u64,
    pub caps: Caps,
}

impl HtpSetup {
    pub fn field(&self) -> &NumberField {
        self.curve.field()
    }

    /// Indices m, n range over multiples of r T.
    pub fn lattice(&self) -> u64 {
        self.r * self.torsion
    }

    /// Whether the set's source curve is this curve viewed over Q.
    fn set_is_base_change(&self) -> bool {
        let Source::Eds(eq) = &self.set.source else { return false };
        let same = |a: &FieldElement, b: &FieldElement| a.as_rational().is_some() && a.as_rational() == b.as_rational();
        let gens = match (&eq.generator, &self.curve.generator) {
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => same(x1, x2) && same(y1, y2),
            _ => false,
        };
        gens && eq.a.iter().zip(&self.curve.a).all(|(a, b)| same(a, b))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DescentChain {
    pub q: String,
    /// wd(x_m) | (xi - q)^h.
    pub wd_divides_power: bool,
    /// wd(x_m) | wn(x_n y_m/(y_n x_m) - q).
    pub ec4_holds: bool,
    pub u_divides_difference: bool,
    pub u_tilde: String,
    pub norm_bound_holds: bool,
    /// |sigma(xi)| <= 1/2 |N(u)|^{1/(ell n!)}.
    pub archimedean_bound: bool,
    pub descent: DescentCheck,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerdictTrace {
    /// Conditions (1)-(4); `None` when not evaluated.
    pub conditions: [Option<bool>; 4],
    pub in_lattice: bool,
    pub zero_case: bool,
    pub chain: Option<DescentChain>,
    pub notes: Vec<String>,
    pub verdict: bool,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub xi: FieldElement,
    pub m: i64,
    pub n: i64,
    pub u: FieldElement,
    pub trace: Option<VerdictTrace>,
}

fn coords_json(x: &FieldElement) -> Value {
    json!(x.to_string_coords())
}

fn parse_coords(k: &NumberField, v: &Value) -> Result<FieldElement> {
    let arr = v.as_array().ok_or_else(|| Error::ConfigParse("expected a coordinate list".into()))?;
    let mut coords = Vec::with_capacity(arr.len());
    for c in arr {
        let s = match c {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(Error::ConfigParse(format!("bad coordinate {c}"))),
        };
        coords.push(
            s.parse::<BigRational>()
                .map_err(|e| Error::ConfigParse(format!("bad rational {s}: {e}")))?,
        );
    }
    if coords.len() > k.degree() {
        return Err(Error::ConfigParse("too many coordinates".into()));
    }
    coords.resize(k.degree(), BigRational::zero());
    Ok(k.from_coords(&coords))
}

impl Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "xi": coords_json(&self.xi),
            "m": self.m,
            "n": self.n,
            "u": coords_json(&self.u),
            "trace": self.trace,
        })
    }

    pub fn from_json(k: &NumberField, v: &Value) -> Result<Self> {
        let get_i = |key: &str| {
            v.get(key)
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::ConfigParse(format!("witness field {key} missing")))
        };
        let field = |key: &str| v.get(key).ok_or_else(|| Error::ConfigParse(format!("witness field {key} missing")));
        Ok(Witness {
            xi: parse_coords(k, field("xi")?)?,
            m: get_i("m")?,
            n: get_i("n")?,
            u: parse_coords(k, field("u")?)?,
            trace: v.get("trace").and_then(|t| serde_json::from_value(t.clone()).ok()),
        })
    }
}

pub fn parse_element(k: &NumberField, v: &Value) -> Result<FieldElement> {
    parse_coords(k, v)
}

fn coords_of(e: &Curve, idx: i64) -> Option<(FieldElement, FieldElement)> {
    match e.multiple(idx) {
        Point::Affine(x, y) => Some((x, y)),
        Point::Infinity => None,
    }
}

/// Evaluate conditions (1)-(4) exactly and, when all hold, replay the
/// descent to xi in Z.
pub fn verify_witness(setup: &HtpSetup, w: &Witness) -> Result<VerdictTrace> {
    let k = setup.field();
    let xi = &w.xi;
    if !xi.is_integral() {
        return Err(Error::NotIntegral);
    }
    let lat = setup.lattice() as i64;
    let in_lattice = w.m != 0 && w.m % lat == 0 && w.n % lat == 0;
    let mut notes = Vec::new();
    let c1 = w.m != 0 && w.n % w.m == 0;
    if xi.is_zero() {
        notes.push("xi = 0: certified by the zero special case with n = m".into());
        let ok = in_lattice && w.m == w.n;
        return Ok(VerdictTrace {
            conditions: [Some(c1), None, None, None],
            in_lattice,
            zero_case: true,
            chain: None,
            notes,
            verdict: ok && c1,
        });
    }
    if w.u.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (ell, n_deg) = (setup.set.ell, k.degree());
    let c2 = dl_condition(xi, &w.u, ell, n_deg)?;
    let pm = coords_of(&setup.curve, w.m);
    let pn = coords_of(&setup.curve, w.n);
    let h = k.class_number();
    let wd_m = match &pm {
        Some((xm, _)) => Some(wd(xm)?),
        None => None,
    };
    let c3 = match &wd_m {
        Some(d) => divides(&w.u.pow(h), d)?,
        None => {
            notes.push(format!("{}P is the point at infinity", w.m));
            false
        }
    };
    let c4 = match (&pm, &pn) {
        (Some((xm, ym)), Some((xn, yn))) => match ec4_divisibility(xm, ym, xn, yn, xi) {
            Ok((_, holds)) => holds,
            Err(Error::TorsionDegenerate(msg)) => {
                notes.push(format!("condition (4) degenerate: {msg}"));
                false
            }
            Err(e) => return Err(e),
        },
        _ => false,
    };
    let conditions = [Some(c1), Some(c2), Some(c3), Some(c4)];
    let all = c1 && c2 && c3 && c4;
    let chain = if all {
        let (xm, ym) = pm.as_ref().unwrap();
        let (xn, yn) = pn.as_ref().unwrap();
        Some(replay_descent(setup, w, xm, ym, xn, yn, wd_m.as_ref().unwrap())?)
    } else {
        None
    };
    let verdict = all && in_lattice && chain.as_ref().is_some_and(|c| c.descent.concluded);
    Ok(VerdictTrace { conditions, in_lattice, zero_case: false, chain, notes, verdict })
}

/// The integrality argument on a witness satisfying (1)-(4). Every step is
/// checked on its own; a failing step is a lemma violation.
fn replay_descent(
    setup: &HtpSetup,
    w: &Witness,
    xm: &FieldElement,
    ym: &FieldElement,
    xn: &FieldElement,
    yn: &FieldElement,
    wd_m: &FieldElement,
) -> Result<DescentChain> {
    let k = setup.field();
    let h = k.class_number();
    let q = BigInt::from(w.n / w.m);
    let diff = &w.xi - &k.from_bigint(q.clone());
    let fail = |step: &str| Error::LemmaViolation(format!("descent breaks at {step} for xi = {}", w.xi));
    let (_, ec4_holds) = ec4_divisibility(xm, ym, xn, yn, &k.from_bigint(q.clone()))?;
    if !ec4_holds {
        return Err(fail("the quotient congruence"));
    }
    let wd_divides_power = divides(wd_m, &diff.pow(h))?;
    if !wd_divides_power {
        return Err(fail("wd(x_m) | (xi - q)^h"));
    }
    let u_divides_difference = divides(&w.u, &diff)?;
    if !u_divides_difference {
        return Err(fail("u | xi - q"));
    }
    let (ut, norm_bound_holds) = norm_bound_witness(&w.u, &setup.set);
    if !norm_bound_holds {
        return Err(fail("norm-boundedness of u"));
    }
    let archimedean_bound = dl_bound(&w.xi, &w.u, setup.set.ell, k.degree(), setup.caps.precision_bits)?;
    if !archimedean_bound {
        return Err(fail("the archimedean bound"));
    }
    let descent = dl_descent(&w.xi, &q, &ut, setup.caps.precision_bits)?;
    if !descent.concluded {
        return Err(fail("the final descent"));
    }
    Ok(DescentChain {
        q: q.to_string(),
        wd_divides_power,
        ec4_holds,
        u_divides_difference,
        u_tilde: if ut.bits() > 256 {
            format!("u ({} digits)", crate::eds::approx_digits(&ut))
        } else {
            ut.to_string()
        },
        norm_bound_holds,
        archimedean_bound,
        descent,
    })
}

#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    pub witness: Option<Witness>,
    pub cap_flags: Vec<String>,
}

/// Constructive search: u from the density of the set applied to the
/// displayed product, m from u's index (or from the constructive multiple of
/// u^h when the set comes from another curve), n = m xi. For xi outside Z a
/// bounded search over n = m q is run instead.
pub fn find_witness(setup: &HtpSetup, xi: &FieldElement) -> Result<SearchOutcome> {
    let k = setup.field();
    if !xi.is_integral() {
        return Err(Error::NotIntegral);
    }
    let lat = setup.lattice();
    let mut out = SearchOutcome::default();
    if xi.is_zero() {
        let w = Witness { xi: xi.clone(), m: lat as i64, n: lat as i64, u: k.one(), trace: None };
        let trace = verify_witness(setup, &w)?;
        out.witness = Some(Witness { trace: Some(trace), ..w });
        return Ok(out);
    }
    let cap = setup.caps.max_index;
    let product = dl_product(xi, setup.set.ell, k.degree())?;
    let dw = match density_witness(&setup.set, &product, cap) {
        Ok(d) => d,
        Err(Error::CapExceeded(msg)) => {
            out.cap_flags.push(format!("density witness: {msg}"));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let u = dw.a.clone();
    let m0 = if setup.set_is_base_change() {
        dw.index
    } else {
        let uh = u.pow(k.class_number());
        lemma_ec3_multiple(&setup.curve, &uh, setup.r0)?.n.unsigned_abs()
    };
    let m = arith::lcm_u64(m0, lat);
    if m > cap {
        out.cap_flags.push(format!("m = {m} exceeds max index {cap}"));
        return Ok(out);
    }
    let m = m as i64;
    let candidates: Vec<i64> = match xi.as_integer() {
        Some(t) => vec![t.to_i64().ok_or_else(|| Error::CapExceeded("xi too large".into()))?],
        None => (1..=setup.caps.fallback_q).flat_map(|q| [q, -q]).collect(),
    };
    let integral_xi = xi.as_integer().is_some();
    for q in candidates {
        let n = m * q;
        if n.unsigned_abs() > cap {
            out.cap_flags.push(format!("n = {n} exceeds max index {cap}"));
            continue;
        }
        // No certificate can conclude unless u | xi - q, so skip the point
        // arithmetic at index n when that already fails.
        if !integral_xi && !divides(&u, &(xi - &k.from_int(q)))? {
            out.cap_flags.push(format!("q = {q}: u does not divide xi - q"));
            continue;
        }
        let w = Witness { xi: xi.clone(), m, n, u: u.clone(), trace: None };
        let trace = verify_witness(setup, &w)?;
        if trace.verdict {
            out.witness = Some(Witness { trace: Some(trace), ..w });
            return Ok(out);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum Verdict {
    IntegerCertified(Box<Witness>),
    /// Not a proof of non-integrality: the search is bounded.
    NoWitnessWithinCaps(Vec<String>),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::IntegerCertified(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::IntegerCertified(w) => json!({"verdict": "IntegerCertified", "witness": w.to_json()}),
            Verdict::NoWitnessWithinCaps(flags) => json!({"verdict": "NoWitnessWithinCaps", "cap_flags": flags}),
        }
    }
}

pub fn integrality_verdict(setup: &HtpSetup, xi: &FieldElement) -> Result<Verdict> {
    let out = find_witness(setup, xi)?;
    match out.witness {
        Some(w) => {
            let trace = w.trace.as_ref().expect("found witnesses carry a trace");
            if !trace.verdict {
                return Err(Error::LemmaViolation("a returned witness does not verify".into()));
            }
            if !xi.is_rational_integer() {
                return Err(Error::LemmaViolation(format!("{xi} certified but not in Z")));
            }
            Ok(Verdict::IntegerCertified(Box::new(w)))
        }
        None => Ok(Verdict::NoWitnessWithinCaps(out.cap_flags)),
    }
}

impl HtpSetup {
    /// Torsion, stability and divisibility multipliers for `curve` over K,
    /// and the EDS set from `curve_q` over Q.
    pub fn build(
        curve: &Curve,
        curve_q: &Curve,
        rank_assertion_k: Option<&str>,
        index_kq: u64,
        scan_cap: u64,
        caps: Caps,
    ) -> Result<Self> {
        let torsion = crate::torsion::torsion_order(curve, 50)?;
        let r0 = crate::lemmas::stability_multiplier(curve)?.r0;
        let r = crate::lemmas::divisibility_multiplier(curve, r0, scan_cap)?.r;
        let (tq, rq) = if std::sync::Arc::ptr_eq(curve, curve_q) {
            (torsion, r)
        } else {
            let t = crate::torsion::torsion_order(curve_q, 50)?;
            let r0q = crate::lemmas::stability_multiplier(curve_q)?.r0;
            (t, crate::lemmas::divisibility_multiplier(curve_q, r0q, scan_cap)?.r)
        };
        let set = crate::divample::eds_divample_create(curve_q, curve.field(), tq, index_kq, rq, rank_assertion_k)?;
        Ok(HtpSetup { curve: curve.clone(), set, r0, r, torsion, caps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::EllipticCurve;
    use num_integer::Integer;

    fn gauss() -> NumberField {
        NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap()
    }

    #[test]
    fn displayed_product() {
        let q = NumberField::rationals();
        assert_eq!(dl_product(&q.from_int(3), 1, 1).unwrap(), q.from_int(12));
        assert!(dl_condition(&q.from_int(3), &q.from_int(24), 1, 1).unwrap());
        let k = gauss();
        assert_eq!(dl_product(&k.from_int(1), 1, 2).unwrap(), k.from_int(32));
        assert!(dl_condition(&k.from_int(1), &k.from_int(32), 1, 2).unwrap());
        assert!(!dl_condition(&k.from_int(1), &k.from_int(16), 1, 2).unwrap());
        assert!(matches!(dl_product(&k.zero(), 1, 2), Err(Error::ZeroXi)));
        assert!(matches!(dl_product(&k.one(), 1, 5), Err(Error::FactorialOverflow(5))));
    }

    #[test]
    fn archimedean_bound() {
        let k = gauss();
        assert!(dl_bound(&k.from_int(1), &k.from_int(32), 1, 2, 1024).unwrap());
        assert!(dl_bound(&k.zero(), &k.from_int(1), 1, 2, 1024).unwrap());
        assert!(!dl_bound(&k.from_int(100), &k.from_int(32), 1, 2, 1024).unwrap());
    }

    #[test]
    fn descent_examples() {
        let k = gauss();
        let d = dl_descent(&k.from_int(1), &BigInt::from(1), &BigInt::from(5), 1024).unwrap();
        assert!(d.concluded);
        let d = dl_descent(&k.theta(), &BigInt::from(1), &BigInt::from(5), 1024).unwrap();
        assert!(!d.congruence_holds && !d.concluded);
    }

    #[test]
    fn end_to_end_over_q() {
        let q = NumberField::rationals();
        let e = EllipticCurve::from_i64("37a", &q, [0, 0, 1, -1, 0], (0, 0), "rank 1 over Q").unwrap();
        let setup = HtpSetup::build(&e, &e, None, 1, 20, Caps::default()).unwrap();
        assert_eq!(setup.lattice(), 44);
        for xi in [1, 2, 0, -1] {
            let v = integrality_verdict(&setup, &q.from_int(xi)).unwrap();
            assert!(v.is_certified(), "xi = {xi}");
        }
    }

    #[test]
    fn gaussian_one_and_i() {
        let k = gauss();
        let q = NumberField::rationals();
        let eq = EllipticCurve::from_i64("37a", &q, [0, 0, 1, -1, 0], (0, 0), "rank 1 over Q").unwrap();
        let ek = EllipticCurve::from_i64("37a", &k, [0, 0, 1, -1, 0], (0, 0), "asserted").unwrap();
        let setup = HtpSetup::build(&ek, &eq, Some("asserted"), 1, 20, Caps::default()).unwrap();
        let out = find_witness(&setup, &k.one()).unwrap();
        let w = out.witness.unwrap();
        assert_eq!(w.m, 220);
        assert!(w.u.as_integer().unwrap().is_multiple_of(&BigInt::from(32)));
        let round = Witness::from_json(&k, &w.to_json()).unwrap();
        assert!(verify_witness(&setup, &round).unwrap().verdict);
        let v = integrality_verdict(&setup, &k.theta()).unwrap();
        assert!(!v.is_certified());
    }
}
