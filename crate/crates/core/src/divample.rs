//! Division-ample sets built from elliptic divisibility sequences over Q,
//! and the unit-rank bookkeeping for norm-one tori.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::ideals::factor_prime;
use crate::lemmas::{reduced_order, val};

#[derive(Clone, Debug)]
pub enum Source {
    /// wd(x_n) for n in the index lattice of a curve over Q.
    Eds(Curve),
    Explicit(Vec<FieldElement>),
}

#[derive(Clone, Debug)]
pub struct DivisionAmpleSet {
    pub source: Source,
    pub field: NumberField,
    /// Norm-boundedness exponent.
    pub ell: u64,
    /// Allowed indices are the multiples of this stride.
    pub stride: u64,
    pub provenance: String,
}

/// The EDS set attached to a rank-one curve over Q whose rank is asserted
/// to be preserved over K. The stride is T * [E(K):E(Q)] * r.
pub fn eds_divample_create(
    curve_q: &Curve,
    k: &NumberField,
    torsion: u64,
    index_kq: u64,
    r: u64,
    rank_assertion_k: Option<&str>,
) -> Result<DivisionAmpleSet> {
    if curve_q.field().degree() != 1 {
        return Err(Error::Unsupported("the EDS source curve must be defined over Q".into()));
    }
    let assertion = rank_assertion_k.unwrap_or("").trim();
    if curve_q.rank_assertion.trim().is_empty() || (k.degree() > 1 && assertion.is_empty()) {
        return Err(Error::RankAssertionMissing(format!(
            "curve {} has no rank assertion over {}",
            curve_q.label,
            k.label()
        )));
    }
    let stride = torsion
        .checked_mul(index_kq)
        .and_then(|t| t.checked_mul(r))
        .ok_or_else(|| Error::CapExceeded("stride overflows".into()))?;
    Ok(DivisionAmpleSet {
        source: Source::Eds(curve_q.clone()),
        field: k.clone(),
        ell: k.degree() as u64,
        stride,
        provenance: format!(
            "wd(x_n) on {} over Q, n in {}Z; rank over Q: {}; over {}: {}",
            curve_q.label,
            stride,
            curve_q.rank_assertion,
            k.label(),
            if assertion.is_empty() { "same field" } else { assertion }
        ),
    })
}

impl DivisionAmpleSet {
    pub fn explicit(field: &NumberField, elems: Vec<FieldElement>, ell: u64) -> Result<Self> {
        if elems.iter().any(|a| a.is_zero() || !a.is_integral()) {
            return Err(Error::NotIntegral);
        }
        Ok(DivisionAmpleSet {
            source: Source::Explicit(elems),
            field: field.clone(),
            ell,
            stride: 1,
            provenance: "explicit list".into(),
        })
    }

    /// Element at lattice index `n` (a multiple of the stride), as an
    /// element of K.
    pub fn element_at(&self, n: u64) -> Result<FieldElement> {
        match &self.source {
            Source::Eds(e) => {
                if n == 0 || !n.is_multiple_of(self.stride) {
                    return Err(Error::Unsupported(format!("index {n} is not in {}Z", self.stride)));
                }
                let den = match e.rational_model() {
                    Some(m) => m.x_denominator(n as i64),
                    None => match e.multiple(n as i64).x() {
                        Some(x) => x.as_rational().ok_or(Error::NotIntegral)?.denom().clone(),
                        None => return Err(Error::PointAtInfinity),
                    },
                };
                Ok(self.field.from_bigint(den))
            }
            Source::Explicit(v) => v
                .get(n as usize)
                .cloned()
                .ok_or_else(|| Error::CapExceeded(format!("explicit set has {} elements", v.len()))),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.label(),
            "ell": self.ell,
            "stride": self.stride,
            "provenance": self.provenance,
        })
    }
}

#[derive(Clone, Debug)]
pub struct DensityWitness {
    pub a: FieldElement,
    pub index: u64,
    /// The rational integer actually targeted (x itself, or |N(x)|).
    pub target: BigInt,
    /// (p, exponent needed, order n_p of the stride point mod p, extra power a).
    pub local: Vec<(u64, u64, u64, u32)>,
}

impl DensityWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "a_digits": crate::eds::approx_digits(&self.a.num()[0]),
            "index": self.index,
            "target": self.target.to_string(),
            "local": self.local.iter().map(|(p, need, np, a)| json!({"p": p, "needed": need, "n_p": np, "extra": a})).collect::<Vec<_>>(),
        })
    }
}

/// An element of A divisible by x. Non-rational x is replaced by |N(x)|,
/// which it divides. The index is the lcm over p | target of
/// stride * n_p * p^a, where n_p is the order of (stride)P mod p and p^a
/// pushes the valuation of the denominator high enough by the formal-group law.
pub fn density_witness(set: &DivisionAmpleSet, x: &FieldElement, cap: u64) -> Result<DensityWitness> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    let target = match x.as_integer() {
        Some(t) => t.abs(),
        None => x.norm().numer().abs(),
    };
    if let Source::Explicit(v) = &set.source {
        for (i, a) in v.iter().enumerate() {
            if crate::lemmas::divides(x, a)? {
                return Ok(DensityWitness { a: a.clone(), index: i as u64, target, local: Vec::new() });
            }
        }
        return Err(Error::CapExceeded("no explicit element is divisible by x".into()));
    }
    let Source::Eds(e) = &set.source else { unreachable!() };
    let s = set.stride;
    let base = e.multiple(s as i64);
    let q = NumberField::rationals();
    let mut index = s;
    let mut local = Vec::new();
    for (p, need) in arith::factor(&target) {
        let p = p.to_u64().ok_or_else(|| Error::CapExceeded("prime beyond u64".into()))?;
        let pr = factor_prime(&q, p)?.remove(0);
        let np = reduced_order(e, &base, &pr)?;
        let m = s.checked_mul(np).filter(|&m| m <= cap).ok_or_else(|| {
            Error::CapExceeded(format!("index for p = {p} exceeds cap {cap}"))
        })?;
        let xm = e.multiple(m as i64);
        let have = match xm.x() {
            Some(xv) => (-val(xv, &pr)?).max(0) as u64,
            None => return Err(Error::PointAtInfinity),
        };
        let need = need as u64;
        let a = if need > have { (need - have).div_ceil(2) as u32 } else { 0 };
        let step = (p as u128).pow(a) * m as u128;
        let next = arith::lcm_u64(index, u64::try_from(step).unwrap_or(u64::MAX));
        if step > cap as u128 || next > cap {
            return Err(Error::CapExceeded(format!("index for p = {p} exceeds cap {cap}")));
        }
        index = next;
        local.push((p, need, np, a));
    }
    let a = set.element_at(index)?;
    if !crate::lemmas::divides(&set.field.from_bigint(target.clone()), &a)? {
        return Err(Error::LemmaViolation(format!("{target} does not divide the element at index {index}")));
    }
    Ok(DensityWitness { a, index, target, local })
}

/// An integer a~ dividing a with |N(a)| <= |a~|^ell. For rational integers
/// a~ = a; otherwise the content of a's coordinates.
pub fn norm_bound_witness(a: &FieldElement, set: &DivisionAmpleSet) -> (BigInt, bool) {
    let at = match a.as_integer() {
        Some(t) => t,
        None => a.num().iter().fold(BigInt::zero(), |g, c| arith::gcd(&g, c)) / a.den(),
    };
    let n = a.norm().abs();
    let bound = at.abs().pow(set.ell as u32);
    let ok = !at.is_zero() && n.numer() <= &(bound * n.denom());
    (at, ok)
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditEntry {
    pub x: String,
    pub index: Option<u64>,
    pub digits: Option<u64>,
    pub norm_bound_ok: Option<bool>,
    pub error: Option<String>,
}

/// Density witnesses for each x, and norm-boundedness of each witness.
pub fn audit(set: &DivisionAmpleSet, xs: &[FieldElement], cap: u64) -> Vec<AuditEntry> {
    xs.iter()
        .map(|x| match density_witness(set, x, cap) {
            Ok(w) => {
                let ok = norm_bound_witness(&w.a, set).1;
                AuditEntry {
                    x: x.to_string(),
                    index: Some(w.index),
                    digits: w.a.as_integer().map(|t| crate::eds::approx_digits(&t)),
                    norm_bound_ok: Some(ok),
                    error: None,
                }
            }
            Err(err) => AuditEntry { x: x.to_string(), index: None, digits: None, norm_bound_ok: None, error: Some(err.to_string()) },
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusReport {
    pub sig_k: (usize, usize),
    pub sig_l: (usize, usize),
    pub sig_kl: (usize, usize),
    pub unit_rank_k: i64,
    pub unit_rank_l: i64,
    pub unit_rank_kl: i64,
    /// rk O*_KL - rk O*_K.
    pub rank_torus_ok: i64,
    /// rk O*_L.
    pub rank_torus_z: i64,
    /// r_KL + s_KL = r_K + s_K + r_L + s_L - 1.
    pub equation_holds: bool,
    pub equation_lhs: i64,
    pub equation_rhs: i64,
}

fn unit_rank(sig: (usize, usize)) -> i64 {
    sig.0 as i64 + sig.1 as i64 - 1
}

pub fn torus_rank_analysis(k: &NumberField, l: &NumberField, kl: &NumberField) -> Result<TorusReport> {
    if kl.degree() != k.degree() * l.degree() {
        return Err(Error::NotLinearlyDisjoint(format!(
            "[{}:Q] = {} but [{}:Q][{}:Q] = {}",
            kl.label(),
            kl.degree(),
            k.label(),
            l.label(),
            k.degree() * l.degree()
        )));
    }
    let (sk, sl, skl) = (k.signature(), l.signature(), kl.signature());
    let lhs = (skl.0 + skl.1) as i64;
    let rhs = (sk.0 + sk.1 + sl.0 + sl.1) as i64 - 1;
    Ok(TorusReport {
        sig_k: sk,
        sig_l: sl,
        sig_kl: skl,
        unit_rank_k: unit_rank(sk),
        unit_rank_l: unit_rank(sl),
        unit_rank_kl: unit_rank(skl),
        rank_torus_ok: unit_rank(skl) - unit_rank(sk),
        rank_torus_z: unit_rank(sl),
        equation_holds: lhs == rhs,
        equation_lhs: lhs,
        equation_rhs: rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    QuadraticImaginaryTorusWorks,
    TotallyRealRankZeroObstruction,
    DegreeObstruction,
    Unclassified,
}

/// Whether a norm-one torus can carry the construction over K.
pub fn strategy_classification(k: &NumberField) -> Strategy {
    let (r, s) = k.signature();
    if r == 0 && s == 1 {
        Strategy::QuadraticImaginaryTorusWorks
    } else if r == 0 {
        Strategy::DegreeObstruction
    } else if s == 0 {
        Strategy::TotallyRealRankZeroObstruction
    } else {
        Strategy::Unclassified
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::EllipticCurve;
    use num_integer::Integer;
    use num_traits::One;

    fn set37() -> DivisionAmpleSet {
        let q = NumberField::rationals();
        let e = EllipticCurve::from_i64("37a", &q, [0, 0, 1, -1, 0], (0, 0), "rank 1 over Q").unwrap();
        eds_divample_create(&e, &q, 1, 1, 44, None).unwrap()
    }

    #[test]
    fn density_witnesses_37a() {
        let a = set37();
        let q = NumberField::rationals();
        let w = density_witness(&a, &q.from_int(2), 100_000).unwrap();
        assert_eq!(w.local[0].2, 5);
        assert!(crate::lemmas::divides(&q.from_int(2), &w.a).unwrap());
        let w12 = density_witness(&a, &q.from_int(12), 100_000).unwrap();
        assert_eq!(w12.index % 44, 0);
        assert!(w12.a.as_integer().unwrap().is_multiple_of(&BigInt::from(12)));
        let w1 = density_witness(&a, &q.from_int(1), 100_000).unwrap();
        assert_eq!(w1.index, 44);
        assert!(matches!(density_witness(&a, &q.from_int(2), 50), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn rank_assertion_required() {
        let q = NumberField::rationals();
        let k = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
        let e = EllipticCurve::from_i64("37a", &q, [0, 0, 1, -1, 0], (0, 0), "rank 1 over Q").unwrap();
        assert!(matches!(eds_divample_create(&e, &k, 1, 1, 44, None), Err(Error::RankAssertionMissing(_))));
        let bare = EllipticCurve::from_i64("37a", &q, [0, 0, 1, -1, 0], (0, 0), "").unwrap();
        assert!(matches!(eds_divample_create(&bare, &q, 1, 1, 44, None), Err(Error::RankAssertionMissing(_))));
        let a = eds_divample_create(&e, &k, 1, 1, 44, Some("asserted")).unwrap();
        assert_eq!(a.ell, 2);
        assert!(a.element_at(44).unwrap().is_rational_integer());
    }

    #[test]
    fn norm_bounds() {
        let k = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
        let set = DivisionAmpleSet::explicit(&k, vec![k.from_int(4)], 2).unwrap();
        assert_eq!(norm_bound_witness(&k.from_int(4), &set), (BigInt::from(4), true));
        assert_eq!(norm_bound_witness(&k.from_int(1), &set), (BigInt::one(), true));
        let q = NumberField::rationals();
        let set = DivisionAmpleSet::explicit(&q, vec![q.from_int(12)], 1).unwrap();
        assert!(norm_bound_witness(&q.from_int(12), &set).1);
        // 1 + i has no rational divisor other than units, and norm 2 > 1.
        assert!(!norm_bound_witness(&k.from_i64_coords(&[1, 1]), &DivisionAmpleSet::explicit(&k, vec![], 2).unwrap()).1);
    }

    #[test]
    fn torus_ranks() {
        let k = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
        let l = NumberField::from_i64("sqrt2", &[-2, 0, 1], 1).unwrap();
        let kl = NumberField::from_i64("compositum", &[1, 0, 0, 0, 1], 1).unwrap();
        let t = torus_rank_analysis(&k, &l, &kl).unwrap();
        assert_eq!((t.sig_k, t.sig_l, t.sig_kl), ((0, 1), (2, 0), (0, 2)));
        assert_eq!((t.rank_torus_ok, t.rank_torus_z), (1, 1));
        assert!(t.equation_holds);
        assert!(matches!(torus_rank_analysis(&k, &l, &k), Err(Error::NotLinearlyDisjoint(_))));
        assert_eq!(strategy_classification(&k), Strategy::QuadraticImaginaryTorusWorks);
        assert_eq!(strategy_classification(&l), Strategy::TotallyRealRankZeroObstruction);
        let cube = NumberField::from_i64("cbrt2", &[-2, 0, 0, 1], 1).unwrap();
        assert_eq!(strategy_classification(&cube), Strategy::Unclassified);
        assert_eq!(strategy_classification(&kl), Strategy::DegreeObstruction);
    }
}
