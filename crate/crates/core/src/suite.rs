//! The acceptance matrix: one self-contained check per criterion, shared by
//! the `acceptance` test target and `htp-lab suite`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Workbench;
use crate::curve::Curve;
use crate::divample::{audit, eds_divample_create, strategy_classification, torus_rank_analysis, Strategy};
use crate::error::Result;
use crate::field::{FieldElement, NumberField};
use crate::htp::{descent_bruteforce, dl_product, find_witness, integrality_verdict, verify_witness, Verdict, Witness};
use crate::ideals::{factor_element, factor_prime, is_unit, verify_class_number, weak_num_denom};
use crate::lemmas::{
    divisibility_multiplier, ec2_biconditional, formal_group_check, lemma_ec3_multiple, lemma_ec4_check,
    stability_multiplier, val,
};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<(String, bool)>,
    pub detail: Value,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
    pub error: Option<String>,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let failed: Vec<&str> = self.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
        let mut s = format!(
            "criterion {:>2} [{}] {} ({:.1}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64()
        );
        if let Some(e) = &self.error {
            s.push_str(&format!(": error: {e}"));
        } else if !failed.is_empty() {
            s.push_str(&format!(": failed checks: {}", failed.join("; ")));
        }
        s
    }

    /// Whether the named sub-check passed.
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(n, _)| n == name).map(|(_, ok)| *ok)
    }
}

pub const TITLES: [&str; 11] = [
    "weak numerator valuation law in Q(sqrt(-5))",
    "class number verification",
    "formal-group valuation law on 37a",
    "divisibility biconditional with r = r0 M0",
    "constructive multiples for xi in {2, 3, 12}",
    "quotient congruence for divisor pairs n <= 12",
    "descent brute force over Q(i)",
    "completeness: witnesses over Q and Q(i)",
    "soundness: descent chains and the Q(i) box probe",
    "norm-one torus ranks and strategy classification",
    "division-ample audit on 50 elements",
];

type Checks = Vec<(String, bool)>;

fn run(id: u32, f: impl FnOnce(&mut Checks) -> Result<Value>) -> CriterionResult {
    let t = Instant::now();
    let mut checks = Vec::new();
    let out = f(&mut checks);
    let elapsed = t.elapsed();
    let (detail, error) = match out {
        Ok(v) => (v, None),
        Err(e) => (Value::Null, Some(e.to_string())),
    };
    let passed = error.is_none() && !checks.is_empty() && checks.iter().all(|(_, ok)| *ok);
    CriterionResult { id, title: TITLES[id as usize - 1], passed, checks, detail, elapsed, error }
}

fn check(c: &mut Checks, name: impl Into<String>, ok: bool) {
    c.push((name.into(), ok));
}

/// 200 deterministic elements (a + b t)/d of a quadratic field.
pub fn sample_elements(k: &NumberField, count: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(count);
    let mut i: i64 = 0;
    while out.len() < count {
        i += 1;
        let a = (i * 37) % 41 - 20;
        let b = (i * 53) % 29 - 14;
        let d = 1 + (i * 7) % 6;
        let x = k.from_i64_coords(&[a, b]).div_int(&BigInt::from(d));
        if !x.is_zero() {
            out.push(x);
        }
    }
    out
}

pub fn criterion1(wb: &Workbench) -> CriterionResult {
    run(1, |c| {
        let k = wb.field("sqrtm5")?;
        let h = k.class_number() as i64;
        let mut violations = Vec::new();
        let mut primes_checked = 0usize;
        for x in sample_elements(k, 200) {
            let (wn, wd) = weak_num_denom(&x, 64)?;
            let mut primes = BTreeSet::new();
            for y in [&x, &wn, &wd] {
                primes.extend(factor_element(y)?.factors.into_keys());
            }
            for pr in primes {
                primes_checked += 1;
                let v = val(&x, &pr)?;
                let (vn, vd) = (val(&wn, &pr)?, val(&wd, &pr)?);
                if vn != h * v.max(0) || vd != -h * v.min(0) {
                    violations.push(format!("x = {x}, {pr}: v = {v}, v(wn) = {vn}, v(wd) = {vd}"));
                }
            }
        }
        check(c, "valuation identities on 200 elements", violations.is_empty());
        let x = k.from_i64_coords(&[1, 1]).div_int(&BigInt::from(2));
        let (wn, wd) = weak_num_denom(&x, 64)?;
        let target = k.from_i64_coords(&[-2, 1]);
        let unit_ratio = |a: &FieldElement, b: &FieldElement| a.try_div(b).map(|q| is_unit(&q)).unwrap_or(false);
        check(c, "wn((1+sqrt(-5))/2) = -2+sqrt(-5) up to units", unit_ratio(&wn, &target));
        check(c, "wd((1+sqrt(-5))/2) = 2 up to units", unit_ratio(&wd, &k.from_int(2)));
        Ok(json!({
            "primes_checked": primes_checked,
            "violations": violations,
            "wn": wn.to_string(),
            "wd": wd.to_string(),
        }))
    })
}

pub fn criterion2(wb: &Workbench) -> CriterionResult {
    run(2, |c| {
        let cap = 8;
        let gauss = wb.field("gauss")?;
        let k5 = wb.field("sqrtm5")?;
        let cube = wb.field("cbrt2")?;
        check(c, "accepts (Q(i), 1)", verify_class_number(gauss, cap)?);
        check(c, "accepts (Q(sqrt(-5)), 2)", verify_class_number(k5, cap)?);
        check(c, "accepts (Q(cbrt(2)), 1)", verify_class_number(cube, cap)?);
        check(c, "rejects (Q(sqrt(-5)), 1)", !verify_class_number(&k5.with_class_number(1)?, cap)?);
        Ok(json!({}))
    })
}

fn curve37(wb: &Workbench) -> Result<&Curve> {
    wb.curve("37a")
}

pub fn criterion3(wb: &Workbench) -> CriterionResult {
    run(3, |c| {
        let e = curve37(wb)?;
        let rep = formal_group_check(e, 12, 5)?;
        check(c, "v(x_mt) = v(x_m) - 2 v(t) for m <= 12, t <= 5", rep.checked > 0 && rep.violations.is_empty());
        let p2 = factor_prime(e.field(), 2)?.remove(0);
        let v5 = val(e.multiple(5).x().unwrap(), &p2)?;
        let v10 = val(e.multiple(10).x().unwrap(), &p2)?;
        check(c, "v2(x_5) = -2", v5 == -2);
        check(c, "v2(x_10) = -4", v10 == -4);
        Ok(rep.to_json())
    })
}

pub fn criterion4(wb: &Workbench) -> CriterionResult {
    run(4, |c| {
        let e = curve37(wb)?;
        let st = stability_multiplier(e)?;
        check(c, "r0 = 4 from disc = 37", st.r0 == 4);
        let dm = divisibility_multiplier(e, st.r0, wb.config.caps.scan_cap)?;
        let rep = ec2_biconditional(e, dm.r, 8)?;
        check(c, "m | n iff wd(x_rm) | wd(x_rn) for m, n <= 8", rep.checked == 64 && rep.violations.is_empty());
        Ok(json!({"stability": st.to_json(), "divisibility": dm.to_json(), "biconditional": rep.to_json()}))
    })
}

pub fn criterion5(wb: &Workbench) -> CriterionResult {
    run(5, |c| {
        let e = curve37(wb)?;
        let q = e.field();
        let n2 = e.reduce_at(&factor_prime(q, 2)?[0])?.count_points();
        let n3 = e.reduce_at(&factor_prime(q, 3)?[0])?.count_points();
        check(c, "#E(F_2) = 5", n2 == 5);
        check(c, "#E(F_3) = 7", n3 == 7);
        let r0 = stability_multiplier(e)?.r0;
        let mut reps = Vec::new();
        for xi in [2, 3, 12] {
            let rep = lemma_ec3_multiple(e, &q.from_int(xi), r0)?;
            check(c, format!("{xi} | wd(x_n) at n = {}", rep.n), rep.verified);
            reps.push(rep.to_json());
        }
        Ok(json!(reps))
    })
}

pub fn criterion6(wb: &Workbench) -> CriterionResult {
    run(6, |c| {
        let e = curve37(wb)?;
        let mut exceptions = Vec::new();
        let mut checked = 0;
        let mut degenerate = 0;
        for n in 1..=12i64 {
            for m in (1..=n).filter(|m| n % m == 0) {
                match lemma_ec4_check(e, m, n) {
                    Ok(r) => {
                        checked += 1;
                        if !r.holds {
                            exceptions.push(format!("(m, n) = ({m}, {n})"));
                        }
                    }
                    Err(crate::error::Error::TorsionDegenerate(_)) => degenerate += 1,
                    Err(err) => return Err(err),
                }
            }
        }
        check(c, "wd(x_m) | wn(x_n y_m/(y_n x_m) - n/m) on all pairs", checked > 0 && exceptions.is_empty());
        Ok(json!({"checked": checked, "degenerate_skipped": degenerate, "exceptions": exceptions}))
    })
}

pub fn criterion7(wb: &Workbench) -> CriterionResult {
    run(7, |c| {
        let k = wb.field("gauss")?;
        let rep = descent_bruteforce(k, 10, 10, 7, wb.config.caps.precision_bits)?;
        check(c, "every xi passing both hypotheses is in Z", rep.passing_non_integers == 0);
        check(c, "the grid is non-trivial", rep.passing > 0);
        Ok(serde_json::to_value(&rep).unwrap_or(Value::Null))
    })
}

fn all_true(w: &Witness) -> bool {
    w.trace.as_ref().is_some_and(|t| t.verdict && t.conditions.iter().all(|c| *c == Some(true)))
}

pub fn criterion8(wb: &Workbench) -> CriterionResult {
    run(8, |c| {
        let mut out = Vec::new();
        let sq = wb.htp_setup("rationals")?;
        let q = sq.field().clone();
        for xi in [1, 2, 3] {
            let x = q.from_int(xi);
            check(c, format!("product over Q is 4 xi for xi = {xi}"), dl_product(&x, sq.set.ell, 1)? == q.from_int(4 * xi));
            let found = find_witness(&sq, &x)?;
            let ok = match &found.witness {
                Some(w) => {
                    let re = verify_witness(&sq, &Witness { trace: None, ..w.clone() })?;
                    all_true(w) && re.verdict
                }
                None => false,
            };
            check(c, format!("witness over Q for xi = {xi}"), ok);
            out.push(json!({"field": "rationals", "xi": xi, "m": found.witness.as_ref().map(|w| w.m), "n": found.witness.as_ref().map(|w| w.n), "cap_flags": found.cap_flags}));
        }
        let sg = wb.htp_setup("gauss")?;
        let k = sg.field().clone();
        let one = k.one();
        check(c, "product over Q(i) is 32 for xi = 1", dl_product(&one, sg.set.ell, 2)? == k.from_int(32));
        let found = find_witness(&sg, &one)?;
        let ok = match &found.witness {
            Some(w) => {
                let re = verify_witness(&sg, &Witness { trace: None, ..w.clone() })?;
                all_true(w) && re.verdict && crate::lemmas::divides(&k.from_int(32), &w.u)?
            }
            None => false,
        };
        check(c, "witness over Q(i) for xi = 1", ok);
        out.push(json!({"field": "gauss", "xi": 1, "m": found.witness.as_ref().map(|w| w.m), "n": found.witness.as_ref().map(|w| w.n), "cap_flags": found.cap_flags}));
        Ok(json!(out))
    })
}

pub fn criterion9(wb: &Workbench) -> CriterionResult {
    run(9, |c| {
        let sg = wb.htp_setup("gauss")?;
        let k = sg.field().clone();
        let mut certified = Vec::new();
        let mut uncertified_integers = Vec::new();
        let mut false_certificates = Vec::new();
        let mut chains_ok = true;
        let mut rows = Vec::new();
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                let xi = k.from_i64_coords(&[a, b]);
                let v = integrality_verdict(&sg, &xi)?;
                match &v {
                    Verdict::IntegerCertified(w) => {
                        certified.push(xi.to_string());
                        if b != 0 {
                            false_certificates.push(xi.to_string());
                        }
                        // Independent re-verification of the whole chain.
                        let re = verify_witness(&sg, &Witness { trace: None, ..(**w).clone() })?;
                        chains_ok &= re.verdict && (re.zero_case || re.chain.is_some());
                    }
                    Verdict::NoWitnessWithinCaps(flags) => {
                        if b == 0 {
                            uncertified_integers.push(json!({"xi": a, "cap_flags": flags}));
                        }
                    }
                }
                rows.push(json!({"a": a, "b": b, "certified": v.is_certified()}));
            }
        }
        check(c, "zero false certificates", false_certificates.is_empty());
        check(c, "every certificate's descent chain re-verifies", chains_ok);
        check(c, "every rational integer in the box is certified", uncertified_integers.is_empty());
        Ok(json!({
            "certified": certified,
            "false_certificates": false_certificates,
            "uncertified_integers": uncertified_integers,
            "max_index": sg.caps.max_index,
        }))
    })
}

pub fn criterion10(wb: &Workbench) -> CriterionResult {
    run(10, |c| {
        let (k, l, kl) = (wb.field("gauss")?, wb.field("sqrt2")?, wb.field("compositum")?);
        let t = torus_rank_analysis(k, l, kl)?;
        check(c, "rk T_L(O_K) = 1", t.rank_torus_ok == 1);
        check(c, "rk T_L(Z) = 1", t.rank_torus_z == 1);
        check(c, "rank equation 2 = 2", t.equation_holds && t.equation_lhs == 2);
        check(c, "Q(i) works", strategy_classification(k) == Strategy::QuadraticImaginaryTorusWorks);
        check(c, "Q(sqrt(2)) rank-zero obstruction", strategy_classification(l) == Strategy::TotallyRealRankZeroObstruction);
        Ok(serde_json::to_value(&t).unwrap_or(Value::Null))
    })
}

pub fn criterion11(wb: &Workbench) -> CriterionResult {
    run(11, |c| {
        let e = curve37(wb)?;
        let q = e.field().clone();
        let r0 = stability_multiplier(e)?.r0;
        let dm = divisibility_multiplier(e, r0, wb.config.caps.scan_cap)?;
        let t = crate::torsion::torsion_order(e, wb.config.caps.torsion_cap)?;
        let set = eds_divample_create(e, &q, t, 1, dm.r, None)?;
        let xs: Vec<FieldElement> = (1..=50).map(|x| q.from_int(x)).collect();
        let entries = audit(&set, &xs, wb.config.caps.max_index);
        let dens = entries.iter().all(|a| a.index.is_some());
        let nb = entries.iter().all(|a| a.norm_bound_ok == Some(true));
        check(c, "density witnesses for x = 1..50 within caps", dens);
        check(c, "norm bound with a~ = a, ell = n", nb);
        let worst = entries.iter().filter_map(|a| a.index).max();
        Ok(json!({"stride": set.stride, "worst_index": worst, "entries": entries}))
    })
}

pub type CriterionFn = fn(&Workbench) -> CriterionResult;

pub const CRITERIA: [CriterionFn; 11] = [
    criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8, criterion9,
    criterion10, criterion11,
];

/// Run the selected criteria (all when empty) on up to `jobs` threads,
/// returning results in criterion order.
pub fn run_suite(wb: &Workbench, only: &[u32], jobs: usize) -> Vec<CriterionResult> {
    let ids: Vec<u32> = if only.is_empty() { (1..=11).collect() } else { only.to_vec() };
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                let Some(&id) = ids.get(i) else { break };
                let r = CRITERIA[id as usize - 1](wb);
                results.lock().unwrap().push(r);
            });
        }
    });
    let mut v = results.into_inner().unwrap();
    v.sort_by_key(|r| r.id);
    v
}
