use std::time::Instant;

use htp_core::config::{Workbench, WorkbenchConfig};
use htp_core::divample::{audit, eds_divample_create, torus_rank_analysis};
use htp_core::error::{Error, Result};
use htp_core::field::{FieldElement, NumberField};
use htp_core::htp::{dl_bound, dl_condition, integrality_verdict, parse_element, verify_witness, Verdict, Witness};
use htp_core::ideals::{factor_element, minkowski_bound, verify_class_number, weak_num_denom};
use htp_core::lemmas::{
    divisibility_multiplier, ec2_biconditional, eds_record, lemma_ec3_multiple, lemma_ec4_check, stability_multiplier,
    WD_CAP,
};
use htp_core::suite::run_suite;
use htp_core::torsion::torsion_order;
use serde_json::{json, Value};

use crate::report::Report;
use crate::{Cli, Command, CurveCmd, DivampleCmd, FieldCmd, HtpCmd, IdealCmd, LemmaCmd, TorusCmd};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success = 0,
    /// A bounded search or check came back negative.
    Negative = 2,
}

fn workbench(cli: &Cli) -> Result<Workbench> {
    let mut config = match &cli.config {
        Some(p) => WorkbenchConfig::load(p)?,
        None => WorkbenchConfig::builtin(),
    };
    if let Some(m) = cli.max_index {
        config.caps.max_index = m;
    }
    if let Some(p) = cli.precision {
        config.caps.precision_bits = p;
    }
    Workbench::new(config)
}

/// "3", "1,2", "-1/2,5" or a JSON list.
pub fn parse_arg(k: &NumberField, s: &str) -> Result<FieldElement> {
    let v: Value = if s.trim_start().starts_with('[') {
        serde_json::from_str(s).map_err(|e| Error::ConfigParse(e.to_string()))?
    } else {
        Value::Array(s.split(',').map(|c| Value::String(c.trim().to_string())).collect())
    };
    parse_element(k, &v)
}

fn coords(x: &FieldElement) -> Value {
    json!(x.to_string_coords())
}

pub fn run(cli: &Cli) -> Result<(Report, Outcome)> {
    let wb = workbench(cli)?;
    let start = Instant::now();
    let mut cap_flags = Vec::new();
    let mut outcome = Outcome::Success;
    let mut text = None;
    let (command, inputs, results) = match &cli.command {
        Command::Field(FieldCmd::Check { field, cap }) => {
            let k = wb.field(field)?;
            let ok = verify_class_number(k, *cap)?;
            if !ok {
                outcome = Outcome::Negative;
            }
            let poly: Vec<String> = k.min_poly().iter().map(|c| c.to_string()).collect();
            (
                "field check",
                json!({"field": field, "cap": cap}),
                json!({
                    "min_poly": poly,
                    "degree": k.degree(),
                    "signature": k.signature(),
                    "discriminant": k.discriminant().to_string(),
                    "maximal_order": true,
                    "minkowski_bound": minkowski_bound(k),
                    "class_number": k.class_number(),
                    "class_number_verified": ok,
                }),
            )
        }
        Command::Ideal(IdealCmd::Factor(a)) => {
            let k = wb.field(&a.field)?;
            let x = parse_arg(k, &a.x)?;
            ("ideal factor", json!({"field": a.field, "x": coords(&x)}), factor_element(&x)?.to_json())
        }
        Command::Ideal(IdealCmd::Wn(a)) => {
            let k = wb.field(&a.field)?;
            let x = parse_arg(k, &a.x)?;
            let (wn, wd) = weak_num_denom(&x, WD_CAP)?;
            ("ideal wn", json!({"field": a.field, "x": coords(&x)}), json!({"wn": coords(&wn), "wd": coords(&wd)}))
        }
        Command::Curve(CurveCmd::Eds { curve, max }) => {
            let e = wb.curve(curve)?;
            let rows: Vec<Value> =
                (1..=*max).map(|n| eds_record(e, n, &[]).map(|r| r.to_json())).collect::<Result<_>>()?;
            ("curve eds", json!({"curve": curve, "max": max}), Value::Array(rows))
        }
        Command::Lemma(cmd) => lemma(&wb, cmd, &mut outcome)?,
        Command::Divample(DivampleCmd::Check { curve, field, count, index, rank_assertion }) => {
            let e = wb.curve(curve)?;
            let k = wb.field(field)?;
            let r0 = stability_multiplier(e)?.r0;
            let r = divisibility_multiplier(e, r0, wb.config.caps.scan_cap)?.r;
            let t = torsion_order(e, wb.config.caps.torsion_cap)?;
            let set = eds_divample_create(e, k, t, *index, r, rank_assertion.as_deref())?;
            let xs: Vec<FieldElement> = (1..=*count).map(|x| k.from_int(x)).collect();
            let entries = audit(&set, &xs, wb.config.caps.max_index);
            for a in &entries {
                if let Some(err) = &a.error {
                    cap_flags.push(format!("x = {}: {err}", a.x));
                }
            }
            if entries.iter().any(|a| a.index.is_none() || a.norm_bound_ok != Some(true)) {
                outcome = Outcome::Negative;
            }
            (
                "divample check",
                json!({"curve": curve, "field": field, "count": count, "set": set.to_json()}),
                serde_json::to_value(&entries).unwrap(),
            )
        }
        Command::Torus(TorusCmd::Analyze { k, l, kl }) => {
            let t = torus_rank_analysis(wb.field(k)?, wb.field(l)?, wb.field(kl)?)?;
            ("torus analyze", json!({"K": k, "L": l, "KL": kl}), serde_json::to_value(&t).unwrap())
        }
        Command::Htp(HtpCmd::Witness { field, xi, out }) => {
            let setup = wb.htp_setup(field)?;
            let x = parse_arg(setup.field(), xi)?;
            let results = match integrality_verdict(&setup, &x)? {
                Verdict::IntegerCertified(w) => {
                    let mut j = w.to_json();
                    j["field"] = json!(field);
                    if let Some(p) = out {
                        std::fs::write(p, serde_json::to_string_pretty(&j).unwrap())
                            .map_err(|e| Error::Unknown(format!("{}: {e}", p.display())))?;
                    }
                    json!({"verdict": "IntegerCertified", "witness": j})
                }
                Verdict::NoWitnessWithinCaps(flags) => {
                    outcome = Outcome::Negative;
                    cap_flags.extend(flags);
                    json!({"verdict": "NoWitnessWithinCaps"})
                }
            };
            ("htp witness", json!({"field": field, "xi": coords(&x), "lattice": setup.lattice()}), results)
        }
        Command::Htp(HtpCmd::Verify { witness, field }) => {
            let text = std::fs::read_to_string(witness)
                .map_err(|e| Error::ConfigParse(format!("{}: {e}", witness.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::ConfigParse(e.to_string()))?;
            let label = match field {
                Some(f) => f.clone(),
                None => v.get("field").and_then(Value::as_str).unwrap_or("rationals").to_string(),
            };
            let setup = wb.htp_setup(&label)?;
            let w = Witness::from_json(setup.field(), &v)?;
            let trace = verify_witness(&setup, &Witness { trace: None, ..w })?;
            if !trace.verdict {
                outcome = Outcome::Negative;
            }
            (
                "htp verify",
                json!({"witness": witness.display().to_string(), "field": label}),
                serde_json::to_value(&trace).unwrap(),
            )
        }
        Command::Suite { only } => {
            let results = run_suite(&wb, only, cli.jobs);
            if results.iter().any(|r| !r.passed) {
                outcome = Outcome::Negative;
            }
            text = Some(results.iter().map(|r| format!("  {}\n", r.line())).collect());
            let rows: Vec<Value> = results
                .iter()
                .map(|r| {
                    let failed: Vec<&str> =
                        r.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
                    json!({
                        "criterion": r.id,
                        "title": r.title,
                        "status": if r.passed { "PASS" } else { "FAIL" },
                        "failed_checks": failed.join("; "),
                        "error": r.error.clone().unwrap_or_default(),
                    })
                })
                .collect();
            ("suite", json!({"only": only, "jobs": cli.jobs}), Value::Array(rows))
        }
    };
    let report = Report { command: command.to_string(), inputs, results, timing: start.elapsed(), cap_flags, text };
    Ok((report, outcome))
}

fn lemma(wb: &Workbench, cmd: &LemmaCmd, outcome: &mut Outcome) -> Result<(&'static str, Value, Value)> {
    Ok(match cmd {
        LemmaCmd::Ec2 { curve, max } => {
            let e = wb.curve(curve)?;
            let st = stability_multiplier(e)?;
            let dm = divisibility_multiplier(e, st.r0, wb.config.caps.scan_cap)?;
            let rep = ec2_biconditional(e, dm.r, *max)?;
            if !rep.violations.is_empty() {
                *outcome = Outcome::Negative;
            }
            (
                "lemma ec2",
                json!({"curve": curve, "max": max}),
                json!({"stability": st.to_json(), "divisibility": dm.to_json(), "biconditional": rep.to_json()}),
            )
        }
        LemmaCmd::Ec3 { curve, xi } => {
            let e = wb.curve(curve)?;
            let x = parse_arg(e.field(), xi)?;
            let r0 = stability_multiplier(e)?.r0;
            let rep = lemma_ec3_multiple(e, &x, r0)?;
            if !rep.verified {
                *outcome = Outcome::Negative;
            }
            ("lemma ec3", json!({"curve": curve, "xi": coords(&x)}), rep.to_json())
        }
        LemmaCmd::Ec4 { curve, m, n } => {
            let rep = lemma_ec4_check(wb.curve(curve)?, *m, *n)?;
            if !rep.holds {
                *outcome = Outcome::Negative;
            }
            ("lemma ec4", json!({"curve": curve, "m": m, "n": n}), rep.to_json())
        }
        LemmaCmd::Dl { field, xi, u, ell } => {
            let k = wb.field(field)?;
            let (x, u) = (parse_arg(k, xi)?, parse_arg(k, u)?);
            let cond = dl_condition(&x, &u, *ell, k.degree())?;
            let bound = dl_bound(&x, &u, *ell, k.degree(), wb.config.caps.precision_bits)?;
            if !(cond && bound) {
                *outcome = Outcome::Negative;
            }
            (
                "lemma dl",
                json!({"field": field, "xi": coords(&x), "u": coords(&u), "ell": ell}),
                json!({"divisibility": cond, "archimedean_bound": bound}),
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_arguments() {
        let k = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
        let a = parse_arg(&k, "1/2,-3").unwrap();
        assert_eq!(a, parse_arg(&k, "[\"1/2\", -3]").unwrap());
        assert_eq!(parse_arg(&k, "5").unwrap(), k.from_int(5));
        assert!(parse_arg(&k, "1,2,3").is_err());
        assert!(parse_arg(&k, "x").is_err());
    }
}
