//! JSON form of a decision, and a checker that re-verifies its claims from
//! the JSON alone.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::{alg_json, ClassifyError, Decision, QhmParams, Verdict};
use crate::cf2::{gl2_act, gl3_act, serret_equivalent, Gl2, Gl3, SerretResult};
use crate::exactnum::{common_field, AlgebraicReal, ZPoly};
use crate::lattice::{lattice_equal, rank2_basis_of, trace_group_in};

use super::{scaled_group_equal, Budget, ScalingOutcome};

pub const EQUIVALENT_LABEL: &str = "Morita equivalent (trace groups agree up to a positive scalar)";

fn params_json(p: &QhmParams) -> Value {
    json!({ "c": p.c.to_string(), "mu": alg_json(&p.mu), "nu": alg_json(&p.nu) })
}

pub fn decision_to_json(d: &Decision) -> Value {
    let mut out = json!({
        "params": [params_json(&d.params[0]), params_json(&d.params[1])],
        "verdict": d.verdict.kind(),
        "rank": d.rank(),
        "ranks": d.ranks,
        "r": Value::Null,
        "context": d.context.as_ref().map(|c| json!({
            "degree": c.degree(),
            "minpoly": c.minpoly().coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "theta": alg_json(c.theta()),
        })),
        "gl3": Value::Null,
        "gl2": Value::Null,
        "trace": d.trace.iter().map(|s| json!({ "rule": s.rule, "data": s.data })).collect::<Vec<_>>(),
        "certificate": Value::Null,
        "scaling_dim": d.scaling_dim,
        "diagnostics": d.diagnostics,
        "budget": d.budget.to_json(),
    });
    match &d.verdict {
        Verdict::Equivalent { r, r_coords, gl3, gl2 } => {
            let mut rj = alg_json(r);
            rj["coords"] = json!(r_coords.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            out["r"] = rj;
            out["label"] = json!(EQUIVALENT_LABEL);
            if let Some(m) = gl3 {
                out["gl3"] = json!(m.to_strings());
            }
            if let Some(w) = gl2 {
                out["gl2"] = json!({ "matrix": w.matrix.to_strings(), "x": alg_json(&w.x), "y": alg_json(&w.y) });
            }
        }
        Verdict::NotEquivalent(c) => {
            out["certificate"] = json!({ "kind": c.kind(), "values": c.values() });
        }
        Verdict::Unknown { reason } => {
            out["reason"] = json!(reason);
        }
    }
    out
}

fn bad(msg: impl Into<String>) -> ClassifyError {
    ClassifyError::Witness(msg.into())
}

fn str_of<'a>(v: &'a Value, what: &str) -> Result<&'a str, ClassifyError> {
    v.as_str().ok_or_else(|| bad(format!("{} is not a string", what)))
}

fn rat(v: &Value, what: &str) -> Result<BigRational, ClassifyError> {
    BigRational::from_str(str_of(v, what)?).map_err(|_| bad(format!("{} is not a rational", what)))
}

pub fn alg_from_json(v: &Value) -> Result<AlgebraicReal, ClassifyError> {
    let coeffs = v["minpoly"]
        .as_array()
        .ok_or_else(|| bad("minpoly missing"))?
        .iter()
        .map(|c| BigInt::from_str(str_of(c, "coefficient")?).map_err(|_| bad("bad coefficient")))
        .collect::<Result<Vec<_>, _>>()?;
    let lo = rat(&v["interval"][0], "interval")?;
    let hi = rat(&v["interval"][1], "interval")?;
    let a = AlgebraicReal::from_root(&ZPoly::new(coeffs), &lo, &hi)?;
    Ok(a)
}

fn params_from_json(v: &Value) -> Result<QhmParams, ClassifyError> {
    let c: u64 = str_of(&v["c"], "c")?.parse().map_err(|_| bad("c is not an integer"))?;
    QhmParams::new(c, alg_from_json(&v["mu"])?, alg_from_json(&v["nu"])?)
}

fn matrix_rows(v: &Value) -> Result<Vec<Vec<String>>, ClassifyError> {
    v.as_array()
        .ok_or_else(|| bad("matrix is not an array"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad("matrix row is not an array"))?
                .iter()
                .map(|x| str_of(x, "matrix entry").map(str::to_string))
                .collect()
        })
        .collect()
}

/// Re-derive every claim in a witness. Returns the list of checks passed.
pub fn check_witness(w: &Value) -> Result<Vec<String>, ClassifyError> {
    let p = params_from_json(&w["params"][0])?;
    let p2 = params_from_json(&w["params"][1])?;
    let mut passed = Vec::new();
    match str_of(&w["verdict"], "verdict")? {
        "Equivalent" => {
            if p.c != p2.c {
                return Err(bad("equivalence claimed for different c"));
            }
            let r = alg_from_json(&w["r"])?;
            if r.sign() <= 0 {
                return Err(bad("r is not positive"));
            }
            let (ctx, cs) = common_field(&[p.mu.clone(), p.nu.clone(), p2.mu.clone(), p2.nu.clone(), r.clone()])?;
            let g = trace_group_in(&ctx, &cs[0], &cs[1], &p.mu, &p.nu);
            let g2 = trace_group_in(&ctx, &cs[2], &cs[3], &p2.mu, &p2.nu);
            if !lattice_equal(&g.lattice, &g2.lattice.scale(&cs[4])?)? {
                return Err(bad("G differs from r G'"));
            }
            passed.push("G = r G'".to_string());
            if !w["gl3"].is_null() {
                let m = Gl3::from_strings(&matrix_rows(&w["gl3"])?).map_err(|e| bad(e.to_string()))?;
                if gl3_act(&m, &p.mu, &p.nu)? != (p2.mu.clone(), p2.nu.clone()) {
                    return Err(bad("gl3 witness does not map the parameters"));
                }
                passed.push("gl3 maps (mu, nu) to (mu', nu')".to_string());
            }
            if !w["gl2"].is_null() {
                let m = Gl2::from_strings(&matrix_rows(&w["gl2"]["matrix"])?).map_err(|e| bad(e.to_string()))?;
                let x = alg_from_json(&w["gl2"]["x"])?;
                let y = alg_from_json(&w["gl2"]["y"])?;
                if gl2_act(&m, &x)? != y {
                    return Err(bad("gl2 witness does not map x to y"));
                }
                passed.push("gl2 maps x to y".to_string());
            }
        }
        "NotEquivalent" => {
            let kind = str_of(&w["certificate"]["kind"], "certificate kind")?;
            match kind {
                "CMismatch" => {
                    if p.c == p2.c {
                        return Err(bad("c values agree"));
                    }
                }
                _ => {
                    if p.c != p2.c {
                        return Err(bad("c mismatch not reported as such"));
                    }
                    let (ctx, cs) = common_field(&[p.mu.clone(), p.nu.clone(), p2.mu.clone(), p2.nu.clone()])?;
                    let g = trace_group_in(&ctx, &cs[0], &cs[1], &p.mu, &p.nu);
                    let g2 = trace_group_in(&ctx, &cs[2], &cs[3], &p2.mu, &p2.nu);
                    match kind {
                        "RankMismatch" => {
                            if g.rank() == g2.rank() {
                                return Err(bad("ranks agree"));
                            }
                        }
                        "NoScaling" => {
                            if g.rank() != g2.rank() {
                                return Err(bad("ranks differ; wrong certificate"));
                            }
                            let zero = Budget { height_bound: 0, ..Budget::default() };
                            let out = scaled_group_equal(&g, &g2, &zero);
                            if !matches!(out, ScalingOutcome::None { .. }) {
                                return Err(bad("scaling equation has admissible solutions"));
                            }
                        }
                        "CFInequivalent" => {
                            if g.rank() != 2 || g2.rank() != 2 {
                                return Err(bad("continued-fraction certificate needs rank 2"));
                            }
                            let b = rank2_basis_of(&g.lattice)?;
                            let b2 = rank2_basis_of(&g2.lattice)?;
                            let x = b.alpha.mul_rational(&BigRational::from_integer(b.q));
                            let y = b2.alpha.mul_rational(&BigRational::from_integer(b2.q));
                            if !matches!(serret_equivalent(&x, &y, 64), SerretResult::NotEquivalent(_)) {
                                return Err(bad("continued fractions do not separate the generators"));
                            }
                        }
                        other => return Err(bad(format!("unknown certificate kind {}", other))),
                    }
                }
            }
            passed.push(format!("certificate {} re-derived", kind));
        }
        "Unknown" => passed.push("nothing claimed".to_string()),
        other => return Err(bad(format!("unknown verdict {}", other))),
    }
    Ok(passed)
}
