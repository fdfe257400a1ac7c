use entwit_core::criteria::{ppt_check, reduction_check};
use entwit_core::distill::{distill_search, example4_check};
use entwit_core::par::{self, Execution};
use entwit_core::qstate::haar_random_unitary;
use entwit_core::search::{max_violation, SearchConfig};
use entwit_core::witness::{evaluate_witness_weighted, qutrit_inequality_sides, Weighting};
use entwit_core::zoo::{self, FamilyParams};
use entwit_core::{rng, CMatrix, DensityMatrix};
use serde_json::{json, Value};

use crate::args::{DistillArgs, EvalArgs, Format, GlobalArgs, MaxViolationArgs, Scaling, ScanArgs, StateArgs};
use crate::io::{
    fmt_num, input_err, parse_grid, parse_scalar, read_frame, read_state, rect_file, round15, square_file,
    CliError, CliResult,
};

pub fn weighting(g: &GlobalArgs) -> Weighting {
    match g.scaling {
        Scaling::Standard => Weighting::Standard,
        Scaling::Tight => Weighting::ProductTight,
    }
}

fn scaling_tag(g: &GlobalArgs) -> &'static str {
    match g.scaling {
        Scaling::Standard => "standard",
        Scaling::Tight => "tight",
    }
}

pub fn search_config(g: &GlobalArgs) -> SearchConfig {
    SearchConfig {
        restarts: g.restarts,
        tol: g.tol,
        seed: g.seed,
        weighting: weighting(g),
        ..SearchConfig::default()
    }
}

fn require<T: Copy>(v: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.ok_or_else(|| input_err(format!("family {family} needs --{flag}")))
}

fn scalar(v: &Option<String>, flag: &str, family: &str) -> CliResult<f64> {
    let s = v
        .as_deref()
        .ok_or_else(|| input_err(format!("family {family} needs --{flag}")))?;
    parse_scalar(s, flag)
}

/// Family parameters with the swept value (if any) overridden by `value`.
fn family_params(s: &StateArgs, seed: u64, value: Option<f64>) -> CliResult<FamilyParams> {
    let family = s
        .family
        .as_deref()
        .ok_or_else(|| input_err("give a state with --family or --input"))?;
    let pick = |flag: &Option<String>, name: &str| match value {
        Some(v) => Ok(v),
        None => scalar(flag, name, family),
    };
    Ok(match family {
        "horodecki" => FamilyParams::Horodecki {
            alpha: pick(&s.alpha, "alpha")?,
        },
        "isotropic" => FamilyParams::Isotropic {
            n: require(s.n, "n", family)?,
            f: pick(&s.f, "f")?,
        },
        "werner" => FamilyParams::Werner {
            n: require(s.n, "n", family)?,
            f: pick(&s.f, "f")?,
        },
        "example4" => FamilyParams::Example4 { p: pick(&s.p, "p")? },
        "max_entangled" => FamilyParams::MaxEntangled {
            n: require(s.n, "n", family)?,
        },
        "product" => FamilyParams::Product {
            m: require(s.m, "m", family)?,
            n: require(s.n, "n", family)?,
        },
        "random_mixture" => {
            let m = require(s.m, "m", family)?;
            let n = require(s.n, "n", family)?;
            FamilyParams::RandomMixture {
                m,
                n,
                k: s.k.unwrap_or(m * n),
                seed,
            }
        }
        other => return Err(input_err(format!("unknown family `{other}`"))),
    })
}

pub fn resolve_state(s: &StateArgs, seed: u64) -> CliResult<DensityMatrix> {
    match &s.input {
        Some(path) => read_state(path),
        None => Ok(family_params(s, seed, None)?.build()?),
    }
}

fn dims_json(rho: &DensityMatrix) -> Value {
    json!([rho.dims().m(), rho.dims().n()])
}

fn finite(x: f64, what: &str) -> CliResult<f64> {
    if x.is_finite() {
        Ok(round15(x))
    } else {
        Err(CliError::Numeric(format!("{what} is not finite")))
    }
}

fn eval_json(e: &entwit_core::WitnessEvaluation) -> CliResult<Value> {
    Ok(json!({
        "h": finite(e.h_val, "h")?,
        "p": finite(e.p_val, "p")?,
        "q": finite(e.q_val, "q")?,
        "w": finite(e.w_val, "w")?,
        "violated": e.violated,
    }))
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn json_only(g: &GlobalArgs, cmd: &str) -> CliResult<()> {
    match g.format {
        Some(Format::Csv) => Err(input_err(format!("{cmd} writes JSON only"))),
        _ => Ok(()),
    }
}

pub fn cmd_eval(a: &EvalArgs, g: &GlobalArgs) -> CliResult<String> {
    let rho = resolve_state(&a.state, g.seed)?;
    let (m, n) = (rho.dims().m(), rho.dims().n());
    let (u, v, frame) = if let Some(path) = &a.unitaries {
        let (u, v) = read_frame(path)?;
        (u, v, "file")
    } else if a.random_frame {
        let mut r = rng::root(g.seed);
        let u = haar_random_unitary(m, &mut r);
        let v = haar_random_unitary(n, &mut r);
        (u, v, "random")
    } else {
        (CMatrix::identity(m, m), CMatrix::identity(n, n), "identity")
    };
    let e = evaluate_witness_weighted(&rho, &u, &v, weighting(g))?;
    let eq8 = if a.eq8 {
        let s = qutrit_inequality_sides(&rho)?;
        Some((s.lhs, s.rhs, s.violated()))
    } else {
        None
    };
    match g.format {
        Some(Format::Csv) => {
            let mut header = vec!["m", "n", "h", "p", "q", "w", "violated"];
            let mut row = vec![
                m.to_string(),
                n.to_string(),
                fmt_num(e.h_val),
                fmt_num(e.p_val),
                fmt_num(e.q_val),
                fmt_num(e.w_val),
                e.violated.to_string(),
            ];
            if let Some((l, r, viol)) = eq8 {
                header.extend(["eq8_lhs", "eq8_rhs", "eq8_violated"]);
                row.extend([fmt_num(l), fmt_num(r), viol.to_string()]);
            }
            csv_text(&header, &[row])
        }
        _ => {
            let mut out = eval_json(&e)?;
            out["dims"] = dims_json(&rho);
            out["frame"] = json!(frame);
            out["scaling"] = json!(scaling_tag(g));
            if let Some((l, r, viol)) = eq8 {
                out["eq8"] = json!({"lhs": finite(l, "lhs")?, "rhs": finite(r, "rhs")?, "violated": viol});
            }
            if frame == "random" {
                out["u"] = serde_json::to_value(square_file(&u)).expect("serializable");
                out["v"] = serde_json::to_value(square_file(&v)).expect("serializable");
            }
            Ok(to_json_text(&out))
        }
    }
}

pub const SCAN_HEADER: [&str; 15] = [
    "family",
    "param",
    "value",
    "h",
    "p",
    "q",
    "w",
    "w_violated",
    "f_value",
    "f_violated",
    "ppt_min_eig",
    "npt",
    "eq8_lhs",
    "eq8_rhs",
    "eq8_violated",
];

/// One grid point of a scan. Verdicts come from the library's tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub family: &'static str,
    pub param: &'static str,
    pub value: f64,
    pub eval: entwit_core::WitnessEvaluation,
    pub f_value: Option<(f64, bool)>,
    pub ppt_min_eig: f64,
    pub npt: bool,
    pub eq8: Option<(f64, f64, bool)>,
}

impl ScanRow {
    fn cells(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        vec![
            self.family.to_string(),
            self.param.to_string(),
            fmt_num(self.value),
            fmt_num(self.eval.h_val),
            fmt_num(self.eval.p_val),
            fmt_num(self.eval.q_val),
            fmt_num(self.eval.w_val),
            self.eval.violated.to_string(),
            opt(self.f_value.map(|f| fmt_num(f.0))),
            opt(self.f_value.map(|f| f.1.to_string())),
            fmt_num(self.ppt_min_eig),
            self.npt.to_string(),
            opt(self.eq8.map(|e| fmt_num(e.0))),
            opt(self.eq8.map(|e| fmt_num(e.1))),
            opt(self.eq8.map(|e| e.2.to_string())),
        ]
    }

    fn json(&self) -> Value {
        let mut v = json!({
            "family": self.family,
            "param": self.param,
            "value": round15(self.value),
            "h": round15(self.eval.h_val),
            "p": round15(self.eval.p_val),
            "q": round15(self.eval.q_val),
            "w": round15(self.eval.w_val),
            "w_violated": self.eval.violated,
            "ppt_min_eig": round15(self.ppt_min_eig),
            "npt": self.npt,
        });
        if let Some((f, d)) = self.f_value {
            v["f_value"] = json!(round15(f));
            v["f_violated"] = json!(d);
        }
        if let Some((l, r, d)) = self.eq8 {
            v["eq8_lhs"] = json!(round15(l));
            v["eq8_rhs"] = json!(round15(r));
            v["eq8_violated"] = json!(d);
        }
        v
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Numeric(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numeric(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Rows for a family over a grid, in grid order.
pub fn scan_rows(a: &ScanArgs, g: &GlobalArgs) -> CliResult<Vec<ScanRow>> {
    if a.state.input.is_some() {
        return Err(input_err("scan needs --family"));
    }
    let family = a.state.family.as_deref().ok_or_else(|| input_err("scan needs --family"))?;
    let (param, spec) = match family {
        "horodecki" => ("alpha", &a.state.alpha),
        "isotropic" | "werner" => ("f", &a.state.f),
        "example4" => ("p", &a.state.p),
        other => return Err(input_err(format!("family `{other}` has no scan parameter"))),
    };
    let grid = parse_grid(
        spec.as_deref()
            .ok_or_else(|| input_err(format!("scan of {family} needs --{param}")))?,
    )?;
    if a.eq8 && family != "horodecki" {
        return Err(input_err("--eq8 applies to the horodecki family only"));
    }
    let family_tag = family_params(&a.state, g.seed, Some(grid[0]))?.tag();
    let cfg = search_config(g);
    let w = weighting(g);
    let rows = par::map_indexed(grid.len(), Execution::Parallel, |i| -> CliResult<ScanRow> {
        let value = grid[i];
        let rho = family_params(&a.state, g.seed, Some(value))?.build()?;
        let (m, n) = (rho.dims().m(), rho.dims().n());
        let u = if family == "werner" {
            zoo::werner_swap_frame(m)
        } else {
            CMatrix::identity(m, m)
        };
        let eval = evaluate_witness_weighted(&rho, &u, &CMatrix::identity(n, n), w)?;
        let f_value = if a.optimize {
            let rep = max_violation(&rho, &cfg)?;
            Some((rep.f_value, rep.detected()))
        } else {
            None
        };
        let eq8 = if a.eq8 {
            let s = qutrit_inequality_sides(&rho)?;
            Some((s.lhs, s.rhs, s.violated()))
        } else {
            None
        };
        let ppt = ppt_check(&rho);
        Ok(ScanRow {
            family: family_tag,
            param,
            value,
            eval,
            f_value,
            ppt_min_eig: ppt.min_eigenvalue,
            npt: ppt.is_npt,
            eq8,
        })
    });
    let rows = rows.into_iter().collect::<CliResult<Vec<_>>>()?;
    for r in &rows {
        for x in [r.eval.h_val, r.eval.p_val, r.eval.q_val, r.eval.w_val, r.ppt_min_eig] {
            finite(x, "scan value")?;
        }
    }
    Ok(rows)
}

pub fn cmd_scan(a: &ScanArgs, g: &GlobalArgs) -> CliResult<String> {
    let rows = scan_rows(a, g)?;
    match g.format {
        Some(Format::Json) => Ok(to_json_text(&Value::Array(rows.iter().map(ScanRow::json).collect()))),
        _ => csv_text(&SCAN_HEADER, &rows.iter().map(ScanRow::cells).collect::<Vec<_>>()),
    }
}

pub fn cmd_max_violation(a: &MaxViolationArgs, g: &GlobalArgs) -> CliResult<String> {
    json_only(g, "max-violation")?;
    let rho = resolve_state(&a.state, g.seed)?;
    let rep = max_violation(&rho, &search_config(g))?;
    let ppt = ppt_check(&rho);
    let mut out = eval_json(&rep.best_eval)?;
    out["dims"] = dims_json(&rho);
    out["scaling"] = json!(scaling_tag(g));
    out["f_value"] = json!(finite(rep.f_value, "f_value")?);
    out["detected"] = json!(rep.detected());
    out["restarts"] = json!(rep.restarts_run);
    out["evaluations"] = json!(rep.evaluations);
    out["best_restart"] = json!(rep.best_restart);
    out["converged_restarts"] = json!(rep.converged_restarts);
    out["ppt_min_eig"] = json!(round15(ppt.min_eigenvalue));
    out["npt"] = json!(ppt.is_npt);
    out["u"] = serde_json::to_value(square_file(&rep.best_u)).expect("serializable");
    out["v"] = serde_json::to_value(square_file(&rep.best_v)).expect("serializable");
    Ok(to_json_text(&out))
}

pub fn cmd_distill(a: &DistillArgs, g: &GlobalArgs) -> CliResult<String> {
    json_only(g, "distill")?;
    let w = weighting(g);
    if a.example4 {
        let ps = match &a.state.p {
            Some(s) => parse_grid(s)?,
            None => parse_grid("0.1:1:0.1")?,
        };
        let mut reports = Vec::with_capacity(ps.len());
        for p in ps {
            let r = example4_check(p, w)?;
            let mut v = eval_json(&r.eval)?;
            v["p"] = json!(round15(p));
            v["evidence"] = json!(r.distillable_evidence);
            v["filtered_ppt_min_eig"] = json!(round15(r.ppt.min_eigenvalue));
            v["filtered_npt"] = json!(r.ppt.is_npt);
            v["consistent_with_ppt"] = json!(r.consistent_with_ppt);
            v["source_min_eig"] = json!(round15(r.source_min_eigenvalue));
            v["filtered_min_eig"] = json!(round15(r.filtered_min_eigenvalue));
            v["states_valid"] = json!(r.states_valid);
            v["reduction_min_eig"] = json!([round15(r.reduction.min_eig_a), round15(r.reduction.min_eig_b)]);
            v["reduction_violated"] = json!(r.reduction.violated);
            reports.push(v);
        }
        let out = json!({"example4": reports, "scaling": scaling_tag(g)});
        return Ok(to_json_text(&out));
    }
    let rho = resolve_state(&a.state, g.seed)?;
    let rep = distill_search(&rho, a.copies, &search_config(g))?;
    let red = reduction_check(&rho);
    let mut out = eval_json(&rep.eval.best_eval)?;
    out["dims"] = dims_json(&rho);
    out["scaling"] = json!(scaling_tag(g));
    out["copies"] = json!(rep.n_copies);
    out["evidence"] = json!(rep.distillable_evidence);
    out["f_value"] = json!(finite(rep.eval.f_value, "f_value")?);
    out["samples"] = json!(rep.samples);
    out["best_sample"] = json!(rep.best_sample);
    out["projected_ppt_min_eig"] = json!(round15(rep.projected_ppt.min_eigenvalue));
    out["projected_npt"] = json!(rep.projected_ppt.is_npt);
    out["reduction_violated"] = json!(red.violated);
    out["filter_a"] = serde_json::to_value(rect_file(&rep.filter.a)).expect("serializable");
    out["filter_b"] = serde_json::to_value(rect_file(&rep.filter.b)).expect("serializable");
    Ok(to_json_text(&out))
}
