//! Consistency report: reproduces the reference values and records
//! where the literal operator definitions disagree with them.

use entwit_core::criteria::ppt_check;
use entwit_core::distill::example4_check;
use entwit_core::par::{self, Execution};
use entwit_core::qstate::haar_random_vector;
use entwit_core::search::max_violation;
use entwit_core::witness::{evaluate_witness_weighted, pure_product_closed_form, qutrit_inequality_sides, Weighting};
use entwit_core::zoo;
use entwit_core::{rng, BipartiteDims, CMatrix, DensityMatrix, PureState, SearchConfig};
use serde::Serialize;
use serde_json::json;

use crate::args::GlobalArgs;
use crate::io::{fmt_num, parse_grid, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Discrepancy,
    Info,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Discrepancy => "DISCREPANCY",
            Status::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub status: Status,
    pub expected: Status,
    pub measured: String,
    pub reference: String,
}

impl Check {
    pub fn matches(&self) -> bool {
        self.status == self.expected
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// `Pass` if the literal value matches, `Discrepancy` if only the rescaled
/// one does, `Fail` otherwise.
fn literal_or_rescaled(literal: bool, rescaled: bool) -> Status {
    match (literal, rescaled) {
        (true, _) => Status::Pass,
        (false, true) => Status::Discrepancy,
        (false, false) => Status::Fail,
    }
}

fn ident(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

fn eval_id(rho: &DensityMatrix, w: Weighting) -> entwit_core::WitnessEvaluation {
    let d = rho.dims();
    evaluate_witness_weighted(rho, &ident(d.m()), &ident(d.n()), w).expect("identity frame is valid")
}

fn grid(s: &str) -> Vec<f64> {
    parse_grid(s).expect("built-in grid")
}

pub fn run_checks(g: &GlobalArgs) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    horodecki(&mut checks)?;
    bell_and_products(&mut checks, g.seed)?;
    isotropic(&mut checks, g)?;
    werner(&mut checks)?;
    example4(&mut checks)?;
    separable(&mut checks, g.seed)?;
    Ok(checks)
}

fn horodecki(out: &mut Vec<Check>) -> CliResult<()> {
    let alphas = grid("2:5:0.01");
    let (mut lhs_err, mut rhs_err, mut onset_ok, mut eq3_min) = (0.0f64, 0.0f64, true, f64::INFINITY);
    for &a in &alphas {
        let rho = zoo::horodecki_state(a)?;
        let s = qutrit_inequality_sides(&rho)?;
        lhs_err = lhs_err.max((s.lhs - 900.0 / 49.0).abs());
        let rhs = (36.0 * (2.0 * a - 5.0).powi(2) + 576.0) / 49.0;
        rhs_err = rhs_err.max((s.rhs - rhs).abs());
        let expect_violation = a > 4.0 + 1e-12;
        onset_ok &= s.violated() == expect_violation;
        if (a - 4.0).abs() < 1e-12 {
            onset_ok &= (s.lhs - s.rhs).abs() <= 1e-9;
        }
        eq3_min = eq3_min.min(eval_id(&rho, Weighting::Standard).w_val);
    }
    out.push(Check {
        id: "horodecki_eq8_lhs",
        status: pass_if(lhs_err <= 1e-9),
        expected: Status::Pass,
        measured: format!("max |lhs - 900/49| = {lhs_err:e} over alpha in [2, 5]"),
        reference: "lhs = 900/49".into(),
    });
    out.push(Check {
        id: "horodecki_eq8_rhs",
        status: pass_if(rhs_err <= 1e-9),
        expected: Status::Pass,
        measured: format!("max deviation {rhs_err:e}"),
        reference: "rhs = (36 (2 alpha - 5)^2 + 576)/49".into(),
    });
    out.push(Check {
        id: "horodecki_eq8_onset",
        status: pass_if(onset_ok),
        expected: Status::Pass,
        measured: format!("violation iff alpha > 4 on grid 2:5:0.01: {onset_ok}"),
        reference: "violated iff alpha > 4, equality at 4".into(),
    });
    out.push(Check {
        id: "horodecki_identity_frame_w",
        status: Status::Info,
        expected: Status::Info,
        measured: format!("min identity-frame w over grid = {}", fmt_num(eq3_min)),
        reference: "not stated".into(),
    });
    Ok(())
}

fn bell_and_products(out: &mut Vec<Check>, seed: u64) -> CliResult<()> {
    let bell = DensityMatrix::from_pure(&zoo::max_entangled(2)?);
    let e = eval_id(&bell, Weighting::Standard);
    let err = (e.h_val.abs())
        .max(e.p_val.abs())
        .max((e.q_val - 0.125).abs())
        .max((e.w_val + 1.0 / 64.0).abs());
    out.push(Check {
        id: "bell_identity_frame",
        status: pass_if(err <= 1e-12),
        expected: Status::Pass,
        measured: format!(
            "(h, p, q, w) = ({}, {}, {}, {})",
            fmt_num(e.h_val),
            fmt_num(e.p_val),
            fmt_num(e.q_val),
            fmt_num(e.w_val)
        ),
        reference: "(0, 0, 1/8, -1/64)".into(),
    });

    let plus = {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = entwit_core::CVector::from_vec(vec![s.into(), s.into()]);
        DensityMatrix::from_pure(&PureState::product(&v, &v)?)
    };
    let listed = |e: &entwit_core::WitnessEvaluation| {
        (e.h_val - 0.25).abs().max(e.p_val.abs()).max((e.q_val - 0.25).abs()).max(e.w_val.abs()) <= 1e-12
    };
    let std_e = eval_id(&plus, Weighting::Standard);
    let tight_e = eval_id(&plus, Weighting::ProductTight);
    out.push(Check {
        id: "plus_plus_identity_frame",
        status: literal_or_rescaled(listed(&std_e), listed(&tight_e)),
        expected: Status::Discrepancy,
        measured: format!(
            "literal (h, q, w) = ({}, {}, {}); rescaled ({}, {}, {})",
            fmt_num(std_e.h_val),
            fmt_num(std_e.q_val),
            fmt_num(std_e.w_val),
            fmt_num(tight_e.h_val),
            fmt_num(tight_e.q_val),
            fmt_num(tight_e.w_val)
        ),
        reference: "(h, p, q, w) = (1/4, 0, 1/4, 0)".into(),
    });

    // closed forms against the matrix route
    let (mut oracle_err, mut printed_vs_literal, mut printed_vs_rescaled) = (0.0f64, 0.0f64, 0.0f64);
    let dims_list = [2usize, 3, 4];
    let mut k = 0u64;
    for &m in &dims_list {
        for &n in &dims_list {
            for _ in 0..20 {
                let mut r = rng::substream(seed ^ 0x5eed_0001, k);
                k += 1;
                let a = haar_random_vector(m, &mut r);
                let b = haar_random_vector(n, &mut r);
                let rho = DensityMatrix::from_pure(&PureState::product(&a, &b)?);
                for (w, acc) in [(Weighting::Standard, 0), (Weighting::ProductTight, 1)] {
                    let e = eval_id(&rho, w);
                    let cf = pure_product_closed_form(&a, &b, w)?;
                    let pq = e.h_val * e.h_val - e.w_val;
                    let err = (cf.h_val - e.h_val).abs().max((cf.pq_sq - pq).abs());
                    if acc == 0 {
                        oracle_err = oracle_err.max(err);
                    } else {
                        printed_vs_rescaled = printed_vs_rescaled.max(err);
                        let lit = eval_id(&rho, Weighting::Standard);
                        printed_vs_literal =
                            printed_vs_literal.max((cf.pq_sq - (lit.h_val * lit.h_val - lit.w_val)).abs());
                    }
                }
            }
        }
    }
    out.push(Check {
        id: "product_closed_form_oracle",
        status: pass_if(oracle_err <= 1e-12),
        expected: Status::Pass,
        measured: format!("max deviation {oracle_err:e} over 180 product states"),
        reference: "closed form equals matrix evaluation".into(),
    });
    out.push(Check {
        id: "product_closed_form_printed_scaling",
        status: literal_or_rescaled(printed_vs_literal <= 1e-12, printed_vs_rescaled <= 1e-12),
        expected: Status::Discrepancy,
        measured: format!(
            "printed p^2 + q^2 vs literal operators: {printed_vs_literal:e}; vs (mn p, 4 q): {printed_vs_rescaled:e}"
        ),
        reference: "(|a0 b1|^2 - |a1 b0|^2)^2/4 + Re(a0 a1* b0 b1*)^2".into(),
    });
    Ok(())
}

fn isotropic(out: &mut Vec<Check>, g: &GlobalArgs) -> CliResult<()> {
    let fs = grid("0:1:0.05");
    let (mut h_err, mut q_derived_err) = (0.0f64, 0.0f64);
    let mut printed_err = [0.0f64; 3];
    for (idx, n) in [2usize, 3, 4].into_iter().enumerate() {
        let nf = n as f64;
        let d2 = nf * nf;
        for &f in &fs {
            let rho = zoo::isotropic_state(n, f)?;
            let e = eval_id(&rho, Weighting::Standard);
            h_err = h_err.max((e.h_val - (1.0 - f) / (d2 - 1.0)).abs());
            q_derived_err = q_derived_err.max((e.q_val - (d2 * f - 1.0) / (4.0 * nf * (d2 - 1.0))).abs());
            printed_err[idx] = printed_err[idx].max((e.q_val - (d2 * f - 1.0) / (d2 * (d2 - 1.0))).abs());
        }
    }
    out.push(Check {
        id: "isotropic_identity_h",
        status: pass_if(h_err <= 1e-12),
        expected: Status::Pass,
        measured: format!("max deviation {h_err:e}, n in {{2, 3, 4}}"),
        reference: "h = (1 - f)/(n^2 - 1)".into(),
    });
    out.push(Check {
        id: "isotropic_identity_q_derived",
        status: pass_if(q_derived_err <= 1e-12),
        expected: Status::Pass,
        measured: format!("max deviation {q_derived_err:e}"),
        reference: "q = (n^2 f - 1)/(4 n (n^2 - 1))".into(),
    });
    for (idx, (id, expected)) in [
        ("isotropic_identity_q_printed_n2", Status::Discrepancy),
        ("isotropic_identity_q_printed_n3", Status::Discrepancy),
        ("isotropic_identity_q_printed_n4", Status::Pass),
    ]
    .into_iter()
    .enumerate()
    {
        let ok = printed_err[idx] <= 1e-12;
        out.push(Check {
            id,
            status: if ok { Status::Pass } else { Status::Discrepancy },
            expected,
            measured: format!("max deviation {:e}; matrix value authoritative", printed_err[idx]),
            reference: "q = (n^2 f - 1)/(n^2 (n^2 - 1))".into(),
        });
    }

    let fs = grid("0:1:0.01");
    for (id, w) in [
        ("isotropic_optimized_onset_n2", Weighting::Standard),
        ("isotropic_optimized_onset_n2_rescaled", Weighting::ProductTight),
    ] {
        let cfg = SearchConfig {
            restarts: g.restarts,
            tol: g.tol,
            seed: g.seed,
            weighting: w,
            ..SearchConfig::default()
        };
        let detected = par::map_indexed(fs.len(), Execution::Parallel, |i| -> CliResult<bool> {
            let rho = zoo::isotropic_state(2, fs[i])?;
            Ok(max_violation(&rho, &cfg)?.detected())
        });
        let detected = detected.into_iter().collect::<CliResult<Vec<_>>>()?;
        let onset = fs.iter().zip(&detected).find(|(_, &d)| d).map(|(f, _)| *f);
        let monotone = detected.windows(2).all(|p| p[1] || !p[0]);
        let ok = monotone && onset.is_some_and(|f| (f - 0.5).abs() <= 0.02 + 1e-12);
        out.push(Check {
            id,
            status: pass_if(ok),
            expected: Status::Pass,
            measured: format!(
                "first detected f = {}, detections monotone: {monotone}",
                onset.map(fmt_num).unwrap_or_else(|| "none".into())
            ),
            reference: "onset at f = 0.50 +- 0.02 (entangled iff f > 1/2)".into(),
        });
    }
    Ok(())
}

/// Printed violation value `p^2 + q^2 - h^2`, i.e. `-w`, in the swap frame.
fn werner_closed_form(n: usize, f: f64) -> f64 {
    let nf = n as f64;
    ((nf * f - 1.0) / (nf.powi(3) - nf)).powi(2) - ((f + 1.0) / (nf * (nf + 1.0))).powi(2)
}

fn werner(out: &mut Vec<Check>) -> CliResult<()> {
    let fs = grid("-1:1:0.01");
    let mut ppt_ok = true;
    for n in [2usize, 3] {
        for &f in &fs {
            ppt_ok &= ppt_check(&zoo::werner_state(n, f)?).is_npt == (f < 0.0);
        }
    }
    out.push(Check {
        id: "werner_ppt_iff_nonnegative_f",
        status: pass_if(ppt_ok),
        expected: Status::Pass,
        measured: format!("PPT iff f >= 0 on -1:1:0.01 for n in {{2, 3}}: {ppt_ok}"),
        reference: "separable iff PPT iff f >= 0".into(),
    });

    let swap_w = |n: usize, f: f64, w: Weighting| -> CliResult<f64> {
        let rho = zoo::werner_state(n, f)?;
        Ok(evaluate_witness_weighted(&rho, &zoo::werner_swap_frame(n), &ident(n), w)?.w_val)
    };
    let (mut lit_err, mut resc_err, mut overlap_err, mut overlap_derived_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in [3usize, 4, 5, 6] {
        let psi = zoo::max_entangled(n)?;
        for &f in &fs {
            let cf = werner_closed_form(n, f);
            lit_err = lit_err.max((-swap_w(n, f, Weighting::Standard)? - cf).abs());
            resc_err = resc_err.max((-swap_w(n, f, Weighting::ProductTight)? - cf).abs());
            let rho = zoo::werner_state(n, f)?;
            let ov = psi.amplitudes().dotc(&(rho.matrix() * psi.amplitudes())).re;
            overlap_err = overlap_err.max((ov - f).abs());
            let nf = n as f64;
            overlap_derived_err = overlap_derived_err.max((ov - (1.0 + f) / (nf * (nf + 1.0))).abs());
        }
    }
    out.push(Check {
        id: "werner_swap_frame_closed_form",
        status: literal_or_rescaled(lit_err <= 1e-10, resc_err <= 1e-10),
        expected: Status::Discrepancy,
        measured: format!(
            "max deviation literal {lit_err:e}, with (mn p, 4 q) {resc_err:e}, n in 3..=6; matrix value authoritative"
        ),
        reference: "-w = ((n f - 1)/(n^3 - n))^2 - ((f + 1)/(n (n + 1)))^2".into(),
    });
    for (id, w) in [
        ("werner_onset_n3", Weighting::Standard),
        ("werner_onset_n3_rescaled", Weighting::ProductTight),
    ] {
        let mut flags = Vec::with_capacity(fs.len());
        for &f in &fs {
            flags.push(swap_w(3, f, w)? < -entwit_core::tol::VIOL);
        }
        let last = fs.iter().zip(&flags).filter(|(_, &v)| v).map(|(f, _)| *f).last();
        let contiguous = flags.windows(2).all(|p| p[0] || !p[1]);
        let ok = contiguous && last.is_some_and(|f| (-0.21 - 1e-9..=-0.2 + 1e-9).contains(&f));
        // the onset claim rests on the closed form, which only the rescaled weighting reproduces
        let (status, expected) = match w {
            Weighting::Standard => (Status::Info, Status::Info),
            Weighting::ProductTight => (pass_if(ok), Status::Pass),
        };
        out.push(Check {
            id,
            status,
            expected,
            measured: format!(
                "largest violating grid f = {}",
                last.map(fmt_num).unwrap_or_else(|| "none".into())
            ),
            reference: "violation iff f < -0.2".into(),
        });
    }
    out.push(Check {
        id: "werner_overlap_parameter",
        status: literal_or_rescaled(overlap_err <= 1e-12, overlap_derived_err <= 1e-12),
        expected: Status::Discrepancy,
        measured: format!(
            "max |<psi+|rho|psi+> - f| = {overlap_err:e}; against (1 + f)/(n (n + 1)): {overlap_derived_err:e}"
        ),
        reference: "f = <psi+|rho|psi+>".into(),
    });
    Ok(())
}

fn example4(out: &mut Vec<Check>) -> CliResult<()> {
    let ps = grid("0.1:1:0.1");
    let mut min_src = f64::INFINITY;
    let mut reduction_clean = true;
    for (id, w) in [
        ("example4_witness_matches_ppt", Weighting::Standard),
        ("example4_witness_matches_ppt_rescaled", Weighting::ProductTight),
    ] {
        let mut consistent = true;
        let mut detail = Vec::new();
        for &p in &ps {
            let r = example4_check(p, w)?;
            min_src = min_src.min(r.source_min_eigenvalue);
            reduction_clean &= !r.reduction.violated;
            consistent &= r.consistent_with_ppt;
            if !r.consistent_with_ppt {
                detail.push(format!("p={} w={} npt={}", fmt_num(p), fmt_num(r.eval.w_val), r.ppt.is_npt));
            }
        }
        out.push(Check {
            id,
            status: pass_if(consistent),
            expected: Status::Pass,
            measured: if detail.is_empty() {
                "witness verdict equals PPT verdict for p = 0.1..1.0".into()
            } else {
                format!("mismatches: {}", detail.join("; "))
            },
            reference: "violation at the given (A, B, U, V) iff filtered state is NPT".into(),
        });
    }
    out.push(Check {
        id: "example4_reduction_criterion",
        status: pass_if(reduction_clean),
        expected: Status::Pass,
        measured: format!("reduction criterion violated for some p: {}", !reduction_clean),
        reference: "not detected by the reduction criterion".into(),
    });
    out.push(Check {
        id: "example4_state_positivity",
        status: if min_src >= -entwit_core::tol::PSD {
            Status::Pass
        } else {
            Status::Discrepancy
        },
        expected: Status::Discrepancy,
        measured: format!("most negative eigenvalue over p grid = {}", fmt_num(min_src)),
        reference: "a density matrix".into(),
    });
    Ok(())
}

fn separable(out: &mut Vec<Check>, seed: u64) -> CliResult<()> {
    let dims = [(2usize, 2usize), (2, 3), (3, 3), (3, 4)];
    let mut min_w = f64::INFINITY;
    for (i, &(m, n)) in dims.iter().enumerate() {
        let bd = BipartiteDims::new(m, n)?;
        for s in 0..50u64 {
            let mut r = rng::substream(seed ^ 0x5eed_0002, (i as u64) << 32 | s);
            let k = 1 + (s as usize % (m * n));
            let rho = zoo::random_separable(bd, k, &mut r)?;
            for _ in 0..4 {
                let u = entwit_core::qstate::haar_random_unitary(m, &mut r);
                let v = entwit_core::qstate::haar_random_unitary(n, &mut r);
                min_w = min_w.min(evaluate_witness_weighted(&rho, &u, &v, Weighting::Standard)?.w_val);
            }
        }
    }
    out.push(Check {
        id: "separable_states_satisfy_witness",
        status: pass_if(min_w >= -1e-10),
        expected: Status::Pass,
        measured: format!("min w over 200 separable states x 4 frames = {}", fmt_num(min_w)),
        reference: "w >= 0 for separable states".into(),
    });

    let bd = BipartiteDims::new(3, 3)?;
    let mut satisfied = 0;
    let total = 200u64;
    for s in 0..total {
        let mut r = rng::substream(seed ^ 0x5eed_0003, s);
        let rho = zoo::random_separable(bd, 1 + (s as usize % 9), &mut r)?;
        if !qutrit_inequality_sides(&rho)?.violated() {
            satisfied += 1;
        }
    }
    out.push(Check {
        id: "eq8_separable_satisfaction_rate",
        status: Status::Info,
        expected: Status::Info,
        measured: format!("{satisfied}/{total} random separable 3x3 states satisfy the 3x3 inequality"),
        reference: "expected 100%".into(),
    });
    Ok(())
}

/// JSON report, human-readable summary and whether every check met its
/// expected status.
pub fn cmd_verify(g: &GlobalArgs) -> CliResult<(String, String, bool)> {
    let checks = run_checks(g)?;
    let all_match = checks.iter().all(Check::matches);
    let mut text = String::new();
    for c in &checks {
        let mark = if c.matches() { "ok" } else { "MISMATCH" };
        text.push_str(&format!(
            "{:<12} {:<40} expected {:<12} {:<8} {}\n",
            c.status.label(),
            c.id,
            c.expected.label(),
            mark,
            c.measured
        ));
    }
    let json = json!({ "checks": checks, "all_match": all_match });
    let mut s = serde_json::to_string_pretty(&json).expect("json values serialize");
    s.push('\n');
    Ok((s, text, all_match))
}
