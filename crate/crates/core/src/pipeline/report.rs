use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{BranchData, PipelineResult};
use crate::bounds::BoundsReport;
use crate::error::Result;

pub const RUN_HEADER: &str = "branch,eps,status,hausdorff,sup_dist,w2_dist,s_diff_n2,rho,s_neg_n2,c1,alpha,a_p,\
iterations,residual,v_min,v_max,v_nstar,grad_sq,energy_lhs,energy_rhs,a_int,a_fit,adm_g_eps,adm_hat,shift_gap,\
s_hat_min,error";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn eps_label(eps: Option<f64>) -> String {
    eps.map_or_else(|| "none".to_string(), num)
}

fn run_row(d: &BranchData) -> Vec<String> {
    let b = &d.bounds;
    vec![
        num(d.hausdorff),
        num(d.sup_dist),
        num(d.w2_dist),
        num(d.s_diff),
        num(d.rho),
        num(d.s_neg),
        num(d.c1.c1),
        num(b.smallness.alpha),
        num(b.smallness.a_p),
        d.iterations.to_string(),
        num(d.residual),
        num(d.v_min),
        num(d.v_max),
        num(d.v_nstar),
        num(d.grad_sq),
        num(d.energy.0),
        num(d.energy.1),
        num(d.a_int),
        num(d.a_fit.unwrap_or(f64::NAN)),
        num(d.adm_g_eps),
        num(d.adm_hat),
        num(d.shift_gap),
        num(d.s_hat_min),
    ]
}

/// Writes run.csv, bounds.csv, summary.txt and plotdata/*.csv into `dir`.
pub fn emit_report(result: &PipelineResult, dir: &Path, plotdata: bool) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut run = String::from(RUN_HEADER);
    run.push('\n');
    let mut bounds = String::from("branch,eps,");
    bounds.push_str(BoundsReport::CSV_HEADER);
    bounds.push('\n');
    for (i, br) in result.branches.iter().enumerate() {
        let eps = eps_label(br.eps);
        match &br.outcome {
            Ok(d) => {
                let _ = writeln!(run, "{i},{eps},ok,{},", run_row(d).join(","));
                for line in d.bounds.to_csv().lines().skip(1) {
                    let _ = writeln!(bounds, "{i},{eps},{line}");
                }
            }
            Err(e) => {
                let nan = vec![num(f64::NAN); 23].join(",");
                let _ = writeln!(run, "{i},{eps},error,{nan},{}", e.replace([',', '\n'], ";"));
            }
        }
    }
    fs::write(dir.join("run.csv"), run)?;
    fs::write(dir.join("bounds.csv"), bounds)?;
    fs::write(dir.join("summary.txt"), summary(result))?;
    if plotdata {
        let pd = dir.join("plotdata");
        fs::create_dir_all(&pd)?;
        for (i, br) in result.branches.iter().enumerate() {
            let Ok(d) = &br.outcome else { continue };
            let mut line = String::from("r,s,s_hat,v\n");
            for p in &d.line {
                let _ = writeln!(line, "{},{},{},{}", num(p[0]), num(p[1]), num(p[2]), num(p[3]));
            }
            fs::write(pd.join(format!("axis_{i}.csv")), line)?;
            let mut mass = String::from("r,m_g,m_hat\n");
            for p in &d.mass_profile {
                let _ = writeln!(mass, "{},{},{}", num(p.0), num(p.1), num(p.2));
            }
            fs::write(pd.join(format!("mass_{i}.csv")), mass)?;
        }
    }
    Ok(())
}

/// Human-readable verdicts.
pub fn summary(result: &PipelineResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario: {}", result.scenario);
    if let Some(m) = result.adm_g {
        let _ = writeln!(s, "ADM(g) = {m:.10}");
    }
    if let Some(t) = result.truth_mass {
        let _ = writeln!(s, "exact mass = {t:.10}");
    }
    if result.branches.is_empty() {
        let _ = writeln!(s, "no branches");
    }
    for (i, br) in result.branches.iter().enumerate() {
        let _ = writeln!(s);
        let _ = writeln!(s, "[branch {i}] eps = {}", br.eps.map_or("none".to_string(), |e| e.to_string()));
        match &br.outcome {
            Ok(d) => {
                let b = &d.bounds;
                let _ = writeln!(
                    s,
                    "alpha = {:.6} (gate margin {:.6}), A_p = {:.6} (gate margin {:.6})",
                    b.smallness.alpha,
                    1.0 - b.smallness.alpha,
                    b.smallness.a_p,
                    1.0 - b.smallness.a_p
                );
                let _ = writeln!(
                    s,
                    "ADM(g_eps) = {:.8}, ADM(g_hat) = {:.8}, 2A = {:.8}, shift gap = {:.3e}",
                    d.adm_g_eps,
                    d.adm_hat,
                    2.0 * d.a_int,
                    d.shift_gap
                );
                let _ = writeln!(s, "min s_hat = {:.3e} (tolerance {:.3e})", d.s_hat_min, d.curvature_tol);
                s.push_str(&b.to_key_value());
            }
            Err(e) => {
                let _ = writeln!(s, "failed: {e}");
            }
        }
    }
    let _ = writeln!(s);
    for v in &result.verdicts {
        let _ = writeln!(s, "{}: {} ({})", v.name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    let _ = writeln!(s, "verdict: {}", if result.passed() && !result.branches.is_empty() { "PASS" } else { "FAIL" });
    s
}
