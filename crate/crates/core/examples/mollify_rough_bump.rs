//! Mollifying a C^{1,1/4} bump and tabulating g_eps -> g.

use roughmass::geometry::CurvatureOptions;
use roughmass::mollifier::{convergence_table, mollify, MollifierSpec};
use roughmass::scenarios::{make_scenario, ScenarioKind, ScenarioSpec};

fn main() -> roughmass::Result<()> {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::RoughBump))?;
    let table = convergence_table(&sc.metric, &sc.charts, &[0.2, 0.1, 0.05], &CurvatureOptions::default())?;
    print!("{}", table.to_csv());

    let sm = mollify(&sc.metric, &MollifierSpec { eps: 0.1, charts: sc.charts.clone() })?;
    println!(
        "eps 0.1 touches {} of {} nodes, Hausdorff distance {:.4}",
        sm.region.count(),
        sc.metric.disc().len(),
        sm.hausdorff
    );
    Ok(())
}
