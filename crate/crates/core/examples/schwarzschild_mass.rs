//! ADM mass of Schwarzschild space from flux integrals, radially and on a cube.

use roughmass::adm::{adm_mass, MassOptions};
use roughmass::scenarios::{make_scenario, ScenarioKind, ScenarioSpec};

fn main() -> roughmass::Result<()> {
    let radial = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild))?;
    let truth = radial.truth.adm_mass.unwrap_or(f64::NAN);
    let rep = adm_mass(&radial.metric, &MassOptions::default())?;
    println!("exact mass {truth}");
    println!("{:>10} {:>14}", "r", "m(r)");
    for (r, m) in &rep.profile {
        println!("{r:>10.4} {m:>14.8}");
    }
    println!("radial, extrapolated   {:.8}", rep.mass);

    let cube = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild).cartesian(20.0, 0.25))?;
    let fd = adm_mass(&cube.metric, &MassOptions { force_fd: true, ..MassOptions::default() })?;
    println!("cube, finite differences {:.8} ({} nodes)", fd.mass, cube.metric.disc().len());
    Ok(())
}
