//! ADM(g) >= -c ||s_-||^{n/2} mu^{...} on the negative pocket.

use roughmass::adm::{adm_mass, MassOptions};
use roughmass::bounds::{clean_negative_part, mass_lower_bound, sobolev_constant, NegativeData, SobolevOptions};
use roughmass::geometry::{scalar_curvature, CurvatureOptions, Region};
use roughmass::scenarios::{make_scenario, ScenarioKind, ScenarioSpec};

fn main() -> roughmass::Result<()> {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::NegativePocket))?;
    let g = &sc.metric;
    let whole = Region::whole(*g.disc());
    let s = scalar_curvature(g, &CurvatureOptions::default())?.field;
    let neg = clean_negative_part(&s, 1e-4);
    let data = NegativeData::from_negative_part(g, &neg, &whole, 2.0)?;
    let c1 = sobolev_constant(g, &whole, &SobolevOptions::default())?;
    let lower = mass_lower_bound(c1.c1, &data)?;
    let mass = adm_mass(g, &MassOptions::default())?.mass;

    println!("||s_-||_(3/2)   {:.6}", data.s_neg_total);
    println!("mu(supp s_-)    {:.6}", data.mu_total);
    println!("c1 estimate     {:.6} ({:?}, scale {:.3})", c1.c1, c1.family, c1.scale);
    println!("lower bound     {lower:.6}");
    println!("ADM(g)          {mass:.6}");
    println!("exact ADM(g)    {:.6}", sc.truth.adm_mass.unwrap_or(f64::NAN));
    Ok(())
}
