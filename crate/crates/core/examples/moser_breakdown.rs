//! Moser sup/inf bounds for p > n/2, and where the iteration stops when only
//! ||f||_{n/2} is small.

use roughmass::bounds::{a_p, moser_bounds, moser_breakdown};
use roughmass::conformal::structural_constants;

fn main() -> roughmass::Result<()> {
    let (n, p, c1, vol) = (3, 2.0, 1.0, 1.0);
    let sc = structural_constants(n, p)?;
    println!("n = {n}, p = {p}: chi {:.4}, sigma {:.4}, tau {:.4}", sc.chi, sc.sigma, sc.tau);
    println!("{:>8} {:>10} {:>12} {:>12}", "||f||_p", "A_p", "inf v >=", "sup v <=");
    for f in [0.05, 0.1, 0.3, 0.6, 0.9] {
        let ap = a_p(n, p, c1, f, vol);
        match moser_bounds(n, p, c1, f, vol) {
            Ok((lo, hi)) => println!("{f:>8} {ap:>10.4} {lo:>12.5} {hi:>12.5}"),
            Err(e) => println!("{f:>8} {ap:>10.4} {e}"),
        }
    }

    println!("\n{:>14} {:>8} {:>8}", "c1 ||f||_n/2", "beta", "p_max");
    for x in [0.5, 0.1, 0.01, 1e-3] {
        let b = moser_breakdown(n, 1.0, x)?;
        println!("{x:>14} {:>8} {:>8}", b.beta_max, b.p_max);
    }
    Ok(())
}
