//! In the plane ||f_eps||_1 = 1 stays bounded while u_eps(0) grows without limit.

use roughmass::elliptic::SolveOptions;
use roughmass::scenarios::blowup_solve;

fn main() -> roughmass::Result<()> {
    let opts = SolveOptions { tol: 1e-12, ..SolveOptions::default() };
    println!("{:>8} {:>12} {:>10}", "eps", "u(0)", "iters");
    for eps in [0.2, 0.1, 0.05, 0.02, 0.01] {
        let pt = blowup_solve(eps, 4000, &opts)?;
        println!("{eps:>8} {:>12.6} {:>10}", pt.u_center, pt.iterations);
    }
    Ok(())
}
