//! The Schrodinger-type Dirichlet problem Laplace_g v + f v + f = 0 and the
//! decay coefficient of its solution.

mod decay;
mod operator;
mod solver;

pub use decay::{
    decay_coefficient_integral, dirichlet_energy, discrete_energy, energy_identity, extract_decay_coefficient, gradient_norm_sq,
};
pub use operator::{laplace_beltrami, DivergenceOperator};
pub use solver::{solve_dirichlet, solve_with_source, unknown_nodes, LinearSolve, SolveOptions, SolveReport};
