//! Exact checks of the performance bounds on small tabular MDPs.

mod bounds;
mod gradient;
mod linalg;
mod mdp;

pub use bounds::{
    advantage_statistics, all_reports, check_corollary1, check_lemma3, check_theorem1, kl_divergence, mean_tv, sigma_lower_bound,
    tv_distance, AdvantageStatistics, BoundReport, Corollary1Report, Lemma3Report, SigmaBound, BOUND_TOL,
};
pub use gradient::{DeterministicChain, EnumeratedPath};
pub use linalg::{lu_solve, residual_norm};
pub use mdp::{exact_objective, exact_visitation, TabularMDP, TabularPolicy};
