//! Large deviations of dense Erdős–Rényi graphs in the graphon picture.
//!
//! * [`graphon`]: block-constant graphons and homomorphism densities.
//! * [`rate`]: the rate function `I_p`, the triangle-constrained scalar
//!   function `h_p`, its convex minorant and the phase classification.
//! * [`cut`]: cut norm and the block approximation of `δ_□`.
//! * [`solver`]: the triangle upper-tail variational problem over block
//!   graphons.
//! * [`sampler`]: random graphs, exact tails for tiny `n` and tilted
//!   importance sampling.

pub mod cut;
pub mod error;
pub mod graph;
pub mod graphon;
pub mod rate;
pub mod sampler;
pub mod solver;

pub use cut::{
    cut_distance, cut_norm_auto, cut_norm_exact, cut_norm_heuristic, delta_cut,
    graph_to_reference_distance, quotient_graph, BlockKernel, CutResult, DeltaCutOptions,
    DeltaCutResult,
};
pub use error::{Error, Result};
pub use graph::SimpleGraph;
pub use graphon::{common_refinement, l1_distance, StepGraphon};
pub use rate::{
    classify_phase, convex_minorant, h_p, ip_graphon, ip_scalar, minorant_curve, phase_diagram,
    phase_t_grid, trivial_threshold, Phase, PhaseDiagram, PhasePoint, PhaseRow,
};
pub use sampler::{
    conditional_structure_experiment, exact_tail, sample_er, sample_inhomogeneous,
    tilt_entropy_cost, tilted_tail_estimate, triangle_count, ConditionalOptions, ConditionalRow,
    ConditionalTable, TailEstimate,
};
pub use solver::{
    candidate_clique, candidate_constant, scaling_check, small_p_limit_check, solve_phi, Method,
    MethodChoice, ScalingCheck, SmallPRow, SmallPTable, SolveOptions, SolveResult,
};
