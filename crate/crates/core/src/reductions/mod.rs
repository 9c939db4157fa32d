//! Instance generators for the hardness constructions, each paired with the
//! certificate maps needed to test yes/no preservation on small inputs.

mod dpgg;
mod homogenize;
mod knapsack;
mod sat;

pub use dpgg::{dpgg_to_bnpg, map_mixed_back, DirectedPgg, DpggVerdict};
pub use homogenize::{
    homogenize, homogenize_bounded_degree, stitched_table, Homogenized, Symmetry,
};
pub use knapsack::{knapsack_feasible_brute, knapsack_to_anm};
pub use sat::{sat_certificate, sat_to_anm, SatInstance, SatVariant, SAT_VARIABLE_LIMIT};
