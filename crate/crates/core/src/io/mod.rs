//! Instance files and random instance generation.

mod document;
mod generate;

pub use document::{
    parse_instance, serialize_instance, DocumentError, Instance, InstanceDocument, Kind, Metadata,
};
pub use generate::{
    generate_instance, random_anm, random_game, random_knapsack, random_sat, GameParams, GenSpec,
    Topology, GENERATOR_PLAYER_LIMIT, TABLE_VALUE_MAX,
};
