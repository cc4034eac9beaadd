//! Finite-resolution limit sets, chain recurrence and shadowing for
//! dynamical systems on exact dyadic coordinates.

pub mod chain_graph;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod metric;
pub mod render;
pub mod shadow;
pub mod systems;
pub mod trajectories;

pub use chain_graph::{build_chain_graph, cycles_of_map, ChainGraph};
pub use dyadic::{Dyadic, Exact};
pub use error::{Error, Result};
pub use metric::{PointSet, SetFamily, SpaceKind};
pub use systems::{build_system, Builder, Built, FiniteSystem};
pub use trajectories::{CodedOrbit, LimitPair};
