//! Node ranking with random walks augmented by higher-order (clique)
//! structure, plus the baselines and experiments used to evaluate it.

pub mod centrality;
pub mod dismantle;
pub mod epidemic;
pub mod error;
pub mod graph;
pub mod methods;
pub mod rank;
pub mod resolution;
pub mod simplicial;
pub mod sparse;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
pub use methods::Method;
pub use rank::RankResult;
pub use simplicial::SimplicialCover;
