//! Ear-decomposition approximation algorithms for graphic TSP, connected
//! T-joins and minimum 2-edge-connected spanning subgraphs, with exact lower
//! bounds and brute-force oracles.

pub mod approx;
pub mod bounds;
pub mod earmuff;
pub mod ears;
pub mod error;
pub mod generate;
pub mod graph;
pub mod lp;
pub mod matching;
pub mod oracle;
pub mod tjoin;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Multigraph, Solution};
