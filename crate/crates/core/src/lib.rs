//! Solvers for the forest augmentation problem: given a forest `F` and a set
//! of links `L` on the same vertices, pick as few links as possible so that
//! `F` plus the chosen links is 2-edge-connected.
//!
//! The crate combines two tracks and keeps the smaller answer:
//!
//! * [`tap`]: a minimum doubly-entering arc set, turned into a spanning tree
//!   plus an up-link solution that a bounded-width relative greedy improves;
//! * [`pap`]: reductions to disjoint paths followed by a matching start,
//!   alternating-trail bridge covering and good-cycle gluing.
//!
//! Exact brute-force solvers in [`oracle`] and the credit auditor in [`audit`]
//! check both tracks on small instances.

pub mod audit;
pub mod driver;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod matching;
pub mod oracle;
pub mod pap;
pub mod reduce;
pub mod tap;

pub use driver::{solve_combined, CombinedSolution};
pub use error::{FapError, Result};
pub use graph::{contract, decompose, is_two_edge_connected, BlockDecomposition, ContractedView, Edge, EdgeKind, Graph};
pub use instance::{parse, parse_solution, render, render_solution, validate, Instance};
