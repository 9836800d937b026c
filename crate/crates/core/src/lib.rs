//! Unit-hypercube visibility representations of trees.
//!
//! Two visibility models are implemented over exact rational coordinates:
//! standard (unit n-cubes in R^n, axis-parallel sightlines) and orthogonal
//! (n-dimensional unit cubes in R^{n+1} at fixed heights, sightlines along
//! the last axis). The crate builds, verifies, splits, and renders such
//! scenes, computes visibility numbers of trees through forest
//! decompositions, and synthesizes representations achieving them.
//!
//! ```
//! use hypervis_core::decomposition::{construct_h2_representation, h2_exact};
//! use hypervis_core::geometry::verify_multirep;
//! use hypervis_core::tree::Tree;
//!
//! // the 8-leaf star needs two unit squares per vertex in the plane
//! let star = Tree::star(8);
//! assert_eq!(h2_exact(&star).unwrap(), 2);
//!
//! let rep = construct_h2_representation(&star).unwrap();
//! let report = verify_multirep(&rep, &star).unwrap();
//! assert!(report.passed);
//! assert_eq!(report.max_cubes_per_vertex, 2);
//! ```
//!
//! ```
//! use hypervis_core::constructors::unit_bar_tree_rep;
//! use hypervis_core::recognize_caterpillar;
//! use hypervis_core::tree::Tree;
//!
//! // a caterpillar becomes a stack of unit bars, one per vertex
//! let spine_with_legs =
//!     Tree::from_edges(6, &[(0, 1), (1, 2), (2, 3), (1, 4), (2, 5)]).unwrap();
//! assert!(recognize_caterpillar(&spine_with_legs).is_ok());
//! let bars = unit_bar_tree_rep(&spine_with_legs).unwrap();
//! assert_eq!(bars.scene.cube_count(), 6);
//! ```

pub mod canonical;
pub mod caterpillar;
pub mod constructors;
pub mod corpus;
pub mod decomposition;
pub mod geometry;
pub mod intersection;
pub mod io;
pub mod rational;
pub mod tree;

pub use caterpillar::{recognize_caterpillar, CaterpillarObstruction, CaterpillarWitness};
pub use geometry::{MultiRep, Scene};
pub use rational::Rat;
pub use tree::{Tree, TreeError};
