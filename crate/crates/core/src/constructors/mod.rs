//! Placement constructions: cubicity-side builders lifted to orthogonal
//! scenes, unit-bar trees, star representations, and the assembly of
//! standard n-cube scenes from orthogonal forests.

pub mod coloring;
pub mod ncube;
pub mod ortho;

pub use coloring::{edge_two_color, stack_heights, ColoringError, EdgeColor, EdgeTwoColoring};
pub use ncube::{bar_forests, ncube_from_ortho_forests, ComponentRep, ForestInputError, OrthoForests};
pub use ortho::{
    embed_ortho, ortho_from_cubicity, project_to_intersection, realize_ortho_tree, star_ortho_rep,
    unit_bar_tree_rep, ConstructError,
};
