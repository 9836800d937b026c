//! Arboricity-side algorithms: forest decompositions, chordal coloring of
//! subtree multisets, and visibility-number computation with end-to-end
//! representation synthesis.

pub mod chordal;
pub mod forest;
pub mod numbers;

pub use chordal::{chordal_color, pad_to_uniform, ChordalColoring, ChordalError, SubtreeMultiset};
pub use forest::{
    caterpillar_forest_decompose, component_as_tree, components_of_edges, ortho_forest_decompose,
    star_forest_decompose, verify_caterpillar_decomposition, verify_star_decomposition,
    DecompositionError, ForestDecomposition,
};
pub use numbers::{
    construct_h2_representation, construct_h2_representation_with_limit, h1perp_bounds,
    h1perp_exact, h1perp_exact_with_limit, h2_exact, h2_exact_with_limit, hn_bounds,
    hnperp_bounds, hnperp_upper_construct, HNumberError, DEFAULT_SEARCH_LIMIT,
};
