//! Exact-arithmetic scenes, visibility predicates, representation
//! verification, and diagram output.

pub mod multirep;
pub mod scene;
pub mod svg;
pub mod visibility;

pub use multirep::{
    disjoint_union, disjoint_union_all, perturb_distinct_heights, split_into_tree_components,
    verify_multirep, MultiRep, MultiRepError, VerifyReport,
};
pub use scene::{
    CubeId, Model, OrthoCube, OrthoScene, Scene, SceneError, SceneViolation, StandardCube,
    StandardScene,
};
pub use svg::{render_svg, RenderError};
pub use visibility::{
    components, extract_graph, open_region_survives, visible, visible_ortho, visible_standard,
    SceneGraph, SightLine,
};
