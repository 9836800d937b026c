//! Visibility numbers of trees: exact one-dimensional orthogonal values
//! with witnesses, the two-dimensional standard value derived from them,
//! general bounds, and the constructions that realize the witnesses as
//! verified scenes.

use super::chordal::{chordal_color, pad_to_uniform, ChordalError};
use super::forest::{
    caterpillar_forest_decompose, components_of_edges, ortho_forest_decompose,
    star_forest_decompose, verify_caterpillar_decomposition, DecompositionError,
    ForestDecomposition,
};
use crate::constructors::{
    bar_forests, ncube_from_ortho_forests, realize_ortho_tree, ConstructError, ForestInputError,
};
use crate::geometry::{
    disjoint_union_all, verify_multirep, CubeId, MultiRep, MultiRepError, OrthoCube, OrthoScene,
    Scene,
};
use crate::rational::rat_int;
use crate::tree::Tree;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Default vertex-count cap for the exact search in the ambiguous case.
pub const DEFAULT_SEARCH_LIMIT: usize = 16;
const SEARCH_NODE_BUDGET: u64 = 200_000_000;

#[derive(Debug, Error)]
pub enum HNumberError {
    #[error("tree has {vertices} vertices, above the search limit {limit}; bounds are [{low}, {high}]")]
    SearchLimitExceeded {
        vertices: usize,
        limit: usize,
        low: usize,
        high: usize,
    },
    #[error("search budget exhausted; bounds are [{low}, {high}]")]
    BudgetExhausted { low: usize, high: usize },
    #[error("no decomposition found at the guaranteed bound; this is a bug")]
    GuaranteedBoundFailed,
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Chordal(#[from] ChordalError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    ForestInput(#[from] ForestInputError),
    #[error(transparent)]
    MultiRep(#[from] MultiRepError),
    #[error("construction failed verification: {0}")]
    VerificationFailed(String),
    #[error("upper construction exceeded {bound} cubes per vertex")]
    BoundNotMet { bound: usize },
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Bounds on the one-dimensional orthogonal visibility number:
/// exact ⌈Δ/3⌉ unless 3 divides Δ, in which case the value is ⌈Δ/3⌉ or
/// ⌈Δ/3⌉ + 1. The single-vertex tree takes one bar by convention.
pub fn h1perp_bounds(tree: &Tree) -> (usize, usize) {
    let delta = tree.max_degree();
    if delta == 0 {
        return (1, 1);
    }
    let low = ceil_div(delta, 3);
    if delta % 3 == 0 {
        (low, low + 1)
    } else {
        (low, low)
    }
}

/// Exact one-dimensional orthogonal visibility number with a witness
/// decomposition into forests whose components are subdivided caterpillars
/// with Δ ≤ 3.
pub fn h1perp_exact(tree: &Tree) -> Result<(usize, ForestDecomposition), HNumberError> {
    h1perp_exact_with_limit(tree, DEFAULT_SEARCH_LIMIT)
}

pub fn h1perp_exact_with_limit(
    tree: &Tree,
    limit: usize,
) -> Result<(usize, ForestDecomposition), HNumberError> {
    let (low, high) = h1perp_bounds(tree);
    if tree.vertex_count() == 1 {
        return Ok((1, ForestDecomposition { forests: vec![vec![]] }));
    }
    let ambiguous = low != high;
    if ambiguous && tree.vertex_count() > limit {
        return Err(HNumberError::SearchLimitExceeded {
            vertices: tree.vertex_count(),
            limit,
            low,
            high,
        });
    }
    let budget_err = |e| match e {
        DecompositionError::BudgetExhausted { .. } => HNumberError::BudgetExhausted { low, high },
        other => HNumberError::Decomposition(other),
    };
    match caterpillar_forest_decompose(tree, low, SEARCH_NODE_BUDGET).map_err(budget_err)? {
        Some(witness) => {
            verify_caterpillar_decomposition(tree, &witness)?;
            Ok((low, witness))
        }
        None if ambiguous => {
            let witness = caterpillar_forest_decompose(tree, high, SEARCH_NODE_BUDGET)
                .map_err(budget_err)?
                .ok_or(HNumberError::GuaranteedBoundFailed)?;
            verify_caterpillar_decomposition(tree, &witness)?;
            Ok((high, witness))
        }
        // outside the ambiguous case the low bound is guaranteed attainable
        None => Err(HNumberError::GuaranteedBoundFailed),
    }
}

/// The two-dimensional standard visibility number equals ⌈h1perp/2⌉, with
/// a consistency check against ⌈Δ/6⌉ when 6 does not divide Δ.
pub fn h2_exact(tree: &Tree) -> Result<usize, HNumberError> {
    h2_exact_with_limit(tree, DEFAULT_SEARCH_LIMIT)
}

pub fn h2_exact_with_limit(tree: &Tree, limit: usize) -> Result<usize, HNumberError> {
    let (value, _) = h1perp_exact_with_limit(tree, limit)?;
    let h2 = ceil_div(value, 2);
    let delta = tree.max_degree();
    if delta > 0 && delta % 6 != 0 {
        debug_assert_eq!(h2, ceil_div(delta, 6));
    }
    Ok(h2)
}

/// Bounds on the n-dimensional orthogonal visibility number:
/// ⌈Δ/(2^n+1)⌉ ≤ h ≤ ⌈(Δ+1)/(2^n+1)⌉.
pub fn hnperp_bounds(tree: &Tree, n: usize) -> (usize, usize) {
    assert!(n >= 1);
    let delta = tree.max_degree();
    if delta == 0 {
        return (1, 1);
    }
    let k = (1usize << n) + 1;
    (ceil_div(delta, k), ceil_div(delta + 1, k))
}

/// Bounds on the n-dimensional standard visibility number:
/// ⌈Δ/(n(2^{n−1}+1))⌉ ≤ h ≤ ⌈(Δ+1)/(n(2^{n−1}+1))⌉.
pub fn hn_bounds(tree: &Tree, n: usize) -> (usize, usize) {
    assert!(n >= 1);
    let delta = tree.max_degree();
    if delta == 0 {
        return (1, 1);
    }
    let k = n * ((1usize << (n - 1)) + 1);
    (ceil_div(delta, k), ceil_div(delta + 1, k))
}

fn single_cube_ortho(n: usize) -> MultiRep {
    let scene = OrthoScene::new(
        n,
        vec![OrthoCube {
            id: CubeId(0),
            center: vec![rat_int(0); n],
            height: rat_int(0),
        }],
    )
    .expect("single cube scene");
    MultiRep::new(
        Scene::Ortho(scene),
        [(0, [CubeId(0)].into_iter().collect())].into_iter().collect(),
    )
    .expect("single cube rep")
}

/// Orthogonal representation of `tree` in dimension n with at most
/// ⌈(Δ+1)/(2^n+1)⌉ cubes per vertex, built from a minimal decomposition
/// into forests of realizable components (bounded-size stars are the
/// common case). Errors when no decomposition within the bound exists in
/// the families this crate can realize.
pub fn hnperp_upper_construct(tree: &Tree, n: usize) -> Result<MultiRep, HNumberError> {
    if tree.vertex_count() == 1 {
        return Ok(single_cube_ortho(n));
    }
    let (_, bound) = hnperp_bounds(tree, n);
    let k = (1usize << n) + 1;
    let mut decomposition = None;
    for count in 1..=bound {
        // star forests first (the intended shape), then the wider family
        if let Ok(d) = star_forest_decompose(tree, k, count) {
            decomposition = Some(d);
            break;
        }
        match ortho_forest_decompose(tree, n, count, SEARCH_NODE_BUDGET) {
            Ok(Some(d)) => {
                decomposition = Some(d);
                break;
            }
            Ok(None) => continue,
            Err(DecompositionError::BudgetExhausted { .. }) => {
                return Err(HNumberError::BudgetExhausted { low: 1, high: bound })
            }
            Err(e) => return Err(e.into()),
        }
    }
    let decomposition = decomposition.ok_or(HNumberError::BoundNotMet { bound })?;
    // realize every component of every forest and take the disjoint union
    let mut pieces: Vec<MultiRep> = Vec::new();
    for forest in &decomposition.forests {
        for (vertices, edges) in components_of_edges(forest) {
            let index: BTreeMap<usize, usize> =
                vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let local_edges: Vec<(usize, usize)> =
                edges.iter().map(|&(u, v)| (index[&u], index[&v])).collect();
            let sub = Tree::from_edges(vertices.len(), &local_edges)
                .expect("forest component is a tree");
            let local = realize_ortho_tree(&sub, n)?;
            pieces.push(MultiRep {
                scene: local.scene.clone(),
                assignment: local
                    .assignment
                    .iter()
                    .map(|(&l, cubes)| (vertices[l], cubes.clone()))
                    .collect(),
            });
        }
    }
    // vertices untouched by any forest edge still need a cube
    let covered: BTreeSet<usize> = pieces
        .iter()
        .flat_map(|p| p.assignment.keys().copied())
        .collect();
    for v in 0..tree.vertex_count() {
        if !covered.contains(&v) {
            let mut single = single_cube_ortho(n);
            single.assignment = [(v, single.assignment.remove(&0).expect("one vertex"))]
                .into_iter()
                .collect();
            pieces.push(single);
        }
    }
    let rep = disjoint_union_all(pieces)?;
    let report = verify_multirep(&rep, tree)?;
    if !report.passed {
        return Err(HNumberError::VerificationFailed(report.summary()));
    }
    if report.max_cubes_per_vertex > bound {
        return Err(HNumberError::BoundNotMet { bound });
    }
    Ok(rep)
}

/// End-to-end two-dimensional standard representation achieving the exact
/// visibility number: exact one-dimensional witness → uniform multiset →
/// chordal coloring → color classes paired into two-forest inputs →
/// assembled per pair and joined by disjoint unions.
pub fn construct_h2_representation(tree: &Tree) -> Result<MultiRep, HNumberError> {
    construct_h2_representation_with_limit(tree, DEFAULT_SEARCH_LIMIT)
}

pub fn construct_h2_representation_with_limit(
    tree: &Tree,
    limit: usize,
) -> Result<MultiRep, HNumberError> {
    if tree.vertex_count() == 1 {
        let scene = crate::geometry::StandardScene::new(
            2,
            vec![crate::geometry::StandardCube {
                id: CubeId(0),
                center: vec![rat_int(0), rat_int(0)],
            }],
        )
        .expect("single cube");
        return Ok(MultiRep::new(
            Scene::Standard(scene),
            [(0, [CubeId(0)].into_iter().collect())].into_iter().collect(),
        )?);
    }
    let (value, witness) = h1perp_exact_with_limit(tree, limit)?;
    let multiset = pad_to_uniform(tree, &witness);
    // a sub-minimal multiplicity would contradict minimality of the value
    debug_assert_eq!(multiset.ell, value);
    let coloring = chordal_color(tree, &multiset)?;
    let h2 = ceil_div(value, 2);

    let mut pair_reps: Vec<MultiRep> = Vec::new();
    for pair_index in 0..h2 {
        let c1 = 2 * pair_index;
        let c2 = 2 * pair_index + 1;
        let classes: Vec<Vec<usize>> = if c2 < coloring.color_count {
            vec![coloring.class(c1), coloring.class(c2)]
        } else {
            vec![coloring.class(c1), Vec::new()]
        };
        // the union of the pair's member edges, split into components
        let pair_edges: Vec<Vec<(usize, usize)>> = classes
            .iter()
            .map(|class| {
                class
                    .iter()
                    .flat_map(|&m| multiset.member_edges(tree, m))
                    .collect()
            })
            .collect();
        let union_edges: Vec<(usize, usize)> =
            pair_edges.iter().flatten().copied().collect();
        let pair_vertices: BTreeSet<usize> = classes
            .iter()
            .flatten()
            .flat_map(|&m| multiset.members[m].iter().copied())
            .collect();
        let mut comp_reps: Vec<MultiRep> = Vec::new();
        let mut in_components: BTreeSet<usize> = BTreeSet::new();
        for (vertices, edges) in components_of_edges(&union_edges) {
            in_components.extend(vertices.iter().copied());
            let index: BTreeMap<usize, usize> =
                vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let local_edges: Vec<(usize, usize)> =
                edges.iter().map(|&(u, v)| (index[&u], index[&v])).collect();
            let sub = Tree::from_edges(vertices.len(), &local_edges)
                .expect("pair component is a tree");
            let local_forests: Vec<Vec<(usize, usize)>> = pair_edges
                .iter()
                .map(|fe| {
                    fe.iter()
                        .filter(|(u, v)| index.contains_key(u) && index.contains_key(v))
                        .map(|&(u, v)| (index[&u], index[&v]))
                        .collect()
                })
                .collect();
            let forests = bar_forests(&sub, &local_forests)?;
            let local_rep = ncube_from_ortho_forests(&sub, forests)?;
            comp_reps.push(MultiRep {
                scene: local_rep.scene.clone(),
                assignment: local_rep
                    .assignment
                    .iter()
                    .map(|(&l, cubes)| (vertices[l], cubes.clone()))
                    .collect(),
            });
        }
        // singleton members of the pair (padding) become isolated cubes
        for &v in &pair_vertices {
            if !in_components.contains(&v) {
                let scene = crate::geometry::StandardScene::new(
                    2,
                    vec![crate::geometry::StandardCube {
                        id: CubeId(0),
                        center: vec![rat_int(0), rat_int(0)],
                    }],
                )
                .expect("single cube");
                comp_reps.push(MultiRep::new(
                    Scene::Standard(scene),
                    [(v, [CubeId(0)].into_iter().collect())].into_iter().collect(),
                )?);
            }
        }
        pair_reps.push(disjoint_union_all(comp_reps)?);
    }
    let rep = disjoint_union_all(pair_reps)?;
    let report = verify_multirep(&rep, tree)?;
    if !report.passed {
        return Err(HNumberError::VerificationFailed(report.summary()));
    }
    if report.max_cubes_per_vertex != h2 {
        return Err(HNumberError::VerificationFailed(format!(
            "achieved {} cubes per vertex, expected exactly {h2}",
            report.max_cubes_per_vertex
        )));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::nonisomorphic_trees;

    #[test]
    fn bounds_follow_the_degree_formulas() {
        assert_eq!(h1perp_bounds(&Tree::star(4)), (2, 2));
        assert_eq!(h1perp_bounds(&Tree::star(6)), (2, 3));
        assert_eq!(h1perp_bounds(&Tree::path(1)), (1, 1));
    }

    #[test]
    fn exact_values_on_named_trees() {
        assert_eq!(h1perp_exact(&Tree::star(4)).unwrap().0, 2);
        assert_eq!(h1perp_exact(&Tree::path(9)).unwrap().0, 1);
        // complete binary tree of depth 3: Δ = 3, not a caterpillar, so 2
        let n = 15;
        let edges: Vec<_> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
        let cbt = Tree::from_edges(n, &edges).unwrap();
        assert_eq!(h1perp_exact(&cbt).unwrap().0, 2);
    }

    #[test]
    fn k16_resolves_the_ambiguous_case_low() {
        // Δ = 6 splits 3+3 into two caterpillar stars
        assert_eq!(h1perp_exact(&Tree::star(6)).unwrap().0, 2);
    }

    #[test]
    fn h2_on_named_trees() {
        assert_eq!(h2_exact(&Tree::star(8)).unwrap(), 2);
        assert_eq!(h2_exact(&Tree::path(2)).unwrap(), 1);
        // a Δ = 7 tree
        assert_eq!(h2_exact(&Tree::star(7)).unwrap(), 2);
    }

    #[test]
    fn hn_bound_formulas() {
        assert_eq!(hnperp_bounds(&Tree::star(8), 2), (2, 2));
        assert_eq!(hn_bounds(&Tree::star(5), 2), (1, 1));
        assert_eq!(hn_bounds(&Tree::path(1), 2), (1, 1));
    }

    #[test]
    fn search_limit_reports_bounds() {
        // a 17-vertex tree with Δ = 6 hits the ambiguous case above the limit
        let mut edges: Vec<(usize, usize)> = (1..=6).map(|l| (0, l)).collect();
        let mut next = 7;
        for leaf in 1..=5 {
            edges.push((leaf, next));
            next += 1;
            edges.push((next - 1, next));
            next += 1;
        }
        let tree = Tree::from_edges(next, &edges).unwrap();
        assert_eq!(tree.vertex_count(), 17);
        assert_eq!(tree.max_degree(), 6);
        match h1perp_exact(&tree) {
            Err(HNumberError::SearchLimitExceeded { low: 2, high: 3, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn h2_construction_verifies_on_small_corpus() {
        for n in 2..=7 {
            for tree in nonisomorphic_trees(n) {
                let rep = construct_h2_representation(&tree).unwrap();
                let report = verify_multirep(&rep, &tree).unwrap();
                assert!(report.passed, "tree {:?}: {}", tree.edges(), report.summary());
                assert_eq!(
                    report.max_cubes_per_vertex,
                    h2_exact(&tree).unwrap(),
                    "tree {:?}",
                    tree.edges()
                );
            }
        }
    }

    #[test]
    fn k18_needs_two_cubes_and_gets_them() {
        let tree = Tree::star(8);
        let rep = construct_h2_representation(&tree).unwrap();
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_cubes_per_vertex, 2);
    }

    #[test]
    fn paths_take_one_cube_per_vertex_in_one_component() {
        let tree = Tree::path(6);
        let rep = construct_h2_representation(&tree).unwrap();
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_cubes_per_vertex, 1);
        assert_eq!(crate::geometry::components(&rep.scene).len(), 1);
    }

    #[test]
    fn hnperp_construct_k1_10_two_cubes() {
        let tree = Tree::star(10);
        let rep = hnperp_upper_construct(&tree, 2).unwrap();
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed);
        assert!(report.max_cubes_per_vertex <= 2);
    }

    #[test]
    fn hnperp_construct_p4_one_cube() {
        let tree = Tree::path(4);
        let rep = hnperp_upper_construct(&tree, 1).unwrap();
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_cubes_per_vertex, 1);
    }
}
