//! Cross-cutting invariants checked on randomized inputs: predicate
//! symmetry, monotone blocking, graph preservation under perturbation and
//! disjoint union, expansion bookkeeping, and construction round trips.

use hypervis_core::canonical::{is_isomorphic, random_trees};
use hypervis_core::constructors::{
    ortho_from_cubicity, project_to_intersection, realize_ortho_tree, star_ortho_rep,
    unit_bar_tree_rep,
};
use hypervis_core::geometry::{
    disjoint_union, extract_graph, perturb_distinct_heights, verify_multirep, visible, CubeId,
    OrthoCube, OrthoScene, Scene, StandardCube, StandardScene,
};
use hypervis_core::intersection::star_intersection_rep_m;
use hypervis_core::rational::{rat, rat_int};
use hypervis_core::tree::{apply_expansions, Endpoint, PathExpansion, Tree};
use proptest::prelude::*;
use std::collections::BTreeMap;

/// Pairwise-distinct centers on the 1/8 grid, as a standard 2-D scene
/// (not necessarily disjoint; predicates are total anyway).
fn grid_scene(centers: &[(i64, i64)]) -> StandardScene {
    let cubes = centers
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| StandardCube {
            id: CubeId(i),
            center: vec![rat(x, 8), rat(y, 8)],
        })
        .collect();
    StandardScene::from_parts(2, cubes).expect("shape is valid")
}

fn distinct_centers() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::btree_set((0i64..33, 0i64..33), 2..8)
        .prop_map(|s| s.into_iter().collect())
}

proptest! {
    #[test]
    fn visibility_is_symmetric(centers in distinct_centers()) {
        let scene = Scene::Standard(grid_scene(&centers));
        let ids: Vec<CubeId> = (0..centers.len()).map(CubeId).collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                let ab = visible(&scene, a, b).unwrap();
                let ba = visible(&scene, b, a).unwrap();
                prop_assert_eq!(&ab, &ba);
            }
        }
    }

    #[test]
    fn deleting_a_cube_never_removes_edges(centers in distinct_centers()) {
        let scene = grid_scene(&centers);
        let full = extract_graph(&Scene::Standard(scene.clone()));
        for drop in 0..centers.len() {
            let rest: Vec<StandardCube> = scene
                .cubes
                .iter()
                .filter(|c| c.id != CubeId(drop))
                .cloned()
                .collect();
            let sub = extract_graph(&Scene::Standard(
                StandardScene::from_parts(2, rest).unwrap(),
            ));
            for &(a, b) in &full.edges {
                if a != CubeId(drop) && b != CubeId(drop) {
                    prop_assert!(
                        sub.has_edge(a, b),
                        "edge {}-{} vanished after deleting {}", a, b, drop
                    );
                }
            }
        }
    }

    #[test]
    fn path_expansion_adds_exactly_length_vertices(
        seed in 0u64..500,
        size in 2usize..9,
        length in 0usize..3,
    ) {
        let tree = random_trees(seed, 1, (size, size)).remove(0);
        let vertex = (seed as usize) % tree.vertex_count();
        // alternate neighbor assignment between the two endpoints
        let assignment: BTreeMap<usize, Endpoint> = tree
            .neighbors(vertex)
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let end = if length > 0 && i % 2 == 1 { Endpoint::Last } else { Endpoint::Zero };
                (w, end)
            })
            .collect();
        let expansion = PathExpansion { vertex, length, assignment };
        let (expanded, _, path) = hypervis_core::tree::path_expand(&tree, &expansion).unwrap();
        prop_assert_eq!(expanded.vertex_count(), tree.vertex_count() + length);
        prop_assert_eq!(path.len(), length + 1);
    }

    #[test]
    fn bfs_is_reproducible(seed in 0u64..300, size in 1usize..12) {
        let tree = random_trees(seed, 1, (size, size)).remove(0);
        let root = (seed as usize) % size;
        prop_assert_eq!(tree.bfs_order(root).unwrap(), tree.bfs_order(root).unwrap());
    }
}

/// Deterministic randomized orthogonal scenes with height ties.
fn random_tied_scene(seed: u64) -> OrthoScene {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let count = rng.gen_range(2..=7);
        let cubes: Vec<OrthoCube> = (0..count)
            .map(|i| OrthoCube {
                id: CubeId(i),
                center: vec![rat(rng.gen_range(0..28), 4)],
                height: rat_int(rng.gen_range(0..3)),
            })
            .collect();
        if let Ok(scene) = OrthoScene::new(1, cubes) {
            let heights: std::collections::BTreeSet<_> =
                scene.cubes.iter().map(|c| c.height.clone()).collect();
            if heights.len() < scene.cubes.len() {
                return scene;
            }
        }
    }
}

#[test]
fn perturbation_preserves_the_graph_on_tied_scenes() {
    for seed in 0..200 {
        let scene = random_tied_scene(seed);
        let before = extract_graph(&Scene::Ortho(scene.clone()));
        let perturbed = perturb_distinct_heights(&scene);
        let mut heights: Vec<_> = perturbed.cubes.iter().map(|c| c.height.clone()).collect();
        heights.sort();
        heights.dedup();
        assert_eq!(heights.len(), perturbed.cubes.len(), "seed {seed}: ties remain");
        let after = extract_graph(&Scene::Ortho(perturbed));
        assert_eq!(before.edges, after.edges, "seed {seed}");
    }
}

#[test]
fn disjoint_union_preserves_both_quotients() {
    let caterpillar =
        Tree::from_edges(7, &[(0, 1), (1, 2), (0, 3), (0, 4), (2, 5), (2, 6)]).unwrap();
    let a = unit_bar_tree_rep(&caterpillar).unwrap();
    let b = star_ortho_rep(1, 3).unwrap();
    let union = disjoint_union(&a, &b).unwrap();
    // counts add per vertex, and the union graph is the two graphs side by side
    assert_eq!(union.scene.cube_count(), a.scene.cube_count() + b.scene.cube_count());
    let graph = extract_graph(&union.scene);
    assert_eq!(
        graph.edge_count(),
        extract_graph(&a.scene).edge_count() + extract_graph(&b.scene).edge_count()
    );
    assert_eq!(union.assignment[&0].len(), 2);
}

#[test]
fn cubicity_lift_verifies_on_random_small_trees() {
    // the realization path runs base search + expansion lift + verification
    for n in [1usize, 2] {
        let mut done = 0;
        let mut seed = 1000;
        while done < 60 {
            let tree = random_trees(seed, 1, (2, 8)).remove(0);
            seed += 1;
            if tree.max_degree() > (1 << n) + 1 {
                continue;
            }
            match realize_ortho_tree(&tree, n) {
                Ok(rep) => {
                    let report = verify_multirep(&rep, &tree).unwrap();
                    assert!(report.passed, "n={n} tree {:?}", tree.edges());
                    assert_eq!(rep.max_cubes_per_vertex(), 1);
                    done += 1;
                }
                Err(_) => {
                    // the family is incomplete for n = 1 (non-caterpillars)
                    assert!(
                        n == 1 || tree.max_degree() > 1 << n,
                        "n={n} should realize {:?}",
                        tree.edges()
                    );
                }
            }
        }
    }
}

#[test]
fn star_expansion_lift_verifies_for_random_splits() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.gen_range(1..=2usize);
        let m = rng.gen_range(1..=(1 << n));
        let base = Tree::star(m);
        let rep = star_intersection_rep_m(n, m);
        let hub_len = rng.gen_range(0..=2usize);
        let mut expansions: Vec<PathExpansion> = (0..base.vertex_count())
            .map(|u| PathExpansion::trivial(&base, u))
            .collect();
        expansions[0] = PathExpansion {
            vertex: 0,
            length: hub_len,
            assignment: (1..=m)
                .map(|leaf| {
                    let end = if hub_len > 0 && rng.gen_bool(0.5) {
                        Endpoint::Last
                    } else {
                        Endpoint::Zero
                    };
                    (leaf, end)
                })
                .collect(),
        };
        for leaf in 1..=m {
            let len = rng.gen_range(0..=2usize);
            expansions[leaf] = PathExpansion {
                vertex: leaf,
                length: len,
                assignment: [(0, Endpoint::Zero)].into_iter().collect(),
            };
        }
        let (multirep, expanded) = ortho_from_cubicity(&base, &rep, &expansions, 0).unwrap();
        let report = verify_multirep(&multirep, &expanded).unwrap();
        assert!(report.passed, "{}", report.summary());
    }
}

#[test]
fn h1perp_lies_in_bounds_up_to_twelve_vertices() {
    use hypervis_core::canonical::nonisomorphic_trees;
    use hypervis_core::decomposition::{h1perp_bounds, h1perp_exact};
    for n in 1..=12 {
        for tree in nonisomorphic_trees(n) {
            let (low, high) = h1perp_bounds(&tree);
            let (value, _) = h1perp_exact(&tree).unwrap();
            assert!(low <= value && value <= high, "tree {:?}", tree.edges());
            if tree.max_degree() % 3 != 0 {
                assert_eq!(value, low, "tree {:?}", tree.edges());
            }
        }
    }
}

#[test]
fn projection_inverts_the_lift_up_to_relabeling() {
    // caterpillars and stars exercise stacks of every orientation
    let subjects: Vec<Tree> = vec![
        Tree::path(5),
        Tree::star(3),
        Tree::from_edges(7, &[(0, 1), (1, 2), (0, 3), (0, 4), (2, 5), (2, 6)]).unwrap(),
        Tree::from_edges(6, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)]).unwrap(),
    ];
    for tree in subjects {
        let rep = unit_bar_tree_rep(&tree).unwrap();
        let (base, int_rep, expansions) = project_to_intersection(&rep, &tree).unwrap();
        int_rep.verify_against(&base).unwrap();
        let expanded = apply_expansions(&base, &expansions).unwrap();
        assert!(
            is_isomorphic(&expanded.tree, &tree),
            "round trip changed the tree {:?}",
            tree.edges()
        );
    }
}
