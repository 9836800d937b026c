//! Orthogonal representations from intersection representations: each base
//! vertex becomes a stack of cubes above its intersection cube, heights
//! driven by the edge two-coloring; plus the projection inverse, unit-bar
//! trees, and star representations.

use super::coloring::{edge_two_color, neighbor_side, stack_heights, ColoringError};
use crate::caterpillar::{recognize_caterpillar, CaterpillarObstruction};
use crate::geometry::{
    verify_multirep, CubeId, MultiRep, MultiRepError, OrthoCube, OrthoScene, Scene,
};
use crate::intersection::{
    epsilon_separate, path_intersection_rep, star_intersection_rep_m, IntersectionError,
    IntersectionRep,
};
use crate::rational::{rat_int, Rat};
use crate::tree::{apply_expansions, Endpoint, ExpansionError, PathExpansion, Tree};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    MultiRep(#[from] MultiRepError),
    #[error("intersection of ({0}, {1}) has no interior; separate the representation first")]
    DegenerateIntersection(usize, usize),
    #[error("not a subdivided caterpillar with maximum degree 3: {0}")]
    NotCaterpillar(CaterpillarObstruction),
    #[error("star size {m} out of range for dimension {n} (max 2^n + 1 = {max})")]
    StarTooLarge { m: usize, n: usize, max: usize },
    #[error("projection is not consistent with any tree: {0}")]
    ProjectionNotTree(String),
    #[error("construction failed verification: {0}")]
    VerificationFailed(String),
    #[error("maximum degree {delta} exceeds the model bound {bound} for dimension {n}")]
    DegreeExceedsModel { delta: usize, bound: usize, n: usize },
    #[error("no realization found within the available base families")]
    NoRealization,
}

/// Lifts an intersection representation of `base_tree` to an orthogonal
/// representation of the expanded tree: vertex u's expansion becomes a
/// stack of `length + 1` cubes at u's center, evenly spaced within
/// [h − 1/3, h + 1/3] where h is u's coloring height. The endpoint-0 side
/// of each stack faces the endpoint-0 class of u's expansion.
///
/// The result is keyed by expanded-tree vertex ids and self-verified.
pub fn ortho_from_cubicity(
    base_tree: &Tree,
    rep: &IntersectionRep,
    expansions: &[PathExpansion],
    root: usize,
) -> Result<(MultiRep, Tree), ConstructError> {
    rep.verify_against(base_tree)?;
    // every adjacency needs interior overlap: stacks share the base box
    for &(u, v) in base_tree.edges() {
        let cu = rep.cube_of(u).expect("verified");
        let cv = rep.cube_of(v).expect("verified");
        let fat = cu
            .center
            .iter()
            .zip(&cv.center)
            .all(|(x, y)| num_traits::Signed::abs(&(x - y)) < rat_int(1));
        if !fat {
            return Err(ConstructError::DegenerateIntersection(u, v));
        }
    }
    let coloring = edge_two_color(base_tree, expansions, root)?;
    let heights = coloring.heights(base_tree);
    let expanded = apply_expansions(base_tree, expansions)?;

    let mut cubes = Vec::new();
    let mut assignment: BTreeMap<usize, BTreeSet<CubeId>> = BTreeMap::new();
    for u in 0..base_tree.vertex_count() {
        let count = expansions[u].length + 1;
        let levels = stack_heights(heights[u], count);
        // orient the stack: endpoint 0 faces its class's side
        let zero_side = expansions[u]
            .assignment
            .iter()
            .find(|(_, &e)| e == Endpoint::Zero)
            .map(|(&w, _)| neighbor_side(base_tree, &coloring, u, w))
            .or_else(|| {
                expansions[u]
                    .assignment
                    .iter()
                    .find(|(_, &e)| e == Endpoint::Last)
                    .map(|(&w, _)| -neighbor_side(base_tree, &coloring, u, w))
            })
            .unwrap_or(-1);
        let center = rep.cube_of(u).expect("verified").center.clone();
        for pos in 0..count {
            // stack position 0 sits at the bottom when its side is below
            let level_index = if zero_side < 0 { pos } else { count - 1 - pos };
            let id = CubeId(expanded.id_of(u, pos));
            cubes.push(OrthoCube {
                id,
                center: center.clone(),
                height: levels[level_index].clone(),
            });
            assignment.entry(expanded.id_of(u, pos)).or_default().insert(id);
        }
    }
    let scene = OrthoScene::from_parts(rep.dimension, cubes)
        .map_err(|e| ConstructError::VerificationFailed(e.to_string()))?;
    let multirep = MultiRep::new(Scene::Ortho(scene), assignment)?;
    let report = verify_multirep(&multirep, &expanded.tree)?;
    if !report.passed {
        return Err(ConstructError::VerificationFailed(report.summary()));
    }
    Ok((multirep, expanded.tree))
}

/// Inverse of the lift: drops heights, merges identically projected cubes
/// into base vertices, and recovers the expansions. Groups must be paths
/// attached to the outside only at their two ends; anything else is
/// reported as not tree-representable.
pub fn project_to_intersection(
    rep: &MultiRep,
    tree: &Tree,
) -> Result<(Tree, IntersectionRep, Vec<PathExpansion>), ConstructError> {
    let Scene::Ortho(scene) = &rep.scene else {
        return Err(ConstructError::ProjectionNotTree(
            "projection applies to orthogonal scenes".to_string(),
        ));
    };
    let report = verify_multirep(rep, tree)?;
    if !report.passed || rep.max_cubes_per_vertex() != 1 {
        return Err(ConstructError::ProjectionNotTree(
            "input must verify with one cube per vertex".to_string(),
        ));
    }
    let vertex_of: BTreeMap<CubeId, usize> = rep
        .assignment
        .iter()
        .map(|(&v, cubes)| (*cubes.iter().next().expect("one cube"), v))
        .collect();
    // group cubes by identical projection
    let mut groups: BTreeMap<Vec<Rat>, Vec<CubeId>> = BTreeMap::new();
    for c in &scene.cubes {
        groups.entry(c.center.clone()).or_default().push(c.id);
    }
    let mut grouped: Vec<(Vec<Rat>, Vec<CubeId>)> = groups.into_iter().collect();
    // deterministic base ids: by smallest contained tree vertex
    grouped.sort_by_key(|(_, ids)| ids.iter().map(|c| vertex_of[c]).min());
    let base_index_of_vertex: BTreeMap<usize, usize> = grouped
        .iter()
        .enumerate()
        .flat_map(|(g, (_, ids))| ids.iter().map(move |c| (g, c)))
        .map(|(g, c)| (vertex_of[c], g))
        .collect();

    // each group must induce a path in the tree, ordered by height
    let mut group_paths: Vec<Vec<usize>> = Vec::new();
    for (_, ids) in &grouped {
        let mut members: Vec<CubeId> = ids.clone();
        members.sort_by_key(|c| scene.cube(*c).expect("exists").height.clone());
        let path: Vec<usize> = members.iter().map(|c| vertex_of[c]).collect();
        for w in path.windows(2) {
            if !tree.has_edge(w[0], w[1]) {
                return Err(ConstructError::ProjectionNotTree(format!(
                    "stacked vertices {} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        // interior vertices may not reach outside the group
        let in_group: BTreeSet<usize> = path.iter().copied().collect();
        for (i, &v) in path.iter().enumerate() {
            let external = tree
                .neighbors(v)
                .iter()
                .filter(|w| !in_group.contains(w))
                .count();
            if i > 0 && i + 1 < path.len() && external > 0 {
                return Err(ConstructError::ProjectionNotTree(format!(
                    "vertex {v} attaches outside the interior of its stack"
                )));
            }
        }
        group_paths.push(path);
    }

    // base tree from group adjacency
    let mut base_edges = BTreeSet::new();
    for &(u, v) in tree.edges() {
        let (gu, gv) = (base_index_of_vertex[&u], base_index_of_vertex[&v]);
        if gu != gv {
            base_edges.insert((gu.min(gv), gu.max(gv)));
        }
    }
    let base_edges: Vec<(usize, usize)> = base_edges.into_iter().collect();
    let base_tree = Tree::from_edges(grouped.len(), &base_edges)
        .map_err(|e| ConstructError::ProjectionNotTree(e.to_string()))?;

    // expansions: neighbors attach at the low end (position 0) or high end
    let mut expansions = Vec::with_capacity(grouped.len());
    for (g, path) in group_paths.iter().enumerate() {
        let mut assignment = BTreeMap::new();
        for &h in base_tree.neighbors(g) {
            // the unique tree edge between group g and group h
            let mut attach = None;
            for &(u, v) in tree.edges() {
                let (gu, gv) = (base_index_of_vertex[&u], base_index_of_vertex[&v]);
                if (gu, gv) == (g, h) {
                    attach = Some(u);
                } else if (gu, gv) == (h, g) {
                    attach = Some(v);
                }
            }
            let attach = attach.expect("adjacent groups share an edge");
            let end = if path[0] == attach {
                Endpoint::Zero
            } else if *path.last().unwrap() == attach {
                Endpoint::Last
            } else {
                return Err(ConstructError::ProjectionNotTree(format!(
                    "edge into group {g} lands mid-stack at vertex {attach}"
                )));
            };
            if path.len() == 1 {
                assignment.insert(h, Endpoint::Zero);
            } else {
                assignment.insert(h, end);
            }
        }
        expansions.push(PathExpansion {
            vertex: g,
            length: path.len() - 1,
            assignment,
        });
    }

    let int_rep = IntersectionRep {
        dimension: scene.dimension,
        cubes: grouped
            .iter()
            .enumerate()
            .map(|(g, (center, _))| crate::intersection::IntersectionCube {
                id: CubeId(g),
                vertex: g,
                center: center.clone(),
            })
            .collect(),
    };
    int_rep.verify_against(&base_tree)?;
    Ok((base_tree, int_rep, expansions))
}

/// Relabels a representation of the expanded tree back to `tree`'s own
/// vertex ids using a bijection expanded-id → tree vertex.
fn relabel_assignment(rep: &MultiRep, to_tree_vertex: &BTreeMap<usize, usize>) -> MultiRep {
    let assignment = rep
        .assignment
        .iter()
        .map(|(&expanded, cubes)| (to_tree_vertex[&expanded], cubes.clone()))
        .collect();
    MultiRep {
        scene: rep.scene.clone(),
        assignment,
    }
}

/// Unit-bar representation of a subdivided caterpillar with Δ ≤ 3: the
/// witness's base path carries a unit-interval representation, and the
/// expansion lift turns each spine leg into a stack of bars.
pub fn unit_bar_tree_rep(tree: &Tree) -> Result<MultiRep, ConstructError> {
    let witness = recognize_caterpillar(tree).map_err(ConstructError::NotCaterpillar)?;
    let rep = path_intersection_rep(witness.base_path.vertex_count());
    let (rep, _eps) = epsilon_separate(&rep, &witness.base_path)?;
    let (multirep, _expanded) =
        ortho_from_cubicity(&witness.base_path, &rep, &witness.expansions, 0)?;
    // map expanded block ids back onto the input tree's vertices
    let expanded = apply_expansions(&witness.base_path, &witness.expansions)?;
    let mut to_tree = BTreeMap::new();
    for (tree_vertex, &(base, pos)) in witness.vertex_map.iter().enumerate() {
        to_tree.insert(expanded.id_of(base, pos), tree_vertex);
    }
    let relabeled = relabel_assignment(&multirep, &to_tree);
    let report = verify_multirep(&relabeled, tree)?;
    if !report.passed {
        return Err(ConstructError::VerificationFailed(report.summary()));
    }
    Ok(relabeled)
}

/// Orthogonal representation of the star K_{1,m} in dimension n, for
/// m ≤ 2^n + 1. Up to 2^n leaves come straight from the intersection
/// star; the final leaf, when present, is a length-1 expansion of the hub.
pub fn star_ortho_rep(n: usize, m: usize) -> Result<MultiRep, ConstructError> {
    let max = (1usize << n) + 1;
    if m == 0 || m > max {
        return Err(ConstructError::StarTooLarge { m, n, max });
    }
    let tree = Tree::star(m);
    if m <= 1 << n {
        let rep = star_intersection_rep_m(n, m);
        let expansions: Vec<PathExpansion> = (0..tree.vertex_count())
            .map(|u| PathExpansion::trivial(&tree, u))
            .collect();
        let (multirep, _) = ortho_from_cubicity(&tree, &rep, &expansions, 0)?;
        let report = verify_multirep(&multirep, &tree)?;
        if !report.passed {
            return Err(ConstructError::VerificationFailed(report.summary()));
        }
        return Ok(multirep);
    }
    // m = 2^n + 1: expand the hub by one, all original leaves at endpoint 0
    let base = Tree::star(m - 1);
    let rep = star_intersection_rep_m(n, m - 1);
    let mut expansions: Vec<PathExpansion> = (0..base.vertex_count())
        .map(|u| PathExpansion::trivial(&base, u))
        .collect();
    expansions[0] = PathExpansion {
        vertex: 0,
        length: 1,
        assignment: (1..m).map(|leaf| (leaf, Endpoint::Zero)).collect(),
    };
    let (multirep, expanded_tree) = ortho_from_cubicity(&base, &rep, &expansions, 0)?;
    // expanded ids: hub block (0, 1), then each leaf block; relabel to the
    // canonical star: hub position 0 -> 0, hub position 1 -> leaf m
    let expanded = apply_expansions(&base, &expansions)?;
    let mut to_tree = BTreeMap::new();
    to_tree.insert(expanded.id_of(0, 0), 0);
    to_tree.insert(expanded.id_of(0, 1), m);
    for leaf in 1..m {
        to_tree.insert(expanded.id_of(leaf, 0), leaf);
    }
    debug_assert_eq!(expanded_tree.vertex_count(), m + 1);
    let relabeled = relabel_assignment(&multirep, &to_tree);
    let report = verify_multirep(&relabeled, &tree)?;
    if !report.passed {
        return Err(ConstructError::VerificationFailed(report.summary()));
    }
    Ok(relabeled)
}

/// Pads a lower-dimensional orthogonal representation with zero
/// coordinates; visibility is unchanged because the padded projections
/// coincide.
pub fn embed_ortho(rep: &MultiRep, dimension: usize) -> MultiRep {
    let Scene::Ortho(scene) = &rep.scene else {
        panic!("embed_ortho applies to orthogonal scenes");
    };
    assert!(dimension >= scene.dimension);
    let cubes = scene
        .cubes
        .iter()
        .map(|c| {
            let mut center = c.center.clone();
            center.resize(dimension, rat_int(0));
            OrthoCube {
                id: c.id,
                center,
                height: c.height.clone(),
            }
        })
        .collect();
    MultiRep {
        scene: Scene::Ortho(OrthoScene {
            dimension,
            cubes,
        }),
        assignment: rep.assignment.clone(),
    }
}

/// Candidate offsets of a child cube from its parent in the plane: the
/// kissing corners, near-axis positions, and the slot offsets of verified
/// star and double-star layouts, closed under sign and axis symmetry.
/// Everything is a multiple of 1/32, stored as exact 32nds.
fn plane_offsets_32() -> Vec<(i64, i64)> {
    let seeds: [((i64, i64), (i64, i64)); 8] = [
        ((3, 4), (3, 4)),   // kissing corner
        ((7, 8), (0, 1)),   // near-axis
        ((1, 1), (0, 1)),   // touching along an axis
        ((1, 1), (1, 1)),   // touching at a corner
        ((1, 1), (3, 4)),
        ((11, 16), (3, 8)), // outer slots of a hosted cluster
        ((11, 16), (21, 32)),
        ((3, 8), (3, 8)),   // shallow diagonal (leaf slot near a host)
    ];
    let mut out = Vec::new();
    for &(a, b) in &seeds {
        for (p, q) in [(a, b), (b, a)] {
            for sp in [1i64, -1] {
                for sq in [1i64, -1] {
                    let dx = sp * p.0 * 32 / p.1;
                    let dy = sq * q.0 * 32 / q.1;
                    if !out.contains(&(dx, dy)) {
                        out.push((dx, dy));
                    }
                }
            }
        }
    }
    out
}

const BASE_SEARCH_BUDGET: u64 = 2_000_000;

/// Budgeted exact placement search for a unit-square intersection
/// representation of a small tree: vertices are placed in BFS order, each
/// at one of the candidate offsets from its parent, rejecting any
/// adjacency mismatch against the cubes already placed. All arithmetic is
/// exact over 32nds of a unit. Positives are verified; `None` only means
/// no layout over this offset table was found.
fn search_base_rep_2d(base: &Tree, node_budget: u64) -> Option<IntersectionRep> {
    let offsets = plane_offsets_32();
    // root at the most crowded vertex so tight clusters are placed while
    // the plane is still empty
    let root = (0..base.vertex_count())
        .max_by_key(|&v| (base.degree(v), std::cmp::Reverse(v)))
        .expect("nonempty tree");
    let order = base.bfs_order(root).expect("root in range");
    let parent = base.bfs_parents(root);
    let mut pos: Vec<Option<(i64, i64)>> = vec![None; base.vertex_count()];
    pos[order[0]] = Some((0, 0));
    let mut budget = node_budget;

    fn fits(base: &Tree, pos: &[Option<(i64, i64)>], v: usize, p: (i64, i64)) -> bool {
        for (w, q) in pos.iter().enumerate() {
            let Some(q) = q else { continue };
            if w == v {
                continue;
            }
            let intersects = (p.0 - q.0).abs() <= 32 && (p.1 - q.1).abs() <= 32;
            if intersects != base.has_edge(v, w) {
                return false;
            }
        }
        true
    }

    fn rec(
        base: &Tree,
        order: &[usize],
        parent: &[usize],
        offsets: &[(i64, i64)],
        pos: &mut Vec<Option<(i64, i64)>>,
        index: usize,
        budget: &mut u64,
    ) -> bool {
        if index == order.len() {
            return true;
        }
        let v = order[index];
        let anchor = pos[parent[v]].expect("parent placed first");
        // grow outward: prefer offsets pointing away from the placed mass
        let (mut sx, mut sy, mut count) = (0i64, 0i64, 0i64);
        for q in pos.iter().flatten() {
            sx += q.0;
            sy += q.1;
            count += 1;
        }
        let dir = (anchor.0 * count - sx, anchor.1 * count - sy);
        let mut ranked: Vec<(i64, i64)> = offsets.to_vec();
        ranked.sort_by_key(|o| -(o.0 * dir.0 + o.1 * dir.1));
        for off in ranked {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            let candidate = (anchor.0 + off.0, anchor.1 + off.1);
            if !fits(base, pos, v, candidate) {
                continue;
            }
            pos[v] = Some(candidate);
            if rec(base, order, parent, offsets, pos, index + 1, budget) {
                return true;
            }
            pos[v] = None;
        }
        false
    }

    if !rec(base, &order, &parent, &offsets, &mut pos, 1, &mut budget) {
        return None;
    }
    let rep = IntersectionRep {
        dimension: 2,
        cubes: (0..base.vertex_count())
            .map(|v| {
                let (x, y) = pos[v].expect("all placed");
                crate::intersection::IntersectionCube {
                    id: CubeId(v),
                    vertex: v,
                    center: vec![crate::rational::rat(x, 32), crate::rational::rat(y, 32)],
                }
            })
            .collect(),
    };
    rep.verify_against(base).ok().map(|_| rep)
}

/// Intersection representation of a base tree in dimension n: closed-form
/// paths and stars when they apply, otherwise the plane placement search
/// (layouts found in the plane embed into higher dimensions).
fn build_base_rep(base: &Tree, n: usize) -> Option<IntersectionRep> {
    if base.max_degree() > 1 << n {
        return None;
    }
    if base.vertex_count() == 1 {
        return Some(IntersectionRep {
            dimension: n,
            cubes: vec![crate::intersection::IntersectionCube {
                id: CubeId(0),
                vertex: 0,
                center: vec![rat_int(0); n],
            }],
        });
    }
    if base.max_degree() <= 2 {
        // a path: recover the order by walking from a leaf
        let t = base.vertex_count();
        let leaf = (0..t).find(|&v| base.degree(v) == 1).expect("path has a leaf");
        let mut walk = vec![leaf];
        let mut prev = None;
        let mut cur = leaf;
        while walk.len() < t {
            let next = base
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| Some(w) != prev)
                .expect("path continues");
            walk.push(next);
            prev = Some(cur);
            cur = next;
        }
        let template = path_intersection_rep(t).embedded(n);
        let cubes = walk
            .iter()
            .enumerate()
            .map(|(slot, &v)| crate::intersection::IntersectionCube {
                id: CubeId(v),
                vertex: v,
                center: template.cubes[slot].center.clone(),
            })
            .collect();
        return Some(IntersectionRep { dimension: n, cubes });
    }
    let hubs: Vec<usize> = (0..base.vertex_count())
        .filter(|&v| base.degree(v) >= 2)
        .collect();
    if hubs.len() == 1 && base.vertex_count() == base.degree(hubs[0]) + 1 {
        // a star with the hub anywhere in the labeling
        let hub = hubs[0];
        let template = star_intersection_rep_m(n, base.degree(hub));
        let mut cubes = vec![crate::intersection::IntersectionCube {
            id: CubeId(hub),
            vertex: hub,
            center: template.cubes[0].center.clone(),
        }];
        for (slot, &leaf) in base.neighbors(hub).iter().enumerate() {
            cubes.push(crate::intersection::IntersectionCube {
                id: CubeId(leaf),
                vertex: leaf,
                center: template.cubes[slot + 1].center.clone(),
            });
        }
        return Some(IntersectionRep { dimension: n, cubes });
    }
    if n >= 2 && base.max_degree() <= 4 {
        if let Some(rep) = search_base_rep_2d(base, BASE_SEARCH_BUDGET) {
            return Some(rep.embedded(n));
        }
    }
    None
}

/// Enumerates partitions of the tree into vertex groups that each induce a
/// path with external edges only at the path's two ends, contracts, and
/// tries to realize the quotient as an intersection base. Returns the
/// realized orthogonal representation keyed by the tree's own vertex ids.
fn realize_by_expansion_base(tree: &Tree, n: usize) -> Option<MultiRep> {
    // quotient shapes that already failed a base search are skipped
    let mut failed_bases: BTreeSet<String> = BTreeSet::new();
    fn paths_from(tree: &Tree, start: usize, assigned: &[bool]) -> Vec<Vec<usize>> {
        // all induced paths through `start` over unassigned vertices,
        // extending forward first and then from the start end
        let mut out = vec![vec![start]];
        let mut stack = vec![vec![start]];
        while let Some(path) = stack.pop() {
            let head = *path.last().unwrap();
            for &w in tree.neighbors(head) {
                if assigned[w] || path.contains(&w) {
                    continue;
                }
                let mut next = path.clone();
                next.push(w);
                out.push(next.clone());
                stack.push(next);
            }
        }
        let mut full = Vec::new();
        for path in out {
            full.push(path.clone());
            let mut stack = vec![path];
            while let Some(p) = stack.pop() {
                let tail = p[0];
                for &w in tree.neighbors(tail) {
                    if assigned[w] || p.contains(&w) {
                        continue;
                    }
                    let mut next = vec![w];
                    next.extend(p.iter().copied());
                    full.push(next.clone());
                    stack.push(next);
                }
            }
        }
        full.sort();
        full.dedup();
        full
    }

    fn search(
        tree: &Tree,
        n: usize,
        failed_bases: &mut BTreeSet<String>,
        partition: &mut Vec<Vec<usize>>,
        assigned: &mut Vec<bool>,
    ) -> Option<MultiRep> {
        let Some(start) = assigned.iter().position(|&a| !a) else {
            return contract_and_realize(tree, n, failed_bases, partition);
        };
        for path in paths_from(tree, start, assigned) {
            // externals may only attach at the two ends
            let in_path: BTreeSet<usize> = path.iter().copied().collect();
            let ok = path.iter().enumerate().all(|(i, &v)| {
                i == 0
                    || i + 1 == path.len()
                    || tree.neighbors(v).iter().all(|w| in_path.contains(w))
            });
            if !ok {
                continue;
            }
            for &v in &path {
                assigned[v] = true;
            }
            partition.push(path.clone());
            if let Some(rep) = search(tree, n, failed_bases, partition, assigned) {
                return Some(rep);
            }
            partition.pop();
            for &v in &path {
                assigned[v] = false;
            }
        }
        None
    }

    search(
        tree,
        n,
        &mut failed_bases,
        &mut Vec::new(),
        &mut vec![false; tree.vertex_count()],
    )
}

fn contract_and_realize(
    tree: &Tree,
    n: usize,
    failed_bases: &mut BTreeSet<String>,
    partition: &[Vec<usize>],
) -> Option<MultiRep> {
    let mut group_of = vec![usize::MAX; tree.vertex_count()];
    for (g, path) in partition.iter().enumerate() {
        for &v in path {
            group_of[v] = g;
        }
    }
    let mut base_edges = BTreeSet::new();
    for &(u, v) in tree.edges() {
        let (gu, gv) = (group_of[u], group_of[v]);
        if gu != gv && !base_edges.insert((gu.min(gv), gu.max(gv))) {
            return None; // two edges between groups: not a tree quotient
        }
    }
    let base_edges: Vec<(usize, usize)> = base_edges.into_iter().collect();
    let base = Tree::from_edges(partition.len(), &base_edges).ok()?;
    let base_canon = crate::canonical::canonical_form(&base);
    if failed_bases.contains(&base_canon) {
        return None;
    }
    let Some(base_rep) = build_base_rep(&base, n) else {
        failed_bases.insert(base_canon);
        return None;
    };
    // expansions per base vertex, straight off the partition
    let mut expansions: Vec<PathExpansion> = (0..base.vertex_count())
        .map(|u| PathExpansion {
            vertex: u,
            length: 0,
            assignment: BTreeMap::new(),
        })
        .collect();
    for (g, path) in partition.iter().enumerate() {
        let mut assignment = BTreeMap::new();
        for &h in base.neighbors(g) {
            // the tree edge between groups g and h must land at an end of g
            let mut end = None;
            for &(u, v) in tree.edges() {
                if group_of[u] == g && group_of[v] == h {
                    end = Some(u);
                } else if group_of[v] == g && group_of[u] == h {
                    end = Some(v);
                }
            }
            let attach = end.expect("adjacent groups share an edge");
            let e = if path.len() == 1 || path[0] == attach {
                Endpoint::Zero
            } else if *path.last().unwrap() == attach {
                Endpoint::Last
            } else {
                return None; // attaches mid-path
            };
            assignment.insert(h, e);
        }
        expansions[g] = PathExpansion {
            vertex: g,
            length: path.len() - 1,
            assignment,
        };
    }
    let (sep_rep, _) = epsilon_separate(&base_rep, &base).ok()?;
    let (multirep, _) = ortho_from_cubicity(&base, &sep_rep, &expansions, 0).ok()?;
    // relabel expanded ids back to the input tree's vertices
    let expanded = apply_expansions(&base, &expansions).ok()?;
    let mut to_tree = BTreeMap::new();
    for (g, path) in partition.iter().enumerate() {
        for (pos, &tree_vertex) in path.iter().enumerate() {
            to_tree.insert(expanded.id_of(g, pos), tree_vertex);
        }
    }
    let relabeled = relabel_assignment(&multirep, &to_tree);
    verify_multirep(&relabeled, tree)
        .ok()
        .filter(|r| r.passed)
        .map(|_| relabeled)
}

/// Attempts a one-cube-per-vertex orthogonal representation of `tree` in
/// dimension `n`, using the families this crate can build: subdivided
/// caterpillars with Δ ≤ 3 (any dimension), and path expansions of small
/// stars and double stars.
pub fn realize_ortho_tree(tree: &Tree, n: usize) -> Result<MultiRep, ConstructError> {
    let bound = (1usize << n) + 1;
    if tree.max_degree() > bound {
        return Err(ConstructError::DegreeExceedsModel {
            delta: tree.max_degree(),
            bound,
            n,
        });
    }
    if tree.vertex_count() == 1 {
        let scene = OrthoScene::new(
            n,
            vec![OrthoCube {
                id: CubeId(0),
                center: vec![rat_int(0); n],
                height: rat_int(0),
            }],
        )
        .expect("single cube");
        return Ok(MultiRep::new(
            Scene::Ortho(scene),
            [(0, [CubeId(0)].into_iter().collect())].into_iter().collect(),
        )?);
    }
    if let Ok(bars) = unit_bar_tree_rep(tree) {
        return Ok(if n > 1 { embed_ortho(&bars, n) } else { bars });
    }
    realize_by_expansion_base(tree, n).ok_or(ConstructError::NoRealization)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::is_isomorphic;
    use crate::geometry::extract_graph;
    use crate::intersection::double_star_tree;

    #[test]
    fn path_base_with_trivial_expansions_gives_bars() {
        for t in 2..=5 {
            let tree = Tree::path(t);
            let rep = path_intersection_rep(t);
            let expansions: Vec<_> = (0..t).map(|u| PathExpansion::trivial(&tree, u)).collect();
            let (multirep, expanded) = ortho_from_cubicity(&tree, &rep, &expansions, 0).unwrap();
            assert!(is_isomorphic(&expanded, &tree));
            let report = verify_multirep(&multirep, &expanded).unwrap();
            assert!(report.passed, "{}", report.summary());
        }
    }

    #[test]
    fn expanded_star_gives_k15_in_two_dimensions() {
        let rep = star_ortho_rep(2, 5).unwrap();
        let report = verify_multirep(&rep, &Tree::star(5)).unwrap();
        assert!(report.passed, "{}", report.summary());
        assert_eq!(rep.max_cubes_per_vertex(), 1);
    }

    #[test]
    fn star_without_expansion_realizes_k14() {
        let rep = star_ortho_rep(2, 4).unwrap();
        assert!(verify_multirep(&rep, &Tree::star(4)).unwrap().passed);
    }

    #[test]
    fn bar_star_matches_caterpillar_route() {
        let rep = star_ortho_rep(1, 3).unwrap();
        assert!(verify_multirep(&rep, &Tree::star(3)).unwrap().passed);
    }

    #[test]
    fn star_eight_in_three_dimensions() {
        let rep = star_ortho_rep(3, 8).unwrap();
        assert!(verify_multirep(&rep, &Tree::star(8)).unwrap().passed);
    }

    #[test]
    fn star_size_guard() {
        assert!(matches!(
            star_ortho_rep(2, 6),
            Err(ConstructError::StarTooLarge { .. })
        ));
    }

    #[test]
    fn degenerate_rep_is_rejected() {
        let rep = IntersectionRep {
            dimension: 1,
            cubes: vec![
                crate::intersection::IntersectionCube {
                    id: CubeId(0),
                    vertex: 0,
                    center: vec![rat_int(0)],
                },
                crate::intersection::IntersectionCube {
                    id: CubeId(1),
                    vertex: 1,
                    center: vec![rat_int(1)],
                },
            ],
        };
        let tree = Tree::path(2);
        let expansions: Vec<_> = (0..2).map(|u| PathExpansion::trivial(&tree, u)).collect();
        assert!(matches!(
            ortho_from_cubicity(&tree, &rep, &expansions, 0),
            Err(ConstructError::DegenerateIntersection(0, 1))
        ));
    }

    #[test]
    fn unit_bar_rep_of_paths_and_caterpillars() {
        for tree in [
            Tree::path(5),
            Tree::from_edges(7, &[(0, 1), (1, 2), (0, 3), (0, 4), (2, 5), (2, 6)]).unwrap(),
        ] {
            let rep = unit_bar_tree_rep(&tree).unwrap();
            let report = verify_multirep(&rep, &tree).unwrap();
            assert!(report.passed, "{}", report.summary());
            assert_eq!(rep.scene.cube_count(), tree.vertex_count());
        }
    }

    #[test]
    fn unit_bar_rejects_k14() {
        assert!(matches!(
            unit_bar_tree_rep(&Tree::star(4)),
            Err(ConstructError::NotCaterpillar(_))
        ));
    }

    #[test]
    fn projection_round_trips_k15() {
        let rep = star_ortho_rep(2, 5).unwrap();
        let tree = Tree::star(5);
        let (base, int_rep, expansions) = project_to_intersection(&rep, &tree).unwrap();
        assert!(is_isomorphic(&base, &Tree::star(4)));
        int_rep.verify_against(&base).unwrap();
        assert_eq!(expansions.iter().map(|e| e.length).sum::<usize>(), 1);
        // rebuilding from the recovered pieces reproduces the tree shape
        let expanded = apply_expansions(&base, &expansions).unwrap();
        assert!(is_isomorphic(&expanded.tree, &tree));
    }

    #[test]
    fn projection_of_staggered_bars_recovers_the_path() {
        let tree = Tree::path(4);
        let rep = unit_bar_tree_rep(&tree).unwrap();
        let (base, int_rep, expansions) = project_to_intersection(&rep, &tree).unwrap();
        assert!(is_isomorphic(&base, &tree));
        int_rep.verify_against(&base).unwrap();
        assert!(expansions.iter().all(|e| e.length == 0));
    }

    #[test]
    fn projection_merges_identical_projections() {
        // two stacked bars realizing P2 project to a single base vertex
        let scene = OrthoScene::new(
            1,
            vec![
                OrthoCube { id: CubeId(0), center: vec![rat_int(0)], height: rat_int(0) },
                OrthoCube { id: CubeId(1), center: vec![rat_int(0)], height: rat_int(1) },
            ],
        )
        .unwrap();
        let rep = MultiRep::new(
            Scene::Ortho(scene),
            [(0, [CubeId(0)].into()), (1, [CubeId(1)].into())]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let (base, _, expansions) = project_to_intersection(&rep, &Tree::path(2)).unwrap();
        assert_eq!(base.vertex_count(), 1);
        assert_eq!(expansions[0].length, 1);
    }

    #[test]
    fn realizes_spiders_and_double_structures() {
        // spider: center with 4 legs of length 2 (expansion of K_{1,4})
        let mut edges = Vec::new();
        for i in 0..4 {
            edges.push((0, 1 + 2 * i));
            edges.push((1 + 2 * i, 2 + 2 * i));
        }
        let spider = Tree::from_edges(9, &edges).unwrap();
        let rep = realize_ortho_tree(&spider, 2).unwrap();
        assert!(verify_multirep(&rep, &spider).unwrap().passed);

        // H-tree: two adjacent degree-3 hubs with two legs of length 2 each
        let h = Tree::from_edges(
            10,
            &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (1, 6), (6, 7), (1, 8), (8, 9)],
        )
        .unwrap();
        let rep = realize_ortho_tree(&h, 2).unwrap();
        assert!(verify_multirep(&rep, &h).unwrap().passed);

        // double star S(3,3)
        let s33 = double_star_tree(3, 3);
        let rep = realize_ortho_tree(&s33, 2).unwrap();
        assert!(verify_multirep(&rep, &s33).unwrap().passed);
    }

    #[test]
    fn degree_guard_rejects_overfull_trees() {
        for n in 1..=3 {
            let too_big = Tree::star((1 << n) + 2);
            assert!(matches!(
                realize_ortho_tree(&too_big, n),
                Err(ConstructError::DegreeExceedsModel { .. })
            ));
        }
    }

    #[test]
    fn embedding_preserves_the_graph() {
        let rep = unit_bar_tree_rep(&Tree::path(4)).unwrap();
        let embedded = embed_ortho(&rep, 3);
        assert_eq!(
            extract_graph(&rep.scene).edges,
            extract_graph(&embedded.scene).edges
        );
    }
}
