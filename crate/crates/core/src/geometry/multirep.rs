//! Multi-cube representations: each tree vertex owns one or more cubes,
//! no two cubes of one vertex may see each other, and the quotient graph
//! must reproduce the tree exactly.

use super::scene::{CubeId, OrthoScene, Scene, SceneViolation};
use super::visibility::{extract_graph, visible, SightLine};
use crate::rational::{rat, rat_int, Rat};
use crate::tree::Tree;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MultiRepError {
    #[error("cube {0} is not assigned to any vertex")]
    UnassignedCube(CubeId),
    #[error("cube {0} is assigned to two vertices")]
    DoublyAssigned(CubeId),
    #[error("vertex {0} has an empty cube set")]
    EmptyVertex(usize),
    #[error("assignment names cube {0} that is not in the scene")]
    PhantomCube(CubeId),
    #[error("assignment covers vertices {found:?}, expected 0..{expected}")]
    DomainMismatch { found: Vec<usize>, expected: usize },
    #[error("representations disagree in model or dimension")]
    ModelMismatch,
    #[error("disjoint union needs a second coordinate axis in the standard model")]
    NoEscapeAxis,
    #[error("split did not terminate within the expected number of repairs")]
    SplitDiverged,
    #[error("split requires a representation that verifies against the tree")]
    SplitOnInvalidRep,
}

/// A scene plus the vertex → cubes assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiRep {
    pub scene: Scene,
    pub assignment: BTreeMap<usize, BTreeSet<CubeId>>,
}

impl MultiRep {
    /// Checks that the assignment and the scene name exactly the same cubes,
    /// each cube exactly once, with no empty vertex class.
    pub fn new(
        scene: Scene,
        assignment: BTreeMap<usize, BTreeSet<CubeId>>,
    ) -> Result<Self, MultiRepError> {
        let ids: BTreeSet<CubeId> = scene.cube_ids().into_iter().collect();
        let mut seen: BTreeSet<CubeId> = BTreeSet::new();
        for (&v, cubes) in &assignment {
            if cubes.is_empty() {
                return Err(MultiRepError::EmptyVertex(v));
            }
            for &c in cubes {
                if !ids.contains(&c) {
                    return Err(MultiRepError::PhantomCube(c));
                }
                if !seen.insert(c) {
                    return Err(MultiRepError::DoublyAssigned(c));
                }
            }
        }
        if let Some(&missing) = ids.difference(&seen).next() {
            return Err(MultiRepError::UnassignedCube(missing));
        }
        Ok(MultiRep { scene, assignment })
    }

    pub fn vertex_of(&self, cube: CubeId) -> Option<usize> {
        self.assignment
            .iter()
            .find(|(_, cubes)| cubes.contains(&cube))
            .map(|(&v, _)| v)
    }

    pub fn max_cubes_per_vertex(&self) -> usize {
        self.assignment.values().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Restriction to a subset of cubes; vertices left without cubes drop out.
    pub fn restrict(&self, keep: &BTreeSet<CubeId>) -> MultiRep {
        let scene = match &self.scene {
            Scene::Standard(s) => Scene::Standard(super::scene::StandardScene {
                dimension: s.dimension,
                cubes: s.cubes.iter().filter(|c| keep.contains(&c.id)).cloned().collect(),
            }),
            Scene::Ortho(s) => Scene::Ortho(OrthoScene {
                dimension: s.dimension,
                cubes: s.cubes.iter().filter(|c| keep.contains(&c.id)).cloned().collect(),
            }),
        };
        let assignment = self
            .assignment
            .iter()
            .filter_map(|(&v, cubes)| {
                let kept: BTreeSet<CubeId> = cubes.intersection(keep).copied().collect();
                (!kept.is_empty()).then_some((v, kept))
            })
            .collect();
        MultiRep { scene, assignment }
    }
}

/// Outcome of checking a representation against a tree.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub scene_violations: Vec<SceneViolation>,
    pub same_vertex_sightlines: Vec<(CubeId, CubeId)>,
    /// tree edges with no realizing sightline
    pub missing_edges: Vec<(usize, usize)>,
    /// quotient edges absent from the tree
    pub extra_edges: Vec<(usize, usize)>,
    pub per_vertex_counts: BTreeMap<usize, usize>,
    pub max_cubes_per_vertex: usize,
    pub passed: bool,
}

impl VerifyReport {
    pub fn summary(&self) -> String {
        let mut lines = Vec::new();
        lines.push(if self.passed { "PASS".to_string() } else { "FAIL".to_string() });
        for v in &self.scene_violations {
            lines.push(format!("  disjointness: cubes {} and {}: {}", v.a, v.b, v.reason));
        }
        for (a, b) in &self.same_vertex_sightlines {
            lines.push(format!("  same-vertex sightline between cubes {a} and {b}"));
        }
        for (u, v) in &self.missing_edges {
            lines.push(format!("  missing tree edge ({u}, {v})"));
        }
        for (u, v) in &self.extra_edges {
            lines.push(format!("  extra adjacency ({u}, {v}) not in the tree"));
        }
        lines.push(format!("  max cubes per vertex: {}", self.max_cubes_per_vertex));
        lines.join("\n")
    }
}

/// Full check of a representation: scene validity, the same-vertex rule,
/// and edge-by-edge comparison of the quotient graph with the tree.
pub fn verify_multirep(rep: &MultiRep, tree: &Tree) -> Result<VerifyReport, MultiRepError> {
    let vertices: Vec<usize> = rep.assignment.keys().copied().collect();
    let expected: Vec<usize> = (0..tree.vertex_count()).collect();
    if vertices != expected {
        return Err(MultiRepError::DomainMismatch {
            found: vertices,
            expected: tree.vertex_count(),
        });
    }
    let scene_violations = rep.scene.violations();
    let graph = extract_graph(&rep.scene);
    let owner: BTreeMap<CubeId, usize> = rep
        .assignment
        .iter()
        .flat_map(|(&v, cubes)| cubes.iter().map(move |&c| (c, v)))
        .collect();
    let mut same_vertex = Vec::new();
    let mut quotient: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(a, b) in &graph.edges {
        let (va, vb) = (owner[&a], owner[&b]);
        if va == vb {
            same_vertex.push((a, b));
        } else {
            quotient.insert((va.min(vb), va.max(vb)));
        }
    }
    let tree_edges: BTreeSet<(usize, usize)> = tree.edges().iter().copied().collect();
    let missing_edges: Vec<_> = tree_edges.difference(&quotient).copied().collect();
    let extra_edges: Vec<_> = quotient.difference(&tree_edges).copied().collect();
    let per_vertex_counts: BTreeMap<usize, usize> = rep
        .assignment
        .iter()
        .map(|(&v, cubes)| (v, cubes.len()))
        .collect();
    let max_cubes_per_vertex = per_vertex_counts.values().copied().max().unwrap_or(0);
    let passed = scene_violations.is_empty()
        && same_vertex.is_empty()
        && missing_edges.is_empty()
        && extra_edges.is_empty();
    Ok(VerifyReport {
        scene_violations,
        same_vertex_sightlines: same_vertex,
        missing_edges,
        extra_edges,
        per_vertex_counts,
        max_cubes_per_vertex,
        passed,
    })
}

fn standard_extent(scene: &super::scene::StandardScene, axis: usize) -> Option<(Rat, Rat)> {
    let half = rat(1, 2);
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for c in &scene.cubes {
        let l = &c.center[axis] - &half;
        let h = &c.center[axis] + &half;
        lo = Some(match lo {
            Some(x) => x.min(l),
            None => l,
        });
        hi = Some(match hi {
            Some(x) => x.max(h),
            None => h,
        });
    }
    lo.zip(hi)
}

fn ortho_extent(scene: &OrthoScene, axis: usize) -> Option<(Rat, Rat)> {
    let half = rat(1, 2);
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for c in &scene.cubes {
        let l = &c.center[axis] - &half;
        let h = &c.center[axis] + &half;
        lo = Some(match lo {
            Some(x) => x.min(l),
            None => l,
        });
        hi = Some(match hi {
            Some(x) => x.max(h),
            None => h,
        });
    }
    lo.zip(hi)
}

fn ortho_height_extent(scene: &OrthoScene) -> Option<(Rat, Rat)> {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for c in &scene.cubes {
        lo = Some(match lo {
            Some(x) => x.min(c.height.clone()),
            None => c.height.clone(),
        });
        hi = Some(match hi {
            Some(x) => x.max(c.height.clone()),
            None => c.height.clone(),
        });
    }
    lo.zip(hi)
}

/// Places `b` next to `a` so that no cube of one sees (or touches) a cube
/// of the other, and merges the assignments (per-vertex counts add).
///
/// The second scene is translated along axis 1 past the first scene's
/// extent, and along axis 2 (standard model) or in height (orthogonal
/// model) by its own extent plus a margin of 2 — a fixed offset of 2 alone
/// would leave cross-scene channels open. Cube ids of `b` are shifted past
/// the maximum id of `a`. The absence of cross edges is re-checked.
pub fn disjoint_union(a: &MultiRep, b: &MultiRep) -> Result<MultiRep, MultiRepError> {
    if a.scene.model() != b.scene.model() || a.scene.dimension() != b.scene.dimension() {
        return Err(MultiRepError::ModelMismatch);
    }
    if b.scene.cube_count() == 0 {
        return Ok(a.clone());
    }
    if a.scene.cube_count() == 0 {
        return Ok(b.clone());
    }
    let id_shift = a.scene.max_id().unwrap_or(0) + 1;
    let margin = rat_int(2);
    let merged_scene = match (&a.scene, &b.scene) {
        (Scene::Standard(sa), Scene::Standard(sb)) => {
            if sa.dimension < 2 {
                // on a line, the outermost cubes of the two scenes always
                // see each other: there is no direction to escape to
                return Err(MultiRepError::NoEscapeAxis);
            }
            let (_, a1_hi) = standard_extent(sa, 0).expect("nonempty");
            let (b1_lo, _) = standard_extent(sb, 0).expect("nonempty");
            let (_, a2_hi) = standard_extent(sa, 1).expect("nonempty");
            let (b2_lo, _) = standard_extent(sb, 1).expect("nonempty");
            let mut offset = vec![rat_int(0); sa.dimension];
            offset[0] = &a1_hi - &b1_lo + &margin;
            offset[1] = &a2_hi - &b2_lo + &margin;
            let moved = sb.translated(&offset);
            let mut cubes = sa.cubes.clone();
            cubes.extend(moved.cubes.into_iter().map(|mut c| {
                c.id = CubeId(c.id.0 + id_shift);
                c
            }));
            Scene::Standard(super::scene::StandardScene {
                dimension: sa.dimension,
                cubes,
            })
        }
        (Scene::Ortho(sa), Scene::Ortho(sb)) => {
            let (_, a1_hi) = ortho_extent(sa, 0).expect("nonempty");
            let (b1_lo, _) = ortho_extent(sb, 0).expect("nonempty");
            let (_, ah_hi) = ortho_height_extent(sa).expect("nonempty");
            let (bh_lo, _) = ortho_height_extent(sb).expect("nonempty");
            let mut offset = vec![rat_int(0); sa.dimension];
            offset[0] = &a1_hi - &b1_lo + &margin;
            let height_offset = &ah_hi - &bh_lo + &margin;
            let moved = sb.translated(&offset, &height_offset);
            let mut cubes = sa.cubes.clone();
            cubes.extend(moved.cubes.into_iter().map(|mut c| {
                c.id = CubeId(c.id.0 + id_shift);
                c
            }));
            Scene::Ortho(OrthoScene {
                dimension: sa.dimension,
                cubes,
            })
        }
        _ => return Err(MultiRepError::ModelMismatch),
    };
    let mut assignment = a.assignment.clone();
    for (&v, cubes) in &b.assignment {
        let entry = assignment.entry(v).or_default();
        for &c in cubes {
            entry.insert(CubeId(c.0 + id_shift));
        }
    }
    let rep = MultiRep::new(merged_scene, assignment)?;
    // required check: the union must not create any cross-scene sightline
    let a_ids: BTreeSet<CubeId> = a.scene.cube_ids().into_iter().collect();
    for &x in &a_ids {
        for &cb in &b.scene.cube_ids() {
            let y = CubeId(cb.0 + id_shift);
            debug_assert!(
                visible(&rep.scene, x, y).expect("cubes exist").is_none(),
                "disjoint union created a cross sightline {x}-{y}"
            );
        }
    }
    Ok(rep)
}

/// Folds a list of representations into one scene by repeated disjoint
/// union, in the given order.
pub fn disjoint_union_all(pieces: Vec<MultiRep>) -> Result<MultiRep, MultiRepError> {
    let mut iter = pieces.into_iter();
    let first = iter.next().expect("at least one piece to union");
    iter.try_fold(first, |acc, p| disjoint_union(&acc, &p))
}

/// Makes all heights of an orthogonal scene pairwise distinct without
/// changing the visibility graph.
///
/// Ties are resolved in cube-id order: the i-th member of a tie group is
/// lifted by i·δ, δ = (smallest positive gap between distinct original
/// heights, or 1) / (2 · cube count), which preserves the relative order
/// of all originally distinct heights.
pub fn perturb_distinct_heights(scene: &OrthoScene) -> OrthoScene {
    let mut heights: Vec<Rat> = scene.cubes.iter().map(|c| c.height.clone()).collect();
    heights.sort();
    heights.dedup();
    let mut min_gap: Option<Rat> = None;
    for w in heights.windows(2) {
        let gap = &w[1] - &w[0];
        min_gap = Some(match min_gap {
            Some(g) => g.min(gap),
            None => gap,
        });
    }
    let base_gap = min_gap.unwrap_or_else(|| rat_int(1));
    let delta = base_gap / rat_int(2 * scene.cubes.len().max(1) as i64);
    let mut order: Vec<usize> = (0..scene.cubes.len()).collect();
    order.sort_by_key(|&i| (scene.cubes[i].height.clone(), scene.cubes[i].id));
    let mut cubes = scene.cubes.clone();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scene.cubes[order[j]].height == scene.cubes[order[i]].height {
            j += 1;
        }
        for (k, &idx) in order[i..j].iter().enumerate() {
            cubes[idx].height = &scene.cubes[idx].height + &delta * rat_int(k as i64);
        }
        i = j;
    }
    OrthoScene {
        dimension: scene.dimension,
        cubes,
    }
}

/// Minimum-length sightline chosen for every represented tree edge inside
/// one component; ties broken by lexicographic cube-id pair.
fn chosen_sightlines(
    rep: &MultiRep,
    comp: &BTreeSet<CubeId>,
    tree: &Tree,
) -> Vec<SightLine> {
    let owner: BTreeMap<CubeId, usize> = rep
        .assignment
        .iter()
        .flat_map(|(&v, cubes)| cubes.iter().map(move |&c| (c, v)))
        .collect();
    let mut best: BTreeMap<(usize, usize), SightLine> = BTreeMap::new();
    let ids: Vec<CubeId> = comp.iter().copied().collect();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            let Some(line) = visible(&rep.scene, a, b).expect("cubes exist") else {
                continue;
            };
            let (va, vb) = (owner[&a], owner[&b]);
            if va == vb || !tree.has_edge(va, vb) {
                continue;
            }
            let key = (va.min(vb), va.max(vb));
            let better = match best.get(&key) {
                None => true,
                Some(cur) => {
                    line.length < cur.length
                        || (line.length == cur.length && (line.a, line.b) < (cur.a, cur.b))
                }
            };
            if better {
                best.insert(key, line);
            }
        }
    }
    best.into_values().collect()
}

/// Splits components that carry two cubes of one vertex, following the
/// minimum-sightline spanning forest, until every component maps its
/// cubes injectively into the tree's vertices.
///
/// Orthogonal scenes are first perturbed to distinct heights (which the
/// argument for no-new-edges requires); the quotient graph is preserved
/// at every step and re-verified.
pub fn split_into_tree_components(
    rep: &MultiRep,
    tree: &Tree,
) -> Result<MultiRep, MultiRepError> {
    let report = verify_multirep(rep, tree)?;
    if !report.passed {
        return Err(MultiRepError::SplitOnInvalidRep);
    }
    let mut current = match &rep.scene {
        Scene::Ortho(s) => MultiRep {
            scene: Scene::Ortho(perturb_distinct_heights(s)),
            assignment: rep.assignment.clone(),
        },
        Scene::Standard(_) => rep.clone(),
    };
    let mut budget = rep.scene.cube_count() * rep.scene.cube_count() + 1;
    loop {
        let comps = super::visibility::components(&current.scene);
        let owner: BTreeMap<CubeId, usize> = current
            .assignment
            .iter()
            .flat_map(|(&v, cubes)| cubes.iter().map(move |&c| (c, v)))
            .collect();
        let offending = comps.iter().find(|comp| {
            let mut seen = BTreeSet::new();
            comp.iter().any(|c| !seen.insert(owner[c]))
        });
        let Some(target) = offending.cloned() else {
            let report = verify_multirep(&current, tree)?;
            if !report.passed {
                return Err(MultiRepError::SplitDiverged);
            }
            return Ok(current);
        };
        if budget == 0 {
            return Err(MultiRepError::SplitDiverged);
        }
        budget -= 1;
        let target: BTreeSet<CubeId> = target.into_iter().collect();
        let lines = chosen_sightlines(&current, &target, tree);
        // spanning forest of the chosen sightlines over the component
        let ids: Vec<CubeId> = target.iter().copied().collect();
        let index: BTreeMap<CubeId, usize> = ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for line in &lines {
            let (ra, rb) = (find(&mut parent, index[&line.a]), find(&mut parent, index[&line.b]));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut forest_comps: BTreeMap<usize, BTreeSet<CubeId>> = BTreeMap::new();
        for (i, &c) in ids.iter().enumerate() {
            forest_comps.entry(find(&mut parent, i)).or_default().insert(c);
        }
        // every forest component must be injective on vertices
        for comp in forest_comps.values() {
            let mut seen = BTreeSet::new();
            debug_assert!(
                comp.iter().all(|c| seen.insert(owner[c])),
                "spanning-forest component repeats a vertex"
            );
        }
        // reassemble: untouched components keep their geometry, the split
        // component contributes one piece per forest component
        let mut pieces: Vec<MultiRep> = Vec::new();
        for comp in &comps {
            let set: BTreeSet<CubeId> = comp.iter().copied().collect();
            if set == target {
                continue;
            }
            pieces.push(current.restrict(&set));
        }
        for comp in forest_comps.values() {
            pieces.push(current.restrict(comp));
        }
        pieces.sort_by_key(|p| p.scene.cube_ids().first().copied());
        let mut merged = pieces.remove(0);
        for p in pieces {
            merged = disjoint_union(&merged, &p)?;
        }
        current = merged;
    }
}

#[cfg(test)]
mod tests {
    use super::super::visibility::components;
    use super::*;
    use crate::geometry::scene::{OrthoCube, StandardCube, StandardScene};
    use crate::rational::{rat, rat_int};

    fn bar(id: usize, lo_num: i64, lo_den: i64, h: i64) -> OrthoCube {
        // bar with left endpoint lo and length 1, as a center coordinate
        OrthoCube {
            id: CubeId(id),
            center: vec![rat(lo_num, lo_den) + rat(1, 2)],
            height: rat_int(h),
        }
    }

    fn assign(pairs: &[(usize, &[usize])]) -> BTreeMap<usize, BTreeSet<CubeId>> {
        pairs
            .iter()
            .map(|&(v, cubes)| (v, cubes.iter().map(|&c| CubeId(c)).collect()))
            .collect()
    }

    #[test]
    fn p3_collinear_squares_verify() {
        let scene = StandardScene::new(
            2,
            vec![
                StandardCube { id: CubeId(0), center: vec![rat_int(0), rat_int(0)] },
                StandardCube { id: CubeId(1), center: vec![rat(3, 2), rat_int(0)] },
                StandardCube { id: CubeId(2), center: vec![rat_int(3), rat_int(0)] },
            ],
        )
        .unwrap();
        let rep = MultiRep::new(
            Scene::Standard(scene),
            assign(&[(0, &[0]), (1, &[1]), (2, &[2])]),
        )
        .unwrap();
        let tree = Tree::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed, "{}", report.summary());
        assert_eq!(report.max_cubes_per_vertex, 1);
    }

    #[test]
    fn same_vertex_sightline_fails() {
        let scene = OrthoScene::new(1, vec![bar(0, 0, 1, 0), bar(1, 0, 1, 1)]).unwrap();
        let rep = MultiRep::new(Scene::Ortho(scene), assign(&[(0, &[0, 1])])).unwrap();
        let tree = Tree::path(1);
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(!report.passed);
        assert_eq!(report.same_vertex_sightlines, vec![(CubeId(0), CubeId(1))]);
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let scene = OrthoScene::new(1, vec![bar(0, 0, 1, 0)]).unwrap();
        let rep = MultiRep::new(Scene::Ortho(scene), assign(&[(5, &[0])])).unwrap();
        let tree = Tree::path(1);
        assert!(matches!(
            verify_multirep(&rep, &tree),
            Err(MultiRepError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn union_of_single_cubes_has_no_edges() {
        let mk = |id| {
            MultiRep::new(
                Scene::Standard(
                    StandardScene::new(
                        2,
                        vec![StandardCube { id: CubeId(id), center: vec![rat_int(0), rat_int(0)] }],
                    )
                    .unwrap(),
                ),
                assign(&[(0, &[id])]),
            )
            .unwrap()
        };
        let u = disjoint_union(&mk(0), &mk(0)).unwrap();
        assert_eq!(u.scene.cube_count(), 2);
        assert_eq!(extract_graph(&u.scene).edge_count(), 0);
        assert_eq!(u.assignment[&0].len(), 2);
    }

    #[test]
    fn union_with_empty_is_identity() {
        let a = MultiRep::new(
            Scene::Standard(
                StandardScene::new(
                    2,
                    vec![StandardCube { id: CubeId(0), center: vec![rat_int(0), rat_int(0)] }],
                )
                .unwrap(),
            ),
            assign(&[(0, &[0])]),
        )
        .unwrap();
        let empty = MultiRep::new(
            Scene::Standard(StandardScene::new(2, vec![]).unwrap()),
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(disjoint_union(&a, &empty).unwrap(), a);
        assert_eq!(disjoint_union(&empty, &a).unwrap(), a);
    }

    #[test]
    fn one_dimensional_standard_union_is_rejected() {
        let mk = |id| {
            MultiRep::new(
                Scene::Standard(
                    StandardScene::new(
                        1,
                        vec![StandardCube { id: CubeId(id), center: vec![rat_int(0)] }],
                    )
                    .unwrap(),
                ),
                assign(&[(0, &[id])]),
            )
            .unwrap()
        };
        assert_eq!(
            disjoint_union(&mk(0), &mk(0)),
            Err(MultiRepError::NoEscapeAxis)
        );
    }

    #[test]
    fn perturb_keeps_non_edges_and_edges() {
        // star K_{1,2}: center bar sees two equal-height bars
        let scene = OrthoScene::new(
            1,
            vec![
                OrthoCube { id: CubeId(0), center: vec![rat(1, 2)], height: rat_int(0) },
                OrthoCube { id: CubeId(1), center: vec![rat(-1, 4)], height: rat_int(1) },
                OrthoCube { id: CubeId(2), center: vec![rat(5, 4)], height: rat_int(1) },
            ],
        )
        .unwrap();
        let before = extract_graph(&Scene::Ortho(scene.clone()));
        let after_scene = perturb_distinct_heights(&scene);
        let mut hs: Vec<Rat> = after_scene.cubes.iter().map(|c| c.height.clone()).collect();
        hs.sort();
        hs.dedup();
        assert_eq!(hs.len(), 3, "heights must become distinct");
        let after = extract_graph(&Scene::Ortho(after_scene));
        assert_eq!(before.edges, after.edges);
    }

    #[test]
    fn perturb_leaves_distinct_heights_alone() {
        let scene = OrthoScene::new(
            1,
            vec![bar(0, 0, 1, 0), bar(1, 0, 1, 1), bar(2, 0, 1, 2)],
        )
        .unwrap();
        assert_eq!(perturb_distinct_heights(&scene), scene);
    }

    /// P4 fixture where one component carries two cubes of vertex 0.
    fn duplicated_vertex_fixture() -> (MultiRep, Tree) {
        // bars: a1 [0,1]@0, b [0,1]@1, a2 [-1/2,1/2]@2, c [5/8,13/8]@3, d [11/8,19/8]@4
        let scene = OrthoScene::new(
            1,
            vec![
                bar(0, 0, 1, 0),
                bar(1, 0, 1, 1),
                bar(2, -1, 2, 2),
                bar(3, 5, 8, 3),
                bar(4, 11, 8, 4),
            ],
        )
        .unwrap();
        let rep = MultiRep::new(
            Scene::Ortho(scene),
            assign(&[(0, &[0, 2]), (1, &[1]), (2, &[3]), (3, &[4])]),
        )
        .unwrap();
        let tree = Tree::path(4);
        (rep, tree)
    }

    #[test]
    fn split_separates_duplicate_vertex_component() {
        let (rep, tree) = duplicated_vertex_fixture();
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed, "fixture must verify: {}", report.summary());
        assert_eq!(components(&rep.scene).len(), 1);

        let split = split_into_tree_components(&rep, &tree).unwrap();
        let report = verify_multirep(&split, &tree).unwrap();
        assert!(report.passed, "{}", report.summary());
        // every component injective on vertices
        let owner: BTreeMap<CubeId, usize> = split
            .assignment
            .iter()
            .flat_map(|(&v, cubes)| cubes.iter().map(move |&c| (c, v)))
            .collect();
        for comp in components(&split.scene) {
            let mut seen = BTreeSet::new();
            assert!(comp.iter().all(|c| seen.insert(owner[c])));
        }
        // per-vertex counts unchanged
        assert_eq!(split.assignment[&0].len(), 2);
        assert_eq!(split.assignment[&1].len(), 1);
    }

    #[test]
    fn split_rejects_invalid_input() {
        // P2 claimed, but the bars are too far apart to see each other
        let scene = OrthoScene::new(1, vec![bar(0, 0, 1, 0), bar(1, 4, 1, 1)]).unwrap();
        let rep = MultiRep::new(Scene::Ortho(scene), assign(&[(0, &[0]), (1, &[1])])).unwrap();
        let tree = Tree::path(2);
        assert_eq!(
            split_into_tree_components(&rep, &tree),
            Err(MultiRepError::SplitOnInvalidRep)
        );
    }

    #[test]
    fn split_is_identity_on_clean_reps() {
        let scene = OrthoScene::new(1, vec![bar(0, 0, 1, 0), bar(1, 0, 1, 1)]).unwrap();
        let rep = MultiRep::new(Scene::Ortho(scene), assign(&[(0, &[0]), (1, &[1])])).unwrap();
        let tree = Tree::path(2);
        let split = split_into_tree_components(&rep, &tree).unwrap();
        let report = verify_multirep(&split, &tree).unwrap();
        assert!(report.passed);
        assert_eq!(split.scene.cube_count(), 2);
    }
}
