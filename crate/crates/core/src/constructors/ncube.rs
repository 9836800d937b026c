//! Standard n-cube representations assembled from n orthogonal forests:
//! components are processed in lexicographic (anchor label, forest) order,
//! each re-heighted along its forest's axis so that new coordinates land
//! beyond everything placed so far by multiples of 4t.

use crate::geometry::{
    verify_multirep, visible_standard, CubeId, MultiRep, Scene, StandardCube, StandardScene,
};
use crate::rational::{rat_int, Rat};
use crate::tree::Tree;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// One component of an orthogonal forest: its edges within the host tree
/// and a verified one-cube-per-vertex representation keyed by the host
/// tree's vertex ids. Singleton components carry a single cube.
#[derive(Debug, Clone)]
pub struct ComponentRep {
    pub edges: Vec<(usize, usize)>,
    pub rep: MultiRep,
}

impl ComponentRep {
    pub fn vertices(&self) -> BTreeSet<usize> {
        self.rep.assignment.keys().copied().collect()
    }
}

/// n spanning orthogonal forests whose union is the host tree, with
/// representations of dimension n − 1 supplied per component.
#[derive(Debug, Clone)]
pub struct OrthoForests {
    /// dimension of the component representations (n − 1)
    pub rep_dimension: usize,
    pub forests: Vec<Vec<ComponentRep>>,
}

#[derive(Debug, Error)]
pub enum ForestInputError {
    #[error("forest edges do not partition the tree's edges (at edge ({0}, {1}))")]
    NotAPartition(usize, usize),
    #[error("components {0} and {1} share more than one vertex")]
    ComponentsOverlap(usize, usize),
    #[error("component containing vertex {0} has an invalid representation: {1}")]
    BadComponentRep(usize, String),
    #[error("component representation has the wrong dimension")]
    WrongDimension,
    #[error("assembled scene failed verification: {0}")]
    VerificationFailed(String),
    #[error("anchor vertex for a component was not yet placed")]
    AnchorMissing,
}

fn component_subtree(edges: &[(usize, usize)], vertices: &BTreeSet<usize>) -> Option<Tree> {
    // relabel the component's vertices densely and validate it is a tree
    let order: Vec<usize> = vertices.iter().copied().collect();
    let index: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let local: Option<Vec<(usize, usize)>> = edges
        .iter()
        .map(|&(u, v)| Some((*index.get(&u)?, *index.get(&v)?)))
        .collect();
    Tree::from_edges(order.len(), &local?).ok()
}

impl OrthoForests {
    /// Validates partitioning, pairwise component overlap, and every
    /// component representation.
    pub fn validate(&self, tree: &Tree) -> Result<(), ForestInputError> {
        let mut seen_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for forest in &self.forests {
            for comp in forest {
                for &(u, v) in &comp.edges {
                    let e = (u.min(v), u.max(v));
                    if !tree.has_edge(u, v) || !seen_edges.insert(e) {
                        return Err(ForestInputError::NotAPartition(e.0, e.1));
                    }
                }
            }
        }
        for &e in tree.edges() {
            if !seen_edges.contains(&e) {
                return Err(ForestInputError::NotAPartition(e.0, e.1));
            }
        }
        // distinct components (across forests) share at most one vertex
        let all: Vec<&ComponentRep> = self.forests.iter().flatten().collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                let shared = a.vertices().intersection(&b.vertices()).count();
                if shared > 1 {
                    let v = *a.vertices().intersection(&b.vertices()).next().unwrap();
                    return Err(ForestInputError::ComponentsOverlap(v, shared));
                }
            }
        }
        for forest in &self.forests {
            for comp in forest {
                let vertices = comp.vertices();
                let first = *vertices.iter().next().expect("component not empty");
                if comp.rep.scene.dimension() != self.rep_dimension {
                    return Err(ForestInputError::WrongDimension);
                }
                let Some(subtree) = component_subtree(&comp.edges, &vertices) else {
                    return Err(ForestInputError::BadComponentRep(
                        first,
                        "edges do not form a tree on the component's vertices".to_string(),
                    ));
                };
                // re-key the rep to local ids and verify
                let order: Vec<usize> = vertices.iter().copied().collect();
                let index: BTreeMap<usize, usize> =
                    order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                let local = MultiRep {
                    scene: comp.rep.scene.clone(),
                    assignment: comp
                        .rep
                        .assignment
                        .iter()
                        .map(|(&v, cubes)| (index[&v], cubes.clone()))
                        .collect(),
                };
                match verify_multirep(&local, &subtree) {
                    Ok(report) if report.passed && report.max_cubes_per_vertex == 1 => {}
                    Ok(report) => {
                        return Err(ForestInputError::BadComponentRep(first, report.summary()))
                    }
                    Err(e) => return Err(ForestInputError::BadComponentRep(first, e.to_string())),
                }
            }
        }
        Ok(())
    }

    /// Adds singleton components (one isolated cube) so every forest spans
    /// every vertex of the tree.
    pub fn make_spanning(&mut self, tree: &Tree) {
        use crate::geometry::{OrthoCube, OrthoScene};
        for forest in &mut self.forests {
            let covered: BTreeSet<usize> = forest
                .iter()
                .flat_map(|c| c.vertices())
                .collect();
            for v in 0..tree.vertex_count() {
                if covered.contains(&v) {
                    continue;
                }
                let scene = OrthoScene::new(
                    self.rep_dimension,
                    vec![OrthoCube {
                        id: CubeId(0),
                        center: vec![rat_int(0); self.rep_dimension],
                        height: rat_int(0),
                    }],
                )
                .expect("single cube scene");
                forest.push(ComponentRep {
                    edges: Vec::new(),
                    rep: MultiRep {
                        scene: Scene::Ortho(scene),
                        assignment: [(v, [CubeId(0)].into_iter().collect())]
                            .into_iter()
                            .collect(),
                    },
                });
            }
        }
    }
}

/// Builds a standard scene of dimension n = `forests.forests.len()` whose
/// visibility graph is exactly `tree`, one cube per vertex.
///
/// Vertices are labeled breadth-first from vertex 0; the component of the
/// first forest containing the root seeds the scene and every later
/// component is re-heighted along its forest's axis, anchored at the
/// already-placed cube of its smallest-label vertex. New axis coordinates
/// land beyond the global minimum or maximum by steps of 4t, preserving
/// the order of the component representation's heights. After each
/// component the just-added cubes are checked to see exactly their
/// component neighbors, along the forest's axis, and to satisfy the
/// 2t-slab clearance in every other axis.
pub fn ncube_from_ortho_forests(
    tree: &Tree,
    mut forests: OrthoForests,
) -> Result<MultiRep, ForestInputError> {
    let n = forests.forests.len();
    assert!(n >= 1, "at least one forest");
    assert_eq!(forests.rep_dimension + 1, n, "component reps have dimension n - 1");
    forests.make_spanning(tree);
    forests.validate(tree)?;

    let t = tree.vertex_count();
    let spacing = rat_int(4 * t as i64);
    let bfs = tree.bfs_order(0).expect("vertex 0 exists");
    let label: BTreeMap<usize, usize> = bfs.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // components in lexicographic (anchor label, forest index) order
    let mut queue: Vec<(usize, usize, &ComponentRep)> = Vec::new();
    for (j, forest) in forests.forests.iter().enumerate() {
        for comp in forest {
            let anchor_label = comp.vertices().iter().map(|v| label[v]).min().expect("nonempty");
            queue.push((anchor_label, j, comp));
        }
    }
    queue.sort_by_key(|&(i, j, _)| (i, j));

    let mut placed: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
    placed.insert(bfs[0], vec![rat_int(0); n]);
    // track the global extent along each axis
    let mut axis_min: Vec<Rat> = vec![rat_int(0); n];
    let mut axis_max: Vec<Rat> = vec![rat_int(0); n];

    for (_, axis, comp) in queue {
        let vertices = comp.vertices();
        let anchor = *vertices
            .iter()
            .min_by_key(|v| label[v])
            .expect("component not empty");
        let Some(anchor_pos) = placed.get(&anchor).cloned() else {
            return Err(ForestInputError::AnchorMissing);
        };
        // exactly the anchor may already be placed
        if let Some(&v) = vertices.iter().find(|&&v| v != anchor && placed.contains_key(&v)) {
            return Err(ForestInputError::ComponentsOverlap(v, 2));
        }
        let Scene::Ortho(comp_scene) = &comp.rep.scene else {
            return Err(ForestInputError::WrongDimension);
        };
        let cube_of_vertex: BTreeMap<usize, &crate::geometry::OrthoCube> = comp
            .rep
            .assignment
            .iter()
            .map(|(&v, cubes)| {
                let id = *cubes.iter().next().expect("one cube");
                (v, comp_scene.cube(id).expect("cube exists"))
            })
            .collect();
        let anchor_cube = cube_of_vertex[&anchor];
        // non-axis coordinates: translate the component rep so the anchor
        // cube coincides with the anchor's existing position
        let other_axes: Vec<usize> = (0..n).filter(|&d| d != axis).collect();
        // axis coordinates: order-preserving re-heighting beyond the
        // current global extent
        let mut by_height: Vec<usize> = vertices.iter().copied().filter(|&v| v != anchor).collect();
        by_height.sort_by_key(|v| (cube_of_vertex[v].height.clone(), *v));
        let mut above: Vec<usize> = Vec::new();
        let mut below: Vec<usize> = Vec::new();
        for v in by_height {
            if cube_of_vertex[&v].height > anchor_cube.height {
                above.push(v);
            } else {
                below.push(v);
            }
        }
        let mut new_axis_coord: BTreeMap<usize, Rat> = BTreeMap::new();
        new_axis_coord.insert(anchor, anchor_pos[axis].clone());
        for (rank, &v) in above.iter().enumerate() {
            new_axis_coord.insert(
                v,
                &axis_max[axis] + &spacing * rat_int(rank as i64 + 1),
            );
        }
        // below-anchor cubes walk outward from the global minimum, nearest
        // original height first, so the original order is preserved
        for (rank, &v) in below.iter().rev().enumerate() {
            new_axis_coord.insert(
                v,
                &axis_min[axis] - &spacing * rat_int(rank as i64 + 1),
            );
        }
        for (&v, cube) in &cube_of_vertex {
            if v == anchor {
                continue;
            }
            let mut pos = vec![rat_int(0); n];
            for (slot, &d) in other_axes.iter().enumerate() {
                pos[d] = &anchor_pos[d] + (&cube.center[slot] - &anchor_cube.center[slot]);
            }
            pos[axis] = new_axis_coord[&v].clone();
            placed.insert(v, pos);
        }
        // maintain extents
        for v in vertices.iter() {
            let pos = &placed[v];
            for d in 0..n {
                if pos[d] < axis_min[d] {
                    axis_min[d] = pos[d].clone();
                }
                if pos[d] > axis_max[d] {
                    axis_max[d] = pos[d].clone();
                }
            }
        }
        // insertion checks: the new cubes see exactly their component
        // neighbors, along this forest's axis, and respect the 2t-slab
        assert_component_conditions(tree, &placed, comp, anchor, axis, t)?;
    }

    let cubes: Vec<StandardCube> = placed
        .iter()
        .map(|(&v, pos)| StandardCube {
            id: CubeId(v),
            center: pos.clone(),
        })
        .collect();
    let scene = StandardScene::from_parts(n, cubes)
        .map_err(|e| ForestInputError::VerificationFailed(e.to_string()))?;
    let assignment: BTreeMap<usize, BTreeSet<CubeId>> = (0..t)
        .map(|v| (v, [CubeId(v)].into_iter().collect()))
        .collect();
    let rep = MultiRep::new(Scene::Standard(scene), assignment)
        .map_err(|e| ForestInputError::VerificationFailed(e.to_string()))?;
    let report =
        verify_multirep(&rep, tree).map_err(|e| ForestInputError::VerificationFailed(e.to_string()))?;
    if !report.passed {
        return Err(ForestInputError::VerificationFailed(report.summary()));
    }
    Ok(rep)
}

fn assert_component_conditions(
    tree: &Tree,
    placed: &BTreeMap<usize, Vec<Rat>>,
    comp: &ComponentRep,
    anchor: usize,
    axis: usize,
    t: usize,
) -> Result<(), ForestInputError> {
    let n = placed.values().next().map(|p| p.len()).unwrap_or(0);
    let scene = StandardScene::from_parts(
        n,
        placed
            .iter()
            .map(|(&v, pos)| StandardCube {
                id: CubeId(v),
                center: pos.clone(),
            })
            .collect(),
    )
    .map_err(|e| ForestInputError::VerificationFailed(e.to_string()))?;
    let comp_edges: BTreeSet<(usize, usize)> = comp
        .edges
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    let vertices = comp.vertices();
    let two_t = rat_int(2 * t as i64);
    // only cubes added by this component are constrained; the anchor was
    // placed earlier and already carries sightlines from other components
    for &v in vertices.iter().filter(|&&v| v != anchor) {
        for (&w, pos_w) in placed.iter() {
            if w == v {
                continue;
            }
            let line = visible_standard(&scene, CubeId(v), CubeId(w))
                .map_err(|e| ForestInputError::VerificationFailed(e.to_string()))?;
            let is_comp_edge = comp_edges.contains(&(v.min(w), v.max(w)));
            match line {
                Some(l) if is_comp_edge => {
                    if l.axis != axis {
                        return Err(ForestInputError::VerificationFailed(format!(
                            "component edge ({v}, {w}) realized along axis {} instead of {}",
                            l.axis, axis
                        )));
                    }
                }
                Some(_) if tree.has_edge(v, w) && vertices.contains(&w) => {
                    // edge of the tree inside the component but not of this
                    // component: would be a partition violation caught earlier
                    return Err(ForestInputError::VerificationFailed(format!(
                        "unexpected sightline ({v}, {w})"
                    )));
                }
                Some(_) => {
                    return Err(ForestInputError::VerificationFailed(format!(
                        "new cube {v} sees non-neighbor {w}"
                    )));
                }
                None if is_comp_edge => {
                    return Err(ForestInputError::VerificationFailed(format!(
                        "component edge ({v}, {w}) has no sightline"
                    )));
                }
                None => {}
            }
            // 2t-slab clearance: no other cube may sit within 2t of the new
            // cube in every coordinate except one non-axis direction
            if !vertices.contains(&w) {
                let pos_v = &placed[&v];
                for excluded in 0..n {
                    if excluded == axis {
                        continue;
                    }
                    let within = (0..n).filter(|&d| d != excluded).all(|d| {
                        num_traits::Signed::abs(&(&pos_v[d] - &pos_w[d])) <= two_t
                    });
                    if within {
                        return Err(ForestInputError::VerificationFailed(format!(
                            "cube {w} lies in the 2t-slab of new cube {v} (axis {excluded})"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Convenience input builder for n = 2: one-dimensional component
/// representations built internally from unit bars.
pub fn bar_forests(
    _tree: &Tree,
    forest_edges: &[Vec<(usize, usize)>],
) -> Result<OrthoForests, ForestInputError> {
    use super::ortho::unit_bar_tree_rep;
    let mut forests = Vec::new();
    for edges in forest_edges {
        // split the edge set into connected components
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
            let p = parent.get(&x).copied().unwrap_or(x);
            if p == x {
                return x;
            }
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
        for &(u, v) in edges {
            parent.entry(u).or_insert(u);
            parent.entry(v).or_insert(v);
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent.insert(ru, rv);
            }
        }
        let mut comps: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for &(u, v) in edges {
            let r = find(&mut parent, u);
            comps.entry(r).or_default().push((u, v));
        }
        let mut components = Vec::new();
        for comp_edges in comps.into_values() {
            let vertices: BTreeSet<usize> = comp_edges
                .iter()
                .flat_map(|&(u, v)| [u, v])
                .collect();
            let order: Vec<usize> = vertices.iter().copied().collect();
            let index: BTreeMap<usize, usize> =
                order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let local_edges: Vec<(usize, usize)> = comp_edges
                .iter()
                .map(|&(u, v)| (index[&u], index[&v]))
                .collect();
            let subtree = Tree::from_edges(order.len(), &local_edges).map_err(|e| {
                ForestInputError::BadComponentRep(order[0], e.to_string())
            })?;
            let local_rep = unit_bar_tree_rep(&subtree)
                .map_err(|e| ForestInputError::BadComponentRep(order[0], e.to_string()))?;
            // re-key to the host tree's vertex ids
            let rep = MultiRep {
                scene: local_rep.scene.clone(),
                assignment: local_rep
                    .assignment
                    .iter()
                    .map(|(&local, cubes)| (order[local], cubes.clone()))
                    .collect(),
            };
            components.push(ComponentRep {
                edges: comp_edges,
                rep,
            });
        }
        forests.push(components);
    }
    Ok(OrthoForests {
        rep_dimension: 1,
        forests,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::extract_graph;

    #[test]
    fn p3_from_two_single_edge_forests() {
        let tree = Tree::path(3);
        let forests = bar_forests(&tree, &[vec![(0, 1)], vec![(1, 2)]]).unwrap();
        let rep = ncube_from_ortho_forests(&tree, forests).unwrap();
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed, "{}", report.summary());
        // one horizontal and one vertical sightline
        let graph = extract_graph(&rep.scene);
        assert_eq!(graph.edge_count(), 2);
    }

    #[test]
    fn k16_from_two_bar_stars() {
        let tree = Tree::star(6);
        let forests = bar_forests(
            &tree,
            &[
                vec![(0, 1), (0, 2), (0, 3)],
                vec![(0, 4), (0, 5), (0, 6)],
            ],
        )
        .unwrap();
        let rep = ncube_from_ortho_forests(&tree, forests).unwrap();
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed, "{}", report.summary());
        assert_eq!(rep.max_cubes_per_vertex(), 1);
    }

    #[test]
    fn caterpillar_in_one_forest_keeps_axis_one() {
        let tree = Tree::path(5);
        let all_edges: Vec<(usize, usize)> = tree.edges().to_vec();
        let forests = bar_forests(&tree, &[all_edges, Vec::new()]).unwrap();
        let rep = ncube_from_ortho_forests(&tree, forests).unwrap();
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed, "{}", report.summary());
        // every sightline parallel to axis 0
        let Scene::Standard(scene) = &rep.scene else { panic!() };
        let graph = extract_graph(&rep.scene);
        for &(a, b) in &graph.edges {
            let line = visible_standard(scene, a, b).unwrap().unwrap();
            assert_eq!(line.axis, 0);
        }
    }

    #[test]
    fn partition_violations_are_rejected() {
        let tree = Tree::path(3);
        // edge (1,2) missing
        let forests = bar_forests(&tree, &[vec![(0, 1)], vec![]]).unwrap();
        assert!(matches!(
            ncube_from_ortho_forests(&tree, forests),
            Err(ForestInputError::NotAPartition(1, 2))
        ));
    }

    #[test]
    fn three_dimensional_assembly_from_square_forests() {
        // K_{1,12} as three 4-leaf stars, each realized as a planar
        // orthogonal scene, assembled into unit 3-cubes
        use super::super::ortho::star_ortho_rep;
        let tree = Tree::star(12);
        let mut forests = Vec::new();
        for block in 0..3usize {
            let leaves: Vec<usize> = (1..=4).map(|i| block * 4 + i).collect();
            let template = star_ortho_rep(2, 4).unwrap();
            // star_ortho_rep labels the hub 0 and leaves 1..=4
            let rep = MultiRep {
                scene: template.scene.clone(),
                assignment: template
                    .assignment
                    .iter()
                    .map(|(&v, cubes)| {
                        let host = if v == 0 { 0 } else { leaves[v - 1] };
                        (host, cubes.clone())
                    })
                    .collect(),
            };
            forests.push(vec![ComponentRep {
                edges: leaves.iter().map(|&l| (0, l)).collect(),
                rep,
            }]);
        }
        let inputs = OrthoForests {
            rep_dimension: 2,
            forests,
        };
        let rep = ncube_from_ortho_forests(&tree, inputs).unwrap();
        assert_eq!(rep.scene.dimension(), 3);
        let report = verify_multirep(&rep, &tree).unwrap();
        assert!(report.passed, "{}", report.summary());
        assert_eq!(rep.max_cubes_per_vertex(), 1);
    }
}
