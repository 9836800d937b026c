//! Edge-partition searches over trees: star forests with bounded star
//! size, caterpillar forests (the bar-visibility objects), and forests of
//! orthogonally realizable components for a given dimension.
//!
//! A forest is an edge set whose connected components are vertex-disjoint;
//! a decomposition partitions the tree's edges into such forests. The
//! searches are exact branch-and-bound over per-edge assignments with
//! deterministic ordering, so infeasibility results are conclusive.

use crate::caterpillar::recognize_caterpillar;
use crate::tree::Tree;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Edge-disjoint subforests whose union is the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestDecomposition {
    pub forests: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("edge sets do not partition the tree's edges")]
    NotAPartition,
    #[error("forest {forest} component {component:?} violates {kind}")]
    BadComponent {
        forest: usize,
        component: Vec<usize>,
        kind: String,
    },
    #[error("no decomposition into {bound} forests exists under the component family")]
    Infeasible { bound: usize },
    #[error("search budget exhausted before {bound} forests could be decided")]
    BudgetExhausted { bound: usize },
}

impl ForestDecomposition {
    /// Number of forests whose edge set touches each vertex.
    pub fn multiplicities(&self, tree: &Tree) -> Vec<usize> {
        let mut mult = vec![0usize; tree.vertex_count()];
        for forest in &self.forests {
            let touched: BTreeSet<usize> =
                forest.iter().flat_map(|&(u, v)| [u, v]).collect();
            for v in touched {
                mult[v] += 1;
            }
        }
        mult
    }

    pub fn max_multiplicity(&self, tree: &Tree) -> usize {
        self.multiplicities(tree).into_iter().max().unwrap_or(0)
    }

    /// Checks that the forests partition E(tree).
    pub fn validate_partition(&self, tree: &Tree) -> Result<(), DecompositionError> {
        let mut seen = BTreeSet::new();
        for forest in &self.forests {
            for &(u, v) in forest {
                let e = (u.min(v), u.max(v));
                if !tree.has_edge(u, v) || !seen.insert(e) {
                    return Err(DecompositionError::NotAPartition);
                }
            }
        }
        if seen.len() != tree.edges().len() {
            return Err(DecompositionError::NotAPartition);
        }
        Ok(())
    }

    /// Connected components of one forest, as (vertices, edges) pairs.
    pub fn components(&self, forest: usize) -> Vec<(Vec<usize>, Vec<(usize, usize)>)> {
        components_of_edges(&self.forests[forest])
    }
}

/// True when the branch vertices (forest-degree ≥ 3) of the component of
/// `seed` within one forest's partial edge set lie on a common path. Every
/// component family used here (caterpillars, expanded stars and double
/// stars) has this property, and a violated triple can never be repaired
/// by adding edges, so it is a sound permanent prune.
fn branch_vertices_alignable(
    edges: &[(usize, usize)],
    assignment: &[usize],
    forest: usize,
    seed: usize,
    forest_degree: impl Fn(usize) -> usize,
) -> bool {
    let fe: Vec<(usize, usize)> = edges
        .iter()
        .zip(assignment)
        .filter(|(_, &f)| f == forest)
        .map(|(&e, _)| e)
        .collect();
    let mut comp = BTreeSet::from([seed]);
    let mut changed = true;
    while changed {
        changed = false;
        for &(u, v) in &fe {
            if comp.contains(&u) && comp.insert(v) {
                changed = true;
            }
            if comp.contains(&v) && comp.insert(u) {
                changed = true;
            }
        }
    }
    let branches: Vec<usize> = comp
        .iter()
        .copied()
        .filter(|&v| forest_degree(v) >= 3)
        .collect();
    if branches.len() < 3 {
        return true;
    }
    let comp_vertices: Vec<usize> = comp.iter().copied().collect();
    let comp_edges: Vec<(usize, usize)> = fe
        .into_iter()
        .filter(|&(u, _)| comp.contains(&u))
        .collect();
    let (sub, map) = component_as_tree(&comp_vertices, &comp_edges);
    let index: BTreeMap<usize, usize> = map.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let locals: Vec<usize> = branches.iter().map(|b| index[b]).collect();
    let (mut a, mut b, mut best) = (locals[0], locals[0], 0);
    for &u in &locals {
        let dist = sub.distances(u);
        for &v in &locals {
            if dist[v] > best {
                best = dist[v];
                a = u;
                b = v;
            }
        }
    }
    let path = sub.path_between(a, b);
    locals.iter().all(|l| path.contains(l))
}

/// Splits an edge set into its connected components.
pub fn components_of_edges(edges: &[(usize, usize)]) -> Vec<(Vec<usize>, Vec<(usize, usize)>)> {
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
    let mut by_root: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &(u, v) in edges {
        by_root.entry(find(&mut parent, u)).or_default().push((u, v));
    }
    by_root
        .into_values()
        .map(|es| {
            let vs: BTreeSet<usize> = es.iter().flat_map(|&(u, v)| [u, v]).collect();
            (vs.into_iter().collect(), es)
        })
        .collect()
}

/// Extracts one component as a dense-labeled subtree plus the label map
/// (local id → host vertex).
pub fn component_as_tree(vertices: &[usize], edges: &[(usize, usize)]) -> (Tree, Vec<usize>) {
    let index: BTreeMap<usize, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let local: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (index[&u], index[&v])).collect();
    let tree = Tree::from_edges(vertices.len(), &local).expect("component of a forest is a tree");
    (tree, vertices.to_vec())
}

/// Exact search: partition the tree's edges into at most `bound` forests
/// in which every component is a star with at most `k` edges. Returns the
/// decomposition with the fewest forests, trying 1..=bound.
///
/// Per forest, a vertex is either the center of one star (up to k edges)
/// or a leaf of exactly one edge; the search branches over (forest,
/// center) per edge with symmetry pruning on fresh forests.
pub fn star_forest_decompose(
    tree: &Tree,
    k: usize,
    bound: usize,
) -> Result<ForestDecomposition, DecompositionError> {
    assert!(k >= 1);
    for count in 1..=bound {
        if let Some(d) = star_search(tree, k, count) {
            verify_star_decomposition(tree, &d, k)?;
            return Ok(d);
        }
    }
    Err(DecompositionError::Infeasible { bound })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Free,
    Center(usize),
    Leaf,
}

fn star_search(tree: &Tree, k: usize, forests: usize) -> Option<ForestDecomposition> {
    let edges: Vec<(usize, usize)> = tree.edges().to_vec();
    let n = tree.vertex_count();
    let mut roles = vec![Role::Free; forests * n];
    let mut assignment: Vec<(usize, usize)> = Vec::with_capacity(edges.len()); // (forest, center)
    fn rec(
        edges: &[(usize, usize)],
        k: usize,
        forests: usize,
        n: usize,
        roles: &mut Vec<Role>,
        assignment: &mut Vec<(usize, usize)>,
    ) -> bool {
        let Some(&(u, v)) = edges.get(assignment.len()) else {
            return true;
        };
        let used = assignment
            .iter()
            .map(|&(f, _)| f)
            .max()
            .map(|m| m + 1)
            .unwrap_or(0);
        for f in 0..forests.min(used + 1) {
            for (center, leaf) in [(u, v), (v, u)] {
                let rc = roles[f * n + center];
                let rl = roles[f * n + leaf];
                let center_ok = match rc {
                    Role::Free => true,
                    Role::Center(c) => c < k,
                    Role::Leaf => false,
                };
                if !center_ok || rl != Role::Free {
                    continue;
                }
                let saved = (rc, rl);
                roles[f * n + center] = match rc {
                    Role::Free => Role::Center(1),
                    Role::Center(c) => Role::Center(c + 1),
                    Role::Leaf => unreachable!(),
                };
                roles[f * n + leaf] = Role::Leaf;
                assignment.push((f, center));
                if rec(edges, k, forests, n, roles, assignment) {
                    return true;
                }
                assignment.pop();
                roles[f * n + center] = saved.0;
                roles[f * n + leaf] = saved.1;
            }
        }
        false
    }
    if !rec(&edges, k, forests, n, &mut roles, &mut assignment) {
        return None;
    }
    let mut out = vec![Vec::new(); forests];
    for (&(u, v), &(f, _)) in edges.iter().zip(&assignment) {
        out[f].push((u, v));
    }
    out.retain(|f| !f.is_empty());
    Some(ForestDecomposition { forests: out })
}

/// Every component must be a star with at most `k` edges.
pub fn verify_star_decomposition(
    tree: &Tree,
    d: &ForestDecomposition,
    k: usize,
) -> Result<(), DecompositionError> {
    d.validate_partition(tree)?;
    for (fi, forest) in d.forests.iter().enumerate() {
        for (vertices, edges) in components_of_edges(forest) {
            // an acyclic component is a star iff at most one vertex meets
            // two or more of its edges
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &(u, v) in &edges {
                *counts.entry(u).or_default() += 1;
                *counts.entry(v).or_default() += 1;
            }
            let centers = counts.values().filter(|&&c| c > 1).count();
            if centers > 1 || edges.len() > k {
                return Err(DecompositionError::BadComponent {
                    forest: fi,
                    component: vertices,
                    kind: format!("star with at most {k} edges"),
                });
            }
        }
    }
    Ok(())
}

/// Exact search: partition into at most `bound` forests in which every
/// component is a subdivided caterpillar with Δ ≤ 3 (the unit-bar trees).
///
/// Prunes on per-vertex degree > 3 within a forest and on branch-vertex
/// triples that no path can ever cover (both conditions are permanent as
/// components only grow). `node_budget` caps the search; `None` from the
/// search means infeasible, an error means the budget ran out.
pub fn caterpillar_forest_decompose(
    tree: &Tree,
    bound: usize,
    node_budget: u64,
) -> Result<Option<ForestDecomposition>, DecompositionError> {
    let edges: Vec<(usize, usize)> = bfs_edge_order(tree);
    let n = tree.vertex_count();
    let mut assignment: Vec<usize> = Vec::with_capacity(edges.len());
    let mut degrees = vec![0u8; bound * n];
    let mut budget = node_budget;
    fn rec(
        edges: &[(usize, usize)],
        bound: usize,
        n: usize,
        assignment: &mut Vec<usize>,
        degrees: &mut Vec<u8>,
        budget: &mut u64,
    ) -> Result<bool, ()> {
        if *budget == 0 {
            return Err(());
        }
        *budget -= 1;
        let Some(&(u, v)) = edges.get(assignment.len()) else {
            return Ok(true);
        };
        let used = assignment.iter().max().map(|&m| m + 1).unwrap_or(0);
        for f in 0..bound.min(used + 1) {
            if degrees[f * n + u] >= 3 || degrees[f * n + v] >= 3 {
                continue;
            }
            degrees[f * n + u] += 1;
            degrees[f * n + v] += 1;
            assignment.push(f);
            // Δ ≤ 3 plus aligned branch vertices characterize the family,
            // so a fully pruned complete assignment is already valid
            let ok = branch_vertices_alignable(edges, assignment, f, u, |x| {
                degrees[f * n + x] as usize
            });
            if ok {
                match rec(edges, bound, n, assignment, degrees, budget) {
                    Ok(true) => return Ok(true),
                    Ok(false) => {}
                    Err(()) => return Err(()),
                }
            }
            assignment.pop();
            degrees[f * n + u] -= 1;
            degrees[f * n + v] -= 1;
        }
        Ok(false)
    }
    match rec(&edges, bound, n, &mut assignment, &mut degrees, &mut budget) {
        Err(()) => Err(DecompositionError::BudgetExhausted { bound }),
        Ok(false) => Ok(None),
        Ok(true) => {
            let mut out = vec![Vec::new(); bound];
            for (&e, &f) in edges.iter().zip(&assignment) {
                out[f].push(e);
            }
            out.retain(|f| !f.is_empty());
            let d = ForestDecomposition { forests: out };
            verify_caterpillar_decomposition(tree, &d)?;
            Ok(Some(d))
        }
    }
}

/// Every component must pass the caterpillar recognizer.
pub fn verify_caterpillar_decomposition(
    tree: &Tree,
    d: &ForestDecomposition,
) -> Result<(), DecompositionError> {
    d.validate_partition(tree)?;
    for (fi, forest) in d.forests.iter().enumerate() {
        for (vertices, edges) in components_of_edges(forest) {
            let (sub, _) = component_as_tree(&vertices, &edges);
            if recognize_caterpillar(&sub).is_err() {
                return Err(DecompositionError::BadComponent {
                    forest: fi,
                    component: vertices,
                    kind: "subdivided caterpillar with maximum degree 3".to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Edges in BFS-from-0 discovery order: parent edges of vertices in BFS
/// order, which keeps partial components connected and pruning effective.
fn bfs_edge_order(tree: &Tree) -> Vec<(usize, usize)> {
    let parent = tree.bfs_parents(0);
    tree.bfs_order(0)
        .expect("vertex 0 exists")
        .into_iter()
        .skip(1)
        .map(|v| (parent[v].min(v), parent[v].max(v)))
        .collect()
}

/// Exact search: partition into at most `bound` forests in which every
/// component admits a one-cube-per-vertex orthogonal representation in
/// dimension `n` (checked by the construction itself, memoized per
/// component shape).
pub fn ortho_forest_decompose(
    tree: &Tree,
    n: usize,
    bound: usize,
    node_budget: u64,
) -> Result<Option<ForestDecomposition>, DecompositionError> {
    let degree_cap = (1usize << n) + 1;
    let edges: Vec<(usize, usize)> = bfs_edge_order(tree);
    let nv = tree.vertex_count();
    let mut assignment: Vec<usize> = Vec::with_capacity(edges.len());
    let mut degrees = vec![0usize; bound * nv];
    let mut budget = node_budget;
    let mut realizable_cache: BTreeMap<String, bool> = BTreeMap::new();

    fn forest_realizable(
        edges: &[(usize, usize)],
        assignment: &[usize],
        forest: usize,
        n: usize,
        cache: &mut BTreeMap<String, bool>,
    ) -> bool {
        let fe: Vec<(usize, usize)> = edges
            .iter()
            .zip(assignment)
            .filter(|(_, &f)| f == forest)
            .map(|(&e, _)| e)
            .collect();
        for (vertices, comp_edges) in components_of_edges(&fe) {
            let (sub, _) = component_as_tree(&vertices, &comp_edges);
            let key = crate::canonical::canonical_form(&sub);
            let ok = *cache
                .entry(key)
                .or_insert_with(|| crate::constructors::realize_ortho_tree(&sub, n).is_ok());
            if !ok {
                return false;
            }
        }
        true
    }

    fn rec(
        edges: &[(usize, usize)],
        bound: usize,
        nv: usize,
        n: usize,
        degree_cap: usize,
        assignment: &mut Vec<usize>,
        degrees: &mut Vec<usize>,
        budget: &mut u64,
        cache: &mut BTreeMap<String, bool>,
    ) -> Result<bool, ()> {
        if *budget == 0 {
            return Err(());
        }
        *budget -= 1;
        let Some(&(u, v)) = edges.get(assignment.len()) else {
            // full realizability check per forest, memoized by shape
            let used = assignment.iter().max().map(|&m| m + 1).unwrap_or(0);
            for f in 0..used {
                if !forest_realizable(edges, assignment, f, n, cache) {
                    return Ok(false);
                }
            }
            return Ok(true);
        };
        let used = assignment.iter().max().map(|&m| m + 1).unwrap_or(0);
        for f in 0..bound.min(used + 1) {
            if degrees[f * nv + u] >= degree_cap || degrees[f * nv + v] >= degree_cap {
                continue;
            }
            degrees[f * nv + u] += 1;
            degrees[f * nv + v] += 1;
            assignment.push(f);
            // no alignment prune here: the realizable family includes
            // trees whose branch vertices do not share a path
            match rec(edges, bound, nv, n, degree_cap, assignment, degrees, budget, cache) {
                Ok(true) => return Ok(true),
                Ok(false) => {}
                Err(()) => return Err(()),
            }
            assignment.pop();
            degrees[f * nv + u] -= 1;
            degrees[f * nv + v] -= 1;
        }
        Ok(false)
    }

    match rec(
        &edges,
        bound,
        nv,
        n,
        degree_cap,
        &mut assignment,
        &mut degrees,
        &mut budget,
        &mut realizable_cache,
    ) {
        Err(()) => Err(DecompositionError::BudgetExhausted { bound }),
        Ok(false) => Ok(None),
        Ok(true) => {
            let mut out = vec![Vec::new(); bound];
            for (&e, &f) in edges.iter().zip(&assignment) {
                out[f].push(e);
            }
            out.retain(|f| !f.is_empty());
            let d = ForestDecomposition { forests: out };
            d.validate_partition(tree)?;
            Ok(Some(d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ceil_div(a: usize, b: usize) -> usize {
        a.div_ceil(b)
    }

    #[test]
    fn star_k15_splits_into_two_forests_at_k3() {
        let tree = Tree::star(5);
        let bound = ceil_div(tree.max_degree() + 1, 3);
        let d = star_forest_decompose(&tree, 3, bound).unwrap();
        assert_eq!(d.forests.len(), 2);
        verify_star_decomposition(&tree, &d, 3).unwrap();
    }

    #[test]
    fn path_p7_is_not_one_star_forest() {
        // a path segment of three or more edges always chains two stars
        // through a shared vertex, so a single forest cannot cover P7
        let tree = Tree::path(7);
        assert_eq!(
            star_forest_decompose(&tree, 3, 1),
            Err(DecompositionError::Infeasible { bound: 1 })
        );
        let d = star_forest_decompose(&tree, 3, 2).unwrap();
        assert_eq!(d.forests.len(), 2);
        verify_star_decomposition(&tree, &d, 3).unwrap();
    }

    #[test]
    fn degree_five_vertex_with_parent_fits_two_forests_at_k3() {
        // vertex 1 has degree 5 (parent 0 plus children 2..=5... plus 6)
        let tree =
            Tree::from_edges(7, &[(0, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]).unwrap();
        let d = star_forest_decompose(&tree, 3, 2).unwrap();
        verify_star_decomposition(&tree, &d, 3).unwrap();
        assert_eq!(d.forests.len(), 2);
    }

    #[test]
    fn k1_10_needs_only_two_forests_at_k5() {
        let tree = Tree::star(10);
        let d = star_forest_decompose(&tree, 5, 3).unwrap();
        assert_eq!(d.forests.len(), 2);
        verify_star_decomposition(&tree, &d, 5).unwrap();
    }

    #[test]
    fn caterpillar_decomposition_of_k14() {
        let tree = Tree::star(4);
        // Δ = 4: two forests needed and sufficient
        assert!(caterpillar_forest_decompose(&tree, 1, 1 << 20)
            .unwrap()
            .is_none());
        let d = caterpillar_forest_decompose(&tree, 2, 1 << 20)
            .unwrap()
            .unwrap();
        verify_caterpillar_decomposition(&tree, &d).unwrap();
    }

    #[test]
    fn multiplicities_count_touching_forests() {
        let tree = Tree::star(4);
        let d = ForestDecomposition {
            forests: vec![vec![(0, 1), (0, 2)], vec![(0, 3), (0, 4)]],
        };
        assert_eq!(d.multiplicities(&tree), vec![2, 1, 1, 1, 1]);
        assert_eq!(d.max_multiplicity(&tree), 2);
    }

    #[test]
    fn ortho_decompose_spider_in_one_forest() {
        // spider with 4 legs of length 2: realizable whole in dimension 2
        let mut edges = Vec::new();
        for i in 0..4 {
            edges.push((0, 1 + 2 * i));
            edges.push((1 + 2 * i, 2 + 2 * i));
        }
        let tree = Tree::from_edges(9, &edges).unwrap();
        let d = ortho_forest_decompose(&tree, 2, 1, 1 << 22).unwrap().unwrap();
        assert_eq!(d.forests.len(), 1);
    }
}
