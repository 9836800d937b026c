//! Labeled trees on dense vertex ids `0..t`, with breadth-first labeling
//! and path expansions.
//!
//! Vertex identity is tracked explicitly through every transformation;
//! isomorphism is never assumed, only recorded relabeling maps.

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertex count must be positive")]
    EmptyTree,
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) closes a cycle")]
    Cycle(usize, usize),
    #[error("vertex {0} unreachable from vertex 0")]
    Disconnected(usize),
    #[error("expected {expected} edges for {vertices} vertices, found {found}")]
    WrongEdgeCount {
        expected: usize,
        vertices: usize,
        found: usize,
    },
}

/// An undirected tree on vertices `0..vertex_count()`.
///
/// Construction validates connectivity and acyclicity; a `Tree` value is
/// immutable afterwards and safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Tree {
    /// Validates `edge_list` as a tree on `vertex_count` vertices.
    pub fn from_edges(vertex_count: usize, edge_list: &[(usize, usize)]) -> Result<Self, TreeError> {
        if vertex_count == 0 {
            return Err(TreeError::EmptyTree);
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut adj = vec![Vec::new(); vertex_count];
        let mut parent: Vec<usize> = (0..vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in edge_list {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(TreeError::VertexOutOfRange {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(TreeError::DuplicateEdge(e.0, e.1));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(TreeError::Cycle(e.0, e.1));
            }
            parent[ra] = rb;
            adj[a].push(b);
            adj[b].push(a);
            edges.push(e);
        }
        if edges.len() != vertex_count - 1 {
            // With no cycle found, too few edges means a disconnected graph.
            let root = find(&mut parent, 0);
            if let Some(v) = (0..vertex_count).find(|&v| find(&mut parent, v) != root) {
                return Err(TreeError::Disconnected(v));
            }
            return Err(TreeError::WrongEdgeCount {
                expected: vertex_count - 1,
                vertices: vertex_count,
                found: edges.len(),
            });
        }
        edges.sort();
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Tree {
            vertex_count,
            edges,
            adj,
        })
    }

    /// Path on `t` vertices: 0—1—…—t−1.
    pub fn path(t: usize) -> Tree {
        let edges: Vec<_> = (0..t.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Tree::from_edges(t, &edges).expect("path is a tree")
    }

    /// Star with center 0 and leaves 1..=m.
    pub fn star(m: usize) -> Tree {
        let edges: Vec<_> = (1..=m).map(|i| (0, i)).collect();
        Tree::from_edges(m + 1, &edges).expect("star is a tree")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges in ascending lexicographic order, each as (min, max).
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Maximum vertex degree; 0 for the single-vertex tree.
    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Breadth-first ordering from `root`; ties within a level are broken by
    /// ascending vertex id, so the result is deterministic.
    pub fn bfs_order(&self, root: usize) -> Result<Vec<usize>, TreeError> {
        if root >= self.vertex_count {
            return Err(TreeError::VertexOutOfRange {
                vertex: root,
                count: self.vertex_count,
            });
        }
        let mut order = Vec::with_capacity(self.vertex_count);
        let mut seen = vec![false; self.vertex_count];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(root);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            // adjacency lists are sorted, so same-level vertices enqueue by id
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok(order)
    }

    /// BFS parents from `root`; the root is its own parent.
    pub fn bfs_parents(&self, root: usize) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        let mut seen = vec![false; self.vertex_count];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(root);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// The unique path between `u` and `v`, inclusive.
    pub fn path_between(&self, u: usize, v: usize) -> Vec<usize> {
        let parent = self.bfs_parents(u);
        let mut path = vec![v];
        let mut cur = v;
        while cur != u {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Hop distances from `root` to every vertex.
    pub fn distances(&self, root: usize) -> Vec<usize> {
        let parent = self.bfs_parents(root);
        let mut dist = vec![usize::MAX; self.vertex_count];
        for v in self.bfs_order(root).expect("root in range") {
            dist[v] = if v == root { 0 } else { dist[parent[v]] + 1 };
        }
        dist
    }

    /// Vertices of the component of `v` in the forest `self − removed_edge`.
    pub fn component_without_edge(&self, removed: (usize, usize), v: usize) -> Vec<usize> {
        let removed = (removed.0.min(removed.1), removed.0.max(removed.1));
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![v];
        let mut comp = Vec::new();
        seen[v] = true;
        while let Some(x) = stack.pop() {
            comp.push(x);
            for &w in &self.adj[x] {
                let e = (x.min(w), x.max(w));
                if e == removed || seen[w] {
                    continue;
                }
                seen[w] = true;
                stack.push(w);
            }
        }
        comp.sort_unstable();
        comp
    }
}

/// Which endpoint of an expansion path a former neighbor attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Endpoint {
    /// Endpoint `v_0`.
    Zero,
    /// Endpoint `v_k`.
    Last,
}

/// Replacement of one vertex by a path of `length + 1` vertices, with each
/// former neighbor reattached to one of the path's two endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathExpansion {
    pub vertex: usize,
    pub length: usize,
    pub assignment: BTreeMap<usize, Endpoint>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("expansion vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("expansion at {vertex} does not cover neighbor {neighbor}")]
    MissingNeighbor { vertex: usize, neighbor: usize },
    #[error("expansion at {vertex} assigns non-neighbor {non_neighbor}")]
    NotANeighbor { vertex: usize, non_neighbor: usize },
    #[error("length-0 expansion at {vertex} must send every neighbor to endpoint 0")]
    ZeroLengthSplit { vertex: usize },
    #[error("expected one expansion per vertex ({expected}), found {found}")]
    WrongExpansionCount { expected: usize, found: usize },
}

impl PathExpansion {
    /// Length-0 expansion: the identity replacement at `vertex`.
    pub fn trivial(tree: &Tree, vertex: usize) -> PathExpansion {
        PathExpansion {
            vertex,
            length: 0,
            assignment: tree
                .neighbors(vertex)
                .iter()
                .map(|&n| (n, Endpoint::Zero))
                .collect(),
        }
    }

    pub fn validate(&self, tree: &Tree) -> Result<(), ExpansionError> {
        if self.vertex >= tree.vertex_count() {
            return Err(ExpansionError::VertexOutOfRange(self.vertex));
        }
        for &n in tree.neighbors(self.vertex) {
            if !self.assignment.contains_key(&n) {
                return Err(ExpansionError::MissingNeighbor {
                    vertex: self.vertex,
                    neighbor: n,
                });
            }
        }
        for (&n, &end) in &self.assignment {
            if !tree.has_edge(self.vertex, n) {
                return Err(ExpansionError::NotANeighbor {
                    vertex: self.vertex,
                    non_neighbor: n,
                });
            }
            if self.length == 0 && end == Endpoint::Last {
                return Err(ExpansionError::ZeroLengthSplit { vertex: self.vertex });
            }
        }
        Ok(())
    }
}

/// Result of applying one expansion per base vertex: the expanded tree and
/// the identity bookkeeping in both directions.
#[derive(Debug, Clone)]
pub struct ExpandedTree {
    pub tree: Tree,
    /// expanded vertex id → (base vertex, position on its expansion path)
    pub origin: Vec<(usize, usize)>,
    /// per base vertex, the expansion path's ids in position order
    pub paths: Vec<Vec<usize>>,
}

impl ExpandedTree {
    pub fn id_of(&self, base: usize, position: usize) -> usize {
        self.paths[base][position]
    }
}

/// Applies one `PathExpansion` per vertex of `base` simultaneously.
///
/// Expanded ids are assigned in blocks: base vertex `u` receives the
/// consecutive ids for positions `0..=length(u)`, blocks ordered by `u`.
pub fn apply_expansions(
    base: &Tree,
    expansions: &[PathExpansion],
) -> Result<ExpandedTree, ExpansionError> {
    if expansions.len() != base.vertex_count() {
        return Err(ExpansionError::WrongExpansionCount {
            expected: base.vertex_count(),
            found: expansions.len(),
        });
    }
    for (u, e) in expansions.iter().enumerate() {
        if e.vertex != u {
            return Err(ExpansionError::VertexOutOfRange(e.vertex));
        }
        e.validate(base)?;
    }
    let mut paths = Vec::with_capacity(base.vertex_count());
    let mut origin = Vec::new();
    let mut next = 0usize;
    for (u, e) in expansions.iter().enumerate() {
        let ids: Vec<usize> = (0..=e.length).map(|p| next + p).collect();
        next += e.length + 1;
        for (p, _) in ids.iter().enumerate() {
            origin.push((u, p));
        }
        paths.push(ids);
    }
    let mut edges = Vec::new();
    for path in &paths {
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
        }
    }
    for &(u, v) in base.edges() {
        let end_u = expansions[u].assignment[&v];
        let end_v = expansions[v].assignment[&u];
        let pu = match end_u {
            Endpoint::Zero => paths[u][0],
            Endpoint::Last => *paths[u].last().unwrap(),
        };
        let pv = match end_v {
            Endpoint::Zero => paths[v][0],
            Endpoint::Last => *paths[v].last().unwrap(),
        };
        edges.push((pu, pv));
    }
    let tree = Tree::from_edges(next, &edges).expect("expansion of a tree is a tree");
    Ok(ExpandedTree { tree, origin, paths })
}

/// Expands a single vertex, leaving every other vertex alone.
///
/// Returns the expanded tree, the relabeling of surviving vertices
/// (`old id → new id`), and the ids of the replacement path in order.
pub fn path_expand(
    tree: &Tree,
    expansion: &PathExpansion,
) -> Result<(Tree, Vec<usize>, Vec<usize>), ExpansionError> {
    expansion.validate(tree)?;
    let expansions: Vec<PathExpansion> = (0..tree.vertex_count())
        .map(|u| {
            if u == expansion.vertex {
                expansion.clone()
            } else {
                PathExpansion::trivial(tree, u)
            }
        })
        .collect();
    let expanded = apply_expansions(tree, &expansions)?;
    let relabel: Vec<usize> = (0..tree.vertex_count())
        .map(|u| expanded.paths[u][0])
        .collect();
    let path = expanded.paths[expansion.vertex].clone();
    Ok((expanded.tree, relabel, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_smallest_nontrivial_tree() {
        let t = Tree::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_cycle() {
        assert_eq!(
            Tree::from_edges(3, &[(0, 1), (1, 2), (0, 2)]),
            Err(TreeError::Cycle(0, 2))
        );
    }

    #[test]
    fn rejects_disconnected() {
        match Tree::from_edges(4, &[(0, 1), (2, 3)]) {
            Err(TreeError::Disconnected(_)) => {}
            other => panic!("expected disconnected, got {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicate_and_out_of_range() {
        assert_eq!(
            Tree::from_edges(3, &[(0, 1), (1, 0), (1, 2)]),
            Err(TreeError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Tree::from_edges(2, &[(0, 5)]),
            Err(TreeError::VertexOutOfRange { vertex: 5, count: 2 })
        );
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(Tree::star(5).max_degree(), 5);
        assert_eq!(Tree::path(7).max_degree(), 2);
        assert_eq!(Tree::path(1).max_degree(), 0);
    }

    #[test]
    fn bfs_order_examples() {
        let p3 = Tree::path(3);
        assert_eq!(p3.bfs_order(1).unwrap(), vec![1, 0, 2]);
        assert_eq!(p3.bfs_order(0).unwrap(), vec![0, 1, 2]);
        let star = Tree::star(4);
        assert_eq!(star.bfs_order(0).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(p3.bfs_order(9).is_err());
    }

    #[test]
    fn bfs_is_deterministic() {
        let t = Tree::from_edges(6, &[(0, 2), (0, 4), (2, 1), (2, 5), (4, 3)]).unwrap();
        assert_eq!(t.bfs_order(0).unwrap(), t.bfs_order(0).unwrap());
    }

    #[test]
    fn zero_length_expansion_is_identity() {
        let t = Tree::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let e = PathExpansion::trivial(&t, 1);
        let (t2, relabel, path) = path_expand(&t, &e).unwrap();
        assert_eq!(t2.vertex_count(), 4);
        assert_eq!(path.len(), 1);
        // identity up to the recorded relabeling
        for &(u, v) in t.edges() {
            assert!(t2.has_edge(relabel[u], relabel[v]));
        }
    }

    #[test]
    fn star_expansion_all_to_one_end_gives_bigger_star() {
        // K_{1,4}, expand center by 1, all leaves to endpoint 0 -> K_{1,5}
        let star = Tree::star(4);
        let e = PathExpansion {
            vertex: 0,
            length: 1,
            assignment: (1..=4).map(|n| (n, Endpoint::Zero)).collect(),
        };
        let (t2, relabel, path) = path_expand(&star, &e).unwrap();
        assert_eq!(t2.vertex_count(), 6);
        let hub = path[0];
        assert_eq!(t2.degree(hub), 5);
        assert_eq!(t2.degree(path[1]), 1);
        for leaf in 1..=4 {
            assert!(t2.has_edge(hub, relabel[leaf]));
        }
    }

    #[test]
    fn star_expansion_split_gives_double_broom() {
        let star = Tree::star(4);
        let e = PathExpansion {
            vertex: 0,
            length: 1,
            assignment: vec![
                (1, Endpoint::Zero),
                (2, Endpoint::Zero),
                (3, Endpoint::Last),
                (4, Endpoint::Last),
            ]
            .into_iter()
            .collect(),
        };
        let (t2, relabel, path) = path_expand(&star, &e).unwrap();
        assert_eq!(t2.vertex_count(), 6);
        assert_eq!(t2.degree(path[0]), 3);
        assert_eq!(t2.degree(path[1]), 3);
        assert!(t2.has_edge(path[0], relabel[1]));
        assert!(t2.has_edge(path[1], relabel[3]));
    }

    #[test]
    fn expansion_must_cover_neighbors() {
        let t = Tree::path(3);
        let e = PathExpansion {
            vertex: 1,
            length: 1,
            assignment: vec![(0, Endpoint::Zero)].into_iter().collect(),
        };
        assert_eq!(
            path_expand(&t, &e),
            Err(ExpansionError::MissingNeighbor { vertex: 1, neighbor: 2 })
        );
    }
}
