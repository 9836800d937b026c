//! Subtree multisets and their chordal intersection graphs: padding to
//! uniform multiplicity, lexicographic BFS, perfect-elimination
//! verification, and greedy coloring.

use super::forest::{components_of_edges, ForestDecomposition};
use crate::tree::Tree;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Vertex sets, each inducing a subtree, covering every tree edge, with
/// every vertex in exactly `ell` members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeMultiset {
    pub members: Vec<BTreeSet<usize>>,
    pub ell: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChordalError {
    #[error("vertex {vertex} lies in {found} members, expected {expected}")]
    NotUniform {
        vertex: usize,
        found: usize,
        expected: usize,
    },
    #[error("members do not cover tree edge ({0}, {1})")]
    EdgeNotCovered(usize, usize),
    #[error("member {0} does not induce a subtree")]
    NotASubtree(usize),
    #[error("elimination order fails the perfect-elimination check at member {0}")]
    NotPerfectElimination(usize),
    #[error("coloring used {used} colors, expected exactly {expected}")]
    WrongColorCount { used: usize, expected: usize },
}

impl SubtreeMultiset {
    pub fn multiplicity(&self, v: usize) -> usize {
        self.members.iter().filter(|m| m.contains(&v)).count()
    }

    pub fn validate(&self, tree: &Tree) -> Result<(), ChordalError> {
        for v in 0..tree.vertex_count() {
            let found = self.multiplicity(v);
            if found != self.ell {
                return Err(ChordalError::NotUniform {
                    vertex: v,
                    found,
                    expected: self.ell,
                });
            }
        }
        for (i, member) in self.members.iter().enumerate() {
            if !induces_subtree(tree, member) {
                return Err(ChordalError::NotASubtree(i));
            }
        }
        let covered: BTreeSet<(usize, usize)> = self
            .members
            .iter()
            .flat_map(|m| {
                tree.edges()
                    .iter()
                    .copied()
                    .filter(|&(u, v)| m.contains(&u) && m.contains(&v))
            })
            .collect();
        for &(u, v) in tree.edges() {
            if !covered.contains(&(u, v)) {
                return Err(ChordalError::EdgeNotCovered(u, v));
            }
        }
        Ok(())
    }

    /// The edges each member contributes (edges induced within it).
    pub fn member_edges(&self, tree: &Tree, member: usize) -> Vec<(usize, usize)> {
        tree.edges()
            .iter()
            .copied()
            .filter(|&(u, v)| {
                self.members[member].contains(&u) && self.members[member].contains(&v)
            })
            .collect()
    }
}

fn induces_subtree(tree: &Tree, member: &BTreeSet<usize>) -> bool {
    let Some(&first) = member.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([first]);
    let mut stack = vec![first];
    while let Some(v) = stack.pop() {
        for &w in tree.neighbors(v) {
            if member.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == member.len()
}

/// Lifts a forest decomposition to a uniform subtree multiset: members are
/// the components of every forest, padded with singletons until every
/// vertex reaches the maximum multiplicity.
pub fn pad_to_uniform(tree: &Tree, witness: &ForestDecomposition) -> SubtreeMultiset {
    let mut members: Vec<BTreeSet<usize>> = Vec::new();
    for forest in &witness.forests {
        for (vertices, _) in components_of_edges(forest) {
            members.push(vertices.into_iter().collect());
        }
    }
    let mut mult = vec![0usize; tree.vertex_count()];
    for m in &members {
        for &v in m {
            mult[v] += 1;
        }
    }
    let ell = mult.iter().copied().max().unwrap_or(0).max(1);
    for v in 0..tree.vertex_count() {
        for _ in mult[v]..ell {
            members.push(BTreeSet::from([v]));
        }
    }
    let out = SubtreeMultiset { members, ell };
    debug_assert!(out.validate(tree).is_ok());
    out
}

/// A proper coloring of the members with class indices `0..ell`, together
/// with the elimination order that produced it.
#[derive(Debug, Clone)]
pub struct ChordalColoring {
    pub color: Vec<usize>,
    pub elimination_order: Vec<usize>,
    pub color_count: usize,
}

impl ChordalColoring {
    pub fn class(&self, color: usize) -> Vec<usize> {
        (0..self.color.len()).filter(|&m| self.color[m] == color).collect()
    }
}

/// Builds the member-intersection graph, computes a lexicographic-BFS
/// elimination order, verifies it is perfect (the graph is chordal), and
/// greedy-colors in reverse order using exactly `ell` colors.
pub fn chordal_color(
    tree: &Tree,
    multiset: &SubtreeMultiset,
) -> Result<ChordalColoring, ChordalError> {
    multiset.validate(tree)?;
    let n = multiset.members.len();
    let adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    j != i
                        && !multiset.members[i]
                            .intersection(&multiset.members[j])
                            .next()
                            .is_none()
                })
                .collect()
        })
        .collect();

    // lexicographic BFS, ties by member index
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let next = (0..n)
            .filter(|&i| !visited[i])
            .max_by(|&a, &b| labels[a].cmp(&labels[b]).then(b.cmp(&a)))
            .expect("unvisited member remains");
        visited[next] = true;
        order.push(next);
        for &w in &adj[next] {
            if !visited[w] {
                labels[w].push(n - step);
            }
        }
    }
    // LexBFS emits a reverse perfect elimination ordering on chordal
    // graphs; eliminate in reverse
    let elimination: Vec<usize> = order.iter().rev().copied().collect();

    // perfect elimination check: the later neighbors of each member must
    // form a clique, verified through the earliest of them
    let position: BTreeMap<usize, usize> = elimination
        .iter()
        .enumerate()
        .map(|(p, &m)| (m, p))
        .collect();
    for (p, &m) in elimination.iter().enumerate() {
        let later: Vec<usize> = adj[m]
            .iter()
            .copied()
            .filter(|w| position[w] > p)
            .collect();
        let Some(&pivot) = later.iter().min_by_key(|w| position[w]) else {
            continue;
        };
        for &w in &later {
            if w != pivot && !adj[pivot].contains(&w) {
                return Err(ChordalError::NotPerfectElimination(m));
            }
        }
    }

    // greedy color along the reverse elimination order
    let mut color = vec![usize::MAX; n];
    for &m in elimination.iter().rev() {
        let used: BTreeSet<usize> = adj[m]
            .iter()
            .filter(|&&w| color[w] != usize::MAX)
            .map(|&w| color[w])
            .collect();
        color[m] = (0..).find(|c| !used.contains(c)).expect("some color free");
    }
    let color_count = color.iter().copied().max().map(|c| c + 1).unwrap_or(0);
    if color_count != multiset.ell {
        return Err(ChordalError::WrongColorCount {
            used: color_count,
            expected: multiset.ell,
        });
    }
    // no two members sharing a vertex may share a color
    for i in 0..n {
        for &j in &adj[i] {
            debug_assert_ne!(color[i], color[j]);
        }
    }
    Ok(ChordalColoring {
        color,
        elimination_order: elimination,
        color_count,
    })
}
