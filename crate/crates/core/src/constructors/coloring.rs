//! Two-coloring of base-tree edges that drives cube heights in the
//! cubicity-to-orthogonal construction.
//!
//! Heights are potentials: an edge colored blue raises the height by 1
//! walking away from the root, a red edge lowers it by 1. The coloring
//! must place, at every vertex, all endpoint-0 neighbors of its expansion
//! on one side and all endpoint-k neighbors on the other — each neighbor's
//! side (above/below) decides which end of the vertex's cube stack its
//! sightline reaches.
//!
//! From the colored parent edge of u (class i), a child edge in the same
//! class receives the opposite color: the parent's side, seen from u, is
//! the negation of its edge color, while a child's side is the color
//! itself. At the root, endpoint-0 edges are red (neighbors below).

use crate::rational::Rat;
use crate::tree::{Endpoint, PathExpansion, Tree};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeColor {
    Blue,
    Red,
}

impl EdgeColor {
    fn flip(self) -> EdgeColor {
        match self {
            EdgeColor::Blue => EdgeColor::Red,
            EdgeColor::Red => EdgeColor::Blue,
        }
    }

    /// Height step when walking this edge away from the root.
    fn step(self) -> i64 {
        match self {
            EdgeColor::Blue => 1,
            EdgeColor::Red => -1,
        }
    }
}

/// Edge colors plus the root they were propagated from.
#[derive(Debug, Clone)]
pub struct EdgeTwoColoring {
    pub root: usize,
    pub color: BTreeMap<(usize, usize), EdgeColor>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("need one expansion per vertex")]
    WrongExpansionCount,
    #[error("expansion at {0} is inconsistent with the tree")]
    BadExpansion(usize),
    #[error("classes at vertex {0} are not side-homogeneous")]
    SidesMixed(usize),
}

impl EdgeTwoColoring {
    pub fn color_of(&self, u: usize, v: usize) -> EdgeColor {
        self.color[&(u.min(v), u.max(v))]
    }

    /// Height of every vertex: blue edges minus red edges on the path from
    /// the root.
    pub fn heights(&self, tree: &Tree) -> Vec<i64> {
        let mut h = vec![0i64; tree.vertex_count()];
        let order = tree.bfs_order(self.root).expect("root in range");
        let parent = tree.bfs_parents(self.root);
        for &v in order.iter().skip(1) {
            h[v] = h[parent[v]] + self.color_of(parent[v], v).step();
        }
        h
    }
}

/// Colors the edges so that, at every vertex, the two partition classes of
/// its expansion end up on opposite height sides.
pub fn edge_two_color(
    base_tree: &Tree,
    expansions: &[PathExpansion],
    root: usize,
) -> Result<EdgeTwoColoring, ColoringError> {
    if expansions.len() != base_tree.vertex_count() {
        return Err(ColoringError::WrongExpansionCount);
    }
    for (u, e) in expansions.iter().enumerate() {
        if e.vertex != u || e.validate(base_tree).is_err() {
            return Err(ColoringError::BadExpansion(u));
        }
    }
    let mut color = BTreeMap::new();
    let order = base_tree.bfs_order(root).expect("root in range");
    let parent = base_tree.bfs_parents(root);
    for &u in &order {
        if u == root {
            for &w in base_tree.neighbors(root) {
                let c = match expansions[root].assignment[&w] {
                    Endpoint::Zero => EdgeColor::Red,
                    Endpoint::Last => EdgeColor::Blue,
                };
                color.insert((root.min(w), root.max(w)), c);
            }
            continue;
        }
        let p = parent[u];
        let parent_color = color[&(u.min(p), u.max(p))];
        let parent_class = expansions[u].assignment[&p];
        for &w in base_tree.neighbors(u) {
            if w == p {
                continue;
            }
            let same_class = expansions[u].assignment[&w] == parent_class;
            // same class ⇒ same side as the parent ⇒ opposite color
            let c = if same_class {
                parent_color.flip()
            } else {
                parent_color
            };
            color.insert((u.min(w), u.max(w)), c);
        }
    }
    let coloring = EdgeTwoColoring { root, color };
    verify_sides(base_tree, expansions, &coloring)?;
    Ok(coloring)
}

/// Side of neighbor `w` relative to `u`: +1 above, −1 below.
pub fn neighbor_side(tree: &Tree, coloring: &EdgeTwoColoring, u: usize, w: usize) -> i64 {
    let parent = tree.bfs_parents(coloring.root);
    let c = coloring.color_of(u, w);
    if parent[w] == u {
        c.step()
    } else {
        -c.step()
    }
}

fn verify_sides(
    tree: &Tree,
    expansions: &[PathExpansion],
    coloring: &EdgeTwoColoring,
) -> Result<(), ColoringError> {
    for u in 0..tree.vertex_count() {
        let mut side_of_class: BTreeMap<Endpoint, i64> = BTreeMap::new();
        for &w in tree.neighbors(u) {
            let class = expansions[u].assignment[&w];
            let side = neighbor_side(tree, coloring, u, w);
            match side_of_class.get(&class) {
                None => {
                    side_of_class.insert(class, side);
                }
                Some(&s) if s == side => {}
                Some(_) => return Err(ColoringError::SidesMixed(u)),
            }
        }
        if let (Some(&a), Some(&b)) = (
            side_of_class.get(&Endpoint::Zero),
            side_of_class.get(&Endpoint::Last),
        ) {
            if a == b {
                return Err(ColoringError::SidesMixed(u));
            }
        }
    }
    Ok(())
}

/// Evenly spaced stack heights inside [h − 1/3, h + 1/3]: one height for a
/// single cube, spacing (2/3)/k for k + 1 cubes.
pub fn stack_heights(h: i64, count: usize) -> Vec<Rat> {
    use crate::rational::{rat, rat_int};
    let h = rat_int(h);
    if count == 1 {
        return vec![h];
    }
    let third = rat(1, 3);
    let k = count - 1;
    let spacing = rat(2, 3) / rat_int(k as i64);
    (0..count)
        .map(|i| &h - &third + &spacing * rat_int(i as i64))
        .collect()
}
