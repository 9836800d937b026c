//! Intersection representations by closed unit cubes that may overlap,
//! with the separation procedure that fattens every degenerate (touching)
//! intersection until it contains a ball, one subtree translation per
//! repaired edge.

use crate::geometry::scene::CubeId;
use crate::rational::{rat, rat_int, Rat};
use crate::tree::Tree;
use num_traits::Signed;
use std::collections::BTreeSet;
use thiserror::Error;

/// One vertex's closed unit cube, allowed to overlap others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionCube {
    pub id: CubeId,
    pub vertex: usize,
    pub center: Vec<Rat>,
}

/// Unit cubes assigned bijectively to the vertices of a target graph; two
/// vertices are adjacent exactly when their closed cubes intersect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionRep {
    pub dimension: usize,
    pub cubes: Vec<IntersectionCube>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntersectionError {
    #[error("cube for vertex {0} is missing")]
    MissingVertex(usize),
    #[error("vertex {0} has two cubes")]
    DuplicateVertex(usize),
    #[error("intersection graph differs from the target tree at pair ({0}, {1})")]
    GraphMismatch(usize, usize),
    #[error("separation loop exceeded the edge count; repairs must not recur")]
    SeparationDiverged,
}

impl IntersectionRep {
    pub fn cube_of(&self, vertex: usize) -> Option<&IntersectionCube> {
        self.cubes.iter().find(|c| c.vertex == vertex)
    }

    /// Closed unit cubes intersect iff every center coordinate differs by
    /// at most 1.
    pub fn cubes_intersect(a: &IntersectionCube, b: &IntersectionCube) -> bool {
        a.center
            .iter()
            .zip(&b.center)
            .all(|(x, y)| (x - y).abs() <= rat_int(1))
    }

    /// Edges of the intersection graph over vertex ids.
    pub fn intersection_graph(&self) -> BTreeSet<(usize, usize)> {
        let mut edges = BTreeSet::new();
        for (i, a) in self.cubes.iter().enumerate() {
            for b in &self.cubes[i + 1..] {
                if Self::cubes_intersect(a, b) {
                    edges.insert((a.vertex.min(b.vertex), a.vertex.max(b.vertex)));
                }
            }
        }
        edges
    }

    /// Checks the bijection onto `0..t` and the exact match of the
    /// intersection graph with the tree's edges.
    pub fn verify_against(&self, tree: &Tree) -> Result<(), IntersectionError> {
        let mut seen = vec![false; tree.vertex_count()];
        for c in &self.cubes {
            if c.vertex >= tree.vertex_count() {
                return Err(IntersectionError::MissingVertex(c.vertex));
            }
            if seen[c.vertex] {
                return Err(IntersectionError::DuplicateVertex(c.vertex));
            }
            seen[c.vertex] = true;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(IntersectionError::MissingVertex(v));
        }
        let edges: BTreeSet<(usize, usize)> = tree.edges().iter().copied().collect();
        let got = self.intersection_graph();
        if got != edges {
            let diff = got
                .symmetric_difference(&edges)
                .next()
                .copied()
                .unwrap_or((0, 0));
            return Err(IntersectionError::GraphMismatch(diff.0, diff.1));
        }
        Ok(())
    }

    /// Smallest per-coordinate overlap width over all adjacent pairs.
    pub fn min_overlap_width(&self, tree: &Tree) -> Option<Rat> {
        let mut min: Option<Rat> = None;
        for &(u, v) in tree.edges() {
            let cu = self.cube_of(u)?;
            let cv = self.cube_of(v)?;
            for (x, y) in cu.center.iter().zip(&cv.center) {
                let w = rat_int(1) - (x - y).abs();
                min = Some(match min {
                    Some(m) => m.min(w.clone()),
                    None => w.clone(),
                });
            }
        }
        min
    }

    /// Embeds into a higher dimension by padding centers with zeros; the
    /// intersection graph is unchanged and overlaps stay at full width in
    /// the padded coordinates.
    pub fn embedded(&self, dimension: usize) -> IntersectionRep {
        assert!(dimension >= self.dimension);
        IntersectionRep {
            dimension,
            cubes: self
                .cubes
                .iter()
                .map(|c| {
                    let mut center = c.center.clone();
                    center.resize(dimension, rat_int(0));
                    IntersectionCube {
                        id: c.id,
                        vertex: c.vertex,
                        center,
                    }
                })
                .collect(),
        }
    }
}

fn sign(r: &Rat) -> i64 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Fattens every degenerate adjacency of a representation of `tree` until
/// each intersection has positive width in every coordinate, by
/// translating one side of the offending edge toward the other.
///
/// Each degenerate edge is repaired once: the translation of the whole
/// subtree on one side does not disturb any other pair. Returns the
/// separated representation and a radius ε such that every adjacent
/// overlap has width ≥ 2ε per coordinate.
pub fn epsilon_separate(
    rep: &IntersectionRep,
    tree: &Tree,
) -> Result<(IntersectionRep, Rat), IntersectionError> {
    rep.verify_against(tree)?;
    let mut rep = rep.clone();
    let one = rat_int(1);
    for _round in 0..=tree.edges().len() {
        // pick the smallest degenerate edge
        let degenerate = tree.edges().iter().copied().find(|&(u, v)| {
            let cu = rep.cube_of(u).expect("verified");
            let cv = rep.cube_of(v).expect("verified");
            cu.center
                .iter()
                .zip(&cv.center)
                .any(|(x, y)| (x - y).abs() == one)
        });
        let Some((u, v)) = degenerate else {
            let width = rep
                .min_overlap_width(tree)
                .unwrap_or_else(|| rat_int(1));
            let eps = (width / rat_int(2)).min(rat(1, 4));
            debug_assert!(eps.is_positive());
            return Ok((rep, eps));
        };
        // separation margin: every cross pair other than (u, v) is
        // non-adjacent, so some coordinate differs by more than 1
        let u_side: BTreeSet<usize> = tree.component_without_edge((u, v), u).into_iter().collect();
        let mut delta: Option<Rat> = None;
        for &a in &u_side {
            for b in 0..tree.vertex_count() {
                if u_side.contains(&b) || (a, b) == (u, v) {
                    continue;
                }
                let ca = rep.cube_of(a).expect("verified");
                let cb = rep.cube_of(b).expect("verified");
                let max_sep = ca
                    .center
                    .iter()
                    .zip(&cb.center)
                    .map(|(x, y)| (x - y).abs())
                    .max()
                    .expect("positive dimension");
                let slack = max_sep - &one;
                delta = Some(match delta {
                    Some(d) => d.min(slack),
                    None => slack,
                });
            }
        }
        // cap so the shifted edge stays intersecting in every coordinate
        let delta = delta.unwrap_or_else(|| rat_int(1)).min(rat_int(1));
        debug_assert!(delta.is_positive(), "non-adjacent pairs are strictly separated");
        let step = &delta / rat_int(2);
        let (cu, cv) = (
            rep.cube_of(u).expect("verified").center.clone(),
            rep.cube_of(v).expect("verified").center.clone(),
        );
        let shift: Vec<Rat> = cu
            .iter()
            .zip(&cv)
            .map(|(x, y)| &step * rat_int(sign(&(y - x))))
            .collect();
        for c in &mut rep.cubes {
            if u_side.contains(&c.vertex) {
                for (coord, s) in c.center.iter_mut().zip(&shift) {
                    *coord += s;
                }
            }
        }
        // the graph is invariant across every repair
        rep.verify_against(tree)?;
    }
    Err(IntersectionError::SeparationDiverged)
}

/// Unit intervals centered at i·(3/4): consecutive intervals overlap with
/// width 1/4, all other pairs are disjoint. Represents the path P_t.
pub fn path_intersection_rep(t: usize) -> IntersectionRep {
    assert!(t >= 1);
    IntersectionRep {
        dimension: 1,
        cubes: (0..t)
            .map(|i| IntersectionCube {
                id: CubeId(i),
                vertex: i,
                center: vec![rat(3 * i as i64, 4)],
            })
            .collect(),
    }
}

/// Center cube at the origin plus one leaf per sign vector in {−1,+1}^n at
/// (3/4)·s: every leaf meets the center, leaves are pairwise disjoint.
/// Represents K_{1,2^n} with the center as vertex 0.
pub fn star_intersection_rep(n: usize) -> IntersectionRep {
    star_intersection_rep_m(n, 1 << n)
}

/// The same construction restricted to the first `m` sign vectors
/// (binary counting order); represents K_{1,m} for m ≤ 2^n.
pub fn star_intersection_rep_m(n: usize, m: usize) -> IntersectionRep {
    assert!(n >= 1);
    assert!(m <= 1 << n);
    let mut cubes = vec![IntersectionCube {
        id: CubeId(0),
        vertex: 0,
        center: vec![rat_int(0); n],
    }];
    for leaf in 0..m {
        let center: Vec<Rat> = (0..n)
            .map(|bit| {
                if leaf >> bit & 1 == 1 {
                    rat(3, 4)
                } else {
                    rat(-3, 4)
                }
            })
            .collect();
        cubes.push(IntersectionCube {
            id: CubeId(leaf + 1),
            vertex: leaf + 1,
            center,
        });
    }
    IntersectionRep { dimension: n, cubes }
}

/// Double star: hub `u` of degree a+1 adjacent to hub `v` of degree b+1,
/// with a and b pendant leaves respectively (a, b ≤ 3), as unit squares.
///
/// Vertex numbering matches `double_star_tree`: u = 0, v = 1, u's leaves
/// 2..2+a, v's leaves 2+a..2+a+b.
pub fn double_star_intersection_rep(a: usize, b: usize) -> IntersectionRep {
    assert!(a <= 3 && b <= 3);
    // u sits at a corner of v's neighborhood; three leaf slots fit around
    // each of them with all separations strict
    let u = vec![rat(3, 4), rat(3, 4)];
    let v = vec![rat_int(0), rat_int(0)];
    let u_slots = [
        vec![rat(3, 8), rat(9, 8)],
        vec![rat(23, 16), rat(3, 8)],
        vec![rat(23, 16), rat(45, 32)],
    ];
    // the three remaining corners of v's neighborhood
    let v_slots = [
        vec![rat(3, 4), rat(-3, 4)],
        vec![rat(-3, 4), rat(3, 4)],
        vec![rat(-3, 4), rat(-3, 4)],
    ];
    let mut cubes = vec![
        IntersectionCube { id: CubeId(0), vertex: 0, center: u },
        IntersectionCube { id: CubeId(1), vertex: 1, center: v },
    ];
    for i in 0..a {
        cubes.push(IntersectionCube {
            id: CubeId(2 + i),
            vertex: 2 + i,
            center: u_slots[i].clone(),
        });
    }
    for i in 0..b {
        cubes.push(IntersectionCube {
            id: CubeId(2 + a + i),
            vertex: 2 + a + i,
            center: v_slots[i].clone(),
        });
    }
    IntersectionRep { dimension: 2, cubes }
}

/// The tree matching `double_star_intersection_rep`'s vertex numbering.
pub fn double_star_tree(a: usize, b: usize) -> Tree {
    let mut edges = vec![(0, 1)];
    for i in 0..a {
        edges.push((0, 2 + i));
    }
    for i in 0..b {
        edges.push((1, 2 + a + i));
    }
    Tree::from_edges(2 + a + b, &edges).expect("double star is a tree")
}
