//! Exact visibility predicates and graph extraction.
//!
//! Two cubes see each other when an axis-aligned cylindrical channel of
//! positive diameter joins them without meeting any other cube. The test
//! reduces to: does the open overlap of the facing projections, minus the
//! closed projections of every interposed cube, still contain a nonempty
//! open set? Decided exactly by coordinate compression over blocker faces.

use super::scene::{unit_interval, CubeId, OrthoScene, Scene, SceneError, StandardScene};
use crate::rational::{rat, rat_int, Rat};
use num_traits::Signed;
use std::collections::BTreeSet;

/// A witnessed line of sight between two cubes.
///
/// `axis` is 0-based; in the orthogonal model it is `n` (the height axis).
/// `length` is the face-to-face distance along the axis (standard model) or
/// the height difference (orthogonal model); always positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SightLine {
    pub a: CubeId,
    pub b: CubeId,
    pub axis: usize,
    pub length: Rat,
}

/// Does the open box `outer` minus the union of the closed boxes
/// `blockers` contain a nonempty open set?
///
/// `outer` lists per-axis open intervals (lo, hi) with lo < hi. Blockers
/// are per-axis closed intervals. A zero-dimensional region (empty `outer`)
/// survives exactly when there is no blocker at all.
pub fn open_region_survives(outer: &[(Rat, Rat)], blockers: &[Vec<(Rat, Rat)>]) -> bool {
    if outer.is_empty() {
        return blockers.is_empty();
    }
    // grids of candidate cell boundaries per axis
    let mut grids: Vec<Vec<Rat>> = Vec::with_capacity(outer.len());
    for (axis, (lo, hi)) in outer.iter().enumerate() {
        let mut cuts = BTreeSet::new();
        cuts.insert(lo.clone());
        cuts.insert(hi.clone());
        for b in blockers {
            for v in [&b[axis].0, &b[axis].1] {
                if v > lo && v < hi {
                    cuts.insert(v.clone());
                }
            }
        }
        grids.push(cuts.into_iter().collect());
    }
    // walk every open cell; its center decides coverage because every
    // blocker face lies on the grid
    let mut index = vec![0usize; outer.len()];
    'cells: loop {
        let center: Vec<Rat> = grids
            .iter()
            .zip(&index)
            .map(|(g, &i)| (&g[i] + &g[i + 1]) / rat_int(2))
            .collect();
        let covered = blockers.iter().any(|b| {
            b.iter()
                .zip(&center)
                .all(|((blo, bhi), c)| blo <= c && c <= bhi)
        });
        if !covered {
            return true;
        }
        // advance the cell index odometer
        for axis in 0..outer.len() {
            index[axis] += 1;
            if index[axis] + 1 < grids[axis].len() {
                continue 'cells;
            }
            index[axis] = 0;
        }
        return false;
    }
}

/// Sightline between cubes `a` and `b` of a standard scene, if any.
///
/// At most one axis can admit visibility; axes are scanned in ascending
/// order so the reported axis is deterministic.
pub fn visible_standard(
    scene: &StandardScene,
    a: CubeId,
    b: CubeId,
) -> Result<Option<SightLine>, SceneError> {
    assert_ne!(a, b, "visibility is defined between distinct cubes");
    let ca = &scene.cube(a)?.center;
    let cb = &scene.cube(b)?.center;
    let one = rat_int(1);
    'axes: for axis in 0..scene.dimension {
        let gap = (&ca[axis] - &cb[axis]).abs() - &one;
        if !gap.is_positive() {
            continue;
        }
        // open overlap of the projections orthogonal to `axis`
        let mut outer = Vec::with_capacity(scene.dimension - 1);
        for i in 0..scene.dimension {
            if i == axis {
                continue;
            }
            if (&ca[i] - &cb[i]).abs() >= one {
                continue 'axes;
            }
            let (alo, ahi) = unit_interval(&ca[i]);
            let (blo, bhi) = unit_interval(&cb[i]);
            outer.push((alo.max(blo), ahi.min(bhi)));
        }
        // open channel interval between the facing faces
        let half = rat(1, 2);
        let chan_lo = ca[axis].clone().min(cb[axis].clone()) + &half;
        let chan_hi = ca[axis].clone().max(cb[axis].clone()) - &half;
        let mut blockers = Vec::new();
        for c in &scene.cubes {
            if c.id == a || c.id == b {
                continue;
            }
            let (clo, chi) = unit_interval(&c.center[axis]);
            if chi > chan_lo && clo < chan_hi {
                blockers.push(
                    (0..scene.dimension)
                        .filter(|&i| i != axis)
                        .map(|i| unit_interval(&c.center[i]))
                        .collect::<Vec<_>>(),
                );
            }
        }
        if open_region_survives(&outer, &blockers) {
            return Ok(Some(SightLine {
                a: a.min(b),
                b: a.max(b),
                axis,
                length: gap,
            }));
        }
    }
    Ok(None)
}

/// Sightline between cubes of an orthogonal scene: the channel is parallel
/// to the height axis; interposed cubes are those with height strictly
/// between the endpoints.
pub fn visible_ortho(
    scene: &OrthoScene,
    a: CubeId,
    b: CubeId,
) -> Result<Option<SightLine>, SceneError> {
    assert_ne!(a, b, "visibility is defined between distinct cubes");
    let ca = scene.cube(a)?;
    let cb = scene.cube(b)?;
    if ca.height == cb.height {
        return Ok(None);
    }
    let one = rat_int(1);
    let mut outer = Vec::with_capacity(scene.dimension);
    for i in 0..scene.dimension {
        if (&ca.center[i] - &cb.center[i]).abs() >= one {
            return Ok(None);
        }
        let (alo, ahi) = unit_interval(&ca.center[i]);
        let (blo, bhi) = unit_interval(&cb.center[i]);
        outer.push((alo.max(blo), ahi.min(bhi)));
    }
    let h_lo = ca.height.clone().min(cb.height.clone());
    let h_hi = ca.height.clone().max(cb.height.clone());
    let mut blockers = Vec::new();
    for c in &scene.cubes {
        if c.id == a || c.id == b {
            continue;
        }
        if c.height > h_lo && c.height < h_hi {
            blockers.push(
                c.center
                    .iter()
                    .map(unit_interval)
                    .collect::<Vec<_>>(),
            );
        }
    }
    if open_region_survives(&outer, &blockers) {
        Ok(Some(SightLine {
            a: a.min(b),
            b: a.max(b),
            axis: scene.dimension,
            length: &h_hi - &h_lo,
        }))
    } else {
        Ok(None)
    }
}

pub fn visible(scene: &Scene, a: CubeId, b: CubeId) -> Result<Option<SightLine>, SceneError> {
    match scene {
        Scene::Standard(s) => visible_standard(s, a, b),
        Scene::Ortho(s) => visible_ortho(s, a, b),
    }
}

/// The visibility graph of a scene: vertices are cube ids, edges the
/// visible pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneGraph {
    pub ids: Vec<CubeId>,
    pub edges: BTreeSet<(CubeId, CubeId)>,
}

impl SceneGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: CubeId, b: CubeId) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Connected components under the visibility relation, each sorted,
    /// listed by smallest member.
    pub fn components(&self) -> Vec<Vec<CubeId>> {
        let comp: std::collections::BTreeMap<CubeId, usize> = self
            .ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect();
        // union-find over positions
        let mut parent: Vec<usize> = (0..self.ids.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, comp[&a]), find(&mut parent, comp[&b]));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<CubeId>> = Default::default();
        for (i, &id) in self.ids.iter().enumerate() {
            groups.entry(find(&mut parent, i)).or_default().push(id);
        }
        let mut out: Vec<Vec<CubeId>> = groups.into_values().collect();
        out.sort_by_key(|g| g[0]);
        out
    }
}

/// All visible pairs of the scene.
pub fn extract_graph(scene: &Scene) -> SceneGraph {
    let ids = scene.cube_ids();
    let mut edges = BTreeSet::new();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if visible(scene, a, b).expect("ids come from the scene").is_some() {
                edges.insert((a, b));
            }
        }
    }
    SceneGraph { ids, edges }
}

/// Partition of the scene's cubes into visibility components.
pub fn components(scene: &Scene) -> Vec<Vec<CubeId>> {
    extract_graph(scene).components()
}
