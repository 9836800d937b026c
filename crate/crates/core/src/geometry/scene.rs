//! Scenes of unit cubes with exact rational coordinates, in both models:
//! standard (cubes in R^n, sightlines along any axis) and orthogonal
//! (n-dimensional cubes in R^{n+1} at fixed heights, sightlines along the
//! last axis only).
//!
//! Cubes are closed and "disjoint" means strictly disjoint closed sets;
//! tangency is forbidden.

use crate::rational::{rat, rat_int, Rat};
use num_traits::Signed;
use std::collections::BTreeSet;
use thiserror::Error;

/// Identifier of one cube within a scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeId(pub usize);

impl std::fmt::Display for CubeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SceneError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("cube {0} repeats an id")]
    DuplicateId(CubeId),
    #[error("cube {id} has {found} center coordinates, expected {expected}")]
    WrongArity {
        id: CubeId,
        found: usize,
        expected: usize,
    },
    #[error("unknown cube id {0}")]
    UnknownCube(CubeId),
    #[error("cubes {0} and {1} are identical")]
    SamePair(CubeId, CubeId),
}

/// A disjointness violation found by validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneViolation {
    pub a: CubeId,
    pub b: CubeId,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardCube {
    pub id: CubeId,
    pub center: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoCube {
    pub id: CubeId,
    pub center: Vec<Rat>,
    pub height: Rat,
}

/// Unit n-cubes in R^n; each cube is the closed box center ± 1/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardScene {
    pub dimension: usize,
    pub cubes: Vec<StandardCube>,
}

/// Unit n-cubes in R^{n+1}, aligned with the first n axes, each at a fixed
/// last coordinate (its height).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoScene {
    pub dimension: usize,
    pub cubes: Vec<OrthoCube>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Standard,
    Orthogonal,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::Standard => write!(f, "standard"),
            Model::Orthogonal => write!(f, "orthogonal"),
        }
    }
}

fn check_shape(
    dimension: usize,
    ids: impl Iterator<Item = CubeId>,
    arities: impl Iterator<Item = usize>,
) -> Result<(), SceneError> {
    if dimension == 0 {
        return Err(SceneError::ZeroDimension);
    }
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(SceneError::DuplicateId(id));
        }
    }
    for (id, a) in seen.iter().zip(arities) {
        if a != dimension {
            return Err(SceneError::WrongArity {
                id: *id,
                found: a,
                expected: dimension,
            });
        }
    }
    Ok(())
}

impl StandardScene {
    /// Builds and fully validates the scene (shape and disjointness).
    pub fn new(dimension: usize, cubes: Vec<StandardCube>) -> Result<Self, SceneError> {
        let scene = Self::from_parts(dimension, cubes)?;
        if let Some(v) = scene.violations().into_iter().next() {
            // surface the first violating pair as a structured error message
            return Err(SceneError::SamePair(v.a, v.b));
        }
        Ok(scene)
    }

    /// Builds with shape checks only; geometric validity is reported by
    /// `violations` (used when loading untrusted scene files).
    pub fn from_parts(dimension: usize, cubes: Vec<StandardCube>) -> Result<Self, SceneError> {
        check_shape(
            dimension,
            cubes.iter().map(|c| c.id),
            cubes.iter().map(|c| c.center.len()),
        )?;
        // re-check arity against the declared order, not the sorted ids
        for c in &cubes {
            if c.center.len() != dimension {
                return Err(SceneError::WrongArity {
                    id: c.id,
                    found: c.center.len(),
                    expected: dimension,
                });
            }
        }
        Ok(StandardScene { dimension, cubes })
    }

    pub fn cube(&self, id: CubeId) -> Result<&StandardCube, SceneError> {
        self.cubes
            .iter()
            .find(|c| c.id == id)
            .ok_or(SceneError::UnknownCube(id))
    }

    /// Pairs of cubes whose closed boxes are not strictly disjoint.
    pub fn violations(&self) -> Vec<SceneViolation> {
        let mut out = Vec::new();
        for (i, a) in self.cubes.iter().enumerate() {
            for b in &self.cubes[i + 1..] {
                let separated = a
                    .center
                    .iter()
                    .zip(&b.center)
                    .any(|(x, y)| (x - y).abs() > rat_int(1));
                if !separated {
                    out.push(SceneViolation {
                        a: a.id,
                        b: b.id,
                        reason: "closed cubes intersect or touch".to_string(),
                    });
                }
            }
        }
        out
    }

    pub fn translated(&self, offset: &[Rat]) -> StandardScene {
        assert_eq!(offset.len(), self.dimension);
        StandardScene {
            dimension: self.dimension,
            cubes: self
                .cubes
                .iter()
                .map(|c| StandardCube {
                    id: c.id,
                    center: c.center.iter().zip(offset).map(|(x, d)| x + d).collect(),
                })
                .collect(),
        }
    }
}

impl OrthoScene {
    pub fn new(dimension: usize, cubes: Vec<OrthoCube>) -> Result<Self, SceneError> {
        let scene = Self::from_parts(dimension, cubes)?;
        if let Some(v) = scene.violations().into_iter().next() {
            return Err(SceneError::SamePair(v.a, v.b));
        }
        Ok(scene)
    }

    pub fn from_parts(dimension: usize, cubes: Vec<OrthoCube>) -> Result<Self, SceneError> {
        check_shape(
            dimension,
            cubes.iter().map(|c| c.id),
            cubes.iter().map(|c| c.center.len()),
        )?;
        for c in &cubes {
            if c.center.len() != dimension {
                return Err(SceneError::WrongArity {
                    id: c.id,
                    found: c.center.len(),
                    expected: dimension,
                });
            }
        }
        Ok(OrthoScene { dimension, cubes })
    }

    pub fn cube(&self, id: CubeId) -> Result<&OrthoCube, SceneError> {
        self.cubes
            .iter()
            .find(|c| c.id == id)
            .ok_or(SceneError::UnknownCube(id))
    }

    /// Cubes at equal heights must be strictly separated in some coordinate.
    pub fn violations(&self) -> Vec<SceneViolation> {
        let mut out = Vec::new();
        for (i, a) in self.cubes.iter().enumerate() {
            for b in &self.cubes[i + 1..] {
                if a.height != b.height {
                    continue;
                }
                let separated = a
                    .center
                    .iter()
                    .zip(&b.center)
                    .any(|(x, y)| (x - y).abs() > rat_int(1));
                if !separated {
                    out.push(SceneViolation {
                        a: a.id,
                        b: b.id,
                        reason: "equal-height cubes intersect or touch".to_string(),
                    });
                }
            }
        }
        out
    }

    /// Translates centers by `offset` and heights by `height_offset`.
    pub fn translated(&self, offset: &[Rat], height_offset: &Rat) -> OrthoScene {
        assert_eq!(offset.len(), self.dimension);
        OrthoScene {
            dimension: self.dimension,
            cubes: self
                .cubes
                .iter()
                .map(|c| OrthoCube {
                    id: c.id,
                    center: c.center.iter().zip(offset).map(|(x, d)| x + d).collect(),
                    height: &c.height + height_offset,
                })
                .collect(),
        }
    }
}

/// A scene under either visibility model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scene {
    Standard(StandardScene),
    Ortho(OrthoScene),
}

impl Scene {
    pub fn model(&self) -> Model {
        match self {
            Scene::Standard(_) => Model::Standard,
            Scene::Ortho(_) => Model::Orthogonal,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Scene::Standard(s) => s.dimension,
            Scene::Ortho(s) => s.dimension,
        }
    }

    pub fn cube_ids(&self) -> Vec<CubeId> {
        let mut ids: Vec<CubeId> = match self {
            Scene::Standard(s) => s.cubes.iter().map(|c| c.id).collect(),
            Scene::Ortho(s) => s.cubes.iter().map(|c| c.id).collect(),
        };
        ids.sort();
        ids
    }

    pub fn cube_count(&self) -> usize {
        match self {
            Scene::Standard(s) => s.cubes.len(),
            Scene::Ortho(s) => s.cubes.len(),
        }
    }

    pub fn violations(&self) -> Vec<SceneViolation> {
        match self {
            Scene::Standard(s) => s.violations(),
            Scene::Ortho(s) => s.violations(),
        }
    }

    pub fn max_id(&self) -> Option<usize> {
        self.cube_ids().last().map(|c| c.0)
    }
}

/// Closed interval [center − 1/2, center + 1/2].
pub fn unit_interval(center: &Rat) -> (Rat, Rat) {
    let half = rat(1, 2);
    (center - &half, center + &half)
}
