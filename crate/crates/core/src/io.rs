//! File formats: the tree text format, scene and intersection JSON, and
//! decomposition JSON.
//!
//! Tree files: a `tree <vertex_count>` header line then one `<u> <v>` line
//! per edge in ascending lexicographic order; `#` starts a comment.
//!
//! Scene files: `{"model": "standard"|"orthogonal"|"intersection",
//! "dimension": n, "cubes": [{"id", "vertex", "center", "height"?}]}` with
//! rationals as canonical `"p/q"` strings.

use crate::geometry::{
    CubeId, MultiRep, OrthoCube, OrthoScene, Scene, StandardCube, StandardScene,
};
use crate::intersection::{IntersectionCube, IntersectionRep};
use crate::rational::{format_rat, parse_rat, Rat};
use crate::tree::{Tree, TreeError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    TreeFormat { line: usize, message: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
}

/// Parses the tree text format.
pub fn parse_tree(text: &str) -> Result<Tree, IoError> {
    let mut vertex_count: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if vertex_count.is_none() {
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some("tree"), Some(n), None) => {
                    vertex_count = Some(n.parse().map_err(|_| IoError::TreeFormat {
                        line: i + 1,
                        message: format!("bad vertex count `{n}`"),
                    })?);
                }
                _ => {
                    return Err(IoError::TreeFormat {
                        line: i + 1,
                        message: "expected header `tree <vertex_count>`".to_string(),
                    })
                }
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), None) => {
                let u: usize = u.parse().map_err(|_| IoError::TreeFormat {
                    line: i + 1,
                    message: format!("bad vertex id `{u}`"),
                })?;
                let v: usize = v.parse().map_err(|_| IoError::TreeFormat {
                    line: i + 1,
                    message: format!("bad vertex id `{v}`"),
                })?;
                edges.push((u, v));
            }
            _ => {
                return Err(IoError::TreeFormat {
                    line: i + 1,
                    message: "expected `<u> <v>`".to_string(),
                })
            }
        }
    }
    let Some(n) = vertex_count else {
        return Err(IoError::TreeFormat {
            line: 1,
            message: "missing `tree <vertex_count>` header".to_string(),
        });
    };
    Ok(Tree::from_edges(n, &edges)?)
}

/// Serializes a tree; edges come out in ascending lexicographic order.
pub fn format_tree(tree: &Tree) -> String {
    let mut out = format!("tree {}\n", tree.vertex_count());
    for &(u, v) in tree.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct CubeDto {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertex: Option<usize>,
    center: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    height: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SceneDto {
    model: String,
    dimension: usize,
    cubes: Vec<CubeDto>,
}

/// A parsed scene file: the scene plus any vertex assignment it carried.
#[derive(Debug, Clone)]
pub enum SceneFile {
    Scene(Scene, BTreeMap<CubeId, usize>),
    Intersection(IntersectionRep),
}

impl SceneFile {
    /// Builds the multirep when every cube carries a vertex.
    pub fn into_multirep(self) -> Result<MultiRep, IoError> {
        match self {
            SceneFile::Scene(scene, vertices) => {
                if vertices.len() != scene.cube_count() {
                    return Err(IoError::Schema {
                        field: "cubes.vertex".to_string(),
                        message: "every cube needs a vertex for verification".to_string(),
                    });
                }
                let mut assignment: BTreeMap<usize, BTreeSet<CubeId>> = BTreeMap::new();
                for (cube, vertex) in vertices {
                    assignment.entry(vertex).or_default().insert(cube);
                }
                MultiRep::new(scene, assignment).map_err(|e| IoError::Schema {
                    field: "cubes.vertex".to_string(),
                    message: e.to_string(),
                })
            }
            SceneFile::Intersection(_) => Err(IoError::Schema {
                field: "model".to_string(),
                message: "intersection files have no visibility scene".to_string(),
            }),
        }
    }
}

fn parse_center(dto: &CubeDto) -> Result<Vec<Rat>, IoError> {
    dto.center
        .iter()
        .map(|s| {
            parse_rat(s).map_err(|e| IoError::Schema {
                field: format!("cubes[id={}].center", dto.id),
                message: e.to_string(),
            })
        })
        .collect()
}

/// Parses a scene JSON document. Geometric validity is not enforced here;
/// verification reports violations instead.
pub fn parse_scene(text: &str) -> Result<SceneFile, IoError> {
    let dto: SceneDto = serde_json::from_str(text)?;
    match dto.model.as_str() {
        "standard" => {
            let mut cubes = Vec::new();
            let mut vertices = BTreeMap::new();
            for c in &dto.cubes {
                if c.height.is_some() {
                    return Err(IoError::Schema {
                        field: format!("cubes[id={}].height", c.id),
                        message: "standard cubes have no height".to_string(),
                    });
                }
                cubes.push(StandardCube {
                    id: CubeId(c.id),
                    center: parse_center(c)?,
                });
                if let Some(v) = c.vertex {
                    vertices.insert(CubeId(c.id), v);
                }
            }
            let scene =
                StandardScene::from_parts(dto.dimension, cubes).map_err(|e| IoError::Schema {
                    field: "cubes".to_string(),
                    message: e.to_string(),
                })?;
            Ok(SceneFile::Scene(Scene::Standard(scene), vertices))
        }
        "orthogonal" => {
            let mut cubes = Vec::new();
            let mut vertices = BTreeMap::new();
            for c in &dto.cubes {
                let Some(h) = &c.height else {
                    return Err(IoError::Schema {
                        field: format!("cubes[id={}].height", c.id),
                        message: "orthogonal cubes need a height".to_string(),
                    });
                };
                cubes.push(OrthoCube {
                    id: CubeId(c.id),
                    center: parse_center(c)?,
                    height: parse_rat(h).map_err(|e| IoError::Schema {
                        field: format!("cubes[id={}].height", c.id),
                        message: e.to_string(),
                    })?,
                });
                if let Some(v) = c.vertex {
                    vertices.insert(CubeId(c.id), v);
                }
            }
            let scene =
                OrthoScene::from_parts(dto.dimension, cubes).map_err(|e| IoError::Schema {
                    field: "cubes".to_string(),
                    message: e.to_string(),
                })?;
            Ok(SceneFile::Scene(Scene::Ortho(scene), vertices))
        }
        "intersection" => {
            let mut cubes = Vec::new();
            for c in &dto.cubes {
                let Some(v) = c.vertex else {
                    return Err(IoError::Schema {
                        field: format!("cubes[id={}].vertex", c.id),
                        message: "intersection cubes need a vertex".to_string(),
                    });
                };
                cubes.push(IntersectionCube {
                    id: CubeId(c.id),
                    vertex: v,
                    center: parse_center(c)?,
                });
            }
            Ok(SceneFile::Intersection(IntersectionRep {
                dimension: dto.dimension,
                cubes,
            }))
        }
        other => Err(IoError::Schema {
            field: "model".to_string(),
            message: format!("unknown model `{other}`"),
        }),
    }
}

/// Serializes a scene with an optional assignment, cubes in id order.
pub fn format_scene(scene: &Scene, vertices: &BTreeMap<CubeId, usize>) -> String {
    let dto = match scene {
        Scene::Standard(s) => {
            let mut cubes: Vec<&StandardCube> = s.cubes.iter().collect();
            cubes.sort_by_key(|c| c.id);
            SceneDto {
                model: "standard".to_string(),
                dimension: s.dimension,
                cubes: cubes
                    .into_iter()
                    .map(|c| CubeDto {
                        id: c.id.0,
                        vertex: vertices.get(&c.id).copied(),
                        center: c.center.iter().map(format_rat).collect(),
                        height: None,
                    })
                    .collect(),
            }
        }
        Scene::Ortho(s) => {
            let mut cubes: Vec<&OrthoCube> = s.cubes.iter().collect();
            cubes.sort_by_key(|c| c.id);
            SceneDto {
                model: "orthogonal".to_string(),
                dimension: s.dimension,
                cubes: cubes
                    .into_iter()
                    .map(|c| CubeDto {
                        id: c.id.0,
                        vertex: vertices.get(&c.id).copied(),
                        center: c.center.iter().map(format_rat).collect(),
                        height: Some(format_rat(&c.height)),
                    })
                    .collect(),
            }
        }
    };
    serde_json::to_string_pretty(&dto).expect("scene serializes") + "\n"
}

/// Serializes a multirep: a scene file with every cube's vertex set.
pub fn format_multirep(rep: &MultiRep) -> String {
    let vertices: BTreeMap<CubeId, usize> = rep
        .assignment
        .iter()
        .flat_map(|(&v, cubes)| cubes.iter().map(move |&c| (c, v)))
        .collect();
    format_scene(&rep.scene, &vertices)
}

/// Serializes an intersection representation.
pub fn format_intersection(rep: &IntersectionRep) -> String {
    let mut cubes: Vec<&IntersectionCube> = rep.cubes.iter().collect();
    cubes.sort_by_key(|c| c.id);
    let dto = SceneDto {
        model: "intersection".to_string(),
        dimension: rep.dimension,
        cubes: cubes
            .into_iter()
            .map(|c| CubeDto {
                id: c.id.0,
                vertex: Some(c.vertex),
                center: c.center.iter().map(format_rat).collect(),
                height: None,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("rep serializes") + "\n"
}

#[derive(Debug, Serialize, Deserialize)]
struct DecompositionDto {
    forests: Vec<Vec<(usize, usize)>>,
}

pub fn format_decomposition(d: &crate::decomposition::ForestDecomposition) -> String {
    serde_json::to_string_pretty(&DecompositionDto {
        forests: d.forests.clone(),
    })
    .expect("decomposition serializes")
        + "\n"
}

pub fn parse_decomposition(text: &str) -> Result<crate::decomposition::ForestDecomposition, IoError> {
    let dto: DecompositionDto = serde_json::from_str(text)?;
    Ok(crate::decomposition::ForestDecomposition {
        forests: dto.forests,
    })
}
