//! Deterministic SVG diagrams of scenes: one rectangle per cube, dashed
//! segments for sightlines, labels from the assignment when provided.
//!
//! Supported: standard scenes with n = 2, orthogonal scenes with n = 1
//! (bars drawn at their heights) and n = 2 (footprints with height
//! annotations). Fixed scale of 100 SVG units per unit length, cubes drawn
//! in ascending id order.

use super::scene::{CubeId, Scene};
use super::visibility::{extract_graph, visible};
use crate::rational::{rat, rat_to_f64, Rat};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("no renderer for {model} scenes of dimension {dimension}")]
    Unsupported { model: String, dimension: usize },
}

const SCALE: f64 = 100.0;
const MARGIN: f64 = 60.0;
const BAR_THICKNESS: f64 = 12.0;

struct Canvas {
    body: String,
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Canvas {
    fn new() -> Self {
        Canvas {
            body: String::new(),
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }

    fn cover(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64) {
        self.cover(x, y);
        self.cover(x + w, y + h);
        self.body.push_str(&format!(
            "  <rect x=\"{x:.3}\" y=\"{y:.3}\" width=\"{w:.3}\" height=\"{h:.3}\" \
             fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n"
        ));
    }

    fn dashed(&mut self, x1: f64, y1: f64, x2: f64, y2: f64) {
        self.cover(x1, y1);
        self.cover(x2, y2);
        self.body.push_str(&format!(
            "  <line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" \
             stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n"
        ));
    }

    fn label(&mut self, x: f64, y: f64, text: &str) {
        self.cover(x, y);
        self.body.push_str(&format!(
            "  <text x=\"{x:.3}\" y=\"{y:.3}\" font-family=\"monospace\" font-size=\"16\" \
             text-anchor=\"middle\">{text}</text>\n"
        ));
    }

    fn finish(self) -> String {
        let (min_x, min_y, w, h) = if self.body.is_empty() {
            (0.0, 0.0, 100.0, 100.0)
        } else {
            (
                self.min_x - MARGIN,
                self.min_y - MARGIN,
                self.max_x - self.min_x + 2.0 * MARGIN,
                self.max_y - self.min_y + 2.0 * MARGIN,
            )
        };
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{min_x:.3} {min_y:.3} {w:.3} {h:.3}\">\n{}</svg>\n",
            self.body
        )
    }
}

// SVG y grows downwards; geometry y grows upwards
fn sx(v: &Rat) -> f64 {
    rat_to_f64(v) * SCALE
}
fn sy(v: &Rat) -> f64 {
    -rat_to_f64(v) * SCALE
}

fn overlap_mid(a: &Rat, b: &Rat) -> Rat {
    // midpoint of the open overlap of two unit intervals centered a, b
    let half = rat(1, 2);
    let lo = a.clone().max(b.clone()) - &half;
    let hi = a.clone().min(b.clone()) + &half;
    (lo + hi) / crate::rational::rat_int(2)
}

/// Renders a scene to SVG text; labels come from `labels` (vertex names)
/// keyed by cube id when provided.
pub fn render_svg(scene: &Scene, labels: &BTreeMap<CubeId, String>) -> Result<String, RenderError> {
    match (scene, scene.dimension()) {
        (Scene::Standard(s), 2) => {
            let mut canvas = Canvas::new();
            let mut cubes = s.cubes.clone();
            cubes.sort_by_key(|c| c.id);
            for c in &cubes {
                let x = sx(&c.center[0]) - SCALE / 2.0;
                let y = sy(&c.center[1]) - SCALE / 2.0;
                canvas.rect(x, y, SCALE, SCALE);
                let name = labels.get(&c.id).cloned().unwrap_or_else(|| c.id.to_string());
                canvas.label(sx(&c.center[0]), sy(&c.center[1]) + 5.0, &name);
            }
            let graph = extract_graph(scene);
            for &(a, b) in &graph.edges {
                let line = visible(scene, a, b).expect("edge cubes exist").expect("edge");
                let ca = &s.cube(a).expect("exists").center;
                let cb = &s.cube(b).expect("exists").center;
                let half = rat(1, 2);
                if line.axis == 0 {
                    let mid = overlap_mid(&ca[1], &cb[1]);
                    let (x1, x2) = if ca[0] < cb[0] {
                        (&ca[0] + &half, &cb[0] - &half)
                    } else {
                        (&cb[0] + &half, &ca[0] - &half)
                    };
                    canvas.dashed(sx(&x1), sy(&mid), sx(&x2), sy(&mid));
                } else {
                    let mid = overlap_mid(&ca[0], &cb[0]);
                    let (y1, y2) = if ca[1] < cb[1] {
                        (&ca[1] + &half, &cb[1] - &half)
                    } else {
                        (&cb[1] + &half, &ca[1] - &half)
                    };
                    canvas.dashed(sx(&mid), sy(&y1), sx(&mid), sy(&y2));
                }
            }
            Ok(canvas.finish())
        }
        (Scene::Ortho(s), 1) => {
            let mut canvas = Canvas::new();
            let mut cubes = s.cubes.clone();
            cubes.sort_by_key(|c| c.id);
            for c in &cubes {
                let x = sx(&c.center[0]) - SCALE / 2.0;
                let y = sy(&c.height) - BAR_THICKNESS / 2.0;
                canvas.rect(x, y, SCALE, BAR_THICKNESS);
                let name = labels.get(&c.id).cloned().unwrap_or_else(|| c.id.to_string());
                canvas.label(sx(&c.center[0]), y - 6.0, &name);
            }
            let graph = extract_graph(scene);
            for &(a, b) in &graph.edges {
                let ca = s.cube(a).expect("exists");
                let cb = s.cube(b).expect("exists");
                let mid = overlap_mid(&ca.center[0], &cb.center[0]);
                let (lo, hi) = if ca.height < cb.height {
                    (&ca.height, &cb.height)
                } else {
                    (&cb.height, &ca.height)
                };
                canvas.dashed(
                    sx(&mid),
                    sy(lo) - BAR_THICKNESS / 2.0,
                    sx(&mid),
                    sy(hi) + BAR_THICKNESS / 2.0,
                );
            }
            Ok(canvas.finish())
        }
        (Scene::Ortho(s), 2) => {
            // footprint view: squares with height annotations, sightlines
            // drawn center to center
            let mut canvas = Canvas::new();
            let mut cubes = s.cubes.clone();
            cubes.sort_by_key(|c| c.id);
            for c in &cubes {
                let x = sx(&c.center[0]) - SCALE / 2.0;
                let y = sy(&c.center[1]) - SCALE / 2.0;
                canvas.rect(x, y, SCALE, SCALE);
                let name = labels.get(&c.id).cloned().unwrap_or_else(|| c.id.to_string());
                canvas.label(sx(&c.center[0]), sy(&c.center[1]), &name);
                canvas.label(
                    sx(&c.center[0]),
                    sy(&c.center[1]) + 20.0,
                    &format!("h={}", crate::rational::format_rat(&c.height)),
                );
            }
            let graph = extract_graph(scene);
            for &(a, b) in &graph.edges {
                let ca = s.cube(a).expect("exists");
                let cb = s.cube(b).expect("exists");
                canvas.dashed(
                    sx(&ca.center[0]),
                    sy(&ca.center[1]),
                    sx(&cb.center[0]),
                    sy(&cb.center[1]),
                );
            }
            Ok(canvas.finish())
        }
        _ => Err(RenderError::Unsupported {
            model: scene.model().to_string(),
            dimension: scene.dimension(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scene::{StandardCube, StandardScene};
    use crate::rational::rat_int;

    #[test]
    fn empty_scene_renders_valid_svg() {
        let scene = Scene::Standard(StandardScene::new(2, vec![]).unwrap());
        let svg = render_svg(&scene, &BTreeMap::new()).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(!svg.contains("<rect"));
    }

    #[test]
    fn two_visible_squares_render_two_rects_one_dash() {
        let scene = Scene::Standard(
            StandardScene::new(
                2,
                vec![
                    StandardCube { id: CubeId(0), center: vec![rat_int(0), rat_int(0)] },
                    StandardCube { id: CubeId(1), center: vec![rat_int(3), rat_int(0)] },
                ],
            )
            .unwrap(),
        );
        let svg = render_svg(&scene, &BTreeMap::new()).unwrap();
        assert_eq!(svg.matches("<rect").count(), 2);
        assert_eq!(svg.matches("<line").count(), 1);
    }

    #[test]
    fn unsupported_dimension_errors() {
        let scene = Scene::Standard(
            StandardScene::new(
                3,
                vec![StandardCube { id: CubeId(0), center: vec![rat_int(0); 3] }],
            )
            .unwrap(),
        );
        assert!(render_svg(&scene, &BTreeMap::new()).is_err());
    }

    #[test]
    fn rendering_is_deterministic() {
        let scene = Scene::Standard(
            StandardScene::new(
                2,
                vec![
                    StandardCube { id: CubeId(0), center: vec![rat_int(0), rat_int(0)] },
                    StandardCube { id: CubeId(1), center: vec![rat_int(3), rat_int(0)] },
                ],
            )
            .unwrap(),
        );
        assert_eq!(
            render_svg(&scene, &BTreeMap::new()).unwrap(),
            render_svg(&scene, &BTreeMap::new()).unwrap()
        );
    }
}
