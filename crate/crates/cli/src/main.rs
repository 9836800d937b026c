//! `hypervis`: build, verify, and inspect unit-hypercube visibility
//! representations of trees.
//!
//! Exit codes: 0 success/PASS, 1 domain failure (verification FAIL, an
//! inapplicable construction), 2 input or schema errors.

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hypervis_core::constructors::{
    bar_forests, ncube_from_ortho_forests, realize_ortho_tree, star_ortho_rep, unit_bar_tree_rep,
};
use hypervis_core::corpus::{generate, CorpusSpec};
use hypervis_core::decomposition::{
    construct_h2_representation_with_limit, h1perp_bounds, h1perp_exact_with_limit,
    h2_exact_with_limit, hn_bounds, hnperp_bounds, hnperp_upper_construct, star_forest_decompose,
    ForestDecomposition, HNumberError, DEFAULT_SEARCH_LIMIT,
};
use hypervis_core::geometry::{extract_graph, render_svg, verify_multirep, CubeId};
use hypervis_core::io;
use hypervis_core::tree::Tree;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hypervis", version, about = "unit-hypercube visibility representations of trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Standard,
    Orthogonal,
}

impl ModelArg {
    fn matches(self, model: hypervis_core::geometry::Model) -> bool {
        matches!(
            (self, model),
            (ModelArg::Standard, hypervis_core::geometry::Model::Standard)
                | (ModelArg::Orthogonal, hypervis_core::geometry::Model::Orthogonal)
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    /// Unit bars for a subdivided caterpillar with maximum degree 3.
    UnitBar,
    /// Orthogonal scene found through an intersection-representation base.
    OrthoFromCubicity,
    /// Standard n-cube scene assembled from a forest decomposition file.
    NcubeFromForests,
    /// Two-dimensional standard scene achieving the exact visibility number.
    H2,
    /// Orthogonal star representation K_{1,m} in dimension n.
    StarOrtho,
    /// Orthogonal scene within the degree upper bound for dimension n.
    HnperpUpper,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HNumberKind {
    H1perp,
    H2,
    Hn,
    Hnperp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecomposeKind {
    /// Vertex-disjoint stars with at most k edges per forest.
    Star,
    /// Forests of subdivided caterpillars witnessing the exact value.
    H1perp,
}

#[derive(Subcommand)]
enum Command {
    /// Print the visibility graph of a scene file as an edge list.
    Extract {
        scene: PathBuf,
        /// Require the scene to use this model.
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
    },
    /// Check a scene file against a tree file; exits 0 on PASS, 1 on FAIL.
    Verify {
        scene: PathBuf,
        tree: PathBuf,
        /// Require the scene to use this model.
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
    },
    /// Build a representation and write it as a scene file.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        /// Tree file; unused for star-ortho.
        tree: Option<PathBuf>,
        /// Ambient dimension n where applicable.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Star size m for star-ortho.
        #[arg(long)]
        m: Option<usize>,
        /// Forest decomposition JSON for ncube-from-forests.
        #[arg(long)]
        forests: Option<PathBuf>,
        /// Output scene path (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a tree's edges into forests and write them as JSON.
    Decompose {
        #[arg(value_enum)]
        kind: DecomposeKind,
        tree: PathBuf,
        /// Star size bound k for the star decomposition.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print bounds and, where computable, the exact visibility number.
    HNumber {
        #[arg(value_enum)]
        kind: HNumberKind,
        tree: PathBuf,
        /// Dimension for hn / hnperp.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Witness output path for exact values.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a scene file to SVG.
    Render {
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Require the scene to use this model.
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
    },
    /// Evaluate the full pipeline over a tree corpus.
    Corpus {
        #[arg(long, default_value_t = 7)]
        max_exhaustive: usize,
        #[arg(long, default_value_t = 0)]
        random_count: usize,
        #[arg(long, default_value_t = 10)]
        random_min: usize,
        #[arg(long, default_value_t = 14)]
        random_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn search_limit() -> usize {
    std::env::var("HYPERVIS_SEARCH_LIMIT")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SEARCH_LIMIT)
}

/// Input problems exit with 2, domain failures with 1.
enum CmdError {
    Input(anyhow::Error),
    Domain(anyhow::Error),
}

type CmdResult = Result<(), CmdError>;

fn input<E: Into<anyhow::Error>>(e: E) -> CmdError {
    CmdError::Input(e.into())
}

fn domain<E: Into<anyhow::Error>>(e: E) -> CmdError {
    CmdError::Domain(e.into())
}

fn load_tree(path: &Path) -> Result<Tree, CmdError> {
    let text = read(path).map_err(CmdError::Input)?;
    io::parse_tree(&text).map_err(input)
}

fn load_multirep(path: &Path) -> Result<hypervis_core::MultiRep, CmdError> {
    let text = read(path).map_err(CmdError::Input)?;
    io::parse_scene(&text).map_err(input)?.into_multirep().map_err(input)
}

fn check_model(expected: Option<ModelArg>, scene: &hypervis_core::Scene) -> CmdResult {
    match expected {
        Some(m) if !m.matches(scene.model()) => Err(input(anyhow::anyhow!(
            "scene uses the {} model",
            scene.model()
        ))),
        _ => Ok(()),
    }
}

fn cmd_extract(scene_path: &Path, model: Option<ModelArg>) -> CmdResult {
    let text = read(scene_path).map_err(CmdError::Input)?;
    let scene = match io::parse_scene(&text).map_err(input)? {
        io::SceneFile::Scene(scene, _) => scene,
        io::SceneFile::Intersection(_) => {
            return Err(input(anyhow::anyhow!(
                "intersection files carry no visibility model"
            )))
        }
    };
    check_model(model, &scene)?;
    let graph = extract_graph(&scene);
    println!("{} {}", graph.ids.len(), graph.edge_count());
    for (a, b) in &graph.edges {
        println!("{a} {b}");
    }
    Ok(())
}

fn cmd_verify(scene_path: &Path, tree_path: &Path, model: Option<ModelArg>) -> CmdResult {
    let rep = load_multirep(scene_path)?;
    check_model(model, &rep.scene)?;
    let tree = load_tree(tree_path)?;
    let report = verify_multirep(&rep, &tree).map_err(domain)?;
    println!("{}", report.summary());
    if report.passed {
        Ok(())
    } else {
        Err(CmdError::Domain(anyhow::anyhow!("verification failed")))
    }
}

fn describe_h_error(e: &HNumberError) -> String {
    e.to_string()
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    kind: ConstructKind,
    tree: Option<PathBuf>,
    n: usize,
    m: Option<usize>,
    forests: Option<PathBuf>,
    out: Option<PathBuf>,
) -> CmdResult {
    if n == 0 {
        return Err(input(anyhow::anyhow!("--n must be at least 1")));
    }
    let rep = match kind {
        ConstructKind::UnitBar => {
            let tree = load_tree(&tree.ok_or_else(|| input(anyhow::anyhow!("tree required")))?)?;
            unit_bar_tree_rep(&tree).map_err(domain)?
        }
        ConstructKind::OrthoFromCubicity => {
            let tree = load_tree(&tree.ok_or_else(|| input(anyhow::anyhow!("tree required")))?)?;
            realize_ortho_tree(&tree, n).map_err(domain)?
        }
        ConstructKind::NcubeFromForests => {
            let tree_path = tree.ok_or_else(|| input(anyhow::anyhow!("tree required")))?;
            let tree = load_tree(&tree_path)?;
            let forests_path =
                forests.ok_or_else(|| input(anyhow::anyhow!("--forests file required")))?;
            let d =
                io::parse_decomposition(&read(&forests_path).map_err(CmdError::Input)?).map_err(input)?;
            if d.forests.len() != n {
                return Err(input(anyhow::anyhow!(
                    "need exactly n = {n} forests, found {}",
                    d.forests.len()
                )));
            }
            if n != 2 {
                return Err(input(anyhow::anyhow!(
                    "component representations are built internally only for n = 2"
                )));
            }
            let inputs = bar_forests(&tree, &d.forests).map_err(domain)?;
            ncube_from_ortho_forests(&tree, inputs).map_err(domain)?
        }
        ConstructKind::H2 => {
            let tree = load_tree(&tree.ok_or_else(|| input(anyhow::anyhow!("tree required")))?)?;
            construct_h2_representation_with_limit(&tree, search_limit())
                .map_err(|e| CmdError::Domain(anyhow::anyhow!(describe_h_error(&e))))?
        }
        ConstructKind::StarOrtho => {
            let m = m.ok_or_else(|| input(anyhow::anyhow!("--m required for star-ortho")))?;
            star_ortho_rep(n, m).map_err(domain)?
        }
        ConstructKind::HnperpUpper => {
            let tree = load_tree(&tree.ok_or_else(|| input(anyhow::anyhow!("tree required")))?)?;
            hnperp_upper_construct(&tree, n)
                .map_err(|e| CmdError::Domain(anyhow::anyhow!(describe_h_error(&e))))?
        }
    };
    write_out(&out, &io::format_multirep(&rep)).map_err(CmdError::Input)
}

fn cmd_decompose(kind: DecomposeKind, tree_path: &Path, k: usize, out: Option<PathBuf>) -> CmdResult {
    if k == 0 {
        return Err(input(anyhow::anyhow!("--k must be at least 1")));
    }
    let tree = load_tree(tree_path)?;
    let d: ForestDecomposition = match kind {
        DecomposeKind::Star => {
            let bound = (tree.max_degree() + 1).div_ceil(k);
            star_forest_decompose(&tree, k, bound.max(1)).map_err(domain)?
        }
        DecomposeKind::H1perp => h1perp_exact_with_limit(&tree, search_limit())
            .map(|(_, w)| w)
            .map_err(|e| CmdError::Domain(anyhow::anyhow!(describe_h_error(&e))))?,
    };
    write_out(&out, &io::format_decomposition(&d)).map_err(CmdError::Input)
}

fn cmd_h_number(kind: HNumberKind, tree_path: &Path, n: usize, out: Option<PathBuf>) -> CmdResult {
    if n == 0 {
        return Err(input(anyhow::anyhow!("--n must be at least 1")));
    }
    let tree = load_tree(tree_path)?;
    let limit = search_limit();
    match kind {
        HNumberKind::H1perp => {
            let (low, high) = h1perp_bounds(&tree);
            match h1perp_exact_with_limit(&tree, limit) {
                Ok((value, witness)) => {
                    if let Some(path) = &out {
                        std::fs::write(path, io::format_decomposition(&witness))
                            .map_err(|e| CmdError::Input(e.into()))?;
                        println!("{low} {high} {value} {}", path.display());
                    } else {
                        println!("{low} {high} {value}");
                    }
                }
                Err(
                    HNumberError::SearchLimitExceeded { .. } | HNumberError::BudgetExhausted { .. },
                ) => {
                    println!("{low} {high}");
                }
                Err(e) => return Err(CmdError::Domain(anyhow::anyhow!(describe_h_error(&e)))),
            }
        }
        HNumberKind::H2 => {
            let delta = tree.max_degree();
            let (low, high) = if delta == 0 {
                (1, 1)
            } else {
                (delta.div_ceil(6), (delta + 1).div_ceil(6))
            };
            match h2_exact_with_limit(&tree, limit) {
                Ok(value) => println!("{low} {high} {value}"),
                Err(
                    HNumberError::SearchLimitExceeded { .. } | HNumberError::BudgetExhausted { .. },
                ) => println!("{low} {high}"),
                Err(e) => return Err(CmdError::Domain(anyhow::anyhow!(describe_h_error(&e)))),
            }
        }
        HNumberKind::Hn => {
            let (low, high) = hn_bounds(&tree, n);
            println!("{low} {high}");
        }
        HNumberKind::Hnperp => {
            let (low, high) = hnperp_bounds(&tree, n);
            println!("{low} {high}");
        }
    }
    Ok(())
}

fn cmd_render(scene_path: &Path, out: &Path, model: Option<ModelArg>) -> CmdResult {
    let text = read(scene_path).map_err(CmdError::Input)?;
    let (scene, vertices) = match io::parse_scene(&text).map_err(input)? {
        io::SceneFile::Scene(scene, vertices) => (scene, vertices),
        io::SceneFile::Intersection(_) => {
            return Err(input(anyhow::anyhow!("no renderer for intersection files")))
        }
    };
    check_model(model, &scene)?;
    let labels: BTreeMap<CubeId, String> = vertices
        .iter()
        .map(|(&c, &v)| (c, format!("v{v}")))
        .collect();
    let svg = render_svg(&scene, &labels).map_err(domain)?;
    std::fs::write(out, svg).map_err(|e| CmdError::Input(e.into()))?;
    Ok(())
}

fn cmd_corpus(
    max_exhaustive: usize,
    random_count: usize,
    random_min: usize,
    random_max: usize,
    seed: u64,
) -> CmdResult {
    let spec = CorpusSpec {
        max_exhaustive_vertices: max_exhaustive,
        random_count,
        random_size_range: (random_min, random_max),
        seed,
    };
    let limit = search_limit();
    let mut all_pass = true;
    for entry in generate(&spec) {
        let tree = &entry.tree;
        let (low, high) = h1perp_bounds(tree);
        let exact = h1perp_exact_with_limit(tree, limit);
        let line = match &exact {
            Ok((value, _)) => {
                let h2 = value.div_ceil(2);
                let construct = construct_h2_representation_with_limit(tree, limit)
                    .ok()
                    .and_then(|rep| verify_multirep(&rep, tree).ok())
                    .map(|r| r.passed && r.max_cubes_per_vertex == h2)
                    .unwrap_or(false);
                if !construct {
                    all_pass = false;
                }
                format!(
                    "{} n={} delta={} h1perp=[{low},{high}] exact={value} h2={h2} construct={}",
                    entry.label,
                    tree.vertex_count(),
                    tree.max_degree(),
                    if construct { "PASS" } else { "FAIL" }
                )
            }
            Err(_) => {
                all_pass = false;
                format!(
                    "{} n={} delta={} h1perp=[{low},{high}] exact=? construct=SKIP",
                    entry.label,
                    tree.vertex_count(),
                    tree.max_degree()
                )
            }
        };
        println!("{line}");
    }
    if all_pass {
        println!("ALL PASS");
        Ok(())
    } else {
        Err(CmdError::Domain(anyhow::anyhow!("corpus failures")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Extract { scene, model } => cmd_extract(&scene, model),
        Command::Verify { scene, tree, model } => cmd_verify(&scene, &tree, model),
        Command::Construct {
            kind,
            tree,
            n,
            m,
            forests,
            out,
        } => cmd_construct(kind, tree, n, m, forests, out),
        Command::Decompose { kind, tree, k, out } => cmd_decompose(kind, &tree, k, out),
        Command::HNumber { kind, tree, n, out } => cmd_h_number(kind, &tree, n, out),
        Command::Render { scene, out, model } => cmd_render(&scene, &out, model),
        Command::Corpus {
            max_exhaustive,
            random_count,
            random_min,
            random_max,
            seed,
        } => cmd_corpus(max_exhaustive, random_count, random_min, random_max, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(CmdError::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
