//! Deterministic tree corpora: every non-isomorphic tree up to a size cap,
//! plus seeded random trees from Prüfer sequences.

use crate::canonical::{nonisomorphic_trees, random_trees};
use crate::tree::Tree;

/// Parameters of a corpus; equal specs generate identical corpora.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub max_exhaustive_vertices: usize,
    pub random_count: usize,
    pub random_size_range: (usize, usize),
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_exhaustive_vertices: 9,
            random_count: 0,
            random_size_range: (10, 14),
            seed: 0,
        }
    }
}

/// A corpus entry: the tree plus a stable, human-readable label.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub label: String,
    pub tree: Tree,
}

/// Exhaustive trees in (size, enumeration) order, then the random block.
pub fn generate(spec: &CorpusSpec) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=spec.max_exhaustive_vertices {
        for (i, tree) in nonisomorphic_trees(n).into_iter().enumerate() {
            out.push(CorpusEntry {
                label: format!("exhaustive/{n}/{i}"),
                tree,
            });
        }
    }
    if spec.random_count > 0 {
        for (i, tree) in random_trees(spec.seed, spec.random_count, spec.random_size_range)
            .into_iter()
            .enumerate()
        {
            out.push(CorpusEntry {
                label: format!("random/{}/{i}", spec.seed),
                tree,
            });
        }
    }
    out
}
