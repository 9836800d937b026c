//! Canonical forms for small trees, exhaustive enumeration of
//! non-isomorphic trees, and seeded random trees from Prüfer sequences.

use crate::tree::Tree;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn encode_rooted(tree: &Tree, root: usize, parent: usize) -> String {
    let mut parts: Vec<String> = tree
        .neighbors(root)
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| encode_rooted(tree, w, root))
        .collect();
    parts.sort();
    format!("({})", parts.concat())
}

/// Centroid vertices (one or two) of the tree.
pub fn centroids(tree: &Tree) -> Vec<usize> {
    let n = tree.vertex_count();
    if n == 1 {
        return vec![0];
    }
    let order = tree.bfs_order(0).expect("vertex 0 exists");
    let parent = tree.bfs_parents(0);
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if v != 0 {
            size[parent[v]] += size[v];
        }
    }
    let mut best = n;
    let mut out = Vec::new();
    for v in 0..n {
        let mut heaviest = n - size[v];
        for &w in tree.neighbors(v) {
            if v == 0 || w != parent[v] {
                heaviest = heaviest.max(size[w]);
            }
        }
        match heaviest.cmp(&best) {
            std::cmp::Ordering::Less => {
                best = heaviest;
                out = vec![v];
            }
            std::cmp::Ordering::Equal => out.push(v),
            std::cmp::Ordering::Greater => {}
        }
    }
    out
}

/// Canonical form of a free tree: the minimum rooted encoding over its
/// centroid(s). Equal strings exactly characterize isomorphic trees.
pub fn canonical_form(tree: &Tree) -> String {
    centroids(tree)
        .into_iter()
        .map(|c| encode_rooted(tree, c, c))
        .min()
        .expect("tree has a centroid")
}

pub fn is_isomorphic(a: &Tree, b: &Tree) -> bool {
    a.vertex_count() == b.vertex_count() && canonical_form(a) == canonical_form(b)
}

/// Level sequences of all rooted trees on `n` vertices
/// (Beyer–Hedetniemi successor rule), decoded into trees.
fn rooted_trees(n: usize) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![Tree::path(1)];
    }
    let mut levels: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    loop {
        out.push(decode_level_sequence(&levels));
        // successor: find rightmost entry > 2, copy the preceding block
        let Some(p) = (0..n).rev().find(|&i| levels[i] > 2) else {
            break;
        };
        let q = (0..p).rev().find(|&i| levels[i] == levels[p] - 1).unwrap();
        for i in p..n {
            levels[i] = levels[i - (p - q)];
        }
    }
    out
}

fn decode_level_sequence(levels: &[usize]) -> Tree {
    let n = levels.len();
    let mut edges = Vec::with_capacity(n - 1);
    let mut stack: Vec<usize> = Vec::new(); // stack[d] = latest vertex at level d+1
    for (v, &lvl) in levels.iter().enumerate() {
        stack.truncate(lvl - 1);
        if let Some(&p) = stack.last() {
            edges.push((p, v));
        }
        stack.push(v);
    }
    Tree::from_edges(n, &edges).expect("level sequence decodes to a tree")
}

/// All non-isomorphic trees on exactly `n` vertices, in a deterministic
/// order (first occurrence while scanning rooted level sequences).
pub fn nonisomorphic_trees(n: usize) -> Vec<Tree> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in rooted_trees(n) {
        if seen.insert(canonical_form(&t)) {
            out.push(t);
        }
    }
    out
}

/// Decodes a Prüfer sequence over `0..n` into a tree on `n` vertices.
pub fn tree_from_prufer(n: usize, seq: &[usize]) -> Tree {
    assert!(n >= 1);
    if n == 1 {
        return Tree::path(1);
    }
    assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaf_heap: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    for &s in seq {
        let leaf = *leaf_heap.iter().next().unwrap();
        leaf_heap.remove(&leaf);
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaf_heap.insert(s);
        }
    }
    let mut rest = leaf_heap.into_iter();
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((a, b));
    Tree::from_edges(n, &edges).expect("Prüfer decodes to a tree")
}

/// Deterministic stream of random trees with sizes drawn uniformly from
/// `size_range`, seeded Prüfer sequences underneath.
pub fn random_trees(seed: u64, count: usize, size_range: (usize, usize)) -> Vec<Tree> {
    let (lo, hi) = size_range;
    assert!(1 <= lo && lo <= hi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
            tree_from_prufer(n, &seq)
        })
        .collect()
}
