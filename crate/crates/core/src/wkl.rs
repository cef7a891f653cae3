//! Pruned binary trees, separating trees, and the widening construction.
//!
//! A pruned tree of height `n` keeps explicit survivor sets per level. A
//! tree is separating when extension failure is uniform: if some node's
//! `i`-child fails to reach the top level, then every node of that level
//! has an `i`-child failing to reach the top.
//!
//! The widening takes any pruned tree `T` of height `n` to a separating
//! tree `H` of height `2^(n+1) - 2`. Block `m` of `H` spends `2^m` levels
//! enumerating the length-`m` strings in lexicographic order; the level
//! labelled `v*0` carries the direction an `H`-path takes at the `T`-node
//! `v`, and its twin labelled `v*1` is unconstrained padding. When a
//! `T`-node `v*j` stops reaching the top while `v` still does, direction
//! `j` dies uniformly at the level for `v`, which is exactly a separating
//! prune. Surviving `H`-paths decode block by block to surviving
//! `T`-paths.

use crate::online::Symbol;
use crate::reductions::LimitingTrace;
use std::collections::BTreeSet;
use thiserror::Error;

/// A binary string as (length, code); the code reads the string as a
/// big-endian number, so numeric order within a length is lex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Node {
    pub len: usize,
    pub code: u64,
}

impl Node {
    pub const ROOT: Node = Node { len: 0, code: 0 };

    pub fn from_bits(bits: &[bool]) -> Node {
        let mut code = 0u64;
        for &b in bits {
            code = (code << 1) | b as u64;
        }
        Node { len: bits.len(), code }
    }

    pub fn from_str(s: &str) -> Node {
        Node::from_bits(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len)
            .rev()
            .map(|i| self.code & (1 << i) != 0)
            .collect()
    }

    pub fn child(&self, dir: bool) -> Node {
        Node { len: self.len + 1, code: (self.code << 1) | dir as u64 }
    }

    pub fn parent(&self) -> Option<(Node, bool)> {
        if self.len == 0 {
            return None;
        }
        Some((Node { len: self.len - 1, code: self.code >> 1 }, self.code & 1 == 1))
    }

    pub fn to_string_bits(&self) -> String {
        self.bits().iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Explicit per-level survivor sets, downward closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrunedTree {
    /// `levels[l]` holds the codes of surviving length-`l` strings;
    /// `levels[0]` is the root.
    pub levels: Vec<BTreeSet<u64>>,
}

impl PrunedTree {
    /// The full binary tree of the given height.
    pub fn full(height: usize) -> Self {
        let levels = (0..=height)
            .map(|l| (0..(1u64 << l)).collect::<BTreeSet<u64>>())
            .collect();
        PrunedTree { levels }
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn contains(&self, node: Node) -> bool {
        self.levels
            .get(node.len)
            .is_some_and(|l| l.contains(&node.code))
    }

    /// Removes a node and its whole subtree.
    pub fn prune(&mut self, node: Node) {
        if node.len > self.height() || !self.contains(node) {
            return;
        }
        for l in node.len..=self.height() {
            let shift = l - node.len;
            let lo = node.code << shift;
            let hi = ((node.code + 1) << shift) - 1;
            self.levels[l].retain(|&c| c < lo || c > hi);
        }
    }

    /// Downward closure: every survivor's parent survives.
    pub fn is_downward_closed(&self) -> bool {
        (1..=self.height()).all(|l| {
            self.levels[l]
                .iter()
                .all(|&c| self.levels[l - 1].contains(&(c >> 1)))
        })
    }

    /// Per-level sets of codes that still have a descendant at the top.
    pub fn reaching_sets(&self) -> Vec<BTreeSet<u64>> {
        let h = self.height();
        let mut reach: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); h + 1];
        reach[h] = self.levels[h].clone();
        for l in (0..h).rev() {
            let (lower, upper) = reach.split_at_mut(l + 1);
            lower[l] = self.levels[l]
                .iter()
                .copied()
                .filter(|&c| {
                    upper[0].contains(&(c << 1)) || upper[0].contains(&((c << 1) | 1))
                })
                .collect();
        }
        reach
    }

    pub fn reaches_top(&self, node: Node) -> bool {
        self.reaching_sets()
            .get(node.len)
            .is_some_and(|s| s.contains(&node.code))
    }

    /// Leftmost length-`n` string with a descendant surviving at the top,
    /// if any.
    pub fn leftmost_reaching(&self, n: usize) -> Option<Node> {
        let reach = self.reaching_sets();
        reach
            .get(n)
            .and_then(|s| s.iter().next().copied())
            .map(|code| Node { len: n, code })
    }
}

/// Verdict of the separating check; a failure carries the witness level,
/// direction, the node whose child dies, and the node whose child reaches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparatingVerdict {
    Separating,
    Witness { level: usize, dir: bool, failing: Node, extending: Node },
}

impl SeparatingVerdict {
    pub fn is_separating(&self) -> bool {
        matches!(self, SeparatingVerdict::Separating)
    }
}

/// Checks the separating condition at every level: whether the `i`-child
/// reaches the top must not depend on the node.
pub fn check_separating(t: &PrunedTree) -> SeparatingVerdict {
    let reach = t.reaching_sets();
    let h = t.height();
    for level in 0..h {
        for dir in [false, true] {
            let mut failing = None;
            let mut extending = None;
            for &code in &t.levels[level] {
                let child = (code << 1) | dir as u64;
                if reach[level + 1].contains(&child) {
                    extending.get_or_insert(Node { len: level, code });
                } else {
                    failing.get_or_insert(Node { len: level, code });
                }
                if let (Some(f), Some(e)) = (failing, extending) {
                    return SeparatingVerdict::Witness { level, dir, failing: f, extending: e };
                }
            }
        }
    }
    SeparatingVerdict::Separating
}

/// A validated separating tree.
#[derive(Debug, Clone)]
pub struct SeparatingTree(PrunedTree);

impl SeparatingTree {
    pub fn new(t: PrunedTree) -> Result<Self, SeparatingVerdict> {
        match check_separating(&t) {
            SeparatingVerdict::Separating => Ok(SeparatingTree(t)),
            w => Err(w),
        }
    }

    pub fn tree(&self) -> &PrunedTree {
        &self.0
    }
}

// ---------------------------------------------------------------------------
// widening
// ---------------------------------------------------------------------------

/// Cumulative widened height of blocks `1..=m`: `2 + 4 + ... + 2^m`.
pub fn block_boundary(m: usize) -> usize {
    (1usize << (m + 1)) - 2
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WklError {
    #[error("path length {got} is not a block boundary; nearest is {expected}")]
    NotBlockAligned { got: usize, expected: usize },
    #[error("path dies at widened level {level}")]
    PathDead { level: usize },
    #[error("widened tree of height {0} is too large to materialise")]
    TooLargeToMaterialise(usize),
    #[error("bad stage file: {0}")]
    BadFile(String),
}

/// The widened tree: per-level direction constraints of `H` plus the
/// level labelling and the block correspondence. Levels whose directions
/// are all allowed branch fully, so the explicit survivor sets are only
/// materialised on demand.
#[derive(Debug, Clone)]
pub struct WidenedTree {
    pub t_height: usize,
    /// `allowed[l]` are the surviving directions at widened level `l+1`.
    pub allowed: Vec<[bool; 2]>,
}

impl WidenedTree {
    pub fn height(&self) -> usize {
        self.allowed.len()
    }

    /// The label of widened level `l` (1-based): level `l` falls in block
    /// `m` at offset `j` and is labelled by the `j`-th length-`m` string.
    pub fn level_label(&self, level: usize) -> Node {
        let mut m = 1;
        while block_boundary(m) < level {
            m += 1;
        }
        let offset = level - (block_boundary(m - 1) + 1);
        Node { len: m, code: offset as u64 }
    }

    /// The widened level carrying the direction choice at `T`-node `v`:
    /// the level labelled `v*0` in block `|v| + 1`.
    pub fn direction_level(&self, v: Node) -> usize {
        let m = v.len + 1;
        block_boundary(m - 1) + 1 + (v.code << 1) as usize
    }

    /// `T`-level `m` corresponds to widened level `2^(m+1) - 2`.
    pub fn block_of_t_level(&self, m: usize) -> usize {
        block_boundary(m)
    }

    /// Materialises the explicit survivor sets; only for small heights.
    pub fn to_pruned_tree(&self) -> Result<PrunedTree, WklError> {
        let h = self.height();
        if h > 20 {
            return Err(WklError::TooLargeToMaterialise(h));
        }
        let mut levels: Vec<BTreeSet<u64>> = vec![BTreeSet::from([0u64])];
        for l in 1..=h {
            let dirs = self.allowed[l - 1];
            let mut next = BTreeSet::new();
            for &c in &levels[l - 1] {
                for d in 0..2u64 {
                    if dirs[d as usize] {
                        next.insert((c << 1) | d);
                    }
                }
            }
            levels.push(next);
        }
        Ok(PrunedTree { levels })
    }

    /// Whether a widened path (bits for levels `1..=len`) survives.
    pub fn path_alive(&self, bits: &[bool]) -> bool {
        bits.iter()
            .enumerate()
            .all(|(i, &b)| self.allowed[i][b as usize])
    }

    /// The leftmost surviving full path, unless some level is fully dead.
    pub fn leftmost_path(&self) -> Option<Vec<bool>> {
        self.allowed
            .iter()
            .map(|dirs| {
                if dirs[0] {
                    Some(false)
                } else if dirs[1] {
                    Some(true)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Widens a pruned tree into a separating tree of height `2^(n+1) - 2`.
///
/// For every `T`-node `v` that reaches the top while its child `v*j` does
/// not, direction `j` is removed uniformly at the widened level for `v`.
pub fn widen_separating(t: &PrunedTree) -> WidenedTree {
    let n = t.height();
    let reach = t.reaching_sets();
    let h = block_boundary(n);
    let mut allowed = vec![[true, true]; h];
    if n >= 1 && !reach[0].contains(&0) {
        // nothing reaches the top: no widened path may survive either
        allowed[0] = [false, false];
        return WidenedTree { t_height: n, allowed };
    }
    for m in 1..=n {
        // direction choices at T-nodes of length m-1 live in block m
        for &code in &t.levels[m - 1] {
            if !reach[m - 1].contains(&code) {
                continue;
            }
            for dir in [false, true] {
                let child = (code << 1) | dir as u64;
                if !reach[m].contains(&child) {
                    let level = block_boundary(m - 1) + 1 + (code << 1) as usize;
                    allowed[level - 1][dir as usize] = false;
                }
            }
        }
    }
    WidenedTree { t_height: n, allowed }
}

/// Decodes a surviving widened path at a block boundary back to the
/// `T`-path it represents.
pub fn pullback_path(w: &WidenedTree, h_path: &[bool]) -> Result<Vec<bool>, WklError> {
    let mut m = 0;
    while block_boundary(m) < h_path.len() {
        m += 1;
    }
    if block_boundary(m) != h_path.len() {
        return Err(WklError::NotBlockAligned {
            got: h_path.len(),
            expected: block_boundary(m),
        });
    }
    if let Some(level) = (1..=h_path.len()).find(|&l| !w.allowed[l - 1][h_path[l - 1] as usize]) {
        return Err(WklError::PathDead { level });
    }
    let mut t_path = Vec::with_capacity(m);
    let mut at = Node::ROOT;
    for _ in 0..m {
        let level = w.direction_level(at);
        let dir = h_path[level - 1];
        t_path.push(dir);
        at = at.child(dir);
    }
    Ok(t_path)
}

/// Encodes a `T`-path as a surviving widened path: the direction levels
/// of nodes along the path carry the path's choices, every other level
/// takes its least surviving direction.
pub fn encode_path(w: &WidenedTree, t_path: &[bool]) -> Result<Vec<bool>, WklError> {
    let boundary = block_boundary(t_path.len());
    let mut bits: Vec<bool> = Vec::with_capacity(boundary);
    for level in 1..=boundary {
        let dirs = w.allowed[level - 1];
        let default = if dirs[0] {
            false
        } else if dirs[1] {
            true
        } else {
            return Err(WklError::PathDead { level });
        };
        bits.push(default);
    }
    let mut at = Node::ROOT;
    for &dir in t_path {
        let level = w.direction_level(at);
        bits[level - 1] = dir;
        at = at.child(dir);
    }
    if let Some(level) = (1..=boundary).find(|&l| !w.allowed[l - 1][bits[l - 1] as usize]) {
        return Err(WklError::PathDead { level });
    }
    Ok(bits)
}

// ---------------------------------------------------------------------------
// staged deaths and limiting paths
// ---------------------------------------------------------------------------

/// A fixed-height tree together with death events applied stage by stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStages {
    pub height: usize,
    /// `deaths[s - 1]` are the nodes pruned at stage `s`.
    pub deaths: Vec<Vec<Node>>,
}

impl TreeStages {
    pub fn new(height: usize, deaths: Vec<Vec<Node>>) -> Self {
        TreeStages { height, deaths }
    }

    pub fn stages(&self) -> usize {
        self.deaths.len()
    }

    /// The tree after all deaths with stage `<= s`.
    pub fn snapshot(&self, s: usize) -> PrunedTree {
        let mut t = PrunedTree::full(self.height);
        for stage in self.deaths.iter().take(s) {
            for &node in stage {
                t.prune(node);
            }
        }
        t
    }

    /// One JSONL record per stage: `{"stage": s, "dead": ["bits", ...]}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (i, stage) in self.deaths.iter().enumerate() {
            let dead: Vec<String> = stage.iter().map(|n| n.to_string_bits()).collect();
            out.push_str(&serde_json::json!({"stage": i + 1, "dead": dead}).to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(height: usize, text: &str) -> Result<Self, WklError> {
        let mut deaths = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| WklError::BadFile(e.to_string()))?;
            let stage = v["stage"]
                .as_u64()
                .ok_or_else(|| WklError::BadFile("missing stage".into()))?
                as usize;
            if stage != deaths.len() + 1 {
                return Err(WklError::BadFile(format!("stage {stage} out of order")));
            }
            let dead = v["dead"]
                .as_array()
                .ok_or_else(|| WklError::BadFile("missing dead list".into()))?
                .iter()
                .map(|d| {
                    d.as_str()
                        .map(Node::from_str)
                        .ok_or_else(|| WklError::BadFile("bad node".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            deaths.push(dead);
        }
        Ok(TreeStages { height, deaths })
    }
}

/// Limiting online path finding: `f(n, s)` is the `n`-th bit of the
/// leftmost length-`n` string that still reaches the top at stage `s`.
pub fn limiting_path(stages: &TreeStages, horizon: usize) -> LimitingTrace {
    let horizon = horizon.min(stages.stages());
    let mut rows = Vec::with_capacity(horizon);
    for s in 1..=horizon {
        let t = stages.snapshot(s);
        let depth = stages.height.min(s);
        let row: Vec<Symbol> = match t.leftmost_reaching(depth) {
            Some(node) => node.bits().iter().map(|&b| b as Symbol).collect(),
            None => Vec::new(),
        };
        rows.push(row);
    }
    LimitingTrace { horizon, rows }
}

/// The composed procedure: widen the stage tree, follow the leftmost
/// surviving widened path, and pull it back to a `T`-path, per stage.
pub fn composed_limiting_path(stages: &TreeStages, horizon: usize) -> LimitingTrace {
    let horizon = horizon.min(stages.stages());
    let mut rows = Vec::with_capacity(horizon);
    for s in 1..=horizon {
        let t = stages.snapshot(s);
        let w = widen_separating(&t);
        let depth = stages.height.min(s);
        let row: Vec<Symbol> = match w.leftmost_path() {
            Some(path) => match pullback_path(&w, &path) {
                Ok(t_path) => t_path[..depth].iter().map(|&b| b as Symbol).collect(),
                Err(_) => Vec::new(),
            },
            None => Vec::new(),
        };
        rows.push(row);
    }
    LimitingTrace { horizon, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pruned(height: usize, deaths: usize, rng: &mut ChaCha8Rng) -> PrunedTree {
        let mut t = PrunedTree::full(height);
        for _ in 0..deaths {
            let len = rng.gen_range(1..=height);
            let code = rng.gen_range(0..(1u64 << len));
            t.prune(Node { len, code });
        }
        t
    }

    #[test]
    fn full_tree_is_separating() {
        assert!(check_separating(&PrunedTree::full(5)).is_separating());
    }

    #[test]
    fn the_defining_violation_is_witnessed() {
        // the 0-child of the root stops reaching the top while the
        // 0-child of node "1" survives: non-uniform failure at level 1
        let mut t = PrunedTree::full(3);
        t.prune(Node::from_str("00"));
        t.prune(Node::from_str("01"));
        match check_separating(&t) {
            SeparatingVerdict::Witness { level, dir, failing, extending } => {
                assert_eq!(level, 1);
                assert!(!dir);
                assert_eq!(failing, Node::from_str("0"));
                assert_eq!(extending, Node::from_str("1"));
            }
            SeparatingVerdict::Separating => panic!("expected a witness"),
        }
    }

    #[test]
    fn pruning_a_whole_subtree_uniformly_stays_separating() {
        // removing node "0" with its subtree leaves only the "1"-side;
        // the failure at the root level is vacuously uniform
        let mut t = PrunedTree::full(3);
        t.prune(Node::from_str("0"));
        assert!(check_separating(&t).is_separating());
    }

    #[test]
    fn non_uniform_child_death_is_witnessed() {
        // both children of "00" die, so "00" stops reaching the top while
        // its level peers still extend in both directions
        let mut t = PrunedTree::full(4);
        t.prune(Node::from_str("000"));
        t.prune(Node::from_str("001"));
        match check_separating(&t) {
            SeparatingVerdict::Witness { level, .. } => assert!(level <= 2),
            SeparatingVerdict::Separating => panic!("expected a witness"),
        }
    }

    #[test]
    fn prune_keeps_downward_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let t = random_pruned(6, rng.gen_range(0..8), &mut rng);
            assert!(t.is_downward_closed());
        }
    }

    #[test]
    fn widened_heights_match_the_formula() {
        for n in 1..=10 {
            let w = widen_separating(&PrunedTree::full(n));
            assert_eq!(w.height(), (1 << (n + 1)) - 2);
        }
        assert_eq!(block_boundary(1), 2);
        assert_eq!(block_boundary(2), 6);
        assert_eq!(block_boundary(3), 14);
    }

    #[test]
    fn widening_of_a_full_tree_is_fully_alive() {
        let w = widen_separating(&PrunedTree::full(3));
        assert!(w.allowed.iter().all(|d| d[0] && d[1]));
        let explicit = w.to_pruned_tree().unwrap();
        for (l, level) in explicit.levels.iter().enumerate() {
            assert_eq!(level.len(), 1 << l);
        }
        assert!(check_separating(&explicit).is_separating());
    }

    #[test]
    fn widened_trees_are_separating() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let height = rng.gen_range(1..=3);
            let t = random_pruned(height, rng.gen_range(0..5), &mut rng);
            let w = widen_separating(&t);
            let explicit = w.to_pruned_tree().unwrap();
            assert!(check_separating(&explicit).is_separating());
        }
    }

    #[test]
    fn level_labels_enumerate_blocks_in_lex_order() {
        let w = widen_separating(&PrunedTree::full(3));
        assert_eq!(w.level_label(1), Node::from_str("0"));
        assert_eq!(w.level_label(2), Node::from_str("1"));
        assert_eq!(w.level_label(3), Node::from_str("00"));
        assert_eq!(w.level_label(6), Node::from_str("11"));
        assert_eq!(w.level_label(7), Node::from_str("000"));
        assert_eq!(w.direction_level(Node::ROOT), 1);
        assert_eq!(w.direction_level(Node::from_str("1")), 5);
    }

    #[test]
    fn pullback_round_trips_surviving_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        for _ in 0..100 {
            let height = rng.gen_range(1..=6);
            let t = random_pruned(height, rng.gen_range(0..6), &mut rng);
            let w = widen_separating(&t);
            let reach = t.reaching_sets();
            for &code in reach[height].iter().take(4) {
                let t_path = Node { len: height, code }.bits();
                let h_path = encode_path(&w, &t_path).unwrap();
                assert_eq!(h_path.len(), block_boundary(height));
                assert!(w.path_alive(&h_path));
                assert_eq!(pullback_path(&w, &h_path).unwrap(), t_path);
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn pulled_back_paths_survive_in_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let height = rng.gen_range(1..=6);
            let t = random_pruned(height, rng.gen_range(0..4), &mut rng);
            if t.leftmost_reaching(height).is_none() {
                continue;
            }
            let w = widen_separating(&t);
            let h_path = w.leftmost_path().expect("live tree widens to live paths");
            let t_path = pullback_path(&w, &h_path).unwrap();
            let mut at = Node::ROOT;
            for &b in &t_path {
                at = at.child(b);
                assert!(t.reaches_top(at), "dead node on pulled-back path");
            }
        }
    }

    #[test]
    fn empty_path_pulls_back_to_empty() {
        let w = widen_separating(&PrunedTree::full(3));
        assert_eq!(pullback_path(&w, &[]).unwrap(), Vec::<bool>::new());
    }

    #[test]
    fn non_aligned_paths_are_rejected() {
        let w = widen_separating(&PrunedTree::full(3));
        let err = pullback_path(&w, &[false; 3]).unwrap_err();
        assert_eq!(err, WklError::NotBlockAligned { got: 3, expected: 6 });
    }

    #[test]
    fn limiting_path_flips_when_the_left_subtree_dies() {
        let height = 6;
        let mut deaths: Vec<Vec<Node>> = vec![vec![]; 10];
        deaths[4] = vec![Node::from_str("0")]; // stage 5
        let stages = TreeStages::new(height, deaths);
        let trace = limiting_path(&stages, 10);
        assert_eq!(trace.value(1, 4), Some(0));
        assert_eq!(trace.value(1, 5), Some(1));
        for s in 5..=10 {
            assert_eq!(trace.value(1, s), Some(1));
        }
        assert_eq!(trace.last_change(1), Some(5));
    }

    #[test]
    fn composed_path_is_valid_and_settles_no_later() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..30 {
            let height = rng.gen_range(2..=5);
            let n_stages = 8;
            let deaths: Vec<Vec<Node>> = (0..n_stages)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        let len = rng.gen_range(1..=height);
                        vec![Node { len, code: rng.gen_range(0..(1u64 << len)) }]
                    } else {
                        vec![]
                    }
                })
                .collect();
            let stages = TreeStages::new(height, deaths);
            let direct = limiting_path(&stages, n_stages);
            let composed = composed_limiting_path(&stages, n_stages);
            // the composed rows are valid partial paths of the stage tree
            for s in 1..=n_stages {
                let t = stages.snapshot(s);
                let row = &composed.rows[s - 1];
                let mut at = Node::ROOT;
                for &b in row {
                    at = at.child(b == 1);
                    assert!(t.reaches_top(at));
                }
            }
            for n in 1..=height {
                if let (Some(c), Some(d)) = (composed.last_change(n), direct.last_change(n)) {
                    assert!(c <= d);
                }
            }
        }
    }

    #[test]
    fn stage_files_round_trip() {
        let stages = TreeStages::new(
            4,
            vec![vec![], vec![Node::from_str("01")], vec![Node::from_str("1")]],
        );
        let text = stages.to_jsonl();
        assert_eq!(TreeStages::from_jsonl(4, &text).unwrap(), stages);
    }
}
