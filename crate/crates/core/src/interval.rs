//! Interval orders and online chain covering.
//!
//! An interval order is presented online by incomparability rows (bit `j`
//! of row `n` says element `n` overlaps element `j`), which is exactly the
//! interval-graph adjacency encoding. The chain-cover solver assigns each
//! arriving element a level `l` (the least `j` such that the level-`<=j`
//! elements plus the newcomer still have width `<= j`) and then a chain
//! greedily among the level's reserved chains: one chain for level 1,
//! three for every higher level, hence `3k-2` chains on width-`k` inputs.

use crate::online::{
    run_online, Admissible, OnlineProblem, OnlineSolver, PrefixWindow, SolutionTrace, StepResult,
    Symbol,
};
use crate::prefix::{ArrivalPrefix, Event, StructureKind};
use crate::ratio::{format_rat, parse_rat, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

// ---------------------------------------------------------------------------
// interval instances
// ---------------------------------------------------------------------------

/// Closed intervals with rational endpoints, arrival order = index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalInstance {
    pub intervals: Vec<(Rat, Rat)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntervalError {
    #[error("interval {index} has l > r")]
    Inverted { index: usize },
    #[error("bad instance file: {0}")]
    BadFile(String),
    #[error("width oracle capped at {cap} elements, instance has {n}")]
    CapExceeded { cap: usize, n: usize },
}

impl IntervalInstance {
    pub fn new(intervals: Vec<(Rat, Rat)>) -> Result<Self, IntervalError> {
        for (i, (l, r)) in intervals.iter().enumerate() {
            if l > r {
                return Err(IntervalError::Inverted { index: i + 1 });
            }
        }
        Ok(IntervalInstance { intervals })
    }

    pub fn n(&self) -> usize {
        self.intervals.len()
    }

    pub fn overlaps(&self, i: usize, j: usize) -> bool {
        let (li, ri) = self.intervals[i - 1];
        let (lj, rj) = self.intervals[j - 1];
        li <= rj && lj <= ri
    }

    /// `x < y` iff `x`'s right endpoint is left of `y`'s left endpoint.
    pub fn before(&self, i: usize, j: usize) -> bool {
        self.intervals[i - 1].1 < self.intervals[j - 1].0
    }

    /// Incomparability rows: the interval-graph adjacency encoding.
    pub fn to_order_prefix(&self) -> ArrivalPrefix {
        let mut p = ArrivalPrefix::new(StructureKind::IntervalOrder);
        for i in 1..=self.n() {
            let row: Vec<bool> = (1..i).map(|j| self.overlaps(i, j)).collect();
            p.push(Event::Row(row));
        }
        p
    }

    /// Maximum number of intervals covering one point, by sweep line.
    /// Closed intervals: at equal coordinates starts count before ends.
    pub fn max_overlap(&self) -> usize {
        self.prefix_max_overlap(self.n())
    }

    pub fn prefix_max_overlap(&self, m: usize) -> usize {
        let mut events: Vec<(Rat, i32)> = Vec::with_capacity(2 * m);
        for (l, r) in &self.intervals[..m] {
            events.push((*l, 1));
            events.push((*r, -1));
        }
        // starts before ends at the same coordinate
        events.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut depth = 0i32;
        let mut best = 0i32;
        for (_, d) in events {
            depth += d;
            best = best.max(depth);
        }
        best as usize
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (i, (l, r)) in self.intervals.iter().enumerate() {
            out.push_str(
                &serde_json::json!({"i": i + 1, "l": format_rat(l), "r": format_rat(r)})
                    .to_string(),
            );
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, IntervalError> {
        let mut intervals = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| IntervalError::BadFile(e.to_string()))?;
            let l = v["l"]
                .as_str()
                .ok_or_else(|| IntervalError::BadFile("missing l".into()))
                .and_then(|s| parse_rat(s).map_err(|e| IntervalError::BadFile(e.to_string())))?;
            let r = v["r"]
                .as_str()
                .ok_or_else(|| IntervalError::BadFile("missing r".into()))
                .and_then(|s| parse_rat(s).map_err(|e| IntervalError::BadFile(e.to_string())))?;
            intervals.push((l, r));
        }
        IntervalInstance::new(intervals)
    }
}

// ---------------------------------------------------------------------------
// incomparability rows and width
// ---------------------------------------------------------------------------

/// Symmetric incomparability adjacency built from arrival rows.
#[derive(Debug, Clone, Default)]
pub struct OrderArrival {
    rows: Vec<Vec<bool>>,
}

impl OrderArrival {
    pub fn new() -> Self {
        OrderArrival::default()
    }

    pub fn from_prefix(p: &ArrivalPrefix) -> Option<Self> {
        if p.kind() != StructureKind::IntervalOrder && p.kind() != StructureKind::Graph {
            return None;
        }
        let rows = p
            .events()
            .iter()
            .map(|e| e.as_row().map(|r| r.to_vec()))
            .collect::<Option<Vec<_>>>()?;
        Some(OrderArrival { rows })
    }

    pub fn push_row(&mut self, row: Vec<bool>) {
        assert_eq!(row.len(), self.rows.len());
        self.rows.push(row);
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Elements are 1-based; true when `i` and `j` are incomparable
    /// (overlapping intervals).
    pub fn incomparable(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        self.rows[hi - 1][lo - 1]
    }
}

pub const DEFAULT_WIDTH_CAP: usize = 64;

/// Width of the order prefix: the maximum antichain, i.e. the maximum
/// clique of the incomparability graph, by branch and bound. With an
/// attached [`IntervalInstance`] the result is cross-checked against the
/// sweep-line maximum overlap.
pub fn width_exact(
    rows: &OrderArrival,
    cap: usize,
    attached: Option<&IntervalInstance>,
) -> Result<usize, IntervalError> {
    let n = rows.n();
    if n > cap {
        return Err(IntervalError::CapExceeded { cap, n });
    }
    let w = max_clique(rows, n);
    if let Some(inst) = attached {
        let sweep = inst.prefix_max_overlap(n);
        assert_eq!(w, sweep, "clique width and sweep-line overlap disagree");
    }
    Ok(w)
}

fn max_clique(rows: &OrderArrival, n: usize) -> usize {
    let mut best = 0;
    let mut clique = Vec::new();
    let candidates: Vec<usize> = (1..=n).collect();
    clique_rec(rows, &mut clique, &candidates, &mut best);
    best
}

fn clique_rec(rows: &OrderArrival, clique: &mut Vec<usize>, candidates: &[usize], best: &mut usize) {
    if clique.len() > *best {
        *best = clique.len();
    }
    if clique.len() + candidates.len() <= *best {
        return;
    }
    for (idx, &v) in candidates.iter().enumerate() {
        if clique.len() + (candidates.len() - idx) <= *best {
            break;
        }
        let next: Vec<usize> = candidates[idx + 1..]
            .iter()
            .copied()
            .filter(|&u| rows.incomparable(u, v))
            .collect();
        clique.push(v);
        clique_rec(rows, clique, &next, best);
        clique.pop();
    }
}

/// True when the elements of `set` plus `extra` contain an antichain of
/// size `size` that includes `extra`.
fn has_antichain_with(
    rows: &OrderArrival,
    set: &[usize],
    extra: usize,
    size: usize,
) -> bool {
    if size == 1 {
        return true;
    }
    let neigh: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&u| rows.incomparable(u, extra))
        .collect();
    exists_clique(rows, &neigh, size - 1)
}

fn exists_clique(rows: &OrderArrival, candidates: &[usize], size: usize) -> bool {
    if size == 0 {
        return true;
    }
    if candidates.len() < size {
        return false;
    }
    for (idx, &v) in candidates.iter().enumerate() {
        if candidates.len() - idx < size {
            return false;
        }
        let next: Vec<usize> = candidates[idx + 1..]
            .iter()
            .copied()
            .filter(|&u| rows.incomparable(u, v))
            .collect();
        if exists_clique(rows, &next, size - 1) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// 2+2 freeness
// ---------------------------------------------------------------------------

/// Explicit strict order relation on `1..=n`.
pub struct OrderRelation {
    pub n: usize,
    lt: Vec<Vec<bool>>,
}

impl OrderRelation {
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut lt = vec![vec![false; n]; n];
        for &(a, b) in pairs {
            lt[a - 1][b - 1] = true;
        }
        OrderRelation { n, lt }
    }

    pub fn from_intervals(inst: &IntervalInstance) -> Self {
        let n = inst.n();
        let mut lt = vec![vec![false; n]; n];
        for i in 1..=n {
            for j in 1..=n {
                if i != j && inst.before(i, j) {
                    lt[i - 1][j - 1] = true;
                }
            }
        }
        OrderRelation { n, lt }
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.lt[a - 1][b - 1]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b) || self.lt(b, a)
    }
}

/// Verdict of the 2+2 check; a failure names a witness `(a, b, c, d)` with
/// `a < b`, `c < d`, all cross-pairs incomparable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoPlusTwoVerdict {
    Free,
    Witness { a: usize, b: usize, c: usize, d: usize },
}

impl TwoPlusTwoVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, TwoPlusTwoVerdict::Free)
    }
}

/// Searches for a subordering isomorphic to 2+2.
pub fn check_two_plus_two_free(order: &OrderRelation) -> TwoPlusTwoVerdict {
    let mut pairs = Vec::new();
    for a in 1..=order.n {
        for b in 1..=order.n {
            if order.lt(a, b) {
                pairs.push((a, b));
            }
        }
    }
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if !order.comparable(a, c)
                && !order.comparable(a, d)
                && !order.comparable(b, c)
                && !order.comparable(b, d)
            {
                return TwoPlusTwoVerdict::Witness { a, b, c, d };
            }
        }
    }
    TwoPlusTwoVerdict::Free
}

// ---------------------------------------------------------------------------
// chain cover
// ---------------------------------------------------------------------------

/// Element-to-chain assignment with level metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCover {
    /// Per element: (level in `1..=k`, 1-based chain index).
    pub assignments: Vec<(usize, Symbol)>,
}

impl ChainCover {
    pub fn chain_count(&self) -> usize {
        self.assignments
            .iter()
            .map(|&(_, c)| c)
            .collect::<std::collections::BTreeSet<_>>()
            .len()
    }

    pub fn max_chain_index(&self) -> Symbol {
        self.assignments.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }

    /// Every pair within a chain must be comparable.
    pub fn chains_valid(&self, rows: &OrderArrival) -> bool {
        let n = self.assignments.len();
        for i in 1..=n {
            for j in i + 1..=n {
                if self.assignments[i - 1].1 == self.assignments[j - 1].1
                    && rows.incomparable(i, j)
                {
                    return false;
                }
            }
        }
        true
    }

    /// Element,level,chain CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("element,level,chain\n");
        for (i, (lvl, chain)) in self.assignments.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, lvl, chain));
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainCoverError {
    #[error("width promise k = {k} violated by element {element}")]
    WidthExceeded { k: usize, element: usize },
    #[error(
        "element {element} is incomparable to {count} same-level elements; the degree bound failed"
    )]
    DegreeBound { element: usize, count: usize },
    #[error("no free chain for element {element} at level {level}")]
    NoFreeChain { element: usize, level: usize },
    #[error("run aborted at height {height}: {message}")]
    Aborted { height: usize, message: String },
}

/// Chain index block reserved for a level: level 1 owns chain 1, level
/// `j >= 2` owns chains `3j-4 .. 3j-2`.
fn level_chains(level: usize) -> std::ops::RangeInclusive<u32> {
    if level == 1 {
        1..=1
    } else {
        (3 * level as u32 - 4)..=(3 * level as u32 - 2)
    }
}

/// The online chain-cover solver for a declared width bound `k`.
pub struct KtChainCover {
    k: usize,
    rows: OrderArrival,
    /// (level, chain) per element.
    assignments: Vec<(usize, Symbol)>,
    /// Incomparability degree of each element within its own level.
    same_level_degree: Vec<usize>,
    output: Vec<Symbol>,
}

impl KtChainCover {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1);
        KtChainCover {
            k,
            rows: OrderArrival::new(),
            assignments: Vec::new(),
            same_level_degree: Vec::new(),
            output: Vec::new(),
        }
    }

    pub fn assignments(&self) -> &[(usize, Symbol)] {
        &self.assignments
    }

    /// Level of element `n`: one above the highest level `j` whose
    /// level-`<=j` set would exceed width `j` with `n` added. Scanning
    /// from the top keeps every level-`<=j` set within width `j`; the
    /// acceptance predicate is not monotone in `j`, so taking the least
    /// accepted level instead can break that soundness.
    fn assign(&mut self, n: usize) -> Result<(usize, Symbol), ChainCoverError> {
        let all: Vec<usize> = (1..n).collect();
        if has_antichain_with(&self.rows, &all, n, self.k + 1) {
            return Err(ChainCoverError::WidthExceeded { k: self.k, element: n });
        }
        let mut level = 1;
        for j in (1..self.k).rev() {
            let set: Vec<usize> = (1..n)
                .filter(|&e| self.assignments[e - 1].0 <= j)
                .collect();
            if has_antichain_with(&self.rows, &set, n, j + 1) {
                level = j + 1;
                break;
            }
        }

        // the proof's bound: no element meets 3 incomparable peers in its level
        let peers: Vec<usize> = (1..n)
            .filter(|&e| self.assignments[e - 1].0 == level && self.rows.incomparable(e, n))
            .collect();
        if peers.len() > 2 {
            return Err(ChainCoverError::DegreeBound { element: n, count: peers.len() });
        }
        for &e in &peers {
            self.same_level_degree[e - 1] += 1;
            if self.same_level_degree[e - 1] > 2 {
                return Err(ChainCoverError::DegreeBound {
                    element: e,
                    count: self.same_level_degree[e - 1],
                });
            }
        }

        // greedy least chain among the level's reserved block
        for chain in level_chains(level) {
            let blocked = peers.iter().any(|&e| self.assignments[e - 1].1 == chain);
            if !blocked {
                self.same_level_degree.push(peers.len());
                return Ok((level, chain));
            }
        }
        Err(ChainCoverError::NoFreeChain { element: n, level })
    }
}

impl OnlineSolver for KtChainCover {
    fn reset(&mut self) {
        self.rows = OrderArrival::new();
        self.assignments.clear();
        self.same_level_degree.clear();
        self.output.clear();
    }

    fn step(&mut self, height: usize, input: &PrefixWindow<'_>) -> StepResult {
        let row = match input.row(height) {
            Some(r) => r.to_vec(),
            None => return StepResult::Abort(format!("missing arrival row at height {height}")),
        };
        self.rows.push_row(row);
        match self.assign(height) {
            Ok((level, chain)) => {
                self.assignments.push((level, chain));
                self.output.push(chain);
                StepResult::Output(self.output.clone())
            }
            Err(e) => StepResult::Abort(e.to_string()),
        }
    }
}

/// Chain-cover admissibility: every pair sharing a chain is comparable,
/// and chain indices stay within the `3k-2` budget.
pub struct ChainAdmissible {
    pub k: usize,
}

impl Admissible for ChainAdmissible {
    fn check(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool {
        (1..=height).all(|n| self.check_step(p, n, out))
    }

    fn check_step(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool {
        if out.len() != height {
            return false;
        }
        let c = out[height - 1];
        if c == 0 || c > (3 * self.k - 2) as Symbol {
            return false;
        }
        let row = match p.event(height).and_then(|e| e.as_row()) {
            Some(r) => r,
            None => return false,
        };
        row.iter()
            .enumerate()
            .all(|(j, &incomp)| !incomp || out[j] != c)
    }
}

pub fn chain_cover_problem(k: usize) -> OnlineProblem {
    OnlineProblem::new(
        "interval-chain-cover",
        StructureKind::IntervalOrder,
        ChainAdmissible { k },
    )
}

/// Runs the chain-cover solver over an incomparability prefix with the
/// width promise `k`. Width violations and internal invariant failures
/// surface as errors.
pub fn kt_chain_cover(
    p: &ArrivalPrefix,
    k: usize,
) -> Result<(SolutionTrace, ChainCover), ChainCoverError> {
    let problem = chain_cover_problem(k);
    let mut solver = KtChainCover::new(k);
    let trace = run_online(&problem, &mut solver, p);
    if let Some(v) = trace.first_violation() {
        if let crate::online::ViolationKind::SolverAbort(msg) = &v.kind {
            if let Some(rest) = msg.strip_prefix("width promise k = ") {
                let mut nums = rest
                    .split(|c: char| !c.is_ascii_digit())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().unwrap());
                return Err(ChainCoverError::WidthExceeded {
                    k: nums.next().unwrap_or(k),
                    element: nums.next().unwrap_or(0),
                });
            }
            return Err(ChainCoverError::Aborted { height: v.height, message: msg.clone() });
        }
        return Err(ChainCoverError::Aborted {
            height: v.height,
            message: format!("{v}"),
        });
    }
    let cover = ChainCover { assignments: solver.assignments().to_vec() };
    Ok((trace, cover))
}

/// Online interval-graph colouring through the chain cover: adjacency rows
/// are fed to the chain-cover solver as incomparability rows and the chain
/// index is the colour. Proper with at most `3k-2` colours on width-`k`
/// inputs.
pub fn colour_via_chains(
    p: &ArrivalPrefix,
    k: usize,
) -> Result<(SolutionTrace, ChainCover), ChainCoverError> {
    let rows: Vec<Event> = p.events().to_vec();
    let mut order = ArrivalPrefix::new(StructureKind::IntervalOrder);
    for e in rows {
        order.push(e);
    }
    kt_chain_cover(&order, k)
}

// ---------------------------------------------------------------------------
// generator
// ---------------------------------------------------------------------------

/// Random interval instance with running width at most `k` and final width
/// exactly `k`: integer endpoints from `[0, 4n]`, per-interval rejection
/// keeps the width within `k`, and the whole draw is regenerated with a
/// rescaled length bound until the target width is hit.
pub fn random_interval_instance(n: usize, k: usize, seed: u64) -> IntervalInstance {
    assert!(n >= k && k >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 4 * n as i64;
    let mut max_len = (4 * k as i64).min(span).max(1);
    loop {
        if let Some(inst) = try_draw(n, k, span, max_len, &mut rng) {
            if inst.max_overlap() == k {
                return inst;
            }
            // width fell short: allow longer intervals
            max_len = (max_len * 2).min(span);
        } else {
            // could not place within the width bound: shorten
            max_len = (max_len / 2).max(1);
        }
    }
}

fn try_draw(
    n: usize,
    k: usize,
    span: i64,
    max_len: i64,
    rng: &mut ChaCha8Rng,
) -> Option<IntervalInstance> {
    let mut depth_diff = vec![0i32; span as usize + 2];
    let mut intervals: Vec<(Rat, Rat)> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut placed = false;
        for _ in 0..200 {
            let len = rng.gen_range(0..=max_len);
            let l = rng.gen_range(0..=span - len);
            let r = l + len;
            let fits = (l..=r).all(|x| depth_diff[x as usize] < k as i32);
            if fits {
                for x in l..=r {
                    depth_diff[x as usize] += 1;
                }
                intervals.push((Rat::from_integer(l), Rat::from_integer(r)));
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(IntervalInstance { intervals })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(spans: &[(i64, i64)]) -> IntervalInstance {
        IntervalInstance::new(
            spans
                .iter()
                .map(|&(l, r)| (Rat::from_integer(l), Rat::from_integer(r)))
                .collect(),
        )
        .unwrap()
    }

    /// Brute-force max antichain for the oracle cross-check.
    fn width_brute(rows: &OrderArrival) -> usize {
        let n = rows.n();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            let anti = members
                .iter()
                .enumerate()
                .all(|(a, &i)| members[a + 1..].iter().all(|&j| rows.incomparable(i, j)));
            if anti {
                best = best.max(members.len());
            }
        }
        best
    }

    #[test]
    fn width_trivial_cases() {
        let disjoint = inst(&[(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)]);
        let rows = OrderArrival::from_prefix(&disjoint.to_order_prefix()).unwrap();
        assert_eq!(width_exact(&rows, 64, Some(&disjoint)).unwrap(), 1);

        let nested = inst(&[(0, 10), (1, 9), (2, 8)]);
        let rows = OrderArrival::from_prefix(&nested.to_order_prefix()).unwrap();
        assert_eq!(width_exact(&rows, 64, Some(&nested)).unwrap(), 3);
    }

    #[test]
    fn width_matches_sweep_and_brute_on_random_instances() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let n = rng.gen_range(2..=12);
            let spans: Vec<(i64, i64)> = (0..n)
                .map(|_| {
                    let l = rng.gen_range(0..40);
                    let r = l + rng.gen_range(0..12);
                    (l, r)
                })
                .collect();
            let instance = inst(&spans);
            let rows = OrderArrival::from_prefix(&instance.to_order_prefix()).unwrap();
            let w = width_exact(&rows, 64, Some(&instance)).unwrap();
            assert_eq!(w, width_brute(&rows));
        }
    }

    #[test]
    fn width_cap_is_enforced() {
        let instance = inst(&[(0, 1); 5]);
        let rows = OrderArrival::from_prefix(&instance.to_order_prefix()).unwrap();
        assert!(matches!(
            width_exact(&rows, 4, None),
            Err(IntervalError::CapExceeded { cap: 4, n: 5 })
        ));
    }

    #[test]
    fn two_plus_two_detection() {
        // a<b, c<d, nothing else
        let order = OrderRelation::from_pairs(4, &[(1, 2), (3, 4)]);
        assert_eq!(
            check_two_plus_two_free(&order),
            TwoPlusTwoVerdict::Witness { a: 1, b: 2, c: 3, d: 4 }
        );

        // chains are free
        let chain = OrderRelation::from_pairs(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert!(check_two_plus_two_free(&chain).is_free());
    }

    #[test]
    fn interval_orders_are_two_plus_two_free() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.gen_range(2..=14);
            let spans: Vec<(i64, i64)> = (0..n)
                .map(|_| {
                    let l = rng.gen_range(0..30);
                    (l, l + rng.gen_range(0..10))
                })
                .collect();
            let order = OrderRelation::from_intervals(&inst(&spans));
            assert!(check_two_plus_two_free(&order).is_free());
        }
    }

    #[test]
    fn chain_cover_width_one_is_a_single_chain() {
        let disjoint = inst(&[(0, 1), (2, 3), (4, 5), (6, 7)]);
        let (trace, cover) = kt_chain_cover(&disjoint.to_order_prefix(), 1).unwrap();
        assert!(trace.ok());
        assert_eq!(cover.chain_count(), 1);
    }

    #[test]
    fn chain_cover_respects_bound_and_validity() {
        for seed in 0..30 {
            let k = 1 + (seed as usize % 4);
            let instance = random_interval_instance(60, k, seed);
            assert_eq!(instance.max_overlap(), k);
            let rows_prefix = instance.to_order_prefix();
            let (trace, cover) = kt_chain_cover(&rows_prefix, k).unwrap();
            assert!(trace.ok());
            assert!(cover.chain_count() <= 3 * k - 2);
            let rows = OrderArrival::from_prefix(&rows_prefix).unwrap();
            assert!(cover.chains_valid(&rows));
            // attached instance: every chain is pairwise disjoint in time
            for i in 1..=instance.n() {
                for j in i + 1..=instance.n() {
                    if cover.assignments[i - 1].1 == cover.assignments[j - 1].1 {
                        assert!(!instance.overlaps(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn chain_cover_rejects_width_violations() {
        // three nested intervals but promise k = 2
        let nested = inst(&[(0, 10), (1, 9), (2, 8)]);
        match kt_chain_cover(&nested.to_order_prefix(), 2) {
            Err(ChainCoverError::WidthExceeded { k: 2, element: 3 }) => {}
            other => panic!("expected width violation, got {other:?}"),
        }
    }

    #[test]
    fn level_sets_stay_within_their_width() {
        for seed in 100..110 {
            let k = 4;
            let instance = random_interval_instance(50, k, seed);
            let prefix = instance.to_order_prefix();
            let (_, cover) = kt_chain_cover(&prefix, k).unwrap();
            let rows = OrderArrival::from_prefix(&prefix).unwrap();
            for j in 1..=k {
                let set: Vec<usize> = (1..=instance.n())
                    .filter(|&e| cover.assignments[e - 1].0 <= j)
                    .collect();
                let sub_rows = {
                    let mut o = OrderArrival::new();
                    for (idx, &e) in set.iter().enumerate() {
                        let row: Vec<bool> =
                            set[..idx].iter().map(|&f| rows.incomparable(e, f)).collect();
                        o.push_row(row);
                    }
                    o
                };
                assert!(max_clique(&sub_rows, set.len()) <= j);
            }
        }
    }

    #[test]
    fn level_rule_scans_from_the_top() {
        // p overlaps two level-2 elements but no level-1 element; taking
        // the least admissible level would park p at level 1 and let the
        // level-<=2 set reach width 3
        let instance = inst(&[(0, 2), (1, 10), (11, 13), (5, 12), (6, 7)]);
        assert_eq!(instance.max_overlap(), 3);
        let (_, cover) = kt_chain_cover(&instance.to_order_prefix(), 3).unwrap();
        assert_eq!(
            cover.assignments.iter().map(|&(l, _)| l).collect::<Vec<_>>(),
            vec![1, 2, 1, 2, 3]
        );
    }

    #[test]
    fn online_decisions_depend_only_on_the_prefix() {
        let instance = random_interval_instance(40, 3, 77);
        let prefix = instance.to_order_prefix();
        let (_, full) = kt_chain_cover(&prefix, 3).unwrap();
        for m in [10, 20, 30] {
            let (_, part) = kt_chain_cover(&prefix.truncate(m), 3).unwrap();
            assert_eq!(part.assignments[..], full.assignments[..m]);
        }
    }

    #[test]
    fn colour_via_chains_single_interval() {
        let one = inst(&[(0, 5)]);
        let (trace, cover) = colour_via_chains(&one.to_order_prefix(), 1).unwrap();
        assert!(trace.ok());
        assert_eq!(cover.assignments, vec![(1, 1)]);
    }

    #[test]
    fn generator_hits_the_target_width() {
        for seed in 0..10 {
            for k in 1..=5 {
                let instance = random_interval_instance(40, k, seed);
                assert_eq!(instance.max_overlap(), k);
                assert!(instance
                    .intervals
                    .iter()
                    .all(|(l, r)| *l >= Rat::from_integer(0) && *r <= Rat::from_integer(160)));
            }
        }
    }

    #[test]
    fn jsonl_round_trip() {
        let instance = inst(&[(0, 3), (2, 5)]);
        assert_eq!(
            IntervalInstance::from_jsonl(&instance.to_jsonl()).unwrap(),
            instance
        );
    }
}
