//! Reductions between online problems.
//!
//! Strong Weihrauch reductions carry a forward instance translation and a
//! backward solution translation; incremental reductions carry an
//! instance translation plus a delta map turning input changes into
//! output changes. The two are interconvertible when the backward map is
//! the identity. Limiting runs tabulate two-parameter approximations
//! `f(n, s)` and their settling stages.

use crate::online::{run_online, OnlineProblem, OnlineSolver, SolutionTrace, Symbol};
use crate::prefix::{ArrivalPrefix, Event, StructureKind, Validity};
use crate::ratio::Rat;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

// ---------------------------------------------------------------------------
// decision problems
// ---------------------------------------------------------------------------

/// A decision problem: outputs are single bits and the admissible bit for
/// each prefix is the predicate's value. A solution's output prefix at
/// height `n` is the verdict sequence for the first `n` input prefixes.
pub struct DecisionProblem {
    pub name: String,
    pub kind: StructureKind,
    predicate: Arc<dyn Fn(&ArrivalPrefix) -> bool + Send + Sync>,
}

impl DecisionProblem {
    pub fn new(
        name: impl Into<String>,
        kind: StructureKind,
        predicate: impl Fn(&ArrivalPrefix) -> bool + Send + Sync + 'static,
    ) -> Self {
        DecisionProblem { name: name.into(), kind, predicate: Arc::new(predicate) }
    }

    pub fn holds(&self, p: &ArrivalPrefix) -> bool {
        (self.predicate)(p)
    }

    /// Verdict bits for every prefix height.
    pub fn verdicts(&self, p: &ArrivalPrefix) -> Vec<Symbol> {
        (1..=p.height())
            .map(|m| (self.predicate)(&p.truncate(m)) as Symbol)
            .collect()
    }

    /// The induced online problem.
    pub fn as_online(&self) -> OnlineProblem {
        let predicate = Arc::clone(&self.predicate);
        OnlineProblem::new(
            self.name.clone(),
            self.kind,
            move |p: &ArrivalPrefix, height: usize, out: &[Symbol]| {
                out.len() == height
                    && (1..=height)
                        .all(|m| out[m - 1] == (predicate)(&p.truncate(m)) as Symbol)
            },
        )
    }

    /// The canonical strict solver: evaluate the predicate per height.
    pub fn canonical_solver(&self) -> DecisionSolver {
        DecisionSolver { predicate: Arc::clone(&self.predicate), kind: self.kind, out: Vec::new() }
    }
}

impl fmt::Debug for DecisionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecisionProblem")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .finish()
    }
}

/// Evaluates the predicate at every height via the metered window.
pub struct DecisionSolver {
    predicate: Arc<dyn Fn(&ArrivalPrefix) -> bool + Send + Sync>,
    kind: StructureKind,
    out: Vec<Symbol>,
}

impl OnlineSolver for DecisionSolver {
    fn reset(&mut self) {
        self.out.clear();
    }

    fn step(
        &mut self,
        height: usize,
        input: &crate::online::PrefixWindow<'_>,
    ) -> crate::online::StepResult {
        let mut p = ArrivalPrefix::new(self.kind);
        for m in 1..=height {
            match input.event(m) {
                Some(e) => p.push(e.clone()),
                None => {
                    return crate::online::StepResult::Abort(format!(
                        "missing arrival at height {m}"
                    ))
                }
            }
        }
        self.out.push((self.predicate)(&p) as Symbol);
        crate::online::StepResult::Output(self.out.clone())
    }
}

// ---------------------------------------------------------------------------
// strong Weihrauch reductions
// ---------------------------------------------------------------------------

/// Backward solution translation.
#[derive(Clone)]
pub enum Backward {
    Identity,
    Map(Arc<dyn Fn(&[Symbol]) -> Vec<Symbol> + Send + Sync>),
}

impl Backward {
    pub fn apply(&self, out: &[Symbol]) -> Vec<Symbol> {
        match self {
            Backward::Identity => out.to_vec(),
            Backward::Map(f) => f(out),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Backward::Identity)
    }
}

/// A strong Weihrauch reduction: a strict forward prefix transformation
/// with a declared height map, and a backward solution transformation.
#[derive(Clone)]
pub struct SWReduction {
    pub name: String,
    forward: Arc<dyn Fn(&ArrivalPrefix) -> ArrivalPrefix + Send + Sync>,
    /// Output height as a function of input height; the identity for
    /// length-preserving reductions.
    height_map: Arc<dyn Fn(usize) -> usize + Send + Sync>,
    pub backward: Backward,
}

impl SWReduction {
    pub fn new(
        name: impl Into<String>,
        forward: impl Fn(&ArrivalPrefix) -> ArrivalPrefix + Send + Sync + 'static,
        height_map: impl Fn(usize) -> usize + Send + Sync + 'static,
        backward: Backward,
    ) -> Self {
        SWReduction {
            name: name.into(),
            forward: Arc::new(forward),
            height_map: Arc::new(height_map),
            backward,
        }
    }

    pub fn identity() -> Self {
        SWReduction::new("identity", |p: &ArrivalPrefix| p.clone(), |n| n, Backward::Identity)
    }

    pub fn forward(&self, p: &ArrivalPrefix) -> ArrivalPrefix {
        (self.forward)(p)
    }

    pub fn expected_height(&self, input_height: usize) -> usize {
        (self.height_map)(input_height)
    }

    /// Checks strictness on a concrete instance: the forward image of
    /// every truncation has the declared height and is a prefix of the
    /// full image.
    pub fn check_monotone(&self, p: &ArrivalPrefix) -> Result<(), SWError> {
        let full = self.forward(p);
        for m in 0..=p.height() {
            let img = self.forward(&p.truncate(m));
            if img.height() != self.expected_height(m) {
                return Err(SWError::HeightMapViolated {
                    input_height: m,
                    expected: self.expected_height(m),
                    actual: img.height(),
                });
            }
            if img.events() != &full.events()[..img.height()] {
                return Err(SWError::NotMonotone { input_height: m });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SWError {
    #[error("forward image is not a valid instance of the target problem: {0}")]
    ForwardInvalid(String),
    #[error("forward transformation violates its height map at input height {input_height}: expected {expected}, got {actual}")]
    HeightMapViolated { input_height: usize, expected: usize, actual: usize },
    #[error("forward transformation is not prefix-monotone at input height {input_height}")]
    NotMonotone { input_height: usize },
    #[error("target solver violated its contract: {0}")]
    TargetRunViolation(String),
    #[error("translated solution is inadmissible for the source instance")]
    BackwardInadmissible,
    #[error("backward transformation must be the identity for this conversion")]
    BackwardNotIdentity,
}

/// Outcome of applying a reduction on one instance.
#[derive(Debug)]
pub struct SWRun {
    pub translated: ArrivalPrefix,
    pub target_trace: SolutionTrace,
    pub solution: Vec<Symbol>,
}

/// Applies `P <=_sW Q` on one instance: translate, solve in `Q`, translate
/// the solution back, and verify admissibility for `P`.
pub fn apply_sw(
    red: &SWReduction,
    p_problem: &OnlineProblem,
    q_problem: &OnlineProblem,
    instance: &ArrivalPrefix,
    q_solver: &mut dyn OnlineSolver,
) -> Result<SWRun, SWError> {
    red.check_monotone(instance)?;
    let translated = red.forward(instance);
    if let Validity::Invalid { height, reason } = translated.validate() {
        return Err(SWError::ForwardInvalid(format!("event {height}: {reason}")));
    }
    if translated.kind() != q_problem.kind {
        return Err(SWError::ForwardInvalid(format!(
            "kind {} does not match target {}",
            translated.kind(),
            q_problem.kind
        )));
    }
    let target_trace = run_online(q_problem, q_solver, &translated);
    if let Some(v) = target_trace.first_violation() {
        return Err(SWError::TargetRunViolation(v.to_string()));
    }
    let q_solution = target_trace.final_output().unwrap_or(&[]).to_vec();
    let solution = red.backward.apply(&q_solution);
    if !p_problem.admissible(instance, instance.height(), &solution) {
        return Err(SWError::BackwardInadmissible);
    }
    Ok(SWRun { translated, target_trace, solution })
}

// ---------------------------------------------------------------------------
// incremental reductions
// ---------------------------------------------------------------------------

/// A same-length change: replacement events at given heights.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementalChange {
    pub changes: Vec<(usize, Event)>,
}

impl IncrementalChange {
    /// Positional difference of two same-length prefixes.
    pub fn diff(a: &ArrivalPrefix, b: &ArrivalPrefix) -> Option<IncrementalChange> {
        if a.height() != b.height() || a.kind() != b.kind() {
            return None;
        }
        let changes = a
            .events()
            .iter()
            .zip(b.events())
            .enumerate()
            .filter(|(_, (x, y))| x != y)
            .map(|(i, (_, y))| (i + 1, y.clone()))
            .collect();
        Some(IncrementalChange { changes })
    }

    pub fn apply(&self, p: &ArrivalPrefix) -> ArrivalPrefix {
        let mut events = p.events().to_vec();
        for (h, e) in &self.changes {
            events[h - 1] = e.clone();
        }
        ArrivalPrefix::from_events(p.kind(), events).expect("same-arity replacement")
    }

    pub fn is_identity(&self) -> bool {
        self.changes.is_empty()
    }
}

/// An incremental reduction: instance translation `T` plus the delta map
/// that converts an input change into the corresponding change of `T`'s
/// output.
#[derive(Clone)]
pub struct IncrementalReduction {
    pub name: String,
    transform: Arc<dyn Fn(&ArrivalPrefix) -> ArrivalPrefix + Send + Sync>,
    delta_map:
        Arc<dyn Fn(&ArrivalPrefix, &IncrementalChange) -> IncrementalChange + Send + Sync>,
    height_map: Arc<dyn Fn(usize) -> usize + Send + Sync>,
}

impl IncrementalReduction {
    pub fn new(
        name: impl Into<String>,
        transform: impl Fn(&ArrivalPrefix) -> ArrivalPrefix + Send + Sync + 'static,
        delta_map: impl Fn(&ArrivalPrefix, &IncrementalChange) -> IncrementalChange
            + Send
            + Sync
            + 'static,
        height_map: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        IncrementalReduction {
            name: name.into(),
            transform: Arc::new(transform),
            delta_map: Arc::new(delta_map),
            height_map: Arc::new(height_map),
        }
    }

    pub fn transform(&self, p: &ArrivalPrefix) -> ArrivalPrefix {
        (self.transform)(p)
    }

    pub fn delta(&self, p: &ArrivalPrefix, change: &IncrementalChange) -> IncrementalChange {
        (self.delta_map)(p, change)
    }

    /// Checks that applying the derived delta to `T(p)` lands on `T(p')`.
    pub fn delta_consistent(&self, p: &ArrivalPrefix, change: &IncrementalChange) -> bool {
        let p2 = change.apply(p);
        let derived = self.delta(p, change);
        derived.apply(&self.transform(p)) == self.transform(&p2)
    }
}

/// Packages an incremental reduction as a strong Weihrauch reduction with
/// identity backward map.
pub fn incr_to_sw(red: &IncrementalReduction) -> SWReduction {
    let transform = Arc::clone(&red.transform);
    SWReduction {
        name: format!("{}-as-sw", red.name),
        forward: Arc::new(move |p: &ArrivalPrefix| transform(p)),
        height_map: Arc::clone(&red.height_map),
        backward: Backward::Identity,
    }
}

/// Derives an incremental reduction from a strong Weihrauch reduction
/// whose backward map is the identity; the delta map is the positional
/// difference of the two forward images.
pub fn sw_to_incr(red: &SWReduction) -> Result<IncrementalReduction, SWError> {
    if !red.backward.is_identity() {
        return Err(SWError::BackwardNotIdentity);
    }
    let fwd = Arc::clone(&red.forward);
    let fwd2 = Arc::clone(&red.forward);
    Ok(IncrementalReduction {
        name: format!("{}-as-incr", red.name),
        transform: Arc::new(move |p: &ArrivalPrefix| fwd(p)),
        delta_map: Arc::new(move |p: &ArrivalPrefix, change: &IncrementalChange| {
            let p2 = change.apply(p);
            IncrementalChange::diff(&fwd2(p), &fwd2(&p2))
                .expect("forward images of same-length instances have equal length")
        }),
        height_map: Arc::clone(&red.height_map),
    })
}

// ---------------------------------------------------------------------------
// ratio-preserving reduction checker
// ---------------------------------------------------------------------------

/// One side of a ratio-preserving reduction check: an online cost on
/// outputs and an offline optimum per input prefix.
pub struct CostModel {
    pub cost: Box<dyn Fn(&[Symbol]) -> u64 + Send + Sync>,
    pub offline: Box<dyn Fn(&ArrivalPrefix) -> u64 + Send + Sync>,
}

/// The translation pair of a ratio-preserving reduction: `B` maps source
/// prefixes to target prefixes, `A` maps (source prefix, target solution)
/// back to a source solution.
pub struct RatioReduction {
    pub b: Box<dyn Fn(&ArrivalPrefix) -> ArrivalPrefix + Send + Sync>,
    pub a: Box<dyn Fn(&ArrivalPrefix, &[Symbol]) -> Vec<Symbol> + Send + Sync>,
    /// The claimed constant `d`.
    pub d: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioFailure {
    /// Direct solution differs from the reconstruction through the target.
    Reconstruction { height: usize },
    /// Source ratio exceeded `d` times the target ratio.
    RatioExceeded { height: usize, lhs: Rat, rhs: Rat },
}

/// Result of checking a ratio-preserving reduction over instances.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub pass: bool,
    /// Maximum of source-ratio / target-ratio over all checked prefixes.
    pub max_quotient: Rat,
    pub failures: Vec<(usize, RatioFailure)>,
}

/// Checks a claimed ratio-preserving reduction on concrete instances: for
/// every prefix of every instance the direct source solution must equal
/// the reconstruction `A(prefix, g(B(prefix)))`, and the source cost
/// ratio must stay within `d` times the target cost ratio.
pub fn check_ratio_preserving(
    red: &RatioReduction,
    f_solve: &mut dyn FnMut(&ArrivalPrefix) -> Vec<Symbol>,
    g_solve: &mut dyn FnMut(&ArrivalPrefix) -> Vec<Symbol>,
    f_costs: &CostModel,
    g_costs: &CostModel,
    instances: &[ArrivalPrefix],
) -> RatioReport {
    let mut max_quotient = Rat::from_integer(0);
    let mut failures = Vec::new();
    for (idx, inst) in instances.iter().enumerate() {
        for m in 1..=inst.height() {
            let prefix = inst.truncate(m);
            let direct = f_solve(&prefix);
            let translated = (red.b)(&prefix);
            let g_out = g_solve(&translated);
            let reconstructed = (red.a)(&prefix, &g_out);
            if direct != reconstructed {
                failures.push((idx, RatioFailure::Reconstruction { height: m }));
                continue;
            }
            let f_ratio = Rat::new(
                (f_costs.cost)(&direct) as i64,
                (f_costs.offline)(&prefix).max(1) as i64,
            );
            let g_ratio = Rat::new(
                (g_costs.cost)(&g_out) as i64,
                (g_costs.offline)(&translated).max(1) as i64,
            );
            let bound = red.d * g_ratio;
            if f_ratio > bound {
                failures.push((
                    idx,
                    RatioFailure::RatioExceeded { height: m, lhs: f_ratio, rhs: bound },
                ));
            }
            if g_ratio > Rat::from_integer(0) {
                max_quotient = max_quotient.max(f_ratio / g_ratio);
            }
        }
    }
    RatioReport { pass: failures.is_empty(), max_quotient, failures }
}

// ---------------------------------------------------------------------------
// limiting runs
// ---------------------------------------------------------------------------

/// Two-parameter table `f(n, s)` for `n <= s <= horizon`, with per-`n`
/// settling stages relative to the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitingTrace {
    pub horizon: usize,
    /// `rows[s - 1]` holds `f(1, s) .. f(len, s)` with `len <= s`.
    pub rows: Vec<Vec<Symbol>>,
}

impl LimitingTrace {
    pub fn value(&self, n: usize, s: usize) -> Option<Symbol> {
        self.rows.get(s - 1).and_then(|r| r.get(n - 1)).copied()
    }

    /// Last stage at which `f(n, .)` changed; equals the first stage where
    /// `n` is defined when the value never changed afterwards.
    pub fn last_change(&self, n: usize) -> Option<usize> {
        let first = (n..=self.horizon).find(|&s| self.value(n, s).is_some())?;
        let mut last = first;
        let mut prev = self.value(n, first)?;
        for s in first + 1..=self.horizon {
            if let Some(v) = self.value(n, s) {
                if v != prev {
                    last = s;
                    prev = v;
                }
            }
        }
        Some(last)
    }

    /// Indices whose latest change happened at the horizon itself, i.e.
    /// still moving as far as this table can tell.
    pub fn changing_at_horizon(&self) -> Vec<usize> {
        (1..=self.horizon)
            .filter(|&n| self.last_change(n) == Some(self.horizon) && self.horizon > n)
            .collect()
    }
}

/// Fills the limiting table for an algorithm that maps each stage prefix
/// to its current approximation string.
pub fn limiting_run(
    algorithm: &mut dyn FnMut(&ArrivalPrefix, usize) -> Vec<Symbol>,
    p: &ArrivalPrefix,
    horizon: usize,
) -> LimitingTrace {
    let horizon = horizon.min(p.height());
    let mut rows = Vec::with_capacity(horizon);
    for s in 1..=horizon {
        let prefix = p.truncate(s);
        let mut row = algorithm(&prefix, s);
        row.truncate(s);
        rows.push(row);
    }
    LimitingTrace { horizon, rows }
}

/// Finite-horizon settling dominance: wherever `b` has settled by a stage,
/// `a` has settled too. Necessary for a limiting reduction from `a` to
/// `b`; only approximate at any finite horizon.
pub fn settles_no_later(a: &LimitingTrace, b: &LimitingTrace) -> bool {
    let horizon = a.horizon.min(b.horizon);
    (1..=horizon).all(|n| match (a.last_change(n), b.last_change(n)) {
        (Some(la), Some(lb)) => la <= lb,
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefix::row_string;

    fn edge_problem() -> DecisionProblem {
        DecisionProblem::new("has-edge", StructureKind::Graph, |p: &ArrivalPrefix| {
            p.events()
                .iter()
                .any(|e| e.as_row().is_some_and(|r| r.iter().any(|&b| b)))
        })
    }

    fn ones_problem() -> DecisionProblem {
        DecisionProblem::new("has-one", StructureKind::Bitstring, |p: &ArrivalPrefix| {
            p.events()
                .iter()
                .any(|e| e.as_row().is_some_and(|r| r.iter().any(|&b| b)))
        })
    }

    /// Forward map of the edge-to-ones reduction: bit `n` records whether
    /// row `n` contains an edge.
    fn edge_rows_to_bits(p: &ArrivalPrefix) -> ArrivalPrefix {
        let mut out = ArrivalPrefix::new(StructureKind::Bitstring);
        for e in p.events() {
            let has = e.as_row().is_some_and(|r| r.iter().any(|&b| b));
            out.push(Event::Row(vec![has]));
        }
        out
    }

    /// All graph prefixes of exactly height `n`.
    fn all_graphs(n: usize) -> Vec<ArrivalPrefix> {
        let mut out = vec![ArrivalPrefix::new(StructureKind::Graph)];
        for h in 1..=n {
            let mut next = Vec::new();
            for p in &out {
                for bits in 0u32..(1 << (h - 1)) {
                    let mut q = p.clone();
                    q.push(Event::Row((0..h - 1).map(|i| bits & (1 << i) != 0).collect()));
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn exhaustive_graph_enumeration_size() {
        assert_eq!(all_graphs(4).len(), 64); // 2^(0+1+2+3)
    }

    #[test]
    fn identity_reduction_passes_on_all_small_graphs() {
        let p = edge_problem();
        let online = p.as_online();
        let red = SWReduction::identity();
        for inst in all_graphs(3) {
            let mut solver = p.canonical_solver();
            let run = apply_sw(&red, &online, &online, &inst, &mut solver).unwrap();
            assert_eq!(run.solution, p.verdicts(&inst));
        }
    }

    #[test]
    fn edge_to_ones_reduction_verified_exhaustively() {
        let p = edge_problem();
        let q = ones_problem();
        let red = SWReduction::new(
            "edge-rows-to-bits",
            edge_rows_to_bits,
            |n| n,
            Backward::Identity,
        );
        for inst in all_graphs(4) {
            let mut q_solver = q.canonical_solver();
            let run = apply_sw(&red, &p.as_online(), &q.as_online(), &inst, &mut q_solver)
                .expect("reduction applies");
            assert_eq!(run.solution, p.verdicts(&inst));
            assert_eq!(p.holds(&inst), q.holds(&run.translated));
        }
    }

    #[test]
    fn bit_flipping_forward_map_is_detected() {
        let p = edge_problem();
        let q = ones_problem();
        // flips every summary bit, so positive instances translate wrong
        let red = SWReduction::new(
            "bit-flipper",
            |p: &ArrivalPrefix| {
                let mut out = ArrivalPrefix::new(StructureKind::Bitstring);
                for e in p.events() {
                    let has = e.as_row().is_some_and(|r| r.iter().any(|&b| b));
                    out.push(Event::Row(vec![!has]));
                }
                out
            },
            |n| n,
            Backward::Identity,
        );
        let witness = ArrivalPrefix::graph_from_rows(&["", "1"]).unwrap();
        let mut q_solver = q.canonical_solver();
        let err = apply_sw(&red, &p.as_online(), &q.as_online(), &witness, &mut q_solver)
            .unwrap_err();
        assert_eq!(err, SWError::BackwardInadmissible);
    }

    #[test]
    fn round_trip_preserves_verdicts_on_all_small_graphs() {
        let p = edge_problem();
        let q = ones_problem();
        let incr = IncrementalReduction::new(
            "edge-rows-to-bits",
            edge_rows_to_bits,
            |p: &ArrivalPrefix, change: &IncrementalChange| {
                let p2 = change.apply(p);
                IncrementalChange::diff(&edge_rows_to_bits(p), &edge_rows_to_bits(&p2)).unwrap()
            },
            |n| n,
        );
        let sw = incr_to_sw(&incr);
        let back = sw_to_incr(&sw).unwrap();
        for inst in all_graphs(4) {
            // verdict equivalence through every representation
            let direct = p.holds(&inst);
            assert_eq!(direct, q.holds(&incr.transform(&inst)));
            assert_eq!(direct, q.holds(&sw.forward(&inst)));
            assert_eq!(direct, q.holds(&back.transform(&inst)));
        }
    }

    #[test]
    fn sw_to_incr_requires_identity_backward() {
        let red = SWReduction::new(
            "negating",
            |p: &ArrivalPrefix| p.clone(),
            |n| n,
            Backward::Map(Arc::new(|out: &[Symbol]| {
                out.iter().map(|&b| 1 - b).collect()
            })),
        );
        match sw_to_incr(&red) {
            Err(e) => assert_eq!(e, SWError::BackwardNotIdentity),
            Ok(_) => panic!("non-identity backward map accepted"),
        }
    }

    #[test]
    fn single_bit_deltas_are_consistent_everywhere() {
        let incr = IncrementalReduction::new(
            "edge-rows-to-bits",
            edge_rows_to_bits,
            |p: &ArrivalPrefix, change: &IncrementalChange| {
                let p2 = change.apply(p);
                IncrementalChange::diff(&edge_rows_to_bits(p), &edge_rows_to_bits(&p2)).unwrap()
            },
            |n| n,
        );
        for inst in all_graphs(4) {
            for h in 1..=inst.height() {
                let row = inst.event(h).unwrap().as_row().unwrap().to_vec();
                for flip in 0..row.len() {
                    let mut new_row = row.clone();
                    new_row[flip] = !new_row[flip];
                    let delta =
                        IncrementalChange { changes: vec![(h, Event::Row(new_row))] };
                    assert!(incr.delta_consistent(&inst, &delta));
                }
            }
        }
    }

    #[test]
    fn identity_delta_maps_to_identity_delta() {
        let incr = IncrementalReduction::new(
            "identity",
            |p: &ArrivalPrefix| p.clone(),
            |_: &ArrivalPrefix, change: &IncrementalChange| change.clone(),
            |n| n,
        );
        let inst = ArrivalPrefix::graph_from_rows(&["", "1", "10"]).unwrap();
        let delta = IncrementalChange { changes: vec![] };
        assert!(incr.delta(&inst, &delta).is_identity());
        assert!(incr.delta_consistent(&inst, &delta));
    }

    #[test]
    fn limiting_run_of_a_constant_algorithm_settles_at_first_definition() {
        let p = ArrivalPrefix::bits_from_str("0000000").unwrap();
        let trace = limiting_run(
            &mut |_prefix: &ArrivalPrefix, s: usize| vec![7; s],
            &p,
            7,
        );
        for n in 1..=7 {
            assert_eq!(trace.last_change(n), Some(n));
        }
        assert!(trace.changing_at_horizon().is_empty());
    }

    #[test]
    fn limiting_tables_are_prefix_stable() {
        let p = ArrivalPrefix::bits_from_str("0110101011").unwrap();
        let mut algo = |prefix: &ArrivalPrefix, s: usize| -> Vec<Symbol> {
            // running count parity, changes as stages grow
            let ones = prefix
                .events()
                .iter()
                .filter(|e| e.as_row().is_some_and(|r| r[0]))
                .count() as Symbol;
            (1..=s).map(|n| (ones + n as Symbol) % 2).collect()
        };
        let small = limiting_run(&mut algo, &p, 6);
        let large = limiting_run(&mut algo, &p, 10);
        for s in 1..=6 {
            assert_eq!(small.rows[s - 1], large.rows[s - 1]);
        }
        assert!(settles_no_later(&small, &small));
    }

    #[test]
    fn row_string_helper() {
        assert_eq!(row_string(&[true, false, true]), "101");
    }
}
