//! Solver contract and the verifying run driver.
//!
//! A solver maps every arrival prefix to an output prefix. The driver
//! feeds it one height at a time through a metered window, checks each
//! produced output for admissibility (the problem's per-prefix predicate)
//! and for monotonicity across heights, and records violations instead of
//! aborting so that adversary games can keep probing a faulty solver.

use crate::prefix::{ArrivalPrefix, Event, StructureKind};
use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

/// Output alphabet symbol. Colours, bin and chain indices are 1-based;
/// decision bits use 0/1.
pub type Symbol = u32;

/// Declared lookahead: output at height `n` may depend on arrivals up to
/// height `g(n)`.
#[derive(Clone)]
pub enum LookaheadSpec {
    /// `g(n) = n`: no lookahead.
    Strict,
    /// `g(n) = n + k`.
    Plus(usize),
    /// `g(n) = k * n` with `k >= 1`.
    Times(usize),
    /// Arbitrary timestamp function; must be monotone with `g(n) >= n`.
    Custom(Arc<dyn Fn(usize) -> usize + Send + Sync>),
}

impl LookaheadSpec {
    pub fn g(&self, n: usize) -> usize {
        match self {
            LookaheadSpec::Strict => n,
            LookaheadSpec::Plus(k) => n + k,
            LookaheadSpec::Times(k) => n * k,
            LookaheadSpec::Custom(f) => f(n),
        }
    }

    pub fn is_strict(&self) -> bool {
        match self {
            LookaheadSpec::Strict => true,
            LookaheadSpec::Plus(k) => *k == 0,
            LookaheadSpec::Times(k) => *k == 1,
            LookaheadSpec::Custom(_) => false,
        }
    }

    /// Checks `g(n) >= n` and monotonicity on `1..=horizon`.
    pub fn validate(&self, horizon: usize) -> Result<(), LookaheadError> {
        let mut prev = 0usize;
        for n in 1..=horizon {
            let gn = self.g(n);
            if gn < n {
                return Err(LookaheadError::BelowHeight { n, g: gn });
            }
            if gn < prev {
                return Err(LookaheadError::NotMonotone { n, g: gn, prev });
            }
            prev = gn;
        }
        Ok(())
    }
}

impl fmt::Debug for LookaheadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LookaheadSpec::Strict => write!(f, "Strict"),
            LookaheadSpec::Plus(k) => write!(f, "Plus({k})"),
            LookaheadSpec::Times(k) => write!(f, "Times({k})"),
            LookaheadSpec::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LookaheadError {
    #[error("g({n}) = {g} is below the height")]
    BelowHeight { n: usize, g: usize },
    #[error("g({n}) = {g} drops below g({}) = {prev}", n - 1)]
    NotMonotone { n: usize, g: usize, prev: usize },
}

/// Metered, bounded view of an arrival prefix.
///
/// Reads beyond the window limit return `None` and raise the over-read
/// flag; the driver turns that into a lookahead-breach verdict. The
/// high-water mark of successful reads is recorded per step.
pub struct PrefixWindow<'a> {
    prefix: &'a ArrivalPrefix,
    limit: usize,
    high_water: Cell<usize>,
    over_read: Cell<bool>,
}

impl<'a> PrefixWindow<'a> {
    pub fn new(prefix: &'a ArrivalPrefix, limit: usize) -> Self {
        PrefixWindow {
            prefix,
            limit: limit.min(prefix.height()),
            high_water: Cell::new(0),
            over_read: Cell::new(false),
        }
    }

    pub fn kind(&self) -> StructureKind {
        self.prefix.kind()
    }

    /// Readable height.
    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Event at height `n`, if within the window.
    pub fn event(&self, n: usize) -> Option<&Event> {
        if n == 0 {
            return None;
        }
        if n > self.limit {
            self.over_read.set(true);
            return None;
        }
        self.high_water.set(self.high_water.get().max(n));
        self.prefix.event(n)
    }

    pub fn row(&self, n: usize) -> Option<&[bool]> {
        self.event(n).and_then(|e| e.as_row())
    }

    pub fn size(&self, n: usize) -> Option<crate::ratio::Rat> {
        self.event(n).and_then(|e| e.as_size())
    }

    pub fn high_water(&self) -> usize {
        self.high_water.get()
    }

    pub fn over_read(&self) -> bool {
        self.over_read.get()
    }
}

/// What a solver did at one height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    /// The full output prefix committed after this arrival.
    Output(Vec<Symbol>),
    /// The solver gives up; the message names the cause (e.g. a broken
    /// input promise).
    Abort(String),
}

/// A deterministic online solver.
pub trait OnlineSolver {
    /// Declared lookahead; [`LookaheadSpec::Strict`] unless overridden.
    fn lookahead(&self) -> LookaheadSpec {
        LookaheadSpec::Strict
    }

    /// Clears internal state so the solver can be replayed.
    fn reset(&mut self);

    /// Called once per height in increasing order; returns the output
    /// prefix after seeing arrival `height`. The window exposes arrivals
    /// up to `g(height)`.
    fn step(&mut self, height: usize, input: &PrefixWindow<'_>) -> StepResult;
}

/// Admissibility checker: the decidable predicate `s` of a problem.
pub trait Admissible {
    /// Full check of an output prefix against the input prefix of the
    /// given height.
    fn check(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool;

    /// Incremental variant used by the driver: the prefix of `out` for
    /// heights below `height` has already been accepted. Defaults to the
    /// full check.
    fn check_step(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool {
        self.check(p, height, out)
    }
}

impl<F> Admissible for F
where
    F: Fn(&ArrivalPrefix, usize, &[Symbol]) -> bool,
{
    fn check(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool {
        self(p, height, out)
    }
}

/// An online problem: an input space (structure kind, with its per-height
/// branching bound) and an admissibility predicate over (prefix, output
/// prefix) pairs.
pub struct OnlineProblem {
    pub name: String,
    pub kind: StructureKind,
    admissibility: Box<dyn Admissible + Send + Sync>,
}

impl OnlineProblem {
    pub fn new(
        name: impl Into<String>,
        kind: StructureKind,
        admissibility: impl Admissible + Send + Sync + 'static,
    ) -> Self {
        OnlineProblem { name: name.into(), kind, admissibility: Box::new(admissibility) }
    }

    pub fn admissible(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool {
        self.admissibility.check(p, height, out)
    }

    pub fn admissible_step(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool {
        self.admissibility.check_step(p, height, out)
    }

    /// Finite branching bound of the input space at a height, when one
    /// exists.
    pub fn branching_bound(&self, height: usize) -> Option<u128> {
        self.kind.branching_bound(height)
    }
}

impl fmt::Debug for OnlineProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OnlineProblem")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// Output fails the admissibility predicate (O1).
    Inadmissible,
    /// Output is not an extension of an earlier committed output (O2).
    NonMonotone,
    /// The solver tried to read beyond its declared lookahead.
    LookaheadBreach,
    /// The solver aborted with a message.
    SolverAbort(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub height: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::Inadmissible => write!(f, "inadmissible output at height {}", self.height),
            ViolationKind::NonMonotone => write!(f, "non-monotone output at height {}", self.height),
            ViolationKind::LookaheadBreach => {
                write!(f, "read beyond declared lookahead at height {}", self.height)
            }
            ViolationKind::SolverAbort(m) => write!(f, "solver abort at height {}: {m}", self.height),
        }
    }
}

/// Per-height record of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub height: usize,
    /// `None` while the declared lookahead exceeds the available input.
    pub output: Option<Vec<Symbol>>,
    /// `None` for pending heights.
    pub admissible: Option<bool>,
    pub read_high_water: usize,
}

/// The per-step outputs of a run plus verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionTrace {
    pub steps: Vec<TraceStep>,
    pub violations: Vec<Violation>,
}

impl SolutionTrace {
    /// True when every produced output was admissible, monotone, within
    /// the lookahead, and the solver never aborted.
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn monotone(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v.kind, ViolationKind::NonMonotone))
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// Output committed at the given height.
    pub fn committed(&self, height: usize) -> Option<&[Symbol]> {
        self.steps
            .get(height.checked_sub(1)?)
            .and_then(|s| s.output.as_deref())
    }

    /// Deepest committed output.
    pub fn final_output(&self) -> Option<&[Symbol]> {
        self.steps.iter().rev().find_map(|s| s.output.as_deref())
    }

    /// Serialises per-height outputs and verdicts, one JSONL record per
    /// height, followed by a summary record.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let rec = serde_json::json!({
                "n": s.height,
                "output": s.output,
                "admissible": s.admissible,
                "read_high_water": s.read_high_water,
            });
            out.push_str(&rec.to_string());
            out.push('\n');
        }
        let summary = serde_json::json!({
            "ok": self.ok(),
            "monotone": self.monotone(),
            "violations": self.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

/// Extends the trace by one verified step. Used by [`run_online`] and by
/// interactive drivers (adversary games) that feed arrivals one at a time.
pub(crate) fn record_step(
    trace: &mut SolutionTrace,
    problem: &OnlineProblem,
    prefix: &ArrivalPrefix,
    height: usize,
    result: StepResult,
    window_high_water: usize,
    window_over_read: bool,
) {
    match result {
        StepResult::Abort(msg) => {
            trace.steps.push(TraceStep {
                height,
                output: None,
                admissible: None,
                read_high_water: window_high_water,
            });
            trace
                .violations
                .push(Violation { height, kind: ViolationKind::SolverAbort(msg) });
        }
        StepResult::Output(out) => {
            if window_over_read {
                trace
                    .violations
                    .push(Violation { height, kind: ViolationKind::LookaheadBreach });
            }
            let admissible = problem.admissible_step(prefix, height, &out);
            if !admissible {
                trace
                    .violations
                    .push(Violation { height, kind: ViolationKind::Inadmissible });
            }
            if let Some(prev) = trace.steps.iter().rev().find_map(|s| s.output.as_deref()) {
                if out.len() < prev.len() || out[..prev.len()] != *prev {
                    trace
                        .violations
                        .push(Violation { height, kind: ViolationKind::NonMonotone });
                }
            }
            trace.steps.push(TraceStep {
                height,
                output: Some(out),
                admissible: Some(admissible),
                read_high_water: window_high_water,
            });
        }
    }
}

/// Runs a solver over a prefix, checking admissibility at every produced
/// height and monotonicity across heights.
///
/// Heights whose declared lookahead exceeds the available input are marked
/// pending. Violations are recorded in the trace and the run continues,
/// except after a solver abort.
pub fn run_online(
    problem: &OnlineProblem,
    solver: &mut dyn OnlineSolver,
    prefix: &ArrivalPrefix,
) -> SolutionTrace {
    let spec = solver.lookahead();
    solver.reset();
    let h = prefix.height();
    let mut trace = SolutionTrace { steps: Vec::with_capacity(h), violations: Vec::new() };
    for n in 1..=h {
        let g = spec.g(n).max(n);
        if g > h {
            // lookahead exceeds available input
            trace.steps.push(TraceStep {
                height: n,
                output: None,
                admissible: None,
                read_high_water: 0,
            });
            continue;
        }
        let window = PrefixWindow::new(prefix, g);
        let result = solver.step(n, &window);
        let aborted = matches!(result, StepResult::Abort(_));
        record_step(
            &mut trace,
            problem,
            prefix,
            n,
            result,
            window.high_water(),
            window.over_read(),
        );
        if aborted {
            break;
        }
    }
    trace
}

/// Proper-colouring admissibility for graph prefixes: output length equals
/// the height, colours are positive, and adjacent vertices differ.
pub struct ProperColouring;

impl Admissible for ProperColouring {
    fn check(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool {
        if out.len() != height {
            return false;
        }
        (1..=height).all(|n| colour_step_ok(p, n, out))
    }

    fn check_step(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool {
        out.len() == height && colour_step_ok(p, height, out)
    }
}

fn colour_step_ok(p: &ArrivalPrefix, n: usize, out: &[Symbol]) -> bool {
    let c = out[n - 1];
    if c == 0 {
        return false;
    }
    let row = match p.event(n).and_then(|e| e.as_row()) {
        Some(r) => r,
        None => return false,
    };
    row.iter()
        .enumerate()
        .all(|(j, &adj)| !adj || out[j] != c)
}

/// The colouring problem over graph arrivals.
pub fn colouring_problem() -> OnlineProblem {
    OnlineProblem::new("proper-colouring", StructureKind::Graph, ProperColouring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::FirstFit;

    struct RewriteFirstColour {
        inner: FirstFit,
    }

    impl OnlineSolver for RewriteFirstColour {
        fn reset(&mut self) {
            self.inner.reset();
        }
        fn step(&mut self, height: usize, input: &PrefixWindow<'_>) -> StepResult {
            match self.inner.step(height, input) {
                StepResult::Output(mut out) => {
                    if height >= 2 {
                        out[0] = 2; // re-emit vertex 1 with a different colour
                    }
                    StepResult::Output(out)
                }
                other => other,
            }
        }
    }

    struct MonochromeSolver;

    impl OnlineSolver for MonochromeSolver {
        fn reset(&mut self) {}
        fn step(&mut self, height: usize, _input: &PrefixWindow<'_>) -> StepResult {
            StepResult::Output(vec![1; height])
        }
    }

    fn path3() -> ArrivalPrefix {
        ArrivalPrefix::graph_from_rows(&["", "1", "01"]).unwrap()
    }

    #[test]
    fn first_fit_on_path_is_clean() {
        let problem = colouring_problem();
        let mut solver = FirstFit::new();
        let trace = run_online(&problem, &mut solver, &path3());
        assert!(trace.ok());
        assert_eq!(trace.committed(1).unwrap(), &[1]);
        assert_eq!(trace.committed(2).unwrap(), &[1, 2]);
        assert_eq!(trace.committed(3).unwrap(), &[1, 2, 1]);
    }

    #[test]
    fn rewriting_an_earlier_colour_is_a_monotonicity_violation() {
        let problem = colouring_problem();
        let mut solver = RewriteFirstColour { inner: FirstFit::new() };
        let trace = run_online(&problem, &mut solver, &path3());
        let v = trace
            .violations
            .iter()
            .find(|v| matches!(v.kind, ViolationKind::NonMonotone))
            .expect("monotonicity violation");
        assert_eq!(v.height, 2);
    }

    #[test]
    fn colouring_both_endpoints_alike_is_inadmissible() {
        let problem = colouring_problem();
        let mut solver = MonochromeSolver;
        let trace = run_online(&problem, &mut solver, &path3());
        let v = trace
            .violations
            .iter()
            .find(|v| matches!(v.kind, ViolationKind::Inadmissible))
            .expect("admissibility violation");
        assert_eq!(v.height, 2);
    }

    #[test]
    fn lookahead_marks_pending_heights() {
        struct Delayed;
        impl OnlineSolver for Delayed {
            fn lookahead(&self) -> LookaheadSpec {
                LookaheadSpec::Plus(2)
            }
            fn reset(&mut self) {}
            fn step(&mut self, height: usize, input: &PrefixWindow<'_>) -> StepResult {
                // touch the full window to exercise metering
                let _ = input.row(input.limit());
                StepResult::Output(vec![1; height])
            }
        }
        let problem = OnlineProblem::new(
            "anything-goes",
            StructureKind::Graph,
            |_: &ArrivalPrefix, _: usize, _: &[Symbol]| true,
        );
        let p = ArrivalPrefix::graph_from_rows(&["", "0", "00", "000"]).unwrap();
        let trace = run_online(&problem, &mut Delayed, &p);
        // g(1) = 3 and g(2) = 4 fit in the prefix; heights 3 and 4 are pending
        assert!(trace.committed(1).is_some());
        assert!(trace.committed(2).is_some());
        assert!(trace.committed(3).is_none());
        assert!(trace.committed(4).is_none());
        assert_eq!(trace.steps[0].read_high_water, 3);
        assert_eq!(trace.steps[1].read_high_water, 4);
        assert!(trace.ok());
    }

    #[test]
    fn over_read_is_recorded() {
        struct Greedy;
        impl OnlineSolver for Greedy {
            fn reset(&mut self) {}
            fn step(&mut self, height: usize, input: &PrefixWindow<'_>) -> StepResult {
                let _ = input.row(height + 1); // beyond the strict window
                StepResult::Output(vec![1; height])
            }
        }
        let problem = OnlineProblem::new(
            "anything-goes",
            StructureKind::Graph,
            |_: &ArrivalPrefix, _: usize, _: &[Symbol]| true,
        );
        let p = ArrivalPrefix::graph_from_rows(&["", "0", "00"]).unwrap();
        let trace = run_online(&problem, &mut Greedy, &p);
        assert!(trace
            .violations
            .iter()
            .any(|v| matches!(v.kind, ViolationKind::LookaheadBreach)));
    }

    #[test]
    fn lookahead_validation() {
        assert!(LookaheadSpec::Plus(2).validate(50).is_ok());
        assert!(LookaheadSpec::Times(2).validate(50).is_ok());
        let bad = LookaheadSpec::Custom(Arc::new(|n| if n == 3 { 1 } else { n }));
        assert!(bad.validate(5).is_err());
    }
}
