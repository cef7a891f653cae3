//! Lookahead-to-strict widening.
//!
//! A solver with timestamp `g` on input space `I` becomes a strict solver
//! on a widened space `I'` whose height-`n` event is the block of original
//! events with heights in `(g(n-1), g(n)]`. The strict solver's output at
//! `I'`-height `n` equals the original solver's output at `I`-height `n`.

use crate::online::{
    record_step, LookaheadError, LookaheadSpec, OnlineProblem, OnlineSolver, PrefixWindow,
    SolutionTrace, TraceStep,
};
use crate::prefix::ArrivalPrefix;
use std::ops::RangeInclusive;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WidenError {
    #[error("timestamp function rejected: {0}")]
    BadTimestamp(#[from] LookaheadError),
    #[error("input space has no finite branching bound")]
    UnboundedBranching,
}

/// The widened problem `I'` together with its re-indexing maps.
pub struct Widening {
    spec: LookaheadSpec,
    /// Monotone closure of `g`, cached for blocks computed so far.
    boundaries: Vec<usize>,
}

impl Widening {
    /// Validates `g` (monotone, `g(n) >= n`) up to `horizon` and the
    /// finiteness of the input branching.
    pub fn new(
        spec: LookaheadSpec,
        problem: &OnlineProblem,
        horizon: usize,
    ) -> Result<Self, WidenError> {
        spec.validate(horizon)?;
        if problem.branching_bound(1).is_none() {
            return Err(WidenError::UnboundedBranching);
        }
        let mut boundaries = Vec::with_capacity(horizon);
        let mut prev = 0usize;
        for n in 1..=horizon {
            let b = spec.g(n).max(n).max(prev);
            boundaries.push(b);
            prev = b;
        }
        Ok(Widening { spec, boundaries })
    }

    /// The timestamp function being widened away.
    pub fn timestamp(&self) -> &LookaheadSpec {
        &self.spec
    }

    /// End of block `n` in original heights (the monotone closure of `g`).
    pub fn block_end(&self, n: usize) -> usize {
        self.boundaries[n - 1]
    }

    /// Original heights covered by the widened event at height `n`.
    pub fn block_span(&self, n: usize) -> RangeInclusive<usize> {
        let lo = if n == 1 { 0 } else { self.block_end(n - 1) };
        lo + 1..=self.block_end(n)
    }

    /// Widened height whose output corresponds to original height `n`
    /// (the identity: outputs are re-indexed one-to-one).
    pub fn widened_height_of(&self, n: usize) -> usize {
        n
    }

    /// Number of complete widened events available in a prefix of the
    /// given original height.
    pub fn complete_blocks(&self, prefix_height: usize) -> usize {
        self.boundaries
            .iter()
            .take_while(|&&b| b <= prefix_height)
            .count()
    }

    /// Drives the wrapped solver strictly over blocks: at widened height
    /// `n` the window ends exactly at the block boundary, so the run is
    /// strict over `I'` by metering. Admissibility is checked at the
    /// corresponding original height.
    pub fn run_strict(
        &self,
        solver: &mut WidenedSolver<'_>,
        problem: &OnlineProblem,
        prefix: &ArrivalPrefix,
    ) -> SolutionTrace {
        solver.inner.reset();
        let blocks = self.complete_blocks(prefix.height());
        let mut trace =
            SolutionTrace { steps: Vec::with_capacity(blocks), violations: Vec::new() };
        for n in 1..=blocks {
            let window = PrefixWindow::new(prefix, self.block_end(n));
            let result = solver.inner.step(n, &window);
            let aborted = matches!(result, crate::online::StepResult::Abort(_));
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
}

/// A strict solver over the widened space, wrapping the original solver.
pub struct WidenedSolver<'a> {
    inner: &'a mut dyn OnlineSolver,
}

impl<'a> WidenedSolver<'a> {
    pub fn lookahead(&self) -> LookaheadSpec {
        LookaheadSpec::Strict
    }
}

/// Widens a lookahead solver into a strict one over the block space.
///
/// Returns the widened problem view (block spans, re-indexing) and the
/// strict solver. Outputs agree height-for-height with the original run;
/// see [`Widening::run_strict`].
pub fn widen_to_strict<'a>(
    solver: &'a mut dyn OnlineSolver,
    problem: &OnlineProblem,
    horizon: usize,
) -> Result<(WidenedSolver<'a>, Widening), WidenError> {
    let spec = solver.lookahead();
    let widening = Widening::new(spec, problem, horizon)?;
    Ok((WidenedSolver { inner: solver }, widening))
}

/// Committed outputs of two traces agree at every height where both
/// committed.
pub fn traces_agree(a: &SolutionTrace, b: &SolutionTrace) -> bool {
    let committed = |t: &SolutionTrace| -> Vec<(usize, Vec<crate::online::Symbol>)> {
        t.steps
            .iter()
            .filter_map(|s: &TraceStep| s.output.clone().map(|o| (s.height, o)))
            .collect()
    };
    let (ca, cb) = (committed(a), committed(b));
    for (h, out) in &ca {
        if let Some((_, other)) = cb.iter().find(|(hb, _)| hb == h) {
            if out != other {
                return false;
            }
        }
    }
    true
}
