//! Certified approximation of real functions on `[0, 1]`.
//!
//! Functions are given as inclusion-monotone interval evaluators over
//! exact rationals. An adaptive bisection finds a finite cover on which
//! the evaluator's output intervals are narrower than `2^-(n-1)`; joining
//! the midpoint values piecewise linearly then approximates the function
//! within `2^-(n-2)` because adjacent pieces overlap at their shared
//! endpoint. Fast Cauchy names (`|r_i - r_{i+1}| < 2^-i`) name the reals
//! that dyadic inputs converge to.

use crate::ratio::{format_big, is_dyadic, pow2_inv};
use num::BigRational;
use num::{BigInt, One, Signed};
use thiserror::Error;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

// ---------------------------------------------------------------------------
// fast Cauchy names
// ---------------------------------------------------------------------------

/// A finite-horizon fast Cauchy sequence of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastCauchyName {
    pub terms: Vec<BigRational>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NameError {
    #[error("input is not a dyadic rational in [0, 1]")]
    NotDyadicInRange,
    #[error("fastness violated at index {index}: |r_i - r_(i+1)| = {gap} >= 2^-{index}")]
    NotFast { index: usize, gap: String },
    #[error("a name needs at least one term")]
    Empty,
}

impl FastCauchyName {
    /// Validates the fastness inequality at every consecutive pair.
    pub fn new(terms: Vec<BigRational>) -> Result<Self, NameError> {
        if terms.is_empty() {
            return Err(NameError::Empty);
        }
        for (i, pair) in terms.windows(2).enumerate() {
            let gap = (&pair[0] - &pair[1]).abs();
            if gap >= pow2_inv(i as u32) {
                return Err(NameError::NotFast { index: i, gap: format_big(&gap) });
            }
        }
        Ok(FastCauchyName { terms })
    }

    pub fn horizon(&self) -> usize {
        self.terms.len()
    }

    pub fn last(&self) -> &BigRational {
        self.terms.last().expect("names are nonempty")
    }
}

/// Constant-tail fast Cauchy name of a dyadic rational in `[0, 1]`.
pub fn make_dyadic_name(x: &BigRational, horizon: usize) -> Result<FastCauchyName, NameError> {
    if !is_dyadic(x) || x < &big(0) || x > &big(1) {
        return Err(NameError::NotDyadicInRange);
    }
    FastCauchyName::new(vec![x.clone(); horizon.max(1)])
}

// ---------------------------------------------------------------------------
// interval evaluators
// ---------------------------------------------------------------------------

/// A closed rational interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        RatInterval { lo, hi }
    }

    pub fn point(x: &BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x.clone() }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) * half()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn subset_of(&self, other: &RatInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }
}

/// An inclusion-monotone interval extension of a function on `[0, 1]`.
pub trait IntervalFn {
    fn eval(&self, j: &RatInterval) -> RatInterval;

    /// Evaluation at a point through the interval extension.
    fn eval_point(&self, x: &BigRational) -> RatInterval {
        self.eval(&RatInterval::point(x))
    }
}

/// The test family and simple combinators over exact rationals.
pub enum Evaluator {
    /// f(x) = x
    Identity,
    /// f(x) = x^2
    Square,
    /// f(x) = |x - 1/2|
    AbsKink,
    /// Polynomial with rational coefficients, lowest degree first,
    /// evaluated by a Horner scheme in interval arithmetic.
    Poly(Vec<BigRational>),
}

impl Evaluator {
    /// A degree-5 odd polynomial close to the sine on `[0, 1]`.
    pub fn sin_like() -> Evaluator {
        Evaluator::Poly(vec![
            big(0),
            big(1),
            big(0),
            BigRational::new(BigInt::from(-1), BigInt::from(6)),
            big(0),
            BigRational::new(BigInt::one(), BigInt::from(120)),
        ])
    }

    pub fn by_name(name: &str) -> Option<Evaluator> {
        match name {
            "id" => Some(Evaluator::Identity),
            "sq" => Some(Evaluator::Square),
            "abs" => Some(Evaluator::AbsKink),
            "sin" => Some(Evaluator::sin_like()),
            _ => None,
        }
    }
}

fn mul_intervals(a: &RatInterval, b: &RatInterval) -> RatInterval {
    let products = [
        &a.lo * &b.lo,
        &a.lo * &b.hi,
        &a.hi * &b.lo,
        &a.hi * &b.hi,
    ];
    let lo = products.iter().min().unwrap().clone();
    let hi = products.iter().max().unwrap().clone();
    RatInterval { lo, hi }
}

impl IntervalFn for Evaluator {
    fn eval(&self, j: &RatInterval) -> RatInterval {
        match self {
            Evaluator::Identity => j.clone(),
            Evaluator::Square => {
                // monotone on each sign; tight at zero crossings
                if j.lo >= big(0) {
                    RatInterval::new(&j.lo * &j.lo, &j.hi * &j.hi)
                } else if j.hi <= big(0) {
                    RatInterval::new(&j.hi * &j.hi, &j.lo * &j.lo)
                } else {
                    let m = (&j.lo * &j.lo).max(&j.hi * &j.hi);
                    RatInterval::new(big(0), m)
                }
            }
            Evaluator::AbsKink => {
                let lo = &j.lo - half();
                let hi = &j.hi - half();
                if lo >= big(0) {
                    RatInterval::new(lo, hi)
                } else if hi <= big(0) {
                    RatInterval::new(-hi, -lo)
                } else {
                    RatInterval::new(big(0), (-&lo).max(hi))
                }
            }
            Evaluator::Poly(coeffs) => {
                let mut acc = RatInterval::point(&big(0));
                for c in coeffs.iter().rev() {
                    acc = mul_intervals(&acc, j);
                    acc = RatInterval::new(&acc.lo + c, &acc.hi + c);
                }
                acc
            }
        }
    }
}

// ---------------------------------------------------------------------------
// certified piecewise-linear approximation
// ---------------------------------------------------------------------------

/// A continuous piecewise-linear approximant with its error budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLApproximant {
    /// Precision index.
    pub n: u32,
    /// Breakpoints `(x, value)` covering `[0, 1]`, strictly increasing
    /// in `x`, with `x = 0` first and `x = 1` last.
    pub breakpoints: Vec<(BigRational, BigRational)>,
    /// The guaranteed sup-error bound `2^-(n-2)`.
    pub budget: BigRational,
    /// A rigorous bound on the sup error, at most the budget.
    pub certified: BigRational,
    /// Deepest bisection depth used.
    pub depth: usize,
}

impl PLApproximant {
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let pts = &self.breakpoints;
        if *x <= pts[0].0 {
            return pts[0].1.clone();
        }
        if *x >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1.clone();
        }
        let mut idx = match pts.binary_search_by(|(bx, _)| bx.cmp(x)) {
            Ok(i) => return pts[i].1.clone(),
            Err(i) => i,
        };
        idx = idx.max(1);
        let (x0, y0) = &pts[idx - 1];
        let (x1, y1) = &pts[idx];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Breakpoint CSV with a header carrying `n` and the budget.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# n={} budget={}\n", self.n, format_big(&self.budget));
        out.push_str("x,value\n");
        for (x, v) in &self.breakpoints {
            out.push_str(&format!("{},{}\n", format_big(x), format_big(v)));
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ApproxError {
    #[error("bisection depth {depth} reached on [{lo}, {hi}] without the width target; evaluator may not converge")]
    DepthExhausted { depth: usize, lo: String, hi: String },
    #[error("precision index must be at least 2")]
    PrecisionTooCoarse,
}

const MAX_DEPTH: usize = 40;

/// Adaptively bisects `[0, 1]` until the evaluator's output on every
/// piece is narrower than `2^-(n-1)`, then joins the pieces' midpoint
/// values into a piecewise-linear approximant with certified sup error
/// below the `2^-(n-2)` budget.
pub fn approximate(f: &dyn IntervalFn, n: u32) -> Result<PLApproximant, ApproxError> {
    if n < 2 {
        return Err(ApproxError::PrecisionTooCoarse);
    }
    let target = pow2_inv(n - 1);
    let mut pieces: Vec<RatInterval> = Vec::new();
    let mut depth_used = 0usize;
    let mut stack = vec![(RatInterval::new(big(0), big(1)), 0usize)];
    while let Some((piece, depth)) = stack.pop() {
        let out = f.eval(&piece);
        if out.width() < target {
            depth_used = depth_used.max(depth);
            pieces.push(piece);
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(ApproxError::DepthExhausted {
                depth,
                lo: format_big(&piece.lo),
                hi: format_big(&piece.hi),
            });
        }
        let mid = piece.midpoint();
        stack.push((RatInterval::new(mid.clone(), piece.hi.clone()), depth + 1));
        stack.push((RatInterval::new(piece.lo.clone(), mid), depth + 1));
    }
    pieces.sort_by(|a, b| a.lo.cmp(&b.lo));

    // breakpoints: the endpoints 0 and 1 plus each piece's centre,
    // valued at the midpoint of the point evaluation
    let value_at = |x: &BigRational| f.eval_point(x).midpoint();
    let mut breakpoints = vec![(big(0), value_at(&big(0)))];
    for piece in &pieces {
        let z = piece.midpoint();
        breakpoints.push((z.clone(), value_at(&z)));
    }
    breakpoints.push((big(1), value_at(&big(1))));

    // certification: on each gap between consecutive breakpoints both the
    // function and the linear segment stay inside the hull of the two
    // covering pieces' evaluations
    let mut certified = big(0);
    for (i, piece) in pieces.iter().enumerate() {
        let mut hull = f.eval(piece);
        if i + 1 < pieces.len() {
            hull = hull.hull(&f.eval(&pieces[i + 1]));
        }
        certified = certified.max(hull.width());
    }

    let budget = pow2_inv(n - 2);
    debug_assert!(certified <= budget);
    Ok(PLApproximant { n, breakpoints, budget, certified, depth: depth_used })
}

/// Verdict of a dense-sampling error measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyReport {
    pub measured_sup: BigRational,
    pub samples: usize,
    pub pass: bool,
    /// Sample point attaining the measured supremum.
    pub worst_x: BigRational,
}

/// Measures `sup |f - h|` on a dense grid: at each sample the distance of
/// `h` to the midpoint of `f`'s point interval plus that interval's half
/// width. At least two samples per breakpoint gap.
pub fn certify_error(
    f: &dyn IntervalFn,
    h: &PLApproximant,
    samples_per_gap: usize,
) -> CertifyReport {
    let per_gap = samples_per_gap.max(2);
    let mut measured = big(0);
    let mut worst_x = big(0);
    let mut count = 0usize;
    for pair in h.breakpoints.windows(2) {
        let (x0, x1) = (&pair[0].0, &pair[1].0);
        for i in 0..per_gap {
            let t = BigRational::new(BigInt::from(i), BigInt::from(per_gap - 1));
            let x = x0 + (x1 - x0) * t;
            let fx = f.eval_point(&x);
            let err = (fx.midpoint() - h.eval(&x)).abs() + fx.width() * half();
            count += 1;
            if err > measured {
                measured = err;
                worst_x = x;
            }
        }
    }
    CertifyReport {
        pass: measured <= h.budget,
        measured_sup: measured,
        samples: count,
        worst_x,
    }
}

/// Bernstein smoothing of a piecewise-linear approximant: coefficients of
/// the degree-`m` Bernstein polynomial at the nodes `i/m`. Provided as an
/// uncertified attachment; the PL approximant remains the certified
/// object.
pub fn bernstein_coefficients(h: &PLApproximant, degree: usize) -> Vec<BigRational> {
    (0..=degree)
        .map(|i| h.eval(&BigRational::new(BigInt::from(i as i64), BigInt::from(degree.max(1) as i64))))
        .collect()
}
