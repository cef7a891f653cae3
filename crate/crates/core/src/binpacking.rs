//! Online first-fit bin packing with an exact offline optimum.
//!
//! Loads are exact rationals, so overflow checks never suffer rounding.

use crate::online::{
    run_online, OnlineProblem, OnlineSolver, PrefixWindow, SolutionTrace, StepResult, Symbol,
};
use crate::prefix::{ArrivalPrefix, Event, StructureKind};
use crate::ratio::{format_rat, parse_rat, Rat};
use thiserror::Error;

/// A packing instance: bin capacity and item sizes in arrival order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingInstance {
    pub capacity: Rat,
    pub sizes: Vec<Rat>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PackingError {
    #[error("capacity must be positive")]
    BadCapacity,
    #[error("item {index} has size {size} outside (0, capacity]")]
    BadSize { index: usize, size: String },
    #[error("exact optimum capped at {cap} items, instance has {n}")]
    CapExceeded { cap: usize, n: usize },
    #[error("bad instance file: {0}")]
    BadFile(String),
}

impl PackingInstance {
    pub fn new(capacity: Rat, sizes: Vec<Rat>) -> Result<Self, PackingError> {
        if capacity <= Rat::from_integer(0) {
            return Err(PackingError::BadCapacity);
        }
        for (i, s) in sizes.iter().enumerate() {
            if *s <= Rat::from_integer(0) || *s > capacity {
                return Err(PackingError::BadSize { index: i + 1, size: format_rat(s) });
            }
        }
        Ok(PackingInstance { capacity, sizes })
    }

    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    pub fn to_prefix(&self) -> ArrivalPrefix {
        let mut p = ArrivalPrefix::new(StructureKind::Packing);
        for s in &self.sizes {
            p.push(Event::Size(*s));
        }
        p
    }

    /// JSONL with a capacity header record followed by one record per item.
    pub fn to_jsonl(&self) -> String {
        let mut out = format!(
            "{}\n",
            serde_json::json!({"capacity": format_rat(&self.capacity)})
        );
        for (i, s) in self.sizes.iter().enumerate() {
            out.push_str(&serde_json::json!({"i": i + 1, "size": format_rat(s)}).to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, PackingError> {
        let mut capacity = None;
        let mut sizes = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| PackingError::BadFile(e.to_string()))?;
            if let Some(c) = v.get("capacity").and_then(|c| c.as_str()) {
                capacity = Some(parse_rat(c).map_err(|e| PackingError::BadFile(e.to_string()))?);
            } else if let Some(s) = v.get("size").and_then(|s| s.as_str()) {
                sizes.push(parse_rat(s).map_err(|e| PackingError::BadFile(e.to_string()))?);
            } else {
                return Err(PackingError::BadFile(format!("unrecognised record {line}")));
            }
        }
        let capacity = capacity.ok_or_else(|| PackingError::BadFile("missing capacity header".into()))?;
        PackingInstance::new(capacity, sizes)
    }
}

/// Item-to-bin assignment with per-bin loads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    /// 1-based bin index per item.
    pub bins: Vec<Symbol>,
    pub loads: Vec<Rat>,
}

impl Packing {
    pub fn from_assignment(inst: &PackingInstance, bins: &[Symbol]) -> Packing {
        let count = bins.iter().copied().max().unwrap_or(0) as usize;
        let mut loads = vec![Rat::from_integer(0); count];
        for (i, &b) in bins.iter().enumerate() {
            loads[b as usize - 1] += inst.sizes[i];
        }
        Packing { bins: bins.to_vec(), loads }
    }

    pub fn bin_count(&self) -> usize {
        self.loads.iter().filter(|l| **l > Rat::from_integer(0)).count()
    }

    pub fn no_overflow(&self, capacity: Rat) -> bool {
        self.loads.iter().all(|l| *l <= capacity)
    }
}

/// Incremental first-fit packer; the acceptance sweeps drive it directly.
#[derive(Debug, Clone)]
pub struct FirstFitPacker {
    pub capacity: Rat,
    pub loads: Vec<Rat>,
}

impl FirstFitPacker {
    pub fn new(capacity: Rat) -> Self {
        FirstFitPacker { capacity, loads: Vec::new() }
    }

    /// Places one item into the least-index bin that fits, opening a new
    /// bin if none does. Returns the 1-based bin index.
    pub fn place(&mut self, size: Rat) -> Symbol {
        for (i, load) in self.loads.iter_mut().enumerate() {
            if *load + size <= self.capacity {
                *load += size;
                return (i + 1) as Symbol;
            }
        }
        self.loads.push(size);
        self.loads.len() as Symbol
    }
}

/// First fit as an online solver over packing prefixes.
pub struct FirstFitPack {
    capacity: Rat,
    packer: FirstFitPacker,
    assignment: Vec<Symbol>,
}

impl FirstFitPack {
    pub fn new(capacity: Rat) -> Self {
        FirstFitPack {
            capacity,
            packer: FirstFitPacker::new(capacity),
            assignment: Vec::new(),
        }
    }
}

impl OnlineSolver for FirstFitPack {
    fn reset(&mut self) {
        self.packer = FirstFitPacker::new(self.capacity);
        self.assignment.clear();
    }

    fn step(&mut self, height: usize, input: &PrefixWindow<'_>) -> StepResult {
        let size = match input.size(height) {
            Some(s) => s,
            None => return StepResult::Abort(format!("missing item size at height {height}")),
        };
        let bin = self.packer.place(size);
        self.assignment.push(bin);
        StepResult::Output(self.assignment.clone())
    }
}

/// The packing problem for a given capacity: bin indices are positive and
/// no bin ever overflows.
pub fn packing_problem(capacity: Rat) -> OnlineProblem {
    struct NoOverflow {
        capacity: Rat,
    }
    impl crate::online::Admissible for NoOverflow {
        fn check(&self, p: &ArrivalPrefix, height: usize, out: &[Symbol]) -> bool {
            if out.len() != height {
                return false;
            }
            let mut loads: Vec<Rat> = Vec::new();
            for (i, &b) in out.iter().enumerate() {
                if b == 0 {
                    return false;
                }
                let size = match p.event(i + 1).and_then(|e| e.as_size()) {
                    Some(s) => s,
                    None => return false,
                };
                let idx = b as usize - 1;
                if loads.len() <= idx {
                    loads.resize(idx + 1, Rat::from_integer(0));
                }
                loads[idx] += size;
                if loads[idx] > self.capacity {
                    return false;
                }
            }
            true
        }
    }
    OnlineProblem::new(
        "first-fit-packing",
        StructureKind::Packing,
        NoOverflow { capacity },
    )
}

/// Runs first fit over the instance, verifying no-overflow at every step.
pub fn first_fit_pack(inst: &PackingInstance) -> (SolutionTrace, Packing) {
    let problem = packing_problem(inst.capacity);
    let mut solver = FirstFitPack::new(inst.capacity);
    let trace = run_online(&problem, &mut solver, &inst.to_prefix());
    let packing = trace
        .final_output()
        .map(|out| Packing::from_assignment(inst, out))
        .unwrap_or(Packing { bins: Vec::new(), loads: Vec::new() });
    (trace, packing)
}

pub const DEFAULT_PACK_CAP: usize = 12;

/// Minimum bin count over all feasible partitions, by subset dynamic
/// programming. Symmetry is broken by always packing the lowest-index
/// unplaced item next.
pub fn optimal_pack_exact(inst: &PackingInstance, cap: usize) -> Result<u32, PackingError> {
    let n = inst.n();
    if n > cap {
        return Err(PackingError::CapExceeded { cap, n });
    }
    if n == 0 {
        return Ok(0);
    }
    let full: u32 = (1u32 << n) - 1;
    // subset sums
    let mut sum = vec![Rat::from_integer(0); (full + 1) as usize];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        sum[mask as usize] = sum[(mask & (mask - 1)) as usize] + inst.sizes[low];
    }
    let mut best = vec![u32::MAX; (full + 1) as usize];
    best[0] = 0;
    for mask in 1..=full {
        let low = 1u32 << mask.trailing_zeros();
        // enumerate submasks of mask containing the lowest unplaced item
        let rest = mask & !low;
        let mut sub = rest;
        let mut acc = u32::MAX;
        loop {
            let bin = sub | low;
            if sum[bin as usize] <= inst.capacity {
                let prev = best[(mask & !bin) as usize];
                if prev != u32::MAX {
                    acc = acc.min(prev + 1);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        best[mask as usize] = acc;
    }
    Ok(best[full as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(sizes: &[(i64, i64)], cap: (i64, i64)) -> PackingInstance {
        PackingInstance::new(
            Rat::new(cap.0, cap.1),
            sizes.iter().map(|&(p, q)| Rat::new(p, q)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn first_fit_hand_simulation() {
        let i = inst(&[(3, 10), (3, 10), (3, 10), (7, 10), (7, 10), (7, 10)], (1, 1));
        let (trace, packing) = first_fit_pack(&i);
        assert!(trace.ok());
        assert_eq!(packing.bins, vec![1, 1, 1, 2, 3, 4]);
        assert_eq!(packing.bin_count(), 4);
        assert_eq!(optimal_pack_exact(&i, DEFAULT_PACK_CAP).unwrap(), 3);
    }

    #[test]
    fn full_size_items_take_one_bin_each() {
        let i = inst(&[(1, 1), (1, 1), (1, 1)], (1, 1));
        let (trace, packing) = first_fit_pack(&i);
        assert!(trace.ok());
        assert_eq!(packing.bin_count(), 3);
    }

    #[test]
    fn optimum_trivial_cases() {
        let single = inst(&[(1, 2)], (1, 1));
        assert_eq!(optimal_pack_exact(&single, 12).unwrap(), 1);

        let light = inst(&[(1, 6), (1, 6), (1, 2)], (1, 1));
        assert_eq!(optimal_pack_exact(&light, 12).unwrap(), 1);

        let empty = PackingInstance::new(Rat::new(1, 1), vec![]).unwrap();
        assert_eq!(optimal_pack_exact(&empty, 12).unwrap(), 0);
    }

    #[test]
    fn optimum_cap_enforced() {
        let sizes = vec![Rat::new(1, 2); 13];
        let i = PackingInstance::new(Rat::new(1, 1), sizes).unwrap();
        assert!(matches!(
            optimal_pack_exact(&i, 12),
            Err(PackingError::CapExceeded { cap: 12, n: 13 })
        ));
    }

    #[test]
    fn monotone_assignments_and_no_overflow() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.gen_range(1..=30);
            let sizes: Vec<Rat> = (0..n).map(|_| Rat::new(rng.gen_range(1..=6), 6)).collect();
            let i = PackingInstance::new(Rat::from_integer(1), sizes).unwrap();
            let (trace, packing) = first_fit_pack(&i);
            assert!(trace.ok());
            assert!(packing.no_overflow(i.capacity));
            // assignment of item i never changes after step i
            for h in 1..=i.n() {
                let out = trace.committed(h).unwrap();
                assert_eq!(out[..h], packing.bins[..h]);
            }
        }
    }

    #[test]
    fn ratio_two_on_small_grid_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let n = rng.gen_range(1..=9);
            let sizes: Vec<Rat> = (0..n).map(|_| Rat::new(rng.gen_range(1..=6), 6)).collect();
            let i = PackingInstance::new(Rat::from_integer(1), sizes).unwrap();
            let (_, packing) = first_fit_pack(&i);
            let opt = optimal_pack_exact(&i, 12).unwrap();
            assert!(packing.bin_count() as u32 <= 2 * opt);
        }
    }

    #[test]
    fn jsonl_round_trip() {
        let i = inst(&[(3, 10), (7, 10)], (1, 1));
        let text = i.to_jsonl();
        assert_eq!(PackingInstance::from_jsonl(&text).unwrap(), i);
    }
}
