//! The shared CSV schema for experiment rows.
//!
//! One schema across experiments keeps aggregation trivial:
//! `kind,n,d_or_k,online_cost,offline_cost,ratio,seed`.

use crate::ratio::{format_rat, Rat};
use std::fmt::Write as _;

pub const CSV_HEADER: &str = "kind,n,d_or_k,online_cost,offline_cost,ratio,seed";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub kind: String,
    pub n: usize,
    pub d_or_k: u64,
    pub online_cost: u64,
    pub offline_cost: u64,
    pub ratio: Rat,
    pub seed: u64,
}

impl ReportRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.kind,
            self.n,
            self.d_or_k,
            self.online_cost,
            self.offline_cost,
            format_rat(&self.ratio),
            self.seed
        )
    }
}

/// Renders header plus rows; output is byte-deterministic in the input.
pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv_line());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rows = vec![ReportRow {
            kind: "colour".into(),
            n: 10,
            d_or_k: 2,
            online_cost: 5,
            offline_cost: 2,
            ratio: Rat::new(5, 2),
            seed: 1,
        }];
        let text = to_csv(&rows);
        assert_eq!(
            text,
            "kind,n,d_or_k,online_cost,offline_cost,ratio,seed\ncolour,10,2,5,2,5/2,1\n"
        );
    }
}
