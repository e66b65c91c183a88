//! Rank tables over families of systems, computed from scratch.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mme::{max_mme_rank, MmeRankReport, SearchOptions, SearchStatus};
use crate::modes::ModeStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    /// Every system with at least two modes and `n <= max_n` (default 28).
    SmallSystems,
    /// At least three modes and `n <= max_n` (default 36); for `n <= 28` only
    /// systems with `R_MME >= 2`.
    Multipartite,
    /// `2^N` for `N = 2..=max_n` (default 6).
    Qubits,
}

impl Table {
    pub fn from_number(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Self::SmallSystems),
            3 => Ok(Self::Multipartite),
            5 => Ok(Self::Qubits),
            _ => Err(Error::InvalidInput(format!(
                "no table {k}; choose 1, 3 or 5"
            ))),
        }
    }

    pub fn default_max(self) -> usize {
        match self {
            Self::SmallSystems => 28,
            Self::Multipartite => 36,
            Self::Qubits => 6,
        }
    }
}

/// All nondecreasing factorizations of `n` into factors `>= 2`.
pub fn factorizations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            if !prefix.is_empty() {
                out.push(prefix.clone());
            }
            return;
        }
        for f in min..=rest {
            if rest.is_multiple_of(f) {
                prefix.push(f);
                go(rest / f, f, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 2, &mut Vec::new(), &mut out);
    out
}

/// Candidate systems ordered by `n`, then mode count, then dimensions.
pub fn systems(table: Table, max: usize) -> Vec<ModeStructure> {
    let dims: Vec<Vec<usize>> = match table {
        Table::Qubits => (2..=max).map(|k| vec![2; k]).collect(),
        Table::SmallSystems | Table::Multipartite => {
            let min_modes = if table == Table::SmallSystems { 2 } else { 3 };
            let mut all: Vec<Vec<usize>> = (4..=max)
                .flat_map(factorizations)
                .filter(|f| f.len() >= min_modes)
                .collect();
            all.sort_by(|a, b| {
                let n = |d: &Vec<usize>| d.iter().product::<usize>();
                (n(a), a.len(), a).cmp(&(n(b), b.len(), b))
            });
            all
        }
    };
    dims.into_iter()
        .map(|d| ModeStructure::new(d).expect("factors are at least 2"))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub dims: String,
    #[serde(rename = "minLstar")]
    pub min_lstar: usize,
    pub r_tilde: usize,
    #[serde(rename = "R_MME")]
    pub r_mme: usize,
    pub exhaustive: bool,
    pub status: SearchStatus,
}

impl From<&MmeRankReport> for TableRow {
    fn from(r: &MmeRankReport) -> Self {
        Self {
            n: r.structure.dim(),
            dims: r.structure.to_string(),
            min_lstar: r.lstar[0],
            r_tilde: r.r_tilde,
            r_mme: r.r_mme,
            exhaustive: r.exhaustive,
            status: r.status,
        }
    }
}

/// Rank reports for every row of a table, in row order.
pub fn table_reports(table: Table, max: usize, opts: &SearchOptions) -> Result<Vec<MmeRankReport>> {
    let reports = systems(table, max)
        .par_iter()
        .map(|s| max_mme_rank(s, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(reports
        .into_iter()
        .filter(|r| table != Table::Multipartite || r.structure.dim() > 28 || r.r_mme >= 2)
        .collect())
}

pub fn table_rows(table: Table, max: usize, opts: &SearchOptions) -> Result<Vec<TableRow>> {
    Ok(table_reports(table, max, opts)?
        .iter()
        .map(TableRow::from)
        .collect())
}
