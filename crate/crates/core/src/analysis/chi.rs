use serde::Serialize;
use statrs::function::gamma::gamma_ur;

use super::AnalysisError;

/// Labeled counts, e.g. puzzle subtype x {solved, failed}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContingencyTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(row_labels: Vec<String>, col_labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self, AnalysisError> {
        if counts.len() != row_labels.len() || counts.iter().any(|r| r.len() != col_labels.len()) {
            return Err(AnalysisError::DegenerateTable("counts do not match the labels".into()));
        }
        Ok(ContingencyTable {
            row_labels,
            col_labels,
            counts,
        })
    }

    /// Unlabeled table, rows named r1.. and columns c1...
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self, AnalysisError> {
        let rows = (1..=counts.len()).map(|i| format!("r{i}")).collect();
        let cols = (1..=counts.first().map_or(0, Vec::len)).map(|i| format!("c{i}")).collect();
        Self::new(rows, cols, counts)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.col_labels.len())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquared {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    pub n: u64,
}

impl ChiSquared {
    /// Conventional banding, e.g. `p<.01`.
    pub fn p_band(&self) -> String {
        p_band(self.p_value)
    }
}

pub fn p_band(p: f64) -> String {
    match p {
        p if p < 0.001 => "p<.001".into(),
        p if p < 0.01 => "p<.01".into(),
        p if p < 0.05 => "p<.05".into(),
        p => format!("p={p:.2}"),
    }
}

/// Pearson's test of independence.
pub fn chi_squared(table: &ContingencyTable) -> Result<ChiSquared, AnalysisError> {
    let (r, c) = (table.row_labels.len(), table.col_labels.len());
    if r < 2 || c < 2 {
        return Err(AnalysisError::DegenerateTable(format!("{r}x{c} table needs at least 2 rows and 2 columns")));
    }
    let rows = table.row_totals();
    let cols = table.col_totals();
    if let Some(i) = rows.iter().position(|&t| t == 0) {
        return Err(AnalysisError::DegenerateTable(format!("row {} is empty", table.row_labels[i])));
    }
    if let Some(j) = cols.iter().position(|&t| t == 0) {
        return Err(AnalysisError::DegenerateTable(format!("column {} is empty", table.col_labels[j])));
    }
    let n = table.total() as f64;
    let mut statistic = 0.0;
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &o) in row.iter().enumerate() {
            let e = rows[i] as f64 * cols[j] as f64 / n;
            statistic += (o as f64 - e).powi(2) / e;
        }
    }
    let df = ((r - 1) * (c - 1)) as u32;
    let p_value = if statistic <= 0.0 {
        1.0
    } else {
        gamma_ur(df as f64 / 2.0, statistic / 2.0)
    };
    Ok(ChiSquared {
        statistic,
        df,
        p_value,
        n: table.total(),
    })
}
