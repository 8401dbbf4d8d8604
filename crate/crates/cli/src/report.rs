use crate::CliError;
use std::io::Write;
use std::path::Path;

pub const HEADER: [&str; 15] = [
    "experiment", "trial", "seed", "alpha", "beta", "epsilon", "gamma", "d", "n", "m", "trials",
    "metric", "value", "bound", "pass",
];

/// Parameter columns shared by every row of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Columns {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub d: Option<u32>,
    pub n: Option<u32>,
    pub m: Option<usize>,
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Trial {
    Index(usize),
    Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub trial: Trial,
    pub seed: Option<u64>,
    pub columns: Columns,
    pub metric: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub pass: Option<bool>,
}

/// Rows of one run: per-trial rows ordered by trial index, then summaries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<Row>,
}

impl ResultTable {
    pub fn summaries(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.trial == Trial::Summary)
    }

    /// True when no summary row failed.
    pub fn all_pass(&self) -> bool {
        self.summaries().all(|r| r.pass != Some(false))
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(HEADER)?;
        for r in &self.rows {
            w.write_record(record(r))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

// Shortest round-trip form, with exponents for very small or large values.
fn real(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn record(r: &Row) -> [String; 15] {
    let c = &r.columns;
    [
        r.experiment.clone(),
        match r.trial {
            Trial::Index(i) => i.to_string(),
            Trial::Summary => "summary".into(),
        },
        opt(r.seed),
        real(c.alpha),
        real(c.beta),
        real(c.epsilon),
        real(c.gamma),
        opt(c.d),
        opt(c.n),
        opt(c.m),
        opt(c.trials),
        r.metric.clone(),
        real(Some(r.value)),
        real(r.bound),
        opt(r.pass),
    ]
}

/// Writes the table as CSV to `path`.
pub fn emit_report(table: &ResultTable, path: &Path) -> Result<(), CliError> {
    let bytes = table.to_csv()?;
    let mut f = std::fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}
