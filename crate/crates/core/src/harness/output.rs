//! Result files. `detail.csv` has one row per (cell, method, instance);
//! `summary.csv` has one row per (cell, method). Floats are written in their
//! shortest round-trip form, so recomputing the summary from the detail rows
//! reproduces it exactly.

use std::path::{Path, PathBuf};

use super::{EvalReport, HarnessError};

pub const DETAIL_FILE: &str = "detail.csv";
pub const SUMMARY_FILE: &str = "summary.csv";

const KEY_COLUMNS: [&str; 6] = ["dataset", "task", "rule", "synth_method", "kappa_or_l", "method"];

#[derive(Debug, Clone, PartialEq)]
pub struct DetailRow {
    pub key: [String; 6],
    pub instance: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub key: [String; 6],
    pub mean: f64,
    pub std: f64,
    pub instances: usize,
}

/// Mean and population standard deviation, summed in slice order.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn detail_rows(reports: &[EvalReport]) -> Vec<DetailRow> {
    let mut rows = Vec::new();
    for r in reports {
        for m in &r.methods {
            let key = [
                r.dataset.clone(),
                r.task.to_string(),
                r.rule.to_string(),
                r.synth_method.to_string(),
                r.size_param.to_string(),
                m.method.to_string(),
            ];
            for (instance, &accuracy) in m.accuracies.iter().enumerate() {
                rows.push(DetailRow { key: key.clone(), instance, accuracy });
            }
        }
    }
    rows
}

/// Groups detail rows by key (first-appearance order) and summarises each.
pub fn summarize(rows: &[DetailRow]) -> Vec<SummaryRow> {
    let mut keys: Vec<&[String; 6]> = Vec::new();
    let mut values: Vec<Vec<(usize, f64)>> = Vec::new();
    for row in rows {
        let k = match keys.iter().position(|k| **k == row.key) {
            Some(k) => k,
            None => {
                keys.push(&row.key);
                values.push(Vec::new());
                keys.len() - 1
            }
        };
        values[k].push((row.instance, row.accuracy));
    }
    keys.into_iter()
        .zip(values)
        .map(|(key, mut v)| {
            v.sort_by_key(|&(i, _)| i);
            let accs: Vec<f64> = v.into_iter().map(|(_, a)| a).collect();
            let (mean, std) = mean_std(&accs);
            SummaryRow { key: key.clone(), mean, std, instances: accs.len() }
        })
        .collect()
}

/// Writes both result files into `dir` and returns their paths.
pub fn emit_results(reports: &[EvalReport], dir: &Path) -> Result<(PathBuf, PathBuf), HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let detail_path = dir.join(DETAIL_FILE);
    let summary_path = dir.join(SUMMARY_FILE);
    let rows = detail_rows(reports);

    let mut w = csv::Writer::from_path(&detail_path)?;
    w.write_record(KEY_COLUMNS.iter().copied().chain(["instance", "accuracy"]))?;
    for row in &rows {
        w.write_record(row.key.iter().cloned().chain([row.instance.to_string(), row.accuracy.to_string()]))?;
    }
    w.flush().map_err(|e| HarnessError::io(&detail_path, e))?;

    let mut w = csv::Writer::from_path(&summary_path)?;
    w.write_record(KEY_COLUMNS.iter().copied().chain(["mean", "std", "instances"]))?;
    for s in summarize(&rows) {
        w.write_record(s.key.iter().cloned().chain([s.mean.to_string(), s.std.to_string(), s.instances.to_string()]))?;
    }
    w.flush().map_err(|e| HarnessError::io(&summary_path, e))?;
    Ok((detail_path, summary_path))
}

fn bad_row(path: &Path, message: String) -> HarnessError {
    HarnessError::Invalid(format!("{}: {message}", path.display()))
}

pub fn read_detail_csv(path: &Path) -> Result<Vec<DetailRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        if record.len() != 8 {
            return Err(bad_row(path, format!("expected 8 fields, found {}", record.len())));
        }
        let key: [String; 6] = std::array::from_fn(|i| record[i].to_string());
        let instance = record[6].parse().map_err(|_| bad_row(path, format!("bad instance {:?}", &record[6])))?;
        let accuracy = record[7].parse().map_err(|_| bad_row(path, format!("bad accuracy {:?}", &record[7])))?;
        rows.push(DetailRow { key, instance, accuracy });
    }
    Ok(rows)
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        if record.len() != 9 {
            return Err(bad_row(path, format!("expected 9 fields, found {}", record.len())));
        }
        let num = |i: usize| record[i].parse::<f64>().map_err(|_| bad_row(path, format!("bad number {:?}", &record[i])));
        rows.push(SummaryRow {
            key: std::array::from_fn(|i| record[i].to_string()),
            mean: num(6)?,
            std: num(7)?,
            instances: record[8].parse().map_err(|_| bad_row(path, format!("bad count {:?}", &record[8])))?,
        });
    }
    Ok(rows)
}
