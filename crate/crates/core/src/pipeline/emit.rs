use std::fs;
use std::path::{Path, PathBuf};

use super::{DatasetReport, RunReport};
use crate::error::{Error, Result};
use crate::metrics::MetricKind;

/// Three decimals, `NaN` for an undefined value.
pub fn format_cell(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => {
            let s = format!("{v:.3}");
            if s == "-0.000" {
                "0.000".into()
            } else {
                s
            }
        }
        _ => "NaN".into(),
    }
}

/// Like [`format_cell`] but `N/A` for an undefined change.
pub fn format_pct(x: Option<f64>) -> String {
    match x {
        Some(_) => format_cell(x),
        None => "N/A".into(),
    }
}

fn out_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Output {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |e| Error::Output {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

fn write_csv(path: PathBuf, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    w.write_record(header).map_err(csv_err(&path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(&path))?;
    }
    w.flush().map_err(out_err(&path))
}

fn write_json<T: serde::Serialize>(path: PathBuf, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Output {
        path: path.clone(),
        source: e.into(),
    })?;
    text.push('\n');
    fs::write(&path, text).map_err(out_err(&path))
}

fn mean_pm_std(stat: Option<&crate::metrics::MetricStat>) -> String {
    let (mean, std) = stat.map_or((None, None), |s| (s.mean, s.std));
    format!("{} ± {}", format_cell(mean), format_cell(std))
}

fn emit_dataset(d: &DatasetReport, dir: &Path) -> Result<()> {
    let name = &d.name;

    let mut rows = Vec::new();
    for kind in MetricKind::ALL {
        let blocks = std::iter::once(("original".to_string(), &d.original))
            .chain(d.methods.iter().map(|m| (m.label.clone(), &m.rewired)));
        for (label, block) in blocks {
            let s = &block.summary.stats[&kind];
            rows.push(vec![
                kind.name().to_string(),
                label,
                format_cell(s.mean),
                format_cell(s.std),
                s.undefined.to_string(),
            ]);
        }
    }
    write_csv(
        dir.join(format!("metrics_{name}.csv")),
        &["metric", "method", "mean", "std", "undefined_count"],
        rows,
    )?;

    // side-by-side "mean ± std" layout, one column per method
    let mut header = vec!["metric", "original"];
    header.extend(d.methods.iter().map(|m| m.label.as_str()));
    let rows = MetricKind::ALL
        .iter()
        .map(|k| {
            let mut row = vec![k.name().to_string(), mean_pm_std(d.original.summary.stats.get(k))];
            row.extend(d.methods.iter().map(|m| mean_pm_std(m.rewired.summary.stats.get(k))));
            row
        })
        .collect();
    write_csv(dir.join(format!("table_{name}.csv")), &header, rows)?;

    let mut rows = Vec::new();
    for kind in MetricKind::ALL {
        for m in &d.methods {
            rows.push(vec![
                kind.name().to_string(),
                m.label.clone(),
                format_pct(m.percentage_change.get(&kind).copied().flatten()),
            ]);
        }
    }
    write_csv(
        dir.join(format!("pctchange_{name}.csv")),
        &["metric", "method", "pct_change"],
        rows,
    )?;

    let rows = d
        .methods
        .iter()
        .map(|m| {
            vec![
                m.label.clone(),
                m.edges.original_edges.to_string(),
                m.edges.added.to_string(),
                m.edges.removed.to_string(),
                format_cell(Some(m.edges.added_pct)),
                format_cell(Some(m.edges.removed_pct)),
                m.exceptions.len().to_string(),
            ]
        })
        .collect();
    write_csv(
        dir.join(format!("edges_{name}.csv")),
        &["method", "original_edges", "added", "removed", "added_pct", "removed_pct", "excluded_graphs"],
        rows,
    )?;

    let mut rows = Vec::new();
    for m in &d.methods {
        if let Some(sim) = &m.similarity {
            for a in &sim.aggregates {
                rows.push(vec![
                    m.label.clone(),
                    a.measure.clone(),
                    a.aggregation.clone(),
                    format_cell(a.value),
                    a.undefined.to_string(),
                ]);
            }
        }
    }
    write_csv(
        dir.join(format!("similarity_{name}.csv")),
        &["method", "measure", "aggregation", "value", "undefined_count"],
        rows,
    )?;

    for m in &d.methods {
        let w1 = format_cell(m.degree_histogram.w1);
        let rows = m
            .degree_histogram
            .bins
            .iter()
            .map(|b| {
                vec![
                    b.degree.to_string(),
                    b.count_original.to_string(),
                    b.count_rewired.to_string(),
                    w1.clone(),
                ]
            })
            .collect();
        write_csv(
            dir.join(format!("degree_hist_{name}_{}.csv", m.label)),
            &["degree", "count_original", "count_rewired", "w1_annotation"],
            rows,
        )?;
    }
    Ok(())
}

/// Writes every table of the report, `report.json`, `config_echo.json` and
/// `exceptions.csv` into `dir`, creating it if needed.
pub fn emit_tables(report: &RunReport, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(out_err(dir))?;
    for d in &report.datasets {
        emit_dataset(d, dir)?;
    }

    let mut rows = Vec::new();
    for d in &report.datasets {
        let all = std::iter::once(("original", &d.exceptions))
            .chain(d.methods.iter().map(|m| (m.label.as_str(), &m.exceptions)));
        for (label, failures) in all {
            for f in failures {
                rows.push(vec![
                    d.name.clone(),
                    label.to_string(),
                    f.graph.to_string(),
                    f.stage.clone(),
                    f.message.clone(),
                ]);
            }
        }
    }
    write_csv(
        dir.join("exceptions.csv"),
        &["dataset", "method", "graph", "stage", "message"],
        rows,
    )?;
    write_json(dir.join("config_echo.json"), &report.config)?;
    write_json(dir.join("report.json"), report)
}
