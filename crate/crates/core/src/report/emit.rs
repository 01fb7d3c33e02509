use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::svg;
use super::{Report, ReportError};

/// Fixed two-decimal rendering used in every table.
pub fn fmt2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn opt2(v: Option<f64>) -> String {
    v.map(fmt2).unwrap_or_default()
}

fn md2(v: Option<f64>) -> String {
    v.map(fmt2).unwrap_or_else(|| "n/a".into())
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn md_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", header.iter().enumerate().map(|(i, _)| if i == 0 { "---|" } else { "---:|" }).collect::<String>());
    for r in rows {
        let _ = writeln!(out, "| {} |", r.join(" | "));
    }
    out
}

fn table2(report: &Report) -> (Vec<String>, Vec<Vec<String>>, Vec<String>) {
    let mut header = vec!["planner".to_string()];
    let mut md_header = vec!["Planner".to_string()];
    for d in report.domains.iter().map(String::as_str).chain(["mean"]) {
        for m in ["sr", "pl", "ac"] {
            header.push(format!("{d}_{m}"));
            md_header.push(format!("{} {}", if d == "mean" { "MEAN" } else { d }, m.to_uppercase()));
        }
    }
    let rows = report
        .planners
        .iter()
        .map(|p| {
            let mut row = vec![p.planner.clone()];
            for d in &p.domains {
                row.extend([fmt2(d.success_rate_pct), opt2(d.mean_plan_length), opt2(d.mean_executed_actions)]);
            }
            row.extend([fmt2(p.overall_success_rate_pct), opt2(p.overall_mean_plan_length), opt2(p.overall_mean_executed_actions)]);
            row
        })
        .collect();
    (header, rows, md_header)
}

/// Planner-level summary for terminal output.
pub fn summary_table(report: &Report) -> String {
    let width = report.planners.iter().map(|p| p.planner.len()).max().unwrap_or(7).max(7);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$} {:>8} {:>8} {:>8} {:>9} {:>9}", "planner", "SR", "PL", "Ac", "fidelity", "time_s");
    for p in &report.planners {
        let _ = writeln!(
            out,
            "{:<width$} {:>8} {:>8} {:>8} {:>9} {:>9}",
            p.planner,
            fmt2(p.overall_success_rate_pct),
            md2(p.overall_mean_plan_length),
            md2(p.overall_mean_executed_actions),
            md2(p.execution_fidelity_pct),
            md2(p.mean_planning_time_seconds),
        );
    }
    out
}

/// Writes every table and figure under `dir`; returns the paths written.
pub fn emit_report(report: &Report, dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    let fail = |e: std::io::Error| ReportError::OutputDirUnwritable { path: dir.to_path_buf(), detail: e.to_string() };
    fs::create_dir_all(dir).map_err(fail)?;
    let mut written = Vec::new();
    let mut put = |name: &str, bytes: &[u8]| -> Result<(), ReportError> {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(fail)?;
        written.push(path);
        Ok(())
    };

    let (header, rows, md_header) = table2(report);
    put("table2.csv", &csv_bytes(&header, &rows))?;
    put("table2.md", md_table(&md_header, &rows).as_bytes())?;

    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let time_rows: Vec<Vec<String>> = report
        .planners
        .iter()
        .map(|p| vec![p.planner.clone(), p.domains.iter().map(|d| d.episodes).sum::<usize>().to_string(), opt2(p.mean_planning_time_seconds)])
        .collect();
    put("planning_time.csv", &csv_bytes(&s(&["planner", "episodes", "mean_planning_time_s"]), &time_rows))?;
    let md_rows: Vec<Vec<String>> = time_rows.iter().map(|r| vec![r[0].clone(), r[1].clone(), if r[2].is_empty() { "n/a".into() } else { r[2].clone() }]).collect();
    put("planning_time.md", md_table(&s(&["Planner", "Episodes", "Avg. Planning Time (s)"]), &md_rows).as_bytes())?;

    let fid_rows: Vec<Vec<String>> = report
        .planners
        .iter()
        .map(|p| vec![p.planner.clone(), opt2(p.overall_mean_plan_length), opt2(p.overall_mean_executed_actions), opt2(p.execution_fidelity_pct)])
        .collect();
    put("fidelity.csv", &csv_bytes(&s(&["planner", "mean_pl", "mean_ac", "fidelity_pct"]), &fid_rows))?;
    put("fidelity.svg", svg::fidelity_scatter(report).as_bytes())?;

    let sr_rows: Vec<Vec<String>> = report
        .planners
        .iter()
        .map(|p| vec![p.planner.clone(), fmt2(p.overall_success_rate_pct), p.solved.to_string(), p.problems_total.to_string()])
        .collect();
    put("success_rate.csv", &csv_bytes(&s(&["planner", "success_rate_pct", "solved", "problems_total"]), &sr_rows))?;
    put("success_rate.svg", svg::success_bars(report).as_bytes())?;

    let grid_rows: Vec<Vec<String>> = report
        .grid
        .rows
        .iter()
        .flat_map(|row| {
            row.cells.iter().map(move |c| {
                vec![row.planner.clone(), c.domain.clone(), c.problem.clone(), c.outcome.as_str().into(), c.recorded.to_string()]
            })
        })
        .collect();
    put("outcome_grid.csv", &csv_bytes(&s(&["planner", "domain", "problem", "outcome", "recorded"]), &grid_rows))?;
    put("outcome_grid.svg", svg::outcome_grid(report).as_bytes())?;

    let json = serde_json::to_vec_pretty(report).expect("report serializes");
    put("summary.json", &json)?;
    Ok(written)
}
