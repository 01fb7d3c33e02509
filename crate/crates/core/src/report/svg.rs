//! Self-contained SVG figures. Layout is plain arithmetic; every number
//! drawn also appears in the CSV next to it.

use std::fmt::Write as _;

use super::emit::fmt2;
use super::Report;
use crate::bench::RecordOutcome;

const GREEN: &str = "#2e9d45";
const RED: &str = "#d13b3b";
const GRAY: &str = "#b0b0b0";

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn open(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" \
         font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    )
}

/// A round axis maximum at or above `v`.
fn nice_max(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(v.log10().floor());
    for step in [1.0, 2.0, 5.0, 10.0] {
        if step * mag >= v {
            return step * mag;
        }
    }
    10.0 * mag
}

/// Mean executed actions against mean plan length, with the y = x line.
pub fn fidelity_scatter(report: &Report) -> String {
    let (w, h, m) = (520.0, 520.0, 60.0);
    let points: Vec<_> = report
        .planners
        .iter()
        .filter_map(|p| Some((p.planner.as_str(), p.overall_mean_plan_length?, p.overall_mean_executed_actions?)))
        .collect();
    let max = nice_max(points.iter().map(|p| p.1.max(p.2)).fold(0.0, f64::max));
    let plot = w - 2.0 * m;
    let x = |v: f64| m + v / max * plot;
    let y = |v: f64| h - m - v / max * plot;

    let mut s = open(w, h);
    let _ = writeln!(s, "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>", m, h - m, w - m, h - m);
    let _ = writeln!(s, "<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{}\" stroke=\"black\"/>", h - m);
    for i in 0..=5 {
        let v = max * i as f64 / 5.0;
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>", x(v), h - m + 16.0, fmt2(v));
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>", m - 6.0, y(v) + 4.0, fmt2(v));
    }
    let _ = writeln!(
        s,
        "<line class=\"reference\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>",
        x(0.0),
        y(0.0),
        x(max),
        y(max)
    );
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">Mean plan length (PL)</text>", w / 2.0, h - 16.0);
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">Mean executed actions (Ac)</text>",
        h / 2.0,
        h / 2.0
    );
    for (name, pl, ac) in points {
        let _ = writeln!(
            s,
            "<circle class=\"point\" data-planner=\"{}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"#3066be\"><title>{}: PL {}, Ac {}</title></circle>",
            esc(name),
            x(pl),
            y(ac),
            esc(name),
            fmt2(pl),
            fmt2(ac)
        );
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>", x(pl) + 7.0, y(ac) - 5.0, esc(name));
    }
    s.push_str("</svg>\n");
    s
}

/// Horizontal bars of overall success rate.
pub fn success_bars(report: &Report) -> String {
    let label_w = 200.0;
    let bar_w = 360.0;
    let row_h = 24.0;
    let h = 40.0 + row_h * report.planners.len() as f64;
    let w = label_w + bar_w + 80.0;
    let mut s = open(w, h);
    for (i, p) in report.planners.iter().enumerate() {
        let top = 20.0 + row_h * i as f64;
        let len = bar_w * p.overall_success_rate_pct / 100.0;
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>", label_w - 8.0, top + 15.0, esc(&p.planner));
        let _ = writeln!(
            s,
            "<rect class=\"bar\" x=\"{label_w}\" y=\"{top}\" width=\"{len:.2}\" height=\"{}\" fill=\"#3066be\"/>",
            row_h - 6.0
        );
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{}\">{}%</text>", label_w + len + 6.0, top + 15.0, fmt2(p.overall_success_rate_pct));
    }
    s.push_str("</svg>\n");
    s
}

/// One row per planner, one square per problem: green success, red
/// failure, gray no plan.
pub fn outcome_grid(report: &Report) -> String {
    let label_w = 200.0;
    let cell = 12.0;
    let gap = 6.0;
    let top = 30.0;
    let Some(first) = report.grid.rows.first() else {
        return format!("{}</svg>\n", open(100.0, 20.0));
    };
    // x offset of each cell, with a gap between domains
    let mut xs = Vec::with_capacity(first.cells.len());
    let mut x = label_w;
    let mut headers = Vec::new();
    for (i, c) in first.cells.iter().enumerate() {
        if i > 0 && c.domain != first.cells[i - 1].domain {
            x += gap;
        }
        if i == 0 || c.domain != first.cells[i - 1].domain {
            headers.push((x, c.domain.clone()));
        }
        xs.push(x);
        x += cell;
    }
    let w = x + 20.0;
    let h = top + cell * report.grid.rows.len() as f64 + 20.0;
    let mut s = open(w, h);
    for (hx, name) in headers {
        let _ = writeln!(s, "<text x=\"{hx}\" y=\"{}\">{}</text>", top - 8.0, esc(&name));
    }
    for (r, row) in report.grid.rows.iter().enumerate() {
        let y = top + cell * r as f64;
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>", label_w - 8.0, y + cell - 2.0, esc(&row.planner));
        for (c, cx) in row.cells.iter().zip(&xs) {
            let fill = match c.outcome {
                RecordOutcome::Success => GREEN,
                RecordOutcome::Failure => RED,
                RecordOutcome::NoPlan => GRAY,
            };
            let _ = writeln!(
                s,
                "<rect class=\"cell\" data-outcome=\"{}\" x=\"{cx}\" y=\"{y}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"white\"><title>{}/{}</title></rect>",
                c.outcome.as_str(),
                cell,
                cell,
                esc(&c.domain),
                esc(&c.problem)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
