//! CSV tables and whitespace-delimited plot blocks.

use std::fmt::Write;

use hdmac_core::{Frontier, LinearRegion, MUserConstraint, RatePoint, RatePolygon, ConstraintKind};

/// Number format shared by every numeric output column.
pub fn num(x: f64) -> String {
    // Adding zero turns -0 into 0.
    format!("{:.12e}", x + 0.0)
}

/// One row per direction: weights, vertex, slots, allocation, objective.
pub fn frontier_csv(f: &Frontier) -> String {
    let mut out = String::from("theta_index,mu1,mu2,r1,r2,a1,a2,a3");
    if let Some(r) = f.results.first() {
        for name in r.allocation.field_names() {
            out.push(',');
            out.push_str(name);
        }
    }
    out.push_str(",objective,evaluations\n");
    for (i, r) in f.results.iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            num(r.mu.0),
            num(r.mu.1),
            num(r.vertex.0),
            num(r.vertex.1),
            num(r.slots.a1),
            num(r.slots.a2),
            num(r.slots.a3),
        ];
        row.extend(r.allocation.field_values().into_iter().map(num));
        row.push(num(r.objective));
        row.push(r.evaluations.to_string());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn polygon_csv(p: &RatePolygon) -> String {
    let mut out = String::from("vertex_index,r1,r2\n");
    for (i, v) in p.vertices.iter().enumerate() {
        writeln!(out, "{i},{},{}", num(v.0), num(v.1)).unwrap();
    }
    out
}

/// Every bound of every named region.
pub fn bounds_csv(regions: &[(String, LinearRegion)]) -> String {
    let mut out = String::from("region,kind,index,value\n");
    for (name, r) in regions {
        for (kind, list) in [("r1", &r.r1_bounds), ("r2", &r.r2_bounds), ("sum", &r.sum_bounds)] {
            for (i, v) in list.iter().enumerate() {
                writeln!(out, "{name},{kind},{i},{}", num(*v)).unwrap();
            }
        }
    }
    out
}

fn users(v: &[usize]) -> String {
    v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn muser_csv(achievable: &[MUserConstraint], outer: &[MUserConstraint]) -> String {
    let mut out = String::from("family,kind,users,bound\n");
    for (family, list) in [("achievable", achievable), ("outer", outer)] {
        for c in list {
            let (kind, set) = match &c.kind {
                ConstraintKind::Subset(t) => ("subset", users(t)),
                ConstraintKind::TotalSum { lambda } => ("total_sum", users(lambda)),
            };
            writeln!(out, "{family},{kind},{set},{}", num(c.bound)).unwrap();
        }
    }
    out
}

/// A named list of rate pairs, ordered along the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<RatePoint>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<RatePoint>) -> Self {
        Self {
            name: name.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExportError {
    #[error("no series to export")]
    NoSeries,
    #[error("series `{0}` has no points")]
    EmptySeries(String),
}

/// Blocks of `r1 r2` rows separated by two blank lines, so gnuplot can
/// address each series with `index`.
pub fn export_plot_data(series: &[Series], scenario_hash: &str, seed: u64) -> Result<String, ExportError> {
    if series.is_empty() {
        return Err(ExportError::NoSeries);
    }
    let mut out = String::new();
    for (i, s) in series.iter().enumerate() {
        if s.points.is_empty() {
            return Err(ExportError::EmptySeries(s.name.clone()));
        }
        if i > 0 {
            out.push_str("\n\n");
        }
        writeln!(out, "# series: {}", s.name).unwrap();
        writeln!(out, "# scenario: {scenario_hash}").unwrap();
        writeln!(out, "# seed: {seed}").unwrap();
        out.push_str("# rates in bits per channel use (base-2 logarithms)\n");
        out.push_str("# r1 r2\n");
        for p in &s.points {
            writeln!(out, "{} {}", num(p.0), num(p.1)).unwrap();
        }
    }
    Ok(out)
}
