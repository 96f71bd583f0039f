//! Planar geometry on rate polygons: weighted vertex selection, the
//! downward-closed convex hull of a point cloud, and containment slack.

use serde::{Deserialize, Serialize};

use crate::channel::{RatePoint, RatePolygon};
use crate::error::{Error, Result};

/// Relative tolerance under which two weighted values count as tied.
const TIE_TOL: f64 = 1e-12;

/// Vertex maximizing `mu1*r1 + mu2*r2`; ties go to larger `r1`, then larger `r2`.
pub fn weighted_best_vertex(poly: &RatePolygon, mu: (f64, f64)) -> Result<(RatePoint, f64)> {
    let (m1, m2) = mu;
    if !(m1 >= 0.0 && m2 >= 0.0) || (m1 == 0.0 && m2 == 0.0) || !m1.is_finite() || !m2.is_finite()
    {
        return Err(Error::invalid(
            "weights",
            format!("need mu1, mu2 >= 0 and not both zero, got ({m1}, {m2})"),
        ));
    }
    let mut best: Option<(RatePoint, f64)> = None;
    for &v in &poly.vertices {
        let val = m1 * v.0 + m2 * v.1;
        best = match best {
            None => Some((v, val)),
            Some((bv, bval)) => {
                let tol = TIE_TOL * bval.abs().max(1.0);
                if val > bval + tol
                    || ((val - bval).abs() <= tol && (v.0 > bv.0 || (v.0 == bv.0 && v.1 > bv.1)))
                {
                    Some((v, val))
                } else {
                    Some((bv, bval))
                }
            }
        };
    }
    let (v, _) = best.ok_or(Error::Empty("polygon has no vertices"))?;
    Ok((v, m1 * v.0 + m2 * v.1))
}

fn cross(o: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull of the points together with their projections onto both
/// axes, i.e. the smallest convex region containing every point that is
/// closed under decreasing either coordinate toward zero.
pub fn upper_hull(points: &[RatePoint]) -> Result<RatePolygon> {
    if points.is_empty() {
        return Err(Error::Empty("upper_hull needs at least one point"));
    }
    if let Some(p) = points
        .iter()
        .find(|p| !(p.0 >= 0.0 && p.1 >= 0.0 && p.0.is_finite() && p.1.is_finite()))
    {
        return Err(Error::invalid("rate point", format!("{p:?} is not finite and >= 0")));
    }
    let max1 = points.iter().map(|p| p.0).fold(0.0, f64::max);
    let max2 = points.iter().map(|p| p.1).fold(0.0, f64::max);

    let mut pts: Vec<RatePoint> = Vec::with_capacity(points.len() + 3);
    pts.push((0.0, 0.0));
    pts.push((max1, 0.0));
    pts.push((0.0, max2));
    pts.extend_from_slice(points);
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() == 1 {
        return Ok(RatePolygon::origin());
    }

    // Andrew's monotone chain; collinear points are dropped.
    let mut lower: Vec<RatePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<RatePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // The chain starts at the smallest point, which is the origin.
    Ok(RatePolygon { vertices: lower })
}

/// Outcome of a containment test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub contained: bool,
    /// Smallest signed slack of any inner vertex; negative values are violations.
    pub worst_slack: f64,
}

fn dist_to_segment(p: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

/// Signed slack of one point with respect to a polygon.
///
/// For polygons with area this is the smallest signed distance to the
/// supporting lines of the edges. Degenerate polygons (a point or a
/// segment) report minus the Euclidean distance.
pub fn point_slack(poly: &RatePolygon, p: RatePoint) -> f64 {
    let v = &poly.vertices;
    match v.len() {
        0 => f64::NEG_INFINITY,
        1 => -dist_to_segment(p, v[0], v[0]),
        2 => -dist_to_segment(p, v[0], v[1]),
        n => {
            let mut worst = f64::INFINITY;
            for i in 0..n {
                let a = v[i];
                let b = v[(i + 1) % n];
                let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
                if len == 0.0 {
                    continue;
                }
                worst = worst.min(cross(a, b, p) / len);
            }
            worst
        }
    }
}

/// Whether every vertex of `inner` lies in `outer` with slack at least `-tol`.
pub fn region_contains(outer: &RatePolygon, inner: &RatePolygon, tol: f64) -> Containment {
    let worst_slack = inner
        .vertices
        .iter()
        .map(|&p| point_slack(outer, p))
        .fold(f64::INFINITY, f64::min);
    let worst_slack = if worst_slack.is_infinite() && worst_slack > 0.0 {
        0.0
    } else {
        worst_slack
    };
    Containment {
        contained: worst_slack >= -tol,
        worst_slack,
    }
}
