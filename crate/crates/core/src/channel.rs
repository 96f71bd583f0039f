//! Shared domain types for the two-user half-duplex channel, the Gaussian
//! capacity function, power bookkeeping, and the conversion from a set of
//! linear rate bounds to the vertex list of the rate polygon.
//!
//! All rates are in bits per channel use (base-2 logarithm).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on power sums when checking a budget.
pub const POWER_TOL: f64 = 1e-9;

/// Tolerance on `a1 + a2 + a3 = 1`.
pub const SLOT_SUM_TOL: f64 = 1e-12;

/// Negative arguments of a square root down to this value are treated as zero.
pub(crate) const SQRT_CLAMP: f64 = 1e-12;

/// Gaussian capacity `0.5 * log2(1 + x)` in bits.
pub fn c_gauss(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("c_gauss requires x >= 0, got {x}")));
    }
    Ok(cap(x))
}

/// Unchecked capacity used on hot paths where arguments are built from
/// validated non-negative quantities. Rounding noise below zero maps to 0.
#[inline]
pub(crate) fn cap(x: f64) -> f64 {
    0.5 * x.max(0.0).ln_1p() * std::f64::consts::LOG2_E
}

/// Square root that forgives tiny negative round-off.
#[inline]
pub(crate) fn sqrt_clamped(x: f64) -> f64 {
    if x < 0.0 && x >= -SQRT_CLAMP {
        0.0
    } else {
        x.sqrt()
    }
}

/// A slot of length zero contributes nothing, whatever its rate term.
#[inline]
pub(crate) fn slot_term(alpha: f64, rate: f64) -> f64 {
    if alpha == 0.0 {
        0.0
    } else {
        alpha * rate
    }
}

fn check_non_negative(what: &'static str, field: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::invalid(what, format!("{field} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

/// Amplitude gains of the four links and the common noise power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelGains {
    /// user 1 -> user 2
    pub k12: f64,
    /// user 2 -> user 1
    pub k21: f64,
    /// user 1 -> destination
    pub k10: f64,
    /// user 2 -> destination
    pub k20: f64,
    pub noise: f64,
}

impl ChannelGains {
    pub fn new(k12: f64, k21: f64, k10: f64, k20: f64, noise: f64) -> Result<Self> {
        let g = Self {
            k12,
            k21,
            k10,
            k20,
            noise,
        };
        g.validate()?;
        Ok(g)
    }

    /// `k12 = k21 = inter`, `k10 = k20 = direct`.
    pub fn symmetric(inter: f64, direct: f64, noise: f64) -> Result<Self> {
        Self::new(inter, inter, direct, direct, noise)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("k12", self.k12),
            ("k21", self.k21),
            ("k10", self.k10),
            ("k20", self.k20),
        ] {
            check_non_negative("ChannelGains", name, v)?;
        }
        if !self.noise.is_finite() || self.noise <= 0.0 {
            return Err(Error::invalid(
                "ChannelGains",
                format!("noise must be finite and > 0, got {}", self.noise),
            ));
        }
        Ok(())
    }

    /// The same channel with both inter-user gains set to `k`.
    pub fn with_inter_user(&self, k: f64) -> Self {
        Self {
            k12: k,
            k21: k,
            ..*self
        }
    }
}

/// Fractions of one block spent in the three slots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSlots {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl TimeSlots {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let s = Self { a1, a2, a3 };
        s.validate()?;
        Ok(s)
    }

    /// Builds the slots from `(a1, a2)` with `a3 = 1 - a1 - a2`.
    pub fn from_pair(a1: f64, a2: f64) -> Result<Self> {
        let mut a3 = 1.0 - a1 - a2;
        if a3 < 0.0 && a3 >= -SLOT_SUM_TOL {
            a3 = 0.0;
        }
        Self::new(a1, a2, a3)
    }

    /// Classical MAC: only the cooperative slot is used.
    pub fn mac() -> Self {
        Self {
            a1: 0.0,
            a2: 0.0,
            a3: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a1", self.a1), ("a2", self.a2), ("a3", self.a3)] {
            check_non_negative("TimeSlots", name, v)?;
        }
        let sum = self.a1 + self.a2 + self.a3;
        if (sum - 1.0).abs() > SLOT_SUM_TOL {
            return Err(Error::invalid(
                "TimeSlots",
                format!("a1 + a2 + a3 must equal 1, got {sum}"),
            ));
        }
        Ok(())
    }
}

/// Power split of the partial decode-forward scheme.
///
/// `pu`/`pv` carry the public messages in slots 1/2; `c2, c3` (user 1) and
/// `d2, d3` (user 2) scale the public powers re-sent in slot 3.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdfAllocation {
    pub p10: f64,
    pub p20: f64,
    pub pu: f64,
    pub pv: f64,
    pub p13: f64,
    pub p23: f64,
    pub c2: f64,
    pub c3: f64,
    pub d2: f64,
    pub d3: f64,
}

impl PdfAllocation {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p10", self.p10),
            ("p20", self.p20),
            ("pu", self.pu),
            ("pv", self.pv),
            ("p13", self.p13),
            ("p23", self.p23),
            ("c2", self.c2),
            ("c3", self.c3),
            ("d2", self.d2),
            ("d3", self.d3),
        ] {
            check_non_negative("PdfAllocation", name, v)?;
        }
        Ok(())
    }

    /// Average power spent by each user over one block.
    pub fn power_usage(&self, slots: &TimeSlots) -> (f64, f64) {
        let used1 = slots.a1 * (self.p10 + self.pu)
            + slots.a3 * (self.p13 + self.c2 * self.pu + self.c3 * self.pv);
        let used2 = slots.a2 * (self.p20 + self.pv)
            + slots.a3 * (self.p23 + self.d3 * self.pu + self.d2 * self.pv);
        (used1, used2)
    }

    pub const FIELD_NAMES: [&'static str; 10] =
        ["p10", "p20", "pu", "pv", "p13", "p23", "c2", "c3", "d2", "d3"];

    pub fn fields(&self) -> [f64; 10] {
        [
            self.p10, self.p20, self.pu, self.pv, self.p13, self.p23, self.c2, self.c3, self.d2,
            self.d3,
        ]
    }
}

/// Power split of the decode-forward scheme.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfAllocation {
    pub p12: f64,
    pub p21: f64,
    pub p13: f64,
    pub p23: f64,
    pub ps1: f64,
    pub ps2: f64,
}

impl DfAllocation {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p12", self.p12),
            ("p21", self.p21),
            ("p13", self.p13),
            ("p23", self.p23),
            ("ps1", self.ps1),
            ("ps2", self.ps2),
        ] {
            check_non_negative("DfAllocation", name, v)?;
        }
        Ok(())
    }

    pub fn power_usage(&self, slots: &TimeSlots) -> (f64, f64) {
        let used1 = slots.a1 * self.p12 + slots.a3 * (self.p13 + self.ps1);
        let used2 = slots.a2 * self.p21 + slots.a3 * (self.p23 + self.ps2);
        (used1, used2)
    }

    pub const FIELD_NAMES: [&'static str; 6] = ["p12", "p21", "p13", "p23", "ps1", "ps2"];

    pub fn fields(&self) -> [f64; 6] {
        [self.p12, self.p21, self.p13, self.p23, self.ps1, self.ps2]
    }
}

/// Either scheme's allocation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Allocation {
    Pdf(PdfAllocation),
    Df(DfAllocation),
}

impl Allocation {
    pub fn power_usage(&self, slots: &TimeSlots) -> (f64, f64) {
        match self {
            Allocation::Pdf(a) => a.power_usage(slots),
            Allocation::Df(a) => a.power_usage(slots),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Allocation::Pdf(a) => a.validate(),
            Allocation::Df(a) => a.validate(),
        }
    }

    pub fn field_names(&self) -> &'static [&'static str] {
        match self {
            Allocation::Pdf(_) => &PdfAllocation::FIELD_NAMES,
            Allocation::Df(_) => &DfAllocation::FIELD_NAMES,
        }
    }

    pub fn field_values(&self) -> Vec<f64> {
        match self {
            Allocation::Pdf(a) => a.fields().to_vec(),
            Allocation::Df(a) => a.fields().to_vec(),
        }
    }
}

/// Average power budgets of the two users.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerBudget {
    pub p1: f64,
    pub p2: f64,
}

impl PowerBudget {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        let b = Self { p1, p2 };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p1", self.p1), ("p2", self.p2)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(
                    "PowerBudget",
                    format!("{name} must be finite and > 0, got {v}"),
                ));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            p1: self.p1 * factor,
            p2: self.p2 * factor,
        }
    }
}

/// Result of a power budget check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerUsage {
    pub used1: f64,
    pub used2: f64,
    pub feasible: bool,
}

/// Average power of both users and whether it fits the budget within
/// [`POWER_TOL`].
pub fn power_feasible(slots: &TimeSlots, alloc: &Allocation, budget: &PowerBudget) -> PowerUsage {
    let (used1, used2) = alloc.power_usage(slots);
    PowerUsage {
        used1,
        used2,
        feasible: used1 <= budget.p1 + POWER_TOL && used2 <= budget.p2 + POWER_TOL,
    }
}

/// Upper bounds of the forms `R1 <= a`, `R2 <= b`, `R1 + R2 <= s`.
///
/// Lists are kept unreduced so callers can see which constraint is active.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRegion {
    pub r1_bounds: Vec<f64>,
    pub r2_bounds: Vec<f64>,
    pub sum_bounds: Vec<f64>,
}

impl LinearRegion {
    pub fn new(r1_bounds: Vec<f64>, r2_bounds: Vec<f64>, sum_bounds: Vec<f64>) -> Result<Self> {
        let r = Self {
            r1_bounds,
            r2_bounds,
            sum_bounds,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, list) in [
            ("r1_bounds", &self.r1_bounds),
            ("r2_bounds", &self.r2_bounds),
            ("sum_bounds", &self.sum_bounds),
        ] {
            if list.is_empty() {
                return Err(Error::invalid("LinearRegion", format!("{name} is empty")));
            }
            if let Some(v) = list.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::invalid(
                    "LinearRegion",
                    format!("{name} holds {v}; bounds must be finite and >= 0"),
                ));
            }
        }
        Ok(())
    }

    pub fn min_r1(&self) -> f64 {
        min_of(&self.r1_bounds)
    }

    pub fn min_r2(&self) -> f64 {
        min_of(&self.r2_bounds)
    }

    pub fn min_sum(&self) -> f64 {
        min_of(&self.sum_bounds)
    }

    /// All bounds in reporting order: r1 bounds, r2 bounds, sum bounds.
    pub fn all_bounds(&self) -> Vec<f64> {
        self.r1_bounds
            .iter()
            .chain(&self.r2_bounds)
            .chain(&self.sum_bounds)
            .copied()
            .collect()
    }

    pub fn polygon(&self) -> RatePolygon {
        polygon_from_constraints(self)
    }

    /// Largest `mu1*r1 + mu2*r2` over the region, in closed form.
    pub fn weighted_value(&self, mu1: f64, mu2: f64) -> f64 {
        weighted_value_abs(self.min_r1(), self.min_r2(), self.min_sum(), mu1, mu2)
    }
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Support function of `{R >= 0 : R1 <= a, R2 <= b, R1 + R2 <= s}` for
/// non-negative weights.
#[inline]
pub(crate) fn weighted_value_abs(a: f64, b: f64, s: f64, mu1: f64, mu2: f64) -> f64 {
    let a = a.min(s);
    let b = b.min(s);
    let ab = (a + b).min(s);
    if mu1 >= mu2 {
        (mu1 - mu2) * a + mu2 * ab
    } else {
        (mu2 - mu1) * b + mu1 * ab
    }
}

/// A rate pair in bits per channel use.
pub type RatePoint = (f64, f64);

/// Vertex list of a convex rate region that contains the origin.
///
/// Vertices run counter-clockwise from the origin, then along the `R1`
/// axis. Degenerate regions hold a single segment from the origin or the
/// origin alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePolygon {
    pub vertices: Vec<RatePoint>,
}

impl RatePolygon {
    pub fn origin() -> Self {
        Self {
            vertices: vec![(0.0, 0.0)],
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn max_r1(&self) -> f64 {
        self.vertices.iter().map(|v| v.0).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.vertices.iter().map(|v| v.1).fold(0.0, f64::max)
    }
}

/// Vertices of `{(R1, R2) >= 0 : R1 <= min r1, R2 <= min r2, R1 + R2 <= min sum}`.
pub fn polygon_from_constraints(region: &LinearRegion) -> RatePolygon {
    let s = region.min_sum().max(0.0);
    let a = region.min_r1().max(0.0).min(s);
    let b = region.min_r2().max(0.0).min(s);

    let vertices = match (a > 0.0, b > 0.0) {
        (false, false) => vec![(0.0, 0.0)],
        (false, true) => vec![(0.0, 0.0), (0.0, b)],
        (true, false) => vec![(0.0, 0.0), (a, 0.0)],
        (true, true) if s >= a + b => vec![(0.0, 0.0), (a, 0.0), (a, b), (0.0, b)],
        (true, true) => {
            let mut v = vec![(0.0, 0.0), (a, 0.0)];
            // a == s collapses the corner onto the R1 axis, b == s onto the R2 axis.
            if s - a > 0.0 {
                v.push((a, s - a));
            }
            if s - b > 0.0 {
                v.push((s - b, b));
            }
            v.push((0.0, b));
            v
        }
    };
    RatePolygon { vertices }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn c_gauss_examples() {
        assert_eq!(c_gauss(0.0).unwrap(), 0.0);
        assert!(close(c_gauss(3.0).unwrap(), 1.0, 1e-15));
        // 0.5 * log2(5)
        assert!(close(c_gauss(4.0).unwrap(), 1.160_964_047_443_681_2, 1e-14));
        assert!(matches!(c_gauss(-1e-3), Err(Error::Domain(_))));
        assert!(c_gauss(f64::NAN).is_err());
    }

    #[test]
    fn power_feasible_examples() {
        let slots = TimeSlots::new(0.2, 0.2, 0.6).unwrap();
        let budget = PowerBudget::new(2.0, 2.0).unwrap();

        let zero = Allocation::Pdf(PdfAllocation::default());
        let u = power_feasible(&slots, &zero, &budget);
        assert_eq!((u.used1, u.used2, u.feasible), (0.0, 0.0, true));

        let mut df = DfAllocation {
            p12: 4.0,
            p21: 4.0,
            p13: 1.0,
            p23: 1.0,
            ps1: 1.0,
            ps2: 1.0,
        };
        let u = power_feasible(&slots, &Allocation::Df(df), &budget);
        assert!(close(u.used1, 2.0, 1e-12) && close(u.used2, 2.0, 1e-12));
        assert!(u.feasible);

        df.p12 = 5.0;
        let u = power_feasible(&slots, &Allocation::Df(df), &budget);
        assert!(close(u.used1, 2.2, 1e-12) && close(u.used2, 2.0, 1e-12));
        assert!(!u.feasible);
    }

    #[test]
    fn pdf_power_identity() {
        let slots = TimeSlots::new(0.25, 0.25, 0.5).unwrap();
        let a = PdfAllocation {
            p10: 1.0,
            p20: 0.5,
            pu: 2.0,
            pv: 1.0,
            p13: 0.5,
            p23: 0.25,
            c2: 0.5,
            c3: 1.0,
            d2: 0.5,
            d3: 0.25,
        };
        let (u1, u2) = a.power_usage(&slots);
        // 0.25*3 + 0.5*(0.5 + 1 + 1), 0.25*1.5 + 0.5*(0.25 + 0.5 + 0.5)
        assert!(close(u1, 2.0, 1e-12));
        assert!(close(u2, 1.0, 1e-12));
    }

    #[test]
    fn polygon_examples() {
        let r = LinearRegion::new(vec![1.0], vec![1.0], vec![2.0]).unwrap();
        assert_eq!(
            polygon_from_constraints(&r).vertices,
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        );

        let r = LinearRegion::new(vec![0.709], vec![0.709], vec![1.293]).unwrap();
        let p = polygon_from_constraints(&r).vertices;
        let want = [(0.0, 0.0), (0.709, 0.0), (0.709, 0.584), (0.584, 0.709), (0.0, 0.709)];
        assert_eq!(p.len(), 5);
        for (got, w) in p.iter().zip(want) {
            assert!(close(got.0, w.0, 1e-12) && close(got.1, w.1, 1e-12), "{got:?} vs {w:?}");
        }

        let r = LinearRegion::new(vec![0.0], vec![1.0], vec![1.0]).unwrap();
        assert_eq!(polygon_from_constraints(&r).vertices, vec![(0.0, 0.0), (0.0, 1.0)]);

        let r = LinearRegion::new(vec![0.0], vec![0.0], vec![3.0]).unwrap();
        assert_eq!(polygon_from_constraints(&r), RatePolygon::origin());
    }

    #[test]
    fn polygon_uses_minimum_of_each_family() {
        let r = LinearRegion::new(vec![2.0, 0.5], vec![3.0, 1.0], vec![9.0, 1.2]).unwrap();
        let p = polygon_from_constraints(&r).vertices;
        assert_eq!(p[1], (0.5, 0.0));
        assert_eq!(*p.last().unwrap(), (0.0, 1.0));
    }

    #[test]
    fn polygon_sum_equal_to_single_bound() {
        // s == a: the corner sits on the R1 axis and is not repeated.
        let r = LinearRegion::new(vec![1.0], vec![0.5], vec![1.0]).unwrap();
        assert_eq!(
            polygon_from_constraints(&r).vertices,
            vec![(0.0, 0.0), (1.0, 0.0), (0.5, 0.5), (0.0, 0.5)]
        );
    }

    #[test]
    fn linear_region_validation() {
        assert!(LinearRegion::new(vec![], vec![1.0], vec![1.0]).is_err());
        assert!(LinearRegion::new(vec![-0.1], vec![1.0], vec![1.0]).is_err());
        assert!(LinearRegion::new(vec![f64::INFINITY], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn type_invariants() {
        assert!(TimeSlots::new(0.5, 0.6, 0.0).is_err());
        assert!(TimeSlots::new(-0.1, 0.6, 0.5).is_err());
        assert!(TimeSlots::from_pair(0.3, 0.3).is_ok());
        assert!(ChannelGains::new(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ChannelGains::new(-1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PowerBudget::new(0.0, 1.0).is_err());
        let bad = PdfAllocation {
            c3: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn weighted_value_matches_vertex_scan() {
        let r = LinearRegion::new(vec![0.709], vec![0.6], vec![1.1]).unwrap();
        let poly = r.polygon();
        for (m1, m2) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (0.3, 0.9), (2.0, 0.1)] {
            let scan = poly
                .vertices
                .iter()
                .map(|v| m1 * v.0 + m2 * v.1)
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(close(scan, r.weighted_value(m1, m2), 1e-14));
        }
    }
}
