//! Closed-form Gaussian rate regions and outer bounds for a fixed slot
//! split and power allocation.
//!
//! Every two-user region has the same six-bound layout: one bound on `R1`,
//! one on `R2`, then four sum-rate bounds. Bound 3 uses cooperative terms
//! in both early slots, bound 4 replaces user 1's term by its direct-link
//! term, bound 5 does the same for user 2, bound 6 for both.

use serde::{Deserialize, Serialize};

use crate::channel::{
    cap, slot_term, sqrt_clamped, ChannelGains, DfAllocation, LinearRegion, PdfAllocation,
    PowerBudget, RatePolygon, TimeSlots,
};
use crate::error::{Error, Result};
use crate::hull::upper_hull;

/// Correlation between a user's overheard noise and the destination noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseCorrelation {
    pub rho1: f64,
    pub rho2: f64,
}

impl NoiseCorrelation {
    pub fn new(rho1: f64, rho2: f64) -> Result<Self> {
        let r = Self { rho1, rho2 };
        r.validate()?;
        Ok(r)
    }

    pub fn uncorrelated() -> Self {
        Self {
            rho1: 0.0,
            rho2: 0.0,
        }
    }

    /// The correlation that makes the destination's early-slot outputs a
    /// degraded copy of the partner's: `rho1 = k10/k12`, `rho2 = k20/k21`.
    pub fn degrading(g: &ChannelGains) -> Result<Self> {
        if !(g.k12 > g.k10 && g.k21 > g.k20) {
            return Err(Error::invalid(
                "NoiseCorrelation",
                format!(
                    "degrading correlation needs k12 > k10 and k21 > k20, got k12={}, k10={}, k21={}, k20={}",
                    g.k12, g.k10, g.k21, g.k20
                ),
            ));
        }
        Self::new(g.k10 / g.k12, g.k20 / g.k21)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rho1", self.rho1), ("rho2", self.rho2)] {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(Error::invalid(
                    "NoiseCorrelation",
                    format!("{name} must lie in [-1, 1], got {v}"),
                ));
            }
        }
        Ok(())
    }
}

/// How the slot-1 inter-user term of the last separate-decoding bound is read.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum SeparateReading {
    /// `C(k12^2 p10 / N)`, matching the neighbouring bounds.
    #[default]
    DirectPower,
    /// `C(k12^2 P1 / N)` with the user's total power budget `P1`.
    LiteralTotalPower(f64),
}

/// Decoding variants of the partial decode-forward scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum PdfVariant {
    Joint,
    Separate(SeparateReading),
    Partial,
}

pub(crate) fn six_to_region(b: [f64; 6]) -> LinearRegion {
    LinearRegion {
        r1_bounds: vec![b[0]],
        r2_bounds: vec![b[1]],
        sum_bounds: vec![b[2], b[3], b[4], b[5]],
    }
}

pub(crate) fn outer_to_region(b: [f64; 6]) -> LinearRegion {
    LinearRegion {
        r1_bounds: vec![b[0]],
        r2_bounds: vec![b[1]],
        sum_bounds: vec![b[2], b[5]],
    }
}

/// The six bounds of the partial decode-forward scheme.
pub(crate) fn pdf_bounds(
    g: &ChannelGains,
    s: &TimeSlots,
    a: &PdfAllocation,
    variant: PdfVariant,
) -> [f64; 6] {
    let n = g.noise;
    let (k12s, k21s, k10s, k20s) = (g.k12 * g.k12, g.k21 * g.k21, g.k10 * g.k10, g.k20 * g.k20);

    let (coop1, coop2) = match variant {
        PdfVariant::Partial => (
            cap(k12s * a.pu / (k12s * a.p10 + n)) + cap(k10s * a.p10 / n),
            cap(k21s * a.pv / (k21s * a.p20 + n)) + cap(k20s * a.p20 / n),
        ),
        _ => (cap(k12s * (a.pu + a.p10) / n), cap(k21s * (a.pv + a.p20) / n)),
    };
    let (dir1, dir2) = match variant {
        PdfVariant::Separate(reading) => {
            let inter1 = cap(k12s * a.p10 / n);
            let inter2 = cap(k21s * a.p20 / n);
            let own1 = cap(k10s * a.p10 / n);
            let own2 = cap(k20s * a.p20 / n);
            let last1 = match reading {
                SeparateReading::DirectPower => inter1,
                SeparateReading::LiteralTotalPower(p1) => cap(k12s * p1 / n),
            };
            // Bounds 4 and 5 use the slot-wise minimum; bound 6 may differ in reading.
            ((inter1.min(own1), last1.min(own1)), (inter2.min(own2), inter2.min(own2)))
        }
        _ => {
            let d1 = cap(k10s * (a.pu + a.p10) / n);
            let d2 = cap(k20s * (a.pv + a.p20) / n);
            ((d1, d1), (d2, d2))
        }
    };

    let priv1 = cap(k10s * a.p13 / n);
    let priv2 = cap(k20s * a.p23 / n);
    let privs = cap((k10s * a.p13 + k20s * a.p23) / n);
    let kk = 2.0 * g.k10 * g.k20;
    let s3_u = cap(
        (k10s * (a.p13 + a.c2 * a.pu)
            + k20s * (a.p23 + a.d3 * a.pu)
            + kk * sqrt_clamped(a.c2 * a.d3) * a.pu)
            / n,
    );
    let s3_v = cap(
        (k10s * (a.p13 + a.c3 * a.pv)
            + k20s * (a.p23 + a.d2 * a.pv)
            + kk * sqrt_clamped(a.d2 * a.c3) * a.pv)
            / n,
    );
    let u_amp = g.k10 * sqrt_clamped(a.c2) + g.k20 * sqrt_clamped(a.d3);
    let v_amp = g.k10 * sqrt_clamped(a.c3) + g.k20 * sqrt_clamped(a.d2);
    let s3_full =
        cap((k10s * a.p13 + k20s * a.p23 + a.pu * u_amp * u_amp + a.pv * v_amp * v_amp) / n);

    let (t1, t2, t3) = (s.a1, s.a2, s.a3);
    [
        slot_term(t1, coop1) + slot_term(t3, priv1),
        slot_term(t2, coop2) + slot_term(t3, priv2),
        slot_term(t1, coop1) + slot_term(t2, coop2) + slot_term(t3, privs),
        slot_term(t1, dir1.0) + slot_term(t2, coop2) + slot_term(t3, s3_u),
        slot_term(t1, coop1) + slot_term(t2, dir2.0) + slot_term(t3, s3_v),
        slot_term(t1, dir1.1) + slot_term(t2, dir2.1) + slot_term(t3, s3_full),
    ]
}

/// The six bounds of the decode-forward layout with the slot-1 and slot-2
/// cooperative terms taken as `C(snr1 * p12)` and `C(snr2 * p21)`.
pub(crate) fn df_bounds_with(
    g: &ChannelGains,
    s: &TimeSlots,
    a: &DfAllocation,
    snr1: f64,
    snr2: f64,
) -> [f64; 6] {
    let n = g.noise;
    let (k10s, k20s) = (g.k10 * g.k10, g.k20 * g.k20);
    let coop1 = cap(snr1 * a.p12);
    let coop2 = cap(snr2 * a.p21);
    let d1 = cap(k10s * a.p12 / n);
    let d2 = cap(k20s * a.p21 / n);
    let priv1 = cap(k10s * a.p13 / n);
    let priv2 = cap(k20s * a.p23 / n);
    let privs = cap((k10s * a.p13 + k20s * a.p23) / n);
    let coh = cap(
        (k10s * (a.p13 + a.ps1)
            + k20s * (a.p23 + a.ps2)
            + 2.0 * g.k10 * g.k20 * sqrt_clamped(a.ps1 * a.ps2))
            / n,
    );
    let (t1, t2, t3) = (s.a1, s.a2, s.a3);
    [
        slot_term(t1, coop1) + slot_term(t3, priv1),
        slot_term(t2, coop2) + slot_term(t3, priv2),
        slot_term(t1, coop1) + slot_term(t2, coop2) + slot_term(t3, privs),
        slot_term(t1, d1) + slot_term(t2, coop2) + slot_term(t3, coh),
        slot_term(t1, coop1) + slot_term(t2, d2) + slot_term(t3, coh),
        slot_term(t1, d1) + slot_term(t2, d2) + slot_term(t3, coh),
    ]
}

pub(crate) fn df_snr(g: &ChannelGains) -> (f64, f64) {
    (g.k12 * g.k12 / g.noise, g.k21 * g.k21 / g.noise)
}

pub(crate) fn outer_snr(g: &ChannelGains) -> (f64, f64) {
    (
        (g.k12 * g.k12 + g.k10 * g.k10) / g.noise,
        (g.k21 * g.k21 + g.k20 * g.k20) / g.noise,
    )
}

pub(crate) fn degraded_snr(g: &ChannelGains, rho: &NoiseCorrelation) -> Result<(f64, f64)> {
    rho.validate()?;
    for r in [rho.rho1, rho.rho2] {
        if r.abs() >= 1.0 {
            return Err(Error::SingularCorrelation(r));
        }
    }
    let one = |k_inter: f64, k_dir: f64, r: f64| {
        (k_inter * k_inter + k_dir * k_dir - 2.0 * k_dir * k_inter * r) / ((1.0 - r * r) * g.noise)
    };
    Ok((one(g.k12, g.k10, rho.rho1), one(g.k21, g.k20, rho.rho2)))
}

/// Partial decode-forward with full decoding at each user and joint
/// decoding at the destination.
pub fn pdf_joint_region(g: &ChannelGains, slots: &TimeSlots, a: &PdfAllocation) -> LinearRegion {
    six_to_region(pdf_bounds(g, slots, a, PdfVariant::Joint))
}

/// Partial decode-forward with slot-by-slot decoding at the destination.
pub fn pdf_separate_region(g: &ChannelGains, slots: &TimeSlots, a: &PdfAllocation) -> LinearRegion {
    pdf_separate_region_with(g, slots, a, SeparateReading::DirectPower)
}

/// [`pdf_separate_region`] with an explicit reading of the last bound's
/// slot-1 inter-user term.
pub fn pdf_separate_region_with(
    g: &ChannelGains,
    slots: &TimeSlots,
    a: &PdfAllocation,
    reading: SeparateReading,
) -> LinearRegion {
    six_to_region(pdf_bounds(g, slots, a, PdfVariant::Separate(reading)))
}

/// Joint destination decoding where each user decodes only its partner's
/// public part, treating the private part as noise.
pub fn pdf_partial_user_region(
    g: &ChannelGains,
    slots: &TimeSlots,
    a: &PdfAllocation,
) -> LinearRegion {
    six_to_region(pdf_bounds(g, slots, a, PdfVariant::Partial))
}

/// Decode-forward with joint decoding at the destination.
pub fn df_region(g: &ChannelGains, slots: &TimeSlots, a: &DfAllocation) -> LinearRegion {
    let (s1, s2) = df_snr(g);
    six_to_region(df_bounds_with(g, slots, a, s1, s2))
}

/// Outer bound: the decode-forward region with each inter-user power gain
/// increased by the matching direct gain. The two middle sum bounds are
/// redundant and left out.
pub fn gaussian_outer_region(g: &ChannelGains, slots: &TimeSlots, a: &DfAllocation) -> LinearRegion {
    let (s1, s2) = outer_snr(g);
    outer_to_region(df_bounds_with(g, slots, a, s1, s2))
}

/// Outer bound when the partner's overheard noise and the destination noise
/// are correlated. Fails for `|rho| = 1`.
pub fn degraded_outer_region(
    g: &ChannelGains,
    slots: &TimeSlots,
    a: &DfAllocation,
    rho: &NoiseCorrelation,
) -> Result<LinearRegion> {
    let (s1, s2) = degraded_snr(g, rho)?;
    Ok(outer_to_region(df_bounds_with(g, slots, a, s1, s2)))
}

/// Classical schemes that need no cooperation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineKind {
    /// Both users transmit simultaneously for the whole block.
    Mac,
    /// Each user transmits alone for half the block at twice its average power.
    Tdma,
}

/// Region of a classical scheme. The power budget may contain zeros here,
/// which gives a segment or the origin.
pub fn baseline_region(kind: BaselineKind, g: &ChannelGains, budget: &PowerBudget) -> RatePolygon {
    let n = g.noise;
    let (x1, x2) = (g.k10 * g.k10 * budget.p1 / n, g.k20 * g.k20 * budget.p2 / n);
    match kind {
        BaselineKind::Mac => LinearRegion {
            r1_bounds: vec![cap(x1)],
            r2_bounds: vec![cap(x2)],
            sum_bounds: vec![cap(x1 + x2)],
        }
        .polygon(),
        BaselineKind::Tdma => {
            let corner = (0.5 * cap(2.0 * x1), 0.5 * cap(2.0 * x2));
            // Non-empty, non-negative input, so the hull cannot fail.
            upper_hull(&[(cap(x1), 0.0), corner, (0.0, cap(x2))])
                .unwrap_or_else(|_| RatePolygon::origin())
        }
    }
}
