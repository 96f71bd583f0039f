//! Structural claims about the Gaussian regions turned into pass/fail
//! verdicts with a measured slack and a replayable witness.
//!
//! Every check records the witness that produced its worst slack. A
//! witness holds the gains, budget and operating points needed to evaluate
//! the slack again without rerunning any search, see [`Witness::replay`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    Allocation, ChannelGains, DfAllocation, LinearRegion, PdfAllocation, PowerBudget,
    RatePolygon, TimeSlots,
};
use crate::error::Result;
use crate::gaussian::NoiseCorrelation;
use crate::hull::region_contains;
use crate::optimizer::{frontier_with_starts, Evaluator, Frontier, OptResult, Scheme, SearchConfig};
use crate::sampling::{random_df_point, random_pdf_point};

/// Tolerance of fixed-allocation containment checks.
pub const CONTAINMENT_TOL: f64 = 1e-9;
/// Tolerance of per-direction agreement between optimized frontiers.
pub const FRONTIER_TOL: f64 = 1e-3;
/// Tolerance of hull containment between optimized frontiers.
pub const HULL_TOL: f64 = 1e-6;
/// Smallest region gap that counts as strict.
pub const STRICT_GAP: f64 = 1e-6;
/// Tolerance of bound identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Tolerance of objective preservation under a mapping.
pub const MAPPING_TOL: f64 = 1e-9;

/// One operating point of one scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionInstance {
    pub scheme: Scheme,
    pub slots: TimeSlots,
    pub allocation: Allocation,
}

impl RegionInstance {
    pub fn new(scheme: Scheme, slots: TimeSlots, allocation: Allocation) -> Self {
        Self {
            scheme,
            slots,
            allocation,
        }
    }

    fn of(r: &OptResult) -> Self {
        Self::new(r.scheme, r.slots, r.allocation.clone())
    }

    pub fn region(&self, g: &ChannelGains, budget: &PowerBudget) -> Result<LinearRegion> {
        Evaluator::new(g, budget, self.scheme)?.region_for(&self.slots, &self.allocation)
    }

    pub fn bounds(&self, g: &ChannelGains, budget: &PowerBudget) -> Result<[f64; 6]> {
        Evaluator::new(g, budget, self.scheme)?.bounds_for(&self.slots, &self.allocation)
    }
}

/// Data that reproduces the slack of a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Slack of `inner`'s polygon inside `outer`'s polygon.
    Containment {
        gains: ChannelGains,
        budget: PowerBudget,
        outer: RegionInstance,
        inner: RegionInstance,
    },
    /// How far `larger`'s polygon sticks out of `smaller`'s, minus `min_gap`.
    StrictGap {
        gains: ChannelGains,
        budget: PowerBudget,
        larger: RegionInstance,
        smaller: RegionInstance,
        min_gap: f64,
    },
    /// Minus the largest difference between the six raw bounds.
    BoundEquality {
        gains: ChannelGains,
        budget: PowerBudget,
        a: RegionInstance,
        b: RegionInstance,
    },
    /// Minus the largest gap in average power between a point and its
    /// image, or the budget overrun of the image if larger.
    PowerMatch {
        budget: PowerBudget,
        source: RegionInstance,
        image: RegionInstance,
    },
    /// Weighted value of the image minus that of the source.
    MappedObjective {
        gains: ChannelGains,
        budget: PowerBudget,
        mu: (f64, f64),
        source: RegionInstance,
        image: RegionInstance,
    },
    /// Minus the difference of two weighted values.
    FrontierPair {
        gains: ChannelGains,
        budget: PowerBudget,
        mu: (f64, f64),
        a: RegionInstance,
        b: RegionInstance,
    },
    /// Slack of one hull inside another.
    HullContainment { outer: RatePolygon, inner: RatePolygon },
}

impl Witness {
    /// Evaluates the slack this witness stands for.
    pub fn replay(&self) -> Result<f64> {
        match self {
            Witness::Containment {
                gains,
                budget,
                outer,
                inner,
            } => {
                let o = outer.region(gains, budget)?.polygon();
                let i = inner.region(gains, budget)?.polygon();
                Ok(region_contains(&o, &i, 0.0).worst_slack)
            }
            Witness::StrictGap {
                gains,
                budget,
                larger,
                smaller,
                min_gap,
            } => {
                let l = larger.region(gains, budget)?.polygon();
                let s = smaller.region(gains, budget)?.polygon();
                Ok(-region_contains(&s, &l, 0.0).worst_slack - min_gap)
            }
            Witness::BoundEquality { gains, budget, a, b } => {
                let x = a.bounds(gains, budget)?;
                let y = b.bounds(gains, budget)?;
                Ok(-x
                    .iter()
                    .zip(&y)
                    .map(|(p, q)| (p - q).abs())
                    .fold(0.0, f64::max))
            }
            Witness::PowerMatch {
                budget,
                source,
                image,
            } => {
                let (s1, s2) = source.allocation.power_usage(&source.slots);
                let (i1, i2) = image.allocation.power_usage(&image.slots);
                Ok((-(s1 - i1).abs())
                    .min(-(s2 - i2).abs())
                    .min(budget.p1 - i1)
                    .min(budget.p2 - i2))
            }
            Witness::MappedObjective {
                gains,
                budget,
                mu,
                source,
                image,
            } => {
                let s = source.region(gains, budget)?.weighted_value(mu.0, mu.1);
                let i = image.region(gains, budget)?.weighted_value(mu.0, mu.1);
                Ok(i - s)
            }
            Witness::FrontierPair {
                gains,
                budget,
                mu,
                a,
                b,
            } => {
                let x = a.region(gains, budget)?.weighted_value(mu.0, mu.1);
                let y = b.region(gains, budget)?.weighted_value(mu.0, mu.1);
                Ok(-(x - y).abs())
            }
            Witness::HullContainment { outer, inner } => {
                Ok(region_contains(outer, inner, 0.0).worst_slack)
            }
        }
    }
}

/// One family of checks inside a claim, summarized by its worst member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Number of instances evaluated.
    pub evaluated: usize,
    pub worst_slack: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witness: Witness,
}

/// A named number reported alongside a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
}

/// Outcome of one claim.
///
/// `pass` holds exactly when `worst_slack >= -tolerance`, where the worst
/// check is the one with the smallest margin `slack + tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub tag: String,
    pub applicable: bool,
    pub pass: bool,
    pub worst_slack: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
    pub checks: Vec<Check>,
    pub metrics: Vec<Metric>,
    pub note: Option<String>,
}

impl Verdict {
    fn from_checks(tag: &str, checks: Vec<Check>, metrics: Vec<Metric>) -> Self {
        let worst = checks.iter().min_by(|a, b| {
            (a.worst_slack + a.tolerance).total_cmp(&(b.worst_slack + b.tolerance))
        });
        let (worst_slack, tolerance, witness) = match worst {
            Some(c) => (c.worst_slack, c.tolerance, Some(c.witness.clone())),
            None => (0.0, 0.0, None),
        };
        Self {
            tag: tag.to_string(),
            applicable: true,
            pass: worst_slack >= -tolerance,
            worst_slack,
            tolerance,
            witness,
            checks,
            metrics,
            note: None,
        }
    }

    fn not_applicable(tag: &str, note: String) -> Self {
        Self {
            tag: tag.to_string(),
            applicable: false,
            pass: true,
            worst_slack: 0.0,
            tolerance: 0.0,
            witness: None,
            checks: Vec::new(),
            metrics: Vec::new(),
            note: Some(note),
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    evaluated: usize,
    worst: Option<(f64, Witness)>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            evaluated: 0,
            worst: None,
        }
    }

    /// Evaluates the witness and keeps it if it is the worst so far.
    fn record(&mut self, w: Witness) -> Result<f64> {
        let slack = w.replay()?;
        self.evaluated += 1;
        if self.worst.as_ref().is_none_or(|(s, _)| slack < *s) {
            self.worst = Some((slack, w));
        }
        Ok(slack)
    }

    fn finish(self, out: &mut Vec<Check>) {
        if let Some((worst_slack, witness)) = self.worst {
            out.push(Check {
                name: self.name.to_string(),
                evaluated: self.evaluated,
                worst_slack,
                tolerance: self.tolerance,
                pass: worst_slack >= -self.tolerance,
                witness,
            });
        }
    }
}

fn metric(name: &str, value: f64) -> Metric {
    Metric {
        name: name.to_string(),
        value,
    }
}

fn frontier_pairs(
    g: &ChannelGains,
    budget: &PowerBudget,
    a: &Frontier,
    b: &Frontier,
    tally: &mut Tally,
) -> Result<f64> {
    let mut worst_gap: f64 = 0.0;
    for (x, y) in a.results.iter().zip(&b.results) {
        let s = tally.record(Witness::FrontierPair {
            gains: *g,
            budget: *budget,
            mu: x.mu,
            a: RegionInstance::of(x),
            b: RegionInstance::of(y),
        })?;
        worst_gap = worst_gap.max(-s);
    }
    Ok(worst_gap)
}

fn hull_check(outer: &RatePolygon, inner: &RatePolygon, tally: &mut Tally) -> Result<f64> {
    tally.record(Witness::HullContainment {
        outer: outer.clone(),
        inner: inner.clone(),
    })
}

/// Image of a partial decode-forward point under the substitution that
/// merges each user's public and private early-slot powers and re-sends
/// both public messages through one cooperative codeword.
pub fn pdf_to_df(a: &PdfAllocation) -> DfAllocation {
    DfAllocation {
        p12: a.p10 + a.pu,
        p21: a.p20 + a.pv,
        p13: a.p13,
        p23: a.p23,
        ps1: a.c2 * a.pu + a.c3 * a.pv,
        ps2: a.d3 * a.pu + a.d2 * a.pv,
    }
}

/// Which public message a decode-forward point is folded into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyAuxiliary {
    /// User 2's public message is empty; everything rides on user 1's.
    V,
    /// User 1's public message is empty.
    U,
}

/// Image of a decode-forward point with one public message set empty.
///
/// The user whose message remains sends only public power in its early
/// slot; both cooperative powers re-send that message. With no public power
/// to re-send, cooperative power becomes private power.
pub fn df_to_pdf(a: &DfAllocation, empty: EmptyAuxiliary) -> PdfAllocation {
    let div = |x: f64, y: f64| if y > 0.0 { x / y } else { 0.0 };
    match empty {
        EmptyAuxiliary::V => {
            let pu = a.p12;
            let (p13, p23) = if pu > 0.0 {
                (a.p13, a.p23)
            } else {
                (a.p13 + a.ps1, a.p23 + a.ps2)
            };
            PdfAllocation {
                p10: 0.0,
                p20: a.p21,
                pu,
                pv: 0.0,
                p13,
                p23,
                c2: div(a.ps1, pu),
                c3: 0.0,
                d2: 0.0,
                d3: div(a.ps2, pu),
            }
        }
        EmptyAuxiliary::U => {
            let pv = a.p21;
            let (p13, p23) = if pv > 0.0 {
                (a.p13, a.p23)
            } else {
                (a.p13 + a.ps1, a.p23 + a.ps2)
            };
            PdfAllocation {
                p10: a.p12,
                p20: 0.0,
                pu: 0.0,
                pv,
                p13,
                p23,
                c2: 0.0,
                c3: div(a.ps1, pv),
                d2: div(a.ps2, pv),
                d3: 0.0,
            }
        }
    }
}

/// The middle sum bound that is strictly the smallest, if any.
fn binding_middle(b: &[f64; 6]) -> Option<EmptyAuxiliary> {
    let others = b[2].min(b[5]);
    if b[3] < others - IDENTITY_TOL && b[3] <= b[4] {
        Some(EmptyAuxiliary::V)
    } else if b[4] < others - IDENTITY_TOL && b[4] < b[3] {
        Some(EmptyAuxiliary::U)
    } else {
        None
    }
}

/// Optimized partial decode-forward and decode-forward frontiers agree, and
/// the power substitution between the two schemes keeps the power budget
/// and does not lose weighted rate.
///
/// The forward image of a partial decode-forward point can only gain, so
/// that check is one-sided. The reverse image is checked only where a
/// middle sum bound binds the decode-forward point.
pub fn verify_pdf_df_equivalence(
    g: &ChannelGains,
    budget: &PowerBudget,
    cfg: &SearchConfig,
    weight_count: usize,
) -> Result<Verdict> {
    let pdf = frontier_with_starts(g, budget, Scheme::PdfJoint, weight_count, cfg, &[])?;
    let df = frontier_with_starts(g, budget, Scheme::Df, weight_count, cfg, &[])?;
    let ev_df = Evaluator::new(g, budget, Scheme::Df)?;

    let mut agree = Tally::new("frontier_agreement", FRONTIER_TOL);
    let gap = frontier_pairs(g, budget, &pdf, &df, &mut agree)?;

    let mut fwd_power = Tally::new("forward_power", MAPPING_TOL);
    let mut fwd_obj = Tally::new("forward_objective", MAPPING_TOL);
    for r in &pdf.results {
        let Allocation::Pdf(a) = &r.allocation else {
            unreachable!("partial decode-forward frontier holds partial decode-forward points")
        };
        let source = RegionInstance::of(r);
        let image = RegionInstance::new(Scheme::Df, r.slots, Allocation::Df(pdf_to_df(a)));
        fwd_power.record(Witness::PowerMatch {
            budget: *budget,
            source: source.clone(),
            image: image.clone(),
        })?;
        fwd_obj.record(Witness::MappedObjective {
            gains: *g,
            budget: *budget,
            mu: r.mu,
            source,
            image,
        })?;
    }

    let mut rev_power = Tally::new("reverse_power", MAPPING_TOL);
    let mut rev_obj = Tally::new("reverse_objective", MAPPING_TOL);
    for r in &df.results {
        let Allocation::Df(a) = &r.allocation else {
            unreachable!("decode-forward frontier holds decode-forward points")
        };
        let b = ev_df.bounds_for(&r.slots, &r.allocation)?;
        let Some(empty) = binding_middle(&b) else {
            continue;
        };
        let source = RegionInstance::of(r);
        let image =
            RegionInstance::new(Scheme::PdfJoint, r.slots, Allocation::Pdf(df_to_pdf(a, empty)));
        rev_power.record(Witness::PowerMatch {
            budget: *budget,
            source: source.clone(),
            image: image.clone(),
        })?;
        rev_obj.record(Witness::MappedObjective {
            gains: *g,
            budget: *budget,
            mu: r.mu,
            source,
            image,
        })?;
    }
    let reverse_count = rev_power.evaluated;

    let mut checks = Vec::new();
    for t in [agree, fwd_power, fwd_obj, rev_power, rev_obj] {
        t.finish(&mut checks);
    }
    Ok(Verdict::from_checks(
        "pdf_df_equivalence",
        checks,
        vec![
            metric("max_frontier_gap", gap),
            metric("reverse_mapped", reverse_count as f64),
        ],
    ))
}

/// Over random operating points, the separate-decoding region lies inside
/// the joint-decoding region. When some user hears its partner better than
/// the destination does, at least one point must show a gap above
/// [`STRICT_GAP`].
pub fn verify_joint_dominates_separate(
    g: &ChannelGains,
    budget: &PowerBudget,
    samples: usize,
    seed: u64,
) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut contain = Tally::new("separate_in_joint", CONTAINMENT_TOL);
    let mut strict = Tally::new("strict_gap", 0.0);
    let expect_gap = g.k12 > g.k10 || g.k21 > g.k20;
    for _ in 0..samples {
        let (s, a) = random_pdf_point(&mut rng, budget);
        let joint = RegionInstance::new(Scheme::PdfJoint, s, Allocation::Pdf(a));
        let sep = RegionInstance::new(Scheme::PdfSeparate, s, Allocation::Pdf(a));
        contain.record(Witness::Containment {
            gains: *g,
            budget: *budget,
            outer: joint.clone(),
            inner: sep.clone(),
        })?;
        if expect_gap {
            let w = Witness::StrictGap {
                gains: *g,
                budget: *budget,
                larger: joint,
                smaller: sep,
                min_gap: STRICT_GAP,
            };
            // The best gap is the one that matters, so track its negation.
            let gap = w.replay()?;
            strict.evaluated += 1;
            if strict.worst.as_ref().is_none_or(|(s, _)| gap > *s) {
                strict.worst = Some((gap, w));
            }
        }
    }
    let max_gap = strict
        .worst
        .as_ref()
        .map(|(s, _)| s + STRICT_GAP)
        .unwrap_or(0.0);
    let mut checks = Vec::new();
    contain.finish(&mut checks);
    strict.finish(&mut checks);
    Ok(Verdict::from_checks(
        "joint_dominates_separate",
        checks,
        vec![metric("max_gap", max_gap)],
    ))
}

/// The optimized decode-forward hull lies inside the optimized outer-bound
/// hull. Reports the sum-rate gap at equal weights.
///
/// The outer search is warm-started from the decode-forward optima, which
/// are feasible for it.
pub fn verify_achievable_in_outer(
    g: &ChannelGains,
    budget: &PowerBudget,
    cfg: &SearchConfig,
    weight_count: usize,
) -> Result<Verdict> {
    let df = frontier_with_starts(g, budget, Scheme::Df, weight_count, cfg, &[])?;
    let starts: Vec<Vec<f64>> = df.results.iter().map(|r| r.params.clone()).collect();
    let outer = frontier_with_starts(g, budget, Scheme::Outer, weight_count, cfg, &starts)?;
    let mut hull = Tally::new("df_hull_in_outer_hull", HULL_TOL);
    hull_check(&outer.hull, &df.hull, &mut hull)?;
    let gap = sum_rate_gap(g, budget, cfg, &starts)?;
    let mut checks = Vec::new();
    hull.finish(&mut checks);
    Ok(Verdict::from_checks(
        "achievable_in_outer",
        checks,
        vec![metric("sum_rate_gap", gap)],
    ))
}

/// Optimized outer-bound sum rate minus optimized decode-forward sum rate.
fn sum_rate_gap(
    g: &ChannelGains,
    budget: &PowerBudget,
    cfg: &SearchConfig,
    df_starts: &[Vec<f64>],
) -> Result<f64> {
    use crate::optimizer::optimize_directions;
    let mu = [(1.0, 1.0)];
    let df = optimize_directions(g, budget, Scheme::Df, &mu, cfg, df_starts)?;
    let mut starts = df_starts.to_vec();
    starts.push(df[0].params.clone());
    let outer = optimize_directions(g, budget, Scheme::Outer, &mu, cfg, &starts)?;
    Ok(outer[0].objective - df[0].objective)
}

/// Sum-rate gap between the optimized outer bound and decode-forward at
/// equal weights.
pub fn outer_sum_rate_gap(
    g: &ChannelGains,
    budget: &PowerBudget,
    cfg: &SearchConfig,
) -> Result<f64> {
    sum_rate_gap(g, budget, cfg, &[])
}

/// With the degrading noise correlation, the correlated outer bound equals
/// decode-forward bound by bound at every sampled point, and the optimized
/// hulls coincide.
pub fn verify_degraded_capacity(
    g: &ChannelGains,
    budget: &PowerBudget,
    cfg: &SearchConfig,
    weight_count: usize,
    samples: usize,
) -> Result<Verdict> {
    const TAG: &str = "degraded_capacity";
    if !(g.k12 > g.k10 && g.k21 > g.k20) {
        return Ok(Verdict::not_applicable(
            TAG,
            format!(
                "needs k12 > k10 and k21 > k20, got k12={}, k10={}, k21={}, k20={}",
                g.k12, g.k10, g.k21, g.k20
            ),
        ));
    }
    let rho = NoiseCorrelation::degrading(g)?;
    let degraded = Scheme::DegradedOuter(rho);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut eq = Tally::new("bound_equality", IDENTITY_TOL);
    for _ in 0..samples {
        let (s, a) = random_df_point(&mut rng, budget);
        eq.record(Witness::BoundEquality {
            gains: *g,
            budget: *budget,
            a: RegionInstance::new(degraded, s, Allocation::Df(a)),
            b: RegionInstance::new(Scheme::Df, s, Allocation::Df(a)),
        })?;
    }
    let df = frontier_with_starts(g, budget, Scheme::Df, weight_count, cfg, &[])?;
    let starts: Vec<Vec<f64>> = df.results.iter().map(|r| r.params.clone()).collect();
    let deg = frontier_with_starts(g, budget, degraded, weight_count, cfg, &starts)?;
    let mut df_in = Tally::new("df_hull_in_degraded_hull", HULL_TOL);
    let mut deg_in = Tally::new("degraded_hull_in_df_hull", HULL_TOL);
    hull_check(&deg.hull, &df.hull, &mut df_in)?;
    hull_check(&df.hull, &deg.hull, &mut deg_in)?;
    let mut checks = Vec::new();
    for t in [eq, df_in, deg_in] {
        t.finish(&mut checks);
    }
    Ok(Verdict::from_checks(
        TAG,
        checks,
        vec![metric("rho1", rho.rho1), metric("rho2", rho.rho2)],
    ))
}

/// Full decoding of the partner's message at each user does at least as
/// well as decoding only its public part, and the optimized frontiers of
/// the two coincide.
///
/// The fixed-point containment is checked only when both users hear their
/// partner better than the destination does, on points with nonzero
/// private early-slot power.
pub fn verify_full_vs_partial_user_decoding(
    g: &ChannelGains,
    budget: &PowerBudget,
    cfg: &SearchConfig,
    weight_count: usize,
    samples: usize,
) -> Result<Verdict> {
    let mut contain = Tally::new("partial_in_full", CONTAINMENT_TOL);
    if g.k12 > g.k10 && g.k21 > g.k20 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut taken = 0;
        while taken < samples {
            let (s, a) = random_pdf_point(&mut rng, budget);
            if !(a.p10 > 0.0 && a.p20 > 0.0) {
                continue;
            }
            taken += 1;
            contain.record(Witness::Containment {
                gains: *g,
                budget: *budget,
                outer: RegionInstance::new(Scheme::PdfJoint, s, Allocation::Pdf(a)),
                inner: RegionInstance::new(Scheme::PdfPartial, s, Allocation::Pdf(a)),
            })?;
        }
    }
    let full = frontier_with_starts(g, budget, Scheme::PdfJoint, weight_count, cfg, &[])?;
    let partial = frontier_with_starts(g, budget, Scheme::PdfPartial, weight_count, cfg, &[])?;
    let mut agree = Tally::new("frontier_agreement", FRONTIER_TOL);
    let gap = frontier_pairs(g, budget, &full, &partial, &mut agree)?;
    let mut checks = Vec::new();
    contain.finish(&mut checks);
    agree.finish(&mut checks);
    Ok(Verdict::from_checks(
        "full_vs_partial_user_decoding",
        checks,
        vec![metric("max_frontier_gap", gap)],
    ))
}
