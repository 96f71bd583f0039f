//! Weighted-sum-rate maximization over slot splits and power allocations,
//! and frontier tracing over a fan of weight directions.
//!
//! Every search point is a vector of fractions in `[0, 1]` with
//! `x[0] + x[1] <= 1` (the two early slots). The remaining coordinates say
//! how each user splits its energy budget, so every point meets the power
//! identity with equality and no constraint handling is needed.
//!
//! Decode-forward family, `[a1, a2, f1, g1, f2, g2]`: user 1 spends the
//! fraction `f1` of its energy in slot 1 and the rest in slot 3, of which
//! `g1` is private and `1 - g1` cooperative.
//!
//! Partial decode-forward family, `[a1, a2, f1, h1, q1, s1, f2, h2, q2, s2]`:
//! `f1` as above, `h1` is the public share of the slot-1 power, `q1` the
//! cooperative share of the slot-3 energy, and `s1` the part of that
//! cooperative energy that re-sends user 1's own public message.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    weighted_value_abs, Allocation, ChannelGains, DfAllocation, LinearRegion, PdfAllocation,
    PowerBudget, RatePoint, RatePolygon, TimeSlots,
};
use crate::error::{Error, Result};
use crate::gaussian::{
    degraded_snr, df_bounds_with, df_snr, outer_snr, outer_to_region, pdf_bounds, six_to_region,
    NoiseCorrelation, PdfVariant, SeparateReading,
};
use crate::hull::{upper_hull, weighted_best_vertex};
use crate::polish::polish;

/// Region families the optimizer can maximize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    PdfJoint,
    PdfSeparate,
    /// Separate decoding with the total power `P1` in the last bound's
    /// slot-1 inter-user term.
    PdfSeparateLiteral,
    PdfPartial,
    Df,
    Outer,
    DegradedOuter(NoiseCorrelation),
}

impl Scheme {
    pub fn tag(&self) -> &'static str {
        match self {
            Scheme::PdfJoint => "pdf_joint",
            Scheme::PdfSeparate => "pdf_separate",
            Scheme::PdfSeparateLiteral => "pdf_separate_literal",
            Scheme::PdfPartial => "pdf_partial",
            Scheme::Df => "df",
            Scheme::Outer => "outer",
            Scheme::DegradedOuter(_) => "degraded_outer",
        }
    }

    /// Whether the scheme is searched in the partial decode-forward space.
    pub fn is_pdf(&self) -> bool {
        matches!(
            self,
            Scheme::PdfJoint | Scheme::PdfSeparate | Scheme::PdfSeparateLiteral | Scheme::PdfPartial
        )
    }

    /// Number of search coordinates.
    pub fn dim(&self) -> usize {
        if self.is_pdf() {
            PDF_DIM
        } else {
            DF_DIM
        }
    }
}

pub const DF_DIM: usize = 6;
const LAST_SLOT_EPS: f64 = 1e-13;
pub const PDF_DIM: usize = 10;

/// Search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Grid points per slot axis.
    pub slot_grid: usize,
    /// Grid points per power-fraction axis.
    pub power_grid: usize,
    /// Number of step-shrink rounds of the local search.
    pub refine_iters: usize,
    /// Step multiplier applied after each round.
    pub refine_shrink: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            slot_grid: 11,
            power_grid: 9,
            refine_iters: 60,
            refine_shrink: 0.7,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.slot_grid < 2 || self.power_grid < 2 {
            return Err(Error::invalid("SearchConfig", "grids need at least 2 points"));
        }
        if !(self.refine_shrink > 0.0 && self.refine_shrink < 1.0) {
            return Err(Error::invalid(
                "SearchConfig",
                format!("refine_shrink must lie in (0, 1), got {}", self.refine_shrink),
            ));
        }
        Ok(())
    }
}

/// Best point found for one weight direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub scheme: Scheme,
    pub mu: (f64, f64),
    pub slots: TimeSlots,
    pub allocation: Allocation,
    /// Search coordinates of the best point.
    pub params: Vec<f64>,
    pub vertex: RatePoint,
    pub objective: f64,
    /// Objective evaluations spent, including the shared grid scan.
    pub evaluations: usize,
}

/// Optimized points for a fan of directions and their hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub scheme: Scheme,
    pub results: Vec<OptResult>,
    pub hull: RatePolygon,
}

impl Frontier {
    pub fn points(&self) -> Vec<RatePoint> {
        self.results.iter().map(|r| r.vertex).collect()
    }
}

#[inline]
fn safe_div(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn slots_of(x: &[f64]) -> TimeSlots {
    let a1 = x[0];
    let a2 = x[1];
    let a3 = 1.0 - a1 - a2;
    TimeSlots {
        a1,
        a2,
        // Round-off left over from a1 + a2 = 1 must not open a sliver slot.
        a3: if a3 < LAST_SLOT_EPS { 0.0 } else { a3 },
    }
}

/// Share of a user's energy that goes into its own early slot, given that
/// a slot of zero length cannot carry energy.
#[inline]
fn early_share(f: f64, own: f64, a3: f64) -> f64 {
    if own == 0.0 {
        0.0
    } else if a3 == 0.0 {
        1.0
    } else {
        f
    }
}

/// Decode-forward slots and powers from search coordinates.
pub fn decode_df(x: &[f64], budget: &PowerBudget) -> (TimeSlots, DfAllocation) {
    let s = slots_of(x);
    let f1 = early_share(x[2], s.a1, s.a3);
    let f2 = early_share(x[4], s.a2, s.a3);
    let (e1, e2) = (budget.p1, budget.p2);
    let rest1 = (1.0 - f1) * e1;
    let rest2 = (1.0 - f2) * e2;
    let a = DfAllocation {
        p12: safe_div(f1 * e1, s.a1),
        p21: safe_div(f2 * e2, s.a2),
        p13: safe_div(x[3] * rest1, s.a3),
        ps1: safe_div((1.0 - x[3]) * rest1, s.a3),
        p23: safe_div(x[5] * rest2, s.a3),
        ps2: safe_div((1.0 - x[5]) * rest2, s.a3),
    };
    (s, a)
}

/// Partial decode-forward slots and powers from search coordinates.
pub fn decode_pdf(x: &[f64], budget: &PowerBudget) -> (TimeSlots, PdfAllocation) {
    let s = slots_of(x);
    let f1 = early_share(x[2], s.a1, s.a3);
    let f2 = early_share(x[6], s.a2, s.a3);
    let (e1, e2) = (budget.p1, budget.p2);
    let pu = safe_div(x[3] * f1 * e1, s.a1);
    let p10 = safe_div((1.0 - x[3]) * f1 * e1, s.a1);
    let pv = safe_div(x[7] * f2 * e2, s.a2);
    let p20 = safe_div((1.0 - x[7]) * f2 * e2, s.a2);

    // Cooperative energy re-sends public messages; with nothing to re-send
    // it falls back to the private codeword so the budget stays exact.
    let split = |q: f64, own_share: f64, own_pub: f64, other_pub: f64| -> (f64, f64) {
        match (own_pub > 0.0, other_pub > 0.0) {
            (false, false) => (0.0, 0.0),
            (true, false) => (q, 1.0),
            (false, true) => (q, 0.0),
            (true, true) => (q, own_share),
        }
    };
    let (q1, s1) = split(x[4], x[5], pu, pv);
    let (q2, s2) = split(x[8], x[9], pv, pu);
    let rest1 = (1.0 - f1) * e1;
    let rest2 = (1.0 - f2) * e2;
    let coop1 = safe_div(q1 * rest1, s.a3);
    let coop2 = safe_div(q2 * rest2, s.a3);
    let a = PdfAllocation {
        p10,
        p20,
        pu,
        pv,
        p13: safe_div((1.0 - q1) * rest1, s.a3),
        p23: safe_div((1.0 - q2) * rest2, s.a3),
        c2: safe_div(s1 * coop1, pu),
        c3: safe_div((1.0 - s1) * coop1, pv),
        d2: safe_div(s2 * coop2, pv),
        d3: safe_div((1.0 - s2) * coop2, pu),
    };
    (s, a)
}

/// Slots and allocation for search coordinates of `scheme`.
pub fn decode(scheme: Scheme, x: &[f64], budget: &PowerBudget) -> (TimeSlots, Allocation) {
    if scheme.is_pdf() {
        let (s, a) = decode_pdf(x, budget);
        (s, Allocation::Pdf(a))
    } else {
        let (s, a) = decode_df(x, budget);
        (s, Allocation::Df(a))
    }
}

/// Fast evaluator of the three minimal bounds of a scheme.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator {
    g: ChannelGains,
    budget: PowerBudget,
    scheme: Scheme,
    snr: (f64, f64),
}

impl Evaluator {
    pub fn new(g: &ChannelGains, budget: &PowerBudget, scheme: Scheme) -> Result<Self> {
        g.validate()?;
        budget.validate()?;
        let snr = match scheme {
            Scheme::Df => df_snr(g),
            Scheme::Outer => outer_snr(g),
            Scheme::DegradedOuter(rho) => degraded_snr(g, &rho)?,
            _ => (0.0, 0.0),
        };
        Ok(Self {
            g: *g,
            budget: *budget,
            scheme,
            snr,
        })
    }

    fn pdf_variant(&self) -> PdfVariant {
        match self.scheme {
            Scheme::PdfSeparate => PdfVariant::Separate(SeparateReading::DirectPower),
            Scheme::PdfSeparateLiteral => {
                PdfVariant::Separate(SeparateReading::LiteralTotalPower(self.budget.p1))
            }
            Scheme::PdfPartial => PdfVariant::Partial,
            _ => PdfVariant::Joint,
        }
    }

    /// The six bounds for fixed slots and allocation. For the outer schemes
    /// bounds 4 and 5 are present but never below bound 6.
    pub fn bounds_for(&self, slots: &TimeSlots, alloc: &Allocation) -> Result<[f64; 6]> {
        match (alloc, self.scheme.is_pdf()) {
            (Allocation::Pdf(a), true) => Ok(pdf_bounds(&self.g, slots, a, self.pdf_variant())),
            (Allocation::Df(a), false) => {
                Ok(df_bounds_with(&self.g, slots, a, self.snr.0, self.snr.1))
            }
            _ => Err(Error::invalid(
                "allocation",
                format!("allocation kind does not match scheme {}", self.scheme.tag()),
            )),
        }
    }

    /// Region of the scheme for fixed slots and allocation.
    pub fn region_for(&self, slots: &TimeSlots, alloc: &Allocation) -> Result<LinearRegion> {
        let b = self.bounds_for(slots, alloc)?;
        Ok(match self.scheme {
            Scheme::Outer | Scheme::DegradedOuter(_) => outer_to_region(b),
            _ => six_to_region(b),
        })
    }

    /// The six bounds at search coordinates `x`.
    #[inline]
    pub(crate) fn bounds_at(&self, x: &[f64]) -> [f64; 6] {
        if self.scheme.is_pdf() {
            let (s, a) = decode_pdf(x, &self.budget);
            pdf_bounds(&self.g, &s, &a, self.pdf_variant())
        } else {
            let (s, a) = decode_df(x, &self.budget);
            df_bounds_with(&self.g, &s, &a, self.snr.0, self.snr.1)
        }
    }

    /// `(min r1, min r2, min sum)` at search coordinates `x`.
    #[inline]
    pub fn abs(&self, x: &[f64]) -> (f64, f64, f64) {
        let b = self.bounds_at(x);
        (b[0], b[1], b[2].min(b[3]).min(b[4]).min(b[5]))
    }

    pub(crate) fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn region_at(&self, x: &[f64]) -> LinearRegion {
        let (s, a) = decode(self.scheme, x, &self.budget);
        // The allocation kind always matches the scheme here.
        self.region_for(&s, &a).expect("decoded allocation matches scheme")
    }
}

/// Evenly spaced angles over the quarter circle; the end directions are
/// exactly `(1, 0)` and `(0, 1)`.
pub fn weight_directions(count: usize) -> Result<Vec<(f64, f64)>> {
    if count < 2 {
        return Err(Error::invalid("weight count", format!("need at least 2, got {count}")));
    }
    Ok((0..count)
        .map(|i| {
            if i == 0 {
                (1.0, 0.0)
            } else if i == count - 1 {
                (0.0, 1.0)
            } else {
                let t = std::f64::consts::FRAC_PI_2 * i as f64 / (count - 1) as f64;
                (t.cos(), t.sin())
            }
        })
        .collect())
}

fn axis(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Distinct per-user coordinate tuples for a given own-slot and last-slot length.
fn user_grid(pdf: bool, own: f64, a3: f64, p: &[f64]) -> Vec<Vec<f64>> {
    let fs: Vec<f64> = if own == 0.0 {
        vec![0.0]
    } else if a3 == 0.0 {
        vec![1.0]
    } else {
        p.to_vec()
    };
    let mut out = Vec::new();
    for &f in &fs {
        let last: Vec<f64> = if f < 1.0 { p.to_vec() } else { vec![0.0] };
        if !pdf {
            for &g in &last {
                out.push(vec![f, g]);
            }
            continue;
        }
        let hs: &[f64] = if f > 0.0 { &[0.0, 1.0] } else { &[0.0] };
        for &h in hs {
            for &q in &last {
                let ss: &[f64] = if q > 0.0 { &[0.0, 1.0] } else { &[0.0] };
                for &s in ss {
                    out.push(vec![f, h, q, s]);
                }
            }
        }
    }
    out
}

fn lex_better(p: f64, s: f64, bp: f64, bs: f64) -> bool {
    p > bp || (p == bp && s > bs)
}

#[inline]
pub(crate) fn score(abs: (f64, f64, f64), mu: (f64, f64)) -> (f64, f64) {
    let (a, b, s) = abs;
    (
        weighted_value_abs(a, b, s, mu.0, mu.1),
        weighted_value_abs(a, b, s, 1.0, 1.0),
    )
}

/// Grid scan shared by all directions: best coordinates per direction.
fn grid_scan(ev: &Evaluator, dirs: &[(f64, f64)], cfg: &SearchConfig) -> (Vec<Vec<f64>>, usize) {
    let pdf = ev.scheme.is_pdf();
    let sg = axis(cfg.slot_grid);
    let pg = axis(cfg.power_grid);
    let mut best: Vec<(f64, f64, Vec<f64>)> =
        vec![(f64::NEG_INFINITY, f64::NEG_INFINITY, Vec::new()); dirs.len()];
    let mut evals = 0usize;
    let n = cfg.slot_grid - 1;
    let mut x = vec![0.0; ev.scheme.dim()];
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (a1, a2) = (sg[i], sg[j]);
            x[0] = a1;
            x[1] = a2;
            let a3 = slots_of(&x).a3;
            let u1 = user_grid(pdf, a1, a3, &pg);
            let u2 = user_grid(pdf, a2, a3, &pg);
            let half = (x.len() - 2) / 2;
            for t1 in &u1 {
                x[2..2 + half].copy_from_slice(t1);
                for t2 in &u2 {
                    x[2 + half..].copy_from_slice(t2);
                    let abs = ev.abs(&x);
                    evals += 1;
                    for (d, mu) in dirs.iter().enumerate() {
                        let (p, s) = score(abs, *mu);
                        let b = &mut best[d];
                        if lex_better(p, s, b.0, b.1) {
                            *b = (p, s, x.clone());
                        }
                    }
                }
            }
        }
    }
    (best.into_iter().map(|b| b.2).collect(), evals)
}

fn project(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    let s = x[0] + x[1];
    if s > 1.0 {
        let e = (s - 1.0) / 2.0;
        x[0] -= e;
        x[1] -= e;
        if x[0] < 0.0 {
            x[1] += x[0];
            x[0] = 0.0;
        }
        if x[1] < 0.0 {
            x[0] += x[1];
            x[1] = 0.0;
        }
        x[1] = x[1].min(1.0 - x[0]);
    }
}

/// Initial step per coordinate: the grid spacing of that axis.
fn initial_steps(scheme: Scheme, cfg: &SearchConfig) -> Vec<f64> {
    let ds = 1.0 / (cfg.slot_grid - 1) as f64;
    let dp = 1.0 / (cfg.power_grid - 1) as f64;
    if scheme.is_pdf() {
        vec![ds, ds, dp, 0.5, dp, 0.5, dp, 0.5, dp, 0.5]
    } else {
        vec![ds, ds, dp, dp, dp, dp]
    }
}

/// Improving sweeps allowed per step size before the step is shrunk anyway.
const MAX_SWEEPS: usize = 40;

/// Pattern search: cyclic coordinate moves, then seeded random directions
/// when no coordinate move helps, then a step shrink.
fn refine(
    ev: &Evaluator,
    mu: (f64, f64),
    x0: Vec<f64>,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, usize) {
    let dim = x0.len();
    let mut x = x0;
    let (mut bp, mut bs) = score(ev.abs(&x), mu);
    let mut evals = 1;
    let mut steps = initial_steps(ev.scheme, cfg);
    let mut y = vec![0.0; dim];
    let mut dir = vec![0.0; dim];

    let try_point = |y: &[f64], bp: &mut f64, bs: &mut f64, evals: &mut usize| -> bool {
        let (p, s) = score(ev.abs(y), mu);
        *evals += 1;
        if lex_better(p, s, *bp, *bs) {
            *bp = p;
            *bs = s;
            true
        } else {
            false
        }
    };

    for _ in 0..cfg.refine_iters {
        for _ in 0..MAX_SWEEPS {
            let mut improved = false;
            for i in 0..dim {
                for sign in [1.0, -1.0] {
                    y.copy_from_slice(&x);
                    y[i] += sign * steps[i];
                    project(&mut y);
                    if y[i] != x[i] && try_point(&y, &mut bp, &mut bs, &mut evals) {
                        x.copy_from_slice(&y);
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                for _ in 0..2 * dim {
                    for (d, st) in dir.iter_mut().zip(&steps) {
                        *d = rng.random_range(-1.0..=1.0) * st;
                    }
                    y.iter_mut().zip(&x).zip(&dir).for_each(|((yv, xv), d)| *yv = xv + d);
                    project(&mut y);
                    if try_point(&y, &mut bp, &mut bs, &mut evals) {
                        x.copy_from_slice(&y);
                        improved = true;
                        // Keep going while the same direction pays off.
                        loop {
                            y.iter_mut().zip(&x).zip(&dir).for_each(|((yv, xv), d)| *yv = xv + d);
                            project(&mut y);
                            if !try_point(&y, &mut bp, &mut bs, &mut evals) {
                                break;
                            }
                            x.copy_from_slice(&y);
                        }
                        break;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        for s in steps.iter_mut() {
            *s *= cfg.refine_shrink;
        }
    }
    (x, evals)
}

fn finish(
    ev: &Evaluator,
    mu: (f64, f64),
    x: Vec<f64>,
    evaluations: usize,
) -> Result<OptResult> {
    let (slots, allocation) = decode(ev.scheme, &x, &ev.budget);
    let region = ev.region_for(&slots, &allocation)?;
    let (vertex, objective) = weighted_best_vertex(&region.polygon(), mu)?;
    Ok(OptResult {
        scheme: ev.scheme,
        mu,
        slots,
        allocation,
        params: x,
        vertex,
        objective,
        evaluations,
    })
}

fn direction_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Optimizes every direction. Each direction starts from the best of its
/// grid point, the previous direction's optimum and the warm starts.
pub fn optimize_directions(
    g: &ChannelGains,
    budget: &PowerBudget,
    scheme: Scheme,
    dirs: &[(f64, f64)],
    cfg: &SearchConfig,
    warm_starts: &[Vec<f64>],
) -> Result<Vec<OptResult>> {
    cfg.validate()?;
    let ev = Evaluator::new(g, budget, scheme)?;
    for mu in dirs {
        if !(mu.0 >= 0.0 && mu.1 >= 0.0) || (mu.0 == 0.0 && mu.1 == 0.0) {
            return Err(Error::invalid("weights", format!("invalid direction {mu:?}")));
        }
    }
    if let Some(w) = warm_starts.iter().find(|w| w.len() != scheme.dim()) {
        return Err(Error::Dimension(format!(
            "warm start has {} coordinates, scheme {} needs {}",
            w.len(),
            scheme.tag(),
            scheme.dim()
        )));
    }
    let (grid_best, grid_evals) = grid_scan(&ev, dirs, cfg);
    let mut out: Vec<OptResult> = Vec::with_capacity(dirs.len());
    for (d, (mu, grid_x)) in dirs.iter().zip(grid_best).enumerate() {
        let mut evals = grid_evals;
        let mut start = grid_x;
        let (mut sp, mut ss) = score(ev.abs(&start), *mu);
        let prev = out.last().map(|r| r.params.clone());
        for cand in prev.iter().chain(warm_starts) {
            let mut c = cand.clone();
            project(&mut c);
            let (p, s) = score(ev.abs(&c), *mu);
            evals += 1;
            if lex_better(p, s, sp, ss) {
                start = c;
                sp = p;
                ss = s;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(direction_seed(cfg.seed, d));
        let (x, e) = refine(&ev, *mu, start, cfg, &mut rng);
        let (x, e2) = polish(&ev, *mu, x);
        out.push(finish(&ev, *mu, x, evals + e + e2)?);
    }
    Ok(out)
}

/// Maximizes `mu1 * r1 + mu2 * r2` over slots and allocations of `scheme`.
pub fn optimize_scheme(
    g: &ChannelGains,
    budget: &PowerBudget,
    scheme: Scheme,
    mu: (f64, f64),
    cfg: &SearchConfig,
) -> Result<OptResult> {
    let mut r = optimize_directions(g, budget, scheme, &[mu], cfg, &[])?;
    Ok(r.remove(0))
}

/// Optimized points over `weight_count` directions and their hull.
pub fn frontier(
    g: &ChannelGains,
    budget: &PowerBudget,
    scheme: Scheme,
    weight_count: usize,
    cfg: &SearchConfig,
) -> Result<Frontier> {
    frontier_with_starts(g, budget, scheme, weight_count, cfg, &[])
}

/// [`frontier`] with extra starting points in the scheme's coordinates.
pub fn frontier_with_starts(
    g: &ChannelGains,
    budget: &PowerBudget,
    scheme: Scheme,
    weight_count: usize,
    cfg: &SearchConfig,
    warm_starts: &[Vec<f64>],
) -> Result<Frontier> {
    if weight_count < 3 {
        return Err(Error::invalid(
            "weight count",
            format!("a frontier needs at least 3 directions, got {weight_count}"),
        ));
    }
    let dirs = weight_directions(weight_count)?;
    let results = optimize_directions(g, budget, scheme, &dirs, cfg, warm_starts)?;
    let pts: Vec<RatePoint> = results.iter().map(|r| r.vertex).collect();
    let hull = upper_hull(&pts)?;
    Ok(Frontier {
        scheme,
        results,
        hull,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{c_gauss, power_feasible};

    fn budget() -> PowerBudget {
        PowerBudget::new(2.0, 2.0).unwrap()
    }

    #[test]
    fn decoded_points_meet_the_budget_exactly() {
        let b = PowerBudget::new(2.0, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            for dim in [DF_DIM, PDF_DIM] {
                let mut x: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
                project(&mut x);
                let scheme = if dim == DF_DIM { Scheme::Df } else { Scheme::PdfJoint };
                let (s, a) = decode(scheme, &x, &b);
                s.validate().unwrap();
                a.validate().unwrap();
                let u = power_feasible(&s, &a, &b);
                assert!(u.feasible);
                if s.a3 > 0.0 {
                    assert!((u.used1 - 2.0).abs() < 1e-12, "{x:?} {u:?}");
                    assert!((u.used2 - 3.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn directions() {
        let d = weight_directions(3).unwrap();
        assert_eq!(d[0], (1.0, 0.0));
        assert_eq!(d[2], (0.0, 1.0));
        assert!((d[1].0 - d[1].1).abs() < 1e-15);
        assert!(weight_directions(1).is_err());
    }

    #[test]
    fn grid_tuples_are_distinct() {
        let p = axis(9);
        for (own, a3) in [(0.0, 0.5), (0.5, 0.0), (0.3, 0.4), (0.0, 0.0)] {
            for pdf in [false, true] {
                let mut g = user_grid(pdf, own, a3, &p);
                let n = g.len();
                g.sort_by(|a, b| a.partial_cmp(b).unwrap());
                g.dedup();
                assert_eq!(g.len(), n);
            }
        }
        assert_eq!(user_grid(true, 0.3, 0.4, &p).len(), 257);
    }

    #[test]
    fn dead_links_recover_mac_sum_rate() {
        let g = ChannelGains::new(0.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        let mac = c_gauss(4.0).unwrap();
        for scheme in [Scheme::Df, Scheme::PdfJoint] {
            let r = optimize_scheme(&g, &budget(), scheme, (1.0, 1.0), &SearchConfig::default())
                .unwrap();
            assert!((r.objective - mac).abs() < 1e-3, "{scheme:?}: {}", r.objective);
        }
    }

    #[test]
    fn single_user_weight_beats_mac_point() {
        let g = ChannelGains::symmetric(10.0, 1.0, 1.0).unwrap();
        let r = optimize_scheme(&g, &budget(), Scheme::Df, (1.0, 0.0), &SearchConfig::default())
            .unwrap();
        assert!(r.objective >= c_gauss(2.0).unwrap());
        assert!((r.objective - r.vertex.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_weights_swap_users() {
        let g = ChannelGains::symmetric(2.0, 1.0, 1.0).unwrap();
        let cfg = SearchConfig::default();
        let a = optimize_scheme(&g, &budget(), Scheme::Df, (1.0, 0.0), &cfg).unwrap();
        let b = optimize_scheme(&g, &budget(), Scheme::Df, (0.0, 1.0), &cfg).unwrap();
        assert!((a.objective - b.objective).abs() < 1e-6);
        assert!((a.vertex.0 - b.vertex.1).abs() < 1e-6);
    }

    #[test]
    fn dead_channel_frontier_is_origin() {
        let g = ChannelGains::new(0.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        let cfg = SearchConfig {
            refine_iters: 5,
            ..Default::default()
        };
        let f = frontier(&g, &budget(), Scheme::Df, 3, &cfg).unwrap();
        assert_eq!(f.hull, RatePolygon::origin());
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig {
            refine_shrink: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            slot_grid: 1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let g = ChannelGains::symmetric(2.0, 1.0, 1.0).unwrap();
        let zero = PowerBudget { p1: 0.0, p2: 1.0 };
        assert!(optimize_scheme(&g, &zero, Scheme::Df, (1.0, 1.0), &SearchConfig::default())
            .is_err());
    }
}
