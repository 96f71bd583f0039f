//! The six commands. Each one writes its files into the output directory
//! and returns a short summary.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hdmac_core::verify::{
    verify_achievable_in_outer, verify_degraded_capacity, verify_full_vs_partial_user_decoding,
    verify_joint_dominates_separate, verify_pdf_df_equivalence, HULL_TOL, STRICT_GAP,
};
use hdmac_core::{
    baseline_region, degraded_outer_region, df_region, dmc_df_region, dmc_outer_region,
    dmc_pdf_joint_region, dmc_pdf_separate_region, frontier, gaussian_outer_region,
    muser_achievable_constraints, muser_condition_check, muser_outer_constraints, pdf_joint_region,
    pdf_partial_user_region, pdf_separate_region, pdf_separate_region_with, region_contains,
    Allocation, BaselineKind, Frontier, LinearRegion, NoiseCorrelation, OuterVariant, RatePolygon,
    SearchConfig, SeparateReading, Verdict,
};

use crate::export::{bounds_csv, export_plot_data, frontier_csv, muser_csv, num, polygon_csv, Series};
use crate::scenario::{scenario_hash, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Regions of the fixed operating point in `[fixed]`.
    Region,
    /// Optimized boundary of each scheme in `[frontier]`.
    Frontier,
    /// One frontier per inter-user gain in `[sweep]` and a nesting report.
    Sweep,
    /// Constraint listing of the `[m_user]` channel.
    Muser,
    /// Discrete-channel regions of `[dmc]`.
    Dmc,
    /// Every structural claim with a pass/fail report.
    Verify,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Replaces the scenario's search seed.
    pub seed: Option<u64>,
    pub weights: usize,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            out: out.into(),
            seed: None,
            weights: 17,
        }
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
    /// Set when a verified claim fails.
    pub failed: bool,
}

struct Ctx<'a> {
    s: &'a Scenario,
    cfg: SearchConfig,
    hash: String,
    opts: &'a RunOptions,
    outcome: Outcome,
}

impl Ctx<'_> {
    fn write(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        let path = self.opts.out.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        self.outcome.files.push(path.clone());
        Ok(path)
    }

    fn say(&mut self, line: String) {
        self.outcome.lines.push(line);
    }

    fn plot(&mut self, name: &str, series: &[Series]) -> Result<()> {
        let text = export_plot_data(series, &self.hash, self.cfg.seed)?;
        self.write(name, &text)?;
        Ok(())
    }
}

pub fn run_command(cmd: Command, s: &Scenario, opts: &RunOptions) -> Result<Outcome> {
    s.validate()?;
    fs::create_dir_all(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
    let mut cfg = s.search;
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    let mut ctx = Ctx {
        s,
        cfg,
        hash: scenario_hash(s),
        opts,
        outcome: Outcome::default(),
    };
    match cmd {
        Command::Region => region(&mut ctx)?,
        Command::Frontier => frontiers(&mut ctx)?,
        Command::Sweep => sweep(&mut ctx)?,
        Command::Muser => muser(&mut ctx)?,
        Command::Dmc => dmc(&mut ctx)?,
        Command::Verify => verify(&mut ctx)?,
    }
    Ok(ctx.outcome)
}

/// Runs a command on a scenario file.
pub fn run_file(cmd: Command, scenario: &Path, opts: &RunOptions) -> Result<Outcome> {
    let text = fs::read_to_string(scenario)
        .with_context(|| format!("reading {}", scenario.display()))?;
    let s = crate::scenario::parse_scenario(&text)
        .with_context(|| format!("in {}", scenario.display()))?;
    run_command(cmd, &s, opts)
}

fn region(ctx: &mut Ctx) -> Result<()> {
    let s = ctx.s;
    let fixed = s.require_fixed()?;
    let g = &s.gains;
    let slots = &fixed.slots;
    let mut regions: Vec<(String, LinearRegion)> = Vec::new();
    for a in fixed.allocations() {
        match a {
            Allocation::Pdf(a) => {
                regions.push(("pdf_joint".into(), pdf_joint_region(g, slots, &a)));
                regions.push(("pdf_separate".into(), pdf_separate_region(g, slots, &a)));
                regions.push((
                    "pdf_separate_literal".into(),
                    pdf_separate_region_with(g, slots, &a, SeparateReading::LiteralTotalPower(s.budget.p1)),
                ));
                regions.push(("pdf_partial".into(), pdf_partial_user_region(g, slots, &a)));
            }
            Allocation::Df(a) => {
                regions.push(("df".into(), df_region(g, slots, &a)));
                regions.push(("outer".into(), gaussian_outer_region(g, slots, &a)));
                if g.k12 > g.k10 && g.k21 > g.k20 {
                    let rho = NoiseCorrelation::degrading(g)?;
                    regions.push(("degraded_outer".into(), degraded_outer_region(g, slots, &a, &rho)?));
                }
            }
        }
    }
    let mut series = Vec::new();
    for (name, r) in &regions {
        let poly = r.polygon();
        ctx.write(&format!("region_{name}.csv"), &polygon_csv(&poly))?;
        ctx.say(format!(
            "{name}: {} vertices, r1 <= {}, r2 <= {}, r1 + r2 <= {}",
            poly.len(),
            num(r.min_r1()),
            num(r.min_r2()),
            num(r.min_sum())
        ));
        series.push(Series::new(name.clone(), poly.vertices));
    }
    let mac = baseline_region(BaselineKind::Mac, g, &s.budget);
    ctx.write("region_mac.csv", &polygon_csv(&mac))?;
    series.push(Series::new("mac", mac.vertices));
    ctx.write("bounds.csv", &bounds_csv(&regions))?;
    ctx.plot("region.dat", &series)
}

fn frontiers(ctx: &mut Ctx) -> Result<()> {
    let s = ctx.s;
    let mut series = Vec::new();
    for name in &s.frontier.schemes {
        let scheme = name.scheme(&s.gains)?;
        let f = frontier(&s.gains, &s.budget, scheme, ctx.opts.weights, &ctx.cfg)?;
        ctx.write(&format!("frontier_{}.csv", scheme.tag()), &frontier_csv(&f))?;
        ctx.say(summary(&f));
        series.push(Series::new(scheme.tag(), f.points()));
    }
    let mac = baseline_region(BaselineKind::Mac, &s.gains, &s.budget);
    series.push(Series::new("mac", mac.vertices));
    ctx.plot("frontier.dat", &series)
}

fn summary(f: &Frontier) -> String {
    let best_sum = f
        .points()
        .iter()
        .map(|p| p.0 + p.1)
        .fold(f64::NEG_INFINITY, f64::max);
    format!(
        "{}: {} directions, hull of {} vertices, best sum rate {}",
        f.scheme.tag(),
        f.results.len(),
        f.hull.len(),
        num(best_sum)
    )
}

/// How one hull sits inside another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nesting {
    /// Worst slack of the inner hull inside the outer one.
    pub slack: f64,
    /// How far the outer hull sticks out of the inner one.
    pub protrusion: f64,
}

impl Nesting {
    pub fn of(inner: &RatePolygon, outer: &RatePolygon) -> Self {
        Self {
            slack: region_contains(outer, inner, 0.0).worst_slack,
            protrusion: -region_contains(inner, outer, 0.0).worst_slack,
        }
    }

    /// Contained within the hull tolerance and larger by a strict gap.
    pub fn strict(&self) -> bool {
        self.slack >= -HULL_TOL && self.protrusion > STRICT_GAP
    }
}

fn sweep(ctx: &mut Ctx) -> Result<()> {
    let s = ctx.s;
    let sw = s.require_sweep()?;
    let mut values = sw.values.clone();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mac = baseline_region(BaselineKind::Mac, &s.gains, &s.budget);
    let mut report = String::from("scheme,inner,outer,slack,protrusion,strictly_nested\n");
    let mut series = Vec::new();
    for name in &sw.schemes {
        let mut hulls: Vec<(String, RatePolygon)> = vec![("mac".into(), mac.clone())];
        for &k in &values {
            let g = s.gains.with_inter_user(k);
            let scheme = name.scheme(&g)?;
            let f = frontier(&g, &s.budget, scheme, ctx.opts.weights, &ctx.cfg)?;
            let label = format!("k{k}");
            ctx.write(&format!("sweep_{}_{label}.csv", scheme.tag()), &frontier_csv(&f))?;
            series.push(Series::new(format!("{} {label}", scheme.tag()), f.points()));
            let n = Nesting::of(&mac, &f.hull);
            report.push_str(&nest_row(scheme.tag(), "mac", &label, &n));
            if let Some((prev, hull)) = hulls.last().filter(|(p, _)| p != "mac") {
                let n = Nesting::of(hull, &f.hull);
                report.push_str(&nest_row(scheme.tag(), prev, &label, &n));
                ctx.say(format!(
                    "{} {prev} inside {label}: {}",
                    scheme.tag(),
                    if n.strict() { "strictly nested" } else { "not strictly nested" }
                ));
            }
            hulls.push((label, f.hull));
        }
    }
    series.push(Series::new("mac", mac.vertices));
    ctx.write("sweep_report.csv", &report)?;
    ctx.plot("sweep.dat", &series)
}

fn nest_row(scheme: &str, inner: &str, outer: &str, n: &Nesting) -> String {
    format!(
        "{scheme},{inner},{outer},{},{},{}\n",
        num(n.slack),
        num(n.protrusion),
        n.strict()
    )
}

fn muser(ctx: &mut Ctx) -> Result<()> {
    let m = ctx.s.require_m_user()?;
    let budgets = m.budgets();
    let ach = muser_achievable_constraints(&m.gains, &m.allocation, &budgets)?;
    let out = muser_outer_constraints(&m.gains, &m.allocation, &budgets)?;
    ctx.write("muser_constraints.csv", &muser_csv(&ach, &out))?;
    let cond = muser_condition_check(&m.gains)?;
    let failing: Vec<String> = cond.failing.iter().map(|(k, j)| format!("({k},{j})")).collect();
    ctx.say(format!(
        "{} users, {} constraints per family; link condition {}{}",
        m.gains.m,
        ach.len(),
        if cond.holds { "holds" } else { "fails at " },
        failing.join(" ")
    ));
    Ok(())
}

fn dmc(ctx: &mut Ctx) -> Result<()> {
    let d = ctx.s.require_dmc()?.inputs()?;
    let mut regions: Vec<(String, LinearRegion)> = Vec::new();
    if let Some(p) = &d.pdf {
        regions.push(("pdf_joint".into(), dmc_pdf_joint_region(&d.channels, p, &d.slots)?));
        regions.push(("pdf_separate".into(), dmc_pdf_separate_region(&d.channels, p, &d.slots)?));
    }
    if let Some(p) = &d.df {
        regions.push(("df".into(), dmc_df_region(&d.channels, p, &d.slots)?));
    }
    // Without an explicit outer distribution the partial decode-forward one
    // is extended.
    let outer = d.outer.clone().or_else(|| d.pdf.as_ref().map(|p| p.extend_to_outer()));
    if let Some(o) = &outer {
        regions.push(("outer_pdf".into(), dmc_outer_region(OuterVariant::Pdf, &d.channels, o, &d.slots)?));
        regions.push(("outer_df".into(), dmc_outer_region(OuterVariant::Df, &d.channels, o, &d.slots)?));
    }
    let mut series = Vec::new();
    for (name, r) in &regions {
        let poly = r.polygon();
        ctx.write(&format!("dmc_{name}.csv"), &polygon_csv(&poly))?;
        ctx.say(format!(
            "{name}: r1 <= {}, r2 <= {}, r1 + r2 <= {}",
            num(r.min_r1()),
            num(r.min_r2()),
            num(r.min_sum())
        ));
        series.push(Series::new(name.clone(), poly.vertices));
    }
    ctx.write("dmc_bounds.csv", &bounds_csv(&regions))?;
    ctx.plot("dmc.dat", &series)
}

/// Every verified claim for the scenario's channel.
pub fn verify_all(s: &Scenario, cfg: &SearchConfig, weights: usize) -> Result<Vec<Verdict>> {
    let (g, b) = (&s.gains, &s.budget);
    let n = s.verify.samples;
    Ok(vec![
        verify_pdf_df_equivalence(g, b, cfg, weights)?,
        verify_joint_dominates_separate(g, b, n, cfg.seed)?,
        verify_achievable_in_outer(g, b, cfg, weights)?,
        verify_degraded_capacity(g, b, cfg, weights, n)?,
        verify_full_vs_partial_user_decoding(g, b, cfg, weights, n)?,
    ])
}

fn verify(ctx: &mut Ctx) -> Result<()> {
    let verdicts = verify_all(ctx.s, &ctx.cfg, ctx.opts.weights)?;
    let mut report = String::new();
    for v in &verdicts {
        let name = format!("witness_{}.json", v.tag);
        let path = ctx.write(&name, &(serde_json::to_string_pretty(v)? + "\n"))?;
        let status = match (v.applicable, v.pass) {
            (false, _) => "N/A",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        let line = format!("{} {status} {} {}", v.tag, num(v.worst_slack), path.display());
        report.push_str(&line);
        report.push('\n');
        ctx.say(line);
        if !v.pass {
            ctx.outcome.failed = true;
        }
    }
    ctx.write("verify_report.txt", &report)?;
    Ok(())
}
