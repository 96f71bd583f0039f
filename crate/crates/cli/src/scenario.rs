//! Scenario documents.
//!
//! A scenario is a TOML file. Only `name`, `[gains]` and `[budget]` are
//! required; the other sections are read by the commands that need them.
//!
//! ```toml
//! name = "symmetric"
//!
//! [gains]
//! k12 = 2.0
//! k21 = 2.0
//! k10 = 1.0
//! k20 = 1.0
//! noise = 1.0
//!
//! [budget]
//! p1 = 2.0
//! p2 = 2.0
//!
//! [search]            # optional, every key has a default
//! slot_grid = 11
//! power_grid = 9
//! refine_iters = 60
//! refine_shrink = 0.7
//! seed = 0
//!
//! [frontier]          # optional
//! schemes = ["pdf_joint", "df", "outer"]
//!
//! [sweep]             # needed by `sweep`
//! values = [1.5, 2.0, 4.0]
//! schemes = ["df"]
//!
//! [verify]            # optional
//! samples = 200
//!
//! [fixed]             # needed by `region`
//! slots = { a1 = 0.25, a2 = 0.25, a3 = 0.5 }
//! df = { p12 = 2.0, p21 = 2.0, p13 = 1.0, p23 = 1.0, ps1 = 1.0, ps2 = 1.0 }
//!
//! [m_user]            # needed by `muser`; budgets default to the power used
//! gains = { m = 2, k_user = [[0.0, 2.0], [2.0, 0.0]], k_dest = [1.0, 1.0], noise = 1.0 }
//! allocation = { slots = [0.25, 0.25, 0.5], p_solo = [2.0, 2.0], p_priv = [1.0, 1.0], p_coop = [1.0, 1.0] }
//!
//! [dmc]               # needed by `dmc`
//! slots = { a1 = 0.25, a2 = 0.25, a3 = 0.5 }
//! [dmc.channels.slot1]
//! axes = ["x10", "y1", "y12"]
//! shape = [2, 2, 2]
//! values = [ ... ]
//! ```
//!
//! Discrete tables list their values in row-major order with the last axis
//! varying fastest, and name their axes so a transposed table is caught.
//! The expected axes are:
//!
//! | table | axes |
//! |-------|------|
//! | `channels.slot1` | `x10, y1, y12` |
//! | `channels.slot2` | `x20, y2, y21` |
//! | `channels.slot3` | `x13, x23, y3` |
//! | `pdf.x10_u` / `outer.x10_u` | `x10, u` |
//! | `pdf.x20_v` / `outer.x20_v` | `x20, v` |
//! | `pdf.x13_given_uv` | `u, v, x13` |
//! | `pdf.x23_given_uv` | `u, v, x23` |
//! | `outer.x13_given_uvx10` | `u, v, x10, x13` |
//! | `outer.x23_given_uvx20` | `u, v, x20, x23` |
//! | `df.x12`, `df.x21`, `df.s` | `x12`, `x21`, `s` |
//! | `df.x13_given_s` / `df.x23_given_s` | `s, x13` / `s, x23` |

use hdmac_core::{
    power_feasible, Allocation, ChannelGains, DfAllocation, DfInputDistribution, MUserAllocation,
    MUserGains, OuterInputDistribution, PdfAllocation, PdfInputDistribution, PowerBudget, Scheme,
    SearchConfig, SlotChannels, Table, TimeSlots,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error("the `{command}` command needs a [{section}] section")]
    MissingSection {
        command: &'static str,
        section: &'static str,
    },
}

fn invalid(field: impl Into<String>, reason: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.into(),
        reason: reason.to_string(),
    }
}

/// Scheme names accepted in `schemes` lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    PdfJoint,
    PdfSeparate,
    PdfSeparateLiteral,
    PdfPartial,
    Df,
    Outer,
    /// The outer bound with the noise correlation that makes the channel
    /// degraded; needs `k12 > k10` and `k21 > k20`.
    DegradedOuter,
}

impl SchemeName {
    pub fn scheme(self, g: &ChannelGains) -> Result<Scheme, ScenarioError> {
        Ok(match self {
            SchemeName::PdfJoint => Scheme::PdfJoint,
            SchemeName::PdfSeparate => Scheme::PdfSeparate,
            SchemeName::PdfSeparateLiteral => Scheme::PdfSeparateLiteral,
            SchemeName::PdfPartial => Scheme::PdfPartial,
            SchemeName::Df => Scheme::Df,
            SchemeName::Outer => Scheme::Outer,
            SchemeName::DegradedOuter => {
                let rho = hdmac_core::NoiseCorrelation::degrading(g)
                    .map_err(|e| invalid("degraded_outer", e))?;
                Scheme::DegradedOuter(rho)
            }
        })
    }
}

fn default_schemes() -> Vec<SchemeName> {
    vec![SchemeName::PdfJoint, SchemeName::Df, SchemeName::Outer]
}

fn default_sweep_schemes() -> Vec<SchemeName> {
    vec![SchemeName::Df]
}

fn default_samples() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierSection {
    #[serde(default = "default_schemes")]
    pub schemes: Vec<SchemeName>,
}

impl Default for FrontierSection {
    fn default() -> Self {
        Self {
            schemes: default_schemes(),
        }
    }
}

/// Inter-user gains `k12 = k21` to sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub values: Vec<f64>,
    #[serde(default = "default_sweep_schemes")]
    pub schemes: Vec<SchemeName>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    /// Random allocations drawn per sampled check.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            samples: default_samples(),
        }
    }
}

/// A fixed operating point for the `region` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedSection {
    pub slots: TimeSlots,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df: Option<DfAllocation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pdf: Option<PdfAllocation>,
}

impl FixedSection {
    pub fn allocations(&self) -> Vec<Allocation> {
        let mut out = Vec::new();
        if let Some(a) = self.pdf {
            out.push(Allocation::Pdf(a));
        }
        if let Some(a) = self.df {
            out.push(Allocation::Df(a));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MUserSection {
    pub gains: MUserGains,
    pub allocation: MUserAllocation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Vec<f64>>,
}

impl MUserSection {
    pub fn budgets(&self) -> Vec<f64> {
        self.budgets
            .clone()
            .unwrap_or_else(|| self.allocation.power_usage())
    }
}

/// A probability table with named axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaggedTable {
    pub axes: Vec<String>,
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
}

impl TaggedTable {
    pub fn new(axes: &[&str], table: &Table) -> Self {
        Self {
            axes: axes.iter().map(|s| s.to_string()).collect(),
            shape: table.shape.clone(),
            values: table.values.clone(),
        }
    }

    fn table(&self, field: &str, axes: &[&str]) -> Result<Table, ScenarioError> {
        if self.axes != axes {
            return Err(invalid(
                field,
                format!("axes must be {axes:?}, got {:?}", self.axes),
            ));
        }
        Table::new(self.shape.clone(), self.values.clone()).map_err(|e| invalid(field, e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmcChannels {
    pub slot1: TaggedTable,
    pub slot2: TaggedTable,
    pub slot3: TaggedTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmcPdf {
    pub x10_u: TaggedTable,
    pub x20_v: TaggedTable,
    pub x13_given_uv: TaggedTable,
    pub x23_given_uv: TaggedTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmcDf {
    pub x12: TaggedTable,
    pub x21: TaggedTable,
    pub s: TaggedTable,
    pub x13_given_s: TaggedTable,
    pub x23_given_s: TaggedTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmcOuter {
    pub x10_u: TaggedTable,
    pub x20_v: TaggedTable,
    pub x13_given_uvx10: TaggedTable,
    pub x23_given_uvx20: TaggedTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmcSection {
    pub slots: TimeSlots,
    pub channels: DmcChannels,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pdf: Option<DmcPdf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df: Option<DmcDf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<DmcOuter>,
}

/// The discrete section converted to library types.
#[derive(Debug, Clone, PartialEq)]
pub struct DmcInputs {
    pub slots: TimeSlots,
    pub channels: SlotChannels,
    pub pdf: Option<PdfInputDistribution>,
    pub df: Option<DfInputDistribution>,
    pub outer: Option<OuterInputDistribution>,
}

impl DmcSection {
    pub fn inputs(&self) -> Result<DmcInputs, ScenarioError> {
        let c = &self.channels;
        let channels = SlotChannels {
            slot1: c.slot1.table("dmc.channels.slot1", &["x10", "y1", "y12"])?,
            slot2: c.slot2.table("dmc.channels.slot2", &["x20", "y2", "y21"])?,
            slot3: c.slot3.table("dmc.channels.slot3", &["x13", "x23", "y3"])?,
        };
        channels.validate().map_err(|e| invalid("dmc.channels", e))?;
        let pdf = match &self.pdf {
            Some(p) => {
                let d = PdfInputDistribution {
                    pmf_x10_u: p.x10_u.table("dmc.pdf.x10_u", &["x10", "u"])?,
                    pmf_x20_v: p.x20_v.table("dmc.pdf.x20_v", &["x20", "v"])?,
                    pmf_x13_given_uv: p.x13_given_uv.table("dmc.pdf.x13_given_uv", &["u", "v", "x13"])?,
                    pmf_x23_given_uv: p.x23_given_uv.table("dmc.pdf.x23_given_uv", &["u", "v", "x23"])?,
                };
                d.validate(&channels).map_err(|e| invalid("dmc.pdf", e))?;
                Some(d)
            }
            None => None,
        };
        let df = match &self.df {
            Some(p) => {
                let d = DfInputDistribution {
                    pmf_x12: p.x12.table("dmc.df.x12", &["x12"])?,
                    pmf_x21: p.x21.table("dmc.df.x21", &["x21"])?,
                    pmf_s: p.s.table("dmc.df.s", &["s"])?,
                    pmf_x13_given_s: p.x13_given_s.table("dmc.df.x13_given_s", &["s", "x13"])?,
                    pmf_x23_given_s: p.x23_given_s.table("dmc.df.x23_given_s", &["s", "x23"])?,
                };
                d.validate(&channels).map_err(|e| invalid("dmc.df", e))?;
                Some(d)
            }
            None => None,
        };
        let outer = match &self.outer {
            Some(p) => {
                let d = OuterInputDistribution {
                    pmf_x10_u: p.x10_u.table("dmc.outer.x10_u", &["x10", "u"])?,
                    pmf_x20_v: p.x20_v.table("dmc.outer.x20_v", &["x20", "v"])?,
                    pmf_x13_given_uvx10: p
                        .x13_given_uvx10
                        .table("dmc.outer.x13_given_uvx10", &["u", "v", "x10", "x13"])?,
                    pmf_x23_given_uvx20: p
                        .x23_given_uvx20
                        .table("dmc.outer.x23_given_uvx20", &["u", "v", "x20", "x23"])?,
                };
                d.validate(&channels).map_err(|e| invalid("dmc.outer", e))?;
                Some(d)
            }
            None => None,
        };
        if pdf.is_none() && df.is_none() && outer.is_none() {
            return Err(invalid("dmc", "give at least one of [dmc.pdf], [dmc.df], [dmc.outer]"));
        }
        Ok(DmcInputs {
            slots: self.slots,
            channels,
            pdf,
            df,
            outer,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub gains: ChannelGains,
    pub budget: PowerBudget,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default)]
    pub frontier: FrontierSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<FixedSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_user: Option<MUserSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dmc: Option<DmcSection>,
}

impl Scenario {
    /// A scenario with only channel and budget and default search settings.
    pub fn new(name: &str, gains: ChannelGains, budget: PowerBudget) -> Self {
        Self {
            name: name.to_string(),
            gains,
            budget,
            search: SearchConfig::default(),
            frontier: FrontierSection::default(),
            verify: VerifySection::default(),
            sweep: None,
            fixed: None,
            m_user: None,
            dmc: None,
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.gains.validate().map_err(|e| invalid("gains", e))?;
        self.budget.validate().map_err(|e| invalid("budget", e))?;
        self.search.validate().map_err(|e| invalid("search", e))?;
        if self.frontier.schemes.is_empty() {
            return Err(invalid("frontier.schemes", "list at least one scheme"));
        }
        if self.verify.samples == 0 {
            return Err(invalid("verify.samples", "must be at least 1"));
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(invalid("sweep.values", "list at least one gain"));
            }
            if let Some(v) = s.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(invalid("sweep.values", format!("gain {v} must be finite and >= 0")));
            }
            if s.schemes.is_empty() {
                return Err(invalid("sweep.schemes", "list at least one scheme"));
            }
        }
        if let Some(f) = &self.fixed {
            f.slots.validate().map_err(|e| invalid("fixed.slots", e))?;
            let allocs = f.allocations();
            if allocs.is_empty() {
                return Err(invalid("fixed", "give a `df` or a `pdf` allocation"));
            }
            for a in allocs {
                a.validate().map_err(|e| invalid("fixed", e))?;
                let u = power_feasible(&f.slots, &a, &self.budget);
                if !u.feasible {
                    return Err(invalid(
                        "fixed",
                        format!(
                            "allocation uses powers ({}, {}) beyond the budget ({}, {})",
                            u.used1, u.used2, self.budget.p1, self.budget.p2
                        ),
                    ));
                }
            }
        }
        if let Some(m) = &self.m_user {
            m.gains.validate().map_err(|e| invalid("m_user.gains", e))?;
            m.allocation
                .validate(m.gains.m, &m.budgets())
                .map_err(|e| invalid("m_user.allocation", e))?;
        }
        if let Some(d) = &self.dmc {
            d.slots.validate().map_err(|e| invalid("dmc.slots", e))?;
            d.inputs()?;
        }
        Ok(())
    }

    pub fn require_fixed(&self) -> Result<&FixedSection, ScenarioError> {
        self.fixed.as_ref().ok_or(ScenarioError::MissingSection {
            command: "region",
            section: "fixed",
        })
    }

    pub fn require_sweep(&self) -> Result<&SweepSection, ScenarioError> {
        self.sweep.as_ref().ok_or(ScenarioError::MissingSection {
            command: "sweep",
            section: "sweep",
        })
    }

    pub fn require_m_user(&self) -> Result<&MUserSection, ScenarioError> {
        self.m_user.as_ref().ok_or(ScenarioError::MissingSection {
            command: "muser",
            section: "m_user",
        })
    }

    pub fn require_dmc(&self) -> Result<&DmcSection, ScenarioError> {
        self.dmc.as_ref().ok_or(ScenarioError::MissingSection {
            command: "dmc",
            section: "dmc",
        })
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let s: Scenario = toml::from_str(text).map_err(|e| {
        let start = e.span().map(|r| r.start).unwrap_or(0).min(text.len());
        let before = &text[..start];
        let line = before.matches('\n').count() + 1;
        let column = start - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
        ScenarioError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    s.validate()?;
    Ok(s)
}

pub fn to_toml(s: &Scenario) -> String {
    toml::to_string(s).expect("scenario types always serialize")
}

/// Hex SHA-256 of the normalized document, stable across formatting changes.
pub fn scenario_hash(s: &Scenario) -> String {
    hex::encode(Sha256::digest(to_toml(s).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "name = \"m\"\n[gains]\nk12 = 2\nk21 = 2\nk10 = 1\nk20 = 1\nnoise = 1\n[budget]\np1 = 2\np2 = 2\n";

    #[test]
    fn minimal_scenario_gets_default_search() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.search, SearchConfig::default());
        assert_eq!(s.gains.k12, 2.0);
        assert_eq!(s.frontier.schemes, default_schemes());
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_line() {
        let text = format!("{MINIMAL}[search]\nslot_grid = 5\nbogus = 1\n");
        match parse_scenario(&text).unwrap_err() {
            ScenarioError::Syntax { line, message, .. } => {
                assert_eq!(line, 13);
                assert!(message.contains("bogus"), "{message}");
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn overfull_slots_name_the_type() {
        let text = format!(
            "{MINIMAL}[fixed]\nslots = {{ a1 = 0.7, a2 = 0.6, a3 = 0.0 }}\ndf = {{ p12 = 0.0, p21 = 0.0, p13 = 0.0, p23 = 0.0, ps1 = 0.0, ps2 = 0.0 }}\n"
        );
        let e = parse_scenario(&text).unwrap_err();
        assert!(e.to_string().contains("TimeSlots"), "{e}");
    }

    #[test]
    fn transposed_tables_are_caught() {
        let t = TaggedTable {
            axes: vec!["y1".into(), "x10".into(), "y12".into()],
            shape: vec![2, 2, 2],
            values: vec![0.25; 8],
        };
        assert!(t.table("slot1", &["x10", "y1", "y12"]).is_err());
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = parse_scenario(MINIMAL).unwrap();
        let b = parse_scenario(&MINIMAL.replace("k12 = 2", "k12   =   2.0  # comment")).unwrap();
        assert_eq!(scenario_hash(&a), scenario_hash(&b));
        assert_eq!(scenario_hash(&a).len(), 64);
    }
}
