//! Rate regions of the discrete memoryless half-duplex channel for fixed
//! input distributions, evaluated by exact summation over the joint tables.
//!
//! Table layouts (conditioning axes first):
//! - slot 1 channel `[x10, y1, y12]`, slot 2 `[x20, y2, y21]`, slot 3 `[x13, x23, y3]`
//! - `p(x10, u)` as `[x10, u]`, `p(x13 | u, v)` as `[u, v, x13]`
//! - `p(x13 | u, v, x10)` as `[u, v, x10, x13]`
//! - `p(x13 | s)` as `[s, x13]`

use serde::{Deserialize, Serialize};

use crate::channel::{slot_term, LinearRegion, TimeSlots};
use crate::error::{Error, Result};
use crate::pmf::{mutual_information, JointPmf, Table};

/// Largest alphabet accepted by [`SlotChannels::validate`].
pub const DEFAULT_ALPHABET_CAP: usize = 4;

fn check_rank(t: &Table, rank: usize, what: &'static str) -> Result<()> {
    if t.shape.len() != rank {
        return Err(Error::Dimension(format!(
            "{what} must have {rank} axes, got shape {:?}",
            t.shape
        )));
    }
    Ok(())
}

fn check_cap(t: &Table, cap: usize, what: &'static str) -> Result<()> {
    if let Some(n) = t.shape.iter().find(|&&n| n > cap) {
        return Err(Error::Dimension(format!(
            "{what}: alphabet size {n} exceeds the cap {cap}"
        )));
    }
    Ok(())
}

fn same(a: usize, b: usize, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("{what}: {a} vs {b}")));
    }
    Ok(())
}

/// The three per-slot channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotChannels {
    /// `p(y1, y12 | x10)`
    pub slot1: Table,
    /// `p(y2, y21 | x20)`
    pub slot2: Table,
    /// `p(y3 | x13, x23)`
    pub slot3: Table,
}

impl SlotChannels {
    pub fn validate(&self) -> Result<()> {
        self.validate_with_cap(DEFAULT_ALPHABET_CAP)
    }

    pub fn validate_with_cap(&self, cap: usize) -> Result<()> {
        for (t, cond, what) in [
            (&self.slot1, 1, "slot1 channel"),
            (&self.slot2, 1, "slot2 channel"),
            (&self.slot3, 2, "slot3 channel"),
        ] {
            check_rank(t, 3, what)?;
            check_cap(t, cap, what)?;
            t.validate_conditional(cond, what)?;
        }
        Ok(())
    }

    fn x10(&self) -> usize {
        self.slot1.shape[0]
    }
    fn x20(&self) -> usize {
        self.slot2.shape[0]
    }
    fn x13(&self) -> usize {
        self.slot3.shape[0]
    }
    fn x23(&self) -> usize {
        self.slot3.shape[1]
    }
    fn y3(&self) -> usize {
        self.slot3.shape[2]
    }
}

/// Input distribution of the partial decode-forward scheme,
/// `p(x10,u) p(x20,v) p(x13|u,v) p(x23|u,v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdfInputDistribution {
    pub pmf_x10_u: Table,
    pub pmf_x20_v: Table,
    pub pmf_x13_given_uv: Table,
    pub pmf_x23_given_uv: Table,
}

impl PdfInputDistribution {
    fn u(&self) -> usize {
        self.pmf_x10_u.shape[1]
    }
    fn v(&self) -> usize {
        self.pmf_x20_v.shape[1]
    }

    pub fn validate(&self, ch: &SlotChannels) -> Result<()> {
        check_rank(&self.pmf_x10_u, 2, "p(x10,u)")?;
        check_rank(&self.pmf_x20_v, 2, "p(x20,v)")?;
        check_rank(&self.pmf_x13_given_uv, 3, "p(x13|u,v)")?;
        check_rank(&self.pmf_x23_given_uv, 3, "p(x23|u,v)")?;
        self.pmf_x10_u.validate_conditional(0, "p(x10,u)")?;
        self.pmf_x20_v.validate_conditional(0, "p(x20,v)")?;
        self.pmf_x13_given_uv.validate_conditional(2, "p(x13|u,v)")?;
        self.pmf_x23_given_uv.validate_conditional(2, "p(x23|u,v)")?;
        let (u, v) = (self.u(), self.v());
        same(self.pmf_x10_u.shape[0], ch.x10(), "x10 alphabet")?;
        same(self.pmf_x20_v.shape[0], ch.x20(), "x20 alphabet")?;
        for t in [&self.pmf_x13_given_uv, &self.pmf_x23_given_uv] {
            same(t.shape[0], u, "u alphabet")?;
            same(t.shape[1], v, "v alphabet")?;
        }
        same(self.pmf_x13_given_uv.shape[2], ch.x13(), "x13 alphabet")?;
        same(self.pmf_x23_given_uv.shape[2], ch.x23(), "x23 alphabet")?;
        Ok(())
    }

    /// The outer-bound distribution with `p(x13|u,v,x10) = p(x13|u,v)` and
    /// `p(x23|u,v,x20) = p(x23|u,v)`.
    pub fn extend_to_outer(&self) -> OuterInputDistribution {
        let (u, v) = (self.u(), self.v());
        let x10 = self.pmf_x10_u.shape[0];
        let x20 = self.pmf_x20_v.shape[0];
        let x13 = self.pmf_x13_given_uv.shape[2];
        let x23 = self.pmf_x23_given_uv.shape[2];
        OuterInputDistribution {
            pmf_x10_u: self.pmf_x10_u.clone(),
            pmf_x20_v: self.pmf_x20_v.clone(),
            pmf_x13_given_uvx10: Table::from_fn(vec![u, v, x10, x13], |i| {
                self.pmf_x13_given_uv.at(&[i[0], i[1], i[3]])
            }),
            pmf_x23_given_uvx20: Table::from_fn(vec![u, v, x20, x23], |i| {
                self.pmf_x23_given_uv.at(&[i[0], i[1], i[3]])
            }),
        }
    }
}

/// Input distribution of the decode-forward scheme,
/// `p(x12) p(x21) p(s) p(x13|s) p(x23|s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfInputDistribution {
    pub pmf_x12: Table,
    pub pmf_x21: Table,
    pub pmf_s: Table,
    pub pmf_x13_given_s: Table,
    pub pmf_x23_given_s: Table,
}

impl DfInputDistribution {
    pub fn validate(&self, ch: &SlotChannels) -> Result<()> {
        check_rank(&self.pmf_x12, 1, "p(x12)")?;
        check_rank(&self.pmf_x21, 1, "p(x21)")?;
        check_rank(&self.pmf_s, 1, "p(s)")?;
        check_rank(&self.pmf_x13_given_s, 2, "p(x13|s)")?;
        check_rank(&self.pmf_x23_given_s, 2, "p(x23|s)")?;
        self.pmf_x12.validate_conditional(0, "p(x12)")?;
        self.pmf_x21.validate_conditional(0, "p(x21)")?;
        self.pmf_s.validate_conditional(0, "p(s)")?;
        self.pmf_x13_given_s.validate_conditional(1, "p(x13|s)")?;
        self.pmf_x23_given_s.validate_conditional(1, "p(x23|s)")?;
        same(self.pmf_x12.shape[0], ch.x10(), "x12 alphabet")?;
        same(self.pmf_x21.shape[0], ch.x20(), "x21 alphabet")?;
        same(self.pmf_x13_given_s.shape[0], self.pmf_s.shape[0], "s alphabet")?;
        same(self.pmf_x23_given_s.shape[0], self.pmf_s.shape[0], "s alphabet")?;
        same(self.pmf_x13_given_s.shape[1], ch.x13(), "x13 alphabet")?;
        same(self.pmf_x23_given_s.shape[1], ch.x23(), "x23 alphabet")?;
        Ok(())
    }
}

/// Input distribution of the outer bound,
/// `p(x10,u) p(x20,v) p(x13|u,v,x10) p(x23|u,v,x20)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterInputDistribution {
    pub pmf_x10_u: Table,
    pub pmf_x20_v: Table,
    pub pmf_x13_given_uvx10: Table,
    pub pmf_x23_given_uvx20: Table,
}

impl OuterInputDistribution {
    pub fn validate(&self, ch: &SlotChannels) -> Result<()> {
        check_rank(&self.pmf_x10_u, 2, "p(x10,u)")?;
        check_rank(&self.pmf_x20_v, 2, "p(x20,v)")?;
        check_rank(&self.pmf_x13_given_uvx10, 4, "p(x13|u,v,x10)")?;
        check_rank(&self.pmf_x23_given_uvx20, 4, "p(x23|u,v,x20)")?;
        self.pmf_x10_u.validate_conditional(0, "p(x10,u)")?;
        self.pmf_x20_v.validate_conditional(0, "p(x20,v)")?;
        self.pmf_x13_given_uvx10.validate_conditional(3, "p(x13|u,v,x10)")?;
        self.pmf_x23_given_uvx20.validate_conditional(3, "p(x23|u,v,x20)")?;
        let (u, v) = (self.pmf_x10_u.shape[1], self.pmf_x20_v.shape[1]);
        same(self.pmf_x10_u.shape[0], ch.x10(), "x10 alphabet")?;
        same(self.pmf_x20_v.shape[0], ch.x20(), "x20 alphabet")?;
        let t13 = &self.pmf_x13_given_uvx10.shape;
        let t23 = &self.pmf_x23_given_uvx20.shape;
        same(t13[0], u, "u alphabet")?;
        same(t23[0], u, "u alphabet")?;
        same(t13[1], v, "v alphabet")?;
        same(t23[1], v, "v alphabet")?;
        same(t13[2], ch.x10(), "x10 alphabet")?;
        same(t23[2], ch.x20(), "x20 alphabet")?;
        same(t13[3], ch.x13(), "x13 alphabet")?;
        same(t23[3], ch.x23(), "x23 alphabet")?;
        Ok(())
    }
}

/// Which outer bound [`dmc_outer_region`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterVariant {
    /// Six bounds shaped like the partial decode-forward region.
    Pdf,
    /// Four bounds shaped like the decode-forward region, with `S = (U, V)`.
    Df,
}

/// Early-slot joint `[w, x, y_dest, y_partner]` from `p(x, w)` laid out as `[x, w]`.
fn early_slot_joint(pmf_x_w: &Table, channel: &Table) -> Result<JointPmf> {
    let (nx, nw) = (pmf_x_w.shape[0], pmf_x_w.shape[1]);
    let (ny, nyp) = (channel.shape[1], channel.shape[2]);
    JointPmf::from_fn(vec![nw, nx, ny, nyp], |i| {
        pmf_x_w.at(&[i[1], i[0]]) * channel.at(&[i[1], i[2], i[3]])
    })
}

// Variable positions in the early-slot joint.
const W: usize = 0;
const X: usize = 1;
const YD: usize = 2;
const YP: usize = 3;

struct EarlyTerms {
    /// I(X; Y_partner)
    partner: f64,
    /// I(X; Y_dest)
    dest: f64,
    /// I(X; Y_partner | W)
    partner_given_w: f64,
    /// I(X; Y_dest | W)
    dest_given_w: f64,
    /// I(X; Y_dest, Y_partner)
    both: f64,
}

fn early_terms(j: &JointPmf) -> Result<EarlyTerms> {
    Ok(EarlyTerms {
        partner: mutual_information(j, &[X], &[YP], &[])?,
        dest: mutual_information(j, &[X], &[YD], &[])?,
        partner_given_w: mutual_information(j, &[X], &[YP], &[W])?,
        dest_given_w: mutual_information(j, &[X], &[YD], &[W])?,
        both: mutual_information(j, &[X], &[YD, YP], &[])?,
    })
}

/// Slot-3 mutual-information terms.
struct LastTerms {
    /// I(X13; Y3 | X23, cond_full)
    own1: f64,
    /// I(X23; Y3 | X13, cond_full)
    own2: f64,
    /// I(X13, X23; Y3 | cond_full)
    pair_full: f64,
    /// I(X13, X23; Y3 | cond_v)
    pair_v: f64,
    /// I(X13, X23; Y3 | cond_u)
    pair_u: f64,
    /// I(X13, X23; Y3)
    pair: f64,
}

fn last_terms(
    j: &JointPmf,
    x13: usize,
    x23: usize,
    y3: usize,
    cond_full: &[usize],
    cond_u: &[usize],
    cond_v: &[usize],
) -> Result<LastTerms> {
    let with = |extra: usize| {
        let mut c = vec![extra];
        c.extend_from_slice(cond_full);
        c
    };
    Ok(LastTerms {
        own1: mutual_information(j, &[x13], &[y3], &with(x23))?,
        own2: mutual_information(j, &[x23], &[y3], &with(x13))?,
        pair_full: mutual_information(j, &[x13, x23], &[y3], cond_full)?,
        pair_v: mutual_information(j, &[x13, x23], &[y3], cond_v)?,
        pair_u: mutual_information(j, &[x13, x23], &[y3], cond_u)?,
        pair: mutual_information(j, &[x13, x23], &[y3], &[])?,
    })
}

/// Slot-3 joint `[u, v, x13, x23, y3]` of the partial decode-forward inputs.
fn pdf_last_joint(ch: &SlotChannels, d: &PdfInputDistribution) -> Result<JointPmf> {
    let pu = marginal_of_second(&d.pmf_x10_u);
    let pv = marginal_of_second(&d.pmf_x20_v);
    JointPmf::from_fn(vec![pu.len(), pv.len(), ch.x13(), ch.x23(), ch.y3()], |i| {
        pu[i[0]]
            * pv[i[1]]
            * d.pmf_x13_given_uv.at(&[i[0], i[1], i[2]])
            * d.pmf_x23_given_uv.at(&[i[0], i[1], i[3]])
            * ch.slot3.at(&[i[2], i[3], i[4]])
    })
}

fn marginal_of_second(t: &Table) -> Vec<f64> {
    let (n0, n1) = (t.shape[0], t.shape[1]);
    (0..n1).map(|j| (0..n0).map(|i| t.at(&[i, j])).sum()).collect()
}

fn six(b: [f64; 6]) -> LinearRegion {
    LinearRegion {
        r1_bounds: vec![b[0]],
        r2_bounds: vec![b[1]],
        sum_bounds: vec![b[2], b[3], b[4], b[5]],
    }
}

/// Partial decode-forward region with joint decoding at the destination.
pub fn dmc_pdf_joint_region(
    ch: &SlotChannels,
    dist: &PdfInputDistribution,
    slots: &TimeSlots,
) -> Result<LinearRegion> {
    pdf_dmc_region(ch, dist, slots, false)
}

/// Partial decode-forward region with slot-by-slot decoding at the destination.
pub fn dmc_pdf_separate_region(
    ch: &SlotChannels,
    dist: &PdfInputDistribution,
    slots: &TimeSlots,
) -> Result<LinearRegion> {
    pdf_dmc_region(ch, dist, slots, true)
}

fn pdf_dmc_region(
    ch: &SlotChannels,
    dist: &PdfInputDistribution,
    slots: &TimeSlots,
    separate: bool,
) -> Result<LinearRegion> {
    ch.validate()?;
    dist.validate(ch)?;
    let e1 = early_terms(&early_slot_joint(&dist.pmf_x10_u, &ch.slot1)?)?;
    let e2 = early_terms(&early_slot_joint(&dist.pmf_x20_v, &ch.slot2)?)?;
    let j3 = pdf_last_joint(ch, dist)?;
    let t = last_terms(&j3, 2, 3, 4, &[0, 1], &[0], &[1])?;

    let (d1, d2) = if separate {
        (
            e1.partner_given_w.min(e1.dest_given_w),
            e2.partner_given_w.min(e2.dest_given_w),
        )
    } else {
        (e1.dest, e2.dest)
    };
    Ok(six(assemble(slots, e1.partner, e2.partner, d1, d2, &t)))
}

fn assemble(s: &TimeSlots, coop1: f64, coop2: f64, d1: f64, d2: f64, t: &LastTerms) -> [f64; 6] {
    let (a1, a2, a3) = (s.a1, s.a2, s.a3);
    [
        slot_term(a1, coop1) + slot_term(a3, t.own1),
        slot_term(a2, coop2) + slot_term(a3, t.own2),
        slot_term(a1, coop1) + slot_term(a2, coop2) + slot_term(a3, t.pair_full),
        slot_term(a1, d1) + slot_term(a2, coop2) + slot_term(a3, t.pair_v),
        slot_term(a1, coop1) + slot_term(a2, d2) + slot_term(a3, t.pair_u),
        slot_term(a1, d1) + slot_term(a2, d2) + slot_term(a3, t.pair),
    ]
}

/// Decode-forward region with joint decoding at the destination.
pub fn dmc_df_region(
    ch: &SlotChannels,
    dist: &DfInputDistribution,
    slots: &TimeSlots,
) -> Result<LinearRegion> {
    ch.validate()?;
    dist.validate(ch)?;
    let as_joint = |pmf: &Table| Table::from_fn(vec![pmf.shape[0], 1], |i| pmf.values[i[0]]);
    let e1 = early_terms(&early_slot_joint(&as_joint(&dist.pmf_x12), &ch.slot1)?)?;
    let e2 = early_terms(&early_slot_joint(&as_joint(&dist.pmf_x21), &ch.slot2)?)?;
    let ns = dist.pmf_s.shape[0];
    let j3 = JointPmf::from_fn(vec![ns, ch.x13(), ch.x23(), ch.y3()], |i| {
        dist.pmf_s.values[i[0]]
            * dist.pmf_x13_given_s.at(&[i[0], i[1]])
            * dist.pmf_x23_given_s.at(&[i[0], i[2]])
            * ch.slot3.at(&[i[1], i[2], i[3]])
    })?;
    // The middle sum bounds carry no conditioning at all.
    let t = last_terms(&j3, 1, 2, 3, &[0], &[], &[])?;
    Ok(six(assemble(slots, e1.partner, e2.partner, e1.dest, e2.dest, &t)))
}

/// Outer bounds for the discrete channel.
pub fn dmc_outer_region(
    variant: OuterVariant,
    ch: &SlotChannels,
    dist: &OuterInputDistribution,
    slots: &TimeSlots,
) -> Result<LinearRegion> {
    ch.validate()?;
    dist.validate(ch)?;
    let e1 = early_terms(&early_slot_joint(&dist.pmf_x10_u, &ch.slot1)?)?;
    let e2 = early_terms(&early_slot_joint(&dist.pmf_x20_v, &ch.slot2)?)?;
    let (nx10, nu) = (dist.pmf_x10_u.shape[0], dist.pmf_x10_u.shape[1]);
    let (nx20, nv) = (dist.pmf_x20_v.shape[0], dist.pmf_x20_v.shape[1]);
    // [u, v, x10, x20, x13, x23, y3]
    let j3 = JointPmf::from_fn(vec![nu, nv, nx10, nx20, ch.x13(), ch.x23(), ch.y3()], |i| {
        dist.pmf_x10_u.at(&[i[2], i[0]])
            * dist.pmf_x20_v.at(&[i[3], i[1]])
            * dist.pmf_x13_given_uvx10.at(&[i[0], i[1], i[2], i[4]])
            * dist.pmf_x23_given_uvx20.at(&[i[0], i[1], i[3], i[5]])
            * ch.slot3.at(&[i[4], i[5], i[6]])
    })?;
    let t = last_terms(&j3, 4, 5, 6, &[0, 1], &[0], &[1])?;
    let b = assemble(slots, e1.both, e2.both, e1.dest, e2.dest, &t);
    Ok(match variant {
        OuterVariant::Pdf => six(b),
        OuterVariant::Df => LinearRegion {
            r1_bounds: vec![b[0]],
            r2_bounds: vec![b[1]],
            sum_bounds: vec![b[2], b[5]],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Noiseless binary channels: Y1 = Y12 = X10, Y3 = X13 xor X23.
    fn noiseless() -> SlotChannels {
        let early = Table::from_fn(vec![2, 2, 2], |i| {
            if i[1] == i[0] && i[2] == i[0] {
                1.0
            } else {
                0.0
            }
        });
        SlotChannels {
            slot1: early.clone(),
            slot2: early,
            slot3: Table::from_fn(vec![2, 2, 2], |i| if i[2] == i[0] ^ i[1] { 1.0 } else { 0.0 }),
        }
    }

    fn uniform_pdf() -> PdfInputDistribution {
        PdfInputDistribution {
            pmf_x10_u: Table::uniform(vec![2, 2], 0),
            pmf_x20_v: Table::uniform(vec![2, 2], 0),
            pmf_x13_given_uv: Table::uniform(vec![2, 2, 2], 2),
            pmf_x23_given_uv: Table::uniform(vec![2, 2, 2], 2),
        }
    }

    fn thirds() -> TimeSlots {
        TimeSlots::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap()
    }

    #[test]
    fn noiseless_pdf_joint() {
        let r = dmc_pdf_joint_region(&noiseless(), &uniform_pdf(), &thirds()).unwrap();
        // I(X13; Y3 | X23, U, V) = 1 bit for the xor channel.
        assert!((r.r1_bounds[0] - 2.0 / 3.0).abs() < 1e-12);
        let c = dmc_pdf_separate_region(&noiseless(), &uniform_pdf(), &thirds()).unwrap();
        assert_eq!(r.r1_bounds, c.r1_bounds);
        assert_eq!(r.r2_bounds, c.r2_bounds);
        assert_eq!(r.sum_bounds[0], c.sum_bounds[0]);
    }

    #[test]
    fn useless_third_slot() {
        let mut ch = noiseless();
        ch.slot3 = Table::from_fn(vec![2, 2, 2], |i| if i[2] == 0 { 0.3 } else { 0.7 });
        let s = thirds();
        let r = dmc_pdf_joint_region(&ch, &uniform_pdf(), &s).unwrap();
        assert!((r.sum_bounds[3] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn point_masses_give_zero() {
        let d = PdfInputDistribution {
            pmf_x10_u: Table::point_mass(vec![2, 2], &[1, 0]),
            pmf_x20_v: Table::point_mass(vec![2, 2], &[0, 1]),
            pmf_x13_given_uv: Table::from_fn(vec![2, 2, 2], |i| (i[2] == 0) as u8 as f64),
            pmf_x23_given_uv: Table::from_fn(vec![2, 2, 2], |i| (i[2] == 1) as u8 as f64),
        };
        let s = thirds();
        let ch = noiseless();
        for r in [
            dmc_pdf_joint_region(&ch, &d, &s).unwrap(),
            dmc_pdf_separate_region(&ch, &d, &s).unwrap(),
            dmc_outer_region(OuterVariant::Pdf, &ch, &d.extend_to_outer(), &s).unwrap(),
        ] {
            assert!(r.all_bounds().iter().all(|&b| b == 0.0));
        }
    }

    #[test]
    fn df_examples() {
        let ch = noiseless();
        let s = thirds();
        let d = DfInputDistribution {
            pmf_x12: Table::uniform(vec![2], 0),
            pmf_x21: Table::uniform(vec![2], 0),
            pmf_s: Table::uniform(vec![2], 0),
            pmf_x13_given_s: Table::uniform(vec![2, 2], 1),
            pmf_x23_given_s: Table::uniform(vec![2, 2], 1),
        };
        let r = dmc_df_region(&ch, &d, &s).unwrap();
        assert!((r.sum_bounds[0] - (2.0 / 3.0 + 1.0 / 3.0)).abs() < 1e-12);

        // Constant S: conditional slot-3 terms equal unconditional ones.
        let mut pm = d.clone();
        pm.pmf_s = Table::point_mass(vec![2], &[0]);
        let r = dmc_df_region(&ch, &pm, &s).unwrap();
        assert!((r.sum_bounds[0] - r.sum_bounds[3]).abs() < 1e-12);

        // Dead inter-user link in slot 1.
        let mut dead = ch.clone();
        dead.slot1 = Table::from_fn(vec![2, 2, 2], |i| if i[1] == i[0] { 0.5 } else { 0.0 });
        let r = dmc_df_region(&dead, &d, &s).unwrap();
        assert!((r.r1_bounds[0] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn constant_destination_output_collapses_outer_r1() {
        let mut ch = noiseless();
        ch.slot1 = Table::from_fn(vec![2, 2, 2], |i| if i[1] == 0 && i[2] == i[0] { 1.0 } else { 0.0 });
        let d = uniform_pdf();
        let s = thirds();
        let inner = dmc_pdf_joint_region(&ch, &d, &s).unwrap();
        let outer = dmc_outer_region(OuterVariant::Pdf, &ch, &d.extend_to_outer(), &s).unwrap();
        assert!((inner.r1_bounds[0] - outer.r1_bounds[0]).abs() < 1e-12);
        let df = dmc_outer_region(OuterVariant::Df, &ch, &d.extend_to_outer(), &s).unwrap();
        assert_eq!(df.sum_bounds.len(), 2);
        assert_eq!(df.sum_bounds[1], outer.sum_bounds[3]);
    }

    #[test]
    fn dimension_errors() {
        let mut d = uniform_pdf();
        d.pmf_x10_u = Table::uniform(vec![3, 2], 0);
        assert!(matches!(
            dmc_pdf_joint_region(&noiseless(), &d, &thirds()),
            Err(Error::Dimension(_))
        ));
        let mut ch = noiseless();
        ch.slot3 = Table::uniform(vec![5, 2, 2], 2);
        assert!(ch.validate().is_err());
    }
}
