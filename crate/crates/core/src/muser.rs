//! Gaussian m-user half-duplex channel: each user owns one early slot in
//! which the others overhear it, then all users transmit together in slot
//! `m + 1`.
//!
//! Signals: `X_kk = sqrt(p_solo[k]) Z_k` in slot `k`, and
//! `X_k,m+1 = sqrt(p_priv[k]) W_k + sqrt(p_coop[k]) S` in the last slot, with
//! all of `Z_k`, `W_k`, `S` independent standard normals.
//!
//! Users are labelled `1..=m` in constraint descriptors and condition reports.

use serde::{Deserialize, Serialize};

use crate::channel::{cap, slot_term, POWER_TOL};
use crate::error::{Error, Result};

/// Largest supported number of users.
pub const MAX_USERS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MUserGains {
    pub m: usize,
    /// `k_user[k][j]`: gain from user `k` to user `j`; the diagonal is unused.
    pub k_user: Vec<Vec<f64>>,
    pub k_dest: Vec<f64>,
    pub noise: f64,
}

impl MUserGains {
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 || self.m > MAX_USERS {
            return Err(Error::invalid(
                "MUserGains",
                format!("m must be in 2..={MAX_USERS}, got {}", self.m),
            ));
        }
        if self.k_user.len() != self.m || self.k_user.iter().any(|r| r.len() != self.m) {
            return Err(Error::Dimension(format!("k_user must be {0}x{0}", self.m)));
        }
        if self.k_dest.len() != self.m {
            return Err(Error::Dimension(format!("k_dest must have {} entries", self.m)));
        }
        for (k, row) in self.k_user.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if j != k && (!v.is_finite() || v < 0.0) {
                    return Err(Error::invalid(
                        "MUserGains",
                        format!("k_user[{k}][{j}] must be finite and >= 0, got {v}"),
                    ));
                }
            }
        }
        if let Some(v) = self.k_dest.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::invalid("MUserGains", format!("k_dest entry {v} must be >= 0")));
        }
        if !self.noise.is_finite() || self.noise <= 0.0 {
            return Err(Error::invalid("MUserGains", format!("noise must be > 0, got {}", self.noise)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MUserAllocation {
    /// `m + 1` slot fractions.
    pub slots: Vec<f64>,
    pub p_solo: Vec<f64>,
    pub p_priv: Vec<f64>,
    pub p_coop: Vec<f64>,
}

impl MUserAllocation {
    /// Average power used by each user.
    pub fn power_usage(&self) -> Vec<f64> {
        let last = *self.slots.last().unwrap_or(&0.0);
        (0..self.p_solo.len())
            .map(|k| self.slots[k] * self.p_solo[k] + last * (self.p_priv[k] + self.p_coop[k]))
            .collect()
    }

    /// Checks shapes, signs, the slot sum and the per-user power identity.
    pub fn validate(&self, m: usize, budgets: &[f64]) -> Result<()> {
        if self.slots.len() != m + 1 {
            return Err(Error::Dimension(format!("slots must have {} entries", m + 1)));
        }
        for (name, v) in [
            ("p_solo", &self.p_solo),
            ("p_priv", &self.p_priv),
            ("p_coop", &self.p_coop),
        ] {
            if v.len() != m {
                return Err(Error::Dimension(format!("{name} must have {m} entries")));
            }
        }
        if budgets.len() != m {
            return Err(Error::Dimension(format!("budgets must have {m} entries")));
        }
        let all = self
            .slots
            .iter()
            .chain(&self.p_solo)
            .chain(&self.p_priv)
            .chain(&self.p_coop)
            .chain(budgets);
        for v in all {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::invalid("MUserAllocation", format!("entry {v} must be >= 0")));
            }
        }
        let sum: f64 = self.slots.iter().sum();
        if (sum - 1.0).abs() > crate::channel::SLOT_SUM_TOL {
            return Err(Error::invalid("MUserAllocation", format!("slots sum to {sum}, expected 1")));
        }
        for (k, (used, budget)) in self.power_usage().iter().zip(budgets).enumerate() {
            if (used - budget).abs() > POWER_TOL {
                return Err(Error::invalid(
                    "MUserAllocation",
                    format!("user {} uses power {used}, budget identity needs {budget}", k + 1),
                ));
            }
        }
        Ok(())
    }
}

/// What a constraint bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// Sum of the rates of the listed users, others' last-slot signals known.
    Subset(Vec<usize>),
    /// Total sum rate; users in `lambda` use their overheard-link term in
    /// their own slot, the rest their direct term.
    TotalSum { lambda: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MUserConstraint {
    pub kind: ConstraintKind,
    pub bound: f64,
}

fn members(mask: usize, m: usize) -> Vec<usize> {
    (0..m).filter(|k| mask & (1 << k) != 0).collect()
}

fn labels(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|k| k + 1).collect()
}

/// Closed-form last-slot terms.
///
/// `I(X(T); Y | S, X(T^c))` for the users in `t`.
pub fn last_slot_subset_term(g: &MUserGains, a: &MUserAllocation, t: &[usize]) -> f64 {
    let snr: f64 = t.iter().map(|&k| g.k_dest[k].powi(2) * a.p_priv[k]).sum();
    cap(snr / g.noise)
}

/// `I(X_1, ..., X_m; Y)` in the last slot, with the coherent `S` gain.
pub fn last_slot_total_term(g: &MUserGains, a: &MUserAllocation) -> f64 {
    let m = g.m;
    let private: f64 = (0..m).map(|k| g.k_dest[k].powi(2) * a.p_priv[k]).sum();
    let coherent: f64 = (0..m).map(|k| g.k_dest[k] * a.p_coop[k].max(0.0).sqrt()).sum();
    cap((private + coherent * coherent) / g.noise)
}

fn solo_terms(g: &MUserGains, a: &MUserAllocation, outer: bool) -> (Vec<f64>, Vec<f64>) {
    let m = g.m;
    let n = g.noise;
    let direct: Vec<f64> = (0..m).map(|k| cap(g.k_dest[k].powi(2) * a.p_solo[k] / n)).collect();
    let coop = (0..m)
        .map(|k| {
            let others = (0..m).filter(|&j| j != k);
            if outer {
                let gain: f64 = g.k_dest[k].powi(2) + others.map(|j| g.k_user[k][j].powi(2)).sum::<f64>();
                cap(gain * a.p_solo[k] / n)
            } else {
                others
                    .map(|j| cap(g.k_user[k][j].powi(2) * a.p_solo[k] / n))
                    .fold(f64::INFINITY, f64::min)
            }
        })
        .collect();
    (coop, direct)
}

fn constraints(
    g: &MUserGains,
    a: &MUserAllocation,
    budgets: &[f64],
    outer: bool,
) -> Result<Vec<MUserConstraint>> {
    g.validate()?;
    a.validate(g.m, budgets)?;
    let m = g.m;
    let last = a.slots[m];
    let (coop, direct) = solo_terms(g, a, outer);
    let mut out = Vec::with_capacity(2 << m);
    for mask in 1..(1usize << m) {
        let t = members(mask, m);
        let early: f64 = t.iter().map(|&k| slot_term(a.slots[k], coop[k])).sum();
        out.push(MUserConstraint {
            kind: ConstraintKind::Subset(labels(&t)),
            bound: early + slot_term(last, last_slot_subset_term(g, a, &t)),
        });
    }
    let total = slot_term(last, last_slot_total_term(g, a));
    for mask in 0..(1usize << m) {
        let early: f64 = (0..m)
            .map(|k| {
                let term = if mask & (1 << k) != 0 { coop[k] } else { direct[k] };
                slot_term(a.slots[k], term)
            })
            .sum();
        out.push(MUserConstraint {
            kind: ConstraintKind::TotalSum {
                lambda: labels(&members(mask, m)),
            },
            bound: early + total,
        });
    }
    Ok(out)
}

/// Achievable constraints: `2^m - 1` subset bounds followed by `2^m`
/// total-sum bounds, both in increasing bitmask order of the user set.
pub fn muser_achievable_constraints(
    g: &MUserGains,
    a: &MUserAllocation,
    budgets: &[f64],
) -> Result<Vec<MUserConstraint>> {
    constraints(g, a, budgets, false)
}

/// Outer-bound constraints in the same order as the achievable ones; each
/// overheard-link minimum becomes the joint-observation term.
pub fn muser_outer_constraints(
    g: &MUserGains,
    a: &MUserAllocation,
    budgets: &[f64],
) -> Result<Vec<MUserConstraint>> {
    constraints(g, a, budgets, true)
}

/// Result of the link-quality condition check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub holds: bool,
    /// `(k, j)` pairs with `k_user[k][j] < k_dest[k]`, labelled from 1.
    pub failing: Vec<(usize, usize)>,
}

/// Whether every inter-user link is at least as good as the sender's direct
/// link. When it holds only the empty-`lambda` total-sum bound matters.
pub fn muser_condition_check(g: &MUserGains) -> Result<ConditionReport> {
    g.validate()?;
    let mut failing = Vec::new();
    for k in 0..g.m {
        for j in 0..g.m {
            if j != k && g.k_user[k][j] < g.k_dest[k] {
                failing.push((k + 1, j + 1));
            }
        }
    }
    Ok(ConditionReport {
        holds: failing.is_empty(),
        failing,
    })
}
