//! Final polish of a search result with the central-cut ellipsoid method.
//!
//! In coordinates made of the two early slot lengths and each user's
//! energy shares, every bound is jointly concave, and so is the weighted
//! objective (a minimum of nonnegative combinations of bounds). The
//! ellipsoid method needs only a supergradient, which is the gradient of
//! the active combination, so the kinks where several bounds meet are no
//! obstacle. A second pass maximizes the sum rate among points whose
//! weighted value is within a hair of the best, which resolves ties the
//! same way the coarse search does.

use crate::optimizer::{score, Evaluator};

const FD_STEP: f64 = 1e-7;
const GAP_TOL: f64 = 1e-11;
/// Slack on the weighted value allowed while the sum rate is maximized.
const LEX_SLACK: f64 = 1e-10;
/// Weighted values closer than this count as equal when picking the result.
const TIE: f64 = 1e-9;

struct Space<'a> {
    ev: &'a Evaluator,
    pdf: bool,
    dim: usize,
    /// Index ranges whose coordinates must sum to at most one.
    groups: [std::ops::Range<usize>; 3],
}

#[inline]
fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        (num / den).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Coefficients of the active combination of the six bounds.
fn active_weights(b: &[f64; 6], mu: (f64, f64)) -> [f64; 6] {
    let mut is = 2;
    for k in 3..6 {
        if b[k] < b[is] {
            is = k;
        }
    }
    let s = b[is];
    let (ia, a) = if b[0] <= s { (0, b[0]) } else { (is, s) };
    let (ib, bb) = if b[1] <= s { (1, b[1]) } else { (is, s) };
    let mut w = [0.0; 6];
    let (hi, lo, i_hi) = if mu.0 >= mu.1 {
        (mu.0, mu.1, ia)
    } else {
        (mu.1, mu.0, ib)
    };
    w[i_hi] += hi - lo;
    if a + bb <= s {
        w[ia] += lo;
        w[ib] += lo;
    } else {
        w[is] += lo;
    }
    w
}

fn objective(b: &[f64; 6], mu: (f64, f64)) -> f64 {
    let s = b[2].min(b[3]).min(b[4]).min(b[5]);
    score((b[0], b[1], s), mu).0
}

impl<'a> Space<'a> {
    fn new(ev: &'a Evaluator) -> Self {
        let pdf = ev.scheme().is_pdf();
        if pdf {
            Self {
                ev,
                pdf,
                dim: 10,
                groups: [0..2, 2..6, 6..10],
            }
        } else {
            Self {
                ev,
                pdf,
                dim: 6,
                groups: [0..2, 2..4, 4..6],
            }
        }
    }

    /// Search coordinates of a point given by slot lengths and energy shares.
    fn to_x(&self, z: &[f64]) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.dim);
        x.push(z[0].clamp(0.0, 1.0));
        x.push(z[1].clamp(0.0, 1.0 - x[0]));
        if self.pdf {
            for u in [&z[2..6], &z[6..10]] {
                let (w_priv, w_pub, w_last, w_own) = (u[0], u[1], u[2], u[3]);
                let f = (w_priv + w_pub).clamp(0.0, 1.0);
                let rest = 1.0 - f;
                let coop = (rest - w_last).max(0.0);
                x.extend([f, ratio(w_pub, f), ratio(coop, rest), ratio(w_own, coop)]);
            }
        } else {
            for u in [&z[2..4], &z[4..6]] {
                let f = u[0].clamp(0.0, 1.0);
                x.extend([f, ratio(u[1], 1.0 - f)]);
            }
        }
        x
    }

    fn bounds(&self, z: &[f64]) -> [f64; 6] {
        self.ev.bounds_at(&self.to_x(z))
    }

    fn group_of(&self, i: usize) -> &std::ops::Range<usize> {
        self.groups.iter().find(|g| g.contains(&i)).expect("every index has a group")
    }

    /// Most violated constraint as a cut normal, or `None` if `z` is feasible.
    fn violated(&self, z: &[f64]) -> Option<Vec<f64>> {
        let mut worst = 0.0;
        let mut cut = None;
        for (i, &v) in z.iter().enumerate() {
            if -v > worst {
                worst = -v;
                cut = Some((i..i + 1, -1.0));
            }
        }
        for g in &self.groups {
            let over = z[g.clone()].iter().sum::<f64>() - 1.0;
            if over > worst {
                worst = over;
                cut = Some((g.clone(), 1.0));
            }
        }
        cut.map(|(r, sign)| {
            let mut a = vec![0.0; self.dim];
            for i in r {
                a[i] = sign;
            }
            a
        })
    }

    /// Gradient of the combination `w` of bounds at `z` by one-sided
    /// differences that stay inside the feasible set.
    fn gradient(&self, z: &[f64], b: &[f64; 6], w: &[f64; 6], evals: &mut usize) -> Vec<f64> {
        let base: f64 = w.iter().zip(b).map(|(w, b)| w * b).sum();
        let mut y = z.to_vec();
        (0..self.dim)
            .map(|i| {
                let room = 1.0 - z[self.group_of(i).clone()].iter().sum::<f64>();
                let h = if room >= FD_STEP {
                    FD_STEP
                } else if z[i] >= FD_STEP {
                    -FD_STEP
                } else {
                    return 0.0;
                };
                y[i] = z[i] + h;
                let bh = self.bounds(&y);
                y[i] = z[i];
                *evals += 1;
                let v: f64 = w.iter().zip(&bh).map(|(w, b)| w * b).sum();
                (v - base) / h
            })
            .collect()
    }

    /// Maximizes the `mu` objective, optionally subject to the `floor`
    /// objective staying at or above a level. Returns the best feasible
    /// point found with its `mu` value.
    fn ellipsoid(
        &self,
        mu: (f64, f64),
        floor: Option<((f64, f64), f64)>,
        evals: &mut usize,
    ) -> Option<(Vec<f64>, f64)> {
        let n = self.dim;
        let nf = n as f64;
        let mut c = vec![0.5; n];
        // A ball around the unit box.
        let mut p = vec![0.0; n * n];
        for i in 0..n {
            p[i * n + i] = nf / 4.0 * 1.01;
        }
        let mut best: Option<(Vec<f64>, f64)> = None;
        let mut upper = f64::INFINITY;
        let mut pa = vec![0.0; n];
        let scale_a = nf * nf / (nf * nf - 1.0);
        let scale_b = 2.0 / (nf + 1.0);
        for _ in 0..100 * n * n {
            // Cut normal `a`: the next ellipsoid keeps `a . (z - c) <= 0`.
            let a = if let Some(a) = self.violated(&c) {
                a
            } else {
                let b = self.bounds(&c);
                *evals += 1;
                let below = floor.and_then(|(m, level)| {
                    (objective(&b, m) < level).then_some(m)
                });
                if let Some(m) = below {
                    let g = self.gradient(&c, &b, &active_weights(&b, m), evals);
                    g.into_iter().map(|v| -v).collect()
                } else {
                    let v = objective(&b, mu);
                    let g = self.gradient(&c, &b, &active_weights(&b, mu), evals);
                    let spread = quad(&p, &g, n).max(0.0).sqrt();
                    upper = upper.min(v + spread);
                    if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
                        best = Some((c.clone(), v));
                    }
                    if let Some((_, bv)) = &best {
                        if upper - bv <= GAP_TOL * bv.abs().max(1.0) {
                            break;
                        }
                    }
                    g.into_iter().map(|v| -v).collect()
                }
            };
            let den = quad(&p, &a, n);
            if !(den > 0.0 && den.is_finite()) {
                break;
            }
            let den = den.sqrt();
            for i in 0..n {
                pa[i] = (0..n).map(|j| p[i * n + j] * a[j]).sum::<f64>() / den;
            }
            for i in 0..n {
                c[i] -= pa[i] / (nf + 1.0);
            }
            for i in 0..n {
                for j in 0..=i {
                    let v = scale_a * (p[i * n + j] - scale_b * pa[i] * pa[j]);
                    p[i * n + j] = v;
                    p[j * n + i] = v;
                }
            }
        }
        best
    }
}

fn quad(p: &[f64], a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| p[i * n + j] * a[j]).sum();
        s += a[i] * row;
    }
    s
}

/// Returns whichever of `x` and the polished point is better, with the
/// evaluations spent.
pub(crate) fn polish(ev: &Evaluator, mu: (f64, f64), x: Vec<f64>) -> (Vec<f64>, usize) {
    let space = Space::new(ev);
    let mut evals = 0;
    let (p0, s0) = score(ev.abs(&x), mu);
    let Some((z1, v1)) = space.ellipsoid(mu, None, &mut evals) else {
        return (x, evals);
    };
    let mut z = z1;
    if mu.0 != mu.1 {
        let level = v1.max(p0) - LEX_SLACK;
        if let Some((z2, _)) = space.ellipsoid((1.0, 1.0), Some((mu, level)), &mut evals) {
            z = z2;
        }
    }
    let cand = space.to_x(&z);
    let (p, s) = score(ev.abs(&cand), mu);
    evals += 1;
    let take = p > p0 + TIE || (p >= p0 - TIE && s >= s0);
    (if take { cand } else { x }, evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ChannelGains, PowerBudget};
    use crate::optimizer::{decode_df, Scheme};

    #[test]
    fn weights_reproduce_the_objective() {
        let cases = [
            [1.0, 1.0, 1.5, 2.0, 2.0, 2.0],
            [0.4, 1.0, 1.2, 0.9, 2.0, 2.0],
            [1.0, 0.3, 0.8, 2.0, 2.0, 2.0],
            [0.2, 0.3, 2.0, 2.0, 2.0, 0.4],
        ];
        for b in cases {
            for mu in [(1.0, 0.0), (0.0, 1.0), (0.3, 0.7), (0.8, 0.6), (1.0, 1.0)] {
                let w = active_weights(&b, mu);
                let v: f64 = w.iter().zip(&b).map(|(w, b)| w * b).sum();
                assert!((v - objective(&b, mu)).abs() < 1e-15, "{b:?} {mu:?}");
            }
        }
    }

    #[test]
    fn energy_shares_map_back_to_the_same_powers() {
        let g = ChannelGains::symmetric(2.0, 1.0, 1.0).unwrap();
        let budget = PowerBudget::new(2.0, 3.0).unwrap();
        let ev = Evaluator::new(&g, &budget, Scheme::Df).unwrap();
        let space = Space::new(&ev);
        let z = [0.2, 0.3, 0.1, 0.6, 0.5, 0.25];
        let (s, a) = decode_df(&space.to_x(&z), &budget);
        assert!((a.p12 * s.a1 - 0.1 * 2.0).abs() < 1e-12);
        assert!((a.p13 * s.a3 - 0.6 * 2.0).abs() < 1e-12);
        assert!((a.ps1 * s.a3 - 0.3 * 2.0).abs() < 1e-12);
        assert!((a.p21 * s.a2 - 0.5 * 3.0).abs() < 1e-12);
        assert!((a.ps2 * s.a3 - 0.25 * 3.0).abs() < 1e-12);
    }
}
