use hdmac_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bound(cs: &[MUserConstraint], kind: &ConstraintKind) -> f64 {
    cs.iter().find(|c| &c.kind == kind).unwrap().bound
}

fn two_user(g: &ChannelGains) -> MUserGains {
    MUserGains {
        m: 2,
        k_user: vec![vec![0.0, g.k12], vec![g.k21, 0.0]],
        k_dest: vec![g.k10, g.k20],
        noise: g.noise,
    }
}

fn as_muser(s: &TimeSlots, a: &DfAllocation) -> MUserAllocation {
    MUserAllocation {
        slots: vec![s.a1, s.a2, s.a3],
        p_solo: vec![a.p12, a.p21],
        p_priv: vec![a.p13, a.p23],
        p_coop: vec![a.ps1, a.ps2],
    }
}

#[test]
fn two_users_reproduce_df_and_outer() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let budget = PowerBudget::new(2.0, 1.5).unwrap();
    for _ in 0..100 {
        let g = ChannelGains::new(
            rng.random_range(0.0..4.0),
            rng.random_range(0.0..4.0),
            rng.random_range(0.0..4.0),
            rng.random_range(0.0..4.0),
            rng.random_range(0.5..2.0),
        )
        .unwrap();
        let (s, a) = sampling::random_df_point(&mut rng, &budget);
        let mg = two_user(&g);
        let ma = as_muser(&s, &a);
        let budgets = [budget.p1, budget.p2];
        let ach = muser_achievable_constraints(&mg, &ma, &budgets).unwrap();
        let out = muser_outer_constraints(&mg, &ma, &budgets).unwrap();
        assert_eq!(ach.len(), 3 + 4);

        let df = df_region(&g, &s, &a).all_bounds();
        let pairs = [
            (ConstraintKind::Subset(vec![1]), df[0]),
            (ConstraintKind::Subset(vec![2]), df[1]),
            (ConstraintKind::Subset(vec![1, 2]), df[2]),
            (ConstraintKind::TotalSum { lambda: vec![2] }, df[3]),
            (ConstraintKind::TotalSum { lambda: vec![1] }, df[4]),
            (ConstraintKind::TotalSum { lambda: vec![] }, df[5]),
        ];
        for (kind, want) in &pairs {
            assert!((bound(&ach, kind) - want).abs() <= 1e-12, "{kind:?}");
        }

        let outer = gaussian_outer_region(&g, &s, &a).all_bounds();
        let pairs = [
            (ConstraintKind::Subset(vec![1]), outer[0]),
            (ConstraintKind::Subset(vec![2]), outer[1]),
            (ConstraintKind::Subset(vec![1, 2]), outer[2]),
            (ConstraintKind::TotalSum { lambda: vec![] }, outer[3]),
        ];
        for (kind, want) in &pairs {
            assert!((bound(&out, kind) - want).abs() <= 1e-12, "{kind:?}");
        }
    }
}

fn random_three(rng: &mut ChaCha8Rng, k_user_range: (f64, f64)) -> (MUserGains, MUserAllocation, Vec<f64>) {
    let m = 3;
    let mut k_user = vec![vec![0.0; m]; m];
    for (k, row) in k_user.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if j != k {
                *v = rng.random_range(k_user_range.0..k_user_range.1);
            }
        }
    }
    let g = MUserGains {
        m,
        k_user,
        k_dest: (0..m).map(|_| rng.random_range(0.3..1.0)).collect(),
        noise: rng.random_range(0.5..2.0),
    };
    let slots = sampling::dirichlet(rng, m + 1);
    let budgets: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..3.0)).collect();
    let mut a = MUserAllocation {
        slots,
        p_solo: vec![0.0; m],
        p_priv: vec![0.0; m],
        p_coop: vec![0.0; m],
    };
    // Split each budget's energy over the own slot, private and cooperative parts.
    for k in 0..m {
        let w = sampling::dirichlet(rng, 3);
        a.p_solo[k] = w[0] * budgets[k] / a.slots[k];
        a.p_priv[k] = w[1] * budgets[k] / a.slots[m];
        a.p_coop[k] = w[2] * budgets[k] / a.slots[m];
    }
    (g, a, budgets)
}

#[test]
fn three_users_achievable_never_exceeds_outer() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..50 {
        let (g, a, b) = random_three(&mut rng, (0.0, 3.0));
        let ach = muser_achievable_constraints(&g, &a, &b).unwrap();
        let out = muser_outer_constraints(&g, &a, &b).unwrap();
        assert_eq!(ach.len(), out.len());
        for (x, y) in ach.iter().zip(&out) {
            assert_eq!(x.kind, y.kind);
            assert!(x.bound <= y.bound + 1e-12, "{:?}: {} > {}", x.kind, x.bound, y.bound);
        }
    }
}

/// The explicit three-user region under the link-quality condition,
/// written out line by line. The fourth pair bound conditions on user 1's
/// signal, matching the pattern of the other pair bounds.
#[test]
fn explicit_three_user_form_under_the_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let (g, a, b) = random_three(&mut rng, (1.0, 3.0));
        assert!(muser_condition_check(&g).unwrap().holds);
        let n = g.noise;
        let c = |x: f64| c_gauss(x).unwrap();
        let early_min = |k: usize| {
            (0..3)
                .filter(|&j| j != k)
                .map(|j| c(g.k_user[k][j].powi(2) * a.p_solo[k] / n))
                .fold(f64::INFINITY, f64::min)
        };
        let direct = |k: usize| c(g.k_dest[k].powi(2) * a.p_solo[k] / n);
        let last = |t: &[usize]| c(t.iter().map(|&k| g.k_dest[k].powi(2) * a.p_priv[k]).sum::<f64>() / n);
        let coh: f64 = (0..3).map(|k| g.k_dest[k] * a.p_coop[k].sqrt()).sum();
        let priv_all: f64 = (0..3).map(|k| g.k_dest[k].powi(2) * a.p_priv[k]).sum();
        let al = &a.slots;

        let lines = [
            (vec![1], al[0] * early_min(0) + al[3] * last(&[0])),
            (vec![2], al[1] * early_min(1) + al[3] * last(&[1])),
            (vec![3], al[2] * early_min(2) + al[3] * last(&[2])),
            (vec![1, 2], al[0] * early_min(0) + al[1] * early_min(1) + al[3] * last(&[0, 1])),
            (vec![1, 3], al[0] * early_min(0) + al[2] * early_min(2) + al[3] * last(&[0, 2])),
            (vec![2, 3], al[1] * early_min(1) + al[2] * early_min(2) + al[3] * last(&[1, 2])),
            (
                vec![1, 2, 3],
                al[0] * early_min(0) + al[1] * early_min(1) + al[2] * early_min(2) + al[3] * last(&[0, 1, 2]),
            ),
        ];
        let ach = muser_achievable_constraints(&g, &a, &b).unwrap();
        for (t, want) in &lines {
            let got = bound(&ach, &ConstraintKind::Subset(t.clone()));
            assert!((got - want).abs() < 1e-12, "{t:?}: {got} vs {want}");
        }
        let total = al[0] * direct(0) + al[1] * direct(1) + al[2] * direct(2)
            + al[3] * c((priv_all + coh * coh) / n);
        let empty = bound(&ach, &ConstraintKind::TotalSum { lambda: vec![] });
        assert!((empty - total).abs() < 1e-12);
        // Under the condition the empty-lambda bound is the binding total bound.
        let min_total = ach
            .iter()
            .filter(|c| matches!(c.kind, ConstraintKind::TotalSum { .. }))
            .map(|c| c.bound)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min_total, empty);
    }
}

#[test]
fn achievable_subset_bounds_grow_with_the_subset() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..50 {
        let (g, a, b) = random_three(&mut rng, (0.0, 3.0));
        let ach = muser_achievable_constraints(&g, &a, &b).unwrap();
        let subset = |mask: usize| ach[mask - 1].bound;
        for small in 1..8usize {
            for big in 1..8usize {
                if small & big == small {
                    assert!(subset(small) <= subset(big) + 1e-15);
                }
            }
        }
    }
}

#[test]
fn dead_inter_user_links_leave_only_the_outer_gain() {
    let g = MUserGains {
        m: 3,
        k_user: vec![vec![0.0; 3]; 3],
        k_dest: vec![1.0, 0.5, 2.0],
        noise: 1.0,
    };
    let a = MUserAllocation {
        slots: vec![0.25; 4],
        p_solo: vec![2.0, 2.0, 2.0],
        p_priv: vec![1.0, 1.0, 1.0],
        p_coop: vec![1.0, 1.0, 1.0],
    };
    let b = a.power_usage();
    let ach = muser_achievable_constraints(&g, &a, &b).unwrap();
    let out = muser_outer_constraints(&g, &a, &b).unwrap();
    // The subset bounds lose every early-slot term; the outer keeps the direct ones.
    for k in 0..3 {
        let last = 0.25 * c_gauss(g.k_dest[k].powi(2) * a.p_priv[k]).unwrap();
        assert!((ach[(1 << k) - 1].bound - last).abs() < 1e-15);
        let solo = 0.25 * c_gauss(g.k_dest[k].powi(2) * 2.0).unwrap();
        assert!((out[(1 << k) - 1].bound - last - solo).abs() < 1e-15);
    }
}
