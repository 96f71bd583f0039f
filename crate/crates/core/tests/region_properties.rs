use hdmac_core::hull::point_slack;
use hdmac_core::sampling::{random_df_point, random_pdf_point};
use hdmac_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GRID: usize = 400;

fn feasible(r: &LinearRegion, p: RatePoint, tol: f64) -> bool {
    p.0 >= -tol
        && p.1 >= -tol
        && p.0 <= r.min_r1() + tol
        && p.1 <= r.min_r2() + tol
        && p.0 + p.1 <= r.min_sum() + tol
}

fn bounds() -> impl Strategy<Value = LinearRegion> {
    (
        prop::collection::vec(0.0..3.0f64, 1..3),
        prop::collection::vec(0.0..3.0f64, 1..3),
        prop::collection::vec(0.0..5.0f64, 1..5),
    )
        .prop_map(|(a, b, s)| LinearRegion::new(a, b, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The polygon and the set of feasible grid points are within one grid
    /// diagonal of each other.
    #[test]
    fn polygon_matches_a_grid_of_feasible_points(r in bounds()) {
        let poly = r.polygon();
        let ext = r.min_r1().max(r.min_r2()).max(1e-9);
        let h = ext / GRID as f64;
        let diag = h * std::f64::consts::SQRT_2;
        let mut grid = Vec::new();
        for i in 0..=GRID {
            for j in 0..=GRID {
                let p = (i as f64 * h, j as f64 * h);
                if feasible(&r, p, 0.0) {
                    grid.push(p);
                }
            }
        }
        // Every feasible grid point lies in the polygon.
        for &p in &grid {
            prop_assert!(point_slack(&poly, p) >= -1e-9, "{p:?} outside {poly:?}");
        }
        // Every vertex is feasible and has a feasible grid point nearby.
        for &v in &poly.vertices {
            prop_assert!(feasible(&r, v, 1e-12));
            let near = grid
                .iter()
                .map(|q| ((q.0 - v.0).powi(2) + (q.1 - v.1).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            prop_assert!(near <= diag + 1e-12, "vertex {v:?} is {near} from the grid");
        }
    }

    /// The closed-form weighted value is the best vertex and no feasible
    /// grid point beats it.
    #[test]
    fn weighted_value_is_the_support_function(r in bounds(), t in 0.0..1.0f64) {
        let mu = ((t * std::f64::consts::FRAC_PI_2).cos(), (t * std::f64::consts::FRAC_PI_2).sin());
        let v = r.weighted_value(mu.0, mu.1);
        let (_, best) = weighted_best_vertex(&r.polygon(), mu).unwrap();
        prop_assert!((v - best).abs() < 1e-12);
        let ext = r.min_r1().max(r.min_r2()).max(1e-9);
        let h = ext / 100.0;
        let mut top = f64::NEG_INFINITY;
        for i in 0..=100 {
            for j in 0..=100 {
                let p = (i as f64 * h, j as f64 * h);
                if feasible(&r, p, 0.0) {
                    top = top.max(mu.0 * p.0 + mu.1 * p.1);
                }
            }
        }
        prop_assert!(top <= v + 1e-12);
        prop_assert!(top >= v - 2.0 * h * (mu.0 + mu.1));
    }

    #[test]
    fn hull_contains_its_points(pts in prop::collection::vec((0.0..2.0f64, 0.0..2.0f64), 1..30)) {
        let hull = upper_hull(&pts).unwrap();
        for &p in &pts {
            prop_assert!(point_slack(&hull, p) >= -1e-12);
        }
        // Every hull vertex is an input point, the origin, or an axis projection.
        let max1 = pts.iter().map(|p| p.0).fold(0.0, f64::max);
        let max2 = pts.iter().map(|p| p.1).fold(0.0, f64::max);
        for v in &hull.vertices {
            let known = pts.contains(v) || *v == (0.0, 0.0) || *v == (max1, 0.0) || *v == (0.0, max2);
            prop_assert!(known, "{v:?}");
        }
    }

    #[test]
    fn scaled_region_is_not_contained(r in bounds(), f in 1.001..1.5f64) {
        let poly = r.polygon();
        prop_assume!(poly.max_r1() > 1e-3 && poly.max_r2() > 1e-3);
        let big = RatePolygon { vertices: poly.vertices.iter().map(|p| (p.0 * f, p.1 * f)).collect() };
        prop_assert!(region_contains(&big, &poly, 1e-12).contained);
        prop_assert!(!region_contains(&poly, &big, 1e-9).contained);
    }

    #[test]
    fn c_gauss_is_increasing_and_concave(x in 0.0..100.0f64, d in 1e-3..10.0f64) {
        let c = |v: f64| c_gauss(v).unwrap();
        prop_assert!(c(x + d) > c(x));
        prop_assert!(c(x + d) - c(x) <= c(x) - c((x - d).max(0.0)) + 1e-12 || x < d);
    }

    #[test]
    fn extra_power_is_never_more_feasible(seed in 0u64..1000, f in 1.0..2.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let budget = PowerBudget::new(2.0, 1.0).unwrap();
        let (s, a) = random_df_point(&mut rng, &budget);
        let more = DfAllocation { p12: a.p12 * f, p13: a.p13 * f, ps1: a.ps1 * f, ..a };
        let u = power_feasible(&s, &Allocation::Df(a), &budget);
        let w = power_feasible(&s, &Allocation::Df(more), &budget);
        prop_assert!(u.feasible);
        prop_assert!(w.used1 >= u.used1);
        prop_assert!(!w.feasible || u.feasible);
    }

    #[test]
    fn fixed_allocation_containments(seed in 0u64..10_000, k in 0.5..6.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let budget = PowerBudget::new(2.0, 2.0).unwrap();
        let g = ChannelGains::symmetric(k, 1.0, 1.0).unwrap();
        let (s, a) = random_pdf_point(&mut rng, &budget);
        let joint = pdf_joint_region(&g, &s, &a).polygon();
        let sep = pdf_separate_region(&g, &s, &a).polygon();
        prop_assert!(region_contains(&joint, &sep, 1e-9).contained);
        if k > 1.0 {
            let partial = pdf_partial_user_region(&g, &s, &a).polygon();
            prop_assert!(region_contains(&joint, &partial, 1e-9).contained);
        }
        let (s, a) = random_df_point(&mut rng, &budget);
        let df = df_region(&g, &s, &a).polygon();
        let outer = gaussian_outer_region(&g, &s, &a).polygon();
        prop_assert!(region_contains(&outer, &df, 1e-9).contained);
    }
}

#[test]
fn degraded_correlation_turns_the_outer_bound_into_df() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let budget = PowerBudget::new(2.0, 2.0).unwrap();
    for (k12, k21, k10, k20) in [(2.0, 2.0, 1.0, 1.0), (3.0, 1.5, 0.5, 1.2)] {
        let g = ChannelGains::new(k12, k21, k10, k20, 1.0).unwrap();
        let rho = NoiseCorrelation::degrading(&g).unwrap();
        for _ in 0..100 {
            let (s, a) = random_df_point(&mut rng, &budget);
            let deg = degraded_outer_region(&g, &s, &a, &rho).unwrap();
            let df = df_region(&g, &s, &a);
            assert!((deg.min_r1() - df.min_r1()).abs() < 1e-12);
            assert!((deg.min_r2() - df.min_r2()).abs() < 1e-12);
            assert!((deg.min_sum() - df.min_sum()).abs() < 1e-12);
        }
    }
}

#[test]
fn unit_correlation_is_singular() {
    let g = ChannelGains::symmetric(2.0, 1.0, 1.0).unwrap();
    let rho = NoiseCorrelation::new(1.0, 0.0).unwrap();
    let s = TimeSlots::new(0.3, 0.3, 0.4).unwrap();
    let err = degraded_outer_region(&g, &s, &DfAllocation::default(), &rho).unwrap_err();
    assert_eq!(err, Error::SingularCorrelation(1.0));
}
