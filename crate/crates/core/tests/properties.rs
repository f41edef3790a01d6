use leaf_ldp::chain::{interpolate, simulate, ModelSpec, Scalar};
use leaf_ldp::cli::parse_grid;
use leaf_ldp::dist::{exact_poly, Pmf};
use leaf_ldp::path::{euler_solve, path_rate, PathFunction};
use leaf_ldp::pressure::{lln_mean, PressureEval};
use proptest::prelude::*;

fn linear_model() -> impl Strategy<Value = ModelSpec> {
    (1i64..=12, 1i64..=4)
        .prop_filter("s_2 >= 1 needs alpha >= 1/2", |&(num, den)| 2 * num >= den)
        .prop_flat_map(|(num, den)| {
            let alpha = num as f64 / den as f64;
            let top = alpha.floor() as u64;
            (Just((num, den)), 0..=top).prop_map(|((num, den), k0)| {
                ModelSpec::linear(Scalar::ratio(num, den), k0).unwrap()
            })
        })
}

fn any_preset() -> impl Strategy<Value = ModelSpec> {
    prop_oneof![
        linear_model(),
        Just(ModelSpec::uniform_recursive()),
        Just(ModelSpec::plane_oriented()),
        Just(ModelSpec::yule()),
        (0i64..=4).prop_map(|b| ModelSpec::pref_attach(Scalar::ratio(b, 2)).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectories_move_by_zero_or_one(model in any_preset(), n in 1u64..400, seed in any::<u64>()) {
        let t = simulate(&model, n, seed).unwrap();
        prop_assert_eq!(t.len() as u64, n);
        prop_assert_eq!(t.values[0], model.k0());
        for w in t.values.windows(2) {
            prop_assert!(w[1] == w[0] || w[1] == w[0] + 1);
        }
        prop_assert!(t.last() <= model.max_state(n));
    }

    #[test]
    fn interpolation_is_one_lipschitz(model in any_preset(), n in 2u64..300, seed in any::<u64>(),
                                      a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let t = simulate(&model, n, seed).unwrap();
        let (xa, xb) = (interpolate(&t, a).unwrap(), interpolate(&t, b).unwrap());
        prop_assert!((xa - xb).abs() <= (a - b).abs() + 1e-12);
    }

    #[test]
    fn pmf_is_normalized(model in any_preset(), n in 1u64..300) {
        let p = Pmf::at(&model, n).unwrap();
        prop_assert!(p.log_total().abs() < 1e-12);
        let (lo, hi) = p.attainable();
        prop_assert!(lo >= model.k0().min(1) && hi <= model.max_state(n));
        prop_assert!(p.iter().all(|(_, lp)| lp <= 1e-15));
    }

    #[test]
    fn exact_and_float_laws_agree(model in linear_model(), n in 1u64..25) {
        let exact = exact_poly(&model, n, 40).unwrap();
        let float = Pmf::at(&model, n).unwrap();
        for k in 0..=exact.degree() {
            prop_assert!((exact.coeff_f64(k) - float.prob(k as u64)).abs() < 1e-12);
        }
    }

    #[test]
    fn pressure_is_convex_and_anchored(num in 1i64..=16, l in -5.0f64..5.0, h in 0.01f64..0.5) {
        let alpha = num as f64 / 4.0;
        let ev = PressureEval::auto(alpha).unwrap();
        prop_assert_eq!(ev.pressure(0.0).unwrap(), 0.0);
        let mid = ev.pressure(l).unwrap();
        let side = 0.5 * (ev.pressure(l - h).unwrap() + ev.pressure(l + h).unwrap());
        prop_assert!(side >= mid - 1e-12);
        let (d1, d2) = ev.derivatives(l).unwrap();
        prop_assert!(d1 > 0.0 && d1 < ev.max_slope() + 1e-12);
        prop_assert!(d2 >= 0.0);
    }

    #[test]
    fn rate_is_nonnegative_and_dual(num in 1i64..=16, l in -4.0f64..4.0) {
        let alpha = num as f64 / 4.0;
        let ev = PressureEval::auto(alpha).unwrap();
        let (x, _) = ev.derivatives(l).unwrap();
        let r = ev.rate(x).unwrap();
        prop_assert!(r.rate >= 0.0);
        let legendre = l * x - ev.pressure(l).unwrap();
        prop_assert!((r.rate - legendre).abs() < 1e-8 * (1.0 + legendre.abs()));
        prop_assert_eq!(ev.rate(lln_mean(alpha)).unwrap().rate, 0.0);
    }

    #[test]
    fn grids_are_sorted_and_bounded(a in -10.0f64..10.0, span in 0.0f64..10.0, step in 0.01f64..2.0) {
        let spec = format!("{a}:{}:{step}", a + span);
        let g = parse_grid("g", &spec).unwrap();
        prop_assert!(!g.is_empty());
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(g[g.len() - 1] <= a + span + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// No admissible path beats the Euler solution with the same endpoint.
    #[test]
    fn euler_paths_minimize_cost(slopes in proptest::collection::vec(0.02f64..0.98, 2..12)) {
        let m = slopes.len();
        let knots: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
        let mut values = vec![0.0];
        for s in &slopes {
            values.push(values[values.len() - 1] + s / m as f64);
        }
        let x = values[m];
        let path = PathFunction::new(knots, values).unwrap();
        let cost = path_rate(&path, 2.0).unwrap();
        let best = euler_solve(2.0, x, 1e-10).unwrap();
        prop_assert!(cost >= best.cost - 1e-3, "path {cost} below optimum {}", best.cost);
    }
}
