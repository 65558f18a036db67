use proptest::prelude::*;

use pdem::ambiguity::{AmbiguityParams, Preset};
use pdem::catalog::{self, Counting, Potential};
use pdem::oracle::{eigenpairs, TridiagonalOperator};
use pdem::ordering::{recover_initial_potential, v_tilde_eval, OrderingContext};
use pdem::report::fmt_f64;
use pdem::verify::probe_points;

/// A catalog entry with its deformation scaled by `t`, when that stays in range.
fn scaled(entry: usize, t: f64) -> Option<Potential> {
    let p = catalog::defaults().swap_remove(entry % 10);
    let alpha = *p.deformation().get("alpha")?;
    p.with_param("alpha", alpha * t).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivatives_match_central_differences(entry in 0usize..10, t in 0.2f64..1.5, k in 0usize..41) {
        let Some(p) = scaled(entry, t) else { return Ok(()) };
        let df = p.deforming();
        let x = probe_points(&p, 41)[k];
        let h = 1e-5 * x.abs().max(1.0);
        let (Ok(lo), Ok(mid), Ok(hi)) = (df.eval(x - h), df.eval(x), df.eval(x + h)) else {
            return Ok(());
        };
        let d1 = (hi.f - lo.f) / (2.0 * h);
        let d2 = (hi.f_prime - lo.f_prime) / (2.0 * h);
        let scale = mid.f.abs() + mid.f_prime.abs() + mid.f_second.abs();
        prop_assert!((d1 - mid.f_prime).abs() < 1e-6 * scale, "{} x={x}: {d1} vs {}", p.name(), mid.f_prime);
        prop_assert!((d2 - mid.f_second).abs() < 1e-6 * scale, "{} x={x}: {d2} vs {}", p.name(), mid.f_second);
    }

    #[test]
    fn mass_is_inverse_square(entry in 0usize..10, t in 0.2f64..1.5, k in 0usize..41) {
        let Some(p) = scaled(entry, t) else { return Ok(()) };
        let s = p.deforming().eval(probe_points(&p, 41)[k]).unwrap();
        prop_assert!((s.mass * s.f * s.f - 1.0).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn v_tilde_round_trip(entry in 0usize..10, xi in -2.0f64..2.0, zeta in -2.0f64..2.0, k in 0usize..41) {
        let p = catalog::defaults().swap_remove(entry);
        let ctx = OrderingContext::new(p.deforming(), AmbiguityParams::reduce(xi, zeta));
        let x = probe_points(&p, 41)[k];
        let v = recover_initial_potential(&ctx, &|x| p.v_eff(x), x).unwrap();
        let v_eff = p.v_eff(x);
        let back = v + v_tilde_eval(&ctx, x).unwrap();
        prop_assert!((back - v_eff).abs() <= 8.0 * f64::EPSILON * v_eff.abs().max(v.abs()).max(1.0));
    }

    #[test]
    fn mass_exponents_round_trip(xi in -3.0f64..3.0, zeta in -3.0f64..3.0) {
        let a = AmbiguityParams::reduce(xi, zeta);
        let primed = a.mass_exponents();
        prop_assert!((primed.iter().sum::<f64>() + 1.0).abs() < 1e-12);
        let b = AmbiguityParams::from_mass_exponents(primed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!((a.rho() - 0.5 * (1.0 - xi - zeta)).abs() < 1e-15);
        prop_assert!((a.sigma() - (0.5 - xi) * (0.5 - zeta)).abs() < 1e-14);
    }

    #[test]
    fn sturm_count_is_monotone_and_counts_eigenvalues(
        diag in prop::collection::vec(-10.0f64..10.0, 2..40),
        seed in prop::collection::vec(-3.0f64..3.0, 40),
        t in prop::collection::vec(-25.0f64..25.0, 2..8),
    ) {
        let off: Vec<f64> = seed[..diag.len() - 1].iter().map(|v| if v.abs() < 1e-3 { 1e-3 } else { *v }).collect();
        let op = TridiagonalOperator::from_matrix(diag.clone(), off).unwrap();
        let mut ts = t.clone();
        ts.sort_by(f64::total_cmp);
        let counts: Vec<usize> = ts.iter().map(|&t| op.sturm_count(t)).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        let (lo, hi) = op.gershgorin();
        prop_assert_eq!(op.sturm_count(lo - 1.0), 0);
        prop_assert_eq!(op.sturm_count(hi + 1.0), diag.len());
        let all = eigenpairs(&op, diag.len(), false).unwrap().eigenvalues;
        for &t in &ts {
            let below = all.iter().filter(|e| **e < t).count();
            let near = all.iter().any(|e| (e - t).abs() < 1e-9);
            prop_assert!(near || below == op.sturm_count(t));
        }
    }

    #[test]
    fn printed_doubles_read_back_exactly(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        prop_assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
    }

    #[test]
    fn counting_strings_round_trip(k in 1usize..10_000) {
        let c = Counting::Finite(k);
        prop_assert_eq!(c.to_string().parse::<Counting>().unwrap(), c);
    }
}

#[test]
fn presets_reduce_to_their_tabulated_pairs() {
    let table = [
        (Preset::Bdd, 0.5, 0.25),
        (Preset::Bastard, -0.5, -0.75),
        (Preset::Zk, -0.5, 0.25),
        (Preset::Lk, 0.0, -0.25),
    ];
    for (preset, rho, sigma) in table {
        let a = preset.params();
        assert_eq!(a, AmbiguityParams::reduce(a.xi(), a.zeta()));
        assert_eq!((a.rho(), a.sigma()), (rho, sigma), "{preset}");
    }
}
