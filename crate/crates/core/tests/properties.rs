use proptest::prelude::*;

use decoherence::averaging::phase_average;
use decoherence::evolution::{cubic_from_initial, purity, GaussianDensityMatrix};
use decoherence::spectral::{mean_excitation, von_neumann_entropy};
use decoherence::units::{convert_dimension, convert_length, LengthUnit};

const PL: LengthUnit = LengthUnit::PlanckLength;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Mixed, chirped state with position variance 1/(8C).
fn state() -> impl Strategy<Value = GaussianDensityMatrix> {
    (0.05_f64..5.0, 0.0_f64..3.0, -0.95_f64..0.95).prop_map(|(c, mix, bf)| {
        let a = c * (1.0 + mix);
        GaussianDensityMatrix::new(a, bf * (a * c).sqrt(), c, PL).unwrap()
    })
}

proptest! {
    #[test]
    fn unit_round_trip(x in -1e3_f64..1e3, power in -4_i32..=4) {
        let m = convert_length(x, PL, LengthUnit::Meter).unwrap();
        prop_assert!((convert_length(m, LengthUnit::Meter, PL).unwrap() - x).abs() <= 1e-12 * x.abs().max(1e-300));
        let d = convert_dimension(x, power, PL, LengthUnit::Meter).unwrap();
        let back = convert_dimension(d, power, LengthUnit::Meter, PL).unwrap();
        prop_assert!((back - x).abs() <= 1e-12 * x.abs());
    }

    #[test]
    fn evolution_composes(s in state(), lambda in 0.0_f64..10.0, t1 in 0.0_f64..5.0, t2 in 0.0_f64..5.0) {
        let cubic = cubic_from_initial(&s, lambda).unwrap();
        let direct = cubic.evolve(t1 + t2).unwrap();
        let stepped = cubic_from_initial(&cubic.evolve(t1).unwrap(), lambda).unwrap().evolve(t2).unwrap();
        let scale = (direct.a() * direct.c()).sqrt();
        prop_assert!(rel(stepped.a(), direct.a()) < 1e-9);
        prop_assert!(rel(stepped.c(), direct.c()) < 1e-9);
        prop_assert!((stepped.b() - direct.b()).abs() < 1e-9 * direct.b().abs().max(scale));
    }

    #[test]
    fn evolved_states_stay_physical(s in state(), lambda in 0.0_f64..10.0, tau in 0.0_f64..20.0) {
        let cubic = cubic_from_initial(&s, lambda).unwrap();
        let e = cubic.evolve(tau).unwrap();
        prop_assert!(e.a() >= e.c() && e.c() > 0.0);
        prop_assert!(cubic.uncertainty_product(tau) >= 0.25 * (1.0 - 1e-12));
        let p = purity(&e);
        prop_assert!(p > 0.0 && p <= 1.0 + 1e-12);
    }

    #[test]
    fn mixing_never_decreases_under_decoherence(s in state(), lambda in 0.0_f64..10.0, t1 in 0.0_f64..5.0, dt in 0.0_f64..5.0) {
        let cubic = cubic_from_initial(&s, lambda).unwrap();
        let early = purity(&cubic.evolve(t1).unwrap());
        let late = purity(&cubic.evolve(t1 + dt).unwrap());
        prop_assert!(late <= early * (1.0 + 1e-12));
    }

    #[test]
    fn phase_average_keeps_spectrum(s in state()) {
        let avg = phase_average(&s);
        prop_assert_eq!(avg.b(), 0.0);
        prop_assert_eq!(phase_average(&avg), avg);
        let (n, na) = (mean_excitation(&s), mean_excitation(&avg));
        prop_assert!((na - n).abs() <= 1e-12 * n.max(1e-12));
        prop_assert!((von_neumann_entropy(na) - von_neumann_entropy(n)).abs() <= 1e-12);
        prop_assert!(rel(purity(&avg), purity(&s)) <= 1e-12);
    }
}
