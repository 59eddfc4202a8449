use proptest::prelude::*;
use stepscatter_core::swf::Decomposition;
use stepscatter_core::*;

fn step(positive: bool, kappa0: f64, a: f64) -> StepPotential {
    let beta = if positive { Sign::Positive } else { Sign::Negative };
    StepPotential::from_kappa0(beta, kappa0, a, &PhysicalConfig::default()).unwrap()
}

/// k on the propagating branch: above κ0 for an upward step.
fn propagating_k(positive: bool, kappa0: f64, r: f64) -> f64 {
    if positive {
        kappa0 * (1.0 + 1e-3 + 20.0 * r)
    } else {
        kappa0 * (1e-3 + 20.0 * r)
    }
}

proptest! {
    #[test]
    fn coefficients_sum_to_one(positive: bool, kappa0 in 0.1f64..5.0, r in 0.0f64..1.0) {
        let s = step(positive, kappa0, 3.0);
        let k = propagating_k(positive, kappa0, r);
        let amp = stationary_amplitudes(&s, k).unwrap();
        prop_assert!((amp.trans_coef + amp.refl_coef - 1.0).abs() < 1e-12);
    }

    #[test]
    fn channels_add_up_to_total(positive: bool, r in 0.0f64..1.0, x in -30.0f64..30.0) {
        let s = step(positive, 1.0, 2.0);
        let k = propagating_k(positive, 1.0, r);
        let d = Decomposition::new(&s, k).unwrap();
        let total = total_wavefunction(&s, k, x).unwrap();
        let sum = d.transmission(x).0 + d.reflection(x).0;
        prop_assert!((sum - total).norm() < 1e-12 * total.norm().max(1.0));
    }

    #[test]
    fn reflection_is_currentless_and_transmission_carries_the_flux(
        positive: bool,
        r in 0.0f64..1.0,
        x in -10.0f64..10.0,
        hbar in 0.5f64..2.0,
        mass in 0.5f64..2.0,
    ) {
        let cfg = PhysicalConfig::new(hbar, mass).unwrap();
        let beta = if positive { Sign::Positive } else { Sign::Negative };
        let s = StepPotential::from_kappa0(beta, 1.0, 0.5, &cfg).unwrap();
        let k = propagating_k(positive, 1.0, r);
        let d = Decomposition::new(&s, k).unwrap();
        let (rv, rd) = d.reflection(x);
        prop_assert!(probability_current(rv, rd, &cfg).abs() < 1e-12);
        let (tv, td) = d.transmission(x);
        let expected = cfg.velocity(k) * d.stationary.trans_coef;
        prop_assert!((probability_current(tv, td, &cfg) / expected - 1.0).abs() < 1e-10);
    }

    #[test]
    fn flow_velocity_stays_between_asymptotic_speeds(positive: bool, r in 0.0f64..1.0, f in 0.0f64..1.0) {
        let cfg = PhysicalConfig::default();
        let s = step(positive, 1.0, 1.0);
        let k = propagating_k(positive, 1.0, r);
        let region = turning_point(&s, k).unwrap();
        let kappa = kappa_of_k(&s, k).unwrap().value();
        let v = flow_velocity(&s, k, 1.0 + f * region.length, &cfg).unwrap();
        let (lo, hi) = if k < kappa { (k, kappa) } else { (kappa, k) };
        prop_assert!(v >= lo * (1.0 - 1e-12) && v <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn penetration_depth_stays_inside_transitional_region(positive: bool, r in 0.0f64..1.0) {
        let s = step(positive, 1.0, 4.0);
        let k = propagating_k(positive, 1.0, r);
        let dw = dwell_times(&s, k, &PhysicalConfig::default()).unwrap();
        let region = turning_point(&s, k).unwrap();
        prop_assert!(dw.l_depth > 0.0);
        prop_assert!(s.a() + dw.l_depth <= region.x_c);
    }
}

#[test]
fn threshold_energy_is_rejected() {
    let s = step(true, 1.0, 1.0);
    assert_eq!(kappa_of_k(&s, 1.0), Err(Error::DegenerateEnergy { k: 1.0 }));
    assert!(dwell_times(&s, 1.0, &PhysicalConfig::default()).is_err());
    assert!(matches!(kappa_of_k(&s, -1.0), Err(Error::NonPositiveWavenumber(_))));
}

#[test]
fn evanescent_total_wave_is_reflection() {
    let s = step(true, 1.0, 3.0);
    for x in [-4.0, 2.9, 3.0, 3.5, 10.0] {
        let total = total_wavefunction(&s, 0.6, x).unwrap();
        let reflected = swf::total_reflection_swf(&s, 0.6, x).unwrap();
        assert_eq!(total, reflected);
        assert_eq!(swf::total_reflection_swf_tr(&s, 0.6, x).unwrap().norm(), 0.0);
    }
    let amp = stationary_amplitudes(&s, 0.6).unwrap();
    assert!((amp.amp_b.norm() - 1.0).abs() < 1e-15);
}
