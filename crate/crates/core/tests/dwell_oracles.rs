use stepscatter_core::times::{dwell_time_oracle, DwellChannel};
use stepscatter_core::*;

fn k_points(beta: Sign) -> Vec<f64> {
    (0..20)
        .map(|i| match beta {
            Sign::Positive => 1.02 + 0.25 * i as f64,
            Sign::Negative => 0.05 + 0.25 * i as f64,
        })
        .collect()
}

#[test]
fn closed_forms_match_quadrature_for_both_signs() {
    let cfg = PhysicalConfig::default();
    for beta in [Sign::Positive, Sign::Negative] {
        let s = StepPotential::from_kappa0(beta, 1.0, 7.0, &cfg).unwrap();
        for k in k_points(beta) {
            let dw = dwell_times(&s, k, &cfg).unwrap();
            let tr = dwell_time_oracle(&s, k, DwellChannel::Transmission, &cfg).unwrap();
            let re = dwell_time_oracle(&s, k, DwellChannel::Reflection, &cfg).unwrap();
            assert!((tr / dw.tau_tr_dwell - 1.0).abs() < 1e-8, "{beta:?} k={k}");
            assert!((re / dw.tau_ref_dwell - 1.0).abs() < 1e-8, "{beta:?} k={k}");
            // l_depth is the reflection dwell time converted to a length
            assert!((dw.l_depth - cfg.velocity(k) * dw.tau_ref_dwell / 2.0).abs() < 1e-12);
        }
    }
}

#[test]
fn rejected_root_reflection_wave_gives_a_different_dwell_time() {
    use stepscatter_core::numerics::{integrate_adaptive, AdaptiveOptions};
    let cfg = PhysicalConfig::default();
    let s = StepPotential::from_kappa0(Sign::Positive, 1.0, 10.0, &cfg).unwrap();
    let region = turning_point(&s, 1.5).unwrap();
    let amp = stationary_amplitudes(&s, 1.5).unwrap();
    let integral = integrate_adaptive(
        |x| swf::alternative_swf_ref(&s, 1.5, x).unwrap().0.norm_sqr(),
        s.a(),
        region.x_c,
        AdaptiveOptions::default(),
    )
    .unwrap();
    let alt = integral.value / (cfg.velocity(1.5) * amp.refl_coef);
    let dw = dwell_times(&s, 1.5, &cfg).unwrap();
    assert!((alt - dw.tau_ref_dwell).abs() > 1e-3, "{alt} {}", dw.tau_ref_dwell);
}

#[test]
fn total_reflection_oracle() {
    let cfg = PhysicalConfig::default();
    let s = StepPotential::from_kappa0(Sign::Positive, 1.0, 5.0, &cfg).unwrap();
    for k in [0.1, 0.3, 0.6, 0.9, 0.999] {
        let r = total_reflection_times(&s, k, &cfg).unwrap();
        let o = dwell_time_oracle(&s, k, DwellChannel::Reflection, &cfg).unwrap();
        assert!((o / r.tau_ref_dwell - 1.0).abs() < 1e-8, "k={k}");
    }
}

#[test]
fn depth_diverges_on_both_sides_of_threshold() {
    let cfg = PhysicalConfig::default();
    let s = StepPotential::from_kappa0(Sign::Positive, 1.0, 1.0, &cfg).unwrap();
    let below = total_reflection_times(&s, (1.0f64 - 1e-6).sqrt(), &cfg).unwrap();
    let k_above = (1.0f64 + 1e-6).sqrt();
    let above = dwell_times(&s, k_above, &cfg).unwrap();
    assert!(below.l_depth > 10.0);
    assert!(above.l_depth > 10.0);
}
