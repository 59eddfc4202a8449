//! Property and oracle suite over the configured step and k grid, plus
//! the packet checks for the configured profile.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use stepscatter_core::packet::ChannelMoments;
use stepscatter_core::{
    dwell_time_oracle, dwell_times, group_times, kappa_of_k, probability_current, stationary_amplitudes,
    total_reflection_times, turning_point, turning_point_oracle, validate_completed_scattering, Channel, Decomposition,
    DwellChannel, Error as CoreError, Kappa, PhysicalConfig, Propagator, Sign, StepPotential,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Column, Table, Unit};
use crate::units::NaturalUnits;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub tolerance: f64,
    pub value: f64,
}

impl Check {
    fn new(name: impl Into<String>, tolerance: f64, value: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            value,
        }
    }

    /// NaN values fail.
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// |a − b| / max(|a|, 1), the change measure for quantities in natural units.
pub fn relative_change(reference: f64, other: f64) -> f64 {
    (reference - other).abs() / reference.abs().max(1.0)
}

/// Largest relative change of any norm or moment between two evaluations
/// of the same time. A moment present in only one of them counts as infinite.
pub fn moment_change(a: &ChannelMoments, b: &ChannelMoments, u: &NaturalUnits) -> f64 {
    let mut worst: f64 = 0.0;
    for c in Channel::ALL {
        worst = worst.max(relative_change(a.norm(c), b.norm(c)));
        match (a.records[c.index()], b.records[c.index()]) {
            (Some(ra), Some(rb)) => {
                worst = worst
                    .max(relative_change(u.length(ra.x_mean), u.length(rb.x_mean)))
                    .max(relative_change(u.momentum(ra.p_mean), u.momentum(rb.p_mean)))
                    .max(relative_change(u.length(ra.spread()), u.length(rb.spread())));
            }
            (None, None) => {}
            _ => return f64::INFINITY,
        }
    }
    worst
}

fn both_signs(step: &StepPotential) -> [StepPotential; 2] {
    match step.beta() {
        Sign::Positive => [*step, step.mirrored()],
        Sign::Negative => [step.mirrored(), *step],
    }
}

fn label(step: &StepPotential) -> &'static str {
    match step.beta() {
        Sign::Positive => "beta=+1",
        Sign::Negative => "beta=-1",
    }
}

fn sample_points(d: &Decomposition) -> Vec<f64> {
    let lo = d.a - 10.0 * PI / d.k();
    let hi = d.region.x_c + 10.0 * PI / d.kappa;
    (0..64).map(|i| lo + (hi - lo) * i as f64 / 63.0).collect()
}

fn stationary_checks(step: &StepPotential, ks: &[f64], phys: &PhysicalConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let u = NaturalUnits::new(step, phys);
    let tag = label(step);
    let mut unitarity: f64 = 0.0;
    let mut superposition: f64 = 0.0;
    let mut ref_current: f64 = 0.0;
    let mut tr_flux: f64 = 0.0;
    let mut x_c_oracle: f64 = 0.0;
    let mut dwell_oracle: f64 = 0.0;
    let mut evanescent_oracle: f64 = 0.0;
    let mut sign_violations = 0usize;
    let beta = step.beta().value();

    for &k in ks {
        let kappa = match kappa_of_k(step, k) {
            Err(CoreError::DegenerateEnergy { .. }) => continue,
            other => other?,
        };
        let amp = stationary_amplitudes(step, k)?;
        unitarity = unitarity.max((amp.trans_coef + amp.refl_coef - 1.0).abs());
        if let Kappa::Evanescent(_) = kappa {
            let closed = total_reflection_times(step, k, phys)?.tau_ref_dwell;
            let oracle = dwell_time_oracle(step, k, DwellChannel::Reflection, phys)?;
            evanescent_oracle = evanescent_oracle.max((oracle - closed).abs() / closed);
            continue;
        }
        let d = Decomposition::new(step, k)?;
        let v_k = phys.velocity(k);
        for x in sample_points(&d) {
            let psi = amp.psi(x);
            let (r, dr) = d.reflection(x);
            let (t, dt) = d.transmission(x);
            let residual = r + t - psi;
            superposition = superposition.max(residual.norm() / psi.norm().max(1.0));
            ref_current = ref_current.max(u.velocity(probability_current(r, dr, phys)).abs());
            let j_tr = probability_current(t, dt, phys);
            tr_flux = tr_flux.max((j_tr / (v_k * amp.trans_coef) - 1.0).abs());
        }
        let oracle = turning_point_oracle(step, k)?;
        x_c_oracle = x_c_oracle.max(u.length((oracle.zero - d.region.x_c).abs()));

        let dwell = dwell_times(step, k, phys)?;
        for (channel, closed) in [
            (DwellChannel::Transmission, dwell.tau_tr_dwell),
            (DwellChannel::Reflection, dwell.tau_ref_dwell),
        ] {
            let q = dwell_time_oracle(step, k, channel, phys)?;
            dwell_oracle = dwell_oracle.max((q - closed).abs() / closed.abs());
        }
        let group = group_times(step, k, step.a(), phys)?;
        if dwell.tau_tr_dwell_delay * beta >= 0.0 || group.tau_group_delay * beta >= 0.0 {
            sign_violations += 1;
        }
    }
    out.push(Check::new(format!("unitarity |T+R-1| ({tag})"), 1e-12, unitarity));
    out.push(Check::new(format!("superposition |psi_tr+psi_ref-psi| ({tag})"), 1e-12, superposition));
    out.push(Check::new(format!("reflection current ({tag})"), 1e-12, ref_current));
    out.push(Check::new(format!("transmission flux relative ({tag})"), 1e-10, tr_flux));
    out.push(Check::new(format!("turning point vs root finding ({tag})"), 1e-9, x_c_oracle));
    out.push(Check::new(format!("dwell times vs quadrature relative ({tag})"), 1e-8, dwell_oracle));
    out.push(Check::new(format!("total-reflection dwell vs quadrature relative ({tag})"), 1e-8, evanescent_oracle));
    out.push(Check::new(format!("sign-law violations ({tag})"), 0.0, sign_violations as f64));
    Ok(())
}

fn limit_checks(step: &StepPotential, phys: &PhysicalConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let [pos, neg] = both_signs(step);
    let k0 = pos.kappa0();

    let k = 100.0 * k0;
    let kappa = kappa_of_k(&pos, k)?.value();
    let region = turning_point(&pos, k)?;
    let dwell = dwell_times(&pos, k, phys)?;
    out.push(Check::new("limit kappa(x_c-a) -> pi/4 at k=100 kappa0", 1e-3, (kappa * region.length - FRAC_PI_4).abs()));
    out.push(Check::new(
        "limit kappa*l_depth -> (pi-2)/4 at k=100 kappa0",
        1e-3,
        (kappa * dwell.l_depth - (PI - 2.0) / 4.0).abs(),
    ));

    let kappa = 1e-3 * k0;
    let region = turning_point(&pos, pos.k_for_kappa(kappa))?;
    out.push(Check::new(
        "limit (x_c-a)sqrt(kappa kappa0) -> 1 at kappa=1e-3 kappa0",
        1e-3,
        (region.length * (kappa * k0).sqrt() - 1.0).abs(),
    ));

    // The approach is like sqrt(k/kappa0), so the limit is probed far below 1e-6 kappa0.
    let region = turning_point(&neg, 1e-12 * k0)?;
    out.push(Check::new(
        "limit (x_c-a) -> pi/(2 kappa0) at k=1e-12 kappa0 (beta=-1)",
        1e-5,
        (region.length * k0 / FRAC_PI_2 - 1.0).abs(),
    ));

    let k = 0.6 * k0;
    let tr = total_reflection_times(&pos, k, phys)?;
    let u = NaturalUnits::new(&pos, phys);
    let closed = (u.length(tr.l_depth) - 0.45).abs() / 0.45
        + (u.time(tr.tau_ref_dwell) - 1.5).abs() / 1.5
        + (u.length(tr.davies_depth) - 1.25).abs() / 1.25;
    out.push(Check::new("total reflection closed forms at k=0.6 kappa0", 1e-12, closed));
    let oracle = dwell_time_oracle(&pos, k, DwellChannel::Reflection, phys)?;
    out.push(Check::new(
        "total reflection dwell vs quadrature at k=0.6 kappa0",
        1e-8,
        (oracle - tr.tau_ref_dwell).abs() / tr.tau_ref_dwell,
    ));
    Ok(())
}

fn packet_checks(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let phys = cfg.physical()?;
    let step = cfg.step()?;
    let profile = cfg.profile()?;
    let grid = cfg.spatial_grid()?;
    let u = NaturalUnits::new(&step, &phys);

    let completed = validate_completed_scattering(&profile, &step);
    let failed = [
        completed.separation_ok,
        completed.spectral_guard_ok,
        completed.narrowness_ok,
        completed.region_ok,
        completed.effective_length_ok,
    ]
    .iter()
    .filter(|ok| !**ok)
    .count();
    out.push(Check::new("completed-scattering conditions failed", 0.0, failed as f64));
    if !completed.spectral_guard_ok {
        return Ok(());
    }

    let base = Propagator::new(profile, step, phys)?;
    let (t_as, r_as) = base.asymptotic_norms();
    out.push(Check::new("T_as + R_as - 1", 1e-10, (t_as + r_as - 1.0).abs()));

    let doubled = profile
        .with_nodes(2 * profile.nodes())
        .map_err(|e| CliError::Config(format!("packet: {e}")))?;
    let fine = Propagator::new(doubled, step, phys)?;
    let t = &cfg.times;
    for (name, time) in [
        ("t_min", t.t_min),
        ("midpoint", 0.5 * (t.t_min + t.t_max)),
        ("t_max", t.t_max),
    ] {
        let change = moment_change(&base.moments_at(time, &grid), &fine.moments_at(time, &grid), &u);
        out.push(Check::new(format!("node doubling relative change at {name}"), 1e-8, change));
    }
    Ok(())
}

pub fn run_checks(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let phys = cfg.physical()?;
    let step = cfg.step()?;
    let ks = cfg.k_grid.values();
    let mut checks = Vec::new();
    for s in both_signs(&step) {
        stationary_checks(&s, &ks, &phys, &mut checks)?;
    }
    limit_checks(&step, &phys, &mut checks)?;
    packet_checks(cfg, &mut checks)?;
    Ok(checks)
}

pub fn checks_table(checks: &[Check]) -> Table {
    let mut table = Table::new(
        "validate",
        vec![
            Column::text("check"),
            Column::num("tolerance", Unit::Dimensionless),
            Column::num("value", Unit::Dimensionless),
            Column::text("result"),
        ],
    );
    for c in checks {
        table.push_row(vec![
            c.name.as_str().into(),
            Cell::Num(c.tolerance),
            Cell::Num(c.value),
            c.passed().into(),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    table.footer("checks", None, Cell::Int(checks.len() as i64));
    table.footer("failed", None, Cell::Int(failed as i64));
    table.note("values are relative errors or absolute ones in natural units of kappa0, hbar and m");
    table
}
