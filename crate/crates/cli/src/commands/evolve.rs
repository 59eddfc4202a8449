//! Packet simulation: channel norms and centers of mass over the time
//! grid, with straight-line fits in the asymptotic stages compared to the
//! closed-form group times.

use stepscatter_core::packet::{fit_trajectory, in_stage, ChannelMoments, CompletedScatteringReport, Stage};
use stepscatter_core::{
    group_times, kappa_of_k, turning_point, validate_completed_scattering, Channel, Error as CoreError, GroupReport,
    MomentRecord, Propagator, SpatialGrid, TrajectoryFit,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Column, Table, Unit};
use crate::units::NaturalUnits;

pub const COLUMNS: [Column; 12] = [
    Column::num("t", Unit::Time),
    Column::num("T", Unit::Dimensionless),
    Column::num("R", Unit::Dimensionless),
    Column::num("T_plus_R", Unit::Dimensionless),
    Column::num("x_tr", Unit::Length),
    Column::num("x_ref", Unit::Length),
    Column::num("x_tot", Unit::Length),
    Column::num("p_tr", Unit::Momentum),
    Column::num("p_ref", Unit::Momentum),
    Column::num("spread_tr", Unit::Length),
    Column::num("spread_ref", Unit::Length),
    Column::num("spread_tot", Unit::Length),
];

/// Largest |𝒯(t) − 𝒯_as| over a set of times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormDeviation {
    pub t: f64,
    pub value: f64,
    /// (x̄_tr − x_c(k̄)) / spread_tr at that time.
    pub offset_in_spreads: f64,
}

#[derive(Debug, Clone)]
pub struct EvolveReport {
    pub units: NaturalUnits,
    pub series: Vec<ChannelMoments>,
    pub t_as: f64,
    pub r_as: f64,
    pub k_bar: f64,
    pub kappa_bar: f64,
    pub v_kbar: f64,
    pub v_kappa_bar: f64,
    pub x_c: f64,
    pub interval_end: f64,
    pub group: GroupReport,
    pub completed: CompletedScatteringReport,
    pub initial_times: Vec<f64>,
    pub final_tr_times: Vec<f64>,
    pub final_ref_times: Vec<f64>,
    /// Max |𝒯(t) − 𝒯_as| over the initial stage and over the final stage.
    pub initial_norm_error: f64,
    pub final_norm_error: f64,
    pub peak_deviation: NormDeviation,
    pub fit_tr_inc: TrajectoryFit,
    pub fit_ref_inc: TrajectoryFit,
    pub fit_tr_final: TrajectoryFit,
    pub fit_ref_final: TrajectoryFit,
}

impl EvolveReport {
    pub fn asymptotic_norm_error(&self) -> f64 {
        self.initial_norm_error.max(self.final_norm_error)
    }

    /// Departure time implied by the incident part of the transmission packet.
    pub fn t_dep_fit(&self) -> f64 {
        self.fit_tr_inc.departure_time()
    }

    pub fn t_dep_fit_ref(&self) -> f64 {
        self.fit_ref_inc.departure_time()
    }

    /// Time at which the reflected packet is extrapolated back to x = 0.
    pub fn t_arr_ref_fit(&self) -> f64 {
        self.fit_ref_final.arrival_time(0.0)
    }

    /// Time at which the transmitted packet reaches x = a + L.
    pub fn t_arr_tr_fit(&self) -> f64 {
        self.fit_tr_final.arrival_time(self.interval_end)
    }
}

fn record(m: &ChannelMoments, c: Channel) -> Result<MomentRecord, CliError> {
    Ok(m.record(c)?)
}

fn stage_records(
    series: &[ChannelMoments],
    select: Channel,
    stage: Stage,
    fit: Channel,
    a: f64,
    x_c: f64,
    grid: &SpatialGrid,
) -> Result<(Vec<f64>, Vec<MomentRecord>), CliError> {
    let mut times = Vec::new();
    let mut records = Vec::new();
    for m in series {
        if let Some(r) = m.records[select.index()] {
            if in_stage(&r, select, stage, a, x_c, grid) {
                times.push(m.t);
                records.push(record(m, fit)?);
            }
        }
    }
    if records.len() < 3 {
        return Err(CliError::Numerical(CoreError::InvalidArgument(format!(
            "only {} sampled times fall in the {:?} stage of the {} packet; extend the time grid",
            records.len(),
            stage,
            select
        ))));
    }
    Ok((times, records))
}

pub fn run_evolve(cfg: &RunConfig) -> Result<EvolveReport, CliError> {
    let phys = cfg.physical()?;
    let step = cfg.step()?;
    let profile = cfg.profile()?;
    let grid = cfg.spatial_grid()?;
    let propagator = Propagator::new(profile, step, phys)?;
    grid.check_resolution(&profile)
        .map_err(|e| CliError::Config(format!("grid: {e}")))?;
    let completed = validate_completed_scattering(&profile, &step);

    let k_bar = profile.k_bar();
    let kappa_bar = kappa_of_k(&step, k_bar)?.propagating()?;
    let x_c = turning_point(&step, k_bar)?.x_c;
    let interval_l = cfg.interval_l();
    let group = group_times(&step, k_bar, interval_l, &phys)?;
    let (t_as, r_as) = propagator.asymptotic_norms();

    let series = propagator.series(&cfg.times.values(), &grid);
    for m in &series {
        m.check_grid(&Channel::ALL)?;
    }

    let a = step.a();
    let (initial_times, inc_tr) =
        stage_records(&series, Channel::Incident, Stage::Initial, Channel::TransmissionIncident, a, x_c, &grid)?;
    let (_, inc_ref) =
        stage_records(&series, Channel::Incident, Stage::Initial, Channel::ReflectionIncident, a, x_c, &grid)?;
    let (final_tr_times, fin_tr) =
        stage_records(&series, Channel::Transmission, Stage::Final, Channel::Transmission, a, x_c, &grid)?;
    let (final_ref_times, fin_ref) =
        stage_records(&series, Channel::Reflection, Stage::Final, Channel::Reflection, a, x_c, &grid)?;

    let l0 = profile.l0();
    let fit_tr_inc = fit_trajectory(&inc_tr, l0)?;
    let fit_ref_inc = fit_trajectory(&inc_ref, l0)?;
    let fit_tr_final = fit_trajectory(&fin_tr, l0)?;
    let fit_ref_final = fit_trajectory(&fin_ref, l0)?;

    let deviation = |m: &ChannelMoments| (m.norm(Channel::Transmission) - t_as).abs();
    let max_over = |times: &[f64]| {
        series
            .iter()
            .filter(|m| times.contains(&m.t))
            .map(deviation)
            .fold(0.0, f64::max)
    };
    let initial_norm_error = max_over(&initial_times);
    let final_times: Vec<f64> = final_tr_times
        .iter()
        .copied()
        .filter(|t| final_ref_times.contains(t))
        .collect();
    let final_norm_error = max_over(&final_times);

    let peak = series
        .iter()
        .fold(None::<&ChannelMoments>, |best, m| match best {
            Some(b) if deviation(b) >= deviation(m) => Some(b),
            _ => Some(m),
        })
        .expect("time grid is not empty");
    let tr = record(peak, Channel::Transmission)?;
    let peak_deviation = NormDeviation {
        t: peak.t,
        value: deviation(peak),
        offset_in_spreads: (tr.x_mean - x_c) / tr.spread(),
    };

    Ok(EvolveReport {
        units: NaturalUnits::new(&step, &phys),
        series,
        t_as,
        r_as,
        k_bar,
        kappa_bar,
        v_kbar: phys.velocity(k_bar),
        v_kappa_bar: phys.velocity(kappa_bar),
        x_c,
        interval_end: a + interval_l,
        group,
        completed,
        initial_times,
        final_tr_times,
        final_ref_times,
        initial_norm_error,
        final_norm_error,
        peak_deviation,
        fit_tr_inc,
        fit_ref_inc,
        fit_tr_final,
        fit_ref_final,
    })
}

fn rel(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}

impl EvolveReport {
    pub fn table(&self) -> Table {
        let u = &self.units;
        let mut table = Table::new("evolve", COLUMNS.to_vec());
        for m in &self.series {
            let rec = |c: Channel| m.records[c.index()];
            let x = |c: Channel| Cell::from(rec(c).map(|r| u.length(r.x_mean)));
            let p = |c: Channel| Cell::from(rec(c).map(|r| u.momentum(r.p_mean)));
            let s = |c: Channel| Cell::from(rec(c).map(|r| u.length(r.spread())));
            let (t_norm, r_norm) = (m.norm(Channel::Transmission), m.norm(Channel::Reflection));
            table.push_row(vec![
                Cell::Num(u.time(m.t)),
                Cell::Num(t_norm),
                Cell::Num(r_norm),
                Cell::Num(t_norm + r_norm),
                x(Channel::Transmission),
                x(Channel::Reflection),
                x(Channel::Total),
                p(Channel::Transmission),
                p(Channel::Reflection),
                s(Channel::Transmission),
                s(Channel::Reflection),
                s(Channel::Total),
            ]);
        }

        let (len, time, vel, one) = (Some(Unit::Length), Some(Unit::Time), Some(Unit::Velocity), Some(Unit::Dimensionless));
        let f = &mut table;
        f.footer("T_as", one, self.t_as);
        f.footer("R_as", one, self.r_as);
        f.footer("T_as_plus_R_as", one, self.t_as + self.r_as);
        f.footer("k_bar", Some(Unit::Wavenumber), u.wavenumber(self.k_bar));
        f.footer("kappa_bar", Some(Unit::Wavenumber), u.wavenumber(self.kappa_bar));
        f.footer("x_c", len, u.length(self.x_c));
        f.footer("norm_error_initial", one, self.initial_norm_error);
        f.footer("norm_error_final", one, self.final_norm_error);
        f.footer("max_norm_deviation", one, self.peak_deviation.value);
        f.footer("t_max_norm_deviation", time, u.time(self.peak_deviation.t));
        f.footer("x_tr_minus_x_c_over_spread_at_max_deviation", one, self.peak_deviation.offset_in_spreads);

        fit_footer(f, "tr_inc", &self.fit_tr_inc, u);
        fit_footer(f, "ref_inc", &self.fit_ref_inc, u);
        f.footer("t_dep_fit_tr", time, u.time(self.t_dep_fit()));
        f.footer("t_dep_fit_ref", time, u.time(self.t_dep_fit_ref()));
        f.footer("t_dep_closed_form", time, u.time(self.group.t_dep));
        f.footer("t_dep_fit_tr_rel_error", one, rel(self.t_dep_fit(), self.group.t_dep));
        f.footer("x_start_closed_form", len, u.length(self.group.x_start));

        fit_footer(f, "ref_final", &self.fit_ref_final, u);
        f.footer("t_arr_ref_fit", time, u.time(self.t_arr_ref_fit()));
        f.footer("t_arr_ref_closed_form", time, u.time(self.group.t_arr_ref));
        f.footer("t_arr_ref_rel_error", one, rel(self.t_arr_ref_fit(), self.group.t_arr_ref));

        fit_footer(f, "tr_final", &self.fit_tr_final, u);
        f.footer("v_kappa_bar", vel, u.velocity(self.v_kappa_bar));
        f.footer("tr_final_slope_rel_error", one, rel(self.fit_tr_final.slope, self.v_kappa_bar));
        f.footer("t_arr_tr_fit", time, u.time(self.t_arr_tr_fit()));
        f.footer("t_arr_tr_closed_form", time, u.time(self.group.t_arr_tr));
        f.footer("tau_tr_group", time, u.time(self.group.tau_tr_group));
        f.footer("tau_ref_group", time, u.time(self.group.tau_ref_group));

        let c = &self.completed;
        f.footer("separation_ratio", one, c.separation_ratio);
        f.footer("narrowness_ratio", one, c.narrowness_ratio);
        f.footer("region_ratio", one, c.region_ratio);
        f.footer("effective_length", len, u.length(c.effective_length));
        f.footer("completed_scattering", None, c.passed());
        table
    }
}

fn fit_footer(table: &mut Table, name: &str, fit: &TrajectoryFit, u: &NaturalUnits) {
    table.footer(format!("fit_{name}_slope"), Some(Unit::Velocity), u.velocity(fit.slope));
    table.footer(format!("fit_{name}_intercept"), Some(Unit::Length), u.length(fit.intercept));
    table.footer(format!("fit_{name}_rms"), Some(Unit::Length), u.length(fit.rms_residual));
    table.footer(format!("fit_{name}_t_start"), Some(Unit::Time), u.time(fit.t_window.0));
    table.footer(format!("fit_{name}_t_end"), Some(Unit::Time), u.time(fit.t_window.1));
}
