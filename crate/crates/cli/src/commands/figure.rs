//! Plot-ready datasets for the flow-velocity profiles (fig1, fig2), the
//! transitional-region size (fig3) and the penetration depths (fig4).

use rayon::prelude::*;
use stepscatter_core::{
    davies_depth, dwell_times, flow_velocity, kappa_of_k, total_reflection_times, turning_point, Kappa, Sign,
    StepPotential,
};

use crate::cli::Figure;
use crate::config::{KGrid, RunConfig, Spacing};
use crate::error::CliError;
use crate::output::{Cell, Column, Table, Unit};
use crate::units::NaturalUnits;

/// Wavenumber of the flow-velocity profiles, in units of κ0.
pub const PROFILE_K: f64 = 1.5;

/// fig4 skips grid points this close to the threshold (relative to κ0).
pub const THRESHOLD_GAP: f64 = 1e-9;

pub fn figure_table(cfg: &RunConfig, which: Figure) -> Result<Table, CliError> {
    match which {
        Figure::Fig1 => flow_profile(cfg, Sign::Positive, "fig1"),
        Figure::Fig2 => flow_profile(cfg, Sign::Negative, "fig2"),
        Figure::Fig3 => region_size(cfg),
        Figure::Fig4 => depths(cfg),
    }
}

fn signed_step(cfg: &RunConfig, beta: Sign) -> Result<StepPotential, CliError> {
    let phys = cfg.physical()?;
    let base = cfg.step()?;
    StepPotential::from_kappa0(beta, base.kappa0(), base.a(), &phys).map_err(|e| CliError::Config(e.to_string()))
}

fn k_values(cfg: &RunConfig, kappa0: f64) -> Vec<f64> {
    KGrid {
        min: cfg.figure.k_min * kappa0,
        max: cfg.figure.k_max * kappa0,
        count: cfg.figure.points,
        spacing: Spacing::Log,
    }
    .values()
}

fn flow_profile(cfg: &RunConfig, beta: Sign, title: &str) -> Result<Table, CliError> {
    let phys = cfg.physical()?;
    let step = signed_step(cfg, beta)?;
    let u = NaturalUnits::new(&step, &phys);
    let k = PROFILE_K * step.kappa0();
    let region = turning_point(&step, k)?;
    let kappa = kappa_of_k(&step, k)?.propagating()?;
    let (x_lo, x_hi) = (step.a() - 2.0 * region.length, region.x_c + 2.0 * region.length);
    let xs = KGrid {
        min: x_lo,
        max: x_hi,
        count: cfg.figure.points,
        spacing: Spacing::Linear,
    }
    .values();
    let rows = xs
        .into_par_iter()
        .map(|x| Ok(vec![Cell::Num(u.length(x)), Cell::Num(u.velocity(flow_velocity(&step, k, x, &phys)?))]))
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut table = Table::new(title, vec![Column::num("x", Unit::Length), Column::num("v_flow", Unit::Velocity)]);
    for row in rows {
        table.push_row(row);
    }
    table.footer("beta", None, Cell::Int(beta.value() as i64));
    table.footer("k", Some(Unit::Wavenumber), u.wavenumber(k));
    table.footer("kappa", Some(Unit::Wavenumber), u.wavenumber(kappa));
    table.footer("a", Some(Unit::Length), u.length(step.a()));
    table.footer("x_c", Some(Unit::Length), u.length(region.x_c));
    table.footer("v_k", Some(Unit::Velocity), u.velocity(phys.velocity(k)));
    table.footer("v_kappa", Some(Unit::Velocity), u.velocity(phys.velocity(kappa)));
    Ok(table)
}

fn region_size(cfg: &RunConfig) -> Result<Table, CliError> {
    let phys = cfg.physical()?;
    let mut table = Table::new(
        "fig3",
        vec![
            Column::num("beta", Unit::Dimensionless),
            Column::num("k", Unit::Wavenumber),
            Column::num("kappa_xc_over_pi", Unit::Dimensionless),
            Column::num("kappa_ldepth_over_pi", Unit::Dimensionless),
            Column::num("xc_minus_a", Unit::Length),
            Column::num("l_depth", Unit::Length),
        ],
    );
    for beta in [Sign::Positive, Sign::Negative] {
        let step = signed_step(cfg, beta)?;
        let u = NaturalUnits::new(&step, &phys);
        let propagating: Vec<f64> = k_values(cfg, step.kappa0())
            .into_iter()
            .filter(|&k| matches!(kappa_of_k(&step, k), Ok(Kappa::Propagating(_))))
            .collect();
        let rows = propagating
            .into_par_iter()
            .map(|k| {
                let kappa = kappa_of_k(&step, k)?.propagating()?;
                let region = turning_point(&step, k)?;
                let dwell = dwell_times(&step, k, &phys)?;
                Ok(vec![
                    Cell::Int(beta.value() as i64),
                    Cell::Num(u.wavenumber(k)),
                    Cell::Num(kappa * region.length / std::f64::consts::PI),
                    Cell::Num(kappa * dwell.l_depth / std::f64::consts::PI),
                    Cell::Num(u.length(region.length)),
                    Cell::Num(u.length(dwell.l_depth)),
                ])
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        for row in rows {
            table.push_row(row);
        }
    }
    table.note("rows below the threshold kappa0 are omitted for beta = +1 (no transmission)");
    Ok(table)
}

fn depths(cfg: &RunConfig) -> Result<Table, CliError> {
    let phys = cfg.physical()?;
    let step = signed_step(cfg, Sign::Positive)?;
    let u = NaturalUnits::new(&step, &phys);
    let k0 = step.kappa0();
    let (kept, skipped): (Vec<f64>, Vec<f64>) =
        k_values(cfg, k0).into_iter().partition(|k| (k - k0).abs() > THRESHOLD_GAP * k0);
    let rows = kept
        .into_par_iter()
        .map(|k| {
            let (l_depth, regime) = match kappa_of_k(&step, k)? {
                Kappa::Propagating(_) => (dwell_times(&step, k, &phys)?.l_depth, "propagating"),
                Kappa::Evanescent(_) => (total_reflection_times(&step, k, &phys)?.l_depth, "evanescent"),
            };
            Ok(vec![
                Cell::Num(u.wavenumber(k)),
                Cell::Num(u.length(l_depth)),
                Cell::Num(u.length(davies_depth(&step, k)?)),
                regime.into(),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut table = Table::new(
        "fig4",
        vec![
            Column::num("k", Unit::Wavenumber),
            Column::num("l_depth", Unit::Length),
            Column::num("davies_depth", Unit::Length),
            Column::text("regime"),
        ],
    );
    for row in rows {
        table.push_row(row);
    }
    table.footer("skipped_points", None, Cell::Int(skipped.len() as i64));
    table.note(format!(
        "gap at k = kappa0: l_depth diverges there; points with |k/kappa0 - 1| <= {THRESHOLD_GAP:e} are not emitted"
    ));
    Ok(table)
}
