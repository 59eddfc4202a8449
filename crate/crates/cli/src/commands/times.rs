//! One row of characteristic times and lengths per wavenumber.

use rayon::prelude::*;
use stepscatter_core::{
    davies_depth, dwell_times, group_times, kappa_of_k, swf_amplitudes, total_reflection_times, turning_point,
    Kappa, StationaryAmplitudes,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Column, Table, Unit};
use crate::units::NaturalUnits;

pub const COLUMNS: [Column; 18] = [
    Column::num("k", Unit::Wavenumber),
    Column::num("kappa", Unit::Wavenumber),
    Column::text("regime"),
    Column::num("T", Unit::Dimensionless),
    Column::num("R", Unit::Dimensionless),
    Column::num("lambda", Unit::Radian),
    Column::num("x_c", Unit::Length),
    Column::num("tau_tr_dwell", Unit::Time),
    Column::num("tau_ref_dwell", Unit::Time),
    Column::num("tau_tr_dwell_delay", Unit::Time),
    Column::num("l_depth", Unit::Length),
    Column::num("t_dep", Unit::Time),
    Column::num("tau_tr_group", Unit::Time),
    Column::num("tau_ref_group", Unit::Time),
    Column::num("group_delay", Unit::Time),
    Column::num("davies_tau_tr", Unit::Time),
    Column::num("davies_tau_ref", Unit::Time),
    Column::num("davies_depth", Unit::Length),
];

pub fn times_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let phys = cfg.physical()?;
    let step = cfg.step()?;
    let u = NaturalUnits::new(&step, &phys);
    let interval_l = cfg.interval_l();

    let rows = cfg
        .k_grid
        .values()
        .into_par_iter()
        .map(|k| -> Result<Vec<Cell>, CliError> {
            let kappa = kappa_of_k(&step, k)?;
            let amp: StationaryAmplitudes = stepscatter_core::stationary_amplitudes(&step, k)?;
            let head = vec![
                Cell::Num(u.wavenumber(k)),
                Cell::Num(u.wavenumber(kappa.value())),
                kappa.regime().as_str().into(),
                Cell::Num(amp.trans_coef),
                Cell::Num(amp.refl_coef),
            ];
            let tail = match kappa {
                Kappa::Propagating(_) => {
                    let swf = swf_amplitudes(&step, k)?;
                    let region = turning_point(&step, k)?;
                    let dwell = dwell_times(&step, k, &phys)?;
                    let group = group_times(&step, k, interval_l, &phys)?;
                    vec![
                        Cell::Num(swf.lambda),
                        Cell::Num(u.length(region.x_c)),
                        Cell::Num(u.time(dwell.tau_tr_dwell)),
                        Cell::Num(u.time(dwell.tau_ref_dwell)),
                        Cell::Num(u.time(dwell.tau_tr_dwell_delay)),
                        Cell::Num(u.length(dwell.l_depth)),
                        Cell::Num(u.time(group.t_dep)),
                        Cell::Num(u.time(group.tau_tr_group)),
                        Cell::Num(u.time(group.tau_ref_group)),
                        Cell::Num(u.time(group.tau_group_delay)),
                        Cell::Num(u.time(group.davies_tau_tr)),
                        Cell::Num(u.time(group.davies_tau_ref)),
                        Cell::Num(u.length(davies_depth(&step, k)?)),
                    ]
                }
                Kappa::Evanescent(_) => {
                    let tr = total_reflection_times(&step, k, &phys)?;
                    vec![
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Num(u.time(tr.tau_ref_dwell)),
                        Cell::Empty,
                        Cell::Num(u.length(tr.l_depth)),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Num(u.time(tr.tau_ref_group)),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Num(u.length(tr.davies_depth)),
                    ]
                }
            };
            Ok(head.into_iter().chain(tail).collect())
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new("times", COLUMNS.to_vec());
    for row in rows {
        table.push_row(row);
    }
    add_setup_footer(&mut table, cfg, &u);
    table.footer("interval_l", Some(Unit::Length), u.length(interval_l));
    Ok(table)
}

/// Footer lines describing the step and the unit system.
pub fn add_setup_footer(table: &mut Table, cfg: &RunConfig, u: &NaturalUnits) {
    table.footer("v0", None, cfg.v0);
    table.footer("a", Some(Unit::Length), u.length(cfg.a));
    table.footer("hbar", None, cfg.hbar);
    table.footer("mass", None, cfg.mass);
    table.footer("kappa0", None, u.wavenumber(1.0).recip());
    table.footer("beta", None, Cell::Int(cfg.v0.signum() as i64));
}
