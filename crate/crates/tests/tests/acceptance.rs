//! Acceptance suite: every criterion at its stated tolerance, one PASS/FAIL
//! line each. Exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stepscatter_cli::commands::evolve::{run_evolve, EvolveReport};
use stepscatter_cli::commands::figure::figure_table;
use stepscatter_cli::commands::validate::relative_change;
use stepscatter_cli::{commands, Cell, Cli, Figure, RunConfig, Table};
use stepscatter_core::{
    dwell_time_oracle, dwell_times, group_times, kappa_of_k, probability_current, stationary_amplitudes,
    total_reflection_times, turning_point, turning_point_oracle, Decomposition, DwellChannel, Kappa, PhysicalConfig,
    Sign, StepPotential,
};

const A: f64 = 5.0;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

/// Sub-checks of one criterion: each is (description, passed).
#[derive(Default)]
struct Parts(Vec<(String, bool)>);

impl Parts {
    fn check(&mut self, passed: bool, what: String) {
        self.0.push((what, passed));
    }

    fn outcome(self) -> Outcome {
        let passed = self.0.iter().all(|(_, ok)| *ok);
        let detail = self
            .0
            .into_iter()
            .map(|(w, ok)| if ok { w } else { format!("{w} [FAILED]") })
            .collect::<Vec<_>>()
            .join("; ");
        Outcome::new(passed, detail)
    }
}

fn phys() -> PhysicalConfig {
    PhysicalConfig::default()
}

fn step(beta: Sign) -> StepPotential {
    StepPotential::from_kappa0(beta, 1.0, A, &phys()).unwrap()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Propagating wavenumbers for a sign: 20 points spanning both sides of
/// the threshold region.
fn propagating_ks(beta: Sign) -> Vec<f64> {
    match beta {
        Sign::Positive => log_grid(1.01, 5.0, 20),
        Sign::Negative => log_grid(0.05, 5.0, 20),
    }
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for beta in [Sign::Positive, Sign::Negative] {
        let s = step(beta);
        // 40 points in [0.05, 5] kappa0; none of them hits kappa0.
        for k in log_grid(0.05, 5.0, 40) {
            assert!((k - 1.0).abs() > 1e-6);
            let amp = stationary_amplitudes(&s, k).unwrap();
            worst = worst.max((amp.trans_coef + amp.refl_coef - 1.0).abs());
            count += 1;
        }
    }
    Outcome::new(worst <= 1e-12, format!("max |T+R-1| = {worst:.2e} over {count} k (tol 1e-12)"))
}

/// Random propagating (beta, k, x) with x around the step and the
/// transitional region.
fn random_samples(n: usize, seed: u64) -> Vec<(Sign, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let beta = if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative };
            let k = match beta {
                Sign::Positive => 1.0 + 10f64.powf(rng.gen_range(-4.0..0.6)),
                Sign::Negative => 10f64.powf(rng.gen_range(-2.0..0.7)),
            };
            let x = rng.gen_range(-20.0..A + 60.0);
            (beta, k, x)
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let (pos, neg) = (step(Sign::Positive), step(Sign::Negative));
    let mut worst: f64 = 0.0;
    let samples = random_samples(10_000, 2);
    for &(beta, k, x) in &samples {
        let s = if beta == Sign::Positive { &pos } else { &neg };
        let d = Decomposition::new(s, k).unwrap();
        let total = d.stationary.psi(x);
        let sum = d.transmission(x).0 + d.reflection(x).0;
        worst = worst.max((sum - total).norm() / total.norm().max(1.0));
    }
    Outcome::new(
        worst < 1e-12,
        format!("max |psi_tr+psi_ref-psi|/max(1,|psi|) = {worst:.2e} over {} samples (tol 1e-12)", samples.len()),
    )
}

fn criterion_3() -> Outcome {
    let (pos, neg) = (step(Sign::Positive), step(Sign::Negative));
    let cfg = phys();
    let mut ref_worst: f64 = 0.0;
    let mut tr_worst: f64 = 0.0;
    let samples = random_samples(10_000, 3);
    for &(beta, k, x) in &samples {
        let s = if beta == Sign::Positive { &pos } else { &neg };
        let d = Decomposition::new(s, k).unwrap();
        let (r, dr) = d.reflection(x);
        let (t, dt) = d.transmission(x);
        ref_worst = ref_worst.max(probability_current(r, dr, &cfg).abs());
        let expected = cfg.velocity(k) * d.stationary.trans_coef;
        tr_worst = tr_worst.max((probability_current(t, dt, &cfg) / expected - 1.0).abs());
    }
    let mut parts = Parts::default();
    parts.check(ref_worst <= 1e-12, format!("max |j_ref| = {ref_worst:.2e} (tol 1e-12)"));
    parts.check(tr_worst <= 1e-10, format!("max |j_tr/(v_k T) - 1| = {tr_worst:.2e} (tol 1e-10)"));
    parts.outcome()
}

fn slope_of(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_4() -> Outcome {
    let mut parts = Parts::default();
    let mut worst: f64 = 0.0;
    for beta in [Sign::Positive, Sign::Negative] {
        let s = step(beta);
        for k in propagating_ks(beta) {
            let closed = turning_point(&s, k).unwrap().x_c;
            let oracle = turning_point_oracle(&s, k).unwrap().zero;
            worst = worst.max((closed - oracle).abs());
        }
    }
    parts.check(worst <= 1e-9, format!("max |x_c - root| = {worst:.2e}/kappa0 (tol 1e-9)"));

    let s = step(Sign::Positive);
    let kappas = log_grid(1e-4, 1e-2, 9);
    let mut families = [Vec::new(), Vec::new(), Vec::new()];
    for &kappa in &kappas {
        let zeros = turning_point_oracle(&s, s.k_for_kappa(kappa)).unwrap().zeros;
        for (n, f) in families.iter_mut().enumerate() {
            f.push((zeros[n] - A).ln());
        }
    }
    let lk: Vec<f64> = kappas.iter().map(|k| k.ln()).collect();
    let slopes: Vec<f64> = families.iter().map(|f| slope_of(&lk, f)).collect();
    parts.check((slopes[0] + 0.5).abs() <= 0.05, format!("chosen-zero slope {:.4} (want -0.5+-0.05)", slopes[0]));
    for (n, sl) in slopes.iter().enumerate().skip(1) {
        parts.check((sl + 1.0).abs() <= 0.05, format!("zero {n} slope {sl:.4} (want -1.0+-0.05)"));
    }
    parts.outcome()
}

fn criterion_5() -> Outcome {
    let cfg = phys();
    let mut parts = Parts::default();
    let mut worst: f64 = 0.0;
    for beta in [Sign::Positive, Sign::Negative] {
        let s = step(beta);
        for k in propagating_ks(beta) {
            let d = dwell_times(&s, k, &cfg).unwrap();
            let q_tr = dwell_time_oracle(&s, k, DwellChannel::Transmission, &cfg).unwrap();
            let q_ref = dwell_time_oracle(&s, k, DwellChannel::Reflection, &cfg).unwrap();
            worst = worst
                .max((d.tau_tr_dwell - q_tr).abs() / q_tr.abs())
                .max((d.tau_ref_dwell - q_ref).abs() / q_ref.abs());
        }
    }
    parts.check(worst <= 1e-8, format!("closed form vs quadrature max rel {worst:.2e} (tol 1e-8)"));

    // Quoted reference values, checked at one unit of their last digit.
    let s = step(Sign::Positive);
    let k = 1.5;
    let q_tr = dwell_time_oracle(&s, k, DwellChannel::Transmission, &cfg).unwrap();
    let q_ref = dwell_time_oracle(&s, k, DwellChannel::Reflection, &cfg).unwrap();
    let d = dwell_times(&s, k, &cfg).unwrap();
    let q_delay = q_tr - d.tau_free;
    // l_depth is the reflection dwell time times v_k / 2
    let q_depth = q_ref * cfg.velocity(k) / 2.0;
    for (name, value, quoted) in [
        ("tau_tr_dwell", q_tr, 0.47667),
        ("tau_ref_dwell", q_ref, 0.34832),
        ("tau_tr_dwell_delay", q_delay, -0.09319),
        ("l_depth", q_depth, 0.26124),
    ] {
        parts.check(
            (value - quoted).abs() <= 1e-5,
            format!("{name} = {value:.7} vs quoted {quoted}"),
        );
    }
    parts.outcome()
}

fn criterion_6() -> Outcome {
    let cfg = phys();
    let mut parts = Parts::default();
    for beta in [Sign::Positive, Sign::Negative] {
        let s = step(beta);
        let k = 100.0;
        let kappa = kappa_of_k(&s, k).unwrap().value();
        let len = turning_point(&s, k).unwrap().length;
        let depth = dwell_times(&s, k, &cfg).unwrap().l_depth;
        let (e1, e2) = ((kappa * len - FRAC_PI_4).abs(), (kappa * depth - (PI - 2.0) / 4.0).abs());
        let tag = if beta == Sign::Positive { "+1" } else { "-1" };
        parts.check(e1 <= 1e-3, format!("beta={tag}: |kappa(x_c-a) - pi/4| = {e1:.2e}"));
        parts.check(e2 <= 1e-3, format!("beta={tag}: |kappa l_depth - (pi-2)/4| = {e2:.2e}"));
    }
    let s = step(Sign::Positive);
    let kappa: f64 = 1e-3;
    let len = turning_point(&s, s.k_for_kappa(kappa)).unwrap().length;
    let e = (len * kappa.sqrt() - 1.0).abs();
    parts.check(e <= 1e-3, format!("|(x_c-a)sqrt(kappa kappa0) - 1| = {e:.2e} (tol 1e-3)"));

    let len = turning_point(&step(Sign::Negative), 1e-6).unwrap().length;
    let e = (len - FRAC_PI_2).abs();
    parts.check(e <= 1e-5, format!("beta=-1, k=1e-6: |x_c-a - pi/2| = {e:.2e}/kappa0 (tol 1e-5)"));
    parts.outcome()
}

fn criterion_7() -> Outcome {
    let cfg = phys();
    let s = step(Sign::Positive);
    let mut parts = Parts::default();
    let tr = total_reflection_times(&s, 0.6, &cfg).unwrap();
    for (name, value, expected) in [
        ("l_depth", tr.l_depth, 0.45),
        ("tau_ref_dwell", tr.tau_ref_dwell, 1.5),
        ("d", tr.davies_depth, 1.25),
    ] {
        let e = (value - expected).abs() / expected;
        parts.check(e <= 1e-12, format!("{name} = {value:.12} (want {expected})"));
    }
    let q = dwell_time_oracle(&s, 0.6, DwellChannel::Reflection, &cfg).unwrap();
    let e = (q - tr.tau_ref_dwell).abs() / tr.tau_ref_dwell;
    parts.check(e <= 1e-8, format!("integral of |psi_ref|^2 over x>a vs closed form rel {e:.2e} (tol 1e-8)"));

    let kappa: f64 = 1e-3;
    let above = dwell_times(&s, (1.0 + kappa * kappa).sqrt(), &cfg).unwrap().l_depth;
    let below = total_reflection_times(&s, (1.0 - kappa * kappa).sqrt(), &cfg).unwrap().l_depth;
    parts.check(above > 10.0, format!("l_depth above threshold = {above:.2}"));
    parts.check(below > 10.0, format!("l_depth below threshold = {below:.2}"));
    parts.outcome()
}

fn criterion_8() -> Outcome {
    let cfg = phys();
    let mut tested = 0;
    let mut violations = Vec::new();
    for beta in [Sign::Positive, Sign::Negative] {
        let s = step(beta);
        let mut ks = propagating_ks(beta);
        ks.extend(log_grid(0.05, 5.0, 40));
        ks.extend(random_samples(500, 8).into_iter().filter(|t| t.0 == beta).map(|t| t.1));
        for k in ks {
            if !matches!(kappa_of_k(&s, k), Ok(Kappa::Propagating(_))) {
                continue;
            }
            tested += 1;
            let b = beta.value();
            let delay = dwell_times(&s, k, &cfg).unwrap().tau_tr_dwell_delay;
            let group = group_times(&s, k, A, &cfg).unwrap().tau_group_delay;
            if delay * b >= 0.0 || group * b >= 0.0 {
                violations.push(k);
            }
        }
    }
    Outcome::new(
        violations.is_empty(),
        format!("{} violations of beta*delay < 0 among {tested} propagating k", violations.len()),
    )
}

fn reference_config() -> RunConfig {
    // Defaults are the reference scenario: k_bar = 1.5, l0 = 50, a = L = 500, 513 nodes.
    let cfg = RunConfig::default();
    assert_eq!((cfg.packet.k_bar, cfg.packet.l0, cfg.a, cfg.interval_l(), cfg.packet.nodes), (1.5, 50.0, 500.0, 500.0, 513));
    cfg
}

fn criterion_9(report: &Result<EvolveReport, String>) -> Outcome {
    let r = match report {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("run failed: {e}")),
    };
    let mut parts = Parts::default();
    let sum = (r.t_as + r.r_as - 1.0).abs();
    parts.check(sum <= 1e-10, format!("|T_as+R_as-1| = {sum:.1e}"));
    let asym = r.asymptotic_norm_error();
    parts.check(
        asym <= 1e-6,
        format!("|T(t)-T_as| initial {:.1e}, final {:.1e} (tol 1e-6)", r.initial_norm_error, r.final_norm_error),
    );
    let peak = r.peak_deviation;
    parts.check(
        peak.value > 10.0 * asym,
        format!("mid-scattering deviation {:.2e} at t = {} ({:.2} spreads from x_c)", peak.value, peak.t, peak.offset_in_spreads),
    );
    let e = (r.t_dep_fit() - r.group.t_dep).abs() / r.group.t_dep;
    parts.check(e <= 0.05, format!("t_dep fit {:.6} vs {:.6} (rel {e:.1e}, tol 5%)", r.t_dep_fit(), r.group.t_dep));
    let e = (r.t_arr_ref_fit() - r.group.t_arr_ref).abs() / r.group.t_arr_ref;
    parts.check(e <= 0.01, format!("reflected arrival {:.3} vs 2a/v_k {:.3} (rel {e:.1e}, tol 1%)", r.t_arr_ref_fit(), r.group.t_arr_ref));
    let e = (r.fit_tr_final.slope - r.v_kappa_bar).abs() / r.v_kappa_bar;
    parts.check(e <= 0.005, format!("transmitted slope {:.7} vs {:.7} (rel {e:.1e}, tol 0.5%)", r.fit_tr_final.slope, r.v_kappa_bar));
    parts.outcome()
}

fn numeric_cells(table: &Table) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        for (c, cell) in table.columns.iter().zip(row) {
            if let Cell::Num(v) = cell {
                out.push((format!("row {i} {}", c.name), *v));
            }
        }
    }
    for e in &table.footer {
        if let Cell::Num(v) = e.value {
            out.push((e.key.clone(), v));
        }
    }
    out
}

fn criterion_10(base: &Result<EvolveReport, String>) -> Outcome {
    let base = match base {
        Ok(r) => r.table(),
        Err(e) => return Outcome::new(false, format!("reference run failed: {e}")),
    };
    let mut cfg = reference_config();
    cfg.packet.nodes *= 2;
    let fine = match run_evolve(&cfg) {
        Ok(r) => r.table(),
        Err(e) => return Outcome::new(false, format!("doubled run failed: {e}")),
    };
    let (a, b) = (numeric_cells(&base), numeric_cells(&fine));
    if a.len() != b.len() {
        return Outcome::new(false, "doubled run reports a different set of values");
    }
    let (worst, name) = a
        .iter()
        .zip(&b)
        .map(|((n, x), (_, y))| (relative_change(*x, *y), n.clone()))
        .fold((0.0, String::new()), |acc, v| if v.0 > acc.0 { v } else { acc });
    Outcome::new(
        worst < 1e-8,
        format!("513 -> 1026 nodes: max |change|/max(|value|,1) = {worst:.2e} at {name}, over {} values (tol 1e-8)", a.len()),
    )
}

fn criterion_11() -> Outcome {
    let cfg = RunConfig::default();
    let mut parts = Parts::default();
    for (fig, beta) in [(Figure::Fig1, 1.0f64), (Figure::Fig2, -1.0)] {
        let t = figure_table(&cfg, fig).unwrap();
        let col = |name: &str| -> Vec<f64> {
            let i = t.column_index(name).unwrap();
            t.rows.iter().map(|r| r[i].as_f64().unwrap()).collect()
        };
        let foot = |key: &str| t.footer_value(key).unwrap().as_f64().unwrap();
        let (xs, vs) = (col("x"), col("v_flow"));
        let (a, x_c) = (foot("a"), foot("x_c"));
        let inside: Vec<f64> = xs.iter().zip(&vs).filter(|(x, _)| **x > a && **x < x_c).map(|(_, v)| *v).collect();
        let monotone = inside.windows(2).all(|w| (w[1] - w[0]) * beta < 0.0);
        let v_kappa = (1.5f64 * 1.5 - beta).sqrt();
        let ends = (vs[0] - 1.5).abs() <= 1e-12 * 1.5 && (vs[vs.len() - 1] - v_kappa).abs() <= 1e-12 * v_kappa;
        parts.check(
            monotone && inside.len() > 10 && ends,
            format!("{fig:?}: {} points strictly monotone in (a, x_c), ends {:.6} -> {:.6}", inside.len(), vs[0], vs[vs.len() - 1]),
        );
    }
    let t = figure_table(&cfg, Figure::Fig3).unwrap();
    let (il, ix) = (t.column_index("l_depth").unwrap(), t.column_index("xc_minus_a").unwrap());
    let bad = t.rows.iter().filter(|r| r[il].as_f64().unwrap() > r[ix].as_f64().unwrap()).count();
    parts.check(bad == 0, format!("fig3: a + l_depth <= x_c on {} of {} rows", t.rows.len() - bad, t.rows.len()));

    let mut low = cfg.clone();
    low.figure.k_min = 1e-4;
    let t = figure_table(&low, Figure::Fig4).unwrap();
    let (ik, il, id) = (
        t.column_index("k").unwrap(),
        t.column_index("l_depth").unwrap(),
        t.column_index("davies_depth").unwrap(),
    );
    let low_rows: Vec<(f64, f64, f64)> = t
        .rows
        .iter()
        .map(|r| (r[ik].as_f64().unwrap(), r[il].as_f64().unwrap(), r[id].as_f64().unwrap()))
        .filter(|(k, _, _)| *k < 0.5)
        .collect();
    // Both approach their limits monotonically as k decreases.
    let trend = low_rows.windows(2).all(|w| w[1].1 > w[0].1 && w[1].2 > w[0].2);
    let (k, l, d) = low_rows[0];
    parts.check(
        trend && (d - 1.0).abs() < 1e-6 && l < 1e-6,
        format!("fig4 at k = {k:.0e}: kappa0 d = {d:.9}, kappa0 l_depth = {l:.1e}, monotone approach {trend}"),
    );
    parts.outcome()
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "2"] {
        let path = dir.path().join(format!("evolve-{threads}.csv"));
        let cli = Cli::parse_from(["stepscatter", "evolve", "--threads", threads, "--output", path.to_str().unwrap()]);
        if let Err(e) = commands::run(&cli) {
            return Outcome::new(false, format!("evolve with {threads} threads failed: {e}"));
        }
        outputs.push(std::fs::read(&path).unwrap());
    }
    Outcome::new(
        outputs[0] == outputs[1],
        format!("--threads 1 vs 2: {} and {} bytes, identical = {}", outputs[0].len(), outputs[1].len(), outputs[0] == outputs[1]),
    )
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.passed = false;
            out.detail.push_str(&format!("; runtime over {limit:?} [FAILED]"));
        }
    }
    (out, elapsed)
}

fn main() {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let mut results: Vec<(usize, Outcome, Duration)> = Vec::new();
    let mut record = |n: usize, (o, d): (Outcome, Duration)| {
        println!("criterion {n:>2}: {} ({:.1} s) {}", if o.passed { "PASS" } else { "FAIL" }, d.as_secs_f64(), o.detail);
        results.push((n, o, d));
    };

    record(1, timed(secs(1), criterion_1));
    record(2, timed(secs(1), criterion_2));
    record(3, timed(secs(1), criterion_3));
    record(4, timed(secs(10), criterion_4));
    record(5, timed(secs(5), criterion_5));
    record(6, timed(secs(1), criterion_6));
    record(7, timed(secs(1), criterion_7));
    record(8, timed(secs(1), criterion_8));

    let start = Instant::now();
    let reference = run_evolve(&reference_config()).map_err(|e| e.to_string());
    let run_time = start.elapsed();
    let (o, d) = timed(None, || criterion_9(&reference));
    record(9, (o, d + run_time));
    record(10, timed(None, || criterion_10(&reference)));
    record(11, timed(secs(5), criterion_11));
    record(12, timed(None, criterion_12));

    let failed: Vec<usize> = results.iter().filter(|r| !r.1.passed).map(|r| r.0).collect();
    println!(
        "acceptance: {} of {} criteria passed{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() { String::new() } else { format!("; failed: {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
