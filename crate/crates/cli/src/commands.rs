//! Implementations of the six subcommands.

use serde_json::{json, Map, Value};
use tricell::analytic::{self, rat_f64, rat_string, ScanRow};
use tricell::estimator::derive_seed;
use tricell::svg::{self, ScanComponent};
use tricell::{
    arrangement, cases, empirical_mean_variance, estimate_pmf, lineproc, mean_variance,
    para_trap_split, pmf, quadrature, Error, ExecMode, Rat, Result, SimConfig,
    TypicalCellSampler, Window, SCHEMA_VERSION,
};

use crate::config::{CommonOpts, RenderOpts, SampleCellOpts, ScanOpts, SimulateOpts};

fn write_output(out: &Option<String>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

/// Render a rational either as "num/den" string or as a JSON number,
/// depending on whether the weights came in as exact fractions.
fn value_of(x: &Rat, exact: bool) -> Value {
    if exact {
        Value::String(rat_string(x))
    } else {
        json!(rat_f64(x))
    }
}

pub fn formula(opts: CommonOpts) -> Result<()> {
    let eff = opts.resolve()?;
    let w = &eff.weights;
    let exact = w.exact_input();
    let f = pmf(w);
    let (para, trap) = para_trap_split(w);
    let (mean, variance) = mean_variance(w);

    let mut pmf_map = Map::new();
    for n in 3..=6usize {
        pmf_map.insert(n.to_string(), value_of(f.component(n), exact));
    }
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "p": value_of(w.p_exact(), exact),
        "q": value_of(w.q_exact(), exact),
        "exact": exact,
        "beta": value_of(&f.beta, exact),
        "pmf": Value::Object(pmf_map),
        "para": value_of(&para, exact),
        "trap": value_of(&trap, exact),
        "mean": value_of(&mean, exact),
        "variance": value_of(&variance, exact),
    });
    write_output(&eff.out, &format!("{}\n", serde_json::to_string_pretty(&report)?))
}

pub fn simulate(opts: SimulateOpts) -> Result<()> {
    let eff = opts.common.resolve()?;
    let window = opts.window(&eff.file)?;
    let cfg = match opts.replicates.or(eff.file.replicates) {
        Some(replicates) => SimConfig::new(eff.weights.clone(), window, replicates, eff.seed),
        None => {
            let min_cells = opts.min_cells.or(eff.file.min_cells).unwrap_or(100_000);
            SimConfig::for_min_cells(eff.weights.clone(), window, min_cells, eff.seed)?
        }
    };
    let report = estimate_pmf(&cfg)?;
    let (mean, variance) = empirical_mean_variance(&report);

    let analytic_pmf = pmf(&eff.weights).to_f64();
    let (_, var_exact) = mean_variance(&eff.weights);
    let z_scores: Vec<f64> = report
        .estimates
        .iter()
        .zip(&analytic_pmf)
        .zip(&report.std_errors)
        .map(|((est, a), se)| if *se > 0.0 { (est - a) / se } else { f64::NAN })
        .collect();

    let out = json!({
        "schema_version": SCHEMA_VERSION,
        "weights": {"p": eff.weights.p(), "q": eff.weights.q()},
        "window": {"half_width": window.half_width, "inner_fraction": window.inner_fraction},
        "replicates": report.replicates,
        "counts": report.counts,
        "total": report.total,
        "discarded_boundary_cells": report.discarded_boundary_cells,
        "discard_ratio": report.boundary_discard_ratio(),
        "estimates": report.estimates,
        "std_errors": report.std_errors,
        "ci99": report.ci99,
        "effective_samples": report.effective_samples,
        "mean": mean,
        "variance": variance,
        "analytic": {
            "pmf": analytic_pmf,
            "mean": 4.0,
            "variance": rat_f64(&var_exact),
        },
        "z_scores": z_scores,
        "seed": report.seed,
        "replicate_seeds": report.replicate_seeds,
        "wall_time_ms": report.wall_time_ms,
    });
    write_output(&eff.out, &format!("{}\n", serde_json::to_string_pretty(&out)?))
}

pub fn integrate(opts: CommonOpts) -> Result<()> {
    let eff = opts.resolve()?;
    let w = &eff.weights;
    let integrals = quadrature::integrate_all(w, ExecMode::Parallel)?;
    let analytic_pmf = pmf(w).to_f64();
    let (para_exact, trap_exact) = para_trap_split(w);

    let quad_kind_of = |label: &str| {
        cases::case_table(4)
            .unwrap()
            .into_iter()
            .find(|c| c.label == label)
            .and_then(|c| c.quad_kind)
    };

    let mut sums = [0.0f64; 4];
    let mut para_sum = 0.0;
    let mut trap_sum = 0.0;
    let mut case_rows = Vec::new();
    for ci in &integrals {
        sums[ci.n - 3] += ci.probability;
        let subtype = if ci.n == 4 {
            match quad_kind_of(&ci.label) {
                Some(cases::QuadKind::Para) => {
                    para_sum += ci.probability;
                    Some("para")
                }
                Some(cases::QuadKind::Trap) => {
                    trap_sum += ci.probability;
                    Some("trap")
                }
                None => None,
            }
        } else {
            None
        };
        case_rows.push(json!({
            "label": ci.label,
            "n": ci.n,
            "probability": ci.probability,
            "est_error": ci.est_error,
            "subtype": subtype,
        }));
    }
    let max_dev = sums
        .iter()
        .zip(&analytic_pmf)
        .map(|(s, a)| (s - a).abs())
        .fold(0.0f64, f64::max);

    let out = json!({
        "schema_version": SCHEMA_VERSION,
        "p": w.p(),
        "q": w.q(),
        "cases": case_rows,
        "sums": {"3": sums[0], "4": sums[1], "5": sums[2], "6": sums[3]},
        "subtype_sums": {"para": para_sum, "trap": trap_sum},
        "analytic": {
            "pmf": analytic_pmf,
            "para": rat_f64(&para_exact),
            "trap": rat_f64(&trap_exact),
        },
        "max_abs_deviation": max_dev,
    });
    write_output(&eff.out, &format!("{}\n", serde_json::to_string_pretty(&out)?))
}

fn parse_step(s: &str) -> Result<Rat> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| Error::InvalidConfig(format!("step must be a fraction like 1/30, got {s:?}")))?;
    let n: i64 = num.trim().parse().map_err(|_| Error::InvalidConfig(format!("bad step {s:?}")))?;
    let d: i64 = den.trim().parse().map_err(|_| Error::InvalidConfig(format!("bad step {s:?}")))?;
    if d == 0 {
        return Err(Error::InvalidConfig("zero step denominator".into()));
    }
    Ok(Rat::new(n.into(), d.into()))
}

fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("p,q,p3,p4,p5,p6,para,trap\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.p, r.q, r.p3, r.p4, r.p5, r.p6, r.para, r.trap
        ));
    }
    out
}

pub fn scan(opts: ScanOpts) -> Result<()> {
    let eff = opts.common.resolve_weightless()?;
    let step_str = opts.step.clone().or(eff.file.step).unwrap_or_else(|| "1/30".to_string());
    let step = parse_step(&step_str)?;
    let rows = analytic::scan_simplex(&step, ExecMode::Parallel)?;

    match eff.format.as_deref().unwrap_or("csv") {
        "csv" => write_output(&eff.out, &scan_csv(&rows)),
        "svg" => {
            let component_str =
                opts.component.clone().or(eff.file.component).unwrap_or_else(|| "p3".into());
            let component = ScanComponent::parse(&component_str).ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown component {component_str:?}; use p3|p4|p5|p6|para|trap"
                ))
            })?;
            let svg = svg::heatmap_svg(&rows, rat_f64(&step), component);
            write_output(&eff.out, &svg)
        }
        other => Err(Error::InvalidConfig(format!("unknown scan format {other:?}; use csv|svg"))),
    }
}

pub fn render_tessellation(opts: RenderOpts) -> Result<()> {
    let eff = opts.common.resolve()?;
    let r = opts.window_r.or(eff.file.window_r).unwrap_or(20.0);
    let window = Window::new(r)?;
    // degenerate draws are probability-zero; bump the seed deterministically
    let mut seed = eff.seed;
    let arr = loop {
        let realization = lineproc::sample_lines(&eff.weights, &window, seed);
        match arrangement::build(&realization) {
            Ok(arr) => break arr,
            Err(Error::Degenerate(_)) => seed = derive_seed(seed, 0xD5A2),
            Err(e) => return Err(e),
        }
    };
    let title = format!(
        "p={} q={} R={} seed={}",
        eff.weights.p(),
        eff.weights.q(),
        r,
        eff.seed
    );
    write_output(&eff.out, &svg::tessellation_svg(&arr, &title))
}

pub fn sample_cell(opts: SampleCellOpts) -> Result<()> {
    let eff = opts.common.resolve()?;
    let count = opts.count.or(eff.file.count).unwrap_or(5) as usize;
    let sampler = TypicalCellSampler::new(&eff.weights)?;
    let samples = sampler.sample_many(eff.seed, count)?;

    match eff.format.as_deref().unwrap_or("json") {
        "svg" => write_output(&eff.out, &svg::cells_svg(&samples)),
        "json" => {
            let cells: Vec<Value> = samples
                .iter()
                .map(|s| {
                    let vertices: Vec<Value> =
                        s.polygon.vertices().iter().map(|v| json!({"x": v.x, "y": v.y})).collect();
                    json!({
                        "label": s.label,
                        "n": s.z.len(),
                        "sides": s.z,
                        "vertices": vertices,
                        "density_weight": s.density_weight,
                    })
                })
                .collect();
            let out = json!({
                "schema_version": SCHEMA_VERSION,
                "p": eff.weights.p(),
                "q": eff.weights.q(),
                "seed": eff.seed,
                "cells": cells,
            });
            write_output(&eff.out, &format!("{}\n", serde_json::to_string_pretty(&out)?))
        }
        other => Err(Error::InvalidConfig(format!("unknown format {other:?}; use json|svg"))),
    }
}
