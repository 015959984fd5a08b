//! Subcommand drivers. Computation runs in parallel; files are written
//! afterwards, one at a time, in a fixed order.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use btc_core::analysis::{
    ansatz_total_spin, best_collapse, brute_force_total_spin, dominant_frequency, gap_scaling,
    steadystate_metrics, ProductAnsatz,
};
use btc_core::dicke::{
    build_liouvillian, coherent_state, evolve, spectrum, steady_state, EvolveOptions,
    EvolveResult, SpectrumRecord, SpectrumResult,
};
use btc_core::export::{
    density_matrix_json, fit_json, fixed_points_json, write_collapse_csv, write_envelopes_csv,
    write_evolve_csv, write_header, write_portrait_csv, write_spectrum_csv, write_trajectory_csv,
};
use btc_core::meanfield::{
    detect_orbit, envelope, find_fixed_points, integrate, phase_portrait, seed_grid,
    uniform_times, IntegrateOptions, MeanFieldError, Mode, OrbitVerdict, Stability,
};
use btc_core::{angles_from_bloch, bloch_from_angles, Axis, ModelParams, Params64, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{
    AnsatzOpts, AxisChoice, EvolveOpts, MeanfieldOpts, Options, PhaseOpts, PortraitOpts,
    Precision, RunConfig, ScalingOpts, SpectrumOpts, SteadyOpts,
};
use crate::error::CliError;
use crate::svg::{emit_svg, Plot, Series, Style};

/// Writes artifacts into one directory, each stamped with the config digest.
pub struct Output {
    dir: PathBuf,
    header: Vec<String>,
    digest: String,
    written: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: &Path, cfg: &RunConfig) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let digest = cfg.digest();
        let params: Vec<String> = cfg.raw_params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        Ok(Self {
            dir: dir.to_path_buf(),
            header: vec![
                format!("btc {} {}", cfg.command, env!("CARGO_PKG_VERSION")),
                format!("config digest: sha256:{digest}"),
                format!("params: {}", params.join(" ")),
            ],
            digest,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn file(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut w = BufWriter::new(file);
        f(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn csv(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut dyn Write, &[String]) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let header = self.header.clone();
        self.file(name, |w| f(w, &header))
    }

    /// Objects get a `digest` field; the header lines go under `provenance`.
    fn json(&mut self, name: &str, mut value: Value) -> Result<(), CliError> {
        if let Value::Object(m) = &mut value {
            m.insert("digest".into(), json!(format!("sha256:{}", self.digest)));
            m.insert("provenance".into(), json!(self.header));
        }
        let text = serde_json::to_string_pretty(&value).expect("json values serialize");
        self.file(name, |w| writeln!(w, "{text}"))
    }

    fn svg(&mut self, name: &str, mut plot: Plot) -> Result<(), CliError> {
        plot.comment = self.header.clone();
        let text = emit_svg(&plot)?;
        self.file(name, |w| w.write_all(text.as_bytes()))
    }
}

pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Output::new(out_dir, cfg)?;
    let p = &cfg.params;
    match &cfg.options {
        Options::Meanfield(o) => match o.precision {
            Precision::F64 => meanfield(p, o, &mut out)?,
            Precision::F32 => meanfield(&p.cast::<f32>(), o, &mut out)?,
        },
        Options::Portrait(o) => match o.precision {
            Precision::F64 => portrait(p, o, &mut out)?,
            Precision::F32 => portrait(&p.cast::<f32>(), o, &mut out)?,
        },
        Options::Evolve(o) => run_evolve(p, o, &mut out)?,
        Options::Spectrum(o) => run_spectrum(p, o, &mut out)?,
        Options::Steadystate(o) => run_steady(p, o, &mut out)?,
        Options::Scaling(o) => run_scaling(p, o, &mut out)?,
        Options::Phasediagram(o) => run_phasediagram(p, o, &mut out)?,
        Options::AnsatzCheck(o) => run_ansatz(o, &mut out)?,
    }
    Ok(out.written)
}

fn mode_of<T: Real>(p: &ModelParams<T>) -> Mode {
    Mode::from_string_length(p.n_string())
}

fn axis_of<T: Real>(p: &ModelParams<T>, choice: AxisChoice) -> Axis {
    match choice {
        AxisChoice::Natural => Axis::natural(p.p(), p.q()),
        AxisChoice::Z => Axis::ZPole,
        AxisChoice::X => Axis::XPole,
    }
}

fn series_f64<T: Real>(s: &[(T, T)]) -> Vec<(f64, f64)> {
    s.iter().map(|&(a, b)| (a.as_f64(), b.as_f64())).collect()
}

fn meanfield<T: Real + Serialize>(
    p: &ModelParams<T>,
    o: &MeanfieldOpts,
    out: &mut Output,
) -> Result<(), CliError> {
    let mode = mode_of(p);
    let axis = Axis::natural(p.p(), p.q());
    let opts = IntegrateOptions::collective(T::lit(o.rel_tol), T::lit(o.abs_tol)).with_mode(mode);
    let s0 = bloch_from_angles(T::lit(o.theta), T::lit(o.phi), Axis::ZPole);
    let traj = integrate(p, s0, &uniform_times(T::lit(o.t_end), o.samples), &opts)?;
    let fps = find_fixed_points(p, mode);
    let orbit = match detect_orbit(&traj, o.window_periods) {
        Ok(r) => json!({
            "verdict": r.verdict.as_str(),
            "drift": r.drift.as_f64(),
            "period": r.period.as_f64(),
            "peaks_used": r.peaks_used,
            "final_amplitude": r.final_amplitude.as_f64(),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };

    out.csv("trajectory.csv", |w, h| write_trajectory_csv(w, h, &traj, axis))?;
    out.json("fixed_points.json", json!({ "fixed_points": fixed_points_json(&fps) }))?;
    out.json(
        "meanfield.json",
        json!({
            "mode": format!("{mode:?}"),
            "precision": std::any::type_name::<T>(),
            "axis": format!("{axis:?}"),
            "max_norm_drift": traj.max_norm_drift().as_f64(),
            "orbit": orbit,
        }),
    )?;
    let names = ["X", "Y", "Z"];
    out.svg(
        "trajectory.svg",
        Plot {
            title: format!("mean-field trajectory, p={} q={}", p.p(), p.q()),
            x_label: "t".into(),
            y_label: "magnetization".into(),
            series: (0..3)
                .map(|c| Series::new(names[c], series_f64(&traj.component(c)), Style::Line))
                .collect(),
            y_range: Some((-1.0, 1.0)),
            ..Plot::default()
        },
    )
}

/// Splits a chart path where `phi` wraps around.
fn unwrap_segments(points: &[(f64, f64)]) -> Vec<Vec<(f64, f64)>> {
    let mut segs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for (i, &pt) in points.iter().enumerate() {
        if i > 0 && (pt.0 - points[i - 1].0).abs() > std::f64::consts::PI {
            segs.push(Vec::new());
        }
        segs.last_mut().unwrap().push(pt);
    }
    segs
}

fn portrait<T: Real + Serialize>(
    p: &ModelParams<T>,
    o: &PortraitOpts,
    out: &mut Output,
) -> Result<(), CliError> {
    let axis = axis_of(p, o.axis);
    let opts = IntegrateOptions::default().with_mode(mode_of(p));
    let seeds = seed_grid::<T>(o.n_phi, o.n_cos, axis);
    let data = phase_portrait(p, &seeds, T::lit(o.t_end), o.samples, axis, &opts)?;
    let failed = data.traces.iter().filter(|t| t.is_err()).count();

    out.csv("portrait.csv", |w, h| write_portrait_csv(w, h, &data))?;
    out.json(
        "fixed_points.json",
        json!({ "axis": format!("{axis:?}"), "fixed_points": fixed_points_json(&data.fixed_points), "failed_seeds": failed }),
    )?;
    let series = data
        .ok_traces()
        .flat_map(|tr| unwrap_segments(&series_f64(&tr.points)))
        .map(|seg| Series::new("", seg, Style::Line))
        .collect();
    let markers = data
        .fixed_points
        .iter()
        .map(|f| {
            let a = angles_from_bloch(f.location, axis);
            (a.phi.as_f64(), a.cos_theta.as_f64(), f.stability)
        })
        .collect();
    out.svg(
        "portrait.svg",
        Plot {
            title: format!("phase portrait, p={} q={} ({axis:?} chart)", p.p(), p.q()),
            x_label: "phi".into(),
            y_label: "cos theta".into(),
            series,
            markers,
            x_range: Some((0.0, std::f64::consts::TAU)),
            y_range: Some((-1.0, 1.0)),
            ..Plot::default()
        },
    )
}

fn evolve_all(
    p: &Params64,
    sizes: &[u32],
    theta: f64,
    phi: f64,
    times: &[f64],
    check_positivity: bool,
) -> Result<Vec<EvolveResult>, CliError> {
    let opts = EvolveOptions {
        check_positivity,
        ..EvolveOptions::default()
    };
    let results: Vec<Result<EvolveResult, CliError>> = sizes
        .par_iter()
        .map(|&n| Ok(evolve(p, &coherent_state(n, theta, phi), times, &opts)?))
        .collect();
    results.into_iter().collect()
}

fn run_evolve(p: &Params64, o: &EvolveOpts, out: &mut Output) -> Result<(), CliError> {
    let times = uniform_times(o.t_end, o.samples);
    let results = evolve_all(p, &o.n, o.theta, o.phi, &times, o.check_positivity)?;
    let mut summary = Vec::new();
    for r in &results {
        out.csv(&format!("evolve_N{}.csv", r.n_spins), |w, h| write_evolve_csv(w, h, r))?;
        let freq = match dominant_frequency(&r.jz_series()) {
            Ok(f) => json!({ "cycles": f.cycles, "angular": f.angular }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        let last = r.samples.last();
        summary.push(json!({
            "n_spins": r.n_spins,
            "jz_frequency": freq,
            "final_purity": last.map(|s| s.purity),
            "positivity_breaches": r.warnings.len(),
        }));
    }
    out.json("evolve.json", json!({ "runs": summary }))?;
    out.svg(
        "evolve.svg",
        Plot {
            title: "exact <J_z>(t)".into(),
            x_label: "t".into(),
            y_label: "<J_z>".into(),
            series: results
                .iter()
                .map(|r| Series::new(format!("N={}", r.n_spins), r.jz_series(), Style::Line))
                .collect(),
            y_range: Some((-1.0, 1.0)),
            ..Plot::default()
        },
    )
}

const IM_TOL: f64 = 1e-6;

fn run_spectrum(p: &Params64, o: &SpectrumOpts, out: &mut Output) -> Result<(), CliError> {
    let results: Vec<Result<SpectrumResult, CliError>> = o
        .n
        .par_iter()
        .map(|&n| Ok(spectrum(&build_liouvillian(p, n)?, o.k)?))
        .collect();
    let results: Vec<SpectrumResult> = results.into_iter().collect::<Result<_, _>>()?;
    for s in &results {
        out.csv(&format!("spectrum_N{}.csv", s.n_spins), |w, h| {
            write_spectrum_csv(w, h, &s.eigenvalues)
        })?;
    }
    let gap_fit = gap_scaling(&results.iter().map(|s| (s.n_spins, s.liouvillian_gap)).collect::<Vec<_>>())
        .map(|f| fit_json(&f, &out.digest))
        .unwrap_or_else(|e| json!({ "error": e.to_string() }));
    let records: Vec<Value> = results
        .iter()
        .map(|s| {
            let mut v = serde_json::to_value(SpectrumRecord::from(s)).expect("records serialize");
            v["degenerate_zero"] = json!(s.degenerate_zero);
            v["slowest_complex"] = json!(s.slowest_complex(IM_TOL).map(|z| [z.re, z.im]));
            v
        })
        .collect();
    out.json("spectrum.json", json!({ "spectra": records, "gap_scaling": gap_fit }))?;
    out.svg(
        "spectrum.svg",
        Plot {
            title: "Liouvillian eigenvalues".into(),
            x_label: "Re lambda".into(),
            y_label: "Im lambda".into(),
            series: results
                .iter()
                .map(|s| {
                    Series::new(
                        format!("N={}", s.n_spins),
                        s.eigenvalues.iter().map(|z| (z.re, z.im)).collect(),
                        Style::Dots,
                    )
                })
                .collect(),
            ..Plot::default()
        },
    )
}

fn run_steady(p: &Params64, o: &SteadyOpts, out: &mut Output) -> Result<(), CliError> {
    let ss = steady_state(p, o.n)?;
    let metrics = steadystate_metrics(&ss.rho);
    let d = ss.rho.dim();
    let pops: Vec<(f64, f64)> = (0..d)
        .map(|i| (o.n as f64 / 2.0 - i as f64, ss.rho.get(i, i).re))
        .collect();
    out.csv("populations.csv", |w, h| {
        write_header(w, h)?;
        writeln!(w, "m,population")?;
        for (m, v) in &pops {
            writeln!(w, "{m},{v}")?;
        }
        Ok(())
    })?;
    out.json(
        "steadystate.json",
        json!({
            "metrics": metrics,
            "residual": ss.residual,
            "min_eigenvalue": ss.min_eigenvalue,
            "smallest_singular_values": ss.smallest_singular_values,
            "density_matrix": density_matrix_json(&ss.rho),
        }),
    )?;
    out.svg(
        "populations.svg",
        Plot {
            title: format!("steady-state populations, N={}", o.n),
            x_label: "m".into(),
            y_label: "rho_mm".into(),
            series: vec![
                Series::new("rho_mm", pops, Style::Dots),
                Series::new(
                    "1/(N+1)",
                    vec![(-(o.n as f64) / 2.0, 1.0 / d as f64), (o.n as f64 / 2.0, 1.0 / d as f64)],
                    Style::Line,
                ),
            ],
            ..Plot::default()
        },
    )
}

fn run_scaling(p: &Params64, o: &ScalingOpts, out: &mut Output) -> Result<(), CliError> {
    let times = uniform_times(o.t_end, o.samples);
    let results = evolve_all(p, &o.n, o.theta, o.phi, &times, false)?;
    let envelopes: Vec<(u32, Vec<(f64, f64)>)> = results
        .iter()
        .map(|r| (r.n_spins, envelope(&r.jz_series())))
        .collect();
    let steps = ((o.nu_max - o.nu_min) / o.nu_step + 1e-9).floor() as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| o.nu_min + i as f64 * o.nu_step).collect();
    let scan = best_collapse(&envelopes, &grid)?;

    out.csv("envelopes.csv", |w, h| write_envelopes_csv(w, h, &envelopes))?;
    out.csv("collapse.csv", |w, h| write_collapse_csv(w, h, &scan))?;
    out.json(
        "scaling.json",
        json!({ "nu_best": scan.nu_best, "score_best": scan.score_best, "sizes": o.n }),
    )?;
    out.svg(
        "collapse.svg",
        Plot {
            title: format!("envelopes against t N^-{:.2}", scan.nu_best),
            x_label: "t N^-nu".into(),
            y_label: "amplitude".into(),
            series: envelopes
                .iter()
                .map(|(n, env)| {
                    let s = (*n as f64).powf(-scan.nu_best);
                    Series::new(format!("N={n}"), env.iter().map(|&(t, a)| (t * s, a)).collect(), Style::Line)
                })
                .collect(),
            ..Plot::default()
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
enum Region {
    #[serde(rename = "F+BTC")]
    Coexistence,
    #[serde(rename = "F")]
    Ferro,
    #[serde(rename = "BTC")]
    Btc,
    #[serde(rename = "NONE")]
    Neither,
}

impl Region {
    fn label(self) -> &'static str {
        match self {
            Region::Coexistence => "F+BTC",
            Region::Ferro => "F",
            Region::Btc => "BTC",
            Region::Neither => "NONE",
        }
    }
}

const PROBE_OFFSET: f64 = 0.1;
const FERRO_Z: f64 = 1e-3;

/// Follows a probe until the orbit detector has a full window.
fn probe_closed(p: &Params64, theta: f64, phi: f64) -> bool {
    let s0 = bloch_from_angles(theta, phi, Axis::ZPole);
    let mut t_end = 100.0;
    while t_end <= 1600.0 {
        let times = uniform_times(t_end, (t_end * 20.0) as usize);
        let Ok(traj) = integrate(p, s0, &times, &IntegrateOptions::default().with_mode(mode_of(p))) else {
            return false;
        };
        match detect_orbit(&traj, 20) {
            Ok(r) => return r.verdict == OrbitVerdict::Closed,
            Err(MeanFieldError::TooShort { .. }) => t_end *= 2.0,
            Err(_) => return false,
        }
    }
    false
}

fn classify_cell(p: &Params64) -> (Region, usize) {
    let fps = find_fixed_points(p, mode_of(p));
    let ferro = fps
        .iter()
        .any(|f| f.stability == Stability::Attractor && f.location.z.abs() > FERRO_Z);
    let btc = fps.iter().filter(|f| f.stability == Stability::Marginal).any(|f| {
        let a = angles_from_bloch(f.location, Axis::ZPole);
        let theta = a.theta();
        let theta = if theta > 2.0 * PROBE_OFFSET { theta - PROBE_OFFSET } else { theta + PROBE_OFFSET };
        probe_closed(p, theta, a.phi)
    });
    let region = match (ferro, btc) {
        (true, true) => Region::Coexistence,
        (true, false) => Region::Ferro,
        (false, true) => Region::Btc,
        (false, false) => Region::Neither,
    };
    (region, fps.len())
}

fn run_phasediagram(p: &Params64, o: &PhaseOpts, out: &mut Output) -> Result<(), CliError> {
    let [nx, ng] = o.cells;
    let hx = (o.omega_x[1] - o.omega_x[0]) / nx as f64;
    let hg = (o.delta_gamma[1] - o.delta_gamma[0]) / ng as f64;
    let cells: Vec<(f64, f64)> = (0..nx)
        .flat_map(|i| (0..ng).map(move |j| (i, j)))
        .map(|(i, j)| {
            (
                o.omega_x[0] + (i as f64 + 0.5) * hx,
                o.delta_gamma[0] + (j as f64 + 0.5) * hg,
            )
        })
        .collect();
    let labelled: Vec<Result<(f64, f64, Region, usize), CliError>> = cells
        .par_iter()
        .map(|&(wx, dg)| {
            let cell = ModelParams::with_delta_gamma(p.p(), p.q(), p.omega_z(), wx, dg)?
                .with_string(p.n_string())?;
            let (r, n) = classify_cell(&cell);
            Ok((wx, dg, r, n))
        })
        .collect();
    let labelled: Vec<(f64, f64, Region, usize)> = labelled.into_iter().collect::<Result<_, _>>()?;

    out.csv("phasediagram.csv", |w, h| {
        write_header(w, h)?;
        writeln!(w, "omega_x,delta_gamma,region,fixed_points")?;
        for (wx, dg, r, n) in &labelled {
            writeln!(w, "{wx},{dg},{},{n}", r.label())?;
        }
        Ok(())
    })?;
    let regions = [Region::Ferro, Region::Btc, Region::Coexistence, Region::Neither];
    let counts: serde_json::Map<String, Value> = regions
        .iter()
        .map(|r| (r.label().to_string(), json!(labelled.iter().filter(|c| c.2 == *r).count())))
        .collect();
    out.json(
        "phasediagram.json",
        json!({ "p": p.p(), "q": p.q(), "cells": o.cells, "counts": counts }),
    )?;
    out.svg(
        "phasediagram.svg",
        Plot {
            title: format!("phase diagram, p={} q={}", p.p(), p.q()),
            x_label: "omega_x / omega_z".into(),
            y_label: "delta Gamma / omega_z".into(),
            series: regions
                .iter()
                .map(|r| {
                    Series::new(
                        r.label(),
                        labelled.iter().filter(|c| c.2 == *r).map(|c| (c.0, c.1)).collect(),
                        Style::Squares,
                    )
                })
                .collect(),
            x_range: Some((o.omega_x[0], o.omega_x[1])),
            y_range: Some((o.delta_gamma[0], o.delta_gamma[1])),
            ..Plot::default()
        },
    )
}

const ANSATZ_TOL: f64 = 1e-10;

fn run_ansatz(o: &AnsatzOpts, out: &mut Output) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let mut rows = Vec::with_capacity(o.samples);
    for _ in 0..o.samples {
        let a: f64 = rng.gen_range(0.0..=1.0);
        let b = rng.gen_range(-1.0..=1.0) * (a * (1.0 - a)).sqrt();
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let n = rng.gen_range(1..=o.n_max);
        rows.push(ProductAnsatz::new(a, b, phase, n)?);
    }
    let evaluated: Vec<Result<(ProductAnsatz, f64, f64), CliError>> = rows
        .par_iter()
        .map(|x| Ok((*x, ansatz_total_spin(x), brute_force_total_spin(x)?)))
        .collect();
    let evaluated: Vec<(ProductAnsatz, f64, f64)> = evaluated.into_iter().collect::<Result<_, _>>()?;
    let max_diff = evaluated.iter().map(|e| (e.1 - e.2).abs()).fold(0.0, f64::max);

    // where on the (a, b) grid the maximal value is reached
    let n = o.n_max as f64;
    let smax = n / 2.0 * (n / 2.0 + 1.0);
    let (mut hits, mut impure) = (0usize, 0usize);
    for i in 0..=o.grid {
        let a = i as f64 / o.grid as f64;
        let bmax = (a * (1.0 - a)).sqrt();
        for j in 0..=40 {
            let x = ProductAnsatz::new(a, bmax * (j as f64 / 20.0 - 1.0), 0.0, o.n_max)?;
            if (ansatz_total_spin(&x) - smax).abs() < ANSATZ_TOL {
                hits += 1;
                if (x.single_purity() - 1.0).abs() > ANSATZ_TOL {
                    impure += 1;
                }
            }
        }
    }

    out.csv("ansatz.csv", |w, h| {
        write_header(w, h)?;
        writeln!(w, "a,b,phase,N,analytic,brute_force")?;
        for (x, an, bf) in &evaluated {
            writeln!(w, "{},{},{},{},{an},{bf}", x.a(), x.b(), x.phase(), x.n_spins())?;
        }
        Ok(())
    })?;
    out.json(
        "ansatz.json",
        json!({
            "samples": o.samples,
            "max_abs_difference": max_diff,
            "tolerance": ANSATZ_TOL,
            "maximum_hits": hits,
            "maximum_hits_with_mixed_spins": impure,
            "pass": max_diff < ANSATZ_TOL && hits > 0 && impure == 0,
        }),
    )?;
    out.svg(
        "ansatz.svg",
        Plot {
            title: "total spin: identity vs tensor construction".into(),
            x_label: "analytic <S^2>".into(),
            y_label: "brute force <S^2>".into(),
            series: vec![Series::new(
                "ansatz",
                evaluated.iter().map(|e| (e.1, e.2)).collect(),
                Style::Dots,
            )],
            ..Plot::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_splits_segments() {
        let segs = unwrap_segments(&[(6.0, 0.0), (6.2, 0.1), (0.1, 0.2), (0.3, 0.3)]);
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[1].len(), 2);
    }

    #[test]
    fn fig1_regions() {
        let cell = |wx: f64, dg: f64| classify_cell(&ModelParams::with_delta_gamma(2, 1, 1.0, wx, dg).unwrap()).0;
        assert_eq!(cell(3.0, 0.2), Region::Btc);
        assert_eq!(cell(0.5, 0.2), Region::Coexistence);
        assert_eq!(cell(0.1, 0.5), Region::Ferro);
    }
}
