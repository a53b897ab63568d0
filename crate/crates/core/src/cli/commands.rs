//! Command bodies; each returns the files it would write.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::Format;
use crate::autoforms::{load_coefficients, write_coefficients, Symmetry};
use crate::eisenstein::{
    box_grid, check_automorphy, mobius_act, supnorm_scan, EisensteinEvaluator, GroupElement,
    HyperbolicPoint, ScanTable, R_MAX, R_MIN,
};
use crate::error::{Error, Result};
use crate::exponents::{
    aggregate_with, numerator_power_slope, q1, q1_closed, subconvexity_requirement,
    write_reports_csv, BoundReport, SpectralQuadruple,
};
use crate::fit::least_squares;
use crate::quadfield::Field;
use crate::specfun::{mellin_kk_closed, mellin_kk_quadrature, mellin_normalization};
use crate::tripleprod::{
    calibrate_t_integral, t_integral_closed, t_integral_degenerate, TripleSpectrum,
};
use crate::zeta::ZetaContext;

/// A file produced by a command; non-primary files are written only with
/// `--out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub name: String,
    pub contents: String,
    pub primary: bool,
}

impl Output {
    fn primary(name: String, contents: String) -> Output {
        Output {
            name,
            contents,
            primary: true,
        }
    }

    fn plot(name: &str, contents: String) -> Output {
        Output {
            name: name.to_string(),
            contents,
            primary: false,
        }
    }
}

/// Outputs plus whether the command's checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub outputs: Vec<Output>,
    pub passed: bool,
}

fn ext(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn evaluator(cfg: &RunConfig, field: Field) -> Result<EisensteinEvaluator> {
    EisensteinEvaluator::new(
        ZetaContext::new(field, cfg.zeta_precision)?,
        cfg.tail_tolerance,
        cfg.max_norm_cutoff,
    )
}

#[derive(Debug, Serialize)]
struct EvalRow {
    x: f64,
    y: f64,
    r: f64,
    t: f64,
    re: f64,
    im: f64,
    abs: f64,
    norm_cutoff: u64,
    terms: usize,
}

pub fn eval_eisenstein(cfg: &RunConfig, format: Format) -> Result<CommandResult> {
    if cfg.points.is_empty() {
        return Err(Error::InvalidArgument(
            "no evaluation points configured".into(),
        ));
    }
    let ev = evaluator(cfg, cfg.field)?;
    let t = cfg.eval_t;
    let rows: Vec<EvalRow> = cfg
        .points
        .par_iter()
        .map(|&(x, y, r)| {
            let p = HyperbolicPoint::new(x, y, r)?;
            let d = ev.eval_detail(&p, t)?;
            Ok(EvalRow {
                x,
                y,
                r,
                t,
                re: d.value.re,
                im: d.value.im,
                abs: d.value.norm(),
                norm_cutoff: d.norm_cutoff,
                terms: d.terms,
            })
        })
        .collect::<Result<_>>()?;
    let contents = match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("x,y,r,t,re,im,abs,norm_cutoff,terms\n");
            for w in &rows {
                writeln!(
                    s,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
                    w.x, w.y, w.r, w.t, w.re, w.im, w.abs, w.norm_cutoff, w.terms
                )
                .unwrap();
            }
            s
        }
    };
    Ok(CommandResult {
        outputs: vec![Output::primary(
            format!("eval_eisenstein.{}", ext(format)),
            contents,
        )],
        passed: true,
    })
}

/// Suites of [`verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Mellin,
    Watson,
    Automorphy,
    Supnorm,
    Q1,
    Scattering,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Mellin => "mellin",
            Suite::Watson => "watson",
            Suite::Automorphy => "automorphy",
            Suite::Supnorm => "supnorm",
            Suite::Q1 => "q1",
            Suite::Scattering => "scattering",
        }
    }
}

/// One checked property: passes iff `value <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Property {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
}

impl Property {
    fn at_most(name: &str, value: f64, bound: f64) -> Property {
        Property {
            name: name.into(),
            passed: value <= bound,
            value,
            bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub passed: bool,
    pub properties: Vec<Property>,
    pub measured: BTreeMap<String, f64>,
}

impl VerifyReport {
    fn new(
        suite: Suite,
        properties: Vec<Property>,
        measured: BTreeMap<String, f64>,
    ) -> VerifyReport {
        VerifyReport {
            suite: suite.name().into(),
            passed: properties.iter().all(|p| p.passed),
            properties,
            measured,
        }
    }

    fn csv(&self) -> String {
        let mut s = String::from("kind,name,passed,value,bound\n");
        for p in &self.properties {
            writeln!(
                s,
                "property,{},{},{:.16e},{:.16e}",
                p.name, p.passed, p.value, p.bound
            )
            .unwrap();
        }
        for (k, v) in &self.measured {
            writeln!(s, "measured,{k},,{v:.16e},").unwrap();
        }
        s
    }
}

fn spread(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (hi - lo) / mean.abs()
}

fn verify_mellin(cfg: &RunConfig) -> Result<VerifyReport> {
    let v = &cfg.verify;
    let mut jobs = Vec::new();
    for &l in &v.mellin_lambdas {
        for &a in &v.mellin_orders {
            for &b in &v.mellin_orders {
                jobs.push((l, a, b));
            }
        }
    }
    if jobs.is_empty() {
        return Err(Error::InvalidArgument("empty Mellin grid".into()));
    }
    let ratios: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(l, a, b)| {
            let lam = Complex64::new(l, 0.0);
            let q = mellin_kk_quadrature(lam, a, b)?;
            let c = mellin_kk_closed(lam, Complex64::new(0.0, a), Complex64::new(0.0, b))?;
            Ok(((q / c).re, (q / (c * mellin_normalization(lam))).re))
        })
        .collect::<Result<_>>()?;
    let raw: Vec<f64> = ratios.iter().map(|r| r.0).collect();
    let normalized_dev = ratios.iter().map(|r| (r.1 - 1.0).abs()).fold(0.0, f64::max);
    let anchor = mellin_kk_quadrature(Complex64::new(1.0, 0.0), 0.0, 0.0)?
        / mellin_kk_closed(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        )?;
    let s = spread(&raw);
    let measured = BTreeMap::from([
        ("anchor_constant".to_string(), anchor.re),
        ("ratio_spread".to_string(), s),
        ("normalized_max_deviation".to_string(), normalized_dev),
    ]);
    Ok(VerifyReport::new(
        Suite::Mellin,
        vec![
            Property::at_most("ratio-constant-over-grid", s, 1e-6),
            Property::at_most("ratio-equals-2^(lambda-2)", normalized_dev, 1e-8),
        ],
        measured,
    ))
}

fn verify_watson(cfg: &RunConfig) -> Result<VerifyReport> {
    let g = &cfg.verify.watson_grid;
    let mut grid = Vec::new();
    for &a in g {
        for &b in g {
            for &c in g {
                grid.push(TripleSpectrum::new(a, b, c)?);
            }
        }
    }
    let rep = calibrate_t_integral(&grid)?;
    let anchor = t_integral_closed(&TripleSpectrum::new(0.0, 0.0, 0.0)?)?;
    let anchor_dev = (anchor - PI * PI).norm() / (PI * PI);
    let mut degen: f64 = 0.0;
    for t in [0.0, 0.5, 3.0, 10.0] {
        let c = t_integral_closed(&TripleSpectrum::new(t, t, 0.0)?)?;
        let d = t_integral_degenerate(t)?;
        degen = degen.max((c - d).norm() / d);
    }
    let measured = BTreeMap::from([
        ("measured_constant".to_string(), rep.measured_constant),
        ("one_over_16pi".to_string(), 1.0 / (16.0 * PI)),
        ("ratio_spread".to_string(), rep.ratio_spread),
        ("phase_deviation".to_string(), rep.phase_deviation),
    ]);
    Ok(VerifyReport::new(
        Suite::Watson,
        vec![
            Property::at_most("modulus-spread", rep.ratio_spread, 1e-6),
            Property::at_most("phase-(2pi)^(-i t3)", rep.phase_deviation, 1e-6),
            Property::at_most("pi-squared-anchor", anchor_dev, 1e-13),
            Property::at_most("degeneration", degen, 1e-12),
        ],
        measured,
    ))
}

/// Seeded automorphy cases `(field, γ, P, t)` with `γP` inside the height
/// window; fields are used round-robin.
pub fn automorphy_cases(
    fields: &[Field],
    count: usize,
    t_max: f64,
    seed: u64,
) -> Vec<(Field, GroupElement, HyperbolicPoint, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = fields[out.len() % fields.len()];
        let len = rng.gen_range(1..=3);
        let letters: Vec<(i64, i64)> = (0..len)
            .map(|_| (rng.gen_range(-2..=2), rng.gen_range(-2..=2)))
            .collect();
        let g = GroupElement::from_word(&f, &letters);
        let p = HyperbolicPoint::new(
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(0.6..1.5),
        )
        .expect("positive height");
        let t = rng.gen_range(0.5..=t_max);
        if mobius_act(&g, &p)
            .map(|q| (R_MIN..=R_MAX).contains(&q.r))
            .unwrap_or(false)
        {
            out.push((f, g, p, t));
        }
    }
    out
}

fn verify_automorphy(cfg: &RunConfig) -> Result<VerifyReport> {
    let v = &cfg.verify;
    let fields: Vec<Field> = v
        .automorphy_fields
        .iter()
        .map(|&d| Field::new(d))
        .collect::<Result<_>>()?;
    if fields.is_empty() || v.automorphy_cases == 0 {
        return Err(Error::InvalidArgument(
            "automorphy needs at least one field and one case".into(),
        ));
    }
    let evs: Vec<EisensteinEvaluator> = fields
        .iter()
        .map(|&f| evaluator(cfg, f))
        .collect::<Result<_>>()?;
    let cases = automorphy_cases(&fields, v.automorphy_cases, v.automorphy_t_max, v.seed);
    let residuals: Vec<f64> = cases
        .par_iter()
        .map(|(f, g, p, t)| {
            let ev = &evs[fields.iter().position(|x| x == f).expect("listed field")];
            check_automorphy(ev, p, *t, g)
        })
        .collect::<Result<_>>()?;
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    let measured = BTreeMap::from([
        ("max_residual".to_string(), worst),
        ("cases".to_string(), residuals.len() as f64),
    ]);
    Ok(VerifyReport::new(
        Suite::Automorphy,
        vec![Property::at_most("relative-residual", worst, 1e-6)],
        measured,
    ))
}

fn scan(cfg: &RunConfig, n: usize) -> Result<ScanTable> {
    let s = &cfg.supnorm;
    let ev = evaluator(cfg, cfg.field)?;
    let grid = box_grid((-0.5, 0.5), (-0.5, 0.5), s.r_range, n)?;
    supnorm_scan(&ev, &grid, &s.t_grid)
}

fn verify_supnorm(cfg: &RunConfig) -> Result<VerifyReport> {
    let s = &cfg.supnorm;
    let base = scan(cfg, s.grid_n)?;
    let doubled = scan(cfg, 2 * s.grid_n)?;
    let shift = (doubled.fitted_exponent - base.fitted_exponent).abs();
    let measured = BTreeMap::from([
        ("fitted_exponent".to_string(), base.fitted_exponent),
        (
            "fitted_exponent_doubled".to_string(),
            doubled.fitted_exponent,
        ),
    ]);
    Ok(VerifyReport::new(
        Suite::Supnorm,
        vec![
            Property::at_most(
                "exponent",
                base.fitted_exponent.max(doubled.fitted_exponent),
                s.exponent_max,
            ),
            Property::at_most("doubling-shift", shift, s.doubling_shift_max),
        ],
        measured,
    ))
}

/// `max |q1 − q1_closed|` on an `n⁴` grid over `[0, 10]⁴`.
pub fn q1_grid_discrepancy(n: usize) -> f64 {
    let v: Vec<f64> = (0..n).map(|i| 10.0 * i as f64 / (n - 1) as f64).collect();
    let mut worst: f64 = 0.0;
    for &a in &v {
        for &b in &v {
            for &c in &v {
                for &d in &v {
                    let q = SpectralQuadruple {
                        t_j: a,
                        t_f: b,
                        t_g: c,
                        t_k: d,
                    };
                    worst = worst.max((q1(&q) - q1_closed(&q)).abs());
                }
            }
        }
    }
    worst
}

/// Smallest `q1` and largest homogeneity defect (power-of-two scalings) on
/// `count` seeded random points of `2^{-20}ℤ⁴ ∩ [0, 100]⁴`, where every
/// operation in `q1` is exact.
pub fn q1_random_checks(count: usize, seed: u64) -> (f64, f64) {
    const STEPS: i64 = 100 << 20;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || rng.gen_range(0..=STEPS) as f64 / (1u64 << 20) as f64;
    let (mut min_q1, mut homog) = (f64::INFINITY, 0.0f64);
    for i in 0..count {
        let q = SpectralQuadruple {
            t_j: draw(),
            t_f: draw(),
            t_g: draw(),
            t_k: draw(),
        };
        let v = q1(&q);
        min_q1 = min_q1.min(v);
        let c = [0.25, 0.5, 2.0, 8.0][i % 4];
        homog = homog.max((q1(&q.scale(c)) - c * v).abs());
    }
    (min_q1, homog)
}

fn verify_q1(cfg: &RunConfig) -> Result<VerifyReport> {
    let v = &cfg.verify;
    let disc = q1_grid_discrepancy(v.q1_grid_n);
    let (min_q1, homog) = q1_random_checks(v.q1_random_points, v.seed);
    let measured = BTreeMap::from([
        ("grid_points".to_string(), (v.q1_grid_n as f64).powi(4)),
        ("min_q1".to_string(), min_q1),
        ("random_points".to_string(), v.q1_random_points as f64),
    ]);
    Ok(VerifyReport::new(
        Suite::Q1,
        vec![
            Property::at_most("closed-form-equivalence", disc, 1e-12),
            Property::at_most("nonnegativity", -min_q1, 0.0),
            Property::at_most("homogeneity", homog, 0.0),
        ],
        measured,
    ))
}

/// `max_t ||φ(it)| − 1|` over the configured fields and grid.
pub fn unitarity_deviation(fields: &[i64], ts: &[f64], precision: f64) -> Result<f64> {
    let per_field: Vec<f64> = fields
        .par_iter()
        .map(|&d| {
            let ctx = ZetaContext::new(Field::new(d)?, precision)?;
            let mut worst: f64 = 0.0;
            for &t in ts {
                worst = worst.max((ctx.scattering_phi(Complex64::new(0.0, t))?.norm() - 1.0).abs());
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(per_field.into_iter().fold(0.0, f64::max))
}

fn verify_scattering(cfg: &RunConfig) -> Result<VerifyReport> {
    let ts = cfg.scattering_grid();
    let worst = unitarity_deviation(&cfg.verify.scattering_fields, &ts, cfg.zeta_precision)?;
    let measured = BTreeMap::from([
        ("max_deviation".to_string(), worst),
        ("points".to_string(), ts.len() as f64),
    ]);
    Ok(VerifyReport::new(
        Suite::Scattering,
        vec![Property::at_most("unitarity", worst, 1e-6)],
        measured,
    ))
}

pub fn verify(cfg: &RunConfig, suite: Suite, format: Format) -> Result<CommandResult> {
    let report = match suite {
        Suite::Mellin => verify_mellin(cfg)?,
        Suite::Watson => verify_watson(cfg)?,
        Suite::Automorphy => verify_automorphy(cfg)?,
        Suite::Supnorm => verify_supnorm(cfg)?,
        Suite::Q1 => verify_q1(cfg)?,
        Suite::Scattering => verify_scattering(cfg)?,
    };
    let contents = match format {
        Format::Json => json(&report),
        Format::Csv => report.csv(),
    };
    Ok(CommandResult {
        outputs: vec![Output::primary(
            format!("verify_{}.{}", suite.name(), ext(format)),
            contents,
        )],
        passed: report.passed,
    })
}

/// Targets of [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    Supnorm,
    Aggregate,
    Subconvexity,
}

fn nonempty(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument(format!("empty {what} grid")));
    }
    Ok(())
}

fn sweep_supnorm(cfg: &RunConfig, format: Format) -> Result<CommandResult> {
    nonempty(&cfg.supnorm.t_grid, "t")?;
    let table = scan(cfg, cfg.supnorm.grid_n)?;
    let contents = match format {
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut v = Vec::new();
            table.write_csv(&mut v).expect("in-memory write");
            String::from_utf8(v).expect("ascii table")
        }
    };
    let mut plot = String::from("t,sup_value\n");
    for r in &table.rows {
        writeln!(plot, "{:.16e},{:.16e}", r.t, r.sup_value).unwrap();
    }
    Ok(CommandResult {
        outputs: vec![
            Output::primary(format!("sweep_supnorm.{}", ext(format)), contents),
            Output::plot("sweep_supnorm_plot.csv", plot),
        ],
        passed: table.fitted_exponent <= cfg.supnorm.exponent_max,
    })
}

#[derive(Debug, Serialize)]
struct AggregateSweep<'a> {
    reports: &'a [BoundReport],
    slope: f64,
    slope_band: (f64, f64),
    passed: bool,
}

fn sweep_aggregate(cfg: &RunConfig, format: Format) -> Result<CommandResult> {
    let a = &cfg.aggregate;
    nonempty(&a.t_f_grid, "t_f")?;
    let reports: Vec<BoundReport> = a
        .t_f_grid
        .par_iter()
        .map(|&t_f| aggregate_with(t_f, a.t_g.unwrap_or(t_f), a.t_k, &a.policy, &a.options))
        .collect::<Result<_>>()?;
    let slope = if reports.len() >= 2 {
        let x: Vec<f64> = reports.iter().map(|r| r.t_f.ln()).collect();
        let y: Vec<f64> = reports.iter().map(|r| r.aggregate).collect();
        least_squares(&x, &y)?.slope
    } else {
        return Err(Error::InvalidArgument(
            "aggregate sweep needs at least two t_f values".into(),
        ));
    };
    let passed = slope >= a.slope_band.0 && slope <= a.slope_band.1;
    let contents = match format {
        Format::Json => json(&AggregateSweep {
            reports: &reports,
            slope,
            slope_band: a.slope_band,
            passed,
        }),
        Format::Csv => {
            let mut v = Vec::new();
            write_reports_csv(&reports, &mut v).expect("in-memory write");
            let mut s = String::from_utf8(v).expect("ascii table");
            writeln!(s, "fit,slope,{slope:.16e}").unwrap();
            s
        }
    };
    let mut plot = String::from("t_f,log_aggregate\n");
    for r in &reports {
        writeln!(plot, "{:.16e},{:.16e}", r.t_f, r.aggregate).unwrap();
    }
    Ok(CommandResult {
        outputs: vec![
            Output::primary(format!("sweep_aggregate.{}", ext(format)), contents),
            Output::plot("sweep_aggregate_plot.csv", plot),
        ],
        passed,
    })
}

#[derive(Debug, Serialize)]
struct SubconvexitySweep {
    rows: Vec<(f64, f64)>,
    requirement: f64,
    band: (f64, f64),
    passed: bool,
}

fn sweep_subconvexity(cfg: &RunConfig, format: Format) -> Result<CommandResult> {
    let s = &cfg.subconvexity;
    nonempty(&s.grid, "t_f")?;
    nonempty(&s.e_grid, "E")?;
    let rows: Vec<(f64, f64)> = s
        .e_grid
        .par_iter()
        .map(|&e| numerator_power_slope(&s.grid, s.t_k, e, &s.options).map(|m| (e, m)))
        .collect::<Result<_>>()?;
    let requirement = subconvexity_requirement(&s.grid, s.t_k, &s.options)?.exponent;
    let passed = requirement >= s.band.0 && requirement <= s.band.1;
    let contents = match format {
        Format::Json => json(&SubconvexitySweep {
            rows: rows.clone(),
            requirement,
            band: s.band,
            passed,
        }),
        Format::Csv => {
            let mut out = String::from("exponent,slope\n");
            for (e, m) in &rows {
                writeln!(out, "{e:.16e},{m:.16e}").unwrap();
            }
            writeln!(out, "requirement,{requirement:.16e}").unwrap();
            out
        }
    };
    let mut plot = String::from("exponent,slope\n");
    for (e, m) in &rows {
        writeln!(plot, "{e:.16e},{m:.16e}").unwrap();
    }
    Ok(CommandResult {
        outputs: vec![
            Output::primary(format!("sweep_subconvexity.{}", ext(format)), contents),
            Output::plot("sweep_subconvexity_plot.csv", plot),
        ],
        passed,
    })
}

pub fn sweep(cfg: &RunConfig, target: Target, format: Format) -> Result<CommandResult> {
    match target {
        Target::Supnorm => sweep_supnorm(cfg, format),
        Target::Aggregate => sweep_aggregate(cfg, format),
        Target::Subconvexity => sweep_subconvexity(cfg, format),
    }
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    d: i64,
    t: f64,
    symmetry: Symmetry,
    norm_coverage: i64,
    coefficients: usize,
}

pub fn ingest_coefficients(cfg: &RunConfig, format: Format) -> Result<CommandResult> {
    let path = cfg
        .coefficients_path
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("[coefficients] path is required".into()))?;
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let data = load_coefficients(BufReader::new(file))?;
    if data.field != cfg.field {
        return Err(Error::FieldMismatch(format!(
            "file has D = {}, config has D = {}",
            data.field.d(),
            cfg.field.d()
        )));
    }
    let contents = match format {
        Format::Json => json(&IngestSummary {
            d: data.field.d(),
            t: data.t,
            symmetry: data.symmetry,
            norm_coverage: data.norm_coverage,
            coefficients: data.coefficients.len(),
        }),
        Format::Csv => {
            let mut v = Vec::new();
            write_coefficients(&data, &mut v).map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(v).expect("ascii table")
        }
    };
    Ok(CommandResult {
        outputs: vec![Output::primary(
            format!("coefficients.{}", ext(format)),
            contents,
        )],
        passed: true,
    })
}
