use crate::config::{Config, ConfigError, DensityName, NormName, SweepConfig};
use gis_core::bargmann::{coherent_overlap_series, pt_gis_analytic, pt_overlap};
use gis_core::export::{csv, fmt_f64, header_lines, state_rows, STATE_COLUMNS};
use gis_core::gis::{build, classify, coefficients, raw_coefficients, CLOSED_FORM_LIMIT};
use gis_core::measure::{moment_residuals, MeasureSpec};
use gis_core::operators::{eigen_relations, eigen_residual, evolve, lowering_residual, uncertainty_report};
use gis_core::poschl_teller::{pt_c0, pt_mean_g, pt_wavefunction, PtParams, WavefunctionNorm, WAVEFUNCTION_MAX_N};
use gis_core::{
    Classification, Complex64, FockState, GisParams, Route, Spectrum, SpectrumKind, Truncation, UncertaintyReport,
};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct Overrides {
    pub trunc: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure [{}]: {0}", .0.code())]
    Numerical(gis_core::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<gis_core::Error> for CliError {
    fn from(e: gis_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Config(ConfigError(format!("[{}] {e}", e.code())))
        }
    }
}

/// Rendered output plus whether a verification failed (exit 3).
pub struct Artifact {
    pub text: String,
    pub failed: bool,
}

impl Artifact {
    fn ok(text: String) -> Self {
        Artifact { text, failed: false }
    }
}

fn cx(z: Complex64) -> String {
    format!("{} {}", fmt_f64(z.re), fmt_f64(z.im))
}

fn cx_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn spectrum_label(s: &Spectrum) -> String {
    match s.kind() {
        SpectrumKind::PoschlTeller { kappa, lambda_pot } => {
            format!(
                "poschl_teller kappa={} lambda={} n_max={}",
                fmt_f64(kappa),
                fmt_f64(lambda_pot),
                s.max_index()
            )
        }
        k => format!("{} n_max={}", k.name(), s.max_index()),
    }
}

fn trunc_label(t: Truncation) -> String {
    match t {
        Truncation::Auto => "auto".into(),
        Truncation::Fixed(n) => n.to_string(),
    }
}

fn report_json(r: &UncertaintyReport) -> Value {
    let mut m = serde_json::Map::new();
    for (k, v) in UncertaintyReport::FIELDS.iter().zip(r.values()) {
        m.insert((*k).into(), json!(v));
    }
    Value::Object(m)
}

pub fn build_cmd(cfg: &Config, o: Overrides, format: Format) -> Result<Artifact, CliError> {
    let s = cfg.build_spectrum()?;
    let st = cfg.state()?;
    let p = GisParams::new(st.lambda(), st.z(), st.alpha);
    let trunc = st.truncation(o.trunc);
    let route = st.route();
    let psi = if route == Route::Recurrence {
        build(&s, &p, trunc)?
    } else {
        coefficients(&s, &p, trunc, route)?.to_state(st.alpha)
    };
    let r = uncertainty_report(&psi, &s)?;
    let text = match format {
        Format::Csv => {
            let mut pairs = vec![
                ("spectrum", spectrum_label(&s)),
                ("lambda", cx(p.lambda)),
                ("z", cx(p.z)),
                ("alpha", fmt_f64(p.alpha)),
                ("route", route.name().to_string()),
                ("truncation", trunc_label(trunc)),
                ("classification", p.classification.name().to_string()),
                ("trunc", psi.trunc().to_string()),
            ];
            for (k, v) in UncertaintyReport::FIELDS.iter().zip(r.values()) {
                pairs.push((k, fmt_f64(v)));
            }
            header_lines(&pairs) + &csv(&STATE_COLUMNS, &state_rows(&psi, &s))
        }
        Format::Json => {
            let coeffs: Vec<Value> = psi.coefficients.iter().map(|c| cx_json(*c)).collect();
            let v = json!({
                "spectrum": spectrum_label(&s),
                "lambda": cx_json(p.lambda),
                "z": cx_json(p.z),
                "alpha": p.alpha,
                "route": route.name(),
                "truncation": trunc_label(trunc),
                "classification": p.classification.name(),
                "trunc": psi.trunc(),
                "report": report_json(&r),
                "coefficients": coeffs,
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
    };
    Ok(Artifact::ok(text))
}

struct Check {
    name: &'static str,
    value: f64,
    tol: f64,
}

fn check(name: &'static str, value: f64, tol: f64) -> Check {
    Check { name, value, tol }
}

impl Check {
    fn pass(&self) -> bool {
        self.value.abs() <= self.tol
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn max_diff(a: &FockState, b: &FockState) -> f64 {
    if a.coefficients.len() != b.coefficients.len() {
        return f64::INFINITY;
    }
    a.coefficients
        .iter()
        .zip(&b.coefficients)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn verify_checks(s: &Spectrum, p: &GisParams, trunc: Truncation, tol: f64) -> Result<Vec<Check>, CliError> {
    let psi = build(s, p, trunc)?;
    let fixed = Truncation::Fixed(psi.trunc());
    let r = uncertainty_report(&psi, s)?;
    let mut out = vec![
        check("normalization", psi.norm_sqr() - 1.0, tol),
        check("rs_saturation", r.normalized_defect(), tol),
        check("eigen_residual", eigen_residual(&psi, s, p.lambda, p.z)?, tol),
        check("eigen_relations", eigen_relations(&r, p.lambda).max(), tol),
    ];

    let rec = coefficients(s, p, fixed, Route::Recurrence)?.to_state(p.alpha);
    if p.z.norm() > 0.0 {
        let cf = coefficients(s, p, fixed, Route::ContinuedFraction)?.to_state(p.alpha);
        out.push(check("route_continued_fraction", max_diff(&rec, &cf), tol));
    }
    if psi.trunc() <= CLOSED_FORM_LIMIT {
        let cl = coefficients(s, p, fixed, Route::ClosedForm)?.to_state(p.alpha);
        out.push(check("route_closed_form", max_diff(&rec, &cl), tol));
    }

    let t = 0.7;
    let moved = evolve(&psi, s, t)?;
    let target = build(s, &GisParams::new(p.lambda, p.z, p.alpha + t), fixed)?;
    out.push(check("temporal_stability", max_diff(&moved, &target), tol));

    if p.lambda.norm() > 0.0 && (p.lambda.norm() - 1.0).abs() < 1e-12 {
        out.push(check("equal_variances", rel(r.var_w, r.var_p), tol));
    }
    if p.classification == Classification::GazeauKlauder {
        let zz = p.z.norm_sqr();
        let action = psi.energy_expectation(s)?;
        out.push(check(
            "action_identity",
            if zz > 0.0 { rel(action, zz) } else { action },
            tol,
        ));
        out.push(check("lowering_eigenvalue", lowering_residual(&psi, s, p.z)?, tol));
        out.push(check("zero_mean_f", r.mean_f / r.mean_g, tol));
        out.push(check("var_w_half_g", rel(r.var_w, 0.5 * r.mean_g), tol));
        out.push(check("var_p_half_g", rel(r.var_p, 0.5 * r.mean_g), tol));
    }

    if let Some(u) = s.kind().upsilon() {
        if p.classification == Classification::GazeauKlauder {
            let zr = p.z.norm();
            out.push(check("closed_form_mean_g", rel(r.mean_g, pt_mean_g(zr, u)?), tol));
            out.push(check(
                "closed_form_c0",
                rel(psi.coefficients[0].norm(), pt_c0(zr, u)?),
                tol,
            ));
        }
        // Bargmann: Taylor coefficients of the Kummer solution against dₙ/f(n)
        let p0 = GisParams::new(p.lambda, p.z, 0.0);
        let terms = 41.min(s.max_index() + 1);
        let f = pt_gis_analytic(p.z, p.lambda, u)?;
        let t = raw_coefficients(s, &p0, terms, Route::Recurrence)?;
        let mut worst = 0.0f64;
        for n in 0..terms {
            let alg = Complex64::from_polar((t.log_abs[n] - 0.5 * s.factorial_moment(n)?.log_value).exp(), t.arg[n]);
            worst = worst.max((f.series[n] - alg).norm() / alg.norm().max(f64::MIN_POSITIVE));
        }
        out.push(check("bargmann_taylor", worst, tol));
        let set = coefficients(s, &p0, fixed, Route::Recurrence)?;
        let probe = Complex64::new(0.6, -0.4);
        let series = coherent_overlap_series(&set.to_state(0.0), s, probe)? / set.c0;
        let closed = pt_overlap(p.z, p.lambda, u, probe)?;
        out.push(check("bargmann_overlap", (series - closed).norm() / closed.norm(), tol));
    }
    Ok(out)
}

pub fn verify_cmd(cfg: &Config, o: Overrides, format: Format) -> Result<Artifact, CliError> {
    let s = cfg.build_spectrum()?;
    let st = cfg.state()?;
    let tol = o.tol.unwrap_or(cfg.tol());
    let p = GisParams::new(st.lambda(), st.z(), st.alpha);
    let checks = verify_checks(&s, &p, st.truncation(o.trunc), tol)?;
    let failed = checks.iter().any(|c| !c.pass());
    let text = match format {
        Format::Csv => {
            let pairs = [
                ("spectrum", spectrum_label(&s)),
                ("lambda", cx(p.lambda)),
                ("z", cx(p.z)),
                ("alpha", fmt_f64(p.alpha)),
                ("classification", p.classification.name().to_string()),
            ];
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.to_string(),
                        fmt_f64(c.value),
                        fmt_f64(c.tol),
                        if c.pass() { "pass" } else { "fail" }.into(),
                    ]
                })
                .collect();
            header_lines(&pairs) + &csv(&["check", "value", "tolerance", "result"], &rows)
        }
        Format::Json => {
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| json!({"check": c.name, "value": c.value, "tolerance": c.tol, "pass": c.pass()}))
                .collect();
            let v = json!({
                "spectrum": spectrum_label(&s),
                "lambda": cx_json(p.lambda),
                "z": cx_json(p.z),
                "alpha": p.alpha,
                "classification": p.classification.name(),
                "checks": rows,
                "pass": !failed,
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
    };
    Ok(Artifact { text, failed })
}

pub const SWEEP_COLUMNS: [&str; 11] = [
    "lambda_re",
    "lambda_im",
    "z_re",
    "z_im",
    "var_w",
    "var_p",
    "mean_g",
    "mean_f",
    "rs_defect",
    "classification",
    "status",
];

struct SweepRow {
    lambda: Complex64,
    z: Complex64,
    classification: Classification,
    result: Result<UncertaintyReport, gis_core::Error>,
}

fn sweep_rows(s: &Spectrum, sw: &SweepConfig, trunc: Truncation) -> Vec<SweepRow> {
    let route = sw.route.map(Route::from).unwrap_or(Route::Recurrence);
    let grid: Vec<(Complex64, Complex64)> = sw
        .lambda
        .points()
        .into_iter()
        .flat_map(|l| sw.z.points().into_iter().map(move |z| (l, z)))
        .collect();
    grid.into_par_iter()
        .map(|(l, z)| {
            let p = GisParams::new(l, z, sw.alpha);
            let result = if route == Route::Recurrence {
                build(s, &p, trunc)
            } else {
                coefficients(s, &p, trunc, route).map(|c| c.to_state(sw.alpha))
            }
            .and_then(|psi| uncertainty_report(&psi, s));
            SweepRow {
                lambda: l,
                z,
                classification: classify(l, z),
                result,
            }
        })
        .collect()
}

pub fn sweep_cmd(cfg: &Config, o: Overrides, format: Format) -> Result<Artifact, CliError> {
    let s = cfg.build_spectrum()?;
    let sw = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| ConfigError("sweep needs a [sweep] table".into()))?;
    let trunc = o.trunc.map(Truncation::Fixed).unwrap_or(Truncation::Auto);
    let rows = sweep_rows(&s, sw, trunc);
    let text = match format {
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut v = vec![
                        fmt_f64(r.lambda.re),
                        fmt_f64(r.lambda.im),
                        fmt_f64(r.z.re),
                        fmt_f64(r.z.im),
                    ];
                    match &r.result {
                        Ok(rep) => {
                            v.extend([rep.var_w, rep.var_p, rep.mean_g, rep.mean_f, rep.rs_defect].map(fmt_f64));
                            v.push(r.classification.name().into());
                            v.push("ok".into());
                        }
                        Err(e) => {
                            v.extend(vec!["nan".to_string(); 5]);
                            v.push(r.classification.name().into());
                            v.push(e.code().into());
                        }
                    }
                    v
                })
                .collect();
            let pairs = [
                ("spectrum", spectrum_label(&s)),
                ("alpha", fmt_f64(sw.alpha)),
                ("truncation", trunc_label(trunc)),
            ];
            header_lines(&pairs) + &csv(&SWEEP_COLUMNS, &cells)
        }
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let (report, status) = match &r.result {
                        Ok(rep) => (report_json(rep), "ok"),
                        Err(e) => (Value::Null, e.code()),
                    };
                    json!({
                        "lambda": cx_json(r.lambda),
                        "z": cx_json(r.z),
                        "classification": r.classification.name(),
                        "status": status,
                        "report": report,
                    })
                })
                .collect();
            let v = json!({"spectrum": spectrum_label(&s), "alpha": sw.alpha, "truncation": trunc_label(trunc), "points": items});
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
    };
    Ok(Artifact::ok(text))
}

pub fn measure_cmd(cfg: &Config, o: Overrides, format: Format) -> Result<Artifact, CliError> {
    let s = cfg.build_spectrum()?;
    let mc = cfg
        .measure
        .as_ref()
        .ok_or_else(|| ConfigError("measure-check needs a [measure] table".into()))?;
    let tol = o.tol.unwrap_or(cfg.tol());
    let upsilon = || {
        s.kind().upsilon().ok_or_else(|| {
            ConfigError(format!(
                "density {:?} needs a Pöschl–Teller or infinite-well spectrum",
                mc.density
            ))
        })
    };
    let m = match mc.density {
        DensityName::Harmonic => MeasureSpec::harmonic(),
        DensityName::PtPrinted => MeasureSpec::pt_printed(upsilon()?)?,
        DensityName::PtCorrected => MeasureSpec::pt_corrected(upsilon()?)?,
        DensityName::PtOrder => {
            let nu = mc
                .order
                .ok_or_else(|| ConfigError("measure.order is required for pt_order".into()))?;
            MeasureSpec::pt_with_order(upsilon()?, nu)?
        }
    };
    if mc.order.is_some() && mc.density != DensityName::PtOrder {
        return Err(ConfigError("measure.order only applies to pt_order".into()).into());
    }
    let rows = moment_residuals(&m, &s, mc.n_max)?;
    let failed = rows.iter().any(|r| r.rel_residual > tol || r.rel_residual.is_nan());
    let text = match format {
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        fmt_f64(r.moment_numeric),
                        fmt_f64(r.moment_target),
                        fmt_f64(r.rel_residual),
                        fmt_f64(r.quadrature_error),
                        if r.rel_residual <= tol { "pass" } else { "fail" }.into(),
                    ]
                })
                .collect();
            let pairs = [
                ("spectrum", spectrum_label(&s)),
                ("density", m.description.clone()),
                ("tolerance", fmt_f64(tol)),
            ];
            header_lines(&pairs)
                + &csv(
                    &[
                        "n",
                        "moment_numeric",
                        "moment_target",
                        "rel_residual",
                        "quadrature_error",
                        "result",
                    ],
                    &cells,
                )
        }
        Format::Json => {
            let v = json!({
                "spectrum": spectrum_label(&s),
                "density": m.description,
                "tolerance": tol,
                "rows": rows,
                "pass": !failed,
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
    };
    Ok(Artifact { text, failed })
}

pub fn wavefunction_cmd(cfg: &Config, o: Overrides, format: Format) -> Result<Artifact, CliError> {
    let s = cfg.build_spectrum()?;
    let wc = cfg
        .wavefunction
        .as_ref()
        .ok_or_else(|| ConfigError("wavefunction needs a [wavefunction] table".into()))?;
    let pp = match s.kind() {
        SpectrumKind::PoschlTeller { kappa, lambda_pot } => PtParams::new(kappa, lambda_pot, wc.a)?,
        SpectrumKind::InfiniteWell => PtParams::infinite_well(wc.a)?,
        k => {
            return Err(ConfigError(format!(
                "wavefunctions need a Pöschl–Teller or infinite-well spectrum, got {}",
                k.name()
            ))
            .into())
        }
    };
    let norm = match wc.norm {
        NormName::Corrected => WavefunctionNorm::Corrected,
        NormName::Printed => WavefunctionNorm::AsPrinted,
    };
    if let Some(&n) = wc.levels.iter().find(|&&n| n > WAVEFUNCTION_MAX_N) {
        return Err(ConfigError(format!("wavefunction level {n} exceeds {WAVEFUNCTION_MAX_N}")).into());
    }
    let tol = o.tol.unwrap_or(cfg.tol());
    // Ψ(x) = Σ cₙ ψₙ(x) when a [state] table is present
    let psi = match &cfg.state {
        Some(st) => {
            let p = GisParams::new(st.lambda(), st.z(), st.alpha);
            let trunc = st.truncation(o.trunc);
            let psi = build(&s, &p, trunc)?;
            let keep = psi.trunc().min(WAVEFUNCTION_MAX_N + 1);
            let dropped: f64 = psi.coefficients[keep..].iter().map(|c| c.norm_sqr()).sum::<f64>() + psi.tail_mass;
            if dropped > tol {
                return Err(gis_core::Error::TruncationInsufficient {
                    trunc: keep,
                    tail_mass: dropped,
                    target: tol,
                }
                .into());
            }
            Some(psi.coefficients[..keep].to_vec())
        }
        None => None,
    };
    let width = pp.width();
    let xs: Vec<f64> = (0..wc.points)
        .map(|k| width * (k as f64 + 0.5) / wc.points as f64)
        .collect();
    let mut header: Vec<String> = vec!["x".into()];
    header.extend(wc.levels.iter().map(|n| format!("psi_{n}")));
    if psi.is_some() {
        header.push("re_psi".into());
        header.push("im_psi".into());
    }
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(xs.len());
    for &x in &xs {
        let mut row = vec![x];
        for &n in &wc.levels {
            row.push(pt_wavefunction(n, x, &pp, norm)?);
        }
        if let Some(c) = &psi {
            let mut total = Complex64::new(0.0, 0.0);
            for (n, cn) in c.iter().enumerate() {
                total += cn * pt_wavefunction(n, x, &pp, norm)?;
            }
            row.push(total.re);
            row.push(total.im);
        }
        table.push(row);
    }
    let text = match format {
        Format::Csv => {
            let mut pairs = vec![
                ("spectrum", spectrum_label(&s)),
                ("a", fmt_f64(wc.a)),
                ("norm", format!("{:?}", wc.norm).to_lowercase()),
            ];
            if let Some(st) = &cfg.state {
                pairs.push(("lambda", cx(st.lambda())));
                pairs.push(("z", cx(st.z())));
                pairs.push(("alpha", fmt_f64(st.alpha)));
            }
            let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
            let cells: Vec<Vec<String>> = table.iter().map(|r| r.iter().map(|v| fmt_f64(*v)).collect()).collect();
            header_lines(&pairs) + &csv(&hdr, &cells)
        }
        Format::Json => {
            let v = json!({
                "spectrum": spectrum_label(&s),
                "a": wc.a,
                "columns": header,
                "rows": table,
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
    };
    Ok(Artifact::ok(text))
}
