//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.  Run with `cargo test -p gis-core --test acceptance`.

#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::type_complexity
)]

mod common;

use common::{c, crel, draw_lambda, draw_z, rel, rng, table};
use gis_core::bargmann::{
    coherent_overlap_series, ode_residual, pt_gis_analytic, pt_gis_analytic_with, pt_overlap, Branch,
};
use gis_core::exact::Dyadic;
use gis_core::gis::{
    build, delta_sum, delta_sum_exact, even_gis, gis_recurrence, gk_coherent, harmonic_squeezed_check,
    raw_coefficients, LogSeq,
};
use gis_core::measure::{fit_k_order, moment_residuals, pt_measure_density, MeasureSpec};
use gis_core::operators::{evolve, lowering_residual, uncertainty_report};
use gis_core::poschl_teller::{
    count_nodes, overlap_matrix, printed_norm_audit, pt_c0, pt_coherent_norm, pt_mean_g, PtParams, WavefunctionNorm,
};
use gis_core::specfun::{bessel_i, bessel_k, hyp_0f1, hyp_1f1, jacobi_p, log_gamma};
use gis_core::{Complex64, GisParams, Route, Spectrum, Truncation};
use rand::Rng;
use std::time::Instant;

const N_MAX: usize = 4095;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn spectra() -> Vec<(&'static str, Spectrum)> {
    vec![
        ("harmonic", Spectrum::harmonic(N_MAX).unwrap()),
        ("infinite_well", Spectrum::infinite_well(N_MAX).unwrap()),
        ("pt_3", Spectrum::poschl_teller(1.5, 1.5, N_MAX).unwrap()),
    ]
}

fn pt(upsilon: f64, n_max: usize) -> Spectrum {
    if upsilon == 2.0 {
        Spectrum::infinite_well(n_max).unwrap()
    } else {
        Spectrum::poschl_teller(upsilon / 2.0, upsilon / 2.0, n_max).unwrap()
    }
}

fn value(seq: &LogSeq, n: usize) -> Complex64 {
    Complex64::from_polar(seq.log_abs[n].exp(), seq.arg[n])
}

/// Largest per-coefficient relative difference of two sequences.
fn seq_rel(a: &LogSeq, b: &LogSeq, count: usize) -> f64 {
    (0..count).map(|n| crel(value(a, n), value(b, n))).fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let spectra = spectra();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for k in 0..200 {
        let (name, s) = &spectra[k % 3];
        let lambda = draw_lambda(&mut r);
        let z = draw_z(&mut r, 2.0);
        let p = GisParams::new(lambda, z, r.gen_range(-1.0..1.0));
        match build(s, &p, Truncation::Auto).and_then(|psi| uncertainty_report(&psi, s)) {
            Ok(rep) => {
                let d = rep.normalized_defect().abs();
                worst = worst.max(d);
                if !(d < 1e-8) {
                    failures.push(format!("{name} λ={lambda} z={z}: {d:e}"));
                }
            }
            Err(e) => failures.push(format!("{name} λ={lambda} z={z}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && secs < 30.0,
        format!(
            "200 draws, max normalized defect {worst:.2e}, {secs:.1}s {}",
            failures.join("; ")
        ),
    )
}

fn subsets(items: &[usize], h: usize) -> Vec<Vec<usize>> {
    if h == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], h - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn brute_delta(s: &Spectrum, n: usize, h: usize) -> Dyadic {
    let idx: Vec<usize> = (1..n).collect();
    let e = s.energies();
    let mut total = Dyadic::zero();
    for sub in subsets(&idx, h) {
        if sub.windows(2).any(|w| w[1] == w[0] + 1) {
            continue;
        }
        let mut prod = Dyadic::one();
        for j in sub {
            prod = &prod * &Dyadic::from_f64(e[j]);
        }
        total = &total + &prod;
    }
    total
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let spectra = [
        Spectrum::harmonic(100).unwrap(),
        Spectrum::infinite_well(100).unwrap(),
        Spectrum::poschl_teller(1.5, 1.5, 100).unwrap(),
        Spectrum::poschl_teller(1.3, 2.45, 100).unwrap(),
    ];
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for k in 0..50 {
        let s = &spectra[k % spectra.len()];
        let p = GisParams::new(draw_lambda(&mut r), draw_z(&mut r, 2.0), 0.0);
        let got = (|| {
            let rec = raw_coefficients(s, &p, 61, Route::Recurrence)?;
            let cf = raw_coefficients(s, &p, 61, Route::ContinuedFraction)?;
            let cl = raw_coefficients(s, &p, 61, Route::ClosedForm)?;
            Ok::<_, gis_core::Error>(seq_rel(&rec, &cl, 61).max(seq_rel(&cf, &cl, 61)))
        })();
        match got {
            Ok(d) => worst = worst.max(d),
            Err(e) => errors.push(e.to_string()),
        }
    }
    let mut delta_ok = true;
    for s in &spectra {
        for n in 0..=12 {
            for h in 0..=6.min(n / 2) {
                let brute = brute_delta(s, n, h);
                delta_ok &= delta_sum_exact(s, n, h).unwrap() == brute;
                delta_ok &= delta_sum(s, n, h).unwrap() == brute.to_f64();
            }
        }
    }
    outcome(
        worst < 1e-9 && errors.is_empty() && delta_ok,
        format!(
            "50 draws n ≤ 60, max relative difference {worst:.2e}; Δ(n,h) exact match n ≤ 12, h ≤ 6: {delta_ok} {}",
            errors.join("; ")
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut worst = [0.0f64; 5];
    let mut errors = Vec::new();
    for &u in &[2.0, 3.0, 4.5] {
        let s = if u == 4.5 {
            Spectrum::poschl_teller(2.0, 2.5, N_MAX).unwrap()
        } else {
            pt(u, N_MAX)
        };
        for &zr in &[0.5, 1.5, 4.0] {
            let z = Complex64::from_polar(zr, 0.7);
            let alpha = 0.4;
            let res = (|| {
                let psi = gk_coherent(&s, z, alpha, Truncation::Auto)?;
                let action = rel(psi.energy_expectation(&s)?, zr * zr);
                let t = 1.3;
                let moved = evolve(&psi, &s, t)?;
                let target = gk_coherent(&s, z, alpha + t, Truncation::Fixed(psi.trunc()))?;
                let stab = moved
                    .coefficients
                    .iter()
                    .zip(&target.coefficients)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                let eig = lowering_residual(&psi, &s, z)?;
                let rep = uncertainty_report(&psi, &s)?;
                let f = rep.mean_f.abs();
                let var = rel(rep.var_w, 0.5 * rep.mean_g).max(rel(rep.var_p, 0.5 * rep.mean_g));
                Ok::<_, gis_core::Error>([action, stab, eig, f, var])
            })();
            match res {
                Ok(v) => {
                    for i in 0..5 {
                        worst[i] = worst[i].max(v[i]);
                    }
                }
                Err(e) => errors.push(format!("υ={u} |z|={zr}: {e}")),
            }
        }
    }
    let limits = [1e-10, 1e-12, 1e-10, 1e-10, 1e-9];
    let pass = errors.is_empty() && worst.iter().zip(&limits).all(|(w, l)| w < l);
    outcome(
        pass,
        format!(
            "action {:.1e}, stability {:.1e}, a⁻ residual {:.1e}, |⟨F⟩| {:.1e}, var vs ½⟨G⟩ {:.1e} {}",
            worst[0],
            worst[1],
            worst[2],
            worst[3],
            worst[4],
            errors.join("; ")
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut w = [0.0f64; 2];
    let mut bound_ok = true;
    for &u in &[2.0, 3.0, 6.0] {
        let s = pt(u, N_MAX);
        for &r in &[0.1f64, 1.0, 5.0] {
            // N = 1/√(Σ r²ⁿ/(Γ(n+1)Γ(n+υ+1)))
            let terms: Vec<f64> = (0..200)
                .map(|n| {
                    let nf = n as f64;
                    (2.0 * nf * r.ln() - log_gamma(nf + 1.0).unwrap() - log_gamma(nf + u + 1.0).unwrap()).exp()
                })
                .collect();
            let direct = 1.0 / terms.iter().rev().sum::<f64>().sqrt();
            w[0] = w[0].max(rel(pt_coherent_norm(r, u).unwrap(), direct));
            let psi = gk_coherent(&s, c(r, 0.0), 0.0, Truncation::Auto).unwrap();
            w[0] = w[0].max(rel(pt_c0(r, u).unwrap(), psi.coefficients[0].norm()));
            let g = uncertainty_report(&psi, &s).unwrap().mean_g;
            let closed = pt_mean_g(r, u).unwrap();
            w[1] = w[1].max(rel(closed, g));
            bound_ok &= closed >= 1.0 + u && g >= 1.0 + u;
        }
        for k in 0..=100 {
            bound_ok &= pt_mean_g(0.1 * k as f64, u).unwrap() >= 1.0 + u;
        }
    }
    outcome(
        w[0] < 1e-12 && w[1] < 1e-10 && bound_ok,
        format!(
            "norm and c₀ vs direct sums {:.1e}, ⟨G⟩ closed vs direct {:.1e}, ⟨G⟩ ≥ 1+υ: {bound_ok}",
            w[0], w[1]
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let h = Spectrum::harmonic(20).unwrap();
    let harm = moment_residuals(&MeasureSpec::harmonic(), &h, 15)
        .unwrap()
        .iter()
        .map(|r| r.rel_residual)
        .fold(0.0, f64::max);
    let upsilon = 3.0;
    let s = pt(upsilon, 20);
    let printed = moment_residuals(&MeasureSpec::pt_printed(upsilon).unwrap(), &s, 10).unwrap();
    let printed_max = printed.iter().map(|r| r.rel_residual).fold(0.0, f64::max);
    let corrected = moment_residuals(&MeasureSpec::pt_corrected(upsilon).unwrap(), &s, 10)
        .unwrap()
        .iter()
        .map(|r| r.rel_residual)
        .fold(0.0, f64::max);
    let fit = fit_k_order(&s, upsilon, 10).unwrap();
    let oracle = (pt_measure_density(1.0, 2.0).unwrap() - 0.061_344_924_558_185_799_544).abs() / 0.0613;
    let secs = start.elapsed().as_secs_f64();
    let printed_pass = printed_max < 1e-6;
    let finding = !printed_pass && (fit.fitted_order - upsilon).abs() < 1e-4 && corrected < 1e-6;
    outcome(
        harm < 1e-9 && (printed_pass || finding) && oracle < 1e-12 && secs < 60.0,
        format!(
            "harmonic max residual {harm:.1e}; printed K_(υ/2) density max residual {printed_max:.2e} (n ≤ 10) -> {}; \
             fitted K order {:.6} for υ = {upsilon}, order-υ density max residual {corrected:.1e}; {secs:.1}s",
            if printed_pass { "passes" } else { "discrepancy finding" },
            fit.fitted_order
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let upsilons = [2.0, 3.0, 4.5, 6.0];
    let mut taylor = 0.0f64;
    let mut branch = 0.0f64;
    let mut overlap = 0.0f64;
    let mut errors = Vec::new();
    for k in 0..20 {
        let u = upsilons[k % upsilons.len()];
        let s = if u == 4.5 {
            Spectrum::poschl_teller(2.0, 2.5, 200).unwrap()
        } else {
            pt(u, 200)
        };
        let lambda = draw_lambda(&mut r);
        let zp = draw_z(&mut r, 2.0);
        let res = (|| {
            let f = pt_gis_analytic(zp, lambda, u)?;
            let p = GisParams::new(lambda, zp, 0.0);
            let t = raw_coefficients(&s, &p, 41, Route::Recurrence)?;
            // Tₙ = tₙ/√f(n)
            let mut worst = 0.0f64;
            for n in 0..=40 {
                let alg = value(&t, n) * (-0.5 * s.factorial_moment(n)?.log_value).exp();
                worst = worst.max(crel(f.series[n], alg));
            }
            let g = pt_gis_analytic_with(zp, lambda, u, Branch::Negated, 41)?;
            let b = (0..=40).map(|n| crel(g.series[n], f.series[n])).fold(0.0, f64::max);
            // overlap with a coherent state: closed form vs inner-product sum
            let psi = gis_recurrence(&s, &p, Truncation::Auto)?;
            let set = gis_core::gis::coefficients(&s, &p, Truncation::Auto, Route::Recurrence)?;
            let z = c(0.6, -0.4);
            let series = coherent_overlap_series(&psi, &s, z)? / set.c0;
            let closed = pt_overlap(zp, lambda, u, z)?;
            Ok::<_, gis_core::Error>((worst, b, crel(series, closed)))
        })();
        match res {
            Ok((a, b, o)) => {
                taylor = taylor.max(a);
                branch = branch.max(b);
                overlap = overlap.max(o);
            }
            Err(e) => errors.push(format!("λ={lambda} z′={zp}: {e}")),
        }
    }
    // λ = 1: overlap with the coherent state is ₀F₁(υ+1, z z̄′)
    let mut zero_f1 = 0.0f64;
    for &u in &[2.0, 3.0, 4.5] {
        let s = if u == 4.5 {
            Spectrum::poschl_teller(2.0, 2.5, N_MAX).unwrap()
        } else {
            pt(u, N_MAX)
        };
        let zp = c(1.1, 0.5);
        let z = c(-0.3, 0.8);
        let set = gis_core::gis::coefficients(
            &s,
            &GisParams::new(c(1.0, 0.0), zp, 0.0),
            Truncation::Auto,
            Route::Recurrence,
        )
        .unwrap();
        let psi = set.to_state(0.0);
        let series = coherent_overlap_series(&psi, &s, z).unwrap() / set.c0;
        let f01 = hyp_0f1(c(u + 1.0, 0.0), z * zp.conj()).unwrap().value;
        zero_f1 = zero_f1
            .max(crel(series, f01))
            .max(crel(pt_overlap(zp, c(1.0, 0.0), u, z).unwrap(), f01));
    }
    // ODE residual at 20 points in |z| ≤ 2
    let mut ode = 0.0f64;
    let (zp, lambda, u) = (c(1.2, 0.3), c(2.0, -0.5), 3.0);
    let f = pt_gis_analytic(zp, lambda, u).unwrap();
    for k in 0..20 {
        let z = Complex64::from_polar(0.1 * (k + 1) as f64, 0.9 * k as f64);
        ode = ode.max(ode_residual(&f, zp, lambda, u, z));
    }
    outcome(
        errors.is_empty() && taylor < 1e-8 && zero_f1 < 1e-10 && ode < 1e-8 && branch < 1e-8 && overlap < 1e-8,
        format!(
            "Taylor vs algebraic {taylor:.1e} (20 draws, n ≤ 40); ±c branches {branch:.1e}; overlap closed vs sum {overlap:.1e}; \
             λ=1 ₀F₁ {zero_f1:.1e}; ODE residual {ode:.1e} {}",
            errors.join("; ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let s = pt(3.0, N_MAX);
    let rejected = build(&s, &GisParams::new(c(-1.0, 0.0), c(1.0, 0.0), 0.0), Truncation::Auto)
        .map(|_| "accepted".to_string())
        .unwrap_or_else(|e| e.code().to_string());
    let lambda = c(2.5, 0.7);
    let q = (lambda - 1.0) / (lambda + 1.0);
    let even = even_gis(&s, lambda, 0.0, Truncation::Auto).unwrap();
    let e = s.energies();
    let odd_zero = even.coefficients.iter().skip(1).step_by(2).all(|x| *x == c(0.0, 0.0));
    let mut ratio = 0.0f64;
    for k in 0..20 {
        let got = even.coefficients[2 * k + 2] / even.coefficients[2 * k];
        let want = q * (e[2 * k + 1] / e[2 * k + 2]).sqrt();
        ratio = ratio.max(crel(got, want));
    }
    let mut theta_worst = 0.0f64;
    for &th in &[
        std::f64::consts::FRAC_PI_6,
        -std::f64::consts::FRAC_PI_6,
        std::f64::consts::FRAC_PI_3,
        -std::f64::consts::FRAC_PI_3,
    ] {
        let p = GisParams::new(Complex64::from_polar(1.0, th), c(0.9, -0.4), 0.2);
        let psi = build(&s, &p, Truncation::Auto).unwrap();
        let r = uncertainty_report(&psi, &s).unwrap();
        let var = r.mean_g / (2.0 * th.cos().abs());
        theta_worst = theta_worst
            .max(rel(r.var_w, var))
            .max(rel(r.var_p, var))
            .max(rel(r.mean_f, th.tan() * r.mean_g));
    }
    outcome(
        rejected == "NON_NORMALIZABLE_LAMBDA_MINUS_ONE" && odd_zero && ratio < 1e-12 && theta_worst < 1e-8,
        format!(
            "λ=−1 → {rejected}; odd coefficients zero: {odd_zero}; even ratios {ratio:.1e}; e^(iθ) family {theta_worst:.1e}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let s = Spectrum::harmonic(N_MAX).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let lambda = draw_lambda(&mut r);
        let z = draw_z(&mut r, 2.0);
        let a = harmonic_squeezed_check(z, lambda, 61).unwrap();
        let b = gis_recurrence(&s, &GisParams::new(lambda, z, 0.0), Truncation::Auto).unwrap();
        let scale = b.coefficients[..61].iter().map(|x| x.norm()).fold(0.0, f64::max);
        // both normalized over different ranges: compare cₙ/c₀
        for n in 0..=60 {
            let x = a.coefficients[n] / a.coefficients[0];
            let y = b.coefficients[n] / b.coefficients[0];
            worst = worst.max((x - y).norm() / (y.norm().max(1e-3 * scale / b.coefficients[0].norm())));
        }
    }
    outcome(
        worst < 1e-9,
        format!("10 draws n ≤ 60, max relative difference {worst:.1e}"),
    )
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0f64;
    for row in table("log_gamma.txt") {
        let got = log_gamma(row[0]).unwrap();
        worst = worst.max(if row[1].abs() < 1.0 {
            (got - row[1]).abs()
        } else {
            rel(got, row[1])
        });
    }
    for row in table("bessel_i.txt") {
        worst = worst.max(rel(bessel_i(row[0], row[1]).unwrap(), row[2]));
    }
    for row in table("bessel_k.txt") {
        worst = worst.max(rel(bessel_k(row[0], row[1]).unwrap(), row[2]));
    }
    for row in table("hyp1f1.txt") {
        let got = hyp_1f1(c(row[0], row[1]), c(row[2], 0.0), c(row[3], row[4]))
            .unwrap()
            .value;
        worst = worst.max(crel(got, c(row[5], row[6])));
    }
    for row in table("hyp0f1.txt") {
        let got = hyp_0f1(c(row[0], 0.0), c(row[1], row[2])).unwrap().value;
        worst = worst.max(crel(got, c(row[3], row[4])));
    }
    for row in table("jacobi.txt") {
        let got = jacobi_p(row[0] as usize, row[1], row[2], row[3]).unwrap();
        worst = worst.max((got - row[4]).abs() / row[4].abs().max(1.0));
    }
    // I_ν K_{ν+1} + I_{ν+1} K_ν = 1/x
    let mut wr = 0.0f64;
    for &nu in &[0.0, 0.5, 1.5, 3.0, 4.5, 10.0] {
        for &x in &[0.05, 0.7, 2.0, 9.0, 30.0] {
            let w = bessel_i(nu, x).unwrap() * bessel_k(nu + 1.0, x).unwrap()
                + bessel_i(nu + 1.0, x).unwrap() * bessel_k(nu, x).unwrap();
            wr = wr.max(rel(w, 1.0 / x));
        }
    }
    // (b − a)M(a−1) + (2a − b + x)M(a) − aM(a+1) = 0
    let mut cr = 0.0f64;
    for &(a, b, x) in &[
        (c(0.7, 0.2), 2.5, c(1.3, -0.4)),
        (c(3.0, -1.0), 1.5, c(-6.0, 2.0)),
        (c(-0.4, 0.0), 4.0, c(12.0, 0.0)),
    ] {
        let bc = c(b, 0.0);
        let m = |a| hyp_1f1(a, bc, x).unwrap().value;
        let (t1, t2, t3) = ((bc - a) * m(a - 1.0), (2.0 * a - bc + x) * m(a), a * m(a + 1.0));
        cr = cr.max((t1 + t2 - t3).norm() / (t1.norm() + t2.norm() + t3.norm()));
    }
    outcome(
        worst < 1e-12 && wr < 1e-10 && cr < 1e-10,
        format!("fixtures max relative error {worst:.1e}; Wronskian {wr:.1e}; contiguous relation {cr:.1e}"),
    )
}

fn criterion_10() -> Outcome {
    let mut nodes_ok = true;
    let params = [
        PtParams::new(1.5, 1.5, 1.0).unwrap(),
        PtParams::new(2.0, 3.5, 0.7).unwrap(),
        PtParams::infinite_well(1.0).unwrap(),
    ];
    for p in &params {
        for n in 0..=10 {
            nodes_ok &= count_nodes(n, p, 4000).unwrap() == n;
        }
    }
    let mut corrected = 0.0f64;
    let mut printed_dev = 0.0f64;
    let mut audit_match = 0.0f64;
    for p in &params {
        let m = overlap_matrix(p, 6, WavefunctionNorm::Corrected, 400).unwrap();
        for i in 0..=6 {
            for j in 0..=6 {
                let want = if i == j { 1.0 } else { 0.0 };
                corrected = corrected.max((m[i][j] - want).abs());
            }
        }
        for a in printed_norm_audit(p, 6, 400).unwrap() {
            printed_dev = printed_dev.max((a.quadrature - 1.0).abs());
            audit_match = audit_match.max(rel(a.quadrature, a.predicted));
        }
    }
    let printed_pass = printed_dev < 1e-8;
    outcome(
        nodes_ok && corrected < 1e-8 && (printed_pass || audit_match < 1e-8),
        format!(
            "node counts = n for n ≤ 10: {nodes_ok}; printed normalization max |∫ψ²−1| {printed_dev:.2e} -> {} \
             (∫ψₙ² = Γ(2n+υ)/(2n+υ) to {audit_match:.1e}); with (2n+υ) in place of Γ(2n+υ): {corrected:.1e}",
            if printed_pass { "passes" } else { "discrepancy finding" }
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("RS saturation", criterion_1),
        ("route equivalence", criterion_2),
        ("Gazeau-Klauder suite", criterion_3),
        ("closed-form cross-checks", criterion_4),
        ("resolution of unity", criterion_5),
        ("Bargmann equivalence", criterion_6),
        ("case boundaries", criterion_7),
        ("harmonic reduction", criterion_8),
        ("special functions", criterion_9),
        ("wavefunction audit", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
