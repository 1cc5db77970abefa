mod common;

use common::{c, crel};
use gis_core::bargmann::{apply_lowering_analytic, bargmann_transform};
use gis_core::gis::{build, raw_coefficients, LogSeq};
use gis_core::operators::{apply_lowering, apply_raising, eigen_relations, evolve, uncertainty_report, FockState};
use gis_core::{Complex64, GisParams, Route, Spectrum, Truncation};
use proptest::prelude::*;

fn spectrum(kind: u8) -> Spectrum {
    match kind % 4 {
        0 => Spectrum::harmonic(4095).unwrap(),
        1 => Spectrum::infinite_well(4095).unwrap(),
        2 => Spectrum::poschl_teller(1.5, 1.5, 4095).unwrap(),
        _ => Spectrum::poschl_teller(1.2, 3.7, 4095).unwrap(),
    }
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b))
}

fn state(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex(), len)
}

fn lambda() -> impl Strategy<Value = Complex64> {
    (0.1..3.0f64, -1.5..1.5f64).prop_map(|(a, b)| c(a, b))
}

fn z() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
}

fn value(seq: &LogSeq, n: usize) -> Complex64 {
    Complex64::from_polar(seq.log_abs[n].exp(), seq.arg[n])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ladder_adjointness(kind in 0u8..4, phi in state(12), psi in state(12), alpha in -2.0..2.0f64) {
        let s = spectrum(kind);
        let phi = FockState::new(phi, alpha);
        let psi = FockState::new(psi, alpha);
        let lhs = phi.inner(&apply_lowering(&psi, &s).unwrap());
        let rhs = apply_raising(&phi, &s).unwrap().inner(&psi);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn evolution_is_unitary_and_composes(kind in 0u8..4, psi in state(10), t1 in -3.0..3.0f64, t2 in -3.0..3.0f64) {
        let s = spectrum(kind);
        let psi = FockState::new(psi, 0.1);
        let a = evolve(&evolve(&psi, &s, t1).unwrap(), &s, t2).unwrap();
        let b = evolve(&psi, &s, t1 + t2).unwrap();
        prop_assert!((a.norm_sqr() - psi.norm_sqr()).abs() <= 1e-13 * psi.norm_sqr().max(1.0));
        prop_assert!((a.alpha - b.alpha).abs() < 1e-14);
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn routes_agree(kind in 0u8..4, l in lambda(), zz in z()) {
        let s = spectrum(kind);
        let p = GisParams::new(l, zz, 0.0);
        let rec = raw_coefficients(&s, &p, 30, Route::Recurrence).unwrap();
        let cf = raw_coefficients(&s, &p, 30, Route::ContinuedFraction).unwrap();
        let cl = raw_coefficients(&s, &p, 30, Route::ClosedForm).unwrap();
        for n in 0..30 {
            prop_assert!(crel(value(&rec, n), value(&cl, n)) < 1e-9, "recurrence n = {}", n);
            prop_assert!(crel(value(&cf, n), value(&cl, n)) < 1e-9, "continued fraction n = {}", n);
        }
    }

    #[test]
    fn transform_intertwines_lowering(kind in 0u8..4, psi in state(16), alpha in -1.0..1.0f64) {
        let s = spectrum(kind);
        let psi = FockState::new(psi, alpha).normalized();
        let a = bargmann_transform(&apply_lowering(&psi, &s).unwrap(), &s).unwrap();
        let b = apply_lowering_analytic(&bargmann_transform(&psi, &s).unwrap(), &s).unwrap();
        for (x, y) in a.series.iter().zip(&b.series) {
            prop_assert!((x - y).norm() <= 1e-11 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn built_states_saturate_and_are_normalized(kind in 0u8..4, l in lambda(), zz in z(), alpha in -1.0..1.0f64) {
        let s = spectrum(kind);
        let psi = build(&s, &GisParams::new(l, zz, alpha), Truncation::Auto).unwrap();
        prop_assert!(psi.is_normalized());
        let r = uncertainty_report(&psi, &s).unwrap();
        prop_assert!(r.normalized_defect().abs() < 1e-8);
        prop_assert!(eigen_relations(&r, l).max() < 1e-8, "{:?}", eigen_relations(&r, l));
        prop_assert!(r.mean_g > 0.0);
    }

    #[test]
    fn real_lambda_has_no_covariance(kind in 0u8..4, l in 0.1..3.0f64, zz in z()) {
        let s = spectrum(kind);
        let psi = build(&s, &GisParams::new(c(l, 0.0), zz, 0.0), Truncation::Auto).unwrap();
        let r = uncertainty_report(&psi, &s).unwrap();
        prop_assert!(r.mean_f.abs() < 1e-10 * r.mean_g);
        prop_assert!((r.var_w / r.var_p - l * l).abs() < 1e-9 * l * l);
    }
}

#[test]
fn negative_re_lambda_grows() {
    for kind in 0..4 {
        let s = spectrum(kind);
        let err = build(&s, &GisParams::new(c(-0.4, 0.3), c(0.5, 0.2), 0.0), Truncation::Auto).unwrap_err();
        assert_eq!(err.code(), "NON_NORMALIZABLE_GROWTH", "{err}");
    }
}

#[test]
fn imaginary_lambda_is_reported_or_has_zero_g() {
    // Re λ = 0: |q| = 1, so the even coefficients decay at best algebraically
    for kind in 0..4 {
        let s = spectrum(kind);
        match build(&s, &GisParams::new(c(0.0, 0.8), c(0.3, 0.0), 0.0), Truncation::Auto) {
            Ok(psi) => {
                let r = uncertainty_report(&psi, &s).unwrap();
                assert!(r.mean_g.abs() < 1e-8, "{r:?}");
            }
            Err(e) => assert!(e.is_numerical(), "{e}"),
        }
    }
}

#[test]
fn squeezing_along_real_lambda() {
    let s = spectrum(2);
    let mut last = f64::INFINITY;
    for &l in &[0.9, 0.6, 0.3, 0.1, 0.05] {
        let psi = build(&s, &GisParams::new(c(l, 0.0), c(0.7, 0.0), 0.0), Truncation::Auto).unwrap();
        let r = uncertainty_report(&psi, &s).unwrap();
        let ratio = r.var_w / r.var_p;
        assert!(ratio < last);
        last = ratio;
    }
    assert!(last < 3e-3);
}
