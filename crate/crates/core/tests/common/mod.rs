#![allow(dead_code)]

use gis_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// λ with Re λ ∈ [0.1, 3], Im λ ∈ [−1.5, 1.5]
pub fn draw_lambda(r: &mut ChaCha8Rng) -> Complex64 {
    c(r.gen_range(0.1..3.0), r.gen_range(-1.5..1.5))
}

pub fn draw_z(r: &mut ChaCha8Rng, max: f64) -> Complex64 {
    c(r.gen_range(-max..max), r.gen_range(-max..max))
}

pub fn table(name: &str) -> Vec<Vec<f64>> {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect()
}

pub fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

pub fn crel(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(f64::MIN_POSITIVE)
}
