//! Adaptive Gauss–Kronrod (7/15) integration and Gauss–Legendre rules.

use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// ∫ₐᵇ f by global adaptive bisection of the panel with the largest error
/// until `error ≤ max(abs_tol, rel_tol·|value|)`.
pub fn integrate(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(crate::invalid(
            "interval",
            format!("[{a}, {b}] must be finite and ordered"),
        ));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
    });
    let (mut value, mut error) = (v, e);
    let mut evaluations = 15;
    loop {
        if !value.is_finite() {
            return Err(Error::Quadrature {
                a,
                b,
                error: f64::INFINITY,
            });
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            break;
        }
        if heap.len() >= max_panels {
            return Err(Error::Quadrature { a, b, error });
        }
        let p = heap.pop().unwrap();
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // panel cannot be split further in floating point
            return Err(Error::Quadrature { a, b, error });
        }
        let (v1, e1) = gk15(f, p.a, m);
        let (v2, e2) = gk15(f, m, p.b);
        evaluations += 30;
        value += v1 + v2 - p.value;
        error += e1 + e2 - p.error;
        heap.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed the drift of the running updates
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum::<f64>()
        + 16.0 * f64::EPSILON * heap.iter().map(|p| p.value.abs()).sum::<f64>();
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

/// ∫₀^∞ f for an integrand with a decaying tail: panels [0, w], [w, 2w],
/// [2w, 4w], … are added until `patience` consecutive panels each contribute
/// less than 1e-16 of the running total.
pub fn integrate_half_line(f: &dyn Fn(f64) -> f64, first_width: f64, rel_tol: f64) -> Result<QuadResult> {
    const PATIENCE: usize = 3;
    const MAX_PANELS: usize = 200;
    let mut total = QuadResult {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    let (mut lo, mut hi) = (0.0, first_width);
    let mut quiet = 0;
    for _ in 0..MAX_PANELS {
        let r = integrate(f, lo, hi, 0.0, rel_tol, 2000).or_else(|_| {
            // a panel that is negligible relative to the total need not
            // reach the relative tolerance on its own
            integrate(f, lo, hi, rel_tol * total.value.abs(), rel_tol, 2000)
        })?;
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        if r.value.abs() <= 1e-16 * total.value.abs() {
            quiet += 1;
            if quiet >= PATIENCE {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::Quadrature {
        a: 0.0,
        b: hi,
        error: total.error,
    })
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on Pₙ
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        dp = if d.is_finite() { d } else { dp };
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (t * p1 - p0) / (t * t - 1.0))
}
