//! Modified Bessel functions I_ν(x) and K_ν(x) of real order ν ≥ 0.
//!
//! The order is split as ν = μ + m with |μ| ≤ 1/2.  K_μ and K_{μ+1} come from
//! Temme's series (x < 2) or Steed's continued fraction CF2 (x ≥ 2); both are
//! regular at integer order.  K is recurred upward to ν, and I_ν follows from
//! the ratio I'_ν/I_ν (continued fraction CF1) and the Wronskian
//! I_ν K'_ν − I'_ν K_ν = −1/x.  Everything is carried in scaled form
//! (e^{−x} I, e^{x} K) so large arguments do not overflow.

use super::{SpecfunError, EPS};
use std::f64::consts::PI;

const MAX_ITER: usize = 100_000;
const TEMME_LIMIT: f64 = 2.0;

/// Taylor coefficients of 1/Γ(1 + x) around x = 0.
const RECIP_GAMMA_1P: [f64; 31] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_9,
    -0.042_002_635_034_095_24,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_34,
    -0.009_621_971_527_876_974,
    0.007_218_943_246_663_1,
    -0.001_165_167_591_859_065,
    -0.000_215_241_674_114_951,
    0.000_128_050_282_388_116_2,
    -2.013_485_478_078_824e-5,
    -1.250_493_482_142_671e-6,
    1.133_027_231_981_696e-6,
    -2.056_338_416_977_607e-7,
    6.116_095_104_481_416e-9,
    5.002_007_644_469_223e-9,
    -1.181_274_570_487_02e-9,
    1.043_426_711_691_101e-10,
    7.782_263_439_905_071e-12,
    -3.696_805_618_642_206e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_507e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_261e-15,
    -1.181_259_301_697_459e-16,
    1.186_692_254_751_6e-18,
    1.412_380_655_318_032e-18,
    -2.298_745_684_435_37e-19,
    1.714_406_321_927_337e-20,
    1.337_351_730_493_693e-22,
];

/// Scaled values at one (ν, x): `i` = e^{−x} I_ν(x), `k` = e^{x} K_ν(x), and
/// the matching scaled derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselIk {
    pub i: f64,
    pub k: f64,
    pub di: f64,
    pub dk: f64,
}

/// (1/Γ(1+μ), 1/Γ(1−μ), Γ₁(μ), Γ₂(μ)) in Temme's notation.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mut plus = 0.0;
    let mut minus = 0.0;
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let mut power = 1.0;
    for (k, &b) in RECIP_GAMMA_1P.iter().enumerate() {
        plus += b * power;
        minus += if k % 2 == 0 { b * power } else { -b * power };
        if k % 2 == 0 {
            gam2 += b * power;
        }
        power *= mu;
    }
    // Γ₁ = (1/Γ(1−μ) − 1/Γ(1+μ)) / 2μ = −Σ_{k odd} b_k μ^{k−1}
    let mut p = 1.0;
    for k in (1..RECIP_GAMMA_1P.len()).step_by(2) {
        gam1 -= RECIP_GAMMA_1P[k] * p;
        p *= mu * mu;
    }
    (plus, minus, gam1, gam2)
}

/// (K_μ, K_{μ+1}) unscaled, by Temme's series; valid for x < 2, |μ| ≤ 1/2.
fn temme_series(mu: f64, x: f64) -> (f64, f64) {
    let half_x = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -half_x.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gampl, gammi, gam1, gam2) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let e = e.exp();
    let mut p = 0.5 * e / gampl;
    let mut q = 0.5 / (e * gammi);
    let mut c = 1.0;
    let d = half_x * half_x;
    let mut sum1 = p;
    let mu2 = mu * mu;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= d / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

/// (e^x K_μ, e^x K_{μ+1}) by Steed's method on CF2; x ≥ 2, |μ| ≤ 1/2.
fn steed_cf2(mu: f64, x: f64) -> Result<(f64, f64), SpecfunError> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecfunError::NonConvergent {
            function: "bessel_k (CF2)",
            terms: MAX_ITER,
            last_ratio: f64::NAN,
        });
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * x)).sqrt() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    Ok((k_mu, k_mu1))
}

/// I'_ν/I_ν by the continued fraction CF1 (modified Lentz).
fn cf1_ratio(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    const TINY: f64 = 1e-300;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let mut h = (nu * xi).max(TINY);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(SpecfunError::NonConvergent {
        function: "bessel_i (CF1)",
        terms: MAX_ITER,
        last_ratio: h,
    })
}

/// Scaled I_ν, K_ν and derivatives for ν ≥ 0, x > 0.
pub fn bessel_ik_scaled(nu: f64, x: f64) -> Result<BesselIk, SpecfunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain {
            function: "bessel_ik",
            value: x,
            domain: "x > 0",
        });
    }
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(SpecfunError::Domain {
            function: "bessel_ik",
            value: nu,
            domain: "nu >= 0",
        });
    }
    let nl = (nu + 0.5).floor() as usize;
    let mu = nu - nl as f64;
    let xi = 1.0 / x;

    // Downward recurrence of an unnormalized I from ν to μ, seeded by CF1.
    let f_nu = cf1_ratio(nu, x)?;
    let mut ril = 1e-280;
    let mut ripl = f_nu * ril;
    let ril1 = ril;
    let rip1 = ripl;
    let mut scale = 1.0;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > 1e250 {
            ril *= 1e-250;
            ripl *= 1e-250;
            scale *= 1e-250;
        }
    }
    let f_mu = ripl / ril;

    let (k_mu, k_mu1) = if x < TEMME_LIMIT {
        let (k0, k1) = temme_series(mu, x);
        let ex = x.exp();
        (k0 * ex, k1 * ex)
    } else {
        steed_cf2(mu, x)?
    };
    // scaled K'_μ = e^x K'_μ
    let dk_mu = mu * xi * k_mu - k_mu1;
    // Wronskian: e^{-x} I_μ = (1/x) / (f_μ e^x K_μ − e^x K'_μ)
    let i_mu = xi / (f_mu * k_mu - dk_mu);
    // rescale the recurrence back to I_ν (scale tracks the renormalisation)
    let i_nu = i_mu * ril1 * scale / ril;
    let di_nu = i_mu * rip1 * scale / ril;

    let mut km = k_mu;
    let mut k1 = k_mu1;
    for i in 1..=nl {
        let next = (mu + i as f64) * 2.0 * xi * k1 + km;
        km = k1;
        k1 = next;
    }
    Ok(BesselIk {
        i: i_nu,
        k: km,
        di: di_nu,
        dk: nu * xi * km - k1,
    })
}

/// e^{−x} I_ν(x).
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    Ok(bessel_ik_scaled(nu, x)?.i)
}

/// e^{x} K_ν(x). Negative orders use K_{−ν} = K_ν.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    Ok(bessel_ik_scaled(nu.abs(), x)?.k)
}

/// Modified Bessel function of the first kind, I_ν(x), ν ≥ 0, x > 0.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    Ok(bessel_i_scaled(nu, x)? * x.exp())
}

/// Modified Bessel function of the second kind, K_ν(x), x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64, SpecfunError> {
    Ok(bessel_k_scaled(nu, x)? * (-x).exp())
}
