use super::SpecfunError;

/// Jacobi polynomial P_n^{(a,b)}(x) by the standard three-term recurrence.
pub fn jacobi_p(n: usize, a: f64, b: f64, x: f64) -> Result<f64, SpecfunError> {
    if !(a > -1.0) {
        return Err(SpecfunError::Domain {
            function: "jacobi_p",
            value: a,
            domain: "a > -1",
        });
    }
    if !(b > -1.0) {
        return Err(SpecfunError::Domain {
            function: "jacobi_p",
            value: b,
            domain: "b > -1",
        });
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(SpecfunError::Domain {
            function: "jacobi_p",
            value: x,
            domain: "-1 <= x <= 1",
        });
    }
    Ok(jacobi_unchecked(n, a, b, x))
}

pub(crate) fn jacobi_unchecked(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut p_prev = 1.0;
    if n == 0 {
        return p_prev;
    }
    let mut p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    let ab = a + b;
    let a2b2 = a * a - b * b;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        let c0 = 2.0 * k * (k + ab) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a2b2);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c1 * p - c2 * p_prev) / c0;
        p_prev = p;
        p = next;
    }
    p
}
