//! Δ(n, h): the sum over all h-element subsets of {1, …, n−1} with no two
//! adjacent indices of the product of the selected energies.
//!
//! Writing M(m, h) for the same sum over subsets of {1, …, m}, either m is
//! not selected or it is and m − 1 is excluded:
//!
//! ```text
//! M(m, h) = M(m−1, h) + e_m M(m−2, h−1),   Δ(n, h) = M(n−1, h)
//! ```
//!
//! which replaces the h-fold nested sum by an O(n·h) table.

use crate::exact::Dyadic;
use crate::spectrum::Spectrum;
use crate::{invalid, Error, Result};

fn check(s: &Spectrum, n: usize, h: usize) -> Result<()> {
    if h > n / 2 {
        return Err(invalid("h", format!("{h} exceeds ⌊n/2⌋ = {}", n / 2)));
    }
    if n > s.max_index() + 1 {
        return Err(Error::IndexOutOfRange {
            n: n - 1,
            max: s.max_index(),
        });
    }
    Ok(())
}

/// Floating-point Δ(n, h).  All terms are positive, so the table is accurate
/// to a few ulps per level.
pub fn delta_sum(s: &Spectrum, n: usize, h: usize) -> Result<f64> {
    check(s, n, h)?;
    if n == 0 {
        return Ok(1.0);
    }
    let e = s.energies();
    // rows m−2, m−1 of M(·, 0..=h)
    let mut older = vec![0.0; h + 1];
    let mut old = vec![0.0; h + 1];
    older[0] = 1.0; // M(−1, ·)
    old[0] = 1.0; // M(0, ·)
    for &em in &e[1..n] {
        let mut row = old.clone();
        for k in 1..=h {
            row[k] += em * older[k - 1];
        }
        older = std::mem::replace(&mut old, row);
    }
    Ok(old[h])
}

/// Exact table: `table[n][h] = Δ(n, h)` for n ≤ n_max, h ≤ ⌊n/2⌋, from the
/// exact dyadic values of the stored energies.
pub fn delta_table_exact(s: &Spectrum, n_max: usize) -> Result<Vec<Vec<Dyadic>>> {
    check(s, n_max, 0)?;
    let e: Vec<Dyadic> = s.energies()[..n_max.max(1)]
        .iter()
        .map(|&x| Dyadic::from_f64(x))
        .collect();
    let mut table: Vec<Vec<Dyadic>> = Vec::with_capacity(n_max + 1);
    table.push(vec![Dyadic::one()]); // Δ(0, 0)
    if n_max == 0 {
        return Ok(table);
    }
    table.push(vec![Dyadic::one()]); // Δ(1, 0) = M(0, 0)
    for n in 2..=n_max {
        // Δ(n, ·) = M(n−1, ·) = M(n−2, ·) + e_{n−1} M(n−3, ·−1)
        let m = n - 1;
        let prev = &table[n - 1];
        let prev2 = &table[n - 2];
        let mut row = Vec::with_capacity(n / 2 + 1);
        for k in 0..=n / 2 {
            let keep = prev.get(k).cloned().unwrap_or_else(Dyadic::zero);
            let add = if k == 0 {
                Dyadic::zero()
            } else {
                prev2.get(k - 1).map(|d| &e[m] * d).unwrap_or_else(Dyadic::zero)
            };
            row.push(&keep + &add);
        }
        table.push(row);
    }
    Ok(table)
}

/// Exact Δ(n, h).
pub fn delta_sum_exact(s: &Spectrum, n: usize, h: usize) -> Result<Dyadic> {
    check(s, n, h)?;
    Ok(delta_table_exact(s, n)?[n][h].clone())
}
