//! Stationary moments of linear Fokker-Planck equations with signed diffusion.
//!
//! For drift `A` and diffusion `D` the moments `M_mn = <x^m y^n>` obey
//!
//! ```text
//! 0 = (m A00 + n A11) M_mn + m A01 M_{m-1,n+1} + n A10 M_{m+1,n-1}
//!     + m(m-1)/2 D00 M_{m-2,n} + m n D01 M_{m-1,n-1} + n(n-1)/2 D11 M_{m,n-2}
//! ```
//!
//! which couples each total order only to the order two below, so the table
//! is filled one small linear system at a time. Nothing requires `D` to be
//! positive: negative entries give the moments of a formal distribution.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Condition number (after row equilibration) above which an order is singular.
const MAX_CONDITION: f64 = 1e13;
/// Relative residual accepted for each stored moment equation.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Moments `M_mn` of a two-variable distribution for `m + n <= max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    max_order: usize,
    values: Vec<f64>,
}

fn index(m: usize, n: usize) -> usize {
    let t = m + n;
    t * (t + 1) / 2 + n
}

impl MomentTable {
    fn zeros(max_order: usize) -> Self {
        MomentTable {
            max_order,
            values: vec![0.0; index(0, max_order) + 1],
        }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `M_mn`, or `None` beyond the stored order.
    pub fn get(&self, m: usize, n: usize) -> Option<f64> {
        (m + n <= self.max_order).then(|| self.values[index(m, n)])
    }

    fn set(&mut self, m: usize, n: usize, v: f64) {
        self.values[index(m, n)] = v;
    }

    /// All stored `(m, n, M_mn)` in order of increasing total order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.max_order)
            .flat_map(|t| (0..=t).map(move |n| (t - n, n)))
            .map(|(m, n)| (m, n, self.values[index(m, n)]))
    }

    /// Largest relative residual of the moment equations over the table.
    pub fn hierarchy_residual(&self, drift: &DMatrix<f64>, diffusion: &DMatrix<f64>) -> f64 {
        let mut worst: f64 = 0.0;
        for t in 1..=self.max_order {
            for n in 0..=t {
                let m = t - n;
                let terms = equation_terms(self, drift, diffusion, m, n);
                let sum: f64 = terms.iter().sum();
                let scale: f64 = terms.iter().map(|x| x.abs()).sum();
                if scale > 0.0 {
                    worst = worst.max(sum.abs() / scale);
                }
            }
        }
        worst
    }
}

fn get_or_zero(t: &MomentTable, m: isize, n: isize) -> f64 {
    if m < 0 || n < 0 {
        0.0
    } else {
        t.get(m as usize, n as usize).unwrap_or(0.0)
    }
}

fn equation_terms(
    t: &MomentTable,
    a: &DMatrix<f64>,
    d: &DMatrix<f64>,
    m: usize,
    n: usize,
) -> [f64; 6] {
    let (mf, nf) = (m as f64, n as f64);
    let (mi, ni) = (m as isize, n as isize);
    [
        (mf * a[(0, 0)] + nf * a[(1, 1)]) * get_or_zero(t, mi, ni),
        mf * a[(0, 1)] * get_or_zero(t, mi - 1, ni + 1),
        nf * a[(1, 0)] * get_or_zero(t, mi + 1, ni - 1),
        0.5 * mf * (mf - 1.0) * d[(0, 0)] * get_or_zero(t, mi - 2, ni),
        mf * nf * d[(0, 1)] * get_or_zero(t, mi - 1, ni - 1),
        0.5 * nf * (nf - 1.0) * d[(1, 1)] * get_or_zero(t, mi, ni - 2),
    ]
}

/// Solves the stationary moment hierarchy of a two-variable linear system.
pub fn stationary_moments(
    drift: &DMatrix<f64>,
    diffusion: &DMatrix<f64>,
    max_order: usize,
) -> Result<MomentTable> {
    assert_eq!(drift.shape(), (2, 2));
    assert_eq!(diffusion.shape(), (2, 2));
    let mut table = MomentTable::zeros(max_order);
    table.set(0, 0, 1.0);
    for t in 1..=max_order {
        let size = t + 1;
        let mut lhs = DMatrix::<f64>::zeros(size, size);
        let mut rhs = DVector::<f64>::zeros(size);
        for j in 0..size {
            let (m, n) = (t - j, j);
            let (mf, nf) = (m as f64, n as f64);
            lhs[(j, j)] = mf * drift[(0, 0)] + nf * drift[(1, 1)];
            if m >= 1 {
                lhs[(j, j + 1)] = mf * drift[(0, 1)];
            }
            if n >= 1 {
                lhs[(j, j - 1)] = nf * drift[(1, 0)];
            }
            let terms = equation_terms(&table, drift, diffusion, m, n);
            rhs[j] = -(terms[3] + terms[4] + terms[5]);
        }
        for j in 0..size {
            let s = lhs.row(j).iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            if s > 0.0 {
                lhs.row_mut(j).scale_mut(1.0 / s);
                rhs[j] /= s;
            }
        }
        let sv = lhs.clone().singular_values();
        if !(sv.min() > 0.0 && sv.max() / sv.min() <= MAX_CONDITION) {
            return Err(Error::RecurrenceSingular { order: t });
        }
        let x = lhs
            .full_piv_lu()
            .solve(&rhs)
            .ok_or(Error::RecurrenceSingular { order: t })?;
        for j in 0..size {
            let v = if t % 2 == 1 { 0.0 } else { x[j] };
            table.set(t - j, j, v);
        }
    }
    let residual = table.hierarchy_residual(drift, diffusion);
    if !(residual <= RESIDUAL_TOLERANCE) {
        return Err(Error::RecurrenceSingular { order: max_order });
    }
    Ok(table)
}

/// Moments `<x^k>`, `k = 0..=max_order`, of a one-variable linear system
/// `dx = -rate x dt + noise` with signed diffusion `diffusion`.
pub fn stationary_moments_1d(rate: f64, diffusion: f64, max_order: usize) -> Result<Vec<f64>> {
    if !(rate > 0.0) {
        return Err(Error::RecurrenceSingular { order: 1 });
    }
    let mut m = vec![0.0; max_order + 1];
    m[0] = 1.0;
    for k in 2..=max_order {
        if k % 2 == 0 {
            let kf = k as f64;
            m[k] = 0.5 * kf * (kf - 1.0) * diffusion * m[k - 2] / (kf * rate);
        }
    }
    Ok(m)
}

/// Moments of the formal series `sum_k (variance/2)^k / k! d^{2k}/dx^{2k} delta(x)`.
///
/// Pairing `x^{2k}` with the series picks the single term
/// `(variance/2)^k (2k)!/k!`, so any sign of `variance` is admissible.
pub fn formal_series_moments(variance: f64, max_order: usize) -> Vec<f64> {
    let mut m = vec![0.0; max_order + 1];
    let mut coeff = 1.0; // (variance/2)^k / k!
    let mut factorial_2k = 1.0; // (2k)!
    for k in 0..=max_order / 2 {
        if k > 0 {
            coeff *= 0.5 * variance / k as f64;
            factorial_2k *= (2 * k - 1) as f64 * (2 * k) as f64;
        }
        m[2 * k] = coeff * factorial_2k;
    }
    m
}

/// `(2k - 1)!!` with `(-1)!! = 1`.
pub fn double_factorial_odd(k: usize) -> f64 {
    (1..=k).map(|j| (2 * j - 1) as f64).product()
}
