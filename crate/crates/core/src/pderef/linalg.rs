//! Jacobi-preconditioned BiCGSTAB for the (nonsymmetric) cut-cell operators.

use crate::error::{Error, Result};

/// Sparse row: diagonal plus off-diagonal `(column, coefficient)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Row {
    pub diag: f64,
    pub off: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SparseMatrix {
    pub rows: Vec<Row>,
}

impl SparseMatrix {
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, row) in self.rows.iter().enumerate() {
            let mut s = row.diag * x[i];
            for &(j, c) in &row.off {
                s += c * x[j];
            }
            y[i] = s;
        }
    }

    /// `alpha A + beta I`.
    pub fn shifted(&self, alpha: f64, beta: f64) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    diag: alpha * r.diag + beta,
                    off: r.off.iter().map(|&(j, c)| (j, alpha * c)).collect(),
                })
                .collect(),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
}

/// Solves `A x = b` starting from the contents of `x`, to relative residual
/// `rtol`. The recursively updated residual can drift from the true one in
/// long runs; the iteration is then restarted from the true residual.
pub(crate) fn bicgstab(
    a: &SparseMatrix,
    b: &[f64],
    x: &mut [f64],
    rtol: f64,
    max_iter: usize,
) -> Result<SolveStats> {
    const CYCLES: usize = 8;
    let budget = (max_iter / CYCLES).max(1);
    let mut spent = 0;
    let mut last = None;
    for _ in 0..CYCLES {
        match bicgstab_cycle(a, b, x, rtol, budget) {
            Ok(st) => {
                return Ok(SolveStats {
                    iterations: spent + st.iterations,
                    residual: st.residual,
                })
            }
            Err(e @ Error::NoConvergence(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
        spent += budget;
    }
    Err(last.expect("at least one cycle"))
}

fn bicgstab_cycle(
    a: &SparseMatrix,
    b: &[f64],
    x: &mut [f64],
    rtol: f64,
    max_iter: usize,
) -> Result<SolveStats> {
    let n = b.len();
    let inv_diag: Vec<f64> = a.rows.iter().map(|r| 1.0 / r.diag).collect();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(SolveStats {
            iterations: 0,
            residual: 0.0,
        });
    }
    let mut r = vec![0.0; n];
    a.apply(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut best = norm(&r) / bnorm;
    if best <= rtol {
        return Ok(SolveStats {
            iterations: 0,
            residual: best,
        });
    }
    let mut r0 = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut ph = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut sh = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut restarts = 0;
    for it in 1..=max_iter {
        let rho_new = dot(&r0, &r);
        if rho_new.abs() < 1e-300 || omega == 0.0 {
            // breakdown: restart from the current residual
            restarts += 1;
            if restarts > 20 {
                break;
            }
            a.apply(x, &mut r);
            for i in 0..n {
                r[i] = b[i] - r[i];
            }
            r0.copy_from_slice(&r);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            v.iter_mut().for_each(|e| *e = 0.0);
            p.iter_mut().for_each(|e| *e = 0.0);
            continue;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
            ph[i] = p[i] * inv_diag[i];
        }
        a.apply(&ph, &mut v);
        alpha = rho / dot(&r0, &v);
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) / bnorm <= rtol {
            for i in 0..n {
                x[i] += alpha * ph[i];
            }
            return finish(a, b, x, bnorm, it, rtol);
        }
        for i in 0..n {
            sh[i] = s[i] * inv_diag[i];
        }
        a.apply(&sh, &mut t);
        let tt = dot(&t, &t);
        omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
        for i in 0..n {
            x[i] += alpha * ph[i] + omega * sh[i];
            r[i] = s[i] - omega * t[i];
        }
        let res = norm(&r) / bnorm;
        best = best.min(res);
        if res <= rtol {
            return finish(a, b, x, bnorm, it, rtol);
        }
    }
    Err(Error::NoConvergence(format!(
        "BiCGSTAB stalled at relative residual {best:.3e} (target {rtol:.1e})"
    )))
}

/// Recomputes the true residual; accepts a mild loss against the recursive one.
fn finish(
    a: &SparseMatrix,
    b: &[f64],
    x: &[f64],
    bnorm: f64,
    iterations: usize,
    rtol: f64,
) -> Result<SolveStats> {
    let mut r = vec![0.0; b.len()];
    a.apply(x, &mut r);
    let res = r
        .iter()
        .zip(b)
        .map(|(ax, bi)| (bi - ax).powi(2))
        .sum::<f64>()
        .sqrt()
        / bnorm;
    if res > 10.0 * rtol {
        return Err(Error::NoConvergence(format!(
            "true residual {res:.3e} drifted from target {rtol:.1e}"
        )));
    }
    Ok(SolveStats {
        iterations,
        residual: res,
    })
}
