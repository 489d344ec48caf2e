//! Sampling of the inner parallel family `Omega_t`, `t in [0, r]`.
//!
//! Between two consecutive events (an edge or facet vanishing) the face
//! structure of `Omega_t` is fixed and every `W_i(Omega_t)` is a polynomial in
//! `t` of degree `n - i`. The sweep stores one polynomial per event interval:
//! exact for polygons and balls, fitted through `n + 1` Chebyshev nodes (hence
//! also exact up to rounding) for polytopes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{
    binomial, inner_parallel, inradius, quermass, unit_ball_volume, ConvexBody, Polygon, Polytope,
    QuermassVector,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSample {
    pub t: f64,
    pub quermass: QuermassVector,
    /// True when `t` is an event time (including the final collapse at `r`).
    pub event: bool,
}

/// `W_i(t) = sum_p coeffs[i][p] (t - start)^p` on `[start, end]`.
#[derive(Debug, Clone, PartialEq)]
struct Piece {
    start: f64,
    end: f64,
    coeffs: Vec<Vec<f64>>,
}

impl Piece {
    fn value(&self, i: usize, t: f64) -> f64 {
        let s = t - self.start;
        self.coeffs[i].iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    fn derivative(&self, i: usize, t: f64) -> f64 {
        let s = t - self.start;
        let c = &self.coeffs[i];
        (1..c.len())
            .rev()
            .fold(0.0, |acc, p| acc * s + p as f64 * c[p])
    }
}

#[derive(Debug, Clone)]
pub struct InnerParallelSweep {
    body: ConvexBody,
    dim: usize,
    inradius: f64,
    events: Vec<f64>,
    samples: Vec<SweepSample>,
    pieces: Vec<Piece>,
}

/// Samples `Omega_t` on a Chebyshev grid of `m` points over `[0, r]` with the
/// event times inserted.
pub fn sweep(body: &ConvexBody, m: usize) -> Result<InnerParallelSweep> {
    if m < 16 {
        return Err(Error::InvalidInput(format!(
            "sweep needs at least 16 samples, got {m}"
        )));
    }
    let (pieces, r) = match body {
        ConvexBody::Ball { dim, radius } => (ball_pieces(*dim, *radius), *radius),
        ConvexBody::Polygon(p) => polygon_pieces(p)?,
        ConvexBody::Polytope(p) => polytope_pieces(p, m)?,
    };
    let dim = body.dim();
    let events: Vec<f64> = pieces.iter().map(|p| p.end).collect();

    let mut grid: Vec<(f64, bool)> = (0..m)
        .map(|j| {
            (
                0.5 * r * (1.0 - (PI * j as f64 / (m - 1) as f64).cos()),
                false,
            )
        })
        .collect();
    grid.last_mut().expect("m >= 16").0 = r;
    for &e in &events {
        grid.push((e, true));
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    // merge coincident times, keeping the event flag
    let mut merged: Vec<(f64, bool)> = Vec::with_capacity(grid.len());
    for (t, ev) in grid {
        match merged.last_mut() {
            Some(last) if (t - last.0).abs() <= 1e-12 * r => last.1 |= ev,
            _ => merged.push((t, ev)),
        }
    }
    // refine: add midpoints on both sides of every interior event
    let mut refined = merged.clone();
    for j in 1..merged.len().saturating_sub(1) {
        if merged[j].1 {
            refined.push((0.5 * (merged[j - 1].0 + merged[j].0), false));
            refined.push((0.5 * (merged[j].0 + merged[j + 1].0), false));
        }
    }
    refined.sort_by(|a, b| a.0.total_cmp(&b.0));
    refined.dedup_by(|a, b| (a.0 - b.0).abs() <= 1e-12 * r);

    let mut sw = InnerParallelSweep {
        body: body.clone(),
        dim,
        inradius: r,
        events,
        samples: Vec::new(),
        pieces,
    };
    let samples = refined
        .iter()
        .map(|&(t, event)| {
            let qv = if t < r {
                inner_parallel(body, t)
                    .and_then(|b| quermass(&b))
                    .unwrap_or_else(|_| sw.interpolated(t))
            } else {
                sw.interpolated(t)
            };
            SweepSample {
                t,
                quermass: qv,
                event,
            }
        })
        .collect();
    sw.samples = samples;
    Ok(sw)
}

fn ball_pieces(dim: usize, radius: f64) -> Vec<Piece> {
    let om = unit_ball_volume(dim);
    // omega (R - s)^m = omega sum_j C(m, j) R^(m-j) (-s)^j
    let coeffs = (0..=dim)
        .map(|i| {
            let m = dim - i;
            (0..=m)
                .map(|j| {
                    om * binomial(m, j)
                        * radius.powi((m - j) as i32)
                        * if j % 2 == 0 { 1.0 } else { -1.0 }
                })
                .collect()
        })
        .collect();
    vec![Piece {
        start: 0.0,
        end: radius,
        coeffs,
    }]
}

fn polygon_pieces(p: &Polygon) -> Result<(Vec<Piece>, f64)> {
    let a0 = p.area();
    let mut pieces = Vec::new();
    let mut t0 = 0.0;
    let mut cur = p.clone();
    for _ in 0..=p.len() + 1 {
        let angles = cur.interior_angles();
        let lens = cur.edge_lengths();
        let n = cur.len();
        let cot: Vec<f64> = angles.iter().map(|t| 1.0 / (0.5 * t).tan()).collect();
        let dt = (0..n)
            .map(|i| lens[i] / (cot[i] + cot[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min);
        let c: f64 = cot.iter().sum();
        let (a, per) = (cur.area(), cur.perimeter());
        let t1 = t0 + dt;
        pieces.push(Piece {
            start: t0,
            end: t1,
            coeffs: vec![vec![a, -per, c], vec![0.5 * per, -c], vec![PI]],
        });
        let area_end = a - per * dt + c * dt * dt;
        if area_end <= 1e-10 * a0 {
            return Ok((pieces, t1));
        }
        match p.inward_offset(t1) {
            Some(next) if next.len() < cur.len() => {
                cur = next;
                t0 = t1;
            }
            Some(_) => {
                return Err(Error::Geometry(format!(
                    "no edge vanished at predicted event t = {t1}"
                )))
            }
            None => return Ok((pieces, t1)),
        }
    }
    Err(Error::Geometry("polygon sweep did not terminate".into()))
}

fn polytope_pieces(p: &Polytope, m: usize) -> Result<(Vec<Piece>, f64)> {
    let r = inradius(&ConvexBody::Polytope(p.clone()))?;
    let signature = |t: f64| -> Option<Vec<(usize, usize)>> {
        if t == 0.0 {
            Some(p.signature())
        } else {
            p.inward_offset(t).map(|q| q.signature())
        }
    };
    // Face-lattice changes are located by bisection between grid points.
    let top = r * (1.0 - 1e-4);
    let grid: Vec<f64> = (0..m.max(32))
        .map(|j| 0.5 * top * (1.0 - (PI * j as f64 / (m.max(32) - 1) as f64).cos()))
        .collect();
    let sigs: Vec<Option<Vec<(usize, usize)>>> = grid.iter().map(|&t| signature(t)).collect();
    let mut events = Vec::new();
    for j in 0..grid.len() - 1 {
        locate_changes(
            &signature,
            grid[j],
            &sigs[j],
            grid[j + 1],
            &sigs[j + 1],
            r,
            &mut events,
        );
    }
    events.sort_by(|a, b| a.total_cmp(b));
    events.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * r);

    let mut bounds = vec![0.0];
    bounds.extend(events);
    bounds.push(r);
    let mut pieces = Vec::new();
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = b - a;
        // Chebyshev nodes of the first kind avoid the interval ends.
        let nodes: Vec<f64> = (0..4)
            .map(|j| 0.5 * (1.0 - (PI * (2 * j + 1) as f64 / 8.0).cos()))
            .collect();
        let vals: Vec<QuermassVector> = nodes
            .iter()
            .map(|u| {
                let t = a + u * len;
                p.inward_offset(t)
                    .ok_or_else(|| {
                        Error::Geometry(format!("polytope offset vanished early at t = {t}"))
                    })
                    .and_then(|q| quermass(&ConvexBody::Polytope(q)))
            })
            .collect::<Result<_>>()?;
        let vand = DMatrix::from_fn(4, 4, |row, col| nodes[row].powi(col as i32));
        let lu = vand.lu();
        let coeffs = (0..=3)
            .map(|i| {
                let rhs = DVector::from_iterator(4, vals.iter().map(|q| q.w[i]));
                let c = lu.solve(&rhs).expect("Chebyshev Vandermonde is invertible");
                let deg = 3 - i;
                (0..=deg).map(|k| c[k] / len.powi(k as i32)).collect()
            })
            .collect();
        pieces.push(Piece {
            start: a,
            end: b,
            coeffs,
        });
    }
    Ok((pieces, r))
}

fn locate_changes<F>(
    sig: &F,
    a: f64,
    sa: &Option<Vec<(usize, usize)>>,
    b: f64,
    sb: &Option<Vec<(usize, usize)>>,
    scale: f64,
    out: &mut Vec<f64>,
) where
    F: Fn(f64) -> Option<Vec<(usize, usize)>>,
{
    if sa == sb {
        return;
    }
    if b - a <= 1e-13 * scale {
        out.push(0.5 * (a + b));
        return;
    }
    let m = 0.5 * (a + b);
    let sm = sig(m);
    locate_changes(sig, a, sa, m, &sm, scale, out);
    locate_changes(sig, m, &sm, b, sb, scale, out);
}

impl InnerParallelSweep {
    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    /// Event times in `(0, r]`; the last one is the final collapse at `r`.
    pub fn events(&self) -> &[f64] {
        &self.events
    }

    pub fn samples(&self) -> &[SweepSample] {
        &self.samples
    }

    /// `0`, the interior events and `r`: the points where the `W_i(t)` may kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = vec![0.0];
        b.extend(self.pieces.iter().map(|p| p.end));
        b
    }

    fn piece(&self, t: f64) -> &Piece {
        let idx = self.pieces.partition_point(|p| p.end < t);
        &self.pieces[idx.min(self.pieces.len() - 1)]
    }

    /// Interpolated `W_i(Omega_t)`, clamped to `[0, r]`.
    pub fn quermass_at(&self, i: usize, t: f64) -> f64 {
        let t = t.clamp(0.0, self.inradius);
        self.piece(t).value(i, t).max(0.0)
    }

    /// `d/dt W_i(Omega_t)` of the interpolant (one-sided at events).
    pub fn quermass_derivative_at(&self, i: usize, t: f64) -> f64 {
        let t = t.clamp(0.0, self.inradius);
        self.piece(t).derivative(i, t)
    }

    pub fn perimeter_at(&self, t: f64) -> f64 {
        self.dim as f64 * self.quermass_at(1, t)
    }

    pub fn volume_at(&self, t: f64) -> f64 {
        self.quermass_at(0, t)
    }

    pub fn interpolated(&self, t: f64) -> QuermassVector {
        QuermassVector {
            dim: self.dim,
            w: (0..=self.dim).map(|i| self.quermass_at(i, t)).collect(),
        }
    }

    /// For every sample interval, `-Delta W_p / Delta t - (n - p) W_{p+1}(midpoint)`.
    /// Nonnegative up to discretization error for a convex body.
    pub fn derivative_margins(&self, p: usize) -> Vec<f64> {
        assert!(p < self.dim);
        self.samples
            .windows(2)
            .map(|w| {
                let dt = w[1].t - w[0].t;
                let slope = -(w[1].quermass.w[p] - w[0].quermass.w[p]) / dt;
                let mid = 0.5 * (w[0].t + w[1].t);
                slope - (self.dim - p) as f64 * self.quermass_at(p + 1, mid)
            })
            .collect()
    }

    /// Tolerance for the finite-difference checks on an interval of width `dt`.
    pub fn fd_tolerance(&self, p: usize, dt: f64) -> f64 {
        let scale = self.samples[0].quermass.w[p] / self.inradius.powi(2);
        (1e-8f64).max(10.0 * dt * dt * scale)
    }

    /// CSV with header `t,W0,...,Wn,event`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 0..=self.dim {
            out.push_str(&format!(",W{i}"));
        }
        out.push_str(",event\n");
        for s in &self.samples {
            out.push_str(&crate::fmt::g12(s.t));
            for w in &s.quermass.w {
                out.push(',');
                out.push_str(&crate::fmt::g12(*w));
            }
            out.push_str(if s.event { ",1\n" } else { ",0\n" });
        }
        out
    }
}
