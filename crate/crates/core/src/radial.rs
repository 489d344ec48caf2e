//! Principal eigenpair of `S_k(D^2 v) = lambda (-v)^k` on the ball `B_R`.
//!
//! The eigenfunction is radial, `v(x) = phi(|x|)`, and the equation reduces
//! to the ODE
//!
//! ```text
//! C(n-1, k-1) (phi'/r)^(k-1) phi'' + C(n-1, k) (phi'/r)^k = lambda (-phi)^k
//! ```
//!
//! with `phi(0) = -1`, `phi'(0) = 0` and `phi(R) = 0`. We shoot from the
//! center and bisect on `lambda`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{binomial, unit_ball_volume};
use crate::ode::{dopri_step, error_norm, State};
use crate::quad;

/// Local error tolerance of the integrator.
const ODE_TOL: f64 = 1e-10;
/// Relative width at which bisection on lambda stops.
const LAMBDA_RTOL: f64 = 1e-12;
/// Largest power of two scanned in either direction when bracketing.
const SCAN_LIMIT: i32 = 120;
/// Maximal step (fraction of `R`) of the final, densely stored profile.
const PROFILE_STEPS: f64 = 2000.0;

/// `S_k` of the Hessian of a radial function: the Hessian has eigenvalue
/// `d2phi` once and `dphi / r` with multiplicity `n - 1`. At `r = 0` all
/// eigenvalues equal `d2phi`.
pub fn sk_radial(_phi: f64, dphi: f64, d2phi: f64, r: f64, n: usize, k: usize) -> f64 {
    if r == 0.0 {
        return binomial(n, k) * d2phi.powi(k as i32);
    }
    let q = dphi / r;
    binomial(n - 1, k) * q.powi(k as i32) + binomial(n - 1, k - 1) * q.powi(k as i32 - 1) * d2phi
}

/// `phi''` solved from the ODE. When `phi' = 0` away from the center only the
/// `C(n-1, k)` term survives and the equation degenerates; the limit is
/// taken with `phi'/r` replaced by its center value.
fn second_derivative(n: usize, k: usize, lambda: f64, r: f64, phi: f64, dphi: f64) -> f64 {
    let rhs = lambda * (-phi).powi(k as i32);
    if r == 0.0 || dphi <= 0.0 {
        return (rhs / binomial(n, k)).powf(1.0 / k as f64);
    }
    let q = dphi / r;
    (rhs - binomial(n - 1, k) * q.powi(k as i32)) / (binomial(n - 1, k - 1) * q.powi(k as i32 - 1))
}

fn check_orders(n: usize, k: usize) -> Result<()> {
    if n < 2 || k < 1 || k > n {
        return Err(Error::InvalidInput(format!(
            "need n >= 2 and 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// Outcome of one shot.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootResult {
    /// `phi(R)`. If the profile reaches zero at `z < R` first, integration
    /// stops there and the linear continuation `phi'(z) (R - z) > 0` is
    /// reported, which keeps the map continuous and monotone in `lambda`.
    pub boundary_value: f64,
    pub first_zero: Option<f64>,
    /// Accepted nodes `(r, phi, phi')`, starting at `r = 0`.
    pub nodes: Vec<State3>,
}

pub type State3 = [f64; 3];

/// Integrates the radial ODE from the center to `R` (or to the first zero).
pub fn shoot(n: usize, k: usize, radius: f64, lambda: f64) -> Result<ShootResult> {
    shoot_with_max_step(n, k, radius, lambda, radius / 50.0)
}

fn shoot_with_max_step(
    n: usize,
    k: usize,
    radius: f64,
    lambda: f64,
    hmax: f64,
) -> Result<ShootResult> {
    check_orders(n, k)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "eigenvalue parameter must be positive, got {lambda}"
        )));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let rhs =
        |r: f64, y: &State| -> State { [y[1], second_derivative(n, k, lambda, r, y[0], y[1])] };

    // second order series at the center
    let a = (lambda / binomial(n, k)).powf(1.0 / k as f64);
    let r0 = 1e-4 * radius;
    let mut r = r0;
    let mut y: State = [-1.0 + 0.5 * a * r0 * r0, a * r0];
    let mut nodes = vec![[0.0, -1.0, 0.0], [r, y[0], y[1]]];
    let mut h = (1e-3 * radius).min(hmax);
    let hmin = 1e-14 * radius;

    loop {
        if r >= radius {
            return Ok(ShootResult {
                boundary_value: y[0],
                first_zero: None,
                nodes,
            });
        }
        let last = radius - r <= h;
        let step = if last { radius - r } else { h };
        let (y1, err) = dopri_step(&rhs, r, &y, step);
        let en = error_norm(&y, &y1, &err, ODE_TOL);
        if !(en <= 1.0) || !y1[0].is_finite() {
            h = step
                * if en.is_finite() {
                    (0.9 * en.powf(-0.2)).clamp(0.1, 0.5)
                } else {
                    0.1
                };
            if h < hmin {
                return Err(Error::StepUnderflow { r, h });
            }
            continue;
        }
        if y1[0] >= 0.0 {
            // bracket the zero inside the accepted step
            let (mut lo, mut hi) = (0.0, step);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if dopri_step(&rhs, r, &y, mid).0[0] >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let yz = dopri_step(&rhs, r, &y, hi).0;
            let z = r + hi;
            nodes.push([z, 0.0, yz[1]]);
            let boundary_value = if z < radius {
                yz[1] * (radius - z)
            } else {
                0.0
            };
            return Ok(ShootResult {
                boundary_value,
                first_zero: Some(z),
                nodes,
            });
        }
        r = if last { radius } else { r + step };
        y = y1;
        nodes.push([r, y[0], y[1]]);
        let grow = if en > 0.0 {
            (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (step * grow).min(hmax);
    }
}

/// Radial eigenfunction on `B_R` normalized by `phi(0) = -1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub n: usize,
    pub k: usize,
    pub radius: f64,
    pub lambda: f64,
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub d2phi: Vec<f64>,
}

impl RadialProfile {
    /// Wraps tabulated values; `d2phi` is taken from the ODE at `lambda`.
    pub fn from_nodes(
        n: usize,
        k: usize,
        radius: f64,
        lambda: f64,
        nodes: &[State3],
    ) -> Result<Self> {
        check_orders(n, k)?;
        if nodes.len() < 2 || nodes[0][0] != 0.0 {
            return Err(Error::InvalidInput(
                "profile must start at r = 0 with at least 2 nodes".into(),
            ));
        }
        let r: Vec<f64> = nodes.iter().map(|x| x[0]).collect();
        let phi: Vec<f64> = nodes.iter().map(|x| x[1]).collect();
        let dphi: Vec<f64> = nodes.iter().map(|x| x[2]).collect();
        let d2phi = nodes
            .iter()
            .map(|x| second_derivative(n, k, lambda, x[0], x[1], x[2]))
            .collect();
        Ok(Self {
            n,
            k,
            radius,
            lambda,
            r,
            phi,
            dphi,
            d2phi,
        })
    }

    fn locate(&self, r: f64) -> usize {
        let i = self.r.partition_point(|&x| x <= r);
        i.clamp(1, self.r.len() - 1) - 1
    }

    /// Cubic Hermite interpolation of `phi` from `(phi, phi')`.
    pub fn phi_at(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, self.radius);
        let i = self.locate(r);
        hermite(
            self.r[i],
            self.r[i + 1],
            self.phi[i],
            self.phi[i + 1],
            self.dphi[i],
            self.dphi[i + 1],
            r,
        )
    }

    /// Cubic Hermite interpolation of `phi'` from `(phi', phi'')`.
    pub fn dphi_at(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, self.radius);
        let i = self.locate(r);
        hermite(
            self.r[i],
            self.r[i + 1],
            self.dphi[i],
            self.dphi[i + 1],
            self.d2phi[i],
            self.d2phi[i + 1],
            r,
        )
    }

    pub fn sup_norm(&self) -> f64 {
        self.phi.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// The same eigenfunction on `B_{sR}`: `phi_s(r) = phi(r / s)`, `lambda s^(-2k)`.
    pub fn rescaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            k: self.k,
            radius: self.radius * s,
            lambda: self.lambda * s.powi(-2 * self.k as i32),
            r: self.r.iter().map(|x| x * s).collect(),
            phi: self.phi.clone(),
            dphi: self.dphi.iter().map(|x| x / s).collect(),
            d2phi: self.d2phi.iter().map(|x| x / (s * s)).collect(),
        }
    }

    /// Largest `|S_k(D^2 v) - lambda (-v)^k| / lambda` over interior nodes,
    /// with `phi''` from finite differences of the stored `phi'`.
    pub fn ode_residual(&self) -> f64 {
        let m = self.r.len();
        let mut worst: f64 = 0.0;
        for i in 2..m - 1 {
            let (h0, h1) = (self.r[i] - self.r[i - 1], self.r[i + 1] - self.r[i]);
            if h0 <= 0.0 || h1 <= 0.0 {
                continue;
            }
            let d2 = (self.dphi[i + 1] - self.dphi[i]) * h0 / (h1 * (h0 + h1))
                + (self.dphi[i] - self.dphi[i - 1]) * h1 / (h0 * (h0 + h1));
            let s = sk_radial(self.phi[i], self.dphi[i], d2, self.r[i], self.n, self.k);
            let res = (s - self.lambda * (-self.phi[i]).powi(self.k as i32)).abs() / self.lambda;
            worst = worst.max(res);
        }
        worst
    }

    /// Hessian eigenvalues `(phi'', phi'/r, ..., phi'/r)` at node `i`.
    pub fn hessian_eigenvalues(&self, i: usize) -> Vec<f64> {
        let q = if self.r[i] > 0.0 {
            self.dphi[i] / self.r[i]
        } else {
            self.d2phi[i]
        };
        let mut e = vec![q; self.n];
        e[0] = self.d2phi[i];
        e
    }

    /// CSV with header `r,phi,dphi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,phi,dphi\n");
        for i in 0..self.r.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                crate::fmt::g12(self.r[i]),
                crate::fmt::g12(self.phi[i]),
                crate::fmt::g12(self.dphi[i])
            ));
        }
        out
    }
}

fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d1
}

/// `lambda_k(B_R)` and its eigenfunction, by bisection on the shooting map.
pub fn solve_ball_eigenvalue(n: usize, k: usize, radius: f64) -> Result<RadialProfile> {
    check_orders(n, k)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let g = |lambda: f64| shoot(n, k, radius, lambda).map(|s| s.boundary_value);
    let start = radius.powi(-2 * k as i32);
    let (lo_limit, hi_limit) = (
        start * 2f64.powi(-SCAN_LIMIT),
        start * 2f64.powi(SCAN_LIMIT),
    );

    let mut lo = start;
    let mut hi = start;
    let mut g_lo = g(lo)?;
    let mut g_hi = g_lo;
    if g_lo < 0.0 {
        while g_hi < 0.0 {
            lo = hi;
            g_lo = g_hi;
            hi *= 2.0;
            if hi > hi_limit {
                return Err(Error::NoBracket {
                    lo: lo_limit,
                    hi: hi_limit,
                });
            }
            g_hi = g(hi)?;
        }
    } else {
        while g_lo >= 0.0 {
            hi = lo;
            g_hi = g_lo;
            lo *= 0.5;
            if lo < lo_limit {
                return Err(Error::NoBracket {
                    lo: lo_limit,
                    hi: hi_limit,
                });
            }
            g_lo = g(lo)?;
        }
    }

    for _ in 0..200 {
        if (hi - lo) <= LAMBDA_RTOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm < g_lo || gm > g_hi {
            return Err(Error::Numerical(format!(
                "shooting map is not monotone in lambda near {mid:.6e}"
            )));
        }
        if gm < 0.0 {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
            g_hi = gm;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let shot = shoot_with_max_step(n, k, radius, lambda, radius / PROFILE_STEPS)?;
    if shot.boundary_value.abs() >= 1e-9 {
        return Err(Error::NoConvergence(format!(
            "|phi(R)| = {:.3e} after bisection",
            shot.boundary_value.abs()
        )));
    }
    let mut nodes = shot.nodes;
    let last = nodes.last_mut().expect("nodes");
    last[0] = radius;
    last[1] = 0.0;
    RadialProfile::from_nodes(n, k, radius, lambda, &nodes)
}

/// `||v||_inf` and `||v||_p` of the eigenfunction on `B_R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileNorms {
    pub sup: f64,
    pub p: f64,
    pub lp: f64,
    /// `||v||_p^p = n omega_n int_0^R (-phi)^p r^(n-1) dr`
    pub lp_pow: f64,
}

pub fn profile_norms(profile: &RadialProfile, p: f64) -> Result<ProfileNorms> {
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!(
            "norm exponent must be >= 1, got {p}"
        )));
    }
    let n = profile.n;
    let surface = n as f64 * unit_ball_volume(n);
    let stride = (profile.r.len() / 64).max(1);
    let mut breaks: Vec<f64> = profile.r.iter().step_by(stride).copied().collect();
    if *breaks.last().unwrap() < profile.radius {
        breaks.push(profile.radius);
    }
    let est = quad::integrate_with_breaks(
        |r| (-profile.phi_at(r)).max(0.0).powf(p) * r.powi(n as i32 - 1),
        &breaks,
        1e-8,
    )?;
    let lp_pow = surface * est.value;
    Ok(ProfileNorms {
        sup: profile.sup_norm(),
        p,
        lp: lp_pow.powf(1.0 / p),
        lp_pow,
    })
}
