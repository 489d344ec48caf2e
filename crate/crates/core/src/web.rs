//! Rayleigh quotients of web functions `u = -f(d_Omega)`.
//!
//! Both integrals are reduced to one-dimensional integrals over the distance
//! `s` from the boundary using the inner parallel sweep:
//!
//! ```text
//! int (-u)^(k+1) dx         = int_0^r f(s)^(k+1) P(Omega_s) ds
//! int (-u) S_k(D^2 u) dx    = C(n, k) int_0^r f'(s)^(k+1) W_k(Omega_s) ds
//! ```
//!
//! The second line uses `int_{dK} sigma_{k-1}(curvatures) = C(n-1, k-1) n W_k(K)`
//! on each level set together with the divergence form of `S_k`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{binomial, equiv_ball_radius, ConvexBody, InnerParallelSweep};
use crate::quad;
use crate::radial::{solve_ball_eigenvalue, RadialProfile};

const QUAD_RTOL: f64 = 1e-8;

/// Profile `f` of a web function `u = -f(d)`.
#[derive(Debug, Clone, PartialEq)]
pub enum WebProfile {
    /// `f(s) = s^beta`, `beta >= 1`.
    Power(f64),
    /// `f(s) = -phi(R - s)` for the radial eigenfunction `phi` on `B_R`.
    RadialComposed(RadialProfile),
    /// Cubic Hermite interpolant through `(s, f, f')`.
    Tabulated(Vec<[f64; 3]>),
}

impl WebProfile {
    pub fn power(beta: f64) -> Result<Self> {
        if !(beta >= 1.0 && beta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "power profile needs beta >= 1, got {beta}"
            )));
        }
        Ok(Self::Power(beta))
    }

    pub fn tabulated(nodes: Vec<[f64; 3]>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidInput(
                "tabulated profile needs at least 2 nodes".into(),
            ));
        }
        if nodes[0][0] != 0.0 {
            return Err(Error::InvalidInput(
                "tabulated profile must start at s = 0".into(),
            ));
        }
        if nodes.windows(2).any(|w| !(w[1][0] > w[0][0])) {
            return Err(Error::InvalidInput(
                "tabulated abscissae must increase".into(),
            ));
        }
        if nodes.windows(2).any(|w| w[1][1] < w[0][1]) || nodes.iter().any(|x| x[2] < 0.0) {
            return Err(Error::InvalidInput("profile must be nondecreasing".into()));
        }
        Ok(Self::Tabulated(nodes))
    }

    /// Largest `s` at which the profile is defined.
    pub fn domain_end(&self) -> f64 {
        match self {
            Self::Power(_) => f64::INFINITY,
            Self::RadialComposed(p) => p.radius,
            Self::Tabulated(t) => t.last().unwrap()[0],
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        match self {
            Self::Power(b) => s.max(0.0).powf(*b),
            Self::RadialComposed(p) => -p.phi_at(p.radius - s),
            Self::Tabulated(t) => {
                let (i, h, u) = table_cell(t, s);
                let (a, b) = (&t[i], &t[i + 1]);
                let (u2, u3) = (u * u, u * u * u);
                (2.0 * u3 - 3.0 * u2 + 1.0) * a[1]
                    + (u3 - 2.0 * u2 + u) * h * a[2]
                    + (-2.0 * u3 + 3.0 * u2) * b[1]
                    + (u3 - u2) * h * b[2]
            }
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            Self::Power(b) => {
                if *b == 1.0 {
                    1.0
                } else {
                    b * s.max(0.0).powf(b - 1.0)
                }
            }
            Self::RadialComposed(p) => p.dphi_at(p.radius - s),
            Self::Tabulated(t) => {
                let (i, h, u) = table_cell(t, s);
                let (a, b) = (&t[i], &t[i + 1]);
                let u2 = u * u;
                ((6.0 * u2 - 6.0 * u) * a[1] + (-6.0 * u2 + 6.0 * u) * b[1]) / h
                    + (3.0 * u2 - 4.0 * u + 1.0) * a[2]
                    + (3.0 * u2 - 2.0 * u) * b[2]
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Power(b) => format!("power(beta={})", crate::fmt::g12(*b)),
            Self::RadialComposed(p) => format!(
                "radial(n={}, k={}, R={})",
                p.n,
                p.k,
                crate::fmt::g12(p.radius)
            ),
            Self::Tabulated(t) => format!("tabulated({} nodes)", t.len()),
        }
    }
}

fn table_cell(t: &[[f64; 3]], s: f64) -> (usize, f64, f64) {
    let s = s.clamp(0.0, t.last().unwrap()[0]);
    let i = t.partition_point(|x| x[0] <= s).clamp(1, t.len() - 1) - 1;
    let h = t[i + 1][0] - t[i][0];
    (i, h, (s - t[i][0]) / h)
}

/// Upper-bound estimate for `lambda_k(Omega)` from one web function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayleighResult {
    pub k: usize,
    pub numerator: f64,
    pub denominator: f64,
    pub quotient: f64,
    pub profile: String,
    pub provenance: String,
    /// Propagated quadrature error estimate of the quotient.
    pub error: f64,
}

fn check_domain(f: &WebProfile, sweep: &InnerParallelSweep, k: usize) -> Result<()> {
    if k < 1 || k > sweep.dim() {
        return Err(Error::InvalidInput(format!(
            "k must lie in 1..={}, got {k}",
            sweep.dim()
        )));
    }
    let r = sweep.inradius();
    if f.domain_end() < r * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "profile is defined on [0, {}] but the inradius is {}",
            f.domain_end(),
            r
        )));
    }
    Ok(())
}

fn denominator_estimate(
    f: &WebProfile,
    sweep: &InnerParallelSweep,
    k: usize,
) -> Result<quad::Estimate> {
    check_domain(f, sweep, k)?;
    quad::integrate_with_breaks(
        |s| f.value(s).powi(k as i32 + 1) * sweep.perimeter_at(s),
        &sweep.breakpoints(),
        QUAD_RTOL,
    )
}

/// `int_0^r f'(s)^(k+1) W_k(Omega_s) ds`, the level-set integral before the
/// combinatorial factor.
pub fn level_set_integral(
    f: &WebProfile,
    sweep: &InnerParallelSweep,
    k: usize,
) -> Result<quad::Estimate> {
    check_domain(f, sweep, k)?;
    quad::integrate_with_breaks(
        |s| f.derivative(s).powi(k as i32 + 1) * sweep.quermass_at(k, s),
        &sweep.breakpoints(),
        QUAD_RTOL,
    )
}

/// `int_Omega (-u)^(k+1) dx = int_0^r f(s)^(k+1) P(Omega_s) ds`.
pub fn rayleigh_denominator(f: &WebProfile, sweep: &InnerParallelSweep, k: usize) -> Result<f64> {
    denominator_estimate(f, sweep, k).map(|e| e.value)
}

/// `int_Omega (-u) S_k(D^2 u) dx = C(n, k) int_0^r f'(s)^(k+1) W_k(Omega_s) ds`.
pub fn rayleigh_numerator(f: &WebProfile, sweep: &InnerParallelSweep, k: usize) -> Result<f64> {
    let c = binomial(sweep.dim(), k);
    level_set_integral(f, sweep, k).map(|e| c * e.value)
}

pub fn rayleigh_quotient(
    f: &WebProfile,
    sweep: &InnerParallelSweep,
    k: usize,
) -> Result<RayleighResult> {
    let c = binomial(sweep.dim(), k);
    let num = level_set_integral(f, sweep, k)?;
    let den = denominator_estimate(f, sweep, k)?;
    if !(den.value > 0.0) {
        return Err(Error::Numerical(format!(
            "web denominator vanishes for profile {}",
            f.describe()
        )));
    }
    let numerator = c * num.value;
    let quotient = numerator / den.value;
    let error =
        quotient * (num.error / num.value.abs().max(f64::MIN_POSITIVE) + den.error / den.value);
    let mut provenance =
        String::from("web upper bound (limit of smoothed distance, modulo smoothing)");
    if k >= 2
        && matches!(
            sweep.body(),
            ConvexBody::Polygon(_) | ConvexBody::Polytope(_)
        )
    {
        provenance.push_str("; formal web bound: level-set curvature taken as curvature measure");
    }
    Ok(RayleighResult {
        k,
        numerator,
        denominator: den.value,
        quotient,
        profile: f.describe(),
        provenance,
        error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemdCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Both sides of `int_0^r f(t) P(t) dt >= P(Omega) int_0^{|Omega|/P(Omega)} f(t) dt`.
pub fn lemd_verify(f: &WebProfile, sweep: &InnerParallelSweep) -> Result<LemdCheck> {
    check_domain(f, sweep, 1)?;
    lemd_verify_fn(|s| f.value(s), sweep)
}

/// As [`lemd_verify`] for an arbitrary nondecreasing function.
pub fn lemd_verify_fn<F: Fn(f64) -> f64 + Sync>(
    f: F,
    sweep: &InnerParallelSweep,
) -> Result<LemdCheck> {
    let r = sweep.inradius();
    let samples = 256;
    let mut prev = f(0.0);
    for i in 1..=samples {
        let v = f(r * i as f64 / samples as f64);
        if v < prev - 1e-12 * prev.abs().max(1.0) {
            return Err(Error::InvalidInput("profile must be nondecreasing".into()));
        }
        prev = v;
    }
    let lhs = quad::integrate_with_breaks(
        |t| f(t) * sweep.perimeter_at(t),
        &sweep.breakpoints(),
        QUAD_RTOL,
    )?
    .value;
    let p = sweep.perimeter_at(0.0);
    let ratio = sweep.volume_at(0.0) / p;
    let rhs = p * quad::integrate(&f, 0.0, ratio, QUAD_RTOL)?.value;
    Ok(LemdCheck {
        lhs,
        rhs,
        margin: lhs - rhs,
    })
}

/// Profile family searched by [`optimize_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileFamily {
    Power { lo: f64, hi: f64 },
    RadialComposed,
}

impl Default for ProfileFamily {
    fn default() -> Self {
        Self::Power { lo: 1.0, hi: 8.0 }
    }
}

/// Index of the equivalent ball used by the stability test function.
pub fn radial_index(n: usize, k: usize) -> usize {
    if k == n {
        n - 1
    } else {
        k
    }
}

/// Smallest quotient over the family.
pub fn optimize_profile(
    family: ProfileFamily,
    sweep: &InnerParallelSweep,
    k: usize,
) -> Result<RayleighResult> {
    match family {
        ProfileFamily::RadialComposed => {
            let n = sweep.dim();
            if k < 1 || k > n {
                return Err(Error::InvalidInput(format!(
                    "k must lie in 1..={n}, got {k}"
                )));
            }
            let radius = equiv_ball_radius(&sweep.interpolated(0.0), radial_index(n, k))?;
            let profile = solve_ball_eigenvalue(n, k, radius.max(sweep.inradius()))?;
            rayleigh_quotient(&WebProfile::RadialComposed(profile), sweep, k)
        }
        ProfileFamily::Power { lo, hi } => {
            if !(lo >= 1.0 && hi >= lo && hi.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "invalid power range [{lo}, {hi}]"
                )));
            }
            let eval = |b: f64| rayleigh_quotient(&WebProfile::Power(b), sweep, k);
            if hi == lo {
                return eval(lo);
            }
            let grid = 9;
            let scan: Vec<RayleighResult> = (0..grid)
                .into_par_iter()
                .map(|i| eval(lo + (hi - lo) * i as f64 / (grid - 1) as f64))
                .collect::<Result<_>>()?;
            let mut best = scan
                .iter()
                .cloned()
                .min_by(|a, b| a.quotient.total_cmp(&b.quotient))
                .expect("nonempty grid");
            // golden section on the whole range; the grid is the fallback
            let g = (5f64.sqrt() - 1.0) / 2.0;
            let (mut a, mut b) = (lo, hi);
            let mut c = b - g * (b - a);
            let mut d = a + g * (b - a);
            let mut fc = eval(c)?;
            let mut fd = eval(d)?;
            while b - a > 1e-6 * (1.0 + a.abs()) {
                if fc.quotient < fd.quotient {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - g * (b - a);
                    fc = eval(c)?;
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + g * (b - a);
                    fd = eval(d)?;
                }
            }
            for cand in [fc, fd] {
                if cand.quotient < best.quotient {
                    best = cand;
                }
            }
            Ok(best)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sweep, Polygon};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn square() -> InnerParallelSweep {
        sweep(
            &ConvexBody::Polygon(Polygon::rectangle(1.0, 1.0).unwrap()),
            64,
        )
        .unwrap()
    }

    fn disk() -> InnerParallelSweep {
        sweep(&ConvexBody::ball(2, 1.0).unwrap(), 64).unwrap()
    }

    #[test]
    fn square_closed_forms() {
        let sw = square();
        let f = WebProfile::power(1.0).unwrap();
        assert_relative_eq!(
            rayleigh_denominator(&f, &sw, 1).unwrap(),
            1.0 / 24.0,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            rayleigh_numerator(&f, &sw, 1).unwrap(),
            1.0,
            max_relative = 1e-10
        );
        let q = rayleigh_quotient(&f, &sw, 1).unwrap();
        assert_relative_eq!(q.quotient, 24.0, max_relative = 1e-10);
        assert!(q.provenance.contains("modulo smoothing"));
    }

    #[test]
    fn disk_closed_forms() {
        let sw = disk();
        let f = WebProfile::power(1.0).unwrap();
        assert_relative_eq!(
            rayleigh_denominator(&f, &sw, 1).unwrap(),
            PI / 6.0,
            max_relative = 1e-10
        );
        // cone |x| - 1: the Monge-Ampere measure is pi at the origin
        assert_relative_eq!(
            rayleigh_numerator(&f, &sw, 2).unwrap(),
            PI,
            max_relative = 1e-10
        );
    }

    #[test]
    fn zero_profile() {
        let sw = square();
        let f = WebProfile::tabulated(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(rayleigh_denominator(&f, &sw, 1).unwrap(), 0.0);
        assert_eq!(rayleigh_numerator(&f, &sw, 1).unwrap(), 0.0);
        assert!(rayleigh_quotient(&f, &sw, 1).is_err());
    }

    #[test]
    fn short_table_is_rejected() {
        let sw = square();
        let f = WebProfile::tabulated(vec![[0.0, 0.0, 1.0], [0.25, 0.25, 1.0]]).unwrap();
        assert!(matches!(
            rayleigh_denominator(&f, &sw, 1),
            Err(Error::Domain(_))
        ));
        assert!(WebProfile::tabulated(vec![[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]).is_err());
        assert!(WebProfile::power(0.5).is_err());
    }

    #[test]
    fn tabulated_matches_power() {
        let sw = square();
        let nodes = (0..=50)
            .map(|i| {
                let s = 0.5 * i as f64 / 50.0;
                [s, s * s, 2.0 * s]
            })
            .collect();
        let t = WebProfile::tabulated(nodes).unwrap();
        let p = WebProfile::power(2.0).unwrap();
        assert_relative_eq!(
            rayleigh_quotient(&t, &sw, 1).unwrap().quotient,
            rayleigh_quotient(&p, &sw, 1).unwrap().quotient,
            max_relative = 1e-10
        );
    }

    #[test]
    fn eigenfunction_reproduces_disk_eigenvalue() {
        let sw = disk();
        let best = optimize_profile(ProfileFamily::RadialComposed, &sw, 1).unwrap();
        assert_relative_eq!(best.quotient, 5.783185962946784, max_relative = 1e-7);
    }

    #[test]
    fn lemd_square() {
        let sw = square();
        let c = lemd_verify(&WebProfile::power(1.0).unwrap(), &sw).unwrap();
        assert_relative_eq!(c.lhs, 1.0 / 6.0, max_relative = 1e-10);
        assert_relative_eq!(c.rhs, 0.125, max_relative = 1e-10);
        let one = lemd_verify_fn(|_| 1.0, &sw).unwrap();
        assert_relative_eq!(one.lhs, one.rhs, max_relative = 1e-10);
        assert!(lemd_verify_fn(|t| -t, &sw).is_err());
    }

    #[test]
    fn optimized_power_beats_linear() {
        let sw = square();
        let best = optimize_profile(ProfileFamily::default(), &sw, 1).unwrap();
        assert!(best.quotient <= 24.0 * (1.0 + 1e-10));
        assert!(best.quotient > 19.7, "{best:?}");
    }
}
