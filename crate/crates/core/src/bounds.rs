//! Upper and lower bounds for `lambda_k(Omega)` assembled into one report.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    binomial, equiv_ball_radius, inradius, quermass, sweep, ConvexBody, QuermassVector,
};
use crate::pderef::{fd_laplace_eigen, GridDomain};
use crate::radial::{profile_norms, solve_ball_eigenvalue};
use crate::web::{optimize_profile, radial_index, ProfileFamily, RayleighResult};

pub const SCHEMA: &str = "hessbound/1";

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::InvalidInput(format!(
            "k must lie in 1..={n}, got {k}"
        )));
    }
    Ok(())
}

/// `n (k+2) / (n-k+1) * P^(k+1) / |Omega|^(k+2) * W_{k-1}`.
pub fn makai_bound(qv: &QuermassVector, k: usize) -> Result<f64> {
    let n = qv.dim;
    check_k(n, k)?;
    let (p, v) = (qv.perimeter(), qv.volume());
    let c = (n * (k + 2)) as f64 / (n - k + 1) as f64;
    Ok(c * p.powi(k as i32 + 1) / v.powi(k as i32 + 2) * qv.w[k - 1])
}

/// Lower bound from the eigenvalue of an equivalent ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    /// Set when the bound rests on the unproven level-set convexity
    /// hypothesis (`2 <= k <= n - 1`).
    pub conditional: bool,
    pub index: usize,
    pub radius: f64,
}

pub fn faber_krahn_lower(body: &ConvexBody, k: usize) -> Result<LowerBound> {
    let qv = quermass(body)?;
    let n = qv.dim;
    check_k(n, k)?;
    let (index, conditional) = match k {
        1 => (0, false),
        _ if k == n => (n - 1, false),
        _ => (k - 1, true),
    };
    let radius = equiv_ball_radius(&qv, index)?;
    let value = solve_ball_eigenvalue(n, k, radius)?.lambda;
    Ok(LowerBound {
        value,
        conditional,
        index,
        radius,
    })
}

/// Constituents of the stability estimate
/// `(lambda(Omega) - lambda(B)) / lambda(Omega) <= C_Omega (|B| - |Omega|)`
/// and the explicit bound `lambda(B) / (1 - C_Omega gap)` it implies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityEntry {
    pub index: usize,
    pub radius: f64,
    pub ball_lambda: f64,
    /// `(||v||_inf / ||v||_{k+1})^(k+1)` for the eigenfunction on the ball.
    pub c_omega: f64,
    /// `omega_n R^n - |Omega|`.
    pub gap: f64,
    /// `C_Omega * gap`.
    pub product: f64,
    pub applicable: bool,
    /// Present iff `product < 1`.
    pub bound: Option<f64>,
}

impl StabilityEntry {
    /// Whether a reference eigenvalue satisfies the raw relative-gap inequality.
    pub fn relative_gap(&self, reference: f64) -> f64 {
        (reference - self.ball_lambda) / reference
    }
}

pub fn stability_bound(body: &ConvexBody, k: usize) -> Result<StabilityEntry> {
    let qv = quermass(body)?;
    let n = qv.dim;
    check_k(n, k)?;
    let index = radial_index(n, k);
    let radius = equiv_ball_radius(&qv, index)?;
    let profile = solve_ball_eigenvalue(n, k, radius)?;
    let norms = profile_norms(&profile, (k + 1) as f64)?;
    let c_omega = (norms.sup / norms.lp).powi(k as i32 + 1);
    let gap = (qv.omega() * radius.powi(n as i32) - qv.volume()).max(0.0);
    let product = c_omega * gap;
    let applicable = product < 1.0;
    Ok(StabilityEntry {
        index,
        radius,
        ball_lambda: profile.lambda,
        c_omega,
        gap,
        product,
        applicable,
        bound: applicable.then(|| profile.lambda / (1.0 - product)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionChain {
    /// `R_0 <= R_1 <= ... <= R_{n-1}`.
    pub radii: Vec<f64>,
    /// `(R_{n-1} - R_0) / R_0`; zero exactly for balls.
    pub spread: f64,
}

pub fn inclusion_chain(qv: &QuermassVector) -> Result<InclusionChain> {
    let radii = (0..qv.dim)
        .map(|i| equiv_ball_radius(qv, i))
        .collect::<Result<Vec<_>>>()?;
    for (i, w) in radii.windows(2).enumerate() {
        if w[1] < w[0] * (1.0 - 1e-10) {
            return Err(Error::Geometry(format!(
                "equivalent radii decrease: R_{} = {} > R_{} = {}",
                i,
                w[0],
                i + 1,
                w[1]
            )));
        }
    }
    let spread = (radii[radii.len() - 1] - radii[0]) / radii[0];
    Ok(InclusionChain { radii, spread })
}

/// `S_0 .. S_n` of the given numbers.
pub fn elementary_symmetric(x: &[f64]) -> Vec<f64> {
    let mut s = vec![0.0; x.len() + 1];
    s[0] = 1.0;
    for (m, &v) in x.iter().enumerate() {
        for j in (1..=m + 1).rev() {
            s[j] += v * s[j - 1];
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewtonVerdict {
    /// `S_1 .. S_k`.
    pub s: Vec<f64>,
    pub k_convex: bool,
    /// `(S_j / C(n, j))^(1/j)` for `j = 1..k`, when k-convex.
    pub chain: Option<Vec<f64>>,
    pub chain_nonincreasing: bool,
}

pub fn newton_check(eigenvalues: &[f64], k: usize) -> Result<NewtonVerdict> {
    let n = eigenvalues.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty eigenvalue list".into()));
    }
    check_k(n, k)?;
    let all = elementary_symmetric(eigenvalues);
    let s = all[1..=k].to_vec();
    let scale = eigenvalues
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let k_convex = s
        .iter()
        .enumerate()
        .all(|(j, &v)| v >= -1e-12 * scale.powi(j as i32 + 1));
    let chain = k_convex.then(|| {
        s.iter()
            .enumerate()
            .map(|(j, &v)| (v.max(0.0) / binomial(n, j + 1)).powf(1.0 / (j + 1) as f64))
            .collect::<Vec<_>>()
    });
    let chain_nonincreasing = chain
        .as_ref()
        .map(|c| {
            c.windows(2)
                .all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-12 * scale)
        })
        .unwrap_or(false);
    Ok(NewtonVerdict {
        s,
        k_convex,
        chain,
        chain_nonincreasing,
    })
}

/// One report entry: a value or the error that prevented it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<T>,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl<T> Entry<T> {
    fn from_result(r: Result<T>, provenance: impl Into<String>) -> Self {
        let provenance = provenance.into();
        match r {
            Ok(v) => Self {
                value: Some(v),
                provenance,
                error: None,
            },
            Err(e) => Self {
                value: None,
                provenance,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reference {
    pub value: f64,
    /// Estimated absolute error.
    pub error_estimate: f64,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperBounds {
    pub makai: Entry<f64>,
    pub web: Entry<RayleighResult>,
    pub stability: Entry<StabilityEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingCheck {
    pub holds: bool,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub schema: &'static str,
    pub body: String,
    pub n: usize,
    pub k: usize,
    pub quermass: Vec<f64>,
    pub inradius: f64,
    pub lower: Entry<LowerBound>,
    pub upper: UpperBounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<Entry<Reference>>,
    pub ordering: OrderingCheck,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    /// Sweep sample count.
    pub samples: usize,
    /// Grid spacing of the finite-difference reference (`k = 1` polygons);
    /// `None` picks `sqrt(|Omega|) / 64`.
    pub h: Option<f64>,
    /// Web profile families; the smallest quotient is reported.
    pub families: Vec<ProfileFamily>,
    /// Compute the finite-difference reference when available.
    pub reference: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            samples: 64,
            h: None,
            families: vec![ProfileFamily::default(), ProfileFamily::RadialComposed],
            reference: true,
        }
    }
}

const MAKAI_PROVENANCE: &str = "upper bound from the distance-function test profile f(s) = s";
const STABILITY_PROVENANCE: &str =
    "explicit upper bound lambda(B_Ri) / (1 - C gap) from the stability estimate; i = n-1 for k = n, else i = k";

fn lower_provenance(k: usize, n: usize) -> String {
    match k {
        1 => "Faber-Krahn: ball of equal volume".into(),
        _ if k == n => "ball with equal W_{n-1}".into(),
        _ => format!(
            "ball with equal W_{}; conditional on convex level sets of the eigenfunction",
            k - 1
        ),
    }
}

fn web_entry(body: &ConvexBody, k: usize, opts: &ReportOptions) -> Entry<RayleighResult> {
    let run = || -> Result<RayleighResult> {
        let sw = sweep(body, opts.samples)?;
        let mut best: Option<RayleighResult> = None;
        let mut last_err = None;
        for fam in &opts.families {
            match optimize_profile(*fam, &sw, k) {
                Ok(r) => {
                    if best.as_ref().is_none_or(|b| r.quotient < b.quotient) {
                        best = Some(r);
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
        best.ok_or_else(|| {
            last_err.unwrap_or_else(|| Error::InvalidInput("no web profile family".into()))
        })
    };
    Entry::from_result(
        run(),
        "minimal web-function Rayleigh quotient over the requested families",
    )
}

fn reference_entry(
    body: &ConvexBody,
    k: usize,
    opts: &ReportOptions,
    qv: &QuermassVector,
) -> Option<Entry<Reference>> {
    if !opts.reference {
        return None;
    }
    match body {
        ConvexBody::Ball { dim, radius } => Some(Entry::from_result(
            solve_ball_eigenvalue(*dim, k, *radius).map(|p| Reference {
                value: p.lambda,
                error_estimate: 1e-9 * p.lambda,
                method: "radial shooting".into(),
            }),
            "exact radial eigenvalue",
        )),
        ConvexBody::Polygon(p) if k == 1 => {
            let h = opts.h.unwrap_or(qv.volume().sqrt() / 64.0);
            let run = || -> Result<Reference> {
                let est = fd_laplace_eigen(&GridDomain::new(p, h)?)?;
                Ok(Reference {
                    value: est.lambda,
                    error_estimate: est.error_estimate,
                    method: format!("five-point Dirichlet Laplacian, h = {}", crate::fmt::g12(h)),
                })
            };
            Some(Entry::from_result(
                run(),
                "finite-difference oracle (k = 1)",
            ))
        }
        _ => None,
    }
}

/// Runs every bound for `(body, k)`. Failures are recorded per entry.
pub fn report(body: &ConvexBody, k: usize, opts: &ReportOptions) -> Result<BoundReport> {
    let qv = quermass(body)?;
    let n = qv.dim;
    check_k(n, k)?;
    if opts.samples < 16 {
        return Err(Error::InvalidInput(format!(
            "sweep needs at least 16 samples, got {}",
            opts.samples
        )));
    }
    let r = inradius(body)?;

    let ((lower, stability), (web, reference)) = rayon::join(
        || {
            rayon::join(
                || Entry::from_result(faber_krahn_lower(body, k), lower_provenance(k, n)),
                || Entry::from_result(stability_bound(body, k), STABILITY_PROVENANCE),
            )
        },
        || {
            rayon::join(
                || web_entry(body, k, opts),
                || reference_entry(body, k, opts, &qv),
            )
        },
    );
    let mut makai_prov = String::from(MAKAI_PROVENANCE);
    if k >= 2 && !matches!(body, ConvexBody::Ball { .. }) {
        makai_prov.push_str("; formal web bound for nonsmooth boundaries");
    }
    let upper = UpperBounds {
        makai: Entry::from_result(makai_bound(&qv, k), makai_prov),
        web,
        stability,
    };
    let ordering = check_ordering(&lower, &upper, reference.as_ref());
    Ok(BoundReport {
        schema: SCHEMA,
        body: body.describe(),
        n,
        k,
        quermass: qv.w.clone(),
        inradius: r,
        lower,
        upper,
        reference,
        ordering,
    })
}

/// Tolerance for comparing independently computed bounds.
const ORDER_RTOL: f64 = 1e-6;

fn check_ordering(
    lower: &Entry<LowerBound>,
    upper: &UpperBounds,
    reference: Option<&Entry<Reference>>,
) -> OrderingCheck {
    let mut uppers: Vec<(&str, f64)> = Vec::new();
    if let Some(v) = upper.makai.value {
        uppers.push(("makai", v));
    }
    if let Some(w) = &upper.web.value {
        uppers.push(("web", w.quotient));
    }
    if let Some(b) = upper.stability.value.as_ref().and_then(|s| s.bound) {
        uppers.push(("stability", b));
    }
    let mut violations = Vec::new();
    let le = |a: f64, b: f64, slack: f64| a <= b + ORDER_RTOL * a.abs().max(b.abs()) + slack;
    let lo = lower
        .value
        .as_ref()
        .filter(|l| !l.conditional)
        .map(|l| l.value);
    if let Some(lo) = lo {
        for (name, u) in &uppers {
            if !le(lo, *u, 0.0) {
                violations.push(format!("lower {lo} exceeds {name} {u}"));
            }
        }
    }
    if let Some(rf) = reference.and_then(|e| e.value.as_ref()) {
        let slack = 3.0 * rf.error_estimate;
        if let Some(lo) = lo {
            if !le(lo, rf.value, slack) {
                violations.push(format!("lower {lo} exceeds reference {}", rf.value));
            }
        }
        for (name, u) in &uppers {
            if !le(rf.value, *u, slack) {
                violations.push(format!("reference {} exceeds {name} {u}", rf.value));
            }
        }
    }
    OrderingCheck {
        holds: violations.is_empty(),
        violations,
    }
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "body,n,k,volume,perimeter,inradius,lower,conditional,reference,web,makai,stability,c_omega,gap,ordered"
    }

    /// One CSV row matching [`BoundReport::csv_header`]; missing entries are empty.
    pub fn csv_row(&self) -> String {
        let g = |x: Option<f64>| x.map(crate::fmt::g12).unwrap_or_default();
        let qv = QuermassVector {
            dim: self.n,
            w: self.quermass.clone(),
        };
        let st = self.upper.stability.value.as_ref();
        [
            format!("\"{}\"", self.body),
            self.n.to_string(),
            self.k.to_string(),
            g(Some(qv.volume())),
            g(Some(qv.perimeter())),
            g(Some(self.inradius)),
            g(self.lower.value.as_ref().map(|l| l.value)),
            self.lower
                .value
                .as_ref()
                .map(|l| l.conditional.to_string())
                .unwrap_or_default(),
            g(self
                .reference
                .as_ref()
                .and_then(|r| r.value.as_ref())
                .map(|r| r.value)),
            g(self.upper.web.value.as_ref().map(|w| w.quotient)),
            g(self.upper.makai.value),
            g(st.and_then(|s| s.bound)),
            g(st.map(|s| s.c_omega)),
            g(st.map(|s| s.gap)),
            self.ordering.holds.to_string(),
        ]
        .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polygon;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const J01: f64 = 2.404825557695773;

    fn square() -> ConvexBody {
        ConvexBody::Polygon(Polygon::rectangle(1.0, 1.0).unwrap())
    }

    #[test]
    fn makai_examples() {
        let qs = quermass(&square()).unwrap();
        assert_eq!(makai_bound(&qs, 1).unwrap(), 48.0);
        assert_relative_eq!(
            makai_bound(&qs, 2).unwrap(),
            4.0 * 256.0,
            max_relative = 1e-12
        );
        let qd = quermass(&ConvexBody::ball(2, 1.0).unwrap()).unwrap();
        assert_relative_eq!(makai_bound(&qd, 1).unwrap(), 12.0, max_relative = 1e-12);
        assert!(makai_bound(&qd, 3).is_err());
    }

    #[test]
    fn square_lower_and_stability() {
        let lo = faber_krahn_lower(&square(), 1).unwrap();
        assert!(!lo.conditional);
        assert_relative_eq!(lo.value, J01 * J01 * PI, max_relative = 1e-8);
        let st = stability_bound(&square(), 1).unwrap();
        assert_relative_eq!(st.radius, 2.0 / PI, max_relative = 1e-12);
        assert_relative_eq!(st.gap, 4.0 / PI - 1.0, max_relative = 1e-12);
        assert!((st.product - 0.797).abs() < 0.005, "{}", st.product);
        assert!(st.applicable);
    }

    #[test]
    fn conditional_flag() {
        let ball = ConvexBody::ball(3, 1.0).unwrap();
        assert!(faber_krahn_lower(&ball, 2).unwrap().conditional);
        assert!(!faber_krahn_lower(&ball, 3).unwrap().conditional);
        assert!(!faber_krahn_lower(&ball, 1).unwrap().conditional);
    }

    #[test]
    fn ball_equalities() {
        for (n, k) in [(2, 1), (2, 2), (3, 3)] {
            let ball = ConvexBody::ball(n, 1.3).unwrap();
            let lam = solve_ball_eigenvalue(n, k, 1.3).unwrap().lambda;
            let st = stability_bound(&ball, k).unwrap();
            assert!(st.gap.abs() < 1e-12);
            assert_relative_eq!(st.bound.unwrap(), lam, max_relative = 1e-9);
            assert_relative_eq!(
                faber_krahn_lower(&ball, k).unwrap().value,
                lam,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn inclusion_examples() {
        let c = inclusion_chain(&quermass(&square()).unwrap()).unwrap();
        assert!((c.radii[0] - 0.5642).abs() < 1e-4);
        assert_relative_eq!(c.radii[1], 2.0 / PI, max_relative = 1e-12);
        let b = inclusion_chain(&quermass(&ConvexBody::ball(3, 2.0).unwrap()).unwrap()).unwrap();
        assert!(b.spread.abs() < 1e-12);
        let bad = QuermassVector::new(2, vec![1.0, 1.0, PI]).unwrap();
        assert!(matches!(inclusion_chain(&bad), Err(Error::Geometry(_))));
    }

    #[test]
    fn newton_examples() {
        let id = newton_check(&[1.0, 1.0], 2).unwrap();
        assert!(id.k_convex && id.chain_nonincreasing);
        assert_eq!(id.chain.unwrap(), vec![1.0, 1.0]);
        let bad = newton_check(&[3.0, -1.0], 2).unwrap();
        assert!(!bad.k_convex);
        assert_eq!(bad.s[1], -3.0);
        let v = newton_check(&[2.0, 1.0, 1.0], 3).unwrap();
        let c = v.chain.unwrap();
        assert!(
            (c[0] - 1.3333).abs() < 1e-4
                && (c[1] - 1.2910).abs() < 1e-4
                && (c[2] - 1.2599).abs() < 1e-4
        );
        assert!(v.chain_nonincreasing);
    }

    #[test]
    fn disk_report_collapses() {
        let rep = report(
            &ConvexBody::ball(2, 1.0).unwrap(),
            1,
            &ReportOptions::default(),
        )
        .unwrap();
        let lam = J01 * J01;
        assert_relative_eq!(
            rep.lower.value.as_ref().unwrap().value,
            lam,
            max_relative = 1e-7
        );
        assert_relative_eq!(
            rep.reference
                .as_ref()
                .unwrap()
                .value
                .as_ref()
                .unwrap()
                .value,
            lam,
            max_relative = 1e-7
        );
        assert_relative_eq!(
            rep.upper.web.value.as_ref().unwrap().quotient,
            lam,
            max_relative = 1e-6
        );
        assert_relative_eq!(rep.upper.makai.value.unwrap(), 12.0, max_relative = 1e-12);
        assert!(rep.ordering.holds, "{:?}", rep.ordering);
        let json = rep.to_json();
        assert!(json.contains("\"schema\": \"hessbound/1\""));
    }

    #[test]
    fn square_report_is_ordered() {
        let rep = report(&square(), 1, &ReportOptions::default()).unwrap();
        assert!(rep.ordering.holds, "{:?}", rep.ordering);
        assert!((rep.lower.value.as_ref().unwrap().value - 18.17).abs() < 0.01);
        let rf = rep
            .reference
            .as_ref()
            .unwrap()
            .value
            .as_ref()
            .unwrap()
            .value;
        assert!((rf - 19.74).abs() < 0.02);
        assert!(rep.upper.web.value.as_ref().unwrap().quotient <= 24.0 * (1.0 + 1e-10));
        assert_eq!(rep.upper.makai.value, Some(48.0));
        assert_eq!(
            rep.csv_row().split(',').count(),
            BoundReport::csv_header().split(',').count()
        );
    }
}
