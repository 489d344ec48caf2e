//! Convex bodies and their quermassintegrals.
//!
//! For a body `K` in `R^n` the Steiner polynomial reads
//! `|K + rho B_1| = sum_i C(n, i) W_i(K) rho^i`, so `W_0 = |K|`,
//! `n W_1 = P(K)` and `W_n = omega_n`. Polygons, polytopes and balls are
//! supported; smooth bodies are approximated by fine polygons.

mod polygon;
mod polytope;
mod random;
mod sweep;

pub use polygon::{HalfPlane, Polygon};
pub use polytope::{Edge, Facet, Plane, Polytope};
pub use random::{random_polygon, AspectBounds};
pub use sweep::{sweep, InnerParallelSweep, SweepSample};

use std::f64::consts::PI;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{Point2, Point3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lebesgue measure of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Binomial coefficient as a float (exact for the small arguments used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The domain: a convex polygon, a convex polytope in `R^3`, or a centered ball.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Polygon(Polygon),
    Polytope(Polytope),
    Ball { dim: usize, radius: f64 },
}

impl ConvexBody {
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput(format!(
                "ball dimension must be >= 2, got {dim}"
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self::Ball { dim, radius })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polygon(_) => 2,
            Self::Polytope(_) => 3,
            Self::Ball { dim, .. } => *dim,
        }
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidInput(format!(
                "scale factor must be positive, got {s}"
            )));
        }
        Ok(match self {
            Self::Polygon(p) => Self::Polygon(p.scaled(s)?),
            Self::Polytope(p) => Self::Polytope(p.scaled(s)?),
            Self::Ball { dim, radius } => Self::Ball {
                dim: *dim,
                radius: radius * s,
            },
        })
    }

    /// Short human-readable description used in reports.
    pub fn describe(&self) -> String {
        match self {
            Self::Polygon(p) => format!("polygon with {} vertices", p.len()),
            Self::Polytope(p) => format!(
                "polytope with {} vertices, {} facets",
                p.vertices().len(),
                p.facets().len()
            ),
            Self::Ball { dim, radius } => format!("ball in R^{dim} of radius {radius}"),
        }
    }
}

/// Values `W_0 .. W_n` of a body in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuermassVector {
    pub dim: usize,
    pub w: Vec<f64>,
}

impl QuermassVector {
    pub fn new(dim: usize, w: Vec<f64>) -> Result<Self> {
        if w.len() != dim + 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} quermassintegrals, got {}",
                dim + 1,
                w.len()
            )));
        }
        Ok(Self { dim, w })
    }

    pub fn omega(&self) -> f64 {
        unit_ball_volume(self.dim)
    }

    pub fn volume(&self) -> f64 {
        self.w[0]
    }

    pub fn perimeter(&self) -> f64 {
        self.dim as f64 * self.w[1]
    }

    /// Every entry positive and the last one equal to `omega_n`.
    pub fn is_valid(&self) -> bool {
        self.w.iter().all(|&x| x > 0.0)
            && (self.w[self.dim] - self.omega()).abs() <= 1e-12 * self.omega()
    }
}

/// Quermassintegrals of a body.
pub fn quermass(body: &ConvexBody) -> Result<QuermassVector> {
    match body {
        ConvexBody::Polygon(p) => {
            let a = p.area();
            if a <= 0.0 {
                return Err(Error::DegenerateBody("polygon has zero area".into()));
            }
            QuermassVector::new(2, vec![a, 0.5 * p.perimeter(), PI])
        }
        ConvexBody::Polytope(p) => {
            let v = p.volume();
            if v <= 0.0 {
                return Err(Error::DegenerateBody("polytope has zero volume".into()));
            }
            QuermassVector::new(
                3,
                vec![
                    v,
                    p.surface_area() / 3.0,
                    p.mean_curvature_integral() / 3.0,
                    4.0 * PI / 3.0,
                ],
            )
        }
        ConvexBody::Ball { dim, radius } => {
            let om = unit_ball_volume(*dim);
            QuermassVector::new(
                *dim,
                (0..=*dim)
                    .map(|i| om * radius.powi((*dim - i) as i32))
                    .collect(),
            )
        }
    }
}

/// One Aleksandrov–Fenchel comparison `(W_j/omega)^(1/(n-j)) - (W_i/omega)^(1/(n-i))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AfPair {
    pub i: usize,
    pub j: usize,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AfReport {
    pub pairs: Vec<AfPair>,
    pub tol: f64,
    pub violations: Vec<AfPair>,
}

impl AfReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All pairwise Aleksandrov–Fenchel differences for `0 <= i < j <= n - 1`.
/// A pair is flagged when its difference is below `-tol` times the larger radius.
pub fn af_check(qv: &QuermassVector, tol: f64) -> AfReport {
    let n = qv.dim;
    let radii: Vec<f64> = (0..n).map(|i| radius_of(qv, i)).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(AfPair {
                i,
                j,
                difference: radii[j] - radii[i],
            });
        }
    }
    let violations = pairs
        .iter()
        .copied()
        .filter(|p| p.difference < -tol * radii[p.j].max(radii[p.i]))
        .collect();
    AfReport {
        pairs,
        tol,
        violations,
    }
}

fn radius_of(qv: &QuermassVector, i: usize) -> f64 {
    (qv.w[i] / qv.omega()).powf(1.0 / (qv.dim - i) as f64)
}

/// Radius of the centered ball with the same `W_i` as the body.
pub fn equiv_ball_radius(qv: &QuermassVector, i: usize) -> Result<f64> {
    if i >= qv.dim {
        return Err(Error::InvalidInput(format!(
            "equivalent ball index must be < {}, got {i}",
            qv.dim
        )));
    }
    Ok(radius_of(qv, i))
}

/// Radius of the largest inscribed ball: the Chebyshev center linear program
/// `max r s.t. n_i . x + r <= c_i` over the facet half-spaces.
pub fn inradius(body: &ConvexBody) -> Result<f64> {
    match body {
        ConvexBody::Ball { radius, .. } => Ok(*radius),
        ConvexBody::Polygon(p) => {
            let rows: Vec<(Vec<f64>, f64)> = p
                .half_planes()
                .iter()
                .map(|h| (vec![h.normal.x, h.normal.y], h.offset))
                .collect();
            chebyshev_radius(&rows, 2)
        }
        ConvexBody::Polytope(p) => {
            let rows: Vec<(Vec<f64>, f64)> = p
                .facet_planes()
                .iter()
                .map(|h| (vec![h.normal.x, h.normal.y, h.normal.z], h.offset))
                .collect();
            chebyshev_radius(&rows, 3)
        }
    }
}

fn chebyshev_radius(rows: &[(Vec<f64>, f64)], dim: usize) -> Result<f64> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..dim)
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let r = lp.add_var(1.0, (0.0, f64::INFINITY));
    for (normal, offset) in rows {
        let mut expr: Vec<_> = xs.iter().zip(normal).map(|(&v, &c)| (v, c)).collect();
        expr.push((r, 1.0));
        lp.add_constraint(expr.as_slice(), ComparisonOp::Le, *offset);
    }
    let sol = lp
        .solve()
        .map_err(|e| Error::LinearProgram(e.to_string()))?;
    let radius = sol[r];
    if !(radius > 0.0) {
        return Err(Error::LinearProgram(format!(
            "non-positive inradius {radius}"
        )));
    }
    Ok(radius)
}

/// The inner parallel body `{x : d(x, boundary) > t}`.
pub fn inner_parallel(body: &ConvexBody, t: f64) -> Result<ConvexBody> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "offset must be nonnegative, got {t}"
        )));
    }
    let empty = || -> Error {
        Error::EmptyBody {
            offset: t,
            inradius: inradius(body).unwrap_or(f64::NAN),
        }
    };
    match body {
        ConvexBody::Ball { dim, radius } => {
            if t >= *radius {
                Err(empty())
            } else {
                Ok(ConvexBody::Ball {
                    dim: *dim,
                    radius: radius - t,
                })
            }
        }
        ConvexBody::Polygon(p) => p
            .inward_offset(t)
            .map(ConvexBody::Polygon)
            .ok_or_else(empty),
        ConvexBody::Polytope(p) => p
            .inward_offset(t)
            .map(ConvexBody::Polytope)
            .ok_or_else(empty),
    }
}

/// Volume of the outer parallel body `K + rho B_1`, assembled from the
/// boundary decomposition (slabs over facets, wedges over edges, sectors at
/// vertices) rather than from the quermass vector.
pub fn steiner_outer(body: &ConvexBody, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!(
            "outer radius must be nonnegative, got {rho}"
        )));
    }
    Ok(match body {
        ConvexBody::Ball { dim, radius } => {
            unit_ball_volume(*dim) * (radius + rho).powi(*dim as i32)
        }
        ConvexBody::Polygon(p) => {
            let sectors: f64 = p.exterior_angles().iter().sum::<f64>() * 0.5 * rho * rho;
            p.area() + p.perimeter() * rho + sectors
        }
        ConvexBody::Polytope(p) => {
            let wedges: f64 = p
                .edges()
                .iter()
                .map(|e| e.length * e.exterior_angle)
                .sum::<f64>()
                * 0.5
                * rho
                * rho;
            p.volume() + p.surface_area() * rho + wedges + 4.0 * PI / 3.0 * rho.powi(3)
        }
    })
}

/// Steiner polynomial `sum_i C(n, i) W_i rho^i` evaluated from a quermass vector.
pub fn steiner_polynomial(qv: &QuermassVector, rho: f64) -> f64 {
    (0..=qv.dim)
        .map(|i| binomial(qv.dim, i) * qv.w[i] * rho.powi(i as i32))
        .sum()
}

/// JSON form of a body:
/// `{"type":"polygon","vertices":[[x,y],..]}`,
/// `{"type":"polytope","vertices":[[x,y,z],..]}`,
/// `{"type":"ball","dim":n,"radius":R}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Polygon { vertices: Vec<[f64; 2]> },
    Polytope { vertices: Vec<[f64; 3]> },
    Ball { dim: usize, radius: f64 },
}

impl TryFrom<BodySpec> for ConvexBody {
    type Error = Error;

    fn try_from(spec: BodySpec) -> Result<Self> {
        match spec {
            BodySpec::Polygon { vertices } => Ok(ConvexBody::Polygon(Polygon::new(
                vertices
                    .into_iter()
                    .map(|[x, y]| Point2::new(x, y))
                    .collect(),
            )?)),
            BodySpec::Polytope { vertices } => {
                let pts: Vec<Point3<f64>> = vertices
                    .into_iter()
                    .map(|[x, y, z]| Point3::new(x, y, z))
                    .collect();
                let p = Polytope::from_vertices(&pts)?;
                if p.vertices().len() != pts.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} of the {} polytope vertices are not extreme points",
                        pts.len() - p.vertices().len(),
                        pts.len()
                    )));
                }
                Ok(ConvexBody::Polytope(p))
            }
            BodySpec::Ball { dim, radius } => ConvexBody::ball(dim, radius),
        }
    }
}

impl From<&ConvexBody> for BodySpec {
    fn from(body: &ConvexBody) -> Self {
        match body {
            ConvexBody::Polygon(p) => BodySpec::Polygon {
                vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect(),
            },
            ConvexBody::Polytope(p) => BodySpec::Polytope {
                vertices: p.vertices().iter().map(|v| [v.x, v.y, v.z]).collect(),
            },
            ConvexBody::Ball { dim, radius } => BodySpec::Ball {
                dim: *dim,
                radius: *radius,
            },
        }
    }
}

/// Parses a body from its JSON form.
pub fn body_from_json(text: &str) -> Result<ConvexBody> {
    let spec: BodySpec =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("body JSON: {e}")))?;
    spec.try_into()
}

pub fn body_to_json(body: &ConvexBody) -> String {
    serde_json::to_string(&BodySpec::from(body)).expect("body spec serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square() -> ConvexBody {
        ConvexBody::Polygon(Polygon::rectangle(1.0, 1.0).unwrap())
    }

    fn triangle() -> ConvexBody {
        ConvexBody::Polygon(
            Polygon::new(vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn unit_ball_volumes() {
        assert_relative_eq!(unit_ball_volume(2), PI);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0);
        assert_relative_eq!(unit_ball_volume(4), PI * PI / 2.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(2, 3), 0.0);
    }

    #[test]
    fn quermass_examples() {
        let d = quermass(&ConvexBody::ball(2, 1.0).unwrap()).unwrap();
        for w in &d.w {
            assert_relative_eq!(*w, PI);
        }
        let s = quermass(&square()).unwrap();
        assert_eq!(s.w, vec![1.0, 2.0, PI]);
        let c = quermass(&ConvexBody::Polytope(Polytope::cube(1.0).unwrap())).unwrap();
        assert_relative_eq!(c.w[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(c.w[1], 2.0, max_relative = 1e-12);
        assert_relative_eq!(c.w[2], PI, max_relative = 1e-12);
        assert_relative_eq!(c.w[3], 4.0 * PI / 3.0);
        assert!(c.is_valid());
    }

    #[test]
    fn af_examples() {
        let d = af_check(
            &quermass(&ConvexBody::ball(2, 1.0).unwrap()).unwrap(),
            1e-12,
        );
        assert!(d.holds());
        assert!(d.pairs.iter().all(|p| p.difference.abs() < 1e-14));
        let s = af_check(&quermass(&square()).unwrap(), 1e-12);
        assert_eq!(s.pairs.len(), 1);
        assert_relative_eq!(
            s.pairs[0].difference,
            2.0 / PI - (1.0 / PI).sqrt(),
            max_relative = 1e-14
        );
        assert!((s.pairs[0].difference - 0.072_430_188).abs() < 1e-8);
        let b4 = af_check(
            &quermass(&ConvexBody::ball(4, 0.7).unwrap()).unwrap(),
            1e-12,
        );
        assert_eq!(b4.pairs.len(), 6);
        assert!(b4.holds());
    }

    #[test]
    fn af_flags_a_corrupted_vector() {
        let qv = QuermassVector::new(2, vec![1.0, 1.0, PI]).unwrap(); // perimeter below isoperimetric
        assert!(!af_check(&qv, 1e-9).holds());
    }

    #[test]
    fn equivalent_radii() {
        let s = quermass(&square()).unwrap();
        assert_relative_eq!(equiv_ball_radius(&s, 0).unwrap(), (1.0 / PI).sqrt());
        assert_relative_eq!(equiv_ball_radius(&s, 1).unwrap(), 2.0 / PI);
        assert!(equiv_ball_radius(&s, 2).is_err());
        let b = quermass(&ConvexBody::ball(3, 1.7).unwrap()).unwrap();
        for i in 0..3 {
            assert_relative_eq!(equiv_ball_radius(&b, i).unwrap(), 1.7, max_relative = 1e-14);
        }
    }

    #[test]
    fn inradius_examples() {
        assert_relative_eq!(inradius(&square()).unwrap(), 0.5, max_relative = 1e-12);
        assert_eq!(inradius(&ConvexBody::ball(3, 2.0).unwrap()).unwrap(), 2.0);
        // oracle: r = area / semiperimeter
        let t = triangle();
        let q = quermass(&t).unwrap();
        let oracle = q.w[0] / q.w[1];
        assert_relative_eq!(oracle, (2.0 - 2f64.sqrt()) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(inradius(&t).unwrap(), oracle, max_relative = 1e-10);
        let cube = ConvexBody::Polytope(Polytope::cuboid(1.0, 2.0, 3.0).unwrap());
        assert_relative_eq!(inradius(&cube).unwrap(), 0.5, max_relative = 1e-10);
    }

    #[test]
    fn inner_parallel_examples() {
        let s = inner_parallel(&square(), 0.25).unwrap();
        let q = quermass(&s).unwrap();
        assert_relative_eq!(q.w[0], 0.25, max_relative = 1e-13);
        assert_relative_eq!(q.perimeter(), 2.0, max_relative = 1e-13);
        match inner_parallel(&ConvexBody::ball(2, 1.0).unwrap(), 0.3).unwrap() {
            ConvexBody::Ball { radius, .. } => assert_relative_eq!(radius, 0.7),
            _ => unreachable!(),
        }
        let t = triangle();
        let ConvexBody::Polygon(tp) = &t else {
            unreachable!()
        };
        let off = inner_parallel(&t, 0.1).unwrap();
        let expect = tp.perimeter() - 2.0 * 0.1 * tp.cot_half_sum();
        assert_relative_eq!(
            quermass(&off).unwrap().perimeter(),
            expect,
            max_relative = 1e-13
        );
        assert!(matches!(
            inner_parallel(&square(), 0.5),
            Err(Error::EmptyBody { .. })
        ));
        assert!(matches!(
            inner_parallel(&square(), -0.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn steiner_outer_examples() {
        assert_relative_eq!(
            steiner_outer(&square(), 1.0).unwrap(),
            5.0 + PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            steiner_outer(&ConvexBody::ball(2, 1.0).unwrap(), 1.0).unwrap(),
            4.0 * PI,
            max_relative = 1e-14
        );
        let cube = ConvexBody::Polytope(Polytope::cube(1.0).unwrap());
        let q = quermass(&cube).unwrap();
        // 1 + 3*2*0.5 + 3*pi*0.25 + (4pi/3)*0.125
        let expect = 1.0 + 3.0 + 0.75 * PI + PI / 6.0;
        assert_relative_eq!(
            steiner_outer(&cube, 0.5).unwrap(),
            expect,
            max_relative = 1e-12
        );
        assert_relative_eq!(steiner_polynomial(&q, 0.5), expect, max_relative = 1e-12);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let b =
            body_from_json(r#"{"type":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        assert_eq!(b, square());
        let back = body_from_json(&body_to_json(&b)).unwrap();
        assert_eq!(back, b);
        let ball = body_from_json(r#"{"type":"ball","dim":3,"radius":2.5}"#).unwrap();
        assert_eq!(
            ball,
            ConvexBody::Ball {
                dim: 3,
                radius: 2.5
            }
        );
        assert!(body_from_json(r#"{"type":"ball","dim":1,"radius":2.5}"#).is_err());
        assert!(body_from_json(r#"{"type":"blob"}"#)
            .unwrap_err()
            .is_input_error());
        assert!(body_from_json("not json").is_err());
        let cube = body_from_json(
            r#"{"type":"polytope","vertices":[[0,0,0],[1,0,0],[0,1,0],[1,1,0],[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#,
        )
        .unwrap();
        assert_eq!(cube.dim(), 3);
    }
}
