//! Convex polygons in the plane.
//!
//! Vertices are stored counterclockwise. Every edge `i` runs from vertex `i`
//! to vertex `i + 1` and defines the closed half-plane `n_i · x <= c_i` with
//! `n_i` the unit outward normal.

use nalgebra::{Point2, Vector2};

use crate::error::{Error, Result};

/// Collinearity threshold on cross products after normalizing to unit diameter.
pub const COLLINEAR_EPS: f64 = 1e-12;

/// Half-plane `normal · x <= offset` with unit `normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub normal: Vector2<f64>,
    pub offset: f64,
}

impl HalfPlane {
    #[inline]
    pub fn signed_distance(&self, p: &Point2<f64>) -> f64 {
        self.normal.dot(&p.coords) - self.offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2<f64>>,
}

fn cross(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

fn signed_area(v: &[Point2<f64>]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = v[i];
        let q = v[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    0.5 * s
}

fn diameter(v: &[Point2<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            d = d.max((v[i] - v[j]).norm());
        }
    }
    d
}

impl Polygon {
    /// Builds a polygon from an ordered vertex list. Clockwise input is
    /// reversed; anything that is not strictly convex is rejected.
    pub fn new(vertices: Vec<Point2<f64>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "a polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices
            .iter()
            .any(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(Error::InvalidInput("non-finite vertex coordinate".into()));
        }
        let mut vertices = vertices;
        let diam = diameter(&vertices);
        if diam <= 0.0 {
            return Err(Error::DegenerateBody("all vertices coincide".into()));
        }
        let area = signed_area(&vertices);
        if area.abs() <= COLLINEAR_EPS * diam * diam {
            return Err(Error::DegenerateBody("polygon has zero area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let a = (vertices[(i + 1) % n] - vertices[i]) / diam;
            let b = (vertices[(i + 2) % n] - vertices[(i + 1) % n]) / diam;
            if cross(&a, &b) <= COLLINEAR_EPS {
                return Err(Error::InvalidInput(format!(
                    "polygon is not strictly convex at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        // A strictly left-turning closed chain can still wind twice.
        let turning: f64 = (0..n)
            .map(|i| {
                let a = vertices[(i + 1) % n] - vertices[i];
                let b = vertices[(i + 2) % n] - vertices[(i + 1) % n];
                cross(&a, &b).atan2(a.dot(&b))
            })
            .sum();
        if (turning - 2.0 * std::f64::consts::PI).abs() > 1e-6 {
            return Err(Error::InvalidInput(
                "polygon boundary winds more than once".into(),
            ));
        }
        Ok(Self { vertices })
    }

    /// Convex hull of a point cloud (Andrew's monotone chain), collinear points dropped.
    pub fn hull(points: &[Point2<f64>]) -> Result<Self> {
        let mut pts: Vec<Point2<f64>> = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::DegenerateBody("fewer than 3 distinct points".into()));
        }
        let diam = diameter(&pts);
        let turn = |o: &Point2<f64>, a: &Point2<f64>, b: &Point2<f64>| {
            cross(&((a - o) / diam), &((b - o) / diam))
        };
        let mut lower: Vec<Point2<f64>> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= COLLINEAR_EPS
            {
                lower.pop();
            }
            lower.push(*p);
        }
        let mut upper: Vec<Point2<f64>> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= COLLINEAR_EPS
            {
                upper.pop();
            }
            upper.push(*p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::new(lower)
    }

    /// Regular `n`-gon inscribed in the circle of radius `r` about the origin.
    pub fn regular(n: usize, r: f64) -> Result<Self> {
        let verts = (0..n)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Point2::new(r * a.cos(), r * a.sin())
            })
            .collect();
        Self::new(verts)
    }

    /// Axis-aligned rectangle `[0, w] x [0, h]`.
    pub fn rectangle(w: f64, h: f64) -> Result<Self> {
        Self::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(w, 0.0),
            Point2::new(w, h),
            Point2::new(0.0, h),
        ])
    }

    pub fn vertices(&self) -> &[Point2<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.vertices)
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm())
            .collect()
    }

    /// Interior angle at every vertex, in `(0, pi)`.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let prev = self.vertices[(i + n - 1) % n];
                let cur = self.vertices[i];
                let next = self.vertices[(i + 1) % n];
                let a = prev - cur;
                let b = next - cur;
                cross(&b, &a).atan2(a.dot(&b))
            })
            .collect()
    }

    /// Exterior (turning) angles; they sum to `2 pi`.
    pub fn exterior_angles(&self) -> Vec<f64> {
        self.interior_angles()
            .iter()
            .map(|t| std::f64::consts::PI - t)
            .collect()
    }

    /// `sum_i cot(theta_i / 2)` over interior angles. Controls how fast the
    /// inner parallel polygon loses area and perimeter.
    pub fn cot_half_sum(&self) -> f64 {
        self.interior_angles()
            .iter()
            .map(|t| 1.0 / (0.5 * t).tan())
            .sum()
    }

    pub fn half_planes(&self) -> Vec<HalfPlane> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let p = self.vertices[i];
                let e = self.vertices[(i + 1) % n] - p;
                let normal = Vector2::new(e.y, -e.x).normalize();
                HalfPlane {
                    normal,
                    offset: normal.dot(&p.coords),
                }
            })
            .collect()
    }

    pub fn centroid(&self) -> Point2<f64> {
        let n = self.len();
        let mut c = Vector2::zeros();
        let mut a = 0.0;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p.x * q.y - q.x * p.y;
            a += w;
            c += (p.coords + q.coords) * w;
        }
        Point2::from(c / (3.0 * a))
    }

    pub fn contains(&self, p: &Point2<f64>) -> bool {
        self.half_planes()
            .iter()
            .all(|h| h.signed_distance(p) < 0.0)
    }

    /// Euclidean distance from `p` to the boundary (`p` may lie anywhere).
    pub fn boundary_distance(&self, p: &Point2<f64>) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                let ab = b - a;
                let s = ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
                (p - (a + ab * s)).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(
            self.vertices
                .iter()
                .map(|p| Point2::from(p.coords * s))
                .collect(),
        )
    }

    pub fn translated(&self, v: Vector2<f64>) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| p + v).collect(),
        }
    }

    /// Intersection of the polygon with all of its half-planes shifted inward by `t`.
    ///
    /// Returns `None` when the result has no interior. Edges shorter than
    /// `1e-9 * diameter` are merged away, which removes the zero-length edges
    /// left behind exactly at vanishing events.
    pub fn inward_offset(&self, t: f64) -> Option<Self> {
        let diam = self.diameter();
        let mut poly: Vec<Point2<f64>> = self.vertices.clone();
        for hp in self.half_planes() {
            let off = hp.offset - t;
            poly = clip(&poly, &hp.normal, off);
            if poly.len() < 3 {
                return None;
            }
        }
        let cleaned = clean(poly, 1e-9 * diam);
        if cleaned.len() < 3 {
            return None;
        }
        if signed_area(&cleaned) <= 1e-14 * diam * diam {
            return None;
        }
        Self::new(cleaned).ok()
    }
}

fn clip(poly: &[Point2<f64>], normal: &Vector2<f64>, offset: f64) -> Vec<Point2<f64>> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let dp = normal.dot(&p.coords) - offset;
        let dq = normal.dot(&q.coords) - offset;
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let s = dp / (dp - dq);
            out.push(p + (q - p) * s);
        }
    }
    out
}

fn clean(mut v: Vec<Point2<f64>>, tol: f64) -> Vec<Point2<f64>> {
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let mut changed = false;
        // drop near-duplicate neighbours
        let mut out: Vec<Point2<f64>> = Vec::with_capacity(n);
        for p in v.iter() {
            if out
                .last()
                .is_none_or(|q: &Point2<f64>| (p - q).norm() > tol)
            {
                out.push(*p);
            } else {
                changed = true;
            }
        }
        while out.len() > 1 && (out[0] - out[out.len() - 1]).norm() <= tol {
            out.pop();
            changed = true;
        }
        // drop collinear middles
        let m = out.len();
        if m >= 3 {
            let mut keep = Vec::with_capacity(m);
            for i in 0..m {
                let a = out[(i + m - 1) % m];
                let b = out[i];
                let c = out[(i + 1) % m];
                let ab = b - a;
                let bc = c - b;
                if cross(&ab, &bc) <= COLLINEAR_EPS * ab.norm() * bc.norm() {
                    changed = true;
                } else {
                    keep.push(b);
                }
            }
            out = keep;
        }
        v = out;
        if !changed {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tri() -> Polygon {
        Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let p = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(p.area() > 0.0);
    }

    #[test]
    fn rejects_collinear_and_reflex() {
        let col = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.5, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ]);
        assert!(col.is_err());
        let reflex = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, 0.3),
            Point2::new(2.0, 2.0),
            Point2::new(0.0, 2.0),
        ]);
        assert!(reflex.is_err());
        assert!(Polygon::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.5, 0.5),
        ];
        let h = Polygon::hull(&pts).unwrap();
        assert_eq!(h.len(), 4);
        assert_relative_eq!(h.area(), 1.0);
    }

    #[test]
    fn triangle_offset_matches_cotangent_formula() {
        let p = tri();
        let t = 0.1;
        let off = p.inward_offset(t).unwrap();
        let expect_p = p.perimeter() - 2.0 * t * p.cot_half_sum();
        let expect_a = p.area() - p.perimeter() * t + p.cot_half_sum() * t * t;
        assert_relative_eq!(off.perimeter(), expect_p, max_relative = 1e-13);
        assert_relative_eq!(off.area(), expect_a, max_relative = 1e-13);
        assert_eq!(off.len(), 3);
    }

    #[test]
    fn offset_beyond_inradius_is_empty() {
        let sq = Polygon::rectangle(1.0, 1.0).unwrap();
        assert!(sq.inward_offset(0.5).is_none());
        assert!(sq.inward_offset(0.7).is_none());
        let q = sq.inward_offset(0.25).unwrap();
        assert_relative_eq!(q.area(), 0.25, max_relative = 1e-14);
    }

    #[test]
    fn exterior_angles_sum_to_two_pi() {
        let p = Polygon::regular(7, 1.3).unwrap();
        let s: f64 = p.exterior_angles().iter().sum();
        assert_relative_eq!(s, 2.0 * std::f64::consts::PI, max_relative = 1e-14);
    }

    #[test]
    fn boundary_distance_square() {
        let sq = Polygon::rectangle(1.0, 1.0).unwrap();
        assert_relative_eq!(sq.boundary_distance(&Point2::new(0.5, 0.5)), 0.5);
        assert_relative_eq!(
            sq.boundary_distance(&Point2::new(0.1, 0.3)),
            0.1,
            max_relative = 1e-14
        );
    }
}
