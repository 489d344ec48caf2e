//! Bounded convex polytopes in R^3 with matching vertex and half-space
//! representations.
//!
//! Both directions are computed by enumeration: facets of a point set are the
//! supporting planes through point triples, and vertices of a half-space
//! system are the feasible triple-plane intersections. This is cubic to
//! quartic in the input size, which is fine for the few dozen facets the
//! toolkit handles.

use nalgebra::{Matrix3, Point3, Vector3};

use crate::error::{Error, Result};

/// Half-space `normal · x <= offset` with unit `normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Vector3<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Index into [`Polytope::planes`].
    pub plane: usize,
    /// Vertex indices, counterclockwise seen from outside.
    pub vertices: Vec<usize>,
    pub area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// The two facet planes meeting along the edge.
    pub planes: (usize, usize),
    pub length: f64,
    /// Angle between the outward normals of the two facets.
    pub exterior_angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    vertices: Vec<Point3<f64>>,
    planes: Vec<Plane>,
    facets: Vec<Facet>,
    edges: Vec<Edge>,
    scale: f64,
}

fn tolerance(scale: f64) -> f64 {
    1e-9 * scale
}

fn dedup_points(points: &mut Vec<Point3<f64>>, tol: f64) {
    let mut out: Vec<Point3<f64>> = Vec::with_capacity(points.len());
    for p in points.iter() {
        if !out.iter().any(|q| (p - q).norm() <= tol) {
            out.push(*p);
        }
    }
    *points = out;
}

fn any_perpendicular(n: &Vector3<f64>) -> Vector3<f64> {
    let trial = if n.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    n.cross(&trial).normalize()
}

impl Polytope {
    /// Convex hull of a point set. The input must be full-dimensional; points
    /// that are not extreme are discarded.
    pub fn from_vertices(points: &[Point3<f64>]) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InvalidInput(format!(
                "a polytope needs at least 4 vertices, got {}",
                points.len()
            )));
        }
        if points
            .iter()
            .any(|p| !p.coords.iter().all(|c| c.is_finite()))
        {
            return Err(Error::InvalidInput("non-finite vertex coordinate".into()));
        }
        let mut scale: f64 = 0.0;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                scale = scale.max((points[i] - points[j]).norm());
            }
        }
        if scale <= 0.0 {
            return Err(Error::DegenerateBody("all vertices coincide".into()));
        }
        let tol = tolerance(scale);
        let mut pts = points.to_vec();
        dedup_points(&mut pts, tol);
        let n = pts.len();
        let mut planes: Vec<Plane> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let nrm = (pts[j] - pts[i]).cross(&(pts[k] - pts[i]));
                    if nrm.norm() <= 1e-10 * scale * scale {
                        continue;
                    }
                    let nrm = nrm.normalize();
                    let off = nrm.dot(&pts[i].coords);
                    let (mut lo, mut hi) = (0.0f64, 0.0f64);
                    for p in &pts {
                        let s = nrm.dot(&p.coords) - off;
                        lo = lo.min(s);
                        hi = hi.max(s);
                    }
                    let plane = if hi <= tol {
                        Plane {
                            normal: nrm,
                            offset: off,
                        }
                    } else if lo >= -tol {
                        Plane {
                            normal: -nrm,
                            offset: -off,
                        }
                    } else {
                        continue;
                    };
                    let dup = planes.iter().any(|q| {
                        (q.normal - plane.normal).norm() <= 1e-9
                            && (q.offset - plane.offset).abs() <= tol
                    });
                    if !dup {
                        planes.push(plane);
                    }
                }
            }
        }
        if planes.len() < 4 {
            return Err(Error::DegenerateBody(
                "point set is not full-dimensional".into(),
            ));
        }
        Self::from_half_spaces(&planes, scale)
    }

    /// Intersection of half-spaces. `scale` is a length representative of the
    /// body and fixes the geometric tolerance. Half-spaces that do not support
    /// a facet are dropped; the surviving ones keep their input index in
    /// [`Facet::plane`].
    pub fn from_half_spaces(planes: &[Plane], scale: f64) -> Result<Self> {
        let tol = tolerance(scale);
        let m = planes.len();
        let mut verts: Vec<Point3<f64>> = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let a = Matrix3::from_rows(&[
                        planes[i].normal.transpose(),
                        planes[j].normal.transpose(),
                        planes[k].normal.transpose(),
                    ]);
                    if a.determinant().abs() < 1e-12 {
                        continue;
                    }
                    let Some(inv) = a.try_inverse() else { continue };
                    let x =
                        inv * Vector3::new(planes[i].offset, planes[j].offset, planes[k].offset);
                    if planes.iter().all(|p| p.normal.dot(&x) <= p.offset + tol) {
                        verts.push(Point3::from(x));
                    }
                }
            }
        }
        dedup_points(&mut verts, 10.0 * tol);
        if verts.len() < 4 {
            return Err(Error::DegenerateBody(
                "half-space intersection has no interior".into(),
            ));
        }

        let mut facets = Vec::new();
        for (pi, pl) in planes.iter().enumerate() {
            let on: Vec<usize> = (0..verts.len())
                .filter(|&v| (pl.normal.dot(&verts[v].coords) - pl.offset).abs() <= 10.0 * tol)
                .collect();
            if on.len() < 3 {
                continue;
            }
            let c = on.iter().map(|&v| verts[v].coords).sum::<Vector3<f64>>() / on.len() as f64;
            let u = any_perpendicular(&pl.normal);
            let w = pl.normal.cross(&u);
            let mut ordered: Vec<(f64, usize)> = on
                .iter()
                .map(|&v| {
                    let d = verts[v].coords - c;
                    (d.dot(&w).atan2(d.dot(&u)), v)
                })
                .collect();
            ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
            let vs: Vec<usize> = ordered.into_iter().map(|x| x.1).collect();
            let mut area = 0.0;
            for i in 0..vs.len() {
                let p = verts[vs[i]].coords - c;
                let q = verts[vs[(i + 1) % vs.len()]].coords - c;
                area += 0.5 * p.cross(&q).dot(&pl.normal);
            }
            if area <= 1e-14 * scale * scale {
                continue;
            }
            facets.push(Facet {
                plane: pi,
                vertices: vs,
                area,
            });
        }
        // Coplanar duplicates in the input would produce the same facet twice.
        facets.dedup_by(|a, b| {
            a.vertices.len() == b.vertices.len() && {
                let mut x = a.vertices.clone();
                let mut y = b.vertices.clone();
                x.sort_unstable();
                y.sort_unstable();
                x == y
            }
        });
        if facets.len() < 4 {
            return Err(Error::DegenerateBody("fewer than 4 facets".into()));
        }

        let mut edges = Vec::new();
        for f in 0..facets.len() {
            for g in f + 1..facets.len() {
                let shared: Vec<usize> = facets[f]
                    .vertices
                    .iter()
                    .copied()
                    .filter(|v| facets[g].vertices.contains(v))
                    .collect();
                if shared.len() < 2 {
                    continue;
                }
                let (mut a, mut b, mut len) = (shared[0], shared[1], 0.0);
                for x in 0..shared.len() {
                    for y in x + 1..shared.len() {
                        let l = (verts[shared[x]] - verts[shared[y]]).norm();
                        if l > len {
                            (a, b, len) = (shared[x], shared[y], l);
                        }
                    }
                }
                if len <= 10.0 * tol {
                    continue;
                }
                let n1 = planes[facets[f].plane].normal;
                let n2 = planes[facets[g].plane].normal;
                edges.push(Edge {
                    a,
                    b,
                    planes: (facets[f].plane, facets[g].plane),
                    length: len,
                    exterior_angle: n1.dot(&n2).clamp(-1.0, 1.0).acos(),
                });
            }
        }
        let poly = Self {
            vertices: verts,
            planes: planes.to_vec(),
            facets,
            edges,
            scale,
        };
        // Euler characteristic of the boundary sphere.
        let chi = poly.vertices.len() as i64 - poly.edges.len() as i64 + poly.facets.len() as i64;
        if chi != 2 {
            return Err(Error::Geometry(format!(
                "inconsistent polytope combinatorics (V - E + F = {chi})"
            )));
        }
        if poly.volume() <= 1e-14 * scale.powi(3) {
            return Err(Error::DegenerateBody("polytope has zero volume".into()));
        }
        Ok(poly)
    }

    pub fn cube(side: f64) -> Result<Self> {
        let mut v = Vec::new();
        for &x in &[0.0, side] {
            for &y in &[0.0, side] {
                for &z in &[0.0, side] {
                    v.push(Point3::new(x, y, z));
                }
            }
        }
        Self::from_vertices(&v)
    }

    pub fn cuboid(a: f64, b: f64, c: f64) -> Result<Self> {
        let mut v = Vec::new();
        for &x in &[0.0, a] {
            for &y in &[0.0, b] {
                for &z in &[0.0, c] {
                    v.push(Point3::new(x, y, z));
                }
            }
        }
        Self::from_vertices(&v)
    }

    pub fn vertices(&self) -> &[Point3<f64>] {
        &self.vertices
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Facet planes only (the supporting half-spaces).
    pub fn facet_planes(&self) -> Vec<Plane> {
        self.facets.iter().map(|f| self.planes[f.plane]).collect()
    }

    pub fn volume(&self) -> f64 {
        let x0 = self.vertices.iter().map(|p| p.coords).sum::<Vector3<f64>>()
            / self.vertices.len() as f64;
        self.facets
            .iter()
            .map(|f| {
                let pl = &self.planes[f.plane];
                f.area * (pl.offset - pl.normal.dot(&x0)) / 3.0
            })
            .sum()
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    /// Integral of mean curvature `M = 1/2 sum_e length_e * exterior_angle_e`.
    pub fn mean_curvature_integral(&self) -> f64 {
        0.5 * self
            .edges
            .iter()
            .map(|e| e.length * e.exterior_angle)
            .sum::<f64>()
    }

    /// Combinatorial signature: sorted pairs of (input) plane indices that
    /// meet along an edge. Changes exactly when the face lattice changes.
    pub fn signature(&self) -> Vec<(usize, usize)> {
        let mut s: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| (e.planes.0.min(e.planes.1), e.planes.0.max(e.planes.1)))
            .collect();
        s.sort_unstable();
        s
    }

    pub fn contains(&self, p: &Point3<f64>) -> bool {
        self.facet_planes()
            .iter()
            .all(|pl| pl.normal.dot(&p.coords) < pl.offset)
    }

    /// Every facet plane shifted inward by `t`. `None` once nothing with
    /// interior remains.
    pub fn inward_offset(&self, t: f64) -> Option<Self> {
        let shifted: Vec<Plane> = self
            .facet_planes()
            .into_iter()
            .map(|p| Plane {
                normal: p.normal,
                offset: p.offset - t,
            })
            .collect();
        Self::from_half_spaces(&shifted, self.scale).ok()
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        let v: Vec<Point3<f64>> = self
            .vertices
            .iter()
            .map(|p| Point3::from(p.coords * s))
            .collect();
        Self::from_vertices(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cube_measures() {
        let c = Polytope::cube(1.0).unwrap();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.facets().len(), 6);
        assert_eq!(c.edges().len(), 12);
        assert_relative_eq!(c.volume(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(c.surface_area(), 6.0, max_relative = 1e-12);
        assert_relative_eq!(
            c.mean_curvature_integral(),
            3.0 * std::f64::consts::PI,
            max_relative = 1e-12
        );
    }

    #[test]
    fn interior_points_are_discarded() {
        let mut v: Vec<Point3<f64>> = Polytope::cube(2.0).unwrap().vertices().to_vec();
        v.push(Point3::new(1.0, 1.0, 1.0));
        v.push(Point3::new(1.0, 0.0, 1.0)); // on a face
        let p = Polytope::from_vertices(&v).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_relative_eq!(p.volume(), 8.0, max_relative = 1e-12);
    }

    #[test]
    fn tetrahedron() {
        let v = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        let t = Polytope::from_vertices(&v).unwrap();
        assert_eq!(t.facets().len(), 4);
        assert_eq!(t.edges().len(), 6);
        assert_relative_eq!(t.volume(), 1.0 / 6.0, max_relative = 1e-12);
        assert_relative_eq!(
            t.surface_area(),
            1.5 + 3f64.sqrt() / 2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn flat_input_rejected() {
        let v = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
        ];
        assert!(Polytope::from_vertices(&v).is_err());
    }

    #[test]
    fn cube_offset() {
        let c = Polytope::cube(1.0).unwrap();
        let o = c.inward_offset(0.25).unwrap();
        assert_relative_eq!(o.volume(), 0.125, max_relative = 1e-12);
        assert_eq!(o.signature(), c.signature());
        assert!(c.inward_offset(0.5).is_none());
    }

    #[test]
    fn vertices_satisfy_all_half_spaces() {
        let v = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(2.0, 0.1, 0.0),
            Point3::new(0.3, 1.5, 0.2),
            Point3::new(0.1, 0.2, 1.7),
            Point3::new(1.2, 1.1, 1.3),
        ];
        let p = Polytope::from_vertices(&v).unwrap();
        for x in p.vertices() {
            for pl in p.facet_planes() {
                assert!(pl.normal.dot(&x.coords) <= pl.offset + 1e-9);
            }
        }
    }
}
