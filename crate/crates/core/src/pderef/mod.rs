//! Finite-difference reference computations on convex polygons: the viscous
//! approximation of the distance function and a Dirichlet Laplacian
//! eigenvalue oracle.
//!
//! Unknowns live on the nodes of a uniform grid that lie strictly inside
//! the polygon. Arms of the five-point stencil that leave the polygon are
//! shortened to the boundary (Shortley–Weller), which keeps the operator
//! second order and an M-matrix, at the price of symmetry.

mod linalg;

use nalgebra::{Point2, Vector2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, HalfPlane, Polygon};
use linalg::{bicgstab, dot, norm, Row, SparseMatrix};

/// Nodes closer than this fraction of `h` to the boundary count as boundary.
const BOUNDARY_FRACTION: f64 = 1e-6;
const SOLVE_RTOL: f64 = 1e-13;
const MAX_KRYLOV: usize = 50_000;
const MAX_POWER: usize = 500;

/// East, west, north, south.
const DIRS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

#[derive(Debug, Clone, PartialEq)]
pub struct GridDomain {
    polygon: Polygon,
    planes: Vec<HalfPlane>,
    h: f64,
    origin: Point2<f64>,
    /// Nodes per axis are `nx + 1` and `ny + 1`.
    nx: usize,
    ny: usize,
    /// Grid position -> unknown index.
    index: Vec<Option<usize>>,
    /// Unknown index -> grid position.
    nodes: Vec<(usize, usize)>,
    /// Stencil arm lengths as fractions of `h` (E, W, N, S); 1 for an
    /// interior neighbor, less when the arm is cut by the boundary.
    arms: Vec<[f64; 4]>,
    /// Interior nodes discarded because they were disconnected from the rest.
    dropped: usize,
}

fn largest_component(nodes: &[(usize, usize)], index: &[Option<usize>], nx: usize) -> Vec<bool> {
    let ny = index.len() / (nx + 1) - 1;
    let mut label = vec![usize::MAX; nodes.len()];
    let mut sizes = Vec::new();
    for start in 0..nodes.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        label[start] = id;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            let (i, j) = nodes[u];
            for &(di, dj) in &DIRS {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a < 0 || b < 0 || a > nx as i64 || b > ny as i64 {
                    continue;
                }
                if let Some(v) = index[b as usize * (nx + 1) + a as usize] {
                    if label[v] == usize::MAX {
                        label[v] = id;
                        stack.push(v);
                    }
                }
            }
        }
        sizes.push(size);
    }
    let best = (0..sizes.len()).max_by_key(|&i| sizes[i]).unwrap_or(0);
    label.iter().map(|&l| l == best).collect()
}

impl GridDomain {
    pub fn new(polygon: &Polygon, h: f64) -> Result<Self> {
        Self::with_shift(polygon, h, [0.0, 0.0])
    }

    /// Grid whose origin is moved by `-shift * h` from the bounding-box
    /// corner, `shift` in `[0, 1)^2`.
    pub fn with_shift(polygon: &Polygon, h: f64, shift: [f64; 2]) -> Result<Self> {
        if !shift.iter().all(|s| (0.0..1.0).contains(s)) {
            return Err(Error::InvalidInput(format!(
                "grid shift must lie in [0, 1), got {shift:?}"
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "grid spacing must be positive, got {h}"
            )));
        }
        let v = polygon.vertices();
        let (mut lo, mut hi) = (v[0], v[0]);
        for p in v {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let lo = Point2::new(lo.x - shift[0] * h, lo.y - shift[1] * h);
        let nx = ((hi.x - lo.x) / h - 1e-9).ceil().max(1.0) as usize;
        let ny = ((hi.y - lo.y) / h - 1e-9).ceil().max(1.0) as usize;
        if (nx + 1) * (ny + 1) > 50_000_000 {
            return Err(Error::InvalidInput(format!(
                "grid spacing {h} is too fine for this body"
            )));
        }
        let planes = polygon.half_planes();
        let depth = |p: &Point2<f64>| {
            planes
                .iter()
                .map(|hp| -hp.signed_distance(p))
                .fold(f64::INFINITY, f64::min)
        };

        let mut index: Vec<Option<usize>> = vec![None; (nx + 1) * (ny + 1)];
        let mut nodes = Vec::new();
        for j in 0..=ny {
            for i in 0..=nx {
                let p = Point2::new(lo.x + i as f64 * h, lo.y + j as f64 * h);
                if depth(&p) > BOUNDARY_FRACTION * h {
                    index[j * (nx + 1) + i] = Some(nodes.len());
                    nodes.push((i, j));
                }
            }
        }
        if nodes.is_empty() {
            return Err(Error::InvalidInput(format!(
                "grid spacing {h} leaves no interior nodes"
            )));
        }

        // Near a sharp vertex a few nodes can be cut off from the rest of
        // the grid. They cannot be neighbors of the main component, so
        // dropping them leaves every remaining stencil unchanged.
        let keep = largest_component(&nodes, &index, nx);
        let dropped = nodes.len() - keep.iter().filter(|&&k| k).count();
        if dropped > 0 {
            let old = std::mem::take(&mut nodes);
            index.iter_mut().for_each(|x| *x = None);
            for (u, ij) in old.into_iter().enumerate() {
                if keep[u] {
                    index[ij.1 * (nx + 1) + ij.0] = Some(nodes.len());
                    nodes.push(ij);
                }
            }
        }

        let mut dom = Self {
            polygon: polygon.clone(),
            planes,
            h,
            origin: lo,
            nx,
            ny,
            index,
            nodes,
            arms: Vec::new(),
            dropped,
        };
        dom.arms = (0..dom.nodes.len())
            .map(|u| {
                let (i, j) = dom.nodes[u];
                let p = dom.point(i, j);
                let mut a = [1.0; 4];
                for (d, &(di, dj)) in DIRS.iter().enumerate() {
                    if dom.neighbor(i, j, di, dj).is_none() {
                        a[d] = (dom.ray_to_boundary(&p, Vector2::new(di as f64, dj as f64)) / h)
                            .clamp(1e-12, 1.0);
                    }
                }
                a
            })
            .collect();
        Ok(dom)
    }

    pub fn from_body(body: &ConvexBody, h: f64) -> Result<Self> {
        match body {
            ConvexBody::Polygon(p) => Self::new(p, h),
            other => Err(Error::InvalidInput(format!(
                "finite-difference references need a polygon, got {}",
                other.describe()
            ))),
        }
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of interior nodes dropped as disconnected from the main grid.
    pub fn dropped_nodes(&self) -> usize {
        self.dropped
    }

    pub fn point(&self, i: usize, j: usize) -> Point2<f64> {
        Point2::new(
            self.origin.x + i as f64 * self.h,
            self.origin.y + j as f64 * self.h,
        )
    }

    fn neighbor(&self, i: usize, j: usize, di: i64, dj: i64) -> Option<usize> {
        let (a, b) = (i as i64 + di, j as i64 + dj);
        if a < 0 || b < 0 || a > self.nx as i64 || b > self.ny as i64 {
            return None;
        }
        self.index[b as usize * (self.nx + 1) + a as usize]
    }

    fn ray_to_boundary(&self, p: &Point2<f64>, e: Vector2<f64>) -> f64 {
        self.planes
            .iter()
            .filter(|hp| hp.normal.dot(&e) > 1e-15)
            .map(|hp| -hp.signed_distance(p) / hp.normal.dot(&e))
            .fold(f64::INFINITY, f64::min)
    }

    /// `-Delta_h` on the unknowns, and for each row the total weight of its
    /// boundary arms (multiply by the boundary value to get the load).
    fn neg_laplacian(&self) -> (SparseMatrix, Vec<f64>) {
        let h = self.h;
        let mut rows = Vec::with_capacity(self.nodes.len());
        let mut load = Vec::with_capacity(self.nodes.len());
        for (u, &(i, j)) in self.nodes.iter().enumerate() {
            let arm = self.arms[u];
            let mut diag = 0.0;
            let mut off = Vec::with_capacity(4);
            let mut bnd = 0.0;
            for axis in 0..2 {
                let (a, b) = (arm[2 * axis] * h, arm[2 * axis + 1] * h);
                diag += 2.0 / (a * b);
                for (side, len) in [(2 * axis, a), (2 * axis + 1, b)] {
                    let c = 2.0 / (len * (a + b));
                    let (di, dj) = DIRS[side];
                    match self.neighbor(i, j, di, dj) {
                        Some(v) if arm[side] == 1.0 => off.push((v, -c)),
                        _ => bnd += c,
                    }
                }
            }
            rows.push(Row { diag, off });
            load.push(bnd);
        }
        (SparseMatrix { rows }, load)
    }

    fn empty_function(&self) -> GridFunction {
        let mut mask = vec![false; (self.nx + 1) * (self.ny + 1)];
        for &(i, j) in &self.nodes {
            mask[j * (self.nx + 1) + i] = true;
        }
        GridFunction {
            h: self.h,
            origin: [self.origin.x, self.origin.y],
            nx: self.nx,
            ny: self.ny,
            mask,
            values: vec![0.0; (self.nx + 1) * (self.ny + 1)],
        }
    }

    fn function_from(&self, unknowns: &[f64]) -> GridFunction {
        let mut f = self.empty_function();
        for (u, &(i, j)) in self.nodes.iter().enumerate() {
            f.values[j * (self.nx + 1) + i] = unknowns[u];
        }
        f
    }

    fn unknowns_of(&self, f: &GridFunction) -> Vec<f64> {
        self.nodes.iter().map(|&(i, j)| f.get(i, j)).collect()
    }

    /// Stencil values along one axis: `(u_minus, a_minus, u, a_plus, u_plus)`
    /// with arm lengths in absolute units; cut arms see `boundary`.
    fn axis_values(
        &self,
        f: &GridFunction,
        u: usize,
        axis: usize,
        boundary: f64,
    ) -> (f64, f64, f64, f64, f64) {
        let (i, j) = self.nodes[u];
        let arm = self.arms[u];
        let val = |side: usize| {
            let (di, dj) = DIRS[side];
            match self.neighbor(i, j, di, dj) {
                Some(v) if arm[side] == 1.0 => {
                    let (a, b) = self.nodes[v];
                    f.get(a, b)
                }
                _ => boundary,
            }
        };
        (
            val(2 * axis + 1),
            arm[2 * axis + 1] * self.h,
            f.get(i, j),
            arm[2 * axis] * self.h,
            val(2 * axis),
        )
    }

    /// Second-order gradient magnitude at every unknown (nonuniform
    /// central differences next to the boundary).
    pub fn gradient_norm(&self, f: &GridFunction, boundary: f64) -> GridFunction {
        let vals: Vec<f64> = (0..self.nodes.len())
            .map(|u| {
                let mut g2 = 0.0;
                for axis in 0..2 {
                    let (um, b, u0, a, up) = self.axis_values(f, u, axis, boundary);
                    let d = (b * b * (up - u0) + a * a * (u0 - um)) / (a * b * (a + b));
                    g2 += d * d;
                }
                g2.sqrt()
            })
            .collect();
        self.function_from(&vals)
    }

    /// Largest second difference along the grid axes (nonpositive for a
    /// concave function up to discretization error).
    pub fn max_second_difference(&self, f: &GridFunction, boundary: f64) -> f64 {
        (0..self.nodes.len())
            .flat_map(|u| {
                (0..2).map(move |axis| {
                    let (um, b, u0, a, up) = self.axis_values(f, u, axis, boundary);
                    2.0 / (a + b) * ((up - u0) / a - (u0 - um) / b)
                })
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Values on the nodes of a [`GridDomain`], zero outside the interior mask.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub h: f64,
    pub origin: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    mask: Vec<bool>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.nx + 1) + i]
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        self.mask[j * (self.nx + 1) + i]
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + i as f64 * self.h,
            self.origin[1] + j as f64 * self.h,
        ]
    }

    /// `(i, j, value)` over interior nodes, row by row.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.ny).flat_map(move |j| {
            (0..=self.nx)
                .filter(move |&i| self.is_interior(i, j))
                .map(move |i| (i, j, self.get(i, j)))
        })
    }

    /// Value at the interior node nearest to `p`, if any.
    pub fn value_near(&self, p: [f64; 2]) -> Option<f64> {
        let i = ((p[0] - self.origin[0]) / self.h).round();
        let j = ((p[1] - self.origin[1]) / self.h).round();
        if i < 0.0 || j < 0.0 || i > self.nx as f64 || j > self.ny as f64 {
            return None;
        }
        let (i, j) = (i as usize, j as usize);
        self.is_interior(i, j).then(|| self.get(i, j))
    }

    pub fn max(&self) -> f64 {
        self.interior()
            .map(|x| x.2)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.interior().map(|x| x.2).fold(f64::INFINITY, f64::min)
    }

    /// `max |self - other|` over interior nodes of equal grids.
    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "grids differ");
        self.interior()
            .map(|(i, j, v)| (v - other.get(i, j)).abs())
            .fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        let mut out = self.clone();
        for (v, &m) in out.values.iter_mut().zip(&self.mask) {
            if m {
                *v = f(*v);
            }
        }
        out
    }

    /// CSV with header `i,j,x,y,value` over interior nodes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,x,y,value\n");
        for (i, j, v) in self.interior() {
            let p = self.point(i, j);
            out.push_str(&format!(
                "{i},{j},{},{},{}\n",
                crate::fmt::g12(p[0]),
                crate::fmt::g12(p[1]),
                crate::fmt::g12(v)
            ));
        }
        out
    }

    /// ASCII PGM heightmap scaled to `0..=255`; top row is the largest `y`.
    pub fn to_pgm(&self) -> String {
        let (lo, hi) = (self.min().min(0.0), self.max().max(0.0));
        let span = if hi > lo { hi - lo } else { 1.0 };
        let mut out = format!("P2\n{} {}\n255\n", self.nx + 1, self.ny + 1);
        for j in (0..=self.ny).rev() {
            let row: Vec<String> = (0..=self.nx)
                .map(|i| (((self.get(i, j) - lo) / span) * 255.0).round().to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Distance to the boundary at every interior node.
pub fn exact_distance(domain: &GridDomain) -> GridFunction {
    let vals: Vec<f64> = domain
        .nodes
        .iter()
        .map(|&(i, j)| domain.polygon.boundary_distance(&domain.point(i, j)))
        .collect();
    domain.function_from(&vals)
}

/// Viscous approximation `d_eps` of the distance function.
#[derive(Debug, Clone, PartialEq)]
pub struct DepsSolution {
    pub eps: f64,
    /// `w = d_eps = -eps ln(1 + z)`.
    pub w: GridFunction,
    /// Solution of `eps^2 Delta z - z = 1`, `z = 0` on the boundary.
    pub z: GridFunction,
    pub iterations: usize,
    pub residual: f64,
}

impl DepsSolution {
    /// `max |expm1(-w / eps) - z|`.
    pub fn reconstruction_error(&self) -> f64 {
        let back = self.w.map(|w| (-w / self.eps).exp_m1());
        back.sup_distance(&self.z)
    }
}

/// Solves `eps^2 Delta z - z = 1` in the polygon with `z = 0` on the boundary
/// and returns `w = -eps ln(1 + z)`.
///
/// Internally the unknown is `y = 1 + z`, which solves the homogeneous
/// problem `eps^2 Delta y = y` with `y = 1` on the boundary; this avoids
/// the cancellation in `1 + z` where `z` is close to `-1`.
pub fn solve_deps(domain: &GridDomain, eps: f64) -> Result<DepsSolution> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if domain.h > eps / 4.0 * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "resolution guard: h = {} exceeds eps / 4 = {}",
            domain.h,
            eps / 4.0
        )));
    }
    let (lap, load) = domain.neg_laplacian();
    let a = lap.shifted(eps * eps, 1.0);
    let b: Vec<f64> = load.iter().map(|c| eps * eps * c).collect();
    let d = exact_distance(domain);
    let mut y: Vec<f64> = domain
        .unknowns_of(&d)
        .iter()
        .map(|d| (-d / eps).exp())
        .collect();
    let stats = bicgstab(&a, &b, &mut y, SOLVE_RTOL, MAX_KRYLOV)?;

    let worst = y.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(worst > 0.0) {
        return Err(Error::Numerical(format!(
            "z <= -1 at some node (min 1 + z = {worst:.3e}); eps is too small for double precision"
        )));
    }
    if let Some(over) = y.iter().find(|&&v| v > 1.0 + 1e-12) {
        return Err(Error::Numerical(format!(
            "discrete maximum principle violated: 1 + z = {over}"
        )));
    }
    let z: Vec<f64> = y.iter().map(|v| v.min(1.0) - 1.0).collect();
    let w: Vec<f64> = y.iter().map(|v| -eps * v.min(1.0).ln()).collect();
    Ok(DepsSolution {
        eps,
        w: domain.function_from(&w),
        z: domain.function_from(&z),
        iterations: stats.iterations,
        residual: stats.residual,
    })
}

/// Principal Dirichlet eigenvalue of the five-point Laplacian on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEigen {
    pub lambda: f64,
    /// Positive eigenfunction with maximum 1.
    pub eigenfunction: GridFunction,
    pub iterations: usize,
}

pub fn dirichlet_eigen(domain: &GridDomain) -> Result<GridEigen> {
    let (lap, _) = domain.neg_laplacian();
    let d = exact_distance(domain);
    let mut u = domain.unknowns_of(&d);
    let s = norm(&u);
    u.iter_mut().for_each(|v| *v /= s);
    let mut x = u.clone();
    let mut lambda = f64::NAN;
    for it in 1..=MAX_POWER {
        if lambda.is_finite() {
            for (xi, ui) in x.iter_mut().zip(&u) {
                *xi = ui / lambda;
            }
        }
        bicgstab(&lap, &u, &mut x, 1e-12, MAX_KRYLOV)?;
        let new = dot(&x, &u) / dot(&x, &x);
        let nx = norm(&x);
        let change = x
            .iter()
            .zip(&u)
            .map(|(a, b)| (a / nx - b).powi(2))
            .sum::<f64>()
            .sqrt();
        u.iter_mut().zip(&x).for_each(|(a, b)| *a = b / nx);
        let converged = (new - lambda).abs() <= 1e-13 * new && change < 1e-9;
        lambda = new;
        if converged {
            let m = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let m = if m > 0.0 {
                m
            } else {
                u.iter().cloned().fold(f64::INFINITY, f64::min)
            };
            let vals: Vec<f64> = u.iter().map(|v| v / m).collect();
            return Ok(GridEigen {
                lambda,
                eigenfunction: domain.function_from(&vals),
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence(format!(
        "inverse iteration did not settle in {MAX_POWER} steps (last estimate {lambda})"
    )))
}

/// Eigenvalue on the grid of spacing `h` with a coarse-grid (`2h`)
/// Richardson estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenEstimate {
    pub h: f64,
    /// Value on the fine grid.
    pub lambda: f64,
    pub coarse: f64,
    /// `(4 fine - coarse) / 3`.
    pub extrapolated: f64,
    /// `|fine - coarse| / 3`, the estimated error of the fine value.
    pub error_estimate: f64,
    pub eigenfunction: GridFunction,
}

pub fn fd_laplace_eigen(domain: &GridDomain) -> Result<EigenEstimate> {
    let fine = dirichlet_eigen(domain)?;
    let coarse_domain = GridDomain::new(&domain.polygon, 2.0 * domain.h)?;
    let coarse = dirichlet_eigen(&coarse_domain)?.lambda;
    Ok(EigenEstimate {
        h: domain.h,
        lambda: fine.lambda,
        coarse,
        extrapolated: (4.0 * fine.lambda - coarse) / 3.0,
        error_estimate: (fine.lambda - coarse).abs() / 3.0,
        eigenfunction: fine.eigenfunction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn square(h: f64) -> GridDomain {
        GridDomain::new(&Polygon::rectangle(1.0, 1.0).unwrap(), h).unwrap()
    }

    #[test]
    fn exact_distance_examples() {
        let dom = square(0.05);
        let d = exact_distance(&dom);
        assert_relative_eq!(d.value_near([0.5, 0.5]).unwrap(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(d.value_near([0.1, 0.3]).unwrap(), 0.1, epsilon = 1e-12);
        assert!((d.max() - 0.5).abs() <= dom.h());
    }

    #[test]
    fn square_grid_has_interior_nodes_only() {
        let dom = square(0.25);
        assert_eq!(dom.len(), 9);
        assert!(dom.arms.iter().all(|a| a.iter().all(|&t| t == 1.0)));
    }

    #[test]
    fn deps_square() {
        let dom = square(0.01);
        let d = exact_distance(&dom);
        let coarse = solve_deps(&dom, 0.1).unwrap();
        let fine = solve_deps(&dom, 0.05).unwrap();
        assert!(fine.z.max() < 0.0 && fine.z.min() > -1.0);
        assert!(fine.w.min() > 0.0);
        for (i, j, w) in fine.w.interior() {
            assert!(w <= d.get(i, j) + dom.h());
        }
        assert!(fine.w.sup_distance(&d) < coarse.w.sup_distance(&d));
        assert!(fine.reconstruction_error() < 1e-12);
        assert!(dom.gradient_norm(&fine.w, 0.0).max() <= 1.0 + 10.0 * dom.h());
    }

    #[test]
    fn deps_resolution_guard() {
        let dom = square(0.05);
        assert!(matches!(solve_deps(&dom, 0.1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn laplace_square_and_scaling() {
        let dom = square(1.0 / 32.0);
        let e = fd_laplace_eigen(&dom).unwrap();
        assert_relative_eq!(e.lambda, 2.0 * PI * PI, max_relative = 2e-3);
        assert!((e.extrapolated - 2.0 * PI * PI).abs() < (e.lambda - 2.0 * PI * PI).abs());
        let big = GridDomain::new(&Polygon::rectangle(2.0, 2.0).unwrap(), 1.0 / 16.0).unwrap();
        let eb = dirichlet_eigen(&big).unwrap();
        assert_relative_eq!(eb.lambda * 4.0, e.lambda, max_relative = 1e-10);
    }

    #[test]
    fn cut_cells_on_a_triangle() {
        let tri = Polygon::regular(3, 1.0).unwrap();
        let dom = GridDomain::new(&tri, 0.02).unwrap();
        // equilateral triangle of side s: 16 pi^2 / (3 s^2)
        let s = 3f64.sqrt();
        let exact = 16.0 * PI * PI / (3.0 * s * s);
        let e = fd_laplace_eigen(&dom).unwrap();
        assert_relative_eq!(e.lambda, exact, max_relative = 2e-3);
        assert!((e.extrapolated - exact).abs() < (e.lambda - exact).abs());
    }

    #[test]
    fn isolated_corner_nodes_are_dropped() {
        // a sharp vertex of this polygon isolates two nodes at h = 1/64
        let p = crate::geometry::random_polygon(8, 5, Default::default()).unwrap();
        let dom = GridDomain::new(&p, 1.0 / 64.0).unwrap();
        assert_eq!(dom.dropped_nodes(), 2);
        assert!(dirichlet_eigen(&dom).unwrap().lambda > 0.0);
    }

    #[test]
    fn csv_and_pgm_exports() {
        let dom = square(0.25);
        let d = exact_distance(&dom);
        let csv = d.to_csv();
        assert!(csv.starts_with("i,j,x,y,value\n"));
        assert_eq!(csv.lines().count(), 10);
        let pgm = d.to_pgm();
        assert!(pgm.starts_with("P2\n5 5\n255\n"));
    }
}
