//! Seeded random convex polygons (Valtr's construction), used as test corpora.

use nalgebra::{Point2, Vector2};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Polygon;
use crate::error::{Error, Result};

const MAX_RETRIES: usize = 100;

/// Range for the ratio of the short to the long axis applied after generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AspectBounds {
    pub min: f64,
    pub max: f64,
}

impl Default for AspectBounds {
    fn default() -> Self {
        Self { min: 0.3, max: 1.0 }
    }
}

/// Deterministic convex polygon with exactly `vertex_count` vertices, unit
/// area and centroid at the origin.
pub fn random_polygon(seed: u64, vertex_count: usize, aspect: AspectBounds) -> Result<Polygon> {
    if vertex_count < 3 {
        return Err(Error::InvalidInput(format!(
            "a random polygon needs at least 3 vertices, got {vertex_count}"
        )));
    }
    if !(aspect.min > 0.0 && aspect.min <= aspect.max && aspect.max <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "aspect bounds must satisfy 0 < min <= max <= 1, got [{}, {}]",
            aspect.min, aspect.max
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let pts = valtr(&mut rng, vertex_count);
        let stretch = rng.gen_range(aspect.min..=aspect.max);
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let (s, c) = angle.sin_cos();
        let pts: Vec<Point2<f64>> = pts
            .into_iter()
            .map(|p| {
                let q = Vector2::new(p.x, p.y * stretch);
                Point2::new(c * q.x - s * q.y, s * q.x + c * q.y)
            })
            .collect();
        let Ok(poly) = Polygon::new(pts) else {
            continue;
        };
        if poly.len() != vertex_count || min_relative_turn(&poly) < 1e-6 {
            continue;
        }
        let cen = poly.centroid();
        let poly = poly.translated(-cen.coords);
        let area = poly.area();
        return poly.scaled(1.0 / area.sqrt());
    }
    Err(Error::DegenerateBody(format!(
        "no valid convex {vertex_count}-gon after {MAX_RETRIES} attempts (seed {seed})"
    )))
}

fn min_relative_turn(p: &Polygon) -> f64 {
    p.exterior_angles()
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

fn chain_vectors(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    xs.sort_by(|a, b| a.total_cmp(b));
    let (lo, hi) = (xs[0], xs[n - 1]);
    let mut out = Vec::with_capacity(n);
    let (mut top, mut bot) = (lo, lo);
    for &x in &xs[1..n - 1] {
        if rng.gen::<bool>() {
            out.push(x - top);
            top = x;
        } else {
            out.push(bot - x);
            bot = x;
        }
    }
    out.push(hi - top);
    out.push(bot - hi);
    out
}

fn valtr(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2<f64>> {
    let xv = chain_vectors(rng, n);
    let mut yv = chain_vectors(rng, n);
    yv.shuffle(rng);
    let mut vecs: Vec<Vector2<f64>> = xv
        .into_iter()
        .zip(yv)
        .map(|(x, y)| Vector2::new(x, y))
        .collect();
    vecs.sort_by(|a, b| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)));
    let mut p = Point2::origin();
    vecs.iter()
        .map(|v| {
            let cur = p;
            p += v;
            cur
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = random_polygon(1, 8, AspectBounds::default()).unwrap();
        let b = random_polygon(1, 8, AspectBounds::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        assert!((a.area() - 1.0).abs() < 1e-12);
        let c = random_polygon(2, 8, AspectBounds::default()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_too_few_vertices() {
        assert!(random_polygon(1, 2, AspectBounds::default()).is_err());
    }

    #[test]
    fn many_vertex_counts() {
        for n in [3, 4, 5, 12, 40] {
            let p = random_polygon(n as u64, n, AspectBounds { min: 0.5, max: 0.9 }).unwrap();
            assert_eq!(p.len(), n);
        }
    }
}
