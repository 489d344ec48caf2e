//! Benchmark fixtures shared by the criterion targets.

use hessbound::geometry::AspectBounds;
use hessbound::{random_polygon, ConvexBody, Polygon};

/// The seeded octagon used across benchmarks.
pub fn octagon() -> Polygon {
    random_polygon(7, 8, AspectBounds::default()).expect("seeded octagon")
}

pub fn unit_square() -> ConvexBody {
    ConvexBody::Polygon(Polygon::rectangle(1.0, 1.0).expect("unit square"))
}
