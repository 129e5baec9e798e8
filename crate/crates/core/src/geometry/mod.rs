//! Exact planar geometry: points, polygons, segment/arc boundary chains,
//! erosion of convex polygons and their rounded Minkowski sums.
//!
//! Every boundary is oriented counter-clockwise, so the inner unit normal
//! is the left normal of the traversal direction.

mod offset;
mod point;
mod polygon;
mod region;

pub(crate) use offset::{erode_prepared, eroded_area, inradius_prepared};
pub use offset::{inner_parallel, inradius, minkowski_sum_disk};
pub use point::{signed_angle, Point2, Vector2};
pub(crate) use polygon::shoelace as polygon_shoelace;
pub use polygon::{polygon_area_perimeter, resample_boundary, Polygon, CONVEX_SIN_TOL};
pub use region::{
    chain_area_perimeter, region_area_perimeter, ArcBoundaryRegion, BoundaryPiece, CLOSURE_TOL,
};
