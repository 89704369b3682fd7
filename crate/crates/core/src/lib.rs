//! Generalized winding numbers for collections of 2D rational Bézier curves.
//!
//! Queries near a curve are answered exactly by recursive bisection; distant
//! clusters of curves are summarized by low-order Taylor expansions whose
//! moments live in a bounding volume hierarchy.
//!
//! ```
//! use curvewind::{engine, synth, Bvh, Point2, QueryConfig, Shape2D};
//!
//! let shape = Shape2D::new(synth::circle(Point2::ORIGIN, 1.0, 0), "circle");
//! let bvh = Bvh::build(&shape).unwrap();
//! let field = engine::evaluate_batch(&bvh, &[Point2::new(0.1, 0.2)], &QueryConfig::default()).unwrap();
//! assert!((field.values[0] - 1.0).abs() < 1e-9);
//! ```

pub mod bvh;
pub mod direct;
pub mod engine;
pub mod experiments;
pub mod geometry;
pub mod moments;
pub mod oracle;
pub mod shape;
pub mod subdivision;
pub mod svg;
pub mod synth;
pub mod taylor;

pub use bvh::{Bvh, BvhError, BvhNode, NodeKind};
pub use direct::{curve_winding, segment_winding, DirectConfig, SubdivisionCache};
pub use engine::{
    compare_to_direct, containment, evaluate_batch, EngineError, ErrorReport, FieldResult, QueryConfig, QueryStats,
    RoundingRule,
};
pub use geometry::{Aabb, GeometryError, Point2, RationalBezierCurve};
pub use moments::{MomentError, MomentSet};
pub use shape::Shape2D;
pub use subdivision::{adaptive_subdivide, SubdividedShape, SubdivisionConfig};
pub use svg::{parse_svg_paths, viewbox_grid, SvgError};
pub use taylor::{approx_winding, ExpansionOrder, TaylorError};
