use std::io::{self, Write};

use crate::geometry::{Aabb, Point2, RationalBezierCurve};

/// A flat collection of boundary curves.
///
/// Curve ids are renumbered to their index on construction, so they are
/// unique and can be used to address the curve slice directly.
#[derive(Debug, Clone, PartialEq)]
pub struct Shape2D {
    pub curves: Vec<RationalBezierCurve>,
    pub global_aabb: Aabb,
    pub source_name: String,
}

impl Shape2D {
    pub fn new(curves: Vec<RationalBezierCurve>, source_name: impl Into<String>) -> Self {
        let curves: Vec<_> = curves
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.with_id(i))
            .collect();
        let global_aabb = curves
            .iter()
            .map(|c| c.aabb())
            .reduce(|a, b| a.union(&b))
            .unwrap_or_else(|| Aabb::from_point(Point2::ORIGIN));
        Self {
            curves,
            global_aabb,
            source_name: source_name.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn diagonal(&self) -> f64 {
        self.global_aabb.diagonal()
    }

    /// Concatenates shapes; ids are renumbered.
    pub fn merged(shapes: &[Shape2D], name: impl Into<String>) -> Self {
        let curves = shapes.iter().flat_map(|s| s.curves.iter().cloned()).collect();
        Self::new(curves, name)
    }

    /// One curve per line: `id,degree,x0,y0,...,w0,w1,...`.
    pub fn write_geometry_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "# id,degree,control points (x,y)...,weights...")?;
        for c in &self.curves {
            write!(out, "{},{}", c.id, c.degree())?;
            for p in c.control_points() {
                write!(out, ",{},{}", p.x, p.y)?;
            }
            for w in c.weights() {
                write!(out, ",{w}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
