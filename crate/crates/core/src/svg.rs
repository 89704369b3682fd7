//! SVG outline ingestion.
//!
//! Only `<path>` geometry is read. Styling, fill rules and `use`/`defs`
//! references are ignored. Elliptical arcs become exact rational quadratic
//! pieces of at most a quarter turn; element transforms are applied to the
//! control points.

use std::f64::consts::{FRAC_PI_2, TAU};

use thiserror::Error;

use crate::geometry::{Aabb, Point2, RationalBezierCurve};
use crate::shape::Shape2D;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvgError {
    #[error("invalid XML: {0}")]
    Xml(String),
    #[error("malformed path data at byte {offset}: {message}")]
    MalformedPath { offset: usize, message: String },
    #[error("malformed transform {0:?}")]
    MalformedTransform(String),
    #[error("malformed viewBox {0:?}")]
    MalformedViewBox(String),
}

/// Non-fatal conditions encountered while reading geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum SvgWarning {
    /// An arc with a zero radius, replaced by a straight line.
    UnsupportedFeature { feature: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgDocument {
    pub shape: Shape2D,
    pub view_box: Option<Aabb>,
    pub warnings: Vec<SvgWarning>,
}

/// 2D affine map `x' = a x + c y + e`, `y' = b x + d y + f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Affine {
    pub const IDENTITY: Affine = Affine { a: 1.0, b: 0.0, c: 0.0, d: 1.0, e: 0.0, f: 0.0 };

    pub fn translate(tx: f64, ty: f64) -> Self {
        Affine { e: tx, f: ty, ..Self::IDENTITY }
    }

    pub fn scale(sx: f64, sy: f64) -> Self {
        Affine { a: sx, d: sy, ..Self::IDENTITY }
    }

    pub fn rotate_degrees(deg: f64) -> Self {
        let (s, c) = deg.to_radians().sin_cos();
        Affine { a: c, b: s, c: -s, d: c, e: 0.0, f: 0.0 }
    }

    /// `self ∘ other`: applies `other` first.
    pub fn then_apply_after(&self, other: &Affine) -> Affine {
        let m = self;
        Affine {
            a: m.a * other.a + m.c * other.b,
            b: m.b * other.a + m.d * other.b,
            c: m.a * other.c + m.c * other.d,
            d: m.b * other.c + m.d * other.d,
            e: m.a * other.e + m.c * other.f + m.e,
            f: m.b * other.e + m.d * other.f + m.f,
        }
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.a * p.x + self.c * p.y + self.e,
            self.b * p.x + self.d * p.y + self.f,
        )
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

const SKIPPED_CONTAINERS: &[&str] = &["defs", "clipPath", "mask", "symbol", "pattern", "marker"];

pub fn parse_svg_document(text: &str) -> Result<SvgDocument, SvgError> {
    parse_svg_document_named(text, "")
}

pub fn parse_svg_document_named(text: &str, source_name: &str) -> Result<SvgDocument, SvgError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| SvgError::Xml(e.to_string()))?;
    let root = doc.root_element();
    let view_box = root.attribute("viewBox").map(parse_view_box).transpose()?;

    let mut curves = Vec::new();
    let mut warnings = Vec::new();
    walk(root, Affine::IDENTITY, &mut curves, &mut warnings)?;
    Ok(SvgDocument {
        shape: Shape2D::new(curves, source_name),
        view_box,
        warnings,
    })
}

fn walk(
    node: roxmltree::Node<'_, '_>,
    parent: Affine,
    curves: &mut Vec<RationalBezierCurve>,
    warnings: &mut Vec<SvgWarning>,
) -> Result<(), SvgError> {
    let name = node.tag_name().name();
    if SKIPPED_CONTAINERS.contains(&name) {
        return Ok(());
    }
    let local = match node.attribute("transform") {
        Some(t) => parse_transform(t)?,
        None => Affine::IDENTITY,
    };
    let xf = parent.then_apply_after(&local);
    if name == "path" {
        if let Some(d) = node.attribute("d") {
            let parsed = parse_path_data(d)?;
            warnings.extend(parsed.warnings);
            curves.extend(parsed.curves.into_iter().map(|c| {
                if xf.is_identity() {
                    c
                } else {
                    c.map_points(|p| xf.apply(p))
                }
            }));
        }
    }
    for child in node.children().filter(|n| n.is_element()) {
        walk(child, xf, curves, warnings)?;
    }
    Ok(())
}

/// All path outlines of an SVG document as one shape.
pub fn parse_svg_paths(text: &str) -> Result<Shape2D, SvgError> {
    Ok(parse_svg_document(text)?.shape)
}

/// `nx * ny` cell-centered points over `bounds`, row-major with x fastest.
pub fn grid_points(bounds: &Aabb, nx: usize, ny: usize) -> Vec<Point2> {
    let dx = bounds.width() / nx as f64;
    let dy = bounds.height() / ny as f64;
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = bounds.min.y + (j as f64 + 0.5) * dy;
        for i in 0..nx {
            out.push(Point2::new(bounds.min.x + (i as f64 + 0.5) * dx, y));
        }
    }
    out
}

/// Grid over the document's viewBox, or over the outline box when absent.
pub fn viewbox_grid(text: &str, nx: usize, ny: usize) -> Result<Vec<Point2>, SvgError> {
    let doc = parse_svg_document(text)?;
    let bounds = doc.view_box.unwrap_or(doc.shape.global_aabb);
    Ok(grid_points(&bounds, nx, ny))
}

fn numbers(text: &str) -> Option<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok())
        .collect()
}

fn parse_view_box(text: &str) -> Result<Aabb, SvgError> {
    match numbers(text).as_deref() {
        Some(&[x, y, w, h]) if w >= 0.0 && h >= 0.0 => {
            Ok(Aabb::new(Point2::new(x, y), Point2::new(x + w, y + h)))
        }
        _ => Err(SvgError::MalformedViewBox(text.to_string())),
    }
}

/// Parses an SVG transform list such as `translate(10 5) rotate(30)`.
pub fn parse_transform(text: &str) -> Result<Affine, SvgError> {
    let err = || SvgError::MalformedTransform(text.to_string());
    let mut total = Affine::IDENTITY;
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest.find('(').ok_or_else(err)?;
        let close = rest.find(')').ok_or_else(err)?;
        if close < open {
            return Err(err());
        }
        let name = rest[..open].trim().trim_start_matches(',').trim();
        let args = numbers(&rest[open + 1..close]).ok_or_else(err)?;
        let m = match (name, args.as_slice()) {
            ("matrix", &[a, b, c, d, e, f]) => Affine { a, b, c, d, e, f },
            ("translate", &[tx]) => Affine::translate(tx, 0.0),
            ("translate", &[tx, ty]) => Affine::translate(tx, ty),
            ("scale", &[s]) => Affine::scale(s, s),
            ("scale", &[sx, sy]) => Affine::scale(sx, sy),
            ("rotate", &[deg]) => Affine::rotate_degrees(deg),
            ("rotate", &[deg, cx, cy]) => Affine::translate(cx, cy)
                .then_apply_after(&Affine::rotate_degrees(deg))
                .then_apply_after(&Affine::translate(-cx, -cy)),
            ("skewX", &[deg]) => Affine { c: deg.to_radians().tan(), ..Affine::IDENTITY },
            ("skewY", &[deg]) => Affine { b: deg.to_radians().tan(), ..Affine::IDENTITY },
            _ => return Err(err()),
        };
        total = total.then_apply_after(&m);
        rest = rest[close + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == ',');
    }
    Ok(total)
}

#[derive(Debug, Default)]
pub struct ParsedPath {
    pub curves: Vec<RationalBezierCurve>,
    pub warnings: Vec<SvgWarning>,
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_separators(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_whitespace() || self.s[self.pos] == b',') {
            self.pos += 1;
        }
    }

    fn skip_whitespace(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn starts_number(&self) -> bool {
        matches!(self.peek(), Some(b'0'..=b'9' | b'.' | b'-' | b'+'))
    }

    fn error(&self, message: impl Into<String>) -> SvgError {
        SvgError::MalformedPath {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn number(&mut self) -> Result<f64, SvgError> {
        self.skip_separators();
        let start = self.pos;
        let s = self.s;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
            i += 1;
        }
        let int_start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        let mut digits = i - int_start;
        if i < s.len() && s[i] == b'.' {
            i += 1;
            let frac_start = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            digits += i - frac_start;
        }
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < s.len() && s[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_start {
                i = j;
            }
        }
        self.pos = i;
        std::str::from_utf8(&s[start..i])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| SvgError::MalformedPath {
                offset: start,
                message: "invalid number".into(),
            })
    }

    fn flag(&mut self) -> Result<bool, SvgError> {
        self.skip_separators();
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(false)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(true)
            }
            _ => Err(self.error("expected an arc flag 0 or 1")),
        }
    }

    fn point(&mut self) -> Result<Point2, SvgError> {
        let x = self.number()?;
        let y = self.number()?;
        Ok(Point2::new(x, y))
    }

    /// Another argument group follows for the current command.
    fn more_args(&mut self) -> bool {
        self.skip_whitespace();
        if self.peek() == Some(b',') {
            self.pos += 1;
            self.skip_whitespace();
        }
        self.starts_number()
    }
}

/// Parses the contents of a `d` attribute.
pub fn parse_path_data(d: &str) -> Result<ParsedPath, SvgError> {
    let mut lx = Lexer { s: d.as_bytes(), pos: 0 };
    let mut out = ParsedPath::default();
    let mut current = Point2::ORIGIN;
    let mut start = Point2::ORIGIN;
    let mut have_current = false;
    // reflected-control bookkeeping for S/s and T/t
    let mut last_cubic: Option<Point2> = None;
    let mut last_quad: Option<Point2> = None;

    let push_poly = |out: &mut ParsedPath, pts: &[Point2]| {
        out.curves
            .push(RationalBezierCurve::polynomial(pts.iter().copied(), out.curves.len()).expect("at least two points"));
    };

    lx.skip_whitespace();
    while !lx.at_end() {
        let cmd_offset = lx.pos;
        let cmd = lx.peek().unwrap();
        if !cmd.is_ascii_alphabetic() {
            return Err(lx.error("expected a path command"));
        }
        lx.pos += 1;
        let relative = cmd.is_ascii_lowercase();
        let upper = cmd.to_ascii_uppercase();
        if !have_current && upper != b'M' {
            return Err(SvgError::MalformedPath {
                offset: cmd_offset,
                message: "path must begin with a moveto".into(),
            });
        }
        let rel = |p: Point2, cur: Point2| if relative { cur + p } else { p };

        match upper {
            b'Z' => {
                if current != start {
                    push_poly(&mut out, &[current, start]);
                }
                current = start;
                last_cubic = None;
                last_quad = None;
                lx.skip_whitespace();
                continue;
            }
            b'M' => {
                let p = rel(lx.point()?, current);
                current = p;
                start = p;
                have_current = true;
                // extra pairs are implicit linetos
                while lx.more_args() {
                    let p = rel(lx.point()?, current);
                    push_poly(&mut out, &[current, p]);
                    current = p;
                }
                last_cubic = None;
                last_quad = None;
            }
            b'L' | b'H' | b'V' => loop {
                let p = match upper {
                    b'L' => rel(lx.point()?, current),
                    b'H' => {
                        let x = lx.number()?;
                        Point2::new(if relative { current.x + x } else { x }, current.y)
                    }
                    _ => {
                        let y = lx.number()?;
                        Point2::new(current.x, if relative { current.y + y } else { y })
                    }
                };
                push_poly(&mut out, &[current, p]);
                current = p;
                last_cubic = None;
                last_quad = None;
                if !lx.more_args() {
                    break;
                }
            },
            b'C' | b'S' => loop {
                let c1 = if upper == b'C' {
                    rel(lx.point()?, current)
                } else {
                    last_cubic.map_or(current, |c| current * 2.0 - c)
                };
                let c2 = rel(lx.point()?, current);
                let p = rel(lx.point()?, current);
                push_poly(&mut out, &[current, c1, c2, p]);
                last_cubic = Some(c2);
                last_quad = None;
                current = p;
                if !lx.more_args() {
                    break;
                }
            },
            b'Q' | b'T' => loop {
                let c = if upper == b'Q' {
                    rel(lx.point()?, current)
                } else {
                    last_quad.map_or(current, |c| current * 2.0 - c)
                };
                let p = rel(lx.point()?, current);
                push_poly(&mut out, &[current, c, p]);
                last_quad = Some(c);
                last_cubic = None;
                current = p;
                if !lx.more_args() {
                    break;
                }
            },
            b'A' => loop {
                let arg_offset = lx.pos;
                let rx = lx.number()?;
                let ry = lx.number()?;
                let rotation = lx.number()?;
                let large = lx.flag()?;
                let sweep = lx.flag()?;
                let p = rel(lx.point()?, current);
                match arc_to_conics(current, rx, ry, rotation, large, sweep, p) {
                    Some(pieces) => {
                        for piece in pieces {
                            let id = out.curves.len();
                            out.curves.push(piece.with_id(id));
                        }
                    }
                    None => {
                        out.warnings.push(SvgWarning::UnsupportedFeature {
                            feature: "elliptical arc with zero radius, drawn as a line".into(),
                            offset: arg_offset,
                        });
                        if current != p {
                            push_poly(&mut out, &[current, p]);
                        }
                    }
                }
                current = p;
                last_cubic = None;
                last_quad = None;
                if !lx.more_args() {
                    break;
                }
            },
            _ => {
                return Err(SvgError::MalformedPath {
                    offset: cmd_offset,
                    message: format!("unknown command {:?}", cmd as char),
                })
            }
        }
        lx.skip_separators();
    }
    Ok(out)
}

fn vector_angle(u: Point2, v: Point2) -> f64 {
    u.cross(v).atan2(u.dot(v))
}

/// Converts an SVG endpoint-parameterized arc into rational quadratic pieces
/// spanning at most 90° each. Returns `None` for a zero radius (the caller
/// draws a line); an arc whose endpoints coincide yields no pieces.
pub fn arc_to_conics(
    p0: Point2,
    rx: f64,
    ry: f64,
    rotation_deg: f64,
    large_arc: bool,
    sweep: bool,
    p1: Point2,
) -> Option<Vec<RationalBezierCurve>> {
    if p0 == p1 {
        return Some(Vec::new());
    }
    let (mut rx, mut ry) = (rx.abs(), ry.abs());
    if rx == 0.0 || ry == 0.0 {
        return None;
    }
    let (sin_phi, cos_phi) = rotation_deg.to_radians().sin_cos();
    let h = (p0 - p1) * 0.5;
    let x1 = cos_phi * h.x + sin_phi * h.y;
    let y1 = -sin_phi * h.x + cos_phi * h.y;

    let lambda = (x1 * x1) / (rx * rx) + (y1 * y1) / (ry * ry);
    if lambda > 1.0 {
        let s = lambda.sqrt();
        rx *= s;
        ry *= s;
    }
    let num = rx * rx * ry * ry - rx * rx * y1 * y1 - ry * ry * x1 * x1;
    let den = rx * rx * y1 * y1 + ry * ry * x1 * x1;
    let mut coef = (num / den).max(0.0).sqrt();
    if large_arc == sweep {
        coef = -coef;
    }
    let cxp = coef * rx * y1 / ry;
    let cyp = -coef * ry * x1 / rx;
    let mid = p0.midpoint(p1);
    let center = Point2::new(
        cos_phi * cxp - sin_phi * cyp + mid.x,
        sin_phi * cxp + cos_phi * cyp + mid.y,
    );

    let u = Point2::new((x1 - cxp) / rx, (y1 - cyp) / ry);
    let v = Point2::new((-x1 - cxp) / rx, (-y1 - cyp) / ry);
    let theta0 = vector_angle(Point2::new(1.0, 0.0), u);
    let mut delta = vector_angle(u, v);
    if !sweep && delta > 0.0 {
        delta -= TAU;
    } else if sweep && delta < 0.0 {
        delta += TAU;
    }

    let pieces = ((delta.abs() / FRAC_PI_2) - 1e-9).ceil().max(1.0) as usize;
    let step = delta / pieces as f64;
    let half = 0.5 * step;
    let weight = half.cos();
    let on_ellipse = |ux: f64, uy: f64| {
        let ex = rx * ux;
        let ey = ry * uy;
        Point2::new(
            center.x + cos_phi * ex - sin_phi * ey,
            center.y + sin_phi * ex + cos_phi * ey,
        )
    };

    let ends: Vec<Point2> = (0..=pieces)
        .map(|k| match k {
            0 => p0,
            k if k == pieces => p1,
            k => {
                let a = theta0 + step * k as f64;
                on_ellipse(a.cos(), a.sin())
            }
        })
        .collect();
    let out = (0..pieces)
        .map(|k| {
            let m = theta0 + step * k as f64 + half;
            let ctrl = on_ellipse(m.cos() / weight, m.sin() / weight);
            RationalBezierCurve::new([ends[k], ctrl, ends[k + 1]], [1.0, weight, 1.0], 0)
                .expect("arc pieces have positive weights")
        })
        .collect();
    Some(out)
}
