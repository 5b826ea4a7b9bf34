//! Points, directed lines, intersections and side-chain polygons.

use serde::{Deserialize, Serialize};

use crate::angle::CanonicalAngle;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// Lexicographic order on (x, then y).
pub fn lex_less(a: Point, b: Point) -> bool {
    a.x < b.x || (a.x == b.x && a.y < b.y)
}

/// A line of one of the three direction families. The line is the set
/// {x : ⟨x, n⟩ = offset} where n is the family direction rotated by +π/2.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DirectedLine {
    pub family: CanonicalAngle,
    pub offset: f64,
    pub id: u32,
}

impl DirectedLine {
    pub fn new(family: CanonicalAngle, offset: f64, id: u32) -> Self {
        DirectedLine { family, offset, id }
    }

    /// Point at parameter t along the line direction.
    pub fn point_at(&self, t: f64) -> Point {
        let (dx, dy) = self.family.direction();
        let (nx, ny) = self.family.normal();
        Point::new(self.offset * nx + t * dx, self.offset * ny + t * dy)
    }

    /// Parameter of the orthogonal projection of `p` onto the line.
    pub fn param_of(&self, p: Point) -> f64 {
        let (dx, dy) = self.family.direction();
        p.x * dx + p.y * dy
    }
}

/// Intersection point of two lines from distinct families.
///
/// With only three families, the 2×2 system has determinant ±√3/2 or ±1·(√3/2);
/// it is never ill-conditioned.
pub fn intersect(a: &DirectedLine, b: &DirectedLine) -> Result<Point> {
    if a.family == b.family {
        return Err(Error::ParallelLines(a.id, b.id));
    }
    let (nax, nay) = a.family.normal();
    let (nbx, nby) = b.family.normal();
    let det = nax * nby - nay * nbx;
    let x = (a.offset * nby - b.offset * nay) / det;
    let y = (nax * b.offset - nbx * a.offset) / det;
    Ok(Point::new(x, y))
}

/// A polygon stored as a side chain: an anchor vertex plus (length, angle)
/// pairs. Vertices are derived by walking the chain; the chain of a closed
/// polygon returns to the anchor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Polygon {
    anchor: Point,
    sides: Vec<(f64, f64)>,
    /// Original loop when built from vertices; kept verbatim so vertex
    /// queries are not polluted by trig round trips.
    loop_vertices: Option<Vec<Point>>,
}

impl Polygon {
    pub fn from_side_chain(anchor: Point, sides: Vec<(f64, f64)>) -> Self {
        Polygon { anchor, sides, loop_vertices: None }
    }

    /// Build the chain representation of a closed vertex loop.
    pub fn from_vertex_loop(vertices: &[Point]) -> Self {
        let n = vertices.len();
        let mut sides = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let d = b - a;
            sides.push((d.x.hypot(d.y), d.y.atan2(d.x)));
        }
        Polygon { anchor: vertices[0], sides, loop_vertices: Some(vertices.to_vec()) }
    }

    pub fn side_count(&self) -> usize {
        self.sides.len()
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        self.sides.iter().map(|s| s.0).collect()
    }

    pub fn side_angles(&self) -> Vec<f64> {
        self.sides.iter().map(|s| s.1).collect()
    }

    /// Chain vertices; one per side, starting at the anchor. For a closed
    /// chain the walk back to the anchor is implicit.
    pub fn vertices(&self) -> Vec<Point> {
        if let Some(v) = &self.loop_vertices {
            return v.clone();
        }
        let mut out = Vec::with_capacity(self.sides.len());
        let mut cur = self.anchor;
        for &(len, ang) in &self.sides {
            out.push(cur);
            cur = Point::new(cur.x + len * ang.cos(), cur.y + len * ang.sin());
        }
        out
    }

    /// Signed area by the shoelace formula; positive for counterclockwise loops.
    pub fn signed_area(&self) -> f64 {
        let v = self.vertices();
        let n = v.len();
        let mut s = 0.0;
        for i in 0..n {
            let a = v[i];
            let b = v[(i + 1) % n];
            s += a.x * b.y - a.y * b.x;
        }
        s / 2.0
    }

    /// Convexity of the vertex loop (strict turns, consistent orientation).
    pub fn is_convex(&self) -> bool {
        let v = self.vertices();
        let n = v.len();
        if n < 3 {
            return false;
        }
        let mut sign = 0.0f64;
        for i in 0..n {
            let a = v[i];
            let b = v[(i + 1) % n];
            let c = v[(i + 2) % n];
            let cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
            if cross == 0.0 {
                continue;
            }
            if sign == 0.0 {
                sign = cross.signum();
            } else if cross.signum() != sign {
                return false;
            }
        }
        sign != 0.0
    }

    /// No two non-adjacent sides intersect. Quadratic; the polygons here have
    /// at most six sides.
    pub fn is_simple(&self) -> bool {
        let v = self.vertices();
        let n = v.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let (a1, a2) = (v[i], v[(i + 1) % n]);
                let (b1, b2) = (v[j], v[(j + 1) % n]);
                if segments_cross(a1, a2, b1, b2) {
                    return false;
                }
            }
        }
        true
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn segments_cross(a1: Point, a2: Point, b1: Point, b2: Point) -> bool {
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

/// Closure residual of a side chain: max(|Σ zᵢ sin φᵢ|, |Σ zᵢ cos φᵢ|).
///
/// Both sums vanish exactly when the chain closes.
pub fn closing_residual(poly: &Polygon) -> f64 {
    let mut sx = 0.0;
    let mut sy = 0.0;
    for &(len, ang) in &poly.sides {
        sx += len * ang.cos();
        sy += len * ang.sin();
    }
    sx.abs().max(sy.abs())
}

/// The vertex minimal in (x, then y) order.
pub fn lex_min_vertex(poly: &Polygon) -> Point {
    let verts = poly.vertices();
    assert!(!verts.is_empty(), "polygon has no vertices");
    let mut best = verts[0];
    for &v in &verts[1..] {
        if lex_less(v, best) {
            best = v;
        }
    }
    best
}

/// Lex-min over a raw vertex slice.
pub fn lex_min_point(vertices: &[Point]) -> Point {
    assert!(!vertices.is_empty());
    let mut best = vertices[0];
    for &v in &vertices[1..] {
        if lex_less(v, best) {
            best = v;
        }
    }
    best
}
