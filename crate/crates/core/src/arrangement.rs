//! Planar subdivision of a clipped line realization, with face extraction.
//!
//! Per line, the intersections with all non-parallel lines and with the
//! window rectangle are sorted along the line; consecutive points emit a
//! half-edge pair. At each vertex the outgoing half-edges are ordered by
//! angle and the next-pointer of a half-edge is the rotational predecessor
//! of its twin, so the face walk visits every face once with interior on
//! the left. Vertex identity is combinatorial (line-id pairs, line/window
//! edge pairs, corners), never a float comparison.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{intersect, lex_min_point, Point};
use crate::lineproc::{LineRealization, Window, OFFSET_TOL};

/// Geometric coincidence tolerance, in window units. Configurations closer
/// than this to a degeneracy are rejected so the caller can resample.
pub const COINCIDENCE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum VertexKey {
    /// Crossing of two lines, ids normalized ascending.
    LinePair(u32, u32),
    /// A line leaving the window through one of its four edges.
    LineEdge(u32, u8),
    /// Window corner.
    Corner(u8),
}

impl VertexKey {
    fn on_boundary(self) -> bool {
        !matches!(self, VertexKey::LinePair(..))
    }
}

/// A bounded face of the subdivision.
#[derive(Clone, Debug)]
pub struct Face {
    /// Vertex loop in counterclockwise order.
    pub vertices: Vec<Point>,
    /// Whether any vertex of the face lies on the window boundary.
    pub touches_boundary: bool,
    pub area: f64,
    pub lex_min: Point,
}

impl Face {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

/// The built subdivision: bounded faces plus the graph counts needed for
/// consistency checks.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub window: Window,
    faces: Vec<Face>,
    vertex_count: usize,
    edge_count: usize,
}

impl Arrangement {
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Faces not touching the window boundary.
    pub fn interior_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| !f.touches_boundary)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Total number of faces including the outer face.
    pub fn face_count(&self) -> usize {
        self.faces.len() + 1
    }

    /// CSV dump: face_id, vertex_count, touches_boundary, lex_min_x, lex_min_y, area.
    pub fn faces_csv(&self) -> String {
        let mut out = String::from("face_id,vertex_count,touches_boundary,lex_min_x,lex_min_y,area\n");
        for (i, f) in self.faces.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                i,
                f.vertex_count(),
                f.touches_boundary,
                f.lex_min.x,
                f.lex_min.y,
                f.area
            ));
        }
        out
    }
}

struct Clipped {
    line_idx: usize,
    t_in: f64,
    t_out: f64,
    edge_in: u8,
    edge_out: u8,
}

/// Build the subdivision induced by the realization clipped to its window.
pub fn build(realization: &LineRealization) -> Result<Arrangement> {
    let window = realization.window;
    let r = window.half_width;
    let lines = &realization.lines;

    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if a.family == b.family && (a.offset - b.offset).abs() < OFFSET_TOL {
                return Err(Error::Degenerate(format!(
                    "lines {} and {} of one family have offsets within {OFFSET_TOL:e}",
                    a.id, b.id
                )));
            }
        }
    }

    // Clip every line to the square.
    let mut clipped: Vec<Clipped> = Vec::with_capacity(lines.len());
    for (line_idx, line) in lines.iter().enumerate() {
        if let Some(c) = clip_to_square(line_idx, line, r)? {
            clipped.push(c);
        }
    }

    let mut vertices: Vec<Point> = Vec::new();
    let mut keys: Vec<VertexKey> = Vec::new();
    let mut index: HashMap<VertexKey, u32> = HashMap::new();
    let mut intern = |key: VertexKey, pos: Point, vertices: &mut Vec<Point>, keys: &mut Vec<VertexKey>| -> u32 {
        *index.entry(key).or_insert_with(|| {
            vertices.push(pos);
            keys.push(key);
            (vertices.len() - 1) as u32
        })
    };

    let corner_pos = [
        Point::new(-r, -r),
        Point::new(r, -r),
        Point::new(r, r),
        Point::new(-r, r),
    ];
    let corner_ids: Vec<u32> = (0..4u8)
        .map(|c| intern(VertexKey::Corner(c), corner_pos[c as usize], &mut vertices, &mut keys))
        .collect();

    // Node chains per clipped line and per window edge, keyed by a sort parameter.
    let mut line_chain: Vec<Vec<(f64, u32)>> = clipped.iter().map(|_| Vec::new()).collect();
    let mut edge_chain: [Vec<(f64, u32)>; 4] = Default::default();

    for (ci, c) in clipped.iter().enumerate() {
        let line = &lines[c.line_idx];
        for (t, edge) in [(c.t_in, c.edge_in), (c.t_out, c.edge_out)] {
            let pos = line.point_at(t);
            let v = intern(VertexKey::LineEdge(line.id, edge), pos, &mut vertices, &mut keys);
            line_chain[ci].push((t, v));
            edge_chain[edge as usize].push((edge_param(edge, pos), v));
        }
    }

    for i in 0..clipped.len() {
        for j in (i + 1)..clipped.len() {
            let (la, lb) = (&lines[clipped[i].line_idx], &lines[clipped[j].line_idx]);
            if la.family == lb.family {
                continue;
            }
            let p = intersect(la, lb)?;
            let ta = la.param_of(p);
            let tb = lb.param_of(p);
            let near_a = (ta - clipped[i].t_in).abs() < COINCIDENCE_TOL
                || (clipped[i].t_out - ta).abs() < COINCIDENCE_TOL;
            let near_b = (tb - clipped[j].t_in).abs() < COINCIDENCE_TOL
                || (clipped[j].t_out - tb).abs() < COINCIDENCE_TOL;
            let inside_a = ta > clipped[i].t_in && ta < clipped[i].t_out;
            let inside_b = tb > clipped[j].t_in && tb < clipped[j].t_out;
            if (inside_a || inside_b) && (near_a || near_b) {
                return Err(Error::Degenerate(format!(
                    "lines {} and {} cross within {COINCIDENCE_TOL:e} of the window boundary",
                    la.id, lb.id
                )));
            }
            if inside_a && inside_b {
                let (lo, hi) = if la.id < lb.id { (la.id, lb.id) } else { (lb.id, la.id) };
                let v = intern(VertexKey::LinePair(lo, hi), p, &mut vertices, &mut keys);
                line_chain[i].push((ta, v));
                line_chain[j].push((tb, v));
            }
        }
    }

    for (e, chain) in edge_chain.iter_mut().enumerate() {
        let start = corner_ids[e];
        let end = corner_ids[(e + 1) % 4];
        chain.push((edge_param(e as u8, corner_pos[e]), start));
        chain.push((edge_param(e as u8, corner_pos[(e + 1) % 4]), end));
    }

    // Half-edges from sorted chains.
    let mut he_from: Vec<u32> = Vec::new();
    let mut he_to: Vec<u32> = Vec::new();
    let mut emit_chain = |chain: &mut Vec<(f64, u32)>, what: &str| -> Result<()> {
        chain.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in chain.windows(2) {
            if w[1].0 - w[0].0 < COINCIDENCE_TOL {
                return Err(Error::Degenerate(format!(
                    "{what}: nodes at params {} and {} are within {COINCIDENCE_TOL:e} \
                     (three lines near one point or a near-corner crossing)",
                    w[0].0, w[1].0
                )));
            }
            he_from.push(w[0].1);
            he_to.push(w[1].1);
            he_from.push(w[1].1);
            he_to.push(w[0].1);
        }
        Ok(())
    };
    for (ci, chain) in line_chain.iter_mut().enumerate() {
        let id = lines[clipped[ci].line_idx].id;
        emit_chain(chain, &format!("line {id}"))?;
    }
    for (e, chain) in edge_chain.iter_mut().enumerate() {
        emit_chain(chain, &format!("window edge {e}"))?;
    }

    let he_count = he_from.len();
    // Twins are emitted pairwise: 2k and 2k+1.
    let twin = |h: usize| h ^ 1;

    // Outgoing half-edges per vertex, ordered counterclockwise by angle.
    let mut outgoing: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
    for h in 0..he_count {
        outgoing[he_from[h] as usize].push(h as u32);
    }
    for (v, out) in outgoing.iter_mut().enumerate() {
        let origin = vertices[v];
        out.sort_by(|&a, &b| {
            let pa = vertices[he_to[a as usize] as usize];
            let pb = vertices[he_to[b as usize] as usize];
            let aa = (pa.y - origin.y).atan2(pa.x - origin.x);
            let ab = (pb.y - origin.y).atan2(pb.x - origin.x);
            aa.partial_cmp(&ab).unwrap()
        });
    }
    let mut rank = vec![0u32; he_count];
    for out in &outgoing {
        for (k, &h) in out.iter().enumerate() {
            rank[h as usize] = k as u32;
        }
    }

    // next(h) = rotational predecessor of twin(h) around the head of h.
    let mut next = vec![0u32; he_count];
    for h in 0..he_count {
        let v = he_to[h] as usize;
        let out = &outgoing[v];
        let tw_rank = rank[twin(h)] as usize;
        next[h] = out[(tw_rank + out.len() - 1) % out.len()];
    }

    // Face walks.
    let mut visited = vec![false; he_count];
    let mut faces: Vec<Face> = Vec::new();
    let mut outer_faces = 0usize;
    for h0 in 0..he_count {
        if visited[h0] {
            continue;
        }
        let mut loop_vertices: Vec<Point> = Vec::new();
        let mut boundary = false;
        let mut h = h0;
        loop {
            visited[h] = true;
            let v = he_from[h] as usize;
            loop_vertices.push(vertices[v]);
            boundary |= keys[v].on_boundary();
            h = next[h] as usize;
            if h == h0 {
                break;
            }
        }
        let area = signed_area(&loop_vertices);
        if area > 0.0 {
            let lex_min = lex_min_point(&loop_vertices);
            faces.push(Face { vertices: loop_vertices, touches_boundary: boundary, area, lex_min });
        } else {
            outer_faces += 1;
        }
    }
    debug_assert_eq!(outer_faces, 1, "exactly one outer face expected");

    Ok(Arrangement {
        window,
        faces,
        vertex_count: vertices.len(),
        edge_count: he_count / 2,
    })
}

/// Liang–Barsky clip of a line to the square [−r, r]²; returns None when the
/// line misses the window.
fn clip_to_square(
    line_idx: usize,
    line: &crate::geometry::DirectedLine,
    r: f64,
) -> Result<Option<Clipped>> {
    let (dx, dy) = line.family.direction();
    let (nx, ny) = line.family.normal();
    let (px, py) = (line.offset * nx, line.offset * ny);

    let mut t_lo = f64::NEG_INFINITY;
    let mut t_hi = f64::INFINITY;
    // Track which wall produced each bound: 0 bottom, 1 right, 2 top, 3 left.
    let mut wall_lo = 0u8;
    let mut wall_hi = 0u8;

    // walls as (coefficient on t, constant, wall id) for constraint coeff·t + c ≤ r
    let constraints = [
        (dx, px, 1u8),   // x ≤ r (right)
        (-dx, -px, 3u8), // −x ≤ r (left)
        (dy, py, 2u8),   // y ≤ r (top)
        (-dy, -py, 0u8), // −y ≤ r (bottom)
    ];
    for (a, c, wall) in constraints {
        if a.abs() < 1e-15 {
            if c > r {
                return Ok(None);
            }
            continue;
        }
        let bound = (r - c) / a;
        if a > 0.0 {
            if bound < t_hi {
                t_hi = bound;
                wall_hi = wall;
            }
        } else if bound > t_lo {
            t_lo = bound;
            wall_lo = wall;
        }
    }

    if t_hi - t_lo < COINCIDENCE_TOL {
        // grazes a corner or misses entirely; a graze is a measure-zero event
        return Ok(None);
    }
    // Reject entry/exit points indistinguishable from a corner.
    for (t, wall) in [(t_lo, wall_lo), (t_hi, wall_hi)] {
        let p = line.point_at(t);
        let along = edge_param(wall, p);
        if along.abs() > r - COINCIDENCE_TOL {
            return Err(Error::Degenerate(format!(
                "line {} meets the window boundary within {COINCIDENCE_TOL:e} of a corner",
                line.id
            )));
        }
    }
    Ok(Some(Clipped {
        line_idx,
        t_in: t_lo,
        t_out: t_hi,
        edge_in: wall_lo,
        edge_out: wall_hi,
    }))
}

/// Sort parameter of a boundary point along its window edge, oriented CCW.
fn edge_param(edge: u8, p: Point) -> f64 {
    match edge {
        0 => p.x,  // bottom, left→right
        1 => p.y,  // right, bottom→top
        2 => -p.x, // top, right→left
        3 => -p.y, // left, top→bottom
        _ => unreachable!(),
    }
}

fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        s += a.x * b.y - a.y * b.x;
    }
    s / 2.0
}
