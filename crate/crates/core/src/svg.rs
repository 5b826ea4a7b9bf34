//! SVG output: tessellation renders, sampled cells and simplex heatmaps.
//! Plain string assembly; every document has a single `<svg>` root.

use crate::analytic::ScanRow;
use crate::arrangement::Arrangement;
use crate::cell_sampler::CellSample;
use crate::geometry::Point;

/// Fill tints for interior faces by vertex count 3..=6.
const FACE_TINTS: [&str; 4] = ["#e76f51", "#e9c46a", "#2a9d8f", "#264653"];
const BOUNDARY_TINT: &str = "#f2f2f2";

/// 256-step linear color map between these two anchors, dark to bright.
const HEAT_LOW: (u8, u8, u8) = (29, 53, 87);
const HEAT_HIGH: (u8, u8, u8) = (255, 183, 3);

fn document(width: u32, height: u32, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n{body}</svg>\n"
    )
}

fn polygon_tag(points: &[(f64, f64)], fill: &str, stroke: &str, stroke_width: f64) -> String {
    let pts: Vec<String> = points.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    format!(
        "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{stroke_width}\"/>\n",
        pts.join(" ")
    )
}

/// Render the clipped arrangement with interior faces tinted by vertex count.
pub fn tessellation_svg(arr: &Arrangement, title: &str) -> String {
    let size = 820.0;
    let margin = 10.0;
    let r = arr.window.half_width;
    let scale = (size - 2.0 * margin) / (2.0 * r);
    let map = |p: Point| ((p.x + r) * scale + margin, (r - p.y) * scale + margin);

    let mut body = String::new();
    body.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n"
    ));
    for face in arr.faces() {
        let fill = if face.touches_boundary {
            BOUNDARY_TINT
        } else {
            FACE_TINTS[face.vertex_count().clamp(3, 6) - 3]
        };
        let pts: Vec<(f64, f64)> = face.vertices.iter().map(|&v| map(v)).collect();
        body.push_str(&polygon_tag(&pts, fill, "#333333", 0.6));
    }
    body.push_str(&format!(
        "<text x=\"{margin}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\">{}</text>\n",
        size - 2.0,
        escape(title)
    ));
    document(size as u32, size as u32, &body)
}

/// Draw sampled typical cells in a row, each scaled into its own box and
/// labeled with its configuration.
pub fn cells_svg(samples: &[CellSample]) -> String {
    let box_size = 220.0;
    let margin = 16.0;
    let width = margin + samples.len() as f64 * (box_size + margin);
    let height = box_size + 2.0 * margin + 16.0;

    let mut body = String::new();
    body.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    for (k, sample) in samples.iter().enumerate() {
        let verts = sample.polygon.vertices();
        let (mut lo_x, mut hi_x) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in &verts {
            lo_x = lo_x.min(v.x);
            hi_x = hi_x.max(v.x);
            lo_y = lo_y.min(v.y);
            hi_y = hi_y.max(v.y);
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
        let scale = (box_size - 20.0) / span;
        let x0 = margin + k as f64 * (box_size + margin);
        let map = |p: Point| {
            (
                x0 + 10.0 + (p.x - lo_x) * scale,
                margin + 10.0 + (hi_y - p.y) * scale,
            )
        };
        let n = sample.z.len();
        let pts: Vec<(f64, f64)> = verts.iter().map(|&v| map(v)).collect();
        body.push_str(&polygon_tag(&pts, FACE_TINTS[n.clamp(3, 6) - 3], "#222222", 1.0));
        body.push_str(&format!(
            "<text x=\"{x0}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\">{} (n={})</text>\n",
            margin + box_size + 14.0,
            escape(&sample.label),
            n
        ));
    }
    document(width.ceil() as u32, height.ceil() as u32, &body)
}

/// Scan component selector for heatmaps and CSV columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanComponent {
    P3,
    P4,
    P5,
    P6,
    Para,
    Trap,
}

impl ScanComponent {
    pub fn name(self) -> &'static str {
        match self {
            ScanComponent::P3 => "p3",
            ScanComponent::P4 => "p4",
            ScanComponent::P5 => "p5",
            ScanComponent::P6 => "p6",
            ScanComponent::Para => "para",
            ScanComponent::Trap => "trap",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "p3" | "3" => Some(ScanComponent::P3),
            "p4" | "4" => Some(ScanComponent::P4),
            "p5" | "5" => Some(ScanComponent::P5),
            "p6" | "6" => Some(ScanComponent::P6),
            "para" => Some(ScanComponent::Para),
            "trap" => Some(ScanComponent::Trap),
            _ => None,
        }
    }

    pub fn of(self, row: &ScanRow) -> f64 {
        match self {
            ScanComponent::P3 => row.p3,
            ScanComponent::P4 => row.p4,
            ScanComponent::P5 => row.p5,
            ScanComponent::P6 => row.p6,
            ScanComponent::Para => row.para,
            ScanComponent::Trap => row.trap,
        }
    }
}

fn heat_color(t: f64) -> String {
    // quantize to 256 steps, then linear interpolation
    let step = ((t.clamp(0.0, 1.0) * 255.0).round() as u32) as f64 / 255.0;
    let lerp = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * step).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(HEAT_LOW.0, HEAT_HIGH.0),
        lerp(HEAT_LOW.1, HEAT_HIGH.1),
        lerp(HEAT_LOW.2, HEAT_HIGH.2)
    )
}

/// Heatmap of one scan component over the simplex grid. Each grid point
/// becomes a quad of side `step`; the simplex boundary is drawn on top.
pub fn heatmap_svg(rows: &[ScanRow], step: f64, component: ScanComponent) -> String {
    let size = 640.0;
    let margin = 60.0;
    let plot = size - 2.0 * margin;
    let map = |p: f64, q: f64| (margin + p * plot, size - margin - q * plot);

    let values: Vec<f64> = rows.iter().map(|r| component.of(r)).collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(1e-300);

    let mut body = String::new();
    body.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n"
    ));
    let cell = step * plot;
    for (row, &v) in rows.iter().zip(&values) {
        let (x, y) = map(row.p, row.q);
        body.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
            x - cell / 2.0,
            y - cell / 2.0,
            cell,
            cell,
            heat_color((v - lo) / span)
        ));
    }
    // simplex boundary p ≥ 0, q ≥ 0, p + q ≤ 1
    let (ax, ay) = map(0.0, 0.0);
    let (bx, by) = map(1.0, 0.0);
    let (cx, cy) = map(0.0, 1.0);
    body.push_str(&format!(
        "<path d=\"M {ax:.1} {ay:.1} L {bx:.1} {by:.1} L {cx:.1} {cy:.1} Z\" fill=\"none\" \
         stroke=\"#000000\" stroke-width=\"1.2\"/>\n"
    ));
    body.push_str(&format!(
        "<text x=\"{margin}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{} over (p, q); \
         range [{:.6}, {:.6}]</text>\n",
        component.name(),
        lo,
        hi
    ));
    body.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\">p</text>\n",
        size - margin + 8.0,
        size - margin + 4.0
    ));
    body.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\">q</text>\n",
        margin - 16.0,
        margin - 8.0
    ));
    document(size as u32, size as u32, &body)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
