//! Static SVG figure of a domain and its Cheeger set.

use std::fmt::Write;

use cheeger_core::{ArcBoundaryRegion, BoundaryPiece, Point2, Polygon};

/// Side of the square viewport in user units.
pub const VIEWPORT: f64 = 1000.0;
const MARGIN: f64 = 40.0;

/// Maps plane coordinates into the viewport (y pointing down), preserving
/// the aspect ratio and centering the domain.
#[derive(Clone, Copy, Debug)]
struct Frame {
    scale: f64,
    offset: Point2,
    lo: Point2,
}

impl Frame {
    fn fit(lo: Point2, hi: Point2) -> Self {
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
        let scale = (VIEWPORT - 2.0 * MARGIN) / span;
        let offset = Point2::new(
            (VIEWPORT - scale * (hi.x - lo.x)) / 2.0,
            (VIEWPORT - scale * (hi.y - lo.y)) / 2.0,
        );
        Self { scale, offset, lo }
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        (
            self.offset.x + self.scale * (p.x - self.lo.x),
            VIEWPORT - (self.offset.y + self.scale * (p.y - self.lo.y)),
        )
    }
}

fn polygon_path(frame: &Frame, polygon: &Polygon) -> String {
    let mut d = String::new();
    for (k, p) in polygon.vertices().iter().enumerate() {
        let (x, y) = frame.map(*p);
        let cmd = if k == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{x:.4},{y:.4} ");
    }
    d.push('Z');
    d
}

/// Segments become `L` commands and arcs `A` commands. Each arc is drawn as
/// two halves so no single command spans more than half a turn; the y flip
/// turns counter-clockwise plane arcs into sweep-flag 1 on screen.
fn region_path(frame: &Frame, region: &ArcBoundaryRegion) -> String {
    let mut d = String::new();
    let pieces = region.pieces();
    let (x0, y0) = frame.map(pieces[0].start_point());
    let _ = write!(d, "M{x0:.4},{y0:.4} ");
    for piece in pieces {
        match *piece {
            BoundaryPiece::Segment { end, .. } => {
                let (x, y) = frame.map(end);
                let _ = write!(d, "L{x:.4},{y:.4} ");
            }
            BoundaryPiece::Arc {
                center,
                radius,
                angle_start,
                angle_end,
            } => {
                let r = radius * frame.scale;
                let mid = 0.5 * (angle_start + angle_end);
                for angle in [mid, angle_end] {
                    let (x, y) = frame.map(center + Point2::polar(angle) * radius);
                    let _ = write!(d, "A{r:.4},{r:.4} 0 0 1 {x:.4},{y:.4} ");
                }
            }
        }
    }
    d.push('Z');
    d
}

/// Domain outline in black and Cheeger-set boundary in red.
pub fn render(domain: &Polygon, cheeger_set: &ArcBoundaryRegion) -> String {
    let (dlo, dhi) = domain.bbox();
    let (clo, chi) = cheeger_set.bbox();
    let lo = Point2::new(dlo.x.min(clo.x), dlo.y.min(clo.y));
    let hi = Point2::new(dhi.x.max(chi.x), dhi.y.max(chi.y));
    let frame = Frame::fit(lo, hi);
    let size = VIEWPORT;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
         <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n\
         <path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n\
         <path d=\"{}\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n\
         </svg>\n",
        polygon_path(&frame, domain),
        region_path(&frame, cheeger_set),
    )
}
