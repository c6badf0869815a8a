//! SVG and PPM pictures of a fundamental domain, one fill per color.

use std::fmt::Write as _;

use super::PeriodicColoring;
use crate::lattice::Vertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

/// Golden-angle hues at three lightness levels; integer arithmetic only so
/// the bytes never depend on the platform.
pub fn palette(index: usize) -> Rgb {
    let hue = (index as u32 * 137) % 360;
    let (lo, hi) = match index % 3 {
        0 => (60u32, 230u32),
        1 => (40, 190),
        _ => (90, 250),
    };
    let span = hi - lo;
    let x = |h: u32| lo + span * h / 60;
    let (r, g, b) = match hue / 60 {
        0 => (hi, x(hue % 60), lo),
        1 => (hi - span * (hue % 60) / 60, hi, lo),
        2 => (lo, hi, x(hue % 60)),
        3 => (lo, hi - span * (hue % 60) / 60, hi),
        4 => (x(hue % 60), lo, hi),
        _ => (hi, lo, hi - span * (hue % 60) / 60),
    };
    Rgb(r as u8, g as u8, b as u8)
}

/// Row b = 0 is drawn at the bottom. The legend lists color index and value.
pub fn render_svg(c: &PeriodicColoring, cell: u32) -> String {
    let cell = cell.max(1) as i64;
    let legend_h = 16 * c.colors.len() as i64 + 8;
    let w = (c.width * cell).max(160);
    let h = c.height * cell + legend_h;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        s,
        "<title>{} coloring, period ({},0) (0,{}), {} colors</title>",
        c.kind,
        c.width,
        c.height,
        c.colors.len()
    );
    for b in 0..c.height {
        for a in 0..c.width {
            let slot = c.color_slot(Vertex::new(a, b));
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{cell}" height="{cell}" fill="{}"/>"#,
                a * cell,
                (c.height - 1 - b) * cell,
                palette(slot).hex()
            );
        }
    }
    let top = c.height * cell + 4;
    for (i, color) in c.colors.iter().enumerate() {
        let y = top + 16 * i as i64;
        let _ = writeln!(
            s,
            r#"<rect x="4" y="{y}" width="12" height="12" fill="{}"/>"#,
            palette(i).hex()
        );
        let _ = writeln!(
            s,
            r#"<text x="22" y="{}" font-family="monospace" font-size="12">color {} value {}</text>"#,
            y + 11,
            color.index,
            color.value
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Binary PPM (P6); the legend goes into header comments.
pub fn render_ppm(c: &PeriodicColoring, cell: u32) -> Vec<u8> {
    let cell = cell.max(1) as i64;
    let (w, h) = (c.width * cell, c.height * cell);
    let mut header = String::from("P6\n");
    for (i, color) in c.colors.iter().enumerate() {
        let rgb = palette(i);
        let _ = writeln!(
            header,
            "# color {} value {} rgb {} {} {}",
            color.index, color.value, rgb.0, rgb.1, rgb.2
        );
    }
    let _ = write!(header, "{w} {h}\n255\n");
    let mut out = header.into_bytes();
    out.reserve((w * h * 3) as usize);
    for y in 0..h {
        let b = c.height - 1 - y / cell;
        for x in 0..w {
            let rgb = palette(c.color_slot(Vertex::new(x / cell, b)));
            out.extend_from_slice(&[rgb.0, rgb.1, rgb.2]);
        }
    }
    out
}
