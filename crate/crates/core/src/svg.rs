//! Static SVG rendering of a decomposition: filled cells, the hull outline,
//! and every point labelled with its radial rank and sign.
//!
//! Output depends only on the inputs, so identical inputs give identical
//! bytes.

use std::fmt::Write as _;

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::geom::{convex_hull, PointSet};
use crate::radial::{RadialStructure, Sign};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

pub fn render_svg(d: &Decomposition, ps: &PointSet) -> Result<String> {
    if d.is_empty() {
        return Err(Error::NothingToRender);
    }
    let rs = RadialStructure::build(ps)?;
    let hull = convex_hull(ps)?;
    let pts = ps.points();
    let (minx, maxx) = (pts.iter().map(|p| p.x).min().unwrap(), pts.iter().map(|p| p.x).max().unwrap());
    let (miny, maxy) = (pts.iter().map(|p| p.y).min().unwrap(), pts.iter().map(|p| p.y).max().unwrap());
    let span = ((maxx - minx).max(maxy - miny)).max(1) as f64;
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let xy = |i: usize| {
        let p = ps.point(i);
        (MARGIN + (p.x - minx) as f64 * scale, SIZE - MARGIN - (p.y - miny) as f64 * scale)
    };
    let path = |vs: &[usize]| {
        let parts: Vec<String> = vs
            .iter()
            .map(|&v| {
                let (x, y) = xy(v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        parts.join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, cell) in d.canonical_cells().iter().enumerate() {
        // golden-angle hue steps keep neighbouring indices apart
        let hue = (i * 137) % 360;
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="hsl({hue},65%,75%)" stroke="black" stroke-width="1"/>"#,
            path(cell.vertices())
        );
    }
    let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="3"/>"#, path(hull.vertices()));
    for r in 1..=rs.n() {
        let v = rs.p(r);
        let (x, y) = xy(v);
        let sign = match rs.sign(r) {
            Some(Sign::Plus) => "+",
            Some(Sign::Minus) => "\u{2212}",
            None => "",
        };
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">p{r}{sign}</text>"#,
            x + 5.0,
            y - 5.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::baseline_decompose;
    use crate::decomposition::Source;
    use crate::io::parse_points;

    #[test]
    fn three_cells_five_labels() {
        let ps = parse_points("0 0\n4 0\n5 3\n2 1\n0 4\n").unwrap();
        let d = baseline_decompose(&ps).unwrap();
        let svg = render_svg(&d, &ps).unwrap();
        // three cells plus the hull outline
        assert_eq!(svg.matches("<polygon").count(), 4);
        assert_eq!(svg.matches("<text").count(), 5);
        assert!(svg.contains(">p3\u{2212}<") && svg.contains(">p4+<"));
        assert_eq!(svg, render_svg(&d, &ps).unwrap());
    }

    #[test]
    fn empty_is_an_error() {
        let ps = parse_points("0 0\n4 0\n0 4\n").unwrap();
        let d = Decomposition::new(Vec::new(), Source::External);
        assert_eq!(render_svg(&d, &ps).unwrap_err().to_string(), "nothing to render");
    }
}
