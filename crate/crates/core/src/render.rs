//! ASCII and SVG pictures of planar patterns on a window.
//!
//! The SVG draws the geometric realization: member vertices as dots, member
//! edges as thin lines, fully member unit squares shaded, boundary edges
//! bold, and an optional current as arrows along its nonzero edges.

use std::fmt::Write as _;

use crate::catalog2d::classify_boundary;
use crate::currents::Current;
use crate::error::{Error, Result};
use crate::lattice::{Pattern, Point, Window, WindowGraph};

fn require_2d(w: &Window) -> Result<()> {
    if w.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: w.dim(),
        });
    }
    Ok(())
}

/// One character per vertex, top row first: `#` member, `.` non-member,
/// `+` member on the boundary.
pub fn ascii(a: &Pattern, w: &Window) -> Result<String> {
    require_2d(w)?;
    let b = classify_boundary(a, w)?;
    let mut s = String::new();
    for y in (w.lo()[1]..=w.hi()[1]).rev() {
        for x in w.lo()[0]..=w.hi()[0] {
            let p = Point::from([x, y]);
            s.push(match (a.contains(&p), b.degree.contains_key(&p)) {
                (true, true) => '+',
                (true, false) => '#',
                _ => '.',
            });
        }
        s.push('\n');
    }
    Ok(s)
}

const CELL: i64 = 20;
const MARGIN: i64 = 20;

/// A deterministic SVG document; identical inputs give identical bytes.
pub fn svg(a: &Pattern, w: &Window, current: Option<&Current>) -> Result<String> {
    require_2d(w)?;
    let (x0, y0) = (w.lo()[0], w.lo()[1]);
    let (x1, y1) = (w.hi()[0], w.hi()[1]);
    let px = |x: i64| MARGIN + (x - x0) * CELL;
    let py = |y: i64| MARGIN + (y1 - y) * CELL;
    let width = 2 * MARGIN + (x1 - x0) * CELL;
    let height = 2 * MARGIN + (y1 - y0) * CELL;
    let m = |x: i64, y: i64| a.contains(&Point::from([x, y]));

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    s.push_str(concat!(
        r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="5" markerHeight="5" orient="auto">"#,
        r#"<path d="M0,0 L10,5 L0,10 z" fill="black"/></marker></defs>"#,
        "\n"
    ));
    writeln!(
        s,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    )
    .unwrap();

    s.push_str("<g fill=\"#d0d8e8\">\n");
    for y in y0..y1 {
        for x in x0..x1 {
            if m(x, y) && m(x + 1, y) && m(x, y + 1) && m(x + 1, y + 1) {
                writeln!(
                    s,
                    r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}"/>"#,
                    px(x),
                    py(y + 1)
                )
                .unwrap();
            }
        }
    }
    s.push_str("</g>\n");

    s.push_str("<g stroke=\"#7080a0\" stroke-width=\"1\">\n");
    for y in y0..=y1 {
        for x in x0..=x1 {
            if !m(x, y) {
                continue;
            }
            if x < x1 && m(x + 1, y) {
                writeln!(
                    s,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    px(x),
                    py(y),
                    px(x + 1),
                    py(y)
                )
                .unwrap();
            }
            if y < y1 && m(x, y + 1) {
                writeln!(
                    s,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    px(x),
                    py(y),
                    px(x),
                    py(y + 1)
                )
                .unwrap();
            }
        }
    }
    s.push_str("</g>\n");

    let b = classify_boundary(a, w)?;
    s.push_str("<g stroke=\"black\" stroke-width=\"4\" stroke-linecap=\"round\">\n");
    for e in &b.boundary_edges {
        let (p, q) = (&e.lo, e.hi());
        writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            px(p[0]),
            py(p[1]),
            px(q[0]),
            py(q[1])
        )
        .unwrap();
    }
    s.push_str("</g>\n");

    for y in y0..=y1 {
        for x in x0..=x1 {
            let fill = if m(x, y) { "black" } else { "white" };
            writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="3" fill="{fill}" stroke="black" stroke-width="1"/>"#,
                px(x),
                py(y)
            )
            .unwrap();
        }
    }

    if let Some(c) = current {
        require_2d(&c.window)?;
        let g = WindowGraph::new(&c.window);
        s.push_str("<g stroke=\"#c02020\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\">\n");
        for (e, &(i, j, _)) in g.edges.iter().enumerate() {
            let (from, to) = match c.values[e] {
                1 => (&g.points[i], &g.points[j]),
                -1 => (&g.points[j], &g.points[i]),
                _ => continue,
            };
            if !w.in_closure(from) || !w.in_closure(to) {
                continue;
            }
            // shortened so the head sits between the two dots
            let (fx, fy, tx, ty) = (px(from[0]), py(from[1]), px(to[0]), py(to[1]));
            let (dx, dy) = ((tx - fx).signum() * 5, (ty - fy).signum() * 5);
            writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                fx + dx,
                fy + dy,
                tx - dx,
                ty - dy
            )
            .unwrap();
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}
