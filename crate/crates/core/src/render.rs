//! SVG rendering: one unit square per cell, larger `y` drawn higher.

use std::fmt::Write as _;

use crate::geometry::{ColorId, Polyomino};

const UNIT: i32 = 16;
const GAP: i32 = 2;

fn fill(c: ColorId) -> &'static str {
    match c {
        ColorId::GRAY => "gray",
        ColorId::BLACK => "black",
        ColorId::RED => "red",
        ColorId::GREEN => "green",
        ColorId::BLUE => "blue",
        ColorId::PURPLE => "purple",
        ColorId::ORANGE => "orange",
        _ => "silver",
    }
}

/// Renders named polyominoes left to right, each in its own `<g>`.
pub fn to_svg(pieces: &[(String, Polyomino)]) -> String {
    let width: i32 = pieces.iter().map(|(_, p)| p.width() + GAP).sum::<i32>() - GAP;
    let height = pieces.iter().map(|(_, p)| p.height()).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = width.max(0) * UNIT + 2,
        h = height * UNIT + 2,
    );
    let mut x0 = 0;
    for (name, p) in pieces {
        let _ = writeln!(out, r#"  <g id="{}">"#, escape(name));
        for (c, col) in p.cells() {
            let x = (x0 + c.x) * UNIT + 1;
            let y = (height - 1 - c.y) * UNIT + 1;
            let _ = writeln!(
                out,
                r#"    <rect x="{x}" y="{y}" width="{UNIT}" height="{UNIT}" fill="{}" stroke="white" stroke-width="1"/>"#,
                fill(*col)
            );
        }
        out.push_str("  </g>\n");
        x0 += p.width() + GAP;
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Cell;

    #[test]
    fn single_gray_cell() {
        let svg = to_svg(&[("a".into(), Polyomino::rectangle(1, 1, ColorId::GRAY))]);
        assert_eq!(svg.matches("<rect").count(), 1);
        assert!(svg.contains(r#"fill="gray""#));
        assert_eq!(svg.matches("<g ").count(), 1);
    }

    #[test]
    fn higher_cells_are_drawn_above() {
        let p = Polyomino::from_cells([(Cell::new(0, 0), ColorId::RED), (Cell::new(0, 1), ColorId::BLUE)]).unwrap();
        let svg = to_svg(&[("p".into(), p)]);
        let red = svg.find(r#"y="17" width="16" height="16" fill="red""#);
        let blue = svg.find(r#"y="1" width="16" height="16" fill="blue""#);
        assert!(red.is_some() && blue.is_some());
    }
}
