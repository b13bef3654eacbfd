use std::fmt::Write;

use slopecalc::Rational;

const UNIT: f64 = 60.0;
const MARGIN: f64 = 30.0;

pub struct Curve<'a> {
    pub name: &'a str,
    pub color: &'a str,
    pub dashed: bool,
    pub vertices: &'a [(i64, Rational)],
}

/// SVG document with an integer grid and one polyline per curve.
pub fn svg(curves: &[Curve]) -> String {
    let pts = curves.iter().flat_map(|c| c.vertices.iter());
    let (mut x_max, mut y_min, mut y_max) = (1i64, 0i64, 1i64);
    for (x, y) in pts {
        x_max = x_max.max(*x);
        let v = y.to_f64();
        y_min = y_min.min(v.floor() as i64);
        y_max = y_max.max(v.ceil() as i64);
    }
    let w = x_max as f64 * UNIT + 2.0 * MARGIN;
    let h = (y_max - y_min) as f64 * UNIT + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + x * UNIT;
    let py = |y: f64| MARGIN + (y_max as f64 - y) * UNIT;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    )
    .unwrap();
    writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
    writeln!(out, r##"<g stroke="#dddddd" stroke-width="1">"##).unwrap();
    for x in 0..=x_max {
        let gx = px(x as f64);
        writeln!(out, r#"<line x1="{gx:.1}" y1="{:.1}" x2="{gx:.1}" y2="{:.1}"/>"#, py(y_max as f64), py(y_min as f64)).unwrap();
    }
    for y in y_min..=y_max {
        let gy = py(y as f64);
        writeln!(out, r#"<line x1="{:.1}" y1="{gy:.1}" x2="{:.1}" y2="{gy:.1}"/>"#, px(0.0), px(x_max as f64)).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    for c in curves {
        let points: Vec<String> = c
            .vertices
            .iter()
            .map(|(x, y)| format!("{:.1},{:.1}", px(*x as f64), py(y.to_f64())))
            .collect();
        let dash = if c.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        writeln!(
            out,
            r#"<polyline class="{}" fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
            c.name,
            c.color,
            points.join(" ")
        )
        .unwrap();
        for (x, y) in c.vertices {
            writeln!(
                out,
                r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{}"><title>{} ({x}, {y})</title></circle>"#,
                px(*x as f64),
                py(y.to_f64()),
                c.color,
                c.name
            )
            .unwrap();
        }
    }
    for (i, c) in curves.iter().enumerate() {
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#,
            MARGIN,
            MARGIN / 2.0 + 12.0 * i as f64,
            c.color,
            c.name
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
