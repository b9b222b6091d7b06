use std::fmt::Write;

use danzer::{Error, Point, Result, Window};

const MARGIN: f64 = 10.0;

/// Static scatter plot of planar points; identical inputs give identical bytes.
pub fn emit_svg(points: &[Point<f64>], w: &Window<f64>, px_per_unit: f64) -> Result<String> {
    if w.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: w.dim(),
        });
    }
    if !(px_per_unit > 0.0 && px_per_unit.is_finite()) {
        return Err(Error::InvalidArgument("pixels per unit must be positive".into()));
    }
    let (x0, y0) = (w.lower()[0], w.lower()[1]);
    let (x1, y1) = (w.upper()[0], w.upper()[1]);
    let width = (x1 - x0) * px_per_unit + 2.0 * MARGIN;
    let height = (y1 - y0) * px_per_unit + 2.0 * MARGIN;
    let sx = |x: f64| (x - x0) * px_per_unit + MARGIN;
    let sy = |y: f64| (y1 - y) * px_per_unit + MARGIN;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{width:.2}" height="{height:.2}" fill="white"/>"#);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1" fill="none">"#);
    let _ = writeln!(
        s,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
        sx(x0),
        sy(y1),
        sx(x1) - sx(x0),
        sy(y0) - sy(y1)
    );
    if x0 < 0.0 && 0.0 < x1 {
        let _ = writeln!(s, r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}"/>"#, sx(0.0), sy(y1), sy(y0));
    }
    if y0 < 0.0 && 0.0 < y1 {
        let _ = writeln!(s, r#"<line x1="{1:.2}" y1="{0:.2}" x2="{2:.2}" y2="{0:.2}"/>"#, sy(0.0), sx(x0), sx(x1));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="steelblue">"#);
    for p in points {
        check_point(p)?;
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, sx(p[0]), sy(p[1]));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn check_point(p: &Point<f64>) -> Result<()> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.dim(),
        });
    }
    Ok(())
}
