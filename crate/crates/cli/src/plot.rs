//! Minimal SVG line plots. Output depends only on the input points.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

pub struct Point {
    pub x: f64,
    pub y: f64,
    /// Drawn with an open marker when false.
    pub exact: bool,
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(t);
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// A polyline through `points` in order, with axes and a title.
pub fn line_plot(title: &str, x_label: &str, points: &[Point]) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    if points.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    y0 = y0.min(0.0);
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    let (left, bottom) = (MARGIN, HEIGHT - MARGIN);
    writeln!(
        s,
        r#"<path d="M{left:.2},{:.2} L{left:.2},{bottom:.2} L{:.2},{bottom:.2}" stroke="black" fill="none"/>"#,
        MARGIN,
        WIDTH - MARGIN
    )
    .unwrap();
    for t in ticks(x0, x1) {
        let x = sx(t);
        writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="10">{}</text>"#,
            bottom + 4.0,
            bottom + 16.0,
            fmt_tick(t)
        )
        .unwrap();
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="10">{}</text>"#,
            left - 4.0,
            left - 6.0,
            y + 3.0,
            fmt_tick(t)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    )
    .unwrap();
    if !points.is_empty() {
        let path: Vec<String> = points
            .iter()
            .enumerate()
            .map(|(i, p)| format!("{}{:.2},{:.2}", if i == 0 { 'M' } else { 'L' }, sx(p.x), sy(p.y)))
            .collect();
        writeln!(s, r#"<path d="{}" stroke="steelblue" stroke-width="1.5" fill="none"/>"#, path.join(" "))
            .unwrap();
    }
    for p in points.iter().filter(|p| !p.exact) {
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" stroke="firebrick" fill="white"/>"#,
            sx(p.x),
            sy(p.y)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_well_formed() {
        let pts: Vec<Point> = (0..20)
            .map(|i| Point {
                x: i as f64 / 2.0,
                y: (i as f64).sqrt(),
                exact: i % 5 != 0,
            })
            .collect();
        let a = line_plot("c<1>", "a", &pts);
        assert_eq!(a, line_plot("c<1>", "a", &pts));
        assert!(a.starts_with("<?xml") && a.ends_with("</svg>\n"));
        assert!(a.contains("c&lt;1&gt;"));
        assert_eq!(a.matches("<circle").count(), 4);
    }

    #[test]
    fn tick_values() {
        assert_eq!(ticks(0.0, 10.0), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(fmt_tick(0.5), "0.5");
        assert_eq!(fmt_tick(2.0), "2");
    }
}
