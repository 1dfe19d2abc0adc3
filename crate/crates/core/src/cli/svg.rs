//! A minimal SVG writer for line plots and cell maps.

use std::fmt::Write;

/// Maps data coordinates into a pixel rectangle.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl Frame {
    pub fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x_range.0) / (self.x_range.1 - self.x_range.0) * self.width
    }

    pub fn py(&self, y: f64) -> f64 {
        self.top + self.height
            - (y - self.y_range.0) / (self.y_range.1 - self.y_range.0) * self.height
    }
}

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn tick_text(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            body: String::new(),
        }
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}" stroke="none"/>"#
        );
    }

    pub fn polyline(&mut self, frame: &Frame, points: &[(f64, f64)], stroke: &str, width: f64) {
        let pts: Vec<String> = points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        if pts.len() < 2 {
            return;
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            pts.join(" ")
        );
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str, size: f64, anchor: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="{size}" text-anchor="{anchor}">{}</text>"#,
            escape(s)
        );
    }

    /// Frame border, five ticks per axis and axis titles.
    pub fn axes(&mut self, f: &Frame, x_label: &str, y_label: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            f.left, f.top, f.width, f.height
        );
        for i in 0..=4 {
            let a = i as f64 / 4.0;
            let xv = f.x_range.0 + a * (f.x_range.1 - f.x_range.0);
            let yv = f.y_range.0 + a * (f.y_range.1 - f.y_range.0);
            let (px, py) = (f.px(xv), f.py(yv));
            let bottom = f.top + f.height;
            let _ = writeln!(
                self.body,
                r#"<line x1="{px:.2}" y1="{bottom:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
                bottom + 5.0
            );
            let _ = writeln!(
                self.body,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="black"/>"#,
                f.left - 5.0,
                f.left
            );
            self.text(px, bottom + 18.0, &tick_text(xv), 11.0, "middle");
            self.text(f.left - 8.0, py + 4.0, &tick_text(yv), 11.0, "end");
        }
        self.text(
            f.left + f.width / 2.0,
            f.top + f.height + 36.0,
            x_label,
            13.0,
            "middle",
        );
        let (lx, ly) = (f.left - 45.0, f.top + f.height / 2.0);
        let _ = writeln!(
            self.body,
            r#"<text x="{lx:.2}" y="{ly:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
            escape(y_label)
        );
    }

    /// The document, with `comment` placed in a leading XML comment.
    pub fn finish(self, comment: &str) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--\n{}\n-->\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{}</svg>\n",
            comment.replace("--", "- -"),
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

/// Range of finite values padded by 5 %; a unit interval around a constant.
pub fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_is_well_formed_enough() {
        let mut s = Svg::new(200.0, 100.0);
        let f = Frame {
            left: 50.0,
            top: 10.0,
            width: 140.0,
            height: 60.0,
            x_range: (0.0, 1.0),
            y_range: (0.0, 1.0),
        };
        s.axes(&f, "x", "y");
        s.polyline(&f, &[(0.0, 0.0), (1.0, 1.0)], "red", 1.0);
        s.text(10.0, 10.0, "a<b", 10.0, "start");
        let doc = s.finish("config -- echo");
        assert!(doc.starts_with("<?xml") && doc.trim_end().ends_with("</svg>"));
        assert!(doc.contains("a&lt;b") && !doc.contains("config -- echo"));
        assert_eq!(f.px(0.5), 120.0);
        assert_eq!(f.py(1.0), 10.0);
    }
}
