//! Minimal deterministic SVG line and band charts.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Shaded region between two curves sampled on the same abscissae.
#[derive(Clone, Debug, PartialEq)]
pub struct Band {
    pub x: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Fixed y-range; otherwise padded data range.
    pub y_range: Option<(f64, f64)>,
    pub series: Vec<Series>,
    pub band: Option<Band>,
}

fn finite_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values
        .filter(|v| v.is_finite())
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

fn widen((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac < 1.5 {
        1.0
    } else if frac < 3.5 {
        2.0
    } else if frac < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, f64) {
    let step = nice_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), step)
}

/// Labels for one axis, sharing a single fixed or exponent format.
fn tick_labels(values: &[f64], step: f64) -> Vec<String> {
    let extent = values.iter().fold(step, |m, v| m.max(v.abs()));
    let exponent = !(1e-3..1e5).contains(&extent);
    values
        .iter()
        .map(|&v| {
            let v = if v.abs() < step * 1e-9 { 0.0 } else { v };
            if exponent {
                let digits = ((extent.log10().floor() - step.log10().floor()).max(0.0) as usize).min(6);
                format!("{v:.digits$e}")
            } else {
                let decimals = (-step.log10().floor()).max(0.0) as usize;
                format!("{v:.decimals$}")
            }
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Chart {
    pub fn render(&self) -> String {
        let xs = self.series.iter().flat_map(|s| s.x.iter().copied());
        let band_x = self.band.iter().flat_map(|b| b.x.iter().copied());
        let (x0, x1) = match finite_range(xs.chain(band_x)) {
            Some((lo, hi)) if hi > lo => (lo, hi),
            Some(r) => widen(r),
            None => (0.0, 1.0),
        };
        let (y0, y1) = self.y_range.unwrap_or_else(|| {
            let ys = self.series.iter().flat_map(|s| s.y.iter().copied());
            let band_y = self.band.iter().flat_map(|b| b.lower.iter().chain(&b.upper).copied());
            finite_range(ys.chain(band_y)).map(widen).unwrap_or((0.0, 1.0))
        });
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let py = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="16">{}</text>"#,
            LEFT + pw / 2.0,
            TOP / 2.0 + 6.0,
            escape(&self.title)
        );

        let (xt, xstep) = ticks(x0, x1);
        for (v, label) in xt.iter().zip(tick_labels(&xt, xstep)) {
            let x = px(*v);
            let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/>"##, TOP, TOP + ph);
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                TOP + ph + 18.0,
                label
            );
        }
        let (yt, ystep) = ticks(y0, y1);
        for (v, label) in yt.iter().zip(tick_labels(&yt, ystep)) {
            let y = py(*v);
            let _ = writeln!(s, r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##, LEFT + pw);
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                y + 4.0,
                label
            );
        }
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        let clamp = |y: f64| y.clamp(y0, y1);
        if let Some(b) = &self.band {
            let mut pts = Vec::new();
            for (x, y) in b.x.iter().zip(&b.upper) {
                if x.is_finite() && y.is_finite() {
                    pts.push(format!("{:.3},{:.3}", px(*x), py(clamp(*y))));
                }
            }
            for (x, y) in b.x.iter().zip(&b.lower).rev() {
                if x.is_finite() && y.is_finite() {
                    pts.push(format!("{:.3},{:.3}", px(*x), py(clamp(*y))));
                }
            }
            let _ = writeln!(
                s,
                r##"<polygon points="{}" fill="#888888" fill-opacity="0.3" stroke="none"/>"##,
                pts.join(" ")
            );
        }

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = series
                .x
                .iter()
                .zip(&series.y)
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(x, y)| format!("{:.3},{:.3}", px(*x), py(clamp(*y))))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
            let ly = TOP + 10.0 + 18.0 * i as f64;
            let lx = LEFT + pw + 12.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
                lx + 20.0
            );
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&series.label));
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart {
            title: "P_up".into(),
            x_label: "t (s)".into(),
            y_label: "probability".into(),
            y_range: Some((0.0, 1.0)),
            series: vec![Series { label: "P_up".into(), x: vec![0.0, 1.0, 2.0], y: vec![0.0, 0.5, 0.25] }],
            band: None,
        }
    }

    #[test]
    fn one_polyline_and_deterministic() {
        let a = chart().render();
        assert_eq!(a, chart().render());
        assert_eq!(a.matches("<polyline").count(), 1);
        assert!(a.contains(">0.0<") && a.contains(">1.0<"));
        assert!(!a.contains("<polygon"));
    }

    #[test]
    fn band_renders_polygon() {
        let mut c = chart();
        c.band = Some(Band { x: vec![0.0, 1.0], lower: vec![0.1, 0.2], upper: vec![0.3, 0.4] });
        assert_eq!(c.render().matches("<polygon").count(), 1);
    }

    #[test]
    fn tick_label_formats() {
        assert_eq!(ticks(0.0, 1.0).0.len(), 6);
        assert_eq!(tick_labels(&[0.0, 0.2, 0.4], 0.2), ["0.0", "0.2", "0.4"]);
        assert_eq!(tick_labels(&[0.0, 1e-6, 2e-6], 1e-6), ["0e0", "1e-6", "2e-6"]);
        assert_eq!(tick_labels(&[1000.0, 1500.0], 500.0), ["1000", "1500"]);
        assert_eq!(tick_labels(&[0.0, 4e-4, 8e-4, 1.2e-3], 4e-4), ["0.0000", "0.0004", "0.0008", "0.0012"]);
        assert_eq!(tick_labels(&[0.0, 5e5, 1e6], 5e5), ["0.0e0", "5.0e5", "1.0e6"]);
    }
}
