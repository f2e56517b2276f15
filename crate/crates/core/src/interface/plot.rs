//! Outcome-space plot data: score segments and points over the feasible
//! quadrilateral of the prisoner's dilemma.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interface::report::fmt_sig9;
use crate::zd::{feasible_hull, FeasibleSegment, PdPayoffs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesKind {
    LineSegment,
    Scatter,
}

impl SeriesKind {
    fn tag(self) -> &'static str {
        match self {
            SeriesKind::LineSegment => "line-segment",
            SeriesKind::Scatter => "scatter",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub kind: SeriesKind,
}

impl PlotSeries {
    pub fn segment(label: impl Into<String>, seg: &FeasibleSegment) -> Self {
        Self {
            label: label.into(),
            points: seg.endpoints().to_vec(),
            kind: SeriesKind::LineSegment,
        }
    }

    pub fn scatter(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
            kind: SeriesKind::Scatter,
        }
    }

    fn check(&self) -> Result<()> {
        if self.kind == SeriesKind::LineSegment && self.points.len() != 2 {
            return Err(Error::Parameter(format!(
                "line segment `{}` has {} points",
                self.label,
                self.points.len()
            )));
        }
        if self
            .points
            .iter()
            .any(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::NonFinite(format!("series `{}`", self.label)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotFormat {
    Csv,
    Svg,
}

impl FromStr for PlotFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(PlotFormat::Csv),
            "svg" => Ok(PlotFormat::Svg),
            other => Err(Error::Unknown {
                kind: "plot format",
                name: other.to_string(),
            }),
        }
    }
}

const PALETTE: [&str; 6] = [
    "#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b",
];
const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn svg(series: &[PlotSeries], pd: &PdPayoffs) -> String {
    let lo = pd.s.min(pd.p);
    let hi = pd.t.max(pd.r);
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let span = SIZE - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - lo) / (hi - lo) * span;
    let py = |y: f64| SIZE - MARGIN - (y - lo) / (hi - lo) * span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r##"<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##
    );
    // axes
    let (x0, y0) = (MARGIN, SIZE - MARGIN);
    let _ = writeln!(
        out,
        r##"<path d="M{x0:.2} {:.2} V{y0:.2} H{:.2}" stroke="#000000" fill="none"/>"##,
        MARGIN,
        SIZE - MARGIN
    );
    let mut ticks = vec![pd.s, pd.p, pd.r, pd.t];
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    for t in &ticks {
        let label = fmt_sig9(*t);
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle">{label}</text>"##,
            px(*t),
            y0 + 16.0
        );
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"##,
            x0 - 6.0,
            py(*t) + 4.0
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{:.2}" y="{:.2}" text-anchor="middle">s_X</text>"##,
        SIZE / 2.0,
        SIZE - 14.0
    );
    let _ = writeln!(
        out,
        r##"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">s_Y</text>"##,
        SIZE / 2.0,
        SIZE / 2.0
    );
    let hull = feasible_hull(pd);
    let pts: Vec<String> = hull
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
        .collect();
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="#eeeeee" stroke="#888888"/>"##,
        pts.join(" ")
    );
    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        match s.kind {
            SeriesKind::LineSegment => {
                let (a, b) = (s.points[0], s.points[1]);
                let _ = writeln!(
                    out,
                    r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="3"/>"##,
                    px(a.0),
                    py(a.1),
                    px(b.0),
                    py(b.1)
                );
            }
            SeriesKind::Scatter => {
                for (x, y) in &s.points {
                    let _ = writeln!(
                        out,
                        r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="none" stroke="{colour}"/>"##,
                        px(*x),
                        py(*y)
                    );
                }
            }
        }
        let ly = MARGIN + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{colour}"/><text x="{:.2}" y="{:.2}">{}</text>"##,
            SIZE - MARGIN - 110.0,
            ly - 9.0,
            SIZE - MARGIN - 95.0,
            ly,
            esc(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// CSV (`series,kind,x,y`) or a standalone SVG. Output bytes depend only on
/// the input.
pub fn emit_plot_data(
    series: &[PlotSeries],
    format: PlotFormat,
    payoffs: &PdPayoffs,
) -> Result<Vec<u8>> {
    if series.is_empty() {
        return Err(Error::Parameter("nothing to plot".to_string()));
    }
    for s in series {
        s.check()?;
    }
    match format {
        PlotFormat::Svg => Ok(svg(series, payoffs).into_bytes()),
        PlotFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["series", "kind", "x", "y"])
                .map_err(|e| Error::Io(e.to_string()))?;
            for s in series {
                for (x, y) in &s.points {
                    w.write_record([s.label.as_str(), s.kind.tag(), &fmt_sig9(*x), &fmt_sig9(*y)])
                        .map_err(|e| Error::Io(e.to_string()))?;
                }
            }
            w.into_inner().map_err(|e| Error::Io(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::builtin_strategy;
    use crate::zd::feasible_segment;

    fn segments() -> Vec<PlotSeries> {
        let pd = PdPayoffs::axelrod();
        ["extorter", "generous"]
            .iter()
            .map(|n| {
                let p = builtin_strategy(n).unwrap().p;
                PlotSeries::segment(*n, &feasible_segment(&p, &pd).unwrap())
            })
            .collect()
    }

    #[test]
    fn segment_csv() {
        let csv = String::from_utf8(
            emit_plot_data(&segments(), PlotFormat::Csv, &PdPayoffs::axelrod()).unwrap(),
        )
        .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "series,kind,x,y");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "extorter,line-segment,1,1");
        assert_eq!(lines[2], "extorter,line-segment,3.72727273,1.90909091");
        assert_eq!(lines[4], "generous,line-segment,3,3");
    }

    #[test]
    fn scatter_single_point() {
        let s = [PlotSeries::scatter("cc", vec![(3.0, 3.0)])];
        let csv =
            String::from_utf8(emit_plot_data(&s, PlotFormat::Csv, &PdPayoffs::axelrod()).unwrap())
                .unwrap();
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn svg_is_deterministic() {
        let a = emit_plot_data(&segments(), PlotFormat::Svg, &PdPayoffs::axelrod()).unwrap();
        let b = emit_plot_data(&segments(), PlotFormat::Svg, &PdPayoffs::axelrod()).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.contains("<polygon") && text.contains("s_X") && text.contains("s_Y"));
    }

    #[test]
    fn rejects_empty_and_bad_segments() {
        assert!(emit_plot_data(&[], PlotFormat::Svg, &PdPayoffs::axelrod()).is_err());
        let bad = PlotSeries {
            label: "x".into(),
            points: vec![(1.0, 1.0)],
            kind: SeriesKind::LineSegment,
        };
        assert!(emit_plot_data(&[bad], PlotFormat::Csv, &PdPayoffs::axelrod()).is_err());
    }
}
