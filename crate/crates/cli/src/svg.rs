//! Static SVG charts: grouped bars and line plots.

use std::fmt::Write;

use hessbound::fmt::g12;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#4c72b0", "#55a868", "#dd8452", "#c44e52", "#8172b3", "#937860",
];

/// Bars of one panel; missing values are drawn as an "n/a" label.
pub struct BarGroup {
    pub label: String,
    pub bars: Vec<(String, Option<f64>)>,
}

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One panel per group, each with its own linear scale starting at zero.
pub fn bar_chart(title: &str, groups: &[BarGroup]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let panels = groups.len().max(1) as f64;
    let panel_w = (WIDTH - 2.0 * MARGIN) / panels;
    let (top, bottom) = (MARGIN, HEIGHT - MARGIN);
    for (g, group) in groups.iter().enumerate() {
        let x0 = MARGIN + g as f64 * panel_w;
        let max = group.bars.iter().filter_map(|b| b.1).fold(0.0f64, f64::max);
        let scale = if max > 0.0 {
            (bottom - top) / (1.1 * max)
        } else {
            0.0
        };
        let slot = panel_w / (group.bars.len().max(1) as f64 + 1.0);
        let _ = writeln!(
            out,
            r#"<line x1="{x0:.2}" y1="{bottom:.2}" x2="{:.2}" y2="{bottom:.2}" stroke="black"/>"#,
            x0 + panel_w - 10.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
            x0 + panel_w / 2.0,
            bottom + 36.0,
            escape(&group.label)
        );
        for (b, (name, value)) in group.bars.iter().enumerate() {
            let cx = x0 + slot * (b as f64 + 1.0);
            let bw = 0.7 * slot;
            match value {
                Some(v) => {
                    let h = (v.max(0.0) * scale).max(0.5);
                    let _ = writeln!(
                        out,
                        r#"<rect x="{:.2}" y="{:.2}" width="{bw:.2}" height="{h:.2}" fill="{}"><title>{name} = {}</title></rect>"#,
                        cx - bw / 2.0,
                        bottom - h,
                        PALETTE[b % PALETTE.len()],
                        g12(*v)
                    );
                    let _ = writeln!(
                        out,
                        r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                        bottom - h - 4.0,
                        short(*v)
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle" fill="gray">n/a</text>"#,
                        bottom - 4.0
                    );
                }
            }
            let _ = writeln!(
                out,
                r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                bottom + 16.0,
                escape(name)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn short(v: f64) -> String {
    format!("{:.4}", v)
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

/// Polyline chart; with `log` both axes are base-10 logarithmic and
/// non-positive points are skipped.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series], log: bool) -> String {
    let tr = |v: f64| if log { v.log10() } else { v };
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter(|p| !log || (p.0 > 0.0 && p.1 > 0.0))
                .map(|&(x, y)| (tr(x), tr(y)))
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .collect()
        })
        .collect();
    let all = pts.iter().flatten();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in all {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if !xmin.is_finite() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
    }
    if xmax - xmin < 1e-300 {
        xmax = xmin + 1.0;
    }
    if ymax - ymin < 1e-300 {
        ymax = ymin + 1.0;
    }
    let (left, right, top, bottom) = (MARGIN + 20.0, WIDTH - 150.0, MARGIN, HEIGHT - MARGIN);
    let px = |x: f64| left + (x - xmin) / (xmax - xmin) * (right - left);
    let py = |y: f64| bottom - (y - ymin) / (ymax - ymin) * (bottom - top);

    let mut out = String::new();
    header(&mut out, title);
    let _ = writeln!(
        out,
        r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    let axis = |v: f64| {
        if log {
            format!("1e{}", short(v))
        } else {
            short(v)
        }
    };
    for (x, anchor) in [(xmin, "start"), (xmax, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}">{}</text>"#,
            px(x),
            bottom + 14.0,
            axis(x)
        );
    }
    for y in [ymin, ymax] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 4.0,
            py(y) + 4.0,
            axis(y)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        bottom + 34.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(ylabel)
    );
    for (i, (s, p)) in series.iter().zip(&pts).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = p
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        let ly = top + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            right + 10.0,
            right + 30.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            right + 34.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_chart_marks_missing_values() {
        let svg = bar_chart(
            "t",
            &[BarGroup {
                label: "k = 1".into(),
                bars: vec![("lower".into(), Some(1.0)), ("reference".into(), None)],
            }],
        );
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<rect x=").count(), 1);
        assert!(svg.contains("n/a"));
    }

    #[test]
    fn log_chart_skips_non_positive_points() {
        let s = Series {
            label: "a".into(),
            points: vec![(0.0, 1.0), (1.0, 1.0), (10.0, 100.0)],
        };
        let svg = line_chart("t", "x", "y", &[s], true);
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert_eq!(line.matches(',').count(), 2);
    }
}
