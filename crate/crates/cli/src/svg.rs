use std::fmt::Write as _;

use nalgebra::DMatrix;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        (lo - 1.0, lo + 1.0)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

/// Static scatter plot of the two columns of `points`, coloured by class, with
/// axes and a legend.
pub fn scatter(points: &DMatrix<f64>, labels: &[usize], class_names: &[String], axes: [&str; 2], title: &str) -> String {
    let (x0, x1) = span(points.column(0).iter().copied());
    let (y0, y1) = span(points.column(1).iter().copied());
    let plot = SIZE - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * plot;
    let py = |y: f64| SIZE - MARGIN - (y - y0) / (y1 - y0) * plot;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, SIZE / 2.0, escape(title));
    let bottom = SIZE - MARGIN;
    let right = SIZE - MARGIN;
    let _ = writeln!(
        s,
        r#"<path d="M{MARGIN} {MARGIN} V{bottom} H{right}" fill="none" stroke="black"/>"#
    );
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="{anchor}">{v:.3}</text>"#, px(v), bottom + 16.0);
    }
    for v in [y0, y1] {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.3}</text>"#, MARGIN - 4.0, py(v) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, SIZE / 2.0, SIZE - 16.0, escape(axes[0]));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        SIZE / 2.0,
        SIZE / 2.0,
        escape(axes[1])
    );
    for (i, &l) in labels.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}" fill-opacity="0.75"/>"#,
            px(points[(i, 0)]),
            py(points[(i, 1)]),
            PALETTE[l % PALETTE.len()]
        );
    }
    for (j, name) in class_names.iter().enumerate() {
        let y = MARGIN + 16.0 * j as f64;
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{y}" r="4" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            right - 90.0,
            PALETTE[j % PALETTE.len()],
            right - 80.0,
            y + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_circle_per_point_plus_legend() {
        let p = DMatrix::from_row_slice(3, 2, &[0.0, 1.0, 2.0, 3.0, -1.0, 0.5]);
        let svg = scatter(&p, &[0, 1, 1], &["a".into(), "b<".into()], ["u1", "u2"], "t");
        assert_eq!(svg.matches("<circle").count(), 5);
        assert!(svg.contains("b&lt;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn constant_column_does_not_divide_by_zero() {
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let svg = scatter(&p, &[0, 1], &["a".into(), "b".into()], ["x", "y"], "t");
        assert!(!svg.contains("NaN"));
    }
}
