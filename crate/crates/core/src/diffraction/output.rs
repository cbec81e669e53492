//! Text renderings of a [`DiffractionPattern`]: CSV, JSON and an SVG bar chart.

use std::fmt::Write;

use super::DiffractionPattern;

pub const CSV_HEADER: &str = "order,amplitude_re,amplitude_im,intensity";

/// One row per order, sorted by order, after a fixed header.
///
/// Numbers use Rust's shortest round-trip formatting, so the output is
/// byte-stable for a given pattern.
pub fn intensities_csv(pattern: &DiffractionPattern) -> String {
    let mut rows: Vec<_> = pattern.orders.iter().collect();
    rows.sort_by_key(|o| o.order);
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for o in rows {
        let _ = writeln!(out, "{},{:?},{:?},{:?}", o.order, o.amplitude.re, o.amplitude.im, o.intensity);
    }
    out
}

pub fn pattern_json(pattern: &DiffractionPattern) -> String {
    serde_json::to_string_pretty(pattern).expect("pattern serializes")
}

/// Self-contained SVG bar chart of intensity against order.
pub fn pattern_svg(pattern: &DiffractionPattern, title: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 360.0;
    const MARGIN: f64 = 48.0;
    let (lo, hi) = pattern.order_range();
    let span = (hi - lo + 2) as f64;
    let slot = (W - 2.0 * MARGIN) / span;
    let peak = pattern.orders.iter().map(|o| o.intensity).fold(0.0, f64::max).max(1e-300);
    let plot_h = H - 2.0 * MARGIN;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let base = H - MARGIN;
    let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#, W - MARGIN);
    let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{base}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">order q (units of k_L)</text>"#, W / 2.0, H - 10.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, MARGIN - 4.0, MARGIN + 4.0, peak);
    let label_every = ((hi - lo) / 2 / 10).max(1);
    for o in &pattern.orders {
        let x = MARGIN + ((o.order - lo + 1) as f64 - 0.4) * slot;
        let h = plot_h * o.intensity / peak;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="steelblue"><title>q={} I={:e}</title></rect>"#,
            base - h,
            0.8 * slot,
            o.order,
            o.intensity
        );
        if ((o.order - lo) / 2) % label_every == 0 {
            let _ = writeln!(s, r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#, x + 0.4 * slot, base + 14.0, o.order);
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffraction::dipole_pattern;

    #[test]
    fn empty_interaction_row() {
        let csv = intensities_csv(&dipole_pattern(0.0, 1e-10).unwrap());
        assert_eq!(csv, format!("{CSV_HEADER}\n0,1.0,0.0,1.0\n"));
    }

    #[test]
    fn row_count_and_centre_row() {
        let p = dipole_pattern(1.0, 1e-10).unwrap();
        let csv = intensities_csv(&p);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), p.orders.len() + 1);
        let centre = lines.iter().find(|l| l.starts_with("0,")).unwrap();
        let intensity: f64 = centre.rsplit(',').next().unwrap().parse().unwrap();
        assert!((intensity - 0.585_527_499_513_664).abs() < 1e-14);
        let orders: Vec<i64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
        assert!(orders.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn json_and_svg_render() {
        let p = dipole_pattern(1.0, 1e-10).unwrap();
        let v: serde_json::Value = serde_json::from_str(&pattern_json(&p)).unwrap();
        assert_eq!(v["orders"].as_array().unwrap().len(), p.orders.len());
        let svg = pattern_svg(&p, "θ0 = 1 <dipole>");
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("&lt;dipole&gt;"));
        assert_eq!(svg.matches("<rect x=").count(), p.orders.len());
    }
}
