//! Minimal self-contained SVG step plots.

use std::fmt::Write;

use super::profile::{format_tau, ProfileCurve, ProfileKind};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub fn render(kind: ProfileKind, tau: f64, curves: &[ProfileCurve]) -> String {
    let log_x = kind == ProfileKind::Performance;
    let xs = curves.iter().flat_map(|c| c.abscissae.iter().copied());
    let (mut lo, mut hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
        (a.min(x), b.max(x))
    });
    if !lo.is_finite() {
        lo = if log_x { 1.0 } else { 0.0 };
        hi = lo + 1.0;
    }
    if hi <= lo {
        hi = if log_x { lo * 2.0 } else { lo + 1.0 };
    }
    let tx = |x: f64| {
        let t = if log_x {
            (x.ln() - lo.ln()) / (hi.ln() - lo.ln())
        } else {
            (x - lo) / (hi - lo)
        };
        MARGIN + t * (WIDTH - 2.0 * MARGIN)
    };
    let ty = |y: f64| HEIGHT - MARGIN - y * (HEIGHT - 2.0 * MARGIN);

    let (title, xlabel) = match kind {
        ProfileKind::Performance => ("performance profile", "alpha (log scale)"),
        ProfileKind::Data => ("data profile", "kappa (simplex gradients)"),
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{title}, tau = {}</text>"#,
        WIDTH / 2.0,
        format_tau(tau)
    );
    // axes
    let _ = writeln!(
        s,
        r#"<path d="M{m} {t} L{m} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for i in 0..=4 {
        let y = i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">{y:.2}</text>"#,
            MARGIN - 6.0,
            ty(y) + 4.0
        );
    }
    for (x, anchor) in [(lo, "start"), (hi, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{}</text>"#,
            tx(x),
            HEIGHT - MARGIN + 16.0,
            trim(x)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{xlabel}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 14.0
    );

    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(s, "<!-- solver {} -->", c.solver);
        let _ = writeln!(s, "<!-- data {} -->", data_comment(c));
        let mut path = String::new();
        let mut prev: Option<f64> = None;
        for (&x, &y) in c.abscissae.iter().zip(&c.ordinates) {
            match prev {
                None => {
                    let _ = write!(path, "M{:.2} {:.2}", tx(x), ty(y));
                }
                Some(py) => {
                    let _ = write!(path, " L{:.2} {:.2} L{:.2} {:.2}", tx(x), ty(py), tx(x), ty(y));
                }
            }
            prev = Some(y);
        }
        let _ = writeln!(
            s,
            r#"<path d="{path}" stroke="{color}" stroke-width="2" fill="none"/>"#
        );
        let ly = MARGIN + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 110.0,
            c.solver
        );
    }
    s.push_str("</svg>\n");
    s
}

fn data_comment(c: &ProfileCurve) -> String {
    c.abscissae
        .iter()
        .zip(&c.ordinates)
        .map(|(x, y)| format!("{x}:{y}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn trim(x: f64) -> String {
    if x >= 100.0 {
        format!("{x:.0}")
    } else {
        format!("{x:.2}")
    }
}
