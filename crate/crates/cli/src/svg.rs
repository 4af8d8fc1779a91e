//! Hand-written SVG figure: one panel per series, concurrence against `γt`.
//! Output is a pure function of the inputs so plots can be compared as text.

use std::fmt::Write as _;

use crate::csv::{AnalyticRow, SeriesRow};

const SYSTEM_COLOR: &str = "#1f77b4";
const ENVIRONMENT_COLOR: &str = "#ff7f0e";
const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 300.0;
const MARGIN_L: f64 = 52.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 34.0;
const MARGIN_B: f64 = 44.0;

pub struct Panel {
    pub title: String,
    pub series: Vec<SeriesRow>,
    pub analytic: Option<Vec<AnalyticRow>>,
}

struct Frame {
    x0: f64,
    x_max: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.x0 + MARGIN_L + x / self.x_max * (PANEL_W - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN_T + (1.0 - y.clamp(0.0, 1.0)) * (PANEL_H - MARGIN_T - MARGIN_B)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Smallest multiple of 0.5 at or above `x`, at least 0.5.
fn axis_max(x: f64) -> f64 {
    ((x * 2.0).ceil() / 2.0).max(0.5)
}

fn tick_step(x_max: f64) -> f64 {
    if x_max <= 2.0 {
        0.25
    } else if x_max <= 5.0 {
        0.5
    } else {
        (x_max / 8.0).ceil()
    }
}

fn draw_axes(out: &mut String, f: &Frame, title: &str) {
    let (left, right) = (f.px(0.0), f.px(f.x_max));
    let (top, bottom) = (f.py(1.0), f.py(0.0));
    let _ = writeln!(
        out,
        r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    let step = tick_step(f.x_max);
    let n = (f.x_max / step).round() as usize;
    for i in 0..=n {
        let x = i as f64 * step;
        let px = f.px(x);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{bottom:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            bottom + 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            bottom + 16.0,
            trim_number(x)
        );
    }
    for i in 0..=5 {
        let y = i as f64 * 0.2;
        let py = f.py(y);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{left:.2}" y2="{py:.2}" stroke="black"/>"#,
            left - 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{y:.1}</text>"#,
            left - 7.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">γt</text>"#,
        (left + right) / 2.0,
        bottom + 34.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">Concurrence</text>"#,
        f.x0 + 14.0,
        (top + bottom) / 2.0,
        f.x0 + 14.0,
        (top + bottom) / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        top - 10.0,
        escape(title)
    );
}

fn trim_number(x: f64) -> String {
    let s = format!("{x:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn draw_curve(out: &mut String, f: &Frame, pts: impl Iterator<Item = (f64, f64)>, color: &str) {
    let path: Vec<String> = pts
        .filter(|(x, _)| *x <= f.x_max)
        .map(|(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
        .collect();
    if path.len() > 1 {
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
    }
}

fn draw_points(
    out: &mut String,
    f: &Frame,
    pts: impl Iterator<Item = (f64, f64, f64)>,
    color: &str,
) {
    for (x, y, err) in pts {
        let px = f.px(x);
        if err > 0.0 {
            let _ = writeln!(
                out,
                r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="{color}"/>"#,
                f.py(y - err),
                f.py(y + err)
            );
        }
        let _ = writeln!(
            out,
            r#"<circle cx="{px:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
            f.py(y)
        );
    }
}

fn draw_legend(out: &mut String, f: &Frame) {
    let x = f.px(f.x_max) - 92.0;
    for (i, (label, color)) in [("system", SYSTEM_COLOR), ("environment", ENVIRONMENT_COLOR)]
        .into_iter()
        .enumerate()
    {
        let y = MARGIN_T + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
            y - 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{y:.2}" font-size="11">{label}</text>"#,
            x + 8.0
        );
    }
}

pub fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{PANEL_H:.0}" viewBox="0 0 {width:.0} {PANEL_H:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, panel) in panels.iter().enumerate() {
        let data_max = panel
            .series
            .iter()
            .map(|r| r.gamma_t)
            .chain(panel.analytic.iter().flatten().map(|r| r.gamma_t))
            .fold(0.0, f64::max);
        let frame = Frame {
            x0: PANEL_W * i as f64,
            x_max: axis_max(data_max),
        };
        let _ = writeln!(out, "<g>");
        draw_axes(&mut out, &frame, &panel.title);
        if let Some(analytic) = &panel.analytic {
            draw_curve(
                &mut out,
                &frame,
                analytic.iter().map(|r| (r.gamma_t, r.c_sys)),
                SYSTEM_COLOR,
            );
            draw_curve(
                &mut out,
                &frame,
                analytic.iter().map(|r| (r.gamma_t, r.c_env)),
                ENVIRONMENT_COLOR,
            );
        }
        draw_points(
            &mut out,
            &frame,
            panel
                .series
                .iter()
                .filter_map(|r| Some((r.gamma_t, r.c_sys_mean?, r.c_sys_stderr.unwrap_or(0.0)))),
            SYSTEM_COLOR,
        );
        draw_points(
            &mut out,
            &frame,
            panel
                .series
                .iter()
                .filter_map(|r| Some((r.gamma_t, r.c_env_mean?, r.c_env_stderr.unwrap_or(0.0)))),
            ENVIRONMENT_COLOR,
        );
        draw_legend(&mut out, &frame);
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
