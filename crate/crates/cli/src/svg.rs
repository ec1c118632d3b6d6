//! Minimal static SVG plots.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(title: &str) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let _ = writeln!(s, "<text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">{}</text>", W / 2.0, escape(title));
    s
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0 };
        }
        let pad = if hi > lo { (hi - lo) * 0.05 } else { lo.abs().max(1.0) * 0.05 };
        Axis { lo: lo - pad, hi: hi + pad }
    }

    fn map(&self, v: f64, from: f64, to: f64) -> f64 {
        from + (v - self.lo) / (self.hi - self.lo) * (to - from)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..=4).map(|k| self.lo + (self.hi - self.lo) * k as f64 / 4.0).collect()
    }
}

fn axes(s: &mut String, x: Option<&Axis>, y: &Axis, xlabel: &str, ylabel: &str) {
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, H - BOTTOM, TOP);
    let _ = writeln!(s, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>");
    let _ = writeln!(s, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>");
    for t in x.map_or(Vec::new(), Axis::ticks) {
        let px = x.expect("ticks imply axis").map(t, x0, x1);
        let _ = writeln!(s, "<line x1=\"{px:.1}\" y1=\"{y0}\" x2=\"{px:.1}\" y2=\"{}\" stroke=\"black\"/>", y0 + 4.0);
        let _ = writeln!(s, "<text x=\"{px:.1}\" y=\"{}\" text-anchor=\"middle\">{}</text>", y0 + 18.0, fmt_tick(t));
    }
    for t in y.ticks() {
        let py = y.map(t, y0, y1);
        let _ = writeln!(s, "<line x1=\"{}\" y1=\"{py:.1}\" x2=\"{x0}\" y2=\"{py:.1}\" stroke=\"black\"/>", x0 - 4.0);
        let _ = writeln!(s, "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>", x0 - 6.0, py + 4.0, fmt_tick(t));
    }
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>", (x0 + x1) / 2.0, H - 20.0, escape(xlabel));
    let _ = writeln!(
        s,
        "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>",
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}

/// Pareto scatter: raw objectives, knee drawn as a larger red marker.
pub fn pareto_scatter(title: &str, points: &[(f64, f64)], knee: Option<usize>) -> String {
    let x = Axis::new(points.iter().map(|p| p.0));
    let y = Axis::new(points.iter().map(|p| p.1));
    let mut s = header(title);
    axes(&mut s, Some(&x), &y, "makespan (s)", "transport energy (kJ)");
    for (i, &(a, b)) in points.iter().enumerate() {
        let (px, py) = (x.map(a, LEFT, W - RIGHT), y.map(b, H - BOTTOM, TOP));
        if Some(i) == knee {
            let _ = writeln!(s, "<circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"7\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>");
        }
        let _ = writeln!(s, "<circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"3.5\" fill=\"steelblue\"/>");
    }
    if knee.is_some() {
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" fill=\"red\">knee</text>", W - RIGHT, TOP + 12.0);
    }
    s.push_str("</svg>\n");
    s
}

/// Vertical bars, one per label.
pub fn bar_chart(title: &str, labels: &[String], values: &[f64], ylabel: &str) -> String {
    let top = values.iter().copied().fold(0.0, f64::max).max(1.0);
    let y = Axis { lo: 0.0, hi: top * 1.1 };
    let mut s = header(title);
    let n = labels.len().max(1) as f64;
    let slot = (W - LEFT - RIGHT) / n;
    let x = Axis { lo: 0.0, hi: n };
    axes(&mut s, None, &y, "", ylabel);
    for (i, (label, &v)) in labels.iter().zip(values).enumerate() {
        let left = x.map(i as f64, LEFT, W - RIGHT) + slot * 0.15;
        let py = y.map(v, H - BOTTOM, TOP);
        let _ = writeln!(
            s,
            "<rect x=\"{left:.1}\" y=\"{py:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"steelblue\"/>",
            slot * 0.7,
            H - BOTTOM - py
        );
        let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>", left + slot * 0.35, py - 4.0, fmt_tick(v));
        let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{}\" text-anchor=\"middle\">{}</text>", left + slot * 0.35, H - BOTTOM + 32.0, escape(label));
    }
    s.push_str("</svg>\n");
    s
}

/// Gantt lanes: one row per robot, blocks `(robot, start, end, kind)`.
pub fn gantt(title: &str, robots: usize, blocks: &[(usize, f64, f64, &str)]) -> String {
    let x = Axis { lo: 0.0, hi: blocks.iter().map(|b| b.2).fold(1.0, f64::max) };
    let mut s = header(title);
    let lane = (H - TOP - BOTTOM) / robots.max(1) as f64;
    let _ = writeln!(s, "<line x1=\"{LEFT}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>", H - BOTTOM, W - RIGHT);
    for t in x.ticks() {
        let px = x.map(t, LEFT, W - RIGHT);
        let _ = writeln!(s, "<text x=\"{px:.1}\" y=\"{}\" text-anchor=\"middle\">{}</text>", H - BOTTOM + 18.0, fmt_tick(t));
    }
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">time (s)</text>", (LEFT + W - RIGHT) / 2.0, H - 20.0);
    for r in 0..robots {
        let _ = writeln!(s, "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">robot {r}</text>", LEFT - 6.0, TOP + lane * (r as f64 + 0.5) + 4.0);
    }
    for &(r, a, b, kind) in blocks {
        let fill = match kind {
            "pick" => "seagreen",
            "swap" => "firebrick",
            _ => "lightsteelblue",
        };
        let (pa, pb) = (x.map(a, LEFT, W - RIGHT), x.map(b, LEFT, W - RIGHT));
        let _ = writeln!(
            s,
            "<rect x=\"{pa:.2}\" y=\"{:.1}\" width=\"{:.2}\" height=\"{:.1}\" fill=\"{fill}\"/>",
            TOP + lane * r as f64 + lane * 0.15,
            (pb - pa).max(0.2),
            lane * 0.7
        );
    }
    s.push_str("</svg>\n");
    s
}
