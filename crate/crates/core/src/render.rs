//! SVG pictures of level diagrams and of the chord diagram of the upper arc
//! system on a level sphere. Output depends only on the input.

use std::fmt::Write;

use crate::arcs::{ArcSystem, CirclePoint, Side};
use crate::error::Result;
use crate::presentation::{format_level, EventKind, Level, PlatPresentation};

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"];

const GAP: i64 = 30;
const MARGIN: i64 = 60;

fn colour(label: usize) -> &'static str {
    PALETTE[label % PALETTE.len()]
}

fn header(out: &mut String, w: i64, h: i64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
}

fn line(out: &mut String, x1: i64, y1: i64, x2: i64, y2: i64, stroke: &str) {
    let _ = writeln!(
        out,
        r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" stroke-width="3" stroke-linecap="round"/>"#
    );
}

/// The level diagram: strands coloured by component, caps on top, cups at the
/// bottom, one row per event with its level written on the left.
pub fn presentation_svg(p: &PlatPresentation) -> String {
    let n = p.strand_count;
    let comps = p.components();
    let x = |j: usize| MARGIN + 40 + GAP * j as i64;
    let y = |row: usize| MARGIN + GAP * row as i64;
    let rows = p.events.len() + 1;
    let (w, h) = (x(n) + MARGIN, y(rows) + 2 * MARGIN);
    let mut out = String::new();
    header(&mut out, w, h);
    let mut at = comps.top.clone();
    for j in (0..n).step_by(2) {
        let _ = writeln!(
            out,
            r#"<path d="M {} {} A {} {} 0 0 1 {} {}" fill="none" stroke="{}" stroke-width="3"/>"#,
            x(j),
            y(0),
            GAP / 2,
            GAP / 2,
            x(j + 1),
            y(0),
            colour(at[j])
        );
    }
    for (e, ev) in p.events.iter().enumerate() {
        let (y0, y1) = (y(e), y(e + 1));
        let _ = writeln!(
            out,
            r#"<text x="8" y="{}" font-family="monospace" font-size="11">{}</text>"#,
            (y0 + y1) / 2 + 4,
            format_level(&ev.level)
        );
        let k = ev.kind.pos() - 1;
        for j in (0..n).filter(|&j| j != k && j != k + 1) {
            line(&mut out, x(j), y0, x(j), y1, colour(at[j]));
        }
        match ev.kind {
            EventKind::Braid { sign, .. } => {
                // sign +1: the strand going from k to k+1 passes behind.
                let (under, over) = if sign > 0 { (k, k + 1) } else { (k + 1, k) };
                let (ux2, ox2) = (x(2 * k + 1 - under), x(2 * k + 1 - over));
                let (mx, my) = ((x(under) + ux2) / 2, (y0 + y1) / 2);
                let dx = (ux2 - x(under)) / 5;
                let dy = (y1 - y0) / 5;
                line(&mut out, x(under), y0, mx - dx, my - dy, colour(at[under]));
                line(&mut out, mx + dx, my + dy, ux2, y1, colour(at[under]));
                line(&mut out, x(over), y0, ox2, y1, colour(at[over]));
                at.swap(k, k + 1);
            }
            EventKind::Twist { half_twists, .. } => {
                for j in [k, k + 1] {
                    line(&mut out, x(j), y0, x(j), y0 + 6, colour(at[j]));
                    line(&mut out, x(j), y1 - 6, x(j), y1, colour(at[j]));
                }
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white" stroke="black" stroke-width="2"/>"#,
                    x(k) - 8,
                    y0 + 6,
                    GAP + 16,
                    GAP - 12
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-family="monospace" font-size="11" text-anchor="middle">{}</text>"#,
                    x(k) + GAP / 2,
                    (y0 + y1) / 2 + 4,
                    half_twists
                );
                if half_twists % 2 == 1 {
                    at.swap(k, k + 1);
                }
            }
        }
    }
    let yb = y(p.events.len());
    for j in (0..n).step_by(2) {
        let _ = writeln!(
            out,
            r#"<path d="M {} {} A {} {} 0 0 0 {} {}" fill="none" stroke="{}" stroke-width="3"/>"#,
            x(j),
            yb,
            GAP / 2,
            GAP / 2,
            x(j + 1),
            yb,
            colour(at[j])
        );
    }
    out.push_str("</svg>\n");
    out
}

/// The chord diagram of the upper arc system at level `s`: the reference loop
/// cut open into a line, the lower shadows `σ_i⁻` drawn thick, chords in the
/// upper hemisphere above the line and those in the lower one below.
pub fn chord_diagram_svg(p: &PlatPresentation, s: &Level) -> Result<String> {
    let sys = ArcSystem::sweep(&p.prefix_to_level(s)?);
    let layout = sys.realize()?;
    let points = layout.circle.len();
    let step = 12i64;
    let x = |pos: usize| MARGIN + step * pos as i64;
    let width = x(points) + MARGIN;
    let reach = step * points as i64 / 2 + 20;
    let mid = MARGIN + reach;
    let height = 2 * mid;
    let mut out = String::new();
    header(&mut out, width, height);
    let _ = writeln!(
        out,
        r#"<text x="8" y="20" font-family="monospace" font-size="12">level {}</text>"#,
        format_level(s)
    );
    line(&mut out, x(0) - step, mid, x(points), mid, "#bbbbbb");
    for i in 0..sys.arcs.len() {
        let (a, b) = (layout.puncture_pos[2 * i], layout.puncture_pos[2 * i + 1]);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{mid}" x2="{}" y2="{mid}" stroke="#000000" stroke-width="7" opacity="0.35"/>"##,
            x(a),
            x(b)
        );
    }
    for c in &layout.chords {
        let (a, b) = (c.a.min(c.b), c.a.max(c.b));
        let r = (x(b) - x(a)) / 2;
        let sweep = if c.side == Side::Upper { 1 } else { 0 };
        let _ = writeln!(
            out,
            r#"<path d="M {} {mid} A {r} {r} 0 0 {sweep} {} {mid}" fill="none" stroke="{}" stroke-width="2"/>"#,
            x(a),
            x(b),
            colour(c.owner)
        );
    }
    for (pos, pt) in layout.circle.iter().enumerate() {
        if let CirclePoint::Puncture(k) = pt {
            let _ = writeln!(out, r#"<circle cx="{}" cy="{mid}" r="4" fill="black"/>"#, x(pos));
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="10" text-anchor="middle">{}</text>"#,
                x(pos),
                mid + 16,
                k + 1
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{level, LevelEvent};

    fn sample() -> PlatPresentation {
        let events = vec![
            LevelEvent::braid(level(3, 1), 2, 1),
            LevelEvent::twist(level(2, 1), 1, 2),
            LevelEvent::braid(level(1, 1), 2, -1),
        ];
        PlatPresentation::new(6, events)
    }

    #[test]
    fn level_diagram_is_stable() {
        let p = sample();
        let a = presentation_svg(&p);
        assert_eq!(a, presentation_svg(&p));
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<rect").count(), 2);
    }

    #[test]
    fn chord_diagram_has_every_puncture() {
        let p = sample();
        let svg = chord_diagram_svg(&p, &level(0, 1)).unwrap();
        assert_eq!(svg.matches("<circle").count(), 6);
        assert_eq!(svg, chord_diagram_svg(&p, &level(0, 1)).unwrap());
    }
}
