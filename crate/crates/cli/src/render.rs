//! SVG pictures of intervals, track diagrams and braids.

use std::fmt::Write;

use trackforge::track::{LabelledInterval, TrackDiagram};
use trackforge::{BraidWord, Sign};

const UNIT: f64 = 48.0;
const PAD: f64 = 40.0;

struct Frame {
    min: (f64, f64),
    height: f64,
}

impl Frame {
    fn new(points: &[(f64, f64)]) -> (Frame, f64, f64) {
        let xs = points.iter().map(|p| p.0);
        let ys = points.iter().map(|p| p.1);
        let min = (
            xs.clone().fold(f64::MAX, f64::min),
            ys.clone().fold(f64::MAX, f64::min),
        );
        let max = (xs.fold(f64::MIN, f64::max), ys.fold(f64::MIN, f64::max));
        let w = (max.0 - min.0) * UNIT + 2.0 * PAD;
        let h = (max.1 - min.1) * UNIT + 2.0 * PAD;
        (Frame { min, height: h }, w, h)
    }

    fn at(&self, p: (f64, f64)) -> (f64, f64) {
        (
            PAD + (p.0 - self.min.0) * UNIT,
            self.height - PAD - (p.1 - self.min.1) * UNIT,
        )
    }
}

fn header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn polyline(out: &mut String, pts: &[(f64, f64)], style: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|p| format!("{:.1},{:.1}", p.0, p.1))
        .collect();
    let _ = writeln!(
        out,
        "<polyline points=\"{}\" fill=\"none\" {style}/>",
        coords.join(" ")
    );
}

/// The grid curve with its double points, the sign in every quadrant and
/// the marked points. With `diagram` the two parallels of the band and the
/// crossing positions are drawn as well.
pub fn interval(c: &LabelledInterval, t: Option<&TrackDiagram>, diagram: bool) -> String {
    let sk = c.skeleton();
    let pts: Vec<(f64, f64)> = sk.points.iter().map(|p| (p.0 as f64, p.1 as f64)).collect();
    if pts.len() < 2 {
        return format!("{}</svg>\n", header(2.0 * PAD, 2.0 * PAD));
    }
    let (fr, w, h) = Frame::new(&pts);
    let mut out = header(w, h);
    let screen: Vec<(f64, f64)> = pts.iter().map(|&p| fr.at(p)).collect();
    if diagram {
        for side in [1.0, -1.0] {
            polyline(
                &mut out,
                &parallel(&pts, 0.12 * side)
                    .iter()
                    .map(|&p| fr.at(p))
                    .collect::<Vec<_>>(),
                "stroke=\"#555\" stroke-width=\"1.5\"",
            );
        }
    } else {
        polyline(&mut out, &screen, "stroke=\"black\" stroke-width=\"2\"");
    }
    let (sx, sy) = screen[0];
    let _ = writeln!(
        out,
        "<circle cx=\"{sx:.1}\" cy=\"{sy:.1}\" r=\"4\" fill=\"black\"/>"
    );
    for (k, dp) in sk.double_points.iter().enumerate() {
        let (x, y) = fr.at((dp.point.0 as f64, dp.point.1 as f64));
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"5\" fill=\"none\" stroke=\"#06c\"/>"
        );
        if let Some(l) = c.labels.get(k) {
            let _ = writeln!(
                out,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"#06c\">{l}</text>",
                x + 8.0,
                y + 18.0
            );
        }
    }
    if let Some(t) = t {
        for (i, &p) in t.positions.iter().enumerate() {
            let (x, y) = fr.at(p);
            let positive = t.diagram.crossings()[i].sign == Sign::Positive;
            let colour = if positive { "#080" } else { "#c00" };
            if diagram {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"{colour}\"/>"
                );
            } else {
                let s = if positive { "+" } else { "\u{2212}" };
                let _ = writeln!(
                    out,
                    "<text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" fill=\"{colour}\">{s}</text>",
                    y + 4.0
                );
            }
        }
    }
    for m in &c.marks {
        let same = c.marks.iter().filter(|o| o.step == m.step).count() as f64;
        let rank = c
            .marks
            .iter()
            .filter(|o| o.step == m.step && o.offset < m.offset)
            .count() as f64;
        let f = (rank + 1.0) / (same + 1.0);
        let (a, b) = (pts[m.step], pts[m.step + 1]);
        let (x, y) = fr.at((a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1)));
        let _ = writeln!(
            out,
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"8\" height=\"8\" fill=\"#f90\"/>",
            x - 4.0,
            y - 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Offset of a polyline to the left by `d`, with mitred corners.
fn parallel(pts: &[(f64, f64)], d: f64) -> Vec<(f64, f64)> {
    let normal = |i: usize| {
        let (a, b) = (pts[i], pts[i + 1]);
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len = (dx * dx + dy * dy).sqrt();
        (-dy / len, dx / len)
    };
    let n = pts.len();
    (0..n)
        .map(|i| {
            let m = if i == 0 {
                normal(0)
            } else if i == n - 1 {
                normal(n - 2)
            } else {
                let (a, b) = (normal(i - 1), normal(i));
                let s = (a.0 + b.0, a.1 + b.1);
                let dotp = 1.0 + a.0 * b.0 + a.1 * b.1;
                (s.0 / dotp, s.1 / dotp)
            };
            (pts[i].0 + d * m.0, pts[i].1 + d * m.1)
        })
        .collect()
}

/// Braid drawn bottom to top, one letter per row.
pub fn braid(b: &BraidWord) -> String {
    let n = b.strands as f64;
    let rows = b.letters.len().max(1) as f64;
    let (w, h) = ((n - 1.0) * UNIT + 2.0 * PAD, rows * UNIT + 2.0 * PAD);
    let mut out = header(w, h);
    let x = |s: f64| PAD + s * UNIT;
    let y = |r: f64| h - PAD - r * UNIT;
    for (r, l) in b.letters.iter().enumerate() {
        let r = r as f64;
        let i = l.index as f64 - 1.0;
        for s in 0..b.strands {
            let s = s as f64;
            if s != i && s != i + 1.0 {
                line(&mut out, (x(s), y(r)), (x(s), y(r + 1.0)));
            }
        }
        // positive letters: the strand from the left passes over
        let (over, under) = if l.sign == Sign::Positive {
            ((i, i + 1.0), (i + 1.0, i))
        } else {
            ((i + 1.0, i), (i, i + 1.0))
        };
        line(&mut out, (x(over.0), y(r)), (x(over.1), y(r + 1.0)));
        let mid = ((x(under.0) + x(under.1)) / 2.0, y(r + 0.5));
        for end in [(x(under.0), y(r)), (x(under.1), y(r + 1.0))] {
            let near = (mid.0 + (end.0 - mid.0) * 0.3, mid.1 + (end.1 - mid.1) * 0.3);
            line(&mut out, end, near);
        }
    }
    if b.letters.is_empty() {
        for s in 0..b.strands {
            let s = s as f64;
            line(&mut out, (x(s), y(0.0)), (x(s), y(1.0)));
        }
    }
    out.push_str("</svg>\n");
    out
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64)) {
    let _ = writeln!(
        out,
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\" stroke-width=\"2\"/>",
        a.0, a.1, b.0, b.1
    );
}
