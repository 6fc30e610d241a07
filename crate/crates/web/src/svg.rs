use std::fmt::Write;

use mastermodal::relmodel::{AnyModel, Relation};

const SIZE: f64 = 420.0;
const NODE: f64 = 22.0;

struct Style {
    colour: &'static str,
    dashed: bool,
}

const PREORDER: Style = Style {
    colour: "#c0392b",
    dashed: true,
};
const MODAL: Style = Style {
    colour: "#2463b4",
    dashed: false,
};

fn program_style(name: &str) -> Style {
    match name {
        "i" => PREORDER,
        "m" => MODAL,
        _ => Style {
            colour: "#2e8b57",
            dashed: false,
        },
    }
}

fn position(n: usize, w: usize) -> (f64, f64) {
    if n == 1 {
        return (SIZE / 2.0, SIZE / 2.0);
    }
    let r = SIZE / 2.0 - 3.0 * NODE;
    let t = std::f64::consts::TAU * w as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
    (SIZE / 2.0 + r * t.cos(), SIZE / 2.0 + r * t.sin())
}

/// Pairs of the preorder that are not reflexive and not implied by
/// transitivity.
fn covering_pairs(pre: &Relation) -> Vec<(usize, usize)> {
    let n = pre.worlds();
    pre.pairs()
        .filter(|&(a, b)| a != b)
        .filter(|&(a, b)| {
            !(0..n).any(|c| c != a && c != b && pre.contains(a, c) && pre.contains(c, b))
        })
        .collect()
}

fn edge(out: &mut String, n: usize, (a, b): (usize, usize), style: &Style, bend: f64) {
    let dash = if style.dashed {
        r#" stroke-dasharray="5 3""#
    } else {
        ""
    };
    let marker = style.colour.trim_start_matches('#');
    if a == b {
        let (x, y) = position(n, a);
        let _ = write!(
            out,
            r#"<path d="M {:.1} {:.1} c -26 -44 26 -44 8 -22" fill="none" stroke="{}"{dash} marker-end="url(#h{marker})"/>"#,
            x - 8.0,
            y - NODE + 2.0,
            style.colour
        );
        return;
    }
    let (x1, y1) = position(n, a);
    let (x2, y2) = position(n, b);
    let (dx, dy) = (x2 - x1, y2 - y1);
    let len = (dx * dx + dy * dy).sqrt().max(1.0);
    let (ux, uy) = (dx / len, dy / len);
    let (sx, sy) = (x1 + ux * NODE, y1 + uy * NODE);
    let (ex, ey) = (x2 - ux * (NODE + 3.0), y2 - uy * (NODE + 3.0));
    // bend to the left of the direction of travel, so opposite edges separate
    let (cx, cy) = ((sx + ex) / 2.0 - uy * bend, (sy + ey) / 2.0 + ux * bend);
    let _ = write!(
        out,
        r#"<path d="M {sx:.1} {sy:.1} Q {cx:.1} {cy:.1} {ex:.1} {ey:.1}" fill="none" stroke="{}"{dash} marker-end="url(#h{marker})"/>"#,
        style.colour
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// An SVG picture of a model: the preorder in dashed red (covering pairs
/// only), the modal relation in blue, fallible worlds shaded, and each world
/// labelled with the atoms true there. `focus` gets a thick outline.
pub fn draw(model: &AnyModel, focus: Option<usize>) -> String {
    let n = model.worlds();
    let mut out = String::new();
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}" font-family="sans-serif" font-size="12"><defs>"#
    );
    for colour in ["c0392b", "2463b4", "2e8b57"] {
        let _ = write!(
            out,
            r##"<marker id="h{colour}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#{colour}"/></marker>"##
        );
    }
    out.push_str("</defs>");

    let (val, bot) = match model {
        AnyModel::Bi { model: m, .. } => {
            for p in covering_pairs(&m.pre) {
                edge(&mut out, n, p, &PREORDER, 10.0);
            }
            for p in m.modal.pairs() {
                edge(&mut out, n, p, &MODAL, 22.0);
            }
            (&m.val, Some(&m.bot))
        }
        AnyModel::Pdl(m) => {
            for (k, (a, r)) in m.rho.iter().enumerate() {
                let style = program_style(&a.to_string());
                for p in r.pairs() {
                    edge(&mut out, n, p, &style, 10.0 + 12.0 * k as f64);
                }
            }
            (&m.val, None)
        }
    };

    for w in 0..n {
        let (x, y) = position(n, w);
        let fallible = bot.is_some_and(|b| b.contains(w));
        let fill = if fallible { "#d5d5d5" } else { "#ffffff" };
        let width = if focus == Some(w) { 3.5 } else { 1.5 };
        let _ = write!(
            out,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="{NODE}" fill="{fill}" stroke="#222" stroke-width="{width}"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{w}</text>"##,
            y + 4.0
        );
        let atoms: Vec<&str> = val
            .iter()
            .filter(|(_, s)| s.contains(w))
            .map(|(a, _)| a.as_str())
            .collect();
        let mut label = atoms.join(", ");
        if fallible {
            label = if label.is_empty() {
                "⊥".into()
            } else {
                format!("⊥; {label}")
            };
        }
        if !label.is_empty() {
            let _ = write!(
                out,
                r##"<text x="{x:.1}" y="{:.1}" text-anchor="middle" fill="#444">{}</text>"##,
                y + NODE + 14.0,
                escape(&label)
            );
        }
    }
    out.push_str("</svg>");
    out
}
