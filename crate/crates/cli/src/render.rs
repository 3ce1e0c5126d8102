//! SVG drawings of derived trees and derivation trees.
//!
//! Derivation trees draw substitution arcs solid and adjunction arcs dashed;
//! anchors are set in bold.

use std::fmt::Write;
use xtag::grammar::{NodeKind, ParseTree};
use xtag::parser::{Derivation, Operation};

const H_GAP: f64 = 70.0;
const V_GAP: f64 = 56.0;
const MARGIN: f64 = 30.0;

struct Node {
    label: String,
    bold: bool,
    /// Style of the arc from the parent.
    dashed: bool,
    edge_label: Option<String>,
    children: Vec<Node>,
}

fn from_parse(t: &ParseTree) -> Node {
    let leaf = t.kind == NodeKind::Terminal || (t.children.is_empty() && t.word.is_some());
    let mut children: Vec<Node> = t.children.iter().map(from_parse).collect();
    if let (Some(w), true) = (&t.word, t.kind == NodeKind::Anchor && t.children.is_empty()) {
        children.push(Node { label: w.clone(), bold: true, dashed: false, edge_label: None, children: Vec::new() });
    }
    let label = if leaf && t.kind == NodeKind::Terminal { t.word.clone().unwrap_or_else(|| t.label.clone()) } else { t.label.clone() };
    Node { label, bold: false, dashed: false, edge_label: None, children }
}

fn from_derivation(d: &Derivation, dashed: bool, edge_label: Option<String>) -> Node {
    Node {
        label: d.label(),
        bold: true,
        dashed,
        edge_label,
        children: d
            .children
            .iter()
            .map(|e| from_derivation(&e.child, e.op == Operation::Adjunction, Some(e.address.to_string())))
            .collect(),
    }
}

struct Placed {
    x: f64,
    y: f64,
}

fn layout(n: &Node, depth: usize, next_leaf: &mut f64, out: &mut Vec<(usize, Placed)>, parent: Option<usize>, edges: &mut Vec<(usize, usize)>) -> usize {
    let me = out.len();
    out.push((me, Placed { x: 0.0, y: MARGIN + depth as f64 * V_GAP }));
    if let Some(p) = parent {
        edges.push((p, me));
    }
    let x = if n.children.is_empty() {
        let x = *next_leaf;
        *next_leaf += H_GAP;
        x
    } else {
        let ids: Vec<usize> = n.children.iter().map(|c| layout(c, depth + 1, next_leaf, out, Some(me), edges)).collect();
        (out[ids[0]].1.x + out[*ids.last().expect("non-empty")].1.x) / 2.0
    };
    out[me].1.x = x;
    me
}

fn flatten<'a>(n: &'a Node, out: &mut Vec<&'a Node>) {
    out.push(n);
    n.children.iter().for_each(|c| flatten(c, out));
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn draw(root: &Node, title: &str, legend: bool) -> String {
    let mut placed = Vec::new();
    let mut edges = Vec::new();
    let mut next = MARGIN + 20.0;
    layout(root, 0, &mut next, &mut placed, None, &mut edges);
    let mut nodes = Vec::new();
    flatten(root, &mut nodes);
    let width = next + MARGIN;
    let depth = placed.iter().map(|(_, p)| p.y).fold(0.0, f64::max);
    let height = depth + MARGIN + if legend { 50.0 } else { 20.0 };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    for &(p, c) in &edges {
        let (a, b) = (&placed[p].1, &placed[c].1);
        let dash = if nodes[c].dashed { r#" stroke-dasharray="5,4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"{dash}/>"#,
            a.x,
            a.y + 6.0,
            b.x,
            b.y - 12.0
        );
        if let Some(l) = &nodes[c].edge_label {
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" font-size="10" fill="gray">{}</text>"#,
                (a.x + b.x) / 2.0 + 4.0,
                (a.y + b.y) / 2.0,
                escape(l)
            );
        }
    }
    for (n, (_, p)) in nodes.iter().zip(&placed) {
        let weight = if n.bold { r#" font-weight="bold""# } else { "" };
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle"{weight}>{}</text>"#, p.x, p.y, escape(&n.label));
    }
    if legend {
        let y = depth + MARGIN + 20.0;
        let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black"/>"#, MARGIN + 30.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">substitution</text>"#, MARGIN + 36.0, y + 4.0);
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black" stroke-dasharray="5,4"/>"#,
            MARGIN + 130.0,
            MARGIN + 160.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">adjunction</text>"#, MARGIN + 166.0, y + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

pub fn derived_svg(t: &ParseTree) -> String {
    draw(&from_parse(t), &t.frontier().join(" "), false)
}

pub fn derivation_svg(d: &Derivation) -> String {
    draw(&from_derivation(d, false, None), &d.to_string(), true)
}
