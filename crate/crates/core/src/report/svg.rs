use std::fmt::Write;

use crate::tree::TreeNode;

pub const MAX_RENDERED_NODES: usize = 200;

const LEVEL_GAP: f64 = 56.0;
const COLUMN_GAP: f64 = 30.0;
const RADIUS: f64 = 9.0;
const MARGIN: f64 = 24.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Palette {
    /// Source (COBOL) trees.
    Red,
    /// Translated (Java) trees.
    Green,
}

impl Palette {
    pub fn stroke(self) -> &'static str {
        match self {
            Palette::Red => "#d62728",
            Palette::Green => "#2ca02c",
        }
    }
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// Root-to-leaf path count.
pub fn path_count(tree: &TreeNode) -> usize {
    if tree.children.is_empty() {
        1
    } else {
        tree.children.iter().map(path_count).sum()
    }
}

struct Placed<'a> {
    node: &'a TreeNode,
    depth: usize,
    parent: Option<usize>,
    x: f64,
}

/// Keeps the first `cap` nodes in pre-order; dropped nodes take their
/// subtrees with them.
fn place(tree: &TreeNode, cap: usize) -> Vec<Placed<'_>> {
    let mut nodes: Vec<Placed<'_>> = Vec::new();
    let mut kids: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![(tree, 0usize, None::<usize>)];
    while let Some((n, d, parent)) = stack.pop() {
        if nodes.len() == cap {
            break;
        }
        let i = nodes.len();
        nodes.push(Placed { node: n, depth: d, parent, x: 0.0 });
        kids.push(Vec::new());
        if let Some(p) = parent {
            kids[p].push(i);
        }
        for c in n.children.iter().rev() {
            stack.push((c, d + 1, Some(i)));
        }
    }
    // Leaves take consecutive columns; parents sit over their children.
    let mut next = 0.0;
    fn assign(i: usize, kids: &[Vec<usize>], nodes: &mut [Placed<'_>], next: &mut f64) {
        if kids[i].is_empty() {
            nodes[i].x = *next;
            *next += 1.0;
            return;
        }
        for &c in &kids[i] {
            assign(c, kids, nodes, next);
        }
        let first = nodes[kids[i][0]].x;
        let last = nodes[*kids[i].last().expect("child")].x;
        nodes[i].x = (first + last) / 2.0;
    }
    if !nodes.is_empty() {
        assign(0, &kids, &mut nodes, &mut next);
    }
    nodes
}

/// Adds the SVG namespace so a fragment can be saved as its own file.
/// Fragments omit it because inline SVG in HTML does not need it.
pub fn standalone(fragment: &str) -> String {
    match fragment.strip_prefix("<svg") {
        Some(rest) => format!("<svg xmlns=\"http://www.w3.org/2000/svg\"{rest}\n"),
        None => fragment.to_string(),
    }
}

/// Layered drawing: depth sets y, sibling order sets x. At most
/// [`MAX_RENDERED_NODES`] nodes are drawn; the rest are counted in a badge.
pub fn render_ast_svg(tree: &TreeNode, palette: Palette) -> String {
    let total = tree.node_count();
    let nodes = place(tree, MAX_RENDERED_NODES);
    let columns = nodes.iter().map(|p| p.x).fold(0.0, f64::max) + 1.0;
    let levels = nodes.iter().map(|p| p.depth).max().unwrap_or(0) as f64 + 1.0;
    let elided = total - nodes.len();
    let badge_h = if elided > 0 { 24.0 } else { 0.0 };
    let width = 2.0 * MARGIN + (columns - 1.0) * COLUMN_GAP;
    let height = 2.0 * MARGIN + (levels - 1.0) * LEVEL_GAP + badge_h + 10.0;
    let pos = |p: &Placed<'_>| (MARGIN + p.x * COLUMN_GAP, MARGIN + p.depth as f64 * LEVEL_GAP);
    let stroke = palette.stroke();

    let mut s = String::new();
    let _ = write!(
        s,
        r#"<svg class="ast" viewBox="0 0 {w:.1} {h:.1}" width="{w:.1}" height="{h:.1}" font-family="sans-serif" font-size="8">"#,
        w = width,
        h = height
    );
    s.push_str(r##"<g stroke="#888" stroke-width="1">"##);
    for p in &nodes {
        if let Some(parent) = p.parent {
            let (x1, y1) = pos(&nodes[parent]);
            let (x2, y2) = pos(p);
            let _ = write!(s, r#"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}"/>"#);
        }
    }
    s.push_str("</g>");
    for p in &nodes {
        let (x, y) = pos(p);
        let title = if p.node.label.is_empty() {
            escape(&p.node.kind)
        } else {
            format!("{}: {}", escape(&p.node.kind), escape(&p.node.label))
        };
        let _ = write!(
            s,
            r#"<g class="node"><title>{title}</title><circle cx="{x:.1}" cy="{y:.1}" r="{RADIUS}" fill="white" stroke="{stroke}" stroke-width="2"/><text x="{x:.1}" y="{ty:.1}" text-anchor="middle">{kind}</text></g>"#,
            ty = y + RADIUS + 9.0,
            kind = escape(&p.node.kind),
        );
    }
    if elided > 0 {
        let _ = write!(
            s,
            r#"<g class="badge"><rect x="{MARGIN}" y="{y:.1}" width="90" height="18" rx="9" fill="{stroke}"/><text x="{tx:.1}" y="{tty:.1}" fill="white" font-size="10" text-anchor="middle">+{elided} elided</text></g>"#,
            y = height - badge_h - 4.0,
            tx = MARGIN + 45.0,
            tty = height - badge_h + 9.0,
        );
    }
    s.push_str("</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> TreeNode {
        let mut t = TreeNode::new("Leaf", "", 0);
        for _ in 1..n {
            t = TreeNode::new("Node", "", 0).with_children(vec![t]);
        }
        t
    }

    fn ys(svg: &str) -> Vec<f64> {
        svg.split("<circle ").skip(1).map(|c| c.split("cy=\"").nth(1).unwrap().split('"').next().unwrap().parse().unwrap()).collect()
    }

    #[test]
    fn single_node() {
        let svg = render_ast_svg(&TreeNode::new("Program", "P", 1), Palette::Red);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(">Program</text>"));
        assert!(!svg.contains("<line"));
    }

    #[test]
    fn chain_layout() {
        let svg = render_ast_svg(&chain(3), Palette::Green);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<line").count(), 2);
        let y = ys(&svg);
        assert!(y.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn large_trees_are_capped() {
        let t = TreeNode::new("Root", "", 0).with_children((0..249).map(|_| TreeNode::new("Leaf", "", 0)).collect());
        let svg = render_ast_svg(&t, Palette::Red);
        assert_eq!(svg.matches("<circle").count(), 200);
        assert!(svg.contains("+50 elided"));
    }

    #[test]
    fn labels_are_escaped() {
        let t = TreeNode::new("Display", "'<A & B>'", 0);
        let svg = render_ast_svg(&t, Palette::Red);
        assert!(svg.contains("&#39;&lt;A &amp; B&gt;&#39;"));
    }

    #[test]
    fn paths_are_leaves() {
        let t = TreeNode::new("R", "", 0).with_children(vec![chain(2), TreeNode::new("L", "", 0)]);
        assert_eq!(path_count(&t), 2);
    }
}
