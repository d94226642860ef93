//! The divisor tree of `n`: a square of side `n` whose children are the
//! divisor trees of the proper divisors of `n`, recursively down to side 1.
//!
//! The tree's node count equals `kappa_0(n)`, its side-1 leaf count equals
//! `K(n)` for `n >= 2`, and generation `i` (the root being generation 0)
//! holds exactly `upsilon_{i+1}(n)` squares. A deterministic layout and SVG
//! rendering are provided for inspection; the geometry is decorative, the
//! counting structure is the contract.

use crate::error::{Error, Result};
use crate::eval::{kappa0_theorem2, BigCount};
use crate::factor::{divisors, factorize};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Cap on tree size when no explicit budget is given; recursive divisor
/// counts outgrow memory quickly.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// A square of side `side` with one child subtree per proper divisor of
/// `side`, in decreasing side order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorTree {
    pub side: u64,
    pub children: Vec<DivisorTree>,
}

impl DivisorTree {
    /// Total number of squares; equals the recursive divisor count of the
    /// root side.
    pub fn node_count(&self) -> BigCount {
        BigUint::from(self.node_count_u64())
    }

    fn node_count_u64(&self) -> u64 {
        1 + self
            .children
            .iter()
            .map(DivisorTree::node_count_u64)
            .sum::<u64>()
    }

    /// Number of side-1 squares; equals the ordered factorization count of
    /// the root side when it is at least 2.
    pub fn unit_count(&self) -> BigCount {
        BigUint::from(self.unit_count_u64())
    }

    fn unit_count_u64(&self) -> u64 {
        u64::from(self.side == 1)
            + self
                .children
                .iter()
                .map(DivisorTree::unit_count_u64)
                .sum::<u64>()
    }

    /// Squares per generation, the root being generation 0. Entry `i`
    /// equals the (i+1)-fold iterated proper-divisor count of the root
    /// side, and the list has one entry per generation down to side 1.
    pub fn generation_counts(&self) -> Vec<BigCount> {
        let mut counts: Vec<u64> = Vec::new();
        fn walk(t: &DivisorTree, depth: usize, counts: &mut Vec<u64>) {
            if counts.len() == depth {
                counts.push(0);
            }
            counts[depth] += 1;
            for c in &t.children {
                walk(c, depth + 1, counts);
            }
        }
        walk(self, 0, &mut counts);
        counts.into_iter().map(BigUint::from).collect()
    }
}

/// Builds the divisor tree of `n`, refusing when the exact final node count
/// (computed up front in closed form) would exceed `node_budget`.
pub fn build_tree(n: u64, node_budget: u64) -> Result<DivisorTree> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let required = kappa0_theorem2(&factorize(n)?.signature());
    if required > BigUint::from(node_budget) {
        return Err(Error::NodeBudgetExceeded {
            n,
            budget: node_budget,
            required,
        });
    }
    Ok(build_unchecked(n))
}

fn build_unchecked(n: u64) -> DivisorTree {
    let mut children: Vec<DivisorTree> = divisors(n)
        .into_iter()
        .filter(|&d| d < n)
        .map(build_unchecked)
        .collect();
    children.reverse(); // descending side order
    DivisorTree { side: n, children }
}

/// One placed square. `x` grows rightward and `y` grows upward from the
/// root's bottom-left corner at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutNode {
    pub side: u64,
    pub x: u64,
    pub y: u64,
    pub generation: u32,
}

/// A fully placed tree with its bounding box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutTree {
    /// Pre-order: each parent before its children, children in decreasing
    /// side order.
    pub nodes: Vec<LayoutNode>,
    pub width: u64,
    pub height: u64,
}

/// Places every square deterministically: the root sits at the origin, and
/// each node's children form an arm along one edge of the node, marching in
/// decreasing side order. Arms alternate direction by generation: children
/// of even-generation nodes extend rightward from the node's bottom-right
/// corner (bottom-aligned), children of odd-generation nodes extend upward
/// from its top-left corner (left-aligned). Squares within one arm cannot
/// overlap; arms of different nodes may, the drawing being decorative.
pub fn layout(t: &DivisorTree) -> LayoutTree {
    let mut nodes = Vec::new();
    place(t, 0, 0, 0, &mut nodes);
    let width = nodes.iter().map(|n| n.x + n.side).max().unwrap_or(0);
    let height = nodes.iter().map(|n| n.y + n.side).max().unwrap_or(0);
    LayoutTree {
        nodes,
        width,
        height,
    }
}

fn place(t: &DivisorTree, x: u64, y: u64, generation: u32, out: &mut Vec<LayoutNode>) {
    out.push(LayoutNode {
        side: t.side,
        x,
        y,
        generation,
    });
    let rightward = generation.is_multiple_of(2);
    let mut cursor = if rightward { x + t.side } else { y + t.side };
    for child in &t.children {
        if rightward {
            place(child, cursor, y, generation + 1, out);
        } else {
            place(child, x, cursor, generation + 1, out);
        }
        cursor += child.side;
    }
}

const GENERATION_FILLS: [&str; 8] = [
    "#4e79a7", "#59a14f", "#9c755f", "#b07aa1", "#76b7b2", "#edc948", "#e15759", "#af7aa1",
];
const UNIT_FILL: &str = "#f28e2b";

/// Renders a layout as a standalone SVG document with exactly one `<rect>`
/// per square. Rectangles carry class `g<generation>`, and side-1 squares
/// additionally carry class `unit`. Output is byte-deterministic.
pub fn render_svg(l: &LayoutTree) -> String {
    let mut generations: Vec<u32> = l.nodes.iter().map(|n| n.generation).collect();
    generations.sort_unstable();
    generations.dedup();

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" width=\"{w}\" height=\"{h}\">\n",
        w = l.width.max(1),
        h = l.height.max(1),
    ));
    out.push_str("<style>\nrect { stroke: #1b1b1b; stroke-width: 0.06; }\n");
    for g in generations {
        out.push_str(&format!(
            ".g{g} {{ fill: {}; }}\n",
            GENERATION_FILLS[g as usize % GENERATION_FILLS.len()]
        ));
    }
    out.push_str(&format!(".unit {{ fill: {UNIT_FILL}; }}\n</style>\n"));
    for n in &l.nodes {
        // flip to SVG's downward y axis
        let y = l.height - n.y - n.side;
        let class = if n.side == 1 {
            format!("g{} unit", n.generation)
        } else {
            format!("g{}", n.generation)
        };
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{s}\" height=\"{s}\" class=\"{class}\"/>\n",
            n.x,
            y,
            s = n.side,
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Serializes a tree as nested `{"side": N, "children": [...]}` objects.
pub fn export_json(t: &DivisorTree) -> String {
    serde_json::to_string(t).expect("tree serialization cannot fail")
}

/// Inverse of [`export_json`].
pub fn parse_json(text: &str) -> Result<DivisorTree> {
    Ok(serde_json::from_str(text)?)
}

/// Converts a generation-count entry back to `u64` for callers that know
/// the tree fit its budget.
pub fn count_as_u64(c: &BigCount) -> u64 {
    c.to_u64().expect("budgeted tree counts fit u64")
}
