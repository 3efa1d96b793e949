//! Explicit expansion trees in brace/bracket notation.
//!
//! A parcel that has not generated its children is written `{p(k)}`; once it
//! has, it becomes a cell `[p(k) - child - child ...]`. A parcel whose
//! generator count is zero is a leaf and is written plainly as `p(k)`.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::config::DEFAULT_MAX_TRACE_NODES;
use crate::error::{Error, Result};
use crate::generator::GeneratorRule;
use crate::numeric::ParcelEvaluator;
use crate::variant::TailVariant;

/// Rendered lines are wrapped before a `+`/`-` operator at this column.
pub const WRAP_COLUMN: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpansionNode {
    Parcel {
        tab: usize,
    },
    Cell {
        tab: usize,
        children: Vec<ExpansionNode>,
    },
}

impl ExpansionNode {
    pub fn tab(&self) -> usize {
        match self {
            ExpansionNode::Parcel { tab } | ExpansionNode::Cell { tab, .. } => *tab,
        }
    }

    pub fn children(&self) -> &[ExpansionNode] {
        match self {
            ExpansionNode::Parcel { .. } => &[],
            ExpansionNode::Cell { children, .. } => children,
        }
    }

    pub fn is_cell(&self) -> bool {
        matches!(self, ExpansionNode::Cell { .. })
    }

    /// Nodes in this subtree, itself included.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(ExpansionNode::size)
            .sum::<usize>()
    }

    /// Depth of the deepest node below (a lone parcel has height 1).
    pub fn height(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(ExpansionNode::height)
            .max()
            .unwrap_or(0)
    }

    /// p(tab) minus the signed values of the children.
    pub fn value(&self, p: &dyn Fn(usize) -> BigInt) -> BigInt {
        let mut v = p(self.tab());
        for child in self.children() {
            v -= child.value(p);
        }
        v
    }

    fn dump(&self) -> NodeDump {
        NodeDump {
            kind: if self.is_cell() { "cell" } else { "parcel" },
            tab: self.tab(),
            children: self.children().iter().map(ExpansionNode::dump).collect(),
        }
    }
}

/// A closed term that replaced a top-level parcel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedTerm {
    pub description: String,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceDocument {
    pub n: usize,
    pub variant: TailVariant,
    /// Top-level parcels {p(0)}, …, in tab order, fully expanded.
    pub nodes: Vec<ExpansionNode>,
    pub tail: Vec<ClosedTerm>,
    pub total: BigUint,
    /// Generations needed to expand everything (one per rendered line
    /// before the total).
    pub steps: usize,
}

fn build_node(
    tab: usize,
    head: usize,
    rule: GeneratorRule,
    budget: &mut usize,
    max_nodes: usize,
) -> Result<ExpansionNode> {
    if *budget == 0 {
        return Err(Error::ResourceLimit {
            what: "trace nodes",
            requested: max_nodes + 1,
            max: max_nodes,
        });
    }
    *budget -= 1;
    let lambda = rule.child_count(tab, head);
    if lambda == 0 {
        return Ok(ExpansionNode::Parcel { tab });
    }
    let children = (0..lambda)
        .map(|k| build_node(k, tab, rule, budget, max_nodes))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpansionNode::Cell { tab, children })
}

/// Fully expands p(n) under the given tail variant.
pub fn build_trace(n: usize, variant: TailVariant) -> Result<TraceDocument> {
    build_trace_with(n, variant, DEFAULT_MAX_TRACE_NODES, GeneratorRule::STANDARD)
}

pub fn build_trace_with(
    n: usize,
    variant: TailVariant,
    max_nodes: usize,
    rule: GeneratorRule,
) -> Result<TraceDocument> {
    let dropped = variant.substituted();
    if dropped > 0 && n < 2 {
        return Err(Error::InvalidVariant {
            variant: variant.flag(),
            n,
        });
    }
    let mut budget = max_nodes;
    let nodes = (0..n - dropped)
        .map(|tab| build_node(tab, n, rule, &mut budget, max_nodes))
        .collect::<Result<Vec<_>>>()?;

    let mut tail = Vec::new();
    if variant == TailVariant::TwoSub {
        tail.push(ClosedTerm {
            description: "⌊n/2⌋".into(),
            value: (n / 2) as u64,
        });
    }
    if dropped > 0 {
        tail.push(ClosedTerm {
            description: "1".into(),
            value: 1,
        });
    }

    let mut eval = ParcelEvaluator::new(rule);
    if n > 0 {
        eval.grow_to(n - 1);
    }
    let p = |m: usize| eval.value(m).clone();
    let mut total: BigInt = nodes.iter().map(|node| node.value(&p)).sum();
    total += tail.iter().map(|t| t.value).sum::<u64>();
    if n == 0 {
        total = BigInt::from(1);
    }
    let total = total
        .to_biguint()
        .ok_or_else(|| Error::Precondition("expansion evaluated to a negative total".into()))?;

    let steps = nodes
        .iter()
        .map(ExpansionNode::height)
        .max()
        .map_or(0, |h| h + 1);

    Ok(TraceDocument {
        n,
        variant,
        nodes,
        tail,
        total,
        steps,
    })
}

impl TraceDocument {
    pub fn node_count(&self) -> usize {
        self.nodes.iter().map(ExpansionNode::size).sum()
    }

    /// The expression at generation `step` (1-based): nodes at depth `step`
    /// are shown unexpanded in braces, shallower ones are expanded.
    pub fn generation(&self, step: usize) -> String {
        let mut out = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            write_node(&mut out, node, 1, step);
        }
        let closed = self.closed_tail_text();
        for term in closed {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&term);
        }
        out
    }

    fn closed_tail_text(&self) -> Vec<String> {
        self.tail
            .iter()
            .map(|t| {
                if t.description == "⌊n/2⌋" {
                    if self.n.is_multiple_of(2) {
                        format!("{}/2", self.n)
                    } else {
                        format!("({}-1)/2", self.n)
                    }
                } else {
                    t.value.to_string()
                }
            })
            .collect()
    }

    /// Machine-readable form of the document.
    pub fn to_json(&self) -> serde_json::Value {
        let dump = TraceDump {
            n: self.n,
            variant: self.variant,
            steps: self.steps,
            nodes: self.nodes.iter().map(ExpansionNode::dump).collect(),
            tail: self.tail.clone(),
            total: self.total.to_string(),
        };
        serde_json::to_value(dump).expect("trace dump is plain data")
    }
}

fn write_node(out: &mut String, node: &ExpansionNode, depth: usize, step: usize) {
    if depth >= step {
        out.push_str(&format!("{{p({})}}", node.tab()));
        return;
    }
    match node {
        ExpansionNode::Parcel { tab } => out.push_str(&format!("p({tab})")),
        ExpansionNode::Cell { tab, children } => {
            out.push_str(&format!("[p({tab})"));
            for child in children {
                out.push_str(" - ");
                write_node(out, child, depth + 1, step);
            }
            out.push(']');
        }
    }
}

/// Greedy wrap before ` + ` / ` - ` operators.
fn wrap(first_prefix: &str, body: &str, indent: usize) -> String {
    let mut pieces: Vec<&str> = Vec::new();
    let mut start = 0;
    let bytes = body.as_bytes();
    for i in 1..bytes.len().saturating_sub(2) {
        if bytes[i] == b' '
            && (bytes[i + 1] == b'+' || bytes[i + 1] == b'-')
            && bytes[i + 2] == b' '
        {
            pieces.push(&body[start..i]);
            start = i;
        }
    }
    pieces.push(&body[start..]);

    let mut lines = Vec::new();
    let mut line = first_prefix.to_string();
    let mut fresh = true;
    for piece in pieces {
        let width = line.chars().count() + piece.chars().count();
        if !fresh && width > WRAP_COLUMN {
            lines.push(line);
            line = " ".repeat(indent);
            line.push_str(piece.trim_start());
        } else {
            line.push_str(piece);
        }
        fresh = false;
    }
    lines.push(line);
    lines.join("\n")
}

/// Renders every generation of the expansion followed by the total.
pub fn render_trace(doc: &TraceDocument) -> String {
    let head = format!("p({})", doc.n);
    if doc.n == 0 {
        return format!("{head} = {}\n", doc.total);
    }
    let pad = " ".repeat(head.len());
    let indent = head.len() + 3;
    let mut out = String::new();
    for step in 1..=doc.steps.max(1) {
        let prefix = if step == 1 {
            format!("{head} = ")
        } else {
            format!("{pad} = ")
        };
        out.push_str(&wrap(&prefix, &doc.generation(step), indent));
        out.push('\n');
    }
    out.push_str(&format!("{pad} = {}\n", doc.total));
    out
}

#[derive(Serialize)]
struct NodeDump {
    kind: &'static str,
    tab: usize,
    children: Vec<NodeDump>,
}

#[derive(Serialize)]
struct TraceDump {
    n: usize,
    variant: TailVariant,
    steps: usize,
    nodes: Vec<NodeDump>,
    tail: Vec<ClosedTerm>,
    total: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::build_table;

    /// Evaluates rendered trace arithmetic with oracle p-values. Brackets
    /// group; `/` is integer division. Generations that still hold
    /// unexpanded `{p(k)}` parcels are skipped since those are not p(k).
    struct Expr<'a> {
        s: &'a [u8],
        i: usize,
        p: &'a dyn Fn(usize) -> i64,
    }

    impl Expr<'_> {
        fn ws(&mut self) {
            while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
                self.i += 1;
            }
        }
        fn sum(&mut self) -> i64 {
            let mut v = self.product();
            loop {
                self.ws();
                match self.s.get(self.i) {
                    Some(b'+') => {
                        self.i += 1;
                        v += self.product();
                    }
                    Some(b'-') => {
                        self.i += 1;
                        v -= self.product();
                    }
                    _ => return v,
                }
            }
        }
        fn product(&mut self) -> i64 {
            let mut v = self.atom();
            self.ws();
            while self.s.get(self.i) == Some(&b'/') {
                self.i += 1;
                v /= self.atom();
                self.ws();
            }
            v
        }
        fn atom(&mut self) -> i64 {
            self.ws();
            match self.s[self.i] {
                b'(' | b'[' | b'{' => {
                    self.i += 1;
                    let v = self.sum();
                    self.ws();
                    self.i += 1;
                    v
                }
                b'p' => {
                    self.i += 2;
                    let k = self.number();
                    self.i += 1;
                    (self.p)(k as usize)
                }
                _ => self.number(),
            }
        }
        fn number(&mut self) -> i64 {
            let start = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            std::str::from_utf8(&self.s[start..self.i])
                .unwrap()
                .parse()
                .unwrap()
        }
    }

    fn eval_segments(text: &str) -> Vec<i64> {
        let table = build_table(60).unwrap();
        let p = |k: usize| -> i64 { (&table[k]).try_into().unwrap() };
        let joined = text.replace('\n', " ");
        joined
            .split(" = ")
            .filter(|seg| !seg.contains('{'))
            .map(|seg| {
                let mut e = Expr {
                    s: seg.trim().as_bytes(),
                    i: 0,
                    p: &p,
                };
                let v = e.sum();
                e.ws();
                assert_eq!(e.i, e.s.len(), "unparsed text in {seg:?}");
                v
            })
            .collect()
    }

    #[test]
    fn p10_full_structure() {
        let doc = build_trace(10, TailVariant::Full).unwrap();
        assert_eq!(doc.total, BigUint::from(42u32));
        assert_eq!(doc.steps, 5);
        let counts: Vec<_> = doc
            .nodes
            .iter()
            .map(|n| (n.tab(), n.children().len()))
            .collect();
        assert_eq!(
            counts,
            vec![
                (0, 0),
                (1, 0),
                (2, 0),
                (3, 0),
                (4, 0),
                (5, 0),
                (6, 2),
                (7, 4),
                (8, 6),
                (9, 8)
            ]
        );
        let last = doc.generation(doc.steps);
        assert!(last.contains("[p(7) - p(0) - p(1) - p(2) - p(3) - [p(4) - p(0)]]"));
        assert!(last.starts_with("p(0) + p(1) + p(2) + p(3) + p(4) + p(5) + [p(6) - p(0) - p(1)]"));
    }

    #[test]
    fn p10_intermediate_generations_match_worked_display() {
        let doc = build_trace(10, TailVariant::Full).unwrap();
        assert_eq!(
            doc.generation(1),
            (0..10)
                .map(|i| format!("{{p({i})}}"))
                .collect::<Vec<_>>()
                .join(" + ")
        );
        assert!(doc.generation(2).contains("[p(6) - {p(0)} - {p(1)}]"));
        assert!(doc.generation(3).contains("[p(5) - {p(0)} - {p(1)}]]"));
        assert!(doc.generation(4).contains("[p(4) - {p(0)}]]]"));
    }

    #[test]
    fn tail_variants_of_p10() {
        let one = build_trace(10, TailVariant::OneSub).unwrap();
        assert_eq!(one.steps, 4);
        assert_eq!(one.nodes.len(), 9);
        assert_eq!(
            one.tail,
            vec![ClosedTerm {
                description: "1".into(),
                value: 1
            }]
        );
        let two = build_trace(10, TailVariant::TwoSub).unwrap();
        assert_eq!(two.steps, 3);
        assert_eq!(two.nodes.last().unwrap().tab(), 7);
        assert_eq!(
            two.tail.iter().map(|t| t.value).collect::<Vec<_>>(),
            vec![5, 1]
        );
        assert!(two.generation(3).ends_with(" + 10/2 + 1"));
        for doc in [&one, &two] {
            assert_eq!(doc.total, BigUint::from(42u32));
        }
    }

    #[test]
    fn small_cases() {
        let doc = build_trace(2, TailVariant::OneSub).unwrap();
        assert_eq!(doc.nodes, vec![ExpansionNode::Parcel { tab: 0 }]);
        assert_eq!(doc.total, BigUint::from(2u32));
        assert_eq!(
            render_trace(&build_trace(0, TailVariant::Full).unwrap()),
            "p(0) = 1\n"
        );
        let one = build_trace(1, TailVariant::Full).unwrap();
        assert_eq!(one.nodes, vec![ExpansionNode::Parcel { tab: 0 }]);
        assert_eq!(one.total, BigUint::from(1u32));
        assert_eq!(
            build_trace(1, TailVariant::TwoSub),
            Err(Error::InvalidVariant {
                variant: "two",
                n: 1
            })
        );
    }

    #[test]
    fn odd_two_sub_renders_halving() {
        let doc = build_trace(11, TailVariant::TwoSub).unwrap();
        assert!(doc.generation(doc.steps).ends_with(" + (11-1)/2 + 1"));
        assert_eq!(doc.total, BigUint::from(56u32));
    }

    #[test]
    fn generator_law_holds_everywhere() {
        fn walk(node: &ExpansionNode, head: usize) {
            let lambda = (2 * node.tab() as i64 - head as i64).max(0) as usize;
            assert_eq!(node.children().len(), lambda);
            assert_eq!(node.is_cell(), lambda > 0);
            for (i, child) in node.children().iter().enumerate() {
                assert_eq!(child.tab(), i);
                walk(child, node.tab());
            }
        }
        for n in 0..=22 {
            let doc = build_trace(n, TailVariant::Full).unwrap();
            for node in &doc.nodes {
                walk(node, n);
            }
        }
    }

    #[test]
    fn rendered_text_evaluates_to_total() {
        for n in 0..=18 {
            for v in TailVariant::ALL {
                let Ok(doc) = build_trace(n, v) else { continue };
                let text = render_trace(&doc);
                let total: i64 = (&doc.total).try_into().unwrap();
                for value in eval_segments(&text).into_iter().skip(1) {
                    assert_eq!(value, total, "n={n} {v}\n{text}");
                }
            }
        }
    }

    #[test]
    fn render_wraps_and_ends_with_total() {
        let text = render_trace(&build_trace(14, TailVariant::Full).unwrap());
        assert!(text.lines().all(|l| l.chars().count() <= WRAP_COLUMN + 12));
        assert!(text.ends_with("= 135\n"));
        assert!(text.starts_with("p(14) = {p(0)}"));
    }

    #[test]
    fn node_budget_enforced() {
        let err = build_trace_with(20, TailVariant::Full, 10, GeneratorRule::STANDARD).unwrap_err();
        assert!(matches!(
            err,
            Error::ResourceLimit {
                what: "trace nodes",
                ..
            }
        ));
    }

    #[test]
    fn json_dump_shape() {
        let doc = build_trace(4, TailVariant::Full).unwrap();
        let json = doc.to_json();
        assert_eq!(json["total"], "5");
        assert_eq!(json["nodes"][3]["kind"], "cell");
        assert_eq!(json["nodes"][3]["children"][1]["tab"], 1);
        assert_eq!(json["variant"], "none");
    }
}
