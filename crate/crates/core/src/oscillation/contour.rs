//! Counterclockwise contour of a rooted spanning tree.

use std::collections::BTreeMap;

use crate::graph::{Attachment, EdgeId, ExtId, PortId, RibbonGraph, SpanningTree, VertexId};

use super::{check_rosette_input, OscillationError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContourItem {
    External(ExtId),
    /// A tree line, placed where the walk descends through it.
    Tree(EdgeId),
    /// One end of a loop line, at the given port.
    LoopEnd(EdgeId, PortId),
}

/// Positions a line occupies on the contour; a tree line occupies one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn is_loop(&self) -> bool {
        self.start != self.end
    }

    pub fn before(&self, other: &Span) -> bool {
        self.end < other.start
    }

    /// True if `self` sits strictly between the two ends of `outer`.
    pub fn nested_in(&self, outer: &Span) -> bool {
        outer.start < self.start && self.end < outer.end
    }

    /// `self ⋉ other`: ends met in the order self, other, self, other.
    pub fn crosses_left(&self, other: &Span) -> bool {
        self.start < other.start && other.start < self.end && self.end < other.end
    }

    pub fn arches(&self, pos: usize) -> bool {
        self.start < pos && pos < self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContourOrder {
    pub items: Vec<ContourItem>,
    ext_pos: BTreeMap<ExtId, usize>,
    spans: BTreeMap<EdgeId, Span>,
    /// Port of end ℓ1 and of end ℓ2 for every line.
    ends: BTreeMap<EdgeId, (PortId, PortId)>,
}

impl ContourOrder {
    pub fn external_position(&self, x: ExtId) -> usize {
        self.ext_pos[&x]
    }

    /// Externals in contour order.
    pub fn externals(&self) -> impl Iterator<Item = ExtId> + '_ {
        self.items.iter().filter_map(|it| match it {
            ContourItem::External(x) => Some(*x),
            _ => None,
        })
    }

    pub fn span(&self, e: EdgeId) -> Span {
        self.spans[&e]
    }

    pub fn lines(&self) -> impl Iterator<Item = (EdgeId, Span)> + '_ {
        self.spans.iter().map(|(e, s)| (*e, *s))
    }

    /// Ports of ends ℓ1 and ℓ2.
    pub fn ends(&self, e: EdgeId) -> (PortId, PortId) {
        self.ends[&e]
    }

    /// Ordered pairs `(ℓ, ℓ')` of loop lines with `ℓ ⋉ ℓ'`.
    pub fn crossings(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut out = Vec::new();
        for (a, sa) in &self.spans {
            for (b, sb) in &self.spans {
                if sa.is_loop() && sb.is_loop() && sa.crosses_left(sb) {
                    out.push((*a, *b));
                }
            }
        }
        out
    }

    /// Pairs `(ℓ, k)` with loop line ℓ arching over external k.
    pub fn arches(&self) -> Vec<(EdgeId, ExtId)> {
        let mut out = Vec::new();
        for (e, s) in &self.spans {
            for (x, pos) in &self.ext_pos {
                if s.arches(*pos) {
                    out.push((*e, *x));
                }
            }
        }
        out
    }
}

/// Depth-first contour from the root's first port. At every other vertex the
/// walk starts right after the port through which it entered.
pub fn contour_order(g: &RibbonGraph, t: &SpanningTree) -> Result<ContourOrder, OscillationError> {
    check_rosette_input(g, t)?;
    let mut items = Vec::new();
    let mut ends = BTreeMap::new();
    let mut first_loop_end: BTreeMap<EdgeId, PortId> = BTreeMap::new();
    walk(
        g,
        t,
        t.root,
        None,
        &mut items,
        &mut ends,
        &mut first_loop_end,
    );

    let mut ext_pos = BTreeMap::new();
    let mut spans: BTreeMap<EdgeId, Span> = BTreeMap::new();
    for (pos, item) in items.iter().enumerate() {
        match *item {
            ContourItem::External(x) => {
                ext_pos.insert(x, pos);
            }
            ContourItem::Tree(e) => {
                spans.insert(
                    e,
                    Span {
                        start: pos,
                        end: pos,
                    },
                );
            }
            ContourItem::LoopEnd(e, _) => {
                spans.entry(e).and_modify(|s| s.end = pos).or_insert(Span {
                    start: pos,
                    end: pos,
                });
            }
        }
    }
    Ok(ContourOrder {
        items,
        ext_pos,
        spans,
        ends,
    })
}

fn walk(
    g: &RibbonGraph,
    t: &SpanningTree,
    v: VertexId,
    entry: Option<PortId>,
    items: &mut Vec<ContourItem>,
    ends: &mut BTreeMap<EdgeId, (PortId, PortId)>,
    first_loop_end: &mut BTreeMap<EdgeId, PortId>,
) {
    for p in g.ports_after(v, entry) {
        match g.port(p).attachment {
            Attachment::External(x) => items.push(ContourItem::External(x)),
            Attachment::Edge(e, _) if t.is_tree_edge(e) => {
                let far = g.alpha(p);
                items.push(ContourItem::Tree(e));
                ends.insert(e, (p, far));
                walk(
                    g,
                    t,
                    g.port(far).vertex,
                    Some(far),
                    items,
                    ends,
                    first_loop_end,
                );
            }
            Attachment::Edge(e, _) => {
                items.push(ContourItem::LoopEnd(e, p));
                match first_loop_end.get(&e) {
                    Some(&first) => {
                        ends.insert(e, (first, p));
                    }
                    None => {
                        first_loop_end.insert(e, p);
                    }
                }
            }
        }
    }
}
