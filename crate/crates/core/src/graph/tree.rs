//! Bridges and rooted spanning trees.

use std::collections::BTreeSet;

use super::{Dsu, EdgeId, GraphError, RibbonGraph, VertexId};

/// Edge order used when growing a spanning tree.
#[derive(Clone, Debug, Default)]
pub enum TreePreference {
    /// Edges in description order.
    #[default]
    Default,
    /// Highest effective scale first, lower edge index on ties. Holds the
    /// effective scale of every edge.
    ScaleDescending(Vec<u32>),
}

/// A rooted spanning forest; one tree per connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: VertexId,
    /// Root of every component, `root` first.
    pub roots: Vec<VertexId>,
    pub tree_edges: BTreeSet<EdgeId>,
    pub loop_edges: BTreeSet<EdgeId>,
    /// Edge to the parent, `None` at roots.
    pub parent_edge: Vec<Option<EdgeId>>,
    pub parent: Vec<Option<VertexId>>,
    pub depth: Vec<usize>,
}

impl SpanningTree {
    /// Roots `edges` (assumed to form a spanning forest) at `root`.
    pub fn from_edges(
        g: &RibbonGraph,
        root: VertexId,
        edges: BTreeSet<EdgeId>,
    ) -> Result<Self, GraphError> {
        let nv = g.num_vertices();
        if root.0 >= nv {
            return Err(GraphError::UnknownVertex(format!("#{}", root.0)));
        }
        let mut adj: Vec<Vec<(EdgeId, VertexId)>> = vec![Vec::new(); nv];
        for &e in &edges {
            let (a, b) = g.endpoints(e);
            adj[a.0].push((e, b));
            adj[b.0].push((e, a));
        }
        let mut parent_edge = vec![None; nv];
        let mut parent = vec![None; nv];
        let mut depth = vec![0; nv];
        let mut seen = vec![false; nv];
        let mut roots = Vec::new();
        let order = std::iter::once(root).chain(g.vertex_ids().filter(|&v| v != root));
        for r in order {
            if seen[r.0] {
                continue;
            }
            roots.push(r);
            seen[r.0] = true;
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                for &(e, w) in &adj[v.0] {
                    if seen[w.0] {
                        if parent_edge[v.0] != Some(e) {
                            return Err(GraphError::MalformedGraph(
                                "tree edges contain a cycle".into(),
                            ));
                        }
                        continue;
                    }
                    seen[w.0] = true;
                    parent_edge[w.0] = Some(e);
                    parent[w.0] = Some(v);
                    depth[w.0] = depth[v.0] + 1;
                    stack.push(w);
                }
            }
        }
        if roots.len() != g.num_components() {
            return Err(GraphError::MalformedGraph(
                "tree edges do not span every component".into(),
            ));
        }
        let loop_edges = g.edge_ids().filter(|e| !edges.contains(e)).collect();
        Ok(SpanningTree {
            root,
            roots,
            tree_edges: edges,
            loop_edges,
            parent_edge,
            parent,
            depth,
        })
    }

    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.tree_edges.contains(&e)
    }

    /// The end of a tree edge farther from the root.
    pub fn child_of(&self, g: &RibbonGraph, e: EdgeId) -> VertexId {
        let (a, b) = g.endpoints(e);
        if self.parent_edge[b.0] == Some(e) {
            b
        } else {
            debug_assert_eq!(self.parent_edge[a.0], Some(e));
            a
        }
    }

    /// b(l): the vertices on the far side of tree edge `e` from the root.
    pub fn branch(&self, g: &RibbonGraph, e: EdgeId) -> BTreeSet<VertexId> {
        let top = self.child_of(g, e);
        g.vertex_ids()
            .filter(|&v| self.is_descendant(v, top))
            .collect()
    }

    /// True if `v` equals `ancestor` or lies below it.
    pub fn is_descendant(&self, mut v: VertexId, ancestor: VertexId) -> bool {
        loop {
            if v == ancestor {
                return true;
            }
            match self.parent[v.0] {
                Some(p) => v = p,
                None => return false,
            }
        }
    }
}

impl RibbonGraph {
    /// True iff deleting `e` increases the number of connected components.
    pub fn is_bridge(&self, e: EdgeId) -> bool {
        self.bridges()[e.0]
    }

    pub fn is_bridge_by_name(&self, name: &str) -> Result<bool, GraphError> {
        Ok(self.is_bridge(self.edge_by_name(name)?))
    }

    /// Bridge flag of every edge, by DFS low-links. Parallel edges and
    /// self-loops are handled by tracking the entering edge rather than the
    /// parent vertex.
    pub fn bridges(&self) -> Vec<bool> {
        self.bridges_with(|_| true)
    }

    /// Bridge flags within the subgraph of edges where `keep` holds; edges not
    /// kept are reported as `false`.
    pub fn bridges_with(&self, keep: impl Fn(EdgeId) -> bool) -> Vec<bool> {
        let nv = self.num_vertices();
        let mut adj: Vec<Vec<(EdgeId, VertexId)>> = vec![Vec::new(); nv];
        for e in self.edge_ids().filter(|&e| keep(e)) {
            let (a, b) = self.endpoints(e);
            adj[a.0].push((e, b));
            if a != b {
                adj[b.0].push((e, a));
            }
        }
        let mut out = vec![false; self.num_edges()];
        let mut disc = vec![usize::MAX; nv];
        let mut low = vec![0usize; nv];
        let mut time = 0;
        for s in 0..nv {
            if disc[s] != usize::MAX {
                continue;
            }
            // iterative DFS: (vertex, entering edge, next adjacency index)
            let mut stack: Vec<(usize, Option<EdgeId>, usize)> = vec![(s, None, 0)];
            disc[s] = time;
            low[s] = time;
            time += 1;
            while let Some(top) = stack.last_mut() {
                let (v, via, i) = *top;
                if i < adj[v].len() {
                    top.2 += 1;
                    let (e, w) = adj[v][i];
                    if Some(e) == via {
                        continue;
                    }
                    if disc[w.0] == usize::MAX {
                        disc[w.0] = time;
                        low[w.0] = time;
                        time += 1;
                        stack.push((w.0, Some(e), 0));
                    } else {
                        low[v] = low[v].min(disc[w.0]);
                    }
                } else {
                    stack.pop();
                    if let (Some(e), Some(&(p, _, _))) = (via, stack.last()) {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            out[e.0] = true;
                        }
                    }
                }
            }
        }
        out
    }

    /// Kruskal spanning forest rooted at `root`.
    pub fn spanning_tree(
        &self,
        root: VertexId,
        preference: &TreePreference,
    ) -> Result<SpanningTree, GraphError> {
        let mut order: Vec<EdgeId> = self.edge_ids().collect();
        if let TreePreference::ScaleDescending(scales) = preference {
            if scales.len() != self.num_edges() {
                return Err(GraphError::MalformedGraph(format!(
                    "{} scales supplied for {} edges",
                    scales.len(),
                    self.num_edges()
                )));
            }
            order.sort_by_key(|e| (std::cmp::Reverse(scales[e.0]), e.0));
        }
        let mut dsu = Dsu::new(self.num_vertices());
        let mut edges = BTreeSet::new();
        for e in order {
            let (a, b) = self.endpoints(e);
            if dsu.union(a.0, b.0) {
                edges.insert(e);
            }
        }
        SpanningTree::from_edges(self, root, edges)
    }

    /// Every spanning forest, as edge sets in lexicographic order, stopping
    /// after `cap` of them.
    pub fn all_spanning_edge_sets(&self, cap: usize) -> Vec<BTreeSet<EdgeId>> {
        let need = self.num_vertices() - self.num_components();
        let candidates: Vec<EdgeId> = self.edge_ids().filter(|&e| !self.is_self_loop(e)).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.extend_forests(&candidates, 0, need, &mut chosen, &mut out, cap);
        out
    }

    fn extend_forests(
        &self,
        candidates: &[EdgeId],
        from: usize,
        need: usize,
        chosen: &mut Vec<EdgeId>,
        out: &mut Vec<BTreeSet<EdgeId>>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if chosen.len() == need {
            out.push(chosen.iter().copied().collect());
            return;
        }
        if candidates.len() - from < need - chosen.len() {
            return;
        }
        for i in from..candidates.len() {
            chosen.push(candidates[i]);
            if self.is_forest(chosen) {
                self.extend_forests(candidates, i + 1, need, chosen, out, cap);
            }
            chosen.pop();
        }
    }

    fn is_forest(&self, edges: &[EdgeId]) -> bool {
        let mut dsu = Dsu::new(self.num_vertices());
        edges.iter().all(|&e| {
            let (a, b) = self.endpoints(e);
            dsu.union(a.0, b.0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_with_chord() -> RibbonGraph {
        // u-v-w triangle plus a pendant vertex x hanging off w
        RibbonGraph::from_json(
            r#"{
          "vertices": [{"id": "u", "ports": ["u0", "u1", "u2", "u3"]},
                       {"id": "v", "ports": ["v0", "v1", "v2", "v3"]},
                       {"id": "w", "ports": ["w0", "w1", "w2", "w3"]},
                       {"id": "x", "ports": ["x0", "x1", "x2", "x3"]}],
          "edges": [{"id": "uv", "ports": ["u0", "v0"], "kind": "simple"},
                    {"id": "vw", "ports": ["v1", "w0"], "kind": "simple"},
                    {"id": "wu", "ports": ["w1", "u1"], "kind": "simple"},
                    {"id": "wx", "ports": ["w2", "x0"], "kind": "generalised", "insertions": 1},
                    {"id": "xx", "ports": ["x1", "x2"], "kind": "simple"}],
          "externals": [{"id": "e1", "port": "u2"}, {"id": "e2", "port": "u3"},
                        {"id": "e3", "port": "v2"}, {"id": "e4", "port": "v3"},
                        {"id": "e5", "port": "w3"}, {"id": "e6", "port": "x3"}]
        }"#,
        )
        .unwrap()
    }

    #[test]
    fn bridges_of_triangle_with_pendant() {
        let g = triangle_with_chord();
        assert_eq!(g.bridges(), vec![false, false, false, true, false]);
        assert!(g.is_bridge_by_name("wx").unwrap());
        assert!(matches!(
            g.is_bridge_by_name("nope"),
            Err(GraphError::UnknownEdge(_))
        ));
    }

    #[test]
    fn kruskal_tree_and_branches() {
        let g = triangle_with_chord();
        let t = g
            .spanning_tree(VertexId(0), &TreePreference::Default)
            .unwrap();
        assert_eq!(
            t.tree_edges,
            [EdgeId(0), EdgeId(1), EdgeId(3)].into_iter().collect()
        );
        assert_eq!(t.loop_edges.len(), g.num_edges() - g.num_vertices() + 1);
        assert_eq!(
            t.branch(&g, EdgeId(1)),
            [VertexId(2), VertexId(3)].into_iter().collect()
        );
    }

    #[test]
    fn scale_preference_takes_high_scales_first() {
        let g = triangle_with_chord();
        let t = g
            .spanning_tree(
                VertexId(0),
                &TreePreference::ScaleDescending(vec![1, 3, 3, 2, 0]),
            )
            .unwrap();
        assert_eq!(
            t.tree_edges,
            [EdgeId(1), EdgeId(2), EdgeId(3)].into_iter().collect()
        );
    }

    #[test]
    fn triangle_has_three_spanning_trees() {
        let g = triangle_with_chord();
        assert_eq!(g.all_spanning_edge_sets(usize::MAX).len(), 3);
        assert_eq!(g.all_spanning_edge_sets(2).len(), 2);
    }
}
