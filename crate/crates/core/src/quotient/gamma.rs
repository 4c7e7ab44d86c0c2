//! The graph of non-flat edges and spanning trees of quotient 1-skeleta.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use super::{build_quotient, QuotientComplex};
use crate::complex::FacePairingScheme;
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    /// Quotient edge id.
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub order: u64,
}

/// Edge classes of order greater than 2 over the quotient vertices they touch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonFlatGraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<GraphEdge>,
}

impl NonFlatGraph {
    pub fn from_quotient(q: &QuotientComplex) -> Self {
        let edges: Vec<GraphEdge> = q
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_nonflat())
            .map(|(id, e)| GraphEdge { id, tail: e.tail, head: e.head, order: e.order })
            .collect();
        let vertices: BTreeSet<usize> = edges.iter().flat_map(|e| [e.tail, e.head]).collect();
        NonFlatGraph { vertices: vertices.into_iter().collect(), edges }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Deterministic DOT rendering with order-labelled edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gamma {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  v{v};");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -- v{} [label=\"e{} order={}\"];", e.tail, e.head, e.id, e.order);
        }
        out.push_str("}\n");
        out
    }
}

pub fn gamma_graph(scheme: &FacePairingScheme) -> NonFlatGraph {
    NonFlatGraph::from_quotient(&build_quotient(scheme))
}

/// Some component has at least as many edges as vertices (loops count).
pub fn has_circuit(graph: &NonFlatGraph) -> bool {
    let index = |v: usize| graph.vertices.binary_search(&v).expect("edge endpoint is a graph vertex");
    let mut uf = UnionFind::new(graph.vertices.len());
    for e in &graph.edges {
        if !uf.union(index(e.tail), index(e.head)) {
            return true;
        }
    }
    false
}

/// Breadth-first spanning forest of the 1-skeleton: each component is grown
/// from its smallest vertex, scanning incident edges by increasing id.
pub fn spanning_tree(q: &QuotientComplex) -> Vec<usize> {
    let n = q.vertices.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, e) in q.edges.iter().enumerate() {
        incident[e.tail].push(id);
        if e.head != e.tail {
            incident[e.head].push(id);
        }
    }
    let mut seen = vec![false; n];
    let mut tree = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &id in &incident[v] {
                let e = &q.edges[id];
                let w = if e.tail == v { e.head } else { e.tail };
                if !seen[w] {
                    seen[w] = true;
                    tree.push(id);
                    queue.push_back(w);
                }
            }
        }
    }
    tree.sort_unstable();
    tree
}

/// A tree in the 1-skeleton that contains every vertex of the non-flat graph
/// and as many non-flat edges as possible.
///
/// Grown from the smallest non-flat vertex, always taking the cheapest
/// frontier edge (non-flat edges cost 0, others 1, ties by edge id), then
/// pruned of leaves that are not non-flat vertices.
pub fn gamma_spanning_tree(q: &QuotientComplex) -> Vec<usize> {
    let gamma = NonFlatGraph::from_quotient(q);
    let n = q.vertices.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, e) in q.edges.iter().enumerate() {
        incident[e.tail].push(id);
        if e.head != e.tail {
            incident[e.head].push(id);
        }
    }
    let cost = |id: usize| if q.edges[id].is_nonflat() { 0u8 } else { 1u8 };
    let mut in_tree = vec![false; n];
    let mut tree: Vec<usize> = Vec::new();
    for &root in &gamma.vertices {
        if in_tree[root] {
            continue;
        }
        in_tree[root] = true;
        let mut heap = BinaryHeap::new();
        for &id in &incident[root] {
            heap.push(Reverse((cost(id), id)));
        }
        while let Some(Reverse((_, id))) = heap.pop() {
            let e = &q.edges[id];
            let w = match (in_tree[e.tail], in_tree[e.head]) {
                (true, false) => e.head,
                (false, true) => e.tail,
                _ => continue,
            };
            in_tree[w] = true;
            tree.push(id);
            for &next in &incident[w] {
                heap.push(Reverse((cost(next), next)));
            }
        }
    }

    let keep: BTreeSet<usize> = gamma.vertices.iter().copied().collect();
    let mut degree = vec![0usize; n];
    for &id in &tree {
        degree[q.edges[id].tail] += 1;
        degree[q.edges[id].head] += 1;
    }
    let mut alive = vec![true; tree.len()];
    loop {
        let mut changed = false;
        for (k, &id) in tree.iter().enumerate() {
            if !alive[k] {
                continue;
            }
            let e = &q.edges[id];
            for (leaf, other) in [(e.tail, e.head), (e.head, e.tail)] {
                if degree[leaf] == 1 && !keep.contains(&leaf) {
                    alive[k] = false;
                    degree[leaf] -= 1;
                    degree[other] -= 1;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut out: Vec<usize> = tree.into_iter().zip(alive).filter(|(_, a)| *a).map(|(id, _)| id).collect();
    out.sort_unstable();
    out
}
