//! Disjoint sets with an optional parity label on every element.
//!
//! The parity variant tracks, for each element, whether it is "flipped"
//! relative to the root of its set. It is used for oriented edge classes
//! (an edge glued onto itself backwards shows up as a parity conflict) and
//! for orientability of 2-complexes.

/// Union-find over `0..n` with path compression and union by size.
///
/// Every element carries a parity bit relative to its parent; plain
/// [`union`](Self::union) ignores parities entirely.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), parity: vec![false; n], size: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root of `x` together with the parity of `x` relative to that root.
    pub fn find_with_parity(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // walk back from the node nearest the root, accumulating parity
        let mut acc = false;
        for &node in path.iter().rev() {
            acc ^= self.parity[node];
            self.parity[node] = acc;
            self.parent[node] = root;
        }
        (root, if path.is_empty() { false } else { self.parity[x] })
    }

    pub fn find(&mut self, x: usize) -> usize {
        self.find_with_parity(x).0
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Merge the sets of `a` and `b`. Returns `false` if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        self.union_with_parity(a, b, false) == Some(true)
    }

    /// Merge the sets of `a` and `b` asserting `parity(a) ^ parity(b) == odd`.
    ///
    /// Returns `Some(true)` on a fresh merge, `Some(false)` if the sets were
    /// already joined consistently, and `None` if they were already joined
    /// with the opposite relative parity (a conflict). Plain `union` calls
    /// share the bookkeeping, so mixing the two on one structure is not
    /// meaningful.
    pub fn union_with_parity(&mut self, a: usize, b: usize, odd: bool) -> Option<bool> {
        let (ra, pa) = self.find_with_parity(a);
        let (rb, pb) = self.find_with_parity(b);
        if ra == rb {
            return if pa ^ pb == odd { Some(false) } else { None };
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.parity[small] = pa ^ pb ^ odd;
        self.size[big] += self.size[small];
        Some(true)
    }

    /// Class index per element, numbering classes by their smallest member.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut root_label = vec![usize::MAX; n];
        let mut next = 0;
        let labels = (0..n)
            .map(|x| {
                let r = self.find(x);
                if root_label[r] == usize::MAX {
                    root_label[r] = next;
                    next += 1;
                }
                root_label[r]
            })
            .collect();
        (labels, next)
    }

    /// Members of every class, classes ordered by smallest member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let (labels, count) = self.labels();
        let mut out = vec![Vec::new(); count];
        for (x, &l) in labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }
}
