//! Graphs over combinatorial vertex labels, an exact maximum-clique and
//! clique-enumeration engine, and group actions for symmetry splitting.
//!
//! The clique engine is a branch-and-bound search over bit-packed candidate
//! sets. It processes vertices in the graph's construction order and prunes
//! with two bounds: exact suffix clique numbers (computed incrementally, one
//! start vertex at a time) and a greedy-coloring bound on large candidate
//! sets. Vertex order matters for speed; builders in this crate order
//! vertices so that strongly interacting vertices are consecutive, and
//! [`SearchGraph::degeneracy_order`] is available to reorder arbitrary
//! input graphs.

mod extension;
mod orbits;

pub use extension::{
    admissible_solids, build_extension_graph, build_mrd_extension_graph, count_admissible_solids,
};
pub use orbits::{
    enumerate_cliques_split, group_closure_order, orbits, split_subproblems, GroupAction,
    Subproblem, Transversal,
};

use std::io::{BufRead, Write};

use crate::{Error, Result};

/// An undirected graph without self-loops over an indexed list of opaque
/// vertex labels, with bit-packed symmetric adjacency.
#[derive(Clone, Debug)]
pub struct SearchGraph<L> {
    labels: Vec<L>,
    words: usize,
    adj: Vec<u64>,
}

impl<L> SearchGraph<L> {
    /// Builds a graph by evaluating `edge` on every unordered label pair.
    pub fn from_edge_fn(labels: Vec<L>, mut edge: impl FnMut(&L, &L) -> bool) -> Self {
        let n = labels.len();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        for u in 0..n {
            for v in u + 1..n {
                if edge(&labels[u], &labels[v]) {
                    adj[u * words + v / 64] |= 1 << (v % 64);
                    adj[v * words + u / 64] |= 1 << (u % 64);
                }
            }
        }
        SearchGraph { labels, words, adj }
    }

    /// Builds a graph from an explicit edge list.
    pub fn from_edges(labels: Vec<L>, edges: &[(usize, usize)]) -> Self {
        let n = labels.len();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        for &(u, v) in edges {
            assert!(u < n && v < n && u != v, "invalid edge ({u}, {v})");
            adj[u * words + v / 64] |= 1 << (v % 64);
            adj[v * words + u / 64] |= 1 << (u % 64);
        }
        SearchGraph { labels, words, adj }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &L {
        &self.labels[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v * self.words..(v + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// The induced subgraph on `vertices` (indices into this graph); the
    /// i-th vertex of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> SearchGraph<L>
    where
        L: Clone,
    {
        let labels: Vec<L> = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        let n = labels.len();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        for i in 0..n {
            for j in i + 1..n {
                if self.has_edge(vertices[i], vertices[j]) {
                    adj[i * words + j / 64] |= 1 << (j % 64);
                    adj[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        SearchGraph { labels, words, adj }
    }

    /// A degeneracy order: repeatedly removes a vertex of minimum remaining
    /// degree (smallest index on ties).
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut degree: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (degree[v], v))
                .unwrap();
            removed[v] = true;
            order.push(v);
            for u in 0..n {
                if !removed[u] && self.has_edge(v, u) {
                    degree[u] -= 1;
                }
            }
        }
        order
    }

    /// The graph with vertices re-indexed so that new vertex `i` is old
    /// vertex `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> SearchGraph<L>
    where
        L: Clone,
    {
        assert_eq!(order.len(), self.len());
        self.induced(order)
    }

    /// Exact maximum clique size with one witness clique (vertices sorted
    /// ascending). Deterministic for a fixed vertex order.
    pub fn max_clique(&self) -> (usize, Vec<usize>) {
        let mut engine = Engine::new(self.words, &self.adj, self.len());
        engine.solve_max();
        let mut witness = engine.best_clique;
        witness.sort_unstable();
        (engine.best, witness)
    }

    /// Every clique of exactly `size` vertices, each emitted once as an
    /// ascending vertex list, in lexicographic order.
    pub fn enumerate_cliques(&self, size: usize) -> Vec<Vec<usize>> {
        if size == 0 {
            return vec![Vec::new()];
        }
        let mut engine = Engine::new(self.words, &self.adj, self.len());
        engine.solve_max();
        engine.enumerate(size)
    }

    /// Writes the graph in the plain text exchange format: a `p <n> <m>`
    /// header followed by one `e <u> <v>` line per edge (1-based, u < v).
    pub fn write_text(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "p {} {}", self.len(), self.edge_count())?;
        for u in 0..self.len() {
            for v in u + 1..self.len() {
                if self.has_edge(u, v) {
                    writeln!(w, "e {} {}", u + 1, v + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Reads a graph in the text exchange format produced by
/// [`SearchGraph::write_text`].
pub fn read_graph_text(r: impl BufRead) -> Result<SearchGraph<()>> {
    let parse_err = |line: usize, reason: &str| Error::Parse {
        line,
        reason: reason.to_string(),
    };
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut fields = line.split_whitespace();
        match fields.next() {
            None => continue,
            Some("p") => {
                let vertices: usize = fields
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(lineno, "malformed p line"))?;
                n = Some(vertices);
            }
            Some("e") => {
                let u: usize = fields
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(lineno, "malformed e line"))?;
                let v: usize = fields
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(lineno, "malformed e line"))?;
                let n = n.ok_or_else(|| parse_err(lineno, "e line before p line"))?;
                if u == 0 || v == 0 || u > n || v > n || u == v {
                    return Err(parse_err(lineno, "edge endpoints out of range"));
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => {
                return Err(parse_err(lineno, &format!("unknown record {other:?}")));
            }
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "missing p line"))?;
    Ok(SearchGraph::from_edges(vec![(); n], &edges))
}

/// Branch-and-bound clique search over bit-packed candidate sets.
struct Engine<'a> {
    n: usize,
    words: usize,
    adj: &'a [u64],
    /// c[i] = clique number of the subgraph induced by vertices i..n.
    c: Vec<u32>,
    best: usize,
    best_clique: Vec<usize>,
    found: bool,
    stack: Vec<usize>,
    /// Per-depth candidate buffers, n+1 levels of `words` words each.
    bufs: Vec<u64>,
    /// Scratch: per color class, the union of its members' neighborhoods.
    color_nbrs: Vec<u64>,
    results: Vec<Vec<usize>>,
}

/// Candidate-set size above which the greedy coloring bound is computed.
const COLOR_THRESHOLD: usize = 48;

impl<'a> Engine<'a> {
    fn new(words: usize, adj: &'a [u64], n: usize) -> Self {
        Engine {
            n,
            words,
            adj,
            c: vec![0; n + 1],
            best: 0,
            best_clique: Vec::new(),
            found: false,
            stack: Vec::new(),
            bufs: vec![0u64; (n + 1) * words],
            color_nbrs: Vec::new(),
            results: Vec::new(),
        }
    }

    /// Computes suffix clique numbers from the back, recording the best
    /// clique found overall.
    fn solve_max(&mut self) {
        for i in (0..self.n).rev() {
            self.found = false;
            let count = self.load_suffix_neighbors(0, i);
            self.stack.push(i);
            self.expand(0, 1, count);
            self.stack.pop();
            self.c[i] = self.best as u32;
        }
    }

    /// Loads N(i) ∩ {i+1..n} into buffer `level`, returning its size.
    fn load_suffix_neighbors(&mut self, level: usize, i: usize) -> usize {
        let w = self.words;
        let mut count = 0;
        for t in 0..w {
            let mut word = self.adj[i * w + t];
            if t < i / 64 {
                word = 0;
            } else if t == i / 64 {
                // Clear bits 0..=i.
                word &= !(u64::MAX >> (63 - (i % 64) as u32));
            }
            self.bufs[level * w + t] = word;
            count += word.count_ones() as usize;
        }
        count
    }

    fn expand(&mut self, level: usize, size: usize, count: usize) {
        if count == 0 {
            if size > self.best {
                self.best = size;
                self.best_clique = self.stack.clone();
                self.found = true;
            }
            return;
        }
        if size + count <= self.best {
            return;
        }
        if count > COLOR_THRESHOLD && size + self.color_bound(level) <= self.best {
            return;
        }
        let w = self.words;
        let mut remaining = count;
        while remaining > 0 && size + remaining > self.best {
            let u = match first_set(&self.bufs[level * w..(level + 1) * w]) {
                Some(u) => u,
                None => return,
            };
            // Every remaining candidate lies in the suffix starting at u.
            if size + self.c[u] as usize <= self.best {
                return;
            }
            self.bufs[level * w + u / 64] &= !(1u64 << (u % 64));
            remaining -= 1;
            let child_count = self.intersect_child(level, u);
            self.stack.push(u);
            self.expand(level + 1, size + 1, child_count);
            self.stack.pop();
            if self.found {
                return;
            }
        }
    }

    /// Writes bufs[level] ∩ N(u) into bufs[level+1], returning its size.
    fn intersect_child(&mut self, level: usize, u: usize) -> usize {
        let w = self.words;
        let mut count = 0;
        for t in 0..w {
            let word = self.bufs[level * w + t] & self.adj[u * w + t];
            self.bufs[(level + 1) * w + t] = word;
            count += word.count_ones() as usize;
        }
        count
    }

    /// Greedy sequential coloring of the candidate set at `level`; the
    /// number of color classes bounds any clique inside it.
    fn color_bound(&mut self, level: usize) -> usize {
        let w = self.words;
        self.color_nbrs.clear();
        let mut classes = 0usize;
        for t in 0..w {
            let mut word = self.bufs[level * w + t];
            while word != 0 {
                let v = t * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                let mut assigned = false;
                for cls in 0..classes {
                    if self.color_nbrs[cls * w + v / 64] >> (v % 64) & 1 == 0 {
                        for s in 0..w {
                            self.color_nbrs[cls * w + s] |= self.adj[v * w + s];
                        }
                        assigned = true;
                        break;
                    }
                }
                if !assigned {
                    self.color_nbrs.resize((classes + 1) * w, 0);
                    for s in 0..w {
                        self.color_nbrs[classes * w + s] = self.adj[v * w + s];
                    }
                    classes += 1;
                }
            }
        }
        classes
    }

    /// Enumerates all cliques of exactly `target` vertices. Requires
    /// `solve_max` to have filled the suffix bounds.
    fn enumerate(&mut self, target: usize) -> Vec<Vec<usize>> {
        self.results.clear();
        for i in 0..self.n {
            // Suffix clique numbers only shrink with i.
            if (self.c[i] as usize) < target {
                break;
            }
            let count = self.load_suffix_neighbors(0, i);
            self.stack.push(i);
            self.enum_rec(0, target - 1, count);
            self.stack.pop();
        }
        std::mem::take(&mut self.results)
    }

    fn enum_rec(&mut self, level: usize, need: usize, count: usize) {
        if need == 0 {
            self.results.push(self.stack.clone());
            return;
        }
        if count < need {
            return;
        }
        if count > COLOR_THRESHOLD && self.color_bound(level) < need {
            return;
        }
        let w = self.words;
        let mut remaining = count;
        while remaining >= need {
            let u = match first_set(&self.bufs[level * w..(level + 1) * w]) {
                Some(u) => u,
                None => return,
            };
            if (self.c[u] as usize) < need {
                return;
            }
            self.bufs[level * w + u / 64] &= !(1u64 << (u % 64));
            remaining -= 1;
            let child_count = self.intersect_child(level, u);
            self.stack.push(u);
            self.enum_rec(level + 1, need - 1, child_count);
            self.stack.pop();
        }
    }
}

fn first_set(words: &[u64]) -> Option<usize> {
    for (t, &word) in words.iter().enumerate() {
        if word != 0 {
            return Some(t * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> SearchGraph<()> {
        SearchGraph::from_edge_fn(vec![(); n], |_, _| true)
    }

    fn cycle(n: usize) -> SearchGraph<()> {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SearchGraph::from_edges(vec![(); n], &edges)
    }

    fn petersen() -> SearchGraph<()> {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        SearchGraph::from_edges(vec![(); 10], &edges)
    }

    #[test]
    fn max_clique_of_complete_graphs() {
        for n in 1..=8 {
            let (size, witness) = complete(n).max_clique();
            assert_eq!(size, n);
            assert_eq!(witness, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn max_clique_of_edgeless_and_empty_graphs() {
        let edgeless = SearchGraph::from_edges(vec![(); 5], &[]);
        assert_eq!(edgeless.max_clique().0, 1);
        let empty = SearchGraph::from_edges(Vec::<()>::new(), &[]);
        assert_eq!(empty.max_clique(), (0, vec![]));
    }

    #[test]
    fn max_clique_of_a_five_cycle_is_an_edge() {
        let (size, witness) = cycle(5).max_clique();
        assert_eq!(size, 2);
        assert!(cycle(5).has_edge(witness[0], witness[1]));
    }

    #[test]
    fn enumerate_triangles_of_k4() {
        let cliques = complete(4).enumerate_cliques(3);
        assert_eq!(
            cliques,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
    }

    #[test]
    fn petersen_graph_is_triangle_free() {
        let g = petersen();
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.enumerate_cliques(3), Vec::<Vec<usize>>::new());
        assert_eq!(g.max_clique().0, 2);
        assert_eq!(g.enumerate_cliques(2).len(), 15);
    }

    #[test]
    fn enumerate_size_zero_and_one() {
        let g = cycle(4);
        assert_eq!(g.enumerate_cliques(0), vec![Vec::<usize>::new()]);
        assert_eq!(g.enumerate_cliques(1).len(), 4);
    }

    #[test]
    fn witnesses_are_cliques() {
        let g = petersen();
        let (size, witness) = g.max_clique();
        assert_eq!(witness.len(), size);
        for (i, &u) in witness.iter().enumerate() {
            for &v in &witness[i + 1..] {
                assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn text_format_round_trip() {
        let g = petersen();
        let mut buf = Vec::new();
        g.write_text(&mut buf).unwrap();
        let parsed = read_graph_text(buf.as_slice()).unwrap();
        assert_eq!(parsed.len(), g.len());
        assert_eq!(parsed.edge_count(), g.edge_count());
        for u in 0..g.len() {
            for v in 0..g.len() {
                assert_eq!(parsed.has_edge(u, v), g.has_edge(u, v));
            }
        }
        assert!(read_graph_text("e 1 2\n".as_bytes()).is_err());
        assert!(read_graph_text("p 3 1\ne 1 4\n".as_bytes()).is_err());
    }

    #[test]
    fn induced_subgraph_keeps_adjacency() {
        let g = petersen();
        let picks = [0usize, 1, 2, 5, 7];
        let sub = g.induced(&picks);
        assert_eq!(sub.len(), 5);
        for (i, &u) in picks.iter().enumerate() {
            for (j, &v) in picks.iter().enumerate() {
                if i != j {
                    assert_eq!(sub.has_edge(i, j), g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn degeneracy_order_is_a_permutation() {
        let g = petersen();
        let mut order = g.degeneracy_order();
        assert_eq!(order.len(), 10);
        order.sort_unstable();
        assert_eq!(order, (0..10).collect::<Vec<_>>());
    }

    /// Exhaustive reference: extends cliques vertex by vertex without any
    /// pruning.
    fn oracle_max_clique(g: &SearchGraph<()>) -> usize {
        fn rec(g: &SearchGraph<()>, cand: &[usize], size: usize, best: &mut usize) {
            *best = (*best).max(size);
            for (i, &u) in cand.iter().enumerate() {
                let next: Vec<usize> = cand[i + 1..]
                    .iter()
                    .copied()
                    .filter(|&v| g.has_edge(u, v))
                    .collect();
                rec(g, &next, size + 1, best);
            }
        }
        let all: Vec<usize> = (0..g.len()).collect();
        let mut best = 0;
        rec(g, &all, 0, &mut best);
        best
    }

    #[test]
    fn agrees_with_the_exhaustive_oracle_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..40 {
            let n = rng.gen_range(5..=18);
            let p = rng.gen_range(0.2..0.8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            let g = SearchGraph::from_edges(vec![(); n], &edges);
            let (size, _) = g.max_clique();
            assert_eq!(size, oracle_max_clique(&g));
            let cliques = g.enumerate_cliques(size);
            assert!(!cliques.is_empty());
            for clique in &cliques {
                for (i, &u) in clique.iter().enumerate() {
                    for &v in &clique[i + 1..] {
                        assert!(g.has_edge(u, v));
                    }
                }
            }
        }
    }
}
