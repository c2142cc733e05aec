//! Support graphs of symmetric GF(2) matrices: isomorphism testing and
//! graph6 export.
//!
//! Diagonal entries are kept as per-vertex loop flags rather than graph
//! loops. Isomorphisms must preserve them.

use std::collections::BTreeMap;

use crate::caps;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Simple graph on labelled vertices plus a loop flag per vertex.
///
/// Vertices are kept in increasing label order; adjacency is indexed by
/// position in that order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportGraph {
    vertices: Vec<usize>,
    adjacency: Vec<BitVector>,
    loops: BitVector,
}

impl SupportGraph {
    /// Support graph of a symmetric matrix whose rows are labelled by `labels`.
    pub fn from_matrix(labels: Vec<usize>, matrix: &BitMatrix) -> Self {
        let n = labels.len();
        assert_eq!(matrix.rows(), n);
        assert_eq!(matrix.cols(), n);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| labels[i]);
        let sorted = matrix.submatrix(&order, &order);
        let loops = BitVector::from_support(n, (0..n).filter(|&i| sorted.get(i, i)));
        let adjacency = (0..n)
            .map(|i| {
                let mut row = sorted.row(i).clone();
                row.set(i, false);
                row
            })
            .collect();
        Self {
            vertices: order.iter().map(|&i| labels[i]).collect(),
            adjacency,
            loops,
        }
    }

    /// Graph on vertices 0..n from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], loops: &[usize]) -> Self {
        let mut adjacency = vec![BitVector::zeros(n); n];
        for &(a, b) in edges {
            assert_ne!(a, b, "use loop flags for diagonal entries");
            adjacency[a].set(b, true);
            adjacency[b].set(a, true);
        }
        Self {
            vertices: (0..n).collect(),
            adjacency,
            loops: BitVector::from_support(n, loops.iter().copied()),
        }
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    /// Vertex labels, increasing.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BitVector::weight).sum::<usize>() / 2
    }

    pub fn loop_count(&self) -> usize {
        self.loops.weight()
    }

    fn position(&self, label: usize) -> Option<usize> {
        self.vertices.binary_search(&label).ok()
    }

    pub fn has_loop(&self, label: usize) -> bool {
        self.position(label).is_some_and(|p| self.loops.get(p))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => self.adjacency[i].get(j),
            _ => false,
        }
    }

    /// Edges as label pairs (a < b by position), in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.adjacency.iter().enumerate() {
            for j in row.support().filter(|&j| j > i) {
                out.push((self.vertices[i], self.vertices[j]));
            }
        }
        out
    }

    pub fn loop_flags(&self) -> &BitVector {
        &self.loops
    }

    /// Induced subgraph on the vertices whose labels are in `labels`.
    pub fn induced(&self, labels: &[usize]) -> SupportGraph {
        let mut positions: Vec<usize> = labels.iter().filter_map(|&l| self.position(l)).collect();
        positions.sort_unstable();
        positions.dedup();
        Self {
            vertices: positions.iter().map(|&p| self.vertices[p]).collect(),
            adjacency: positions
                .iter()
                .map(|&p| self.adjacency[p].select(&positions))
                .collect(),
            loops: self.loops.select(&positions),
        }
    }

    /// The same graph with every label l replaced by `perm[l]`.
    pub fn relabel(&self, perm: &[usize]) -> SupportGraph {
        let labels: Vec<usize> = self.vertices.iter().map(|&l| perm[l]).collect();
        let n = self.order();
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            *m.row_mut(i) = self.adjacency[i].clone();
            m.set(i, i, self.loops.get(i));
        }
        Self::from_matrix(labels, &m)
    }

    /// graph6 encoding of the simple part (loop flags are not representable).
    pub fn to_graph6(&self) -> String {
        let n = self.order();
        let mut out = String::new();
        encode_size(n, &mut out);
        let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for j in 1..n {
            for i in 0..j {
                bits.push(self.adjacency[i].get(j));
            }
        }
        for chunk in bits.chunks(6) {
            let mut value = 0u8;
            for (k, &b) in chunk.iter().enumerate() {
                if b {
                    value |= 1 << (5 - k);
                }
            }
            out.push(char::from(value + 63));
        }
        out
    }

    /// The graph6 line followed by an `L:` line carrying one 0/1 loop flag per vertex.
    pub fn export_graph6(&self) -> String {
        format!("{}\nL:{}", self.to_graph6(), self.loops)
    }
}

fn encode_size(n: usize, out: &mut String) {
    let push6 = |out: &mut String, value: usize, groups: u32| {
        for g in (0..groups).rev() {
            out.push(char::from(((value >> (6 * g)) & 0x3f) as u8 + 63));
        }
    };
    if n <= 62 {
        out.push(char::from(n as u8 + 63));
    } else if n <= 258_047 {
        out.push('~');
        push6(out, n, 3);
    } else {
        assert!(n <= 68_719_476_735, "graph6 supports at most 2^36 - 1 vertices");
        out.push_str("~~");
        push6(out, n, 6);
    }
}

/// Isomorphism of support graphs, preserving edges and loop flags.
pub fn graph_iso(g: &SupportGraph, h: &SupportGraph) -> Result<bool> {
    graph_iso_capped(g, h, caps::GRAPH_VERTICES)
}

/// Colour refinement on the disjoint union decides most pairs outright; up to
/// `cap` vertices an individualisation–refinement backtracking search settles
/// the rest. Beyond the cap an undecided refinement is reported as such.
pub fn graph_iso_capped(g: &SupportGraph, h: &SupportGraph, cap: usize) -> Result<bool> {
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() || g.loop_count() != h.loop_count() {
        return Ok(false);
    }
    let union = Union::new(g, h);
    let initial: Vec<u32> = (0..2 * n).map(|v| u32::from(union.has_loop(v))).collect();
    let Some(colors) = union.refine(initial) else {
        return Ok(false);
    };
    if union.is_discrete(&colors) {
        return Ok(union.check_bijection(&colors));
    }
    if n > cap {
        return Err(Error::Undecided { vertices: n, cap });
    }
    Ok(union.search(colors))
}

/// Two graphs of equal order as one vertex set 0..2n.
struct Union<'a> {
    n: usize,
    g: &'a SupportGraph,
    h: &'a SupportGraph,
}

impl<'a> Union<'a> {
    fn new(g: &'a SupportGraph, h: &'a SupportGraph) -> Self {
        Self { n: g.order(), g, h }
    }

    fn side(&self, v: usize) -> (&SupportGraph, usize) {
        if v < self.n {
            (self.g, v)
        } else {
            (self.h, v - self.n)
        }
    }

    fn has_loop(&self, v: usize) -> bool {
        let (graph, i) = self.side(v);
        graph.loops.get(i)
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let (graph, i) = self.side(v);
        let offset = if v < self.n { 0 } else { self.n };
        graph.adjacency[i].support().map(move |j| j + offset)
    }

    /// Refines to the coarsest equitable colouring. Returns `None` once the
    /// two sides have different colour histograms.
    fn refine(&self, mut colors: Vec<u32>) -> Option<Vec<u32>> {
        let mut classes = count_classes(&colors);
        loop {
            let signatures: Vec<(u32, Vec<u32>)> = (0..2 * self.n)
                .map(|v| {
                    let mut nb: Vec<u32> = self.neighbours(v).map(|u| colors[u]).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let mut ids: BTreeMap<&(u32, Vec<u32>), u32> = BTreeMap::new();
            for s in &signatures {
                ids.insert(s, 0);
            }
            for (i, id) in ids.values_mut().enumerate() {
                *id = i as u32;
            }
            colors = signatures.iter().map(|s| ids[s]).collect();
            if !self.balanced(&colors) {
                return None;
            }
            let next = count_classes(&colors);
            if next == classes {
                return Some(colors);
            }
            classes = next;
        }
    }

    fn balanced(&self, colors: &[u32]) -> bool {
        let mut hist: BTreeMap<u32, i64> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            *hist.entry(c).or_default() += if v < self.n { 1 } else { -1 };
        }
        hist.values().all(|&x| x == 0)
    }

    fn is_discrete(&self, colors: &[u32]) -> bool {
        count_classes(colors) == self.n
    }

    /// Under a discrete balanced colouring, the colour-preserving map is the only candidate.
    fn check_bijection(&self, colors: &[u32]) -> bool {
        let mut by_color = vec![0usize; 2 * self.n];
        for v in self.n..2 * self.n {
            by_color[colors[v] as usize] = v - self.n;
        }
        let map: Vec<usize> = (0..self.n).map(|v| by_color[colors[v] as usize]).collect();
        (0..self.n).all(|i| {
            self.g.loops.get(i) == self.h.loops.get(map[i])
                && (0..self.n).all(|j| self.g.adjacency[i].get(j) == self.h.adjacency[map[i]].get(map[j]))
        })
    }

    fn search(&self, colors: Vec<u32>) -> bool {
        if self.is_discrete(&colors) {
            return self.check_bijection(&colors);
        }
        // Branch on the smallest non-singleton cell.
        let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
        for &c in &colors[..self.n] {
            *sizes.entry(c).or_default() += 1;
        }
        let (&cell, _) = sizes
            .iter()
            .filter(|(_, &s)| s > 1)
            .min_by_key(|(_, &s)| s)
            .expect("not discrete");
        let v = (0..self.n).find(|&v| colors[v] == cell).expect("cell member");
        let fresh = colors.iter().max().map_or(0, |m| m + 1);
        for w in (self.n..2 * self.n).filter(|&w| colors[w] == cell) {
            let mut branch = colors.clone();
            branch[v] = fresh;
            branch[w] = fresh;
            if let Some(refined) = self.refine(branch) {
                if self.search(refined) {
                    return true;
                }
            }
        }
        false
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c: Vec<u32> = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}
