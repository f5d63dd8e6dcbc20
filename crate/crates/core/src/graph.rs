//! Implicit Cayley graphs `P(m, n)` (flips only, directed) and `UP(m, n)`
//! (flips and flops, undirected), their copy structure, quotient graphs,
//! and exact girth.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{order_u128, EdgeLabel, GenPerm};
use crate::witness::CycleWitness;

pub const DEFAULT_VERTEX_CAP: u64 = 100_000_000;

/// Shape of a generalized pancake graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphParams {
    pub m: u32,
    pub n: usize,
    pub directed: bool,
}

impl GraphParams {
    /// Validates the shape against [`DEFAULT_VERTEX_CAP`].
    pub fn new(m: u32, n: usize, directed: bool) -> Result<Self> {
        Self::with_cap(m, n, directed, DEFAULT_VERTEX_CAP)
    }

    pub fn with_cap(m: u32, n: usize, directed: bool, cap: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        if n == 0 {
            return Err(Error::ZeroLength);
        }
        let count = order_u128(m, n).unwrap_or(u128::MAX);
        if count > cap as u128 {
            return Err(Error::TooManyVertices { count, cap });
        }
        Ok(GraphParams { m, n, directed })
    }

    pub fn undirected(m: u32, n: usize) -> Result<Self> {
        Self::new(m, n, false)
    }

    pub fn directed(m: u32, n: usize) -> Result<Self> {
        Self::new(m, n, true)
    }

    /// `m^n · n!`.
    pub fn vertex_count(&self) -> u64 {
        order_u128(self.m, self.n).expect("checked at construction") as u64
    }

    /// Number of embedded copies of the `n − 1` graph.
    pub fn copy_count(&self) -> usize {
        self.m as usize * self.n
    }

    pub fn identity(&self) -> GenPerm {
        GenPerm::identity(self.m, self.n).expect("validated params")
    }

    /// Generators in neighbor order: ascending index, flip before flop.
    ///
    /// Flops are dropped when `m <= 2` (they coincide with flips), and the
    /// index-1 reversal is dropped when `m = 1` (it is a self-loop).
    pub fn labels(&self) -> Vec<EdgeLabel> {
        let mut out = Vec::with_capacity(2 * self.n);
        for i in 1..=self.n {
            if self.m == 1 && i == 1 {
                continue;
            }
            out.push(EdgeLabel::flip(i));
            if !self.directed && self.m > 2 {
                out.push(EdgeLabel::flop(i));
            }
        }
        out
    }

    /// Known girth of the undirected graph: `min{m, 6}` for `m >= 3, n >= 2`,
    /// 6 for the pancake graph (`m = 1, n >= 3`), 8 for the burnt pancake
    /// graph (`m = 2, n >= 2`).
    pub fn predicted_girth(&self) -> Option<usize> {
        if self.directed {
            return None;
        }
        match (self.m, self.n) {
            (1, n) if n >= 3 => Some(6),
            (2, n) if n >= 2 => Some(8),
            (m, n) if m >= 3 && n >= 2 => Some((m as usize).min(6)),
            _ => None,
        }
    }

    pub(crate) fn check_compatible(&self, p: &GenPerm) -> Result<()> {
        if p.m() != self.m || p.n() != self.n {
            return Err(Error::ShapeMismatch {
                m1: self.m,
                n1: self.n,
                m2: p.m(),
                n2: p.n(),
            });
        }
        Ok(())
    }
}

/// Neighbors of `p`, in [`GraphParams::labels`] order.
pub fn neighbors(params: &GraphParams, p: &GenPerm) -> Result<Vec<(EdgeLabel, GenPerm)>> {
    params.check_compatible(p)?;
    params
        .labels()
        .into_iter()
        .map(|label| Ok((label, p.apply(label)?)))
        .collect()
}

/// Class of `∼_n`: the last signed symbol, shared by every vertex of a copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CopyId {
    pub symbol: u32,
    pub sign: u32,
}

impl CopyId {
    fn dense(self, m: u32) -> usize {
        (self.symbol as usize - 1) * m as usize + self.sign as usize
    }
}

impl std::fmt::Display for CopyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^{}", self.symbol, self.sign)
    }
}

pub fn copy_id(p: &GenPerm) -> Result<CopyId> {
    if p.n() < 2 {
        return Err(Error::NeedsTwoSymbols);
    }
    let (symbol, sign) = p.entry(p.n() - 1);
    Ok(CopyId { symbol, sign })
}

/// The quotient `UP(m, n) / UP(m, n − 1)` as a simple graph on `mn` copies.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    m: u32,
    n: usize,
    adjacency: Vec<Vec<bool>>,
}

impl QuotientGraph {
    pub fn vertices(&self) -> Vec<CopyId> {
        (1..=self.n as u32)
            .flat_map(|symbol| (0..self.m).map(move |sign| CopyId { symbol, sign }))
            .collect()
    }

    pub fn has_edge(&self, a: CopyId, b: CopyId) -> bool {
        self.adjacency[a.dense(self.m)][b.dense(self.m)]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency
            .iter()
            .map(|row| row.iter().filter(|&&x| x).count())
            .sum::<usize>()
            / 2
    }

    /// True iff two copies are adjacent exactly when their symbols differ.
    pub fn is_complete_multipartite(&self) -> bool {
        let vs = self.vertices();
        vs.iter().all(|&a| {
            vs.iter()
                .all(|&b| self.has_edge(a, b) == (a.symbol != b.symbol))
        })
    }

    /// Girth by BFS from every vertex.
    pub fn girth(&self) -> Option<usize> {
        let v = self.adjacency.len();
        let mut best: Option<usize> = None;
        for root in 0..v {
            let mut dist = vec![usize::MAX; v];
            let mut parent = vec![usize::MAX; v];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for y in (0..v).filter(|&y| self.adjacency[x][y]) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    pub fn to_dot(&self) -> String {
        let vs = self.vertices();
        let mut out = String::from("graph quotient {\n");
        for (i, a) in vs.iter().enumerate() {
            let _ = writeln!(out, "  q{i} [label=\"{a}\"];");
        }
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(*a, *b) {
                    let _ = writeln!(out, "  q{i} -- q{j};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the quotient by copies.
///
/// The copy reached by an index-`n` move depends only on the first signed
/// symbol of the source, so one representative per (class, first entry) pair
/// covers every inter-copy edge.
pub fn quotient_graph(params: &GraphParams) -> Result<QuotientGraph> {
    if params.directed {
        return Err(Error::NeedsUndirected);
    }
    let (m, n) = (params.m, params.n);
    if n < 2 {
        return Err(Error::NeedsTwoSymbols);
    }
    let size = m as usize * n;
    let mut adjacency = vec![vec![false; size]; size];
    for last in 1..=n as u32 {
        for last_sign in 0..m {
            for first in (1..=n as u32).filter(|&b| b != last) {
                for first_sign in 0..m {
                    let mut symbols = vec![first];
                    symbols.extend((1..=n as u32).filter(|&s| s != first && s != last));
                    symbols.push(last);
                    let mut signs = vec![0; n];
                    signs[0] = first_sign;
                    signs[n - 1] = last_sign;
                    let rep = GenPerm::new(m, symbols, signs)?;
                    let from = copy_id(&rep)?.dense(m);
                    for label in [EdgeLabel::flip(n), EdgeLabel::flop(n)] {
                        let to = copy_id(&rep.apply(label)?)?.dense(m);
                        adjacency[from][to] = true;
                        adjacency[to][from] = true;
                    }
                }
            }
        }
    }
    Ok(QuotientGraph { m, n, adjacency })
}

/// Contracts maximal within-copy runs of a verified cycle, returning the
/// closed walk of copies it passes through (the return to the first copy is
/// implicit).
///
/// The walk is a simple cycle of the quotient whenever the cycle enters each
/// copy at most once, as merged cycles built on the base cycle do.
pub fn quotient_of_cycle(c: &CycleWitness) -> Result<Vec<CopyId>> {
    c.verify()?;
    if c.params.n < 2 {
        return Err(Error::NeedsTwoSymbols);
    }
    let ids = c
        .vertices()?
        .iter()
        .map(copy_id)
        .collect::<Result<Vec<_>>>()?;
    let len = ids.len();
    let Some(boundary) = (0..len).find(|&k| ids[k] != ids[(k + len - 1) % len]) else {
        return Err(Error::CycleInsideCopy);
    };
    let mut walk: Vec<CopyId> = Vec::new();
    for k in 0..len {
        let id = ids[(boundary + k) % len];
        if walk.last() != Some(&id) {
            walk.push(id);
        }
    }
    Ok(walk)
}

/// Exact girth: BFS after deleting each edge at the identity.
///
/// Returns `None` for graphs with no cycle of length at least 3.
pub fn girth(params: &GraphParams) -> Result<Option<usize>> {
    let e = params.identity();
    let labels = params.labels();
    let v = params.vertex_count() as usize;
    let e_rank = e.rank() as usize;
    let mut best: Option<usize> = None;
    let mut dist = vec![u32::MAX; v];
    let mut touched: Vec<usize> = Vec::new();

    for &first in &labels {
        let w = e.apply(first)?;
        let w_rank = w.rank() as usize;
        if w_rank == e_rank {
            continue;
        }
        // Directed: shortest path w -> e of length >= 2.
        // Undirected: shortest path e -> w avoiding the edge {e, w}.
        let (src, src_rank, dst_rank) = if params.directed {
            (w.clone(), w_rank, e_rank)
        } else {
            (e.clone(), e_rank, w_rank)
        };
        for &t in &touched {
            dist[t] = u32::MAX;
        }
        touched.clear();
        dist[src_rank] = 0;
        touched.push(src_rank);
        let mut queue = VecDeque::from([src]);
        'bfs: while let Some(x) = queue.pop_front() {
            let xr = x.rank() as usize;
            let d = dist[xr];
            if let Some(b) = best {
                if d as usize + 2 >= b {
                    break;
                }
            }
            for &label in &labels {
                let y = x.apply(label)?;
                let yr = y.rank() as usize;
                if d == 0 && ((xr == src_rank && yr == dst_rank) || yr == xr) {
                    continue;
                }
                if dist[yr] != u32::MAX {
                    continue;
                }
                dist[yr] = d + 1;
                touched.push(yr);
                if yr == dst_rank {
                    let len = d as usize + 2;
                    best = Some(best.map_or(len, |b| b.min(len)));
                    break 'bfs;
                }
                queue.push_back(y);
            }
        }
    }
    Ok(best)
}

/// Graphviz rendering with vertex labels in superscript notation.
pub fn to_dot(params: &GraphParams, max_vertices: u64) -> Result<String> {
    let v = params.vertex_count();
    if v > max_vertices {
        return Err(Error::TooManyVertices {
            count: v as u128,
            cap: max_vertices,
        });
    }
    let (kind, arrow) = if params.directed {
        ("digraph", "->")
    } else {
        ("graph", "--")
    };
    let mut out = String::new();
    let _ = writeln!(out, "{kind} \"P({},{})\" {{", params.m, params.n);
    for k in 0..v {
        let p = GenPerm::unrank(params.m, params.n, k)?;
        let _ = writeln!(out, "  v{k} [label=\"{p}\"];");
    }
    let mut seen = BTreeSet::new();
    for k in 0..v {
        let p = GenPerm::unrank(params.m, params.n, k)?;
        for label in params.labels().into_iter().filter(|l| l.is_flip()) {
            let t = p.apply(label)?.rank();
            if t == k {
                continue;
            }
            let key = if params.directed {
                (k, t, label.index)
            } else {
                (k.min(t), k.max(t), label.index)
            };
            if seen.insert(key) {
                let _ = writeln!(out, "  v{k} {arrow} v{t} [label=\"{}\"];", label.dot_name());
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Dense adjacency over vertex ranks, used by the exhaustive searches.
#[derive(Debug, Clone)]
pub struct DenseGraph {
    params: GraphParams,
    labels: Vec<EdgeLabel>,
    out: Vec<u32>,
    inn: Vec<u32>,
}

impl DenseGraph {
    pub fn build(params: &GraphParams) -> Result<Self> {
        let labels = params.labels();
        let v = params.vertex_count() as usize;
        let d = labels.len();
        let mut out = Vec::with_capacity(v * d);
        let mut inn = Vec::with_capacity(v * d);
        for k in 0..v as u64 {
            let p = GenPerm::unrank(params.m, params.n, k)?;
            for &label in &labels {
                out.push(p.apply(label)?.rank() as u32);
                inn.push(p.apply(label.inverse())?.rank() as u32);
            }
        }
        Ok(DenseGraph {
            params: *params,
            labels,
            out,
            inn,
        })
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len() / self.labels.len().max(1)
    }

    pub fn degree(&self) -> usize {
        self.labels.len()
    }

    /// Out-neighbors of `v`, aligned with [`DenseGraph::labels`].
    #[inline]
    pub fn out(&self, v: u32) -> &[u32] {
        let d = self.labels.len();
        &self.out[v as usize * d..(v as usize + 1) * d]
    }

    /// In-neighbors of `v` (equal to out-neighbors when undirected).
    #[inline]
    pub fn inn(&self, v: u32) -> &[u32] {
        let d = self.labels.len();
        &self.inn[v as usize * d..(v as usize + 1) * d]
    }

    /// Two-colorability of the underlying undirected graph. All cycles of a
    /// bipartite graph have even length.
    pub fn is_bipartite(&self) -> bool {
        let v = self.vertex_count();
        let mut color = vec![u8::MAX; v];
        for root in 0..v {
            if color[root] != u8::MAX {
                continue;
            }
            color[root] = 0;
            let mut queue = VecDeque::from([root as u32]);
            while let Some(x) = queue.pop_front() {
                let c = color[x as usize];
                for &y in self.out(x).iter().chain(self.inn(x)) {
                    if y == x {
                        continue;
                    }
                    match color[y as usize] {
                        u8::MAX => {
                            color[y as usize] = 1 - c;
                            queue.push_back(y);
                        }
                        cy if cy == c => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}
