//! Hamming graphs `K_r □ K_s □ K_n` and their independence polynomials.
//!
//! The independent sets of `H(r, s, n)` are exactly the orthogonal arrays of
//! the `r x s` partial Latin rectangles on `n` symbols, so the coefficients
//! of the independence polynomial give the size distribution of those
//! rectangles.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::{Error, Result, SizeDistribution};

/// Largest vertex count supported by the bitset representation.
pub const MAX_VERTICES: usize = 128;

/// A simple undirected graph on at most 128 vertices, adjacency as bitsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u128>,
}

impl Graph {
    pub fn new(order: usize) -> Result<Self> {
        if order > MAX_VERTICES {
            return Err(Error::Unsupported(format!(
                "graphs with {order} vertices (at most {MAX_VERTICES})"
            )));
        }
        Ok(Graph {
            adj: vec![0; order],
        })
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize) -> u128 {
        self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| {
            (u + 1..self.order())
                .filter(move |&v| self.is_adjacent(u, v))
                .map(move |v| (u, v))
        })
    }

    fn all_vertices(&self) -> u128 {
        if self.order() == MAX_VERTICES {
            u128::MAX
        } else {
            (1u128 << self.order()) - 1
        }
    }

    /// Whether no two vertices of `set` are adjacent.
    pub fn is_independent(&self, set: u128) -> bool {
        bits(set).all(|v| self.adj[v] & set == 0)
    }
}

/// Options for the independence-polynomial recursion.
#[derive(Debug, Clone, Copy)]
pub struct IndependenceOptions {
    /// Maximum number of memoized residual subgraphs; beyond it the
    /// recursion continues without caching.
    pub memo_budget: usize,
    /// Drop every coefficient above this size.
    pub max_size: Option<usize>,
    /// Abort with [`Error::Capacity`] after this many recursion nodes.
    pub node_limit: Option<u64>,
}

impl Default for IndependenceOptions {
    fn default() -> Self {
        IndependenceOptions {
            memo_budget: 1 << 22,
            max_size: None,
            node_limit: None,
        }
    }
}

/// Coefficients of `I(G; t) = sum_m i_m(G) t^m`, where `i_m` counts the
/// independent sets of size `m`.
///
/// Uses `I(G) = I(G - v) + t I(G - N[v])` branching on a maximum-degree
/// vertex, factors disconnected residual graphs, and memoizes residual
/// vertex sets. Coefficients fit in `u128` because every one of them is at
/// most a binomial coefficient `C(128, m)`.
pub fn independence_polynomial(
    graph: &Graph,
    options: &IndependenceOptions,
) -> Result<SizeDistribution> {
    let mut engine = Engine {
        adj: &graph.adj,
        memo: HashMap::new(),
        options,
        cap: options.max_size.map_or(MAX_VERTICES + 1, |m| m + 1),
        nodes: 0,
    };
    let budget = engine.cap - 1;
    let coeffs = engine.solve(graph.all_vertices(), budget)?;
    Ok(SizeDistribution::from_u128s(&coeffs))
}

/// Independence polynomial of the subgraph induced by `set`, without memo
/// or capacity bookkeeping. Suited to many tiny graphs.
pub(crate) fn independence_coefficients(adj: &[u128], set: u128) -> Vec<u128> {
    if set == 0 {
        return vec![1];
    }
    let v = set.trailing_zeros() as usize;
    let mut a = independence_coefficients(adj, set & !(1 << v));
    let b = if adj[v] & set == 0 {
        a.clone()
    } else {
        independence_coefficients(adj, set & !(adj[v] | 1 << v))
    };
    if a.len() < b.len() + 1 {
        a.resize(b.len() + 1, 0);
    }
    for (m, c) in b.into_iter().enumerate() {
        a[m + 1] += c;
    }
    a
}

struct Engine<'a> {
    adj: &'a [u128],
    memo: HashMap<(u128, usize), Vec<u128>>,
    options: &'a IndependenceOptions,
    cap: usize,
    nodes: u64,
}

impl Engine<'_> {
    /// Coefficients up to size `budget` of the subgraph induced by `set`.
    fn solve(&mut self, set: u128, budget: usize) -> Result<Vec<u128>> {
        if set == 0 || budget == 0 {
            return Ok(vec![1]);
        }
        // without a size cap the budget never binds; keep one key per set
        let budget = budget.min(set.count_ones() as usize);
        if let Some(hit) = self.memo.get(&(set, budget)) {
            return Ok(hit.clone());
        }
        self.nodes += 1;
        if let Some(limit) = self.options.node_limit {
            if self.nodes > limit {
                return Err(Error::Capacity {
                    what: "independence polynomial recursion".into(),
                    subproblems: self.nodes,
                });
            }
        }

        let component = self.component_of(set);
        let result = if component != set {
            let a = self.solve(component, budget)?;
            let b = self.solve(set & !component, budget)?;
            self.multiply(&a, &b, budget + 1)
        } else {
            let (v, degree) = bits(set)
                .map(|v| (v, (self.adj[v] & set).count_ones()))
                .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if degree == 0 {
                // a single isolated vertex (the set is connected)
                vec![1, 1]
            } else {
                let mut a = self.solve(set & !(1 << v), budget)?;
                let b = self.solve(set & !(self.adj[v] | 1 << v), budget - 1)?;
                let len = a.len().max(b.len() + 1).min(budget + 1);
                a.resize(len, 0);
                for (m, c) in b.into_iter().enumerate().take(len.saturating_sub(1)) {
                    a[m + 1] += c;
                }
                a
            }
        };
        if self.memo.len() < self.options.memo_budget {
            self.memo.insert((set, budget), result.clone());
        }
        Ok(result)
    }

    fn component_of(&self, set: u128) -> u128 {
        let mut comp = 1u128 << set.trailing_zeros();
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & set & !comp;
            comp |= frontier;
        }
        comp
    }

    fn multiply(&self, a: &[u128], b: &[u128], cap: usize) -> Vec<u128> {
        let len = (a.len() + b.len() - 1).min(cap);
        let mut out = vec![0u128; len];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }
}

pub(crate) fn bits(mut set: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(v)
        }
    })
}

/// The Hamming graph `K_r □ K_s □ K_n` on labels `(i, j, k)`.
#[derive(Debug, Clone)]
pub struct HammingGraph {
    pub rows: usize,
    pub cols: usize,
    pub symbols: usize,
    graph: Graph,
}

impl HammingGraph {
    pub fn build(rows: usize, cols: usize, symbols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || symbols == 0 {
            return Err(Error::ZeroDimension("Hamming graph factor"));
        }
        let order = rows
            .checked_mul(cols)
            .and_then(|x| x.checked_mul(symbols))
            .filter(|&x| x <= MAX_VERTICES)
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "H({rows},{cols},{symbols}) has more than {MAX_VERTICES} vertices"
                ))
            })?;
        let mut graph = Graph::new(order)?;
        let mut h = HammingGraph {
            rows,
            cols,
            symbols,
            graph: Graph::new(0)?,
        };
        for u in 0..order {
            for v in u + 1..order {
                let (a, b) = (h.label(u), h.label(v));
                let differing = (a.0 != b.0) as u8 + (a.1 != b.1) as u8 + (a.2 != b.2) as u8;
                if differing == 1 {
                    graph.add_edge(u, v);
                }
            }
        }
        h.graph = graph;
        Ok(h)
    }

    /// Vertex index of `(row, col, symbol)`; all 0-based.
    pub fn vertex(&self, row: usize, col: usize, symbol: usize) -> usize {
        (row * self.cols + col) * self.symbols + symbol
    }

    pub fn label(&self, v: usize) -> (usize, usize, usize) {
        (
            v / (self.cols * self.symbols),
            v / self.symbols % self.cols,
            v % self.symbols,
        )
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn independence_polynomial(
        &self,
        options: &IndependenceOptions,
    ) -> Result<SizeDistribution> {
        independence_polynomial(&self.graph, options)
    }
}

/// Number of `r x s` partial Latin rectangles on `n` symbols of size
/// `m <= 2`, in closed form.
pub fn closed_form_count(rows: usize, cols: usize, symbols: usize, m: usize) -> Result<BigUint> {
    let v = (rows * cols * symbols) as u128;
    match m {
        0 => Ok(BigUint::from(1u32)),
        1 => Ok(BigUint::from(v)),
        2 => Ok(BigUint::from(
            v * (v + 2 - (rows + cols + symbols) as u128) / 2,
        )),
        _ => Err(Error::Unsupported(format!(
            "closed form for size {m} (only sizes 0, 1, 2)"
        ))),
    }
}
