//! Perfect matchings in bipartite graphs and the two-order cover of a
//! 3-regular bipartite graph: every edge joins neighbours in one of two
//! vertex orders.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// Vertices are numbered left first: left `u` is `u`, right `v` is `left + v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    /// Edges are `(left index, right index)` pairs.
    pub fn new(left: usize, right: usize, edges: Vec<(usize, usize)>) -> Result<BipartiteGraph, Error> {
        if edges.iter().any(|&(u, v)| u >= left || v >= right) {
            return Err(Error::InvalidGraph("edge endpoint out of range"));
        }
        Ok(BipartiteGraph { left, right, edges })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn vertex_count(&self) -> usize {
        self.left + self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Endpoints of edge `e` as global vertex ids.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.edges[e];
        (u, self.left + v)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for e in 0..self.edges.len() {
            let (a, b) = self.endpoints(e);
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.left == self.right && self.degrees().iter().all(|&d| d == degree)
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }
}

/// Edge indices of a matching saturating every vertex, if one exists.
pub fn perfect_matching(g: &BipartiteGraph) -> Option<Vec<usize>> {
    matching_within(g, &(0..g.edges.len()).collect::<Vec<_>>())
}

/// Perfect matching using only the listed edges, by augmenting paths.
fn matching_within(g: &BipartiteGraph, allowed: &[usize]) -> Option<Vec<usize>> {
    if g.left != g.right {
        return None;
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.left];
    for &e in allowed {
        incident[g.edges[e].0].push(e);
    }
    // Edge currently matched at each right vertex.
    let mut matched: Vec<Option<usize>> = vec![None; g.right];
    for u in 0..g.left {
        let mut seen = vec![false; g.right];
        if !augment(g, &incident, u, &mut seen, &mut matched) {
            return None;
        }
    }
    let mut m: Vec<usize> = matched.into_iter().flatten().collect();
    m.sort_unstable();
    Some(m)
}

fn augment(g: &BipartiteGraph, incident: &[Vec<usize>], u: usize, seen: &mut [bool], matched: &mut [Option<usize>]) -> bool {
    for &e in &incident[u] {
        let v = g.edges[e].1;
        if seen[v] {
            continue;
        }
        seen[v] = true;
        let free = match matched[v] {
            None => true,
            Some(f) => augment(g, incident, g.edges[f].0, seen, matched),
        };
        if free {
            matched[v] = Some(e);
            return true;
        }
    }
    false
}

/// Splits the edges of a 3-regular bipartite graph into three perfect
/// matchings by repeatedly extracting one.
pub fn three_matching_decomposition(g: &BipartiteGraph) -> Result<[Vec<usize>; 3], Error> {
    if !g.is_regular(3) {
        return Err(Error::NotRegular);
    }
    let mut rest: Vec<usize> = (0..g.edges.len()).collect();
    let mut out: [Vec<usize>; 3] = Default::default();
    for slot in &mut out {
        let m = matching_within(g, &rest).ok_or(Error::InvalidGraph("regular bipartite graph without a perfect matching"))?;
        rest.retain(|e| m.binary_search(e).is_err());
        *slot = m;
    }
    Ok(out)
}

/// Two vertex orders with an edge partition; every edge of `edge_partition.i`
/// joins vertices adjacent in `order_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsecutiveOrders {
    pub order1: Vec<usize>,
    pub order2: Vec<usize>,
    pub edge_partition: (Vec<usize>, Vec<usize>),
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a.max(b)] = a.min(b);
    }
}

/// Builds the two orders: the first two matchings form disjoint cycles, the
/// third a set of single edges. One edge of each cycle moves to the third
/// set, joining two of its paths, so both sets end up as unions of paths.
pub fn consecutive_pair_orders(g: &BipartiteGraph) -> Result<ConsecutiveOrders, Error> {
    if !g.is_regular(3) {
        return Err(Error::NotRegular);
    }
    if g.has_parallel_edges() {
        return Err(Error::ParallelEdges);
    }
    let [m1, m2, m3] = three_matching_decomposition(g)?;
    let n = g.vertex_count();
    let mut in_cycles = vec![false; g.edges.len()];
    let mut cycle_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &e in m1.iter().chain(&m2) {
        in_cycles[e] = true;
        let (a, b) = g.endpoints(e);
        cycle_adj[a].push((b, e));
        cycle_adj[b].push((a, e));
    }
    let mut path_degree = vec![0usize; n];
    let mut paths = UnionFind((0..n).collect());
    for &e in &m3 {
        let (a, b) = g.endpoints(e);
        path_degree[a] += 1;
        path_degree[b] += 1;
        paths.union(a, b);
    }
    let mut moved = vec![false; g.edges.len()];
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let cycle = trace_cycle(&cycle_adj, start);
        for &v in &cycle {
            visited[v] = true;
            if path_degree[v] != 1 {
                return Err(Error::InvalidGraph("cycle vertex is not a path endpoint"));
            }
        }
        // Try the edge from the lowest vertex to its lower neighbour, then
        // the next edge along the cycle from that neighbour.
        let w = cycle[1];
        let next = cycle[2 % cycle.len()];
        let edge_between = |a: usize, b: usize| cycle_adj[a].iter().find(|&&(x, _)| x == b).map(|&(_, e)| e);
        let chosen = [(start, w), (w, next)]
            .into_iter()
            .find(|&(a, b)| paths.find(a) != paths.find(b))
            .ok_or(Error::InvalidGraph("no cycle edge joins two distinct paths"))?;
        let e = edge_between(chosen.0, chosen.1).expect("consecutive cycle vertices share an edge");
        moved[e] = true;
        path_degree[chosen.0] += 1;
        path_degree[chosen.1] += 1;
        paths.union(chosen.0, chosen.1);
        if path_degree[chosen.0] > 2 || path_degree[chosen.1] > 2 {
            return Err(Error::InvalidGraph("path set gained a branch"));
        }
    }
    let first: Vec<usize> = (0..g.edges.len()).filter(|&e| in_cycles[e] && !moved[e]).collect();
    let second: Vec<usize> = (0..g.edges.len()).filter(|&e| !in_cycles[e] || moved[e]).collect();
    Ok(ConsecutiveOrders {
        order1: linearize(g, &first)?,
        order2: linearize(g, &second)?,
        edge_partition: (first, second),
    })
}

/// Vertices of the cycle through `start`, beginning `start`, then its lower neighbour.
fn trace_cycle(adj: &[Vec<(usize, usize)>], start: usize) -> Vec<usize> {
    let first = adj[start].iter().map(|&(x, _)| x).min().expect("cycle vertex has neighbours");
    let mut cycle = vec![start, first];
    let (mut prev, mut cur) = (start, first);
    loop {
        let next = adj[cur].iter().map(|&(x, _)| x).find(|&x| x != prev).expect("cycle vertex has degree 2");
        if next == start {
            return cycle;
        }
        cycle.push(next);
        (prev, cur) = (cur, next);
    }
}

/// Concatenates the paths formed by `edges`, ordered by lowest vertex and
/// each walked from its lower endpoint.
fn linearize(g: &BipartiteGraph, edges: &[usize]) -> Result<Vec<usize>, Error> {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in edges {
        let (a, b) = g.endpoints(e);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut placed = vec![false; n];
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let mut component = vec![v];
        seen[v] = true;
        let mut i = 0;
        while i < component.len() {
            for &x in &adj[component[i]] {
                if !seen[x] {
                    seen[x] = true;
                    component.push(x);
                }
            }
            i += 1;
        }
        let start = component
            .iter()
            .copied()
            .filter(|&x| adj[x].len() < 2)
            .min()
            .ok_or(Error::InvalidGraph("edge set contains a cycle"))?;
        let before = order.len();
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            order.push(cur);
            placed[cur] = true;
            match adj[cur].iter().copied().find(|&x| x != prev && !placed[x]) {
                Some(next) => (prev, cur) = (cur, next),
                None => break,
            }
        }
        if order.len() - before != component.len() {
            return Err(Error::InvalidGraph("edge set is not a union of paths"));
        }
    }
    if order.len() != n {
        return Err(Error::InvalidGraph("edge set is not a union of paths"));
    }
    Ok(order)
}

/// Whether the orders are permutations, the partition covers every edge
/// exactly once and each edge joins neighbours in its order.
pub fn verify_consecutive_cover(g: &BipartiteGraph, co: &ConsecutiveOrders) -> bool {
    let n = g.vertex_count();
    let positions = |order: &[usize]| -> Option<Vec<usize>> {
        if order.len() != n {
            return None;
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return None;
            }
            pos[v] = i;
        }
        Some(pos)
    };
    let (Some(p1), Some(p2)) = (positions(&co.order1), positions(&co.order2)) else {
        return false;
    };
    let mut count = vec![0u8; g.edges.len()];
    for (part, pos) in [(&co.edge_partition.0, &p1), (&co.edge_partition.1, &p2)] {
        for &e in part {
            if e >= g.edges.len() {
                return false;
            }
            count[e] += 1;
            let (a, b) = g.endpoints(e);
            if pos[a].abs_diff(pos[b]) != 1 {
                return false;
            }
        }
    }
    count.iter().all(|&c| c == 1)
}
