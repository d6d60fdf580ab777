//! Maximum clique by branch and bound with greedy-coloring bounds.

use fixedbitset::FixedBitSet;

#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueResult {
    pub clique: Vec<usize>,
    pub greedy: Vec<usize>,
    pub exact: bool,
    pub nodes: u64,
}

/// Repeatedly takes the candidate with most neighbours among the remaining candidates.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut cand = FixedBitSet::with_capacity(g.len());
    cand.insert_range(..);
    let mut out = Vec::new();
    while let Some(v) = cand
        .ones()
        .max_by_key(|&v| (g.adj[v].intersection(&cand).count(), std::cmp::Reverse(v)))
    {
        out.push(v);
        cand.intersect_with(&g.adj[v]);
    }
    out.sort_unstable();
    out
}

/// Exact maximum clique unless `node_budget` runs out, in which case the best
/// clique found so far is returned with `exact = false`.
pub fn max_clique(g: &Graph, node_budget: u64) -> CliqueResult {
    let greedy = greedy_clique(g);
    let mut search = Search {
        g,
        best: greedy.clone(),
        current: Vec::new(),
        nodes: 0,
        budget: node_budget,
        aborted: false,
    };
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    search.expand(order);
    let mut clique = search.best;
    clique.sort_unstable();
    CliqueResult {
        clique,
        greedy,
        exact: !search.aborted,
        nodes: search.nodes,
    }
}

struct Search<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Search<'_> {
    fn expand(&mut self, cand: Vec<usize>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let (order, colors) = self.color(&cand);
        for idx in (0..order.len()).rev() {
            if self.current.len() + colors[idx] <= self.best.len() || self.aborted {
                return;
            }
            let v = order[idx];
            self.current.push(v);
            let next: Vec<usize> = order[..idx]
                .iter()
                .copied()
                .filter(|&u| self.g.has_edge(v, u))
                .collect();
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
        }
    }

    // Greedy sequential coloring; vertices come back sorted by color, with the
    // color count so far as an upper bound on any clique among them.
    fn color(&self, cand: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            match classes
                .iter_mut()
                .find(|c| c.iter().all(|&u| !self.g.has_edge(u, v)))
            {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(cand.len());
        let mut colors = Vec::with_capacity(cand.len());
        for (i, c) in classes.into_iter().enumerate() {
            for v in c {
                order.push(v);
                colors.push(i + 1);
            }
        }
        (order, colors)
    }
}
