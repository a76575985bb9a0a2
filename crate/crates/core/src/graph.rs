//! Mutual-information weighted graphs and tree-factorized distributions.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::distribution::{conditional, marginal, JointDistribution, Schema};
use crate::error::{Error, Result};
use crate::lattice::mutual_information;
use crate::math::abs;
use crate::metric::uniform_distance;
use crate::subset::Subset;

/// Pairwise MI below this is treated as exactly zero.
pub const MI_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    /// Mutual information in bits.
    pub weight: f64,
}

/// Undirected weighted graph over the variables of a schema, optionally
/// carrying a rooted-forest orientation (`parents[v]` is `v`'s parent).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    schema: Schema,
    edges: Vec<Edge>,
    parents: Option<Vec<Option<usize>>>,
}

impl WeightedGraph {
    /// Validates and canonicalizes: endpoints are ordered `i < j` and edges
    /// sorted by pair.
    pub fn new(
        schema: Schema,
        edges: Vec<Edge>,
        parents: Option<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let n = schema.len();
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| Edge {
                i: e.i.min(e.j),
                j: e.i.max(e.j),
                weight: e.weight,
            })
            .collect();
        for e in &edges {
            if e.j >= n {
                return Err(Error::IndexOutOfRange { index: e.j, len: n });
            }
            if e.i == e.j {
                return Err(Error::InvalidGraph("self-loop"));
            }
            if !(e.weight >= 0.0 && e.weight.is_finite()) {
                return Err(Error::InvalidGraph("edge weights must be finite and non-negative"));
            }
        }
        edges.sort_by_key(|e| (e.i, e.j));
        if edges.windows(2).any(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err(Error::InvalidGraph("duplicate edge"));
        }
        if let Some(p) = &parents {
            check_forest(p, n)?;
        }
        Ok(WeightedGraph {
            schema,
            edges,
            parents,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn node_names(&self) -> impl Iterator<Item = &str> {
        self.schema.variables().iter().map(|v| v.name.as_str())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn parents(&self) -> Option<&[Option<usize>]> {
        self.parents.as_deref()
    }

    /// Weight of the edge `{i, j}`, zero when absent.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (i.min(j), i.max(j));
        self.edges
            .binary_search_by_key(&(a, b), |e| (e.i, e.j))
            .map(|k| self.edges[k].weight)
            .unwrap_or(0.0)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

fn check_forest(parents: &[Option<usize>], n: usize) -> Result<()> {
    if parents.len() != n {
        return Err(Error::InvalidGraph("parent map must cover every node"));
    }
    for (v, p) in parents.iter().enumerate() {
        let mut steps = 0;
        let mut cur = *p;
        while let Some(u) = cur {
            if u >= n {
                return Err(Error::IndexOutOfRange { index: u, len: n });
            }
            if u == v || steps > n {
                return Err(Error::InvalidGraph("parent map contains a cycle"));
            }
            steps += 1;
            cur = parents[u];
        }
    }
    Ok(())
}

/// Edges `(i, j)` for every pair with MI above `threshold`, weighted by MI.
pub fn mi_weighted_graph(dist: &JointDistribution, threshold: f64) -> Result<WeightedGraph> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::Domain("threshold must be non-negative"));
    }
    let n = dist.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut w = mutual_information(dist, i, j)?;
            if w < MI_ZERO_TOL {
                w = 0.0;
            }
            if w > threshold {
                edges.push(Edge { i, j, weight: w });
            }
        }
    }
    WeightedGraph::new(dist.schema().clone(), edges, None)
}

/// Maximum-weight spanning forest (Kruskal). Ties go to the lexicographically
/// smaller pair; each component is rooted at its lowest-index node.
pub fn chowliu_tree(graph: &WeightedGraph) -> Result<WeightedGraph> {
    let n = graph.schema.len();
    let mut order: Vec<Edge> = graph.edges.clone();
    order.sort_by(|a, b| b.weight.total_cmp(&a.weight).then((a.i, a.j).cmp(&(b.i, b.j))));

    let mut sets = DisjointSets::new(n);
    let mut kept = Vec::new();
    for e in order {
        if sets.union(e.i, e.j) {
            kept.push(e);
        }
    }

    let mut adjacency = vec![Vec::new(); n];
    for e in &kept {
        adjacency[e.i].push(e.j);
        adjacency[e.j].push(e.i);
    }
    for a in &mut adjacency {
        a.sort_unstable();
    }
    let mut parents = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    parents[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
    }
    WeightedGraph::new(graph.schema.clone(), kept, Some(parents))
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            core::cmp::Ordering::Less => self.parent[ra] = rb,
            core::cmp::Ordering::Greater => self.parent[rb] = ra,
            core::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphDistribution {
    pub distribution: JointDistribution,
    /// States (row-major index) whose factor product needed a conditional on
    /// a zero-probability parent level; they were assigned probability 0.
    pub undefined_states: Vec<usize>,
}

/// `∏_roots P(x_r) ∏_{v≠root} P(x_v | x_parent(v))` with factors taken from
/// `source`.
pub fn graph_distribution(tree: &WeightedGraph, source: &JointDistribution) -> Result<GraphDistribution> {
    if tree.schema != *source.schema() {
        return Err(Error::NodeMismatch);
    }
    let parents = tree
        .parents
        .as_ref()
        .ok_or(Error::InvalidGraph("graph has no parent map"))?;
    let schema = source.schema();
    let n = schema.len();

    enum Factor {
        Root(Vec<f64>),
        Child(crate::distribution::ConditionalTable, usize),
    }
    let factors: Vec<Factor> = (0..n)
        .map(|v| match parents[v] {
            None => marginal(source, Subset::singleton(v)).map(|m| Factor::Root(m.probs().to_vec())),
            Some(p) => conditional(source, Subset::singleton(v), Subset::singleton(p))
                .map(|c| Factor::Child(c, p)),
        })
        .collect::<Result<_>>()?;

    let mut probs = Vec::with_capacity(schema.state_count());
    let mut undefined_states = Vec::new();
    for s in 0..schema.state_count() {
        let state = schema.decode(s);
        let mut acc = 1.0;
        let mut undefined = false;
        for (v, f) in factors.iter().enumerate() {
            match f {
                Factor::Root(m) => acc *= m[state[v]],
                Factor::Child(c, p) => match c.get(state[*p], state[v]) {
                    Some(x) => acc *= x,
                    None => undefined = true,
                },
            }
        }
        if undefined {
            undefined_states.push(s);
            acc = 0.0;
        }
        probs.push(acc);
    }
    Ok(GraphDistribution {
        distribution: JointDistribution::new(schema.clone(), probs)?,
        undefined_states,
    })
}

fn same_nodes(a: &WeightedGraph, b: &WeightedGraph) -> Result<()> {
    if a.schema != b.schema {
        return Err(Error::NodeMismatch);
    }
    Ok(())
}

/// `(1/N) |Σ_{i<j} (w_R(i,j) − w_S(i,j))|`, absent edges weighing zero.
pub fn graph_distance_mi(g_r: &WeightedGraph, g_s: &WeightedGraph) -> Result<f64> {
    same_nodes(g_r, g_s)?;
    let signed: f64 = edge_contributions(g_r, g_s).iter().map(|c| c.difference).sum();
    Ok(abs(signed) / g_r.schema.state_count() as f64)
}

/// Uniform-reference distance between two distributions, bits.
pub fn graph_distance_direct(d_r: &JointDistribution, d_s: &JointDistribution) -> Result<f64> {
    Ok(uniform_distance(d_r, d_s)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeContribution {
    pub i: usize,
    pub j: usize,
    pub weight_r: f64,
    pub weight_s: f64,
    /// `weight_r − weight_s`.
    pub difference: f64,
}

fn edge_contributions(g_r: &WeightedGraph, g_s: &WeightedGraph) -> Vec<EdgeContribution> {
    let mut pairs: Vec<(usize, usize)> = g_r
        .edges
        .iter()
        .chain(&g_s.edges)
        .map(|e| (e.i, e.j))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
        .into_iter()
        .map(|(i, j)| {
            let (wr, ws) = (g_r.weight(i, j), g_s.weight(i, j));
            EdgeContribution {
                i,
                j,
                weight_r: wr,
                weight_s: ws,
                difference: wr - ws,
            }
        })
        .collect()
}

/// Both graph distances side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDistanceReport {
    pub mi_form: f64,
    /// `None` when the graphs come without distributions.
    pub direct_form: Option<f64>,
    pub contributions: Vec<EdgeContribution>,
}

impl GraphDistanceReport {
    /// `direct_form − mi_form` when both are available.
    pub fn gap(&self) -> Option<f64> {
        self.direct_form.map(|d| d - self.mi_form)
    }
}

pub fn graph_distance_report(
    g_r: &WeightedGraph,
    g_s: &WeightedGraph,
    distributions: Option<(&JointDistribution, &JointDistribution)>,
) -> Result<GraphDistanceReport> {
    let mi_form = graph_distance_mi(g_r, g_s)?;
    let direct_form = distributions
        .map(|(a, b)| graph_distance_direct(a, b))
        .transpose()?;
    Ok(GraphDistanceReport {
        mi_form,
        direct_form,
        contributions: edge_contributions(g_r, g_s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::product;

    fn binary(n: usize) -> Schema {
        Schema::anonymous(&vec![2; n]).unwrap()
    }

    fn edge(i: usize, j: usize, weight: f64) -> Edge {
        Edge { i, j, weight }
    }

    fn chain() -> JointDistribution {
        // X ~ (0.6, 0.4); Y copies X w.p. 0.9; Z copies Y w.p. 0.8.
        let px = [0.6, 0.4];
        let flip = |keep: f64, a: usize, b: usize| if a == b { keep } else { 1.0 - keep };
        let mut p = vec![0.0; 8];
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    p[(x << 2) | (y << 1) | z] = px[x] * flip(0.9, x, y) * flip(0.8, y, z);
                }
            }
        }
        JointDistribution::new(binary(3), p).unwrap()
    }

    #[test]
    fn mi_graph_examples() {
        let a = JointDistribution::new(binary(1), vec![0.3, 0.7]).unwrap();
        let b = JointDistribution::new(Schema::from_pairs([("b", 2)]).unwrap(), vec![0.5, 0.5]).unwrap();
        let g = mi_weighted_graph(&product(&[a, b]).unwrap(), 0.0).unwrap();
        assert!(g.edges().is_empty());

        let mut p = vec![0.0; 8];
        for idx in [0b000, 0b011, 0b101, 0b110] {
            p[idx] = 0.25;
        }
        let xor = JointDistribution::new(binary(3), p).unwrap();
        assert!(mi_weighted_graph(&xor, 0.0).unwrap().edges().is_empty());

        let g = mi_weighted_graph(&chain(), 0.0).unwrap();
        let (xy, yz, xz) = (g.weight(0, 1), g.weight(1, 2), g.weight(0, 2));
        assert!(xz <= xy.min(yz) && xz > 0.0);
    }

    #[test]
    fn chowliu_examples() {
        let s = binary(3);
        let g = WeightedGraph::new(s.clone(), vec![edge(0, 1, 1.0), edge(1, 2, 0.6), edge(0, 2, 0.4)], None).unwrap();
        let t = chowliu_tree(&g).unwrap();
        let pairs: Vec<_> = t.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, [(0, 1), (1, 2)]);
        assert_eq!(t.parents().unwrap(), &[None, Some(0), Some(1)]);

        let g = WeightedGraph::new(s.clone(), vec![edge(1, 2, 0.5), edge(0, 2, 0.5), edge(0, 1, 0.5)], None).unwrap();
        let pairs: Vec<_> = chowliu_tree(&g).unwrap().edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, [(0, 1), (0, 2)]);

        let empty = WeightedGraph::new(s, Vec::new(), None).unwrap();
        let t = chowliu_tree(&empty).unwrap();
        assert_eq!(t.parents().unwrap(), &[None, None, None]);
    }

    #[test]
    fn graph_validation() {
        let s = binary(3);
        assert!(WeightedGraph::new(s.clone(), vec![edge(1, 1, 0.1)], None).is_err());
        assert!(WeightedGraph::new(s.clone(), vec![edge(0, 1, 0.1), edge(1, 0, 0.2)], None).is_err());
        assert!(WeightedGraph::new(s.clone(), vec![edge(0, 1, -0.1)], None).is_err());
        assert!(WeightedGraph::new(s.clone(), vec![], Some(vec![Some(1), Some(0), None])).is_err());
        assert!(WeightedGraph::new(s, vec![], Some(vec![None, Some(0)])).is_err());
    }

    #[test]
    fn graph_distribution_examples() {
        let src = chain();
        let tree = chowliu_tree(&mi_weighted_graph(&src, 0.0).unwrap()).unwrap();
        let d = graph_distribution(&tree, &src).unwrap();
        assert!(d.distribution.approx_eq(&src, 1e-15));
        assert!(d.undefined_states.is_empty());

        let forest = WeightedGraph::new(src.schema().clone(), vec![], Some(vec![None; 3])).unwrap();
        let d = graph_distribution(&forest, &src).unwrap();
        let singles: Vec<_> = (0..3).map(|i| marginal(&src, Subset::singleton(i)).unwrap()).collect();
        assert!(d.distribution.approx_eq(&product(&singles).unwrap(), 1e-15));

        let no_parents = mi_weighted_graph(&src, 0.0).unwrap();
        assert!(graph_distribution(&no_parents, &src).is_err());
    }

    #[test]
    fn zero_probability_parent_level_is_flagged() {
        // Y is constant 0, so P(Z | Y = 1) is undefined.
        let mut p = vec![0.0; 8];
        p[0b000] = 0.3;
        p[0b001] = 0.2;
        p[0b100] = 0.1;
        p[0b101] = 0.4;
        let src = JointDistribution::new(binary(3), p).unwrap();
        let tree = WeightedGraph::new(src.schema().clone(), vec![], Some(vec![None, Some(0), Some(1)])).unwrap();
        let d = graph_distribution(&tree, &src).unwrap();
        assert_eq!(d.undefined_states.len(), 4);
        assert!((d.distribution.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mi_distance_examples() {
        let s = binary(3);
        let g = WeightedGraph::new(s.clone(), vec![edge(0, 1, 0.7)], None).unwrap();
        assert_eq!(graph_distance_mi(&g, &g).unwrap(), 0.0);
        let h = WeightedGraph::new(s.clone(), vec![edge(0, 1, 0.7), edge(1, 2, 0.4)], None).unwrap();
        assert!((graph_distance_mi(&h, &g).unwrap() - 0.4 / 8.0).abs() < 1e-15);
        let a = WeightedGraph::new(s.clone(), vec![edge(0, 1, 1.0)], None).unwrap();
        let b = WeightedGraph::new(s.clone(), vec![edge(1, 2, 1.0)], None).unwrap();
        assert_eq!(graph_distance_mi(&a, &b).unwrap(), 0.0);
        let other = WeightedGraph::new(binary(2), vec![], None).unwrap();
        assert_eq!(graph_distance_mi(&a, &other), Err(Error::NodeMismatch));
    }

    #[test]
    fn direct_distance_examples() {
        let src = chain();
        assert_eq!(graph_distance_direct(&src, &src).unwrap(), 0.0);
        let singles: Vec<_> = (0..3).map(|i| marginal(&src, Subset::singleton(i)).unwrap()).collect();
        let ind = product(&singles).unwrap();
        assert!(graph_distance_direct(&ind, &src).unwrap() > 0.0);
    }
}
