//! Sampling roadmap for intrinsic-distance upper bounds.
//!
//! Nodes are the query points followed by a deterministic sample sequence
//! cycling through an interior stratum and collar shells at geometric
//! depths. Sample `n` is joined to its `k` nearest *earlier* nodes, so the
//! graph for a budget is a subgraph of the graph for any larger budget and
//! shortest-path values can only decrease as the budget grows.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::closed::{hilbert_distance, minimal_distance_lower};
use super::polyline::{segment_length, Polyline};
use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{check_dim, dist};
use crate::metric::{Finsler, MetricEvaluator, MetricTag};
use crate::sampling::{collar_point, halton_interior, item_rng, Window};

#[derive(Debug, Clone, PartialEq)]
pub struct GraphConfig {
    /// Number of sampled nodes (query points come on top).
    pub budget: usize,
    /// Neighbours per sample.
    pub k: usize,
    pub seed: u64,
    pub max_shell_levels: usize,
    /// Straighten the shortest path greedily after the graph search.
    pub shortcut: bool,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            budget: 20_000,
            k: 12,
            seed: 0,
            max_shell_levels: 40,
            shortcut: true,
        }
    }
}

/// Bounds on an intrinsic distance with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub lower: f64,
    pub upper: f64,
    /// Shortest-path value on the raw graph, before straightening.
    pub graph_upper: f64,
    pub method: String,
    pub witness: Option<Polyline>,
}

impl DistanceReport {
    pub fn exact(value: f64, method: impl Into<String>) -> Self {
        Self {
            lower: value,
            upper: value,
            graph_upper: value,
            method: method.into(),
            witness: None,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Queued {
    cost: f64,
    node: usize,
}

impl Eq for Queued {}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Undirected weighted roadmap in compressed adjacency form.
pub struct SampleGraph<'a> {
    metric: &'a MetricEvaluator<'a>,
    body: &'a ConvexBody,
    nodes: Vec<Vec<f64>>,
    queries: usize,
    shell_levels: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    shortcut: bool,
}

fn shell_depths(body: &ConvexBody, queries: &[Vec<f64>], max_levels: usize) -> Result<Vec<f64>> {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for q in queries {
        let d = body.boundary_distance(q)?;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    let top = body.collar_width().min(0.5 * hi);
    let bottom = 0.5 * lo;
    if !(top > 0.0) || !top.is_finite() || max_levels == 0 {
        return Ok(Vec::new());
    }
    let mut levels = vec![top];
    while levels.len() < max_levels && levels[levels.len() - 1] * 0.5 >= bottom {
        levels.push(levels[levels.len() - 1] * 0.5);
    }
    Ok(levels)
}

fn nearest_earlier(nodes: &[Vec<f64>], n: usize, k: usize) -> Vec<(usize, f64)> {
    let x = &nodes[n];
    let mut best: Vec<(usize, f64)> = Vec::with_capacity(k + 1);
    let mut worst = f64::INFINITY;
    for (m, y) in nodes[..n].iter().enumerate() {
        let mut d2 = 0.0;
        for (a, b) in x.iter().zip(y) {
            d2 += (a - b) * (a - b);
        }
        if best.len() < k || d2 < worst {
            let pos = best.partition_point(|e| e.1 <= d2);
            best.insert(pos, (m, d2));
            if best.len() > k {
                best.pop();
            }
            if best.len() == k {
                worst = best[k - 1].1;
            }
        }
    }
    best
}

impl<'a> SampleGraph<'a> {
    pub fn build(
        metric: &'a MetricEvaluator<'a>,
        queries: &[Vec<f64>],
        config: &GraphConfig,
    ) -> Result<Self> {
        let body = metric.body();
        for q in queries {
            check_dim(body.dim(), q)?;
        }
        let levels = shell_depths(body, queries, config.max_shell_levels)?;
        let window = Window::for_body(body, queries);
        let strata = levels.len() + 1;
        let samples: Vec<Option<Vec<f64>>> = (0..config.budget)
            .into_par_iter()
            .map(|i| {
                let mut rng = item_rng(config.seed, i as u64);
                let s = i % strata;
                if s == 0 {
                    halton_interior(body, &window, (i / strata) as u64, &mut rng)
                } else {
                    collar_point(body, &window, levels[s - 1], &mut rng)
                }
            })
            .collect();
        let mut nodes: Vec<Vec<f64>> = queries.to_vec();
        nodes.extend(samples.into_iter().flatten());

        let k = config.k.max(1);
        let first = queries.len();
        let adjacency: Vec<Vec<(usize, f64)>> = (first..nodes.len())
            .into_par_iter()
            .map(|n| {
                // Endpoints inside imply the whole segment is inside by convexity.
                nearest_earlier(&nodes, n, k)
                    .into_iter()
                    .filter_map(|(m, _)| {
                        segment_length(metric, &nodes[n], &nodes[m])
                            .ok()
                            .filter(|w| w.is_finite())
                            .map(|w| (m, w))
                    })
                    .collect()
            })
            .collect();

        let mut degree = vec![0usize; nodes.len()];
        for (i, list) in adjacency.iter().enumerate() {
            degree[first + i] += list.len();
            for (m, _) in list {
                degree[*m] += 1;
            }
        }
        let mut offsets = vec![0usize; nodes.len() + 1];
        for i in 0..nodes.len() {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[nodes.len()]];
        let mut weights = vec![0.0; offsets[nodes.len()]];
        for (i, list) in adjacency.iter().enumerate() {
            let n = first + i;
            for &(m, w) in list {
                targets[fill[n]] = m;
                weights[fill[n]] = w;
                fill[n] += 1;
                targets[fill[m]] = n;
                weights[fill[m]] = w;
                fill[m] += 1;
            }
        }
        Ok(Self {
            metric,
            body,
            nodes,
            queries: queries.len(),
            shell_levels: levels.len(),
            offsets,
            targets,
            weights,
            shortcut: config.shortcut,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn query_count(&self) -> usize {
        self.queries
    }

    pub fn shell_levels(&self) -> usize {
        self.shell_levels
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i]
    }

    /// Shortest-path value and node path between nodes `s` and `t`.
    pub fn shortest_path(&self, s: usize, t: usize) -> (f64, Option<Vec<usize>>) {
        if s == t {
            return (0.0, Some(vec![s]));
        }
        let n = self.nodes.len();
        let mut cost = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        cost[s] = 0.0;
        heap.push(Queued { cost: 0.0, node: s });
        while let Some(Queued { cost: c, node }) = heap.pop() {
            if node == t {
                break;
            }
            if c > cost[node] {
                continue;
            }
            for e in self.offsets[node]..self.offsets[node + 1] {
                let m = self.targets[e];
                let nc = c + self.weights[e];
                if nc < cost[m] {
                    cost[m] = nc;
                    prev[m] = node;
                    heap.push(Queued { cost: nc, node: m });
                }
            }
        }
        if !cost[t].is_finite() {
            return (f64::INFINITY, None);
        }
        let mut path = vec![t];
        while let Some(&last) = path.last() {
            if last == s {
                break;
            }
            path.push(prev[last]);
        }
        path.reverse();
        (cost[t], Some(path))
    }

    fn edge_weight(&self, a: usize, b: usize) -> f64 {
        (self.offsets[a]..self.offsets[a + 1])
            .find(|&e| self.targets[e] == b)
            .map(|e| self.weights[e])
            .unwrap_or(f64::INFINITY)
    }

    /// Greedy string pulling: from each kept vertex jump to the farthest
    /// later path vertex whose direct segment is no longer than the path.
    fn straighten(&self, path: &[usize]) -> (f64, Vec<usize>) {
        let m = path.len();
        let mut prefix = vec![0.0; m];
        for i in 1..m {
            prefix[i] = prefix[i - 1] + self.edge_weight(path[i - 1], path[i]);
        }
        let mut kept = vec![path[0]];
        let mut total = 0.0;
        let mut i = 0;
        while i + 1 < m {
            let mut next = i + 1;
            let mut step = prefix[i + 1] - prefix[i];
            for j in (i + 2..m).rev() {
                if let Ok(w) = segment_length(self.metric, &self.nodes[path[i]], &self.nodes[path[j]]) {
                    if w <= prefix[j] - prefix[i] {
                        next = j;
                        step = w;
                        break;
                    }
                }
            }
            total += step;
            kept.push(path[next]);
            i = next;
        }
        (total, kept)
    }

    fn lower_bound(&self, x: &[f64], y: &[f64]) -> Result<(f64, &'static str)> {
        Ok(match self.metric.tag() {
            MetricTag::ExactMinimal | MetricTag::MinimalUpper => {
                (minimal_distance_lower(self.body, x, y)?, "endpoint")
            }
            MetricTag::Hilbert => (hilbert_distance(self.body, x, y)?, "cross-ratio"),
            MetricTag::MinimalLower => (0.5 * hilbert_distance(self.body, x, y)?, "cross-ratio/2"),
            MetricTag::ModelF => (0.0, "none"),
        })
    }

    /// Distance report between query points `i` and `j`.
    pub fn report(&self, i: usize, j: usize) -> Result<DistanceReport> {
        if i >= self.queries || j >= self.queries {
            return Err(Error::InvalidPolyline(format!(
                "query index out of range ({} queries)",
                self.queries
            )));
        }
        let (x, y) = (&self.nodes[i], &self.nodes[j]);
        if dist(x, y) == 0.0 {
            return Ok(DistanceReport::exact(0.0, "coincident"));
        }
        let (lower, lower_tag) = self.lower_bound(x, y)?;
        let (raw, path) = self.shortest_path(i, j);
        let label = self.metric.label();
        let Some(path) = path else {
            return Ok(DistanceReport {
                lower,
                upper: f64::INFINITY,
                graph_upper: f64::INFINITY,
                method: format!("graph/{label};lower={lower_tag};disconnected"),
                witness: None,
            });
        };
        let (upper, kept, tag) = if self.shortcut {
            let (u, kept) = self.straighten(&path);
            (u.min(raw), kept, "graph+shortcut")
        } else {
            (raw, path, "graph")
        };
        let witness = Polyline::from_points(kept.iter().map(|&n| self.nodes[n].clone()).collect()).ok();
        Ok(DistanceReport {
            lower,
            upper,
            graph_upper: raw,
            method: format!("{tag}/{label};lower={lower_tag}"),
            witness,
        })
    }
}

/// Graph upper bound and certified lower bound for the distance from `x` to `y`.
pub fn geodesic_graph_distance(
    metric: &MetricEvaluator<'_>,
    x: &[f64],
    y: &[f64],
    config: &GraphConfig,
) -> Result<DistanceReport> {
    let body = metric.body();
    if !body.is_interior(x) || !body.is_interior(y) {
        check_dim(body.dim(), x)?;
        check_dim(body.dim(), y)?;
        return Err(Error::NotInterior);
    }
    if dist(x, y) == 0.0 {
        return Ok(DistanceReport::exact(0.0, "coincident"));
    }
    let queries = [x.to_vec(), y.to_vec()];
    let graph = SampleGraph::build(metric, &queries, config)?;
    graph.report(0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(budget: usize) -> GraphConfig {
        GraphConfig {
            budget,
            seed: 5,
            ..GraphConfig::default()
        }
    }

    #[test]
    fn coincident_points_have_zero_distance() {
        let b = ConvexBody::unit_ball(3);
        let f = MetricEvaluator::new(MetricTag::ExactMinimal, &b);
        let r = geodesic_graph_distance(&f, &[0.1; 3], &[0.1; 3], &small(100)).unwrap();
        assert_eq!((r.lower, r.upper), (0.0, 0.0));
    }

    #[test]
    fn ball_distance_is_bracketed() {
        let b = ConvexBody::unit_ball(3);
        let f = MetricEvaluator::new(MetricTag::ExactMinimal, &b);
        let r = geodesic_graph_distance(&f, &[0.0; 3], &[0.5, 0.0, 0.0], &small(2000)).unwrap();
        let exact = 0.5f64.atanh();
        assert!(r.lower <= exact + 1e-12);
        assert!(r.upper >= exact - 1e-6);
        assert!(r.upper <= r.graph_upper + 1e-12);
        assert!(r.upper < exact * 1.02, "{r:?}");
    }

    #[test]
    fn graph_values_never_grow_with_the_budget() {
        let b = ConvexBody::unit_ball(3);
        let f = MetricEvaluator::new(MetricTag::ExactMinimal, &b);
        let (x, y) = ([-0.6, 0.1, 0.0], [0.3, 0.7, -0.2]);
        let mut last = f64::INFINITY;
        for budget in [250, 500, 1000, 2000] {
            let r = geodesic_graph_distance(&f, &x, &y, &small(budget)).unwrap();
            assert!(r.graph_upper <= last + 1e-9, "{budget}: {} > {last}", r.graph_upper);
            last = r.graph_upper;
        }
    }

    #[test]
    fn tiny_budget_reports_disconnection() {
        let b = ConvexBody::unit_ball(3);
        let f = MetricEvaluator::new(MetricTag::ExactMinimal, &b);
        let r = geodesic_graph_distance(&f, &[0.0; 3], &[0.5, 0.0, 0.0], &small(0)).unwrap();
        assert_eq!(r.upper, f64::INFINITY);
    }
}
