//! Random connection graph on a sampled cloud.
//!
//! Every unordered pair carries the variate `U = pair_uniform(seed, id_i, id_j)`
//! keyed on the points' stable ids, and the edge is present iff `U < p`.
//! Pairs are enumerated through a uniform cell grid; a cell pair is skipped
//! only when an upper bound on its connection probability is zero, and a
//! point pair skips the exact probability when `U` already exceeds the bound.
//! The edge set is therefore exact for every model, including heavy-tailed
//! profiles, at a cost that is quadratic when the profile has no support bound.

mod grid;
mod union_find;

use std::collections::VecDeque;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{PercoError, Result};
use crate::geometry::dist2;
use crate::model::{ModelSpec, Variant};
use crate::ppp::{Budget, PointCloud};
use crate::rng::pair_uniform;

use grid::CellGrid;
pub use union_find::UnionFind;

const MIN_CELL_SIDE: f64 = 1e-3;

/// Immutable graph with finalized component labels.
#[derive(Debug, Clone)]
pub struct GeomGraph {
    cloud: PointCloud,
    edges: Vec<(u32, u32)>,
    labels: Vec<u32>,
    adj_start: Vec<u32>,
    adj: Vec<u32>,
}

impl GeomGraph {
    /// Wraps an explicit edge list (index pairs into `cloud`).
    pub fn from_edges(cloud: PointCloud, edges: &[(usize, usize)]) -> Result<Self> {
        let n = cloud.len();
        let mut list = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(PercoError::Contract(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(PercoError::Contract(format!("self-loop at {a}")));
            }
            list.push((a.min(b) as u32, a.max(b) as u32));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::assemble(cloud, list))
    }

    fn assemble(cloud: PointCloud, edges: Vec<(u32, u32)>) -> Self {
        let n = cloud.len();
        let mut uf = UnionFind::new(n);
        let mut degree = vec![0u32; n + 1];
        for &(a, b) in &edges {
            uf.union(a, b);
            degree[a as usize + 1] += 1;
            degree[b as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let adj_start = degree;
        let mut fill = adj_start.clone();
        let mut adj = vec![0u32; 2 * edges.len()];
        for &(a, b) in &edges {
            adj[fill[a as usize] as usize] = b;
            fill[a as usize] += 1;
            adj[fill[b as usize] as usize] = a;
            fill[b as usize] += 1;
        }
        Self {
            cloud,
            edges,
            labels: uf.into_labels(),
            adj_start,
            adj,
        }
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    /// Sorted edges (i, j) with i < j.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[self.adj_start[i] as usize..self.adj_start[i + 1] as usize]
    }

    /// Component representative of vertex `i`.
    pub fn component(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn component_count(&self) -> usize {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(i, &l)| l as usize == i)
            .count()
    }

    /// Writes the point table: `i x_1 ... x_d u`.
    pub fn write_points<W: Write>(&self, mut out: W) -> io::Result<()> {
        let d = self.cloud.dim();
        let coords: Vec<String> = (1..=d).map(|a| format!("x{a}")).collect();
        writeln!(out, "# i {} u", coords.join(" "))?;
        for i in 0..self.cloud.len() {
            write!(out, "{i}")?;
            for x in self.cloud.position(i) {
                write!(out, " {x}")?;
            }
            writeln!(out, " {}", self.cloud.mark(i))?;
        }
        Ok(())
    }

    /// Writes the edge list: `i j`, one edge per line.
    pub fn write_edges<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# i j")?;
        for (a, b) in &self.edges {
            writeln!(out, "{a} {b}")?;
        }
        Ok(())
    }
}

/// Builds the graph with the environment budget.
pub fn build_graph(cloud: PointCloud, model: &ModelSpec, seed: u64) -> Result<GeomGraph> {
    build_graph_budgeted(cloud, model, seed, &Budget::from_env())
}

pub fn build_graph_budgeted(
    cloud: PointCloud,
    model: &ModelSpec,
    seed: u64,
    budget: &Budget,
) -> Result<GeomGraph> {
    model.validate()?;
    if cloud.dim() != model.dim {
        return Err(PercoError::Config(format!(
            "cloud has dimension {} but the model has dimension {}",
            cloud.dim(),
            model.dim
        )));
    }
    let n = cloud.len();
    if n < 2 {
        return Ok(GeomGraph::assemble(cloud, Vec::new()));
    }
    if n > u32::MAX as usize {
        return Err(PercoError::Resource {
            what: "vertex count",
            required: n as f64,
            budget: u32::MAX as f64,
            advice: "reduce the window size or the intensity",
        });
    }

    let reach: Vec<f64> = cloud.marks().iter().map(|&u| model.reach(u)).collect();
    let max_reach = reach.iter().copied().fold(0.0, f64::max);
    let support = model
        .support_radius(max_reach, max_reach)
        .filter(|s| s.is_finite());
    if support.is_none() {
        let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
        if pairs > budget.max_pairs {
            return Err(PercoError::Resource {
                what: "pair enumeration",
                required: pairs,
                budget: budget.max_pairs,
                advice: "the profile has unbounded support so every pair is examined; reduce the window size or the intensity",
            });
        }
    }

    let d = cloud.dim();
    let (lo, hi) = cloud.window().bounding_box();
    let extent = lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max);
    let per_axis = (n as f64).powf(1.0 / d as f64).ceil();
    let side = support
        .unwrap_or(0.0)
        .max(extent / per_axis)
        .max(MIN_CELL_SIDE);
    let grid = CellGrid::new(&cloud, side);

    let cell_reach: Vec<f64> = grid
        .nonempty
        .iter()
        .map(|&c| {
            grid.members(c)
                .iter()
                .map(|&i| reach[i as usize])
                .fold(0.0, f64::max)
        })
        .collect();
    let mut reach_of_cell = std::collections::HashMap::with_capacity(grid.nonempty.len());
    for (k, &c) in grid.nonempty.iter().enumerate() {
        reach_of_cell.insert(c, cell_reach[k]);
    }

    let damping = match &model.variant {
        Variant::Generalized { damping, .. } => Some(*damping),
        _ => None,
    };

    let per_cell: Vec<Vec<(u32, u32)>> = grid
        .nonempty
        .par_iter()
        .enumerate()
        .map(|(k, &ca)| {
            let ra = cell_reach[k];
            let coords_a = grid.coords(ca);
            let mut found = Vec::new();
            let mut visit = |cb: usize| {
                let Some(&rb) = reach_of_cell.get(&cb) else {
                    return;
                };
                let dmin = grid.min_distance(&coords_a, &grid.coords(cb));
                let bound = model.pair_bound(ra, rb, dmin).min(1.0);
                if !(bound > 0.0) {
                    return;
                }
                let ma = grid.members(ca);
                let mb = grid.members(cb);
                for (x, &i) in ma.iter().enumerate() {
                    let others = if ca == cb { &mb[x + 1..] } else { mb };
                    for &j in others {
                        let (i, j) = (i as usize, j as usize);
                        let u = pair_uniform(seed, cloud.id(i), cloud.id(j));
                        if u >= bound {
                            continue;
                        }
                        let pi = cloud.position(i);
                        let pj = cloud.position(j);
                        let mut p =
                            model.pair_phi(cloud.mark(i), cloud.mark(j), dist2(pi, pj).sqrt());
                        if u >= p {
                            continue;
                        }
                        if let Some(damp) = damping {
                            let mid: Vec<f64> =
                                pi.iter().zip(pj).map(|(a, b)| 0.5 * (a + b)).collect();
                            let count =
                                grid.count_within(&cloud, &mid, damp.radius, (i as u32, j as u32));
                            p *= model.damping_factor(count);
                            if u >= p {
                                continue;
                            }
                        }
                        found.push((i.min(j) as u32, i.max(j) as u32));
                    }
                }
            };

            let cell_support = support.and_then(|_| model.support_radius(ra, max_reach));
            let k_cells = cell_support.map(|s| (s / side).ceil() as i64);
            let box_size = k_cells.map(|k| ((2 * k + 1) as f64).powi(d as i32));
            match (k_cells, box_size) {
                (Some(kc), Some(b)) if b < grid.nonempty.len() as f64 => {
                    for off in grid::full_offsets(d, kc) {
                        if let Some(cb) = grid.offset_cell(&coords_a, &off) {
                            if cb >= ca {
                                visit(cb);
                            }
                        }
                    }
                }
                _ => {
                    for &cb in &grid.nonempty[k..] {
                        visit(cb);
                    }
                }
            }
            found
        })
        .collect();

    let mut edges: Vec<(u32, u32)> = per_cell.into_iter().flatten().collect();
    edges.sort_unstable();
    Ok(GeomGraph::assemble(cloud, edges))
}

/// Spatial region used in connectivity queries.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// open ball |y − c| < r
    Ball { center: Vec<f64>, radius: f64 },
    /// complement of the open ball: |y − c| ≥ r
    Outside { center: Vec<f64>, radius: f64 },
    Everywhere,
}

impl Region {
    pub fn ball(center: Vec<f64>, radius: f64) -> Self {
        Region::Ball { center, radius }
    }

    pub fn outside(center: Vec<f64>, radius: f64) -> Self {
        Region::Outside { center, radius }
    }

    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::Ball { center, radius } => dist2(x, center) < radius * radius,
            Region::Outside { center, radius } => dist2(x, center) >= radius * radius,
            Region::Everywhere => true,
        }
    }
}

/// A ↔ B: some component has a vertex in A and a vertex in B.
pub fn connected_regions(graph: &GeomGraph, a: &Region, b: &Region) -> bool {
    let cloud = graph.cloud();
    let mut in_a = std::collections::HashSet::new();
    for i in 0..cloud.len() {
        if a.contains(cloud.position(i)) {
            in_a.insert(graph.component(i));
        }
    }
    if in_a.is_empty() {
        return false;
    }
    (0..cloud.len()).any(|i| b.contains(cloud.position(i)) && in_a.contains(&graph.component(i)))
}

/// A ↔ B using only vertices in S, by BFS over the induced subgraph.
pub fn connected_regions_restricted(graph: &GeomGraph, a: &Region, b: &Region, s: &Region) -> bool {
    let cloud = graph.cloud();
    let n = cloud.len();
    let allowed: Vec<bool> = (0..n).map(|i| s.contains(cloud.position(i))).collect();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for i in 0..n {
        if allowed[i] && a.contains(cloud.position(i)) {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(v) = queue.pop_front() {
        if b.contains(cloud.position(v)) {
            return true;
        }
        for &w in graph.neighbors(v) {
            let w = w as usize;
            if allowed[w] && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}
