//! Events evaluated exactly on a built graph.
//!
//! Complements of balls are read inside the simulation window, so every
//! query first checks that the window covers the region the event inspects.

use crate::error::{PercoError, Result};
use crate::geometry::{dist2, norm};
use crate::graph::{connected_regions, connected_regions_restricted, GeomGraph, Region};
use crate::ppp::Window;

/// Default margin added to the window radius factor.
pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub enum EventSpec {
    /// L(r, c): an edge of length > c·r with an endpoint in B(0, r)
    LongEdge { r: f64, c: f64 },
    /// C(r): B(0, r) ↔ B(0, 2r)^c
    Crossing { r: f64 },
    /// G(r, x): B(x, r) ↔ B(x, 2r)^c using only vertices in B(x, 3r)
    LocalCrossing { r: f64, center: Vec<f64> },
    /// F(r): an edge of length > r with an endpoint in B(0, 20r)
    FarEdge { r: f64 },
}

impl EventSpec {
    /// G(r) = G(r, 0).
    pub fn local_crossing(d: usize, r: f64) -> Self {
        EventSpec::LocalCrossing {
            r,
            center: vec![0.0; d],
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let (r, c) = match self {
            EventSpec::LongEdge { r, c } => (*r, *c),
            EventSpec::Crossing { r } | EventSpec::FarEdge { r } => (*r, 1.0),
            EventSpec::LocalCrossing { r, center } => {
                if center.len() != dim || center.iter().any(|x| !x.is_finite()) {
                    return Err(PercoError::Config(format!(
                        "event center {center:?} is not a point of R^{dim}"
                    )));
                }
                (*r, 1.0)
            }
        };
        if !(r > 0.0 && r.is_finite()) {
            return Err(PercoError::Config(format!("event scale r must be > 0, got {r}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(PercoError::Config(format!("event ratio c must be > 0, got {c}")));
        }
        Ok(())
    }

    pub fn scale(&self) -> f64 {
        match self {
            EventSpec::LongEdge { r, .. }
            | EventSpec::Crossing { r }
            | EventSpec::LocalCrossing { r, .. }
            | EventSpec::FarEdge { r } => *r,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EventSpec::LongEdge { .. } => "L",
            EventSpec::Crossing { .. } => "C",
            EventSpec::LocalCrossing { .. } => "G",
            EventSpec::FarEdge { .. } => "F",
        }
    }

    /// Whether adding vertices or edges can only turn the event on.
    pub fn is_monotone(&self) -> bool {
        !matches!(self, EventSpec::LocalCrossing { .. })
    }

    /// Ball (center, radius) the window must contain for exact evaluation.
    pub fn required_ball(&self, dim: usize) -> (Vec<f64>, f64) {
        let origin = vec![0.0; dim];
        match self {
            EventSpec::LongEdge { r, c } => (origin, (1.0 + c) * r),
            EventSpec::Crossing { r } => (origin, 2.0 * r),
            EventSpec::LocalCrossing { r, center } => (center.clone(), 3.0 * r),
            EventSpec::FarEdge { r } => (origin, 21.0 * r),
        }
    }

    /// Window radius factor m: the window is B(0, m·r).
    pub fn margin_factor(&self, eps: f64) -> f64 {
        match self {
            EventSpec::LongEdge { c, .. } => 1.0 + c + eps,
            EventSpec::Crossing { .. } => 2.0 + eps,
            EventSpec::LocalCrossing { r, center } => norm(center) / r + 3.0 + eps,
            EventSpec::FarEdge { .. } => 21.0 + eps,
        }
    }

    /// Default simulation window B(0, m·r).
    pub fn policy_window(&self, dim: usize, eps: f64) -> Window {
        Window::centered_ball(dim, self.margin_factor(eps) * self.scale())
    }

    /// Radius of the origin-centered ball whose edges to the window exterior
    /// could change the event (`None` when the event is local to the window).
    pub fn truncation_source(&self) -> Option<f64> {
        match self {
            EventSpec::LongEdge { r, .. } => Some(*r),
            EventSpec::Crossing { r } => Some(2.0 * r),
            EventSpec::LocalCrossing { .. } => None,
            EventSpec::FarEdge { r } => Some(20.0 * r),
        }
    }

    pub fn evaluate(&self, graph: &GeomGraph) -> Result<bool> {
        match self {
            EventSpec::LongEdge { r, c } => long_edge_event(graph, *r, *c),
            EventSpec::Crossing { r } => crossing_event(graph, *r),
            EventSpec::LocalCrossing { r, center } => local_crossing_event(graph, *r, center),
            EventSpec::FarEdge { r } => f_event(graph, *r),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            EventSpec::LongEdge { r, c } => format!("L(r={r}, c={c})"),
            EventSpec::Crossing { r } => format!("C(r={r})"),
            EventSpec::LocalCrossing { r, center } => format!("G(r={r}, x={center:?})"),
            EventSpec::FarEdge { r } => format!("F(r={r})"),
        }
    }
}

/// Fails unless the graph's window contains B(center, radius).
pub fn require_coverage(
    graph: &GeomGraph,
    needed: &'static str,
    center: &[f64],
    radius: f64,
) -> Result<()> {
    if graph.cloud().window().contains_ball(center, radius) {
        Ok(())
    } else {
        Err(PercoError::WindowCoverage {
            needed,
            center: center.to_vec(),
            radius,
        })
    }
}

/// Some edge has an endpoint x with |x − center| < radius (or ≤ when
/// `closed`) and length > `length`. No coverage check.
pub fn long_edge_near(
    graph: &GeomGraph,
    center: &[f64],
    radius: f64,
    length: f64,
    closed: bool,
) -> bool {
    let cloud = graph.cloud();
    let r2 = radius * radius;
    let l2 = length * length;
    let inside = |i: usize| {
        let d2 = dist2(cloud.position(i), center);
        if closed {
            d2 <= r2
        } else {
            d2 < r2
        }
    };
    graph.edges().iter().any(|&(a, b)| {
        let (a, b) = (a as usize, b as usize);
        (inside(a) || inside(b)) && dist2(cloud.position(a), cloud.position(b)) > l2
    })
}

pub fn long_edge_event(graph: &GeomGraph, r: f64, c: f64) -> Result<bool> {
    let origin = vec![0.0; graph.cloud().dim()];
    require_coverage(graph, "L(r,c) needs B(0,(1+c)r)", &origin, (1.0 + c) * r)?;
    Ok(long_edge_near(graph, &origin, r, c * r, false))
}

pub fn crossing_event(graph: &GeomGraph, r: f64) -> Result<bool> {
    let origin = vec![0.0; graph.cloud().dim()];
    require_coverage(graph, "C(r) needs B(0,2r)", &origin, 2.0 * r)?;
    Ok(connected_regions(
        graph,
        &Region::ball(origin.clone(), r),
        &Region::outside(origin, 2.0 * r),
    ))
}

pub fn local_crossing_event(graph: &GeomGraph, r: f64, center: &[f64]) -> Result<bool> {
    require_coverage(graph, "G(r,x) needs B(x,3r)", center, 3.0 * r)?;
    Ok(connected_regions_restricted(
        graph,
        &Region::ball(center.to_vec(), r),
        &Region::outside(center.to_vec(), 2.0 * r),
        &Region::ball(center.to_vec(), 3.0 * r),
    ))
}

/// F(r), evaluated directly (not through L(20r, 1/20)).
pub fn f_event(graph: &GeomGraph, r: f64) -> Result<bool> {
    let cloud = graph.cloud();
    let origin = vec![0.0; cloud.dim()];
    require_coverage(graph, "F(r) needs B(0,21r)", &origin, 21.0 * r)?;
    let near = (20.0 * r) * (20.0 * r);
    Ok(graph.edges().iter().any(|&(a, b)| {
        let (pa, pb) = (cloud.position(a as usize), cloud.position(b as usize));
        let len = dist2(pa, pb).sqrt();
        len > r && (dist2(pa, &origin) < near || dist2(pb, &origin) < near)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ppp::{MarkedPoint, PointCloud};

    fn graph(points: &[[f64; 2]], edges: &[(usize, usize)], window_radius: f64) -> GeomGraph {
        let pts: Vec<MarkedPoint> = points
            .iter()
            .map(|p| MarkedPoint::new(p.to_vec(), 0.5).unwrap())
            .collect();
        let cloud = PointCloud::from_points(Window::centered_ball(2, window_radius), 1.0, &pts).unwrap();
        GeomGraph::from_edges(cloud, edges).unwrap()
    }

    #[test]
    fn empty_graph_has_no_events() {
        let g = graph(&[[0.0, 0.0], [3.0, 0.0]], &[], 30.0);
        assert!(!long_edge_event(&g, 1.0, 1.0).unwrap());
        assert!(!crossing_event(&g, 1.0).unwrap());
        assert!(!f_event(&g, 1.0).unwrap());
    }

    #[test]
    fn single_long_edge() {
        // r = 1, c = 2: length 2.2 > 2
        let g = graph(&[[0.0, 0.0], [2.2, 0.0]], &[(0, 1)], 3.5);
        assert!(long_edge_event(&g, 1.0, 2.0).unwrap());
        assert!(crossing_event(&g, 1.0).unwrap());
        assert!(!long_edge_event(&g, 1.0, 2.5).unwrap());
    }

    #[test]
    fn restricted_crossing_ignores_detours() {
        // 0 in B(0,1), 1 outside B(0,3), 2 outside B(0,2); path 0-1-2
        let g = graph(&[[0.5, 0.0], [3.5, 0.0], [2.5, 0.0]], &[(0, 1), (1, 2)], 5.0);
        assert!(crossing_event(&g, 1.0).unwrap());
        // the direct edge 0-1 already leaves B(0,2); G restricted to B(0,3) drops vertex 1
        assert!(!local_crossing_event(&g, 1.0, &[0.0, 0.0]).unwrap());
        let g2 = graph(&[[0.5, 0.0], [2.5, 0.0]], &[(0, 1)], 5.0);
        assert!(local_crossing_event(&g2, 1.0, &[0.0, 0.0]).unwrap());
    }

    #[test]
    fn far_edge_and_its_long_edge_form() {
        let g = graph(&[[19.0, 0.0], [20.5, 0.0]], &[(0, 1)], 22.0);
        assert!(f_event(&g, 1.0).unwrap());
        assert_eq!(f_event(&g, 1.0).unwrap(), long_edge_event(&g, 20.0, 0.05).unwrap());
    }

    #[test]
    fn coverage_errors_are_reported() {
        let g = graph(&[[0.0, 0.0]], &[], 2.5);
        assert!(matches!(
            long_edge_event(&g, 1.0, 2.0),
            Err(PercoError::WindowCoverage { .. })
        ));
        assert!(crossing_event(&g, 1.0).is_ok());
        assert!(local_crossing_event(&g, 1.0, &[0.0, 0.0]).is_err());
        assert!(f_event(&g, 0.1).is_ok());
    }

    #[test]
    fn policy_windows_cover_their_events() {
        let events = [
            EventSpec::LongEdge { r: 2.0, c: 3.0 },
            EventSpec::Crossing { r: 2.0 },
            EventSpec::LocalCrossing {
                r: 1.0,
                center: vec![7.0, 0.0],
            },
            EventSpec::FarEdge { r: 0.5 },
        ];
        for e in &events {
            let w = e.policy_window(2, DEFAULT_MARGIN);
            let (c, r) = e.required_ball(2);
            assert!(w.contains_ball(&c, r), "{}", e.describe());
        }
    }
}
