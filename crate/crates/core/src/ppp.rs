//! Marked Poisson point processes in finite windows.
//!
//! A [`PointCloud`] stores coordinates in a flat row-major buffer together
//! with marks in (0, 1) and stable point identifiers. Identifiers are what the
//! edge randomness is keyed on, so a thinned sub-cloud that keeps them sees the
//! same pair variates as its parent.

use crate::error::{PercoError, Result};
use crate::geometry::{ball_volume, dist2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

pub const MAX_DIM: usize = 8;

/// Environment variable capping the number of points per replicate.
pub const BUDGET_ENV: &str = "PERCO_BUDGET_POINTS";

/// An owned marked point.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedPoint {
    pub position: Vec<f64>,
    pub mark: f64,
}

impl MarkedPoint {
    pub fn new(position: Vec<f64>, mark: f64) -> Result<Self> {
        if !(mark > 0.0 && mark < 1.0) {
            return Err(PercoError::Config(format!("mark {mark} outside (0,1)")));
        }
        if position.is_empty() || position.len() > MAX_DIM {
            return Err(PercoError::Config(format!(
                "dimension {} outside 1..={MAX_DIM}",
                position.len()
            )));
        }
        if position.iter().any(|x| !x.is_finite()) {
            return Err(PercoError::Config("non-finite coordinate".into()));
        }
        Ok(Self { position, mark })
    }

    pub fn as_ref(&self) -> PointRef<'_> {
        PointRef {
            position: &self.position,
            mark: self.mark,
        }
    }
}

/// A borrowed view of a marked point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRef<'a> {
    pub position: &'a [f64],
    pub mark: f64,
}

impl PointRef<'_> {
    pub fn to_owned(&self) -> MarkedPoint {
        MarkedPoint {
            position: self.position.to_vec(),
            mark: self.mark,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Window {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl Window {
    /// B(0, radius) in dimension `d`.
    pub fn centered_ball(d: usize, radius: f64) -> Self {
        Window::Ball {
            center: vec![0.0; d],
            radius,
        }
    }

    pub fn cube(d: usize, lo: f64, hi: f64) -> Self {
        Window::Box {
            lower: vec![lo; d],
            upper: vec![hi; d],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Window::Ball { center, .. } => center.len(),
            Window::Box { lower, .. } => lower.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 || d > MAX_DIM {
            return Err(PercoError::Config(format!(
                "window dimension {d} outside 1..={MAX_DIM}"
            )));
        }
        match self {
            Window::Ball { center, radius } => {
                if !(*radius > 0.0 && radius.is_finite()) || center.iter().any(|c| !c.is_finite())
                {
                    return Err(PercoError::Config(format!(
                        "ball window needs a finite positive radius, got {radius}"
                    )));
                }
            }
            Window::Box { lower, upper } => {
                if upper.len() != d {
                    return Err(PercoError::Config("box corners differ in dimension".into()));
                }
                if lower
                    .iter()
                    .zip(upper)
                    .any(|(l, u)| !(l < u) || !l.is_finite() || !u.is_finite())
                {
                    return Err(PercoError::Config(
                        "box window needs lower < upper in every coordinate".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        window_volume(self)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Window::Ball { center, radius } => dist2(x, center) < radius * radius,
            Window::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (l, u))| *v >= *l && *v < *u),
        }
    }

    /// Whether the closed ball B(center, radius) lies inside the window
    /// (up to a relative slack of 1e-12).
    pub fn contains_ball(&self, center: &[f64], radius: f64) -> bool {
        match self {
            Window::Ball { center: c, radius: r } => {
                dist2(center, c).sqrt() + radius <= r * (1.0 + 1e-12)
            }
            Window::Box { lower, upper } => center
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(x, (l, u))| x - radius >= *l - 1e-12 && x + radius <= *u + 1e-12),
        }
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Window::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Window::Box { lower, upper } => (lower.clone(), upper.clone()),
        }
    }

    fn sample_position<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        let (lo, hi) = self.bounding_box();
        loop {
            for (k, x) in out.iter_mut().enumerate() {
                *x = lo[k] + (hi[k] - lo[k]) * rng.random::<f64>();
            }
            if self.contains(out) {
                return;
            }
        }
    }
}

/// Lebesgue volume of the window.
pub fn window_volume(window: &Window) -> f64 {
    match window {
        Window::Ball { center, radius } => ball_volume(center.len(), *radius),
        Window::Box { lower, upper } => lower.iter().zip(upper).map(|(l, u)| u - l).product(),
    }
}

/// Caps on per-replicate work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    /// maximum expected number of points per cloud
    pub max_points: f64,
    /// maximum number of candidate pairs enumerated exactly
    pub max_pairs: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_points: 1.0e6,
            max_pairs: 1.25e9,
        }
    }
}

impl Budget {
    /// Default budget with `PERCO_BUDGET_POINTS` applied when set.
    pub fn from_env() -> Self {
        let mut b = Self::default();
        if let Some(n) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|n| *n > 0.0)
        {
            b.max_points = n;
        }
        b
    }
}

/// A sampled marked point set. Immutable after creation.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    window: Window,
    intensity: f64,
    seed: u64,
    coords: Vec<f64>,
    marks: Vec<f64>,
    ids: Vec<u64>,
}

impl PointCloud {
    /// Builds a cloud from explicit points (ids 0..n). Points must lie in the window.
    pub fn from_points(window: Window, intensity: f64, points: &[MarkedPoint]) -> Result<Self> {
        window.validate()?;
        let d = window.dim();
        let mut coords = Vec::with_capacity(points.len() * d);
        let mut marks = Vec::with_capacity(points.len());
        for p in points {
            if p.position.len() != d {
                return Err(PercoError::Config("point dimension differs from window".into()));
            }
            if !window.contains(&p.position) {
                return Err(PercoError::Config(format!(
                    "point {:?} lies outside the window",
                    p.position
                )));
            }
            if !(p.mark > 0.0 && p.mark < 1.0) {
                return Err(PercoError::Config(format!("mark {} outside (0,1)", p.mark)));
            }
            coords.extend_from_slice(&p.position);
            marks.push(p.mark);
        }
        Ok(Self {
            window,
            intensity,
            seed: 0,
            coords,
            marks,
            ids: (0..points.len() as u64).collect(),
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }
    pub fn intensity(&self) -> f64 {
        self.intensity
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn dim(&self) -> usize {
        self.window.dim()
    }
    pub fn len(&self) -> usize {
        self.marks.len()
    }
    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }
    pub fn position(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }
    pub fn mark(&self, i: usize) -> f64 {
        self.marks[i]
    }
    pub fn marks(&self) -> &[f64] {
        &self.marks
    }
    /// Stable identifier of point `i` (inherited through thinning).
    pub fn id(&self, i: usize) -> u64 {
        self.ids[i]
    }
    pub fn ids(&self) -> &[u64] {
        &self.ids
    }
    pub fn point(&self, i: usize) -> PointRef<'_> {
        PointRef {
            position: self.position(i),
            mark: self.marks[i],
        }
    }
    pub fn points(&self) -> impl Iterator<Item = PointRef<'_>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Sub-cloud of the points whose flag is set, keeping ids.
    pub fn retain_subset(&self, keep: &[bool], intensity: f64) -> PointCloud {
        let d = self.dim();
        let mut out = PointCloud {
            window: self.window.clone(),
            intensity,
            seed: self.seed,
            coords: Vec::new(),
            marks: Vec::new(),
            ids: Vec::new(),
        };
        for i in (0..self.len()).filter(|&i| keep[i]) {
            out.coords.extend_from_slice(&self.coords[i * d..(i + 1) * d]);
            out.marks.push(self.marks[i]);
            out.ids.push(self.ids[i]);
        }
        out
    }
}

/// Samples PPP(λ) on window × (0,1) using the environment budget.
pub fn sample_ppp(window: &Window, intensity: f64, seed: u64) -> Result<PointCloud> {
    sample_ppp_budgeted(window, intensity, seed, &Budget::from_env())
}

/// Samples PPP(λ) on window × (0,1): a Poisson(λ·vol) count, then i.i.d.
/// uniform positions (rejection from the bounding box) and uniform marks.
pub fn sample_ppp_budgeted(
    window: &Window,
    intensity: f64,
    seed: u64,
    budget: &Budget,
) -> Result<PointCloud> {
    window.validate()?;
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(PercoError::Config(format!(
            "intensity must be finite and nonnegative, got {intensity}"
        )));
    }
    let mean = intensity * window.volume();
    if mean > budget.max_points {
        return Err(PercoError::Resource {
            what: "point sample",
            required: mean,
            budget: budget.max_points,
            advice: "reduce the window size or the intensity, or raise PERCO_BUDGET_POINTS",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .map_err(|e| PercoError::Config(format!("poisson mean {mean}: {e}")))?
            .sample(&mut rng) as usize
    } else {
        0
    };
    let d = window.dim();
    let mut coords = vec![0.0; count * d];
    let mut marks = Vec::with_capacity(count);
    for i in 0..count {
        window.sample_position(&mut rng, &mut coords[i * d..(i + 1) * d]);
        let mut u: f64 = rng.random();
        while u == 0.0 {
            u = rng.random();
        }
        marks.push(u);
    }
    Ok(PointCloud {
        window: window.clone(),
        intensity,
        seed,
        coords,
        marks,
        ids: (0..count as u64).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn volumes() {
        assert_eq!(window_volume(&Window::cube(3, 0.0, 1.0)), 1.0);
        assert!((window_volume(&Window::centered_ball(2, 2.0)) - 4.0 * PI).abs() < 1e-14);
        assert!((window_volume(&Window::centered_ball(3, 1.0)) - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_intensity_gives_empty_cloud() {
        let c = sample_ppp(&Window::centered_ball(3, 5.0), 0.0, 9).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn invalid_windows_are_rejected() {
        let bad = Window::Box {
            lower: vec![0.0, 1.0],
            upper: vec![1.0, 1.0],
        };
        assert!(matches!(sample_ppp(&bad, 1.0, 0), Err(PercoError::Config(_))));
        let bad = Window::centered_ball(2, 0.0);
        assert!(matches!(sample_ppp(&bad, 1.0, 0), Err(PercoError::Config(_))));
        assert!(matches!(
            sample_ppp(&Window::centered_ball(9, 1.0), 1.0, 0),
            Err(PercoError::Config(_))
        ));
    }

    #[test]
    fn budget_overflow_reports_required_count() {
        let budget = Budget {
            max_points: 100.0,
            ..Budget::default()
        };
        let err = sample_ppp_budgeted(&Window::cube(2, 0.0, 10.0), 5.0, 1, &budget).unwrap_err();
        match err {
            PercoError::Resource { required, .. } => assert!((required - 500.0).abs() < 1e-9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reproducible_and_inside_window() {
        let w = Window::centered_ball(3, 2.0);
        let a = sample_ppp(&w, 3.0, 77).unwrap();
        let b = sample_ppp(&w, 3.0, 77).unwrap();
        assert_eq!(a, b);
        assert!(a.len() > 0);
        for p in a.points() {
            assert!(w.contains(p.position));
            assert!(p.mark > 0.0 && p.mark < 1.0);
        }
        let c = sample_ppp(&w, 3.0, 78).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn ball_mean_count_matches_lambda_volume() {
        // 10 000 replicates, mean within 3σ of 10π
        let w = Window::centered_ball(2, 1.0);
        let n = 10_000;
        let total: usize = (0..n)
            .map(|k| sample_ppp(&w, 10.0, k as u64).unwrap().len())
            .sum();
        let mean = total as f64 / n as f64;
        let expected = 10.0 * PI;
        let sigma = (expected / n as f64).sqrt();
        assert!((mean - expected).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn retain_subset_keeps_ids() {
        let c = sample_ppp(&Window::cube(2, 0.0, 5.0), 2.0, 3).unwrap();
        let keep: Vec<bool> = (0..c.len()).map(|i| i % 3 == 0).collect();
        let s = c.retain_subset(&keep, 1.0);
        for (k, i) in (0..c.len()).filter(|i| i % 3 == 0).enumerate() {
            assert_eq!(s.id(k), c.id(i));
            assert_eq!(s.position(k), c.position(i));
            assert_eq!(s.mark(k), c.mark(i));
        }
    }
}
