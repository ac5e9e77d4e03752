//! Euclidean helpers: norms, d-ball volumes and two-ball intersection volumes.

use statrs::function::beta::beta_reg;
use std::f64::consts::PI;

#[inline]
pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Volume of the unit ball in dimension `d`: V_0 = 1, V_1 = 2, V_d = 2π/d · V_{d-2}.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / d as f64 * unit_ball_volume(d - 2),
    }
}

/// Surface area σ_d of the unit sphere in R^d (so that ∫_{R^d} f(|z|) dz = σ_d ∫ f(ρ) ρ^{d-1} dρ).
pub fn unit_sphere_area(d: usize) -> f64 {
    d as f64 * unit_ball_volume(d)
}

pub fn ball_volume(d: usize, radius: f64) -> f64 {
    unit_ball_volume(d) * radius.powi(d as i32)
}

/// Volume of the cap of height `h` cut from a d-ball of radius `radius`.
pub fn cap_volume(d: usize, radius: f64, h: f64) -> f64 {
    if h <= 0.0 {
        return 0.0;
    }
    let full = ball_volume(d, radius);
    if h >= 2.0 * radius {
        return full;
    }
    if h > radius {
        return full - cap_volume(d, radius, 2.0 * radius - h);
    }
    let x = ((2.0 * radius * h - h * h) / (radius * radius)).clamp(0.0, 1.0);
    0.5 * full * beta_reg((d as f64 + 1.0) / 2.0, 0.5, x)
}

/// Volume of B(0, r1) ∩ B(z, r2) with |z| = `sep`.
pub fn lens_volume(d: usize, r1: f64, r2: f64, sep: f64) -> f64 {
    if r1 <= 0.0 || r2 <= 0.0 || sep >= r1 + r2 {
        return 0.0;
    }
    if sep <= (r1 - r2).abs() {
        return ball_volume(d, r1.min(r2));
    }
    // distance from the first center to the radical hyperplane
    let a = (sep * sep + r1 * r1 - r2 * r2) / (2.0 * sep);
    let h1 = r1 - a;
    let h2 = r2 - (sep - a);
    cap_volume(d, r1, h1) + cap_volume(d, r2, h2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn ball_volumes() {
        assert!(close(unit_ball_volume(2), PI, 1e-15));
        assert!(close(unit_ball_volume(3), 4.0 * PI / 3.0, 1e-15));
        assert!(close(ball_volume(2, 2.0), 4.0 * PI, 1e-15));
        assert!(close(unit_ball_volume(4), PI * PI / 2.0, 1e-15));
        assert!(close(unit_sphere_area(3), 4.0 * PI, 1e-15));
    }

    #[test]
    fn lens_matches_closed_forms() {
        // d = 1: interval overlap
        assert!(close(lens_volume(1, 2.0, 1.0, 2.5), 0.5, 1e-12));
        // d = 2: circle-circle intersection area
        let (r, big_r, s) = (1.0f64, 1.5f64, 1.2f64);
        let circle = r * r * ((s * s + r * r - big_r * big_r) / (2.0 * s * r)).acos()
            + big_r * big_r * ((s * s + big_r * big_r - r * r) / (2.0 * s * big_r)).acos()
            - 0.5
                * ((-s + r + big_r) * (s + r - big_r) * (s - r + big_r) * (s + r + big_r)).sqrt();
        assert!(close(lens_volume(2, r, big_r, s), circle, 1e-12));
        // d = 3: π(r1+r2−s)²(s²+2s(r1+r2)−3(r1−r2)²)/(12s)
        let sphere = PI * (r + big_r - s).powi(2)
            * (s * s + 2.0 * s * (r + big_r) - 3.0 * (r - big_r).powi(2))
            / (12.0 * s);
        assert!(close(lens_volume(3, r, big_r, s), sphere, 1e-12));
        // containment and disjointness
        assert!(close(lens_volume(3, 1.0, 5.0, 1.0), ball_volume(3, 1.0), 1e-15));
        assert_eq!(lens_volume(2, 1.0, 1.0, 2.0), 0.0);
    }
}
