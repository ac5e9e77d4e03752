//! Covering a ball of radius q by unit balls.

use crate::geometry::norm;

#[derive(Debug, Clone, PartialEq)]
pub struct Covering {
    pub count: usize,
    /// centers of the unit balls (for radius q; scale by r for B(0, q·r))
    pub centers: Vec<Vec<f64>>,
}

/// A valid (not minimal) covering of the closed ball B(0, q) by closed unit
/// balls: centers of a cubic grid whose cells have half-diagonal ≤ 1, kept
/// when their cell meets the ball.
pub fn covering_number(q: f64, d: usize) -> Covering {
    assert!(q >= 1.0 && d >= 1, "covering needs q >= 1 and d >= 1");
    if q <= 1.0 {
        return Covering {
            count: 1,
            centers: vec![vec![0.0; d]],
        };
    }
    let m = (q * (d as f64).sqrt() - 1e-9).ceil().max(1.0) as usize;
    let h = 2.0 * q / m as f64;
    let axis: Vec<f64> = (0..m).map(|i| -q + h * (i as f64 + 0.5)).collect();
    let mut centers = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let c: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
        // distance from the origin to the cell around c
        let gap: Vec<f64> = c.iter().map(|x| (x.abs() - h / 2.0).max(0.0)).collect();
        if norm(&gap) <= q {
            centers.push(c);
        }
        let mut a = 0;
        loop {
            if a == d {
                return Covering {
                    count: centers.len(),
                    centers,
                };
            }
            idx[a] += 1;
            if idx[a] < m {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_ball_covers_itself() {
        assert_eq!(covering_number(1.0, 3).count, 1);
    }

    #[test]
    fn interval_of_radius_three() {
        let c = covering_number(3.0, 1);
        assert_eq!(c.centers, vec![vec![-2.0], vec![0.0], vec![2.0]]);
    }

    #[test]
    fn dense_samples_are_covered() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 1..=3 {
            for q in [1.5, 2.0, 3.0, 5.0] {
                let cov = covering_number(q, d);
                for _ in 0..20_000 {
                    let x: Vec<f64> = loop {
                        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-q..q)).collect();
                        if norm(&x) <= q {
                            break x;
                        }
                    };
                    assert!(cov.centers.iter().any(|c| dist(c, &x) <= 1.0 + 1e-12));
                }
                // boundary points too
                for _ in 0..2000 {
                    let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let n = norm(&v);
                    if n == 0.0 {
                        continue;
                    }
                    let x: Vec<f64> = v.iter().map(|a| a * q / n).collect();
                    assert!(cov.centers.iter().any(|c| dist(c, &x) <= 1.0 + 1e-12));
                }
            }
        }
    }
}
