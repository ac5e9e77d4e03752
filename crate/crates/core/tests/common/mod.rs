#![allow(dead_code)]

use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson};

/// p-value of the χ² goodness-of-fit test of `counts` against Poisson(mean),
/// with bins merged until each expects at least 5 observations.
pub fn poisson_gof(counts: &[usize], mean: f64) -> f64 {
    let n = counts.len() as f64;
    let pois = Poisson::new(mean).unwrap();
    let max = counts.iter().copied().max().unwrap_or(0);
    // (upper k of the bin, expected, observed)
    let mut bins: Vec<(usize, f64, f64)> = Vec::new();
    let (mut exp, mut obs) = (0.0, 0.0);
    let mut cum = 0.0;
    for k in 0..=max {
        let p = pois.pmf(k as u64);
        cum += p;
        exp += n * p;
        obs += counts.iter().filter(|&&c| c == k).count() as f64;
        if exp >= 5.0 && n * (1.0 - cum) >= 5.0 {
            bins.push((k, exp, obs));
            exp = 0.0;
            obs = 0.0;
        }
    }
    // the last bin takes the whole upper tail
    exp += n * (1.0 - cum);
    match bins.last_mut() {
        Some(last) if exp < 5.0 => {
            last.1 += exp;
            last.2 += obs;
        }
        _ => bins.push((max, exp, obs)),
    }
    let stat: f64 = bins.iter().map(|(_, e, o)| (o - e).powi(2) / e).sum();
    let df = (bins.len() - 1).max(1) as f64;
    1.0 - ChiSquared::new(df).unwrap().cdf(stat)
}

/// χ² p-value of observed counts against equal expected counts.
pub fn uniform_gof(observed: &[usize]) -> f64 {
    let n: usize = observed.iter().sum();
    let e = n as f64 / observed.len() as f64;
    let stat: f64 = observed.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    1.0 - ChiSquared::new((observed.len() - 1) as f64).unwrap().cdf(stat)
}

/// Component labels by breadth-first search, numbered in order of the
/// smallest vertex.
pub fn bfs_labels(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if label[w] == usize::MAX {
                    label[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}
