//! Uniform cell grid over a window's bounding box.

use crate::geometry::dist2;
use crate::ppp::PointCloud;

pub(crate) struct CellGrid {
    pub side: f64,
    lower: Vec<f64>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    /// point indices sorted by cell
    order: Vec<u32>,
    /// `order[starts[c]..starts[c+1]]` are the points of cell c
    starts: Vec<u32>,
    /// linear indices of nonempty cells, ascending
    pub nonempty: Vec<usize>,
}

impl CellGrid {
    pub fn new(cloud: &PointCloud, side: f64) -> Self {
        let d = cloud.dim();
        let (lower, upper) = cloud.window().bounding_box();
        let dims: Vec<usize> = (0..d)
            .map(|a| (((upper[a] - lower[a]) / side).ceil() as usize).max(1))
            .collect();
        let mut strides = vec![1usize; d];
        for a in 1..d {
            strides[a] = strides[a - 1] * dims[a - 1];
        }
        let ncells = strides[d - 1] * dims[d - 1];
        let mut grid = CellGrid {
            side,
            lower,
            dims,
            strides,
            order: Vec::new(),
            starts: vec![0; ncells + 1],
            nonempty: Vec::new(),
        };
        let cell_of: Vec<usize> = (0..cloud.len())
            .map(|i| grid.cell_index(cloud.position(i)))
            .collect();
        for &c in &cell_of {
            grid.starts[c + 1] += 1;
        }
        for c in 0..ncells {
            grid.starts[c + 1] += grid.starts[c];
        }
        let mut fill = grid.starts.clone();
        grid.order = vec![0; cloud.len()];
        for (i, &c) in cell_of.iter().enumerate() {
            grid.order[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid.nonempty = (0..ncells)
            .filter(|&c| grid.starts[c + 1] > grid.starts[c])
            .collect();
        grid
    }

    fn axis_cell(&self, a: usize, x: f64) -> usize {
        let c = ((x - self.lower[a]) / self.side).floor();
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(self.dims[a] - 1)
        }
    }

    pub fn cell_index(&self, x: &[f64]) -> usize {
        (0..x.len())
            .map(|a| self.axis_cell(a, x[a]) * self.strides[a])
            .sum()
    }

    pub fn coords(&self, mut c: usize) -> Vec<usize> {
        let d = self.dims.len();
        let mut out = vec![0; d];
        for a in (0..d).rev() {
            out[a] = c / self.strides[a];
            c %= self.strides[a];
        }
        out
    }

    pub fn members(&self, c: usize) -> &[u32] {
        &self.order[self.starts[c] as usize..self.starts[c + 1] as usize]
    }

    /// Lower bound on the distance between points of two cells.
    pub fn min_distance(&self, a: &[usize], b: &[usize]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let gap = x.abs_diff(y).saturating_sub(1) as f64 * self.side;
                gap * gap
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Cell reached from `base` by `offset`, if inside the grid.
    pub fn offset_cell(&self, base: &[usize], offset: &[i64]) -> Option<usize> {
        let mut idx = 0;
        for a in 0..base.len() {
            let c = base[a] as i64 + offset[a];
            if c < 0 || c >= self.dims[a] as i64 {
                return None;
            }
            idx += c as usize * self.strides[a];
        }
        Some(idx)
    }

    /// Counts points within `radius` (closed) of `center`, skipping two indices.
    pub fn count_within(
        &self,
        cloud: &PointCloud,
        center: &[f64],
        radius: f64,
        skip: (u32, u32),
    ) -> usize {
        let d = center.len();
        let lo: Vec<usize> = (0..d).map(|a| self.axis_cell(a, center[a] - radius)).collect();
        let hi: Vec<usize> = (0..d).map(|a| self.axis_cell(a, center[a] + radius)).collect();
        let r2 = radius * radius;
        let mut cur = lo.clone();
        let mut count = 0;
        loop {
            let idx: usize = cur.iter().zip(&self.strides).map(|(c, s)| c * s).sum();
            for &k in self.members(idx) {
                if k != skip.0 && k != skip.1 && dist2(cloud.position(k as usize), center) <= r2 {
                    count += 1;
                }
            }
            // odometer increment
            let mut a = 0;
            loop {
                if a == d {
                    return count;
                }
                if cur[a] < hi[a] {
                    cur[a] += 1;
                    break;
                }
                cur[a] = lo[a];
                a += 1;
            }
        }
    }
}

/// All offsets in [-k, k]^d.
pub(crate) fn full_offsets(d: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-k; d];
    loop {
        out.push(cur.clone());
        let mut a = 0;
        loop {
            if a == d {
                return out;
            }
            if cur[a] < k {
                cur[a] += 1;
                break;
            }
            cur[a] = -k;
            a += 1;
        }
    }
}
