//! 2D projections of solution sets for landscape plots.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub points: Vec<[f64; 2]>,
    /// Variance fraction of each reported component, largest first.
    pub explained: Vec<f64>,
    pub loadings: Vec<Vec<f64>>,
}

/// Standardizes the columns, then projects on the two leading principal
/// axes. Components with negligible variance are not reported and their
/// coordinate is 0.
pub fn pca_project<P: AsRef<[f64]>>(solutions: &[P]) -> Result<Projection> {
    let n = solutions.len();
    if n < 3 {
        return Err(Error::Degenerate(format!("PCA needs at least 3 solutions, got {n}")));
    }
    let dims = solutions[0].as_ref().len();
    let mut x = DMatrix::<f64>::zeros(n, dims);
    for d in 0..dims {
        let col: Vec<f64> = solutions.iter().map(|s| s.as_ref()[d]).collect();
        let mean = col.iter().sum::<f64>() / n as f64;
        let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        for (i, v) in col.iter().enumerate() {
            x[(i, d)] = if sd > 0.0 { (v - mean) / sd } else { 0.0 };
        }
    }
    let cov = (x.transpose() * &x) / n as f64;
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..dims).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let total: f64 = eig.eigenvalues.iter().map(|v| v.max(0.0)).sum();

    let mut explained = Vec::new();
    let mut loadings = Vec::new();
    if total > 0.0 {
        for &c in order.iter().take(2) {
            let lambda = eig.eigenvalues[c].max(0.0);
            if lambda <= 1e-12 * total {
                break;
            }
            let mut v: Vec<f64> = eig.eigenvectors.column(c).iter().cloned().collect();
            let lead = v
                .iter()
                .cloned()
                .fold(0.0f64, |m, e| if e.abs() > m.abs() { e } else { m });
            if lead < 0.0 {
                v.iter_mut().for_each(|e| *e = -*e);
            }
            explained.push(lambda / total);
            loadings.push(v);
        }
    }
    let points = (0..n)
        .map(|i| {
            let mut p = [0.0; 2];
            for (k, v) in loadings.iter().enumerate() {
                p[k] = (0..dims).map(|d| x[(i, d)] * v[d]).sum();
            }
            p
        })
        .collect();
    Ok(Projection {
        points,
        explained,
        loadings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub bandwidth: f64,
    pub size: usize,
    /// Row-major densities, `density[row][col]`, rows along y.
    pub density: Vec<Vec<f64>>,
}

impl KdeGrid {
    pub fn cell_area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min) / (self.size * self.size) as f64
    }

    /// Riemann sum of the density over the grid.
    pub fn mass(&self) -> f64 {
        self.density.iter().flatten().sum::<f64>() * self.cell_area()
    }

    /// Center of cell `(row, col)`.
    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        let dx = (self.x_max - self.x_min) / self.size as f64;
        let dy = (self.y_max - self.y_min) / self.size as f64;
        (
            self.x_min + (col as f64 + 0.5) * dx,
            self.y_min + (row as f64 + 0.5) * dy,
        )
    }
}

/// Scott's rule for an isotropic 2D kernel: `σ · n^(−1/6)`, σ the mean of
/// the per-axis standard deviations. Falls back to 1 for a point cloud with
/// no spread.
pub fn scott_bandwidth(points: &[[f64; 2]]) -> f64 {
    let n = points.len() as f64;
    if points.is_empty() {
        return 1.0;
    }
    let sd = |k: usize| {
        let m = points.iter().map(|p| p[k]).sum::<f64>() / n;
        (points.iter().map(|p| (p[k] - m).powi(2)).sum::<f64>() / n).sqrt()
    };
    let sigma = 0.5 * (sd(0) + sd(1));
    if sigma > 0.0 {
        sigma * n.powf(-1.0 / 6.0)
    } else {
        1.0
    }
}

/// Gaussian KDE evaluated at cell centers of a `size × size` grid spanning
/// the data padded by four bandwidths.
pub fn kde_grid(points: &[[f64; 2]], bandwidth: Option<f64>, size: usize) -> Result<KdeGrid> {
    if points.is_empty() {
        return Err(Error::Empty("points"));
    }
    if size == 0 {
        return Err(Error::Degenerate("grid size must be positive".into()));
    }
    let h = bandwidth.unwrap_or_else(|| scott_bandwidth(points));
    if !(h > 0.0) {
        return Err(Error::Degenerate(format!("bandwidth must be positive, got {h}")));
    }
    let lo = |k: usize| points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min) - 4.0 * h;
    let hi = |k: usize| points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max) + 4.0 * h;
    let mut grid = KdeGrid {
        x_min: lo(0),
        x_max: hi(0),
        y_min: lo(1),
        y_max: hi(1),
        bandwidth: h,
        size,
        density: vec![vec![0.0; size]; size],
    };
    let norm = 1.0 / (2.0 * std::f64::consts::PI * h * h * points.len() as f64);
    for row in 0..size {
        for col in 0..size {
            let (cx, cy) = grid.cell_center(row, col);
            let s: f64 = points
                .iter()
                .map(|p| {
                    let r2 = (p[0] - cx).powi(2) + (p[1] - cy).powi(2);
                    (-0.5 * r2 / (h * h)).exp()
                })
                .sum();
            grid.density[row][col] = norm * s;
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_has_one_component() {
        let pts: Vec<[f64; 4]> = (0..10)
            .map(|i| {
                let t = i as f64;
                [t, 2.0 * t + 1.0, -t, 0.5 * t]
            })
            .collect();
        let p = pca_project(&pts).unwrap();
        assert_eq!(p.explained.len(), 1);
        assert!((p.explained[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn constant_cloud_reports_nothing() {
        let p = pca_project(&[[1.0, 1.0, 1.0, 1.0]; 4]).unwrap();
        assert!(p.explained.is_empty());
        assert!(p.points.iter().all(|q| *q == [0.0, 0.0]));
    }

    #[test]
    fn blob_peak_and_mass() {
        let pts: Vec<[f64; 2]> = (0..9)
            .map(|i| [((i % 3) as f64 - 1.0) * 0.01, ((i / 3) as f64 - 1.0) * 0.01])
            .collect();
        let g = kde_grid(&pts, None, 64).unwrap();
        assert!((g.mass() - 1.0).abs() < 0.01);
        let (mut best, mut at) = (0.0, (0, 0));
        for r in 0..64 {
            for c in 0..64 {
                if g.density[r][c] > best {
                    best = g.density[r][c];
                    at = (r, c);
                }
            }
        }
        let (x, y) = g.cell_center(at.0, at.1);
        let cell = (g.x_max - g.x_min) / 64.0;
        assert!(x.abs() <= cell && y.abs() <= cell);
    }
}
