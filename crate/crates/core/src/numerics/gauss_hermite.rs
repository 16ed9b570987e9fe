//! Gauss-Hermite rules for expectations over a standard normal variable.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights with `sum_i w_i f(x_i) ~ E[f(Z)]`, `Z ~ N(0, 1)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Golub-Welsch construction from the probabilists' Hermite recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let jacobi = DMatrix::from_fn(n, n, |r, c| {
            if r + 1 == c || c + 1 == r {
                (r.max(c) as f64).sqrt()
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        GaussHermite {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_normal_moments() {
        let gh = GaussHermite::new(12);
        let moment = |k: i32| -> f64 {
            gh.nodes
                .iter()
                .zip(&gh.weights)
                .map(|(x, w)| w * x.powi(k))
                .sum()
        };
        assert!((moment(0) - 1.0).abs() < 1e-14);
        assert!(moment(1).abs() < 1e-14);
        assert!((moment(2) - 1.0).abs() < 1e-13);
        assert!((moment(4) - 3.0).abs() < 1e-12);
        assert!((moment(8) - 105.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_kernel_expectation() {
        // E[exp(-c Z^2 / 2)] = (1 + c)^(-1/2)
        let gh = GaussHermite::new(80);
        let c = 3.0;
        let e: f64 = gh
            .nodes
            .iter()
            .zip(&gh.weights)
            .map(|(x, w)| w * (-0.5 * c * x * x).exp())
            .sum();
        assert!((e - (1.0f64 + c).powf(-0.5)).abs() < 1e-12);
    }
}
