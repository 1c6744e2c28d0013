//! Gauss-Laguerre quadrature for ∫₀^∞ e^{-t} f(t) dt.
//!
//! Nodes and weights come from the Golub-Welsch construction: the Jacobi
//! matrix of the Laguerre polynomials (diag 2k+1, off-diag k+1) is symmetric
//! tridiagonal, its eigenvalues are the nodes and the squared first components
//! of the normalized eigenvectors are the weights (μ₀ = ∫e^{-t}dt = 1).

use crate::error::{Error, Result};
use crate::linalg::SymTridiag;

#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::Domain("quadrature order must be at least 1".into()));
        }
        if order > 180 {
            // beyond this the small weights underflow and buy nothing
            return Err(Error::Domain(format!("quadrature order {order} too large (max 180)")));
        }
        let d: Vec<f64> = (0..order).map(|k| 2.0 * k as f64 + 1.0).collect();
        let e: Vec<f64> = (1..order).map(|k| k as f64).collect();
        let jacobi = SymTridiag::new(d, e);
        let (lo, hi) = jacobi.spectrum_bounds();
        let pairs = jacobi.eigenpairs_in_window(lo - 1.0, hi + 1.0)?;
        if pairs.len() != order {
            return Err(Error::Accuracy(format!(
                "Golub-Welsch found {} of {order} nodes",
                pairs.len()
            )));
        }
        let nodes: Vec<f64> = pairs.iter().map(|p| p.value).collect();
        let weights: Vec<f64> = pairs.iter().map(|p| p.vector[0] * p.vector[0]).collect();
        Ok(GaussLaguerre { nodes, weights })
    }

    /// ∫₀^∞ e^{-t} f(t) dt.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = crate::linalg::KahanSum::new();
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(t));
        }
        acc.value()
    }
}
