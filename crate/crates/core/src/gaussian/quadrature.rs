//! Gauss–Hermite quadrature for the standard Gaussian measure.
//!
//! Nodes come from the Golub–Welsch eigenproblem of the Jacobi matrix of the
//! probabilists' Hermite recurrence, then get one Newton polish on `h_q`.
//! Weights use `w_i = 1 / (q · h_{q-1}(x_i)²)`.

use nalgebra::DMatrix;

use super::expansion::{hermite_values, HermiteExpansion};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Largest supported per-axis order.
pub const MAX_ORDER: usize = 40;
/// Per-axis order used when none is configured.
pub const DEFAULT_ORDER: usize = 24;

/// A one-dimensional rule, tensorized on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 || order > MAX_ORDER {
            return Err(Error::Configuration(format!(
                "quadrature order must lie in 1..={MAX_ORDER}, got {order}"
            )));
        }
        let q = order;
        let mut jacobi = DMatrix::<f64>::zeros(q, q);
        for k in 1..q {
            let b = (k as f64).sqrt();
            jacobi[(k - 1, k)] = b;
            jacobi[(k, k - 1)] = b;
        }
        let mut nodes: Vec<f64> = jacobi.symmetric_eigen().eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        let mut weights = Vec::with_capacity(q);
        for x in nodes.iter_mut() {
            // h_q'(x) = √q h_{q-1}(x)
            for _ in 0..2 {
                let h = hermite_values(*x, q as u32);
                let step = h[q] / ((q as f64).sqrt() * h[q - 1]);
                if step.is_finite() {
                    *x -= step;
                }
            }
            let h = hermite_values(*x, q as u32);
            weights.push(1.0 / (q as f64 * h[q - 1] * h[q - 1]));
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Per-axis polynomial degree integrated exactly: `2q - 1`.
    pub fn exact_degree(&self) -> usize {
        2 * self.order() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate_1d(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(*x));
        }
        acc.value()
    }

    /// Tensor rule over `dims` axes. Points are visited in odometer order so
    /// the summation order is fixed.
    pub fn integrate(&self, dims: usize, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        if dims == 0 {
            return f(&[]);
        }
        let q = self.order();
        let mut idx = vec![0usize; dims];
        let mut point: Vec<f64> = vec![self.nodes[0]; dims];
        let mut acc = CompensatedSum::new();
        loop {
            let w: f64 = idx.iter().map(|&k| self.weights[k]).product();
            acc.add(w * f(&point));
            let mut axis = 0;
            loop {
                idx[axis] += 1;
                if idx[axis] < q {
                    point[axis] = self.nodes[idx[axis]];
                    break;
                }
                idx[axis] = 0;
                point[axis] = self.nodes[0];
                axis += 1;
                if axis == dims {
                    return acc.value();
                }
            }
        }
    }

    /// `‖g‖_p` under `γ_n`, integrating only over the coordinates `g` depends on.
    pub fn lp_norm(&self, g: &HermiteExpansion, p: f64) -> f64 {
        let active = g.active_coordinates();
        let maxdeg = g.maxdeg();
        // Hermite values at every node, shared by all points.
        let table: Vec<Vec<f64>> = self
            .nodes
            .iter()
            .map(|&x| hermite_values(x, maxdeg))
            .collect();
        let q = self.order();
        let mut idx = vec![0usize; active.len()];
        let mut acc = CompensatedSum::new();
        let mut axis_node = vec![0usize; g.dim()];
        loop {
            for (slot, &axis) in active.iter().enumerate() {
                axis_node[axis] = idx[slot];
            }
            let w: f64 = idx.iter().map(|&k| self.weights[k]).product();
            let v = g.evaluate_with(|axis, k| table[axis_node[axis]][k as usize]);
            acc.add(w * v.abs().powf(p));
            let mut slot = 0;
            loop {
                if slot == idx.len() {
                    return acc.value().max(0.0).powf(1.0 / p);
                }
                idx[slot] += 1;
                if idx[slot] < q {
                    break;
                }
                idx[slot] = 0;
                slot += 1;
            }
        }
    }
}
