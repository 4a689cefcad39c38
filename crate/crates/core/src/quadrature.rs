//! Gauss-Hermite quadrature for expectations against the standard normal
//! density.
//!
//! Nodes and weights are for the physicists' weight exp(-x^2); an order-n
//! rule integrates polynomials of degree 2n-1 times the weight exactly.
//! Expectations E[h(g)] with g ~ N(0,1) use the change of variables
//! g = sqrt(2) x, giving E[h(g)] = (1/sqrt(pi)) sum_i w_i h(sqrt(2) x_i).

use crate::error::{Error, Result};

/// Default rule order; integrates Gaussian moments up to degree 127 exactly,
/// far beyond the degree-12 integrands of the cubic observation model.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Compute the order-n rule by Newton iteration on the orthonormal
    /// Hermite recurrence, with the standard asymptotic initial guesses.
    pub fn new(order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::Validation("quadrature order must be >= 1".into()));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        let mut z = 0.0_f64;
        for i in 0..m {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..200 {
                // Orthonormal Hermite recurrence under weight exp(-x^2):
                // p_0 = pi^(-1/4), p_j = z sqrt(2/j) p_{j-1} - sqrt((j-1)/j) p_{j-2}.
                let mut p1 = std::f64::consts::PI.powf(-0.25);
                let mut p2 = 0.0;
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() <= 1e-15 * (1.0 + z.abs()) {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        // Odd order: center node is exactly zero.
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(GaussHermite { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral of f against exp(-x^2) over the real line.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// E[h(g)] for g ~ N(0, 1).
    pub fn gaussian_expectation<F: Fn(f64) -> f64>(&self, h: F) -> f64 {
        let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
        self.integrate(|x| h(std::f64::consts::SQRT_2 * x)) * inv_sqrt_pi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for order in [4, 16, 64, 96] {
            let q = GaussHermite::new(order).unwrap();
            let total: f64 = q.weights.iter().sum();
            assert!(
                (total - std::f64::consts::PI.sqrt()).abs() < 1e-12,
                "order {order}: sum = {total}"
            );
        }
    }

    #[test]
    fn gaussian_moments_exact() {
        let q = GaussHermite::new(DEFAULT_ORDER).unwrap();
        // E[g^(2k)] = (2k-1)!!
        let expected = [
            (2, 1.0),
            (4, 3.0),
            (6, 15.0),
            (8, 105.0),
            (10, 945.0),
            (12, 10395.0),
        ];
        for (p, want) in expected {
            let got = q.gaussian_expectation(|g| g.powi(p));
            assert!(
                (got - want).abs() <= 1e-10 * want,
                "E[g^{p}] = {got}, want {want}"
            );
        }
        let odd = q.gaussian_expectation(|g| g.powi(7));
        assert!(odd.abs() < 1e-9, "odd moment = {odd}");
    }

    #[test]
    fn smooth_non_polynomial() {
        // E[cos g] = exp(-1/2).
        let q = GaussHermite::new(DEFAULT_ORDER).unwrap();
        let got = q.gaussian_expectation(|g| g.cos());
        assert!((got - (-0.5_f64).exp()).abs() < 1e-13, "got {got}");
    }

    #[test]
    fn zero_order_rejected() {
        assert!(GaussHermite::new(0).is_err());
    }
}
