//! Quadrature rules on the unit sphere `S²`.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::crossed_symbol::random_unit_vector;
use crate::error::{Error, Result};

/// Nodes on `S²` with positive weights summing to `4π`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereQuadrature {
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    degree: usize,
    label: String,
}

fn octahedral_orbit(a: f64, b: f64, c: f64) -> Vec<[f64; 3]> {
    // All sign changes and permutations of (a, b, c), without duplicates.
    let mut out: Vec<[f64; 3]> = Vec::new();
    let perms = [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ];
    for p in perms {
        for signs in 0..8 {
            let v = [
                if signs & 1 == 0 { p[0] } else { -p[0] },
                if signs & 2 == 0 { p[1] } else { -p[1] },
                if signs & 4 == 0 { p[2] } else { -p[2] },
            ];
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

impl SphereQuadrature {
    /// Lebedev rules with 6, 14 or 26 nodes (exact through degree 3, 5 and 7).
    pub fn lebedev(nodes: usize) -> Result<Self> {
        let s2 = 1.0 / 2f64.sqrt();
        let s3 = 1.0 / 3f64.sqrt();
        let (orbits, degree): (Vec<(f64, [f64; 3])>, usize) = match nodes {
            6 => (vec![(1.0 / 6.0, [1.0, 0.0, 0.0])], 3),
            14 => (vec![(1.0 / 15.0, [1.0, 0.0, 0.0]), (3.0 / 40.0, [s3, s3, s3])], 5),
            26 => (
                vec![
                    (1.0 / 21.0, [1.0, 0.0, 0.0]),
                    (4.0 / 105.0, [s2, s2, 0.0]),
                    (9.0 / 280.0, [s3, s3, s3]),
                ],
                7,
            ),
            _ => {
                return Err(Error::precondition(format!(
                    "Lebedev rules are available with 6, 14 or 26 nodes, not {nodes}"
                )))
            }
        };
        let mut pts = Vec::new();
        let mut weights = Vec::new();
        for (w, generator) in orbits {
            for v in octahedral_orbit(generator[0], generator[1], generator[2]) {
                pts.push(v);
                weights.push(4.0 * PI * w);
            }
        }
        Ok(Self {
            nodes: pts,
            weights,
            degree,
            label: format!("lebedev{nodes}"),
        })
    }

    /// Product of Gauss–Legendre in `cos θ` and the uniform rule in `φ`, exact for
    /// polynomials of degree `≤ degree`.
    pub fn gauss_product(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::precondition("quadrature degree must be positive"));
        }
        let n_theta = degree / 2 + 1;
        let n_phi = degree + 1;
        let rule = GaussLegendre::new(NonZeroUsize::new(n_theta).expect("positive"));
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for &(t, w) in rule.as_node_weight_pairs() {
            let s = (1.0 - t * t).max(0.0).sqrt();
            for j in 0..n_phi {
                let phi = TAU * (j as f64 + 0.5) / n_phi as f64;
                nodes.push([s * phi.cos(), s * phi.sin(), t]);
                weights.push(w * TAU / n_phi as f64);
            }
        }
        Ok(Self {
            nodes,
            weights,
            degree,
            label: format!("gauss{n_theta}x{n_phi}"),
        })
    }

    /// Equal-weight random points (Monte Carlo; exactness degree 0), reproducible from a seed.
    pub fn random(count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::precondition("a sample set needs at least one point"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nodes: Vec<[f64; 3]> = (0..count).map(|_| random_unit_vector(&mut rng)).collect();
        Ok(Self {
            nodes,
            weights: vec![4.0 * PI / count as f64; count],
            degree: 0,
            label: format!("random{count}(seed={seed})"),
        })
    }

    /// Node list.
    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    /// Weights, in node order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Polynomial exactness degree.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True for an empty rule (never produced by the constructors).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Short description.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// `Σ w_i h(ξ_i)`, summed pairwise.
    pub fn integrate(&self, h: impl Fn(&[f64; 3]) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * h(x))
            .collect();
        crate::linalg::pairwise_sum(&terms)
    }
}
