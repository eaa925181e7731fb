//! Points of the cosphere bundle `S*T³ = T³ × S²`, tangent vectors, and the
//! codifferential action of an integer-linear torus map.

use std::f64::consts::TAU;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension of the base torus.
pub const DIM: usize = 3;

/// A point `(x, ξ)` of `S*T³`: `x` reduced into `[0, 2π)³`, `ξ` a unit covector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    x: Vector3<f64>,
    xi: Vector3<f64>,
}

impl PhasePoint {
    /// Builds a phase point, reducing `x` modulo `2π` and normalizing `ξ`.
    pub fn new(x: [f64; 3], xi: [f64; 3]) -> Result<Self> {
        let xi = Vector3::from(xi);
        let norm = xi.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::domain(format!("covector {xi:?} cannot be normalized")));
        }
        Ok(Self::from_parts(Vector3::from(x), xi / norm))
    }

    /// Internal constructor from already-normalized data (reduces `x` only).
    pub(crate) fn from_parts(x: Vector3<f64>, xi: Vector3<f64>) -> Self {
        Self {
            x: x.map(reduce_angle),
            xi,
        }
    }

    /// Base point in `[0, 2π)³`.
    pub fn x(&self) -> &Vector3<f64> {
        &self.x
    }

    /// Unit covector.
    pub fn xi(&self) -> &Vector3<f64> {
        &self.xi
    }
}

fn reduce_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A tangent vector to `S*T³` at a point `(x, ξ)`: `dx ∈ ℝ³` and `dξ ⊥ ξ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tangent {
    pub dx: Vector3<f64>,
    pub dxi: Vector3<f64>,
}

impl Tangent {
    /// The coordinate direction `∂/∂x_j`.
    pub fn along_x(j: usize) -> Self {
        let mut dx = Vector3::zeros();
        dx[j] = 1.0;
        Self {
            dx,
            dxi: Vector3::zeros(),
        }
    }

    /// A fibre direction `dξ` (assumed tangent to the sphere).
    pub fn along_xi(dxi: Vector3<f64>) -> Self {
        Self {
            dx: Vector3::zeros(),
            dxi,
        }
    }
}

/// Orthonormal tangent frame `(t₁, t₂)` of `S²` at `ξ` with `t₁ × t₂ = ξ` (outward normal).
pub fn sphere_frame(xi: &Vector3<f64>) -> [Vector3<f64>; 2] {
    let helper = if xi.x.abs() < 0.6 {
        Vector3::x()
    } else if xi.y.abs() < 0.6 {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let t1 = (helper - xi * xi.dot(&helper)).normalize();
    let t2 = xi.cross(&t1);
    [t1, t2]
}

/// The standard 5-frame of `T³ × S²` at `z`: `∂x₁, ∂x₂, ∂x₃, t₁, t₂`.
pub fn full_frame(z: &PhasePoint) -> [Tangent; 5] {
    let [t1, t2] = sphere_frame(z.xi());
    [
        Tangent::along_x(0),
        Tangent::along_x(1),
        Tangent::along_x(2),
        Tangent::along_xi(t1),
        Tangent::along_xi(t2),
    ]
}

const CACHED_POWERS: i32 = 8;

/// The torus diffeomorphism `g(x) = Ax mod 2π` for an integer matrix with `|det A| = 1`,
/// together with its codifferential `∂g(x, ξ) = (Ax, normalize(A^{-T}ξ))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 3]; 3]", into = "[[i64; 3]; 3]")]
pub struct ShiftMap {
    a: [[i64; 3]; 3],
    #[serde(skip)]
    powers: Vec<(Matrix3<f64>, Matrix3<f64>)>,
}

impl TryFrom<[[i64; 3]; 3]> for ShiftMap {
    type Error = Error;
    fn try_from(a: [[i64; 3]; 3]) -> Result<Self> {
        ShiftMap::new(a)
    }
}

impl From<ShiftMap> for [[i64; 3]; 3] {
    fn from(s: ShiftMap) -> Self {
        s.a
    }
}

impl ShiftMap {
    /// Validates `|det A| = 1` and precomputes the powers `A^l`, `A^{-Tl}` for `|l| ≤ 8`.
    pub fn new(a: [[i64; 3]; 3]) -> Result<Self> {
        let det = det3(&a);
        if det.abs() != 1 {
            return Err(Error::precondition(format!(
                "shift matrix must satisfy |det A| = 1, got det = {det}"
            )));
        }
        let af = Matrix3::from_fn(|i, j| a[i][j] as f64);
        let a_inv = int_inverse(&a, det);
        let ainv_f = Matrix3::from_fn(|i, j| a_inv[i][j] as f64);
        let codiff = ainv_f.transpose();
        let codiff_inv = af.transpose();
        let mut powers = Vec::with_capacity((2 * CACHED_POWERS + 1) as usize);
        for l in -CACHED_POWERS..=CACHED_POWERS {
            let (base, co) = if l >= 0 {
                (af, codiff)
            } else {
                (ainv_f, codiff_inv)
            };
            let mut p = Matrix3::identity();
            let mut c = Matrix3::identity();
            for _ in 0..l.unsigned_abs() {
                p = base * p;
                c = co * c;
            }
            powers.push((p, c));
        }
        Ok(Self { a, powers })
    }

    /// Arnold's cat map `[[2,1,0],[1,1,0],[0,0,1]]`.
    pub fn cat() -> Self {
        Self::new([[2, 1, 0], [1, 1, 0], [0, 0, 1]]).expect("cat map is unimodular")
    }

    /// The identity map.
    pub fn identity() -> Self {
        Self::new([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).expect("identity is unimodular")
    }

    /// The integer matrix `A`.
    pub fn matrix(&self) -> [[i64; 3]; 3] {
        self.a
    }

    /// Torus dimension (always 3).
    pub fn dim(&self) -> usize {
        DIM
    }

    /// `A` equals its transpose.
    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.a[i][j] == self.a[j][i]))
    }

    fn power(&self, l: i32) -> (Matrix3<f64>, Matrix3<f64>) {
        if l.abs() <= CACHED_POWERS {
            return self.powers[(l + CACHED_POWERS) as usize];
        }
        let step = if l > 0 { self.power(1) } else { self.power(-1) };
        let mut p = Matrix3::identity();
        let mut c = Matrix3::identity();
        for _ in 0..l.unsigned_abs() {
            p = step.0 * p;
            c = step.1 * c;
        }
        (p, c)
    }

    /// `A^l` as a real matrix.
    pub fn base_power(&self, l: i32) -> Matrix3<f64> {
        self.power(l).0
    }

    /// `(A^{-T})^l` as a real matrix.
    pub fn codiff_power(&self, l: i32) -> Matrix3<f64> {
        self.power(l).1
    }

    /// `(∂g)^l z`.
    pub fn apply(&self, z: &PhasePoint, l: i32) -> PhasePoint {
        if l == 0 {
            return *z;
        }
        let (p, c) = self.power(l);
        PhasePoint::from_parts(p * z.x, (c * z.xi).normalize())
    }

    /// `(∂g)^l z` together with the pushforward of the tangent vectors.
    pub fn push(&self, z: &PhasePoint, tangents: &[Tangent], l: i32) -> (PhasePoint, Vec<Tangent>) {
        if l == 0 {
            return (*z, tangents.to_vec());
        }
        let (p, c) = self.power(l);
        let v = c * z.xi;
        let norm = v.norm();
        let vhat = v / norm;
        let pushed = tangents
            .iter()
            .map(|t| {
                let w = c * t.dxi;
                Tangent {
                    dx: p * t.dx,
                    dxi: (w - vhat * vhat.dot(&w)) / norm,
                }
            })
            .collect();
        (PhasePoint::from_parts(p * z.x, vhat), pushed)
    }

    /// Action of the shift operator `T = g*` on Fourier modes: `k ↦ Aᵀk`.
    pub fn act_on_mode(&self, k: [i64; 3]) -> [i64; 3] {
        let a = &self.a;
        [
            a[0][0] * k[0] + a[1][0] * k[1] + a[2][0] * k[2],
            a[0][1] * k[0] + a[1][1] * k[1] + a[2][1] * k[2],
            a[0][2] * k[0] + a[1][2] * k[1] + a[2][2] * k[2],
        ]
    }
}

fn det3(a: &[[i64; 3]; 3]) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn int_inverse(a: &[[i64; 3]; 3], det: i64) -> [[i64; 3]; 3] {
    let mut inv = [[0i64; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            // Cofactor C_{ji} divided by det (det = ±1).
            let (r0, r1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            *entry = sign * minor * det;
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_power_undoes_power() {
        let g = ShiftMap::cat();
        let z = PhasePoint::new([0.3, 1.7, 5.0], [0.2, -0.5, 0.8]).unwrap();
        let w = g.apply(&g.apply(&z, 2), -2);
        assert!((w.xi() - z.xi()).norm() < 1e-12);
        let dx = w.x() - z.x();
        assert!(dx.iter().all(|d| (d / TAU - (d / TAU).round()).abs() < 1e-12));
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(ShiftMap::new([[2, 0, 0], [0, 1, 0], [0, 0, 1]]).is_err());
    }

    #[test]
    fn frame_is_outward_oriented() {
        let xi = Vector3::new(0.3, -0.4, 0.866).normalize();
        let [t1, t2] = sphere_frame(&xi);
        assert!((t1.cross(&t2) - xi).norm() < 1e-14);
    }

    #[test]
    fn pushforward_matches_finite_difference() {
        let g = ShiftMap::cat();
        let z = PhasePoint::new([0.1, 0.2, 0.3], [0.6, 0.0, 0.8]).unwrap();
        let [t1, _] = sphere_frame(z.xi());
        let (_, pushed) = g.push(&z, &[Tangent::along_xi(t1)], 1);
        let h = 1e-6;
        let zp = PhasePoint::new([0.1, 0.2, 0.3], (z.xi() + t1 * h).into()).unwrap();
        let zm = PhasePoint::new([0.1, 0.2, 0.3], (z.xi() - t1 * h).into()).unwrap();
        let fd = (g.apply(&zp, 1).xi() - g.apply(&zm, 1).xi()) / (2.0 * h);
        assert!((fd - pushed[0].dxi).norm() < 1e-6);
    }
}
