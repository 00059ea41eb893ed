//! Explicit volume-preserving torus diffeomorphisms.
//!
//! Every system is an integer matrix A in GL(n,Z) composed with a finite
//! sequence of trigonometric shears, f(x) = (S_m ∘ … ∘ S_1)(A x mod 1).
//! Each shear moves a single coordinate by an amount that does not depend
//! on that coordinate, so the inverse, the Jacobian, the homotopy class
//! and the Jacobian determinant are all exact.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::det_int;

const TWO_PI: f64 = std::f64::consts::TAU;

/// A point on the flat torus T^n; every coordinate lives in [0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: DVector<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords: DVector::from_vec(coords) }.reduced()
    }

    pub fn from_vector(coords: DVector<f64>) -> Self {
        Self { coords }.reduced()
    }

    fn reduced(mut self) -> Self {
        for v in self.coords.iter_mut() {
            *v = reduce_mod_1(*v);
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }
}

fn reduce_mod_1(x: f64) -> f64 {
    let mut v = x.rem_euclid(1.0);
    if v >= 1.0 {
        v = 0.0;
    }
    v
}

/// Distance on the torus: per coordinate, the shorter way around the
/// circle; equal to the minimum over all integer translates.
pub fn torus_distance(a: &TorusPoint, b: &TorusPoint) -> f64 {
    assert_eq!(a.dim(), b.dim(), "torus_distance dimension mismatch");
    let mut sum = 0.0;
    for i in 0..a.dim() {
        let d = (a.coords[i] - b.coords[i]).abs();
        let d = d.min(1.0 - d);
        sum += d * d;
    }
    sum.sqrt()
}

/// Jacobian direction selector: the map itself or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// One trigonometric shear S(x) = x + δ·sin(2π m·x + φ)·e_axis.
///
/// The frequency vector must vanish on the shear's own axis, which makes
/// the map unipotent (determinant exactly 1) and gives the closed-form
/// inverse S⁻¹(x) = x − δ·sin(2π m·x + φ)·e_axis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShearFactor {
    pub axis: usize,
    pub frequency: Vec<i64>,
    pub amplitude: f64,
    pub phase: f64,
}

impl ShearFactor {
    pub fn new(axis: usize, frequency: Vec<i64>, amplitude: f64, phase: f64) -> Self {
        Self { axis, frequency, amplitude, phase: phase.rem_euclid(TWO_PI) }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.axis >= dim {
            return Err(Error::InvalidInput(format!(
                "shear axis {} out of range for dim {dim}",
                self.axis
            )));
        }
        if self.frequency.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.frequency.len() });
        }
        if self.frequency[self.axis] != 0 {
            return Err(Error::ShearFrequencyOnAxis {
                axis: self.axis,
                value: self.frequency[self.axis],
            });
        }
        if !self.amplitude.is_finite() || !self.phase.is_finite() {
            return Err(Error::InvalidInput("shear amplitude/phase must be finite".into()));
        }
        Ok(())
    }

    fn angle(&self, x: &DVector<f64>) -> f64 {
        let dot: f64 = self
            .frequency
            .iter()
            .zip(x.iter())
            .map(|(&m, &v)| m as f64 * v)
            .sum();
        TWO_PI * dot + self.phase
    }

    fn apply(&self, x: &mut DVector<f64>) {
        let s = self.amplitude * self.angle(x).sin();
        x[self.axis] = reduce_mod_1(x[self.axis] + s);
    }

    fn apply_inverse(&self, x: &mut DVector<f64>) {
        // m·x does not involve the sheared coordinate, so the same angle
        // inverts the shear exactly.
        let s = self.amplitude * self.angle(x).sin();
        x[self.axis] = reduce_mod_1(x[self.axis] - s);
    }

    /// I + 2πδ·cos(angle)·e_axis mᵀ, evaluated at the given point.
    fn jacobian(&self, x: &DVector<f64>, dim: usize) -> DMatrix<f64> {
        let c = TWO_PI * self.amplitude * self.angle(x).cos();
        let mut j = DMatrix::identity(dim, dim);
        for (col, &m) in self.frequency.iter().enumerate() {
            j[(self.axis, col)] += c * m as f64;
        }
        j
    }

    /// Jacobian of the inverse shear at the given point (unipotent inverse).
    fn jacobian_inverse(&self, x: &DVector<f64>, dim: usize) -> DMatrix<f64> {
        let c = TWO_PI * self.amplitude * self.angle(x).cos();
        let mut j = DMatrix::identity(dim, dim);
        for (col, &m) in self.frequency.iter().enumerate() {
            j[(self.axis, col)] -= c * m as f64;
        }
        j
    }
}

/// Serializable description of a torus system.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemSpec {
    pub dim: usize,
    pub matrix: Vec<Vec<i64>>,
    #[serde(default)]
    pub shears: Vec<ShearFactor>,
}

/// A volume-preserving torus diffeomorphism: integer matrix followed by
/// shears. Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct TorusSystem {
    dim: usize,
    matrix: DMatrix<i64>,
    inverse_matrix: DMatrix<i64>,
    matrix_f: DMatrix<f64>,
    inverse_matrix_f: DMatrix<f64>,
    det: i64,
    shears: Vec<ShearFactor>,
}

impl TorusSystem {
    pub fn new(matrix_rows: Vec<Vec<i64>>, shears: Vec<ShearFactor>) -> Result<Self> {
        let dim = matrix_rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        for row in &matrix_rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
        }
        let matrix = DMatrix::from_fn(dim, dim, |i, j| matrix_rows[i][j]);
        let det128 = det_int(&matrix);
        if det128.unsigned_abs() != 1 {
            let det = i64::try_from(det128).unwrap_or(i64::MAX);
            return Err(Error::NotUnimodular { det });
        }
        let det = det128 as i64;
        for shear in &shears {
            shear.validate(dim)?;
        }
        let inverse_matrix = integer_inverse(&matrix, det);
        let matrix_f = matrix.map(|v| v as f64);
        let inverse_matrix_f = inverse_matrix.map(|v| v as f64);
        Ok(Self { dim, matrix, inverse_matrix, matrix_f, inverse_matrix_f, det, shears })
    }

    pub fn from_spec(spec: &SystemSpec) -> Result<Self> {
        if spec.matrix.len() != spec.dim {
            return Err(Error::SpecParse(format!(
                "matrix has {} rows but dim = {}",
                spec.matrix.len(),
                spec.dim
            )));
        }
        Self::new(spec.matrix.clone(), spec.shears.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SystemSpec =
            serde_json::from_str(text).map_err(|e| Error::SpecParse(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> SystemSpec {
        SystemSpec {
            dim: self.dim,
            matrix: (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self.matrix[(i, j)]).collect())
                .collect(),
            shears: self.shears.clone(),
        }
    }

    /// Hex digest of the canonical spec JSON; identifies a system in reports.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_string(&self.to_spec()).expect("spec serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut out = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn matrix(&self) -> &DMatrix<i64> {
        &self.matrix
    }

    pub fn matrix_f(&self) -> &DMatrix<f64> {
        &self.matrix_f
    }

    pub fn inverse_matrix(&self) -> &DMatrix<i64> {
        &self.inverse_matrix
    }

    pub fn shears(&self) -> &[ShearFactor] {
        &self.shears
    }

    pub fn is_linear(&self) -> bool {
        self.shears.is_empty()
    }

    fn check_point(&self, x: &TorusPoint) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.dim() });
        }
        Ok(())
    }

    /// f(x) = (S_m ∘ … ∘ S_1)(A x) reduced mod 1 after every factor.
    pub fn eval_map(&self, x: &TorusPoint) -> Result<TorusPoint> {
        self.check_point(x)?;
        let mut w = &self.matrix_f * x.coords();
        for v in w.iter_mut() {
            *v = reduce_mod_1(*v);
        }
        for shear in &self.shears {
            shear.apply(&mut w);
        }
        Ok(TorusPoint::from_vector(w))
    }

    /// Exact compositional inverse A⁻¹(S_1⁻¹ ∘ … ∘ S_m⁻¹)(x) mod 1.
    pub fn eval_inverse(&self, x: &TorusPoint) -> Result<TorusPoint> {
        self.check_point(x)?;
        let mut w = x.coords().clone();
        for shear in self.shears.iter().rev() {
            shear.apply_inverse(&mut w);
        }
        let mut y = &self.inverse_matrix_f * w;
        for v in y.iter_mut() {
            *v = reduce_mod_1(*v);
        }
        Ok(TorusPoint::from_vector(y))
    }

    /// Derivative of f (or of f⁻¹) at x, as the chain-rule product of the
    /// matrix and the shear Jacobians at the correct intermediate points.
    pub fn jacobian(&self, x: &TorusPoint, direction: Direction) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        match direction {
            Direction::Forward => {
                let mut w = &self.matrix_f * x.coords();
                for v in w.iter_mut() {
                    *v = reduce_mod_1(*v);
                }
                let mut jac = self.matrix_f.clone();
                for shear in &self.shears {
                    jac = shear.jacobian(&w, self.dim) * jac;
                    shear.apply(&mut w);
                }
                Ok(jac)
            }
            Direction::Backward => {
                let mut w = x.coords().clone();
                let mut jac = DMatrix::identity(self.dim, self.dim);
                for shear in self.shears.iter().rev() {
                    jac = shear.jacobian_inverse(&w, self.dim) * jac;
                    shear.apply_inverse(&mut w);
                }
                Ok(&self.inverse_matrix_f * jac)
            }
        }
    }

    /// The lift F of f evaluated without reduction mod 1, so that
    /// F(x + z) − F(x) = A z for integer z. Used to examine the homotopy
    /// class of the system.
    pub fn eval_lift(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let mut w = &self.matrix_f * x;
        for shear in &self.shears {
            let s = shear.amplitude * shear.angle(&w).sin();
            w[shear.axis] += s;
        }
        Ok(w)
    }

    /// Per-axis bound on the integer frequencies appearing in the entries
    /// of x ↦ D_x f, when those entries are trig polynomials in x.
    ///
    /// This holds when no shear reads a coordinate written by an earlier
    /// shear; with nesting the entries are no longer trig polynomials and
    /// `None` is returned.
    pub fn jacobian_mode_bound(&self) -> Option<Vec<i64>> {
        let mut written: Vec<bool> = vec![false; self.dim];
        let mut bound = vec![0i64; self.dim];
        for shear in &self.shears {
            for (i, &m) in shear.frequency.iter().enumerate() {
                if m != 0 && written[i] {
                    return None;
                }
            }
            // frequency of cos(2π m·(Ax) + φ) as a function of x is Aᵀm
            for j in 0..self.dim {
                let mut f = 0i64;
                for (i, &m) in shear.frequency.iter().enumerate() {
                    f += self.matrix[(i, j)] * m;
                }
                bound[j] += f.abs();
            }
            written[shear.axis] = true;
        }
        Some(bound)
    }
}

fn integer_inverse(m: &DMatrix<i64>, det: i64) -> DMatrix<i64> {
    let n = m.nrows();
    if n == 1 {
        return DMatrix::from_element(1, 1, det);
    }
    let mut inv = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // cofactor expansion: inverse[(i,j)] = sign * minor(j,i) / det
            let mut minor = DMatrix::zeros(n - 1, n - 1);
            let mut r = 0;
            for a in 0..n {
                if a == j {
                    continue;
                }
                let mut c = 0;
                for b in 0..n {
                    if b == i {
                        continue;
                    }
                    minor[(r, c)] = m[(a, b)];
                    c += 1;
                }
                r += 1;
            }
            let sign = if (i + j) % 2 == 0 { 1i128 } else { -1 };
            inv[(i, j)] = (sign * det_int(&minor) * det as i128) as i64;
        }
    }
    inv
}


#[cfg(test)]
impl TorusSystem {
    fn mode_bound_for_tests(&self) -> Option<Vec<i64>> {
        self.jacobian_mode_bound()
    }
}
