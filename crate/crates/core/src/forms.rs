//! The quadratic form of signature (2, n) on ℝ^{n+2}.
//!
//! Two coordinate systems are used throughout. The *diagonal* basis has
//! `q = -u² - v² + x₁² + … + xₙ²`. The *split* basis pairs the first two
//! coordinates with the last two, `q = x₁x_{d} + x₂x_{d-1} + x₃² + … + x_{d-2}²`
//! with `d = n + 2`, so that `e₁` and `e_d` are isotropic.
//!
//! The bilinear form is obtained by polarization,
//! `⟨u, v⟩ = (q(u + v) - q(u) - q(v)) / 2`, which puts `1/2` on the
//! off-diagonal entries of the split Gram matrix.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Absolute band around zero for Gram eigenvalues, in a Euclidean-orthonormal frame.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Relative singular-value threshold for linear independence.
pub const RANK_TOL: f64 = 1e-9;

/// Spatial dimension `n ≥ 2`; the ambient space is ℝ^{n+2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientDims(usize);

impl AmbientDims {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(GeometryError::InvalidDimension(n));
        }
        Ok(Self(n))
    }

    pub fn n(self) -> usize {
        self.0
    }

    pub fn ambient(self) -> usize {
        self.0 + 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormBasis {
    Diagonal,
    Split,
}

impl std::str::FromStr for FormBasis {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "diagonal" | "diag" => Ok(FormBasis::Diagonal),
            "split" => Ok(FormBasis::Split),
            other => Err(GeometryError::Parse(format!("unknown basis tag `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVector {
    pub coords: DVector<f64>,
    pub basis: FormBasis,
}

impl AmbientVector {
    pub fn new(coords: DVector<f64>, basis: FormBasis) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Self { coords, basis }
    }

    pub fn diagonal(coords: &[f64]) -> Self {
        Self::new(DVector::from_column_slice(coords), FormBasis::Diagonal)
    }

    pub fn split(coords: &[f64]) -> Self {
        Self::new(DVector::from_column_slice(coords), FormBasis::Split)
    }

    /// Standard basis vector `e_{index+1}` (zero-based index).
    pub fn basis_vector(dim: usize, index: usize, basis: FormBasis) -> Self {
        let mut c = DVector::zeros(dim);
        c[index] = 1.0;
        Self::new(c, basis)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn q(&self) -> f64 {
        quadratic(&self.coords, self.basis)
    }
}

/// Signature `(neg, pos, zero)` of a restricted form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub neg: usize,
    pub pos: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(neg: usize, pos: usize, zero: usize) -> Self {
        Self { neg, pos, zero }
    }

    pub fn dim(&self) -> usize {
        self.neg + self.pos + self.zero
    }
}

/// Gram matrix of the form in the given basis on ℝ^{dim}.
pub fn gram_matrix(basis: FormBasis, dim: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(dim, dim);
    match basis {
        FormBasis::Diagonal => {
            for i in 0..dim {
                g[(i, i)] = if i < 2 { -1.0 } else { 1.0 };
            }
        }
        FormBasis::Split => {
            let last = dim - 1;
            for (a, b) in [(0, last), (1, last - 1)] {
                g[(a, b)] = 0.5;
                g[(b, a)] = 0.5;
            }
            for i in 2..dim - 2 {
                g[(i, i)] = 1.0;
            }
        }
    }
    g
}

/// The quadratic form evaluated directly from its defining formula.
pub fn quadratic(x: &DVector<f64>, basis: FormBasis) -> f64 {
    let d = x.len();
    match basis {
        FormBasis::Diagonal => -x[0] * x[0] - x[1] * x[1] + x.rows(2, d - 2).norm_squared(),
        FormBasis::Split => {
            x[0] * x[d - 1] + x[1] * x[d - 2] + (2..d - 2).map(|i| x[i] * x[i]).sum::<f64>()
        }
    }
}

/// Bilinear form on raw coordinates of one basis.
pub fn form(x: &DVector<f64>, y: &DVector<f64>, basis: FormBasis) -> f64 {
    let d = x.len();
    match basis {
        FormBasis::Diagonal => -x[0] * y[0] - x[1] * y[1] + x.rows(2, d - 2).dot(&y.rows(2, d - 2)),
        FormBasis::Split => {
            0.5 * (x[0] * y[d - 1] + x[d - 1] * y[0] + x[1] * y[d - 2] + x[d - 2] * y[1])
                + (2..d - 2).map(|i| x[i] * y[i]).sum::<f64>()
        }
    }
}

pub fn inner_product(u: &AmbientVector, v: &AmbientVector) -> Result<f64> {
    if u.basis != v.basis {
        return Err(GeometryError::BasisMismatch);
    }
    if u.dim() != v.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    if u.dim() < 4 {
        return Err(GeometryError::InvalidDimension(u.dim().saturating_sub(2)));
    }
    Ok(form(&u.coords, &v.coords, u.basis))
}

/// Signature of the form restricted to the span of `basis_vectors`.
///
/// The span is first given a Euclidean-orthonormal frame; eigenvalues of the
/// Gram matrix in that frame within [`DEGENERACY_TOL`] of zero count as zero.
pub fn restricted_signature(basis_vectors: &[AmbientVector]) -> Result<Signature> {
    let first = basis_vectors
        .first()
        .ok_or_else(|| GeometryError::InvalidParameter("empty vector list".into()))?;
    let dim = first.dim();
    for v in basis_vectors {
        if v.basis != first.basis {
            return Err(GeometryError::BasisMismatch);
        }
        if v.dim() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
    }
    let cols: Vec<DVector<f64>> = basis_vectors.iter().map(|v| v.coords.clone()).collect();
    let frame = orthonormal_frame(&cols)?;
    Ok(signature_of_frame(&frame, first.basis))
}

/// Euclidean-orthonormal frame (as matrix columns) of the span of `cols`.
pub fn orthonormal_frame(cols: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    let m = DMatrix::from_columns(cols);
    let svd = m.clone().svd(true, false);
    let s = &svd.singular_values;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if smax == 0.0 || smin / smax < RANK_TOL {
        return Err(GeometryError::DependentVectors {
            ratio: if smax == 0.0 { 0.0 } else { smin / smax },
        });
    }
    let u = svd.u.expect("left singular vectors requested");
    Ok(u.columns(0, cols.len()).into_owned())
}

/// Signature of the form on the span of an orthonormal frame.
pub fn signature_of_frame(frame: &DMatrix<f64>, basis: FormBasis) -> Signature {
    let j = gram_matrix(basis, frame.nrows());
    let g = frame.transpose() * j * frame;
    let g = (&g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(g);
    let mut sig = Signature::new(0, 0, 0);
    for &e in eig.eigenvalues.iter() {
        if e.abs() <= DEGENERACY_TOL {
            sig.zero += 1;
        } else if e < 0.0 {
            sig.neg += 1;
        } else {
            sig.pos += 1;
        }
    }
    sig
}

/// Matrix sending split coordinates to diagonal coordinates.
///
/// Columns: `e₁ ↦ (u + x₁)/2`, `e_d ↦ (x₁ - u)/2`, `e₂ ↦ (v + x₂)/2`,
/// `e_{d-1} ↦ (x₂ - v)/2`, and the middle vectors go to `x₃, …, xₙ`.
pub fn split_to_diagonal(dim: usize) -> DMatrix<f64> {
    let mut t = DMatrix::zeros(dim, dim);
    let last = dim - 1;
    // diagonal indices: u = 0, v = 1, x1 = 2, x2 = 3, xk = k + 1
    t[(0, 0)] = 0.5;
    t[(2, 0)] = 0.5;
    t[(0, last)] = -0.5;
    t[(2, last)] = 0.5;
    t[(1, 1)] = 0.5;
    t[(3, 1)] = 0.5;
    t[(1, last - 1)] = -0.5;
    t[(3, last - 1)] = 0.5;
    for i in 2..dim - 2 {
        t[(i + 2, i)] = 1.0;
    }
    t
}

/// Inverse of [`split_to_diagonal`].
pub fn diagonal_to_split(dim: usize) -> DMatrix<f64> {
    let mut t = DMatrix::zeros(dim, dim);
    let last = dim - 1;
    t[(0, 0)] = 1.0;
    t[(0, 2)] = 1.0;
    t[(last, 0)] = -1.0;
    t[(last, 2)] = 1.0;
    t[(1, 1)] = 1.0;
    t[(1, 3)] = 1.0;
    t[(last - 1, 1)] = -1.0;
    t[(last - 1, 3)] = 1.0;
    for i in 2..dim - 2 {
        t[(i, i + 2)] = 1.0;
    }
    t
}

/// Coordinate change matrix from `from` to `to`.
pub fn basis_change_matrix(from: FormBasis, to: FormBasis, dim: usize) -> DMatrix<f64> {
    match (from, to) {
        (FormBasis::Split, FormBasis::Diagonal) => split_to_diagonal(dim),
        (FormBasis::Diagonal, FormBasis::Split) => diagonal_to_split(dim),
        _ => DMatrix::identity(dim, dim),
    }
}

pub fn change_basis(v: &AmbientVector, to: FormBasis) -> AmbientVector {
    if v.basis == to {
        return v.clone();
    }
    let m = basis_change_matrix(v.basis, to, v.dim());
    AmbientVector::new(m * &v.coords, to)
}
