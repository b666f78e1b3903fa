//! Elements of O(2,n), their Cartan decomposition `g = k·a(λ,μ)·l`, and the
//! attracting/repelling poles that drive the projective dynamics.
//!
//! All decompositions are computed in the diagonal basis, where the maximal
//! compact subgroup is the block group O(2)×O(n) of Euclidean-orthogonal
//! form-preserving matrices.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::forms::{basis_change_matrix, gram_matrix, FormBasis};
use crate::projective::ProjectivePoint;

/// Relative tolerance on `‖gᵀJg − J‖` for user-supplied matrices.
pub const GROUP_TOL: f64 = 1e-9;
/// Gap at which a sequence is treated as numerically P₁-divergent.
pub const PROXIMAL_GAP: f64 = 25.0;
/// Below this gap the poles of a single element are not well defined.
pub const POLE_GAP_MIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: DMatrix<f64>,
    basis: FormBasis,
    form_residual: f64,
}

/// Scale-aware residual `‖gᵀJg − J‖_F / (‖J‖_F · max(1, ‖g‖²_F / ‖J‖²_F))`.
pub fn form_residual(matrix: &DMatrix<f64>, basis: FormBasis) -> f64 {
    let j = gram_matrix(basis, matrix.nrows());
    let jn = j.norm();
    let defect = (matrix.transpose() * &j * matrix - &j).norm();
    let scale = (matrix.norm_squared() / (jn * jn)).max(1.0);
    defect / (jn * scale)
}

impl GroupElement {
    pub fn validate(matrix: DMatrix<f64>, basis: FormBasis) -> Result<Self> {
        let d = matrix.nrows();
        if matrix.ncols() != d {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                found: matrix.ncols(),
            });
        }
        if d < 4 {
            return Err(GeometryError::InvalidDimension(d.saturating_sub(2)));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NotInGroup {
                residual: f64::INFINITY,
            });
        }
        let residual = form_residual(&matrix, basis);
        if residual > GROUP_TOL {
            return Err(GeometryError::NotInGroup { residual });
        }
        Ok(Self {
            matrix,
            basis,
            form_residual: residual,
        })
    }

    /// Wraps a product of validated elements without re-checking the tolerance.
    pub(crate) fn trusted(matrix: DMatrix<f64>, basis: FormBasis) -> Self {
        let form_residual = form_residual(&matrix, basis);
        Self {
            matrix,
            basis,
            form_residual,
        }
    }

    pub fn identity(dim: usize, basis: FormBasis) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
            basis,
            form_residual: 0.0,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn basis(&self) -> FormBasis {
        self.basis
    }

    pub fn form_residual(&self) -> f64 {
        self.form_residual
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Spatial dimension `n`.
    pub fn n(&self) -> usize {
        self.dim() - 2
    }

    pub fn to_basis(&self, basis: FormBasis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let d = self.dim();
        let to = basis_change_matrix(self.basis, basis, d);
        let from = basis_change_matrix(basis, self.basis, d);
        Self {
            matrix: to * &self.matrix * from,
            basis,
            form_residual: self.form_residual,
        }
    }

    /// Matrix in the diagonal basis.
    pub fn diagonal_matrix(&self) -> DMatrix<f64> {
        match self.basis {
            FormBasis::Diagonal => self.matrix.clone(),
            FormBasis::Split => self.to_basis(FormBasis::Diagonal).matrix,
        }
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let rhs = other.to_basis(self.basis);
        Self::trusted(&self.matrix * rhs.matrix, self.basis)
    }

    /// `J⁻¹ gᵀ J`, exact for group elements.
    pub fn inverse(&self) -> GroupElement {
        let j = gram_matrix(self.basis, self.dim());
        let jinv = j.clone().try_inverse().expect("form is non-degenerate");
        Self {
            matrix: jinv * self.matrix.transpose() * j,
            basis: self.basis,
            form_residual: self.form_residual,
        }
    }

    pub fn pow(&self, k: u32) -> GroupElement {
        let mut out = GroupElement::identity(self.dim(), self.basis);
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    /// Action on coordinates expressed in the element's own basis.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    /// Action on diagonal-basis coordinates.
    pub fn apply_diagonal(&self, v: &DVector<f64>) -> DVector<f64> {
        match self.basis {
            FormBasis::Diagonal => &self.matrix * v,
            FormBasis::Split => self.diagonal_matrix() * v,
        }
    }

    /// Image under O(2,n) ⊂ O(2,n+1), fixing the added last diagonal coordinate.
    pub fn extend_fixing_last(&self) -> GroupElement {
        let m = self.diagonal_matrix();
        let d = m.nrows();
        let mut out = DMatrix::identity(d + 1, d + 1);
        out.view_mut((0, 0), (d, d)).copy_from(&m);
        Self {
            matrix: out,
            basis: FormBasis::Diagonal,
            form_residual: self.form_residual,
        }
    }

    /// Largest absolute entry difference against another element.
    pub fn max_abs_diff(&self, other: &GroupElement) -> f64 {
        let rhs = other.to_basis(self.basis);
        (&self.matrix - rhs.matrix).amax()
    }
}

/// The Weyl-chamber matrix `diag(e^λ, e^μ, 1, …, 1, e^{-μ}, e^{-λ})` of the
/// split basis, for spatial dimension `n`.
pub fn weyl_element(n: usize, lambda: f64, mu: f64) -> GroupElement {
    let d = n + 2;
    let mut m = DMatrix::identity(d, d);
    m[(0, 0)] = lambda.exp();
    m[(1, 1)] = mu.exp();
    m[(d - 2, d - 2)] = (-mu).exp();
    m[(d - 1, d - 1)] = (-lambda).exp();
    GroupElement::trusted(m, FormBasis::Split)
}

/// The same element in diagonal coordinates: two commuting boosts, in the
/// `(u, x₁)` plane with rapidity `λ` and in the `(v, x₂)` plane with rapidity `μ`.
fn weyl_diagonal(d: usize, lambda: f64, mu: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(d, d);
    for (t, x, r) in [(0, 2, lambda), (1, 3, mu)] {
        m[(t, t)] = r.cosh();
        m[(x, x)] = r.cosh();
        m[(t, x)] = r.sinh();
        m[(x, t)] = r.sinh();
    }
    m
}

/// Block element `diag(R(θ), B)` of O(2)×O(n) in diagonal coordinates.
pub fn compact_element(theta: f64, spatial: &DMatrix<f64>) -> GroupElement {
    let n = spatial.nrows();
    let d = n + 2;
    let mut m = DMatrix::zeros(d, d);
    m[(0, 0)] = theta.cos();
    m[(0, 1)] = -theta.sin();
    m[(1, 0)] = theta.sin();
    m[(1, 1)] = theta.cos();
    m.view_mut((2, 2), (n, n)).copy_from(spatial);
    GroupElement::trusted(m, FormBasis::Diagonal)
}

/// Rotation by `angle` in the plane of the first two coordinates of ℝⁿ.
pub fn plane_rotation(n: usize, angle: f64) -> DMatrix<f64> {
    let mut r = DMatrix::identity(n, n);
    r[(0, 0)] = angle.cos();
    r[(0, 1)] = -angle.sin();
    r[(1, 0)] = angle.sin();
    r[(1, 1)] = angle.cos();
    r
}

/// Haar-random element of SO(n) (QR of a Gaussian matrix, sign-fixed).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col.neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        let mut col = q.column_mut(0);
        col.neg_mut();
    }
    q
}

/// Random element of the identity component of K = SO(2)×SO(n).
pub fn random_compact<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GroupElement {
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    compact_element(theta, &random_rotation(rng, n))
}

/// Factors of `g = k · a(λ, μ) · l` with `k, l ∈ O(2)×O(n)`.
#[derive(Debug, Clone)]
pub struct CartanFactors {
    pub k: GroupElement,
    pub lambda: f64,
    pub mu: f64,
    pub l: GroupElement,
}

impl CartanFactors {
    /// `k · a · l` in diagonal coordinates.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d = self.k.dim();
        self.k.matrix() * weyl_diagonal(d, self.lambda, self.mu) * self.l.matrix()
    }

    pub fn gap(&self) -> f64 {
        self.lambda - self.mu
    }
}

/// Polar decomposition `g = k₁·s` in diagonal coordinates, `k₁` projected onto
/// the block group O(2)×O(n).
fn polar(g: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let d = g.nrows();
    // scaled Newton iteration X ← (γX + X⁻ᵀ/γ)/2
    let mut k1 = g.clone();
    let mut scaled = true;
    for _ in 0..100 {
        let inv_t = k1
            .clone()
            .try_inverse()
            .ok_or_else(|| GeometryError::CartanFailure("singular matrix".into()))?
            .transpose();
        let gamma = if scaled {
            (inv_t.norm() / k1.norm()).sqrt()
        } else {
            1.0
        };
        let next = (&k1 * gamma + inv_t / gamma) * 0.5;
        let step = (&next - &k1).norm();
        k1 = next;
        if step < 1e-3 {
            scaled = false;
        }
        if step <= 4.0 * f64::EPSILON * k1.norm() {
            break;
        }
    }
    let s0 = k1.transpose() * g;
    let s = (&s0 + s0.transpose()) * 0.5;
    let mut k = DMatrix::zeros(d, d);
    let time = nearest_orthogonal(&k1.view((0, 0), (2, 2)).into_owned());
    let space = nearest_orthogonal(&k1.view((2, 2), (d - 2, d - 2)).into_owned());
    k.view_mut((0, 0), (2, 2)).copy_from(&time);
    k.view_mut((2, 2), (d - 2, d - 2)).copy_from(&space);
    let leak = k1
        .view((0, 2), (2, d - 2))
        .amax()
        .max(k1.view((2, 0), (d - 2, 2)).amax());
    if leak > 1e-6 {
        return Err(GeometryError::CartanFailure(format!(
            "orthogonal polar factor is not block diagonal (leak {leak:.2e})"
        )));
    }
    Ok((k, s))
}

fn nearest_orthogonal(m: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = m.clone().svd(true, true);
    svd.u.unwrap() * svd.v_t.unwrap()
}

/// Extends orthonormal columns to an orthonormal basis of ℝ^{dim}.
fn complete_orthonormal(cols: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let candidates = cols
        .iter()
        .cloned()
        .chain((0..dim).map(|i| DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 })));
    for c in candidates {
        let mut v = c;
        for _ in 0..2 {
            for b in &basis {
                let p = b.dot(&v);
                v -= b * p;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
        if basis.len() == dim {
            break;
        }
    }
    DMatrix::from_columns(&basis)
}

/// Cartan decomposition of any element of O(2,n).
///
/// For elements outside the identity component the compact factors simply
/// carry the extra reflections; exponents are unaffected.
pub fn cartan_decompose(g: &GroupElement) -> Result<CartanFactors> {
    let gd = g.diagonal_matrix();
    let d = gd.nrows();
    let n = d - 2;
    let (k1, s) = polar(&gd)?;

    let c = s.view((0, 2), (2, n)).into_owned();
    let svd = c.svd(true, true);
    let (u, vt) = match (svd.u, svd.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(GeometryError::CartanFailure("SVD did not converge".into())),
    };
    let mut order = [0usize, 1];
    if svd.singular_values[1] > svd.singular_values[0] {
        order = [1, 0];
    }
    let sv = [svd.singular_values[order[0]], svd.singular_values[order[1]]];
    let u = DMatrix::from_columns(&[
        u.column(order[0]).into_owned(),
        u.column(order[1]).into_owned(),
    ]);
    let vcols = [
        vt.row(order[0]).transpose().into_owned(),
        vt.row(order[1]).transpose().into_owned(),
    ];
    let v = complete_orthonormal(&vcols, n);

    let lambda = sv[0].asinh();
    let mu = sv[1].asinh();
    if !(lambda.is_finite() && mu.is_finite()) {
        return Err(GeometryError::CartanFailure("non-finite exponents".into()));
    }

    let mut m = DMatrix::zeros(d, d);
    m.view_mut((0, 0), (2, 2)).copy_from(&u);
    m.view_mut((2, 2), (n, n)).copy_from(&v);

    let factors = CartanFactors {
        k: GroupElement::trusted(&k1 * &m, FormBasis::Diagonal),
        lambda,
        mu,
        l: GroupElement::trusted(m.transpose(), FormBasis::Diagonal),
    };
    let err = (factors.reconstruct() - &gd).norm() / gd.norm();
    if err > 1e-6 {
        return Err(GeometryError::CartanFailure(format!(
            "reconstruction error {err:.2e}"
        )));
    }
    Ok(factors)
}

/// True iff `g` preserves orientation and time orientation.
///
/// Decided on the polar compact factor `diag(A, B)`: both blocks must have
/// positive determinant.
pub fn is_identity_component(g: &GroupElement) -> bool {
    let gd = g.diagonal_matrix();
    let d = gd.nrows();
    match polar(&gd) {
        Ok((k, _)) => {
            k.view((0, 0), (2, 2)).determinant() > 0.0
                && k.view((2, 2), (d - 2, d - 2)).determinant() > 0.0
        }
        Err(_) => false,
    }
}

/// Diagonal-basis direction of the split vector `e₁`.
pub fn e1_direction(d: usize) -> DVector<f64> {
    let mut v = DVector::zeros(d);
    v[0] = 1.0;
    v[2] = 1.0;
    v / 2f64.sqrt()
}

/// Diagonal-basis direction of the split vector `e_{n+2}`.
pub fn elast_direction(d: usize) -> DVector<f64> {
    let mut v = DVector::zeros(d);
    v[0] = -1.0;
    v[2] = 1.0;
    v / 2f64.sqrt()
}

#[derive(Debug, Clone)]
pub struct P1Data {
    pub gap: f64,
    pub p_plus: ProjectivePoint,
    pub p_minus: ProjectivePoint,
}

/// Cartan gap `λ − μ` with the poles `p₊ = k[e₁]` and `p₋ = l⁻¹[e_{n+2}]`,
/// both in diagonal coordinates.
///
/// Computed from the top singular triplets: `e^λ, e^μ` are the two largest
/// singular values, `p₊` is the top left singular line and `p₋ = J·z₁` for the
/// top right singular vector `z₁` (K commutes with `J`). This stays accurate
/// for long products whose small singular directions are lost to rounding.
pub fn p1_data(g: &GroupElement) -> Result<P1Data> {
    let gd = g.diagonal_matrix();
    let svd = gd.svd(true, true);
    let (u, vt) = match (svd.u, svd.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(GeometryError::CartanFailure("SVD did not converge".into())),
    };
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let (s1, s2) = (svd.singular_values[idx[0]], svd.singular_values[idx[1]]);
    let gap = s1.ln() - s2.ln();
    if !gap.is_finite() {
        return Err(GeometryError::CartanFailure(
            "non-finite singular values".into(),
        ));
    }
    if gap <= POLE_GAP_MIN {
        return Err(GeometryError::AmbiguousPoles { gap });
    }
    let w1 = u.column(idx[0]).into_owned();
    let mut z1 = vt.row(idx[0]).transpose().into_owned();
    z1[0] = -z1[0];
    z1[1] = -z1[1];
    Ok(P1Data {
        gap,
        p_plus: ProjectivePoint::new(w1),
        p_minus: ProjectivePoint::new(z1),
    })
}

/// Poles read off explicit Cartan factors.
pub fn p1_from_factors(f: &CartanFactors) -> Result<P1Data> {
    let gap = f.gap();
    if gap <= POLE_GAP_MIN {
        return Err(GeometryError::AmbiguousPoles { gap });
    }
    let d = f.k.dim();
    let p_plus = ProjectivePoint::new(f.k.matrix() * e1_direction(d));
    let p_minus = ProjectivePoint::new(f.l.matrix().transpose() * elast_direction(d));
    Ok(P1Data {
        gap,
        p_plus,
        p_minus,
    })
}

pub fn act_projective(g: &GroupElement, p: &ProjectivePoint) -> ProjectivePoint {
    ProjectivePoint::new(g.apply_diagonal(p.rep()))
}

/// Attracting fixed point of a proximal element, by repeated squaring.
///
/// Returns `None` when the iteration does not settle on an eigenline
/// (non-proximal input).
pub fn attracting_fixed_point(g: &GroupElement) -> Option<ProjectivePoint> {
    let gd = g.diagonal_matrix();
    let mut m = &gd / gd.amax();
    for _ in 0..7 {
        let (best, _) = m
            .column_iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let col = m.column(best).into_owned();
        let norm = col.norm();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        let candidate = col / norm;
        let image = &gd * &candidate;
        let residual =
            ProjectivePoint::new(image.clone()).distance(&ProjectivePoint::new(candidate.clone()));
        // also require expansion along the line, so that repelling lines are rejected
        if residual < 1e-11 && image.dot(&candidate).abs() > 1.0 {
            return Some(ProjectivePoint::new(candidate));
        }
        let sq = &m * &m;
        let amax = sq.amax();
        if amax == 0.0 || !amax.is_finite() {
            break;
        }
        m = sq / amax;
    }
    None
}

/// Serializable summary used by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CartanSummary {
    pub lambda: f64,
    pub mu: f64,
    pub gap: f64,
    pub identity_component: bool,
    pub reconstruction_error: f64,
}

pub fn cartan_summary(g: &GroupElement) -> Result<CartanSummary> {
    let f = cartan_decompose(g)?;
    let gd = g.diagonal_matrix();
    Ok(CartanSummary {
        lambda: f.lambda,
        mu: f.mu,
        gap: f.gap(),
        identity_component: is_identity_component(g),
        reconstruction_error: (f.reconstruct() - &gd).norm() / gd.norm(),
    })
}
