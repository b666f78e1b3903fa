//! Klein, conformal and universal models of the Einstein universe and of
//! anti-de Sitter space, with the conversions between them.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::forms::{quadratic, FormBasis, DEGENERACY_TOL};
use crate::projective::ProjectivePoint;
use crate::{GeometryError, Result};

/// Which quadric a Klein representative lives on. The payload is the
/// ambient dimension of the linear space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceTag {
    Ein(usize),
    AdS(usize),
}

/// Point of the Klein model, kept in the double cover S(ℝ^{2,n}).
///
/// Einstein points are scaled so that the timelike pair `(u, v)` has unit
/// length, which makes the representative `(cos θ, sin θ, x)`. AdS points
/// are scaled to `q = −1`. Only positive rescalings are ever applied.
#[derive(Debug, Clone, PartialEq)]
pub struct KleinPoint {
    rep: DVector<f64>,
    tag: SpaceTag,
}

impl KleinPoint {
    pub fn ein(v: DVector<f64>) -> Result<Self> {
        let time = (v[0] * v[0] + v[1] * v[1]).sqrt();
        let scale = v.norm_squared();
        if time == 0.0 || quadratic(&v, FormBasis::Diagonal).abs() > DEGENERACY_TOL * scale {
            return Err(GeometryError::InvalidParameter(
                "Einstein point must be a nonzero null vector".into(),
            ));
        }
        let d = v.len();
        Ok(Self {
            rep: v / time,
            tag: SpaceTag::Ein(d),
        })
    }

    pub fn ads(v: DVector<f64>) -> Result<Self> {
        let q = quadratic(&v, FormBasis::Diagonal);
        if q >= -DEGENERACY_TOL * v.norm_squared() {
            return Err(GeometryError::InvalidParameter(
                "AdS point must be a timelike vector".into(),
            ));
        }
        let d = v.len();
        Ok(Self {
            rep: v / (-q).sqrt(),
            tag: SpaceTag::AdS(d),
        })
    }

    pub fn rep(&self) -> &DVector<f64> {
        &self.rep
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    pub fn q(&self) -> f64 {
        quadratic(&self.rep, FormBasis::Diagonal)
    }

    pub fn projective(&self) -> ProjectivePoint {
        ProjectivePoint::new(self.rep.clone())
    }

    /// Whether two points agree, either in S(ℝ^{2,n}) or, with
    /// `identify_antipodes`, in P(ℝ^{2,n}).
    pub fn same_point(&self, other: &KleinPoint, identify_antipodes: bool, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let a = self.rep.normalize();
        let b = other.rep.normalize();
        let direct = (&a - &b).norm();
        if identify_antipodes {
            direct.min((&a + &b).norm()) <= tol
        } else {
            direct <= tol
        }
    }
}

/// Point of `S^{d−1} × S¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalPoint {
    pub x: DVector<f64>,
    pub theta: f64,
}

impl ConformalPoint {
    pub fn new(x: DVector<f64>, theta: f64) -> Self {
        Self {
            x,
            theta: theta.rem_euclid(TAU),
        }
    }
}

/// Point `(x, t)` of the universal cover `S^{d−1} × ℝ`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalPoint {
    pub x: DVector<f64>,
    pub t: f64,
}

impl UniversalPoint {
    pub fn new(x: DVector<f64>, t: f64) -> Self {
        Self { x, t }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Null Klein representative `(cos t, sin t, x)`.
    pub fn lift(&self) -> DVector<f64> {
        let d = self.x.len();
        let mut v = DVector::zeros(d + 2);
        v[0] = self.t.cos();
        v[1] = self.t.sin();
        v.rows_mut(2, d).copy_from(&self.x);
        v
    }
}

/// A point in any of the three models.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelPoint {
    Klein(KleinPoint),
    Conformal(ConformalPoint),
    Universal(UniversalPoint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Klein,
    Conformal,
    Universal,
}

pub fn klein_to_conformal(p: &KleinPoint) -> Result<ConformalPoint> {
    if !matches!(p.tag, SpaceTag::Ein(_)) {
        return Err(GeometryError::InvalidParameter(
            "only Einstein points have conformal coordinates here".into(),
        ));
    }
    let r = &p.rep;
    let theta = r[1].atan2(r[0]);
    let x = r.rows(2, r.len() - 2).normalize();
    Ok(ConformalPoint::new(x, theta))
}

pub fn conformal_to_klein(p: &ConformalPoint) -> KleinPoint {
    let d = p.x.len();
    let mut v = DVector::zeros(d + 2);
    v[0] = p.theta.cos();
    v[1] = p.theta.sin();
    v.rows_mut(2, d).copy_from(&p.x);
    KleinPoint {
        rep: v,
        tag: SpaceTag::Ein(d + 2),
    }
}

pub fn universal_to_conformal(p: &UniversalPoint) -> ConformalPoint {
    ConformalPoint::new(p.x.clone(), p.t)
}

/// `t = θ + 2πk`; the branch `k` cannot be guessed.
pub fn conformal_to_universal(p: &ConformalPoint, branch: Option<i64>) -> Result<UniversalPoint> {
    let k = branch.ok_or(GeometryError::BranchRequired)?;
    Ok(UniversalPoint::new(p.x.clone(), p.theta + TAU * k as f64))
}

pub fn convert(point: &ModelPoint, target: Model, branch: Option<i64>) -> Result<ModelPoint> {
    let conformal = match point {
        ModelPoint::Klein(k) => {
            if target == Model::Klein {
                return Ok(point.clone());
            }
            klein_to_conformal(k)?
        }
        ModelPoint::Conformal(c) => c.clone(),
        ModelPoint::Universal(u) => {
            if target == Model::Universal {
                return Ok(point.clone());
            }
            universal_to_conformal(u)
        }
    };
    Ok(match target {
        Model::Klein => ModelPoint::Klein(conformal_to_klein(&conformal)),
        Model::Conformal => ModelPoint::Conformal(conformal),
        Model::Universal => ModelPoint::Universal(conformal_to_universal(&conformal, branch)?),
    })
}

/// `σᵏ(x, t) = ((−1)ᵏ x, t + kπ)`.
pub fn sigma(p: &UniversalPoint, k: i64) -> UniversalPoint {
    let x = if k.rem_euclid(2) == 0 {
        p.x.clone()
    } else {
        -&p.x
    };
    UniversalPoint::new(x, p.t + PI * k as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    Plus,
    Minus,
    Boundary,
}

/// The ramified double cover Ein_{1,n} → AdS̄_{1,n}: drop the last coordinate.
///
/// Returns an AdS point (rescaled to `q = −1`) on the two sheets, or an
/// Einstein point of one dimension lower on the branch locus.
pub fn ads_cover_project(p: &KleinPoint) -> Result<(KleinPoint, Sheet)> {
    if !matches!(p.tag, SpaceTag::Ein(_)) {
        return Err(GeometryError::InvalidParameter(
            "cover projection expects an Einstein point".into(),
        ));
    }
    let d = p.dim();
    let last = p.rep[d - 1];
    let head = p.rep.rows(0, d - 1).into_owned();
    if last.abs() <= DEGENERACY_TOL {
        return Ok((KleinPoint::ein(head)?, Sheet::Boundary));
    }
    let sheet = if last > 0.0 {
        Sheet::Plus
    } else {
        Sheet::Minus
    };
    Ok((KleinPoint::ads(head)?, sheet))
}

/// The preimage of an AdS point on the requested sheet.
pub fn ads_cover_lift(p: &KleinPoint, sheet: Sheet) -> Result<KleinPoint> {
    let sign = match sheet {
        Sheet::Plus => 1.0,
        Sheet::Minus => -1.0,
        Sheet::Boundary => {
            return Err(GeometryError::InvalidParameter(
                "AdS points have no boundary preimage".into(),
            ))
        }
    };
    if !matches!(p.tag, SpaceTag::AdS(_)) {
        return Err(GeometryError::InvalidParameter(
            "cover lift expects an AdS point".into(),
        ));
    }
    let d = p.dim();
    let mut v = DVector::zeros(d + 1);
    v.rows_mut(0, d).copy_from(&p.rep);
    // q(rep) = −1, so the added coordinate must square to 1
    v[d] = sign * (-p.q()).sqrt();
    KleinPoint::ein(v)
}

/// Which conformal copy of AdS_{1,n} inside Ein_{1,n} contains `(x, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdsCopy {
    Upper,
    Lower,
}

/// Inclusion `H^n × S¹ ⊂ S^n × S¹` of a conformal AdS point.
pub fn ads_conformal_embed(x: &DVector<f64>, theta: f64) -> Result<(ConformalPoint, AdsCopy)> {
    let last = x[x.len() - 1];
    if last.abs() <= DEGENERACY_TOL {
        return Err(GeometryError::OnConformalBoundary);
    }
    let copy = if last > 0.0 {
        AdsCopy::Upper
    } else {
        AdsCopy::Lower
    };
    Ok((ConformalPoint::new(x.clone(), theta), copy))
}

fn push_row(out: &mut String, model: &str, coords: impl Iterator<Item = f64>) {
    out.push_str(model);
    for c in coords {
        let _ = write!(out, ",{c:.17e}");
    }
    out.push('\n');
}

/// CSV table of points; the header enumerates the widest row.
pub fn points_csv(points: &[ModelPoint]) -> String {
    let width = points
        .iter()
        .map(|p| match p {
            ModelPoint::Klein(k) => k.dim(),
            ModelPoint::Conformal(c) => c.x.len() + 1,
            ModelPoint::Universal(u) => u.x.len() + 1,
        })
        .max()
        .unwrap_or(0);
    let mut out = String::from("model");
    for i in 0..width {
        let _ = write!(out, ",c{i}");
    }
    out.push('\n');
    for p in points {
        match p {
            ModelPoint::Klein(k) => push_row(&mut out, "klein", k.rep.iter().copied()),
            ModelPoint::Conformal(c) => {
                push_row(&mut out, "conformal", c.x.iter().copied().chain([c.theta]))
            }
            ModelPoint::Universal(u) => {
                push_row(&mut out, "universal", u.x.iter().copied().chain([u.t]))
            }
        }
    }
    out
}
