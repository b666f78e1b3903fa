//! Causal relations in the universal Einstein space `S^{d−1} × ℝ`.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::forms::{form, FormBasis};
use crate::models::UniversalPoint;
use crate::sphere::angle_acos;
use crate::{GeometryError, Result};

/// Width of the band around `d₀ = |Δt|` reported as lightlike.
pub const LIGHTLIKE_BAND: f64 = 1e-7;

/// Tolerance for Lipschitz checks on sampled graphs.
pub const LIPSCHITZ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalRelation {
    TimelikeRelated,
    LightlikeRelated,
    Unrelated,
}

fn check_dims(p: &UniversalPoint, q: &UniversalPoint) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(())
}

/// Compares `d₀(x, x′)` against `|t − t′|`.
pub fn causal_classify(p: &UniversalPoint, q: &UniversalPoint) -> Result<CausalRelation> {
    check_dims(p, q)?;
    let d0 = angle_acos(&p.x, &q.x);
    let dt = (p.t - q.t).abs();
    Ok(if (d0 - dt).abs() <= LIGHTLIKE_BAND {
        CausalRelation::LightlikeRelated
    } else if d0 < dt {
        CausalRelation::TimelikeRelated
    } else {
        CausalRelation::Unrelated
    })
}

/// `⟨lift(p), lift(q)⟩ = cos d₀ − cos Δt`.
pub fn klein_pairing(p: &UniversalPoint, q: &UniversalPoint) -> f64 {
    form(&p.lift(), &q.lift(), FormBasis::Diagonal)
}

/// Classification by the sign of the Klein pairing; meaningful for
/// `|Δt| ≤ π` only.
pub fn klein_classify(p: &UniversalPoint, q: &UniversalPoint) -> Result<CausalRelation> {
    check_dims(p, q)?;
    let s = klein_pairing(p, q);
    Ok(if s > 0.0 {
        CausalRelation::TimelikeRelated
    } else if s < 0.0 {
        CausalRelation::Unrelated
    } else {
        CausalRelation::LightlikeRelated
    })
}

/// Finite sample of a compact set, with its declared mesh.
#[derive(Debug, Clone)]
pub struct CompactSample {
    points: Vec<UniversalPoint>,
    mesh: f64,
}

impl CompactSample {
    pub fn new(points: Vec<UniversalPoint>, mesh: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(GeometryError::InvalidParameter(
                "empty compact sample".into(),
            ));
        }
        if !mesh.is_finite() || mesh <= 0.0 {
            return Err(GeometryError::InvalidParameter(
                "mesh must be positive".into(),
            ));
        }
        Ok(Self { points, mesh })
    }

    pub fn points(&self) -> &[UniversalPoint] {
        &self.points
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// `f(x) = inf {d₀(x, x₀) + t₀}`; the boundary of `J⁺(K)` above `x`.
    pub fn future_envelope(&self, x: &DVector<f64>) -> f64 {
        self.points
            .iter()
            .map(|p| angle_acos(x, &p.x) + p.t)
            .fold(f64::INFINITY, f64::min)
    }

    /// `g(x) = sup {t₀ − d₀(x, x₀)}`.
    pub fn past_envelope(&self, x: &DVector<f64>) -> f64 {
        self.points
            .iter()
            .map(|p| p.t - angle_acos(x, &p.x))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Future,
    Past,
}

/// Membership in `J⁺(K)` or `J⁻(K)`, exact for the sample and within
/// `mesh` of the answer for the underlying compact set.
pub fn in_future_of(k: &CompactSample, p: &UniversalPoint, orientation: Orientation) -> bool {
    match orientation {
        Orientation::Future => p.t >= k.future_envelope(&p.x),
        Orientation::Past => p.t <= k.past_envelope(&p.x),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalMode {
    Acausal,
    Achronal,
}

/// Checks every distinct pair. Lightlike pairs fail `Acausal`.
pub fn certify_acausal(points: &[UniversalPoint], mode: CausalMode) -> bool {
    worst_causal_pair(points, mode).is_none()
}

/// First offending pair, if any.
pub fn worst_causal_pair(points: &[UniversalPoint], mode: CausalMode) -> Option<(usize, usize)> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let rel = match causal_classify(&points[i], &points[j]) {
                Ok(r) => r,
                Err(_) => return Some((i, j)),
            };
            let bad = match mode {
                CausalMode::Acausal => rel != CausalRelation::Unrelated,
                CausalMode::Achronal => rel == CausalRelation::TimelikeRelated,
            };
            if bad {
                return Some((i, j));
            }
        }
    }
    None
}

/// The slab `S × (t0, t0 + π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineDomainU {
    pub t0: f64,
}

impl AffineDomainU {
    pub fn contains(&self, p: &UniversalPoint) -> bool {
        p.t > self.t0 && p.t < self.t0 + PI
    }

    /// Klein form: the base point `p₀` whose negative half-space is the slab,
    /// `p₀ = lift(x, t0 + π/2)` for any `x` with the spatial part dropped.
    pub fn base_point(&self, dim: usize) -> DVector<f64> {
        let c = self.t0 + PI / 2.0;
        let mut v = DVector::zeros(dim + 2);
        v[0] = c.cos();
        v[1] = c.sin();
        v
    }
}

/// Centered slab around an acausal sample.
pub fn bounding_affine_domain(points: &[UniversalPoint]) -> Result<AffineDomainU> {
    if points.is_empty() {
        return Err(GeometryError::EmptySample);
    }
    if !certify_acausal(points, CausalMode::Acausal) {
        return Err(GeometryError::NotAcausal);
    }
    let (m, big_m) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.t), hi.max(p.t))
        });
    Ok(AffineDomainU {
        t0: (m + big_m) / 2.0 - PI / 2.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Contraction {
    Lipschitz1,
    Strict,
}

/// Sampled graph of a 1-Lipschitz function over a subset of a round sphere.
#[derive(Debug, Clone)]
pub struct AchronalGraph {
    domain_points: Vec<DVector<f64>>,
    values: Vec<f64>,
    contraction: Contraction,
}

impl AchronalGraph {
    pub fn new(
        domain_points: Vec<DVector<f64>>,
        values: Vec<f64>,
        contraction: Contraction,
    ) -> Result<Self> {
        if domain_points.len() != values.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: domain_points.len(),
                found: values.len(),
            });
        }
        let g = Self {
            domain_points,
            values,
            contraction,
        };
        let excess = g.lipschitz_excess();
        let ok = match contraction {
            Contraction::Lipschitz1 => excess <= LIPSCHITZ_TOL,
            Contraction::Strict => excess < LIPSCHITZ_TOL && g.strict_holds(),
        };
        if !ok {
            return Err(GeometryError::NotAcausal);
        }
        Ok(g)
    }

    /// Largest `|fᵢ − fⱼ| − d₀(xᵢ, xⱼ)` over distinct pairs.
    pub fn lipschitz_excess(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..self.values.len() {
            for j in i + 1..self.values.len() {
                let d = angle_acos(&self.domain_points[i], &self.domain_points[j]);
                worst = worst.max((self.values[i] - self.values[j]).abs() - d);
            }
        }
        worst
    }

    fn strict_holds(&self) -> bool {
        (0..self.values.len()).all(|i| {
            (i + 1..self.values.len()).all(|j| {
                let d = angle_acos(&self.domain_points[i], &self.domain_points[j]);
                (self.values[i] - self.values[j]).abs() < d
            })
        })
    }

    pub fn domain_points(&self) -> &[DVector<f64>] {
        &self.domain_points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn contraction(&self) -> Contraction {
        self.contraction
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn points(&self) -> Vec<UniversalPoint> {
        self.domain_points
            .iter()
            .zip(&self.values)
            .map(|(x, &t)| UniversalPoint::new(x.clone(), t))
            .collect()
    }
}
