//! The invisible domain Ω(Λ) of a lifted acausal limit set, its AdS
//! components and the black-hole region labels.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::causality::{certify_acausal, AchronalGraph, CausalMode, Contraction};
use crate::forms::{form, FormBasis};
use crate::groups::GroupElement;
use crate::limit_sets::{lift_acausal, LimitSetSample};
use crate::models::{KleinPoint, UniversalPoint};
use crate::sphere::{angle_acos, embed_equator, nearest_distance, sphere_grid};
use crate::{GeometryError, Result};

/// `|⟨x, axis⟩|` below this puts a point on the conformal boundary.
pub const EQUATOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    FutureCore,
    PastCore,
    PastOfBoundary,
    FutureOfBoundary,
    ConformalBoundary,
    FutureHorizon,
    PastHorizon,
    OutsideOmega,
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::FutureCore => "future_core",
            RegionLabel::PastCore => "past_core",
            RegionLabel::PastOfBoundary => "past_of_boundary",
            RegionLabel::FutureOfBoundary => "future_of_boundary",
            RegionLabel::ConformalBoundary => "conformal_boundary",
            RegionLabel::FutureHorizon => "future_horizon",
            RegionLabel::PastHorizon => "past_horizon",
            RegionLabel::OutsideOmega => "outside",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    E1,
    E2,
    BoundaryEin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

/// Future-side label plus the past-side label of the dual decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub label: RegionLabel,
    pub past_side: RegionLabel,
}

/// Points of `Λ^± ∖ Λ`: equator grid points away from `Λ₀` with the values
/// of `g^±` there.
#[derive(Debug, Clone)]
struct BoundaryGraph {
    points: Vec<DVector<f64>>,
    plus: Vec<f64>,
    minus: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct InvisibleDomain {
    lambda: LimitSetSample,
    /// Lifted limit set, embedded in the equator of `S^n`.
    base: Vec<(DVector<f64>, f64)>,
    mesh: f64,
    hemisphere_axis: DVector<f64>,
    center: f64,
    boundary: BoundaryGraph,
}

/// Default equator grid size giving spacing about `mesh`.
pub fn default_boundary_grid(n: usize, mesh: f64) -> usize {
    match n {
        0..=2 => (2.0 * PI / mesh).ceil() as usize,
        3 => (4.0 * PI / (mesh * mesh)).ceil() as usize,
        _ => 20_000,
    }
}

impl InvisibleDomain {
    /// Lifts the sample if needed; `mesh` is the declared sampling density
    /// of Λ (every point of the true limit set lies within `mesh` of a
    /// sample point).
    pub fn build(lambda: LimitSetSample, mesh: f64) -> Result<Self> {
        let grid = lambda
            .points
            .first()
            .map_or(0, |p| default_boundary_grid(p.dim() - 2, mesh));
        Self::build_with_grid(lambda, mesh, grid, 0)
    }

    pub fn build_with_grid(
        lambda: LimitSetSample,
        mesh: f64,
        grid_count: usize,
        seed: u64,
    ) -> Result<Self> {
        if !mesh.is_finite() || mesh <= 0.0 {
            return Err(GeometryError::InvalidParameter(
                "mesh must be positive".into(),
            ));
        }
        if lambda.is_empty() {
            return Err(GeometryError::EmptySample);
        }
        let lambda = match lambda.universal_lift {
            Some(_) => lambda,
            None => lift_acausal(&lambda)?,
        };
        let lift = lambda.universal_lift.clone().expect("lifted above");
        if !certify_acausal(&lift, CausalMode::Acausal) {
            return Err(GeometryError::NotAcausal);
        }
        let n = lift[0].dim();
        let base: Vec<(DVector<f64>, f64)> =
            lift.iter().map(|p| (embed_equator(&p.x), p.t)).collect();
        let lo = lift.iter().map(|p| p.t).fold(f64::INFINITY, f64::min);
        let hi = lift.iter().map(|p| p.t).fold(f64::NEG_INFINITY, f64::max);
        let mut axis = DVector::zeros(n + 1);
        axis[n] = 1.0;
        let mut d = Self {
            lambda,
            base,
            mesh,
            hemisphere_axis: axis,
            center: (lo + hi) / 2.0,
            boundary: BoundaryGraph {
                points: Vec::new(),
                plus: Vec::new(),
                minus: Vec::new(),
            },
        };
        let lambda0: Vec<DVector<f64>> = lift.iter().map(|p| p.x.clone()).collect();
        let grid = sphere_grid(n, grid_count, seed);
        let kept: Vec<DVector<f64>> = grid
            .into_par_iter()
            .filter(|y| nearest_distance(y, &lambda0) > 2.0 * mesh)
            .collect();
        let plus = kept
            .par_iter()
            .map(|y| d.f_plus(&embed_equator(y)))
            .collect();
        let minus = kept
            .par_iter()
            .map(|y| d.f_minus(&embed_equator(y)))
            .collect();
        d.boundary = BoundaryGraph {
            points: kept.iter().map(embed_equator).collect(),
            plus,
            minus,
        };
        Ok(d)
    }

    /// Domain of an analytically known limit set given directly in universal
    /// coordinates.
    pub fn from_universal(
        points: Vec<UniversalPoint>,
        mesh: f64,
        grid_count: usize,
    ) -> Result<Self> {
        let klein = points
            .iter()
            .map(|p| KleinPoint::ein(p.lift()))
            .collect::<Result<Vec<_>>>()?;
        let mut sample = LimitSetSample::from_points(klein, mesh);
        sample.universal_lift = Some(points);
        Self::build_with_grid(sample, mesh, grid_count, 0)
    }

    pub fn lambda(&self) -> &LimitSetSample {
        &self.lambda
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn hemisphere_axis(&self) -> &DVector<f64> {
        &self.hemisphere_axis
    }

    /// Dimension of the ambient sphere `S^n` (vectors have `n + 1` entries).
    pub fn sphere_dim(&self) -> usize {
        self.hemisphere_axis.len()
    }

    /// Centre of the time range of the lifted Λ.
    pub fn center(&self) -> f64 {
        self.center
    }

    /// Number of sampled points of `Λ^± ∖ Λ`.
    pub fn boundary_size(&self) -> usize {
        self.boundary.points.len()
    }

    pub fn boundary_points(&self) -> Vec<UniversalPoint> {
        self.boundary
            .points
            .iter()
            .zip(&self.boundary.plus)
            .map(|(y, &t)| UniversalPoint::new(y.clone(), t))
            .collect()
    }

    /// `f⁺(x) = inf {t₀ + d₀(x, x₀)}` over the lifted sample.
    pub fn f_plus(&self, x: &DVector<f64>) -> f64 {
        self.base
            .iter()
            .map(|(x0, t0)| t0 + angle_acos(x, x0))
            .fold(f64::INFINITY, f64::min)
    }

    /// `f⁻(x) = sup {t₀ − d₀(x, x₀)}`.
    pub fn f_minus(&self, x: &DVector<f64>) -> f64 {
        self.base
            .iter()
            .map(|(x0, t0)| t0 - angle_acos(x, x0))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Signed distance of `t` to the nearer envelope; positive inside.
    pub fn envelope_margin(&self, p: &UniversalPoint) -> f64 {
        (self.f_plus(&p.x) - p.t).min(p.t - self.f_minus(&p.x))
    }

    /// Dual-cone test: `⟨lift(p), λ⟩ < 0` for every sampled λ,
    /// for `t` in the window `(c − π, c + π)` that contains Ω.
    pub fn dual_cone_contains(&self, p: &UniversalPoint) -> bool {
        if (p.t - self.center).abs() >= PI {
            return false;
        }
        let lp = p.lift();
        self.base.iter().all(|(x0, t0)| {
            let l = UniversalPoint::new(x0.clone(), *t0).lift();
            form(&lp, &l, FormBasis::Diagonal) < 0.0
        })
    }

    /// `f⁻ < t < f⁺` with margin `mesh`; inside answers are inside the true Ω.
    pub fn contains(&self, p: &UniversalPoint, cross_check: bool) -> Result<bool> {
        if p.dim() != self.sphere_dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.sphere_dim(),
                found: p.dim(),
            });
        }
        let margin = self.envelope_margin(p);
        let inside = margin > self.mesh;
        if cross_check && margin.abs() > 2.0 * self.mesh && inside != self.dual_cone_contains(p) {
            return Err(GeometryError::OracleDisagreement { t: p.t });
        }
        Ok(inside)
    }

    pub fn component_of(&self, p: &UniversalPoint) -> Result<Component> {
        if !self.contains(p, false)? {
            return Err(GeometryError::NotInDomain);
        }
        Ok(self.hemisphere(&p.x))
    }

    fn hemisphere(&self, x: &DVector<f64>) -> Component {
        let h = x.dot(&self.hemisphere_axis);
        if h.abs() <= EQUATOR_TOL {
            Component::BoundaryEin
        } else if h > 0.0 {
            Component::E1
        } else {
            Component::E2
        }
    }

    /// Graph of `g^± = f^±|_{S^{n−1}}` over an equator grid (vectors in ℝⁿ).
    pub fn lambda_pm_graph(&self, side: Side, grid: &[DVector<f64>]) -> Result<AchronalGraph> {
        let values = grid
            .iter()
            .map(|y| {
                let e = embed_equator(y);
                match side {
                    Side::Plus => self.f_plus(&e),
                    Side::Minus => self.f_minus(&e),
                }
            })
            .collect();
        AchronalGraph::new(grid.to_vec(), values, Contraction::Lipschitz1)
    }

    /// `H(x) = sup {g⁺(y) − d₀(x, y)}` over `y ∈ Λ⁺ ∖ Λ`: the points below
    /// `H` are in the past of the sampled conformal boundary graph.
    pub fn horizon_height(&self, x: &DVector<f64>) -> Result<f64> {
        if self.boundary.points.is_empty() {
            return Err(GeometryError::EmptyBoundary);
        }
        Ok(self
            .boundary
            .points
            .iter()
            .zip(&self.boundary.plus)
            .map(|(y, g)| g - angle_acos(x, y))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Dual of [`horizon_height`](Self::horizon_height):
    /// `inf {g⁻(y) + d₀(x, y)}` over `y ∈ Λ⁻ ∖ Λ`.
    pub fn past_horizon_height(&self, x: &DVector<f64>) -> Result<f64> {
        if self.boundary.points.is_empty() {
            return Err(GeometryError::EmptyBoundary);
        }
        Ok(self
            .boundary
            .points
            .iter()
            .zip(&self.boundary.minus)
            .map(|(y, g)| g + angle_acos(x, y))
            .fold(f64::INFINITY, f64::min))
    }

    pub fn classify_region(&self, p: &UniversalPoint, horizon_band: f64) -> Result<Region> {
        if !self.contains(p, false)? {
            return Ok(Region {
                label: RegionLabel::OutsideOmega,
                past_side: RegionLabel::OutsideOmega,
            });
        }
        if self.hemisphere(&p.x) == Component::BoundaryEin {
            return Ok(Region {
                label: RegionLabel::ConformalBoundary,
                past_side: RegionLabel::ConformalBoundary,
            });
        }
        let h = self.horizon_height(&p.x)?;
        let label = if p.t < h - horizon_band {
            RegionLabel::PastOfBoundary
        } else if p.t > h + horizon_band {
            RegionLabel::FutureCore
        } else {
            RegionLabel::FutureHorizon
        };
        let g = self.past_horizon_height(&p.x)?;
        let past_side = if p.t > g + horizon_band {
            RegionLabel::FutureOfBoundary
        } else if p.t < g - horizon_band {
            RegionLabel::PastCore
        } else {
            RegionLabel::PastHorizon
        };
        Ok(Region { label, past_side })
    }

    /// Region label with the core fallback for an empty conformal boundary.
    pub fn region_or_core(&self, p: &UniversalPoint, horizon_band: f64) -> Result<Region> {
        match self.classify_region(p, horizon_band) {
            Err(GeometryError::EmptyBoundary) => Ok(Region {
                label: RegionLabel::FutureCore,
                past_side: RegionLabel::PastCore,
            }),
            other => other,
        }
    }

    /// Image of a point of Ω under an element of O(2,n), acting through
    /// O(2,n) ⊂ O(2,n+1); the time is taken in the window around Λ.
    pub fn act(&self, g: &GroupElement, p: &UniversalPoint) -> UniversalPoint {
        act_in_window(g, p, self.center)
    }

    /// CSV table `x0..xn,t,label,past_label` over probe points.
    pub fn region_csv(&self, probes: &[UniversalPoint], horizon_band: f64) -> Result<String> {
        let regions = probes
            .par_iter()
            .map(|p| self.region_or_core(p, horizon_band))
            .collect::<Result<Vec<_>>>()?;
        let d = self.sphere_dim();
        let mut out = String::new();
        for i in 0..d {
            let _ = write!(out, "x{i},");
        }
        out.push_str("t,label,past_label\n");
        for (p, r) in probes.iter().zip(regions) {
            for c in p.x.iter() {
                let _ = write!(out, "{c:.17e},");
            }
            let _ = writeln!(
                out,
                "{:.17e},{},{}",
                p.t,
                r.label.as_str(),
                r.past_side.as_str()
            );
        }
        Ok(out)
    }

    /// CSV table `x0..xn,f_plus,f_minus` over points of `S^n`.
    pub fn envelope_csv(&self, grid: &[DVector<f64>]) -> String {
        let d = self.sphere_dim();
        let mut out = String::new();
        for i in 0..d {
            let _ = write!(out, "x{i},");
        }
        out.push_str("f_plus,f_minus\n");
        let rows: Vec<(f64, f64)> = grid
            .par_iter()
            .map(|x| (self.f_plus(x), self.f_minus(x)))
            .collect();
        for (x, (fp, fm)) in grid.iter().zip(rows) {
            for c in x.iter() {
                let _ = write!(out, "{c:.17e},");
            }
            let _ = writeln!(out, "{fp:.17e},{fm:.17e}");
        }
        out
    }

    /// Wavefront OBJ surfaces over the closed upper hemisphere of `S²`, drawn
    /// as graphs over the unit disk: `f⁺`, `f⁻`, and the future horizon
    /// height when the conformal boundary is nonempty. One `o` block each.
    pub fn export_obj(&self, rings: usize, sectors: usize) -> Result<String> {
        if self.sphere_dim() != 3 {
            return Err(GeometryError::InvalidParameter(
                "mesh export is only defined for n = 2".into(),
            ));
        }
        let rings = rings.max(2);
        let sectors = sectors.max(3);
        let mut verts = Vec::new();
        // ring 0 is the pole, ring `rings` the equator
        for i in 0..=rings {
            let polar = PI / 2.0 * i as f64 / rings as f64;
            let count = if i == 0 { 1 } else { sectors };
            for j in 0..count {
                let az = 2.0 * PI * j as f64 / sectors as f64;
                verts.push(DVector::from_vec(vec![
                    polar.sin() * az.cos(),
                    polar.sin() * az.sin(),
                    polar.cos(),
                ]));
            }
        }
        let index = |i: usize, j: usize| -> usize {
            if i == 0 {
                1
            } else {
                2 + (i - 1) * sectors + (j % sectors)
            }
        };
        let mut faces = Vec::new();
        for j in 0..sectors {
            faces.push([index(0, 0), index(1, j), index(1, j + 1)]);
        }
        for i in 1..rings {
            for j in 0..sectors {
                faces.push([index(i, j), index(i + 1, j), index(i + 1, j + 1)]);
                faces.push([index(i, j), index(i + 1, j + 1), index(i, j + 1)]);
            }
        }
        let mut surfaces: Vec<(&str, Vec<f64>)> = vec![
            ("f_plus", verts.par_iter().map(|x| self.f_plus(x)).collect()),
            (
                "f_minus",
                verts.par_iter().map(|x| self.f_minus(x)).collect(),
            ),
        ];
        if !self.boundary.points.is_empty() {
            let h = verts
                .par_iter()
                .map(|x| self.horizon_height(x))
                .collect::<Result<Vec<_>>>()?;
            surfaces.push(("future_horizon", h));
        }
        let mut out = String::new();
        let mut offset = 0;
        for (name, heights) in surfaces {
            let _ = writeln!(out, "o {name}");
            for (x, h) in verts.iter().zip(&heights) {
                let _ = writeln!(out, "v {:.9} {:.9} {:.9}", x[0], x[1], h);
            }
            for f in &faces {
                let _ = writeln!(
                    out,
                    "f {} {} {}",
                    f[0] + offset,
                    f[1] + offset,
                    f[2] + offset
                );
            }
            offset += verts.len();
        }
        Ok(out)
    }
}

/// Acts on `(x, t)` through the Klein lift and picks the time branch in
/// `(center − π, center + π]`.
pub fn act_in_window(g: &GroupElement, p: &UniversalPoint, center: f64) -> UniversalPoint {
    act_matrix_in_window(&extended_matrix(g, p.dim() + 2), p, center)
}

/// Diagonal-basis matrix of `g` acting on ℝ^{2,n+1} (`ambient = n + 3`),
/// extended by the identity on the last coordinate when needed.
pub fn extended_matrix(g: &GroupElement, ambient: usize) -> DMatrix<f64> {
    if g.dim() == ambient {
        g.diagonal_matrix()
    } else {
        g.extend_fixing_last().diagonal_matrix()
    }
}

/// [`act_in_window`] for a matrix already in the form of [`extended_matrix`].
pub fn act_matrix_in_window(m: &DMatrix<f64>, p: &UniversalPoint, center: f64) -> UniversalPoint {
    let v = m * p.lift();
    let time = (v[0] * v[0] + v[1] * v[1]).sqrt();
    let theta = v[1].atan2(v[0]);
    let x = v.rows(2, v.len() - 2) / time;
    let k = ((center - theta) / (2.0 * PI)).round();
    let mut t = theta + 2.0 * PI * k;
    if t <= center - PI {
        t += 2.0 * PI;
    }
    UniversalPoint::new(x.normalize(), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{circle_grid, random_unit};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Λ = equator circle of S² at t = 0.
    fn fuchsian(count: usize) -> InvisibleDomain {
        let pts = circle_grid(count)
            .into_iter()
            .map(|x| UniversalPoint::new(x, 0.0))
            .collect();
        InvisibleDomain::from_universal(pts, 2.0 * PI / count as f64, 256).unwrap()
    }

    fn pole() -> DVector<f64> {
        DVector::from_vec(vec![0.0, 0.0, 1.0])
    }

    #[test]
    fn fuchsian_envelopes() {
        let d = fuchsian(256);
        assert!((d.f_plus(&pole()) - PI / 2.0).abs() < 1e-12);
        assert!((d.f_minus(&pole()) + PI / 2.0).abs() < 1e-12);
        let on = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        assert!(d.f_plus(&on).abs() <= d.mesh());
        assert_eq!(d.boundary_size(), 0);
    }

    #[test]
    fn fuchsian_membership() {
        let d = fuchsian(256);
        assert!(d.contains(&UniversalPoint::new(pole(), 0.0), true).unwrap());
        assert!(!d
            .contains(
                &UniversalPoint::new(DVector::from_vec(vec![1.0, 0.0, 0.0]), 0.0),
                true
            )
            .unwrap());
        assert!(!d
            .contains(&UniversalPoint::new(pole(), PI / 2.0), true)
            .unwrap());
        assert_eq!(
            d.component_of(&UniversalPoint::new(pole(), 0.0)).unwrap(),
            Component::E1
        );
        assert_eq!(
            d.component_of(&UniversalPoint::new(-pole(), 0.0)).unwrap(),
            Component::E2
        );
        assert_eq!(
            d.component_of(&UniversalPoint::new(pole(), 3.0))
                .unwrap_err(),
            GeometryError::NotInDomain
        );
        assert_eq!(
            d.classify_region(&UniversalPoint::new(pole(), 0.0), 0.05)
                .unwrap_err(),
            GeometryError::EmptyBoundary
        );
        assert_eq!(
            d.region_or_core(&UniversalPoint::new(pole(), 0.0), 0.05)
                .unwrap()
                .label,
            RegionLabel::FutureCore
        );
    }

    #[test]
    fn dual_cone_matches_envelopes() {
        let d = fuchsian(256);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..2000 {
            let p = UniversalPoint::new(random_unit(&mut rng, 3), rng.random_range(-4.0..4.0));
            assert!(d.contains(&p, true).is_ok());
        }
    }

    #[test]
    fn envelopes_are_lipschitz() {
        let d = fuchsian(64);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..1000 {
            let x = random_unit(&mut rng, 3);
            let y = random_unit(&mut rng, 3);
            let dist = angle_acos(&x, &y);
            assert!((d.f_plus(&x) - d.f_plus(&y)).abs() <= dist + 1e-9);
            assert!((d.f_minus(&x) - d.f_minus(&y)).abs() <= dist + 1e-9);
        }
    }

    #[test]
    fn arc_limit_set_has_boundary_and_regions() {
        // Λ = an arc of the equator circle; Λ⁺ ∖ Λ is the complementary arc
        let pts: Vec<_> = (0..200)
            .map(|i| {
                let a = -1.0 + 2.0 * i as f64 / 199.0;
                UniversalPoint::new(DVector::from_vec(vec![a.cos(), a.sin()]), 0.0)
            })
            .collect();
        let d = InvisibleDomain::from_universal(pts, 0.011, 1024).unwrap();
        assert!(d.boundary_size() > 0);
        let band = 2.0 * d.mesh();
        let deep = UniversalPoint::new(pole(), 1.4);
        assert_eq!(
            d.classify_region(&deep, band).unwrap().label,
            RegionLabel::FutureCore
        );
        let x1 = DVector::from_vec(vec![-1.0, 0.0]);
        let g = d.f_plus(&embed_equator(&x1));
        let below = UniversalPoint::new(embed_equator(&x1), g - 0.1);
        // exactly on the equator: conformal boundary
        assert_eq!(
            d.classify_region(&below, band).unwrap().label,
            RegionLabel::ConformalBoundary
        );
        let tilt = DVector::from_vec(vec![-0.999, 0.0, 0.0447]).normalize();
        let p = UniversalPoint::new(tilt, g - 0.1);
        assert_eq!(
            d.classify_region(&p, band).unwrap().label,
            RegionLabel::PastOfBoundary
        );
        let graph = d.lambda_pm_graph(Side::Plus, &circle_grid(64)).unwrap();
        assert_eq!(graph.len(), 64);
    }

    #[test]
    fn obj_export_shape() {
        let d = fuchsian(64);
        let obj = d.export_obj(4, 8).unwrap();
        let verts = obj.lines().filter(|l| l.starts_with("v ")).count();
        let faces = obj.lines().filter(|l| l.starts_with("f ")).count();
        assert_eq!(verts, 2 * (1 + 4 * 8));
        assert_eq!(faces, 2 * (8 + 3 * 8 * 2));
    }

    #[test]
    fn rotation_preserves_fuchsian_domain() {
        let d = fuchsian(128);
        let rot = crate::groups::compact_element(0.0, &crate::groups::plane_rotation(2, 0.7));
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let p = UniversalPoint::new(random_unit(&mut rng, 3), rng.random_range(-2.0..2.0));
            let q = d.act(&rot, &p);
            if d.envelope_margin(&p).abs() > 3.0 * d.mesh() {
                assert_eq!(
                    d.contains(&p, false).unwrap(),
                    d.contains(&q, false).unwrap()
                );
            }
        }
    }
}
