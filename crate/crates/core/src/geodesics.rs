//! Causal geodesics as points of the Grassmannian of 2-planes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::InvisibleDomain;
use crate::forms::{orthonormal_frame, quadratic, signature_of_frame, FormBasis, Signature};
use crate::groups::GroupElement;
use crate::limit_sets::LimitSetSample;
use crate::models::UniversalPoint;
use crate::projective::ProjectivePoint;
use crate::sphere::{random_tangent, random_unit};
use crate::{GeometryError, Result};

/// 2-plane of ℝ^d stored by a canonical Euclidean-orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane2 {
    frame: DMatrix<f64>,
}

/// Fixed generic reference vector used to canonicalize frames.
fn reference(d: usize, which: usize) -> DVector<f64> {
    DVector::from_fn(d, |i, _| {
        let k = (i + 1) as f64;
        match which {
            0 => (0.7548776662 * k).sin() + 1.3,
            1 => (1.3247179572 * k).cos() - 0.4 * k.sqrt(),
            _ => (2.1106 * k + 0.3).sin(),
        }
    })
}

impl Plane2 {
    pub fn from_vectors(a: &DVector<f64>, b: &DVector<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        let q = orthonormal_frame(&[a.clone(), b.clone()])?;
        Ok(Self::canonical(&q))
    }

    /// Projects fixed reference vectors onto the span and orthonormalizes,
    /// so equal spans give equal frames.
    fn canonical(q: &DMatrix<f64>) -> Self {
        let d = q.nrows();
        let project = |v: DVector<f64>| q * (q.transpose() * v);
        let mut cands: Vec<DVector<f64>> = (0..3).map(|w| project(reference(d, w))).collect();
        cands.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
        let f1 = cands[0].normalize();
        let mut second = None;
        for c in &cands[1..] {
            let r = c - &f1 * f1.dot(c);
            if r.norm() > 1e-3 * c.norm().max(1e-300) && r.norm() > 1e-8 {
                second = Some(r.normalize());
                break;
            }
        }
        let f2 = second.unwrap_or_else(|| {
            // every reference projects onto a line: complete with the frame itself
            let c0 = q.column(0).into_owned();
            let c1 = q.column(1).into_owned();
            let r0 = &c0 - &f1 * f1.dot(&c0);
            let r1 = &c1 - &f1 * f1.dot(&c1);
            if r0.norm() > r1.norm() {
                r0.normalize()
            } else {
                r1.normalize()
            }
        });
        Self {
            frame: DMatrix::from_columns(&[f1, f2]),
        }
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn column(&self, i: usize) -> DVector<f64> {
        self.frame.column(i).into_owned()
    }

    /// Euclidean projector onto the plane.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.frame * self.frame.transpose()
    }

    pub fn signature(&self) -> Signature {
        signature_of_frame(&self.frame, FormBasis::Diagonal)
    }

    /// `g·P`, for `g` acting in diagonal coordinates.
    pub fn act(&self, g: &GroupElement) -> Result<Plane2> {
        let m = g.diagonal_matrix() * &self.frame;
        Plane2::from_vectors(&m.column(0).into_owned(), &m.column(1).into_owned())
    }

    /// Plane `P × {0}` of one dimension higher.
    pub fn extend(&self) -> Plane2 {
        let d = self.dim();
        let mut f = DMatrix::zeros(d + 1, 2);
        f.view_mut((0, 0), (d, 2)).copy_from(&self.frame);
        Plane2::canonical(&f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeodesicClass {
    TimelikeAdS,
    LightlikeAdS,
    LightlikeEin,
    NotCausal,
}

pub fn classify(p: &Plane2) -> GeodesicClass {
    match p.signature() {
        Signature {
            neg: 2,
            pos: 0,
            zero: 0,
        } => GeodesicClass::TimelikeAdS,
        Signature {
            neg: 1,
            pos: 0,
            zero: 1,
        } => GeodesicClass::LightlikeAdS,
        Signature {
            neg: 0,
            pos: 0,
            zero: 2,
        } => GeodesicClass::LightlikeEin,
        _ => GeodesicClass::NotCausal,
    }
}

/// Largest principal angle between the planes, which is the Hausdorff
/// distance of their projective lines for the angle metric.
pub fn delta_metric(p: &Plane2, q: &Plane2) -> f64 {
    let overlap = p.frame.transpose() * &q.frame;
    let cos_min = overlap
        .singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let residual = &q.frame - &p.frame * &overlap;
    let sin_max = residual
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    sin_max.atan2(cos_min.max(0.0))
}

/// `d(q, ℙ(P))`: angle between the line `q` and the plane `P`, which equals
/// `δ(P, F_q)` for the fiber `F_q` of planes through `q`.
pub fn fiber_distance(p: &Plane2, q: &ProjectivePoint) -> f64 {
    let x = q.rep();
    let coeffs = p.frame.transpose() * x;
    let off = x - &p.frame * &coeffs;
    off.norm().atan2(coeffs.norm())
}

/// Whether the plane stays farther than `clearance` from every sampled
/// limit point. Samples of one dimension lower are embedded as `λ × {0}`.
pub fn avoids_limit_set(p: &Plane2, s: &LimitSetSample, clearance: f64) -> Result<bool> {
    if classify(p) == GeodesicClass::NotCausal {
        return Err(GeometryError::NotCausal);
    }
    Ok(min_limit_distance(p, s)? > clearance)
}

pub fn min_limit_distance(p: &Plane2, s: &LimitSetSample) -> Result<f64> {
    let d = p.dim();
    let mut best = f64::INFINITY;
    for pt in &s.points {
        let r = pt.rep();
        let v = if r.len() == d {
            r.clone()
        } else if r.len() + 1 == d {
            crate::sphere::embed_equator(r)
        } else {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                found: r.len(),
            });
        };
        best = best.min(fiber_distance(p, &ProjectivePoint::new(v)));
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub c_est: f64,
    pub witness_plane: Plane2,
    pub witness_point: ProjectivePoint,
    pub samples: usize,
}

/// Lower estimate of how much `g` separates planes from nearby fibers
/// around `p`.
///
/// Samples planes `P` with `d(p, ℙ(P)) < radius` and points `q` within
/// `ε ∈ [1e-6, 1e-1]` (log-uniform) of a point of `P` near `p`, and returns
/// the minimum of `δ(P, F_q) / δ(g·P, g·F_q)`. Values above 1 mean every
/// sampled pair is pulled together by `g`, i.e. pushed apart by `g⁻¹` on
/// `g·W_p`.
pub fn expansion_probe(
    g: &GroupElement,
    p: &ProjectivePoint,
    radius: f64,
    trials: usize,
    seed: u64,
) -> Result<ExpansionReport> {
    let d = p.dim();
    if g.dim() != d {
        return Err(GeometryError::DimensionMismatch {
            expected: g.dim(),
            found: d,
        });
    }
    let center = p.rep().clone();
    let samples: Vec<Option<(f64, usize, Plane2, ProjectivePoint)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let dir = random_tangent(&mut rng, &center);
            let a = rng.random_range(0.0..radius);
            let y = &center * a.cos() + &dir * a.sin();
            let w = random_unit(&mut rng, d);
            let plane = Plane2::from_vectors(&y, &w).ok()?;
            if fiber_distance(&plane, p) >= radius {
                return None;
            }
            let eps = 10f64.powf(rng.random_range(-6.0..-1.0));
            let perp = random_tangent(&mut rng, &y);
            let q = ProjectivePoint::new(&y * eps.cos() + perp * eps.sin());
            let before = fiber_distance(&plane, &q);
            if before < 1e-12 {
                return None;
            }
            let moved = plane.act(g).ok()?;
            let gq = crate::groups::act_projective(g, &q);
            let after = fiber_distance(&moved, &gq);
            if after <= 0.0 {
                return None;
            }
            Some((before / after, i, plane, q))
        })
        .collect();
    let count = samples.iter().filter(|s| s.is_some()).count();
    let best = samples
        .into_iter()
        .flatten()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .ok_or(GeometryError::DegenerateSample)?;
    Ok(ExpansionReport {
        c_est: best.0,
        witness_plane: best.2,
        witness_point: best.3,
        samples: count,
    })
}

/// Photon of Ein_{1,n} through `(x, θ = 0)` with initial direction `v`:
/// the plane spanned by `(1, 0, x)` and `(0, 1, v)`.
pub fn tangent_to_photon(x: &DVector<f64>, v: &DVector<f64>) -> Result<Plane2> {
    let k = x.len();
    let mut a = DVector::zeros(k + 2);
    a[0] = 1.0;
    a.rows_mut(2, k).copy_from(x);
    let mut b = DVector::zeros(k + 2);
    b[1] = 1.0;
    b.rows_mut(2, k).copy_from(v);
    Plane2::from_vectors(&a, &b)
}

/// Inverse of [`tangent_to_photon`]: the slices `θ = 0` and `θ = π/2` of
/// the photon give `x(0)` and `x(π/2) = x′(0)`.
pub fn photon_to_tangent(p: &Plane2) -> Result<(DVector<f64>, DVector<f64>)> {
    if classify(p) != GeodesicClass::LightlikeEin {
        return Err(GeometryError::NotTotallyIsotropic);
    }
    let f = &p.frame;
    let slice = |row: usize, keep: usize| -> DVector<f64> {
        let c = DVector::from_vec(vec![-f[(row, 1)], f[(row, 0)]]);
        let v = f * c;
        let s = v[keep];
        v / s
    };
    let a = slice(1, 0);
    let b = slice(0, 1);
    let k = p.dim() - 2;
    Ok((
        a.rows(2, k).into_owned().normalize(),
        b.rows(2, k).into_owned().normalize(),
    ))
}

/// A causal geodesic traced in the universal space of one dimension up.
#[derive(Debug, Clone)]
pub enum UniversalCurve {
    /// `t ↦ (x cos t + v sin t, t)`.
    Photon { x: DVector<f64>, v: DVector<f64> },
    /// The AdS circle `s ↦ a cos s + b sin s` with `q(a) = q(b) = −1`,
    /// embedded in the upper conformal copy.
    Timelike { a: DVector<f64>, b: DVector<f64> },
}

/// Parametrization of a causal plane of ℝ^{2,n} (AdS geodesics and photons
/// of the boundary) or of a photon plane of ℝ^{2,n+1}, as a curve of the
/// universal space `S^n × ℝ`. `ambient` is the dimension `n + 3` of the
/// Einstein space the curve is drawn in.
pub fn universal_curve(p: &Plane2, ambient: usize) -> Result<UniversalCurve> {
    let class = classify(p);
    if p.dim() == ambient {
        return match class {
            GeodesicClass::LightlikeEin => {
                let (x, v) = photon_to_tangent(p)?;
                Ok(UniversalCurve::Photon { x, v })
            }
            _ => Err(GeometryError::NotTotallyIsotropic),
        };
    }
    if p.dim() + 1 != ambient {
        return Err(GeometryError::DimensionMismatch {
            expected: ambient - 1,
            found: p.dim(),
        });
    }
    match class {
        GeodesicClass::LightlikeEin => universal_curve(&p.extend(), ambient),
        GeodesicClass::LightlikeAdS => {
            // null direction ℓ and a unit timelike w ⊥ ℓ lift to the photon
            // spanned by (ℓ, 0) and (w, 1)
            let f = &p.frame;
            let j = crate::forms::gram_matrix(FormBasis::Diagonal, p.dim());
            let gram = f.transpose() * &j * f;
            let eig = nalgebra::SymmetricEigen::new((&gram + gram.transpose()) * 0.5);
            let (iz, it) = if eig.eigenvalues[0].abs() < eig.eigenvalues[1].abs() {
                (0, 1)
            } else {
                (1, 0)
            };
            let l = f * eig.eigenvectors.column(iz);
            let mut w = f * eig.eigenvectors.column(it);
            w /= (-quadratic(&w, FormBasis::Diagonal)).sqrt();
            let d = p.dim();
            let mut a = DVector::zeros(d + 1);
            a.rows_mut(0, d).copy_from(&l);
            let mut b = DVector::zeros(d + 1);
            b.rows_mut(0, d).copy_from(&w);
            b[d] = 1.0;
            universal_curve(&Plane2::from_vectors(&a, &b)?, ambient)
        }
        GeodesicClass::TimelikeAdS => {
            let f = &p.frame;
            let j = crate::forms::gram_matrix(FormBasis::Diagonal, p.dim());
            let gram = -(f.transpose() * &j * f);
            let eig = nalgebra::SymmetricEigen::new((&gram + gram.transpose()) * 0.5);
            let a = f * eig.eigenvectors.column(0) / eig.eigenvalues[0].sqrt();
            let mut b = f * eig.eigenvectors.column(1) / eig.eigenvalues[1].sqrt();
            // orient the circle so that time increases with s
            if a[0] * b[1] - a[1] * b[0] < 0.0 {
                b = -b;
            }
            Ok(UniversalCurve::Timelike { a, b })
        }
        GeodesicClass::NotCausal => Err(GeometryError::NotCausal),
    }
}

/// Points of the curve with `t` in `[lo, hi]`, about `samples` of them.
pub fn sample_curve(
    curve: &UniversalCurve,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Vec<UniversalPoint> {
    let samples = samples.max(2);
    match curve {
        UniversalCurve::Photon { x, v } => (0..samples)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
                UniversalPoint::new(x * t.cos() + v * t.sin(), t)
            })
            .collect(),
        UniversalCurve::Timelike { a, b } => {
            // one period of s advances t by 2π; unwrap t along two periods
            // and shift into the requested range
            let fine = 4 * samples;
            let mut pts = Vec::with_capacity(fine);
            let mut prev: Option<f64> = None;
            for i in 0..fine {
                let s = 4.0 * PI * i as f64 / fine as f64;
                let y = a * s.cos() + b * s.sin();
                let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
                let theta = y[1].atan2(y[0]);
                let t = match prev {
                    None => theta,
                    Some(p) => theta + 2.0 * PI * ((p - theta) / (2.0 * PI)).round(),
                };
                prev = Some(t);
                let k = y.len();
                let mut x = DVector::zeros(k - 1);
                x.rows_mut(0, k - 2).copy_from(&y.rows(2, k - 2));
                x[k - 2] = 1.0;
                pts.push(UniversalPoint::new(x / r, t));
            }
            let shift = 2.0 * PI * ((lo - pts[0].t) / (2.0 * PI)).floor();
            pts.into_iter()
                .map(|p| UniversalPoint::new(p.x, p.t + shift))
                .filter(|p| p.t >= lo && p.t <= hi)
                .collect()
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntersectionReport {
    pub hits: bool,
    /// Parameter (universal time) range of the longest inside run.
    pub arc: Option<(f64, f64)>,
    /// Maximal inside runs after merging breaks inside the mesh band.
    pub runs: usize,
    pub raw_runs: usize,
}

/// Samples the geodesic across the time window of Ω and reports the inside
/// runs. Runs separated only by samples within `2·mesh` of the boundary
/// are merged.
pub fn intersect_domain(
    p: &Plane2,
    d: &InvisibleDomain,
    samples: usize,
) -> Result<IntersectionReport> {
    let curve = universal_curve(p, d.sphere_dim() + 2)?;
    let c = d.center();
    let pts = sample_curve(&curve, c - PI, c + PI, samples);
    let margins: Vec<f64> = pts.par_iter().map(|q| d.envelope_margin(q)).collect();
    let inside: Vec<bool> = margins.iter().map(|m| *m > d.mesh()).collect();
    let mut raw = Vec::new();
    let mut start = None;
    for (i, &b) in inside.iter().enumerate() {
        match (b, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                raw.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        raw.push((s, inside.len() - 1));
    }
    let band = 2.0 * d.mesh();
    let mut merged: Vec<(usize, usize)> = Vec::new();
    for r in &raw {
        if let Some(last) = merged.last_mut() {
            if margins[last.1 + 1..r.0].iter().all(|m| *m > -band) {
                last.1 = r.1;
                continue;
            }
        }
        merged.push(*r);
    }
    let arc = merged
        .iter()
        .max_by_key(|r| r.1 - r.0)
        .map(|r| (pts[r.0].t, pts[r.1].t));
    Ok(IntersectionReport {
        hits: !raw.is_empty(),
        arc,
        runs: merged.len(),
        raw_runs: raw.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::random_compact;
    use crate::models::sigma;

    fn e(d: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(d);
        v[i] = 1.0;
        v
    }

    #[test]
    fn canonical_frame_is_span_invariant() {
        let a = DVector::from_vec(vec![1.0, 2.0, 0.5, -1.0]);
        let b = DVector::from_vec(vec![0.0, 1.0, 3.0, 1.0]);
        let p = Plane2::from_vectors(&a, &b).unwrap();
        let q = Plane2::from_vectors(&(&a * 2.0 - &b), &(&b * -0.3 + &a)).unwrap();
        assert!((p.frame() - q.frame()).amax() < 1e-10);
        let f = p.frame();
        assert!((f.transpose() * f - DMatrix::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn classify_examples() {
        let t = Plane2::from_vectors(&e(4, 0), &e(4, 1)).unwrap();
        assert_eq!(classify(&t), GeodesicClass::TimelikeAdS);
        let l =
            Plane2::from_vectors(&DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0]), &e(4, 1)).unwrap();
        assert_eq!(classify(&l), GeodesicClass::LightlikeAdS);
        let i = Plane2::from_vectors(
            &DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0]),
            &DVector::from_vec(vec![0.0, 1.0, 0.0, 1.0]),
        )
        .unwrap();
        assert_eq!(classify(&i), GeodesicClass::LightlikeEin);
        let s = Plane2::from_vectors(&e(4, 2), &e(4, 3)).unwrap();
        assert_eq!(classify(&s), GeodesicClass::NotCausal);
    }

    #[test]
    fn delta_examples() {
        let p = Plane2::from_vectors(&e(4, 0), &e(4, 1)).unwrap();
        let q = Plane2::from_vectors(&e(4, 0), &e(4, 2)).unwrap();
        assert!(delta_metric(&p, &p) < 1e-12);
        assert!((delta_metric(&p, &q) - PI / 2.0).abs() < 1e-12);
        let a: f64 = 0.37;
        let r = Plane2::from_vectors(&e(4, 0), &(e(4, 1) * a.cos() + e(4, 2) * a.sin())).unwrap();
        assert!((delta_metric(&p, &r) - a).abs() < 1e-12);
    }

    #[test]
    fn fiber_examples() {
        let p = Plane2::from_vectors(&e(4, 0), &e(4, 1)).unwrap();
        assert!(fiber_distance(&p, &ProjectivePoint::new(e(4, 0) + e(4, 1))) < 1e-15);
        assert!((fiber_distance(&p, &ProjectivePoint::new(e(4, 2))) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn timelike_planes_miss_null_lines() {
        let p = Plane2::from_vectors(&e(4, 0), &e(4, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let x = random_unit(&mut rng, 2);
            let th: f64 = rng.random_range(0.0..2.0 * PI);
            let v = DVector::from_vec(vec![th.cos(), th.sin(), x[0], x[1]]);
            // the distance from a null line to the negative plane is π/4
            assert!((fiber_distance(&p, &ProjectivePoint::new(v)) - PI / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn photon_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..200 {
            let x = random_unit(&mut rng, 3);
            let v = random_tangent(&mut rng, &x);
            let p = tangent_to_photon(&x, &v).unwrap();
            assert_eq!(classify(&p), GeodesicClass::LightlikeEin);
            let (x2, v2) = photon_to_tangent(&p).unwrap();
            assert!((x2 - &x).norm() < 1e-9 && (v2 - &v).norm() < 1e-9);
        }
        let p = Plane2::from_vectors(&e(5, 0), &e(5, 1)).unwrap();
        assert_eq!(
            photon_to_tangent(&p).unwrap_err(),
            GeometryError::NotTotallyIsotropic
        );
    }

    #[test]
    fn photon_reaches_sigma() {
        let x = DVector::from_vec(vec![0.0, 0.6, 0.8]);
        let v = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let p = tangent_to_photon(&x, &v).unwrap();
        let target = sigma(&UniversalPoint::new(x.clone(), 0.0), 1);
        let lift = target.lift();
        let off = (&lift - p.projector() * &lift).norm();
        assert!(off < 1e-9);
    }

    #[test]
    fn compact_elements_preserve_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..100 {
            let p =
                Plane2::from_vectors(&random_unit(&mut rng, 5), &random_unit(&mut rng, 5)).unwrap();
            let q =
                Plane2::from_vectors(&random_unit(&mut rng, 5), &random_unit(&mut rng, 5)).unwrap();
            let k = random_compact(&mut rng, 3);
            let d0 = delta_metric(&p, &q);
            let d1 = delta_metric(&p.act(&k).unwrap(), &q.act(&k).unwrap());
            assert!((d0 - d1).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_probe_is_one() {
        let g = GroupElement::identity(4, FormBasis::Diagonal);
        let p = ProjectivePoint::new(DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0]));
        let r = expansion_probe(&g, &p, 0.5, 200, 1).unwrap();
        assert!((r.c_est - 1.0).abs() < 1e-9, "{}", r.c_est);
        assert_eq!(
            expansion_probe(&g, &p, 0.5, 0, 1).unwrap_err(),
            GeometryError::DegenerateSample
        );
    }

    #[test]
    fn timelike_curve_is_in_ads_copy() {
        let p = Plane2::from_vectors(&e(4, 0), &e(4, 1)).unwrap();
        let c = universal_curve(&p, 5).unwrap();
        let pts = sample_curve(&c, -PI, PI, 64);
        assert!(pts.len() > 30);
        for q in &pts {
            assert!((q.x.norm() - 1.0).abs() < 1e-12);
            assert!(q.x[2] > 0.0);
        }
        assert!(pts.windows(2).all(|w| w[1].t > w[0].t));
    }
}
