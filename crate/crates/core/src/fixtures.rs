//! Built-in example groups and limit sets, with checks of their analytic
//! reference data.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::causality::{causal_classify, CausalRelation, CompactSample};
use crate::domain::{act_matrix_in_window, extended_matrix, InvisibleDomain, RegionLabel, Side};
use crate::forms::{form, FormBasis};
use crate::geodesics::{avoids_limit_set, intersect_domain, tangent_to_photon, Plane2};
use crate::groups::{compact_element, plane_rotation, weyl_element, GroupElement};
use crate::limit_sets::{
    approximate_limit_set, certify_negative, visit_words_from, GroupPresentation, LimitSetSample,
    RelationHint,
};
use crate::models::UniversalPoint;
use crate::sphere::{
    angle_acos, circle_grid, embed_equator, fibonacci_sphere, random_tangent, random_unit,
    sphere_grid,
};
use crate::{GeometryError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixtureKind {
    /// `⟨a(λ, μ)⟩` in O(2,n).
    CyclicProximal { n: usize, lambda: f64, mu: f64 },
    /// Free group on two boosts of translation length `separation` with
    /// perpendicular axes, in O(1,2) ⊂ O(2,2).
    SchottkyO12inO22 { separation: f64 },
    /// `Λ = S^{n−1} × {0}`.
    FuchsianLatticeSphere { n: usize },
    /// `Λ = S^p × {0}` inside `S^{n−1}`.
    JoinSpheres { p: usize, n: usize },
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub mesh: f64,
    pub presentation: Option<GroupPresentation>,
    /// Analytic limit set sampled at spacing about `mesh`.
    pub analytic: Option<Vec<UniversalPoint>>,
}

/// Boost of rapidity `r` in the `(u, x₁)` plane of ℝ^{2,2}.
pub fn boost_u_x1(r: f64) -> GroupElement {
    let mut m = DMatrix::identity(4, 4);
    m[(0, 0)] = r.cosh();
    m[(2, 2)] = r.cosh();
    m[(0, 2)] = r.sinh();
    m[(2, 0)] = r.sinh();
    GroupElement::validate(m, FormBasis::Diagonal).expect("boosts preserve the form")
}

/// Half-width of the ping-pong arcs of a boost of translation length `l`:
/// the complement of the repelling arc lands in the attracting arc.
pub fn ping_pong_half_width(l: f64) -> f64 {
    2.0 * (-l / 2.0).exp().atan()
}

fn circle_angle(g: &GroupElement, phi: f64) -> f64 {
    let v = g.apply_diagonal(&DVector::from_vec(vec![1.0, 0.0, phi.cos(), phi.sin()]));
    v[3].atan2(v[2])
}

fn arc_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Generators `a, b` of the Schottky group, after checking the ping-pong
/// condition on a dense sample of the boundary circle.
pub fn schottky_generators(separation: f64) -> Result<(GroupElement, GroupElement)> {
    let w = ping_pong_half_width(separation);
    if !separation.is_finite() || separation <= 0.0 || w >= PI / 4.0 {
        return Err(GeometryError::PingPongFailure { half_width: w });
    }
    let a = boost_u_x1(separation);
    let r = compact_element(0.0, &plane_rotation(2, PI / 2.0));
    let b = r.compose(&a).compose(&r.inverse());
    // letters with their attracting arc centres and repelling arc centres
    let letters = [
        (a.clone(), 0.0, PI),
        (a.inverse(), PI, 0.0),
        (b.clone(), PI / 2.0, 1.5 * PI),
        (b.inverse(), 1.5 * PI, PI / 2.0),
    ];
    for (g, attract, repel) in &letters {
        for i in 0..4096 {
            let phi = 2.0 * PI * i as f64 / 4096.0;
            if arc_distance(phi, *repel) < w {
                continue;
            }
            if arc_distance(circle_angle(g, phi), *attract) > w + 1e-9 {
                return Err(GeometryError::PingPongFailure { half_width: w });
            }
        }
    }
    Ok((a, b))
}

/// Sample of `S^k`, spacing about `mesh`, inside the coordinates
/// `offset..offset + k + 1` of ℝ^dim.
fn subsphere(k: usize, offset: usize, dim: usize, mesh: f64) -> Vec<DVector<f64>> {
    let local: Vec<DVector<f64>> = match k {
        0 => vec![DVector::from_vec(vec![1.0]), DVector::from_vec(vec![-1.0])],
        1 => circle_grid((2.0 * PI / mesh).ceil() as usize),
        2 => fibonacci_sphere((4.0 * PI / (mesh * mesh)).ceil() as usize),
        _ => sphere_grid(k + 1, (4.0 * PI / (mesh * mesh)).ceil() as usize, 7),
    };
    local
        .into_iter()
        .map(|v| {
            let mut out = DVector::zeros(dim);
            out.rows_mut(offset, k + 1).copy_from(&v);
            out
        })
        .collect()
}

pub fn build_fixture(kind: FixtureKind, mesh: f64) -> Result<Fixture> {
    if !mesh.is_finite() || mesh <= 0.0 {
        return Err(GeometryError::InvalidParameter(
            "mesh must be positive".into(),
        ));
    }
    let (presentation, analytic) = match kind {
        FixtureKind::CyclicProximal { n, lambda, mu } => {
            if n < 2 {
                return Err(GeometryError::InvalidDimension(n));
            }
            let g = weyl_element(n, lambda, mu);
            (
                Some(GroupPresentation::new(vec![g], RelationHint::Free)?),
                None,
            )
        }
        FixtureKind::SchottkyO12inO22 { separation } => {
            let (a, b) = schottky_generators(separation)?;
            (
                Some(GroupPresentation::new(vec![a, b], RelationHint::Free)?),
                None,
            )
        }
        FixtureKind::FuchsianLatticeSphere { n } => {
            if n < 2 {
                return Err(GeometryError::InvalidDimension(n));
            }
            let pts = subsphere(n - 1, 0, n, mesh)
                .into_iter()
                .map(|x| UniversalPoint::new(x, 0.0))
                .collect();
            (None, Some(pts))
        }
        FixtureKind::JoinSpheres { p, n } => {
            if n < 2 {
                return Err(GeometryError::InvalidDimension(n));
            }
            if p + 2 > n {
                return Err(GeometryError::InvalidParameter(format!(
                    "S^{p} does not leave room for a join partner in S^{}",
                    n - 1
                )));
            }
            let pts = subsphere(p, 0, n, mesh)
                .into_iter()
                .map(|x| UniversalPoint::new(x, 0.0))
                .collect();
            (None, Some(pts))
        }
    };
    Ok(Fixture {
        kind,
        mesh,
        presentation,
        analytic,
    })
}

/// Parameters of the sampled Schottky limit set.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampleParams {
    pub max_len: usize,
    pub gap_min: f64,
    pub dedupe_radius: f64,
}

impl Default for SampleParams {
    fn default() -> Self {
        Self {
            max_len: 9,
            gap_min: 10.0,
            dedupe_radius: 1e-3,
        }
    }
}

impl Fixture {
    pub fn limit_set(&self, params: SampleParams) -> Result<LimitSetSample> {
        match (&self.presentation, &self.analytic) {
            (Some(g), _) => {
                approximate_limit_set(g, params.max_len, params.gap_min, params.dedupe_radius)
            }
            (None, Some(pts)) => {
                let klein = pts
                    .iter()
                    .map(|p| crate::models::KleinPoint::ein(p.lift()))
                    .collect::<Result<Vec<_>>>()?;
                let mut s = LimitSetSample::from_points(klein, self.mesh);
                s.universal_lift = Some(pts.clone());
                Ok(s)
            }
            (None, None) => Err(GeometryError::EmptySample),
        }
    }

    /// Invisible domain with an equator grid of `grid_count` points for the
    /// conformal boundary.
    pub fn domain(&self, params: SampleParams, grid_count: usize) -> Result<InvisibleDomain> {
        let s = self.limit_set(params)?;
        InvisibleDomain::build_with_grid(s, self.mesh, grid_count, 0)
    }
}

/// Pole of the hemisphere of `S^n` containing `x`.
fn hemisphere_pole(x: &DVector<f64>) -> DVector<f64> {
    let n = x.len();
    let mut p = DVector::zeros(n);
    p[n - 1] = if x[n - 1] >= 0.0 { 1.0 } else { -1.0 };
    p
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiamondReport {
    pub mesh: f64,
    pub max_envelope_error: f64,
    pub envelope_bound: f64,
    pub membership_checked: usize,
    pub membership_mismatches: usize,
    pub boundary_empty: bool,
    pub passed: bool,
}

/// Compares Ω for `Λ = S^{n−1} × {0}` with the two diamonds
/// `I⁻(pᵢ⁺) ∩ I⁺(pᵢ⁻)` spanned by the poles `pᵢ^± = (±pole, ±π/2)`.
pub fn check_diamond(
    fixture: &Fixture,
    domain: &InvisibleDomain,
    grid: &[DVector<f64>],
    times: &[f64],
) -> Result<DiamondReport> {
    if !matches!(fixture.kind, FixtureKind::FuchsianLatticeSphere { .. }) {
        return Err(GeometryError::InvalidParameter(
            "diamond check needs the sphere fixture".into(),
        ));
    }
    let mesh = fixture.mesh;
    let err = grid
        .par_iter()
        .map(|x| {
            let pole = hemisphere_pole(x);
            (domain.f_plus(x) - (PI / 2.0 - angle_acos(x, &pole))).abs()
        })
        .reduce(|| 0.0, f64::max);
    let results: Vec<Option<bool>> = grid
        .par_iter()
        .flat_map_iter(|x| {
            let pole = hemisphere_pole(x);
            times.iter().map(move |&t| {
                let p = UniversalPoint::new(x.clone(), t);
                let top = UniversalPoint::new(pole.clone(), PI / 2.0);
                let bottom = UniversalPoint::new(pole.clone(), -PI / 2.0);
                let margin = PI / 2.0 - angle_acos(x, &pole) - t.abs();
                if margin.abs() <= mesh {
                    return None;
                }
                let in_diamond = causal_classify(&p, &top).ok()? == CausalRelation::TimelikeRelated
                    && causal_classify(&p, &bottom).ok()? == CausalRelation::TimelikeRelated
                    && t < PI / 2.0
                    && t > -PI / 2.0;
                let inside = domain.contains(&p, false).ok()?;
                Some(inside == in_diamond)
            })
        })
        .collect();
    let checked = results.iter().flatten().count();
    let mismatches = results.iter().flatten().filter(|ok| !**ok).count();
    let boundary_empty = domain.boundary_size() == 0;
    let bound = 2.0 * mesh;
    Ok(DiamondReport {
        mesh,
        max_envelope_error: err,
        envelope_bound: bound,
        membership_checked: checked,
        membership_mismatches: mismatches,
        boundary_empty,
        passed: err <= bound && mismatches == 0 && boundary_empty,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JoinReport {
    pub mesh: f64,
    pub max_graph_error: f64,
    pub sq_slice_error: f64,
    pub dual_checked: usize,
    pub dual_mismatches: usize,
    pub passed: bool,
}

/// Distance from `y ∈ S^{n−1}` to `S^p = S^{n−1} ∩ span(e₀..e_p)`.
pub fn distance_to_subsphere(y: &DVector<f64>, p: usize) -> f64 {
    let inner = y.rows(0, p + 1).norm();
    let outer = y.rows(p + 1, y.len() - p - 1).norm();
    outer.atan2(inner)
}

/// Checks that `Λ⁺` is the join of `S^p × {0}` and `S^q × {π/2}` and that
/// the envelope test of `Λ⁺` agrees with the dual cone of `S^p ∪ S^q`.
pub fn check_join(
    fixture: &Fixture,
    domain: &InvisibleDomain,
    equator_grid: &[DVector<f64>],
    probes: &[UniversalPoint],
) -> Result<JoinReport> {
    let FixtureKind::JoinSpheres { p, n } = fixture.kind else {
        return Err(GeometryError::InvalidParameter(
            "join check needs the join fixture".into(),
        ));
    };
    let mesh = fixture.mesh;
    let graph = domain.lambda_pm_graph(Side::Plus, equator_grid)?;
    let max_graph_error = graph
        .domain_points()
        .iter()
        .zip(graph.values())
        .map(|(y, g)| (g - distance_to_subsphere(y, p)).abs())
        .fold(0.0, f64::max);
    let q = n - 2 - p;
    let sq = subsphere(q, p + 1, n, mesh);
    let sq_slice_error = sq
        .iter()
        .map(|y| (domain.f_plus(&embed_equator(y)) - PI / 2.0).abs())
        .fold(0.0, f64::max);

    let lambda_plus = CompactSample::new(
        graph
            .points()
            .into_iter()
            .map(|u| UniversalPoint::new(embed_equator(&u.x), u.t))
            .collect(),
        mesh,
    )?;
    let generators: Vec<DVector<f64>> = subsphere(p, 0, n, mesh)
        .iter()
        .map(|x| UniversalPoint::new(embed_equator(x), 0.0).lift())
        .chain(
            sq.iter()
                .map(|x| UniversalPoint::new(embed_equator(x), PI / 2.0).lift()),
        )
        .collect();
    let center = PI / 4.0;
    let results: Vec<Option<bool>> = probes
        .par_iter()
        .map(|pt| {
            if pt.x[n] <= 0.0 {
                return None;
            }
            let upper = lambda_plus.future_envelope(&pt.x);
            let lower = lambda_plus.past_envelope(&pt.x);
            let margin = (upper - pt.t).min(pt.t - lower);
            if margin.abs() <= 2.0 * mesh {
                return None;
            }
            let lift = pt.lift();
            let dual = (pt.t - center).abs() < PI
                && generators
                    .iter()
                    .all(|l| form(&lift, l, FormBasis::Diagonal) < 0.0);
            Some(dual == (margin > 0.0))
        })
        .collect();
    let dual_checked = results.iter().flatten().count();
    let dual_mismatches = results.iter().flatten().filter(|ok| !**ok).count();
    let bound = 2.0 * mesh;
    Ok(JoinReport {
        mesh,
        max_graph_error,
        sq_slice_error,
        dual_checked,
        dual_mismatches,
        passed: max_graph_error <= bound && sq_slice_error <= bound && dual_mismatches == 0,
    })
}

/// Seeded probes `(x, t)` with `x` uniform on `S^{sphere_dim − 1}` and `t`
/// uniform in `(center − π, center + π)`.
pub fn random_probes(
    sphere_dim: usize,
    count: usize,
    center: f64,
    seed: u64,
) -> Vec<UniversalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = random_unit(&mut rng, sphere_dim);
            UniversalPoint::new(x, center + rng.random_range(-PI..PI))
        })
        .collect()
}

/// Photon through each point with a random spatial direction. Photons
/// through points of Ω avoid Λ.
pub fn photons_through(points: &[UniversalPoint], seed: u64) -> Result<Vec<Plane2>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points
        .iter()
        .map(|p| {
            let v0 = random_tangent(&mut rng, &p.x);
            let (s, c) = p.t.sin_cos();
            let x = &p.x * c - &v0 * s;
            let v = &p.x * s + &v0 * c;
            tangent_to_photon(&x, &v)
        })
        .collect()
}

/// Product ball `{d₀(x, c.x) ≤ r, |t − c.t| ≤ r}` in the universal space.
#[derive(Debug, Clone)]
pub struct ProbeBall {
    pub center: UniversalPoint,
    pub radius: f64,
}

impl ProbeBall {
    pub fn contains(&self, p: &UniversalPoint) -> bool {
        angle_acos(&p.x, &self.center.x) <= self.radius
            && (p.t - self.center.t).abs() <= self.radius
    }

    /// Membership of the point with Klein representative `v`, lifted to the
    /// window `(center − π, center + π]`.
    pub fn contains_image(&self, v: &DVector<f64>, center: f64) -> bool {
        let x = v.rows(2, v.len() - 2);
        let norm = x.norm();
        let cos = (x.dot(&self.center.x) / norm).clamp(-1.0, 1.0);
        if cos.acos() > self.radius {
            return false;
        }
        let theta = v[1].atan2(v[0]);
        let mut t = theta + 2.0 * PI * ((center - theta) / (2.0 * PI)).round();
        if t <= center - PI {
            t += 2.0 * PI;
        }
        (t - self.center.t).abs() <= self.radius
    }

    /// Deterministic sample of the ball.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<UniversalPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = vec![self.center.clone()];
        while out.len() < count {
            let w = random_unit(&mut rng, self.center.dim());
            let t = w.clone() - &self.center.x * self.center.x.dot(&w);
            if t.norm() < 1e-9 {
                continue;
            }
            let a = rng.random_range(0.0..self.radius);
            let x = &self.center.x * a.cos() + t.normalize() * a.sin();
            let dt = rng.random_range(-self.radius..self.radius);
            out.push(UniversalPoint::new(x, self.center.t + dt));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProperReport {
    /// Entry `L` counts words of length `≤ L` (identity included) moving
    /// some sample of `K` back into `K`.
    pub return_counts: Vec<usize>,
    pub acausal_checked: usize,
    pub acausal_violations: usize,
}

impl ProperReport {
    /// Whether the return count no longer changes from length `from` on.
    pub fn stabilized_from(&self, from: usize) -> bool {
        from < self.return_counts.len()
            && self.return_counts[from..]
                .iter()
                .all(|c| *c == self.return_counts[from])
    }
}

/// Return counts to a ball `K ⊂ Ω` and orbit acausality of probe points,
/// over all reduced words up to `max_len` (`acausal_len` for the latter).
pub fn properness_probe(
    fixture: &Fixture,
    domain: &InvisibleDomain,
    ball: &ProbeBall,
    ball_samples: &[UniversalPoint],
    probes: &[UniversalPoint],
    max_len: usize,
    acausal_len: usize,
) -> Result<ProperReport> {
    let Some(g) = &fixture.presentation else {
        return Err(GeometryError::InvalidParameter(
            "properness needs a matrix group".into(),
        ));
    };
    let ambient = domain.sphere_dim() + 2;
    let center = domain.center();
    let basis = g.generators()[0].basis();
    let extend =
        |m: &DMatrix<f64>| extended_matrix(&GroupElement::trusted(m.clone(), basis), ambient);
    let lifts: Vec<DVector<f64>> = ball_samples.iter().map(UniversalPoint::lift).collect();
    let prefixes: Vec<Vec<usize>> = (0..g.letter_count())
        .filter(|_| max_len > 0)
        .map(|l| vec![l])
        .collect();
    let tallies: Vec<(Vec<usize>, usize, usize)> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut per_len = vec![0usize; max_len + 1];
            let mut checked = 0;
            let mut violations = 0;
            let mut buf = DVector::zeros(ambient);
            let start = g.letter(prefix[0]).matrix().clone();
            visit_words_from(
                g,
                prefix,
                &start,
                max_len,
                &mut |w: &[usize], m: &DMatrix<f64>| {
                    let e = extend(m);
                    if lifts.iter().any(|l| {
                        e.mul_to(l, &mut buf);
                        ball.contains_image(&buf, center)
                    }) {
                        per_len[w.len()] += 1;
                    }
                    if w.len() <= acausal_len {
                        for p in probes {
                            let q = act_matrix_in_window(&e, p, center);
                            checked += 1;
                            if !matches!(causal_classify(&q, p), Ok(CausalRelation::Unrelated)) {
                                violations += 1;
                            }
                        }
                    }
                },
            );
            (per_len, checked, violations)
        })
        .collect();
    let mut per_len = vec![0usize; max_len + 1];
    per_len[0] = 1;
    let mut checked = 0;
    let mut violations = 0;
    for (counts, c, v) in tallies {
        for (total, x) in per_len.iter_mut().zip(counts) {
            *total += x;
        }
        checked += c;
        violations += v;
    }
    let mut cumulative = Vec::with_capacity(per_len.len());
    let mut total = 0;
    for c in per_len {
        total += c;
        cumulative.push(total);
    }
    Ok(ProperReport {
        return_counts: cumulative,
        acausal_checked: checked,
        acausal_violations: violations,
    })
}

/// One checked bound of a verification suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            passed: value <= bound,
        }
    }

    fn flag(name: &str, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            bound: 1.0,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub mesh: f64,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub n: usize,
    pub mesh: f64,
    pub seed: u64,
    pub max_len: usize,
}

pub const SUITES: [&str; 4] = ["fuchsian-diamond", "join", "schottky", "cyclic"];

/// Runs a named verification suite.
pub fn run_suite(name: &str, opts: SuiteOptions) -> Result<SuiteReport> {
    let checks = match name {
        "fuchsian-diamond" => suite_diamond(opts)?,
        "join" => suite_join(opts)?,
        "schottky" => suite_schottky(opts)?,
        "cyclic" => suite_cyclic(opts)?,
        other => {
            return Err(GeometryError::InvalidParameter(format!(
                "unknown suite `{other}` (expected one of {})",
                SUITES.join(", ")
            )))
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: name.into(),
        mesh: opts.mesh,
        seed: opts.seed,
        checks,
        passed,
    })
}

fn suite_diamond(opts: SuiteOptions) -> Result<Vec<Check>> {
    let f = build_fixture(FixtureKind::FuchsianLatticeSphere { n: opts.n }, opts.mesh)?;
    let d = f.domain(
        SampleParams::default(),
        crate::domain::default_boundary_grid(opts.n, opts.mesh),
    )?;
    let grid = sphere_grid(opts.n + 1, 2000, opts.seed);
    let times: Vec<f64> = (0..41).map(|i| -2.0 + 4.0 * i as f64 / 40.0).collect();
    let r = check_diamond(&f, &d, &grid, &times)?;
    Ok(vec![
        Check::at_most("envelope_deviation", r.max_envelope_error, r.envelope_bound),
        Check::at_most("diamond_mismatches", r.membership_mismatches as f64, 0.0),
        Check::flag("conformal_boundary_empty", r.boundary_empty),
    ])
}

fn suite_join(opts: SuiteOptions) -> Result<Vec<Check>> {
    let n = opts.n.max(3);
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let probes: Vec<UniversalPoint> = (0..4000)
        .map(|_| UniversalPoint::new(random_unit(&mut rng, n + 1), rng.random_range(-1.0..2.5)))
        .collect();
    for p in 0..=(n - 2).min(1) {
        let f = build_fixture(FixtureKind::JoinSpheres { p, n }, opts.mesh)?;
        let d = f.domain(SampleParams::default(), 64)?;
        let grid = sphere_grid(n, 3000, opts.seed);
        let r = check_join(&f, &d, &grid, &probes)?;
        let bound = 2.0 * opts.mesh;
        checks.push(Check::at_most(
            &format!("join_p{p}_graph_deviation"),
            r.max_graph_error,
            bound,
        ));
        checks.push(Check::at_most(
            &format!("join_p{p}_sq_slice"),
            r.sq_slice_error,
            bound,
        ));
        checks.push(Check::at_most(
            &format!("join_p{p}_dual_mismatches"),
            r.dual_mismatches as f64,
            0.0,
        ));
    }
    Ok(checks)
}

/// Standard Schottky setup used by the suite and by the CLI.
pub fn schottky_domain(mesh: f64, max_len: usize) -> Result<(Fixture, InvisibleDomain)> {
    let f = build_fixture(FixtureKind::SchottkyO12inO22 { separation: 2.0 }, mesh)?;
    let params = SampleParams {
        max_len,
        ..SampleParams::default()
    };
    let d = f.domain(params, crate::domain::default_boundary_grid(2, mesh))?;
    Ok((f, d))
}

fn suite_schottky(opts: SuiteOptions) -> Result<Vec<Check>> {
    let (f, d) = schottky_domain(opts.mesh, opts.max_len.max(6))?;
    let neg = certify_negative(d.lambda())?;
    let probes = random_probes(3, 4000, d.center(), opts.seed);
    let mut disagreements = 0;
    for p in &probes {
        if d.contains(p, true).is_err() {
            disagreements += 1;
        }
    }
    let band = 2.0 * opts.mesh;
    let mut unlabeled = 0;
    let mut labeled = 0;
    for p in probes.iter().filter(|p| p.x[2] > 0.0) {
        let r = d.classify_region(p, band)?;
        match r.label {
            RegionLabel::OutsideOmega => {}
            RegionLabel::FutureCore | RegionLabel::PastOfBoundary | RegionLabel::FutureHorizon => {
                labeled += 1
            }
            _ => unlabeled += 1,
        }
    }
    let pole = DVector::from_vec(vec![0.0, 0.0, 1.0]);
    let ball = ProbeBall {
        center: UniversalPoint::new(pole.clone(), d.center()),
        radius: 0.3,
    };
    let ks = ball.sample(64, opts.seed);
    let orbit_probes = ProbeBall {
        center: ball.center.clone(),
        radius: 0.8,
    }
    .sample(100, opts.seed + 1);
    let len = opts.max_len.max(4);
    let proper = properness_probe(&f, &d, &ball, &ks, &orbit_probes, len, len.min(8))?;
    let inside: Vec<UniversalPoint> = probes
        .iter()
        .filter(|p| d.contains(p, false).unwrap_or(false))
        .take(200)
        .cloned()
        .collect();
    let photons = photons_through(&inside, opts.seed + 2)?;
    let mut photon_failures = 0;
    for ph in &photons {
        let avoids = avoids_limit_set(ph, d.lambda(), 0.0)?;
        let r = intersect_domain(ph, &d, 2000)?;
        if !avoids || !r.hits || r.runs != 1 {
            photon_failures += 1;
        }
    }
    Ok(vec![
        Check::flag("limit_set_negative", neg.negative),
        Check::at_most(
            "orbit_acausal_violations",
            proper.acausal_violations as f64,
            0.0,
        ),
        Check::flag("return_count_stable", proper.stabilized_from(len * 2 / 3)),
        Check::at_most("photon_single_run_failures", photon_failures as f64, 0.0),
        Check::at_most(
            "invariance_residual",
            d.lambda().invariance_residual.unwrap_or(f64::NAN),
            2.0 * d.lambda().dedupe_radius,
        ),
        Check::at_most("dual_cone_disagreements", disagreements as f64, 0.0),
        Check::at_most("region_unlabeled", unlabeled as f64, 0.0),
        Check::flag("region_labeled_some", labeled > 0),
        Check::flag(
            "boundary_nonempty",
            d.boundary_size() > 0 && f.presentation.is_some(),
        ),
    ])
}

fn suite_cyclic(opts: SuiteOptions) -> Result<Vec<Check>> {
    let f = build_fixture(
        FixtureKind::CyclicProximal {
            n: opts.n,
            lambda: 3.0,
            mu: 1.0,
        },
        opts.mesh,
    )?;
    let points = match f.limit_set(SampleParams {
        max_len: opts.max_len,
        gap_min: 10.0,
        dedupe_radius: 1e-4,
    }) {
        Ok(s) => s.len(),
        Err(GeometryError::EmptySample) => 0,
        Err(e) => return Err(e),
    };
    Ok(vec![Check::at_most(
        "limit_points_minus_two",
        (points as f64 - 2.0).abs(),
        0.0,
    )])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ping_pong_threshold() {
        assert!(schottky_generators(2.0).is_ok());
        assert!(matches!(
            schottky_generators(1.0),
            Err(GeometryError::PingPongFailure { .. })
        ));
        assert!((ping_pong_half_width(2.0) - 0.705_026).abs() < 1e-5);
    }

    #[test]
    fn cyclic_fixture_has_two_limit_points() {
        let f = build_fixture(
            FixtureKind::CyclicProximal {
                n: 3,
                lambda: 3.0,
                mu: 1.0,
            },
            0.01,
        )
        .unwrap();
        let s = f.limit_set(SampleParams::default()).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn join_fixture_shapes() {
        let f = build_fixture(FixtureKind::JoinSpheres { p: 0, n: 3 }, 0.05).unwrap();
        assert_eq!(f.analytic.as_ref().unwrap().len(), 2);
        assert!(build_fixture(FixtureKind::JoinSpheres { p: 2, n: 3 }, 0.05).is_err());
        let y = DVector::from_vec(vec![0.0, 0.6, 0.8]);
        assert!((distance_to_subsphere(&y, 0) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn small_diamond_suite_passes() {
        let r = run_suite(
            "fuchsian-diamond",
            SuiteOptions {
                n: 2,
                mesh: 2.0 * PI / 128.0,
                seed: 1,
                max_len: 6,
            },
        )
        .unwrap();
        assert!(r.passed, "{r:?}");
        assert!(run_suite(
            "nope",
            SuiteOptions {
                n: 2,
                mesh: 0.1,
                seed: 0,
                max_len: 1
            }
        )
        .is_err());
    }
}
