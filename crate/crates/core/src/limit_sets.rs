//! Orbit enumeration in finitely generated subgroups of O(2,n) and sampled
//! limit sets built from attracting and repelling poles.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::causality::{bounding_affine_domain, certify_acausal, CausalMode};
use crate::forms::{form, inner_product, AmbientVector, FormBasis};
use crate::groups::{act_projective, attracting_fixed_point, p1_data, GroupElement};
use crate::models::{KleinPoint, UniversalPoint};
use crate::projective::ProjectivePoint;
use crate::{GeometryError, Result};

pub const DEFAULT_DEDUPE_RADIUS: f64 = 1e-4;
pub const DEFAULT_GAP_MIN: f64 = 10.0;
pub const DEFAULT_WORD_CAP: usize = 2_000_000;
/// Matrices closer than this (max entry) are treated as the same element.
pub const MATRIX_DEDUPE_TOL: f64 = 1e-8;
/// Inner products must stay below `−NEGATIVITY_TOL` to count as negative.
pub const NEGATIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationHint {
    Free,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct GroupPresentation {
    generators: Vec<GroupElement>,
    inverses: Vec<GroupElement>,
    relation_hint: RelationHint,
}

impl GroupPresentation {
    pub fn new(generators: Vec<GroupElement>, relation_hint: RelationHint) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(GeometryError::InvalidParameter("no generators".into()));
        };
        let d = first.dim();
        if let Some(bad) = generators.iter().find(|g| g.dim() != d) {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        let inverses: Vec<_> = generators.iter().map(GroupElement::inverse).collect();
        for (g, h) in generators.iter().zip(&inverses) {
            let id = GroupElement::identity(d, g.basis());
            let residual = g.compose(h).max_abs_diff(&id);
            if residual > 1e-9 * g.matrix().amax().max(1.0).powi(2) {
                return Err(GeometryError::NotInGroup { residual });
            }
        }
        Ok(Self {
            generators,
            inverses,
            relation_hint,
        })
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn inverses(&self) -> &[GroupElement] {
        &self.inverses
    }

    pub fn relation_hint(&self) -> RelationHint {
        self.relation_hint
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    /// Letter `2i` is generator `i`, letter `2i + 1` its inverse.
    pub fn letter(&self, l: usize) -> &GroupElement {
        if l.is_multiple_of(2) {
            &self.generators[l / 2]
        } else {
            &self.inverses[l / 2]
        }
    }

    pub fn letter_count(&self) -> usize {
        2 * self.generators.len()
    }

    /// Generators followed by their inverses.
    pub fn symmetric_generators(&self) -> Vec<&GroupElement> {
        self.generators.iter().chain(&self.inverses).collect()
    }
}

/// Generator `i` prints as the `i`-th lowercase letter, its inverse as the
/// uppercase one.
pub fn letter_name(l: usize) -> char {
    let base = (b'a' + (l / 2) as u8) as char;
    if l.is_multiple_of(2) {
        base
    } else {
        base.to_ascii_uppercase()
    }
}

pub fn word_name(word: &[usize]) -> String {
    word.iter().map(|&l| letter_name(l)).collect()
}

/// Parses a word such as `abA`; the inverse of [`word_name`].
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    s.chars()
        .map(|c| {
            if c.is_ascii_lowercase() {
                Ok(2 * (c as usize - 'a' as usize))
            } else if c.is_ascii_uppercase() {
                Ok(2 * (c as usize - 'A' as usize) + 1)
            } else {
                Err(GeometryError::Parse(format!("bad letter `{c}` in word")))
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct WordElement {
    pub word: Vec<usize>,
    pub element: GroupElement,
}

impl WordElement {
    pub fn name(&self) -> String {
        word_name(&self.word)
    }
}

/// Reduced words of length `1..=max_len`, by increasing length.
pub fn enumerate_words(
    g: &GroupPresentation,
    max_len: usize,
    cap: usize,
) -> Result<Vec<WordElement>> {
    if max_len == 0 {
        return Err(GeometryError::InvalidParameter(
            "max_len must be at least 1".into(),
        ));
    }
    let letters = g.letter_count();
    let mut out: Vec<WordElement> = Vec::new();
    let mut frontier: Vec<WordElement> = (0..letters)
        .map(|l| WordElement {
            word: vec![l],
            element: g.letter(l).clone(),
        })
        .collect();
    let dedupe = g.relation_hint == RelationHint::Unknown;
    let mut seen = MatrixIndex::new();
    if dedupe {
        seen.insert(&GroupElement::identity(g.dim(), g.generators[0].basis()));
    }
    for len in 1..=max_len {
        if dedupe {
            frontier.retain(|w| seen.insert(&w.element));
        }
        if out.len() + frontier.len() > cap {
            return Err(GeometryError::BudgetExceeded { cap });
        }
        let next: Vec<WordElement> = if len < max_len {
            frontier
                .iter()
                .flat_map(|w| {
                    let last = *w.word.last().expect("words are nonempty");
                    (0..letters)
                        .filter(move |&l| l != (last ^ 1))
                        .map(move |l| {
                            let mut word = w.word.clone();
                            word.push(l);
                            WordElement {
                                word,
                                element: w.element.compose(g.letter(l)),
                            }
                        })
                })
                .collect()
        } else {
            Vec::new()
        };
        out.append(&mut frontier);
        frontier = next;
    }
    Ok(out)
}

/// Depth-first visit of every reduced word of length `1..=max_len` of a
/// free presentation, with the matrix of the word in the generators' basis.
/// Nothing is stored, so long words stay cheap in memory.
pub fn visit_words<F>(g: &GroupPresentation, max_len: usize, mut f: F)
where
    F: FnMut(&[usize], &DMatrix<f64>),
{
    if max_len == 0 {
        return;
    }
    for l in 0..g.letter_count() {
        visit_words_from(g, &[l], g.letter(l).matrix(), max_len, &mut f);
    }
}

/// Depth-first walk over `prefix` and every reduced extension of it up to
/// `max_len` letters; `m` is the matrix of `prefix`.
pub fn visit_words_from<F>(
    g: &GroupPresentation,
    prefix: &[usize],
    m: &DMatrix<f64>,
    max_len: usize,
    f: &mut F,
) where
    F: FnMut(&[usize], &DMatrix<f64>),
{
    fn walk<F: FnMut(&[usize], &DMatrix<f64>)>(
        g: &GroupPresentation,
        max_len: usize,
        word: &mut Vec<usize>,
        m: &DMatrix<f64>,
        f: &mut F,
    ) {
        f(word, m);
        if word.len() >= max_len {
            return;
        }
        let last = word.last().copied();
        for l in 0..g.letter_count() {
            if Some(l ^ 1) == last {
                continue;
            }
            let next = m * g.letter(l).matrix();
            word.push(l);
            walk(g, max_len, word, &next, f);
            word.pop();
        }
    }
    let mut word = Vec::with_capacity(max_len.max(prefix.len()));
    word.extend_from_slice(prefix);
    walk(g, max_len, &mut word, m, f);
}

/// Bucketed lookup of matrices up to [`MATRIX_DEDUPE_TOL`].
struct MatrixIndex {
    buckets: HashMap<Vec<i64>, Vec<GroupElement>>,
}

impl MatrixIndex {
    fn new() -> Self {
        Self {
            buckets: HashMap::new(),
        }
    }

    fn key(m: &GroupElement, shift: f64) -> Vec<i64> {
        let cell = 1e3 * MATRIX_DEDUPE_TOL;
        m.matrix()
            .iter()
            .map(|x| (x / cell + shift).floor() as i64)
            .collect()
    }

    /// Returns `false` if an equal matrix is already present.
    fn insert(&mut self, m: &GroupElement) -> bool {
        // two staggered grids, so nearby matrices share a cell in at least one
        for shift in [0.0, 0.5] {
            if let Some(list) = self.buckets.get(&Self::key(m, shift)) {
                if list.iter().any(|o| o.max_abs_diff(m) <= MATRIX_DEDUPE_TOL) {
                    return false;
                }
            }
        }
        for shift in [0.0, 0.5] {
            self.buckets
                .entry(Self::key(m, shift))
                .or_default()
                .push(m.clone());
        }
        true
    }
}

/// Sampled limit set in Ein_{1,n−1}.
#[derive(Debug, Clone)]
pub struct LimitSetSample {
    pub points: Vec<KleinPoint>,
    pub source_words: Vec<String>,
    pub gaps: Vec<f64>,
    pub dedupe_radius: f64,
    pub invariance_residual: Option<f64>,
    pub universal_lift: Option<Vec<UniversalPoint>>,
}

impl LimitSetSample {
    pub fn from_points(points: Vec<KleinPoint>, dedupe_radius: f64) -> Self {
        let k = points.len();
        Self {
            points,
            source_words: vec![String::new(); k],
            gaps: vec![f64::NAN; k],
            dedupe_radius,
            invariance_residual: None,
            universal_lift: None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn projective_points(&self) -> Vec<ProjectivePoint> {
        self.points.iter().map(KleinPoint::projective).collect()
    }

    pub fn to_csv(&self) -> String {
        let d = self.points.first().map_or(0, KleinPoint::dim);
        let mut out = String::from("word");
        for i in 0..d {
            let _ = write!(out, ",c{i}");
        }
        out.push_str(",gap\n");
        for ((p, w), g) in self.points.iter().zip(&self.source_words).zip(&self.gaps) {
            out.push_str(w);
            for c in p.rep().iter() {
                let _ = write!(out, ",{c:.17e}");
            }
            let _ = writeln!(out, ",{g:.17e}");
        }
        out
    }

    pub fn from_csv(text: &str, dedupe_radius: f64) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GeometryError::Parse("empty limit-set table".into()))?;
        let cols = header.split(',').count();
        if cols < 4 {
            return Err(GeometryError::Parse("limit-set header too short".into()));
        }
        let mut s = Self::from_points(Vec::new(), dedupe_radius);
        for (i, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols {
                return Err(GeometryError::Parse(format!(
                    "row {} has {} fields",
                    i + 1,
                    fields.len()
                )));
            }
            let nums = fields[1..]
                .iter()
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| GeometryError::Parse(format!("row {}: {e}", i + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            let (coords, gap) = nums.split_at(nums.len() - 1);
            s.points
                .push(KleinPoint::ein(DVector::from_column_slice(coords))?);
            s.source_words.push(fields[0].to_string());
            s.gaps.push(gap[0]);
        }
        Ok(s)
    }
}

/// Attracting pole of `g`: power iteration first, Cartan pole as fallback.
pub fn attracting_pole(g: &GroupElement) -> Result<ProjectivePoint> {
    match attracting_fixed_point(g) {
        Some(p) => Ok(p),
        None => Ok(p1_data(g)?.p_plus),
    }
}

/// Spatial hash of unit vectors for radius queries on projective points.
struct PointGrid {
    cell: f64,
    cells: HashMap<Vec<i64>, Vec<usize>>,
    reps: Vec<DVector<f64>>,
}

impl PointGrid {
    fn new(cell: f64) -> Self {
        Self {
            cell,
            cells: HashMap::new(),
            reps: Vec::new(),
        }
    }

    fn key(&self, v: &DVector<f64>) -> Vec<i64> {
        v.iter().map(|x| (x / self.cell).floor() as i64).collect()
    }

    fn neighbours(&self, v: &DVector<f64>) -> Vec<usize> {
        let base = self.key(v);
        let d = base.len();
        let mut out = Vec::new();
        let total = 3usize.pow(d as u32);
        for code in 0..total {
            let mut c = code;
            let key: Vec<i64> = base
                .iter()
                .map(|k| {
                    let off = (c % 3) as i64 - 1;
                    c /= 3;
                    k + off
                })
                .collect();
            if let Some(list) = self.cells.get(&key) {
                out.extend_from_slice(list);
            }
        }
        out
    }

    /// Any stored point within angle `r` of the line through `v`.
    fn has_within(&self, v: &DVector<f64>, r: f64) -> bool {
        let p = ProjectivePoint::new(v.clone());
        for w in [v.clone(), -v] {
            for i in self.neighbours(&w) {
                if p.distance(&ProjectivePoint::new(self.reps[i].clone())) <= r {
                    return true;
                }
            }
        }
        false
    }

    fn insert(&mut self, v: DVector<f64>) {
        let key = self.key(&v);
        self.cells.entry(key).or_default().push(self.reps.len());
        self.reps.push(v);
    }
}

fn canonical_cmp(a: &DVector<f64>, b: &DVector<f64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Keeps the first point of every cluster of radius `radius`, after a
/// canonical sort, so that the output does not depend on input order.
fn dedupe(
    mut cands: Vec<(ProjectivePoint, String, f64)>,
    radius: f64,
) -> Vec<(ProjectivePoint, String, f64)> {
    cands.sort_by(|a, b| canonical_cmp(a.0.rep(), b.0.rep()).then_with(|| a.1.cmp(&b.1)));
    let mut grid = PointGrid::new(radius.max(1e-12));
    let mut kept = Vec::new();
    for c in cands {
        if grid.has_within(c.0.rep(), radius) {
            continue;
        }
        grid.insert(c.0.rep().clone());
        kept.push(c);
    }
    kept
}

/// Largest distance from `s·λ` to the sample, over symmetric generators `s`
/// and sample points `λ`.
pub fn invariance_residual(g: &GroupPresentation, points: &[ProjectivePoint]) -> f64 {
    let gens = g.symmetric_generators();
    gens.par_iter()
        .map(|s| {
            points
                .iter()
                .map(|p| {
                    let img = act_projective(s, p);
                    points
                        .iter()
                        .map(|q| img.distance(q))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

pub fn approximate_limit_set(
    g: &GroupPresentation,
    max_len: usize,
    gap_min: f64,
    dedupe_radius: f64,
) -> Result<LimitSetSample> {
    if max_len == 0 {
        return Err(GeometryError::EmptySample);
    }
    let words = enumerate_words(g, max_len, DEFAULT_WORD_CAP)?;
    let cands: Vec<(ProjectivePoint, String, f64)> = words
        .par_iter()
        .filter_map(|w| {
            let data = p1_data(&w.element).ok()?;
            if data.gap < gap_min {
                return None;
            }
            let plus = attracting_pole(&w.element).ok()?;
            let minus = attracting_pole(&w.element.inverse()).ok()?;
            let name = w.name();
            let inv_name = word_name(&w.word.iter().rev().map(|l| l ^ 1).collect::<Vec<_>>());
            Some(vec![(plus, name, data.gap), (minus, inv_name, data.gap)])
        })
        .flatten()
        .collect();
    if cands.is_empty() {
        return Err(GeometryError::EmptySample);
    }
    let kept = dedupe(cands, dedupe_radius);
    let projective: Vec<ProjectivePoint> = kept.iter().map(|c| c.0.clone()).collect();
    let residual = invariance_residual(g, &projective);
    let mut points = Vec::with_capacity(kept.len());
    let mut source_words = Vec::with_capacity(kept.len());
    let mut gaps = Vec::with_capacity(kept.len());
    for (p, w, gap) in kept {
        points.push(KleinPoint::ein(p.into_rep())?);
        source_words.push(w);
        gaps.push(gap);
    }
    Ok(LimitSetSample {
        points,
        source_words,
        gaps,
        dedupe_radius,
        invariance_residual: Some(residual),
        universal_lift: None,
    })
}

/// Outcome of a negativity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NegativityReport {
    pub negative: bool,
    /// Largest pairwise inner product found.
    pub worst: f64,
    pub worst_pair: (usize, usize),
    /// Sign applied to each stored representative.
    pub signs: Vec<f64>,
}

/// Signs chosen along a nearest-neighbour spanning tree (Prim order): each
/// new point takes the sign making its pairing with its tree parent negative.
/// Returns the signs, the visiting order and each point's parent.
fn sign_tree(reps: &[DVector<f64>]) -> (Vec<f64>, Vec<usize>, Vec<Option<usize>>) {
    let m = reps.len();
    let proj: Vec<ProjectivePoint> = reps
        .iter()
        .map(|r| ProjectivePoint::new(r.clone()))
        .collect();
    let mut signs = vec![1.0; m];
    let mut parent = vec![None; m];
    let mut done = vec![false; m];
    let mut best = vec![(f64::INFINITY, 0usize); m];
    let mut order = Vec::with_capacity(m);
    let mut current = 0;
    for _ in 0..m {
        done[current] = true;
        order.push(current);
        for j in 0..m {
            if !done[j] {
                let d = proj[current].distance(&proj[j]);
                if d < best[j].0 {
                    best[j] = (d, current);
                }
            }
        }
        let next = (0..m)
            .filter(|&j| !done[j])
            .min_by(|&a, &b| best[a].0.total_cmp(&best[b].0).then(a.cmp(&b)));
        let Some(j) = next else { break };
        let p = best[j].1;
        parent[j] = Some(p);
        let s = form(&reps[j], &reps[p], FormBasis::Diagonal) * signs[p];
        signs[j] = if s > 0.0 { -1.0 } else { 1.0 };
        current = j;
    }
    (signs, order, parent)
}

fn worst_pairing(reps: &[DVector<f64>], signs: &[f64], basis: FormBasis) -> (f64, (usize, usize)) {
    let mut worst = (f64::NEG_INFINITY, (0, 0));
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let s = signs[i] * signs[j] * form(&reps[i], &reps[j], basis);
            if s > worst.0 {
                worst = (s, (i, j));
            }
        }
    }
    worst
}

/// Negativity up to a choice of sign for every point.
pub fn certify_negative(s: &LimitSetSample) -> Result<NegativityReport> {
    if s.len() < 2 {
        return Err(GeometryError::InvalidParameter(
            "negativity needs at least two points".into(),
        ));
    }
    let reps: Vec<DVector<f64>> = s.points.iter().map(|p| p.rep().clone()).collect();
    let (signs, _, _) = sign_tree(&reps);
    let (worst, worst_pair) = worst_pairing(&reps, &signs, FormBasis::Diagonal);
    Ok(NegativityReport {
        negative: worst < -NEGATIVITY_TOL,
        worst,
        worst_pair,
        signs,
    })
}

/// Negativity of the representatives exactly as given, with no sign search.
pub fn pairwise_negative(reps: &[AmbientVector]) -> Result<NegativityReport> {
    if reps.is_empty() {
        return Err(GeometryError::InvalidParameter("no points".into()));
    }
    let mut worst = (f64::NEG_INFINITY, (0, 0));
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let s = inner_product(&reps[i], &reps[j])?;
            if s > worst.0 {
                worst = (s, (i, j));
            }
        }
    }
    Ok(NegativityReport {
        negative: reps.len() >= 2 && worst.0 < -NEGATIVITY_TOL,
        worst: worst.0,
        worst_pair: worst.1,
        signs: vec![1.0; reps.len()],
    })
}

/// `(x, θ)` of a signed Einstein representative `(u, v, x)` with `u² + v² = |x|²`.
fn conformal_coords(rep: &DVector<f64>, sign: f64) -> (DVector<f64>, f64) {
    let r = rep * sign;
    let theta = r[1].atan2(r[0]).rem_euclid(TAU);
    let x = r.rows(2, r.len() - 2).normalize();
    (x, theta)
}

/// Lifts a negative sample to an acausal subset of one affine slab of the
/// universal space, resolving branches along the nearest-neighbour tree.
pub fn lift_acausal(s: &LimitSetSample) -> Result<LimitSetSample> {
    if s.is_empty() {
        return Err(GeometryError::EmptySample);
    }
    let reps: Vec<DVector<f64>> = s.points.iter().map(|p| p.rep().clone()).collect();
    let (signs, order, parent) = sign_tree(&reps);
    if reps.len() >= 2 && worst_pairing(&reps, &signs, FormBasis::Diagonal).0 >= -NEGATIVITY_TOL {
        return Err(GeometryError::InconsistentLift);
    }
    let mut lift: Vec<Option<UniversalPoint>> = vec![None; reps.len()];
    for &i in &order {
        let (x, theta) = conformal_coords(&reps[i], signs[i]);
        let t = match parent[i] {
            None => theta,
            Some(p) => {
                let tp = lift[p].as_ref().expect("parents are lifted first").t;
                // the branch within π of the parent; acausality forces it
                theta + TAU * ((tp - theta) / TAU).round()
            }
        };
        lift[i] = Some(UniversalPoint::new(x, t));
    }
    let lift: Vec<UniversalPoint> = lift.into_iter().map(|p| p.expect("all visited")).collect();
    if !certify_acausal(&lift, CausalMode::Acausal) {
        return Err(GeometryError::InconsistentLift);
    }
    let slab = bounding_affine_domain(&lift).map_err(|_| GeometryError::InconsistentLift)?;
    debug_assert!(lift.iter().all(|p| slab.contains(p)));
    let mut out = s.clone();
    out.universal_lift = Some(lift);
    Ok(out)
}

/// Spread `max t − min t` of a lifted sample.
pub fn time_spread(lift: &[UniversalPoint]) -> f64 {
    let lo = lift.iter().map(|p| p.t).fold(f64::INFINITY, f64::min);
    let hi = lift.iter().map(|p| p.t).fold(f64::NEG_INFINITY, f64::max);
    (hi - lo).min(2.0 * PI)
}
