//! Round-sphere helpers shared by the causality and domain code.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// Spherical distance `d₀` between two unit vectors.
///
/// Computed as `atan2(|x ∧ y|, x·y)` so that nearby and antipodal pairs keep
/// full precision; the result always lies in `[0, π]`.
pub fn angle(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let c = x.dot(y);
    let s = (x - y * c).norm();
    s.atan2(c)
}

/// `arccos` of the dot product, clamped to `[-1, 1]`.
pub fn angle_acos(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    x.dot(y).clamp(-1.0, 1.0).acos()
}

pub fn normalize(v: DVector<f64>) -> DVector<f64> {
    let n = v.norm();
    v / n
}

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Random unit tangent vector at `x`.
pub fn random_tangent<R: Rng + ?Sized>(rng: &mut R, x: &DVector<f64>) -> DVector<f64> {
    loop {
        let w = random_unit(rng, x.len());
        let t = &w - x * x.dot(&w);
        let n = t.norm();
        if n > 1e-6 {
            return t / n;
        }
    }
}

/// Appends a zero coordinate: `S^{d-1} ⊂ S^d` as the equator.
pub fn embed_equator(x: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(x.len() + 1);
    out.rows_mut(0, x.len()).copy_from(x);
    out
}

/// Point on the unit-speed great circle through `x` with tangent `v`.
pub fn great_circle(x: &DVector<f64>, v: &DVector<f64>, s: f64) -> DVector<f64> {
    x * s.cos() + v * s.sin()
}

/// `count` equally spaced points of the unit circle, starting at angle 0.
pub fn circle_grid(count: usize) -> Vec<DVector<f64>> {
    (0..count)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / count as f64;
            DVector::from_vec(vec![a.cos(), a.sin()])
        })
        .collect()
}

/// Near-uniform deterministic grid on `S^{dim-1}`.
///
/// Circles use equal angles, `S²` uses a Fibonacci lattice, higher spheres
/// use seeded Gaussian sampling.
pub fn sphere_grid(dim: usize, count: usize, seed: u64) -> Vec<DVector<f64>> {
    match dim {
        0 | 1 => vec![DVector::from_element(dim.max(1), 1.0)],
        2 => circle_grid(count),
        3 => fibonacci_sphere(count),
        _ => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_unit(&mut rng, dim)).collect()
        }
    }
}

pub fn fibonacci_sphere(count: usize) -> Vec<DVector<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            DVector::from_vec(vec![r * phi.cos(), r * phi.sin(), z])
        })
        .collect()
}

/// Covering radius of a finite sample against a dense probe set.
pub fn covering_radius(sample: &[DVector<f64>], probes: &[DVector<f64>]) -> f64 {
    probes
        .iter()
        .map(|p| nearest_distance(p, sample))
        .fold(0.0, f64::max)
}

pub fn nearest_distance(p: &DVector<f64>, sample: &[DVector<f64>]) -> f64 {
    sample
        .iter()
        .map(|s| angle(p, s))
        .fold(f64::INFINITY, f64::min)
}
