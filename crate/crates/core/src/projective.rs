use nalgebra::DVector;

/// A line of ℝ^{n+2}, stored as a Euclidean unit vector whose first
/// coordinate above `1e-12` in magnitude is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    rep: DVector<f64>,
}

const SIGN_BAND: f64 = 1e-12;

impl ProjectivePoint {
    /// Panics on the zero vector.
    pub fn new(v: DVector<f64>) -> Self {
        let n = v.norm();
        assert!(
            n > 0.0 && n.is_finite(),
            "projective point from a degenerate vector"
        );
        let mut rep = v / n;
        if let Some(first) = rep.iter().find(|c| c.abs() > SIGN_BAND) {
            if *first < 0.0 {
                rep.neg_mut();
            }
        }
        Self { rep }
    }

    pub fn from_slice(c: &[f64]) -> Self {
        Self::new(DVector::from_column_slice(c))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = 1.0;
        Self::new(v)
    }

    pub fn rep(&self) -> &DVector<f64> {
        &self.rep
    }

    pub fn into_rep(self) -> DVector<f64> {
        self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    /// Angle between the two lines, in `[0, π/2]`.
    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        let c = self.rep.dot(&other.rep).abs();
        let s = (&self.rep - &other.rep * self.rep.dot(&other.rep)).norm();
        s.atan2(c)
    }

    /// `min(‖x − x′‖, ‖x + x′‖)` on unit representatives.
    pub fn chordal_distance(&self, other: &ProjectivePoint) -> f64 {
        (&self.rep - &other.rep)
            .norm()
            .min((&self.rep + &other.rep).norm())
    }
}
