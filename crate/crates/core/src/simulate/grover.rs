use super::oracle::{QueryTally, ReflectionCharge};
use crate::error::{usage, Result};

/// A real state in a fixed 2D plane, as coordinates in an orthonormal basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneState(pub [f64; 2]);

impl PlaneState {
    /// Reflects about the line through the unit vector `axis`: v ↦ 2⟨a,v⟩a − v.
    pub fn reflect_about(&mut self, axis: [f64; 2]) {
        let d = 2.0 * (axis[0] * self.0[0] + axis[1] * self.0[1]);
        self.0 = [d * axis[0] - self.0[0], d * axis[1] - self.0[1]];
    }

    pub fn probability(&self, coordinate: usize) -> f64 {
        self.0[coordinate] * self.0[coordinate]
    }
}

/// Grover dynamics in the plane spanned by the marked direction (first
/// coordinate) and its orthogonal complement within span{marked, source}.
///
/// The source state is (sinθ, cosθ). Reflecting about the marked direction
/// is the oracle call and is charged; reflecting about the source is free.
#[derive(Clone, Debug)]
pub struct GroverRotation {
    pub theta: f64,
    pub state: PlaneState,
    pub charge: ReflectionCharge,
    pub tally: QueryTally,
}

impl GroverRotation {
    /// Starts in the source state with marked amplitude `marked_amplitude`.
    pub fn new(marked_amplitude: f64, charge: ReflectionCharge) -> Result<Self> {
        if !(marked_amplitude > 0.0 && marked_amplitude < 1.0) {
            return usage(format!("marked amplitude must lie in (0, 1), got {marked_amplitude}"));
        }
        let theta = marked_amplitude.asin();
        Ok(Self {
            theta,
            state: PlaneState([theta.sin(), theta.cos()]),
            charge,
            tally: QueryTally::default(),
        })
    }

    pub fn source(&self) -> [f64; 2] {
        [self.theta.sin(), self.theta.cos()]
    }

    pub fn reflect_about_marked(&mut self) {
        self.state.reflect_about([1.0, 0.0]);
        self.charge.charge(&mut self.tally, 1);
    }

    pub fn reflect_about_source(&mut self) {
        let s = self.source();
        self.state.reflect_about(s);
    }

    /// One Grover iteration (equal to the textbook iterate up to a global sign).
    pub fn iterate(&mut self) {
        self.reflect_about_marked();
        self.reflect_about_source();
    }

    pub fn marked_amplitude(&self) -> f64 {
        self.state.0[0]
    }

    pub fn marked_probability(&self) -> f64 {
        self.state.probability(0)
    }
}

/// Marked probability after 0, 1, …, `iterations` Grover iterations, from a
/// full n-dimensional statevector: start uniform, flip the sign on `marked`,
/// reflect about the uniform state.
pub fn statevector_marked_probabilities(n: usize, marked: &[usize], iterations: usize) -> Result<Vec<f64>> {
    if n == 0 || marked.iter().any(|&m| m >= n) {
        return usage(format!("marked elements must lie in [0, {n})"));
    }
    let mut is_marked = vec![false; n];
    for &m in marked {
        is_marked[m] = true;
    }
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let prob = |v: &[f64]| -> f64 { v.iter().zip(&is_marked).filter(|(_, &m)| m).map(|(a, _)| a * a).sum() };
    let mut out = vec![prob(&v)];
    for _ in 0..iterations {
        for (a, &m) in v.iter_mut().zip(&is_marked) {
            if m {
                *a = -*a;
            }
        }
        let mean = v.iter().sum::<f64>() / n as f64;
        for a in v.iter_mut() {
            *a = 2.0 * mean - *a;
        }
        out.push(prob(&v));
    }
    Ok(out)
}
