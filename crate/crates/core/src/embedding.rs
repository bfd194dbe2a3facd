//! Floating-point model of the equivariant embedding restricted to a
//! maximal torus: `Φ(H) = v₀ + Σ_μ e^{2πi μ(H)} v_μ` in `ℂ^N`, with `H`
//! written in the cubic basis `e_1, ..., e_r`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::to_f64;
use crate::rootdatum::{ClassificationReport, EmbeddingCase};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct TorusEmbedding {
    rank: usize,
    length: f64,
    case: EmbeddingCase,
    weights: Vec<Vec<i64>>,
    directions: Vec<Vec<Complex64>>,
    zero_component: Vec<Complex64>,
}

/// Residuals are on unit scale: divided by `‖c′‖`, `L²` or `L` as noted.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    /// `max ‖c‴ + 4π² c′‖ / ‖c′‖` over generating circles.
    pub max_planarity_residual: f64,
    /// `max |⟨c′_j, c′_k⟩| / L²` for `j ≠ k`.
    pub max_orthogonality_residual: f64,
    /// `max |g_jk − L² δ_jk| / L²` for the pulled-back metric.
    pub max_metric_distortion: f64,
    /// `max ‖Φ(γ) − Φ(0)‖ / L` over sampled lattice points `γ`.
    pub lattice_closure_residual: f64,
    /// `min ‖Φ(H) − Φ(0)‖ / (L · dist(H, ℤ^r))` over sampled non-lattice `H`.
    pub min_return_separation: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn planarity_ok(&self) -> bool {
        self.max_planarity_residual <= self.tolerance
    }

    pub fn orthogonality_ok(&self) -> bool {
        self.max_orthogonality_residual <= self.tolerance
    }

    pub fn metric_ok(&self) -> bool {
        self.max_metric_distortion <= self.tolerance
    }

    pub fn lattice_ok(&self) -> bool {
        self.lattice_closure_residual <= self.tolerance && self.min_return_separation > self.tolerance
    }

    /// Names of the failing checks.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.planarity_ok() {
            out.push("planarity");
        }
        if !self.orthogonality_ok() {
            out.push("orthogonality");
        }
        if !self.metric_ok() {
            out.push("metric");
        }
        if !self.lattice_ok() {
            out.push("lattice");
        }
        out
    }
}

/// Hermitian product, conjugate-linear in the second argument.
pub fn hermitian(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    hermitian(x, x).re.sqrt()
}

fn real_inner(x: &[Complex64], y: &[Complex64]) -> f64 {
    hermitian(x, y).re
}

/// Distance from `x` to the nearest integer.
fn frac_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

impl TorusEmbedding {
    /// Canonical embedding: weights `+ε_1, −ε_1, +ε_2, …` (case I, each of
    /// norm `L/(2π√2)`) or `ε_1, …, ε_r` (case II, norm `L/(2π)`) on the
    /// coordinate axes, and the zero component `a` on the last axis.
    pub fn standard(rank: usize, length: f64, case: EmbeddingCase, a: f64) -> Self {
        let mut weights = Vec::new();
        for j in 0..rank {
            let mut w = vec![0i64; rank];
            w[j] = 1;
            weights.push(w.clone());
            if case == EmbeddingCase::I {
                w[j] = -1;
                weights.push(w);
            }
        }
        let radius = match case {
            EmbeddingCase::I => length / (2.0 * PI * 2f64.sqrt()),
            EmbeddingCase::II => length / (2.0 * PI),
        };
        let dim = weights.len() + 1;
        let directions = (0..weights.len())
            .map(|i| {
                let mut v = vec![Complex64::new(0.0, 0.0); dim];
                v[i] = Complex64::new(radius, 0.0);
                v
            })
            .collect();
        let mut zero_component = vec![Complex64::new(0.0, 0.0); dim];
        zero_component[dim - 1] = Complex64::new(a, 0.0);
        TorusEmbedding {
            rank,
            length,
            case,
            weights,
            directions,
            zero_component,
        }
    }

    pub fn build(report: &ClassificationReport, a: f64) -> Self {
        let t = &report.datum_type;
        Self::standard(t.rank, to_f64(&t.length_sq).sqrt(), report.case, a)
    }

    /// Arbitrary embedding data, e.g. a perturbed copy of a standard one.
    pub fn from_parts(
        rank: usize,
        length: f64,
        case: EmbeddingCase,
        weights: Vec<Vec<i64>>,
        directions: Vec<Vec<Complex64>>,
        zero_component: Vec<Complex64>,
    ) -> Result<Self> {
        let dim = zero_component.len();
        if weights.len() != directions.len() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                found: directions.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| w.len() != rank) {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: w.len(),
            });
        }
        if let Some(d) = directions.iter().find(|d| d.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d.len(),
            });
        }
        Ok(TorusEmbedding {
            rank,
            length,
            case,
            weights,
            directions,
            zero_component,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn case(&self) -> EmbeddingCase {
        self.case
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn directions(&self) -> &[Vec<Complex64>] {
        &self.directions
    }

    pub fn zero_component(&self) -> &[Complex64] {
        &self.zero_component
    }

    /// Complex dimension of the target.
    pub fn complex_dim(&self) -> usize {
        self.zero_component.len()
    }

    fn check_point(&self, h: &[f64]) -> Result<()> {
        if h.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: h.len(),
            });
        }
        Ok(())
    }

    fn phase(&self, w: &[i64], h: &[f64]) -> Complex64 {
        let t: f64 = w.iter().zip(h).map(|(&m, &x)| m as f64 * x).sum();
        Complex64::from_polar(1.0, 2.0 * PI * t)
    }

    /// `Φ(H)` as complex coordinates.
    pub fn phi(&self, h: &[f64]) -> Result<Vec<Complex64>> {
        self.check_point(h)?;
        let mut out = self.zero_component.clone();
        for (w, v) in self.weights.iter().zip(&self.directions) {
            let p = self.phase(w, h);
            for (o, x) in out.iter_mut().zip(v) {
                *o += p * x;
            }
        }
        Ok(out)
    }

    /// `Φ(H)` as real coordinates `(re₁, im₁, re₂, im₂, …)`.
    pub fn phi_real(&self, h: &[f64]) -> Result<Vec<f64>> {
        Ok(self.phi(h)?.iter().flat_map(|z| [z.re, z.im]).collect())
    }

    /// `d^n/dt^n Φ(H + t e_j)` at `t = 0`.
    pub fn derivative(&self, h: &[f64], j: usize, order: u32) -> Result<Vec<Complex64>> {
        self.check_point(h)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.complex_dim()];
        for (w, v) in self.weights.iter().zip(&self.directions) {
            if w[j] == 0 {
                continue;
            }
            let factor = Complex64::new(0.0, 2.0 * PI * w[j] as f64).powu(order) * self.phase(w, h);
            for (o, x) in out.iter_mut().zip(v) {
                *o += factor * x;
            }
        }
        Ok(out)
    }

    /// Evaluation points `H_s` with `H_{s,j} = (s(2j+1) mod samples) / samples`.
    pub fn sample_grid(&self, samples: usize) -> Vec<Vec<f64>> {
        (0..samples)
            .map(|s| {
                (0..self.rank)
                    .map(|j| ((s * (2 * j + 1)) % samples) as f64 / samples as f64)
                    .collect()
            })
            .collect()
    }

    pub fn run_checks(&self, samples: usize, tol: f64) -> Result<CheckReport> {
        if samples < 8 {
            return Err(Error::InvalidDatum("at least 8 samples are required".into()));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidDatum("tolerance must be positive".into()));
        }
        let l = self.length;
        let l2 = l * l;
        let four_pi2 = 4.0 * PI * PI;
        let origin = self.phi(&vec![0.0; self.rank])?;
        let mut planarity = 0f64;
        let mut orthogonality = 0f64;
        let mut distortion = 0f64;
        let mut separation = f64::INFINITY;

        for h in self.sample_grid(samples) {
            let velocities: Vec<Vec<Complex64>> = (0..self.rank)
                .map(|j| self.derivative(&h, j, 1))
                .collect::<Result<_>>()?;
            for (j, v1) in velocities.iter().enumerate() {
                let v3 = self.derivative(&h, j, 3)?;
                let combo: Vec<Complex64> = v3.iter().zip(v1).map(|(a, b)| a + b * four_pi2).collect();
                let speed = norm(v1);
                let residual = if speed > 0.0 { norm(&combo) / speed } else { f64::INFINITY };
                planarity = planarity.max(residual);
                for (k, vk) in velocities.iter().enumerate() {
                    let g = real_inner(v1, vk);
                    if j != k {
                        orthogonality = orthogonality.max(g.abs() / l2);
                        distortion = distortion.max(g.abs() / l2);
                    } else {
                        distortion = distortion.max((g - l2).abs() / l2);
                    }
                }
            }
            let d = h.iter().map(|&x| frac_distance(x).powi(2)).sum::<f64>().sqrt();
            if d > 0.0 {
                let p = self.phi(&h)?;
                let gap: Vec<Complex64> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
                separation = separation.min(norm(&gap) / (l * d));
            }
        }

        let mut closure = 0f64;
        for s in 0..samples as i64 {
            let gamma: Vec<f64> = (0..self.rank as i64)
                .map(|j| ((s * (j + 2)) % 7 - 3) as f64)
                .collect();
            let p = self.phi(&gamma)?;
            let gap: Vec<Complex64> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
            closure = closure.max(norm(&gap) / l);
        }

        let mut report = CheckReport {
            max_planarity_residual: planarity,
            max_orthogonality_residual: orthogonality,
            max_metric_distortion: distortion,
            lattice_closure_residual: closure,
            min_return_separation: separation,
            samples,
            tolerance: tol,
            pass: false,
        };
        report.pass = report.failures().is_empty();
        Ok(report)
    }

    /// `a + 2 Σ cos(2π H_j)` in case I, `a + Σ e^{−2πi H_j}` in case II,
    /// where `a` is the norm of the zero component.
    pub fn spherical_function(&self, h: &[f64]) -> Result<Complex64> {
        self.check_point(h)?;
        let a = Complex64::new(norm(&self.zero_component), 0.0);
        Ok(match self.case {
            EmbeddingCase::I => a + h.iter().map(|&x| 2.0 * (2.0 * PI * x).cos()).sum::<f64>(),
            EmbeddingCase::II => {
                a + h.iter().map(|&x| Complex64::from_polar(1.0, -2.0 * PI * x)).sum::<Complex64>()
            }
        })
    }

    /// `(u, Φ(H))` with `u = Σ_μ v_μ / ‖v_μ‖²` plus `a · v₀ / ‖v₀‖²`, which
    /// reproduces the closed form when the directions are orthogonal.
    pub fn spherical_by_inner_product(&self, h: &[f64]) -> Result<Complex64> {
        let mut u = vec![Complex64::new(0.0, 0.0); self.complex_dim()];
        for v in &self.directions {
            let n2 = norm(v).powi(2);
            for (o, x) in u.iter_mut().zip(v) {
                *o += x / n2;
            }
        }
        let a = norm(&self.zero_component);
        if a > 0.0 {
            for (o, x) in u.iter_mut().zip(&self.zero_component) {
                *o += x / a;
            }
        }
        Ok(hermitian(&u, &self.phi(h)?))
    }

    /// Whether the torus splits extrinsically along a partition of the
    /// coordinate indices `0..r`: every weight lives in one class, weights
    /// in different classes have hermitian-orthogonal directions, and each
    /// class is a Clifford torus (weights `±ε_j`, orthogonal directions).
    pub fn check_clifford_splitting(&self, partition: &[Vec<usize>], tol: f64) -> Result<bool> {
        let mut class_of = vec![usize::MAX; self.rank];
        for (c, class) in partition.iter().enumerate() {
            for &j in class {
                if j >= self.rank || class_of[j] != usize::MAX {
                    return Err(Error::InvalidSubspaces(format!(
                        "index {j} is out of range or repeated"
                    )));
                }
                class_of[j] = c;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(Error::InvalidSubspaces("partition does not cover every index".into()));
        }
        let scale = self
            .directions
            .iter()
            .map(|v| norm(v).powi(2))
            .fold(0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        // a weight supported on one index lies in exactly one class
        let single = |w: &Vec<i64>| {
            let support: Vec<usize> = (0..self.rank).filter(|&j| w[j] != 0).collect();
            support.len() == 1 && w[support[0]].abs() == 1
        };
        if !self.weights.iter().all(single) {
            return Ok(false);
        }
        // across classes this is the orthogonal-subspace condition, within a
        // class it makes the generating circles orthogonal
        for i in 0..self.directions.len() {
            for k in i + 1..self.directions.len() {
                if hermitian(&self.directions[i], &self.directions[k]).norm() > tol * scale {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn rank_one_case_two_is_a_circle() {
        let e = TorusEmbedding::standard(1, 1.0, EmbeddingCase::II, 0.0);
        let r = 1.0 / (2.0 * PI);
        for s in 0..16 {
            let t = s as f64 / 16.0;
            let p = e.phi(&[t]).unwrap();
            assert!(close(p[0].norm(), r));
        }
        let q = e.phi(&[0.25]).unwrap();
        assert!(close(q[0].re, 0.0) && close(q[0].im, r));
        let p1 = e.phi_real(&[1.0]).unwrap();
        let p0 = e.phi_real(&[0.0]).unwrap();
        assert!(p1.iter().zip(&p0).all(|(a, b)| close(*a, *b)));
    }

    #[test]
    fn coordinate_counts() {
        let e = TorusEmbedding::standard(2, 1.0, EmbeddingCase::I, 0.0);
        assert_eq!(e.weights().len(), 4);
        assert_eq!(e.complex_dim(), 5);
        assert_eq!(e.phi(&[0.0, 0.0]).unwrap()[4], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn standard_embeddings_pass() {
        for case in [EmbeddingCase::I, EmbeddingCase::II] {
            for r in 1..=3 {
                let e = TorusEmbedding::standard(r, 2.0, case, 0.5);
                let rep = e.run_checks(64, DEFAULT_TOLERANCE).unwrap();
                assert!(rep.pass, "{case:?} rank {r}: {rep:?}");
            }
        }
    }

    #[test]
    fn perturbations_fail_their_checks() {
        let e = TorusEmbedding::standard(2, 1.0, EmbeddingCase::I, 0.0);
        let mut dirs = e.directions().to_vec();
        for x in dirs[0].iter_mut() {
            *x *= 1.0 + 1e-3;
        }
        let bad = TorusEmbedding::from_parts(2, 1.0, EmbeddingCase::I, e.weights().to_vec(), dirs, e.zero_component().to_vec()).unwrap();
        let rep = bad.run_checks(64, DEFAULT_TOLERANCE).unwrap();
        assert!(!rep.metric_ok() && rep.planarity_ok());

        let mut dirs = e.directions().to_vec();
        dirs[2][0] = Complex64::new(0.1 * dirs[2][2].re, 0.0);
        let bad = TorusEmbedding::from_parts(2, 1.0, EmbeddingCase::I, e.weights().to_vec(), dirs, e.zero_component().to_vec()).unwrap();
        let rep = bad.run_checks(64, DEFAULT_TOLERANCE).unwrap();
        assert!(!rep.orthogonality_ok());
        assert!(!bad.check_clifford_splitting(&[vec![0], vec![1]], DEFAULT_TOLERANCE).unwrap());

        let mut weights = e.weights().to_vec();
        weights[0] = vec![2, 0];
        let bad = TorusEmbedding::from_parts(2, 1.0, EmbeddingCase::I, weights, e.directions().to_vec(), e.zero_component().to_vec()).unwrap();
        assert!(!bad.run_checks(64, DEFAULT_TOLERANCE).unwrap().planarity_ok());
    }

    #[test]
    fn spherical_function_examples() {
        let e = TorusEmbedding::standard(3, 1.0, EmbeddingCase::I, 0.7);
        assert!(close(e.spherical_function(&[0.0; 3]).unwrap().re, 0.7 + 6.0));
        assert!(close(e.spherical_function(&[0.5, 0.0, 0.0]).unwrap().re, 0.7 + 2.0));
        let e = TorusEmbedding::standard(3, 1.0, EmbeddingCase::II, 0.0);
        assert!(close(e.spherical_function(&[0.0; 3]).unwrap().re, 3.0));
        let h = [0.1, 0.37, 0.8];
        let a = e.spherical_function(&h).unwrap();
        let b = e.spherical_by_inner_product(&h).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn clifford_splitting_examples() {
        let e = TorusEmbedding::standard(2, 1.0, EmbeddingCase::I, 0.0);
        assert!(e.check_clifford_splitting(&[vec![0], vec![1]], DEFAULT_TOLERANCE).unwrap());
        assert!(e.check_clifford_splitting(&[vec![0, 1]], DEFAULT_TOLERANCE).unwrap());
        assert!(e.check_clifford_splitting(&[vec![0]], DEFAULT_TOLERANCE).is_err());
    }
}
