//! Laplace eigenvalues on the standard data, in units of `4π²/L²`.
//!
//! A dominant weight `ω = Σ k_j ε_j` has eigenvalue `4π²⟨ω + 2ρ, ω⟩`; with
//! `‖ε_j‖² = 1/L²` the scaled value is `Σ k_j (k_j + (2ρ)_j)`.

use std::f64::consts::PI;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{floor_sqrt, frac, rat, to_f64, QMatrix, QVector, Rational};
use crate::rootdatum::{DatumType, EuclideanRootDatum};
use crate::rootsystem::{EpsilonFrame, Family, RootShape};

/// Root multiplicities for the shapes `ε_j`, `2ε_j`, `ε_j + ε_k`, `ε_j − ε_k`
/// (shapes taken on the doubled roots).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiplicitySet {
    pub m1: u32,
    pub m2: u32,
    pub m_plus: u32,
    pub m_minus: u32,
}

impl MultiplicitySet {
    pub fn new(m1: u32, m2: u32, m_plus: u32, m_minus: u32) -> Self {
        MultiplicitySet {
            m1,
            m2,
            m_plus,
            m_minus,
        }
    }

    fn of(&self, shape: RootShape) -> u32 {
        match shape {
            RootShape::Short => self.m1,
            RootShape::Long => self.m2,
            RootShape::Sum => self.m_plus,
            RootShape::Difference => self.m_minus,
        }
    }
}

fn is_d2(t: &DatumType) -> bool {
    t.family == Family::D && t.rank == 2
}

/// Which shapes occur: (short, long, sum, difference).
fn shapes_present(t: &DatumType) -> [bool; 4] {
    let pairs = t.rank >= 2;
    match t.family {
        Family::A => [false, false, false, pairs],
        Family::B => [true, false, pairs, pairs],
        Family::C => [false, true, pairs, pairs],
        Family::D => [false, false, pairs, pairs],
        Family::BC => [true, true, pairs, pairs],
    }
}

/// Each multiplicity is positive exactly when its shape occurs, and
/// `m₊ = m₋` except for family A and for `D̂₂`.
pub fn check_multiplicities(t: &DatumType, m: &MultiplicitySet) -> Result<()> {
    let names = ["m1", "m2", "m+", "m-"];
    let values = [m.m1, m.m2, m.m_plus, m.m_minus];
    for ((name, value), present) in names.iter().zip(values).zip(shapes_present(t)) {
        if present != (value > 0) {
            let what = if present { "must be positive" } else { "must be 0" };
            return Err(Error::InconsistentMultiplicities(format!(
                "{name} {what} for type {}",
                t.label()
            )));
        }
    }
    if t.family != Family::A && !is_d2(t) && m.m_plus != m.m_minus {
        return Err(Error::InconsistentMultiplicities(format!(
            "m+ and m- must agree for type {}",
            t.label()
        )));
    }
    Ok(())
}

/// `2ρ` in `ε` coordinates from the closed formula for each family.
pub fn two_rho(t: &DatumType, m: &MultiplicitySet) -> Result<QVector> {
    check_multiplicities(t, m)?;
    Ok(two_rho_formula(t, m))
}

fn two_rho_formula(t: &DatumType, m: &MultiplicitySet) -> QVector {
    let r = t.rank as i64;
    let half = |x: u32| frac(x as i64, 2);
    let coords = if t.family == Family::A {
        (1..=r).map(|j| half(m.m_minus) * rat(r - 2 * j + 1)).collect()
    } else if is_d2(t) {
        vec![
            frac((m.m_plus + m.m_minus) as i64, 2),
            frac(m.m_plus as i64 - m.m_minus as i64, 2),
        ]
    } else {
        (1..=r)
            .map(|j| half(m.m1) + rat(m.m2 as i64) + rat(m.m_plus as i64) * rat(r - j))
            .collect()
    };
    QVector(coords)
}

/// Dominance chain for the type: `k₁ ≥ … ≥ k_r` (A), `… ≥ k_r ≥ 0`
/// (B, C, BC), `k₁ ≥ … ≥ k_{r−1} ≥ |k_r|` (D).
pub fn is_dominant(t: &DatumType, k: &[i64]) -> Result<bool> {
    if k.len() != t.rank {
        return Err(Error::DimensionMismatch {
            expected: t.rank,
            found: k.len(),
        });
    }
    let r = k.len();
    let descending = |s: &[i64]| s.windows(2).all(|w| w[0] >= w[1]);
    Ok(match t.family {
        Family::A => descending(k),
        Family::B | Family::C | Family::BC => descending(k) && k[r - 1] >= 0,
        Family::D => {
            if r == 1 {
                true
            } else {
                descending(&k[..r - 1]) && k[r - 2] >= k[r - 1].abs()
            }
        }
    })
}

/// Dominant element of the Weyl orbit of `k`.
pub fn dominant_representative(t: &DatumType, k: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = match t.family {
        Family::A => k.to_vec(),
        _ => k.iter().map(|x| x.abs()).collect(),
    };
    out.sort_unstable_by(|a, b| b.cmp(a));
    if t.family == Family::D && t.rank >= 2 && !k.contains(&0) {
        let negatives = k.iter().filter(|&&x| x < 0).count();
        if negatives % 2 == 1 {
            let last = out.len() - 1;
            out[last] = -out[last];
        }
    }
    out
}

/// Precomputed data for one type and multiplicity set. Construction checks
/// that the closed formula for `2ρ` agrees with `Σ_{α>0} m_α α` summed over
/// the positive roots of the standard datum.
#[derive(Debug, Clone)]
pub struct SpectrumModel {
    datum_type: DatumType,
    mults: MultiplicitySet,
    two_rho: QVector,
    dual_gram: QMatrix,
    length_sq: Rational,
}

impl SpectrumModel {
    pub fn new(t: &DatumType, m: &MultiplicitySet) -> Result<Self> {
        check_multiplicities(t, m)?;
        let datum = EuclideanRootDatum::standard(t);
        let r = t.rank;
        let frame = EpsilonFrame::new(&(0..r).map(|i| QVector::unit(r, i)).collect::<Vec<_>>())?;
        let mut summed = QVector::zeros(r);
        for p in datum.roots().positive_roots(&frame)? {
            summed = summed.add_scaled(&rat(m.of(p.shape) as i64), &p.root);
        }
        let formula = two_rho_formula(t, m);
        if formula != summed {
            return Err(Error::Internal(format!(
                "2rho formula {formula} disagrees with the positive root sum {summed}"
            )));
        }
        Ok(SpectrumModel {
            datum_type: t.clone(),
            mults: *m,
            two_rho: summed,
            dual_gram: datum.roots().dual_gram().clone(),
            length_sq: t.length_sq.clone(),
        })
    }

    pub fn datum_type(&self) -> &DatumType {
        &self.datum_type
    }

    pub fn two_rho(&self) -> &QVector {
        &self.two_rho
    }

    /// Per-family closed form of the scaled eigenvalue.
    pub fn closed_form(&self, k: &[i64]) -> Rational {
        let t = &self.datum_type;
        let m = &self.mults;
        let r = t.rank as i64;
        let kk = |j: usize| rat(k[j]);
        if t.family == Family::A {
            (0..k.len())
                .map(|j| kk(j) * (kk(j) + frac(m.m_minus as i64, 2) * rat(r - 2 * (j as i64 + 1) + 1)))
                .sum()
        } else if is_d2(t) {
            kk(0) * (kk(0) + frac((m.m_plus + m.m_minus) as i64, 2))
                + kk(1) * (kk(1) + frac(m.m_plus as i64 - m.m_minus as i64, 2))
        } else {
            let base = frac(m.m1 as i64, 2) + rat(m.m2 as i64);
            (0..k.len())
                .map(|j| {
                    let shift = &base + rat(m.m_plus as i64) * rat(r - (j as i64 + 1));
                    kk(j) * (kk(j) + shift)
                })
                .sum()
        }
    }

    /// `L² ⟨ω + 2ρ, ω⟩` through the dual Gram matrix of the standard datum.
    pub fn general_form(&self, k: &[i64]) -> Rational {
        let omega = QVector(k.iter().map(|&x| rat(x)).collect());
        let shifted = &omega + &self.two_rho;
        &self.length_sq * self.dual_gram.bilinear(&shifted, &omega)
    }

    /// Scaled eigenvalue of a dominant weight; both forms must agree.
    pub fn eigenvalue(&self, k: &[i64]) -> Result<Rational> {
        if !is_dominant(&self.datum_type, k)? {
            return Err(Error::NotDominant(k.to_vec()));
        }
        let closed = self.closed_form(k);
        let general = self.general_form(k);
        if closed != general {
            return Err(Error::Internal(format!(
                "eigenvalue forms disagree at {k:?}: {closed} vs {general}"
            )));
        }
        Ok(closed)
    }

    /// Coefficient bound `1 + ⌊√bound⌋ + max(m₁/2 + m₂ + m± r, m₋ r)`.
    pub fn coefficient_box(&self, bound: &Rational) -> i64 {
        let m = &self.mults;
        let r = self.datum_type.rank as i64;
        let linear = (frac(m.m1 as i64, 2) + rat(m.m2 as i64) + rat(m.m_plus as i64 * r))
            .max(rat(m.m_minus as i64 * r));
        let root = if bound.is_negative() { 0.into() } else { floor_sqrt(bound) };
        1 + root.to_i64().unwrap_or(i64::MAX / 4) + linear.ceil().to_integer().to_i64().unwrap_or(0)
    }

    /// All dominant weights with scaled eigenvalue at most `bound`, sorted by
    /// value and then lexicographically by `k`.
    ///
    /// On dominant weights `Σ k_j (2ρ)_j ≥ 0`, so the eigenvalue is at least
    /// `Σ k_j²`; partial sums of squares prune the search.
    pub fn enumerate(&self, bound: &Rational) -> Result<Vec<(Vec<i64>, Rational)>> {
        let mut out = Vec::new();
        if bound.is_negative() {
            return Ok(out);
        }
        let kmax = self.coefficient_box(bound);
        let r = self.datum_type.rank;
        let mut k = Vec::with_capacity(r);
        self.descend(&mut k, r, kmax, &Rational::zero(), bound, &mut out)?;
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(out)
    }

    fn descend(
        &self,
        k: &mut Vec<i64>,
        r: usize,
        kmax: i64,
        squares: &Rational,
        bound: &Rational,
        out: &mut Vec<(Vec<i64>, Rational)>,
    ) -> Result<()> {
        if k.len() == r {
            if is_dominant(&self.datum_type, k)? {
                let value = self.eigenvalue(k)?;
                if &value <= bound {
                    out.push((k.clone(), value));
                }
            }
            return Ok(());
        }
        let hi = k.last().copied().unwrap_or(kmax).min(kmax);
        let lo = match self.datum_type.family {
            Family::A => -kmax,
            Family::D if k.len() == r - 1 && r >= 2 => -hi,
            Family::D => 0,
            _ => 0,
        };
        for x in (lo..=hi).rev() {
            let sq = squares + rat(x * x);
            if &sq > bound {
                continue;
            }
            k.push(x);
            self.descend(k, r, kmax, &sq, bound, out)?;
            k.pop();
        }
        Ok(())
    }

    /// Whether no nonzero eigenvalue lies strictly below the one at `ε₁`,
    /// decided by enumeration up to that value.
    pub fn first_is_minimal_by_enumeration(&self) -> Result<bool> {
        let r = self.datum_type.rank;
        let mut e1 = vec![0i64; r];
        e1[0] = 1;
        let target = self.eigenvalue(&e1)?;
        Ok(self
            .enumerate(&target)?
            .iter()
            .all(|(k, v)| k.iter().all(|&x| x == 0) || *v >= target))
    }
}

/// Scaled eigenvalue of a dominant weight.
pub fn eigenvalue(t: &DatumType, m: &MultiplicitySet, k: &[i64]) -> Result<Rational> {
    SpectrumModel::new(t, m)?.eigenvalue(k)
}

pub fn enumerate_spectrum(
    t: &DatumType,
    m: &MultiplicitySet,
    bound: &Rational,
) -> Result<Vec<(Vec<i64>, Rational)>> {
    SpectrumModel::new(t, m)?.enumerate(bound)
}

/// Whether the eigenvalue at `ε₁` is the smallest nonzero one. False exactly
/// for family A with `r ≥ 2, m₋ > 2` and for `D̂₂` with `|m₊ − m₋| > 2`;
/// the answer is confirmed by enumeration before it is returned.
pub fn first_eigenspace_check(t: &DatumType, m: &MultiplicitySet) -> Result<bool> {
    check_multiplicities(t, m)?;
    let closed = match t.family {
        Family::A => !(t.rank >= 2 && m.m_minus > 2),
        Family::D if t.rank == 2 => m.m_plus.abs_diff(m.m_minus) <= 2,
        _ => true,
    };
    // replacing ε₂ by −ε₂ swaps m₊ and m₋ on D̂₂ without changing λ at ε₁
    let m = if is_d2(t) && m.m_minus > m.m_plus {
        MultiplicitySet::new(m.m1, m.m2, m.m_minus, m.m_plus)
    } else {
        *m
    };
    let enumerated = SpectrumModel::new(t, &m)?.first_is_minimal_by_enumeration()?;
    if enumerated != closed {
        return Err(Error::Internal(format!(
            "first eigenvalue criterion disagrees with enumeration for {}",
            t.label()
        )));
    }
    Ok(closed)
}

/// Unscaled eigenvalue `4π² · scaled / L²`, for presentation only.
pub fn unscaled(scaled: &Rational, length_sq: &Rational) -> f64 {
    4.0 * PI * PI * to_f64(scaled) / to_f64(length_sq)
}
