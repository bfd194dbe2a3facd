//! Lattices in a Euclidean space with an exact Gram matrix.
//!
//! A lattice is stored as the integer span of the columns of `basis`, all in
//! ambient coordinates, together with the ambient inner product `gram`.
//! Sublattices of lower rank are allowed; "full" means rank = ambient
//! dimension.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    integer_kernel, integer_solve, rat, smith_normal_form, solve_full_column_rank, to_f64,
    QMatrix, QVector, Rational,
};

/// Largest rank accepted by the enumeration-based operations.
pub const MAX_ENUMERATION_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    basis: QMatrix,
    gram: QMatrix,
}

/// Orthogonal lattice basis together with the squared lengths of its vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalBasis {
    pub vectors: Vec<QVector>,
    pub squared_lengths: Vec<Rational>,
}

impl OrthogonalBasis {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// The common squared length when the basis is cubic.
    pub fn common_length_sq(&self) -> Option<&Rational> {
        let first = self.squared_lengths.first()?;
        self.squared_lengths
            .iter()
            .all(|l| l == first)
            .then_some(first)
    }

    pub fn is_cubic(&self) -> bool {
        self.common_length_sq().is_some()
    }
}

/// A finitely generated abelian group `Z^free_rank + Z/d_1 + ... + Z/d_k`
/// with `d_1 | d_2 | ... | d_k`, all `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupStructure {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        AbelianGroupStructure {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.invariant_factors.iter().product())
    }
}

impl fmt::Display for AbelianGroupStructure {
    /// `1`, `Z`, `Z/2`, `Z^2 x Z/2 x Z/4`, ...
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" x "))
    }
}

/// `q(z) = sum_i d_i (z_i + sum_{j>i} mu_ij z_j)^2`, the completed-square
/// form used to bound coefficients during enumeration.
struct CompletedSquares {
    d: Vec<Rational>,
    mu: Vec<Vec<Rational>>,
}

impl CompletedSquares {
    fn new(q: &QMatrix) -> Self {
        let k = q.rows();
        let mut a: Vec<Vec<Rational>> = (0..k).map(|i| q.row(i).0).collect();
        for i in 0..k {
            for j in i + 1..k {
                a[j][i] = a[i][j].clone();
                a[i][j] = &a[i][j] / &a[i][i];
            }
            for l in i + 1..k {
                for j in l..k {
                    let d = &a[l][i] * &a[i][j];
                    a[l][j] -= d;
                }
            }
        }
        let d = (0..k).map(|i| a[i][i].clone()).collect();
        let mu = (0..k)
            .map(|i| (0..k).map(|j| if j > i { a[i][j].clone() } else { Rational::zero() }).collect())
            .collect();
        CompletedSquares { d, mu }
    }

    /// Calls `emit(z, q(z))` for every nonzero integer `z` with `q(z) <= bound`.
    fn enumerate(&self, bound: &Rational, emit: &mut dyn FnMut(&[i64], &Rational)) {
        let k = self.d.len();
        if k == 0 {
            return;
        }
        let mut z = vec![0i64; k];
        self.level(k - 1, bound, bound, &mut z, emit);
    }

    fn level(
        &self,
        i: usize,
        bound: &Rational,
        remaining: &Rational,
        z: &mut Vec<i64>,
        emit: &mut dyn FnMut(&[i64], &Rational),
    ) {
        let k = z.len();
        let c = (i + 1..k).fold(Rational::zero(), |acc, j| acc + &self.mu[i][j] * rat(z[j]));
        let t = remaining / &self.d[i];
        // approximate window, widened; membership is decided exactly below
        let (cf, rf) = (to_f64(&c), to_f64(&t).max(0.0).sqrt());
        let lo = (-cf - rf).floor() as i64 - 2;
        let hi = (-cf + rf).ceil() as i64 + 2;
        for zi in lo..=hi {
            let s = rat(zi) + &c;
            let val = &self.d[i] * &s * &s;
            if &val > remaining {
                continue;
            }
            z[i] = zi;
            let rest = remaining - &val;
            if i == 0 {
                if z.iter().any(|&x| x != 0) {
                    emit(z, &(bound - &rest));
                }
            } else {
                self.level(i - 1, bound, &rest, z, emit);
            }
        }
        z[i] = 0;
    }
}

fn round_rational(x: &Rational) -> BigInt {
    (x + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

impl Lattice {
    /// Lattice spanned by the columns of `basis` under the inner product `gram`.
    pub fn new(basis: QMatrix, gram: QMatrix) -> Result<Self> {
        if !gram.is_square() || !gram.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        if basis.rows() != gram.rows() {
            return Err(Error::DimensionMismatch {
                expected: gram.rows(),
                found: basis.rows(),
            });
        }
        if basis.rank() != basis.cols() {
            return Err(Error::DependentColumns);
        }
        Ok(Lattice { basis, gram })
    }

    pub fn from_vectors(gram: QMatrix, vectors: &[QVector]) -> Result<Self> {
        let n = gram.rows();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        Lattice::new(QMatrix::from_columns(n, vectors), gram)
    }

    /// `Z^n` with the standard inner product.
    pub fn standard(n: usize) -> Self {
        Lattice {
            basis: QMatrix::identity(n),
            gram: QMatrix::identity(n),
        }
    }

    /// `Z^n` whose basis vectors all have squared length `length_sq`.
    pub fn cubic(n: usize, length_sq: &Rational) -> Result<Self> {
        Lattice::new(QMatrix::identity(n), QMatrix::scalar(n, length_sq))
    }

    pub fn ambient_dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn basis_vectors(&self) -> Vec<QVector> {
        self.basis.columns()
    }

    /// Gram matrix of the basis, `Bᵀ G B`.
    pub fn coordinate_gram(&self) -> QMatrix {
        &(&self.basis.transpose() * &self.gram) * &self.basis
    }

    /// Squared covolume, `det(Bᵀ G B)`.
    pub fn discriminant(&self) -> Rational {
        self.coordinate_gram().determinant()
    }

    pub fn inner(&self, x: &QVector, y: &QVector) -> Rational {
        self.gram.bilinear(x, y)
    }

    pub fn norm(&self, x: &QVector) -> Rational {
        self.gram.bilinear(x, x)
    }

    fn check_dim(&self, v: &QVector) -> Result<()> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Integer coordinates of `v` in the basis, if `v` is a lattice vector.
    pub fn coordinates(&self, v: &QVector) -> Result<Option<QVector>> {
        self.check_dim(v)?;
        integer_solve(&self.basis, v)
    }

    pub fn contains(&self, v: &QVector) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// True when both lattices live in the same space and have the same span.
    pub fn same_span(&self, other: &Lattice) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.rank() == other.rank()
            && other
                .basis_vectors()
                .iter()
                .all(|v| self.contains(v).unwrap_or(false))
            && self
                .basis_vectors()
                .iter()
                .all(|v| other.contains(v).unwrap_or(false))
    }

    /// Lattice of covectors taking integer values on `self`.
    ///
    /// Covectors are written in the dual coordinates, with the dual inner
    /// product `G⁻¹`. Taking the dual twice returns the original lattice.
    pub fn dual(&self) -> Result<Lattice> {
        if !self.is_full() {
            return Err(Error::NotFullRank {
                rank: self.rank(),
                dim: self.ambient_dim(),
            });
        }
        let basis = self.basis.inverse().expect("full basis is invertible").transpose();
        let gram = self.gram.inverse().expect("positive definite gram is invertible");
        Ok(Lattice { basis, gram })
    }

    fn check_enumeration_rank(&self) -> Result<()> {
        if self.rank() > MAX_ENUMERATION_RANK {
            return Err(Error::RankTooLarge {
                rank: self.rank(),
                max: MAX_ENUMERATION_RANK,
            });
        }
        Ok(())
    }

    /// All nonzero lattice vectors of squared length at most `bound`, as
    /// ambient vectors paired with their squared lengths, sorted by length
    /// and then in decreasing lexicographic order (so `e_1` precedes `e_2`).
    pub fn vectors_up_to(&self, bound: &Rational) -> Result<Vec<(QVector, Rational)>> {
        self.check_enumeration_rank()?;
        let form = CompletedSquares::new(&self.coordinate_gram());
        let mut out = Vec::new();
        form.enumerate(bound, &mut |z, norm| {
            let coords = QVector(z.iter().map(|&x| rat(x)).collect());
            out.push((self.basis.mul_vec(&coords), norm.clone()));
        });
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)));
        Ok(out)
    }

    /// Basis obtained by repeated pairwise size reduction. Its span is the
    /// lattice; only used to get tight enumeration radii.
    pub(crate) fn pairwise_reduced_basis(&self) -> Vec<QVector> {
        let mut b = self.basis_vectors();
        loop {
            let mut changed = false;
            for i in 0..b.len() {
                for j in 0..b.len() {
                    if i == j {
                        continue;
                    }
                    let nj = self.norm(&b[j]);
                    let q = round_rational(&(self.inner(&b[i], &b[j]) / &nj));
                    if q.is_zero() {
                        continue;
                    }
                    let cand = b[i].add_scaled(&-Rational::from_integer(q), &b[j]);
                    if self.norm(&cand) < self.norm(&b[i]) {
                        b[i] = cand;
                        changed = true;
                    }
                }
            }
            if !changed {
                return b;
            }
        }
    }

    /// All nonzero vectors of minimal squared length; closed under negation
    /// and sorted lexicographically.
    pub fn shortest_vectors(&self) -> Result<Vec<QVector>> {
        self.check_enumeration_rank()?;
        let Some(radius) = self.pairwise_reduced_basis().iter().map(|v| self.norm(v)).min() else {
            return Ok(Vec::new());
        };
        let all = self.vectors_up_to(&radius)?;
        let min = all.iter().map(|(_, n)| n).min().cloned().expect("a basis vector qualifies");
        let mut out: Vec<QVector> = all.into_iter().filter(|(_, n)| *n == min).map(|(v, _)| v).collect();
        out.sort();
        Ok(out)
    }

    /// An orthogonal basis whose integer span is the whole lattice, if the
    /// lattice is rectangular.
    ///
    /// Candidates are lattice vectors up to the largest length in a reduced
    /// basis, one per sign pair (first nonzero coordinate positive), ordered
    /// by length and then by decreasing lexicographic order.
    /// The first orthogonal selection in that order whose length product
    /// equals the discriminant (equivalently, whose span has index one) is
    /// returned, so the result does not depend on the input basis.
    pub fn orthogonal_basis(&self) -> Result<Option<OrthogonalBasis>> {
        self.check_enumeration_rank()?;
        let k = self.rank();
        if k == 0 {
            return Ok(Some(OrthogonalBasis {
                vectors: Vec::new(),
                squared_lengths: Vec::new(),
            }));
        }
        let radius = self
            .pairwise_reduced_basis()
            .iter()
            .map(|v| self.norm(v))
            .max()
            .expect("nonempty basis");
        let candidates: Vec<(QVector, Rational)> = self
            .vectors_up_to(&radius)?
            .into_iter()
            .filter(|(v, _)| *v == v.sign_canonical())
            .collect();
        let disc = self.discriminant();

        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        let found = self.search_orthogonal(&candidates, &disc, 0, &Rational::one(), &mut chosen);
        Ok(found.then(|| OrthogonalBasis {
            vectors: chosen.iter().map(|&i| candidates[i].0.clone()).collect(),
            squared_lengths: chosen.iter().map(|&i| candidates[i].1.clone()).collect(),
        }))
    }

    fn search_orthogonal(
        &self,
        candidates: &[(QVector, Rational)],
        disc: &Rational,
        start: usize,
        product: &Rational,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let k = self.rank();
        if chosen.len() == k {
            return product == disc;
        }
        let remaining = (k - chosen.len()) as i32;
        for idx in start..candidates.len() {
            let (v, norm) = &candidates[idx];
            // later candidates are no shorter, so the product only grows
            if product * num_traits::pow::Pow::pow(norm, remaining as u32) > *disc {
                break;
            }
            if chosen
                .iter()
                .any(|&c| !self.inner(&candidates[c].0, v).is_zero())
            {
                continue;
            }
            chosen.push(idx);
            if self.search_orthogonal(candidates, disc, idx + 1, &(product * norm), chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// Structure of `self / sub`. Every basis vector of `sub` must lie in
    /// `self`; `sub` may have lower rank, which shows up as free rank.
    pub fn quotient_group(&self, sub: &Lattice) -> Result<AbelianGroupStructure> {
        if sub.ambient_dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: sub.ambient_dim(),
            });
        }
        let mut coords = Vec::with_capacity(sub.rank());
        for v in sub.basis_vectors() {
            match self.coordinates(&v)? {
                Some(c) => coords.push(c),
                None => return Err(Error::NotSublattice { witness: v }),
            }
        }
        let free_rank = self.rank() - sub.rank();
        if sub.rank() == 0 {
            return Ok(AbelianGroupStructure {
                free_rank,
                invariant_factors: Vec::new(),
            });
        }
        let m = QMatrix::from_columns(self.rank(), &coords);
        let snf = smith_normal_form(&m)?;
        Ok(AbelianGroupStructure {
            free_rank,
            invariant_factors: snf.invariant_factors(),
        })
    }

    /// Index of a sublattice of the same rank.
    pub fn index_of(&self, sub: &Lattice) -> Result<Option<BigInt>> {
        Ok(self.quotient_group(sub)?.order())
    }

    /// `self ∩ span(vectors)`, a lattice of rank `dim span(vectors)` since
    /// everything is rational.
    pub fn intersect_subspace(&self, span: &[QVector]) -> Result<Lattice> {
        let n = self.ambient_dim();
        if let Some(v) = span.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let annihilator = QMatrix::from_row_vectors(n, span).nullspace();
        let constraints = &QMatrix::from_row_vectors(n, &annihilator) * &self.basis;
        let kernel = integer_kernel(&constraints);
        let vectors: Vec<QVector> = kernel.iter().map(|z| self.basis.mul_vec(z)).collect();
        Ok(Lattice {
            basis: QMatrix::from_columns(n, &vectors),
            gram: self.gram.clone(),
        })
    }

    /// Whether `self = sum_i (self ∩ P_i)` for pairwise orthogonal subspaces
    /// `P_i` (each given by spanning vectors) that together span the space.
    pub fn splits_across(&self, parts: &[Vec<QVector>]) -> Result<bool> {
        let n = self.ambient_dim();
        if !self.is_full() {
            return Err(Error::NotFullRank {
                rank: self.rank(),
                dim: n,
            });
        }
        let all: Vec<QVector> = parts.iter().flatten().cloned().collect();
        if let Some(v) = all.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        for (i, p) in parts.iter().enumerate() {
            for q in &parts[i + 1..] {
                if p.iter().any(|x| q.iter().any(|y| !self.inner(x, y).is_zero())) {
                    return Err(Error::InvalidSubspaces(
                        "subspaces are not pairwise orthogonal".into(),
                    ));
                }
            }
        }
        if QMatrix::from_columns(n, &all).rank() != n {
            return Err(Error::InvalidSubspaces(
                "subspaces do not span the ambient space".into(),
            ));
        }
        let mut pieces = Vec::new();
        for p in parts {
            pieces.extend(self.intersect_subspace(p)?.basis_vectors());
        }
        let sum = Lattice::from_vectors(self.gram.clone(), &pieces)?;
        Ok(self.quotient_group(&sum)?.is_trivial())
    }

    /// `k · self`.
    pub fn scaled(&self, k: &Rational) -> Lattice {
        Lattice {
            basis: self.basis.scale(k),
            gram: self.gram.clone(),
        }
    }

    /// Orthogonal projection of `v` onto `span(vectors)` with respect to the
    /// ambient inner product; `vectors` must be linearly independent.
    pub fn project(&self, vectors: &[QVector], v: &QVector) -> QVector {
        let n = self.ambient_dim();
        if vectors.is_empty() {
            return QVector::zeros(n);
        }
        let b = QMatrix::from_columns(n, vectors);
        let bt_g = &b.transpose() * &self.gram;
        let coeffs = (&bt_g * &b)
            .solve(&bt_g.mul_vec(v))
            .expect("independent spanning vectors");
        b.mul_vec(&coeffs)
    }

    /// Rational coordinates of a vector in the span of the basis.
    pub fn rational_coordinates(&self, v: &QVector) -> Option<QVector> {
        solve_full_column_rank(&self.basis, v)
    }
}

/// `gcd` of the coordinates of an integer vector, for primitivity checks.
pub fn content(v: &QVector) -> BigInt {
    v.iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x.to_integer()))
        .abs()
}
