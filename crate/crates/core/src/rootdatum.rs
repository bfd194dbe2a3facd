//! Euclidean root data `(V, Γ, R)`: an inner product, a full lattice and a
//! root system with `Γ₀(R) ⊆ Γ ⊆ Γ₁(R)`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::{AbelianGroupStructure, Lattice, OrthogonalBasis};
use crate::linalg::{frac, QMatrix, QVector, Rational};
use crate::rootsystem::{family_doubled_set, AxiomViolation, EpsilonFrame, Family, RootSystem};

/// Largest rank accepted by [`EuclideanRootDatum::is_isomorphic`].
pub const MAX_ISOMORPHISM_RANK: usize = 6;

/// One of the five hatted types with its lattice rank `r` and the common
/// squared length `L²` of the cubic basis. Family A in rank `r` is the type
/// usually written `Â_{r-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DatumType {
    pub family: Family,
    pub rank: usize,
    pub length_sq: Rational,
}

impl DatumType {
    /// Rank-one D is reported as `Â₀`, the same datum.
    pub fn new(family: Family, rank: usize, length_sq: Rational) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidType("rank must be at least 1".into()));
        }
        if !length_sq.is_positive() {
            return Err(Error::InvalidType("squared length must be positive".into()));
        }
        let family = if family == Family::D && rank == 1 { Family::A } else { family };
        Ok(DatumType {
            family,
            rank,
            length_sq,
        })
    }

    /// `A3-hat`, `B3-hat`, `BC2-hat`, ...; family A is labelled by `r - 1`.
    pub fn label(&self) -> String {
        let index = match self.family {
            Family::A => self.rank - 1,
            _ => self.rank,
        };
        format!("{}{}-hat", self.family.letter(), index)
    }

    pub fn case(&self) -> EmbeddingCase {
        if self.family == Family::A {
            EmbeddingCase::II
        } else {
            EmbeddingCase::I
        }
    }
}

impl fmt::Display for DatumType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Weight set of the torus embedding: `{0, ±ε_j}` (I) or `{0, ε_j}` (II).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbeddingCase {
    I,
    II,
}

impl fmt::Display for EmbeddingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingCase::I => "I",
            EmbeddingCase::II => "II",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub datum_type: DatumType,
    /// Cubic basis with the normalizing signs already applied.
    pub cubic_basis: OrthogonalBasis,
    pub signs: Vec<i8>,
    pub fundamental_group: AbelianGroupStructure,
    pub case: EmbeddingCase,
}

impl ClassificationReport {
    pub fn frame(&self) -> EpsilonFrame {
        EpsilonFrame::from_orthogonal(&self.cubic_basis).expect("cubic basis is a basis")
    }
}

/// Why a datum fails validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatumViolation {
    NotFull { rank: usize, dim: usize },
    Roots(AxiomViolation),
    /// A half-coroot lattice vector outside `Γ`.
    Gamma0NotContained { witness: QVector },
    /// A lattice vector `γ` with `2α(γ) ∉ ℤ`.
    NotInGamma1 { root: QVector, witness: QVector },
}

impl fmt::Display for DatumViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatumViolation::NotFull { rank, dim } => {
                write!(f, "lattice has rank {rank} in dimension {dim}")
            }
            DatumViolation::Roots(v) => write!(f, "root system: {v}"),
            DatumViolation::Gamma0NotContained { witness } => {
                write!(f, "gamma0 is not contained in the lattice: {witness} is missing")
            }
            DatumViolation::NotInGamma1 { root, witness } => write!(
                f,
                "lattice is not contained in gamma1: twice {root} on {witness} is not an integer"
            ),
        }
    }
}

/// Spanning vectors and roots of each orthogonal block.
type Blocks = (Vec<Vec<QVector>>, Vec<Vec<QVector>>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclideanRootDatum {
    lattice: Lattice,
    roots: RootSystem,
}

impl EuclideanRootDatum {
    /// The lattice and the root system must share the same inner product.
    pub fn new(lattice: Lattice, roots: RootSystem) -> Result<Self> {
        if lattice.gram() != roots.gram() {
            return Err(Error::InvalidDatum(
                "lattice and roots use different inner products".into(),
            ));
        }
        Ok(EuclideanRootDatum { lattice, roots })
    }

    pub fn from_parts(gram: QMatrix, lattice_basis: &[QVector], roots: Vec<QVector>) -> Result<Self> {
        let lattice = Lattice::from_vectors(gram.clone(), lattice_basis)?;
        let roots = RootSystem::new(gram, roots)?;
        Self::new(lattice, roots)
    }

    /// Standard datum of a type: gram `L² I`, lattice `ℤ^r` and the
    /// family's roots in the dual basis.
    pub fn standard(t: &DatumType) -> Self {
        let r = t.rank;
        let gram = QMatrix::scalar(r, &t.length_sq);
        let half = frac(1, 2);
        let roots = family_doubled_set(Some(t.family), r)
            .into_iter()
            .map(|v| v.scale(&half))
            .collect();
        Self::new(
            Lattice::new(QMatrix::identity(r), gram.clone()).expect("identity basis"),
            RootSystem::new(gram, roots).expect("family roots are nonzero"),
        )
        .expect("shared gram")
    }

    pub fn dim(&self) -> usize {
        self.lattice.ambient_dim()
    }

    pub fn gram(&self) -> &QMatrix {
        self.lattice.gram()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn roots(&self) -> &RootSystem {
        &self.roots
    }

    /// Checks fullness, the root axioms, `Γ₀ ⊆ Γ` and `Γ ⊆ Γ₁`, in that order.
    pub fn validate(&self) -> std::result::Result<(), DatumViolation> {
        if !self.lattice.is_full() {
            return Err(DatumViolation::NotFull {
                rank: self.lattice.rank(),
                dim: self.dim(),
            });
        }
        self.roots.check_axioms().map_err(DatumViolation::Roots)?;
        for v in self.roots.gamma0().basis_vectors() {
            if !self.lattice.contains(&v).expect("same dimension") {
                return Err(DatumViolation::Gamma0NotContained { witness: v });
            }
        }
        if let Some((root, witness)) = self
            .roots
            .gamma1_violation(&self.lattice)
            .expect("same dimension")
        {
            return Err(DatumViolation::NotInGamma1 { root, witness });
        }
        Ok(())
    }

    fn require_valid(&self) -> Result<()> {
        self.validate()
            .map_err(|v| Error::InvalidDatum(v.to_string()))
    }

    /// `Γ / Γ₀`.
    pub fn fundamental_group(&self) -> Result<AbelianGroupStructure> {
        self.require_valid()?;
        self.lattice.quotient_group(&self.roots.gamma0())
    }

    /// Rectangular lattice with `Γ = Γ₀`.
    pub fn admits_polysphere(&self) -> Result<bool> {
        self.require_valid()?;
        Ok(self.lattice.orthogonal_basis()?.is_some()
            && self.lattice.quotient_group(&self.roots.gamma0())?.is_trivial())
    }

    /// Orthogonal blocks: the spans of the irreducible root components and
    /// the lines of an orthogonal basis of `Γ ∩ 𝔞₀` (or all of `𝔞₀` when that
    /// lattice is not rectangular).
    fn blocks(&self) -> Result<Blocks> {
        let comps = self.roots.irreducible_components();
        let mut spans = Vec::new();
        let mut roots = Vec::new();
        for (rs, span) in comps.parts {
            spans.push(span);
            roots.push(rs);
        }
        if !comps.kernel.is_empty() {
            let k = self.lattice.intersect_subspace(&comps.kernel)?;
            match k.orthogonal_basis().ok().flatten() {
                Some(ob) => {
                    for v in ob.vectors {
                        spans.push(vec![v]);
                        roots.push(Vec::new());
                    }
                }
                None => {
                    spans.push(comps.kernel);
                    roots.push(Vec::new());
                }
            }
        }
        Ok((spans, roots))
    }

    /// The finest orthogonal decomposition of the datum.
    ///
    /// A set of blocks is closed when projecting the lattice onto its span
    /// lands inside the lattice; closed sets are stable under intersection
    /// and complement, so the minimal closed sets partition the blocks and
    /// give the factors. Returns `[self]` when indecomposable.
    pub fn split(&self) -> Result<Vec<EuclideanRootDatum>> {
        self.require_valid()?;
        let (spans, block_roots) = self.blocks()?;
        let m = spans.len();
        if m <= 1 {
            return Ok(vec![self.clone()]);
        }
        let basis = self.lattice.basis_vectors();
        // projections[b][i]: basis vector i projected onto block b
        let projections: Vec<Vec<QVector>> = spans
            .iter()
            .map(|s| basis.iter().map(|v| self.lattice.project(s, v)).collect())
            .collect();
        let closed = |mask: usize| -> bool {
            (0..basis.len()).all(|i| {
                let mut p = QVector::zeros(self.dim());
                for (b, proj) in projections.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        p = &p + &proj[i];
                    }
                }
                self.lattice.contains(&p).expect("same dimension")
            })
        };
        let full = (1usize << m) - 1;
        let closed_sets: Vec<usize> = (1..=full).filter(|&s| closed(s)).collect();
        let mut atoms: Vec<usize> = Vec::new();
        for b in 0..m {
            if atoms.iter().any(|a| a >> b & 1 == 1) {
                continue;
            }
            let atom = closed_sets
                .iter()
                .filter(|&&s| s >> b & 1 == 1)
                .fold(full, |acc, &s| acc & s);
            atoms.push(atom);
        }
        if atoms.len() == 1 {
            return Ok(vec![self.clone()]);
        }
        atoms
            .iter()
            .map(|&atom| {
                let members: Vec<usize> = (0..m).filter(|&b| atom >> b & 1 == 1).collect();
                let span: Vec<QVector> = members.iter().flat_map(|&b| spans[b].clone()).collect();
                let roots: Vec<QVector> = members.iter().flat_map(|&b| block_roots[b].clone()).collect();
                self.restrict(&span, &roots)
            })
            .collect()
    }

    /// Sub-datum on `Γ ∩ span`, written in a basis of that lattice.
    fn restrict(&self, span: &[QVector], roots: &[QVector]) -> Result<EuclideanRootDatum> {
        let sub = self.lattice.intersect_subspace(span)?;
        let b = sub.basis();
        let k = sub.rank();
        let gram = sub.coordinate_gram();
        let roots = roots.iter().map(|a| b.row_mul(a)).collect();
        EuclideanRootDatum::new(
            Lattice::new(QMatrix::identity(k), gram.clone())?,
            RootSystem::new(gram, roots)?,
        )
    }

    /// Type, cubic basis, signs, fundamental group and embedding case.
    pub fn classify(&self) -> Result<ClassificationReport> {
        self.require_valid()?;
        let basis = self.lattice.orthogonal_basis()?.ok_or(Error::NotRectangular)?;
        let factors = self.split()?;
        if factors.len() > 1 {
            return Err(Error::Decomposable {
                factor_dims: factors.iter().map(|f| f.dim()).collect(),
            });
        }
        let length_sq = basis.common_length_sq().cloned().ok_or(Error::NotCubic)?;
        let frame = EpsilonFrame::from_orthogonal(&basis)?;
        let signs = self.roots.normalize_signs(&frame)?;
        let frame = frame.with_signs(&signs);
        let tag = self.roots.classify_family(&frame)?;
        let datum_type = DatumType::new(tag.family, tag.rank_parameter, length_sq.clone())?;
        let fundamental_group = self.lattice.quotient_group(&self.roots.gamma0())?;
        let r = basis.rank();
        Ok(ClassificationReport {
            case: datum_type.case(),
            datum_type,
            cubic_basis: OrthogonalBasis {
                vectors: frame.vectors(),
                squared_lengths: vec![length_sq; r],
            },
            signs,
            fundamental_group,
        })
    }

    /// A linear isometry `φ` with `φ(Γ) = Γ'` and `α ∘ φ⁻¹ ∈ R'` for every
    /// root `α`, as a matrix from `self`'s coordinates to `other`'s.
    ///
    /// Search maps a reduced basis of `self` onto length-matched lattice
    /// vectors of `other` in lexicographic order, so the witness returned
    /// is the first one in that order.
    pub fn is_isomorphic(&self, other: &EuclideanRootDatum) -> Result<Option<QMatrix>> {
        let n = self.dim();
        for d in [self, other] {
            if d.dim() > MAX_ISOMORPHISM_RANK {
                return Err(Error::RankTooLarge {
                    rank: d.dim(),
                    max: MAX_ISOMORPHISM_RANK,
                });
            }
        }
        if other.dim() != n
            || self.roots.len() != other.roots.len()
            || self.lattice.discriminant() != other.lattice.discriminant()
            || self.lattice.quotient_group(&self.roots.gamma0())?
                != other.lattice.quotient_group(&other.roots.gamma0())?
        {
            return Ok(None);
        }
        let root_norms = |d: &EuclideanRootDatum| {
            let mut v: Vec<Rational> = d
                .roots
                .roots()
                .iter()
                .map(|a| d.roots.dual_gram().bilinear(a, a))
                .collect();
            v.sort();
            v
        };
        if root_norms(self) != root_norms(other) {
            return Ok(None);
        }

        let source = self.lattice.pairwise_reduced_basis();
        let g1 = self.gram();
        let g2 = other.gram();
        let target_gram: Vec<Vec<Rational>> = source
            .iter()
            .map(|x| source.iter().map(|y| g1.bilinear(x, y)).collect())
            .collect();
        let Some(max_norm) = (0..n).map(|i| target_gram[i][i].clone()).max() else {
            return Ok(Some(QMatrix::identity(0)));
        };
        let pool = other.lattice.vectors_up_to(&max_norm)?;
        let candidates: Vec<Vec<QVector>> = (0..n)
            .map(|i| {
                let mut c: Vec<QVector> = pool
                    .iter()
                    .filter(|(_, norm)| *norm == target_gram[i][i])
                    .map(|(v, _)| v.clone())
                    .collect();
                c.sort();
                c
            })
            .collect();

        let source_matrix = QMatrix::from_columns(n, &source);
        let source_inv = source_matrix.inverse().expect("full lattice basis");
        let target_roots: BTreeSet<&QVector> = other.roots.roots().iter().collect();
        let mut chosen: Vec<QVector> = Vec::with_capacity(n);

        fn search(
            i: usize,
            candidates: &[Vec<QVector>],
            target_gram: &[Vec<Rational>],
            g2: &QMatrix,
            chosen: &mut Vec<QVector>,
            accept: &mut dyn FnMut(&[QVector]) -> Option<QMatrix>,
        ) -> Option<QMatrix> {
            if i == candidates.len() {
                return accept(chosen);
            }
            for c in &candidates[i] {
                if (0..i).any(|j| g2.bilinear(&chosen[j], c) != target_gram[i][j]) {
                    continue;
                }
                chosen.push(c.clone());
                if let Some(phi) = search(i + 1, candidates, target_gram, g2, chosen, accept) {
                    return Some(phi);
                }
                chosen.pop();
            }
            None
        }

        let mut accept = |images: &[QVector]| -> Option<QMatrix> {
            let phi = &QMatrix::from_columns(n, images) * &source_inv;
            let image_lattice = Lattice::from_vectors(g2.clone(), images).ok()?;
            if !image_lattice.same_span(&other.lattice) {
                return None;
            }
            let phi_inv = phi.inverse()?;
            self.roots
                .roots()
                .iter()
                .all(|a| target_roots.contains(&phi_inv.row_mul(a)))
                .then_some(phi)
        };
        Ok(search(0, &candidates, &target_gram, g2, &mut chosen, &mut accept))
    }

    /// Orthogonal sum of two data.
    pub fn direct_sum(&self, other: &EuclideanRootDatum) -> Result<EuclideanRootDatum> {
        let (n1, n2) = (self.dim(), other.dim());
        let n = n1 + n2;
        let mut gram = QMatrix::zeros(n, n);
        for i in 0..n1 {
            for j in 0..n1 {
                gram[(i, j)] = self.gram()[(i, j)].clone();
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                gram[(n1 + i, n1 + j)] = other.gram()[(i, j)].clone();
            }
        }
        let pad = |v: &QVector, offset: usize| {
            let mut w = QVector::zeros(n);
            for (i, x) in v.iter().enumerate() {
                w[offset + i] = x.clone();
            }
            w
        };
        let mut basis: Vec<QVector> = self.lattice.basis_vectors().iter().map(|v| pad(v, 0)).collect();
        basis.extend(other.lattice.basis_vectors().iter().map(|v| pad(v, n1)));
        let mut roots: Vec<QVector> = self.roots.roots().iter().map(|a| pad(a, 0)).collect();
        roots.extend(other.roots.roots().iter().map(|a| pad(a, n1)));
        EuclideanRootDatum::from_parts(gram, &basis, roots)
    }

    /// Same roots and gram with a different lattice.
    pub fn with_lattice(&self, basis: &[QVector]) -> Result<EuclideanRootDatum> {
        let lattice = Lattice::from_vectors(self.gram().clone(), basis)?;
        EuclideanRootDatum::new(lattice, self.roots.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn std(f: Family, r: usize, l2: i64) -> EuclideanRootDatum {
        EuclideanRootDatum::standard(&DatumType::new(f, r, rat(l2)).unwrap())
    }

    #[test]
    fn type_labels() {
        assert_eq!(DatumType::new(Family::A, 4, rat(1)).unwrap().label(), "A3-hat");
        assert_eq!(DatumType::new(Family::B, 3, rat(1)).unwrap().label(), "B3-hat");
        assert_eq!(DatumType::new(Family::BC, 2, rat(1)).unwrap().label(), "BC2-hat");
        assert_eq!(DatumType::new(Family::D, 1, rat(1)).unwrap().label(), "A0-hat");
        assert!(DatumType::new(Family::C, 0, rat(1)).is_err());
    }

    #[test]
    fn standard_examples() {
        assert_eq!(std(Family::B, 2, 1).roots().len(), 8);
        let bc1 = std(Family::BC, 1, 1);
        assert_eq!(
            bc1.roots().roots(),
            &[
                QVector::from_ints(&[-1]),
                QVector(vec![frac(-1, 2)]),
                QVector(vec![frac(1, 2)]),
                QVector::from_ints(&[1]),
            ]
        );
        assert!(std(Family::A, 1, 1).roots().is_empty());
    }

    #[test]
    fn validation_examples() {
        assert!(std(Family::C, 3, 1).validate().is_ok());
        let c2 = std(Family::C, 2, 1);
        let bad = c2.with_lattice(&[QVector::from_ints(&[3, 0]), QVector::from_ints(&[0, 3])]).unwrap();
        match bad.validate() {
            Err(DatumViolation::Gamma0NotContained { witness }) => {
                assert_eq!(witness, QVector::from_ints(&[1, 0]))
            }
            other => panic!("unexpected {other:?}"),
        }
        let b2 = std(Family::B, 2, 1);
        let quarter = frac(1, 4);
        let bad = b2
            .with_lattice(&[
                QVector(vec![quarter.clone(), rat(0)]),
                QVector(vec![rat(0), quarter]),
            ])
            .unwrap();
        assert!(matches!(bad.validate(), Err(DatumViolation::NotInGamma1 { .. })));
    }

    #[test]
    fn classification_examples() {
        let rep = std(Family::B, 3, 1).classify().unwrap();
        assert_eq!(rep.datum_type.label(), "B3-hat");
        assert_eq!(rep.fundamental_group.to_string(), "Z/2");
        assert_eq!(rep.case, EmbeddingCase::I);

        let rep = std(Family::A, 4, 1).classify().unwrap();
        assert_eq!(rep.datum_type.label(), "A3-hat");
        assert_eq!(rep.fundamental_group.to_string(), "Z");
        assert_eq!(rep.case, EmbeddingCase::II);

        let hex = QMatrix::from_rows(vec![vec![rat(1), frac(1, 2)], vec![frac(1, 2), rat(1)]], 2).unwrap();
        let d = EuclideanRootDatum::from_parts(hex, &[QVector::unit(2, 0), QVector::unit(2, 1)], vec![]).unwrap();
        assert_eq!(d.classify().unwrap_err(), Error::NotRectangular);
    }

    #[test]
    fn fundamental_groups() {
        assert!(std(Family::C, 3, 1).fundamental_group().unwrap().is_trivial());
        assert_eq!(std(Family::B, 3, 1).fundamental_group().unwrap().to_string(), "Z/2");
        assert_eq!(std(Family::D, 3, 1).fundamental_group().unwrap().to_string(), "Z/2");
    }

    #[test]
    fn split_examples() {
        let c1 = std(Family::C, 1, 1);
        let prod = c1.direct_sum(&c1).unwrap();
        let parts = prod.split().unwrap();
        assert_eq!(parts.len(), 2);
        assert!(matches!(prod.classify(), Err(Error::Decomposable { factor_dims }) if factor_dims == vec![1, 1]));
        for r in 2..=4 {
            assert_eq!(std(Family::A, r, 1).split().unwrap().len(), 1);
        }
        assert_eq!(std(Family::D, 2, 1).split().unwrap().len(), 1);
        let sum = std(Family::B, 2, 1).direct_sum(&std(Family::A, 2, 2)).unwrap();
        let parts = sum.split().unwrap();
        assert_eq!(parts.iter().map(|p| p.dim()).collect::<Vec<_>>(), vec![2, 2]);
        assert_eq!(parts[0].classify().unwrap().datum_type.label(), "B2-hat");
        assert_eq!(parts[1].classify().unwrap().datum_type.label(), "A1-hat");
    }

    #[test]
    fn polysphere_examples() {
        assert!(std(Family::C, 3, 1).admits_polysphere().unwrap());
        assert!(!std(Family::B, 3, 1).admits_polysphere().unwrap());
        assert!(std(Family::BC, 2, 1).admits_polysphere().unwrap());
    }

    #[test]
    fn isomorphism_examples() {
        let c2 = std(Family::C, 2, 1);
        let swapped = c2
            .with_lattice(&[QVector::unit(2, 1), QVector::unit(2, 0)])
            .unwrap();
        assert!(c2.is_isomorphic(&swapped).unwrap().is_some());
        assert!(std(Family::B, 2, 1).is_isomorphic(&c2).unwrap().is_none());
        assert!(c2.is_isomorphic(&std(Family::C, 2, 4)).unwrap().is_none());
        let phi = c2.is_isomorphic(&c2).unwrap().unwrap();
        assert_eq!(&(&phi.transpose() * c2.gram()) * &phi, *c2.gram());
    }
}
