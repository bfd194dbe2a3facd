//! Finite root systems given as sets of covectors, with their coroots,
//! reflections, Weyl groups, half-coroot lattices, and the classical
//! families relative to an orthogonal cubic basis.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, OrthogonalBasis};
use crate::linalg::{integer_span_basis, rat, QMatrix, QVector, Rational};

/// Default limit on the size of a Weyl group closure. The largest groups
/// met at rank 6 have 46 080 elements.
pub const DEFAULT_WEYL_CAP: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    gram: QMatrix,
    dual_gram: QMatrix,
    roots: Vec<QVector>,
}

/// The first root system axiom that fails, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `-root` is missing.
    Negation { root: QVector },
    /// `other(root∨)` is not an integer.
    Integrality { root: QVector, other: QVector, value: Rational },
    /// `s_root(other)` is missing.
    Reflection { root: QVector, other: QVector, image: QVector },
}

impl AxiomViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            AxiomViolation::Negation { .. } => "negation",
            AxiomViolation::Integrality { .. } => "integrality",
            AxiomViolation::Reflection { .. } => "reflection",
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Negation { root } => {
                write!(f, "negation closure fails: -{root} is not a root")
            }
            AxiomViolation::Integrality { root, other, value } => write!(
                f,
                "integrality fails: {other} evaluated on the coroot of {root} is {value}"
            ),
            AxiomViolation::Reflection { root, other, image } => write!(
                f,
                "reflection closure fails: reflecting {other} in {root} gives {image}, not a root"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::A, Family::B, Family::C, Family::D, Family::BC];

    pub fn letter(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
        }
    }

    pub fn from_letter(s: &str) -> Option<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.letter().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// A classical family together with the rank `r` of the cubic basis it is
/// written in (so family A with `rank_parameter = r` is `A_{r-1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyTag {
    pub family: Family,
    pub rank_parameter: usize,
}

/// Shape of a positive root `α` in terms of `2α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootShape {
    /// `2α = ε_j`
    Short,
    /// `2α = 2ε_j`
    Long,
    /// `2α = ε_j + ε_k`, `j < k`
    Sum,
    /// `2α = ε_j - ε_k`, `j < k`
    Difference,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveRoot {
    /// Ambient covector coordinates.
    pub root: QVector,
    /// Coordinates in the dual basis `ε_1, ..., ε_r`.
    pub epsilon: QVector,
    pub shape: RootShape,
}

/// A cubic basis `e_1, ..., e_r` of the ambient space and its dual basis
/// `ε_1, ..., ε_r`, used to move between ambient and `ε` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonFrame {
    basis: QMatrix,
    basis_inv: QMatrix,
}

impl EpsilonFrame {
    pub fn new(vectors: &[QVector]) -> Result<Self> {
        let n = vectors.len();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let basis = QMatrix::from_columns(n, vectors);
        let basis_inv = basis.inverse().ok_or(Error::DependentColumns)?;
        Ok(EpsilonFrame { basis, basis_inv })
    }

    pub fn from_orthogonal(basis: &OrthogonalBasis) -> Result<Self> {
        Self::new(&basis.vectors)
    }

    /// Frame with every `e_j` multiplied by `signs[j]`.
    pub fn with_signs(&self, signs: &[i8]) -> Self {
        let vectors: Vec<QVector> = self
            .vectors()
            .iter()
            .zip(signs)
            .map(|(v, &s)| v.scale(&rat(s as i64)))
            .collect();
        Self::new(&vectors).expect("sign changes keep the basis independent")
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn vectors(&self) -> Vec<QVector> {
        self.basis.columns()
    }

    /// `(α(e_1), ..., α(e_r))`.
    pub fn to_epsilon(&self, covector: &QVector) -> QVector {
        self.basis.row_mul(covector)
    }

    /// Ambient covector `Σ c_j ε_j`.
    pub fn from_epsilon(&self, c: &QVector) -> QVector {
        self.basis_inv.row_mul(c)
    }

    /// Ambient coordinates of `Σ x_j e_j`.
    pub fn vector(&self, x: &QVector) -> QVector {
        self.basis.mul_vec(x)
    }
}

/// Irreducible pieces of a root system together with the common kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Each component's roots, sorted, and a basis of the span of their
    /// dual vectors `H_α`. Components are ordered by their smallest root.
    pub parts: Vec<(Vec<QVector>, Vec<QVector>)>,
    /// A basis of the subspace killed by every root.
    pub kernel: Vec<QVector>,
}

fn is_integer(x: &Rational) -> bool {
    x.is_integer()
}

impl RootSystem {
    /// Roots are deduplicated and stored sorted; zero is rejected.
    pub fn new(gram: QMatrix, roots: Vec<QVector>) -> Result<Self> {
        if !gram.is_square() || !gram.is_symmetric() || !gram.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let n = gram.rows();
        if let Some(r) = roots.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        if roots.iter().any(QVector::is_zero) {
            return Err(Error::InvalidDatum("the zero covector is not a root".into()));
        }
        let roots: Vec<QVector> = roots.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let dual_gram = gram.inverse().expect("positive definite gram is invertible");
        Ok(RootSystem {
            gram,
            dual_gram,
            roots,
        })
    }

    pub fn empty(gram: QMatrix) -> Result<Self> {
        RootSystem::new(gram, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    /// Inner product on covectors, `G⁻¹`.
    pub fn dual_gram(&self) -> &QMatrix {
        &self.dual_gram
    }

    pub fn roots(&self) -> &[QVector] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, alpha: &QVector) -> bool {
        self.roots.binary_search(alpha).is_ok()
    }

    /// Dimension of the span of the roots.
    pub fn span_rank(&self) -> usize {
        QMatrix::from_row_vectors(self.ambient_dim(), &self.roots).rank()
    }

    fn require_root(&self, alpha: &QVector) -> Result<()> {
        if alpha.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: alpha.len(),
            });
        }
        if !self.contains(alpha) {
            return Err(Error::NotARoot(alpha.clone()));
        }
        Ok(())
    }

    /// `H_α = G⁻¹ αᵀ`, the vector representing `α` through the inner product.
    pub fn dual_vector(&self, alpha: &QVector) -> QVector {
        self.dual_gram.mul_vec(alpha)
    }

    fn coroot_of(&self, alpha: &QVector) -> QVector {
        let h = self.dual_vector(alpha);
        let norm = alpha.dot(&h);
        h.scale(&(rat(2) / norm))
    }

    /// `α∨ = 2 H_α / ‖H_α‖²`.
    pub fn coroot(&self, alpha: &QVector) -> Result<QVector> {
        self.require_root(alpha)?;
        Ok(self.coroot_of(alpha))
    }

    fn reflection_of(&self, alpha: &QVector) -> QMatrix {
        let c = self.coroot_of(alpha);
        let n = self.ambient_dim();
        let mut s = QMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] -= &c[i] * &alpha[j];
            }
        }
        s
    }

    /// Matrix of `s_α(H) = H − α(H) α∨` acting on ambient vectors.
    pub fn reflection(&self, alpha: &QVector) -> Result<QMatrix> {
        self.require_root(alpha)?;
        Ok(self.reflection_of(alpha))
    }

    /// `β ∘ s_α = β − β(α∨) α`.
    fn reflect_covector(&self, alpha: &QVector, coroot: &QVector, beta: &QVector) -> QVector {
        beta.add_scaled(&-beta.dot(coroot), alpha)
    }

    /// Checks negation closure, then integrality, then reflection closure.
    pub fn check_axioms(&self) -> std::result::Result<(), AxiomViolation> {
        if let Some(root) = self.roots.iter().find(|a| !self.contains(&-*a)) {
            return Err(AxiomViolation::Negation { root: root.clone() });
        }
        let coroots: Vec<QVector> = self.roots.iter().map(|a| self.coroot_of(a)).collect();
        for (alpha, c) in self.roots.iter().zip(&coroots) {
            for beta in &self.roots {
                let value = beta.dot(c);
                if !is_integer(&value) {
                    return Err(AxiomViolation::Integrality {
                        root: alpha.clone(),
                        other: beta.clone(),
                        value,
                    });
                }
            }
        }
        for (alpha, c) in self.roots.iter().zip(&coroots) {
            for beta in &self.roots {
                let image = self.reflect_covector(alpha, c, beta);
                if !self.contains(&image) {
                    return Err(AxiomViolation::Reflection {
                        root: alpha.clone(),
                        other: beta.clone(),
                        image,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check_axioms().is_ok()
    }

    /// Roots whose first nonzero coordinate is positive.
    pub fn lexicographic_positive(&self) -> Vec<QVector> {
        self.roots
            .iter()
            .filter(|a| a.leading().is_some_and(|x| x.is_positive()))
            .cloned()
            .collect()
    }

    /// Simple roots of the lexicographic positive system: positive roots
    /// that are not a sum of two positive roots.
    pub fn simple_roots(&self) -> Vec<QVector> {
        let pos = self.lexicographic_positive();
        let sums: HashSet<QVector> = pos
            .iter()
            .enumerate()
            .flat_map(|(i, a)| pos[i..].iter().map(move |b| a + b))
            .collect();
        pos.into_iter().filter(|a| !sums.contains(a)).collect()
    }

    /// The Weyl group, by breadth-first closure over the simple reflections.
    pub fn weyl_group(&self, cap: usize) -> Result<WeylGroup> {
        if let Err(v) = self.check_axioms() {
            return Err(Error::InvalidDatum(v.to_string()));
        }
        WeylGroup::generate(self, cap)
    }

    /// The lattice spanned by the half-coroots `½α∨`.
    pub fn gamma0(&self) -> Lattice {
        let n = self.ambient_dim();
        let half: Vec<QVector> = self
            .roots
            .iter()
            .map(|a| self.coroot_of(a).scale(&Rational::new(1.into(), 2.into())))
            .collect();
        let basis = integer_span_basis(n, &half);
        Lattice::new(QMatrix::from_columns(n, &basis), self.gram.clone())
            .expect("span basis is independent")
    }

    /// A root `α` and lattice basis vector `γ` with `2α(γ) ∉ ℤ`, if any.
    pub fn gamma1_violation(&self, lattice: &Lattice) -> Result<Option<(QVector, QVector)>> {
        if lattice.ambient_dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: lattice.ambient_dim(),
            });
        }
        for gamma in lattice.basis_vectors() {
            for alpha in &self.roots {
                if !is_integer(&(alpha.dot(&gamma) * rat(2))) {
                    return Ok(Some((alpha.clone(), gamma)));
                }
            }
        }
        Ok(None)
    }

    /// Whether `lattice ⊂ Γ₁ = ½{H : α(H) ∈ ℤ for all roots α}`.
    pub fn gamma1_contains(&self, lattice: &Lattice) -> Result<bool> {
        Ok(self.gamma1_violation(lattice)?.is_none())
    }

    /// Connected components of the graph joining roots with non-orthogonal
    /// dual vectors, plus the common kernel of all roots.
    pub fn irreducible_components(&self) -> Components {
        let n = self.ambient_dim();
        let m = self.roots.len();
        let mut component = vec![usize::MAX; m];
        let mut parts = Vec::new();
        for start in 0..m {
            if component[start] != usize::MAX {
                continue;
            }
            let id = parts.len();
            component[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for j in 0..m {
                    if component[j] == usize::MAX
                        && !self.dual_gram.bilinear(&self.roots[i], &self.roots[j]).is_zero()
                    {
                        component[j] = id;
                        members.push(j);
                        queue.push_back(j);
                    }
                }
            }
            members.sort();
            let roots: Vec<QVector> = members.iter().map(|&i| self.roots[i].clone()).collect();
            let hs: Vec<QVector> = roots.iter().map(|a| self.dual_vector(a)).collect();
            let (rref, pivots) = QMatrix::from_columns(n, &hs).transpose().rref();
            let span = (0..pivots.len()).map(|i| rref.row(i)).collect();
            parts.push((roots, span));
        }
        let kernel = QMatrix::from_row_vectors(n, &self.roots).nullspace();
        Components { parts, kernel }
    }

    /// Roots in `ε` coordinates, doubled: the set `2R` written in the frame.
    fn doubled_in_frame(&self, frame: &EpsilonFrame) -> Result<Vec<QVector>> {
        if frame.rank() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: frame.rank(),
            });
        }
        Ok(self
            .roots
            .iter()
            .map(|a| frame.to_epsilon(a).scale(&rat(2)))
            .collect())
    }

    /// Signs `λ_j` such that `λ_i ε_i − λ_j ε_j ∈ 2R` for all `i < j`.
    ///
    /// Indices are adjoined in ascending order: each step takes the smallest
    /// index linked by a root to the indices already fixed, chooses its sign
    /// from the smallest such partner, and checks it against all of them.
    pub fn normalize_signs(&self, frame: &EpsilonFrame) -> Result<Vec<i8>> {
        let doubled: HashSet<QVector> = self.doubled_in_frame(frame)?.into_iter().collect();
        let r = frame.rank();
        let mut signs: Vec<Option<i8>> = vec![None; r];
        if r == 0 {
            return Ok(Vec::new());
        }
        signs[0] = Some(1);
        let pair = |i: usize, si: i8, j: usize, sj: i8| {
            let mut v = QVector::zeros(r);
            v[i] += rat(si as i64);
            v[j] += rat(sj as i64);
            v
        };
        let linked = |i: usize, j: usize| {
            [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                .iter()
                .any(|&(a, b)| doubled.contains(&pair(i, a, j, b)))
        };
        for _ in 1..r {
            let next = (0..r).filter(|&m| signs[m].is_none()).find_map(|m| {
                (0..r)
                    .find(|&l| signs[l].is_some() && linked(l, m))
                    .map(|l| (m, l))
            });
            let Some((m, l)) = next else {
                return Err(Error::NoSignAssignment(
                    "the roots do not link all basis directions".into(),
                ));
            };
            let sl = signs[l].expect("joined index");
            let sm = if doubled.contains(&pair(l, sl, m, -1)) { 1 } else { -1 };
            signs[m] = Some(sm);
            for i in 0..r {
                let Some(si) = signs[i] else { continue };
                if i == m {
                    continue;
                }
                let (a, sa, b, sb) = if i < m { (i, si, m, sm) } else { (m, sm, i, si) };
                if !doubled.contains(&pair(a, sa, b, -sb)) {
                    return Err(Error::NoSignAssignment(format!(
                        "no sign of e_{} makes the difference with e_{} a doubled root",
                        m + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(signs.into_iter().map(|s| s.expect("all joined")).collect())
    }

    /// Matches the roots against the five classical families in the given
    /// frame, which must be cubic with normalized signs.
    pub fn classify_family(&self, frame: &EpsilonFrame) -> Result<FamilyTag> {
        let doubled: BTreeSet<QVector> = self.doubled_in_frame(frame)?.into_iter().collect();
        let r = frame.rank();
        let shapes = family_doubled_set(None, r);
        if let Some(bad) = doubled.iter().find(|v| !shapes.contains(v)) {
            return Err(Error::ShapeViolation {
                root: frame.from_epsilon(&bad.scale(&Rational::new(1.into(), 2.into()))),
            });
        }
        Family::ALL
            .into_iter()
            .filter(|&f| f != Family::D || r >= 2)
            .find(|&f| family_doubled_set(Some(f), r) == doubled)
            .map(|family| FamilyTag {
                family,
                rank_parameter: r,
            })
            .ok_or(Error::PatternMismatch)
    }

    /// The positive roots `α` with `2α ∈ {ε_j, 2ε_j, ε_j + ε_k, ε_j − ε_k : j < k}`.
    pub fn positive_roots(&self, frame: &EpsilonFrame) -> Result<Vec<PositiveRoot>> {
        self.classify_family(frame)?;
        let half = Rational::new(1.into(), 2.into());
        let mut out = Vec::new();
        for d in self.doubled_in_frame(frame)? {
            let nz: Vec<(usize, i64)> = d
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.to_integer().to_i64().expect("shape-checked")))
                .collect();
            let shape = match nz.as_slice() {
                [(_, 1)] => RootShape::Short,
                [(_, 2)] => RootShape::Long,
                [(_, 1), (_, 1)] => RootShape::Sum,
                [(_, 1), (_, -1)] => RootShape::Difference,
                _ => continue,
            };
            let epsilon = d.scale(&half);
            out.push(PositiveRoot {
                root: frame.from_epsilon(&epsilon),
                epsilon,
                shape,
            });
        }
        out.sort_by(|a, b| b.epsilon.cmp(&a.epsilon));
        Ok(out)
    }
}

/// Doubled root set `2R` of a family in rank `r`, in `ε` coordinates; with
/// `None`, the union of all admissible shapes.
pub(crate) fn family_doubled_set(family: Option<Family>, r: usize) -> BTreeSet<QVector> {
    let mut out = BTreeSet::new();
    let unit = |entries: &[(usize, i64)]| {
        let mut v = QVector::zeros(r);
        for &(i, x) in entries {
            v[i] = rat(x);
        }
        v
    };
    let (short, long, sums, diffs) = match family {
        None => (true, true, true, true),
        Some(Family::A) => (false, false, false, true),
        Some(Family::B) => (true, false, true, true),
        Some(Family::C) => (false, true, true, true),
        Some(Family::D) => (false, false, true, true),
        Some(Family::BC) => (true, true, true, true),
    };
    for j in 0..r {
        for s in [1, -1] {
            if short {
                out.insert(unit(&[(j, s)]));
            }
            if long {
                out.insert(unit(&[(j, 2 * s)]));
            }
        }
        for k in j + 1..r {
            for s in [1, -1] {
                if sums {
                    out.insert(unit(&[(j, s), (k, s)]));
                }
                if diffs {
                    out.insert(unit(&[(j, s), (k, -s)]));
                }
            }
        }
    }
    out
}

/// Finite reflection group. Elements are kept as integer matrices in a
/// frame made of a basis of the coroot lattice and a basis of the common
/// kernel of the roots, where every Weyl group element is integral.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    dim: usize,
    frame: QMatrix,
    frame_inv: QMatrix,
    generators: Vec<QMatrix>,
    elements: Vec<Vec<i64>>,
}

fn mul_int(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += x * b[k * n + j];
            }
        }
    }
    c
}

impl WeylGroup {
    fn generate(roots: &RootSystem, cap: usize) -> Result<Self> {
        let n = roots.ambient_dim();
        let coroots: Vec<QVector> = roots.roots().iter().map(|a| roots.coroot_of(a)).collect();
        let mut frame_cols = integer_span_basis(n, &coroots);
        frame_cols.extend(QMatrix::from_row_vectors(n, roots.roots()).nullspace());
        let frame = QMatrix::from_columns(n, &frame_cols);
        let frame_inv = frame.inverse().expect("coroots and kernel span the space");

        let generators: Vec<QMatrix> = roots
            .simple_roots()
            .iter()
            .map(|a| roots.reflection_of(a))
            .collect();
        let int_generators: Vec<Vec<i64>> = generators
            .iter()
            .map(|s| {
                let m = &(&frame_inv * s) * &frame;
                (0..n * n)
                    .map(|idx| {
                        let x = &m[(idx / n, idx % n)];
                        if !x.is_integer() {
                            return Err(Error::Internal("reflection is not integral on coroots".into()));
                        }
                        x.to_integer()
                            .to_i64()
                            .ok_or_else(|| Error::Internal("reflection entry overflow".into()))
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<_>>()?;

        let identity: Vec<i64> = (0..n * n).map(|i| i64::from(i / n == i % n)).collect();
        let mut seen: HashSet<Vec<i64>> = HashSet::from([identity.clone()]);
        let mut elements = vec![identity];
        let mut head = 0;
        while head < elements.len() {
            for g in &int_generators {
                let prod = mul_int(g, &elements[head], n);
                if seen.insert(prod.clone()) {
                    elements.push(prod);
                    if elements.len() > cap {
                        return Err(Error::WeylCapExceeded { cap });
                    }
                }
            }
            head += 1;
        }
        Ok(WeylGroup {
            dim: n,
            frame,
            frame_inv,
            generators,
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Simple reflections, in the order of their roots.
    pub fn generators(&self) -> &[QMatrix] {
        &self.generators
    }

    /// Element `i` in breadth-first order, as a matrix on ambient vectors.
    /// Element 0 is the identity.
    pub fn element(&self, i: usize) -> QMatrix {
        let n = self.dim;
        let e = &self.elements[i];
        let mut m = QMatrix::zeros(n, n);
        for idx in 0..n * n {
            m[(idx / n, idx % n)] = rat(e[idx]);
        }
        &(&self.frame * &m) * &self.frame_inv
    }

    pub fn elements(&self) -> impl Iterator<Item = QMatrix> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// The orbit `{w v}`, sorted lexicographically.
    pub fn orbit(&self, v: &QVector) -> Result<Vec<QVector>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut seen = BTreeSet::from([v.clone()]);
        let mut queue = VecDeque::from([v.clone()]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.mul_vec(&x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}
