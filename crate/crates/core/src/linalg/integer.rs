//! Integer-lattice algorithms over exact rationals: Smith normal form,
//! Hermite-style span bases, integer kernels and integer solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::QMatrix;
use super::rational::Rational;
use super::vector::QVector;
use crate::error::{Error, Result};

type IntRows = Vec<Vec<BigInt>>;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal with
/// nonnegative entries forming a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: QMatrix,
    pub d: QMatrix,
    pub v: QMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries of `D`, in order.
    pub fn nonzero_diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d[(i, i)].to_integer())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_diagonal().len()
    }

    /// Diagonal entries greater than one; the torsion of the cokernel.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.nonzero_diagonal()
            .into_iter()
            .filter(|x| !x.is_one())
            .collect()
    }
}

fn to_int_rows(a: &QMatrix) -> Result<IntRows> {
    if !a.is_integral() {
        return Err(Error::NonInteger);
    }
    Ok((0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a[(i, j)].to_integer()).collect())
        .collect())
}

fn from_int_rows(rows: &IntRows, cols: usize) -> QMatrix {
    let mut m = QMatrix::zeros(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = Rational::from_integer(x.clone());
        }
    }
    m
}

fn identity_rows(n: usize) -> IntRows {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect()
}

fn row_sub(a: &mut IntRows, target: usize, src: usize, q: &BigInt) {
    let (t, s) = if target < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

fn col_sub(a: &mut IntRows, target: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let d = q * &row[src];
        row[target] -= d;
    }
}

fn col_swap(a: &mut IntRows, x: usize, y: usize) {
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// Smallest nonzero `|a_ij|` with `i, j >= t`; ties go to the first in
/// row-major order.
fn min_pivot(a: &IntRows, t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(cols).skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Smith normal form of an integer matrix.
///
/// The pivot is always the smallest nonzero entry in absolute value of the
/// remaining block, ties broken by row-major position, so the output is a
/// deterministic function of the input.
pub fn smith_normal_form(a: &QMatrix) -> Result<SnfResult> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = to_int_rows(a)?;
    let mut u = identity_rows(m);
    let mut v = identity_rows(n);

    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_pivot(&d, t, n) else {
            break;
        };
        d.swap(t, pi);
        u.swap(t, pi);
        col_swap(&mut d, t, pj);
        col_swap(&mut v, t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !d[i][t].is_zero() {
                    let q = &d[i][t] / &d[t][t];
                    row_sub(&mut d, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    clean &= d[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !d[t][j].is_zero() {
                    let q = &d[t][j] / &d[t][t];
                    col_sub(&mut d, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    clean &= d[t][j].is_zero();
                }
            }
            if !clean {
                // a remainder strictly smaller than the pivot survived
                let (pi, pj) = min_pivot(&d, t, n).expect("nonzero remainder present");
                d.swap(t, pi);
                u.swap(t, pi);
                col_swap(&mut d, t, pj);
                col_swap(&mut v, t, pj);
                continue;
            }
            let pivot = d[t][t].clone();
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[i][j].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_sub(&mut d, t, i, &minus_one);
                    row_sub(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }

    Ok(SnfResult {
        u: from_int_rows(&u, m),
        d: from_int_rows(&d, n),
        v: from_int_rows(&v, n),
    })
}

/// Column-style Hermite reduction; returns the nonzero columns, which form
/// a basis of the integer column span.
fn column_hermite(mut a: IntRows, ncols: usize) -> Vec<Vec<BigInt>> {
    let nrows = a.len();
    let mut c = 0;
    for i in 0..nrows {
        if c == ncols {
            break;
        }
        loop {
            let p = (c..ncols)
                .filter(|&j| !a[i][j].is_zero())
                .min_by(|&x, &y| a[i][x].abs().cmp(&a[i][y].abs()).then(x.cmp(&y)));
            let Some(p) = p else { break };
            col_swap(&mut a, c, p);
            let mut done = true;
            for j in c + 1..ncols {
                if !a[i][j].is_zero() {
                    let q = &a[i][j] / &a[i][c];
                    col_sub(&mut a, j, c, &q);
                    done &= a[i][j].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if a[i][c].is_zero() {
            continue;
        }
        if a[i][c].is_negative() {
            for row in a.iter_mut() {
                row[c] = -&row[c];
            }
        }
        for k in 0..c {
            let q = a[i][k].div_floor(&a[i][c]);
            if !q.is_zero() {
                col_sub(&mut a, k, c, &q);
            }
        }
        c += 1;
    }
    (0..c)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

fn common_denominator<'a>(xs: impl Iterator<Item = &'a Rational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// A basis of the integer span of `generators` (all of length `n`), in
/// Hermite normal form. Empty input gives an empty basis.
pub fn integer_span_basis(n: usize, generators: &[QVector]) -> Vec<QVector> {
    let den = common_denominator(generators.iter().flat_map(|g| g.iter()));
    let rows: IntRows = (0..n)
        .map(|i| {
            generators
                .iter()
                .map(|g| (&g[i] * Rational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let scale = Rational::new(BigInt::one(), den);
    column_hermite(rows, generators.len())
        .into_iter()
        .map(|col| QVector(col.into_iter().map(|x| Rational::from_integer(x) * &scale).collect()))
        .collect()
}

/// A basis of `{z in Z^k : M z = 0}` for a rational `p x k` matrix `M`.
pub fn integer_kernel(m: &QMatrix) -> Vec<QVector> {
    let k = m.cols();
    let mut scaled = QMatrix::zeros(m.rows(), k);
    for i in 0..m.rows() {
        let row = m.row(i);
        let den = Rational::from_integer(common_denominator(row.iter()));
        for j in 0..k {
            scaled[(i, j)] = &row[j] * &den;
        }
    }
    let snf = smith_normal_form(&scaled).expect("rows were scaled to integers");
    let r = snf.rank();
    let kernel: Vec<QVector> = (r..k).map(|j| snf.v.column(j)).collect();
    integer_span_basis(k, &kernel)
}

/// `xᵀ G y` for a symmetric positive definite Gram matrix `G`.
pub fn inner(g: &QMatrix, x: &QVector, y: &QVector) -> Result<Rational> {
    if !g.is_square() {
        return Err(Error::NotPositiveDefinite);
    }
    for v in [x, y] {
        if v.len() != g.rows() {
            return Err(Error::DimensionMismatch {
                expected: g.rows(),
                found: v.len(),
            });
        }
    }
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(g.bilinear(x, y))
}

/// The integer vector `x` with `B x = v`, if one exists. `B` must have
/// linearly independent columns.
pub fn integer_solve(b: &QMatrix, v: &QVector) -> Result<Option<QVector>> {
    if v.len() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: b.rows(),
            found: v.len(),
        });
    }
    if b.rank() != b.cols() {
        return Err(Error::DependentColumns);
    }
    Ok(solve_full_column_rank(b, v).filter(QVector::is_integral))
}

/// Unique rational solution of `B x = v` for `B` of full column rank, if
/// `v` lies in the column space.
pub(crate) fn solve_full_column_rank(b: &QMatrix, v: &QVector) -> Option<QVector> {
    let bt = b.transpose();
    let normal = &bt * b;
    let x = normal.solve(&bt.mul_vec(v))?;
    (b.mul_vec(&x) == *v).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, rat};

    fn factors(rows: &[&[i64]]) -> Vec<i64> {
        let snf = smith_normal_form(&QMatrix::from_int_rows(rows)).unwrap();
        snf.nonzero_diagonal()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn snf_identity_is_fixed() {
        let id = QMatrix::identity(2);
        let snf = smith_normal_form(&id).unwrap();
        assert!(snf.d.is_identity());
        assert!(snf.u.is_identity());
        assert!(snf.v.is_identity());
    }

    #[test]
    fn snf_small_examples() {
        assert_eq!(factors(&[&[2, 0], &[1, 2]]), vec![1, 4]);
        assert_eq!(factors(&[&[2, 0], &[0, 2]]), vec![2, 2]);
        assert_eq!(factors(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(factors(&[&[1], &[-1]]), vec![1]);
        assert_eq!(factors(&[&[0, 0], &[0, 0]]), Vec::<i64>::new());
    }

    #[test]
    fn snf_rejects_fractions() {
        let m = QMatrix::from_rows(vec![vec![frac(1, 2)]], 1).unwrap();
        assert_eq!(smith_normal_form(&m), Err(Error::NonInteger));
    }

    #[test]
    fn inner_examples() {
        let id = QMatrix::identity(2);
        let e1 = QVector::unit(2, 0);
        let e2 = QVector::unit(2, 1);
        assert_eq!(inner(&id, &e1, &e1).unwrap(), rat(1));
        assert_eq!(inner(&id, &e1, &e2).unwrap(), rat(0));
        let four = QMatrix::scalar(2, &rat(4));
        assert_eq!(inner(&four, &e1, &e1).unwrap(), rat(4));
        assert_eq!(
            inner(&QMatrix::from_int_rows(&[&[1, 2], &[2, 1]]), &e1, &e1),
            Err(Error::NotPositiveDefinite)
        );
        assert!(matches!(
            inner(&id, &QVector::unit(3, 0), &e1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn integer_solve_examples() {
        let id = QMatrix::identity(2);
        assert_eq!(
            integer_solve(&id, &QVector::from_ints(&[3, -2])).unwrap(),
            Some(QVector::from_ints(&[3, -2]))
        );
        assert_eq!(
            integer_solve(&id, &QVector(vec![frac(1, 2), rat(0)])).unwrap(),
            None
        );
        let b = QMatrix::from_int_rows(&[&[1, 1], &[1, -1]]);
        assert_eq!(
            integer_solve(&b, &QVector::from_ints(&[2, 0])).unwrap(),
            Some(QVector::from_ints(&[1, 1]))
        );
        let dep = QMatrix::from_int_rows(&[&[1, 2], &[1, 2]]);
        assert_eq!(
            integer_solve(&dep, &QVector::from_ints(&[1, 1])),
            Err(Error::DependentColumns)
        );
    }

    #[test]
    fn span_basis_of_redundant_generators() {
        let gens = [
            QVector::from_ints(&[2, 0]),
            QVector::from_ints(&[1, 1]),
            QVector::from_ints(&[1, -1]),
        ];
        let basis = integer_span_basis(2, &gens);
        assert_eq!(basis.len(), 2);
        let det = QMatrix::from_columns(2, &basis).determinant();
        assert_eq!(det.abs(), rat(2));
        assert!(integer_span_basis(3, &[]).is_empty());
    }

    #[test]
    fn integer_kernel_examples() {
        let m = QMatrix::from_int_rows(&[&[1, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].sign_canonical(), QVector::from_ints(&[1, -1]));
        let half = QMatrix::from_rows(vec![vec![frac(1, 2), frac(1, 3), rat(0)]], 3).unwrap();
        let k = integer_kernel(&half);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(v.is_integral());
            assert!(half.mul_vec(v).is_zero());
        }
    }
}
