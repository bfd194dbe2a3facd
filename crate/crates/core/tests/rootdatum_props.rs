use num_traits::Signed;
use proptest::prelude::*;

use rdt_core::lattice::Lattice;
use rdt_core::linalg::{frac, rat, QMatrix, QVector};
use rdt_core::rootdatum::{DatumType, DatumViolation, EuclideanRootDatum};
use rdt_core::rootsystem::Family;
use rdt_core::Error;

fn ty(f: Family, r: usize, l2: i64) -> DatumType {
    DatumType::new(f, r, rat(l2)).unwrap()
}

fn standard(f: Family, r: usize, l2: i64) -> EuclideanRootDatum {
    EuclideanRootDatum::standard(&ty(f, r, l2))
}

fn types(max_rank: usize) -> Vec<(Family, usize)> {
    let mut out = Vec::new();
    for f in Family::ALL {
        let lo = if f == Family::D { 2 } else { 1 };
        for r in lo..=max_rank {
            out.push((f, r));
        }
    }
    out
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> QMatrix {
    let mut u = QMatrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i != j {
            for k in 0..n {
                let x = &u[(j, k)] * rat(c);
                u[(i, k)] += x;
            }
        }
    }
    u
}

/// The same datum written in the coordinates of the lattice basis `U`.
fn rewrite(d: &EuclideanRootDatum, u: &QMatrix) -> EuclideanRootDatum {
    let gram = &(&u.transpose() * d.gram()) * u;
    let roots = d.roots().roots().iter().map(|a| u.row_mul(a)).collect();
    let basis: Vec<QVector> = (0..d.dim()).map(|i| QVector::unit(d.dim(), i)).collect();
    EuclideanRootDatum::from_parts(gram, &basis, roots).unwrap()
}

fn expected_pi1(f: Family) -> &'static str {
    match f {
        Family::C | Family::BC => "1",
        Family::B | Family::D => "Z/2",
        Family::A => "Z",
    }
}

#[test]
fn classification_round_trips() {
    for (f, r) in types(6) {
        for l2 in [1, 2, 4] {
            let t = ty(f, r, l2);
            let report = EuclideanRootDatum::standard(&t).classify().unwrap();
            assert_eq!(report.datum_type, t);
            assert_eq!(report.fundamental_group.to_string(), expected_pi1(f), "{}", t.label());
            assert!(report.cubic_basis.is_cubic());
            assert_eq!(report.case, t.case());
        }
    }
}

#[test]
fn standard_data_validate() {
    for (f, r) in types(6) {
        assert_eq!(standard(f, r, 2).validate(), Ok(()), "{f:?}{r}");
    }
}

#[test]
fn corrupted_lattices_are_caught() {
    let c2 = standard(Family::C, 2, 1);
    let coarse = c2
        .with_lattice(&[QVector::from_ints(&[3, 0]), QVector::from_ints(&[0, 3])])
        .unwrap();
    match coarse.validate() {
        Err(DatumViolation::Gamma0NotContained { witness }) => {
            assert!(c2.roots().gamma0().contains(&witness).unwrap());
            assert!(!coarse.lattice().contains(&witness).unwrap());
        }
        other => panic!("expected a missing half-coroot, got {other:?}"),
    }

    let b2 = standard(Family::B, 2, 1);
    let q = frac(1, 4);
    let fine = b2
        .with_lattice(&[
            QVector(vec![q.clone(), rat(0)]),
            QVector(vec![rat(0), q]),
        ])
        .unwrap();
    match fine.validate() {
        Err(DatumViolation::NotInGamma1 { root, witness }) => {
            assert!(fine.lattice().contains(&witness).unwrap());
            assert!(!(root.dot(&witness) * rat(2)).is_integer());
        }
        other => panic!("expected a lattice vector outside gamma1, got {other:?}"),
    }
}

#[test]
fn hexagonal_lattice_is_not_rectangular() {
    // A₂ roots on the lattice they generate, with the invariant form
    let g = QMatrix::from_int_rows(&[&[2, -1], &[-1, 2]]);
    let roots = [[1, 0], [0, 1], [1, 1]]
        .iter()
        .flat_map(|v| {
            let v = QVector::from_ints(v);
            [v.clone(), -v]
        })
        .collect::<Vec<_>>();
    // covectors ½⟨v, ·⟩, so twice a root pairs integrally with the lattice
    let covectors: Vec<QVector> = roots.iter().map(|v| g.mul_vec(v).scale(&frac(1, 2))).collect();
    let basis = [QVector::unit(2, 0), QVector::unit(2, 1)];
    let d = EuclideanRootDatum::from_parts(g, &basis, covectors).unwrap();
    assert_eq!(d.validate(), Ok(()));
    assert!(matches!(d.classify(), Err(Error::NotRectangular)));
}

#[test]
fn polysphere_exactly_for_c_and_bc() {
    for (f, r) in types(6) {
        let expect = matches!(f, Family::C | Family::BC);
        assert_eq!(standard(f, r, 1).admits_polysphere().unwrap(), expect, "{f:?}{r}");
    }
}

/// Finest splitting by brute force over set partitions of the irreducible
/// root blocks: a partition is valid when the lattice is the sum of its
/// intersections with the part spans.
fn finest_by_partitions(d: &EuclideanRootDatum) -> Vec<usize> {
    let comps = d.roots().irreducible_components();
    assert!(comps.kernel.is_empty(), "oracle handles semisimple data only");
    let spans: Vec<Vec<QVector>> = comps.parts.into_iter().map(|(_, s)| s).collect();
    let m = spans.len();
    let mut best: Vec<usize> = vec![d.dim()];
    let mut labels = vec![0usize; m];
    loop {
        let parts = labels.iter().max().map_or(0, |x| x + 1);
        if parts > best.len() {
            let mut gens = Vec::new();
            let mut dims = Vec::new();
            for p in 0..parts {
                let span: Vec<QVector> =
                    (0..m).filter(|&b| labels[b] == p).flat_map(|b| spans[b].clone()).collect();
                let sub = d.lattice().intersect_subspace(&span).unwrap();
                dims.push(sub.rank());
                gens.extend(sub.basis_vectors());
            }
            let sum = Lattice::from_vectors(d.gram().clone(), &gens).unwrap();
            if sum.is_full() && d.lattice().quotient_group(&sum).unwrap().is_trivial() {
                best = dims;
            }
        }
        // next restricted growth string
        let mut i = m;
        loop {
            if i <= 1 {
                best.sort();
                return best;
            }
            i -= 1;
            let cap = labels[..i].iter().max().unwrap() + 1;
            if labels[i] < cap {
                labels[i] += 1;
                for x in &mut labels[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

fn split_dims(d: &EuclideanRootDatum) -> Vec<usize> {
    let mut dims: Vec<usize> = d.split().unwrap().iter().map(|p| p.dim()).collect();
    dims.sort();
    dims
}

#[test]
fn splitting_matches_partition_oracle() {
    let c1 = standard(Family::C, 1, 1);
    let c1c1 = c1.direct_sum(&c1).unwrap();
    let c1c1c1 = c1c1.direct_sum(&c1).unwrap();
    let half = frac(1, 2);
    // body-centred: only all three blocks together are closed
    let bcc = c1c1c1
        .with_lattice(&[
            QVector::unit(3, 0),
            QVector::unit(3, 1),
            QVector(vec![half.clone(), half.clone(), half.clone()]),
        ])
        .unwrap();
    // glue across the first two blocks only
    let glued = c1c1c1
        .with_lattice(&[
            QVector::unit(3, 0),
            QVector(vec![half.clone(), half, rat(0)]),
            QVector::unit(3, 2),
        ])
        .unwrap();
    let cases = [
        (c1c1, vec![1, 1]),
        (bcc, vec![3]),
        (glued, vec![1, 2]),
        (standard(Family::B, 2, 1).direct_sum(&standard(Family::C, 3, 2)).unwrap(), vec![2, 3]),
        (standard(Family::D, 2, 1), vec![2]),
        (standard(Family::D, 4, 1), vec![4]),
    ];
    for (d, want) in cases {
        assert_eq!(d.validate(), Ok(()));
        assert_eq!(finest_by_partitions(&d), want);
        assert_eq!(split_dims(&d), want);
        for part in d.split().unwrap() {
            assert_eq!(part.validate(), Ok(()));
            assert_eq!(part.split().unwrap().len(), 1, "split is idempotent");
        }
    }
    for r in 2..=5 {
        assert_eq!(split_dims(&standard(Family::A, r, 1)), vec![r]);
    }
}

#[test]
fn distinct_standard_types_are_not_isomorphic() {
    let mut data = Vec::new();
    for (f, r) in types(3) {
        for l2 in [1, 2] {
            data.push((ty(f, r, l2).label(), l2, standard(f, r, l2)));
        }
    }
    for (i, (li, _, di)) in data.iter().enumerate() {
        for (j, (lj, _, dj)) in data.iter().enumerate() {
            if di.dim() != dj.dim() {
                continue;
            }
            let iso = di.is_isomorphic(dj).unwrap().is_some();
            assert_eq!(iso, i == j, "{li} vs {lj}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn classification_ignores_coordinates(
        fi in 0usize..5,
        r in 2usize..=3,
        l2 in prop::sample::select(vec![1i64, 2, 4]),
        ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..8),
    ) {
        let t = ty(Family::ALL[fi], r, l2);
        let d = EuclideanRootDatum::standard(&t);
        let u = unimodular(r, &ops);
        let e = rewrite(&d, &u);
        prop_assert_eq!(e.validate(), Ok(()));
        let report = e.classify().unwrap();
        prop_assert_eq!(&report.datum_type, &t);
        prop_assert_eq!(report.fundamental_group, d.fundamental_group().unwrap());

        let phi = d.is_isomorphic(&e).unwrap().expect("same datum");
        prop_assert_eq!(&(&phi.transpose() * e.gram()) * &phi, d.gram().clone());
        prop_assert!(phi.is_integral());
        prop_assert!(phi.determinant().abs() == rat(1));
        let inv = phi.inverse().unwrap();
        for a in d.roots().roots() {
            prop_assert!(e.roots().contains(&inv.row_mul(a)));
        }
        let back = e.is_isomorphic(&d).unwrap();
        prop_assert!(back.is_some());
    }
}
