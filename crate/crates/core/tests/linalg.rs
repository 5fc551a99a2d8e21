use proptest::prelude::*;

use hnmod_core::linalg::{all_subspaces, Matrix, Subspace};
use hnmod_core::{FieldSpec, Scalar};

const Q: FieldSpec = FieldSpec::Rationals;
const F2: FieldSpec = FieldSpec::Prime(2);

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(Q), Just(FieldSpec::Prime(2)), Just(FieldSpec::Prime(3)), Just(FieldSpec::Prime(7))]
}

fn matrix_strategy() -> impl Strategy<Value = Matrix> {
    (field_strategy(), 0usize..5, 0usize..5).prop_flat_map(|(f, r, c)| {
        prop::collection::vec(-3i64..4, r * c).prop_map(move |xs| {
            let rows: Vec<Vec<Scalar>> = xs.chunks(c.max(1)).take(r).map(|ch| ch.iter().map(|&x| f.from_i64(x)).collect()).collect();
            Matrix::from_rows(f, c, if c == 0 { vec![vec![]; r] } else { rows }).unwrap()
        })
    })
}

fn vectors(f: FieldSpec, n: usize, raw: &[i64]) -> Vec<Vec<Scalar>> {
    raw.chunks(n).filter(|c| c.len() == n).map(|c| c.iter().map(|&x| f.from_i64(x)).collect()).collect()
}

#[test]
fn rref_examples() {
    let id = Matrix::identity(Q, 2);
    assert_eq!(id.rref(), (id.clone(), 2));
    let z = Matrix::zeros(Q, 3, 2);
    assert_eq!(z.rref(), (z.clone(), 0));
    let m = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
    assert_eq!(m.rref(), (Matrix::from_i64(Q, &[&[1, 2], &[0, 0]]), 1));
}

#[test]
fn kernel_and_image_examples() {
    let id = Matrix::identity(Q, 3);
    assert!(id.kernel().is_zero());
    assert!(id.image().is_full());
    let z = Matrix::zeros(Q, 2, 3);
    assert!(z.kernel().is_full());
    assert!(z.image().is_zero());
    let k = Matrix::from_i64(F2, &[&[1, 1]]).kernel();
    assert_eq!(k, Subspace::span(F2, 2, vec![vec![F2.one(), F2.one()]]).unwrap());
}

#[test]
fn subspace_examples() {
    let e = |i: usize| hnmod_core::linalg::unit(Q, 3, i);
    let a = Subspace::span(Q, 3, vec![e(0), e(1)]).unwrap();
    let b = Subspace::span(Q, 3, vec![e(1), e(2)]).unwrap();
    assert_eq!(a.intersect(&b).unwrap(), Subspace::span(Q, 3, vec![e(1)]).unwrap());
    assert!(a.sum(&b).unwrap().is_full());
    assert_eq!(a.sum(&a).unwrap(), a);
    assert_eq!(a.intersect(&a).unwrap(), a);

    let l1 = Subspace::span(Q, 2, vec![vec![Q.one(), Q.one()]]).unwrap();
    let l2 = Subspace::span(Q, 2, vec![vec![Q.one(), Q.from_i64(-1)]]).unwrap();
    assert!(l1.sum(&l2).unwrap().is_full());
    assert!(l1.intersect(&l2).unwrap().is_zero());

    let line = Subspace::span(Q, 3, vec![e(1)]).unwrap();
    let extra = a.quotient_basis(&line).unwrap();
    assert_eq!(extra.len(), 1);
    assert_eq!(line.add_vectors(extra).unwrap(), a);
}

#[test]
fn subspace_errors() {
    let a = Subspace::full(Q, 2);
    let b = Subspace::full(Q, 3);
    assert!(a.sum(&b).is_err());
    assert!(a.intersect(&b).is_err());
    let l = Subspace::span(Q, 2, vec![vec![Q.one(), Q.zero()]]).unwrap();
    assert!(l.quotient_basis(&a).is_err());
}

#[test]
fn grassmannian_counts_over_f2() {
    // Gaussian binomials: F_2^3 has 1 + 7 + 7 + 1 subspaces.
    let all = all_subspaces(F2, 3, 1000).unwrap();
    assert_eq!(all.len(), 16);
    assert_eq!(all.iter().filter(|s| s.dim() == 1).count(), 7);
}

#[test]
fn rational_parsing_is_normalized() {
    assert_eq!(Q.parse("6/-4").unwrap().to_string(), "-3/2");
    assert_eq!(Q.parse("4/2").unwrap().to_string(), "2");
    assert_eq!(FieldSpec::Prime(5).parse("7").unwrap().to_string(), "2");
    assert!(FieldSpec::prime(4).is_err());
}

proptest! {
    #[test]
    fn rref_is_idempotent_and_rank_nullity(m in matrix_strategy()) {
        let (r, rank) = m.rref();
        prop_assert_eq!(r.rref(), (r.clone(), rank));
        prop_assert!(rank <= m.rows().min(m.cols()));
        prop_assert_eq!(m.kernel().dim() + rank, m.cols());
        prop_assert_eq!(m.image().dim(), rank);
    }

    #[test]
    fn grassmann_identity(f in field_strategy(), n in 1usize..5, xs in prop::collection::vec(-2i64..3, 0..16), ys in prop::collection::vec(-2i64..3, 0..16)) {
        let a = Subspace::span(f, n, vectors(f, n, &xs)).unwrap();
        let b = Subspace::span(f, n, vectors(f, n, &ys)).unwrap();
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
        prop_assert!(s.contains(&a).unwrap() && a.contains(&i).unwrap());
        prop_assert_eq!(s.quotient_basis(&a).unwrap().len(), s.dim() - a.dim());
    }

    #[test]
    fn spans_are_canonical(f in field_strategy(), n in 1usize..5, xs in prop::collection::vec(-2i64..3, 0..16), c in 1i64..3) {
        let vs = vectors(f, n, &xs);
        let a = Subspace::span(f, n, vs.clone()).unwrap();
        // Reverse, rescale and add the first vector to every other one.
        let mut ws: Vec<Vec<Scalar>> = vs.iter().rev().map(|v| v.iter().map(|x| x.clone() * f.from_i64(c)).collect()).collect();
        if let Some(first) = ws.first().cloned() {
            for w in ws.iter_mut().skip(1) {
                for (x, y) in w.iter_mut().zip(&first) {
                    *x += y;
                }
            }
        }
        let b = Subspace::span(f, n, ws).unwrap();
        if f.characteristic() == 0 || c % f.characteristic() as i64 != 0 {
            prop_assert_eq!(a, b);
        }
    }
}
