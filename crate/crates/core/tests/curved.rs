use std::sync::Arc;

use proptest::prelude::*;

use hnmod_core::curved::{build_ce, mc_ideal_reduced, DgPolynomial, FiniteDgla, DEFAULT_WEIGHT};
use hnmod_core::graded::TruncatedGradedAlgebra;
use hnmod_core::hochschild::HochschildDgla;
use hnmod_core::FieldSpec;

const Q: FieldSpec = FieldSpec::Rationals;
const F2: FieldSpec = FieldSpec::Prime(2);

fn hochschild(nvars: usize, dims: Vec<usize>) -> HochschildDgla {
    let alg = Arc::new(TruncatedGradedAlgebra::polynomial(Q, nvars, dims.len() - 1));
    HochschildDgla::build(alg, dims, None).unwrap()
}

fn finite(l: &HochschildDgla) -> FiniteDgla {
    FiniteDgla::from_hochschild(l).unwrap().0
}

#[test]
fn abelian_models() {
    let m = build_ce(&FiniteDgla::abelian(Q, vec![1, 2, 2, 3]), DEFAULT_WEIGHT).unwrap();
    assert!((0..4).all(|i| m.q_generator(i).is_zero()));
    assert!(m.verify_q_squared());
    assert!(m.mc_ideal().iter().all(DgPolynomial::is_zero));

    let m = build_ce(&FiniteDgla::abelian(Q, vec![1, 1]), DEFAULT_WEIGHT).unwrap();
    assert_eq!(m.symbols().len(), 2);
    assert!((0..2).all(|i| !m.symbols().is_odd(i) && m.q_generator(i).is_zero()));
    assert!(m.mc_ideal().is_empty());
}

#[test]
fn build_preconditions() {
    let l = FiniteDgla::abelian(Q, vec![1, 2]);
    assert!(build_ce(&l, 1).is_err());
    assert!(build_ce(&FiniteDgla::abelian(F2, vec![1, 2]), 4).is_err());
}

#[test]
fn generator_degrees() {
    let m = build_ce(&finite(&hochschild(2, vec![1, 1, 1])), DEFAULT_WEIGHT).unwrap();
    let l = m.dgla();
    for a in 0..l.dim() {
        assert_eq!(m.symbols().degrees[a], 1 - l.degree(a) as i64);
        // q raises cohomological degree by one.
        let g = m.q_generator(a);
        for mono in g.terms().keys() {
            assert_eq!(g.monomial_degree(mono), m.symbols().degrees[a] + 1);
        }
    }
}

#[test]
fn hochschild_models_square_to_zero() {
    for (nvars, dims) in [(2, vec![1, 1]), (2, vec![1, 1, 1]), (1, vec![1, 1, 1, 1]), (2, vec![1, 2])] {
        let m = build_ce(&finite(&hochschild(nvars, dims)), 4).unwrap();
        assert!(m.verify_q_squared());
    }
}

#[test]
fn ideal_over_f2_matches_associativity() {
    // Window length 2, dims (1,1,1): L¹ has 2 + 2 + 3 coordinates.
    let l = hochschild(2, vec![1, 1, 1]);
    let model = build_ce(&finite(&l), DEFAULT_WEIGHT).unwrap();
    let ideal = mc_ideal_reduced(&model, F2).unwrap();
    let lf2 = HochschildDgla::build(Arc::new(TruncatedGradedAlgebra::polynomial(F2, 2, 2)), vec![1, 1, 1], None).unwrap();
    let n = lf2.dim(1);
    let l1 = model.dgla().indices_of_degree(1);
    assert_eq!(l1.len(), n);
    let mut seen = 0;
    for bits in 0u32..(1 << n) {
        let coords: Vec<_> = (0..n).map(|k| F2.from_i64(((bits >> k) & 1) as i64)).collect();
        let mut values = vec![None; model.symbols().len()];
        for (&a, x) in l1.iter().zip(&coords) {
            values[a] = Some(x.clone());
        }
        let vanishes = ideal.iter().all(|p| p.evaluate(&values).unwrap().is_zero());
        let mu = lf2.from_coordinates(1, &coords).unwrap();
        assert_eq!(vanishes, lf2.cochain_to_module(&mu, 0).unwrap().is_associative());
        seen += vanishes as usize;
    }
    assert!(seen > 1);
}

#[test]
fn truncation_is_coherent() {
    let l = finite(&hochschild(1, vec![1, 1, 1, 1]));
    let small = build_ce(&l, 3).unwrap();
    let big = build_ce(&l, 5).unwrap();
    for i in 0..l.dim() {
        let lo = small.q_generator(i).terms();
        let hi = big.q_generator(i).terms();
        let hi_low: Vec<_> = hi.iter().filter(|(m, _)| DgPolynomial::weight(m) <= 3).collect();
        assert_eq!(lo.iter().collect::<Vec<_>>(), hi_low);
    }
}

fn ce_fixture() -> hnmod_core::curved::CurvedModel {
    build_ce(&finite(&hochschild(2, vec![1, 1, 1])), DEFAULT_WEIGHT).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideal_evaluates_to_residual(xs in prop::collection::vec((-5i64..6, 1i64..4), 7)) {
        let l = hochschild(2, vec![1, 1, 1]);
        let fd = finite(&l);
        let model = build_ce(&fd, DEFAULT_WEIGHT).unwrap();
        let coords: Vec<_> = xs.iter().map(|&(n, d)| Q.from_ratio(n, d).unwrap()).collect();
        let mu = l.from_coordinates(1, &coords).unwrap();
        let res = l.coordinates(&l.mc_residual(&mu).unwrap()).unwrap();
        prop_assert_eq!(model.evaluate_ideal(&coords).unwrap(), res);
    }

    #[test]
    fn q_is_a_derivation_on_products(i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let m = ce_fixture();
        let n = m.symbols().len();
        let (a, b) = (m.generator(i % n).mul(&m.generator(j % n)), m.generator(k % n));
        // |a| is the sum of the two generator degrees.
        let deg_a = m.symbols().degrees[i % n] + m.symbols().degrees[j % n];
        let sign = if deg_a.rem_euclid(2) == 1 { -Q.one() } else { Q.one() };
        let lhs = m.q(&a.mul(&b));
        let rhs = m.q(&a).mul(&b).add(&a.mul(&m.q(&b)).scale(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mutants_break_q_squared_iff_axioms(slot in 0usize..10_000, delta in prop_oneof![Just(1i64), Just(-1), Just(2)]) {
        let l = finite(&hochschild(2, vec![1, 1, 1]));
        let slots = l.slots();
        let mutant = l.mutate(slots[slot % slots.len()], &Q.from_i64(delta));
        let m = build_ce(&mutant, DEFAULT_WEIGHT).unwrap();
        prop_assert_eq!(m.verify_q_squared(), mutant.check_axioms().all_hold());
    }
}
