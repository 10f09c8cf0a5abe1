use std::time::Instant;

mod common;

use common::{invariant_count, ETA1, KAPPA1_ETA2};
use loomalg_core::centroid_loop::{
    kind_classify, multiloop_centroid_check, psi_check, stabilizer_in_box, strange_ring_audit, strange_ring_isomorphism_advisory, untwist_check, verify_witness, Kind,
    KindWitness,
};
use loomalg_core::exactnum::CycloNumber;
use loomalg_core::fixtures::{hermitian, kind_fixtures, quantum_torus, sl2_swap};
use loomalg_core::loops::{DegreeBox, LaurentElement};

fn scalar(terms: &[(i64, i64, i64)]) -> LaurentElement {
    LaurentElement::from_terms(2, 1, 2, terms.iter().map(|&(c, a, b)| (vec![a, b], vec![CycloNumber::from_int(2, c)])))
}

#[test]
fn quantum_torus_stabilizer_is_laurent_in_powers() {
    for ell in [2usize, 3] {
        let q = quantum_torus(ell);
        let r = 2 * ell as i64;
        let t = Instant::now();
        let rep = multiloop_centroid_check(&q.tower, &DegreeBox::uniform(2, r)).unwrap();
        assert!(rep.passed(), "{:?}", rep.discrepancies);
        assert_eq!(rep.stabilizer_dim, 25);
        assert_eq!(rep.generators, vec![format!("z1^{ell}"), format!("z2^{ell}")]);
        eprintln!("quantum torus {ell}: {:?}", t.elapsed());
    }
}

#[test]
fn hermitian_stabilizer_matches_fixed_ring() {
    let oracle = invariant_count(&[ETA1, KAPPA1_ETA2], 4);
    assert_eq!(oracle, 23);
    for ell in [1usize, 2] {
        let t = hermitian(ell);
        let stab = stabilizer_in_box(&t, &DegreeBox::uniform(2, 4));
        assert_eq!(stab.dim(), oracle, "ell = {ell}");
        assert!(stab.contains(&scalar(&[(1, 2, 0), (1, -2, 0)])));
        assert!(stab.contains(&scalar(&[(1, 2, 1), (-1, -2, 1)])));
        for j in 0..2 {
            assert!(!stab.contains(&scalar(&[(1, 2, j)])));
        }
    }
}

#[test]
fn hermitian_is_second_kind() {
    for ell in [1usize, 2] {
        let t = hermitian(ell);
        let v = kind_classify(&t).unwrap();
        assert_eq!(v.kind, Kind::Second);
        assert!(v.rho.is_one());
        assert!(v.monomial_tests.iter().all(|(_, ok)| !ok));
        assert!(verify_witness(&t, &v).is_empty());
        let KindWitness::Strange(data) = &v.witness else { panic!() };
        assert_eq!(data.u1, scalar(&[(1, 2, 0), (1, -2, 0)]));
        assert_eq!(data.w, scalar(&[(1, 2, 1), (-1, -2, 1)]));
        let audit = strange_ring_audit(data, 3).unwrap();
        assert!(audit.passed(), "{audit:?}");
        assert_eq!(audit.expected_independent, 2 * 4 * 7);
    }
}

#[test]
fn quantum_torus_is_first_kind() {
    let q = quantum_torus(2);
    let v = kind_classify(&q.tower).unwrap();
    assert_eq!(v.kind, Kind::First);
    assert_eq!(v.witness_strings(), vec!["z1^2", "z2^2"]);
    assert!(verify_witness(&q.tower, &v).is_empty());
}

#[test]
fn synthetic_kind_towers() {
    for f in kind_fixtures() {
        let v = kind_classify(&f.tower).unwrap();
        assert_eq!(v.kind == Kind::First, f.first_kind, "{}", f.name);
        assert_eq!(v.rho, f.rho, "{}", f.name);
        let failures = verify_witness(&f.tower, &v);
        assert!(failures.is_empty(), "{}: {failures:?}", f.name);
        if let KindWitness::Strange(d) = &v.witness {
            assert!(strange_ring_audit(d, 2).unwrap().passed(), "{}", f.name);
        }
    }
}

#[test]
fn untwisting_ranks() {
    let q = quantum_torus(2);
    let r = untwist_check(&q.tower, &DegreeBox::uniform(2, 2)).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.rank, 4);
    let t = hermitian(1);
    let r = untwist_check(&t, &DegreeBox::uniform(2, 2)).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.rank, 4);
    assert!(r.notes[0].contains("rank 4"));
}

#[test]
fn swap_grading_psi() {
    let (ss, _, g) = sl2_swap(2);
    let r = psi_check(&ss, &g, &CycloNumber::from_int(2, -1), &DegreeBox::uniform(1, 3)).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.centroid_loop_dims.values().sum::<usize>(), 7);
}

#[test]
fn advisory_square_classes() {
    let one = CycloNumber::one(4);
    let a = strange_ring_isomorphism_advisory(&one, &CycloNumber::from_int(4, -1)).unwrap();
    assert!(a.isomorphic);
    let b = strange_ring_isomorphism_advisory(&one, &CycloNumber::from_int(4, 2)).unwrap();
    assert!(!b.isomorphic);
}
