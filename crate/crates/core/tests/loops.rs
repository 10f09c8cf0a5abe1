use loomalg_core::findim::StructureAlgebra;
use loomalg_core::fixtures::{hermitian, quantum_torus, sl2_parity_tower};
use loomalg_core::loops::{canonical_form, free_basis_check, inherited_flags, DegreeBox, LaurentElement, LoopTower};

fn mono(alg: &StructureAlgebra, label: &str, degree: Vec<i64>) -> LaurentElement {
    let i = alg.label_index(label).unwrap();
    LaurentElement::monomial(alg.basis_vector(i), degree, alg.order())
}

#[test]
fn parity_membership() {
    let t = sl2_parity_tower();
    let a = t.base();
    assert!(!t.tower_membership(&mono(a, "h", vec![1])));
    assert!(t.tower_membership(&mono(a, "h", vec![2])));
    assert!(t.tower_membership(&mono(a, "e", vec![1])));
    assert!(t.tower_membership(&mono(a, "f", vec![-3])));
    assert!(!t.tower_membership(&mono(a, "e", vec![0])));
}

#[test]
fn parity_window_dimension() {
    let t = sl2_parity_tower();
    assert_eq!(t.basis_in_box(&DegreeBox::uniform(1, 2)).len(), 7);
    // five even degrees carry h, six odd degrees carry e and f
    assert_eq!(t.basis_in_box(&DegreeBox::uniform(1, 5)).len(), 5 + 12);
}

#[test]
fn untwisted_window_dimension() {
    let t = LoopTower::untwisted(StructureAlgebra::sl(1, 2), 2);
    assert_eq!(t.basis_in_box(&DegreeBox::uniform(2, 1)).len(), 3 * 9);
}

#[test]
fn quantum_torus_window_dimension() {
    let q = quantum_torus(2);
    assert_eq!(q.tower.basis_in_box(&DegreeBox::uniform(2, 2)).len(), 25);
    let q = quantum_torus(3);
    assert_eq!(q.tower.basis_in_box(&DegreeBox::uniform(2, 1)).len(), 9);
}

#[test]
fn hermitian_window_dimension() {
    // per z2-degree the z1-window has 7 dims, split 4 + 3 by the inversion
    let t = hermitian(1);
    assert_eq!(t.basis_in_box(&DegreeBox::uniform(2, 2)).len(), 3 * 4 + 2 * 3);
    let h = mono(t.base(), "h", vec![2, 0]);
    let hh = h.add(&mono(t.base(), "h", vec![-2, 0]));
    assert!(!t.tower_membership(&h));
    assert!(t.tower_membership(&hh));
}

#[test]
fn canonical_form_of_constant() {
    let t = sl2_parity_tower();
    let e = mono(t.base(), "e", vec![0]);
    let cf = canonical_form(&t, &e).unwrap();
    assert!(cf.parts[&vec![0]].is_zero());
    assert_eq!(cf.parts[&vec![1]], mono(t.base(), "e", vec![-1]));
    assert_eq!(cf.reconstruct().unwrap(), e);
}

#[test]
fn canonical_form_reconstructs() {
    let t = hermitian(1);
    let a = t.base();
    let y = mono(a, "e", vec![1, 0]).add(&mono(a, "h", vec![0, -1])).add(&mono(a, "f", vec![-2, 3]));
    let cf = canonical_form(&t, &y).unwrap();
    assert_eq!(cf.parts.len(), 4);
    for part in cf.parts.values() {
        assert!(t.tower_membership(part));
    }
    assert_eq!(cf.reconstruct().unwrap(), y);
}

#[test]
fn quantum_torus_is_free_of_rank_four() {
    let q = quantum_torus(2);
    let r = free_basis_check(&q.tower, &DegreeBox::uniform(2, 1)).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.rank, 4);
}

#[test]
fn flags_for_quantum_torus() {
    let q = quantum_torus(2);
    let f = inherited_flags(&q.tower, None);
    for p in ["nonzero", "perfect", "prime", "unital", "associative"] {
        assert!(f.get(p).unwrap().base, "{p}");
    }
    assert!(!f.get("commutative").unwrap().base);
}

#[test]
fn quantum_torus_mixed_monomial() {
    let q = quantum_torus(2);
    let alg = q.tower.base();
    let real = alg.realization().unwrap();
    let a2inv = real.matrix(&q.a2).inverse().unwrap();
    let prod = a2inv.compose(&real.matrix(&q.a1));
    let v = real.coords(&prod).unwrap();
    assert!(q.tower.tower_membership(&LaurentElement::monomial(v.clone(), vec![1, 1], 2)));
    assert!(!q.tower.tower_membership(&LaurentElement::monomial(v, vec![0, 1], 2)));
}
