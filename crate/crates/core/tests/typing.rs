use loomalg_core::exactnum::CycloNumber;
use loomalg_core::findim::StructureAlgebra;
use loomalg_core::fixtures::{hermitian, orthogonal, quantum_torus, sl2_parity_tower, symplectic};
use loomalg_core::typing::{associative_type, classify_cartan_matrix, lie_root_system, lie_split_type, tower_type, TypingError, DEFAULT_SEED};

fn label(a: &StructureAlgebra) -> String {
    lie_split_type(a, None).unwrap().label
}

#[test]
fn special_linear_types() {
    assert_eq!(label(&StructureAlgebra::sl(1, 2)), "A_1");
    assert_eq!(label(&StructureAlgebra::sl(1, 3)), "A_2");
    let rs = lie_root_system(&StructureAlgebra::sl(1, 3), None, DEFAULT_SEED).unwrap();
    assert_eq!(rs.roots.len(), 6);
    assert_eq!(rs.cartan_matrix, vec![vec![2, -1], vec![-1, 2]]);
    assert_eq!(label(&StructureAlgebra::sl(2, 4)), "A_3");
}

#[test]
fn orthogonal_and_symplectic_types() {
    assert_eq!(label(&orthogonal(1, 5)), "B_2");
    assert_eq!(label(&symplectic(1, 2)), "B_2");
    assert_eq!(label(&orthogonal(1, 7)), "B_3");
    assert_eq!(label(&symplectic(1, 3)), "C_3");
}

#[test]
fn dimension_is_rank_plus_roots() {
    for a in [StructureAlgebra::sl(1, 3), orthogonal(1, 5), symplectic(1, 3)] {
        let rs = lie_root_system(&a, None, DEFAULT_SEED).unwrap();
        assert_eq!(a.dim(), rs.rank() + rs.roots.len());
    }
}

fn cartan(rows: &[&[i64]]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

#[test]
fn exceptional_diagrams() {
    let g2 = cartan(&[&[2, -1], &[-3, 2]]);
    assert_eq!(classify_cartan_matrix(&g2).unwrap().0, "G_2");
    let f4 = cartan(&[&[2, -1, 0, 0], &[-1, 2, -2, 0], &[0, -1, 2, -1], &[0, 0, -1, 2]]);
    assert_eq!(classify_cartan_matrix(&f4).unwrap().0, "F_4");
    let mut e8 = vec![vec![0; 8]; 8];
    for i in 0..8 {
        e8[i][i] = 2;
    }
    // chain 0-1-2-3-4-5-6 with 7 attached to 4
    for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)] {
        e8[i][j] = -1;
        e8[j][i] = -1;
    }
    assert_eq!(classify_cartan_matrix(&e8).unwrap().0, "E_8");
    let d5 = cartan(&[&[2, -1, 0, 0, 0], &[-1, 2, -1, 0, 0], &[0, -1, 2, -1, -1], &[0, 0, -1, 2, 0], &[0, 0, -1, 0, 2]]);
    assert_eq!(classify_cartan_matrix(&d5).unwrap().0, "D_5");
    let cyc = cartan(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]);
    assert!(classify_cartan_matrix(&cyc).is_err());
}

#[test]
fn matrix_algebras_and_quaternions() {
    assert_eq!(associative_type(&StructureAlgebra::mat(1, 3)).unwrap().label, "Mat_3");
    assert_eq!(associative_type(&StructureAlgebra::quaternions(1, 1, 1)).unwrap().label, "Mat_2");
    let err = associative_type(&StructureAlgebra::quaternions(1, -1, -1)).unwrap_err();
    assert_eq!(err, TypingError::NotSplit("central simple, not split".into()));
    // over Q(i) the Hamilton quaternions split
    assert_eq!(associative_type(&StructureAlgebra::quaternions(4, -1, -1)).unwrap().label, "Mat_2");
}

#[test]
fn non_lie_input_is_rejected() {
    assert_eq!(lie_split_type(&StructureAlgebra::mat(1, 2), None).unwrap_err().code(), "not-lie");
    let gl2 = StructureAlgebra::gl(1, 2);
    assert_eq!(lie_split_type(&gl2, None).unwrap_err().code(), "not-simple");
}

#[test]
fn tower_types_by_permanence() {
    let t = tower_type(&sl2_parity_tower(), None).unwrap();
    assert_eq!((t.archetype.label.as_str(), t.steps), ("A_1", 1));
    let t = tower_type(&hermitian(2), None).unwrap();
    assert_eq!((t.archetype.label.as_str(), t.steps), ("A_2", 2));
    let t = tower_type(&quantum_torus(3).tower, None).unwrap();
    assert_eq!((t.archetype.label.as_str(), t.steps), ("Mat_3", 2));
    let _ = CycloNumber::one(1);
}
