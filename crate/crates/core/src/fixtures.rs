//! Ready-made algebras and towers used by the tests, the acceptance suite
//! and the shipped command files.

use crate::exactnum::CycloNumber;
use crate::findim::StructureAlgebra;
use crate::grading::{grading_from_auto, FiniteOrderAuto, ModGrading};
use crate::linalg::{zero_vec, LinearMap, Vector};
use crate::loops::{multiloop, LaurentElement, LoopTower, ToralMonomialAuto};

fn matrix(order: u64, rows: Vec<Vec<CycloNumber>>) -> LinearMap {
    let n = rows.len();
    let _ = order;
    LinearMap::from_rows(rows, n)
}

/// The base field as a one-dimensional unital algebra.
pub fn ground_field(order: u64) -> StructureAlgebra {
    let one = vec![CycloNumber::one(order)];
    StructureAlgebra::new(order, vec![vec![one.clone()]], Some(vec!["1".into()]))
        .expect("valid shape")
        .with_unit(one)
        .expect("unit")
}

/// `sl_2` with the automorphism `Ad diag(1, -1)`, of period 2.
pub fn sl2_parity(order: u64) -> (StructureAlgebra, FiniteOrderAuto) {
    let sl2 = StructureAlgebra::sl(order, 2);
    let one = CycloNumber::one(order);
    let z = CycloNumber::zero(order);
    let g = matrix(order, vec![vec![one.clone(), z.clone()], vec![z, -&one]]);
    let sigma = sl2.conjugation(&g).expect("invertible");
    let auto = FiniteOrderAuto::new(&sl2, sigma, 2).expect("period 2");
    (sl2, auto)
}

/// One-step loop algebra of `sl_2` for the parity grading.
pub fn sl2_parity_tower() -> LoopTower {
    let (sl2, sigma) = sl2_parity(2);
    multiloop(&sl2, &[sigma], &[CycloNumber::from_int(2, -1)]).expect("valid multiloop")
}

pub struct QuantumTorus {
    pub ell: usize,
    pub zeta: CycloNumber,
    pub tower: LoopTower,
    /// `diag(1, zeta, ..., zeta^(l-1))` in matrix-unit coordinates.
    pub a1: Vector,
    /// The cyclic shift with ones at `(i, i+1)` and `(l-1, 0)`.
    pub a2: Vector,
    /// `a2^-1 ⊗ z1`
    pub x1: LaurentElement,
    /// `a1 ⊗ z2`
    pub x2: LaurentElement,
}

/// Multiloop algebra of `M_l` for conjugation by the clock and shift
/// matrices, over `Q(zeta_l)`.
pub fn quantum_torus(ell: usize) -> QuantumTorus {
    let order = ell as u64;
    let zeta = CycloNumber::zeta(order);
    let alg = StructureAlgebra::mat(order, ell);
    let mut a1 = vec![zero_vec(order, ell); ell];
    let mut a2 = vec![zero_vec(order, ell); ell];
    for i in 0..ell {
        a1[i][i] = zeta.pow(i as i64).unwrap();
        a2[i][(i + 1) % ell] = CycloNumber::one(order);
    }
    let a1 = LinearMap::from_rows(a1, ell);
    let a2 = LinearMap::from_rows(a2, ell);
    let s1 = FiniteOrderAuto::new(&alg, alg.conjugation(&a1).unwrap(), order).expect("period l");
    let s2 = FiniteOrderAuto::new(&alg, alg.conjugation(&a2).unwrap(), order).expect("period l");
    let tower = multiloop(&alg, &[s1, s2], &[zeta.clone(), zeta.clone()]).expect("commuting");
    let real = alg.realization().unwrap();
    let a1v = real.coords(&a1).unwrap();
    let a2v = real.coords(&a2).unwrap();
    let a2inv = real.coords(&a2.inverse().unwrap()).unwrap();
    let x1 = LaurentElement::monomial(a2inv, vec![1, 0], order);
    let x2 = LaurentElement::monomial(a1v.clone(), vec![0, 1], order);
    QuantumTorus { ell, zeta, tower, a1: a1v, a2: a2v, x1, x2 }
}

/// The automorphism `a -> -J a^t J` of `sl_(l+1)`, `J` the anti-diagonal
/// permutation matrix.
pub fn anti_transpose(alg: &StructureAlgebra) -> FiniteOrderAuto {
    let n = alg.realization().expect("matrix algebra").size;
    let order = alg.order();
    let mut j = vec![zero_vec(order, n); n];
    for (i, row) in j.iter_mut().enumerate() {
        row[n - 1 - i] = CycloNumber::one(order);
    }
    let j = LinearMap::from_rows(j, n);
    let minus = CycloNumber::from_int(order, -1);
    let map = alg.map_matrices(|a| j.compose(&a.transpose()).compose(&j).scale(&minus)).expect("closed");
    FiniteOrderAuto::new(alg, map, 2).expect("period 2")
}

/// Two-step tower over `sl_(l+1)`: stage one is the anti-transpose grading,
/// stage two is `z1 -> z1^-1` on the coefficients' Laurent variable.
pub fn hermitian(ell: usize) -> LoopTower {
    let order = 2;
    let alg = StructureAlgebra::sl(order, ell + 1);
    let sigma1 = anti_transpose(&alg);
    let minus = CycloNumber::from_int(order, -1);
    let mut t = LoopTower::new(alg.clone());
    t.push_stage(ToralMonomialAuto::extend_identity(sigma1, 0), minus.clone(), None).expect("stage 1");
    let kappa = ToralMonomialAuto::new(FiniteOrderAuto::identity(&alg), vec![vec![-1]], vec![CycloNumber::one(order)]).unwrap();
    t.push_stage(kappa, minus, None).expect("stage 2");
    t
}

/// Lie algebra of matrices `X` with `X^t F + F X = 0` for a symmetric or
/// skew form `F`.
fn form_algebra(order: u64, form: &LinearMap, prefix: &str) -> StructureAlgebra {
    let n = form.in_dim();
    let finv = form.inverse().expect("nondegenerate form");
    let mut se = crate::linalg::SparseEchelon::new(order);
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut e = vec![zero_vec(order, n); n];
            e[i][j] = CycloNumber::one(order);
            let e = LinearMap::from_rows(e, n);
            let y = e.sub(&finv.compose(&e.transpose()).compose(form));
            if se.insert_dense(&y.flatten()) {
                labels.push(format!("{prefix}{}{}", i + 1, j + 1));
                basis.push(y);
            }
        }
    }
    StructureAlgebra::from_matrices(basis, true, labels).expect("closed under bracket")
}

fn anti_diagonal(order: u64, signs: &[i64]) -> LinearMap {
    let n = signs.len();
    let mut m = vec![zero_vec(order, n); n];
    for (i, &s) in signs.iter().enumerate() {
        m[i][n - 1 - i] = CycloNumber::from_int(order, s);
    }
    LinearMap::from_rows(m, n)
}

/// `so_n` for the split form with anti-diagonal Gram matrix.
pub fn orthogonal(order: u64, n: usize) -> StructureAlgebra {
    form_algebra(order, &anti_diagonal(order, &vec![1; n]), "O")
}

/// `sp_2r` for the anti-diagonal form with signs `(1, ..., 1, -1, ..., -1)`.
pub fn symplectic(order: u64, r: usize) -> StructureAlgebra {
    let signs: Vec<i64> = (0..2 * r).map(|i| if i < r { 1 } else { -1 }).collect();
    form_algebra(order, &anti_diagonal(order, &signs), "S")
}

/// `sl_2 ⊕ sl_2` with the swap automorphism and its grading.
pub fn sl2_swap(order: u64) -> (StructureAlgebra, FiniteOrderAuto, ModGrading) {
    let sl2 = StructureAlgebra::sl(order, 2);
    let ss = StructureAlgebra::direct_sum(&sl2, &sl2).unwrap();
    let cols: Vec<Vector> = (0..6).map(|j| ss.basis_vector((j + 3) % 6)).collect();
    let swap = FiniteOrderAuto::new(&ss, LinearMap::from_columns(&cols, 6), 2).unwrap();
    let g = grading_from_auto(&ss, &swap, &CycloNumber::from_int(order, -1)).unwrap();
    (ss, swap, g)
}

pub fn sl2_swap_tower() -> LoopTower {
    let (ss, swap, _) = sl2_swap(2);
    multiloop(&ss, &[swap], &[CycloNumber::from_int(2, -1)]).unwrap()
}

/// A two-step tower over the base field whose second twist sends
/// `y1 = z1^(m1)` to `rho y1` (first kind) or `rho y1^-1` (second kind).
pub struct KindFixture {
    pub name: String,
    pub tower: LoopTower,
    pub first_kind: bool,
    pub rho: CycloNumber,
}

/// Builds the tower with character value `chi` on `z1`, so that
/// `rho = chi^(m1)`.
pub fn kind_tower(m1: u64, m2: u64, inverting: bool, chi: CycloNumber) -> LoopTower {
    let order = 4;
    let k = ground_field(order);
    let mut t = LoopTower::new(k.clone());
    let id = FiniteOrderAuto::identity(&k);
    t.push_stage(ToralMonomialAuto::extend_identity(id.clone(), 0), CycloNumber::zeta_pow(order, (order / m1) as i64), None)
        .expect("stage 1");
    let sign = if inverting { -1 } else { 1 };
    let twist = ToralMonomialAuto::new(id, vec![vec![sign]], vec![chi]).expect("twist");
    t.push_stage(twist, CycloNumber::zeta_pow(order, (order / m2) as i64), None).expect("stage 2");
    t
}

/// Five first-kind and five second-kind two-step towers over `Q(i)`.
pub fn kind_fixtures() -> Vec<KindFixture> {
    let order = 4;
    let i = CycloNumber::zeta(order);
    let q = |n: i64| CycloNumber::from_int(order, n);
    let cases: Vec<(u64, u64, bool, CycloNumber)> = vec![
        (1, 2, false, q(-1)),
        (1, 4, false, i.clone()),
        (2, 4, false, i.clone()),
        (2, 2, false, q(1)),
        (1, 4, false, -&i),
        (1, 2, true, q(1)),
        (1, 2, true, q(2)),
        (2, 4, true, i.clone()),
        (1, 4, true, q(3)),
        (2, 2, true, q(2)),
    ];
    cases
        .into_iter()
        .map(|(m1, m2, inverting, chi)| {
            let rho = chi.pow(m1 as i64).unwrap();
            KindFixture {
                name: format!("m1={m1} m2={m2} {} chi={chi}", if inverting { "inverting" } else { "scaling" }),
                tower: kind_tower(m1, m2, inverting, chi),
                first_kind: !inverting,
                rho,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loops::laurent_multiply;

    #[test]
    fn quantum_torus_relation() {
        for ell in [2, 3] {
            let q = quantum_torus(ell);
            let alg = q.tower.base();
            let x21 = laurent_multiply(alg, &q.x2, &q.x1).unwrap();
            let x12 = laurent_multiply(alg, &q.x1, &q.x2).unwrap();
            assert_eq!(x21, x12.scale(&q.zeta));
            assert!(q.tower.tower_membership(&q.x1));
            assert!(q.tower.tower_membership(&q.x2));
        }
    }

    #[test]
    fn hermitian_builds() {
        for ell in [1, 2] {
            let t = hermitian(ell);
            assert_eq!(t.steps(), 2);
            assert_eq!(t.stages()[1].period, 2);
        }
    }

    #[test]
    fn kind_fixtures_build() {
        assert_eq!(kind_fixtures().len(), 10);
    }
}
