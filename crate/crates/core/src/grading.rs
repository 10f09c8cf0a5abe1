//! `Z/m`-gradings of finite-dimensional algebras, the automorphisms that
//! determine them, and the induced grading of the centroid.

use std::fmt;

use thiserror::Error;

use crate::exactnum::CycloNumber;
use crate::findim::StructureAlgebra;
use crate::linalg::{self, LinearMap, SparseEchelon, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("map is not an algebra automorphism")]
    NotAutomorphism,
    #[error("map has period {actual}, not {declared}")]
    WrongPeriod { declared: u64, actual: String },
    #[error("root is not a primitive {expected}-th root of unity")]
    NotPrimitive { expected: u64 },
    #[error("automorphism period {period} does not divide root order {root_order}")]
    PeriodMismatch { period: u64, root_order: u64 },
    #[error("eigenspaces do not fill the algebra ({found} of {dim})")]
    Incomplete { found: usize, dim: usize },
    #[error("invalid grading: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<GradingViolation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradingViolation {
    WrongComponentCount { modulus: u64, found: usize },
    NotDirect { excess: usize },
    NotSpanning { missing: usize },
    /// The `a`-th basis vector of component `i` times the `b`-th basis
    /// vector of component `j` is not in component `target = i + j`.
    ProductLeak { i: u64, j: u64, target: u64, a: usize, b: usize },
}

impl fmt::Display for GradingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingViolation::WrongComponentCount { modulus, found } => {
                write!(f, "expected {modulus} components, found {found}")
            }
            GradingViolation::NotDirect { excess } => write!(f, "components overlap (sum is not direct, excess {excess})"),
            GradingViolation::NotSpanning { missing } => write!(f, "components miss {missing} dimensions of the algebra"),
            GradingViolation::ProductLeak { i, j, target, a, b } => {
                write!(f, "product of component {i} vector #{a} and component {j} vector #{b} is not in component {target}")
            }
        }
    }
}

/// An automorphism together with its exact period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrderAuto {
    map: LinearMap,
    period: u64,
}

/// Smallest `d >= 1` with `map^d = id`, searched up to `limit`.
pub fn exact_period(map: &LinearMap, limit: u64) -> Option<u64> {
    let mut p = map.clone();
    for d in 1..=limit {
        if p.is_identity() {
            return Some(d);
        }
        p = p.compose(map);
    }
    None
}

impl FiniteOrderAuto {
    /// Checks multiplicativity, invertibility and that the period is exact.
    pub fn new(alg: &StructureAlgebra, map: LinearMap, period: u64) -> Result<Self, GradingError> {
        if !alg.is_automorphism(&map) {
            return Err(GradingError::NotAutomorphism);
        }
        match exact_period(&map, period) {
            Some(p) if p == period => Ok(FiniteOrderAuto { map, period }),
            Some(p) => Err(GradingError::WrongPeriod { declared: period, actual: p.to_string() }),
            None => Err(GradingError::WrongPeriod { declared: period, actual: format!("> {period}") }),
        }
    }

    pub fn identity(alg: &StructureAlgebra) -> Self {
        FiniteOrderAuto { map: LinearMap::identity(alg.order(), alg.dim()), period: 1 }
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn compose(&self, alg: &StructureAlgebra, other: &FiniteOrderAuto) -> Result<Self, GradingError> {
        let m = self.map.compose(&other.map);
        let bound = num_integer::lcm(self.period, other.period);
        let p = exact_period(&m, bound).ok_or(GradingError::WrongPeriod { declared: bound, actual: "unbounded".into() })?;
        Self::new(alg, m, p)
    }

    pub fn commutes_with(&self, other: &FiniteOrderAuto) -> bool {
        self.map.compose(&other.map) == other.map.compose(&self.map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModGrading {
    modulus: u64,
    components: Vec<Subspace>,
}

impl ModGrading {
    /// Components are not validated here; see [`validate_grading`].
    pub fn new(modulus: u64, components: Vec<Subspace>) -> Self {
        ModGrading { modulus, components }
    }

    pub fn trivial(dim: usize, order: u64) -> Self {
        ModGrading { modulus: 1, components: vec![Subspace::full(dim, order)] }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    pub fn component(&self, i: i64) -> &Subspace {
        &self.components[i.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }

    /// Degree of a nonzero homogeneous vector.
    pub fn degree_of(&self, v: &[CycloNumber]) -> Option<u64> {
        if linalg::is_zero_vec(v) {
            return None;
        }
        self.components.iter().position(|c| c.contains(v)).map(|i| i as u64)
    }

    /// Matrix whose columns are the component bases, in degree order.
    fn basis_matrix(&self) -> LinearMap {
        let cols: Vec<Vector> = self.components.iter().flat_map(|c| c.basis().iter().cloned()).collect();
        let n = self.components[0].ambient_dim();
        LinearMap::from_columns(&cols, n)
    }

    /// Projections onto the components along the others. Requires a direct
    /// spanning decomposition.
    pub fn projections(&self) -> Vec<LinearMap> {
        let b = self.basis_matrix();
        let binv = b.inverse().expect("components form a basis");
        let order = b.order();
        let n = b.in_dim();
        let mut start = 0;
        self.components
            .iter()
            .map(|c| {
                let mut rows = vec![linalg::zero_vec(order, n); n];
                for (k, row) in rows.iter_mut().enumerate().skip(start).take(c.dim()) {
                    row[k] = CycloNumber::one(order);
                }
                start += c.dim();
                b.compose(&LinearMap::from_rows(rows, n)).compose(&binv)
            })
            .collect()
    }
}

/// Lists every way `grading` fails to be a `Z/m`-grading of `alg`.
pub fn validate_grading(alg: &StructureAlgebra, grading: &ModGrading) -> Vec<GradingViolation> {
    let mut out = Vec::new();
    let m = grading.modulus;
    if grading.components.len() as u64 != m {
        out.push(GradingViolation::WrongComponentCount { modulus: m, found: grading.components.len() });
        return out;
    }
    let total: usize = grading.components.iter().map(|c| c.dim()).sum();
    let sum = grading.components.iter().fold(Subspace::zero(alg.dim(), alg.order()), |acc, c| acc.sum(c));
    if total > sum.dim() {
        out.push(GradingViolation::NotDirect { excess: total - sum.dim() });
    }
    if sum.dim() < alg.dim() {
        out.push(GradingViolation::NotSpanning { missing: alg.dim() - sum.dim() });
    }
    for i in 0..m {
        for j in 0..m {
            let target = &grading.components[((i + j) % m) as usize];
            'pair: for (a, x) in grading.components[i as usize].basis().iter().enumerate() {
                for (b, y) in grading.components[j as usize].basis().iter().enumerate() {
                    if !target.contains(&alg.mul(x, y)) {
                        out.push(GradingViolation::ProductLeak { i, j, target: (i + j) % m, a, b });
                        break 'pair;
                    }
                }
            }
        }
    }
    out
}

fn check_root(zeta: &CycloNumber, m: u64) -> Result<(), GradingError> {
    if zeta.root_of_unity_order() == Some(m) {
        Ok(())
    } else {
        Err(GradingError::NotPrimitive { expected: m })
    }
}

/// The grading whose degree-`i` component is the `zeta^i`-eigenspace of
/// `sigma`. The modulus is the order of `zeta`; the period of `sigma` must
/// divide it.
pub fn grading_from_auto(alg: &StructureAlgebra, sigma: &FiniteOrderAuto, zeta: &CycloNumber) -> Result<ModGrading, GradingError> {
    let m = zeta.root_of_unity_order().ok_or(GradingError::NotPrimitive { expected: sigma.period })?;
    if m % sigma.period != 0 {
        return Err(GradingError::PeriodMismatch { period: sigma.period, root_order: m });
    }
    if !alg.is_automorphism(&sigma.map) {
        return Err(GradingError::NotAutomorphism);
    }
    let n = alg.dim();
    let components: Vec<Subspace> = (0..m)
        .map(|i| {
            let ev = zeta.pow(i as i64).expect("root of unity");
            sigma.map.sub(&LinearMap::scalar(&ev, n)).kernel()
        })
        .collect();
    let found: usize = components.iter().map(|c| c.dim()).sum();
    if found != n {
        return Err(GradingError::Incomplete { found, dim: n });
    }
    Ok(ModGrading { modulus: m, components })
}

/// The automorphism acting by `zeta^i` on component `i`.
pub fn auto_from_grading(alg: &StructureAlgebra, grading: &ModGrading, zeta: &CycloNumber) -> Result<FiniteOrderAuto, GradingError> {
    check_root(zeta, grading.modulus)?;
    let violations = validate_grading(alg, grading);
    if !violations.is_empty() {
        return Err(GradingError::Invalid(violations));
    }
    let n = alg.dim();
    let mut map = LinearMap::zero(alg.order(), n, n);
    for (i, p) in grading.projections().iter().enumerate() {
        map = map.add(&p.scale(&zeta.pow(i as i64).expect("root of unity")));
    }
    let period = exact_period(&map, grading.modulus).expect("map^m = id");
    Ok(FiniteOrderAuto { map, period })
}

/// The grading of the centroid by `C_l = {chi : chi(A_j) in A_(l+j)}`, in
/// coordinates relative to the basis returned by `alg.centroid()`.
pub fn centroid_grading(alg: &StructureAlgebra, grading: &ModGrading) -> Result<ModGrading, GradingError> {
    let violations = validate_grading(alg, grading);
    if !violations.is_empty() {
        return Err(GradingError::Invalid(violations));
    }
    let basis = alg.centroid();
    let d = basis.len();
    let n = alg.dim();
    let m = grading.modulus;
    let proj = grading.projections();
    let id = LinearMap::identity(alg.order(), n);
    let components = (0..m)
        .map(|l| {
            let mut se = SparseEchelon::new(alg.order());
            for j in 0..m {
                let off = id.sub(&proj[((l + j) % m) as usize]);
                for u in grading.components[j as usize].basis() {
                    let images: Vec<Vector> = basis.iter().map(|chi| off.apply(&chi.apply(u))).collect();
                    for s in 0..n {
                        se.insert(images.iter().enumerate().filter(|(_, w)| !w[s].is_zero()).map(|(a, w)| (a, w[s].clone())).collect());
                    }
                }
            }
            let ker = se
                .kernel(d)
                .iter()
                .map(|mv| {
                    let mut v = linalg::zero_vec(alg.order(), d);
                    for (&i, x) in mv {
                        v[i] = x.clone();
                    }
                    v
                })
                .collect();
            Subspace::new(d, alg.order(), ker)
        })
        .collect();
    Ok(ModGrading { modulus: m, components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2_diag(order: u64) -> (StructureAlgebra, FiniteOrderAuto) {
        let sl2 = StructureAlgebra::sl(order, 2);
        let one = CycloNumber::one(order);
        let z = CycloNumber::zero(order);
        let g = LinearMap::from_rows(vec![vec![one.clone(), z.clone()], vec![z, -&one]], 2);
        let sigma = sl2.conjugation(&g).unwrap();
        let auto = FiniteOrderAuto::new(&sl2, sigma, 2).unwrap();
        (sl2, auto)
    }

    #[test]
    fn sl2_parity_grading() {
        let (sl2, sigma) = sl2_diag(1);
        let minus = CycloNumber::from_int(1, -1);
        let g = grading_from_auto(&sl2, &sigma, &minus).unwrap();
        assert_eq!(g.components()[0], Subspace::new(3, 1, vec![sl2.basis_vector(1)]));
        assert_eq!(g.components()[1], Subspace::new(3, 1, vec![sl2.basis_vector(0), sl2.basis_vector(2)]));
        assert!(validate_grading(&sl2, &g).is_empty());
        let back = auto_from_grading(&sl2, &g, &minus).unwrap();
        assert_eq!(back, sigma);
    }

    #[test]
    fn identity_and_errors() {
        let (sl2, sigma) = sl2_diag(1);
        let id = FiniteOrderAuto::identity(&sl2);
        let g = grading_from_auto(&sl2, &id, &CycloNumber::one(1)).unwrap();
        assert_eq!(g.dims(), vec![3]);
        assert!(FiniteOrderAuto::new(&sl2, sigma.map().clone(), 4).is_err());
        assert!(grading_from_auto(&sl2, &sigma, &CycloNumber::one(1)).is_err());
    }

    #[test]
    fn leaks_and_overlaps() {
        let sl2 = StructureAlgebra::sl(1, 2);
        let bad = ModGrading::new(
            2,
            vec![Subspace::new(3, 1, vec![sl2.basis_vector(0)]), Subspace::new(3, 1, vec![sl2.basis_vector(1), sl2.basis_vector(2)])],
        );
        let v = validate_grading(&sl2, &bad);
        assert!(v.iter().any(|x| matches!(x, GradingViolation::ProductLeak { .. })));
        let overlap = ModGrading::new(2, vec![Subspace::full(3, 1), Subspace::new(3, 1, vec![sl2.basis_vector(0)])]);
        assert!(validate_grading(&sl2, &overlap).iter().any(|x| matches!(x, GradingViolation::NotDirect { .. })));
    }

    #[test]
    fn swap_centroid_grading() {
        let sl2 = StructureAlgebra::sl(1, 2);
        let ss = StructureAlgebra::direct_sum(&sl2, &sl2).unwrap();
        let n = 6;
        let cols: Vec<Vector> = (0..n).map(|j| ss.basis_vector((j + 3) % 6)).collect();
        let swap = FiniteOrderAuto::new(&ss, LinearMap::from_columns(&cols, n), 2).unwrap();
        let g = grading_from_auto(&ss, &swap, &CycloNumber::from_int(1, -1)).unwrap();
        let cg = centroid_grading(&ss, &g).unwrap();
        assert_eq!(cg.dims(), vec![1, 1]);
        let (calg, _) = ss.centroid_algebra();
        assert!(validate_grading(&calg, &cg).is_empty());
    }
}
