use std::collections::{BTreeMap, HashMap};

use crate::exactnum::CycloNumber;
use crate::findim::StructureAlgebra;
use crate::grading::FiniteOrderAuto;
use crate::linalg::{self, SparseEchelon};

use super::laurent::{box_degrees, Degree, LaurentElement};
use super::LoopError;

fn int_mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn int_identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * int_det(&minor)
        })
        .sum()
}

/// `a ⊗ z^j -> (prod_i chi_i^(j_i)) theta(a) ⊗ z^(M j)`: a finite-order
/// automorphism of `A` combined with a monomial substitution and a
/// character on the Laurent variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToralMonomialAuto {
    theta: FiniteOrderAuto,
    monomial: Vec<Vec<i64>>,
    inverse: Vec<Vec<i64>>,
    monomial_order: u64,
    character: Vec<CycloNumber>,
}

impl ToralMonomialAuto {
    pub fn new(theta: FiniteOrderAuto, monomial: Vec<Vec<i64>>, character: Vec<CycloNumber>) -> Result<Self, LoopError> {
        let p = monomial.len();
        if monomial.iter().any(|r| r.len() != p) || character.len() != p {
            return Err(LoopError::BadMonomial(format!("expected a {p}x{p} matrix and {p} character values")));
        }
        if int_det(&monomial).abs() != 1 {
            return Err(LoopError::BadMonomial("determinant is not ±1".into()));
        }
        let id = int_identity(p);
        let mut pw = monomial.clone();
        let mut order = 1;
        while pw != id {
            pw = int_mat_mul(&pw, &monomial);
            order += 1;
            if order > 120 {
                return Err(LoopError::BadMonomial("matrix has infinite order".into()));
            }
        }
        let mut inverse = id;
        for _ in 1..order {
            inverse = int_mat_mul(&inverse, &monomial);
        }
        let ord = theta.map().order();
        if character.iter().any(|c| c.is_zero() || c.order() != ord) {
            return Err(LoopError::BadMonomial("character values must be nonzero field elements".into()));
        }
        Ok(ToralMonomialAuto { theta, monomial, inverse, monomial_order: order, character })
    }

    /// Character `chi_i = zeta^(c_i)`.
    pub fn from_root_character(theta: FiniteOrderAuto, monomial: Vec<Vec<i64>>, c: &[i64], zeta: &CycloNumber) -> Result<Self, LoopError> {
        let character = c.iter().map(|&ci| zeta.pow(ci)).collect::<Result<Vec<_>, _>>()?;
        Self::new(theta, monomial, character)
    }

    /// `theta` extended trivially to `p` Laurent variables.
    pub fn extend_identity(theta: FiniteOrderAuto, p: usize) -> Self {
        let ord = theta.map().order();
        Self::new(theta, int_identity(p), vec![CycloNumber::one(ord); p]).expect("identity action")
    }

    pub fn arity(&self) -> usize {
        self.monomial.len()
    }

    pub fn theta(&self) -> &FiniteOrderAuto {
        &self.theta
    }

    pub fn monomial(&self) -> &[Vec<i64>] {
        &self.monomial
    }

    pub fn character(&self) -> &[CycloNumber] {
        &self.character
    }

    pub fn monomial_order(&self) -> u64 {
        self.monomial_order
    }

    pub fn map_degree(&self, d: &[i64]) -> Degree {
        self.monomial.iter().map(|r| r.iter().zip(d).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn preimage_degree(&self, d: &[i64]) -> Degree {
        self.inverse.iter().map(|r| r.iter().zip(d).map(|(a, b)| a * b).sum()).collect()
    }

    /// `prod_i chi_i^(d_i)`
    pub fn character_value(&self, d: &[i64]) -> CycloNumber {
        let mut acc = CycloNumber::one(self.theta.map().order());
        for (c, &e) in self.character.iter().zip(d) {
            if e != 0 {
                acc = &acc * &c.pow(e).expect("nonzero character");
            }
        }
        acc
    }

    pub fn apply(&self, x: &LaurentElement) -> LaurentElement {
        let mut out = LaurentElement::zero(x.arity(), x.dim(), x.order());
        for (d, v) in x.terms() {
            let img = linalg::vec_scale(&self.theta.map().apply(v), &self.character_value(d));
            out.add_term(self.map_degree(d), &img);
        }
        out
    }

    pub fn is_identity_on_variables(&self) -> bool {
        self.monomial == int_identity(self.arity()) && self.character.iter().all(|c| c.is_one())
    }
}

/// Radii of a finite window of multidegrees `|d_i| <= radius_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeBox {
    pub radius: Vec<i64>,
}

impl DegreeBox {
    pub fn new(radius: Vec<i64>) -> Self {
        DegreeBox { radius }
    }

    pub fn uniform(arity: usize, r: i64) -> Self {
        DegreeBox { radius: vec![r; arity] }
    }

    pub fn contains(&self, d: &[i64]) -> bool {
        d.iter().zip(&self.radius).all(|(a, r)| a.abs() <= *r)
    }

    pub fn degrees(&self) -> Vec<Degree> {
        box_degrees(&self.radius)
    }

    pub fn scaled(&self, num: i64, den: i64) -> DegreeBox {
        DegreeBox { radius: self.radius.iter().map(|r| r * num / den).collect() }
    }

    pub fn prefix(&self, p: usize) -> DegreeBox {
        DegreeBox { radius: self.radius[..p].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub twist: ToralMonomialAuto,
    pub modulus: u64,
    pub zeta: CycloNumber,
    /// Smallest `d` with `twist^d = id` on the verification window.
    pub period: u64,
    pub verified_box: DegreeBox,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerOrigin {
    Multiloop(Vec<FiniteOrderAuto>),
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopTower {
    base: StructureAlgebra,
    stages: Vec<Stage>,
    origin: TowerOrigin,
}

impl LoopTower {
    pub fn new(base: StructureAlgebra) -> Self {
        LoopTower { base, stages: Vec::new(), origin: TowerOrigin::General }
    }

    /// `A ⊗ S^{⊗n}`
    pub fn untwisted(base: StructureAlgebra, n: usize) -> Self {
        let id = FiniteOrderAuto::identity(&base);
        let autos = vec![id; n];
        let zetas = vec![CycloNumber::one(base.order()); n];
        multiloop(&base, &autos, &zetas).expect("identity automorphisms commute")
    }

    pub fn base(&self) -> &StructureAlgebra {
        &self.base
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn steps(&self) -> usize {
        self.stages.len()
    }

    pub fn origin(&self) -> &TowerOrigin {
        &self.origin
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.stages.iter().map(|s| s.modulus).collect()
    }

    pub fn order(&self) -> u64 {
        self.base.order()
    }

    /// Default verification window `(2 m_1, ..., 2 m_n)`.
    pub fn default_box(&self) -> DegreeBox {
        DegreeBox::new(self.stages.iter().map(|s| 2 * s.modulus as i64).collect())
    }

    /// The truncation `L_p` with only the first `p` stages.
    pub fn truncate(&self, p: usize) -> LoopTower {
        LoopTower { base: self.base.clone(), stages: self.stages[..p].to_vec(), origin: TowerOrigin::General }
    }

    /// Adds stage `n + 1` after checking on a window of `L_n` that the twist
    /// maps `L_n` into itself and that its `m`-th power is the identity.
    /// The window defaults to `(2 m_1, ..., 2 m_n)`.
    pub fn push_stage(&mut self, twist: ToralMonomialAuto, zeta: CycloNumber, check: Option<DegreeBox>) -> Result<(), LoopError> {
        let stage = self.stages.len() + 1;
        if twist.arity() != self.stages.len() {
            return Err(LoopError::ArityMismatch { expected: self.stages.len(), got: twist.arity() });
        }
        if twist.theta().map().in_dim() != self.base.dim() {
            return Err(LoopError::DimensionMismatch { expected: self.base.dim(), got: twist.theta().map().in_dim() });
        }
        let modulus = zeta.root_of_unity_order().ok_or(LoopError::NotPrimitive { stage })?;
        let window = check.unwrap_or_else(|| self.default_box());
        let basis = self.basis_in_box(&window);
        let mut images = basis.clone();
        let mut period = None;
        for d in 1..=modulus {
            images = images.iter().map(|x| twist.apply(x)).collect();
            if d == 1 && !images.iter().all(|x| self.tower_membership(x)) {
                return Err(LoopError::NotStabilizing { stage, radius: window.radius });
            }
            if images == basis {
                period = Some(d);
                break;
            }
        }
        let period = match period {
            Some(p) if modulus % p == 0 => p,
            _ => return Err(LoopError::WrongPeriod { stage, modulus, radius: window.radius }),
        };
        self.stages.push(Stage { twist, modulus, zeta, period, verified_box: window });
        self.origin = TowerOrigin::General;
        Ok(())
    }

    /// Recursive membership: each `z_n`-slice lies in `L_(n-1)` and is an
    /// eigenvector of `sigma_n` for `zeta_n^j`.
    pub fn tower_membership(&self, x: &LaurentElement) -> bool {
        if x.arity() != self.stages.len() || x.dim() != self.base.dim() {
            return false;
        }
        self.member_at(self.stages.len(), x)
    }

    fn member_at(&self, p: usize, x: &LaurentElement) -> bool {
        if p == 0 {
            return true;
        }
        let st = &self.stages[p - 1];
        x.split_last().iter().all(|(j, s)| {
            let lam = st.zeta.pow(*j).expect("root of unity");
            st.twist.apply(s) == s.scale(&lam) && self.member_at(p - 1, s)
        })
    }

    /// Basis of `L ∩ (A ⊗ span of monomials in the box)`.
    pub fn basis_in_box(&self, window: &DegreeBox) -> Vec<LaurentElement> {
        self.window_components(window).into_iter().flat_map(|(_, b)| b).collect()
    }

    /// Degrees of the window grouped into the classes coupled by the
    /// variable substitutions of the stages, each class in increasing order.
    pub fn degree_orbits(&self, window: &DegreeBox) -> Vec<Vec<Degree>> {
        let degrees = window.degrees();
        let pos: HashMap<&Degree, usize> = degrees.iter().enumerate().map(|(i, d)| (d, i)).collect();
        let mut parent: Vec<usize> = (0..degrees.len()).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            let mut k = i;
            while parent[k] != r {
                let next = parent[k];
                parent[k] = r;
                k = next;
            }
            r
        }
        for (i, d) in degrees.iter().enumerate() {
            for (q, st) in self.stages.iter().enumerate() {
                let mut e = st.twist.map_degree(&d[..q]);
                e.extend_from_slice(&d[q..]);
                if let Some(&k) = pos.get(&e) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, k));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<Degree>> = BTreeMap::new();
        for i in 0..degrees.len() {
            let r = find(&mut parent, i);
            comps.entry(r).or_default().push(degrees[i].clone());
        }
        comps.into_values().collect()
    }

    /// The window split into orbits of degrees under the variable
    /// substitutions (single degrees when there are none), each with a
    /// basis of the part of `L` supported on it.
    pub fn window_components(&self, window: &DegreeBox) -> Vec<(Vec<Degree>, Vec<LaurentElement>)> {
        let n = self.stages.len();
        assert_eq!(window.radius.len(), n, "box arity");
        let dim = self.base.dim();
        let order = self.order();
        let degrees = window.degrees();
        let pos: HashMap<&Degree, usize> = degrees.iter().enumerate().map(|(i, d)| (d, i)).collect();
        let comps: Vec<Vec<usize>> = self.degree_orbits(window).iter().map(|o| o.iter().map(|d| pos[d]).collect()).collect();

        let mut out = Vec::new();
        for members in &comps {
            let mut part = Vec::new();
            let local: HashMap<usize, usize> = members.iter().enumerate().map(|(l, &g)| (g, l)).collect();
            let idx = |g: usize, c: usize| local[&g] * dim + c;
            let mut se = SparseEchelon::new(order);
            for &g in members {
                let d = &degrees[g];
                for (q, st) in self.stages.iter().enumerate() {
                    let theta = st.twist.theta().map();
                    let lam = st.zeta.pow(d[q]).expect("root of unity");
                    let mut src = st.twist.preimage_degree(&d[..q]);
                    src.extend_from_slice(&d[q..]);
                    let src_pos = pos.get(&src).copied();
                    let chi = st.twist.character_value(&src[..q]);
                    for s in 0..dim {
                        let mut row = BTreeMap::new();
                        row.insert(idx(g, s), lam.clone());
                        if let Some(sp) = src_pos {
                            for c in 0..dim {
                                let t = theta.entry(s, c);
                                if !t.is_zero() {
                                    let e = row.entry(idx(sp, c)).or_insert_with(|| CycloNumber::zero(order));
                                    *e -= &(&chi * t);
                                }
                            }
                        }
                        se.insert(row);
                    }
                    let mut img = st.twist.map_degree(&d[..q]);
                    img.extend_from_slice(&d[q..]);
                    if !pos.contains_key(&img) {
                        for c in 0..dim {
                            se.insert(BTreeMap::from([(idx(g, c), CycloNumber::one(order))]));
                        }
                    }
                }
            }
            for kv in se.kernel(members.len() * dim) {
                let mut x = LaurentElement::zero(n, dim, order);
                for (l, &g) in members.iter().enumerate() {
                    let coeff: Vec<CycloNumber> = (0..dim).map(|c| kv.get(&(l * dim + c)).cloned().unwrap_or_else(|| CycloNumber::zero(order))).collect();
                    x.add_term(degrees[g].clone(), &coeff);
                }
                part.push(x);
            }
            out.push((members.iter().map(|&g| degrees[g].clone()).collect(), part));
        }
        out
    }

    /// Window dimension per degree orbit, keyed by the smallest degree of
    /// the orbit (the degree itself when no variables are substituted).
    pub fn window_dims_by_degree(&self, window: &DegreeBox) -> BTreeMap<Degree, usize> {
        self.window_components(window).into_iter().map(|(ds, b)| (ds[0].clone(), b.len())).collect()
    }

    /// Membership via the simultaneous eigenspaces of the defining
    /// automorphisms; only for towers built by [`multiloop`].
    pub fn fine_grading_membership(&self, x: &LaurentElement) -> Option<bool> {
        let TowerOrigin::Multiloop(autos) = &self.origin else {
            return None;
        };
        Some(x.terms().iter().all(|(d, v)| {
            autos.iter().zip(&self.stages).zip(d).all(|((a, st), &j)| a.map().apply(v) == linalg::vec_scale(v, &st.zeta.pow(j).unwrap()))
        }))
    }
}

/// The multiloop algebra of commuting finite-order automorphisms: stage
/// `p` is `sigma_p` acting on coefficients only.
pub fn multiloop(base: &StructureAlgebra, autos: &[FiniteOrderAuto], zetas: &[CycloNumber]) -> Result<LoopTower, LoopError> {
    if autos.len() != zetas.len() {
        return Err(LoopError::ArityMismatch { expected: autos.len(), got: zetas.len() });
    }
    for i in 0..autos.len() {
        for j in i + 1..autos.len() {
            if !autos[i].commutes_with(&autos[j]) {
                return Err(LoopError::NonCommuting(i + 1, j + 1));
            }
        }
    }
    let mut t = LoopTower::new(base.clone());
    for (p, (a, z)) in autos.iter().zip(zetas).enumerate() {
        let modulus = z.root_of_unity_order().ok_or(LoopError::NotPrimitive { stage: p + 1 })?;
        if modulus % a.period() != 0 {
            return Err(LoopError::PeriodMismatch { stage: p + 1, period: a.period(), modulus });
        }
        let twist = ToralMonomialAuto::extend_identity(a.clone(), p);
        t.push_stage(twist, z.clone(), None)?;
    }
    t.origin = TowerOrigin::Multiloop(autos.to_vec());
    Ok(t)
}
