//! The centroid of a loop tower realized as the ring of Laurent
//! polynomials over `C(A)` that stabilize `L`, and the two-step kind
//! machinery built on it.

use std::collections::{BTreeMap, HashMap};

use crate::exactnum::CycloNumber;
use crate::findim::StructureAlgebra;
use crate::grading::{exact_period, FiniteOrderAuto};
use crate::linalg::{self, LinearMap, SparseEchelon, Subspace, Vector};
use crate::loops::{monomial_string, Degree, DegreeBox, LaurentElement, LoopError, LoopTower, ToralMonomialAuto, TowerOrigin};

mod kind;
mod untwist;

pub use kind::{kind_classify, verify_witness, ADVISORY_LABEL, strange_ring_audit, strange_ring_audit_with_seed, strange_ring_isomorphism_advisory, Kind, KindVerdict, KindWitness, StrangeAuditReport, StrangeRingAdvisory, StrangeRingData};
pub use untwist::{psi_check, untwist_check, PsiReport, UntwistReport};

/// `C(A)` as an algebra, with the maps on `A` its basis stands for.
#[derive(Debug, Clone)]
pub struct CentroidData {
    pub algebra: StructureAlgebra,
    pub maps: Vec<LinearMap>,
}

impl CentroidData {
    pub fn of(alg: &StructureAlgebra) -> Self {
        let (algebra, maps) = alg.centroid_algebra();
        CentroidData { algebra, maps }
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// The map on `A` with centroid coordinates `c`.
    pub fn map_of(&self, c: &[CycloNumber]) -> LinearMap {
        let mut acc = LinearMap::zero(self.maps[0].order(), self.maps[0].in_dim(), self.maps[0].in_dim());
        for (ci, m) in c.iter().zip(&self.maps) {
            if !ci.is_zero() {
                acc = acc.add(&m.scale(ci));
            }
        }
        acc
    }

    /// `(chi ⊗ z^i) · (a ⊗ z^j) = chi(a) ⊗ z^(i+j)`, extended bilinearly.
    pub fn act(&self, u: &LaurentElement, x: &LaurentElement) -> LaurentElement {
        let mut out = LaurentElement::zero(x.arity(), x.dim(), x.order());
        for (i, c) in u.terms() {
            let m = self.map_of(c);
            for (j, v) in x.terms() {
                let d: Degree = i.iter().zip(j).map(|(a, b)| a + b).collect();
                out.add_term(d, &m.apply(v));
            }
        }
        out
    }
}

type DefectKey = (usize, Degree, usize);

/// Stage-by-stage failure of `y` to lie in the tower: for stage `p` the
/// difference `sigma_p(y) - zeta_p^(d_p) y` taken degree by degree. `y` lies
/// in `L` exactly when every entry vanishes.
pub fn membership_defect(tower: &LoopTower, y: &LaurentElement) -> BTreeMap<DefectKey, CycloNumber> {
    let mut out: BTreeMap<DefectKey, CycloNumber> = BTreeMap::new();
    for (p, st) in tower.stages().iter().enumerate() {
        let theta = st.twist.theta().map();
        for (d, v) in y.terms() {
            let mut img = st.twist.map_degree(&d[..p]);
            img.extend_from_slice(&d[p..]);
            let chi = st.twist.character_value(&d[..p]);
            let tv = theta.apply(v);
            let lam = st.zeta.pow(d[p]).expect("root of unity");
            for s in 0..v.len() {
                if !tv[s].is_zero() {
                    let e = out.entry((p, img.clone(), s)).or_insert_with(|| CycloNumber::zero(tower.order()));
                    *e += &(&chi * &tv[s]);
                }
                if !v[s].is_zero() {
                    let e = out.entry((p, d.clone(), s)).or_insert_with(|| CycloNumber::zero(tower.order()));
                    *e -= &(&lam * &v[s]);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Truncation of the stabilizer ring to a box of monomials.
#[derive(Debug, Clone)]
pub struct StabilizerBasis {
    pub window: DegreeBox,
    /// Elements of `C(A) ⊗ k[z^±1]`, coefficients in centroid coordinates.
    pub elements: Vec<LaurentElement>,
    /// The window of `L` whose basis was used as test vectors.
    pub verified_box: DegreeBox,
    pub centroid: CentroidData,
}

impl StabilizerBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    fn flat_index(&self) -> (Vec<Degree>, HashMap<Degree, usize>) {
        let degs = self.window.degrees();
        let pos = degs.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        (degs, pos)
    }

    fn flatten(&self, u: &LaurentElement, pos: &HashMap<Degree, usize>) -> Option<BTreeMap<usize, CycloNumber>> {
        let dc = self.centroid.dim();
        let mut row = BTreeMap::new();
        for (d, c) in u.terms() {
            let base = pos.get(d)? * dc;
            for (k, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    row.insert(base + k, x.clone());
                }
            }
        }
        Some(row)
    }

    fn echelon(&self) -> (SparseEchelon, HashMap<Degree, usize>) {
        let (_, pos) = self.flat_index();
        let mut se = SparseEchelon::new(self.centroid.algebra.order());
        for u in &self.elements {
            se.insert(self.flatten(u, &pos).expect("inside window"));
        }
        (se, pos)
    }

    /// Whether `u` lies in the span of the basis (false if it leaves the box).
    pub fn contains(&self, u: &LaurentElement) -> bool {
        let (se, pos) = self.echelon();
        match self.flatten(u, &pos) {
            Some(row) => se.reduce(row).is_empty(),
            None => false,
        }
    }

    /// Dimension of the span inside a sub-box.
    pub fn dim_within(&self, sub: &DegreeBox) -> usize {
        let (se, pos) = self.echelon();
        let dc = self.centroid.dim();
        let outside: Vec<usize> = pos.iter().filter(|(d, _)| !sub.contains(d)).flat_map(|(_, &i)| (i * dc..(i + 1) * dc).collect::<Vec<_>>()).collect();
        // kernel of the projection onto the outside coordinates
        let mut proj = SparseEchelon::new(self.centroid.algebra.order());
        for u in &self.elements {
            let row = self.flatten(u, &pos).unwrap();
            proj.insert(row.into_iter().filter(|(k, _)| outside.contains(k)).collect());
        }
        se.rank() - proj.rank()
    }

    /// Dimension per degree orbit of the tower, keyed like
    /// [`LoopTower::window_dims_by_degree`]. Computed as the rank of the
    /// projection onto each orbit, which equals the dimension of the
    /// intersection because the stabilizer splits along orbits.
    pub fn dims_by_degree(&self, tower: &LoopTower) -> BTreeMap<Degree, usize> {
        let (_, pos) = self.flat_index();
        let dc = self.centroid.dim();
        let mut out = BTreeMap::new();
        for orbit in tower.degree_orbits(&self.window) {
            let cols: Vec<usize> = orbit.iter().flat_map(|d| (pos[d] * dc..(pos[d] + 1) * dc).collect::<Vec<_>>()).collect();
            let mut se = SparseEchelon::new(self.centroid.algebra.order());
            for u in &self.elements {
                let row = self.flatten(u, &pos).unwrap();
                se.insert(row.into_iter().filter(|(k, _)| cols.contains(k)).collect());
            }
            out.insert(orbit[0].clone(), se.rank());
        }
        out
    }

    pub fn render(&self) -> Vec<String> {
        let labels = self.centroid.algebra.labels().to_vec();
        self.elements.iter().map(|u| u.render(&labels)).collect()
    }
}

/// Whether `u` maps every element of `test` into `L`.
pub fn stabilizes(tower: &LoopTower, centroid: &CentroidData, u: &LaurentElement, test: &[LaurentElement]) -> bool {
    test.iter().all(|x| membership_defect(tower, &centroid.act(u, x)).is_empty())
}

/// Basis of `{u in C(A) ⊗ (monomials in window) : u·x in L}` where `x`
/// runs over the basis of `L` inside the same window.
pub fn stabilizer_in_box(tower: &LoopTower, window: &DegreeBox) -> StabilizerBasis {
    let centroid = CentroidData::of(tower.base());
    let test = tower.basis_in_box(window);
    let elements = solve_stabilizer(tower, &centroid, window, &test);
    StabilizerBasis { window: window.clone(), elements, verified_box: window.clone(), centroid }
}

fn solve_stabilizer(tower: &LoopTower, centroid: &CentroidData, window: &DegreeBox, test: &[LaurentElement]) -> Vec<LaurentElement> {
    let order = tower.order();
    let n = tower.steps();
    let dc = centroid.dim();
    let degrees = window.degrees();
    // Without variable substitutions L is graded by degree, so each degree
    // of u can be solved on its own.
    let graded = tower.stages().iter().all(|st| st.twist.monomial().iter().enumerate().all(|(r, row)| row.iter().enumerate().all(|(c, &v)| v == i64::from(r == c))));
    let groups: Vec<Vec<usize>> = if graded { (0..degrees.len()).map(|i| vec![i]).collect() } else { vec![(0..degrees.len()).collect()] };

    // sigma_p(chi_c x) and the zeta-weighted chi_c x, per test vector
    struct Pre {
        twisted: Vec<Vec<LaurentElement>>,
        weighted: Vec<Vec<LaurentElement>>,
    }
    let pre: Vec<Pre> = test
        .iter()
        .map(|x| {
            let cx: Vec<LaurentElement> = centroid.maps.iter().map(|m| x.map_coefficients(m)).collect();
            let twisted = tower
                .stages()
                .iter()
                .enumerate()
                .map(|(p, st)| cx.iter().map(|y| extended_twist(&st.twist, p, y)).collect())
                .collect();
            let weighted = tower
                .stages()
                .iter()
                .enumerate()
                .map(|(p, st)| {
                    cx.iter()
                        .map(|y| {
                            let mut w = LaurentElement::zero(n, y.dim(), order);
                            for (d, v) in y.terms() {
                                w.add_term(d.clone(), &linalg::vec_scale(v, &st.zeta.pow(d[p]).unwrap()));
                            }
                            w
                        })
                        .collect()
                })
                .collect();
            Pre { twisted, weighted }
        })
        .collect();

    let mut out = Vec::new();
    for group in groups {
        let nunk = group.len() * dc;
        let mut se = SparseEchelon::new(order);
        'tests: for px in &pre {
            let mut rows: BTreeMap<DefectKey, BTreeMap<usize, CycloNumber>> = BTreeMap::new();
            for (gl, &gi) in group.iter().enumerate() {
                let i = &degrees[gi];
                for (p, st) in tower.stages().iter().enumerate() {
                    let chi = st.twist.character_value(&i[..p]);
                    let mut mi = st.twist.map_degree(&i[..p]);
                    mi.extend_from_slice(&i[p..]);
                    let lam = st.zeta.pow(i[p]).unwrap();
                    for c in 0..dc {
                        let k = gl * dc + c;
                        for (d, v) in px.twisted[p][c].terms() {
                            let e: Degree = d.iter().zip(&mi).map(|(a, b)| a + b).collect();
                            for (s, x) in v.iter().enumerate() {
                                if !x.is_zero() {
                                    let slot = rows.entry((p, e.clone(), s)).or_default().entry(k).or_insert_with(|| CycloNumber::zero(order));
                                    *slot += &(&chi * x);
                                }
                            }
                        }
                        for (d, v) in px.weighted[p][c].terms() {
                            let e: Degree = d.iter().zip(i).map(|(a, b)| a + b).collect();
                            for (s, x) in v.iter().enumerate() {
                                if !x.is_zero() {
                                    let slot = rows.entry((p, e.clone(), s)).or_default().entry(k).or_insert_with(|| CycloNumber::zero(order));
                                    *slot -= &(&lam * x);
                                }
                            }
                        }
                    }
                }
            }
            for row in rows.into_values() {
                se.insert(row);
                if se.rank() == nunk {
                    break 'tests;
                }
            }
        }
        for kv in se.kernel(nunk) {
            let mut u = LaurentElement::zero(n, dc, order);
            for (gl, &gi) in group.iter().enumerate() {
                let coeff: Vector = (0..dc).map(|c| kv.get(&(gl * dc + c)).cloned().unwrap_or_else(|| CycloNumber::zero(order))).collect();
                u.add_term(degrees[gi].clone(), &coeff);
            }
            out.push(u);
        }
    }
    out
}

/// Stage `p` twist acting on the first `p` variables of an element with
/// more variables, the remaining ones untouched.
fn extended_twist(twist: &ToralMonomialAuto, p: usize, y: &LaurentElement) -> LaurentElement {
    let theta = twist.theta().map();
    let mut out = LaurentElement::zero(y.arity(), y.dim(), y.order());
    for (d, v) in y.terms() {
        let mut e = twist.map_degree(&d[..p]);
        e.extend_from_slice(&d[p..]);
        out.add_term(e, &linalg::vec_scale(&theta.apply(v), &twist.character_value(&d[..p])));
    }
    out
}

/// The tower over `C(A)` whose stage twists are `chi ⊗ z^i ↦
/// chi(i) theta chi theta^-1 ⊗ z^(M i)`; its window agrees with the
/// stabilizer window.
pub fn centroid_tower(tower: &LoopTower) -> Result<(LoopTower, CentroidData), LoopError> {
    let cd = CentroidData::of(tower.base());
    let n = tower.base().dim();
    let order = tower.order();
    let space = Subspace::new(n * n, order, cd.maps.iter().map(|m| m.flatten()).collect());
    let mut ct = LoopTower::new(cd.algebra.clone());
    for st in tower.stages() {
        let theta = st.twist.theta().map();
        let inv = theta.inverse()?;
        let cols: Vec<Vector> = cd
            .maps
            .iter()
            .map(|chi| space.coordinates(&theta.compose(chi).compose(&inv).flatten()).expect("conjugate of a centroid element is central"))
            .collect();
        let map = LinearMap::from_columns(&cols, cd.dim());
        let period = exact_period(&map, st.twist.theta().period().max(1)).expect("period divides the period of theta");
        let auto = FiniteOrderAuto::new(&cd.algebra, map, period)?;
        let twist = ToralMonomialAuto::new(auto, st.twist.monomial().to_vec(), st.twist.character().to_vec())?;
        ct.push_stage(twist, st.zeta.clone(), None)?;
    }
    Ok((ct, cd))
}

fn require_central_simple(alg: &StructureAlgebra) -> Result<(), LoopError> {
    if !alg.is_central() {
        return Err(LoopError::Hypothesis("base algebra is not central".into()));
    }
    if !alg.is_simple() {
        return Err(LoopError::Hypothesis("base algebra is not simple".into()));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct MultiloopCentroidReport {
    pub window: DegreeBox,
    /// `z_p^(m_p)` for each variable.
    pub generators: Vec<String>,
    pub expected_dim: usize,
    pub stabilizer_dim: usize,
    pub discrepancies: Vec<String>,
}

impl MultiloopCentroidReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares the stabilizer window of a multiloop algebra over a central
/// simple base with the monomials `z^(m_1 a_1, ..., m_n a_n)`.
pub fn multiloop_centroid_check(tower: &LoopTower, window: &DegreeBox) -> Result<MultiloopCentroidReport, LoopError> {
    if !matches!(tower.origin(), TowerOrigin::Multiloop(_)) {
        return Err(LoopError::Hypothesis("tower is not a multiloop algebra".into()));
    }
    require_central_simple(tower.base())?;
    let moduli = tower.moduli();
    let stab = stabilizer_in_box(tower, window);
    let order = tower.order();
    let expected: Vec<Degree> = window.degrees().into_iter().filter(|d| d.iter().zip(&moduli).all(|(&e, &m)| e.rem_euclid(m as i64) == 0)).collect();
    let mut discrepancies = Vec::new();
    for d in &expected {
        let u = LaurentElement::monomial(vec![CycloNumber::one(order)], d.clone(), order);
        if !stab.contains(&u) {
            discrepancies.push(format!("{} does not stabilize L", monomial_string(d)));
        }
    }
    for u in &stab.elements {
        if let Some(d) = u.support().find(|d| !expected.contains(d)) {
            discrepancies.push(format!("stabilizer element supported at {}", monomial_string(d)));
        }
    }
    if stab.dim() != expected.len() {
        discrepancies.push(format!("stabilizer has dimension {}, expected {}", stab.dim(), expected.len()));
    }
    let generators = moduli
        .iter()
        .enumerate()
        .map(|(p, &m)| {
            let mut d = vec![0; moduli.len()];
            d[p] = m as i64;
            monomial_string(&d)
        })
        .collect();
    Ok(MultiloopCentroidReport { window: window.clone(), generators, expected_dim: expected.len(), stabilizer_dim: stab.dim(), discrepancies })
}
