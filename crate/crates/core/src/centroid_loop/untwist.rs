use std::collections::{BTreeMap, HashMap};

use crate::exactnum::CycloNumber;
use crate::findim::StructureAlgebra;
use crate::grading::{auto_from_grading, centroid_grading, ModGrading};
use crate::linalg::SparseEchelon;
use crate::loops::{canonical_form, index_set, laurent_multiply, multiloop, Degree, DegreeBox, LaurentElement, LoopError, LoopTower};

use super::{centroid_tower, stabilizer_in_box, stabilizes, CentroidData};

/// Test pairs for the product rule are drawn from this many basis vectors.
const PAIR_SAMPLE: usize = 10;
/// Parts whose stabilizing action is checked directly in `untwist_check`.
const PART_SAMPLE: usize = 40;

#[derive(Debug, Clone)]
pub struct PsiReport {
    pub window: DegreeBox,
    pub centroid_loop_dims: BTreeMap<Degree, usize>,
    pub stabilizer_dims: BTreeMap<Degree, usize>,
    pub elements_checked: usize,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares the loop algebra of the centroid, for the induced grading,
/// with the stabilizer of the one-step loop algebra of `(alg, grading)`.
/// Each basis element of the former must act on `L` as a centroid
/// transformation, and the two windows must have equal dimension degree by
/// degree.
pub fn psi_check(alg: &StructureAlgebra, grading: &ModGrading, zeta: &CycloNumber, window: &DegreeBox) -> Result<PsiReport, LoopError> {
    let sigma = auto_from_grading(alg, grading, zeta)?;
    let tower = multiloop(alg, &[sigma], &[zeta.clone()])?;
    let cd = CentroidData::of(alg);
    let cgrading = centroid_grading(alg, grading)?;
    let csigma = auto_from_grading(&cd.algebra, &cgrading, zeta)?;
    let ctower = multiloop(&cd.algebra, &[csigma], &[zeta.clone()])?;

    let test = tower.basis_in_box(window);
    let cbasis = ctower.basis_in_box(window);
    let mut failures = Vec::new();
    let labels = cd.algebra.labels().to_vec();
    let sample = &test[..test.len().min(PAIR_SAMPLE)];
    let mut pairs = 0;
    for u in &cbasis {
        if !stabilizes(&tower, &cd, u, &test) {
            failures.push(format!("{} does not stabilize L", u.render(&labels)));
        }
        for x in sample {
            for y in sample {
                pairs += 1;
                let xy = laurent_multiply(alg, x, y)?;
                let lhs = cd.act(u, &xy);
                let left = laurent_multiply(alg, &cd.act(u, x), y)?;
                let right = laurent_multiply(alg, x, &cd.act(u, y))?;
                if lhs != left || lhs != right {
                    failures.push(format!("{} violates the centroid identities", u.render(&labels)));
                }
            }
        }
    }
    let stab = stabilizer_in_box(&tower, window);
    let centroid_loop_dims = ctower.window_dims_by_degree(window);
    let stabilizer_dims = stab.dims_by_degree(&tower);
    for (d, a) in &centroid_loop_dims {
        let b = stabilizer_dims.get(d).copied().unwrap_or(0);
        if *a != b {
            failures.push(format!("degree {d:?}: centroid loop window {a}, stabilizer window {b}"));
        }
    }
    Ok(PsiReport { window: window.clone(), centroid_loop_dims, stabilizer_dims, elements_checked: cbasis.len(), pairs_checked: pairs, failures })
}

#[derive(Debug, Clone)]
pub struct UntwistReport {
    pub window: DegreeBox,
    pub rank: usize,
    pub basis: Vec<Degree>,
    pub centroid_elements_checked: usize,
    pub loop_elements_checked: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl UntwistReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Windowed check that `C(A) ⊗ k[z^±1]` is free over the stabilizer with
/// basis `{z^i : i in I_n}` and that `L ⊗ (C(A) ⊗ k[z^±1]) -> A ⊗ k[z^±1]`
/// is bijective.
pub fn untwist_check(tower: &LoopTower, window: &DegreeBox) -> Result<UntwistReport, LoopError> {
    let n = tower.steps();
    let order = tower.order();
    let (ct, cd) = centroid_tower(tower)?;
    let basis = index_set(&tower.moduli());
    let test = tower.basis_in_box(window);
    let mut failures = Vec::new();
    let labels = cd.algebra.labels().to_vec();

    // (i) unique decomposition of C(A) ⊗ k[z^±1] over the z^i
    let mut centroid_checked = 0;
    let mut parts_checked = 0;
    for d in window.degrees() {
        for c in 0..cd.dim() {
            let y = LaurentElement::monomial(cd.algebra.basis_vector(c), d.clone(), order);
            let cf = canonical_form(&ct, &y)?;
            centroid_checked += 1;
            if cf.reconstruct().as_ref() != Some(&y) {
                failures.push(format!("{} is not recovered from its decomposition", y.render(&labels)));
            }
            for (i, part) in &cf.parts {
                if !ct.tower_membership(part) {
                    failures.push(format!("coefficient of z^{i:?} in {} is not in the centroid", y.render(&labels)));
                } else if parts_checked < PART_SAMPLE && !part.is_zero() {
                    parts_checked += 1;
                    if !stabilizes(tower, &cd, part, &test) {
                        failures.push(format!("coefficient {} does not stabilize L", part.render(&labels)));
                    }
                }
            }
            let again = canonical_form(&ct, &cf.reconstruct().unwrap_or_else(|| y.clone()))?;
            if again.parts != cf.parts {
                failures.push(format!("decomposition of {} is not unique", y.render(&labels)));
            }
        }
    }

    // (ii) surjectivity: every window element of A ⊗ k[z^±1] is sum z^i x_i
    let mut loop_checked = 0;
    for d in window.degrees() {
        for s in 0..tower.base().dim() {
            let y = LaurentElement::monomial(tower.base().basis_vector(s), d.clone(), order);
            let cf = canonical_form(tower, &y)?;
            loop_checked += 1;
            if cf.reconstruct().as_ref() != Some(&y) || !cf.parts.values().all(|x| tower.tower_membership(x)) {
                failures.push(format!("basis element {s} at degree {d:?} is not a sum of shifted elements of L"));
            }
        }
    }

    // injectivity: the shifted window bases are jointly independent
    let mut pos: HashMap<Degree, usize> = HashMap::new();
    let dim = tower.base().dim();
    let mut se = SparseEchelon::new(order);
    let mut count = 0;
    for i in &basis {
        for x in &test {
            let shifted = x.shift(i);
            let mut row = BTreeMap::new();
            for (e, v) in shifted.terms() {
                let next = pos.len();
                let k = *pos.entry(e.clone()).or_insert(next);
                for (t, a) in v.iter().enumerate() {
                    if !a.is_zero() {
                        row.insert(k * dim + t, a.clone());
                    }
                }
            }
            count += 1;
            se.insert(row);
        }
    }
    if se.rank() != count {
        failures.push(format!("shifted windows have a dependency: rank {} of {count}", se.rank()));
    }

    let mut notes = Vec::new();
    if cd.dim() == 1 {
        notes.push(format!("Laurent ring in {n} variables is free of rank {} over the centroid", basis.len()));
    }
    Ok(UntwistReport {
        window: window.clone(),
        rank: basis.len(),
        basis,
        centroid_elements_checked: centroid_checked,
        loop_elements_checked: loop_checked,
        failures,
        notes,
    })
}
