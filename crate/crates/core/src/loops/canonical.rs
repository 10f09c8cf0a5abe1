use std::collections::BTreeMap;

use crate::exactnum::{CycloNumber, Rational};
use crate::linalg::SparseEchelon;

use super::laurent::{laurent_multiply, Degree, LaurentElement};
use super::tower::{DegreeBox, LoopTower};
use super::LoopError;

/// `I_n = {i : 0 <= i_p < m_p}` in lexicographic order.
pub fn index_set(moduli: &[u64]) -> Vec<Degree> {
    let mut out = vec![Vec::new()];
    for &m in moduli {
        out = out
            .into_iter()
            .flat_map(|d| {
                (0..m as i64).map(move |i| {
                    let mut d = d.clone();
                    d.push(i);
                    d
                })
            })
            .collect();
    }
    out
}

/// The family `{x_i}_{i in I_n}` with `y = sum_i z^i · x_i` and `x_i in L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub parts: BTreeMap<Degree, LaurentElement>,
}

impl CanonicalForm {
    pub fn reconstruct(&self) -> Option<LaurentElement> {
        let mut it = self.parts.iter();
        let (i0, x0) = it.next()?;
        Some(it.fold(x0.shift(i0), |acc, (i, x)| acc.add(&x.shift(i))))
    }
}

/// Decomposes `y` by the inductive procedure: recurse on each `z_n`-slice,
/// split every `L_(n-1)` piece into `sigma_n`-eigencomponents, and move
/// each component into its residue class modulo `m_n`.
pub fn canonical_form(tower: &LoopTower, y: &LaurentElement) -> Result<CanonicalForm, LoopError> {
    let n = tower.steps();
    if y.arity() != n {
        return Err(LoopError::ArityMismatch { expected: n, got: y.arity() });
    }
    if y.dim() != tower.base().dim() {
        return Err(LoopError::DimensionMismatch { expected: tower.base().dim(), got: y.dim() });
    }
    let mut parts: BTreeMap<Degree, LaurentElement> =
        index_set(&tower.moduli()).into_iter().map(|i| (i, LaurentElement::zero(n, y.dim(), y.order()))).collect();
    for (i, x) in decompose(tower, n, y) {
        parts.insert(i, x);
    }
    Ok(CanonicalForm { parts })
}

fn decompose(tower: &LoopTower, p: usize, y: &LaurentElement) -> BTreeMap<Degree, LaurentElement> {
    let mut acc: BTreeMap<Degree, LaurentElement> = BTreeMap::new();
    if y.is_zero() {
        return acc;
    }
    if p == 0 {
        acc.insert(Vec::new(), y.clone());
        return acc;
    }
    let st = &tower.stages()[p - 1];
    let m = st.modulus as i64;
    let inv_m = Rational::new(1.into(), m.into());
    for (j, yj) in y.split_last() {
        for (idx, x) in decompose(tower, p - 1, &yj) {
            let mut orbit = vec![x.clone()];
            for t in 1..m as usize {
                orbit.push(st.twist.apply(&orbit[t - 1]));
            }
            for l in 0..m {
                let mut h = LaurentElement::zero(p - 1, y.dim(), y.order());
                for (t, xt) in orbit.iter().enumerate() {
                    let c = st.zeta.pow(-l * t as i64).expect("root of unity").scale(&inv_m);
                    h = h.add(&xt.scale(&c));
                }
                if h.is_zero() {
                    continue;
                }
                let i = (j - l).rem_euclid(m);
                let mut key = idx.clone();
                key.push(i);
                let piece = h.extend_last(j - i);
                let slot = acc.entry(key).or_insert_with(|| LaurentElement::zero(p, y.dim(), y.order()));
                *slot = slot.add(&piece);
            }
        }
    }
    acc.retain(|_, x| !x.is_zero());
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeBasisReport {
    pub rank: u64,
    pub basis: Vec<Degree>,
    pub window: DegreeBox,
    pub elements_checked: usize,
    pub families_checked: usize,
    pub failures: Vec<String>,
}

impl FreeBasisReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks on a window that `A ⊗ S^{⊗n}` is free over `L` with basis
/// `{1 ⊗ z^i : i in I_n}` acting on the right.
pub fn free_basis_check(tower: &LoopTower, window: &DegreeBox) -> Result<FreeBasisReport, LoopError> {
    let base = tower.base();
    let unit = base.unit().cloned().ok_or_else(|| LoopError::Hypothesis("base algebra is not unital".into()))?;
    if !base.is_associative() {
        return Err(LoopError::Hypothesis("base algebra is not associative".into()));
    }
    let n = tower.steps();
    let order = tower.order();
    let basis_idx = index_set(&tower.moduli());
    let mut failures = Vec::new();
    let mut checked = 0;
    for d in window.degrees() {
        for k in 0..base.dim() {
            let y = LaurentElement::monomial(base.basis_vector(k), d.clone(), order);
            let cf = canonical_form(tower, &y)?;
            let mut right = LaurentElement::zero(n, base.dim(), order);
            for (i, x) in &cf.parts {
                if !tower.tower_membership(x) {
                    failures.push(format!("component {i:?} of e{k} z^{d:?} is not in L"));
                }
                let one_z = LaurentElement::monomial(unit.clone(), i.clone(), order);
                right = right.add(&laurent_multiply(base, x, &one_z)?);
            }
            if right != y {
                failures.push(format!("e{k} z^{d:?} is not recovered by the right action"));
            }
            checked += 1;
        }
    }
    // uniqueness: families built from window members decompose back to themselves
    let members = tower.basis_in_box(&window.scaled(1, 2));
    let mut families = 0;
    for s in 0..members.len().min(12) {
        let parts: BTreeMap<Degree, LaurentElement> = basis_idx
            .iter()
            .enumerate()
            .map(|(t, i)| {
                let x = &members[(s + 3 * t) % members.len()];
                (i.clone(), x.scale(&CycloNumber::from_int(order, (t as i64 % 3) - 1)))
            })
            .collect();
        let fam = CanonicalForm { parts };
        let y = fam.reconstruct().expect("nonempty index set");
        if canonical_form(tower, &y)? != fam {
            failures.push(format!("family #{s} is not recovered uniquely"));
        }
        families += 1;
    }
    Ok(FreeBasisReport {
        rank: tower.moduli().iter().product(),
        basis: basis_idx,
        window: window.clone(),
        elements_checked: checked,
        families_checked: families,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagStatus {
    DerivedByTheorem,
    NotApplicable,
}

impl FlagStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FlagStatus::DerivedByTheorem => "derived-by-theorem",
            FlagStatus::NotApplicable => "not applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InheritedFlag {
    pub property: &'static str,
    /// Whether the base algebra was verified to have the property.
    pub base: bool,
    pub status: FlagStatus,
    /// Direct check on the window, where one is available.
    pub verified_in_box: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InheritedFlags {
    pub flags: Vec<InheritedFlag>,
    pub window: DegreeBox,
    pub notes: Vec<String>,
}

impl InheritedFlags {
    pub fn get(&self, property: &str) -> Option<&InheritedFlag> {
        self.flags.iter().find(|f| f.property == property)
    }
}

/// Properties of `L` obtained from verified properties of the base, with
/// nonzeroness, perfectness and the unit also checked on a window.
pub fn inherited_flags(tower: &LoopTower, window: Option<DegreeBox>) -> InheritedFlags {
    let base = tower.base();
    let window = window.unwrap_or_else(|| DegreeBox::new(tower.moduli().iter().map(|&m| m as i64).collect()));
    let n = tower.steps();
    let order = tower.order();
    let simple = base.is_simple();
    let perfect = base.is_perfect();
    let unit = base.unit().cloned().or_else(|| base.detect_unit());
    let members = tower.basis_in_box(&window);

    let nonzero_box = !members.is_empty();
    let perfect_box = perfect_in_box(tower, &window);
    let unit_box = unit.as_ref().map(|u| tower.tower_membership(&LaurentElement::monomial(u.clone(), vec![0; n], order)));

    let status = |b: bool| if b { FlagStatus::DerivedByTheorem } else { FlagStatus::NotApplicable };
    let flag = |property, b: bool, v: Option<bool>| InheritedFlag { property, base: b, status: status(b), verified_in_box: v };
    let comm = base.is_commutative();
    let assoc = base.is_associative();
    let flags = vec![
        flag("nonzero", base.dim() >= 1, Some(nonzero_box)),
        flag("perfect", perfect, Some(perfect_box)),
        flag("pfgc", base.is_pfgc_findim(), None),
        flag("prime", simple, None),
        flag("unital", unit.is_some(), unit_box),
        flag("commutative", comm, None),
        flag("associative", assoc, None),
    ];
    let mut notes = vec!["finite generation over the centroid is automatic for finite-dimensional algebras over a field".to_string()];
    if simple {
        notes.push("base is simple, hence prime".into());
    } else {
        notes.push("primeness of the base is not decided (only simple => prime is used)".into());
    }
    if unit.is_some() && comm && assoc {
        notes.push(format!("Krull dimension of L equals that of the base plus {n}"));
    }
    InheritedFlags { flags, window, notes }
}

/// Every window member is a sum of products of members of the doubled window.
fn perfect_in_box(tower: &LoopTower, window: &DegreeBox) -> bool {
    let target = tower.basis_in_box(window);
    if target.is_empty() {
        return false;
    }
    let big = tower.basis_in_box(&window.scaled(2, 1));
    let dim = tower.base().dim();
    let key = |d: &Degree, c: usize, radius: &[i64]| -> usize {
        let mut k = 0usize;
        for (a, r) in d.iter().zip(radius) {
            k = k * (2 * *r as usize + 1) + (a + r) as usize;
        }
        k * dim + c
    };
    let radius: Vec<i64> = window.radius.iter().map(|r| 4 * r).collect();
    let flatten = |x: &LaurentElement| -> BTreeMap<usize, CycloNumber> {
        let mut row = BTreeMap::new();
        for (d, v) in x.terms() {
            for (c, a) in v.iter().enumerate() {
                if !a.is_zero() {
                    row.insert(key(d, c, &radius), a.clone());
                }
            }
        }
        row
    };
    let mut se = SparseEchelon::new(tower.order());
    for x in &big {
        for y in &big {
            if let Ok(p) = laurent_multiply(tower.base(), x, y) {
                if !p.is_zero() {
                    se.insert(flatten(&p));
                }
            }
        }
    }
    target.iter().all(|t| se.reduce(flatten(t)).is_empty())
}

