use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::CycloNumber;
use crate::factor::roots_in_field;
use crate::fixtures::ground_field;
use crate::linalg::SparseEchelon;
use crate::loops::{laurent_multiply, Degree, DegreeBox, LaurentElement, LoopError, LoopTower};
use crate::qpoly::Poly;

use super::{require_central_simple, stabilizer_in_box, stabilizes, CentroidData};

/// Label attached to the strange-ring isomorphism criterion, which is
/// quoted from the literature without a proof.
pub const ADVISORY_LABEL: &str = "stated without proof in the source; advisory only";

const NORM_SEED: u64 = 0x5eed_8e1f;
const NORM_SAMPLES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    First,
    Second,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::First => "First",
            Kind::Second => "Second",
        }
    }
}

/// `k[u1, u2^±1, w]` with `w^2 = (u1^2 - 4 rho) u2`, realized inside the
/// Laurent ring in two variables.
#[derive(Debug, Clone, PartialEq)]
pub struct StrangeRingData {
    pub rho: CycloNumber,
    pub u1: LaurentElement,
    pub u2: LaurentElement,
    pub u2_inv: LaurentElement,
    pub w: LaurentElement,
}

#[derive(Debug, Clone)]
pub enum KindWitness {
    /// Monomials `t1, t2` with the centroid equal to `k[t1^±1, t2^±1]`.
    Laurent { t1: LaurentElement, t2: LaurentElement },
    Strange(StrangeRingData),
}

#[derive(Debug, Clone)]
pub struct KindVerdict {
    pub kind: Kind,
    pub witness: KindWitness,
    /// The scalar with `sigma_2(y1) = rho y1` or `rho y1^-1`, `y1 = z1^(m1)`.
    pub rho: CycloNumber,
    /// `(j, whether z1^(m1) z2^j stabilizes L)` for `0 <= j < m2`.
    pub monomial_tests: Vec<(i64, bool)>,
    pub verified_box: DegreeBox,
    pub notes: Vec<String>,
}

impl KindVerdict {
    pub fn witness_strings(&self) -> Vec<String> {
        let one = vec!["1".to_string()];
        match &self.witness {
            KindWitness::Laurent { t1, t2 } => vec![t1.render(&one), t2.render(&one)],
            KindWitness::Strange(d) => vec![d.u1.render(&one), d.u2.render(&one), d.u2_inv.render(&one), d.w.render(&one)],
        }
    }
}

fn scalar_monomial(order: u64, c: CycloNumber, d: Degree) -> LaurentElement {
    LaurentElement::monomial(vec![c], d, order)
}

/// Decides whether a two-step tower over a central simple algebra has a
/// Laurent centroid (first kind) or a strange-ring centroid (second kind)
/// and builds the corresponding generators.
pub fn kind_classify(tower: &LoopTower) -> Result<KindVerdict, LoopError> {
    if tower.steps() != 2 {
        return Err(LoopError::Hypothesis(format!("kind classification needs two steps, got {}", tower.steps())));
    }
    require_central_simple(tower.base())?;
    let order = tower.order();
    let m = tower.moduli();
    let (m1, m2) = (m[0] as i64, m[1] as i64);
    let window = DegreeBox::new(vec![2 * m1, 2 * m2]);
    let test = tower.basis_in_box(&window);
    let cd = CentroidData::of(tower.base());
    let one = CycloNumber::one(order);

    let monomial_tests: Vec<(i64, bool)> =
        (0..m2).map(|j| (j, stabilizes(tower, &cd, &scalar_monomial(order, one.clone(), vec![m1, j]), &test))).collect();
    let first = monomial_tests.iter().any(|(_, ok)| *ok);

    let stage2 = &tower.stages()[1];
    let sign = stage2.twist.monomial()[0][0];
    let rho = stage2.twist.character()[0].pow(m1)?;
    if first != (sign == 1) {
        return Err(LoopError::Hypothesis("monomial test disagrees with the second twist".into()));
    }
    let mut notes = Vec::new();
    let witness = if first {
        let n2 = rho.root_of_unity_order().ok_or_else(|| LoopError::Hypothesis(format!("{rho} is not a root of unity")))? as i64;
        let p2 = m2 / n2;
        let zeta = &stage2.zeta;
        let r = (0..n2).find(|&r| zeta.pow(p2 * r).map(|z| z == rho).unwrap_or(false)).ok_or_else(|| LoopError::Hypothesis("rho is not a power of zeta".into()))?;
        let s = (0..n2).find(|&s| (r * s).rem_euclid(n2) == 1 % n2).unwrap_or(0);
        notes.push("centroid is a Laurent ring in 2 variables, Krull dimension 2".into());
        KindWitness::Laurent {
            t1: scalar_monomial(order, one.clone(), vec![m1 * n2, 0]),
            t2: scalar_monomial(order, one.clone(), vec![m1 * s, p2]),
        }
    } else {
        let p2 = m2 / 2;
        let y1 = scalar_monomial(order, one.clone(), vec![m1, 0]);
        let y1_inv_rho = scalar_monomial(order, rho.clone(), vec![-m1, 0]);
        let y2 = scalar_monomial(order, one.clone(), vec![0, p2]);
        let k = ground_field(order);
        let w = laurent_multiply(&k, &y1.sub(&y1_inv_rho), &y2)?;
        notes.push("centroid is a strange ring, Krull dimension 2".into());
        KindWitness::Strange(StrangeRingData {
            rho: rho.clone(),
            u1: y1.add(&y1_inv_rho),
            u2: scalar_monomial(order, one.clone(), vec![0, 2 * p2]),
            u2_inv: scalar_monomial(order, one.clone(), vec![0, -2 * p2]),
            w,
        })
    };
    Ok(KindVerdict { kind: if first { Kind::First } else { Kind::Second }, witness, rho, monomial_tests, verified_box: window, notes })
}

/// Checks a verdict's generators against the tower: they and their
/// inverses stabilize `L` on the kind window, first-kind monomials span the
/// stabilizer window, and second-kind data satisfy their relation.
pub fn verify_witness(tower: &LoopTower, verdict: &KindVerdict) -> Vec<String> {
    let mut failures = Vec::new();
    let cd = CentroidData::of(tower.base());
    let test = tower.basis_in_box(&verdict.verified_box);
    let order = tower.order();
    let one = vec!["1".to_string()];
    let check = |u: &LaurentElement, failures: &mut Vec<String>| {
        if !stabilizes(tower, &cd, u, &test) {
            failures.push(format!("{} does not stabilize L", u.render(&one)));
        }
    };
    match &verdict.witness {
        KindWitness::Laurent { t1, t2 } => {
            let d1 = t1.support().next().cloned().unwrap_or_default();
            let d2 = t2.support().next().cloned().unwrap_or_default();
            for d in [&d1, &d2] {
                for sgn in [1, -1] {
                    check(&scalar_monomial(order, CycloNumber::one(order), d.iter().map(|e| sgn * e).collect()), &mut failures);
                }
            }
            // lattice spanned by the two exponents, tested on the stabilizer window
            let stab = stabilizer_in_box(tower, &verdict.verified_box);
            let in_lattice = |d: &[i64]| d2[1] != 0 && d[1] % d2[1] == 0 && (d[0] - d2[0] * (d[1] / d2[1])) % d1[0] == 0;
            let expected = verdict.verified_box.degrees().into_iter().filter(|d| in_lattice(d)).count();
            if stab.dim() != expected {
                failures.push(format!("stabilizer window has dimension {}, monomials in t1, t2 give {expected}", stab.dim()));
            }
            for u in &stab.elements {
                if u.support().any(|d| !in_lattice(d)) {
                    failures.push(format!("{} is not a combination of monomials in t1, t2", u.render(&one)));
                }
            }
        }
        KindWitness::Strange(data) => {
            for u in [&data.u1, &data.u2, &data.u2_inv, &data.w] {
                check(u, &mut failures);
            }
            if let Err(e) = strange_relation(data) {
                failures.push(e.to_string());
            }
        }
    }
    failures
}

fn strange_relation(d: &StrangeRingData) -> Result<(), LoopError> {
    let k = ground_field(d.rho.order());
    let order = d.rho.order();
    let w2 = laurent_multiply(&k, &d.w, &d.w)?;
    let u1sq = laurent_multiply(&k, &d.u1, &d.u1)?;
    let four_rho = LaurentElement::monomial(vec![&d.rho * &CycloNumber::from_int(order, 4)], vec![0, 0], order);
    let rhs = laurent_multiply(&k, &u1sq.sub(&four_rho), &d.u2)?;
    if w2 != rhs {
        return Err(LoopError::Hypothesis("w^2 = (u1^2 - 4 rho) u2 fails".into()));
    }
    let unit = laurent_multiply(&k, &d.u2, &d.u2_inv)?;
    if unit != LaurentElement::monomial(vec![CycloNumber::one(order)], vec![0, 0], order) {
        return Err(LoopError::Hypothesis("u2 u2^-1 is not 1".into()));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct StrangeAuditReport {
    pub rho: CycloNumber,
    pub relation_holds: bool,
    pub degree_bound: i64,
    pub independent: usize,
    pub expected_independent: usize,
    pub norm_samples: usize,
    pub failures: Vec<String>,
}

impl StrangeAuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.relation_holds && self.independent == self.expected_independent
    }
}

/// Relation, window independence of `u1^a u2^b w^c` and multiplicativity
/// of `N(a1 + a2 w) = a1^2 - a2^2 w^2` on seeded random samples.
pub fn strange_ring_audit(d: &StrangeRingData, degree_bound: i64) -> Result<StrangeAuditReport, LoopError> {
    strange_ring_audit_with_seed(d, degree_bound, NORM_SEED)
}

pub fn strange_ring_audit_with_seed(d: &StrangeRingData, degree_bound: i64, seed: u64) -> Result<StrangeAuditReport, LoopError> {
    strange_relation(d)?;
    let order = d.rho.order();
    let k = ground_field(order);
    let mul = |a: &LaurentElement, b: &LaurentElement| laurent_multiply(&k, a, b);
    let one = LaurentElement::monomial(vec![CycloNumber::one(order)], vec![0, 0], order);
    let power = |x: &LaurentElement, inv: &LaurentElement, e: i64| -> Result<LaurentElement, LoopError> {
        let base = if e < 0 { inv } else { x };
        (0..e.abs()).try_fold(one.clone(), |acc, _| mul(&acc, base))
    };

    let mut se = SparseEchelon::new(order);
    let mut pos: HashMap<Degree, usize> = HashMap::new();
    for a in 0..=degree_bound {
        let ua = power(&d.u1, &d.u1, a)?;
        for b in -degree_bound..=degree_bound {
            let uab = mul(&ua, &power(&d.u2, &d.u2_inv, b)?)?;
            for c in 0..2 {
                let e = if c == 1 { mul(&uab, &d.w)? } else { uab.clone() };
                let row = e
                    .terms()
                    .iter()
                    .map(|(deg, v)| {
                        let next = pos.len();
                        (*pos.entry(deg.clone()).or_insert(next), v[0].clone())
                    })
                    .collect();
                se.insert(row);
            }
        }
    }

    let big_w = mul(&d.w, &d.w)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_coeff = |rng: &mut ChaCha8Rng| -> Result<LaurentElement, LoopError> {
        let mut acc = LaurentElement::zero(2, 1, order);
        for a in 0..2 {
            for b in -1..=1 {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    let t = mul(&power(&d.u1, &d.u1, a)?, &power(&d.u2, &d.u2_inv, b)?)?;
                    acc = acc.add(&t.scale(&CycloNumber::from_int(order, c)));
                }
            }
        }
        Ok(acc)
    };
    let norm = |a1: &LaurentElement, a2: &LaurentElement| -> Result<LaurentElement, LoopError> {
        Ok(mul(a1, a1)?.sub(&mul(&mul(a2, a2)?, &big_w)?))
    };
    let mut failures = Vec::new();
    for s in 0..NORM_SAMPLES {
        let (a1, a2, b1, b2) = (random_coeff(&mut rng)?, random_coeff(&mut rng)?, random_coeff(&mut rng)?, random_coeff(&mut rng)?);
        let c1 = mul(&a1, &b1)?.add(&mul(&mul(&a2, &b2)?, &big_w)?);
        let c2 = mul(&a1, &b2)?.add(&mul(&a2, &b1)?);
        let x = a1.add(&mul(&a2, &d.w)?);
        let y = b1.add(&mul(&b2, &d.w)?);
        if mul(&x, &y)? != c1.add(&mul(&c2, &d.w)?) {
            failures.push(format!("sample {s}: product does not match its normal form"));
        }
        if norm(&c1, &c2)? != mul(&norm(&a1, &a2)?, &norm(&b1, &b2)?)? {
            failures.push(format!("sample {s}: norm is not multiplicative"));
        }
    }
    let expected = (2 * (degree_bound + 1) * (2 * degree_bound + 1)) as usize;
    Ok(StrangeAuditReport {
        rho: d.rho.clone(),
        relation_holds: true,
        degree_bound,
        independent: se.rank(),
        expected_independent: expected,
        norm_samples: NORM_SAMPLES,
        failures,
    })
}

#[derive(Debug, Clone)]
pub struct StrangeRingAdvisory {
    /// Whether `rho' / rho` is a square in the field.
    pub isomorphic: bool,
    pub label: &'static str,
}

/// Advisory answer to whether the strange rings for `rho` and `rho2` are
/// isomorphic, via the criterion "`rho2 / rho` is a square".
pub fn strange_ring_isomorphism_advisory(rho: &CycloNumber, rho2: &CycloNumber) -> Result<StrangeRingAdvisory, LoopError> {
    let q = rho2.checked_div(rho)?;
    let order = q.order();
    let f = Poly::new(order, vec![-&q, CycloNumber::zero(order), CycloNumber::one(order)]);
    Ok(StrangeRingAdvisory { isomorphic: !roots_in_field(&f, NORM_SEED).is_empty(), label: ADVISORY_LABEL })
}
