//! Absolute type: split simple Lie algebras by their Dynkin diagram,
//! central simple associative algebras by matrix size, and loop towers by
//! the type of their base.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactnum::CycloNumber;
use crate::factor::{factor_over_field, roots_in_field};
use crate::findim::StructureAlgebra;
use crate::linalg::{self, LinearMap, SparseEchelon, Subspace, Vector};
use crate::loops::LoopTower;
use crate::qpoly::{minpoly, Poly};

mod modp;

use modp::SplitFilter;

pub const DEFAULT_SEED: u64 = 0x7e57_cafe;
const SEARCH_TRIES: usize = 60;
const SEARCH_RESTARTS: usize = 8;
/// Random candidates per step of the Cartan search; most are discarded by
/// the modular test before any exact work.
const CARTAN_TRIES: usize = 400;
/// Exact eigenvalue computations allowed per step once a candidate has
/// passed the modular test.
const EXACT_CHECKS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TypingError {
    #[error("not a Lie algebra")]
    NotLie,
    #[error("not associative")]
    NotAssociative,
    #[error("not simple")]
    NotSimple,
    #[error("not central")]
    NotCentral,
    #[error("not split over the session field: {0}")]
    NotSplit(String),
    #[error("no split Cartan subalgebra found; supply cartan_hint")]
    NoCartan,
    #[error("cartan hint rejected: {0}")]
    BadHint(String),
    #[error("root data do not form a valid Cartan matrix: {0}")]
    InvalidRootSystem(String),
    #[error("no detector for this variety")]
    UnsupportedVariety,
    #[error("hypotheses not verified: {}", .0.join(", "))]
    Hypotheses(Vec<String>),
}

impl TypingError {
    /// Stable short code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            TypingError::NotLie => "not-lie",
            TypingError::NotAssociative => "not-associative",
            TypingError::NotSimple => "not-simple",
            TypingError::NotCentral => "not-central",
            TypingError::NotSplit(_) => "not-split",
            TypingError::NoCartan => "no-cartan",
            TypingError::BadHint(_) => "bad-hint",
            TypingError::InvalidRootSystem(_) => "invalid-root-system",
            TypingError::UnsupportedVariety => "unsupported-variety",
            TypingError::Hypotheses(_) => "hypotheses",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Variety {
    Lie,
    Associative,
    CommAssociative,
    Jordan,
    Alternative,
}

impl Variety {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variety::Lie => "Lie",
            Variety::Associative => "associative",
            Variety::CommAssociative => "commutative associative",
            Variety::Jordan => "Jordan",
            Variety::Alternative => "alternative",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Archetype {
    pub variety: Variety,
    pub label: String,
}

impl fmt::Display for Archetype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label, self.variety.as_str())
    }
}

/// One family of archetypes in the registry.
#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub variety: Variety,
    /// Label with `l` standing for the rank or size parameter.
    pub pattern: &'static str,
    pub min_param: usize,
    /// Whether a detector ships for this family.
    pub detectable: bool,
}

pub fn registry() -> Vec<RegistryEntry> {
    let e = |variety, pattern, min_param, detectable| RegistryEntry { variety, pattern, min_param, detectable };
    vec![
        e(Variety::Lie, "A_l", 1, true),
        e(Variety::Lie, "B_l", 2, true),
        e(Variety::Lie, "C_l", 3, true),
        e(Variety::Lie, "D_l", 4, true),
        e(Variety::Lie, "E_6", 0, true),
        e(Variety::Lie, "E_7", 0, true),
        e(Variety::Lie, "E_8", 0, true),
        e(Variety::Lie, "F_4", 0, true),
        e(Variety::Lie, "G_2", 0, true),
        e(Variety::Associative, "Mat_l", 1, true),
        e(Variety::CommAssociative, "Unit", 0, true),
        e(Variety::Jordan, "Sym_l", 3, false),
        e(Variety::Jordan, "Sp_2l", 3, false),
        e(Variety::Jordan, "Spin_l", 2, false),
        e(Variety::Jordan, "Alb", 0, false),
        e(Variety::Alternative, "Mat_1", 0, false),
        e(Variety::Alternative, "Zorn", 0, false),
    ]
}

/// Whether `label` names a member of a registered family of `variety`.
pub fn in_registry(variety: Variety, label: &str) -> bool {
    registry().iter().any(|r| {
        r.variety == variety
            && match r.pattern.strip_suffix('l') {
                None => r.pattern == label,
                Some(prefix) => label.strip_prefix(prefix).and_then(|p| p.parse::<usize>().ok()).is_some_and(|p| p >= r.min_param),
            }
    })
}

/// A split Cartan subalgebra with its roots and Cartan matrix.
#[derive(Debug, Clone)]
pub struct RootSystemData {
    pub cartan: Subspace,
    /// Values of each root on the echelon basis of `cartan`.
    pub roots: Vec<Vector>,
    pub simple_roots: Vec<usize>,
    /// `a_ij = alpha_j(h_i)` for the simple coroots `h_i`.
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Edges `(i, j, a_ij a_ji)` of the Dynkin diagram.
    pub diagram: Vec<(usize, usize, i64)>,
    pub label: String,
}

impl RootSystemData {
    pub fn rank(&self) -> usize {
        self.cartan.dim()
    }
}

fn split_eigenvalues(map: &LinearMap, seed: u64) -> Option<Vec<CycloNumber>> {
    let p = minpoly(map);
    if !p.is_squarefree() {
        return None;
    }
    let roots = roots_in_field(&p, seed);
    (roots.len() == p.degree().unwrap_or(0)).then_some(roots)
}

fn centralizer(alg: &StructureAlgebra, of: &[Vector]) -> Subspace {
    let mut space = Subspace::full(alg.dim(), alg.order());
    for h in of {
        space = space.intersect(&alg.left_mult(h).kernel());
    }
    space
}

fn check_cartan(alg: &StructureAlgebra, h: &Subspace, seed: u64) -> Result<(), TypingError> {
    let basis = h.basis();
    for a in basis {
        for b in basis {
            if !linalg::is_zero_vec(&alg.mul(a, b)) {
                return Err(TypingError::BadHint("not abelian".into()));
            }
        }
        if split_eigenvalues(&alg.left_mult(a), seed).is_none() {
            return Err(TypingError::BadHint("an element is not split semisimple".into()));
        }
    }
    if centralizer(alg, basis) != *h {
        return Err(TypingError::BadHint("not self-centralizing".into()));
    }
    Ok(())
}

/// Greedy search for a split Cartan subalgebra, restarted with a fresh
/// random stream when an early pick leads to a dead end.
fn find_cartan(alg: &StructureAlgebra, seed: u64) -> Result<Subspace, TypingError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let filter = SplitFilter::new(alg);
    for attempt in 0..SEARCH_RESTARTS {
        if let Ok(h) = grow_cartan(alg, seed, &filter, attempt > 0, &mut rng) {
            return Ok(h);
        }
    }
    Err(TypingError::NoCartan)
}

/// Grows a commuting family of split semisimple elements taken from the
/// current centralizer until it spans its own centralizer.
fn grow_cartan(alg: &StructureAlgebra, seed: u64, filter: &SplitFilter, shuffle: bool, rng: &mut ChaCha8Rng) -> Result<Subspace, TypingError> {
    let order = alg.order();
    let n = alg.dim();
    let mut family: Vec<Vector> = Vec::new();
    let mut z = Subspace::full(n, order);
    loop {
        let span = Subspace::new(n, order, family.clone());
        if z == span {
            return Ok(span);
        }
        let zb = z.basis().to_vec();
        let mut candidates: Vec<Vector> = zb.clone();
        for i in 0..zb.len() {
            for j in i + 1..zb.len() {
                candidates.push(linalg::vec_add(&zb[i], &zb[j]));
                candidates.push(linalg::vec_sub(&zb[i], &zb[j]));
            }
        }
        for _ in 0..CARTAN_TRIES {
            let mut v = linalg::zero_vec(order, n);
            for b in &zb {
                let c = CycloNumber::from_int(order, rng.gen_range(-3i64..=3));
                linalg::axpy(&mut v, &c, b);
            }
            candidates.push(v);
        }
        if shuffle {
            candidates.shuffle(rng);
        }
        let mut exact = 0;
        let pick = candidates
            .into_iter()
            .filter(|h| !span.contains(h) && filter.may_split(h))
            .take_while(|_| {
                exact += 1;
                exact <= EXACT_CHECKS
            })
            .find(|h| split_eigenvalues(&alg.left_mult(h), seed).is_some());
        let Some(h) = pick else {
            return Err(TypingError::NoCartan);
        };
        z = z.intersect(&alg.left_mult(&h).kernel());
        family.push(h);
    }
}

fn require_simple_lie(alg: &StructureAlgebra) -> Result<(), TypingError> {
    if !alg.is_lie() {
        return Err(TypingError::NotLie);
    }
    if !alg.is_simple() {
        return Err(TypingError::NotSimple);
    }
    Ok(())
}

/// Root system of a split simple Lie algebra relative to `cartan_hint` or
/// to a Cartan subalgebra found by search.
pub fn lie_root_system(alg: &StructureAlgebra, cartan_hint: Option<&Subspace>, seed: u64) -> Result<RootSystemData, TypingError> {
    require_simple_lie(alg)?;
    let order = alg.order();
    let n = alg.dim();
    let cartan = match cartan_hint {
        Some(h) => {
            check_cartan(alg, h, seed)?;
            h.clone()
        }
        None => find_cartan(alg, seed)?,
    };
    let hb = cartan.basis().to_vec();
    let r = hb.len();

    // joint eigenspaces of ad h_1, ..., ad h_r
    let mut spaces: Vec<(Vector, Subspace)> = vec![(Vec::new(), Subspace::full(n, order))];
    for h in &hb {
        let ad = alg.left_mult(h);
        let eig = split_eigenvalues(&ad, seed).ok_or_else(|| TypingError::NotSplit("Cartan element not split".into()))?;
        let mut next = Vec::new();
        for (w, s) in &spaces {
            for lam in &eig {
                let part = s.intersect(&ad.sub(&LinearMap::scalar(lam, n)).kernel());
                if part.dim() > 0 {
                    let mut w2 = w.clone();
                    w2.push(lam.clone());
                    next.push((w2, part));
                }
            }
        }
        spaces = next;
    }
    let mut roots = Vec::new();
    let mut root_vectors = Vec::new();
    for (w, s) in &spaces {
        if w.iter().all(|x| x.is_zero()) {
            if s.dim() != r {
                return Err(TypingError::InvalidRootSystem("zero weight space is larger than the Cartan subalgebra".into()));
            }
        } else {
            if s.dim() != 1 {
                return Err(TypingError::InvalidRootSystem("root space of dimension > 1".into()));
            }
            roots.push(w.clone());
            root_vectors.push(s.basis()[0].clone());
        }
    }
    if roots.iter().any(|a| !roots.contains(&a.iter().map(|x| -x).collect::<Vec<_>>())) {
        return Err(TypingError::InvalidRootSystem("roots do not come in pairs".into()));
    }

    // rational coordinates relative to r independent roots give an order
    let mut se = SparseEchelon::new(order);
    let mut chosen = Vec::new();
    for a in &roots {
        if se.insert_dense(a) {
            chosen.push(a.clone());
        }
    }
    if chosen.len() != r {
        return Err(TypingError::InvalidRootSystem("roots do not span the dual of the Cartan subalgebra".into()));
    }
    let bmat = LinearMap::from_columns(&chosen, r).inverse().map_err(|_| TypingError::InvalidRootSystem("singular".into()))?;
    let mut coords = Vec::new();
    for a in &roots {
        let c = bmat.apply(a);
        let q: Option<Vec<_>> = c.iter().map(|x| x.as_rational().cloned()).collect();
        coords.push(q.ok_or_else(|| TypingError::InvalidRootSystem("root coordinates are not rational".into()))?);
    }
    let positive: Vec<usize> = (0..roots.len()).filter(|&i| coords[i].iter().find(|x| !num_traits::Zero::is_zero(*x)).is_some_and(|x| num_traits::Signed::is_positive(x))).collect();
    let simple: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&i| {
            !positive.iter().any(|&j| {
                positive.iter().any(|&k| roots[j].iter().zip(&roots[k]).map(|(a, b)| a + b).collect::<Vec<_>>() == roots[i])
            })
        })
        .collect();
    if simple.len() != r {
        return Err(TypingError::InvalidRootSystem(format!("{} simple roots for rank {r}", simple.len())));
    }

    // coroots h_i = 2 [e_i, f_i] / alpha_i([e_i, f_i])
    let eval = |alpha: &Vector, t: &Vector| -> CycloNumber { alpha.iter().zip(t).fold(CycloNumber::zero(order), |acc, (a, b)| &acc + &(a * b)) };
    let mut coroots = Vec::new();
    for &i in &simple {
        let neg: Vector = roots[i].iter().map(|x| -x).collect();
        let j = roots.iter().position(|a| *a == neg).expect("paired");
        let t = alg.mul(&root_vectors[i], &root_vectors[j]);
        let tc = cartan.coordinates(&t).ok_or_else(|| TypingError::InvalidRootSystem("[e, f] outside the Cartan subalgebra".into()))?;
        let val = eval(&roots[i], &tc);
        let s = CycloNumber::from_int(order, 2).checked_div(&val).map_err(|_| TypingError::InvalidRootSystem("degenerate coroot".into()))?;
        coroots.push(linalg::vec_scale(&tc, &s));
    }
    let mut cartan_matrix = vec![vec![0i64; r]; r];
    for (a, hi) in coroots.iter().enumerate() {
        for (b, &j) in simple.iter().enumerate() {
            let v = eval(&roots[j], hi);
            let q = v.as_rational().filter(|q| q.is_integer()).ok_or_else(|| TypingError::InvalidRootSystem("non-integral Cartan entry".into()))?;
            cartan_matrix[a][b] = num_traits::ToPrimitive::to_i64(&q.to_integer()).expect("small");
        }
    }
    let (label, diagram) = classify_cartan_matrix(&cartan_matrix)?;
    Ok(RootSystemData { cartan, roots, simple_roots: simple, cartan_matrix, diagram, label })
}

pub fn lie_split_type(alg: &StructureAlgebra, cartan_hint: Option<&Subspace>) -> Result<Archetype, TypingError> {
    lie_split_type_with_seed(alg, cartan_hint, DEFAULT_SEED)
}

pub fn lie_split_type_with_seed(alg: &StructureAlgebra, cartan_hint: Option<&Subspace>, seed: u64) -> Result<Archetype, TypingError> {
    let rs = lie_root_system(alg, cartan_hint, seed)?;
    Ok(Archetype { variety: Variety::Lie, label: rs.label })
}

/// Names the Dynkin diagram of an indecomposable Cartan matrix, using
/// `a_ij = alpha_j(h_i)`; `|a_ij| > 1` means `alpha_j` is the longer root.
pub fn classify_cartan_matrix(a: &[Vec<i64>]) -> Result<(String, Vec<(usize, usize, i64)>), TypingError> {
    let r = a.len();
    let bad = |m: &str| Err(TypingError::InvalidRootSystem(m.to_string()));
    let mut edges = Vec::new();
    for i in 0..r {
        if a[i].len() != r || a[i][i] != 2 {
            return bad("diagonal entries must be 2");
        }
        for j in 0..r {
            if i == j {
                continue;
            }
            if a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0) {
                return bad("off-diagonal sign pattern");
            }
            let p = a[i][j] * a[j][i];
            if p > 3 {
                return bad("bond of multiplicity above 3");
            }
            if i < j && p > 0 {
                edges.push((i, j, p));
            }
        }
    }
    // connected tree
    let mut comp: Vec<usize> = (0..r).collect();
    fn root(c: &mut [usize], i: usize) -> usize {
        if c[i] == i {
            i
        } else {
            let k = root(c, c[i]);
            c[i] = k;
            k
        }
    }
    for &(i, j, _) in &edges {
        let (x, y) = (root(&mut comp, i), root(&mut comp, j));
        comp[x] = y;
    }
    let r0 = root(&mut comp, 0);
    if (0..r).any(|i| root(&mut comp, i) != r0) {
        return bad("diagram is not connected");
    }
    if edges.len() != r - 1 {
        return bad("diagram has a cycle");
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); r];
    for &(i, j, _) in &edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let label = if r == 1 {
        "A_1".to_string()
    } else if let Some(&(i, j, p)) = edges.iter().find(|e| e.2 > 1) {
        let multi = edges.iter().filter(|e| e.2 > 1).count();
        if multi > 1 || adj.iter().any(|n| n.len() > 2) {
            return bad("no matching diagram");
        }
        if p == 3 {
            if r != 2 {
                return bad("triple bond outside rank 2");
            }
            "G_2".to_string()
        } else if r == 2 {
            "B_2".to_string()
        } else {
            let end_i = adj[i].len() == 1;
            let end_j = adj[j].len() == 1;
            if !end_i && !end_j {
                if r != 4 {
                    return bad("inner double bond outside rank 4");
                }
                "F_4".to_string()
            } else {
                // the end node of the double bond and its neighbour
                let (end, inner) = if end_i { (i, j) } else { (j, i) };
                // a_(end, inner) = -2 means inner is longer, so end is short
                if a[end][inner] == -2 {
                    format!("B_{r}")
                } else {
                    format!("C_{r}")
                }
            }
        }
    } else {
        let branches: Vec<usize> = (0..r).filter(|&i| adj[i].len() == 3).collect();
        match branches.len() {
            0 => format!("A_{r}"),
            1 => {
                let c = branches[0];
                let mut arms: Vec<usize> = adj[c]
                    .iter()
                    .map(|&start| {
                        let (mut prev, mut cur, mut len) = (c, start, 1);
                        while let Some(&nx) = adj[cur].iter().find(|&&x| x != prev) {
                            prev = cur;
                            cur = nx;
                            len += 1;
                        }
                        len
                    })
                    .collect();
                arms.sort_unstable();
                match arms.as_slice() {
                    [1, 1, k] => format!("D_{}", k + 3),
                    [1, 2, 2] => "E_6".into(),
                    [1, 2, 3] => "E_7".into(),
                    [1, 2, 4] => "E_8".into(),
                    _ => return bad("no matching diagram"),
                }
            }
            _ => return bad("more than one branch node"),
        }
    };
    Ok((label, edges))
}

/// Evaluates `p` at `a` inside the corner with unit `e`.
fn eval_in_algebra(alg: &StructureAlgebra, p: &Poly, a: &[CycloNumber], e: &[CycloNumber]) -> Vector {
    let mut acc = linalg::zero_vec(alg.order(), alg.dim());
    for c in p.coeffs().iter().rev() {
        acc = alg.mul(&acc, a);
        linalg::axpy(&mut acc, c, e);
    }
    acc
}

/// Minimal polynomial of `a` in a unital subalgebra with unit `e`.
fn element_minpoly(alg: &StructureAlgebra, a: &[CycloNumber], e: &[CycloNumber]) -> Poly {
    let order = alg.order();
    let mut powers: Vec<Vector> = vec![e.to_vec()];
    loop {
        let next = alg.mul(powers.last().unwrap(), a);
        let k = powers.len();
        let mut cols = powers.clone();
        cols.push(next.clone());
        let m = LinearMap::from_columns(&cols, alg.dim());
        let ker = m.kernel();
        if ker.dim() > 0 {
            let v = &ker.basis()[0];
            let lead = v[k].clone();
            return Poly::new(order, v.iter().map(|x| x.checked_div(&lead).expect("monic")).collect());
        }
        powers.push(next);
    }
}

fn xgcd(f: &Poly, g: &Poly) -> (Poly, Poly, Poly) {
    let order = f.order();
    let (mut r0, mut r1) = (f.clone(), g.clone());
    let (mut s0, mut s1) = (Poly::one(order), Poly::zero(order));
    let (mut t0, mut t1) = (Poly::zero(order), Poly::one(order));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s2 = s0.sub(&q.mul(&s1));
        let t2 = t0.sub(&q.mul(&t1));
        (r0, r1, s0, s1, t0, t1) = (r1, r, s1, s2, t1, t2);
    }
    (r0, s0, t0)
}

/// Certificate that a central simple algebra of dimension `l^2` is a full
/// matrix algebra: a primitive idempotent `e` with `eAe = k` and `dim Ae = l`.
#[derive(Debug, Clone)]
pub struct SplitCertificate {
    pub idempotent: Vector,
    pub left_ideal_dim: usize,
}

/// Searches for a primitive idempotent by splitting minimal polynomials of
/// elements of successive corners `eAe`.
pub fn split_certificate(alg: &StructureAlgebra, seed: u64) -> Option<SplitCertificate> {
    let order = alg.order();
    let n = alg.dim();
    let mut e = alg.unit()?.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let corner = Subspace::new(n, order, (0..n).map(|i| alg.mul(&alg.mul(&e, &alg.basis_vector(i)), &e)).collect());
        if corner.dim() == 1 {
            let left = Subspace::new(n, order, (0..n).map(|i| alg.mul(&alg.basis_vector(i), &e)).collect());
            return Some(SplitCertificate { idempotent: e, left_ideal_dim: left.dim() });
        }
        let cb = corner.basis().to_vec();
        let mut candidates = cb.clone();
        for i in 0..cb.len() {
            for j in i + 1..cb.len() {
                candidates.push(linalg::vec_add(&cb[i], &cb[j]));
            }
        }
        for _ in 0..SEARCH_TRIES {
            let mut v = linalg::zero_vec(order, n);
            for b in &cb {
                linalg::axpy(&mut v, &CycloNumber::from_int(order, rng.gen_range(-3i64..=3)), b);
            }
            candidates.push(v);
        }
        let mut next = None;
        for a in candidates {
            let p = element_minpoly(alg, &a, &e);
            let factors = factor_over_field(&p, seed);
            if factors.len() < 2 {
                continue;
            }
            // p = f^k g with f coprime to g
            let f = &factors[0];
            let mut fk = f.clone();
            while fk.mul(f).divides(&p) {
                fk = fk.mul(f);
            }
            let g = p.div_exact(&fk);
            let (_, s, _) = xgcd(&fk, &g);
            let idem = eval_in_algebra(alg, &s.mul(&fk), &a, &e);
            let dim_of = |x: &Vector| Subspace::new(n, order, (0..n).map(|i| alg.mul(&alg.mul(x, &alg.basis_vector(i)), x)).collect()).dim();
            let other = linalg::vec_sub(&e, &idem);
            next = Some(if dim_of(&idem) <= dim_of(&other) { idem } else { other });
            break;
        }
        e = next?;
    }
}

/// Matrix type of a central simple associative algebra, certified split.
pub fn associative_type(alg: &StructureAlgebra) -> Result<Archetype, TypingError> {
    associative_type_with_seed(alg, DEFAULT_SEED)
}

pub fn associative_type_with_seed(alg: &StructureAlgebra, seed: u64) -> Result<Archetype, TypingError> {
    if !alg.is_associative() {
        return Err(TypingError::NotAssociative);
    }
    if !alg.is_simple() {
        return Err(TypingError::NotSimple);
    }
    if !alg.is_central() {
        return Err(TypingError::NotCentral);
    }
    let n = alg.dim();
    let l = (1..=n).find(|l| l * l >= n).unwrap_or(1);
    if l * l != n {
        return Err(TypingError::NotSplit(format!("dimension {n} is not a square")));
    }
    match split_certificate(alg, seed) {
        Some(c) if c.left_ideal_dim == l => Ok(Archetype { variety: Variety::Associative, label: format!("Mat_{l}") }),
        _ => Err(TypingError::NotSplit("central simple, not split".into())),
    }
}

/// Type of a central simple commutative associative algebra, which is the
/// base field itself.
pub fn commutative_type(alg: &StructureAlgebra) -> Result<Archetype, TypingError> {
    if !alg.is_associative() {
        return Err(TypingError::NotAssociative);
    }
    if !alg.is_simple() {
        return Err(TypingError::NotSimple);
    }
    if alg.dim() != 1 {
        return Err(TypingError::NotCentral);
    }
    Ok(Archetype { variety: Variety::CommAssociative, label: "Unit".into() })
}

/// Type of an algebra in whichever shipped variety it belongs to.
pub fn algebra_type(alg: &StructureAlgebra, cartan_hint: Option<&Subspace>) -> Result<Archetype, TypingError> {
    algebra_type_with_seed(alg, cartan_hint, DEFAULT_SEED)
}

/// As [`algebra_type`], with an explicit seed for the randomized searches.
pub fn algebra_type_with_seed(alg: &StructureAlgebra, cartan_hint: Option<&Subspace>, seed: u64) -> Result<Archetype, TypingError> {
    if alg.is_lie() && !alg.is_commutative() {
        lie_split_type_with_seed(alg, cartan_hint, seed)
    } else if alg.is_associative() && alg.is_commutative() {
        commutative_type(alg)
    } else if alg.is_associative() {
        associative_type_with_seed(alg, seed)
    } else {
        Err(TypingError::UnsupportedVariety)
    }
}

#[derive(Debug, Clone)]
pub struct TowerType {
    pub archetype: Archetype,
    /// Number of loop steps, the second isomorphism invariant.
    pub steps: usize,
    pub provenance: &'static str,
    pub verified: BTreeMap<&'static str, bool>,
}

pub const PERMANENCE: &str = "by permanence of type from the base";

/// The type of `L` read off from its base, after verifying that the base
/// is nonzero, perfect, prime and finitely generated over its centroid.
pub fn tower_type(tower: &LoopTower, cartan_hint: Option<&Subspace>) -> Result<TowerType, TypingError> {
    tower_type_with_seed(tower, cartan_hint, DEFAULT_SEED)
}

pub fn tower_type_with_seed(tower: &LoopTower, cartan_hint: Option<&Subspace>, seed: u64) -> Result<TowerType, TypingError> {
    let base = tower.base();
    let simple = base.is_simple();
    let mut verified = BTreeMap::new();
    verified.insert("nonzero", base.dim() > 0);
    verified.insert("perfect", base.is_perfect());
    verified.insert("prime", simple);
    verified.insert("pfgc", base.is_pfgc_findim());
    let missing: Vec<String> = verified.iter().filter(|(_, ok)| !**ok).map(|(k, _)| k.to_string()).collect();
    if !missing.is_empty() {
        return Err(TypingError::Hypotheses(missing));
    }
    let archetype = algebra_type_with_seed(base, cartan_hint, seed)?;
    Ok(TowerType { archetype, steps: tower.steps(), provenance: PERMANENCE, verified })
}
