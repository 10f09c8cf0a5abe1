//! Builds declared objects and executes checks, producing one JSON report.

use crate::syntax::*;
use loomalg_core::centroid_loop::{
    kind_classify, multiloop_centroid_check, psi_check, stabilizer_in_box, strange_ring_audit_with_seed, untwist_check, verify_witness, Kind,
    KindWitness,
};
use loomalg_core::exactnum::{primitive_root, CycloNumber};
use loomalg_core::findim::StructureAlgebra;
use loomalg_core::fixtures;
use loomalg_core::grading::{exact_period, grading_from_auto, validate_grading, FiniteOrderAuto, ModGrading};
use loomalg_core::linalg::{unit_vec, zero_vec, LinearMap, Subspace, Vector};
use loomalg_core::loops::{canonical_form, inherited_flags, monomial_string, multiloop, DegreeBox, LaurentElement, LoopTower, ToralMonomialAuto};
use loomalg_core::typing::{algebra_type_with_seed, tower_type_with_seed, DEFAULT_SEED};
use serde_json::{json, Map, Value};
use std::collections::HashMap;

pub const SCHEMA_VERSION: u64 = 1;

/// Longest automorphism period searched for declared maps.
const PERIOD_LIMIT: u64 = 720;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub window: Option<Vec<i64>>,
    pub fail_fast: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: DEFAULT_SEED, window: None, fail_fast: false }
    }
}

enum Object {
    Algebra(StructureAlgebra),
    Auto { alg: String, auto: FiniteOrderAuto },
    Grading { alg: String, grading: ModGrading, zeta: Option<CycloNumber> },
    Tower(LoopTower),
}

struct Env {
    order: u64,
    objects: HashMap<String, Object>,
    failed: HashMap<String, String>,
}

type Outcome<T> = Result<T, String>;

impl Env {
    fn get(&self, name: &str) -> Outcome<&Object> {
        match (self.objects.get(name), self.failed.get(name)) {
            (Some(o), _) => Ok(o),
            (None, Some(e)) => Err(format!("`{name}` failed to build: {e}")),
            (None, None) => Err(format!("`{name}` is not declared")),
        }
    }

    fn algebra(&self, name: &str) -> Outcome<&StructureAlgebra> {
        match self.get(name)? {
            Object::Algebra(a) => Ok(a),
            _ => Err(format!("`{name}` is not an algebra")),
        }
    }

    fn tower(&self, name: &str) -> Outcome<&LoopTower> {
        match self.get(name)? {
            Object::Tower(t) => Ok(t),
            _ => Err(format!("`{name}` is not a tower")),
        }
    }

    fn auto(&self, name: &str, alg: &str) -> Outcome<&FiniteOrderAuto> {
        match self.get(name)? {
            Object::Auto { alg: a, auto } if a == alg => Ok(auto),
            Object::Auto { alg: a, .. } => Err(format!("`{name}` acts on `{a}`, not `{alg}`")),
            _ => Err(format!("`{name}` is not an automorphism")),
        }
    }

    fn scalar(&self, s: &Scalar) -> Outcome<CycloNumber> {
        let n = self.order;
        Ok(match s {
            Scalar::Int(k) => CycloNumber::from_int(n, *k),
            Scalar::Zeta => CycloNumber::zeta(n),
            Scalar::Root(m, _) => primitive_root(*m, n).map_err(|e| e.to_string())?,
            Scalar::Neg(a) => -self.scalar(a)?,
            Scalar::Add(a, b) => self.scalar(a)? + self.scalar(b)?,
            Scalar::Sub(a, b) => self.scalar(a)? - self.scalar(b)?,
            Scalar::Mul(a, b) => self.scalar(a)? * self.scalar(b)?,
            Scalar::Div(a, b) => self.scalar(a)?.checked_div(&self.scalar(b)?).map_err(|e| e.to_string())?,
            Scalar::Pow(a, e) => self.scalar(a)?.pow(*e).map_err(|e| e.to_string())?,
        })
    }

    fn term_coeff(&self, t: &Term) -> Outcome<CycloNumber> {
        let c = match &t.coeff {
            Some(c) => self.scalar(c)?,
            None => CycloNumber::one(self.order),
        };
        Ok(if t.negated { -c } else { c })
    }

    fn vector(&self, labels: &[String], ts: &[Term]) -> Outcome<Vector> {
        let mut v = zero_vec(self.order, labels.len());
        for t in ts {
            let i = labels.iter().position(|l| *l == t.label.text).ok_or_else(|| format!("unknown basis label `{}`", t.label.text))?;
            v[i] += &self.term_coeff(t)?;
        }
        Ok(v)
    }

    fn laurent(&self, alg: &StructureAlgebra, arity: usize, ts: &[Term]) -> Outcome<LaurentElement> {
        let mut y = LaurentElement::zero(arity, alg.dim(), self.order);
        for t in ts {
            let d = t.degree.clone().unwrap_or_else(|| vec![0; arity]);
            if d.len() != arity {
                return Err(format!("degree of `{}` has {} entries, tower has {arity} variables", t.label.text, d.len()));
            }
            let v = self.vector(alg.labels(), std::slice::from_ref(t))?;
            y.add_term(d, &v);
        }
        Ok(y)
    }

    fn matrix(&self, m: &Matrix) -> Outcome<LinearMap> {
        let rows = m.iter().map(|r| r.iter().map(|s| self.scalar(s)).collect::<Outcome<Vector>>()).collect::<Outcome<Vec<_>>>()?;
        Ok(LinearMap::from_rows(rows, m.len()))
    }

    fn build(&self, d: &Decl) -> Outcome<Object> {
        let n = self.order;
        match &d.kind {
            DeclKind::Algebra(a) => self.build_algebra(a).map(Object::Algebra),
            DeclKind::Auto(a) => {
                let alg_name = &a.algebra().text;
                let alg = self.algebra(alg_name)?;
                let map = match a {
                    AutoExpr::Identity { .. } => LinearMap::identity(n, alg.dim()),
                    AutoExpr::Linear { matrix, .. } => {
                        let m = self.matrix(matrix)?;
                        if m.in_dim() != alg.dim() {
                            return Err(format!("matrix is {0}x{0}, algebra has dimension {1}", m.in_dim(), alg.dim()));
                        }
                        m
                    }
                    AutoExpr::Conj { matrix, .. } => alg.conjugation(&self.matrix(matrix)?).map_err(|e| e.to_string())?,
                    AutoExpr::Permute { perm, .. } => {
                        let mut seen = vec![false; alg.dim()];
                        for &p in perm {
                            if p < 0 || p as usize >= alg.dim() || std::mem::replace(&mut seen[p as usize], true) {
                                return Err(format!("{perm:?} is not a permutation of 0..{}", alg.dim()));
                            }
                        }
                        if perm.len() != alg.dim() {
                            return Err(format!("{perm:?} is not a permutation of 0..{}", alg.dim()));
                        }
                        let cols: Vec<Vector> = perm.iter().map(|&p| unit_vec(n, alg.dim(), p as usize)).collect();
                        LinearMap::from_columns(&cols, alg.dim())
                    }
                    AutoExpr::AntiTranspose { .. } => anti_transpose(alg)?,
                };
                let period = exact_period(&map, PERIOD_LIMIT).ok_or_else(|| format!("map has no period up to {PERIOD_LIMIT}"))?;
                let auto = FiniteOrderAuto::new(alg, map, period).map_err(|e| e.to_string())?;
                Ok(Object::Auto { alg: alg_name.clone(), auto })
            }
            DeclKind::Grading(GradingExpr::Eigen { auto, root }) => {
                let alg_name = match self.get(&auto.text)? {
                    Object::Auto { alg, .. } => alg.clone(),
                    _ => return Err(format!("`{}` is not an automorphism", auto.text)),
                };
                let alg = self.algebra(&alg_name)?;
                let sigma = self.auto(&auto.text, &alg_name)?;
                let zeta = self.scalar(root)?;
                let grading = grading_from_auto(alg, sigma, &zeta).map_err(|e| e.to_string())?;
                Ok(Object::Grading { alg: alg_name, grading, zeta: Some(zeta) })
            }
            DeclKind::Grading(GradingExpr::Components { alg: alg_name, components, root }) => {
                let alg = self.algebra(&alg_name.text)?;
                let comps = components
                    .iter()
                    .map(|c| c.iter().map(|v| self.vector(alg.labels(), v)).collect::<Outcome<Vec<_>>>().map(|vs| Subspace::new(alg.dim(), n, vs)))
                    .collect::<Outcome<Vec<_>>>()?;
                let zeta = root.as_ref().map(|r| self.scalar(r)).transpose()?;
                Ok(Object::Grading { alg: alg_name.text.clone(), grading: ModGrading::new(comps.len() as u64, comps), zeta })
            }
            DeclKind::Tower(t) => self.build_tower(t).map(Object::Tower),
        }
    }

    fn build_algebra(&self, a: &AlgebraExpr) -> Outcome<StructureAlgebra> {
        let n = self.order;
        match a {
            AlgebraExpr::Ctor { name, args } => {
                let int = |i: usize| match args.get(i) {
                    Some(CtorArg::Int(k)) if *k > 0 => Ok(*k),
                    _ => Err(format!("`{}` expects a positive integer argument {}", name.text, i + 1)),
                };
                let alg = |i: usize| match args.get(i) {
                    Some(CtorArg::Name(a)) => self.algebra(&a.text),
                    _ => Err(format!("`{}` expects an algebra argument {}", name.text, i + 1)),
                };
                Ok(match name.text.as_str() {
                    "mat" => StructureAlgebra::mat(n, int(0)? as usize),
                    "gl" => StructureAlgebra::gl(n, int(0)? as usize),
                    "sl" if int(0)? >= 2 => StructureAlgebra::sl(n, int(0)? as usize),
                    "zero" => StructureAlgebra::zero(n, int(0)? as usize),
                    "so" if int(0)? >= 2 => fixtures::orthogonal(n, int(0)? as usize),
                    "sp" => fixtures::symplectic(n, int(0)? as usize),
                    "field" => fixtures::ground_field(n),
                    "quaternions" => {
                        let k = |i: usize| match args.get(i) {
                            Some(CtorArg::Int(k)) if *k != 0 => Ok(*k),
                            _ => Err("`quaternions` expects two nonzero integers".to_string()),
                        };
                        StructureAlgebra::quaternions(n, k(0)?, k(1)?)
                    }
                    "sum" | "direct_sum" => StructureAlgebra::direct_sum(alg(0)?, alg(1)?).map_err(|e| e.to_string())?,
                    other => return Err(format!("`{other}` needs a larger argument")),
                })
            }
            AlgebraExpr::Structure { labels, products, unit } => {
                let dim = labels.len();
                let mut c = vec![vec![zero_vec(n, dim); dim]; dim];
                let mut set = vec![vec![false; dim]; dim];
                let index = |l: &Name| labels.iter().position(|x| *x == l.text).ok_or_else(|| format!("unknown basis label `{}`", l.text));
                for (a, b, rhs) in products {
                    let (i, j) = (index(a)?, index(b)?);
                    if std::mem::replace(&mut set[i][j], true) {
                        return Err(format!("product {} * {} given twice", a.text, b.text));
                    }
                    c[i][j] = self.vector(labels, rhs)?;
                }
                let alg = StructureAlgebra::new(n, c, Some(labels.clone())).map_err(|e| e.to_string())?;
                match unit {
                    Some(u) => alg.with_unit(self.vector(labels, u)?).map_err(|e| e.to_string()),
                    None => Ok(alg),
                }
            }
        }
    }

    fn build_tower(&self, t: &TowerExpr) -> Outcome<LoopTower> {
        match t {
            TowerExpr::Untwisted { alg, steps } => {
                let steps = usize::try_from(*steps).map_err(|_| "step count must be nonnegative".to_string())?;
                Ok(LoopTower::untwisted(self.algebra(&alg.text)?.clone(), steps))
            }
            TowerExpr::Multiloop { alg, stages } => {
                let base = self.algebra(&alg.text)?;
                let autos = stages.iter().map(|(a, _)| self.auto(&a.text, &alg.text).cloned()).collect::<Outcome<Vec<_>>>()?;
                let zetas = stages.iter().map(|(_, r)| self.scalar(r)).collect::<Outcome<Vec<_>>>()?;
                multiloop(base, &autos, &zetas).map_err(|e| e.to_string())
            }
            TowerExpr::Loop { alg, stages } => {
                let base = self.algebra(&alg.text)?;
                let mut tower = LoopTower::new(base.clone());
                for (p, s) in stages.iter().enumerate() {
                    let theta = self.auto(&s.auto.text, &alg.text)?.clone();
                    let twist = match &s.monomial {
                        None if s.chi.is_none() => ToralMonomialAuto::extend_identity(theta, p),
                        m => {
                            let m = m.clone().unwrap_or_else(|| (0..p).map(|i| (0..p).map(|j| i64::from(i == j)).collect()).collect());
                            let chi = match &s.chi {
                                Some(c) => c.iter().map(|x| self.scalar(x)).collect::<Outcome<Vec<_>>>()?,
                                None => vec![CycloNumber::one(self.order); p],
                            };
                            ToralMonomialAuto::new(theta, m, chi).map_err(|e| format!("stage {}: {e}", p + 1))?
                        }
                    };
                    let zeta = self.scalar(&s.root)?;
                    tower.push_stage(twist, zeta, None).map_err(|e| e.to_string())?;
                }
                Ok(tower)
            }
        }
    }
}

/// `a -> -J a^t J` on a matrix Lie algebra, `J` the anti-diagonal
/// permutation matrix.
fn anti_transpose(alg: &StructureAlgebra) -> Outcome<LinearMap> {
    let size = alg.realization().ok_or("`antitranspose` needs a matrix algebra")?.size;
    let order = alg.order();
    let mut j = vec![zero_vec(order, size); size];
    for (i, row) in j.iter_mut().enumerate() {
        row[size - 1 - i] = CycloNumber::one(order);
    }
    let j = LinearMap::from_rows(j, size);
    let minus = CycloNumber::from_int(order, -1);
    alg.map_matrices(|a| j.compose(&a.transpose()).compose(&j).scale(&minus)).map_err(|e| e.to_string())
}

fn window_json(w: &DegreeBox) -> Value {
    json!(w.radius)
}

fn resolve_window(tower: &LoopTower, local: &Option<Vec<i64>>, opts: &RunOptions) -> Outcome<DegreeBox> {
    let n = tower.steps();
    let Some(r) = local.as_ref().or(opts.window.as_ref()) else {
        return Ok(tower.default_box());
    };
    if r.iter().any(|&x| x < 0) {
        return Err("box radii must be nonnegative".into());
    }
    match r.len() {
        1 => Ok(DegreeBox::uniform(n, r[0])),
        k if k == n => Ok(DegreeBox::new(r.clone())),
        k => Err(format!("box has {k} radii, tower has {n} variables")),
    }
}

fn by_degree(map: impl IntoIterator<Item = (Vec<i64>, usize)>) -> Value {
    let mut m = Map::new();
    for (d, k) in map {
        if k > 0 {
            m.insert(monomial_string(&d), json!(k));
        }
    }
    Value::Object(m)
}

fn grading_json(g: &ModGrading) -> Value {
    json!({"modulus": g.modulus(), "dims": g.dims()})
}

/// Runs one command; the boolean is whether it passed.
fn execute(env: &Env, cmd: &Command, opts: &RunOptions) -> Outcome<(bool, Value)> {
    let seed = opts.seed;
    match cmd {
        Command::Grading { grading, on } => {
            let Object::Grading { alg, grading: g, .. } = env.get(&grading.text)? else { return Err(format!("`{}` is not a grading", grading.text)) };
            if let Some(a) = on {
                if a.text != *alg {
                    return Err(format!("`{}` grades `{alg}`, not `{}`", grading.text, a.text));
                }
            }
            let violations: Vec<String> = validate_grading(env.algebra(alg)?, g).iter().map(|v| v.to_string()).collect();
            let mut r = grading_json(g);
            r["grading_valid"] = json!(violations.is_empty());
            r["violations"] = json!(violations);
            Ok((violations.is_empty(), r))
        }
        Command::Build { tower, window } => {
            let t = env.tower(&tower.text)?;
            let w = resolve_window(t, window, opts)?;
            let stages: Vec<Value> = t
                .stages()
                .iter()
                .map(|s| {
                    json!({
                        "modulus": s.modulus,
                        "period": s.period,
                        "variable_action": s.twist.monomial(),
                        "verified_box": window_json(&s.verified_box),
                    })
                })
                .collect();
            let basis = t.basis_in_box(&w);
            Ok((
                true,
                json!({
                    "steps": t.steps(),
                    "base_dim": t.base().dim(),
                    "stages": stages,
                    "window": window_json(&w),
                    "window_dim": basis.len(),
                    "dims_by_degree": by_degree(t.window_dims_by_degree(&w)),
                }),
            ))
        }
        Command::Centroid { tower, window } => {
            let t = env.tower(&tower.text)?;
            let w = resolve_window(t, window, opts)?;
            let st = stabilizer_in_box(t, &w);
            let mut monomials: Vec<Vec<i64>> = st.elements.iter().filter(|u| u.terms().len() == 1).map(|u| u.terms().keys().next().unwrap().clone()).collect();
            // total degree, then earlier variables first, positive before negative
            monomials.sort_by_key(|d| {
                let abs: Vec<i64> = d.iter().map(|x| x.abs()).collect();
                (abs.iter().sum::<i64>(), std::cmp::Reverse(abs), d.iter().map(|x| -x.signum()).collect::<Vec<_>>())
            });
            monomials.dedup();
            let mut r = json!({
                "window": window_json(&w),
                "verified_box": window_json(&st.verified_box),
                "centroid_dim": st.centroid.dim(),
                "stabilizer_dim": st.dim(),
                "stabilizer_dim_by_degree": by_degree(st.dims_by_degree(t)),
                "monomials": monomials.iter().map(|d| monomial_string(d)).collect::<Vec<_>>(),
                "elements": st.render(),
            });
            let mut ok = true;
            if let Ok(check) = multiloop_centroid_check(t, &w) {
                ok = check.passed();
                r["multiloop_generators"] = json!(check.generators);
                r["expected_dim"] = json!(check.expected_dim);
                r["discrepancies"] = json!(check.discrepancies);
            }
            Ok((ok, r))
        }
        Command::Kind { tower } => {
            let t = env.tower(&tower.text)?;
            let v = kind_classify(t).map_err(|e| e.to_string())?;
            let failures = verify_witness(t, &v);
            let mut r = json!({
                "kind": v.kind.as_str(),
                "rho": v.rho.to_string(),
                "witness_generators": v.witness_strings(),
                "monomial_tests": v.monomial_tests.iter().map(|(j, s)| json!({"j": j, "stabilizes": s})).collect::<Vec<_>>(),
                "verified_box": window_json(&v.verified_box),
                "notes": v.notes,
                "witness_failures": failures,
            });
            if v.kind == Kind::Second {
                r["strange_rho"] = json!(v.rho.to_string());
            }
            Ok((failures.is_empty(), r))
        }
        Command::Type { target } => {
            let (archetype, extra) = match env.get(&target.text)? {
                Object::Algebra(a) => (algebra_type_with_seed(a, None, seed), None),
                Object::Tower(t) => match tower_type_with_seed(t, None, seed) {
                    Ok(tt) => (Ok(tt.archetype), Some(json!({"steps": tt.steps, "provenance": tt.provenance, "verified": tt.verified}))),
                    Err(e) => (Err(e), None),
                },
                _ => return Err(format!("`{}` is neither an algebra nor a tower", target.text)),
            };
            match archetype {
                Ok(a) => {
                    let mut r = json!({"variety": a.variety.as_str(), "label": a.label});
                    if let Some(Value::Object(m)) = extra {
                        r.as_object_mut().unwrap().extend(m);
                    }
                    Ok((true, r))
                }
                Err(e) => Ok((false, json!({"error_code": e.code(), "message": e.to_string()}))),
            }
        }
        Command::Untwist { tower, window } => {
            let t = env.tower(&tower.text)?;
            let w = resolve_window(t, window, opts)?;
            let u = untwist_check(t, &w).map_err(|e| e.to_string())?;
            Ok((
                u.passed(),
                json!({
                    "window": window_json(&u.window),
                    "untwist_rank": u.rank,
                    "free_basis": u.basis.iter().map(|d| monomial_string(d)).collect::<Vec<_>>(),
                    "centroid_elements_checked": u.centroid_elements_checked,
                    "loop_elements_checked": u.loop_elements_checked,
                    "failures": u.failures,
                    "notes": u.notes,
                }),
            ))
        }
        Command::CanonicalForm { tower, element } | Command::Member { tower, element } => {
            let t = env.tower(&tower.text)?;
            let y = env.laurent(t.base(), t.steps(), element)?;
            let labels = t.base().labels();
            if let Command::Member { .. } = cmd {
                return Ok((true, json!({"element": y.render(labels), "member": t.tower_membership(&y)})));
            }
            let cf = canonical_form(t, &y).map_err(|e| e.to_string())?;
            let reconstructs = cf.reconstruct().as_ref() == Some(&y);
            let members = cf.parts.values().all(|x| t.tower_membership(x));
            let mut parts = Map::new();
            for (i, x) in &cf.parts {
                parts.insert(monomial_string(i), json!(x.render(labels)));
            }
            Ok((reconstructs && members, json!({"element": y.render(labels), "parts": parts, "reconstructs": reconstructs, "parts_in_tower": members})))
        }
        Command::Flags { tower, window } => {
            let t = env.tower(&tower.text)?;
            let w = window.as_ref().or(opts.window.as_ref()).map(|_| resolve_window(t, window, opts)).transpose()?;
            let f = inherited_flags(t, w);
            let ok = f.flags.iter().all(|x| x.verified_in_box != Some(false));
            let flags: Vec<Value> = f
                .flags
                .iter()
                .map(|x| json!({"property": x.property, "base": x.base, "status": x.status.as_str(), "verified_in_box": x.verified_in_box}))
                .collect();
            Ok((ok, json!({"window": window_json(&f.window), "flags": flags, "notes": f.notes})))
        }
        Command::Psi { grading, window } => {
            let Object::Grading { alg, grading: g, zeta } = env.get(&grading.text)? else { return Err(format!("`{}` is not a grading", grading.text)) };
            let zeta = zeta.as_ref().ok_or_else(|| format!("`{}` has no root; declare it with `root`", grading.text))?;
            let w = match window.as_ref().or(opts.window.as_ref()) {
                Some(r) if r.len() == 1 => DegreeBox::new(r.clone()),
                Some(r) => return Err(format!("box has {} radii, a grading loop has 1 variable", r.len())),
                None => DegreeBox::new(vec![2 * g.modulus() as i64]),
            };
            let p = psi_check(env.algebra(alg)?, g, zeta, &w).map_err(|e| e.to_string())?;
            Ok((
                p.passed(),
                json!({
                    "window": window_json(&p.window),
                    "centroid_loop_dim_by_degree": by_degree(p.centroid_loop_dims.clone()),
                    "stabilizer_dim_by_degree": by_degree(p.stabilizer_dims.clone()),
                    "elements_checked": p.elements_checked,
                    "pairs_checked": p.pairs_checked,
                    "failures": p.failures,
                }),
            ))
        }
        Command::Audit { tower, bound } => {
            let t = env.tower(&tower.text)?;
            let v = kind_classify(t).map_err(|e| e.to_string())?;
            let KindWitness::Strange(d) = &v.witness else {
                return Ok((true, json!({"kind": v.kind.as_str(), "note": "first kind; the centroid is a Laurent ring"})));
            };
            let a = strange_ring_audit_with_seed(d, *bound, seed).map_err(|e| e.to_string())?;
            Ok((
                a.passed(),
                json!({
                    "kind": v.kind.as_str(),
                    "strange_rho": a.rho.to_string(),
                    "relation_holds": a.relation_holds,
                    "degree_bound": a.degree_bound,
                    "independent": a.independent,
                    "expected_independent": a.expected_independent,
                    "norm_samples": a.norm_samples,
                    "failures": a.failures,
                }),
            ))
        }
    }
}

fn summary(o: &Object) -> Value {
    match o {
        Object::Algebra(a) => json!({"dim": a.dim(), "labels": a.labels()}),
        Object::Auto { alg, auto } => json!({"algebra": alg, "period": auto.period()}),
        Object::Grading { alg, grading, zeta } => {
            let mut r = grading_json(grading);
            r["algebra"] = json!(alg);
            r["root"] = json!(zeta.as_ref().map(|z| z.to_string()));
            r
        }
        Object::Tower(t) => json!({"steps": t.steps(), "base_dim": t.base().dim(), "moduli": t.moduli()}),
    }
}

/// Executes a validated document. The report is a pure function of the
/// document and the options.
pub fn run(doc: &Document, opts: &RunOptions) -> Value {
    let mut env = Env { order: doc.root_order, objects: HashMap::new(), failed: HashMap::new() };
    let mut ok = true;
    let mut stopped = false;
    let mut decls = Vec::new();
    for d in &doc.declarations {
        let mut entry = json!({"name": d.name.text, "kind": d.kind.kind_name()});
        match env.build(d) {
            Ok(o) => {
                entry["ok"] = json!(true);
                entry["summary"] = summary(&o);
                env.objects.insert(d.name.text.clone(), o);
            }
            Err(e) => {
                ok = false;
                entry["ok"] = json!(false);
                entry["error"] = json!(e);
                env.failed.insert(d.name.text.clone(), e);
            }
        }
        decls.push(entry);
        if !ok && opts.fail_fast {
            stopped = true;
            break;
        }
    }
    let mut commands = Vec::new();
    if !stopped {
        for c in &doc.commands {
            let mut entry = json!({"command": c.verb(), "target": c.target().text});
            match execute(&env, c, opts) {
                Ok((pass, result)) => {
                    entry["ok"] = json!(pass);
                    entry["result"] = result;
                    ok &= pass;
                }
                Err(e) => {
                    entry["ok"] = json!(false);
                    entry["error"] = json!(e);
                    ok = false;
                }
            }
            let failed = entry["ok"] == json!(false);
            commands.push(entry);
            if failed && opts.fail_fast {
                stopped = true;
                break;
            }
        }
    }
    json!({
        "schema_version": SCHEMA_VERSION,
        "title": doc.title,
        "root_order": doc.root_order,
        "seed": opts.seed,
        "box": opts.window,
        "declarations": decls,
        "commands": commands,
        "stopped_early": stopped,
        "ok": ok,
    })
}

/// Builds declarations up to and including the tower `name`.
pub fn build_tower(doc: &Document, name: &str) -> Result<LoopTower, String> {
    let mut env = Env { order: doc.root_order, objects: HashMap::new(), failed: HashMap::new() };
    for d in &doc.declarations {
        match env.build(d) {
            Ok(o) => {
                env.objects.insert(d.name.text.clone(), o);
            }
            Err(e) => {
                env.failed.insert(d.name.text.clone(), e);
            }
        }
        if d.name.text == name {
            return env.tower(name).cloned();
        }
    }
    Err(format!("`{name}` is not declared"))
}
