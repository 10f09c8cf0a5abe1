//! Finite-dimensional algebras given by structure constants, and their
//! multiplication algebra, ideals, centre, centroid and simplicity.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exactnum::{CycloNumber, Rational};
use crate::factor;
use crate::linalg::{self, axpy, is_zero_vec, unit_vec, zero_vec, LinearMap, SparseEchelon, Subspace, Vector};
use crate::qpoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FindimError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("field order mismatch: {0} vs {1}")]
    OrderMismatch(u64, u64),
    #[error("zero vector where a nonzero generator is required")]
    ZeroVector,
    #[error("declared unit fails u*x = x*u = x on basis element {0}")]
    NotAUnit(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not in the span of the algebra basis")]
    NotInAlgebra,
    #[error("algebra has no matrix realization")]
    NoMatrixRealization,
    #[error("duplicate or empty label: {0}")]
    BadLabel(String),
}

/// The algebra is spanned by these `size x size` matrices, with product
/// either the matrix product or the commutator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRealization {
    pub size: usize,
    pub basis: Vec<LinearMap>,
    pub bracket: bool,
    rows: Vec<usize>,
    solver: LinearMap,
}

impl MatrixRealization {
    fn new(size: usize, basis: Vec<LinearMap>, bracket: bool) -> Self {
        let order = basis[0].order();
        let d = basis.len();
        let flat: Vec<Vector> = basis.iter().map(|m| m.flatten()).collect();
        // pick d independent coordinates of the flattened matrices
        let mut t = flat.clone();
        let rows = linalg::rref(&mut t);
        assert_eq!(rows.len(), d, "matrix basis is linearly dependent");
        let square: Vec<Vector> = rows.iter().map(|&r| flat.iter().map(|f| f[r].clone()).collect()).collect();
        let solver = LinearMap::from_rows(square, d).inverse().expect("independent coordinates");
        let _ = order;
        MatrixRealization { size, basis, bracket, rows, solver }
    }

    /// Coordinates of a matrix in the algebra basis.
    pub fn coords(&self, m: &LinearMap) -> Option<Vector> {
        let flat = m.flatten();
        let picked: Vector = self.rows.iter().map(|&r| flat[r].clone()).collect();
        let c = self.solver.apply(&picked);
        let mut back = zero_vec(m.order(), flat.len());
        for (ci, b) in c.iter().zip(&self.basis) {
            axpy(&mut back, ci, &b.flatten());
        }
        (back == flat).then_some(c)
    }

    pub fn matrix(&self, v: &[CycloNumber]) -> LinearMap {
        let order = self.basis[0].order();
        let mut acc = LinearMap::zero(order, self.size, self.size);
        for (c, b) in v.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureAlgebra {
    dim: usize,
    order: u64,
    c: Vec<Vec<Vector>>,
    sparse: Vec<Vec<Vec<(usize, CycloNumber)>>>,
    unit: Option<Vector>,
    labels: Vec<String>,
    realization: Option<MatrixRealization>,
}

fn matrix_unit(order: u64, n: usize, i: usize, j: usize) -> LinearMap {
    let mut rows = vec![zero_vec(order, n); n];
    rows[i][j] = CycloNumber::one(order);
    LinearMap::from_rows(rows, n)
}

fn matrix_label(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{}_{}", i + 1, j + 1)
    }
}

impl StructureAlgebra {
    /// Builds an algebra from `c[i][j]`, the coordinates of `e_i e_j`.
    pub fn new(order: u64, c: Vec<Vec<Vector>>, labels: Option<Vec<String>>) -> Result<Self, FindimError> {
        let dim = c.len();
        if dim == 0 {
            return Err(FindimError::DimensionMismatch { expected: 1, got: 0 });
        }
        for row in &c {
            if row.len() != dim {
                return Err(FindimError::DimensionMismatch { expected: dim, got: row.len() });
            }
            for v in row {
                if v.len() != dim {
                    return Err(FindimError::DimensionMismatch { expected: dim, got: v.len() });
                }
                if let Some(x) = v.iter().find(|x| x.order() != order) {
                    return Err(FindimError::OrderMismatch(order, x.order()));
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (1..=dim).map(|i| format!("x{i}")).collect());
        if labels.len() != dim {
            return Err(FindimError::DimensionMismatch { expected: dim, got: labels.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || labels[..i].contains(l) {
                return Err(FindimError::BadLabel(l.clone()));
            }
        }
        let sparse = c
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect())
                    .collect()
            })
            .collect();
        Ok(StructureAlgebra { dim, order, c, sparse, unit: None, labels, realization: None })
    }

    /// Attaches a unit after checking it on every basis element.
    pub fn with_unit(mut self, u: Vector) -> Result<Self, FindimError> {
        if u.len() != self.dim {
            return Err(FindimError::DimensionMismatch { expected: self.dim, got: u.len() });
        }
        for i in 0..self.dim {
            let e = unit_vec(self.order, self.dim, i);
            if self.mul(&u, &e) != e || self.mul(&e, &u) != e {
                return Err(FindimError::NotAUnit(i));
            }
        }
        self.unit = Some(u);
        Ok(self)
    }

    /// The algebra spanned by the given matrices; they must be linearly
    /// independent and closed under the chosen product.
    pub fn from_matrices(basis: Vec<LinearMap>, bracket: bool, labels: Vec<String>) -> Result<Self, FindimError> {
        let size = basis[0].in_dim();
        let order = basis[0].order();
        let real = MatrixRealization::new(size, basis, bracket);
        let d = real.basis.len();
        let mut c = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let (a, b) = (&real.basis[i], &real.basis[j]);
                let p = if bracket { a.compose(b).sub(&b.compose(a)) } else { a.compose(b) };
                c[i][j] = real.coords(&p).ok_or(FindimError::NotInAlgebra)?;
            }
        }
        let mut alg = Self::new(order, c, Some(labels))?;
        alg.realization = Some(real);
        Ok(alg)
    }

    /// `M_n`, basis of matrix units `E_ij` in row-major order.
    pub fn mat(order: u64, n: usize) -> Self {
        let (basis, labels) = Self::matrix_units(order, n);
        let alg = Self::from_matrices(basis, false, labels).expect("matrix units");
        let unit = (0..n * n).map(|k| if k / n == k % n { CycloNumber::one(order) } else { CycloNumber::zero(order) }).collect();
        alg.with_unit(unit).expect("identity matrix is a unit")
    }

    /// `gl_n` with the commutator product, basis `E_ij`.
    pub fn gl(order: u64, n: usize) -> Self {
        let (basis, labels) = Self::matrix_units(order, n);
        Self::from_matrices(basis, true, labels).expect("matrix units")
    }

    fn matrix_units(order: u64, n: usize) -> (Vec<LinearMap>, Vec<String>) {
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            for j in 0..n {
                basis.push(matrix_unit(order, n, i, j));
                labels.push(matrix_label(n, i, j));
            }
        }
        (basis, labels)
    }

    /// `sl_n`: upper matrix units, then `H_i = E_ii - E_(i+1)(i+1)`, then
    /// lower matrix units. For `n = 2` the basis is `e, h, f`.
    pub fn sl(order: u64, n: usize) -> Self {
        assert!(n >= 2, "sl(n) needs n >= 2");
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                basis.push(matrix_unit(order, n, i, j));
                labels.push(matrix_label(n, i, j));
            }
        }
        for i in 0..n - 1 {
            basis.push(matrix_unit(order, n, i, i).sub(&matrix_unit(order, n, i + 1, i + 1)));
            labels.push(format!("H{}", i + 1));
        }
        for i in 0..n {
            for j in 0..i {
                basis.push(matrix_unit(order, n, i, j));
                labels.push(matrix_label(n, i, j));
            }
        }
        if n == 2 {
            labels = vec!["e".into(), "h".into(), "f".into()];
        }
        Self::from_matrices(basis, true, labels).expect("sl_n is closed under brackets")
    }

    /// The algebra with zero multiplication.
    pub fn zero(order: u64, n: usize) -> Self {
        Self::new(order, vec![vec![zero_vec(order, n); n]; n], None).expect("valid shape")
    }

    /// Generalized quaternions `(a, b)`: `i^2 = a`, `j^2 = b`, `ij = -ji = k`.
    pub fn quaternions(order: u64, a: i64, b: i64) -> Self {
        let q = |x: i64| CycloNumber::from_int(order, x);
        let v = |xs: [i64; 4]| xs.iter().map(|&x| q(x)).collect::<Vector>();
        // basis 1, i, j, k
        let table = [
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            [[0, 1, 0, 0], [a, 0, 0, 0], [0, 0, 0, 1], [0, 0, a, 0]],
            [[0, 0, 1, 0], [0, 0, 0, -1], [b, 0, 0, 0], [0, -b, 0, 0]],
            [[0, 0, 0, 1], [0, 0, -a, 0], [0, b, 0, 0], [-a * b, 0, 0, 0]],
        ];
        let c = table.iter().map(|row| row.iter().map(|&e| v(e)).collect()).collect();
        let labels = ["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect();
        Self::new(order, c, Some(labels)).unwrap().with_unit(v([1, 0, 0, 0])).unwrap()
    }

    /// `A ⊕ B` with componentwise product; labels get `_1` and `_2` suffixes.
    pub fn direct_sum(a: &StructureAlgebra, b: &StructureAlgebra) -> Result<Self, FindimError> {
        if a.order != b.order {
            return Err(FindimError::OrderMismatch(a.order, b.order));
        }
        let (n, m) = (a.dim, b.dim);
        let d = n + m;
        let mut c = vec![vec![zero_vec(a.order, d); d]; d];
        for i in 0..n {
            for j in 0..n {
                c[i][j][..n].clone_from_slice(&a.c[i][j]);
            }
        }
        for i in 0..m {
            for j in 0..m {
                c[n + i][n + j][n..].clone_from_slice(&b.c[i][j]);
            }
        }
        let labels = a.labels.iter().map(|l| format!("{l}_1")).chain(b.labels.iter().map(|l| format!("{l}_2"))).collect();
        let alg = Self::new(a.order, c, Some(labels))?;
        match (&a.unit, &b.unit) {
            (Some(u), Some(v)) => alg.with_unit(u.iter().chain(v).cloned().collect()),
            _ => Ok(alg),
        }
    }

    /// The same algebra in the basis `f_j = sum_i p[i][j] e_i`.
    pub fn change_basis(&self, p: &LinearMap) -> Result<Self, FindimError> {
        let pinv = p.inverse().map_err(|_| FindimError::Singular)?;
        let cols: Vec<Vector> = (0..self.dim).map(|j| p.column(j)).collect();
        let c = (0..self.dim)
            .map(|a| (0..self.dim).map(|b| pinv.apply(&self.mul(&cols[a], &cols[b]))).collect())
            .collect();
        let mut alg = Self::new(self.order, c, None)?;
        if let Some(u) = &self.unit {
            alg = alg.with_unit(pinv.apply(u))?;
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    pub fn realization(&self) -> Option<&MatrixRealization> {
        self.realization.as_ref()
    }

    pub fn structure_constants(&self) -> &[Vec<Vector>] {
        &self.c
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Vector {
        &self.c[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        unit_vec(self.order, self.dim, i)
    }

    /// Bilinear product of coordinate vectors.
    pub fn multiply(&self, x: &[CycloNumber], y: &[CycloNumber]) -> Result<Vector, FindimError> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(FindimError::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        Ok(self.mul(x, y))
    }

    /// Unchecked product, for internal hot loops.
    pub fn mul(&self, x: &[CycloNumber], y: &[CycloNumber]) -> Vector {
        let mut out = zero_vec(self.order, self.dim);
        self.mul_acc(&mut out, x, y);
        out
    }

    /// `acc += x * y`
    pub fn mul_acc(&self, acc: &mut [CycloNumber], x: &[CycloNumber], y: &[CycloNumber]) {
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = xi * yj;
                for (k, c) in &self.sparse[i][j] {
                    acc[*k] += &(&s * c);
                }
            }
        }
    }

    /// Left multiplication `x -> a x`.
    pub fn left_mult(&self, a: &[CycloNumber]) -> LinearMap {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        LinearMap::from_columns(&cols, self.dim)
    }

    /// Right multiplication `x -> x a`.
    pub fn right_mult(&self, a: &[CycloNumber]) -> LinearMap {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(&self.basis_vector(j), a)).collect();
        LinearMap::from_columns(&cols, self.dim)
    }

    fn generator_maps(&self) -> Vec<LinearMap> {
        (0..self.dim)
            .flat_map(|i| {
                let e = self.basis_vector(i);
                [self.left_mult(&e), self.right_mult(&e)]
            })
            .collect()
    }

    /// Span of `{x y : x in U, y in V}`.
    pub fn product_space(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut se = SparseEchelon::new(self.order);
        let mut out = Vec::new();
        for x in u.basis() {
            for y in v.basis() {
                let p = self.mul(x, y);
                if se.insert_dense(&p) {
                    out.push(p);
                }
            }
        }
        Subspace::new(self.dim, self.order, out)
    }

    /// Smallest subspace containing `s` and stable under all left and right
    /// multiplications.
    pub fn mult_module_closure(&self, s: &[Vector]) -> Subspace {
        let n = self.dim;
        let mut se = SparseEchelon::new(self.order);
        let mut found: Vec<Vector> = Vec::new();
        let mut queue: Vec<Vector> = Vec::new();
        // queue the reduced remainders, which keeps coefficients small
        let push = |v: &Vector, se: &mut SparseEchelon, found: &mut Vec<Vector>, queue: &mut Vec<Vector>| {
            let r = se.reduce(sparse_row(v.iter().cloned().enumerate()));
            if let Some((_, lead)) = r.iter().next() {
                let inv = lead.inv().expect("nonzero");
                let dense = dense_from_sparse(self.order, n, &r.iter().map(|(k, x)| (*k, x * &inv)).collect());
                se.insert(r);
                found.push(dense.clone());
                queue.push(dense);
            }
        };
        for v in s {
            push(v, &mut se, &mut found, &mut queue);
        }
        while let Some(v) = queue.pop() {
            if found.len() == n {
                break;
            }
            for i in 0..n {
                let e = self.basis_vector(i);
                for p in [self.mul(&e, &v), self.mul(&v, &e)] {
                    push(&p, &mut se, &mut found, &mut queue);
                }
            }
        }
        Subspace::new(n, self.order, found)
    }

    /// Two-sided ideal generated by a nonzero vector.
    pub fn ideal_generated(&self, x: &[CycloNumber]) -> Result<Subspace, FindimError> {
        if x.len() != self.dim {
            return Err(FindimError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if is_zero_vec(x) {
            return Err(FindimError::ZeroVector);
        }
        Ok(self.mult_module_closure(&[x.to_vec()]))
    }

    /// `AA`
    pub fn square(&self) -> Subspace {
        let full = Subspace::full(self.dim, self.order);
        self.product_space(&full, &full)
    }

    pub fn is_perfect(&self) -> bool {
        self.square().dim() == self.dim
    }
}

fn sparse_row(terms: impl IntoIterator<Item = (usize, CycloNumber)>) -> BTreeMap<usize, CycloNumber> {
    let mut row: BTreeMap<usize, CycloNumber> = BTreeMap::new();
    for (k, v) in terms {
        if v.is_zero() {
            continue;
        }
        let e = row.entry(k).or_insert_with(|| v.zero_like());
        *e += &v;
    }
    row.retain(|_, v| !v.is_zero());
    row
}

fn sparse_dot(a: &BTreeMap<usize, CycloNumber>, b: &BTreeMap<usize, CycloNumber>) -> CycloNumber {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut acc = CycloNumber::zero(small.values().next().or(large.values().next()).map_or(1, |c| c.order()));
    for (k, x) in small {
        if let Some(y) = large.get(k) {
            acc += &(x * y);
        }
    }
    acc
}

fn dense_from_sparse(order: u64, n: usize, m: &BTreeMap<usize, CycloNumber>) -> Vector {
    let mut v = zero_vec(order, n);
    for (&i, x) in m {
        v[i] = x.clone();
    }
    v
}

impl StructureAlgebra {
    /// Centre: elements that commute and associate with everything.
    pub fn centre(&self) -> Subspace {
        let n = self.dim;
        let mut se = SparseEchelon::new(self.order);
        let e: Vec<Vector> = (0..n).map(|i| self.basis_vector(i)).collect();
        for a in 0..n {
            // z e_a - e_a z
            let comm: Vec<Vector> = (0..n).map(|r| linalg::vec_sub(&self.c[r][a], &self.c[a][r])).collect();
            self.add_component_rows(&mut se, &comm);
            for b in 0..n {
                let ab = &self.c[a][b];
                let mut t1 = Vec::with_capacity(n);
                let mut t2 = Vec::with_capacity(n);
                let mut t3 = Vec::with_capacity(n);
                for r in 0..n {
                    t1.push(linalg::vec_sub(&self.mul(&self.c[r][a], &e[b]), &self.mul(&e[r], ab)));
                    t2.push(linalg::vec_sub(&self.mul(&self.c[a][r], &e[b]), &self.mul(&e[a], &self.c[r][b])));
                    t3.push(linalg::vec_sub(&self.mul(ab, &e[r]), &self.mul(&e[a], &self.c[b][r])));
                }
                for t in [t1, t2, t3] {
                    self.add_component_rows(&mut se, &t);
                }
            }
        }
        let ker = se.kernel(n).iter().map(|m| dense_from_sparse(self.order, n, m)).collect();
        Subspace::new(n, self.order, ker)
    }

    /// Rows `sum_r z_r coeff[r][s] = 0`, one per component `s`.
    fn add_component_rows(&self, se: &mut SparseEchelon, coeff: &[Vector]) {
        for s in 0..self.dim {
            let row = sparse_row((0..self.dim).map(|r| (r, coeff[r][s].clone())));
            if !row.is_empty() {
                se.insert(row);
            }
        }
    }

    /// Basis of the centroid in reduced echelon form over the row-major
    /// matrix entries; for a central algebra this is the identity alone.
    pub fn centroid(&self) -> Vec<LinearMap> {
        let n = self.dim;
        let idx = |r: usize, k: usize| r * n + k;
        let mut se = SparseEchelon::new(self.order);
        // Once the solution space is small, most equations are redundant;
        // only those that cut the current kernel are eliminated.
        let mut ker: Option<Vec<BTreeMap<usize, CycloNumber>>> = None;
        for i in 0..n {
            for j in 0..n {
                let cij = &self.sparse[i][j];
                for s in 0..n {
                    let lhs = cij.iter().map(|(k, c)| (idx(s, *k), c.clone()));
                    let right = (0..n).filter_map(|r| {
                        let c = &self.c[r][j][s];
                        (!c.is_zero()).then(|| (idx(r, i), -c))
                    });
                    let left = (0..n).filter_map(|r| {
                        let c = &self.c[i][r][s];
                        (!c.is_zero()).then(|| (idx(r, j), -c))
                    });
                    for row in [sparse_row(lhs.clone().chain(right)), sparse_row(lhs.chain(left))] {
                        if let Some(k) = &ker {
                            if k.iter().all(|v| sparse_dot(&row, v).is_zero()) {
                                continue;
                            }
                            ker = None;
                        }
                        se.insert(row);
                    }
                }
                if ker.is_none() {
                    ker = Some(se.kernel(n * n));
                }
            }
        }
        let ker: Vec<Vector> = ker.unwrap_or_else(|| se.kernel(n * n)).iter().map(|m| dense_from_sparse(self.order, n * n, m)).collect();
        let canon = Subspace::new(n * n, self.order, ker);
        canon.basis().iter().map(|v| LinearMap::from_flat(n, v)).collect()
    }

    pub fn is_central(&self) -> bool {
        self.centroid().len() == 1
    }

    /// Checks the defining identities `chi(xy) = chi(x)y = x chi(y)` on basis pairs.
    pub fn is_centroid_element(&self, chi: &LinearMap) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let ei = self.basis_vector(i);
                let ej = self.basis_vector(j);
                let a = chi.apply(&self.c[i][j]);
                a == self.mul(&chi.apply(&ei), &ej) && a == self.mul(&ei, &chi.apply(&ej))
            })
        })
    }

    /// The centroid as an algebra under composition, together with the maps
    /// its basis vectors stand for.
    pub fn centroid_algebra(&self) -> (StructureAlgebra, Vec<LinearMap>) {
        let basis = self.centroid();
        let d = basis.len();
        let n = self.dim;
        let space = Subspace::new(n * n, self.order, basis.iter().map(|m| m.flatten()).collect());
        let c = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| space.coordinates(&basis[a].compose(&basis[b]).flatten()).expect("centroid is closed under composition"))
                    .collect()
            })
            .collect();
        let labels = if d == 1 { vec!["1".to_string()] } else { (1..=d).map(|i| format!("c{i}")).collect() };
        let unit = space.coordinates(&LinearMap::identity(self.order, n).flatten()).expect("identity is central");
        let alg = StructureAlgebra::new(self.order, c, Some(labels)).expect("valid shape").with_unit(unit).expect("identity");
        (alg, basis)
    }

    /// Basis of the unital associative algebra of maps generated by all left
    /// and right multiplications.
    pub fn mult_algebra(&self) -> Vec<LinearMap> {
        let gens = self.generator_maps();
        let n = self.dim;
        let id = LinearMap::identity(self.order, n);
        let mut se = SparseEchelon::new(self.order);
        se.insert_dense(&id.flatten());
        let mut found = vec![id.clone()];
        let mut queue = vec![id];
        while let Some(m) = queue.pop() {
            for g in &gens {
                let p = g.compose(&m);
                if se.insert_dense(&p.flatten()) {
                    found.push(p.clone());
                    queue.push(p);
                }
            }
        }
        found
    }

    /// Exact simplicity test. A proper ideal found by spinning decides
    /// "not simple" early; otherwise the algebra must be semisimple and its
    /// centroid must be a field.
    pub fn is_simple(&self) -> bool {
        let n = self.dim;
        if self.square().dim() == 0 {
            return false;
        }
        for i in 0..n {
            if self.mult_module_closure(&[self.basis_vector(i)]).dim() < n {
                return false;
            }
        }
        let probes: Vec<Vector> = (1..=4i64)
            .map(|t| (0..n).map(|k| CycloNumber::from_int(self.order, ((k as i64 + 1) * t * 7919) % 11 - 5)).collect())
            .filter(|v: &Vector| !is_zero_vec(v))
            .collect();
        for v in &probes {
            if self.mult_module_closure(std::slice::from_ref(v)).dim() < n {
                return false;
            }
        }
        if !self.is_semisimple() {
            return false;
        }
        let e = self.centroid();
        centroid_is_field(&e)
    }

    /// Nondegenerate trace form: the Killing form for Lie algebras, the
    /// form `tr L_(xy)` for associative ones, and the trace form of the
    /// multiplication algebra otherwise.
    pub fn is_semisimple(&self) -> bool {
        let n = self.dim;
        let gram_rank = |maps: &[LinearMap]| {
            let k = maps.len();
            let gram: Vec<Vector> = (0..k).map(|a| (0..k).map(|b| trace_of_product(&maps[a], &maps[b])).collect()).collect();
            linalg::rank(&gram) == k
        };
        if self.is_lie() {
            let ad: Vec<LinearMap> = (0..n).map(|i| self.left_mult(&self.basis_vector(i))).collect();
            gram_rank(&ad)
        } else if self.is_associative() {
            let left: Vec<LinearMap> = (0..n).map(|i| self.left_mult(&self.basis_vector(i))).collect();
            gram_rank(&left)
        } else {
            gram_rank(&self.mult_algebra())
        }
    }

    pub fn is_pfgc_findim(&self) -> bool {
        self.dim >= 1 && self.is_perfect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.c[i][j] == self.c[j][i]))
    }

    pub fn is_anticommutative(&self) -> bool {
        (0..self.dim).all(|i| {
            is_zero_vec(&self.c[i][i]) && (0..i).all(|j| is_zero_vec(&linalg::vec_add(&self.c[i][j], &self.c[j][i])))
        })
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let ek = self.basis_vector(k);
                    let ei = self.basis_vector(i);
                    self.mul(&self.c[i][j], &ek) == self.mul(&ei, &self.c[j][k])
                })
            })
        })
    }

    /// Anticommutativity plus the Jacobi identity on basis triples.
    pub fn is_lie(&self) -> bool {
        if !self.is_anticommutative() {
            return false;
        }
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(k));
                    let mut s = self.mul(&ei, &self.c[j][k]);
                    self.mul_acc(&mut s, &ej, &self.c[k][i]);
                    self.mul_acc(&mut s, &ek, &self.c[i][j]);
                    if !is_zero_vec(&s) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// A two-sided unit, if one exists.
    pub fn detect_unit(&self) -> Option<Vector> {
        let n = self.dim;
        let mut se = SparseEchelon::new(self.order);
        for j in 0..n {
            for side in [0, 1] {
                for s in 0..n {
                    let mut terms: Vec<(usize, CycloNumber)> = (0..n)
                        .map(|r| (r, if side == 0 { self.c[r][j][s].clone() } else { self.c[j][r][s].clone() }))
                        .collect();
                    if s == j {
                        terms.push((n, -CycloNumber::one(self.order)));
                    }
                    se.insert(sparse_row(terms));
                }
            }
        }
        let ker = se.kernel(n + 1);
        let v = ker.iter().map(|m| dense_from_sparse(self.order, n + 1, m)).find(|v| !v[n].is_zero())?;
        let inv = v[n].inv().ok()?;
        Some(v[..n].iter().map(|x| x * &inv).collect())
    }

    /// Whether `f: A -> B` satisfies `f(e_i e_j) = f(e_i) f(e_j)`.
    pub fn is_homomorphism_to(&self, target: &StructureAlgebra, f: &LinearMap) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| f.apply(&self.c[i][j]) == target.mul(&f.column(i), &f.column(j)))
        })
    }

    pub fn is_automorphism(&self, f: &LinearMap) -> bool {
        f.in_dim() == self.dim && f.out_dim() == self.dim && f.inverse().is_ok() && self.is_homomorphism_to(self, f)
    }

    /// `X -> g X g^-1` on a matrix realization.
    pub fn conjugation(&self, g: &LinearMap) -> Result<LinearMap, FindimError> {
        let ginv = g.inverse().map_err(|_| FindimError::Singular)?;
        self.map_matrices(|x| g.compose(x).compose(&ginv))
    }

    /// The linear map induced on the algebra by a map of matrices.
    pub fn map_matrices(&self, f: impl Fn(&LinearMap) -> LinearMap) -> Result<LinearMap, FindimError> {
        let real = self.realization.as_ref().ok_or(FindimError::NoMatrixRealization)?;
        let cols = real.basis.iter().map(|b| real.coords(&f(b)).ok_or(FindimError::NotInAlgebra)).collect::<Result<Vec<_>, _>>()?;
        Ok(LinearMap::from_columns(&cols, self.dim))
    }
}

fn trace_of_product(a: &LinearMap, b: &LinearMap) -> CycloNumber {
    let n = a.in_dim();
    let mut t = CycloNumber::zero(a.order());
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a.entry(i, j), b.entry(j, i));
            if !x.is_zero() && !y.is_zero() {
                t += &(x * y);
            }
        }
    }
    t
}

/// Decides whether a commutative semisimple algebra of maps is a field:
/// some `sum c^i E_i` with small integer `c` generates it, and the
/// algebra is a field iff that generator has an irreducible minimal
/// polynomial.
fn centroid_is_field(e: &[LinearMap]) -> bool {
    let d = e.len();
    if d == 1 {
        return true;
    }
    for a in e {
        for b in e {
            if a.compose(b) != b.compose(a) {
                return false;
            }
        }
    }
    let order = e[0].order();
    let bound = (d - 1) * d * (d - 1) / 2 + 1;
    for c in 0..=bound as i64 {
        let mut chi = e[0].scale(&CycloNumber::one(order));
        let mut pw = Rational::from_integer(1.into());
        for m in &e[1..] {
            pw *= Rational::from_integer(c.into());
            chi = chi.add(&m.scale(&CycloNumber::from_rational(order, pw.clone())));
        }
        let p = qpoly::minpoly(&chi);
        if p.degree() == Some(d) {
            return factor::is_irreducible(&p, 0);
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(order: u64, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| CycloNumber::from_int(order, x)).collect()
    }

    #[test]
    fn products() {
        let m2 = StructureAlgebra::mat(1, 2);
        let e11 = m2.basis_vector(0);
        let e12 = m2.basis_vector(1);
        assert_eq!(m2.multiply(&e11, &e12).unwrap(), e12);
        let sl2 = StructureAlgebra::sl(1, 2);
        assert_eq!(sl2.mul(&sl2.basis_vector(1), &sl2.basis_vector(0)), v(1, &[2, 0, 0]));
        assert_eq!(sl2.mul(&sl2.basis_vector(0), &sl2.basis_vector(2)), v(1, &[0, 1, 0]));
        assert!(sl2.multiply(&e11, &e12).is_err());
    }

    #[test]
    fn closures_and_ideals() {
        let m2 = StructureAlgebra::mat(1, 2);
        assert_eq!(m2.mult_module_closure(&[m2.unit().unwrap().clone()]).dim(), 4);
        assert_eq!(m2.ideal_generated(&m2.basis_vector(0)).unwrap().dim(), 4);
        let sl2 = StructureAlgebra::sl(1, 2);
        assert_eq!(sl2.mult_module_closure(&[sl2.basis_vector(0)]).dim(), 3);
        let z = StructureAlgebra::zero(1, 2);
        assert_eq!(z.mult_module_closure(&[z.basis_vector(1)]).dim(), 1);
        assert!(z.ideal_generated(&zero_vec(1, 2)).is_err());
        let ss = StructureAlgebra::direct_sum(&sl2, &sl2).unwrap();
        let first = ss.ideal_generated(&ss.basis_vector(0)).unwrap();
        assert_eq!(first, Subspace::new(6, 1, (0..3).map(|i| ss.basis_vector(i)).collect()));
    }

    #[test]
    fn centre_and_centroid() {
        let m2 = StructureAlgebra::mat(1, 2);
        assert_eq!(m2.centre().dim(), 1);
        assert_eq!(m2.centroid(), vec![LinearMap::identity(1, 4)]);
        let sl2 = StructureAlgebra::sl(1, 2);
        assert_eq!(sl2.centre().dim(), 0);
        let ss = StructureAlgebra::direct_sum(&sl2, &sl2).unwrap();
        assert_eq!(ss.centroid().len(), 2);
        assert!(!ss.is_central());
        assert!(StructureAlgebra::mat(1, 3).is_central());
        assert_eq!(StructureAlgebra::zero(1, 1).centroid().len(), 1);
    }

    #[test]
    fn simplicity() {
        assert!(StructureAlgebra::mat(1, 2).is_simple());
        assert!(StructureAlgebra::sl(1, 2).is_simple());
        let sl2 = StructureAlgebra::sl(1, 2);
        assert!(!StructureAlgebra::direct_sum(&sl2, &sl2).unwrap().is_simple());
        assert!(!StructureAlgebra::zero(1, 1).is_simple());
        assert!(StructureAlgebra::quaternions(1, -1, -1).is_simple());
        assert!(!StructureAlgebra::gl(1, 2).is_simple());
    }

    #[test]
    fn non_central_simple_field_extension() {
        // Q(sqrt 2) = Q[x]/(x^2 - 2) is simple with two-dimensional centroid
        let c = vec![vec![v(1, &[1, 0]), v(1, &[0, 1])], vec![v(1, &[0, 1]), v(1, &[2, 0])]];
        let k = StructureAlgebra::new(1, c, None).unwrap();
        assert!(k.is_simple());
        assert_eq!(k.centroid().len(), 2);
        // Q[x]/(x^2 - 1) = Q x Q is not
        let c = vec![vec![v(1, &[1, 0]), v(1, &[0, 1])], vec![v(1, &[0, 1]), v(1, &[1, 0])]];
        let split = StructureAlgebra::new(1, c, None).unwrap();
        assert!(!split.is_simple());
        // but Q[x]/(x^2 + 1) over Q(i) splits
        let c = vec![vec![v(4, &[1, 0]), v(4, &[0, 1])], vec![v(4, &[0, 1]), v(4, &[-1, 0])]];
        assert!(!StructureAlgebra::new(4, c, None).unwrap().is_simple());
    }

    #[test]
    fn varieties_and_units() {
        let m2 = StructureAlgebra::mat(1, 2);
        assert!(m2.is_associative() && !m2.is_commutative());
        assert_eq!(m2.detect_unit().as_ref(), m2.unit());
        let sl3 = StructureAlgebra::sl(1, 3);
        assert!(sl3.is_lie() && sl3.is_perfect());
        assert_eq!(sl3.dim(), 8);
        assert!(sl3.detect_unit().is_none());
        assert!(!StructureAlgebra::zero(1, 2).is_perfect());
        assert!(StructureAlgebra::sl(1, 2).is_pfgc_findim());
    }
}
