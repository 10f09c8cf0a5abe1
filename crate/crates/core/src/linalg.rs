//! Exact linear algebra over `Q(zeta_N)`: reduced echelon forms, kernels,
//! canonical subspaces, linear maps and an incremental sparse eliminator.

use std::collections::{BTreeMap, HashMap};

use crate::exactnum::{CycloNumber, FieldError};

pub type Vector = Vec<CycloNumber>;

pub fn zero_vec(order: u64, n: usize) -> Vector {
    vec![CycloNumber::zero(order); n]
}

pub fn unit_vec(order: u64, n: usize, i: usize) -> Vector {
    let mut v = zero_vec(order, n);
    v[i] = CycloNumber::one(order);
    v
}

pub fn is_zero_vec(v: &[CycloNumber]) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub fn vec_add(a: &[CycloNumber], b: &[CycloNumber]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[CycloNumber], b: &[CycloNumber]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[CycloNumber], s: &CycloNumber) -> Vector {
    a.iter().map(|x| x * s).collect()
}

/// `acc += s * v`
pub fn axpy(acc: &mut [CycloNumber], s: &CycloNumber, v: &[CycloNumber]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(s * x);
        }
    }
}

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref(rows: &mut Vec<Vector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            rows[r] = vec_scale(&rows[r], &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = -&row[col];
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vector]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows * x = 0}`, one vector per free column.
pub fn kernel(rows: &[Vector], ncols: usize, order: u64) -> Vec<Vector> {
    let mut m: Vec<Vector> = rows.to_vec();
    let pivots = rref(&mut m);
    kernel_from_rref(&m, &pivots, ncols, order)
}

fn kernel_from_rref(m: &[Vector], pivots: &[usize], ncols: usize, order: u64) -> Vec<Vector> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = unit_vec(order, ncols, f);
            for (row, &p) in m.iter().zip(pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect()
}

/// A subspace of `K^n` held in reduced row echelon form, so that equality
/// of subspaces is equality of representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    order: u64,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(ambient_dim: usize, order: u64, vectors: Vec<Vector>) -> Self {
        let mut basis = vectors;
        debug_assert!(basis.iter().all(|v| v.len() == ambient_dim));
        let pivots = rref(&mut basis);
        Subspace { ambient_dim, order, basis, pivots }
    }

    pub fn zero(ambient_dim: usize, order: u64) -> Self {
        Self::new(ambient_dim, order, Vec::new())
    }

    pub fn full(ambient_dim: usize, order: u64) -> Self {
        let basis = (0..ambient_dim).map(|i| unit_vec(order, ambient_dim, i)).collect();
        Self::new(ambient_dim, order, basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coefficients of `v` in the echelon basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[CycloNumber]) -> Option<Vector> {
        let coeffs: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            axpy(&mut rest, &-c, b);
        }
        is_zero_vec(&rest).then_some(coeffs)
    }

    pub fn contains(&self, v: &[CycloNumber]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::new(self.ambient_dim, self.order, v)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // x = sum a_i u_i = sum b_j w_j: kernel of [U^T | -W^T]
        let (p, q) = (self.dim(), other.dim());
        if p == 0 || q == 0 {
            return Subspace::zero(self.ambient_dim, self.order);
        }
        let rows: Vec<Vector> = (0..self.ambient_dim)
            .map(|k| {
                let mut r: Vector = self.basis.iter().map(|u| u[k].clone()).collect();
                r.extend(other.basis.iter().map(|w| -&w[k]));
                r
            })
            .collect();
        let ker = kernel(&rows, p + q, self.order);
        let vecs = ker
            .into_iter()
            .map(|c| {
                let mut x = zero_vec(self.order, self.ambient_dim);
                for (a, u) in c.iter().zip(&self.basis) {
                    axpy(&mut x, a, u);
                }
                x
            })
            .collect();
        Subspace::new(self.ambient_dim, self.order, vecs)
    }
}

/// A linear map `K^n -> K^m` acting on column coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    rows: Vec<Vector>,
    cols: usize,
}

impl LinearMap {
    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        LinearMap { rows, cols }
    }

    /// Builds the map whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vector], out_dim: usize) -> Self {
        let cols = columns.len();
        let rows = (0..out_dim).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
        LinearMap { rows, cols }
    }

    pub fn identity(order: u64, n: usize) -> Self {
        LinearMap { rows: (0..n).map(|i| unit_vec(order, n, i)).collect(), cols: n }
    }

    pub fn zero(order: u64, out_dim: usize, in_dim: usize) -> Self {
        LinearMap { rows: vec![zero_vec(order, in_dim); out_dim], cols: in_dim }
    }

    pub fn scalar(c: &CycloNumber, n: usize) -> Self {
        Self::identity(c.order(), n).scale(c)
    }

    pub fn in_dim(&self) -> usize {
        self.cols
    }

    pub fn out_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycloNumber {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn apply(&self, v: &[CycloNumber]) -> Vector {
        self.rows
            .iter()
            .map(|r| {
                let mut acc = v.first().map_or_else(|| CycloNumber::zero(1), |x| x.zero_like());
                for (a, x) in r.iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        let cols: Vec<Vector> = (0..other.cols).map(|j| self.apply(&other.column(j))).collect();
        LinearMap::from_columns(&cols, self.out_dim())
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| vec_add(a, b)).collect(),
            cols: self.cols,
        }
    }

    pub fn sub(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| vec_sub(a, b)).collect(),
            cols: self.cols,
        }
    }

    pub fn scale(&self, c: &CycloNumber) -> LinearMap {
        LinearMap { rows: self.rows.iter().map(|r| vec_scale(r, c)).collect(), cols: self.cols }
    }

    pub fn pow(&self, e: u64) -> LinearMap {
        let n = self.cols;
        let order = self.order();
        let mut acc = LinearMap::identity(order, n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        self.rows.first().and_then(|r| r.first()).map_or(1, |c| c.order())
    }

    pub fn is_identity(&self) -> bool {
        self.rows.len() == self.cols
            && self.rows.iter().enumerate().all(|(i, r)| {
                r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| is_zero_vec(r))
    }

    pub fn trace(&self) -> CycloNumber {
        let mut t = CycloNumber::zero(self.order());
        for (i, r) in self.rows.iter().enumerate() {
            t += &r[i];
        }
        t
    }

    pub fn transpose(&self) -> LinearMap {
        LinearMap { rows: (0..self.cols).map(|j| self.column(j)).collect(), cols: self.rows.len() }
    }

    pub fn inverse(&self) -> Result<LinearMap, FieldError> {
        let n = self.cols;
        if self.rows.len() != n {
            return Err(FieldError::DivisionByZero);
        }
        let order = self.order();
        let mut aug: Vec<Vector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend(unit_vec(order, n, i));
                row
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(LinearMap { rows: aug.into_iter().map(|r| r[n..].to_vec()).collect(), cols: n })
    }

    /// Row-major flattening, used when maps are unknowns of a linear system.
    pub fn flatten(&self) -> Vector {
        self.rows.iter().flat_map(|r| r.iter().cloned()).collect()
    }

    pub fn from_flat(n: usize, v: &[CycloNumber]) -> LinearMap {
        LinearMap { rows: v.chunks(n).map(|c| c.to_vec()).collect(), cols: n }
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::new(self.cols, self.order(), kernel(&self.rows, self.cols, self.order()))
    }

    pub fn image(&self) -> Subspace {
        let cols = (0..self.cols).map(|j| self.column(j)).collect();
        Subspace::new(self.out_dim(), self.order(), cols)
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows)
    }

    /// Largest subspace of `sub` mapped into `target`... restricted to the
    /// preimage: `{v in K^n : self(v) in target}`.
    pub fn preimage(&self, target: &Subspace) -> Subspace {
        // v |-> residual of self(v) modulo target must vanish
        let order = self.order();
        let n = self.cols;
        let residual_rows: Vec<Vector> = {
            // complement coordinates: use rref pivots of target, residual = x - sum x[p_i] b_i
            let m = self.out_dim();
            let mut proj = LinearMap::identity(order, m);
            for (b, &p) in target.basis().iter().zip(target.pivots()) {
                // subtract b * e_p^T
                for (i, bi) in b.iter().enumerate() {
                    if !bi.is_zero() {
                        proj.rows[i][p] -= bi;
                    }
                }
            }
            proj.compose(self).rows
        };
        Subspace::new(n, order, kernel(&residual_rows, n, order))
    }
}

/// Incremental Gaussian elimination on sparse rows. Rows are kept with a
/// leading coefficient of one; new rows are reduced against existing pivots
/// in increasing column order.
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    order: u64,
    rows: Vec<BTreeMap<usize, CycloNumber>>,
    pivot_row: HashMap<usize, usize>,
}

impl SparseEchelon {
    pub fn new(order: u64) -> Self {
        SparseEchelon { order, rows: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the current pivots; returns the remainder.
    pub fn reduce(&self, mut row: BTreeMap<usize, CycloNumber>) -> BTreeMap<usize, CycloNumber> {
        row.retain(|_, v| !v.is_zero());
        let mut out = BTreeMap::new();
        while let Some((&k, _)) = row.iter().next() {
            let c = row.remove(&k).unwrap();
            match self.pivot_row.get(&k) {
                Some(&ri) => {
                    for (&col, v) in self.rows[ri].iter().skip(1) {
                        let delta = &c * v;
                        let e = row.entry(col).or_insert_with(|| CycloNumber::zero(self.order));
                        *e -= &delta;
                        if e.is_zero() {
                            row.remove(&col);
                        }
                    }
                }
                None => {
                    out.insert(k, c);
                }
            }
        }
        out
    }

    /// Adds a row; returns `true` if it was independent of the previous ones.
    pub fn insert(&mut self, row: BTreeMap<usize, CycloNumber>) -> bool {
        let mut row = row;
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&k, _)) = row.iter().next() else {
                return false;
            };
            match self.pivot_row.get(&k) {
                Some(&ri) => {
                    let c = row.remove(&k).unwrap();
                    for (&col, v) in self.rows[ri].iter().skip(1) {
                        let delta = &c * v;
                        let e = row.entry(col).or_insert_with(|| CycloNumber::zero(self.order));
                        *e -= &delta;
                        if e.is_zero() {
                            row.remove(&col);
                        }
                    }
                }
                None => {
                    let inv = row[&k].inv().expect("nonzero leading coefficient");
                    for v in row.values_mut() {
                        *v = &*v * &inv;
                    }
                    self.pivot_row.insert(k, self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
    }

    pub fn insert_dense(&mut self, row: &[CycloNumber]) -> bool {
        let sparse = row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
        self.insert(sparse)
    }

    pub fn contains_dense(&self, row: &[CycloNumber]) -> bool {
        let sparse = row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
        self.reduce(sparse).is_empty()
    }

    /// Fully reduced rows sorted by pivot column.
    pub fn reduced_rows(&self) -> Vec<(usize, BTreeMap<usize, CycloNumber>)> {
        let mut pivots: Vec<usize> = self.pivot_row.keys().copied().collect();
        pivots.sort_unstable();
        let mut rows: BTreeMap<usize, BTreeMap<usize, CycloNumber>> =
            pivots.iter().map(|&p| (p, self.rows[self.pivot_row[&p]].clone())).collect();
        // back substitution, largest pivot first
        for &p in pivots.iter().rev() {
            let prow = rows[&p].clone();
            for (_, row) in rows.range_mut(..p) {
                if let Some(c) = row.remove(&p) {
                    for (&col, v) in prow.iter().skip(1) {
                        let e = row.entry(col).or_insert_with(|| CycloNumber::zero(self.order));
                        *e -= &(&c * v);
                        if e.is_zero() {
                            row.remove(&col);
                        }
                    }
                }
            }
        }
        rows.into_iter().collect()
    }

    /// Null space of the accumulated rows in `K^ncols`, one vector per free
    /// column, in increasing free-column order.
    pub fn kernel(&self, ncols: usize) -> Vec<BTreeMap<usize, CycloNumber>> {
        let reduced = self.reduced_rows();
        let mut by_free: BTreeMap<usize, BTreeMap<usize, CycloNumber>> = (0..ncols)
            .filter(|c| !self.pivot_row.contains_key(c))
            .map(|f| (f, BTreeMap::from([(f, CycloNumber::one(self.order))])))
            .collect();
        for (p, row) in &reduced {
            for (&col, v) in row.iter().skip(1) {
                if let Some(vec) = by_free.get_mut(&col) {
                    vec.insert(*p, -v);
                }
            }
        }
        by_free.into_values().collect()
    }
}
