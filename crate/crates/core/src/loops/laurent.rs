//! Finitely supported elements of `A ⊗ k[z_1^±1, ..., z_p^±1]`.

use std::collections::BTreeMap;

use crate::exactnum::CycloNumber;
use crate::findim::StructureAlgebra;
use crate::linalg::{self, is_zero_vec, LinearMap, Vector};

use super::LoopError;

pub type Degree = Vec<i64>;

/// Sum of `a_j ⊗ z^j` over finitely many multidegrees `j`. Only nonzero
/// coefficient vectors are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentElement {
    arity: usize,
    dim: usize,
    order: u64,
    terms: BTreeMap<Degree, Vector>,
}

impl LaurentElement {
    pub fn zero(arity: usize, dim: usize, order: u64) -> Self {
        LaurentElement { arity, dim, order, terms: BTreeMap::new() }
    }

    /// `a ⊗ z^degree`
    pub fn monomial(a: Vector, degree: Degree, order: u64) -> Self {
        let mut x = Self::zero(degree.len(), a.len(), order);
        x.add_term(degree, &a);
        x
    }

    pub fn from_terms(arity: usize, dim: usize, order: u64, terms: impl IntoIterator<Item = (Degree, Vector)>) -> Self {
        let mut x = Self::zero(arity, dim, order);
        for (d, v) in terms {
            assert_eq!(d.len(), arity, "degree arity");
            x.add_term(d, &v);
        }
        x
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Degree, Vector> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, degree: &[i64]) -> Vector {
        self.terms.get(degree).cloned().unwrap_or_else(|| linalg::zero_vec(self.order, self.dim))
    }

    pub fn support(&self) -> impl Iterator<Item = &Degree> {
        self.terms.keys()
    }

    /// `self += a ⊗ z^degree`
    pub fn add_term(&mut self, degree: Degree, a: &[CycloNumber]) {
        if is_zero_vec(a) {
            return;
        }
        match self.terms.get_mut(&degree) {
            Some(v) => {
                for (x, y) in v.iter_mut().zip(a) {
                    *x += y;
                }
                if is_zero_vec(v) {
                    self.terms.remove(&degree);
                }
            }
            None => {
                self.terms.insert(degree, a.to_vec());
            }
        }
    }

    pub fn add(&self, other: &LaurentElement) -> LaurentElement {
        let mut out = self.clone();
        for (d, v) in &other.terms {
            out.add_term(d.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &LaurentElement) -> LaurentElement {
        self.add(&other.scale(&-CycloNumber::one(self.order)))
    }

    pub fn scale(&self, c: &CycloNumber) -> LaurentElement {
        if c.is_zero() {
            return Self::zero(self.arity, self.dim, self.order);
        }
        LaurentElement {
            terms: self.terms.iter().map(|(d, v)| (d.clone(), linalg::vec_scale(v, c))).collect(),
            ..self.clone()
        }
    }

    /// `z^shift · self`
    pub fn shift(&self, shift: &[i64]) -> LaurentElement {
        LaurentElement {
            terms: self.terms.iter().map(|(d, v)| (d.iter().zip(shift).map(|(a, b)| a + b).collect(), v.clone())).collect(),
            ..self.clone()
        }
    }

    /// Applies a linear map of `A` to every coefficient.
    pub fn map_coefficients(&self, f: &LinearMap) -> LaurentElement {
        let mut out = Self::zero(self.arity, f.out_dim(), self.order);
        for (d, v) in &self.terms {
            out.add_term(d.clone(), &f.apply(v));
        }
        out
    }

    /// Splits off the last variable: `self = sum_j x_j ⊗ z_p^j`.
    pub fn split_last(&self) -> BTreeMap<i64, LaurentElement> {
        let mut out: BTreeMap<i64, LaurentElement> = BTreeMap::new();
        for (d, v) in &self.terms {
            let (inner, last) = d.split_at(self.arity - 1);
            out.entry(last[0])
                .or_insert_with(|| Self::zero(self.arity - 1, self.dim, self.order))
                .terms
                .insert(inner.to_vec(), v.clone());
        }
        out
    }

    /// Appends a last variable with exponent `j`.
    pub fn extend_last(&self, j: i64) -> LaurentElement {
        LaurentElement {
            arity: self.arity + 1,
            terms: self
                .terms
                .iter()
                .map(|(d, v)| {
                    let mut d = d.clone();
                    d.push(j);
                    (d, v.clone())
                })
                .collect(),
            ..self.clone()
        }
    }

    pub fn in_box(&self, radius: &[i64]) -> bool {
        self.terms.keys().all(|d| d.iter().zip(radius).all(|(a, r)| a.abs() <= *r))
    }

    /// Largest absolute exponent of each variable.
    pub fn extent(&self) -> Degree {
        let mut out = vec![0; self.arity];
        for d in self.terms.keys() {
            for (o, a) in out.iter_mut().zip(d) {
                *o = (*o).max(a.abs());
            }
        }
        out
    }

    /// Flattens into one vector indexed by `(degree position, coordinate)`.
    pub fn to_window_vector(&self, degrees: &[Degree]) -> Option<Vector> {
        let mut v = linalg::zero_vec(self.order, degrees.len() * self.dim);
        let mut seen = 0;
        for (pos, d) in degrees.iter().enumerate() {
            if let Some(c) = self.terms.get(d) {
                v[pos * self.dim..(pos + 1) * self.dim].clone_from_slice(c);
                seen += 1;
            }
        }
        (seen == self.terms.len()).then_some(v)
    }
}

/// Convolution product on `A ⊗ S^{⊗p}`.
/// `z1^2 z2^-1` style name of a monomial; `1` for degree zero.
pub fn monomial_string(d: &[i64]) -> String {
    let parts: Vec<String> = d
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

impl LaurentElement {
    /// Human-readable form using `labels` for the coefficient basis. With a
    /// single label `1` the coefficients are printed as plain scalars.
    pub fn render(&self, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let scalar = labels.len() == 1 && labels[0] == "1";
        let mut out = Vec::new();
        for (d, v) in &self.terms {
            let m = monomial_string(d);
            let coeff = if scalar {
                let c = &v[0];
                if c.is_one() {
                    None
                } else if (-c).is_one() {
                    Some("-".to_string())
                } else {
                    Some(format!("({c})"))
                }
            } else {
                let parts: Vec<String> = v
                    .iter()
                    .zip(labels)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, l)| if c.is_one() { l.clone() } else { format!("({c})*{l}") })
                    .collect();
                Some(format!("({})", parts.join(" + ")))
            };
            out.push(match (coeff, m.as_str()) {
                (None, m) => m.to_string(),
                (Some(c), "1") if c == "-" => "-1".to_string(),
                (Some(c), "1") => c,
                (Some(c), m) if c == "-" => format!("-{m}"),
                (Some(c), m) => format!("{c} {m}"),
            });
        }
        out.join(" + ")
    }
}

pub fn laurent_multiply(alg: &StructureAlgebra, x: &LaurentElement, y: &LaurentElement) -> Result<LaurentElement, LoopError> {
    if x.arity != y.arity {
        return Err(LoopError::ArityMismatch { expected: x.arity, got: y.arity });
    }
    if x.dim != alg.dim() || y.dim != alg.dim() {
        return Err(LoopError::DimensionMismatch { expected: alg.dim(), got: x.dim.max(y.dim) });
    }
    let mut acc: BTreeMap<Degree, Vector> = BTreeMap::new();
    for (d1, a) in &x.terms {
        for (d2, b) in &y.terms {
            let d: Degree = d1.iter().zip(d2).map(|(s, t)| s + t).collect();
            let slot = acc.entry(d).or_insert_with(|| linalg::zero_vec(alg.order(), alg.dim()));
            alg.mul_acc(slot, a, b);
        }
    }
    acc.retain(|_, v| !is_zero_vec(v));
    Ok(LaurentElement { arity: x.arity, dim: alg.dim(), order: alg.order(), terms: acc })
}

/// All multidegrees `d` with `|d_i| <= radius_i`, in lexicographic order.
pub fn box_degrees(radius: &[i64]) -> Vec<Degree> {
    let mut out = vec![Vec::new()];
    for &r in radius {
        out = out
            .into_iter()
            .flat_map(|d| {
                (-r..=r).map(move |a| {
                    let mut d = d.clone();
                    d.push(a);
                    d
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_addition() {
        let sl2 = StructureAlgebra::sl(1, 2);
        let x = LaurentElement::monomial(sl2.basis_vector(0), vec![1], 1);
        let y = LaurentElement::monomial(sl2.basis_vector(2), vec![-1], 1);
        let p = laurent_multiply(&sl2, &x, &y).unwrap();
        assert_eq!(p, LaurentElement::monomial(sl2.basis_vector(1), vec![0], 1));
        let z = LaurentElement::zero(1, 3, 1);
        assert!(laurent_multiply(&sl2, &x, &z).unwrap().is_zero());
        let w = LaurentElement::monomial(sl2.basis_vector(0), vec![1, 1], 1);
        assert!(laurent_multiply(&sl2, &x, &w).is_err());
    }

    #[test]
    fn split_and_extend() {
        let x = LaurentElement::from_terms(
            2,
            1,
            1,
            [(vec![1, 2], vec![CycloNumber::one(1)]), (vec![0, 2], vec![CycloNumber::one(1)]), (vec![3, -1], vec![CycloNumber::one(1)])],
        );
        let parts = x.split_last();
        assert_eq!(parts.len(), 2);
        let back = parts.iter().fold(LaurentElement::zero(2, 1, 1), |acc, (j, p)| acc.add(&p.extend_last(*j)));
        assert_eq!(back, x);
        assert_eq!(box_degrees(&[1, 1]).len(), 9);
        assert_eq!(x.extent(), vec![3, 2]);
    }
}
