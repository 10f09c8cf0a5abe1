//! Univariate polynomials over `Q(zeta_N)`.

use std::fmt;

use crate::exactnum::{CycloNumber, Rational};
use crate::linalg::{self, LinearMap, Vector};

/// Coefficients stored from the constant term upward, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    order: u64,
    coeffs: Vec<CycloNumber>,
}

impl Poly {
    pub fn new(order: u64, mut coeffs: Vec<CycloNumber>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { order, coeffs }
    }

    pub fn from_rationals(order: u64, coeffs: &[Rational]) -> Self {
        Self::new(order, coeffs.iter().map(|c| CycloNumber::from_rational(order, c.clone())).collect())
    }

    pub fn zero(order: u64) -> Self {
        Poly { order, coeffs: Vec::new() }
    }

    pub fn constant(c: CycloNumber) -> Self {
        Self::new(c.order(), vec![c])
    }

    pub fn one(order: u64) -> Self {
        Self::constant(CycloNumber::one(order))
    }

    pub fn x(order: u64) -> Self {
        Self::new(order, vec![CycloNumber::zero(order), CycloNumber::one(order)])
    }

    /// `x - c`
    pub fn linear(c: &CycloNumber) -> Self {
        Self::new(c.order(), vec![-c, CycloNumber::one(c.order())])
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[CycloNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> CycloNumber {
        self.coeffs.last().cloned().unwrap_or_else(|| CycloNumber::zero(self.order))
    }

    pub fn coeff(&self, i: usize) -> CycloNumber {
        self.coeffs.get(i).cloned().unwrap_or_else(|| CycloNumber::zero(self.order))
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_rational().is_some())
    }

    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.order, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.order, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.order);
        }
        let mut out = vec![CycloNumber::zero(self.order); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Poly::new(self.order, out)
    }

    pub fn scale(&self, c: &CycloNumber) -> Poly {
        Poly::new(self.order, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv().expect("nonzero leading coefficient"))
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.leading().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut qc = vec![CycloNumber::zero(self.order); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = &r[top] * &inv;
            if !c.is_zero() {
                for (k, dk) in d.coeffs.iter().enumerate() {
                    let idx = top - dd + k;
                    r[idx] -= &(&c * dk);
                }
                qc[top - dd] = c;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) && r.len() > dd {
                r.pop();
            }
        }
        (Poly::new(self.order, qc), Poly::new(self.order, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, f: &Poly) -> bool {
        f.rem(self).is_zero()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.order,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into()))).collect(),
        )
    }

    pub fn eval(&self, x: &CycloNumber) -> CycloNumber {
        let mut acc = CycloNumber::zero(self.order);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `p(x + c)`
    pub fn shift(&self, c: &CycloNumber) -> Poly {
        let lin = Poly::new(self.order, vec![c.clone(), CycloNumber::one(self.order)]);
        let mut acc = Poly::zero(self.order);
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(a.clone()));
        }
        acc
    }

    /// `p(A)` for a square map `A`.
    pub fn eval_map(&self, a: &LinearMap) -> LinearMap {
        let n = a.in_dim();
        let mut acc = LinearMap::zero(self.order, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.compose(a).add(&LinearMap::scalar(c, n));
        }
        acc
    }

    /// Squarefree part `p / gcd(p, p')`, made monic.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    pub fn lift(&self, order: u64) -> Poly {
        Poly::new(order, self.coeffs.iter().map(|c| c.lift(order).expect("subfield")).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Minimal polynomial of a square map, found as the first linear dependence
/// among its powers.
pub fn minpoly(a: &LinearMap) -> Poly {
    let n = a.in_dim();
    let order = a.order();
    let mut powers: Vec<Vector> = vec![LinearMap::identity(order, n).flatten()];
    let mut cur = LinearMap::identity(order, n);
    loop {
        cur = cur.compose(a);
        let target = cur.flatten();
        let k = powers.len();
        // solve sum c_i P_i = target
        let rows: Vec<Vector> = (0..n * n)
            .map(|r| {
                let mut row: Vector = powers.iter().map(|p| p[r].clone()).collect();
                row.push(target[r].clone());
                row
            })
            .collect();
        let ker = linalg::kernel(&rows, k + 1, order);
        if let Some(v) = ker.iter().find(|v| !v[k].is_zero()) {
            let inv = v[k].inv().expect("nonzero");
            let coeffs = (0..=k).map(|i| &v[i] * &inv).collect();
            return Poly::new(order, coeffs);
        }
        powers.push(target);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(order: u64, xs: &[i64]) -> Poly {
        Poly::new(order, xs.iter().map(|&x| CycloNumber::from_int(order, x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let f = qi(1, &[-1, 0, 1]); // x^2 - 1
        let g = qi(1, &[1, 1]); // x + 1
        let (q, r) = f.divrem(&g);
        assert_eq!(q, qi(1, &[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&qi(1, &[-1, 0, 0, 1])), qi(1, &[-1, 1]));
        assert!(qi(1, &[1, 2, 1]).squarefree_part() == qi(1, &[1, 1]));
    }

    #[test]
    fn eval_and_shift() {
        let i = CycloNumber::zeta(4);
        let f = qi(4, &[1, 0, 1]);
        assert!(f.eval(&i).is_zero());
        let s = f.shift(&CycloNumber::one(4));
        assert_eq!(s, qi(4, &[2, 2, 1]));
    }

    #[test]
    fn minpoly_of_rotation() {
        let one = CycloNumber::one(1);
        let z = CycloNumber::zero(1);
        let m = LinearMap::from_rows(vec![vec![z.clone(), one.clone()], vec![-&one, z]], 2);
        assert_eq!(minpoly(&m), qi(1, &[1, 0, 1]));
        assert_eq!(minpoly(&LinearMap::identity(1, 3)), qi(1, &[-1, 1]));
    }
}
