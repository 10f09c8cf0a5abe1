//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(N)-1)` and are
//! reduced modulo the `N`-th cyclotomic polynomial after every operation, so
//! two elements are equal iff their coefficient vectors are equal.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational number; always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("root order unavailable in field: {m} does not divide {n}")]
    RootOrderUnavailable { m: u64, n: u64 },
    #[error("cannot lift from Q(zeta_{from}) to Q(zeta_{to}): {from} does not divide {to}")]
    NotASubfield { from: u64, to: u64 },
    #[error("mixed cyclotomic orders {0} and {1}")]
    OrderMismatch(u64, u64),
    #[error("cannot parse cyclotomic number `{0}`")]
    Parse(String),
}

pub fn euler_phi(n: u64) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result as usize
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn compute_cyclotomic(n: u64) -> Vec<BigInt> {
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_poly(d);
        num = exact_int_div(&num, &den);
    }
    num
}

fn exact_int_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qlen = rem.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

type CycloCache = RwLock<HashMap<u64, Arc<Vec<BigInt>>>>;

/// Integer coefficients (constant term first) of the monic `n`-th cyclotomic
/// polynomial. Results are memoized process-wide.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<CycloCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(n));
    cache.write().unwrap().insert(n, p.clone());
    p
}

/// Element of the cyclotomic field `Q(zeta_order)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CycloNumber { order, coeffs: vec![Rational::zero(); euler_phi(order)] }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, q: Rational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(order: u64, n: i64) -> Self {
        Self::from_rational(order, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(order: u64, p: i64, q: i64) -> Self {
        Self::from_rational(order, Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Builds `sum c_i z^i` for arbitrary exponents, reducing with `z^order = 1`
    /// and then modulo the cyclotomic polynomial.
    pub fn from_power_coeffs(order: u64, coeffs: &[Rational]) -> Self {
        let mut folded = vec![Rational::zero(); order as usize];
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                folded[i % order as usize] += c;
            }
        }
        Self::reduce(order, folded)
    }

    /// `zeta_order^k` for any integer `k`.
    pub fn zeta_pow(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut c = vec![Rational::zero(); e + 1];
        c[e] = Rational::one();
        Self::reduce(order, c)
    }

    /// The generator `zeta_order` of the field.
    pub fn zeta(order: u64) -> Self {
        Self::zeta_pow(order, 1)
    }

    fn reduce(order: u64, mut poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        if poly.len() > deg {
            for k in (deg..poly.len()).rev() {
                let c = std::mem::take(&mut poly[k]);
                if c.is_zero() {
                    continue;
                }
                // z^k = z^(k-deg) * z^deg, with z^deg = -sum phi_i z^i
                for (i, p) in phi.iter().enumerate().take(deg) {
                    if !p.is_zero() {
                        poly[k - deg + i] -= &c * Rational::from_integer(p.clone());
                    }
                }
            }
            poly.truncate(deg);
        }
        poly.resize(deg, Rational::zero());
        CycloNumber { order, coeffs: poly }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.order)
    }

    pub fn one_like(&self) -> Self {
        Self::one(self.order)
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "mixed cyclotomic orders; lift both operands to a common field first"
        );
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.check_order(rhs);
        if self.coeffs.len() == 1 {
            return CycloNumber { order: self.order, coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]] };
        }
        let n = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::reduce(self.order, prod)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the cyclotomic polynomial.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(CycloNumber { order: self.order, coeffs: vec![self.coeffs[0].recip()] });
        }
        let phi: Vec<Rational> =
            cyclotomic_poly(self.order).iter().map(|c| Rational::from_integer(c.clone())).collect();
        let s = rational_poly_inverse_mod(&self.coeffs, &phi);
        Ok(Self::reduce(self.order, s))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        if self.order != rhs.order {
            return Err(FieldError::OrderMismatch(self.order, rhs.order));
        }
        Ok(self.mul_ref(&rhs.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Canonical embedding `Q(zeta_N) -> Q(zeta_N')`, `zeta_N -> zeta_N'^(N'/N)`.
    pub fn lift(&self, new_order: u64) -> Result<Self, FieldError> {
        if new_order % self.order != 0 {
            return Err(FieldError::NotASubfield { from: self.order, to: new_order });
        }
        let step = (new_order / self.order) as usize;
        let mut spread = vec![Rational::zero(); (self.coeffs.len().saturating_sub(1)) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            spread[i * step] = c.clone();
        }
        Ok(Self::from_power_coeffs(new_order, &spread))
    }

    /// Multiplicative order if this element is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        // roots of unity in Q(zeta_N) have order dividing lcm(2, N)
        let bound = self.order.lcm(&2);
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// Norm down to `Q`: determinant of multiplication by `self` on the power basis.
    pub fn norm(&self) -> Rational {
        let n = self.coeffs.len();
        if n == 1 {
            return self.coeffs[0].clone();
        }
        let mut m: Vec<Vec<Rational>> = Vec::with_capacity(n);
        for j in 0..n {
            let col = self * &Self::zeta_pow(self.order, j as i64);
            m.push(col.coeffs);
        }
        rational_det(m)
    }

    pub fn parse(order: u64, s: &str) -> Result<Self, FieldError> {
        parse_cyclo(order, s)
    }
}

/// Returns the primitive `m`-th root of unity `zeta_N^(N/m)`.
pub fn primitive_root(m: u64, order: u64) -> Result<CycloNumber, FieldError> {
    if m == 0 || order % m != 0 {
        return Err(FieldError::RootOrderUnavailable { m, n: order });
    }
    Ok(CycloNumber::zeta_pow(order, (order / m) as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic; operands must live in the same field.
pub fn arith(a: &CycloNumber, b: &CycloNumber, op: ArithOp) -> Result<CycloNumber, FieldError> {
    if a.order != b.order {
        return Err(FieldError::OrderMismatch(a.order, b.order));
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

pub(crate) fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

fn trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![Rational::zero()], r);
    }
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Solves `s * a = 1 (mod m)` over `Q[x]` for coprime `a`, `m`.
fn rational_poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant gcd
    let c = r0[0].clone();
    s0.iter().map(|x| x / &c).collect()
}

impl fmt::Display for CycloNumber {
    /// `c0 + c1*z + c2*z^2 + ...`, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coef = fmt_rational(c);
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}*z"),
                _ => format!("{coef}*z^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.order)
    }
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        Some(Rational::new(p, q))
    } else {
        BigInt::from_str(s).ok().map(Rational::from_integer)
    }
}

/// Parses the serialized form `c0 + c1*z + c2*z^3` (each term `q`, `q*z`,
/// `q*z^k`, `z` or `z^k`; exponents may exceed `phi(N)`).
fn parse_cyclo(order: u64, s: &str) -> Result<CycloNumber, FieldError> {
    let err = || FieldError::Parse(s.to_string());
    let mut acc = CycloNumber::zero(order);
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(err());
    }
    for term in trimmed.split(" + ") {
        let term = term.trim();
        let (coef, power) = match term.split_once('z') {
            None => (parse_rational(term).ok_or_else(err)?, 0i64),
            Some((c, rest)) => {
                let c = c.trim().trim_end_matches('*').trim();
                let coef = match c {
                    "" => Rational::one(),
                    "-" => -Rational::one(),
                    _ => parse_rational(c).ok_or_else(err)?,
                };
                let rest = rest.trim();
                let power = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').and_then(|e| e.trim().parse::<i64>().ok()).ok_or_else(err)?
                };
                (coef, power)
            }
        };
        acc = &acc + &CycloNumber::zeta_pow(order, power).scale(&coef);
    }
    Ok(acc)
}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        self.check_order(rhs);
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self.check_order(rhs);
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        self.mul_ref(rhs)
    }
}

impl Add for CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: CycloNumber) -> CycloNumber {
        &self + &rhs
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: CycloNumber) -> CycloNumber {
        &self - &rhs
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: CycloNumber) -> CycloNumber {
        self.mul_ref(&rhs)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl AddAssign<&CycloNumber> for CycloNumber {
    fn add_assign(&mut self, rhs: &CycloNumber) {
        self.check_order(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycloNumber> for CycloNumber {
    fn sub_assign(&mut self, rhs: &CycloNumber) {
        self.check_order(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

/// `true` when `q` is a perfect square in `Q`.
pub fn is_rational_square(q: &Rational) -> bool {
    if q.is_negative() {
        return false;
    }
    let ok = |n: &BigInt| {
        let r = n.sqrt();
        &(&r * &r) == n
    };
    ok(q.numer()) && ok(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(order: u64, s: &str) -> CycloNumber {
        CycloNumber::parse(order, s).unwrap()
    }

    #[test]
    fn cyclotomic_polys() {
        let v = |n| cyclotomic_poly(n).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(v(1), "-1,1");
        assert_eq!(v(2), "1,1");
        assert_eq!(v(4), "1,0,1");
        assert_eq!(v(6), "1,-1,1");
        assert_eq!(v(12), "1,0,-1,0,1");
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
    }

    #[test]
    fn basic_arith() {
        let one = CycloNumber::one(4);
        let z = CycloNumber::zeta(4);
        assert_eq!(&one + &z, c(4, "1 + 1*z"));
        assert_eq!(&z * &z, CycloNumber::from_int(4, -1));
        let z3 = CycloNumber::zeta(3);
        assert_eq!(z3.checked_div(&z3).unwrap(), CycloNumber::one(3));
        assert_eq!(CycloNumber::one(5).checked_div(&CycloNumber::zero(5)), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(1, 12).unwrap(), CycloNumber::one(12));
        assert_eq!(primitive_root(2, 12).unwrap(), CycloNumber::from_int(12, -1));
        let i = primitive_root(4, 4).unwrap();
        assert_eq!(i, CycloNumber::zeta(4));
        assert_eq!(i.pow(2).unwrap(), CycloNumber::from_int(4, -1));
        assert_eq!(i.pow(4).unwrap(), CycloNumber::one(4));
        assert!(matches!(primitive_root(5, 12), Err(FieldError::RootOrderUnavailable { .. })));
        for n in [1u64, 2, 3, 4, 6, 8, 12] {
            for m in divisors(n) {
                assert_eq!(primitive_root(m, n).unwrap().root_of_unity_order(), Some(m));
            }
        }
    }

    #[test]
    fn lifting() {
        let minus_one = CycloNumber::from_int(2, -1);
        assert_eq!(minus_one.lift(4).unwrap(), CycloNumber::from_int(4, -1));
        assert_eq!(CycloNumber::zeta(3).lift(6).unwrap(), CycloNumber::zeta_pow(6, 2));
        let a = c(3, "1/2 + -3*z");
        assert_eq!(a.lift(6).unwrap().lift(12).unwrap(), a.lift(12).unwrap());
        assert!(a.lift(4).is_err());
    }

    #[test]
    fn display_and_parse() {
        let a = c(12, "1/2 + -3*z + 5*z^3");
        assert_eq!(a.to_string(), "1/2 + -3*z + 5*z^3");
        assert_eq!(c(12, &a.to_string()), a);
        assert_eq!(CycloNumber::zero(5).to_string(), "0");
        // z^4 = z^2 - 1 in Q(zeta_12)
        assert_eq!(c(12, "z^4"), c(12, "-1 + 1*z^2"));
        assert!(CycloNumber::parse(4, "1 + q").is_err());
    }

    #[test]
    fn norms() {
        // N(1 + i) = 2
        assert_eq!(c(4, "1 + 1*z").norm(), Rational::from_integer(2.into()));
        assert_eq!(CycloNumber::from_int(3, 2).norm(), Rational::from_integer(4.into()));
    }
}
