//! Factorization of polynomials over `Q` (Zassenhaus, one large prime) and
//! over `Q(zeta_N)` (Trager's norm method).

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{euler_phi, CycloNumber, Rational};
use crate::qpoly::Poly;

type ZPoly = Vec<BigInt>;

fn trim(f: &mut ZPoly) {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
}

fn deg(f: &ZPoly) -> usize {
    f.len() - 1
}

fn content(f: &ZPoly) -> BigInt {
    f.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive_part(f: &ZPoly) -> ZPoly {
    let mut c = content(f);
    if f.last().is_some_and(|l| l.is_negative()) {
        c = -c;
    }
    f.iter().map(|x| x / &c).collect()
}

/// Exact division over `Z`, `None` when the quotient is not integral.
fn zdiv_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    if a.len() < b.len() {
        return None;
    }
    let mut r = a.clone();
    let db = deg(b);
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for top in (db..r.len()).rev() {
        let (c, rem) = r[top].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (k, bk) in b.iter().enumerate() {
                r[top - db + k] -= &c * bk;
            }
        }
        q[top - db] = c;
    }
    r.iter().all(|x| x.is_zero()).then_some(q)
}

fn rational_to_zpoly(f: &[Rational]) -> ZPoly {
    let l = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut z: ZPoly = f.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    trim(&mut z);
    primitive_part(&z)
}

struct Modp {
    p: BigInt,
}

impl Modp {
    fn red(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.p)
    }

    fn poly(&self, f: &ZPoly) -> ZPoly {
        let mut g: ZPoly = f.iter().map(|c| self.red(c)).collect();
        trim(&mut g);
        g
    }

    fn inv(&self, x: &BigInt) -> BigInt {
        x.modpow(&(&self.p - 2u32), &self.p)
    }

    fn sub(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        let mut out: ZPoly = (0..n).map(|i| self.red(&(a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)))).collect();
        trim(&mut out);
        out
    }

    fn mul(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.poly(&out)
    }

    fn divrem(&self, a: &ZPoly, b: &ZPoly) -> (ZPoly, ZPoly) {
        let db = deg(b);
        let inv = self.inv(b.last().unwrap());
        let mut r = a.clone();
        let mut q = vec![BigInt::zero(); a.len().saturating_sub(db)];
        while r.len() > db {
            let top = r.len() - 1;
            let c = self.red(&(&r[top] * &inv));
            if !c.is_zero() {
                for (k, bk) in b.iter().enumerate() {
                    let idx = top - db + k;
                    r[idx] = self.red(&(&r[idx] - &c * bk));
                }
                q[top - db] = c;
            }
            r.pop();
        }
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    fn rem(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        self.divrem(a, b).1
    }

    fn monic(&self, a: &ZPoly) -> ZPoly {
        let inv = self.inv(a.last().unwrap());
        a.iter().map(|c| self.red(&(c * &inv))).collect()
    }

    fn gcd(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    fn powmod(&self, base: &ZPoly, e: &BigInt, m: &ZPoly) -> ZPoly {
        let mut result = vec![BigInt::one()];
        let mut b = self.rem(base, m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = self.rem(&self.mul(&result, &b), m);
            }
            if i + 1 < bits {
                b = self.rem(&self.mul(&b, &b), m);
            }
        }
        result
    }

    fn derivative(&self, f: &ZPoly) -> ZPoly {
        let mut d: ZPoly = f.iter().enumerate().skip(1).map(|(i, c)| self.red(&(c * BigInt::from(i)))).collect();
        trim(&mut d);
        d
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn ddf(&self, f: &ZPoly) -> Vec<(ZPoly, usize)> {
        let x = vec![BigInt::zero(), BigInt::one()];
        let mut out = Vec::new();
        let mut fs = f.clone();
        let mut h = x.clone();
        let mut i = 1;
        while deg(&fs) >= 2 * i {
            h = self.powmod(&h, &self.p, &fs);
            let g = self.gcd(&self.sub(&h, &x), &fs);
            if deg(&g) > 0 {
                fs = self.divrem(&fs, &g).0;
                h = self.rem(&h, &fs);
                out.push((g, i));
            }
            i += 1;
        }
        if deg(&fs) > 0 {
            let d = deg(&fs);
            out.push((fs, d));
        }
        out
    }

    /// Equal-degree splitting (Cantor-Zassenhaus).
    fn edf(&self, g: &ZPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ZPoly> {
        if deg(g) == d {
            return vec![g.clone()];
        }
        let e = (self.p.pow(d as u32) - 1u32) / 2u32;
        loop {
            let mut a: ZPoly = (0..deg(g)).map(|_| rng.gen_bigint_range(&BigInt::zero(), &self.p)).collect();
            trim(&mut a);
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, g), &[BigInt::one()].to_vec());
            let c = self.gcd(&b, g);
            if !c.is_empty() && deg(&c) > 0 && deg(&c) < deg(g) {
                let rest = self.divrem(g, &c).0;
                let mut out = self.edf(&c, d, rng);
                out.extend(self.edf(&self.monic(&rest), d, rng));
                return out;
            }
        }
    }
}

fn is_probable_prime(n: &BigInt, rng: &mut ChaCha8Rng) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    for sp in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let sp = BigInt::from(sp);
        if n == &sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for _ in 0..24 {
        let a = rng.gen_bigint_range(&two, &nm1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn next_prime_above(lo: &BigInt, rng: &mut ChaCha8Rng) -> BigInt {
    let mut c = lo + rng.gen_bigint_range(&BigInt::zero(), &(lo / 16u32 + 16u32));
    if c.is_even() {
        c += 1u32;
    }
    while !is_probable_prime(&c, rng) {
        c += 2u32;
    }
    c
}

fn symmetric(x: &BigInt, p: &BigInt) -> BigInt {
    let r = x.mod_floor(p);
    if &r * 2u32 > *p {
        r - p
    } else {
        r
    }
}

/// Irreducible factors over `Z` of a primitive squarefree polynomial.
fn zassenhaus(f: &ZPoly, rng: &mut ChaCha8Rng) -> Vec<ZPoly> {
    let n = deg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let lc = f.last().unwrap().abs();
    let bound = &lc * (BigInt::one() << n) * (norm2.sqrt() + 1u32);
    let lo = bound * 2u32 + 1u32;

    // try a few primes, keep the one with the fewest modular factors
    let mut best: Option<(Modp, Vec<ZPoly>)> = None;
    let mut tried = 0;
    while tried < 3 {
        let p = next_prime_above(&lo, rng);
        let m = Modp { p };
        if (f.last().unwrap() % &m.p).is_zero() {
            continue;
        }
        let fp = m.monic(&m.poly(f));
        if deg(&m.gcd(&fp, &m.derivative(&fp))) > 0 {
            continue;
        }
        tried += 1;
        let dd = m.ddf(&fp);
        let count: usize = dd.iter().map(|(g, d)| deg(g) / d).sum();
        if best.as_ref().is_none_or(|(_, fs)| count < fs.len()) {
            let factors: Vec<ZPoly> = dd.iter().flat_map(|(g, d)| m.edf(g, *d, rng)).collect();
            best = Some((m, factors));
        }
    }
    let (m, modular) = best.unwrap();
    let p = m.p.clone();

    let mut remaining: Vec<usize> = (0..modular.len()).collect();
    let mut current = f.clone();
    let mut result = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        let mut combo: Vec<usize> = (0..s).collect();
        loop {
            let lcf = current.last().unwrap().clone();
            let mut g = vec![lcf];
            for &ci in &combo {
                g = m.mul(&g, &modular[remaining[ci]]);
            }
            let mut g: ZPoly = g.iter().map(|c| symmetric(c, &p)).collect();
            trim(&mut g);
            let gp = primitive_part(&g);
            if let Some(q) = zdiv_exact(&current, &gp) {
                found = Some((combo.clone(), gp, q));
                break;
            }
            if !next_combination(&mut combo, remaining.len()) {
                break;
            }
        }
        match found {
            Some((combo, g, q)) => {
                result.push(g);
                current = primitive_part(&q);
                let drop: Vec<usize> = combo.iter().map(|&c| remaining[c]).collect();
                remaining.retain(|i| !drop.contains(i));
            }
            None => s += 1,
        }
    }
    if deg(&current) > 0 {
        result.push(current);
    }
    result
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Distinct monic irreducible factors of a nonzero rational polynomial.
pub fn factor_rational(f: &[Rational], seed: u64) -> Vec<Vec<Rational>> {
    let sf = Poly::from_rationals(1, f).squarefree_part();
    if sf.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let z = rational_to_zpoly(&sf.rational_coeffs().expect("rational"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<Rational>> = zassenhaus(&z, &mut rng)
        .into_iter()
        .map(|g| {
            let l = Rational::from_integer(g.last().unwrap().clone());
            g.into_iter().map(|c| Rational::from_integer(c) / &l).collect()
        })
        .collect();
    out.sort_by_key(|g| g.len());
    out
}

/// `Norm_{F/Q}` of a polynomial with coefficients in `F`, obtained by
/// interpolating the field norm of its values at integer points.
pub fn norm_poly(g: &Poly) -> Vec<Rational> {
    let phi = euler_phi(g.order()) as usize;
    let d = g.degree().unwrap_or(0) * phi;
    let xs: Vec<Rational> = (0..=d as i64).map(|k| Rational::from_integer(k.into())).collect();
    let ys: Vec<Rational> = xs.iter().map(|x| g.eval(&CycloNumber::from_rational(g.order(), x.clone())).norm()).collect();
    interpolate(&xs, &ys)
}

/// Lagrange interpolation through the given points, in monomial form.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    // Newton divided differences
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut poly = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + coef[i]
        let mut next = vec![Rational::zero(); n];
        for k in 0..n {
            if k + 1 < n {
                next[k + 1] += &poly[k];
            }
            next[k] -= &poly[k] * &xs[i];
        }
        next[0] += &coef[i];
        poly = next;
    }
    while poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    poly
}

/// Distinct monic irreducible factors of a nonzero polynomial over `F`.
pub fn factor_over_field(f: &Poly, seed: u64) -> Vec<Poly> {
    let order = f.order();
    let f = f.squarefree_part();
    match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![f],
        _ => {}
    }
    if euler_phi(order) == 1 {
        let rc = f.rational_coeffs().expect("field is Q");
        return factor_rational(&rc, seed).iter().map(|g| Poly::from_rationals(order, g)).collect();
    }
    let zeta = CycloNumber::zeta(order);
    for s in 0i64.. {
        let shift = zeta.scale(&Rational::from_integer(s.into()));
        let g = f.shift(&-&shift);
        let r = norm_poly(&g);
        if !Poly::from_rationals(1, &r).is_squarefree() {
            continue;
        }
        let mut out: Vec<Poly> = factor_rational(&r, seed)
            .iter()
            .filter_map(|ri| {
                let h = g.gcd(&Poly::from_rationals(order, ri));
                (h.degree()? >= 1).then(|| h.shift(&shift).monic())
            })
            .collect();
        out.sort_by_key(|p| p.degree());
        return out;
    }
    unreachable!()
}

/// Roots in `F` of a nonzero polynomial, without multiplicity.
pub fn roots_in_field(f: &Poly, seed: u64) -> Vec<CycloNumber> {
    factor_over_field(f, seed).into_iter().filter(|g| g.degree() == Some(1)).map(|g| -&g.coeff(0)).collect()
}

pub fn is_irreducible(f: &Poly, seed: u64) -> bool {
    f.degree().is_some_and(|d| d >= 1) && f.is_squarefree() && factor_over_field(f, seed).len() == 1
}
