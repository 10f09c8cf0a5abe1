//! A necessary condition for `ad h` to split over `Q(zeta_N)`, checked by
//! reduction modulo a few primes `p ≡ 1 (mod N)`: if the characteristic
//! polynomial splits into linear factors over the field, its reduction does
//! over every `F_p`. Rejecting with this test is exact; accepting proves nothing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::exactnum::{divisors, CycloNumber, Rational};
use crate::findim::StructureAlgebra;
use crate::linalg::Vector;

/// Reductions modulo a few primes; a candidate must pass all of them.
pub(super) struct SplitFilter {
    reductions: Vec<Reduction>,
}

impl SplitFilter {
    pub(super) fn new(alg: &StructureAlgebra) -> Self {
        let mut reductions: Vec<Reduction> = Vec::new();
        for _ in 0..PRIMES {
            let after = reductions.last().map_or(1u64 << 30, |r| r.p);
            reductions.push(Reduction::new(alg, after));
        }
        SplitFilter { reductions }
    }

    /// `false` when `ad h` certainly does not split over the field.
    pub(super) fn may_split(&self, h: &Vector) -> bool {
        self.reductions.iter().all(|r| r.may_split(h))
    }
}

const PRIMES: usize = 3;

struct Reduction {
    p: u64,
    zeta: u64,
    /// Structure constants mod p, or `None` when some denominator vanishes.
    c: Option<Vec<Vec<Vec<u64>>>>,
}

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl Reduction {
    /// Reduction at the first prime `p ≡ 1 (mod N)` above `after`.
    fn new(alg: &StructureAlgebra, after: u64) -> Self {
        let order = alg.order();
        let mut p = after / order * order + 1;
        while p <= after || !is_prime(p) {
            p += order;
        }
        let proper = divisors(order).into_iter().filter(|&d| d < order).collect::<Vec<_>>();
        let zeta = (2..p).map(|a| pow(a, (p - 1) / order, p)).find(|&z| proper.iter().all(|&d| pow(z, d, p) != 1)).expect("F_p has roots of unity of order N");
        let mut f = Reduction { p, zeta, c: None };
        let n = alg.dim();
        let c: Option<Vec<Vec<Vec<u64>>>> = (0..n).map(|i| (0..n).map(|j| f.vector(&alg.structure_constants()[i][j])).collect()).collect();
        f.c = c;
        f
    }

    fn rational(&self, q: &Rational) -> Option<u64> {
        let p = BigInt::from(self.p);
        let n = q.numer().mod_floor(&p).to_u64()?;
        let d = q.denom().mod_floor(&p).to_u64()?;
        (d != 0).then(|| mul(n, inv(d, self.p), self.p))
    }

    fn number(&self, x: &CycloNumber) -> Option<u64> {
        let mut acc = 0;
        let mut z = 1;
        for q in x.coeffs() {
            acc = (acc + mul(self.rational(q)?, z, self.p)) % self.p;
            z = mul(z, self.zeta, self.p);
        }
        Some(acc)
    }

    fn vector(&self, v: &[CycloNumber]) -> Option<Vec<u64>> {
        v.iter().map(|x| self.number(x)).collect()
    }

    fn may_split(&self, h: &Vector) -> bool {
        let (Some(c), Some(h)) = (&self.c, self.vector(h)) else { return true };
        let p = self.p;
        let n = h.len();
        // (ad h)_{k,j} = sum_i h_i c[i][j][k]
        let mut a = vec![vec![0u64; n]; n];
        for (i, &hi) in h.iter().enumerate().filter(|(_, &x)| x != 0) {
            for j in 0..n {
                for (k, &x) in c[i][j].iter().enumerate() {
                    a[k][j] = (a[k][j] + mul(hi, x, p)) % p;
                }
            }
        }
        let f = charpoly(&a, p);
        let g = squarefree(&f, p);
        if g.len() <= 2 {
            return true;
        }
        // g splits into distinct linear factors iff x^p = x mod g
        let mut r = vec![1u64];
        let mut base = vec![0, 1];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&poly_mul(&r, &base, p), &g, p);
            }
            base = rem(&poly_mul(&base, &base, p), &g, p);
            e >>= 1;
        }
        trim(&mut r);
        r == rem(&[0, 1], &g, p)
    }
}

/// Characteristic polynomial, coefficients low to high, by the
/// Faddeev-LeVerrier recurrence (valid since `p > n`).
fn charpoly(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    let mut m = vec![vec![0u64; n]; n];
    for k in 1..=n {
        // m <- a m + c_{n-k+1} I
        let mut next = vec![vec![0u64; n]; n];
        for i in 0..n {
            for l in 0..n {
                let ail = a[i][l];
                if ail == 0 {
                    continue;
                }
                for j in 0..n {
                    next[i][j] = (next[i][j] + mul(ail, m[l][j], p)) % p;
                }
            }
            next[i][i] = (next[i][i] + coeffs[n - k + 1]) % p;
        }
        m = next;
        let mut tr = 0;
        for i in 0..n {
            for l in 0..n {
                tr = (tr + mul(a[i][l], m[l][i], p)) % p;
            }
        }
        coeffs[n - k] = (p - mul(tr, inv(k as u64, p), p)) % p;
    }
    coeffs
}

fn trim(f: &mut Vec<u64>) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul(x, y, p)) % p;
        }
    }
    out
}

/// Quotient and remainder by a nonzero `g`.
fn divrem(a: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let dg = g.len() - 1;
    if r.len() < g.len() {
        return (vec![0], r);
    }
    let lead = inv(g[dg], p);
    let mut q = vec![0u64; r.len() - dg];
    for i in (dg..r.len()).rev() {
        let t = mul(r[i], lead, p);
        q[i - dg] = t;
        if t != 0 {
            for (j, &gj) in g.iter().enumerate() {
                r[i - dg + j] = (r[i - dg + j] + p - mul(t, gj, p)) % p;
            }
        }
    }
    r.truncate(dg.max(1));
    trim(&mut r);
    (q, r)
}

fn rem(a: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    divrem(a, g, p).1
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn squarefree(f: &[u64], p: u64) -> Vec<u64> {
    let df: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, &c)| mul(c, i as u64 % p, p)).collect();
    if df.iter().all(|&c| c == 0) {
        return f.to_vec();
    }
    let g = gcd(f, &df, p);
    divrem(f, &g, p).0
}
