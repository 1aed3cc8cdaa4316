//! Univariate polynomials over Q and exact factorization into irreducibles.
//!
//! Factorization is the classical route: primitivize, split off the
//! square-free part, factor the square-free integer polynomial modulo a
//! small good prime (Berlekamp), Hensel-lift the modular factors past a
//! coefficient bound, and recombine subsets by exact trial division. The
//! degree cap is 8; requests beyond it fail loudly rather than falling
//! back to anything inexact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::caps;
use crate::error::{Error, Result};

/// Integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZPoly {
    pub coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        ZPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn x() -> Self {
        ZPoly { coeffs: vec![BigInt::zero(), BigInt::one()] }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        ZPoly::new(out)
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, rhs: &ZPoly) -> ZPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        ZPoly::new(out)
    }

    pub fn derivative(&self) -> ZPoly {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        ZPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Exact division; `None` if the remainder is nonzero.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.degree() - d.degree() + 1];
        let dlc = d.lc();
        for k in (0..q.len()).rev() {
            let top = rem[k + d.degree()].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&dlc);
            if !r.is_zero() {
                return None;
            }
            q[k] = c.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &c;
                rem[k + i] -= t;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZPoly::new(q))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Monic rational polynomial, ascending coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly {
    pub coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.coeffs.last().unwrap().clone();
        QPoly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn from_z(p: &ZPoly) -> QPoly {
        QPoly::new(p.coeffs.iter().map(|c| BigRational::from(c.clone())).collect())
    }

    /// Clear denominators to a primitive integer polynomial.
    pub fn to_primitive_z(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut denom = BigInt::one();
        for c in &self.coeffs {
            denom = denom.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from(denom.clone())).to_integer())
            .collect();
        ZPoly::new(ints).primitive()
    }

    pub fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Polynomial remainder.
    pub fn rem(&self, d: &QPoly) -> QPoly {
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let dlc = d.coeffs.last().unwrap().clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() / &dlc;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let t = dc * &c;
                    r[k + i] -= t;
                }
            }
            r.pop();
            while r.last().map(|c| c.is_zero()).unwrap_or(false) {
                r.pop();
            }
            if r.len() <= dd {
                break;
            }
        }
        QPoly::new(r)
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero());
        if self.degree() < d.degree() || self.is_zero() {
            return (QPoly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let dlc = d.coeffs.last().unwrap().clone();
        let mut q = vec![BigRational::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let c = &top / &dlc;
            q[k] = c.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &c;
                r[k + i] -= t;
            }
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn gcd(&self, rhs: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

// ---- modular arithmetic helpers (small primes, u64 field) ----

fn mod_inv(a: u64, p: u64) -> u64 {
    // extended euclid
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        let tmp_t = t - q * new_t;
        t = new_t;
        new_t = tmp_t;
        let tmp_r = r - q * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    assert_eq!(r, 1, "not invertible");
    (((t % p as i128) + p as i128) % p as i128) as u64
}

type PPoly = Vec<u64>; // ascending mod-p coefficients, no trailing zeros

fn ptrim(mut f: PPoly) -> PPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn pdeg(f: &PPoly) -> isize {
    f.len() as isize - 1
}

fn pmul(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(out)
}

fn psub(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    ptrim(out)
}

fn pdivrem(a: &PPoly, b: &PPoly, p: u64) -> (PPoly, PPoly) {
    assert!(!b.is_empty());
    let mut r = a.clone();
    if pdeg(&r) < pdeg(b) {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - b.len() + 1];
    let binv = mod_inv(*b.last().unwrap(), p);
    while pdeg(&r) >= pdeg(b) && !r.is_empty() {
        let k = r.len() - b.len();
        let c = (r.last().unwrap() * binv) % p;
        q[k] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - (bc * c) % p) % p;
        }
        r = ptrim(r);
    }
    (ptrim(q), r)
}

fn pgcd(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let (_, r) = pdivrem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        return a;
    }
    let inv = mod_inv(*a.last().unwrap(), p);
    ptrim(a.iter().map(|&c| (c * inv) % p).collect())
}

fn pmod_pow_x(e: u64, f: &PPoly, p: u64) -> PPoly {
    // x^e mod f by square and multiply
    let mut result = vec![1u64];
    let mut base = pdivrem(&vec![0, 1], f, p).1;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = pdivrem(&pmul(&result, &base, p), f, p).1;
        }
        base = pdivrem(&pmul(&base, &base, p), f, p).1;
        e >>= 1;
    }
    result
}

fn pderiv(f: &PPoly, p: u64) -> PPoly {
    if f.len() <= 1 {
        return vec![];
    }
    ptrim(
        f[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| (c * (((i + 1) as u64) % p)) % p)
            .collect(),
    )
}

/// Berlekamp factorization of a square-free monic polynomial mod p into
/// monic irreducibles.
fn berlekamp(f: &PPoly, p: u64) -> Vec<PPoly> {
    let n = pdeg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    let n = n as usize;
    // build the Frobenius matrix Q: columns are x^{p*i} mod f
    let mut q_cols: Vec<PPoly> = Vec::with_capacity(n);
    for i in 0..n {
        let e = (p as u64) * (i as u64);
        q_cols.push(pmod_pow_x(e, f, p));
    }
    // kernel of Q - I over F_p by gaussian elimination
    let mut mat = vec![vec![0u64; n]; n];
    for (j, col) in q_cols.iter().enumerate() {
        for i in 0..n {
            let v = col.get(i).copied().unwrap_or(0);
            mat[i][j] = (v + p - if i == j { 1 } else { 0 }) % p;
        }
    }
    // row reduce
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let piv = (row..n).find(|&i| mat[i][col] != 0);
        if let Some(piv) = piv {
            mat.swap(row, piv);
            let inv = mod_inv(mat[row][col], p);
            for j in 0..n {
                mat[row][j] = (mat[row][j] * inv) % p;
            }
            for i in 0..n {
                if i != row && mat[i][col] != 0 {
                    let c = mat[i][col];
                    for j in 0..n {
                        mat[i][j] = (mat[i][j] + p - (mat[row][j] * c) % p) % p;
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    if free_cols.len() <= 1 {
        return vec![f.clone()]; // irreducible
    }
    // a basis vector with a nonconstant polynomial splits f
    for &fc in &free_cols {
        let mut v = vec![0u64; n];
        v[fc] = 1;
        for &(ri, pc) in &pivots {
            v[pc] = (p - mat[ri][fc]) % p;
        }
        let vpoly = ptrim(v);
        if pdeg(&vpoly) < 1 {
            continue;
        }
        for s in 0..p {
            let shifted = psub(&vpoly, &vec![s], p);
            let g = pgcd(f, &shifted, p);
            if pdeg(&g) >= 1 && pdeg(&g) < pdeg(f) {
                let (h, r) = pdivrem(f, &g, p);
                debug_assert!(r.is_empty());
                let mut out = berlekamp(&g, p);
                out.extend(berlekamp(&h, p));
                return out;
            }
        }
    }
    vec![f.clone()]
}

fn zpoly_mod(f: &ZPoly, p: u64) -> PPoly {
    ptrim(
        f.coeffs
            .iter()
            .map(|c| {
                let m = c.mod_floor(&BigInt::from(p));
                m.to_string().parse::<u64>().unwrap()
            })
            .collect(),
    )
}

/// Hensel lift a factorization f ≡ g*h (mod m) with sg + th ≡ 1 (mod m)
/// to the same data mod m².
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let reduce = |p: &ZPoly| ZPoly::new(p.coeffs.iter().map(|c| c.mod_floor(&m2)).collect());
    let e = reduce(&f.sub(&g.mul(h)));
    // q, r = div_rem(s*e, h) over Z/m² with h monic
    let (q, r) = divrem_mod(&reduce(&s.mul(&e)), h, &m2);
    let g1 = reduce(&g.add(&t.mul(&e)).add(&g.mul(&q)));
    let h1 = reduce(&h.add(&r));
    let b = reduce(&s.mul(&g1).add(&t.mul(&h1)).sub(&ZPoly::one()));
    let (c, d) = divrem_mod(&reduce(&s.mul(&b)), &h1, &m2);
    let s1 = reduce(&s.sub(&d));
    let t1 = reduce(&t.sub(&t.mul(&b)).sub(&g1.mul(&c)));
    (g1, h1, s1, t1)
}

/// Division with remainder of integer polynomials modulo m, divisor monic.
fn divrem_mod(a: &ZPoly, d: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    assert!(d.lc().is_one(), "divisor must be monic for modular division");
    let mut r = a.coeffs.clone();
    let dd = d.degree();
    if r.len() <= dd {
        return (ZPoly::zero(), ZPoly::new(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].mod_floor(m);
        if !c.is_zero() {
            q[k] = c.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &c;
                r[k + i] = (&r[k + i] - t).mod_floor(m);
            }
        } else {
            r[k + dd] = BigInt::zero();
        }
    }
    (ZPoly::new(q), ZPoly::new(r.into_iter().map(|c| c.mod_floor(m)).collect()))
}

fn poly_eea_mod(g: &PPoly, h: &PPoly, p: u64) -> (PPoly, PPoly) {
    // s*g + t*h = 1 mod p for coprime g, h
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1): (PPoly, PPoly) = (vec![1], vec![]);
    let (mut t0, mut t1): (PPoly, PPoly) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s = psub(&s0, &pmul(&q, &s1, p), p);
        let t = psub(&t0, &pmul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    assert_eq!(pdeg(&r0), 0, "factors not coprime");
    let inv = mod_inv(r0[0], p);
    let scale = |f: &PPoly| ptrim(f.iter().map(|&c| (c * inv) % p).collect());
    (scale(&s0), scale(&t0))
}

fn ppoly_to_z(f: &PPoly, p: u64) -> ZPoly {
    // symmetric representative
    let half = p / 2;
    ZPoly::new(
        f.iter()
            .map(|&c| {
                if c > half {
                    BigInt::from(c) - BigInt::from(p)
                } else {
                    BigInt::from(c)
                }
            })
            .collect(),
    )
}

/// Factor a square-free primitive integer polynomial into irreducible
/// primitive integer polynomials.
fn factor_squarefree_z(f: &ZPoly) -> Result<Vec<ZPoly>> {
    let n = f.degree();
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    if n > caps::MAX_FACTOR_DEGREE {
        return Err(Error::CapExceeded(format!(
            "polynomial degree {} exceeds factorization cap {}",
            n,
            caps::MAX_FACTOR_DEGREE
        )));
    }
    // choose a prime keeping f square-free with unit leading coefficient
    let primes: [u64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    let mut chosen = None;
    for &p in &primes {
        if (f.lc().mod_floor(&BigInt::from(p))).is_zero() {
            continue;
        }
        let fp = zpoly_mod(f, p);
        let gp = pgcd(&fp, &pderiv(&fp, p), p);
        if pdeg(&gp) == 0 {
            chosen = Some(p);
            break;
        }
    }
    let p = chosen.ok_or_else(|| Error::InvalidParameter("no good small prime found".into()))?;
    // make monic mod p
    let fp = zpoly_mod(f, p);
    let lcinv = mod_inv(*fp.last().unwrap(), p);
    let fp_monic: PPoly = ptrim(fp.iter().map(|&c| (c * lcinv) % p).collect());
    let mut modular = berlekamp(&fp_monic, p);
    modular.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
    if modular.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    // coefficient bound (Mignotte-flavoured, generous)
    let height: BigInt = f.coeffs.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = (BigInt::from(2).pow(n as u32 + 2)) * height * f.lc().abs();
    // lift the full factorization as a binary tree of two-factor lifts
    let lifted = lift_tree(f, &modular, p, &bound)?;
    // recombination by subsets
    let mut remaining: Vec<ZPoly> = lifted;
    let mut current = f.clone();
    let mut out = Vec::new();
    let mut subset_size = 1;
    let modulus = modulus_above(p, &bound);
    while 2 * subset_size <= remaining.len() {
        let indices: Vec<usize> = (0..remaining.len()).collect();
        let mut found = None;
        for subset in subsets(&indices, subset_size) {
            // candidate = lc * prod(subset) mod m, symmetric lift, primitive
            let mut cand = ZPoly::constant(current.lc());
            for &i in &subset {
                cand = cand.mul(&remaining[i]);
                cand = ZPoly::new(cand.coeffs.iter().map(|c| symmetric_mod(c, &modulus)).collect());
            }
            let cand = cand.primitive();
            if let Some(quot) = current.div_exact(&cand) {
                out.push(cand);
                current = quot.primitive();
                found = Some(subset);
                break;
            }
        }
        match found {
            Some(subset) => {
                let mut keep = Vec::new();
                for (i, g) in remaining.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g);
                    }
                }
                remaining = keep;
            }
            None => {
                subset_size += 1;
            }
        }
    }
    if current.degree() > 0 {
        out.push(current);
    }
    Ok(out)
}

fn modulus_above(p: u64, bound: &BigInt) -> BigInt {
    let mut m = BigInt::from(p);
    let two_bound: BigInt = bound * 2;
    while m <= two_bound {
        m = &m * &m;
    }
    m
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    let half: BigInt = m / 2;
    if r > half {
        r - m
    } else {
        r
    }
}

/// Lift all modular factors of `f` to integer polynomials mod `p^(2^k)`
/// exceeding the bound, by recursive two-factor Hensel lifting.
fn lift_tree(f: &ZPoly, modular: &[PPoly], p: u64, bound: &BigInt) -> Result<Vec<ZPoly>> {
    if modular.len() == 1 {
        // single factor: f itself (made monic-ish) — return symmetric lift
        return Ok(vec![ppoly_to_z(&modular[0], p)]);
    }
    let mid = modular.len() / 2;
    let (left, right) = modular.split_at(mid);
    let mut gp: PPoly = vec![1];
    for m in left {
        gp = pmul(&gp, m, p);
    }
    let mut hp: PPoly = vec![1];
    for m in right {
        hp = pmul(&hp, m, p);
    }
    // f = lc * g * h mod p with g, h monic; fold lc into g's side for lifting:
    // lift lc-adjusted f* = f with leading coeff handled by working with
    // f_monic scaled back at recombination. Standard trick: lift with g
    // scaled by lc mod p.
    let lc = f.lc();
    let lcp = lc.mod_floor(&BigInt::from(p)).to_string().parse::<u64>().unwrap();
    let g_scaled: PPoly = ptrim(gp.iter().map(|&c| (c * lcp) % p).collect());
    let (s, t) = poly_eea_mod(&g_scaled, &hp, p);
    let mut g = ppoly_to_z(&g_scaled, p);
    let mut h = ppoly_to_z(&hp, p);
    let mut sz = ppoly_to_z(&s, p);
    let mut tz = ppoly_to_z(&t, p);
    // replace g's leading coefficient with the true lc as we lift
    let mut m = BigInt::from(p);
    let target: BigInt = bound * 2;
    // f with leading coefficient forced onto g: lift f directly
    while m <= target {
        let (g1, h1, s1, t1) = hensel_step(f, &g, &h, &sz, &tz, &m);
        g = g1;
        h = h1;
        sz = s1;
        tz = t1;
        m = &m * &m;
    }
    // recurse on both halves with their lifted products
    let left_lifted = lift_leaves(&g, left, p, bound)?;
    let right_lifted = lift_leaves(&h, right, p, bound)?;
    Ok(left_lifted.into_iter().chain(right_lifted).collect())
}

fn lift_leaves(f: &ZPoly, modular: &[PPoly], p: u64, bound: &BigInt) -> Result<Vec<ZPoly>> {
    if modular.len() == 1 {
        return Ok(vec![ZPoly::new(
            f.coeffs.iter().map(|c| symmetric_mod(c, &modulus_above(p, bound))).collect(),
        )]);
    }
    lift_tree(f, modular, p, bound)
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            let mut s = vec![x];
            s.append(&mut rest);
            out.push(s);
        }
    }
    out
}

/// Factor a monic rational polynomial into monic irreducible factors with
/// multiplicities.
pub fn factor_q(f: &QPoly) -> Result<Vec<(QPoly, usize)>> {
    if f.degree() == 0 || f.is_zero() {
        return Ok(vec![]);
    }
    if f.degree() > caps::MAX_FACTOR_DEGREE {
        return Err(Error::CapExceeded(format!(
            "polynomial degree {} exceeds factorization cap {}",
            f.degree(),
            caps::MAX_FACTOR_DEGREE
        )));
    }
    let mut out: Vec<(QPoly, usize)> = Vec::new();
    // square-free decomposition by repeated gcd with the derivative
    let mut rest = f.monic();
    let mut mult = 1usize;
    while rest.degree() > 0 {
        let deriv = QPoly::new(
            rest.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from(BigInt::from(i + 1)))
                .collect(),
        );
        let g = rest.gcd(&deriv);
        let sqfree = rest.div_rem(&g).0.monic();
        // factor the square-free part over Z
        let z = sqfree.to_primitive_z();
        if z.degree() > 0 {
            for factor in factor_squarefree_z(&z)? {
                let qf = QPoly::from_z(&factor).monic();
                // multiplicity: how many times does it divide rest
                let mut count = 0usize;
                let mut probe = rest.clone();
                loop {
                    let (q, r) = probe.div_rem(&qf);
                    if r.is_zero() && !q.is_zero() {
                        count += 1;
                        probe = q;
                    } else {
                        break;
                    }
                }
                if count > 0 {
                    out.push((qf.clone(), count * mult));
                    // strip it completely
                    for _ in 0..count {
                        rest = rest.div_rem(&qf).0.monic();
                    }
                }
            }
        }
        if rest.degree() == 0 {
            break;
        }
        if g.degree() == rest.degree() {
            // derivative vanished (can't happen in characteristic 0 for
            // nonconstant); bail out defensively
            return Err(Error::InvalidParameter("degenerate square-free split".into()));
        }
        mult += 1;
        let _ = mult;
        // continue with remaining (factors of higher multiplicity)
    }
    out.sort_by(|a, b| (a.0.degree(), format!("{:?}", a.0.coeffs)).cmp(&(b.0.degree(), format!("{:?}", b.0.coeffs))));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(coeffs: &[i64]) -> QPoly {
        QPoly::new(coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect())
    }

    #[test]
    fn factor_difference_of_squares() {
        // x^2 - 1 = (x-1)(x+1)
        let f = qp(&[-1, 0, 1]);
        let factors = factor_q(&f).unwrap();
        assert_eq!(factors.len(), 2);
        let product = factors.iter().fold(qp(&[1]), |acc, (g, m)| {
            let mut acc = acc;
            for _ in 0..*m {
                acc = acc.mul(g);
            }
            acc
        });
        assert_eq!(product, f.monic());
    }

    #[test]
    fn factor_cyclotomic_product() {
        // (x^2+x+1)(x^2+1) stays split correctly
        let f = qp(&[1, 1, 1]).mul(&qp(&[1, 0, 1]));
        let factors = factor_q(&f).unwrap();
        assert_eq!(factors.len(), 2);
        for (g, m) in &factors {
            assert_eq!(*m, 1);
            assert_eq!(g.degree(), 2);
        }
    }

    #[test]
    fn factor_irreducible_quadratic() {
        let f = qp(&[1, 1, 1]); // x^2+x+1
        let factors = factor_q(&f).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0, f);
    }

    #[test]
    fn factor_with_multiplicity() {
        // (x-1)^2 (x+2)
        let f = qp(&[-1, 1]).mul(&qp(&[-1, 1])).mul(&qp(&[2, 1]));
        let factors = factor_q(&f).unwrap();
        let mut found_sq = false;
        let mut found_lin = false;
        for (g, m) in &factors {
            if *g == qp(&[-1, 1]) {
                assert_eq!(*m, 2);
                found_sq = true;
            }
            if *g == qp(&[2, 1]) {
                assert_eq!(*m, 1);
                found_lin = true;
            }
        }
        assert!(found_sq && found_lin);
    }

    #[test]
    fn factor_degree_six_cyclotomic_mix() {
        // x^6 - 1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
        let f = qp(&[-1, 0, 0, 0, 0, 0, 1]);
        let factors = factor_q(&f).unwrap();
        assert_eq!(factors.len(), 4);
        let product = factors.iter().fold(qp(&[1]), |acc, (g, m)| {
            let mut acc = acc;
            for _ in 0..*m {
                acc = acc.mul(g);
            }
            acc
        });
        assert_eq!(product, f.monic());
    }

    #[test]
    fn degree_cap_enforced() {
        let mut coeffs = vec![0i64; 10];
        coeffs[9] = 1;
        coeffs[0] = -1;
        assert!(matches!(factor_q(&qp(&coeffs)), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn zpoly_div_exact() {
        let f = ZPoly::new(vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)]);
        let g = ZPoly::new(vec![BigInt::from(1), BigInt::from(1)]);
        let q = f.div_exact(&g).unwrap();
        assert_eq!(q, ZPoly::new(vec![BigInt::from(-1), BigInt::from(1)]));
        assert!(f.div_exact(&ZPoly::new(vec![BigInt::from(2), BigInt::from(1)])).is_none());
    }
}
