//! Exact arithmetic in a field with a distinguished primitive m-th root of unity.
//!
//! Two interchangeable backends: `Q[x]/Phi_m(x)` with arbitrary-precision
//! rational coefficients, and a prime field `F_p` with `m | p - 1`.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Backend {
    CyclotomicRational,
    PrimeField,
}

/// A field element. The interpretation depends on the owning [`FieldContext`]:
/// cyclotomic scalars are residues modulo `Phi_m` stored as coefficient vectors
/// of length `deg Phi_m` (low to high), prime-field scalars are least
/// nonnegative residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Cyc(Vec<BigRational>),
    Fp(u64),
}

/// A field `K` together with a distinguished primitive m-th root of unity `q`.
#[derive(Debug, Clone)]
pub struct FieldContext {
    backend: Backend,
    m: u64,
    p: Option<u64>,
    /// m-th cyclotomic polynomial, monic, low-to-high integer coefficients.
    phi: Option<Vec<BigInt>>,
    /// q as a scalar of this field.
    q: Scalar,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.backend == other.backend && self.m == other.m && self.p == other.p
    }
}
impl Eq for FieldContext {}

// ---------------------------------------------------------------------------
// integer polynomial helpers (for Phi_m)

fn int_poly_trim(v: &mut Vec<BigInt>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

/// Exact division of integer polynomials; `b` must be monic and divide `a`.
fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = a.to_vec();
    int_poly_trim(&mut rem);
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    if rem.len() < b.len() {
        assert!(rem.is_empty());
        return vec![];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let da = rem.len() - 1;
        let c = rem[da].clone();
        quot[da - db] = c.clone();
        for i in 0..=db {
            let t = &b[i] * &c;
            rem[da - db + i] -= t;
        }
        int_poly_trim(&mut rem);
    }
    assert!(rem.is_empty(), "division was not exact");
    quot
}

/// The m-th cyclotomic polynomial, computed by dividing `x^m - 1` by the
/// cyclotomic polynomials of all proper divisors of m.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    let mut cache: Vec<Option<Vec<BigInt>>> = vec![None; (m + 1) as usize];
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        // x^d - 1
        let mut num = vec![BigInt::zero(); (d + 1) as usize];
        num[0] = -BigInt::one();
        num[d as usize] = BigInt::one();
        let mut quo = num;
        for e in 1..d {
            if d % e == 0 {
                quo = int_poly_div_exact(&quo, cache[e as usize].as_ref().unwrap());
            }
        }
        cache[d as usize] = Some(quo);
    }
    cache[m as usize].take().unwrap()
}

pub fn euler_phi(m: u64) -> u64 {
    let mut result = m;
    let mut n = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b: u128 = (base % p) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

/// Least primitive root modulo a prime p.
fn least_primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    'outer: for g in 2..p {
        for &l in &factors {
            if pow_mod(g, (p - 1) / l, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root");
}

// ---------------------------------------------------------------------------

impl FieldContext {
    /// Cyclotomic-rational backend: `K = Q[x]/Phi_m`, `q = x`.
    pub fn cyclotomic(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadOrder(m));
        }
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        // canonical form keeps no trailing zero coefficients
        let q = if deg == 1 {
            // x reduces to the rational root -phi[0]
            Scalar::Cyc(trim(vec![BigRational::from(-phi[0].clone())]))
        } else {
            Scalar::Cyc(vec![BigRational::zero(), BigRational::one()])
        };
        Ok(FieldContext {
            backend: Backend::CyclotomicRational,
            m,
            p: None,
            phi: Some(phi),
            q,
        })
    }

    /// Prime-field backend: `K = F_p`, `q = g^((p-1)/m)` for the least
    /// primitive root g of p. Requires `m | p - 1`.
    pub fn prime(m: u64, p: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadOrder(m));
        }
        if !is_prime(p) {
            return Err(Error::BadPrime(format!("{p} is not prime")));
        }
        if (p - 1) % m != 0 {
            return Err(Error::BadPrime(format!("{m} does not divide {p} - 1")));
        }
        let g = least_primitive_root(p);
        let q = Scalar::Fp(pow_mod(g, (p - 1) / m, p));
        Ok(FieldContext {
            backend: Backend::PrimeField,
            m,
            p: Some(p),
            phi: None,
            q,
        })
    }

    pub fn make(backend: Backend, m: u64, p: Option<u64>) -> Result<Self> {
        match backend {
            Backend::CyclotomicRational => Self::cyclotomic(m),
            Backend::PrimeField => {
                let p = p.ok_or_else(|| Error::BadPrime("missing prime p".into()))?;
                Self::prime(m, p)
            }
        }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn prime_modulus(&self) -> Option<u64> {
        self.p
    }

    /// Characteristic of the field (0 for the cyclotomic backend).
    pub fn characteristic(&self) -> u64 {
        self.p.unwrap_or(0)
    }

    pub fn phi_m(&self) -> Option<&[BigInt]> {
        self.phi.as_deref()
    }

    pub fn q(&self) -> Scalar {
        self.q.clone()
    }

    pub fn zero(&self) -> Scalar {
        match self.backend {
            Backend::CyclotomicRational => Scalar::Cyc(vec![]),
            Backend::PrimeField => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_rational(BigRational::from(BigInt::from(n)))
    }

    pub fn from_rational(&self, r: BigRational) -> Scalar {
        match self.backend {
            Backend::CyclotomicRational => {
                if r.is_zero() {
                    Scalar::Cyc(vec![])
                } else {
                    Scalar::Cyc(vec![r])
                }
            }
            Backend::PrimeField => {
                let p = self.p.unwrap();
                let pb = BigInt::from(p);
                let num: u64 = r.numer().mod_floor(&pb).try_into().unwrap();
                let den: u64 = r.denom().mod_floor(&pb).try_into().unwrap();
                assert!(den != 0, "denominator divisible by the field characteristic");
                Scalar::Fp((num as u128 * pow_mod(den, p - 2, p) as u128 % p as u128) as u64)
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Cyc(v) => v.iter().all(|c| c.is_zero()),
            Scalar::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Cyc(x), Scalar::Cyc(y)) => {
                let n = x.len().max(y.len());
                let mut out = vec![BigRational::zero(); n];
                for (i, c) in x.iter().enumerate() {
                    out[i] += c;
                }
                for (i, c) in y.iter().enumerate() {
                    out[i] += c;
                }
                Scalar::Cyc(trim(out))
            }
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                let p = self.p.unwrap();
                Scalar::Fp(((*x as u128 + *y as u128) % p as u128) as u64)
            }
            _ => panic!("scalar backend mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Cyc(x) => Scalar::Cyc(x.iter().map(|c| -c).collect()),
            Scalar::Fp(x) => {
                let p = self.p.unwrap();
                Scalar::Fp(if *x == 0 { 0 } else { p - x })
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Cyc(x), Scalar::Cyc(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Scalar::Cyc(vec![]);
                }
                let mut prod = vec![BigRational::zero(); x.len() + y.len() - 1];
                for (i, ci) in x.iter().enumerate() {
                    if ci.is_zero() {
                        continue;
                    }
                    for (j, cj) in y.iter().enumerate() {
                        if !cj.is_zero() {
                            prod[i + j] += ci * cj;
                        }
                    }
                }
                Scalar::Cyc(self.reduce_mod_phi(prod))
            }
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                let p = self.p.unwrap();
                Scalar::Fp((*x as u128 * *y as u128 % p as u128) as u64)
            }
            _ => panic!("scalar backend mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match a {
            Scalar::Fp(x) => {
                let p = self.p.unwrap();
                Ok(Scalar::Fp(pow_mod(*x, p - 2, p)))
            }
            Scalar::Cyc(x) => {
                // extended Euclid in Q[x] against Phi_m, which is irreducible
                let phi: Vec<BigRational> = self
                    .phi
                    .as_ref()
                    .unwrap()
                    .iter()
                    .map(|c| BigRational::from(c.clone()))
                    .collect();
                let inv = rat_poly_inverse_mod(x, &phi);
                Ok(Scalar::Cyc(trim(inv)))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// q^e with e possibly negative (reduced mod m).
    pub fn q_pow(&self, e: i64) -> Scalar {
        let m = self.m as i64;
        let e = e.rem_euclid(m) as u64;
        self.pow(&self.q, e)
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Exponent c in [0, m) with a = q^c, if any.
    pub fn log_q(&self, a: &Scalar) -> Option<i64> {
        let mut cur = self.one();
        for e in 0..self.m {
            if cur == *a {
                return Some(e as i64);
            }
            cur = self.mul(&cur, &self.q);
        }
        None
    }

    fn reduce_mod_phi(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        let phi = self.phi.as_ref().unwrap();
        let deg = phi.len() - 1;
        while v.len() > deg {
            let da = v.len() - 1;
            let c = v[da].clone();
            if !c.is_zero() {
                for i in 0..=deg {
                    let t = BigRational::from(phi[i].clone()) * &c;
                    v[da - deg + i] -= t;
                }
            }
            v.pop();
        }
        trim(v)
    }

}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Inverse of `a` modulo the monic polynomial `modulus` in Q[x].
fn rat_poly_inverse_mod(a: &[BigRational], modulus: &[BigRational]) -> Vec<BigRational> {
    // (r0, s0) = (modulus, 0), (r1, s1) = (a, 1); invariant r = s*a mod modulus
    let mut r0: Vec<BigRational> = modulus.to_vec();
    let mut r1: Vec<BigRational> = trim(a.to_vec());
    let mut s0: Vec<BigRational> = vec![];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while r1.len() > 1 {
        let (quot, rem) = rat_poly_divmod(&r0, &r1);
        let s2 = rat_poly_sub(&s0, &rat_poly_mul(&quot, &s1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // gcd with the irreducible modulus is a nonzero constant c; inverse is s1/c
    assert!(!r1.is_empty(), "element not invertible modulo the given polynomial");
    let c = r1[0].clone();
    s1.iter().map(|x| x / &c).collect()
}

fn rat_poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let da = rem.len() - 1;
        let c = &rem[da] / &lead;
        quot[da - db] = c.clone();
        for i in 0..=db {
            let t = &b[i] * &c;
            rem[da - db + i] -= t;
        }
        rem = trim(rem);
    }
    (quot, rem)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ci) in a.iter().enumerate() {
        for (j, cj) in b.iter().enumerate() {
            out[i + j] += ci * cj;
        }
    }
    trim(out)
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

// ---------------------------------------------------------------------------
// text syntax: signed Laurent polynomials in q with rational coefficients

struct ScalarParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn new(src: &'a str) -> Self {
        ScalarParser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expr(&mut self, ctx: &FieldContext) -> Result<Scalar> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                ctx.neg(&self.term(ctx)?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term(ctx)?
            }
            _ => self.term(ctx)?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term(ctx)?;
                    acc = ctx.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term(ctx)?;
                    acc = ctx.sub(&acc, &t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self, ctx: &FieldContext) -> Result<Scalar> {
        let mut acc = self.factor(ctx)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor(ctx)?;
                    acc = ctx.mul(&acc, &f);
                }
                Some(c) if c == b'q' || c == b'(' || c.is_ascii_digit() => {
                    let f = self.factor(ctx)?;
                    acc = ctx.mul(&acc, &f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self, ctx: &FieldContext) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr(ctx)?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'q') => {
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.signed_int()?;
                    Ok(ctx.q_pow(e))
                } else {
                    Ok(ctx.q())
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.uint()?;
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    Ok(ctx.from_rational(BigRational::new(num, den)))
                } else {
                    Ok(ctx.from_rational(BigRational::from(num)))
                }
            }
            _ => self.err("expected scalar factor"),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = self.uint()?;
        let v: i64 = v.try_into().map_err(|_| Error::Syntax {
            pos: self.pos,
            msg: "exponent too large".into(),
        })?;
        Ok(if neg { -v } else { v })
    }
}

pub fn parse_scalar(text: &str, ctx: &FieldContext) -> Result<Scalar> {
    let mut p = ScalarParser::new(text);
    let s = p.expr(ctx)?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(s)
}

/// Render a scalar in the Laurent-in-q syntax accepted by [`parse_scalar`].
pub fn format_scalar(s: &Scalar, _ctx: &FieldContext) -> String {
    match s {
        Scalar::Fp(x) => x.to_string(),
        Scalar::Cyc(v) => {
            if v.iter().all(|c| c.is_zero()) {
                return "0".into();
            }
            let mut out = String::new();
            for i in (0..v.len()).rev() {
                let c = &v[i];
                if c.is_zero() {
                    continue;
                }
                let neg = c.is_negative();
                let abs = c.abs();
                if out.is_empty() {
                    if neg {
                        out.push_str("-");
                    }
                } else if neg {
                    out.push_str(" - ");
                } else {
                    out.push_str(" + ");
                }
                let coeff = if abs.is_integer() {
                    abs.numer().to_string()
                } else {
                    format!("({}/{})", abs.numer(), abs.denom())
                };
                if i == 0 {
                    out.push_str(&coeff);
                } else {
                    if !abs.is_one() {
                        out.push_str(&coeff);
                        out.push('*');
                    }
                    if i == 1 {
                        out.push('q');
                    } else {
                        out.push_str(&format!("q^{i}"));
                    }
                }
            }
            out
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Cyc(_) => {
                // field-independent rendering; parenthesized rationals
                let fake = FieldContext {
                    backend: Backend::CyclotomicRational,
                    m: 0,
                    p: None,
                    phi: None,
                    q: Scalar::Fp(0),
                };
                write!(f, "{}", format_scalar(self, &fake))
            }
        }
    }
}
