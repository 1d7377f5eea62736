//! Quotients `R[x]/(m)` of a coefficient ring, used as splitting rings for
//! torsion polynomials.

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::poly::PolyA;
use crate::ring::Ring;

/// `R[x]/(m)` with `m` monic of degree `n >= 1`; elements are coefficient
/// vectors of length `n`.
#[derive(Clone, Debug)]
pub struct QuotientRing<R: Ring> {
    base: R,
    /// `m = x^n + sum_{i<n} m[i] x^i`.
    low: Vec<R::Elem>,
}

impl<R: Ring> QuotientRing<R> {
    /// `modulus` lists `m_0, ..., m_n` ascending; it must be monic.
    pub fn new(base: R, modulus: Vec<R::Elem>) -> Result<QuotientRing<R>> {
        let n = modulus.len().checked_sub(1).ok_or(Error::DivisionByZero)?;
        if n == 0 || modulus[n] != base.one() {
            return Err(Error::Parse(
                "quotient modulus must be monic of positive degree".into(),
            ));
        }
        let low = modulus[..n].to_vec();
        Ok(QuotientRing { base, low })
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.low.len()
    }

    /// The class of `x`.
    pub fn gen(&self) -> Vec<R::Elem> {
        let mut v = vec![self.base.zero(); self.degree()];
        if self.degree() == 1 {
            v[0] = self.base.neg(&self.low[0]);
        } else {
            v[1] = self.base.one();
        }
        v
    }

    pub fn lift(&self, c: R::Elem) -> Vec<R::Elem> {
        let mut v = vec![self.base.zero(); self.degree()];
        v[0] = c;
        v
    }

    /// Reduces an arbitrary coefficient vector modulo `m`.
    pub fn reduce(&self, mut v: Vec<R::Elem>) -> Vec<R::Elem> {
        let b = &self.base;
        let n = self.degree();
        while v.len() > n {
            let top = v.pop().expect("nonempty");
            if b.is_zero(&top) {
                continue;
            }
            let k = v.len() - n;
            for (i, mi) in self.low.iter().enumerate() {
                v[k + i] = b.sub(&v[k + i], &b.mul(&top, mi));
            }
        }
        v.resize(n, b.zero());
        v
    }

    fn modulus_full(&self) -> Vec<R::Elem> {
        let mut m = self.low.clone();
        m.push(self.base.one());
        m
    }
}

fn trim<R: Ring>(b: &R, mut v: Vec<R::Elem>) -> Vec<R::Elem> {
    while v.last().is_some_and(|c| b.is_zero(c)) {
        v.pop();
    }
    v
}

fn poly_mul<R: Ring>(b: &R, x: &[R::Elem], y: &[R::Elem]) -> Vec<R::Elem> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![b.zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if b.is_zero(a) {
            continue;
        }
        for (j, c) in y.iter().enumerate() {
            out[i + j] = b.add(&out[i + j], &b.mul(a, c));
        }
    }
    out
}

fn poly_sub<R: Ring>(b: &R, x: &[R::Elem], y: &[R::Elem]) -> Vec<R::Elem> {
    let n = x.len().max(y.len());
    let z = b.zero();
    (0..n)
        .map(|i| b.sub(x.get(i).unwrap_or(&z), y.get(i).unwrap_or(&z)))
        .collect()
}

/// Division with remainder over a field `R`.
fn poly_divrem<R: Ring>(
    b: &R,
    x: &[R::Elem],
    d: &[R::Elem],
) -> Result<(Vec<R::Elem>, Vec<R::Elem>)> {
    let d = trim(b, d.to_vec());
    let dl = d.last().ok_or(Error::DivisionByZero)?;
    let inv = b.inv(dl)?;
    let mut r = trim(b, x.to_vec());
    if r.len() < d.len() {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![b.zero(); r.len() - d.len() + 1];
    while r.len() >= d.len() {
        let k = r.len() - d.len();
        let c = b.mul(r.last().expect("nonempty"), &inv);
        for (i, di) in d.iter().enumerate() {
            r[k + i] = b.sub(&r[k + i], &b.mul(&c, di));
        }
        q[k] = c;
        r.pop();
        r = trim(b, r);
    }
    Ok((q, r))
}

impl<R: Ring> Ring for QuotientRing<R> {
    type Elem = Vec<R::Elem>;

    fn field(&self) -> &Fq {
        self.base.field()
    }

    fn zero(&self) -> Vec<R::Elem> {
        vec![self.base.zero(); self.degree()]
    }

    fn from_fq(&self, c: FqElem) -> Vec<R::Elem> {
        self.lift(self.base.from_fq(c))
    }

    fn from_poly(&self, a: &PolyA) -> Vec<R::Elem> {
        self.lift(self.base.from_poly(a))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(poly_mul(&self.base, a, b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }

    /// Inverse by the extended Euclidean algorithm; needs the base to be a field.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let b = &self.base;
        let mut r0 = self.modulus_full();
        let mut r1 = trim(b, a.clone());
        let mut s0: Vec<R::Elem> = Vec::new();
        let mut s1 = vec![b.one()];
        if r1.is_empty() {
            return Err(Error::DivisionByZero);
        }
        while !r1.is_empty() {
            let (q, r) = poly_divrem(b, &r0, &r1)?;
            let s = trim(b, poly_sub(b, &s0, &poly_mul(b, &q, &s1)));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return Err(Error::NotInvertible(
                "element shares a factor with the modulus".into(),
            ));
        }
        let c = b.inv(&r0[0])?;
        Ok(self.reduce(s0.iter().map(|x| b.mul(x, &c)).collect()))
    }

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.field().q() as u64)
    }

    fn scale(&self, c: FqElem, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.scale(c, x)).collect()
    }

    /// `{c0, c1, ...}` with base-ring encodings.
    fn encode(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a.iter().map(|x| self.base.encode(x)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}
