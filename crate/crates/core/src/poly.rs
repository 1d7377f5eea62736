//! Polynomials over `F_q`: the ring `A = F_q[t]`.

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::ring::Ring;

/// An element of `A = F_q[t]`, coefficients ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct PolyA {
    coeffs: Vec<FqElem>,
}

impl PolyA {
    pub fn new(mut coeffs: Vec<FqElem>) -> PolyA {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyA { coeffs }
    }

    pub fn zero() -> PolyA {
        PolyA { coeffs: Vec::new() }
    }

    pub fn constant(c: FqElem) -> PolyA {
        PolyA::new(vec![c])
    }

    pub fn one() -> PolyA {
        PolyA::constant(FqElem(1))
    }

    /// `c * t^k`.
    pub fn monomial(c: FqElem, k: usize) -> PolyA {
        let mut v = vec![FqElem::ZERO; k + 1];
        v[k] = c;
        PolyA::new(v)
    }

    /// The generator `t`.
    pub fn t() -> PolyA {
        PolyA::monomial(FqElem(1), 1)
    }

    /// Builds a polynomial from ascending field indices.
    pub fn from_indices(fq: &Fq, idx: &[u32]) -> Result<PolyA> {
        idx.iter()
            .map(|&i| fq.elem(i))
            .collect::<Result<Vec<_>>>()
            .map(PolyA::new)
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg(0) = -1`, handy for comparisons.
    pub fn degi(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FqElem(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, fq: &Fq, o: &PolyA) -> PolyA {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyA::new((0..n).map(|i| fq.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, fq: &Fq) -> PolyA {
        PolyA {
            coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect(),
        }
    }

    pub fn sub(&self, fq: &Fq, o: &PolyA) -> PolyA {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyA::new((0..n).map(|i| fq.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn scale(&self, fq: &Fq, c: FqElem) -> PolyA {
        if c.is_zero() {
            return PolyA::zero();
        }
        PolyA {
            coeffs: self.coeffs.iter().map(|&x| fq.mul(c, x)).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> PolyA {
        if self.is_zero() {
            return PolyA::zero();
        }
        let mut v = vec![FqElem::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        PolyA { coeffs: v }
    }

    pub fn mul(&self, fq: &Fq, o: &PolyA) -> PolyA {
        if self.is_zero() || o.is_zero() {
            return PolyA::zero();
        }
        PolyA::new(mul_slices(fq, &self.coeffs, &o.coeffs))
    }

    pub fn pow(&self, fq: &Fq, mut e: u64) -> PolyA {
        let mut base = self.clone();
        let mut acc = PolyA::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(fq, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(fq, &base);
            }
        }
        acc
    }

    /// `a(t)^q = a(t^q)`, since coefficients are fixed by the `q`-power map.
    pub fn frobenius(&self, fq: &Fq) -> PolyA {
        if self.is_zero() {
            return PolyA::zero();
        }
        let q = fq.q() as usize;
        let mut v = vec![FqElem::ZERO; (self.coeffs.len() - 1) * q + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * q] = c;
        }
        PolyA { coeffs: v }
    }

    pub fn div_rem(&self, fq: &Fq, d: &PolyA) -> Result<(PolyA, PolyA)> {
        let dd = d.deg().ok_or(Error::DivisionByZero)?;
        if self.degi() < dd as i64 {
            return Ok((PolyA::zero(), self.clone()));
        }
        let inv_lead = fq.inv(d.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let f = fq.mul(c, inv_lead);
            quot[i - dd] = f;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    let k = i - dd + j;
                    rem[k] = fq.sub(rem[k], fq.mul(f, dc));
                }
            }
        }
        rem.truncate(dd);
        Ok((PolyA::new(quot), PolyA::new(rem)))
    }

    pub fn rem(&self, fq: &Fq, d: &PolyA) -> Result<PolyA> {
        Ok(self.div_rem(fq, d)?.1)
    }

    /// Exact quotient; errors when `d` does not divide `self`.
    pub fn div_exact(&self, fq: &Fq, d: &PolyA) -> Result<PolyA> {
        let (q, r) = self.div_rem(fq, d)?;
        if !r.is_zero() {
            return Err(Error::NotInvertible("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, fq: &Fq, other: &PolyA) -> bool {
        !self.is_zero() && other.rem(fq, self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self, fq: &Fq) -> PolyA {
        if self.is_zero() {
            return PolyA::zero();
        }
        self.scale(fq, fq.inv(self.lead()))
    }

    /// Monic gcd, `gcd(0, 0) = 0`.
    pub fn gcd(&self, fq: &Fq, o: &PolyA) -> PolyA {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(fq, &b).unwrap();
            a = b;
            b = r;
        }
        a.monic(fq)
    }

    /// Returns `(g, x, y)` with `g = x*self + y*o` and `g` monic.
    pub fn xgcd(&self, fq: &Fq, o: &PolyA) -> (PolyA, PolyA, PolyA) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (PolyA::one(), PolyA::zero());
        let (mut t0, mut t1) = (PolyA::zero(), PolyA::one());
        while !r1.is_zero() {
            let (qq, r) = r0.div_rem(fq, &r1).unwrap();
            let s = s0.sub(fq, &qq.mul(fq, &s1));
            let t = t0.sub(fq, &qq.mul(fq, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = fq.inv(r0.lead());
        (r0.scale(fq, c), s0.scale(fq, c), t0.scale(fq, c))
    }

    pub fn lcm(&self, fq: &Fq, o: &PolyA) -> PolyA {
        if self.is_zero() || o.is_zero() {
            return PolyA::zero();
        }
        let g = self.gcd(fq, o);
        self.div_exact(fq, &g).unwrap().mul(fq, o).monic(fq)
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, fq: &Fq, m: &PolyA) -> Option<PolyA> {
        let a = self.rem(fq, m).ok()?;
        let (g, x, _) = a.xgcd(fq, m);
        (g == PolyA::one()).then(|| x.rem(fq, m).unwrap())
    }

    pub fn eval(&self, fq: &Fq, x: FqElem) -> FqElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &c| fq.add(fq.mul(acc, x), c))
    }

    /// Canonical text encoding: ascending space-separated indices, `0` for zero.
    pub fn encode(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|c| c.0.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse(fq: &Fq, s: &str) -> Result<PolyA> {
        let idx = s
            .split_whitespace()
            .map(|w| {
                w.parse::<u32>()
                    .map_err(|e| Error::Parse(format!("polynomial coefficient {w:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PolyA::from_indices(fq, &idx)
    }

    /// All polynomials of degree `< d`, in index order (`q^d` of them).
    pub fn all_below(fq: &Fq, d: usize) -> impl Iterator<Item = PolyA> + '_ {
        let q = fq.q() as u64;
        let total = q.pow(d as u32);
        (0..total).map(move |mut n| {
            let mut v = Vec::with_capacity(d);
            for _ in 0..d {
                v.push(FqElem((n % q) as u32));
                n /= q;
            }
            PolyA::new(v)
        })
    }

    /// All monic polynomials of degree exactly `d`.
    pub fn monics_of_degree(fq: &Fq, d: usize) -> impl Iterator<Item = PolyA> + '_ {
        PolyA::all_below(fq, d).map(move |low| low.add(fq, &PolyA::monomial(FqElem(1), d)))
    }

    /// Factorisation into monic irreducibles by trial division, plus the unit.
    pub fn factor(&self, fq: &Fq) -> (FqElem, Vec<(PolyA, u32)>) {
        assert!(!self.is_zero(), "factor of zero");
        let unit = self.lead();
        let mut rest = self.monic(fq);
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degi() >= 2 * d as i64 {
            for cand in PolyA::monics_of_degree(fq, d) {
                let mut e = 0;
                while cand.divides(fq, &rest) {
                    rest = rest.div_exact(fq, &cand).unwrap();
                    e += 1;
                }
                if e > 0 {
                    out.push((cand, e));
                }
            }
            d += 1;
        }
        if rest.degi() >= 1 {
            out.push((rest, 1));
        }
        (unit, out)
    }

    pub fn is_irreducible(&self, fq: &Fq) -> bool {
        if self.degi() < 1 {
            return false;
        }
        let (_, f) = self.factor(fq);
        f.len() == 1 && f[0].1 == 1
    }
}

const KARATSUBA_CUTOFF: usize = 48;

fn mul_slices(fq: &Fq, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() < KARATSUBA_CUTOFF || b.len() < KARATSUBA_CUTOFF {
        return schoolbook(fq, a, b);
    }
    let m = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));
    let z0 = mul_slices(fq, a0, b0);
    let z2 = mul_slices(fq, a1, b1);
    let sa = add_slices(fq, a0, a1);
    let sb = add_slices(fq, b0, b1);
    let mut z1 = mul_slices(fq, &sa, &sb);
    for (i, &c) in z0.iter().enumerate() {
        z1[i] = fq.sub(z1[i], c);
    }
    for (i, &c) in z2.iter().enumerate() {
        z1[i] = fq.sub(z1[i], c);
    }
    let mut out = vec![FqElem::ZERO; a.len() + b.len() - 1];
    for (i, &c) in z0.iter().enumerate() {
        out[i] = fq.add(out[i], c);
    }
    for (i, &c) in z1.iter().enumerate() {
        if i + m < out.len() {
            out[i + m] = fq.add(out[i + m], c);
        }
    }
    for (i, &c) in z2.iter().enumerate() {
        out[i + 2 * m] = fq.add(out[i + 2 * m], c);
    }
    out
}

fn add_slices(fq: &Fq, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            fq.add(
                a.get(i).copied().unwrap_or_default(),
                b.get(i).copied().unwrap_or_default(),
            )
        })
        .collect()
}

fn schoolbook(fq: &Fq, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    let mut out = vec![FqElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = fq.add(out[i + j], fq.mul(x, y));
            }
        }
    }
    out
}

pub(crate) fn mul_truncated(fq: &Fq, a: &[FqElem], b: &[FqElem], len: usize) -> Vec<FqElem> {
    let mut out = vec![FqElem::ZERO; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = fq.add(out[i + j], fq.mul(x, y));
            }
        }
    }
    out
}

/// The ring `A = F_q[t]` as a coefficient ring.
#[derive(Clone, Debug)]
pub struct PolyRing {
    fq: Fq,
}

impl PolyRing {
    pub fn new(fq: Fq) -> PolyRing {
        PolyRing { fq }
    }
}

impl Ring for PolyRing {
    type Elem = PolyA;

    fn field(&self) -> &Fq {
        &self.fq
    }

    fn zero(&self) -> PolyA {
        PolyA::zero()
    }

    fn from_fq(&self, c: FqElem) -> PolyA {
        PolyA::constant(c)
    }

    fn from_poly(&self, a: &PolyA) -> PolyA {
        a.clone()
    }

    fn add(&self, a: &PolyA, b: &PolyA) -> PolyA {
        a.add(&self.fq, b)
    }

    fn neg(&self, a: &PolyA) -> PolyA {
        a.neg(&self.fq)
    }

    fn sub(&self, a: &PolyA, b: &PolyA) -> PolyA {
        a.sub(&self.fq, b)
    }

    fn mul(&self, a: &PolyA, b: &PolyA) -> PolyA {
        a.mul(&self.fq, b)
    }

    fn is_zero(&self, a: &PolyA) -> bool {
        a.is_zero()
    }

    fn inv(&self, a: &PolyA) -> Result<PolyA> {
        match a.deg() {
            Some(0) => Ok(PolyA::constant(self.fq.inv(a.lead()))),
            None => Err(Error::DivisionByZero),
            _ => Err(Error::NotInvertible(a.encode())),
        }
    }

    fn frobenius(&self, a: &PolyA) -> PolyA {
        a.frobenius(&self.fq)
    }

    fn encode(&self, a: &PolyA) -> String {
        a.encode()
    }
}
