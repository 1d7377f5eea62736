//! Truncated Laurent series over `F_q` in `s = t^(-1/e)`.
//!
//! These model `F_inf = F_q((1/t))` (ramification `e = 1`) and the finite
//! extensions of it inside `C_inf` obtained by adjoining `t^(1/e)`. A series
//! is known modulo `s^prec` (absolute precision); `|x| = q^(-val/e)`.
//!
//! Exact zero and zero-to-precision are different values: only the former is
//! ever reported as equal to zero.

use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::poly::{mul_truncated, PolyA};
use crate::ratf::RatF;
use crate::ring::Ring;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TLaurent {
    ram: u32,
    /// Order in `s`; equals `prec` when the series is zero to precision.
    val: i64,
    prec: i64,
    /// Coefficient of `s^(val + i)`; the first one is nonzero.
    coeffs: Vec<FqElem>,
    exact_zero: bool,
}

/// Valuation `val / ram`, as an exact rational.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(Rational64),
    /// Zero to the given precision (in the same units); the true value is unknown.
    ZeroToPrecision(Rational64),
    ExactZero,
}

impl Valuation {
    pub fn finite(self) -> Option<Rational64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// Three-valued equality.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Comparison {
    Equal,
    Unequal,
    Undecidable,
}

/// Outcome of an approximate comparison `|x - y| <= q^(-tol)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Agreement {
    Agree,
    Disagree,
    Undecidable,
}

impl TLaurent {
    pub fn exact_zero(ram: u32) -> TLaurent {
        TLaurent {
            ram,
            val: 0,
            prec: 0,
            coeffs: Vec::new(),
            exact_zero: true,
        }
    }

    pub fn zero_to(ram: u32, prec: i64) -> TLaurent {
        TLaurent {
            ram,
            val: prec,
            prec,
            coeffs: Vec::new(),
            exact_zero: false,
        }
    }

    /// Series with `coeffs[i]` the coefficient of `s^(start + i)`, known below `s^prec`.
    pub fn from_coeffs(ram: u32, start: i64, coeffs: &[FqElem], prec: i64) -> TLaurent {
        assert!(ram >= 1, "ramification must be positive");
        let mut first = None;
        for (i, c) in coeffs.iter().enumerate() {
            let e = start + i as i64;
            if e >= prec {
                break;
            }
            if !c.is_zero() {
                first = Some(i);
                break;
            }
        }
        match first {
            None => TLaurent::zero_to(ram, prec),
            Some(i) => {
                let val = start + i as i64;
                let len = (prec - val) as usize;
                let mut v: Vec<FqElem> = coeffs[i..].iter().copied().take(len).collect();
                v.resize(len, FqElem::ZERO);
                TLaurent {
                    ram,
                    val,
                    prec,
                    coeffs: v,
                    exact_zero: false,
                }
            }
        }
    }

    /// `c * s^k`.
    pub fn monomial(ram: u32, c: FqElem, k: i64, prec: i64) -> TLaurent {
        TLaurent::from_coeffs(ram, k, &[c], prec)
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    /// Zero to precision, or exactly zero.
    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order in `s`, `None` if zero to precision.
    pub fn val(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Absolute precision in `s`, `None` for exact zero.
    pub fn prec(&self) -> Option<i64> {
        (!self.exact_zero).then_some(self.prec)
    }

    /// Number of known coefficients from the leading one.
    pub fn relative_prec(&self) -> i64 {
        self.coeffs.len() as i64
    }

    pub fn leading(&self) -> Option<FqElem> {
        self.coeffs.first().copied()
    }

    /// Coefficient of `s^k`, `None` when beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<FqElem> {
        if self.exact_zero {
            return Some(FqElem::ZERO);
        }
        if k >= self.prec {
            return None;
        }
        if k < self.val {
            return Some(FqElem::ZERO);
        }
        Some(self.coeffs[(k - self.val) as usize])
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn valuation(&self) -> Valuation {
        let r = self.ram as i64;
        if self.exact_zero {
            Valuation::ExactZero
        } else if self.coeffs.is_empty() {
            Valuation::ZeroToPrecision(Rational64::new(self.prec, r))
        } else {
            Valuation::Finite(Rational64::new(self.val, r))
        }
    }

    /// Drops all information at or beyond `s^p`.
    pub fn truncate(&self, p: i64) -> TLaurent {
        if self.exact_zero || p >= self.prec {
            return self.clone();
        }
        if self.coeffs.is_empty() || p <= self.val {
            return TLaurent::zero_to(self.ram, p);
        }
        let mut out = self.clone();
        out.coeffs.truncate((p - self.val) as usize);
        out.prec = p;
        out
    }

    fn check(&self, o: &TLaurent) -> Result<()> {
        if self.ram != o.ram {
            return Err(Error::RamificationMismatch(self.ram, o.ram));
        }
        Ok(())
    }

    pub fn try_add(&self, fq: &Fq, o: &TLaurent) -> Result<TLaurent> {
        self.check(o)?;
        if self.exact_zero {
            return Ok(o.clone());
        }
        if o.exact_zero {
            return Ok(self.clone());
        }
        let prec = self.prec.min(o.prec);
        let start = self.val.min(o.val);
        if start >= prec {
            return Ok(TLaurent::zero_to(self.ram, prec));
        }
        let len = (prec - start) as usize;
        let mut v = vec![FqElem::ZERO; len];
        for x in [self, o] {
            for (i, &c) in x.coeffs.iter().enumerate() {
                let k = x.val + i as i64 - start;
                if k as usize >= len {
                    break;
                }
                v[k as usize] = fq.add(v[k as usize], c);
            }
        }
        Ok(TLaurent::from_coeffs(self.ram, start, &v, prec))
    }

    pub fn neg(&self, fq: &Fq) -> TLaurent {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = fq.neg(*c);
        }
        out
    }

    pub fn try_sub(&self, fq: &Fq, o: &TLaurent) -> Result<TLaurent> {
        self.try_add(fq, &o.neg(fq))
    }

    pub fn try_mul(&self, fq: &Fq, o: &TLaurent) -> Result<TLaurent> {
        self.check(o)?;
        if self.exact_zero || o.exact_zero {
            return Ok(TLaurent::exact_zero(self.ram));
        }
        let val = self.val + o.val;
        let prec = (self.prec + o.val).min(o.prec + self.val);
        let len = prec - val;
        if len <= 0 {
            return Ok(TLaurent::zero_to(self.ram, prec));
        }
        let v = mul_truncated(fq, &self.coeffs, &o.coeffs, len as usize);
        Ok(TLaurent::from_coeffs(self.ram, val, &v, prec))
    }

    pub fn scale(&self, fq: &Fq, c: FqElem) -> TLaurent {
        if c.is_zero() {
            return TLaurent::exact_zero(self.ram);
        }
        let mut out = self.clone();
        for x in &mut out.coeffs {
            *x = fq.mul(*x, c);
        }
        out
    }

    /// Multiplication by `s^k`.
    pub fn shift(&self, k: i64) -> TLaurent {
        if self.exact_zero {
            return self.clone();
        }
        let mut out = self.clone();
        out.val += k;
        out.prec += k;
        out
    }

    /// Inverse; a unit at valuation `v` known to `prec` gives precision `prec - 2v`.
    pub fn try_inv(&self, fq: &Fq) -> Result<TLaurent> {
        if self.exact_zero {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.is_empty() {
            return Err(Error::DivisionByZeroToPrecision(self.prec));
        }
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let inv0 = fq.inv(a[0]);
        let mut b = Vec::with_capacity(n);
        b.push(inv0);
        for k in 1..n {
            let mut acc = FqElem::ZERO;
            for j in 1..=k {
                if !a[j].is_zero() && !b[k - j].is_zero() {
                    acc = fq.add(acc, fq.mul(a[j], b[k - j]));
                }
            }
            b.push(fq.neg(fq.mul(inv0, acc)));
        }
        Ok(TLaurent::from_coeffs(
            self.ram,
            -self.val,
            &b,
            self.prec - 2 * self.val,
        ))
    }

    /// `x^q`: coefficients are fixed and exponents (and precision) scale by `q`.
    pub fn frobenius(&self, fq: &Fq) -> TLaurent {
        if self.exact_zero {
            return self.clone();
        }
        let q = fq.q() as i64;
        if self.coeffs.is_empty() {
            return TLaurent::zero_to(self.ram, self.prec * q);
        }
        let mut v = vec![FqElem::ZERO; (self.coeffs.len() - 1) * q as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * q as usize] = c;
        }
        TLaurent::from_coeffs(self.ram, self.val * q, &v, self.prec * q)
    }

    /// Three-valued equality.
    pub fn compare(&self, fq: &Fq, o: &TLaurent) -> Result<Comparison> {
        let d = self.try_sub(fq, o)?;
        Ok(if d.exact_zero {
            Comparison::Equal
        } else if d.coeffs.is_empty() {
            Comparison::Undecidable
        } else {
            Comparison::Unequal
        })
    }

    /// Tests `|x - y| <= q^(-tol)`, i.e. `valuation(x - y) >= tol`.
    pub fn agrees_within(&self, fq: &Fq, o: &TLaurent, tol: i64) -> Result<Agreement> {
        let d = self.try_sub(fq, o)?;
        let need = tol * self.ram as i64;
        Ok(if d.exact_zero {
            Agreement::Agree
        } else if d.coeffs.is_empty() {
            if d.prec >= need {
                Agreement::Agree
            } else {
                Agreement::Undecidable
            }
        } else if d.val >= need {
            Agreement::Agree
        } else {
            Agreement::Disagree
        })
    }

    /// Splits `x = sum_k s^k x_k(s^ram)` into its `ram` components over `F_inf`,
    /// each returned as a series in `1/t` (ramification 1).
    pub fn components(&self) -> Vec<TLaurent> {
        let e = self.ram as i64;
        (0..e)
            .map(|k| {
                if self.exact_zero {
                    return TLaurent::exact_zero(1);
                }
                let prec =
                    (self.prec - k).div_euclid(e) + i64::from((self.prec - k).rem_euclid(e) != 0);
                let start =
                    (self.val - k).div_euclid(e) + i64::from((self.val - k).rem_euclid(e) != 0);
                let v: Vec<FqElem> = (start..prec)
                    .map(|m| self.coeff(m * e + k).unwrap_or(FqElem::ZERO))
                    .collect();
                TLaurent::from_coeffs(1, start, &v, prec)
            })
            .collect()
    }

    /// Canonical encoding `ram:val:prec:[c0 c1 ...]`; exact zero is `ram:*:*:[]`.
    pub fn encode(&self) -> String {
        if self.exact_zero {
            return format!("{}:*:*:[]", self.ram);
        }
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.0.to_string()).collect();
        format!("{}:{}:{}:[{}]", self.ram, self.val, self.prec, cs.join(" "))
    }

    pub fn parse(fq: &Fq, s: &str) -> Result<TLaurent> {
        let bad = || Error::Parse(format!("TLaurent {s:?}"));
        let mut parts = s.trim().splitn(4, ':');
        let ram: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let val = parts.next().ok_or_else(bad)?;
        let prec = parts.next().ok_or_else(bad)?;
        let body = parts.next().ok_or_else(bad)?.trim();
        if ram == 0 {
            return Err(bad());
        }
        let body = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(bad)?;
        if val == "*" {
            return Ok(TLaurent::exact_zero(ram));
        }
        let val: i64 = val.parse().map_err(|_| bad())?;
        let prec: i64 = prec.parse().map_err(|_| bad())?;
        let cs = body
            .split_whitespace()
            .map(|w| w.parse::<u32>().map_err(|_| bad()).and_then(|i| fq.elem(i)))
            .collect::<Result<Vec<_>>>()?;
        if prec < val {
            return Err(bad());
        }
        Ok(TLaurent::from_coeffs(ram, val, &cs, prec))
    }
}

impl fmt::Display for TLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// Checked arithmetic on truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TlOp {
    Add,
    Mul,
    Inv,
    Pow(u64),
}

/// Arithmetic with precision propagation; `y` is ignored by unary operations.
pub fn tl_arith(fq: &Fq, x: &TLaurent, y: &TLaurent, op: TlOp) -> Result<TLaurent> {
    match op {
        TlOp::Add => x.try_add(fq, y),
        TlOp::Mul => x.try_mul(fq, y),
        TlOp::Inv => x.try_inv(fq),
        TlOp::Pow(n) => {
            let ring = LaurentRing::new(fq.clone(), x.ram, x.prec().unwrap_or(0));
            Ok(ring.pow(x, n))
        }
    }
}

/// Exact polynomial `a(t)` with `t = s^(-ram)`, known below `s^prec`.
pub fn embed_poly(a: &PolyA, ram: u32, prec: i64) -> TLaurent {
    let Some(d) = a.deg() else {
        return TLaurent::exact_zero(ram);
    };
    let e = ram as i64;
    let start = -(d as i64) * e;
    let mut v = vec![FqElem::ZERO; d * ram as usize + 1];
    for (k, &c) in a.coeffs().iter().enumerate() {
        v[(d - k) * ram as usize] = c;
    }
    TLaurent::from_coeffs(ram, start, &v, prec)
}

/// Expansion of `f in F` at the place at infinity, known below `s^prec`.
pub fn embed_f(fq: &Fq, f: &RatF, ram: u32, prec: i64) -> TLaurent {
    if f.is_zero() {
        return TLaurent::exact_zero(ram);
    }
    let e = ram as i64;
    let dn = f.num().degi();
    let dd = f.den().degi();
    let val = e * (dd - dn);
    if prec <= val {
        return TLaurent::zero_to(ram, prec);
    }
    let len = (prec - val) as usize;
    // f = s^val * nrev(s^e) / drev(s^e) with reversed coefficient lists.
    let spread = |p: &PolyA, d: i64| -> Vec<FqElem> {
        let mut v = vec![FqElem::ZERO; len];
        for (k, &c) in p.coeffs().iter().enumerate() {
            let idx = (d - k as i64) * e;
            if (idx as usize) < len {
                v[idx as usize] = c;
            }
        }
        v
    };
    let n = spread(f.num(), dn);
    let dser = TLaurent::from_coeffs(ram, 0, &spread(f.den(), dd), len as i64);
    let dinv = dser
        .try_inv(fq)
        .expect("leading coefficient of denominator is nonzero");
    let nser = TLaurent::from_coeffs(ram, 0, &n, len as i64);
    nser.try_mul(fq, &dinv)
        .expect("same ramification")
        .shift(val)
}

/// `valuation(x)` as an exact rational, with the zero cases flagged.
pub fn valuation(x: &TLaurent) -> Valuation {
    x.valuation()
}

/// The ring of truncated series at a fixed ramification.
///
/// `prec` is the absolute precision given to constants coming from `F_q` or
/// `A`; computed elements carry their own precision.
#[derive(Clone, Debug)]
pub struct LaurentRing {
    fq: Fq,
    ram: u32,
    prec: i64,
}

impl LaurentRing {
    pub fn new(fq: Fq, ram: u32, prec: i64) -> LaurentRing {
        assert!(ram >= 1, "ramification must be positive");
        LaurentRing { fq, ram, prec }
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn with_prec(&self, prec: i64) -> LaurentRing {
        LaurentRing {
            prec,
            ..self.clone()
        }
    }

    pub fn embed(&self, f: &RatF) -> TLaurent {
        embed_f(&self.fq, f, self.ram, self.prec)
    }

    /// `c * s^k` at the ring precision.
    pub fn monomial(&self, c: FqElem, k: i64) -> TLaurent {
        TLaurent::monomial(self.ram, c, k, self.prec)
    }

    pub fn agrees_within(&self, x: &TLaurent, y: &TLaurent, tol: i64) -> Agreement {
        x.agrees_within(&self.fq, y, tol).expect("ramification")
    }
}

impl Ring for LaurentRing {
    type Elem = TLaurent;

    fn field(&self) -> &Fq {
        &self.fq
    }

    fn zero(&self) -> TLaurent {
        TLaurent::exact_zero(self.ram)
    }

    fn from_fq(&self, c: FqElem) -> TLaurent {
        if c.is_zero() {
            return self.zero();
        }
        TLaurent::monomial(self.ram, c, 0, self.prec)
    }

    fn from_poly(&self, a: &PolyA) -> TLaurent {
        embed_poly(a, self.ram, self.prec)
    }

    fn add(&self, a: &TLaurent, b: &TLaurent) -> TLaurent {
        a.try_add(&self.fq, b)
            .expect("ramification mismatch inside a LaurentRing")
    }

    fn neg(&self, a: &TLaurent) -> TLaurent {
        a.neg(&self.fq)
    }

    fn mul(&self, a: &TLaurent, b: &TLaurent) -> TLaurent {
        a.try_mul(&self.fq, b)
            .expect("ramification mismatch inside a LaurentRing")
    }

    fn is_zero(&self, a: &TLaurent) -> bool {
        a.is_zero_to_precision()
    }

    fn is_unit(&self, a: &TLaurent) -> bool {
        !a.is_zero_to_precision()
    }

    fn inv(&self, a: &TLaurent) -> Result<TLaurent> {
        a.try_inv(&self.fq)
    }

    fn frobenius(&self, a: &TLaurent) -> TLaurent {
        a.frobenius(&self.fq)
    }

    fn scale(&self, c: FqElem, a: &TLaurent) -> TLaurent {
        a.scale(&self.fq, c)
    }

    fn encode(&self, a: &TLaurent) -> String {
        a.encode()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fq {
        Fq::new(2).unwrap()
    }

    #[test]
    fn monomial_product() {
        let fq = f2();
        let s = TLaurent::monomial(1, FqElem(1), 1, 10);
        let s2 = s.try_mul(&fq, &s).unwrap();
        assert_eq!(s2.val(), Some(2));
        assert_eq!(s2.coeff(2), Some(FqElem(1)));
        assert_eq!(s2.coeff(3), Some(FqElem(0)));
    }

    #[test]
    fn geometric_inverse_char_two() {
        let fq = f2();
        let x = TLaurent::from_coeffs(1, 0, &[FqElem(1), FqElem(1)], 4);
        let y = x.try_inv(&fq).unwrap();
        assert_eq!(y.encode(), "1:0:4:[1 1 1 1]");
    }

    #[test]
    fn mul_precision_rule() {
        let fq = Fq::new(3).unwrap();
        let a = TLaurent::from_coeffs(1, 0, &[FqElem(1), FqElem(2)], 5);
        let b = TLaurent::from_coeffs(1, 0, &[FqElem(2)], 7);
        assert_eq!(a.try_mul(&fq, &b).unwrap().prec(), Some(5));
    }

    #[test]
    fn ramification_mismatch_errors() {
        let fq = f2();
        let a = TLaurent::monomial(1, FqElem(1), 0, 5);
        let b = TLaurent::monomial(2, FqElem(1), 0, 5);
        assert_eq!(a.try_add(&fq, &b), Err(Error::RamificationMismatch(1, 2)));
    }

    #[test]
    fn inverse_of_zero_to_precision_errors() {
        let fq = f2();
        assert_eq!(
            TLaurent::zero_to(1, 3).try_inv(&fq),
            Err(Error::DivisionByZeroToPrecision(3))
        );
        assert_eq!(
            TLaurent::exact_zero(1).try_inv(&fq),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn embed_examples() {
        let fq = f2();
        let t = embed_f(&fq, &RatF::from_poly(PolyA::t()), 1, 5);
        assert_eq!(t.val(), Some(-1));
        assert_eq!(
            valuation(&t),
            Valuation::Finite(Rational64::from_integer(-1))
        );
        let x = RatF::new(
            &fq,
            PolyA::one(),
            PolyA::from_indices(&fq, &[1, 1]).unwrap(),
        )
        .unwrap();
        assert_eq!(embed_f(&fq, &x, 1, 4).encode(), "1:1:4:[1 1 1]");
        assert!(embed_f(&fq, &RatF::zero(), 1, 4).is_exact_zero());
    }

    #[test]
    fn valuation_cases() {
        let s3 = TLaurent::monomial(2, FqElem(1), 3, 10);
        assert_eq!(valuation(&s3), Valuation::Finite(Rational64::new(3, 2)));
        assert_eq!(
            valuation(&TLaurent::zero_to(1, 6)),
            Valuation::ZeroToPrecision(Rational64::from_integer(6))
        );
        assert_eq!(valuation(&TLaurent::exact_zero(1)), Valuation::ExactZero);
    }

    #[test]
    fn frobenius_scales_precision() {
        let fq = Fq::new(3).unwrap();
        let x = TLaurent::from_coeffs(1, -1, &[FqElem(1), FqElem(2)], 1);
        let y = x.frobenius(&fq);
        assert_eq!((y.val(), y.prec()), (Some(-3), Some(3)));
        let ring = LaurentRing::new(fq.clone(), 1, 10);
        assert_eq!(ring.pow(&x, 3), y.truncate(-1));
    }

    #[test]
    fn components_split_by_residue() {
        let fq = f2();
        // s^-1 + 1 + s with ram 2: component 0 holds 1, component 1 holds s^-1 and s.
        let x = TLaurent::from_coeffs(2, -1, &[FqElem(1), FqElem(1), FqElem(1)], 2);
        let c = x.components();
        assert_eq!(c[0].val(), Some(0));
        assert_eq!(c[1].val(), Some(-1));
        assert_eq!(c[1].coeff(0), Some(FqElem(1)));
        let _ = fq;
    }

    #[test]
    fn three_valued_compare() {
        let fq = f2();
        let a = TLaurent::monomial(1, FqElem(1), 0, 5);
        let b = a
            .try_add(&fq, &TLaurent::monomial(1, FqElem(1), 7, 9))
            .unwrap();
        assert_eq!(a.compare(&fq, &b).unwrap(), Comparison::Undecidable);
        assert_eq!(
            a.compare(&fq, &TLaurent::exact_zero(1)).unwrap(),
            Comparison::Unequal
        );
        assert_eq!(
            TLaurent::exact_zero(1)
                .compare(&fq, &TLaurent::exact_zero(1))
                .unwrap(),
            Comparison::Equal
        );
        assert_eq!(a.agrees_within(&fq, &b, 5).unwrap(), Agreement::Agree);
        assert_eq!(a.agrees_within(&fq, &b, 6).unwrap(), Agreement::Undecidable);
    }

    #[test]
    fn encode_parse() {
        let fq = Fq::new(3).unwrap();
        let x = TLaurent::from_coeffs(2, -3, &[FqElem(2), FqElem(0), FqElem(1)], 4);
        assert_eq!(TLaurent::parse(&fq, &x.encode()).unwrap(), x);
        assert!(TLaurent::parse(&fq, "1:*:*:[]").unwrap().is_exact_zero());
    }
}
