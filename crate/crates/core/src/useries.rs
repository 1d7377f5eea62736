//! Truncated series in the parameter at infinity `u`, with truncated Laurent
//! series as coefficients.

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::laurent::{LaurentRing, TLaurent};
use crate::poly::PolyA;
use crate::ring::Ring;

/// `sum_k coeffs[k] u^(start + k)`, known modulo `u^prec`.
///
/// Coefficients below `start` are exactly zero.
#[derive(Clone, PartialEq, Debug)]
pub struct USeries {
    start: i64,
    prec: i64,
    coeffs: Vec<TLaurent>,
}

impl USeries {
    pub fn new(start: i64, prec: i64, mut coeffs: Vec<TLaurent>) -> USeries {
        let n = (prec - start).max(0) as usize;
        coeffs.truncate(n);
        USeries {
            start,
            prec,
            coeffs,
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeffs(&self) -> &[TLaurent] {
        &self.coeffs
    }

    /// Coefficient of `u^k`; `None` beyond the precision.
    pub fn coeff(&self, k: i64, ram: u32) -> Option<TLaurent> {
        if k >= self.prec {
            return None;
        }
        if k < self.start {
            return Some(TLaurent::exact_zero(ram));
        }
        Some(
            self.coeffs
                .get((k - self.start) as usize)
                .cloned()
                .unwrap_or_else(|| TLaurent::exact_zero(ram)),
        )
    }

    /// Index of the first coefficient that is certainly nonzero; `None` when
    /// every known coefficient is zero to precision.
    pub fn certified_order(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero_to_precision())
            .map(|i| self.start + i as i64)
    }

    /// `ord:prec_u:[c_ord; ...]`, starting at the certified order.
    pub fn encode(&self) -> String {
        let ord = self.certified_order().unwrap_or(self.prec);
        let skip = (ord - self.start) as usize;
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .skip(skip)
            .map(TLaurent::encode)
            .collect();
        format!("{}:{}:[{}]", ord, self.prec, parts.join("; "))
    }

    pub fn parse(fq: &Fq, s: &str) -> Result<USeries> {
        let bad = || Error::Parse(format!("u-series {s:?}"));
        let mut it = s.trim().splitn(3, ':');
        let ord: i64 = it
            .next()
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let prec: i64 = it
            .next()
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let body = it.next().ok_or_else(bad)?.trim();
        let body = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(bad)?;
        let coeffs = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(';')
                .map(|x| TLaurent::parse(fq, x.trim()))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(USeries::new(ord, prec, coeffs))
    }
}

/// Order at infinity of a `u`-expansion: the certified `u`-order.
pub fn order_at_infinity(f: &USeries) -> Result<i64> {
    f.certified_order().ok_or(Error::ZeroToPrecision)
}

/// Holomorphy and cuspidality flags derived from the order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InfinityOrder {
    pub order: i64,
    pub holomorphic: bool,
    pub cuspidal: bool,
}

pub fn classify_at_infinity(f: &USeries) -> Result<InfinityOrder> {
    let order = order_at_infinity(f)?;
    Ok(InfinityOrder {
        order,
        holomorphic: order >= 0,
        cuspidal: order >= 1,
    })
}

/// The ring of `u`-series with a cap on the `u`-precision.
#[derive(Clone, Debug)]
pub struct USeriesRing {
    lr: LaurentRing,
    prec_u: i64,
}

impl USeriesRing {
    pub fn new(lr: LaurentRing, prec_u: i64) -> USeriesRing {
        USeriesRing { lr, prec_u }
    }

    pub fn laurent(&self) -> &LaurentRing {
        &self.lr
    }

    pub fn prec_u(&self) -> i64 {
        self.prec_u
    }

    /// The constant series `c`.
    pub fn constant(&self, c: TLaurent) -> USeries {
        USeries::new(0, self.prec_u, vec![c])
    }

    /// `c * u^k`.
    pub fn monomial(&self, c: TLaurent, k: i64) -> USeries {
        USeries::new(k, self.prec_u.max(k), vec![c])
    }

    pub fn u(&self) -> USeries {
        self.monomial(self.lr.one(), 1)
    }

    /// `c * f` for a constant `c`.
    pub fn scale_by(&self, c: &TLaurent, f: &USeries) -> USeries {
        USeries::new(
            f.start,
            f.prec,
            f.coeffs.iter().map(|x| self.lr.mul(c, x)).collect(),
        )
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, f: &USeries, k: i64) -> USeries {
        USeries::new(
            f.start + k,
            (f.prec + k).min(self.prec_u.max(f.start + k)),
            f.coeffs.clone(),
        )
    }

    /// Coefficientwise truncation to `u`-precision `p`.
    pub fn truncate(&self, f: &USeries, p: i64) -> USeries {
        USeries::new(f.start, f.prec.min(p), f.coeffs.clone())
    }

    /// Evaluation at a value of `u`.
    pub fn eval(&self, f: &USeries, u: &TLaurent) -> Result<TLaurent> {
        let lr = &self.lr;
        let mut acc = lr.zero();
        let mut up = if f.start >= 0 {
            lr.pow(u, f.start as u64)
        } else {
            lr.pow(&lr.inv(u)?, (-f.start) as u64)
        };
        for c in &f.coeffs {
            acc = lr.add(&acc, &lr.mul(c, &up));
            up = lr.mul(&up, u);
        }
        Ok(acc)
    }

    /// The constant term as a truncated series.
    pub fn at_zero(&self, f: &USeries) -> TLaurent {
        f.coeff(0, self.lr.ram())
            .unwrap_or_else(|| TLaurent::zero_to(self.lr.ram(), i64::MIN / 4))
    }

    fn aligned(&self, f: &USeries, start: i64, prec: i64) -> Vec<TLaurent> {
        let ram = self.lr.ram();
        (start..prec)
            .map(|k| f.coeff(k, ram).expect("within precision"))
            .collect()
    }
}

impl Ring for USeriesRing {
    type Elem = USeries;

    fn field(&self) -> &Fq {
        self.lr.field()
    }

    fn zero(&self) -> USeries {
        USeries::new(0, self.prec_u, Vec::new())
    }

    fn from_fq(&self, c: FqElem) -> USeries {
        self.constant(self.lr.from_fq(c))
    }

    fn from_poly(&self, a: &PolyA) -> USeries {
        self.constant(self.lr.from_poly(a))
    }

    fn add(&self, a: &USeries, b: &USeries) -> USeries {
        let prec = a.prec.min(b.prec);
        let start = a.start.min(b.start).min(prec);
        let ca = self.aligned(a, start, prec);
        let cb = self.aligned(b, start, prec);
        USeries::new(
            start,
            prec,
            ca.iter().zip(&cb).map(|(x, y)| self.lr.add(x, y)).collect(),
        )
    }

    fn neg(&self, a: &USeries) -> USeries {
        USeries::new(
            a.start,
            a.prec,
            a.coeffs.iter().map(|x| self.lr.neg(x)).collect(),
        )
    }

    fn mul(&self, a: &USeries, b: &USeries) -> USeries {
        let start = a.start + b.start;
        let prec = (a.prec + b.start)
            .min(b.prec + a.start)
            .min(self.prec_u.max(start));
        let n = (prec - start).max(0) as usize;
        let mut out = vec![self.lr.zero(); n];
        for (i, x) in a.coeffs.iter().enumerate().take(n) {
            if x.is_exact_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(n - i) {
                if y.is_exact_zero() {
                    continue;
                }
                out[i + j] = self.lr.add(&out[i + j], &self.lr.mul(x, y));
            }
        }
        USeries::new(start, prec, out)
    }

    fn is_zero(&self, a: &USeries) -> bool {
        a.coeffs.iter().all(TLaurent::is_zero_to_precision)
    }

    /// Inverse of a series whose coefficient at `u^start` is a unit.
    fn inv(&self, a: &USeries) -> Result<USeries> {
        let lr = &self.lr;
        let a0 = a.coeffs.first().ok_or(Error::DivisionByZero)?;
        let inv0 = lr.inv(a0)?;
        let prec = (a.prec - 2 * a.start).min(self.prec_u.max(-a.start));
        let n = (prec + a.start).max(0) as usize;
        let mut b: Vec<TLaurent> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                b.push(inv0.clone());
                continue;
            }
            let mut acc = lr.zero();
            for j in 1..=k.min(a.coeffs.len().saturating_sub(1)) {
                acc = lr.add(&acc, &lr.mul(&a.coeffs[j], &b[k - j]));
            }
            b.push(lr.neg(&lr.mul(&inv0, &acc)));
        }
        Ok(USeries::new(-a.start, prec, b))
    }

    fn frobenius(&self, a: &USeries) -> USeries {
        let q = self.field().q() as i64;
        let start = a.start * q;
        let prec = (a.prec * q).min(self.prec_u.max(start));
        let n = (prec - start).max(0) as usize;
        let mut out = vec![self.lr.zero(); n];
        for (i, c) in a.coeffs.iter().enumerate() {
            let k = i * q as usize;
            if k < n {
                out[k] = self.lr.frobenius(c);
            }
        }
        USeries::new(start, prec, out)
    }

    fn scale(&self, c: FqElem, a: &USeries) -> USeries {
        USeries::new(
            a.start,
            a.prec,
            a.coeffs.iter().map(|x| self.lr.scale(c, x)).collect(),
        )
    }

    fn encode(&self, a: &USeries) -> String {
        a.encode()
    }
}
