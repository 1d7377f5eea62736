//! The rational function field `F = F_q(t)`.

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::poly::PolyA;
use crate::ring::Ring;

/// `num / den` in lowest terms with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatF {
    num: PolyA,
    den: PolyA,
}

impl RatF {
    pub fn zero() -> RatF {
        RatF {
            num: PolyA::zero(),
            den: PolyA::one(),
        }
    }

    pub fn one() -> RatF {
        RatF::from_poly(PolyA::one())
    }

    pub fn from_poly(a: PolyA) -> RatF {
        RatF {
            num: a,
            den: PolyA::one(),
        }
    }

    pub fn new(fq: &Fq, num: PolyA, den: PolyA) -> Result<RatF> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatF::zero());
        }
        let g = num.gcd(fq, &den);
        let (n, d) = (num.div_exact(fq, &g)?, den.div_exact(fq, &g)?);
        let c = fq.inv(d.lead());
        Ok(RatF {
            num: n.scale(fq, c),
            den: d.scale(fq, c),
        })
    }

    pub fn num(&self) -> &PolyA {
        &self.num
    }

    pub fn den(&self) -> &PolyA {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.deg() == Some(0)
    }

    /// Numerator when integral.
    pub fn as_poly(&self) -> Option<&PolyA> {
        self.is_integral().then_some(&self.num)
    }

    /// Degree `deg num - deg den`, i.e. `-v_inf`. `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.degi() - self.den.degi())
    }

    pub fn add(&self, fq: &Fq, o: &RatF) -> RatF {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatF::new(fq, self.num.add(fq, &o.num), self.den.clone()).unwrap();
        }
        let g = self.den.gcd(fq, &o.den);
        let d1 = self.den.div_exact(fq, &g).unwrap();
        let d2 = o.den.div_exact(fq, &g).unwrap();
        let num = self.num.mul(fq, &d2).add(fq, &o.num.mul(fq, &d1));
        RatF::new(fq, num, d1.mul(fq, &o.den)).unwrap()
    }

    pub fn neg(&self, fq: &Fq) -> RatF {
        RatF {
            num: self.num.neg(fq),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, fq: &Fq, o: &RatF) -> RatF {
        self.add(fq, &o.neg(fq))
    }

    pub fn mul(&self, fq: &Fq, o: &RatF) -> RatF {
        if self.is_zero() || o.is_zero() {
            return RatF::zero();
        }
        // Cross-cancel before multiplying to keep the gcds small.
        let g1 = self.num.gcd(fq, &o.den);
        let g2 = o.num.gcd(fq, &self.den);
        let n = self
            .num
            .div_exact(fq, &g1)
            .unwrap()
            .mul(fq, &o.num.div_exact(fq, &g2).unwrap());
        let d = self
            .den
            .div_exact(fq, &g2)
            .unwrap()
            .mul(fq, &o.den.div_exact(fq, &g1).unwrap());
        let c = fq.inv(d.lead());
        RatF {
            num: n.scale(fq, c),
            den: d.scale(fq, c),
        }
    }

    pub fn scale(&self, fq: &Fq, c: FqElem) -> RatF {
        if c.is_zero() {
            return RatF::zero();
        }
        RatF {
            num: self.num.scale(fq, c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self, fq: &Fq) -> Result<RatF> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = fq.inv(self.num.lead());
        Ok(RatF {
            num: self.den.scale(fq, c),
            den: self.num.scale(fq, c),
        })
    }

    /// `x^q`; numerator and denominator stay coprime under Frobenius.
    pub fn frobenius(&self, fq: &Fq) -> RatF {
        RatF {
            num: self.num.frobenius(fq),
            den: self.den.frobenius(fq),
        }
    }

    /// Canonical text encoding `[n0 n1 ...]/[d0 d1 ...]`.
    pub fn encode(&self) -> String {
        format!("[{}]/[{}]", self.num.encode(), self.den.encode())
    }

    /// Parses `[..]/[..]`, `[..]` (integral) or a bare index list.
    pub fn parse(fq: &Fq, s: &str) -> Result<RatF> {
        let s = s.trim();
        let strip = |x: &str| {
            x.trim()
                .trim_start_matches('[')
                .trim_end_matches(']')
                .to_string()
        };
        match s.split_once('/') {
            Some((n, d)) => RatF::new(
                fq,
                PolyA::parse(fq, &strip(n))?,
                PolyA::parse(fq, &strip(d))?,
            ),
            None => Ok(RatF::from_poly(PolyA::parse(fq, &strip(s))?)),
        }
    }
}

/// The field `F_q(t)` as a coefficient ring.
#[derive(Clone, Debug)]
pub struct RatField {
    fq: Fq,
}

impl RatField {
    pub fn new(fq: Fq) -> RatField {
        RatField { fq }
    }

    /// The element `t`.
    pub fn t(&self) -> RatF {
        RatF::from_poly(PolyA::t())
    }

    pub fn frac(&self, num: PolyA, den: PolyA) -> Result<RatF> {
        RatF::new(&self.fq, num, den)
    }
}

impl Ring for RatField {
    type Elem = RatF;

    fn field(&self) -> &Fq {
        &self.fq
    }

    fn zero(&self) -> RatF {
        RatF::zero()
    }

    fn from_fq(&self, c: FqElem) -> RatF {
        RatF::from_poly(PolyA::constant(c))
    }

    fn from_poly(&self, a: &PolyA) -> RatF {
        RatF::from_poly(a.clone())
    }

    fn add(&self, a: &RatF, b: &RatF) -> RatF {
        a.add(&self.fq, b)
    }

    fn neg(&self, a: &RatF) -> RatF {
        a.neg(&self.fq)
    }

    fn mul(&self, a: &RatF, b: &RatF) -> RatF {
        a.mul(&self.fq, b)
    }

    fn is_zero(&self, a: &RatF) -> bool {
        a.is_zero()
    }

    fn inv(&self, a: &RatF) -> Result<RatF> {
        a.inv(&self.fq)
    }

    fn frobenius(&self, a: &RatF) -> RatF {
        a.frobenius(&self.fq)
    }

    fn scale(&self, c: FqElem, a: &RatF) -> RatF {
        a.scale(&self.fq, c)
    }

    fn encode(&self, a: &RatF) -> String {
        a.encode()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalises_to_lowest_terms() {
        let fq = Fq::new(3).unwrap();
        let t = PolyA::t();
        let tt = t.mul(&fq, &t);
        let x = RatF::new(&fq, tt.scale(&fq, FqElem(2)), t.scale(&fq, FqElem(2))).unwrap();
        assert_eq!(x, RatF::from_poly(t));
        assert!(x.den().is_monic());
    }

    #[test]
    fn field_ops() {
        let fq = Fq::new(5).unwrap();
        let k = RatField::new(fq.clone());
        let a = k
            .frac(PolyA::t(), PolyA::from_indices(&fq, &[1, 1]).unwrap())
            .unwrap();
        let b = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &b), k.one());
        assert_eq!(k.sub(&a, &a), k.zero());
        assert_eq!(k.frobenius(&a), k.pow(&a, 5));
    }

    #[test]
    fn parse_encode() {
        let fq = Fq::new(2).unwrap();
        let x = RatF::parse(&fq, "[1]/[1 1]").unwrap();
        assert_eq!(x.encode(), "[1]/[1 1]");
        assert_eq!(
            RatF::parse(&fq, "[0 1]").unwrap(),
            RatF::from_poly(PolyA::t())
        );
    }
}
