//! Residue rings `A/M`.

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::poly::PolyA;
use crate::ring::Ring;

#[derive(Clone, Debug)]
pub struct ResidueRing {
    fq: Fq,
    m: PolyA,
}

impl ResidueRing {
    /// `A/M` for a nonzero modulus; `M` is made monic.
    pub fn new(fq: Fq, m: &PolyA) -> Result<ResidueRing> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = m.monic(&fq);
        Ok(ResidueRing { fq, m })
    }

    pub fn modulus(&self) -> &PolyA {
        &self.m
    }

    pub fn reduce(&self, a: &PolyA) -> PolyA {
        a.rem(&self.fq, &self.m).expect("nonzero modulus")
    }

    /// Number of elements, `q^deg M`.
    pub fn size(&self) -> u128 {
        (self.fq.q() as u128).pow(self.m.degi() as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = PolyA> + '_ {
        PolyA::all_below(&self.fq, self.m.degi() as usize)
    }

    pub fn units(&self) -> impl Iterator<Item = PolyA> + '_ {
        self.elements()
            .filter(move |a| a.gcd(&self.fq, &self.m) == PolyA::one())
    }
}

impl Ring for ResidueRing {
    type Elem = PolyA;

    fn field(&self) -> &Fq {
        &self.fq
    }

    fn zero(&self) -> PolyA {
        PolyA::zero()
    }

    fn from_fq(&self, c: FqElem) -> PolyA {
        self.reduce(&PolyA::constant(c))
    }

    fn from_poly(&self, a: &PolyA) -> PolyA {
        self.reduce(a)
    }

    fn add(&self, a: &PolyA, b: &PolyA) -> PolyA {
        a.add(&self.fq, b)
    }

    fn neg(&self, a: &PolyA) -> PolyA {
        a.neg(&self.fq)
    }

    fn mul(&self, a: &PolyA, b: &PolyA) -> PolyA {
        self.reduce(&a.mul(&self.fq, b))
    }

    fn is_zero(&self, a: &PolyA) -> bool {
        a.is_zero()
    }

    fn is_unit(&self, a: &PolyA) -> bool {
        a.gcd(&self.fq, &self.m) == PolyA::one()
    }

    fn inv(&self, a: &PolyA) -> Result<PolyA> {
        a.inv_mod(&self.fq, &self.m)
            .ok_or_else(|| Error::NotInvertible(a.encode()))
    }

    fn frobenius(&self, a: &PolyA) -> PolyA {
        self.reduce(&a.frobenius(&self.fq))
    }

    fn encode(&self, a: &PolyA) -> String {
        a.encode()
    }
}
