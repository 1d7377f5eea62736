//! The arithmetic interface shared by every coefficient ring.
//!
//! Rings are context objects: elements are plain data and all arithmetic goes
//! through the ring, which owns the field tables, precision policy and so on.
//! Every ring here is an `F_q`-algebra together with a structure map from
//! `A = F_q[t]`, and carries the `q`-power Frobenius used by `tau`.

use std::fmt::Debug;

use crate::error::Result;
use crate::fq::{Fq, FqElem};
use crate::poly::PolyA;

pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn field(&self) -> &Fq;

    fn zero(&self) -> Self::Elem;

    fn one(&self) -> Self::Elem {
        self.from_fq(self.field().one())
    }

    fn from_fq(&self, c: FqElem) -> Self::Elem;

    /// Structure map `A -> R`.
    fn from_poly(&self, a: &PolyA) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Whether `a` is zero, or indistinguishable from zero at its precision.
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Whether `a` is certainly a unit.
    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inv(a).is_ok()
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// The `q`-power Frobenius `a -> a^q`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;

    /// `a^(q^k)`.
    fn frobenius_pow(&self, a: &Self::Elem, k: usize) -> Self::Elem {
        let mut out = a.clone();
        for _ in 0..k {
            out = self.frobenius(&out);
        }
        out
    }

    fn scale(&self, c: FqElem, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.from_fq(c), a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Canonical text encoding.
    fn encode(&self, a: &Self::Elem) -> String;
}
