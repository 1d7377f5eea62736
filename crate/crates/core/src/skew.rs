//! Twisted polynomials `R{tau}` with `tau * c = c^q * tau`.

use crate::error::{Error, Result};
use crate::ring::Ring;

/// `sum b_i tau^i`, coefficients ascending.
///
/// Top coefficients that the ring reports as zero are dropped; over truncated
/// series this includes coefficients that are only zero to precision.
#[derive(Clone, PartialEq, Debug)]
pub struct SkewPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> SkewPoly<E> {
    pub fn zero() -> SkewPoly<E> {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `tau`-degree, `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

impl<E: Clone + PartialEq + std::fmt::Debug> SkewPoly<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, mut coeffs: Vec<E>) -> SkewPoly<E> {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn constant<R: Ring<Elem = E>>(ring: &R, c: E) -> SkewPoly<E> {
        SkewPoly::new(ring, vec![c])
    }

    pub fn one<R: Ring<Elem = E>>(ring: &R) -> SkewPoly<E> {
        SkewPoly::constant(ring, ring.one())
    }

    /// `c * tau^k`.
    pub fn monomial<R: Ring<Elem = E>>(ring: &R, c: E, k: usize) -> SkewPoly<E> {
        let mut v = vec![ring.zero(); k];
        v.push(c);
        SkewPoly::new(ring, v)
    }

    pub fn tau<R: Ring<Elem = E>>(ring: &R) -> SkewPoly<E> {
        SkewPoly::monomial(ring, ring.one(), 1)
    }

    /// Coefficient of `tau^i` (zero beyond the degree).
    pub fn coeff<R: Ring<Elem = E>>(&self, ring: &R, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero())
    }

    /// The constant term `b_0`, i.e. the derivative of the additive polynomial.
    pub fn derivative<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        self.coeff(ring, 0)
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, o: &SkewPoly<E>) -> SkewPoly<E> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| ring.add(&self.coeff(ring, i), &o.coeff(ring, i)))
            .collect();
        SkewPoly::new(ring, v)
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> SkewPoly<E> {
        SkewPoly {
            coeffs: self.coeffs.iter().map(|c| ring.neg(c)).collect(),
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, o: &SkewPoly<E>) -> SkewPoly<E> {
        self.add(ring, &o.neg(ring))
    }

    /// Left scalar multiplication `c * f`.
    pub fn scale_left<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> SkewPoly<E> {
        SkewPoly::new(ring, self.coeffs.iter().map(|b| ring.mul(c, b)).collect())
    }

    /// Right scalar multiplication `f * c = sum b_i c^(q^i) tau^i`.
    pub fn scale_right<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> SkewPoly<E> {
        let mut cp = c.clone();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for b in &self.coeffs {
            v.push(ring.mul(b, &cp));
            cp = ring.frobenius(&cp);
        }
        SkewPoly::new(ring, v)
    }

    /// `(fg)_k = sum_{i+j=k} f_i g_j^(q^i)`.
    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, g: &SkewPoly<E>) -> SkewPoly<E> {
        self.mul_truncated(ring, g, usize::MAX)
    }

    /// Product with all terms of `tau`-degree `>= len` discarded.
    pub fn mul_truncated<R: Ring<Elem = E>>(
        &self,
        ring: &R,
        g: &SkewPoly<E>,
        len: usize,
    ) -> SkewPoly<E> {
        if self.is_zero() || g.is_zero() {
            return SkewPoly::zero();
        }
        let n = (self.coeffs.len() + g.coeffs.len() - 1).min(len);
        let mut out = vec![ring.zero(); n];
        let mut gi: Vec<E> = g.coeffs.clone();
        for (i, fi) in self.coeffs.iter().enumerate() {
            if i >= n {
                break;
            }
            if !ring.is_zero(fi) {
                for (j, gj) in gi.iter().enumerate() {
                    if i + j >= n {
                        break;
                    }
                    out[i + j] = ring.add(&out[i + j], &ring.mul(fi, gj));
                }
            }
            if i + 1 < n {
                gi = gi
                    .iter()
                    .take(n - i - 1)
                    .map(|c| ring.frobenius(c))
                    .collect();
            }
        }
        SkewPoly::new(ring, out)
    }

    /// Keeps the terms of `tau`-degree `< len`.
    pub fn truncate<R: Ring<Elem = E>>(&self, ring: &R, len: usize) -> SkewPoly<E> {
        SkewPoly::new(ring, self.coeffs.iter().take(len).cloned().collect())
    }

    /// `sum b_i z^(q^i)`.
    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, z: &E) -> E {
        let mut acc = ring.zero();
        let mut zp = z.clone();
        for (i, b) in self.coeffs.iter().enumerate() {
            acc = ring.add(&acc, &ring.mul(b, &zp));
            if i + 1 < self.coeffs.len() {
                zp = ring.frobenius(&zp);
            }
        }
        acc
    }

    /// `f = quot * g + rem` with `deg rem < deg g`; needs a unit leading coefficient in `g`.
    pub fn right_divide<R: Ring<Elem = E>>(
        &self,
        ring: &R,
        g: &SkewPoly<E>,
    ) -> Result<(SkewPoly<E>, SkewPoly<E>)> {
        let m = g.deg().ok_or(Error::DivisionByZero)?;
        let lead = g.leading().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = vec![ring.zero(); self.coeffs.len().saturating_sub(m)];
        while let Some(n) = rem.deg() {
            if n < m {
                break;
            }
            let k = n - m;
            let c = ring.div(
                rem.leading().expect("nonzero"),
                &ring.frobenius_pow(lead, k),
            )?;
            quot[k] = c.clone();
            let sub = SkewPoly::monomial(ring, c, k).mul(ring, g);
            let mut next = rem.sub(ring, &sub);
            // The top term cancels by construction; drop it even when inexact.
            if next.coeffs.len() > n {
                next.coeffs.truncate(n);
                next = SkewPoly::new(ring, next.coeffs);
            }
            rem = next;
        }
        Ok((SkewPoly::new(ring, quot), rem))
    }

    pub fn map<R2: Ring>(&self, ring: &R2, f: impl Fn(&E) -> R2::Elem) -> SkewPoly<R2::Elem> {
        SkewPoly::new(ring, self.coeffs.iter().map(f).collect())
    }

    /// Encoding `[b0; b1; ...; bd]`.
    pub fn encode<R: Ring<Elem = E>>(&self, ring: &R) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| ring.encode(c)).collect();
        format!("[{}]", parts.join("; "))
    }

    pub fn parse<R: Ring<Elem = E>>(
        ring: &R,
        s: &str,
        elem: impl Fn(&str) -> Result<E>,
    ) -> Result<SkewPoly<E>> {
        let s = s.trim();
        let body = s
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("skew polynomial {s:?}")))?;
        if body.trim().is_empty() {
            return Ok(SkewPoly::zero());
        }
        let v = body
            .split(';')
            .map(|p| elem(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(SkewPoly::new(ring, v))
    }
}
