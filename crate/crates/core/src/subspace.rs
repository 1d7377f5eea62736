//! Exponentials of finite `F_q`-subspaces.
//!
//! For `V` spanned by independent `v_1, ..., v_n` the polynomial
//! `e_V(z) = z * prod_{v in V, v != 0} (1 - z/v)` satisfies
//! `e_{V_i} = (1 - c_i^(1-q) tau) e_{V_(i-1)}` with `c_i = e_{V_(i-1)}(v_i)`.

use crate::error::{Error, Result};
use crate::fq::FqElem;
use crate::ring::Ring;
use crate::skew::SkewPoly;

/// The factor chain `c_1, ..., c_n` of an ordered basis.
#[derive(Clone, Debug)]
pub struct SubspaceChain<E> {
    cs: Vec<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> SubspaceChain<E> {
    /// Builds the chain; fails with `NotASubspace` if the basis is dependent
    /// (some `c_i` vanishes, to precision over truncated rings).
    pub fn new<R: Ring<Elem = E>>(ring: &R, basis: &[E]) -> Result<SubspaceChain<E>> {
        let mut chain = SubspaceChain {
            cs: Vec::with_capacity(basis.len()),
        };
        for v in basis {
            let c = chain.eval(ring, v)?;
            if ring.is_zero(&c) {
                return Err(Error::NotASubspace);
            }
            chain.cs.push(c);
        }
        Ok(chain)
    }

    pub fn len(&self) -> usize {
        self.cs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cs.is_empty()
    }

    pub fn factors(&self) -> &[E] {
        &self.cs
    }

    /// `e_V(z)` for the full chain.
    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, z: &E) -> Result<E> {
        self.eval_prefix(ring, z, self.cs.len())
    }

    /// `e_{V_k}(z)` using the first `k` factors.
    pub fn eval_prefix<R: Ring<Elem = E>>(&self, ring: &R, z: &E, k: usize) -> Result<E> {
        let mut y = z.clone();
        for c in &self.cs[..k] {
            y = step(ring, &y, c)?;
        }
        Ok(y)
    }

    /// Values `e_{V_k}(z)` for every prefix length listed in `ks` (ascending).
    pub fn eval_prefixes<R: Ring<Elem = E>>(
        &self,
        ring: &R,
        z: &E,
        ks: &[usize],
    ) -> Result<Vec<E>> {
        let mut out = Vec::with_capacity(ks.len());
        let mut y = z.clone();
        let mut done = 0;
        for &k in ks {
            for c in &self.cs[done..k] {
                y = step(ring, &y, c)?;
            }
            done = k;
            out.push(y.clone());
        }
        Ok(out)
    }

    /// Extends the chain by one more basis vector.
    pub fn push<R: Ring<Elem = E>>(&mut self, ring: &R, v: &E) -> Result<()> {
        let c = self.eval(ring, v)?;
        if ring.is_zero(&c) {
            return Err(Error::NotASubspace);
        }
        self.cs.push(c);
        Ok(())
    }

    /// `e_V` as a skew polynomial with derivative 1.
    pub fn poly<R: Ring<Elem = E>>(&self, ring: &R) -> Result<SkewPoly<E>> {
        let mut p = SkewPoly::one(ring);
        for c in &self.cs {
            let k = factor(ring, c)?;
            // (1 - k tau) p
            let shifted: Vec<E> = std::iter::once(ring.zero())
                .chain(p.coeffs().iter().map(|b| ring.mul(&k, &ring.frobenius(b))))
                .collect();
            p = p.sub(ring, &SkewPoly::new(ring, shifted));
        }
        Ok(p)
    }
}

/// `c^(1-q) = c / c^q`.
fn factor<R: Ring>(ring: &R, c: &R::Elem) -> Result<R::Elem> {
    ring.div(c, &ring.frobenius(c))
}

/// `y - y^q / c^(q-1)`.
fn step<R: Ring>(ring: &R, y: &R::Elem, c: &R::Elem) -> Result<R::Elem> {
    let yq = ring.frobenius(y);
    Ok(ring.sub(y, &ring.mul(&yq, &factor(ring, c)?)))
}

/// `e_V` for a basis, as a skew polynomial.
pub fn subspace_poly<R: Ring>(ring: &R, basis: &[R::Elem]) -> Result<SkewPoly<R::Elem>> {
    SubspaceChain::new(ring, basis)?.poly(ring)
}

/// All `F_q`-combinations `sum x_i v_i`, in lexicographic order of the coefficient vector.
pub fn span<R: Ring>(ring: &R, basis: &[R::Elem]) -> Vec<R::Elem> {
    let fq = ring.field();
    let mut out = vec![ring.zero()];
    for v in basis {
        let mut next = Vec::with_capacity(out.len() * fq.q() as usize);
        for c in fq.elements() {
            let cv = ring.scale(c, v);
            for w in &out {
                next.push(ring.add(w, &cv));
            }
        }
        out = next;
    }
    out
}

/// Extracts an `F_q`-basis from a finite set containing 0 that should be a subspace.
pub fn basis_of_set<R: Ring>(ring: &R, h: &[R::Elem]) -> Result<Vec<R::Elem>> {
    let eq = |a: &R::Elem, b: &R::Elem| ring.is_zero(&ring.sub(a, b));
    if !h.iter().any(|x| ring.is_zero(x)) {
        return Err(Error::NotASubspace);
    }
    let mut basis = Vec::new();
    let mut sp = vec![ring.zero()];
    for x in h {
        if !sp.iter().any(|w| eq(w, x)) {
            basis.push(x.clone());
            sp = span(ring, &basis);
            if sp.len() > h.len() {
                return Err(Error::NotASubspace);
            }
        }
    }
    let distinct = count_distinct(ring, h);
    if sp.len() != distinct || !sp.iter().all(|w| h.iter().any(|x| eq(w, x))) {
        return Err(Error::NotASubspace);
    }
    Ok(basis)
}

fn count_distinct<R: Ring>(ring: &R, h: &[R::Elem]) -> usize {
    let mut seen: Vec<&R::Elem> = Vec::new();
    for x in h {
        if !seen.iter().any(|w| ring.is_zero(&ring.sub(w, x))) {
            seen.push(x);
        }
    }
    seen.len()
}

/// The literal product `z * prod_{v != 0} (1 - z/v)` over a listed subspace.
pub fn naive_product<R: Ring>(ring: &R, elems: &[R::Elem], z: &R::Elem) -> Result<R::Elem> {
    let mut acc = z.clone();
    for v in elems {
        if ring.is_zero(v) {
            continue;
        }
        acc = ring.mul(&acc, &ring.sub(&ring.one(), &ring.div(z, v)?));
    }
    Ok(acc)
}

/// Scalar combination helper: `sum x_i v_i`.
pub fn combine<R: Ring>(ring: &R, xs: &[FqElem], vs: &[R::Elem]) -> R::Elem {
    xs.iter().zip(vs).fold(ring.zero(), |acc, (&x, v)| {
        ring.add(&acc, &ring.scale(x, v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::Fq;
    use crate::poly::PolyA;
    use crate::ratf::{RatF, RatField};

    #[test]
    fn chain_matches_product() {
        let fq = Fq::new(3).unwrap();
        let k = RatField::new(fq.clone());
        let basis = vec![
            k.t(),
            RatF::from_poly(PolyA::from_indices(&fq, &[1, 0, 1]).unwrap()),
        ];
        let chain = SubspaceChain::new(&k, &basis).unwrap();
        let z = RatF::from_poly(PolyA::from_indices(&fq, &[2, 1, 1, 1]).unwrap());
        let all = span(&k, &basis);
        assert_eq!(all.len(), 9);
        assert_eq!(
            chain.eval(&k, &z).unwrap(),
            naive_product(&k, &all, &z).unwrap()
        );
        let p = chain.poly(&k).unwrap();
        assert_eq!(p.deg(), Some(2));
        assert_eq!(p.derivative(&k), k.one());
        for v in &all {
            assert!(k.is_zero(&p.eval(&k, v)));
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let k = RatField::new(Fq::new(2).unwrap());
        let b = vec![k.t(), k.t()];
        assert_eq!(SubspaceChain::new(&k, &b).unwrap_err(), Error::NotASubspace);
    }

    #[test]
    fn basis_extraction() {
        let k = RatField::new(Fq::new(2).unwrap());
        let one = k.one();
        let t = k.t();
        let h = vec![k.zero(), one.clone(), t.clone(), k.add(&one, &t)];
        assert_eq!(basis_of_set(&k, &h).unwrap().len(), 2);
        let bad = vec![k.zero(), one, t];
        assert_eq!(basis_of_set(&k, &bad).unwrap_err(), Error::NotASubspace);
    }
}
