//! Drinfeld `A`-modules over a coefficient ring, given by the image of `t`.

use crate::error::{Error, Result};
use crate::fq::FqElem;
use crate::poly::PolyA;
use crate::ring::Ring;
use crate::skew::SkewPoly;
use crate::subspace::{basis_of_set, SubspaceChain};

#[derive(Clone, Debug)]
pub struct DrinfeldModule<R: Ring> {
    ring: R,
    rank: usize,
    phi_t: SkewPoly<R::Elem>,
    generalised: bool,
}

/// Validates `phi_t` as a (generalised) Drinfeld module of rank `r`.
pub fn make_module<R: Ring>(
    ring: &R,
    phi_t: SkewPoly<R::Elem>,
    r: usize,
    generalised: bool,
) -> Result<DrinfeldModule<R>> {
    let d = phi_t.derivative(ring);
    if !ring.is_zero(&ring.sub(&d, &ring.from_poly(&PolyA::t()))) {
        return Err(Error::DerivativeMismatch);
    }
    let deg = phi_t.deg().unwrap_or(0);
    if generalised {
        if deg > r {
            return Err(Error::RankViolation(format!(
                "degree {deg} exceeds rank bound {r}"
            )));
        }
    } else if deg != r {
        return Err(Error::RankViolation(format!("degree {deg} but rank {r}")));
    } else if r >= 1 && !ring.is_unit(phi_t.leading().expect("nonzero")) {
        return Err(Error::RankViolation(
            "leading coefficient is not a unit".into(),
        ));
    }
    if deg == 0 {
        return Err(Error::Degenerate);
    }
    Ok(DrinfeldModule {
        ring: ring.clone(),
        rank: r,
        phi_t,
        generalised,
    })
}

impl<R: Ring> DrinfeldModule<R> {
    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_generalised(&self) -> bool {
        self.generalised
    }

    pub fn phi_t(&self) -> &SkewPoly<R::Elem> {
        &self.phi_t
    }

    /// `phi_a = sum a_k phi_t^k`, by Horner's rule.
    pub fn act(&self, a: &PolyA) -> SkewPoly<R::Elem> {
        let ring = &self.ring;
        let mut acc = SkewPoly::zero();
        for &c in a.coeffs().iter().rev() {
            acc = acc.mul(ring, &self.phi_t);
            acc = acc.add(ring, &SkewPoly::constant(ring, ring.from_fq(c)));
        }
        acc
    }

    /// Coefficients `e_0, ..., e_depth` of the exponential, solved from
    /// `(t^(q^i) - t) e_i = sum_{j>=1} phi_{t,j} e_(i-j)^(q^j)`.
    pub fn exp_series(&self, depth: usize) -> Result<Vec<R::Elem>> {
        let ring = &self.ring;
        let phi = self.phi_t.coeffs();
        let g0 = self.phi_t.derivative(ring);
        let mut e: Vec<R::Elem> = vec![ring.one()];
        let mut g0q = g0.clone();
        for i in 1..=depth {
            g0q = ring.frobenius(&g0q);
            let mut rhs = ring.zero();
            for j in 1..phi.len().min(i + 1) {
                rhs = ring.add(&rhs, &ring.mul(&phi[j], &ring.frobenius_pow(&e[i - j], j)));
            }
            let den = ring.sub(&g0q, &g0);
            let ei = ring.div(&rhs, &den).map_err(|_| {
                Error::InsufficientPrecision(format!("exponential coefficient {i} lost all digits"))
            })?;
            e.push(ei);
        }
        Ok(e)
    }

    /// Coefficients of the logarithm, the compositional inverse of the exponential.
    pub fn log_series(&self, depth: usize) -> Result<Vec<R::Elem>> {
        let e = self.exp_series(depth)?;
        Ok(invert_series(&self.ring, &e))
    }

    /// `phi_a * e - e * a` with terms of `tau`-degree above `depth` dropped.
    pub fn exp_residual(&self, a: &PolyA, depth: usize) -> Result<SkewPoly<R::Elem>> {
        let ring = &self.ring;
        let e = SkewPoly::new(ring, self.exp_series(depth)?);
        let lhs = self.act(a).mul_truncated(ring, &e, depth + 1);
        let rhs = e
            .scale_right(ring, &ring.from_poly(a))
            .truncate(ring, depth + 1);
        Ok(lhs.sub(ring, &rhs))
    }

    /// Isogeny with kernel `H`: returns `e_H` and the module `psi` with
    /// `psi_t e_H = e_H phi_t`.
    pub fn isogeny_from_kernel(
        &self,
        h: &[R::Elem],
    ) -> Result<(SkewPoly<R::Elem>, DrinfeldModule<R>)> {
        let ring = &self.ring;
        let basis = basis_of_set(ring, h)?;
        let phi = &self.phi_t;
        for v in &basis {
            let w = phi.eval(ring, v);
            if !h.iter().any(|x| ring.is_zero(&ring.sub(x, &w))) {
                return Err(Error::NotStable);
            }
        }
        let eh = SubspaceChain::new(ring, &basis)?.poly(ring)?;
        let (psi, rem) = eh.mul(ring, phi).right_divide(ring, &eh)?;
        if !rem.is_zero() {
            return Err(Error::NotStable);
        }
        let target = make_module(ring, psi, self.rank, self.generalised)?;
        Ok((eh, target))
    }

    /// Checks a level-`N` structure given by the images of the standard
    /// `A/N`-basis of `(N^(-1)A/A)^r`.
    pub fn check_level_structure(&self, ls: &LevelStructure<R::Elem>) -> LevelCheck {
        let ring = &self.ring;
        let n = &ls.level;
        if n.degi() == 0 {
            return LevelCheck::Accepted;
        }
        if n.is_zero() {
            return LevelCheck::Rejected(LevelReject::ZeroLevel);
        }
        let phi_n = self.act(n);
        for p in &ls.images {
            if !ring.is_zero(&phi_n.eval(ring, p)) {
                return LevelCheck::Rejected(LevelReject::NotTorsion);
            }
        }
        // The map is F_q-linear on the basis t^k e_i, k < deg N; injective iff
        // no nonzero combination of those images vanishes.
        let d = n.degi() as usize;
        let mut vals = Vec::new();
        for p in &ls.images {
            let mut x = p.clone();
            for _ in 0..d {
                vals.push(x.clone());
                x = self.phi_t.eval(ring, &x);
            }
        }
        let fq = ring.field();
        let q = fq.q() as u64;
        let total = q.checked_pow(vals.len() as u32).unwrap_or(u64::MAX);
        let mut digits = vec![0u32; vals.len()];
        for _ in 1..total {
            for dgt in digits.iter_mut() {
                *dgt += 1;
                if *dgt as u64 == q {
                    *dgt = 0;
                } else {
                    break;
                }
            }
            let xs: Vec<FqElem> = digits.iter().map(|&i| FqElem(i)).collect();
            if ring.is_zero(&crate::subspace::combine(ring, &xs, &vals)) {
                return LevelCheck::Rejected(LevelReject::NotInjective);
            }
        }
        if ls.images.len() != self.rank {
            return LevelCheck::Rejected(LevelReject::WrongCount);
        }
        LevelCheck::Accepted
    }

    /// Canonical encoding `r=<int> generalised=<0|1> phi_t=<SkewPoly>`.
    pub fn encode(&self) -> String {
        format!(
            "r={} generalised={} phi_t={}",
            self.rank,
            u8::from(self.generalised),
            self.phi_t.encode(&self.ring)
        )
    }
}

/// Compositional inverse of `sum e_i z^(q^i)` with `e_0 = 1`:
/// `l_n = -sum_{k>=1} e_k l_(n-k)^(q^k)`.
pub fn invert_series<R: Ring>(ring: &R, e: &[R::Elem]) -> Vec<R::Elem> {
    let mut l: Vec<R::Elem> = vec![ring.one()];
    for n in 1..e.len() {
        let mut acc = ring.zero();
        for k in 1..=n {
            acc = ring.add(&acc, &ring.mul(&e[k], &ring.frobenius_pow(&l[n - k], k)));
        }
        l.push(ring.neg(&acc));
    }
    l
}

/// Images of the standard basis of `(N^(-1)A/A)^r`.
#[derive(Clone, Debug)]
pub struct LevelStructure<E> {
    pub level: PolyA,
    pub images: Vec<E>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelReject {
    ZeroLevel,
    NotTorsion,
    NotInjective,
    WrongCount,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelCheck {
    Accepted,
    Rejected(LevelReject),
}

impl LevelCheck {
    pub fn is_accepted(self) -> bool {
        self == LevelCheck::Accepted
    }
}
