//! Arithmetic subgroups of `GL_r(F)`, coset enumeration for double cosets
//! `G' delta G`, and the analytic Hecke operator `T_delta`.

mod blocks;
mod finite;

pub use blocks::{
    component_count, component_count_phi, det_class, determinant_classes, hecke_blocks,
    standard_reps, HeckeBlock,
};
pub use finite::{
    hecke_compose_check, CompositionTable, CompositionTerm, DoubleCosetTerm, FiniteQuotient,
};

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::lattice::{gamma_action, gamma_g_member, AdelicApprox, OmegaPoint};
use crate::laurent::{LaurentRing, TLaurent};
use crate::matrix::{as_integral, common_denominator, hnf, inverse_f, to_ratf, MatA, MatF, Matrix};
use crate::poly::{PolyA, PolyRing};
use crate::ratf::{RatF, RatField};
use crate::residue::ResidueRing;
use crate::ring::Ring;

/// Default ceiling on the number of cosets an enumeration may produce.
pub const DEFAULT_COSET_CEILING: usize = 200_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SubgroupKind {
    /// `GL_r(A)`.
    Full,
    /// `Gamma(N)`, the kernel of reduction modulo `N`.
    Principal,
    /// `Gamma_g = GL_r(F) cap g K(N) g^(-1)`.
    Conjugate(AdelicApprox),
}

/// An arithmetic subgroup of `GL_r(F)` of one of the supported kinds.
///
/// Every kind is `c Gamma(N) c^(-1)` for a global `c`; a conjugate
/// `Gamma_g` uses `c = g_glob`, since the `k`-part normalises `K(N)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArithSubgroup {
    kind: SubgroupKind,
    level: PolyA,
    r: usize,
}

/// Canonical label of a left coset `Gamma m`.
///
/// With `x = c^(-1) m` and `d` the monic lcm of the denominators of `x`,
/// `hnf` is the Hermite form of `d x` and `unit = d x hnf^(-1)` modulo `N`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CosetKey {
    den: PolyA,
    hnf: Vec<PolyA>,
    unit: Vec<PolyA>,
}

impl ArithSubgroup {
    pub fn full(r: usize) -> ArithSubgroup {
        ArithSubgroup {
            kind: SubgroupKind::Full,
            level: PolyA::one(),
            r,
        }
    }

    /// `Gamma(N)`; a constant `N` gives `GL_r(A)`.
    pub fn principal(fq: &Fq, n: &PolyA, r: usize) -> Result<ArithSubgroup> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if n.degi() == 0 {
            return Ok(ArithSubgroup::full(r));
        }
        Ok(ArithSubgroup {
            kind: SubgroupKind::Principal,
            level: n.monic(fq),
            r,
        })
    }

    pub fn conjugate(g: &AdelicApprox) -> ArithSubgroup {
        ArithSubgroup {
            kind: SubgroupKind::Conjugate(g.clone()),
            level: g.level.clone(),
            r: g.rank(),
        }
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn level(&self) -> &PolyA {
        &self.level
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    fn conj(&self) -> Option<&MatF> {
        match &self.kind {
            SubgroupKind::Conjugate(g) => Some(&g.g_glob),
            _ => None,
        }
    }

    pub fn contains(&self, fq: &Fq, gamma: &MatF) -> bool {
        match &self.kind {
            SubgroupKind::Conjugate(g) => gamma_g_member(fq, gamma, g),
            _ => {
                if gamma.rows() != self.r || gamma.cols() != self.r {
                    return false;
                }
                let Some(m) = as_integral(gamma) else {
                    return false;
                };
                let pr = PolyRing::new(fq.clone());
                if m.det(&pr).degi() != 0 {
                    return false;
                }
                let res = ResidueRing::new(fq.clone(), &self.level).expect("nonzero level");
                self.level.degi() == 0 || m.map(|x| res.reduce(x)).is_identity(&res)
            }
        }
    }

    /// Label of the coset `self * m`; equal labels mean equal cosets.
    pub fn coset_key(&self, fq: &Fq, m: &MatF) -> Result<CosetKey> {
        let k = RatField::new(fq.clone());
        let x = match self.conj() {
            Some(c) => inverse_f(fq, c)?.mul(&k, m),
            None => m.clone(),
        };
        let (den, xi) = scaled(fq, &x);
        let h = hnf(fq, &xi);
        if h.rows() != self.r {
            return Err(Error::SingularMatrix);
        }
        let u = to_ratf(&xi).mul(&k, &inverse_f(fq, &to_ratf(&h))?);
        let u = as_integral(&u).expect("unimodular factor is integral");
        let res = ResidueRing::new(fq.clone(), &self.level)?;
        Ok(CosetKey {
            den,
            hnf: h.entries().to_vec(),
            unit: u.entries().iter().map(|a| res.reduce(a)).collect(),
        })
    }

    /// Canonical representative of `self * m`: Hermite form for level one,
    /// `m` itself otherwise.
    fn canonical_rep(&self, fq: &Fq, m: &MatF) -> Result<MatF> {
        if self.level.degi() > 0 {
            return Ok(m.clone());
        }
        let k = RatField::new(fq.clone());
        let x = match self.conj() {
            Some(c) => inverse_f(fq, c)?.mul(&k, m),
            None => m.clone(),
        };
        let (den, xi) = scaled(fq, &x);
        let h = to_ratf(&hnf(fq, &xi)).scale(&k, &RatF::new(fq, PolyA::one(), den)?);
        Ok(match self.conj() {
            Some(c) => c.mul(&k, &h),
            None => h,
        })
    }

    /// Generators of the image of the group modulo `level * modulus`.
    ///
    /// For `GL_r(A)`: elementary matrices `E_ij(c t^k)` with `k < deg modulus`
    /// and diagonal units. For `Gamma(N)`: `E_ij(N c t^k)` together with
    /// lifts of `diag(u, u^(-1))` for `u = 1 + N x` a unit modulo
    /// `N * modulus`.
    pub fn generators(&self, fq: &Fq, modulus: &PolyA) -> Vec<MatF> {
        let r = self.r;
        let b = modulus.degi().max(1) as usize;
        let mut out = Vec::new();
        let n = &self.level;
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                for k in 0..b {
                    for c in fq.nonzero() {
                        let x = PolyA::monomial(c, k).mul(fq, n);
                        out.push(elementary(fq, r, i, j, &x));
                    }
                }
            }
        }
        if n.degi() == 0 {
            let g = fq.generator();
            if g != fq.one() {
                for i in 0..r {
                    let mut d = vec![PolyA::one(); r];
                    d[i] = PolyA::constant(g);
                    out.push(Matrix::diag(&PolyRing::new(fq.clone()), &d));
                }
            }
        } else if r >= 2 {
            let big = n.mul(fq, modulus).monic(fq);
            for x in PolyA::all_below(fq, modulus.degi().max(0) as usize) {
                if x.is_zero() {
                    continue;
                }
                let u = PolyA::one().add(fq, &n.mul(fq, &x));
                let Some(v) = u.inv_mod(fq, &big) else {
                    continue;
                };
                for i in 0..r - 1 {
                    out.push(whitehead(fq, r, i, &u, &v));
                }
            }
        }
        let k = RatField::new(fq.clone());
        let mut gens: Vec<MatF> = out.iter().map(to_ratf).collect();
        if let Some(c) = self.conj() {
            let ci = inverse_f(fq, c).expect("conjugating matrix is invertible");
            gens = gens.iter().map(|g| c.mul(&k, g).mul(&k, &ci)).collect();
        }
        gens
    }

    pub fn encode(&self, fq: &Fq) -> String {
        match &self.kind {
            SubgroupKind::Full => format!("GL{}(A)", self.r),
            SubgroupKind::Principal => format!("Gamma({})", self.level.encode()),
            SubgroupKind::Conjugate(g) => {
                let k = RatField::new(fq.clone());
                format!(
                    "Gamma_g(level={}; g=[{}])",
                    self.level.encode(),
                    g.g_glob.encode(&k).replace('\n', "; ")
                )
            }
        }
    }
}

/// `d` and `d * m` integral, `d` the monic lcm of the denominators.
pub(crate) fn scaled(fq: &Fq, m: &MatF) -> (PolyA, MatA) {
    let d = common_denominator(fq, m);
    let k = RatField::new(fq.clone());
    let xi = as_integral(&m.scale(&k, &RatF::from_poly(d.clone()))).expect("cleared denominators");
    (d, xi)
}

pub(crate) fn elementary(fq: &Fq, r: usize, i: usize, j: usize, x: &PolyA) -> MatA {
    let mut m = Matrix::identity(&PolyRing::new(fq.clone()), r);
    m.set(i, j, x.clone());
    m
}

/// A global element of `SL_r(A)` congruent to `diag(u, v)` in slots
/// `(i, i+1)` modulo any modulus for which `u v = 1`.
fn whitehead(fq: &Fq, r: usize, i: usize, u: &PolyA, v: &PolyA) -> MatA {
    let pr = PolyRing::new(fq.clone());
    let one = PolyA::one();
    let m1 = one.neg(fq);
    let e = |a: usize, b: usize, x: &PolyA| elementary(fq, r, a, b, x);
    let (a, b) = (i, i + 1);
    [
        e(a, b, u),
        e(b, a, &v.neg(fq)),
        e(a, b, u),
        e(a, b, &m1),
        e(b, a, &one),
        e(a, b, &m1),
    ]
    .iter()
    .fold(Matrix::identity(&pr, r), |acc, x| acc.mul(&pr, x))
}

/// Representatives of `Gamma' \ Gamma' delta Gamma`.
#[derive(Clone, Debug)]
pub struct CosetSet {
    pub reps: Vec<MatF>,
    pub keys: Vec<CosetKey>,
    pub base: ArithSubgroup,
    pub delta: MatF,
}

impl CosetSet {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Whether right multiplication by each of `gens` permutes the cosets.
    pub fn closed_under(&self, fq: &Fq, gens: &[MatF]) -> Result<bool> {
        let k = RatField::new(fq.clone());
        let known: BTreeMap<&CosetKey, usize> =
            self.keys.iter().enumerate().map(|(i, x)| (x, i)).collect();
        for g in gens {
            let mut hit = vec![false; self.reps.len()];
            for rep in &self.reps {
                let key = self.base.coset_key(fq, &rep.mul(&k, g))?;
                match known.get(&key) {
                    Some(&i) if !hit[i] => hit[i] = true,
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    /// One matrix per line, rows joined by `;`.
    pub fn encode(&self, fq: &Fq) -> String {
        let k = RatField::new(fq.clone());
        self.reps
            .iter()
            .map(|m| m.encode(&k).replace('\n', "; "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Modulus `M` such that the right action of `g` on `gp \ gp delta g`
/// factors through reduction modulo `level(g) * M`.
fn action_modulus(fq: &Fq, gp: &ArithSubgroup, delta: &MatF, g: &ArithSubgroup) -> Result<PolyA> {
    let k = RatField::new(fq.clone());
    let mut p = delta.clone();
    if let Some(c) = gp.conj() {
        p = inverse_f(fq, c)?.mul(&k, &p);
    }
    if let Some(c) = g.conj() {
        p = p.mul(&k, c);
    }
    let (_, pi) = scaled(fq, &p);
    let det = pi.det(&PolyRing::new(fq.clone()));
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(det.mul(fq, gp.level()).monic(fq))
}

/// Representatives of `gp \ gp delta g`, found as the orbit of `gp delta`
/// under right multiplication by generators of `g`.
///
/// Every rank is accepted for `GL_r(A)` on both sides; congruence kinds are
/// limited to rank 2.
pub fn coset_reps(
    fq: &Fq,
    gp: &ArithSubgroup,
    delta: &MatF,
    g: &ArithSubgroup,
    ceiling: usize,
) -> Result<CosetSet> {
    let r = gp.rank();
    if g.rank() != r || delta.rows() != r || delta.cols() != r {
        return Err(Error::DimensionMismatch(
            "subgroup and matrix ranks differ".into(),
        ));
    }
    let k = RatField::new(fq.clone());
    if k.is_zero(&delta.det(&k)) {
        return Err(Error::SingularMatrix);
    }
    let both_full = gp.level().degi() == 0 && g.level().degi() == 0;
    if r != 2 && !both_full {
        return Err(Error::EnumeratorUnsupported(format!(
            "rank {r} with a congruence subgroup"
        )));
    }
    let m = action_modulus(fq, gp, delta, g)?;
    let gens = g.generators(fq, &m);
    let mut found: BTreeMap<CosetKey, MatF> = BTreeMap::new();
    let mut queue = VecDeque::new();
    found.insert(gp.coset_key(fq, delta)?, delta.clone());
    queue.push_back(delta.clone());
    while let Some(x) = queue.pop_front() {
        for s in &gens {
            let y = x.mul(&k, s);
            let key = gp.coset_key(fq, &y)?;
            if !found.contains_key(&key) {
                if found.len() >= ceiling {
                    return Err(Error::QuotientTooLarge {
                        size: found.len() as u128 + 1,
                        ceiling: ceiling as u128,
                    });
                }
                found.insert(key, y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut reps = Vec::with_capacity(found.len());
    let mut keys = Vec::with_capacity(found.len());
    for (key, x) in found {
        reps.push(gp.canonical_rep(fq, &x)?);
        keys.push(key);
    }
    let set = CosetSet {
        reps,
        keys,
        base: gp.clone(),
        delta: delta.clone(),
    };
    let wider = g.generators(fq, &m.mul(fq, &PolyA::t()));
    if !set.closed_under(fq, &wider)? {
        return Err(Error::EnumeratorUnsupported(
            "coset set is not closed under the subgroup".into(),
        ));
    }
    Ok(set)
}

/// A function on `Omega^r` given by an evaluator.
pub trait Form: Sync {
    fn eval(&self, ring: &LaurentRing, omega: &OmegaPoint) -> Result<TLaurent>;
}

impl<F> Form for F
where
    F: Fn(&LaurentRing, &OmegaPoint) -> Result<TLaurent> + Sync,
{
    fn eval(&self, ring: &LaurentRing, omega: &OmegaPoint) -> Result<TLaurent> {
        self(ring, omega)
    }
}

/// `j^(-k)` for an integer weight.
fn automorphy(ring: &LaurentRing, j: &TLaurent, k: i64) -> Result<TLaurent> {
    if k >= 0 {
        Ok(ring.pow(&ring.inv(j)?, k as u64))
    } else {
        Ok(ring.pow(j, (-k) as u64))
    }
}

/// `(f |_k gamma)(omega) = j(gamma, omega)^(-k) f(gamma(omega))`.
pub fn slash_eval(
    ring: &LaurentRing,
    f: &dyn Form,
    k: i64,
    gamma: &MatF,
    omega: &OmegaPoint,
) -> Result<TLaurent> {
    let (w, j) = gamma_action(ring, gamma, omega)?;
    let v = f.eval(ring, &w)?;
    Ok(ring.mul(&automorphy(ring, &j, k)?, &v))
}

/// `f |_k gamma` as a form.
pub struct Slashed<'a> {
    pub f: &'a dyn Form,
    pub k: i64,
    pub gamma: MatF,
}

impl Form for Slashed<'_> {
    fn eval(&self, ring: &LaurentRing, omega: &OmegaPoint) -> Result<TLaurent> {
        slash_eval(ring, self.f, self.k, &self.gamma, omega)
    }
}

/// `T_delta f = sum over cosets of f |_k gamma`.
pub struct HeckeImage<'a> {
    pub f: &'a dyn Form,
    pub k: i64,
    pub cosets: CosetSet,
}

impl Form for HeckeImage<'_> {
    fn eval(&self, ring: &LaurentRing, omega: &OmegaPoint) -> Result<TLaurent> {
        let terms: Vec<TLaurent> = self
            .cosets
            .reps
            .par_iter()
            .map(|g| slash_eval(ring, self.f, self.k, g, omega))
            .collect::<Result<Vec<_>>>()?;
        Ok(terms.iter().fold(ring.zero(), |acc, x| ring.add(&acc, x)))
    }
}

/// `T_delta : M_k(gp) -> M_k(g)` applied to `f`.
pub fn hecke_apply<'a>(
    fq: &Fq,
    f: &'a dyn Form,
    delta: &MatF,
    gp: &ArithSubgroup,
    g: &ArithSubgroup,
    k: i64,
) -> Result<HeckeImage<'a>> {
    let cosets = coset_reps(fq, gp, delta, g, DEFAULT_COSET_CEILING)?;
    Ok(HeckeImage { f, k, cosets })
}

/// `diag(d_1, ..., d_r)` over `F`.
pub fn diag_f(fq: &Fq, d: &[PolyA]) -> MatF {
    let k = RatField::new(fq.clone());
    Matrix::diag(
        &k,
        &d.iter().cloned().map(RatF::from_poly).collect::<Vec<_>>(),
    )
}

/// `c * Id` over `F` for a constant `c`.
pub fn scalar_f(fq: &Fq, c: FqElem, r: usize) -> MatF {
    diag_f(fq, &vec![PolyA::constant(c); r])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_double_cosets() {
        let fq = Fq::new(3).unwrap();
        let g = ArithSubgroup::full(2);
        let id = diag_f(&fq, &[PolyA::one(), PolyA::one()]);
        assert_eq!(coset_reps(&fq, &g, &id, &g, 100).unwrap().len(), 1);
        let two = scalar_f(&fq, FqElem(2), 2);
        let cs = coset_reps(&fq, &g, &two, &g, 100).unwrap();
        assert_eq!(cs.len(), 1);
        let t = diag_f(&fq, &[PolyA::t(), PolyA::t()]);
        assert_eq!(coset_reps(&fq, &g, &t, &g, 100).unwrap().len(), 1);
    }

    #[test]
    fn prime_degree_one() {
        for q in [2, 3, 4] {
            let fq = Fq::new(q).unwrap();
            let g = ArithSubgroup::full(2);
            let d = diag_f(&fq, &[PolyA::t(), PolyA::one()]);
            let cs = coset_reps(&fq, &g, &d, &g, 100).unwrap();
            assert_eq!(cs.len(), q as usize + 1);
        }
    }

    #[test]
    fn whitehead_lift_is_diagonal_mod_m() {
        let fq = Fq::new(3).unwrap();
        let m = PolyA::monomial(fq.one(), 3);
        let u = PolyA::one().add(&fq, &PolyA::t());
        let v = u.inv_mod(&fq, &m).unwrap();
        let w = whitehead(&fq, 2, 0, &u, &v);
        let res = ResidueRing::new(fq.clone(), &m).unwrap();
        let red = w.map(|x| res.reduce(x));
        assert_eq!(red, Matrix::diag(&res, &[u.clone(), v.clone()]));
        assert_eq!(w.det(&PolyRing::new(fq)), PolyA::one());
    }

    #[test]
    fn membership() {
        let fq = Fq::new(2).unwrap();
        let t2 = PolyA::monomial(fq.one(), 2);
        let g = ArithSubgroup::principal(&fq, &t2, 2).unwrap();
        for s in g.generators(&fq, &PolyA::t()) {
            assert!(g.contains(&fq, &s));
        }
        let e = to_ratf(&elementary(&fq, 2, 0, 1, &PolyA::t()));
        assert!(!g.contains(&fq, &e));
    }
}
