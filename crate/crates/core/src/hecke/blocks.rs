//! Connected components at level `K(N)` and the block decomposition of the
//! algebraic Hecke operator into analytic ones.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::lattice::AdelicApprox;
use crate::matrix::{inverse_f, to_ratf, MatA, MatF, Matrix};
use crate::poly::{PolyA, PolyRing};
use crate::ratf::{RatF, RatField};
use crate::residue::ResidueRing;
use crate::ring::Ring;

use super::finite::FiniteQuotient;
use super::{coset_reps, scaled, ArithSubgroup, CosetKey, CosetSet};

/// Canonical representative of `u F_q^x` in `(A/N)^x`.
fn unit_class(fq: &Fq, res: &ResidueRing, u: &PolyA) -> PolyA {
    fq.nonzero()
        .map(|c| res.reduce(&u.scale(fq, c)))
        .min()
        .expect("F_q^x is nonempty")
}

/// Representatives of `(A/N)^x / F_q^x`, which indexes the components at
/// level `K(N)`.
pub fn determinant_classes(fq: &Fq, n: &PolyA) -> Result<Vec<PolyA>> {
    let res = ResidueRing::new(fq.clone(), n)?;
    let set: BTreeSet<PolyA> = res.units().map(|u| unit_class(fq, &res, &u)).collect();
    Ok(set.into_iter().collect())
}

/// Number of components at level `K(N)`, by enumerating determinant classes.
pub fn component_count(fq: &Fq, n: &PolyA, _r: usize) -> Result<usize> {
    Ok(determinant_classes(fq, n)?.len())
}

/// `|(A/N)^x| / (q - 1)` from the factorisation of `N`; 1 for constant `N`.
pub fn component_count_phi(fq: &Fq, n: &PolyA) -> Result<u128> {
    if n.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if n.degi() == 0 {
        return Ok(1);
    }
    let q = fq.q() as u128;
    let (_, fac) = n.factor(fq);
    let phi: u128 = fac
        .iter()
        .map(|(p, e)| {
            let d = p.degi() as u32;
            q.pow(d * (e - 1)) * (q.pow(d) - 1)
        })
        .product();
    Ok(phi / (q - 1))
}

/// Component of `g = g_glob k`: the class of `det k` modulo `N`.
pub fn det_class(fq: &Fq, g: &AdelicApprox) -> Result<PolyA> {
    let res = ResidueRing::new(fq.clone(), &g.level)?;
    let d = g.k_mod_n.map(|a| res.reduce(a)).det(&res);
    Ok(unit_class(fq, &res, &d))
}

/// The analytic pieces of `T_h` on the component with index `source`.
#[derive(Clone, Debug)]
pub struct HeckeBlock {
    pub source: usize,
    pub target: usize,
    /// `|K \ K h K|`.
    pub degree: usize,
    /// One coset set per double coset `Gamma_target delta Gamma_source`.
    pub double_cosets: Vec<CosetSet>,
}

impl HeckeBlock {
    pub fn coset_total(&self) -> usize {
        self.double_cosets.iter().map(CosetSet::len).sum()
    }
}

/// Lift of `k` (mod `N`) to `GL_r(A/M)`: congruent to `k` at the primes of
/// `N` and to the identity at the other primes of `M`.
fn lift_k(fq: &Fq, k: &MatA, n: &PolyA, m: &PolyA) -> MatA {
    let mut m1 = PolyA::one();
    for (p, _) in m.factor(fq).1 {
        if p.divides(fq, n) {
            while p.divides(fq, &m.div_exact(fq, &m1).expect("divisor")) {
                m1 = m1.mul(fq, &p);
            }
        }
    }
    let m2 = m.div_exact(fq, &m1).expect("divisor").monic(fq);
    let res = ResidueRing::new(fq.clone(), m).expect("nonzero modulus");
    let (_, s, t) = m1.xgcd(fq, &m2);
    let e1 = res.reduce(&t.mul(fq, &m2));
    let e2 = res.reduce(&s.mul(fq, &m1));
    let id = Matrix::identity(&PolyRing::new(fq.clone()), k.rows());
    Matrix::new(
        k.rows(),
        k.cols(),
        k.entries()
            .iter()
            .zip(id.entries())
            .map(|(a, b)| res.add(&res.mul(a, &e1), &res.mul(b, &e2)))
            .collect(),
    )
}

/// All row-HNF integral `r x r` matrices with determinant `p` (monic).
fn hermite_forms(fq: &Fq, p: &PolyA, r: usize) -> Vec<MatA> {
    fn diagonals(fq: &Fq, p: &PolyA, r: usize) -> Vec<Vec<PolyA>> {
        if r == 1 {
            return vec![vec![p.clone()]];
        }
        let mut out = Vec::new();
        for d in 0..=p.degi().max(0) as usize {
            for a in PolyA::monics_of_degree(fq, d) {
                if !a.divides(fq, p) {
                    continue;
                }
                let rest = p.div_exact(fq, &a).expect("divisor");
                for mut tail in diagonals(fq, &rest, r - 1) {
                    tail.insert(0, a.clone());
                    out.push(tail);
                }
            }
        }
        out
    }
    let mut out = Vec::new();
    for d in diagonals(fq, p, r) {
        let slots: Vec<(usize, usize)> = (0..r)
            .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
            .collect();
        let choices: Vec<Vec<PolyA>> = slots
            .iter()
            .map(|&(_, j)| PolyA::all_below(fq, d[j].degi() as usize).collect())
            .collect();
        let mut idx = vec![0usize; slots.len()];
        loop {
            let mut m = Matrix::diag(&PolyRing::new(fq.clone()), &d);
            for (s, &(i, j)) in slots.iter().enumerate() {
                m.set(i, j, choices[s][idx[s]].clone());
            }
            out.push(m);
            let mut c = 0;
            loop {
                if c == idx.len() {
                    break;
                }
                idx[c] += 1;
                if idx[c] < choices[c].len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
            if c == idx.len() {
                break;
            }
        }
    }
    out
}

/// `Gamma(N)`-cosets inside `GL_r(A) x`, by left multiplication with
/// generators of `GL_r(A)` modulo `N`.
fn principal_orbit(
    fq: &Fq,
    gn: &ArithSubgroup,
    x: &MatF,
    ceiling: usize,
) -> Result<BTreeMap<CosetKey, MatF>> {
    let k = RatField::new(fq.clone());
    let gens = ArithSubgroup::full(gn.rank()).generators(fq, gn.level());
    let mut found = BTreeMap::new();
    let mut queue = VecDeque::new();
    found.insert(gn.coset_key(fq, x)?, x.clone());
    queue.push_back(x.clone());
    while let Some(y) = queue.pop_front() {
        for s in &gens {
            let z = s.mul(&k, &y);
            let key = gn.coset_key(fq, &z)?;
            if !found.contains_key(&key) {
                if found.len() >= ceiling {
                    return Err(Error::QuotientTooLarge {
                        size: found.len() as u128 + 1,
                        ceiling: ceiling as u128,
                    });
                }
                found.insert(key, z.clone());
                queue.push_back(z);
            }
        }
    }
    Ok(found)
}

/// Decomposes `T_h` at level `K(N)` into analytic Hecke operators.
///
/// For each representative `g_i` the target `g_i'` is the one whose
/// determinant class times that of `h` equals the class of `g_i`; the
/// elements of `GL_r(F) cap g_i' K h K g_i^(-1)` are split into double
/// cosets `Gamma_(g_i') delta Gamma_(g_i)`.
pub fn hecke_blocks(
    fq: &Fq,
    h: &AdelicApprox,
    n: &PolyA,
    reps: &[AdelicApprox],
    ceiling: u128,
) -> Result<Vec<HeckeBlock>> {
    let n = n.monic(fq);
    let r = h.rank();
    let classes = determinant_classes(fq, &n)?;
    let mut class_of = Vec::with_capacity(reps.len());
    for g in reps {
        if g.level.monic(fq) != n || g.rank() != r {
            return Err(Error::InvalidRepresentatives(
                "level or rank differs".into(),
            ));
        }
        class_of.push(det_class(fq, g)?);
    }
    let distinct: BTreeSet<&PolyA> = class_of.iter().collect();
    if distinct.len() != reps.len() || reps.len() != classes.len() {
        return Err(Error::InvalidRepresentatives(format!(
            "{} representatives for {} components",
            reps.len(),
            classes.len()
        )));
    }
    let res_n = ResidueRing::new(fq.clone(), &n)?;
    let ch = {
        let d = h.k_mod_n.map(|a| res_n.reduce(a)).det(&res_n);
        res_n.inv(&d)?
    };

    let k = RatField::new(fq.clone());
    let pr = PolyRing::new(fq.clone());
    let (dh, hi) = scaled(fq, &h.g_glob);
    let p = hi.det(&pr).monic(fq);
    let m = p.mul(fq, &n).monic(fq);
    let fqt = FiniteQuotient::new(fq, &n, &m, r, ceiling)?;
    let gn = ArithSubgroup::principal(fq, &n, r)?;
    let kappa = |g: &AdelicApprox| lift_k(fq, &g.k_mod_n, &n, &m);
    let ceiling_cosets = ceiling.min(usize::MAX as u128) as usize;

    let mut candidates: Vec<MatF> = Vec::new();
    for hf in hermite_forms(fq, &p, r) {
        candidates.extend(principal_orbit(fq, &gn, &to_ratf(&hf), ceiling_cosets)?.into_values());
    }

    let mut out = Vec::with_capacity(reps.len());
    for (i, gi) in reps.iter().enumerate() {
        let want = unit_class(fq, &res_n, &res_n.mul(&class_of[i], &ch));
        let target = class_of.iter().position(|c| *c == want).ok_or_else(|| {
            Error::InvalidRepresentatives(
                "no representative in the required determinant class".into(),
            )
        })?;
        let gt = &reps[target];
        let kt = kappa(gt);
        let ki = fqt
            .reduce(&kappa(gi))
            .inverse(&ResidueRing::new(fq.clone(), &m)?)?;
        let kh = kappa(h);
        let htilde = fqt.mul(&fqt.mul(&fqt.mul(&kt, &fqt.reduce(&hi)), &kh), &ki);
        let degree = fqt.degree(&htilde);
        let members = fqt.double_coset_set(&htilde);

        let mut pending: BTreeMap<CosetKey, MatF> = BTreeMap::new();
        for y in &candidates {
            let yi = scaled(fq, y).1;
            if members.contains(&fqt.reduce(&yi)) {
                pending.insert(gn.coset_key(fq, y)?, y.clone());
            }
        }
        let inv_dh = RatF::new(fq, PolyA::one(), dh.clone())?;
        let gti = ArithSubgroup::conjugate(gt);
        let gii = ArithSubgroup::conjugate(gi);
        let gi_inv = inverse_f(fq, &gi.g_glob)?;
        let mut double_cosets = Vec::new();
        while let Some((_, y)) = pending.iter().next().map(|(a, b)| (a.clone(), b.clone())) {
            let cs = coset_reps(fq, &gn, &y, &gn, ceiling_cosets)?;
            for key in &cs.keys {
                pending.remove(key);
            }
            let delta = gt.g_glob.mul(&k, &y.scale(&k, &inv_dh)).mul(&k, &gi_inv);
            double_cosets.push(coset_reps(fq, &gti, &delta, &gii, ceiling_cosets)?);
        }
        out.push(HeckeBlock {
            source: i,
            target,
            degree,
            double_cosets,
        });
    }
    Ok(out)
}

/// Standard representatives `diag(c, 1, ..., 1)` for the classes of
/// [`determinant_classes`].
pub fn standard_reps(fq: &Fq, n: &PolyA, r: usize) -> Result<Vec<AdelicApprox>> {
    let k = RatField::new(fq.clone());
    let pr = PolyRing::new(fq.clone());
    determinant_classes(fq, n)?
        .into_iter()
        .map(|c| {
            let mut d = vec![PolyA::one(); r];
            d[0] = c;
            AdelicApprox::new(
                fq,
                Matrix::identity(&k, r),
                Matrix::diag(&pr, &d),
                n.clone(),
            )
        })
        .collect()
}
