//! Double cosets of `K(N)` in `GL_r` of the finite adeles, computed in a
//! finite quotient `M_r(A/M)`.
//!
//! For integral `x` with `det x | P`, the coset `K(N) x` is determined by
//! `x` modulo `M = N P`, and `K(N)` acts through
//! `G = {k in GL_r(A/M) : k = 1 mod N}`.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::lattice::AdelicApprox;
use crate::matrix::{MatA, Matrix};
use crate::poly::{PolyA, PolyRing};
use crate::residue::ResidueRing;
use crate::ring::Ring;

use super::scaled;

/// `M_r(A/M)` with the image of `K(N)`.
pub struct FiniteQuotient {
    res: ResidueRing,
    level: PolyA,
    r: usize,
    group: Vec<MatA>,
    width: usize,
}

type Flat = Vec<u32>;

impl FiniteQuotient {
    /// Fails with `QuotientTooLarge` when the candidate count for `G`
    /// exceeds `ceiling`.
    pub fn new(
        fq: &Fq,
        level: &PolyA,
        modulus: &PolyA,
        r: usize,
        ceiling: u128,
    ) -> Result<FiniteQuotient> {
        let level = level.monic(fq);
        let m = modulus.monic(fq);
        if !level.divides(fq, &m) {
            return Err(Error::InvalidRepresentatives(
                "level must divide the modulus".into(),
            ));
        }
        let res = ResidueRing::new(fq.clone(), &m)?;
        let free = (m.degi() - level.degi()) as u32;
        let size = (fq.q() as u128)
            .checked_pow(free * (r * r) as u32)
            .unwrap_or(u128::MAX);
        if size > ceiling {
            return Err(Error::QuotientTooLarge { size, ceiling });
        }
        let pr = PolyRing::new(fq.clone());
        let id = Matrix::identity(&pr, r);
        let mut group = Vec::new();
        let cells: Vec<PolyA> = PolyA::all_below(fq, free as usize).collect();
        let mut idx = vec![0usize; r * r];
        loop {
            let x = Matrix::new(
                r,
                r,
                idx.iter().map(|&i| cells[i].mul(fq, &level)).collect(),
            );
            let g = id.add(&pr, &x).map(|a| res.reduce(a));
            if res.is_unit(&g.det(&res)) {
                group.push(g);
            }
            let mut p = 0;
            loop {
                if p == idx.len() {
                    let width = m.degi() as usize;
                    return Ok(FiniteQuotient {
                        res,
                        level,
                        r,
                        group,
                        width,
                    });
                }
                idx[p] += 1;
                if idx[p] < cells.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    pub fn modulus(&self) -> &PolyA {
        self.res.modulus()
    }

    pub fn level(&self) -> &PolyA {
        &self.level
    }

    pub fn group(&self) -> &[MatA] {
        &self.group
    }

    pub fn reduce(&self, x: &MatA) -> MatA {
        x.map(|a| self.res.reduce(a))
    }

    pub fn mul(&self, a: &MatA, b: &MatA) -> MatA {
        a.mul(&self.res, b)
    }

    fn flat(&self, x: &MatA) -> Flat {
        let mut v = Vec::with_capacity(self.r * self.r * self.width);
        for a in x.entries() {
            for i in 0..self.width {
                v.push(a.coeff(i).0);
            }
        }
        v
    }

    /// Label of `K x`: the least element of `G x`.
    pub fn left_key(&self, x: &MatA) -> Flat {
        self.group
            .iter()
            .map(|g| self.flat(&self.mul(g, x)))
            .min()
            .expect("group is nonempty")
    }

    /// Label of `x K`.
    pub fn right_key(&self, x: &MatA) -> Flat {
        self.group
            .iter()
            .map(|g| self.flat(&self.mul(x, g)))
            .min()
            .expect("group is nonempty")
    }

    /// Left cosets inside `K x K`, as `(label, representative)`.
    pub fn left_cosets(&self, x: &MatA) -> BTreeMap<Flat, MatA> {
        let found: Vec<(Flat, MatA)> = self
            .group
            .par_iter()
            .map(|g| {
                let y = self.mul(x, g);
                (self.left_key(&y), y)
            })
            .collect();
        let mut out = BTreeMap::new();
        for (k, y) in found {
            out.entry(k).or_insert(y);
        }
        out
    }

    /// Label of `K x K`: the least left-coset label it contains.
    pub fn double_key(&self, x: &MatA) -> Flat {
        self.left_cosets(x)
            .into_keys()
            .next()
            .expect("nonempty double coset")
    }

    /// `|K \ K x K|`.
    pub fn degree(&self, x: &MatA) -> usize {
        self.left_cosets(x).len()
    }

    /// All elements of `K x K`.
    pub fn double_coset_set(&self, x: &MatA) -> HashSet<MatA> {
        let mut out = HashSet::new();
        for a in &self.group {
            let ax = self.mul(a, x);
            for b in &self.group {
                out.insert(self.mul(&ax, b));
            }
        }
        out
    }
}

/// One `h''` in the composition formula with its index multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionTerm {
    /// `h k h'` modulo `M`, for the double-coset representative `k`.
    pub rep: MatA,
    pub multiplicity: u64,
    /// Index into `CompositionTable::double_cosets`.
    pub double_coset: usize,
}

/// Totals per `K`-double coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCosetTerm {
    pub rep: MatA,
    /// `|K \ K rep K|`.
    pub degree: u64,
    /// Sum of the index multiplicities of the terms in this double coset.
    pub formula: u64,
    /// Number of pairs of left cosets whose product lands in a fixed coset.
    pub direct: u64,
}

#[derive(Clone, Debug)]
pub struct CompositionTable {
    pub modulus: PolyA,
    /// Scalars `d, d'` by which `h, h'` were multiplied to become integral.
    pub scale: (PolyA, PolyA),
    pub degree_h: u64,
    pub degree_hp: u64,
    pub terms: Vec<CompositionTerm>,
    pub double_cosets: Vec<DoubleCosetTerm>,
}

impl CompositionTable {
    /// `sum formula * degree`.
    pub fn mass(&self) -> u64 {
        self.double_cosets
            .iter()
            .map(|d| d.formula * d.degree)
            .sum()
    }

    /// Both counts agree on every double coset and the mass is
    /// `deg h * deg h'`.
    pub fn is_consistent(&self) -> bool {
        self.double_cosets.iter().all(|d| d.formula == d.direct)
            && self.mass() == self.degree_h * self.degree_hp
    }

    pub fn encode(&self, fq: &Fq) -> String {
        let res = ResidueRing::new(fq.clone(), &self.modulus).expect("nonzero modulus");
        let mut lines = Vec::new();
        for (i, d) in self.double_cosets.iter().enumerate() {
            lines.push(format!(
                "#double {i} degree={} formula={} direct={} rep={}",
                d.degree,
                d.formula,
                d.direct,
                d.rep.encode(&res).replace('\n', "; ")
            ));
        }
        for t in &self.terms {
            lines.push(format!(
                "{} mult={} double={}",
                t.rep.encode(&res).replace('\n', "; "),
                t.multiplicity,
                t.double_coset
            ));
        }
        lines.join("\n")
    }
}

fn integral_global(fq: &Fq, h: &AdelicApprox, n: &PolyA) -> Result<(PolyA, MatA)> {
    let res = ResidueRing::new(fq.clone(), n)?;
    if n.degi() > 0 && !h.k_mod_n.map(|a| res.reduce(a)).is_identity(&res) {
        return Err(Error::EnumeratorUnsupported(
            "composition needs a trivial k-part".into(),
        ));
    }
    Ok(scaled(fq, &h.g_glob))
}

/// The composition law for `T_h' o T_h` on level `K(N)`, computed in the
/// finite quotient modulo `N det(h) det(h')` (after scaling to integral).
///
/// `h''` runs over `(K cap h^(-1) K h) \ K / (K cap h' K h'^(-1))` through
/// `h'' = h k h'`, each with multiplicity
/// `[K cap h''^(-1) K h'' : K cap h^(-1) K h cap h''^(-1) K h'']`.
/// These are grouped by `K`-double coset and compared with the direct count
/// of pairs `(K u, K u')` with `K u u' = K v`.
pub fn hecke_compose_check(
    fq: &Fq,
    h: &AdelicApprox,
    hp: &AdelicApprox,
    n: &PolyA,
    ceiling: u128,
) -> Result<CompositionTable> {
    let (d1, hi) = integral_global(fq, h, n)?;
    let (d2, hpi) = integral_global(fq, hp, n)?;
    let pr = PolyRing::new(fq.clone());
    let p = hi.det(&pr).mul(fq, &hpi.det(&pr));
    if p.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let m = p.mul(fq, n).monic(fq);
    let fqt = FiniteQuotient::new(fq, n, &m, hi.rows(), ceiling)?;
    let h = fqt.reduce(&hi);
    let hp = fqt.reduce(&hpi);

    let left_h = fqt.left_cosets(&h);
    let left_hp = fqt.left_cosets(&hp);
    let pairs: Vec<(&MatA, &MatA)> = left_h
        .values()
        .flat_map(|u| left_hp.values().map(move |v| (u, v)))
        .collect();
    let keys: Vec<Flat> = pairs
        .par_iter()
        .map(|(u, v)| fqt.left_key(&fqt.mul(u, v)))
        .collect();
    let mut hits: BTreeMap<Flat, u64> = BTreeMap::new();
    let mut rep_of: HashMap<Flat, MatA> = HashMap::new();
    for (key, (u, v)) in keys.into_iter().zip(&pairs) {
        *hits.entry(key.clone()).or_insert(0) += 1;
        rep_of.entry(key).or_insert_with(|| fqt.mul(u, v));
    }

    let mut doubles: Vec<(Flat, DoubleCosetTerm)> = Vec::new();
    let mut index_of: HashMap<Flat, usize> = HashMap::new();
    for (key, count) in &hits {
        let v = &rep_of[key];
        let cosets = fqt.left_cosets(v);
        let dk = cosets.keys().next().expect("nonempty").clone();
        if index_of.contains_key(&dk) {
            continue;
        }
        let counts: HashSet<u64> = cosets
            .keys()
            .map(|k| hits.get(k).copied().unwrap_or(0))
            .collect();
        if counts.len() != 1 {
            return Err(Error::InvalidRepresentatives(
                "collision count varies inside a double coset".into(),
            ));
        }
        index_of.insert(dk.clone(), doubles.len());
        doubles.push((
            dk,
            DoubleCosetTerm {
                rep: v.clone(),
                degree: cosets.len() as u64,
                formula: 0,
                direct: *count,
            },
        ));
    }

    let hk = fqt.left_key(&h);
    let hpk = fqt.right_key(&hp);
    let stab_h: HashSet<MatA> = fqt
        .group
        .par_iter()
        .filter(|k| fqt.left_key(&fqt.mul(&h, k)) == hk)
        .cloned()
        .collect();
    let stab_hp: Vec<MatA> = fqt
        .group
        .par_iter()
        .filter(|k| fqt.right_key(&fqt.mul(k, &hp)) == hpk)
        .cloned()
        .collect();
    let mut seen: HashSet<MatA> = HashSet::new();
    let mut terms = Vec::new();
    let mut order: Vec<&MatA> = fqt.group.iter().collect();
    order.sort_by_key(|g| fqt.flat(g));
    for k in order {
        if seen.contains(k) {
            continue;
        }
        for a in &stab_h {
            let ak = fqt.mul(a, k);
            for b in &stab_hp {
                seen.insert(fqt.mul(&ak, b));
            }
        }
        let hpp = fqt.mul(&fqt.mul(&h, k), &hp);
        let key = fqt.left_key(&hpp);
        let stab: Vec<&MatA> = fqt
            .group
            .par_iter()
            .filter(|y| fqt.left_key(&fqt.mul(&hpp, y)) == key)
            .collect();
        let inter = stab.iter().filter(|y| stab_h.contains(**y)).count();
        if inter == 0 || stab.len() % inter != 0 {
            return Err(Error::InvalidRepresentatives(
                "index is not an integer".into(),
            ));
        }
        let mult = (stab.len() / inter) as u64;
        let dk = fqt.double_key(&hpp);
        let i = match index_of.get(&dk) {
            Some(&i) => i,
            None => {
                index_of.insert(dk.clone(), doubles.len());
                let degree = fqt.degree(&hpp) as u64;
                doubles.push((
                    dk,
                    DoubleCosetTerm {
                        rep: hpp.clone(),
                        degree,
                        formula: 0,
                        direct: 0,
                    },
                ));
                doubles.len() - 1
            }
        };
        doubles[i].1.formula += mult;
        terms.push(CompositionTerm {
            rep: hpp,
            multiplicity: mult,
            double_coset: i,
        });
    }
    Ok(CompositionTable {
        modulus: m,
        scale: (d1, d2),
        degree_h: left_h.len() as u64,
        degree_hp: left_hp.len() as u64,
        terms,
        double_cosets: doubles.into_iter().map(|(_, d)| d).collect(),
    })
}
