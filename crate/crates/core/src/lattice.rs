//! Lattices `L` in `F^r`, points of `Omega^r`, and the analytic objects they
//! define: the exponential of `L omega`, the module `psi^(L omega)`, torsion
//! values, and isogenies between nested lattices.

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::laurent::{LaurentRing, TLaurent};
use crate::matrix::{
    as_integral, common_denominator, hnf, inverse_f, subsets, to_ratf, MatA, MatF, Matrix,
};
use crate::poly::{PolyA, PolyRing};
use crate::ratf::{RatF, RatField};
use crate::residue::ResidueRing;
use crate::ring::Ring;
use crate::skew::SkewPoly;
use crate::subspace::SubspaceChain;

/// A lattice of full rank in `F^r`, rows of `basis` spanning it over `A`.
///
/// The basis is kept canonical: with `d` the monic lcm of the denominators,
/// `d * basis` is in Hermite normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticeFr {
    basis: MatF,
}

impl LatticeFr {
    pub fn new(fq: &Fq, basis: MatF) -> Result<LatticeFr> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} lattice basis",
                basis.rows(),
                basis.cols()
            )));
        }
        let k = RatField::new(fq.clone());
        if basis.rows() > 0 && k.is_zero(&basis.det(&k)) {
            return Err(Error::SingularMatrix);
        }
        Ok(LatticeFr {
            basis: canonical_rows(fq, &basis),
        })
    }

    /// The lattice spanned by possibly redundant rows; must have full rank.
    pub fn spanned_by(fq: &Fq, rows: &MatF) -> Result<LatticeFr> {
        let b = canonical_rows(fq, rows);
        if b.rows() != b.cols() {
            return Err(Error::SingularMatrix);
        }
        Ok(LatticeFr { basis: b })
    }

    /// `A^r`.
    pub fn standard(fq: &Fq, r: usize) -> LatticeFr {
        let k = RatField::new(fq.clone());
        LatticeFr {
            basis: Matrix::identity(&k, r),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &MatF {
        &self.basis
    }

    /// Coordinates of a row vector in the basis.
    pub fn coords(&self, fq: &Fq, v: &[RatF]) -> Result<Vec<RatF>> {
        let k = RatField::new(fq.clone());
        Ok(inverse_f(fq, &self.basis)?.vec_mul(&k, v))
    }

    pub fn contains(&self, fq: &Fq, v: &[RatF]) -> bool {
        self.coords(fq, v)
            .is_ok_and(|c| c.iter().all(RatF::is_integral))
    }

    /// Rows of `self` written in the basis of `other`; integral iff `self` is a sublattice.
    pub fn relative_matrix(&self, fq: &Fq, other: &LatticeFr) -> Result<MatF> {
        let k = RatField::new(fq.clone());
        Ok(self.basis.mul(&k, &inverse_f(fq, &other.basis)?))
    }

    pub fn is_sublattice_of(&self, fq: &Fq, other: &LatticeFr) -> bool {
        self.relative_matrix(fq, other)
            .is_ok_and(|m| as_integral(&m).is_some())
    }

    /// `log_q [other : self]` for a sublattice.
    pub fn colength_in(&self, fq: &Fq, other: &LatticeFr) -> Result<usize> {
        let m = as_integral(&self.relative_matrix(fq, other)?).ok_or(Error::NotASublattice)?;
        Ok(m.det(&PolyRing::new(fq.clone())).degi() as usize)
    }

    /// `c * L`.
    pub fn scale(&self, fq: &Fq, c: &RatF) -> Result<LatticeFr> {
        let k = RatField::new(fq.clone());
        LatticeFr::new(fq, self.basis.scale(&k, c))
    }

    /// `L * g` for an invertible matrix `g`.
    pub fn times(&self, fq: &Fq, g: &MatF) -> Result<LatticeFr> {
        let k = RatField::new(fq.clone());
        LatticeFr::new(fq, self.basis.mul(&k, g))
    }

    pub fn sum(&self, fq: &Fq, other: &LatticeFr) -> Result<LatticeFr> {
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        LatticeFr::spanned_by(fq, &Matrix::from_rows(rows))
    }

    /// Representatives of `L2 / L` as rows of `F^r`, as an `F_q`-basis of
    /// the quotient (for `L` a sublattice of `L2`).
    pub fn quotient_basis(&self, fq: &Fq, l2: &LatticeFr) -> Result<Vec<Vec<RatF>>> {
        let c = as_integral(&self.relative_matrix(fq, l2)?).ok_or(Error::NotASublattice)?;
        let h = hnf(fq, &c);
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..h.get(i, i).degi() as usize {
                let row = l2
                    .basis
                    .row(i)
                    .iter()
                    .map(|x| x.mul(fq, &RatF::from_poly(PolyA::monomial(fq.one(), j))))
                    .collect::<Vec<_>>();
                out.push(row);
            }
        }
        Ok(out)
    }

    pub fn encode(&self) -> String {
        (0..self.rank())
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .map(RatF::encode)
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Canonical row basis of the `A`-span of `rows`.
fn canonical_rows(fq: &Fq, rows: &MatF) -> MatF {
    let k = RatField::new(fq.clone());
    let d = common_denominator(fq, rows);
    let di = RatF::from_poly(d.clone());
    let m = as_integral(&rows.scale(&k, &di)).expect("denominators cleared");
    let h = hnf(fq, &m);
    let dinv = k.inv(&di).expect("nonzero");
    to_ratf(&h).scale(&k, &dinv)
}

/// Witness that the coordinates of a point are `F_inf`-linearly independent:
/// a nonvanishing maximal minor of the matrix of `F_inf`-components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeparationCertificate {
    /// Chosen component columns (`coordinate index` is the row; column `c`
    /// is the component `c` of the ramified expansion).
    pub columns: Vec<usize>,
    /// Valuation (in `1/t`) of the chosen minor.
    pub minor_val: i64,
}

/// A point `omega = (omega_1, ..., omega_r)` of `Omega^r` with `omega_r = 1`.
#[derive(Clone, PartialEq, Debug)]
pub struct OmegaPoint {
    coords: Vec<TLaurent>,
    cert: Option<SeparationCertificate>,
}

impl OmegaPoint {
    /// Normalises nothing: the last coordinate must already be 1.
    pub fn new(ring: &LaurentRing, coords: Vec<TLaurent>) -> Result<OmegaPoint> {
        let last = coords
            .last()
            .ok_or_else(|| Error::DimensionMismatch("empty point".into()))?;
        if !ring.is_zero(&ring.sub(last, &ring.one())) || last.ram() != ring.ram() {
            return Err(Error::DimensionMismatch("last coordinate must be 1".into()));
        }
        let cert = certify(ring, &coords);
        let mut coords = coords;
        let n = coords.len();
        coords[n - 1] = ring.one();
        Ok(OmegaPoint { coords, cert })
    }

    /// Like `new`, but refuses points without a certificate.
    pub fn certified(ring: &LaurentRing, coords: Vec<TLaurent>) -> Result<OmegaPoint> {
        let p = OmegaPoint::new(ring, coords)?;
        if p.cert.is_none() {
            return Err(Error::UncertifiedPoint);
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[TLaurent] {
        &self.coords
    }

    pub fn certificate(&self) -> Option<&SeparationCertificate> {
        self.cert.as_ref()
    }

    pub fn require_certified(&self) -> Result<()> {
        self.cert
            .as_ref()
            .map(|_| ())
            .ok_or(Error::UncertifiedPoint)
    }

    /// `l * omega` for a row vector over `F`.
    pub fn pair(&self, ring: &LaurentRing, l: &[RatF]) -> TLaurent {
        l.iter().zip(&self.coords).fold(ring.zero(), |acc, (x, w)| {
            if x.is_zero() {
                acc
            } else {
                ring.add(&acc, &ring.mul(&ring.embed(x), w))
            }
        })
    }

    /// `[w1; w2; ...] cert=c0,c1:val` or `cert=none`.
    pub fn encode(&self) -> String {
        let cs: Vec<String> = self.coords.iter().map(TLaurent::encode).collect();
        let cert = match &self.cert {
            Some(c) => format!(
                "{}:{}",
                c.columns
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                c.minor_val
            ),
            None => "none".into(),
        };
        format!("[{}] cert={}", cs.join("; "), cert)
    }
}

/// Looks for a maximal minor of the component matrix that is certainly nonzero.
fn certify(ring: &LaurentRing, coords: &[TLaurent]) -> Option<SeparationCertificate> {
    let fq = ring.field().clone();
    let r = coords.len();
    let e = ring.ram() as usize;
    let comps: Vec<Vec<TLaurent>> = coords.iter().map(TLaurent::components).collect();
    let m = Matrix::from_rows(comps);
    let f_inf = LaurentRing::new(fq, 1, ring.prec());
    for cols in subsets(e, r) {
        let rows: Vec<usize> = (0..r).collect();
        let d = m.select(&rows, &cols).det(&f_inf);
        if let Some(v) = d.val() {
            return Some(SeparationCertificate {
                columns: cols,
                minor_val: v,
            });
        }
    }
    None
}

/// `g = g_glob * k` with `k` integral, known modulo the level `N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdelicApprox {
    pub g_glob: MatF,
    pub k_mod_n: MatA,
    pub level: PolyA,
}

impl AdelicApprox {
    pub fn new(fq: &Fq, g_glob: MatF, k_mod_n: MatA, level: PolyA) -> Result<AdelicApprox> {
        let k = RatField::new(fq.clone());
        if !g_glob.is_square() || k.is_zero(&g_glob.det(&k)) {
            return Err(Error::SingularMatrix);
        }
        let res = ResidueRing::new(fq.clone(), &level)?;
        let kk = k_mod_n.map(|x| res.reduce(x));
        if !res.is_unit(&kk.det(&res)) && level.degi() > 0 {
            return Err(Error::NotInvertible(
                "k is not invertible modulo the level".into(),
            ));
        }
        Ok(AdelicApprox {
            g_glob,
            k_mod_n: kk,
            level: level.monic(fq),
        })
    }

    /// `g` with trivial `k`-part.
    pub fn global(fq: &Fq, g_glob: MatF, level: PolyA) -> Result<AdelicApprox> {
        let n = g_glob.rows();
        AdelicApprox::new(
            fq,
            g_glob,
            Matrix::identity(&PolyRing::new(fq.clone()), n),
            level,
        )
    }

    pub fn rank(&self) -> usize {
        self.g_glob.rows()
    }
}

/// `L_g = A^r g_glob^(-1)`; the `k`-part is integral and does not move it.
pub fn lattice_lg(fq: &Fq, g: &AdelicApprox) -> Result<LatticeFr> {
    LatticeFr::new(fq, inverse_f(fq, &g.g_glob)?)
}

/// Membership of `gamma` in `Gamma_g = GL_r(F) cap g K(N) g^(-1)`.
pub fn gamma_g_member(fq: &Fq, gamma: &MatF, g: &AdelicApprox) -> bool {
    let k = RatField::new(fq.clone());
    if !gamma.is_square() || gamma.rows() != g.rank() || k.is_zero(&gamma.det(&k)) {
        return false;
    }
    let Ok(gi) = inverse_f(fq, &g.g_glob) else {
        return false;
    };
    let m = gi.mul(&k, gamma).mul(&k, &g.g_glob);
    let Some(mi) = as_integral(&m) else {
        return false;
    };
    let pr = PolyRing::new(fq.clone());
    if mi.det(&pr).degi() != 0 {
        return false;
    }
    if g.level.degi() == 0 {
        return true;
    }
    let res = ResidueRing::new(fq.clone(), &g.level).expect("nonzero level");
    let Ok(kinv) = g.k_mod_n.inverse(&res) else {
        return false;
    };
    let mr = mi.map(|x| res.reduce(x));
    kinv.mul(&res, &mr).mul(&res, &g.k_mod_n).is_identity(&res)
}

/// Result of a truncated lattice exponential.
#[derive(Clone, PartialEq, Debug)]
pub struct ExpValue {
    /// The value, truncated to the digits certified stable.
    pub value: TLaurent,
    /// Absolute precision up to which the value stopped changing.
    pub stable_prec: Option<i64>,
    /// Degree bound `D` used.
    pub degree: u32,
    /// Whether the successive truncations agree to the full working precision.
    pub saturated: bool,
}

impl ExpValue {
    /// Number of certified digits after the leading one; `None` when unbounded.
    pub fn stable_digits(&self) -> Option<i64> {
        match (self.value.val(), self.stable_prec) {
            (Some(v), Some(p)) => Some(p - v),
            _ => None,
        }
    }
}

/// Degree-bound policy for lattice sums and products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreePolicy {
    pub start: u32,
    pub ceiling: u32,
}

impl Default for DegreePolicy {
    fn default() -> DegreePolicy {
        DegreePolicy {
            start: 2,
            ceiling: 24,
        }
    }
}

/// An `A`-basis of the same lattice whose members have pairwise distinct
/// valuations modulo `ram`, so `|sum a_i b_i| = max |a_i b_i|`. Truncating
/// in such a basis keeps the subspace recursion well conditioned.
pub fn reduce_generators(ring: &LaurentRing, mut betas: Vec<TLaurent>) -> Result<Vec<TLaurent>> {
    let fq = ring.field();
    let e = ring.ram() as i64;
    let lost = || Error::InsufficientPrecision("lattice generators vanish while reducing".into());
    loop {
        let mut vals = Vec::with_capacity(betas.len());
        for b in &betas {
            vals.push(b.val().ok_or_else(lost)?);
        }
        let pair = (0..betas.len())
            .flat_map(|i| (0..betas.len()).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && vals[i] <= vals[j] && (vals[j] - vals[i]) % e == 0);
        let Some((i, j)) = pair else {
            return Ok(betas);
        };
        let c = fq.mul(
            betas[i].leading().ok_or_else(lost)?,
            fq.inv(betas[j].leading().ok_or_else(lost)?),
        );
        let lead = betas[j].shift(vals[i] - vals[j]).scale(fq, c);
        betas[i] = ring.sub(&betas[i], &lead);
    }
}

/// The exponential of `L omega`, evaluated through the subspace recursion on
/// the `F_q`-basis `t^j b_i omega` (ordered by `j`, then `i`).
#[derive(Clone, Debug)]
pub struct LatticeExp {
    ring: LaurentRing,
    betas: Vec<TLaurent>,
    chain: SubspaceChain<TLaurent>,
}

impl LatticeExp {
    pub fn new(ring: &LaurentRing, l: &LatticeFr, omega: &OmegaPoint) -> Result<LatticeExp> {
        if l.rank() != omega.rank() && l.rank() != 0 {
            return Err(Error::DimensionMismatch(format!(
                "lattice rank {} vs point rank {}",
                l.rank(),
                omega.rank()
            )));
        }
        if l.rank() > 0 {
            omega.require_certified()?;
        }
        let betas = (0..l.rank())
            .map(|i| omega.pair(ring, l.basis().row(i)))
            .collect();
        let betas = reduce_generators(ring, betas)?;
        Ok(LatticeExp {
            ring: ring.clone(),
            betas,
            chain: SubspaceChain::new(ring, &[])?,
        })
    }

    /// From precomputed lattice generators `beta_i = b_i omega`.
    pub fn from_generators(ring: &LaurentRing, betas: Vec<TLaurent>) -> LatticeExp {
        LatticeExp {
            ring: ring.clone(),
            betas,
            chain: SubspaceChain::new(ring, &[]).expect("empty basis"),
        }
    }

    pub fn rank(&self) -> usize {
        self.betas.len()
    }

    pub fn generators(&self) -> &[TLaurent] {
        &self.betas
    }

    /// Exponents of the chain polynomials grow like `q^dim`; refuse bounds
    /// whose exponents would leave the `i64` range.
    fn exponent_room(&self, z: Option<&TLaurent>, degree: u32) -> Result<()> {
        let dim = self.rank() * (degree as usize + 1);
        let ram = self.ring.ram() as i64;
        let mut scale = self.ring.prec().abs() + ram * (degree as i64 + 1);
        for b in self.betas.iter().chain(z) {
            scale += b.val().or(b.prec()).unwrap_or(0).abs();
        }
        let q = self.ring.field().q() as i64;
        u32::try_from(dim)
            .ok()
            .and_then(|d| q.checked_pow(d))
            .and_then(|p| p.checked_mul(4 * scale.max(1)))
            .map(|_| ())
            .ok_or_else(|| {
                Error::InsufficientPrecision(format!(
                    "degree bound {degree} exceeds the representable exponent range"
                ))
            })
    }

    fn grow(&mut self, degree: u32) -> Result<()> {
        self.exponent_room(None, degree)?;
        let r = self.rank();
        let want = r * (degree as usize + 1);
        while self.chain.len() < want {
            let idx = self.chain.len();
            let (j, i) = (idx / r, idx % r);
            let tj = self
                .ring
                .from_poly(&PolyA::monomial(self.ring.field().one(), j));
            let v = self.ring.mul(&tj, &self.betas[i]);
            self.chain.push(&self.ring, &v).map_err(|e| match e {
                Error::NotASubspace => Error::InsufficientPrecision(
                    "lattice points indistinguishable at working precision".into(),
                ),
                other => other,
            })?;
        }
        Ok(())
    }

    /// `e_(V_D)(z)` where `V_D` has coefficient degrees at most `D`.
    pub fn eval_truncated(&mut self, z: &TLaurent, degree: u32) -> Result<TLaurent> {
        self.exponent_room(Some(z), degree)?;
        self.grow(degree)?;
        let r = self.rank();
        self.chain
            .eval_prefix(&self.ring, z, r * (degree as usize + 1))
    }

    /// Value at degree bound `D` with stability certified against `D+1`, `D+2`.
    pub fn eval_at(&mut self, z: &TLaurent, degree: u32) -> Result<ExpValue> {
        let ring = self.ring.clone();
        if self.rank() == 0 || z.is_exact_zero() {
            return Ok(ExpValue {
                value: z.clone(),
                stable_prec: z.prec(),
                degree,
                saturated: true,
            });
        }
        self.exponent_room(Some(z), degree + 2)?;
        self.grow(degree + 2)?;
        let r = self.rank();
        let ks: Vec<usize> = (0..3).map(|k| r * (degree as usize + 1 + k)).collect();
        let vs = self.chain.eval_prefixes(&ring, z, &ks)?;
        let d1 = ring.sub(&vs[1], &vs[0]);
        let d2 = ring.sub(&vs[2], &vs[1]);
        let stop = |d: &TLaurent| d.val().or(d.prec());
        let saturated = d1.val().is_none() && d2.val().is_none();
        let p = match (stop(&d1), stop(&d2)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let value = match p {
            Some(p) => vs[0].truncate(p),
            None => vs[0].clone(),
        };
        let certified = match (value.val(), p) {
            (_, None) => true,
            (Some(v), Some(p)) => p > v,
            (None, Some(_)) => vs.iter().all(TLaurent::is_zero_to_precision),
        };
        if !certified {
            return Err(Error::Unstable { bound: degree });
        }
        Ok(ExpValue {
            value,
            stable_prec: p,
            degree,
            saturated,
        })
    }

    /// Raises `D` until at least `digits` leading digits are stable, or the
    /// truncations agree to the working precision.
    pub fn eval_to(&mut self, z: &TLaurent, digits: i64, policy: DegreePolicy) -> Result<ExpValue> {
        let mut last = Err(Error::Unstable {
            bound: policy.start,
        });
        // A value that vanishes to precision must still be small next to `z`.
        let enough = |v: &ExpValue| match v.stable_digits() {
            Some(k) => v.saturated || k >= digits,
            None => match (v.stable_prec, z.val()) {
                (Some(p), Some(zv)) => p - zv >= digits,
                _ => true,
            },
        };
        for d in policy.start..=policy.ceiling {
            match self.eval_at(z, d) {
                Ok(v) if enough(&v) => return Ok(v),
                Ok(_) => last = Err(Error::Unstable { bound: d }),
                Err(Error::Unstable { .. }) => last = Err(Error::Unstable { bound: d }),
                Err(e) => return Err(e),
            }
        }
        last
    }
}

/// `e_(L omega)(z)` truncated at coefficient degree `D`, with its stability certificate.
pub fn lattice_exp(
    ring: &LaurentRing,
    l: &LatticeFr,
    omega: &OmegaPoint,
    z: &TLaurent,
    degree: u32,
) -> Result<ExpValue> {
    LatticeExp::new(ring, l, omega)?.eval_at(z, degree)
}

/// `mu_l(omega) = e_(L omega)(l omega)`.
pub fn torsion_section(
    ring: &LaurentRing,
    l: &LatticeFr,
    omega: &OmegaPoint,
    ell: &[RatF],
    digits: i64,
    policy: DegreePolicy,
) -> Result<ExpValue> {
    let z = omega.pair(ring, ell);
    LatticeExp::new(ring, l, omega)?.eval_to(&z, digits, policy)
}

/// `psi_a = a * e_V` with `V = e_(L omega)(a^(-1) L omega)`.
pub fn module_from_lattice(
    ring: &LaurentRing,
    l: &LatticeFr,
    omega: &OmegaPoint,
    a: &PolyA,
    digits: i64,
    policy: DegreePolicy,
) -> Result<SkewPoly<TLaurent>> {
    let fq = ring.field().clone();
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut ex = LatticeExp::new(ring, l, omega)?;
    let ainv = RatF::new(&fq, PolyA::one(), a.clone())?;
    let mut vals = Vec::new();
    for i in 0..l.rank() {
        for j in 0..a.degi() as usize {
            let c = ainv.mul(&fq, &RatF::from_poly(PolyA::monomial(fq.one(), j)));
            let z = ring.mul(&ring.embed(&c), &ex.generators()[i]);
            vals.push(ex.eval_to(&z, digits, policy)?.value);
        }
    }
    let p = SubspaceChain::new(ring, &vals)
        .map_err(|_| Error::InsufficientPrecision("torsion values not separated".into()))?
        .poly(ring)?;
    Ok(p.scale_left(ring, &ring.from_poly(a)))
}

/// `e_(e_(L1 omega)(L2 omega))` for `L1` a sublattice of `L2`.
pub fn inclusion_isogeny(
    ring: &LaurentRing,
    l1: &LatticeFr,
    l2: &LatticeFr,
    omega: &OmegaPoint,
    digits: i64,
    policy: DegreePolicy,
) -> Result<SkewPoly<TLaurent>> {
    let fq = ring.field().clone();
    if !l1.is_sublattice_of(&fq, l2) {
        return Err(Error::NotASublattice);
    }
    let reps = l1.quotient_basis(&fq, l2)?;
    let mut ex = LatticeExp::new(ring, l1, omega)?;
    let mut vals = Vec::new();
    for row in &reps {
        let z = omega.pair(ring, row);
        vals.push(ex.eval_to(&z, digits, policy)?.value);
    }
    SubspaceChain::new(ring, &vals)
        .map_err(|_| Error::InsufficientPrecision("isogeny kernel values not separated".into()))?
        .poly(ring)
}

/// `gamma(omega) = j^(-1) gamma omega` with `j = (gamma omega)_r`.
pub fn gamma_action(
    ring: &LaurentRing,
    gamma: &MatF,
    omega: &OmegaPoint,
) -> Result<(OmegaPoint, TLaurent)> {
    let r = omega.rank();
    if gamma.rows() != r || gamma.cols() != r {
        return Err(Error::DimensionMismatch(
            "matrix and point sizes differ".into(),
        ));
    }
    let v: Vec<TLaurent> = (0..r).map(|i| omega.pair(ring, gamma.row(i))).collect();
    let j = v[r - 1].clone();
    if j.is_zero_to_precision() {
        return Err(Error::BoundaryPoint);
    }
    let ji = ring.inv(&j)?;
    let mut w: Vec<TLaurent> = v.iter().map(|x| ring.mul(x, &ji)).collect();
    w[r - 1] = ring.one();
    Ok((OmegaPoint::new(ring, w)?, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqElem;

    #[test]
    fn canonical_basis_is_invariant() {
        let fq = Fq::new(2).unwrap();
        let k = RatField::new(fq.clone());
        let tinv = k.inv(&k.t()).unwrap();
        let b1 = Matrix::from_rows(vec![vec![tinv.clone(), k.zero()], vec![k.zero(), k.one()]]);
        let b2 = Matrix::from_rows(vec![vec![tinv.clone(), k.one()], vec![k.zero(), k.one()]]);
        assert_eq!(
            LatticeFr::new(&fq, b1).unwrap(),
            LatticeFr::new(&fq, b2).unwrap()
        );
    }

    #[test]
    fn rank_one_exponential_vanishes_on_lattice() {
        let fq = Fq::new(2).unwrap();
        let ring = LaurentRing::new(fq.clone(), 1, 40);
        let omega = OmegaPoint::certified(&ring, vec![ring.one()]).unwrap();
        let l = LatticeFr::standard(&fq, 1);
        let t = ring.from_poly(&PolyA::t());
        let v = lattice_exp(&ring, &l, &omega, &t, 3).unwrap();
        assert!(v.value.is_zero_to_precision());
        let small = TLaurent::monomial(1, FqElem(1), 1, 40);
        let v = lattice_exp(&ring, &l, &omega, &small, 3).unwrap();
        assert_eq!(v.value.val(), Some(1));
    }

    #[test]
    fn rank_two_point_needs_ramification() {
        let fq = Fq::new(2).unwrap();
        let ring = LaurentRing::new(fq.clone(), 1, 20);
        let w = ring.from_poly(&PolyA::t());
        assert_eq!(
            OmegaPoint::certified(&ring, vec![w, ring.one()]).unwrap_err(),
            Error::UncertifiedPoint
        );
        let ring2 = LaurentRing::new(fq, 2, 20);
        let w = TLaurent::monomial(2, FqElem(1), -1, 20);
        assert!(OmegaPoint::certified(&ring2, vec![w, ring2.one()]).is_ok());
    }

    #[test]
    fn reduction_of_an_ill_conditioned_basis() {
        let fq = Fq::new(2).unwrap();
        let k = RatField::new(fq.clone());
        let ring = LaurentRing::new(fq.clone(), 2, 160);
        let pat = [1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 1];
        let c: Vec<FqElem> = pat.iter().map(|&x| FqElem(x)).collect();
        let w = TLaurent::from_coeffs(2, -2, &c, 160);
        let omega = OmegaPoint::certified(&ring, vec![w, ring.one()]).unwrap();
        let l = LatticeFr::new(
            &fq,
            Matrix::from_rows(vec![
                vec![k.t(), k.zero()],
                vec![k.zero(), k.add(&k.t(), &k.one())],
            ]),
        )
        .unwrap();
        let mut ex = LatticeExp::new(&ring, &l, &omega).unwrap();
        let v: Vec<i64> = ex.generators().iter().map(|b| b.val().unwrap()).collect();
        assert_ne!(v[0].rem_euclid(2), v[1].rem_euclid(2));
        let beta = omega.pair(&ring, l.basis().row(0));
        let at_beta = ex.eval_truncated(&beta, 12).unwrap();
        assert!(at_beta.is_zero_to_precision() || at_beta.val().unwrap() > 100);
        let a = ex.eval_truncated(&ring.one(), 12).unwrap();
        let b = ex.eval_truncated(&ring.one(), 20).unwrap();
        assert!(ring.sub(&a, &b).is_zero_to_precision());
    }
}
