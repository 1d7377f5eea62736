//! Expansions at infinity.
//!
//! Write `L = A b_1 + (0 + L')` with `b_1 = (c_1, v_0)` the first row of the
//! canonical basis, and pick `Lambda'` with `c_1 Lambda'` inside `L'`. With
//! `u = 1/e_(Lambda' omega')(omega_1)` and `X = e_(L' omega')(z)`,
//!
//! `e_(L omega)(z) = X * prod_{a monic} (1 - c_a(u)^(q-1) X^(q-1))`,
//!
//! where `c_a = 1/e_(L' omega')(a b_1 omega)` is a power series in `u` of
//! order `[L' : a c_1 Lambda']`.

use crate::drinfeld::make_module;
use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::lattice::{module_from_lattice, DegreePolicy, LatticeExp, LatticeFr, OmegaPoint};
use crate::laurent::{LaurentRing, TLaurent};
use crate::poly::PolyA;
use crate::ratf::RatF;
use crate::ring::Ring;
use crate::skew::SkewPoly;
use crate::subspace::span;
use crate::useries::{USeries, USeriesRing};

/// Cusp data attached to a lattice of rank `r >= 2` and a fixed `omega'`.
#[derive(Clone, Debug)]
pub struct UContext {
    ring: LaurentRing,
    l: LatticeFr,
    c1: RatF,
    v0: Vec<RatF>,
    l_prime: LatticeFr,
    lambda_prime: LatticeFr,
    omega_prime: OmegaPoint,
    /// Stable digits requested from lattice exponential evaluations.
    digits: i64,
    policy: DegreePolicy,
}

impl UContext {
    /// `lambda_prime` defaults to `c_1^(-1) L'`, the largest choice.
    pub fn new(
        ring: &LaurentRing,
        l: &LatticeFr,
        omega_prime: &OmegaPoint,
        lambda_prime: Option<LatticeFr>,
        digits: i64,
        policy: DegreePolicy,
    ) -> Result<UContext> {
        let fq = ring.field().clone();
        let r = l.rank();
        if r < 2 {
            return Err(Error::DimensionMismatch(
                "expansions at infinity need rank at least 2".into(),
            ));
        }
        if omega_prime.rank() != r - 1 {
            return Err(Error::DimensionMismatch(
                "omega' must have rank r - 1".into(),
            ));
        }
        let b = l.basis();
        let c1 = b.get(0, 0).clone();
        let v0 = b.row(0)[1..].to_vec();
        let rest: Vec<usize> = (1..r).collect();
        let l_prime = LatticeFr::new(&fq, b.select(&rest, &rest))?;
        let lambda_prime = match lambda_prime {
            Some(x) => x,
            None => l_prime.scale(&fq, &c1.inv(&fq)?)?,
        };
        if !lambda_prime
            .scale(&fq, &c1)?
            .is_sublattice_of(&fq, &l_prime)
        {
            return Err(Error::NotASublattice);
        }
        Ok(UContext {
            ring: ring.clone(),
            l: l.clone(),
            c1,
            v0,
            l_prime,
            lambda_prime,
            omega_prime: omega_prime.clone(),
            digits,
            policy,
        })
    }

    pub fn ring(&self) -> &LaurentRing {
        &self.ring
    }

    pub fn lattice(&self) -> &LatticeFr {
        &self.l
    }

    pub fn l_prime(&self) -> &LatticeFr {
        &self.l_prime
    }

    pub fn lambda_prime(&self) -> &LatticeFr {
        &self.lambda_prime
    }

    pub fn omega_prime(&self) -> &OmegaPoint {
        &self.omega_prime
    }

    /// Generator `c_1` of the projection `L_1 = c_1 A`.
    pub fn c1(&self) -> &RatF {
        &self.c1
    }

    /// The lifted generator `b_1 = (c_1, v_0)` of `L~_1`.
    pub fn lifted_generator(&self) -> Vec<RatF> {
        std::iter::once(self.c1.clone())
            .chain(self.v0.iter().cloned())
            .collect()
    }

    /// `log_q [L' : c_1 Lambda']`.
    pub fn base_colength(&self) -> Result<usize> {
        let fq = self.ring.field();
        self.lambda_prime
            .scale(fq, &self.c1)?
            .colength_in(fq, &self.l_prime)
    }

    /// The full point `(omega_1, omega')`.
    pub fn point(&self, omega1: &TLaurent) -> Result<OmegaPoint> {
        let ring = &self.ring;
        let mut w = vec![omega1.clone()];
        w.extend(self.omega_prime.coords().iter().cloned());
        OmegaPoint::certified(ring, w)
    }

    fn exp_lambda(&self) -> Result<LatticeExp> {
        LatticeExp::new(&self.ring, &self.lambda_prime, &self.omega_prime)
    }

    fn exp_l_prime(&self) -> Result<LatticeExp> {
        LatticeExp::new(&self.ring, &self.l_prime, &self.omega_prime)
    }

    /// `u = 1/e_(Lambda' omega')(omega_1)`.
    pub fn u_param(&self, omega1: &TLaurent) -> Result<TLaurent> {
        let v = self
            .exp_lambda()?
            .eval_to(omega1, self.digits, self.policy)?;
        if v.value.is_zero_to_precision() {
            return Err(Error::OnLattice);
        }
        self.ring.inv(&v.value)
    }

    /// Coefficients of `e_(L' omega')` up to `tau^depth`, through the rank
    /// `r-1` module of `L' omega'`.
    pub fn boundary_exp_coeffs(&self, depth: usize) -> Result<Vec<TLaurent>> {
        let psi = self.boundary_module(&PolyA::t())?;
        let m = make_module(&self.ring, psi, self.l.rank() - 1, false)?;
        m.exp_series(depth)
    }

    /// `psi^(L' omega')_a`, the module at `u = 0`.
    pub fn boundary_module(&self, a: &PolyA) -> Result<SkewPoly<TLaurent>> {
        module_from_lattice(
            &self.ring,
            &self.l_prime,
            &self.omega_prime,
            a,
            self.digits,
            self.policy,
        )
    }
}

/// Certificate attached to an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UCertificate {
    /// Largest degree of `a` contributing below `u^(m_u)`.
    pub degree: u32,
    /// Number of `u`-coefficients computed.
    pub stable_coeffs: i64,
}

/// The exponential as a function of `X = e_(L' omega')(z)` and `u`:
/// `E = sum_k E_k(u) X^(q^k)`.
#[derive(Clone, Debug)]
pub struct UExpansion {
    pub coeffs: Vec<USeries>,
    pub cert: UCertificate,
    uring: USeriesRing,
}

impl UExpansion {
    pub fn uring(&self) -> &USeriesRing {
        &self.uring
    }
}

/// Computes `E_0, E_1, ...` up to `u^(m_u)`.
pub fn exp_u_coeffs(ctx: &UContext, m_u: i64) -> Result<UExpansion> {
    let ring = &ctx.ring;
    let fq: Fq = ring.field().clone();
    let q = fq.q() as i64;
    let r = ctx.l.rank();
    let uring = USeriesRing::new(ring.clone(), m_u);
    let n0 = ctx.base_colength()? as i64;
    // [L' : a c_1 Lambda'] = q^(n0 + (r-1) deg a); factors with (q-1) times
    // that order at least m_u do not contribute.
    let mut max_deg: Option<u32> = None;
    for d in 0u32.. {
        let order = q
            .checked_pow(n0 as u32 + (r as u32 - 1) * d)
            .unwrap_or(i64::MAX);
        if order.saturating_mul(q - 1) >= m_u {
            break;
        }
        if d > ctx.policy.ceiling {
            return Err(Error::Unstable {
                bound: ctx.policy.ceiling,
            });
        }
        max_deg = Some(d);
    }
    let mut ex = ctx.exp_lambda()?;
    let omega_p = &ctx.omega_prime;
    // beta = e_(Lambda')(v_0 omega' / c_1), shared by all a.
    let c1inv = ctx.c1.inv(&fq)?;
    let v0c: Vec<RatF> = ctx.v0.iter().map(|x| x.mul(&fq, &c1inv)).collect();
    let beta = ex
        .eval_to(&omega_p.pair(ring, &v0c), ctx.digits, ctx.policy)?
        .value;
    let mut factors: Vec<USeries> = Vec::new();
    if let Some(maxd) = max_deg {
        for d in 0..=maxd as usize {
            for a in PolyA::monics_of_degree(&fq, d) {
                factors.push(factor_for(ctx, &uring, &mut ex, &a, &beta)?);
            }
        }
    }
    // prod (1 - a_i w), truncated in w at the largest weight (q^k - 1)/(q - 1) <= #factors.
    let nf = factors.len();
    let mut weights = vec![0usize];
    loop {
        let k = weights.len() as u32;
        let w = ((q.pow(k) - 1) / (q - 1)) as usize;
        if w > nf {
            break;
        }
        weights.push(w);
    }
    let wmax = *weights.last().expect("nonempty");
    let mut prod: Vec<USeries> = vec![uring.one()];
    for a in &factors {
        let mut next = prod.clone();
        next.push(uring.zero());
        for (i, p) in prod.iter().enumerate() {
            if i + 1 > wmax {
                break;
            }
            next[i + 1] = uring.sub(&next[i + 1], &uring.mul(p, a));
        }
        next.truncate(wmax + 1);
        prod = next;
    }
    let coeffs = weights
        .iter()
        .map(|&w| prod.get(w).cloned().unwrap_or_else(|| uring.zero()))
        .collect();
    Ok(UExpansion {
        coeffs,
        cert: UCertificate {
            degree: max_deg.unwrap_or(0),
            stable_coeffs: m_u,
        },
        uring,
    })
}

/// `c_a(u)^(q-1)` with `c_a = (u^N / l_1) prod_{mu != 0} mu / prod_mu (1 + (beta - mu) u)`,
/// `mu` running over `e_(Lambda')(l_1^(-1) l' omega')`, `l'` in `L' / l_1 Lambda'`.
fn factor_for(
    ctx: &UContext,
    uring: &USeriesRing,
    ex: &mut LatticeExp,
    a: &PolyA,
    beta: &TLaurent,
) -> Result<USeries> {
    let ring = &ctx.ring;
    let fq = ring.field().clone();
    let q = fq.q() as u64;
    let l1 = ctx.c1.mul(&fq, &RatF::from_poly(a.clone()));
    let l1inv = l1.inv(&fq)?;
    let sub = ctx.lambda_prime.scale(&fq, &l1)?;
    let reps = sub.quotient_basis(&fq, &ctx.l_prime)?;
    let mut basis_vals = Vec::with_capacity(reps.len());
    for row in &reps {
        let scaled: Vec<RatF> = row.iter().map(|x| x.mul(&fq, &l1inv)).collect();
        let z = ctx.omega_prime.pair(ring, &scaled);
        basis_vals.push(ex.eval_to(&z, ctx.digits, ctx.policy)?.value);
    }
    let mus = span(ring, &basis_vals);
    let n = mus.len() as i64;
    let mut num = ring.one();
    for mu in &mus {
        if !mu.is_zero_to_precision() {
            num = ring.mul(&num, mu);
        }
    }
    let mut den = uring.one();
    for mu in &mus {
        let lin = uring.add(&uring.one(), &uring.monomial(ring.sub(beta, mu), 1));
        den = uring.mul(&den, &lin);
    }
    let head = ring.mul(&num, &ring.embed(&l1inv));
    let c = uring.shift(&uring.scale_by(&head, &uring.inv(&den)?), n);
    Ok(uring.pow(&c, q - 1))
}

impl UExpansion {
    /// `sum_k E_k(u) X^(q^k)` for a given `X`, as a `u`-series.
    pub fn at_x(&self, x: &TLaurent) -> USeries {
        let lr = self.uring.laurent();
        let mut acc = self.uring.zero();
        let mut xp = x.clone();
        for ek in &self.coeffs {
            acc = self.uring.add(&acc, &self.uring.scale_by(&xp, ek));
            xp = lr.frobenius(&xp);
        }
        acc
    }

    /// Coefficients of `e_(L omega)` in `z` up to `tau^depth`, as `u`-series:
    /// the skew product of `E` with the boundary exponential.
    pub fn z_coeffs(&self, boundary: &[TLaurent], depth: usize) -> Vec<USeries> {
        let ur = &self.uring;
        let lr = ur.laurent();
        (0..=depth)
            .map(|j| {
                let mut acc = ur.zero();
                for (k, ek) in self.coeffs.iter().enumerate().take(j + 1) {
                    if let Some(eps) = boundary.get(j - k) {
                        acc = ur.add(&acc, &ur.scale_by(&lr.frobenius_pow(eps, k), ek));
                    }
                }
                acc
            })
            .collect()
    }
}

/// `e_(L omega)(z)` as a `u`-series; the constant term is `e_(L' omega')(z)`.
pub fn exp_u_series(ctx: &UContext, z: &TLaurent, m_u: i64) -> Result<(USeries, UCertificate)> {
    let ux = exp_u_coeffs(ctx, m_u)?;
    let x = ctx.exp_l_prime()?.eval_to(z, ctx.digits, ctx.policy)?.value;
    Ok((ux.at_x(&x), ux.cert))
}

/// `u`-expansions of all coefficients of `psi^(L omega)_a`:
/// `p_n = e_n a^(q^n) - sum_{i<n} p_i e_(n-i)^(q^i)`.
pub fn module_u_series(ctx: &UContext, a: &PolyA, m_u: i64) -> Result<Vec<USeries>> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let r = ctx.l.rank();
    let top = r * a.degi() as usize;
    let ux = exp_u_coeffs(ctx, m_u)?;
    let eps = ctx.boundary_exp_coeffs(top)?;
    let e = ux.z_coeffs(&eps, top);
    let ur = ux.uring().clone();
    let aa = ur.from_poly(a);
    let mut p: Vec<USeries> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut acc = ur.mul(&e[n], &ur.frobenius_pow(&aa, n));
        for (i, pi) in p.iter().enumerate() {
            acc = ur.sub(&acc, &ur.mul(pi, &ur.frobenius_pow(&e[n - i], i)));
        }
        p.push(acc);
    }
    Ok(p)
}

/// The `i`-th coefficient of `psi^(L omega)_a` as a `u`-series.
pub fn coeff_form_u_series(ctx: &UContext, a: &PolyA, i: usize, m_u: i64) -> Result<USeries> {
    let top = ctx.l.rank() * a.degi().max(0) as usize;
    if i > top {
        return Err(Error::DimensionMismatch(format!(
            "coefficient {i} above degree {top}"
        )));
    }
    Ok(module_u_series(ctx, a, m_u)?.swap_remove(i))
}

/// The module given by the constant terms of the coefficient series.
pub fn specialise_at_zero(ctx: &UContext, series: &[USeries]) -> SkewPoly<TLaurent> {
    let ur = USeriesRing::new(ctx.ring.clone(), 1);
    SkewPoly::new(&ctx.ring, series.iter().map(|s| ur.at_zero(s)).collect())
}

/// `Lambda'` scaled by a level: the translations of `Gamma(N)`-type groups.
pub fn level_lambda(fq: &Fq, ctx: &UContext, n: &PolyA) -> Result<LatticeFr> {
    ctx.lambda_prime.scale(fq, &RatF::from_poly(n.clone()))
}

/// Convenience: `L = A^2`, `omega' = (1)`, rank-2 cusp at infinity.
pub fn standard_rank_two(
    ring: &LaurentRing,
    digits: i64,
    policy: DegreePolicy,
) -> Result<UContext> {
    let fq = ring.field().clone();
    let l = LatticeFr::standard(&fq, 2);
    let wp = OmegaPoint::certified(ring, vec![ring.one()])?;
    UContext::new(ring, &l, &wp, None, digits, policy)
}
