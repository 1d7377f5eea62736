//! Subcommand implementations.

use std::io::Write;

use clap::{Args, ValueEnum};
use drinfeld_core::hecke::{
    component_count, component_count_phi, determinant_classes, standard_reps, DEFAULT_COSET_CEILING,
};
use drinfeld_core::uexp::{coeff_form_u_series, exp_u_coeffs, exp_u_series, standard_rank_two};
use drinfeld_core::useries::classify_at_infinity;
use drinfeld_core::{
    coset_reps, hecke_blocks, hecke_compose_check, make_module,
    module_from_lattice as build_module, AdelicApprox, ArithSubgroup, Form, LatticeExp, LatticeFr,
    MatF, OmegaPoint, PolyA, QuotientRing, RatF, RatField, Ring, TLaurent,
};
use serde_json::Value;

use crate::config::RunConfig;
use crate::output::Emitter;
use crate::{parse, CliError};

type Out<'a, W> = &'a mut Emitter<W>;

#[derive(Args, Debug)]
pub struct ExpSeriesArgs {
    /// phi_t as `[b0; b1; ...]` over F; defaults to the Carlitz module.
    #[arg(long, default_value = "[0 1; 1]")]
    pub phi: String,
    /// Rank; defaults to the tau-degree of phi_t.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Print the logarithm instead.
    #[arg(long)]
    pub log: bool,
}

fn module_over_f(
    cfg: &RunConfig,
    phi: &str,
    rank: Option<usize>,
) -> Result<drinfeld_core::DrinfeldModule<RatField>, CliError> {
    let fq = cfg.field()?;
    let k = RatField::new(fq.clone());
    let phi = parse::skew(&fq, phi)?;
    let r = rank.or(phi.deg()).unwrap_or(0);
    Ok(make_module(&k, phi, r, false)?)
}

pub fn exp_series<W: Write>(
    cfg: &RunConfig,
    a: &ExpSeriesArgs,
    out: Out<W>,
) -> Result<(), CliError> {
    let m = module_over_f(cfg, &a.phi, a.rank)?;
    let k = m.ring().clone();
    let coeffs = if a.log {
        m.log_series(a.depth)?
    } else {
        m.exp_series(a.depth)?
    };
    out.record("module", vec![("value", m.encode().into())])?;
    let kind = if a.log { "log" } else { "exp" };
    for (i, c) in coeffs.iter().enumerate() {
        out.record(kind, vec![("i", i.into()), ("value", k.encode(c).into())])?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ActArgs {
    #[arg(long, default_value = "[0 1; 1]")]
    pub phi: String,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Element of A as ascending coefficient indices.
    #[arg(long)]
    pub a: String,
}

pub fn act<W: Write>(cfg: &RunConfig, a: &ActArgs, out: Out<W>) -> Result<(), CliError> {
    let m = module_over_f(cfg, &a.phi, a.rank)?;
    let fq = cfg.field()?;
    let elt = parse::poly(&fq, &a.a)?;
    let v = m.act(&elt);
    out.record(
        "act",
        vec![
            ("a", elt.encode().into()),
            ("deg", v.deg().map_or(Value::Null, Value::from)),
            ("value", v.encode(m.ring()).into()),
        ],
    )?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct IsogenyArgs {
    #[arg(long, default_value = "[0 1; 1]")]
    pub phi: String,
    /// Monic modulus `c0; c1; ...; 1` of the coefficient ring F[x]/(m);
    /// defaults to `x^(q-1) + t`.
    #[arg(long)]
    pub modulus: Option<String>,
    /// Kernel generators separated by `|`; each is `x` or `c0, c1, ...`.
    #[arg(long, default_value = "x")]
    pub kernel: String,
}

pub fn isogeny<W: Write>(cfg: &RunConfig, a: &IsogenyArgs, out: Out<W>) -> Result<(), CliError> {
    let fq = cfg.field()?;
    let k = RatField::new(fq.clone());
    let modulus: Vec<RatF> = match &a.modulus {
        Some(s) => s
            .split(';')
            .map(|x| parse::ratf(&fq, x))
            .collect::<Result<_, _>>()?,
        None => {
            let mut v = vec![k.zero(); fq.q() as usize - 1];
            v[0] = k.t();
            v.push(k.one());
            v
        }
    };
    let ring = QuotientRing::new(k.clone(), modulus)?;
    let phi = parse::skew(&fq, &a.phi)?;
    let r = phi.deg().unwrap_or(0);
    let phi = phi.map(&ring, |c| ring.lift(c.clone()));
    let m = make_module(&ring, phi, r, false)?;
    let mut gens = Vec::new();
    for g in a.kernel.split('|') {
        let g = g.trim();
        if g == "x" {
            gens.push(ring.gen());
        } else {
            let v = g
                .split(',')
                .map(|x| parse::ratf(&fq, x))
                .collect::<Result<Vec<_>, _>>()?;
            if v.len() > ring.degree() {
                return Err(CliError::Usage(format!(
                    "kernel element {g:?} has too many coordinates"
                )));
            }
            gens.push(ring.reduce(v));
        }
    }
    let kernel = drinfeld_core::subspace::span(&ring, &gens);
    let (eh, target) = m.isogeny_from_kernel(&kernel)?;
    out.record("kernel", vec![("size", kernel.len().into())])?;
    out.record("isogeny", vec![("value", eh.encode(&ring).into())])?;
    out.record(
        "target",
        vec![("phi_t", target.phi_t().encode(&ring).into())],
    )?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct LatticeExpArgs {
    /// Basis rows separated by `;`, entries by `,`; defaults to A^r.
    #[arg(long)]
    pub basis: Option<String>,
    /// Point `w_1; ...; w_r` as truncated series `ram:val:prec:[c...]`.
    #[arg(long)]
    pub omega: String,
    #[arg(long)]
    pub z: String,
}

fn lattice_and_point(
    cfg: &RunConfig,
    basis: &Option<String>,
    omega: &str,
) -> Result<(drinfeld_core::LaurentRing, LatticeFr, OmegaPoint), CliError> {
    let fq = cfg.field()?;
    let ring = cfg.laurent()?;
    let w = parse::omega(&ring, omega)?;
    let l = match basis {
        Some(b) => LatticeFr::new(&fq, parse::matrix_f(&fq, b)?)?,
        None => LatticeFr::standard(&fq, w.rank()),
    };
    if l.rank() != w.rank() {
        return Err(CliError::Usage("lattice and point ranks differ".into()));
    }
    Ok((ring, l, w))
}

pub fn lattice_exp<W: Write>(
    cfg: &RunConfig,
    a: &LatticeExpArgs,
    out: Out<W>,
) -> Result<(), CliError> {
    let (ring, l, w) = lattice_and_point(cfg, &a.basis, &a.omega)?;
    let z = parse::laurent(ring.field(), &a.z)?;
    let v = LatticeExp::new(&ring, &l, &w)?.eval_to(&z, cfg.digits, cfg.policy())?;
    out.record(
        "lattice_exp",
        vec![
            ("lattice", l.encode().replace('\n', "; ").into()),
            ("value", v.value.encode().into()),
            ("D", v.degree.into()),
            (
                "stable_prec",
                v.stable_prec.map_or(Value::Null, Value::from),
            ),
            (
                "stable_digits",
                v.stable_digits().map_or(Value::Null, Value::from),
            ),
            ("saturated", v.saturated.into()),
        ],
    )?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct ModuleArgs {
    #[arg(long)]
    pub basis: Option<String>,
    #[arg(long)]
    pub omega: String,
    #[arg(long, default_value = "0 1")]
    pub a: String,
}

pub fn module_from_lattice<W: Write>(
    cfg: &RunConfig,
    a: &ModuleArgs,
    out: Out<W>,
) -> Result<(), CliError> {
    let (ring, l, w) = lattice_and_point(cfg, &a.basis, &a.omega)?;
    let elt = parse::poly(ring.field(), &a.a)?;
    let psi = build_module(&ring, &l, &w, &elt, cfg.digits, cfg.policy())?;
    out.record(
        "module",
        vec![
            ("a", elt.encode().into()),
            ("deg", psi.deg().map_or(Value::Null, Value::from)),
            ("value", psi.encode(&ring).into()),
        ],
    )?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct UExpandArgs {
    /// Expand the exponential at this z instead of a coefficient form.
    #[arg(long)]
    pub z: Option<String>,
    #[arg(long, default_value = "0 1")]
    pub a: String,
    /// Coefficient index of psi_a.
    #[arg(long, default_value_t = 1)]
    pub index: usize,
}

pub fn u_expand<W: Write>(cfg: &RunConfig, a: &UExpandArgs, out: Out<W>) -> Result<(), CliError> {
    let ring = cfg.laurent()?;
    let ctx = standard_rank_two(&ring, cfg.digits, cfg.policy())?;
    let (series, cert) = match &a.z {
        Some(z) => {
            let z = parse::laurent(ring.field(), z)?;
            exp_u_series(&ctx, &z, cfg.m_u)?
        }
        None => {
            let elt = parse::poly(ring.field(), &a.a)?;
            let s = coeff_form_u_series(&ctx, &elt, a.index, cfg.m_u)?;
            (s, exp_u_coeffs(&ctx, cfg.m_u)?.cert)
        }
    };
    out.record(
        "u_series",
        vec![
            (
                "order",
                series.certified_order().map_or(Value::Null, Value::from),
            ),
            ("value", series.encode().into()),
        ],
    )?;
    out.record(
        "certificate",
        vec![
            ("degree", cert.degree.into()),
            ("stable_coeffs", cert.stable_coeffs.into()),
        ],
    )?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    #[arg(long, default_value = "0 1")]
    pub a: String,
    /// Coefficient index of psi_a; 2 with a = t is the discriminant form.
    #[arg(long, default_value_t = 2)]
    pub index: usize,
}

pub fn order_at_infinity<W: Write>(
    cfg: &RunConfig,
    a: &OrderArgs,
    out: Out<W>,
) -> Result<(), CliError> {
    let ring = cfg.laurent()?;
    let ctx = standard_rank_two(&ring, cfg.digits, cfg.policy())?;
    let elt = parse::poly(ring.field(), &a.a)?;
    let s = coeff_form_u_series(&ctx, &elt, a.index, cfg.m_u)?;
    let c = classify_at_infinity(&s)?;
    out.record(
        "order",
        vec![
            ("order", c.order.into()),
            ("holomorphic", c.holomorphic.into()),
            ("cuspidal", c.cuspidal.into()),
        ],
    )?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupKind {
    /// GL_r(A).
    Full,
    /// Gamma(N) for the configured level.
    Principal,
}

fn group(cfg: &RunConfig, kind: GroupKind, r: usize) -> Result<ArithSubgroup, CliError> {
    Ok(match kind {
        GroupKind::Full => ArithSubgroup::full(r),
        GroupKind::Principal => ArithSubgroup::principal(&cfg.field()?, &cfg.level_poly()?, r)?,
    })
}

fn square(m: MatF) -> Result<MatF, CliError> {
    if m.is_square() {
        Ok(m)
    } else {
        Err(CliError::Usage("matrix must be square".into()))
    }
}

#[derive(Args, Debug)]
pub struct CosetArgs {
    #[arg(long, default_value = "0 1, 0; 0, 1")]
    pub delta: String,
    #[arg(long, value_enum, default_value = "full")]
    pub group: GroupKind,
    /// k-part modulo N; switches to blocks over the components at level N.
    #[arg(long = "k-part")]
    pub k_part: Option<String>,
    #[arg(long, default_value_t = DEFAULT_COSET_CEILING)]
    pub ceiling: usize,
}

pub fn hecke_cosets<W: Write>(cfg: &RunConfig, a: &CosetArgs, out: Out<W>) -> Result<(), CliError> {
    let fq = cfg.field()?;
    let delta = square(parse::matrix_f(&fq, &a.delta)?)?;
    let r = delta.rows();
    match &a.k_part {
        None => {
            let g = group(cfg, a.group, r)?;
            let cs = coset_reps(&fq, &g, &delta, &g, a.ceiling)?;
            if out.is_json() {
                out.record("cosets", vec![("count", cs.len().into())])?;
            } else {
                out.line("cosets", &format!("#cosets {}", cs.len()))?;
            }
            for line in cs.encode(&fq).lines() {
                out.line("rep", line)?;
            }
        }
        Some(kp) => {
            let n = cfg.level_poly()?;
            let kpart = parse::matrix_a(&fq, kp)?;
            let h = AdelicApprox::new(&fq, delta, kpart, n.clone())?;
            let reps = standard_reps(&fq, &n, r)?;
            let blocks = hecke_blocks(&fq, &h, &n, &reps, a.ceiling as u128)?;
            for b in &blocks {
                let head = format!(
                    "#block {} -> {} degree={} cosets={}",
                    b.source,
                    b.target,
                    b.degree,
                    b.coset_total()
                );
                if out.is_json() {
                    out.record(
                        "block",
                        vec![
                            ("source", b.source.into()),
                            ("target", b.target.into()),
                            ("degree", b.degree.into()),
                            ("cosets", b.coset_total().into()),
                        ],
                    )?;
                } else {
                    out.line("block", &head)?;
                }
                for cs in &b.double_cosets {
                    for line in cs.encode(&fq).lines() {
                        out.line("rep", line)?;
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinForm {
    /// The constant function 1.
    One,
    /// The first coordinate omega_1.
    Coordinate,
    /// The tau-coefficient of psi_t (weight q - 1).
    G,
    /// The tau^2-coefficient of psi_t (weight q^2 - 1).
    Delta,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    #[arg(long, default_value = "0 1, 0; 0, 1")]
    pub delta: String,
    #[arg(long, value_enum, default_value = "delta")]
    pub form: BuiltinForm,
    /// Weight; defaults to the natural weight of the form.
    #[arg(long)]
    pub weight: Option<i64>,
    #[arg(long)]
    pub omega: String,
    #[arg(long, value_enum, default_value = "full")]
    pub group: GroupKind,
}

/// Evaluates a built-in form at a rank-2 point.
pub fn builtin_value(
    cfg: &RunConfig,
    form: BuiltinForm,
    ring: &drinfeld_core::LaurentRing,
    w: &OmegaPoint,
) -> drinfeld_core::Result<TLaurent> {
    match form {
        BuiltinForm::One => Ok(ring.one()),
        BuiltinForm::Coordinate => Ok(w.coords()[0].clone()),
        BuiltinForm::G | BuiltinForm::Delta => {
            let l = LatticeFr::standard(ring.field(), 2);
            let psi = build_module(ring, &l, w, &PolyA::t(), cfg.digits, cfg.policy())?;
            Ok(psi.coeff(ring, if form == BuiltinForm::G { 1 } else { 2 }))
        }
    }
}

pub fn hecke_apply<W: Write>(cfg: &RunConfig, a: &ApplyArgs, out: Out<W>) -> Result<(), CliError> {
    let fq = cfg.field()?;
    let ring = cfg.laurent()?;
    let delta = square(parse::matrix_f(&fq, &a.delta)?)?;
    let w = parse::omega(&ring, &a.omega)?;
    if delta.rows() != 2 || w.rank() != 2 {
        return Err(CliError::Usage("hecke-apply works with rank 2".into()));
    }
    let q = fq.q() as i64;
    let k = a.weight.unwrap_or(match a.form {
        BuiltinForm::One | BuiltinForm::Coordinate => 0,
        BuiltinForm::G => q - 1,
        BuiltinForm::Delta => q * q - 1,
    });
    let form = a.form;
    let f = move |r: &drinfeld_core::LaurentRing, p: &OmegaPoint| builtin_value(cfg, form, r, p);
    let g = group(cfg, a.group, 2)?;
    let image = drinfeld_core::hecke_apply(&fq, &f, &delta, &g, &g, k)?;
    let before = f(&ring, &w)?;
    let after = image.eval(&ring, &w)?;
    out.record(
        "hecke_apply",
        vec![
            ("cosets", image.cosets.len().into()),
            ("weight", k.into()),
            ("f", before.encode().into()),
            ("value", after.encode().into()),
        ],
    )?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct ComposeArgs {
    #[arg(long, default_value = "0 1, 0; 0, 1")]
    pub h: String,
    #[arg(long, default_value = "0 1, 0; 0, 1")]
    pub hp: String,
    #[arg(long, default_value_t = 1 << 22)]
    pub ceiling: u128,
}

pub fn hecke_compose<W: Write>(
    cfg: &RunConfig,
    a: &ComposeArgs,
    out: Out<W>,
) -> Result<(), CliError> {
    let fq = cfg.field()?;
    let n = cfg.level_poly()?;
    let h = AdelicApprox::global(&fq, square(parse::matrix_f(&fq, &a.h)?)?, n.clone())?;
    let hp = AdelicApprox::global(&fq, square(parse::matrix_f(&fq, &a.hp)?)?, n.clone())?;
    let tab = hecke_compose_check(&fq, &h, &hp, &n, a.ceiling)?;
    for line in tab.encode(&fq).lines() {
        out.line("term", line)?;
    }
    out.record(
        "composition",
        vec![
            ("modulus", tab.modulus.encode().into()),
            ("degree_h", tab.degree_h.into()),
            ("degree_hp", tab.degree_hp.into()),
            ("mass", tab.mass().into()),
            ("consistent", tab.is_consistent().into()),
        ],
    )?;
    if !tab.is_consistent() {
        return Err(CliError::Failed(
            "composition multiplicities disagree with the direct count".into(),
        ));
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ComponentArgs {
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
}

pub fn components<W: Write>(
    cfg: &RunConfig,
    a: &ComponentArgs,
    out: Out<W>,
) -> Result<(), CliError> {
    let fq = cfg.field()?;
    let n = cfg.level_poly()?;
    let count = component_count(&fq, &n, a.rank)?;
    let phi = component_count_phi(&fq, &n)?;
    let classes: Vec<String> = determinant_classes(&fq, &n)?
        .iter()
        .map(|c| format!("[{}]", c.encode()))
        .collect();
    out.record(
        "components",
        vec![
            ("count", count.into()),
            ("units_mod_n", (phi as u64).into()),
            ("classes", classes.join(" ").into()),
        ],
    )?;
    Ok(())
}
