//! Exact and truncated arithmetic for Drinfeld modules over `A = F_q[t]`.

pub mod drinfeld;
pub mod error;
pub mod fq;
pub mod hecke;
pub mod lattice;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod quotient;
pub mod ratf;
pub mod residue;
pub mod ring;
pub mod skew;
pub mod subspace;
pub mod uexp;
pub mod useries;

pub use drinfeld::{make_module, DrinfeldModule, LevelCheck, LevelReject, LevelStructure};
pub use error::{Error, Result};
pub use fq::{Fq, FqElem};
pub use hecke::{
    coset_reps, hecke_apply, hecke_blocks, hecke_compose_check, slash_eval, ArithSubgroup,
    CosetSet, Form, HeckeBlock,
};
pub use lattice::{
    gamma_action, inclusion_isogeny, lattice_exp, module_from_lattice, AdelicApprox, DegreePolicy,
    LatticeExp, LatticeFr, OmegaPoint,
};
pub use laurent::{
    embed_f, tl_arith, valuation, Agreement, Comparison, LaurentRing, TLaurent, TlOp, Valuation,
};
pub use matrix::{MatA, MatF, Matrix};
pub use poly::{PolyA, PolyRing};
pub use quotient::QuotientRing;
pub use ratf::{RatF, RatField};
pub use ring::Ring;
pub use skew::SkewPoly;
pub use subspace::{subspace_poly, SubspaceChain};
pub use uexp::UContext;
pub use useries::{USeries, USeriesRing};
