//! Text parsers for command arguments.

use drinfeld_core::{
    Fq, LaurentRing, MatA, MatF, Matrix, OmegaPoint, PolyA, PolyRing, RatF, RatField, Ring,
    SkewPoly, TLaurent,
};

use crate::CliError;

fn usage(what: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{what}: {e}"))
}

pub fn poly(fq: &Fq, s: &str) -> Result<PolyA, CliError> {
    PolyA::parse(fq, s).map_err(|e| usage("polynomial", e))
}

pub fn ratf(fq: &Fq, s: &str) -> Result<RatF, CliError> {
    RatF::parse(fq, s).map_err(|e| usage("element of F", e))
}

/// `[b0; b1; ...]` with entries in `F`.
pub fn skew(fq: &Fq, s: &str) -> Result<SkewPoly<RatF>, CliError> {
    let k = RatField::new(fq.clone());
    SkewPoly::parse(&k, s, |x| RatF::parse(fq, x)).map_err(|e| usage("skew polynomial", e))
}

fn rows(s: &str) -> String {
    s.replace(';', "\n")
}

/// Rows separated by `;` or newlines, entries by `,`.
pub fn matrix_f(fq: &Fq, s: &str) -> Result<MatF, CliError> {
    let m = Matrix::parse::<RatField>(&rows(s), |x| RatF::parse(fq, x))
        .map_err(|e| usage("matrix", e))?;
    if m.rows() == 0 {
        return Err(CliError::Usage("empty matrix".into()));
    }
    Ok(m)
}

pub fn matrix_a(fq: &Fq, s: &str) -> Result<MatA, CliError> {
    let m = Matrix::parse::<PolyRing>(&rows(s), |x| PolyA::parse(fq, x))
        .map_err(|e| usage("matrix", e))?;
    if m.rows() == 0 {
        return Err(CliError::Usage("empty matrix".into()));
    }
    Ok(m)
}

pub fn laurent(fq: &Fq, s: &str) -> Result<TLaurent, CliError> {
    TLaurent::parse(fq, s).map_err(|e| usage("series", e))
}

/// Point `w_1; ...; w_r` of truncated series, certified for separation.
pub fn omega(ring: &LaurentRing, s: &str) -> Result<OmegaPoint, CliError> {
    let fq = ring.field();
    let coords = s
        .split(';')
        .map(|x| laurent(fq, x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OmegaPoint::certified(ring, coords)?)
}
