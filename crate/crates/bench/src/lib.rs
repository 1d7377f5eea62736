//! Fixtures shared by the benchmarks in `benches/`.

use drinfeld_core::{
    make_module, DrinfeldModule, Fq, FqElem, LatticeFr, LaurentRing, Matrix, OmegaPoint, RatField,
    Ring, SkewPoly, TLaurent,
};

/// `phi_t = t + tau` over `F_q(t)`.
pub fn carlitz(q: u32) -> DrinfeldModule<RatField> {
    let k = RatField::new(Fq::new(q).expect("prime power"));
    let phi = SkewPoly::new(&k, vec![k.t(), k.one()]);
    make_module(&k, phi, 1, false).expect("Carlitz module")
}

/// A rank-2 point `(w, 1)` with `|w|` a half-integral power of `q`.
pub fn point(q: u32, prec: i64) -> (LaurentRing, OmegaPoint) {
    let fq = Fq::new(q).expect("prime power");
    let ring = LaurentRing::new(fq, 2, prec);
    let c = [FqElem(1), FqElem(1), FqElem(0), FqElem(1)];
    let w = TLaurent::from_coeffs(2, -3, &c, prec);
    let omega = OmegaPoint::certified(&ring, vec![w, ring.one()]).expect("separated");
    (ring, omega)
}

/// `A (1, 0) + A (0, t)`.
pub fn lattice(q: u32) -> LatticeFr {
    let fq = Fq::new(q).expect("prime power");
    let k = RatField::new(fq.clone());
    let rows = vec![vec![k.one(), k.zero()], vec![k.zero(), k.t()]];
    LatticeFr::new(&fq, Matrix::from_rows(rows)).expect("nonsingular")
}
