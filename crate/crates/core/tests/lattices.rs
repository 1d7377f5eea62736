use drinfeld_core::uexp::{level_lambda, standard_rank_two};
use drinfeld_core::*;
use proptest::prelude::*;

fn poly(fq: &Fq, idx: &[u32]) -> RatF {
    RatF::from_poly(PolyA::from_indices(fq, idx).unwrap())
}

fn point(ring: &LaurentRing, val: i64, tail: &[u32]) -> OmegaPoint {
    let mut c = vec![FqElem(1)];
    c.extend(tail.iter().map(|&i| FqElem(i)));
    let w = TLaurent::from_coeffs(ring.ram(), val, &c, ring.prec());
    OmegaPoint::certified(ring, vec![w, ring.one()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_basis_ignores_base_change(a in 0u32..4, b in 0u32..4, c in 0u32..4, e in 0u32..2) {
        let fq = Fq::new(2).unwrap();
        let k = RatField::new(fq.clone());
        let basis = Matrix::from_rows(vec![
            vec![k.inv(&k.t()).unwrap(), poly(&fq, &[a & 1, a >> 1])],
            vec![k.zero(), poly(&fq, &[1, e])],
        ]);
        // Unimodular change of basis [[1, x], [0, 1]] [[1, 0], [y, 1]].
        let x = poly(&fq, &[b & 1, b >> 1]);
        let y = poly(&fq, &[c & 1, c >> 1]);
        let u1 = Matrix::from_rows(vec![vec![k.one(), x], vec![k.zero(), k.one()]]);
        let u2 = Matrix::from_rows(vec![vec![k.one(), k.zero()], vec![y, k.one()]]);
        let other = u1.mul(&k, &u2).mul(&k, &basis);
        let l1 = LatticeFr::new(&fq, basis).unwrap();
        let l2 = LatticeFr::new(&fq, other).unwrap();
        prop_assert_eq!(&l1, &l2);
        prop_assert_eq!(l1.encode(), l2.encode());
    }

    #[test]
    fn exponential_is_additive_and_vanishes_on_lattice(v1 in prop::collection::vec(0u32..3, 3), v2 in prop::collection::vec(0u32..3, 3)) {
        let fq = Fq::new(3).unwrap();
        let ring = LaurentRing::new(fq.clone(), 2, 70);
        let omega = point(&ring, -3, &[2, 1]);
        let l = LatticeFr::standard(&fq, 2);
        let policy = DegreePolicy::default();
        let mut ex = LatticeExp::new(&ring, &l, &omega).unwrap();
        let z1 = TLaurent::from_coeffs(2, -1, &v1.iter().map(|&i| FqElem(i)).collect::<Vec<_>>(), 70);
        let z2 = TLaurent::from_coeffs(2, 1, &v2.iter().map(|&i| FqElem(i)).collect::<Vec<_>>(), 70);
        let e1 = ex.eval_to(&z1, 30, policy).unwrap().value;
        let e2 = ex.eval_to(&z2, 30, policy).unwrap().value;
        let e12 = ex.eval_to(&ring.add(&z1, &z2), 30, policy).unwrap().value;
        prop_assert_eq!(ring.agrees_within(&ring.add(&e1, &e2), &e12, 8), Agreement::Agree);
        // Translating by a lattice vector does not change the value.
        let lv = omega.pair(&ring, &[RatF::from_poly(PolyA::t()), RatF::one()]);
        let shifted = ex.eval_to(&ring.add(&z1, &lv), 30, policy).unwrap().value;
        prop_assert_eq!(ring.agrees_within(&shifted, &e1, 8), Agreement::Agree);
    }
}

#[test]
fn sublattice_colength_and_quotient() {
    let fq = Fq::new(3).unwrap();
    let k = RatField::new(fq.clone());
    let l = LatticeFr::standard(&fq, 2);
    let t = k.t();
    let sub = l
        .times(&fq, &Matrix::diag(&k, &[t.clone(), k.mul(&t, &t)]))
        .unwrap();
    assert!(sub.is_sublattice_of(&fq, &l));
    assert!(!l.is_sublattice_of(&fq, &sub));
    assert_eq!(sub.colength_in(&fq, &l).unwrap(), 3);
    assert_eq!(sub.quotient_basis(&fq, &l).unwrap().len(), 3);
    assert_eq!(l.colength_in(&fq, &sub).unwrap_err(), Error::NotASublattice);
}

#[test]
fn uncertified_point_is_refused() {
    let fq = Fq::new(2).unwrap();
    let ring = LaurentRing::new(fq.clone(), 1, 30);
    let w = ring.from_poly(&PolyA::t());
    let p = OmegaPoint::new(&ring, vec![w, ring.one()]).unwrap();
    assert!(p.certificate().is_none());
    let l = LatticeFr::standard(&fq, 2);
    assert_eq!(
        LatticeExp::new(&ring, &l, &p).unwrap_err(),
        Error::UncertifiedPoint
    );
}

#[test]
fn rank_one_module_is_carlitz() {
    // A omega with omega = 1: psi_t = t + c tau with |c| fixed by the period.
    let fq = Fq::new(2).unwrap();
    let ring = LaurentRing::new(fq.clone(), 1, 60);
    let omega = OmegaPoint::certified(&ring, vec![ring.one()]).unwrap();
    let l = LatticeFr::standard(&fq, 1);
    let psi =
        module_from_lattice(&ring, &l, &omega, &PolyA::t(), 30, DegreePolicy::default()).unwrap();
    assert_eq!(psi.deg(), Some(1));
    assert!(make_module(&ring, psi.clone(), 1, false).is_ok());
    let psi2 = module_from_lattice(
        &ring,
        &l,
        &omega,
        &PolyA::monomial(fq.one(), 2),
        30,
        DegreePolicy::default(),
    )
    .unwrap();
    let m = make_module(&ring, psi, 1, false).unwrap();
    let direct = m.act(&PolyA::monomial(fq.one(), 2));
    for i in 0..3 {
        assert_eq!(
            ring.agrees_within(&direct.coeff(&ring, i), &psi2.coeff(&ring, i), 10),
            Agreement::Agree
        );
    }
}

#[test]
fn gamma_action_normalises_last_coordinate() {
    let fq = Fq::new(3).unwrap();
    let k = RatField::new(fq.clone());
    let ring = LaurentRing::new(fq.clone(), 2, 40);
    let omega = point(&ring, -1, &[1]);
    let g = Matrix::from_rows(vec![vec![k.zero(), k.one()], vec![k.one(), k.t()]]);
    let (w, j) = gamma_action(&ring, &g, &omega).unwrap();
    assert_eq!(w.coords()[1], ring.one());
    let expect_j = ring.add(&omega.coords()[0], &ring.from_poly(&PolyA::t()));
    assert!(ring.sub(&j, &expect_j).is_zero_to_precision());
    assert!(w.certificate().is_some());
}

#[test]
fn cusp_context_shapes() {
    let fq = Fq::new(2).unwrap();
    let ring = LaurentRing::new(fq.clone(), 2, 60);
    let ctx = standard_rank_two(&ring, 40, DegreePolicy::default()).unwrap();
    assert_eq!(ctx.base_colength().unwrap(), 0);
    assert_eq!(ctx.l_prime().rank(), 1);
    assert_eq!(ctx.lifted_generator().len(), 2);
    let lam = level_lambda(&fq, &ctx, &PolyA::t()).unwrap();
    assert_eq!(lam.colength_in(&fq, ctx.lambda_prime()).unwrap(), 1);
    // u is small when omega_1 is large.
    let w = TLaurent::from_coeffs(2, -7, &[FqElem(1)], 60);
    let u = ctx.u_param(&w).unwrap();
    assert!(u.val().unwrap() > 0);
    let l1 = LatticeFr::standard(&fq, 1);
    let bad = UContext::new(
        &ring,
        &l1,
        &OmegaPoint::certified(&ring, vec![ring.one()]).unwrap(),
        None,
        40,
        DegreePolicy::default(),
    );
    assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
}
