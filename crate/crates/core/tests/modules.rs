use drinfeld_core::*;

fn carlitz(k: &RatField) -> DrinfeldModule<RatField> {
    make_module(k, SkewPoly::new(k, vec![k.t(), k.one()]), 1, false).unwrap()
}

#[test]
fn log_inverts_exp() {
    for q in [2, 3, 4] {
        let k = RatField::new(Fq::new(q).unwrap());
        let phi = SkewPoly::new(&k, vec![k.t(), k.add(&k.t(), &k.one()), k.one()]);
        let m = make_module(&k, phi, 2, false).unwrap();
        let e = SkewPoly::new(&k, m.exp_series(5).unwrap());
        let l = SkewPoly::new(&k, m.log_series(5).unwrap());
        let id = e.mul_truncated(&k, &l, 6);
        assert_eq!(id, SkewPoly::one(&k));
        let id = l.mul_truncated(&k, &e, 6);
        assert_eq!(id, SkewPoly::one(&k));
    }
}

#[test]
fn carlitz_torsion_isogeny_in_splitting_ring() {
    // lambda with lambda^(q-1) = -t spans phi[t]. The normalised isogeny
    // with that kernel is z + z^q / t, and the target is t + t^(q-1) tau.
    for q in [2u32, 3, 5] {
        let fq = Fq::new(q).unwrap();
        let k = RatField::new(fq.clone());
        let mut modulus = vec![k.zero(); q as usize - 1];
        modulus[0] = k.t();
        modulus.push(k.one());
        let ring = QuotientRing::new(k.clone(), modulus).unwrap();
        let phi = SkewPoly::new(&ring, vec![ring.from_poly(&PolyA::t()), ring.one()]);
        let m = make_module(&ring, phi.clone(), 1, false).unwrap();
        let lambda = ring.gen();
        assert!(ring.is_zero(&phi.eval(&ring, &lambda)));
        let kernel: Vec<_> = fq.elements().map(|c| ring.scale(c, &lambda)).collect();
        let (eh, target) = m.isogeny_from_kernel(&kernel).unwrap();
        let lift = |x: RatF| ring.lift(x);
        let tinv = k.inv(&k.t()).unwrap();
        assert_eq!(eh, SkewPoly::new(&ring, vec![ring.one(), lift(tinv)]));
        let tq1 = RatF::from_poly(PolyA::monomial(fq.one(), q as usize - 1));
        assert_eq!(
            target.phi_t(),
            &SkewPoly::new(&ring, vec![ring.from_poly(&PolyA::t()), lift(tq1)])
        );
        // psi_t e_H = e_H phi_t
        assert_eq!(target.phi_t().mul(&ring, &eh), eh.mul(&ring, &phi));

        let ls = LevelStructure {
            level: PolyA::t(),
            images: vec![lambda.clone()],
        };
        assert!(m.check_level_structure(&ls).is_accepted());
        let zero = LevelStructure {
            level: PolyA::t(),
            images: vec![ring.zero()],
        };
        assert_eq!(
            m.check_level_structure(&zero),
            LevelCheck::Rejected(LevelReject::NotInjective)
        );
        let off = LevelStructure {
            level: PolyA::t(),
            images: vec![ring.one()],
        };
        assert_eq!(
            m.check_level_structure(&off),
            LevelCheck::Rejected(LevelReject::NotTorsion)
        );
    }
}

#[test]
fn non_stable_kernel_is_rejected() {
    let k = RatField::new(Fq::new(3).unwrap());
    let m = carlitz(&k);
    let kernel: Vec<RatF> = k.field().elements().map(|c| k.scale(c, &k.t())).collect();
    assert_eq!(
        m.isogeny_from_kernel(&kernel).unwrap_err(),
        Error::NotStable
    );
}

#[test]
fn generalised_module_allows_rank_drop() {
    let k = RatField::new(Fq::new(2).unwrap());
    let phi = SkewPoly::new(&k, vec![k.t(), k.one()]);
    let m = make_module(&k, phi.clone(), 3, true).unwrap();
    assert!(m.is_generalised());
    assert_eq!(m.act(&PolyA::monomial(k.field().one(), 2)).deg(), Some(2));
    assert!(make_module(&k, phi, 3, false).is_err());
}

#[test]
fn modules_over_laurent_series() {
    // Same Carlitz exponential over F_inf as over F, to working precision.
    let fq = Fq::new(3).unwrap();
    let k = RatField::new(fq.clone());
    let ring = LaurentRing::new(fq.clone(), 1, 60);
    let mk = carlitz(&k);
    let ml = make_module(
        &ring,
        SkewPoly::new(&ring, vec![ring.from_poly(&PolyA::t()), ring.one()]),
        1,
        false,
    )
    .unwrap();
    let ek = mk.exp_series(4).unwrap();
    let el = ml.exp_series(4).unwrap();
    for (a, b) in ek.iter().zip(&el) {
        assert!(ring.sub(&ring.embed(a), b).is_zero_to_precision());
    }
    let res = ml.exp_residual(&PolyA::t(), 4).unwrap();
    assert!(res.coeffs().iter().all(TLaurent::is_zero_to_precision));
}

#[test]
fn encoding_is_stable() {
    let k = RatField::new(Fq::new(2).unwrap());
    let m = carlitz(&k);
    let s = m.encode();
    assert!(s.starts_with("r=1 generalised=0 phi_t="));
    assert_eq!(s, carlitz(&k).encode());
}
