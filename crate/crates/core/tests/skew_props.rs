use drinfeld_core::subspace::span;
use drinfeld_core::*;
use proptest::prelude::*;

fn ratf_list(n: usize) -> impl Strategy<Value = (Fq, Vec<RatF>)> {
    prop::sample::select(vec![2u32, 3, 4]).prop_flat_map(move |q| {
        let c = prop::collection::vec(0..q, 0..=3);
        (Just(q), prop::collection::vec((c.clone(), c), n)).prop_map(|(q, v)| {
            let fq = Fq::new(q).unwrap();
            let xs = v
                .into_iter()
                .map(|(n, d)| {
                    let den = PolyA::from_indices(&fq, &d).unwrap();
                    let den = if den.is_zero() { PolyA::one() } else { den };
                    RatF::new(&fq, PolyA::from_indices(&fq, &n).unwrap(), den).unwrap()
                })
                .collect();
            (fq, xs)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_composition((fq, v) in ratf_list(7)) {
        let k = RatField::new(fq);
        let f = SkewPoly::new(&k, v[0..2].to_vec());
        let g = SkewPoly::new(&k, v[2..4].to_vec());
        let h = SkewPoly::new(&k, v[4..6].to_vec());
        let z = &v[6];
        let fg = f.mul(&k, &g);
        prop_assert_eq!(fg.eval(&k, z), f.eval(&k, &g.eval(&k, z)));
        prop_assert_eq!(fg.mul(&k, &h), f.mul(&k, &g.mul(&k, &h)));
        prop_assert_eq!(f.mul(&k, &g.add(&k, &h)), fg.add(&k, &f.mul(&k, &h)));
        // Evaluation is F_q-linear.
        let c = k.field().elem(k.field().q() - 1).unwrap();
        prop_assert_eq!(f.eval(&k, &k.scale(c, z)), k.scale(c, &f.eval(&k, z)));
    }

    #[test]
    fn right_division((fq, v) in ratf_list(5)) {
        let k = RatField::new(fq);
        prop_assume!(!v[4].is_zero());
        let f = SkewPoly::new(&k, v[0..3].to_vec());
        let g = SkewPoly::new(&k, vec![v[3].clone(), v[4].clone()]);
        let (quo, rem) = f.right_divide(&k, &g).unwrap();
        prop_assert_eq!(quo.mul(&k, &g).add(&k, &rem), f);
        prop_assert!(rem.deg().unwrap_or(0) < 1);
    }

    #[test]
    fn subspace_polynomial_vanishes_on_span((fq, v) in ratf_list(2)) {
        let k = RatField::new(fq.clone());
        let basis: Vec<RatF> = v.into_iter().filter(|x| !x.is_zero()).collect();
        let p = match subspace_poly(&k, &basis) {
            Ok(p) => p,
            Err(Error::NotASubspace) => {
                // Dependent basis: some nontrivial combination vanishes.
                prop_assert!(span(&k, &basis).iter().filter(|x| x.is_zero()).count() > 1);
                return Ok(());
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(p.deg(), Some(basis.len()));
        prop_assert_eq!(p.coeffs().first(), Some(&k.one()));
        for x in span(&k, &basis) {
            prop_assert!(p.eval(&k, &x).is_zero());
        }
        // Chain evaluation agrees with the expanded polynomial.
        let chain = SubspaceChain::new(&k, &basis).unwrap();
        let z = k.add(&k.t(), &k.one());
        prop_assert_eq!(chain.eval(&k, &z).unwrap(), p.eval(&k, &z));
    }
}

#[test]
fn skew_encoding_round_trips() {
    let fq = Fq::new(3).unwrap();
    let k = RatField::new(fq.clone());
    let f = SkewPoly::new(&k, vec![k.t(), k.zero(), k.inv(&k.t()).unwrap()]);
    let s = f.encode(&k);
    let g = SkewPoly::parse(&k, &s, |x| RatF::parse(&fq, x)).unwrap();
    assert_eq!(f, g);
}

#[test]
fn dependent_basis_is_rejected() {
    let k = RatField::new(Fq::new(2).unwrap());
    let t = k.t();
    assert_eq!(
        subspace_poly(&k, &[t.clone(), t]).unwrap_err(),
        Error::NotASubspace
    );
}
