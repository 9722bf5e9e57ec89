//! Seeded randomized properties of the rewriting engine on the reference
//! table, 200 cases each.

use bialgebra_core::dataset::builtin;
use bialgebra_core::document::Settings;
use bialgebra_core::hopf::HopfPresentation;
use bialgebra_core::nc::{normalize_randomized, series_apply, NCPoly, Normalizer, SeriesFn, Trunc};
use bialgebra_core::{Monomial, ParamPoly, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: usize = 200;

fn presentation() -> HopfPresentation {
    let doc = builtin("paper-corrected").unwrap();
    doc.presentation(doc.config(Settings::default())).unwrap()
}

fn scalar(rng: &mut impl Rng) -> Scalar {
    let re = Scalar::from_frac(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    let im = Scalar::from_int(rng.gen_range(-1..=1));
    let s = &re + &(&im * &Scalar::i());
    if s.is_zero() {
        Scalar::one()
    } else {
        s
    }
}

fn monomial(rng: &mut impl Rng, nparams: usize, min: u32, max: u32) -> Monomial {
    let deg = rng.gen_range(min..=max);
    let mut m = Monomial::one();
    for _ in 0..deg {
        m = m.mul(&Monomial::var(rng.gen_range(0..nparams)));
    }
    m
}

/// 1 to 3 terms, words of length up to `len` over `ngens` generators.
fn random_poly(rng: &mut impl Rng, tr: Trunc, ngens: u8, len: usize) -> NCPoly {
    let mut p = NCPoly::zero(tr);
    for _ in 0..rng.gen_range(1..=3) {
        let l = rng.gen_range(0..=len);
        let w: Vec<u8> = (0..l).map(|_| rng.gen_range(0..ngens)).collect();
        let c = ParamPoly::term(monomial(rng, 4, 0, 2), scalar(rng), tr.order);
        p.add_assign(&NCPoly::word(w, c, tr));
    }
    p
}

fn same(a: &NCPoly, b: &NCPoly) -> bool {
    a.sub(b).is_zero()
}

#[test]
fn normalize_is_idempotent() {
    let h = presentation();
    let nf = Normalizer::new(h.table());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..CASES {
        let p = random_poly(&mut rng, h.trunc(), 6, 4);
        let once = nf.normalize(&p).unwrap();
        assert!(once.is_sorted(), "case {case}");
        assert!(same(&nf.normalize(&once).unwrap(), &once), "case {case}");
    }
}

#[test]
fn normalize_respects_products() {
    let h = presentation();
    let nf = Normalizer::new(h.table());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..CASES {
        let a = random_poly(&mut rng, h.trunc(), 6, 2);
        let b = random_poly(&mut rng, h.trunc(), 6, 2);
        let direct = nf.normalize(&a.mul(&b).unwrap()).unwrap();
        let split = nf.mul(&nf.normalize(&a).unwrap(), &nf.normalize(&b).unwrap()).unwrap();
        assert!(same(&direct, &split), "case {case}");
    }
}

#[test]
fn rewriting_order_does_not_matter() {
    let h = presentation();
    let nf = Normalizer::new(h.table());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..CASES {
        let p = random_poly(&mut rng, h.trunc(), 6, 4);
        let a = nf.normalize(&p).unwrap();
        let b = normalize_randomized(h.table(), &p, &mut rng).unwrap();
        assert!(same(&a, &b), "case {case}");
    }
}

/// Images drawn from `{0, p, 2p, q}`: every image has no constant term, so
/// the substituted table stays contracting.
#[test]
fn specialization_commutes_with_normalize() {
    let h = presentation();
    let t = h.table();
    let tr = t.trunc();
    let nf = Normalizer::new(t);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let one = Monomial::one();
    for case in 0..CASES {
        let images: Vec<(ParamPoly, Monomial)> = (0..4)
            .map(|k| {
                let v = match rng.gen_range(0..4) {
                    0 => ParamPoly::zero(tr.order),
                    1 => ParamPoly::var(k, tr.order),
                    2 => ParamPoly::var(k, tr.order).scale(&Scalar::from_int(2)),
                    _ => ParamPoly::var(rng.gen_range(0..4), tr.order),
                };
                (v, one)
            })
            .collect();
        let st = t.substitute(&images, t.params().clone()).unwrap();
        let snf = Normalizer::new(&st);
        let p = random_poly(&mut rng, tr, 6, 3);
        let a = snf.normalize(&p.substitute(&images, tr).unwrap()).unwrap();
        let b = nf.normalize(&p).unwrap().substitute(&images, tr).unwrap();
        assert!(same(&a, &b), "case {case}");
    }
}

/// Arguments are polynomials in a single generator, so all powers commute.
#[test]
fn series_identities_hold_at_truncation_order() {
    let tr = Trunc::new(6, 40);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..CASES {
        let g: u8 = rng.gen_range(0..6);
        let mut arg = NCPoly::zero(tr);
        for _ in 0..rng.gen_range(1..=3) {
            let c = ParamPoly::term(monomial(&mut rng, 4, 1, 2), scalar(&mut rng), tr.order);
            arg.add_assign(&NCPoly::word(vec![g; rng.gen_range(1..=2)], c, tr));
        }
        let f = |k, a: &NCPoly| series_apply(k, a).unwrap();
        let ch = f(SeriesFn::Cosh, &arg);
        let sh = f(SeriesFn::Sinh, &arg);
        let diff = ch.mul(&ch).unwrap().sub(&sh.mul(&sh).unwrap());
        assert!(same(&diff, &NCPoly::one(tr)), "cosh/sinh case {case}");
        let e = f(SeriesFn::Exp, &arg).mul(&f(SeriesFn::Exp, &arg.neg())).unwrap();
        assert!(same(&e, &NCPoly::one(tr)), "exp case {case}");
    }
}
