//! Hopf-axiom checks on the reference presentation and on perturbed copies.

use std::time::Instant;

use bialgebra_core::dataset::{builtin, specialization_fixtures};
use bialgebra_core::document::{Config, InputDocument, Settings};
use bialgebra_core::hopf::{
    class_f_check, coassociativity_defects, coproduct_hom_defect, coproduct_hom_defects,
    counit_defects, jacobi_report, solve_antipode, specialize, Antipode, HopfPresentation,
};
use bialgebra_core::nc::{parse_tensor, NCPoly, Normalizer, ParseContext, RelationTable, Trunc};
use bialgebra_core::{Basis, Error, Monomial, ParamPoly, ParamSpace, Scalar};

fn doc() -> (InputDocument, Config) {
    let d = builtin("paper-corrected").unwrap();
    let cfg = d.config(Settings::default());
    (d, cfg)
}

fn reference() -> HopfPresentation {
    let (d, cfg) = doc();
    d.presentation(cfg).unwrap()
}

/// Left factor of `Δp_y` with the exponent sign reversed.
fn wrong_p_y_coproduct() -> HopfPresentation {
    let (mut d, cfg) = doc();
    let p = d.presentation.as_mut().unwrap();
    p.coproducts.insert(
        "p_y".into(),
        "exp((z2/2)*p_x) (x) p_y + p_y (x) exp((z2/2)*p_x)".into(),
    );
    d.presentation(cfg).unwrap()
}

fn gen(h: &HopfPresentation, name: &str) -> usize {
    h.basis().index(name).unwrap()
}

#[test]
fn reference_presentation_satisfies_every_axiom() {
    let start = Instant::now();
    let h = reference();
    assert!(jacobi_report(&h).unwrap().pass);
    let hom = coproduct_hom_defect(&h).unwrap();
    assert!(hom.pass);
    assert_eq!(hom.locations_checked, 15);
    let co = coassociativity_defects(&h).unwrap();
    assert_eq!(co.len(), 6);
    assert!(co.iter().all(|(_, d)| d.is_zero()));
    assert!(counit_defects(&h).iter().all(|(_, l, r)| l.is_zero() && r.is_zero()));
    let (s, rep) = solve_antipode(&h).unwrap();
    assert!(rep.pass);
    assert!(class_f_check(&h, &s).unwrap().pass);
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn primitive_antipodes_are_minus_identity() {
    let h = reference();
    let (s, _) = solve_antipode(&h).unwrap();
    let tr = h.trunc();
    for name in ["p_x", "l_z"] {
        let g = gen(&h, name);
        assert_eq!(s[g], NCPoly::gen(g, tr).neg(), "{name}");
    }
}

/// `S` must respect the relations: `S(b)S(a) - S(a)S(b) = S(rhs of [a,b])`
/// with `S` extended anti-multiplicatively. The solver never imposes this.
#[test]
fn antipode_is_well_defined_on_the_quotient() {
    let h = reference();
    let (s, _) = solve_antipode(&h).unwrap();
    let nf = Normalizer::new(h.table());
    let ant = Antipode::new(&nf, s.clone());
    for (&(j, i), rhs) in h.table().entries() {
        let (sj, si) = (&s[j as usize], &s[i as usize]);
        let lhs = nf.mul(si, sj).unwrap().sub(&nf.mul(sj, si).unwrap());
        let mut srhs = NCPoly::zero(h.trunc());
        for (w, c) in rhs.terms() {
            srhs.add_assign(&ant.anti(w).unwrap().scale_poly(c));
        }
        let d = lhs.sub(&srhs);
        assert!(d.is_zero(), "{}: {}", h.table().label(j as usize, i as usize), d.display(h.basis(), h.params()));
    }
}

#[test]
fn cocommutative_commutative_point_has_minus_identity_antipode() {
    let h = reference();
    let zero: Vec<(String, String)> =
        ["z1", "t", "z2", "h"].iter().map(|p| (p.to_string(), "0".to_string())).collect();
    let s0 = specialize(&h, &zero, 2).unwrap();
    assert_eq!(s0.params().len(), 0);
    let (s, _) = solve_antipode(&s0).unwrap();
    for (g, v) in s.iter().enumerate() {
        assert_eq!(*v, NCPoly::gen(g, s0.trunc()).neg());
    }
}

#[test]
fn wrong_coproduct_is_localized() {
    let h = wrong_p_y_coproduct();
    let rep = coproduct_hom_defect(&h).unwrap();
    assert!(!rep.pass);
    let bad: Vec<_> = coproduct_hom_defects(&h)
        .unwrap()
        .into_iter()
        .filter(|(_, d)| !d.is_zero())
        .map(|((j, i), _)| h.table().label(j, i))
        .collect();
    assert!(bad.contains(&"p_z,p_x".to_string()), "{bad:?}");
    let locs: Vec<_> = rep.defects.iter().map(|d| d.location.as_str()).collect();
    assert!(locs.iter().any(|l| l.contains("p_z,p_x")), "{locs:?}");
    for d in &rep.defects {
        assert!(!d.monomials.is_empty());
        assert!(d.monomials.iter().all(|m| m.contains("z2")), "{:?}", d.monomials);
    }
}

#[test]
fn defects_shrink_with_the_order() {
    let h = reference();
    for n in [2, 3, 4] {
        let low = h.with_order(n).unwrap();
        assert!(jacobi_report(&low).unwrap().pass, "order {n}");
        assert!(coproduct_hom_defect(&low).unwrap().pass, "order {n}");
    }
}

#[test]
fn boundary_specializations_match_fixtures() {
    let (_, cfg) = doc();
    let h = reference();
    let fx = specialization_fixtures();
    assert_eq!(fx.len(), 6);
    for f in fx {
        let s = specialize(&h, &f.assignments(), cfg.slack).unwrap();
        let rep = f.check(&s, cfg.slack).unwrap();
        assert!(rep.pass, "{rep}");
    }
}

fn assign(v: &[(&str, &str)]) -> Vec<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn assert_same_presentation(a: &HopfPresentation, b: &HopfPresentation) {
    assert_eq!(a.params(), b.params());
    let n = a.basis().len();
    for j in 0..n {
        for i in 0..j {
            assert!(a.table().bracket(j, i).sub(&b.table().bracket(j, i)).is_zero());
        }
        assert!(a.coproduct(j).sub(b.coproduct(j)).is_zero());
    }
}

#[test]
fn specializations_chain() {
    let h = reference();
    let diag = specialize(&h, &assign(&[("z1", "z"), ("z2", "z")]), 2).unwrap();
    let chained = specialize(&diag, &assign(&[("t", "0")]), 2).unwrap();
    let direct = specialize(&h, &assign(&[("t", "0"), ("z1", "z"), ("z2", "z")]), 2).unwrap();
    assert_same_presentation(&chained, &direct);
}

/// `h -> 0` applied to the defects equals the defects of the `h = 0`
/// presentation, on a presentation whose defects are nonzero.
#[test]
fn specialization_commutes_with_hom_defect() {
    let h = wrong_p_y_coproduct();
    let tr = h.trunc();
    let spec = specialize(&h, &assign(&[("h", "0")]), 2).unwrap();
    assert_eq!(spec.params().names(), ["z1", "t", "z2"]);
    let one = Monomial::one();
    let images = vec![
        (ParamPoly::var(0, tr.order), one),
        (ParamPoly::var(1, tr.order), one),
        (ParamPoly::var(2, tr.order), one),
        (ParamPoly::zero(tr.order), one),
    ];
    let before = coproduct_hom_defects(&h).unwrap();
    let after = coproduct_hom_defects(&spec).unwrap();
    assert!(after.iter().any(|(_, d)| !d.is_zero()));
    for ((k1, d1), (k2, d2)) in before.iter().zip(after.iter()) {
        assert_eq!(k1, k2);
        assert!(d1.substitute(&images, tr).unwrap().sub(d2).is_zero());
    }
}

/// Three generators with `[y, x] = t y`; `Δz` carries the mixed word `xy`,
/// where the multiplicative and anti-multiplicative extensions differ.
fn mixed_word_presentation() -> HopfPresentation {
    let basis = Basis::new(&["x", "y", "z"]).unwrap();
    let params = ParamSpace::new(&["t"]).unwrap();
    let tr = Trunc::new(3, 8);
    let rel = vec![((1, 0), NCPoly::word(vec![1], ParamPoly::var(0, 3), tr))];
    let table = RelationTable::new(basis.clone(), params.clone(), tr, rel).unwrap();
    let ctx = ParseContext { basis: &basis, params: &params, order: 3, slack: 0, cap: 8 };
    let cops = [
        "x (x) 1 + 1 (x) x",
        "y (x) 1 + 1 (x) y",
        "z (x) 1 + 1 (x) z + t*x*y (x) z",
    ]
    .iter()
    .map(|s| parse_tensor(s, &ctx).unwrap())
    .collect();
    HopfPresentation::new(table, cops, vec![Scalar::zero(); 3]).unwrap()
}

#[test]
fn class_f_violation_on_mixed_word() {
    let h = mixed_word_presentation();
    let tr = h.trunc();
    let s: Vec<NCPoly> = (0..3).map(|g| NCPoly::gen(g, tr).neg()).collect();
    let rep = class_f_check(&h, &s).unwrap();
    assert!(!rep.pass);
    assert!(rep.defects.iter().all(|d| d.location.contains("generator z")));
}

#[test]
fn missing_antipode_is_reported() {
    let h = mixed_word_presentation();
    match solve_antipode(&h) {
        Err(Error::NoAntipode { generator, order }) => {
            assert!(generator.starts_with('z'), "{generator}");
            assert!(order >= 1);
        }
        other => panic!("expected NoAntipode, got {:?}", other.map(|_| ())),
    }
}
