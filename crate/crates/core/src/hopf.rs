//! Hopf-axiom defects of a parameter-dependent presentation: coproduct
//! homomorphism, coassociativity, counit, antipode and the class-ℱ
//! condition, plus specialization of parameters.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::nc::{
    identifiers, parse_fraction, presentation_jacobi_defect, CoproductMap, NCPoly, Normalizer,
    ParseContext, RelationTable, TensorPoly, Trunc, Word,
};
use crate::poly::{Monomial, ParamPoly, ParamSpace};
use crate::report::{nc_defect, tensor_defect, CheckReport};
use crate::scalar::Scalar;
use crate::tensor::Basis;

/// Generators, commutator table, coproduct and counit on generators.
///
/// Invariant: no coproduct has a `1 ⊗ 1` component.
#[derive(Clone, Debug)]
pub struct HopfPresentation {
    table: RelationTable,
    coproducts: Vec<TensorPoly>,
    counit: Vec<Scalar>,
}

impl HopfPresentation {
    pub fn new(
        table: RelationTable,
        coproducts: Vec<TensorPoly>,
        counit: Vec<Scalar>,
    ) -> Result<HopfPresentation> {
        let n = table.basis().len();
        if coproducts.len() != n || counit.len() != n {
            return Err(Error::Input(format!(
                "{n} generators but {} coproducts and {} counit values",
                coproducts.len(),
                counit.len()
            )));
        }
        let nf = Normalizer::new(&table);
        let mut cops = Vec::with_capacity(n);
        for (g, d) in coproducts.iter().enumerate() {
            if d.arity() != 2 {
                return Err(Error::Input("coproducts live in the tensor square".into()));
            }
            if !d.coeff(&[Vec::new(), Vec::new()]).is_zero() {
                return Err(Error::Input(format!(
                    "coproduct of {} has a 1 (x) 1 component",
                    table.basis().name(g)
                )));
            }
            cops.push(nf.normalize_tensor(d)?);
        }
        drop(nf);
        Ok(HopfPresentation { table, coproducts: cops, counit })
    }

    pub fn table(&self) -> &RelationTable {
        &self.table
    }

    pub fn basis(&self) -> &Basis {
        self.table.basis()
    }

    pub fn params(&self) -> &ParamSpace {
        self.table.params()
    }

    pub fn trunc(&self) -> Trunc {
        self.table.trunc()
    }

    pub fn coproduct(&self, g: usize) -> &TensorPoly {
        &self.coproducts[g]
    }

    pub fn coproducts(&self) -> &[TensorPoly] {
        &self.coproducts
    }

    pub fn counit(&self, g: usize) -> &Scalar {
        &self.counit[g]
    }

    pub fn counits(&self) -> &[Scalar] {
        &self.counit
    }

    fn name(&self, g: usize) -> &str {
        self.basis().name(g)
    }

    /// `ε` on a word: multiplicative, `ε(1) = 1`.
    pub fn counit_word(&self, w: &[u8]) -> Scalar {
        w.iter().fold(Scalar::one(), |acc, &g| &acc * &self.counit[g as usize])
    }

    /// Re-truncates everything at a lower order.
    pub fn with_order(&self, order: u32) -> Result<HopfPresentation> {
        let table = self.table.with_order(order)?;
        let cops = self.coproducts.iter().map(|d| d.with_order(order)).collect();
        HopfPresentation::new(table, cops, self.counit.clone())
    }
}

/// `NF([x_a, x_b])` for every generator triple, as a report.
pub fn jacobi_report(h: &HopfPresentation) -> Result<CheckReport> {
    let mut r = CheckReport::new("presentation jacobi");
    for ((a, b, c), d) in presentation_jacobi_defect(h.table())? {
        let loc = format!("triple ({},{},{})", h.name(a), h.name(b), h.name(c));
        r.push(nc_defect(loc, &d, h.basis(), h.params()));
    }
    Ok(r)
}

/// `Δ([x_j, x_i]) - [Δx_j, Δx_i]` for every pair `j > i`.
pub fn coproduct_hom_defects(h: &HopfPresentation) -> Result<Vec<((usize, usize), TensorPoly)>> {
    let nf = Normalizer::new(h.table());
    let cop = CoproductMap::new(&nf, h.coproducts.clone())?;
    let n = h.basis().len();
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..j {
            let rhs = h.table().bracket(j, i);
            let lhs = cop.apply(&rhs)?;
            let (dj, di) = (cop.generator(j), cop.generator(i));
            let comm = nf.mul_tensor(dj, di)?.sub(&nf.mul_tensor(di, dj)?);
            out.push(((j, i), lhs.sub(&comm)));
        }
    }
    Ok(out)
}

pub fn coproduct_hom_defect(h: &HopfPresentation) -> Result<CheckReport> {
    let mut r = CheckReport::new("coproduct homomorphism");
    for ((j, i), d) in coproduct_hom_defects(h)? {
        let loc = format!("relation [{},{}]", h.name(j), h.name(i));
        r.push(tensor_defect(loc, &d, h.basis(), h.params()));
    }
    Ok(r)
}

/// Applies `Δ` to tensor factor `k` of a tensor square, giving a cube.
fn expand_factor(t: &TensorPoly, k: usize, cop: &CoproductMap) -> Result<TensorPoly> {
    let mut out = TensorPoly::zero(3, t.trunc());
    for (ws, c) in t.terms() {
        let d = cop.of_word(&ws[k])?;
        for (ds, e) in d.terms() {
            let ce = c.mul(e);
            if ce.is_zero() {
                continue;
            }
            let cube = if k == 0 {
                vec![ds[0].clone(), ds[1].clone(), ws[1].clone()]
            } else {
                vec![ws[0].clone(), ds[0].clone(), ds[1].clone()]
            };
            out.add_term(cube, ce, "coassociativity")?;
        }
    }
    Ok(out)
}

/// `(Δ⊗id)Δ(g) - (id⊗Δ)Δ(g)` for every generator.
pub fn coassociativity_defects(h: &HopfPresentation) -> Result<Vec<(usize, TensorPoly)>> {
    let nf = Normalizer::new(h.table());
    let cop = CoproductMap::new(&nf, h.coproducts.clone())?;
    let mut out = Vec::new();
    for g in 0..h.basis().len() {
        let d = cop.generator(g);
        let l = expand_factor(d, 0, &cop)?;
        let r = expand_factor(d, 1, &cop)?;
        out.push((g, l.sub(&r)));
    }
    Ok(out)
}

pub fn coassociativity_defect(h: &HopfPresentation) -> Result<CheckReport> {
    let mut r = CheckReport::new("coassociativity");
    for (g, d) in coassociativity_defects(h)? {
        r.push(tensor_defect(format!("generator {}", h.name(g)), &d, h.basis(), h.params()));
    }
    Ok(r)
}

/// `((ε⊗id)Δg - g, (id⊗ε)Δg - g)` for every generator.
pub fn counit_defects(h: &HopfPresentation) -> Vec<(usize, NCPoly, NCPoly)> {
    let tr = h.trunc();
    (0..h.basis().len())
        .map(|g| {
            let mut left = NCPoly::zero(tr);
            let mut right = NCPoly::zero(tr);
            for (ws, c) in h.coproducts[g].terms() {
                let el = h.counit_word(&ws[0]);
                if !el.is_zero() {
                    left.add_term_unchecked(ws[1].clone(), c.scale(&el));
                }
                let er = h.counit_word(&ws[1]);
                if !er.is_zero() {
                    right.add_term_unchecked(ws[0].clone(), c.scale(&er));
                }
            }
            let x = NCPoly::gen(g, tr);
            (g, left.sub(&x), right.sub(&x))
        })
        .collect()
}

pub fn counit_defect(h: &HopfPresentation) -> CheckReport {
    let mut r = CheckReport::new("counit");
    for (g, l, rt) in counit_defects(h) {
        let name = h.name(g);
        r.push(nc_defect(format!("(eps (x) id) Delta {name}"), &l, h.basis(), h.params()));
        r.push(nc_defect(format!("(id (x) eps) Delta {name}"), &rt, h.basis(), h.params()));
    }
    r
}

/// Antipode on generators with its extensions to words.
pub struct Antipode<'n, 'a> {
    nf: &'n Normalizer<'a>,
    gens: Vec<NCPoly>,
    anti: RefCell<HashMap<Word, NCPoly>>,
}

impl<'n, 'a> Antipode<'n, 'a> {
    pub fn new(nf: &'n Normalizer<'a>, gens: Vec<NCPoly>) -> Self {
        Antipode { nf, gens, anti: RefCell::new(HashMap::new()) }
    }

    pub fn generators(&self) -> &[NCPoly] {
        &self.gens
    }

    /// Anti-multiplicative extension: `S(ab) = S(b) S(a)`, `S(1) = 1`.
    pub fn anti(&self, w: &[u8]) -> Result<NCPoly> {
        if let Some(r) = self.anti.borrow().get(w) {
            return Ok(r.clone());
        }
        let r = match w.len() {
            0 => NCPoly::one(self.nf.trunc()),
            1 => self.gens[w[0] as usize].clone(),
            _ => {
                let rest = self.anti(&w[1..])?;
                self.nf.mul(&rest, &self.gens[w[0] as usize])?
            }
        };
        self.anti.borrow_mut().insert(w.to_vec(), r.clone());
        Ok(r)
    }

    /// Homomorphic extension `S↑`: `S↑(ab) = S(a) S(b)`, `S↑(1) = 1`.
    pub fn hom(&self, w: &[u8]) -> Result<NCPoly> {
        let mut acc = NCPoly::one(self.nf.trunc());
        for &g in w {
            acc = self.nf.mul(&acc, &self.gens[g as usize])?;
        }
        Ok(acc)
    }
}

/// `m(S⊗id)Δg - ε(g)` and `m(id⊗S)Δg - ε(g)` for every generator.
fn antipode_residuals(
    h: &HopfPresentation,
    s: &Antipode,
) -> Result<Vec<(usize, NCPoly, NCPoly)>> {
    let nf = s.nf;
    let tr = h.trunc();
    let mut out = Vec::new();
    for g in 0..h.basis().len() {
        let eps = NCPoly::constant(ParamPoly::constant(h.counit[g].clone(), tr.order), tr);
        let mut l = eps.neg();
        let mut r = eps.neg();
        for (ws, c) in h.coproducts[g].terms() {
            let w0 = NCPoly::word(ws[0].clone(), ParamPoly::one(tr.order), tr);
            let w1 = NCPoly::word(ws[1].clone(), ParamPoly::one(tr.order), tr);
            l.add_assign(&nf.mul(&s.anti(&ws[0])?, &w1)?.scale_poly(c));
            r.add_assign(&nf.mul(&w0, &s.anti(&ws[1])?)?.scale_poly(c));
        }
        out.push((g, l, r));
    }
    Ok(out)
}

/// Solves `m(S⊗id)Δg = ε(g)` order by order in parameter degree, starting
/// from `S(g) = -g`, then checks both antipode equations. Fails with the
/// first parameter order where a residual survives.
pub fn solve_antipode(h: &HopfPresentation) -> Result<(Vec<NCPoly>, CheckReport)> {
    let nf = Normalizer::new(h.table());
    let tr = h.trunc();
    let n = h.basis().len();
    let mut gens: Vec<NCPoly> = (0..n).map(|g| NCPoly::gen(g, tr).neg()).collect();
    for _ in 0..=tr.order {
        let s = Antipode::new(&nf, gens.clone());
        let mut next = Vec::with_capacity(n);
        for g in 0..n {
            // S(g) = ε(g) - sum over Δg - g⊗1 of S(a) b
            let mut v = NCPoly::constant(ParamPoly::constant(h.counit[g].clone(), tr.order), tr);
            for (ws, c) in h.coproducts[g].terms() {
                if ws[0] == [g as u8] && ws[1].is_empty() {
                    let rest = c.sub(&ParamPoly::one(tr.order));
                    if rest.is_zero() {
                        continue;
                    }
                    let b = NCPoly::one(tr);
                    v.sub_assign(&nf.mul(&s.anti(&ws[0])?, &b)?.scale_poly(&rest));
                    continue;
                }
                let b = NCPoly::word(ws[1].clone(), ParamPoly::one(tr.order), tr);
                v.sub_assign(&nf.mul(&s.anti(&ws[0])?, &b)?.scale_poly(c));
            }
            next.push(v);
        }
        let done = next == gens;
        gens = next;
        if done {
            break;
        }
    }
    let s = Antipode::new(&nf, gens.clone());
    let mut rep = CheckReport::new("antipode");
    for (g, l, r) in antipode_residuals(h, &s)? {
        for (side, res) in [("m(S (x) id)", &l), ("m(id (x) S)", &r)] {
            if let Some(d) = res.min_param_degree() {
                return Err(Error::NoAntipode { generator: format!("{} via {side}", h.name(g)), order: d });
            }
        }
        rep.push(None);
    }
    for (g, v) in gens.iter().enumerate() {
        rep.info.push(format!("S({}) = {}", h.name(g), v.display(h.basis(), h.params())));
    }
    Ok((gens, rep))
}

/// `(S↑⊗id)Δg - (S⊗id)Δg` and `(id⊗S↑)Δg - (id⊗S)Δg` for every generator,
/// with `S` the anti-multiplicative and `S↑` the multiplicative extension
/// of the same values on generators.
pub fn class_f_defects(
    h: &HopfPresentation,
    antipode: &[NCPoly],
) -> Result<Vec<(usize, TensorPoly, TensorPoly)>> {
    let nf = Normalizer::new(h.table());
    let s = Antipode::new(&nf, antipode.to_vec());
    let mut out = Vec::new();
    for g in 0..h.basis().len() {
        let d = &h.coproducts[g];
        let left = d.map_factor(0, |w| Ok(s.hom(w)?.sub(&s.anti(w)?)))?;
        let right = d.map_factor(1, |w| Ok(s.hom(w)?.sub(&s.anti(w)?)))?;
        out.push((g, left, right));
    }
    Ok(out)
}

pub fn class_f_check(h: &HopfPresentation, antipode: &[NCPoly]) -> Result<CheckReport> {
    let mut r = CheckReport::new("class F");
    for (g, l, rt) in class_f_defects(h, antipode)? {
        let name = h.name(g);
        r.push(tensor_defect(format!("left, generator {name}"), &l, h.basis(), h.params()));
        r.push(tensor_defect(format!("right, generator {name}"), &rt, h.basis(), h.params()));
    }
    Ok(r)
}

/// Parameter list after an assignment: parameters left unassigned, then
/// new names in order of first appearance in the values.
pub fn specialized_params(
    params: &ParamSpace,
    basis: &Basis,
    assignments: &[(String, String)],
) -> Result<ParamSpace> {
    for (p, _) in assignments {
        if params.index(p).is_none() {
            return Err(Error::UnknownIdentifier(p.clone()));
        }
    }
    let assigned = |p: &str| assignments.iter().any(|(q, v)| q == p && v.trim() != p);
    let mut names: Vec<String> =
        params.names().iter().filter(|p| !assigned(p)).cloned().collect();
    for (_, v) in assignments {
        for id in identifiers(v)? {
            if basis.index(&id).is_some() {
                return Err(Error::Input(format!("generator `{id}` in a parameter value")));
            }
            if !names.contains(&id) {
                names.push(id);
            }
        }
    }
    ParamSpace::new(&names)
}

/// Substitutes parameter values (scalars, parameters, or expressions over
/// old and new parameters) everywhere; `p=p` is a no-op. The relation
/// table is rebuilt, so the contracting property is re-checked.
pub fn specialize(
    h: &HopfPresentation,
    assignments: &[(String, String)],
    slack: u32,
) -> Result<HopfPresentation> {
    let target = specialized_params(h.params(), h.basis(), assignments)?;
    let tr = h.trunc();
    let ctx = ParseContext { basis: h.basis(), params: &target, order: tr.order, slack, cap: tr.cap };
    let mut images = Vec::with_capacity(h.params().len());
    for p in h.params().names() {
        let img = match assignments.iter().rev().find(|(q, _)| q == p) {
            Some((_, v)) => parse_fraction(v, &ctx)?,
            None => {
                let idx = target.index(p).expect("unassigned parameter is kept");
                (ParamPoly::var(idx, tr.order), Monomial::one())
            }
        };
        images.push(img);
    }
    let table = h.table().substitute(&images, target)?;
    let cops = h
        .coproducts
        .iter()
        .map(|d| d.substitute(&images, tr))
        .collect::<Result<Vec<_>>>()?;
    HopfPresentation::new(table, cops, h.counit.clone())
}

/// Compares `h` with expected brackets (any orientation; unlisted pairs
/// are zero) and coproducts (unlisted generators are primitive). Expected
/// values are normal-ordered with the table of `h` first.
pub fn compare_presentation(
    h: &HopfPresentation,
    brackets: &[((usize, usize), NCPoly)],
    coproducts: &[(usize, TensorPoly)],
) -> Result<CheckReport> {
    let nf = Normalizer::new(h.table());
    let tr = h.trunc();
    let n = h.basis().len();
    let mut r = CheckReport::new("presentation comparison");
    for j in 0..n {
        for i in 0..j {
            let mut e = NCPoly::zero(tr);
            for ((a, b), v) in brackets {
                if (*a, *b) == (j, i) {
                    e.add_assign(v);
                } else if (*a, *b) == (i, j) {
                    e.sub_assign(v);
                }
            }
            let d = h.table().bracket(j, i).sub(&nf.normalize(&e)?);
            let loc = format!("[{},{}]", h.name(j), h.name(i));
            r.push(nc_defect(loc, &d, h.basis(), h.params()));
        }
    }
    for g in 0..n {
        let e = match coproducts.iter().find(|(k, _)| *k == g) {
            Some((_, v)) => nf.normalize_tensor(v)?,
            None => {
                let x = NCPoly::gen(g, tr);
                let one = NCPoly::one(tr);
                TensorPoly::product(&[&x, &one]).add(&TensorPoly::product(&[&one, &x]))
            }
        };
        let d = h.coproduct(g).sub(&e);
        r.push(tensor_defect(format!("Delta {}", h.name(g)), &d, h.basis(), h.params()));
    }
    Ok(r)
}
