//! Truncated noncommutative polynomials over a generator alphabet, and
//! their tensor squares and cubes.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{fmt_signed_term, join_signed, Monomial, ParamPoly, ParamSpace};
use crate::scalar::Scalar;
use crate::tensor::Basis;

/// A word in the generators; the empty word is the unit.
pub type Word = Vec<u8>;

/// Truncation context: parameter order and word-length cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trunc {
    pub order: u32,
    pub cap: usize,
}

impl Trunc {
    pub fn new(order: u32, cap: usize) -> Self {
        Trunc { order, cap }
    }

    pub fn with_order(self, order: u32) -> Self {
        Trunc { order, ..self }
    }
}

fn word_key(w: &Word) -> (usize, &Word) {
    (w.len(), w)
}

pub(crate) fn fmt_word(w: &[u8], basis: &Basis) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut k = 0;
    while k < w.len() {
        let mut run = 1;
        while k + run < w.len() && w[k + run] == w[k] {
            run += 1;
        }
        let name = basis.name(w[k] as usize);
        if run == 1 {
            parts.push(name.to_string());
        } else {
            parts.push(format!("{name}^{run}"));
        }
        k += run;
    }
    parts.join("*")
}

/// Element of the free algebra modulo parameter degree > `order`.
/// Invariant: no zero coefficient, no word longer than `cap`.
#[derive(Clone, PartialEq, Eq)]
pub struct NCPoly {
    trunc: Trunc,
    terms: BTreeMap<Word, ParamPoly>,
}

impl NCPoly {
    pub fn zero(trunc: Trunc) -> Self {
        NCPoly { trunc, terms: BTreeMap::new() }
    }

    pub fn one(trunc: Trunc) -> Self {
        NCPoly::constant(ParamPoly::one(trunc.order), trunc)
    }

    pub fn constant(c: ParamPoly, trunc: Trunc) -> Self {
        let mut r = NCPoly::zero(trunc);
        r.add_term_unchecked(Vec::new(), c);
        r
    }

    pub fn gen(g: usize, trunc: Trunc) -> Self {
        NCPoly::word(vec![g as u8], ParamPoly::one(trunc.order), trunc)
    }

    pub fn word(w: Word, c: ParamPoly, trunc: Trunc) -> Self {
        let mut r = NCPoly::zero(trunc);
        r.add_term_unchecked(w, c);
        r
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn order(&self) -> u32 {
        self.trunc.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> ParamPoly {
        self.terms.get(w).cloned().unwrap_or_else(|| ParamPoly::zero(self.trunc.order))
    }

    /// Adds `c * w`; caller guarantees `w.len() <= cap`.
    pub(crate) fn add_term_unchecked(&mut self, w: Word, c: ParamPoly) {
        let c = c.with_order(self.trunc.order);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_term(&mut self, w: Word, c: ParamPoly, what: &str) -> Result<()> {
        if w.len() > self.trunc.cap && !c.with_order(self.trunc.order).is_zero() {
            return Err(Error::CapExceeded { cap: self.trunc.cap, relation: what.to_string() });
        }
        self.add_term_unchecked(w, c);
        Ok(())
    }

    pub fn add_assign(&mut self, o: &NCPoly) {
        for (w, c) in &o.terms {
            self.add_term_unchecked(w.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, o: &NCPoly) {
        for (w, c) in &o.terms {
            self.add_term_unchecked(w.clone(), c.neg());
        }
    }

    pub fn add(&self, o: &NCPoly) -> NCPoly {
        let mut r = self.with_order(self.order().min(o.order()));
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &NCPoly) -> NCPoly {
        let mut r = self.with_order(self.order().min(o.order()));
        r.sub_assign(o);
        r
    }

    pub fn neg(&self) -> NCPoly {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Multiplies every coefficient by a parameter polynomial.
    pub fn scale_poly(&self, f: &ParamPoly) -> NCPoly {
        let mut r = NCPoly::zero(self.trunc.with_order(self.order().min(f.order())));
        for (w, c) in &self.terms {
            r.add_term_unchecked(w.clone(), c.mul(f));
        }
        r
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&ParamPoly) -> ParamPoly) -> NCPoly {
        let mut r = NCPoly::zero(self.trunc);
        for (w, c) in &self.terms {
            r.add_term_unchecked(w.clone(), f(c));
        }
        r
    }

    pub fn try_map_coeffs(
        &self,
        trunc: Trunc,
        mut f: impl FnMut(&ParamPoly) -> Result<ParamPoly>,
    ) -> Result<NCPoly> {
        let mut r = NCPoly::zero(trunc);
        for (w, c) in &self.terms {
            r.add_term_unchecked(w.clone(), f(c)?);
        }
        Ok(r)
    }

    pub fn with_order(&self, order: u32) -> NCPoly {
        let t = self.trunc.with_order(order);
        let mut r = NCPoly::zero(t);
        for (w, c) in &self.terms {
            r.add_term_unchecked(w.clone(), c.with_order(order));
        }
        r
    }

    /// Free (concatenation) product, without normal ordering.
    pub fn mul(&self, o: &NCPoly) -> Result<NCPoly> {
        let t = self.trunc.with_order(self.order().min(o.order()));
        let mut r = NCPoly::zero(t);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let c = c1.mul(c2).with_order(t.order);
                if c.is_zero() {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                r.add_term(w, c, "free product")?;
            }
        }
        Ok(r)
    }

    /// Exact quotient of every coefficient by a parameter monomial.
    pub fn divide_param(&self, m: &Monomial) -> Result<NCPoly> {
        self.try_map_coeffs(self.trunc, |c| {
            c.div_monomial(m).ok_or_else(|| Error::InexactDivision {
                what: "division of a polynomial by a parameter monomial".into(),
            })
        })
    }

    /// Terms whose word has length `k`.
    pub fn part_of_length(&self, k: usize) -> NCPoly {
        let mut r = NCPoly::zero(self.trunc);
        for (w, c) in &self.terms {
            if w.len() == k {
                r.add_term_unchecked(w.clone(), c.clone());
            }
        }
        r
    }

    /// Smallest parameter degree over all coefficients.
    pub fn min_param_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(|c| c.min_degree()).min()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// True when every word is non-decreasing in generator order.
    pub fn is_sorted(&self) -> bool {
        self.terms.keys().all(|w| w.windows(2).all(|p| p[0] <= p[1]))
    }

    pub fn substitute(&self, images: &[(ParamPoly, Monomial)], trunc: Trunc) -> Result<NCPoly> {
        self.try_map_coeffs(trunc, |c| c.substitute_fractions(images, trunc.order))
    }

    /// Coefficient of `p_idx^1` in every term, i.e. the derivative at zero.
    pub fn derivative_at_zero(&self, idx: usize) -> NCPoly {
        self.map_coeffs(|c| c.coefficient_of_power(idx, 1))
    }

    /// Terms in canonical print order: words by length then lexicographic.
    pub fn sorted_terms(&self) -> Vec<(&Word, &ParamPoly)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| word_key(a.0).cmp(&word_key(b.0)));
        v
    }

    pub fn display<'a>(&'a self, basis: &'a Basis, params: &'a ParamSpace) -> DisplayNC<'a> {
        DisplayNC { poly: self, basis, params }
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

pub struct DisplayNC<'a> {
    poly: &'a NCPoly,
    basis: &'a Basis,
    params: &'a ParamSpace,
}

impl fmt::Display for DisplayNC<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = Vec::new();
        for (w, c) in self.poly.sorted_terms() {
            let ws = fmt_word(w, self.basis);
            for (m, s) in c.sorted_terms() {
                out.push(fmt_signed_term(s, &self.params.fmt_monomial(m), &ws));
            }
        }
        write!(f, "{}", join_signed(out))
    }
}

/// Element of the tensor power `H^{⊗ arity}` of the free algebra.
/// Multiplication is factorwise.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorPoly {
    arity: usize,
    trunc: Trunc,
    terms: BTreeMap<Vec<Word>, ParamPoly>,
}

impl TensorPoly {
    pub fn zero(arity: usize, trunc: Trunc) -> Self {
        TensorPoly { arity, trunc, terms: BTreeMap::new() }
    }

    /// `1 ⊗ ... ⊗ 1`.
    pub fn one(arity: usize, trunc: Trunc) -> Self {
        let mut r = TensorPoly::zero(arity, trunc);
        r.add_term_unchecked(vec![Vec::new(); arity], ParamPoly::one(trunc.order));
        r
    }

    /// `a ⊗ b ⊗ ...` of plain polynomials.
    pub fn product(factors: &[&NCPoly]) -> TensorPoly {
        let order = factors.iter().map(|f| f.order()).min().unwrap_or(0);
        let trunc = factors[0].trunc().with_order(order);
        let mut acc: Vec<(Vec<Word>, ParamPoly)> = vec![(Vec::new(), ParamPoly::one(order))];
        for f in factors {
            let mut next = Vec::new();
            for (ws, c) in &acc {
                for (w, d) in f.terms() {
                    let cd = c.mul(d);
                    if cd.is_zero() {
                        continue;
                    }
                    let mut ws2 = ws.clone();
                    ws2.push(w.clone());
                    next.push((ws2, cd));
                }
            }
            acc = next;
        }
        let mut r = TensorPoly::zero(factors.len(), trunc);
        for (ws, c) in acc {
            r.add_term_unchecked(ws, c);
        }
        r
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn order(&self) -> u32 {
        self.trunc.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, ws: &[Word]) -> ParamPoly {
        self.terms.get(ws).cloned().unwrap_or_else(|| ParamPoly::zero(self.trunc.order))
    }

    pub(crate) fn add_term_unchecked(&mut self, ws: Vec<Word>, c: ParamPoly) {
        debug_assert_eq!(ws.len(), self.arity);
        let c = c.with_order(self.trunc.order);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(ws) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_term(&mut self, ws: Vec<Word>, c: ParamPoly, what: &str) -> Result<()> {
        if ws.iter().any(|w| w.len() > self.trunc.cap) && !c.with_order(self.order()).is_zero() {
            return Err(Error::CapExceeded { cap: self.trunc.cap, relation: what.to_string() });
        }
        self.add_term_unchecked(ws, c);
        Ok(())
    }

    pub fn add_assign(&mut self, o: &TensorPoly) {
        debug_assert_eq!(self.arity, o.arity);
        for (ws, c) in &o.terms {
            self.add_term_unchecked(ws.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, o: &TensorPoly) {
        debug_assert_eq!(self.arity, o.arity);
        for (ws, c) in &o.terms {
            self.add_term_unchecked(ws.clone(), c.neg());
        }
    }

    pub fn add(&self, o: &TensorPoly) -> TensorPoly {
        let mut r = self.with_order(self.order().min(o.order()));
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &TensorPoly) -> TensorPoly {
        let mut r = self.with_order(self.order().min(o.order()));
        r.sub_assign(o);
        r
    }

    pub fn neg(&self) -> TensorPoly {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&ParamPoly) -> ParamPoly) -> TensorPoly {
        let mut r = TensorPoly::zero(self.arity, self.trunc);
        for (ws, c) in &self.terms {
            r.add_term_unchecked(ws.clone(), f(c));
        }
        r
    }

    pub fn try_map_coeffs(
        &self,
        trunc: Trunc,
        mut f: impl FnMut(&ParamPoly) -> Result<ParamPoly>,
    ) -> Result<TensorPoly> {
        let mut r = TensorPoly::zero(self.arity, trunc);
        for (ws, c) in &self.terms {
            r.add_term_unchecked(ws.clone(), f(c)?);
        }
        Ok(r)
    }

    pub fn with_order(&self, order: u32) -> TensorPoly {
        let mut r = TensorPoly::zero(self.arity, self.trunc.with_order(order));
        for (ws, c) in &self.terms {
            r.add_term_unchecked(ws.clone(), c.with_order(order));
        }
        r
    }

    /// Factorwise free product.
    pub fn mul(&self, o: &TensorPoly) -> Result<TensorPoly> {
        debug_assert_eq!(self.arity, o.arity);
        let t = self.trunc.with_order(self.order().min(o.order()));
        let mut r = TensorPoly::zero(self.arity, t);
        for (a, c1) in &self.terms {
            for (b, c2) in &o.terms {
                let c = c1.mul(c2).with_order(t.order);
                if c.is_zero() {
                    continue;
                }
                let ws = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| {
                        let mut w = x.clone();
                        w.extend_from_slice(y);
                        w
                    })
                    .collect();
                r.add_term(ws, c, "tensor product")?;
            }
        }
        Ok(r)
    }

    pub fn divide_param(&self, m: &Monomial) -> Result<TensorPoly> {
        self.try_map_coeffs(self.trunc, |c| {
            c.div_monomial(m).ok_or_else(|| Error::InexactDivision {
                what: "division of a tensor by a parameter monomial".into(),
            })
        })
    }

    /// Permutes the tensor factors: factor `k` of the result is factor
    /// `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> TensorPoly {
        let mut r = TensorPoly::zero(self.arity, self.trunc);
        for (ws, c) in &self.terms {
            r.add_term_unchecked(perm.iter().map(|&p| ws[p].clone()).collect(), c.clone());
        }
        r
    }

    /// The flip `a ⊗ b -> b ⊗ a` of a tensor square.
    pub fn swap(&self) -> TensorPoly {
        debug_assert_eq!(self.arity, 2);
        self.permute(&[1, 0])
    }

    /// Keeps the terms whose factor word lengths equal `lens`.
    pub fn part_of_lengths(&self, lens: &[usize]) -> TensorPoly {
        let mut r = TensorPoly::zero(self.arity, self.trunc);
        for (ws, c) in &self.terms {
            if ws.iter().map(|w| w.len()).eq(lens.iter().copied()) {
                r.add_term_unchecked(ws.clone(), c.clone());
            }
        }
        r
    }

    /// Applies a linear map to factor `k`, given on words.
    pub fn map_factor(
        &self,
        k: usize,
        mut f: impl FnMut(&Word) -> Result<NCPoly>,
    ) -> Result<TensorPoly> {
        let mut r = TensorPoly::zero(self.arity, self.trunc);
        for (ws, c) in &self.terms {
            let img = f(&ws[k])?;
            for (w, d) in img.terms() {
                let cd = c.mul(d);
                if cd.is_zero() {
                    continue;
                }
                let mut ws2 = ws.clone();
                ws2[k] = w.clone();
                r.add_term(ws2, cd, "factor map")?;
            }
        }
        Ok(r)
    }

    /// Multiplies all factors together: `m(a ⊗ b) = ab`, without
    /// normal ordering.
    pub fn multiply_out(&self) -> Result<NCPoly> {
        let mut r = NCPoly::zero(self.trunc);
        for (ws, c) in &self.terms {
            r.add_term(ws.concat(), c.clone(), "multiplication map")?;
        }
        Ok(r)
    }

    pub fn substitute(
        &self,
        images: &[(ParamPoly, Monomial)],
        trunc: Trunc,
    ) -> Result<TensorPoly> {
        self.try_map_coeffs(trunc, |c| c.substitute_fractions(images, trunc.order))
    }

    pub fn derivative_at_zero(&self, idx: usize) -> TensorPoly {
        self.map_coeffs(|c| c.coefficient_of_power(idx, 1))
    }

    pub fn sorted_terms(&self) -> Vec<(&Vec<Word>, &ParamPoly)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let ka: Vec<_> = a.0.iter().map(word_key).collect();
            let kb: Vec<_> = b.0.iter().map(word_key).collect();
            ka.cmp(&kb)
        });
        v
    }

    pub fn display<'a>(&'a self, basis: &'a Basis, params: &'a ParamSpace) -> DisplayTensor<'a> {
        DisplayTensor { poly: self, basis, params }
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

pub struct DisplayTensor<'a> {
    poly: &'a TensorPoly,
    basis: &'a Basis,
    params: &'a ParamSpace,
}

impl fmt::Display for DisplayTensor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = Vec::new();
        for (ws, c) in self.poly.sorted_terms() {
            let factors: Vec<String> = ws
                .iter()
                .map(|w| if w.is_empty() { "1".to_string() } else { fmt_word(w, self.basis) })
                .collect();
            let ws = factors.join(" (x) ");
            for (m, s) in c.sorted_terms() {
                out.push(fmt_signed_term(s, &self.params.fmt_monomial(m), &ws));
            }
        }
        write!(f, "{}", join_signed(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: Trunc = Trunc { order: 4, cap: 6 };

    #[test]
    fn free_product_concatenates() {
        let a = NCPoly::gen(0, T);
        let b = NCPoly::gen(1, T);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.coeff(&[0, 1]), ParamPoly::one(4));
        assert_eq!(NCPoly::one(T).mul(&a).unwrap(), a);
    }

    #[test]
    fn coefficients_multiply_and_truncate() {
        let t = NCPoly::constant(ParamPoly::var(0, 4), T);
        let x = t.mul(&NCPoly::gen(2, T)).unwrap();
        let mut p = x.clone();
        for _ in 0..4 {
            p = p.mul(&x).unwrap();
        }
        // t^5 x^5 is beyond order 4
        assert!(p.is_zero());
    }

    #[test]
    fn cap_is_enforced() {
        let x = NCPoly::gen(0, Trunc::new(4, 2));
        let xx = x.mul(&x).unwrap();
        assert!(matches!(xx.mul(&x), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn tensor_product_is_factorwise() {
        let a = NCPoly::gen(0, T);
        let b = NCPoly::gen(1, T);
        let ab = TensorPoly::product(&[&a, &b]);
        let ba = TensorPoly::product(&[&b, &a]);
        let p = ab.mul(&ba).unwrap();
        assert_eq!(p.coeff(&[vec![0, 1], vec![1, 0]]), ParamPoly::one(4));
        assert_eq!(ab.swap(), ba);
    }
}
