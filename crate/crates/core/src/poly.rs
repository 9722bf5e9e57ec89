//! Truncated polynomials in commuting deformation parameters.
//!
//! A [`ParamPoly`] is an element of `Q(i)[p_1, ..., p_n] / (total degree > N)`.
//! Parameter names live in a [`ParamSpace`] owned by the enclosing
//! structure; the polynomial itself only stores exponent vectors.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Maximum number of formal parameters in one computation.
pub const MAX_PARAMS: usize = 8;

/// Exponent vector over the parameters of a [`ParamSpace`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub [u8; MAX_PARAMS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(idx: usize) -> Self {
        let mut e = [0u8; MAX_PARAMS];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, idx: usize) -> u8 {
        self.0[idx]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            *a = a.checked_add(*b).expect("parameter exponent overflow");
        }
        Monomial(e)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, if exact.
    pub fn div_of(&self, o: &Monomial) -> Option<Monomial> {
        if !self.divides(o) {
            return None;
        }
        let mut e = o.0;
        for (a, b) in e.iter_mut().zip(self.0.iter()) {
            *a -= *b;
        }
        Some(Monomial(e))
    }

    /// Least common multiple.
    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            *a = (*a).max(*b);
        }
        Monomial(e)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        let mut e = self.0;
        for a in e.iter_mut() {
            *a = (*a as u32 * k).try_into().expect("parameter exponent overflow");
        }
        Monomial(e)
    }

    fn print_key(&self) -> (u32, Reverse<[u8; MAX_PARAMS]>) {
        (self.degree(), Reverse(self.0))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Ordered, named list of formal parameters.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParamSpace {
    names: Vec<String>,
}

impl ParamSpace {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.len() > MAX_PARAMS {
            return Err(Error::Input(format!(
                "at most {MAX_PARAMS} parameters are supported, got {}",
                names.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Input(format!("duplicate parameter `{n}`")));
            }
        }
        Ok(ParamSpace { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, n) in self.names.iter().enumerate() {
            match m.exp(i) {
                0 => {}
                1 => parts.push(n.clone()),
                e => parts.push(format!("{n}^{e}")),
            }
        }
        parts.join("*")
    }
}

/// Truncated multivariate polynomial with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamPoly {
    order: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl ParamPoly {
    pub fn zero(order: u32) -> Self {
        ParamPoly { order, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar, order: u32) -> Self {
        ParamPoly::term(Monomial::one(), c, order)
    }

    pub fn one(order: u32) -> Self {
        ParamPoly::constant(Scalar::one(), order)
    }

    pub fn term(m: Monomial, c: Scalar, order: u32) -> Self {
        let mut p = ParamPoly::zero(order);
        p.add_term(m, c);
        p
    }

    pub fn var(idx: usize, order: u32) -> Self {
        ParamPoly::term(Monomial::var(idx), Scalar::one(), order)
    }

    pub fn order(&self) -> u32 {
        self.order
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one())
    }

    /// Smallest total degree of a stored term (`None` for zero).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Adds `c * m`, dropping it when above the truncation order.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || m.degree() > self.order {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &ParamPoly) {
        self.order = self.order.min(o.order);
        self.retain_order();
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn sub_assign(&mut self, o: &ParamPoly) {
        self.order = self.order.min(o.order);
        self.retain_order();
        for (m, c) in &o.terms {
            self.add_term(*m, -c);
        }
    }

    pub fn add(&self, o: &ParamPoly) -> ParamPoly {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &ParamPoly) -> ParamPoly {
        let mut r = self.clone();
        r.sub_assign(o);
        r
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn mul(&self, o: &ParamPoly) -> ParamPoly {
        let order = self.order.min(o.order);
        let mut r = ParamPoly::zero(order);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > order {
                continue;
            }
            for (mb, cb) in &o.terms {
                if da + mb.degree() > order {
                    continue;
                }
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn scale(&self, c: &Scalar) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero(self.order);
        }
        ParamPoly {
            order: self.order,
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> ParamPoly {
        let mut r = ParamPoly::zero(self.order);
        for (k, x) in &self.terms {
            r.add_term(k.mul(m), x * c);
        }
        r
    }

    pub fn pow(&self, k: u32) -> ParamPoly {
        let mut acc = ParamPoly::one(self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Re-truncates at a (typically lower) order.
    pub fn truncate(&self, order: u32) -> ParamPoly {
        let mut r = self.clone();
        r.order = order.min(self.order);
        r.retain_order();
        r
    }

    /// Same terms, with a new truncation order (terms above it dropped).
    pub fn with_order(&self, order: u32) -> ParamPoly {
        let mut r = self.clone();
        r.order = order;
        r.retain_order();
        r
    }

    fn retain_order(&mut self) {
        let order = self.order;
        self.terms.retain(|m, _| m.degree() <= order);
    }

    /// Exact quotient by a monomial.
    pub fn div_monomial(&self, m: &Monomial) -> Option<ParamPoly> {
        let mut r = ParamPoly::zero(self.order);
        for (k, c) in &self.terms {
            r.add_term(m.div_of(k)?, c.clone());
        }
        Some(r)
    }

    /// Terms with exponent exactly `k` in parameter `idx`, with that
    /// factor removed. `k = 1` is the first derivative at `p_idx = 0`.
    pub fn coefficient_of_power(&self, idx: usize, k: u8) -> ParamPoly {
        let mut r = ParamPoly::zero(self.order);
        for (m, c) in &self.terms {
            if m.exp(idx) == k {
                let mut e = m.0;
                e[idx] = 0;
                r.add_term(Monomial(e), c.clone());
            }
        }
        r
    }

    /// Groups the terms by monomial: each entry is the scalar coefficient.
    pub fn split_by_monomial(&self) -> Vec<(Monomial, Scalar)> {
        self.terms.iter().map(|(m, c)| (*m, c.clone())).collect()
    }

    /// Formal substitution. `images[i]` is the image of parameter `i`
    /// expressed over the target space, truncated at `order`.
    pub fn substitute(&self, images: &[ParamPoly], order: u32) -> ParamPoly {
        let mut r = ParamPoly::zero(order);
        for (m, c) in &self.terms {
            let mut acc = ParamPoly::constant(c.clone(), order);
            for (i, img) in images.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    acc = acc.mul(&img.with_order(order).pow(e as u32));
                }
                if acc.is_zero() {
                    break;
                }
            }
            r.add_assign(&acc);
        }
        r
    }

    /// Substitution where image `i` is `numer_i / denom_i` with `denom_i` a
    /// monomial. The whole expression is formed over the common
    /// denominator and divided exactly at the end; an inexact remainder is
    /// an error.
    pub fn substitute_fractions(
        &self,
        images: &[(ParamPoly, Monomial)],
        order: u32,
    ) -> Result<ParamPoly> {
        // A term m contributes prod (n_i / d_i)^{e_i}; bring everything
        // over D = lcm over terms of prod d_i^{e_i}.
        let mut den = Monomial::one();
        for m in self.terms.keys() {
            let mut d = Monomial::one();
            for (i, (_, di)) in images.iter().enumerate() {
                d = d.mul(&di.pow(m.exp(i) as u32));
            }
            den = den.lcm(&d);
        }
        let work = order + den.degree();
        let mut num = ParamPoly::zero(work);
        for (m, c) in &self.terms {
            let mut d = Monomial::one();
            let mut acc = ParamPoly::constant(c.clone(), work);
            for (i, (ni, di)) in images.iter().enumerate() {
                let e = m.exp(i) as u32;
                if e > 0 {
                    d = d.mul(&di.pow(e));
                    acc = acc.mul(&ni.with_order(work).pow(e));
                }
            }
            let rest = d.div_of(&den).expect("lcm is a multiple");
            num.add_assign(&acc.mul_monomial(&rest, &Scalar::one()));
        }
        num.div_monomial(&den)
            .map(|p| p.truncate(order))
            .ok_or_else(|| Error::InexactDivision {
                what: "parameter substitution".into(),
            })
    }

    /// Canonical text in the expression grammar.
    pub fn display<'a>(&'a self, space: &'a ParamSpace) -> DisplayPoly<'a> {
        DisplayPoly { poly: self, space }
    }

    /// Terms sorted by graded order, for printing.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(m, _)| m.print_key());
        v
    }
}

pub struct DisplayPoly<'a> {
    poly: &'a ParamPoly,
    space: &'a ParamSpace,
}

/// Writes `c * mono * rest` as one signed term. `rest` may be empty.
pub(crate) fn fmt_signed_term(c: &Scalar, mono: &str, rest: &str) -> (bool, String) {
    let tail: Vec<&str> = [mono, rest].into_iter().filter(|s| !s.is_empty()).collect();
    let tail = tail.join("*");
    let neg = if c.im.is_zero() {
        c.re.is_negative()
    } else {
        c.re.is_zero() && c.im.is_negative()
    };
    let mag = if neg { -c } else { c.clone() };
    let body = if tail.is_empty() {
        mag.fmt_factor()
    } else if mag.is_one() {
        tail
    } else {
        format!("{}*{}", mag.fmt_factor(), tail)
    };
    (neg, body)
}

pub(crate) fn join_signed(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (neg, body)) in terms.into_iter().enumerate() {
        match (k, neg) {
            (0, false) => s.push_str(&body),
            (0, true) => {
                s.push('-');
                s.push_str(&body);
            }
            (_, false) => {
                s.push_str(" + ");
                s.push_str(&body);
            }
            (_, true) => {
                s.push_str(" - ");
                s.push_str(&body);
            }
        }
    }
    s
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .poly
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| fmt_signed_term(c, &self.space.fmt_monomial(m), ""))
            .collect();
        write!(f, "{}", join_signed(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> ParamSpace {
        ParamSpace::new(&["t", "h", "z"]).unwrap()
    }

    #[test]
    fn truncation_drops_high_terms() {
        let t = ParamPoly::var(0, 3);
        let h = ParamPoly::var(1, 3);
        let p = t.add(&h).pow(4);
        assert!(p.is_zero());
        let q = t.add(&h).pow(3);
        assert_eq!(q.len(), 4);
        assert_eq!(q.max_degree(), Some(3));
    }

    #[test]
    fn exact_monomial_division() {
        let s = space();
        let t = ParamPoly::var(0, 6);
        let h = ParamPoly::var(1, 6);
        let z = ParamPoly::var(2, 6);
        let p = t.mul(&h).add(&t.mul(&z));
        let q = p.div_monomial(&Monomial::var(0)).unwrap();
        assert_eq!(q.display(&s).to_string(), "h + z");
        assert!(p.div_monomial(&Monomial::var(1)).is_none());
    }

    #[test]
    fn substitution_p_to_ht() {
        // p*x with p -> h*t, over spaces (p, x) -> (h, t, x)
        let p = ParamPoly::var(0, 6).mul(&ParamPoly::var(1, 6));
        let images = vec![
            ParamPoly::var(0, 6).mul(&ParamPoly::var(1, 6)),
            ParamPoly::var(2, 6),
        ];
        let r = p.substitute(&images, 6);
        let s = ParamSpace::new(&["h", "t", "x"]).unwrap();
        assert_eq!(r.display(&s).to_string(), "h*t*x");
    }

    #[test]
    fn fraction_substitution_exact_and_inexact() {
        // (p*t) with p -> h... h = p/t means p -> h*t; inverse map h -> p/t
        // applied to h*t gives p.
        let ht = ParamPoly::var(0, 6).mul(&ParamPoly::var(1, 6));
        let images = vec![
            (ParamPoly::var(0, 6), Monomial::var(1)), // h -> p / t
            (ParamPoly::var(1, 6), Monomial::one()),  // t -> t
        ];
        let r = ht.substitute_fractions(&images, 6).unwrap();
        assert_eq!(r, ParamPoly::var(0, 6));
        let h = ParamPoly::var(0, 6);
        assert!(h.substitute_fractions(&images, 6).is_err());
    }

    #[test]
    fn display_is_graded_and_signed() {
        let s = space();
        let mut p = ParamPoly::zero(6);
        p.add_term(Monomial::var(2).mul(&Monomial::var(2)), Scalar::from_frac(-1, 2));
        p.add_term(Monomial::var(0), Scalar::i());
        p.add_term(Monomial::one(), Scalar::from_int(1));
        assert_eq!(p.display(&s).to_string(), "1 + i*t - 1/2*z^2");
    }

    #[test]
    fn derivative_extraction() {
        let t = ParamPoly::var(0, 6);
        let h = ParamPoly::var(1, 6);
        let p = t.mul(&h).add(&h.mul(&h).mul(&t)).add(&t);
        let d = p.coefficient_of_power(1, 1);
        assert_eq!(d, t);
    }
}
