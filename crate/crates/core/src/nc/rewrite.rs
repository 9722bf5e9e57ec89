//! Commutator tables and PBW normal ordering.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use crate::error::{Error, Result};
use crate::nc::ncpoly::{NCPoly, TensorPoly, Trunc, Word};
use crate::poly::{Monomial, ParamPoly, ParamSpace};
use crate::tensor::Basis;

/// `[x_j, x_i]` for `j > i`, keyed `(j, i)`. Missing pairs commute.
///
/// Invariants after [`RelationTable::new`]: every right-hand side term has
/// parameter degree >= 1, and every right-hand side is in normal form.
#[derive(Clone, Debug)]
pub struct RelationTable {
    basis: Basis,
    params: ParamSpace,
    trunc: Trunc,
    rels: BTreeMap<(u8, u8), NCPoly>,
}

impl RelationTable {
    /// Builds a table from `([a, b], rhs)` in either orientation; the
    /// stored orientation is the one with the later generator first.
    pub fn new(
        basis: Basis,
        params: ParamSpace,
        trunc: Trunc,
        relations: Vec<((usize, usize), NCPoly)>,
    ) -> Result<RelationTable> {
        let mut rels = BTreeMap::new();
        for ((a, b), rhs) in relations {
            let label = format!("{},{}", basis.name(a), basis.name(b));
            if a == b {
                if !rhs.is_zero() {
                    return Err(Error::Input(format!("nonzero self-commutator [{label}]")));
                }
                continue;
            }
            let (key, rhs) = if a > b { ((a as u8, b as u8), rhs) } else { ((b as u8, a as u8), rhs.neg()) };
            if rels.insert(key, rhs.with_order(trunc.order)).is_some() {
                return Err(Error::DuplicateKey(format!("relation for the pair [{label}] given twice")));
            }
        }
        let mut t = RelationTable { basis, params, trunc, rels };
        t.rels.retain(|_, v| !v.is_zero());
        t.check_contracting()?;
        let raw = Normalizer::new(&t);
        let mut normal = BTreeMap::new();
        for (k, v) in &t.rels {
            normal.insert(*k, raw.normalize(v)?);
        }
        drop(raw);
        t.rels = normal;
        t.rels.retain(|_, v| !v.is_zero());
        Ok(t)
    }

    fn check_contracting(&self) -> Result<()> {
        for (&(j, i), rhs) in &self.rels {
            if rhs.terms().any(|(_, c)| c.min_degree() == Some(0)) {
                return Err(Error::NonContracting(format!(
                    "[{},{}] has a parameter-free term",
                    self.basis.name(j as usize),
                    self.basis.name(i as usize)
                )));
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn params(&self) -> &ParamSpace {
        &self.params
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn order(&self) -> u32 {
        self.trunc.order
    }

    /// `[x_a, x_b]` as stored (negated for `a < b`).
    pub fn bracket(&self, a: usize, b: usize) -> NCPoly {
        if a == b {
            return NCPoly::zero(self.trunc);
        }
        let (key, neg) = if a > b { ((a as u8, b as u8), false) } else { ((b as u8, a as u8), true) };
        match self.rels.get(&key) {
            Some(r) if neg => r.neg(),
            Some(r) => r.clone(),
            None => NCPoly::zero(self.trunc),
        }
    }

    /// Stored pairs `(j, i)` with `j > i` and their right-hand sides.
    pub fn entries(&self) -> impl Iterator<Item = (&(u8, u8), &NCPoly)> {
        self.rels.iter()
    }

    pub fn label(&self, j: usize, i: usize) -> String {
        format!("{},{}", self.basis.name(j), self.basis.name(i))
    }

    /// Substitutes parameters in every right-hand side and rebuilds the
    /// table over `params`; the contracting property is re-checked.
    pub fn substitute(
        &self,
        images: &[(ParamPoly, Monomial)],
        params: ParamSpace,
    ) -> Result<RelationTable> {
        let mut rel = Vec::new();
        for (&(j, i), rhs) in &self.rels {
            rel.push(((j as usize, i as usize), rhs.substitute(images, self.trunc)?));
        }
        RelationTable::new(self.basis.clone(), params, self.trunc, rel)
    }

    pub fn with_order(&self, order: u32) -> Result<RelationTable> {
        let t = self.trunc.with_order(order);
        let rel = self
            .rels
            .iter()
            .map(|(&(j, i), r)| ((j as usize, i as usize), r.with_order(order)))
            .collect();
        RelationTable::new(self.basis.clone(), self.params.clone(), t, rel)
    }
}

/// Memoizing normal-ordering engine for one table.
pub struct Normalizer<'a> {
    table: &'a RelationTable,
    memo: RefCell<HashMap<(Word, u8, u32), NCPoly>>,
}

impl<'a> Normalizer<'a> {
    pub fn new(table: &'a RelationTable) -> Self {
        Normalizer { table, memo: RefCell::new(HashMap::new()) }
    }

    pub fn table(&self) -> &RelationTable {
        self.table
    }

    pub fn trunc(&self) -> Trunc {
        self.table.trunc
    }

    /// Normal form of `v * x_g` for a sorted word `v`, exact up to
    /// parameter degree `budget`.
    fn right_mul_gen(&self, v: &[u8], g: u8, budget: u32) -> Result<NCPoly> {
        let tr = self.table.trunc;
        match v.last() {
            None => return Ok(NCPoly::word(vec![g], ParamPoly::one(tr.order), tr)),
            Some(&a) if a <= g => {
                let mut w = v.to_vec();
                w.push(g);
                let mut r = NCPoly::zero(tr);
                // an empty label is filled in by the enclosing rewrite step
                r.add_term(w, ParamPoly::one(tr.order), "")?;
                return Ok(r);
            }
            _ => {}
        }
        let key = (v.to_vec(), g, budget);
        if let Some(r) = self.memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let a = *v.last().unwrap();
        let out = self.rewrite_step(v, a, g, budget).map_err(|e| match e {
            Error::CapExceeded { cap, relation } if relation.is_empty() => {
                Error::CapExceeded { cap, relation: self.table.label(a as usize, g as usize) }
            }
            e => e,
        })?;
        self.memo.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    fn rewrite_step(&self, v: &[u8], a: u8, g: u8, budget: u32) -> Result<NCPoly> {
        let tr = self.table.trunc;
        let head = &v[..v.len() - 1];
        // v' a g = v' g a + v' [a, g]
        let mut out = NCPoly::zero(tr);
        for (w, c) in self.right_mul_gen(head, g, budget)?.terms() {
            let sub = budget.saturating_sub(c.min_degree().unwrap_or(0));
            out.add_assign(&self.right_mul_gen(w, a, sub)?.scale_poly(c));
        }
        if let Some(rhs) = self.table.rels.get(&(a, g)) {
            let label = self.table.label(a as usize, g as usize);
            for (w, c) in rhs.terms() {
                let d = c.min_degree().unwrap_or(0);
                if d > budget {
                    continue;
                }
                if head.len() + w.len() > tr.cap {
                    return Err(Error::CapExceeded { cap: tr.cap, relation: label });
                }
                let mut acc = NCPoly::word(head.to_vec(), ParamPoly::one(tr.order), tr);
                for &x in w {
                    acc = self.right_mul_sorted(&acc, x, budget - d)?;
                }
                out.add_assign(&acc.scale_poly(c));
            }
        }
        Ok(out.with_order(budget.min(tr.order)).with_order(tr.order))
    }

    /// `NF(p * x_g)` for `p` already in normal form.
    fn right_mul_sorted(&self, p: &NCPoly, g: u8, budget: u32) -> Result<NCPoly> {
        let mut out = NCPoly::zero(self.table.trunc);
        for (w, c) in p.terms() {
            let d = c.min_degree().unwrap_or(0);
            if d > budget {
                continue;
            }
            out.add_assign(&self.right_mul_gen(w, g, budget - d)?.scale_poly(c));
        }
        Ok(out)
    }

    /// Normal form of a single word.
    pub fn normalize_word(&self, w: &[u8], budget: u32) -> Result<NCPoly> {
        let tr = self.table.trunc;
        let mut acc = NCPoly::one(tr);
        for &g in w {
            acc = self.right_mul_sorted(&acc, g, budget)?;
        }
        Ok(acc)
    }

    pub fn normalize(&self, p: &NCPoly) -> Result<NCPoly> {
        let tr = self.table.trunc;
        let order = tr.order.min(p.order());
        let mut out = NCPoly::zero(tr.with_order(order));
        for (w, c) in p.terms() {
            let d = c.min_degree().unwrap_or(0);
            if d > order {
                continue;
            }
            out.add_assign(&self.normalize_word(w, order - d)?.scale_poly(c));
        }
        Ok(out)
    }

    /// Normal form of the product `a b`.
    pub fn mul(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        let order = self.table.trunc.order.min(a.order()).min(b.order());
        let mut out = NCPoly::zero(self.table.trunc.with_order(order));
        for (w, c) in b.terms() {
            let mut acc = a.with_order(order);
            for &g in w {
                acc = self.right_mul_sorted(&acc, g, order)?;
            }
            out.add_assign(&acc.scale_poly(c));
        }
        Ok(out)
    }

    /// `NF(ab - ba)`.
    pub fn commutator(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        let a = self.normalize(a)?;
        let b = self.normalize(b)?;
        Ok(self.mul(&a, &b)?.sub(&self.mul(&b, &a)?))
    }

    /// Normal-orders every tensor factor.
    pub fn normalize_tensor(&self, t: &TensorPoly) -> Result<TensorPoly> {
        let tr = self.table.trunc;
        let order = tr.order.min(t.order());
        let mut out = TensorPoly::zero(t.arity(), tr.with_order(order));
        for (ws, c) in t.terms() {
            let d = c.min_degree().unwrap_or(0);
            if d > order {
                continue;
            }
            let budget = order - d;
            let mut factors = Vec::with_capacity(ws.len());
            for w in ws {
                factors.push(self.normalize_word(w, budget)?);
            }
            let refs: Vec<&NCPoly> = factors.iter().collect();
            let mut prod = TensorPoly::product(&refs);
            prod = prod.map_coeffs(|x| x.mul(c));
            out.add_assign(&prod);
        }
        Ok(out)
    }

    /// Normal form of the factorwise product in the tensor power.
    pub fn mul_tensor(&self, a: &TensorPoly, b: &TensorPoly) -> Result<TensorPoly> {
        self.normalize_tensor(&a.mul(b)?)
    }
}

/// Normal form by a different route: repeatedly rewrite one out-of-order
/// adjacent pair, chosen at random, until every word is sorted.
pub fn normalize_randomized<R: Rng>(
    table: &RelationTable,
    p: &NCPoly,
    rng: &mut R,
) -> Result<NCPoly> {
    let tr = table.trunc;
    let mut cur = p.with_order(tr.order.min(p.order()));
    loop {
        let unsorted: Vec<Word> = cur
            .terms()
            .filter(|(w, _)| w.windows(2).any(|x| x[0] > x[1]))
            .map(|(w, _)| w.clone())
            .collect();
        if unsorted.is_empty() {
            return Ok(cur);
        }
        let w = &unsorted[rng.gen_range(0..unsorted.len())];
        let descents: Vec<usize> = (0..w.len() - 1).filter(|&k| w[k] > w[k + 1]).collect();
        let k = descents[rng.gen_range(0..descents.len())];
        let c = cur.coeff(w);
        let mut next = cur.clone();
        next.sub_assign(&NCPoly::word(w.clone(), c.clone(), cur.trunc()));
        // u a g v -> u g a v + u [a, g] v
        let (a, g) = (w[k], w[k + 1]);
        let mut swapped = w.clone();
        swapped.swap(k, k + 1);
        next.add_term_unchecked(swapped, c.clone());
        if let Some(rhs) = table.rels.get(&(a, g)) {
            for (r, d) in rhs.terms() {
                let mut nw = w[..k].to_vec();
                nw.extend_from_slice(r);
                nw.extend_from_slice(&w[k + 2..]);
                next.add_term(nw, c.mul(d), &table.label(a as usize, g as usize))?;
            }
        }
        cur = next;
    }
}

/// `NF([[a,b],c] + [[b,c],a] + [[c,a],b])` for every generator triple
/// `a < b < c`, keyed by the triple.
pub fn presentation_jacobi_defect(
    table: &RelationTable,
) -> Result<Vec<((usize, usize, usize), NCPoly)>> {
    let n = table.basis.len();
    let nf = Normalizer::new(table);
    let tr = table.trunc;
    let gen = |g: usize| NCPoly::gen(g, tr);
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let mut d = NCPoly::zero(tr);
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    let xy = nf.commutator(&gen(x), &gen(y))?;
                    d.add_assign(&nf.commutator(&xy, &gen(z))?);
                }
                out.push(((a, b, c), d));
            }
        }
    }
    Ok(out)
}
