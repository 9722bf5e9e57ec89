//! Extending a coproduct table from generators to words.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::Result;
use crate::nc::ncpoly::{NCPoly, TensorPoly, Word};
use crate::nc::rewrite::Normalizer;

/// `Δ` on generators, extended as a unital algebra morphism with every
/// tensor factor normal-ordered.
pub struct CoproductMap<'n, 'a> {
    nf: &'n Normalizer<'a>,
    gens: Vec<TensorPoly>,
    memo: RefCell<HashMap<Word, TensorPoly>>,
}

impl<'n, 'a> CoproductMap<'n, 'a> {
    /// `gens[g]` is `Δ(x_g)` in the tensor square.
    pub fn new(nf: &'n Normalizer<'a>, gens: Vec<TensorPoly>) -> Result<Self> {
        let gens = gens.iter().map(|d| nf.normalize_tensor(d)).collect::<Result<_>>()?;
        Ok(CoproductMap { nf, gens, memo: RefCell::new(HashMap::new()) })
    }

    pub fn generator(&self, g: usize) -> &TensorPoly {
        &self.gens[g]
    }

    pub fn of_word(&self, w: &[u8]) -> Result<TensorPoly> {
        if let Some(r) = self.memo.borrow().get(w) {
            return Ok(r.clone());
        }
        let r = match w.len() {
            0 => TensorPoly::one(2, self.nf.trunc()),
            1 => self.gens[w[0] as usize].clone(),
            n => {
                let head = self.of_word(&w[..n - 1])?;
                self.nf.mul_tensor(&head, &self.gens[w[n - 1] as usize])?
            }
        };
        self.memo.borrow_mut().insert(w.to_vec(), r.clone());
        Ok(r)
    }

    pub fn apply(&self, p: &NCPoly) -> Result<TensorPoly> {
        let order = self.nf.trunc().order.min(p.order());
        let mut out = TensorPoly::zero(2, self.nf.trunc().with_order(order));
        for (w, c) in p.terms() {
            out.add_assign(&self.of_word(w)?.map_coeffs(|x| x.mul(c)));
        }
        Ok(out)
    }
}

/// One-shot form of [`CoproductMap::apply`].
pub fn apply_coproduct(p: &NCPoly, gens: &[TensorPoly], nf: &Normalizer) -> Result<TensorPoly> {
    CoproductMap::new(nf, gens.to_vec())?.apply(p)
}
