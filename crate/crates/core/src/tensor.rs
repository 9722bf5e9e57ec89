//! Bases and sparse structure-constant tensors.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{ParamPoly, ParamSpace};
use crate::scalar::Scalar;

/// Ordered generator names. The order is the normal-ordering order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Basis {
    names: Vec<String>,
}

impl Basis {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.len() > u8::MAX as usize {
            return Err(Error::Input("too many generators".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Input(format!("duplicate generator `{n}`")));
            }
        }
        Ok(Basis { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
    }
}

/// Sparse tensor of arbitrary rank with [`ParamPoly`] entries. Used for
/// defect values; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseTensor {
    rank: usize,
    entries: BTreeMap<Vec<usize>, ParamPoly>,
}

impl SparseTensor {
    pub fn new(rank: usize) -> Self {
        SparseTensor { rank, entries: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> Option<&ParamPoly> {
        self.entries.get(idx)
    }

    pub fn insert(&mut self, idx: Vec<usize>, value: ParamPoly) {
        debug_assert_eq!(idx.len(), self.rank);
        if value.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
    }

    pub fn add_at(&mut self, idx: Vec<usize>, value: &ParamPoly) {
        if value.is_zero() {
            return;
        }
        let cur = match self.entries.remove(&idx) {
            Some(c) => c.add(value),
            None => value.clone(),
        };
        self.insert(idx, cur);
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Vec<usize>, &ParamPoly)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> SparseTensor {
        let mut r = SparseTensor::new(self.rank);
        for (k, v) in &self.entries {
            r.insert(k.clone(), v.scale(c));
        }
        r
    }

    pub fn sub(&self, o: &SparseTensor) -> SparseTensor {
        let mut r = self.clone();
        for (k, v) in &o.entries {
            r.add_at(k.clone(), &v.neg());
        }
        r
    }

    /// Map every entry through `f`, dropping entries that become zero.
    pub fn map(&self, mut f: impl FnMut(&ParamPoly) -> ParamPoly) -> SparseTensor {
        let mut r = SparseTensor::new(self.rank);
        for (k, v) in &self.entries {
            r.insert(k.clone(), f(v));
        }
        r
    }

    pub fn try_map(
        &self,
        mut f: impl FnMut(&ParamPoly) -> Result<ParamPoly>,
    ) -> Result<SparseTensor> {
        let mut r = SparseTensor::new(self.rank);
        for (k, v) in &self.entries {
            r.insert(k.clone(), f(v)?);
        }
        Ok(r)
    }
}

/// Which kind of composition a [`StructureTensor`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TensorKind {
    /// `C^k_ij`, key `(i, j, k)`: `[x_i, x_j] = C^k_ij x_k`.
    Bracket,
    /// `D_i^jk`, key `(i, j, k)`: `delta(x_i) = sum_{j<k} D_i^jk x_j ^ x_k`.
    Cobracket,
}

/// Structure constants of a bracket or cobracket over a fixed basis.
///
/// Entries are stored as given (both orientations); the constructors
/// [`StructureTensor::bracket_from_relations`] and
/// [`StructureTensor::cobracket_from_relations`] fill in the opposite
/// orientation so the result is antisymmetric by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTensor {
    kind: TensorKind,
    basis: Basis,
    params: ParamSpace,
    order: u32,
    entries: BTreeMap<(usize, usize, usize), ParamPoly>,
}

pub type BracketTensor = StructureTensor;
pub type CobracketTensor = StructureTensor;

impl StructureTensor {
    pub fn zero(kind: TensorKind, basis: Basis, params: ParamSpace, order: u32) -> Self {
        StructureTensor { kind, basis, params, order, entries: BTreeMap::new() }
    }

    /// Bracket from `[x_i, x_j] = c x_k` relations, antisymmetrized.
    pub fn bracket_from_relations(
        basis: Basis,
        params: ParamSpace,
        order: u32,
        rels: &[((usize, usize), usize, ParamPoly)],
    ) -> Result<Self> {
        let mut t = StructureTensor::zero(TensorKind::Bracket, basis, params, order);
        for ((i, j), k, c) in rels {
            t.set_antisymmetric(*i, *j, *k, c.clone())?;
        }
        Ok(t)
    }

    /// Cobracket from `D_i^{jk} = c` entries, antisymmetrized in `(j, k)`.
    pub fn cobracket_from_relations(
        basis: Basis,
        params: ParamSpace,
        order: u32,
        rels: &[(usize, (usize, usize), ParamPoly)],
    ) -> Result<Self> {
        let mut t = StructureTensor::zero(TensorKind::Cobracket, basis, params, order);
        for (i, (j, k), c) in rels {
            t.set_antisymmetric(*j, *k, *i, c.clone())?;
        }
        Ok(t)
    }

    /// Raw entry setter: stores exactly `(a, b, c)` with no antisymmetrization.
    /// For a bracket the key is `(i, j, k)` of `C^k_ij`; for a cobracket it
    /// is `(i, j, k)` of `D_i^jk`.
    pub fn set_raw(&mut self, key: (usize, usize, usize), value: ParamPoly) {
        let value = value.with_order(self.order.min(value.order()));
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    /// Adds `c` at the pair `(a, b)` and `-c` at `(b, a)`; `free` is the
    /// remaining index (`k` of `C^k_ab`, or `i` of `D_i^ab`).
    fn set_antisymmetric(&mut self, a: usize, b: usize, free: usize, c: ParamPoly) -> Result<()> {
        if a == b {
            if c.is_zero() {
                return Ok(());
            }
            return Err(Error::Input(format!(
                "antisymmetric entry with repeated index `{}`",
                self.basis.name(a)
            )));
        }
        let (k1, k2) = match self.kind {
            TensorKind::Bracket => ((a, b, free), (b, a, free)),
            TensorKind::Cobracket => ((free, a, b), (free, b, a)),
        };
        let cur1 = self.raw(k1).add(&c);
        let cur2 = self.raw(k2).sub(&c);
        self.set_raw(k1, cur1);
        self.set_raw(k2, cur2);
        Ok(())
    }

    fn raw(&self, key: (usize, usize, usize)) -> ParamPoly {
        self.entries
            .get(&key)
            .cloned()
            .unwrap_or_else(|| ParamPoly::zero(self.order))
    }

    pub fn kind(&self) -> TensorKind {
        self.kind
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn params(&self) -> &ParamSpace {
        &self.params
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `C^k_ij` (bracket) or `D_i^jk` (cobracket).
    pub fn get(&self, i: usize, j: usize, k: usize) -> ParamPoly {
        self.raw((i, j, k))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &ParamPoly)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entrywise map into a (possibly different) parameter space.
    pub fn map_entries(
        &self,
        params: ParamSpace,
        order: u32,
        mut f: impl FnMut(&ParamPoly) -> Result<ParamPoly>,
    ) -> Result<StructureTensor> {
        let mut r = StructureTensor::zero(self.kind, self.basis.clone(), params, order);
        for (k, v) in &self.entries {
            r.set_raw(*k, f(v)?);
        }
        Ok(r)
    }

    /// `self + other`, entrywise. Both must share kind and basis.
    pub fn add(&self, other: &StructureTensor) -> Result<StructureTensor> {
        self.check_compatible(other)?;
        let mut r = self.clone();
        r.order = self.order.min(other.order);
        for (k, v) in &other.entries {
            let cur = r.raw(*k).add(v);
            r.set_raw(*k, cur);
        }
        Ok(r)
    }

    /// Multiplies every entry by `factor`.
    pub fn scale_by(&self, factor: &ParamPoly) -> StructureTensor {
        let mut r = self.clone();
        r.order = self.order.min(factor.order());
        r.entries.clear();
        for (k, v) in &self.entries {
            r.set_raw(*k, v.mul(factor));
        }
        r
    }

    pub fn check_compatible(&self, other: &StructureTensor) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(format!(
                "{:?} vs {:?}",
                self.basis.names(),
                other.basis.names()
            )));
        }
        if self.params != other.params {
            return Err(Error::BasisMismatch(format!(
                "parameter lists {:?} vs {:?}",
                self.params.names(),
                other.params.names()
            )));
        }
        Ok(())
    }

    /// The bracket of two basis elements as a coefficient vector.
    pub fn apply_pair(&self, i: usize, j: usize) -> Vec<ParamPoly> {
        debug_assert_eq!(self.kind, TensorKind::Bracket);
        (0..self.dim()).map(|k| self.get(i, j, k)).collect()
    }

    /// Re-express over a wider parameter space whose first entries are
    /// this tensor's parameters.
    pub fn extend_params(&self, params: ParamSpace) -> Result<StructureTensor> {
        if params.names().len() < self.params.len()
            || params.names()[..self.params.len()] != *self.params.names()
        {
            return Err(Error::Input(format!(
                "parameter list {:?} does not extend {:?}",
                params.names(),
                self.params.names()
            )));
        }
        let mut r = self.clone();
        r.params = params;
        Ok(r)
    }
}

impl fmt::Display for StructureTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.basis;
        let mut first = true;
        write!(f, "{{")?;
        for ((i, j, k), v) in &self.entries {
            // one orientation per antisymmetric pair
            let (lo, hi) = match self.kind {
                TensorKind::Bracket => (*i, *j),
                TensorKind::Cobracket => (*j, *k),
            };
            if lo > hi {
                let mirror = match self.kind {
                    TensorKind::Bracket => (*j, *i, *k),
                    TensorKind::Cobracket => (*i, *k, *j),
                };
                if self.entries.get(&mirror).map(|m| m.neg()) == Some(v.clone()) {
                    continue;
                }
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            match self.kind {
                TensorKind::Bracket => write!(
                    f,
                    "C^{}_{{{} {}}} = {}",
                    b.name(*k),
                    b.name(*i),
                    b.name(*j),
                    v.display(&self.params)
                )?,
                TensorKind::Cobracket => write!(
                    f,
                    "D_{}^{{{} {}}} = {}",
                    b.name(*i),
                    b.name(*j),
                    b.name(*k),
                    v.display(&self.params)
                )?,
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_constructor_antisymmetrizes() {
        let b = Basis::new(&["a", "b", "c"]).unwrap();
        let p = ParamSpace::default();
        let t = StructureTensor::bracket_from_relations(
            b,
            p,
            6,
            &[((1, 0), 2, ParamPoly::one(6))],
        )
        .unwrap();
        assert_eq!(t.get(1, 0, 2), ParamPoly::one(6));
        assert_eq!(t.get(0, 1, 2), ParamPoly::one(6).neg());
        assert!(t.get(0, 0, 2).is_zero());
    }

    #[test]
    fn cobracket_keys() {
        let b = Basis::new(&["a", "b", "c"]).unwrap();
        let t = StructureTensor::cobracket_from_relations(
            b,
            ParamSpace::default(),
            6,
            &[(0, (2, 1), ParamPoly::constant(Scalar::i(), 6))],
        )
        .unwrap();
        assert_eq!(t.get(0, 2, 1), ParamPoly::constant(Scalar::i(), 6));
        assert_eq!(t.get(0, 1, 2), ParamPoly::constant(-Scalar::i(), 6));
    }

    #[test]
    fn repeated_index_rejected() {
        let b = Basis::new(&["a", "b"]).unwrap();
        let r = StructureTensor::bracket_from_relations(
            b,
            ParamSpace::default(),
            6,
            &[((1, 1), 0, ParamPoly::one(6))],
        );
        assert!(r.is_err());
    }
}
