//! Taylor coefficients of a presentation in three named parameters
//! `(t, h, z)`, the order-2 and `thz` deformation identities, and first-order
//! tangent fields at boundary points.
//!
//! Conventions: `m(x⊗y)` is the generator-degree-1 part of `NF(xy)`,
//! `μ = m - m∘τ`, `m^s = (m + m∘τ)/2`. `Δ11` is the `V⊗V` part of `Δ`,
//! `δ = (Δ11 - τΔ11)/2`, `Δ^s = (Δ11 + τΔ11)/2`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hopf::{specialize, HopfPresentation};
use crate::lie::cocycle_defect;
use crate::nc::{NCPoly, Normalizer, RelationTable, TensorPoly};
use crate::poly::{Monomial, ParamPoly, ParamSpace};
use crate::report::{nc_defect, sparse_defect, tensor_defect, CheckReport};
use crate::scalar::Scalar;
use crate::tensor::{Basis, SparseTensor, StructureTensor, TensorKind};

/// Multi-index `(i, j, k)` of `t^i h^j z^k`.
pub type MultiIndex = [u32; 3];

fn fmt_index(k: &MultiIndex) -> String {
    format!("{}{}{}", k[0], k[1], k[2])
}

/// Coefficients of `μ`, `m^s`, `δ`, `Δ^s` per multi-index. The symmetric
/// parts are stored as raw tensors with both orientations.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub names: [String; 3],
    pub up_to: MultiIndex,
    basis: Basis,
    params: ParamSpace,
    order: u32,
    pub mu: BTreeMap<MultiIndex, StructureTensor>,
    pub m_sym: BTreeMap<MultiIndex, StructureTensor>,
    pub delta: BTreeMap<MultiIndex, StructureTensor>,
    pub delta_sym: BTreeMap<MultiIndex, StructureTensor>,
}

type Acc = BTreeMap<MultiIndex, BTreeMap<(usize, usize, usize), ParamPoly>>;

fn acc_add(acc: &mut Acc, key: MultiIndex, at: (usize, usize, usize), v: &ParamPoly) {
    let e = acc.entry(key).or_default().entry(at).or_insert_with(|| ParamPoly::zero(v.order()));
    e.add_assign(v);
}

impl CoefficientTable {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn params(&self) -> &ParamSpace {
        &self.params
    }

    fn zero(&self, kind: TensorKind) -> StructureTensor {
        StructureTensor::zero(kind, self.basis.clone(), self.params.clone(), self.order)
    }

    fn require(&self, k: MultiIndex) -> Result<()> {
        if (0..3).any(|a| k[a] > self.up_to[a]) {
            return Err(Error::Input(format!(
                "coefficient table lacks multi-index {} (extracted up to {})",
                fmt_index(&k),
                fmt_index(&self.up_to)
            )));
        }
        Ok(())
    }

    fn get(&self, m: &BTreeMap<MultiIndex, StructureTensor>, k: MultiIndex, kind: TensorKind) -> Result<StructureTensor> {
        self.require(k)?;
        Ok(m.get(&k).cloned().unwrap_or_else(|| self.zero(kind)))
    }

    pub fn mu(&self, k: MultiIndex) -> Result<StructureTensor> {
        self.get(&self.mu, k, TensorKind::Bracket)
    }

    pub fn m_sym(&self, k: MultiIndex) -> Result<StructureTensor> {
        self.get(&self.m_sym, k, TensorKind::Bracket)
    }

    pub fn delta(&self, k: MultiIndex) -> Result<StructureTensor> {
        self.get(&self.delta, k, TensorKind::Cobracket)
    }

    pub fn delta_sym(&self, k: MultiIndex) -> Result<StructureTensor> {
        self.get(&self.delta_sym, k, TensorKind::Cobracket)
    }

    /// One report line per nonzero coefficient tensor.
    pub fn summary(&self) -> Vec<String> {
        let mut out = Vec::new();
        let sets = [("mu", &self.mu), ("m^s", &self.m_sym), ("delta", &self.delta), ("Delta^s", &self.delta_sym)];
        for (name, m) in sets {
            for (k, t) in m {
                out.push(format!("{name}_{}: {}", fmt_index(k), tensor_line(t)));
            }
        }
        out
    }
}

/// `C[a,b]^c = v` entries with `a < b` (brackets) or `D[a]^[b,c]` with `b < c`.
fn tensor_line(t: &StructureTensor) -> String {
    let b = t.basis();
    let mut parts = Vec::new();
    for (&(i, j, k), v) in t.entries() {
        match t.kind() {
            TensorKind::Bracket if i <= j => {
                parts.push(format!("({},{}) -> {}: {}", b.name(i), b.name(j), b.name(k), v.display(t.params())))
            }
            TensorKind::Cobracket if j <= k => {
                parts.push(format!("{} -> ({},{}): {}", b.name(i), b.name(j), b.name(k), v.display(t.params())))
            }
            _ => {}
        }
    }
    parts.join("; ")
}

/// Splits `c` by the exponents of the three named parameters.
fn split_by_index(c: &ParamPoly, idx: &[usize; 3]) -> Vec<(MultiIndex, ParamPoly)> {
    let mut out: BTreeMap<MultiIndex, ParamPoly> = BTreeMap::new();
    for (m, s) in c.terms() {
        let key = [m.exp(idx[0]) as u32, m.exp(idx[1]) as u32, m.exp(idx[2]) as u32];
        let mut rest = Monomial::one();
        for v in 0..8 {
            if !idx.contains(&v) {
                rest = rest.mul(&Monomial::var(v).pow(m.exp(v) as u32));
            }
        }
        out.entry(key)
            .or_insert_with(|| ParamPoly::zero(c.order()))
            .add_term(rest, s.clone());
    }
    out.into_iter().collect()
}

pub fn extract_coefficients(
    h: &HopfPresentation,
    names: [&str; 3],
    up_to: MultiIndex,
) -> Result<CoefficientTable> {
    let params = h.params();
    let mut idx = [0usize; 3];
    for (a, n) in names.iter().enumerate() {
        idx[a] = params.index(n).ok_or_else(|| Error::UnknownIdentifier(n.to_string()))?;
    }
    let within = |k: &MultiIndex| (0..3).all(|a| k[a] <= up_to[a]);
    let half = Scalar::from_frac(1, 2);
    let n = h.basis().len();
    let (mut mu, mut ms, mut de, mut ds) = (Acc::new(), Acc::new(), Acc::new(), Acc::new());
    for j in 0..n {
        for i in 0..j {
            let b = h.table().bracket(j, i).part_of_length(1);
            for (w, c) in b.terms() {
                let k = w[0] as usize;
                for (key, v) in split_by_index(c, &idx) {
                    if !within(&key) {
                        continue;
                    }
                    acc_add(&mut mu, key, (j, i, k), &v);
                    acc_add(&mut mu, key, (i, j, k), &v.neg());
                    let hv = v.scale(&half);
                    acc_add(&mut ms, key, (j, i, k), &hv);
                    acc_add(&mut ms, key, (i, j, k), &hv);
                }
            }
        }
    }
    for g in 0..n {
        let d11 = h.coproduct(g).part_of_lengths(&[1, 1]);
        for (ws, c) in d11.terms() {
            let (a, b) = (ws[0][0] as usize, ws[1][0] as usize);
            for (key, v) in split_by_index(c, &idx) {
                if !within(&key) {
                    continue;
                }
                let hv = v.scale(&half);
                acc_add(&mut de, key, (g, a, b), &hv);
                acc_add(&mut de, key, (g, b, a), &hv.neg());
                acc_add(&mut ds, key, (g, a, b), &hv);
                acc_add(&mut ds, key, (g, b, a), &hv);
            }
        }
    }
    let order = h.trunc().order;
    let build = |acc: Acc, kind| {
        acc.into_iter()
            .filter_map(|(key, entries)| {
                let mut t = StructureTensor::zero(kind, h.basis().clone(), params.clone(), order);
                for (at, v) in entries {
                    t.set_raw(at, v);
                }
                (!t.is_zero()).then_some((key, t))
            })
            .collect()
    };
    Ok(CoefficientTable {
        names: names.map(String::from),
        up_to,
        basis: h.basis().clone(),
        params: params.clone(),
        order,
        mu: build(mu, TensorKind::Bracket),
        m_sym: build(ms, TensorKind::Bracket),
        delta: build(de, TensorKind::Cobracket),
        delta_sym: build(ds, TensorKind::Cobracket),
    })
}

/// `μ_{0,j,0} = 0` and `δ_{i,0,0} = 0` for all extracted indices.
pub fn exclusions_report(tbl: &CoefficientTable) -> CheckReport {
    let mut r = CheckReport::new("expansion exclusions");
    for j in 0..=tbl.up_to[1] {
        let k = [0, j, 0];
        let t = tbl.mu.get(&k);
        r.push(t.and_then(|t| {
            sparse_defect(format!("mu_{}", fmt_index(&k)), &as_sparse(t), &tbl.basis, &tbl.params)
        }));
    }
    for i in 0..=tbl.up_to[0] {
        let k = [i, 0, 0];
        let t = tbl.delta.get(&k);
        r.push(t.and_then(|t| {
            sparse_defect(format!("delta_{}", fmt_index(&k)), &as_sparse(t), &tbl.basis, &tbl.params)
        }));
    }
    r
}

fn as_sparse(t: &StructureTensor) -> SparseTensor {
    let mut s = SparseTensor::new(3);
    for (&(i, j, k), v) in t.entries() {
        s.insert(vec![i, j, k], v.clone());
    }
    s
}

/// Element of `span{1} ⊕ V`: `None` is the unit.
type Slot = Option<usize>;

/// Map `H⊗H → H` restricted to `span{1} ⊕ V` arguments.
#[derive(Clone, Copy)]
enum Prod<'a> {
    /// Commutative base multiplication; `V·V` products leave `span{1} ⊕ V`.
    M0,
    /// `μ` or `m^s`; zero on the unit.
    Map(&'a StructureTensor),
}

/// Map `H → H⊗H` on generators.
#[derive(Clone, Copy)]
enum Coprod<'a> {
    /// Primitive base coproduct.
    D0,
    /// `δ` or `Δ^s`, valued in `V⊗V`.
    Map(&'a StructureTensor),
}

/// `(A⊗B)∘(id⊗τ⊗id)∘(C⊗D)`.
struct Term<'a> {
    a: Prod<'a>,
    b: Prod<'a>,
    c: Coprod<'a>,
    d: Coprod<'a>,
}

fn prod(op: Prod, x: Slot, y: Slot, order: u32) -> Vec<(Slot, ParamPoly)> {
    match op {
        Prod::M0 => match (x, y) {
            (None, s) | (s, None) => vec![(s, ParamPoly::one(order))],
            _ => Vec::new(),
        },
        Prod::Map(t) => match (x, y) {
            (Some(i), Some(j)) => (0..t.dim())
                .map(|k| (Some(k), t.get(i, j, k)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            _ => Vec::new(),
        },
    }
}

fn coprod(op: Coprod, x: usize, order: u32) -> Vec<((Slot, Slot), ParamPoly)> {
    match op {
        Coprod::D0 => vec![
            ((Some(x), None), ParamPoly::one(order)),
            ((None, Some(x)), ParamPoly::one(order)),
        ],
        Coprod::Map(t) => {
            let n = t.dim();
            let mut out = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    let v = t.get(x, a, b);
                    if !v.is_zero() {
                        out.push(((Some(a), Some(b)), v));
                    }
                }
            }
            out
        }
    }
}

/// `V⊗V` coefficients keyed `(a, b)`.
type Square = BTreeMap<(usize, usize), ParamPoly>;

fn sq_add(s: &mut Square, k: (usize, usize), v: &ParamPoly) {
    let e = s.entry(k).or_insert_with(|| ParamPoly::zero(v.order()));
    e.add_assign(v);
    if e.is_zero() {
        s.remove(&k);
    }
}

fn eval_term(t: &Term, x: usize, y: usize, order: u32, out: &mut Square) {
    for ((a1, a2), cx) in coprod(t.c, x, order) {
        for ((b1, b2), cy) in coprod(t.d, y, order) {
            let cxy = cx.mul(&cy);
            // (id⊗τ⊗id): a1⊗a2⊗b1⊗b2 -> a1⊗b1⊗a2⊗b2
            for (l, cl) in prod(t.a, a1, b1, order) {
                for (r, cr) in prod(t.b, a2, b2, order) {
                    if let (Some(l), Some(r)) = (l, r) {
                        sq_add(out, (l, r), &cxy.mul(&cl).mul(&cr));
                    }
                }
            }
        }
    }
}

/// `δ(μ(x, y))` in `V⊗V`.
fn eval_lhs(delta: &StructureTensor, mu: &StructureTensor, x: usize, y: usize, out: &mut Square) {
    let n = mu.dim();
    for k in 0..n {
        let c = mu.get(x, y, k);
        if c.is_zero() {
            continue;
        }
        for a in 0..n {
            for b in 0..n {
                let d = delta.get(k, a, b);
                if !d.is_zero() {
                    sq_add(out, (a, b), &c.mul(&d));
                }
            }
        }
    }
}

/// `(Σ P_a ⊗ P_b) ∘ (id⊗τ⊗id) ∘ (Σ C_c ⊗ C_d)` expanded into terms.
fn composites<'a>(ps: &[(Prod<'a>, Prod<'a>)], cs: &[(Coprod<'a>, Coprod<'a>)]) -> Vec<Term<'a>> {
    let mut out = Vec::new();
    for &(a, b) in ps {
        for &(c, d) in cs {
            out.push(Term { a, b, c, d });
        }
    }
    out
}

fn sym_prod(m: &StructureTensor) -> [(Prod<'_>, Prod<'_>); 2] {
    [(Prod::M0, Prod::Map(m)), (Prod::Map(m), Prod::M0)]
}

fn sym_coprod(d: &StructureTensor) -> [(Coprod<'_>, Coprod<'_>); 2] {
    [(Coprod::D0, Coprod::Map(d)), (Coprod::Map(d), Coprod::D0)]
}

/// `LHS - RHS` of one identity, keyed `[x, y, a, b]` for `x < y`.
fn identity_defect(
    lhs: &[(&StructureTensor, &StructureTensor)],
    rhs: &[Term],
    basis: &Basis,
    order: u32,
) -> SparseTensor {
    let n = basis.len();
    let mut out = SparseTensor::new(4);
    for x in 0..n {
        for y in x + 1..n {
            let mut l = Square::new();
            for (d, m) in lhs {
                eval_lhs(d, m, x, y, &mut l);
            }
            let mut r = Square::new();
            for t in rhs {
                eval_term(t, x, y, order, &mut r);
            }
            for (k, v) in r {
                sq_add(&mut l, k, &v.neg());
            }
            for ((a, b), v) in l {
                out.insert(vec![x, y, a, b], v);
            }
        }
    }
    out
}

/// Order-2 identity: for each monomial `z^2, th, tz, hz`, `δ_a∘μ_b` against
/// `(m0⊗μ_b + μ_b⊗m0)∘(id⊗τ⊗id)∘(Δ0⊗δ_a + δ_a⊗Δ0)`.
pub fn order2_defects(tbl: &CoefficientTable) -> Result<Vec<(String, SparseTensor)>> {
    let comps: [(&str, MultiIndex, MultiIndex); 4] = [
        ("z^2", [0, 0, 1], [0, 0, 1]),
        ("th", [1, 0, 0], [0, 1, 0]),
        ("tz", [1, 0, 0], [0, 0, 1]),
        ("hz", [0, 0, 1], [0, 1, 0]),
    ];
    let mut out = Vec::new();
    for (name, mk, dk) in comps {
        let mu = tbl.mu(mk)?;
        let de = tbl.delta(dk)?;
        let rhs = composites(&sym_prod(&mu), &sym_coprod(&de));
        out.push((name.to_string(), identity_defect(&[(&de, &mu)], &rhs, &tbl.basis, tbl.order)));
    }
    Ok(out)
}

pub fn verify_order2(tbl: &CoefficientTable) -> Result<CheckReport> {
    let mut r = CheckReport::new("order-2 deformation identity");
    for (name, d) in order2_defects(tbl)? {
        r.push(sparse_defect(format!("{name} component"), &d, &tbl.basis, &tbl.params));
    }
    Ok(r)
}

/// The `thz` coefficient identity, symmetric parts included.
pub fn order3_thz_defect(tbl: &CoefficientTable) -> Result<SparseTensor> {
    let mu001 = tbl.mu([0, 0, 1])?;
    let mu100 = tbl.mu([1, 0, 0])?;
    let mu110 = tbl.mu([1, 1, 0])?;
    let mu101 = tbl.mu([1, 0, 1])?;
    let d001 = tbl.delta([0, 0, 1])?;
    let d010 = tbl.delta([0, 1, 0])?;
    let d110 = tbl.delta([1, 1, 0])?;
    let d011 = tbl.delta([0, 1, 1])?;
    let ms001 = tbl.m_sym([0, 0, 1])?;
    let ms100 = tbl.m_sym([1, 0, 0])?;
    let ds001 = tbl.delta_sym([0, 0, 1])?;
    let ds010 = tbl.delta_sym([0, 1, 0])?;
    let lhs = [(&d001, &mu110), (&d010, &mu101), (&d110, &mu001), (&d011, &mu100)];
    let mut rhs = composites(&sym_prod(&mu110), &sym_coprod(&d001));
    let p2 = [
        (Prod::M0, Prod::Map(&mu101)),
        (Prod::Map(&mu101), Prod::M0),
        (Prod::Map(&ms001), Prod::Map(&mu100)),
        (Prod::Map(&mu001), Prod::Map(&ms100)),
        (Prod::Map(&ms100), Prod::Map(&mu001)),
        (Prod::Map(&mu100), Prod::Map(&ms001)),
    ];
    rhs.extend(composites(&p2, &sym_coprod(&d010)));
    let c3 = [
        (Coprod::D0, Coprod::Map(&d011)),
        (Coprod::Map(&d011), Coprod::D0),
        (Coprod::Map(&ds001), Coprod::Map(&d010)),
        (Coprod::Map(&d001), Coprod::Map(&ds010)),
        (Coprod::Map(&ds010), Coprod::Map(&d001)),
        (Coprod::Map(&d010), Coprod::Map(&ds001)),
    ];
    rhs.extend(composites(&sym_prod(&mu100), &c3));
    rhs.extend(composites(&sym_prod(&mu001), &sym_coprod(&d110)));
    Ok(identity_defect(&lhs, &rhs, &tbl.basis, tbl.order))
}

pub fn verify_order3_thz(tbl: &CoefficientTable) -> Result<CheckReport> {
    let mut r = CheckReport::new("thz deformation identity");
    let d = order3_thz_defect(tbl)?;
    let n = tbl.basis.len();
    for x in 0..n {
        for y in x + 1..n {
            let mut part = SparseTensor::new(2);
            for (k, v) in d.nonzero() {
                if k[0] == x && k[1] == y {
                    part.insert(vec![k[2], k[3]], v.clone());
                }
            }
            let loc = format!("pair ({},{})", tbl.basis.name(x), tbl.basis.name(y));
            r.push(sparse_defect(loc, &part, &tbl.basis, &tbl.params));
        }
    }
    Ok(r)
}

/// Cross-check: an order-2 component against the structure-constant cocycle.
/// Returns the entries where the two disagree, on `a < b`, plus any
/// symmetric part of the composite defect.
pub fn order2_vs_cocycle(component: &SparseTensor, mu: &StructureTensor, delta: &StructureTensor) -> Result<SparseTensor> {
    let c = cocycle_defect(mu, delta)?;
    let mut diff = SparseTensor::new(4);
    let n = mu.dim();
    let zero = ParamPoly::zero(mu.order());
    for x in 0..n {
        for y in x + 1..n {
            for a in 0..n {
                for b in a..n {
                    let ab = component.get(&[x, y, a, b]).unwrap_or(&zero);
                    let ba = component.get(&[x, y, b, a]).unwrap_or(&zero);
                    let sym = ab.add(ba);
                    if !sym.is_zero() {
                        diff.insert(vec![x, y, b, a], sym);
                    }
                    if a < b {
                        let cv = c.get(&[x, y, a, b]).unwrap_or(&zero);
                        let dv = ab.sub(cv);
                        if !dv.is_zero() {
                            diff.insert(vec![x, y, a, b], dv);
                        }
                    }
                }
            }
        }
    }
    Ok(diff)
}

/// First derivative of the structure maps along one parameter at zero.
#[derive(Clone, Debug)]
pub struct TangentField {
    pub direction: String,
    pub at: Vec<(String, String)>,
    /// Presentation after the `at` assignments.
    pub presentation: HopfPresentation,
    /// Relation table with the direction parameter set to zero.
    pub base: RelationTable,
    /// `μ(x_i, x_j)` for `i < j`, nonzero only.
    pub mu: Vec<((usize, usize), NCPoly)>,
    /// `D - τD` of the `V⊗V` part of the derivative of `Δg`, nonzero only.
    pub delta: Vec<(usize, TensorPoly)>,
}

impl TangentField {
    pub fn basis(&self) -> &Basis {
        self.presentation.basis()
    }

    pub fn params(&self) -> &ParamSpace {
        self.presentation.params()
    }

    pub fn mu_entry(&self, a: usize, b: usize) -> NCPoly {
        let (key, sign) = if a < b { ((a, b), false) } else { ((b, a), true) };
        match self.mu.iter().find(|(k, _)| *k == key) {
            Some((_, v)) if sign => v.neg(),
            Some((_, v)) => v.clone(),
            None => NCPoly::zero(self.presentation.trunc()),
        }
    }

    pub fn delta_entry(&self, g: usize) -> TensorPoly {
        self.delta
            .iter()
            .find(|(k, _)| *k == g)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| TensorPoly::zero(2, self.presentation.trunc()))
    }

    /// Report lines, one per component.
    pub fn lines(&self) -> Vec<String> {
        let (b, p) = (self.basis(), self.params());
        let mut out = Vec::new();
        for ((i, j), v) in &self.mu {
            out.push(format!("mu({},{}) = {}", b.name(*i), b.name(*j), v.display(b, p)));
        }
        for (g, v) in &self.delta {
            out.push(format!("delta({}) = {}", b.name(*g), v.display(b, p)));
        }
        out
    }
}

/// `T - τT`.
pub fn antisymmetrize(t: &TensorPoly) -> TensorPoly {
    t.sub(&t.swap())
}

pub fn tangent_field(
    h: &HopfPresentation,
    direction: &str,
    at: &[(String, String)],
    slack: u32,
) -> Result<TangentField> {
    if at.iter().any(|(p, _)| p == direction) {
        return Err(Error::Input(format!("the direction `{direction}` is set to 0 implicitly")));
    }
    let hp = if at.is_empty() { h.clone() } else { specialize(h, at, slack)? };
    let idx = hp
        .params()
        .index(direction)
        .ok_or_else(|| Error::UnknownIdentifier(direction.to_string()))?;
    let order = hp.trunc().order;
    let images: Vec<(ParamPoly, Monomial)> = (0..hp.params().len())
        .map(|k| {
            let v = if k == idx { ParamPoly::zero(order) } else { ParamPoly::var(k, order) };
            (v, Monomial::one())
        })
        .collect();
    let base = hp.table().substitute(&images, hp.params().clone())?;
    let n = hp.basis().len();
    let mut mu = Vec::new();
    for j in 0..n {
        for i in 0..j {
            let d = hp.table().bracket(j, i).derivative_at_zero(idx);
            if !d.is_zero() {
                mu.push(((i, j), d.neg()));
            }
        }
    }
    mu.sort_by_key(|(k, _)| *k);
    let mut delta = Vec::new();
    for g in 0..n {
        let d = antisymmetrize(&hp.coproduct(g).part_of_lengths(&[1, 1]).derivative_at_zero(idx));
        if !d.is_zero() {
            delta.push((g, d));
        }
    }
    Ok(TangentField { direction: direction.into(), at: at.to_vec(), presentation: hp, base, mu, delta })
}

/// How [`compare_field`] treats terms beyond the expected ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareMode {
    /// Expected and actual agree exactly, entry set included.
    Exact,
    /// Expected terms agree; per entry, actual terms of parameter degree
    /// above the highest expected degree are ignored, as are unlisted entries.
    LeadingTerms,
}

/// Expected field entries. `mu` is oriented as given; `delta` values are
/// written as `x (x) y` for `x∧y` and antisymmetrized before comparison.
#[derive(Clone, Debug)]
pub struct ExpectedField {
    pub mu: Vec<((usize, usize), NCPoly)>,
    pub delta: Vec<(usize, TensorPoly)>,
}

/// Exact: `diff == 0`. Leading: every surviving term of `diff` has
/// parameter degree above the highest degree in `expected`.
fn leading_ok(
    diff_degrees: impl Iterator<Item = Option<u32>>,
    expected_degrees: impl Iterator<Item = Option<u32>>,
    diff_zero: bool,
    exact: bool,
) -> bool {
    if diff_zero {
        return true;
    }
    if exact {
        return false;
    }
    let Some(max) = expected_degrees.flatten().max() else { return false };
    diff_degrees.flatten().all(|d| d > max)
}

fn leading_nc(actual: &NCPoly, expected: &NCPoly, exact: bool) -> bool {
    let diff = actual.sub(expected);
    leading_ok(
        diff.terms().map(|(_, c)| c.min_degree()),
        expected.terms().map(|(_, c)| c.max_degree()),
        diff.is_zero(),
        exact,
    )
}

fn leading_tensor(actual: &TensorPoly, expected: &TensorPoly, exact: bool) -> bool {
    let diff = actual.sub(expected);
    leading_ok(
        diff.terms().map(|(_, c)| c.min_degree()),
        expected.terms().map(|(_, c)| c.max_degree()),
        diff.is_zero(),
        exact,
    )
}

pub fn compare_field(actual: &TangentField, expected: &ExpectedField, mode: CompareMode) -> Result<CheckReport> {
    let exact = mode == CompareMode::Exact;
    let (b, p) = (actual.basis(), actual.params());
    let nf = Normalizer::new(&actual.base);
    let mut r = CheckReport::new(match mode {
        CompareMode::Exact => "tangent field (exact)",
        CompareMode::LeadingTerms => "tangent field (leading terms)",
    });
    let mut seen_mu = Vec::new();
    for ((x, y), e) in &expected.mu {
        let e = nf.normalize(e)?;
        let a = actual.mu_entry(*x, *y);
        seen_mu.push(if x < y { (*x, *y) } else { (*y, *x) });
        let loc = format!("mu({},{})", b.name(*x), b.name(*y));
        if leading_nc(&a, &e, exact) {
            r.push(None);
        } else {
            r.fail_with(loc, format!("expected {}, got {}", e.display(b, p), a.display(b, p)));
            r.locations_checked += 1;
        }
    }
    let mut seen_delta = Vec::new();
    for (g, e) in &expected.delta {
        let e = antisymmetrize(&nf.normalize_tensor(e)?);
        let a = actual.delta_entry(*g);
        seen_delta.push(*g);
        let loc = format!("delta({})", b.name(*g));
        if leading_tensor(&a, &e, exact) {
            r.push(None);
        } else {
            r.fail_with(loc, format!("expected {}, got {}", e.display(b, p), a.display(b, p)));
            r.locations_checked += 1;
        }
    }
    if exact {
        for ((i, j), v) in &actual.mu {
            if !seen_mu.contains(&(*i, *j)) {
                let loc = format!("unexpected mu({},{})", b.name(*i), b.name(*j));
                r.push(nc_defect(loc, v, b, p));
            }
        }
        for (g, v) in &actual.delta {
            if !seen_delta.contains(g) {
                r.push(tensor_defect(format!("unexpected delta({})", b.name(*g)), v, b, p));
            }
        }
    }
    Ok(r)
}

/// Passes iff the field has no `δ` components.
pub fn no_delta_report(f: &TangentField) -> CheckReport {
    let mut r = CheckReport::new("no coproduct components");
    for (g, v) in &f.delta {
        r.push(tensor_defect(format!("delta({})", f.basis().name(*g)), v, f.basis(), f.params()));
    }
    if f.delta.is_empty() {
        r.push(None);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nc::{parse_tensor, ParseContext, Trunc};

    /// `[b, a] = t b`, `Δa` primitive, `Δb = b⊗1 + 1⊗b + h a⊗b`.
    fn toy() -> HopfPresentation {
        let basis = Basis::new(&["a", "b"]).unwrap();
        let params = ParamSpace::new(&["t", "h", "z"]).unwrap();
        let tr = Trunc::new(3, 6);
        let rel = vec![((1, 0), NCPoly::word(vec![1], ParamPoly::var(0, 3), tr))];
        let table = RelationTable::new(basis.clone(), params.clone(), tr, rel).unwrap();
        let ctx = ParseContext { basis: &basis, params: &params, order: 3, slack: 0, cap: 6 };
        let cops = vec![
            parse_tensor("a (x) 1 + 1 (x) a", &ctx).unwrap(),
            parse_tensor("b (x) 1 + 1 (x) b + h*a (x) b", &ctx).unwrap(),
        ];
        HopfPresentation::new(table, cops, vec![Scalar::zero(), Scalar::zero()]).unwrap()
    }

    #[test]
    fn extraction_conventions() {
        let h = toy();
        let tbl = extract_coefficients(&h, ["t", "h", "z"], [2, 2, 2]).unwrap();
        let mu = tbl.mu([1, 0, 0]).unwrap();
        assert_eq!(mu.get(1, 0, 1), ParamPoly::one(3));
        assert_eq!(mu.get(0, 1, 1), ParamPoly::one(3).neg());
        let ms = tbl.m_sym([1, 0, 0]).unwrap();
        assert_eq!(ms.get(0, 1, 1), ParamPoly::constant(Scalar::from_frac(1, 2), 3));
        let d = tbl.delta([0, 1, 0]).unwrap();
        assert_eq!(d.get(1, 0, 1), ParamPoly::constant(Scalar::from_frac(1, 2), 3));
        assert_eq!(d.get(1, 1, 0), ParamPoly::constant(Scalar::from_frac(-1, 2), 3));
        assert!(tbl.mu([0, 0, 3]).is_err());
    }

    #[test]
    fn composite_matches_structure_constant_cocycle() {
        let h = toy();
        let tbl = extract_coefficients(&h, ["t", "h", "z"], [2, 2, 2]).unwrap();
        let th = order2_defects(&tbl).unwrap().remove(1).1;
        let mu = tbl.mu([1, 0, 0]).unwrap();
        let de = tbl.delta([0, 1, 0]).unwrap();
        assert!(order2_vs_cocycle(&th, &mu, &de).unwrap().is_zero());
    }

    #[test]
    fn tangent_derivative_and_compare() {
        let h = toy();
        let f = tangent_field(&h, "t", &[], 0).unwrap();
        assert_eq!(f.mu.len(), 1);
        assert!(f.delta.is_empty());
        let expected = ExpectedField { mu: f.mu.clone(), delta: vec![] };
        assert!(compare_field(&f, &expected, CompareMode::Exact).unwrap().pass);
        let flipped = ExpectedField { mu: vec![((1, 0), f.mu[0].1.clone())], delta: vec![] };
        assert!(!compare_field(&f, &flipped, CompareMode::Exact).unwrap().pass);
        let g = tangent_field(&h, "h", &[], 0).unwrap();
        assert_eq!(g.delta.len(), 1);
        assert!(!no_delta_report(&g).pass);
        assert!(compare_field(&g, &ExpectedField { mu: vec![], delta: vec![] }, CompareMode::LeadingTerms)
            .unwrap()
            .pass);
    }
}
