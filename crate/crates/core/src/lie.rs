//! Jacobi, co-Jacobi and cocycle defects of structure-constant tensors,
//! the four-pair hypothesis check and the two-parameter family builder.
//!
//! Conventions: `[x_i, x_j] = C^k_ij x_k` and
//! `delta(x_i) = sum_{j<k} D_i^jk x_j ^ x_k` with `a ^ b = a⊗b - b⊗a`, so the
//! V⊗V components of `delta(x_i)` are exactly `D_i^jk`.

use crate::error::{Error, Result};
use crate::poly::{Monomial, ParamPoly, ParamSpace};
use crate::scalar::Scalar;
use crate::tensor::{BracketTensor, CobracketTensor, SparseTensor, StructureTensor, TensorKind};

fn expect_kind(t: &StructureTensor, kind: TensorKind, what: &str) -> Result<()> {
    if t.kind() != kind {
        return Err(Error::Input(format!("{what} expects a {kind:?} tensor")));
    }
    Ok(())
}

/// `C^k_ij + C^k_ji` (bracket) or `D_i^jk + D_i^kj` (cobracket), keyed
/// `(i, j, k)` in the tensor's own index convention.
pub fn antisymmetry_defect(t: &StructureTensor) -> SparseTensor {
    let n = t.dim();
    let mut out = SparseTensor::new(3);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = match t.kind() {
                    TensorKind::Bracket => t.get(a, b, c).add(&t.get(b, a, c)),
                    TensorKind::Cobracket => t.get(a, b, c).add(&t.get(a, c, b)),
                };
                out.insert(vec![a, b, c], v);
            }
        }
    }
    out
}

/// `sum_m (A^m_ij B^l_mk + A^m_jk B^l_mi + A^m_ki B^l_mj)` for all
/// `(i, j, k, l)`, keyed `[i, j, k, l]`.
fn cyclic_composite(a: &StructureTensor, b: &StructureTensor) -> SparseTensor {
    let n = a.dim();
    let order = a.order().min(b.order());
    let mut out = SparseTensor::new(4);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = ParamPoly::zero(order);
                    for m in 0..n {
                        for (p, q, r) in [(i, j, k), (j, k, i), (k, i, j)] {
                            let x = a.get(p, q, m);
                            if x.is_zero() {
                                continue;
                            }
                            let y = b.get(m, r, l);
                            if !y.is_zero() {
                                acc.add_assign(&x.mul(&y));
                            }
                        }
                    }
                    out.insert(vec![i, j, k, l], acc);
                }
            }
        }
    }
    out
}

/// Jacobi defect `J^l_ijk`; zero iff `mu` is a Lie bracket.
pub fn jacobi_defect(mu: &BracketTensor) -> Result<SparseTensor> {
    expect_kind(mu, TensorKind::Bracket, "jacobi_defect")?;
    Ok(cyclic_composite(mu, mu))
}

/// Transposes a cobracket into the bracket of the dual space:
/// `C*^i_jk = D_i^jk`.
fn dual_bracket(delta: &CobracketTensor) -> StructureTensor {
    let mut t = StructureTensor::zero(
        TensorKind::Bracket,
        delta.basis().clone(),
        delta.params().clone(),
        delta.order(),
    );
    for ((i, j, k), v) in delta.entries() {
        t.set_raw((*j, *k, *i), v.clone());
    }
    t
}

/// Co-Jacobi defect, keyed `[a, b, c, l]`:
/// `sum_m (D_m^ab D_l^mc + D_m^bc D_l^ma + D_m^ca D_l^mb)`.
pub fn cojacobi_defect(delta: &CobracketTensor) -> Result<SparseTensor> {
    expect_kind(delta, TensorKind::Cobracket, "cojacobi_defect")?;
    let d = dual_bracket(delta);
    Ok(cyclic_composite(&d, &d))
}

/// Bilinear cross term of the Jacobi sum of `x*mu_a + y*mu_b`.
pub fn mixed_jacobi_defect(mu_a: &BracketTensor, mu_b: &BracketTensor) -> Result<SparseTensor> {
    expect_kind(mu_a, TensorKind::Bracket, "mixed_jacobi_defect")?;
    expect_kind(mu_b, TensorKind::Bracket, "mixed_jacobi_defect")?;
    mu_a.check_compatible(mu_b)?;
    let ab = cyclic_composite(mu_a, mu_b);
    let ba = cyclic_composite(mu_b, mu_a);
    let mut out = ab;
    for (k, v) in ba.nonzero() {
        out.add_at(k.clone(), v);
    }
    Ok(out)
}

/// Cross term of the co-Jacobi sum of `x*delta_a + y*delta_b`.
pub fn mixed_cojacobi_defect(
    delta_a: &CobracketTensor,
    delta_b: &CobracketTensor,
) -> Result<SparseTensor> {
    expect_kind(delta_a, TensorKind::Cobracket, "mixed_cojacobi_defect")?;
    expect_kind(delta_b, TensorKind::Cobracket, "mixed_cojacobi_defect")?;
    delta_a.check_compatible(delta_b)?;
    mixed_jacobi_defect(&dual_bracket(delta_a), &dual_bracket(delta_b))
}

/// Cocycle defect keyed `[i, j, a, b]` with `i < j`, `a < b`: the `x_a ^ x_b`
/// component of
/// `delta([x_i, x_j]) - x_i . delta(x_j) + x_j . delta(x_i)`,
/// where `x . (u ⊗ v) = [x, u] ⊗ v + u ⊗ [x, v]`.
pub fn cocycle_defect(mu: &BracketTensor, delta: &CobracketTensor) -> Result<SparseTensor> {
    expect_kind(mu, TensorKind::Bracket, "cocycle_defect")?;
    expect_kind(delta, TensorKind::Cobracket, "cocycle_defect")?;
    mu.check_compatible(delta)?;
    let n = mu.dim();
    let order = mu.order().min(delta.order());
    let mut out = SparseTensor::new(4);
    for i in 0..n {
        for j in (i + 1)..n {
            for a in 0..n {
                for b in (a + 1)..n {
                    let mut acc = ParamPoly::zero(order);
                    for k in 0..n {
                        let c = mu.get(i, j, k);
                        if !c.is_zero() {
                            acc.add_assign(&c.mul(&delta.get(k, a, b)));
                        }
                    }
                    for c in 0..n {
                        // - ad_{x_i} delta(x_j) + ad_{x_j} delta(x_i)
                        for (x, y, sign) in [(i, j, -1i64), (j, i, 1)] {
                            let s = Scalar::from_int(sign);
                            let t1 = mu.get(x, c, a).mul(&delta.get(y, c, b));
                            let t2 = mu.get(x, c, b).mul(&delta.get(y, a, c));
                            acc.add_assign(&t1.add(&t2).scale(&s));
                        }
                    }
                    out.insert(vec![i, j, a, b], acc);
                }
            }
        }
    }
    Ok(out)
}

/// Defects gathered by [`check_four_pairs`].
#[derive(Clone, Debug)]
pub struct FourPairReport {
    pub jacobi: Vec<(String, SparseTensor)>,
    pub cojacobi: Vec<(String, SparseTensor)>,
    pub mixed_jacobi: SparseTensor,
    pub mixed_cojacobi: SparseTensor,
    /// `((bracket name, cobracket name), defect)` for the four pairs.
    pub cocycle: Vec<((String, String), SparseTensor)>,
    pub hypotheses_satisfied: bool,
}

impl FourPairReport {
    /// Names of the checks that failed.
    pub fn failures(&self) -> Vec<String> {
        let mut f = Vec::new();
        for (n, d) in self.jacobi.iter().chain(self.cojacobi.iter()) {
            if !d.is_zero() {
                f.push(n.clone());
            }
        }
        if !self.mixed_jacobi.is_zero() {
            f.push("mixed jacobi".into());
        }
        if !self.mixed_cojacobi.is_zero() {
            f.push("mixed cojacobi".into());
        }
        for ((m, d), t) in &self.cocycle {
            if !t.is_zero() {
                f.push(format!("cocycle ({m}, {d})"));
            }
        }
        f
    }
}

/// Names used in reports for the four input compositions.
#[derive(Clone, Debug)]
pub struct FourPairNames {
    pub mu_100: String,
    pub mu_001: String,
    pub delta_010: String,
    pub delta_001: String,
}

impl Default for FourPairNames {
    fn default() -> Self {
        FourPairNames {
            mu_100: "mu_100".into(),
            mu_001: "mu_001".into(),
            delta_010: "delta_010".into(),
            delta_001: "delta_001".into(),
        }
    }
}

pub fn check_four_pairs(
    mu_100: &BracketTensor,
    mu_001: &BracketTensor,
    delta_010: &CobracketTensor,
    delta_001: &CobracketTensor,
    names: &FourPairNames,
) -> Result<FourPairReport> {
    mu_100.check_compatible(mu_001)?;
    mu_100.check_compatible(delta_010)?;
    mu_100.check_compatible(delta_001)?;
    let jacobi = vec![
        (format!("jacobi {}", names.mu_100), jacobi_defect(mu_100)?),
        (format!("jacobi {}", names.mu_001), jacobi_defect(mu_001)?),
    ];
    let cojacobi = vec![
        (format!("cojacobi {}", names.delta_010), cojacobi_defect(delta_010)?),
        (format!("cojacobi {}", names.delta_001), cojacobi_defect(delta_001)?),
    ];
    let mixed_jacobi = mixed_jacobi_defect(mu_100, mu_001)?;
    let mixed_cojacobi = mixed_cojacobi_defect(delta_010, delta_001)?;
    let pairs = [
        (mu_100, &names.mu_100, delta_010, &names.delta_010),
        (mu_001, &names.mu_001, delta_010, &names.delta_010),
        (mu_100, &names.mu_100, delta_001, &names.delta_001),
        (mu_001, &names.mu_001, delta_001, &names.delta_001),
    ];
    let mut cocycle = Vec::new();
    for (m, mn, d, dn) in pairs {
        cocycle.push(((mn.clone(), dn.clone()), cocycle_defect(m, d)?));
    }
    let hypotheses_satisfied = jacobi.iter().all(|(_, d)| d.is_zero())
        && cojacobi.iter().all(|(_, d)| d.is_zero())
        && mixed_jacobi.is_zero()
        && mixed_cojacobi.is_zero()
        && cocycle.iter().all(|(_, d)| d.is_zero());
    Ok(FourPairReport {
        jacobi,
        cojacobi,
        mixed_jacobi,
        mixed_cojacobi,
        cocycle,
        hypotheses_satisfied,
    })
}

/// Parameter names of the two-parameter pencils.
#[derive(Clone, Debug)]
pub struct FamilyParams {
    /// Multiplies `mu_001`.
    pub z_mu: String,
    /// Multiplies `mu_100`.
    pub t: String,
    /// Multiplies `delta_001`.
    pub z_delta: String,
    /// Multiplies `delta_010`.
    pub h: String,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams { z_mu: "z1".into(), t: "t".into(), z_delta: "z2".into(), h: "h".into() }
    }
}

/// `mu = z_mu * mu_001 + t * mu_100` and `delta = z_delta * delta_001 + h * delta_010`.
#[derive(Clone, Debug)]
pub struct DeformationFamily {
    pub mu_family: BracketTensor,
    pub delta_family: CobracketTensor,
    pub params: FamilyParams,
    /// The four-pair report the family was built from.
    pub report: FourPairReport,
}

/// Builds the family after checking the four-pair hypotheses; the family
/// parameters are appended to the inputs' parameter list.
pub fn build_family(
    mu_100: &BracketTensor,
    mu_001: &BracketTensor,
    delta_010: &CobracketTensor,
    delta_001: &CobracketTensor,
    names: &FourPairNames,
    fp: &FamilyParams,
) -> Result<DeformationFamily> {
    let report = check_four_pairs(mu_100, mu_001, delta_010, delta_001, names)?;
    if !report.hypotheses_satisfied {
        return Err(Error::HypothesisFailure(report.failures().join("; ")));
    }
    let base = mu_100.params();
    let mut all: Vec<String> = base.names().to_vec();
    for p in [&fp.z_mu, &fp.t, &fp.z_delta, &fp.h] {
        if all.contains(p) {
            return Err(Error::Input(format!("family parameter `{p}` already in use")));
        }
        all.push(p.clone());
    }
    let space = ParamSpace::new(&all)?;
    let order = mu_100.order();
    let var = |name: &str| ParamPoly::var(space.index(name).unwrap(), order);
    let ext = |t: &StructureTensor| t.extend_params(space.clone());
    let mu_family = ext(mu_001)?
        .scale_by(&var(&fp.z_mu))
        .add(&ext(mu_100)?.scale_by(&var(&fp.t)))?;
    let delta_family = ext(delta_001)?
        .scale_by(&var(&fp.z_delta))
        .add(&ext(delta_010)?.scale_by(&var(&fp.h)))?;
    Ok(DeformationFamily { mu_family, delta_family, params: fp.clone(), report })
}

impl DeformationFamily {
    /// Splits the family's cocycle defect by the four bilinear monomials
    /// `t*h`, `z_mu*h`, `t*z_delta`, `z_mu*z_delta`, returning each piece
    /// with the monomial stripped, in the order of the four-pair report.
    pub fn split_cocycle_defect(&self) -> Result<(SparseTensor, Vec<SparseTensor>)> {
        let full = cocycle_defect(&self.mu_family, &self.delta_family)?;
        let space = self.mu_family.params();
        let idx = |n: &str| space.index(n).unwrap();
        let mono = |a: &str, b: &str| Monomial::var(idx(a)).mul(&Monomial::var(idx(b)));
        let p = &self.params;
        let monos = [
            mono(&p.t, &p.h),
            mono(&p.z_mu, &p.h),
            mono(&p.t, &p.z_delta),
            mono(&p.z_mu, &p.z_delta),
        ];
        let fam: Vec<usize> = [&p.z_mu, &p.t, &p.z_delta, &p.h].iter().map(|n| idx(n)).collect();
        let parts = monos
            .iter()
            .map(|m| {
                full.map(|v| {
                    let mut r = ParamPoly::zero(v.order());
                    for (k, c) in v.terms() {
                        if let Some(rest) = m.div_of(k) {
                            if fam.iter().all(|&f| rest.exp(f) == 0) {
                                r.add_term(rest, c.clone());
                            }
                        }
                    }
                    r
                })
            })
            .collect();
        Ok((full, parts))
    }
}

/// Per-generator scale factor `c * num / den` with `c` a nonzero scalar and
/// `num`, `den` parameter monomials. The new basis is `x'_i = s_i x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scale {
    pub coeff: Scalar,
    pub num: Monomial,
    pub den: Monomial,
}

impl Scale {
    pub fn scalar(c: Scalar) -> Self {
        Scale { coeff: c, num: Monomial::one(), den: Monomial::one() }
    }

    pub fn monomial(m: Monomial) -> Self {
        Scale { coeff: Scalar::one(), num: m, den: Monomial::one() }
    }

    pub fn identity() -> Self {
        Scale::scalar(Scalar::one())
    }

    /// `None` for a zero coefficient.
    pub fn inverse(&self) -> Option<Scale> {
        Some(Scale { coeff: self.coeff.inv()?, num: self.den, den: self.num })
    }

    fn times(&self, o: &Scale) -> Scale {
        Scale {
            coeff: &self.coeff * &o.coeff,
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    fn over(&self, o: &Scale) -> Scale {
        Scale {
            coeff: &self.coeff / &o.coeff,
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        }
    }
}

/// Basis change `x'_i = s_i x_i`: `C'^k_ij = (s_i s_j / s_k) C^k_ij` and
/// `D'_i^jk = (s_i / (s_j s_k)) D_i^jk`. Division by a monomial must be exact.
pub fn rescale_basis(t: &StructureTensor, scales: &[Scale]) -> Result<StructureTensor> {
    if scales.len() != t.dim() {
        return Err(Error::BasisMismatch(format!(
            "{} scales for {} generators",
            scales.len(),
            t.dim()
        )));
    }
    for (i, s) in scales.iter().enumerate() {
        if s.coeff.is_zero() {
            return Err(Error::ZeroScale(t.basis().name(i).to_string()));
        }
    }
    let mut r = StructureTensor::zero(t.kind(), t.basis().clone(), t.params().clone(), t.order());
    for (&(i, j, k), v) in t.entries() {
        let f = match t.kind() {
            TensorKind::Bracket => scales[i].times(&scales[j]).over(&scales[k]),
            TensorKind::Cobracket => scales[i].over(&scales[j].times(&scales[k])),
        };
        let q = v
            .mul_monomial(&f.num, &f.coeff)
            .div_monomial(&f.den)
            .ok_or_else(|| Error::InexactDivision {
                what: format!("rescaling entry {:?}", (i, j, k)),
            })?;
        r.set_raw((i, j, k), q);
    }
    Ok(r)
}

/// Applies a parameter substitution (images given as exact fractions
/// `numerator / monomial`) to every entry of a tensor.
pub fn substitute_params(
    t: &StructureTensor,
    images: &[(ParamPoly, Monomial)],
    target: ParamSpace,
) -> Result<StructureTensor> {
    if images.len() != t.params().len() {
        return Err(Error::Input(format!(
            "{} substitution images for {} parameters",
            images.len(),
            t.params().len()
        )));
    }
    let mut r = StructureTensor::zero(t.kind(), t.basis().clone(), target, t.order());
    for (&key, v) in t.entries() {
        r.set_raw(key, v.substitute_fractions(images, t.order())?);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Basis;

    fn basis() -> Basis {
        Basis::new(&["p_x", "p_y", "p_z", "l_x", "l_y", "l_z"]).unwrap()
    }

    fn c(s: Scalar) -> ParamPoly {
        ParamPoly::constant(s, 6)
    }

    fn mu_001() -> BracketTensor {
        StructureTensor::bracket_from_relations(
            basis(),
            ParamSpace::default(),
            6,
            &[((2, 0), 1, c(Scalar::i()))],
        )
        .unwrap()
    }

    #[test]
    fn antisymmetry_violation_is_2i() {
        let mut t = StructureTensor::zero(TensorKind::Bracket, basis(), ParamSpace::default(), 6);
        t.set_raw((2, 0, 1), c(Scalar::i()));
        t.set_raw((0, 2, 1), c(Scalar::i()));
        let d = antisymmetry_defect(&t);
        assert_eq!(d.get(&[2, 0, 1]), Some(&c(&Scalar::from_int(2) * &Scalar::i())));
        assert!(antisymmetry_defect(&mu_001()).is_zero());
    }

    #[test]
    fn zero_tensor_has_no_defects() {
        let z = StructureTensor::zero(TensorKind::Bracket, basis(), ParamSpace::default(), 6);
        let dz = StructureTensor::zero(TensorKind::Cobracket, basis(), ParamSpace::default(), 6);
        assert!(antisymmetry_defect(&z).is_zero());
        assert!(jacobi_defect(&z).unwrap().is_zero());
        assert!(cojacobi_defect(&dz).unwrap().is_zero());
        assert!(cocycle_defect(&z, &dz).unwrap().is_zero());
    }

    #[test]
    fn mixed_with_itself_is_twice_jacobi() {
        let mut bad = mu_001();
        bad = bad
            .add(
                &StructureTensor::bracket_from_relations(
                    basis(),
                    ParamSpace::default(),
                    6,
                    &[((1, 2), 2, c(Scalar::one()))],
                )
                .unwrap(),
            )
            .unwrap();
        let j = jacobi_defect(&bad).unwrap();
        assert!(!j.is_zero());
        let m = mixed_jacobi_defect(&bad, &bad).unwrap();
        assert_eq!(m, j.scale(&Scalar::from_int(2)));
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let dz = StructureTensor::zero(TensorKind::Cobracket, basis(), ParamSpace::default(), 6);
        assert!(jacobi_defect(&dz).is_err());
        assert!(cocycle_defect(&dz, &dz).is_err());
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let other = StructureTensor::zero(
            TensorKind::Bracket,
            Basis::new(&["a", "b"]).unwrap(),
            ParamSpace::default(),
            6,
        );
        assert!(matches!(
            mixed_jacobi_defect(&mu_001(), &other),
            Err(Error::BasisMismatch(_))
        ));
    }

    #[test]
    fn zero_scale_rejected() {
        let mut s = vec![Scale::identity(); 6];
        s[3] = Scale::scalar(Scalar::zero());
        assert!(matches!(rescale_basis(&mu_001(), &s), Err(Error::ZeroScale(_))));
    }

    #[test]
    fn monomial_rescale_needs_exact_division() {
        let space = ParamSpace::new(&["t"]).unwrap();
        let t = mu_001().extend_params(space).unwrap();
        // only p_y (the bracket's output) scaled: divide by t, inexact
        let mut s = vec![Scale::identity(); 6];
        s[1] = Scale::monomial(Monomial::var(0));
        assert!(rescale_basis(&t, &s).is_err());
    }
}
