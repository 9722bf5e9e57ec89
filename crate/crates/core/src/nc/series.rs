//! `exp`, `sinh`, `cosh` of parameter-weighted arguments, truncated.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::nc::ncpoly::NCPoly;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesFn {
    Exp,
    Sinh,
    Cosh,
}

impl SeriesFn {
    pub fn name(self) -> &'static str {
        match self {
            SeriesFn::Exp => "exp",
            SeriesFn::Sinh => "sinh",
            SeriesFn::Cosh => "cosh",
        }
    }

    /// Taylor coefficient of `x^k`.
    fn coeff(self, k: u32) -> Scalar {
        let used = match self {
            SeriesFn::Exp => true,
            SeriesFn::Sinh => k % 2 == 1,
            SeriesFn::Cosh => k.is_multiple_of(2),
        };
        if !used {
            return Scalar::zero();
        }
        let fact: i64 = (1..=k as i64).product();
        Scalar::from_frac(1, fact)
    }
}

impl fmt::Display for SeriesFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesFn {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "exp" => Ok(SeriesFn::Exp),
            "sinh" => Ok(SeriesFn::Sinh),
            "cosh" => Ok(SeriesFn::Cosh),
            _ => Err(()),
        }
    }
}

/// `f(arg)` as a free-algebra series. Every term of `arg` must carry
/// parameter degree at least 1, so `arg^k` vanishes once `k > order`.
pub fn series_apply(f: SeriesFn, arg: &NCPoly) -> Result<NCPoly> {
    if arg.terms().any(|(_, c)| c.min_degree() == Some(0)) {
        return Err(Error::SeriesDivergent(f.name().into()));
    }
    let mut acc = NCPoly::zero(arg.trunc());
    let mut power = NCPoly::one(arg.trunc());
    let mut k = 0;
    while !power.is_zero() {
        let c = f.coeff(k);
        if !c.is_zero() {
            acc.add_assign(&power.scale(&c));
        }
        power = power.mul(arg)?;
        k += 1;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nc::ncpoly::Trunc;
    use crate::poly::ParamPoly;

    #[test]
    fn exp_of_zero_is_one() {
        let t = Trunc::new(5, 10);
        let z = NCPoly::zero(t);
        assert_eq!(series_apply(SeriesFn::Exp, &z).unwrap(), NCPoly::one(t));
        assert!(series_apply(SeriesFn::Sinh, &z).unwrap().is_zero());
    }

    #[test]
    fn sinh_terms() {
        let t = Trunc::new(6, 10);
        // s * x with s a parameter
        let arg = NCPoly::word(vec![0], ParamPoly::var(0, 6), t);
        let s = series_apply(SeriesFn::Sinh, &arg).unwrap();
        assert_eq!(s.len(), 3);
        let c3 = s.coeff(&[0, 0, 0]);
        assert_eq!(c3, ParamPoly::var(0, 6).pow(3).scale(&Scalar::from_frac(1, 6)));
        let c5 = s.coeff(&[0, 0, 0, 0, 0]);
        assert_eq!(c5.constant_term(), Scalar::zero());
        assert_eq!(c5.len(), 1);
    }

    #[test]
    fn degree_zero_argument_rejected() {
        let t = Trunc::new(3, 10);
        let arg = NCPoly::gen(0, t);
        assert!(matches!(series_apply(SeriesFn::Cosh, &arg), Err(Error::SeriesDivergent(_))));
    }
}
