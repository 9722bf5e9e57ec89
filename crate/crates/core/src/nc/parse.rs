//! Expression parser.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' natural | '/' divisor)*
//! atom   := number | number 'i' | 'i' | param | generator
//!         | fn '(' expr ')' | '(' expr ')'
//! divisor:= number | param ('^' natural)? | '(' divisor ('*' divisor)* ')'
//! tensor := tterm (('+'|'-') tterm)*,  tterm := term '(x)' term
//! ```
//!
//! Evaluation runs at a working order `N + slack`. Parameter division is
//! deferred: a value is `num / den` with `den` a monomial, and `lost`
//! counts the orders of precision consumed by divisions inside series
//! arguments. The final value needs `lost + deg(den) <= slack`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::nc::ncpoly::{NCPoly, TensorPoly, Trunc};
use crate::nc::series::{series_apply, SeriesFn};
use crate::poly::{Monomial, ParamPoly, ParamSpace};
use crate::scalar::Scalar;
use crate::tensor::Basis;

/// Names and truncation for parsing.
#[derive(Clone, Debug)]
pub struct ParseContext<'a> {
    pub basis: &'a Basis,
    pub params: &'a ParamSpace,
    pub order: u32,
    pub slack: u32,
    pub cap: usize,
}

impl ParseContext<'_> {
    fn work(&self) -> Trunc {
        Trunc::new(self.order + self.slack, self.cap)
    }

    fn target(&self) -> Trunc {
        Trunc::new(self.order, self.cap)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Imag(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Tensor,
    End,
}

fn lex(text: &str, tensor: bool) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < b.len() {
        let c = b[k];
        if c.is_ascii_whitespace() {
            k += 1;
            continue;
        }
        let start = k;
        if tensor && text[k..].starts_with("(x)") {
            out.push((start, Tok::Tensor));
            k += 3;
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while k < b.len() && b[k].is_ascii_digit() {
                    k += 1;
                }
                let n: BigInt = text[start..k].parse().expect("digits");
                let is_ident = |x: u8| x.is_ascii_alphanumeric() || x == b'_';
                if k < b.len() && b[k] == b'i' && !(k + 1 < b.len() && is_ident(b[k + 1])) {
                    k += 1;
                    out.push((start, Tok::Imag(n)));
                } else {
                    out.push((start, Tok::Num(n)));
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while k < b.len() && (b[k].is_ascii_alphanumeric() || b[k] == b'_' || b[k] == b'\'') {
                    k += 1;
                }
                out.push((start, Tok::Ident(text[start..k].to_string())));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
        k += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

/// `num / den`, exact up to parameter degree `W - lost - deg(den)`.
#[derive(Clone, Debug)]
struct Frac<T> {
    num: T,
    den: Monomial,
    lost: u32,
}

trait Linear: Clone {
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_mono(&self, m: &Monomial) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
    fn div_mono(&self, m: &Monomial) -> Result<Self>;
}

impl Linear for NCPoly {
    fn add(&self, o: &Self) -> Self {
        NCPoly::add(self, o)
    }
    fn neg(&self) -> Self {
        NCPoly::neg(self)
    }
    fn mul_mono(&self, m: &Monomial) -> Self {
        self.map_coeffs(|c| c.mul_monomial(m, &Scalar::one()))
    }
    fn scale(&self, c: &Scalar) -> Self {
        NCPoly::scale(self, c)
    }
    fn div_mono(&self, m: &Monomial) -> Result<Self> {
        self.divide_param(m)
    }
}

impl Linear for TensorPoly {
    fn add(&self, o: &Self) -> Self {
        TensorPoly::add(self, o)
    }
    fn neg(&self) -> Self {
        TensorPoly::neg(self)
    }
    fn mul_mono(&self, m: &Monomial) -> Self {
        self.map_coeffs(|c| c.mul_monomial(m, &Scalar::one()))
    }
    fn scale(&self, c: &Scalar) -> Self {
        TensorPoly::scale(self, c)
    }
    fn div_mono(&self, m: &Monomial) -> Result<Self> {
        self.divide_param(m)
    }
}

impl<T: Linear> Frac<T> {
    fn whole(num: T) -> Self {
        Frac { num, den: Monomial::one(), lost: 0 }
    }

    fn add(&self, o: &Self) -> Self {
        let l = self.den.lcm(&o.den);
        let a = self.num.mul_mono(&self.den.div_of(&l).unwrap());
        let b = o.num.mul_mono(&o.den.div_of(&l).unwrap());
        Frac { num: a.add(&b), den: l, lost: self.lost.max(o.lost) }
    }

    fn neg(&self) -> Self {
        Frac { num: self.num.neg(), ..self.clone() }
    }

    fn divide(&self, c: &Scalar, m: &Monomial) -> Self {
        Frac {
            num: self.num.scale(&c.inv().expect("nonzero divisor")),
            den: self.den.mul(m),
            lost: self.lost,
        }
    }

    /// Exact value, checking the precision budget.
    fn finish(&self, slack: u32, what: &str) -> Result<T> {
        if self.lost + self.den.degree() > slack {
            return Err(Error::InexactDivision {
                what: format!(
                    "{what}: parameter divisions need slack >= {}, have {slack}",
                    self.lost + self.den.degree()
                ),
            });
        }
        self.num.div_mono(&self.den).map_err(|_| Error::InexactDivision { what: what.to_string() })
    }
}

impl Frac<NCPoly> {
    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(Frac {
            num: self.num.mul(&o.num)?,
            den: self.den.mul(&o.den),
            lost: self.lost.max(o.lost),
        })
    }
}

struct Parser<'c, 'a> {
    ctx: &'c ParseContext<'a>,
    toks: Vec<(usize, Tok)>,
    k: usize,
}

impl<'c, 'a> Parser<'c, 'a> {
    fn new(ctx: &'c ParseContext<'a>, text: &str, tensor: bool) -> Result<Self> {
        Ok(Parser { ctx, toks: lex(text, tensor)?, k: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.k].1
    }

    fn pos(&self) -> usize {
        self.toks[self.k].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.k].1.clone();
        if t != Tok::End {
            self.k += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        if *self.peek() != Tok::End {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn work(&self) -> Trunc {
        self.ctx.work()
    }

    fn scalar(&self, s: Scalar) -> Frac<NCPoly> {
        let w = self.work();
        Frac::whole(NCPoly::constant(ParamPoly::constant(s, w.order), w))
    }

    fn expr(&mut self) -> Result<Frac<NCPoly>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Frac<NCPoly>> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Frac<NCPoly>> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let mut v = self.atom()?;
        loop {
            match self.peek() {
                Tok::Caret => {
                    self.bump();
                    let e = self.natural()?;
                    let mut p = self.scalar(Scalar::one());
                    for _ in 0..e {
                        p = p.mul(&v)?;
                    }
                    v = p;
                }
                Tok::Slash => {
                    self.bump();
                    let (c, m) = self.divisor_atom()?;
                    v = v.divide(&c, &m);
                }
                _ => return Ok(v),
            }
        }
    }

    fn natural(&mut self) -> Result<u32> {
        match self.bump() {
            Tok::Num(n) => match u32::try_from(n) {
                Ok(e) if e <= 64 => Ok(e),
                _ => {
                    self.k -= 1;
                    self.err("exponent too large")
                }
            },
            _ => {
                self.k -= 1;
                self.err("expected a natural-number exponent")
            }
        }
    }

    fn divisor_atom(&mut self) -> Result<(Scalar, Monomial)> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => {
                if n == BigInt::from(0) {
                    return Err(Error::Syntax { pos, msg: "division by zero".into() });
                }
                Ok((Scalar::from_rational(BigRational::from_integer(n)), Monomial::one()))
            }
            Tok::Ident(name) => {
                let Some(idx) = self.ctx.params.index(&name) else {
                    return if self.ctx.basis.index(&name).is_some() || name == "i" {
                        Err(Error::Syntax { pos, msg: format!("cannot divide by `{name}`; only parameter monomials and integers are divisors") })
                    } else {
                        Err(Error::UnknownIdentifier(name))
                    };
                };
                let mut m = Monomial::var(idx);
                if *self.peek() == Tok::Caret {
                    self.bump();
                    m = m.pow(self.natural()?);
                }
                Ok((Scalar::one(), m))
            }
            Tok::LParen => {
                let (mut c, mut m) = self.divisor_atom()?;
                while *self.peek() == Tok::Star {
                    self.bump();
                    let (c2, m2) = self.divisor_atom()?;
                    c = &c * &c2;
                    m = m.mul(&m2);
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok((c, m))
            }
            _ => Err(Error::Syntax { pos, msg: "expected a divisor (integer or parameter monomial)".into() }),
        }
    }

    fn atom(&mut self) -> Result<Frac<NCPoly>> {
        let pos = self.pos();
        let w = self.work();
        match self.bump() {
            Tok::Num(n) => Ok(self.scalar(Scalar::from_rational(BigRational::from_integer(n)))),
            Tok::Imag(n) => Ok(self.scalar(Scalar::new(
                BigRational::from_integer(BigInt::from(0)),
                BigRational::from_integer(n),
            ))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            Tok::Ident(name) => {
                if let Ok(f) = name.parse::<SeriesFn>() {
                    self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    let lost = arg.lost + arg.den.degree();
                    let exact = arg.num.divide_param(&arg.den).map_err(|_| Error::InexactDivision {
                        what: format!("argument of {name} at offset {pos}"),
                    })?;
                    let v = series_apply(f, &exact)?;
                    return Ok(Frac { num: v, den: Monomial::one(), lost });
                }
                if name == "i" {
                    return Ok(self.scalar(Scalar::i()));
                }
                if let Some(p) = self.ctx.params.index(&name) {
                    return Ok(Frac::whole(NCPoly::constant(ParamPoly::var(p, w.order), w)));
                }
                if let Some(g) = self.ctx.basis.index(&name) {
                    return Ok(Frac::whole(NCPoly::gen(g, w)));
                }
                Err(Error::UnknownIdentifier(name))
            }
            Tok::End => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            t => Err(Error::Syntax { pos, msg: format!("unexpected token {t:?}") }),
        }
    }

    fn tensor_expr(&mut self) -> Result<Frac<TensorPoly>> {
        let mut neg = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            neg = true;
        }
        let mut acc = self.tensor_term(neg)?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.tensor_term(false)?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(&self.tensor_term(true)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn tensor_term(&mut self, neg: bool) -> Result<Frac<TensorPoly>> {
        let a = self.term()?;
        self.expect(Tok::Tensor, "`(x)` joining two tensor factors")?;
        let b = self.term()?;
        let t = TensorPoly::product(&[&a.num, &b.num]);
        let f = Frac { num: t, den: a.den.mul(&b.den), lost: a.lost.max(b.lost) };
        Ok(if neg { f.neg() } else { f })
    }
}

/// Identifiers in `text` other than function names and `i`, in order of
/// first appearance.
pub fn identifiers(text: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in lex(text, true)? {
        if let Tok::Ident(name) = t {
            if name != "i" && name.parse::<SeriesFn>().is_err() && !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}

/// Parses an element of the free algebra, truncated at the context order.
pub fn parse_expr(text: &str, ctx: &ParseContext) -> Result<NCPoly> {
    let mut p = Parser::new(ctx, text, false)?;
    let v = p.expr()?;
    p.expect_end()?;
    Ok(retrunc(v.finish(ctx.slack, "expression")?, ctx.target()))
}

fn retrunc(p: NCPoly, t: Trunc) -> NCPoly {
    let mut r = NCPoly::zero(t);
    for (w, c) in p.terms() {
        r.add_term_unchecked(w.clone(), c.clone());
    }
    r
}

/// Parses `a (x) b + ...` into an element of the tensor square.
pub fn parse_tensor(text: &str, ctx: &ParseContext) -> Result<TensorPoly> {
    let mut p = Parser::new(ctx, text, true)?;
    let v = p.tensor_expr()?;
    p.expect_end()?;
    let t = v.finish(ctx.slack, "tensor expression")?;
    let mut r = TensorPoly::zero(2, ctx.target());
    for (ws, c) in t.terms() {
        r.add_term_unchecked(ws.clone(), c.clone());
    }
    Ok(r)
}

/// Parses a generator-free expression into a parameter polynomial.
pub fn parse_coeff(text: &str, ctx: &ParseContext) -> Result<ParamPoly> {
    let p = parse_expr(text, ctx)?;
    coeff_only(&p, text, ctx.order)
}

fn coeff_only(p: &NCPoly, text: &str, order: u32) -> Result<ParamPoly> {
    if p.terms().any(|(w, _)| !w.is_empty()) {
        return Err(Error::Input(format!("`{text}` must not contain generators")));
    }
    Ok(p.coeff(&[]).with_order(order))
}

/// Parses a generator-free expression that may keep a monomial
/// denominator, e.g. `p/t`; returns `(numerator, denominator)`.
pub fn parse_fraction(text: &str, ctx: &ParseContext) -> Result<(ParamPoly, Monomial)> {
    let mut p = Parser::new(ctx, text, false)?;
    let v = p.expr()?;
    p.expect_end()?;
    if v.lost > ctx.slack {
        return Err(Error::InexactDivision { what: format!("`{text}` needs more slack") });
    }
    // cancel the common monomial factor so that `p*t/t` reads as `p`
    let mut num = coeff_only(&v.num, text, ctx.order + ctx.slack)?;
    let mut den = v.den;
    for idx in 0..ctx.params.len() {
        while den.exp(idx) > 0 {
            match num.div_monomial(&Monomial::var(idx)) {
                Some(q) => {
                    num = q;
                    den = Monomial::var(idx).div_of(&den).unwrap();
                }
                None => break,
            }
        }
    }
    Ok((num.with_order(ctx.order + den.degree()), den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx<'a>(b: &'a Basis, p: &'a ParamSpace) -> ParseContext<'a> {
        ParseContext { basis: b, params: p, order: 5, slack: 2, cap: 10 }
    }

    fn setup() -> (Basis, ParamSpace) {
        (
            Basis::new(&["p_x", "p_y", "p_z", "l_x", "l_y", "l_z"]).unwrap(),
            ParamSpace::new(&["z1", "t", "z2", "h"]).unwrap(),
        )
    }

    #[test]
    fn literal_forms() {
        let (b, p) = setup();
        let c = ctx(&b, &p);
        let a = parse_coeff("-3i/4", &c).unwrap();
        let e = parse_coeff("-3*i/4", &c).unwrap();
        assert_eq!(a, e);
        assert_eq!(a.constant_term(), &Scalar::from_frac(-3, 4) * &Scalar::i());
        assert_eq!(parse_coeff("2^3 - 8", &c).unwrap(), ParamPoly::zero(5));
    }

    #[test]
    fn product_of_parameter_and_generator() {
        let (b, p) = setup();
        let v = parse_expr("i*z1*p_y", &ctx(&b, &p)).unwrap();
        assert_eq!(v.len(), 1);
        let c = v.coeff(&[1]);
        assert_eq!(c.coeff(&Monomial::var(0)), Scalar::i());
    }

    #[test]
    fn divided_series() {
        let (b, p) = setup();
        let v = parse_expr("(t/(z2*h))*sinh(z2*h*l_z)", &ctx(&b, &p)).unwrap();
        assert_eq!(v.coeff(&[5]), ParamPoly::var(1, 5));
        let c3 = v.coeff(&[5, 5, 5]);
        let m = Monomial::var(1).mul(&Monomial::var(2).pow(2)).mul(&Monomial::var(3).pow(2));
        assert_eq!(c3.coeff(&m), Scalar::from_frac(1, 6));
        assert_eq!(c3.len(), 1);
        // next term has degree 7 > 5
        assert!(v.coeff(&[5, 5, 5, 5, 5]).is_zero());
    }

    #[test]
    fn inexact_and_unknown() {
        let (b, p) = setup();
        let c = ctx(&b, &p);
        assert!(matches!(parse_expr("(z1*p_y)/z2", &c), Err(Error::InexactDivision { .. })));
        assert!(matches!(parse_expr("q*p_x", &c), Err(Error::UnknownIdentifier(_))));
        assert!(matches!(parse_expr("t p_x", &c), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_expr("cosh(p_x)", &c), Err(Error::SeriesDivergent(_))));
    }

    #[test]
    fn group_like_tensor() {
        let (b, p) = setup();
        let d = parse_tensor("exp(-(z2/2)*p_x) (x) p_y + p_y (x) exp((z2/2)*p_x)", &ctx(&b, &p))
            .unwrap();
        assert_eq!(d.coeff(&[vec![], vec![1]]), ParamPoly::one(5));
        assert_eq!(d.coeff(&[vec![1], vec![]]), ParamPoly::one(5));
        let half = Scalar::from_frac(1, 2);
        assert_eq!(d.coeff(&[vec![0], vec![1]]), ParamPoly::var(2, 5).scale(&-half.clone()));
        assert_eq!(d.coeff(&[vec![1], vec![0]]), ParamPoly::var(2, 5).scale(&half));
    }

    #[test]
    fn fraction_values() {
        let (b, _) = setup();
        let p = ParamSpace::new(&["p", "t"]).unwrap();
        let (n, d) = parse_fraction("p/t", &ctx(&b, &p)).unwrap();
        assert_eq!(n, ParamPoly::var(0, 6));
        assert_eq!(d, Monomial::var(1));
        let (n, d) = parse_fraction("p*t/t", &ctx(&b, &p)).unwrap();
        assert_eq!((n, d), (ParamPoly::var(0, 5), Monomial::one()));
    }
}
