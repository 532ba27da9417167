//! The `a_p` expression grammar.
//!
//! ```text
//! AP    := ['-'] TERM (('+' | '-') TERM)*
//! TERM  := [COEFF '*'] 'p' ['^' INT | '^(' INT '/2)'] | COEFF
//! COEFF := INT | 'u' | '(' COEFF [('+' | '-') COEFF '*sqrt(p)'] ')'
//! ```
//!
//! `u` is the Teichmüller lift of the residue field generator (of a
//! primitive root when the residue field is `F_p`).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coeff {
    Int(BigInt),
    Unit,
    /// `(a +- b*sqrt(p))`, or `(a)` when `b` is absent.
    Group { a: Box<Coeff>, b: Option<(bool, Box<Coeff>)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub negative: bool,
    pub coeff: Option<Coeff>,
    /// Exponent of `p` in half units; `None` for a bare coefficient.
    pub twice_exponent: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApExpression {
    pub terms: Vec<Term>,
    pub source: String,
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Int(n) => write!(f, "{n}"),
            Coeff::Unit => f.write_str("u"),
            Coeff::Group { a, b: None } => write!(f, "({a})"),
            Coeff::Group { a, b: Some((neg, b)) } => {
                write!(f, "({a}{}{b}*sqrt(p))", if *neg { "-" } else { "+" })
            }
        }
    }
}

impl fmt::Display for ApExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str("-")?,
                (_, false) => f.write_str("+")?,
            }
            match (&t.coeff, t.twice_exponent) {
                (Some(c), None) => write!(f, "{c}")?,
                (c, Some(e)) => {
                    if let Some(c) = c {
                        write!(f, "{c}*")?;
                    }
                    match e {
                        2 => f.write_str("p")?,
                        e if e % 2 == 0 => write!(f, "p^{}", e / 2)?,
                        e => write!(f, "p^({e}/2)")?,
                    }
                }
                (None, None) => unreachable!("a term has a coefficient or a power"),
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let chars = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, pos: 0, text }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.text.len(), |(i, _)| *i)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let n = w.chars().count();
        let ok = self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n].iter().map(|(_, c)| *c).eq(w.chars());
        if ok {
            self.pos += n;
        }
        ok
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn small_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let n: i64 = match i64::try_from(self.digits()?) {
            Ok(n) if n <= 10_000 => n,
            _ => return self.err("exponent too large"),
        };
        Ok(if neg { -n } else { n })
    }

    fn coeff(&mut self) -> Result<Coeff> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Coeff::Int(self.digits()?)),
            Some('u') => {
                self.pos += 1;
                Ok(Coeff::Unit)
            }
            Some('(') => {
                self.pos += 1;
                let a = Box::new(self.coeff()?);
                let b = match self.peek() {
                    Some(sign @ ('+' | '-')) => {
                        self.pos += 1;
                        let b = Box::new(self.coeff()?);
                        if !self.eat_word("*sqrt(p)") {
                            return self.err("expected `*sqrt(p)`");
                        }
                        Some((sign == '-', b))
                    }
                    _ => None,
                };
                self.expect(')')?;
                Ok(Coeff::Group { a, b })
            }
            _ => self.err("expected an integer, `u` or `(`"),
        }
    }

    fn power(&mut self) -> Result<i64> {
        if !self.eat('^') {
            return Ok(2);
        }
        if self.eat('(') {
            let n = self.small_int()?;
            self.expect('/')?;
            if !self.eat('2') {
                return self.err("only halves are allowed in exponents");
            }
            self.expect(')')?;
            Ok(n)
        } else {
            Ok(2 * self.small_int()?)
        }
    }

    fn term(&mut self, negative: bool) -> Result<Term> {
        if self.eat('p') {
            let e = self.power()?;
            return Ok(Term { negative, coeff: None, twice_exponent: Some(e) });
        }
        let coeff = self.coeff()?;
        if self.eat('*') {
            if !self.eat('p') {
                return self.err("expected `p` after `*`");
            }
            let e = self.power()?;
            return Ok(Term { negative, coeff: Some(coeff), twice_exponent: Some(e) });
        }
        Ok(Term { negative, coeff: Some(coeff), twice_exponent: None })
    }

    fn expression(&mut self) -> Result<Vec<Term>> {
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let mut terms = vec![];
        let first_neg = self.eat('-');
        terms.push(self.term(first_neg)?);
        while let Some(c) = self.peek() {
            let neg = match c {
                '+' => false,
                '-' => true,
                _ => return self.err(format!("unexpected `{c}`")),
            };
            self.pos += 1;
            terms.push(self.term(neg)?);
        }
        Ok(terms)
    }
}

pub fn parse_ap(text: &str) -> Result<ApExpression> {
    let terms = Parser::new(text).expression()?;
    Ok(ApExpression { terms, source: text.to_string() })
}

fn eval_coeff(c: &Coeff, ctx: &Arc<PadicContext>) -> Result<PadicElement> {
    match c {
        Coeff::Int(n) => Ok(PadicElement::from_bigint(ctx, n)),
        Coeff::Unit => Ok(PadicElement::teichmuller(ctx, ctx.field().unit_symbol())),
        Coeff::Group { a, b } => {
            let a = eval_coeff(a, ctx)?;
            match b {
                None => Ok(a),
                Some((neg, b)) => {
                    let mut b = eval_coeff(b, ctx)?.mul(&PadicElement::pi(ctx))?;
                    if *neg {
                        b = b.neg();
                    }
                    a.add(&b)
                }
            }
        }
    }
}

impl ApExpression {
    /// The value as a `p`-adic number; it must have positive slope.
    pub fn evaluate(&self, ctx: &Arc<PadicContext>) -> Result<PadicElement> {
        let mut total: Option<PadicElement> = None;
        for t in &self.terms {
            let mut x = match &t.coeff {
                Some(c) => eval_coeff(c, ctx)?,
                None => PadicElement::one(ctx),
            };
            if let Some(e) = t.twice_exponent {
                x = x.mul(&PadicElement::pi_power(ctx, e))?;
            }
            if t.negative {
                x = x.neg();
            }
            total = Some(match total {
                Some(acc) => acc.add(&x)?,
                None => x,
            });
        }
        let total = total.ok_or_else(|| Error::InvalidInput("empty a_p expression".into()))?;
        if total.is_zero_to_precision() {
            return Err(Error::ZeroAp);
        }
        let v = total.finite_valuation()?;
        if v <= crate::padic::HalfInt::ZERO {
            return Err(Error::NonPositiveSlope(v.to_string()));
        }
        Ok(total)
    }

    /// `coeff * p^(e/2)` for single terms with an integer coefficient.
    pub fn as_monomial(&self) -> Option<(i64, i64)> {
        match self.terms.as_slice() {
            [Term { negative, coeff, twice_exponent: Some(e) }] => {
                let c = match coeff {
                    None => 1,
                    Some(Coeff::Int(n)) => i64::try_from(n).ok()?,
                    _ => return None,
                };
                Some((if *negative { -c } else { c }, *e))
            }
            _ => None,
        }
    }
}

/// Parses and evaluates in one step.
pub fn ap_value(text: &str, ctx: &Arc<PadicContext>) -> Result<PadicElement> {
    parse_ap(text)?.evaluate(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{HalfInt, Valuation};

    #[test]
    fn slopes() {
        let ctx = PadicContext::with_defaults(5).unwrap();
        let v = |s: &str| ap_value(s, &ctx).unwrap().valuation();
        assert_eq!(v("p"), Valuation::Finite(HalfInt::from_int(1)));
        assert_eq!(v("2*p^(3/2)"), Valuation::Finite(HalfInt::from_twice(3)));
        assert_eq!(v("-p^2 + 3*p^(1/2)"), Valuation::Finite(HalfInt::from_twice(1)));
        assert_eq!(v("u*p"), Valuation::Finite(HalfInt::from_int(1)));
        let x = ap_value("2*p^(3/2)", &ctx).unwrap();
        let unit = x.mul(&PadicElement::pi_power(&ctx, -3)).unwrap();
        assert_eq!(unit.residue().unwrap(), ctx.field().from_int(2));
    }

    #[test]
    fn root_five_example() {
        let ctx = PadicContext::with_defaults(5).unwrap();
        let x = ap_value("(1+1*sqrt(p))*p^(3/2)", &ctx).unwrap();
        assert_eq!(x, PadicElement::from_coordinates(&ctx, 3, &[1], &[1]));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_ap(""), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_ap("2*q"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_ap("p^(3/4)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_ap("(1+2)"), Err(Error::Parse { .. })));
        let ctx = PadicContext::with_defaults(5).unwrap();
        assert!(matches!(ap_value("3", &ctx), Err(Error::NonPositiveSlope(_))));
        assert!(matches!(ap_value("p-p", &ctx), Err(Error::ZeroAp)));
    }

    #[test]
    fn printing_round_trips() {
        for s in ["p", "2*p^(3/2)", "(1+1*sqrt(p))*p^(3/2)", "-u*p^2+(3-2*sqrt(p))*p", "p^(-1/2)+7"] {
            let e = parse_ap(s).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse_ap(&e.to_string()).unwrap().terms, e.terms);
        }
        assert_eq!(parse_ap("p^2").unwrap().as_monomial(), Some((1, 4)));
        assert_eq!(parse_ap("-3*p^(3/2)").unwrap().as_monomial(), Some((-3, 3)));
    }
}
