//! Expression parser.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := base ("^" exponent)?
//! base     := rational | var | "(" expr ")" | "-" factor
//! exponent := integer | "(" integer "/" integer ")"
//! ```
//!
//! Variables are `x1`, `x2` and the aliases `x`, `y`. Multiplication must be
//! explicit. Errors carry the byte offset of the offending token.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{ExponentPair, PuiseuxPoly, Rational, Variable};

/// Integer powers above this are rejected to keep expansion bounded.
pub const MAX_EXPONENT: u32 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var(Variable),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// The last field is the byte offset of the exponent.
    Pow(Box<Expr>, Rational, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src, toks: Vec::new() };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(syntax(i, "decimal literals are not supported; use p/q"));
                }
                let n: BigInt = lx.src[start..i].parse().expect("digits");
                lx.toks.push((Tok::Int(n), start));
                continue;
            }
            if c.is_ascii_alphabetic() || c == b'_' {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                lx.toks.push((Tok::Ident(lx.src[start..i].to_string()), start));
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
                _ => {
                    let ch = src[start..].chars().next().expect("non-empty");
                    return Err(syntax(start, &format!("unexpected character `{ch}`")));
                }
            };
            lx.toks.push((tok, start));
            i += 1;
        }
        lx.toks.push((Tok::End, src.len()));
        Ok(lx.toks)
    }
}

fn syntax(offset: usize, message: &str) -> Error {
    Error::Syntax { offset, message: message.to_string() }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize> {
        if *self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(syntax(self.offset(), &format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exp = self.exponent()?;
        Ok(Expr::Pow(Box::new(base), exp, at))
    }

    fn integer(&mut self) -> Result<BigInt> {
        match self.bump() {
            (Tok::Int(n), _) => Ok(n),
            (Tok::Minus, at) => Err(Error::NegativeExponent { offset: at }),
            (_, at) => Err(syntax(at, "expected an integer exponent")),
        }
    }

    fn exponent(&mut self) -> Result<Rational> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let num = self.integer()?;
            self.expect(Tok::Slash, "`/` in a rational exponent")?;
            let at = self.offset();
            let den = self.integer()?;
            if den.is_zero() {
                return Err(syntax(at, "zero denominator"));
            }
            self.expect(Tok::RParen, "`)`")?;
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(self.integer()?))
        }
    }

    fn base(&mut self) -> Result<Expr> {
        match self.bump() {
            (Tok::Int(n), _) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let at = self.offset();
                    let den = match self.bump() {
                        (Tok::Int(d), _) => d,
                        (_, at) => return Err(syntax(at, "expected a denominator")),
                    };
                    if den.is_zero() {
                        return Err(syntax(at, "zero denominator"));
                    }
                    Ok(Expr::Num(Rational::new(n, den)))
                } else {
                    Ok(Expr::Num(Rational::from_integer(n)))
                }
            }
            (Tok::Ident(name), at) => match name.as_str() {
                "x1" | "x" => Ok(Expr::Var(Variable::X1)),
                "x2" | "y" => Ok(Expr::Var(Variable::X2)),
                _ => Err(Error::UnknownVariable { offset: at, name }),
            },
            (Tok::LParen, _) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            (Tok::End, at) => Err(syntax(at, "unexpected end of input")),
            (_, at) => Err(syntax(at, "expected a number, variable or `(`")),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse_ast(text: &str) -> Result<Expr> {
    let toks = Lexer::run(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::Ident(_) | Tok::Int(_) | Tok::LParen => Err(syntax(p.offset(), "implicit multiplication; use `*`")),
        _ => Err(syntax(p.offset(), "unexpected token")),
    }
}

impl Expr {
    /// Expands the tree into a polynomial.
    pub fn lower(&self) -> Result<PuiseuxPoly> {
        Ok(match self {
            Expr::Num(r) => PuiseuxPoly::constant(r.clone()),
            Expr::Var(Variable::X1) => PuiseuxPoly::x1(),
            Expr::Var(Variable::X2) => PuiseuxPoly::x2(),
            Expr::Neg(e) => -e.lower()?,
            Expr::Add(a, b) => a.lower()? + b.lower()?,
            Expr::Sub(a, b) => a.lower()? - b.lower()?,
            Expr::Mul(a, b) => a.lower()? * b.lower()?,
            Expr::Pow(base, exp, at) => {
                let b = base.lower()?;
                if exp.is_integer() {
                    let n = exp.to_integer();
                    if n > BigInt::from(MAX_EXPONENT) {
                        return Err(syntax(*at, &format!("exponent above {MAX_EXPONENT}")));
                    }
                    let n: u32 = n.try_into().expect("bounded exponent");
                    b.pow(n)
                } else {
                    fractional_power(&b, exp, *at)?
                }
            }
        })
    }
}

fn fractional_power(b: &PuiseuxPoly, exp: &Rational, at: usize) -> Result<PuiseuxPoly> {
    let mut terms = b.terms();
    let (Some((e, c)), None) = (terms.next(), terms.next()) else {
        return Err(syntax(at, "fractional powers apply to single monomials only"));
    };
    if e.e2 != 0 {
        return Err(Error::FractionalX2Exponent { offset: at });
    }
    if !c.is_one() {
        return Err(syntax(at, "fractional power of a coefficient other than 1"));
    }
    Ok(PuiseuxPoly::monomial(Rational::one(), ExponentPair::new(&e.e1 * exp, 0)))
}

/// Parses and expands `text`.
pub fn parse_expression(text: &str) -> Result<PuiseuxPoly> {
    parse_ast(text)?.lower()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn simple_sum() {
        let p = parse_expression("x1^2 + 2*x2").unwrap();
        assert_eq!(p, PuiseuxPoly::from_int_terms(&[(2, 0, 1), (0, 1, 2)]));
    }

    #[test]
    fn binomial_expansion() {
        let p = parse_expression("(x2 - x1^2)^2 + x1^5").unwrap();
        assert_eq!(p, PuiseuxPoly::from_int_terms(&[(0, 2, 1), (2, 1, -2), (4, 0, 1), (5, 0, 1)]));
    }

    #[test]
    fn aliases_and_rationals() {
        let p = parse_expression("3/4*x*y - y^2").unwrap();
        assert_eq!(p.coeff(&ExponentPair::int(1, 1)), rat(3, 4));
        assert_eq!(p.coeff(&ExponentPair::int(0, 2)), int(-1));
    }

    #[test]
    fn fractional_x1_exponent() {
        let p = parse_expression("x1^(5/2)*x2 + x2^2").unwrap();
        assert_eq!(p.coeff(&ExponentPair::new(rat(5, 2), 1)), int(1));
        assert_eq!(p.ramification(), 2);
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse_expression("-x1^2").unwrap(), PuiseuxPoly::from_int_terms(&[(2, 0, -1)]));
        assert_eq!(parse_expression("--x2").unwrap(), PuiseuxPoly::x2());
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse_expression("x3 + 1"),
            Err(Error::UnknownVariable { offset: 0, name: "x3".into() })
        );
        assert_eq!(parse_expression("x1^-2"), Err(Error::NegativeExponent { offset: 3 }));
        assert_eq!(parse_expression("x1^(-1/2)"), Err(Error::NegativeExponent { offset: 4 }));
        assert_eq!(parse_expression("x2^(1/2)"), Err(Error::FractionalX2Exponent { offset: 3 }));
        assert!(matches!(parse_expression("2x1"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse_expression("x1 x2"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_expression("(x1 + x2"), Err(Error::Syntax { offset: 8, .. })));
        assert!(matches!(parse_expression("x1 + 0.5"), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse_expression("1/0"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("x1 $ 2"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_expression(""), Err(Error::Syntax { offset: 0, .. })));
    }

    #[test]
    fn printed_form_parses_back() {
        for s in ["(x2 - x1^2)^2 + x1^5", "-3/2*x1^(5/2)*x2 + x2^3", "(x2^2 - x1^5)*(x2^2 - 2*x1^5)"] {
            let p = parse_expression(s).unwrap();
            assert_eq!(parse_expression(&p.to_string()).unwrap(), p);
        }
    }
}
