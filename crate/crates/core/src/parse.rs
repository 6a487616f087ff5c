//! Expression grammar for exponential polynomials.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)*
//! atom   := literal | 'z' | 'exp' '(' exparg ')' | '(' expr ')'
//! exparg := 'z' | '-' 'z' | scalar ['*'] 'z'
//! scalar := ['-'] sterm (('+' | '-') sterm)*
//! sterm  := satom ('*' satom)*
//! satom  := literal | '(' scalar ')'
//! literal:= number | number 'i' | 'i' | 'sqrt2'
//! number := digits | digits '/' digits | digits '.' digits
//! ```
//!
//! Whitespace is insignificant. Numeric literals are integers, rationals
//! `p/q`, or decimals; decimals are exact in the exact domain (they are
//! rationals). The `sqrt2` literal is representable only in the float
//! domain. Parsing and printing are inverse to each other: in the exact
//! domain `parse(format(f))` reproduces `f` structurally.

use num::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exp_poly::{ExactExpPoly, ExpPoly, FloatExpPoly};
use crate::scalar::{GaussianRational, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum NumKind {
    Int(BigInt),
    Ratio(BigInt, BigInt),
    Dec(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(NumKind),
    Imag(NumKind),
    ImagUnit,
    Z,
    Exp,
    Sqrt2,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eof,
}

fn err_at<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let int_digits = &input[start..i];
                let mut kind = match bytes.get(i) {
                    Some(b'/') => {
                        let dstart = i + 1;
                        let mut j = dstart;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        if j == dstart {
                            return err_at(i, "expected digits after `/` in a rational literal");
                        }
                        i = j;
                        NumKind::Ratio(
                            int_digits.parse().expect("digit run"),
                            input[dstart..j].parse().expect("digit run"),
                        )
                    }
                    Some(b'.') => {
                        let dstart = i + 1;
                        let mut j = dstart;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        if j == dstart {
                            return err_at(i, "expected digits after `.` in a decimal literal");
                        }
                        i = j;
                        NumKind::Dec(input[start..j].to_string())
                    }
                    _ => NumKind::Int(int_digits.parse().expect("digit run")),
                };
                // Imaginary suffix: `2i`, `3/2i`, `1.5i` — only when the `i`
                // is not the start of a longer identifier.
                if bytes.get(i) == Some(&b'i')
                    && !bytes.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric())
                {
                    i += 1;
                    let k = std::mem::replace(&mut kind, NumKind::Int(BigInt::from(0)));
                    toks.push((Tok::Imag(k), start));
                } else {
                    toks.push((Tok::Num(kind), start));
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &input[start..i];
                let tok = match word {
                    "z" => Tok::Z,
                    "exp" => Tok::Exp,
                    "i" => Tok::ImagUnit,
                    "sqrt2" => Tok::Sqrt2,
                    _ => return err_at(start, format!("unknown identifier `{word}`")),
                };
                toks.push((tok, start));
            }
            _ => return err_at(i, format!("unexpected character `{}`", &input[i..i + 1])),
        }
    }
    toks.push((Tok::Eof, input.len()));
    Ok(toks)
}

struct Parser<S: Scalar> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    _domain: std::marker::PhantomData<S>,
}

impl<S: Scalar> Parser<S> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            err_at(self.here(), format!("expected {what}"))
        }
    }

    fn num_to_scalar(&self, kind: NumKind, pos: usize) -> Result<S> {
        match kind {
            NumKind::Int(n) => S::from_ratio(n, BigInt::from(1)),
            NumKind::Ratio(p, q) => S::from_ratio(p, q),
            NumKind::Dec(text) => S::from_decimal(&text),
        }
        .map_err(|e| Error::Parse { pos, msg: e.to_string() })
    }

    fn parse_expr(&mut self) -> Result<ExpPoly<S>> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.parse_term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<ExpPoly<S>> {
        let mut acc = self.parse_factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let f = self.parse_factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<ExpPoly<S>> {
        let mut base = self.parse_atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Tok::Num(NumKind::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Parse {
                        pos,
                        msg: "exponent must be a non-negative integer that fits in 32 bits".into(),
                    })?;
                    base = base.pow_int(e);
                }
                _ => return err_at(pos, "expected a non-negative integer exponent after `^`"),
            }
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<ExpPoly<S>> {
        let pos = self.here();
        match self.bump() {
            Tok::Num(kind) => Ok(ExpPoly::constant(self.num_to_scalar(kind, pos)?)),
            Tok::Imag(kind) => {
                let m = self.num_to_scalar(kind, pos)?;
                Ok(ExpPoly::constant(m.mul(&S::imaginary())))
            }
            Tok::ImagUnit => Ok(ExpPoly::constant(S::imaginary())),
            Tok::Sqrt2 => {
                let v = S::sqrt2().map_err(|e| Error::Parse { pos, msg: e.to_string() })?;
                Ok(ExpPoly::constant(v))
            }
            Tok::Z => Ok(ExpPoly::z()),
            Tok::Exp => {
                self.expect(Tok::LParen, "`(` after `exp`")?;
                let freq = self.parse_exparg()?;
                self.expect(Tok::RParen, "`)` closing the exp argument")?;
                Ok(ExpPoly::exp(freq))
            }
            Tok::LParen => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => err_at(pos, "expected a literal, `z`, `exp(...)`, or `(`"),
        }
    }

    /// The argument of `exp(...)`: `z`, `-z`, or `scalar ['*'] z`.
    fn parse_exparg(&mut self) -> Result<S> {
        if *self.peek() == Tok::Z {
            self.bump();
            return Ok(S::one());
        }
        if *self.peek() == Tok::Minus && *self.peek2() == Tok::Z {
            self.bump();
            self.bump();
            return Ok(S::one().neg());
        }
        let c = self.parse_scalar_expr()?;
        if *self.peek() == Tok::Star {
            self.bump();
        }
        if *self.peek() == Tok::Z {
            self.bump();
            Ok(c)
        } else {
            err_at(self.here(), "expected `z` in the exp argument (the grammar admits `exp(c*z)` only)")
        }
    }

    fn parse_scalar_expr(&mut self) -> Result<S> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.parse_scalar_term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.parse_scalar_term()?;
                    acc = acc.add(&t);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.parse_scalar_term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_scalar_term(&mut self) -> Result<S> {
        let mut acc = self.parse_scalar_atom()?;
        while *self.peek() == Tok::Star && *self.peek2() != Tok::Z {
            self.bump();
            let t = self.parse_scalar_atom()?;
            acc = acc.mul(&t);
        }
        Ok(acc)
    }

    fn parse_scalar_atom(&mut self) -> Result<S> {
        let pos = self.here();
        match self.bump() {
            Tok::Num(kind) => self.num_to_scalar(kind, pos),
            Tok::Imag(kind) => Ok(self.num_to_scalar(kind, pos)?.mul(&S::imaginary())),
            Tok::ImagUnit => Ok(S::imaginary()),
            Tok::Sqrt2 => S::sqrt2().map_err(|e| Error::Parse { pos, msg: e.to_string() }),
            Tok::LParen => {
                let inner = self.parse_scalar_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => err_at(pos, "expected a scalar literal or `(`"),
        }
    }
}

/// Parses an expression in the given scalar domain.
pub fn parse<S: Scalar>(input: &str) -> Result<ExpPoly<S>> {
    let toks = lex(input)?;
    let mut p = Parser::<S> { toks, pos: 0, _domain: std::marker::PhantomData };
    let out = p.parse_expr()?;
    if *p.peek() != Tok::Eof {
        return err_at(p.here(), "unexpected trailing input");
    }
    Ok(out)
}

/// Parses in the exact Gaussian-rational domain.
pub fn parse_exact(input: &str) -> Result<ExactExpPoly> {
    parse::<GaussianRational>(input)
}

/// Parses in the float domain (admits `sqrt2`).
pub fn parse_float(input: &str) -> Result<FloatExpPoly> {
    parse::<Complex64>(input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn c(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn two_term_example() {
        let f = parse_exact("(z^2+1)*exp((1+2i)*z) + 3*exp(-z)").unwrap();
        assert_eq!(f.terms().len(), 2);
        assert_eq!(f.freq_support(), vec![c(-1, 0), c(1, 2)]);
        let first = &f.terms()[0];
        assert_eq!(first.coef, Poly::constant(c(3, 0)));
    }

    #[test]
    fn cancellation_to_zero() {
        assert!(parse_exact("exp(z) - exp(z)").unwrap().is_zero());
        assert_eq!(parse_exact("0").unwrap(), ExactExpPoly::zero());
    }

    #[test]
    fn literals_and_powers() {
        assert_eq!(parse_exact("1/2").unwrap(), parse_exact("0.5").unwrap());
        assert_eq!(parse_exact("2i").unwrap(), ExpPoly::constant(c(0, 2)));
        assert_eq!(parse_exact("exp(z)^3").unwrap(), ExpPoly::exp(c(3, 0)));
        assert_eq!(parse_exact("z^0").unwrap(), ExpPoly::one());
        let f = parse_exact("(exp(z)+1)^2").unwrap();
        let g = parse_exact("exp(2*z) + 2*exp(z) + 1").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn exp_argument_forms() {
        assert_eq!(parse_exact("exp(2z)").unwrap(), parse_exact("exp(2*z)").unwrap());
        assert_eq!(parse_exact("exp(-z)").unwrap(), ExpPoly::exp(c(-1, 0)));
        assert_eq!(parse_exact("exp(i*z)").unwrap(), ExpPoly::exp(c(0, 1)));
        assert_eq!(parse_exact("exp((1+2i)*z)").unwrap(), ExpPoly::exp(c(1, 2)));
        assert_eq!(parse_exact("exp(-3/2*z)").unwrap(), parse_exact("exp((0-3/2)*z)").unwrap());
    }

    #[test]
    fn leading_minus_and_whitespace() {
        let f = parse_exact("-z^3 + 1").unwrap();
        let g = parse_exact(" 1 - z ^ 3 ").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn sqrt2_domain_split() {
        assert!(parse_exact("exp(sqrt2*z)").is_err());
        let f = parse_float("exp(sqrt2*z)").unwrap();
        assert!((f.terms()[0].freq.re - 2f64.sqrt()).abs() == 0.0);
    }

    #[test]
    fn rejected_forms() {
        assert!(parse_exact("2z").is_err(), "juxtaposition is only legal inside exp(...)");
        assert!(parse_exact("exp(z*2)").is_err());
        assert!(parse_exact("exp(w)").is_err());
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("z^-1").is_err());
        assert!(parse_exact("exp(2)").is_err(), "exp of a constant is outside the grammar");
        let err = parse_exact("exp(q*z)").unwrap_err();
        assert!(matches!(err, Error::Parse { pos: 4, .. }), "position points at the bad token");
    }

    #[test]
    fn display_round_trips() {
        let samples = [
            "0",
            "1",
            "-1 + exp(z)",
            "3*exp(-z) + (z^2 + 1)*exp((1+2i)*z)",
            "1/2 + z^2",
            "(1-2i)*exp(i*z)",
            "z*exp(3/2*z) + exp(2*z)",
        ];
        for text in samples {
            let f = parse_exact(text).unwrap();
            let printed = f.to_string();
            let g = parse_exact(&printed).unwrap();
            assert_eq!(f, g, "round trip failed for `{text}` -> `{printed}`");
        }
    }
}
