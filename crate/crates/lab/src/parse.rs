//! Polynomial expressions in `z1, ..., zd` with Gaussian-rational coefficients.
//!
//! ```text
//! expr   := ('+' | '-')? term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ('^' uint)*
//! atom   := integer ('/' integer)? | 'i' | var | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use rif_core::poly::{GaussianRational, MultiPoly};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column} (offset {offset}): {message}")]
    Syntax { line: usize, column: usize, offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset} (expected z1..z{nvars})")]
    UnknownVariable { name: String, offset: usize, nvars: usize },
    #[error("exponent at offset {offset} is not a nonnegative integer constant")]
    NonconstantExponent { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownVariable { offset, .. }
            | ParseError::NonconstantExponent { offset } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
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

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token { tok: Tok::Int(src[start..i].parse().unwrap()), offset: start });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                // A letter followed by digits, so `z1z2` reads as two variables.
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(src[start..i].to_string()), offset: start });
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return Err(syntax(src, start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push(Token { tok, offset: start });
    }
    out.push(Token { tok: Tok::End, offset: src.len() });
    Ok(out)
}

fn syntax(src: &str, offset: usize, message: String) -> ParseError {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError::Syntax { line, column, offset, message }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, what: &str) -> ParseError {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            t => format!("{t:?}"),
        };
        syntax(self.src, self.offset(), format!("expected {what}, found {found}"))
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::LParen)
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if matches!(self.peek(), Tok::Star) {
                self.bump();
                acc = &acc * &self.factor()?;
            } else if self.starts_factor() {
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let mut base = self.atom()?;
        while matches!(self.peek(), Tok::Caret) {
            self.bump();
            let at = self.offset();
            match self.peek().clone() {
                Tok::Int(n) => {
                    self.bump();
                    let e: u32 = n.try_into().map_err(|_| syntax(self.src, at, "exponent too large".into()))?;
                    base = base.pow(e);
                }
                Tok::Ident(_) | Tok::LParen | Tok::Minus => return Err(ParseError::NonconstantExponent { offset: at }),
                _ => return Err(self.err("an exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        if !self.starts_factor() {
            return Err(self.err("a number, `i`, a variable or `(`"));
        }
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => {
                let mut q = BigRational::from_integer(n);
                if matches!(self.peek(), Tok::Slash) {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Int(d) if d != BigInt::from(0) => {
                            self.bump();
                            q /= BigRational::from_integer(d);
                        }
                        Tok::Int(_) => return Err(syntax(self.src, self.offset(), "division by zero".into())),
                        _ => return Err(self.err("an integer denominator")),
                    }
                }
                Ok(MultiPoly::constant(self.nvars, GaussianRational::from_real(q)))
            }
            Tok::Ident(name) if name == "i" => Ok(MultiPoly::constant(self.nvars, GaussianRational::i())),
            Tok::Ident(name) => {
                let idx = name
                    .strip_prefix('z')
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&j| j >= 1 && j <= self.nvars && !name[1..].starts_with('0'));
                match idx {
                    Some(j) => Ok(MultiPoly::var(self.nvars, j - 1)),
                    None => Err(ParseError::UnknownVariable { name, offset: t.offset, nvars: self.nvars }),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if !matches!(self.peek(), Tok::RParen) {
                    return Err(self.err("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => unreachable!("checked by starts_factor"),
        }
    }
}

/// Highest variable index `j` appearing as `zj`, used when the number of
/// variables is not given.
pub fn infer_nvars(text: &str) -> usize {
    lex(text)
        .map(|toks| {
            toks.iter()
                .filter_map(|t| match &t.tok {
                    Tok::Ident(s) => s.strip_prefix('z').and_then(|d| d.parse::<usize>().ok()),
                    _ => None,
                })
                .max()
                .unwrap_or(0)
        })
        .unwrap_or(0)
}

/// Parses `text` as a polynomial in `z1, ..., z_nvars`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<MultiPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { src: text, toks, pos: 0, nvars };
    if matches!(p.peek(), Tok::End) {
        return Err(syntax(text, 0, "empty expression".into()));
    }
    let out = p.expr()?;
    if !matches!(p.peek(), Tok::End) {
        return Err(p.err("an operator or end of input"));
    }
    Ok(out)
}

/// Canonical text form; parsing it gives back the same polynomial.
pub fn print_poly(p: &MultiPoly) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn phi_denominator() {
        let p = parse_poly("2 - z1 - z2", 2).unwrap();
        assert_eq!(p, MultiPoly::from_int_terms(2, &[(&[0, 0], 2), (&[1, 0], -1), (&[0, 1], -1)]));
    }

    #[test]
    fn gaussian_rational_coefficients() {
        let p = parse_poly("(1/2)*z1^2 + i*z2", 2).unwrap();
        assert_eq!(p.coeff(&[2, 0]), GaussianRational::from_ratio(1, 2));
        assert_eq!(p.coeff(&[0, 1]), GaussianRational::i());
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn unbalanced_paren_reports_offset_six() {
        match parse_poly("z1 + (", 2).unwrap_err() {
            ParseError::Syntax { offset, line, column, .. } => assert_eq!((offset, line, column), (6, 1, 7)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(parse_poly("z3 + 1", 2), Err(ParseError::UnknownVariable { offset: 0, .. })));
        assert!(matches!(parse_poly("x", 2), Err(ParseError::UnknownVariable { .. })));
        assert!(matches!(parse_poly("z1^z2", 2), Err(ParseError::NonconstantExponent { offset: 3 })));
        assert!(matches!(parse_poly("z1^(2)", 2), Err(ParseError::NonconstantExponent { .. })));
        assert!(matches!(parse_poly("", 2), Err(ParseError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_poly("1/0", 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_poly("1 +\n  * z1", 2), Err(ParseError::Syntax { line: 2, column: 3, .. })));
        assert!(matches!(parse_poly("2 $ z1", 2), Err(ParseError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn implicit_products_and_whitespace() {
        let a = parse_poly("3z1z2 - (z1 + 1)(z2 - 1)", 2).unwrap();
        let b = parse_poly("3*z1*z2-(z1+1)*(z2-1)", 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coeff(&[1, 1]), gr(2));
        assert_eq!(parse_poly("-z1^2^2", 1).unwrap(), -MultiPoly::var(1, 0).pow(4));
    }

    #[test]
    fn printing_round_trips() {
        for s in ["2 - z1 - z2", "(1/2)*z1^2 + i*z2", "(1/2 - (3/4)*i) - 2*i*z1*z2^3", "0", "-i"] {
            let p = parse_poly(s, 2).unwrap();
            assert_eq!(parse_poly(&print_poly(&p), 2).unwrap(), p, "{s} -> {}", print_poly(&p));
        }
    }

    #[test]
    fn infers_variable_count() {
        assert_eq!(infer_nvars("3 - z1 - z3"), 3);
        assert_eq!(infer_nvars("1 - 2*z1"), 1);
    }
}
