//! Grammar: `expr := term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
//! `factor := '-' factor | atom ('^' integer)?`, `atom := number | number/number
//! | name | '(' expr ')'`. Whitespace is ignored.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::Expr;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected {found} at offset {at}")]
    Unexpected { at: usize, found: String },
    #[error("exponent at offset {0} is not a positive integer")]
    Exponent(usize),
    #[error("zero denominator at offset {0}")]
    ZeroDenominator(usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (at, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((at, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((at, Tok::Name(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((at, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Unexpected { at, found: format!("'{c}'") });
        }
    }
    Ok(out)
}

/// Parsed tree plus its variable names. Names are ordered by prefix and
/// then numeric suffix, so x2 precedes x10.
pub fn parse_expr(text: &str) -> Result<(Expr, Vec<String>), ParseError> {
    let toks = lex(text)?;
    let names: Vec<String> = {
        let mut set: BTreeSet<(String, u64, String)> = BTreeSet::new();
        for (_, t) in &toks {
            if let Tok::Name(n) = t {
                let split = n.trim_end_matches(|c: char| c.is_ascii_digit()).len();
                let suffix = n[split..].parse().unwrap_or(0);
                set.insert((n[..split].to_string(), suffix, n.clone()));
            }
        }
        set.into_iter().map(|(_, _, n)| n).collect()
    };
    let mut p = Parser { toks, pos: 0, names: &names, end: text.len() };
    let e = p.expr()?;
    if let Some((at, t)) = p.toks.get(p.pos) {
        return Err(ParseError::Unexpected { at: *at, found: format!("{t:?}") });
    }
    Ok((e, names))
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    names: &'a [String],
    end: usize,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn unexpected(&self) -> ParseError {
        match self.toks.get(self.pos) {
            Some((at, t)) => ParseError::Unexpected { at: *at, found: format!("{t:?}") },
            None => ParseError::Unexpected { at: self.end, found: "end of input".into() },
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            terms.push(if op == '-' { negate(t) } else { t });
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek_op() == Some('*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(Expr::product(factors))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(negate(self.factor()?));
        }
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let at = self.offset();
            match self.toks.get(self.pos) {
                Some((_, Tok::Num(n))) => {
                    let d: u32 = n.try_into().map_err(|_| ParseError::Exponent(at))?;
                    if d == 0 {
                        return Err(ParseError::Exponent(at));
                    }
                    self.pos += 1;
                    return Ok(if d == 1 { base } else { Expr::Pow(Box::new(base), d) });
                }
                _ => return Err(ParseError::Exponent(at)),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some((at, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(self.unexpected());
        };
        match tok {
            Tok::Num(n) => {
                self.pos += 1;
                if self.peek_op() == Some('/') {
                    self.pos += 1;
                    let Some((_, Tok::Num(d))) = self.toks.get(self.pos).cloned() else {
                        return Err(self.unexpected());
                    };
                    self.pos += 1;
                    if d == BigInt::from(0) {
                        return Err(ParseError::ZeroDenominator(at));
                    }
                    return Ok(Expr::Const(BigRational::new(n, d)));
                }
                Ok(Expr::Const(BigRational::from_integer(n)))
            }
            Tok::Name(name) => {
                self.pos += 1;
                Ok(Expr::Var(self.names.iter().position(|n| *n == name).expect("collected name")))
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op(_) => Err(self.unexpected()),
        }
    }
}

fn negate(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Mul(mut xs) => {
            if let Some(Expr::Const(c)) = xs.first_mut() {
                *c = -c.clone();
                Expr::product(xs)
            } else {
                xs.insert(0, Expr::Const(-BigRational::from_integer(1.into())));
                Expr::Mul(xs)
            }
        }
        other => Expr::Mul(vec![Expr::Const(-BigRational::from_integer(1.into())), other]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_sort_naturally() {
        let (_, names) = parse_expr("x10 + x2 + y + x1").unwrap();
        assert_eq!(names, ["x1", "x2", "x10", "y"]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expr("x +"), Err(ParseError::Unexpected { .. })));
        assert!(matches!(parse_expr("x ^ y"), Err(ParseError::Exponent(_))));
        assert!(matches!(parse_expr("x ^ 0"), Err(ParseError::Exponent(_))));
        assert!(matches!(parse_expr("1/0*x"), Err(ParseError::ZeroDenominator(_))));
        assert!(matches!(parse_expr("x $ y"), Err(ParseError::Unexpected { at: 2, .. })));
        assert!(matches!(parse_expr("(x"), Err(ParseError::Unexpected { .. })));
    }

    #[test]
    fn rationals_and_signs() {
        let (e, names) = parse_expr("-3/4*x - -y").unwrap();
        let p = e.expand(&names);
        assert_eq!(p.len(), 2);
        assert_eq!(p.terms().next().unwrap().1, &BigRational::new(1.into(), 1.into()));
    }
}
