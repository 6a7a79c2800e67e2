//! Recursive-descent parser for meromorphic expressions.
//!
//! Grammar (whitespace insensitive):
//!   program := (let_stmt)* expr
//!   let_stmt := 'let' ident '=' expr ';'
//!   expr := ['-'] term (('+' | '-') term)*
//!   term := factor ('*' factor)*
//!   factor := primary ('^-1')*
//!   primary := scalar | letter | ident | '(' expr ')'
//!
//! Scalars are integer or 'p/q' fraction literals; letters are x1, x2, ...;
//! identifiers refer to atoms registered by a let statement. Let bodies must
//! be inversion free (they define polynomial atoms).

use super::{Atom, AtomTable, MeroExpr};
use crate::exactmath::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{}'", c as char))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphabetic() || *c == b'_')
        {
            self.pos += 1;
            while self
                .src
                .get(self.pos)
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
            {
                self.pos += 1;
            }
            Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        } else {
            None
        }
    }

    fn number(&mut self) -> Result<Scalar, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.error("expected a number");
        }
        let mut text = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        // optional fraction part
        let save = self.pos;
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            self.skip_ws();
            let dstart = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            if self.pos == dstart {
                self.pos = save;
            } else {
                text.push('/');
                text.push_str(&String::from_utf8_lossy(&self.src[dstart..self.pos]));
            }
        } else {
            self.pos = save;
        }
        text.parse().map_err(|_| SyntaxError {
            pos: start,
            msg: format!("invalid number {text:?}"),
        })
    }

    fn primary(&mut self, atoms: &mut AtomTable) -> Result<MeroExpr, SyntaxError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr(atoms)?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(MeroExpr::Const(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.ident().expect("alphabetic start");
                if let Some(rest) = name.strip_prefix('x') {
                    if let Ok(j) = rest.parse::<u16>() {
                        if j >= 1 {
                            atoms.g = atoms.g.max(j as usize);
                            return Ok(MeroExpr::Letter(j));
                        }
                    }
                }
                match atoms.lookup(&name) {
                    Some(idx) => Ok(MeroExpr::Atom(idx)),
                    None => Err(SyntaxError {
                        pos: start,
                        msg: format!("unknown atom {name:?}"),
                    }),
                }
            }
            Some(c) => self.error(format!("unexpected character '{}'", c as char)),
            None => self.error("unexpected end of input"),
        }
    }

    fn factor(&mut self, atoms: &mut AtomTable) -> Result<MeroExpr, SyntaxError> {
        let mut out = self.primary(atoms)?;
        loop {
            let save = self.pos;
            if self.eat(b'^') {
                if self.eat(b'-') && self.eat(b'1') {
                    out = MeroExpr::Inv(Box::new(out));
                } else {
                    self.pos = save;
                    return self.error("only the exponent ^-1 is supported");
                }
            } else {
                return Ok(out);
            }
        }
    }

    fn term(&mut self, atoms: &mut AtomTable) -> Result<MeroExpr, SyntaxError> {
        let mut factors = vec![self.factor(atoms)?];
        while self.eat(b'*') {
            factors.push(self.factor(atoms)?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("nonempty")
        } else {
            MeroExpr::Prod(factors)
        })
    }

    fn expr(&mut self, atoms: &mut AtomTable) -> Result<MeroExpr, SyntaxError> {
        let mut terms = Vec::new();
        let negate_first = self.eat(b'-');
        let first = self.term(atoms)?;
        terms.push(if negate_first { negate(first) } else { first });
        loop {
            if self.eat(b'+') {
                terms.push(self.term(atoms)?);
            } else if self.eat(b'-') {
                terms.push(negate(self.term(atoms)?));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("nonempty")
        } else {
            MeroExpr::Sum(terms)
        })
    }
}

fn negate(e: MeroExpr) -> MeroExpr {
    MeroExpr::Prod(vec![MeroExpr::Const(Scalar::from_int(-1)), e])
}

/// Parse a single expression against an existing atom table.
pub fn parse_expression(text: &str, atoms: &mut AtomTable) -> Result<MeroExpr, SyntaxError> {
    let mut p = Parser::new(text);
    let expr = p.expr(atoms)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.error("trailing input after expression");
    }
    Ok(expr)
}

/// Parse a program: an optional preamble of `let name = <poly expr>;`
/// definitions followed by the main expression. Let bodies must expand to
/// polynomials (no inverses).
pub fn parse_program(text: &str) -> Result<(AtomTable, MeroExpr), SyntaxError> {
    let mut atoms = AtomTable::new(0);
    let mut p = Parser::new(text);
    loop {
        let save = p.pos;
        let is_let = p.ident().as_deref() == Some("let");
        if !is_let {
            p.pos = save;
            break;
        }
        let Some(name) = p.ident() else {
            return p.error("expected a name after 'let'");
        };
        if atoms.lookup(&name).is_some() {
            return p.error(format!("duplicate atom {name:?}"));
        }
        p.expect(b'=')?;
        let body_start = p.pos;
        let body = p.expr(&mut atoms)?;
        p.expect(b';')?;
        let Some(poly) = body.expand_polynomial(&atoms) else {
            return Err(SyntaxError {
                pos: body_start,
                msg: format!("atom {name:?} must be inversion-free"),
            });
        };
        atoms.register(&name, Atom::Poly(poly));
    }
    let expr = p.expr(&mut atoms)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.error("trailing input after expression");
    }
    atoms.g = atoms.g.max(1);
    Ok((atoms, expr))
}
