use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{PolyError, Polynomial, Rational};

/// Variable names plus named rational parameters for the text syntax.
#[derive(Debug, Clone, Default)]
pub struct ParseContext {
    pub variables: Vec<String>,
    pub parameters: HashMap<String, Rational>,
}

impl ParseContext {
    pub fn new(variables: &[String]) -> Self {
        ParseContext {
            variables: variables.to_vec(),
            parameters: HashMap::new(),
        }
    }

    pub fn with_parameters(variables: &[String], parameters: HashMap<String, Rational>) -> Self {
        ParseContext {
            variables: variables.to_vec(),
            parameters,
        }
    }
}

/// Parses `+ - * / ^` expressions with parentheses. Division is only allowed
/// by constants; exponents are non-negative integer literals.
pub fn parse_polynomial(src: &str, ctx: &ParseContext) -> Result<Polynomial, PolyError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        ctx,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.ctx.variables.len()
    }

    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            if c == b'*' {
                acc = &acc * &rhs;
            } else {
                if !rhs.is_constant() {
                    return Err(self.err("division by a non-constant"));
                }
                let c = rhs.constant_term();
                if c.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&(Rational::from_integer(1.into()) / c));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            let e: u32 = text.parse().map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0");
                let n: BigInt = text.parse().map_err(|_| self.err("bad integer"))?;
                Ok(Polynomial::constant(self.nvars(), Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                if let Some(i) = self.ctx.variables.iter().position(|v| v == name) {
                    return Polynomial::variable(self.nvars(), i);
                }
                if let Some(v) = self.ctx.parameters.get(name) {
                    return Ok(Polynomial::constant(self.nvars(), v.clone()));
                }
                self.pos = start;
                Err(self.err(&format!("unknown identifier {name:?}")))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn round_trip() {
        let ctx = ParseContext::new(&names());
        for s in [
            "2*x^2*y - 3/2*z + 1",
            "0",
            "-x",
            "x*y*z*w - 7/3",
            "y^2 + 2*y*z - 2*y*w + z^2 - 2*z*w + w^2",
        ] {
            let p = parse_polynomial(s, &ctx).unwrap();
            assert_eq!(p.to_string_with(&names()), s);
            assert_eq!(parse_polynomial(&p.to_string_with(&names()), &ctx).unwrap(), p);
        }
    }

    #[test]
    fn parameters_and_parentheses() {
        let mut params = HashMap::new();
        params.insert("gamma".to_string(), Rational::from_integer(2.into()));
        let ctx = ParseContext::with_parameters(&names(), params);
        let p = parse_polynomial("x*(gamma*z - y) - (y+z-w)^2/gamma", &ctx).unwrap();
        let q = parse_polynomial(
            "2*x*z - x*y - 1/2*y^2 - y*z + y*w - 1/2*z^2 + z*w - 1/2*w^2",
            &ctx,
        )
        .unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn errors() {
        let ctx = ParseContext::new(&names());
        assert!(parse_polynomial("x + q", &ctx).is_err());
        assert!(parse_polynomial("x / y", &ctx).is_err());
        assert!(parse_polynomial("x^", &ctx).is_err());
        assert!(parse_polynomial("(x + y", &ctx).is_err());
        assert!(parse_polynomial("x/0", &ctx).is_err());
    }
}
