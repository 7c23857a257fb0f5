//! Text form of polynomials.
//!
//! Grammar (whitespace free between tokens):
//!   poly   := ['-'] term (('+'|'-') term)*   |  '0'
//!   term   := coeff ('*' factor)* | [coeff '*'] factor ('*' factor)*
//!   factor := 'x' INT ['^' INT]
//!   coeff  := INT ['/' INT]
//!
//! `render_poly` emits the canonical degrevlex-descending form and
//! `parse_poly(render_poly(p)) == p` holds for every polynomial.

use crate::field::{abs, is_negative, FieldElement, FieldSpec};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use num_bigint::BigInt;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), pos: 0 }
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

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn small_integer(&mut self, what: &str, max: u64) -> Result<u64, ParseError> {
        let start = self.pos;
        let v = self.integer()?;
        let (sign, digits) = v.to_u64_digits();
        let small = match (sign, digits.as_slice()) {
            (num_bigint::Sign::NoSign, _) => 0,
            (_, [d]) => *d,
            _ => u64::MAX,
        };
        if small > max {
            self.pos = start;
            return self.err(format!("{what} too large (max {max})"));
        }
        Ok(small)
    }
}

pub fn parse_poly(src: &str, n: usize, field: FieldSpec) -> Result<Polynomial, ParseError> {
    let mut lx = Lexer::new(src);
    let mut terms: Vec<(Monomial, FieldElement)> = Vec::new();

    let mut negate = lx.eat(b'-');
    loop {
        let (m, c) = parse_term(&mut lx, n, field)?;
        let c = if negate { c.neg() } else { c };
        terms.push((m, c));
        match lx.peek() {
            Some(b'+') => {
                lx.bump();
                negate = false;
            }
            Some(b'-') => {
                lx.bump();
                negate = true;
            }
            None => break,
            Some(c) => return lx.err(format!("unexpected character `{}`", c as char)),
        }
    }
    lx.skip_ws();
    if lx.pos != lx.src.len() {
        return lx.err("trailing input");
    }
    Ok(Polynomial::from_terms(n, field, terms))
}

fn parse_term(
    lx: &mut Lexer,
    n: usize,
    field: FieldSpec,
) -> Result<(Monomial, FieldElement), ParseError> {
    let mut coeff = field.one();
    let mut exps = vec![0u16; n];
    let mut saw_factor = false;
    let mut saw_coeff = false;

    match lx.peek() {
        Some(c) if c.is_ascii_digit() => {
            saw_coeff = true;
            let numer = lx.integer()?;
            let mut value = field.from_bigint(&numer);
            if lx.eat(b'/') {
                let denom_pos = lx.pos;
                let denom = lx.integer()?;
                let d = field.from_bigint(&denom);
                if d.is_zero() {
                    return Err(ParseError {
                        pos: denom_pos,
                        msg: "zero denominator".into(),
                    });
                }
                value = value.div(&d);
            }
            coeff = value;
            // `3*x1` — a star after the coefficient introduces factors
            if !lx.eat(b'*') {
                return Ok((Monomial::from_exps(exps), coeff));
            }
        }
        _ => {}
    }

    // Reaching the top of this loop always means a factor is required: either
    // the term is just starting, or a `*` was consumed.
    loop {
        match lx.peek() {
            Some(b'x') => {
                lx.bump();
                let idx_pos = lx.pos;
                let idx = lx.small_integer("variable index", usize::MAX as u64)? as usize;
                if idx == 0 || idx > n {
                    return Err(ParseError {
                        pos: idx_pos,
                        msg: format!("unknown variable x{idx} (ring has x1..x{n})"),
                    });
                }
                let e = if lx.eat(b'^') {
                    lx.small_integer("exponent", u16::MAX as u64)? as u16
                } else {
                    1
                };
                let slot = &mut exps[idx - 1];
                *slot = slot
                    .checked_add(e)
                    .ok_or_else(|| ParseError { pos: idx_pos, msg: "exponent overflow".into() })?;
                saw_factor = true;
                if !lx.eat(b'*') {
                    break;
                }
            }
            _ if !saw_coeff && !saw_factor => return lx.err("expected a term"),
            _ => return lx.err("expected a factor after `*`"),
        }
    }
    Ok((Monomial::from_exps(exps), coeff))
}

pub fn render_poly(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = is_negative(c);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = abs(c);
        if m.is_one() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&format!("{mag}*{m}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn qq(src: &str, n: usize) -> Polynomial {
        parse_poly(src, n, FieldSpec::QQ).unwrap()
    }

    #[test]
    fn parses_the_grammar() {
        let p = qq("x1^2*x2 + 3*x3 - 1/2*x1*x1", 3);
        assert_eq!(render_poly(&p), "x1^2*x2 - 1/2*x1^2 + 3*x3");
        assert_eq!(qq("0", 4), Polynomial::zero(4, FieldSpec::QQ));
        assert_eq!(qq("  x2 ", 2), Polynomial::var(2, 1, FieldSpec::QQ));
        // repeated factors multiply out
        assert_eq!(qq("x1*x1^2", 1), qq("x1^3", 1));
        // constants and leading minus are accepted
        assert_eq!(render_poly(&qq("-x1 + 2", 1)), "-x1 + 2");
        assert_eq!(render_poly(&qq("5/15", 1)), "1/3");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_poly("", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("x0", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("x3", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("x1 +", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("1/0", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("x1^", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("3*", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("3*x1*", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("x1 x2", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("y1", 2, FieldSpec::QQ).is_err());
        assert!(parse_poly("x1^70000", 2, FieldSpec::QQ).is_err());
    }

    #[test]
    fn error_positions_point_at_the_problem() {
        let e = parse_poly("x1 + x9", 3, FieldSpec::QQ).unwrap_err();
        assert_eq!(e.pos, 6);
        assert!(e.msg.contains("x9"));
    }

    #[test]
    fn prime_field_coefficients_reduce() {
        let f = FieldSpec::Fp(7);
        let p = parse_poly("8*x1 + 3/5*x2", 2, f).unwrap();
        // 8 = 1 mod 7, 3/5 = 3*3 = 2 mod 7 (5*3 = 15 = 1)
        assert_eq!(render_poly(&p), "x1 + 2*x2");
        assert!(parse_poly("1/7", 2, f).is_err()); // denominator vanishes mod 7
    }

    #[test]
    fn roundtrip_examples() {
        for src in [
            "x1^2*x2 - 1/2*x1^2 + 3*x3",
            "0",
            "-2*x1*x2*x3",
            "x1 - x2 + x3 - 1",
            "7",
            "2/3",
        ] {
            let p = qq(src, 3);
            assert_eq!(render_poly(&p), src, "canonical form should be stable");
            assert_eq!(qq(&render_poly(&p), 3), p);
        }
    }
}
