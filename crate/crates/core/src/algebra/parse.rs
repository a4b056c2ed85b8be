//! Operator expressions such as `s+:0*sz:1`, `0.5*XIZ - i*Y:2` or `sx:0*sx:1 + sy:0*sy:1`.
//!
//! Grammar:
//! ```text
//! expr   := ["+" | "-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := number | "i" | "id" | "(" expr ")" | spin ":" site | letter ":" site | word
//! spin   := "sx" | "sy" | "sz" | "s+" | "s-"
//! letter := "X" | "Y" | "Z"
//! word   := [IXYZ]{n_sites}
//! ```

use num_complex::Complex64;

use super::spin::{pauli, s_minus, s_plus, spin, Axis};
use super::sum::OperatorSum;
use super::word::PauliWord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Site(String, usize),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            d if d.is_ascii_digit() || d == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v = text
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number \"{text}\" in \"{src}\"")))?;
                out.push(Tok::Num(v));
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let mut name: String = chars[start..i].iter().collect();
                if name == "s"
                    && i + 1 < chars.len()
                    && (chars[i] == '+' || chars[i] == '-')
                    && chars[i + 1] == ':'
                {
                    name.push(chars[i]);
                    i += 1;
                }
                if i < chars.len() && chars[i] == ':' {
                    i += 1;
                    let s0 = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if s0 == i {
                        return Err(Error::Parse(format!(
                            "missing site index after \"{name}:\" in \"{src}\""
                        )));
                    }
                    let site: String = chars[s0..i].iter().collect();
                    out.push(Tok::Site(name, site.parse().map_err(|_| {
                        Error::Parse(format!("bad site index \"{site}\" in \"{src}\""))
                    })?));
                } else {
                    out.push(Tok::Ident(name));
                }
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character '{other}' in \"{src}\""
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    n: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in \"{}\"", self.src))
    }

    fn expr(&mut self) -> Result<OperatorSum> {
        let mut sign = 1.0;
        match self.peek() {
            Some(Tok::Plus) => self.pos += 1,
            Some(Tok::Minus) => {
                self.pos += 1;
                sign = -1.0;
            }
            _ => {}
        }
        let mut acc = self.term()?.scale_real(sign);
        loop {
            let s = match self.peek() {
                Some(Tok::Plus) => 1.0,
                Some(Tok::Minus) => -1.0,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            acc = acc.axpy(Complex64::new(s, 0.0), &t)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<OperatorSum> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<OperatorSum> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.err("unexpected end of expression"))?;
        self.pos += 1;
        let id = OperatorSum::identity(self.n)?;
        match tok {
            Tok::Num(v) => Ok(id.scale_real(v)),
            Tok::LParen => {
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("missing ')'")),
                }
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(id.scale(Complex64::new(0.0, 1.0))),
                "id" => Ok(id),
                w if w.chars().all(|c| "IXYZ".contains(c)) => {
                    let word: PauliWord = w.parse()?;
                    if word.n_sites() != self.n {
                        return Err(Error::Dimension {
                            expected: self.n,
                            found: word.n_sites(),
                        });
                    }
                    Ok(OperatorSum::from_word(word, Complex64::new(1.0, 0.0)))
                }
                _ => Err(self.err(&format!("unknown operator \"{name}\""))),
            },
            Tok::Site(name, site) => {
                if site >= self.n {
                    return Err(Error::Validation(format!(
                        "site {site} out of range for {} site-flavors in \"{}\"",
                        self.n, self.src
                    )));
                }
                match name.as_str() {
                    "sx" => spin(self.n, site, Axis::X),
                    "sy" => spin(self.n, site, Axis::Y),
                    "sz" => spin(self.n, site, Axis::Z),
                    "s+" | "sp" => s_plus(self.n, site),
                    "s-" | "sm" => s_minus(self.n, site),
                    "X" => pauli(self.n, site, Axis::X),
                    "Y" => pauli(self.n, site, Axis::Y),
                    "Z" => pauli(self.n, site, Axis::Z),
                    _ => Err(self.err(&format!("unknown site operator \"{name}\""))),
                }
            }
            Tok::Plus | Tok::Minus | Tok::Star | Tok::RParen => {
                Err(self.err(&format!("unexpected token at position {}", self.pos)))
            }
        }
    }
}

/// Parses an operator expression over `n_sites` site-flavors.
pub fn parse_operator(src: &str, n_sites: usize) -> Result<OperatorSum> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty operator expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        n: n_sites,
        src,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::spin::{sx, sz};

    #[test]
    fn shorthand_products() {
        let a = parse_operator("s+:0*sz:1", 2).unwrap();
        let b = s_plus(2, 0).unwrap().mul(&sz(2, 1).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sums_with_coefficients() {
        let a = parse_operator("0.5*XI - 2e-1*i*ZZ + sx:1", 2).unwrap();
        assert_eq!(a.coeff(&"XI".parse().unwrap()), Complex64::new(0.5, 0.0));
        assert_eq!(a.coeff(&"ZZ".parse().unwrap()), Complex64::new(0.0, -0.2));
        assert_eq!(a.coeff(&"IX".parse().unwrap()), Complex64::new(0.5, 0.0));
        let b = parse_operator("-(sx:0 + sx:1)", 2).unwrap();
        assert_eq!(b, sx(2, 0).unwrap().add(&sx(2, 1).unwrap()).unwrap().scale_real(-1.0));
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse_operator("sq:0", 2).is_err());
        assert!(parse_operator("sx:5", 2).is_err());
        assert!(matches!(parse_operator("XYZ", 2), Err(Error::Dimension { .. })));
        assert!(parse_operator("sx:0 *", 2).is_err());
        assert!(parse_operator("(sx:0", 2).is_err());
        assert!(parse_operator("", 2).is_err());
    }
}
