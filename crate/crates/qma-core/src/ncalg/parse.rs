//! Expression and presentation-file parsing.
//!
//! Expression grammar:
//! `poly := term (('+'|'-') term)*`,
//! `term := scalar? ('*'? atom)*`,
//! `atom := ident ('^' uint)?`,
//! with scalar literals in the signed Laurent-in-q syntax. `q` is reserved.

use num::bigint::BigInt;
use num::rational::BigRational;

use super::{NCPoly, Presentation, Word};
use crate::error::{Error, Result};
use crate::scalar::FieldContext;

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn new(src: &'a str) -> Self {
        PolyParser {
            src: src.as_bytes(),
            pos: 0,
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

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn poly(&mut self, p: &Presentation) -> Result<NCPoly> {
        let ctx = p.field();
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let t = self.term(p)?;
                NCPoly::zero().sub(&t, ctx)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term(p)?
            }
            _ => self.term(p)?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term(p)?;
                    acc = acc.add(&t, ctx);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term(p)?;
                    acc = acc.sub(&t, ctx);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self, p: &Presentation) -> Result<NCPoly> {
        let ctx = p.field();
        let mut acc = self.factor(p)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor(p)?;
                    acc = acc.mul_free(&f, ctx);
                }
                Some(c) if c == b'(' || c.is_ascii_digit() || c.is_ascii_alphabetic() || c == b'_' => {
                    let f = self.factor(p)?;
                    acc = acc.mul_free(&f, ctx);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self, p: &Presentation) -> Result<NCPoly> {
        let ctx = p.field();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly(p)?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let r = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.uint()?;
                    if den == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from(num)
                };
                Ok(NCPoly::term(Word::one(), ctx.from_rational(r), ctx))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                if name == "q" {
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.signed_int()?
                    } else {
                        1
                    };
                    Ok(NCPoly::term(Word::one(), ctx.q_pow(e), ctx))
                } else {
                    let g = p
                        .gen_index(&name)
                        .ok_or(Error::UnknownGenerator(name))?;
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let e = self.signed_int()?;
                        if e < 0 {
                            return self.err("generator exponents must be nonnegative");
                        }
                        e as usize
                    } else {
                        1
                    };
                    Ok(NCPoly::term(Word::pow(g, e), ctx.one(), ctx))
                }
            }
            _ => self.err("expected factor"),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8(self.src[start..self.pos].to_vec()).unwrap()
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = self.uint()?;
        let v: i64 = v
            .try_into()
            .map_err(|_| Error::Syntax {
                pos: self.pos,
                msg: "exponent too large".into(),
            })?;
        Ok(if neg { -v } else { v })
    }
}

/// Parse an expression over the presentation's generators and return its
/// normal form.
pub fn parse_poly(text: &str, p: &Presentation) -> Result<NCPoly> {
    let mut parser = PolyParser::new(text);
    let raw = parser.poly(p)?;
    if parser.peek().is_some() {
        return parser.err("trailing input");
    }
    p.normalize(&raw)
}

/// Parse a line-oriented presentation file:
///
/// ```text
/// algebra myalg
/// field cyclotomic m=3
/// generators A < B < C
/// rule B*A -> q*A*B
/// # comments and blank lines are ignored
/// ```
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut name = String::from("user");
    let mut field: Option<FieldContext> = None;
    let mut generators: Vec<String> = Vec::new();
    let mut rule_lines: Vec<(usize, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "algebra" => name = rest.to_string(),
            "field" => {
                let mut m: Option<u64> = None;
                let mut p: Option<u64> = None;
                let mut backend = "";
                for part in rest.split_whitespace() {
                    if let Some((k, v)) = part.split_once('=') {
                        let v: u64 = v.parse().map_err(|_| Error::Syntax {
                            pos: lineno + 1,
                            msg: format!("bad number in `{part}`"),
                        })?;
                        match k {
                            "m" => m = Some(v),
                            "p" => p = Some(v),
                            _ => {
                                return Err(Error::Syntax {
                                    pos: lineno + 1,
                                    msg: format!("unknown field parameter `{k}`"),
                                })
                            }
                        }
                    } else {
                        backend = match part {
                            "cyclotomic" | "prime" => part,
                            _ => {
                                return Err(Error::Syntax {
                                    pos: lineno + 1,
                                    msg: format!("unknown backend `{part}`"),
                                })
                            }
                        };
                    }
                }
                let m = m.ok_or(Error::Syntax {
                    pos: lineno + 1,
                    msg: "field line needs m=<int>".into(),
                })?;
                field = Some(match backend {
                    "prime" => FieldContext::prime(
                        m,
                        p.ok_or(Error::Syntax {
                            pos: lineno + 1,
                            msg: "prime backend needs p=<int>".into(),
                        })?,
                    )?,
                    _ => FieldContext::cyclotomic(m)?,
                });
            }
            "generators" => {
                generators = rest
                    .split('<')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
            }
            "rule" => rule_lines.push((lineno + 1, rest.to_string())),
            _ => {
                return Err(Error::Syntax {
                    pos: lineno + 1,
                    msg: format!("unknown directive `{head}`"),
                })
            }
        }
    }

    let field = field.ok_or(Error::Syntax {
        pos: 0,
        msg: "missing `field` line".into(),
    })?;
    if generators.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "missing `generators` line".into(),
        });
    }
    // name-resolution presentation without rules
    let resolver = Presentation::new(field.clone(), generators.clone(), Vec::new(), &name)?;

    let mut rules = Vec::new();
    for (lineno, line) in rule_lines {
        let (lhs, rhs) = line.split_once("->").ok_or(Error::Syntax {
            pos: lineno,
            msg: "rule needs `lhs -> rhs`".into(),
        })?;
        let lhs_poly = parse_poly(lhs.trim(), &resolver)?;
        if lhs_poly.terms.len() != 1 {
            return Err(Error::Syntax {
                pos: lineno,
                msg: "rule lhs must be a single two-letter word".into(),
            });
        }
        let (w, c) = lhs_poly.terms.iter().next().unwrap();
        if w.len() != 2 || !field.is_one(c) {
            return Err(Error::Syntax {
                pos: lineno,
                msg: "rule lhs must be a product of exactly two generators".into(),
            });
        }
        let rhs_poly = parse_poly(rhs.trim(), &resolver)?;
        rules.push(((w.0[0], w.0[1]), rhs_poly));
    }
    Presentation::new(field, generators, rules, name)
}
