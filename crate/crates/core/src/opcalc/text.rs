//! Parser for the textual operator format.
//!
//! Grammar (whitespace-insensitive between tokens):
//! ```text
//! poly   := ["+"|"-"] term (("+"|"-") term)*  |  "0"
//! term   := factor (("*"|"/") factor)* [word]  |  word
//! factor := integer | "n" | "(" expr ")"   with optional "^" integer
//! expr   := ordinary arithmetic over factors with + - * /
//! word   := letter+   letter := ("i"|"j"|"d"|"δ"|"delta"|"|y|") ["^" integer]
//! ```
//! The literal `1` in the word position is a coefficient factor, so `(n-1) * 1` parses.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ncpoly::{Letter, NCPoly, Word};
use super::ratfun::DimRational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    N,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Letter(Letter),
    Rad,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
            continue;
        }
        let rest = &s[pos..];
        let tok = if ch.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, c)) = it.peek() {
                if c.is_ascii_digit() {
                    end = p + c.len_utf8();
                    it.next();
                } else {
                    break;
                }
            }
            let v: BigInt = s[pos..end].parse().map_err(|_| Error::Parse { pos, msg: "bad integer".into() })?;
            out.push((pos, Tok::Int(v)));
            continue;
        } else if rest.starts_with("delta") {
            for _ in 0..5 {
                it.next();
            }
            out.push((pos, Tok::Letter(Letter::Delta)));
            continue;
        } else if rest.starts_with("|y|") {
            for _ in 0..3 {
                it.next();
            }
            out.push((pos, Tok::Rad));
            continue;
        } else {
            match ch {
                'n' => Tok::N,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' | '·' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                'i' => Tok::Letter(Letter::I),
                'j' => Tok::Letter(Letter::J),
                'd' => Tok::Letter(Letter::D),
                'δ' => Tok::Letter(Letter::Delta),
                _ => return Err(Error::Parse { pos, msg: format!("unexpected character {ch:?}") }),
            }
        };
        it.next();
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.src.len())
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.to_string() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(v)) => u32::try_from(v).map_err(|_| Error::Parse { pos: self.pos(), msg: "exponent too large".into() }),
                _ => {
                    self.at -= 1;
                    self.err("expected integer exponent")
                }
            }
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<DimRational> {
        let base = match self.peek() {
            Some(Tok::Int(_)) => {
                let Some(Tok::Int(v)) = self.bump() else { unreachable!() };
                DimRational::from_rational(BigRational::from_integer(v))
            }
            Some(Tok::N) => {
                self.bump();
                DimRational::n()
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.at -= 1;
                    return self.err("expected ')'");
                }
                e
            }
            Some(Tok::Minus) => {
                self.bump();
                return Ok(-&self.factor()?);
            }
            _ => return self.err("expected a number, n, or '('"),
        };
        Ok(base.pow(self.exponent()?))
    }

    fn product(&mut self) -> Result<DimRational> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.factor()?;
                    acc = (&acc / &d).map_err(|_| Error::Parse { pos, msg: "division by zero".into() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn expr(&mut self) -> Result<DimRational> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.product()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn is_word_start(&self) -> bool {
        matches!(self.peek(), Some(Tok::Letter(_)) | Some(Tok::Rad))
    }

    fn word(&mut self) -> Result<Word> {
        let mut letters = Vec::new();
        let mut rad = 0u32;
        while self.is_word_start() {
            match self.bump() {
                Some(Tok::Letter(l)) => {
                    let e = self.exponent()?;
                    letters.extend(std::iter::repeat_n(l, e as usize));
                }
                Some(Tok::Rad) => {
                    let e = self.exponent()?;
                    if e % 2 != 0 {
                        self.at -= 1;
                        return self.err("|y| must carry an even exponent");
                    }
                    rad += e / 2;
                }
                _ => unreachable!(),
            }
        }
        Ok(Word::new(letters, rad))
    }

    fn term(&mut self) -> Result<(DimRational, Word)> {
        if self.is_word_start() {
            return Ok((DimRational::one(), self.word()?));
        }
        let mut c = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    if self.is_word_start() {
                        return Ok((c, self.word()?));
                    }
                    c = &c * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.factor()?;
                    c = (&c / &d).map_err(|_| Error::Parse { pos, msg: "division by zero".into() })?;
                }
                _ if self.is_word_start() => return Ok((c, self.word()?)),
                _ => return Ok((c, Word::identity())),
            }
        }
    }
}

/// Parses the textual form produced by [`NCPoly::to_text`].
pub fn parse(text: &str, base_rank: usize) -> Result<NCPoly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, src: text };
    let mut out = NCPoly::zero(base_rank);
    if p.peek().is_none() {
        return p.err("empty input");
    }
    let mut sign = match p.peek() {
        Some(Tok::Minus) => {
            p.bump();
            -1
        }
        Some(Tok::Plus) => {
            p.bump();
            1
        }
        _ => 1,
    };
    loop {
        let pos = p.pos();
        let (c, w) = p.term()?;
        if w.output_rank(base_rank).is_none() && !c.is_zero() {
            return Err(Error::Parse { pos, msg: format!("word `{w}` is inadmissible on rank {base_rank}") });
        }
        let c = if sign < 0 { -&c } else { c };
        let before = out.clone();
        out.add_term(w, c);
        if let (Some(a), Some(b)) = (before.output_rank(), out.output_rank()) {
            if a != b {
                return Err(Error::Parse { pos, msg: "terms have different output ranks".into() });
            }
        }
        match p.bump() {
            None => return Ok(out),
            Some(Tok::Plus) => sign = 1,
            Some(Tok::Minus) => sign = -1,
            Some(_) => {
                p.at -= 1;
                return p.err("expected '+', '-' or end of input");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::pipeline::{a_operator, p_polys};
    use super::*;

    #[test]
    fn roundtrip_pipeline_outputs() {
        for m in 0..4 {
            for r in 0..3 {
                for l in 0..=r {
                    let a = a_operator(m, r, l).unwrap();
                    let t = a.to_text();
                    let back = parse(&t, m).unwrap();
                    assert_eq!(back, a, "{t}");
                }
            }
        }
        let p = p_polys(2, 3).unwrap();
        for q in p.values() {
            assert_eq!(&parse(&q.to_text(), 3).unwrap(), q);
        }
    }

    #[test]
    fn accepts_alternative_spellings() {
        let a = parse("-(1/(n-1)) * j d^2", 0).unwrap();
        let b = parse("- 1/(n - 1) * j d d", 0).unwrap();
        assert_eq!(a, b);
        let c = parse("2*(n-1)/(2*n-2) * delta^2 i", 0).unwrap();
        assert_eq!(c.to_text(), "δ^2 i");
        assert_eq!(parse("0", 2).unwrap(), NCPoly::zero(2));
        assert_eq!(parse("(n-1) * 1", 1).unwrap().to_text(), "(n-1) * 1");
    }

    #[test]
    fn errors_carry_positions() {
        match parse("2 * j ? d", 2) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(n-1", 0), Err(Error::Parse { .. })));
        assert!(matches!(parse("", 0), Err(Error::Parse { .. })));
        assert!(matches!(parse("j", 0), Err(Error::Parse { .. })));
    }
}
