use crate::error::{Error, Result};
use std::fmt;

/// A finite alphabet of lowercase ASCII letters. The letter order is fixed at
/// construction and indexes everything downstream (letter images, class maps).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<u8>,
}

impl Alphabet {
    pub fn new(letters: &[u8]) -> Result<Alphabet> {
        if letters.is_empty() {
            return Err(Error::InvalidAutomaton("alphabet must be non-empty".into()));
        }
        let mut seen = [false; 26];
        for &b in letters {
            if !b.is_ascii_lowercase() {
                return Err(Error::UnknownSymbol { symbol: b as char });
            }
            if seen[(b - b'a') as usize] {
                return Err(Error::InvalidAutomaton(format!(
                    "duplicate letter '{}' in alphabet",
                    b as char
                )));
            }
            seen[(b - b'a') as usize] = true;
        }
        Ok(Alphabet { letters: letters.to_vec() })
    }

    #[allow(clippy::should_implement_trait)] // also provided via FromStr below
    pub fn from_str(s: &str) -> Result<Alphabet> {
        Alphabet::new(s.as_bytes())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Index of a letter in the fixed order, if present.
    pub fn index_of(&self, symbol: u8) -> Option<usize> {
        self.letters.iter().position(|&b| b == symbol)
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.index_of(symbol).is_some()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.letters {
            write!(f, "{}", b as char)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Alphabet> {
        Alphabet::new(s.as_bytes())
    }
}

/// Regular expression syntax tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Epsilon,
    Letter(u8),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn union(l: Regex, r: Regex) -> Regex {
        Regex::Union(Box::new(l), Box::new(r))
    }

    pub fn concat(l: Regex, r: Regex) -> Regex {
        Regex::Concat(Box::new(l), Box::new(r))
    }

    pub fn star(inner: Regex) -> Regex {
        Regex::Star(Box::new(inner))
    }

    pub fn depth(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Letter(_) => 0,
            Regex::Union(l, r) | Regex::Concat(l, r) => 1 + l.depth().max(r.depth()),
            Regex::Star(c) => 1 + c.depth(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(..) => 0,
            Regex::Concat(..) => 1,
            Regex::Star(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            Regex::Empty => write!(f, "%0")?,
            Regex::Epsilon => write!(f, "%e")?,
            Regex::Letter(b) => write!(f, "{}", *b as char)?,
            Regex::Union(l, r) => {
                l.fmt_prec(f, 0)?;
                write!(f, "|")?;
                r.fmt_prec(f, 0)?;
            }
            Regex::Concat(l, r) => {
                l.fmt_prec(f, 1)?;
                r.fmt_prec(f, 1)?;
            }
            Regex::Star(c) => {
                // a factor takes at most one star, so stars of stars need
                // parentheses
                c.fmt_prec(f, 3)?;
                write!(f, "*")?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Parse a regular expression against the grammar
/// `expr := term ('|' term)*; term := factor+; factor := atom '*'?;
///  atom := LETTER | '%e' | '%0' | '(' expr ')'`.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Regex> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0, alphabet };
    let re = p.expr()?;
    if p.pos < p.bytes.len() {
        return Err(Error::RegexSyntax {
            pos: p.pos,
            msg: format!("unexpected '{}'", p.bytes[p.pos] as char),
        });
    }
    Ok(re)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Regex> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let rhs = self.term()?;
            acc = Regex::union(acc, rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Regex> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            if c == b'|' || c == b')' {
                break;
            }
            let rhs = self.factor()?;
            acc = Regex::concat(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Regex> {
        let atom = self.atom()?;
        if self.peek() == Some(b'*') {
            self.pos += 1;
            return Ok(Regex::star(atom));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Regex> {
        match self.peek() {
            None => Err(Error::RegexSyntax { pos: self.pos, msg: "unexpected end of input".into() }),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::RegexSyntax { pos: self.pos, msg: "expected ')'".into() });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'%') => {
                self.pos += 1;
                match self.peek() {
                    Some(b'e') => {
                        self.pos += 1;
                        Ok(Regex::Epsilon)
                    }
                    Some(b'0') => {
                        self.pos += 1;
                        Ok(Regex::Empty)
                    }
                    other => Err(Error::RegexSyntax {
                        pos: self.pos,
                        msg: format!("expected 'e' or '0' after '%', got {:?}", other.map(|b| b as char)),
                    }),
                }
            }
            Some(c) if c.is_ascii_lowercase() => {
                if !self.alphabet.contains(c) {
                    return Err(Error::UnknownSymbol { symbol: c as char });
                }
                self.pos += 1;
                Ok(Regex::Letter(c))
            }
            Some(c) => Err(Error::RegexSyntax {
                pos: self.pos,
                msg: format!("unexpected '{}'", c as char),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_str("ab").unwrap()
    }

    #[test]
    fn parse_star_of_concat() {
        let re = parse_regex("(ab)*", &ab()).unwrap();
        assert_eq!(
            re,
            Regex::star(Regex::concat(Regex::Letter(b'a'), Regex::Letter(b'b')))
        );
    }

    #[test]
    fn parse_literals() {
        assert_eq!(parse_regex("%e", &ab()).unwrap(), Regex::Epsilon);
        assert_eq!(
            parse_regex("a|%0", &ab()).unwrap(),
            Regex::union(Regex::Letter(b'a'), Regex::Empty)
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_regex("a|*", &ab()) {
            Err(Error::RegexSyntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_regex("ac", &ab()) {
            Err(Error::UnknownSymbol { symbol }) => assert_eq!(symbol, 'c'),
            other => panic!("expected unknown symbol, got {other:?}"),
        }
    }

    #[test]
    fn pretty_round_trip() {
        for src in ["(ab)*", "a|%0", "%e", "a*b|ba*", "((a|b)(a|b))*", "(a*)*"] {
            let re = parse_regex(src, &ab()).unwrap();
            let printed = re.to_string();
            let reparsed = parse_regex(&printed, &ab()).unwrap();
            assert_eq!(re, reparsed, "round trip failed for {src} -> {printed}");
        }
    }

    #[test]
    fn a_factor_takes_at_most_one_star() {
        assert!(parse_regex("a**", &ab()).is_err());
        assert!(parse_regex("(a*)*", &ab()).is_ok());
        let nested = Regex::star(Regex::star(Regex::Letter(b'a')));
        assert_eq!(nested.to_string(), "(a*)*");
    }
}
