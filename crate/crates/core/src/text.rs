//! Text grammars for free words and braid words.
//!
//! Tokens are whitespace separated. A token is a base followed by an optional
//! `^k` exponent (`^-1`, `^3`, `^0`). Free bases are `x<i>` or `y<i>`; braid
//! bases are `b<i>` for σ_i and `s<j>.<i>` for the pure generator s_ji.
//! A lone `e` denotes the empty word.

use crate::error::{Error, Result};
use crate::word::{Letter, ReducedWord};

const MAX_EXPONENT: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Base {
    Free(char, u32),
    Sigma(u32),
    Pure(u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Token {
    pub base: Base,
    pub exp: i64,
    pub pos: usize,
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - text.as_ptr() as usize, tok))
}

fn nat(s: &str, pos: usize) -> Result<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(
            pos,
            format!("expected a positive integer, found {s:?}"),
        ));
    }
    match s.parse::<u32>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(Error::parse(pos, format!("index {s:?} out of range"))),
    }
}

fn parse_token(tok: &str, pos: usize) -> Result<Token> {
    let (base, exp) = match tok.find('^') {
        Some(k) => (&tok[..k], Some((&tok[k + 1..], pos + k + 1))),
        None => (tok, None),
    };
    let exp = match exp {
        None => 1,
        Some((e, epos)) => {
            let v: i64 = e
                .parse()
                .map_err(|_| Error::parse(epos, format!("bad exponent {e:?}")))?;
            if v.abs() > MAX_EXPONENT {
                return Err(Error::parse(epos, format!("exponent {v} too large")));
            }
            v
        }
    };
    let mut chars = base.chars();
    let base = match chars.next() {
        Some(c @ ('x' | 'y')) => Base::Free(c, nat(chars.as_str(), pos + 1)?),
        Some('b') => Base::Sigma(nat(chars.as_str(), pos + 1)?),
        Some('s') => {
            let rest = chars.as_str();
            let dot = rest
                .find('.')
                .ok_or_else(|| Error::parse(pos + 1, "pure generator needs the form s<j>.<i>"))?;
            let j = nat(&rest[..dot], pos + 1)?;
            let i = nat(&rest[dot + 1..], pos + 2 + dot)?;
            if i >= j {
                return Err(Error::parse(pos, format!("s{j}.{i} requires j > i")));
            }
            Base::Pure(j, i)
        }
        _ => return Err(Error::parse(pos, format!("unknown token {tok:?}"))),
    };
    Ok(Token { base, exp, pos })
}

pub(crate) fn parse_tokens(text: &str) -> Result<Vec<Token>> {
    let toks: Vec<_> = tokens(text).collect();
    if let [(_, "e")] = toks.as_slice() {
        return Ok(Vec::new());
    }
    toks.into_iter()
        .map(|(pos, t)| parse_token(t, pos))
        .collect()
}

/// Parses a free word; returns the alphabet letter (`x` or `y`, `None` when empty)
/// and the unreduced letter sequence.
pub fn parse_free_letters(text: &str) -> Result<(Option<char>, Vec<Letter>)> {
    let mut alphabet = None;
    let mut out = Vec::new();
    for t in parse_tokens(text)? {
        let Base::Free(c, g) = t.base else {
            return Err(Error::parse(
                t.pos,
                "expected a free-group letter x<i> or y<i>",
            ));
        };
        if alphabet.is_some_and(|a| a != c) {
            return Err(Error::parse(t.pos, "x and y letters cannot be mixed"));
        }
        alphabet = Some(c);
        push_power(&mut out, Letter::pos(g), t.exp);
    }
    Ok((alphabet, out))
}

/// Parses and reduces a free word of the given rank.
pub fn parse_free(text: &str, rank: u32) -> Result<ReducedWord> {
    let (_, letters) = parse_free_letters(text)?;
    if let Some(l) = letters.iter().find(|l| l.gen() > rank) {
        return Err(Error::Malformed(format!(
            "generator {} exceeds rank {rank}",
            l.gen()
        )));
    }
    ReducedWord::reduce(rank, letters)
}

pub(crate) fn push_power(out: &mut Vec<Letter>, l: Letter, exp: i64) {
    let l = if exp < 0 { l.inverse() } else { l };
    out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
}

fn fmt_letter(out: &mut String, base: &str, inverse: bool) {
    if !out.is_empty() {
        out.push(' ');
    }
    out.push_str(base);
    if inverse {
        out.push_str("^-1");
    }
}

/// Prints a free word over the alphabet `prefix` (`"x"`, `"y"`); empty prints as `e`.
pub fn format_free(w: &[Letter], prefix: &str) -> String {
    let mut out = String::new();
    for l in w {
        fmt_letter(&mut out, &format!("{prefix}{}", l.gen()), l.is_inverse());
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

pub(crate) fn format_sigma(w: &[Letter]) -> String {
    format_free(w, "b")
}

pub(crate) fn format_pure(letters: impl IntoIterator<Item = (u32, u32, bool)>) -> String {
    let mut out = String::new();
    for (j, i, inv) in letters {
        fmt_letter(&mut out, &format!("s{j}.{i}"), inv);
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word;

    #[test]
    fn free_grammar() {
        assert_eq!(parse_free("y1 y2 y2^-1 y3", 3).unwrap(), word(3, &[1, 3]));
        assert_eq!(
            parse_free("x1^3 x2^-2", 2).unwrap(),
            word(2, &[1, 1, 1, -2, -2])
        );
        assert_eq!(parse_free("", 2).unwrap(), ReducedWord::identity(2));
        assert_eq!(parse_free("e", 2).unwrap(), ReducedWord::identity(2));
        assert_eq!(parse_free("x1^0", 2).unwrap(), ReducedWord::identity(2));
        assert_eq!(format_free(word(3, &[1, -2]).letters(), "x"), "x1 x2^-1");
        assert_eq!(format_free(&[], "x"), "e");
    }

    #[test]
    fn error_positions() {
        match parse_free("x1 z2", 3) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match parse_free("x1  x2^q", 3) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_free("x1 y2", 3),
            Err(Error::Parse { pos: 3, .. })
        ));
        assert!(matches!(parse_free("x4", 3), Err(Error::Malformed(_))));
        assert!(matches!(parse_free("x0", 3), Err(Error::Parse { .. })));
    }

    #[test]
    fn braid_tokens() {
        let t = parse_tokens("s3.1^-1 s4.1 b2^2").unwrap();
        assert_eq!(t[0].base, Base::Pure(3, 1));
        assert_eq!(t[0].exp, -1);
        assert_eq!(t[1].base, Base::Pure(4, 1));
        assert_eq!(
            t[2],
            Token {
                base: Base::Sigma(2),
                exp: 2,
                pos: 13
            }
        );
        assert!(parse_tokens("s1.3").is_err());
        assert!(parse_tokens("s3").is_err());
    }
}
