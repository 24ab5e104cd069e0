//! Term-level parsing shared by both polynomial types.
//!
//! Grammar: terms joined by `+` or `-`; each term is `c*s^e`, `c*s`, `s^e`,
//! `s` or `c`, where `s` is the polynomial's symbol, `c` an integer encoding
//! and `e` an integer or `n/2`, optionally wrapped in braces.

use super::PolyError;

/// A parsed term: sign, coefficient encoding, twice the exponent.
#[derive(Debug, PartialEq, Eq)]
pub(crate) struct RawTerm {
    pub negative: bool,
    pub coeff: u64,
    pub exp2: i64,
}

pub(crate) fn parse_terms(text: &str, symbol: char) -> Result<Vec<RawTerm>, PolyError> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(PolyError::Parse("empty polynomial".into()));
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut prev: Option<char> = None;
    for ch in text.chars() {
        let separator = (ch == '+' || ch == '-') && !matches!(prev, Some('^') | Some('{'));
        if separator {
            if !cur.is_empty() {
                pieces.push((negative, std::mem::take(&mut cur)));
                negative = false;
            } else if prev.is_some() && !matches!(prev, Some('+') | Some('-')) {
                return Err(PolyError::Parse(format!("unexpected `{ch}`")));
            }
            if ch == '-' {
                negative = !negative;
            }
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        return Err(PolyError::Parse("dangling sign".into()));
    }
    pieces.push((negative, cur));
    pieces
        .into_iter()
        .map(|(negative, t)| parse_term(&t, symbol).map(|(coeff, exp2)| RawTerm { negative, coeff, exp2 }))
        .collect()
}

fn parse_term(t: &str, symbol: char) -> Result<(u64, i64), PolyError> {
    let bad = || PolyError::Parse(format!("cannot parse term `{t}`"));
    let (coeff, mono) = match t.split_once('*') {
        Some((c, m)) => (Some(c), Some(m)),
        None if t.starts_with(symbol) => (None, Some(t)),
        None => (Some(t), None),
    };
    let coeff = match coeff {
        Some(c) => c.parse::<u64>().map_err(|_| bad())?,
        None => 1,
    };
    let exp2 = match mono {
        None => 0,
        Some(m) => {
            let rest = m.strip_prefix(symbol).ok_or_else(bad)?;
            if rest.is_empty() {
                2
            } else {
                let e = rest.strip_prefix('^').ok_or_else(bad)?;
                let e = e.strip_prefix('{').and_then(|e| e.strip_suffix('}')).unwrap_or(e);
                parse_exponent(e).ok_or_else(bad)?
            }
        }
    };
    Ok((coeff, exp2))
}

/// Twice the value of an exponent written as `n` or `n/2`.
fn parse_exponent(e: &str) -> Option<i64> {
    match e.split_once('/') {
        None => e.parse::<i64>().ok().map(|n| 2 * n),
        Some((n, d)) => {
            let n = n.parse::<i64>().ok()?;
            match d.parse::<i64>().ok()? {
                1 => Some(2 * n),
                2 => Some(n),
                _ => None,
            }
        }
    }
}

/// Formats twice-an-exponent as `n` or `n/2`.
pub(crate) fn format_exponent(exp2: i64) -> String {
    if exp2 % 2 == 0 {
        (exp2 / 2).to_string()
    } else {
        format!("{exp2}/2")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(negative: bool, coeff: u64, exp2: i64) -> RawTerm {
        RawTerm { negative, coeff, exp2 }
    }

    #[test]
    fn parses_canonical_form() {
        assert_eq!(
            parse_terms("1*x^3 + 1*x^2 + 1*x^-1", 'x').unwrap(),
            vec![t(false, 1, 6), t(false, 1, 4), t(false, 1, -2)]
        );
    }

    #[test]
    fn parses_shorthand() {
        assert_eq!(
            parse_terms("1 + x - 2*x^{-1/2} + x^3/2", 'x').unwrap(),
            vec![t(false, 1, 0), t(false, 1, 2), t(true, 2, -1), t(false, 1, 3)]
        );
        assert_eq!(parse_terms("-a", 'a').unwrap(), vec![t(true, 1, 2)]);
        assert_eq!(parse_terms("a^2 - 1", 'a').unwrap(), vec![t(false, 1, 4), t(true, 1, 0)]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_terms("", 'x').is_err());
        assert!(parse_terms("1 +", 'x').is_err());
        assert!(parse_terms("y^2", 'x').is_err());
        assert!(parse_terms("x^1/3", 'x').is_err());
        assert!(parse_terms("2*", 'x').is_err());
    }
}
