//! Command-line front end: the sequence grammar, experiment configs and the
//! subcommand runner.
//!
//! Sequence grammar (ASCII, whitespace ignored):
//!
//! ```text
//! geometric:r=<real>
//! powlog:a=<real>,b=<real>
//! power:a=<real>
//! explicit:[v1,v2,...]
//! ```
//!
//! Positions in syntax errors are 0-based byte offsets into the input.

mod app;
mod commands;
mod config;

pub use app::{main_with_args, Cli};
pub use commands::{run, Command, Outcome, Table};
pub use config::{ExperimentConfig, PRECISION_ENV};

use crate::error::{Error, Result};
use crate::weight_core::ZeroSequence;

/// Parses a sequence in the grammar above. `ZeroSequence::render` is its
/// inverse for every family.
pub fn parse_sequence_spec(text: &str) -> Result<ZeroSequence> {
    if let Some(pos) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(Error::Syntax { pos, msg: "non-ASCII character".into() });
    }
    // Significant characters with their offsets in the original text.
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_ascii_whitespace()).collect();
    let end = text.len();
    let colon = chars
        .iter()
        .position(|&(_, c)| c == ':')
        .ok_or_else(|| Error::Syntax { pos: end, msg: "expected ':' after the family name".into() })?;
    let family: String = chars[..colon].iter().map(|c| c.1).collect();
    let body = &chars[colon + 1..];
    let body_start = body.first().map_or(end, |c| c.0);
    match family.as_str() {
        "explicit" => parse_explicit(body, end),
        "geometric" => {
            let kv = parse_pairs(body, end, &["r"])?;
            ZeroSequence::geometric(kv[0])
        }
        "power" => {
            let kv = parse_pairs(body, end, &["a"])?;
            ZeroSequence::power(kv[0])
        }
        "powlog" => {
            let kv = parse_pairs(body, end, &["a", "b"])?;
            ZeroSequence::powlog(kv[0], kv[1])
        }
        "" => Err(Error::Syntax { pos: chars.get(colon).map_or(0, |c| c.0), msg: "missing family name".into() }),
        other => Err(Error::Syntax {
            pos: chars[0].0,
            msg: format!("unknown family '{other}' (expected geometric, powlog, power or explicit)"),
        }),
    }
    .map_err(|e| match e {
        Error::Domain(msg) => Error::Syntax { pos: body_start, msg },
        e => e,
    })
}

/// Comma-separated tokens, each with the offset where it starts (for an
/// empty token, the offset of the delimiter that closes it).
fn tokens(items: &[(usize, char)], end: usize) -> Vec<(usize, &[(usize, char)])> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..=items.len() {
        if i == items.len() || items[i].1 == ',' {
            let pos = items.get(start).map_or(end, |c| c.0);
            out.push((pos, &items[start..i]));
            start = i + 1;
        }
    }
    out
}

fn number(tok: &[(usize, char)], pos: usize) -> Result<f64> {
    let s: String = tok.iter().map(|c| c.1).collect();
    if s.is_empty() {
        return Err(Error::Syntax { pos, msg: "expected a number".into() });
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Syntax { pos, msg: format!("'{s}' is not a finite real number") }),
    }
}

/// key=value pairs, each key exactly once, in any order.
fn parse_pairs(body: &[(usize, char)], end: usize, keys: &[&str]) -> Result<Vec<f64>> {
    let mut out = vec![None; keys.len()];
    if body.is_empty() {
        return Err(Error::Syntax { pos: end, msg: format!("expected {}=<real>", keys[0]) });
    }
    for (pos, item) in tokens(body, end) {
        let eq = item
            .iter()
            .position(|c| c.1 == '=')
            .ok_or_else(|| Error::Syntax { pos, msg: "expected key=value".into() })?;
        let key: String = item[..eq].iter().map(|c| c.1).collect();
        let slot = keys
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| Error::Syntax { pos, msg: format!("unknown key '{key}' (expected {})", keys.join(", ")) })?;
        if out[slot].is_some() {
            return Err(Error::Syntax { pos, msg: format!("duplicate key '{key}'") });
        }
        let value = &item[eq + 1..];
        out[slot] = Some(number(value, value.first().map_or(item[eq].0 + 1, |c| c.0))?);
    }
    keys.iter()
        .zip(out)
        .map(|(k, v)| v.ok_or_else(|| Error::Syntax { pos: end, msg: format!("missing key '{k}'") }))
        .collect()
}

fn parse_explicit(body: &[(usize, char)], end: usize) -> Result<ZeroSequence> {
    match (body.first(), body.last()) {
        (Some((_, '[')), Some((_, ']'))) if body.len() >= 2 => {}
        (Some((p, '[')), _) => return Err(Error::Syntax { pos: body.last().map_or(*p, |c| c.0 + 1), msg: "expected ']'".into() }),
        (Some((p, _)), _) => return Err(Error::Syntax { pos: *p, msg: "expected '['".into() }),
        (None, _) => return Err(Error::Syntax { pos: end, msg: "expected '['".into() }),
    }
    let inner = &body[1..body.len() - 1];
    if inner.is_empty() {
        return Err(Error::Syntax { pos: body[1].0, msg: "empty list".into() });
    }
    let close = body[body.len() - 1].0;
    let values = tokens(inner, close).into_iter().map(|(pos, tok)| number(tok, pos)).collect::<Result<Vec<f64>>>()?;
    ZeroSequence::explicit(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syntax_pos(text: &str) -> usize {
        match parse_sequence_spec(text) {
            Err(Error::Syntax { pos, .. }) => pos,
            other => panic!("expected a syntax error for {text:?}, got {other:?}"),
        }
    }

    #[test]
    fn grammar_examples() {
        let g = parse_sequence_spec("geometric:r=2").unwrap();
        assert!(g.omega0_flag());
        assert_eq!(g.t(3), 8.0);
        let e = parse_sequence_spec("explicit:[1,1,2]").unwrap();
        assert!(!e.omega0_flag());
        assert!(matches!(parse_sequence_spec("explicit:[2,1]"), Err(Error::InvalidSequence { index: 2, .. })));
    }

    #[test]
    fn whitespace_is_ignored() {
        let a = parse_sequence_spec(" powlog : a = 1 , b = 2 ").unwrap();
        assert_eq!(a, parse_sequence_spec("powlog:a=1,b=2").unwrap());
        assert_eq!(parse_sequence_spec("powlog:b=2,a=1").unwrap(), a);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(syntax_pos("geometric"), 9);
        assert_eq!(syntax_pos("cubic:r=2"), 0);
        assert_eq!(syntax_pos("geometric:q=2"), 10);
        assert_eq!(syntax_pos("geometric:r=x"), 12);
        assert_eq!(syntax_pos("powlog:a=1"), 10);
        assert_eq!(syntax_pos("powlog:a=1,a=2"), 11);
        assert_eq!(syntax_pos("explicit:1,2"), 9);
        assert_eq!(syntax_pos("explicit:[1,,2]"), 12);
        assert_eq!(syntax_pos("geometric:r=0.5"), 10);
        assert_eq!(syntax_pos("geometric:r=é"), 12);
        assert_eq!(syntax_pos("geometric:r=inf"), 12);
    }

    #[test]
    fn render_round_trips() {
        for text in ["geometric:r=2", "geometric:r=1.1", "powlog:a=1,b=2", "powlog:a=3,b=0", "power:a=2.5", "explicit:[0.5,1,1,7.25]"] {
            let s = parse_sequence_spec(text).unwrap();
            assert_eq!(parse_sequence_spec(&s.render()).unwrap(), s);
            assert_eq!(s.render(), text);
        }
    }
}
