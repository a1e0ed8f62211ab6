//! Text format for rules.
//!
//! One rule per block, blocks separated by blank lines, `#` starts a
//! comment line. Grammar:
//!
//! ```text
//! rule "<name>": <Atom> AND <Atom> ... [AND ANY { <Atom>, <Atom>, ... }]
//!     => <Atom> [AND <Atom> ...]
//! ```
//!
//! Atom names without a namespace prefix resolve to `core:`; arguments are
//! full terms (`?var`, `prefix:Local`, or a quoted literal). The splitter is
//! quote- and paren-aware, so literals may contain `AND`, commas, or braces.

use crate::error::{Error, Result};
use crate::term::Term;
use crate::vocab;

use super::{Atom, Rule, RuleSet, BUILTIN_BEFORE};

/// Parses a rules document into a validated [`RuleSet`] carrying the full
/// axiom complement.
pub fn parse_rules(input: &str) -> Result<RuleSet> {
    let mut rules = Vec::new();
    let mut block = String::new();
    let mut block_line = 0;
    let flush = |block: &mut String, line: usize, rules: &mut Vec<Rule>| -> Result<()> {
        if !block.trim().is_empty() {
            rules.push(parse_rule_block(block.trim(), line)?);
        }
        block.clear();
        Ok(())
    };
    for (idx, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut block, block_line, &mut rules)?;
            continue;
        }
        if block.is_empty() {
            block_line = idx + 1;
        } else {
            block.push(' ');
        }
        block.push_str(line);
    }
    flush(&mut block, block_line, &mut rules)?;
    RuleSet::new(rules)
}

fn parse_rule_block(text: &str, line: usize) -> Result<Rule> {
    let rest = text
        .strip_prefix("rule")
        .ok_or_else(|| Error::parse(line, "rule block must start with `rule`"))?
        .trim_start();
    let rest = rest
        .strip_prefix('"')
        .ok_or_else(|| Error::parse(line, "rule name must be quoted"))?;
    let (name, rest) = rest
        .split_once('"')
        .ok_or_else(|| Error::parse(line, "unterminated rule name"))?;
    let rest = rest
        .trim_start()
        .strip_prefix(':')
        .ok_or_else(|| Error::parse(line, "expected `:` after the rule name"))?;

    let sides = split_top_level(rest, "=>", false);
    if sides.len() != 2 {
        return Err(Error::parse(line, "rule must contain exactly one `=>`"));
    }
    let (body_text, head_text) = (&sides[0], &sides[1]);

    let mut body_and = Vec::new();
    let mut body_or = None;
    let segments = split_top_level(body_text, "AND", true);
    let last = segments.len() - 1;
    for (i, segment) in segments.iter().enumerate() {
        if let Some(group) = segment.trim().strip_prefix("ANY") {
            if body_or.is_some() {
                return Err(Error::parse(line, "at most one ANY group per rule"));
            }
            if i != last {
                return Err(Error::parse(line, "the ANY group must close the body"));
            }
            let inner = group
                .trim()
                .strip_prefix('{')
                .and_then(|g| g.strip_suffix('}'))
                .ok_or_else(|| Error::parse(line, "ANY group must be braced"))?;
            let disjuncts = split_top_level(inner, ",", false)
                .iter()
                .map(|a| parse_atom(a, line))
                .collect::<Result<Vec<_>>>()?;
            if disjuncts.is_empty() {
                return Err(Error::parse(line, "ANY group must list at least one atom"));
            }
            body_or = Some(disjuncts);
        } else {
            body_and.push(parse_atom(segment, line)?);
        }
    }
    if body_and.is_empty() && body_or.is_none() {
        return Err(Error::parse(line, "rule body must contain at least one atom"));
    }

    let head = split_top_level(head_text, "AND", true)
        .iter()
        .map(|a| parse_atom(a, line))
        .collect::<Result<Vec<_>>>()?;

    Rule::new(name, body_and, body_or, head).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    })
}

fn parse_atom(text: &str, line: usize) -> Result<Atom> {
    let text = text.trim();
    let open = text
        .find('(')
        .ok_or_else(|| Error::parse(line, format!("atom must be name(args): {text}")))?;
    let name = text[..open].trim();
    let inner = text[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::parse(line, format!("unbalanced parentheses in atom: {text}")))?;
    if name.is_empty() {
        return Err(Error::parse(line, format!("atom is missing a name: {text}")));
    }
    let args = split_top_level(inner, ",", false)
        .iter()
        .map(|t| Term::parse(t).map_err(|e| Error::parse(line, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    match args.len() {
        1 => {
            let term = args.into_iter().next().unwrap();
            if matches!(term, Term::Literal(_)) {
                return Err(Error::parse(
                    line,
                    format!("class atom argument must be a resource or variable: {text}"),
                ));
            }
            let class = vocab::resolve(name).map_err(|e| Error::parse(line, e.to_string()))?;
            Ok(Atom::Class { class, term })
        }
        2 => {
            let mut it = args.into_iter();
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            if name == BUILTIN_BEFORE {
                Ok(Atom::Builtin { name: BUILTIN_BEFORE.into(), args: [a, b] })
            } else {
                let property =
                    vocab::resolve(name).map_err(|e| Error::parse(line, e.to_string()))?;
                Ok(Atom::Property { property, subject: a, object: b })
            }
        }
        n => Err(Error::parse(line, format!("atom takes 1 or 2 arguments, got {n}: {text}"))),
    }
}

/// Splits `s` on `sep` occurrences that sit outside quotes and outside any
/// parentheses or braces. With `word` set, the separator must be bounded by
/// whitespace (or the string edge) on both sides.
fn split_top_level(s: &str, sep: &str, word: bool) -> Vec<String> {
    let bytes = s.as_bytes();
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut in_str = false;
    let mut escaped = false;
    let mut start = 0usize;
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i];
        if in_str {
            if escaped {
                escaped = false;
            } else if c == b'\\' {
                escaped = true;
            } else if c == b'"' {
                in_str = false;
            }
            i += 1;
            continue;
        }
        match c {
            b'"' => {
                in_str = true;
                i += 1;
            }
            b'(' | b'{' => {
                depth += 1;
                i += 1;
            }
            b')' | b'}' => {
                depth = depth.saturating_sub(1);
                i += 1;
            }
            _ if depth == 0 && s[i..].starts_with(sep) => {
                let end = i + sep.len();
                let before_ok = !word || i == 0 || bytes[i - 1].is_ascii_whitespace();
                let after_ok = !word || end >= bytes.len() || bytes[end].is_ascii_whitespace();
                if before_ok && after_ok {
                    parts.push(s[start..i].trim().to_string());
                    start = end;
                    i = end;
                } else {
                    i += 1;
                }
            }
            _ => i += 1,
        }
    }
    parts.push(s[start..].trim().to_string());
    parts.retain(|p| !p.is_empty());
    parts
}
