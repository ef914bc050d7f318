//! Parsers for command-line values: inclusive ranges `a..b`, product
//! specifications `n1:c1,n2:c2,...` and counts such as `1e6`.
//!
//! Errors carry the byte offset of the offending token.

use crate::error::{Error, Result};

/// Longest range accepted by [`parse_range`].
pub const MAX_RANGE_LEN: usize = 1 << 24;

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

/// Parses a nonnegative integer that may be written in scientific notation
/// (`1e6`, `2.5e3`), as long as the value is an exact integer.
pub fn parse_count(s: &str) -> Result<usize> {
    parse_count_at(s, 0)
}

fn parse_count_at(s: &str, offset: usize) -> Result<usize> {
    let lead = s.len() - s.trim_start().len();
    let t = s.trim();
    if t.is_empty() {
        return Err(err(offset, "expected a number"));
    }
    if t.bytes().all(|b| b.is_ascii_digit()) {
        return t.parse().map_err(|_| err(offset + lead, format!("'{t}' is too large")));
    }
    if !t.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+')) {
        let bad = t.bytes().position(|b| !(b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+')));
        return Err(err(offset + lead + bad.unwrap_or(0), format!("'{t}' is not a count")));
    }
    let v: f64 = t.parse().map_err(|_| err(offset + lead, format!("'{t}' is not a count")))?;
    if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= 2f64.powi(53)) {
        return Err(err(offset + lead, format!("'{t}' is not an exact count")));
    }
    Ok(v as usize)
}

/// Parses `a..b` (inclusive) or a single value `a`.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let (lo, hi) = match s.find("..") {
        Some(i) => {
            let hi_str = s[i + 2..].strip_prefix('=').unwrap_or(&s[i + 2..]);
            let hi_off = s.len() - hi_str.len();
            (parse_count_at(&s[..i], 0)?, parse_count_at(hi_str, hi_off)?)
        }
        None => {
            let v = parse_count_at(s, 0)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(err(0, format!("empty range {lo}..{hi}")));
    }
    if hi - lo >= MAX_RANGE_LEN {
        return Err(err(0, format!("range {lo}..{hi} is too long")));
    }
    Ok(lo..=hi)
}

/// Parses `n1:c1,n2:c2,...`. A factor written as `n` alone has weight 1.
pub fn parse_product_spec(s: &str) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in s.split(',') {
        let (n_str, c) = match part.find(':') {
            Some(i) => {
                let c_str = &part[i + 1..];
                let c_off = offset + i + 1;
                let c: f64 = c_str
                    .trim()
                    .parse()
                    .map_err(|_| err(c_off, format!("'{}' is not a weight", c_str.trim())))?;
                if !(c > 0.0 && c.is_finite()) {
                    return Err(err(c_off, format!("weight {c} must be positive and finite")));
                }
                (&part[..i], c)
            }
            None => (part, 1.0),
        };
        let n = parse_count_at(n_str, offset)?;
        if n < 2 {
            return Err(err(offset, format!("cycle length {n} must be at least 2")));
        }
        out.push((n, c));
        offset += part.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn position(e: Error) -> usize {
        match e {
            Error::Parse { position, .. } => position,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("42").unwrap(), 42);
        assert_eq!(parse_count(" 1e6 ").unwrap(), 1_000_000);
        assert_eq!(parse_count("2.5e3").unwrap(), 2500);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("").is_err());
        assert!(parse_count("1e400").is_err());
        assert!(parse_count("nan").is_err());
        assert_eq!(position(parse_count("12x").unwrap_err()), 2);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..64").unwrap(), 4..=64);
        assert_eq!(parse_range("4..=6").unwrap(), 4..=6);
        assert_eq!(parse_range("7").unwrap(), 7..=7);
        assert_eq!(parse_range("1e2..1e3").unwrap(), 100..=1000);
        assert!(parse_range("9..4").is_err());
        assert!(parse_range("..4").is_err());
        assert!(parse_range("0..1e15").is_err());
        assert_eq!(position(parse_range("4..x").unwrap_err()), 3);
    }

    #[test]
    fn product_specs() {
        assert_eq!(parse_product_spec("4:1,6:1").unwrap(), vec![(4, 1.0), (6, 1.0)]);
        assert_eq!(parse_product_spec("4:0.5, 8").unwrap(), vec![(4, 0.5), (8, 1.0)]);
        assert_eq!(position(parse_product_spec("4:1,x:1").unwrap_err()), 4);
        assert_eq!(position(parse_product_spec("4:1,6:abc").unwrap_err()), 6);
        assert_eq!(position(parse_product_spec("4:-1").unwrap_err()), 2);
        assert!(parse_product_spec("1:1").is_err());
        assert!(parse_product_spec("").is_err());
        assert!(parse_product_spec("4:1,").is_err());
    }

    proptest! {
        #[test]
        fn range_roundtrip(a in 0usize..100_000, len in 0usize..1000) {
            let b = a + len;
            prop_assert_eq!(parse_range(&format!("{a}..{b}")).unwrap(), a..=b);
        }

        #[test]
        fn spec_roundtrip(f in prop::collection::vec((2usize..10_000, 1e-3f64..1e3), 1..6)) {
            let s: Vec<String> = f.iter().map(|(n, c)| format!("{n}:{c}")).collect();
            prop_assert_eq!(parse_product_spec(&s.join(",")).unwrap(), f);
        }

        #[test]
        fn parsers_never_panic(s in ".{0,40}") {
            let _ = parse_range(&s);
            let _ = parse_count(&s);
            let _ = parse_product_spec(&s);
        }

        #[test]
        fn error_positions_in_bounds(s in "[0-9:,.e x-]{0,30}") {
            for r in [parse_range(&s).map(|_| ()), parse_count(&s).map(|_| ()), parse_product_spec(&s).map(|_| ())] {
                if let Err(Error::Parse { position, .. }) = r {
                    prop_assert!(position <= s.len());
                }
            }
        }
    }
}
