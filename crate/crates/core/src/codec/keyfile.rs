//! Line-oriented key file.
//!
//! ```text
//! PEKEY 1
//! order <a>
//! row <a values, 1-based>      (a lines)
//! round <leader, 1-based> <d1> (one line per round, at least one)
//! ```
//!
//! Tokens are separated by single spaces and every line ends with LF. The
//! serialized form is canonical: parsing and re-serializing reproduces the
//! input byte for byte.

use crate::error::{Error, Result};
use crate::quasigroup::{validate_table, Symbol};
use crate::transform::{PeKey, RoundParams};

pub const KEY_FILE_MAGIC: &str = "PEKEY 1";

pub fn serialize_key(key: &PeKey) -> String {
    let mut out = String::new();
    out.push_str(KEY_FILE_MAGIC);
    out.push('\n');
    out.push_str(&format!("order {}\n", key.order()));
    for row in key.quasigroup().external_rows() {
        out.push_str("row");
        for v in row {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    for r in key.rounds() {
        out.push_str(&format!("round {} {}\n", r.leader as u32 + 1, r.d1));
    }
    out
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::KeyFileSyntax {
        line,
        message: message.into(),
    }
}

/// Splits a line into its keyword and integer arguments.
fn fields<'a>(line_no: usize, line: &'a str, keyword: &str) -> Result<Vec<&'a str>> {
    let mut tokens = line.split(' ');
    match tokens.next() {
        Some(k) if k == keyword => {}
        _ => return Err(syntax(line_no, format!("expected `{keyword}` line"))),
    }
    let rest: Vec<&str> = tokens.collect();
    if rest.iter().any(|t| t.is_empty()) {
        return Err(syntax(line_no, "tokens must be separated by single spaces"));
    }
    Ok(rest)
}

fn integer<T: std::str::FromStr>(line_no: usize, token: &str) -> Result<T> {
    if !token.bytes().all(|b| b.is_ascii_digit()) || (token.len() > 1 && token.starts_with('0')) {
        return Err(syntax(line_no, format!("`{token}` is not a canonical integer")));
    }
    token
        .parse()
        .map_err(|_| syntax(line_no, format!("`{token}` is out of range")))
}

pub fn parse_key(text: &str) -> Result<PeKey> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let lines: Vec<&str> = body.split('\n').collect();

    if lines.first() != Some(&KEY_FILE_MAGIC) {
        return Err(syntax(1, format!("expected `{KEY_FILE_MAGIC}`")));
    }
    let order_line = lines.get(1).ok_or_else(|| syntax(2, "missing `order` line"))?;
    let order_fields = fields(2, order_line, "order")?;
    if order_fields.len() != 1 {
        return Err(syntax(2, "`order` takes one value"));
    }
    let order: usize = integer(2, order_fields[0])?;
    if order < 2 {
        return Err(Error::KeyFileTable {
            line: 2,
            source: Box::new(Error::OrderTooSmall(order)),
        });
    }
    if lines.len() < 2 + order {
        return Err(syntax(lines.len() + 1, "missing `row` lines"));
    }

    let mut rows = Vec::with_capacity(order);
    for r in 0..order {
        let line_no = 3 + r;
        let values = fields(line_no, lines[2 + r], "row")?;
        if values.len() != order {
            return Err(syntax(line_no, format!("expected {order} values, found {}", values.len())));
        }
        let row: Vec<u32> = values
            .iter()
            .map(|t| integer(line_no, t))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    let table = validate_table(&rows, order).map_err(|e| {
        let line = match e {
            Error::DuplicateInRow { row, .. } | Error::EntryOutOfRange { row, .. } => 2 + row,
            _ => 3,
        };
        Error::KeyFileTable {
            line,
            source: Box::new(e),
        }
    })?;

    let round_lines = &lines[2 + order..];
    if round_lines.is_empty() {
        return Err(syntax(3 + order, "missing `round` lines"));
    }
    let mut rounds = Vec::with_capacity(round_lines.len());
    for (i, line) in round_lines.iter().enumerate() {
        let line_no = 3 + order + i;
        let values = fields(line_no, line, "round")?;
        if values.len() != 2 {
            return Err(syntax(line_no, "`round` takes a leader and a first block length"));
        }
        let leader: u64 = integer(line_no, values[0])?;
        let d1: usize = integer(line_no, values[1])?;
        if leader == 0 || leader > order as u64 {
            return Err(Error::KeyFileTable {
                line: line_no,
                source: Box::new(Error::LeaderOutOfRange { value: leader, order }),
            });
        }
        let params = RoundParams::new((leader - 1) as Symbol, d1).map_err(|e| Error::KeyFileTable {
            line: line_no,
            source: Box::new(e),
        })?;
        rounds.push(params);
    }
    PeKey::new(table, rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasigroup::OperationTable;
    use proptest::prelude::*;

    const EXPERIMENT_KEY: &str = "PEKEY 1\norder 4\nrow 1 2 4 3\nrow 3 4 2 1\nrow 4 3 1 2\nrow 2 1 3 4\nround 4 3\nround 4 3\nround 4 3\n";

    fn experiment_key() -> PeKey {
        let table = OperationTable::from_external_rows(&[[1u32, 2, 4, 3], [3, 4, 2, 1], [4, 3, 1, 2], [2, 1, 3, 4]]).unwrap();
        PeKey::new(table, vec![RoundParams::from_external(4, 3).unwrap(); 3]).unwrap()
    }

    #[test]
    fn experiment_key_file() {
        let text = serialize_key(&experiment_key());
        assert_eq!(text, EXPERIMENT_KEY);
        assert_eq!(text.lines().count(), 9);
        assert_eq!(parse_key(&text).unwrap(), experiment_key());
    }

    #[test]
    fn duplicate_row_entry() {
        let bad = EXPERIMENT_KEY.replace("row 3 4 2 1", "row 3 3 2 1");
        let err = parse_key(&bad).unwrap_err();
        assert!(err.to_string().contains("duplicate in row"), "{err}");
        assert!(matches!(err, Error::KeyFileTable { line: 4, .. }));
    }

    #[test]
    fn grammar_violations_report_lines() {
        let cases = [
            ("PEKEY 2\n", 1),
            ("PEKEY 1\n", 2),
            ("PEKEY 1\norder x\n", 2),
            ("PEKEY 1\norder 4\nrow 1 2 4 3\n", 4),
            ("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\n", 5),
            ("PEKEY 1\norder 2\nrow 1  2\nrow 2 1\nround 1 2\n", 3),
            ("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\nround 1\n", 5),
            ("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\nround 1 2\nbogus\n", 6),
            ("PEKEY 1\norder 2\nrow 1 2 1\nrow 2 1\nround 1 2\n", 3),
            ("PEKEY 1\norder 2\nrow 01 2\nrow 2 1\nround 1 2\n", 3),
            ("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\nround 1 2\n\n", 6),
        ];
        for (text, line) in cases {
            match parse_key(text).unwrap_err() {
                Error::KeyFileSyntax { line: l, .. } => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: unexpected {other}"),
            }
        }
        let err = parse_key("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\nround 3 2\n").unwrap_err();
        assert!(matches!(err, Error::KeyFileTable { line: 5, .. }));
        let err = parse_key("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\nround 1 1\n").unwrap_err();
        assert!(matches!(err, Error::KeyFileTable { line: 5, .. }));
        let err = parse_key("PEKEY 1\norder 2\nrow 1 2\nrow 1 2\nround 1 2\n").unwrap_err();
        assert!(err.to_string().contains("duplicate in column 1"));
    }

    #[test]
    fn missing_final_newline_is_accepted() {
        let trimmed = EXPERIMENT_KEY.trim_end();
        assert_eq!(parse_key(trimmed).unwrap(), experiment_key());
    }

    proptest! {
        #[test]
        fn random_keys_round_trip(order in 2usize..20, rounds in 1usize..6, seed: u64) {
            let key = PeKey::random(order, rounds, seed).unwrap();
            let text = serialize_key(&key);
            let parsed = parse_key(&text).unwrap();
            prop_assert_eq!(serialize_key(&parsed), text);
            prop_assert_eq!(parsed, key);
        }
    }
}
