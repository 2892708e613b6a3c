//! Line-delimited `key=value` records.
//!
//! A record is one line of space-separated fields. A value is either a bare
//! token (no whitespace, `"` or `=`) or a double-quoted string with `\"` and
//! `\\` escapes. Scalars are bare tokens in the `zeta(L)^k` grammar.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cyclo::CycNum;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecordError {
    #[error("column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("key `{key}`: {message}")]
    Value { key: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Record {
    fields: Vec<(String, String)>,
}

fn is_bare(v: &str) -> bool {
    !v.is_empty() && !v.chars().any(|c| c.is_whitespace() || c == '"' || c == '=' || c == '\\')
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record { fields: vec![("record".into(), kind.into())] }
    }

    pub fn kind(&self) -> Option<&str> {
        self.get("record")
    }

    pub fn text(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn scalar(self, key: &str, value: &CycNum) -> Self {
        let s = value.to_compact_string();
        self.text(key, s)
    }

    pub fn list<T: fmt::Display>(self, key: &str, values: &[T]) -> Self {
        let s = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        self.text(key, s)
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, RecordError> {
        self.get(key).ok_or_else(|| RecordError::Missing(key.into()))
    }

    pub fn get_scalar(&self, key: &str) -> Result<CycNum, RecordError> {
        self.require(key)?
            .parse()
            .map_err(|e: crate::cyclo::CycloError| RecordError::Value { key: key.into(), message: e.to_string() })
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, RecordError> {
        let v = self.require(key)?;
        if v.is_empty() {
            return Ok(vec![]);
        }
        v.split(',')
            .map(|s| s.parse().map_err(|_| RecordError::Value { key: key.into(), message: format!("bad list entry `{s}`") }))
            .collect()
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (k, v)) in self.fields.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}=")?;
            if is_bare(v) {
                f.write_str(v)?;
            } else {
                f.write_str("\"")?;
                for c in v.chars() {
                    if c == '"' || c == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("\"")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Record {
    type Err = RecordError;

    fn from_str(line: &str) -> Result<Self, RecordError> {
        let chars: Vec<char> = line.chars().collect();
        let err = |i: usize, m: &str| RecordError::Parse { column: i + 1, message: m.into() };
        let mut fields = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            if chars[i] == ' ' {
                i += 1;
                continue;
            }
            let start = i;
            while i < chars.len() && chars[i] != '=' && chars[i] != ' ' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '=' || i == start {
                return Err(err(start, "expected key=value"));
            }
            let key: String = chars[start..i].iter().collect();
            i += 1;
            let mut value = String::new();
            if i < chars.len() && chars[i] == '"' {
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err(i, "unterminated string")),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let c = *chars.get(i + 1).ok_or_else(|| err(i, "dangling escape"))?;
                            value.push(c);
                            i += 2;
                        }
                        Some(&c) => {
                            value.push(c);
                            i += 1;
                        }
                    }
                }
                if i < chars.len() && chars[i] != ' ' {
                    return Err(err(i, "expected space after string"));
                }
            } else {
                while i < chars.len() && chars[i] != ' ' {
                    if chars[i] == '"' {
                        return Err(err(i, "quote inside bare value"));
                    }
                    value.push(chars[i]);
                    i += 1;
                }
            }
            fields.push((key, value));
        }
        Ok(Record { fields })
    }
}
