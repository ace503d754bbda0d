//! Whitespace tokenizer that remembers line numbers.

use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) struct Tokens<'a> {
    iter: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    /// Everything after `comment` on a line is ignored.
    pub fn new(text: &'a str, comment: Option<char>) -> Self {
        let iter: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> =
            Box::new(text.lines().enumerate().flat_map(move |(i, line)| {
                let line = match comment.and_then(|c| line.find(c)) {
                    Some(k) => &line[..k],
                    None => line,
                };
                line.split_whitespace().map(move |t| (i + 1, t))
            }));
        let last_line = text.lines().count().max(1);
        Self {
            iter: iter.peekable(),
            last_line,
        }
    }

    pub fn next(&mut self) -> Option<(usize, &'a str)> {
        self.iter.next()
    }

    pub fn eof_error(&self, expected: &str) -> Error {
        Error::Parse {
            line: self.last_line,
            token: "<end of file>".into(),
            message: format!("expected {expected}"),
        }
    }

    pub fn expect_token(&mut self, expected: &str) -> Result<(usize, &'a str)> {
        self.next().ok_or_else(|| self.eof_error(expected))
    }

    pub fn expect<T: FromStr>(&mut self, expected: &str) -> Result<T> {
        let (line, tok) = self.expect_token(expected)?;
        tok.parse()
            .map_err(|_| error_at(line, tok, &format!("expected {expected}")))
    }

    pub fn expect_finite(&mut self, expected: &str) -> Result<f64> {
        let (line, tok) = self.expect_token(expected)?;
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(error_at(line, tok, &format!("expected {expected}"))),
        }
    }
}

pub(crate) fn error_at(line: usize, token: &str, message: &str) -> Error {
    Error::Parse {
        line,
        token: token.into(),
        message: message.into(),
    }
}
