//! Line-oriented tokenizing shared by the text formats.
//!
//! Blank lines and anything after `#` are ignored.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};

pub(crate) struct Line<'a> {
    pub number: usize,
    pub keyword: &'a str,
    pub args: Vec<&'a str>,
}

impl<'a> Line<'a> {
    pub fn parse<T: FromStr>(&self, idx: usize, what: &str) -> Result<T> {
        let tok = self
            .args
            .get(idx)
            .ok_or_else(|| Error::parse(self.number, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| Error::parse(self.number, format!("bad {what} `{tok}`")))
    }

    pub fn parse_all<T: FromStr>(&self, from: usize, what: &str) -> Result<Vec<T>> {
        (from..self.args.len()).map(|i| self.parse(i, what)).collect()
    }

    pub fn big(&self, idx: usize, what: &str) -> Result<BigInt> {
        self.parse(idx, what)
    }

    pub fn expect_args(&self, n: usize) -> Result<()> {
        if self.args.len() != n {
            return Err(Error::parse(
                self.number,
                format!("`{}` expects {} argument(s), got {}", self.keyword, n, self.args.len()),
            ));
        }
        Ok(())
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.number, msg)
    }
}

pub(crate) fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = body.split_whitespace();
        let keyword = toks.next()?;
        Some(Line { number: i + 1, keyword, args: toks.collect() })
    })
}

pub(crate) fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
