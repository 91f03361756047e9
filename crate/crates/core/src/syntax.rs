//! Small hand-rolled scanner shared by the text formats.

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Character cursor over a slice of input. `line` and `column` of the first
/// character are supplied by the caller so nested parsers report positions
/// relative to the whole file.
#[derive(Clone)]
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line0: usize,
    col0: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Self::at(src, 1, 1)
    }

    pub fn at(src: &'a str, line: usize, column: usize) -> Self {
        Cursor {
            src,
            pos: 0,
            line0: line,
            col0: column,
        }
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn location(&self) -> (usize, usize) {
        let before = &self.src[..self.pos];
        let newlines = before.matches('\n').count();
        if newlines == 0 {
            (self.line0, self.col0 + before.chars().count())
        } else {
            let last = before.rfind('\n').unwrap();
            (self.line0 + newlines, 1 + before[last + 1..].chars().count())
        }
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.location();
        Err(Error::parse(line, column, message))
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.rest().chars().next()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected `{c}`, found `{found}`")),
                None => self.error(format!("expected `{c}`, found end of input")),
            }
        }
    }

    pub fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected `{c}`")),
        }
    }

    /// Identifier `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        self.pos += end;
        Some(&rest[..end])
    }

    fn digits(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|&(_, c)| !c.is_ascii_digit())
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if end == 0 {
            return None;
        }
        self.pos += end;
        Some(&rest[..end])
    }

    /// Unsigned decimal literal.
    pub fn natural(&mut self) -> Result<BigInt> {
        self.skip_ws();
        match self.digits() {
            Some(d) => Ok(d.parse().expect("decimal digits")),
            None => self.error("expected a number"),
        }
    }

    /// Decimal literal with an optional leading `-` or `+`.
    pub fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let n = self.natural()?;
        Ok(if negative { -n } else { n })
    }

    pub fn small_integer(&mut self) -> Result<i64> {
        let here = self.clone();
        let n = self.integer()?;
        i64::try_from(&n).or_else(|_| here.error("integer out of range"))
    }

    /// `(v1, ..., vk)` of integers.
    pub fn integer_tuple(&mut self) -> Result<Vec<BigInt>> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            out.push(self.integer()?);
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    pub fn small_tuple(&mut self) -> Result<Vec<i64>> {
        let here = self.clone();
        self.integer_tuple()?
            .iter()
            .map(|n| i64::try_from(n).or_else(|_| here.error("integer out of range")))
            .collect()
    }

    /// Returns the text of a brace-delimited block starting at the cursor,
    /// including the braces, and advances past it.
    pub fn braced(&mut self) -> Result<(&'a str, usize, usize)> {
        self.skip_ws();
        let (line, column) = self.location();
        let rest = self.rest();
        if !rest.starts_with('{') {
            return self.error("expected `{`");
        }
        let mut depth = 0usize;
        for (i, c) in rest.char_indices() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += i + 1;
                        return Ok((&rest[..=i], line, column));
                    }
                }
                _ => {}
            }
        }
        self.error("unclosed `{`")
    }
}

/// Parses a comma-separated integer list such as `2,-3, 5`.
pub fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    if cur.at_end() {
        return Ok(out);
    }
    loop {
        out.push(cur.small_integer()?);
        if cur.at_end() {
            return Ok(out);
        }
        cur.expect(',')?;
    }
}
