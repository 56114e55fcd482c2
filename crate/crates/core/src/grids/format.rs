//! Coordinate sidecar format.
//!
//! ```text
//! coords grid|cylinder <rows> <cols>
//! vertex <id> <r> <c>
//! ```

use std::fmt::Write as _;

use super::{CoordKind, GridCoords};
use crate::error::{Error, Result};
use crate::text::lines;

pub fn parse_coords(text: &str) -> Result<GridCoords> {
    let mut it = lines(text);
    let head = it.next().ok_or_else(|| Error::parse(0, "empty input, expected `coords`"))?;
    if head.keyword != "coords" {
        return Err(head.error(format!("expected `coords` header, found `{}`", head.keyword)));
    }
    head.expect_args(3)?;
    let kind = CoordKind::from_keyword(head.args[0])
        .ok_or_else(|| head.error(format!("unknown coordinate kind `{}`", head.args[0])))?;
    let (rows, cols) = (head.parse(1, "row count")?, head.parse(2, "column count")?);
    let mut records = Vec::new();
    for line in it {
        if line.keyword != "vertex" {
            return Err(line.error(format!("unknown keyword `{}`", line.keyword)));
        }
        line.expect_args(3)?;
        records.push((line.parse(0, "vertex")?, (line.parse(1, "row")?, line.parse(2, "column")?)));
    }
    GridCoords::from_records(kind, rows, cols, records)
}

pub fn write_coords(c: &GridCoords) -> String {
    let mut s = format!("coords {} {} {}\n", c.kind.keyword(), c.rows, c.cols);
    for (v, (r, col)) in c.iter() {
        let _ = writeln!(s, "vertex {v} {r} {col}");
    }
    s
}
