//! IP instance text format.
//!
//! ```text
//! ip <m> <n>
//! row <i> <col_a> <coef_a> <col_b> <coef_b> <b_i>
//! w <w_0> ... <w_{n-1}>
//! l <l_0> ...
//! u <u_0> ...
//! ```
//! Columns and rows are 0-based; every row index in `0..m` appears once.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{IpInstance, Row, TwoNonzeroMatrix};
use crate::error::{Error, Result};
use crate::text::{join, lines};

pub fn parse_instance(text: &str) -> Result<IpInstance> {
    let mut it = lines(text);
    let head = it.next().ok_or_else(|| Error::parse(0, "empty input, expected `ip`"))?;
    if head.keyword != "ip" {
        return Err(head.error(format!("expected `ip` header, found `{}`", head.keyword)));
    }
    head.expect_args(2)?;
    let m: usize = head.parse(0, "row count")?;
    let n: usize = head.parse(1, "column count")?;
    let mut rows: Vec<Option<(Row, BigInt)>> = vec![None; m];
    let (mut w, mut l, mut u) = (None, None, None);
    for line in it {
        match line.keyword {
            "row" => {
                line.expect_args(6)?;
                let i: usize = line.parse(0, "row index")?;
                if i >= m {
                    return Err(line.error(format!("row index {i} outside 0..{m}")));
                }
                if rows[i].is_some() {
                    return Err(line.error(format!("row {i} given twice")));
                }
                let row = Row {
                    a: (line.parse(1, "column")?, line.big(2, "coefficient")?),
                    b: (line.parse(3, "column")?, line.big(4, "coefficient")?),
                };
                rows[i] = Some((row, line.big(5, "right-hand side")?));
            }
            "w" | "l" | "u" => {
                let v: Vec<BigInt> = line.parse_all(0, "value")?;
                if v.len() != n {
                    return Err(line.error(format!("`{}` needs {n} values, got {}", line.keyword, v.len())));
                }
                let slot = match line.keyword {
                    "w" => &mut w,
                    "l" => &mut l,
                    _ => &mut u,
                };
                if slot.replace(v).is_some() {
                    return Err(line.error(format!("`{}` given twice", line.keyword)));
                }
            }
            other => return Err(line.error(format!("unknown keyword `{other}`"))),
        }
    }
    let mut a_rows = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (i, r) in rows.into_iter().enumerate() {
        let (row, rhs) = r.ok_or_else(|| Error::Instance(format!("row {i} missing")))?;
        a_rows.push(row);
        b.push(rhs);
    }
    let missing = |name: &str| Error::Instance(format!("`{name}` line missing"));
    let a = TwoNonzeroMatrix::new(n, a_rows)?;
    IpInstance::new(a, b, w.ok_or_else(|| missing("w"))?, l.ok_or_else(|| missing("l"))?, u.ok_or_else(|| missing("u"))?)
}

pub fn write_instance(inst: &IpInstance) -> String {
    let mut s = format!("ip {} {}\n", inst.a.row_count(), inst.a.col_count());
    for (i, (r, rhs)) in inst.a.rows().iter().zip(&inst.b).enumerate() {
        let _ = writeln!(s, "row {i} {} {} {} {} {rhs}", r.a.0, r.a.1, r.b.0, r.b.1);
    }
    let _ = writeln!(s, "w {}", join(&inst.w));
    let _ = writeln!(s, "l {}", join(&inst.l));
    let _ = writeln!(s, "u {}", join(&inst.u));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_VAR: &str = "ip 1 2\nrow 0 0 1 1 1 1\nw 1 1\nl 0 0\nu 1 1\n";

    #[test]
    fn round_trip() {
        let inst = parse_instance(TWO_VAR).unwrap();
        assert_eq!(inst.a.row_count(), 1);
        assert_eq!(write_instance(&inst), TWO_VAR);
    }

    #[test]
    fn big_values() {
        let text = "ip 1 2\nrow 0 0 123456789012345678901234567890 1 -1 0\nw 1 1\nl 0 0\nu 1 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(write_instance(&inst), text);
    }

    #[test]
    fn errors() {
        assert!(parse_instance("ip 1 2\nw 1 1\nl 0 0\nu 1 1\n").is_err());
        assert!(parse_instance("ip 1 2\nrow 0 0 1 0 1 1\nw 1 1\nl 0 0\nu 1 1\n").is_err());
        assert!(parse_instance("ip 1 2\nrow 0 0 1 1 0 1\nw 1 1\nl 0 0\nu 1 1\n").is_err());
        assert!(parse_instance("ip 1 2\nrow 0 0 1 1 1 1\nw 1\nl 0 0\nu 1 1\n").is_err());
        assert!(parse_instance("ip 1 2\nrow 0 0 1 1 1 1\nw 1 1\nl 2 0\nu 1 1\n").is_err());
    }
}
