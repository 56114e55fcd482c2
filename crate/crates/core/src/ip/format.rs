//! Result record format.
//!
//! ```text
//! status optimal|infeasible
//! objective <value>        # optimal only
//! x <var> <value>          # optimal only, one line per variable
//! ```

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::SolveResult;
use crate::error::{Error, Result};
use crate::text::lines;

pub fn write_result(r: &SolveResult) -> String {
    match r {
        SolveResult::Infeasible => "status infeasible\n".to_string(),
        SolveResult::Optimal { objective, x } => {
            let mut s = format!("status optimal\nobjective {objective}\n");
            for (i, v) in x.iter().enumerate() {
                let _ = writeln!(s, "x {i} {v}");
            }
            s
        }
    }
}

pub fn parse_result(text: &str) -> Result<SolveResult> {
    let mut it = lines(text);
    let head = it.next().ok_or_else(|| Error::parse(0, "empty input, expected `status`"))?;
    if head.keyword != "status" {
        return Err(head.error(format!("expected `status`, found `{}`", head.keyword)));
    }
    head.expect_args(1)?;
    let optimal = match head.args[0] {
        "optimal" => true,
        "infeasible" => false,
        other => return Err(head.error(format!("unknown status `{other}`"))),
    };
    let mut objective = None;
    let mut x: Vec<BigInt> = Vec::new();
    for line in it {
        if !optimal {
            return Err(line.error("an infeasible result has no further lines"));
        }
        match line.keyword {
            "objective" => {
                line.expect_args(1)?;
                if objective.replace(line.big(0, "objective")?).is_some() {
                    return Err(line.error("`objective` given twice"));
                }
            }
            "x" => {
                line.expect_args(2)?;
                let i: usize = line.parse(0, "variable")?;
                if i != x.len() {
                    return Err(line.error(format!("expected variable {}, found {i}", x.len())));
                }
                x.push(line.big(1, "value")?);
            }
            other => return Err(line.error(format!("unknown keyword `{other}`"))),
        }
    }
    if !optimal {
        return Ok(SolveResult::Infeasible);
    }
    let objective = objective.ok_or_else(|| Error::parse(0, "missing `objective` line"))?;
    Ok(SolveResult::Optimal { objective, x })
}
