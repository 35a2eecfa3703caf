//! CSV formats.
//!
//! Step functions: header `t,value`; row `t_i,v_i` sets the value on
//! `[t_i, t_{i+1})`. The last row is the final breakpoint and its value anchors
//! the tail (at `t = 1` when the only row is `t = 0`). Optional lines `tail,<kind>,<a>[,<b>]` and `lead,<kind>,<a>[,<b>]`
//! with kind `zero`, `power` or `powerlog`; a lead replaces the first cell and
//! is anchored to its value at `t_1`.
//!
//! Sequences: header `n,value`, 1-based indices, missing entries are zero.

use super::piece::Piece;
use super::step::{Grid, StepFunction, TailSpec};
use super::FuncError;
use crate::exponent::{parse_rational, Q};
use num_traits::One;
use std::path::Path;

fn parse_f64(s: &str) -> Result<f64, FuncError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| FuncError::Parse(format!("not a number: `{s}`")))
}

fn parse_kind(fields: &[&str]) -> Result<TailSpec, FuncError> {
    let kind = fields.first().map(|s| s.trim().to_ascii_lowercase()).unwrap_or_default();
    let exp = |i: usize| -> Result<Q, FuncError> {
        let s = fields
            .get(i)
            .ok_or_else(|| FuncError::Parse(format!("`{kind}` needs exponent #{i}")))?;
        parse_rational(s).map_err(|e| FuncError::Parse(e.to_string()))
    };
    match kind.as_str() {
        "zero" => Ok(TailSpec::Zero),
        "power" => Ok(TailSpec::Power { a: exp(1)? }),
        "powerlog" => Ok(TailSpec::PowerLog { a: exp(1)?, b: exp(2)? }),
        other => Err(FuncError::Parse(format!("unknown piece kind `{other}`"))),
    }
}

/// A tail starting at 0 is anchored at `t = 1` instead.
fn anchor_point(last: f64) -> f64 {
    if last > 0.0 {
        last
    } else {
        1.0
    }
}

pub fn parse_step_csv(text: &str) -> Result<StepFunction, FuncError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    let mut tail = TailSpec::Zero;
    let mut lead = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| FuncError::Parse(e.to_string()))?;
        let fields: Vec<&str> = rec.iter().collect();
        match fields.first().map(|s| s.to_ascii_lowercase()) {
            Some(ref k) if k == "tail" => tail = parse_kind(&fields[1..])?,
            Some(ref k) if k == "lead" => lead = Some(parse_kind(&fields[1..])?),
            Some(_) => {
                if fields.len() < 2 {
                    return Err(FuncError::Parse(format!("row `{}` needs t,value", fields.join(","))));
                }
                ts.push(parse_f64(fields[0])?);
                vs.push(parse_f64(fields[1])?);
            }
            None => {}
        }
    }
    if ts.is_empty() {
        return Err(FuncError::Parse("no rows".into()));
    }
    let anchor = vs.pop().unwrap();
    let grid = Grid::new(ts)?;
    let tail_piece = match tail.unit_piece() {
        Some(p) => Some(p.anchored(anchor_point(grid.last()), anchor)),
        None => None,
    };
    let lead_piece = match lead.and_then(|l| l.unit_piece()) {
        Some(p) => {
            if grid.cells() == 0 {
                return Err(FuncError::Parse("lead needs at least one cell".into()));
            }
            Some(p.anchored(grid.points()[1], vs[0]))
        }
        None => None,
    };
    StepFunction::from_parts(grid, vs, lead_piece, tail_piece)
}

pub fn read_step_csv(path: &Path) -> Result<StepFunction, FuncError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FuncError::Io(format!("{}: {e}", path.display())))?;
    parse_step_csv(&text)
}

fn kind_line(tag: &str, p: &Piece) -> String {
    let fmt = |x: Q| format!("{}/{}", x.numer(), x.denom());
    if p.has_log() {
        format!("{tag},powerlog,{},{}\n", fmt(p.a), fmt(p.b))
    } else {
        format!("{tag},power,{}\n", fmt(p.a))
    }
}

/// Inverse of `parse_step_csv` for functions whose pieces are unshifted with
/// `k = 1`.
pub fn write_step_csv(f: &StepFunction) -> Result<String, FuncError> {
    for p in f.lead().iter().chain(f.tail().iter()) {
        if p.shift != 0.0 || (p.has_log() && p.k != Q::one()) {
            return Err(FuncError::Unsupported(
                "only unshifted pieces with log(e+t) factors are expressible in CSV".into(),
            ));
        }
    }
    let b = f.grid().points();
    let mut out = String::from("t,value\n");
    for (i, v) in f.values().iter().enumerate() {
        let v = match (i, f.lead()) {
            (0, Some(p)) => p.value(b[1]),
            _ => *v,
        };
        out.push_str(&format!("{},{}\n", b[i], v));
    }
    let last = f.grid().last();
    let anchor = f.tail().map(|p| p.value(anchor_point(last))).unwrap_or(0.0);
    out.push_str(&format!("{last},{anchor}\n"));
    if let Some(p) = f.lead() {
        out.push_str(&kind_line("lead", p));
    }
    match f.tail() {
        Some(p) => out.push_str(&kind_line("tail", p)),
        None => out.push_str("tail,zero\n"),
    }
    Ok(out)
}

pub fn parse_sequence_csv(text: &str) -> Result<Vec<f64>, FuncError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut seq: Vec<f64> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| FuncError::Parse(e.to_string()))?;
        let n: usize = rec
            .get(0)
            .and_then(|s| s.parse().ok())
            .filter(|n| *n >= 1)
            .ok_or_else(|| FuncError::Parse("index must be an integer >= 1".into()))?;
        let v = parse_f64(rec.get(1).unwrap_or(""))?;
        if seq.len() < n {
            seq.resize(n, 0.0);
        }
        seq[n - 1] = v;
    }
    Ok(seq)
}

pub fn read_sequence_csv(path: &Path) -> Result<Vec<f64>, FuncError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FuncError::Io(format!("{}: {e}", path.display())))?;
    parse_sequence_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::qi;

    #[test]
    fn reads_cells_and_tail() {
        let f = parse_step_csv("t,value\n0,2\n1,1\n2,1\ntail,power,2\n").unwrap();
        assert_eq!(f.values(), &[2.0, 1.0]);
        assert_eq!(f.eval(4.0), 0.25);
        assert_eq!(f.tail().unwrap().a, qi(2));
    }

    #[test]
    fn lead_is_anchored() {
        let f = parse_step_csv("t,value\n0,1\n1,0\nlead,power,1/2\n").unwrap();
        assert!((f.eval(0.25) - 2.0).abs() < 1e-15);
        assert!(f.has_zero_tail());
    }

    #[test]
    fn roundtrip() {
        let text = "t,value\n0,3\n0.5,2\n2,1\ntail,powerlog,1,2\n";
        let f = parse_step_csv(text).unwrap();
        let g = parse_step_csv(&write_step_csv(&f).unwrap()).unwrap();
        assert_eq!(f.values(), g.values());
        for t in [0.1, 1.0, 3.0, 100.0] {
            assert!((f.eval(t) - g.eval(t)).abs() <= 1e-14 * f.eval(t));
        }
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(parse_step_csv("t,value\n1,1\n").is_err());
        assert!(parse_step_csv("t,value\n0,1\n1,x\n").is_err());
        assert!(parse_step_csv("t,value\n0,1\n1,1\ntail,cubic,2\n").is_err());
    }

    #[test]
    fn sequences() {
        let s = parse_sequence_csv("n,value\n1,0.5\n3,2\n").unwrap();
        assert_eq!(s, vec![0.5, 0.0, 2.0]);
    }
}
