//! Columnar text dump of a field: one header line, then one row per node with
//! coordinates, quadrature weight, and the real and imaginary parts of every component.

use std::fmt::Write as _;

use super::field::TangentField;
use crate::error::{Error, Result};
use crate::symtensor::{layout, SymTensor, C64};

/// Serializes a field; the header names every column.
pub fn write_snapshot(f: &TangentField) -> String {
    let g = f.grid();
    let n = g.n();
    let lay = layout(n, f.m());
    let mut out = format!("# n={} m={} nodes={}\n", n, f.m(), g.len());
    let mut cols: Vec<String> = (1..=n).map(|k| format!("y{k}")).collect();
    cols.push("w".into());
    for p in 0..lay.len() {
        let key: String = lay.index(p).iter().map(|i| (i + 1).to_string()).collect();
        cols.push(format!("re{key}"));
        cols.push(format!("im{key}"));
    }
    out.push_str(&cols.join(" "));
    out.push('\n');
    for i in 0..g.len() {
        let mut row: Vec<String> = g.node(i).iter().map(|v| format!("{v:e}")).collect();
        row.push(format!("{:e}", g.weights()[i]));
        for z in f.value(i).comps() {
            row.push(format!("{:e}", z.re));
            row.push(format!("{:e}", z.im));
        }
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parsed snapshot: node coordinates, weights, and per-node tensors.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub n: usize,
    pub m: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub values: Vec<SymTensor>,
}

fn bad(line: usize, msg: &str) -> Error {
    Error::Validation(format!("snapshot line {line}: {msg}"))
}

pub fn read_snapshot(text: &str) -> Result<Snapshot> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad(1, "empty"))?;
    let field = |key: &str| -> Result<usize> {
        header
            .split_whitespace()
            .find_map(|t| t.strip_prefix(key))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(1, &format!("missing {key}")))
    };
    let (n, m, count) = (field("n=")?, field("m=")?, field("nodes=")?);
    lines.next().ok_or_else(|| bad(2, "missing column names"))?;
    let comps = layout(n, m).len();
    let mut snap = Snapshot { n, m, nodes: Vec::new(), weights: Vec::new(), values: Vec::new() };
    for (k, line) in lines.enumerate() {
        let v: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| bad(k + 3, "bad number")))
            .collect::<Result<_>>()?;
        if v.len() != n + 1 + 2 * comps {
            return Err(bad(k + 3, "wrong column count"));
        }
        snap.nodes.push(v[..n].to_vec());
        snap.weights.push(v[n]);
        let z = (0..comps).map(|c| C64::new(v[n + 1 + 2 * c], v[n + 2 + 2 * c])).collect();
        snap.values.push(SymTensor::from_comps(n, m, z)?);
    }
    if snap.nodes.len() != count {
        return Err(bad(0, &format!("{} rows for {count} nodes", snap.nodes.len())));
    }
    Ok(snap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherecalc::SphereGrid;

    #[test]
    fn roundtrip() {
        let g = SphereGrid::circle(16, 4).unwrap();
        let f = TangentField::random(&g, 2, 3, 1);
        let text = write_snapshot(&f);
        assert!(text.lines().nth(1).unwrap().starts_with("y1 y2 w re11 im11"));
        let s = read_snapshot(&text).unwrap();
        assert_eq!((s.n, s.m, s.nodes.len()), (2, 2, 16));
        assert_eq!(s.values, f.values());
        assert_eq!(s.weights, g.weights());
        assert!(read_snapshot("# n=2 m=0 nodes=1\ny1 y2 w re im\n1 0\n").is_err());
    }
}
