use std::collections::HashMap;

use super::field::{divergence, inner_d, metric_i, trace_j, TangentField};
use crate::error::{Error, Result};
use crate::opcalc::{specialize, Letter, NCPoly, SpecPoly, Word};
use crate::symtensor::C64;

fn apply_letter(l: Letter, f: &TangentField) -> Result<TangentField> {
    match l {
        Letter::I => Ok(metric_i(f)),
        Letter::J => trace_j(f),
        Letter::D => Ok(inner_d(f)),
        Letter::Delta => divergence(f),
    }
}

/// Applies one word right to left; |y|² factors are 1 on the unit sphere.
pub fn apply_word(w: &Word, f: &TangentField) -> Result<TangentField> {
    if w.output_rank(f.m()).is_none() {
        return Err(Error::Structural(format!("word `{w}` passes through a negative rank on rank {}", f.m())));
    }
    w.letters.iter().rev().try_fold(f.clone(), |acc, &l| apply_letter(l, &acc))
}

fn output_rank(p: &SpecPoly, f: &TangentField) -> Result<usize> {
    if p.base_rank != f.m() {
        return Err(Error::Structural(format!("operator acts on rank {}, field has rank {}", p.base_rank, f.m())));
    }
    let mut out_rank = None;
    for w in p.terms().keys() {
        let r = w
            .output_rank(f.m())
            .ok_or_else(|| Error::Structural(format!("word `{w}` passes through a negative rank")))?;
        if *out_rank.get_or_insert(r) != r {
            return Err(Error::Structural(format!("word `{w}` maps to rank {r}, others to {}", out_rank.unwrap_or(r))));
        }
    }
    Ok(out_rank.unwrap_or(f.m()))
}

/// Evaluates Σ c_w · w(f), sharing common right factors between words.
pub fn apply_ncpoly(p: &SpecPoly, f: &TangentField) -> Result<TangentField> {
    Ok(apply_many(std::slice::from_ref(p), f)?.remove(0))
}

/// Evaluates several operators on one field; right factors are shared across all their words.
pub fn apply_many(ps: &[SpecPoly], f: &TangentField) -> Result<Vec<TangentField>> {
    let ranks = ps.iter().map(|p| output_rank(p, f)).collect::<Result<Vec<_>>>()?;
    // suffix (the letters applied first) → value
    let mut cache: HashMap<Vec<Letter>, TangentField> = HashMap::new();
    let mut outs = Vec::with_capacity(ps.len());
    for (p, rank) in ps.iter().zip(ranks) {
        let mut out = TangentField::zeros(f.grid(), rank);
        for (w, c) in p.float_terms() {
            let len = w.letters.len();
            let mut start = len;
            while start > 0 && cache.contains_key(&w.letters[start - 1..]) {
                start -= 1;
            }
            let mut cur = if start == len { f.clone() } else { cache[&w.letters[start..]].clone() };
            for s in (0..start).rev() {
                cur = apply_letter(w.letters[s], &cur)?;
                cache.insert(w.letters[s..].to_vec(), cur.clone());
            }
            out.axpy(C64::new(c, 0.0), &cur)?;
        }
        outs.push(out);
    }
    Ok(outs)
}

/// Specializes a ℚ(n) operator at the grid dimension and applies it.
pub fn apply_dim(p: &NCPoly, f: &TangentField) -> Result<TangentField> {
    apply_ncpoly(&specialize(p, f.grid().n() as i64)?, f)
}
