//! Published closed forms for r ≤ 2, transcribed as printed, and exact diffs against the pipeline.
//!
//! Gamma ratios are rationalized here independently of [`super::pipeline::gamma_coef`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::ncpoly::{Letter, NCPoly, Word};
use super::pipeline::{a_operator, a_tilde, p_polys};
use super::ratfun::{factorial, DimRational, QPoly};
use crate::error::{Error, Result};

fn int(v: i64) -> DimRational {
    DimRational::from_int(v)
}

fn fact(k: i64) -> DimRational {
    DimRational::from_rational(BigRational::from_integer(factorial(k as u64)))
}

fn pow2(e: i64) -> DimRational {
    let v = BigRational::from_integer(BigInt::from(2).pow(e.unsigned_abs() as u32));
    DimRational::from_rational(if e >= 0 { v } else { BigRational::one() / v })
}

fn div(a: &DimRational, b: &DimRational) -> DimRational {
    (a / b).expect("fixture denominators are nonzero")
}

/// Γ((n−1)/2) Γ(M+½) / (√π Γ(M+(n−1)/2)).
fn gamma_ratio(mm: i64) -> DimRational {
    // Γ(M+½)/√π = (2M)! / (4^M M!)
    let half = div(&fact(2 * mm), &(&pow2(2 * mm) * &fact(mm)));
    // Γ(x)/Γ(x+M) = 1 / Π_{t<M} (x + t), x = (n−1)/2
    let x = DimRational::new(QPoly::linear(1, -1), QPoly::from_int(2)).expect("constant denominator");
    let mut prod = DimRational::one();
    for t in 0..mm {
        prod = &prod * &(&x + &int(t));
    }
    div(&half, &prod)
}

fn ij_word(p: usize, q: usize, dpow: usize) -> Word {
    let mut letters = vec![Letter::I; p];
    letters.extend(std::iter::repeat_n(Letter::J, q));
    letters.extend(std::iter::repeat_n(Letter::D, dpow));
    Word::new(letters, 0)
}

/// A^(m,0,0) with the π-power prefactors multiplied out.
pub fn reference_r0(m: usize) -> NCPoly {
    let mi = m as i64;
    let mut out = NCPoly::zero(m);
    for k in 0..=mi / 2 {
        // Γ((n−1)/2)/(2π^((n−1)/2)) · 2^(m+1) π^((n−2)/2) (m!)³ Γ(m+½) / ((2m)! Γ(m+(n−1)/2)) / (2^(2k) (k!)² (m−2k)!)
        let m3 = &(&fact(mi) * &fact(mi)) * &fact(mi);
        let num = &(&gamma_ratio(mi) * &pow2(mi)) * &m3;
        let den = &(&(&fact(2 * mi) * &pow2(2 * k)) * &(&fact(k) * &fact(k))) * &fact(mi - 2 * k);
        out.add_term(ij_word(k as usize, k as usize, 0), div(&num, &den));
    }
    out
}

/// P^(1,k) as printed: {−1: m(m+1) j, 0: m(m+n−3), 1: −|y|² d²}.
pub fn reference_p1(m: usize) -> [(i64, NCPoly); 3] {
    p1_with(m, m as i64 + 1)
}

/// P^(1,k) with the j coefficient −m(m−1) that the recurrence produces.
pub fn corrected_p1(m: usize) -> [(i64, NCPoly); 3] {
    p1_with(m, 1 - m as i64)
}

/// P^(1,−1) = m·κ·j.
fn p1_with(m: usize, kappa: i64) -> [(i64, NCPoly); 3] {
    let mi = m as i64;
    [
        (-1, NCPoly::monomial(m, Word::new(vec![Letter::J], 0), int(mi * kappa))),
        (0, NCPoly::identity(m).scale(&(&int(mi) * &DimRational::linear(1, mi - 3)))),
        (1, NCPoly::monomial(m, Word::new(vec![Letter::D, Letter::D], 1), int(-1))),
    ]
}

/// Ã^(m,1,l) as printed.
pub fn reference_r1(m: usize, l: usize) -> NCPoly {
    r1_with(m, l, m as i64 + 1)
}

/// Ã^(m,1,l) re-derived by the same substitution with P^(1,−1) = −m(m−1) j.
pub fn corrected_r1(m: usize, l: usize) -> NCPoly {
    r1_with(m, l, 1 - m as i64)
}

/// Ã^(m,1,l) when P^(1,−1) = m·κ·j; only the p-linear part of the l = 0 bracket depends on κ.
fn r1_with(m: usize, l: usize, kappa: i64) -> NCPoly {
    let mi = m as i64;
    let mut out = NCPoly::zero(m);
    match l {
        0 if m < 2 => return NCPoly::identity(m),
        0 => {
            let pre = div(
                &(&(&(&gamma_ratio(mi) * &int(mi)) * &(&fact(mi) * &fact(mi))) * &fact(mi - 2)),
                &fact(2 * mi),
            );
            for p in 0..=mi / 2 {
                let frac = div(&pow2(mi - 2 * p), &(&(&fact(p) * &fact(p)) * &fact(mi - 2 * p)));
                // 2pκ(2m+n−3) + (m−1)(m(m+n−3)+1)
                let t1 = &int(2 * p * kappa) * &DimRational::linear(1, 2 * mi - 3);
                let t2 = &int(mi - 1) * &(&(&int(mi) * &DimRational::linear(1, mi - 3)) + &int(1));
                let bracket = &t1 + &t2;
                out.add_term(ij_word(p as usize, p as usize, 0), &(&pre * &frac) * &bracket);
            }
        }
        1 => {
            let pre = div(
                &(&(&gamma_ratio(mi + 1) * &fact(mi)) * &(&fact(mi + 1) * &fact(mi + 2))),
                &fact(2 * mi + 2),
            );
            for p in 0..=mi / 2 {
                let frac = div(&pow2(mi - 2 * p), &(&(&fact(p) * &fact(p + 1)) * &fact(mi - 2 * p)));
                out.add_term(ij_word(p as usize, p as usize + 1, 2), -&(&pre * &frac));
            }
        }
        _ => {}
    }
    out
}

/// Ã^(m,2,l) as printed.
pub fn reference_r2(m: usize, l: usize) -> NCPoly {
    let mi = m as i64;
    let mut out = NCPoly::zero(m);
    match l {
        0 if m == 0 => return NCPoly::identity(0),
        0 if m == 1 => return NCPoly::identity(1).scale(&DimRational::linear(1, -1)),
        0 => {
            let q = DimRational::from_poly(
                &(&(&QPoly::n() * &QPoly::from_int(mi)) + &QPoly::from_int(mi * mi - 3 * mi + 1)) * &QPoly::from_int(1),
            ); // m² + mn − 3m + 1
            let a = DimRational::linear(1, 2 * mi - 3);
            let b = DimRational::linear(1, 2 * mi - 5);
            for p in 0..=mi / 2 {
                let num = &(&(&(&pow2(mi - 2 * p) * &int(mi * mi)) * &fact(mi)) * &fact(mi - 1)) * &fact(mi - 2);
                let den = &(&(&fact(mi - 2 * p) * &fact(p)) * &fact(p)) * &fact(2 * mi);
                let bracket = &(&(&int(mi - 1) * &(&q * &q)) + &(&(&int(4 * p) * &a) * &q))
                    - &(&(&int(4 * (mi + 1) * p * p) * &a) * &b);
                let c = &(&gamma_ratio(mi) * &div(&num, &den)) * &bracket;
                out.add_term(ij_word(p as usize, p as usize, 0), c);
            }
        }
        1 => {
            // m² + mn − m + n − 1
            let q = DimRational::linear(mi + 1, mi * mi - mi - 1);
            let pre = div(
                &(&(&(&(&pow2(mi + 1) * &fact(mi)) * &fact(mi + 1)) * &fact(mi + 2)) * &(&q * &gamma_ratio(mi + 1))),
                &fact(2 * mi + 2),
            );
            for p in 0..=mi / 2 {
                let den = &(&(&pow2(2 * p) * &fact(p)) * &fact(p + 1)) * &fact(mi - 2 * p);
                out.add_term(ij_word(p as usize, p as usize + 1, 2), -&div(&pre, &den));
            }
        }
        2 => {
            let pre = div(
                &(&(&(&pow2(mi) * &fact(mi)) * &fact(mi + 2)) * &(&fact(mi + 4) * &gamma_ratio(mi + 2))),
                &fact(2 * mi + 4),
            );
            for p in 0..=mi / 2 {
                let den = &(&(&pow2(2 * p) * &fact(p)) * &fact(p + 2)) * &fact(mi - 2 * p);
                out.add_term(ij_word(p as usize, p as usize + 2, 4), div(&pre, &den));
            }
        }
        _ => {}
    }
    out
}

/// One differing word in a comparison.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WordDiff {
    pub word: String,
    pub pipeline: String,
    pub reference: String,
}

/// Comparison of one operator against its closed form.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OperatorComparison {
    pub operator: String,
    pub matches: bool,
    pub pipeline: String,
    pub reference: String,
    pub diffs: Vec<WordDiff>,
}

/// All comparisons for one (m, r).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReferenceReport {
    pub m: usize,
    pub r: usize,
    pub comparisons: Vec<OperatorComparison>,
}

impl ReferenceReport {
    pub fn all_match(&self) -> bool {
        self.comparisons.iter().all(|c| c.matches)
    }
}

fn compare(name: String, pipeline: &NCPoly, reference: &NCPoly) -> OperatorComparison {
    let diffs: Vec<WordDiff> = pipeline
        .diff_terms(reference)
        .into_iter()
        .map(|(w, a, b)| WordDiff { word: w.to_string(), pipeline: a.to_string(), reference: b.to_string() })
        .collect();
    OperatorComparison {
        operator: name,
        matches: diffs.is_empty(),
        pipeline: pipeline.to_text(),
        reference: reference.to_text(),
        diffs,
    }
}

/// Exact diff of the pipeline against the closed forms for r ∈ {0, 1, 2}.
///
/// For r = 0 the self-adjoint A^(m,0,0) is compared; for r ≥ 1 the unsymmetrized Ã^(m,r,l),
/// and for r = 1 also P^(1,k).
pub fn reference_compare(m: usize, r: usize) -> Result<ReferenceReport> {
    let mut comparisons = Vec::new();
    match r {
        0 => comparisons.push(compare(format!("A({m},0,0)"), &a_operator(m, 0, 0)?, &reference_r0(m))),
        1 => {
            let ps = p_polys(1, m)?;
            for (k, reference) in reference_p1(m) {
                comparisons.push(compare(format!("P(1,{k}) at m={m}"), &ps[&k], &reference));
            }
            for l in 0..=1 {
                comparisons.push(compare(format!("A~({m},1,{l})"), &a_tilde(m, 1, l)?, &reference_r1(m, l)));
            }
        }
        2 => {
            for l in 0..=2 {
                comparisons.push(compare(format!("A~({m},2,{l})"), &a_tilde(m, 2, l)?, &reference_r2(m, l)));
            }
        }
        _ => return Err(Error::Argument(format!("closed forms exist for r <= 2, got {r}"))),
    }
    Ok(ReferenceReport { m, r, comparisons })
}

/// Exact diff of P^(1,k) and Ã^(m,1,l) against the r = 1 closed forms with the corrected P^(1,−1).
pub fn corrected_r1_compare(m: usize) -> Result<ReferenceReport> {
    let mut comparisons = Vec::new();
    let ps = p_polys(1, m)?;
    for (k, reference) in corrected_p1(m) {
        comparisons.push(compare(format!("P(1,{k}) at m={m}, corrected"), &ps[&k], &reference));
    }
    for l in 0..=1 {
        comparisons.push(compare(format!("A~({m},1,{l}), corrected"), &a_tilde(m, 1, l)?, &corrected_r1(m, l)));
    }
    Ok(ReferenceReport { m, r: 1, comparisons })
}

#[cfg(test)]
mod tests {
    use super::super::pipeline::gamma_coef;
    use super::*;

    #[test]
    fn gamma_ratio_agrees_with_pipeline() {
        for mm in 0..8 {
            assert_eq!(gamma_ratio(mm), gamma_coef(mm as usize, 0).unwrap());
        }
    }

    #[test]
    fn r0_prefactor_collapses() {
        assert_eq!(reference_r0(0), NCPoly::identity(0));
    }
}
