//! Recurrence for P^(r,k) and the assembly B → Ã → A.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::ncpoly::{Letter, NCPoly, SpecPoly, Word};
use super::ratfun::{binomial, factorial, DimRational, QPoly};
use crate::error::{Error, Result};

/// Largest r accepted by the pipeline; coefficient sizes grow quickly beyond it.
pub const MAX_R: usize = 8;

fn check_r(r: usize) -> Result<()> {
    if r > MAX_R {
        return Err(Error::Argument(format!("r = {r} exceeds the depth cap {MAX_R}")));
    }
    Ok(())
}

/// (rank)(rank + n − 3) as a polynomial in n.
fn diag_coef(rank: i64) -> DimRational {
    &DimRational::from_int(rank) * &DimRational::linear(1, rank - 3)
}

/// P^(r,k) for k ∈ [−r, r], as operators on rank-m fields producing rank m+2k.
///
/// P^(0,0) = 1 and
/// P^(r+1,k) = −|y|²d² P^(r,k−1) + (m+2k)(m+2k+n−3) P^(r,k) − (m+2k+2)(m+2k+1) j P^(r,k+1).
pub fn p_polys(r: usize, m: usize) -> Result<BTreeMap<i64, NCPoly>> {
    check_r(r)?;
    let mut cur: BTreeMap<i64, NCPoly> = BTreeMap::new();
    cur.insert(0, NCPoly::identity(m));
    let dd = Word::new(vec![Letter::D, Letter::D], 1);
    let jw = Word::new(vec![Letter::J], 0);
    for step in 0..r as i64 {
        let mut next = BTreeMap::new();
        for k in -(step + 1)..=(step + 1) {
            let mut acc = NCPoly::zero(m);
            if let Some(p) = cur.get(&(k - 1)) {
                acc = acc.add(&p.left_word(&dd, &DimRational::from_int(-1)))?;
            }
            let rank = m as i64 + 2 * k;
            if let Some(p) = cur.get(&k) {
                acc = acc.add(&p.scale(&diag_coef(rank)))?;
            }
            if let Some(p) = cur.get(&(k + 1)) {
                let c = DimRational::from_int(-(rank + 2) * (rank + 1));
                acc = acc.add(&p.left_word(&jw, &c))?;
            }
            next.insert(k, acc);
        }
        cur = next;
    }
    Ok(cur)
}

/// Buckets terms by |y|² count and strips the marker.
pub fn radial_split(p: &NCPoly) -> Result<BTreeMap<u32, NCPoly>> {
    let mut out: BTreeMap<u32, NCPoly> = BTreeMap::new();
    for (w, c) in p.terms() {
        let dcount = w.count(Letter::D);
        if dcount != 2 * w.rad as usize || w.count(Letter::Delta) > 0 {
            return Err(Error::Consistency(format!("word `{w}` has |y|^2 count {} but {dcount} d letters", w.rad)));
        }
        out.entry(w.rad)
            .or_insert_with(|| NCPoly::zero(p.base_rank))
            .add_term(Word::new(w.letters.clone(), 0), c.clone());
    }
    out.retain(|_, q| !q.is_zero());
    Ok(out)
}

/// Γ((n−1)/2) Γ(m+k+½) / (√π Γ(m+k+(n−1)/2)) = (2M−1)!! / Π_{t<M} (n−1+2t), M = m+k.
pub fn gamma_coef(m: usize, k: i64) -> Result<DimRational> {
    let mk = m as i64 + k;
    if mk < 0 {
        return Err(Error::Argument(format!("gamma_coef needs m + k >= 0, got {mk}")));
    }
    let num: BigInt = (1..=mk).map(|t| BigInt::from(2 * t - 1)).product();
    let mut den = QPoly::from_int(1);
    for t in 0..mk {
        den = &den * &QPoly::linear(1, 2 * t - 1);
    }
    DimRational::new(QPoly::constant(BigRational::from_integer(num)), den)
}

/// a_p(m,k) = 2^(m−2p) m!(m+k)!(m+2k)! / ((m−2p)! p!(p+k)! (2m+2k)!).
pub fn a_coef(m: usize, k: i64, p: usize) -> BigRational {
    let m_i = m as i64;
    let top = BigInt::from(2).pow((m - 2 * p) as u32)
        * factorial(m as u64)
        * factorial((m_i + k) as u64)
        * factorial((m_i + 2 * k) as u64);
    let bottom = factorial((m - 2 * p) as u64)
        * factorial(p as u64)
        * factorial((p as i64 + k) as u64)
        * factorial((2 * m_i + 2 * k) as u64);
    BigRational::new(top, bottom)
}

fn i_p_j_q(p: usize, q: usize) -> Word {
    let mut letters = vec![Letter::I; p];
    letters.extend(std::iter::repeat_n(Letter::J, q));
    Word::new(letters, 0)
}

/// C^(m,k) = Σ_p a_p(m,k) i^p j^(p+k), acting on rank m+2k.
pub fn c_operator(m: usize, k: i64) -> Result<NCPoly> {
    let base = m as i64 + 2 * k;
    if base < 0 {
        return Err(Error::Argument(format!("c_operator needs m + 2k >= 0, got {base}")));
    }
    let mut out = NCPoly::zero(base as usize);
    for p in (-k).max(0) as usize..=m / 2 {
        let q = (p as i64 + k) as usize;
        out.add_term(i_p_j_q(p, q), DimRational::from_rational(a_coef(m, k, p)));
    }
    Ok(out)
}

/// Which k enter B^(m,q,l).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KRange {
    /// Every k ∈ [−q, q] whose P^(q,k,l) is nonzero.
    Full,
    /// Only |k| ≥ l, as printed in the radial-split formula.
    AtLeastL,
}

/// B^(m,q,l) = Σ_k γ(m,k) C^(m,k) P^(q,k,l).
pub fn b_operator(m: usize, q: usize, l: usize) -> Result<NCPoly> {
    b_operator_with(m, q, l, KRange::Full)
}

pub fn b_operator_with(m: usize, q: usize, l: usize, range: KRange) -> Result<NCPoly> {
    if l > q {
        return Err(Error::Argument(format!("b_operator needs l <= q, got l = {l}, q = {q}")));
    }
    let ps = p_polys(q, m)?;
    let mut out = NCPoly::zero(m);
    for (&k, p) in &ps {
        if m as i64 + 2 * k < 0 || (range == KRange::AtLeastL && k.unsigned_abs() < l as u64) {
            continue;
        }
        let split = radial_split(p)?;
        let Some(pkl) = split.get(&(l as u32)) else { continue };
        let c = c_operator(m, k)?.scale(&gamma_coef(m, k)?);
        out = out.add(&c.compose(pkl)?)?;
    }
    Ok(out)
}

/// Ã^(m,r,l) = Σ_{q=l}^{r} binom(r,q) B^(m,q,l).
pub fn a_tilde(m: usize, r: usize, l: usize) -> Result<NCPoly> {
    a_tilde_with(m, r, l, KRange::Full)
}

pub fn a_tilde_with(m: usize, r: usize, l: usize, range: KRange) -> Result<NCPoly> {
    check_r(r)?;
    if l > r {
        return Err(Error::Argument(format!("a_tilde needs l <= r, got l = {l}, r = {r}")));
    }
    let mut out = NCPoly::zero(m);
    for q in l..=r {
        let b = b_operator_with(m, q, l, range)?;
        let c = DimRational::from_rational(BigRational::from_integer(binomial(r as u64, q as u64)));
        out = out.add(&b.scale(&c))?;
    }
    Ok(out)
}

/// Formal adjoint with respect to the L² pairing on the sphere.
pub fn adjoint(p: &NCPoly) -> NCPoly {
    p.adjoint()
}

/// A^(m,r,l) = ½(Ã + Ã*).
pub fn a_operator(m: usize, r: usize, l: usize) -> Result<NCPoly> {
    let at = a_tilde(m, r, l)?;
    let half = DimRational::from_rational(BigRational::new(1.into(), 2.into()));
    Ok(at.add(&at.adjoint())?.scale(&half))
}

/// Outcome of [`rank_flow_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankFlowReport {
    pub base_rank: usize,
    pub output_rank: Option<usize>,
    /// Common number of derivative letters, if all words agree.
    pub order: Option<usize>,
}

/// Verifies every word maps base_rank to base_rank and all words share one derivative order.
pub fn rank_flow_check(p: &NCPoly) -> Result<RankFlowReport> {
    let mut order = None;
    for w in p.terms().keys() {
        match w.output_rank(p.base_rank) {
            Some(r) if r == p.base_rank => {}
            Some(r) => {
                return Err(Error::Structural(format!("word `{w}` maps rank {} to {r}", p.base_rank)));
            }
            None => {
                return Err(Error::Structural(format!("word `{w}` passes through a negative rank")));
            }
        }
        let o = w.derivative_order();
        match order {
            None => order = Some(o),
            Some(prev) if prev != o => {
                return Err(Error::Structural(format!("word `{w}` has order {o}, expected {prev}")));
            }
            _ => {}
        }
    }
    Ok(RankFlowReport { base_rank: p.base_rank, output_rank: p.output_rank(), order })
}

/// Rank flow plus the requirement that every word has exactly 2l derivative letters.
pub fn check_order(p: &NCPoly, l: usize) -> Result<RankFlowReport> {
    let rep = rank_flow_check(p)?;
    if let Some(o) = rep.order {
        if o != 2 * l {
            return Err(Error::Structural(format!("operator has order {o}, expected {}", 2 * l)));
        }
    }
    Ok(rep)
}

/// Exact evaluation of every coefficient at n = n0.
pub fn specialize(p: &NCPoly, n0: i64) -> Result<SpecPoly> {
    if n0 < 2 {
        return Err(Error::Argument(format!("dimension n = {n0} must be at least 2")));
    }
    p.map_coeffs(|c| c.eval(n0))
}

/// Word-level self-adjointness.
pub fn is_self_adjoint(p: &NCPoly) -> bool {
    p.adjoint() == *p
}

#[cfg(test)]
mod tests {
    use super::super::ratfun::rat;
    use super::*;
    use Letter::*;

    fn word(l: &[Letter], rad: u32) -> Word {
        Word::new(l.to_vec(), rad)
    }

    #[test]
    fn p_r0_and_r1() {
        let p0 = p_polys(0, 3).unwrap();
        assert_eq!(p0.len(), 1);
        assert_eq!(p0[&0], NCPoly::identity(3));
        for m in 0..7usize {
            let p1 = p_polys(1, m).unwrap();
            let mi = m as i64;
            let expect_m1 = NCPoly::monomial(m, word(&[J], 0), DimRational::from_int(-mi * (mi - 1)));
            assert_eq!(p1[&-1], expect_m1);
            assert_eq!(p1[&0], NCPoly::identity(m).scale(&diag_coef(mi)));
            assert_eq!(p1[&1], NCPoly::monomial(m, word(&[D, D], 1), DimRational::from_int(-1)));
        }
    }

    #[test]
    fn p_r2_k1_k2() {
        for m in 0..5usize {
            let mi = m as i64;
            let p2 = p_polys(2, m).unwrap();
            assert_eq!(p2[&2], NCPoly::monomial(m, word(&[D, D, D, D], 2), DimRational::one()));
            let c = &(&diag_coef(mi) + &diag_coef(mi + 2)) * &DimRational::from_int(-1);
            assert_eq!(p2[&1], NCPoly::monomial(m, word(&[D, D], 1), c));
        }
    }

    #[test]
    fn split_examples() {
        let p1 = p_polys(1, 4).unwrap();
        let s = radial_split(&p1[&1]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[&1], NCPoly::monomial(4, word(&[D, D], 0), DimRational::from_int(-1)));
        let s = radial_split(&p1[&-1]).unwrap();
        assert!(!s.contains_key(&1));
        let bad = NCPoly::monomial(0, word(&[D, D], 0), DimRational::one());
        assert!(matches!(radial_split(&bad), Err(Error::Consistency(_))));
    }

    #[test]
    fn gamma_examples() {
        assert!(gamma_coef(0, 0).unwrap().is_one());
        assert_eq!(gamma_coef(1, 0).unwrap().eval(3).unwrap(), rat(1, 2));
        assert!(gamma_coef(0, -1).is_err());
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_operator(0, 0).unwrap(), NCPoly::identity(0));
        assert_eq!(c_operator(1, 0).unwrap(), NCPoly::identity(1));
        assert!(c_operator(1, -1).is_err() || c_operator(1, -1).unwrap().is_zero());
        let c2 = c_operator(2, 0).unwrap();
        assert_eq!(c2.coeff(&Word::identity()), DimRational::from_rational(rat(2, 3)));
        assert_eq!(c2.coeff(&word(&[I, J], 0)), DimRational::from_rational(rat(1, 3)));
        assert_eq!(a_coef(2, 1, 1), rat(1, 5));
    }

    #[test]
    fn b_examples() {
        let b = b_operator(0, 1, 1).unwrap();
        let c = -&gamma_coef(0, 1).unwrap();
        assert_eq!(b, NCPoly::monomial(0, word(&[J, D, D], 0), c));
        for m in 0..5 {
            let b0 = b_operator(m, 0, 0).unwrap();
            assert_eq!(b0, c_operator(m, 0).unwrap().scale(&gamma_coef(m, 0).unwrap()));
        }
    }

    #[test]
    fn a_tilde_examples() {
        assert_eq!(a_tilde(0, 1, 0).unwrap(), NCPoly::identity(0));
        assert_eq!(a_tilde(1, 1, 0).unwrap(), NCPoly::identity(1));
        assert_eq!(a_tilde(1, 2, 0).unwrap(), NCPoly::identity(1).scale(&DimRational::linear(1, -1)));
        assert_eq!(a_tilde(0, 2, 0).unwrap(), NCPoly::identity(0));
    }

    #[test]
    fn a_operator_examples() {
        let a = a_operator(0, 1, 1).unwrap();
        let g = gamma_coef(0, 1).unwrap();
        let half = DimRational::from_rational(rat(-1, 2));
        let c = &g * &half;
        let mut expect = NCPoly::zero(0);
        expect.add_term(word(&[J, D, D], 0), c.clone());
        expect.add_term(word(&[Delta, Delta, I], 0), c);
        assert_eq!(a, expect);
        for m in 0..4 {
            assert_eq!(a_operator(m, 0, 0).unwrap(), a_tilde(m, 0, 0).unwrap());
            assert_eq!(a_operator(m, 2, 0).unwrap(), a_tilde(m, 2, 0).unwrap());
        }
    }

    #[test]
    fn rank_flow_examples() {
        assert_eq!(check_order(&a_operator(3, 0, 0).unwrap(), 0).unwrap().order, Some(0));
        assert_eq!(check_order(&a_operator(2, 1, 1).unwrap(), 1).unwrap().order, Some(2));
        let bad = NCPoly::monomial(1, word(&[I, D], 0), DimRational::one());
        assert!(matches!(rank_flow_check(&bad), Err(Error::Structural(_))));
    }

    #[test]
    fn specialize_examples() {
        let s = specialize(&a_tilde(1, 2, 0).unwrap(), 3).unwrap();
        assert_eq!(s.coeff(&Word::identity()), rat(2, 1));
        let g = NCPoly::identity(1).scale(&gamma_coef(1, 0).unwrap());
        assert_eq!(specialize(&g, 3).unwrap().coeff(&Word::identity()), rat(1, 2));
        let pole = NCPoly::identity(0).scale(&DimRational::linear(1, -2).recip().unwrap());
        assert!(matches!(specialize(&pole, 2), Err(Error::Pole(2))));
    }

    #[test]
    fn cap() {
        assert!(p_polys(MAX_R + 1, 0).is_err());
    }
}
