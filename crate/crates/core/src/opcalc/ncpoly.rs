//! Noncommutative polynomials in the letters i, j, d, δ with a commuting |y|² marker.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ratfun::DimRational;
use crate::error::{Error, Result};

/// Operator letter. The declaration order is the canonical letter code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// Symmetric multiplication by the metric, rank +2.
    I,
    /// Contraction with the metric, rank −2.
    J,
    /// Inner derivative, rank +1.
    D,
    /// Divergence, rank −1.
    Delta,
}

impl Letter {
    pub fn rank_change(self) -> i64 {
        match self {
            Letter::I => 2,
            Letter::J => -2,
            Letter::D => 1,
            Letter::Delta => -1,
        }
    }

    pub fn is_derivative(self) -> bool {
        matches!(self, Letter::D | Letter::Delta)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Letter::I => "i",
            Letter::J => "j",
            Letter::D => "d",
            Letter::Delta => "δ",
        }
    }
}

/// Monomial: letters written left to right and applied right to left, plus a |y|² count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
    pub rad: u32,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn new(letters: Vec<Letter>, rad: u32) -> Word {
        Word { letters, rad }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty() && self.rad == 0
    }

    /// Output rank when applied to rank `base`, or None if some intermediate rank is negative.
    pub fn output_rank(&self, base: usize) -> Option<usize> {
        let mut r = base as i64;
        for l in self.letters.iter().rev() {
            r += l.rank_change();
            if r < 0 {
                return None;
            }
        }
        Some(r as usize)
    }

    pub fn derivative_order(&self) -> usize {
        self.letters.iter().filter(|l| l.is_derivative()).count()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    /// self ∘ other: other is applied first.
    pub fn then_after(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters, rad: self.rad + other.rad }
    }

    /// Formal adjoint and its sign.
    pub fn adjoint(&self) -> (Word, bool) {
        let mut negate = false;
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match l {
                Letter::I => Letter::J,
                Letter::J => Letter::I,
                Letter::D => {
                    negate = !negate;
                    Letter::Delta
                }
                Letter::Delta => {
                    negate = !negate;
                    Letter::D
                }
            })
            .collect();
        (Word { letters, rad: self.rad }, negate)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rad > 0 {
            parts.push(format!("|y|^{}", 2 * self.rad));
        }
        let mut k = 0;
        while k < self.letters.len() {
            let l = self.letters[k];
            let mut run = 1;
            while k + run < self.letters.len() && self.letters[k + run] == l {
                run += 1;
            }
            parts.push(if run == 1 { l.symbol().to_string() } else { format!("{}^{run}", l.symbol()) });
            k += run;
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Coefficient field for [`NcPoly`].
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_negative(&self) -> bool;
    /// Text of |self| as a factor: single atom or parenthesized.
    fn magnitude_text(&self) -> String;
}

impl Coeff for DimRational {
    fn zero() -> Self {
        DimRational::zero()
    }
    fn one() -> Self {
        DimRational::one()
    }
    fn is_zero(&self) -> bool {
        DimRational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_negative(&self) -> bool {
        DimRational::is_negative(self)
    }
    fn magnitude_text(&self) -> String {
        let s = self.abs().to_string();
        if s.contains(['/', '+', '-', '*', '^']) {
            format!("({s})")
        } else {
            s
        }
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn magnitude_text(&self) -> String {
        let a = self.abs();
        if a.is_integer() {
            a.to_integer().to_string()
        } else {
            format!("({}/{})", a.numer(), a.denom())
        }
    }
}

/// Polynomial Σ c_w · w acting on tensor fields of rank `base_rank`.
#[derive(Clone, Debug, PartialEq)]
pub struct NcPoly<C: Coeff> {
    pub base_rank: usize,
    terms: BTreeMap<Word, C>,
}

/// Operator polynomial over ℚ(n).
pub type NCPoly = NcPoly<DimRational>;
/// Operator polynomial specialized at an integer dimension.
pub type SpecPoly = NcPoly<BigRational>;

impl<C: Coeff> NcPoly<C> {
    pub fn zero(base_rank: usize) -> Self {
        NcPoly { base_rank, terms: BTreeMap::new() }
    }

    pub fn identity(base_rank: usize) -> Self {
        Self::monomial(base_rank, Word::identity(), C::one())
    }

    /// Single term; inadmissible words yield the zero polynomial.
    pub fn monomial(base_rank: usize, word: Word, c: C) -> Self {
        let mut p = Self::zero(base_rank);
        if word.output_rank(base_rank).is_some() && !c.is_zero() {
            p.terms.insert(word, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Word, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    /// Common output rank; None for the zero polynomial.
    pub fn output_rank(&self) -> Option<usize> {
        self.terms.keys().next().and_then(|w| w.output_rank(self.base_rank))
    }

    /// Adds c·w, dropping inadmissible words and cancelled terms.
    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() || w.output_rank(self.base_rank).is_none() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.base_rank != o.base_rank {
            return Err(Error::Structural(format!(
                "adding polynomials with base ranks {} and {}",
                self.base_rank, o.base_rank
            )));
        }
        if let (Some(a), Some(b)) = (self.output_rank(), o.output_rank()) {
            if a != b {
                return Err(Error::Structural(format!("adding polynomials with output ranks {a} and {b}")));
            }
        }
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.base_rank);
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a.mul(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::one().neg())
    }

    /// Composition self ∘ inner (inner applied first).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if let Some(r) = inner.output_rank() {
            if !self.is_zero() && r != self.base_rank {
                return Err(Error::Structural(format!(
                    "composing operator on rank {} after operator producing rank {r}",
                    self.base_rank
                )));
            }
        }
        let mut out = Self::zero(inner.base_rank);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &inner.terms {
                out.add_term(w1.then_after(w2), c1.mul(c2));
            }
        }
        Ok(out)
    }

    /// Left multiplication by a fixed word.
    pub fn left_word(&self, w: &Word, c: &C) -> Self {
        let mut out = Self::zero(self.base_rank);
        for (w2, c2) in &self.terms {
            out.add_term(w.then_after(w2), c.mul(c2));
        }
        out
    }

    /// Formal adjoint: reversed words, I↔J, D↦−δ, δ↦−D.
    pub fn adjoint(&self) -> Self {
        let base = self.output_rank().unwrap_or(self.base_rank);
        let mut out = Self::zero(base);
        for (w, c) in &self.terms {
            let (aw, negate) = w.adjoint();
            out.add_term(aw, if negate { c.neg() } else { c.clone() });
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> Result<D>) -> Result<NcPoly<D>> {
        let mut out = NcPoly::<D>::zero(self.base_rank);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Canonical text, e.g. `-(1/(n-1)) * j d^2`; the zero polynomial prints as `0`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.magnitude_text();
            if mag == "1" {
                out.push_str(&w.to_string());
            } else {
                out.push_str(&format!("{mag} * {w}"));
            }
        }
        out
    }

    /// Terms of self − other with nonzero difference.
    pub fn diff_terms(&self, other: &Self) -> Vec<(Word, C, C)> {
        let mut words: Vec<&Word> = self.terms.keys().chain(other.terms.keys()).collect();
        words.sort();
        words.dedup();
        words
            .into_iter()
            .filter_map(|w| {
                let a = self.coeff(w);
                let b = other.coeff(w);
                if a.add(&b.neg()).is_zero() {
                    None
                } else {
                    Some((w.clone(), a, b))
                }
            })
            .collect()
    }
}

impl<C: Coeff> fmt::Display for NcPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl SpecPoly {
    /// Coefficients as floating point, for numeric application.
    pub fn float_terms(&self) -> Vec<(Word, f64)> {
        self.terms.iter().map(|(w, c)| (w.clone(), c.to_f64().unwrap_or(f64::NAN))).collect()
    }
}
