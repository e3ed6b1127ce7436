//! Exact operator calculus over ℚ(n): the recurrence for P^(r,k), the assembly of
//! A^(m,r,l), the text format, and comparison against closed forms.

pub mod fixtures;
pub mod ncpoly;
pub mod pipeline;
pub mod ratfun;
pub mod text;

use serde::Serialize;

pub use fixtures::{corrected_r1_compare, reference_compare, ReferenceReport};
pub use ncpoly::{Coeff, Letter, NCPoly, NcPoly, SpecPoly, Word};
pub use pipeline::{
    a_coef, a_operator, a_tilde, a_tilde_with, adjoint, b_operator, b_operator_with, c_operator, check_order, gamma_coef,
    is_self_adjoint, p_polys, radial_split, rank_flow_check, specialize, KRange, RankFlowReport, MAX_R,
};
pub use ratfun::{DimRational, QPoly};
pub use text::parse;

use crate::error::Result;


/// One term of a derivation report, coefficients as integer polynomials in n (lowest degree first).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TermRecord {
    pub word: String,
    pub coeff_num: Vec<String>,
    pub coeff_den: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DerivationChecks {
    pub self_adjoint: bool,
    pub order: bool,
    pub rank_flow: bool,
}

/// Machine-readable record of A^(m,r,l).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DerivationReport {
    pub m: usize,
    pub r: usize,
    pub l: usize,
    pub text: String,
    pub terms: Vec<TermRecord>,
    pub checks: DerivationChecks,
}

/// Derives A^(m,r,l) and records its terms and structural checks.
pub fn derivation_report(m: usize, r: usize, l: usize) -> Result<DerivationReport> {
    let a = a_operator(m, r, l)?;
    let rank_flow = rank_flow_check(&a).is_ok();
    let order = check_order(&a, l).is_ok();
    let terms = a
        .terms()
        .iter()
        .map(|(w, c)| {
            let (num, den) = c.integer_parts();
            TermRecord {
                word: w.to_string(),
                coeff_num: num.iter().map(|v| v.to_string()).collect(),
                coeff_den: den.iter().map(|v| v.to_string()).collect(),
            }
        })
        .collect();
    Ok(DerivationReport {
        m,
        r,
        l,
        text: a.to_text(),
        terms,
        checks: DerivationChecks { self_adjoint: is_self_adjoint(&a), order, rank_flow },
    })
}
