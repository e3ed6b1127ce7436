use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::ComplexFloat;
use serde::Serialize;

use super::apply::{apply_many, apply_ncpoly, apply_word};
use super::field::{divergence, inner_d, metric_i, sphere_inner, trace_j, TangentField};
use super::grid::SphereGrid;
use crate::error::{arg, Result};
use crate::opcalc::{parse, specialize, SpecPoly};
use crate::symtensor::C64;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn norm(f: &TangentField) -> Result<f64> {
    Ok(sphere_inner(f, f)?.re.max(0.0).sqrt())
}

/// Relative defects of the adjoint pairs (d, −δ) and (i, j).
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AdjointReport {
    pub m: usize,
    pub d_delta: f64,
    pub i_j: f64,
}

/// ⟨d u, v⟩ + ⟨u, δ v⟩ and ⟨i u, w⟩ − ⟨u, j w⟩ on random smooth fields, relative to the norms involved.
pub fn adjoint_check(grid: &Arc<SphereGrid>, m: usize, seed: u64) -> Result<AdjointReport> {
    let u = TangentField::random(grid, m, 4, seed);
    let v = TangentField::random(grid, m + 1, 4, seed + 1);
    let w = TangentField::random(grid, m + 2, 4, seed + 2);
    let du = inner_d(&u);
    let lhs = sphere_inner(&du, &v)? + sphere_inner(&u, &divergence(&v)?)?;
    let d_delta = lhs.abs() / (norm(&du)? * norm(&v)?);
    let iu = metric_i(&u);
    let rhs = sphere_inner(&iu, &w)? - sphere_inner(&u, &trace_j(&w)?)?;
    let i_j = rhs.abs() / (norm(&iu)? * norm(&w)?);
    Ok(AdjointReport { m, d_delta, i_j })
}

/// A degree-l harmonic polynomial restricted to the sphere, for n ∈ {2, 3} and l ≤ 3.
pub fn harmonic(n: usize, l: usize) -> Result<fn(&[f64]) -> f64> {
    let f: fn(&[f64]) -> f64 = match (n, l) {
        (_, 0) => |_| 1.0,
        (_, 1) => |y| y[0],
        (_, 2) => |y| y[0] * y[1],
        (2, 3) => |y| y[0].powi(3) - 3.0 * y[0] * y[1] * y[1],
        (3, 3) => |y| y[0] * y[1] * y[2],
        _ => return arg(format!("no harmonic fixture for n = {n}, l = {l}")),
    };
    Ok(f)
}

/// max |δ d f + l(l+n−2) f| / max |f| for the degree-l harmonic.
pub fn eigen_check(grid: &Arc<SphereGrid>, l: usize) -> Result<f64> {
    let n = grid.n();
    let h = harmonic(n, l)?;
    let f = TangentField::scalar(grid, |y| c(h(y)));
    let lam = (l * (l + n - 2)) as f64;
    let r = divergence(&inner_d(&f))?.add(&f.scale(c(lam)))?;
    Ok(r.max_abs() / f.max_abs())
}

/// Max-norm residuals of the rank-2 identities on S², relative to max |f|.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IdentityResiduals {
    /// jd² = ⅓dδ + ½δd + ⅙d²j
    pub jd2: f64,
    /// j²d² = ⅔δ² + ⅓Δj
    pub j2d2: f64,
    /// −½jd² − ⅛ij²d² = −⅙dδ − ¼δd − (1/24)iΔj − (1/12)d²j − (1/12)iδ²
    pub d2_forms: f64,
}

fn op(text: &str, base: usize) -> Result<SpecPoly> {
    specialize(&parse(text, base)?, 3)
}

fn residual(lhs: &str, rhs: &str, f: &TangentField) -> Result<f64> {
    let a = apply_ncpoly(&op(lhs, 2)?, f)?;
    let b = apply_ncpoly(&op(rhs, 2)?, f)?;
    Ok(a.sub(&b)?.max_abs())
}

/// Both sides of the rank-2 commutator identities on the 2-sphere; Δ = δd on scalars.
pub fn identity_check_623(f: &TangentField) -> Result<IdentityResiduals> {
    if f.grid().n() != 3 || f.m() != 2 {
        return arg("the identities are checked on rank-2 fields over S² (n = 3)");
    }
    let scale = f.max_abs().max(f64::MIN_POSITIVE);
    Ok(IdentityResiduals {
        jd2: residual("j d^2", "1/3 d δ + 1/2 δ d + 1/6 d^2 j", f)? / scale,
        j2d2: residual("j^2 d^2", "2/3 δ^2 + 1/3 δ d j", f)? / scale,
        d2_forms: residual(
            "-1/2 j d^2 - 1/8 i j^2 d^2",
            "-1/6 d δ - 1/4 δ d - 1/24 i δ d j - 1/12 d^2 j - 1/12 i δ^2",
            f,
        )? / scale,
    })
}

/// `count` random fields of rank m, each scaled to unit norm.
pub fn random_fields(grid: &Arc<SphereGrid>, m: usize, count: usize, degree: usize, seed: u64) -> Result<Vec<TangentField>> {
    (0..count as u64)
        .map(|k| {
            let f = TangentField::random(grid, m, degree, seed.wrapping_mul(1_000_003).wrapping_add(k));
            let s = norm(&f)?;
            Ok(f.scale(c(1.0 / s)))
        })
        .collect()
}

/// G_ab = Re ⟨A u_a, u_b⟩.
pub fn gram_matrix(p: &SpecPoly, fields: &[TangentField]) -> Result<DMatrix<f64>> {
    Ok(gram_matrices(std::slice::from_ref(p), fields)?.remove(0))
}

/// Gram matrices of several operators over the same fields, sharing word images per field.
pub fn gram_matrices(ps: &[SpecPoly], fields: &[TangentField]) -> Result<Vec<DMatrix<f64>>> {
    let k = fields.len();
    let mut gs = vec![DMatrix::zeros(k, k); ps.len()];
    for (a, u) in fields.iter().enumerate() {
        for (g, img) in gs.iter_mut().zip(apply_many(ps, u)?) {
            for (b, v) in fields.iter().enumerate() {
                g[(a, b)] = sphere_inner(&img, v)?.re;
            }
        }
    }
    Ok(gs)
}

/// Symmetry and spectrum of a Gram matrix.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GramReport {
    pub size: usize,
    /// max |G − Gᵀ| / max |G|
    pub asymmetry: f64,
    /// Extreme eigenvalues of (G + Gᵀ)/2.
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

impl GramReport {
    pub fn of(g: &DMatrix<f64>) -> GramReport {
        let gt = g.transpose();
        let scale = g.amax().max(f64::MIN_POSITIVE);
        let asymmetry = (g - &gt).amax() / scale;
        let eig = ((g + &gt) * 0.5).symmetric_eigenvalues();
        GramReport { size: g.nrows(), asymmetry, min_eigenvalue: eig.min(), max_eigenvalue: eig.max() }
    }
}

pub fn gram_report(p: &SpecPoly, fields: &[TangentField]) -> Result<GramReport> {
    Ok(GramReport::of(&gram_matrix(p, fields)?))
}

/// Applies a word to a field; re-exported for callers building custom checks.
pub fn word_image(word: &str, f: &TangentField) -> Result<TangentField> {
    let p = parse(word, f.m())?;
    match p.terms().keys().next() {
        Some(w) => apply_word(w, f),
        None => Ok(TangentField::zeros(f.grid(), f.m())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // 32-ring grids; default-grid tolerances are exercised by the acceptance suite
    #[test]
    fn adjoint_pairs_on_small_grids() {
        let g2 = SphereGrid::circle(128, 8).unwrap();
        let g3 = SphereGrid::latlon(32, 64, 8).unwrap();
        for g in [g2, g3] {
            for m in 0..3 {
                let r = adjoint_check(&g, m, 11).unwrap();
                assert!(r.d_delta < 1e-5 && r.i_j < 1e-12, "{r:?}");
            }
        }
    }

    #[test]
    fn harmonics_are_eigenfunctions() {
        let g3 = SphereGrid::latlon(32, 64, 8).unwrap();
        for l in 0..=3 {
            assert!(eigen_check(&g3, l).unwrap() < 1e-4);
        }
        assert!(harmonic(4, 1).is_err() || harmonic(2, 4).is_err());
    }

    #[test]
    fn identities_hold_and_vanish_on_zero() {
        let g3 = SphereGrid::latlon(32, 64, 8).unwrap();
        let f = TangentField::random(&g3, 2, 3, 5);
        let r = identity_check_623(&f).unwrap();
        assert!(r.jd2 < 2e-3 && r.j2d2 < 2e-3 && r.d2_forms < 2e-3, "{r:?}");
        let z = identity_check_623(&TangentField::zeros(&g3, 2)).unwrap();
        assert_eq!((z.jd2, z.j2d2, z.d2_forms), (0.0, 0.0, 0.0));
        assert!(identity_check_623(&TangentField::random(&g3, 1, 2, 1)).is_err());
    }

    #[test]
    fn scalar_laplacian_gram_is_nonnegative() {
        let g = SphereGrid::circle(128, 8).unwrap();
        let fields = random_fields(&g, 0, 8, 4, 3).unwrap();
        let rep = gram_report(&op("-j d^2", 0).unwrap(), &fields).unwrap();
        assert!(rep.asymmetry < 1e-10 && rep.min_eigenvalue > -1e-10, "{rep:?}");
    }
}
