//! The vector fields Ξ_i and the operator Δ_ξ = −Σ Ξ_i² on TS^(n−1), evaluated through
//! homogeneous extensions ψ(x, ξ) = |ξ|^m φ(x − ⟨x,ξ⟩ξ/|ξ|², ξ/|ξ|) and ambient finite differences:
//!
//! Δ_ξ φ = [−Σ ∂²ψ/∂ξ_i² − ⟨x, ∂_x⟩ψ + m(m+n−2)ψ] restricted to TS^(n−1).

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::FftPlanner;

use super::interp::node_weights;
use super::lines::RaySample;
use crate::error::{arg, Error, Result};
use crate::symtensor::C64;

/// Ambient finite-difference step in ξ and in the dilation of x.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Points per axis of the local (θ, s) interpolant.
const STENCIL: usize = 9;
const HALF: usize = STENCIL / 2;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// ψ for degree m built from a function on TS^(n−1).
fn extension(phi: &dyn Fn(&[f64], &[f64]) -> C64, m: usize, x: &[f64], xi: &[f64]) -> C64 {
    let r2 = dot(xi, xi);
    let r = r2.sqrt();
    let c = dot(x, xi) / r2;
    let xp: Vec<f64> = x.iter().zip(xi).map(|(a, b)| a - c * b).collect();
    let u: Vec<f64> = xi.iter().map(|v| v / r).collect();
    phi(&xp, &u) * r.powi(m as i32)
}

/// Σ_i ∂²ψ/∂ξ_i² and ⟨x, ∂_x⟩ψ by central differences, Richardson-extrapolated over (h, h/2).
fn eq320(psi: &dyn Fn(&[f64], &[f64]) -> C64, m: usize, x: &[f64], xi: &[f64], h: f64) -> C64 {
    let n = xi.len();
    let center = psi(x, xi);
    let lap = |h: f64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        let mut e = xi.to_vec();
        for i in 0..n {
            e[i] = xi[i] + h;
            let p = psi(x, &e);
            e[i] = xi[i] - h;
            let q = psi(x, &e);
            e[i] = xi[i];
            acc += p + q - center * 2.0;
        }
        acc / (h * h)
    };
    let euler = |h: f64| -> C64 {
        let xp: Vec<f64> = x.iter().map(|v| v * (1.0 + h)).collect();
        let xm: Vec<f64> = x.iter().map(|v| v * (1.0 - h)).collect();
        (psi(&xp, xi) - psi(&xm, xi)) / (2.0 * h)
    };
    let rich = |f: &dyn Fn(f64) -> C64| (f(h / 2.0) * 4.0 - f(h)) / 3.0;
    let mm = (m * (m + n - 2)) as f64;
    -rich(&lap) - rich(&euler) + center * mm
}

/// Δ_ξ φ at one point (x, ξ) of TS^(n−1), for φ given in closed form and any n.
pub fn delta_xi_at(phi: &dyn Fn(&[f64], &[f64]) -> C64, m: usize, x: &[f64], xi: &[f64], h: f64) -> Result<C64> {
    if x.len() != xi.len() || xi.len() < 2 {
        return arg("x and ξ must have the same dimension n ≥ 2");
    }
    let psi = |x: &[f64], e: &[f64]| extension(phi, m, x, e);
    Ok(eq320(&psi, m, x, xi, h))
}

/// Ξ_i φ = ∂ψ₀/∂ξ_i − x_i ξ^p ∂ψ₀/∂x^p − ξ_i ξ^p ∂ψ₀/∂ξ^p for the degree-0 extension ψ₀.
fn xi_field(psi0: &dyn Fn(&[f64], &[f64]) -> C64, i: usize, x: &[f64], xi: &[f64], h: f64) -> C64 {
    let d = |f: &dyn Fn(f64) -> C64| {
        let one = |h: f64| (f(h) - f(-h)) / (2.0 * h);
        (one(h / 2.0) * 4.0 - one(h)) / 3.0
    };
    let shift_xi = |v: Vec<f64>| {
        move |t: f64| {
            let e: Vec<f64> = xi.iter().zip(&v).map(|(a, b)| a + t * b).collect();
            psi0(x, &e)
        }
    };
    let mut ei = vec![0.0; xi.len()];
    ei[i] = 1.0;
    let d_xi = d(&shift_xi(ei));
    let euler_xi = d(&shift_xi(xi.to_vec()));
    let along = d(&|t: f64| {
        let y: Vec<f64> = x.iter().zip(xi).map(|(a, b)| a + t * b).collect();
        psi0(&y, xi)
    });
    d_xi - along * x[i] - euler_xi * xi[i]
}

/// Ξ_i φ at one point, for φ given in closed form.
pub fn xi_at(phi: &dyn Fn(&[f64], &[f64]) -> C64, i: usize, x: &[f64], xi: &[f64], h: f64) -> Result<C64> {
    if x.len() != xi.len() || i >= xi.len() {
        return arg("index or dimension mismatch");
    }
    let psi0 = |x: &[f64], e: &[f64]| extension(phi, 0, x, e);
    Ok(xi_field(&psi0, i, x, xi, h))
}

/// Local degree-8 interpolant of sampled data around node (a, b), in (θ, s).
struct Local {
    theta: f64,
    s: f64,
    dtheta: f64,
    ds: f64,
    block: [[C64; STENCIL]; STENCIL],
}

impl Local {
    /// None when every sample in the block is at most `floor` in magnitude.
    fn new(phi: &RaySample, a: usize, b: usize, floor: f64) -> Result<Option<Local>> {
        let g = phi.grid();
        let (nd, nc) = (g.n_dirs(), g.n_offsets());
        if b < HALF || b + HALF >= nc {
            let lo = b.saturating_sub(HALF);
            let hi = (b + HALF).min(nc - 1);
            let live = (0..STENCIL).any(|i| (lo..=hi).any(|j| phi.at((a + nd + i - HALF) % nd, j).norm() > floor));
            if live {
                return Err(Error::Configuration(format!("Δ_ξ stencil leaves the offset grid at a nonzero sample (offset {b})")));
            }
            return Ok(None);
        }
        let mut block = [[C64::new(0.0, 0.0); STENCIL]; STENCIL];
        let mut live = false;
        for (i, row) in block.iter_mut().enumerate() {
            let aa = (a + nd + i - HALF) % nd;
            for (j, v) in row.iter_mut().enumerate() {
                *v = phi.at(aa, b + j - HALF);
                live |= v.norm() > floor;
            }
        }
        if !live {
            return Ok(None);
        }
        Ok(Some(Local { theta: a as f64 * g.dir_spacing(), s: g.offset(b), dtheta: g.dir_spacing(), ds: g.offset_spacing(), block }))
    }

    /// ψ(x, ξ) for ambient ξ near the node.
    fn psi(&self, m: usize, x: &[f64], xi: &[f64]) -> C64 {
        let r = xi[0].hypot(xi[1]);
        let mut dth = xi[1].atan2(xi[0]) - self.theta;
        dth -= 2.0 * PI * (dth / (2.0 * PI)).round();
        let sp = (-xi[1] * x[0] + xi[0] * x[1]) / r;
        let wt = node_weights(HALF as f64 + dth / self.dtheta, STENCIL);
        let ws = node_weights(HALF as f64 + (sp - self.s) / self.ds, STENCIL);
        let mut acc = C64::new(0.0, 0.0);
        for (i, row) in self.block.iter().enumerate() {
            let inner: C64 = row.iter().zip(&ws[..STENCIL]).map(|(v, w)| v * w).sum();
            acc += inner * wt[i];
        }
        acc * r.powi(m as i32)
    }
}

fn map_nodes(phi: &RaySample, f: impl Fn(&Local, [f64; 2], [f64; 2]) -> C64 + Sync) -> Result<RaySample> {
    let g = phi.grid();
    let nc = g.n_offsets();
    // samples this far below the peak are treated as exact zeros
    let floor = 1e-14 * phi.max_abs();
    let values = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let (a, b) = (k / nc, k % nc);
            Ok(match Local::new(phi, a, b, floor)? {
                Some(loc) => {
                    let (x, xi) = g.line(a, b);
                    f(&loc, x, xi)
                }
                None => C64::new(0.0, 0.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(phi.with_values(values))
}

/// Δ_ξ φ on a sampled function, using its homogeneity degree for the extension.
pub fn delta_xi(phi: &RaySample) -> Result<RaySample> {
    delta_xi_with(phi, DEFAULT_FD_STEP)
}

pub fn delta_xi_with(phi: &RaySample, h: f64) -> Result<RaySample> {
    let m = phi.degree();
    map_nodes(phi, |loc, x, xi| {
        let psi = |x: &[f64], e: &[f64]| loc.psi(m, x, e);
        eq320(&psi, m, &x, &xi, h)
    })
}

/// Δ_ξ^r φ by iteration.
pub fn delta_xi_pow(phi: &RaySample, r: usize) -> Result<RaySample> {
    delta_xi_pow_with(phi, r, DEFAULT_FD_STEP)
}

pub fn delta_xi_pow_with(phi: &RaySample, r: usize, h: f64) -> Result<RaySample> {
    (0..r).try_fold(phi.clone(), |acc, _| delta_xi_with(&acc, h))
}

/// Ξ_i φ on a sampled function (i ∈ {0, 1}).
pub fn xi_apply(phi: &RaySample, i: usize) -> Result<RaySample> {
    if i > 1 {
        return arg(format!("Ξ index {i} out of range for n = 2"));
    }
    map_nodes(phi, |loc, x, xi| {
        let psi0 = |x: &[f64], e: &[f64]| loc.psi(0, x, e);
        xi_field(&psi0, i, &x, &xi, DEFAULT_FD_STEP)
    })
}

/// −∂²Φ/∂θ² at fixed offset, by spectral differentiation in θ; equals Δ_ξ φ in the plane.
pub fn delta_xi_spectral(phi: &RaySample) -> RaySample {
    let g = phi.grid();
    let (nd, nc) = (g.n_dirs(), g.n_offsets());
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(nd);
    let inv = planner.plan_fft_inverse(nd);
    let mut values = vec![C64::new(0.0, 0.0); nd * nc];
    let mut col = vec![C64::new(0.0, 0.0); nd];
    for b in 0..nc {
        for (a, z) in col.iter_mut().enumerate() {
            *z = phi.at(a, b);
        }
        fwd.process(&mut col);
        for (k, z) in col.iter_mut().enumerate() {
            let kk = if k <= nd / 2 { k as f64 } else { k as f64 - nd as f64 };
            *z *= kk * kk / nd as f64;
        }
        inv.process(&mut col);
        for (a, z) in col.iter().enumerate() {
            values[a * nc + b] = *z;
        }
    }
    phi.with_values(values)
}

/// Residual of (Ξ_i φ1, φ2) + (φ1, Ξ_i φ2) = (n−1)(φ1, ξ_i φ2), maximized over i and
/// divided by ‖φ1‖‖φ2‖ (zero when either factor vanishes).
pub fn xi_adjoint_check(phi1: &RaySample, phi2: &RaySample) -> Result<f64> {
    phi1.check_same(phi2)?;
    let n1 = phi1.inner(phi1)?.re.sqrt();
    let n2 = phi2.inner(phi2)?.re.sqrt();
    if n1 == 0.0 || n2 == 0.0 {
        return Ok(0.0);
    }
    let g = phi1.grid();
    let nc = g.n_offsets();
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        let x1 = xi_apply(phi1, i)?;
        let x2 = xi_apply(phi2, i)?;
        let weighted = phi2.with_values(phi2.values().iter().enumerate().map(|(k, v)| v * g.xi(k / nc)[i]).collect());
        let lhs = x1.inner(phi2)? + phi1.inner(&x2)? - phi1.inner(&weighted)?;
        worst = worst.max(lhs.norm() / (n1 * n2));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raykit::lines::LineGrid;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn closed_form_cases() {
        let one = |_: &[f64], _: &[f64]| c(1.0);
        let first = |_: &[f64], xi: &[f64]| c(xi[0]);
        for n in [2usize, 3] {
            let mut xi = vec![0.0; n];
            xi[0] = 0.6;
            xi[1] = 0.8;
            let mut x = vec![0.0; n];
            x[0] = -0.8 * 1.3;
            x[1] = 0.6 * 1.3;
            assert!(delta_xi_at(&one, 0, &x, &xi, 1e-3).unwrap().norm() < 1e-9);
            let v = delta_xi_at(&first, 1, &x, &xi, 1e-3).unwrap();
            assert!((v - c((n - 1) as f64 * 0.6)).norm() < 1e-8, "n={n}: {v}");
        }
    }

    #[test]
    fn sampled_matches_spectral_oracle() {
        let g = LineGrid::new(128, 8.0, 128).unwrap();
        let phi = RaySample::from_fn(&g, 2, |x, xi| {
            let u = x[0] - 0.5;
            c((-(u * u + x[1] * x[1])).exp() * (xi[0] * xi[0] + 0.3 * xi[0] * xi[1]))
        });
        let fd = delta_xi(&phi).unwrap();
        let sp = delta_xi_spectral(&phi);
        let diff = fd.sub(&sp).unwrap().max_abs() / sp.max_abs();
        assert!(diff < 1e-6, "{diff}");
    }

    #[test]
    fn constant_and_boundary() {
        let g = LineGrid::new(64, 8.0, 128).unwrap();
        let gauss = RaySample::from_fn(&g, 0, |x, _| c((-(x[0] * x[0] + x[1] * x[1])).exp()));
        assert!(delta_xi(&gauss).unwrap().max_abs() < 1e-8);
        let wide = RaySample::from_fn(&g, 0, |_, _| c(1.0));
        assert!(matches!(delta_xi(&wide), Err(Error::Configuration(_))));
    }

    #[test]
    fn adjoint_identity_and_positivity() {
        let g = LineGrid::new(128, 12.0, 192).unwrap();
        let p1 = RaySample::from_fn(&g, 1, |x, xi| c((-(x[0] - 0.3).powi(2) - x[1] * x[1]).exp() * xi[0]));
        let p2 = RaySample::from_fn(&g, 1, |x, xi| C64::new(xi[1], 0.5 * xi[0]) * (-0.5 * (x[0] * x[0] + (x[1] + 0.2).powi(2))).exp());
        assert!(xi_adjoint_check(&p1, &p2).unwrap() < 1e-4);
        assert_eq!(xi_adjoint_check(&p1, &RaySample::zeros(&g, 1)).unwrap(), 0.0);
        let q = delta_xi(&p1).unwrap().inner(&p1).unwrap();
        assert!(q.re > -1e-8 && q.im.abs() < 1e-8);
    }
}
