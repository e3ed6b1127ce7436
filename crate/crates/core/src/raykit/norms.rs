//! Weighted Sobolev norms on TS¹ and on solenoidal fields, the isometry between them,
//! and consistency checks tying Δ_ξ on ray data to the sphere operators P^(r,k).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use super::deltaxi::delta_xi;
use super::lines::{fourier_ray, ray_transform, Domain, LineGrid, RaySample};
use super::volume::{FourierSampler, VolumeField};
use crate::error::{arg, Error, Result};
use crate::numerics::{gauss_legendre_interval, kink_corrections};
use crate::opcalc::{a_operator, p_polys, specialize, Letter, SpecPoly};
use crate::spherecalc::{apply_ncpoly, sphere_inner, tangential_project, SphereGrid, TangentField, DEFAULT_FD_ORDER};
use crate::symtensor::{eps_power, layout, power_eval, SymTensor, C64};

fn binom(r: usize, l: usize) -> f64 {
    (0..l).fold(1.0, |acc, k| acc * (r - k) as f64 / (k + 1) as f64)
}

/// |y|^{2t}(1+|y|²)^{s−t} away from y = 0.
fn weight(y: f64, s: f64, t: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    (y * y).powf(t) * (1.0 + y * y).powf(s - t)
}

fn check_t_ts(t: f64, n: usize) -> Result<()> {
    if t <= -((n - 1) as f64) / 2.0 {
        return arg(format!("t = {t} must exceed −(n−1)/2 = {}", -((n - 1) as f64) / 2.0));
    }
    Ok(())
}

fn to_fourier(phi: &RaySample) -> RaySample {
    match phi.domain() {
        Domain::Spatial => fourier_ray(phi),
        Domain::Fourier => phi.clone(),
    }
}

/// (φ1, φ2)_{H^s_t(TS¹)} with Γ((n−1)/2)/(4π^{(n+1)/2}) ∫∫ |y|^{2t}(1+|y|²)^{s−t} φ̂1 conj(φ̂2).
pub fn pairing_hst(phi1: &RaySample, phi2: &RaySample, s: f64, t: f64) -> Result<C64> {
    check_t_ts(t, 2)?;
    let (a, b) = (to_fourier(phi1), to_fourier(phi2));
    a.check_same(&b)?;
    Ok(pairing_fourier(&a, &b, s, t))
}

/// Trapezoid rule in σ with the |σ|^{2t} kink at σ = 0 handled by endpoint corrections
/// built from the smooth factor (1+σ²)^{s−t} φ̂1 conj(φ̂2) at the three central nodes.
fn pairing_fourier(a: &RaySample, b: &RaySample, s: f64, t: f64) -> C64 {
    let g = a.grid();
    let nc = g.n_offsets();
    let mid = nc / 2;
    debug_assert!(g.offset(mid).abs() < 1e-12 * g.offset_spacing());
    let hs = g.offset_spacing();
    let w: Vec<f64> = (0..nc).map(|k| weight(g.offset(k), s, t)).collect();
    let smooth = (1.0 + hs * hs).powf(s - t);
    let (c0, c2) = kink_corrections(2.0 * t, hs);
    let rows = a.values().chunks(nc).zip(b.values().chunks(nc));
    let sum: C64 = rows
        .map(|(u, v)| {
            let bulk: C64 = u.iter().zip(v).zip(&w).map(|((x, y), wk)| x * y.conj() * wk).sum();
            let g0 = u[mid] * v[mid].conj();
            let side = (u[mid - 1] * v[mid - 1].conj() + u[mid + 1] * v[mid + 1].conj()) * smooth;
            let g2 = (side - g0 * 2.0) / (hs * hs);
            bulk * hs + g0 * c0 + g2 * c2
        })
        .sum();
    sum * (gamma(0.5) / (4.0 * PI.powf(1.5)) * g.dir_spacing())
}

/// ‖φ‖_{H^s_t(TS¹)}.
pub fn norm_hst_ts(phi: &RaySample, s: f64, t: f64) -> Result<f64> {
    Ok(pairing_hst(phi, phi, s, t)?.re.max(0.0).sqrt())
}

/// Fourier transforms of Δ_ξ^l φ for l ≤ r, reusable across (s, t).
#[derive(Clone, Debug)]
pub struct DeltaPowers {
    hats: Vec<RaySample>,
}

impl DeltaPowers {
    pub fn new(phi: &RaySample, r: usize) -> Result<DeltaPowers> {
        let mut cur = phi.clone();
        let mut hats = vec![to_fourier(&cur)];
        for _ in 0..r {
            cur = delta_xi(&cur)?;
            hats.push(to_fourier(&cur));
        }
        Ok(DeltaPowers { hats })
    }

    pub fn max_order(&self) -> usize {
        self.hats.len() - 1
    }

    /// Σ_l binom(r, l) Re (Δ^l φ, φ)_{H^s_t}.
    pub fn norm_sq(&self, r: usize, s: f64, t: f64) -> Result<f64> {
        check_t_ts(t, 2)?;
        if r > self.max_order() {
            return arg(format!("Δ_ξ powers computed up to {}, asked for {r}", self.max_order()));
        }
        Ok((0..=r).map(|l| binom(r, l) * pairing_fourier(&self.hats[l], &self.hats[0], s, t).re).sum())
    }

    /// Individual terms Re (Δ^l φ, φ)_{H^s_t}.
    pub fn terms(&self, s: f64, t: f64) -> Vec<f64> {
        self.hats.iter().map(|h| pairing_fourier(h, &self.hats[0], s, t).re).collect()
    }
}

/// ‖φ‖²_{H^(r,s)_t(TS¹)} = Σ_l binom(r, l)(Δ_ξ^l φ, φ)_{H^s_t}.
pub fn norm_hrst_ts(phi: &RaySample, r: usize, s: f64, t: f64) -> Result<f64> {
    check_t_ts(t, 2)?;
    DeltaPowers::new(phi, r)?.norm_sq(r, s, t)
}

/// Quadrature settings for the solenoidal norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolenoidalConfig {
    /// Radial cutoff for f̂.
    pub rmax: f64,
    /// Gauss–Legendre nodes in u = √ρ on [0, √rmax].
    pub radial_nodes: usize,
    /// Spacing of the fine Cartesian grid carrying the exact DFT.
    pub dual_spacing: f64,
    /// Allowed max |y^p f̂_{p…}| / (|y| max |f̂|) on the sampled spheres.
    pub tangential_tol: f64,
}

impl Default for SolenoidalConfig {
    fn default() -> Self {
        SolenoidalConfig { rmax: 10.0, radial_nodes: 64, dual_spacing: 0.05, tangential_tol: 1e-4 }
    }
}

/// f̂ sampled on spheres of radius ρ_g, ready for repeated norm evaluations.
#[derive(Clone, Debug)]
pub struct SphereShells {
    m: usize,
    n: usize,
    radii: Vec<f64>,
    /// dρ weights including the substitution ρ = u².
    weights: Vec<f64>,
    fields: Vec<TangentField>,
}

impl SphereShells {
    pub fn new(f: &VolumeField, grid: &Arc<SphereGrid>, cfg: &SolenoidalConfig) -> Result<SphereShells> {
        if grid.n() != f.n() {
            return arg("sphere grid and field dimensions differ");
        }
        let sampler = FourierSampler::new(f, cfg.rmax + 0.5, cfg.dual_spacing)?;
        let (us, uw) = gauss_legendre_interval(cfg.radial_nodes, 0.0, cfg.rmax.sqrt());
        let radii: Vec<f64> = us.iter().map(|u| u * u).collect();
        let weights: Vec<f64> = us.iter().zip(&uw).map(|(u, w)| 2.0 * u * w).collect();
        let mut fields = Vec::with_capacity(radii.len());
        let mut worst: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for &rho in &radii {
            let raw = TangentField::from_tangential_fn(grid, f.m(), |y| {
                let p: Vec<f64> = y.iter().map(|v| v * rho).collect();
                sampler.sample(&p)
            });
            worst = worst.max(raw.normal_residual());
            peak = peak.max(raw.max_abs());
            fields.push(tangential_project(grid, raw.values().to_vec()));
        }
        if peak > 0.0 && worst > cfg.tangential_tol * peak {
            return Err(Error::Validation(format!(
                "f̂ is not tangential: normal component {worst:e} against peak {peak:e}; project the field first"
            )));
        }
        Ok(SphereShells { m: f.m(), n: f.n(), radii, weights, fields })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// ∫ ρ^{2t+2l+n−1}(1+ρ²)^{s−t} ∫ ⟨A f̂, f̂⟩(ρξ) dξ dρ for one sphere operator A.
    ///
    /// The shells hold G_ρ(ξ) = f̂(ρξ) on the unit sphere. On the sphere of radius ρ every d or δ
    /// carries a factor 1/ρ and every |y|² a factor ρ², so a word w acts as ρ^{2·rad(w) − #∂(w)}
    /// times its unit-sphere version; terms are grouped by that exponent.
    pub fn weighted(&self, a: &SpecPoly, l: usize, s: f64, t: f64) -> Result<f64> {
        let n = self.n as f64;
        let mut groups: BTreeMap<i64, SpecPoly> = BTreeMap::new();
        for (w, c) in a.terms() {
            let e = 2 * w.rad as i64 - (w.count(Letter::D) + w.count(Letter::Delta)) as i64;
            groups.entry(e).or_insert_with(|| SpecPoly::zero(a.base_rank)).add_term(w.clone(), c.clone());
        }
        let mut total = 0.0;
        for (e, op) in &groups {
            for (fld, (&rho, &w)) in self.fields.iter().zip(self.radii.iter().zip(&self.weights)) {
                let v = sphere_inner(&apply_ncpoly(op, fld)?, fld)?.re;
                let p = 2.0 * t + 2.0 * l as f64 + n - 1.0 + *e as f64;
                total += w * rho.powf(p) * (1.0 + rho * rho).powf(s - t) * v;
            }
        }
        Ok(total)
    }

    /// ‖f‖²_{H^(r,s)_{t,sol}} = Σ_l of the weighted A^(m,r,l) integrals.
    pub fn norm_sq(&self, r: usize, s: f64, t: f64) -> Result<f64> {
        if t <= -(self.n as f64) / 2.0 {
            return arg(format!("t = {t} must exceed −n/2"));
        }
        (0..=r)
            .map(|l| {
                let a = specialize(&a_operator(self.m, r, l)?, self.n as i64)?;
                self.weighted(&a, l, s, t)
            })
            .sum()
    }
}

/// ‖f‖²_{H^(r,s)_{t,sol}} on the default sphere grid for f's dimension.
pub fn norm_solenoidal(f: &VolumeField, r: usize, s: f64, t: f64) -> Result<f64> {
    norm_solenoidal_with(f, r, s, t, &SphereGrid::default_for(f.n())?, &SolenoidalConfig::default())
}

pub fn norm_solenoidal_with(f: &VolumeField, r: usize, s: f64, t: f64, grid: &Arc<SphereGrid>, cfg: &SolenoidalConfig) -> Result<f64> {
    if t <= -(f.n() as f64) / 2.0 {
        return arg(format!("t = {t} must exceed −n/2"));
    }
    SphereShells::new(f, grid, cfg)?.norm_sq(r, s, t)
}

/// Grids used by the isometry check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsometryConfig {
    pub directions: usize,
    pub offsets: usize,
    /// Offset radius as a multiple of the volume extent.
    pub offset_factor: f64,
    pub sphere_points: usize,
    pub solenoidal: SolenoidalConfig,
}

impl Default for IsometryConfig {
    fn default() -> Self {
        IsometryConfig {
            directions: super::lines::DEFAULT_DIRECTIONS,
            offsets: super::lines::DEFAULT_OFFSETS,
            offset_factor: super::lines::DEFAULT_OFFSET_FACTOR,
            sphere_points: 512,
            solenoidal: SolenoidalConfig::default(),
        }
    }
}

impl IsometryConfig {
    /// Every sample count doubled.
    pub fn doubled(&self) -> IsometryConfig {
        IsometryConfig {
            directions: 2 * self.directions,
            offsets: 2 * self.offsets,
            sphere_points: 2 * self.sphere_points,
            solenoidal: SolenoidalConfig {
                radial_nodes: 2 * self.solenoidal.radial_nodes,
                dual_spacing: self.solenoidal.dual_spacing / 2.0,
                ..self.solenoidal.clone()
            },
            ..self.clone()
        }
    }

    pub fn line_grid(&self, extent: f64) -> Result<Arc<LineGrid>> {
        LineGrid::new(self.directions, self.offset_factor * extent, self.offsets)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ReshetnyakReport {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub s: f64,
    pub t: f64,
    /// ‖f‖²_{H^(r,s)_{t,sol}}
    pub lhs: f64,
    /// ‖If‖²_{H^(r,s+1/2)_{t+1/2}(TS¹)}
    pub rhs: f64,
    pub rel_err: f64,
}

fn rel(lhs: f64, rhs: f64) -> f64 {
    let d = (lhs - rhs).abs();
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        d / scale
    }
}

/// Both sides of the isometry for a solenoidal field, default grids.
pub fn reshetnyak_check(f: &VolumeField, r: usize, s: f64, t: f64) -> Result<ReshetnyakReport> {
    reshetnyak_check_with(f, r, s, t, &IsometryConfig::default())
}

pub fn reshetnyak_check_with(f: &VolumeField, r: usize, s: f64, t: f64, cfg: &IsometryConfig) -> Result<ReshetnyakReport> {
    let ctx = IsometryContext::new(f, r, cfg)?;
    ctx.report(r, s, t)
}

/// Precomputed ingredients of the isometry for one field, reusable across (r, s, t).
#[derive(Clone, Debug)]
pub struct IsometryContext {
    n: usize,
    m: usize,
    shells: SphereShells,
    powers: DeltaPowers,
    ray: RaySample,
}

impl IsometryContext {
    pub fn new(f: &VolumeField, r_max: usize, cfg: &IsometryConfig) -> Result<IsometryContext> {
        if f.n() != 2 {
            return arg(format!("the isometry check is implemented for n = 2, got {}", f.n()));
        }
        let lines = cfg.line_grid(f.extent())?;
        let ray = ray_transform(f, &lines)?;
        let sphere = SphereGrid::circle(cfg.sphere_points, DEFAULT_FD_ORDER)?;
        let shells = SphereShells::new(f, &sphere, &cfg.solenoidal)?;
        let powers = DeltaPowers::new(&ray, r_max)?;
        Ok(IsometryContext { n: f.n(), m: f.m(), shells, powers, ray })
    }

    pub fn ray(&self) -> &RaySample {
        &self.ray
    }

    pub fn report(&self, r: usize, s: f64, t: f64) -> Result<ReshetnyakReport> {
        let lhs = self.shells.norm_sq(r, s, t)?;
        let rhs = self.powers.norm_sq(r, s + 0.5, t + 0.5)?;
        Ok(ReshetnyakReport { n: self.n, m: self.m, r, s, t, lhs, rhs, rel_err: rel(lhs, rhs) })
    }
}

/// Agreement between Δ_ξ^r(If) computed on ray data and the sum Σ_k (P^(r,k) f̂) ξ^{m+2k}.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CrossPathReport {
    pub m: usize,
    pub r: usize,
    /// max |ray-side − sphere-side| / max |sphere-side| over 0 < |y| ≤ band
    pub residual: f64,
    pub band: f64,
}

/// Compares fourier_ray(Δ_ξ^r φ) with √(2π) Σ_k ⟨P^(r,k) f̂ on the circle of radius |y|, ξ^{m+2k}⟩.
/// φ must be the ray transform of f on a grid whose direction count is a multiple of 4.
pub fn cross_path_check(f: &VolumeField, phi: &RaySample, r: usize, band: f64) -> Result<CrossPathReport> {
    cross_path_check_with(f, phi, r, band, super::deltaxi::DEFAULT_FD_STEP)
}

/// As [`cross_path_check`] with an explicit finite-difference step for Δ_ξ.
pub fn cross_path_check_with(f: &VolumeField, phi: &RaySample, r: usize, band: f64, h: f64) -> Result<CrossPathReport> {
    if phi.domain() != Domain::Spatial || f.n() != 2 {
        return arg("cross_path_check expects planar fields and spatial ray samples");
    }
    cross_path_compare(f, &super::deltaxi::delta_xi_pow_with(phi, r, h)?, r, band)
}

/// Compares precomputed spatial samples of Δ_ξ^r(If) with the sphere-operator side.
pub fn cross_path_compare(f: &VolumeField, delta_r: &RaySample, r: usize, band: f64) -> Result<CrossPathReport> {
    if delta_r.domain() != Domain::Spatial || f.n() != 2 {
        return arg("cross_path_compare expects planar fields and spatial ray samples");
    }
    let m = f.m();
    let lhs = fourier_ray(delta_r);
    let dual = lhs.grid().clone();
    let (nd, nc) = (dual.n_dirs(), dual.n_offsets());
    let circle = SphereGrid::circle(nd, DEFAULT_FD_ORDER)?;
    let sampler = FourierSampler::new(f, band + 0.5, 0.05)?;
    let ops: Vec<(i64, SpecPoly)> =
        p_polys(r, m)?.into_iter().map(|(k, p)| Ok((k, specialize(&p, 2)?))).collect::<Result<Vec<_>>>()?;
    let root = (2.0 * PI).sqrt();
    let rows: Vec<(f64, f64)> = (0..nc)
        .into_par_iter()
        .map(|b| -> Result<(f64, f64)> {
            let sigma = dual.offset(b);
            if sigma == 0.0 || sigma.abs() > band {
                return Ok((0.0, 0.0));
            }
            let rho = sigma.abs();
            let fld = TangentField::from_fn(&circle, m, |eta| sampler.sample(&[rho * eta[0], rho * eta[1]]))?;
            let images = ops.iter().map(|(k, p)| Ok((*k, apply_ncpoly(p, &fld)?))).collect::<Result<Vec<_>>>()?;
            let mut num: f64 = 0.0;
            let mut den: f64 = 0.0;
            for a in 0..nd {
                // y = σ ξ^⊥ lies at angle θ_a ± π/2 on the circle
                let node = if sigma > 0.0 { (a + nd / 4) % nd } else { (a + 3 * nd / 4) % nd };
                let xi = dual.xi(a);
                let mut rhs = C64::new(0.0, 0.0);
                for (_, img) in &images {
                    rhs += power_eval(img.value(node), &xi)?;
                }
                rhs *= root;
                num = num.max((lhs.at(a, b) - rhs).norm());
                den = den.max(rhs.norm());
            }
            Ok((num, den))
        })
        .collect::<Result<Vec<_>>>()?;
    let num = rows.iter().map(|p| p.0).fold(0.0, f64::max);
    let den = rows.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(CrossPathReport { m, r, residual: if den > 0.0 { num / den } else { num }, band })
}

/// Number of circle nodes used by [`sphere_slice_integral_check`].
pub const SLICE_CIRCLE_POINTS: usize = 2048;

/// max over multi-indices of |∫_{S²∩y^⊥} ξ^I − 2Γ(k+½)π^{1/2}/Γ(k+1)·(ε^k)_I(y)| for |I| = 2k,
/// together with the odd ranks 2k ± 1, which integrate to zero.
pub fn sphere_slice_integral_check(y: &[f64], mk: usize) -> Result<f64> {
    sphere_slice_integral_check_with(y, mk, SLICE_CIRCLE_POINTS)
}

pub fn sphere_slice_integral_check_with(y: &[f64], mk: usize, points: usize) -> Result<f64> {
    if y.len() != 3 {
        return arg("the slice integral is checked for n = 3");
    }
    if mk > 3 {
        return arg(format!("mk = {mk} exceeds 3"));
    }
    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return arg("y must be nonzero");
    }
    let e: Vec<f64> = y.iter().map(|v| v / norm).collect();
    // orthonormal basis (u, v) of y^⊥
    let pick = if e[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = pick.iter().zip(&e).map(|(a, b)| a * b).sum::<f64>();
    let mut u: Vec<f64> = pick.iter().zip(&e).map(|(a, b)| a - d * b).collect();
    let un = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    u.iter_mut().for_each(|v| *v /= un);
    let v = [e[1] * u[2] - e[2] * u[1], e[2] * u[0] - e[0] * u[2], e[0] * u[1] - e[1] * u[0]];
    let nodes: Vec<[f64; 3]> = (0..points)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / points as f64;
            let (c, s) = (a.cos(), a.sin());
            [c * u[0] + s * v[0], c * u[1] + s * v[1], c * u[2] + s * v[2]]
        })
        .collect();
    let w = 2.0 * PI / points as f64;
    let integral = |rank: usize| -> SymTensor {
        SymTensor::from_fn(3, rank, |idx| {
            C64::new(nodes.iter().map(|x| idx.iter().map(|&i| x[i as usize]).product::<f64>()).sum::<f64>() * w, 0.0)
        })
    };
    let coef = 2.0 * gamma(mk as f64 + 0.5) * PI.sqrt() / gamma(mk as f64 + 1.0);
    let closed = eps_power(y, mk)?.scale(C64::new(coef, 0.0));
    let mut worst = integral(2 * mk).sub(&closed)?.max_abs();
    for rank in [2 * mk + 1, (2 * mk).saturating_sub(1)] {
        if rank % 2 == 1 {
            worst = worst.max(integral(rank).max_abs());
        }
    }
    debug_assert_eq!(layout(3, 2 * mk).len(), closed.comps().len());
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raykit::gauss::{AnalyticField, GaussPoly};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn slice_integrals() {
        for mk in 0..=3 {
            for y in [[0.0, 0.0, 1.0], [0.3, -1.2, 0.5]] {
                assert!(sphere_slice_integral_check(&y, mk).unwrap() < 1e-12);
            }
        }
        assert!(sphere_slice_integral_check(&[1.0, 0.0], 1).is_err());
        assert!(sphere_slice_integral_check(&[0.0, 0.0, 1.0], 4).is_err());
    }

    #[test]
    fn t_range_and_scaling() {
        let g = LineGrid::new(32, 8.0, 128).unwrap();
        let phi = RaySample::from_fn(&g, 0, |x, _| c((-(x[0] * x[0] + x[1] * x[1])).exp()));
        assert!(matches!(norm_hst_ts(&phi, 0.0, -0.5), Err(Error::Argument(_))));
        let a = norm_hst_ts(&phi, 0.3, 0.25).unwrap();
        let b = norm_hst_ts(&phi.scale(C64::new(0.0, -3.0)), 0.3, 0.25).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12 * b);
        assert_eq!(norm_hst_ts(&RaySample::zeros(&g, 0), 0.0, 0.0).unwrap(), 0.0);
        let r0 = norm_hrst_ts(&phi, 0, 0.3, 0.25).unwrap();
        assert!((r0 - a * a).abs() < 1e-12 * r0);
        let r1 = norm_hrst_ts(&phi, 1, 0.3, 0.25).unwrap();
        assert!(r1 >= r0 - 1e-12);
    }

    #[test]
    fn gaussian_anchor_on_small_grids() {
        let f = VolumeField::from_analytic(&AnalyticField::scalar(GaussPoly::gaussian(2)), 8.0, 64).unwrap();
        let cfg = IsometryConfig { directions: 64, offsets: 256, sphere_points: 64, ..IsometryConfig::default() };
        let rep = reshetnyak_check_with(&f, 0, 0.0, 0.0, &cfg).unwrap();
        assert!((rep.lhs - PI).abs() < 1e-6 * PI, "{rep:?}");
        assert!((rep.rhs - PI).abs() < 1e-2 * PI, "{rep:?}");
        let z = VolumeField::zeros(2, 1, 8.0, 32).unwrap();
        let rz = reshetnyak_check_with(&z, 1, 0.0, 0.0, &cfg).unwrap();
        assert_eq!((rz.lhs, rz.rhs, rz.rel_err), (0.0, 0.0, 0.0));
    }

    #[test]
    fn non_tangential_input_is_rejected() {
        let grad = VolumeField::from_analytic(&AnalyticField::potential(&GaussPoly::gaussian(2), 1), 8.0, 64).unwrap();
        let sphere = SphereGrid::circle(64, 8).unwrap();
        let err = SphereShells::new(&grad, &sphere, &SolenoidalConfig { radial_nodes: 8, ..SolenoidalConfig::default() });
        assert!(matches!(err, Err(Error::Validation(_))));
    }
}
