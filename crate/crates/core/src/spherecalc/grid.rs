use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{central_first_derivative, fornberg, gauss_legendre};

/// Default finite-difference order for angular derivatives.
pub const DEFAULT_FD_ORDER: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum GridKind {
    /// Uniform periodic angle grid on S¹.
    Circle { count: usize },
    /// Gauss–Legendre colatitudes × uniform longitudes on S².
    LatLon { n_lat: usize, n_lon: usize },
}

/// One-dimensional stencil: (node position, weight) pairs.
#[derive(Clone, Debug, PartialEq)]
struct Stencil {
    taps: Vec<(usize, f64)>,
}

/// Quadrature grid on S^(n−1), n ∈ {2, 3}, with angular finite-difference stencils.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    n: usize,
    kind: GridKind,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Per node, (n−1) unit tangent vectors with the angular scale factor folded in.
    frames: Vec<f64>,
    /// Per node, one stencil per angular coordinate.
    stencils: Vec<Vec<Stencil>>,
}

impl SphereGrid {
    /// Uniform grid of `count` points on the unit circle.
    pub fn circle(count: usize, order: usize) -> Result<Arc<SphereGrid>> {
        if !order.is_multiple_of(2) || order == 0 {
            return Err(Error::Configuration(format!("finite-difference order {order} must be even and positive")));
        }
        if count < order + 2 {
            return Err(Error::Configuration(format!("{count} points are too few for an order-{order} stencil")));
        }
        let h = 2.0 * PI / count as f64;
        let cw = central_first_derivative(order);
        let half = order / 2;
        let mut nodes = Vec::with_capacity(2 * count);
        let mut frames = Vec::with_capacity(2 * count);
        let mut stencils = Vec::with_capacity(count);
        for j in 0..count {
            let t = j as f64 * h;
            nodes.extend_from_slice(&[t.cos(), t.sin()]);
            frames.extend_from_slice(&[-t.sin(), t.cos()]);
            let taps = (0..=order)
                .filter(|&o| o != half)
                .map(|o| ((j + count + o - half) % count, cw[o] / h))
                .collect();
            stencils.push(vec![Stencil { taps }]);
        }
        Ok(Arc::new(SphereGrid {
            n: 2,
            kind: GridKind::Circle { count },
            order,
            nodes,
            weights: vec![h; count],
            frames,
            stencils,
        }))
    }

    /// Gauss–Legendre latitude × uniform longitude grid on S².
    ///
    /// Colatitude stencils continue across the poles by reflection onto the opposite meridian.
    pub fn latlon(n_lat: usize, n_lon: usize, order: usize) -> Result<Arc<SphereGrid>> {
        if !order.is_multiple_of(2) || order == 0 {
            return Err(Error::Configuration(format!("finite-difference order {order} must be even and positive")));
        }
        if !n_lon.is_multiple_of(2) {
            return Err(Error::Configuration("longitude count must be even for pole reflection".into()));
        }
        if n_lat < order + 1 || n_lon < order + 2 {
            return Err(Error::Configuration(format!(
                "{n_lat}×{n_lon} grid is too coarse for an order-{order} stencil"
            )));
        }
        let (x, w) = gauss_legendre(n_lat);
        // colatitudes ascending: θ = arccos(x) with x descending
        let theta: Vec<f64> = x.iter().rev().map(|v| v.acos()).collect();
        let wlat: Vec<f64> = w.iter().rev().copied().collect();
        let dphi = 2.0 * PI / n_lon as f64;
        let cw = central_first_derivative(order);
        let half = order / 2;
        let total = n_lat * n_lon;
        let mut nodes = Vec::with_capacity(3 * total);
        let mut frames = Vec::with_capacity(6 * total);
        let mut weights = Vec::with_capacity(total);
        let mut stencils = Vec::with_capacity(total);
        let idx = |r: usize, k: usize| r * n_lon + (k % n_lon);
        for r in 0..n_lat {
            let (st, ct) = theta[r].sin_cos();
            // colatitude stencil nodes, with reflection across the poles
            let mut pts: Vec<(f64, usize, bool)> = Vec::with_capacity(order + 1);
            for o in 0..=order {
                let e = r as i64 + o as i64 - half as i64;
                if e < 0 {
                    let rr = (-e - 1) as usize;
                    pts.push((-theta[rr], rr, true));
                } else if e >= n_lat as i64 {
                    let rr = 2 * n_lat - 1 - e as usize;
                    pts.push((2.0 * PI - theta[rr], rr, true));
                } else {
                    pts.push((theta[e as usize], e as usize, false));
                }
            }
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let tw = fornberg(theta[r], &xs, 1).swap_remove(1);
            for k in 0..n_lon {
                let (sp, cp) = (k as f64 * dphi).sin_cos();
                nodes.extend_from_slice(&[st * cp, st * sp, ct]);
                weights.push(wlat[r] * dphi);
                // e_θ, and e_φ / sin θ so that ∂_φ maps to the tangential gradient
                frames.extend_from_slice(&[ct * cp, ct * sp, -st]);
                frames.extend_from_slice(&[-sp / st, cp / st, 0.0]);
                let theta_taps = pts
                    .iter()
                    .zip(&tw)
                    .filter(|(_, wt)| **wt != 0.0)
                    .map(|(&(_, rr, flip), &wt)| (idx(rr, if flip { k + n_lon / 2 } else { k }), wt))
                    .collect();
                let phi_taps = (0..=order)
                    .filter(|&o| o != half)
                    .map(|o| (idx(r, k + n_lon + o - half), cw[o] / dphi))
                    .collect();
                stencils.push(vec![Stencil { taps: theta_taps }, Stencil { taps: phi_taps }]);
            }
        }
        Ok(Arc::new(SphereGrid {
            n: 3,
            kind: GridKind::LatLon { n_lat, n_lon },
            order,
            nodes,
            weights,
            frames,
            stencils,
        }))
    }

    /// Default grid for the given ambient dimension: 512 points (n = 2) or 96×192 (n = 3).
    pub fn default_for(n: usize) -> Result<Arc<SphereGrid>> {
        match n {
            2 => SphereGrid::circle(512, DEFAULT_FD_ORDER),
            3 => SphereGrid::latlon(96, 192, DEFAULT_FD_ORDER),
            _ => Err(Error::Argument(format!("sphere grids exist for n ∈ {{2, 3}}, got {n}"))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &GridKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.n..(i + 1) * self.n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn area(&self) -> f64 {
        if self.n == 2 {
            2.0 * PI
        } else {
            4.0 * PI
        }
    }

    /// Tangential gradient at node `i` of a scalar sampled at all nodes: `value(j)` is the sample at node j.
    pub fn gradient_at<T>(&self, i: usize, value: impl Fn(usize) -> T, out: &mut [T])
    where
        T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        let n = self.n;
        out.iter_mut().for_each(|o| *o = T::default());
        for (a, st) in self.stencils[i].iter().enumerate() {
            let mut dv = T::default();
            for &(j, w) in &st.taps {
                dv = dv + value(j) * w;
            }
            let frame = &self.frames[(i * (n - 1) + a) * n..(i * (n - 1) + a + 1) * n];
            for k in 0..n {
                out[k] = out[k] + dv * frame[k];
            }
        }
    }

    /// Same geometry, same stencil order.
    pub fn same_as(&self, other: &SphereGrid) -> bool {
        std::ptr::eq(self, other) || (self.kind == other.kind && self.order == other.order)
    }
}
