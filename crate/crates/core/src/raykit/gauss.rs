//! Fields of the form p(x)·exp(−|x|²/2) with polynomial p, closed under derivatives,
//! coordinate multiplication, and the Fourier transform.

use std::collections::BTreeMap;

use crate::error::{arg, Result};
use crate::symtensor::{layout, SymTensor, C64};

/// Σ c_α x^α · exp(−|x|²/2).
#[derive(Clone, Debug, PartialEq)]
pub struct GaussPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, C64>,
}

impl GaussPoly {
    pub fn zero(n: usize) -> GaussPoly {
        GaussPoly { n, terms: BTreeMap::new() }
    }

    /// c · x^α · exp(−|x|²/2).
    pub fn monomial(alpha: &[u32], c: C64) -> GaussPoly {
        let mut g = GaussPoly::zero(alpha.len());
        g.add_term(alpha.to_vec(), c);
        g
    }

    /// The bare Gaussian exp(−|x|²/2).
    pub fn gaussian(n: usize) -> GaussPoly {
        GaussPoly::monomial(&vec![0; n], C64::new(1.0, 0.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C64> {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, alpha: Vec<u32>, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let e = self.terms.entry(alpha).or_insert(C64::new(0.0, 0.0));
        *e += c;
        if e.norm() == 0.0 {
            let key: Vec<Vec<u32>> = self.terms.iter().filter(|(_, v)| v.norm() == 0.0).map(|(k, _)| k.clone()).collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &GaussPoly) -> GaussPoly {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: C64) -> GaussPoly {
        let mut out = GaussPoly::zero(self.n);
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v * c);
        }
        out
    }

    /// Multiplication by x_k.
    pub fn mul_coord(&self, k: usize) -> GaussPoly {
        let mut out = GaussPoly::zero(self.n);
        for (a, c) in &self.terms {
            let mut b = a.clone();
            b[k] += 1;
            out.add_term(b, *c);
        }
        out
    }

    /// ∂_k (p e^{−|x|²/2}) = (∂_k p − x_k p) e^{−|x|²/2}.
    pub fn deriv(&self, k: usize) -> GaussPoly {
        let mut out = self.mul_coord(k).scale(C64::new(-1.0, 0.0));
        for (a, c) in &self.terms {
            if a[k] > 0 {
                let mut b = a.clone();
                b[k] -= 1;
                out.add_term(b, c * a[k] as f64);
            }
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let p: C64 = self
            .terms
            .iter()
            .map(|(a, c)| c * a.iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product::<f64>())
            .sum();
        p * (-0.5 * r2).exp()
    }

    /// Transform under (2π)^(−n/2) ∫ e^{−i⟨y,x⟩} f(x) dx, using x_k ↦ i∂_{y_k} and the self-dual Gaussian.
    pub fn fourier(&self) -> GaussPoly {
        let mut out = GaussPoly::zero(self.n);
        let i = C64::new(0.0, 1.0);
        for (a, c) in &self.terms {
            let mut g = GaussPoly::gaussian(self.n).scale(*c);
            for (k, &e) in a.iter().enumerate() {
                for _ in 0..e {
                    g = g.deriv(k).scale(i);
                }
            }
            out = out.add(&g);
        }
        out
    }
}

/// Symmetric tensor field whose components are Gaussian polynomials, in layout order.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticField {
    n: usize,
    m: usize,
    comps: Vec<GaussPoly>,
}

impl AnalyticField {
    pub fn new(n: usize, m: usize, comps: Vec<GaussPoly>) -> Result<AnalyticField> {
        if comps.len() != layout(n, m).len() || comps.iter().any(|c| c.n() != n) {
            return arg("component list does not match the tensor layout");
        }
        Ok(AnalyticField { n, m, comps })
    }

    pub fn scalar(g: GaussPoly) -> AnalyticField {
        AnalyticField { n: g.n(), m: 0, comps: vec![g] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn comps(&self) -> &[GaussPoly] {
        &self.comps
    }

    pub fn eval(&self, x: &[f64]) -> SymTensor {
        SymTensor::from_comps(self.n, self.m, self.comps.iter().map(|g| g.eval(x)).collect()).expect("layout length")
    }

    pub fn fourier(&self) -> AnalyticField {
        AnalyticField { n: self.n, m: self.m, comps: self.comps.iter().map(GaussPoly::fourier).collect() }
    }

    /// Curl-type solenoidal field (J∇)^{⊗m} w in the plane, with (J∇)_1 = −∂_2 and (J∇)_2 = ∂_1.
    pub fn curl(w: &GaussPoly, m: usize) -> Result<AnalyticField> {
        if w.n() != 2 {
            return arg("curl-type fields are defined for n = 2");
        }
        let lay = layout(2, m);
        let comps = (0..lay.len())
            .map(|p| {
                lay.index(p).iter().fold(w.clone(), |g, &i| if i == 0 { g.deriv(1).scale(C64::new(-1.0, 0.0)) } else { g.deriv(0) })
            })
            .collect();
        Ok(AnalyticField { n: 2, m, comps })
    }

    /// Member of the Gaussian-envelope test family in the plane: the scalar
    /// w = (1 + ½x₁ + 0.3x₁x₂)e^{−|x|²/2} for m = 0, its curl-type field for m ≥ 1.
    /// Every member is solenoidal and decays like a Gaussian.
    pub fn envelope(m: usize) -> Result<AnalyticField> {
        let c = |x: f64| C64::new(x, 0.0);
        let w = GaussPoly::gaussian(2).add(&GaussPoly::monomial(&[1, 0], c(0.5))).add(&GaussPoly::monomial(&[1, 1], c(0.3)));
        if m == 0 {
            Ok(AnalyticField::scalar(w))
        } else {
            AnalyticField::curl(&w, m)
        }
    }

    /// Potential field ∇^{⊗m} v, the symmetrized m-th gradient.
    pub fn potential(v: &GaussPoly, m: usize) -> AnalyticField {
        let n = v.n();
        let lay = layout(n, m);
        let comps = (0..lay.len()).map(|p| lay.index(p).iter().fold(v.clone(), |g, &i| g.deriv(i as usize))).collect();
        AnalyticField { n, m, comps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    /// Direct 2-D quadrature of the transform, as an independent oracle.
    fn brute_fourier(g: &GaussPoly, y: &[f64]) -> C64 {
        let (l, k) = (9.0, 180);
        let h = 2.0 * l / k as f64;
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..k {
            for b in 0..k {
                let x = [-l + a as f64 * h, -l + b as f64 * h];
                let ph = -(x[0] * y[0] + x[1] * y[1]);
                acc += g.eval(&x) * C64::new(ph.cos(), ph.sin());
            }
        }
        acc * h * h / (2.0 * PI)
    }

    #[test]
    fn gaussian_is_self_dual() {
        let g = GaussPoly::gaussian(2);
        assert_eq!(g.fourier(), g);
    }

    #[test]
    fn fourier_matches_quadrature() {
        let g = GaussPoly::monomial(&[2, 1], c(1.0)).add(&GaussPoly::monomial(&[0, 1], c(-0.5)));
        let gh = g.fourier();
        for y in [[0.3, -0.7], [1.1, 0.4]] {
            assert!((gh.eval(&y) - brute_fourier(&g, &y)).norm() < 1e-10);
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let g = GaussPoly::monomial(&[1, 2], c(0.7));
        let x = [0.4, -0.9];
        let h = 1e-5;
        let fd = (g.eval(&[x[0] + h, x[1]]) - g.eval(&[x[0] - h, x[1]])) / (2.0 * h);
        assert!((g.deriv(0).eval(&x) - fd).norm() < 1e-9);
    }

    #[test]
    fn curl_fields_are_tangential_in_fourier() {
        let w = GaussPoly::gaussian(2).add(&GaussPoly::monomial(&[1, 1], c(0.3)));
        for m in 1..=3 {
            let fh = AnalyticField::curl(&w, m).unwrap().fourier();
            let y = [0.8, -1.3];
            let t = fh.eval(&y);
            // contraction of the first index with y
            let lay = layout(2, m - 1);
            for p in 0..lay.len() {
                let mut idx = vec![0u8];
                idx.extend_from_slice(lay.index(p));
                let a = t.get(&idx);
                idx[0] = 1;
                let b = t.get(&idx);
                assert!((a * y[0] + b * y[1]).norm() < 1e-12);
            }
        }
    }
}
