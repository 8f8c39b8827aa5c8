//! Closed surfaces parametrized by the unit sphere.
//!
//! A surface is the image `x = D w` of the unit sphere under a diagonal map
//! `D = diag(a, b, c)`. The sphere (`D = I`) and origin-centred ellipsoids are
//! supported. The area element is `abc |D^{-1} w| dw` and the outward normal
//! is `D^{-1} w / |D^{-1} w|`.
//!
//! Nodes form a Gauss-Legendre (in `cos theta`) by uniform-azimuth product
//! grid with `n_phi = 2 n_theta`, stored ring by ring.

use std::f64::consts::PI;

use serde::Serialize;

use crate::quadrature::gauss_legendre;
use crate::spinor::Vector3;
use crate::{Error, Result};

pub const MIN_N_THETA: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Sphere,
    Ellipsoid { axes: [f64; 3] },
}

#[derive(Debug, Clone)]
pub struct SurfacePatchization {
    pub shape: Shape,
    pub n_theta: usize,
    pub n_phi: usize,
    pub nodes: Vec<Vector3>,
    pub normals: Vec<Vector3>,
    /// Area weights: quadrature weight times the chart Jacobian.
    pub weights: Vec<f64>,
    /// Preimages of the nodes on the unit sphere.
    pub params: Vec<Vector3>,
    /// Gauss-Legendre nodes in `cos theta`, one per ring.
    pub cos_theta: Vec<f64>,
    pub cos_theta_weights: Vec<f64>,
}

pub fn make_sphere(n_theta: usize) -> Result<SurfacePatchization> {
    build(Shape::Sphere, n_theta)
}

/// Axis-aligned ellipsoid with semi-axes `axes`.
pub fn make_ellipsoid(axes: [f64; 3], n_theta: usize) -> Result<SurfacePatchization> {
    if axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::DegenerateSurface(format!("semi-axes must be positive, got {axes:?}")));
    }
    build(Shape::Ellipsoid { axes }, n_theta)
}

fn build(shape: Shape, n_theta: usize) -> Result<SurfacePatchization> {
    if n_theta < MIN_N_THETA {
        return Err(Error::Resolution(n_theta));
    }
    let n_phi = 2 * n_theta;
    let (t, tw) = gauss_legendre(n_theta);
    let chart = Chart::new(shape);
    let cap = n_theta * n_phi;
    let mut s = SurfacePatchization {
        shape,
        n_theta,
        n_phi,
        nodes: Vec::with_capacity(cap),
        normals: Vec::with_capacity(cap),
        weights: Vec::with_capacity(cap),
        params: Vec::with_capacity(cap),
        cos_theta: t.clone(),
        cos_theta_weights: tw.clone(),
    };
    let dphi = 2.0 * PI / n_phi as f64;
    for (ti, wi) in t.iter().zip(&tw) {
        let st = (1.0 - ti * ti).sqrt();
        for l in 0..n_phi {
            let ph = dphi * l as f64;
            let w = Vector3::new(st * ph.cos(), st * ph.sin(), *ti);
            let (x, n, jac) = chart.eval(&w);
            s.nodes.push(x);
            s.normals.push(n);
            s.weights.push(wi * dphi * jac);
            s.params.push(w);
        }
    }
    Ok(s)
}

/// The map `w -> D w` with its normal and area element.
#[derive(Debug, Clone, Copy)]
pub struct Chart {
    axes: [f64; 3],
}

impl Chart {
    pub fn new(shape: Shape) -> Self {
        match shape {
            Shape::Sphere => Chart { axes: [1.0; 3] },
            Shape::Ellipsoid { axes } => Chart { axes },
        }
    }

    /// `(x, N, jacobian)` at a unit vector `w`.
    #[inline]
    pub fn eval(&self, w: &Vector3) -> (Vector3, Vector3, f64) {
        let [a, b, c] = self.axes;
        let x = Vector3::new(a * w.x, b * w.y, c * w.z);
        let g = Vector3::new(w.x / a, w.y / b, w.z / c);
        let gn = g.norm();
        (x, g / gn, a * b * c * gn)
    }

    #[inline]
    pub fn point(&self, w: &Vector3) -> Vector3 {
        let [a, b, c] = self.axes;
        Vector3::new(a * w.x, b * w.y, c * w.z)
    }

    #[inline]
    pub fn jacobian(&self, w: &Vector3) -> f64 {
        let [a, b, c] = self.axes;
        a * b * c * Vector3::new(w.x / a, w.y / b, w.z / c).norm()
    }
}

impl SurfacePatchization {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn chart(&self) -> Chart {
        Chart::new(self.shape)
    }

    pub fn axes(&self) -> [f64; 3] {
        match self.shape {
            Shape::Sphere => [1.0; 3],
            Shape::Ellipsoid { axes } => axes,
        }
    }

    /// True when the surface is the unit sphere, including `Ellipsoid([1,1,1])`.
    pub fn is_unit_sphere(&self) -> bool {
        self.axes() == [1.0; 3]
    }

    /// Rotation symmetry about the z axis.
    pub fn is_axisymmetric(&self) -> bool {
        let [a, b, _] = self.axes();
        a == b
    }

    /// `|D^{-1} x|`: below 1 inside, 1 on the surface, above 1 outside.
    pub fn level(&self, x: &Vector3) -> f64 {
        let [a, b, c] = self.axes();
        Vector3::new(x.x / a, x.y / b, x.z / c).norm()
    }

    /// Node index of ring `i`, azimuth `l`.
    pub fn index(&self, i: usize, l: usize) -> usize {
        i * self.n_phi + l
    }

    /// Nodes, normals and weights as a JSON document.
    pub fn to_json(&self) -> serde_json::Value {
        let v3 = |v: &Vector3| serde_json::json!([v.x, v.y, v.z]);
        serde_json::json!({
            "shape": self.shape,
            "n_theta": self.n_theta,
            "n_phi": self.n_phi,
            "nodes": self.nodes.iter().map(v3).collect::<Vec<_>>(),
            "normals": self.normals.iter().map(v3).collect::<Vec<_>>(),
            "weights": self.weights,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_area_and_radius() {
        let s = make_sphere(32).unwrap();
        assert_eq!(s.len(), 32 * 64);
        assert!((s.area() - 4.0 * PI).abs() < 1e-10);
        for (x, n) in s.nodes.iter().zip(&s.normals) {
            assert!((x.norm() - 1.0).abs() < 1e-14);
            assert!((n - x).norm() < 1e-14);
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(make_sphere(4), Err(Error::Resolution(4))));
        assert!(matches!(make_ellipsoid([1.0, 0.0, 1.0], 16), Err(Error::DegenerateSurface(_))));
        assert!(make_ellipsoid([1.0, -1.0, 1.0], 16).is_err());
        assert!(make_ellipsoid([1.0, f64::NAN, 1.0], 16).is_err());
    }

    #[test]
    fn unit_ellipsoid_is_the_sphere() {
        let s = make_sphere(32).unwrap();
        let e = make_ellipsoid([1.0; 3], 32).unwrap();
        for i in 0..s.len() {
            assert!((s.nodes[i] - e.nodes[i]).norm() < 1e-12);
            assert!((s.weights[i] - e.weights[i]).abs() < 1e-12);
        }
        assert!(e.is_unit_sphere());
    }

    #[test]
    fn spheroid_area() {
        // prolate spheroid a = 1, c = 1.5: 2 pi a^2 (1 + c/(a e) asin e)
        let e = make_ellipsoid([1.0, 1.0, 1.5], 32).unwrap();
        let ecc = (1.0f64 - 1.0 / 2.25).sqrt();
        let exact = 2.0 * PI * (1.0 + 1.5 / ecc * ecc.asin());
        assert!((e.area() - exact).abs() < 1e-9, "{} {}", e.area(), exact);
        assert!(e.is_axisymmetric());
    }

    #[test]
    fn normals_point_outward() {
        let e = make_ellipsoid([1.0, 2.0, 0.5], 12).unwrap();
        for (x, n) in e.nodes.iter().zip(&e.normals) {
            assert!((n.norm() - 1.0).abs() < 1e-12);
            assert!((e.level(x) - 1.0).abs() < 1e-12);
            assert!(e.level(&(x + 1e-6 * n)) > 1.0);
            assert!(e.level(&(x - 1e-6 * n)) < 1.0);
        }
    }
}
