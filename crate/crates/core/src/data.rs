//! Integrable scalar data `u: Ω → R` used as initial conditions and as inputs
//! of the translation studies.

use std::f64::consts::PI;
use std::fmt;

/// A pointwise-evaluable function on the domain.
pub trait Datum: Send + Sync + fmt::Debug {
    fn value(&self, x: &[f64]) -> f64;

    /// `false` when the function has jumps; projection then switches to
    /// exact splitting (1d) or subdivision quadrature (2d).
    fn is_smooth(&self) -> bool {
        true
    }

    /// Jump locations of a 1d restriction, ascending.
    fn breakpoints_1d(&self) -> Vec<f64> {
        Vec::new()
    }

    /// A Lipschitz constant, when one is known.
    fn lipschitz(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl Datum for Constant {
    fn value(&self, _: &[f64]) -> f64 {
        self.0
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// `u(x) = x_axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coordinate(pub usize);

impl Datum for Coordinate {
    fn value(&self, x: &[f64]) -> f64 {
        x[self.0]
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// `offset + amplitude * sin(2π k·x)`; periodic on the unit box for integer `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sine {
    pub offset: f64,
    pub amplitude: f64,
    pub wavevector: Vec<f64>,
}

impl Sine {
    /// `offset + amplitude * sin(2π Σ_i x_i)` in `dim` dimensions.
    pub fn diagonal(dim: usize, offset: f64, amplitude: f64) -> Self {
        Self {
            offset,
            amplitude,
            wavevector: vec![1.0; dim],
        }
    }

    pub fn phase(&self, x: &[f64]) -> f64 {
        2.0 * PI * self.wavevector.iter().zip(x).map(|(k, xi)| k * xi).sum::<f64>()
    }

    pub fn derivative_along(&self, x: &[f64], direction: &[f64]) -> f64 {
        let kd: f64 = self.wavevector.iter().zip(direction).map(|(k, d)| k * d).sum();
        self.amplitude * 2.0 * PI * kd * self.phase(x).cos()
    }
}

impl Datum for Sine {
    fn value(&self, x: &[f64]) -> f64 {
        self.offset + self.amplitude * self.phase(x).sin()
    }

    fn lipschitz(&self) -> Option<f64> {
        let k = self.wavevector.iter().map(|k| k * k).sum::<f64>().sqrt();
        Some(self.amplitude.abs() * 2.0 * PI * k)
    }
}

/// `value` on the half-space `x_axis < threshold`, `0` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub axis: usize,
    pub threshold: f64,
    pub value: f64,
}

impl Step {
    pub fn new(axis: usize, threshold: f64) -> Self {
        Self {
            axis,
            threshold,
            value: 1.0,
        }
    }
}

impl Datum for Step {
    fn value(&self, x: &[f64]) -> f64 {
        if x[self.axis] < self.threshold {
            self.value
        } else {
            0.0
        }
    }

    fn is_smooth(&self) -> bool {
        false
    }

    fn breakpoints_1d(&self) -> Vec<f64> {
        if self.axis == 0 {
            vec![self.threshold]
        } else {
            Vec::new()
        }
    }
}

/// `amplitude * Π_i (1 - s_i²)^k` with `s_i = (x_i - c_i) / r_i`, zero outside
/// the box `|s_i| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    pub center: Vec<f64>,
    pub radius: Vec<f64>,
    pub exponent: i32,
    pub amplitude: f64,
}

impl Bump {
    pub fn new(center: Vec<f64>, radius: Vec<f64>, exponent: i32) -> Self {
        Self {
            center,
            radius,
            exponent,
            amplitude: 1.0,
        }
    }

    /// Exact `∫ u dx`, using `∫_{-1}^{1} (1-s²)^k ds = 2^{2k+1} (k!)² / (2k+1)!`.
    pub fn integral(&self) -> f64 {
        let k = self.exponent as u32;
        let mut one_d = 2.0;
        for j in 1..=k {
            one_d *= (2 * j) as f64 / (2 * j + 1) as f64;
        }
        self.amplitude * self.radius.iter().map(|r| r * one_d).product::<f64>()
    }
}

impl Datum for Bump {
    fn value(&self, x: &[f64]) -> f64 {
        let mut v = self.amplitude;
        for ((xi, c), r) in x.iter().zip(&self.center).zip(&self.radius) {
            let s = (xi - c) / r;
            if s.abs() >= 1.0 {
                return 0.0;
            }
            v *= (1.0 - s * s).powi(self.exponent);
        }
        v
    }

    fn lipschitz(&self) -> Option<f64> {
        let b = crate::operators::bump_slope_sup(self.exponent);
        let g2: f64 = self.radius.iter().map(|r| (b / r).powi(2)).sum();
        Some(self.amplitude.abs() * g2.sqrt())
    }
}

/// `a + b` pointwise, with `b` scaled by `weight`.
#[derive(Debug)]
pub struct Sum<A, B> {
    pub a: A,
    pub b: B,
    pub weight: f64,
}

impl<A: Datum, B: Datum> Datum for Sum<A, B> {
    fn value(&self, x: &[f64]) -> f64 {
        self.a.value(x) + self.weight * self.b.value(x)
    }

    fn is_smooth(&self) -> bool {
        self.a.is_smooth() && self.b.is_smooth()
    }

    fn breakpoints_1d(&self) -> Vec<f64> {
        let mut v = self.a.breakpoints_1d();
        v.extend(self.b.breakpoints_1d());
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.a.lipschitz()? + self.weight.abs() * self.b.lipschitz()?)
    }
}

impl<D: Datum + ?Sized> Datum for Box<D> {
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn is_smooth(&self) -> bool {
        (**self).is_smooth()
    }
    fn breakpoints_1d(&self) -> Vec<f64> {
        (**self).breakpoints_1d()
    }
    fn lipschitz(&self) -> Option<f64> {
        (**self).lipschitz()
    }
}

impl<D: Datum + ?Sized> Datum for std::sync::Arc<D> {
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn is_smooth(&self) -> bool {
        (**self).is_smooth()
    }
    fn breakpoints_1d(&self) -> Vec<f64> {
        (**self).breakpoints_1d()
    }
    fn lipschitz(&self) -> Option<f64> {
        (**self).lipschitz()
    }
}
