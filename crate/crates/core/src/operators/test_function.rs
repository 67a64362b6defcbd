use crate::data::Bump;
use crate::mesh::BoxDomain;
use std::fmt;

/// `max_{|s|≤1} |d/ds (1-s²)^k| = 2k s*(1-s*²)^{k-1}` at `s*² = 1/(2k-1)`.
pub fn bump_slope_sup(k: i32) -> f64 {
    assert!(k >= 1, "bump exponent must be at least 1");
    if k == 1 {
        return 2.0;
    }
    let s2 = 1.0 / (2 * k - 1) as f64;
    2.0 * k as f64 * s2.sqrt() * (1.0 - s2).powi(k - 1)
}

/// Space-time support box of a test function: `Π [lo_i, hi_i] × [0, t_end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Support {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// `f64::INFINITY` for time-independent functions.
    pub t_end: f64,
}

impl Support {
    /// Distance from the spatial support to `∂Ω`; negative if it sticks out.
    pub fn margin(&self, domain: &BoxDomain) -> f64 {
        (0..domain.dim())
            .map(|i| (self.lo[i] - domain.lo[i]).min(domain.hi[i] - self.hi[i]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether a ball of radius `r` around `x` meets the support box.
    pub fn near(&self, x: &[f64], r: f64) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(xi, (lo, hi))| *xi > lo - r && *xi < hi + r)
    }

    pub fn intersect(&self, other: &Support) -> Option<(Vec<f64>, Vec<f64>)> {
        let lo: Vec<f64> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(*b)).collect();
        let hi: Vec<f64> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(*b)).collect();
        lo.iter().zip(&hi).all(|(a, b)| a < b).then_some((lo, hi))
    }
}

/// A smooth compactly supported scalar test function `φ(x, t)` with declared
/// bounds on its derivatives.
pub trait TestFunction: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64], t: f64) -> f64;
    fn grad(&self, x: &[f64], t: f64, out: &mut [f64]);
    fn dt(&self, x: &[f64], t: f64) -> f64;
    fn support(&self) -> Support;
    /// Upper bound of `|∇φ|` over space-time.
    fn grad_sup(&self) -> f64;
    /// Upper bound of `|∂_t φ|` over space-time.
    fn dt_sup(&self) -> f64;

    /// `C_φ`, dominating both derivative bounds.
    fn lipschitz(&self) -> f64 {
        self.grad_sup().max(self.dt_sup())
    }
}

/// Time modulation `g(t)` of a space-time bump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeFactor {
    Constant,
    /// `(1 - (t/τ)²)^k` on `[0, τ)`, zero after.
    Cutoff { tau: f64, exponent: i32 },
    /// `(1 + depth sin(ω t))` times the cutoff.
    Modulated {
        tau: f64,
        exponent: i32,
        depth: f64,
        omega: f64,
    },
}

impl TimeFactor {
    fn cutoff(t: f64, tau: f64, k: i32) -> (f64, f64) {
        let s = t / tau;
        if s.abs() >= 1.0 {
            return (0.0, 0.0);
        }
        let base = 1.0 - s * s;
        let d = if k == 1 {
            -2.0 * s / tau
        } else {
            -2.0 * k as f64 * s / tau * base.powi(k - 1)
        };
        (base.powi(k), d)
    }

    /// `(g(t), g'(t))`
    pub fn eval(&self, t: f64) -> (f64, f64) {
        match *self {
            Self::Constant => (1.0, 0.0),
            Self::Cutoff { tau, exponent } => Self::cutoff(t, tau, exponent),
            Self::Modulated {
                tau,
                exponent,
                depth,
                omega,
            } => {
                let (c, dc) = Self::cutoff(t, tau, exponent);
                let m = 1.0 + depth * (omega * t).sin();
                let dm = depth * omega * (omega * t).cos();
                (m * c, dm * c + m * dc)
            }
        }
    }

    pub fn end(&self) -> f64 {
        match *self {
            Self::Constant => f64::INFINITY,
            Self::Cutoff { tau, .. } | Self::Modulated { tau, .. } => tau,
        }
    }

    pub fn sup(&self) -> f64 {
        match *self {
            Self::Constant | Self::Cutoff { .. } => 1.0,
            Self::Modulated { depth, .. } => 1.0 + depth.abs(),
        }
    }

    pub fn derivative_sup(&self) -> f64 {
        match *self {
            Self::Constant => 0.0,
            Self::Cutoff { tau, exponent } => bump_slope_sup(exponent) / tau,
            Self::Modulated {
                tau,
                exponent,
                depth,
                omega,
            } => depth.abs() * omega.abs() + (1.0 + depth.abs()) * bump_slope_sup(exponent) / tau,
        }
    }
}

fn bump_grad(shape: &Bump, x: &[f64], out: &mut [f64]) {
    let k = shape.exponent;
    let d = x.len();
    let mut b = [0.0; 3];
    let mut db = [0.0; 3];
    assert!(d <= 3, "bump gradients implemented for d <= 3");
    for i in 0..d {
        let s = (x[i] - shape.center[i]) / shape.radius[i];
        if s.abs() >= 1.0 {
            out.iter_mut().for_each(|o| *o = 0.0);
            return;
        }
        let base = 1.0 - s * s;
        b[i] = base.powi(k);
        db[i] = -2.0 * k as f64 * s * base.powi(k - 1) / shape.radius[i];
    }
    for i in 0..d {
        let mut g = shape.amplitude * db[i];
        for j in (0..d).filter(|&j| j != i) {
            g *= b[j];
        }
        out[i] = g;
    }
}

fn bump_grad_sup(shape: &Bump) -> f64 {
    // other factors are at most one
    let b = bump_slope_sup(shape.exponent);
    let s: f64 = shape.radius.iter().map(|r| (b / r).powi(2)).sum();
    shape.amplitude.abs() * s.sqrt()
}

fn bump_support(shape: &Bump, t_end: f64) -> Support {
    Support {
        lo: shape.center.iter().zip(&shape.radius).map(|(c, r)| c - r).collect(),
        hi: shape.center.iter().zip(&shape.radius).map(|(c, r)| c + r).collect(),
        t_end,
    }
}

/// `φ(x, t) = w(x) g(t)` with `w` a tensor polynomial bump.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyBump {
    pub shape: Bump,
    pub time: TimeFactor,
}

impl PolyBump {
    pub fn new(center: Vec<f64>, radius: Vec<f64>, exponent: i32) -> Self {
        assert!(exponent >= 2, "test functions need a C^1 bump (exponent >= 2)");
        Self {
            shape: Bump::new(center, radius, exponent),
            time: TimeFactor::Constant,
        }
    }

    pub fn with_time(mut self, time: TimeFactor) -> Self {
        self.time = time;
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.shape.amplitude = amplitude;
        self
    }

    /// Spatial factor `w`.
    pub fn spatial(&self, x: &[f64]) -> f64 {
        use crate::data::Datum;
        self.shape.value(x)
    }
}

impl TestFunction for PolyBump {
    fn dim(&self) -> usize {
        self.shape.center.len()
    }

    fn value(&self, x: &[f64], t: f64) -> f64 {
        let g = self.time.eval(t).0;
        if g == 0.0 {
            0.0
        } else {
            g * self.spatial(x)
        }
    }

    fn grad(&self, x: &[f64], t: f64, out: &mut [f64]) {
        bump_grad(&self.shape, x, out);
        let g = self.time.eval(t).0;
        out.iter_mut().for_each(|o| *o *= g);
    }

    fn dt(&self, x: &[f64], t: f64) -> f64 {
        let dg = self.time.eval(t).1;
        if dg == 0.0 {
            0.0
        } else {
            dg * self.spatial(x)
        }
    }

    fn support(&self) -> Support {
        bump_support(&self.shape, self.time.end())
    }

    fn grad_sup(&self) -> f64 {
        self.time.sup() * bump_grad_sup(&self.shape)
    }

    fn dt_sup(&self) -> f64 {
        self.shape.amplitude.abs() * self.time.derivative_sup()
    }
}

/// A constant-direction vector test field `ψ(x) = w(x) e`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorBump {
    pub shape: Bump,
    pub direction: Vec<f64>,
}

impl VectorBump {
    pub fn new(center: Vec<f64>, radius: Vec<f64>, exponent: i32, direction: Vec<f64>) -> Self {
        assert_eq!(center.len(), direction.len());
        Self {
            shape: Bump::new(center, radius, exponent),
            direction,
        }
    }

    pub fn magnitude(&self, x: &[f64]) -> f64 {
        use crate::data::Datum;
        self.shape.value(x)
    }

    pub fn divergence(&self, x: &[f64]) -> f64 {
        let mut g = [0.0; 3];
        let d = x.len();
        bump_grad(&self.shape, x, &mut g[..d]);
        g[..d].iter().zip(&self.direction).map(|(a, b)| a * b).sum()
    }

    /// Operator norm bound of `∇ψ = e ⊗ ∇w`.
    pub fn grad_sup(&self) -> f64 {
        let e = self.direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        e * bump_grad_sup(&self.shape)
    }

    pub fn support(&self) -> Support {
        bump_support(&self.shape, f64::INFINITY)
    }
}

/// Three bumps at different centres and scales plus one time-modulated bump,
/// placed relative to `domain` and vanishing before `final_time`.
pub fn spacetime_corpus(domain: &BoxDomain, final_time: f64) -> Vec<PolyBump> {
    let d = domain.dim();
    let at = |fracs: [f64; 2]| -> Vec<f64> {
        (0..d).map(|i| domain.lo[i] + fracs[i % 2] * domain.extent(i)).collect()
    };
    let scaled = |frac: f64| -> Vec<f64> { (0..d).map(|i| frac * domain.extent(i)).collect() };
    let tau = 0.8 * final_time;
    vec![
        PolyBump::new(at([0.5, 0.5]), scaled(0.25), 3)
            .with_time(TimeFactor::Cutoff { tau, exponent: 3 }),
        PolyBump::new(at([0.45, 0.52]), scaled(0.2), 4)
            .with_time(TimeFactor::Cutoff { tau, exponent: 2 }),
        PolyBump::new(at([0.55, 0.48]), scaled(0.18), 3)
            .with_time(TimeFactor::Cutoff { tau: 0.6 * final_time, exponent: 3 }),
        PolyBump::new(at([0.5, 0.5]), scaled(0.22), 3).with_time(TimeFactor::Modulated {
            tau,
            exponent: 3,
            depth: 0.5,
            omega: 4.0 * std::f64::consts::PI / final_time,
        }),
    ]
}

/// The spatial factors of [`spacetime_corpus`], time independent.
pub fn spatial_corpus(domain: &BoxDomain) -> Vec<PolyBump> {
    spacetime_corpus(domain, 1.0)
        .into_iter()
        .map(|p| p.with_time(TimeFactor::Constant))
        .collect()
}

/// Vector fields `ψ` for weak pairings, one per axis plus a diagonal one.
pub fn vector_corpus(domain: &BoxDomain) -> Vec<VectorBump> {
    let d = domain.dim();
    let c: Vec<f64> = (0..d).map(|i| domain.lo[i] + 0.48 * domain.extent(i)).collect();
    let r: Vec<f64> = (0..d).map(|i| 0.3 * domain.extent(i)).collect();
    let mut out: Vec<VectorBump> = (0..d)
        .map(|axis| {
            let mut e = vec![0.0; d];
            e[axis] = 1.0;
            VectorBump::new(c.clone(), r.clone(), 3, e)
        })
        .collect();
    if d > 1 {
        let s = 1.0 / (d as f64).sqrt();
        let c2: Vec<f64> = (0..d).map(|i| domain.lo[i] + 0.55 * domain.extent(i)).collect();
        let r2: Vec<f64> = (0..d).map(|i| 0.25 * domain.extent(i)).collect();
        out.push(VectorBump::new(c2, r2, 2, vec![s; d]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_grad(phi: &PolyBump, x: &[f64], t: f64) -> Vec<f64> {
        let h = 1e-6;
        (0..x.len())
            .map(|i| {
                let mut a = x.to_vec();
                let mut b = x.to_vec();
                a[i] += h;
                b[i] -= h;
                (phi.value(&a, t) - phi.value(&b, t)) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn slope_sup_matches_dense_sampling() {
        for k in 1..7 {
            let m = (0..=100_000)
                .map(|i| {
                    let s = i as f64 / 100_000.0;
                    2.0 * k as f64 * s * (1.0 - s * s).powi(k - 1)
                })
                .fold(0.0, f64::max);
            let b = bump_slope_sup(k);
            assert!(m <= b * (1.0 + 1e-12) && m > b * (1.0 - 1e-6), "k={k}");
        }
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let phi = PolyBump::new(vec![0.5, 0.4], vec![0.3, 0.2], 3)
            .with_time(TimeFactor::Modulated {
                tau: 0.8,
                exponent: 2,
                depth: 0.5,
                omega: 7.0,
            });
        let mut g = [0.0; 2];
        for &(x, y, t) in &[(0.4, 0.45, 0.1), (0.7, 0.3, 0.5), (0.55, 0.55, 0.0)] {
            phi.grad(&[x, y], t, &mut g);
            let fd = fd_grad(&phi, &[x, y], t);
            assert!((g[0] - fd[0]).abs() < 1e-7 && (g[1] - fd[1]).abs() < 1e-7);
            let dt = (phi.value(&[x, y], t + 1e-6) - phi.value(&[x, y], t - 1e-6)) / 2e-6;
            assert!((phi.dt(&[x, y], t) - dt).abs() < 1e-6);
        }
    }

    #[test]
    fn declared_bounds_dominate_samples() {
        let dom = BoxDomain::unit(2);
        for phi in spacetime_corpus(&dom, 0.5) {
            let mut g = [0.0; 2];
            for i in 0..40 {
                for j in 0..40 {
                    for n in 0..10 {
                        let x = [i as f64 / 39.0, j as f64 / 39.0];
                        let t = 0.05 * n as f64;
                        phi.grad(&x, t, &mut g);
                        assert!(g[0].hypot(g[1]) <= phi.grad_sup());
                        assert!(phi.dt(&x, t).abs() <= phi.dt_sup());
                    }
                }
            }
            assert!(phi.support().margin(&dom) >= 0.25 - 1e-12);
            assert!(phi.support().t_end < 0.5);
        }
    }

    #[test]
    fn function_vanishes_off_support() {
        let phi = PolyBump::new(vec![0.5], vec![0.2], 3)
            .with_time(TimeFactor::Cutoff { tau: 1.0, exponent: 2 });
        assert_eq!(phi.value(&[0.71], 0.0), 0.0);
        assert_eq!(phi.value(&[0.5], 1.0), 0.0);
        assert_eq!(phi.value(&[0.5], 0.0), 1.0);
    }
}
