//! Gauss rules on intervals and triangles, plus tensor-product box integration.

/// Gauss-Legendre nodes and weights on `[-1, 1]` for 1 to 5 points.
pub fn gauss_legendre(points: usize) -> (&'static [f64], &'static [f64]) {
    const X1: [f64; 1] = [0.0];
    const W1: [f64; 1] = [2.0];
    const X2: [f64; 2] = [-0.577_350_269_189_625_7, 0.577_350_269_189_625_7];
    const W2: [f64; 2] = [1.0, 1.0];
    const X3: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const W3: [f64; 3] = [
        0.555_555_555_555_555_6,
        0.888_888_888_888_888_9,
        0.555_555_555_555_555_6,
    ];
    const X4: [f64; 4] = [
        -0.861_136_311_594_052_6,
        -0.339_981_043_584_856_3,
        0.339_981_043_584_856_3,
        0.861_136_311_594_052_6,
    ];
    const W4: [f64; 4] = [
        0.347_854_845_137_453_9,
        0.652_145_154_862_546_1,
        0.652_145_154_862_546_1,
        0.347_854_845_137_453_9,
    ];
    const X5: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const W5: [f64; 5] = [
        0.236_926_885_056_189_1,
        0.478_628_670_499_366_5,
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
    ];
    match points {
        1 => (&X1, &W1),
        2 => (&X2, &W2),
        3 => (&X3, &W3),
        4 => (&X4, &W4),
        5 => (&X5, &W5),
        _ => panic!("gauss_legendre: {points} points not tabulated (1..=5)"),
    }
}

/// Integrates `f` over `[a, b]` with an n-point Gauss rule.
pub fn integrate_interval(a: f64, b: f64, points: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let (xs, ws) = gauss_legendre(points);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    xs.iter()
        .zip(ws)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Symmetric triangle rules in barycentric coordinates: `(l1, l2, l3, weight)`,
/// weights summing to one.
pub fn triangle_rule(degree: usize) -> &'static [(f64, f64, f64, f64)] {
    const D1: [(f64, f64, f64, f64); 1] = [(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0)];
    const D2: [(f64, f64, f64, f64); 3] = [
        (2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0),
        (1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0),
        (1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0),
    ];
    // Dunavant degree 4.
    const A: f64 = 0.445_948_490_915_965;
    const B: f64 = 0.091_576_213_509_771;
    const WA: f64 = 0.223_381_589_678_011;
    const WB: f64 = 0.109_951_743_655_322;
    const D4: [(f64, f64, f64, f64); 6] = [
        (A, A, 1.0 - 2.0 * A, WA),
        (A, 1.0 - 2.0 * A, A, WA),
        (1.0 - 2.0 * A, A, A, WA),
        (B, B, 1.0 - 2.0 * B, WB),
        (B, 1.0 - 2.0 * B, B, WB),
        (1.0 - 2.0 * B, B, B, WB),
    ];
    match degree {
        0 | 1 => &D1,
        2 => &D2,
        3 | 4 => &D4,
        _ => panic!("triangle_rule: degree {degree} not tabulated (<= 4)"),
    }
}

/// Integrates `f` over the triangle `(p0, p1, p2)` with the rule of the given degree.
pub fn integrate_triangle(
    p: [[f64; 2]; 3],
    degree: usize,
    mut f: impl FnMut(&[f64]) -> f64,
) -> f64 {
    let area = triangle_area(p).abs();
    triangle_rule(degree)
        .iter()
        .map(|&(l1, l2, l3, w)| {
            let x = [
                l1 * p[0][0] + l2 * p[1][0] + l3 * p[2][0],
                l1 * p[0][1] + l2 * p[1][1] + l3 * p[2][1],
            ];
            w * f(&x)
        })
        .sum::<f64>()
        * area
}

/// Midpoint-of-subtriangle rule after splitting into `m * m` congruent pieces.
/// Used for discontinuous integrands.
pub fn integrate_triangle_subdivided(
    p: [[f64; 2]; 3],
    m: usize,
    mut f: impl FnMut(&[f64]) -> f64,
) -> f64 {
    let m = m.max(1);
    let area = triangle_area(p).abs() / (m * m) as f64;
    let e1 = [(p[1][0] - p[0][0]) / m as f64, (p[1][1] - p[0][1]) / m as f64];
    let e2 = [(p[2][0] - p[0][0]) / m as f64, (p[2][1] - p[0][1]) / m as f64];
    let at = |i: f64, j: f64| [p[0][0] + i * e1[0] + j * e2[0], p[0][1] + i * e1[1] + j * e2[1]];
    let mut sum = 0.0;
    for i in 0..m {
        for j in 0..m - i {
            let (fi, fj) = (i as f64, j as f64);
            // upright piece
            let c = at(fi + 1.0 / 3.0, fj + 1.0 / 3.0);
            sum += f(&c);
            if i + j + 1 < m {
                // inverted piece
                let c = at(fi + 2.0 / 3.0, fj + 2.0 / 3.0);
                sum += f(&c);
            }
        }
    }
    sum * area
}

/// Signed area of a triangle (positive when counter-clockwise).
pub fn triangle_area(p: [[f64; 2]; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

/// Composite tensor-product Gauss integration over an axis-aligned box.
///
/// `subdivisions` intervals per axis, `points` Gauss nodes per interval.
pub fn integrate_box(
    lo: &[f64],
    hi: &[f64],
    subdivisions: usize,
    points: usize,
    mut f: impl FnMut(&[f64]) -> f64,
) -> f64 {
    let dim = lo.len();
    let (xs, ws) = gauss_legendre(points);
    // 1d node/weight lists per axis
    let axes: Vec<Vec<(f64, f64)>> = (0..dim)
        .map(|i| {
            let h = (hi[i] - lo[i]) / subdivisions as f64;
            let mut nodes = Vec::with_capacity(subdivisions * points);
            for s in 0..subdivisions {
                let mid = lo[i] + (s as f64 + 0.5) * h;
                for (&x, &w) in xs.iter().zip(ws) {
                    nodes.push((mid + 0.5 * h * x, 0.5 * h * w));
                }
            }
            nodes
        })
        .collect();
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    let mut total = 0.0;
    if dim == 0 || axes.iter().any(|a| a.is_empty()) {
        return 0.0;
    }
    loop {
        let mut w = 1.0;
        for i in 0..dim {
            let (xi, wi) = axes[i][idx[i]];
            x[i] = xi;
            w *= wi;
        }
        total += w * f(&x);
        let mut axis = 0;
        loop {
            idx[axis] += 1;
            if idx[axis] < axes[axis].len() {
                break;
            }
            idx[axis] = 0;
            axis += 1;
            if axis == dim {
                return total;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_integrate_polynomials_exactly() {
        for n in 1..=5 {
            let degree = 2 * n - 1;
            let exact = 1.0 / (degree as f64 + 1.0);
            let got = integrate_interval(0.0, 1.0, n, |x| x.powi(degree as i32));
            assert!((got - exact).abs() < 1e-14, "n={n}: {got} vs {exact}");
        }
    }

    #[test]
    fn triangle_rules_reach_their_degree() {
        let p = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        // int x^a y^b over the unit triangle = a! b! / (a+b+2)!
        let fact = |n: u32| (1..=n).product::<u32>() as f64;
        for (deg, a, b) in [(1, 1, 0), (2, 1, 1), (2, 2, 0), (4, 3, 1), (4, 2, 2), (4, 4, 0)] {
            let exact = fact(a) * fact(b) / fact(a + b + 2);
            let got = integrate_triangle(p, deg, |x| x[0].powi(a as i32) * x[1].powi(b as i32));
            assert!((got - exact).abs() < 1e-13, "deg {deg} x^{a} y^{b}: {got} vs {exact}");
        }
    }

    #[test]
    fn subdivided_rule_covers_area() {
        let p = [[0.0, 0.0], [2.0, 0.0], [0.5, 1.0]];
        for m in [1, 3, 8] {
            let a = integrate_triangle_subdivided(p, m, |_| 1.0);
            assert!((a - 1.0).abs() < 1e-14);
        }
        // linear integrands are exact with centroid rules
        let a = integrate_triangle_subdivided(p, 5, |x| x[0]);
        let b = integrate_triangle(p, 1, |x| x[0]);
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn box_integration_is_exact_for_tensor_polynomials() {
        let got = integrate_box(&[0.0, -1.0], &[2.0, 1.0], 3, 3, |x| x[0].powi(3) * x[1] * x[1]);
        // (16/4) * (2/3)
        assert!((got - 8.0 / 3.0).abs() < 1e-12);
    }
}
