//! Adaptive Gauss-Kronrod quadrature in one and two dimensions.
//!
//! The 2-D rule nests two adaptive 1-D integrations over a rectangle.
//! Known kinks of the integrand should be passed as breakpoints so each
//! panel stays smooth.

/// Result of an integration: value and estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

// 15-point Kronrod nodes (non-negative half) and weights, with the embedded
// 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += wk * pair;
        // odd Kronrod indices are the Gauss nodes
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate {
        value: kronrod * half,
        abs_error: ((kronrod - gauss) * half).abs(),
    }
}

const MAX_DEPTH: u32 = 40;

fn adapt<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64, depth: u32) -> Estimate {
    let whole = kronrod_panel(f, a, b);
    if whole.abs_error <= tol || depth >= MAX_DEPTH || (b - a).abs() < f64::EPSILON * a.abs().max(1.0) {
        return whole;
    }
    let mid = 0.5 * (a + b);
    let left = adapt(f, a, mid, 0.5 * tol, depth + 1);
    let right = adapt(f, mid, b, 0.5 * tol, depth + 1);
    Estimate {
        value: left.value + right.value,
        abs_error: left.abs_error + right.abs_error,
    }
}

/// Integrates `f` over `[a, b]`, splitting first at each breakpoint strictly
/// inside the interval.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Estimate {
    let mut edges = vec![a];
    edges.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    let panels = (edges.len() - 1) as f64;
    edges.windows(2).fold(
        Estimate {
            value: 0.0,
            abs_error: 0.0,
        },
        |acc, w| {
            let e = adapt(&mut f, w[0], w[1], tol / panels, 0);
            Estimate {
                value: acc.value + e.value,
                abs_error: acc.abs_error + e.abs_error,
            }
        },
    )
}

/// Integrates `f(x, y)` over `[x0, x1] x [y0, y1]` to absolute tolerance
/// `tol`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (x0, x1): (f64, f64),
    x_breaks: &[f64],
    (y0, y1): (f64, f64),
    y_breaks: &[f64],
    tol: f64,
) -> Estimate {
    let width = (x1 - x0).abs().max(f64::MIN_POSITIVE);
    let inner_tol = 0.1 * tol / width;
    let mut inner_error = 0.0;
    let outer = integrate(
        |x| {
            let e = integrate(|y| f(x, y), y0, y1, y_breaks, inner_tol);
            inner_error = f64::max(inner_error, e.abs_error);
            e.value
        },
        x0,
        x1,
        x_breaks,
        0.9 * tol,
    );
    Estimate {
        value: outer.value,
        abs_error: outer.abs_error + inner_error * width,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_exact() {
        let e = integrate(|x| 3.0 * x * x, 0.0, 2.0, &[], 1e-12);
        assert!((e.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn kinked_integrand() {
        let e = integrate(|x: f64| x.abs(), -1.0, 2.0, &[0.0], 1e-12);
        assert!((e.value - 2.5).abs() < 1e-12);
        let e = integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, &[0.0], 1e-10);
        assert!((e.value - 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn two_dimensional() {
        let e = integrate_2d(|x, y| x * y.cos(), (0.0, 1.0), &[], (-PI / 2.0, PI / 2.0), &[], 1e-10);
        assert!((e.value - 1.0).abs() < 1e-10);
        assert!(e.abs_error < 1e-9);
    }
}
