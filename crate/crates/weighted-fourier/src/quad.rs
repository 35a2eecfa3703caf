//! Quadrature helpers over the tanh-sinh rule of the `quadrature` crate.

use quadrature::double_exponential;

pub const REL_TOL: f64 = 1e-13;
/// Budget of subintervals for one adaptive integral.
const MAX_PIECES: usize = 400;

/// `∫_a^b f` for `f` smooth on the open interval (integrable endpoint
/// singularities are fine). Globally adaptive: the piece with the largest
/// error estimate is bisected until the total estimate meets the target or
/// the budget runs out.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    integrate_tol(f, a, b, REL_TOL)
}

/// As `integrate`, with relative tolerance `rel`.
pub fn integrate_tol<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let mut scale = 0.0f64;
    for k in 1..8 {
        let x = a + (b - a) * k as f64 / 8.0;
        let v = f(x);
        if v.is_finite() {
            scale = scale.max(v.abs());
        }
    }
    let target = (rel * scale * (b - a)).max(1e-300);
    let width = b - a;
    let piece = |lo: f64, hi: f64| {
        let out = double_exponential::integrate(&f, lo, hi, target * (hi - lo) / width);
        (lo, hi, out.integral, out.error_estimate)
    };
    let mut pieces = vec![piece(a, b)];
    loop {
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= target || pieces.len() >= MAX_PIECES {
            break;
        }
        let (k, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (lo, hi, _, _) = pieces.swap_remove(k);
        let m = 0.5 * (lo + hi);
        if !(m > lo && m < hi) {
            break;
        }
        pieces.push(piece(lo, m));
        pieces.push(piece(m, hi));
    }
    pieces.iter().map(|p| p.2).sum()
}

/// `∫_{t0}^{t1} g(t) dt` computed in the variable `y = ln t`; suited to
/// integrands with power-type behaviour over several decades.
pub fn integrate_log<F: Fn(f64) -> f64>(g: F, t0: f64, t1: f64) -> f64 {
    integrate_log_tol(g, t0, t1, REL_TOL)
}

pub fn integrate_log_tol<F: Fn(f64) -> f64>(g: F, t0: f64, t1: f64, rel: f64) -> f64 {
    if !(t1 > t0) || t0 <= 0.0 {
        return 0.0;
    }
    integrate_tol(
        |y| {
            let t = y.exp();
            g(t) * t
        },
        t0.ln(),
        t1.ln(),
        rel,
    )
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = 0.5 * (1.0 - x);
        xs[n - 1 - i] = 0.5 * (1.0 + x);
        ws[i] = 0.5 * w;
        ws[n - 1 - i] = 0.5 * w;
    }
    (xs, ws)
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0);
        assert!((v - 8.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn endpoint_singularity() {
        let v = integrate(|x| x.powf(-0.5), 0.0, 1.0);
        assert!((v - 2.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn log_variable() {
        let v = integrate_log(|t| t.powi(-2), 1.0, 1e6);
        assert!((v - (1.0 - 1e-6)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn gauss_legendre_degree() {
        let (x, w) = gauss_legendre(16);
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(31)).sum();
        assert!((v - 1.0 / 32.0).abs() < 1e-14, "{v}");
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.cos()).sum();
        assert!((v - 1f64.sin()).abs() < 1e-14, "{v}");
    }

    #[test]
    fn golden() {
        let (x, fx) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 80);
        assert!((x - 0.3).abs() < 1e-7);
        assert!(fx.abs() < 1e-12);
    }
}
