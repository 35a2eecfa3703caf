//! General one-variable functions on `(0, ∞)` with symbolic endpoint asymptotics.
//!
//! Derived objects (primitives, nested Hardy-type integrals, running averages)
//! are carried as `Curve`s. Convergence is always decided from the asymptotics;
//! quadrature only produces values once an integral is known to be finite.

use super::asym::{Asym, AsymError, End};
use crate::exponent::{qf, Q};
use crate::extended::ExtReal;
use crate::quad;
use num_traits::{One, Zero};
use std::sync::Arc;

pub type Fun = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Log-distance kept beyond the outermost knots before switching to the
/// asymptotic model.
const SPAN: f64 = 30.0;
/// Node spacing (in `ln t`) for totals and for sup scans.
const COARSE: f64 = 0.25;
/// Node spacing for tabulated primitives (cubic Hermite in `ln t`).
const FINE: f64 = 0.02;
/// Relative accuracy requested from quadrature over tabulated curves.
const TABLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("divergent: {0}")]
    Divergent(String),
    #[error(transparent)]
    Asym(#[from] AsymError),
}

impl CurveError {
    pub fn to_ext(&self) -> ExtReal {
        match self {
            CurveError::Divergent(r) => ExtReal::infinite(r.clone()),
            CurveError::Asym(e) => ExtReal::indeterminate(e.to_string()),
        }
    }
}

#[derive(Clone)]
pub struct Curve {
    f: Fun,
    pub at0: Asym,
    pub at_inf: Asym,
    knots: Vec<f64>,
    /// `Some((c, a))` when the curve is exactly `c t^a`.
    mono: Option<(f64, Q)>,
    /// Values come from an interpolated table (accurate to about `TABLE_TOL`).
    tabulated: bool,
}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Curve")
            .field("at0", &self.at0)
            .field("at_inf", &self.at_inf)
            .field("knots", &self.knots.len())
            .field("mono", &self.mono)
            .finish()
    }
}

fn clean_knots(mut k: Vec<f64>) -> Vec<f64> {
    k.retain(|x| x.is_finite() && *x > 0.0);
    k.sort_by(|a, b| a.partial_cmp(b).unwrap());
    k.dedup();
    k
}

/// Approximates `∫_0^t g` from `g(t)` when `t` is deep in the regime `at0`.
pub fn model_head(at0: &Asym, t: f64, gt: f64) -> f64 {
    match at0 {
        Asym::Zero => 0.0,
        Asym::Infinite => f64::INFINITY,
        Asym::Pow { a, b, .. } => {
            if gt == 0.0 {
                return 0.0;
            }
            let l = (1.0 / t).ln().max(1.0);
            let (a, b) = (qf(*a), qf(*b));
            if a > -1.0 {
                let den = (a + 1.0) - b / l;
                t * gt / if den > 0.0 { den } else { a + 1.0 }
            } else if a == -1.0 && b < -1.0 {
                t * gt * l / (-b - 1.0)
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Approximates `∫_t^∞ g` from `g(t)` when `t` is deep in the regime `at_inf`.
pub fn model_tail(at_inf: &Asym, t: f64, gt: f64) -> f64 {
    match at_inf {
        Asym::Zero => 0.0,
        Asym::Infinite => f64::INFINITY,
        Asym::Pow { a, b, .. } => {
            if gt == 0.0 {
                return 0.0;
            }
            let l = t.ln().max(1.0);
            let (a, b) = (qf(*a), qf(*b));
            if a < -1.0 {
                let den = -(a + 1.0) - b / l;
                t * gt / if den > 0.0 { den } else { -(a + 1.0) }
            } else if a == -1.0 && b < -1.0 {
                t * gt * l / (-b - 1.0)
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Growth model `M` with `M' ≈ g` for non-integrable ends (`t M'/M` from the exponents).
fn growth_model(asym: &Asym, end: End, t: f64, gt: f64) -> f64 {
    match asym {
        Asym::Pow { a, b, .. } => {
            if gt == 0.0 {
                return 0.0;
            }
            let (a, b) = (qf(*a), qf(*b));
            match end {
                End::Inf => {
                    let l = t.ln().max(1.0);
                    if a > -1.0 {
                        t * gt / ((a + 1.0) + b / l)
                    } else {
                        t * gt * l / (b + 1.0)
                    }
                }
                End::Zero => {
                    let l = (1.0 / t).ln().max(1.0);
                    if a < -1.0 {
                        t * gt / (-(a + 1.0) + b / l)
                    } else {
                        t * gt * l / (b + 1.0)
                    }
                }
            }
        }
        _ => 0.0,
    }
}

/// Log-spaced nodes covering all knots, extended by `SPAN` on both sides.
fn build_nodes(knots: &[f64], step: f64) -> (Vec<f64>, Vec<bool>) {
    let ks: Vec<f64> = if knots.is_empty() { vec![1.0] } else { knots.to_vec() };
    let mut ys: Vec<f64> = Vec::new();
    let mut is_knot: Vec<bool> = Vec::new();
    let y_lo = ks[0].ln() - SPAN;
    let y_hi = ks[ks.len() - 1].ln() + SPAN;
    let mut anchors: Vec<(f64, bool)> = vec![(y_lo, false)];
    anchors.extend(ks.iter().map(|k| (k.ln(), !knots.is_empty())));
    anchors.push((y_hi, false));
    for w in anchors.windows(2) {
        let (y0, k0) = w[0];
        let (y1, _) = w[1];
        if ys.is_empty() {
            ys.push(y0);
            is_knot.push(k0);
        }
        let n = ((y1 - y0) / step).ceil().max(1.0) as usize;
        for i in 1..=n {
            ys.push(if i == n { y1 } else { y0 + (y1 - y0) * i as f64 / n as f64 });
            is_knot.push(false);
        }
        let last = is_knot.len() - 1;
        is_knot[last] = w[1].1;
    }
    (ys.into_iter().map(f64::exp).collect(), is_knot)
}

/// Cumulative table of a primitive, evaluated by cubic Hermite in `ln t`.
struct Table {
    ts: Vec<f64>,
    ys: Vec<f64>,
    vals: Vec<f64>,
    dl: Vec<f64>,
    dr: Vec<f64>,
    rough: Vec<bool>,
}

impl Table {
    fn locate(&self, t: f64) -> usize {
        match self.ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.ts.len() - 2),
            Err(i) => i - 1,
        }
    }

    fn hermite(&self, i: usize, y: f64) -> f64 {
        let h = self.ys[i + 1] - self.ys[i];
        let s = (y - self.ys[i]) / h;
        let (p0, p1) = (self.vals[i], self.vals[i + 1]);
        let (m0, m1) = (self.dr[i] * h, self.dl[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * p0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * p1
            + (s3 - s2) * m1
    }
}

fn one_sided(g: &Fun, t: f64, left: bool) -> f64 {
    let d = t * 1e-12;
    let v = if left { g(t - d) } else { g(t + d) };
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

impl Curve {
    pub fn new(f: Fun, at0: Asym, at_inf: Asym, knots: Vec<f64>) -> Curve {
        Curve {
            f,
            at0,
            at_inf,
            knots: clean_knots(knots),
            mono: None,
            tabulated: false,
        }
    }

    pub fn from_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(
        f: F,
        at0: Asym,
        at_inf: Asym,
        knots: Vec<f64>,
    ) -> Curve {
        Curve::new(Arc::new(f), at0, at_inf, knots)
    }

    /// `c t^a` exactly.
    pub fn mono(c: f64, a: Q) -> Curve {
        let af = qf(a);
        Curve {
            f: Arc::new(move |t: f64| if c == 0.0 { 0.0 } else { c * t.powf(af) }),
            at0: Asym::pow(c, a, Q::zero()),
            at_inf: Asym::pow(c, a, Q::zero()),
            knots: vec![],
            mono: Some((c, a)),
            tabulated: false,
        }
    }

    pub fn constant(c: f64) -> Curve {
        Curve::mono(c, Q::zero())
    }

    pub fn identity_power(a: Q) -> Curve {
        Curve::mono(1.0, a)
    }

    pub fn as_mono(&self) -> Option<(f64, Q)> {
        self.mono
    }

    fn tabulated_if(mut self, flag: bool) -> Curve {
        self.tabulated = flag;
        self
    }

    fn tol(&self) -> f64 {
        if self.tabulated {
            TABLE_TOL
        } else {
            quad::REL_TOL
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn func(&self) -> Fun {
        self.f.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.at0 == Asym::Zero && self.at_inf == Asym::Zero && self.knots.is_empty()
    }

    pub fn scale(&self, c: f64) -> Curve {
        if let Some((m, a)) = self.mono {
            return Curve::mono(m * c, a);
        }
        let f = self.f.clone();
        Curve::new(
            Arc::new(move |t| {
                let v = f(t);
                if c == 0.0 || v == 0.0 {
                    0.0
                } else {
                    c * v
                }
            }),
            self.at0.scale(c),
            self.at_inf.scale(c),
            self.knots.clone(),
        )
        .tabulated_if(self.tabulated)
    }

    /// Pointwise product with `0 * inf = 0`.
    pub fn mul(&self, other: &Curve) -> Curve {
        if let (Some((c1, a1)), Some((c2, a2))) = (self.mono, other.mono) {
            return Curve::mono(c1 * c2, a1 + a2);
        }
        let (f, g) = (self.f.clone(), other.f.clone());
        let mut knots = self.knots.clone();
        knots.extend_from_slice(&other.knots);
        Curve::new(
            Arc::new(move |t| {
                let a = f(t);
                if a == 0.0 {
                    return 0.0;
                }
                let b = g(t);
                if b == 0.0 {
                    0.0
                } else {
                    a * b
                }
            }),
            self.at0.mul(&other.at0),
            self.at_inf.mul(&other.at_inf),
            knots,
        )
        .tabulated_if(self.tabulated || other.tabulated)
    }

    pub fn powq(&self, e: Q) -> Curve {
        if e.is_zero() {
            return Curve::constant(1.0);
        }
        if e == Q::one() {
            return self.clone();
        }
        if let Some((c, a)) = self.mono {
            return Curve::mono(c.powf(qf(e)), a * e);
        }
        let f = self.f.clone();
        let ef = qf(e);
        Curve::new(
            Arc::new(move |t| {
                let v = f(t);
                if v == 0.0 {
                    if ef > 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    v.powf(ef)
                }
            }),
            self.at0.powq(e),
            self.at_inf.powq(e),
            self.knots.clone(),
        )
        .tabulated_if(self.tabulated)
    }

    pub fn add(&self, other: &Curve) -> Curve {
        if let (Some((c1, a1)), Some((c2, a2))) = (self.mono, other.mono) {
            if a1 == a2 {
                return Curve::mono(c1 + c2, a1);
            }
        }
        let (f, g) = (self.f.clone(), other.f.clone());
        let mut knots = self.knots.clone();
        knots.extend_from_slice(&other.knots);
        Curve::new(
            Arc::new(move |t| f(t) + g(t)),
            self.at0.add(&other.at0, End::Zero),
            self.at_inf.add(&other.at_inf, End::Inf),
            knots,
        )
        .tabulated_if(self.tabulated || other.tabulated)
    }

    /// `t -> f(k t)` for `k > 0`.
    pub fn dilate(&self, k: f64) -> Curve {
        if let Some((c, a)) = self.mono {
            return Curve::mono(c * k.powf(qf(a)), a);
        }
        let f = self.f.clone();
        Curve::new(
            Arc::new(move |t| f(k * t)),
            self.at0.dilate(k),
            self.at_inf.dilate(k),
            self.knots.iter().map(|x| x / k).collect(),
        )
        .tabulated_if(self.tabulated)
    }

    /// `t -> f(t^k)`, `k > 0`.
    pub fn compose_power(&self, k: Q) -> Curve {
        assert!(k > Q::zero());
        if let Some((c, a)) = self.mono {
            return Curve::mono(c, a * k);
        }
        let f = self.f.clone();
        let kf = qf(k);
        Curve::new(
            Arc::new(move |t| f(t.powf(kf))),
            self.at0.compose_power(k),
            self.at_inf.compose_power(k),
            self.knots.iter().map(|x| x.powf(1.0 / kf)).collect(),
        )
        .tabulated_if(self.tabulated)
    }

    /// `t -> f(1/t)`.
    pub fn reflect(&self) -> Curve {
        if let Some((c, a)) = self.mono {
            return Curve::mono(c, -a);
        }
        let f = self.f.clone();
        Curve::new(
            Arc::new(move |t| f(1.0 / t)),
            self.at_inf.reflect(),
            self.at0.reflect(),
            self.knots.iter().map(|k| 1.0 / k).collect(),
        )
        .tabulated_if(self.tabulated)
    }

    fn check_finite_total(&self) -> Result<(), CurveError> {
        if !self.at0.integrable(End::Zero) {
            return Err(CurveError::Divergent(format!(
                "integrand ~ {} is not integrable at 0",
                self.at0
            )));
        }
        if !self.at_inf.integrable(End::Inf) {
            return Err(CurveError::Divergent(format!(
                "integrand ~ {} is not integrable at infinity",
                self.at_inf
            )));
        }
        Ok(())
    }

    fn segment(&self, t0: f64, t1: f64) -> f64 {
        let f = &self.f;
        quad::integrate_log_tol(|t| f(t), t0, t1, self.tol())
    }

    /// `∫_0^∞ f`, with divergence decided from the asymptotics.
    pub fn integral(&self) -> ExtReal {
        if let Err(e) = self.check_finite_total() {
            return e.to_ext();
        }
        if let Some((c, _)) = self.mono {
            // a finite total of c t^a forces c = 0
            debug_assert_eq!(c, 0.0);
            return ExtReal::zero();
        }
        ExtReal::from_f64(self.total_value(), "overflow in quadrature")
    }

    fn total_value(&self) -> f64 {
        let (ts, _) = build_nodes(&self.knots, COARSE);
        let first = ts[0];
        let last = ts[ts.len() - 1];
        let mut sum = model_head(&self.at0, first, one_sided(&self.f, first, false));
        for w in ts.windows(2) {
            sum += self.segment(w[0], w[1]);
        }
        sum + model_tail(&self.at_inf, last, one_sided(&self.f, last, true))
    }

    fn table(&self, step: f64) -> Table {
        let (ts, is_knot) = build_nodes(&self.knots, step);
        let n = ts.len();
        let mut vals = vec![0.0; n];
        let g = &self.f;
        let first = ts[0];
        vals[0] = model_head(&self.at0, first, one_sided(g, first, false));
        for i in 1..n {
            vals[i] = vals[i - 1] + self.segment(ts[i - 1], ts[i]);
        }
        let dl: Vec<f64> = ts.iter().map(|&t| one_sided(g, t, true) * t).collect();
        let dr: Vec<f64> = ts.iter().map(|&t| one_sided(g, t, false) * t).collect();
        let rough: Vec<bool> = (0..n - 1).map(|i| is_knot[i] || is_knot[i + 1]).collect();
        Table {
            ys: ts.iter().map(|t| t.ln()).collect(),
            ts,
            vals,
            dl,
            dr,
            rough,
        }
    }

    /// Like `table` but accumulating from the right, so small tails keep
    /// their relative accuracy. `vals[i] = ∫_{ts[i]}^∞ f`.
    fn tail_table(&self, step: f64) -> Table {
        let (ts, is_knot) = build_nodes(&self.knots, step);
        let n = ts.len();
        let g = &self.f;
        let last = ts[n - 1];
        let mut vals = vec![0.0; n];
        vals[n - 1] = model_tail(&self.at_inf, last, one_sided(g, last, true));
        for i in (0..n - 1).rev() {
            vals[i] = vals[i + 1] + self.segment(ts[i], ts[i + 1]);
        }
        let dl: Vec<f64> = ts.iter().map(|&t| -one_sided(g, t, true) * t).collect();
        let dr: Vec<f64> = ts.iter().map(|&t| -one_sided(g, t, false) * t).collect();
        let rough: Vec<bool> = (0..n - 1).map(|i| is_knot[i] || is_knot[i + 1]).collect();
        Table {
            ys: ts.iter().map(|t| t.ln()).collect(),
            ts,
            vals,
            dl,
            dr,
            rough,
        }
    }

    /// `F(t) = ∫_0^t f` as a tabulated curve.
    pub fn head_integral(&self) -> Result<Curve, CurveError> {
        if !self.at0.integrable(End::Zero) {
            return Err(CurveError::Divergent(format!(
                "∫_0^t diverges at 0 (integrand ~ {})",
                self.at0
            )));
        }
        if let Some((c, a)) = self.mono {
            let e = a + Q::one();
            return Ok(Curve::mono(c / qf(e), e));
        }
        let tab = Arc::new(self.table(FINE));
        let total = if self.at_inf.integrable(End::Inf) {
            let last = *tab.ts.last().unwrap();
            Some(
                tab.vals.last().unwrap()
                    + model_tail(&self.at_inf, last, one_sided(&self.f, last, true)),
            )
        } else {
            None
        };
        let at0 = self.at0.head_integral(End::Zero, None)?;
        let at_inf = self.at_inf.head_integral(End::Inf, total)?;
        let g = self.f.clone();
        let tol = self.tol();
        let (a0, ainf) = (self.at0.clone(), self.at_inf.clone());
        let eval = move |t: f64| -> f64 {
            if !(t > 0.0) {
                return 0.0;
            }
            let n = tab.ts.len();
            if t <= tab.ts[0] {
                return model_head(&a0, t, one_sided(&g, t, false));
            }
            if t >= tab.ts[n - 1] {
                return match total {
                    Some(tot) => tot - model_tail(&ainf, t, one_sided(&g, t, true)),
                    None => {
                        let tl = tab.ts[n - 1];
                        tab.vals[n - 1] + growth_model(&ainf, End::Inf, t, g(t))
                            - growth_model(&ainf, End::Inf, tl, one_sided(&g, tl, true))
                    }
                };
            }
            let i = tab.locate(t);
            if tab.rough[i] {
                let gg = &g;
                tab.vals[i] + quad::integrate_log_tol(|s| gg(s), tab.ts[i], t, tol)
            } else {
                tab.hermite(i, t.ln())
            }
        };
        Ok(Curve::new(Arc::new(eval), at0, at_inf, self.knots.clone()).tabulated_if(true))
    }

    /// `G(t) = ∫_t^∞ f` as a tabulated curve.
    pub fn tail_integral(&self) -> Result<Curve, CurveError> {
        if !self.at_inf.integrable(End::Inf) {
            return Err(CurveError::Divergent(format!(
                "∫_t^∞ diverges (integrand ~ {} at infinity)",
                self.at_inf
            )));
        }
        if let Some((c, a)) = self.mono {
            let e = a + Q::one();
            return Ok(Curve::mono(if c == 0.0 { 0.0 } else { -c / qf(e) }, e));
        }
        let tab = Arc::new(self.tail_table(FINE));
        let first = tab.ts[0];
        let total = if self.at0.integrable(End::Zero) {
            Some(tab.vals[0] + model_head(&self.at0, first, one_sided(&self.f, first, false)))
        } else {
            None
        };
        let at0 = self.at0.tail_integral(End::Zero, total)?;
        let at_inf = self.at_inf.tail_integral(End::Inf, None)?;
        let g = self.f.clone();
        let tol = self.tol();
        let (a0, ainf) = (self.at0.clone(), self.at_inf.clone());
        let eval = move |t: f64| -> f64 {
            let n = tab.ts.len();
            if !(t > 0.0) {
                return total.unwrap_or(f64::INFINITY);
            }
            if t >= tab.ts[n - 1] {
                return model_tail(&ainf, t, one_sided(&g, t, true));
            }
            if t <= tab.ts[0] {
                let t0 = tab.ts[0];
                return match total {
                    Some(tot) => tot - model_head(&a0, t, one_sided(&g, t, false)),
                    None => {
                        tab.vals[0] + growth_model(&a0, End::Zero, t, g(t))
                            - growth_model(&a0, End::Zero, t0, one_sided(&g, t0, false))
                    }
                };
            }
            let i = tab.locate(t);
            if tab.rough[i] {
                let gg = &g;
                tab.vals[i + 1] + quad::integrate_log_tol(|s| gg(s), t, tab.ts[i + 1], tol)
            } else {
                tab.hermite(i, t.ln())
            }
        };
        Ok(Curve::new(Arc::new(eval), at0, at_inf, self.knots.clone()).tabulated_if(true))
    }

    fn scan_points(&self) -> Vec<f64> {
        let (ts, _) = build_nodes(&self.knots, COARSE);
        let mut pts = Vec::with_capacity(ts.len() + 2 * self.knots.len());
        pts.extend_from_slice(&ts);
        for &k in &self.knots {
            pts.push(k * (1.0 - 1e-12));
            pts.push(k * (1.0 + 1e-12));
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts
    }

    /// `sup_{t>0} f(t)` and a maximizing location (`None` for a limit at an end).
    pub fn sup(&self) -> (ExtReal, Option<f64>) {
        if self.at0.unbounded(End::Zero) {
            return (
                ExtReal::infinite(format!("unbounded near 0 (~ {})", self.at0)),
                None,
            );
        }
        if self.at_inf.unbounded(End::Inf) {
            return (
                ExtReal::infinite(format!("unbounded near infinity (~ {})", self.at_inf)),
                None,
            );
        }
        if let Some((c, _)) = self.mono {
            return (ExtReal::finite(c), None);
        }
        let pts = self.scan_points();
        let vals: Vec<f64> = pts.iter().map(|&t| self.eval(t)).collect();
        let mut best = f64::NEG_INFINITY;
        let mut arg = None;
        for (i, &v) in vals.iter().enumerate() {
            if v > best {
                best = v;
                arg = Some(i);
            }
        }
        if let Some(i) = arg {
            let lo = pts[i.saturating_sub(1)].ln();
            let hi = pts[(i + 1).min(pts.len() - 1)].ln();
            if hi > lo {
                let (y, v) = quad::golden_max(|y| self.eval(y.exp()), lo, hi, 80);
                if v > best {
                    best = v;
                    return self.finish_sup(best, Some(y.exp()));
                }
            }
        }
        self.finish_sup(best, arg.map(|i| pts[i]))
    }

    fn finish_sup(&self, best: f64, arg: Option<f64>) -> (ExtReal, Option<f64>) {
        let mut best = best;
        let mut arg = arg;
        for (asym, end) in [(&self.at0, End::Zero), (&self.at_inf, End::Inf)] {
            if let Some(l) = asym.limit(end) {
                if l > best {
                    best = l;
                    arg = None;
                }
            }
        }
        (ExtReal::from_f64(best, "non-finite sample"), arg)
    }

    /// `S(x) = sup_{y >= x} f(y)`, tabulated on a fine grid.
    pub fn tail_sup(&self) -> Result<Curve, CurveError> {
        if self.at_inf.unbounded(End::Inf) {
            return Err(CurveError::Divergent(
                "running supremum is infinite (unbounded at infinity)".into(),
            ));
        }
        let (ts, _) = build_nodes(&self.knots, FINE);
        let vals: Vec<f64> = ts.iter().map(|&t| self.eval(t)).collect();
        let lim = self.at_inf.limit(End::Inf).unwrap_or(0.0);
        let mut suffix = vals.clone();
        let n = ts.len();
        suffix[n - 1] = suffix[n - 1].max(lim);
        for i in (0..n - 1).rev() {
            suffix[i] = suffix[i].max(suffix[i + 1]);
        }
        let global = suffix[0].max(self.at0.limit(End::Zero).unwrap_or(0.0));
        let f = self.f.clone();
        let ts = Arc::new(ts);
        let suffix = Arc::new(suffix);
        let eval = move |x: f64| -> f64 {
            let n = ts.len();
            let here = f(x);
            if x >= ts[n - 1] {
                return here.max(lim);
            }
            let i = match ts.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
                Ok(i) => i,
                Err(i) => i,
            };
            here.max(suffix[i.min(n - 1)])
        };
        let at0 = if self.at0.unbounded(End::Zero) {
            Asym::Infinite
        } else {
            Asym::constant(global)
        };
        let at_inf = match self.at_inf.limit(End::Inf) {
            Some(l) if l > 0.0 => Asym::constant(l),
            _ => self.at_inf.clone(),
        };
        Ok(Curve::new(Arc::new(eval), at0, at_inf, self.knots.clone()).tabulated_if(true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{q, qi};

    fn step_curve() -> Curve {
        // 1 on (0,1), t^{-2} after
        Curve::from_fn(
            |t| if t < 1.0 { 1.0 } else { t.powi(-2) },
            Asym::constant(1.0),
            Asym::pow(1.0, qi(-2), qi(0)),
            vec![1.0],
        )
    }

    #[test]
    fn total_integral() {
        let v = step_curve().integral().value().unwrap();
        assert!((v - 2.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn divergence_is_symbolic() {
        let c = Curve::from_fn(|t| 1.0 / t, Asym::pow(1.0, qi(-1), qi(0)), Asym::Zero, vec![1.0]);
        assert!(c.integral().is_infinite());
        assert!(Curve::mono(1.0, qi(0)).integral().is_infinite());
    }

    #[test]
    fn head_and_tail_primitives() {
        let c = step_curve();
        let h = c.head_integral().unwrap();
        let t = c.tail_integral().unwrap();
        for &x in &[1e-6, 0.3, 1.0, 1.7, 5.0, 1e3, 1e20] {
            let exact_h = if x < 1.0 { x } else { 2.0 - 1.0 / x };
            let exact_t = if x < 1.0 { 2.0 - x } else { 1.0 / x };
            assert!((h.eval(x) - exact_h).abs() <= 1e-9 * exact_h, "head at {x}");
            assert!((t.eval(x) - exact_t).abs() <= 1e-9 * exact_t, "tail at {x}");
        }
        assert_eq!(h.at_inf, Asym::constant(h.at_inf.limit(End::Inf).unwrap()));
    }

    #[test]
    fn primitive_with_log_decay() {
        // g = t^{-1} log^{-2} t for t >= e, zero before: ∫_t^∞ g = 1/log t
        let e = std::f64::consts::E;
        let g = Curve::from_fn(
            move |t| if t < e { 0.0 } else { 1.0 / (t * t.ln().powi(2)) },
            Asym::Zero,
            Asym::pow(1.0, qi(-1), qi(-2)),
            vec![e],
        );
        let tail = g.tail_integral().unwrap();
        for &x in &[3.0, 10.0, 1e5, 1e30] {
            let exact = 1.0 / f64::ln(x);
            assert!((tail.eval(x) - exact).abs() < 1e-7 * exact, "{x}: {}", tail.eval(x));
        }
    }

    #[test]
    fn mono_tail_integral() {
        let g = Curve::mono(3.0, qi(-3)).tail_integral().unwrap();
        assert_eq!(g.as_mono(), Some((1.5, qi(-2))));
        assert!((g.eval(2.0) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn mono_algebra_is_exact() {
        let u = Curve::mono(1.0, qi(1));
        let w = Curve::mono(1.0, qi(-1));
        let p = u.powq(q(1, 2)).mul(&w.powq(q(1, 2)));
        assert_eq!(p.sup().0, ExtReal::finite(1.0));
        assert!(u.sup().0.is_infinite());
    }

    #[test]
    fn sup_and_tail_sup() {
        let c = Curve::from_fn(
            |t: f64| t * (-t).exp(),
            Asym::pow(1.0, qi(1), qi(0)),
            Asym::Zero,
            vec![],
        );
        let (s, arg) = c.sup();
        assert!((s.value().unwrap() - (-1f64).exp()).abs() < 1e-12);
        assert!((arg.unwrap() - 1.0).abs() < 1e-5);
        let ts = c.tail_sup().unwrap();
        assert!((ts.eval(0.5) - (-1f64).exp()).abs() < 1e-6);
        assert!((ts.eval(2.0) - 2.0 * (-2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn reflect_maps_asymptotics() {
        let c = step_curve().reflect();
        assert_eq!(c.at0, Asym::pow(1.0, qi(2), qi(0)));
        assert_eq!(c.at_inf, Asym::constant(1.0));
        assert!((c.eval(0.5) - 0.25).abs() < 1e-15);
    }
}
