//! Weighted Hardy inequalities: characterization constants and a
//! brute-force lower bound for the best constant.
//!
//! * `HeadSum`: `(Σ u_n (Σ_{j≥n} x_j)^𝔮)^{1/𝔮} ≤ K (Σ v_n x_n^𝔭)^{1/𝔭}`
//! * `HeadIntegral`: `(∫ u (∫_0^x g)^𝔮)^{1/𝔮} ≤ K (∫ v g^𝔭)^{1/𝔭}`
//! * `TailIntegral`: `(∫ u (∫_x^∞ g)^𝔮)^{1/𝔮} ≤ K (∫ v g^𝔭)^{1/𝔭}`
//! * `Reverse`: `(∫ f^𝔮 w)^{1/𝔮} ≤ K sup_x (ν(x)/x) ∫_0^x f` over
//!   non-increasing `f`; here `u` holds `w` and `v` holds `ν`.
//!
//! With `𝔭 = ∞` the right side is `sup v g`; with `𝔭 = 1` the factor
//! `(∫ v^{1/(1-𝔭)})^{1/𝔭'}` becomes the essential supremum of `1/v`.
//! Sequences are step functions on unit cells, `x_n` living on `[n-1, n)`.

use crate::exponent::{qf, Exponent, Q};
use crate::extended::ExtReal;
use crate::funcspace::{Curve, CurveError, End, Form, FuncError, Grid, StepFunction, TailSpec};
use crate::quad;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Random restarts used by `brute_force_K`.
pub const RESTARTS: usize = 32;
/// Explicit terms of `Σ_{j≥n} v_j^{1/(1-𝔭)}` before the integral tail.
const DISCRETE_EXPLICIT: usize = 20_000;
const GL_NODES: usize = 32;
/// Nodes on short cells away from the origin, where `u` is smooth.
const GL_NODES_SHORT: usize = 8;
/// Subdivisions per cell when bounding `sup ν(x) F(x) / x` from above.
const REVERSE_SUB: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HardyKind {
    HeadSum,
    TailIntegral,
    HeadIntegral,
    Reverse,
}

impl FromStr for HardyKind {
    type Err = HardyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "headsum" | "discrete" | "sum" => Ok(HardyKind::HeadSum),
            "tailintegral" | "tail" => Ok(HardyKind::TailIntegral),
            "headintegral" | "head" => Ok(HardyKind::HeadIntegral),
            "reverse" => Ok(HardyKind::Reverse),
            _ => Err(HardyError::InvalidInput(format!("unknown Hardy kind `{s}`"))),
        }
    }
}

impl fmt::Display for HardyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HardyError {
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("inadmissible weight: {0}")]
    Inadmissible(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Func(#[from] FuncError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyProblem {
    pub kind: HardyKind,
    pub u: StepFunction,
    pub v: StepFunction,
    pub p: Exponent,
    pub q: Exponent,
}

impl HardyProblem {
    pub fn new(
        kind: HardyKind,
        u: StepFunction,
        v: StepFunction,
        p: Exponent,
        q: Exponent,
    ) -> Result<HardyProblem, HardyError> {
        if q.is_infinite() {
            return Err(HardyError::InvalidExponent("𝔮 must be finite".into()));
        }
        match kind {
            HardyKind::HeadSum => {
                if !u.has_zero_tail() {
                    return Err(HardyError::InvalidInput(
                        "the sequence u must be finitely supported".into(),
                    ));
                }
            }
            HardyKind::HeadIntegral | HardyKind::TailIntegral => {
                if p.inv() > Q::one() {
                    return Err(HardyError::InvalidExponent(format!(
                        "integral forms need 𝔭 >= 1, got {p}"
                    )));
                }
            }
            HardyKind::Reverse => {
                if q.inv() <= Q::one() {
                    return Err(HardyError::InvalidExponent(format!(
                        "reverse form needs 𝔮 < 1, got {q}"
                    )));
                }
                check_nu(&v)?;
            }
        }
        Ok(HardyProblem { kind, u, v, p, q })
    }

    /// A finite sequence `(a_1, ..., a_n)` as a step function on unit cells.
    pub fn sequence(values: &[f64]) -> Result<StepFunction, FuncError> {
        HardyProblem::sequence_with_tail(values, TailSpec::Zero)
    }

    /// As `sequence`, continued past `n` by `tail`.
    pub fn sequence_with_tail(values: &[f64], tail: TailSpec) -> Result<StepFunction, FuncError> {
        let grid = Grid::new((0..=values.len()).map(|i| i as f64).collect())?;
        StepFunction::new(grid, values.to_vec(), tail)
    }
}

fn entry(f: &StepFunction, n: usize) -> f64 {
    f.eval(n as f64 - 0.5)
}

fn vanishes(f: &StepFunction) -> bool {
    f.total() == ExtReal::zero()
}

/// `1/ν` and `ν(t)/t` both non-increasing, `ν > 0`.
fn check_nu(nu: &StepFunction) -> Result<(), HardyError> {
    if !nu.is_nondecreasing() {
        return Err(HardyError::Inadmissible("ν must be non-decreasing".into()));
    }
    let forms = nu.forms();
    let mut prev: Option<(f64, f64)> = None;
    for (lo, hi, form) in &forms {
        let a = if *lo > 0.0 { *lo } else { hi.min(1.0) * 1e-9 };
        let b = if hi.is_finite() { *hi } else { lo.max(1.0) * 1e9 };
        let mut last = f64::INFINITY;
        for k in 0..=64 {
            let t = a * (b / a).powf(k as f64 / 64.0);
            let t = if k == 64 && hi.is_finite() { t * (1.0 - 1e-12) } else { t };
            let val = form.value(t);
            if !(val > 0.0) {
                return Err(HardyError::Inadmissible(format!("ν vanishes near t = {t}")));
            }
            let ratio = val / t;
            if ratio > last * (1.0 + 1e-10) {
                return Err(HardyError::Inadmissible(format!(
                    "ν(t)/t increases near t = {t}"
                )));
            }
            last = ratio;
        }
        if let Some((t, left)) = prev {
            let right = form.value(t);
            if right > left * (1.0 + 1e-10) {
                return Err(HardyError::Inadmissible(format!("ν jumps up at t = {t}")));
            }
        }
        if hi.is_finite() {
            prev = Some((*hi, form.value(*hi * (1.0 - 1e-15))));
        }
    }
    Ok(())
}

/// `v^e` with zero cells mapped to zero, and the intervals where `v = 0`.
fn inv_power(v: &StepFunction, e: Q) -> Result<(StepFunction, Vec<(f64, f64)>), HardyError> {
    let ef = qf(e);
    let lead = v.lead().map(|p| p.pow(e));
    let mut blocked = Vec::new();
    let pts = v.grid().points();
    let values = v
        .values()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if i == 0 && lead.is_some() {
                c
            } else if c == 0.0 {
                blocked.push((pts[i], pts[i + 1]));
                0.0
            } else {
                c.powf(ef)
            }
        })
        .collect();
    if v.tail().is_none() {
        blocked.push((v.grid().last(), f64::INFINITY));
    }
    let tail = v.tail().map(|p| p.pow(e));
    Ok((
        StepFunction::from_parts(v.grid().clone(), values, lead, tail)?,
        blocked,
    ))
}

fn diverges(e: CurveError) -> ExtReal {
    ExtReal::infinite(e.to_string())
}

/// The characterization constant of `prob`.
#[allow(non_snake_case)]
pub fn hardy_K(prob: &HardyProblem) -> Result<ExtReal, HardyError> {
    match prob.kind {
        HardyKind::Reverse => reverse_hardy_K(&prob.u, &prob.v, prob.q),
        HardyKind::HeadSum => discrete_k(prob),
        HardyKind::HeadIntegral => continuous_k(prob, true),
        HardyKind::TailIntegral => continuous_k(prob, false),
    }
}

fn continuous_k(prob: &HardyProblem, head: bool) -> Result<ExtReal, HardyError> {
    let (u, v, p, q) = (&prob.u, &prob.v, prob.p, prob.q);
    if vanishes(u) {
        return Ok(ExtReal::zero());
    }
    let pinv = p.inv();
    let e = if pinv.is_zero() || pinv == Q::one() {
        -Q::one()
    } else {
        pinv / (pinv - Q::one())
    };
    let (weight, blocked) = inv_power(v, e)?;
    for (a, b) in blocked {
        let mass = if head { u.integrate(a, f64::INFINITY)? } else { u.integrate(0.0, b)? };
        if mass != ExtReal::zero() {
            return Ok(ExtReal::infinite(format!(
                "v vanishes on [{a}, {b}) and u carries mass on the {} side",
                if head { "right" } else { "left" }
            )));
        }
    }
    let factor = if pinv == Q::one() {
        let inv = weight.to_curve();
        let sup = if head {
            inv.reflect().tail_sup().map(|c| c.reflect())
        } else {
            inv.tail_sup()
        };
        match sup {
            Ok(c) => c,
            Err(e) => return Ok(diverges(e)),
        }
    } else {
        let base = if head { weight.primitive() } else { weight.tail_primitive() };
        match base {
            Ok(c) if pinv.is_zero() => c,
            Ok(c) => c.powq(Q::one() - pinv),
            Err(e) => return Ok(diverges(e)),
        }
    };
    let mass = match if head { u.tail_primitive() } else { u.primitive() } {
        Ok(c) => c,
        Err(e) => return Ok(diverges(e)),
    };
    if p.le(&q) {
        let prod = mass.powq(q.inv()).mul(&factor);
        return Ok(prod.sup().0);
    }
    let rinv = q.inv() - pinv;
    let mut integrand = u.to_curve().mul(&factor.powq(Q::one() / rinv));
    if !pinv.is_zero() {
        integrand = integrand.mul(&mass.powq(pinv / rinv));
    }
    Ok(integrand.integral().powf(qf(rinv)))
}

fn discrete_k(prob: &HardyProblem) -> Result<ExtReal, HardyError> {
    let (u, v, p, q) = (&prob.u, &prob.v, prob.p, prob.q);
    let nu = u.grid().last().ceil() as usize;
    let us: Vec<f64> = (1..=nu).map(|n| entry(u, n)).collect();
    if us.iter().all(|x| *x == 0.0) {
        return Ok(ExtReal::zero());
    }
    let mut big_u = Vec::with_capacity(nu + 1);
    let mut acc = 0.0;
    for &x in &us {
        acc += x;
        big_u.push(acc);
    }
    let n_exp = nu.max(v.grid().last().ceil() as usize) + DISCRETE_EXPLICIT;
    let pinv = p.inv();
    let qinv = q.inv();
    // fac[n-1] is the v-factor at index n, for n = 1..=nu+1
    let (fac, fac_exp) = if pinv >= Q::one() {
        // inf_{j≥n} v_j
        let mut tail_inf = match v.tail() {
            None => 0.0,
            Some(pc) => {
                let lim = pc.asym(End::Inf).limit(End::Inf).unwrap_or(f64::INFINITY);
                pc.value(n_exp as f64 + 0.5).min(lim)
            }
        };
        let mut fac = vec![0.0; nu + 1];
        for j in (1..=n_exp).rev() {
            tail_inf = tail_inf.min(entry(v, j));
            if j <= nu + 1 {
                fac[j - 1] = tail_inf;
            }
        }
        (fac, -pinv)
    } else {
        let e = if pinv.is_zero() { -Q::one() } else { pinv / (pinv - Q::one()) };
        let (weight, blocked) = inv_power(v, e)?;
        let ef = qf(e);
        let mut t = if blocked.iter().any(|(_, b)| *b > n_exp as f64) {
            f64::INFINITY
        } else {
            weight.integrate(n_exp as f64, f64::INFINITY)?.to_f64()
        };
        let mut fac = vec![0.0; nu + 1];
        for j in (1..=n_exp).rev() {
            let vj = entry(v, j);
            t += if vj == 0.0 { f64::INFINITY } else { vj.powf(ef) };
            if j <= nu + 1 {
                fac[j - 1] = t;
            }
        }
        (fac, Q::one() - pinv)
    };
    // the factor enters as fac^{fac_exp}: (Σ v^{1/(1-𝔭)})^{1/𝔭'} or (inf v)^{-1/𝔭}
    let ff = |x: f64, scale: Q| -> f64 {
        let e = qf(fac_exp * scale);
        if x == 0.0 {
            if e < 0.0 {
                f64::INFINITY
            } else if e == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            x.powf(e)
        }
    };
    if p.le(&q) {
        let mut best = 0.0f64;
        for n in 1..=nu + 1 {
            let un = big_u[(n - 1).min(nu - 1)];
            if un == 0.0 {
                continue;
            }
            best = best.max(un.powf(qf(qinv)) * ff(fac[n - 1], Q::one()));
        }
        return Ok(ExtReal::from_f64(best, "v-factor is infinite where u has mass"));
    }
    let rinv = qinv - pinv;
    let r = Q::one() / rinv;
    let mut sum = 0.0;
    for n in 1..=nu {
        if us[n - 1] == 0.0 {
            continue;
        }
        sum += us[n - 1] * big_u[n - 1].powf(qf(pinv * r)) * ff(fac[n - 1], r);
    }
    Ok(ExtReal::from_f64(sum, "v-factor is infinite where u has mass").powf(qf(rinv)))
}

/// `K₂ = (∫ ν^{-𝔮} ξ^{-𝔮/(1-𝔮)} W^{𝔮/(1-𝔮)} w)^{1/𝔮}` with `W = ∫_0^t w` and
/// `ξ(t) = t^𝔮 (∫_t^∞ s^{-1/(1-𝔮)} W^{1/(1-𝔮)} ds)^{1-𝔮}`.
#[allow(non_snake_case)]
pub fn reverse_hardy_K(w: &StepFunction, nu: &StepFunction, q: Exponent) -> Result<ExtReal, HardyError> {
    let qv = match q.value() {
        Some(x) if x < Q::one() => x,
        _ => {
            return Err(HardyError::InvalidExponent(format!(
                "reverse form needs 𝔮 < 1, got {q}"
            )))
        }
    };
    check_nu(nu)?;
    if vanishes(w) {
        return Ok(ExtReal::zero());
    }
    let s = Q::one() / (Q::one() - qv);
    let big_w = match w.primitive() {
        Ok(c) => c,
        Err(e) => return Ok(diverges(e)),
    };
    let inner = Curve::identity_power(-s).mul(&big_w.powq(s));
    let tail = match inner.tail_integral() {
        Ok(c) => c,
        Err(e) => return Ok(ExtReal::infinite(format!("ξ ≡ ∞: {e}"))),
    };
    let integrand = nu
        .to_curve()
        .powq(-qv)
        .mul(&Curve::identity_power(-qv * qv * s))
        .mul(&tail.powq(-qv))
        .mul(&big_w.powq(qv * s))
        .mul(&w.to_curve());
    Ok(integrand.integral().powf(qf(Q::one() / qv)))
}

/// Left side of one cell, `∫ u (G_a + (G_b - G_a)θ)^𝔮`.
enum CellU {
    Const { c: f64, len: f64 },
    Nodes { theta: Vec<f64>, weight: Vec<f64> },
}

/// Mean of `(g0 + (g1 - g0)θ)^q` over `θ ∈ [0, 1]`.
fn lin_pow_mean(g0: f64, g1: f64, q: f64) -> f64 {
    let d = g1 - g0;
    if d.abs() <= 1e-7 * g0.abs().max(g1.abs()) {
        let m = 0.5 * (g0 + g1);
        return m.powf(q) * (1.0 + q * (q - 1.0) * d * d / (24.0 * m * m));
    }
    (g1.powf(q + 1.0) - g0.powf(q + 1.0)) / ((q + 1.0) * d)
}

impl CellU {
    fn build(form: &Form, a: f64, b: f64) -> CellU {
        match form {
            Form::Const(c) => CellU::Const { c: *c, len: b - a },
            Form::Analytic(pc) => {
                let n = if a > 0.0 && b <= 4.0 * a { GL_NODES_SHORT } else { GL_NODES };
                let (zs, ws) = quad::gauss_legendre(n);
                let mut theta = Vec::with_capacity(n);
                let mut weight = Vec::with_capacity(n);
                if a == 0.0 {
                    let ae = qf(pc.a);
                    let kappa = if ae < 1.0 { (1.0 / (1.0 - ae)).clamp(1.0, 20.0) } else { 4.0 };
                    for (z, wz) in zs.iter().zip(&ws) {
                        let x = b * z.powf(kappa);
                        theta.push(x / b);
                        weight.push(wz * pc.value(x) * b * kappa * z.powf(kappa - 1.0));
                    }
                } else {
                    let (la, lb) = (a.ln(), b.ln());
                    for (z, wz) in zs.iter().zip(&ws) {
                        let x = (la + (lb - la) * z).exp();
                        theta.push((x - a) / (b - a));
                        weight.push(wz * pc.value(x) * x * (lb - la));
                    }
                }
                CellU::Nodes { theta, weight }
            }
        }
    }

    fn integral(&self, g0: f64, g1: f64, q: f64) -> f64 {
        match self {
            CellU::Const { c, len } => {
                if *c == 0.0 || (g0 == 0.0 && g1 == 0.0) {
                    0.0
                } else {
                    c * len * lin_pow_mean(g0, g1, q)
                }
            }
            CellU::Nodes { theta, weight } => theta
                .iter()
                .zip(weight)
                .map(|(t, w)| w * (g0 + (g1 - g0) * t).powf(q))
                .sum(),
        }
    }
}

fn cell_sup(form: &Form, a: f64, b: f64) -> f64 {
    match form {
        Form::Const(c) => *c,
        Form::Analytic(pc) => {
            let left = if a > 0.0 {
                pc.value(a)
            } else {
                pc.asym(End::Zero).limit(End::Zero).unwrap_or(f64::INFINITY)
            };
            left.max(pc.value(b))
        }
    }
}

/// The discretized problem `brute_force_K` optimizes over.
enum Model {
    Continuous {
        head: bool,
        len: Vec<f64>,
        cells: Vec<CellU>,
        beyond: f64,
        vm: Vec<f64>,
        p: f64,
        q: f64,
        vbar: Vec<f64>,
    },
    Discrete {
        u: Vec<f64>,
        v: Vec<f64>,
        p: f64,
        q: f64,
    },
    Reverse {
        wm: Vec<f64>,
        edges: Vec<f64>,
        nu_sub: Vec<Vec<f64>>,
        q: f64,
    },
}

fn pf(e: Exponent) -> f64 {
    e.to_f64()
}

impl Model {
    fn build(prob: &HardyProblem, grid: &Grid) -> Result<Model, HardyError> {
        let last = grid.last();
        let mut edges: Vec<f64> = grid.points().to_vec();
        match prob.kind {
            HardyKind::HeadSum => {
                let m = last.round().max(1.0) as usize;
                return Ok(Model::Discrete {
                    u: (1..=m).map(|n| entry(&prob.u, n)).collect(),
                    v: (1..=m).map(|n| entry(&prob.v, n)).collect(),
                    p: pf(prob.p),
                    q: pf(prob.q),
                });
            }
            HardyKind::Reverse => {
                edges.extend(prob.u.grid().points().iter().filter(|x| **x < last));
                edges.extend(prob.v.grid().points().iter().filter(|x| **x < last));
                sort_dedup(&mut edges);
                let mut wm = Vec::new();
                let mut nu_sub = Vec::new();
                for k in 0..edges.len() - 1 {
                    let (a, b) = (edges[k], edges[k + 1]);
                    wm.push(prob.u.integrate(a, b)?.to_f64());
                    nu_sub.push(
                        (0..=REVERSE_SUB)
                            .map(|l| {
                                let s = a + (b - a) * l as f64 / REVERSE_SUB as f64;
                                if l == 0 && a == 0.0 {
                                    0.0
                                } else {
                                    prob.v.eval(if l == REVERSE_SUB { b } else { s })
                                }
                            })
                            .collect(),
                    );
                }
                return Ok(Model::Reverse {
                    wm,
                    edges,
                    nu_sub,
                    q: pf(prob.q),
                });
            }
            _ => {}
        }
        edges.extend(prob.u.grid().points().iter().filter(|x| **x < last));
        edges.extend(prob.v.grid().points().iter().filter(|x| **x < last));
        sort_dedup(&mut edges);
        let head = prob.kind == HardyKind::HeadIntegral;
        let mut len = Vec::new();
        let mut cells = Vec::new();
        let mut vm = Vec::new();
        let mut vbar = Vec::new();
        for k in 0..edges.len() - 1 {
            let (a, b) = (edges[k], edges[k + 1]);
            let mid = 0.5 * (a + b);
            len.push(b - a);
            cells.push(CellU::build(&prob.u.form_at(mid), a, b));
            let vf = prob.v.form_at(mid);
            if prob.p.is_infinite() {
                vm.push(cell_sup(&vf, a, b));
            } else {
                vm.push(vf.integral(a, b));
            }
            vbar.push(prob.v.integrate(a, b)?.to_f64() / (b - a));
        }
        let beyond = if head {
            prob.u.integrate(last, f64::INFINITY)?.to_f64()
        } else {
            0.0
        };
        Ok(Model::Continuous {
            head,
            len,
            cells,
            beyond,
            vm,
            p: pf(prob.p),
            q: pf(prob.q),
            vbar,
        })
    }

    fn dim(&self) -> usize {
        match self {
            Model::Continuous { len, .. } => len.len(),
            Model::Discrete { u, .. } => u.len(),
            Model::Reverse { wm, .. } => wm.len(),
        }
    }

    fn ratio(&self, x: &[f64]) -> f64 {
        let (lhs, rhs) = match self {
            Model::Continuous {
                head,
                len,
                cells,
                beyond,
                vm,
                p,
                q,
                ..
            } => {
                let m = len.len();
                let mut g = vec![0.0; m + 1];
                if *head {
                    for i in 0..m {
                        g[i + 1] = g[i] + x[i] * len[i];
                    }
                } else {
                    for i in (0..m).rev() {
                        g[i] = g[i + 1] + x[i] * len[i];
                    }
                }
                let mut l: f64 = (0..m).map(|i| cells[i].integral(g[i], g[i + 1], *q)).sum();
                if *head && g[m] > 0.0 && *beyond > 0.0 {
                    l += g[m].powf(*q) * beyond;
                }
                (l.powf(1.0 / q), weighted_norm(x, vm, *p))
            }
            Model::Discrete { u, v, p, q } => {
                let mut s = 0.0;
                let mut l = 0.0;
                for n in (0..u.len()).rev() {
                    s += x[n];
                    if u[n] > 0.0 && s > 0.0 {
                        l += u[n] * s.powf(*q);
                    }
                }
                (l.powf(1.0 / q), weighted_norm(x, v, *p))
            }
            Model::Reverse {
                wm,
                edges,
                nu_sub,
                q,
            } => {
                let m = wm.len();
                let mut f = vec![0.0; m];
                let mut acc = 0.0;
                for j in (0..m).rev() {
                    acc += x[j];
                    f[j] = acc;
                }
                let l: f64 = (0..m)
                    .filter(|&j| f[j] > 0.0)
                    .map(|j| f[j].powf(*q) * wm[j])
                    .sum();
                let mut big_f = 0.0;
                let mut bound = 0.0f64;
                for j in 0..m {
                    let (a, b) = (edges[j], edges[j + 1]);
                    let h = (b - a) / REVERSE_SUB as f64;
                    for l in 0..REVERSE_SUB {
                        let s0 = a + h * l as f64;
                        let f0 = big_f + f[j] * h * l as f64;
                        let avg = if s0 == 0.0 { f[j] } else { f0 / s0 };
                        bound = bound.max(nu_sub[j][l + 1] * avg);
                    }
                    big_f += f[j] * (b - a);
                }
                let xm = edges[m];
                bound = bound.max(nu_sub[m - 1][REVERSE_SUB] * big_f / xm);
                (l.powf(1.0 / q), bound)
            }
        };
        if rhs == 0.0 {
            return if lhs > 0.0 { f64::INFINITY } else { 0.0 };
        }
        lhs / rhs
    }

    fn candidates(&self) -> Vec<Vec<f64>> {
        let m = self.dim();
        let mut out = Vec::new();
        for i in 0..m {
            let mut x = vec![0.0; m];
            x[i] = 1.0;
            out.push(x);
        }
        let profile: Vec<f64> = match self {
            Model::Continuous { vbar, p, .. } => vbar.iter().map(|v| dual_profile(*v, *p)).collect(),
            Model::Discrete { v, p, .. } => v.iter().map(|v| dual_profile(*v, *p)).collect(),
            Model::Reverse { .. } => vec![1.0; m],
        };
        for k in 1..=m {
            for base in [&profile, &vec![1.0; m]] {
                let mut head = vec![0.0; m];
                head[..k].copy_from_slice(&base[..k]);
                out.push(head);
                let mut tail = vec![0.0; m];
                tail[m - k..].copy_from_slice(&base[m - k..]);
                out.push(tail);
            }
        }
        if let Model::Continuous { len, .. } = self {
            let mids: Vec<f64> = len
                .iter()
                .scan(0.0, |a, l| {
                    let m = *a + 0.5 * l;
                    *a += l;
                    Some(m)
                })
                .collect();
            for alpha in [-0.5, 0.25, 0.5, 0.75] {
                out.push(mids.iter().map(|t| t.powf(-alpha)).collect());
            }
        }
        out
    }
}

/// `v^{1/(1-p)}`, the shape of the extremal test functions.
fn dual_profile(v: f64, p: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return 1.0;
    }
    if p.is_infinite() {
        1.0 / v
    } else if p > 1.0 {
        v.powf(1.0 / (1.0 - p))
    } else {
        1.0
    }
}

fn weighted_norm(x: &[f64], v: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return x
            .iter()
            .zip(v)
            .filter(|(x, _)| **x > 0.0)
            .map(|(x, v)| x * v)
            .fold(0.0, f64::max);
    }
    let s: f64 = x
        .iter()
        .zip(v)
        .filter(|(x, _)| **x > 0.0)
        .map(|(x, v)| v * x.powf(p))
        .sum();
    s.powf(1.0 / p)
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
}

fn golden<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
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

/// Coordinate ascent on `ratio`; each coordinate is searched on a log scale.
fn ascend(model: &Model, mut x: Vec<f64>, sweeps: usize) -> f64 {
    let m = x.len();
    let mut best = model.ratio(&x);
    if !best.is_finite() {
        return best;
    }
    for _ in 0..sweeps {
        let before = best;
        for i in 0..m {
            let scale = x.iter().cloned().fold(0.0, f64::max);
            if scale == 0.0 {
                x[i] = 1.0;
                best = model.ratio(&x);
                continue;
            }
            let old = x[i];
            let mut z = x.clone();
            let mut eval = |y: f64| {
                z[i] = scale * y.exp();
                model.ratio(&z)
            };
            let mut coarse = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for k in 0..=14 {
                let y = -21.0 + 3.0 * k as f64;
                let val = eval(y);
                if val > coarse.1 {
                    coarse = (y, val);
                }
            }
            let (y, val) = golden(&mut eval, coarse.0 - 3.0, coarse.0 + 3.0, 28);
            let (y, val) = if val >= coarse.1 { (y, val) } else { coarse };
            let mut cand = (old, best);
            if val > cand.1 {
                cand = (scale * y.exp(), val);
            }
            z[i] = 0.0;
            let zero = model.ratio(&z);
            if zero > cand.1 {
                cand = (0.0, zero);
            }
            x[i] = cand.0;
            best = cand.1;
            if !best.is_finite() {
                return best;
            }
        }
        if best <= before * (1.0 + 1e-7) {
            break;
        }
    }
    best
}

/// A lower bound for the best constant of `prob`: the largest ratio found by
/// coordinate ascent over non-negative step functions on `grid` (sequences of
/// length `grid.last()` for `HeadSum`, non-increasing step functions for
/// `Reverse`), started from structured candidates and `RESTARTS` random points.
#[allow(non_snake_case)]
pub fn brute_force_K(prob: &HardyProblem, grid: &Grid, iters: usize, seed: u64) -> f64 {
    let model = match Model::build(prob, grid) {
        Ok(m) => m,
        Err(_) => return f64::NAN,
    };
    let m = model.dim();
    if m == 0 {
        return 0.0;
    }
    let mut starts = model.candidates();
    starts.sort_by(|a, b| model.ratio(b).partial_cmp(&model.ratio(a)).unwrap_or(std::cmp::Ordering::Equal));
    let structured_best = starts.first().map(|x| model.ratio(x)).unwrap_or(0.0);
    starts.truncate(4);
    for r in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(r as u64));
        starts.push(
            (0..m)
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        0.0
                    } else {
                        rng.gen_range(-3.0f64..3.0).exp()
                    }
                })
                .collect(),
        );
    }
    let best = starts
        .into_par_iter()
        .map(|x| ascend(&model, x, iters.max(1)))
        .reduce(|| 0.0, f64::max);
    best.max(structured_best)
}
