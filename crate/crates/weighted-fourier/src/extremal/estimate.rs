//! Sampled ratios `‖u f̂‖_q / ‖f v‖_p` on the line, constructive lower bounds
//! for the best constant and the bracket against the regime constant.

use super::signal::{dft, SampledSignal};
use super::ExtremalError;
use crate::criteria::{evaluate, ExponentConfig, Regime};
use crate::exponent::Exponent;
use crate::extended::ExtReal;
use crate::funcspace::{Direction, FuncError, StepFunction, WeightSpec};
use crate::quad::gauss_legendre;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_N: usize = 4096;
pub const DEFAULT_L: f64 = 64.0;
pub const DEFAULT_DRAWS: usize = 64;

/// Upper bound on `lower / upper` over everything the bracket tries; a
/// bracket with a larger quotient is reported as inconsistent.
pub const BRACKET_BAND: f64 = 8.0;

/// Default bump radius and count for the translates construction.
pub const DEFAULT_SCALE: f64 = 1.0 / 16.0;
pub const DEFAULT_BUMPS: usize = 4;

const GL_CELL: usize = 8;
const MAX_ANNULI: usize = 40;

/// Resolution of the sampled problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub n: usize,
    pub length: f64,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            n: DEFAULT_N,
            length: DEFAULT_L,
        }
    }
}

impl Resolution {
    pub fn new(n: usize, length: f64) -> Result<Resolution, ExtremalError> {
        if n < 8 || !n.is_power_of_two() {
            return Err(ExtremalError::InvalidSignal(format!("N = {n} must be a power of two >= 8")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(ExtremalError::InvalidSignal(format!("L = {length} must be > 0")));
        }
        Ok(Resolution { n, length })
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    fn halved(&self) -> Resolution {
        Resolution {
            n: self.n / 2,
            length: self.length,
        }
    }
}

/// `∫_a^b w(|x|)^r dx`, in closed form when `r` is a rational power of the profile.
struct CellPower {
    w: WeightSpec,
    r: f64,
    profile: Option<StepFunction>,
}

impl CellPower {
    fn new(w: &WeightSpec, r: f64) -> CellPower {
        let base = w.base();
        let e = match w.direction {
            Direction::RadialNonIncreasing => r,
            Direction::RadialNonDecreasing => -r,
        };
        let exact = crate::exponent::Q::approximate_float(e)
            .filter(|q| crate::exponent::qf(*q) == e)
            .map(|q| base.pow_compose(q));
        let profile = match exact {
            Some(Ok(h)) => Some(h.scale(w.scale.powf(r))),
            Some(Err(FuncError::NegativePowerOfZero)) | None => None,
            Some(Err(_)) => None,
        };
        CellPower {
            w: w.clone(),
            r,
            profile,
        }
    }

    fn radial(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        if let Some(h) = &self.profile {
            return match h.integrate(lo, hi) {
                Ok(ExtReal::Finite { value }) => value,
                _ => f64::INFINITY,
            };
        }
        let (x, wts) = gauss_legendre(GL_CELL);
        let mut s = 0.0;
        for (t, c) in x.iter().zip(&wts) {
            let r = lo + (hi - lo) * t;
            s += c * self.w.value_at(r).powf(self.r);
        }
        s * (hi - lo)
    }

    fn cell(&self, a: f64, b: f64) -> f64 {
        if a < 0.0 && b > 0.0 {
            self.radial(0.0, -a) + self.radial(0.0, b)
        } else {
            self.radial(a.abs().min(b.abs()), a.abs().max(b.abs()))
        }
    }

    fn cell_mean(&self, a: f64, b: f64) -> f64 {
        self.cell(a, b) / (b - a)
    }
}

/// Sup of `w` over the closed cell, for radial monotone weights.
fn cell_sup(w: &WeightSpec, a: f64, b: f64) -> f64 {
    let near = if a < 0.0 && b > 0.0 { 0.0 } else { a.abs().min(b.abs()) };
    let far = a.abs().max(b.abs());
    w.value_at(near).max(w.value_at(far))
}

/// The sampled problem: cell masses of `u^q` on the dual grid and `v^p` on
/// the sample grid (cell sups for an infinite exponent).
#[derive(Debug, Clone)]
pub struct Discretized {
    pub res: Resolution,
    pub p: f64,
    pub q: f64,
    u_cell: Vec<f64>,
    v_cell: Vec<f64>,
}

impl Discretized {
    pub fn new(u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig, res: Resolution) -> Result<Discretized, ExtremalError> {
        if cfg.d != 1 {
            return Err(ExtremalError::Precondition(format!(
                "sampled Fourier experiments are one-dimensional, got d = {}",
                cfg.d
            )));
        }
        let (p, q) = (cfg.p.to_f64(), cfg.q.to_f64());
        let h = res.spacing();
        let hd = 1.0 / res.length;
        let n = res.n;
        let cells = |w: &WeightSpec, r: f64, step: f64| -> Vec<f64> {
            let x0 = -0.5 * n as f64 * step;
            let cp = CellPower::new(w, if r.is_finite() { r } else { 1.0 });
            (0..n)
                .map(|j| {
                    let x = x0 + j as f64 * step;
                    let (a, b) = (x - 0.5 * step, x + 0.5 * step);
                    if r.is_finite() {
                        cp.cell(a, b)
                    } else {
                        cell_sup(w, a, b)
                    }
                })
                .collect()
        };
        Ok(Discretized {
            res,
            p,
            q,
            u_cell: cells(u, q, hd),
            v_cell: cells(v, p, h),
        })
    }

    fn check(&self, f: &SampledSignal) -> Result<(), ExtremalError> {
        if f.len() != self.res.n || (f.length - self.res.length).abs() > 1e-12 * self.res.length {
            return Err(ExtremalError::InvalidSignal(format!(
                "signal has N = {}, L = {}; expected N = {}, L = {}",
                f.len(),
                f.length,
                self.res.n,
                self.res.length
            )));
        }
        Ok(())
    }

    /// `‖f v‖_p` on the sample grid.
    pub fn denominator(&self, f: &SampledSignal) -> f64 {
        weighted(&f.samples, &self.v_cell, self.p)
    }

    /// `‖u f̂‖_q` on the dual grid.
    pub fn numerator(&self, f: &SampledSignal) -> f64 {
        weighted(&dft(f).samples, &self.u_cell, self.q)
    }

    pub fn ratio(&self, f: &SampledSignal) -> Result<f64, ExtremalError> {
        self.check(f)?;
        let den = self.denominator(f);
        if !(den > 0.0) {
            return Err(ExtremalError::ZeroDenominator);
        }
        Ok(self.numerator(f) / den)
    }
}

fn weighted(z: &[Complex64], mass: &[f64], r: f64) -> f64 {
    if r.is_infinite() {
        return z
            .iter()
            .zip(mass)
            .map(|(z, m)| {
                let a = z.norm();
                if a == 0.0 {
                    0.0
                } else {
                    a * m
                }
            })
            .fold(0.0, f64::max);
    }
    let s: f64 = z
        .iter()
        .zip(mass)
        .map(|(z, m)| {
            let a = z.norm();
            if a == 0.0 {
                0.0
            } else {
                a.powf(r) * m
            }
        })
        .sum();
    s.powf(1.0 / r)
}

/// `‖u f̂‖_q / ‖f v‖_p` at the signal's resolution (`d = 1`).
pub fn ratio(f: &SampledSignal, u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig) -> Result<f64, ExtremalError> {
    let res = Resolution::new(f.len(), f.length)?;
    Discretized::new(u, v, cfg, res)?.ratio(f)
}

/// Per-task RNG stream from a root seed.
fn stream(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

fn signs(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect()
}

/// Max of `ratio` over the all-plus vector and `restarts` random sign vectors.
fn best_over_signs<F>(build: F, m: usize, restarts: usize, seed: u64, prob: &Discretized) -> Result<f64, ExtremalError>
where
    F: Fn(&[f64]) -> Result<SampledSignal, ExtremalError> + Sync,
{
    let ones = vec![1.0; m];
    let first = prob.ratio(&build(&ones)?)?;
    let rest: Result<Vec<f64>, ExtremalError> = (0..restarts as u64)
        .into_par_iter()
        .map(|k| {
            let eps = signs(&mut stream(seed, k), m);
            prob.ratio(&build(&eps)?)
        })
        .collect();
    Ok(rest?.into_iter().fold(first, f64::max))
}

/// Samples of `Σ c_k v^{-p'} 1_{[lo_k, hi_k]}(|x - x_k|)`, with cell means of
/// `v^{-p'}` and half weight on cells cut by an endpoint.
fn packed(
    v: &WeightSpec,
    pc: f64,
    res: Resolution,
    pieces: &[(f64, f64, f64, f64)],
) -> Result<SampledSignal, ExtremalError> {
    let h = res.spacing();
    let cp = CellPower::new(v, -pc);
    let tol = 1e-9 * h;
    SampledSignal::from_fn(res.n, res.length, |x| {
        let mut acc = 0.0;
        for &(centre, lo, hi, c) in pieces {
            let r = (x - centre).abs();
            let ind = if (r - lo).abs() <= tol && lo > 0.0 || (r - hi).abs() <= tol {
                0.5
            } else if r > lo && r < hi || lo == 0.0 && r == 0.0 {
                1.0
            } else {
                0.0
            };
            if ind > 0.0 && c != 0.0 {
                let m = if pc.is_infinite() { 1.0 } else { cp.cell_mean(x - 0.5 * h, x + 0.5 * h) };
                acc += ind * c * m;
            }
        }
        Complex64::new(acc, 0.0)
    })
}

fn conj_f64(cfg: &ExponentConfig) -> f64 {
    cfg.p_conj().to_f64()
}

/// Translated bumps `f = v^{-p'} Σ ε_n λ_n 1_{[0,s]}(|x - c_n|)` with
/// centres `c_n` spaced `2s` apart around the origin and `λ_n = V_n^{1/(p-2)}`,
/// `V_n = ∫_{|x - c_n| < s} v^{-p'}`. Returns the best ratio over random signs.
#[allow(clippy::too_many_arguments)]
pub fn lower_bound_translates(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
    res: Resolution,
    s: f64,
    m: usize,
    restarts: usize,
    seed: u64,
) -> Result<f64, ExtremalError> {
    if !Exponent::from_int(2).lt(&cfg.p) {
        return Err(ExtremalError::Precondition(format!(
            "the translates construction needs p > 2, got p = {}",
            cfg.p
        )));
    }
    if m == 0 || !(s > 0.0) {
        return Err(ExtremalError::Precondition("need s > 0 and at least one bump".into()));
    }
    let reach = (2 * m - 1) as f64 * s;
    if reach > 0.45 * res.length {
        return Err(ExtremalError::Precondition(format!(
            "{m} bumps of radius {s} do not fit in the window of length {}",
            res.length
        )));
    }
    let prob = Discretized::new(u, v, cfg, res)?;
    let pc = conj_f64(cfg);
    let cp = CellPower::new(v, -pc);
    let centres: Vec<f64> = (0..m).map(|n| 2.0 * s * (n as f64 - 0.5 * (m - 1) as f64)).collect();
    let lambdas: Vec<f64> = centres
        .iter()
        .map(|c| {
            if cfg.p.is_infinite() {
                1.0
            } else {
                let vn = cp.cell(c - s, c + s);
                vn.powf(1.0 / (cfg.p.to_f64() - 2.0))
            }
        })
        .collect();
    best_over_signs(
        |eps| {
            let pieces: Vec<(f64, f64, f64, f64)> = centres
                .iter()
                .zip(&lambdas)
                .zip(eps)
                .map(|((c, l), e)| (*c, 0.0, s, e * l))
                .collect();
            packed(v, pc, res, &pieces)
        },
        m,
        restarts,
        seed,
        &prob,
    )
}

/// Radii `α_0 = cutoff > α_1 > ...` with `∫_{|x| < α_n} v^{-p'} = 2^{-n} ∫_{|x| < cutoff} v^{-p'}`,
/// stopping at `max` annuli or below two sample spacings.
pub fn annulus_radii(v: &WeightSpec, cfg: &ExponentConfig, cutoff: f64, max: usize, floor: f64) -> Result<Vec<f64>, ExtremalError> {
    let pc = conj_f64(cfg);
    if pc.is_infinite() {
        return Err(ExtremalError::Precondition("annuli need p > 1".into()));
    }
    let cp = CellPower::new(v, -pc);
    let mass = |r: f64| cp.radial(0.0, r);
    let total = mass(cutoff);
    if !total.is_finite() || !(total > 0.0) {
        return Err(ExtremalError::Precondition(format!(
            "mass equation unsolvable: ∫_(|x|<{cutoff}) v^(-p') = {total}"
        )));
    }
    let mut radii = vec![cutoff];
    for n in 1..=max {
        let target = total * 0.5f64.powi(n as i32);
        let (mut lo, mut hi) = (0.0, *radii.last().unwrap());
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mass(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = 0.5 * (lo + hi);
        if !(a > 0.0) || mass(a) <= 0.0 {
            return Err(ExtremalError::Precondition("mass equation unsolvable: v^(-p') has no mass near 0".into()));
        }
        if a < floor {
            break;
        }
        radii.push(a);
    }
    Ok(radii)
}

/// Annuli `f = Σ ε_n λ_n v^{-p'} 1_{[α_n, α_{n-1}]}(|x|)` with `λ_n` from the
/// discrete Hardy extremal: `λ_n^p W_n = ΔU_n U_n^{r/p} W_n^{r/p'}`, where `U_n`
/// is the `u^q` mass of `|ξ| < 1/(2π α_{n-1})` and `ΔU_n` that of the shell
/// `1/(2π α_{n-2}) ≤ |ξ| < 1/(2π α_{n-1})`.
#[allow(clippy::too_many_arguments)]
pub fn lower_bound_annuli(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
    res: Resolution,
    cutoff: f64,
    annuli: usize,
    restarts: usize,
    seed: u64,
) -> Result<f64, ExtremalError> {
    if !cfg.q.lt(&cfg.p) {
        return Err(ExtremalError::Precondition(format!(
            "the annuli construction needs q < p, got p = {}, q = {}",
            cfg.p, cfg.q
        )));
    }
    if !(cutoff > 0.0) || cutoff > 0.45 * res.length {
        return Err(ExtremalError::Precondition(format!(
            "cutoff {cutoff} must lie in (0, 0.45 L]"
        )));
    }
    let prob = Discretized::new(u, v, cfg, res)?;
    let pc = conj_f64(cfg);
    let radii = annulus_radii(v, cfg, cutoff, annuli.clamp(1, MAX_ANNULI), 2.0 * res.spacing())?;
    let k = radii.len() - 1;
    if k == 0 {
        return Err(ExtremalError::Precondition("no annulus above the sample spacing".into()));
    }
    let lambdas: Vec<f64> = match (cfg.p.value(), cfg.q.value()) {
        (Some(_), Some(_)) => {
            let (p, q) = (cfg.p.to_f64(), cfg.q.to_f64());
            let r = 1.0 / (1.0 / q - 1.0 / p);
            let uq = CellPower::new(u, q);
            let cv = CellPower::new(v, -pc);
            let umass = |rad: f64| if rad.is_infinite() { f64::INFINITY } else { 2.0 * uq.radial(0.0, rad) };
            (1..=k)
                .map(|n| {
                    let outer = radii[n - 1];
                    let w = 2.0 * (cv.radial(0.0, outer) - cv.radial(0.0, radii[n]));
                    let big_u = umass(1.0 / (2.0 * PI * outer));
                    let prev = if n >= 2 { umass(1.0 / (2.0 * PI * radii[n - 2])) } else { 0.0 };
                    let du = big_u - prev;
                    let a = du * big_u.powf(r / p) * w.powf(r / pc);
                    let l = (a / w).powf(1.0 / p);
                    if l.is_finite() {
                        l
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        _ => vec![1.0; k],
    };
    let lambdas = if lambdas.iter().all(|l| *l == 0.0) { vec![1.0; k] } else { lambdas };
    best_over_signs(
        |eps| {
            let pieces: Vec<(f64, f64, f64, f64)> = (1..=k)
                .map(|n| (0.0, radii[n], radii[n - 1], eps[n - 1] * lambdas[n - 1]))
                .collect();
            packed(v, pc, res, &pieces)
        },
        k,
        restarts,
        seed,
        &prob,
    )
}

/// `f = v^{-p'} e^{2πi ξ_0 x}` with `ξ_0` the dual grid point maximizing `u`
/// (a narrow bump at the maximum of `1/v` when `p = 1`).
pub fn phase_witness(u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig, res: Resolution) -> Result<f64, ExtremalError> {
    let prob = Discretized::new(u, v, cfg, res)?;
    let hd = 1.0 / res.length;
    let k0 = (0..res.n)
        .max_by(|a, b| {
            let ua = u.value_at(((*a as f64) - 0.5 * res.n as f64).abs() * hd);
            let ub = u.value_at(((*b as f64) - 0.5 * res.n as f64).abs() * hd);
            ua.partial_cmp(&ub).unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    let xi0 = (k0 as f64 - 0.5 * res.n as f64) * hd;
    let pc = conj_f64(cfg);
    let h = res.spacing();
    let base = if pc.is_infinite() {
        packed(v, pc, res, &[(0.0, 0.0, h, 1.0)])?
    } else {
        packed(v, pc, res, &[(0.0, 0.0, 0.5 * res.length, 1.0)])?
    };
    let f = SampledSignal::from_fn(res.n, res.length, |x| {
        let j = ((x + 0.5 * res.length) / h).round() as usize;
        base.samples[j.min(res.n - 1)] * Complex64::from_polar(1.0, 2.0 * PI * xi0 * x)
    })?;
    prob.ratio(&f)
}

/// Budget for `bracket_constant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub res: Resolution,
    /// Random band-limited signals.
    pub draws: usize,
    /// Random sign vectors per construction.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            res: Resolution::default(),
            draws: DEFAULT_DRAWS,
            restarts: DEFAULT_DRAWS,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    pub detail: String,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantBracket {
    pub lower: f64,
    pub upper: ExtReal,
    /// Name of the constant used as `upper`.
    pub upper_name: String,
    pub regime: Regime,
    /// `upper / lower`.
    pub ratio: ExtReal,
    /// `lower` recomputed at `N/2`.
    pub lower_half: f64,
    /// `|lower - lower_half| / lower`.
    pub resolution_delta: f64,
    pub band: f64,
    /// `lower ≤ band · upper`.
    pub consistent: bool,
    pub witnesses: Vec<Witness>,
}

/// Regime constant used as the upper end: the first infinite required
/// constant if the criterion fails, otherwise the regime's main constant.
pub fn regime_upper(u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig) -> Result<(Regime, String, ExtReal), ExtremalError> {
    let report = evaluate(u, v, cfg).map_err(|e| ExtremalError::Precondition(e.to_string()))?;
    let main = match report.regime {
        Regime::I => "C3",
        Regime::II => "C4",
        Regime::III => "C5",
        Regime::IV => "C7",
        Regime::V => "C8",
        Regime::DegenerateQInf | Regime::DegenerateP1 => "Cdeg",
    };
    for name in report.regime.required() {
        if let Some(c) = report.constants.get(*name) {
            if !c.is_finite() {
                return Ok((report.regime, name.to_string(), c.clone()));
            }
        }
    }
    let c = report
        .constants
        .get(main)
        .cloned()
        .unwrap_or_else(|| ExtReal::indeterminate(format!("{main} missing")));
    Ok((report.regime, main.to_string(), c))
}

fn witnesses(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
    budget: &Budget,
    res: Resolution,
) -> Result<Vec<Witness>, ExtremalError> {
    let prob = Discretized::new(u, v, cfg, res)?;
    let mut out = Vec::new();
    let batch = SampledSignal::random_batch(budget.draws, res.n, res.length, budget.seed)?;
    let best = batch
        .par_iter()
        .map(|f| prob.ratio(f).unwrap_or(0.0))
        .reduce(|| 0.0, f64::max);
    out.push(Witness {
        kind: "random".into(),
        detail: format!("{} wave-packet signals", budget.draws),
        ratio: best,
    });
    let dual = 1.0 / res.length;
    for s in [0.125, 0.5, 2.0] {
        if Exponent::from_int(2).lt(&cfg.p) && s >= 2.0 * res.spacing() {
            let m = ((0.45 * res.length / s + 1.0) / 2.0).floor().clamp(1.0, 16.0) as usize;
            if let Ok(r) = lower_bound_translates(u, v, cfg, res, s, m, budget.restarts, budget.seed ^ 0x7472) {
                out.push(Witness {
                    kind: "translates".into(),
                    detail: format!("s = {s}, {m} bumps"),
                    ratio: r,
                });
            }
        }
    }
    if cfg.q.lt(&cfg.p) {
        for cutoff in [1.0, 4.0, 16.0] {
            if cutoff <= 0.45 * res.length && cutoff > 4.0 * dual.max(res.spacing()) {
                if let Ok(r) = lower_bound_annuli(u, v, cfg, res, cutoff, MAX_ANNULI, budget.restarts, budget.seed ^ 0x616e) {
                    out.push(Witness {
                        kind: "annuli".into(),
                        detail: format!("cutoff {cutoff}"),
                        ratio: r,
                    });
                }
            }
        }
    }
    if let Ok(r) = phase_witness(u, v, cfg, res) {
        out.push(Witness {
            kind: "phase".into(),
            detail: "v^(-p') modulated to the maximum of u".into(),
            ratio: r,
        });
    }
    Ok(out)
}

/// Lower bound from sampled test functions and the regime constant as upper end.
pub fn bracket_constant(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
    budget: &Budget,
) -> Result<ConstantBracket, ExtremalError> {
    let (regime, upper_name, upper) = regime_upper(u, v, cfg)?;
    let ws = witnesses(u, v, cfg, budget, budget.res)?;
    let lower = ws.iter().map(|w| w.ratio).filter(|r| r.is_finite()).fold(0.0, f64::max);
    let lower_half = witnesses(u, v, cfg, budget, budget.res.halved())?
        .iter()
        .map(|w| w.ratio)
        .filter(|r| r.is_finite())
        .fold(0.0, f64::max);
    let resolution_delta = if lower > 0.0 { (lower - lower_half).abs() / lower } else { 0.0 };
    let ratio = match &upper {
        ExtReal::Finite { value } if lower > 0.0 => ExtReal::finite(value / lower),
        ExtReal::Finite { .. } => ExtReal::infinite("lower bound is zero"),
        other => other.clone(),
    };
    let consistent = match upper.value() {
        Some(c) => lower <= BRACKET_BAND * c,
        None => true,
    };
    Ok(ConstantBracket {
        lower,
        upper,
        upper_name,
        regime,
        ratio,
        lower_half,
        resolution_delta,
        band: BRACKET_BAND,
        consistent,
        witnesses: ws,
    })
}
