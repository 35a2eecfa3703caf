//! Regime classification and the criterion constants for
//! `‖u f̂‖_q ≤ C ‖f v‖_p` with radial monotone weights.
//!
//! Profiles live in the measure variable: `u*` for the non-increasing weight
//! `u`, and `w = (1/v)* = 1/v_*` for the non-decreasing weight `v`. With
//! `U(t) = ∫_0^t u*^q`, `V(t) = ∫_0^t v_*^p` and
//! `ξ(t) = U(t) + t^{q/2} (∫_t^∞ u*^{q#})^{q/q#}` the constants are
//!
//! * `C3 = sup_s U(s)^{1/q} (∫_0^{1/s} w^{p'})^{1/p'}`
//! * `C4 = (∫ u*^q U^{r/p} (∫_0^{1/s} w^{p'})^{r/p'} ds)^{1/r}`
//! * `C6 = (∫ g(t) G(t)^{r/p} (∫_{1/t}^∞ w^{p#} (V w^p / y)^{-p#/2} dy)^{r/p#} dt)^{1/r}`
//! * `C7 = (∫ g(t) (∫_0^t (∫_0^{1/y} w)^2 dy)^{q/2} dt)^{1/q}`
//! * `C9 = (∫ g(t) G(t)^{r/p} sup_{y ≥ 1/t} y^{r/2} V(y)^{-r/p} dt)^{1/r}`
//!
//! where `g = u*^q U^{q#/2} ξ^{-q#/2} t^{-q/2}` and `G(t) = ∫_t^∞ g`.

use crate::exponent::{parse_rational, qf, Exponent, Q};
use crate::extended::ExtReal;
use crate::funcspace::{Curve, CurveError, Direction, End, FuncError, StepFunction, WeightSpec};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CriteriaError {
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("divergent: {0}")]
    Divergent(String),
    #[error(transparent)]
    Weight(#[from] FuncError),
}

impl From<CurveError> for CriteriaError {
    fn from(e: CurveError) -> Self {
        CriteriaError::Divergent(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentConfig {
    pub p: Exponent,
    pub q: Exponent,
    pub d: u32,
}

impl ExponentConfig {
    pub fn new(p: Exponent, q: Exponent, d: u32) -> Result<ExponentConfig, CriteriaError> {
        if p.inv() > Q::one() {
            return Err(CriteriaError::InvalidExponent(format!("p = {p} < 1")));
        }
        if d == 0 {
            return Err(CriteriaError::InvalidExponent("dimension d must be >= 1".into()));
        }
        Ok(ExponentConfig { p, q, d })
    }

    /// Parses `p` and `q` from strings such as `4/3`, `1.5` or `inf`.
    pub fn parse(p: &str, q: &str, d: u32) -> Result<ExponentConfig, CriteriaError> {
        let ex = |s: &str| -> Result<Exponent, CriteriaError> {
            s.parse::<Exponent>()
                .map_err(|e| CriteriaError::InvalidExponent(format!("`{s}`: {e}")))
        };
        ExponentConfig::new(ex(p)?, ex(q)?, d)
    }

    pub fn p_conj(&self) -> Exponent {
        self.p.conj().expect("p >= 1 by construction")
    }

    pub fn q_conj(&self) -> Option<Exponent> {
        self.q.conj()
    }

    /// `1/r = 1/q - 1/p`, defined only for `q < p`.
    pub fn r(&self) -> Option<Exponent> {
        let inv = self.q.inv() - self.p.inv();
        (inv > Q::zero()).then(|| Exponent::from_inv(inv))
    }

    pub fn p_sharp(&self) -> Exponent {
        self.p.sharp()
    }

    pub fn q_sharp(&self) -> Exponent {
        self.q.sharp()
    }
}

impl fmt::Display for ExponentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} q={} d={}", self.p, self.q, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    I,
    II,
    III,
    IV,
    V,
    DegenerateQInf,
    DegenerateP1,
}

impl Regime {
    /// Names of the constants whose finiteness decides the regime.
    pub fn required(&self) -> &'static [&'static str] {
        match self {
            Regime::I => &["C3"],
            Regime::II => &["C4"],
            Regime::III => &["TailUq#", "C4", "C6"],
            Regime::IV => &["TailUq#", "C7"],
            Regime::V => &["TailUq#", "C4", "C9"],
            Regime::DegenerateQInf | Regime::DegenerateP1 => &["Cdeg"],
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn classify(cfg: &ExponentConfig) -> Regime {
    let (p, q) = (cfg.p, cfg.q);
    let two = Exponent::from_int(2);
    let one = Exponent::from_int(1);
    if q.is_infinite() {
        return Regime::DegenerateQInf;
    }
    if p.inv() == Q::one() {
        return Regime::DegenerateP1;
    }
    if p.le(&q) {
        return Regime::I;
    }
    let pc = cfg.p_conj();
    if one.le(&q) && (two.le(&q) || two.le(&pc)) {
        return Regime::II;
    }
    if q.lt(&two) && two.lt(&p) {
        return if p.is_infinite() { Regime::IV } else { Regime::III };
    }
    // remaining: q < 1 and 1 < p <= 2
    Regime::V
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub u: String,
    pub v: String,
    pub config: ExponentConfig,
    pub regime: Regime,
    pub constants: BTreeMap<String, ExtReal>,
    pub holds: bool,
    /// False when a required constant could not be decided.
    pub determined: bool,
    pub cube_condition: ExtReal,
    pub notes: Vec<String>,
}

impl CriterionReport {
    pub fn constant(&self, name: &str) -> Option<&ExtReal> {
        self.constants.get(name)
    }
}

/// Decreasing profiles `u*` and `w = 1/v_*`, or the reason everything is infinite.
pub(crate) struct Profiles {
    pub u: StepFunction,
    pub w: StepFunction,
}

pub(crate) fn profiles(
    u: &WeightSpec,
    v: &WeightSpec,
) -> Result<Result<Profiles, ExtReal>, CriteriaError> {
    if u.direction != Direction::RadialNonIncreasing {
        return Err(CriteriaError::Precondition(format!(
            "u = {u} must be radial non-increasing"
        )));
    }
    if v.direction != Direction::RadialNonDecreasing {
        return Err(CriteriaError::Precondition(format!(
            "v = {v} must be radial non-decreasing"
        )));
    }
    if u.wrong_way() {
        return Ok(Err(ExtReal::infinite(format!("u* = ∞ for u = {u}"))));
    }
    if v.wrong_way() {
        return Ok(Err(ExtReal::infinite(format!("(1/v)* = ∞ for v = {v}"))));
    }
    Ok(Ok(Profiles {
        u: u.decreasing_profile()?,
        w: v.decreasing_profile()?,
    }))
}

fn vanishes(h: &StepFunction) -> bool {
    h.lead().is_none() && h.tail().is_none() && h.values().iter().all(|v| *v == 0.0)
}

fn inf_ext(e: CurveError) -> ExtReal {
    e.to_ext()
}

/// `s -> (∫_0^s h^e)^{1/e}`, read as `h(0+)` when `e = ∞` (h non-increasing).
pub(crate) fn head_norm(h: &StepFunction, e: Exponent) -> Result<Curve, CurveError> {
    match e.value() {
        None => match h.asym(End::Zero).limit(End::Zero) {
            Some(l) => Ok(Curve::constant(l)),
            None => Err(CurveError::Divergent("sup-norm of an unbounded profile".into())),
        },
        Some(ev) => {
            let hp = h
                .pow_compose(ev)
                .expect("positive powers are always defined");
            Ok(hp.primitive()?.powq(e.inv()))
        }
    }
}

/// `(∫_0^∞ h^e)^{1/e}`, or `h(0+)` for `e = ∞`.
pub(crate) fn full_norm(h: &StepFunction, e: Exponent) -> ExtReal {
    match e.value() {
        None => match h.asym(End::Zero).limit(End::Zero) {
            Some(l) => ExtReal::finite(l),
            None => ExtReal::infinite("unbounded profile"),
        },
        Some(ev) => h
            .pow_compose(ev)
            .expect("positive powers are always defined")
            .total()
            .powf(qf(e.inv())),
    }
}

fn c3_profiles(pr: &Profiles, cfg: &ExponentConfig) -> ExtReal {
    if vanishes(&pr.u) || vanishes(&pr.w) {
        return ExtReal::zero();
    }
    let nu = match head_norm(&pr.u, cfg.q) {
        Ok(c) => c,
        Err(e) => return inf_ext(e),
    };
    let nw = match head_norm(&pr.w, cfg.p_conj()) {
        Ok(c) => c,
        Err(e) => return inf_ext(e),
    };
    nu.mul(&nw.reflect()).sup().0
}

fn c4_profiles(pr: &Profiles, cfg: &ExponentConfig) -> Result<ExtReal, CriteriaError> {
    let r = cfg.r().ok_or_else(|| {
        CriteriaError::Precondition(format!("C4 needs q < p ({cfg})"))
    })?;
    if vanishes(&pr.u) || vanishes(&pr.w) {
        return Ok(ExtReal::zero());
    }
    let qv = cfg.q.value().expect("q < p forces q finite");
    let uq = pr.u.pow_compose(qv)?;
    let big_u = match uq.primitive() {
        Ok(c) => c,
        Err(e) => return Ok(inf_ext(e)),
    };
    let nw = match head_norm(&pr.w, cfg.p_conj()) {
        Ok(c) => c,
        Err(e) => return Ok(inf_ext(e)),
    };
    let rv = r.value().expect("r finite");
    let r_over_p = rv * cfg.p.inv();
    let integrand = uq
        .to_curve()
        .mul(&big_u.powq(r_over_p))
        .mul(&nw.reflect().powq(rv));
    Ok(integrand.integral().powf(qf(r.inv())))
}

/// `ξ`, or `Err` with the reason `∫_1^∞ u*^{q#}` diverges.
pub enum Xi {
    Finite(Curve),
    Infinite(String),
}

fn xi_profile(u: &StepFunction, q: Exponent) -> Result<Xi, CriteriaError> {
    let two = Exponent::from_int(2);
    if !q.lt(&two) {
        return Err(CriteriaError::Precondition(format!("ξ needs q < 2, got q = {q}")));
    }
    let qv = q.value().unwrap();
    let qs = q.sharp().value().unwrap();
    let big_u = u.pow_compose(qv)?.primitive()?;
    let tail = match u.pow_compose(qs)?.tail_primitive() {
        Ok(c) => c,
        Err(e) => return Ok(Xi::Infinite(e.to_string())),
    };
    let half_q = qv / Q::from_integer(2);
    // q/q# = 1 - q/2
    let corr = Curve::identity_power(half_q).mul(&tail.powq(Q::one() - half_q));
    Ok(Xi::Finite(big_u.add(&corr)))
}

fn tail_certificate(u: &StepFunction, q: Exponent) -> ExtReal {
    let qs = match q.sharp().value() {
        Some(v) => v,
        None => return ExtReal::indeterminate("q# = ∞"),
    };
    match u.pow_compose(qs).and_then(|h| h.integrate(1.0, f64::INFINITY)) {
        Ok(v) => v,
        Err(e) => ExtReal::indeterminate(e.to_string()),
    }
}

/// `g` and `G(t) = ∫_t^∞ g`, or an infinite certificate.
pub(crate) fn g_pair(u: &StepFunction, q: Exponent) -> Result<Result<(Curve, Curve), ExtReal>, CriteriaError> {
    let xi = match xi_profile(u, q)? {
        Xi::Finite(c) => c,
        Xi::Infinite(why) => return Ok(Err(ExtReal::infinite(format!("ξ ≡ ∞: {why}")))),
    };
    let qv = q.value().unwrap();
    let qs = q.sharp().value().unwrap();
    let uq = u.pow_compose(qv)?;
    let big_u = match uq.primitive() {
        Ok(c) => c,
        Err(e) => return Ok(Err(inf_ext(e))),
    };
    let half = Q::new(1, 2);
    let g = uq
        .to_curve()
        .mul(&big_u.powq(qs * half))
        .mul(&xi.powq(-qs * half))
        .mul(&Curve::identity_power(-qv * half));
    let big_g = match g.tail_integral() {
        Ok(c) => c,
        Err(e) => return Ok(Err(inf_ext(e))),
    };
    Ok(Ok((g, big_g)))
}

/// `V(t) = ∫_0^t w^{-p}`; needs `v` finite everywhere.
fn v_func(w: &StepFunction, p: Exponent) -> Result<Result<Curve, ExtReal>, CriteriaError> {
    let pv = p.value().expect("finite p");
    let wp = match w.pow_compose(-pv) {
        Ok(h) => h,
        Err(FuncError::NegativePowerOfZero) => {
            return Ok(Err(ExtReal::indeterminate(
                "v is infinite on a set of positive measure; V is not available",
            )))
        }
        Err(e) => return Err(e.into()),
    };
    Ok(match wp.primitive() {
        Ok(c) => Ok(c),
        Err(e) => Err(inf_ext(e)),
    })
}

macro_rules! try_ext {
    ($e:expr) => {
        match $e {
            Ok(x) => x,
            Err(ext) => return Ok(ext),
        }
    };
}

fn c6_profiles(pr: &Profiles, cfg: &ExponentConfig) -> Result<ExtReal, CriteriaError> {
    let r = cfg.r().ok_or_else(|| CriteriaError::Precondition(format!("C6 needs q < p ({cfg})")))?;
    let pv = cfg
        .p
        .value()
        .filter(|p| *p > Q::from_integer(2))
        .ok_or_else(|| CriteriaError::Precondition(format!("C6 needs 2 < p < ∞ ({cfg})")))?;
    if vanishes(&pr.u) {
        return Ok(ExtReal::zero());
    }
    let (g, big_g) = try_ext!(g_pair(&pr.u, cfg.q)?);
    let big_v = try_ext!(v_func(&pr.w, cfg.p)?);
    let ps = cfg.p_sharp().value().unwrap();
    let rv = r.value().unwrap();
    let half = Q::new(1, 2);
    let w = pr.w.to_curve();
    let h = w.powq(ps).mul(
        &big_v
            .mul(&w.powq(pv))
            .mul(&Curve::identity_power(-Q::one()))
            .powq(-ps * half),
    );
    let h_tail = match h.tail_integral() {
        Ok(c) => c,
        Err(e) => return Ok(inf_ext(e)),
    };
    let integrand = g
        .mul(&big_g.powq(rv * cfg.p.inv()))
        .mul(&h_tail.reflect().powq(rv / ps));
    Ok(integrand.integral().powf(qf(r.inv())))
}

fn c7_profiles(pr: &Profiles, cfg: &ExponentConfig) -> Result<ExtReal, CriteriaError> {
    if !cfg.p.is_infinite() {
        return Err(CriteriaError::Precondition(format!("C7 needs p = ∞ ({cfg})")));
    }
    if vanishes(&pr.u) || vanishes(&pr.w) {
        return Ok(ExtReal::zero());
    }
    let (g, _) = try_ext!(g_pair(&pr.u, cfg.q)?);
    let qv = cfg.q.value().unwrap();
    let w1 = match pr.w.primitive() {
        Ok(c) => c,
        Err(e) => return Ok(inf_ext(e)),
    };
    let inner = match w1.reflect().powq(Q::from_integer(2)).head_integral() {
        Ok(c) => c,
        Err(e) => return Ok(inf_ext(e)),
    };
    let integrand = g.mul(&inner.powq(qv / Q::from_integer(2)));
    Ok(integrand.integral().powf(qf(cfg.q.inv())))
}

fn c9_profiles(pr: &Profiles, cfg: &ExponentConfig) -> Result<ExtReal, CriteriaError> {
    let r = cfg.r().ok_or_else(|| CriteriaError::Precondition(format!("C9 needs q < p ({cfg})")))?;
    if cfg.p.is_infinite() {
        return Err(CriteriaError::Precondition(format!("C9 needs p < ∞ ({cfg})")));
    }
    if vanishes(&pr.u) {
        return Ok(ExtReal::zero());
    }
    let (g, big_g) = try_ext!(g_pair(&pr.u, cfg.q)?);
    let big_v = try_ext!(v_func(&pr.w, cfg.p)?);
    let rv = r.value().unwrap();
    let half = Q::new(1, 2);
    let inner = Curve::identity_power(rv * half).mul(&big_v.powq(-rv * cfg.p.inv()));
    let s = match inner.tail_sup() {
        Ok(c) => c,
        Err(e) => return Ok(inf_ext(e)),
    };
    let integrand = g.mul(&big_g.powq(rv * cfg.p.inv())).mul(&s.reflect());
    Ok(integrand.integral().powf(qf(r.inv())))
}

fn with_profiles<F>(u: &WeightSpec, v: &WeightSpec, f: F) -> Result<ExtReal, CriteriaError>
where
    F: FnOnce(&Profiles) -> Result<ExtReal, CriteriaError>,
{
    match profiles(u, v)? {
        Ok(pr) => f(&pr),
        Err(ext) => Ok(ext),
    }
}

/// `U(t) = ∫_0^t u*^q`.
pub fn u_func(u: &WeightSpec, q: Exponent) -> Result<Curve, CriteriaError> {
    let qv = q
        .value()
        .ok_or_else(|| CriteriaError::Precondition("U needs q < ∞".into()))?;
    if u.direction != Direction::RadialNonIncreasing {
        return Err(CriteriaError::Precondition(format!("u = {u} must be non-increasing")));
    }
    if u.wrong_way() {
        return Err(CriteriaError::Divergent(format!("u* = ∞ for u = {u}")));
    }
    Ok(u.decreasing_profile()?.pow_compose(qv)?.primitive()?)
}

/// `ξ(t) = U(t) + t^{q/2} (∫_t^∞ u*^{q#})^{q/q#}` for `q < 2`.
pub fn xi_func(u: &WeightSpec, q: Exponent) -> Result<Xi, CriteriaError> {
    if u.direction != Direction::RadialNonIncreasing {
        return Err(CriteriaError::Precondition(format!("u = {u} must be non-increasing")));
    }
    if u.wrong_way() {
        return Ok(Xi::Infinite(format!("u* = ∞ for u = {u}")));
    }
    xi_profile(&u.decreasing_profile()?, q)
}

#[allow(non_snake_case)]
pub fn C3(u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig) -> Result<ExtReal, CriteriaError> {
    with_profiles(u, v, |pr| Ok(c3_profiles(pr, cfg)))
}

#[allow(non_snake_case)]
pub fn C4(u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig) -> Result<ExtReal, CriteriaError> {
    with_profiles(u, v, |pr| c4_profiles(pr, cfg))
}

#[allow(non_snake_case)]
pub fn C6(u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig) -> Result<ExtReal, CriteriaError> {
    with_profiles(u, v, |pr| c6_profiles(pr, cfg))
}

#[allow(non_snake_case)]
pub fn C7(u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig) -> Result<ExtReal, CriteriaError> {
    with_profiles(u, v, |pr| c7_profiles(pr, cfg))
}

#[allow(non_snake_case)]
pub fn C9(u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig) -> Result<ExtReal, CriteriaError> {
    with_profiles(u, v, |pr| c9_profiles(pr, cfg))
}

/// `‖u‖_q ‖1/v‖_{p'}`, the sharp constant when `q = ∞` or `p = 1`.
pub fn degenerate_constant(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
) -> Result<ExtReal, CriteriaError> {
    with_profiles(u, v, |pr| {
        Ok(full_norm(&pr.u, cfg.q).mul(&full_norm(&pr.w, cfg.p_conj())))
    })
}

pub fn evaluate(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
) -> Result<CriterionReport, CriteriaError> {
    let regime = classify(cfg);
    let mut constants = BTreeMap::new();
    let mut notes = Vec::new();
    match profiles(u, v)? {
        Err(ext) => {
            for name in regime.required().iter().chain(["C3"].iter()) {
                constants.insert(name.to_string(), ext.clone());
            }
            notes.push(format!("wrong-way weight: {ext}"));
        }
        Ok(pr) => {
            constants.insert("C3".into(), c3_profiles(&pr, cfg));
            let tail = || tail_certificate(&pr.u, cfg.q);
            match regime {
                Regime::I => {}
                Regime::II => {
                    constants.insert("C4".into(), c4_profiles(&pr, cfg)?);
                }
                Regime::III => {
                    let c4 = c4_profiles(&pr, cfg)?;
                    let c6 = c6_profiles(&pr, cfg)?;
                    constants.insert("C5".into(), c4.add(&c6));
                    constants.insert("C4".into(), c4);
                    constants.insert("C6".into(), c6);
                    constants.insert("TailUq#".into(), tail());
                }
                Regime::IV => {
                    constants.insert("C7".into(), c7_profiles(&pr, cfg)?);
                    constants.insert("TailUq#".into(), tail());
                }
                Regime::V => {
                    let c4 = c4_profiles(&pr, cfg)?;
                    let c9 = c9_profiles(&pr, cfg)?;
                    constants.insert("C8".into(), c4.add(&c9));
                    constants.insert("C4".into(), c4);
                    constants.insert("C9".into(), c9);
                    constants.insert("TailUq#".into(), tail());
                }
                Regime::DegenerateQInf | Regime::DegenerateP1 => {
                    let c = full_norm(&pr.u, cfg.q).mul(&full_norm(&pr.w, cfg.p_conj()));
                    constants.insert("Cdeg".into(), c);
                }
            }
        }
    }
    let required: Vec<&ExtReal> = regime
        .required()
        .iter()
        .filter_map(|n| constants.get(*n))
        .collect();
    let determined = required
        .iter()
        .all(|c| !matches!(c, ExtReal::Indeterminate { .. }));
    let holds = required.iter().all(|c| c.is_finite());
    if !determined {
        notes.push("a required constant is indeterminate; holds reported as false".into());
    }
    let cube_condition = crate::extremal::cube_pair_condition(u, v, cfg)
        .unwrap_or_else(|e| ExtReal::indeterminate(e.to_string()));
    Ok(CriterionReport {
        u: u.to_string(),
        v: v.to_string(),
        config: *cfg,
        regime,
        constants,
        holds,
        determined,
        cube_condition,
        notes,
    })
}

/// Evaluates many configurations in parallel.
pub fn evaluate_many(
    cases: &[(WeightSpec, WeightSpec, ExponentConfig)],
) -> Vec<Result<CriterionReport, CriteriaError>> {
    cases.par_iter().map(|(u, v, c)| evaluate(u, v, c)).collect()
}

/// The dual problem `(1/v, 1/u, q', p')`.
pub fn dual_config(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
) -> Result<(WeightSpec, WeightSpec, ExponentConfig), CriteriaError> {
    let qc = cfg.q_conj().ok_or_else(|| {
        CriteriaError::Precondition(format!("duality needs q >= 1, got q = {}", cfg.q))
    })?;
    let cfg2 = ExponentConfig::new(qc, cfg.p_conj(), cfg.d)?;
    Ok((v.reciprocal(), u.reciprocal(), cfg2))
}

/// Convenience for tests and the CLI: parse a rational or `inf`.
pub fn parse_exponent(s: &str) -> Result<Exponent, CriteriaError> {
    if s.trim().eq_ignore_ascii_case("inf") {
        return Ok(Exponent::INFINITY);
    }
    let v = parse_rational(s).map_err(|e| CriteriaError::InvalidExponent(e.to_string()))?;
    Exponent::new(v).map_err(|e| CriteriaError::InvalidExponent(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{q, qi};
    use crate::funcspace::{Grid, TailSpec};

    const DEC: Direction = Direction::RadialNonIncreasing;
    const INC: Direction = Direction::RadialNonDecreasing;

    fn cfg(p: &str, q: &str) -> ExponentConfig {
        ExponentConfig::parse(p, q, 1).unwrap()
    }

    fn w(s: &str, dir: Direction) -> WeightSpec {
        WeightSpec::parse(s, dir).unwrap()
    }

    #[test]
    fn derived_exponents() {
        let c = cfg("4", "3/2");
        assert_eq!(c.p_conj(), Exponent::from_ratio(4, 3));
        assert_eq!(c.r().unwrap(), Exponent::from_inv(q(2, 3) - q(1, 4)));
        assert_eq!(c.p_sharp(), Exponent::from_int(4));
        assert_eq!(c.q_sharp(), Exponent::from_int(6));
        assert!(cfg("2", "3").r().is_none());
        assert!(cfg("2", "1").p_sharp().is_infinite());
        assert!(ExponentConfig::parse("1/2", "2", 1).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&cfg("2", "4")), Regime::I);
        assert_eq!(classify(&cfg("4", "3/2")), Regime::III);
        assert_eq!(classify(&cfg("2", "1/2")), Regime::V);
        assert_eq!(classify(&cfg("3", "2")), Regime::II);
        assert_eq!(classify(&cfg("3/2", "1")), Regime::II);
        assert_eq!(classify(&cfg("inf", "1")), Regime::IV);
        assert_eq!(classify(&cfg("4", "1/2")), Regime::III);
        assert_eq!(classify(&cfg("3", "inf")), Regime::DegenerateQInf);
        assert_eq!(classify(&cfg("1", "1/2")), Regime::DegenerateP1);
        assert_eq!(classify(&cfg("3/2", "5/4")), Regime::II);
        assert_eq!(classify(&cfg("4/3", "5/4")), Regime::II);
    }

    #[test]
    fn u_and_xi_closed_forms() {
        let u = w("ind(1)", DEC);
        let big_u = u_func(&u, Exponent::from_int(2)).unwrap();
        for t in [0.3f64, 1.0, 5.0] {
            assert!((big_u.eval(t) - t.min(1.0)).abs() < 1e-14);
        }
        let u = w("pow(1/4)", DEC);
        let big_u = u_func(&u, Exponent::from_int(2)).unwrap();
        assert_eq!(big_u.as_mono(), Some((2.0, q(1, 2))));

        let Xi::Finite(xi) = xi_func(&w("ind(1)", DEC), Exponent::from_int(1)).unwrap() else {
            panic!("finite ξ expected")
        };
        for t in [0.1f64, 0.5, 0.9, 2.0] {
            let exact = t.min(1.0) + (t * (1.0 - t).max(0.0)).sqrt();
            assert!((xi.eval(t) - exact).abs() < 1e-13, "{t}");
        }
        assert!(matches!(
            xi_func(&w("pow(0)", DEC), Exponent::from_int(1)).unwrap(),
            Xi::Infinite(_)
        ));
    }

    #[test]
    fn xi_matches_u_for_powers() {
        // b q < 1 < b q#: q = 1, q# = 2, b = 3/4
        let Xi::Finite(xi) = xi_func(&w("pow(3/4)", DEC), Exponent::from_int(1)).unwrap() else {
            panic!()
        };
        let big_u = u_func(&w("pow(3/4)", DEC), Exponent::from_int(1)).unwrap();
        let (c1, e1) = xi.as_mono().unwrap();
        let (c2, e2) = big_u.as_mono().unwrap();
        assert_eq!(e1, e2);
        assert_eq!(e1, q(1, 4));
        assert!(c1 / c2 > 1.0 && c1 / c2 < 4.0);
    }

    #[test]
    fn plancherel_c3_is_one() {
        let c = C3(&WeightSpec::one(DEC), &WeightSpec::one(INC), &cfg("2", "2")).unwrap();
        assert_eq!(c, ExtReal::finite(1.0));
        let rep = evaluate(&WeightSpec::one(DEC), &WeightSpec::one(INC), &cfg("2", "2")).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.regime, Regime::I);
    }

    #[test]
    fn pitt_balance() {
        // 1/q - γ + β - 1/p' = 0 with p = 4/3, q = 2: γ = 1/4, β = 0
        let c = cfg("4/3", "2");
        let ok = C3(&w("pow(1/4)", DEC), &w("pow(0)", INC), &c).unwrap();
        assert!(ok.is_finite());
        let off = C3(&w("pow(0.35)", DEC), &w("pow(0)", INC), &c).unwrap();
        assert!(off.is_infinite());
        let neg = C3(&w("pow(-1/4)", DEC), &w("pow(0)", INC), &c).unwrap();
        assert!(neg.is_infinite());
    }

    #[test]
    fn c4_examples() {
        let c = cfg("inf", "1");
        let v = C4(&w("ind(1)", DEC), &WeightSpec::one(INC), &c).unwrap();
        // ∫_0^1 1 · (1/s) ds diverges
        assert!(v.is_infinite());
        let zero = WeightSpec::table(StepFunction::zero(), 1, DEC).unwrap();
        assert_eq!(C4(&zero, &WeightSpec::one(INC), &cfg("3", "2")).unwrap(), ExtReal::zero());
    }

    #[test]
    fn c4_closed_form() {
        // u = ind(1), v = 1, p = 4, q = 2: r = 4, r/p = 1, r/p' = 3,
        // C4^4 = ∫_0^1 s (1/s)^3 ds = ∞; with v = pow(1): (∫_0^{1/s} t^{-4/3})^3 diverges at 0.
        // u = ind(1), 1/v = ind(1): ∫_0^1 s · min(1/s,1)^3 ds = ∫_0^1 s ds = 1/2
        let c = cfg("4", "2");
        let v = C4(&w("ind(1)", DEC), &w("ind(1)", INC), &c).unwrap();
        assert!((v.value().unwrap() - 0.5f64.powf(0.25)).abs() < 1e-10, "{v}");
    }

    #[test]
    fn c7_divergence() {
        let c = cfg("inf", "1");
        assert!(C7(&w("ind(1)", DEC), &WeightSpec::one(INC), &c).unwrap().is_infinite());
    }

    #[test]
    fn degenerate_examples() {
        let c = cfg("1", "inf");
        let v = degenerate_constant(&w("ind(1)", DEC), &WeightSpec::one(INC), &c).unwrap();
        assert_eq!(v, ExtReal::finite(1.0));
        assert!(degenerate_constant(&w("pow(1/3)", DEC), &WeightSpec::one(INC), &c)
            .unwrap()
            .is_infinite());
        let c = cfg("1", "2");
        let v = degenerate_constant(&w("ind(1)", DEC), &w("ind(1)", INC), &c).unwrap();
        assert_eq!(v, ExtReal::finite(1.0));
    }

    #[test]
    fn regime_three_needs_tail() {
        let rep = evaluate(&w("pow(0)", DEC), &w("pow(1)", INC), &cfg("4", "1")).unwrap();
        assert_eq!(rep.regime, Regime::III);
        assert!(rep.constants["TailUq#"].is_infinite());
        assert!(!rep.holds);
    }

    #[test]
    fn duality_swaps() {
        let (u2, v2, c2) =
            dual_config(&WeightSpec::one(DEC), &WeightSpec::one(INC), &cfg("2", "2")).unwrap();
        assert_eq!(c2, cfg("2", "2"));
        assert_eq!(u2.to_string(), "pow(0)");
        assert_eq!(v2.direction, INC);
        assert!(dual_config(&WeightSpec::one(DEC), &WeightSpec::one(INC), &cfg("2", "1/2")).is_err());
    }

    #[test]
    fn homogeneity() {
        let c = cfg("4/3", "2");
        let (u, v) = (w("ind(1)", DEC), w("pow(1/8)", INC));
        let a = C3(&u, &v, &c).unwrap().value().unwrap();
        let b = C3(&u.scaled(3.0), &v, &c).unwrap().value().unwrap();
        let d = C3(&u, &v.scaled(2.0), &c).unwrap().value().unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12 * b);
        assert!((d - a / 2.0).abs() < 1e-12 * a);
    }

    #[test]
    fn table_weight_c3_matches_direct_sup() {
        let h = StepFunction::new(
            Grid::new(vec![0.0, 1.0, 2.0]).unwrap(),
            vec![2.0, 1.0],
            TailSpec::Power { a: qi(1) },
        )
        .unwrap();
        let u = WeightSpec::table(h, 1, DEC).unwrap();
        let c = cfg("2", "2");
        let got = C3(&u, &WeightSpec::one(INC), &c).unwrap().value().unwrap();
        // tail 2/t after t = 2
        let big_u = |s: f64| {
            if s < 1.0 {
                4.0 * s
            } else if s < 2.0 {
                3.0 + s
            } else {
                7.0 - 4.0 / s
            }
        };
        let mut best = 0.0f64;
        for i in 1..200000 {
            let s = i as f64 * 1e-4;
            best = best.max((big_u(s) / s).sqrt());
        }
        assert!((got - best).abs() < 1e-9, "{got} vs {best}");
    }

    fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        fn rec<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
    }

    #[test]
    fn c6_matches_nested_quadrature() {
        // u = ind(1); v = 1 on [0,1], v = t after; p = 4, q = 1 (r = 4/3, p# = 4)
        let prof = StepFunction::new(
            Grid::new(vec![0.0, 1.0]).unwrap(),
            vec![1.0],
            TailSpec::Power { a: qi(-1) },
        )
        .unwrap();
        let v = WeightSpec::table(prof, 1, INC).unwrap();
        let got = C6(&w("ind(1)", DEC), &v, &cfg("4", "1")).unwrap().value().unwrap();

        // g = 1/(√t + √(1-t)) on (0,1); H(y) = 25 y^6 / (4 + y^5)^2 for y > 1
        let g = |t: f64| 1.0 / (t.sqrt() + (1.0 - t).sqrt());
        let big_g = |t: f64| simpson(g, t, 1.0, 1e-13);
        let h_tail = |y: f64| {
            // y > 1; substitute r = y / x
            simpson(
                move |x: f64| {
                    if x == 0.0 {
                        0.0
                    } else {
                        let r = y / x;
                        25.0 * r.powi(6) / (4.0 + r.powi(5)).powi(2) * y / (x * x)
                    }
                },
                0.0,
                1.0,
                1e-14,
            )
        };
        let outer = simpson(
            |t: f64| {
                if t <= 0.0 || t >= 1.0 {
                    return 0.0;
                }
                g(t) * big_g(t).cbrt() * h_tail(1.0 / t).cbrt()
            },
            0.0,
            1.0,
            1e-11,
        );
        let expect = outer.powf(0.75);
        assert!((got - expect).abs() < 1e-6 * expect, "{got} vs {expect}");
    }

    #[test]
    fn regime_five_constants() {
        // u = ind(1), v = 1, p = 2, q = 1/2: r = 2/3, q# = 2/3, sup factor ≡ 1
        let c = cfg("2", "1/2");
        let (u, v) = (w("ind(1)", DEC), WeightSpec::one(INC));
        let c4 = C4(&u, &v, &c).unwrap().value().unwrap();
        assert!((c4 - 1.0).abs() < 1e-10, "{c4}");
        let got = C9(&u, &v, &c).unwrap().value().unwrap();
        let xi = |t: f64| t + t.powf(0.25) * (1.0 - t).powf(0.75);
        let g = move |t: f64| {
            if t <= 0.0 || t >= 1.0 {
                0.0
            } else {
                t.cbrt() * xi(t).powf(-1.0 / 3.0) * t.powf(-0.25)
            }
        };
        let outer = simpson(
            move |t: f64| {
                if t <= 0.0 || t >= 1.0 {
                    0.0
                } else {
                    g(t) * simpson(g, t, 1.0, 1e-13).cbrt()
                }
            },
            0.0,
            1.0,
            1e-11,
        );
        let expect = outer.powf(1.5);
        assert!((got - expect).abs() < 1e-6 * expect, "{got} vs {expect}");
        let rep = evaluate(&u, &v, &c).unwrap();
        assert_eq!(rep.regime, Regime::V);
        assert!(rep.holds);
    }
}
