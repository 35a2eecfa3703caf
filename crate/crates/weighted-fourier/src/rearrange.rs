//! Distribution functions and rearrangements on the half-line.

use crate::exponent::{qf, Q};
use crate::extended::ExtReal;
use crate::funcspace::{
    Asym, Curve, CurveError, Direction, End, Form, FuncError, Grid, Piece, StepFunction,
    WeightSpec,
};
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RearrangeError {
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infinite measure: {0}")]
    InfiniteMeasure(String),
}

/// A radial function `h(x) = h0(|x|)` on `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    pub d: u32,
    pub h0: StepFunction,
}

impl RadialProfile {
    pub fn new(d: u32, h0: StepFunction) -> RadialProfile {
        RadialProfile { d, h0 }
    }

    /// `h*(t) = h0(t^{1/d})` for non-increasing `h0` (unit ball has measure 1).
    pub fn rearranged(&self) -> Result<StepFunction, RearrangeError> {
        if !self.h0.is_nonincreasing() {
            return Err(FuncError::NonMonotone("radial profile must be non-increasing".into()).into());
        }
        Ok(self.h0.radial_to_measure(self.d)?)
    }
}

/// Asymptotics of the inverse of a strictly monotone `c t^a L^b` (`a != 0`),
/// at the end where its values go.
fn inverse_asym(asym: &Asym) -> Asym {
    match asym {
        Asym::Pow { c, a, b } if !a.is_zero() => {
            let af = qf(*a).abs();
            let e = Q::one() / *a;
            // t ~ (λ/c)^{1/a} (L_λ/|a|)^{-b/a}
            let coeff = c.powf(-qf(e)) * af.powf(qf(*b / *a));
            Asym::pow(coeff, e, -*b / *a)
        }
        _ => Asym::Infinite,
    }
}

fn piece_measure_above(p: &Piece, lo: f64, hi: f64, lambda: f64) -> f64 {
    // p non-increasing on [lo, hi)
    let start = p.value(lo);
    if !(start > lambda) {
        return 0.0;
    }
    if hi.is_finite() && p.value(hi) > lambda {
        return hi - lo;
    }
    if lambda <= 0.0 {
        return hi - lo;
    }
    let t = p.solve(lambda, lo, hi);
    (t.min(hi) - lo).max(0.0)
}

fn check_decaying(f: &StepFunction) -> Result<(), RearrangeError> {
    for (lo, hi, form) in f.forms() {
        if let Form::Analytic(p) = form {
            if !p.is_nonincreasing(lo, hi) {
                return Err(RearrangeError::Unsupported(format!(
                    "analytic piece on [{lo}, {hi}) is not non-increasing"
                )));
            }
        }
    }
    Ok(())
}

/// `λ -> |{t : f(t) > λ}|`.
pub fn distribution(f: &StepFunction) -> Result<Curve, RearrangeError> {
    check_decaying(f)?;
    let forms = Arc::new(f.forms());
    let fs = forms.clone();
    let eval = move |lambda: f64| -> f64 {
        let mut m = 0.0;
        for (lo, hi, form) in fs.iter() {
            match form {
                Form::Const(v) => {
                    if *v > lambda {
                        m += hi - lo;
                    }
                }
                Form::Analytic(p) => m += piece_measure_above(p, *lo, *hi, lambda),
            }
        }
        m
    };
    // large λ: only an unbounded lead contributes
    let first = &forms[0].2;
    let at_inf = match first.asym(End::Zero) {
        a if a.unbounded(End::Zero) => inverse_asym(&a),
        _ => Asym::Zero,
    };
    let tail = &forms.last().unwrap().2;
    let at0 = match tail.asym(End::Inf) {
        Asym::Zero => {
            let support: f64 = forms
                .iter()
                .map(|(lo, hi, form)| match form {
                    Form::Const(v) if *v > 0.0 => hi - lo,
                    Form::Analytic(p) if p.c > 0.0 => hi - lo,
                    _ => 0.0,
                })
                .sum();
            Asym::constant(support)
        }
        a if a.exponents().map(|(e, _)| e < Q::zero()).unwrap_or(false) => inverse_asym(&a),
        _ => Asym::Infinite,
    };
    let mut knots: Vec<f64> = forms
        .iter()
        .filter_map(|(lo, hi, form)| match form {
            Form::Const(v) if *v > 0.0 => Some(*v),
            Form::Analytic(p) => {
                let a = p.value(*lo);
                let b = if hi.is_finite() { p.value(*hi) } else { 0.0 };
                Some(if a.is_finite() { a } else { b })
            }
            _ => None,
        })
        .collect();
    knots.retain(|k| *k > 0.0 && k.is_finite());
    Ok(Curve::new(Arc::new(eval), at0, at_inf, knots))
}

/// Non-increasing rearrangement.
///
/// Exact when the lead (if any) lies above every cell and the tail below
/// every positive cell; other configurations are rejected.
pub fn star(f: &StepFunction) -> Result<StepFunction, RearrangeError> {
    check_decaying(f)?;
    let b = f.grid().points();
    let n = f.grid().cells();
    let mut cells: Vec<(f64, f64)> = Vec::with_capacity(n);
    let start = if f.lead().is_some() { 1 } else { 0 };
    for i in start..n {
        let v = f.values()[i];
        if v > 0.0 {
            cells.push((v, b[i + 1] - b[i]));
        }
    }
    cells.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    if let Some(lead) = f.lead() {
        let floor = lead.value(b[1]);
        if cells.first().map(|c| c.0 > floor).unwrap_or(false) {
            return Err(RearrangeError::Unsupported(
                "lead piece dips below a later cell".into(),
            ));
        }
    }
    if let Some(tail) = f.tail() {
        let top = tail.value(f.grid().last());
        if cells.last().map(|c| c.0 < top).unwrap_or(false) {
            return Err(RearrangeError::Unsupported(
                "tail rises above an earlier cell".into(),
            ));
        }
    }
    let mut pts = vec![0.0];
    let mut vals = Vec::new();
    if f.lead().is_some() {
        pts.push(b[1]);
        vals.push(f.values()[0]);
    }
    let fixed = vals.len();
    for (v, len) in cells {
        if vals.len() > fixed && vals.last() == Some(&v) {
            *pts.last_mut().unwrap() += len;
            continue;
        }
        let last = *pts.last().unwrap();
        pts.push(last + len);
        vals.push(v);
    }
    let end = *pts.last().unwrap();
    let tail = f
        .tail()
        .map(|t| t.shifted(f.grid().last() - end));
    let tail = match tail {
        // a constant tail equal to the last cell absorbs it
        Some(t) if t.a.is_zero() && !t.has_log() && vals.len() > fixed && vals.last() == Some(&t.c) => {
            pts.pop();
            vals.pop();
            Some(t)
        }
        other => other,
    };
    Ok(StepFunction::from_parts(
        Grid::new(pts)?,
        vals,
        f.lead().cloned(),
        tail,
    )?)
}

/// `f**(t) = (1/t) ∫_0^t f*`.
pub fn double_star(f: &StepFunction) -> Result<Curve, RearrangeError> {
    let s = star(f)?;
    let prim = s.primitive()?;
    Ok(prim.mul(&Curve::mono(1.0, -Q::one())))
}

/// `u*` for non-increasing weights, `v_*` for non-decreasing ones.
pub fn circ_profile(w: &WeightSpec) -> Result<StepFunction, RearrangeError> {
    match w.direction {
        Direction::RadialNonIncreasing => Ok(w.decreasing_profile()?),
        Direction::RadialNonDecreasing => lower_star(w),
    }
}

/// `v_*` with `1/v_* = (1/v)*`.
pub fn lower_star(v: &WeightSpec) -> Result<StepFunction, RearrangeError> {
    if v.direction != Direction::RadialNonDecreasing {
        return Err(FuncError::NonMonotone("lower_star needs a non-decreasing weight".into()).into());
    }
    let h = v.decreasing_profile()?;
    h.pow_compose(-Q::one()).map_err(|_| {
        RearrangeError::Unsupported(
            "v is infinite on a set of positive measure; use 1/v_* directly".into(),
        )
    })
}

fn product_form_integral(f: &Form, g: &Form, lo: f64, hi: f64) -> ExtReal {
    match (f, g) {
        (Form::Const(a), other) | (other, Form::Const(a)) => {
            if *a == 0.0 {
                return ExtReal::zero();
            }
            let v = other.integral(lo, hi);
            if v.is_infinite() {
                ExtReal::infinite(format!("product not integrable on [{lo}, {hi})"))
            } else {
                ExtReal::finite(a * v)
            }
        }
        (Form::Analytic(p), Form::Analytic(q)) => {
            let (p, q) = (p.clone(), q.clone());
            let at_inf = p.asym(End::Inf).mul(&q.asym(End::Inf));
            let at0 = p.asym(End::Zero).mul(&q.asym(End::Zero));
            let curve = Curve::from_fn(
                move |t| {
                    if t < lo || t >= hi {
                        0.0
                    } else {
                        p.value(t) * q.value(t)
                    }
                },
                if lo > 0.0 { Asym::Zero } else { at0 },
                if hi.is_finite() { Asym::Zero } else { at_inf },
                [lo, hi].into_iter().filter(|x| *x > 0.0 && x.is_finite()).collect(),
            );
            curve.integral()
        }
    }
}

/// `∫ f g` over `(0, ∞)`.
pub fn product_integral(f: &StepFunction, g: &StepFunction) -> ExtReal {
    let cuts = f.breakpoints_union(g);
    let mut total = ExtReal::zero();
    for (k, &lo) in cuts.iter().enumerate() {
        let hi = cuts.get(k + 1).copied().unwrap_or(f64::INFINITY);
        let probe = if hi.is_finite() { 0.5 * (lo + hi) } else { lo + 1.0 };
        total = total.add(&product_form_integral(&f.form_at(probe), &g.form_at(probe), lo, hi));
    }
    total
}

/// `(∫ f g, ∫ f* g*)`; the first never exceeds the second.
pub fn hl_pairing(f: &StepFunction, g: &StepFunction) -> Result<(ExtReal, ExtReal), RearrangeError> {
    let plain = product_integral(f, g);
    let arranged = product_integral(&star(f)?, &star(g)?);
    Ok((plain, arranged))
}
