use super::asym::{Asym, End};
use super::curve::{Curve, CurveError};
use super::piece::Piece;
use super::FuncError;
use crate::exponent::{qf, Q};
use crate::extended::ExtReal;
use crate::quad;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Breakpoints `0 = b0 < b1 < ... < bn`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    breakpoints: Vec<f64>,
}

impl Grid {
    pub fn new(breakpoints: Vec<f64>) -> Result<Grid, FuncError> {
        if breakpoints.first() != Some(&0.0) {
            return Err(FuncError::InvalidGrid("first breakpoint must be 0".into()));
        }
        for w in breakpoints.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(FuncError::InvalidGrid(format!(
                    "breakpoints must increase strictly ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(Grid { breakpoints })
    }

    pub fn uniform(n: usize, h: f64) -> Grid {
        Grid {
            breakpoints: (0..=n).map(|i| i as f64 * h).collect(),
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn cells(&self) -> usize {
        self.breakpoints.len() - 1
    }
}

/// Behaviour beyond the last breakpoint, `c t^{-a} log^{-b}(e+t)` with `c`
/// fixed by continuity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailSpec {
    Zero,
    Power { a: Q },
    PowerLog { a: Q, b: Q },
}

impl TailSpec {
    pub fn unit_piece(&self) -> Option<Piece> {
        match self {
            TailSpec::Zero => None,
            TailSpec::Power { a } => Some(Piece::power(1.0, *a)),
            TailSpec::PowerLog { a, b } => Some(Piece::power_log(1.0, *a, *b, Q::one())),
        }
    }
}

/// Non-negative piecewise-constant function on `(0, ∞)`, optionally with an
/// analytic piece replacing the first cell and an analytic tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    grid: Grid,
    values: Vec<f64>,
    lead: Option<Piece>,
    tail: Option<Piece>,
}

/// What a step function looks like on one interval.
#[derive(Clone, Debug, PartialEq)]
pub enum Form {
    Const(f64),
    Analytic(Piece),
}

impl Form {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Form::Const(v) => *v,
            Form::Analytic(p) => p.value(t),
        }
    }

    pub fn asym(&self, end: End) -> Asym {
        match self {
            Form::Const(v) => Asym::constant(*v),
            Form::Analytic(p) => p.asym(end),
        }
    }

    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        match self {
            Form::Const(v) => {
                if hi > lo && *v != 0.0 {
                    v * (hi - lo)
                } else {
                    0.0
                }
            }
            Form::Analytic(p) => {
                if hi.is_infinite() {
                    p.integral_to_inf(lo)
                } else {
                    p.integral(lo, hi)
                }
            }
        }
    }
}

fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl StepFunction {
    pub fn new(grid: Grid, values: Vec<f64>, tail: TailSpec) -> Result<StepFunction, FuncError> {
        let tail_piece = match tail.unit_piece() {
            None => None,
            Some(p) => {
                if grid.cells() == 0 {
                    Some(p)
                } else {
                    let anchor = *values.last().ok_or_else(|| {
                        FuncError::InvalidValue("tail needs a cell to anchor on".into())
                    })?;
                    Some(p.anchored(grid.last(), anchor))
                }
            }
        };
        StepFunction::from_parts(grid, values, None, tail_piece)
    }

    pub fn from_parts(
        grid: Grid,
        values: Vec<f64>,
        lead: Option<Piece>,
        tail: Option<Piece>,
    ) -> Result<StepFunction, FuncError> {
        if values.len() != grid.cells() {
            return Err(FuncError::InvalidValue(format!(
                "{} values for {} cells",
                values.len(),
                grid.cells()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if v.is_nan() || *v < 0.0 || (v.is_infinite() && i > 0) {
                return Err(FuncError::InvalidValue(format!("cell {i} has value {v}")));
            }
        }
        if lead.is_some() && grid.cells() == 0 {
            return Err(FuncError::InvalidValue("lead piece needs a first cell".into()));
        }
        for p in lead.iter().chain(tail.iter()) {
            if p.c < 0.0 || p.c.is_nan() {
                return Err(FuncError::InvalidValue(format!("negative piece {p:?}")));
            }
        }
        let tail = tail.filter(|p| p.c != 0.0);
        Ok(StepFunction {
            grid,
            values,
            lead,
            tail,
        })
    }

    /// Piecewise constant with zero tail.
    pub fn cells(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<StepFunction, FuncError> {
        StepFunction::new(Grid::new(breakpoints)?, values, TailSpec::Zero)
    }

    pub fn constant(c: f64) -> StepFunction {
        StepFunction {
            grid: Grid {
                breakpoints: vec![0.0],
            },
            values: vec![],
            lead: None,
            tail: if c == 0.0 { None } else { Some(Piece::power(c, Q::zero())) },
        }
    }

    pub fn zero() -> StepFunction {
        StepFunction::constant(0.0)
    }

    /// `c t^{-a}` on all of `(0, ∞)`.
    pub fn power(c: f64, a: Q) -> StepFunction {
        StepFunction {
            grid: Grid {
                breakpoints: vec![0.0],
            },
            values: vec![],
            lead: None,
            tail: if c == 0.0 { None } else { Some(Piece::power(c, a)) },
        }
    }

    /// `c 1_{[0, r)}`.
    pub fn indicator(r: f64, c: f64) -> StepFunction {
        StepFunction::cells(vec![0.0, r], vec![c]).expect("valid indicator")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lead(&self) -> Option<&Piece> {
        self.lead.as_ref()
    }

    pub fn tail(&self) -> Option<&Piece> {
        self.tail.as_ref()
    }

    pub fn has_zero_tail(&self) -> bool {
        self.tail.is_none()
    }

    /// Intervals `[lo, hi)` with the form of the function on each.
    pub fn forms(&self) -> Vec<(f64, f64, Form)> {
        let b = self.grid.points();
        let mut out = Vec::with_capacity(b.len());
        for i in 0..self.grid.cells() {
            let form = match (&self.lead, i) {
                (Some(p), 0) => Form::Analytic(p.clone()),
                _ => Form::Const(self.values[i]),
            };
            out.push((b[i], b[i + 1], form));
        }
        let tail = match &self.tail {
            Some(p) => Form::Analytic(p.clone()),
            None => Form::Const(0.0),
        };
        out.push((self.grid.last(), f64::INFINITY, tail));
        out
    }

    pub fn form_at(&self, t: f64) -> Form {
        let b = self.grid.points();
        if t >= self.grid.last() {
            return match &self.tail {
                Some(p) => Form::Analytic(p.clone()),
                None => Form::Const(0.0),
            };
        }
        let i = match b.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        match (&self.lead, i) {
            (Some(p), 0) => Form::Analytic(p.clone()),
            _ => Form::Const(self.values[i]),
        }
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        self.form_at(t).value(t)
    }

    pub fn asym(&self, end: End) -> Asym {
        let forms = self.forms();
        match end {
            End::Zero => forms[0].2.asym(End::Zero),
            End::Inf => forms.last().unwrap().2.asym(End::Inf),
        }
    }

    /// `∫_a^b f` (`b` may be `+inf`).
    pub fn integrate(&self, a: f64, b: f64) -> Result<ExtReal, FuncError> {
        if !(a >= 0.0) || !(b >= a) {
            return Err(FuncError::InvalidInterval(a, b));
        }
        let mut sum = 0.0;
        for (lo, hi, form) in self.forms() {
            let (x0, x1) = (lo.max(a), hi.min(b));
            if !(x1 > x0) {
                continue;
            }
            let v = form.integral(x0, x1);
            if v.is_infinite() {
                let reason = if x1.is_infinite() {
                    format!("tail ~ {} is not integrable at infinity", form.asym(End::Inf))
                } else {
                    format!("integrand is not integrable on [{x0}, {x1}]")
                };
                return Ok(ExtReal::infinite(reason));
            }
            sum += v;
        }
        Ok(ExtReal::finite(sum))
    }

    pub fn total(&self) -> ExtReal {
        self.integrate(0.0, f64::INFINITY).expect("valid interval")
    }

    pub fn scale(&self, c: f64) -> StepFunction {
        assert!(c >= 0.0);
        StepFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| mul0(*v, c)).collect(),
            lead: self.lead.as_ref().map(|p| p.scale(c)),
            tail: self.tail.as_ref().map(|p| p.scale(c)).filter(|p| p.c != 0.0),
        }
    }

    /// Pointwise `f^e`.
    pub fn pow_compose(&self, e: Q) -> Result<StepFunction, FuncError> {
        if e.is_zero() {
            return Ok(StepFunction::constant(1.0));
        }
        if e < Q::zero() {
            let zero_cell = self
                .values
                .iter()
                .enumerate()
                .any(|(i, v)| *v == 0.0 && !(i == 0 && self.lead.is_some()));
            if zero_cell || self.tail.is_none() {
                return Err(FuncError::NegativePowerOfZero);
            }
        }
        let ef = qf(e);
        Ok(StepFunction {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .map(|v| if *v == 0.0 { 0.0 } else { v.powf(ef) })
                .collect(),
            lead: self.lead.as_ref().map(|p| p.pow(e)),
            tail: self.tail.as_ref().map(|p| p.pow(e)),
        })
    }

    /// `Some((c, e))` when the function is exactly `c t^e` on `(0, ∞)`.
    pub fn as_mono(&self) -> Option<(f64, Q)> {
        if self.grid.cells() > 0 {
            return None;
        }
        match &self.tail {
            None => Some((0.0, Q::zero())),
            Some(p) if p.shift == 0.0 && !p.has_log() => Some((p.c, -p.a)),
            _ => None,
        }
    }

    pub fn to_curve(&self) -> Curve {
        if let Some((c, e)) = self.as_mono() {
            return Curve::mono(c, e);
        }
        let me = Arc::new(self.clone());
        let f = me.clone();
        let mut knots: Vec<f64> = self.grid.points()[1..].to_vec();
        if self.grid.cells() == 0 {
            knots.clear();
        }
        Curve::new(
            Arc::new(move |t| f.eval(t)),
            self.asym(End::Zero),
            self.asym(End::Inf),
            knots,
        )
    }

    /// `F(t) = ∫_0^t f` with exact per-cell evaluation.
    pub fn primitive(&self) -> Result<Curve, CurveError> {
        let at0 = self.asym(End::Zero);
        if !at0.integrable(End::Zero) {
            return Err(CurveError::Divergent(format!(
                "∫_0^t diverges at 0 (integrand ~ {at0})"
            )));
        }
        if let Some((c, e)) = self.as_mono() {
            let e1 = e + Q::one();
            return Ok(Curve::mono(c / qf(e1), e1));
        }
        let forms = self.forms();
        let mut cum = vec![0.0];
        for (lo, hi, form) in &forms[..forms.len() - 1] {
            let v = form.integral(*lo, *hi);
            if !v.is_finite() {
                return Err(CurveError::Divergent(format!("non-integrable cell [{lo}, {hi}]")));
            }
            cum.push(cum.last().unwrap() + v);
        }
        let at_inf_f = self.asym(End::Inf);
        let total = match self.total() {
            ExtReal::Finite { value } => Some(value),
            _ => None,
        };
        let at0_i = at0.head_integral(End::Zero, None)?;
        let at_inf_i = at_inf_f.head_integral(End::Inf, total)?;
        let knots = self.knot_list();
        let forms = Arc::new(forms);
        let cum = Arc::new(cum);
        let eval = move |t: f64| -> f64 {
            if !(t > 0.0) {
                return 0.0;
            }
            let i = locate(&forms, t);
            let (lo, _, form) = &forms[i];
            cum[i] + form.integral(*lo, t)
        };
        Ok(Curve::new(Arc::new(eval), at0_i, at_inf_i, knots))
    }

    /// `G(t) = ∫_t^∞ f` with exact per-cell evaluation.
    pub fn tail_primitive(&self) -> Result<Curve, CurveError> {
        let at_inf = self.asym(End::Inf);
        if !at_inf.integrable(End::Inf) {
            return Err(CurveError::Divergent(format!(
                "∫_t^∞ diverges (integrand ~ {at_inf} at infinity)"
            )));
        }
        if let Some((c, e)) = self.as_mono() {
            let e1 = e + Q::one();
            return Ok(Curve::mono(if c == 0.0 { 0.0 } else { -c / qf(e1) }, e1));
        }
        let forms = self.forms();
        let n = forms.len();
        let mut suffix = vec![0.0; n + 1];
        for i in (0..n).rev() {
            let (lo, hi, form) = &forms[i];
            suffix[i] = suffix[i + 1] + form.integral(*lo, *hi);
        }
        let at0 = self.asym(End::Zero);
        let total = if suffix[0].is_finite() { Some(suffix[0]) } else { None };
        let at0_i = at0.tail_integral(End::Zero, total)?;
        let at_inf_i = at_inf.tail_integral(End::Inf, None)?;
        let knots = self.knot_list();
        let forms = Arc::new(forms);
        let eval = move |t: f64| -> f64 {
            if !(t > 0.0) {
                return suffix[0];
            }
            let i = locate(&forms, t);
            let (_, hi, form) = &forms[i];
            suffix[i + 1] + form.integral(t, *hi)
        };
        Ok(Curve::new(Arc::new(eval), at0_i, at_inf_i, knots))
    }

    /// `t -> f(t^{1/d})`: a radial profile seen in the measure variable.
    pub fn radial_to_measure(&self, d: u32) -> Result<StepFunction, FuncError> {
        if d == 1 {
            return Ok(self.clone());
        }
        let inv_d = Q::new(1, d as i64);
        let mut pieces = self.lead.iter().chain(self.tail.iter());
        if pieces.any(|p| p.shift != 0.0) {
            return Err(FuncError::Unsupported("shifted pieces under t^{1/d}".into()));
        }
        let map = |p: &Piece| Piece {
            a: p.a * inv_d,
            k: if p.has_log() { p.k * inv_d } else { p.k },
            ..p.clone()
        };
        let pts: Vec<f64> = self.grid.points().iter().map(|r| r.powi(d as i32)).collect();
        StepFunction::from_parts(
            Grid::new(pts)?,
            self.values.clone(),
            self.lead.as_ref().map(map),
            self.tail.as_ref().map(map),
        )
    }

    fn knot_list(&self) -> Vec<f64> {
        self.grid.points()[1..].to_vec()
    }

    /// Non-increasing in `t` (exact for constant cells, analytic for pieces).
    pub fn is_nonincreasing(&self) -> bool {
        let forms = self.forms();
        let mut prev_end: Option<f64> = None;
        for (lo, hi, form) in &forms {
            let start = form.value(*lo);
            if let Some(p) = prev_end {
                if start > p * (1.0 + 1e-12) {
                    return false;
                }
            }
            if let Form::Analytic(pc) = form {
                if !pc.is_nonincreasing(*lo, *hi) {
                    return false;
                }
            }
            prev_end = Some(if hi.is_finite() { left_limit(form, *hi) } else { 0.0 });
        }
        true
    }

    pub fn is_nondecreasing(&self) -> bool {
        let forms = self.forms();
        let mut prev_end: Option<f64> = None;
        for (lo, hi, form) in &forms {
            let start = form.value(*lo);
            if let Some(p) = prev_end {
                if start < p * (1.0 - 1e-12) {
                    return false;
                }
            }
            if let Form::Analytic(pc) = form {
                if !pc.is_nondecreasing(*lo, *hi) {
                    return false;
                }
            }
            prev_end = Some(if hi.is_finite() { left_limit(form, *hi) } else { 0.0 });
        }
        true
    }

    /// The same function on a refined grid (pieces stay attached to their cells).
    pub fn breakpoints_union(&self, other: &StepFunction) -> Vec<f64> {
        let mut b: Vec<f64> = self.grid.points().to_vec();
        b.extend_from_slice(other.grid.points());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.dedup();
        b
    }
}

fn left_limit(form: &Form, t: f64) -> f64 {
    match form {
        Form::Const(v) => *v,
        Form::Analytic(p) => p.value(t),
    }
}

fn locate(forms: &[(f64, f64, Form)], t: f64) -> usize {
    let i = forms.partition_point(|(lo, _, _)| *lo <= t);
    i.saturating_sub(1)
}

/// `sup_{t>0} f(t) g(t)`, cell by cell on the common refinement.
pub fn sup_over(f: &StepFunction, g: &StepFunction) -> ExtReal {
    let cuts = f.breakpoints_union(g);
    let mut best = 0.0f64;
    for (k, &lo) in cuts.iter().enumerate() {
        let hi = cuts.get(k + 1).copied().unwrap_or(f64::INFINITY);
        let probe = if hi.is_finite() { 0.5 * (lo + hi) } else { lo + 1.0 };
        let (ff, gf) = (f.form_at(probe), g.form_at(probe));
        let prod = |t: f64| mul0(ff.value(t), gf.value(t));
        // left end
        if lo == 0.0 {
            let a = ff.asym(End::Zero).mul(&gf.asym(End::Zero));
            match a.limit(End::Zero) {
                None => return ExtReal::infinite(format!("product ~ {a} unbounded at 0")),
                Some(l) => best = best.max(l),
            }
        } else {
            best = best.max(prod(lo));
        }
        // right end
        if hi.is_infinite() {
            let a = ff.asym(End::Inf).mul(&gf.asym(End::Inf));
            match a.limit(End::Inf) {
                None => {
                    return ExtReal::infinite(format!("product ~ {a} grows at infinity"))
                }
                Some(l) => best = best.max(l),
            }
        } else {
            best = best.max(prod(hi));
        }
        let analytic = matches!(ff, Form::Analytic(_)) || matches!(gf, Form::Analytic(_));
        if analytic {
            let y0 = if lo > 0.0 { lo.ln() } else { hi.min(1.0).ln() - 60.0 };
            let y1 = if hi.is_finite() { hi.ln() } else { lo.max(1.0).ln() + 60.0 };
            let (_, v) = quad::golden_max(|y| prod(y.exp()), y0, y1, 120);
            if v.is_finite() {
                best = best.max(v);
            }
        }
    }
    ExtReal::finite(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{q, qi};

    fn two_cells() -> StepFunction {
        StepFunction::cells(vec![0.0, 1.0, 2.0], vec![1.0, 3.0]).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(Grid::new(vec![1.0, 2.0]).is_err());
        assert!(Grid::new(vec![0.0]).is_ok());
    }

    #[test]
    fn unit_mass() {
        let f = StepFunction::indicator(1.0, 1.0);
        assert_eq!(f.total(), ExtReal::finite(1.0));
    }

    #[test]
    fn power_tails() {
        let f = StepFunction::new(Grid::new(vec![0.0, 1.0]).unwrap(), vec![1.0], TailSpec::Power { a: qi(2) })
            .unwrap();
        assert_eq!(f.integrate(1.0, f64::INFINITY).unwrap(), ExtReal::finite(1.0));
        let h = StepFunction::new(Grid::new(vec![0.0, 1.0]).unwrap(), vec![1.0], TailSpec::Power { a: qi(1) })
            .unwrap();
        assert!(h.integrate(1.0, f64::INFINITY).unwrap().is_infinite());
    }

    #[test]
    fn evaluation_is_right_continuous() {
        let f = two_cells();
        assert_eq!(f.eval(0.0), 1.0);
        assert_eq!(f.eval(1.0), 3.0);
        assert_eq!(f.eval(2.0), 0.0);
    }

    #[test]
    fn pow_compose_cases() {
        let f = StepFunction::indicator(1.0, 2.0);
        assert_eq!(f.pow_compose(qi(2)).unwrap().values(), &[4.0]);
        let t = StepFunction::new(Grid::new(vec![0.0, 1.0]).unwrap(), vec![1.0], TailSpec::Power { a: q(1, 2) })
            .unwrap();
        assert_eq!(t.pow_compose(qi(2)).unwrap().tail().unwrap().a, qi(1));
        assert_eq!(f.pow_compose(qi(-1)), Err(FuncError::NegativePowerOfZero));
    }

    #[test]
    fn sup_over_examples() {
        let id_on_unit = StepFunction::from_parts(
            Grid::new(vec![0.0, 1.0]).unwrap(),
            vec![1.0],
            Some(Piece::power(1.0, qi(-1))),
            None,
        )
        .unwrap();
        let one = StepFunction::constant(1.0);
        assert!((sup_over(&id_on_unit, &one).value().unwrap() - 1.0).abs() < 1e-12);
        let grow = StepFunction::power(1.0, q(-1, 2));
        let decay = StepFunction::power(1.0, q(1, 2));
        assert!((sup_over(&grow, &decay).value().unwrap() - 1.0).abs() < 1e-12);
        let fast = StepFunction::power(1.0, qi(-1));
        assert!(sup_over(&fast, &decay).is_infinite());
    }

    #[test]
    fn primitives_are_exact() {
        let f = StepFunction::new(Grid::new(vec![0.0, 1.0]).unwrap(), vec![1.0], TailSpec::Power { a: qi(2) })
            .unwrap();
        let p = f.primitive().unwrap();
        assert_eq!(p.eval(0.5), 0.5);
        assert!((p.eval(2.0) - 1.5).abs() < 1e-15);
        let t = f.tail_primitive().unwrap();
        assert!((t.eval(0.5) - 1.5).abs() < 1e-15);
        assert!((t.eval(4.0) - 0.25).abs() < 1e-15);
        assert!(StepFunction::power(1.0, qi(1)).primitive().is_err());
    }

    #[test]
    fn monotonicity_checks() {
        assert!(!two_cells().is_nonincreasing());
        assert!(StepFunction::power(1.0, q(1, 3)).is_nonincreasing());
        assert!(StepFunction::power(1.0, q(-1, 3)).is_nondecreasing());
    }
}
