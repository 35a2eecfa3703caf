use super::asym::{Asym, End};
use super::curve::{model_head, model_tail};
use crate::exponent::{qf, Q};
use crate::quad;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Analytic piece `c (t+s)^{-a} log^{-b}(e + (t+s)^k)`.
///
/// `k` only matters when `b != 0`; with `k > 0` the log factor acts at
/// infinity and with `k < 0` it acts at the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub c: f64,
    pub a: Q,
    pub b: Q,
    pub k: Q,
    pub shift: f64,
}

impl Piece {
    pub fn power(c: f64, a: Q) -> Piece {
        Piece {
            c,
            a,
            b: Q::zero(),
            k: Q::one(),
            shift: 0.0,
        }
    }

    pub fn power_log(c: f64, a: Q, b: Q, k: Q) -> Piece {
        Piece {
            c,
            a,
            b,
            k,
            shift: 0.0,
        }
    }

    /// Same shape rescaled so that `value(t) = v`.
    pub fn anchored(&self, t: f64, v: f64) -> Piece {
        let unit = Piece { c: 1.0, ..self.clone() };
        let base = unit.value(t);
        Piece {
            c: if v == 0.0 { 0.0 } else { v / base },
            ..unit
        }
    }

    pub fn has_log(&self) -> bool {
        !self.b.is_zero() && !self.k.is_zero()
    }

    fn shape(&self, x: f64) -> f64 {
        let mut v = x.powf(-qf(self.a));
        if self.has_log() {
            let l = (std::f64::consts::E + x.powf(qf(self.k))).ln();
            v *= l.powf(-qf(self.b));
        }
        v
    }

    pub fn value(&self, t: f64) -> f64 {
        if self.c == 0.0 {
            return 0.0;
        }
        let x = t + self.shift;
        if x <= 0.0 {
            return if self.a > Q::zero() {
                f64::INFINITY
            } else if self.a.is_zero() {
                self.c * self.shape(0.0).max(0.0)
            } else {
                0.0
            };
        }
        self.c * self.shape(x)
    }

    pub fn scale(&self, s: f64) -> Piece {
        Piece {
            c: self.c * s,
            ..self.clone()
        }
    }

    /// Pointwise power `value^e`.
    pub fn pow(&self, e: Q) -> Piece {
        Piece {
            c: self.c.powf(qf(e)),
            a: self.a * e,
            b: self.b * e,
            k: self.k,
            shift: self.shift,
        }
    }

    pub fn shifted(&self, ds: f64) -> Piece {
        Piece {
            shift: self.shift + ds,
            ..self.clone()
        }
    }

    /// Asymptotics as `t -> end` (at 0 only meaningful for unshifted pieces).
    pub fn asym(&self, end: End) -> Asym {
        if self.c == 0.0 {
            return Asym::Zero;
        }
        let neg_a = -self.a;
        match end {
            End::Inf => {
                if self.has_log() && self.k > Q::zero() {
                    Asym::pow(self.c * qf(self.k).powf(-qf(self.b)), neg_a, -self.b)
                } else {
                    Asym::pow(self.c, neg_a, Q::zero())
                }
            }
            End::Zero => {
                if self.shift > 0.0 {
                    return Asym::constant(self.value(0.0));
                }
                if self.has_log() && self.k < Q::zero() {
                    Asym::pow(self.c * qf(-self.k).powf(-qf(self.b)), neg_a, -self.b)
                } else {
                    Asym::pow(self.c, neg_a, Q::zero())
                }
            }
        }
    }

    /// `∫_lo^hi value` for `0 <= lo < hi < inf`; `+inf` if divergent at `lo`.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        if !(hi > lo) || self.c == 0.0 {
            return 0.0;
        }
        let x0 = lo + self.shift;
        let x1 = hi + self.shift;
        if !self.has_log() {
            let a = qf(self.a);
            if self.a == Q::one() {
                if x0 <= 0.0 {
                    return f64::INFINITY;
                }
                return self.c * (x1 / x0).ln();
            }
            let e = 1.0 - a;
            if x0 <= 0.0 {
                if e <= 0.0 {
                    return f64::INFINITY;
                }
                return self.c * x1.powf(e) / e;
            }
            return self.c * (x1.powf(e) - x0.powf(e)) / e;
        }
        if x0 <= 0.0 {
            let at0 = Piece { shift: 0.0, ..self.clone() }.asym(End::Zero);
            if !at0.integrable(End::Zero) {
                return f64::INFINITY;
            }
            let cut = x1 * (-40f64).exp();
            let f = |x: f64| self.c * self.shape(x);
            return model_head(&at0, cut, f(cut)) + quad::integrate_log(f, cut, x1);
        }
        quad::integrate_log(|x| self.c * self.shape(x), x0, x1)
    }

    /// `∫_lo^∞ value`, `+inf` when divergent.
    pub fn integral_to_inf(&self, lo: f64) -> f64 {
        if self.c == 0.0 {
            return 0.0;
        }
        let at_inf = self.asym(End::Inf);
        if !at_inf.integrable(End::Inf) {
            return f64::INFINITY;
        }
        let x0 = lo + self.shift;
        if !self.has_log() {
            let e = 1.0 - qf(self.a);
            if x0 <= 0.0 {
                return f64::INFINITY;
            }
            return -self.c * x0.powf(e) / e;
        }
        let start = if x0 > 0.0 { x0 } else { 1.0 };
        let cut = start * 40f64.exp();
        let f = |x: f64| self.c * self.shape(x);
        let head = if x0 > 0.0 { 0.0 } else { self.integral(lo, 1.0 - self.shift) };
        head + quad::integrate_log(f, start, cut) + model_tail(&at_inf, cut, f(cut))
    }

    /// Solves `value(t) = lambda` for strictly monotone pieces.
    pub fn solve(&self, lambda: f64, lo: f64, hi: f64) -> f64 {
        if !self.has_log() && !self.a.is_zero() {
            let x = (lambda / self.c).powf(-1.0 / qf(self.a));
            return x - self.shift;
        }
        let f = |t: f64| self.value(t) - lambda;
        let (mut a, mut b) = (lo.max(1e-300), if hi.is_finite() { hi } else { lo.max(1.0) * 1e300 });
        let increasing = self.value(b) > self.value(a);
        for _ in 0..400 {
            let m = if a > 0.0 && b / a > 4.0 { (a * b).sqrt() } else { 0.5 * (a + b) };
            if (f(m) > 0.0) == increasing {
                b = m;
            } else {
                a = m;
            }
            if b - a <= 1e-15 * b {
                break;
            }
        }
        0.5 * (a + b)
    }

    /// Whether the piece is non-increasing on `[lo, hi]`.
    pub fn is_nonincreasing(&self, lo: f64, hi: f64) -> bool {
        if self.c == 0.0 {
            return true;
        }
        let bk = self.b * self.k;
        if !self.has_log() || bk.is_zero() {
            return self.a >= Q::zero();
        }
        if self.a >= Q::zero() && bk >= Q::zero() {
            return true;
        }
        let hi = if hi.is_finite() { hi } else { lo.max(1.0) * 1e12 };
        let lo = lo.max(hi * 1e-12);
        let n = 400;
        let mut prev = self.value(lo);
        for i in 1..=n {
            let t = lo * (hi / lo).powf(i as f64 / n as f64);
            let v = self.value(t);
            if v > prev * (1.0 + 1e-12) {
                return false;
            }
            prev = v;
        }
        true
    }

    pub fn is_nondecreasing(&self, lo: f64, hi: f64) -> bool {
        self.pow(-Q::one()).is_nonincreasing(lo, hi)
    }
}
