//! Necessary conditions: centered cube pairs and block sums over translated
//! cubes. Block sums are one-dimensional.

use super::ExtremalError;
use crate::criteria::{full_norm, head_norm, profiles, ExponentConfig, Profiles};
use crate::exponent::{qf, Exponent};
use crate::extended::ExtReal;
use crate::funcspace::{model_tail, Asym, End, StepFunction, WeightSpec};
use serde::{Deserialize, Serialize};

/// Number of explicitly summed blocks beyond the last breakpoint.
const EXPLICIT_BLOCKS: usize = 20_000;

/// Lebesgue measure of the unit ball in `R^d`.
pub fn unit_ball_volume(d: u32) -> f64 {
    let (mut w, mut k) = if d % 2 == 0 { (1.0, 0) } else { (2.0, 1) };
    while k < d {
        k += 2;
        w *= 2.0 * std::f64::consts::PI / k as f64;
    }
    w
}

fn prepared(u: &WeightSpec, v: &WeightSpec) -> Result<Result<Profiles, ExtReal>, ExtremalError> {
    profiles(u, v).map_err(|e| ExtremalError::Precondition(e.to_string()))
}

fn need_line(cfg: &ExponentConfig) -> Result<(), ExtremalError> {
    if cfg.d != 1 {
        return Err(ExtremalError::Precondition(
            "block conditions are evaluated for d = 1 only".into(),
        ));
    }
    Ok(())
}

/// `sup (∫_A u^q)^{1/q} (∫_B v^{-p'})^{1/p'}` over centered pairs with
/// `|A| |B| = 1` in side length (intervals for `d = 1`, balls of the same
/// volume otherwise).
pub fn cube_pair_condition(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
) -> Result<ExtReal, ExtremalError> {
    let pr = match prepared(u, v)? {
        Ok(pr) => pr,
        Err(ext) => return Ok(ext),
    };
    if is_zero(&pr.u) || is_zero(&pr.w) {
        return Ok(ExtReal::zero());
    }
    let om = unit_ball_volume(cfg.d);
    let (q, pc) = (cfg.q, cfg.p_conj());
    let nu = match head_norm(&pr.u, q) {
        Ok(c) => c,
        Err(e) => return Ok(e.to_ext()),
    };
    let nw = match head_norm(&pr.w, pc) {
        Ok(c) => c,
        Err(e) => return Ok(e.to_ext()),
    };
    // A of volume ω s, B of volume 1/(ω s); s is the profile measure of A.
    let a = nu.scale(om.powf(qf(q.inv())));
    let b = nw.reflect().dilate(om * om).scale(om.powf(qf(pc.inv())));
    Ok(a.mul(&b).sup().0)
}

fn is_zero(h: &StepFunction) -> bool {
    h.lead().is_none() && h.tail().is_none() && h.values().iter().all(|v| *v == 0.0)
}

/// `(Σ_{n ∈ Z} (∫_{s n + s[-1/2,1/2]} h(|x|)^a dx)^{b/a})^{1/b}` on the line.
pub fn block_sum(h: &StepFunction, a: Exponent, b: Exponent, s: f64) -> ExtReal {
    let (av, bv) = match (a.value(), b.value()) {
        (Some(x), Some(y)) => (x, y),
        _ => return ExtReal::indeterminate("block sums need finite exponents"),
    };
    if is_zero(h) {
        return ExtReal::zero();
    }
    let ha = h.pow_compose(av).expect("positive power");
    let prim = match ha.primitive() {
        Ok(c) => c,
        Err(e) => return e.to_ext(),
    };
    let hb = h.pow_compose(bv).expect("positive power");
    let tail_asym = hb.asym(End::Inf);
    if !tail_asym.integrable(End::Inf) {
        return ExtReal::infinite(format!(
            "block terms decay like {tail_asym}, not summable"
        ));
    }
    let ratio = qf(bv / av);
    let term = |x: f64| -> f64 {
        let m = (prim.eval(x + 0.5 * s) - prim.eval((x - 0.5 * s).max(0.0))).max(0.0);
        if m == 0.0 {
            0.0
        } else {
            m.powf(ratio)
        }
    };
    let centre = (2.0 * prim.eval(0.5 * s)).powf(ratio);
    let last = h.grid().last();
    let n_end = (last / s).ceil() as usize + EXPLICIT_BLOCKS;
    let mut side = 0.0;
    for n in 1..=n_end {
        side += term(n as f64 * s);
    }
    if tail_asym != Asym::Zero {
        // remaining blocks via the integral of the term's power-law model in n
        let n0 = n_end as f64 + 0.5;
        side += model_tail(&tail_asym, n0, term(n0 * s));
    }
    ExtReal::from_f64(centre + 2.0 * side, "overflow in block sum").powf(1.0 / qf(bv))
}

/// The block condition for `p > 2` at scale `s` (d = 1):
/// `(∫_{|ξ| < 1/(2s)} u^q)^{1/q} (Σ_n (∫_{sn + s[-1/2,1/2]} v^{-p'})^{p#/p'})^{1/p#}`.
pub fn block_l2_condition(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
    s: f64,
) -> Result<ExtReal, ExtremalError> {
    need_line(cfg)?;
    let two = Exponent::from_int(2);
    if !two.lt(&cfg.p) {
        return Err(ExtremalError::Precondition(format!(
            "block condition needs p > 2 (p# finite), got p = {}",
            cfg.p
        )));
    }
    if !(s > 0.0) {
        return Err(ExtremalError::Precondition("scale s must be positive".into()));
    }
    let pr = match prepared(u, v)? {
        Ok(pr) => pr,
        Err(ext) => return Ok(ext),
    };
    if is_zero(&pr.u) {
        return Ok(ExtReal::zero());
    }
    let head = match head_norm(&pr.u, cfg.q) {
        // centered interval of length 1/s: measure 2 * (1/(2s)) in the profile variable
        Ok(c) => ExtReal::finite(c.eval(0.5 / s) * 2f64.powf(qf(cfg.q.inv()))),
        Err(e) => e.to_ext(),
    };
    let blocks = block_sum(&pr.w, cfg.p_conj(), cfg.p_sharp(), s);
    Ok(head.mul(&blocks))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricBlocks {
    /// Product of the two block sums at scale `t`.
    pub blocks: ExtReal,
    /// `(∫_{1/t}^∞ v^{-p#})^{1/p#} (∫_t^∞ u^{q#})^{1/q#}`.
    pub tails: ExtReal,
}

/// Both forms of the symmetric block condition for `q < 2 < p` at scale `t` (d = 1).
pub fn symmetric_block_condition(
    u: &WeightSpec,
    v: &WeightSpec,
    cfg: &ExponentConfig,
    t: f64,
) -> Result<SymmetricBlocks, ExtremalError> {
    need_line(cfg)?;
    let two = Exponent::from_int(2);
    if !(cfg.q.lt(&two) && two.lt(&cfg.p)) {
        return Err(ExtremalError::Precondition(format!(
            "symmetric blocks need q < 2 < p, got {cfg}"
        )));
    }
    if !(t > 0.0) {
        return Err(ExtremalError::Precondition("scale t must be positive".into()));
    }
    let pr = match prepared(u, v)? {
        Ok(pr) => pr,
        Err(ext) => {
            return Ok(SymmetricBlocks {
                blocks: ext.clone(),
                tails: ext,
            })
        }
    };
    let bv = block_sum(&pr.w, cfg.p_conj(), cfg.p_sharp(), 1.0 / t);
    let bu = block_sum(&pr.u, cfg.q, cfg.q_sharp(), t);
    let tail_norm = |h: &StepFunction, e: Exponent, from: f64| -> ExtReal {
        let ev = e.value().expect("finite sharp exponent");
        match h.pow_compose(ev).and_then(|g| g.integrate(from, f64::INFINITY)) {
            Ok(x) => x.powf(qf(e.inv())),
            Err(err) => ExtReal::indeterminate(err.to_string()),
        }
    };
    let tv = tail_norm(&pr.w, cfg.p_sharp(), 1.0 / t);
    let tu = tail_norm(&pr.u, cfg.q_sharp(), t);
    Ok(SymmetricBlocks {
        blocks: bv.mul(&bu),
        tails: tv.mul(&tu),
    })
}

/// `‖u‖_q ‖1/v‖_{p'}` for weights on the line; exposed for witness checks.
pub fn degenerate_product(u: &WeightSpec, v: &WeightSpec, cfg: &ExponentConfig) -> Result<ExtReal, ExtremalError> {
    Ok(match prepared(u, v)? {
        Ok(pr) => full_norm(&pr.u, cfg.q).mul(&full_norm(&pr.w, cfg.p_conj())),
        Err(ext) => ext,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::Direction;

    const DEC: Direction = Direction::RadialNonIncreasing;
    const INC: Direction = Direction::RadialNonDecreasing;

    fn cfg(p: &str, q: &str) -> ExponentConfig {
        ExponentConfig::parse(p, q, 1).unwrap()
    }

    fn w(s: &str, dir: Direction) -> WeightSpec {
        WeightSpec::parse(s, dir).unwrap()
    }

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn cube_plancherel() {
        let c = cube_pair_condition(&WeightSpec::one(DEC), &WeightSpec::one(INC), &cfg("2", "2")).unwrap();
        assert!((c.value().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cube_pitt_balance() {
        let c = cfg("4/3", "2");
        assert!(cube_pair_condition(&w("pow(1/4)", DEC), &w("pow(0)", INC), &c).unwrap().is_finite());
        assert!(cube_pair_condition(&w("pow(0.35)", DEC), &w("pow(0)", INC), &c).unwrap().is_infinite());
    }

    #[test]
    fn cube_tracks_c3() {
        let c = cfg("3/2", "3");
        let (u, v) = (w("ind(1)", DEC), w("pow(1/5)", INC));
        let a = cube_pair_condition(&u, &v, &c).unwrap().value().unwrap();
        let b = crate::criteria::C3(&u, &v, &c).unwrap().value().unwrap();
        assert!(a / b > 0.25 && a / b < 4.0, "{a} {b}");
    }

    #[test]
    fn block_sums() {
        // v = 1 gives infinitely many equal blocks
        let c = cfg("4", "2");
        let r = block_l2_condition(&WeightSpec::one(DEC), &WeightSpec::one(INC), &c, 1.0).unwrap();
        assert!(r.is_infinite());
        let zero = WeightSpec::table(StepFunction::zero(), 1, DEC).unwrap();
        assert_eq!(block_l2_condition(&zero, &WeightSpec::one(INC), &c, 1.0).unwrap(), ExtReal::zero());
        assert!(block_l2_condition(&WeightSpec::one(DEC), &WeightSpec::one(INC), &cfg("2", "2"), 1.0).is_err());
        // 1/v = ind(1), s = 1: blocks n = 0 (full [-1/2,1/2]) and n = ±1 (half each)
        let r = block_l2_condition(&w("ind(1)", DEC), &w("ind(1)", INC), &c, 1.0).unwrap();
        // p' = 4/3, p# = 4: (1 + 2 (1/2)^3)^{1/4}; head: (∫_{|ξ|<1/2} 1)^{1/2} = 1
        let expect = (1.0f64 + 2.0 * 0.125).powf(0.25);
        assert!((r.value().unwrap() - expect).abs() < 1e-12, "{r}");
    }

    #[test]
    fn power_tail_block_sum() {
        let g = StepFunction::new(
            crate::funcspace::Grid::new(vec![0.0, 1.0]).unwrap(),
            vec![1.0],
            crate::funcspace::TailSpec::Power { a: crate::exponent::qi(2) },
        )
        .unwrap();
        // blocks of width 1 around n: ∫ of t^{-2} over [n-1/2, n+1/2] = 1/(n^2 - 1/4) for n >= 2
        let got = block_sum(&g, Exponent::from_int(1), Exponent::from_int(1), 1.0)
            .value()
            .unwrap();
        // total mass: 2 ∫_0^∞ g = 2 (1 + 1) = 4
        assert!((got - 4.0).abs() < 1e-6, "{got}");
    }

    #[test]
    fn symmetric_forms() {
        let c = cfg("4", "1");
        let r = symmetric_block_condition(&w("pow(0)", DEC), &w("pow(1)", INC), &c, 1.0).unwrap();
        assert!(r.tails.is_infinite());
        let r = symmetric_block_condition(&w("ind(1)", DEC), &WeightSpec::one(INC), &c, 2.0).unwrap();
        assert_eq!(r.tails, ExtReal::zero());
    }
}
