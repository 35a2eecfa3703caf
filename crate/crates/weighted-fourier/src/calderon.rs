//! Calderón domination `F ≺ G`:
//! `∫_0^x F*^2 ≤ ∫_0^x (∫_0^{1/t} G*)^2 dt` for every `x > 0`.

use crate::extended::ExtReal;
use crate::extremal::signal::{dft, SampledSignal};
use crate::funcspace::{Curve, StepFunction};
use crate::quad;
use crate::rearrange::{star, RearrangeError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationCert {
    pub dominated: bool,
    /// `sup_x (psi(x) / phi(x))^{1/2}`.
    pub best_k: ExtReal,
    /// Where the supremum is attained; `None` for a limit at 0 or infinity.
    pub witness_x: Option<f64>,
}

/// `x -> ∫_0^x F*^2`.
struct Psi {
    f2: StepFunction,
    cells: Option<(Vec<f64>, Vec<f64>, Vec<f64>)>,
}

impl Psi {
    fn new(f: &StepFunction) -> Result<Psi, RearrangeError> {
        let s = star(f)?;
        let f2 = s.pow_compose(crate::exponent::qi(2))?;
        let plain = f2.lead().is_none() && f2.tail().is_none();
        let cells = plain.then(|| {
            let b = f2.grid().points().to_vec();
            let v = f2.values().to_vec();
            let mut cum = vec![0.0];
            for i in 0..v.len() {
                cum.push(cum[i] + v[i] * (b[i + 1] - b[i]));
            }
            (b, v, cum)
        });
        Ok(Psi { f2, cells })
    }

    fn eval(&self, x: f64) -> ExtReal {
        match &self.cells {
            Some((b, v, cum)) => {
                if x >= *b.last().unwrap() {
                    return ExtReal::finite(*cum.last().unwrap());
                }
                let i = b.partition_point(|t| *t <= x) - 1;
                ExtReal::finite(cum[i] + v[i] * (x - b[i]))
            }
            None => self.f2.integrate(0.0, x).expect("valid interval"),
        }
    }

    fn total(&self) -> ExtReal {
        self.f2.total()
    }

    fn knots(&self) -> Vec<f64> {
        self.f2.grid().points()[1..].to_vec()
    }
}

/// `x -> ∫_0^x (∫_0^{1/t} G*)^2 dt`.
enum Phi {
    /// Exact: on `(tau_j, tau_{j+1}]` the inner integral is `A + B/t`.
    Cells {
        taus: Vec<f64>,
        a: Vec<f64>,
        b: Vec<f64>,
        cum: Vec<f64>,
        divergent: bool,
    },
    Numeric(Result<Curve, String>),
}

fn square_integral(a: f64, b: f64, t0: f64, t1: f64) -> f64 {
    let mut v = a * a * (t1 - t0);
    if a != 0.0 && b != 0.0 {
        v += 2.0 * a * b * (t1 / t0).ln();
    }
    if b != 0.0 {
        v += b * b * (1.0 / t0 - 1.0 / t1);
    }
    v
}

impl Phi {
    fn new(g: &StepFunction) -> Result<Phi, RearrangeError> {
        let s = star(g)?;
        let const_tail = match s.tail() {
            None => Some(0.0),
            Some(p) if p.a == num_traits::Zero::zero() && !p.has_log() => Some(p.c),
            _ => None,
        };
        if s.lead().is_some() || const_tail.is_none() {
            let prim = s.primitive().map_err(|e| e.to_string());
            let curve = prim.and_then(|p| {
                p.reflect()
                    .powq(crate::exponent::qi(2))
                    .head_integral()
                    .map_err(|e| e.to_string())
            });
            return Ok(Phi::Numeric(curve));
        }
        let c_tail = const_tail.unwrap();
        let bp = s.grid().points();
        let vals = s.values();
        let n = vals.len();
        let mut cum_s = vec![0.0];
        for i in 0..n {
            cum_s.push(cum_s[i] + vals[i] * (bp[i + 1] - bp[i]));
        }
        // t-cells in increasing t: first the region s >= bn, then cells n-1 .. 0
        let mut taus = vec![0.0];
        let mut a = Vec::new();
        let mut b = Vec::new();
        let bn = *bp.last().unwrap();
        a.push(cum_s[n] - c_tail * bn);
        b.push(c_tail);
        for i in (0..n).rev() {
            taus.push(1.0 / bp[i + 1]);
            a.push(cum_s[i] - vals[i] * bp[i]);
            b.push(vals[i]);
        }
        let divergent = b[0] != 0.0;
        let mut cum = vec![0.0];
        for j in 1..taus.len() {
            let prev = *cum.last().unwrap();
            let piece = if j == 1 {
                if divergent {
                    f64::INFINITY
                } else {
                    a[0] * a[0] * taus[1]
                }
            } else {
                square_integral(a[j - 1], b[j - 1], taus[j - 1], taus[j])
            };
            cum.push(prev + piece);
        }
        Ok(Phi::Cells {
            taus,
            a,
            b,
            cum,
            divergent,
        })
    }

    fn eval(&self, x: f64) -> ExtReal {
        match self {
            Phi::Cells {
                taus,
                a,
                b,
                cum,
                divergent,
            } => {
                if *divergent {
                    return ExtReal::infinite("inner integral of G* grows like 1/t near 0");
                }
                let j = taus.partition_point(|t| *t <= x) - 1;
                let part = if j == 0 {
                    a[0] * a[0] * x
                } else {
                    square_integral(a[j], b[j], taus[j], x)
                };
                ExtReal::finite(cum[j] + part)
            }
            Phi::Numeric(Ok(c)) => ExtReal::from_f64(c.eval(x), "inner integral diverges"),
            Phi::Numeric(Err(e)) => ExtReal::infinite(e.clone()),
        }
    }

    fn total(&self) -> ExtReal {
        match self {
            Phi::Cells { taus, b, cum, divergent, .. } => {
                if *divergent {
                    return ExtReal::infinite("inner integral of G* grows like 1/t near 0");
                }
                // on the last region the inner integral is B/t
                let j = taus.len() - 1;
                if j == 0 {
                    return ExtReal::zero();
                }
                ExtReal::finite(cum[j] + b[j] * b[j] / taus[j])
            }
            Phi::Numeric(Ok(c)) => match c.at_inf.limit(crate::funcspace::End::Inf) {
                Some(v) => ExtReal::finite(v),
                None => ExtReal::infinite("phi grows without bound"),
            },
            Phi::Numeric(Err(e)) => ExtReal::infinite(e.clone()),
        }
    }

    fn knots(&self) -> Vec<f64> {
        match self {
            Phi::Cells { taus, .. } => taus[1..].to_vec(),
            Phi::Numeric(Ok(c)) => c.knots().to_vec(),
            Phi::Numeric(Err(_)) => vec![],
        }
    }
}

/// `∫_0^x F*^2`.
pub fn psi(f: &StepFunction, x: f64) -> Result<ExtReal, RearrangeError> {
    Ok(Psi::new(f)?.eval(x))
}

/// `∫_0^x (∫_0^{1/t} G*)^2 dt`.
pub fn phi(g: &StepFunction, x: f64) -> Result<ExtReal, RearrangeError> {
    Ok(Phi::new(g)?.eval(x))
}

fn ratio(p: &ExtReal, q: &ExtReal) -> ExtReal {
    match (p, q) {
        (ExtReal::Finite { value: a }, ExtReal::Finite { value: b }) => {
            if *a == 0.0 {
                ExtReal::zero()
            } else if *b == 0.0 {
                ExtReal::infinite("phi vanishes where psi is positive")
            } else {
                ExtReal::finite(a / b)
            }
        }
        (ExtReal::Finite { value }, ExtReal::Infinite { .. }) if *value >= 0.0 => ExtReal::zero(),
        (ExtReal::Infinite { reason }, _) => ExtReal::infinite(reason.clone()),
        (_, other) => other.clone(),
    }
}

/// Smallest `K` with `F ≺ K G`.
pub fn dominates(f: &StepFunction, g: &StepFunction) -> Result<DominationCert, RearrangeError> {
    let ps = Psi::new(f)?;
    let ph = Phi::new(g)?;
    let mut cuts: Vec<f64> = ps.knots();
    cuts.extend(ph.knots());
    cuts.retain(|x| *x > 0.0 && x.is_finite());
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    if cuts.is_empty() {
        cuts.push(1.0);
    }
    let r = |x: f64| ratio(&ps.eval(x), &ph.eval(x));
    let mut best = 0.0f64;
    let mut witness = None;
    let mut consider = |v: ExtReal, x: Option<f64>, best: &mut f64| -> Option<DominationCert> {
        match v {
            ExtReal::Finite { value } => {
                if value > *best {
                    *best = value;
                    witness = x;
                }
                None
            }
            other => Some(DominationCert {
                dominated: false,
                best_k: other,
                witness_x: x,
            }),
        }
    };
    // limits at both ends
    let x_small = cuts[0] * 1e-9;
    if let Some(c) = consider(r(x_small), None, &mut best) {
        return Ok(c);
    }
    if let Some(c) = consider(ratio(&ps.total(), &ph.total()), None, &mut best) {
        return Ok(c);
    }
    let vals: Vec<ExtReal> = cuts.iter().map(|&x| r(x)).collect();
    for (x, v) in cuts.iter().zip(vals.iter()) {
        if let Some(c) = consider(v.clone(), Some(*x), &mut best) {
            return Ok(c);
        }
    }
    let mut edges = vec![x_small];
    edges.extend(cuts.iter().copied());
    edges.push(cuts.last().unwrap() * 1e9);
    for w in edges.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        // both psi and phi are non-decreasing: psi(x1)/phi(x0) bounds the cell
        let bound = ratio(&ps.eval(x1), &ph.eval(x0));
        if let ExtReal::Finite { value } = bound {
            if value <= best * (1.0 + 1e-12) {
                continue;
            }
        }
        let (y, v) = quad::golden_max(
            |y| r(y.exp()).to_f64().min(f64::MAX),
            x0.ln(),
            x1.ln(),
            80,
        );
        if v > best {
            best = v;
            witness = Some(y.exp());
        }
    }
    let k = best.sqrt();
    Ok(DominationCert {
        dominated: k <= 1.0 + 1e-12,
        best_k: ExtReal::finite(k),
        witness_x: witness,
    })
}

/// `|f|` sampled with cell width `h`, as a step function on the half-line.
pub fn modulus_profile(s: &SampledSignal) -> StepFunction {
    let h = s.spacing();
    let n = s.samples.len();
    let pts: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let vals: Vec<f64> = s.samples.iter().map(|z| z.norm()).collect();
    StepFunction::cells(pts, vals).expect("uniform grid")
}

/// Largest Calderón constant of the discrete Fourier transform over `samples`.
pub fn verify_joint_type(samples: &[SampledSignal]) -> Result<ExtReal, RearrangeError> {
    let ks: Result<Vec<ExtReal>, RearrangeError> = samples
        .par_iter()
        .map(|s| {
            let fh = dft(s);
            Ok(dominates(&modulus_profile(&fh), &modulus_profile(s))?.best_k)
        })
        .collect();
    Ok(ks?.into_iter().fold(ExtReal::zero(), |a, b| a.max(&b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::funcspace::Grid;

    fn ind(r: f64, c: f64) -> StepFunction {
        StepFunction::indicator(r, c)
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&ind(1.0, 1.0), 2.0).unwrap(), ExtReal::finite(1.0));
        let p = StepFunction::power(1.0, q(1, 4));
        assert!((psi(&p, 1.0).unwrap().value().unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&ind(1.0, 1.0), 1.0).unwrap(), ExtReal::finite(1.0));
        assert_eq!(phi(&StepFunction::zero(), 3.0).unwrap(), ExtReal::zero());
        let v = phi(&ind(1.0, 1.0), 2.0).unwrap().value().unwrap();
        assert!((v - 1.5).abs() < 1e-15);
    }

    #[test]
    fn phi_matches_numeric_path() {
        // same G once as cells and once with a lead piece equal to a constant
        let g = StepFunction::cells(vec![0.0, 0.5, 2.0], vec![3.0, 1.0]).unwrap();
        let g_lead = StepFunction::from_parts(
            Grid::new(vec![0.0, 0.5, 2.0]).unwrap(),
            vec![3.0, 1.0],
            Some(crate::funcspace::Piece::power(3.0, crate::exponent::qi(0))),
            None,
        )
        .unwrap();
        for x in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let a = phi(&g, x).unwrap().value().unwrap();
            let b = phi(&g_lead, x).unwrap().value().unwrap();
            assert!((a - b).abs() < 1e-8 * a, "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn domination_examples() {
        let g = ind(1.0, 1.0);
        let c = dominates(&g, &g).unwrap();
        assert!(c.dominated);
        assert!((c.best_k.value().unwrap() - 1.0).abs() < 1e-12);
        let c2 = dominates(&ind(1.0, 2.0), &g).unwrap();
        assert!(!c2.dominated);
        assert!((c2.best_k.value().unwrap() - 2.0).abs() < 1e-12);
        let z = dominates(&StepFunction::zero(), &g).unwrap();
        assert!(z.dominated);
        assert_eq!(z.best_k, ExtReal::zero());
        let inf = dominates(&g, &StepFunction::zero()).unwrap();
        assert!(inf.best_k.is_infinite());
    }
}
