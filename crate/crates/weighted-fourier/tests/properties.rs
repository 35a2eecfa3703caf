use num_complex::Complex64;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weighted_fourier::calderon::{dominates, modulus_profile};
use weighted_fourier::criteria::{evaluate, parse_exponent, ExponentConfig, Regime};
use weighted_fourier::exponent::{q as rat, qi};
use weighted_fourier::extremal::{bracket_constant, dft, Budget, Resolution, SampledSignal};
use weighted_fourier::funcspace::{Direction, Grid, Piece, StepFunction, TailSpec, WeightSpec};
use weighted_fourier::hardy::{hardy_K, reverse_hardy_K, HardyKind, HardyProblem};
use weighted_fourier::norms::{
    bochkarev_norm, expL_pair, gamma_norm, lorentz_norm, optimal_Y_norm, theta_norm, theta_norm_with, Rearr, SequenceData,
};
use weighted_fourier::rearrange::{distribution, double_star, hl_pairing, star};
use weighted_fourier::{ExtReal, Exponent};

const DEC: Direction = Direction::RadialNonIncreasing;
const INC: Direction = Direction::RadialNonDecreasing;
const REL: f64 = 1e-12;
/// Constants built from adaptive quadrature (`C6`, `C9`) scale to this accuracy.
const QUAD_REL: f64 = 1e-8;
/// `Θ` with `b**` in place of `b*`; 3000 random sequences gave at most 1.546 (p = 3).
const THETA_STARSTAR_BAND: f64 = 2.0;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

fn cells() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((0.1f64..3.0, 0.0f64..5.0), 1..8).prop_map(|v| {
        let mut pts = vec![0.0];
        for (w, _) in &v {
            pts.push(pts.last().unwrap() + w);
        }
        (pts, v.into_iter().map(|(_, x)| x).collect())
    })
}

fn step() -> impl Strategy<Value = StepFunction> {
    cells().prop_map(|(p, v)| StepFunction::cells(p, v).unwrap())
}

fn step_with_tail() -> impl Strategy<Value = StepFunction> {
    (cells(), prop::sample::select(vec![2i64, 3, 5])).prop_map(|((p, v), a)| {
        StepFunction::new(Grid::new(p).unwrap(), v, TailSpec::Power { a: qi(a) }).unwrap()
    })
}

fn probes(f: &StepFunction) -> Vec<f64> {
    let mut out = vec![1e-6];
    for w in f.grid().points().windows(2) {
        out.extend([w[0] + 1e-9, 0.5 * (w[0] + w[1]), w[1] - 1e-9]);
    }
    out.push(f.grid().last() + 1.0);
    out
}

fn signal(seed: u64) -> SampledSignal {
    SampledSignal::random_packets(256, 16.0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn integrate_is_additive(f in step_with_tail(), a in 0.0f64..10.0, b in 0.0f64..10.0, c in 0.0f64..40.0) {
        let mut x = [a, b, c];
        x.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let whole = f.integrate(x[0], x[2]).unwrap().to_f64();
        let parts = f.integrate(x[0], x[1]).unwrap().to_f64() + f.integrate(x[1], x[2]).unwrap().to_f64();
        prop_assert!((whole - parts).abs() <= REL * whole.abs().max(1.0));
    }

    #[test]
    fn pow_compose_one_is_identity(f in step_with_tail()) {
        prop_assert_eq!(f.pow_compose(qi(1)).unwrap().total(), f.total());
    }

    #[test]
    fn table_integral_matches_midpoint_refinement(f in step(), a in 0.0f64..5.0, len in 0.0f64..10.0) {
        let b = a + len;
        let mut pts: Vec<f64> = f.grid().points().iter().copied().filter(|x| *x > a && *x < b).collect();
        pts.insert(0, a);
        pts.push(b);
        let mid: f64 = pts
            .windows(2)
            .flat_map(|w| (0..8).map(move |k| (w[0], (w[1] - w[0]) / 8.0, k)))
            .map(|(x0, h, k)| h * f.eval(x0 + (k as f64 + 0.5) * h))
            .sum();
        prop_assert!(rel_close(f.integrate(a, b).unwrap().to_f64(), mid, 1e-9) || mid.abs() < 1e-12);
    }

    #[test]
    fn star_is_equimeasurable_and_idempotent(f in step()) {
        let fs = star(&f).unwrap();
        let (d, ds) = (distribution(&f).unwrap(), distribution(&fs).unwrap());
        for l in f.values().iter().flat_map(|v| [*v, 0.5 * v, 0.999 * v]) {
            prop_assert!(rel_close(d.eval(l), ds.eval(l), REL) || d.eval(l) == ds.eval(l));
        }
        let fss = star(&fs).unwrap();
        for t in probes(&fs) {
            prop_assert!(rel_close(fs.eval(t), fss.eval(t), REL) || fs.eval(t) == fss.eval(t));
        }
    }

    #[test]
    fn star_is_monotone((p, v) in cells(), extra in prop::collection::vec(0.0f64..2.0, 8)) {
        let f = StepFunction::cells(p.clone(), v.clone()).unwrap();
        let g = StepFunction::cells(p, v.iter().zip(&extra).map(|(a, b)| a + b).collect()).unwrap();
        let (fs, gs) = (star(&f).unwrap(), star(&g).unwrap());
        for t in probes(&g) {
            prop_assert!(fs.eval(t) <= gs.eval(t) * (1.0 + REL));
        }
    }

    #[test]
    fn double_star_dominates_star(f in step()) {
        let fs = star(&f).unwrap();
        let fss = double_star(&f).unwrap();
        let ts = probes(&fs);
        for t in &ts {
            prop_assert!(fss.eval(*t) >= fs.eval(*t) * (1.0 - REL));
        }
        for w in ts.windows(2) {
            prop_assert!(fs.eval(w[1]) <= fs.eval(w[0]) * (1.0 + REL));
            prop_assert!(fss.eval(w[1]) <= fss.eval(w[0]) * (1.0 + REL));
        }
    }

    #[test]
    fn hardy_littlewood_pairing(f in step(), g in step()) {
        let (a, b) = hl_pairing(&f, &g).unwrap();
        prop_assert!(a.to_f64() <= b.to_f64() * (1.0 + REL));
    }

    #[test]
    fn domination_scales_and_is_monotone(f in step(), g in step(), c in 0.1f64..10.0, bump in 0.0f64..1.0) {
        prop_assume!(g.values().iter().any(|x| *x > 0.0));
        let k = dominates(&f, &g).unwrap().best_k;
        let kc = dominates(&f.scale(c), &g).unwrap().best_k;
        if let (Some(k), Some(kc)) = (k.value(), kc.value()) {
            prop_assert!(rel_close(kc, c * k, 1e-9) || (k == 0.0 && kc == 0.0));
        }
        let bigger = StepFunction::cells(
            f.grid().points().to_vec(),
            f.values().iter().map(|x| x + bump).collect(),
        ).unwrap();
        let k2 = dominates(&bigger, &g).unwrap().best_k;
        prop_assert!(k.to_f64() <= k2.to_f64() * (1.0 + 1e-9));
    }

    #[test]
    fn fourier_legs(seed in 0u64..10_000) {
        let s = signal(seed);
        let fh = modulus_profile(&dft(&s));
        let head = star(&fh).unwrap().pow_compose(qi(2)).unwrap().primitive().unwrap();
        let l2 = s.norm(2.0).powi(2);
        for k in -8..=8 {
            let x = 2f64.powi(k);
            prop_assert!(head.eval(x) <= l2 * (1.0 + 1e-6));
        }
        prop_assert!(dft(&s).norm(f64::INFINITY) <= s.norm(1.0) + 1e-9);
        prop_assert!((dft(&s).norm(2.0) / s.norm(2.0) - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn dft_is_linear(s1 in 0u64..1000, s2 in 0u64..1000, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let (f, g) = (signal(s1), signal(s2 + 1000));
        let mix = SampledSignal::new(
            f.samples.iter().zip(&g.samples).map(|(x, y)| x * a + y * b).collect(),
            f.length,
        ).unwrap();
        let lhs = dft(&mix);
        let (ff, gg) = (dft(&f), dft(&g));
        let scale = ff.norm(f64::INFINITY).max(gg.norm(f64::INFINITY)).max(1.0);
        for i in 0..lhs.samples.len() {
            let rhs: Complex64 = ff.samples[i] * a + gg.samples[i] * b;
            prop_assert!((lhs.samples[i] - rhs).norm() <= 1e-12 * scale * (a.abs() + b.abs() + 1.0));
        }
    }

    #[test]
    fn norms_are_homogeneous_and_symmetric(
        v in prop::collection::vec(-5.0f64..5.0, 1..60),
        c in -4.0f64..4.0,
        shuffle in any::<u64>(),
    ) {
        let a = SequenceData::new(v.clone()).unwrap();
        prop_assume!(!a.is_zero() && c != 0.0);
        let scaled = SequenceData::new(v.iter().map(|x| c * x).collect()).unwrap();
        let mut perm = v.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let permuted = SequenceData::new(perm).unwrap();
        let p = Exponent::from_int(4);
        let q = parse_exponent("4/3").unwrap();
        let norms: [&dyn Fn(&SequenceData) -> f64; 4] = [
            &|s| theta_norm(s, p).unwrap().to_f64(),
            &|s| gamma_norm(s, q).unwrap().to_f64(),
            &|s| bochkarev_norm(s, p).unwrap(),
            &|s| lorentz_norm(s, Exponent::from_int(2), Exponent::from_int(3)).unwrap().to_f64(),
        ];
        for n in norms {
            let base = n(&a);
            prop_assert!(rel_close(n(&scaled), c.abs() * base, 1e-9));
            prop_assert!(rel_close(n(&permuted), base, 1e-12));
        }
    }

    #[test]
    fn theta_starstar_band(v in prop::collection::vec(0.0f64..5.0, 1..200), p in prop::sample::select(vec!["3", "4", "8", "inf"])) {
        let a = SequenceData::new(v).unwrap();
        prop_assume!(!a.is_zero());
        let p = parse_exponent(p).unwrap();
        let r = theta_norm_with(&a, p, Rearr::StarStar).unwrap().to_f64() / theta_norm(&a, p).unwrap().to_f64();
        prop_assert!((1.0 - REL..=THETA_STARSTAR_BAND).contains(&r), "ratio {}", r);
    }

    #[test]
    fn exp_l_pairs_with_l_log_l(f in step(), g in step()) {
        let (_, pair) = hl_pairing(&f, &g).unwrap();
        prop_assume!(pair.to_f64() > 1e-9);
        let gs = star(&g.scale(1.0 / pair.to_f64())).unwrap();
        // ∫ G* w with w = log(1/t) on (0, 1) and 1 beyond; ∫ log(1/t) = t (1 - ln t)
        let prim = |t: f64| if t <= 0.0 { 0.0 } else if t <= 1.0 { t * (1.0 - t.ln()) } else { 1.0 + (t - 1.0) };
        let llogl: f64 = gs
            .grid()
            .points()
            .windows(2)
            .map(|w| gs.eval(0.5 * (w[0] + w[1])) * (prim(w[1]) - prim(w[0])))
            .sum();
        let (expl, _) = expL_pair(&f, 1).unwrap();
        prop_assert!(expl.to_f64() * llogl >= 1.0 - 1e-9, "{} × {}", expl.to_f64(), llogl);
    }

    #[test]
    fn optimal_y_is_monotone_under_domination(f in step(), extra in prop::collection::vec(0.0f64..2.0, 8)) {
        let g = StepFunction::cells(
            f.grid().points().to_vec(),
            f.values().iter().zip(&extra).map(|(a, b)| a + b).collect(),
        ).unwrap();
        let u = WeightSpec::parse("ind(1)", DEC).unwrap();
        for q in ["2", "3"] {
            let q = parse_exponent(q).unwrap();
            let (a, b) = (optimal_Y_norm(&f, &u, q).unwrap(), optimal_Y_norm(&g, &u, q).unwrap());
            prop_assert!(a.to_f64() <= b.to_f64() * (1.0 + 1e-9));
        }
    }
}

fn broken(c: f64, a: i64, dir: Direction) -> WeightSpec {
    let f = StepFunction::from_parts(Grid::new(vec![0.0, 1.0]).unwrap(), vec![c], None, Some(Piece::power(c, qi(a)))).unwrap();
    WeightSpec::table(f, 1, dir).unwrap()
}

fn weight_pairs() -> Vec<(WeightSpec, WeightSpec)> {
    vec![
        (WeightSpec::parse("pow(1/4)", DEC).unwrap(), WeightSpec::parse("pow(1/4)", INC).unwrap()),
        (WeightSpec::parse("ind(1)", DEC).unwrap(), WeightSpec::one(INC)),
        (broken(1.0, 1, DEC), broken(1.0, -1, INC)),
        (broken(2.0, 2, DEC), broken(0.5, -2, INC)),
    ]
}

const EXPONENTS: [(&str, &str); 8] =
    [("2", "2"), ("4/3", "4"), ("3", "2"), ("4", "3/2"), ("3/2", "5/4"), ("6", "1"), ("inf", "3/2"), ("2", "inf")];

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn criteria_constants_are_homogeneous(w in 0usize..4, e in 0usize..8, c in 0.1f64..10.0) {
        let (u, v) = &weight_pairs()[w];
        let cfg = ExponentConfig::parse(EXPONENTS[e].0, EXPONENTS[e].1, 1).unwrap();
        let base = evaluate(u, v, &cfg).unwrap();
        let su = evaluate(&u.scaled(c), v, &cfg).unwrap();
        let sv = evaluate(u, &v.scaled(c), &cfg).unwrap();
        // `TailUq#` is a finiteness side condition, not a `C_j`
        for (name, k) in base.constants.iter().filter(|(n, _)| n.starts_with('C')) {
            if let Some(k) = k.value() {
                prop_assert!(rel_close(su.constant(name).unwrap().to_f64(), c * k, QUAD_REL), "{} u-scaled", name);
                prop_assert!(rel_close(sv.constant(name).unwrap().to_f64(), k / c, QUAD_REL), "{} v-scaled", name);
            } else {
                prop_assert_eq!(su.constant(name).unwrap().is_finite(), false);
            }
        }
        if base.regime == Regime::II && base.constant("C4").map(|c| c.is_finite()).unwrap_or(false) {
            let c3 = base.constant("C3").map(|c| !c.is_infinite()).unwrap_or(true);
            prop_assert!(c3);
        }
    }

    #[test]
    fn hardy_monotone_and_homogeneous(
        (p, vals) in cells(),
        extra in prop::collection::vec(0.0f64..2.0, 8),
        vv in prop::collection::vec(0.2f64..3.0, 8),
        c in 0.2f64..5.0,
        e in 0usize..4,
        head in any::<bool>(),
    ) {
        let (pe, qe) = [("2", "2"), ("3/2", "3"), ("3", "3/2"), ("2", "1")][e];
        let (pe, qe) = (parse_exponent(pe).unwrap(), parse_exponent(qe).unwrap());
        let kind = if head { HardyKind::HeadIntegral } else { HardyKind::TailIntegral };
        let k = vals.len();
        let grid = Grid::new(p.clone()).unwrap();
        let u = StepFunction::new(grid.clone(), vals.clone(), TailSpec::Power { a: qi(3) }).unwrap();
        let u2 = StepFunction::new(grid.clone(), vals.iter().zip(&extra).map(|(a, b)| a + b).collect(), TailSpec::Power { a: qi(3) }).unwrap();
        let v = StepFunction::new(grid.clone(), vv[..k].to_vec(), TailSpec::Power { a: qi(-2) }).unwrap();
        let v2 = StepFunction::new(grid, vv[..k].iter().map(|x| x + 0.5).collect(), TailSpec::Power { a: qi(-2) }).unwrap();
        let kk = |u: &StepFunction, v: &StepFunction| hardy_K(&HardyProblem::new(kind, u.clone(), v.clone(), pe, qe).unwrap()).unwrap();
        let base = kk(&u, &v);
        prop_assume!(base.is_finite());
        prop_assert!(base.to_f64() <= kk(&u2, &v).to_f64() * (1.0 + 1e-9));
        prop_assert!(kk(&u, &v2).to_f64() <= base.to_f64() * (1.0 + 1e-9));
        let cq = c.powf(qe.to_f64());
        prop_assert!(rel_close(kk(&u.scale(cq), &v).to_f64(), c * base.to_f64(), 1e-9));
    }

    #[test]
    fn reverse_hardy_vanishes_only_for_zero_weight(f in step(), qn in prop::sample::select(vec![(1i64, 2i64), (1, 3), (2, 3)])) {
        let q = Exponent::new(rat(qn.0, qn.1)).unwrap();
        let nu = StepFunction::power(1.0, qi(-1));
        let k = reverse_hardy_K(&f, &nu, q).unwrap();
        let zero = f.values().iter().all(|x| *x == 0.0);
        prop_assert_eq!(k.value() == Some(0.0), zero);
        prop_assert_eq!(reverse_hardy_K(&StepFunction::zero(), &nu, q).unwrap(), ExtReal::zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn brackets_are_consistent_and_deterministic(w in 0usize..4, e in 0usize..6, seed in 0u64..100) {
        let (u, v) = &weight_pairs()[w];
        let cfg = ExponentConfig::parse(EXPONENTS[e].0, EXPONENTS[e].1, 1).unwrap();
        let budget = Budget { res: Resolution::new(512, 16.0).unwrap(), draws: 4, restarts: 4, seed };
        let a = bracket_constant(u, v, &cfg, &budget).unwrap();
        prop_assert!(a.consistent, "lower {} upper {:?}", a.lower, a.upper);
        let b = bracket_constant(u, v, &cfg, &budget).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn extreal_json_has_no_bare_infinities() {
    for x in [ExtReal::finite(1.5), ExtReal::infinite("diverges"), ExtReal::indeterminate("0·∞"), ExtReal::from_f64(f64::INFINITY, "overflow")] {
        let s = serde_json::to_string(&x).unwrap();
        assert!(!s.contains("inf\"") && !s.contains("NaN") && !s.contains("Infinity"), "{s}");
        assert_eq!(serde_json::from_str::<ExtReal>(&s).unwrap(), x);
    }
}
