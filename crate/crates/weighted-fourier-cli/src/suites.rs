//! Acceptance sweeps, shared by `wfi verify` and the acceptance test target.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use weighted_fourier::calderon::verify_joint_type;
use weighted_fourier::criteria::{degenerate_constant, dual_config, evaluate, u_func, xi_func, ExponentConfig, Xi};
use weighted_fourier::exponent::{q as rat, qf, qi, Q};
use weighted_fourier::extremal::{
    bracket_constant, dft, phase_witness, Budget, Resolution, SampledSignal,
};
use weighted_fourier::funcspace::piece::Piece;
use weighted_fourier::funcspace::{Direction, Grid, StepFunction, TailSpec, WeightSpec};
use weighted_fourier::hardy::{brute_force_K, hardy_K, HardyKind, HardyProblem};
use weighted_fourier::norms::{
    bochkarev_norm, dyadic_block_norms, gamma_norm, theta_norm, SequenceData,
};
use weighted_fourier::quad::gauss_legendre;
use weighted_fourier::rearrange::{distribution, hl_pairing, star};
use weighted_fourier::{ExtReal, Exponent};

const DEC: Direction = Direction::RadialNonIncreasing;
const INC: Direction = Direction::RadialNonDecreasing;

/// Relative slack for identities that hold in closed form.
pub const EXACT_TOL: f64 = 1e-12;
pub const SUP_L1_SLACK: f64 = 1e-9;
pub const PLANCHEREL_TOL: f64 = 1e-6;
/// Calderón constant of the sampled transform; first run gave 0.99998 (seed 7).
pub const CALDERON_BOUND: f64 = 1.0;
pub const SEED_SPREAD: f64 = 0.10;
pub const PLANCHEREL_LOWER: f64 = 1.0 - 1e-6;
pub const DEGENERATE_FRACTION: f64 = 0.9;
pub const HARDY_BAND: f64 = 8.0;
/// First run: 1.743.
pub const XI_BAND: f64 = 2.0;
/// `bochkarev ≤ c_p θ` with equality on single spikes; the same for p = 3, 4, ∞.
pub const BOCHKAREV_C: f64 = 1.0;
/// Block/direct ratios in `[1/c, c]`; first run gave [0.571, 1.442].
pub const BLOCK_C: f64 = 2.0;
/// `θ(f̂) / ‖f‖_{2,p}` over random trigonometric polynomials; first run 1.382.
pub const FOURIER_COEFF_BOUND: f64 = 2.0;
pub const BRACKET_SPREAD: f64 = 0.15;

pub const SIGNAL_SEEDS: [u64; 3] = [7, 11, 13];
pub const SIGNAL_N: usize = 4096;
pub const SIGNAL_L: f64 = 64.0;
pub const SIGNAL_COUNT: usize = 100;

pub const NAMES: [&str; 11] = [
    "rearrangement",
    "fourier",
    "calderon",
    "pitt",
    "plancherel",
    "degenerate",
    "duality",
    "hardy",
    "xi",
    "sequences",
    "bracket",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub criterion: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
}

impl SuiteResult {
    fn new(criterion: u8, name: &str, pass: bool, detail: String, metrics: Vec<(&str, f64)>) -> SuiteResult {
        SuiteResult {
            criterion,
            name: name.into(),
            pass,
            detail,
            metrics: metrics
                .into_iter()
                .filter(|(_, v)| v.is_finite())
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.detail
        )
    }
}

pub fn run(name: &str) -> Option<SuiteResult> {
    Some(match name {
        "rearrangement" => rearrangement(),
        "fourier" => fourier(),
        "calderon" => calderon(),
        "pitt" => pitt(),
        "plancherel" => plancherel(),
        "degenerate" => degenerate(),
        "duality" => duality(),
        "hardy" => hardy(),
        "xi" => xi(),
        "sequences" => sequences(),
        "bracket" => bracket(),
        _ => return None,
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXACT_TOL * a.abs().max(b.abs()).max(1.0)
}

fn random_step(rng: &mut ChaCha8Rng) -> StepFunction {
    let k = rng.gen_range(1..=10);
    let mut pts = vec![0.0];
    for _ in 0..k {
        let w: f64 = rng.gen_range(0.1..3.0);
        pts.push(pts.last().unwrap() + w);
    }
    let vals = (0..k)
        .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..5.0) })
        .collect();
    StepFunction::cells(pts, vals).expect("increasing grid")
}

/// 1. Equimeasurability, Hardy-Littlewood pairing and idempotence of `*`.
pub fn rearrangement() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let total = 1000;
    for i in 0..total {
        let f = random_step(&mut rng);
        let g = random_step(&mut rng);
        let fs = star(&f).expect("cells");
        let (df, dfs) = (distribution(&f).expect("cells"), distribution(&fs).expect("cells"));
        let mut levels: Vec<f64> = f.values().to_vec();
        levels.extend(f.values().iter().map(|v| 0.5 * v));
        levels.push(0.0);
        if levels.iter().any(|l| !close(df.eval(*l), dfs.eval(*l))) {
            failures.push(format!("#{i}: distribution differs"));
        }
        let (plain, arranged) = hl_pairing(&f, &g).expect("cells");
        if plain.to_f64() > arranged.to_f64() * (1.0 + EXACT_TOL) {
            failures.push(format!("#{i}: ∫fg = {} > ∫f*g* = {}", plain.to_f64(), arranged.to_f64()));
        }
        let fss = star(&fs).expect("cells");
        let probes = fs.grid().points().iter().map(|t| t + 1e-3).chain([0.0, 1e6]);
        if probes.into_iter().any(|t| !close(fs.eval(t), fss.eval(t))) {
            failures.push(format!("#{i}: f** != f*"));
        }
    }
    SuiteResult::new(
        1,
        "rearrangement",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{total} random step functions, no violations")
        } else {
            format!("{} violations, first: {}", failures.len(), failures[0])
        },
        vec![("functions", total as f64), ("violations", failures.len() as f64)],
    )
}

fn l1(f: &SampledSignal) -> f64 {
    f.norm(1.0)
}

/// 2. `‖f̂‖_∞ ≤ ‖f‖_1` and Plancherel on random band-limited signals.
pub fn fourier() -> SuiteResult {
    let batch = SampledSignal::random_batch(SIGNAL_COUNT, SIGNAL_N, SIGNAL_L, SIGNAL_SEEDS[0]).expect("valid");
    let mut worst_sup = f64::NEG_INFINITY;
    let mut worst_l2 = 0.0f64;
    for f in &batch {
        let g = dft(f);
        worst_sup = worst_sup.max(g.norm(f64::INFINITY) - l1(f));
        worst_l2 = worst_l2.max((g.norm(2.0) / f.norm(2.0) - 1.0).abs());
    }
    let pass = worst_sup <= SUP_L1_SLACK && worst_l2 <= PLANCHEREL_TOL;
    SuiteResult::new(
        2,
        "fourier",
        pass,
        format!(
            "{SIGNAL_COUNT} signals: max(‖f̂‖∞ - ‖f‖₁) = {worst_sup:.3e}, max |‖f̂‖₂/‖f‖₂ - 1| = {worst_l2:.3e}"
        ),
        vec![("sup_minus_l1", worst_sup), ("plancherel_error", worst_l2)],
    )
}

/// 3. Calderón constant of the sampled transform, uniform and seed-stable.
pub fn calderon() -> SuiteResult {
    let ks: Vec<f64> = SIGNAL_SEEDS
        .iter()
        .map(|s| {
            let batch = SampledSignal::random_batch(SIGNAL_COUNT, SIGNAL_N, SIGNAL_L, *s).expect("valid");
            verify_joint_type(&batch).map(|k| k.to_f64()).unwrap_or(f64::INFINITY)
        })
        .collect();
    let base = ks[0];
    let spread = ks.iter().map(|k| (k / base - 1.0).abs()).fold(0.0, f64::max);
    let pass = ks.iter().all(|k| k.is_finite() && *k <= CALDERON_BOUND) && spread <= SEED_SPREAD;
    SuiteResult::new(
        3,
        "calderon",
        pass,
        format!(
            "best K per seed {:?} = [{:.4}, {:.4}, {:.4}], bound {CALDERON_BOUND}, spread {:.2}%",
            SIGNAL_SEEDS,
            ks[0],
            ks[1],
            ks[2],
            100.0 * spread
        ),
        vec![("k_seed7", ks[0]), ("k_seed11", ks[1]), ("k_seed13", ks[2]), ("spread", spread)],
    )
}

fn pitt_exponents() -> Vec<Q> {
    [
        (11, 10),
        (6, 5),
        (5, 4),
        (4, 3),
        (3, 2),
        (8, 5),
        (5, 3),
        (7, 4),
        (2, 1),
        (9, 4),
        (5, 2),
        (8, 3),
        (3, 1),
        (7, 2),
        (4, 1),
        (9, 2),
        (5, 1),
        (6, 1),
        (8, 1),
        (10, 1),
    ]
    .iter()
    .map(|(n, d)| rat(*n, *d))
    .collect()
}

/// 4. Pitt classification on a rational grid, decided exactly.
pub fn pitt() -> SuiteResult {
    let ps = pitt_exponents();
    let alphas: Vec<Q> = (0..20).map(|k| rat(k, 10) - rat(1, 5)).collect();
    let mut cases = Vec::new();
    for p in &ps {
        for q in &ps {
            if q < p {
                continue;
            }
            for a in &alphas {
                cases.push((*p, *q, *a));
            }
        }
    }
    let bad: Vec<String> = cases
        .par_iter()
        .filter_map(|(p, q, a)| {
            let (pi, qiv) = (Q::from_integer(1) / p, Q::from_integer(1) / q);
            let lambda = pi + qiv + a - Q::from_integer(1);
            let expected = *a >= Q::from_integer(0)
                && *a < Q::from_integer(1) - pi
                && lambda >= Q::from_integer(0)
                && lambda < qiv;
            let u = WeightSpec::power(lambda, 1, DEC);
            let v = WeightSpec::power(*a, 1, INC);
            let cfg = ExponentConfig::new(Exponent::new(*p).unwrap(), Exponent::new(*q).unwrap(), 1).unwrap();
            let got = evaluate(&u, &v, &cfg).map(|r| r.holds).unwrap_or(!expected);
            (got != expected).then(|| format!("p={p} q={q} α={a}: holds={got}"))
        })
        .collect();
    SuiteResult::new(
        4,
        "pitt",
        bad.is_empty(),
        format!(
            "{} (p, q, α) cases, {} misclassified{}",
            cases.len(),
            bad.len(),
            bad.first().map(|b| format!(", first: {b}")).unwrap_or_default()
        ),
        vec![("cases", cases.len() as f64), ("misclassified", bad.len() as f64)],
    )
}

/// 5. `u = v = 1`, `p = q = 2`.
pub fn plancherel() -> SuiteResult {
    let one_u = WeightSpec::one(DEC);
    let one_v = WeightSpec::one(INC);
    let cfg = ExponentConfig::parse("2", "2", 1).unwrap();
    let c3 = evaluate(&one_u, &one_v, &cfg)
        .ok()
        .and_then(|r| r.constant("C3").and_then(|c| c.value()))
        .unwrap_or(f64::NAN);
    let lower = bracket_constant(&one_u, &one_v, &cfg, &Budget::default())
        .map(|b| b.lower)
        .unwrap_or(f64::NAN);
    let pass = c3 == 1.0 && lower >= PLANCHEREL_LOWER;
    SuiteResult::new(
        5,
        "plancherel",
        pass,
        format!("C3 = {c3}, bracket lower = {lower:.9}"),
        vec![("c3", c3), ("lower", lower)],
    )
}

/// Non-increasing table `c` on `[0, r)` then `c (t/r)^{-a}`; non-decreasing
/// variant for `inc`.
pub fn broken_power(c: f64, r: f64, a: Q, dir: Direction) -> WeightSpec {
    let f = StepFunction::from_parts(
        Grid::new(vec![0.0, r]).unwrap(),
        vec![c],
        None,
        Some(Piece::power(c * r.powf(qf(a)), a)),
    )
    .unwrap();
    WeightSpec::table(f, 1, dir).unwrap()
}

/// 6. The modulated witness attains `‖u‖_∞ ‖1/v‖_{p'}` up to 10% for `q = ∞`.
pub fn degenerate() -> SuiteResult {
    let configs: Vec<(WeightSpec, WeightSpec, &str)> = vec![
        (WeightSpec::parse("ind(1)", DEC).unwrap(), broken_power(1.0, 1.0, qi(-2), INC), "2"),
        (WeightSpec::parse("2*ind(3)", DEC).unwrap(), broken_power(1.0, 1.0, qi(-2), INC), "3"),
        (WeightSpec::one(DEC), broken_power(1.0, 1.0, qi(-3), INC), "4/3"),
        (broken_power(1.0, 0.5, rat(1, 2), DEC), broken_power(0.5, 2.0, qi(-2), INC), "2"),
        (WeightSpec::parse("ind(1/2)", DEC).unwrap(), broken_power(1.0, 1.0, qi(-2), INC), "inf"),
        (WeightSpec::one(DEC), WeightSpec::one(INC), "1"),
        (WeightSpec::parse("3*ind(2)", DEC).unwrap(), broken_power(2.0, 1.0, qi(-1), INC), "1"),
        (broken_power(1.0, 1.0, qi(1), DEC), broken_power(1.0, 0.25, qi(-3), INC), "3/2"),
        (WeightSpec::parse("ind(1)", DEC).unwrap(), broken_power(1.0, 2.0, rat(-3, 2), INC), "5"),
        (WeightSpec::one(DEC), broken_power(1.0, 1.0, qi(-4), INC), "6/5"),
    ];
    let res = Resolution::default();
    let mut worst = f64::INFINITY;
    let mut bad = Vec::new();
    for (i, (u, v, p)) in configs.iter().enumerate() {
        let cfg = ExponentConfig::parse(p, "inf", 1).unwrap();
        let sharp = degenerate_constant(u, v, &cfg).map(|c| c.to_f64()).unwrap_or(f64::NAN);
        let got = phase_witness(u, v, &cfg, res).unwrap_or(0.0);
        let frac = got / sharp;
        worst = worst.min(frac);
        if !(frac >= DEGENERATE_FRACTION) {
            bad.push(format!("#{i} (p = {p}): witness {got:.4} vs {sharp:.4}"));
        }
    }
    SuiteResult::new(
        6,
        "degenerate",
        bad.is_empty(),
        format!(
            "{} q = ∞ configs, worst witness/‖u‖∞‖1/v‖p' = {worst:.4}{}",
            configs.len(),
            bad.first().map(|b| format!("; {b}")).unwrap_or_default()
        ),
        vec![("worst_fraction", worst)],
    )
}

/// 7. Finiteness of the deciding constants is invariant under duality.
pub fn duality() -> SuiteResult {
    let weights: Vec<(WeightSpec, WeightSpec)> = vec![
        (WeightSpec::one(DEC), WeightSpec::one(INC)),
        (WeightSpec::parse("pow(1/4)", DEC).unwrap(), WeightSpec::parse("pow(1/4)", INC).unwrap()),
        (broken_power(1.0, 1.0, qi(1), DEC), broken_power(1.0, 1.0, qi(-1), INC)),
        (broken_power(1.0, 1.0, rat(1, 3), DEC), broken_power(1.0, 1.0, qi(-2), INC)),
        (broken_power(2.0, 0.5, qi(2), DEC), WeightSpec::parse("pow(1/3)", INC).unwrap()),
    ];
    let exps = [
        ("2", "2"),
        ("4/3", "4"),
        ("3/2", "3"),
        ("4", "3"),
        ("3", "2"),
        ("3/2", "5/4"),
        ("4", "3/2"),
        ("3", "5/4"),
        ("6", "1"),
        ("inf", "3/2"),
    ];
    let mut cases = 0;
    let mut undetermined = 0;
    let mut bad = Vec::new();
    for (u, v) in &weights {
        for (p, q) in exps {
            cases += 1;
            let cfg = ExponentConfig::parse(p, q, 1).unwrap();
            let (u2, v2, cfg2) = dual_config(u, v, &cfg).unwrap();
            let (a, b) = match (evaluate(u, v, &cfg), evaluate(&u2, &v2, &cfg2)) {
                (Ok(a), Ok(b)) => (a, b),
                (a, b) => {
                    bad.push(format!("{u} {v} p={p} q={q}: evaluation error {:?} {:?}", a.err(), b.err()));
                    continue;
                }
            };
            if !a.determined || !b.determined {
                undetermined += 1;
                continue;
            }
            if a.holds != b.holds {
                bad.push(format!(
                    "u={u} v={v} p={p} q={q}: {:?} holds={} vs dual {:?} holds={}",
                    a.regime, a.holds, b.regime, b.holds
                ));
            }
        }
    }
    SuiteResult::new(
        7,
        "duality",
        bad.is_empty(),
        format!(
            "{cases} configs ({undetermined} undetermined), {} mismatches{}",
            bad.len(),
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
        vec![("configs", cases as f64), ("mismatches", bad.len() as f64), ("undetermined", undetermined as f64)],
    )
}

pub const HARDY_PROBLEM_SEED: u64 = 2024;
pub const HARDY_PER_KIND: usize = 20;
pub const HARDY_ITERS: usize = 6;

fn ex(s: &str) -> Exponent {
    weighted_fourier::criteria::parse_exponent(s).unwrap()
}

fn random_cells(rng: &mut ChaCha8Rng, k: usize, zero_tail: bool) -> StepFunction {
    let mut pts = vec![0.0];
    for _ in 0..k {
        let w: f64 = rng.gen_range(0.25..2.0);
        pts.push(pts.last().unwrap() + w);
    }
    let vals: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..3.0)).collect();
    let tail = if zero_tail {
        TailSpec::Zero
    } else {
        TailSpec::Power {
            a: [qi(2), qi(3), qi(-1), qi(-2)].choose(rng).copied().unwrap(),
        }
    };
    StepFunction::new(Grid::new(pts).unwrap(), vals, tail).unwrap()
}

/// Hardy problems with finite constants from a fixed generator.
pub fn hardy_problems(kind: HardyKind) -> Vec<HardyProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(HARDY_PROBLEM_SEED + kind as u64);
    let mut out = Vec::new();
    let pairs_int = [("2", "2"), ("3/2", "3"), ("2", "4"), ("3", "3/2"), ("2", "1"), ("4", "2"), ("1", "2"), ("3", "3")];
    let pairs_sum = [("2", "2"), ("3/2", "3"), ("3", "3/2"), ("2", "1"), ("1/2", "1"), ("1", "1/2"), ("4", "2"), ("1", "3")];
    let mut attempts = 0;
    while out.len() < HARDY_PER_KIND && attempts < 1000 {
        attempts += 1;
        let prob = match kind {
            HardyKind::HeadSum => {
                let (p, q) = *pairs_sum.choose(&mut rng).unwrap();
                let n = rng.gen_range(2..=6);
                let u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
                let vs = HardyProblem::sequence_with_tail(&v, TailSpec::Power { a: qi(0) }).unwrap();
                HardyProblem::new(kind, HardyProblem::sequence(&u).unwrap(), vs, ex(p), ex(q))
            }
            HardyKind::HeadIntegral | HardyKind::TailIntegral => {
                let (p, q) = *pairs_int.choose(&mut rng).unwrap();
                let k = rng.gen_range(2..=4);
                let zero_tail = rng.gen_bool(0.5);
                let u = random_cells(&mut rng, k, zero_tail);
                let v = random_cells(&mut rng, k, false);
                HardyProblem::new(kind, u, v, ex(p), ex(q))
            }
            HardyKind::Reverse => {
                let q = *["1/2", "1/3", "2/3", "1/4"].choose(&mut rng).unwrap();
                let k = rng.gen_range(2..=4);
                let w = random_cells(&mut rng, k, true);
                let nu = if rng.gen_bool(0.5) {
                    StepFunction::power(rng.gen_range(0.5..2.0), qi(-1))
                } else {
                    let a: f64 = rng.gen_range(0.5..3.0);
                    StepFunction::from_parts(
                        Grid::new(vec![0.0, a]).unwrap(),
                        vec![a],
                        Some(Piece::power(1.0, qi(-1))),
                        Some(Piece::power(a, qi(0))),
                    )
                    .unwrap()
                };
                HardyProblem::new(kind, w, nu, ex("1"), ex(q))
            }
        };
        let Ok(prob) = prob else { continue };
        match hardy_K(&prob) {
            Ok(ExtReal::Finite { value }) if value > 0.0 => out.push(prob),
            _ => {}
        }
    }
    out
}

/// Cells for the oracle: breakpoints of both weights plus a geometric net.
pub fn hardy_grid(prob: &HardyProblem) -> Grid {
    if prob.kind == HardyKind::HeadSum {
        return Grid::uniform(prob.u.grid().last().round() as usize, 1.0);
    }
    let mut pts = prob.u.breakpoints_union(&prob.v);
    pts.extend([0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0]);
    pts.retain(|x| x.is_finite() && *x >= 0.0);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Grid::new(pts).unwrap()
}

/// 8. `K` against the brute-force lower bound, two-sided within `HARDY_BAND`.
pub fn hardy() -> SuiteResult {
    let kinds = [HardyKind::HeadSum, HardyKind::TailIntegral, HardyKind::HeadIntegral, HardyKind::Reverse];
    let mut bands = [0.0f64; 3];
    let mut missing = Vec::new();
    let mut worst_case = String::new();
    let mut count = 0;
    for kind in kinds {
        let probs = hardy_problems(kind);
        if probs.len() < HARDY_PER_KIND {
            missing.push(format!("{kind}: {} problems", probs.len()));
        }
        count += probs.len();
        for prob in &probs {
            let k = hardy_K(prob).unwrap().to_f64();
            let grid = hardy_grid(prob);
            for (s, seed) in SIGNAL_SEEDS.iter().enumerate() {
                let b = brute_force_K(prob, &grid, HARDY_ITERS, *seed);
                let band = if b > 0.0 { (k / b).max(b / k) } else { f64::INFINITY };
                if band > bands[s] {
                    bands[s] = band;
                    if s == 0 {
                        worst_case = format!("{kind} p={} q={}", prob.p, prob.q);
                    }
                }
            }
        }
    }
    let spread = bands.iter().map(|b| (b / bands[0] - 1.0).abs()).fold(0.0, f64::max);
    let pass = missing.is_empty() && bands.iter().all(|b| *b <= HARDY_BAND) && spread <= SEED_SPREAD;
    SuiteResult::new(
        8,
        "hardy",
        pass,
        format!(
            "{count} problems, max band per seed [{:.3}, {:.3}, {:.3}] (limit {HARDY_BAND}), spread {:.2}%, worst {worst_case}{}",
            bands[0],
            bands[1],
            bands[2],
            100.0 * spread,
            if missing.is_empty() { String::new() } else { format!("; short: {}", missing.join(", ")) }
        ),
        vec![("band_seed7", bands[0]), ("band_seed11", bands[1]), ("band_seed13", bands[2]), ("spread", spread)],
    )
}

/// 9. `ξ ≈ U` for pure powers in regime III.
pub fn xi() -> SuiteResult {
    let cases = [
        ("4", "3/2", rat(1, 3)),
        ("4", "3/2", rat(1, 2)),
        ("3", "5/4", rat(1, 2)),
        ("3", "5/4", rat(2, 3)),
        ("6", "1", rat(3, 4)),
        ("6", "1", rat(2, 3)),
        ("5/2", "4/3", rat(1, 2)),
        ("8", "3/2", rat(1, 4)),
        ("3", "7/4", rat(1, 3)),
        ("4", "1", rat(9, 10)),
    ];
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (p, q, a) in cases {
        let cfg = ExponentConfig::parse(p, q, 1).unwrap();
        let u = WeightSpec::power(a, 1, DEC);
        let big_u = u_func(&u, cfg.q).unwrap();
        let band = match xi_func(&u, cfg.q) {
            Ok(Xi::Finite(x)) => (-60..=60)
                .map(|k| {
                    let t = 10f64.powf(k as f64 / 10.0);
                    let r = x.eval(t) / big_u.eval(t);
                    r.max(1.0 / r)
                })
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        };
        worst = worst.max(band);
        if !(band <= XI_BAND) {
            bad.push(format!("p={p} q={q} a={a}: {band}"));
        }
    }
    SuiteResult::new(
        9,
        "xi",
        bad.is_empty(),
        format!(
            "{} pure powers, max of sup ξ/U and sup U/ξ = {worst:.4} (band {XI_BAND}){}",
            cases.len(),
            bad.first().map(|b| format!("; {b}")).unwrap_or_default()
        ),
        vec![("worst", worst)],
    )
}

fn random_sequence(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.gen_range(1..=300);
    match rng.gen_range(0..4) {
        0 => (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        1 => {
            let b: f64 = rng.gen_range(0.0..1.5);
            (1..=n).map(|k| (k as f64).powf(-b)).collect()
        }
        2 => (0..n).map(|_| if rng.gen_bool(0.1) { rng.gen_range(0.0..10.0) } else { 0.0 }).collect(),
        _ => {
            let b: f64 = rng.gen_range(0.3..1.0);
            (1..=n).map(|k| (k as f64).powf(-0.5) / (1.0 + (k as f64).ln()).powf(b)).collect()
        }
    }
}

/// `‖f‖_{2,p}` on the unit circle for samples of `|f|` on a uniform grid.
pub fn lorentz_2p(samples: &[f64], p: f64) -> f64 {
    let m = samples.len();
    let mut s: Vec<f64> = samples.iter().map(|x| x.abs()).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let h = 1.0 / m as f64;
    let (nodes, weights) = gauss_legendre(8);
    let mut acc = 0.0;
    let mut best = 0.0f64;
    let mut prefix = 0.0;
    for (k, a) in s.iter().enumerate() {
        let t0 = k as f64 * h;
        // f**(t) = (prefix + a (t - t0)) / t on this cell
        let g = |t: f64| (prefix + a * (t - t0)) / t;
        if p.is_infinite() {
            let c = prefix - a * t0;
            let mut cands = vec![t0.max(1e-300), t0 + h];
            if *a > 0.0 && c / a > t0 && c / a < t0 + h {
                cands.push(c / a);
            }
            for t in cands {
                best = best.max(t.sqrt() * g(t));
            }
        } else {
            for (x, w) in nodes.iter().zip(&weights) {
                let t = t0 + h * x;
                acc += w * h * t.powf(0.5 * p - 1.0) * g(t).powf(p);
            }
        }
        prefix += a * h;
    }
    if p.is_infinite() {
        best
    } else {
        acc.powf(1.0 / p)
    }
}

/// Random trigonometric polynomial: coefficients and `|f|` on `samples` points.
fn random_trig(rng: &mut ChaCha8Rng, samples: usize) -> (Vec<f64>, Vec<f64>) {
    let deg = rng.gen_range(1..=32usize);
    let coeffs: Vec<(i64, f64, f64)> = (-(deg as i64)..=deg as i64)
        .map(|k| {
            let decay = 1.0 / (1.0 + k.unsigned_abs() as f64).powf(rng.gen_range(0.0..1.0));
            (k, rng.gen_range(-1.0..1.0) * decay, rng.gen_range(-1.0..1.0) * decay)
        })
        .collect();
    let vals = (0..samples)
        .map(|j| {
            let x = j as f64 / samples as f64;
            let (mut re, mut im) = (0.0, 0.0);
            for (k, a, b) in &coeffs {
                let th = 2.0 * std::f64::consts::PI * *k as f64 * x;
                re += a * th.cos() - b * th.sin();
                im += a * th.sin() + b * th.cos();
            }
            (re * re + im * im).sqrt()
        })
        .collect();
    let mods = coeffs.iter().map(|(_, a, b)| (a * a + b * b).sqrt()).collect();
    (mods, vals)
}

pub const SEQUENCE_SEED: u64 = 17;
pub const SEQUENCES_PER_P: usize = 200;
pub const TRIG_COUNT: usize = 100;
pub const TRIG_SAMPLES: usize = 2048;

/// 10. Sequence norms: Bochkarev ≤ c θ, block forms against direct sums and
/// `θ(f̂)` against `‖f‖_{2,p}`.
pub fn sequences() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEQUENCE_SEED);
    let ps = [Exponent::from_int(3), Exponent::from_int(4), Exponent::INFINITY];
    let mut boch = 0.0f64;
    let mut blk_lo = f64::INFINITY;
    let mut blk_hi = 0.0f64;
    for p in ps {
        let q = p.conj().unwrap();
        for _ in 0..SEQUENCES_PER_P {
            let s = SequenceData::new(random_sequence(&mut rng)).unwrap();
            if s.is_zero() {
                continue;
            }
            let th = theta_norm(&s, p).unwrap().to_f64();
            boch = boch.max(bochkarev_norm(&s, p).unwrap() / th);
            let rt = dyadic_block_norms(&s, p).unwrap() / th;
            let rg = dyadic_block_norms(&s, q).unwrap() / gamma_norm(&s, q).unwrap().to_f64();
            blk_lo = blk_lo.min(rt.min(rg));
            blk_hi = blk_hi.max(rt.max(rg));
        }
    }
    let mut trig = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEQUENCE_SEED + 1);
    for _ in 0..TRIG_COUNT {
        let (coeffs, vals) = random_trig(&mut rng, TRIG_SAMPLES);
        let c = SequenceData::new(coeffs).unwrap();
        for p in ps {
            let r = theta_norm(&c, p).unwrap().to_f64() / lorentz_2p(&vals, p.to_f64());
            trig = trig.max(r);
        }
    }
    let pass = boch <= BOCHKAREV_C * (1.0 + EXACT_TOL) && blk_lo >= 1.0 / BLOCK_C && blk_hi <= BLOCK_C && trig <= FOURIER_COEFF_BOUND;
    SuiteResult::new(
        10,
        "sequences",
        pass,
        format!(
            "max Bochkarev/θ = {boch:.4} (c {BOCHKAREV_C}), block/direct in [{blk_lo:.4}, {blk_hi:.4}] (c {BLOCK_C}), max θ(f̂)/‖f‖_(2,p) = {trig:.4} (bound {FOURIER_COEFF_BOUND})"
        ),
        vec![("bochkarev_over_theta", boch), ("block_min", blk_lo), ("block_max", blk_hi), ("trig_ratio", trig)],
    )
}

/// Regime-II broken-power configurations for the bracket sweep.
pub fn bracket_configs() -> Vec<(WeightSpec, WeightSpec, ExponentConfig)> {
    let list: [(f64, Q, f64, Q, &str, &str); 10] = [
        (1.0, qi(1), 1.0, qi(-1), "4", "3"),
        (1.0, qi(1), 1.0, qi(-2), "4", "3"),
        (1.0, rat(3, 4), 1.0, qi(-1), "3", "2"),
        (1.0, qi(1), 1.0, qi(-1), "3", "2"),
        (2.0, qi(1), 1.0, qi(-2), "5", "4"),
        (1.0, qi(2), 1.0, qi(-1), "3/2", "5/4"),
        (1.0, qi(1), 1.0, qi(-1), "3/2", "5/4"),
        (1.0, qi(1), 2.0, qi(-2), "4", "5/2"),
        (1.0, rat(3, 2), 1.0, qi(-1), "6", "3"),
        (1.0, qi(1), 1.0, rat(-3, 2), "4/3", "6/5"),
    ];
    list.iter()
        .map(|(cu, a, cv, b, p, q)| {
            (
                broken_power(*cu, 1.0, *a, DEC),
                broken_power(*cv, 1.0, *b, INC),
                ExponentConfig::parse(p, q, 1).unwrap(),
            )
        })
        .collect()
}

pub const BRACKET_DRAWS: usize = 32;

/// 11. Brackets on regime-II power-type weights: finite, consistent and seed-stable.
pub fn bracket() -> SuiteResult {
    let configs = bracket_configs();
    let mut bad = Vec::new();
    let mut spread = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for (i, (u, v, cfg)) in configs.iter().enumerate() {
        let ratios: Vec<(f64, bool)> = SIGNAL_SEEDS
            .iter()
            .map(|seed| {
                let budget = Budget {
                    res: Resolution::default(),
                    draws: BRACKET_DRAWS,
                    restarts: BRACKET_DRAWS,
                    seed: *seed,
                };
                match bracket_constant(u, v, cfg, &budget) {
                    Ok(b) => (b.ratio.value().unwrap_or(f64::INFINITY), b.consistent),
                    Err(_) => (f64::INFINITY, false),
                }
            })
            .collect();
        let base = ratios[0].0;
        for (r, ok) in &ratios {
            worst_ratio = worst_ratio.max(*r);
            if !r.is_finite() || !ok {
                bad.push(format!("#{i} ({cfg}): ratio {r}, consistent {ok}"));
            }
            spread = spread.max((r / base - 1.0).abs());
        }
    }
    let pass = bad.is_empty() && spread <= BRACKET_SPREAD;
    SuiteResult::new(
        11,
        "bracket",
        pass,
        format!(
            "{} configs × {} seeds, max upper/lower = {worst_ratio:.4}, seed spread {:.2}% (limit {}%){}",
            configs.len(),
            SIGNAL_SEEDS.len(),
            100.0 * spread,
            100.0 * BRACKET_SPREAD,
            bad.first().map(|b| format!("; {b}")).unwrap_or_default()
        ),
        vec![("worst_ratio", worst_ratio), ("spread", spread)],
    )
}
