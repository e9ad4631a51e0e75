//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, SQRT_2};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use conceptua::bell::{chsh, singlet_tables, JointProbabilityTable, TSIRELSON_BOUND};
use conceptua::cognitons::{
    compare_fits, fit_bose_einstein, fit_maxwell_boltzmann, rank_table, tokenize, zipf_products, FitKind,
    LevelOccupancy, TokenizerConfig,
};
use conceptua::dilation::{coordinate, euclidean_length, minkowski_length};
use conceptua::ebr::{born_from_ebr, perceptual_warp, qubit_state, run_measurement_statistics, CollapseSampler};
use conceptua::hilbert::{
    born_probability, density_from_amplitudes, gell_mann_basis, group_probabilities, ProjectiveMeasurement,
};
use conceptua::interference::{
    classical_mixture, interference_deviation, predict_disjunction, project_consistent, solve_phases,
    DisjunctionDataset,
};
use conceptua::linalg::ComplexMatrix;
use conceptua::sampling::{
    random_measurement, random_mixed_state, random_pure_state, seeded_rng, uniform, uniform_simplex_point,
};
use conceptua::Complex64;

const SAMPLES: u64 = 100_000;
const SIGMA_BOUND: f64 = 4.0;

struct Check {
    passed: bool,
    detail: String,
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn max_abs_z(stats: &conceptua::ebr::MeasurementStatistics) -> f64 {
    stats.outcomes.iter().filter_map(|o| o.z_score).map(f64::abs).fold(0.0, f64::max)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn born_rule_recovery() -> Check {
    let mut rng = seeded_rng(11);
    let mut max_dev = 0.0f64;
    let mut max_z = 0.0f64;
    for k in 0..100 {
        let n = 2 + k % 3;
        let rho = if k % 2 == 0 { random_pure_state(&mut rng, n) } else { random_mixed_state(&mut rng, n) }.unwrap();
        let m = random_measurement(&mut rng, n).unwrap();
        let basis = gell_mann_basis(n).unwrap();
        let ebr = born_from_ebr(&rho, &m, &basis).unwrap();
        let born = born_probability(&rho, &m).unwrap();
        max_dev = max_dev.max(max_abs_diff(&ebr, &born));
        if k < 3 {
            let stats = run_measurement_statistics(&rho, &m, &basis, SAMPLES, 0).unwrap();
            max_z = max_z.max(max_abs_z(&stats));
        }
    }
    Check {
        passed: max_dev <= 1e-9 && max_z <= SIGMA_BOUND,
        detail: format!("max |p_ebr - p_born| = {max_dev:.2e} over 100 pairs; max |z| = {max_z:.2} at 1e5 samples for N = 2, 3, 4"),
    }
}

fn degenerate_grouping() -> Check {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let rho = density_from_amplitudes(&[one, one, one]).unwrap();
    let m = ProjectiveMeasurement::computational(3).unwrap().with_groups(vec![vec![0, 1], vec![2]]).unwrap();
    let basis = gell_mann_basis(3).unwrap();
    let probs = group_probabilities(&rho, &m).unwrap();
    let analytic = max_abs_diff(&probs, &[2.0 / 3.0, 1.0 / 3.0]);
    let stats = run_measurement_statistics(&rho, &m, &basis, SAMPLES, 0).unwrap();
    let z = max_abs_z(&stats);

    let half = Complex64::new(0.5, 0.0);
    let expected = [
        ComplexMatrix::from_rows(&[vec![half, half, zero], vec![half, half, zero], vec![zero, zero, zero]]).unwrap(),
        ComplexMatrix::from_rows(&[vec![zero, zero, zero], vec![zero, zero, zero], vec![zero, zero, one]]).unwrap(),
    ];
    let mut sampler = CollapseSampler::new(&rho, &m, &basis, 0).unwrap();
    let mut post_err = [f64::NAN; 2];
    for _ in 0..1000 {
        let s = sampler.sample().unwrap();
        let g = s.group.unwrap();
        post_err[g] = s.post_state.matrix().max_abs_diff(&expected[g]);
        if post_err.iter().all(|e| !e.is_nan()) {
            break;
        }
    }
    let post = post_err.iter().copied().fold(0.0, f64::max);
    Check {
        passed: analytic <= 1e-9 && z <= SIGMA_BOUND && post <= 1e-10,
        detail: format!(
            "group probabilities ({:.12}, {:.12}), analytic error {analytic:.1e}; max |z| = {z:.2}; post-state error {post:.1e}",
            probs[0], probs[1]
        ),
    }
}

fn perceptual_warp_check() -> Check {
    let mut rng = seeded_rng(12);
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    let basis = gell_mann_basis(2).unwrap();
    for k in 0..1000 {
        let (r1, r2) = if k % 2 == 0 {
            (random_pure_state(&mut rng, 2).unwrap(), random_pure_state(&mut rng, 2).unwrap())
        } else {
            (random_mixed_state(&mut rng, 2).unwrap(), random_pure_state(&mut rng, 2).unwrap())
        };
        let m = random_measurement(&mut rng, 2).unwrap();
        let w = perceptual_warp(&r1, &r2, &m, &basis).unwrap();
        let slack = w.surface_distance - w.equilibrium_distance;
        min_slack = min_slack.min(slack);
        if slack < -1e-12 {
            violations += 1;
        }
    }
    let z = ProjectiveMeasurement::computational(2).unwrap();
    let pole = perceptual_warp(&qubit_state(0.0).unwrap(), &qubit_state(FRAC_PI_3).unwrap(), &z, &basis).unwrap();
    let equator =
        perceptual_warp(&qubit_state(FRAC_PI_3).unwrap(), &qubit_state(2.0 * FRAC_PI_3).unwrap(), &z, &basis).unwrap();
    let same_surface = (pole.surface_distance - equator.surface_distance).abs() < 1e-12;
    let gap = (pole.equilibrium_distance - equator.equilibrium_distance).abs();
    Check {
        passed: violations == 0 && same_surface && gap > 0.1,
        detail: format!(
            "{violations} contraction violations in 1000 pairs (min slack {min_slack:.2e}); equal surface distance {:.6}: simplex distances {:.6} vs {:.6}",
            pole.surface_distance, pole.equilibrium_distance, equator.equilibrium_distance
        ),
    }
}

fn interference_round_trip() -> Check {
    let mut rng = seeded_rng(13);
    let mut max_cos_err = 0.0f64;
    let mut max_dev_sum = 0.0f64;
    let mut zero_phase_exact = true;
    for k in 0..50 {
        let n = 3 + k % 10;
        let spread = |x: Vec<f64>| x.into_iter().map(|p| 0.5 * p + 0.5 / n as f64).collect::<Vec<f64>>();
        let a = spread(uniform_simplex_point(&mut rng, n));
        let b = spread(uniform_simplex_point(&mut rng, n));
        let raw: Vec<f64> = (0..n).map(|_| 2.0 * uniform(&mut rng) - 1.0).collect();
        let amps: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x * y).sqrt()).collect();
        let cos = project_consistent(&raw, &amps);
        let obs = predict_disjunction(&a, &b, &cos).unwrap();
        let data = DisjunctionDataset::new((0..n).map(|i| format!("x{i}")).collect(), a.clone(), b.clone(), obs).unwrap();
        let fit = solve_phases(&data);
        max_cos_err = max_cos_err.max(max_abs_diff(&fit.cos_theta, &cos));
        max_dev_sum = max_dev_sum.max(interference_deviation(&data).iter().sum::<f64>().abs());
        let zero = predict_disjunction(&a, &b, &vec![0.0; n]).unwrap();
        zero_phase_exact &= zero == classical_mixture(&a, &b).unwrap();
    }
    Check {
        passed: max_cos_err < 1e-9 && zero_phase_exact && max_dev_sum <= 1e-9,
        detail: format!(
            "50 datasets: max |cos error| = {max_cos_err:.2e}; zero phase equals mixture exactly: {zero_phase_exact}; max |sum deviations| = {max_dev_sum:.2e}"
        ),
    }
}

fn singlet_chsh(a: f64, ap: f64, b: f64, bp: f64) -> conceptua::bell::ChshReport {
    chsh(&singlet_tables(a, b), &singlet_tables(a, bp), &singlet_tables(ap, b), &singlet_tables(ap, bp))
}

fn chsh_check() -> Check {
    let stated = singlet_chsh(0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4);
    let alternative = singlet_chsh(0.0, -FRAC_PI_2, FRAC_PI_4, 3.0 * FRAC_PI_4);
    let plus = JointProbabilityTable::new([0.5, 0.0, 0.0, 0.5]).unwrap();
    let minus = JointProbabilityTable::new([0.0, 0.5, 0.5, 0.0]).unwrap();
    let pr = chsh(&minus, &plus, &plus, &plus);
    let u = JointProbabilityTable::uniform();
    let uniform_s = chsh(&u, &u, &u, &u).s_value;
    let singlet_ok = (stated.s_value - TSIRELSON_BOUND).abs() <= 1e-9;
    Check {
        passed: singlet_ok && pr.s_value == 4.0 && uniform_s == 0.0,
        detail: format!(
            "S at (0, pi/2, pi/4, -pi/4) = {:.12} (target {:.12}); E = ({:.6}, {:.6}, {:.6}, {:.6}); \
             max over sign placements there = {:.12}; S at (0, -pi/2, pi/4, 3pi/4) = {:.12}; PR box S = {}; uniform S = {}",
            stated.s_value,
            2.0 * SQRT_2,
            stated.e_ab,
            stated.e_abp,
            stated.e_apb,
            stated.e_apbp,
            stated.s_max,
            alternative.s_value,
            pr.s_value,
            uniform_s
        ),
    }
}

fn zipf_fixture() -> Check {
    let text = fs::read_to_string(fixture("zoo.txt")).unwrap();
    let tokens = tokenize(&text, &TokenizerConfig::default());
    let table = rank_table(&tokens).unwrap();
    let zipf = zipf_products(&table, 3).unwrap();
    let the = table.count_of("the");
    let and = table.count_of("and");
    let third = &table.rows()[2];
    let zoo = table.count_of("zoo").unwrap_or(0);
    Check {
        passed: the == Some(6) && and == Some(3) && zipf.top() == [6, 6, 6] && 3 * zoo == 6,
        detail: format!(
            "the: {the:?}, and: {and:?}; top-3 products {:?}; rank 3 is {:?} (count {}), zoo count {zoo} gives 3 x {zoo} = {}",
            zipf.top(),
            third.word,
            third.count,
            3 * zoo
        ),
    }
}

fn distribution_fitting() -> Check {
    let mut worst_mb = 0.0f64;
    for (c, b) in [(1000.0, 7.0), (25.0, 2.5), (5.0e4, 40.0)] {
        let counts: Vec<f64> = (1..=30).map(|e| c * (-(e as f64) / b).exp()).collect();
        let fit = fit_maxwell_boltzmann(&LevelOccupancy::from_counts(counts).unwrap()).unwrap();
        let FitKind::MaxwellBoltzmann { c: fc, b: fb } = fit.kind else { unreachable!() };
        worst_mb = worst_mb.max(rel(fc, c)).max(rel(fb, b));
    }

    let mut worst_be = 0.0f64;
    for (a, b, mu, levels) in [(50.0, 10.0, -5.0, 60), (200.0, 4.0, 0.5, 40), (10.0, 25.0, -20.0, 80)] {
        let counts: Vec<f64> = (1..=levels).map(|e| a / (((e as f64 - mu) / b).exp() - 1.0)).collect();
        let fit = fit_bose_einstein(&LevelOccupancy::from_counts(counts).unwrap()).unwrap();
        let FitKind::BoseEinstein { a: fa, b: fb, mu: fmu } = fit.kind else { unreachable!() };
        worst_be = worst_be.max(rel(fa, a)).max(rel(fb, b)).max(rel(fmu, mu));
    }

    let zipf_counts: Vec<f64> = (1..=200).map(|r| 1000.0 / r as f64).collect();
    let zipf = compare_fits(&LevelOccupancy::from_counts(zipf_counts).unwrap()).unwrap();

    let text = fs::read_to_string(fixture("harbor.txt")).unwrap();
    let tokens = tokenize(&text, &TokenizerConfig::default());
    let corpus = compare_fits(&rank_table(&tokens).unwrap().occupancy()).unwrap();

    Check {
        passed: worst_mb <= 1e-6
            && worst_be <= 0.05
            && zipf.be.sse_log < zipf.mb.sse_log
            && tokens.len() >= 2000
            && corpus.be.sse_log < corpus.mb.sse_log,
        detail: format!(
            "MB worst relative error {worst_mb:.1e}; BE worst relative error {worst_be:.1e}; \
             Zipf sse_log BE {:.3e} < MB {:.3e}; {}-token text sse_log BE {:.3} < MB {:.3}",
            zipf.be.sse_log,
            zipf.mb.sse_log,
            tokens.len(),
            corpus.be.sse_log,
            corpus.mb.sse_log
        ),
    }
}

fn time_dilation() -> Check {
    let mut ok = true;
    let mut detail = String::new();
    for (l, c) in [(1.0, 1.0), (2.5, 3.0e8)] {
        let r = coordinate(8, 4, l, c).unwrap();
        let beta_err = (r.velocity / c - 3f64.sqrt() / 2.0).abs();
        let gamma_err = (r.gamma - 2.0).abs();
        let step_err = r.step_lengths_b.iter().map(|s| (s - l).abs() / l).fold(0.0, f64::max);
        let mink_b = minkowski_length(&r.trajectory_b, c).unwrap();
        let (ea, eb) = (euclidean_length(&r.trajectory_a, c), euclidean_length(&r.trajectory_b, c));
        let (t_end, x_end) = r.trajectory_b.end();
        let t_err = ((t_end - 8.0 * l / c) / (8.0 * l / c)).abs();
        ok &= beta_err <= 1e-12
            && gamma_err <= 1e-12
            && step_err <= 1e-9
            && (mink_b - 4.0 * l).abs() <= 1e-9 * l
            && eb > ea
            && t_err <= 1e-12
            && x_end.abs() <= 1e-12 * l;
        detail.push_str(&format!(
            "[L={l}, c={c:e}] v/c error {beta_err:.1e}, gamma error {gamma_err:.1e}, step error {step_err:.1e}, \
             Euclidean B/A = {:.6}, end ({:.3e}, {:.1e}) t error {t_err:.1e}; ",
            eb / ea,
            t_end,
            x_end
        ));
    }
    Check { passed: ok, detail: detail.trim_end_matches("; ").to_string() }
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let runs: [Vec<String>; 5] = [
        vec!["ebr".into(), "--input".into(), fixture("qutrit_grouped.json"), "--seed".into(), "7".into(), "--samples".into(), "20000".into()],
        vec!["interference".into(), "--input".into(), fixture("disjunction_synthetic.csv")],
        vec!["bell".into(), "--singlet".into(), "0,pi/2,pi/4,-pi/4".into(), "--seed".into(), "3".into()],
        vec!["cognitons".into(), "--input".into(), fixture("harbor.txt")],
        vec!["dilation".into(), "--na".into(), "8".into(), "--nb".into(), "4".into(), "--L".into(), "2".into()],
    ];
    let mut identical = 0;
    let mut failures = Vec::new();
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let plot = dir.path().join(format!("plot_{k}_{rep}.tsv"));
            let out = Command::new(env!("CARGO_BIN_EXE_conceptua")).args(args).arg("--emit-plot").arg(&plot).output().unwrap();
            outputs.push((out.status.success(), out.stdout, fs::read(&plot).unwrap_or_default()));
        }
        if outputs[0].0 && outputs[0] == outputs[1] && !outputs[0].1.is_empty() {
            identical += 1;
        } else {
            failures.push(args[0].clone());
        }
    }
    Check {
        passed: failures.is_empty(),
        detail: format!("{identical}/5 subcommands byte-identical across repeated runs (report and plot){}", if failures.is_empty() {
            String::new()
        } else {
            format!("; differing: {failures:?}")
        }),
    }
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Born-rule recovery", born_rule_recovery),
        ("degenerate grouping", degenerate_grouping),
        ("perceptual warp", perceptual_warp_check),
        ("interference round trip", interference_round_trip),
        ("CHSH", chsh_check),
        ("Zipf fixture", zipf_fixture),
        ("distribution fitting", distribution_fitting),
        ("time dilation", time_dilation),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let check = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Check { passed: false, detail: format!("panicked: {msg}") }
        });
        if !check.passed {
            failed += 1;
        }
        println!("{} criterion {}: {name}: {}", if check.passed { "PASS" } else { "FAIL" }, i + 1, check.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
