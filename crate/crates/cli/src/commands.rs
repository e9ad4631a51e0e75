use std::path::Path;

use conceptua::bell::{chsh, singlet_tables, JointProbabilityTable, TSIRELSON_BOUND};
use conceptua::cognitons::{
    compare_fits, rank_table, tokenize, zipf_products, FitKind, Strip, TokenizerConfig,
};
use conceptua::dilation::{coordinate, dilation_factor, euclidean_length, minkowski_length, SpacetimeTrajectory};
use conceptua::ebr::{perceptual_warp, run_measurement_statistics, to_bloch, CollapseSampler};
use conceptua::hilbert::{gell_mann_basis, lueders_update, DensityState};
use conceptua::interference::{
    classical_mixture, classify_extension, interference_deviation, predict_disjunction, solve_phases,
    synthetic_demo,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{BellArgs, CognitonsArgs, DilationArgs, EbrArgs, InterferenceArgs, StripArg};
use crate::error::CliError;
use crate::input::{self, BellInput, ComplexPair, EbrInput, MeasurementSpec};
use crate::plot::{Cell, PlotTable};
use crate::report::Report;

pub type Outcome<T> = Result<(Report<T>, PlotTable), CliError>;

fn path_echo(p: &Path) -> serde_json::Value {
    serde_json::Value::String(p.display().to_string())
}

fn density_rows(rho: &DensityState) -> Vec<Vec<ComplexPair>> {
    rho.matrix().rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EbrOutcomeRow {
    pub members: Vec<usize>,
    pub count: u64,
    pub frequency: f64,
    pub born_probability: f64,
    pub ebr_probability: f64,
    pub sigma: f64,
    pub z_score: Option<f64>,
    /// Post-measurement state for this outcome; absent at zero probability.
    pub post_state: Option<Vec<Vec<ComplexPair>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpRow {
    pub surface_distance: f64,
    pub equilibrium_distance: f64,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EbrResult {
    pub dimension: usize,
    pub samples: u64,
    pub grouped: bool,
    /// Trace-formula probabilities per basis outcome.
    pub born: Vec<f64>,
    /// Barycentric coordinates of the equilibrium point per basis outcome.
    pub ebr: Vec<f64>,
    pub max_oracle_deviation: f64,
    pub bloch_vector: Vec<f64>,
    pub equilibrium_point: Vec<f64>,
    pub outcomes: Vec<EbrOutcomeRow>,
    pub warp: Option<WarpRow>,
}

pub fn run_ebr(args: &EbrArgs) -> Outcome<EbrResult> {
    let doc: EbrInput = input::read_json(&args.input)?;
    let rho = doc.state.to_state()?;
    let n = rho.dim();
    let m = doc.measurement.clone().unwrap_or_default().to_measurement(n)?;
    let basis = gell_mann_basis(n)?;

    let stats = run_measurement_statistics(&rho, &m, &basis, args.samples, args.common.seed)?;
    let sampler = CollapseSampler::new(&rho, &m, &basis, args.common.seed)?;
    let born = conceptua::hilbert::born_probability(&rho, &m)?;
    let bloch = to_bloch(&rho, &basis)?;

    let mut outcomes = Vec::with_capacity(stats.outcomes.len());
    for o in &stats.outcomes {
        let post_state = if o.born_probability > 1e-14 {
            Some(density_rows(&lueders_update(&rho, &o.members, &m)?))
        } else {
            None
        };
        outcomes.push(EbrOutcomeRow {
            members: o.members.clone(),
            count: o.count,
            frequency: o.frequency,
            born_probability: o.born_probability,
            ebr_probability: o.ebr_probability,
            sigma: o.sigma,
            z_score: o.z_score,
            post_state,
        });
    }

    let warp = match &doc.compare_state {
        Some(spec) => {
            let w = perceptual_warp(&rho, &spec.to_state()?, &m, &basis)?;
            Some(WarpRow { surface_distance: w.surface_distance, equilibrium_distance: w.equilibrium_distance, ratio: w.ratio })
        }
        None => None,
    };

    let mut plot = PlotTable::new(&["outcome", "born", "ebr", "frequency", "sigma"]);
    for o in &outcomes {
        let label = o.members.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("+");
        plot.push(vec![label.into(), o.born_probability.into(), o.ebr_probability.into(), o.frequency.into(), o.sigma.into()]);
    }

    let result = EbrResult {
        dimension: n,
        samples: args.samples,
        grouped: stats.grouped,
        born,
        ebr: sampler.equilibrium().barycentric.clone(),
        max_oracle_deviation: stats.max_oracle_deviation,
        bloch_vector: bloch.coords().to_vec(),
        equilibrium_point: sampler.equilibrium().ambient.clone(),
        outcomes,
        warp,
    };
    let measurement: MeasurementSpec = doc.measurement.clone().unwrap_or_default();
    let echo = json!({
        "input": path_echo(&args.input),
        "samples": args.samples,
        "state": doc.state,
        "measurement": measurement,
        "compare_state": doc.compare_state,
    });
    Ok((Report::new("ebr", args.common.seed, echo, result), plot))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceRow {
    pub exemplar: String,
    pub mu_a: f64,
    pub mu_b: f64,
    pub mixture: f64,
    pub mu_obs: f64,
    pub deviation: f64,
    pub cos_theta: f64,
    pub clamped: bool,
    pub unfittable: bool,
    pub residual: f64,
    /// Prediction from the fitted phase.
    pub predicted: f64,
    pub extension: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceResult {
    pub rows: Vec<InterferenceRow>,
    /// `sum_k sqrt(mu_a mu_b) cos theta_k`; zero for a normalized disjunction.
    pub consistency: f64,
    pub deviation_sum: f64,
    pub any_clamped: bool,
    pub classical_tolerance: f64,
}

pub fn run_interference(args: &InterferenceArgs) -> Outcome<InterferenceResult> {
    let (dataset, source) = match &args.input {
        Some(p) => (input::parse_disjunction_csv(&input::read_bytes(p)?, &p.display().to_string())?, path_echo(p)),
        None => (synthetic_demo(), serde_json::Value::String("builtin synthetic dataset".into())),
    };
    let mixture = classical_mixture(dataset.mu_a(), dataset.mu_b())?;
    let deviation = interference_deviation(&dataset);
    let phases = solve_phases(&dataset);
    let predicted = predict_disjunction(dataset.mu_a(), dataset.mu_b(), &phases.cos_theta)?;
    let extension = classify_extension(&dataset, args.classical_tol)?;

    let mut plot = PlotTable::new(&["exemplar", "mu_a", "mu_b", "mixture", "mu_obs"]);
    let rows: Vec<InterferenceRow> = (0..dataset.len())
        .map(|k| {
            plot.push(vec![
                dataset.exemplars()[k].clone().into(),
                dataset.mu_a()[k].into(),
                dataset.mu_b()[k].into(),
                mixture[k].into(),
                dataset.mu_obs()[k].into(),
            ]);
            InterferenceRow {
                exemplar: dataset.exemplars()[k].clone(),
                mu_a: dataset.mu_a()[k],
                mu_b: dataset.mu_b()[k],
                mixture: mixture[k],
                mu_obs: dataset.mu_obs()[k],
                deviation: deviation[k],
                cos_theta: phases.cos_theta[k],
                clamped: phases.clamped[k],
                unfittable: phases.unfittable[k],
                residual: phases.residuals[k],
                predicted: predicted[k],
                extension: extension[k].as_str().to_string(),
            }
        })
        .collect();

    let result = InterferenceResult {
        rows,
        consistency: phases.consistency,
        deviation_sum: deviation.iter().sum(),
        any_clamped: phases.any_clamped(),
        classical_tolerance: args.classical_tol,
    };
    let echo = json!({ "input": source, "classical_tol": args.classical_tol });
    Ok((Report::new("interference", args.common.seed, echo, result), plot))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellResult {
    /// Probabilities `(p11, p12, p21, p22)` for AB, ABp, ApB, ApBp.
    pub tables: [[f64; 4]; 4],
    pub e_ab: f64,
    pub e_abp: f64,
    pub e_apb: f64,
    pub e_apbp: f64,
    /// `E(A',B') + E(A',B) + E(A,B') - E(A,B)`.
    pub s_value: f64,
    /// Largest value over the sign placements with an odd number of minus signs.
    pub s_max: f64,
    pub violates_classical: bool,
    pub exceeds_tsirelson: bool,
    pub classical_bound: f64,
    pub tsirelson_bound: f64,
}

pub fn run_bell(args: &BellArgs) -> Outcome<BellResult> {
    let (tables, echo): ([JointProbabilityTable; 4], serde_json::Value) = match (&args.singlet, &args.input) {
        (Some([a, ap, b, bp]), _) => (
            [singlet_tables(*a, *b), singlet_tables(*a, *bp), singlet_tables(*ap, *b), singlet_tables(*ap, *bp)],
            json!({ "singlet": { "a": a, "a_prime": ap, "b": b, "b_prime": bp } }),
        ),
        (None, Some(path)) => {
            let doc: BellInput = input::read_json(path)?;
            (doc.to_tables()?, json!({ "input": path_echo(path), "tables": doc.tables }))
        }
        (None, None) => return Err(CliError::Validation("either --input or --singlet is required".into())),
    };
    let r = chsh(&tables[0], &tables[1], &tables[2], &tables[3]);

    let mut plot = PlotTable::new(&["pair", "expectation", "p11", "p12", "p21", "p22"]);
    let es = [r.e_ab, r.e_abp, r.e_apb, r.e_apbp];
    for ((label, t), e) in ["AB", "ABp", "ApB", "ApBp"].iter().zip(&tables).zip(es) {
        let p = t.probabilities();
        plot.push(vec![(*label).into(), e.into(), p[0].into(), p[1].into(), p[2].into(), p[3].into()]);
    }

    let result = BellResult {
        tables: tables.map(|t| t.probabilities()),
        e_ab: r.e_ab,
        e_abp: r.e_abp,
        e_apb: r.e_apb,
        e_apbp: r.e_apbp,
        s_value: r.s_value,
        s_max: r.s_max,
        violates_classical: r.violates_classical,
        exceeds_tsirelson: r.exceeds_tsirelson,
        classical_bound: 2.0,
        tsirelson_bound: TSIRELSON_BOUND,
    };
    Ok((Report::new("bell", args.common.seed, echo, result), plot))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub rank: usize,
    pub word: String,
    pub count: u64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZipfSummary {
    pub top_k: usize,
    /// `rank * count` for the first `top_k` ranks.
    pub top_products: Vec<u64>,
    /// `rank * count` for every rank.
    pub products: Vec<u64>,
    pub max_min_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoseEinsteinFit {
    pub a: f64,
    pub b: f64,
    pub mu: f64,
    pub sse_log: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxwellBoltzmannFit {
    pub c: f64,
    pub b: f64,
    pub sse_log: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fits {
    pub bose_einstein: BoseEinsteinFit,
    pub maxwell_boltzmann: MaxwellBoltzmannFit,
    pub winner: String,
    pub tie: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CognitonsResult {
    pub total_tokens: u64,
    pub distinct_words: usize,
    pub zipf: ZipfSummary,
    pub fits: Fits,
    pub rank_table: Vec<RankEntry>,
}

pub fn tokenizer_config(args: &CognitonsArgs) -> TokenizerConfig {
    let strip = match args.strip {
        StripArg::AsciiPunctuation => Strip::AsciiPunctuation,
        StripArg::NonAlphanumeric => Strip::NonAlphanumeric,
        StripArg::Nothing => Strip::Nothing,
    };
    TokenizerConfig { lowercase: !args.keep_case, strip, min_length: args.min_len.max(1) }
}

pub fn run_cognitons(args: &CognitonsArgs) -> Outcome<CognitonsResult> {
    let bytes = input::read_bytes(&args.input)?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::parse(args.input.display().to_string(), e))?;
    let config = tokenizer_config(args);
    let tokens = tokenize(&text, &config);
    let table = rank_table(&tokens)?;
    let zipf = zipf_products(&table, args.top_k)?;
    let cmp = compare_fits(&table.occupancy())?;

    let (FitKind::BoseEinstein { a, b: b_be, mu }, FitKind::MaxwellBoltzmann { c, b: b_mb }) = (cmp.be.kind, cmp.mb.kind) else {
        unreachable!("compare_fits returns one fit of each family")
    };

    let mut plot = PlotTable::new(&["rank", "word", "energy", "ln_energy", "count", "ln_count", "ln_be", "ln_mb"]);
    for row in table.rows() {
        plot.push(vec![
            row.rank.into(),
            row.word.as_str().into(),
            row.energy.into(),
            row.energy.ln().into(),
            row.count.into(),
            (row.count as f64).ln().into(),
            Cell::Number(cmp.be.kind.ln_predict(row.energy)),
            Cell::Number(cmp.mb.kind.ln_predict(row.energy)),
        ]);
    }

    let result = CognitonsResult {
        total_tokens: table.total_tokens(),
        distinct_words: table.len(),
        zipf: ZipfSummary {
            top_k: zipf.top_k,
            top_products: zipf.top().to_vec(),
            products: zipf.products.clone(), max_min_ratio: zipf.max_min_ratio },
        fits: Fits {
            bose_einstein: BoseEinsteinFit {
                a,
                b: b_be,
                mu,
                sse_log: cmp.be.sse_log,
                iterations: cmp.be.iterations,
                converged: cmp.be.converged,
            },
            maxwell_boltzmann: MaxwellBoltzmannFit { c, b: b_mb, sse_log: cmp.mb.sse_log },
            winner: cmp.winner.as_str().to_string(),
            tie: cmp.tie,
        },
        rank_table: table
            .rows()
            .iter()
            .map(|r| RankEntry { rank: r.rank, word: r.word.clone(), count: r.count, energy: r.energy })
            .collect(),
    };
    let echo = json!({
        "input": path_echo(&args.input),
        "top_k": args.top_k,
        "lowercase": config.lowercase,
        "min_len": config.min_length,
        "strip": format!("{:?}", args.strip),
    });
    Ok((Report::new("cognitons", args.common.seed, echo, result), plot))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationResult {
    pub n_a: usize,
    pub n_b: usize,
    pub step_length: f64,
    pub speed: f64,
    pub step_duration: f64,
    pub velocity: f64,
    pub beta: f64,
    /// `n_a / n_b`.
    pub gamma: f64,
    /// `1 / sqrt(1 - v^2/c^2)` evaluated at the derived velocity.
    pub dilation_factor: f64,
    /// `(t, x)` vertices.
    pub trajectory_a: Vec<[f64; 2]>,
    pub trajectory_b: Vec<[f64; 2]>,
    pub step_minkowski_lengths_b: Vec<f64>,
    pub minkowski_length_a: f64,
    pub minkowski_length_b: f64,
    pub euclidean_length_a: f64,
    pub euclidean_length_b: f64,
}

fn vertex_list(t: &SpacetimeTrajectory) -> Vec<[f64; 2]> {
    t.vertices().iter().map(|&(t, x)| [t, x]).collect()
}

pub fn run_dilation(args: &DilationArgs) -> Outcome<DilationResult> {
    let (l, c) = (args.step_length, args.speed);
    let r = coordinate(args.na, args.nb, l, c)?;

    let mut plot = PlotTable::new(&["series", "t", "x"]);
    for (name, traj) in [("A", &r.trajectory_a), ("B", &r.trajectory_b)] {
        for &(t, x) in traj.vertices() {
            plot.push(vec![name.into(), t.into(), x.into()]);
        }
    }

    let result = DilationResult {
        n_a: args.na,
        n_b: args.nb,
        step_length: l,
        speed: c,
        step_duration: l / c,
        velocity: r.velocity,
        beta: r.velocity / c,
        gamma: r.gamma,
        dilation_factor: dilation_factor(r.velocity, c)?,
        trajectory_a: vertex_list(&r.trajectory_a),
        trajectory_b: vertex_list(&r.trajectory_b),
        step_minkowski_lengths_b: r.step_lengths_b.clone(),
        minkowski_length_a: minkowski_length(&r.trajectory_a, c)?,
        minkowski_length_b: minkowski_length(&r.trajectory_b, c)?,
        euclidean_length_a: euclidean_length(&r.trajectory_a, c),
        euclidean_length_b: euclidean_length(&r.trajectory_b, c),
    };
    let echo = json!({ "na": args.na, "nb": args.nb, "L": l, "c": c });
    Ok((Report::new("dilation", args.common.seed, echo, result), plot))
}
