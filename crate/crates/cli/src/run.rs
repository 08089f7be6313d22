use std::cell::Cell;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use quadstat_core::association::*;
use quadstat_core::linalg::{Matrix, Vector};
use quadstat_core::models::{self, SyntheticModel};
use quadstat_core::quadform::*;
use quadstat_core::validation::*;
use quadstat_core::{Error, Method};

use crate::config::*;
use crate::error::{CliError, Result};
use crate::load::{load_frequencies, load_haplotype_counts, load_similarity_matrix};
use crate::report::{surrogate_json, Report, Table};

/// Probabilities at which `validate --qq` compares quantiles.
fn qq_probabilities() -> Vec<f64> {
    let mut p = vec![1e-5, 1e-4, 1e-3];
    p.extend((1..100).map(|i| i as f64 / 100.0));
    p.extend([0.999, 0.9999, 0.99999]);
    p
}

pub fn run(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut report = match &config.command {
        Command::Pvalue(a) => pvalue_cmd(a)?,
        Command::Power(a) => power_cmd(a)?,
        Command::Samplesize(a) => samplesize_cmd(a)?,
        Command::Simulate(a) => simulate_cmd(a)?,
        Command::Validate(a) => validate_cmd(a)?,
        Command::Dist(a) => dist_cmd(a)?,
    };
    if config.timing {
        report.set("wall_time_seconds", json!(start.elapsed().as_secs_f64()));
    }
    Ok(report)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn similarity(args: &SimilarityArgs, haplotypes: &[String]) -> Result<(SimilarityMatrix, Value)> {
    if let Some(path) = &args.matrix {
        return Ok((
            load_similarity_matrix(path, haplotypes)?,
            json!({ "matrix": path_str(path) }),
        ));
    }
    let measure = args.measure.unwrap_or(MeasureArg::Counting);
    match &args.locus_weights {
        Some(w) if measure == MeasureArg::Length => Ok((
            SimilarityMatrix::length_weighted(haplotypes, w)?,
            json!({ "measure": "length", "locus_weights": w }),
        )),
        Some(_) => Err(CliError::Usage(
            "--locus-weights applies to --measure length only".into(),
        )),
        None => Ok((
            similarity_matrix(haplotypes, measure.into())?,
            json!({ "measure": Measure::from(measure).name() }),
        )),
    }
}

fn frequencies(source: &ModelSource) -> Result<(FrequencyModel, Value)> {
    match (&source.model, &source.input) {
        (Some(m), _) => {
            let model = SyntheticModel::from(*m);
            Ok((model.alternative(), json!({ "model": model.name })))
        }
        (None, Some(path)) => Ok((load_frequencies(path)?, json!({ "input": path_str(path) }))),
        (None, None) => Err(CliError::Usage("one of --model or --input is required".into())),
    }
}

fn group_m(n: u64, m: Option<u64>, ratio: f64) -> Result<u64> {
    if let Some(m) = m {
        return Ok(m);
    }
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::Domain {
            what: "group size ratio",
            value: ratio,
        }
        .into());
    }
    Ok(((ratio * n as f64).round() as u64).max(1))
}

fn pvalue_cmd(args: &PvalueArgs) -> Result<Report> {
    let sample = load_haplotype_counts(&args.input)?;
    let (a, sim_echo) = similarity(&args.similarity, sample.haplotypes())?;
    let method = Method::from(args.method);
    let opts = InferenceOptions {
        n_draws: args.n_draws,
        n_perm: args.n_perm,
        seed: args.sim.seed,
        workers: args.sim.workers,
        ..InferenceOptions::default()
    };
    let r = pvalue(&sample, &a, method, &opts)?;
    let mut report = Report::new("pvalue");
    report
        .set(
            "inputs",
            json!({
                "input": path_str(&args.input),
                "similarity": sim_echo,
                "method": method.name(),
                "n_perm": args.n_perm,
                "n_draws": args.n_draws,
                "seed": args.sim.seed,
            }),
        )
        .set(
            "data",
            json!({ "haplotypes": sample.k(), "loci": sample.loci(), "n": sample.n(), "m": sample.m() }),
        )
        .set(
            "result",
            json!({
                "statistic": r.statistic,
                "p_value": r.p_value,
                "replicates": r.replicates,
                "exceedances": r.exceedances,
            }),
        )
        .set("surrogate", r.surrogate.as_ref().map_or(Value::Null, surrogate_json))
        .set(
            "diagnostics",
            json!({ "r_sigma": r.r_sigma, "dropped": r.dropped, "warnings": r.warnings }),
        );
    Ok(report)
}

fn power_cmd(args: &PowerArgs) -> Result<Report> {
    let (freqs, source) = frequencies(&args.source)?;
    let (a, sim_echo) = similarity(&args.similarity, freqs.haplotypes())?;
    let m = group_m(args.n, args.m, args.ratio)?;
    let r = power(&freqs, &a, args.n, m, args.alpha, args.null_surrogate.into())?;
    let mut report = Report::new("power");
    report
        .set(
            "inputs",
            json!({
                "source": source,
                "similarity": sim_echo,
                "n": args.n,
                "m": m,
                "alpha": args.alpha,
                "null": Method::from(null_method(args.null_surrogate)).name(),
            }),
        )
        .set(
            "result",
            json!({ "power": r.power, "critical_value": r.critical_value }),
        )
        .set("null_surrogate", surrogate_json(&r.null))
        .set("alternative_surrogate", surrogate_json(&r.alternative));
    Ok(report)
}

fn null_method(n: NullArg) -> MethodArg {
    match n {
        NullArg::FourCum => MethodArg::FourCum,
        NullArg::TwoCum => MethodArg::TwoCum,
    }
}

fn samplesize_cmd(args: &SampleSizeArgs) -> Result<Report> {
    let (freqs, source) = frequencies(&args.source)?;
    let (a, sim_echo) = similarity(&args.similarity, freqs.haplotypes())?;
    let r = sample_size(
        &freqs,
        &a,
        args.ratio,
        args.alpha,
        args.power,
        args.null_surrogate.into(),
    )?;
    let mut report = Report::new("samplesize");
    report
        .set(
            "inputs",
            json!({
                "source": source,
                "similarity": sim_echo,
                "ratio": args.ratio,
                "alpha": args.alpha,
                "target_power": args.power,
                "null": Method::from(null_method(args.null_surrogate)).name(),
            }),
        )
        .set(
            "result",
            json!({
                "n": r.n,
                "m": r.m,
                "power": r.power,
                "power_at_n_minus_1": r.power_below,
                "evaluations": r.evaluations,
            }),
        )
        .set("diagnostics", json!({ "warnings": r.warnings }));
    Ok(report)
}

fn simulate_cmd(args: &SimulateArgs) -> Result<Report> {
    let (alt, source) = frequencies(&args.source)?;
    let freqs = match args.hypothesis {
        Hypothesis::Null => FrequencyModel::null(alt.haplotypes().to_vec(), alt.p().to_vec())?,
        Hypothesis::Alternative => alt,
    };
    let m = group_m(args.n, args.m, args.ratio)?;
    let seed = args.sim.seed;
    let mut report = Report::new("simulate");
    let mut inputs = json!({
        "source": source,
        "hypothesis": if args.hypothesis == Hypothesis::Null { "null" } else { "alternative" },
        "n": args.n,
        "m": m,
        "seed": seed,
    });

    if args.counts {
        let sample = simulate_counts(&freqs, args.n, m, seed)?;
        report.set("inputs", inputs);
        report.table = Some(Table {
            name: "counts",
            columns: vec!["haplotype", "count1", "count2"],
            rows: (0..sample.k())
                .map(|i| {
                    vec![
                        json!(sample.haplotypes()[i]),
                        json!(sample.counts1()[i]),
                        json!(sample.counts2()[i]),
                    ]
                })
                .collect(),
        });
        return Ok(report);
    }

    let (a, sim_echo) = similarity(&args.similarity, freqs.haplotypes())?;
    let statistic = Statistic::from(args.statistic);
    let draws = simulate_statistics(&freqs, &a, args.n, m, statistic, args.n_draws, seed, args.sim.workers)?;
    let e = EmpiricalDistribution::from_samples(draws.clone())?;
    let obj = inputs.as_object_mut().unwrap();
    obj.insert("similarity".into(), sim_echo);
    obj.insert("statistic".into(), json!(statistic.name()));
    obj.insert("n_draws".into(), json!(args.n_draws));
    let quantiles: serde_json::Map<String, Value> = [0.5, 0.9, 0.95, 0.99, 0.999]
        .iter()
        .map(|&p| (format!("{p}"), json!(e.quantile(p))))
        .collect();
    report
        .set("inputs", inputs)
        .set("summary", json!({ "mean": e.mean(), "quantiles": quantiles }));
    report.table = Some(Table {
        name: "draws",
        columns: vec!["replicate", "statistic"],
        rows: draws
            .iter()
            .enumerate()
            .map(|(i, d)| vec![json!(i), json!(d)])
            .collect(),
    });
    Ok(report)
}

/// Runs `f` with a fallible CDF as if it were infallible and returns the
/// first error, if any.
fn with_cdf<T>(cdf: impl Fn(f64) -> quadstat_core::Result<f64>, f: impl FnOnce(&dyn Fn(f64) -> f64) -> T) -> Result<T> {
    let failure: Cell<Option<Error>> = Cell::new(None);
    let g = |x: f64| match cdf(x) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    let out = f(&g);
    match failure.into_inner() {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

fn surrogate_cdf(s: &Surrogate, x: f64) -> quadstat_core::Result<f64> {
    match s {
        Surrogate::TwoCum(t) => Ok(t.cdf(x)),
        Surrogate::FourCum(f) => Ok(f.cdf(x)),
        Surrogate::Difference(d) => d.cdf(x),
        Surrogate::PointMass(c) => Ok(if x >= *c { 1.0 } else { 0.0 }),
    }
}

/// Surrogates that apply to `form`: the chi-square matches for nonnegative
/// weights (two-cum only for zero-mean forms), sign splitting otherwise.
fn applicable_surrogates(form: &GaussianQuadraticForm) -> Result<Vec<Surrogate>> {
    let (_, w) = spectral_reduce(form, DEFAULT_RANK_TOL)?;
    let mut out = Vec::new();
    if w.is_nonnegative() {
        if form.is_central() {
            out.push(Surrogate::TwoCum(two_cum(form)?));
        }
        out.push(Surrogate::FourCum(four_cum(form)?));
    } else {
        out.push(Surrogate::Difference(split_sign_approx(&w)?));
    }
    Ok(out)
}

fn validate_cmd(args: &ValidateArgs) -> Result<Report> {
    let chosen: Vec<SyntheticModel> = match args.model {
        Some(m) => vec![m.into()],
        None => models::ALL.to_vec(),
    };
    let measures: Vec<Measure> = match args.measure {
        Some(m) => vec![m.into()],
        None => vec![Measure::Matching, Measure::Length, Measure::Counting],
    };
    let m = args.m.unwrap_or(args.n);
    let statistic = Statistic::from(args.statistic);
    let probs = qq_probabilities();
    let mut rows = Vec::new();
    let mut qq_rows = Vec::new();
    for model in &chosen {
        let null = model.null();
        for &measure in &measures {
            let a = similarity_matrix(null.haplotypes(), measure)?;
            let form = match statistic {
                Statistic::Ds => form_for_ds(&null, &a, args.n, m)?,
                Statistic::Dt => statistic_dt_form(&null, &a, args.n, m)?,
            };
            let draws = simulate_statistics(
                &null,
                &a,
                args.n,
                m,
                statistic,
                args.n_draws,
                args.sim.seed,
                args.sim.workers,
            )?;
            let e = EmpiricalDistribution::from_samples(draws)?;
            for s in applicable_surrogates(&form)? {
                let method = s.method().map_or("point-mass", Method::name);
                let cdf = |x: f64| surrogate_cdf(&s, x);
                let k = with_cdf(cdf, |f| kolmogorov_distance_monotone(f, &e))?;
                let cm = with_cdf(cdf, |f| cramer_von_mises_distance(f, &e))?;
                rows.push(vec![
                    json!(model.name),
                    json!(model.haplotypes.len()),
                    json!(measure.name()),
                    json!(method),
                    json!(k),
                    json!(cm),
                ]);
                if args.qq.is_some() {
                    let pairs = qq_pairs(|p| s.critical_value(1.0 - p), &e, &probs)?;
                    for (&p, (emp, theo)) in probs.iter().zip(pairs) {
                        qq_rows.push([
                            model.name.to_string(),
                            measure.name().to_string(),
                            method.to_string(),
                            json!(p).to_string(),
                            json!(emp).to_string(),
                            json!(theo).to_string(),
                        ]);
                    }
                }
            }
        }
    }
    if let Some(path) = &args.qq {
        let io = |source| CliError::Io {
            path: path.clone(),
            source,
        };
        let mut w = csv::Writer::from_path(path).map_err(|e| io(e.into()))?;
        w.write_record(["model", "measure", "method", "probability", "empirical", "surrogate"])
            .map_err(|e| io(e.into()))?;
        for r in &qq_rows {
            w.write_record(r).map_err(|e| io(e.into()))?;
        }
        w.flush().map_err(io)?;
    }
    let mut report = Report::new("validate");
    report.set(
        "inputs",
        json!({
            "models": chosen.iter().map(|m| m.name).collect::<Vec<_>>(),
            "measures": measures.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "statistic": statistic.name(),
            "n": args.n,
            "m": m,
            "n_draws": args.n_draws,
            "seed": args.sim.seed,
            "qq": args.qq.as_deref().map(path_str),
        }),
    );
    report.table = Some(Table {
        name: "distances",
        columns: vec!["model", "k", "measure", "method", "k_dist", "cm_dist"],
        rows,
    });
    Ok(report)
}

fn dist_cmd(args: &DistArgs) -> Result<Report> {
    let k = args.weights.len();
    let offsets = args.offsets.clone().unwrap_or_else(|| vec![0.0; k]);
    if offsets.len() != k {
        return Err(Error::Validation(format!("{k} weights but {} offsets", offsets.len())).into());
    }
    let form = GaussianQuadraticForm::new(
        Matrix::from_diagonal(&Vector::from_vec(args.weights.clone())),
        Vector::from_vec(offsets.clone()),
        Matrix::identity(k, k),
    )?;
    let method = Method::from(args.method);
    let mut inputs = json!({
        "weights": args.weights,
        "offsets": offsets,
        "method": method.name(),
        "x": args.x,
        "alpha": args.alpha,
    });
    let (_, w) = spectral_reduce(&form, DEFAULT_RANK_TOL)?;
    let mixed = || Error::NotApplicable {
        reason: "weights have mixed signs",
        fallback: Some(Method::DiffChisq),
    };
    let mut result = serde_json::Map::new();
    let mut surrogate = Value::Null;
    match method {
        Method::TwoCum | Method::FourCum | Method::DiffChisq => {
            let s = match method {
                Method::TwoCum if w.is_nonnegative() => Surrogate::TwoCum(two_cum(&form)?),
                Method::FourCum if w.is_nonnegative() => Surrogate::FourCum(four_cum(&form)?),
                Method::DiffChisq => Surrogate::Difference(split_sign_approx(&w)?),
                _ => return Err(mixed().into()),
            };
            if let Some(x) = args.x {
                result.insert("tail_prob".into(), json!(s.tail_prob(x)?));
            }
            if let Some(alpha) = args.alpha {
                result.insert("critical_value".into(), json!(s.critical_value(alpha)?));
            }
            surrogate = surrogate_json(&s);
        }
        Method::MonteCarlo => {
            let e = mc_sample(&w, args.n_draws, args.sim.seed, args.sim.workers)?;
            let obj = inputs.as_object_mut().unwrap();
            obj.insert("n_draws".into(), json!(args.n_draws));
            obj.insert("seed".into(), json!(args.sim.seed));
            if let Some(x) = args.x {
                result.insert("tail_prob".into(), json!(e.tail_fraction(x)));
            }
            if let Some(alpha) = args.alpha {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::Domain {
                        what: "significance level",
                        value: alpha,
                    }
                    .into());
                }
                result.insert("critical_value".into(), json!(e.quantile(1.0 - alpha)));
            }
        }
        Method::Permutation => {
            return Err(CliError::Usage(
                "permutation needs haplotype counts; use `pvalue`".into(),
            ));
        }
    }
    let mut report = Report::new("dist");
    report
        .set("inputs", inputs)
        .set("cumulants", json!(cumulants(&form).kappa))
        .set("surrogate", surrogate)
        .set("result", Value::Object(result));
    Ok(report)
}
