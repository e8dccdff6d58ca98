use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use tailindex::complete_cl::ci_cl_tail;
use tailindex::sim::RNG_DESCRIPTION;
use tailindex::{
    censored_hill, ci_bayes, ci_el, ci_ml, ci_normal, coverage_experiment, el_center, hill, ks_stat_ordered,
    ml_alpha, optimal_k_summary, point_estimates, posterior_cl, posterior_jeffrey, theta_from_level, CensoredSample,
    Interval, Method, TailStats, TiltedPosterior, KS_CRITICAL_95,
};

use crate::config::{parse_config, parse_methods};
use crate::error::{CliError, CliResult, EXIT_ESTIMATOR, EXIT_OK};
use crate::input::read_sample;
use crate::table::{write_coverage, Metadata};

/// Output sinks for a command: the main report and a diagnostics stream.
pub struct Sinks<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn requested_methods(list: Option<&str>, sample: &CensoredSample) -> CliResult<Vec<Method>> {
    let methods = match list {
        Some(s) => parse_methods(&s.split(',').map(str::trim).filter(|s| !s.is_empty()).collect::<Vec<_>>())?,
        None if sample.is_complete() => Method::ALL.to_vec(),
        None => Method::ALL.iter().copied().filter(|m| m.supports_censoring()).collect(),
    };
    if !sample.is_complete() {
        if let Some(m) = methods.iter().find(|m| !m.supports_censoring()) {
            return Err(CliError::Usage(format!("method {m} needs complete data but the input has censored rows")));
        }
    }
    if methods.is_empty() {
        return Err(CliError::Usage("no methods requested".into()));
    }
    Ok(methods)
}

/// Point estimate and region for one method on one tail.
fn estimate_one(method: Method, tail: &TailStats, theta: f64) -> tailindex::Result<(f64, Interval)> {
    Ok(match method {
        Method::El => (el_center(tail)?, ci_el(tail, theta)?),
        Method::Bcl => {
            let post = TiltedPosterior::new(tail)?;
            (post.mean(), post.hpdi(theta)?)
        }
        Method::B => (posterior_jeffrey(tail)?.mean(), ci_bayes(tail, theta)?),
        Method::Ml => (ml_alpha(tail)?, ci_ml(tail, theta)?),
        Method::Cl2 => (1.0 / hill(tail), ci_cl_tail(tail, theta)?),
        Method::Normal => (ml_alpha(tail)?, ci_normal(tail, theta)?),
    })
}

pub fn estimate(
    input: &Path,
    k: usize,
    level: f64,
    methods: Option<&str>,
    io: &mut Sinks<'_>,
) -> CliResult<i32> {
    let sample = read_sample(input)?;
    let theta = theta_from_level(level)?;
    let methods = requested_methods(methods, &sample)?;
    let tail = sample.ordered().tail(k)?;
    let mut failed = false;

    let mut note = |what: &str, e: &tailindex::Error, err: &mut dyn Write| -> std::io::Result<()> {
        failed = true;
        writeln!(err, "{what}: {e}")
    };

    let chill = match censored_hill(&tail) {
        Ok(v) => Some(v),
        Err(e) => {
            note("censored_hill", &e, io.err)?;
            None
        }
    };
    let jeffrey = posterior_jeffrey(&tail).map(|p| point_estimates(&p));
    let uniform = vec![1.0 / k as f64; k];
    let cl = posterior_cl(&tail, &uniform).map(|p| point_estimates(&p));
    let ml = ml_alpha(&tail);
    for (what, r) in [("posterior_jeffrey", jeffrey.as_ref().err()), ("posterior_cl", cl.as_ref().err()), ("ML", ml.as_ref().err())] {
        if let Some(e) = r {
            note(what, e, io.err)?;
        }
    }

    writeln!(io.out, "n,k,threshold,p_hat,hill,censored_hill,mpe_jeffrey,map_jeffrey,mpe_cl,map_cl,ml")?;
    writeln!(
        io.out,
        "{},{},{},{},{},{},{},{},{},{},{}",
        tail.n(),
        tail.k(),
        tail.threshold(),
        tail.p_hat(),
        hill(&tail),
        fmt_opt(chill),
        fmt_opt(jeffrey.as_ref().ok().map(|p| p.mpe)),
        fmt_opt(jeffrey.as_ref().ok().and_then(|p| p.map)),
        fmt_opt(cl.as_ref().ok().map(|p| p.mpe)),
        fmt_opt(cl.as_ref().ok().and_then(|p| p.map)),
        fmt_opt(ml.as_ref().ok().copied()),
    )?;
    writeln!(io.out)?;
    writeln!(io.out, "method,level,lower,upper,length,status")?;
    for method in methods {
        match estimate_one(method, &tail, theta) {
            Ok((_, iv)) => writeln!(io.out, "{method},{level},{},{},{},ok", iv.lower, iv.upper, iv.length())?,
            Err(e) => {
                writeln!(io.out, "{method},{level},,,,{}", e.code())?;
                note(method.as_str(), &e, io.err)?;
            }
        }
    }
    Ok(if failed { EXIT_ESTIMATOR } else { EXIT_OK })
}

fn check_range(k_min: usize, k_max: usize, lowest: usize, n: usize) -> CliResult<()> {
    if k_min < lowest || k_min > k_max || k_max >= n {
        return Err(CliError::Usage(format!(
            "k range [{k_min}, {k_max}] must satisfy {lowest} <= k-min <= k-max <= n - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

pub fn sweep(
    input: &Path,
    k_min: usize,
    k_max: usize,
    level: f64,
    methods: Option<&str>,
    io: &mut Sinks<'_>,
) -> CliResult<i32> {
    let sample = read_sample(input)?;
    let theta = theta_from_level(level)?;
    let methods = requested_methods(methods, &sample)?;
    check_range(k_min, k_max, 2, sample.len())?;
    let ordered = sample.ordered();
    writeln!(io.out, "k,method,alpha_hat,lower,upper,length,p_hat,status")?;
    for k in k_min..=k_max {
        let tail = ordered.tail(k);
        for &method in &methods {
            match &tail {
                Err(e) => writeln!(io.out, "{k},{method},,,,,,{}", e.code())?,
                Ok(t) => match estimate_one(method, t, theta) {
                    Ok((a, iv)) => writeln!(
                        io.out,
                        "{k},{method},{a},{},{},{},{},ok",
                        iv.lower,
                        iv.upper,
                        iv.length(),
                        t.p_hat()
                    )?,
                    Err(e) => writeln!(io.out, "{k},{method},,,,,{},{}", t.p_hat(), e.code())?,
                },
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn ks(input: &Path, k_min: Option<usize>, k_max: Option<usize>, io: &mut Sinks<'_>) -> CliResult<i32> {
    let sample = read_sample(input)?;
    let n = sample.len();
    let (k_min, k_max) = (k_min.unwrap_or(1), k_max.unwrap_or(n - 1));
    check_range(k_min, k_max, 1, n)?;
    let ordered = sample.ordered();
    writeln!(io.out, "k,stat,reject")?;
    for k in k_min..=k_max {
        match ks_stat_ordered(&ordered, k) {
            Ok(stat) => writeln!(io.out, "{k},{stat},{}", stat > KS_CRITICAL_95)?,
            Err(e) => {
                writeln!(io.out, "{k},,")?;
                writeln!(io.err, "k = {k}: {e}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// `results.csv` → `results.optimal.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.optimal.csv"))
}

pub struct SimulateRequest<'a> {
    pub config: &'a Path,
    pub seed: Option<u64>,
    pub methods: Option<&'a str>,
    /// Where the optimal-k table goes; `None` appends it to the main output.
    pub summary: Option<&'a Path>,
}

pub fn simulate(req: &SimulateRequest<'_>, io: &mut Sinks<'_>) -> CliResult<i32> {
    let text = fs::read_to_string(req.config).map_err(|source| CliError::Io {
        path: req.config.to_owned(),
        source,
    })?;
    let loaded = parse_config(&text)?;
    let file = &loaded.file;
    let seed = req.seed.unwrap_or(file.seed);
    let methods = req
        .methods
        .map(|s| parse_methods(&s.split(',').map(str::trim).collect::<Vec<_>>()))
        .transpose()?;
    let studies = file.studies(seed, methods.as_deref())?;

    let mut rows = Vec::new();
    for study in &studies {
        rows.extend(coverage_experiment(study)?);
    }
    let summary = optimal_k_summary(&rows, file.level);

    let meta: Metadata = vec![
        ("command".into(), "simulate".into()),
        ("seed".into(), seed.to_string()),
        ("rng".into(), RNG_DESCRIPTION.into()),
        ("config_sha256".into(), loaded.sha256.clone()),
        ("target".into(), format!("{} {}", file.target_family, file.target_index)),
        ("n".into(), file.n.to_string()),
        ("m".into(), file.m.to_string()),
        ("level".into(), file.level.to_string()),
    ];
    write_coverage(io.out, &meta, &rows)?;
    let mut summary_meta = meta;
    summary_meta.push(("table".into(), "optimal k (coverage closest to level, ties to smaller k)".into()));
    match req.summary {
        Some(path) => {
            let mut f = fs::File::create(path).map_err(|source| CliError::Io {
                path: path.to_owned(),
                source,
            })?;
            write_coverage(&mut f, &summary_meta, &summary)?;
        }
        None => {
            writeln!(io.out)?;
            write_coverage(io.out, &summary_meta, &summary)?;
        }
    }
    Ok(EXIT_OK)
}
