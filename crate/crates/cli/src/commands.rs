use std::fs;
use std::path::{Path, PathBuf};

use discern::io::{sniff_header, to_string};
use discern::kestimators::{default_k_hi, scan, ScanMethod, ScanOptions};
use discern::{
    discern_init, kmeans_run, load_dataset, load_labels, save_result, Dataset, DatasetSpec, DiscernMode,
    EvaluationReport, Format, Init, KMeansConfig, LabelVector, Persist,
};

use crate::report::{print_report, CompareRow};
use crate::{
    ClusterArgs, CliError, CliResult, CompareArgs, CurveArgs, DataArgs, EstimateArgs, EstimateMethod, EvalArgs,
    InitArg,
};

const LABEL_HEADERS: [&str; 7] = ["label", "labels", "class", "species", "target", "cluster", "y"];

fn is_label_header(field: &str) -> bool {
    LABEL_HEADERS.contains(&field.to_ascii_lowercase().as_str())
}

/// A labels file has a header when its first row is non-numeric and its
/// last field is a conventional label column name.
fn labels_have_header(path: &Path, delimiter: u8) -> CliResult<bool> {
    Ok(sniff_header(path, delimiter)?
        .and_then(|fields| fields.last().cloned())
        .is_some_and(|last| is_label_header(&last)))
}

fn load(args: &DataArgs) -> CliResult<Dataset> {
    let mut spec = DatasetSpec::new(&args.data).with_metric(args.metric.into());
    let header = sniff_header(&args.data, spec.delimiter)?;
    spec = spec.with_header(header.is_some());
    if let Some(path) = &args.labels {
        let has_header = labels_have_header(path, spec.delimiter)?;
        spec = spec.with_labels_file(path).with_labels_header(has_header);
    } else if let Some(column) = args.label_column {
        spec = spec.with_label_column(column);
    } else if let Some(column) = header.iter().flatten().position(|f| is_label_header(f)) {
        spec = spec.with_label_column(column);
    }
    Ok(load_dataset(&spec)?)
}

fn load_predicted(path: &Path, data: &Dataset) -> CliResult<LabelVector> {
    let delimiter = DatasetSpec::new(path).delimiter;
    let labels = load_labels(path, delimiter, labels_have_header(path, delimiter)?)?;
    if labels.len() != data.n() {
        return Err(discern::Error::LengthMismatch {
            features: data.n(),
            labels: labels.len(),
        }
        .into());
    }
    Ok(labels)
}

pub(crate) fn parse_k(s: &str) -> Result<usize, String> {
    let k: usize = s.parse().map_err(|_| format!("'{s}' is not a whole number"))?;
    if k < 2 {
        return Err("k must be ≥ 2".into());
    }
    Ok(k)
}

fn write<T: Persist>(dir: &Path, stem: &str, value: &T, format: Format) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| discern::Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    save_result(value, &path, format)?;
    Ok(path)
}

pub fn estimate_k(args: EstimateArgs) -> CliResult {
    let data = load(&args.data)?;
    let format = args.format.into();
    let k = match args.method {
        EstimateMethod::Discern => {
            let result = discern_init(&data, DiscernMode::EstimateK { k_max: args.k_max })?;
            let curve = result.curve.expect("estimation yields a curve");
            if let Some(dir) = &args.out_dir {
                write(dir, "curve", &curve, format)?;
            }
            curve.estimated_k
        }
        EstimateMethod::Elbow | EstimateMethod::Silhouette => {
            let method = match args.method {
                EstimateMethod::Elbow => ScanMethod::Elbow,
                _ => ScanMethod::Silhouette,
            };
            let k_hi = args.k_max.unwrap_or_else(|| default_k_hi(data.n()));
            let options = ScanOptions {
                runs_per_k: args.runs_per_k,
                seed: args.seed,
                ..ScanOptions::default()
            };
            let result = scan(&data, method, 2..=k_hi, &options)?;
            if let Some(dir) = &args.out_dir {
                write(dir, "scan", &result, format)?;
            }
            if result.low_confidence {
                eprintln!("warning: the {method} curve shows no clear choice of K");
            }
            result.chosen_k
        }
    };
    println!("{k}");
    Ok(())
}

pub fn cluster(args: ClusterArgs) -> CliResult {
    let data = load(&args.data)?;
    let metric = data.metric();
    let format = args.format.into();
    let estimated = match args.k {
        Some(_) => None,
        None => Some(discern_init(&data, DiscernMode::EstimateK { k_max: args.k_max })?),
    };
    let k = args.k.or(estimated.as_ref().map(|r| r.k())).expect("k or estimate");
    let init = match args.init {
        InitArg::Discern => Init::Provided(match &estimated {
            Some(result) => result.centroids.clone(),
            None => discern_init(&data, DiscernMode::FixedK(k))?.centroids,
        }),
        InitArg::PlusPlus => Init::PlusPlus { seed: args.seed },
        InitArg::Random => Init::Random { seed: args.seed },
    };
    let config = KMeansConfig::new(k, metric, init).with_max_iterations(args.max_iter);
    let result = kmeans_run(&data, &config)?;
    let report = EvaluationReport::evaluate(&data, &result.labels, &result.centroids, metric)?;

    write(&args.out_dir, "labels", &result.labels, format)?;
    write(&args.out_dir, "centroids", &result.centroids, format)?;
    write(&args.out_dir, "report", &report, format)?;
    if let Some(curve) = estimated.and_then(|r| r.curve) {
        write(&args.out_dir, "curve", &curve, format)?;
    }

    print_report(&report);
    println!("{:<12}{}", "iterations", result.iterations_run);
    println!("{:<12}{}", "converged", result.converged);
    Ok(())
}

pub fn compare(args: CompareArgs) -> CliResult {
    let data = load(&args.data)?;
    let metric = data.metric();
    if data.labels().is_none() {
        return Err(CliError::Usage(
            "compare needs ground-truth labels (--labels, --label-column or a label header)".into(),
        ));
    }
    if args.repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let k = match (args.k, args.estimate) {
        (Some(k), _) => k,
        (None, true) => discern_init(&data, DiscernMode::EstimateK { k_max: args.k_max })?.k(),
        (None, false) => {
            let classes = data.class_count().unwrap_or(0);
            parse_k(&classes.to_string()).map_err(|e| CliError::Usage(format!("ground truth: {e}")))?
        }
    };

    let mut rows = Vec::new();
    let mut seen = Vec::new();
    for &method in &args.methods {
        if seen.contains(&method) {
            continue;
        }
        seen.push(method);
        let inits: Vec<Init> = match method {
            InitArg::Discern => vec![Init::Provided(discern_init(&data, DiscernMode::FixedK(k))?.centroids)],
            InitArg::PlusPlus => (0..args.repeats as u64)
                .map(|r| Init::PlusPlus { seed: args.seed.wrapping_add(r) })
                .collect(),
            InitArg::Random => (0..args.repeats as u64)
                .map(|r| Init::Random { seed: args.seed.wrapping_add(r) })
                .collect(),
        };
        let reports = inits
            .into_iter()
            .map(|init| {
                let config = KMeansConfig::new(k, metric, init).with_max_iterations(args.max_iter);
                let result = kmeans_run(&data, &config)?;
                EvaluationReport::evaluate(&data, &result.labels, &result.centroids, metric)
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(CompareRow::from_reports(method.name(), &reports));
    }
    for (name, path) in &args.external {
        let labels = load_predicted(path, &data)?;
        let report = EvaluationReport::evaluate_labels(&data, &labels, metric)?;
        rows.push(CompareRow::from_reports(name, &[report]));
    }

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|source| discern::Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = dir.join("compare.csv");
        fs::write(&path, CompareRow::to_csv(&rows)).map_err(|source| discern::Error::Io { path, source })?;
    }
    print!("{}", CompareRow::to_text(&rows));
    Ok(())
}

pub fn curve(args: CurveArgs) -> CliResult {
    let data = load(&args.data)?;
    let format = args.format.into();
    let result = discern_init(&data, DiscernMode::EstimateK { k_max: args.k_max })?;
    let curve = result.curve.expect("estimation yields a curve");
    match &args.out_dir {
        Some(dir) => {
            write(dir, "curve", &curve, format)?;
            println!("{}", curve.estimated_k);
        }
        None => print!("{}", to_string(&curve, format)?),
    }
    Ok(())
}

pub fn eval(args: EvalArgs) -> CliResult {
    let data = load(&args.data)?;
    let labels = load_predicted(&args.predicted, &data)?;
    let report = EvaluationReport::evaluate_labels(&data, &labels, data.metric())?;
    if let Some(dir) = &args.out_dir {
        write(dir, "report", &report, args.format.into())?;
    }
    print_report(&report);
    Ok(())
}
