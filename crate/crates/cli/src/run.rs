use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use gea_core::{
    categorize, gea, generalized_entropy, io, score_accuracy, CategorizationParams, Dendrogram, FeatureAllocation,
    Fixed, GeaError,
};
use thiserror::Error;

use crate::args::{ClusterArgs, EntropyArgs, Format, Mode};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl From<GeaError> for CliError {
    fn from(e: GeaError) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn parse_r(raw: &str) -> Result<Fixed, CliError> {
    let r: Fixed = raw.parse().map_err(|_| input(format!("--r: not a decimal: {raw:?}")))?;
    if !r.is_positive() {
        return Err(input(format!("--r must be positive, got {raw}")));
    }
    Ok(r)
}

fn load_allocation(path: &Path, r_override: Option<&str>) -> Result<FeatureAllocation, CliError> {
    let g = io::read_allocation(path)?;
    match r_override {
        Some(raw) => {
            let r = parse_r(raw)?;
            if r != g.r() {
                eprintln!("warning: --r {r} overrides r={} from {}", g.r(), path.display());
            }
            Ok(g.with_r(r)?)
        }
        None => Ok(g),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| input(format!("stdout: {e}")))
        }
    }
}

fn emit(d: &Dendrogram, args: &ClusterArgs) -> Result<(), CliError> {
    let out = args.output.as_deref();
    match args.format {
        Format::Json => write_output(out, &d.to_json()),
        Format::Newick => write_output(out, &d.to_newick()),
        Format::Both => {
            write_output(out, &d.to_json())?;
            let nwk = out.map(|p| p.with_extension("nwk"));
            write_output(nwk.as_deref(), &d.to_newick())
        }
    }
}

pub fn cluster(args: &ClusterArgs) -> Result<(), CliError> {
    let start = Instant::now();
    if args.cut == Some(0) {
        return Err(input("--cut must be at least 1"));
    }

    let (g, labels) = match args.mode {
        Mode::Numeric => {
            let (Some(d), Some(m), Some(gamma)) = (args.d, args.m, args.gamma) else {
                return Err(input("numeric mode needs --d, --m and --gamma"));
            };
            let r = args.r.as_deref().map(parse_r).transpose()?.unwrap_or(Fixed::ONE);
            let params = CategorizationParams::new(d, m, gamma, r)?;
            let mut ds = io::read_csv(&args.input, args.label_col.as_deref())?;
            if args.scale {
                ds = ds.min_max_scaled();
            }
            let labels = ds.labels().map(<[String]>::to_vec);
            (categorize(&ds, &params)?, labels)
        }
        Mode::Allocation => {
            if args.label_col.is_some() {
                eprintln!("warning: --label-col is ignored for allocation input");
            }
            (load_allocation(&args.input, args.r.as_deref())?, None)
        }
    };

    if let Some(path) = &args.emit_allocation {
        fs::write(path, io::write_allocation(&g)).map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    if let Some(k) = args.cut {
        if k > g.n() {
            return Err(input(format!("--cut {k} exceeds the {} elements", g.n())));
        }
    }

    let d = gea(&g)?;
    emit(&d, args)?;

    eprintln!(
        "n={} blocks={} r={} runtime={:.3}s",
        g.n(),
        g.blocks().len(),
        g.r(),
        start.elapsed().as_secs_f64()
    );
    if let Some(k) = args.cut {
        let clusters = d.cut(k)?;
        let sizes: Vec<String> = clusters.clusters().iter().map(|c| c.len().to_string()).collect();
        eprintln!("cut k={k} sizes={}", sizes.join(","));
        if let Some(labels) = &labels {
            let acc = score_accuracy(&clusters, labels)?;
            eprintln!("correct={} total={}", acc.correct, acc.total);
        }
    }
    Ok(())
}

pub fn entropy(args: &EntropyArgs) -> Result<(), CliError> {
    let g = load_allocation(&args.input, args.r.as_deref())?;
    write_output(None, &generalized_entropy(&g).to_string())
}
