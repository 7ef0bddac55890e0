use std::fmt::Write as _;
use std::path::Path;

use gdap_core::decomposition::backend;
use gdap_core::{
    group_components, legacy_dap, pull_back, solve_constrained, validate_config, ComponentMatrix,
    Grouping, IndexConvention, Method, Reconstruction, Rectangle, TimeSeries,
};
use serde_json::json;

use crate::error::CliError;
use crate::io::{emit, fmt_f64, matrix_csv, matrix_rows, parse_matrix, read_series, read_text};
use crate::verify::{self, Suite};
use crate::{EmbeddingArgs, Format};

/// The worked configuration tabulated by `gdap tables`.
const TABLE_D: usize = 7;
const TABLE_M: usize = 9;
const TABLE_TAU: i64 = 3;

fn config_json(cfg: &gdap_core::EmbeddingConfig) -> serde_json::Value {
    json!({
        "N": cfg.len(),
        "d": cfg.d(),
        "m": cfg.m(),
        "tau": cfg.tau(),
        "s": cfg.s(),
    })
}

fn series_text(x: &TimeSeries) -> String {
    x.values().iter().map(|&v| fmt_f64(v) + "\n").collect()
}

fn load_series(input: &Path, args: &EmbeddingArgs) -> Result<TimeSeries, CliError> {
    let conv = IndexConvention::from_flag(args.convention)?;
    let x = read_series(input, conv)?;
    // Validate the scalar parameters before touching the data.
    validate_config(x.len() as i64, args.d, args.tau, args.convention)?;
    Ok(x)
}

pub fn embed(
    input: &Path,
    output: Option<&Path>,
    args: &EmbeddingArgs,
    format: Format,
) -> Result<(), CliError> {
    let x = load_series(input, args)?;
    let matrix = gdap_core::embed(&x, args.d as usize, args.tau as usize)?;
    let cfg = matrix.config();
    eprintln!("{cfg}");
    let text = match format {
        Format::Csv => matrix_csv(matrix.data()),
        Format::Json => {
            json!({ "config": config_json(cfg), "matrix": matrix_rows(matrix.data()) }).to_string()
                + "\n"
        }
    };
    emit(output, &text)
}

pub fn solve(n: i64, tau: i64, s: i64, rect: &[i64], format: Format) -> Result<(), CliError> {
    let conv = IndexConvention::from_flag(s)?;
    if tau < 1 {
        return Err(gdap_core::Error::InvalidDelay(tau).into());
    }
    let &[a1, a2, b1, b2] = rect else {
        return Err(CliError::usage("--rect takes exactly four integers"));
    };
    let rect = Rectangle::new(a1, a2, b1, b2)?;
    let set = solve_constrained(n, tau, conv, &rect);
    let text = match format {
        Format::Csv => {
            let mut out = String::from("x,y\n");
            for (x, y) in set.iter() {
                let _ = writeln!(out, "{x},{y}");
            }
            out
        }
        Format::Json => {
            let points: Vec<[i64; 2]> = set.iter().map(|&(x, y)| [x, y]).collect();
            json!({
                "n": n, "tau": tau, "s": s,
                "rect": [a1, a2, b1, b2],
                "solutions": points,
                "cardinality": set.len(),
            })
            .to_string()
                + "\n"
        }
    };
    eprintln!("cardinality={}", set.len());
    emit(None, &text)
}

fn format_set(points: &[(i64, i64)]) -> String {
    let inner: Vec<String> = points.iter().map(|(x, y)| format!("({x},{y})")).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn tables(s: Option<i64>, output: Option<&Path>) -> Result<(), CliError> {
    let flags = match s {
        Some(s) => vec![IndexConvention::from_flag(s)?],
        None => vec![IndexConvention::ZeroBased, IndexConvention::OneBased],
    };
    let n_total = TABLE_M as i64 + (TABLE_D as i64 - 1) * TABLE_TAU;
    let mut out = format!(
        "# N={n_total} d={TABLE_D} m={TABLE_M} tau={TABLE_TAU}\ns,n,x_min,x_max,cardinality,solutions\n"
    );
    for conv in flags {
        let cfg = validate_config(n_total, TABLE_D as i64, TABLE_TAU, conv.flag())?;
        let rect = Rectangle::for_matrix(cfg.d(), cfg.m(), conv)?;
        let (lo, hi) = cfg.index_range();
        for n in lo..=hi {
            let (x_min, x_max) = gdap_core::x_bounds(n, TABLE_TAU, conv, &rect);
            let set = solve_constrained(n, TABLE_TAU, conv, &rect);
            let _ = writeln!(
                out,
                "{},{n},{x_min},{x_max},{},\"{}\"",
                conv.flag(),
                set.len(),
                format_set(&set.points)
            );
            if conv == IndexConvention::ZeroBased && n == 6 {
                out.push_str(
                    "# n=6: the often-quoted set {(0,5),(1,2),(2,0)} does not satisfy 3x+y=6; \
                     the row above is the exhaustive solution\n",
                );
            }
        }
    }
    emit(output, &out)
}

pub struct DecomposeRequest<'a> {
    pub input: &'a Path,
    pub output: Option<&'a Path>,
    pub embedding: &'a EmbeddingArgs,
    pub backend: &'a str,
    pub groups: Option<&'a str>,
    pub legacy: bool,
    pub force: bool,
    pub format: Format,
}

fn reconstruction_mode(
    legacy: bool,
    force: bool,
    s: i64,
    tau: i64,
) -> Result<Reconstruction, CliError> {
    if !legacy {
        return Ok(Reconstruction::PullBack);
    }
    if s != 1 || tau != 1 {
        if !force {
            return Err(gdap_core::Error::LegacyModeUnsafe { s, tau }.into());
        }
        eprintln!(
            "warning: legacy anti-diagonal averaging is only exact for s=1, tau=1; \
             results for s={s}, tau={tau} do not reproduce the series"
        );
    }
    Ok(Reconstruction::Legacy { force })
}

pub fn decompose(req: &DecomposeRequest<'_>) -> Result<(), CliError> {
    let args = req.embedding;
    let method = Method::from_id(req.backend)?;
    let engine = backend(method)?;
    let grouping =
        req.groups
            .map(Grouping::parse)
            .transpose()
            .map_err(|m| CliError::Validation {
                kind: "InvalidGrouping",
                message: m,
            })?;
    let mode = reconstruction_mode(req.legacy, req.force, args.convention, args.tau)?;

    let x = load_series(req.input, args)?;
    let matrix = gdap_core::embed(&x, args.d as usize, args.tau as usize)?;
    let raw = engine.decompose(&matrix)?;
    let singular_values = raw
        .factors
        .as_ref()
        .map(|f| f.singular_values.clone())
        .unwrap_or_default();
    let dec = match &grouping {
        Some(g) => group_components(&raw, g)?,
        None => raw,
    };
    let energy = dec.energy_fractions();
    let parts = dec
        .components
        .iter()
        .map(|c| mode.apply(c))
        .collect::<Result<Vec<_>, _>>()?;
    let residual: Vec<f64> = (0..x.len())
        .map(|k| x.values()[k] - parts.iter().map(|p| p.values()[k]).sum::<f64>())
        .collect();
    let cfg = matrix.config();
    eprintln!("{cfg} components={}", parts.len());

    let text = match req.format {
        Format::Csv => {
            let mut out = String::from("n");
            for k in 1..=parts.len() {
                let _ = write!(out, ",component_{k}");
            }
            out.push_str(",residual\n");
            for (k, (n, _)) in x.iter_indexed().enumerate() {
                let _ = write!(out, "{n}");
                for p in &parts {
                    let _ = write!(out, ",{}", fmt_f64(p.values()[k]));
                }
                let _ = writeln!(out, ",{}", fmt_f64(residual[k]));
            }
            out
        }
        Format::Json => {
            let comps: Vec<&[f64]> = parts.iter().map(|p| p.values()).collect();
            json!({
                "config": config_json(cfg),
                "method": method.id(),
                "reconstruction": if req.legacy { "legacy" } else { "pull-back" },
                "singular_values": singular_values,
                "energy": energy,
                "components": comps,
                "residual": residual,
            })
            .to_string()
                + "\n"
        }
    };
    emit(req.output, &text)
}

pub fn reconstruct(
    input: &Path,
    output: Option<&Path>,
    tau: i64,
    convention: i64,
    legacy: bool,
    force: bool,
) -> Result<(), CliError> {
    let mode = reconstruction_mode(legacy, force, convention, tau)?;
    let data = parse_matrix(&read_text(input)?)?;
    let (d, m) = data.shape();
    if tau < 1 {
        return Err(gdap_core::Error::InvalidDelay(tau).into());
    }
    let len = m as i64 + (d as i64 - 1) * tau;
    let cfg = validate_config(len, d as i64, tau, convention)?;
    eprintln!("{cfg}");
    let component = ComponentMatrix::new(data, cfg, 1)?;
    let x = match mode {
        Reconstruction::PullBack => pull_back(&component)?,
        Reconstruction::Legacy { force } => legacy_dap(&component, force)?,
    };
    emit(output, &series_text(&x))
}

pub fn verify(suite: Suite, opts: &verify::Options) -> Result<(), CliError> {
    eprintln!("seed={} trials={}", opts.seed, opts.trials);
    let mut failed = 0;
    let mut out = String::new();
    for s in suite.expand() {
        let r = verify::run(s, opts);
        if !r.passed {
            failed += 1;
        }
        let _ = writeln!(
            out,
            "{} {} checks={} {}",
            if r.passed { "PASS" } else { "FAIL" },
            s.name(),
            r.checks,
            r.detail
        );
    }
    emit(None, &out)?;
    if failed > 0 {
        Err(CliError::VerifyFailed(failed))
    } else {
        Ok(())
    }
}
