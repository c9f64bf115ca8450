//! Command-line front end: diagram reports, c-function tables, norm-flow
//! experiments, harmonic consistency checks and reduction bookkeeping.
//!
//! Every run is reproducible from the parsed invocation alone; reports embed
//! the canonical invocation string and the crate version.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::convexg::InvariantConvexFn;
use crate::linalg::SplitMix64;
use crate::quad::QuadConfig;
use crate::quantize::{
    asymptotic_report, fourier_harmonic, fourier_harmonic_torus_average, reduction_dims,
    section_setup, AlgebraElement, GroupWord, NormReport,
};
use crate::repmat::{build_irrep, precision_from_env, spherical_vector_for_diagram, Precision};
use crate::report::{atomic_write, csv_header, fmt_f64, provenance, rat_str, weight_str, Json};
use crate::rootsys::WeightVec;
use crate::satake::{diagram_context, DiagramContext};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "symquant",
    version,
    about = "restricted root data and invariant norm flows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Restricted root system report for a named diagram.
    Satake {
        #[arg(long)]
        diagram: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spherical highest weights up to a coordinate-height bound.
    Spherical {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 8)]
        bound: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Harish-Chandra c-function table over the spherical weights.
    Cfun {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 20)]
        max_weight: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Norm flow along a Mabuchi ray over a time grid.
    Norms {
        #[arg(long)]
        diagram: String,
        /// Ray generator, e.g. "0.5*q + 0.05*q^2".
        #[arg(long, default_value = "0.5*q")]
        h: String,
        /// Comma-separated increasing positive times.
        #[arg(long, default_value = "1,5,10,20,40")]
        t: String,
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
        /// Relative quadrature tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fourier harmonic consistency residuals at fixed-seed sample points.
    Harmonics {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 6)]
        max_weight: u32,
        #[arg(long, default_value_t = 3)]
        points: u32,
        /// Symplectic potential of the evaluation frame.
        #[arg(long, default_value = "0.5*q")]
        g: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bohr-Sommerfeld levels, regularity and limit dimensions.
    Reduce {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A fully resolved invocation: the parsed command plus its canonical string.
#[derive(Debug)]
pub struct Invocation {
    pub command: Command,
    pub canonical: String,
}

fn fmt_format(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn canonical_string(cmd: &Command) -> String {
    match cmd {
        Command::Satake { diagram, format, out } => with_out(
            format!("symquant satake --diagram {diagram} --format {}", fmt_format(*format)),
            out,
        ),
        Command::Spherical { diagram, bound, format, out } => with_out(
            format!(
                "symquant spherical --diagram {diagram} --bound {bound} --format {}",
                fmt_format(*format)
            ),
            out,
        ),
        Command::Cfun { diagram, max_weight, format, out } => with_out(
            format!(
                "symquant cfun --diagram {diagram} --max-weight {max_weight} --format {}",
                fmt_format(*format)
            ),
            out,
        ),
        Command::Norms { diagram, h, t, max_weight, tol, format, out } => with_out(
            format!(
                "symquant norms --diagram {diagram} --h \"{h}\" --t {t} --max-weight {max_weight} --tol {tol} --format {}",
                fmt_format(*format)
            ),
            out,
        ),
        Command::Harmonics { diagram, max_weight, points, g, format, out } => with_out(
            format!(
                "symquant harmonics --diagram {diagram} --max-weight {max_weight} --points {points} --g \"{g}\" --format {}",
                fmt_format(*format)
            ),
            out,
        ),
        Command::Reduce { diagram, max_weight, format, out } => with_out(
            format!(
                "symquant reduce --diagram {diagram} --max-weight {max_weight} --format {}",
                fmt_format(*format)
            ),
            out,
        ),
    }
}

fn with_out(mut s: String, out: &Option<PathBuf>) -> String {
    if let Some(p) = out {
        s.push_str(&format!(" --out {}", p.display()));
    }
    s
}

/// Parse an argv list into an invocation (first element is the binary name).
pub fn parse_invocation(argv: &[String]) -> Result<Invocation> {
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    let canonical = canonical_string(&cli.command);
    Ok(Invocation {
        command: cli.command,
        canonical,
    })
}

/// Execute an invocation, writing the report to stdout or the given path.
pub fn run(inv: &Invocation) -> Result<()> {
    let precision = precision_from_env()?;
    let (content, out) = match &inv.command {
        Command::Satake {
            diagram,
            format,
            out,
        } => {
            let dc = diagram_context(diagram)?;
            (render_satake(&inv.canonical, &dc, *format), out.clone())
        }
        Command::Spherical {
            diagram,
            bound,
            format,
            out,
        } => {
            let dc = diagram_context(diagram)?;
            let weights = dc.rrs.spherical_weights(*bound);
            (
                render_spherical(&inv.canonical, &dc, *bound, &weights, *format),
                out.clone(),
            )
        }
        Command::Cfun {
            diagram,
            max_weight,
            format,
            out,
        } => {
            let dc = diagram_context(diagram)?;
            let rows = cfun_rows(&dc, *max_weight, precision)?;
            (
                render_cfun(&inv.canonical, &dc, &rows, *format),
                out.clone(),
            )
        }
        Command::Norms {
            diagram,
            h,
            t,
            max_weight,
            tol,
            format,
            out,
        } => {
            let dc = diagram_context(diagram)?;
            let h_fn = InvariantConvexFn::parse(h)?;
            let t_grid = parse_t_grid(t)?;
            let lambdas = dc.rrs.spherical_weights(*max_weight);
            let cfg = QuadConfig {
                rel_tol: *tol,
                ..QuadConfig::default()
            };
            let report = asymptotic_report(&dc, &lambdas, &h_fn, &t_grid, &cfg, precision)?;
            (render_norms(&inv.canonical, &report, *format), out.clone())
        }
        Command::Harmonics {
            diagram,
            max_weight,
            points,
            g,
            format,
            out,
        } => {
            let dc = diagram_context(diagram)?;
            let g_fn = InvariantConvexFn::parse(g)?;
            let rows = harmonics_rows(&dc, *max_weight, *points, &g_fn, precision)?;
            (
                render_harmonics(&inv.canonical, &rows, *format),
                out.clone(),
            )
        }
        Command::Reduce {
            diagram,
            max_weight,
            format,
            out,
        } => {
            let dc = diagram_context(diagram)?;
            let lambdas = dc.rrs.spherical_weights(*max_weight);
            let (rows, total) = reduction_dims(&lambdas, &dc.rrs)?;
            (
                render_reduce(&inv.canonical, &rows, total, *format),
                out.clone(),
            )
        }
    };
    match out {
        Some(path) => atomic_write(&path, &content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_t_grid(spec: &str) -> Result<Vec<f64>> {
    let grid: Vec<f64> = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("bad time value `{s}`")))
        })
        .collect::<Result<_>>()?;
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Usage(
            "t grid must be positive and increasing".into(),
        ));
    }
    Ok(grid)
}

// ---------------------------------------------------------------------------
// report assembly
// ---------------------------------------------------------------------------

fn render_satake(invocation: &str, dc: &DiagramContext, format: Format) -> String {
    match format {
        Format::Json => {
            let mut fields = provenance(invocation);
            fields.push(("diagram".into(), Json::str(&dc.diagram.name)));
            fields.push(("r".into(), Json::uint(dc.base().rank as u128)));
            fields.push(("n_b".into(), Json::uint(dc.rrs.n_black as u128)));
            fields.push(("n_a".into(), Json::uint(dc.rrs.n_arrows as u128)));
            fields.push(("l".into(), Json::uint(dc.rrs.rank_l as u128)));
            let roots: Vec<Json> = dc
                .rrs
                .restricted_positive_sr
                .iter()
                .zip(&dc.rrs.multiplicities)
                .map(|(beta, &m)| {
                    Json::Obj(vec![
                        (
                            "beta".into(),
                            Json::Arr(beta.iter().map(|&c| Json::str(rat_str(c))).collect()),
                        ),
                        ("mult".into(), Json::uint(m as u128)),
                    ])
                })
                .collect();
            fields.push(("restricted_roots".into(), Json::Arr(roots)));
            let rho_sr = dc.base().fw_to_sr(&dc.rrs.rho_hat.fw);
            fields.push((
                "rho_hat".into(),
                Json::Arr(rho_sr.iter().map(|&c| Json::str(rat_str(c))).collect()),
            ));
            Json::Obj(fields).to_string_compact()
        }
        Format::Csv => {
            let mut s = csv_header(invocation);
            s.push_str(&format!(
                "# diagram: {}, r: {}, n_b: {}, n_a: {}, l: {}\n",
                dc.diagram.name,
                dc.base().rank,
                dc.rrs.n_black,
                dc.rrs.n_arrows,
                dc.rrs.rank_l
            ));
            let rho_sr = dc.base().fw_to_sr(&dc.rrs.rho_hat.fw);
            s.push_str(&format!(
                "# rho_hat: {}\n",
                rho_sr
                    .iter()
                    .map(|&c| rat_str(c))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            s.push_str("beta,mult\n");
            for (beta, m) in dc
                .rrs
                .restricted_positive_sr
                .iter()
                .zip(&dc.rrs.multiplicities)
            {
                let b = beta
                    .iter()
                    .map(|&c| rat_str(c))
                    .collect::<Vec<_>>()
                    .join(" ");
                s.push_str(&format!("{b},{m}\n"));
            }
            s
        }
    }
}

fn render_spherical(
    invocation: &str,
    dc: &DiagramContext,
    bound: u32,
    weights: &[WeightVec],
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let mut fields = provenance(invocation);
            fields.push(("diagram".into(), Json::str(&dc.diagram.name)));
            fields.push(("bound".into(), Json::uint(bound as u128)));
            fields.push((
                "weights".into(),
                Json::Arr(weights.iter().map(Json::weight).collect()),
            ));
            Json::Obj(fields).to_string_compact()
        }
        Format::Csv => {
            let mut s = csv_header(invocation);
            s.push_str(&format!("# diagram: {}, bound: {bound}\n", dc.diagram.name));
            s.push_str("lambda\n");
            for w in weights {
                s.push_str(&format!("{}\n", weight_str(w)));
            }
            s
        }
    }
}

struct CfunRow {
    lambda: WeightVec,
    d_lambda: u128,
    c_value: f64,
    phat_value: f64,
}

fn cfun_rows(dc: &DiagramContext, max_weight: u32, precision: Precision) -> Result<Vec<CfunRow>> {
    let mut rows = Vec::new();
    for lam in dc.rrs.spherical_weights(max_weight) {
        let rep = build_irrep(dc.base(), &lam)?;
        let sv = spherical_vector_for_diagram(&dc.diagram, &rep, precision)?;
        rows.push(CfunRow {
            d_lambda: rep.dim as u128,
            c_value: sv.c_function()?,
            phat_value: crate::quantize::phat_shifted(&lam, &dc.rrs),
            lambda: lam,
        });
    }
    Ok(rows)
}

fn render_cfun(invocation: &str, dc: &DiagramContext, rows: &[CfunRow], format: Format) -> String {
    match format {
        Format::Json => {
            let mut fields = provenance(invocation);
            fields.push(("diagram".into(), Json::str(&dc.diagram.name)));
            let rows_json: Vec<Json> = rows
                .iter()
                .map(|r| {
                    Json::Obj(vec![
                        ("lambda".into(), Json::weight(&r.lambda)),
                        ("d_lambda".into(), Json::uint(r.d_lambda)),
                        ("c_value".into(), Json::float(r.c_value)),
                        ("phat_value".into(), Json::float(r.phat_value)),
                    ])
                })
                .collect();
            fields.push(("rows".into(), Json::Arr(rows_json)));
            Json::Obj(fields).to_string_compact()
        }
        Format::Csv => {
            let mut s = csv_header(invocation);
            s.push_str("lambda_coords,d_lambda,c_value,phat_value\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    weight_str(&r.lambda),
                    r.d_lambda,
                    fmt_f64(r.c_value),
                    fmt_f64(r.phat_value)
                ));
            }
            s
        }
    }
}

fn render_norms(invocation: &str, report: &NormReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut fields = provenance(invocation);
            fields.push(("diagram".into(), Json::str(&report.diagram)));
            fields.push(("h_spec".into(), Json::str(&report.h_spec)));
            fields.push((
                "lambdas".into(),
                Json::Arr(report.lambdas.iter().map(Json::weight).collect()),
            ));
            fields.push(("t_grid".into(), Json::floats(&report.t_grid)));
            fields.push((
                "raw".into(),
                Json::Arr(report.raw.iter().map(|row| Json::floats(row)).collect()),
            ));
            fields.push((
                "ratios".into(),
                Json::Arr(report.ratios.iter().map(|row| Json::floats(row)).collect()),
            ));
            fields.push(("targets".into(), Json::floats(&report.targets)));
            fields.push((
                "flags".into(),
                Json::Obj(vec![
                    (
                        "lambda_independent_limit".into(),
                        Json::Bool(report.flags.lambda_independent_limit),
                    ),
                    (
                        "quadratic_exact".into(),
                        Json::Bool(report.flags.quadratic_exact),
                    ),
                    (
                        "nonunitary_witness".into(),
                        Json::Bool(report.flags.nonunitary_witness),
                    ),
                    (
                        "max_limit_ratio_deviation".into(),
                        Json::float(report.flags.max_limit_ratio_deviation),
                    ),
                    (
                        "max_quadratic_deviation".into(),
                        Json::float(report.flags.max_quadratic_deviation),
                    ),
                    (
                        "gq_factor_spread".into(),
                        Json::float(report.flags.gq_factor_spread),
                    ),
                ]),
            ));
            Json::Obj(fields).to_string_compact()
        }
        Format::Csv => {
            let mut s = csv_header(invocation);
            s.push_str(&format!(
                "# diagram: {}, h: {}\n",
                report.diagram, report.h_spec
            ));
            s.push_str(&format!(
                "# flags: lambda_independent_limit={}, quadratic_exact={}, nonunitary_witness={}\n",
                report.flags.lambda_independent_limit,
                report.flags.quadratic_exact,
                report.flags.nonunitary_witness
            ));
            s.push_str("lambda,t,raw,ratio,target\n");
            for (i, lam) in report.lambdas.iter().enumerate() {
                for (j, &t) in report.t_grid.iter().enumerate() {
                    s.push_str(&format!(
                        "{},{},{},{},{}\n",
                        weight_str(lam),
                        fmt_f64(t),
                        fmt_f64(report.raw[i][j]),
                        fmt_f64(report.ratios[i][j]),
                        fmt_f64(report.targets[i])
                    ));
                }
            }
            s
        }
    }
}

struct HarmonicRow {
    lambda: WeightVec,
    point: u32,
    max_residual: f64,
}

/// Deterministic regular sample point and group word from a fixed seed.
fn sample_point(
    dc: &DiagramContext,
    rng: &mut SplitMix64,
) -> (Vec<f64>, GroupWord, Vec<Complex64>) {
    let l = dc.geom.l;
    let mut u = vec![0.0; l];
    for v in u.iter_mut() {
        *v = 0.3 + rng.next_f64();
    }
    let xi = dc.geom.cone_point(&u);
    let rank = dc.base().rank;
    let mut letter = AlgebraElement {
        ih: vec![0.0; rank],
        re_ef: vec![0.0; rank],
        im_ef: vec![0.0; rank],
    };
    for j in 0..rank {
        letter.ih[j] = rng.next_f64() - 0.5;
        letter.re_ef[j] = rng.next_f64() - 0.5;
        letter.im_ef[j] = rng.next_f64() - 0.5;
    }
    (
        xi,
        GroupWord {
            letters: vec![letter],
        },
        Vec::new(),
    )
}

fn harmonics_rows(
    dc: &DiagramContext,
    max_weight: u32,
    points: u32,
    g: &InvariantConvexFn,
    precision: Precision,
) -> Result<Vec<HarmonicRow>> {
    let mut rows = Vec::new();
    for lam in dc.rrs.spherical_weights(max_weight) {
        let setup = section_setup(dc, &lam, precision)?;
        let d = setup.rep.dim;
        for point in 0..points {
            let mut rng = SplitMix64::new(42 + point as u64);
            let (xi, word, _) = sample_point(dc, &mut rng);
            let v_star: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                .collect();
            let mut worst = 0.0f64;
            let mut seen = std::collections::BTreeSet::new();
            for nu in setup.rep.basis_weights.clone() {
                if !seen.insert(nu.clone()) {
                    continue;
                }
                let direct = fourier_harmonic(&setup, g, &word, &xi, &v_star, &nu);
                let avg = fourier_harmonic_torus_average(&setup, dc, g, &word, &xi, &v_star, &nu)?;
                worst = worst.max((direct - avg).norm());
            }
            rows.push(HarmonicRow {
                lambda: lam.clone(),
                point,
                max_residual: worst,
            });
        }
    }
    Ok(rows)
}

fn render_harmonics(invocation: &str, rows: &[HarmonicRow], format: Format) -> String {
    match format {
        Format::Json => {
            let mut fields = provenance(invocation);
            let rows_json: Vec<Json> = rows
                .iter()
                .map(|r| {
                    Json::Obj(vec![
                        ("lambda".into(), Json::weight(&r.lambda)),
                        ("point".into(), Json::uint(r.point as u128)),
                        ("max_residual".into(), Json::float(r.max_residual)),
                    ])
                })
                .collect();
            fields.push(("rows".into(), Json::Arr(rows_json)));
            Json::Obj(fields).to_string_compact()
        }
        Format::Csv => {
            let mut s = csv_header(invocation);
            s.push_str("lambda,point,max_residual\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{}\n",
                    weight_str(&r.lambda),
                    r.point,
                    fmt_f64(r.max_residual)
                ));
            }
            s
        }
    }
}

fn render_reduce(
    invocation: &str,
    rows: &[crate::quantize::ReductionRow],
    total: u128,
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let mut fields = provenance(invocation);
            let rows_json: Vec<Json> = rows
                .iter()
                .map(|r| {
                    Json::Obj(vec![
                        ("lambda".into(), Json::weight(&r.lambda)),
                        ("level".into(), Json::weight(&r.level)),
                        ("regular".into(), Json::Bool(r.regular)),
                        ("dim".into(), Json::uint(r.dim)),
                    ])
                })
                .collect();
            fields.push(("rows".into(), Json::Arr(rows_json)));
            fields.push(("total_dim".into(), Json::uint(total)));
            Json::Obj(fields).to_string_compact()
        }
        Format::Csv => {
            let mut s = csv_header(invocation);
            s.push_str(&format!("# total_dim: {total}\n"));
            s.push_str("lambda,level,regular,dim\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    weight_str(&r.lambda),
                    weight_str(&r.level),
                    r.regular,
                    r.dim
                ));
            }
            s
        }
    }
}

/// Entry point used by the binary: parse, run, map errors to exit codes with
/// machine-readable JSON on stderr.
pub fn main_entry() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let inv = match parse_invocation(&argv) {
        Ok(inv) => inv,
        Err(e) => {
            // help/version requests are not failures
            if let Error::Usage(msg) = &e {
                if msg.contains("Usage:") && argv.iter().any(|a| a == "--help" || a == "-h") {
                    println!("{msg}");
                    return 0;
                }
                if argv.iter().any(|a| a == "--version" || a == "-V") {
                    println!("symquant {}", env!("CARGO_PKG_VERSION"));
                    return 0;
                }
            }
            eprintln!("{}", error_json(&e));
            return e.exit_code();
        }
    };
    match run(&inv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            e.exit_code()
        }
    }
}

fn error_json(e: &Error) -> String {
    Json::Obj(vec![(
        "error".into(),
        Json::Obj(vec![
            ("kind".into(), Json::str(e.kind())),
            ("message".into(), Json::str(e.to_string())),
        ]),
    )])
    .to_string_compact()
    .trim_end()
    .to_string()
}
