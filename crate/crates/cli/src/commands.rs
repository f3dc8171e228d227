//! Implementations of the four subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use bilap_core::asympt::{
    self, default_fit_grid, evaluate_expansion, expand_negative, expand_positive,
    fit_coefficients_oracle, printed_reference_coefficients, AsymptoticExpansion, Regime,
};
use bilap_core::eigen::{eigen_derivatives, solve_eigenvalue};
use bilap_core::field::Rational;
use bilap_core::lattice;
use bilap_core::series::TruncatedSeries;
use bilap_core::spectral::{resolvent_closed, SpectralPoint};
use bilap_core::{AlgebraicNumber, Error as CoreError};

use crate::output::{parse_format, write_tables, Cell, Format, Table};
use crate::{AsympArgs, GridArgs, OracleArgs, OutArgs, SeriesArgs, SweepArgs};

pub enum CliError {
    Usage(String),
    Internal(String),
}

type CmdResult = Result<u8, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn open_output(out: &OutArgs) -> Result<(Format, Box<dyn Write>), CliError> {
    let format = parse_format(&out.format)
        .ok_or_else(|| CliError::Usage(format!("unknown format {:?}", out.format)))?;
    let writer: Box<dyn Write> = match &out.output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            CliError::Usage(format!("cannot open output {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    Ok((format, writer))
}

fn emit(out: &OutArgs, tables: &[Table]) -> Result<(), CliError> {
    let (format, mut writer) = open_output(out)?;
    write_tables(&mut writer, format, tables)
        .and_then(|()| writer.flush())
        .map_err(|e| CliError::Internal(format!("write failed: {e}")))
}

/// Resolves --mu / --mu-range into a coupling list; μ = 0 is rejected.
fn resolve_grid(grid: &GridArgs) -> Result<Option<Vec<f64>>, CliError> {
    if !grid.mu.is_empty() && grid.mu_range.is_some() {
        return usage("give either --mu or --mu-range, not both");
    }
    if let Some(spec) = &grid.mu_range {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 4 {
            return usage(format!(
                "--mu-range wants start:stop:count:side, got {spec:?}"
            ));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range start {:?}", parts[0])))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range stop {:?}", parts[1])))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad range count {:?}", parts[2])))?;
        let sign = match parts[3] {
            "positive" | "+" => 1.0,
            "negative" | "-" => -1.0,
            other => return usage(format!("range side must be positive|negative, got {other:?}")),
        };
        if !(start > 0.0 && stop > 0.0 && start.is_finite() && stop.is_finite()) {
            return usage("range start/stop are positive magnitudes");
        }
        if count == 0 {
            return usage("empty range: count must be at least 1");
        }
        let values = (0..count)
            .map(|k| {
                let f = if count == 1 {
                    0.0
                } else {
                    k as f64 / (count - 1) as f64
                };
                sign * start * (stop / start).powf(f)
            })
            .collect();
        return Ok(Some(values));
    }
    if grid.mu.is_empty() {
        return Ok(None);
    }
    for &mu in &grid.mu {
        if mu == 0.0 || !mu.is_finite() {
            return usage(format!("μ = {mu} has no eigenvalue"));
        }
    }
    Ok(Some(grid.mu.clone()))
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepRow {
    mu: f64,
    e: Cell,
    residual: Cell,
    e_prime: Cell,
    e_double_prime: Cell,
    asymp: Cell,
    lattice: Cell,
    status: &'static str,
}

pub fn sweep(args: SweepArgs) -> CmdResult {
    let mus = resolve_grid(&args.grid)?
        .ok_or_else(|| CliError::Usage("no couplings: give --mu or --mu-range".into()))?;
    if !(args.tol > 0.0) {
        return usage("--tol must be positive");
    }
    if args.order == Some(0) {
        return usage("--order must be at least 1");
    }
    if args.n_half == Some(0) {
        return usage("--N must be at least 1");
    }

    let expansion_for = |side: Regime| -> Option<AsymptoticExpansion> {
        let order = args.order?;
        let wanted = mus.iter().any(|&mu| side.accepts(mu));
        wanted.then(|| match side {
            Regime::NegativeNearZero => expand_negative(order),
            Regime::PositiveNearZero => expand_positive(order),
        })
    };
    let exp_neg = expansion_for(Regime::NegativeNearZero);
    let exp_pos = expansion_for(Regime::PositiveNearZero);

    let total = mus.len();
    if total >= 64 {
        eprintln!("sweep: {total} couplings");
    }
    let done = AtomicUsize::new(0);

    let rows: Vec<SweepRow> = mus
        .par_iter()
        .map(|&mu| {
            let mut status = "ok";
            let (e, residual) = match solve_eigenvalue(mu, args.tol) {
                Ok(r) => (Cell::Float(r.e), Cell::Float(r.residual)),
                Err(CoreError::Accuracy {
                    best,
                    error_estimate,
                    ..
                }) => {
                    status = "degraded";
                    (Cell::Float(best), Cell::Float(error_estimate))
                }
                Err(_) => {
                    status = "degraded";
                    (Cell::Empty, Cell::Empty)
                }
            };
            let (e_prime, e_double_prime) = match eigen_derivatives(mu) {
                Ok(d) => (Cell::Float(d.e_prime), Cell::Float(d.e_double_prime)),
                Err(_) => {
                    status = "degraded";
                    (Cell::Empty, Cell::Empty)
                }
            };
            let expansion = if mu < 0.0 { &exp_neg } else { &exp_pos };
            let asymp = match expansion {
                Some(exp) => match evaluate_expansion(exp, mu) {
                    Ok(v) => Cell::Float(v),
                    Err(_) => {
                        status = "degraded";
                        Cell::Empty
                    }
                },
                None => Cell::Empty,
            };
            let lattice_cell = match args.n_half {
                Some(n) => match lattice::secular_eigenvalue(n, mu, args.tol) {
                    Ok(v) => Cell::Float(v),
                    Err(CoreError::Resolution(_)) => {
                        status = "resolution";
                        Cell::Empty
                    }
                    Err(CoreError::Accuracy { best, .. }) => {
                        status = "degraded";
                        Cell::Float(best)
                    }
                    Err(_) => {
                        status = "degraded";
                        Cell::Empty
                    }
                },
                None => Cell::Empty,
            };
            let k = done.fetch_add(1, Ordering::Relaxed) + 1;
            if total >= 64 && k % 32 == 0 {
                eprintln!("sweep: {k}/{total}");
            }
            SweepRow {
                mu,
                e,
                residual,
                e_prime,
                e_double_prime,
                asymp,
                lattice: lattice_cell,
                status,
            }
        })
        .collect();

    let mut table = Table {
        name: "sweep",
        columns: &[
            "mu",
            "e",
            "residual",
            "e_prime",
            "e_double_prime",
            "asymp_estimate",
            "lattice_estimate",
            "status",
        ],
        rows: Vec::new(),
    };
    let mut worst = 0u8;
    for row in rows {
        worst = worst.max(match row.status {
            "ok" => 0,
            _ => 2,
        });
        table.push(vec![
            Cell::Float(row.mu),
            row.e,
            row.residual,
            row.e_prime,
            row.e_double_prime,
            row.asymp,
            row.lattice,
            Cell::Text(row.status.into()),
        ]);
    }
    emit(&args.out, &[table])?;
    Ok(worst)
}

// ---------------------------------------------------------------------------
// asymp
// ---------------------------------------------------------------------------

pub fn asymp(args: AsympArgs) -> CmdResult {
    let regime = match args.regime.as_str() {
        "negative" => Regime::NegativeNearZero,
        "positive" => Regime::PositiveNearZero,
        other => return usage(format!("--regime must be negative|positive, got {other:?}")),
    };
    if args.order == 0 {
        return usage("--order must be at least 1");
    }
    if !(args.tol > 0.0) {
        return usage("--tol must be positive");
    }
    let grid = match resolve_grid(&args.grid)? {
        Some(g) => {
            for &mu in &g {
                if !regime.accepts(mu) {
                    return usage(format!(
                        "μ = {mu} is on the wrong side of 0 for the {} regime",
                        regime.label()
                    ));
                }
            }
            g
        }
        None => default_fit_grid(regime),
    };

    let expansion = match regime {
        Regime::NegativeNearZero => expand_negative(args.order),
        Regime::PositiveNearZero => expand_positive(args.order),
    };
    let mut code = 0u8;
    let fit = match fit_coefficients_oracle(regime, expansion.derived_coeffs.len(), &grid) {
        Ok(fit) => Some(fit),
        Err(err) => {
            eprintln!("asymp: coefficient fit degraded: {err}");
            code = 2;
            None
        }
    };

    let printed = printed_reference_coefficients(regime);
    let n_offset = match regime {
        Regime::NegativeNearZero => 1,
        Regime::PositiveNearZero => 0,
    };
    let mut coeffs = Table {
        name: "coefficient",
        columns: &[
            "regime",
            "n",
            "paper_value",
            "engine_value_exact",
            "engine_value_float",
            "fit_value",
            "fit_uncertainty",
            "flag",
        ],
        rows: Vec::new(),
    };
    for (i, engine) in expansion.derived_coeffs.iter().enumerate() {
        let n = i + n_offset;
        let reference = printed.iter().find(|(pn, _)| *pn == n).map(|(_, v)| v);
        let flag = match reference {
            Some(p) if p != engine => "differs",
            _ => "",
        };
        coeffs.push(vec![
            Cell::Text(regime.label().into()),
            Cell::Int(n as i64),
            reference.map_or(Cell::Empty, |p| Cell::Text(p.to_string())),
            Cell::Text(engine.to_string()),
            Cell::Float(engine.to_f64()),
            fit.as_ref()
                .and_then(|f| f.fitted.get(i).copied())
                .map_or(Cell::Empty, Cell::Float),
            fit.as_ref()
                .and_then(|f| f.uncertainties.get(i).copied())
                .map_or(Cell::Empty, Cell::Float),
            Cell::Text(flag.into()),
        ]);
    }

    let mut comparison = Table {
        name: "comparison",
        columns: &["mu", "e_solver", "e_expansion", "abs_diff", "rel_diff"],
        rows: Vec::new(),
    };
    for &mu in &grid {
        let solved = solve_eigenvalue(mu, args.tol)
            .map_err(|e| CliError::Internal(format!("solver failed at μ = {mu}: {e}")))?;
        let estimate = evaluate_expansion(&expansion, mu)
            .map_err(|e| CliError::Internal(format!("expansion failed at μ = {mu}: {e}")))?;
        let diff = (estimate - solved.e).abs();
        comparison.push(vec![
            Cell::Float(mu),
            Cell::Float(solved.e),
            Cell::Float(estimate),
            Cell::Float(diff),
            Cell::Float(diff / solved.e.abs()),
        ]);
    }

    emit(&args.out, &[coeffs, comparison])?;
    Ok(code)
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

pub fn oracle(args: OracleArgs) -> CmdResult {
    if args.mu == 0.0 || !args.mu.is_finite() {
        return usage("μ = 0 has no eigenvalue");
    }
    if !(args.tol > 0.0) {
        return usage("--tol must be positive");
    }
    for &n in &args.n_list {
        if n == 0 {
            return usage("--N entries must be at least 1");
        }
    }
    // validate energies up front: Green's-function comparisons live off the band
    for &z in &args.z {
        SpectralPoint::from_energy(z)
            .map_err(|e| CliError::Usage(format!("bad z value: {e}")))?;
    }

    let e_cont = solve_eigenvalue(args.mu, args.tol)
        .map_err(|e| CliError::Internal(format!("continuum solve failed: {e}")))?
        .e;

    let mut code = 0u8;
    let mut eigen_table = Table {
        name: "eigenvalue",
        columns: &["N", "e_N", "abs_err_e", "status"],
        rows: Vec::new(),
    };
    for &n in &args.n_list {
        match lattice::secular_eigenvalue(n, args.mu, args.tol) {
            Ok(e_n) => eigen_table.push(vec![
                Cell::Int(n as i64),
                Cell::Float(e_n),
                Cell::Float((e_n - e_cont).abs()),
                Cell::Text("ok".into()),
            ]),
            Err(CoreError::Resolution(_)) => {
                code = 2;
                eigen_table.push(vec![
                    Cell::Int(n as i64),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Text("resolution".into()),
                ]);
            }
            Err(e) => return Err(CliError::Internal(format!("lattice solve failed: {e}"))),
        }
    }

    let mut green_table = Table {
        name: "green",
        columns: &["N", "z", "g00", "g00_continuum", "abs_diff", "status"],
        rows: Vec::new(),
    };
    for &n in &args.n_list {
        for &z in &args.z {
            let continuum = resolvent_closed(&SpectralPoint::from_energy(z).unwrap()).value
                / (2.0 * std::f64::consts::PI);
            match lattice::truncated_green(n, z) {
                Ok(g) => green_table.push(vec![
                    Cell::Int(n as i64),
                    Cell::Float(z),
                    Cell::Float(g),
                    Cell::Float(continuum),
                    Cell::Float((g - continuum).abs()),
                    Cell::Text("ok".into()),
                ]),
                Err(CoreError::Domain(_)) => {
                    code = 2;
                    green_table.push(vec![
                        Cell::Int(n as i64),
                        Cell::Float(z),
                        Cell::Empty,
                        Cell::Float(continuum),
                        Cell::Empty,
                        Cell::Text("domain".into()),
                    ]);
                }
                Err(e) => return Err(CliError::Internal(format!("green solve failed: {e}"))),
            }
        }
    }

    emit(&args.out, &[eigen_table, green_table])?;
    Ok(code)
}

// ---------------------------------------------------------------------------
// series
// ---------------------------------------------------------------------------

pub fn series(args: SeriesArgs) -> CmdResult {
    if args.digits == 0 {
        return usage("--digits must be at least 1");
    }
    let tokens: Vec<String> = args
        .expression
        .iter()
        .flat_map(|chunk| chunk.split_whitespace().map(str::to_owned))
        .collect();
    let (series, reference): (TruncatedSeries<AlgebraicNumber>, Vec<(usize, Rational)>) =
        match tokens.first().map(String::as_str) {
            Some("binomial") => {
                if tokens.len() != 3 {
                    return usage("binomial wants: binomial <p/q> <order>");
                }
                let exponent: Rational = tokens[1]
                    .parse()
                    .map_err(|e| CliError::Usage(format!("bad exponent {:?}: {e}", tokens[1])))?;
                let order: usize = tokens[2]
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad order {:?}", tokens[2])))?;
                (TruncatedSeries::binomial(&exponent, order), Vec::new())
            }
            Some("secular-negative") => {
                let order = parse_order(&tokens)?;
                (
                    asympt::secular_series_negative(order),
                    // printed intermediate: 1 − α/16 + 13α²/512 + …
                    vec![
                        (0, rational(1, 1)),
                        (1, rational(-1, 16)),
                        (2, rational(13, 512)),
                    ],
                )
            }
            Some("secular-positive") => {
                let order = parse_order(&tokens)?;
                (
                    asympt::secular_series_positive(order),
                    // printed intermediate: 1 + α²/4 − α⁴/32 + …
                    vec![
                        (0, rational(1, 1)),
                        (2, rational(1, 4)),
                        (4, rational(-1, 32)),
                    ],
                )
            }
            _ => {
                return usage(
                    "unknown expression: catalog is \"binomial p/q K\", \
                     \"secular-negative K\", \"secular-positive K\"",
                )
            }
        };

    let mut table = Table {
        name: "series",
        columns: &["n", "coefficient_exact", "coefficient_decimal", "reference"],
        rows: Vec::new(),
    };
    for (n, c) in series.coeffs().iter().enumerate() {
        let reference_cell = reference
            .iter()
            .find(|(rn, _)| *rn == n)
            .map_or(Cell::Empty, |(_, v)| Cell::Text(v.to_string()));
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Text(c.to_string()),
            Cell::Text(c.to_decimal(args.digits)),
            reference_cell,
        ]);
    }
    emit(&args.out, &[table])?;
    Ok(0)
}

fn parse_order(tokens: &[String]) -> Result<usize, CliError> {
    if tokens.len() != 2 {
        return usage(format!("{} wants exactly one order argument", tokens[0]));
    }
    tokens[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad order {:?}", tokens[1])))
}

fn rational(num: i64, den: i64) -> Rational {
    bilap_core::field::rat(num, den)
}
