use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use shcm_core::{
    control_problem, convergence_order, error_norms, run, run_table, solve_and_measure,
    ErrorReport, ErrorSampling, ProblemSpec, RuleKind, RunConfig, TableId, TableSpec,
};
use thiserror::Error;

use crate::args::{
    ConvergenceArgs, OutputArgs, ProblemArgs, RuleArg, SolveArgs, SweepAxis, TableArgs,
};
use crate::output::{Cell, Sheet};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] shcm_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io { .. } => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn require(ok: bool, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(message()))
    }
}

fn check_time_flags(dt: f64, t_final: f64) -> Result<()> {
    require(dt > 0.0 && dt.is_finite(), || {
        format!("--dt must be positive and finite, got {dt}")
    })?;
    require(t_final >= 0.0 && t_final.is_finite(), || {
        format!("--t-final must be non-negative and finite, got {t_final}")
    })
}

fn single_rule(rule: RuleArg) -> Result<RuleKind> {
    match rule {
        RuleArg::Legendre => Ok(RuleKind::LegendreRoots),
        RuleArg::Chebyshev => Ok(RuleKind::ChebyshevRoots),
        RuleArg::Both => Err(CliError::Usage(
            "--rule both is only accepted by `table`".into(),
        )),
    }
}

fn problem(args: &ProblemArgs) -> Result<ProblemSpec> {
    require(args.alpha > 0.0 && args.alpha.is_finite(), || {
        format!("--alpha must be positive and finite, got {}", args.alpha)
    })?;
    Ok(ProblemSpec::sine_mode(args.mode, args.alpha)?)
}

fn elements(n: u64) -> Result<usize> {
    usize::try_from(n).map_err(|_| CliError::Usage(format!("--n {n} is too large")))
}

fn emit(out: &OutputArgs, sheet: &Sheet) -> Result<()> {
    let text = sheet.render(out.format);
    let io_err = |source| CliError::Io {
        path: out.output.clone(),
        source,
    };
    if out.output == Path::new("-") {
        let mut stdout = io::stdout().lock();
        stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(io_err)
    } else {
        fs::write(&out.output, text).map_err(io_err)
    }
}

pub fn solve(args: &SolveArgs) -> Result<()> {
    check_time_flags(args.dt, args.t_final)?;
    let kind = single_rule(args.problem.rule)?;
    let spec = problem(&args.problem)?;
    let cfg = RunConfig::new(elements(args.n)?, args.dt, args.t_final, kind.rule());

    let start = Instant::now();
    let out = run(&spec, &cfg)?;
    let wall_time = start.elapsed().as_secs_f64();
    let t = out.coefficients.time_index as f64 * cfg.dt;
    let norms = error_norms(
        &spec,
        &out.mesh,
        &out.coefficients,
        t,
        &ErrorSampling::CollocationPoints(cfg.rule),
    )?;

    let mut sheet = Sheet::new(vec!["x", "numeric", "exact", "abs_error"]);
    for (j, &x) in out.mesh.nodes().iter().enumerate() {
        let numeric = out.coefficients.full[6 * j];
        let exact = spec
            .exact(x, t)
            .ok_or(shcm_core::Error::MissingExactSolution)?;
        sheet.push(vec![
            Cell::Plain(x),
            Cell::Sci(numeric),
            Cell::Sci(exact),
            Cell::Sci((numeric - exact).abs()),
        ]);
    }
    sheet.note(format!(
        "rule={},n={},dt={},t_final={},alpha={},l2={:e},linf={:e}",
        kind.name(),
        cfg.elements,
        cfg.dt,
        cfg.t_final,
        spec.alpha(),
        norms.l2,
        norms.linf
    ));
    emit(&args.output, &sheet)?;
    eprintln!("solved in {wall_time:.3} s");
    Ok(())
}

pub fn table(args: &TableArgs) -> Result<()> {
    let id = match TableId::from_number(args.id) {
        Some(id @ (TableId::One | TableId::Two | TableId::Four | TableId::Five)) => id,
        _ => {
            return Err(CliError::Usage(format!(
                "--id must be one of 1, 2, 4, 5, got {}",
                args.id
            )))
        }
    };
    let spec = TableSpec::new(id);
    let entries = run_table(&control_problem(), &spec, &args.rule.kinds());

    let mut sheet = Sheet::new(vec![
        "table",
        "rule",
        "N",
        "dt",
        "t_final",
        "l2",
        "linf",
        "ref_value",
        "ref_norm",
        "rel_dev",
    ]);
    for entry in entries {
        let report = entry.outcome?;
        let head = vec![
            Cell::Text(id.number().to_string()),
            Cell::Text(entry.rule.name().to_string()),
            Cell::Text(entry.elements.to_string()),
            Cell::Plain(entry.dt),
            Cell::Plain(entry.t_final),
            Cell::Sci(report.l2),
            Cell::Sci(report.linf),
        ];
        if entry.comparisons.is_empty() {
            let mut row = head.clone();
            row.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
            sheet.push(row);
        }
        for c in &entry.comparisons {
            let mut row = head.clone();
            row.extend([
                Cell::Sci(c.reference.value),
                Cell::Text(c.reference.norm.name().to_string()),
                Cell::Sci(c.relative_deviation),
            ]);
            sheet.push(row);
        }
    }
    emit(&args.output, &sheet)
}

pub fn convergence(args: &ConvergenceArgs) -> Result<()> {
    check_time_flags(args.dt, args.t_final)?;
    let kind = single_rule(args.problem.rule)?;
    let spec = problem(&args.problem)?;
    let base = elements(args.n)?;
    let count = u32::try_from(args.count)
        .ok()
        .filter(|&c| c <= 30)
        .ok_or_else(|| {
            CliError::Usage(format!("--count must be at most 30, got {}", args.count))
        })?;

    let configs: Vec<(f64, RunConfig)> = (0..count)
        .map(|i| {
            let scale = 2f64.powi(i as i32);
            match args.sweep {
                SweepAxis::Dt => {
                    let dt = args.dt / scale;
                    Ok((dt, RunConfig::new(base, dt, args.t_final, kind.rule())))
                }
                SweepAxis::N => {
                    let n = base.checked_mul(1 << i).ok_or_else(|| {
                        CliError::Usage(format!("--count {count} overflows the element count"))
                    })?;
                    Ok((
                        spec.length() / n as f64,
                        RunConfig::new(n, args.dt, args.t_final, kind.rule()),
                    ))
                }
            }
        })
        .collect::<Result<_>>()?;

    let reports: Vec<ErrorReport> = configs
        .par_iter()
        .map(|(_, cfg)| solve_and_measure(&spec, cfg))
        .collect::<shcm_core::Result<_>>()?;

    let mut sheet = Sheet::new(vec!["param", "l2", "linf", "order_l2"]);
    for (i, ((param, _), report)) in configs.iter().zip(&reports).enumerate() {
        let order = match i {
            0 => Cell::Empty,
            _ => convergence_order(&[(configs[i - 1].0, reports[i - 1].l2), (*param, report.l2)])
                .map(|o| Cell::Plain(o[0]))
                .unwrap_or(Cell::Empty),
        };
        sheet.push(vec![
            Cell::Plain(*param),
            Cell::Sci(report.l2),
            Cell::Sci(report.linf),
            order,
        ]);
    }
    emit(&args.output, &sheet)
}
