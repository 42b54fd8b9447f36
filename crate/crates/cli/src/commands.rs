//! Subcommand runners. Each produces a `Report` table ready for CSV/JSON
//! serialization; all numerical work lives in the library crate.

use gribov_lab::bounds;
use gribov_lab::sturm::{gelfand_levitan_residual, Potential};
use gribov_lab::trace::{contour_nodes, ContourSpec};
use gribov_lab::{
    eigenvalues, perturbation_determinant, regularized_residual, GribovParams, TruncationSpec,
};
use num_complex::Complex64;

use crate::config::ResolvedConfig;
use crate::output::{Cell, Report};

/// Eigenvalue residual tolerance used by every spectral command.
const SOLVER_TOL: f64 = 1e-9;

type CmdResult = Result<Report, gribov_lab::Error>;

fn gribov_params(config: &ResolvedConfig) -> Result<GribovParams, gribov_lab::Error> {
    GribovParams::new(config.lambda2, config.mu, config.lambda)
}

pub fn run_spectrum(config: &ResolvedConfig) -> CmdResult {
    let params = gribov_params(config)?;
    let dim = config.dim.ok_or_else(|| {
        gribov_lab::Error::DomainError("spectrum needs --dim (or config key 'dim')".into())
    })?;
    let spectrum = eigenvalues(
        &gribov_lab::build_full_operator(&params, &TruncationSpec::standard(dim)?)?,
        SOLVER_TOL,
    )?;
    let mut report = Report::new(&["k", "sigma_re", "sigma_im", "residual"]);
    for (k, (sigma, res)) in spectrum
        .values
        .iter()
        .zip(spectrum.residuals.iter())
        .enumerate()
    {
        report.push_row(vec![
            Cell::Int(k as i64 + 1),
            Cell::Float(sigma.re),
            Cell::Float(sigma.im),
            Cell::Float(*res),
        ]);
    }
    report.diagnostic("dim", dim);
    report.diagnostic("solver_tol", SOLVER_TOL);
    Ok(report)
}

pub fn run_trace(config: &ResolvedConfig) -> CmdResult {
    let params = gribov_params(config)?;
    let m_values = config
        .m_values
        .clone()
        .ok_or_else(|| gribov_lab::Error::DomainError("trace needs --m".into()))?;
    let mut columns: Vec<String> =
        vec!["m".into(), "partial_sum_re".into(), "partial_sum_im".into()];
    for j in 1..=config.j_max {
        columns.push(format!("corr_{j}_re"));
        columns.push(format!("corr_{j}_im"));
    }
    columns.extend([
        "residual_re".to_string(),
        "residual_im".to_string(),
        "quad_err".to_string(),
        "n".to_string(),
    ]);
    let names: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut report = Report::new(&names);
    for &m in &m_values {
        let trunc = TruncationSpec::standard(config.dim_for(m))?;
        let spec = ContourSpec::midpoint(&params, m, config.nodes)?;
        let tr = regularized_residual(&params, m, config.j_max, &trunc, &spec, SOLVER_TOL)?;
        let mut row = vec![
            Cell::Int(m as i64),
            Cell::Float(tr.partial_sum.re),
            Cell::Float(tr.partial_sum.im),
        ];
        for ct in &tr.corrections {
            row.push(Cell::Float(ct.value.re));
            row.push(Cell::Float(ct.value.im));
        }
        row.extend([
            Cell::Float(tr.residual.re),
            Cell::Float(tr.residual.im),
            Cell::Float(tr.max_quad_error()),
            Cell::Int(tr.truncation_dim as i64),
        ]);
        report.push_row(row);
    }
    report.diagnostic("solver_tol", SOLVER_TOL);
    Ok(report)
}

pub fn run_corrections(config: &ResolvedConfig) -> CmdResult {
    let params = gribov_params(config)?;
    let m_values = config
        .m_values
        .clone()
        .ok_or_else(|| gribov_lab::Error::DomainError("corrections needs --m".into()))?;
    let mut report = Report::new(&["m", "j", "value_re", "value_im", "quad_error"]);
    for &m in &m_values {
        let trunc = TruncationSpec::standard(config.dim_for(m))?;
        let spec = ContourSpec::midpoint(&params, m, config.nodes)?;
        let terms =
            gribov_lab::trace::correction_integrals(&params, m, config.j_max, &spec, &trunc)?;
        for ct in terms {
            report.push_row(vec![
                Cell::Int(m as i64),
                Cell::Int(ct.order_j as i64),
                Cell::Float(ct.value.re),
                Cell::Float(ct.value.im),
                Cell::Float(ct.quad_error_estimate),
            ]);
        }
    }
    Ok(report)
}

pub fn run_determinant(config: &ResolvedConfig) -> CmdResult {
    let params = gribov_params(config)?;
    let mut report = Report::new(&[
        "theta", "sigma_re", "sigma_im", "det_re", "det_im", "det_abs",
    ]);
    if let Some(re) = config.sigma_re {
        let sigma = Complex64::new(re, config.sigma_im.unwrap_or(0.0));
        let dim = config.dim.unwrap_or(100);
        let trunc = TruncationSpec::standard(dim)?;
        let d = perturbation_determinant(&params, sigma, &trunc)?;
        report.push_row(vec![
            Cell::Float(0.0),
            Cell::Float(sigma.re),
            Cell::Float(sigma.im),
            Cell::Float(d.re),
            Cell::Float(d.im),
            Cell::Float(d.norm()),
        ]);
        report.diagnostic("dim", dim);
    } else if let Some(ms) = &config.m_values {
        let m = *ms.first().ok_or_else(|| {
            gribov_lab::Error::DomainError("determinant needs --sigma-re or --m".into())
        })?;
        let dim = config.dim.unwrap_or_else(|| config.dim_for(m));
        let trunc = TruncationSpec::standard(dim)?;
        let spec = ContourSpec::midpoint(&params, m, config.nodes)?;
        for (k, (sigma, _)) in contour_nodes(&spec).into_iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / config.nodes as f64;
            let d = perturbation_determinant(&params, sigma, &trunc)?;
            report.push_row(vec![
                Cell::Float(theta),
                Cell::Float(sigma.re),
                Cell::Float(sigma.im),
                Cell::Float(d.re),
                Cell::Float(d.im),
                Cell::Float(d.norm()),
            ]);
        }
        report.diagnostic("dim", dim);
        report.diagnostic("radius", spec.radius);
    } else {
        return Err(gribov_lab::Error::DomainError(
            "determinant needs --sigma-re (a point) or --m (a contour sweep)".into(),
        ));
    }
    Ok(report)
}

fn bound_report_to_table(r: &bounds::BoundReport) -> Report {
    let mut report = Report::new(&["x", "value"]);
    for &(x, v) in &r.sequence_points {
        report.push_row(vec![Cell::Float(x), Cell::Float(v)]);
    }
    report.diagnostic("name", &r.name);
    report.diagnostic("max_ratio", r.max_ratio);
    report.diagnostic("arg_max", &r.arg_max);
    report.diagnostic("sample_count", r.sample_count);
    if let Some(s) = r.fitted_slope {
        report.diagnostic("fitted_slope", s);
    }
    if let Some(t) = r.tail_bound {
        report.diagnostic("tail_bound", t);
    }
    if let Some(s) = r.seed {
        report.diagnostic("seed", s);
    }
    report.diagnostic("pass", r.pass);
    report
}

pub fn run_bounds(config: &ResolvedConfig) -> CmdResult {
    let params = gribov_params(config)?;
    let check = config
        .check
        .as_deref()
        .ok_or_else(|| gribov_lab::Error::DomainError("bounds needs --check <name>".into()))?;
    let samples = config.samples.unwrap_or(100_000);
    let n_max = config.n_max.unwrap_or(10_000) as u64;
    let m_hi = config
        .m_values
        .as_ref()
        .and_then(|v| v.iter().max().copied())
        .unwrap_or(200) as u64;
    let r = match check {
        "interpolation" => bounds::check_interpolation_inequality(samples, config.seed)?,
        "gaps" => bounds::gap_bound_scan(n_max)?,
        "separation" => bounds::separation_scan(n_max.min(500), 0.1)?,
        "resolvent-sum" => bounds::resolvent_sum_sweep(3..=m_hi, 1_000_000)?,
        "circle-trace-norm" => bounds::trace_norm_sweep(3..=m_hi, 1_000_000)?,
        "subordination" => bounds::subordination_constant(&params, n_max, 32, config.seed)?,
        "relative-bound" => {
            bounds::relative_bound_check(&params, 3.0, &[0.1, 0.5, 1.0, 2.0], n_max)?
        }
        "nuclear-decay" => {
            let ms: Vec<u64> = config
                .m_values
                .clone()
                .unwrap_or_else(|| (10..=100).step_by(10).collect())
                .into_iter()
                .map(|m| m as u64)
                .collect();
            bounds::nuclear_decay_fit(&params, 0.5, 0.1, &ms, |m| config.dim_for(m as usize))?
        }
        "carleman" => bounds::carleman_diagnostic(0.4, n_max.max(1 << 16))?,
        "growth-constants" => bounds::eigenvalue_growth_constants(n_max)?,
        other => {
            return Err(gribov_lab::Error::DomainError(format!(
                "unknown bounds check '{other}' (interpolation, gaps, separation, \
                 resolvent-sum, circle-trace-norm, subordination, relative-bound, \
                 nuclear-decay, carleman, growth-constants)"
            )))
        }
    };
    Ok(bound_report_to_table(&r))
}

pub fn run_sturm(config: &ResolvedConfig) -> CmdResult {
    let potential: Potential = config.potential.as_deref().unwrap_or("cos2x").parse()?;
    let grids = config.grids.clone().unwrap_or_else(|| vec![2048, 4096]);
    let n_max = config.n_max.unwrap_or(40);
    let gl = gelfand_levitan_residual(potential, &grids, n_max)?;
    let mut report = Report::new(&["grid_points", "h", "raw_sum"]);
    for &(g, h, s) in &gl.per_grid {
        report.push_row(vec![Cell::Int(g as i64), Cell::Float(h), Cell::Float(s)]);
    }
    report.diagnostic("potential", potential.name());
    report.diagnostic("n_max", gl.n_max);
    report.diagnostic("extrapolated_sum", gl.extrapolated_sum);
    report.diagnostic("target", gl.target);
    report.diagnostic("residual", gl.residual);
    report.diagnostic("max_tail_increment", gl.max_tail_increment);
    Ok(report)
}

/// Column and schema documentation for every command.
pub fn describe() -> String {
    format!(
        r#"gribov-lab report schemas (schema version: {schema})

Every report embeds the fully resolved run configuration. CSV output starts
with three comment lines ('# schema: ...', '# config: ...',
'# diagnostics: ...'), then a header row and data rows; floats use 17
significant digits in scientific notation, UTF-8, LF line endings. JSON
output is one object {{schema, config, rows, diagnostics}}.

Configuration file: flat 'key = value' lines, '#' comments; named by
--config or the GRIBOV_LAB_CONFIG environment variable. Flags override file
values, which override the documented defaults. Keys mirror the long flag
names: lambda2, mu, lambda, m, j_max, nodes, dim_factor, dim_floor, dim,
format, output, seed, check, potential, grids, n_max, samples, sigma_re,
sigma_im.

spectrum   k          1-based index of the eigenvalue in (Re, Im) order
           sigma_re   real part of the k-th eigenvalue of the truncated H
           sigma_im   imaginary part
           residual   ||H v - sigma v||_2 from one inverse-iteration step

trace      m               contour index of gamma_m
           partial_sum_re  Re sum_{{k<=m}} (sigma_k - lambda'' lambda_k)
           partial_sum_im  Im of the same
           corr_j_re/_im   j-th correction integral over gamma_m
           residual_re/_im partial sum plus all corrections
           quad_err        worst node-doubling estimate among corrections
           n               truncation dimension N(m)

corrections m, j           contour index and correction order
           value_re/_im    correction integral value
           quad_error      node-doubling estimate |value(M) - value(M/2)|

determinant theta          angle of the contour node (0 for a point query)
           sigma_re/_im    evaluation point
           det_re/_im      perturbation determinant det(I + H R0(sigma))
           det_abs         its modulus (zeros locate eigenvalues of H)

bounds     x, value        check-specific sequence points (see diagnostics:
                           name, max_ratio, arg_max, sample_count,
                           fitted_slope, tail_bound, seed, pass)
           checks: interpolation, gaps, separation, resolvent-sum,
                   circle-trace-norm, subordination, relative-bound,
                   nuclear-decay, carleman, growth-constants

sturm      grid_points     cell count of the finite-difference grid
           h               mesh width pi / grid_points
           raw_sum         sum_{{n<=n_max}} (sigma_n - n^2) on that grid
           (diagnostics: extrapolated_sum, target, residual,
            max_tail_increment)

Exit codes: 0 success, 2 invalid parameters, 3 numerical failure
(pole collision, count mismatch, no convergence, quadrature not
converged); failures print a JSON error object to standard error.
"#,
        schema = crate::output::SCHEMA
    )
}
