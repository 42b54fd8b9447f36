//! Contour machinery for the regularized trace identity: circles gamma_m
//! separating the first m unperturbed eigenvalues from the rest, correction
//! integrals of orders j = 1..j_max, partial eigenvalue sums, and the
//! assembled residual.
//!
//! The trapezoid rule on a circle converges geometrically for integrands
//! analytic in an annulus around it, and every integrand here is a rational
//! function of sigma with poles at the scaled eigenvalues of G, so node
//! counts are powers of two and each integral carries the node-doubling
//! error estimate |value(M) - value(M/2)| for free (the M/2-point rule uses
//! every second node).

use num_complex::Complex64;

use crate::bargmann::{
    build_perturbation, eigenvalue_g, resolvent_diagonal, GribovParams, TruncationSpec,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Banded, Spectrum};
use crate::sum::KahanComplexSum;

type C = Complex64;

/// Relative margin below which an eigenvalue sitting near the contour is a
/// hard failure rather than something to nudge around.
const CONTOUR_MARGIN: f64 = 1e-6;

/// Quadrature acceptance: the node-doubling estimate must not exceed
/// this fraction of the value scale.
const QUAD_TOLERANCE: f64 = 1e-6;

/// Midpoint radius of the m-th separating circle,
/// r_m = lambda'' (lambda_m + lambda_{m+1}) / 2.
///
/// The first two radii are degenerate (lambda_1 = lambda_2 = 0 put r_1 at
/// zero and r_2 inside the triple-zero cluster), so m >= 3 is required;
/// the estimates this radius feeds are asymptotic in m anyway.
pub fn radius_sequence(params: &GribovParams, m: usize) -> Result<f64> {
    params.require_positive_lambda_pp()?;
    if m < 3 {
        return Err(Error::DomainError(format!(
            "separating circles need m >= 3 (lambda_1 = lambda_2 = 0 degenerate), got m = {m}"
        )));
    }
    Ok(params.lambda_pp * (eigenvalue_g(m as u64) + eigenvalue_g(m as u64 + 1)) as f64 / 2.0)
}

/// A concrete contour: the circle of radius `radius` around the origin,
/// traversed counterclockwise, discretized with `nodes` equispaced points.
#[derive(Debug, Clone, Copy)]
pub struct ContourSpec {
    pub radius: f64,
    /// Number of quadrature nodes; a power of two, at least 16, so halving
    /// the rule reuses every second node.
    pub nodes: usize,
    /// Which separating circle this is (the m of gamma_m).
    pub m_index: usize,
}

impl ContourSpec {
    pub fn new(params: &GribovParams, m_index: usize, radius: f64, nodes: usize) -> Result<Self> {
        params.require_positive_lambda_pp()?;
        if m_index < 3 {
            return Err(Error::DomainError(format!(
                "contour index must be at least 3, got {m_index}"
            )));
        }
        if nodes < 16 || !nodes.is_power_of_two() {
            return Err(Error::DomainError(format!(
                "node count must be a power of two >= 16, got {nodes}"
            )));
        }
        let lo = params.lambda_pp * eigenvalue_g(m_index as u64) as f64;
        let hi = params.lambda_pp * eigenvalue_g(m_index as u64 + 1) as f64;
        if !(radius > lo && radius < hi) {
            return Err(Error::DomainError(format!(
                "radius {radius} does not lie strictly between lambda''*lambda_{m_index} = {lo} \
                 and lambda''*lambda_{} = {hi}",
                m_index + 1
            )));
        }
        Ok(Self {
            radius,
            nodes,
            m_index,
        })
    }

    /// The canonical contour for gamma_m: midpoint radius.
    pub fn midpoint(params: &GribovParams, m_index: usize, nodes: usize) -> Result<Self> {
        let radius = radius_sequence(params, m_index)?;
        Self::new(params, m_index, radius, nodes)
    }
}

/// Quadrature nodes and weights for (1/2 pi i) times a counterclockwise
/// circle integral: sigma_k = r e^{2 pi i k / M}, w_k = sigma_k / M.
/// `sum w_k f(sigma_k)` then reproduces residues with geometric accuracy.
pub fn contour_nodes(spec: &ContourSpec) -> Vec<(C, C)> {
    let m = spec.nodes;
    (0..m)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            let sigma = C::from_polar(spec.radius, theta);
            (sigma, sigma / m as f64)
        })
        .collect()
}

/// One correction integral of the trace identity.
#[derive(Debug, Clone, Copy)]
pub struct CorrectionTerm {
    pub order_j: usize,
    pub value: C,
    /// |value(M) - value(M/2)| from the embedded node-doubling check.
    pub quad_error_estimate: f64,
}

/// Shared preflight for contour work: no pole of the unperturbed resolvent
/// may come within the collision margin of the circle.
fn check_contour_clearance(params: &GribovParams, spec: &ContourSpec, dim: usize) -> Result<()> {
    for n in 1..=dim {
        let pole = params.lambda_pp * eigenvalue_g(n as u64) as f64;
        let distance = (pole - spec.radius).abs();
        if distance < CONTOUR_MARGIN * spec.radius {
            return Err(Error::PoleCollision {
                index: n,
                sigma: C::new(spec.radius, 0.0),
                distance,
                threshold: CONTOUR_MARGIN * spec.radius,
            });
        }
    }
    Ok(())
}

fn validate_trace_setup(
    params: &GribovParams,
    m: usize,
    spec: &ContourSpec,
    trunc: &TruncationSpec,
) -> Result<()> {
    params.require_positive_lambda_pp()?;
    if trunc.start_index != 1 {
        return Err(Error::DomainError(
            "trace operations index the basis from n = 1".into(),
        ));
    }
    if spec.m_index != m {
        return Err(Error::DomainError(format!(
            "contour is gamma_{} but the report is for m = {m}",
            spec.m_index
        )));
    }
    if trunc.dim < 4 * m {
        return Err(Error::DomainError(format!(
            "truncation dimension {} is below the 4m = {} floor for m = {m}",
            trunc.dim,
            4 * m
        )));
    }
    check_contour_clearance(params, spec, trunc.dim)
}

/// All correction integrals j = 1..=j_max over one contour sweep:
///
///   value_j = (1/2 pi i) oint ((-1)^{j-1}/j) Tr[(H_{mu,lambda} R0(sigma))^j] d sigma.
///
/// The traces of powers share partial products per node, and the node sums
/// are accumulated in fixed order with compensation.
pub fn correction_integrals(
    params: &GribovParams,
    m: usize,
    j_max: usize,
    spec: &ContourSpec,
    trunc: &TruncationSpec,
) -> Result<Vec<CorrectionTerm>> {
    if !(1..=6).contains(&j_max) {
        return Err(Error::DomainError(format!(
            "correction order must satisfy 1 <= j <= 6, got {j_max}"
        )));
    }
    validate_trace_setup(params, m, spec, trunc)?;
    let perturbation = Banded::from_tridiagonal(&build_perturbation(params, trunc)?);
    let nodes = contour_nodes(spec);

    let mut full = vec![KahanComplexSum::new(); j_max];
    let mut half = vec![KahanComplexSum::new(); j_max];
    for (k, &(sigma, weight)) in nodes.iter().enumerate() {
        let resolvent = resolvent_diagonal(params, sigma, trunc)?;
        let hr = perturbation.scale_columns(&resolvent);
        let traces = linalg::traces_of_powers(&hr, j_max)?;
        for (ji, &tr) in traces.iter().enumerate() {
            let j = ji + 1;
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let term = weight * tr * (sign / j as f64);
            full[ji].add(term);
            if k % 2 == 0 {
                half[ji].add(term * 2.0);
            }
        }
    }

    let mut out = Vec::with_capacity(j_max);
    for ji in 0..j_max {
        let value = full[ji].value();
        let estimate = (value - half[ji].value()).norm();
        let tolerance = QUAD_TOLERANCE * value.norm().max(1.0);
        if estimate > tolerance {
            return Err(Error::QuadratureNotConverged {
                order: ji + 1,
                nodes: spec.nodes,
                estimate,
                tolerance,
            });
        }
        out.push(CorrectionTerm {
            order_j: ji + 1,
            value,
            quad_error_estimate: estimate,
        });
    }
    Ok(out)
}

/// Single correction integral of order j (computes the shared prefix
/// internally; use `correction_integrals` for a whole family).
pub fn correction_integral(
    params: &GribovParams,
    m: usize,
    j: usize,
    spec: &ContourSpec,
    trunc: &TruncationSpec,
) -> Result<CorrectionTerm> {
    let mut all = correction_integrals(params, m, j, spec, trunc)?;
    Ok(all.remove(j - 1))
}

/// Eigenvalues of the truncated H together with the inside/outside counts
/// for a given radius.
fn spectrum_with_counts(
    params: &GribovParams,
    trunc: &TruncationSpec,
    radius: f64,
    tol: f64,
) -> Result<(Spectrum, usize, usize)> {
    let op = crate::bargmann::build_full_operator(params, trunc)?;
    let spectrum = linalg::eigenvalues(&op, tol)?;
    for (k, z) in spectrum.values.iter().enumerate() {
        let distance = (z.norm() - radius).abs();
        if distance < CONTOUR_MARGIN * radius {
            return Err(Error::PoleCollision {
                index: k + 1,
                sigma: *z,
                distance,
                threshold: CONTOUR_MARGIN * radius,
            });
        }
    }
    let inside_h = spectrum.count_inside(radius);
    let inside_g = (1..=trunc.dim)
        .filter(|&n| params.lambda_pp * (eigenvalue_g(n as u64) as f64) < radius)
        .count();
    Ok((spectrum, inside_h, inside_g))
}

/// Partial trace sum sum_{k=1..m} (sigma_k - lambda'' lambda_k), pairing the
/// sorted eigenvalues of the truncation with the unperturbed sequence.
/// Verifies beforehand that the contour encloses the identical number of
/// eigenvalues of H and of lambda'' G, namely m.
pub fn partial_trace_sum(
    params: &GribovParams,
    m: usize,
    trunc: &TruncationSpec,
    tol: f64,
) -> Result<C> {
    let radius = radius_sequence(params, m)?;
    partial_trace_sum_with_radius(params, m, trunc, tol, radius).map(|(s, _)| s)
}

fn partial_trace_sum_with_radius(
    params: &GribovParams,
    m: usize,
    trunc: &TruncationSpec,
    tol: f64,
    radius: f64,
) -> Result<(C, (usize, usize))> {
    if trunc.dim < 4 * m {
        return Err(Error::DomainError(format!(
            "truncation dimension {} is below the 4m = {} floor for m = {m}",
            trunc.dim,
            4 * m
        )));
    }
    let (spectrum, inside_h, inside_g) = spectrum_with_counts(params, trunc, radius, tol)?;
    // The first m sorted eigenvalues must themselves be the enclosed ones;
    // an enclosed/sorted disagreement means the sorted-order pairing of
    // Theorem 1.4 has broken down, which is a count failure, not something
    // to reshuffle quietly.
    let leading_inside = spectrum.values.iter().take(m).all(|z| z.norm() < radius);
    if inside_h != inside_g || inside_h != m || !leading_inside {
        return Err(Error::CountMismatch {
            radius,
            inside_h,
            inside_g,
        });
    }
    let mut acc = KahanComplexSum::new();
    for k in 0..m {
        let lam = params.lambda_pp * eigenvalue_g(k as u64 + 1) as f64;
        acc.add(spectrum.values[k] - C::new(lam, 0.0));
    }
    Ok((acc.value(), (inside_h, inside_g)))
}

/// Per-m record of the regularized trace identity.
#[derive(Debug, Clone)]
pub struct TraceReport {
    pub m_index: usize,
    /// sum_{k<=m} (sigma_k - lambda'' lambda_k).
    pub partial_sum: C,
    /// Correction integrals j = 1..=j_max.
    pub corrections: Vec<CorrectionTerm>,
    /// partial_sum + sum of corrections; tends to zero in m when enough
    /// corrections are kept. Recorded, never asserted.
    pub residual: C,
    pub truncation_dim: usize,
    /// Eigenvalue counts inside gamma_m for (H, lambda'' G).
    pub counts_inside: (usize, usize),
}

impl TraceReport {
    /// Largest node-doubling estimate among the corrections.
    pub fn max_quad_error(&self) -> f64 {
        self.corrections
            .iter()
            .map(|ct| ct.quad_error_estimate)
            .fold(0.0, f64::max)
    }
}

/// Assemble the full residual record for gamma_m: partial eigenvalue sum
/// plus corrections of orders 1..=j_max.
pub fn regularized_residual(
    params: &GribovParams,
    m: usize,
    j_max: usize,
    trunc: &TruncationSpec,
    spec: &ContourSpec,
    tol: f64,
) -> Result<TraceReport> {
    validate_trace_setup(params, m, spec, trunc)?;
    let (partial_sum, counts) = partial_trace_sum_with_radius(params, m, trunc, tol, spec.radius)?;
    let corrections = correction_integrals(params, m, j_max, spec, trunc)?;
    let mut residual = KahanComplexSum::new();
    residual.add(partial_sum);
    for ct in &corrections {
        residual.add(ct.value);
    }
    Ok(TraceReport {
        m_index: m,
        partial_sum,
        corrections,
        residual: residual.value(),
        truncation_dim: trunc.dim,
        counts_inside: counts,
    })
}

/// Result of the correction-count rule l >= delta/alpha + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionCount {
    Finite(usize),
    /// alpha = 0 admits no finite correction count.
    Unbounded,
}

/// Smallest admissible number of corrections for subordination exponent
/// delta and decay exponent alpha: the least integer l with
/// l >= delta/alpha + 1. The admissible window is 1/2 <= delta < 2/3 and
/// 0 <= alpha < 2/3 - delta; the infimum of the rule over the whole window
/// is 5 (see `minimal_correction_count`).
pub fn correction_count_rule(delta: f64, alpha: f64) -> Result<CorrectionCount> {
    if !(0.5..2.0 / 3.0).contains(&delta) {
        return Err(Error::DomainError(format!(
            "delta must lie in [1/2, 2/3), got {delta}"
        )));
    }
    if !(alpha >= 0.0 && alpha < 2.0 / 3.0 - delta) {
        return Err(Error::DomainError(format!(
            "alpha must lie in [0, 2/3 - delta), got {alpha} with delta = {delta}"
        )));
    }
    if alpha == 0.0 {
        return Ok(CorrectionCount::Unbounded);
    }
    let bound = delta / alpha + 1.0;
    Ok(CorrectionCount::Finite(bound.ceil() as usize))
}

/// Infimum of the correction-count rule over the admissible (delta, alpha)
/// rectangle. delta = 1/2 allows the largest alpha (< 1/6), and
/// delta/alpha + 1 then stays strictly above 4, so the minimal integer
/// count is 5.
pub fn minimal_correction_count() -> usize {
    let mut best = usize::MAX;
    let steps = 2000;
    for i in 0..steps {
        let delta = 0.5 + (2.0 / 3.0 - 0.5) * (i as f64 / steps as f64);
        // largest admissible alpha for this delta, just inside the window
        let alpha = (2.0 / 3.0 - delta) * (1.0 - 1e-9);
        if alpha <= 0.0 {
            continue;
        }
        if let Ok(CorrectionCount::Finite(l)) = correction_count_rule(delta, alpha) {
            best = best.min(l);
        }
    }
    best
}
