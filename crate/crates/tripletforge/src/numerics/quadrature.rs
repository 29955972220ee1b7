use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauss::{composite_rule, FixedRule};
use super::summation::pairwise_sum;
use crate::error::{Error, Result};

/// Gauss-Legendre panels always use this many nodes each.
const PANEL_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    GaussLegendre,
    Trapezoid,
}

/// Convergence controls shared by every integral in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub rule: Rule,
    /// Node count used for axes that do not set their own.
    pub base_nodes: usize,
    pub refinement_factor: usize,
    pub rel_tol: f64,
    /// Absolute floor below which successive levels count as agreeing
    /// (lets integrals that are identically zero converge).
    #[serde(default)]
    pub abs_tol: f64,
    pub max_refinements: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        // sinc^2 lobes over the phase-matched band need ~10 nodes each
        Self {
            rule: Rule::GaussLegendre,
            base_nodes: 64,
            refinement_factor: 2,
            rel_tol: 1e-3,
            abs_tol: 0.0,
            max_refinements: 6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::Validation("quadrature rel_tol must be > 0".into()));
        }
        if self.abs_tol < 0.0 {
            return Err(Error::Validation("quadrature abs_tol must be >= 0".into()));
        }
        if self.base_nodes < 8 {
            return Err(Error::Validation("quadrature node counts must be >= 8".into()));
        }
        if self.refinement_factor < 2 {
            return Err(Error::Validation("refinement factor must be >= 2".into()));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }
}

/// One integration axis. `nodes == 0` means "use the spec's base count".
/// Axes with `refine == false` keep their node count at every level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
    pub refine: bool,
}

impl Axis {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi, nodes: 0, refine: true }
    }

    pub fn with_nodes(lo: f64, hi: f64, nodes: usize) -> Self {
        Self { lo, hi, nodes, refine: true }
    }

    /// Axis whose integrand is smooth enough that it never needs refinement.
    pub fn fixed(lo: f64, hi: f64, nodes: usize) -> Self {
        Self { lo, hi, nodes, refine: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub value: f64,
    pub rel_error: f64,
    pub levels: usize,
    pub converged: bool,
    pub evaluations: u64,
    /// Estimated relative error after each refinement (level 1 onwards).
    pub history: Vec<f64>,
}

impl ConvergenceReport {
    /// Turn a non-converged report into an error, keep converged ones.
    pub fn require(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                value: self.value,
                rel_error: self.rel_error,
                levels: self.levels,
            })
        }
    }

    /// Report for a value known exactly (no integration performed).
    pub fn exact(value: f64) -> Self {
        Self { value, rel_error: 0.0, levels: 0, converged: true, evaluations: 1, history: vec![] }
    }

    /// Combine reports of integrals over disjoint pieces of one domain.
    pub fn combine(parts: &[ConvergenceReport]) -> Self {
        let values: Vec<f64> = parts.iter().map(|p| p.value).collect();
        let value = pairwise_sum(&values);
        let abs_err: Vec<f64> = parts.iter().map(|p| p.rel_error * p.value.abs()).collect();
        let abs_err = pairwise_sum(&abs_err);
        let rel_error = if value != 0.0 { abs_err / value.abs() } else { abs_err };
        Self {
            value,
            rel_error,
            levels: parts.iter().map(|p| p.levels).max().unwrap_or(0),
            converged: parts.iter().all(|p| p.converged),
            evaluations: parts.iter().map(|p| p.evaluations).sum(),
            history: vec![],
        }
    }
}

fn axis_rule(rule: Rule, axis: &Axis, nodes: usize) -> FixedRule {
    match rule {
        Rule::GaussLegendre => {
            let panels = nodes.div_ceil(PANEL_ORDER);
            composite_rule(axis.lo, axis.hi, panels, PANEL_ORDER)
        }
        // `nodes` intervals, so refinement divides h exactly
        Rule::Trapezoid => FixedRule::trapezoid(axis.lo, axis.hi, nodes + 1),
    }
}

fn nested_sum<F>(f: &F, rules: &[FixedRule], depth: usize, x: &mut [f64]) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let r = &rules[depth];
    let mut buf = Vec::with_capacity(r.len());
    for (xi, wi) in r.nodes.iter().zip(&r.weights) {
        x[depth] = *xi;
        let v = if depth + 1 == rules.len() { f(x) } else { nested_sum(f, rules, depth + 1, x) };
        buf.push(wi * v);
    }
    pairwise_sum(&buf)
}

fn evaluate_level<F>(f: &F, rules: &[FixedRule]) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = rules.len();
    let first = &rules[0];
    let slabs: Vec<f64> = first
        .nodes
        .par_iter()
        .zip(first.weights.par_iter())
        .map(|(&x0, &w0)| {
            let mut x = vec![0.0; dim];
            x[0] = x0;
            let v = if dim == 1 { f(&x) } else { nested_sum(f, rules, 1, &mut x) };
            w0 * v
        })
        .collect();
    pairwise_sum(&slabs)
}

/// Integrate `f` over the box described by `axes`, refining the refinable
/// axes by `spec.refinement_factor` until two successive levels agree.
///
/// Hitting `max_refinements` is not an error here: the report comes back
/// with `converged == false` and the caller decides.
pub fn integrate_nd<F>(f: F, axes: &[Axis], spec: &QuadratureSpec) -> Result<ConvergenceReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    if axes.is_empty() {
        return Err(Error::Validation("integration needs at least one axis".into()));
    }
    for a in axes {
        if !(a.lo.is_finite() && a.hi.is_finite()) || a.hi < a.lo {
            return Err(Error::Validation(format!("bad integration bounds [{}, {}]", a.lo, a.hi)));
        }
        if a.nodes != 0 && a.nodes < 8 {
            return Err(Error::Validation("quadrature node counts must be >= 8".into()));
        }
    }
    if axes.iter().any(|a| a.hi == a.lo) {
        return Ok(ConvergenceReport::exact(0.0));
    }
    let base: Vec<usize> = axes.iter().map(|a| if a.nodes == 0 { spec.base_nodes } else { a.nodes }).collect();
    let any_refinable = axes.iter().any(|a| a.refine);

    let mut evaluations = 0u64;
    let mut history = Vec::new();
    let mut previous: Option<f64> = None;
    let mut level = 0usize;
    loop {
        let scale = spec.refinement_factor.pow(level as u32);
        let rules: Vec<FixedRule> = axes
            .iter()
            .zip(&base)
            .map(|(a, &n)| axis_rule(spec.rule, a, if a.refine { n * scale } else { n }))
            .collect();
        evaluations += rules.iter().map(|r| r.len() as u64).product::<u64>();
        let raw = evaluate_level(&f, &rules);
        if !raw.is_finite() {
            return Err(Error::Numerical(format!("integrand produced a non-finite sum ({raw}) at level {level}")));
        }
        if let Some(prev) = previous {
            let (value, diff) = match spec.rule {
                // second-order rule: one Richardson step removes the h^2 term,
                // and the correction itself bounds what is left
                Rule::Trapezoid => {
                    let r2 = (spec.refinement_factor * spec.refinement_factor) as f64;
                    let corr = (raw - prev) / (r2 - 1.0);
                    (raw + corr, corr.abs())
                }
                Rule::GaussLegendre => (raw, (raw - prev).abs()),
            };
            let rel = if raw != 0.0 { diff / raw.abs() } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
            history.push(rel);
            let converged = diff <= spec.rel_tol * raw.abs() || diff <= spec.abs_tol;
            if converged || level >= spec.max_refinements {
                return Ok(ConvergenceReport { value, rel_error: rel, levels: level, converged, evaluations, history });
            }
        }
        if !any_refinable {
            // nothing to refine: a single level is all we can do
            return Ok(ConvergenceReport {
                value: raw,
                rel_error: 0.0,
                levels: 0,
                converged: true,
                evaluations,
                history,
            });
        }
        previous = Some(raw);
        level += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_square_is_exact() {
        let r = integrate_nd(|_| 1.0, &[Axis::new(0.0, 1.0), Axis::new(0.0, 1.0)], &QuadratureSpec::default()).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_cube_matches_analytic() {
        let s = 0.7;
        let f = |x: &[f64]| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (s * s)).exp();
        let ax = Axis::new(-6.0 * s, 6.0 * s);
        let spec = QuadratureSpec::default().with_rel_tol(1e-9);
        let r = integrate_nd(f, &[ax, ax, ax], &spec).unwrap();
        let exact = (s * PI.sqrt()).powi(3);
        assert!(((r.value - exact) / exact).abs() < 1e-6);
    }

    #[test]
    fn trapezoid_with_richardson() {
        let spec = QuadratureSpec { rule: Rule::Trapezoid, rel_tol: 1e-5, ..Default::default() };
        let r = integrate_nd(|x| x[0].sin(), &[Axis::new(0.0, PI)], &spec).unwrap();
        assert!(r.converged);
        // the extrapolated value is far better than the conservative estimate
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn fixed_axes_do_not_refine() {
        let axes = [Axis::new(0.0, 1.0), Axis::fixed(0.0, 1.0, 16)];
        let r = integrate_nd(|x| x[0] * x[1], &axes, &QuadratureSpec::default()).unwrap();
        assert!((r.value - 0.25).abs() < 1e-14);
        assert_eq!(r.evaluations, (64 * 16 + 128 * 16) as u64);
    }

    #[test]
    fn rejects_bad_specs() {
        let spec = QuadratureSpec { base_nodes: 4, ..Default::default() };
        assert!(integrate_nd(|_| 1.0, &[Axis::new(0.0, 1.0)], &spec).is_err());
        let spec = QuadratureSpec { rel_tol: 0.0, ..Default::default() };
        assert!(integrate_nd(|_| 1.0, &[Axis::new(0.0, 1.0)], &spec).is_err());
    }

    #[test]
    fn reports_non_convergence_instead_of_failing() {
        let spec = QuadratureSpec { max_refinements: 1, rel_tol: 1e-14, ..Default::default() };
        let r = integrate_nd(|x| (200.0 * x[0]).sin().powi(2) / (1.0 + x[0]), &[Axis::new(0.0, 10.0)], &spec).unwrap();
        assert!(!r.converged);
        assert!(r.clone().require().is_err());
    }
}
