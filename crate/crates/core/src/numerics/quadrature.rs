//! Gauss-Legendre panels with adaptive bisection.
//!
//! Each panel is integrated with an `n`-point Gauss-Legendre rule over the whole
//! panel and over both halves; the difference is the panel's error estimate and
//! the sum of the halves is its value. Panels are bisected, largest error first,
//! until the summed estimate meets the tolerance. All abscissae of one
//! refinement round are evaluated as a batch (optionally in parallel) and every
//! reduction runs in panel order, so results are independent of thread count.
//!
//! Open rules never touch an endpoint, which keeps logarithmic endpoint
//! singularities harmless.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::sum::Neumaier;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (1.0, 0.0);
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
                }
                dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    fn abscissae(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        out.extend(self.nodes.iter().map(|x| mid + half * x));
    }

    fn combine(&self, lo: f64, hi: f64, values: &[f64]) -> (f64, f64) {
        let half = 0.5 * (hi - lo);
        let mut acc = Neumaier::new();
        let mut abs = 0.0;
        for (w, v) in self.weights.iter().zip(values) {
            acc.add(w * v);
            abs += (w * v).abs();
        }
        (acc.value() * half, abs * half.abs())
    }
}

/// Map of `(0, inf)` onto `(0, 1)` used for the imaginary-frequency integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XiTransform {
    /// `xi = scale * t / (1 - t)`. Without an explicit scale the caller supplies
    /// its natural inverse length (for example `1/b`).
    Rational { scale: Option<f64> },
}

impl Default for XiTransform {
    fn default() -> Self {
        XiTransform::Rational { scale: None }
    }
}

impl XiTransform {
    fn scale_or(&self, fallback: f64) -> f64 {
        match *self {
            XiTransform::Rational { scale } => scale.unwrap_or(fallback),
        }
    }
}

/// Quadrature settings for the frequency and Brillouin-zone integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub xi_transform: XiTransform,
    /// Gauss-Legendre nodes per frequency panel.
    pub xi_order: usize,
    /// Gauss-Legendre nodes per panel in each Brillouin-zone direction.
    pub q_order: usize,
    /// Relative tolerance of the adaptive refinement.
    pub adaptive_tol: f64,
    /// Lower frequency cutoff; zero integrates from the origin.
    pub xi_min: f64,
    /// Add a midpoint estimate of the dropped `[0, xi_min]` piece.
    pub extrapolate_below_xi_min: bool,
    /// Panel budget per adaptive integral.
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            xi_transform: XiTransform::default(),
            xi_order: 64,
            q_order: 64,
            adaptive_tol: 1e-6,
            xi_min: 0.0,
            extrapolate_below_xi_min: false,
            max_panels: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.xi_order < 8 {
            return Err(Error::InvalidConfig(format!("xi_order must be >= 8, got {}", self.xi_order)));
        }
        if self.q_order < 4 {
            return Err(Error::InvalidConfig(format!("q_order must be >= 4, got {}", self.q_order)));
        }
        if !(self.adaptive_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "adaptive_tol must be positive, got {}",
                self.adaptive_tol
            )));
        }
        if !(self.xi_min >= 0.0) || !self.xi_min.is_finite() {
            return Err(Error::InvalidConfig(format!("xi_min must be >= 0, got {}", self.xi_min)));
        }
        if let XiTransform::Rational { scale: Some(s) } = self.xi_transform {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidConfig(format!("xi scale must be positive, got {s}")));
            }
        }
        if self.max_panels < 2 {
            return Err(Error::InvalidConfig("max_panels must be >= 2".into()));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.adaptive_tol = tol;
        self
    }

    pub fn with_orders(mut self, xi_order: usize, q_order: usize) -> Self {
        self.xi_order = xi_order;
        self.q_order = q_order;
        self
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    whole: f64,
    left: f64,
    right: f64,
    abs: f64,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }

    fn error(&self) -> f64 {
        (self.whole - self.value()).abs()
    }
}

/// Adaptive Gauss-Legendre integrator over a finite interval.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive<'r> {
    pub rule: &'r GaussLegendre,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub parallel: bool,
}

impl<'r> Adaptive<'r> {
    pub fn new(rule: &'r GaussLegendre, rel_tol: f64) -> Self {
        Self {
            rule,
            rel_tol,
            abs_tol: 0.0,
            max_panels: 4000,
            parallel: false,
        }
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    fn evaluate<F>(&self, f: &F, xs: &[f64]) -> Result<Vec<f64>>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        let raw: Vec<Result<f64>> = if self.parallel {
            xs.par_iter().map(|&x| f(x)).collect()
        } else {
            xs.iter().map(|&x| f(x)).collect()
        };
        // first failure in abscissa order, so error reports are deterministic too
        raw.into_iter().collect()
    }

    /// Fill in `whole`, `left`, `right` for panels whose `whole` is unknown (`NaN`).
    fn fill(&self, f: &(impl Fn(f64) -> Result<f64> + Sync), panels: &mut [Panel]) -> Result<usize> {
        let n = self.rule.order();
        let mut xs = Vec::new();
        let mut plan = Vec::new();
        for (idx, p) in panels.iter().enumerate() {
            let mid = 0.5 * (p.lo + p.hi);
            if p.whole.is_nan() {
                self.rule.abscissae(p.lo, p.hi, &mut xs);
                plan.push((idx, 0u8));
            }
            self.rule.abscissae(p.lo, mid, &mut xs);
            plan.push((idx, 1u8));
            self.rule.abscissae(mid, p.hi, &mut xs);
            plan.push((idx, 2u8));
        }
        let values = self.evaluate(f, &xs)?;
        for (chunk, &(idx, part)) in values.chunks(n).zip(&plan) {
            let p = &mut panels[idx];
            let mid = 0.5 * (p.lo + p.hi);
            match part {
                0 => p.whole = self.rule.combine(p.lo, p.hi, chunk).0,
                1 => {
                    let (v, a) = self.rule.combine(p.lo, mid, chunk);
                    p.left = v;
                    p.abs = a;
                }
                _ => {
                    let (v, a) = self.rule.combine(mid, p.hi, chunk);
                    p.right = v;
                    p.abs += a;
                }
            }
        }
        Ok(xs.len())
    }

    /// Integrate `f` over `[points[0], points[last]]`, with the interior points as
    /// initial panel boundaries.
    pub fn integrate<F>(&self, f: F, points: &[f64]) -> Result<Estimate>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        assert!(points.len() >= 2, "need at least two break points");
        let mut panels: Vec<Panel> = points
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| Panel {
                lo: w[0],
                hi: w[1],
                whole: f64::NAN,
                left: 0.0,
                right: 0.0,
                abs: 0.0,
            })
            .collect();
        if panels.is_empty() {
            return Ok(Estimate {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
                panels: 0,
            });
        }
        let mut evaluations = self.fill(&f, &mut panels)?;

        loop {
            let total: f64 = panels.iter().map(Panel::value).collect::<Neumaier>().value();
            let errors: Vec<f64> = panels.iter().map(Panel::error).collect();
            let err: f64 = errors.iter().copied().collect::<Neumaier>().value();
            let abs: f64 = panels.iter().map(|p| p.abs).sum();
            let target = (self.rel_tol * total.abs())
                .max(self.abs_tol)
                .max(64.0 * f64::EPSILON * abs);
            if err <= target {
                return Ok(Estimate {
                    value: total,
                    error: err,
                    evaluations,
                    panels: panels.len(),
                });
            }

            // bisect the largest-error panels until the remainder fits in half the target
            let mut order: Vec<usize> = (0..panels.len()).collect();
            order.sort_by(|&i, &j| errors[j].total_cmp(&errors[i]).then(i.cmp(&j)));
            let mut remaining = err;
            let mut chosen = Vec::new();
            for &i in &order {
                if remaining <= 0.5 * target && !chosen.is_empty() {
                    break;
                }
                let width = panels[i].hi - panels[i].lo;
                if width <= 4.0 * f64::EPSILON * panels[i].hi.abs().max(panels[i].lo.abs()) {
                    continue;
                }
                remaining -= errors[i];
                chosen.push(i);
            }
            if chosen.is_empty() || panels.len() + chosen.len() > self.max_panels {
                return Err(Error::Convergence {
                    estimate: total,
                    error: err,
                });
            }
            chosen.sort_unstable();

            let mut next = Vec::with_capacity(panels.len() + chosen.len());
            let mut fresh = Vec::new();
            let mut ci = 0;
            for (i, p) in panels.iter().enumerate() {
                if ci < chosen.len() && chosen[ci] == i {
                    ci += 1;
                    let mid = 0.5 * (p.lo + p.hi);
                    fresh.push(next.len());
                    next.push(Panel {
                        lo: p.lo,
                        hi: mid,
                        whole: p.left,
                        left: 0.0,
                        right: 0.0,
                        abs: 0.0,
                    });
                    fresh.push(next.len());
                    next.push(Panel {
                        lo: mid,
                        hi: p.hi,
                        whole: p.right,
                        left: 0.0,
                        right: 0.0,
                        abs: 0.0,
                    });
                } else {
                    next.push(*p);
                }
            }
            let mut batch: Vec<Panel> = fresh.iter().map(|&i| next[i]).collect();
            evaluations += self.fill(&f, &mut batch)?;
            for (slot, p) in fresh.iter().zip(batch) {
                next[*slot] = p;
            }
            panels = next;
        }
    }
}

/// `int_{xi_min}^inf f(xi) dxi` with the rational map and adaptive bisection.
///
/// Returns `(value, error_estimate)`.
pub fn integrate_semiinfinite<F>(f: F, spec: &QuadratureSpec) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    spec.validate()?;
    let rule = GaussLegendre::new(spec.xi_order);
    let est = semiinfinite(&rule, &f, spec, 1.0, false, &[])?;
    Ok((est.value, est.error))
}

/// Semi-infinite integral with a caller-provided natural scale and optional
/// extra break points (given in `xi`).
pub(crate) fn semiinfinite<F>(
    rule: &GaussLegendre,
    f: &F,
    spec: &QuadratureSpec,
    natural_scale: f64,
    parallel: bool,
    xi_breaks: &[f64],
) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let s = spec.xi_transform.scale_or(natural_scale);
    let to_t = |xi: f64| xi / (s + xi);
    let t_min = to_t(spec.xi_min);
    let mut points = vec![t_min];
    for &xb in xi_breaks {
        let t = to_t(xb);
        if t > t_min && t < 1.0 {
            points.push(t);
        }
    }
    points.push(1.0);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let g = |t: f64| -> Result<f64> {
        let one_minus = 1.0 - t;
        let xi = s * t / one_minus;
        if !xi.is_finite() {
            return Ok(0.0);
        }
        let v = f(xi)?;
        if v == 0.0 {
            return Ok(0.0);
        }
        Ok(v * s / (one_minus * one_minus))
    };
    let mut est = Adaptive::new(rule, spec.adaptive_tol)
        .max_panels(spec.max_panels)
        .parallel(parallel)
        .integrate(g, &points)?;
    if spec.xi_min > 0.0 && spec.extrapolate_below_xi_min {
        let piece = spec.xi_min * f(0.5 * spec.xi_min)?;
        est.value += piece;
        est.error += 0.5 * piece.abs();
    }
    Ok(est)
}

/// Convenience wrapper for infallible integrands on a finite interval.
pub fn integrate_finite<F>(rule: &GaussLegendre, f: F, lo: f64, hi: f64, rel_tol: f64) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    Adaptive::new(rule, rel_tol)
        .integrate(|x| Ok(f(x)), &[lo, hi])
        .map(|e| e.value)
        .unwrap_or_else(|e| match e {
            Error::Convergence { estimate, .. } => estimate,
            other => panic!("{other}"),
        })
}
