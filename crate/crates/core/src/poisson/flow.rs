//! Fixed-step RK4 integration of dressing flows `dP/dt = X_A(P)`.
//!
//! The flow stays on a leaf, so the determinant coefficients are conserved;
//! their deviation from the initial values is the reported drift.

use super::{dressing_field, PlusPolyMat, TangentVector};
use crate::error::{Error, Result};
use crate::matpoly::MonicMatPoly;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowOptions {
    pub time: f64,
    pub step: f64,
    /// Largest drift increase tolerated in a single step.
    pub step_drift_bound: Option<f64>,
    /// Keep every `record_every`-th point (the endpoint is always kept).
    pub record_every: usize,
}

impl FlowOptions {
    pub fn new(time: f64, step: f64) -> Self {
        FlowOptions {
            time,
            step,
            step_drift_bound: None,
            record_every: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult<F> {
    pub times: Vec<f64>,
    pub trajectory: Vec<MonicMatPoly<F>>,
    pub steps: usize,
    /// Max over the trajectory of the determinant-coefficient drift.
    pub max_drift: f64,
    pub final_drift: f64,
}

impl<F: Field> FlowResult<F> {
    pub fn endpoint(&self) -> &MonicMatPoly<F> {
        self.trajectory.last().expect("trajectory holds the initial point")
    }
}

fn shifted<F: Field>(p: &MonicMatPoly<F>, k: &TangentVector<F>, c: &F) -> MonicMatPoly<F> {
    let coeffs = p
        .coeffs()
        .iter()
        .zip(&k.coeffs)
        .map(|(a, b)| a + &b.scale(c))
        .collect();
    MonicMatPoly::new(p.dim(), coeffs).expect("shapes are consistent")
}

/// `max_s |c_s - c_s(0)| / max(1, max_s |c_s(0)|)` over the determinant coefficients.
pub fn det_drift<F: Field>(initial: &[F], p: &MonicMatPoly<F>) -> f64 {
    let det = p.det();
    let scale = initial.iter().map(Field::modulus).fold(1.0, f64::max);
    initial
        .iter()
        .enumerate()
        .map(|(k, c)| (det.coeff(k) - c.clone()).modulus())
        .fold(0.0, f64::max)
        / scale
}

fn rk4_step<F: Field>(p: &MonicMatPoly<F>, a: &PlusPolyMat<F>, h: &F) -> MonicMatPoly<F> {
    let half = h.clone() / F::from_i64(2);
    let k1 = dressing_field(p, a);
    let k2 = dressing_field(&shifted(p, &k1, &half), a);
    let k3 = dressing_field(&shifted(p, &k2, &half), a);
    let k4 = dressing_field(&shifted(p, &k3, h), a);
    let sixth = h.clone() / F::from_i64(6);
    let two = F::from_i64(2);
    let mut out = shifted(p, &k1, &sixth);
    out = shifted(&out, &k2, &(sixth.clone() * two.clone()));
    out = shifted(&out, &k3, &(sixth.clone() * two));
    shifted(&out, &k4, &sixth)
}

/// Integrate `dP/dt = X_A(P)` for `round(time / step)` steps.
pub fn flow_integrate<F: Field>(
    p: &MonicMatPoly<F>,
    a: &PlusPolyMat<F>,
    opts: &FlowOptions,
) -> Result<FlowResult<F>> {
    if opts.step.is_nan() || opts.step <= 0.0 || !opts.time.is_finite() || opts.time < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "flow needs step > 0 and finite time >= 0, got step {} time {}",
            opts.step, opts.time
        )));
    }
    if let Some(c) = a.coeffs.iter().find(|c| c.dim() != p.dim()) {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: c.dim(),
        });
    }
    let steps = (opts.time / opts.step).round() as usize;
    let h = F::from_f64(opts.step);
    let det0 = p.det();
    let initial: Vec<F> = (0..=p.dim() * p.degree()).map(|k| det0.coeff(k)).collect();
    let every = opts.record_every.max(1);

    let mut current = p.clone();
    let mut times = vec![0.0];
    let mut trajectory = vec![p.clone()];
    let mut max_drift: f64 = 0.0;
    let mut prev_drift = 0.0;
    for step in 1..=steps {
        current = rk4_step(&current, a, &h);
        let drift = det_drift(&initial, &current);
        if let Some(bound) = opts.step_drift_bound {
            if drift - prev_drift > bound || !drift.is_finite() {
                return Err(Error::DriftExceeded { step, drift, bound });
            }
        }
        prev_drift = drift;
        max_drift = max_drift.max(drift);
        if step % every == 0 || step == steps {
            times.push(step as f64 * opts.step);
            trajectory.push(current.clone());
        }
    }
    Ok(FlowResult {
        times,
        trajectory,
        steps,
        max_drift,
        final_drift: prev_drift,
    })
}

/// Observed order `log2(drift(h) / drift(h/2))` of the endpoint drift.
pub fn convergence_order<F: Field>(p: &MonicMatPoly<F>, a: &PlusPolyMat<F>, time: f64, step: f64) -> Result<f64> {
    let run = |h: f64| -> Result<f64> {
        let mut opts = FlowOptions::new(time, h);
        opts.record_every = usize::MAX;
        Ok(flow_integrate(p, a, &opts)?.final_drift)
    };
    let coarse = run(step)?;
    let fine = run(step / 2.0)?;
    // below this the drift is rounding noise and the ratio says nothing
    let floor = 1e3 * f64::EPSILON;
    if fine <= floor {
        return Err(Error::InvalidArgument(format!(
            "drift {fine:e} at step {} is at rounding level; use a larger step to estimate the order",
            step / 2.0
        )));
    }
    Ok((coarse / fine).log2())
}
