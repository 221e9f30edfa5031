//! Forward and inverse Clifford-Fourier transform of sampled fields.
//!
//! The kernel e^{∓i<x,ξ>} is a complex scalar, so it acts on each blade
//! coefficient independently; the transform is a per-blade DFT with the
//! continuum normalization (2π)^{-n/2} and pre/post phase ramps that emulate
//! the centered continuous transform. Even-sized axes are rejected rather
//! than approximated, which keeps c = (m-1)/2 integral and the ramp phases
//! exact roots of unity.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{CliffError, Result};
use crate::grid::{CliffordField, Domain, GridSpec};

struct AxisPlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// e^{+2πi c j / m} for j = 0..m, c = (m-1)/2.
    ramp: Vec<Complex64>,
    /// e^{-2πi c^2 / m} together with the measure factor, per direction.
    forward_scale: Complex64,
    inverse_scale: Complex64,
}

/// Centered unitary DFT plans for one grid (all axes).
pub struct CenteredFft {
    grid: GridSpec,
    axes: Vec<AxisPlan>,
}

impl CenteredFft {
    pub fn new(space: &GridSpec) -> Result<CenteredFft> {
        space.check_centered_odd()?;
        let mut planner = FftPlanner::new();
        let sqrt_tau = (2.0 * std::f64::consts::PI).sqrt();
        let axes = (0..space.dim())
            .map(|axis| {
                let m = space.shape()[axis];
                let c = ((m - 1) / 2) as f64;
                let ramp = (0..m)
                    .map(|j| {
                        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * c * j as f64 / m as f64)
                    })
                    .collect();
                let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * c * c / m as f64);
                let dx = space.spacing()[axis];
                let dk = 2.0 * std::f64::consts::PI / (m as f64 * dx);
                AxisPlan {
                    len: m,
                    forward: planner.plan_fft_forward(m),
                    inverse: planner.plan_fft_inverse(m),
                    ramp,
                    // forward: dx/sqrt(2π) e^{-2πi c²/m}; inverse: dk/sqrt(2π) e^{+2πi c²/m}
                    forward_scale: phase * (dx / sqrt_tau),
                    inverse_scale: phase.conj() * (dk / sqrt_tau),
                }
            })
            .collect();
        Ok(CenteredFft {
            grid: space.clone(),
            axes,
        })
    }

    pub fn space_grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Transform one blade lane in place along every axis.
    fn transform_lane(&self, data: &mut [Complex64], forward: bool) {
        let shape = self.grid.shape();
        let total = self.grid.len();
        let mut line = Vec::new();
        for (axis, plan) in self.axes.iter().enumerate() {
            let m = plan.len;
            // stride between consecutive entries along `axis` in row-major order
            let stride: usize = shape[axis + 1..].iter().product();
            let lines = total / m;
            line.resize(m, Complex64::ZERO);
            for l in 0..lines {
                // base offset of the l-th line along this axis
                let block = l / stride;
                let offset = block * stride * m + (l % stride);
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[offset + j * stride];
                }
                if forward {
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot *= plan.ramp[j];
                    }
                    plan.forward.process(&mut line);
                    for (k, slot) in line.iter_mut().enumerate() {
                        *slot *= plan.ramp[k] * plan.forward_scale;
                    }
                } else {
                    for (k, slot) in line.iter_mut().enumerate() {
                        *slot *= plan.ramp[k].conj();
                    }
                    plan.inverse.process(&mut line);
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot *= plan.ramp[j].conj() * plan.inverse_scale;
                    }
                }
                for (j, &v) in line.iter().enumerate() {
                    data[offset + j * stride] = v;
                }
            }
        }
    }

    /// Forward transform reusing this plan; grids must match.
    pub(crate) fn forward_field(&self, field: &CliffordField) -> CliffordField {
        self.run(field, true)
    }

    /// Inverse transform reusing this plan; the input lives on the dual grid.
    pub(crate) fn inverse_field(&self, field: &CliffordField) -> CliffordField {
        self.run(field, false)
    }

    fn run(&self, field: &CliffordField, forward: bool) -> CliffordField {
        let blades = field.blades();
        let points = field.grid().len();
        // gather each blade lane contiguously, transform, scatter back
        let mut out = CliffordField::zeros(
            if forward {
                self.grid.frequency_grid()
            } else {
                self.grid.clone()
            },
            field.dim(),
        );
        out.set_domain(if forward { Domain::Frequency } else { Domain::Space });
        let mut lane = vec![Complex64::ZERO; points];
        for blade in 0..blades {
            for p in 0..points {
                lane[p] = field.data()[p * blades + blade];
            }
            self.transform_lane(&mut lane, forward);
            let data = out.data_mut();
            for p in 0..points {
                data[p * blades + blade] = lane[p];
            }
        }
        out
    }
}

/// Forward transform: approximates (2π)^{-n/2} ∫ e^{-i<x,ξ>} f(x) dV(x) on
/// the dual frequency grid. Requires an odd, origin-centered grid.
pub fn cft_forward(f: &CliffordField) -> Result<CliffordField> {
    if f.domain() != Domain::Space {
        return Err(CliffError::GridMismatch(
            "cft_forward expects a space-domain field".into(),
        ));
    }
    let plan = CenteredFft::new(f.grid())?;
    Ok(plan.run(f, true))
}

/// Inverse transform back onto the centered space grid; exact inverse of
/// `cft_forward` up to rounding.
pub fn cft_inverse(fhat: &CliffordField) -> Result<CliffordField> {
    if fhat.domain() != Domain::Frequency {
        return Err(CliffError::GridMismatch(
            "cft_inverse expects a frequency-domain field".into(),
        ));
    }
    let space = space_grid_of(fhat.grid())?;
    let plan = CenteredFft::new(&space)?;
    let mut out = plan.run(fhat, false);
    out.set_domain(Domain::Space);
    Ok(out)
}

/// Recover the centered space grid dual to a frequency grid.
pub fn space_grid_of(freq: &GridSpec) -> Result<GridSpec> {
    freq.check_centered_odd()?;
    let shape = freq.shape().to_vec();
    let spacing: Vec<f64> = shape
        .iter()
        .zip(freq.spacing())
        .map(|(&m, &dk)| 2.0 * std::f64::consts::PI / (m as f64 * dk))
        .collect();
    let origin = shape
        .iter()
        .zip(&spacing)
        .map(|(&m, &dx)| -((m - 1) as f64) / 2.0 * dx)
        .collect();
    GridSpec::new(shape, spacing, origin)
}

/// Both sides of the Parseval identity <f,g> = <f̂,ĝ>, as multivectors.
pub fn parseval_check(f: &CliffordField, g: &CliffordField) -> Result<(crate::algebra::Multivector, crate::algebra::Multivector)> {
    let lhs = f.inner_product(g)?;
    let rhs = cft_forward(f)?.inner_product(&cft_forward(g)?)?;
    Ok((lhs, rhs))
}

/// Spectral realization of B_k = ∂_{x_k}: multiply f̂ by iξ_k and invert.
pub fn derivative_spectral(f: &CliffordField, axis: usize) -> Result<CliffordField> {
    let mut fhat = cft_forward(f)?;
    if axis == 0 || axis > f.grid().dim() {
        return Err(CliffError::AxisOutOfRange { axis, n: f.grid().dim() });
    }
    let blades = fhat.blades();
    let grid = fhat.grid().clone();
    let mut idx = vec![0usize; grid.dim()];
    let data = fhat.data_mut();
    for p in 0..grid.len() {
        grid.unravel(p, &mut idx);
        let xi_k = grid.axis_coord(axis - 1, idx[axis - 1]);
        let factor = Complex64::new(0.0, xi_k);
        for c in &mut data[p * blades..(p + 1) * blades] {
            *c *= factor;
        }
    }
    cft_inverse(&fhat)
}
