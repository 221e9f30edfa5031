//! Built-in admissible Clifford mother wavelets, admissibility verification,
//! and the kernel-constant machinery that normalizes everything downstream.
//!
//! Admissibility asks for ψ̂(ξ)[ψ̂(ξ)]† scalar with a finite |ξ|^{-n}-weighted
//! integral. With the Haar measure on Spin(n) normalized to mass 1, the
//! spin-scale kernel
//!
//!   K(ξ) = ∫∫ s ψ̂(a s̄ξs)[ψ̂(a s̄ξs)]† s̄ (da/a) ds
//!
//! is independent of ξ and equals
//!
//!   C_ψ = (1/ω_{n-1}) ∫ scalar(ψ̂ψ̂†)(u) |u|^{-n} dV(u),
//!
//! where ω_{n-1} is the unit-sphere surface area. C_ψ is the single
//! normalization source: the Plancherel normalizer is Z_ψ = (2π)^n C_ψ and
//! the book-keeping constant A_ψ = (2π)^n ω_{n-1} C_ψ is reported alongside.

use num_complex::Complex64;

use crate::algebra::{grade, Multivector};
use crate::error::{CliffError, Result};
use crate::fourier::cft_forward;
use crate::grid::{pairwise_sum_f64, CliffordField, Domain, GridSpec};
use crate::spin::SpinQuadrature;

/// Surface area of the unit sphere S^{n-1} in R^n.
pub fn unit_sphere_area(n: usize) -> f64 {
    // ω_{n-1} = 2 π^{n/2} / Γ(n/2); closed forms for n <= 8 are enough here
    match n {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        4 => 2.0 * std::f64::consts::PI.powi(2),
        5 => 8.0 * std::f64::consts::PI.powi(2) / 3.0,
        6 => std::f64::consts::PI.powi(3),
        7 => 16.0 * std::f64::consts::PI.powi(3) / 15.0,
        8 => std::f64::consts::PI.powi(4) / 3.0,
        _ => panic!("dimension {n} out of range"),
    }
}

/// Plancherel normalizer Z_ψ = (2π)^n C_ψ.
pub fn plancherel_normalizer(n: usize, c_psi: f64) -> f64 {
    (2.0 * std::f64::consts::PI).powi(n as i32) * c_psi
}

/// Analytic evaluators for the built-in wavelets; sampled wavelets fall back
/// to separable Catmull-Rom interpolation of their stored samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveletKind {
    VectorGaussian,
    MexicanHat,
    Sampled,
}

/// A mother wavelet: spatial samples plus the cached spectrum.
#[derive(Debug, Clone)]
pub struct MotherWavelet {
    name: String,
    kind: WaveletKind,
    field: CliffordField,
    spectrum: CliffordField,
}

fn radius2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

impl MotherWavelet {
    /// ψ(x) = x e^{-|x|^2/2}, the canonical vector-valued admissible wavelet;
    /// ψ̂(ξ) = -i ξ e^{-|ξ|^2/2} and ψ̂ψ̂† = |ξ|^2 e^{-|ξ|^2}, so C_ψ = 1/2.
    pub fn vector_gaussian(grid: GridSpec) -> Result<MotherWavelet> {
        grid.check_centered_odd()?;
        let n = grid.dim();
        let field = CliffordField::from_fn(grid.clone(), n, |x| {
            let env = (-radius2(x) / 2.0).exp();
            let mut mv = Multivector::zero(n);
            for (j, &c) in x.iter().enumerate() {
                mv.set_coeff(1 << j, Complex64::new(c * env, 0.0));
            }
            mv
        });
        let mut spectrum = CliffordField::from_fn(grid.frequency_grid(), n, |xi| {
            let env = (-radius2(xi) / 2.0).exp();
            let mut mv = Multivector::zero(n);
            for (j, &c) in xi.iter().enumerate() {
                mv.set_coeff(1 << j, Complex64::new(0.0, -c * env));
            }
            mv
        });
        spectrum.set_domain(Domain::Frequency);
        Ok(MotherWavelet {
            name: "vector-gaussian".into(),
            kind: WaveletKind::VectorGaussian,
            field,
            spectrum,
        })
    }

    /// ψ(x) = (n - |x|^2) e^{-|x|^2/2}, the scalar Laplacian-of-Gaussian;
    /// ψ̂(ξ) = |ξ|^2 e^{-|ξ|^2/2}, exactly scalar, C_ψ = 1/2 in every n.
    pub fn mexican_hat(grid: GridSpec) -> Result<MotherWavelet> {
        grid.check_centered_odd()?;
        let n = grid.dim();
        let nf = n as f64;
        let field = CliffordField::from_fn(grid.clone(), n, |x| {
            let r2 = radius2(x);
            Multivector::real_scalar(n, (nf - r2) * (-r2 / 2.0).exp())
        });
        let mut spectrum = CliffordField::from_fn(grid.frequency_grid(), n, |xi| {
            let r2 = radius2(xi);
            Multivector::real_scalar(n, r2 * (-r2 / 2.0).exp())
        });
        spectrum.set_domain(Domain::Frequency);
        Ok(MotherWavelet {
            name: "mexican-hat".into(),
            kind: WaveletKind::MexicanHat,
            field,
            spectrum,
        })
    }

    /// Plain Gaussian e^{-|x|^2/2}; ψ̂(0) ≠ 0, so it fails admissibility.
    /// Kept as a built-in negative control.
    pub fn gaussian(grid: GridSpec) -> Result<MotherWavelet> {
        grid.check_centered_odd()?;
        let n = grid.dim();
        let field = CliffordField::from_fn(grid.clone(), n, |x| {
            Multivector::real_scalar(n, (-radius2(x) / 2.0).exp())
        });
        let mut spectrum = CliffordField::from_fn(grid.frequency_grid(), n, |xi| {
            Multivector::real_scalar(n, (-radius2(xi) / 2.0).exp())
        });
        spectrum.set_domain(Domain::Frequency);
        Ok(MotherWavelet {
            name: "gaussian".into(),
            kind: WaveletKind::Sampled,
            field,
            spectrum,
        })
    }

    /// Treat arbitrary samples as a candidate mother wavelet; the spectrum is
    /// computed with the discrete transform and evaluation at off-grid points
    /// falls back to interpolation.
    pub fn from_field(name: impl Into<String>, field: CliffordField) -> Result<MotherWavelet> {
        let spectrum = cft_forward(&field)?;
        Ok(MotherWavelet {
            name: name.into(),
            kind: WaveletKind::Sampled,
            field,
            spectrum,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> WaveletKind {
        self.kind
    }

    pub fn field(&self) -> &CliffordField {
        &self.field
    }

    pub fn spectrum(&self) -> &CliffordField {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    /// Evaluate ψ at an arbitrary point.
    pub fn value_at(&self, x: &[f64]) -> Multivector {
        let n = self.dim();
        match self.kind {
            WaveletKind::VectorGaussian => {
                let env = (-radius2(x) / 2.0).exp();
                let mut mv = Multivector::zero(n);
                for (j, &c) in x.iter().enumerate() {
                    mv.set_coeff(1 << j, Complex64::new(c * env, 0.0));
                }
                mv
            }
            WaveletKind::MexicanHat => {
                let r2 = radius2(x);
                Multivector::real_scalar(n, (n as f64 - r2) * (-r2 / 2.0).exp())
            }
            WaveletKind::Sampled => interpolate(&self.field, x),
        }
    }

    /// Evaluate ψ̂ at an arbitrary frequency point.
    pub fn spectrum_at(&self, xi: &[f64]) -> Multivector {
        let n = self.dim();
        match self.kind {
            WaveletKind::VectorGaussian => {
                let env = (-radius2(xi) / 2.0).exp();
                let mut mv = Multivector::zero(n);
                for (j, &c) in xi.iter().enumerate() {
                    mv.set_coeff(1 << j, Complex64::new(0.0, -c * env));
                }
                mv
            }
            WaveletKind::MexicanHat => {
                let r2 = radius2(xi);
                Multivector::real_scalar(n, r2 * (-r2 / 2.0).exp())
            }
            WaveletKind::Sampled => interpolate(&self.spectrum, xi),
        }
    }

    /// scalar(ψ̂ψ̂†) at an arbitrary frequency point; for admissible wavelets
    /// this is the whole product.
    pub fn spectrum_density_at(&self, xi: &[f64]) -> f64 {
        match self.kind {
            WaveletKind::VectorGaussian => radius2(xi) * (-radius2(xi)).exp(),
            WaveletKind::MexicanHat => {
                let r2 = radius2(xi);
                r2 * r2 * (-r2).exp()
            }
            WaveletKind::Sampled => {
                let v = interpolate(&self.spectrum, xi);
                v.coeffs().iter().map(|c| c.norm_sqr()).sum()
            }
        }
    }

    /// L^1/L^2 finiteness proxy: both discrete norms plus boundary decay.
    pub fn integrability_report(&self) -> (f64, f64, f64) {
        (self.field.norm_l1(), self.field.norm_l2(), self.field.boundary_max())
    }
}

/// Separable Catmull-Rom interpolation of field samples at an off-grid point;
/// zero outside the sampled window.
fn interpolate(field: &CliffordField, x: &[f64]) -> Multivector {
    let grid = field.grid();
    let n = grid.dim();
    let blades = field.blades();
    // fractional index per axis
    let mut base = vec![0isize; n];
    let mut t = vec![0.0f64; n];
    for axis in 0..n {
        let u = (x[axis] - grid.origin()[axis]) / grid.spacing()[axis];
        let i = u.floor();
        base[axis] = i as isize;
        t[axis] = u - i;
    }

    fn catmull_rom(p: [Complex64; 4], t: f64) -> Complex64 {
        let t2 = t * t;
        let t3 = t2 * t;
        0.5 * ((2.0 * p[1])
            + (p[2] - p[0]) * t
            + (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) * t2
            + (3.0 * (p[1] - p[2]) + p[3] - p[0]) * t3)
    }

    // recursive tensor-product evaluation over the 4^n stencil
    fn eval(
        field: &CliffordField,
        blade: usize,
        axis: usize,
        idx: &mut [isize],
        base: &[isize],
        t: &[f64],
    ) -> Complex64 {
        let grid = field.grid();
        if axis == grid.dim() {
            for (a, &i) in idx.iter().enumerate() {
                if i < 0 || i >= grid.shape()[a] as isize {
                    return Complex64::ZERO;
                }
            }
            let flat = grid.flatten(&idx.iter().map(|&i| i as usize).collect::<Vec<_>>());
            return field.sample_coeffs(flat)[blade];
        }
        let mut p = [Complex64::ZERO; 4];
        for (o, slot) in p.iter_mut().enumerate() {
            idx[axis] = base[axis] + o as isize - 1;
            *slot = eval(field, blade, axis + 1, idx, base, t);
        }
        catmull_rom(p, t[axis])
    }

    let mut out = Multivector::zero(field.dim());
    let mut idx = vec![0isize; n];
    for blade in 0..blades {
        out.set_coeff(blade, eval(field, blade, 0, &mut idx, &base, &t));
    }
    out
}

/// Admissibility diagnostics and the constants derived from C_ψ.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AdmissibilityReport {
    /// Kernel constant under the mass-1 Haar convention.
    pub c_psi: f64,
    /// The paper-scale constant A_ψ = (2π)^n ω_{n-1} C_ψ.
    pub a_psi_paper: f64,
    /// Plancherel normalizer Z_ψ = (2π)^n C_ψ.
    pub z_psi: f64,
    /// Largest non-scalar blade magnitude of ψ̂ψ̂† relative to its scalar part.
    pub scalarity_max_violation: f64,
    /// Radial profile of the integrand scalar(ψ̂ψ̂†)|ξ|^{-n}: (radius, mean).
    pub integrand_profile: Vec<(f64, f64)>,
}

fn scalarity_violation(spectrum: &CliffordField) -> f64 {
    let blades = spectrum.blades();
    let n = spectrum.dim();
    let table = crate::algebra::sign_table(n);
    let mut dagger = vec![Complex64::ZERO; blades];
    let mut prod = vec![Complex64::ZERO; blades];
    let mut pairs = Vec::with_capacity(spectrum.grid().len());
    for p in 0..spectrum.grid().len() {
        let v = spectrum.sample_coeffs(p);
        for (mask, c) in v.iter().enumerate() {
            let k = grade(mask);
            let s = if (k * (k + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            dagger[mask] = s * c.conj();
        }
        prod.iter_mut().for_each(|c| *c = Complex64::ZERO);
        crate::algebra::gp_accumulate(table, v, &dagger, &mut prod);
        let scalar = prod[0].norm();
        let non_scalar = prod[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        pairs.push((scalar, non_scalar));
    }
    // grade the violation against the spectrum's own peak so that rounding
    // noise in regions where ψ̂ ~ 0 cannot dominate
    let peak = pairs.iter().map(|(s, _)| *s).fold(0.0, f64::max);
    pairs
        .iter()
        .map(|(s, ns)| ns / (s.max(peak * 1e-2) + 1e-30))
        .fold(0.0, f64::max)
}

/// Shell decomposition of the admissibility sum: dyadic radial bins counted
/// from the outermost sample inward, each with its contribution to C_ψ.
fn shell_sums(spectrum: &CliffordField, n: usize) -> Vec<f64> {
    let grid = spectrum.grid();
    let dv = grid.cell_volume();
    let omega = unit_sphere_area(n);
    let r_max = grid
        .origin()
        .iter()
        .zip(grid.spacing())
        .zip(grid.shape())
        .map(|((o, d), &m)| (o + (m - 1) as f64 * d).abs().max(o.abs()))
        .map(|h| h * h)
        .sum::<f64>()
        .sqrt();
    let mut shells = vec![0.0f64; 64];
    for p in 0..grid.len() {
        let xi = grid.point_vec(p);
        let r = radius2(&xi).sqrt();
        if r == 0.0 {
            continue; // ξ = 0 singular cell excluded
        }
        let g: f64 = spectrum.sample_coeffs(p).iter().map(|c| c.norm_sqr()).sum();
        let contribution = g * r.powi(-(n as i32)) * dv / omega;
        let shell = (r_max / r).log2().floor().max(0.0) as usize;
        let shell = shell.min(shells.len() - 1);
        shells[shell] += contribution;
    }
    while shells.last() == Some(&0.0) {
        shells.pop();
    }
    shells
}

/// Evaluate C_ψ on the discrete frequency grid:
/// C_ψ = (1/ω_{n-1}) Σ_{ξ≠0} scalar(ψ̂ψ̂†)(ξ) |ξ|^{-n} dV(ξ).
///
/// Divergence is detected by shell refinement: the candidate spectrum is
/// re-evaluated with the frequency spacing halved (analytically for built-ins,
/// by zero-padding the samples otherwise), and the wavelet is rejected when
/// the innermost dyadic shell still carries more than 10% of the total.
pub fn admissibility(psi: &MotherWavelet) -> Result<AdmissibilityReport> {
    let n = psi.dim();
    let omega = unit_sphere_area(n);
    let spectrum = psi.spectrum();
    let grid = spectrum.grid();

    let scalarity = scalarity_violation(spectrum);
    if scalarity > 1e-8 {
        return Err(CliffError::NotAdmissible {
            name: psi.name().into(),
            reason: format!("ψ̂ψ̂† is not scalar (relative violation {scalarity:.3e})"),
        });
    }

    // per-point contributions, summed pairwise
    let dv = grid.cell_volume();
    let mut contributions = Vec::with_capacity(grid.len());
    for p in 0..grid.len() {
        let xi = grid.point_vec(p);
        let r2 = radius2(&xi);
        if r2 == 0.0 {
            continue;
        }
        let g: f64 = spectrum.sample_coeffs(p).iter().map(|c| c.norm_sqr()).sum();
        contributions.push(g * r2.sqrt().powi(-(n as i32)) * dv / omega);
    }
    let c_psi = pairwise_sum_f64(&contributions);

    // refinement: halve the frequency spacing and re-examine the shells
    let refined = refined_spectrum(psi)?;
    let shells = shell_sums(&refined, n);
    let total: f64 = shells.iter().sum();
    if let Some(&innermost) = shells.iter().rev().find(|&&s| s > 0.0) {
        if total > 0.0 && innermost > 0.10 * total {
            return Err(CliffError::NotAdmissible {
                name: psi.name().into(),
                reason: format!(
                    "|ξ|^{{-n}} integral diverges at ξ = 0 (innermost shell carries {:.1}% of the total after refinement)",
                    100.0 * innermost / total
                ),
            });
        }
    }

    // radial diagnostics on the native grid
    let profile = radial_profile(spectrum, n);

    Ok(AdmissibilityReport {
        c_psi,
        a_psi_paper: plancherel_normalizer(n, c_psi) * omega,
        z_psi: plancherel_normalizer(n, c_psi),
        scalarity_max_violation: scalarity,
        integrand_profile: profile,
    })
}

/// Spectrum with halved frequency spacing: analytic re-evaluation for
/// built-ins, zero-padding to doubled spatial extent for sampled wavelets.
fn refined_spectrum(psi: &MotherWavelet) -> Result<CliffordField> {
    let n = psi.dim();
    let fine_shape: Vec<usize> = psi.field().grid().shape().iter().map(|&m| 2 * m - 1).collect();
    match psi.kind {
        WaveletKind::VectorGaussian | WaveletKind::MexicanHat => {
            let space = GridSpec::new(
                fine_shape,
                psi.field().grid().spacing().to_vec(),
                psi.field()
                    .grid()
                    .spacing()
                    .iter()
                    .zip(psi.field().grid().shape())
                    .map(|(&d, &m)| -((m - 1) as f64) * d)
                    .collect(),
            )?;
            let freq = space.frequency_grid();
            let mut out = CliffordField::from_fn(freq, n, |xi| psi.spectrum_at(xi));
            out.set_domain(Domain::Frequency);
            Ok(out)
        }
        WaveletKind::Sampled => {
            let coarse = psi.field().grid().clone();
            let space = GridSpec::new(
                fine_shape.clone(),
                coarse.spacing().to_vec(),
                coarse
                    .spacing()
                    .iter()
                    .zip(coarse.shape())
                    .map(|(&d, &m)| -((m - 1) as f64) * d)
                    .collect(),
            )?;
            // embed the samples in the doubled window; the wavelet decays
            // below the L^1-proxy threshold at its own boundary
            let mut padded = CliffordField::zeros(space.clone(), n);
            let blades = padded.blades();
            let offset: Vec<usize> = coarse.shape().iter().map(|&m| (m - 1) / 2).collect();
            let mut idx = vec![0usize; n];
            for p in 0..coarse.len() {
                coarse.unravel(p, &mut idx);
                let shifted: Vec<usize> = idx.iter().zip(&offset).map(|(&i, &o)| i + o).collect();
                let q = space.flatten(&shifted);
                let src = psi.field().sample_coeffs(p).to_vec();
                padded.data_mut()[q * blades..(q + 1) * blades].copy_from_slice(&src);
            }
            cft_forward(&padded)
        }
    }
}

fn radial_profile(spectrum: &CliffordField, n: usize) -> Vec<(f64, f64)> {
    let grid = spectrum.grid();
    let r_max = (0..n)
        .map(|a| {
            let lo = grid.origin()[a].abs();
            let hi = (grid.origin()[a] + (grid.shape()[a] - 1) as f64 * grid.spacing()[a]).abs();
            lo.max(hi).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    const BINS: usize = 48;
    let mut sums = vec![0.0f64; BINS];
    let mut counts = vec![0usize; BINS];
    for p in 0..grid.len() {
        let xi = grid.point_vec(p);
        let r = radius2(&xi).sqrt();
        if r == 0.0 {
            continue;
        }
        let g: f64 = spectrum.sample_coeffs(p).iter().map(|c| c.norm_sqr()).sum();
        let bin = ((r / r_max) * BINS as f64).min((BINS - 1) as f64) as usize;
        sums[bin] += g * r.powi(-(n as i32));
        counts[bin] += 1;
    }
    (0..BINS)
        .filter(|&b| counts[b] > 0)
        .map(|b| ((b as f64 + 0.5) * r_max / BINS as f64, sums[b] / counts[b] as f64))
        .collect()
}

/// Outcome of evaluating K(ξ) by direct (a, s) quadrature at one ξ sample.
#[derive(Debug, Clone, serde::Serialize)]
pub struct KernelSample {
    pub xi: Vec<f64>,
    pub k_scalar: f64,
    pub relative_deviation: f64,
    pub non_scalar_relative: f64,
}

/// Report for the ξ-independence of the spin-scale kernel.
#[derive(Debug, Clone, serde::Serialize)]
pub struct KernelConstantReport {
    pub c_psi: f64,
    pub samples: Vec<KernelSample>,
    pub max_relative_deviation: f64,
}

/// Log-spaced scale grid with trapezoid weights for ∫ da/a.
pub fn log_scale_grid(a_min: f64, a_max: f64, count: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(a_min > 0.0) || !(a_max > a_min) || count < 2 {
        return Err(CliffError::BadScaleGrid(format!(
            "need 0 < a_min < a_max and at least two scales (got {a_min}, {a_max}, {count})"
        )));
    }
    let h = (a_max / a_min).ln() / (count - 1) as f64;
    let scales: Vec<f64> = (0..count).map(|i| a_min * (h * i as f64).exp()).collect();
    let mut weights = vec![h; count];
    weights[0] = h / 2.0;
    weights[count - 1] = h / 2.0;
    Ok((scales, weights))
}

/// Evaluate K(ξ) over an (a, s) quadrature at each supplied ξ and compare
/// with C_ψ; the measure da/a is uniform in log a, so trapezoid weights in
/// log-space realize it.
pub fn kernel_constant_check(
    psi: &MotherWavelet,
    xi_samples: &[Vec<f64>],
    scales: &(Vec<f64>, Vec<f64>),
    spins: &SpinQuadrature,
) -> Result<KernelConstantReport> {
    let n = psi.dim();
    if spins.dim() != n {
        return Err(CliffError::DimensionMismatch(spins.dim(), n));
    }
    let report = admissibility(psi)?;
    let c_psi = report.c_psi;
    let (scale_nodes, scale_weights) = scales;

    let mut samples = Vec::with_capacity(xi_samples.len());
    let mut max_dev = 0.0f64;
    for xi in xi_samples {
        if radius2(xi) == 0.0 {
            return Err(CliffError::Config("kernel samples must be nonzero frequencies".into()));
        }
        let mut k_acc = Multivector::zero(n);
        let mut boundary = 0.0f64;
        for (s, w_s) in spins.iter() {
            let sbar = s.conjugate();
            // rotated direction s̄ ξ s, shared across scales
            let rotated = sbar.rotate(&crate::algebra::Vector::new(xi.clone()))?;
            for (i, (&a, &w_a)) in scale_nodes.iter().zip(scale_weights.iter()).enumerate() {
                let arg: Vec<f64> = rotated.components().iter().map(|c| c * a).collect();
                let spec = psi.spectrum_at(&arg);
                let product = &(&spec * &spec.hermitian_conjugate()) * sbar.multivector();
                let term = s.multivector() * &product;
                let weighted = term.scaled(Complex64::new(w_a * w_s, 0.0));
                if i == 0 || i == scale_nodes.len() - 1 {
                    boundary += weighted.scalar_part().re.abs();
                }
                k_acc = k_acc.add(&weighted);
            }
        }
        let k_scalar = k_acc.scalar_part().re;
        if boundary > 0.01 * k_scalar.abs() {
            return Err(CliffError::ScaleGridTooNarrow(format!(
                "boundary scales contribute {:.2}% of K({xi:?})",
                100.0 * boundary / k_scalar.abs()
            )));
        }
        let non_scalar = k_acc.max_magnitude_outside_grade(0) / (k_scalar.abs() + 1e-30);
        let deviation = (k_scalar - c_psi).abs() / c_psi;
        max_dev = max_dev.max(deviation);
        samples.push(KernelSample {
            xi: xi.clone(),
            k_scalar,
            relative_deviation: deviation,
            non_scalar_relative: non_scalar,
        });
    }

    Ok(KernelConstantReport {
        c_psi,
        samples,
        max_relative_deviation: max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar_quadrature;
    use std::f64::consts::PI;

    fn grid_2d() -> GridSpec {
        GridSpec::centered_span(2, 161, 20.0).unwrap()
    }

    fn grid_3d() -> GridSpec {
        GridSpec::centered(3, 71, 0.6).unwrap()
    }

    #[test]
    fn vector_gaussian_basics() {
        let psi = MotherWavelet::vector_gaussian(GridSpec::centered_span(2, 65, 8.0).unwrap()).unwrap();
        // odd function vanishes at the origin
        let mid = psi.field().grid().len() / 2;
        assert!(psi.field().sample(mid).magnitude() < 1e-15);
        // ||ψ||^2 = ∫ |x|^2 e^{-|x|^2} dV = π in 2-D
        assert!((psi.field().norm_l2_squared() - PI).abs() < 1e-6);
        // decays at the boundary
        assert!(psi.field().boundary_max() < 1e-10);
    }

    #[test]
    fn vector_gaussian_admissibility_constant() {
        for (psi, label) in [
            (MotherWavelet::vector_gaussian(grid_2d()).unwrap(), "n=2"),
            (MotherWavelet::vector_gaussian(grid_3d()).unwrap(), "n=3"),
        ] {
            let report = admissibility(&psi).unwrap();
            assert!(
                (report.c_psi - 0.5).abs() < 0.02 * 0.5,
                "{label}: C_ψ = {}",
                report.c_psi
            );
            assert!(report.scalarity_max_violation <= 1e-8);
        }
        // paper-scale constant in 2-D: A_ψ = (2π)^2 · 2π · 1/2 = 4π^3
        let report = admissibility(&MotherWavelet::vector_gaussian(grid_2d()).unwrap()).unwrap();
        let expected = 4.0 * PI.powi(3);
        assert!((report.a_psi_paper - expected).abs() < 0.02 * expected);
    }

    #[test]
    fn mexican_hat_admissibility_constant() {
        for (psi, label) in [
            (MotherWavelet::mexican_hat(grid_2d()).unwrap(), "n=2"),
            (MotherWavelet::mexican_hat(grid_3d()).unwrap(), "n=3"),
        ] {
            let report = admissibility(&psi).unwrap();
            assert!(
                (report.c_psi - 0.5).abs() < 0.02 * 0.5,
                "{label}: C_ψ = {}",
                report.c_psi
            );
            // exactly scalar construction
            assert!(report.scalarity_max_violation <= 1e-14);
        }
    }

    #[test]
    fn mexican_hat_zeroth_moment_vanishes() {
        let psi = MotherWavelet::mexican_hat(GridSpec::centered_span(2, 65, 8.0).unwrap()).unwrap();
        // ∫ψ dV = (2π)^{n/2} ψ̂(0)
        let blades = psi.field().blades();
        let total: f64 = (0..psi.field().grid().len())
            .map(|p| psi.field().data()[p * blades].re)
            .sum::<f64>()
            * psi.field().grid().cell_volume();
        assert!(total.abs() < 1e-8);
    }

    #[test]
    fn plain_gaussian_is_rejected() {
        let psi = MotherWavelet::gaussian(GridSpec::centered_span(2, 129, 16.0).unwrap()).unwrap();
        match admissibility(&psi) {
            Err(CliffError::NotAdmissible { name, reason }) => {
                assert_eq!(name, "gaussian");
                assert!(reason.contains("diverges"), "reason: {reason}");
            }
            other => panic!("expected NotAdmissible, got {other:?}"),
        }
    }

    #[test]
    fn spectra_match_discrete_transform() {
        // the cached analytic spectra agree with the FFT of the samples
        for psi in [
            MotherWavelet::vector_gaussian(GridSpec::centered_span(2, 65, 8.0).unwrap()).unwrap(),
            MotherWavelet::mexican_hat(GridSpec::centered_span(2, 65, 8.0).unwrap()).unwrap(),
        ] {
            let fft = cft_forward(psi.field()).unwrap();
            assert!(fft.max_coeff_diff(psi.spectrum()) < 1e-8, "{}", psi.name());
        }
    }

    #[test]
    fn kernel_constant_is_xi_independent() {
        let psi = MotherWavelet::vector_gaussian(grid_2d()).unwrap();
        let scales = log_scale_grid(2f64.powi(-4), 2f64.powi(4), 48).unwrap();
        let spins = haar_quadrature(2, 32).unwrap();
        let xis = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![1.5, -0.5]];
        let report = kernel_constant_check(&psi, &xis, &scales, &spins).unwrap();
        assert!(report.max_relative_deviation <= 0.02, "{report:?}");
        for s in &report.samples {
            assert!(s.non_scalar_relative <= 1e-8);
        }

        // doubling the spin resolution barely moves K (radial symmetry)
        let spins64 = haar_quadrature(2, 64).unwrap();
        let report64 = kernel_constant_check(&psi, &xis, &scales, &spins64).unwrap();
        for (a, b) in report.samples.iter().zip(&report64.samples) {
            assert!((a.k_scalar - b.k_scalar).abs() <= 0.005 * a.k_scalar.abs());
        }
    }

    #[test]
    fn narrow_scale_grid_is_reported() {
        let psi = MotherWavelet::vector_gaussian(grid_2d()).unwrap();
        let scales = log_scale_grid(0.5, 2.0, 8).unwrap();
        let spins = haar_quadrature(2, 8).unwrap();
        let result = kernel_constant_check(&psi, &[vec![1.0, 0.0]], &scales, &spins);
        assert!(matches!(result, Err(CliffError::ScaleGridTooNarrow(_))));
    }

    #[test]
    fn daughter_admissibility_scales_monotonically() {
        // scaled copies stay admissible and C grows with the scale
        let grid = GridSpec::centered_span(2, 129, 16.0).unwrap();
        let mut cs = Vec::new();
        for a in [0.5f64, 1.0, 2.0] {
            let n = 2;
            let field = CliffordField::from_fn(grid.clone(), n, |x| {
                let y: Vec<f64> = x.iter().map(|c| c / a).collect();
                let env = (-radius2(&y) / 2.0).exp() / a;
                let mut mv = Multivector::zero(n);
                for (j, &c) in y.iter().enumerate() {
                    mv.set_coeff(1 << j, Complex64::new(c * env, 0.0));
                }
                mv
            });
            let psi = MotherWavelet::from_field(format!("daughter-{a}"), field).unwrap();
            let report = admissibility(&psi).unwrap();
            cs.push(report.c_psi);
        }
        assert!(cs[0] < cs[1] && cs[1] < cs[2], "cs = {cs:?}");
    }

    #[test]
    fn interpolation_reproduces_smooth_samples() {
        let grid = GridSpec::centered_span(2, 65, 8.0).unwrap();
        let psi = MotherWavelet::from_field(
            "sampled-gaussian",
            CliffordField::from_fn(grid, 2, |x| {
                Multivector::real_scalar(2, (-radius2(x) / 2.0).exp())
            }),
        )
        .unwrap();
        for point in [[0.1, 0.3], [1.37, -2.11], [0.0, 0.0]] {
            let exact = (-radius2(&point) / 2.0).exp();
            let interp = psi.value_at(&point).scalar_part().re;
            assert!((interp - exact).abs() < 1e-4, "{point:?}: {interp} vs {exact}");
        }
        // outside the window the field is zero
        assert!(psi.value_at(&[50.0, 0.0]).magnitude() == 0.0);
    }
}
