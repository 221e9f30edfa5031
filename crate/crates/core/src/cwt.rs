//! The continuous Clifford wavelet transform.
//!
//! Daughters are scaled, translated, spin-rotated copies
//! ψ^{a,b,s}(x) = a^{-n/2} s ψ(s̄(x-b)s / a) s̄, and the transform is
//! T[f](a,b,s) = <ψ^{a,b,s}, f>. For each (a, s) the coefficients over all
//! translations come from one inverse transform:
//!
//!   T[f](a,·,s) = a^{n/2} (2π)^{n/2} F^{-1}[ ξ ↦ s [ψ̂(a s̄ξs)]† s̄ f̂(ξ) ],
//!
//! the (2π)^{n/2} being the convolution-theorem factor under the unitary
//! kernel convention. The measure da/a^{n+1} dV(b) ds is realized by
//! log-trapezoid scale weights times a^{-n}, the cell volume, and the Haar
//! quadrature weights; every identity below is normalized by Z_ψ = (2π)^n C_ψ.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{grade, sign_table, Multivector, Vector};
use crate::error::{CliffError, Result};
use crate::fourier::{cft_forward, cft_inverse, CenteredFft};
use crate::grid::{CliffordField, Domain, GridSpec};
use crate::spin::{SpinQuadrature, Spinor};
use crate::wavelet::{log_scale_grid, MotherWavelet};

/// Slices are produced in fixed-size batches so results do not depend on the
/// worker count.
const SLICE_CHUNK: usize = 8;

/// Discretization of the parameter space R^+ x R^n x Spin(n).
#[derive(Debug, Clone)]
pub struct CwtGrid {
    scales: Vec<f64>,
    /// Trapezoid weights for ∫ da/a, uniform in log a.
    log_weights: Vec<f64>,
    spins: SpinQuadrature,
    translations: GridSpec,
}

impl CwtGrid {
    pub fn new(
        scales: Vec<f64>,
        log_weights: Vec<f64>,
        spins: SpinQuadrature,
        translations: GridSpec,
    ) -> Result<CwtGrid> {
        if scales.len() != log_weights.len() || scales.len() < 2 {
            return Err(CliffError::BadScaleGrid(
                "need at least two scales with matching weights".into(),
            ));
        }
        if scales.windows(2).any(|w| !(w[0] > 0.0) || w[1] <= w[0]) {
            return Err(CliffError::BadScaleGrid(
                "scales must be strictly increasing and positive".into(),
            ));
        }
        if spins.dim() != translations.dim() {
            return Err(CliffError::DimensionMismatch(spins.dim(), translations.dim()));
        }
        Ok(CwtGrid {
            scales,
            log_weights,
            spins,
            translations,
        })
    }

    /// Log-spaced scales over [a_min, a_max] with trapezoid weights.
    pub fn log_spaced(
        a_min: f64,
        a_max: f64,
        count: usize,
        spins: SpinQuadrature,
        translations: GridSpec,
    ) -> Result<CwtGrid> {
        let (scales, log_weights) = log_scale_grid(a_min, a_max, count)?;
        CwtGrid::new(scales, log_weights, spins, translations)
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn spins(&self) -> &SpinQuadrature {
        &self.spins
    }

    pub fn translations(&self) -> &GridSpec {
        &self.translations
    }

    /// Weight realizing da/a^{n+1} at scale index i: (log-trapezoid)·a^{-n}.
    pub fn measure_weight(&self, i: usize) -> f64 {
        let n = self.translations.dim() as i32;
        self.log_weights[i] * self.scales[i].powi(-n)
    }

    pub fn slice_count(&self) -> usize {
        self.scales.len() * self.spins.len()
    }

    fn approx_eq(&self, other: &CwtGrid) -> bool {
        self.scales.len() == other.scales.len()
            && self
                .scales
                .iter()
                .zip(&other.scales)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a)
            && self.spins.len() == other.spins.len()
            && self.translations.approx_eq(&other.translations)
    }
}

/// Wavelet coefficients laid out over (scale, spin, grid point), blade-minor.
#[derive(Debug, Clone)]
pub struct CwtTensor {
    grid: CwtGrid,
    dim: usize,
    data: Vec<Complex64>,
}

impl CwtTensor {
    pub fn zeros(grid: CwtGrid, dim: usize) -> CwtTensor {
        let len = grid.slice_count() * (grid.translations().len() << dim);
        CwtTensor {
            grid,
            dim,
            data: vec![Complex64::ZERO; len],
        }
    }

    pub fn from_raw(grid: CwtGrid, dim: usize, data: Vec<Complex64>) -> Result<CwtTensor> {
        if data.len() != grid.slice_count() * (grid.translations().len() << dim) {
            return Err(CliffError::Config("tensor payload length mismatch".into()));
        }
        Ok(CwtTensor { grid, dim, data })
    }

    pub fn grid(&self) -> &CwtGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    fn slice_len(&self) -> usize {
        self.grid.translations().len() << self.dim
    }

    fn slice_range(&self, scale_idx: usize, spin_idx: usize) -> std::ops::Range<usize> {
        let idx = scale_idx * self.grid.spins().len() + spin_idx;
        let len = self.slice_len();
        idx * len..(idx + 1) * len
    }

    /// The (a, s)-slice as a field over the translation grid.
    pub fn slice_field(&self, scale_idx: usize, spin_idx: usize) -> CliffordField {
        let range = self.slice_range(scale_idx, spin_idx);
        CliffordField::from_raw(
            self.grid.translations().clone(),
            self.dim,
            Domain::Space,
            self.data[range].to_vec(),
        )
        .expect("slice layout is consistent")
    }

    pub fn set_slice(&mut self, scale_idx: usize, spin_idx: usize, field: &CliffordField) {
        let range = self.slice_range(scale_idx, spin_idx);
        self.data[range].copy_from_slice(field.data());
    }

    pub fn coefficient(&self, scale_idx: usize, spin_idx: usize, point: usize) -> Multivector {
        let range = self.slice_range(scale_idx, spin_idx);
        let blades = 1usize << self.dim;
        let base = range.start + point * blades;
        Multivector::from_coeffs(self.dim, self.data[base..base + blades].to_vec())
    }
}

/// A sampled daughter wavelet plus a support diagnostic: when the rotated,
/// scaled copy spills past the grid the construction is reported, not failed.
#[derive(Debug, Clone)]
pub struct DaughterField {
    pub field: CliffordField,
    pub support_warning: Option<String>,
}

/// Sample ψ^{a,b,s}(x) = a^{-n/2} s ψ(s̄(x-b)s/a) s̄ on the mother's grid.
///
/// The translation b must be a grid point so identity cases are exact.
pub fn make_daughter(
    psi: &MotherWavelet,
    a: f64,
    b: &Vector,
    s: &Spinor,
) -> Result<DaughterField> {
    if !(a > 0.0) {
        return Err(CliffError::NonPositiveScale(a));
    }
    let grid = psi.field().grid().clone();
    let n = grid.dim();
    if b.dim() != n || s.dim() != n {
        return Err(CliffError::DimensionMismatch(b.dim(), n));
    }
    // b must land on the sampling lattice
    for axis in 0..n {
        let u = (b.components()[axis] - grid.origin()[axis]) / grid.spacing()[axis];
        if (u - u.round()).abs() > 1e-9 {
            return Err(CliffError::OffGridTranslation(b.components().to_vec()));
        }
    }
    s.rotate(&Vector::zero(n))?; // validates the spinor

    let half_extent = (0..n)
        .map(|axis| {
            let lo = grid.origin()[axis].abs();
            let hi = (grid.origin()[axis] + (grid.shape()[axis] - 1) as f64 * grid.spacing()[axis]).abs();
            lo.max(hi)
        })
        .fold(f64::INFINITY, f64::min);
    let needed = a * half_extent + b.norm();
    let support_warning = (needed > half_extent * (1.0 + 1e-12)).then(|| {
        format!(
            "daughter support radius {needed:.3} exceeds the grid half-extent {half_extent:.3}; boundary content is truncated"
        )
    });

    let sbar = s.conjugate();
    let s_mv = s.multivector().clone();
    let sbar_mv = sbar.multivector().clone();
    let norm = a.powf(-(n as f64) / 2.0);
    let field = CliffordField::from_fn(grid, n, |x| {
        let y = Vector::new(
            x.iter()
                .zip(b.components())
                .map(|(xi, bi)| xi - bi)
                .collect(),
        );
        let rotated = sbar.rotate_unchecked(&y);
        let arg: Vec<f64> = rotated.components().iter().map(|c| c / a).collect();
        let value = psi.value_at(&arg);
        (&(&s_mv * &value) * &sbar_mv).scaled(Complex64::new(norm, 0.0))
    });
    Ok(DaughterField {
        field,
        support_warning,
    })
}

/// Shared state for producing transform slices on the fast path.
struct SliceEngine<'a> {
    psi: &'a MotherWavelet,
    grid: &'a CwtGrid,
    fft: CenteredFft,
    fhat: CliffordField,
    /// Per spin node: s̄ ξ s for every frequency grid point, flattened.
    rotated: Vec<Vec<f64>>,
    /// Spin sandwich factors as raw coefficients.
    spin_left: Vec<Vec<Complex64>>,
    spin_right: Vec<Vec<Complex64>>,
    herm_signs: Vec<f64>,
}

impl<'a> SliceEngine<'a> {
    fn new(f: &CliffordField, psi: &'a MotherWavelet, grid: &'a CwtGrid) -> Result<SliceEngine<'a>> {
        if !f.grid().approx_eq(grid.translations()) {
            return Err(CliffError::GridMismatch(
                "analyzed field and CWT grid disagree".into(),
            ));
        }
        if !psi.field().grid().approx_eq(f.grid()) {
            return Err(CliffError::GridMismatch(
                "wavelet and analyzed field are sampled on different grids".into(),
            ));
        }
        let n = f.dim();
        let fft = CenteredFft::new(f.grid())?;
        let fhat = cft_forward(f)?;
        let freq = fhat.grid().clone();
        let points = freq.len();

        let mut rotated = Vec::with_capacity(grid.spins().len());
        let mut spin_left = Vec::with_capacity(grid.spins().len());
        let mut spin_right = Vec::with_capacity(grid.spins().len());
        for s in grid.spins().nodes() {
            let sbar = s.conjugate();
            let mut coords = vec![0.0f64; points * n];
            let mut xi = vec![0.0f64; n];
            for p in 0..points {
                freq.point(p, &mut xi);
                let r = sbar.rotate_unchecked(&Vector::new(xi.clone()));
                coords[p * n..(p + 1) * n].copy_from_slice(r.components());
            }
            rotated.push(coords);
            spin_left.push(s.multivector().coeffs().to_vec());
            spin_right.push(sbar.multivector().coeffs().to_vec());
        }
        let herm_signs = (0..1usize << n)
            .map(|mask| {
                let k = grade(mask);
                if (k * (k + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 }
            })
            .collect();
        Ok(SliceEngine {
            psi,
            grid,
            fft,
            fhat,
            rotated,
            spin_left,
            spin_right,
            herm_signs,
        })
    }

    fn dim(&self) -> usize {
        self.fhat.dim()
    }

    /// T[f](a, ·, s) over all translations, in the space domain.
    fn slice(&self, scale_idx: usize, spin_idx: usize) -> CliffordField {
        let n = self.dim();
        let blades = 1usize << n;
        let table = sign_table(n);
        let a = self.grid.scales()[scale_idx];
        let prefactor = a.powf(n as f64 / 2.0) * (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);
        let points = self.fhat.grid().len();
        let coords = &self.rotated[spin_idx];
        let s_left = &self.spin_left[spin_idx];
        let s_right = &self.spin_right[spin_idx];

        let mut multiplier = CliffordField::zeros(self.fhat.grid().clone(), n);
        multiplier.set_domain(Domain::Frequency);
        let mut arg = vec![0.0f64; n];
        let mut dag = vec![Complex64::ZERO; blades];
        let mut tmp = vec![Complex64::ZERO; blades];
        let mut sandwich = vec![Complex64::ZERO; blades];
        {
            let data = multiplier.data_mut();
            for p in 0..points {
                for (d, slot) in arg.iter_mut().enumerate() {
                    *slot = a * coords[p * n + d];
                }
                let spec = self.psi.spectrum_at(&arg);
                for (mask, c) in spec.coeffs().iter().enumerate() {
                    dag[mask] = self.herm_signs[mask] * c.conj();
                }
                tmp.iter_mut().for_each(|c| *c = Complex64::ZERO);
                crate::algebra::gp_accumulate(table, s_left, &dag, &mut tmp);
                sandwich.iter_mut().for_each(|c| *c = Complex64::ZERO);
                crate::algebra::gp_accumulate(table, &tmp, s_right, &mut sandwich);
                let out = &mut data[p * blades..(p + 1) * blades];
                crate::algebra::gp_accumulate(table, &sandwich, self.fhat.sample_coeffs(p), out);
                for c in out.iter_mut() {
                    *c *= prefactor;
                }
            }
        }
        let mut slice = self.fft.inverse_field(&multiplier);
        slice.set_domain(Domain::Space);
        slice
    }

    /// Visit every (scale, spin) slice in deterministic order; production is
    /// parallel within fixed-size chunks.
    fn for_each<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(usize, usize, CliffordField) -> Result<()>,
    {
        let spins = self.grid.spins().len();
        let total = self.grid.slice_count();
        let indices: Vec<usize> = (0..total).collect();
        for chunk in indices.chunks(SLICE_CHUNK) {
            let produced: Vec<(usize, CliffordField)> = chunk
                .par_iter()
                .map(|&idx| (idx, self.slice(idx / spins, idx % spins)))
                .collect();
            for (idx, field) in produced {
                visit(idx / spins, idx % spins, field)?;
            }
        }
        Ok(())
    }
}

/// Stream the transform slices T[f](a, ·, s) in deterministic (scale, spin)
/// order without materializing the tensor; the backbone of the energy checks.
pub fn for_each_slice<F>(
    f: &CliffordField,
    psi: &MotherWavelet,
    grid: &CwtGrid,
    visit: F,
) -> Result<()>
where
    F: FnMut(usize, usize, CliffordField) -> Result<()>,
{
    SliceEngine::new(f, psi, grid)?.for_each(visit)
}

/// The full coefficient tensor T[f](a, b, s) over the CWT grid.
///
/// Admissibility of ψ is not required here; the transform is defined for any
/// mother wavelet and the identity checks gate on admissibility themselves.
pub fn cwt_analyze(f: &CliffordField, psi: &MotherWavelet, grid: &CwtGrid) -> Result<CwtTensor> {
    let engine = SliceEngine::new(f, psi, grid)?;
    let mut tensor = CwtTensor::zeros(grid.clone(), f.dim());
    engine.for_each(|ai, si, slice| {
        tensor.set_slice(ai, si, &slice);
        Ok(())
    })?;
    Ok(tensor)
}

/// Direct-definition evaluation of one coefficient: <ψ^{a,b,s}, f>. The slow
/// independent route used to validate the fast path.
pub fn cwt_direct(
    f: &CliffordField,
    psi: &MotherWavelet,
    a: f64,
    b: &Vector,
    s: &Spinor,
) -> Result<Multivector> {
    let daughter = make_daughter(psi, a, b, s)?;
    daughter.field.inner_product(f)
}

/// Inner product on H_ψ: (1/Z) Σ (T₁)† T₂ with the da/a^{n+1} dV(b) ds
/// weights; Z is the Plancherel normalizer (2π)^n C_ψ.
pub fn hpsi_inner_product(t1: &CwtTensor, t2: &CwtTensor, z: f64) -> Result<Multivector> {
    if t1.dim() != t2.dim() || !t1.grid().approx_eq(t2.grid()) {
        return Err(CliffError::GridMismatch(
            "tensors live on different CWT grids".into(),
        ));
    }
    let mut acc = Multivector::zero(t1.dim());
    for ai in 0..t1.grid().scales().len() {
        let w_a = t1.grid().measure_weight(ai);
        for (si, (_, w_s)) in t1.grid().spins().iter().enumerate() {
            let lhs = t1.slice_field(ai, si);
            let rhs = t2.slice_field(ai, si);
            let ip = lhs.inner_product(&rhs)?;
            acc = acc.add(&ip.scaled(Complex64::new(w_a * w_s, 0.0)));
        }
    }
    Ok(acc.scaled(Complex64::new(1.0 / z, 0.0)))
}

/// Outcome of the isometry check: lhs is the raw weighted tensor energy,
/// rhs = Z ||f||^2, and their ratio tends to 1 under quadrature refinement.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PlancherelReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Weighted coefficient energy against Z ||f||^2 (the isometry identity).
pub fn plancherel_check(
    f: &CliffordField,
    psi: &MotherWavelet,
    grid: &CwtGrid,
    z: f64,
) -> Result<PlancherelReport> {
    let engine = SliceEngine::new(f, psi, grid)?;
    let spin_weights: Vec<f64> = grid.spins().weights().to_vec();
    let mut lhs = 0.0f64;
    engine.for_each(|ai, si, slice| {
        lhs += grid.measure_weight(ai) * spin_weights[si] * slice.norm_l2_squared();
        Ok(())
    })?;
    let rhs = z * f.norm_l2_squared();
    let ratio = if rhs == 0.0 { 1.0 } else { lhs / rhs };
    Ok(PlancherelReport { lhs, rhs, ratio })
}

/// Resynthesize f from its coefficient tensor:
/// f(x) = (1/Z) ΣΣΣ ψ^{a,b,s}(x) T(a,b,s) weights, daughters left-multiplying
/// the coefficients. Evaluated per (a, s) through the convolution theorem and
/// accumulated in the frequency domain.
pub fn reconstruct(tensor: &CwtTensor, psi: &MotherWavelet, z: f64) -> Result<CliffordField> {
    let grid = tensor.grid();
    let translations = grid.translations().clone();
    if !psi.field().grid().approx_eq(&translations) {
        return Err(CliffError::GridMismatch(
            "wavelet and tensor are sampled on different grids".into(),
        ));
    }
    let n = translations.dim();
    let blades = 1usize << n;
    let table = sign_table(n);
    let fft = CenteredFft::new(&translations)?;
    let freq = translations.frequency_grid();
    let points = freq.len();
    let tau_half = (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);

    let mut acc = CliffordField::zeros(freq.clone(), n);
    acc.set_domain(Domain::Frequency);

    let mut xi = vec![0.0f64; n];
    let mut arg = vec![0.0f64; n];
    let mut tmp = vec![Complex64::ZERO; blades];
    let mut phi = vec![Complex64::ZERO; blades];
    for (si, (s, w_s)) in grid.spins().iter().enumerate() {
        let sbar = s.conjugate();
        let s_left = s.multivector().coeffs().to_vec();
        let s_right = sbar.multivector().coeffs().to_vec();
        // rotated frequencies shared across scales
        let mut coords = vec![0.0f64; points * n];
        for p in 0..points {
            freq.point(p, &mut xi);
            let r = sbar.rotate_unchecked(&Vector::new(xi.clone()));
            coords[p * n..(p + 1) * n].copy_from_slice(r.components());
        }
        for (ai, &a) in grid.scales().iter().enumerate() {
            let weight = grid.measure_weight(ai) * w_s;
            let prefactor = a.powf(n as f64 / 2.0) * tau_half * weight / z;
            let slice = tensor.slice_field(ai, si);
            let slice_hat = fft.forward_field(&slice);
            let data = acc.data_mut();
            for p in 0..points {
                for (d, slot) in arg.iter_mut().enumerate() {
                    *slot = a * coords[p * n + d];
                }
                // Φ̂(ξ) = a^{n/2} s ψ̂(a s̄ξs) s̄, applied on the left
                let spec = psi.spectrum_at(&arg);
                tmp.iter_mut().for_each(|c| *c = Complex64::ZERO);
                crate::algebra::gp_accumulate(table, &s_left, spec.coeffs(), &mut tmp);
                phi.iter_mut().for_each(|c| *c = Complex64::ZERO);
                crate::algebra::gp_accumulate(table, &tmp, &s_right, &mut phi);
                for c in phi.iter_mut() {
                    *c *= prefactor;
                }
                let out = &mut data[p * blades..(p + 1) * blades];
                crate::algebra::gp_accumulate(table, &phi, slice_hat.sample_coeffs(p), out);
            }
        }
    }
    cft_inverse(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar_quadrature;
    use crate::testutil;
    use crate::wavelet::plancherel_normalizer;
    use std::f64::consts::PI;

    fn reference_psi(points: usize, half_span: f64) -> MotherWavelet {
        MotherWavelet::vector_gaussian(GridSpec::centered_span(2, points, half_span).unwrap())
            .unwrap()
    }

    #[test]
    fn daughter_identity_parameters() {
        let psi = reference_psi(33, 8.0);
        let d = make_daughter(&psi, 1.0, &Vector::zero(2), &Spinor::identity(2)).unwrap();
        assert!(d.support_warning.is_none());
        assert!(d.field.max_coeff_diff(psi.field()) < 1e-14);
    }

    #[test]
    fn daughter_pure_dilation() {
        let psi = reference_psi(65, 8.0);
        let d = make_daughter(&psi, 2.0, &Vector::zero(2), &Spinor::identity(2)).unwrap();
        let grid = psi.field().grid().clone();
        let expected = CliffordField::from_fn(grid, 2, |x| {
            let y: Vec<f64> = x.iter().map(|c| c / 2.0).collect();
            psi.value_at(&y).scaled(Complex64::new(0.5, 0.0))
        });
        assert!(d.field.max_coeff_diff(&expected) < 1e-10);
        // support 2*8 > 8: reported, not fatal
        assert!(d.support_warning.is_some());
    }

    #[test]
    fn daughter_norm_preservation() {
        let psi = reference_psi(65, 8.0);
        let base = psi.field().norm_l2();
        let mut rng = testutil::rng(17);
        for _ in 0..20 {
            use rand::Rng;
            let a = 2f64.powf(rng.random_range(-1.0..1.0));
            let s = Spinor::from_angle(rng.random_range(0.0..PI));
            let d = make_daughter(&psi, a, &Vector::zero(2), &s).unwrap();
            let norm = d.field.norm_l2();
            assert!((norm - base).abs() <= 1e-3 * base, "a={a}: {norm} vs {base}");
        }
    }

    #[test]
    fn daughter_rejects_bad_parameters() {
        let psi = reference_psi(17, 4.0);
        assert!(matches!(
            make_daughter(&psi, -1.0, &Vector::zero(2), &Spinor::identity(2)),
            Err(CliffError::NonPositiveScale(_))
        ));
        let off = Vector::new(vec![0.13, 0.0]);
        assert!(matches!(
            make_daughter(&psi, 1.0, &off, &Spinor::identity(2)),
            Err(CliffError::OffGridTranslation(_))
        ));
    }

    fn small_grid() -> (MotherWavelet, CwtGrid) {
        let psi = reference_psi(17, 6.0);
        let spins = haar_quadrature(2, 4).unwrap();
        let grid = CwtGrid::log_spaced(0.5, 2.0, 3, spins, psi.field().grid().clone()).unwrap();
        (psi, grid)
    }

    #[test]
    fn weights_reproduce_log_measure() {
        let (_, grid) = small_grid();
        // stored weights times a^n recover ∫ da/a over [a_min, a_max]
        let n = 2;
        let total: f64 = (0..grid.scales().len())
            .map(|i| grid.measure_weight(i) * grid.scales()[i].powi(n))
            .sum();
        let expected = (grid.scales().last().unwrap() / grid.scales()[0]).ln();
        assert!((total - expected).abs() <= 1e-3 * expected);
    }

    #[test]
    fn fast_path_agrees_with_direct_definition() {
        // 17^2 window with scales sized so the daughters and their spectra
        // both fit: cyclic wrap and band truncation stay below 1e-6.
        // Five spin nodes, so an orientation error in the s · s̄ sandwich
        // cannot hide behind -4φ ≡ 0 (mod 2π).
        let psi = reference_psi(17, 6.0);
        let spins = haar_quadrature(2, 5).unwrap();
        let grid = CwtGrid::log_spaced(0.8, 0.95, 3, spins, psi.field().grid().clone()).unwrap();
        let f = CliffordField::from_fn(grid.translations().clone(), 2, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let env = (-r2 / (2.0 * 1.1 * 1.1)).exp();
            let mut mv = Multivector::zero(2);
            mv.set_coeff(0, Complex64::new(env, 0.3 * env));
            mv.set_coeff(0b01, Complex64::new(-0.6 * env, 0.2 * env));
            mv.set_coeff(0b10, Complex64::new(0.5 * env, 0.0));
            mv.set_coeff(0b11, Complex64::new(0.0, 0.8 * env));
            mv
        });
        let tensor = cwt_analyze(&f, &psi, &grid).unwrap();
        let translations = grid.translations().clone();
        let global_max = tensor
            .data()
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        let mut worst = 0.0f64;
        for ai in 0..grid.scales().len() {
            for si in 0..grid.spins().len() {
                for point in [0usize, 40, 144, 288] {
                    let b = Vector::new(translations.point_vec(point));
                    let s = grid.spins().nodes()[si].clone();
                    let direct = cwt_direct(&f, &psi, grid.scales()[ai], &b, &s).unwrap();
                    let fast = tensor.coefficient(ai, si, point);
                    worst = worst.max(fast.sub(&direct).magnitude() / global_max);
                }
            }
        }
        assert!(worst <= 1e-6, "fast vs direct relative deviation {worst}");
    }

    #[test]
    fn transform_of_zero_field_is_zero() {
        let (psi, grid) = small_grid();
        let f = CliffordField::zeros(grid.translations().clone(), 2);
        let tensor = cwt_analyze(&f, &psi, &grid).unwrap();
        assert!(tensor.data().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn self_coefficient_at_identity_is_norm_squared() {
        // T_ψ[ψ](1, 0, 1) = <ψ, ψ> = ||ψ||^2 = π for the vector Gaussian
        let psi = reference_psi(65, 8.0);
        let spins = haar_quadrature(2, 4).unwrap();
        let grid = CwtGrid::log_spaced(0.5, 2.0, 3, spins, psi.field().grid().clone()).unwrap();
        let tensor = cwt_analyze(psi.field(), &psi, &grid).unwrap();
        // scale index 1 is a = 1, spin index 0 is s = 1, midpoint is b = 0
        assert!((grid.scales()[1] - 1.0).abs() < 1e-12);
        let mid = grid.translations().len() / 2;
        let coeff = tensor.coefficient(1, 0, mid);
        assert!((coeff.scalar_part().re - PI).abs() < 1e-6, "{coeff:?}");
        assert!(coeff.max_magnitude_outside_grade(0) < 1e-9);
    }

    #[test]
    fn matched_filter_peaks_at_generating_parameters() {
        let psi = reference_psi(33, 8.0);
        let spins = haar_quadrature(2, 4).unwrap();
        // octave scales so a = 2 is a node
        let grid = CwtGrid::log_spaced(0.5, 4.0, 4, spins, psi.field().grid().clone()).unwrap();
        assert!((grid.scales()[2] - 2.0).abs() < 1e-12);
        let b0 = Vector::new(vec![1.0, -0.5]);
        let f = make_daughter(&psi, 2.0, &b0, &Spinor::identity(2)).unwrap().field;
        let tensor = cwt_analyze(&f, &psi, &grid).unwrap();

        let translations = grid.translations().clone();
        let mut best = (0usize, 0usize, 0usize, 0.0f64);
        for ai in 0..grid.scales().len() {
            for si in 0..grid.spins().len() {
                for p in 0..translations.len() {
                    let mag = tensor.coefficient(ai, si, p).scalar_part().norm();
                    if mag > best.3 {
                        best = (ai, si, p, mag);
                    }
                }
            }
        }
        assert_eq!(best.0, 2, "peak scale index");
        let peak_b = translations.point_vec(best.2);
        let dx = translations.spacing()[0];
        assert!((peak_b[0] - b0.components()[0]).abs() <= dx + 1e-12);
        assert!((peak_b[1] - b0.components()[1]).abs() <= dx + 1e-12);
        // the peak spin acts as the identity rotation (s = ±1)
        let s_peak = &grid.spins().nodes()[best.1];
        let r = s_peak.rotate(&Vector::basis(2, 1)).unwrap();
        assert!((r.components()[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn linearity_of_the_transform() {
        let (psi, grid) = small_grid();
        let f = CliffordField::from_fn(grid.translations().clone(), 2, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Multivector::real_scalar(2, (-r2 / 2.0).exp())
        });
        let g = CliffordField::from_fn(grid.translations().clone(), 2, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let mut mv = Multivector::zero(2);
            mv.set_coeff(0b01, Complex64::new(x[1] * (-r2 / 2.0).exp(), 0.1));
            mv
        });
        let alpha = Complex64::new(0.6, -0.8);
        let combo = f.scaled(alpha).add(&g).unwrap();
        let t_combo = cwt_analyze(&combo, &psi, &grid).unwrap();
        let t_f = cwt_analyze(&f, &psi, &grid).unwrap();
        let t_g = cwt_analyze(&g, &psi, &grid).unwrap();
        let max = t_combo
            .data()
            .iter()
            .zip(t_f.data().iter().zip(t_g.data()))
            .map(|(c, (a, b))| (c - (a * alpha + b)).norm())
            .fold(0.0, f64::max);
        assert!(max <= 1e-10);
    }

    #[test]
    fn covariance_under_grid_translations() {
        // analyzing a cyclically shifted field shifts the tensor in b
        let (psi, grid) = small_grid();
        let translations = grid.translations().clone();
        let shape = translations.shape().to_vec();
        let f = CliffordField::from_fn(translations.clone(), 2, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Multivector::real_scalar(2, (-r2 / 2.0).exp() * (1.0 + 0.3 * x[0]))
        });
        let shift = [3usize, 5];
        let mut shifted = CliffordField::zeros(translations.clone(), 2);
        for p in 0..translations.len() {
            let mut idx = vec![0usize; 2];
            translations.unravel(p, &mut idx);
            let src = [
                (idx[0] + shape[0] - shift[0]) % shape[0],
                (idx[1] + shape[1] - shift[1]) % shape[1],
            ];
            let v = f.sample(translations.flatten(&src));
            shifted.set_sample(p, &v);
        }
        let t = cwt_analyze(&f, &psi, &grid).unwrap();
        let t_shifted = cwt_analyze(&shifted, &psi, &grid).unwrap();
        let mut worst = 0.0f64;
        for ai in 0..grid.scales().len() {
            for si in 0..grid.spins().len() {
                let a = t.slice_field(ai, si);
                let b = t_shifted.slice_field(ai, si);
                for p in 0..translations.len() {
                    let mut idx = vec![0usize; 2];
                    translations.unravel(p, &mut idx);
                    let moved = [(idx[0] + shift[0]) % shape[0], (idx[1] + shift[1]) % shape[1]];
                    let q = translations.flatten(&moved);
                    let diff = a
                        .sample_coeffs(p)
                        .iter()
                        .zip(b.sample_coeffs(q))
                        .map(|(x, y)| (x - y).norm())
                        .fold(0.0, f64::max);
                    worst = worst.max(diff);
                }
            }
        }
        assert!(worst <= 1e-10, "covariance defect {worst}");
    }

    fn reference_field(grid: &GridSpec) -> CliffordField {
        CliffordField::from_fn(grid.clone(), 2, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let phase = 1.25 * (0.6 * x[0] + 0.8 * x[1]);
            let env = (-r2 / (2.0 * 4.0)).exp();
            let mut mv = Multivector::zero(2);
            mv.set_coeff(0, Complex64::from_polar(env, phase));
            mv.set_coeff(0b11, Complex64::from_polar(0.4 * env, phase + 0.7));
            mv
        })
    }

    #[test]
    fn isometry_and_polarization() {
        let psi = reference_psi(33, 12.0);
        let spins = haar_quadrature(2, 16).unwrap();
        let grid =
            CwtGrid::log_spaced(0.125, 8.0, 32, spins, psi.field().grid().clone()).unwrap();
        let z = plancherel_normalizer(2, 0.5);

        let f = reference_field(grid.translations());
        let report = plancherel_check(&f, &psi, &grid, z).unwrap();
        assert!(
            report.ratio > 0.95 && report.ratio < 1.05,
            "plancherel ratio {}",
            report.ratio
        );

        // [T_f, T_f] ≈ ||f||^2 through the H_ψ inner product
        let t_f = cwt_analyze(&f, &psi, &grid).unwrap();
        let self_ip = hpsi_inner_product(&t_f, &t_f, z).unwrap();
        let f2 = f.norm_l2_squared();
        assert!((self_ip.scalar_part().re - f2).abs() <= 0.05 * f2);

        // polarization against a second field
        let g = CliffordField::from_fn(grid.translations().clone(), 2, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let phase = -1.3 * x[0] + 0.4 * x[1];
            Multivector::scalar(2, Complex64::from_polar((-r2 / 6.0).exp(), phase))
        });
        let t_g = cwt_analyze(&g, &psi, &grid).unwrap();
        let lhs = hpsi_inner_product(&t_f, &t_g, z).unwrap();
        let rhs = f.inner_product(&g).unwrap();
        let norm_scale = f.norm_l2() * g.norm_l2();
        assert!(
            lhs.sub(&rhs).magnitude() <= 0.05 * norm_scale,
            "polarization defect {} vs scale {}",
            lhs.sub(&rhs).magnitude(),
            norm_scale
        );

        // zero tensor pairs to zero
        let zero = CwtTensor::zeros(grid.clone(), 2);
        assert!(hpsi_inner_product(&t_f, &zero, z).unwrap().is_zero(0.0));
    }

    #[test]
    fn plancherel_ratio_stable_under_spacing_halving() {
        // same span, doubled point count: the ratio moves by well under 1%
        let spins = haar_quadrature(2, 8).unwrap();
        let z = plancherel_normalizer(2, 0.5);
        let mut ratios = Vec::new();
        for shape in [33usize, 65] {
            let psi = MotherWavelet::vector_gaussian(
                GridSpec::centered_span(2, shape, 12.0).unwrap(),
            )
            .unwrap();
            let grid = CwtGrid::log_spaced(
                0.125,
                8.0,
                32,
                spins.clone(),
                psi.field().grid().clone(),
            )
            .unwrap();
            let f = reference_field(grid.translations());
            ratios.push(plancherel_check(&f, &psi, &grid, z).unwrap().ratio);
        }
        assert!(
            (ratios[1] - ratios[0]).abs() <= 0.01 * ratios[0],
            "ratios {ratios:?}"
        );
    }

    #[test]
    fn reconstruction_of_enveloped_field() {
        let psi = reference_psi(33, 12.0);
        let spins = haar_quadrature(2, 12).unwrap();
        let z = plancherel_normalizer(2, 0.5);
        let f = reference_field(psi.field().grid());

        let mut errors = Vec::new();
        for (a_min, a_max) in [(0.5, 2.0), (0.25, 4.0), (0.125, 8.0)] {
            let grid = CwtGrid::log_spaced(
                a_min,
                a_max,
                32,
                spins.clone(),
                psi.field().grid().clone(),
            )
            .unwrap();
            let tensor = cwt_analyze(&f, &psi, &grid).unwrap();
            let rec = reconstruct(&tensor, &psi, z).unwrap();
            let err = rec.sub(&f).unwrap().norm_l2() / f.norm_l2();
            errors.push(err);
        }
        assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
        assert!(errors[2] <= 0.05, "reconstruction error {errors:?}");

        // zero tensor reconstructs the zero field
        let grid =
            CwtGrid::log_spaced(0.5, 2.0, 4, spins, psi.field().grid().clone()).unwrap();
        let zero = CwtTensor::zeros(grid, 2);
        let rec = reconstruct(&zero, &psi, z).unwrap();
        assert!(rec.max_abs() == 0.0);
    }

    #[test]
    fn grid_mismatch_detected() {
        let (psi, grid) = small_grid();
        let other = GridSpec::centered_span(2, 9, 6.0).unwrap();
        let f = CliffordField::zeros(other, 2);
        assert!(matches!(
            cwt_analyze(&f, &psi, &grid),
            Err(CliffError::GridMismatch(_))
        ));
    }
}
