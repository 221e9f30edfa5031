//! Sampled Clifford-valued functions f: R^n -> C_n on regular grids,
//! L^1/L^2 norms, the Hermitian L^2 inner product, and coordinate
//! multiplication operators.
//!
//! All integrals are plain Riemann sums weighted by the cell volume. Grids
//! are odd-sized and symmetric about the origin by default, so x = 0 and the
//! translation b = 0 are exact sample points.

use num_complex::Complex64;

use crate::algebra::{gp_accumulate, sign_table, Multivector};
use crate::error::{CliffError, Result};

/// Whether samples live on the spatial or the frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Space,
    Frequency,
}

/// A regular rectangular sampling lattice in R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    shape: Vec<usize>,
    spacing: Vec<f64>,
    origin: Vec<f64>,
}

impl GridSpec {
    pub fn new(shape: Vec<usize>, spacing: Vec<f64>, origin: Vec<f64>) -> Result<GridSpec> {
        let n = shape.len();
        if n == 0 || n > crate::algebra::MAX_DIM {
            return Err(CliffError::UnsupportedDimension(n));
        }
        if spacing.len() != n || origin.len() != n {
            return Err(CliffError::Config(
                "shape, spacing and origin must have equal lengths".into(),
            ));
        }
        if shape.iter().any(|&m| m == 0) || spacing.iter().any(|&d| !(d > 0.0)) {
            return Err(CliffError::Config("grid axes must be non-empty with positive spacing".into()));
        }
        Ok(GridSpec { shape, spacing, origin })
    }

    /// Odd-sized grid centered on the origin: m points per axis with the given
    /// spacing, so that x = 0 is a sample point.
    pub fn centered(n: usize, points_per_axis: usize, spacing: f64) -> Result<GridSpec> {
        let half = (points_per_axis - 1) as f64 / 2.0;
        GridSpec::new(
            vec![points_per_axis; n],
            vec![spacing; n],
            vec![-half * spacing; n],
        )
    }

    /// Centered grid spanning [-half_span, half_span] per axis with m points.
    pub fn centered_span(n: usize, points_per_axis: usize, half_span: f64) -> Result<GridSpec> {
        if points_per_axis < 2 {
            return Err(CliffError::Config("need at least two points per axis".into()));
        }
        let spacing = 2.0 * half_span / (points_per_axis - 1) as f64;
        GridSpec::centered(n, points_per_axis, spacing)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell volume dV = prod of spacings.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn axis_coord(&self, axis: usize, index: usize) -> f64 {
        self.origin[axis] + index as f64 * self.spacing[axis]
    }

    /// Decompose a flat row-major index into per-axis indices.
    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for axis in (0..self.dim()).rev() {
            out[axis] = flat % self.shape[axis];
            flat /= self.shape[axis];
        }
    }

    pub fn flatten(&self, indices: &[usize]) -> usize {
        let mut flat = 0;
        for (axis, &i) in indices.iter().enumerate() {
            flat = flat * self.shape[axis] + i;
        }
        flat
    }

    /// Coordinates of the flat row-major point index.
    pub fn point(&self, flat: usize, out: &mut [f64]) {
        let mut rem = flat;
        for axis in (0..self.dim()).rev() {
            let i = rem % self.shape[axis];
            rem /= self.shape[axis];
            out[axis] = self.axis_coord(axis, i);
        }
    }

    pub fn point_vec(&self, flat: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.point(flat, &mut out);
        out
    }

    /// True when every axis has odd length and the origin sits at the center.
    pub fn check_centered_odd(&self) -> Result<()> {
        for axis in 0..self.dim() {
            let m = self.shape[axis];
            if m % 2 == 0 {
                return Err(CliffError::EvenAxis(axis, m));
            }
            let expected = -((m - 1) as f64) / 2.0 * self.spacing[axis];
            if (self.origin[axis] - expected).abs() > 1e-9 * self.spacing[axis] {
                return Err(CliffError::NotCentered(axis));
            }
        }
        Ok(())
    }

    /// The dual (frequency) grid: Δξ = 2π/(m Δx) per axis, centered so that
    /// ξ = 0 is a sample point for odd shapes.
    pub fn frequency_grid(&self) -> GridSpec {
        let spacing: Vec<f64> = self
            .shape
            .iter()
            .zip(&self.spacing)
            .map(|(&m, &dx)| 2.0 * std::f64::consts::PI / (m as f64 * dx))
            .collect();
        let origin = self
            .shape
            .iter()
            .zip(&spacing)
            .map(|(&m, &dk)| -((m - 1) as f64) / 2.0 * dk)
            .collect();
        GridSpec {
            shape: self.shape.clone(),
            spacing,
            origin,
        }
    }

    pub fn approx_eq(&self, other: &GridSpec) -> bool {
        self.shape == other.shape
            && self
                .spacing
                .iter()
                .zip(&other.spacing)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0))
            && self
                .origin
                .iter()
                .zip(&other.origin)
                .all(|(a, b)| (a - b).abs() <= 1e-9)
    }
}

/// A multivector-valued function sampled on a grid.
///
/// Storage is dense and flat: point-major (row-major over axes), blade-minor,
/// matching the on-disk layout.
#[derive(Debug, Clone)]
pub struct CliffordField {
    grid: GridSpec,
    dim: usize,
    domain: Domain,
    data: Vec<Complex64>,
}

/// Fixed reduction chunk so sums are independent of thread count and carry
/// pairwise-summation accuracy.
const REDUCE_CHUNK: usize = 4096;

fn pairwise_sum(values: &mut Vec<Complex64>) -> Complex64 {
    // fold adjacent pairs until one value remains
    while values.len() > 1 {
        let half = values.len().div_ceil(2);
        for i in 0..values.len() / 2 {
            values[i] = values[2 * i] + values[2 * i + 1];
        }
        if values.len() % 2 == 1 {
            let last = *values.last().unwrap();
            values[half - 1] = last;
        }
        values.truncate(half);
    }
    values.first().copied().unwrap_or(Complex64::ZERO)
}

pub(crate) fn pairwise_sum_f64(values: &[f64]) -> f64 {
    fn go(v: &[f64]) -> f64 {
        if v.len() <= 64 {
            return v.iter().sum();
        }
        let mid = v.len() / 2;
        go(&v[..mid]) + go(&v[mid..])
    }
    go(values)
}

impl CliffordField {
    pub fn zeros(grid: GridSpec, dim: usize) -> CliffordField {
        let len = grid.len() << dim;
        CliffordField {
            grid,
            dim,
            domain: Domain::Space,
            data: vec![Complex64::ZERO; len],
        }
    }

    /// Sample a function of the point coordinates.
    pub fn from_fn(
        grid: GridSpec,
        dim: usize,
        mut f: impl FnMut(&[f64]) -> Multivector,
    ) -> CliffordField {
        let mut field = CliffordField::zeros(grid, dim);
        let blades = 1usize << dim;
        let mut x = vec![0.0; field.grid.dim()];
        for p in 0..field.grid.len() {
            field.grid.point(p, &mut x);
            let mv = f(&x);
            assert_eq!(mv.dim(), dim, "sampled multivector has wrong dimension");
            field.data[p * blades..(p + 1) * blades].copy_from_slice(mv.coeffs());
        }
        field
    }

    pub fn from_raw(grid: GridSpec, dim: usize, domain: Domain, data: Vec<Complex64>) -> Result<CliffordField> {
        if data.len() != grid.len() << dim {
            return Err(CliffError::Config("field payload length mismatch".into()));
        }
        Ok(CliffordField { grid, dim, domain, data })
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Dimension of the Clifford algebra (= number of generators).
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn blades(&self) -> usize {
        1 << self.dim
    }

    #[inline]
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn set_domain(&mut self, domain: Domain) {
        self.domain = domain;
    }

    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Coefficients of the sample at a flat point index.
    #[inline]
    pub fn sample_coeffs(&self, point: usize) -> &[Complex64] {
        let b = self.blades();
        &self.data[point * b..(point + 1) * b]
    }

    pub fn sample(&self, point: usize) -> Multivector {
        Multivector::from_coeffs(self.dim, self.sample_coeffs(point).to_vec())
    }

    pub fn set_sample(&mut self, point: usize, mv: &Multivector) {
        let b = self.blades();
        self.data[point * b..(point + 1) * b].copy_from_slice(mv.coeffs());
    }

    fn check_compatible(&self, other: &CliffordField) -> Result<()> {
        if self.dim != other.dim {
            return Err(CliffError::DimensionMismatch(self.dim, other.dim));
        }
        if !self.grid.approx_eq(&other.grid) {
            return Err(CliffError::GridMismatch(
                "fields are sampled on different grids".into(),
            ));
        }
        if self.domain != other.domain {
            return Err(CliffError::GridMismatch(
                "fields live on different domains (space vs frequency)".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &CliffordField) -> Result<CliffordField> {
        self.check_compatible(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(CliffordField { grid: self.grid.clone(), dim: self.dim, domain: self.domain, data })
    }

    pub fn sub(&self, other: &CliffordField) -> Result<CliffordField> {
        self.check_compatible(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(CliffordField { grid: self.grid.clone(), dim: self.dim, domain: self.domain, data })
    }

    /// Scale every sample by a complex scalar.
    pub fn scaled(&self, factor: Complex64) -> CliffordField {
        CliffordField {
            grid: self.grid.clone(),
            dim: self.dim,
            domain: self.domain,
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    /// Left-multiply every sample by a fixed multivector.
    pub fn left_mul(&self, mv: &Multivector) -> Result<CliffordField> {
        if mv.dim() != self.dim {
            return Err(CliffError::DimensionMismatch(mv.dim(), self.dim));
        }
        let table = sign_table(self.dim);
        let blades = self.blades();
        let mut out = CliffordField::zeros(self.grid.clone(), self.dim);
        out.domain = self.domain;
        for p in 0..self.grid.len() {
            gp_accumulate(
                table,
                mv.coeffs(),
                &self.data[p * blades..(p + 1) * blades],
                &mut out.data[p * blades..(p + 1) * blades],
            );
        }
        Ok(out)
    }

    /// Hermitian L^2 inner product <f,g> = sum_x f(x)† g(x) dV, a multivector.
    pub fn inner_product(&self, other: &CliffordField) -> Result<Multivector> {
        self.check_compatible(other)?;
        let table = sign_table(self.dim);
        let blades = self.blades();
        let points = self.grid.len();
        let dv = self.grid.cell_volume();

        let mut chunk_sums: Vec<Vec<Complex64>> = Vec::with_capacity(points.div_ceil(REDUCE_CHUNK));
        let mut dagger = vec![Complex64::ZERO; blades];
        let mut start = 0;
        while start < points {
            let end = (start + REDUCE_CHUNK).min(points);
            let mut acc = vec![Complex64::ZERO; blades];
            for p in start..end {
                let a = self.sample_coeffs(p);
                let b = other.sample_coeffs(p);
                for (mask, c) in a.iter().enumerate() {
                    let k = crate::algebra::grade(mask);
                    let s = if (k * (k + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    dagger[mask] = s * c.conj();
                }
                gp_accumulate(table, &dagger, b, &mut acc);
            }
            chunk_sums.push(acc);
            start = end;
        }

        let mut out = Multivector::zero(self.dim);
        for mask in 0..blades {
            let mut lane: Vec<Complex64> = chunk_sums.iter().map(|c| c[mask]).collect();
            out.set_coeff(mask, pairwise_sum(&mut lane) * dv);
        }
        Ok(out)
    }

    /// L^2 norm: square root of the scalar part of <f,f>.
    pub fn norm_l2(&self) -> f64 {
        self.norm_l2_squared().sqrt()
    }

    /// Scalar part of <f,f> = sum_x |f(x)|^2 dV, computed without products.
    pub fn norm_l2_squared(&self) -> f64 {
        let sums: Vec<f64> = self
            .data
            .chunks(REDUCE_CHUNK)
            .map(|chunk| chunk.iter().map(|c| c.norm_sqr()).sum::<f64>())
            .collect();
        pairwise_sum_f64(&sums) * self.grid.cell_volume()
    }

    /// L^1 norm with |f(x)| = sqrt(sum_A |f_A(x)|^2).
    pub fn norm_l1(&self) -> f64 {
        let blades = self.blades();
        let sums: Vec<f64> = self
            .data
            .chunks(REDUCE_CHUNK * blades)
            .map(|chunk| {
                chunk
                    .chunks(blades)
                    .map(|s| s.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
                    .sum::<f64>()
            })
            .collect();
        pairwise_sum_f64(&sums) * self.grid.cell_volume()
    }

    /// Pointwise multiplication by the k-th coordinate (1-based): A_k f = x_k f.
    pub fn coordinate_multiply(&self, axis: usize) -> Result<CliffordField> {
        if axis == 0 || axis > self.grid.dim() {
            return Err(CliffError::AxisOutOfRange { axis, n: self.grid.dim() });
        }
        let blades = self.blades();
        let mut out = self.clone();
        let mut idx = vec![0usize; self.grid.dim()];
        for p in 0..self.grid.len() {
            self.grid.unravel(p, &mut idx);
            let xk = self.grid.axis_coord(axis - 1, idx[axis - 1]);
            for c in &mut out.data[p * blades..(p + 1) * blades] {
                *c *= xk;
            }
        }
        Ok(out)
    }

    /// Largest |f| over boundary points (any axis index at its extreme),
    /// relative decay diagnostics for the L^1-proxy checks.
    pub fn boundary_max(&self) -> f64 {
        let blades = self.blades();
        let mut idx = vec![0usize; self.grid.dim()];
        let mut max = 0.0f64;
        for p in 0..self.grid.len() {
            self.grid.unravel(p, &mut idx);
            let on_boundary = idx
                .iter()
                .zip(self.grid.shape())
                .any(|(&i, &m)| i == 0 || i + 1 == m);
            if on_boundary {
                let mag = self.data[p * blades..(p + 1) * blades]
                    .iter()
                    .map(|c| c.norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                max = max.max(mag);
            }
        }
        max
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_coeff_diff(&self, other: &CliffordField) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Both sides of the Cauchy-Schwarz comparison: lhs = |<f,g>| (Frobenius
/// magnitude of the multivector), rhs = ||f|| ||g||. Returned for reporting;
/// the magnitude form is not asserted here because the paper leaves |<f,g>|
/// undefined for multivector values.
pub fn cauchy_schwarz_check(f: &CliffordField, g: &CliffordField) -> Result<(f64, f64)> {
    let ip = f.inner_product(g)?;
    Ok((ip.magnitude(), f.norm_l2() * g.norm_l2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil;
    use std::f64::consts::PI;

    fn gaussian_field(n: usize, points: usize, half_span: f64) -> CliffordField {
        let grid = GridSpec::centered_span(n, points, half_span).unwrap();
        CliffordField::from_fn(grid, n, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Multivector::real_scalar(n, (-r2 / 2.0).exp())
        })
    }

    #[test]
    fn gaussian_l2_norm_squared_is_pi() {
        let f = gaussian_field(2, 65, 8.0);
        let ip = f.inner_product(&f).unwrap();
        assert!((ip.scalar_part().re - PI).abs() < 1e-6);
        assert!(ip.max_magnitude_outside_grade(0) < 1e-14);
        assert!((f.norm_l2() * f.norm_l2() - PI).abs() < 1e-6);
    }

    #[test]
    fn inner_product_with_zero() {
        let f = gaussian_field(2, 33, 8.0);
        let z = CliffordField::zeros(f.grid().clone(), 2);
        assert!(f.inner_product(&z).unwrap().is_zero(0.0));
        assert_eq!(z.norm_l2(), 0.0);
        assert_eq!(z.norm_l1(), 0.0);
    }

    #[test]
    fn left_multiplication_by_e1_preserves_scalar_norm() {
        let f = gaussian_field(2, 33, 8.0);
        let e1f = f.left_mul(&Multivector::basis_vector(2, 1)).unwrap();
        let a = e1f.inner_product(&e1f).unwrap();
        let b = f.inner_product(&f).unwrap();
        assert!(a.approx_eq(&b, 1e-10));
    }

    #[test]
    fn scaling_homogeneity() {
        let f = gaussian_field(2, 33, 8.0);
        let c = Complex64::new(-1.5, 2.0);
        let cf = f.scaled(c);
        assert!((cf.norm_l2() - c.norm() * f.norm_l2()).abs() < 1e-12);
    }

    #[test]
    fn coordinate_moment_of_gaussian() {
        let f = gaussian_field(2, 65, 8.0);
        for axis in [1usize, 2] {
            let xf = f.coordinate_multiply(axis).unwrap();
            let norm2 = xf.norm_l2_squared();
            assert!((norm2 - PI / 2.0).abs() < 1e-6, "axis {axis}: {norm2}");
        }
        // constant field times x1 equals the coordinate itself
        let grid = GridSpec::centered_span(2, 5, 2.0).unwrap();
        let ones = CliffordField::from_fn(grid.clone(), 2, |_| Multivector::real_scalar(2, 1.0));
        let x1 = ones.coordinate_multiply(1).unwrap();
        for p in 0..grid.len() {
            let coords = grid.point_vec(p);
            assert_eq!(x1.sample_coeffs(p)[0].re, coords[0]);
        }
    }

    #[test]
    fn coordinate_multiplications_commute() {
        let f = gaussian_field(2, 17, 4.0);
        let a = f.coordinate_multiply(1).unwrap().coordinate_multiply(2).unwrap();
        let b = f.coordinate_multiply(2).unwrap().coordinate_multiply(1).unwrap();
        // pointwise scalars commute; only the final rounding may differ
        assert!(a.max_coeff_diff(&b) <= 1e-15);
    }

    #[test]
    fn axis_out_of_range() {
        let f = gaussian_field(2, 9, 4.0);
        assert!(matches!(
            f.coordinate_multiply(3),
            Err(CliffError::AxisOutOfRange { axis: 3, n: 2 })
        ));
        assert!(matches!(
            f.coordinate_multiply(0),
            Err(CliffError::AxisOutOfRange { axis: 0, n: 2 })
        ));
    }

    #[test]
    fn sesquilinearity_and_hermitian_symmetry() {
        let mut rng = testutil::rng(11);
        let grid = GridSpec::centered_span(2, 9, 3.0).unwrap();
        let rand_field = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut f = CliffordField::zeros(grid.clone(), 2);
            for p in 0..grid.len() {
                let mv = testutil::random_multivector(rng, 2);
                f.set_sample(p, &mv);
            }
            f
        };
        let f = rand_field(&mut rng);
        let g = rand_field(&mut rng);
        let h = rand_field(&mut rng);
        let c = Complex64::new(0.7, -1.2);

        // <f, g·c + h> = <f,g>·c + <f,h>
        let lhs = f.inner_product(&g.scaled(c).add(&h).unwrap()).unwrap();
        let rhs = f.inner_product(&g).unwrap().scaled(c).add(&f.inner_product(&h).unwrap());
        assert!(lhs.approx_eq(&rhs, 1e-12));

        // <f,g>† = <g,f>
        let fg = f.inner_product(&g).unwrap().hermitian_conjugate();
        let gf = g.inner_product(&f).unwrap();
        assert!(fg.approx_eq(&gf, 1e-12));
    }

    #[test]
    fn cauchy_schwarz_reporting() {
        let f = gaussian_field(2, 33, 8.0);
        let (lhs, rhs) = cauchy_schwarz_check(&f, &f).unwrap();
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
        assert!((lhs - f.norm_l2() * f.norm_l2()).abs() < 1e-10);

        let z = CliffordField::zeros(f.grid().clone(), 2);
        assert_eq!(cauchy_schwarz_check(&f, &z).unwrap(), (0.0, 0.0));

        // random smooth pair
        let g = CliffordField::from_fn(f.grid().clone(), 2, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let mut mv = Multivector::real_scalar(2, (x[0] * 0.7).sin() * (-r2 / 3.0).exp());
            mv.set_coeff(0b01, Complex64::new((x[1] * 0.4).cos() * (-r2 / 2.5).exp(), 0.0));
            mv
        });
        let (lhs, rhs) = cauchy_schwarz_check(&f, &g).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-10));
    }

    #[test]
    fn riemann_sum_converges_at_second_order_or_better() {
        // coarse spacings where the discretization error is visible
        let errs: Vec<f64> = [17usize, 33, 65]
            .iter()
            .map(|&m| {
                let f = gaussian_field(2, m, 8.0);
                (f.norm_l2_squared() - PI).abs().max(1e-13)
            })
            .collect();
        assert!(errs[1] <= errs[0] / 4.0, "errs = {errs:?}");
        assert!(errs[2] <= errs[1], "errs = {errs:?}");
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let f = gaussian_field(2, 9, 4.0);
        let g = gaussian_field(2, 11, 4.0);
        assert!(matches!(f.inner_product(&g), Err(CliffError::GridMismatch(_))));
    }

    #[test]
    fn frequency_grid_has_reciprocal_spacing() {
        let grid = GridSpec::centered_span(2, 65, 8.0).unwrap();
        let freq = grid.frequency_grid();
        let expected = 2.0 * PI / (65.0 * grid.spacing()[0]);
        assert!((freq.spacing()[0] - expected).abs() < 1e-15);
        // ξ = 0 is a sample point
        let mid = freq.len() / 2;
        assert!(freq.point_vec(mid).iter().all(|&c| c.abs() < 1e-12));
    }
}
