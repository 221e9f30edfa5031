//! Spinors, the rotation action x -> s x s̄, and quadrature over Spin(n)
//! with respect to Haar measure (normalized to total mass 1) for n in {2, 3}.

use std::path::Path;

use num_complex::Complex64;

use crate::algebra::{Multivector, Vector, DEFAULT_TOL};
use crate::error::{CliffError, Result};

/// A unit even-grade multivector; products of an even number of unit vectors.
#[derive(Debug, Clone)]
pub struct Spinor {
    mv: Multivector,
    /// Generating reflection directions, when the spinor was built from them.
    factors: Option<Vec<Vector>>,
}

impl Spinor {
    /// The identity spinor s = 1 (rotation = identity).
    pub fn identity(n: usize) -> Spinor {
        Spinor {
            mv: Multivector::real_scalar(n, 1.0),
            factors: None,
        }
    }

    /// Wrap an even-grade unit multivector, validating both properties.
    pub fn from_multivector(mv: Multivector) -> Result<Spinor> {
        let odd = mv.odd_part().magnitude();
        if odd > 1e-9 {
            return Err(CliffError::NotEvenGrade(odd));
        }
        let s = Spinor { mv, factors: None };
        s.check_unit()?;
        Ok(s)
    }

    /// s = ω1 ω2 ... ω2l for unit vectors ω_j; the rotation s x s̄ is the
    /// composition of the 2l hyperplane reflections R_{ω1} ∘ ... ∘ R_{ω2l}.
    pub fn from_vectors(omegas: &[Vector]) -> Result<Spinor> {
        if omegas.is_empty() || omegas.len() % 2 != 0 {
            return Err(CliffError::BadFactorCount(omegas.len()));
        }
        let n = omegas[0].dim();
        let mut mv = Multivector::real_scalar(n, 1.0);
        for w in omegas {
            if w.dim() != n {
                return Err(CliffError::DimensionMismatch(n, w.dim()));
            }
            let norm = w.norm();
            if (norm - 1.0).abs() > DEFAULT_TOL {
                return Err(CliffError::NonUnitVector(norm));
            }
            mv = &mv * &w.embed();
        }
        Ok(Spinor {
            mv,
            factors: Some(omegas.to_vec()),
        })
    }

    /// Spin(2) element s(φ) = cos φ + sin φ e12; rotates vectors by angle 2φ.
    pub fn from_angle(phi: f64) -> Spinor {
        let mut mv = Multivector::real_scalar(2, phi.cos());
        mv.set_coeff(0b11, Complex64::new(phi.sin(), 0.0));
        Spinor { mv, factors: None }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mv.dim()
    }

    pub fn multivector(&self) -> &Multivector {
        &self.mv
    }

    pub fn factors(&self) -> Option<&[Vector]> {
        self.factors.as_deref()
    }

    /// Clifford conjugate s̄; for a spinor this is also the group inverse.
    pub fn conjugate(&self) -> Spinor {
        Spinor {
            mv: self.mv.conjugation(),
            factors: None,
        }
    }

    fn unit_defect(&self) -> f64 {
        let prod = &self.mv * &self.mv.conjugation();
        let scalar = prod.scalar_part();
        let non_scalar = prod.max_magnitude_outside_grade(0);
        ((scalar - Complex64::ONE).norm()).max(non_scalar)
    }

    fn check_unit(&self) -> Result<()> {
        let defect = self.unit_defect();
        if defect > 1e-9 {
            return Err(CliffError::NonUnitSpinor(defect));
        }
        Ok(())
    }

    /// Rotation action T(x) = s x s̄; orthogonal, so |T(x)| = |x|.
    pub fn rotate(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim() {
            return Err(CliffError::DimensionMismatch(self.dim(), x.dim()));
        }
        self.check_unit()?;
        let sandwich = &(&self.mv * &x.embed()) * &self.mv.conjugation();
        sandwich.to_vector(1e-9)
    }

    /// `rotate` without the unit check, for quadrature inner loops.
    pub(crate) fn rotate_unchecked(&self, x: &Vector) -> Vector {
        let sandwich = &(&self.mv * &x.embed()) * &self.mv.conjugation();
        sandwich.to_vector(1e-6).expect("spinor sandwich of a vector is grade-1")
    }
}

/// Quadrature nodes and weights for integrals over Spin(n) against the
/// Haar measure of total mass 1.
#[derive(Debug, Clone)]
pub struct SpinQuadrature {
    n: usize,
    nodes: Vec<Spinor>,
    weights: Vec<f64>,
}

impl SpinQuadrature {
    /// Assemble a quadrature from explicit nodes and weights (file loading).
    pub fn from_parts(n: usize, nodes: Vec<Spinor>, weights: Vec<f64>) -> Result<SpinQuadrature> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(CliffError::Config(
                "spin quadrature needs equally many nodes and weights".into(),
            ));
        }
        if nodes.iter().any(|s| s.dim() != n) {
            return Err(CliffError::DimensionMismatch(n, nodes[0].dim()));
        }
        Ok(SpinQuadrature { n, nodes, weights })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Spinor] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Spinor, f64)> {
        self.nodes.iter().zip(self.weights.iter().copied())
    }

    /// Integrate a real-valued function of the spinor.
    pub fn integrate(&self, mut g: impl FnMut(&Spinor) -> f64) -> f64 {
        self.iter().map(|(s, w)| w * g(s)).sum()
    }

    /// Nodes and weights as CSV, one row per node: the 2^n blade coefficients
    /// of the spinor (real parts, ascending mask order), then the weight.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        let blades = 1usize << self.n;
        for mask in 0..blades {
            out.push_str(&format!("c{mask},"));
        }
        out.push_str("weight\n");
        for (s, w) in self.iter() {
            for mask in 0..blades {
                out.push_str(&format!("{:.16e},", s.multivector().coeff(mask).re));
            }
            out.push_str(&format!("{w:.16e}\n"));
        }
        crate::io::atomic_write(path, out.as_bytes())
    }
}

// Kronecker lattice directions from the plastic ratio; a deterministic
// low-discrepancy sequence in the unit square.
const PLASTIC_INV: f64 = 0.754_877_666_246_692_7;
const PLASTIC_INV2: f64 = 0.569_840_290_998_053_2;

/// Discretize the Haar integral over Spin(n), n in {2, 3}.
///
/// n = 2: uniform angle grid s(φ_j), φ_j = 2πj/N, weights 1/N.
/// n = 3: Spin(3) is the unit sphere of the even subalgebra
/// span{1, e12, e13, e23}; nodes come from a deterministic low-discrepancy
/// lattice pushed through equal-measure (Hopf) coordinates, weights 1/N.
pub fn haar_quadrature(n: usize, resolution: usize) -> Result<SpinQuadrature> {
    if resolution == 0 {
        return Err(CliffError::Config("spin resolution must be positive".into()));
    }
    let w = 1.0 / resolution as f64;
    match n {
        2 => {
            let nodes = (0..resolution)
                .map(|j| Spinor::from_angle(2.0 * std::f64::consts::PI * j as f64 / resolution as f64))
                .collect();
            Ok(SpinQuadrature {
                n,
                nodes,
                weights: vec![w; resolution],
            })
        }
        3 => {
            let tau = 2.0 * std::f64::consts::PI;
            let nodes = (0..resolution)
                .map(|k| {
                    // volume element on S^3 is uniform in (sin^2 θ, φ1, φ2)
                    let u = (k as f64 + 0.5) / resolution as f64;
                    let theta = u.sqrt().asin();
                    let phi1 = tau * (k as f64 * PLASTIC_INV).fract();
                    let phi2 = tau * (k as f64 * PLASTIC_INV2).fract();
                    let (a, b) = (theta.cos() * phi1.cos(), theta.cos() * phi1.sin());
                    let (c, d) = (theta.sin() * phi2.cos(), theta.sin() * phi2.sin());
                    let mut mv = Multivector::real_scalar(3, a);
                    mv.set_coeff(0b011, Complex64::new(b, 0.0)); // e12
                    mv.set_coeff(0b101, Complex64::new(c, 0.0)); // e13
                    mv.set_coeff(0b110, Complex64::new(d, 0.0)); // e23
                    Spinor { mv, factors: None }
                })
                .collect();
            Ok(SpinQuadrature {
                n,
                nodes,
                weights: vec![w; resolution],
            })
        }
        other => Err(CliffError::UnsupportedSpinDimension(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn spinor_from_pair_of_equal_vectors_is_minus_one() {
        let e1 = Vector::basis(2, 1);
        let s = Spinor::from_vectors(&[e1.clone(), e1]).unwrap();
        assert!(s
            .multivector()
            .approx_eq_default(&Multivector::real_scalar(2, -1.0)));
        // conjugation by -1 is the identity rotation
        let x = Vector::new(vec![0.3, -0.4]);
        let r = s.rotate(&x).unwrap();
        for (a, b) in r.components().iter().zip(x.components()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn spinor_from_e1_e2_is_e12() {
        let s = Spinor::from_vectors(&[Vector::basis(2, 1), Vector::basis(2, 2)]).unwrap();
        assert!(s
            .multivector()
            .approx_eq_default(&Multivector::basis_blade(2, 0b11)));
    }

    #[test]
    fn empty_and_odd_factor_lists_are_rejected() {
        assert!(matches!(
            Spinor::from_vectors(&[]),
            Err(CliffError::BadFactorCount(0))
        ));
        assert!(matches!(
            Spinor::from_vectors(&[Vector::basis(2, 1)]),
            Err(CliffError::BadFactorCount(1))
        ));
    }

    #[test]
    fn non_unit_factor_rejected() {
        let w = Vector::new(vec![0.5, 0.0]);
        assert!(matches!(
            Spinor::from_vectors(&[w.clone(), w]),
            Err(CliffError::NonUnitVector(_))
        ));
    }

    #[test]
    fn identity_spinor_fixes_vectors() {
        let s = Spinor::identity(3);
        let x = Vector::new(vec![1.0, -2.0, 0.5]);
        let r = s.rotate(&x).unwrap();
        assert_eq!(r.components(), x.components());
    }

    #[test]
    fn eighth_turn_spinor_sends_e1_to_e2() {
        // s(π/4) = (1 + e12)/√2 rotates by π/2
        let s = Spinor::from_angle(FRAC_PI_4);
        let r = s.rotate(&Vector::basis(2, 1)).unwrap();
        assert!((r.components()[0]).abs() < 1e-12);
        assert!((r.components()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spin2_action_matches_rotation_matrix() {
        // rotate(s(φ), ·) is the 2x2 rotation by 2φ, counterclockwise
        let mut rng = crate::testutil::rng(42);
        for _ in 0..100 {
            let phi: f64 = rng_range(&mut rng, -PI, PI);
            let x = Vector::new(vec![rng_range(&mut rng, -2.0, 2.0), rng_range(&mut rng, -2.0, 2.0)]);
            let s = Spinor::from_angle(phi);
            let r = s.rotate(&x).unwrap();
            let (sin, cos) = (2.0 * phi).sin_cos();
            let expected = [
                cos * x.components()[0] - sin * x.components()[1],
                sin * x.components()[0] + cos * x.components()[1],
            ];
            assert!((r.components()[0] - expected[0]).abs() <= 1e-12);
            assert!((r.components()[1] - expected[1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn double_reflection_in_three_dimensions() {
        let s = Spinor::from_vectors(&[Vector::basis(3, 1), Vector::basis(3, 2)]).unwrap();
        let cases = [
            (Vector::basis(3, 1), [-1.0, 0.0, 0.0]),
            (Vector::basis(3, 2), [0.0, -1.0, 0.0]),
            (Vector::basis(3, 3), [0.0, 0.0, 1.0]),
        ];
        for (x, expected) in cases {
            let r = s.rotate(&x).unwrap();
            for (a, b) in r.components().iter().zip(expected.iter()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        // and it agrees with composing the two reflections directly
        let x = Vector::new(vec![0.3, 1.1, -0.7]);
        let via_reflections = crate::algebra::reflect(
            &Vector::basis(3, 1),
            &crate::algebra::reflect(&Vector::basis(3, 2), &x).unwrap(),
        )
        .unwrap();
        let via_spinor = s.rotate(&x).unwrap();
        for (a, b) in via_spinor.components().iter().zip(via_reflections.components()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_preserves_norms_and_angles() {
        let mut rng = crate::testutil::rng(7);
        for n in [2usize, 3] {
            let quad = haar_quadrature(n, 37).unwrap();
            for s in quad.nodes().iter().step_by(5) {
                let x = random_vector(&mut rng, n);
                let y = random_vector(&mut rng, n);
                let rx = s.rotate(&x).unwrap();
                let ry = s.rotate(&y).unwrap();
                assert!((rx.norm() - x.norm()).abs() <= 1e-12 * x.norm().max(1.0));
                assert!((rx.euclidean_dot(&ry) - x.euclidean_dot(&y)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_n2_nodes_and_mass() {
        let quad = haar_quadrature(2, 4).unwrap();
        let expected_phis = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];
        for ((s, w), phi) in quad.iter().zip(expected_phis) {
            assert!((w - 0.25).abs() < 1e-15);
            assert!((s.multivector().coeff(0).re - phi.cos()).abs() < 1e-12);
            assert!((s.multivector().coeff(0b11).re - phi.sin()).abs() < 1e-12);
        }
        // the constant function integrates to exactly 1
        let total = quad.integrate(|_| 1.0);
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_n3_mean_rotation_entry_vanishes() {
        let quad = haar_quadrature(3, 512).unwrap();
        let e1 = Vector::basis(3, 1);
        // mean of the (1,1) rotation-matrix entry over Haar measure is 0
        let mean = quad.integrate(|s| s.rotate_unchecked(&e1).components()[0]);
        assert!(mean.abs() <= 2e-2, "mean = {mean}");
        // second moment of a matrix entry over SO(3) is 1/3
        let second = quad.integrate(|s| s.rotate_unchecked(&e1).components()[0].powi(2));
        assert!((second - 1.0 / 3.0).abs() <= 2e-2, "second = {second}");
        // nodes are unit spinors
        for s in quad.nodes() {
            assert!(s.unit_defect() < 1e-12);
        }
    }

    #[test]
    fn sphere_coverage_mean_shrinks_with_resolution() {
        // {s̄ ξ s} covers the sphere of radius |ξ|; its mean tends to 0
        for n in [2usize, 3] {
            let xi = if n == 2 {
                Vector::new(vec![1.5, -0.5])
            } else {
                Vector::new(vec![1.5, -0.5, 0.25])
            };
            let mut means = Vec::new();
            for res in [32usize, 256] {
                let quad = haar_quadrature(n, res).unwrap();
                let mut mean = vec![0.0; n];
                for (s, w) in quad.iter() {
                    let r = s.conjugate().rotate_unchecked(&xi);
                    for (m, c) in mean.iter_mut().zip(r.components()) {
                        *m += w * c;
                    }
                    assert!((r.norm() - xi.norm()).abs() < 1e-10);
                }
                means.push(mean.iter().map(|m| m * m).sum::<f64>().sqrt());
            }
            // n = 2 is exact at any resolution; guard with a rounding floor
            assert!(means[1] <= means[0].max(1e-12), "means = {means:?}");
        }
    }

    #[test]
    fn unsupported_dimension_rejected() {
        assert!(matches!(
            haar_quadrature(4, 8),
            Err(CliffError::UnsupportedSpinDimension(4))
        ));
    }

    #[test]
    fn csv_export_lists_nodes_and_weights() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("quad.csv");
        let quad = haar_quadrature(2, 4).unwrap();
        quad.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "c0,c1,c2,c3,weight");
        assert_eq!(lines.len(), 5);
        // first node is the identity spinor with weight 1/4
        let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(first[0], 1.0);
        assert_eq!(first[4], 0.25);
    }

    fn rng_range(rng: &mut impl rand::Rng, lo: f64, hi: f64) -> f64 {
        rng.random_range(lo..hi)
    }

    fn random_vector(rng: &mut impl rand::Rng, n: usize) -> Vector {
        Vector::new((0..n).map(|_| rng.random_range(-2.0..2.0)).collect())
    }
}
