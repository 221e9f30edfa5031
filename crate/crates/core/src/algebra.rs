//! Arithmetic in the real and complex Clifford algebras R_n and C_n.
//!
//! Generators e_1..e_n satisfy e_i e_j + e_j e_i = -2 δ_ij (all squares are -1).
//! A blade is indexed by an n-bit mask: bit i set means e_{i+1} is a factor,
//! so the algebra has 2^n blades and a multivector is a dense array of 2^n
//! complex coefficients in mask order. Blade-product signs are precomputed
//! into a 2^n x 2^n table per dimension, built once and shared read-only.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{CliffError, Result};

/// Largest supported generator count; the n = 8 sign table is 64 KiB.
pub const MAX_DIM: usize = 8;

/// Default componentwise absolute tolerance for multivector comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Index of a basis blade: bit i set iff e_{i+1} is a factor.
pub type BladeIndex = usize;

/// Grade of a blade = number of generator factors.
#[inline]
pub fn grade(mask: BladeIndex) -> u32 {
    (mask as u64).count_ones()
}

/// Sign acquired when multiplying blades `a * b`, before the e_i^2 = -1 factors.
///
/// Counts the transpositions needed to interleave the factors of `b` into
/// canonical order past the factors of `a`.
fn reorder_sign(a: BladeIndex, b: BladeIndex) -> i8 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Product of two basis blades: `e_A e_B = sign * e_{A xor B}`.
///
/// The sign combines the reordering transpositions with one factor of -1 for
/// every repeated generator (e_i^2 = -1). Total function; no error cases.
pub fn blade_product(a: BladeIndex, b: BladeIndex) -> (i8, BladeIndex) {
    let mut sign = reorder_sign(a, b);
    if (a & b).count_ones() % 2 == 1 {
        sign = -sign;
    }
    (sign, a ^ b)
}

/// Shared per-dimension sign table for the geometric product.
pub struct SignTable {
    n: usize,
    signs: Vec<i8>, // 2^n * 2^n, row-major in (a, b)
}

impl SignTable {
    fn build(n: usize) -> SignTable {
        let count = 1usize << n;
        let mut signs = vec![0i8; count * count];
        for a in 0..count {
            for b in 0..count {
                signs[(a << n) | b] = blade_product(a, b).0;
            }
        }
        SignTable { n, signs }
    }

    #[inline]
    pub fn sign(&self, a: BladeIndex, b: BladeIndex) -> i8 {
        self.signs[(a << self.n) | b]
    }
}

/// Lazily built tables, one per dimension 1..=8.
pub fn sign_table(n: usize) -> &'static SignTable {
    static TABLES: [OnceLock<SignTable>; MAX_DIM] = [const { OnceLock::new() }; MAX_DIM];
    assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
    TABLES[n - 1].get_or_init(|| SignTable::build(n))
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(CliffError::UnsupportedDimension(n))
    }
}

/// Geometric product on raw coefficient slices (all of length 2^n).
///
/// `out` must be zeroed by the caller when accumulation is not intended.
pub(crate) fn gp_accumulate(
    table: &SignTable,
    a: &[Complex64],
    b: &[Complex64],
    out: &mut [Complex64],
) {
    for (ma, ca) in a.iter().enumerate() {
        if ca.re == 0.0 && ca.im == 0.0 {
            continue;
        }
        for (mb, cb) in b.iter().enumerate() {
            if cb.re == 0.0 && cb.im == 0.0 {
                continue;
            }
            let s = table.sign(ma, mb) as f64;
            out[ma ^ mb] += s * ca * cb;
        }
    }
}

/// An element of the complex Clifford algebra C_n.
///
/// The real algebra R_n is the sub-case of zero imaginary parts.
#[derive(Debug, Clone)]
pub struct Multivector {
    dim: usize,
    coeffs: Vec<Complex64>,
}

impl Multivector {
    pub fn zero(n: usize) -> Multivector {
        check_dim(n).expect("dimension in 1..=8");
        Multivector {
            dim: n,
            coeffs: vec![Complex64::ZERO; 1 << n],
        }
    }

    pub fn scalar(n: usize, value: Complex64) -> Multivector {
        let mut mv = Multivector::zero(n);
        mv.coeffs[0] = value;
        mv
    }

    pub fn real_scalar(n: usize, value: f64) -> Multivector {
        Multivector::scalar(n, Complex64::new(value, 0.0))
    }

    /// The basis blade e_A for mask A (scalar blade for mask 0).
    pub fn basis_blade(n: usize, mask: BladeIndex) -> Multivector {
        assert!(mask < (1 << n), "blade mask {mask:#x} out of range for n = {n}");
        let mut mv = Multivector::zero(n);
        mv.coeffs[mask] = Complex64::ONE;
        mv
    }

    /// The generator e_j (1-based index).
    pub fn basis_vector(n: usize, j: usize) -> Multivector {
        assert!((1..=n).contains(&j), "generator index {j} out of 1..={n}");
        Multivector::basis_blade(n, 1 << (j - 1))
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<Complex64>) -> Multivector {
        assert_eq!(coeffs.len(), 1 << n, "coefficient count must be 2^n");
        Multivector { dim: n, coeffs }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, mask: BladeIndex) -> Complex64 {
        self.coeffs[mask]
    }

    pub fn set_coeff(&mut self, mask: BladeIndex, value: Complex64) {
        self.coeffs[mask] = value;
    }

    #[inline]
    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Frobenius magnitude sqrt(sum_A |a_A|^2).
    pub fn magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }

    /// Componentwise comparison with absolute tolerance.
    pub fn approx_eq(&self, other: &Multivector, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn approx_eq_default(&self, other: &Multivector) -> bool {
        self.approx_eq(other, DEFAULT_TOL)
    }

    pub fn max_coeff_diff(&self, other: &Multivector) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_same_dim(&self, other: &Multivector) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(CliffError::DimensionMismatch(self.dim, other.dim))
        }
    }

    /// Geometric product, checked for matching dimension.
    pub fn geometric_product(&self, rhs: &Multivector) -> Result<Multivector> {
        self.check_same_dim(rhs)?;
        let table = sign_table(self.dim);
        let mut out = Multivector::zero(self.dim);
        gp_accumulate(table, &self.coeffs, &rhs.coeffs, &mut out.coeffs);
        Ok(out)
    }

    pub fn add(&self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Multivector { dim: self.dim, coeffs }
    }

    pub fn sub(&self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Multivector { dim: self.dim, coeffs }
    }

    pub fn scaled(&self, factor: Complex64) -> Multivector {
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn neg(&self) -> Multivector {
        self.scaled(Complex64::new(-1.0, 0.0))
    }

    fn map_signs(&self, sign: impl Fn(u32) -> f64) -> Multivector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| c * sign(grade(mask)))
            .collect();
        Multivector { dim: self.dim, coeffs }
    }

    /// Main involution: e_A -> (-1)^|A| e_A.
    pub fn grade_involution(&self) -> Multivector {
        self.map_signs(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// Reversion: e_A -> (-1)^{|A|(|A|-1)/2} e_A; anti-automorphism.
    pub fn reversion(&self) -> Multivector {
        self.map_signs(|k| if (k * (k.saturating_sub(1)) / 2) % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// Clifford conjugation: e_A -> (-1)^{|A|(|A|+1)/2} e_A; anti-automorphism.
    pub fn conjugation(&self) -> Multivector {
        self.map_signs(|k| if (k * (k + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// Hermitian conjugation: Clifford conjugation of blades combined with
    /// complex conjugation of coefficients. The scalar part of λ†λ equals
    /// sum_A |λ_A|^2 and is therefore real and nonnegative.
    pub fn hermitian_conjugate(&self) -> Multivector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| {
                let k = grade(mask);
                let s = if (k * (k + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                s * c.conj()
            })
            .collect();
        Multivector { dim: self.dim, coeffs }
    }

    /// Projection onto the grade-k part.
    pub fn grade_part(&self, k: u32) -> Multivector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| if grade(mask) == k { *c } else { Complex64::ZERO })
            .collect();
        Multivector { dim: self.dim, coeffs }
    }

    pub fn even_part(&self) -> Multivector {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| if grade(mask) % 2 == 0 { *c } else { Complex64::ZERO })
            .collect();
        Multivector { dim: self.dim, coeffs }
    }

    pub fn odd_part(&self) -> Multivector {
        self.sub(&self.even_part())
    }

    /// Largest coefficient magnitude outside grade k.
    pub fn max_magnitude_outside_grade(&self, k: u32) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(mask, _)| grade(*mask) != k)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Extract the grade-1 part as a real vector; errors if other grades or
    /// imaginary parts exceed `tol`.
    pub fn to_vector(&self, tol: f64) -> Result<Vector> {
        let residue = self.max_magnitude_outside_grade(1);
        if residue > tol {
            return Err(CliffError::GridMismatch(format!(
                "multivector is not grade-1 (residue {residue:.3e})"
            )));
        }
        let mut components = vec![0.0; self.dim];
        for (j, slot) in components.iter_mut().enumerate() {
            let c = self.coeffs[1 << j];
            if c.im.abs() > tol {
                return Err(CliffError::GridMismatch(format!(
                    "grade-1 part is not real (imaginary {:.3e})",
                    c.im
                )));
            }
            *slot = c.re;
        }
        Ok(Vector::new(components))
    }
}

impl std::ops::Mul for &Multivector {
    type Output = Multivector;

    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs)
            .expect("geometric product of mismatched dimensions")
    }
}

impl std::ops::Add for &Multivector {
    type Output = Multivector;

    fn add(self, rhs: &Multivector) -> Multivector {
        Multivector::add(self, rhs)
    }
}

impl std::ops::Sub for &Multivector {
    type Output = Multivector;

    fn sub(self, rhs: &Multivector) -> Multivector {
        Multivector::sub(self, rhs)
    }
}

fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        match c.im {
            1.0 => "i".to_string(),
            -1.0 => "-i".to_string(),
            im => format!("{im}i"),
        }
    } else if c.im < 0.0 {
        format!("({}-{}i)", c.re, -c.im)
    } else {
        format!("({}+{}i)", c.re, c.im)
    }
}

fn blade_name(mask: BladeIndex) -> String {
    let mut s = String::from("e");
    for j in 0..MAX_DIM {
        if mask & (1 << j) != 0 {
            s.push(char::from_digit(j as u32 + 1, 10).unwrap());
        }
    }
    s
}

/// Textual rendering "a + b·e1 + c·e12 + ..." with blades in ascending-mask
/// order; used for CLI display and golden tests.
impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            if mask == 0 {
                terms.push(format_complex(*c));
                continue;
            }
            let name = blade_name(mask);
            let term = if *c == Complex64::ONE {
                name
            } else if *c == -Complex64::ONE {
                format!("-{name}")
            } else {
                format!("{}·{}", format_complex(*c), name)
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = terms[0].clone();
        for term in &terms[1..] {
            if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(term);
            }
        }
        write!(f, "{out}")
    }
}

/// A point of R^n, identified with the grade-1 element sum_j x_j e_j.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    components: Vec<f64>,
}

impl Vector {
    pub fn new(components: Vec<f64>) -> Vector {
        assert!((1..=MAX_DIM).contains(&components.len()));
        Vector { components }
    }

    pub fn zero(n: usize) -> Vector {
        Vector::new(vec![0.0; n])
    }

    /// The unit vector e_j (1-based).
    pub fn basis(n: usize, j: usize) -> Vector {
        assert!((1..=n).contains(&j));
        let mut v = Vector::zero(n);
        v.components[j - 1] = 1.0;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    #[inline]
    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// The plain Euclidean inner product <x, y> (note the Clifford dot
    /// product is its negative).
    pub fn euclidean_dot(&self, other: &Vector) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn embed(&self) -> Multivector {
        let n = self.dim();
        let mut mv = Multivector::zero(n);
        for (j, &x) in self.components.iter().enumerate() {
            mv.coeffs[1 << j] = Complex64::new(x, 0.0);
        }
        mv
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        Vector::new(self.components.iter().map(|x| x * factor).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

/// Clifford dot product x·y = ½(xy + yx) = -<x,y>, returned as a scalar
/// multivector.
pub fn dot(x: &Vector, y: &Vector) -> Result<Multivector> {
    if x.dim() != y.dim() {
        return Err(CliffError::DimensionMismatch(x.dim(), y.dim()));
    }
    Ok(Multivector::real_scalar(x.dim(), -x.euclidean_dot(y)))
}

/// Outer product x∧y = ½(xy - yx), the grade-2 part of the geometric product.
pub fn wedge(x: &Vector, y: &Vector) -> Result<Multivector> {
    if x.dim() != y.dim() {
        return Err(CliffError::DimensionMismatch(x.dim(), y.dim()));
    }
    let n = x.dim();
    let mut out = Multivector::zero(n);
    for j in 0..n {
        for k in (j + 1)..n {
            let c = x.components[j] * y.components[k] - x.components[k] * y.components[j];
            out.coeffs[(1 << j) | (1 << k)] = Complex64::new(c, 0.0);
        }
    }
    Ok(out)
}

/// Reflection across the hyperplane ω⊥ for unit ω: R_ω(x) = ω x ω.
///
/// Negates the ω-parallel component and preserves the perpendicular one.
pub fn reflect(omega: &Vector, x: &Vector) -> Result<Vector> {
    if omega.dim() != x.dim() {
        return Err(CliffError::DimensionMismatch(omega.dim(), x.dim()));
    }
    let norm = omega.norm();
    if (norm - 1.0).abs() > DEFAULT_TOL {
        return Err(CliffError::NonUnitVector(norm));
    }
    let w = omega.embed();
    let product = &(&w * &x.embed()) * &w;
    product.to_vector(1e-9)
}
