//! The verification suite: one entry point that runs the algebra axioms,
//! transform identities, admissibility constants, isometry/reconstruction
//! checks and the uncertainty inequalities over a configured corpus, and
//! emits a deterministic pass/fail report.
//!
//! Reports are byte-stable across runs: fixed ordering, no timestamps, and
//! floating-point values printed with 17 significant digits.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{blade_product, dot, reflect, Multivector, Vector};
use crate::cwt::{cwt_analyze, plancherel_check, reconstruct, CwtGrid};
use crate::error::{CliffError, Result};
use crate::fourier::{cft_forward, cft_inverse, parseval_check};
use crate::grid::{cauchy_schwarz_check, CliffordField, GridSpec};
use crate::spin::{haar_quadrature, Spinor};
use crate::uncertainty::{fourier_uncertainty, lemma_check_all, wavelet_uncertainty_all};
use crate::wavelet::{
    admissibility, kernel_constant_check, log_scale_grid, plancherel_normalizer, MotherWavelet,
};

/// Scale-axis parameters for the CWT grids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Parameters of the Gaussian-enveloped corpus. Envelopes are wide enough to
/// keep scale-truncation losses small and modulated away from ξ = 0, where
/// the singular cell of the admissibility measure lives.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub count: usize,
    pub seed: u64,
    pub sigma: [f64; 2],
    pub momentum: [f64; 2],
    pub center: f64,
}

/// Tolerances used by the suite; defaults carry the acceptance thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub algebra_random: f64,
    pub vector_laws: f64,
    pub cft_gaussian: f64,
    pub cft_roundtrip: f64,
    pub parseval: f64,
    pub admissibility_rel: f64,
    pub scalarity: f64,
    pub kernel_rel: f64,
    pub kernel_nonscalar: f64,
    pub plancherel_lo: f64,
    pub plancherel_hi: f64,
    pub reconstruction: f64,
    pub lemma_lo: f64,
    pub lemma_hi: f64,
    pub fourier_saturation: f64,
    pub wavelet_uncertainty_min: f64,
    pub refinement_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebra_random: 1e-10,
            vector_laws: 1e-12,
            cft_gaussian: 1e-8,
            cft_roundtrip: 1e-10,
            parseval: 1e-8,
            admissibility_rel: 0.02,
            scalarity: 1e-8,
            kernel_rel: 0.02,
            kernel_nonscalar: 1e-8,
            plancherel_lo: 0.95,
            plancherel_hi: 1.05,
            reconstruction: 0.05,
            lemma_lo: 0.95,
            lemma_hi: 1.05,
            fourier_saturation: 1e-3,
            wavelet_uncertainty_min: 0.95,
            refinement_margin: 0.01,
        }
    }
}

/// Full configuration of a verification run; defaults are the reference
/// settings (65^2 over [-8, 8]^2, 32 scales in [1/8, 8], 16 spin nodes).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub n: usize,
    pub shape: usize,
    pub half_span: f64,
    pub wavelet: String,
    pub scales: ScaleConfig,
    pub spins: usize,
    pub corpus: CorpusConfig,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            shape: 65,
            half_span: 8.0,
            wavelet: "vector-gaussian".into(),
            scales: ScaleConfig {
                min: 0.125,
                max: 8.0,
                count: 32,
            },
            spins: 16,
            corpus: CorpusConfig {
                count: 6,
                seed: 7,
                sigma: [1.9, 2.1],
                momentum: [1.2, 1.3],
                center: 0.75,
            },
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(bytes: &[u8]) -> Result<RunConfig> {
        let config: RunConfig = serde_json::from_slice(bytes)
            .map_err(|e| CliffError::Config(format!("config parse failed at line {}, column {}: {e}", e.line(), e.column())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n != 2 {
            return Err(CliffError::Config(format!(
                "field 'n': corpus verification runs in n = 2 (spin quadrature and \
                 reference settings); got {}",
                self.n
            )));
        }
        if self.shape < 9 || self.shape % 2 == 0 {
            return Err(CliffError::Config(format!(
                "field 'shape': need an odd point count >= 9, got {}",
                self.shape
            )));
        }
        if !(self.half_span > 0.0) {
            return Err(CliffError::Config("field 'half_span': must be positive".into()));
        }
        if !(self.scales.min > 0.0) || self.scales.max <= self.scales.min || self.scales.count < 2 {
            return Err(CliffError::Config(
                "field 'scales': need 0 < min < max and count >= 2".into(),
            ));
        }
        if self.spins == 0 {
            return Err(CliffError::Config("field 'spins': must be positive".into()));
        }
        if self.corpus.sigma[0] > self.corpus.sigma[1] || !(self.corpus.sigma[0] > 0.0) {
            return Err(CliffError::Config("field 'corpus.sigma': bad range".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::centered_span(self.n, self.shape, self.half_span)
    }

    /// Same spacing, doubled extent: the refinement grid for convergence
    /// checks (halves the frequency spacing that drives quadrature losses).
    pub fn refined_grid(&self) -> Result<GridSpec> {
        let base = self.grid()?;
        GridSpec::centered(self.n, 2 * self.shape - 1, base.spacing()[0])
    }

    pub fn wavelet_on(&self, grid: &GridSpec) -> Result<MotherWavelet> {
        build_wavelet(&self.wavelet, grid)
    }
}

/// Resolve a wavelet name: a built-in or a CField path.
pub fn build_wavelet(name: &str, grid: &GridSpec) -> Result<MotherWavelet> {
    match name {
        "vector-gaussian" => MotherWavelet::vector_gaussian(grid.clone()),
        "mexican-hat" => MotherWavelet::mexican_hat(grid.clone()),
        "gaussian" => MotherWavelet::gaussian(grid.clone()),
        path => {
            let field = crate::io::read_field(&PathBuf::from(path))?;
            if !field.grid().approx_eq(grid) {
                return Err(CliffError::GridMismatch(format!(
                    "wavelet file '{path}' is sampled on a different grid than the run"
                )));
            }
            MotherWavelet::from_field(path.to_string(), field)
        }
    }
}

/// One deterministic corpus member: a modulated, shifted Gaussian envelope
/// with a fixed multivector amplitude; can be sampled on any grid.
#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub sigma: f64,
    pub momentum: Vec<f64>,
    pub center: Vec<f64>,
    pub amplitude: Multivector,
}

impl CorpusItem {
    pub fn sample(&self, grid: &GridSpec) -> CliffordField {
        let n = grid.dim();
        CliffordField::from_fn(grid.clone(), n, |x| {
            let r2: f64 = x
                .iter()
                .zip(&self.center)
                .map(|(xi, ci)| (xi - ci) * (xi - ci))
                .sum();
            let phase: f64 = x.iter().zip(&self.momentum).map(|(xi, ki)| xi * ki).sum();
            let env = Complex64::from_polar((-r2 / (2.0 * self.sigma * self.sigma)).exp(), phase);
            self.amplitude.scaled(env)
        })
    }
}

/// Deterministic corpus from the seeded generator. Momentum directions stay
/// away from the axes so every component is bounded away from zero.
pub fn build_corpus(cfg: &CorpusConfig, n: usize) -> Vec<CorpusItem> {
    let mut rng = crate::testutil::rng(cfg.seed);
    (0..cfg.count)
        .map(|_| {
            let sigma = rng.random_range(cfg.sigma[0]..=cfg.sigma[1]);
            let k_mag = rng.random_range(cfg.momentum[0]..=cfg.momentum[1]);
            let theta: f64 =
                rng.random_range(std::f64::consts::PI / 7.0..(std::f64::consts::PI / 2.0 - std::f64::consts::PI / 7.0));
            let mut momentum = vec![0.0; n];
            momentum[0] = k_mag * theta.cos() * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            if n > 1 {
                momentum[1] = k_mag * theta.sin() * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            }
            let center = (0..n)
                .map(|_| rng.random_range(-cfg.center..=cfg.center))
                .collect();
            let mut amplitude = crate::testutil::random_multivector(&mut rng, n);
            let mag = amplitude.magnitude();
            amplitude = amplitude.scaled(Complex64::new(1.0 / mag, 0.0));
            CorpusItem {
                sigma,
                momentum,
                center,
                amplitude,
            }
        })
        .collect()
}

/// Which check families to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteSelection {
    Algebra,
    Fourier,
    Wavelet,
    Uncertainty,
    All,
}

impl std::str::FromStr for SuiteSelection {
    type Err = CliffError;

    fn from_str(s: &str) -> Result<SuiteSelection> {
        match s {
            "algebra" => Ok(SuiteSelection::Algebra),
            "fourier" => Ok(SuiteSelection::Fourier),
            "wavelet" => Ok(SuiteSelection::Wavelet),
            "uncertainty" => Ok(SuiteSelection::Uncertainty),
            "all" => Ok(SuiteSelection::All),
            other => Err(CliffError::Config(format!(
                "unknown suite '{other}' (expected algebra|fourier|wavelet|uncertainty|all)"
            ))),
        }
    }
}

impl SuiteSelection {
    fn wants(self, which: SuiteSelection) -> bool {
        self == SuiteSelection::All || self == which
    }
}

/// One verified quantity with its acceptance window.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub id: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
    pub note: String,
}

impl CheckResult {
    fn bounded(suite: &'static str, id: impl Into<String>, value: f64, lo: f64, hi: f64) -> CheckResult {
        CheckResult {
            suite,
            id: id.into(),
            value,
            lo,
            hi,
            pass: value >= lo && value <= hi && value.is_finite(),
            note: String::new(),
        }
    }

    fn at_most(suite: &'static str, id: impl Into<String>, value: f64, hi: f64) -> CheckResult {
        CheckResult::bounded(suite, id, value, f64::NEG_INFINITY, hi)
    }

    fn at_least(suite: &'static str, id: impl Into<String>, value: f64, lo: f64) -> CheckResult {
        CheckResult::bounded(suite, id, value, lo, f64::INFINITY)
    }

    fn with_note(mut self, note: impl Into<String>) -> CheckResult {
        self.note = note.into();
        self
    }
}

/// The assembled report.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Deterministic JSON: ordered keys, floats at 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"checks\": [\n");
        for (i, c) in self.checks.iter().enumerate() {
            let _ = writeln!(
                out,
                "    {{\"suite\": \"{}\", \"id\": \"{}\", \"value\": {}, \"lo\": {}, \"hi\": {}, \"pass\": {}, \"note\": \"{}\"}}{}",
                c.suite,
                c.id,
                fmt_float(c.value),
                fmt_float(c.lo),
                fmt_float(c.hi),
                c.pass,
                c.note.replace('"', "'"),
                if i + 1 < self.checks.len() { "," } else { "" }
            );
        }
        let _ = write!(
            out,
            "  ],\n  \"all_pass\": {},\n  \"total\": {},\n  \"failed\": {}\n}}\n",
            self.all_pass(),
            self.checks.len(),
            self.checks.iter().filter(|c| !c.pass).count()
        );
        out
    }

    /// Deterministic CSV table of every check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,id,value,lo,hi,pass,note\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                c.suite,
                c.id,
                fmt_float(c.value),
                fmt_float(c.lo),
                fmt_float(c.hi),
                c.pass,
                c.note.replace(',', ";")
            );
        }
        out
    }

    /// Space-separated columns for direct gnuplot consumption.
    pub fn to_dat(&self) -> String {
        let mut out = String::from("# index value lo hi pass  (suite:id)\n");
        for (i, c) in self.checks.iter().enumerate() {
            let _ = writeln!(
                out,
                "{} {} {} {} {}  # {}:{}",
                i,
                fmt_float(c.value),
                fmt_float(c.lo),
                fmt_float(c.hi),
                u8::from(c.pass),
                c.suite,
                c.id
            );
        }
        out
    }
}

/// 17 significant digits, enough to reproduce the f64 bit pattern.
fn fmt_float(v: f64) -> String {
    if v == f64::INFINITY {
        "1e999".into()
    } else if v == f64::NEG_INFINITY {
        "-1e999".into()
    } else {
        format!("{v:.16e}")
    }
}

/// Independent symbol-reordering product: blades as generator lists, sorted
/// by adjacent swaps with a sign flip each, squares removed at -1 apiece.
fn symbol_product_oracle(a: usize, b: usize) -> (i8, usize) {
    let mut symbols: Vec<u32> = (0..8)
        .filter(|i| a & (1 << i) != 0)
        .chain((0..8).filter(|i| b & (1 << i) != 0))
        .collect();
    let mut sign = 1i8;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < symbols.len() {
            if symbols[i] > symbols[i + 1] {
                symbols.swap(i, i + 1);
                sign = -sign;
                changed = true;
            } else if symbols[i] == symbols[i + 1] {
                symbols.drain(i..i + 2);
                sign = -sign;
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    let mask = symbols.iter().fold(0usize, |m, &s| m | (1 << s));
    (sign, mask)
}

fn algebra_checks(config: &RunConfig, checks: &mut Vec<CheckResult>) {
    let tol = &config.tolerances;
    let mut rng = crate::testutil::rng(config.corpus.seed ^ 0xa16e_b7a);

    // anticommutation: integer signs, exact equality required
    let mut anti_worst = 0.0f64;
    for n in 1..=4usize {
        for i in 1..=n {
            for j in 1..=n {
                let ei = Multivector::basis_vector(n, i);
                let ej = Multivector::basis_vector(n, j);
                let sum = (&ei * &ej).add(&(&ej * &ei));
                let expected = if i == j {
                    Multivector::real_scalar(n, -2.0)
                } else {
                    Multivector::zero(n)
                };
                anti_worst = anti_worst.max(sum.max_coeff_diff(&expected));
            }
        }
    }
    checks.push(CheckResult::at_most("algebra", "anticommutation.exact", anti_worst, 0.0));

    // associativity and anti-automorphisms over random triples
    let mut assoc_worst = 0.0f64;
    let mut anti_auto_worst = 0.0f64;
    let mut herm_worst = 0.0f64;
    for n in 1..=4usize {
        for _ in 0..1000 {
            let a = crate::testutil::random_multivector(&mut rng, n);
            let b = crate::testutil::random_multivector(&mut rng, n);
            let c = crate::testutil::random_multivector(&mut rng, n);
            let left = &(&a * &b) * &c;
            let right = &a * &(&b * &c);
            let scale = (a.magnitude() * b.magnitude() * c.magnitude()).max(1.0);
            assoc_worst = assoc_worst.max(left.max_coeff_diff(&right) / scale);

            let ab = &a * &b;
            anti_auto_worst = anti_auto_worst
                .max(ab.reversion().max_coeff_diff(&(&b.reversion() * &a.reversion())) / scale)
                .max(ab.conjugation().max_coeff_diff(&(&b.conjugation() * &a.conjugation())) / scale);

            let lambda = crate::testutil::random_multivector(&mut rng, n);
            let quad = &lambda.hermitian_conjugate() * &lambda;
            let expected: f64 = lambda.coeffs().iter().map(|c| c.norm_sqr()).sum();
            herm_worst = herm_worst.max((quad.scalar_part().re - expected).abs());
            herm_worst = herm_worst.max((-quad.scalar_part().re).max(0.0));
        }
    }
    checks.push(CheckResult::at_most("algebra", "associativity.random", assoc_worst, tol.algebra_random));
    checks.push(CheckResult::at_most("algebra", "anti_automorphisms.random", anti_auto_worst, tol.algebra_random));
    checks.push(CheckResult::at_most("algebra", "hermitian_positivity", herm_worst, tol.vector_laws));

    // oracle equivalence for n <= 4
    let mut oracle_worst = 0.0f64;
    for n in 1..=4usize {
        for a in 0..1usize << n {
            for b in 0..1usize << n {
                let (s1, m1) = blade_product(a, b);
                let (s2, m2) = symbol_product_oracle(a, b);
                if s1 != s2 || m1 != m2 {
                    oracle_worst = 1.0;
                }
            }
        }
    }
    checks.push(CheckResult::at_most("algebra", "oracle_equivalence", oracle_worst, 0.0));

    // vector laws and rotation isometries
    let mut vector_worst = 0.0f64;
    let mut rotation_worst = 0.0f64;
    for n in [2usize, 3] {
        for _ in 0..200 {
            let x = Vector::new((0..n).map(|_| rng.random_range(-2.0..2.0)).collect());
            let sq = (&x.embed() * &x.embed()).scalar_part().re;
            vector_worst = vector_worst.max((sq + x.norm() * x.norm()).abs());
            vector_worst = vector_worst.max(
                dot(&x, &x)
                    .unwrap()
                    .scalar_part()
                    .re
                    .mul_add(1.0, x.norm() * x.norm())
                    .abs(),
            );

            // random unit reflection direction
            let mut w = Vector::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
            if w.norm() < 1e-3 {
                w = Vector::basis(n, 1);
            }
            let w = w.scaled(1.0 / w.norm());
            let rx = reflect(&w, &x).unwrap();
            rotation_worst = rotation_worst.max((rx.norm() - x.norm()).abs());
        }
    }
    // Spin(2) action against the 2x2 rotation matrix
    for _ in 0..100 {
        let phi: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let x = Vector::new(vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
        let r = Spinor::from_angle(phi).rotate(&x).unwrap();
        let (sin, cos) = (2.0 * phi).sin_cos();
        rotation_worst = rotation_worst
            .max((r.components()[0] - (cos * x.components()[0] - sin * x.components()[1])).abs())
            .max((r.components()[1] - (sin * x.components()[0] + cos * x.components()[1])).abs());
    }
    checks.push(CheckResult::at_most("algebra", "vector_square_law", vector_worst, tol.vector_laws));
    checks.push(CheckResult::at_most("algebra", "rotation_isometry", rotation_worst, tol.vector_laws));
}

fn fourier_checks(config: &RunConfig, corpus: &[CorpusItem], checks: &mut Vec<CheckResult>) -> Result<()> {
    let tol = &config.tolerances;
    let grid = config.grid()?;
    let n = config.n;

    // Gaussian pair
    let f = CliffordField::from_fn(grid.clone(), n, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Multivector::real_scalar(n, (-r2 / 2.0).exp())
    });
    let fhat = cft_forward(&f)?;
    let expected = CliffordField::from_fn(fhat.grid().clone(), n, |xi| {
        let r2: f64 = xi.iter().map(|v| v * v).sum();
        Multivector::real_scalar(n, (-r2 / 2.0).exp())
    });
    checks.push(CheckResult::at_most(
        "fourier",
        "gaussian_pair.max_norm",
        fhat.max_coeff_diff(&expected),
        tol.cft_gaussian,
    ));

    // round trip and Parseval/Plancherel over the corpus
    let mut roundtrip_worst = 0.0f64;
    let mut parseval_worst = 0.0f64;
    let mut plancherel_worst = 0.0f64;
    let mut cs_violation = 0.0f64;
    let fields: Vec<CliffordField> = corpus.iter().map(|c| c.sample(&grid)).collect();
    for f in &fields {
        let back = cft_inverse(&cft_forward(f)?)?;
        roundtrip_worst = roundtrip_worst.max(back.max_coeff_diff(f));
        plancherel_worst =
            plancherel_worst.max((f.norm_l2() - cft_forward(f)?.norm_l2()).abs());
    }
    for pair in fields.windows(2) {
        let (lhs, rhs) = parseval_check(&pair[0], &pair[1])?;
        parseval_worst = parseval_worst.max(lhs.max_coeff_diff(&rhs));
        let (cs_lhs, cs_rhs) = cauchy_schwarz_check(&pair[0], &pair[1])?;
        cs_violation = cs_violation.max(cs_lhs - cs_rhs * (1.0 + 1e-10));
    }
    checks.push(CheckResult::at_most("fourier", "roundtrip.max_norm", roundtrip_worst, tol.cft_roundtrip));
    checks.push(CheckResult::at_most("fourier", "parseval.corpus", parseval_worst, tol.parseval));
    checks.push(CheckResult::at_most("fourier", "plancherel_norm.corpus", plancherel_worst, tol.parseval));
    checks.push(CheckResult::at_most("fourier", "cauchy_schwarz.corpus", cs_violation.max(0.0), 0.0));
    Ok(())
}

/// Admissibility grids sized so the excluded ξ = 0 cell and the singular-cell
/// bias stay inside the 2% budget.
fn admissibility_grid(n: usize) -> Result<GridSpec> {
    match n {
        2 => GridSpec::centered_span(2, 161, 20.0),
        3 => GridSpec::centered(3, 71, 0.6),
        other => Err(CliffError::UnsupportedDimension(other)),
    }
}

fn wavelet_checks(config: &RunConfig, corpus: &[CorpusItem], checks: &mut Vec<CheckResult>) -> Result<()> {
    let tol = &config.tolerances;

    // closed-form constants: C_ψ = 1/2 for both built-ins in n = 2 and 3
    for n in [2usize, 3] {
        let grid = admissibility_grid(n)?;
        for name in ["vector-gaussian", "mexican-hat"] {
            let psi = build_wavelet(name, &grid)?;
            let report = admissibility(&psi)?;
            checks.push(CheckResult::bounded(
                "wavelet",
                format!("admissibility.c_psi.{name}.n{n}"),
                report.c_psi,
                0.5 * (1.0 - tol.admissibility_rel),
                0.5 * (1.0 + tol.admissibility_rel),
            ));
            checks.push(CheckResult::at_most(
                "wavelet",
                format!("admissibility.scalarity.{name}.n{n}"),
                report.scalarity_max_violation,
                tol.scalarity,
            ));
            if n == 2 && name == "vector-gaussian" {
                let expected = 4.0 * std::f64::consts::PI.powi(3);
                checks.push(CheckResult::bounded(
                    "wavelet",
                    "admissibility.a_psi_paper.vector-gaussian.n2",
                    report.a_psi_paper,
                    expected * (1.0 - tol.admissibility_rel),
                    expected * (1.0 + tol.admissibility_rel),
                ));
            }
        }
        // the plain Gaussian must be rejected
        let gauss_grid = if n == 2 {
            GridSpec::centered_span(2, 129, 16.0)?
        } else {
            admissibility_grid(n)?
        };
        let gauss = build_wavelet("gaussian", &gauss_grid)?;
        let rejected = matches!(admissibility(&gauss), Err(CliffError::NotAdmissible { .. }));
        checks.push(
            CheckResult::bounded(
                "wavelet",
                format!("admissibility.gaussian_rejected.n{n}"),
                f64::from(u8::from(rejected)),
                1.0,
                1.0,
            )
            .with_note("1 = NotAdmissible raised"),
        );
    }

    // spin-scale kernel constancy in ξ
    let grid2 = admissibility_grid(2)?;
    let psi2 = build_wavelet("vector-gaussian", &grid2)?;
    let scales = log_scale_grid(2f64.powi(-4), 2f64.powi(4), 48)?;
    let spins = haar_quadrature(2, 32)?;
    let xis = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![1.5, -0.5]];
    let kernel = kernel_constant_check(&psi2, &xis, &scales, &spins)?;
    checks.push(CheckResult::at_most(
        "wavelet",
        "kernel.max_relative_deviation",
        kernel.max_relative_deviation,
        tol.kernel_rel,
    ));
    let worst_nonscalar = kernel
        .samples
        .iter()
        .map(|s| s.non_scalar_relative)
        .fold(0.0, f64::max);
    checks.push(CheckResult::at_most(
        "wavelet",
        "kernel.non_scalar_relative",
        worst_nonscalar,
        tol.kernel_nonscalar,
    ));

    // gate the corpus identities on the configured wavelet's admissibility
    let run_grid = config.grid()?;
    let psi = config.wavelet_on(&run_grid)?;
    let adm = match admissibility(&psi) {
        Ok(report) => report,
        Err(CliffError::NotAdmissible { name, reason }) => {
            checks.push(
                CheckResult::bounded("wavelet", format!("admissibility.{name}"), 0.0, 1.0, 1.0)
                    .with_note(format!("not admissible: {reason}; downstream checks skipped")),
            );
            return Ok(());
        }
        Err(other) => return Err(other),
    };
    // normalize by the reference-grid constant (finer than the run grid)
    let z = plancherel_normalizer(config.n, reference_c_psi(config)?);
    let _ = adm;

    let spins = haar_quadrature(config.n, config.spins)?;
    let cwt_grid = CwtGrid::log_spaced(
        config.scales.min,
        config.scales.max,
        config.scales.count,
        spins.clone(),
        run_grid.clone(),
    )?;

    // isometry over the corpus
    let mut ratios = Vec::new();
    for (i, item) in corpus.iter().enumerate() {
        let f = item.sample(&run_grid);
        let report = plancherel_check(&f, &psi, &cwt_grid, z)?;
        checks.push(CheckResult::bounded(
            "wavelet",
            format!("plancherel.ratio.field{i}"),
            report.ratio,
            tol.plancherel_lo,
            tol.plancherel_hi,
        ));
        ratios.push(report.ratio);
    }

    // refinement: doubled extent must move the first ratio toward 1
    if let Some(first) = corpus.first() {
        let fine_grid = config.refined_grid()?;
        let fine_psi = config.wavelet_on(&fine_grid)?;
        let fine_cwt = CwtGrid::log_spaced(
            config.scales.min,
            config.scales.max,
            config.scales.count,
            spins.clone(),
            fine_grid.clone(),
        )?;
        let fine = plancherel_check(&first.sample(&fine_grid), &fine_psi, &fine_cwt, z)?;
        let coarse_gap = (1.0 - ratios[0]).abs();
        let fine_gap = (1.0 - fine.ratio).abs();
        checks.push(
            CheckResult::at_most("wavelet", "plancherel.refinement_gap", fine_gap, coarse_gap)
                .with_note(format!("coarse ratio {}, fine ratio {}", fmt_float(ratios[0]), fmt_float(fine.ratio))),
        );
    }

    // reconstruction: error within tolerance and monotone in the scale range
    if let Some(first) = corpus.first() {
        let f = first.sample(&run_grid);
        let mut errors = Vec::new();
        for (a_min, a_max) in [(0.5, 2.0), (0.25, 4.0), (config.scales.min, config.scales.max)] {
            let grid = CwtGrid::log_spaced(a_min, a_max, config.scales.count, spins.clone(), run_grid.clone())?;
            let tensor = cwt_analyze(&f, &psi, &grid)?;
            let rec = reconstruct(&tensor, &psi, z)?;
            errors.push(rec.sub(&f)?.norm_l2() / f.norm_l2());
        }
        checks.push(CheckResult::at_most(
            "wavelet",
            "reconstruction.relative_l2",
            errors[2],
            tol.reconstruction,
        ));
        let monotone = errors[0] > errors[1] && errors[1] > errors[2];
        checks.push(
            CheckResult::bounded(
                "wavelet",
                "reconstruction.monotone_in_scale_range",
                f64::from(u8::from(monotone)),
                1.0,
                1.0,
            )
            .with_note(format!(
                "errors {} > {} > {}",
                fmt_float(errors[0]),
                fmt_float(errors[1]),
                fmt_float(errors[2])
            )),
        );
    }
    Ok(())
}

/// C_ψ evaluated on the dedicated admissibility grid for the configured
/// wavelet family (finer cell than the run grid, keeps the constant stable).
fn reference_c_psi(config: &RunConfig) -> Result<f64> {
    match config.wavelet.as_str() {
        "vector-gaussian" | "mexican-hat" | "gaussian" => {
            let grid = admissibility_grid(config.n)?;
            Ok(admissibility(&build_wavelet(&config.wavelet, &grid)?)?.c_psi)
        }
        _ => {
            let psi = config.wavelet_on(&config.grid()?)?;
            Ok(admissibility(&psi)?.c_psi)
        }
    }
}

/// Plancherel normalizer Z_ψ for a wavelet: built-ins are measured on their
/// reference admissibility grid, sampled wavelets on their own grid.
pub fn normalizer_for(psi: &MotherWavelet) -> Result<f64> {
    use crate::wavelet::WaveletKind;
    let c = match psi.kind() {
        WaveletKind::VectorGaussian | WaveletKind::MexicanHat => {
            let grid = admissibility_grid(psi.dim())?;
            let reference = build_wavelet(
                if psi.kind() == WaveletKind::VectorGaussian {
                    "vector-gaussian"
                } else {
                    "mexican-hat"
                },
                &grid,
            )?;
            admissibility(&reference)?.c_psi
        }
        WaveletKind::Sampled => admissibility(psi)?.c_psi,
    };
    Ok(plancherel_normalizer(psi.dim(), c))
}

fn uncertainty_checks(config: &RunConfig, corpus: &[CorpusItem], checks: &mut Vec<CheckResult>) -> Result<()> {
    let tol = &config.tolerances;
    let grid = config.grid()?;
    let n = config.n;

    // saturation by the isotropic Gaussian
    let gauss = CliffordField::from_fn(grid.clone(), n, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Multivector::real_scalar(n, (-r2 / 2.0).exp())
    });
    for axis in 1..=n {
        let report = fourier_uncertainty(&gauss, axis)?;
        checks.push(CheckResult::bounded(
            "uncertainty",
            format!("fourier.saturation.axis{axis}"),
            report.ratio,
            1.0 - tol.fourier_saturation,
            1.0 + tol.fourier_saturation,
        ));
    }

    // the Fourier bound over the corpus
    let mut min_ratio = f64::INFINITY;
    for item in corpus {
        let f = item.sample(&grid);
        for axis in 1..=n {
            min_ratio = min_ratio.min(fourier_uncertainty(&f, axis)?.ratio);
        }
    }
    if corpus.is_empty() {
        min_ratio = 1.0;
    }
    checks.push(CheckResult::at_least("uncertainty", "fourier.min_ratio.corpus", min_ratio, 1.0));

    // wavelet-side checks need an admissible wavelet
    let psi = config.wavelet_on(&grid)?;
    if admissibility(&psi).is_err() {
        checks.push(
            CheckResult::bounded("uncertainty", "wavelet_checks_skipped", 0.0, 1.0, 1.0)
                .with_note("configured wavelet is not admissible"),
        );
        return Ok(());
    }
    let z = plancherel_normalizer(n, reference_c_psi(config)?);
    let spins = haar_quadrature(n, config.spins)?;
    let cwt_grid = CwtGrid::log_spaced(
        config.scales.min,
        config.scales.max,
        config.scales.count,
        spins.clone(),
        grid.clone(),
    )?;

    let mut first_ratio = None;
    for (i, item) in corpus.iter().enumerate() {
        let f = item.sample(&grid);
        for lemma in lemma_check_all(&f, &psi, &cwt_grid, z)? {
            checks.push(CheckResult::bounded(
                "uncertainty",
                format!("lemma.ratio.field{i}.axis{}", lemma.axis),
                lemma.ratio,
                tol.lemma_lo,
                tol.lemma_hi,
            ));
        }
        for report in wavelet_uncertainty_all(&f, &psi, &cwt_grid, z)? {
            checks.push(CheckResult::at_least(
                "uncertainty",
                format!("wavelet.ratio.field{i}.axis{}", report.axis),
                report.ratio,
                tol.wavelet_uncertainty_min,
            ));
            checks.push(CheckResult::at_least(
                "uncertainty",
                format!("wavelet.chain_ratio.field{i}.axis{}", report.axis),
                report.chain_ratio.unwrap_or(1.0),
                tol.wavelet_uncertainty_min,
            ));
            if first_ratio.is_none() {
                first_ratio = Some(report.ratio);
            }
        }
    }

    // refinement: the pass margin must not shrink by more than the budget
    if let (Some(first), Some(coarse_ratio)) = (corpus.first(), first_ratio) {
        let fine_grid = config.refined_grid()?;
        let fine_psi = config.wavelet_on(&fine_grid)?;
        let fine_cwt = CwtGrid::log_spaced(
            config.scales.min,
            config.scales.max,
            config.scales.count,
            spins,
            fine_grid.clone(),
        )?;
        let fine = wavelet_uncertainty_all(&first.sample(&fine_grid), &fine_psi, &fine_cwt, z)?
            .remove(0);
        checks.push(
            CheckResult::at_least(
                "uncertainty",
                "wavelet.refinement_margin",
                fine.ratio - (coarse_ratio - tol.refinement_margin),
                0.0,
            )
            .with_note(format!(
                "coarse {} fine {}",
                fmt_float(coarse_ratio),
                fmt_float(fine.ratio)
            )),
        );
    }
    Ok(())
}

fn serialization_checks(checks: &mut Vec<CheckResult>) -> Result<()> {
    let grid = GridSpec::centered_span(2, 9, 4.0)?;
    let field = CliffordField::from_fn(grid, 2, |x| {
        let mut mv = Multivector::real_scalar(2, x[0] - 0.5 * x[1]);
        mv.set_coeff(0b11, Complex64::new(0.25, -x[0]));
        mv
    });
    let bytes = crate::io::encode_field(&field)?;
    let back = crate::io::decode_field(&bytes)?;
    let identical = crate::io::encode_field(&back)? == bytes;
    checks.push(CheckResult::bounded(
        "serialization",
        "cfield.byte_exact_roundtrip",
        f64::from(u8::from(identical)),
        1.0,
        1.0,
    ));
    let mut broken = bytes.clone();
    broken[3] = b'9';
    let diagnosed = matches!(
        crate::io::decode_field(&broken),
        Err(CliffError::FileFormat { offset: 0, .. })
    );
    checks.push(CheckResult::bounded(
        "serialization",
        "cfield.malformed_magic_diagnosed",
        f64::from(u8::from(diagnosed)),
        1.0,
        1.0,
    ));
    Ok(())
}

/// Run the selected check families and assemble the deterministic report.
pub fn run_verification_suite(config: &RunConfig, selection: SuiteSelection) -> Result<SuiteReport> {
    config.validate()?;
    let corpus = build_corpus(&config.corpus, config.n);
    let mut checks = Vec::new();
    if selection.wants(SuiteSelection::Algebra) {
        algebra_checks(config, &mut checks);
    }
    if selection.wants(SuiteSelection::Fourier) {
        fourier_checks(config, &corpus, &mut checks)?;
    }
    if selection.wants(SuiteSelection::Wavelet) {
        wavelet_checks(config, &corpus, &mut checks)?;
    }
    if selection.wants(SuiteSelection::Uncertainty) {
        uncertainty_checks(config, &corpus, &mut checks)?;
    }
    if selection == SuiteSelection::All {
        serialization_checks(&mut checks)?;
    }
    Ok(SuiteReport {
        config: config.clone(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_is_itself_correct_on_known_cases() {
        assert_eq!(symbol_product_oracle(0b01, 0b10), (1, 0b11));
        assert_eq!(symbol_product_oracle(0b01, 0b01), (-1, 0b00));
        assert_eq!(symbol_product_oracle(0b11, 0b10), (-1, 0b01));
        assert_eq!(symbol_product_oracle(0, 0b101), (1, 0b101));
    }

    #[test]
    fn corpus_is_deterministic() {
        let cfg = CorpusConfig {
            count: 3,
            seed: 11,
            sigma: [1.9, 2.1],
            momentum: [1.2, 1.3],
            center: 0.75,
        };
        let a = build_corpus(&cfg, 2);
        let b = build_corpus(&cfg, 2);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.sigma, y.sigma);
            assert_eq!(x.momentum, y.momentum);
            assert!(x.amplitude.approx_eq(&y.amplitude, 0.0));
            // both momentum components bounded away from zero
            assert!(x.momentum.iter().all(|k| k.abs() > 0.3));
        }
    }

    #[test]
    fn config_validation_reports_the_field() {
        let bad = RunConfig {
            shape: 64,
            ..RunConfig::default()
        };
        match bad.validate() {
            Err(CliffError::Config(msg)) => assert!(msg.contains("shape"), "{msg}"),
            other => panic!("expected Config error, got {other:?}"),
        }
        let json_err = RunConfig::from_json(b"{\"shape\": \"not a number\"}");
        match json_err {
            Err(CliffError::Config(msg)) => assert!(msg.contains("line"), "{msg}"),
            other => panic!("expected Config error, got {other:?}"),
        }
    }

    #[test]
    fn algebra_suite_passes() {
        let config = RunConfig::default();
        let report = run_verification_suite(&config, SuiteSelection::Algebra).unwrap();
        assert!(report.all_pass(), "{}", report.to_csv());
    }

    #[test]
    fn reports_are_deterministic() {
        let config = RunConfig::default();
        let a = run_verification_suite(&config, SuiteSelection::Algebra).unwrap();
        let b = run_verification_suite(&config, SuiteSelection::Algebra).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_json().contains("\"all_pass\": true"));
    }

    #[test]
    fn empty_corpus_yields_empty_corpus_sections() {
        let mut config = RunConfig::default();
        config.corpus.count = 0;
        let report = run_verification_suite(&config, SuiteSelection::Fourier).unwrap();
        // only the corpus-independent Gaussian pair check runs with content
        assert!(report.all_pass(), "{}", report.to_csv());
        assert!(report
            .checks
            .iter()
            .all(|c| !c.id.contains("field")));
    }
}
