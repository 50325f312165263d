//! Finite presentation of a compact homogeneous space and its validation.
//!
//! Everything downstream consumes a [`StructureData`]: the summand dimensions
//! `d_i`, the Killing coefficients `b_i`, the fully symmetric array of squared
//! bracket projections `gamma[i][k][l]`, and (optionally) the isotropy Casimir
//! constants `zeta_i`. All arrays are coordinates with respect to a fixed
//! bi-invariant background product, which is never represented explicitly.
//!
//! A [`LieAlgebraTable`] is the raw input: bracket coefficients of the full
//! algebra in an orthonormal basis together with the isotropy/summand index
//! partition. [`derive_structure`] turns a table into structure data.

use serde::Serialize;
use thiserror::Error;

/// Relative tolerance for the structural identities (symmetry, Jacobi,
/// Casimir). Double precision with O(n^3) accumulations.
pub const STRUCT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("array lengths disagree: {0}")]
    ShapeMismatch(String),
    #[error("summand dimensions must be positive")]
    EmptySummand,
    #[error("metric coefficients must be positive and finite, got {value} at index {index}")]
    NonPositiveMetric { index: usize, value: f64 },
    #[error("tensor coefficients must be nonnegative and finite, got {value} at index {index}")]
    NegativeTensor { index: usize, value: f64 },
    #[error("tensor must not be identically zero")]
    ZeroTensor,
    #[error("gamma entry ({i},{k},{l}) out of range or not sorted i <= k <= l")]
    BadGammaIndex { i: usize, k: usize, l: usize },
    #[error("duplicate gamma entry ({i},{k},{l})")]
    DuplicateGammaEntry { i: usize, k: usize, l: usize },
    #[error("casimir constants are not available")]
    MissingZeta,
}

/// Errors from [`derive_structure`]. Both indicate that a declared summand is
/// not irreducible or that the partition is wrong.
#[derive(Debug, Error)]
pub enum DeriveError {
    #[error("Killing form on summand {block} is not a multiple of the identity (residual {residual:e})")]
    NonProportional { block: usize, residual: f64 },
    #[error("isotropy Casimir operator on summand {block} is not scalar (residual {residual:e})")]
    NonScalarCasimir { block: usize, residual: f64 },
}

/// Fully symmetric nonnegative array indexed by summand triples.
///
/// Stored as the dense `s^3` cube; setters write all six permutations so the
/// symmetry holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamma {
    s: usize,
    vals: Vec<f64>,
}

impl Gamma {
    pub fn zeros(s: usize) -> Self {
        Gamma { s, vals: vec![0.0; s * s * s] }
    }

    /// Builds from entries with sorted indices `i <= k <= l` (0-based),
    /// expanding by symmetry. Duplicate or unsorted indices are rejected.
    pub fn from_sorted_entries(s: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self, DataError> {
        let mut g = Gamma::zeros(s);
        let mut seen = vec![false; s * s * s];
        for &(i, k, l, v) in entries {
            if !(i <= k && k <= l && l < s) {
                return Err(DataError::BadGammaIndex { i, k, l });
            }
            if seen[(i * s + k) * s + l] {
                return Err(DataError::DuplicateGammaEntry { i, k, l });
            }
            seen[(i * s + k) * s + l] = true;
            g.set(i, k, l, v);
        }
        Ok(g)
    }

    /// Builds from a dense cube in row-major (i,k,l) order without symmetrizing.
    pub fn from_cube(s: usize, vals: Vec<f64>) -> Result<Self, DataError> {
        if vals.len() != s * s * s {
            return Err(DataError::ShapeMismatch(format!(
                "gamma cube has {} entries, expected {}",
                vals.len(),
                s * s * s
            )));
        }
        Ok(Gamma { s, vals })
    }

    pub fn summands(&self) -> usize {
        self.s
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize, l: usize) -> f64 {
        self.vals[(i * self.s + k) * self.s + l]
    }

    /// Writes `v` into all six permutations of `(i,k,l)`.
    pub fn set(&mut self, i: usize, k: usize, l: usize, v: f64) {
        let s = self.s;
        for (a, b, e) in [(i, k, l), (i, l, k), (k, i, l), (k, l, i), (l, i, k), (l, k, i)] {
            self.vals[(a * s + b) * s + e] = v;
        }
    }

    /// Sum over the last two indices for a fixed first index.
    pub fn row_sum(&self, i: usize) -> f64 {
        let s = self.s;
        let mut tot = 0.0;
        for k in 0..s {
            for l in 0..s {
                tot += self.get(i, k, l);
            }
        }
        tot
    }

    /// Entries with sorted indices, ascending, skipping exact zeros.
    pub fn sorted_entries(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.s {
            for k in i..self.s {
                for l in k..self.s {
                    let v = self.get(i, k, l);
                    if v != 0.0 {
                        out.push((i, k, l, v));
                    }
                }
            }
        }
        out
    }
}

/// Structure data of a homogeneous space with `s` inequivalent irreducible
/// summands. The solver and curvature kernels consume nothing else.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureData {
    pub label: String,
    /// Summand dimensions `d_i`.
    pub dims: Vec<usize>,
    /// Killing coefficients `b_i >= 0` against the background product.
    pub killing: Vec<f64>,
    gamma: Gamma,
    /// Casimir constants `zeta_i` of the isotropy action, when known.
    pub casimir: Option<Vec<f64>>,
}

impl StructureData {
    pub fn new(
        label: impl Into<String>,
        dims: Vec<usize>,
        killing: Vec<f64>,
        gamma: Gamma,
        casimir: Option<Vec<f64>>,
    ) -> Result<Self, DataError> {
        let s = dims.len();
        if s == 0 {
            return Err(DataError::ShapeMismatch("no summands".into()));
        }
        if dims.contains(&0) {
            return Err(DataError::EmptySummand);
        }
        if killing.len() != s {
            return Err(DataError::ShapeMismatch(format!(
                "killing has {} entries for {} summands",
                killing.len(),
                s
            )));
        }
        if gamma.summands() != s {
            return Err(DataError::ShapeMismatch(format!(
                "gamma is over {} summands, expected {}",
                gamma.summands(),
                s
            )));
        }
        if let Some(z) = &casimir {
            if z.len() != s {
                return Err(DataError::ShapeMismatch(format!(
                    "zeta has {} entries for {} summands",
                    z.len(),
                    s
                )));
            }
        }
        Ok(StructureData { label: label.into(), dims, killing, gamma, casimir })
    }

    pub fn summand_count(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension `n` of the tangent space.
    pub fn dimension(&self) -> usize {
        self.dims.iter().sum()
    }

    #[inline]
    pub fn gamma(&self, i: usize, k: usize, l: usize) -> f64 {
        self.gamma.get(i, k, l)
    }

    pub fn gamma_array(&self) -> &Gamma {
        &self.gamma
    }

    /// Casimir constants: stored ones, or the values forced by the Casimir
    /// identity `d_i b_i = 2 d_i zeta_i + sum_{k,l} gamma[i][k][l]`.
    pub fn casimir_or_derived(&self) -> Vec<f64> {
        match &self.casimir {
            Some(z) => z.clone(),
            None => (0..self.summand_count())
                .map(|i| {
                    let di = self.dims[i] as f64;
                    (di * self.killing[i] - self.gamma.row_sum(i)) / (2.0 * di)
                })
                .collect(),
        }
    }
}

/// Per-summand residuals of the Casimir identity,
/// `r_i = d_i b_i - 2 d_i zeta_i - sum_{k,l} gamma[i][k][l]`.
pub fn casimir_residual(sd: &StructureData) -> Result<Vec<f64>, DataError> {
    let zeta = sd.casimir.as_ref().ok_or(DataError::MissingZeta)?;
    Ok((0..sd.summand_count())
        .map(|i| {
            let di = sd.dims[i] as f64;
            di * sd.killing[i] - 2.0 * di * zeta[i] - sd.gamma.row_sum(i)
        })
        .collect())
}

/// Diagonal coefficients of an invariant metric; all positive.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantMetric {
    coeffs: Vec<f64>,
}

impl InvariantMetric {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, DataError> {
        if coeffs.is_empty() {
            return Err(DataError::ShapeMismatch("empty metric".into()));
        }
        for (index, &value) in coeffs.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(DataError::NonPositiveMetric { index, value });
            }
        }
        Ok(InvariantMetric { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Componentwise rescaling by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> InvariantMetric {
        InvariantMetric { coeffs: self.coeffs.iter().map(|x| lambda * x).collect() }
    }
}

impl std::ops::Index<usize> for InvariantMetric {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coeffs[i]
    }
}

/// Diagonal coefficients of the prescribed tensor; nonnegative, not all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantTensor {
    coeffs: Vec<f64>,
}

impl InvariantTensor {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, DataError> {
        if coeffs.is_empty() {
            return Err(DataError::ShapeMismatch("empty tensor".into()));
        }
        for (index, &value) in coeffs.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(DataError::NegativeTensor { index, value });
            }
        }
        if coeffs.iter().all(|&z| z == 0.0) {
            return Err(DataError::ZeroTensor);
        }
        Ok(InvariantTensor { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl std::ops::Index<usize> for InvariantTensor {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coeffs[i]
    }
}

/// Raw bracket table of the full algebra in an orthonormal basis, with the
/// isotropy/summand index partition. Indices are 0-based internally.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraTable {
    pub dim: usize,
    /// `brackets[(a*dim + b)*dim + e]` is the coefficient of the e-th basis
    /// vector in `[v_a, v_b]`.
    brackets: Vec<f64>,
    pub isotropy: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
}

impl LieAlgebraTable {
    pub fn new(
        dim: usize,
        brackets: Vec<f64>,
        isotropy: Vec<usize>,
        blocks: Vec<Vec<usize>>,
    ) -> Result<Self, DataError> {
        if brackets.len() != dim * dim * dim {
            return Err(DataError::ShapeMismatch(format!(
                "bracket cube has {} entries, expected {}",
                brackets.len(),
                dim * dim * dim
            )));
        }
        let mut seen = vec![false; dim];
        let mut mark = |idx: usize| -> Result<(), DataError> {
            if idx >= dim {
                return Err(DataError::ShapeMismatch(format!("basis index {idx} out of range")));
            }
            if seen[idx] {
                return Err(DataError::ShapeMismatch(format!("basis index {idx} used twice")));
            }
            seen[idx] = true;
            Ok(())
        };
        for &j in &isotropy {
            mark(j)?;
        }
        if blocks.is_empty() {
            return Err(DataError::ShapeMismatch("no summand blocks".into()));
        }
        for blk in &blocks {
            if blk.is_empty() {
                return Err(DataError::EmptySummand);
            }
            for &a in blk {
                mark(a)?;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(DataError::ShapeMismatch(
                "isotropy and summand blocks must partition the whole basis".into(),
            ));
        }
        Ok(LieAlgebraTable { dim, brackets, isotropy, blocks })
    }

    /// Builds the cube from sparse entries `(a, b, e, value)` with `a < b`,
    /// filling `(b, a, e)` with the opposite sign.
    pub fn from_entries(
        dim: usize,
        entries: &[(usize, usize, usize, f64)],
        isotropy: Vec<usize>,
        blocks: Vec<Vec<usize>>,
    ) -> Result<Self, DataError> {
        let mut cube = vec![0.0; dim * dim * dim];
        let mut seen = vec![false; dim * dim * dim];
        for &(a, b, e, v) in entries {
            if !(a < b && b < dim && e < dim) {
                return Err(DataError::ShapeMismatch(format!(
                    "bracket entry ({a},{b},{e}) must satisfy a < b with all indices in range"
                )));
            }
            if seen[(a * dim + b) * dim + e] {
                return Err(DataError::ShapeMismatch(format!(
                    "duplicate bracket entry ({a},{b},{e})"
                )));
            }
            seen[(a * dim + b) * dim + e] = true;
            cube[(a * dim + b) * dim + e] = v;
            cube[(b * dim + a) * dim + e] = -v;
        }
        LieAlgebraTable::new(dim, cube, isotropy, blocks)
    }

    #[inline]
    pub fn bracket(&self, a: usize, b: usize, e: usize) -> f64 {
        self.brackets[(a * self.dim + b) * self.dim + e]
    }

    /// Entries with `a < b` and nonzero value, ascending.
    pub fn sparse_entries(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in (a + 1)..self.dim {
                for e in 0..self.dim {
                    let v = self.bracket(a, b, e);
                    if v != 0.0 {
                        out.push((a, b, e, v));
                    }
                }
            }
        }
        out
    }

    fn max_abs_bracket(&self) -> f64 {
        self.brackets.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// One violated invariant, with indices and magnitude.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub indices: Vec<usize>,
    pub magnitude: f64,
    pub message: String,
}

/// Outcome of a validation pass. Violations are data, not failures.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, code: &'static str, indices: Vec<usize>, magnitude: f64, message: String) {
        self.violations.push(Violation { code, indices, magnitude, message });
    }
}

/// Checks every invariant of [`StructureData`] at tolerance [`STRUCT_TOL`]
/// (relative where a scale exists).
pub fn validate_structure(sd: &StructureData) -> ValidationReport {
    let mut report = ValidationReport::default();
    let s = sd.summand_count();

    let n = sd.dimension();
    if n < 3 {
        report.push(
            "DimensionTooSmall",
            vec![],
            n as f64,
            format!("total dimension {n} is below 3"),
        );
    }

    for (i, &bi) in sd.killing.iter().enumerate() {
        if !bi.is_finite() || bi < 0.0 {
            report.push(
                "KillingNegative",
                vec![i],
                bi,
                format!("killing coefficient b[{i}] = {bi} must be nonnegative"),
            );
        }
    }

    // symmetry and sign of gamma
    let mut gmax: f64 = 0.0;
    for i in 0..s {
        for k in 0..s {
            for l in 0..s {
                gmax = gmax.max(sd.gamma(i, k, l).abs());
            }
        }
    }
    let gtol = STRUCT_TOL * gmax.max(1.0);
    for i in 0..s {
        for k in 0..s {
            for l in 0..s {
                let v = sd.gamma(i, k, l);
                if !v.is_finite() || v < -gtol {
                    report.push(
                        "GammaNegative",
                        vec![i, k, l],
                        v,
                        format!("gamma[{i}][{k}][{l}] = {v} must be nonnegative"),
                    );
                }
                for (a, b, e) in [(i, l, k), (k, i, l), (k, l, i), (l, i, k), (l, k, i)] {
                    let w = sd.gamma(a, b, e);
                    let delta = (v - w).abs();
                    if delta > gtol {
                        report.push(
                            "GammaAsymmetry",
                            vec![i, k, l, a, b, e],
                            delta,
                            format!(
                                "gamma[{i}][{k}][{l}] = {v} differs from gamma[{a}][{b}][{e}] = {w}"
                            ),
                        );
                    }
                }
            }
        }
    }

    if let Some(zeta) = &sd.casimir {
        for (i, &zi) in zeta.iter().enumerate() {
            if !zi.is_finite() || zi < 0.0 {
                report.push(
                    "CasimirNegative",
                    vec![i],
                    zi,
                    format!("zeta[{i}] = {zi} must be nonnegative"),
                );
            }
        }
        if let Ok(residuals) = casimir_residual(sd) {
            for (i, &r) in residuals.iter().enumerate() {
                let scale = (sd.dims[i] as f64 * sd.killing[i]).abs().max(1.0);
                if r.abs() > STRUCT_TOL * scale {
                    report.push(
                        "CasimirMismatch",
                        vec![i],
                        r,
                        format!("Casimir identity fails on summand {i} with residual {r:e}"),
                    );
                }
            }
        }
    }

    report
}

/// Checks the bracket-table invariants: antisymmetry in the first two slots,
/// full antisymmetry (invariance of the background product), the Jacobi
/// identity, closedness of the isotropy algebra, and stability of each
/// summand block under the isotropy action.
pub fn validate_table(t: &LieAlgebraTable) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = t.dim;
    let cmax = t.max_abs_bracket();
    let lin_tol = STRUCT_TOL * cmax.max(1.0);
    let quad_tol = STRUCT_TOL * (cmax * cmax * n as f64).max(1.0);

    for a in 0..n {
        for b in 0..n {
            for e in 0..n {
                let delta = (t.bracket(a, b, e) + t.bracket(b, a, e)).abs();
                if delta > lin_tol {
                    report.push(
                        "BracketNotAntisymmetric",
                        vec![a, b, e],
                        delta,
                        format!("c[{a}][{b}][{e}] + c[{b}][{a}][{e}] = {delta:e}"),
                    );
                }
                // invariance: antisymmetry in the last two slots
                let delta2 = (t.bracket(a, b, e) + t.bracket(a, e, b)).abs();
                if delta2 > lin_tol {
                    report.push(
                        "BracketNotFullyAntisymmetric",
                        vec![a, b, e],
                        delta2,
                        format!("c[{a}][{b}][{e}] + c[{a}][{e}][{b}] = {delta2:e}"),
                    );
                }
            }
        }
    }

    for a in 0..n {
        for b in (a + 1)..n {
            for e in (b + 1)..n {
                for r in 0..n {
                    let mut jac = 0.0;
                    for q in 0..n {
                        jac += t.bracket(a, b, q) * t.bracket(q, e, r)
                            + t.bracket(b, e, q) * t.bracket(q, a, r)
                            + t.bracket(e, a, q) * t.bracket(q, b, r);
                    }
                    if jac.abs() > quad_tol {
                        report.push(
                            "JacobiViolation",
                            vec![a, b, e, r],
                            jac,
                            format!("Jacobi identity fails on ({a},{b},{e}) with residual {jac:e}"),
                        );
                    }
                }
            }
        }
    }

    let in_isotropy = {
        let mut mask = vec![false; n];
        for &j in &t.isotropy {
            mask[j] = true;
        }
        mask
    };
    for &a in &t.isotropy {
        for &b in &t.isotropy {
            for (e, &inside) in in_isotropy.iter().enumerate() {
                if !inside && t.bracket(a, b, e).abs() > lin_tol {
                    report.push(
                        "IsotropyNotClosed",
                        vec![a, b, e],
                        t.bracket(a, b, e),
                        format!("[h,h] leaks out of the isotropy algebra at ({a},{b},{e})"),
                    );
                }
            }
        }
    }

    for (bi, blk) in t.blocks.iter().enumerate() {
        let in_block = {
            let mut mask = vec![false; n];
            for &a in blk {
                mask[a] = true;
            }
            mask
        };
        for &j in &t.isotropy {
            for &a in blk {
                for (e, &inside) in in_block.iter().enumerate() {
                    if !inside && t.bracket(j, a, e).abs() > lin_tol {
                        report.push(
                            "BlockNotStable",
                            vec![bi, j, a, e],
                            t.bracket(j, a, e),
                            format!("summand {bi} is not stable: [v{j}, v{a}] has a component on v{e}"),
                        );
                    }
                }
            }
        }
    }

    report
}

/// Derives [`StructureData`] from a bracket table: `gamma` by direct
/// summation of squared projections, `b_i` from the Killing form (full trace
/// of `ad . ad`), and `zeta_i` from the isotropy Casimir operator.
pub fn derive_structure(t: &LieAlgebraTable) -> Result<StructureData, DeriveError> {
    let s = t.blocks.len();
    let n = t.dim;
    let dims: Vec<usize> = t.blocks.iter().map(|b| b.len()).collect();

    // The sum for a sorted triple equals the sum for any permutation of it
    // once the table is fully antisymmetric, so computing i <= k <= l and
    // mirroring makes the output symmetric by construction.
    let mut gamma = Gamma::zeros(s);
    for i in 0..s {
        for k in i..s {
            for l in k..s {
                let mut tot = 0.0;
                for &a in &t.blocks[i] {
                    for &b in &t.blocks[k] {
                        for &e in &t.blocks[l] {
                            let v = t.bracket(a, b, e);
                            tot += v * v;
                        }
                    }
                }
                gamma.set(i, k, l, tot);
            }
        }
    }

    // Killing form B(v_a, v_b) = tr(ad v_a . ad v_b), full trace without
    // antisymmetry shortcuts.
    let killing_form = |a: usize, b: usize| -> f64 {
        let mut tot = 0.0;
        for p in 0..n {
            for q in 0..n {
                tot += t.bracket(a, q, p) * t.bracket(b, p, q);
            }
        }
        tot
    };

    let scale = {
        let c = t.max_abs_bracket();
        (c * c * n as f64).max(1.0)
    };
    let mut killing = Vec::with_capacity(s);
    for (bi, blk) in t.blocks.iter().enumerate() {
        let d = blk.len() as f64;
        let mut trace = 0.0;
        for &a in blk {
            trace += killing_form(a, a);
        }
        let coeff = -trace / d;
        let mut residual: f64 = 0.0;
        for (r, &a) in blk.iter().enumerate() {
            for (c, &b) in blk.iter().enumerate() {
                let expected = if r == c { -coeff } else { 0.0 };
                residual = residual.max((killing_form(a, b) - expected).abs());
            }
        }
        if residual > STRUCT_TOL * scale {
            return Err(DeriveError::NonProportional { block: bi, residual });
        }
        killing.push(coeff);
    }

    let mut casimir = Vec::with_capacity(s);
    for (bi, blk) in t.blocks.iter().enumerate() {
        let d = blk.len();
        // M = -(sum_j ad w_j . ad w_j) restricted to the block
        let mut m = vec![0.0; d * d];
        for &j in &t.isotropy {
            for (r, &a) in blk.iter().enumerate() {
                for (c, &e) in blk.iter().enumerate() {
                    let mut acc = 0.0;
                    for q in 0..n {
                        acc += t.bracket(j, a, q) * t.bracket(j, q, e);
                    }
                    m[r * d + c] -= acc;
                }
            }
        }
        let zeta = (0..d).map(|r| m[r * d + r]).sum::<f64>() / d as f64;
        let mut residual: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                let expected = if r == c { zeta } else { 0.0 };
                residual = residual.max((m[r * d + c] - expected).abs());
            }
        }
        if residual > STRUCT_TOL * scale {
            return Err(DeriveError::NonScalarCasimir { block: bi, residual });
        }
        casimir.push(zeta);
    }

    Ok(StructureData {
        label: String::new(),
        dims,
        killing,
        gamma,
        casimir: Some(casimir),
    })
}
