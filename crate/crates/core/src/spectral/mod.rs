//! Convolution operators of symmetric subsets and their spectra on the
//! augmentation ideal.
//!
//! For a symmetric `B ⊆ G` the operator `X` has `x_{g,h} = 1` iff
//! `h^-1 g ∈ B`, so `(Xv)_g = Σ_{b∈B} v_{gb}`. The all-ones vector `e` is an
//! eigenvector with eigenvalue `|B|` and `X` preserves `I = e^⊥`. Counting
//! entries gives `tr(X²) = n|B|`, while every eigenvalue on `I` occurs with
//! multiplicity at least `k`; hence `max |λ|² ≤ n|B|/k` on `I`.

mod lanczos;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::subset::SubsetMask;
use crate::{par, seed, Limits};

/// Slack allowed when comparing a computed spectral radius with the bound.
pub const VERIFICATION_SLACK: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Dense up to the dense cap, Lanczos above it.
    Auto,
    Dense,
    Lanczos,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectralConfig {
    pub method: Method,
    /// Residual tolerance for the iterative solver.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Seed for the Lanczos start vector.
    pub seed: u64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            method: Method::Auto,
            tolerance: 1e-10,
            max_iterations: 10_000,
            seed: 0,
        }
    }
}

/// Right convolution by the indicator of a symmetric subset.
#[derive(Clone, Debug)]
pub struct ConvolutionOperator<'g> {
    group: &'g FiniteGroup,
    subset: SubsetMask,
    elements: Vec<usize>,
}

/// Exact integer facts about the entries of `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EntryCounts {
    /// Every row and every column sums to `|B|`.
    pub row_sums_ok: bool,
    /// `Xe = |B| e`, checked in integer arithmetic.
    pub xe_exact: bool,
    /// Number of nonzero entries, which is `tr(X²)` since `X` is a symmetric 0/1 matrix.
    pub trace_x2: u64,
}

pub fn build_operator<'g>(group: &'g FiniteGroup, subset: &SubsetMask, limits: &Limits) -> Result<ConvolutionOperator<'g>> {
    let n = group.order();
    subset.check_universe(n)?;
    if n > limits.enumeration {
        return Err(Error::CapExceeded {
            what: "group order",
            value: n as u128,
            cap: limits.enumeration as u128,
        });
    }
    if let Some((element, inverse)) = subset.symmetry_violation(group) {
        return Err(Error::AsymmetricSubset { element, inverse });
    }
    let op = ConvolutionOperator {
        group,
        subset: subset.clone(),
        elements: subset.to_vec(),
    };
    let counts = op.entry_counts(limits);
    if !counts.row_sums_ok {
        return Err(Error::TheoremViolation("convolution operator row sums differ from |B|".into()));
    }
    Ok(op)
}

impl<'g> ConvolutionOperator<'g> {
    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn subset(&self) -> &SubsetMask {
        &self.subset
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn subset_size(&self) -> usize {
        self.elements.len()
    }

    /// Entry `x_{g,h}` straight from the definition.
    pub fn entry(&self, g: usize, h: usize) -> bool {
        self.subset.contains(self.group.multiply(self.group.inverse(h), g))
    }

    /// `v ↦ Xv`, parallel over rows.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        par::map_range(self.dim(), |g| self.elements.iter().map(|&b| v[self.group.multiply(g, b)]).sum())
    }

    /// Materialized matrix, built entrywise from the definition.
    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let rows = par::map_range(n, |g| (0..n).map(|h| if self.entry(g, h) { 1.0 } else { 0.0 }).collect::<Vec<f64>>());
        DMatrix::from_fn(n, n, |i, j| rows[i][j])
    }

    /// Counts entries exactly. Up to the dense cap each entry is tested
    /// against the definition; above it the rows are read from the
    /// neighbour lists `{gb^-1}`.
    pub fn entry_counts(&self, limits: &Limits) -> EntryCounts {
        let n = self.dim();
        let size = self.elements.len() as u64;
        let rows: Vec<(u64, Vec<u32>)> = if n <= limits.dense {
            par::map_range(n, |g| {
                let cols: Vec<u32> = (0..n).filter(|&h| self.entry(g, h)).map(|h| h as u32).collect();
                (cols.len() as u64, cols)
            })
        } else {
            par::map_range(n, |g| {
                let mut cols: Vec<u32> = self
                    .elements
                    .iter()
                    .map(|&b| self.group.multiply(g, self.group.inverse(b)) as u32)
                    .collect();
                cols.sort_unstable();
                cols.dedup();
                (cols.len() as u64, cols)
            })
        };
        let mut col_sums = vec![0u64; n];
        for (_, cols) in &rows {
            for &h in cols {
                col_sums[h as usize] += 1;
            }
        }
        let row_sums_ok = rows.iter().all(|(r, _)| *r == size) && col_sums.iter().all(|&c| c == size);
        let ones = vec![1u64; n];
        let xe: Vec<u64> = rows.iter().map(|(_, cols)| cols.iter().map(|&h| ones[h as usize]).sum()).collect();
        EntryCounts {
            row_sums_ok,
            xe_exact: xe.iter().all(|&x| x == size),
            trace_x2: rows.iter().map(|(r, _)| r).sum(),
        }
    }

    /// Largest `|X(g·v) − g·(Xv)|` over seeded random `g` and `v`, where
    /// `(g·v)_h = v_{g^-1 h}`.
    pub fn equivariance_residual(&self, samples: usize, seed: u64) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for t in 0..samples {
            let mut rng = seed::stream(seed, &[0xE0], t as u64);
            let g = self.group.random_element(&mut rng);
            let gi = self.group.inverse(g);
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let translate = |w: &[f64]| (0..n).map(|h| w[self.group.multiply(gi, h)]).collect::<Vec<f64>>();
            let lhs = self.apply(&translate(&v));
            let rhs = translate(&self.apply(&v));
            for (a, b) in lhs.iter().zip(&rhs) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverInfo {
    pub method: Method,
    pub iterations: usize,
    pub tolerance: f64,
    /// Largest Ritz residual (zero for the dense path).
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub subset_size: usize,
    pub k: u64,
    /// Top eigenvalue of `X`, which should equal `|B|`.
    pub lambda_top: f64,
    /// Largest `|λ|` over eigenvalues of `X` restricted to the augmentation ideal.
    pub max_abs_on_ideal: f64,
    /// Largest and smallest eigenvalues on the ideal.
    pub max_on_ideal: f64,
    pub min_on_ideal: f64,
    /// `sqrt(n|B|/k)`.
    pub bound: f64,
    pub trace_x2: u64,
    pub trace_expected: u64,
    pub xe_exact: bool,
    pub row_sums_ok: bool,
    pub top_residual: f64,
    pub solver: SolverInfo,
    /// Full spectrum on the ideal, ascending (dense path only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal_spectrum: Option<Vec<f64>>,
}

impl SpectralReport {
    pub fn trace_identity_holds(&self) -> bool {
        self.trace_x2 == self.trace_expected
    }
}

fn resolve_method(cfg: &SpectralConfig, n: usize, limits: &Limits) -> Result<Method> {
    match cfg.method {
        Method::Auto if n <= limits.dense => Ok(Method::Dense),
        Method::Auto => Ok(Method::Lanczos),
        Method::Dense if n > limits.dense => Err(Error::CapExceeded {
            what: "dense operator order",
            value: n as u128,
            cap: limits.dense as u128,
        }),
        m => Ok(m),
    }
}

/// Spectrum of `X` on `I = e^⊥`, together with the exact entry counts.
pub fn spectrum_on_ideal(op: &ConvolutionOperator<'_>, k: u64, cfg: &SpectralConfig, limits: &Limits) -> Result<SpectralReport> {
    let n = op.dim();
    let b = op.subset_size();
    let counts = op.entry_counts(limits);
    let method = resolve_method(cfg, n, limits)?;
    let (lambda_top, (lo, hi), ideal_spectrum, solver) = match method {
        Method::Dense => {
            let eigen = SymmetricEigen::new(op.dense());
            let mut values: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
            values.sort_by(f64::total_cmp);
            let top = values.last().copied().unwrap_or(0.0);
            // spec(X) = {|B|} ⊎ spec(X|_I); drop the copy of |B| carried by e.
            let drop = values
                .iter()
                .enumerate()
                .min_by(|x, y| (x.1 - b as f64).abs().total_cmp(&(y.1 - b as f64).abs()))
                .map(|(i, _)| i);
            if let Some(i) = drop {
                values.remove(i);
            }
            let extremes = match (values.first(), values.last()) {
                (Some(&lo), Some(&hi)) => (lo, hi),
                _ => (0.0, 0.0),
            };
            let info = SolverInfo {
                method,
                iterations: 0,
                tolerance: 0.0,
                residual: 0.0,
            };
            (top, extremes, Some(values), info)
        }
        _ => {
            let run = lanczos::extreme_on_ideal(op, cfg)?;
            // e spans the complement of I, so its Rayleigh quotient is λ₁.
            let xe = op.apply(&vec![1.0; n]);
            let top = xe.iter().sum::<f64>() / n as f64;
            let info = SolverInfo {
                method,
                iterations: run.iterations,
                tolerance: cfg.tolerance,
                residual: run.residual,
            };
            (top, (run.min, run.max), None, info)
        }
    };
    let bound = ((n * b) as f64 / k as f64).sqrt();
    Ok(SpectralReport {
        n,
        subset_size: b,
        k,
        lambda_top,
        max_abs_on_ideal: lo.abs().max(hi.abs()),
        max_on_ideal: hi,
        min_on_ideal: lo,
        bound,
        trace_x2: counts.trace_x2,
        trace_expected: (n * b) as u64,
        xe_exact: counts.xe_exact,
        row_sums_ok: counts.row_sums_ok,
        top_residual: (lambda_top - b as f64).abs(),
        solver,
        ideal_spectrum,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingCheck {
    pub holds: bool,
    /// `n|B|/k − (max|λ| on I)²`.
    pub margin: f64,
    pub report: SpectralReport,
}

/// Checks `(max|λ| on I)² ≤ n|B|/k`. A failure means a bug, never a
/// legitimate outcome.
pub fn verify_mixing_bound(
    group: &FiniteGroup,
    subset: &SubsetMask,
    k: u64,
    cfg: &SpectralConfig,
    limits: &Limits,
) -> Result<MixingCheck> {
    let op = build_operator(group, subset, limits)?;
    let report = spectrum_on_ideal(&op, k, cfg, limits)?;
    let rhs = (report.n * report.subset_size) as f64 / k as f64;
    let lhs = report.max_abs_on_ideal * report.max_abs_on_ideal;
    Ok(MixingCheck {
        holds: lhs <= rhs + VERIFICATION_SLACK,
        margin: rhs - lhs,
        report,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStatus {
    Found,
    CertifiedNone,
}

/// Which of `A`, `B`, `C` served as the symmetric middle factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MiddleSet {
    A,
    B,
    C,
}

/// Lower bound on the number of solutions of `ab = c`, from the spectrum of
/// the symmetric set's operator.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralCertificate {
    pub middle: MiddleSet,
    pub max_abs_on_ideal: f64,
    /// `|A||B||C|/n − λ ‖u‖ ‖w‖` with `u`, `w` the ideal components.
    pub lower_bound: f64,
    /// Exact number of pairs `(a, b) ∈ A×B` with `ab ∈ C`.
    pub solutions: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleWitness {
    pub status: WitnessStatus,
    pub witness: Option<(usize, usize, usize)>,
    /// `n³/k`.
    pub threshold: f64,
    pub above_threshold: bool,
    /// Pairs of `A×B` examined in index order up to and including the witness.
    pub pairs_scanned: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SpectralCertificate>,
}

/// Searches for `a ∈ A`, `b ∈ B` with `ab ∈ C`, scanning `A×B` in index
/// order. Above `|A||B||C| > n³/k` a witness must exist. With `spectral`
/// set and one of the sets symmetric, a counting certificate is attached.
pub fn mixing_triple_witness(
    group: &FiniteGroup,
    a: &SubsetMask,
    b: &SubsetMask,
    c: &SubsetMask,
    k: u64,
    spectral: Option<(&SpectralConfig, &Limits)>,
) -> Result<TripleWitness> {
    let n = group.order();
    for s in [a, b, c] {
        s.check_universe(n)?;
    }
    let av = a.to_vec();
    let bv = b.to_vec();
    let found = par::find_map_first(av.len(), |i| {
        let x = av[i];
        bv.iter()
            .enumerate()
            .find_map(|(j, &y)| {
                let z = group.multiply(x, y);
                c.contains(z).then_some((i, j, (x, y, z)))
            })
    });
    let threshold = (n as f64).powi(3) / k as f64;
    let above = (a.len() as f64) * (b.len() as f64) * (c.len() as f64) > threshold;
    let pairs_scanned = match found {
        Some((i, j, _)) => (i * bv.len() + j + 1) as u64,
        None => (av.len() * bv.len()) as u64,
    };
    if found.is_none() && above {
        return Err(Error::TheoremViolation(format!(
            "no solution of ab = c although |A||B||C| exceeds n^3/k = {threshold}"
        )));
    }
    let certificate = match spectral {
        Some((cfg, limits)) => spectral_certificate(group, a, b, c, k, cfg, limits)?,
        None => None,
    };
    Ok(TripleWitness {
        status: if found.is_some() {
            WitnessStatus::Found
        } else {
            WitnessStatus::CertifiedNone
        },
        witness: found.map(|(_, _, w)| w),
        threshold,
        above_threshold: above,
        pairs_scanned,
        certificate,
    })
}

/// Rewrites `ab = c` so the symmetric set sits in the middle:
/// `c^-1 · a = b^-1` for symmetric `A`, `a^-1 · c = b` for symmetric `C`.
fn spectral_certificate(
    group: &FiniteGroup,
    a: &SubsetMask,
    b: &SubsetMask,
    c: &SubsetMask,
    k: u64,
    cfg: &SpectralConfig,
    limits: &Limits,
) -> Result<Option<SpectralCertificate>> {
    let (middle, left, mid, right) = if b.symmetry_violation(group).is_none() {
        (MiddleSet::B, a.clone(), b.clone(), c.clone())
    } else if a.symmetry_violation(group).is_none() {
        (MiddleSet::A, c.inverse_image(group), a.clone(), b.inverse_image(group))
    } else if c.symmetry_violation(group).is_none() {
        (MiddleSet::C, a.inverse_image(group), c.clone(), b.clone())
    } else {
        return Ok(None);
    };
    let op = build_operator(group, &mid, limits)?;
    let report = spectrum_on_ideal(&op, k, cfg, limits)?;
    let n = group.order() as f64;
    let solutions = count_solutions(group, &left, &mid, &right);
    let (l, m, r) = (left.len() as f64, mid.len() as f64, right.len() as f64);
    let lower_bound = l * m * r / n - report.max_abs_on_ideal * (l - l * l / n).sqrt() * (r - r * r / n).sqrt();
    if lower_bound > solutions as f64 + VERIFICATION_SLACK {
        return Err(Error::TheoremViolation(format!(
            "spectral lower bound {lower_bound} exceeds the {solutions} actual solutions"
        )));
    }
    Ok(Some(SpectralCertificate {
        middle,
        max_abs_on_ideal: report.max_abs_on_ideal,
        lower_bound,
        solutions,
    }))
}

fn count_solutions(group: &FiniteGroup, a: &SubsetMask, b: &SubsetMask, c: &SubsetMask) -> u64 {
    let av = a.to_vec();
    let bv = b.to_vec();
    par::fold_range(
        av.len(),
        || 0u64,
        |acc, i| acc + bv.iter().filter(|&&y| c.contains(group.multiply(av[i], y))).count() as u64,
        |x, y| x + y,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::matrix::MatrixKind;
    use crate::Family;
    use std::f64::consts::PI;

    fn group(f: Family) -> FiniteGroup {
        f.construct(&Limits::default()).unwrap()
    }

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn empty_and_full_subsets() {
        let g = group(Family::Alternating(4));
        let empty = SubsetMask::empty(12);
        let op = build_operator(&g, &empty, &limits()).unwrap();
        assert!(op.apply(&[1.0; 12]).iter().all(|&x| x == 0.0));
        let r = spectrum_on_ideal(&op, 1, &SpectralConfig::default(), &limits()).unwrap();
        assert_eq!(r.max_abs_on_ideal, 0.0);

        let full = SubsetMask::full(12);
        let op = build_operator(&g, &full, &limits()).unwrap();
        assert!(op.apply(&[1.0; 12]).iter().all(|&x| x == 12.0));
        let r = spectrum_on_ideal(&op, 1, &SpectralConfig::default(), &limits()).unwrap();
        assert!(r.max_abs_on_ideal < 1e-9);
        assert!((r.lambda_top - 12.0).abs() < 1e-9);
    }

    #[test]
    fn asymmetric_subset_is_rejected() {
        let g = group(Family::Cyclic(5));
        let b = SubsetMask::from_indices(5, [1]).unwrap();
        let err = build_operator(&g, &b, &limits()).unwrap_err();
        assert_eq!(err, Error::AsymmetricSubset { element: 1, inverse: 4 });
    }

    /// Eigenvalues of right convolution on C(m), one per character j:
    /// `Σ_{b∈B} cos(2π j b / m)` (B symmetric, element i is the i-th power).
    fn cyclic_oracle(m: usize, b: &[usize]) -> Vec<f64> {
        let mut v: Vec<f64> = (0..m)
            .map(|j| b.iter().map(|&x| (2.0 * PI * (j * x) as f64 / m as f64).cos()).sum())
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn cyclic_spectrum_matches_dft() {
        for m in [4usize, 7, 12, 30] {
            let g = group(Family::Cyclic(m));
            let gen = g.generators()[0];
            let elem = |i: i64| g.pow(gen, i);
            for set in [vec![1i64, -1], vec![1, -1, 2, -2], vec![0, 3, -3]] {
                let idx: Vec<usize> = set.iter().map(|&i| elem(i)).collect();
                let mask = SubsetMask::from_indices(m, idx).unwrap();
                let powers: Vec<usize> = mask
                    .iter()
                    .map(|x| (0..m).find(|&i| elem(i as i64) == x).unwrap())
                    .collect();
                let mut oracle = cyclic_oracle(m, &powers);
                let top = oracle.iter().position(|&x| (x - powers.len() as f64).abs() < 1e-9).unwrap();
                oracle.remove(top);
                let op = build_operator(&g, &mask, &limits()).unwrap();
                let r = spectrum_on_ideal(&op, 1, &SpectralConfig::default(), &limits()).unwrap();
                let got = r.ideal_spectrum.unwrap();
                assert_eq!(got.len(), oracle.len());
                for (x, y) in got.iter().zip(&oracle) {
                    assert!((x - y).abs() < 1e-8, "C({m}) {set:?}: {got:?} vs {oracle:?}");
                }
            }
        }
        let g = group(Family::Cyclic(9));
        let gen = g.generators()[0];
        let mask = SubsetMask::from_indices(9, [gen, g.inverse(gen)]).unwrap();
        let op = build_operator(&g, &mask, &limits()).unwrap();
        let r = spectrum_on_ideal(&op, 1, &SpectralConfig::default(), &limits()).unwrap();
        assert!((r.max_on_ideal - 2.0 * (2.0 * PI / 9.0).cos()).abs() < 1e-9);
        assert!((r.max_abs_on_ideal - 2.0 * (PI / 9.0).cos()).abs() < 1e-9);
    }

    #[test]
    fn abelian_product_matches_dft() {
        let c3 = group(Family::Cyclic(3));
        let c4 = group(Family::Cyclic(4));
        let g = FiniteGroup::direct_product(&c3, &c4).unwrap();
        let (g3, g4) = (c3.generators()[0], c4.generators()[0]);
        let exp3: Vec<usize> = (0..3).map(|i| (0..3).find(|&e| c3.pow(g3, e as i64) == i).unwrap()).collect();
        let exp4: Vec<usize> = (0..4).map(|i| (0..4).find(|&e| c4.pow(g4, e as i64) == i).unwrap()).collect();
        let mut rng = seed::rng(3);
        for _ in 0..5 {
            let mask = SubsetMask::random_symmetric(&g, 5, &mut rng).unwrap();
            let mut oracle: Vec<f64> = Vec::new();
            for j in 0..3 {
                for l in 0..4 {
                    oracle.push(
                        mask.iter()
                            .map(|x| {
                                let (a, b) = (x / 4, x % 4);
                                let t = j as f64 * exp3[a] as f64 / 3.0 + l as f64 * exp4[b] as f64 / 4.0;
                                (2.0 * PI * t).cos()
                            })
                            .sum(),
                    );
                }
            }
            oracle.sort_by(f64::total_cmp);
            let op = build_operator(&g, &mask, &limits()).unwrap();
            let dense = SymmetricEigen::new(op.dense());
            let mut got: Vec<f64> = dense.eigenvalues.iter().copied().collect();
            got.sort_by(f64::total_cmp);
            for (x, y) in got.iter().zip(&oracle) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn mixing_bound_on_psl27() {
        let g = group(Family::linear(MatrixKind::PSL, 2, 7));
        let mut rng = seed::rng(11);
        let cfg = SpectralConfig::default();
        for size in [2usize, 10, 40, 81, 160] {
            let b = SubsetMask::random_symmetric(&g, size, &mut rng).unwrap();
            let check = verify_mixing_bound(&g, &b, 3, &cfg, &limits()).unwrap();
            assert!(check.holds, "size {size}: margin {}", check.margin);
            let r = &check.report;
            assert!(r.trace_identity_holds() && r.xe_exact && r.row_sums_ok);
            assert!(r.top_residual < 1e-9);
            assert!(r.max_abs_on_ideal <= r.lambda_top + 1e-9);
        }
    }

    #[test]
    fn dense_and_lanczos_agree() {
        for f in [Family::linear(MatrixKind::PSL, 2, 7), Family::Symmetric(5), Family::Dihedral(50)] {
            let g = group(f.clone());
            let mut rng = seed::rng(5);
            for size in [3usize, 12, g.order() / 3] {
                let b = SubsetMask::random_symmetric(&g, size, &mut rng).unwrap();
                let op = build_operator(&g, &b, &limits()).unwrap();
                let dense = spectrum_on_ideal(&op, 1, &SpectralConfig::default(), &limits()).unwrap();
                let cfg = SpectralConfig {
                    method: Method::Lanczos,
                    ..SpectralConfig::default()
                };
                let iter = spectrum_on_ideal(&op, 1, &cfg, &limits()).unwrap();
                assert!(
                    (dense.max_abs_on_ideal - iter.max_abs_on_ideal).abs() < 1e-6,
                    "{f} size {size}: {} vs {}",
                    dense.max_abs_on_ideal,
                    iter.max_abs_on_ideal
                );
            }
        }
    }

    #[test]
    fn matrix_free_counts_match_dense_counts() {
        let g = group(Family::Symmetric(4));
        let b = SubsetMask::random_symmetric(&g, 9, &mut seed::rng(2)).unwrap();
        let op = build_operator(&g, &b, &limits()).unwrap();
        let tiny = Limits { dense: 1, ..limits() };
        assert_eq!(op.entry_counts(&limits()), op.entry_counts(&tiny));
        assert_eq!(op.entry_counts(&tiny).trace_x2, 24 * 9);
    }

    #[test]
    fn operator_is_equivariant() {
        let g = group(Family::Alternating(5));
        let b = SubsetMask::random_symmetric(&g, 14, &mut seed::rng(8)).unwrap();
        let op = build_operator(&g, &b, &limits()).unwrap();
        assert!(op.equivariance_residual(5, 1) < 1e-12);
    }

    #[test]
    fn triple_witnesses() {
        let c3 = group(Family::Cyclic(3));
        let gen = c3.generators()[0];
        let s = SubsetMask::from_indices(3, [gen]).unwrap();
        let w = mixing_triple_witness(&c3, &s, &s, &s, 1, None).unwrap();
        assert_eq!(w.status, WitnessStatus::CertifiedNone);
        assert_eq!(w.pairs_scanned, 1);

        let full = SubsetMask::full(3);
        let w = mixing_triple_witness(&c3, &full, &full, &full, 1, None).unwrap();
        assert_eq!(w.witness, Some((0, 0, 0)));

        let g = group(Family::linear(MatrixKind::PSL, 2, 7));
        let mut rng = seed::rng(4);
        // 117^3 > 168^3 / 3 > 116^3.
        let a = SubsetMask::random(168, 117, &mut rng).unwrap();
        let b = SubsetMask::random_symmetric(&g, 117, &mut rng).unwrap();
        let c = SubsetMask::random(168, 117, &mut rng).unwrap();
        let lim = limits();
        let w = mixing_triple_witness(&g, &a, &b, &c, 3, Some((&SpectralConfig::default(), &lim))).unwrap();
        assert!(w.above_threshold);
        let (x, y, z) = w.witness.unwrap();
        assert_eq!(g.multiply(x, y), z);
        let cert = w.certificate.unwrap();
        assert_eq!(cert.middle, MiddleSet::B);
        assert!(cert.lower_bound > 0.0);
        assert!(cert.solutions as f64 >= cert.lower_bound);
    }

    #[test]
    fn certificate_with_symmetric_outer_sets() {
        let g = group(Family::Alternating(5));
        let mut rng = seed::rng(9);
        let lim = limits();
        let sym = SubsetMask::random_symmetric(&g, 40, &mut rng).unwrap();
        let a = SubsetMask::random(60, 45, &mut rng).unwrap();
        let b = SubsetMask::random(60, 45, &mut rng).unwrap();
        let cfg = SpectralConfig::default();
        for (x, y, z, m) in [(&sym, &a, &b, MiddleSet::A), (&a, &b, &sym, MiddleSet::C)] {
            if y.symmetry_violation(&g).is_none() {
                continue;
            }
            let w = mixing_triple_witness(&g, x, y, z, 3, Some((&cfg, &lim))).unwrap();
            let cert = w.certificate.unwrap();
            assert_eq!(cert.middle, m);
            assert_eq!(cert.solutions, count_solutions(&g, x, y, z));
            assert!(cert.solutions as f64 + 1e-6 >= cert.lower_bound);
        }
    }
}
