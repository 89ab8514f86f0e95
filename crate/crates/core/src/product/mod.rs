//! Product sets, covering checks, product-free sets and subgroup data.

mod free;
mod growth;
mod subgroups;

pub use free::{alpha_exact, is_product_free, product_free_search, AlphaResult, FreeStatus, ProductFreeCert, SearchBudget, ALPHA_EXACT_MAX};
pub use growth::{
    cover_exponent, fpf_triple_check, quasirandomness_profile, FpfReport, GrowthReport, ProfileConfig, QuasirandomProfile, C0,
};
pub use subgroups::{min_proper_subgroup_index, subgroup_classes, MinIndexReport, Subgroup, EXACT_LATTICE_MAX, MIN_INDEX_MAX};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::matrix::MatrixKind;
use crate::group::FiniteGroup;
use crate::par;
use crate::subset::SubsetMask;

/// Largest number of missing elements listed in a [`CoverReport`].
pub const MISSING_SAMPLE: usize = 10;

/// `{ab : a ∈ A, b ∈ B}`, parallel over `A` with an OR reduction.
pub fn product_set(group: &FiniteGroup, a: &SubsetMask, b: &SubsetMask) -> Result<SubsetMask> {
    let n = group.order();
    a.check_universe(n)?;
    b.check_universe(n)?;
    let av = a.to_vec();
    let bv = b.to_vec();
    Ok(par::fold_range(
        av.len(),
        || SubsetMask::empty(n),
        |mut acc, i| {
            for &y in &bv {
                acc.insert(group.multiply(av[i], y));
            }
            acc
        },
        |mut x, y| {
            x.union_with(&y);
            x
        },
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub subset_size: usize,
    /// Size threshold above which the relevant theorem forces covering.
    pub threshold: f64,
    pub above_threshold: bool,
    /// The threshold exceeds the group order, so no subset is above it.
    pub threshold_vacuous: bool,
    pub covers: bool,
    pub missing_sample: Vec<usize>,
    pub missing_count: usize,
    /// Number of pairwise products formed.
    pub products_computed: u64,
}

/// `B³` via two product passes, with the report fields filled in.
fn cube_report(group: &FiniteGroup, b: &SubsetMask, threshold: f64) -> Result<CoverReport> {
    let b2 = product_set(group, b, b)?;
    let b3 = product_set(group, &b2, b)?;
    let missing = b3.complement();
    Ok(CoverReport {
        subset_size: b.len(),
        threshold,
        above_threshold: b.len() as f64 > threshold,
        threshold_vacuous: threshold >= group.order() as f64,
        covers: missing.is_empty(),
        missing_sample: missing.iter().take(MISSING_SAMPLE).collect(),
        missing_count: missing.len(),
        products_computed: (b.len() * b.len() + b2.len() * b.len()) as u64,
    })
}

fn enforce(report: CoverReport, what: &str) -> Result<CoverReport> {
    if report.above_threshold && !report.covers {
        return Err(Error::TheoremViolation(format!(
            "{what}: |B| = {} > {:.4} but B^3 misses {} elements, e.g. {:?}",
            report.subset_size, report.threshold, report.missing_count, report.missing_sample
        )));
    }
    Ok(report)
}

/// `n / k^{1/3}`: above this size a subset satisfies `B³ = G`.
pub fn gowers_threshold(n: usize, k: u64) -> f64 {
    n as f64 / (k as f64).cbrt()
}

/// Least integer strictly above `x`.
pub fn least_integer_above(x: f64) -> usize {
    x.floor() as usize + 1
}

/// Checks `B³ = G`; a failure above `n/k^{1/3}` is a theorem violation.
pub fn triple_product_covers(group: &FiniteGroup, b: &SubsetMask, k: u64) -> Result<CoverReport> {
    let report = cube_report(group, b, gowers_threshold(group.order(), k))?;
    enforce(report, "triple product covering")
}

/// `2|L| / q^{(d-1)/3}` for `L = PSL(d, q)`.
pub fn psl_threshold(order: usize, dim: usize, q: u64) -> f64 {
    2.0 * order as f64 / (q as f64).powf((dim as f64 - 1.0) / 3.0)
}

/// Checks `B³ = L` for `L = PSL(d, q)` against the PSL-specific threshold.
pub fn psl_covering_check(group: &FiniteGroup, b: &SubsetMask) -> Result<CoverReport> {
    let lie = group.lie().filter(|l| l.kind == MatrixKind::PSL).ok_or(Error::WrongBackend { expected: "PSL(d,q)" })?;
    let report = cube_report(group, b, psl_threshold(group.order(), lie.dim, lie.q))?;
    enforce(report, "PSL covering")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{seed, Family, Limits};

    fn group(f: Family) -> FiniteGroup {
        f.construct(&Limits::default()).unwrap()
    }

    #[test]
    fn product_set_basics() {
        let g = group(Family::Cyclic(5));
        let x = g.generators()[0];
        let b = SubsetMask::random(5, 3, &mut seed::rng(1)).unwrap();
        let id = SubsetMask::from_indices(5, [0]).unwrap();
        assert_eq!(product_set(&g, &id, &b).unwrap(), b);
        let gx = SubsetMask::from_indices(5, [x]).unwrap();
        assert_eq!(product_set(&g, &gx, &gx).unwrap().to_vec(), vec![g.pow(x, 2)]);
        assert!(product_set(&g, &gx, &SubsetMask::empty(6)).is_err());
    }

    #[test]
    fn subgroup_is_closed() {
        let g = group(Family::linear(MatrixKind::PSL, 2, 7));
        let subgroups = subgroup_classes(&g, &Limits::default()).unwrap();
        assert!(subgroups.iter().any(|s| s.order == 24));
        for s in &subgroups {
            assert_eq!(product_set(&g, &s.mask, &s.mask).unwrap(), s.mask);
        }
    }

    #[test]
    fn product_set_is_associative() {
        let g = group(Family::Symmetric(4));
        let mut rng = seed::rng(3);
        for _ in 0..20 {
            let a = SubsetMask::random(24, 4, &mut rng).unwrap();
            let b = SubsetMask::random(24, 3, &mut rng).unwrap();
            let c = SubsetMask::random(24, 5, &mut rng).unwrap();
            let left = product_set(&g, &product_set(&g, &a, &b).unwrap(), &c).unwrap();
            let right = product_set(&g, &a, &product_set(&g, &b, &c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn covering_reports() {
        let c6 = group(Family::Cyclic(6));
        let x = c6.generators()[0];
        let sub = SubsetMask::from_indices(6, [0, c6.pow(x, 2), c6.pow(x, 4)]).unwrap();
        let r = triple_product_covers(&c6, &sub, 1).unwrap();
        assert!(!r.covers && !r.missing_sample.is_empty());
        assert_eq!(r.missing_count, 3);
        assert!(triple_product_covers(&c6, &SubsetMask::full(6), 1).unwrap().covers);

        let psl = group(Family::linear(MatrixKind::PSL, 2, 7));
        let r = psl_covering_check(&psl, &SubsetMask::full(168)).unwrap();
        assert!(r.covers && r.threshold_vacuous);
        assert!((r.threshold - 336.0 / 7f64.cbrt()).abs() < 1e-9);
        assert_eq!(psl_covering_check(&c6, &sub).unwrap_err(), Error::WrongBackend { expected: "PSL(d,q)" });
    }

    #[test]
    fn gowers_threshold_for_psl27() {
        let t = gowers_threshold(168, 3);
        assert!(t > 116.0 && t < 117.0);
        assert_eq!(least_integer_above(t), 117);
        let psl = group(Family::linear(MatrixKind::PSL, 2, 7));
        let mut rng = seed::rng(17);
        for _ in 0..5 {
            let b = SubsetMask::random(168, 117, &mut rng).unwrap();
            assert!(triple_product_covers(&psl, &b, 3).unwrap().covers);
        }
    }

    #[test]
    fn covering_is_monotone() {
        let g = group(Family::Alternating(5));
        let mut rng = seed::rng(8);
        for size in [8usize, 12, 16, 20] {
            let b = SubsetMask::random(60, size, &mut rng).unwrap();
            let mut bigger = b.clone();
            for x in SubsetMask::random(60, 10, &mut rng).unwrap().iter() {
                bigger.insert(x);
            }
            if triple_product_covers(&g, &b, 3).unwrap().covers {
                assert!(triple_product_covers(&g, &bigger, 3).unwrap().covers);
            }
        }
    }
}
