//! Covering exponents, quasirandomness profiles and fixed-point-free triples.

use serde::Serialize;

use super::free::{product_free_search, SearchBudget};
use super::subgroups::min_proper_subgroup_index;
use super::{gowers_threshold, least_integer_above, product_set, triple_product_covers};
use crate::chars::{character_table, conjugacy_classes};
use crate::error::{Error, Result};
use crate::group::{Backend, FiniteGroup};
use crate::subset::SubsetMask;
use crate::{par, seed, Limits};

/// Constant in the bound `index ≤ C0·k²` on the least index of a proper subgroup.
pub const C0: f64 = 1e10;

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    /// Least `t` with `X^t = G` using positive products only, if any.
    pub exponent: Option<usize>,
    /// `|X^1|, |X^2|, …` up to covering or stalling.
    pub sizes: Vec<usize>,
    /// The sizes stopped growing below `n`, so no power of `X` is `G`.
    pub stalled: bool,
}

/// Least `t` with `X^t = G`. Once `|X^{t+1}| = |X^t|` the sizes never
/// change again, so a stall below `n` means no exponent exists.
pub fn cover_exponent(group: &FiniteGroup, x: &SubsetMask) -> Result<GrowthReport> {
    let n = group.order();
    x.check_universe(n)?;
    let closure = group.closure(&x.to_vec());
    if closure.len() != n {
        return Err(Error::NotGenerating {
            closure: closure.len(),
            order: n,
        });
    }
    if x.is_empty() {
        // Only the trivial group is generated by the empty set; X^1 is empty.
        return Ok(GrowthReport {
            exponent: None,
            sizes: vec![0],
            stalled: true,
        });
    }
    let mut layer = x.clone();
    let mut sizes = vec![layer.len()];
    loop {
        if layer.is_full() {
            return Ok(GrowthReport {
                exponent: Some(sizes.len()),
                sizes,
                stalled: false,
            });
        }
        let next = product_set(group, &layer, x)?;
        if next.len() == layer.len() {
            return Ok(GrowthReport {
                exponent: None,
                sizes,
                stalled: true,
            });
        }
        sizes.push(next.len());
        layer = next;
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProfileConfig {
    /// Random subsets drawn per tested size for the covering witness.
    pub trials: usize,
    pub seed: u64,
    pub search: SearchBudget,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            trials: 100,
            seed: 0,
            search: SearchBudget::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasirandomProfile {
    pub n: usize,
    pub perfect: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    /// Least degree of a nontrivial irreducible character.
    pub k: u64,
    pub degrees: Vec<u64>,
    /// Largest product-free set found (lower bound on the maximum).
    pub product_free_found: usize,
    pub product_free_best_coset: usize,
    /// `n / k^{1/3}`, an upper bound on product-free sizes.
    pub gowers_bound: f64,
    /// Smallest size at which every trial subset satisfied `B³ = G`.
    pub covering_size_empirical: usize,
    pub covering_trials: usize,
    /// Least integer above `n / k^{1/3}`.
    pub covering_size_theorem: usize,
    pub min_index: usize,
    pub min_index_certified: bool,
    /// `C0·k²`.
    pub min_index_bound: f64,
}

/// The four quasirandomness witnesses side by side.
pub fn quasirandomness_profile(group: &FiniteGroup, cfg: &ProfileConfig, limits: &Limits) -> Result<QuasirandomProfile> {
    let n = group.order();
    if n == 1 {
        return Err(Error::TrivialGroup);
    }
    let perfect = group.is_perfect();
    let table = character_table(group, limits)?;
    let k = table.min_nontrivial_degree()?;
    let gowers = gowers_threshold(n, k);

    let search = product_free_search(group, &SearchBudget { seed: cfg.seed, ..cfg.search }, limits)?;
    if search.best.size as f64 > gowers {
        return Err(Error::TheoremViolation(format!(
            "product-free set of size {} exceeds n/k^(1/3) = {gowers}",
            search.best.size
        )));
    }

    let trials = cfg.trials.max(1);
    let all_cover = |size: usize| -> Result<bool> {
        let results = par::map_range(trials, |t| {
            let mut rng = seed::stream(cfg.seed, &[0xC3, size as u64], t as u64);
            let b = SubsetMask::random(n, size, &mut rng)?;
            triple_product_covers(group, &b, k).map(|r| r.covers)
        });
        results.into_iter().try_fold(true, |acc, r| Ok(acc & r?))
    };
    let (mut lo, mut hi) = (1usize, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if all_cover(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }

    let index = min_proper_subgroup_index(group, limits)?;
    let bound = C0 * (k * k) as f64;
    if index.index as f64 > bound {
        return Err(Error::TheoremViolation(format!(
            "least proper index {} exceeds C0*k^2 = {bound}",
            index.index
        )));
    }
    Ok(QuasirandomProfile {
        n,
        perfect,
        warning: (!perfect).then(|| "group is not perfect; the equivalences assume a perfect group".to_string()),
        k,
        degrees: table.degrees().to_vec(),
        product_free_found: search.best.size,
        product_free_best_coset: search.best_coset_size,
        gowers_bound: gowers,
        covering_size_empirical: lo,
        covering_trials: trials,
        covering_size_theorem: least_integer_above(gowers),
        min_index: index.index,
        min_index_certified: index.certified,
        min_index_bound: bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FpfReport {
    pub degree: usize,
    pub simple: bool,
    pub fpf_count: usize,
    pub fpf_proportion: f64,
    /// Whether every element is a product of three fixed-point-free elements.
    pub triple_covers: bool,
}

fn is_simple(group: &FiniteGroup, limits: &Limits) -> Result<bool> {
    let n = group.order();
    if n == 1 {
        return Ok(false);
    }
    let classes = conjugacy_classes(group, limits)?;
    // A class generates a normal subgroup, so G is simple iff each nontrivial class generates G.
    Ok((1..classes.count()).all(|c| group.closure(classes.members(c)).len() == n))
}

/// Fixed-point-free proportion and the check `F·F·F = G` for the natural
/// action of a transitive permutation group.
pub fn fpf_triple_check(group: &FiniteGroup, limits: &Limits) -> Result<FpfReport> {
    let Backend::Permutation { degree } = *group.backend() else {
        return Err(Error::WrongBackend { expected: "permutation" });
    };
    let n = group.order();
    let mut orbit = vec![false; degree];
    let mut queue = vec![0usize];
    orbit[0] = true;
    while let Some(p) = queue.pop() {
        for &s in group.generators() {
            let q = group.permutation(s).unwrap().apply(p);
            if !orbit[q] {
                orbit[q] = true;
                queue.push(q);
            }
        }
    }
    let reached = orbit.iter().filter(|&&b| b).count();
    if reached != degree {
        return Err(Error::Intransitive { orbit: reached, degree });
    }
    let fpf: Vec<usize> = (0..n).filter(|&g| group.permutation(g).unwrap().fixed_points() == 0).collect();
    let f = SubsetMask::from_indices(n, fpf)?;
    let f3 = product_set(group, &product_set(group, &f, &f)?, &f)?;
    Ok(FpfReport {
        degree,
        simple: is_simple(group, limits)?,
        fpf_count: f.len(),
        fpf_proportion: f.len() as f64 / n as f64,
        triple_covers: f3.is_full(),
    })
}
