//! Subgroups up to conjugacy and the minimal index of a proper subgroup.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::Serialize;

use crate::chars::{conjugacy_classes, ConjClasses};
use crate::error::{Error, Result};
use crate::group::{Backend, FiniteGroup};
use crate::subset::SubsetMask;
use crate::{seed, Limits};

/// Largest order for which the full subgroup lattice is built.
pub const EXACT_LATTICE_MAX: usize = 2000;

/// Largest order accepted by [`min_proper_subgroup_index`].
pub const MIN_INDEX_MAX: usize = 10_000;

/// Largest number of subgroup classes the lattice construction will hold.
const MAX_SUBGROUP_CLASSES: usize = 50_000;

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub order: usize,
    pub generators: Vec<usize>,
    pub mask: SubsetMask,
}

/// Conjugation invariant: order plus the number of members in each class.
fn class_profile(mask: &SubsetMask, classes: &ConjClasses) -> Vec<u32> {
    let mut counts = vec![0u32; classes.count() + 1];
    counts[0] = mask.len() as u32;
    for g in mask.iter() {
        counts[classes.class_of(g) + 1] += 1;
    }
    counts
}

/// Greedy generating set: add each element not yet in the running closure.
pub(crate) fn small_generating_set(group: &FiniteGroup, mask: &SubsetMask) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = group.closure(&gens);
    for g in mask.iter() {
        if !current.contains(g) {
            gens.push(g);
            current = group.closure(&gens);
            if current.len() == mask.len() {
                break;
            }
        }
    }
    gens
}

fn is_conjugate(group: &FiniteGroup, h: &Subgroup, k: &SubsetMask) -> bool {
    (0..group.order()).any(|x| h.generators.iter().all(|&g| k.contains(group.conjugate(g, x))))
}

/// Representatives of the conjugacy classes of subgroups, including the
/// trivial group and `G`, ordered by increasing order.
///
/// Cyclic extension: every subgroup is reached from the trivial group by
/// repeatedly joining a cyclic subgroup, and joining class representatives
/// suffices because `⟨H^x, g⟩ = ⟨H, g^{x^-1}⟩^x`.
pub fn subgroup_classes(group: &FiniteGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    let n = group.order();
    if n > EXACT_LATTICE_MAX {
        return Err(Error::CapExceeded {
            what: "subgroup lattice order",
            value: n as u128,
            cap: EXACT_LATTICE_MAX as u128,
        });
    }
    let classes = conjugacy_classes(group, limits)?;

    let mut cyclic: Vec<(usize, SubsetMask)> = Vec::new();
    let mut seen_cyclic: HashSet<Vec<u64>> = HashSet::new();
    for g in 1..n {
        let c = group.closure(&[g]);
        if seen_cyclic.insert(c.words().to_vec()) {
            cyclic.push((g, c));
        }
    }

    let mut reps = vec![Subgroup {
        order: 1,
        generators: Vec::new(),
        mask: SubsetMask::from_indices(n, [0])?,
    }];
    let mut by_profile: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    by_profile.insert(class_profile(&reps[0].mask, &classes), vec![0]);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(reps[0].mask.words().to_vec());

    let mut next = 0;
    while next < reps.len() {
        let h = reps[next].clone();
        next += 1;
        for (g, c) in &cyclic {
            if c.is_subset_of(&h.mask) {
                continue;
            }
            let mut gens = h.generators.clone();
            gens.push(*g);
            let k = group.closure(&gens);
            if !seen.insert(k.words().to_vec()) {
                continue;
            }
            let profile = class_profile(&k, &classes);
            let bucket = by_profile.entry(profile).or_default();
            if bucket.iter().any(|&i| is_conjugate(group, &reps[i], &k)) {
                continue;
            }
            bucket.push(reps.len());
            reps.push(Subgroup {
                order: k.len(),
                generators: gens,
                mask: k,
            });
            if reps.len() > MAX_SUBGROUP_CLASSES {
                return Err(Error::CapExceeded {
                    what: "subgroup classes",
                    value: reps.len() as u128,
                    cap: MAX_SUBGROUP_CLASSES as u128,
                });
            }
        }
    }
    reps.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.mask.to_vec().cmp(&b.mask.to_vec())));
    Ok(reps)
}

#[derive(Clone, Debug, Serialize)]
pub struct MinIndexReport {
    pub index: usize,
    pub subgroup_order: usize,
    pub subgroup_generators: Vec<usize>,
    /// Whether the full subgroup lattice was examined.
    pub certified: bool,
    /// Number of subgroups (classes when certified) examined.
    pub subgroups_examined: usize,
}

/// Proper subgroups found by the heuristic search used above the exact
/// lattice size: point and line stabilizers, cyclic subgroups and joins of
/// class representatives, each grown while it stays proper.
pub(crate) fn heuristic_subgroups(group: &FiniteGroup, limits: &Limits, seed_value: u64) -> Result<Vec<Subgroup>> {
    let n = group.order();
    let classes = conjugacy_classes(group, limits)?;
    let mut found: Vec<Subgroup> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut push = |found: &mut Vec<Subgroup>, gens: Vec<usize>, mask: SubsetMask| {
        if mask.len() < n && seen.insert(mask.words().to_vec()) {
            found.push(Subgroup {
                order: mask.len(),
                generators: gens,
                mask,
            });
        }
    };

    match group.backend() {
        Backend::Permutation { degree } => {
            for p in 0..*degree {
                let members: Vec<usize> = (0..n)
                    .filter(|&g| group.permutation(g).is_some_and(|perm| perm.apply(p) == p))
                    .collect();
                let mask = SubsetMask::from_indices(n, members)?;
                push(&mut found, small_generating_set(group, &mask), mask);
            }
        }
        Backend::Matrix(mg) => {
            // Stabilizer of the line through the first basis vector, on either side.
            let d = mg.dim();
            for column in [true, false] {
                let members: Vec<usize> = (0..n)
                    .filter(|&g| {
                        let m = group.matrix(g).unwrap();
                        (1..d).all(|i| if column { m[i * d] == 0 } else { m[i] == 0 })
                    })
                    .collect();
                let mask = SubsetMask::from_indices(n, members)?;
                push(&mut found, small_generating_set(group, &mask), mask);
            }
        }
        Backend::Table => {}
    }

    let reps: Vec<usize> = classes.reps().iter().copied().filter(|&r| r != 0).collect();
    let half = n / 2;
    let mut rng = seed::rng(seed::derive(seed_value, &[0x5B]));
    let mut starts: Vec<Vec<usize>> = reps.iter().map(|&r| vec![r]).collect();
    for (i, &a) in reps.iter().enumerate() {
        for &b in &reps[i..] {
            let x = group.random_element(&mut rng);
            starts.push(vec![a, group.conjugate(b, x)]);
        }
    }
    for gens in starts {
        let (mask, complete) = group.closure_until(&gens, half);
        if complete {
            push(&mut found, gens, mask);
        }
    }
    // Grow the largest candidates by random conjugates of class representatives.
    found.sort_by(|a, b| b.order.cmp(&a.order));
    let seeds: Vec<Subgroup> = found.iter().take(16).cloned().collect();
    for s in seeds {
        let mut gens = s.generators.clone();
        let mut current = s.mask.clone();
        for _ in 0..4 * reps.len() {
            let r = reps[rng.random_range(0..reps.len())];
            let y = group.conjugate(r, group.random_element(&mut rng));
            if current.contains(y) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(y);
            let (mask, complete) = group.closure_until(&trial, half);
            if complete {
                gens = trial;
                current = mask;
            }
        }
        push(&mut found, gens, current);
    }
    Ok(found)
}

/// Least index of a proper subgroup. Exact (certified) up to
/// [`EXACT_LATTICE_MAX`]; a heuristic upper bound above it.
pub fn min_proper_subgroup_index(group: &FiniteGroup, limits: &Limits) -> Result<MinIndexReport> {
    let n = group.order();
    if n == 1 {
        return Err(Error::TrivialGroup);
    }
    if n > MIN_INDEX_MAX {
        return Err(Error::CapExceeded {
            what: "minimal index order",
            value: n as u128,
            cap: MIN_INDEX_MAX as u128,
        });
    }
    let (subgroups, certified) = if n <= EXACT_LATTICE_MAX {
        (subgroup_classes(group, limits)?, true)
    } else {
        (heuristic_subgroups(group, limits, 0)?, false)
    };
    let best = subgroups
        .iter()
        .filter(|s| s.order < n)
        .max_by(|a, b| a.order.cmp(&b.order).then_with(|| b.generators.len().cmp(&a.generators.len())))
        .ok_or(Error::TrivialGroup)?;
    Ok(MinIndexReport {
        index: n / best.order,
        subgroup_order: best.order,
        subgroup_generators: best.generators.clone(),
        certified,
        subgroups_examined: subgroups.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::matrix::MatrixKind;
    use crate::Family;

    fn group(f: Family) -> FiniteGroup {
        f.construct(&Limits::default()).unwrap()
    }

    fn class_count(f: Family) -> usize {
        subgroup_classes(&group(f), &Limits::default()).unwrap().len()
    }

    #[test]
    fn subgroup_class_counts() {
        // Known counts of conjugacy classes of subgroups.
        assert_eq!(class_count(Family::Cyclic(12)), 6);
        assert_eq!(class_count(Family::Symmetric(3)), 4);
        assert_eq!(class_count(Family::Symmetric(4)), 11);
        assert_eq!(class_count(Family::Alternating(4)), 5);
        assert_eq!(class_count(Family::Alternating(5)), 9);
        assert_eq!(class_count(Family::linear(MatrixKind::PSL, 2, 7)), 15);
    }

    #[test]
    fn lattice_subgroups_are_closed_and_orders_divide() {
        let g = group(Family::Symmetric(4));
        for s in subgroup_classes(&g, &Limits::default()).unwrap() {
            assert_eq!(24 % s.order, 0);
            assert_eq!(g.closure(&s.generators), s.mask);
        }
    }

    #[test]
    fn minimal_indices() {
        let idx = |f| min_proper_subgroup_index(&group(f), &Limits::default()).unwrap();
        assert_eq!(idx(Family::Cyclic(7)).index, 7);
        assert_eq!(idx(Family::Alternating(5)).index, 5);
        let psl = idx(Family::linear(MatrixKind::PSL, 2, 7));
        assert_eq!((psl.index, psl.subgroup_order, psl.certified), (7, 24, true));
        assert_eq!(idx(Family::Symmetric(4)).index, 2);
        assert_eq!(idx(Family::linear(MatrixKind::PSL, 2, 11)).index, 11);
    }

    #[test]
    fn heuristic_agrees_where_lattice_is_known() {
        for (f, expected) in [
            (Family::Alternating(5), 5),
            (Family::linear(MatrixKind::PSL, 2, 7), 7),
            (Family::linear(MatrixKind::PSL, 2, 8), 9),
            (Family::Symmetric(5), 2),
        ] {
            let g = group(f.clone());
            let best = heuristic_subgroups(&g, &Limits::default(), 1)
                .unwrap()
                .iter()
                .map(|s| s.order)
                .max()
                .unwrap();
            assert_eq!(g.order() / best, expected, "{f}");
        }
    }
}
