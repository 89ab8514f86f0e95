//! Product-free sets: certification, exact maximum and heuristic search.

use serde::Serialize;

use super::subgroups::{heuristic_subgroups, subgroup_classes, Subgroup, EXACT_LATTICE_MAX};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::subset::SubsetMask;
use crate::{par, seed, Limits};

/// Largest order accepted by [`alpha_exact`].
pub const ALPHA_EXACT_MAX: usize = 200;

/// Node budget for the exact branch and bound.
const ALPHA_NODE_CAP: u64 = 500_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum FreeStatus {
    ProductFree,
    Violated { x: usize, y: usize, z: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductFreeCert {
    pub size: usize,
    pub elements: Vec<usize>,
    #[serde(flatten)]
    pub status: FreeStatus,
}

impl ProductFreeCert {
    pub fn is_product_free(&self) -> bool {
        self.status == FreeStatus::ProductFree
    }
}

/// Certifies that no `x, y, z ∈ S` satisfy `xy = z`, or returns the first
/// violating pair in index order.
pub fn is_product_free(group: &FiniteGroup, s: &SubsetMask) -> Result<ProductFreeCert> {
    s.check_universe(group.order())?;
    let elems = s.to_vec();
    let violation = par::find_map_first(elems.len(), |i| {
        let x = elems[i];
        elems.iter().find_map(|&y| {
            let z = group.multiply(x, y);
            s.contains(z).then_some(FreeStatus::Violated { x, y, z })
        })
    });
    Ok(ProductFreeCert {
        size: elems.len(),
        elements: elems,
        status: violation.unwrap_or(FreeStatus::ProductFree),
    })
}

/// Incremental bookkeeping shared by the exact and greedy searches.
struct Conflicts<'g> {
    group: &'g FiniteGroup,
    /// `roots[e]` lists the `x` with `x² = e`.
    roots: Vec<Vec<usize>>,
}

impl<'g> Conflicts<'g> {
    fn new(group: &'g FiniteGroup) -> Self {
        let mut roots = vec![Vec::new(); group.order()];
        for x in 0..group.order() {
            roots[group.multiply(x, x)].push(x);
        }
        Conflicts { group, roots }
    }

    /// Elements `c` such that `S ∪ {c}` has a solution of `xy = z` using
    /// both `c` and `e`, where `S` already contains `e`.
    fn forbidden(&self, e: usize, s: &SubsetMask, out: &mut SubsetMask) {
        let g = self.group;
        let ei = g.inverse(e);
        for x in s.iter() {
            let xi = g.inverse(x);
            for c in [
                g.multiply(e, x),
                g.multiply(x, e),
                g.multiply(ei, x),
                g.multiply(x, ei),
                g.multiply(e, xi),
                g.multiply(xi, e),
            ] {
                out.insert(c);
            }
        }
        for &r in &self.roots[e] {
            out.insert(r);
        }
    }

    /// Adds `e` to `s` and removes from `cand` everything that would conflict.
    fn add(&self, e: usize, s: &mut SubsetMask, cand: &mut SubsetMask) {
        s.insert(e);
        let mut bad = SubsetMask::empty(s.universe());
        self.forbidden(e, s, &mut bad);
        bad.insert(e);
        for x in bad.iter() {
            cand.remove(x);
        }
    }

    fn initial_candidates(&self) -> SubsetMask {
        let mut c = SubsetMask::full(self.group.order());
        c.remove(0);
        c
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaResult {
    pub alpha: usize,
    pub witness: Vec<usize>,
    pub nodes: u64,
}

/// Exact maximum size of a product-free subset, by branch and bound with
/// candidate propagation.
pub fn alpha_exact(group: &FiniteGroup) -> Result<AlphaResult> {
    let n = group.order();
    if n > ALPHA_EXACT_MAX {
        return Err(Error::CapExceeded {
            what: "exact product-free order (use product_free_search)",
            value: n as u128,
            cap: ALPHA_EXACT_MAX as u128,
        });
    }
    let conflicts = Conflicts::new(group);
    let start = greedy(&conflicts, None);
    let mut best = (start.len(), start.to_vec());
    let mut nodes = 0u64;
    let mut stack = vec![(SubsetMask::empty(n), conflicts.initial_candidates())];
    while let Some((s, mut cand)) = stack.pop() {
        nodes += 1;
        if nodes > ALPHA_NODE_CAP {
            return Err(Error::CapExceeded {
                what: "product-free search nodes",
                value: nodes as u128,
                cap: ALPHA_NODE_CAP as u128,
            });
        }
        if s.len() + cand.len() <= best.0 {
            continue;
        }
        let Some(c) = cand.iter().next() else {
            best = (s.len(), s.to_vec());
            continue;
        };
        cand.remove(c);
        let mut with = s.clone();
        let mut with_cand = cand.clone();
        conflicts.add(c, &mut with, &mut with_cand);
        // Exclusion branch is explored after inclusion.
        stack.push((s, cand));
        stack.push((with, with_cand));
    }
    Ok(AlphaResult {
        alpha: best.0,
        witness: best.1,
        nodes,
    })
}

/// Greedy growth: repeatedly add the candidate that rules out the fewest
/// other candidates, ties broken by least index.
fn greedy(conflicts: &Conflicts<'_>, start: Option<&SubsetMask>) -> SubsetMask {
    let n = conflicts.group.order();
    let mut s = SubsetMask::empty(n);
    let mut cand = conflicts.initial_candidates();
    if let Some(init) = start {
        for e in init.iter() {
            if cand.contains(e) {
                conflicts.add(e, &mut s, &mut cand);
            }
        }
    }
    while !cand.is_empty() {
        let pool = cand.to_vec();
        let costs = par::map_slice(&pool, |&e| {
            let mut trial = s.clone();
            trial.insert(e);
            let mut bad = SubsetMask::empty(n);
            conflicts.forbidden(e, &trial, &mut bad);
            bad.intersect_with(&cand);
            bad.len()
        });
        let pick = (0..pool.len()).min_by_key(|&i| (costs[i], pool[i])).unwrap();
        conflicts.add(pool[pick], &mut s, &mut cand);
    }
    s
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchBudget {
    /// Greedy restarts; restart 0 starts empty, the others from a seeded random element.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { restarts: 32, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub best: ProductFreeCert,
    /// Largest nontrivial coset `gH` found (always product-free).
    pub best_coset_size: usize,
    pub best_coset_subgroup_order: usize,
    pub best_coset_representative: Option<usize>,
    pub greedy_best: usize,
    pub subgroups_scanned: usize,
    pub restarts: usize,
}

/// Best product-free set from a scan of nontrivial cosets of proper
/// subgroups and from seeded greedy restarts (one of which extends the best
/// coset).
pub fn product_free_search(group: &FiniteGroup, budget: &SearchBudget, limits: &Limits) -> Result<SearchResult> {
    let n = group.order();
    if n > limits.enumeration {
        return Err(Error::CapExceeded {
            what: "group order",
            value: n as u128,
            cap: limits.enumeration as u128,
        });
    }
    let conflicts = Conflicts::new(group);
    let subgroups: Vec<Subgroup> = if n == 1 {
        Vec::new()
    } else if n <= EXACT_LATTICE_MAX {
        subgroup_classes(group, limits)?
    } else {
        heuristic_subgroups(group, limits, budget.seed)?
    };
    let mut coset: Option<(usize, usize, SubsetMask)> = None;
    for h in subgroups.iter().filter(|h| h.order < n) {
        if coset.as_ref().is_some_and(|c| c.2.len() >= h.order) {
            continue;
        }
        let rep = (0..n).find(|&g| !h.mask.contains(g)).unwrap();
        let gh = h.mask.left_translate(group, rep);
        let cert = is_product_free(group, &gh)?;
        if !cert.is_product_free() {
            return Err(Error::TheoremViolation(format!("coset {rep}H of a subgroup of order {} is not product-free", h.order)));
        }
        coset = Some((h.order, rep, gh));
    }

    let runs = par::map_range(budget.restarts.max(1) + 1, |r| {
        let start = match r {
            0 => None,
            1 => coset.as_ref().map(|c| c.2.clone()),
            _ => {
                let mut rng = seed::stream(budget.seed, &[0x6F], r as u64);
                Some(SubsetMask::from_indices(n, [group.random_element(&mut rng)]).unwrap())
            }
        };
        greedy(&conflicts, start.as_ref())
    });
    let greedy_best = runs.iter().map(SubsetMask::len).max().unwrap_or(0);
    let mut best = runs.into_iter().max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.to_vec().cmp(&a.to_vec()))).unwrap();
    if let Some(c) = &coset {
        if c.2.len() > best.len() {
            best = c.2.clone();
        }
    }
    let cert = is_product_free(group, &best)?;
    if !cert.is_product_free() {
        return Err(Error::TheoremViolation(format!("search returned a set with a product: {:?}", cert.status)));
    }
    Ok(SearchResult {
        best: cert,
        best_coset_size: coset.as_ref().map_or(0, |c| c.2.len()),
        best_coset_subgroup_order: coset.as_ref().map_or(0, |c| c.0),
        best_coset_representative: coset.as_ref().map(|c| c.1),
        greedy_best,
        subgroups_scanned: subgroups.len(),
        restarts: budget.restarts,
    })
}
