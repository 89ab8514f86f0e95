//! Word value sets, Waring-type covering checks and generation frequencies.

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use super::Word;
use crate::chars::{conjugacy_classes, ConjClasses};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::product::{product_set, MISSING_SAMPLE};
use crate::subset::SubsetMask;
use crate::{par, seed, Limits};

/// Default number of sampled tuples per word in sampled mode.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Samples drawn from one seed stream.
const CHUNK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ValueMode {
    Exact,
    Sampled { samples: u64, seed: u64 },
    /// Exact when the tuple count fits the work cap, sampled otherwise.
    Auto { samples: u64, seed: u64 },
}

/// Sampled-mode details.
///
/// Word values are closed under conjugation, so each sampled value marks
/// its whole class as present. The union of classes marked for every word
/// is a subset of the value set; its density is exact and a lower bound.
/// `density` is a binomial estimate of the same union from uniform draws.
#[derive(Clone, Debug, Serialize)]
pub struct SampledDetail {
    pub samples_per_word: u64,
    pub class_count: usize,
    pub hit_classes: usize,
    pub density_lower_bound: f64,
    pub estimate_draws: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WordValueSet {
    pub n: usize,
    pub words: Vec<String>,
    pub mode: &'static str,
    /// Exact size of the intersection, in exact mode.
    pub size: Option<usize>,
    pub density: f64,
    /// Three binomial standard deviations; zero in exact mode.
    pub radius: f64,
    pub tuples_evaluated: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled: Option<SampledDetail>,
    #[serde(skip)]
    pub mask: Option<SubsetMask>,
}

impl WordValueSet {
    pub fn exact_mask(&self) -> Result<&SubsetMask> {
        self.mask
            .as_ref()
            .ok_or_else(|| Error::invalid("an exact value set is required"))
    }
}

fn letters_used(word: &Word) -> Vec<usize> {
    let mut v: Vec<usize> = word.syllables().iter().map(|s| s.0).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn tuple_count(n: usize, letters: usize) -> u128 {
    (n as u128).saturating_pow(letters as u32)
}

/// Word evaluation through precomputed power tables.
struct PowerTables {
    /// `(letter, table)` per syllable, where `table[g] = g^e`.
    steps: Vec<(usize, usize)>,
    tables: Vec<Vec<u32>>,
}

impl PowerTables {
    fn new(group: &FiniteGroup, word: &Word) -> Self {
        let mut exps: Vec<i64> = word.syllables().iter().map(|s| s.1).collect();
        exps.sort_unstable();
        exps.dedup();
        let tables = par::map_slice(&exps, |&e| (0..group.order()).map(|g| group.pow(g, e) as u32).collect());
        let steps = word
            .syllables()
            .iter()
            .map(|&(l, e)| (l - 1, exps.binary_search(&e).unwrap()))
            .collect();
        PowerTables { steps, tables }
    }

    fn eval(&self, group: &FiniteGroup, tuple: &[usize]) -> usize {
        self.steps
            .iter()
            .fold(0, |acc, &(l, t)| group.multiply(acc, self.tables[t][tuple[l]] as usize))
    }
}

fn class_closure(classes: &ConjClasses, n: usize, values: impl IntoIterator<Item = usize>) -> SubsetMask {
    let mut mask = SubsetMask::empty(n);
    for v in values {
        if !mask.contains(v) {
            for &m in classes.members(classes.class_of(v)) {
                mask.insert(m);
            }
        }
    }
    mask
}

/// Exact `w(G)`, and the number of tuples evaluated.
fn exact_values(group: &FiniteGroup, word: &Word, classes: &ConjClasses, limits: &Limits) -> Result<(SubsetMask, u64)> {
    let n = group.order();
    let letters = letters_used(word);
    if letters.is_empty() {
        return Ok((SubsetMask::from_indices(n, [0])?, 1));
    }
    if letters.len() == 1 {
        // One letter: w(g^x) = w(g)^x, so class representatives suffice.
        let l = letters[0];
        let mut tuple = vec![0; word.arity()];
        let values: Vec<usize> = classes
            .reps()
            .iter()
            .map(|&r| {
                tuple[l - 1] = r;
                word.evaluate_unchecked(group, &tuple)
            })
            .collect();
        return Ok((class_closure(classes, n, values), classes.count() as u64));
    }
    let total = tuple_count(n, letters.len());
    if total > limits.work as u128 {
        return Err(Error::CapExceeded {
            what: "word tuples",
            value: total,
            cap: limits.work as u128,
        });
    }
    let tables = PowerTables::new(group, word);
    let arity = word.arity();
    let rest = &letters[1..];
    let mask = par::fold_range(
        n,
        || SubsetMask::empty(n),
        |mut acc, first| {
            let mut tuple = vec![0usize; arity];
            tuple[letters[0] - 1] = first;
            // Odometer over the remaining letters.
            loop {
                acc.insert(tables.eval(group, &tuple));
                let mut i = 0;
                while i < rest.len() {
                    let slot = &mut tuple[rest[i] - 1];
                    *slot += 1;
                    if *slot < n {
                        break;
                    }
                    *slot = 0;
                    i += 1;
                }
                if i == rest.len() {
                    break;
                }
            }
            acc
        },
        |mut a, b| {
            a.union_with(&b);
            a
        },
    );
    Ok((mask, total as u64))
}

/// Classes hit by `samples` random substitutions into `word`.
fn sampled_classes(group: &FiniteGroup, word: &Word, classes: &ConjClasses, samples: u64, seed_value: u64, label: u64) -> SubsetMask {
    let k = classes.count();
    let letters = letters_used(word);
    let chunks = samples.div_ceil(CHUNK) as usize;
    let mut hit = par::fold_range(
        chunks,
        || SubsetMask::empty(k),
        |mut acc, c| {
            let mut rng = seed::stream(seed_value, &[0x57, label], c as u64);
            let count = CHUNK.min(samples - c as u64 * CHUNK);
            let mut tuple = vec![0usize; word.arity()];
            for _ in 0..count {
                for &l in &letters {
                    tuple[l - 1] = group.random_element(&mut rng);
                }
                acc.insert(classes.class_of(word.evaluate_unchecked(group, &tuple)));
            }
            acc
        },
        |mut a, b| {
            a.union_with(&b);
            a
        },
    );
    // The identity substitution always gives the identity.
    hit.insert(classes.class_of(0));
    hit
}

/// `w̄(G) = w_1(G) ∩ … ∩ w_k(G)`, exactly or by sampling.
pub fn word_value_set(group: &FiniteGroup, words: &[Word], mode: ValueMode, limits: &Limits) -> Result<WordValueSet> {
    if words.is_empty() {
        return Err(Error::invalid("at least one word is required"));
    }
    let n = group.order();
    let classes = conjugacy_classes(group, limits)?;
    let fits = words
        .iter()
        .all(|w| letters_used(w).len() <= 1 || tuple_count(n, letters_used(w).len()) <= limits.work as u128);
    let sampled = match mode {
        ValueMode::Exact => None,
        ValueMode::Sampled { samples, seed } => Some((samples, seed)),
        ValueMode::Auto { samples, seed } => (!fits).then_some((samples, seed)),
    };
    let names = words.iter().map(Word::to_string).collect();

    let Some((samples, seed_value)) = sampled else {
        let mut mask = SubsetMask::full(n);
        let mut tuples = 0;
        for w in words {
            let (m, t) = exact_values(group, w, &classes, limits)?;
            mask.intersect_with(&m);
            tuples += t;
        }
        return Ok(WordValueSet {
            n,
            words: names,
            mode: "exact",
            size: Some(mask.len()),
            density: mask.len() as f64 / n as f64,
            radius: 0.0,
            tuples_evaluated: tuples,
            sampled: None,
            mask: Some(mask),
        });
    };

    if samples == 0 {
        return Err(Error::invalid("sampled mode needs at least one sample"));
    }
    let mut hit = SubsetMask::full(classes.count());
    for (i, w) in words.iter().enumerate() {
        hit.intersect_with(&sampled_classes(group, w, &classes, samples, seed_value, i as u64));
    }
    let lower: usize = hit.iter().map(|c| classes.sizes()[c]).sum();
    let chunks = samples.div_ceil(CHUNK) as usize;
    let inside: u64 = par::map_range(chunks, |c| {
        let mut rng = seed::stream(seed_value, &[0xE5], c as u64);
        let count = CHUNK.min(samples - c as u64 * CHUNK);
        (0..count)
            .filter(|_| hit.contains(classes.class_of(group.random_element(&mut rng))))
            .count() as u64
    })
    .into_iter()
    .sum();
    let p = inside as f64 / samples as f64;
    Ok(WordValueSet {
        n,
        words: names,
        mode: "sampled",
        size: None,
        density: p,
        radius: 3.0 * (p * (1.0 - p) / samples as f64).sqrt(),
        tuples_evaluated: samples * words.len() as u64,
        sampled: Some(SampledDetail {
            samples_per_word: samples,
            class_count: classes.count(),
            hit_classes: hit.len(),
            density_lower_bound: lower as f64 / n as f64,
            estimate_draws: samples,
        }),
        mask: None,
    })
}

fn exact_word_values(group: &FiniteGroup, words: &[Word], limits: &Limits) -> Result<SubsetMask> {
    for w in words {
        w.require_nontrivial()?;
    }
    let set = word_value_set(group, words, ValueMode::Exact, limits)?;
    Ok(set.mask.expect("exact mode carries a mask"))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WaringConfig {
    /// Random sparse subsets tested; zero skips the sparse check.
    pub sparse_trials: usize,
    pub seed: u64,
    /// Scan every element for a product of three pairwise distinct values.
    pub distinct_factors: bool,
    /// Scan every element for a product of three pairwise noncommuting values.
    pub noncommuting: bool,
}

impl Default for WaringConfig {
    fn default() -> Self {
        WaringConfig {
            sparse_trials: 20,
            seed: 0,
            distinct_factors: false,
            noncommuting: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SparseReport {
    /// `q^{r/13}`.
    pub divisor: f64,
    /// `⌈|w̄(L)| / q^{r/13}⌉`.
    pub subset_size: usize,
    pub trials: usize,
    pub covered: usize,
    pub frequency: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorScan {
    /// Elements admitting a decomposition of the required kind.
    pub decomposable: usize,
    pub all: bool,
    pub failures_sample: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WaringReport {
    pub n: usize,
    pub value_set_size: usize,
    pub full_covers: bool,
    pub full_missing_count: usize,
    /// Absent for groups without attached Lie-type parameters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparse: Option<SparseReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinct_factors: Option<FactorScan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noncommuting: Option<FactorScan>,
    /// The asymptotic statements behind these checks carry no explicit
    /// constants, so every outcome here is data rather than a pass/fail.
    pub empirical: bool,
}

/// Elements `g` for which some `h1 h2 h3 = g` with all `h_i ∈ w` and each
/// pair accepted by `ok`.
fn factor_scan(group: &FiniteGroup, w: &SubsetMask, limits: &Limits, ok: impl Fn(usize, usize) -> bool + Sync) -> Result<FactorScan> {
    let n = group.order();
    let wv = w.to_vec();
    let work = n as u128 * (wv.len() as u128).pow(2);
    if work > limits.work as u128 {
        return Err(Error::CapExceeded {
            what: "factor scan work",
            value: work,
            cap: limits.work as u128,
        });
    }
    let found = par::map_range(n, |g| {
        wv.iter().any(|&h1| {
            wv.iter().any(|&h2| {
                if !ok(h1, h2) {
                    return false;
                }
                let h3 = group.multiply(group.inverse(group.multiply(h1, h2)), g);
                w.contains(h3) && ok(h1, h3) && ok(h2, h3)
            })
        })
    });
    let failures: Vec<usize> = (0..n).filter(|&g| !found[g]).collect();
    Ok(FactorScan {
        decomposable: n - failures.len(),
        all: failures.is_empty(),
        failures_sample: failures.into_iter().take(MISSING_SAMPLE).collect(),
    })
}

fn cube(group: &FiniteGroup, w: &SubsetMask) -> Result<SubsetMask> {
    product_set(group, &product_set(group, w, w)?, w)
}

/// Desk-scale Waring checks for `W ⊆ w̄(L)`: the full set, seeded sparse
/// subsets of size `⌈|w̄(L)|/q^{r/13}⌉`, and optional decomposition scans.
pub fn waring_check(group: &FiniteGroup, words: &[Word], cfg: &WaringConfig, limits: &Limits) -> Result<WaringReport> {
    let n = group.order();
    let w = exact_word_values(group, words, limits)?;
    let full = cube(group, &w)?;

    let sparse = match group.lie() {
        Some(lie) if cfg.sparse_trials > 0 => {
            let divisor = (lie.q as f64).powf(lie.rank as f64 / 13.0);
            let size = ((w.len() as f64 / divisor).ceil() as usize).clamp(1, w.len());
            let wv = w.to_vec();
            let mut covered = 0;
            for t in 0..cfg.sparse_trials {
                let mut rng = seed::stream(cfg.seed, &[0x3A, size as u64], t as u64);
                let sub = SubsetMask::from_indices(n, sample(&mut rng, wv.len(), size).into_iter().map(|i| wv[i]))?;
                if cube(group, &sub)?.is_full() {
                    covered += 1;
                }
            }
            Some(SparseReport {
                divisor,
                subset_size: size,
                trials: cfg.sparse_trials,
                covered,
                frequency: covered as f64 / cfg.sparse_trials as f64,
            })
        }
        _ => None,
    };
    let distinct_factors = cfg
        .distinct_factors
        .then(|| factor_scan(group, &w, limits, |a, b| a != b))
        .transpose()?;
    let noncommuting = cfg
        .noncommuting
        .then(|| factor_scan(group, &w, limits, |a, b| group.multiply(a, b) != group.multiply(b, a)))
        .transpose()?;
    Ok(WaringReport {
        n,
        value_set_size: w.len(),
        full_covers: full.is_full(),
        full_missing_count: n - full.len(),
        sparse,
        distinct_factors,
        noncommuting,
        empirical: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub trials: usize,
    pub generated: usize,
    pub frequency: f64,
    pub value_set_size: usize,
    pub seed: u64,
}

/// Fraction of seeded trials in which two uniform elements of `w̄(L)`
/// generate `L`. A proper subgroup has at most `n/2` elements, so the
/// closure stops as soon as it passes that size.
pub fn random_pair_generates(group: &FiniteGroup, words: &[Word], trials: usize, seed_value: u64, limits: &Limits) -> Result<GenerationReport> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let n = group.order();
    let w = exact_word_values(group, words, limits)?.to_vec();
    let outcomes = par::map_range(trials, |t| {
        let mut rng = seed::stream(seed_value, &[0x6E], t as u64);
        let a = w[rng.random_range(0..w.len())];
        let b = w[rng.random_range(0..w.len())];
        let (mask, complete) = group.closure_until(&[a, b], n / 2);
        !complete || mask.len() == n
    });
    let generated = outcomes.iter().filter(|&&g| g).count();
    Ok(GenerationReport {
        trials,
        generated,
        frequency: generated as f64 / trials as f64,
        value_set_size: w.len(),
        seed: seed_value,
    })
}
