//! Subsets of a group's index set as fixed-length bitsets.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    n: usize,
    words: Vec<u64>,
    len: usize,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        SubsetMask {
            n,
            words: vec![0; n.div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut m = Self::empty(n);
        for w in &mut m.words {
            *w = u64::MAX;
        }
        if !n.is_multiple_of(64) {
            *m.words.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        m.len = n;
        m
    }

    /// Mask from explicit indices; duplicates are ignored.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut m = Self::empty(n);
        for i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, order: n });
            }
            m.insert(i);
        }
        Ok(m)
    }

    /// Uniformly random subset of exactly `size` elements.
    pub fn random<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Result<Self> {
        if size > n {
            return Err(Error::invalid(format!("cannot draw {size} elements from {n}")));
        }
        Self::from_indices(n, sample(rng, n, size))
    }

    /// Uniformly random inverse-closed subset of exactly `size` elements.
    ///
    /// With `s` self-inverse elements and `p` inverse pairs, the number of
    /// self-inverse members `t` is drawn with weight `C(s,t)·C(p,(size−t)/2)`,
    /// then the members and pairs are sampled uniformly.
    pub fn random_symmetric<R: Rng + ?Sized>(group: &FiniteGroup, size: usize, rng: &mut R) -> Result<Self> {
        let n = group.order();
        let (singles, pairs): (Vec<usize>, Vec<usize>) =
            (0..n).filter(|&g| g <= group.inverse(g)).partition(|&g| group.inverse(g) == g);
        let (s, p) = (singles.len(), pairs.len());
        let mut ln_fact = vec![0.0f64; s.max(p) + 1];
        for i in 1..ln_fact.len() {
            ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
        }
        let ln_choose = |a: usize, b: usize| ln_fact[a] - ln_fact[b] - ln_fact[a - b];
        let options: Vec<(usize, f64)> = (0..=s.min(size))
            .filter(|&t| (size - t).is_multiple_of(2) && (size - t) / 2 <= p)
            .map(|t| (t, ln_choose(s, t) + ln_choose(p, (size - t) / 2)))
            .collect();
        let Some(top) = options.iter().map(|o| o.1).reduce(f64::max) else {
            return Err(Error::invalid(format!("no inverse-closed subset of size {size} exists")));
        };
        let weights: Vec<f64> = options.iter().map(|o| (o.1 - top).exp()).collect();
        let pick = WeightedIndex::new(&weights).map_err(|e| Error::invalid(e.to_string()))?;
        let t = options[pick.sample(rng)].0;
        let mut m = Self::empty(n);
        for i in sample(rng, s, t) {
            m.insert(singles[i]);
        }
        for i in sample(rng, p, (size - t) / 2) {
            m.insert(pairs[i]);
            m.insert(group.inverse(pairs[i]));
        }
        Ok(m)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.n
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Inserts `i`; returns whether it was newly added.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let present = self.words[w] & b != 0;
        self.words[w] &= !b;
        self.len -= present as usize;
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + t)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn recount(&mut self) {
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn union_with(&mut self, other: &SubsetMask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.recount();
    }

    pub fn intersect_with(&mut self, other: &SubsetMask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.recount();
    }

    pub fn complement(&self) -> SubsetMask {
        let mut c = Self::full(self.n);
        for (a, b) in c.words.iter_mut().zip(&self.words) {
            *a &= !b;
        }
        c.recount();
        c
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &SubsetMask) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Errors unless this is a subset of a group of order `n`.
    pub fn check_universe(&self, n: usize) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.n, n))
        }
    }

    /// `{g^-1 : g in self}`.
    pub fn inverse_image(&self, group: &FiniteGroup) -> SubsetMask {
        let mut m = Self::empty(self.n);
        for g in self.iter() {
            m.insert(group.inverse(g));
        }
        m
    }

    /// First element whose inverse is missing, if any.
    pub fn symmetry_violation(&self, group: &FiniteGroup) -> Option<(usize, usize)> {
        self.iter()
            .map(|g| (g, group.inverse(g)))
            .find(|&(_, gi)| !self.contains(gi))
    }

    /// Left translate `gS`.
    pub fn left_translate(&self, group: &FiniteGroup, g: usize) -> SubsetMask {
        let mut m = Self::empty(self.n);
        for s in self.iter() {
            m.insert(group.multiply(g, s));
        }
        m
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
