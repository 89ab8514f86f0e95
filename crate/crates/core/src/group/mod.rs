//! Finite groups with indexed elements.
//!
//! Every group, whatever its backend, is presented as the index set `0..n`
//! with `0` the identity. Permutation and matrix groups are enumerated once by
//! breadth-first closure over their generators (right multiplication, fixed
//! generator order), which fixes the indexing. Groups of moderate order also
//! carry a full Cayley table.

pub mod family;
pub mod field;
pub mod matrix;
pub mod perm;

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::SubsetMask;
use matrix::{MatrixGroup, MatrixKind};
use perm::Perm;

pub use family::Family;

/// Groups up to this order get a materialized Cayley table.
pub const CAYLEY_TABLE_MAX: usize = 4096;

/// Lie-type parameters attached to matrix groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LieData {
    pub kind: MatrixKind,
    pub dim: usize,
    pub q: u64,
    /// Untwisted rank, `dim - 1` for the SL and SU families.
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub enum Backend {
    Table,
    Permutation { degree: usize },
    Matrix(MatrixGroup),
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Table => "table",
            Backend::Permutation { .. } => "permutation",
            Backend::Matrix(_) => "matrix",
        }
    }

    fn compose(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        match self {
            Backend::Table => unreachable!("table groups have no element representations"),
            Backend::Permutation { .. } => a.iter().map(|&i| b[i as usize]).collect(),
            Backend::Matrix(g) => g.mul(a, b),
        }
    }
}

/// Concrete element representations, indexed.
#[derive(Clone, Debug)]
struct Reprs {
    stride: usize,
    data: Vec<u32>,
    index: HashMap<Box<[u32]>, u32>,
}

impl Reprs {
    fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }
}

/// A finite group on the index set `0..order`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    backend: Backend,
    reprs: Option<Reprs>,
    table: Option<Vec<u32>>,
    inverses: Vec<u32>,
    element_orders: Vec<u32>,
    generators: Vec<usize>,
}

struct Enumeration {
    reprs: Reprs,
    /// `right[x * ngens + s]` is the index of `x * gen_s`.
    right: Vec<u32>,
    /// BFS parent and generator for every non-identity element.
    parent: Vec<(u32, u32)>,
    gen_index: Vec<usize>,
}

fn enumerate(
    backend: &Backend,
    identity: Vec<u32>,
    gens: &[Vec<u32>],
    cap: usize,
) -> Result<Enumeration> {
    let stride = identity.len();
    let mut data = identity.clone();
    let mut index: HashMap<Box<[u32]>, u32> = HashMap::new();
    index.insert(identity.into_boxed_slice(), 0);
    let mut right = Vec::new();
    let mut parent = vec![(0, 0)];
    let mut x = 0;
    while x * stride < data.len() {
        for (s, g) in gens.iter().enumerate() {
            let y = backend.compose(&data[x * stride..(x + 1) * stride], g);
            let next = index.len() as u32;
            let idx = *index.entry(y.clone().into_boxed_slice()).or_insert(next);
            if idx == next {
                if index.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        value: index.len() as u128,
                        cap: cap as u128,
                    });
                }
                data.extend_from_slice(&y);
                parent.push((x as u32, s as u32));
            }
            right.push(idx);
        }
        x += 1;
    }
    let gen_index = (0..gens.len()).map(|s| right[s] as usize).collect();
    Ok(Enumeration {
        reprs: Reprs {
            stride,
            data,
            index,
        },
        right,
        parent,
        gen_index,
    })
}

impl FiniteGroup {
    fn from_enumeration(label: String, backend: Backend, en: Enumeration) -> Self {
        let n = en.parent.len();
        let ngens = en.gen_index.len();
        let table = (n <= CAYLEY_TABLE_MAX).then(|| {
            let mut t = vec![0u32; n * n];
            for g in 0..n {
                let row = &mut t[g * n..(g + 1) * n];
                row[0] = g as u32;
                for h in 1..n {
                    let (p, s) = en.parent[h];
                    row[h] = en.right[row[p as usize] as usize * ngens + s as usize];
                }
            }
            t
        });
        let mut gens: Vec<usize> = Vec::new();
        for &g in &en.gen_index {
            if g != 0 && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let mut group = FiniteGroup {
            label,
            order: n,
            backend,
            reprs: Some(en.reprs),
            table,
            inverses: Vec::new(),
            element_orders: Vec::new(),
            generators: gens,
        };
        group.fill_orders_and_inverses();
        group
    }

    fn fill_orders_and_inverses(&mut self) {
        let n = self.order;
        let mut inverses = vec![0u32; n];
        let mut orders = vec![1u32; n];
        for g in 1..n {
            // x = g^k, prev = g^(k-1)
            let (mut prev, mut x, mut k) = (g, self.multiply(g, g), 2u32);
            while x != 0 {
                prev = x;
                x = self.multiply(x, g);
                k += 1;
            }
            orders[g] = k;
            inverses[g] = prev as u32;
        }
        self.inverses = inverses;
        self.element_orders = orders;
    }

    /// Permutation group generated by `gens` on `0..degree`.
    pub fn from_permutations(label: impl Into<String>, degree: usize, gens: &[Perm], cap: usize) -> Result<Self> {
        let backend = Backend::Permutation {
            degree: degree.max(1),
        };
        let gens: Vec<Vec<u32>> = gens.iter().map(|g| g.images().to_vec()).collect();
        let en = enumerate(&backend, Perm::identity(degree.max(1)).images().to_vec(), &gens, cap)?;
        Ok(Self::from_enumeration(label.into(), backend, en))
    }

    /// Matrix group enumerated from its standard generators.
    pub fn from_matrix_group(group: MatrixGroup, cap: usize) -> Result<Self> {
        let expected = group.order();
        if expected > cap as u128 {
            return Err(Error::CapExceeded {
                what: "group order",
                value: expected,
                cap: cap as u128,
            });
        }
        let label = format!("{}({},{})", group.kind(), group.dim(), group.q());
        let backend = Backend::Matrix(group.clone());
        for extra in 0..16 {
            let gens = group.generators(extra);
            let en = enumerate(&backend, group.identity(), &gens, cap)?;
            if en.parent.len() as u128 == expected {
                return Ok(Self::from_enumeration(label, backend, en));
            }
            if !group.kind().is_unitary() {
                return Err(Error::invalid(format!(
                    "generators of {label} close to {} elements, expected {expected}",
                    en.parent.len()
                )));
            }
        }
        Err(Error::invalid(format!("could not find generators for {label}")))
    }

    /// Group from a Cayley table with identity at index 0.
    ///
    /// Validates closure, the Latin-square property, identity and
    /// associativity (exhaustively up to order 200, on sampled triples
    /// beyond).
    pub fn from_cayley_table(label: impl Into<String>, n: usize, table: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a group has at least one element"));
        }
        if table.len() != n * n {
            return Err(Error::invalid(format!("table has {} entries, expected {}", table.len(), n * n)));
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= n) {
            return Err(Error::invalid(format!("table entry {bad} out of range")));
        }
        for g in 0..n {
            if table[g] as usize != g || table[g * n] as usize != g {
                return Err(Error::invalid("index 0 must be the identity"));
            }
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for h in 0..n {
                row[table[g * n + h] as usize] = true;
                col[table[h * n + g] as usize] = true;
            }
            if row.iter().chain(&col).any(|&b| !b) {
                return Err(Error::invalid("table is not a Latin square"));
            }
        }
        let mut group = FiniteGroup {
            label: label.into(),
            order: n,
            backend: Backend::Table,
            reprs: None,
            table: Some(table),
            inverses: Vec::new(),
            element_orders: Vec::new(),
            generators: Vec::new(),
        };
        if let Some((a, b, c)) = group.associativity_failure(10_000, 0xa550c) {
            return Err(Error::invalid(format!("table is not associative at ({a}, {b}, {c})")));
        }
        group.fill_orders_and_inverses();
        // Greedy generating set: add the least element outside the closure.
        let mut gens = Vec::new();
        let mut closure = group.closure(&gens);
        while closure.len() < n {
            let g = (0..n).find(|&g| !closure.contains(g)).unwrap();
            gens.push(g);
            closure = group.closure(&gens);
        }
        group.generators = gens;
        Ok(group)
    }

    /// Parses the plain-text Cayley table format: the order `n` on the first
    /// line, then `n` rows of `n` whitespace-separated indices.
    pub fn parse_cayley_text(label: impl Into<String>, text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::invalid("empty table file"))?
            .parse()
            .map_err(|_| Error::invalid("first token must be the group order"))?;
        let entries: std::result::Result<Vec<u32>, _> = tokens.map(str::parse).collect();
        let entries = entries.map_err(|_| Error::invalid("table entries must be non-negative integers"))?;
        Self::from_cayley_table(label, n, entries)
    }

    /// Direct product; `(a, b)` gets index `a * |H| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (n, m) = (g.order(), h.order());
        let mut table = Vec::with_capacity(n * m * n * m);
        for x in 0..n * m {
            for y in 0..n * m {
                let a = g.multiply(x / m, y / m);
                let b = h.multiply(x % m, y % m);
                table.push((a * m + b) as u32);
            }
        }
        Self::from_cayley_table(format!("{}x{}", g.label, h.label), n * m, table)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn lie(&self) -> Option<LieData> {
        match &self.backend {
            Backend::Matrix(g) => Some(LieData {
                kind: g.kind(),
                dim: g.dim(),
                q: g.q(),
                rank: g.lie_rank(),
            }),
            _ => None,
        }
    }

    pub fn matrix_group(&self) -> Option<&MatrixGroup> {
        match &self.backend {
            Backend::Matrix(g) => Some(g),
            _ => None,
        }
    }

    /// Product `gh`. Panics on out-of-range indices; see [`Self::try_multiply`].
    #[inline]
    pub fn multiply(&self, g: usize, h: usize) -> usize {
        if let Some(t) = &self.table {
            return t[g * self.order + h] as usize;
        }
        let reprs = self.reprs.as_ref().expect("table-less groups carry representations");
        let prod = self.backend.compose(reprs.get(g), reprs.get(h));
        reprs.index[prod.as_slice()] as usize
    }

    pub fn try_multiply(&self, g: usize, h: usize) -> Result<usize> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.multiply(g, h))
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g] as usize
    }

    pub fn try_inverse(&self, g: usize) -> Result<usize> {
        self.check(g)?;
        Ok(self.inverse(g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.element_orders[g] as usize
    }

    pub fn check(&self, g: usize) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: g,
                order: self.order,
            })
        }
    }

    /// `g^e` for any integer exponent.
    pub fn pow(&self, g: usize, e: i64) -> usize {
        let ord = self.element_order(g) as i64;
        let mut e = e.rem_euclid(ord) as u64;
        let (mut base, mut acc) = (g, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(acc, base);
            }
            base = self.multiply(base, base);
            e >>= 1;
        }
        acc
    }

    /// `h^-1 g h`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.multiply(self.multiply(self.inverse(h), g), h)
    }

    /// `[g, h] = g^-1 h^-1 g h`.
    pub fn commutator(&self, g: usize, h: usize) -> usize {
        let gh = self.multiply(g, h);
        let hg = self.multiply(h, g);
        self.multiply(self.inverse(hg), gh)
    }

    /// Uniform random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.order)
    }

    pub fn permutation(&self, g: usize) -> Option<Perm> {
        match (&self.backend, &self.reprs) {
            (Backend::Permutation { .. }, Some(r)) => Perm::from_images(r.get(g).to_vec()),
            _ => None,
        }
    }

    pub fn matrix(&self, g: usize) -> Option<&[u32]> {
        match (&self.backend, &self.reprs) {
            (Backend::Matrix(_), Some(r)) => Some(r.get(g)),
            _ => None,
        }
    }

    /// Index of a concrete permutation or matrix, if it lies in the group.
    pub fn index_of(&self, repr: &[u32]) -> Option<usize> {
        let reprs = self.reprs.as_ref()?;
        let key: Vec<u32> = match &self.backend {
            Backend::Matrix(g) => g.canonical(repr.to_vec()),
            _ => repr.to_vec(),
        };
        reprs.index.get(key.as_slice()).map(|&i| i as usize)
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> SubsetMask {
        self.closure_until(gens, usize::MAX).0
    }

    /// Closure of `gens`, stopping early once more than `stop_above` elements
    /// are found. Returns the (possibly partial) closure and whether it is complete.
    pub fn closure_until(&self, gens: &[usize], stop_above: usize) -> (SubsetMask, bool) {
        let mut mask = SubsetMask::empty(self.order);
        mask.insert(0);
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for &s in gens {
                let y = self.multiply(x, s);
                if mask.insert(y) {
                    queue.push(y);
                    if queue.len() > stop_above {
                        return (mask, false);
                    }
                }
            }
            i += 1;
        }
        (mask, true)
    }

    /// First failing triple among exhaustive (order ≤ 200) or sampled triples.
    pub fn associativity_failure(&self, samples: usize, seed: u64) -> Option<(usize, usize, usize)> {
        let n = self.order;
        let check = |a, b, c| {
            let l = self.multiply(self.multiply(a, b), c);
            let r = self.multiply(a, self.multiply(b, c));
            (l != r).then_some((a, b, c))
        };
        if n <= 200 {
            crate::par::find_map_first(n, |a| {
                (0..n).find_map(|b| (0..n).find_map(|c| check(a, b, c)))
            })
        } else {
            let mut rng = crate::seed::rng(seed);
            (0..samples).find_map(|_| {
                check(
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                )
            })
        }
    }

    /// Checks identity, inverse and associativity laws.
    pub fn verify_axioms(&self) -> Result<()> {
        for g in 0..self.order {
            if self.multiply(0, g) != g || self.multiply(g, 0) != g {
                return Err(Error::invalid(format!("identity law fails at {g}")));
            }
            if self.multiply(g, self.inverse(g)) != 0 {
                return Err(Error::invalid(format!("inverse law fails at {g}")));
            }
        }
        if let Some(t) = self.associativity_failure(10_000, 0xa550c) {
            return Err(Error::invalid(format!("associativity fails at {t:?}")));
        }
        Ok(())
    }

    /// Whether `gh = hg` for every pair of generators.
    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.multiply(a, b) == self.multiply(b, a)))
    }

    /// Commutator subgroup: normal closure of generator commutators.
    pub fn derived_subgroup(&self) -> SubsetMask {
        let mut gens = Vec::new();
        for &a in &self.generators {
            for &b in &self.generators {
                let c = self.commutator(a, b);
                if c != 0 && !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
        self.normal_closure(&gens)
    }

    /// Smallest normal subgroup containing `elems`.
    pub fn normal_closure(&self, elems: &[usize]) -> SubsetMask {
        let mut gens: Vec<usize> = elems.to_vec();
        loop {
            let h = self.closure(&gens);
            let mut grew = false;
            for x in h.iter().collect::<Vec<_>>() {
                for &s in &self.generators {
                    let c = self.conjugate(x, s);
                    if !h.contains(c) && !gens.contains(&c) {
                        gens.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                return h;
            }
        }
    }

    pub fn is_perfect(&self) -> bool {
        self.order == 1 || self.derived_subgroup().len() == self.order
    }
}
