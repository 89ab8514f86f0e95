//! Permutations and the Schreier–Sims algorithm.
//!
//! A permutation on `0..m` is stored as its image vector, `p[i]` being the
//! image of `i`. Products compose left to right: `a.then(b)` maps `i` to
//! `b[a[i]]`, which is the group product `ab` used throughout the crate.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from an image vector, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Perm(images))
    }

    /// Builds a permutation from disjoint cycles on `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Option<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                *images.get_mut(a as usize)? = b;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    /// The product "self, then other".
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|&(i, &j)| i as u32 == j).count()
    }

    /// Cycle lengths, including fixed points, in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut lens = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Sign as +1 or -1.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycle_type().iter().map(|l| l - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

struct Level {
    point: usize,
    gens: Vec<Perm>,
    /// `transversal[b]` maps `point` to `b`, for each `b` in the orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[point] = Some(Perm::identity(degree));
        Level {
            point,
            gens: Vec::new(),
            transversal,
            orbit: vec![point],
        }
    }

    fn rebuild_orbit(&mut self) {
        let degree = self.transversal.len();
        self.transversal = vec![None; degree];
        self.transversal[self.point] = Some(Perm::identity(degree));
        self.orbit = vec![self.point];
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            for g in &self.gens {
                let c = g.apply(b);
                if self.transversal[c].is_none() {
                    let u = self.transversal[b].as_ref().unwrap().then(g);
                    self.transversal[c] = Some(u);
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

/// Base and strong generating set for a permutation group.
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Runs deterministic Schreier–Sims on the given generators.
    pub fn new(degree: usize, generators: &[Perm]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
        };
        for g in generators {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            if let Some((level, residue)) = chain.sift_from(0, g.clone()) {
                chain.add_generator(0, level, residue);
            }
        }
        chain
    }

    /// Strips `g` through levels `start..`; returns the failing level and
    /// residue, or `None` if `g` sifts to the identity.
    fn sift_from(&self, start: usize, mut g: Perm) -> Option<(usize, Perm)> {
        for (j, level) in self.levels.iter().enumerate().skip(start) {
            let b = g.apply(level.point);
            match &level.transversal[b] {
                Some(u) => g = g.then(&u.inverse()),
                None => return Some((j, g)),
            }
        }
        (!g.is_identity()).then_some((self.levels.len(), g))
    }

    /// Adds `g` (which fixes the base points before `to`) to levels `from..=to`.
    fn add_generator(&mut self, from: usize, to: usize, g: Perm) {
        if to == self.levels.len() {
            let point = (0..self.degree)
                .find(|&i| g.apply(i) != i)
                .expect("non-identity residue moves a point");
            self.levels.push(Level::new(point, self.degree));
        }
        for level in &mut self.levels[from..=to] {
            level.gens.push(g.clone());
            level.rebuild_orbit();
        }
        for level in (from..=to).rev() {
            self.close_level(level);
        }
    }

    /// Sifts every Schreier generator of `level` through the levels below it.
    fn close_level(&mut self, level: usize) {
        let mut idx = 0;
        loop {
            let lvl = &self.levels[level];
            if idx >= lvl.orbit.len() * lvl.gens.len() {
                break;
            }
            let b = lvl.orbit[idx / lvl.gens.len()];
            let s = &lvl.gens[idx % lvl.gens.len()];
            let ub = lvl.transversal[b].as_ref().unwrap();
            let ubs = lvl.transversal[s.apply(b)].as_ref().unwrap();
            let schreier = ub.then(s).then(&ubs.inverse());
            idx += 1;
            if schreier.is_identity() {
                continue;
            }
            if let Some((j, residue)) = self.sift_from(level + 1, schreier) {
                self.add_generator(level + 1, j, residue);
            }
        }
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Strong generators, deduplicated, in level order.
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift_from(0, g.clone()).is_none()
    }
}
