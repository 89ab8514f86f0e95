//! Conjugacy classes and complex character tables.
//!
//! Character tables are computed with Dixon's modular method: the class
//! multiplication matrices are simultaneously diagonalized over a prime field
//! F_ℓ with ℓ ≡ 1 (mod exponent) and ℓ > 2√n, which yields exact integer
//! degrees; values are then lifted to sums of complex roots of unity through
//! eigenvalue multiplicities.

mod modp;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::Limits;
use modp::{is_prime, primitive_root, Fp};

/// Tolerance for complex orthogonality checks.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

/// Largest class count accepted by [`character_table`].
pub const MAX_CLASSES: usize = 300;

#[derive(Clone, Debug, Serialize)]
pub struct ConjClasses {
    reps: Vec<usize>,
    sizes: Vec<usize>,
    orders: Vec<usize>,
    #[serde(skip)]
    class_of: Vec<u32>,
    #[serde(skip)]
    members: Vec<Vec<usize>>,
}

impl ConjClasses {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn element_orders(&self) -> &[usize] {
        &self.orders
    }

    #[inline]
    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g] as usize
    }

    pub fn members(&self, class: usize) -> &[usize] {
        &self.members[class]
    }
}

/// Partition of the group into conjugacy classes.
///
/// Classes are ordered by element order, then size, then least member; the
/// representative is the least member, so the identity class comes first.
pub fn conjugacy_classes(group: &FiniteGroup, limits: &Limits) -> Result<ConjClasses> {
    let n = group.order();
    if n > limits.enumeration {
        return Err(Error::CapExceeded {
            what: "group order",
            value: n as u128,
            cap: limits.enumeration as u128,
        });
    }
    const UNSET: u32 = u32::MAX;
    let mut raw = vec![UNSET; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for g in 0..n {
        if raw[g] != UNSET {
            continue;
        }
        let id = members.len() as u32;
        raw[g] = id;
        let mut orbit = vec![g];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for &s in group.generators() {
                let y = group.conjugate(x, s);
                if raw[y] == UNSET {
                    raw[y] = id;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        members.push(orbit);
    }
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by_key(|&c| (group.element_order(members[c][0]), members[c].len(), members[c][0]));
    let mut rank = vec![0u32; members.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new as u32;
    }
    let members: Vec<Vec<usize>> = order.iter().map(|&c| std::mem::take(&mut members[c])).collect();
    Ok(ConjClasses {
        reps: members.iter().map(|m| m[0]).collect(),
        sizes: members.iter().map(Vec::len).collect(),
        orders: members.iter().map(|m| group.element_order(m[0])).collect(),
        class_of: raw.iter().map(|&c| rank[c as usize]).collect(),
        members,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    order: usize,
    classes: ConjClasses,
    degrees: Vec<u64>,
    /// `values[i][c]` is the value of character `i` on class `c`.
    #[serde(skip)]
    values: Vec<Vec<Complex64>>,
    prime: u64,
}

impl CharacterTable {
    pub fn classes(&self) -> &ConjClasses {
        &self.classes
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn values(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    /// The prime ℓ used for the modular computation.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    /// Least degree of a nontrivial irreducible character.
    pub fn min_nontrivial_degree(&self) -> Result<u64> {
        self.degrees.iter().skip(1).copied().min().ok_or(Error::TrivialGroup)
    }

    pub fn linear_character_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d == 1).count()
    }

    /// Largest deviation of `Σ_c |c| χ_i(c) conj(χ_j(c))` from `n δ_ij`.
    pub fn row_orthogonality_residual(&self) -> f64 {
        let s = self.degrees.len();
        let mut worst: f64 = 0.0;
        for i in 0..s {
            for j in 0..s {
                let sum: Complex64 = (0..s)
                    .map(|c| self.values[i][c] * self.values[j][c].conj() * self.classes.sizes[c] as f64)
                    .sum();
                let target = if i == j { self.order as f64 } else { 0.0 };
                worst = worst.max((sum - target).norm());
            }
        }
        worst
    }

    /// Largest deviation of `Σ_i χ_i(c) conj(χ_i(d))` from `δ_cd n / |c|`.
    pub fn column_orthogonality_residual(&self) -> f64 {
        let s = self.degrees.len();
        let mut worst: f64 = 0.0;
        for c in 0..s {
            for d in 0..s {
                let sum: Complex64 = (0..s).map(|i| self.values[i][c] * self.values[i][d].conj()).sum();
                let target = if c == d {
                    self.order as f64 / self.classes.sizes[c] as f64
                } else {
                    0.0
                };
                worst = worst.max((sum - target).norm());
            }
        }
        worst
    }

    /// Tab-separated rendering: one row per character, one column per class.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("char");
        for c in 0..self.classes.count() {
            out.push_str(&format!("\t{}{}", self.classes.orders[c], class_letter(c, &self.classes)));
        }
        out.push('\n');
        for (i, row) in self.values.iter().enumerate() {
            out.push_str(&format!("X.{}", i + 1));
            for v in row {
                out.push('\t');
                out.push_str(&format_complex(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// Suffix distinguishing classes of equal element order: a, b, c, ...
fn class_letter(c: usize, classes: &ConjClasses) -> char {
    let o = classes.orders[c];
    let before = classes.orders[..c].iter().filter(|&&x| x == o).count();
    (b'a' + (before % 26) as u8) as char
}

fn format_complex(v: Complex64) -> String {
    let clean = |x: f64| {
        let r = (x * 1e9).round() / 1e9;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    let (re, im) = (clean(v.re), clean(v.im));
    if im == 0.0 {
        format!("{re}")
    } else if im > 0.0 {
        format!("{re}+{im}i")
    } else {
        format!("{re}{im}i")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least prime ℓ ≡ 1 (mod e) with ℓ > 2√n.
fn dixon_prime(exponent: u64, n: usize) -> u64 {
    let bound = 2.0 * (n as f64).sqrt();
    let mut l = exponent + 1;
    while (l as f64) <= bound || !is_prime(l) {
        l += exponent;
    }
    l
}

struct ClassAlgebra<'a> {
    group: &'a FiniteGroup,
    classes: &'a ConjClasses,
    fp: Fp,
}

impl ClassAlgebra<'_> {
    /// `M[r][s] = #{x in C_j : x^-1 z_s in C_r}`, reduced mod ℓ, so that
    /// central characters are right eigenvectors: `M ω = ω_j ω`.
    fn matrix(&self, j: usize) -> Vec<Vec<u64>> {
        let s = self.classes.count();
        let mut m = vec![vec![0u64; s]; s];
        for (col, &z) in self.classes.reps.iter().enumerate() {
            for &x in self.classes.members(j) {
                let r = self.classes.class_of(self.group.multiply(self.group.inverse(x), z));
                m[r][col] += 1;
            }
        }
        for row in &mut m {
            for v in row.iter_mut() {
                *v %= self.fp.p;
            }
        }
        m
    }
}

/// Splits `basis` (rows, RREF) into common eigenspaces of `m`.
fn split(fp: Fp, m: &[Vec<u64>], basis: Vec<Vec<u64>>, pivots: &[usize]) -> Result<Vec<(Vec<Vec<u64>>, Vec<usize>)>> {
    let d = basis.len();
    let s = m.len();
    // images[k] = M b_k; restriction R[l][k] = images[k][pivot_l].
    let images: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| {
            (0..s)
                .map(|r| (0..s).fold(0, |acc, c| fp.add(acc, fp.mul(m[r][c], b[c]))))
                .collect()
        })
        .collect();
    let restricted: Vec<Vec<u64>> = (0..d)
        .map(|l| (0..d).map(|k| images[k][pivots[l]]).collect())
        .collect();
    let roots = fp.roots(&fp.charpoly(&restricted));
    let mut parts = Vec::new();
    let mut total = 0;
    for lambda in roots {
        let shifted: Vec<Vec<u64>> = restricted
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &x)| if i == j { fp.sub(x, lambda) } else { x })
                    .collect()
            })
            .collect();
        let mut vecs: Vec<Vec<u64>> = fp
            .nullspace(&shifted)
            .into_iter()
            .map(|u| {
                (0..s)
                    .map(|c| (0..d).fold(0, |acc, k| fp.add(acc, fp.mul(u[k], basis[k][c]))))
                    .collect()
            })
            .collect();
        let piv = fp.rref(&mut vecs);
        total += vecs.len();
        parts.push((vecs, piv));
    }
    if total != d {
        return Err(Error::SplittingFailure { dim: d });
    }
    Ok(parts)
}

/// Complete irreducible character table.
pub fn character_table(group: &FiniteGroup, limits: &Limits) -> Result<CharacterTable> {
    let classes = conjugacy_classes(group, limits)?;
    character_table_from_classes(group, classes)
}

pub fn character_table_from_classes(group: &FiniteGroup, classes: ConjClasses) -> Result<CharacterTable> {
    let n = group.order();
    let s = classes.count();
    if s > MAX_CLASSES {
        return Err(Error::CapExceeded {
            what: "class count",
            value: s as u128,
            cap: MAX_CLASSES as u128,
        });
    }
    let exponent = classes.orders.iter().fold(1u64, |acc, &o| acc / gcd(acc, o as u64) * o as u64);
    let prime = dixon_prime(exponent, n);
    let fp = Fp { p: prime };
    let algebra = ClassAlgebra {
        group,
        classes: &classes,
        fp,
    };

    let identity: Vec<Vec<u64>> = (0..s)
        .map(|i| (0..s).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut spaces = vec![(identity, (0..s).collect::<Vec<usize>>())];
    for j in 1..s {
        if spaces.iter().all(|(b, _)| b.len() == 1) {
            break;
        }
        let m = algebra.matrix(j);
        let mut next = Vec::with_capacity(spaces.len());
        for (basis, pivots) in spaces {
            if basis.len() == 1 {
                next.push((basis, pivots));
            } else {
                next.extend(split(fp, &m, basis, &pivots)?);
            }
        }
        spaces = next;
    }
    if let Some((b, _)) = spaces.iter().find(|(b, _)| b.len() != 1) {
        return Err(Error::SplittingFailure { dim: b.len() });
    }

    let inverse_class: Vec<usize> = classes.reps.iter().map(|&g| classes.class_of(group.inverse(g))).collect();
    let sizes_mod: Vec<u64> = classes.sizes.iter().map(|&c| fp.reduce_usize(c)).collect();
    let isqrt = (n as f64).sqrt().floor() as u64 + 1;

    let mut rows: Vec<(u64, Vec<u64>)> = Vec::with_capacity(s);
    for (basis, _) in &spaces {
        let v = &basis[0];
        if v[0] == 0 {
            return Err(Error::SplittingFailure { dim: 1 });
        }
        let norm = fp.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&x| fp.mul(x, norm)).collect();
        let t = (0..s).fold(0, |acc, c| {
            fp.add(acc, fp.mul(fp.mul(omega[c], omega[inverse_class[c]]), fp.inv(sizes_mod[c])))
        });
        if t == 0 {
            return Err(Error::SplittingFailure { dim: 1 });
        }
        let target = fp.mul(fp.reduce_usize(n), fp.inv(t));
        let degree = (1..=isqrt)
            .find(|&d| fp.mul(d, d) == target && (n as u64).is_multiple_of(d))
            .ok_or(Error::SplittingFailure { dim: 1 })?;
        let chi: Vec<u64> = (0..s)
            .map(|c| fp.mul(fp.mul(degree % prime, omega[c]), fp.inv(sizes_mod[c])))
            .collect();
        rows.push((degree, chi));
    }
    // Trivial character first, then by degree and modular values.
    rows.sort_by(|a, b| {
        let ta = a.1.iter().all(|&x| x == 1);
        let tb = b.1.iter().all(|&x| x == 1);
        tb.cmp(&ta).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1))
    });

    let z = fp.pow(primitive_root(prime), (prime - 1) / exponent);
    let mut values = vec![vec![Complex64::new(0.0, 0.0); s]; s];
    for c in 0..s {
        let (g, o) = (classes.reps[c], classes.orders[c]);
        let mut power_classes = Vec::with_capacity(o);
        let mut x = 0;
        for _ in 0..o {
            power_classes.push(classes.class_of(x));
            x = group.multiply(x, g);
        }
        let zo = fp.pow(z, exponent / o as u64);
        let zo_inv = fp.inv(zo);
        let o_inv = fp.inv(o as u64 % prime);
        for (i, (degree, chi)) in rows.iter().enumerate() {
            let mut value = Complex64::new(0.0, 0.0);
            let mut mult_total = 0;
            for k in 0..o {
                let step = fp.pow(zo_inv, k as u64);
                let mut acc = 0;
                let mut w = 1;
                for &pc in &power_classes {
                    acc = fp.add(acc, fp.mul(chi[pc], w));
                    w = fp.mul(w, step);
                }
                let mult = fp.mul(acc, o_inv);
                if mult > *degree {
                    return Err(Error::SplittingFailure { dim: 1 });
                }
                mult_total += mult;
                let angle = 2.0 * PI * k as f64 / o as f64;
                value += Complex64::from_polar(mult as f64, angle);
            }
            if mult_total != *degree {
                return Err(Error::SplittingFailure { dim: 1 });
            }
            values[i][c] = value;
        }
    }

    let degrees: Vec<u64> = rows.iter().map(|r| r.0).collect();
    let table = CharacterTable {
        order: n,
        classes,
        degrees,
        values,
        prime,
    };
    let sum_sq: u64 = table.degrees.iter().map(|d| d * d).sum();
    if sum_sq != n as u64 {
        return Err(Error::TheoremViolation(format!("sum of squared degrees {sum_sq} != {n}")));
    }
    let residual = table.row_orthogonality_residual();
    if residual > ORTHOGONALITY_TOL {
        return Err(Error::TheoremViolation(format!("row orthogonality residual {residual:e}")));
    }
    Ok(table)
}

/// Quasirandomness parameter `k`: least degree of a nontrivial irreducible.
pub fn min_nontrivial_degree(group: &FiniteGroup, limits: &Limits) -> Result<u64> {
    if group.order() == 1 {
        return Err(Error::TrivialGroup);
    }
    character_table(group, limits)?.min_nontrivial_degree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::matrix::MatrixKind;
    use crate::Family;

    fn group(f: Family) -> FiniteGroup {
        f.construct(&Limits::default()).unwrap()
    }

    fn sorted_degrees(f: Family) -> Vec<u64> {
        let t = character_table(&group(f), &Limits::default()).unwrap();
        let mut d = t.degrees().to_vec();
        d.sort_unstable();
        d
    }

    /// Class sizes by brute-force orbit computation under all n conjugators.
    fn brute_class_sizes(g: &FiniteGroup) -> Vec<usize> {
        let n = g.order();
        let mut seen = vec![false; n];
        let mut sizes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..n).map(|h| g.conjugate(x, h)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            sizes.push(orbit.len());
        }
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn classes_match_brute_force() {
        for f in [
            Family::Symmetric(3),
            Family::Cyclic(6),
            Family::Alternating(5),
            Family::linear(MatrixKind::PSL, 2, 7),
            Family::Dihedral(6),
        ] {
            let g = group(f.clone());
            let cc = conjugacy_classes(&g, &Limits::default()).unwrap();
            let mut sizes = cc.sizes().to_vec();
            sizes.sort_unstable();
            assert_eq!(sizes, brute_class_sizes(&g), "{f}");
            assert_eq!(cc.sizes().iter().sum::<usize>(), g.order());
            assert!(cc.sizes().iter().all(|s| g.order().is_multiple_of(*s)));
            assert_eq!((cc.reps()[0], cc.sizes()[0]), (0, 1));
        }
        let s3 = conjugacy_classes(&group(Family::Symmetric(3)), &Limits::default()).unwrap();
        assert_eq!(s3.sizes(), &[1, 3, 2]);
        assert_eq!(conjugacy_classes(&group(Family::linear(MatrixKind::PSL, 2, 7)), &Limits::default()).unwrap().count(), 6);
    }

    #[test]
    fn known_degree_multisets() {
        assert_eq!(sorted_degrees(Family::Cyclic(3)), vec![1, 1, 1]);
        assert_eq!(sorted_degrees(Family::Symmetric(3)), vec![1, 1, 2]);
        assert_eq!(sorted_degrees(Family::Alternating(5)), vec![1, 3, 3, 4, 5]);
        assert_eq!(sorted_degrees(Family::linear(MatrixKind::PSL, 2, 7)), vec![1, 3, 3, 6, 7, 8]);
        assert_eq!(sorted_degrees(Family::Symmetric(4)), vec![1, 1, 2, 3, 3]);
        assert_eq!(sorted_degrees(Family::linear(MatrixKind::SL, 2, 3)), vec![1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn orthogonality_both_ways() {
        for f in [
            Family::Alternating(5),
            Family::linear(MatrixKind::PSL, 2, 11),
            Family::Dihedral(7),
            Family::linear(MatrixKind::SU, 3, 2),
        ] {
            let t = character_table(&group(f.clone()), &Limits::default()).unwrap();
            assert!(t.row_orthogonality_residual() < ORTHOGONALITY_TOL, "{f}");
            assert!(t.column_orthogonality_residual() < ORTHOGONALITY_TOL, "{f}");
        }
    }

    #[test]
    fn minimal_degrees() {
        let k = |f| min_nontrivial_degree(&group(f), &Limits::default()).unwrap();
        assert_eq!(k(Family::Cyclic(6)), 1);
        assert_eq!(k(Family::linear(MatrixKind::PSL, 2, 7)), 3);
        assert_eq!(k(Family::linear(MatrixKind::PSL, 2, 11)), 5);
        assert_eq!(
            min_nontrivial_degree(&group(Family::Cyclic(1)), &Limits::default()),
            Err(Error::TrivialGroup)
        );
    }

    #[test]
    fn linear_characters_count_abelianization() {
        for f in [Family::Symmetric(4), Family::Dihedral(6), Family::Alternating(4), Family::Cyclic(5)] {
            let g = group(f.clone());
            let t = character_table(&g, &Limits::default()).unwrap();
            assert_eq!(t.linear_character_count(), g.order() / g.derived_subgroup().len(), "{f}");
        }
    }

    #[test]
    fn direct_product_takes_minimum_degree() {
        let a5 = group(Family::Alternating(5));
        let psl = group(Family::linear(MatrixKind::PSL, 2, 7));
        let c2 = group(Family::Cyclic(2));
        let k = |g: &FiniteGroup| min_nontrivial_degree(g, &Limits::default()).unwrap();
        assert_eq!(k(&FiniteGroup::direct_product(&a5, &psl).unwrap()), 3);
        assert_eq!(k(&FiniteGroup::direct_product(&c2, &a5).unwrap()), 1);
        let t = character_table(&FiniteGroup::direct_product(&a5, &a5).unwrap(), &Limits::default()).unwrap();
        assert_eq!(t.linear_character_count(), 1);
        assert_eq!(t.degrees().len(), 25);
    }

    #[test]
    fn tsv_shape() {
        let t = character_table(&group(Family::Symmetric(3)), &Limits::default()).unwrap();
        let tsv = t.to_tsv();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "char\t1a\t2a\t3a");
        assert_eq!(lines[1], "X.1\t1\t1\t1");
    }
}
