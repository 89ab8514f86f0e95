//! Cross-checks against independent brute-force or closed-form oracles.

use quasirandom::group::matrix::{MatrixGroup, MatrixKind};
use quasirandom::product::{alpha_exact, is_product_free, product_free_search, SearchBudget};
use quasirandom::words::{parse_word, rs_fraction, word_value_set, RsMode, ValueMode};
use quasirandom::{Family, FiniteGroup, Limits, SubsetMask};

fn group(f: Family) -> FiniteGroup {
    f.construct(&Limits::default()).unwrap()
}

/// Quaternion group from its unit multiplication rule: index `2u + s` is
/// `(-1)^s` times unit `u` of `1, i, j, k`.
fn quaternion() -> FiniteGroup {
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let mut table = vec![0u32; 64];
    for a in 0..8 {
        for b in 0..8 {
            let (u, s) = UNIT[a / 2][b / 2];
            table[a * 8 + b] = (2 * u + (s + a % 2 + b % 2) % 2) as u32;
        }
    }
    FiniteGroup::from_cayley_table("Q8", 8, table).unwrap()
}

/// Largest product-free subset by plain include/exclude recursion on `u32`
/// masks, using only the multiplication table.
fn alpha_oracle(g: &FiniteGroup) -> usize {
    let n = g.order();
    assert!(n <= 32);
    let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| g.multiply(a, b)).collect()).collect();
    fn go(x: usize, s: u32, size: usize, best: &mut usize, n: usize, mul: &[Vec<usize>]) {
        if size + (n - x) <= *best {
            return;
        }
        if x == n {
            *best = size;
            return;
        }
        let t = s | 1 << x;
        let ok = (0..n).filter(|&a| t >> a & 1 == 1).all(|a| {
            (0..n)
                .filter(|&b| t >> b & 1 == 1)
                .all(|b| t >> mul[a][b] & 1 == 0)
        });
        if ok {
            go(x + 1, t, size + 1, best, n, mul);
        }
        go(x + 1, s, size, best, n, mul);
    }
    let mut best = 0;
    go(1, 0, 0, &mut best, n, &mul);
    best
}

#[test]
fn alpha_matches_bitmask_oracle() {
    let mut groups: Vec<FiniteGroup> = Vec::new();
    for m in 1..=12 {
        groups.push(group(Family::Cyclic(m)));
    }
    for m in 3..=8 {
        groups.push(group(Family::Dihedral(m)));
    }
    groups.push(group(Family::Symmetric(3)));
    groups.push(group(Family::Symmetric(4)));
    groups.push(group(Family::Alternating(4)));
    groups.push(quaternion());
    for g in &groups {
        let r = alpha_exact(g).unwrap();
        assert_eq!(r.alpha, alpha_oracle(g), "{}", g.label());
        assert_eq!(r.witness.len(), r.alpha);
        let mask = SubsetMask::from_indices(g.order(), r.witness.iter().copied()).unwrap();
        assert!(is_product_free(g, &mask).unwrap().is_product_free());
    }
}

#[test]
fn quaternion_facts() {
    let q8 = quaternion();
    assert!(q8.verify_axioms().is_ok());
    assert!(!q8.is_abelian());
    assert_eq!((0..8).filter(|&g| q8.element_order(g) == 4).count(), 6);
    // The squares of Q8 are {1, -1}.
    let sq = word_value_set(&q8, &[parse_word("x1^2").unwrap()], ValueMode::Exact, &Limits::default()).unwrap();
    assert_eq!(sq.size, Some(2));
}

#[test]
fn search_results_are_product_free() {
    for f in [Family::Alternating(5), Family::Dihedral(7), Family::linear(MatrixKind::PSL, 2, 7)] {
        let g = group(f);
        let r = product_free_search(&g, &SearchBudget::default(), &Limits::default()).unwrap();
        let mask = SubsetMask::from_indices(g.order(), r.best.elements.iter().copied()).unwrap();
        assert!(is_product_free(&g, &mask).unwrap().is_product_free());
        assert!(r.best.size >= r.best_coset_size);
    }
}

/// Squares of every element, taken directly on permutations.
#[test]
fn squares_by_direct_permutation_products() {
    for (f, expected) in [(Family::Alternating(5), Some(45)), (Family::Symmetric(4), Some(12)), (Family::Alternating(6), None)] {
        let g = group(f);
        let mut squares: Vec<Vec<usize>> = (0..g.order())
            .map(|x| {
                let p = g.permutation(x).unwrap();
                (0..p.degree()).map(|i| p.apply(p.apply(i))).collect()
            })
            .collect();
        squares.sort();
        squares.dedup();
        let computed = word_value_set(&g, &[parse_word("x1^2").unwrap()], ValueMode::Exact, &Limits::default())
            .unwrap()
            .size
            .unwrap();
        assert_eq!(computed, squares.len());
        if let Some(e) = expected {
            assert_eq!(computed, e);
        }
    }
}

/// Polynomials over GF(p), lowest coefficient first.
mod fp_poly {
    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % p;
            }
        }
        r
    }

    pub fn monic(d: usize, p: u64) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for code in 0..p.pow(d as u32) {
            let mut c = code;
            let mut f: Vec<u64> = (0..d)
                .map(|_| {
                    let x = c % p;
                    c /= p;
                    x
                })
                .collect();
            f.push(1);
            out.push(f);
        }
        out
    }

    /// Monic irreducibles of each degree up to `n`, by sieving products.
    pub fn irreducibles(n: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
        let mut irr: Vec<Vec<Vec<u64>>> = vec![Vec::new(); n + 1];
        for d in 1..=n {
            let mut reducible = std::collections::HashSet::new();
            for d1 in 1..d {
                for a in monic(d1, p) {
                    for b in monic(d - d1, p) {
                        reducible.insert(mul(&a, &b, p));
                    }
                }
            }
            irr[d] = monic(d, p).into_iter().filter(|f| !reducible.contains(f)).collect();
        }
        irr
    }
}

/// Number of regular semisimple elements of SL(n, p).
///
/// Every squarefree monic `f` of degree `n` is the characteristic polynomial
/// of exactly one GL-class, with centralizer `∏ (p^{d_i} - 1)` over the
/// irreducible factors; the class lies in SL when `(-1)^n f(0) = 1`.
fn rs_count_oracle(n: usize, p: u64) -> u128 {
    let irr = fp_poly::irreducibles(n, p);
    let factors: Vec<(usize, &Vec<u64>)> = (1..=n).flat_map(|d| irr[d].iter().map(move |f| (d, f))).collect();
    let gl: u128 = (0..n).map(|i| (p as u128).pow(n as u32) - (p as u128).pow(i as u32)).product();
    fn go(start: usize, deg: usize, poly: Vec<u64>, cent: u128, ctx: (&[(usize, &Vec<u64>)], usize, u64, u128), total: &mut u128) {
        let (factors, n, p, gl) = ctx;
        if deg == n {
            let det = if n % 2 == 0 { poly[0] } else { (p - poly[0]) % p };
            if det == 1 {
                *total += gl / cent;
            }
            return;
        }
        for i in start..factors.len() {
            let (d, f) = factors[i];
            if deg + d <= n {
                go(i + 1, deg + d, fp_poly::mul(&poly, f, p), cent * ((p as u128).pow(d as u32) - 1), ctx, total);
            }
        }
    }
    let mut total = 0;
    go(0, 0, vec![1], 1, (&factors, n, p, gl), &mut total);
    total
}

/// r.s. count of SL(4,3) from the class-counting oracle, frozen.
const SL43_RS_COUNT: u128 = 8_053_992;

#[test]
fn rs_counts_match_class_counting_oracle() {
    for (n, p) in [(2usize, 2u64), (2, 3), (2, 5), (2, 7), (3, 2), (3, 3)] {
        let mg = MatrixGroup::new(MatrixKind::SL, n, p).unwrap();
        let exact = rs_fraction(&mg, RsMode::Exact, 0, &Limits::default()).unwrap();
        assert_eq!(exact.rs_count as u128, rs_count_oracle(n, p), "SL({n},{p})");
    }
    assert_eq!(rs_count_oracle(4, 3), SL43_RS_COUNT);
}

#[test]
fn frozen_exact_rs_fractions() {
    let frac = |q| {
        let mg = MatrixGroup::new(MatrixKind::SL, 2, q).unwrap();
        let r = rs_fraction(&mg, RsMode::Exact, 0, &Limits::default()).unwrap();
        (r.rs_count, r.examined)
    };
    let fracs: Vec<(u64, u64)> = [2, 3, 5, 7].map(frac).to_vec();
    assert_eq!(fracs, [(2, 6), (6, 24), (70, 120), (238, 336)]);
    let ratio = |(a, b): (u64, u64)| a as f64 / b as f64;
    // Nondecreasing from q = 3 on; q = 2 sits above q = 3.
    assert!(fracs[1..].windows(2).all(|w| ratio(w[0]) <= ratio(w[1])));
    assert!(ratio(fracs[0]) > ratio(fracs[1]));
}

#[test]
fn sl43_monte_carlo_within_three_sigma() {
    let mg = MatrixGroup::new(MatrixKind::SL, 4, 3).unwrap();
    assert_eq!(mg.order(), 12_130_560);
    let r = rs_fraction(&mg, RsMode::Sampled { samples: 100_000 }, 11, &Limits::default()).unwrap();
    let exact = SL43_RS_COUNT as f64 / mg.order() as f64;
    assert!((r.fraction - exact).abs() <= r.radius, "{} vs {exact} ± {}", r.fraction, r.radius);
}

#[test]
fn uniform_sl_sampler_is_balanced() {
    let mg = MatrixGroup::new(MatrixKind::SL, 2, 3).unwrap();
    let g = FiniteGroup::from_matrix_group(mg.clone(), 100).unwrap();
    let mut rng = quasirandom::seed::rng(21);
    let mut counts = [0usize; 24];
    let draws = 24_000;
    for _ in 0..draws {
        counts[g.index_of(&mg.random_element(&mut rng)).unwrap()] += 1;
    }
    // Each cell is Binomial(24000, 1/24): mean 1000, sd about 31.
    assert!(counts.iter().all(|&c| (c as i64 - 1000).abs() < 160), "{counts:?}");
}
