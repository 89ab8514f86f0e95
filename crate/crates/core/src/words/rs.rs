//! Regular semisimple elements of matrix groups.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::matrix::{MatrixGroup, MatrixKind};
use crate::group::FiniteGroup;
use crate::{par, seed, Limits};

const CHUNK: u64 = 1 << 12;

/// Squarefree characteristic polynomial, i.e. distinct eigenvalues over the
/// algebraic closure.
pub fn is_regular_semisimple(group: &FiniteGroup, g: usize) -> Result<bool> {
    group.check(g)?;
    let mg = group.matrix_group().ok_or(Error::WrongBackend { expected: "matrix" })?;
    Ok(mg.is_regular_semisimple(group.matrix(g).expect("matrix groups carry matrices")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RsMode {
    Exact,
    Sampled { samples: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct RsReport {
    pub kind: MatrixKind,
    pub dim: usize,
    pub q: u64,
    pub order: u128,
    pub mode: RsMode,
    /// Regular semisimple elements counted (all of them in exact mode).
    pub rs_count: u64,
    pub examined: u64,
    pub fraction: f64,
    /// Three binomial standard deviations; zero in exact mode.
    pub radius: f64,
    pub non_rs_fraction: f64,
    /// `1/q`, the scale of the non-r.s. proportion.
    pub inverse_q: f64,
}

/// Proportion of regular semisimple elements, by enumeration or by
/// sampling exactly uniform elements.
pub fn rs_fraction(group: &MatrixGroup, mode: RsMode, seed_value: u64, limits: &Limits) -> Result<RsReport> {
    let (rs_count, examined) = match mode {
        RsMode::Exact => {
            let g = FiniteGroup::from_matrix_group(group.clone(), limits.enumeration)?;
            let flags = par::map_range(g.order(), |i| group.is_regular_semisimple(g.matrix(i).unwrap()));
            (flags.iter().filter(|&&b| b).count() as u64, g.order() as u64)
        }
        RsMode::Sampled { samples } => {
            if samples == 0 {
                return Err(Error::invalid("sampled mode needs at least one sample"));
            }
            let chunks = samples.div_ceil(CHUNK) as usize;
            let counts = par::map_range(chunks, |c| {
                let mut rng = seed::stream(seed_value, &[0x25], c as u64);
                let count = CHUNK.min(samples - c as u64 * CHUNK);
                (0..count)
                    .filter(|_| group.is_regular_semisimple(&group.random_element(&mut rng)))
                    .count() as u64
            });
            (counts.iter().sum(), samples)
        }
    };
    let p = rs_count as f64 / examined as f64;
    let radius = match mode {
        RsMode::Exact => 0.0,
        RsMode::Sampled { .. } => 3.0 * (p * (1.0 - p) / examined as f64).sqrt(),
    };
    Ok(RsReport {
        kind: group.kind(),
        dim: group.dim(),
        q: group.q(),
        order: group.order(),
        mode,
        rs_count,
        examined,
        fraction: p,
        radius,
        non_rs_fraction: 1.0 - p,
        inverse_q: 1.0 / group.q() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Family;

    fn sl(d: usize, q: u64) -> MatrixGroup {
        MatrixGroup::new(MatrixKind::SL, d, q).unwrap()
    }

    #[test]
    fn small_special_linear_groups() {
        let g = FiniteGroup::from_matrix_group(sl(2, 2), 100).unwrap();
        let rs: Vec<usize> = (0..6).filter(|&i| is_regular_semisimple(&g, i).unwrap()).collect();
        assert_eq!(rs.len(), 2);
        assert!(rs.iter().all(|&i| g.element_order(i) == 3));
        assert!(!is_regular_semisimple(&g, 0).unwrap());

        let r = rs_fraction(&sl(2, 2), RsMode::Exact, 0, &Limits::default()).unwrap();
        assert_eq!((r.rs_count, r.examined), (2, 6));
        assert_eq!(r.radius, 0.0);
    }

    #[test]
    fn identity_and_companion_matrices() {
        let mg = sl(4, 2);
        assert!(!mg.is_regular_semisimple(&mg.identity()));
        // Companion matrix of x^4 + x + 1, irreducible over GF(2).
        let companion = vec![0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0];
        assert!(mg.contains(&companion));
        assert!(mg.is_regular_semisimple(&companion));
    }

    #[test]
    fn rs_is_a_class_function() {
        let g = Family::linear(MatrixKind::SL, 2, 5).construct(&Limits::default()).unwrap();
        let mut rng = seed::rng(6);
        for _ in 0..200 {
            let x = g.random_element(&mut rng);
            let h = g.random_element(&mut rng);
            assert_eq!(is_regular_semisimple(&g, x).unwrap(), is_regular_semisimple(&g, g.conjugate(x, h)).unwrap());
        }
        let a5 = Family::Alternating(5).construct(&Limits::default()).unwrap();
        assert_eq!(is_regular_semisimple(&a5, 1).unwrap_err(), Error::WrongBackend { expected: "matrix" });
    }

    #[test]
    fn sampled_fraction_brackets_exact() {
        let exact = rs_fraction(&sl(2, 5), RsMode::Exact, 0, &Limits::default()).unwrap();
        let s = rs_fraction(&sl(2, 5), RsMode::Sampled { samples: 20_000 }, 3, &Limits::default()).unwrap();
        assert!((s.fraction - exact.fraction).abs() <= s.radius);
        let again = rs_fraction(&sl(2, 5), RsMode::Sampled { samples: 20_000 }, 3, &Limits::default()).unwrap();
        assert_eq!(s.rs_count, again.rs_count);
    }
}
