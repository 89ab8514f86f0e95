//! Named group families.

use std::fmt;
use std::path::PathBuf;

use super::matrix::{MatrixGroup, MatrixKind};
use super::perm::Perm;
use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::Limits;

/// A group family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Cyclic(usize),
    /// Dihedral group of order `2m`.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Linear { kind: MatrixKind, dim: usize, q: u64 },
    Table(PathBuf),
}

impl Family {
    pub fn linear(kind: MatrixKind, dim: usize, q: u64) -> Self {
        Family::Linear { kind, dim, q }
    }

    /// Order predicted without enumeration (`None` for table files).
    pub fn expected_order(&self) -> Result<Option<u128>> {
        Ok(match self {
            Family::Cyclic(m) => Some(*m as u128),
            Family::Dihedral(m) => Some(2 * *m as u128),
            Family::Symmetric(m) => Some(factorial(*m)),
            Family::Alternating(m) => Some((factorial(*m) / 2).max(1)),
            Family::Linear { kind, dim, q } => Some(MatrixGroup::new(*kind, *dim, *q)?.order()),
            Family::Table(_) => None,
        })
    }

    /// Builds the group, enforcing the enumeration cap.
    pub fn construct(&self, limits: &Limits) -> Result<FiniteGroup> {
        let cap = limits.enumeration;
        if let Some(order) = self.expected_order()? {
            if order > cap as u128 {
                return Err(Error::CapExceeded {
                    what: "group order",
                    value: order,
                    cap: cap as u128,
                });
            }
        }
        let label = self.to_string();
        let group = match self {
            Family::Cyclic(m) => {
                check_positive(*m, "cyclic")?;
                let cycle: Vec<u32> = (0..*m as u32).collect();
                let gens = if *m > 1 {
                    vec![Perm::from_cycles(*m, &[&cycle]).unwrap()]
                } else {
                    vec![]
                };
                FiniteGroup::from_permutations(label, *m, &gens, cap)?
            }
            Family::Dihedral(m) => {
                check_positive(*m, "dihedral")?;
                match m {
                    1 => FiniteGroup::from_cayley_table(label, 2, vec![0, 1, 1, 0])?,
                    2 => FiniteGroup::from_cayley_table(label, 4, (0..16).map(|i| (i / 4) ^ (i % 4)).collect())?,
                    _ => {
                        let m = *m as u32;
                        let rot = Perm::from_images((0..m).map(|i| (i + 1) % m).collect()).unwrap();
                        let refl = Perm::from_images((0..m).map(|i| (m - i) % m).collect()).unwrap();
                        FiniteGroup::from_permutations(label, m as usize, &[rot, refl], cap)?
                    }
                }
            }
            Family::Symmetric(m) => {
                check_positive(*m, "symmetric")?;
                let mut gens = Vec::new();
                if *m >= 2 {
                    gens.push(Perm::from_cycles(*m, &[&[0, 1]]).unwrap());
                }
                if *m >= 3 {
                    let cycle: Vec<u32> = (0..*m as u32).collect();
                    gens.push(Perm::from_cycles(*m, &[&cycle]).unwrap());
                }
                FiniteGroup::from_permutations(label, *m, &gens, cap)?
            }
            Family::Alternating(m) => {
                check_positive(*m, "alternating")?;
                let gens: Vec<Perm> = (2..*m as u32)
                    .map(|k| Perm::from_cycles(*m, &[&[0, 1, k]]).unwrap())
                    .collect();
                FiniteGroup::from_permutations(label, *m, &gens, cap)?
            }
            Family::Linear { kind, dim, q } => {
                FiniteGroup::from_matrix_group(MatrixGroup::new(*kind, *dim, *q)?, cap)?
            }
            Family::Table(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
                let g = FiniteGroup::parse_cayley_text(label, &text)?;
                if g.order() > cap {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        value: g.order() as u128,
                        cap: cap as u128,
                    });
                }
                g
            }
        };
        if let Some(expected) = self.expected_order()? {
            debug_assert_eq!(group.order() as u128, expected, "{self}");
            if group.order() as u128 != expected {
                return Err(Error::invalid(format!(
                    "{self} closed to {} elements, expected {expected}",
                    group.order()
                )));
            }
        }
        Ok(group)
    }
}

fn check_positive(m: usize, what: &str) -> Result<()> {
    if m == 0 {
        Err(Error::invalid(format!("{what} family needs a positive parameter")))
    } else {
        Ok(())
    }
}

fn factorial(m: usize) -> u128 {
    (1..=m as u128).try_fold(1u128, |a, b| a.checked_mul(b)).unwrap_or(u128::MAX)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic(m) => write!(f, "C({m})"),
            Family::Dihedral(m) => write!(f, "D({m})"),
            Family::Symmetric(m) => write!(f, "Sym({m})"),
            Family::Alternating(m) => write!(f, "Alt({m})"),
            Family::Linear { kind, dim, q } => write!(f, "{kind}({dim},{q})"),
            Family::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::perm::StabilizerChain;

    fn order(f: Family) -> usize {
        f.construct(&Limits::default()).unwrap().order()
    }

    #[test]
    fn family_orders() {
        assert_eq!(order(Family::Cyclic(1)), 1);
        assert_eq!(order(Family::Dihedral(7)), 14);
        assert_eq!(order(Family::Dihedral(2)), 4);
        assert_eq!(order(Family::Symmetric(3)), 6);
        assert_eq!(order(Family::Alternating(5)), 60);
        assert_eq!(order(Family::Alternating(2)), 1);
        assert_eq!(order(Family::linear(MatrixKind::PSL, 2, 7)), 168);
        assert_eq!(order(Family::linear(MatrixKind::PSL, 2, 4)), 60);
        assert_eq!(order(Family::linear(MatrixKind::SU, 3, 2)), 216);
        assert_eq!(order(Family::linear(MatrixKind::PSU, 2, 3)), 12);
    }

    #[test]
    fn sl_order_polynomial_matches_enumeration() {
        for (d, q) in [(2usize, 2u64), (2, 3), (2, 4), (2, 5), (2, 7), (2, 8), (2, 9), (3, 2), (3, 3)] {
            let g = Family::linear(MatrixKind::SL, d, q).construct(&Limits::default()).unwrap();
            let qq = q as u128;
            let d32 = d as u32;
            let formula = qq.pow(d32 * (d32 - 1) / 2) * (2..=d32).map(|i| qq.pow(i) - 1).product::<u128>();
            assert_eq!(g.order() as u128, formula, "SL({d},{q})");
            let m = g.matrix_group().unwrap();
            for x in 0..g.order() {
                assert_eq!(m.ops().det(g.matrix(x).unwrap()), 1);
            }
        }
    }

    #[test]
    fn schreier_sims_agrees_with_enumeration() {
        for m in 1..=6 {
            let g = Family::Alternating(m).construct(&Limits::default()).unwrap();
            let gens: Vec<Perm> = g.generators().iter().map(|&x| g.permutation(x).unwrap()).collect();
            let chain = StabilizerChain::new(m.max(1), &gens);
            assert_eq!(chain.order(), g.order() as u128, "Alt({m})");
        }
    }

    #[test]
    fn cap_and_prime_power_errors() {
        let tight = Limits {
            enumeration: 100,
            ..Limits::default()
        };
        assert!(matches!(
            Family::linear(MatrixKind::PSL, 2, 7).construct(&tight),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(
            Family::linear(MatrixKind::PSL, 2, 6).construct(&Limits::default()).unwrap_err(),
            Error::NotPrimePower(6)
        );
        assert!(Family::Cyclic(0).construct(&Limits::default()).is_err());
    }

    #[test]
    fn psl_elements_are_canonical() {
        let g = Family::linear(MatrixKind::PSL, 2, 5).construct(&Limits::default()).unwrap();
        let mg = g.matrix_group().unwrap();
        let f = mg.field();
        for x in 0..g.order() {
            let m = g.matrix(x).unwrap().to_vec();
            let neg = mg.ops().scale(&m, f.neg(1));
            assert!(m <= neg);
            assert_eq!(g.index_of(&neg), Some(x));
        }
    }
}
