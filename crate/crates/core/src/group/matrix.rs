//! Classical matrix groups over finite fields.
//!
//! Matrices are square, stored row-major as field codes. Unitary groups use
//! the identity Gram matrix over GF(q²): a matrix is unitary when its columns
//! are orthonormal for `<u, v> = Σ u_i v_i^q`. Projective kinds store one
//! canonical matrix per scalar coset: the one whose row-major code sequence
//! is lexicographically least.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::{Fe, GaloisField};
use crate::error::{Error, Result};

/// A square matrix over a field, row-major.
pub type Mat = Vec<Fe>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixKind {
    GL,
    SL,
    SU,
    PSL,
    PSU,
}

impl MatrixKind {
    pub fn is_unitary(self) -> bool {
        matches!(self, MatrixKind::SU | MatrixKind::PSU)
    }

    pub fn is_projective(self) -> bool {
        matches!(self, MatrixKind::PSL | MatrixKind::PSU)
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MatrixKind::GL => "GL",
            MatrixKind::SL => "SL",
            MatrixKind::SU => "SU",
            MatrixKind::PSL => "PSL",
            MatrixKind::PSU => "PSU",
        };
        f.write_str(s)
    }
}

/// Dense linear algebra over one field.
#[derive(Clone, Debug)]
pub struct MatOps {
    pub field: Arc<GaloisField>,
    pub dim: usize,
}

impl MatOps {
    pub fn identity(&self) -> Mat {
        let d = self.dim;
        let mut m = vec![0; d * d];
        for i in 0..d {
            m[i * d + i] = 1;
        }
        m
    }

    pub fn mul(&self, a: &[Fe], b: &[Fe]) -> Mat {
        let (d, f) = (self.dim, &*self.field);
        let mut out = vec![0; d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = a[i * d + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..d {
                    let t = f.mul(aik, b[k * d + j]);
                    out[i * d + j] = f.add(out[i * d + j], t);
                }
            }
        }
        out
    }

    pub fn scale(&self, a: &[Fe], s: Fe) -> Mat {
        a.iter().map(|&x| self.field.mul(x, s)).collect()
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, a: &[Fe]) -> Fe {
        let (d, f) = (self.dim, &*self.field);
        let mut m = a.to_vec();
        let mut det = 1;
        for col in 0..d {
            let Some(piv) = (col..d).find(|&r| m[r * d + col] != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..d {
                    m.swap(piv * d + j, col * d + j);
                }
                det = f.neg(det);
            }
            let p = m[col * d + col];
            det = f.mul(det, p);
            let pinv = f.inv(p).unwrap();
            for r in col + 1..d {
                let factor = f.mul(m[r * d + col], pinv);
                if factor == 0 {
                    continue;
                }
                for j in col..d {
                    let t = f.mul(factor, m[col * d + j]);
                    m[r * d + j] = f.sub(m[r * d + j], t);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients lowest degree first.
    ///
    /// Uses reduction to upper Hessenberg form followed by the standard
    /// recurrence on leading principal submatrices; valid over any field.
    pub fn charpoly(&self, a: &[Fe]) -> Vec<Fe> {
        let (d, f) = (self.dim, &*self.field);
        let mut h = a.to_vec();
        let at = |i: usize, j: usize| i * d + j;
        for col in 0..d.saturating_sub(2) {
            let Some(piv) = (col + 1..d).find(|&r| h[at(r, col)] != 0) else {
                continue;
            };
            if piv != col + 1 {
                for j in 0..d {
                    h.swap(at(piv, j), at(col + 1, j));
                }
                for i in 0..d {
                    h.swap(at(i, piv), at(i, col + 1));
                }
            }
            let pinv = f.inv(h[at(col + 1, col)]).unwrap();
            for r in col + 2..d {
                let factor = f.mul(h[at(r, col)], pinv);
                if factor == 0 {
                    continue;
                }
                // row_r -= factor * row_{col+1}; col_{col+1} += factor * col_r
                for j in 0..d {
                    let t = f.mul(factor, h[at(col + 1, j)]);
                    h[at(r, j)] = f.sub(h[at(r, j)], t);
                }
                for i in 0..d {
                    let t = f.mul(factor, h[at(i, r)]);
                    h[at(i, col + 1)] = f.add(h[at(i, col + 1)], t);
                }
            }
        }
        // p_0 = 1; p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{m=i+1}^{k} h_{m,m-1}) p_{i-1}
        let mut polys: Vec<Vec<Fe>> = vec![vec![1]];
        for k in 0..d {
            let prev = &polys[k];
            let mut next = vec![0; k + 2];
            for (i, &c) in prev.iter().enumerate() {
                next[i + 1] = f.add(next[i + 1], c);
                next[i] = f.sub(next[i], f.mul(h[at(k, k)], c));
            }
            let mut prod = 1;
            for i in (0..k).rev() {
                prod = f.mul(prod, h[at(i + 1, i)]);
                let coef = f.mul(h[at(i, k)], prod);
                if coef == 0 {
                    continue;
                }
                for (j, &c) in polys[i].iter().enumerate() {
                    next[j] = f.sub(next[j], f.mul(coef, c));
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }

    /// Entrywise Frobenius `x -> x^r`.
    pub fn frobenius(&self, a: &[Fe], r: u64) -> Mat {
        a.iter().map(|&x| self.field.pow(x, r)).collect()
    }

    pub fn transpose(&self, a: &[Fe]) -> Mat {
        let d = self.dim;
        let mut t = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                t[j * d + i] = a[i * d + j];
            }
        }
        t
    }
}

/// Polynomial helpers over a field, coefficients lowest degree first.
pub mod poly {
    use super::{Fe, GaloisField};

    pub fn trim(mut p: Vec<Fe>) -> Vec<Fe> {
        while p.len() > 1 && *p.last().unwrap() == 0 {
            p.pop();
        }
        p
    }

    pub fn is_zero(p: &[Fe]) -> bool {
        p.iter().all(|&c| c == 0)
    }

    pub fn derivative(f: &GaloisField, p: &[Fe]) -> Vec<Fe> {
        if p.len() <= 1 {
            return vec![0];
        }
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn rem(f: &GaloisField, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let lead_inv = f.inv(*b.last().unwrap()).expect("division by zero polynomial");
        while r.len() >= b.len() && !is_zero(&r) {
            let shift = r.len() - b.len();
            let c = f.mul(*r.last().unwrap(), lead_inv);
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bc));
            }
            r.pop();
            r = trim(r);
        }
        r
    }

    pub fn gcd(f: &GaloisField, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !is_zero(&b) {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        let lead_inv = f.inv(*a.last().unwrap()).unwrap_or(1);
        a.iter().map(|&c| f.mul(c, lead_inv)).collect()
    }

    /// Squarefree test over a finite (hence perfect) field.
    ///
    /// A vanishing derivative means `p` is a p-th power and so not
    /// squarefree (for positive degree); otherwise squarefree iff
    /// `gcd(p, p') = 1`.
    pub fn is_squarefree(f: &GaloisField, p: &[Fe]) -> bool {
        let p = trim(p.to_vec());
        if p.len() <= 1 {
            return true;
        }
        let dp = derivative(f, &p);
        if is_zero(&dp) {
            return false;
        }
        gcd(f, &p, &dp).len() == 1
    }
}

/// A classical group given by kind, dimension and defining field order `q`.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    kind: MatrixKind,
    ops: MatOps,
    q: u64,
    /// Scalars `λ` with `λI` in the linear group, for projective kinds.
    scalars: Vec<Fe>,
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

impl MatrixGroup {
    pub fn new(kind: MatrixKind, dim: usize, q: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        super::field::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let field_order = if kind.is_unitary() { q * q } else { q };
        let field = Arc::new(GaloisField::new(field_order)?);
        let ops = MatOps { field, dim };
        let scalars = if kind.is_projective() {
            let f = &*ops.field;
            f.elements()
                .filter(|&l| l != 0 && f.pow(l, dim as u64) == 1)
                .filter(|&l| !kind.is_unitary() || f.pow(l, q + 1) == 1)
                .collect()
        } else {
            vec![1]
        };
        Ok(Self {
            kind,
            ops,
            q,
            scalars,
        })
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.ops.dim
    }

    /// The defining `q` (entries live in GF(q²) for unitary kinds).
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &GaloisField {
        &self.ops.field
    }

    pub fn ops(&self) -> &MatOps {
        &self.ops
    }

    /// Untwisted Lie rank of the ambient algebraic group.
    pub fn lie_rank(&self) -> usize {
        self.dim() - 1
    }

    /// Group order from the standard order polynomials.
    pub fn order(&self) -> u128 {
        let (d, q) = (self.dim() as u32, self.q as u128);
        let sl: u128 = match self.kind {
            MatrixKind::GL | MatrixKind::SL | MatrixKind::PSL => {
                q.pow(d * (d - 1) / 2) * (2..=d).map(|i| q.pow(i) - 1).product::<u128>()
            }
            MatrixKind::SU | MatrixKind::PSU => {
                q.pow(d * (d - 1) / 2)
                    * (2..=d)
                        .map(|i| {
                            if i % 2 == 0 {
                                q.pow(i) - 1
                            } else {
                                q.pow(i) + 1
                            }
                        })
                        .product::<u128>()
            }
        };
        match self.kind {
            MatrixKind::GL => sl * (q - 1),
            MatrixKind::SL | MatrixKind::SU => sl,
            MatrixKind::PSL => sl / gcd_u64(d as u64, self.q - 1) as u128,
            MatrixKind::PSU => sl / gcd_u64(d as u64, self.q + 1) as u128,
        }
    }

    /// Canonical representative: the matrix itself, or for projective kinds
    /// the lexicographically least scalar multiple.
    pub fn canonical(&self, m: Mat) -> Mat {
        if !self.kind.is_projective() || self.scalars.len() == 1 {
            return m;
        }
        self.scalars
            .iter()
            .map(|&l| self.ops.scale(&m, l))
            .min()
            .unwrap()
    }

    pub fn mul(&self, a: &[Fe], b: &[Fe]) -> Mat {
        self.canonical(self.ops.mul(a, b))
    }

    pub fn identity(&self) -> Mat {
        self.canonical(self.ops.identity())
    }

    /// Membership test for the linear preimage (projective kinds accept any
    /// representative of the coset).
    pub fn contains(&self, m: &[Fe]) -> bool {
        let d = self.dim();
        if m.len() != d * d {
            return false;
        }
        let det = self.ops.det(m);
        match self.kind {
            MatrixKind::GL => det != 0,
            MatrixKind::SL | MatrixKind::PSL => det == 1,
            MatrixKind::SU | MatrixKind::PSU => det == 1 && self.is_unitary(m),
        }
    }

    fn is_unitary(&self, m: &[Fe]) -> bool {
        let g = self.ops.mul(&self.ops.transpose(m), &self.ops.frobenius(m, self.q));
        g == self.ops.identity()
    }

    /// Deterministic generating set for the group.
    ///
    /// Linear kinds use elementary transvections `I + c E_ij` with `c`
    /// running over a prime-field basis of GF(q) (plus a diagonal generator
    /// for GL). Unitary kinds use seeded uniform samples; the caller keeps
    /// adding samples until the closure reaches the known order.
    pub fn generators(&self, extra_samples: usize) -> Vec<Mat> {
        let (d, f) = (self.dim(), self.field());
        let mut gens = Vec::new();
        if self.kind.is_unitary() {
            let mut rng = crate::seed::rng(0x5eed_0000 + d as u64 * 1000 + self.q);
            for _ in 0..2 + extra_samples {
                gens.push(self.random_element(&mut rng));
            }
            return gens;
        }
        // Code p is the residue x; its powers span GF(q) over GF(p).
        let x = f.characteristic() as Fe;
        let basis: Vec<Fe> = if f.degree() == 1 {
            vec![1]
        } else {
            (0..f.degree()).map(|k| f.pow(x, k as u64)).collect()
        };
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                for &c in &basis {
                    let mut m = self.ops.identity();
                    m[i * d + j] = c;
                    gens.push(self.canonical(m));
                }
            }
        }
        if self.kind == MatrixKind::GL && self.q > 2 {
            let mut m = self.ops.identity();
            m[0] = f.primitive();
            gens.push(m);
        }
        gens
    }

    fn random_matrix<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        let n = self.dim() * self.dim();
        let q = self.field().order();
        (0..n).map(|_| rng.random_range(0..q)).collect()
    }

    /// Exactly uniform random element.
    ///
    /// GL by rejection on the determinant; SL by rescaling the first row of a
    /// uniform GL element; SU by building an orthonormal frame column by
    /// column and rescaling the last column. Projective kinds canonicalize.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        let (d, f) = (self.dim(), self.field());
        let m = match self.kind {
            MatrixKind::GL | MatrixKind::SL | MatrixKind::PSL => loop {
                let mut m = self.random_matrix(rng);
                let det = self.ops.det(&m);
                if det == 0 {
                    continue;
                }
                if self.kind != MatrixKind::GL {
                    let s = f.inv(det).unwrap();
                    for j in 0..d {
                        m[j] = f.mul(m[j], s);
                    }
                }
                break m;
            },
            MatrixKind::SU | MatrixKind::PSU => {
                let mut m = self.random_unitary(rng);
                let det = self.ops.det(&m);
                let s = f.inv(det).unwrap();
                for i in 0..d {
                    m[i * d + d - 1] = f.mul(m[i * d + d - 1], s);
                }
                m
            }
        };
        self.canonical(m)
    }

    fn hermitian(&self, u: &[Fe], v: &[Fe]) -> Fe {
        let f = self.field();
        u.iter()
            .zip(v)
            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, f.pow(b, self.q))))
    }

    fn random_unitary<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        let (d, f) = (self.dim(), self.field());
        let q2 = f.order();
        let mut cols: Vec<Vec<Fe>> = Vec::with_capacity(d);
        while cols.len() < d {
            let mut v: Vec<Fe> = (0..d).map(|_| rng.random_range(0..q2)).collect();
            for c in &cols {
                let coef = self.hermitian(&v, c);
                for (x, &y) in v.iter_mut().zip(c) {
                    *x = f.sub(*x, f.mul(coef, y));
                }
            }
            if self.hermitian(&v, &v) == 1 {
                cols.push(v);
            }
        }
        let mut m = vec![0; d * d];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..d {
                m[i * d + j] = c[i];
            }
        }
        m
    }

    /// Regular semisimple test: the characteristic polynomial is squarefree.
    pub fn is_regular_semisimple(&self, m: &[Fe]) -> bool {
        poly::is_squarefree(self.field(), &self.ops.charpoly(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(q: u64, d: usize) -> MatOps {
        MatOps {
            field: Arc::new(GaloisField::new(q).unwrap()),
            dim: d,
        }
    }

    /// det(xI - A) evaluated at every field point, compared with the
    /// polynomial from the Hessenberg recurrence.
    #[test]
    fn charpoly_matches_pointwise_determinant() {
        let mut rng = crate::seed::rng(3);
        for (q, d) in [(2u64, 3usize), (3, 4), (4, 3), (5, 2), (7, 3), (9, 3)] {
            let o = ops(q, d);
            let f = &*o.field;
            for _ in 0..40 {
                let a: Mat = (0..d * d).map(|_| rng.random_range(0..q as u32)).collect();
                let cp = o.charpoly(&a);
                assert_eq!(cp.len(), d + 1);
                assert_eq!(cp[d], 1);
                for x in f.elements() {
                    let mut xi_a = o.scale(&o.identity(), x);
                    for (e, &ai) in xi_a.iter_mut().zip(&a) {
                        *e = f.sub(*e, ai);
                    }
                    let direct = o.det(&xi_a);
                    let eval = cp.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c));
                    assert_eq!(direct, eval, "q={q} d={d} a={a:?}");
                }
            }
        }
    }

    #[test]
    fn squarefree_in_characteristic_p() {
        let f = GaloisField::new(2).unwrap();
        // x^2 + 1 = (x + 1)^2 has zero derivative over GF(2).
        assert!(!poly::is_squarefree(&f, &[1, 0, 1]));
        assert!(poly::is_squarefree(&f, &[1, 1, 1]));
        let f3 = GaloisField::new(3).unwrap();
        // x^3 - x = x(x-1)(x+1)
        assert!(poly::is_squarefree(&f3, &[0, 2, 0, 1]));
        // x^3 + 1 = (x+1)^3 over GF(3)
        assert!(!poly::is_squarefree(&f3, &[1, 0, 0, 1]));
    }

    #[test]
    fn order_polynomials() {
        let o = |k, d, q| MatrixGroup::new(k, d, q).unwrap().order();
        assert_eq!(o(MatrixKind::SL, 2, 7), 336);
        assert_eq!(o(MatrixKind::PSL, 2, 7), 168);
        assert_eq!(o(MatrixKind::PSL, 2, 13), 1092);
        assert_eq!(o(MatrixKind::GL, 2, 2), 6);
        assert_eq!(o(MatrixKind::SL, 4, 3), 12_130_560);
        assert_eq!(o(MatrixKind::SU, 2, 3), 24);
        assert_eq!(o(MatrixKind::SU, 3, 2), 216);
        assert_eq!(o(MatrixKind::PSU, 3, 3), 6048);
    }

    #[test]
    fn samplers_land_in_the_group() {
        let mut rng = crate::seed::rng(11);
        for (k, d, q) in [
            (MatrixKind::SL, 3, 4),
            (MatrixKind::GL, 2, 5),
            (MatrixKind::SU, 3, 3),
            (MatrixKind::PSU, 2, 5),
            (MatrixKind::PSL, 3, 4),
        ] {
            let g = MatrixGroup::new(k, d, q).unwrap();
            for _ in 0..20 {
                let m = g.random_element(&mut rng);
                assert!(g.contains(&m), "{k}({d},{q})");
                assert_eq!(g.canonical(m.clone()), m);
            }
        }
    }

    #[test]
    fn companion_of_irreducible_is_regular_semisimple() {
        // x^3 + x + 1 is irreducible over GF(2); its companion matrix has det 1.
        let g = MatrixGroup::new(MatrixKind::SL, 3, 2).unwrap();
        let c: Mat = vec![0, 0, 1, 1, 0, 1, 0, 1, 0];
        assert!(g.contains(&c));
        assert!(g.is_regular_semisimple(&c));
        assert!(!g.is_regular_semisimple(&g.identity()));
    }
}
