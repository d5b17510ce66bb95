//! Split quaternions and their action on `g₋₁ ≅ ℝ²*⊗ℝⁿ`.
//!
//! The algebra has basis `1, i, j, k` with `i² = j² = 1` and `k = ij`, and is
//! realized by 2×2 matrices
//!
//! ```text
//! i = [[1,0],[0,−1]]   j = [[0,1],[1,0]]   k = [[0,1],[−1,0]]
//! ```
//!
//! so that the norm `a₀² − a² − b² + c²` is the determinant. Imaginary
//! elements act on `n×2` matrices by right multiplication: `I(X₁|X₂) = (X₁|−X₂)`,
//! `J(X₁|X₂) = (X₂|X₁)`, `K(X₁|X₂) = (−X₂|X₁)`.

use crate::error::{Error, Result};
use crate::matrix::{rank_kernel, MatR};
use crate::rat::Rat;
use crate::so_contact::{bracket_gm1, Signature};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitQuaternion {
    pub a0: Rat,
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl SplitQuaternion {
    pub fn new(a0: Rat, a: Rat, b: Rat, c: Rat) -> Self {
        SplitQuaternion { a0, a, b, c }
    }

    /// Purely imaginary `aI + bJ + cK`.
    pub fn imaginary(a: Rat, b: Rat, c: Rat) -> Self {
        SplitQuaternion::new(Rat::zero(), a, b, c)
    }

    pub fn from_ints(a0: i64, a: i64, b: i64, c: i64) -> Self {
        SplitQuaternion::new(a0.into(), a.into(), b.into(), c.into())
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Self::from_ints(0, 0, 1, 0)
    }

    pub fn k() -> Self {
        Self::from_ints(0, 0, 0, 1)
    }

    pub fn mul(&self, o: &SplitQuaternion) -> SplitQuaternion {
        let (a0, a, b, c) = (&self.a0, &self.a, &self.b, &self.c);
        let (d0, d, e, f) = (&o.a0, &o.a, &o.b, &o.c);
        SplitQuaternion {
            a0: a0 * d0 + a * d + b * e - c * f,
            a: a0 * d + a * d0 - b * f + c * e,
            b: a0 * e + b * d0 + a * f - c * d,
            c: a0 * f + c * d0 + a * e - b * d,
        }
    }

    pub fn add(&self, o: &SplitQuaternion) -> SplitQuaternion {
        SplitQuaternion {
            a0: &self.a0 + &o.a0,
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
        }
    }

    pub fn scale(&self, s: &Rat) -> SplitQuaternion {
        SplitQuaternion {
            a0: &self.a0 * s,
            a: &self.a * s,
            b: &self.b * s,
            c: &self.c * s,
        }
    }

    /// `a₀² − a² − b² + c²`.
    pub fn norm2(&self) -> Rat {
        &self.a0 * &self.a0 - &self.a * &self.a - &self.b * &self.b + &self.c * &self.c
    }

    /// Norm of the imaginary part as an endomorphism, `A∘A = −|A|²·id`:
    /// `|A|² = −a² − b² + c²`.
    pub fn imaginary_norm2(&self) -> Rat {
        -(&self.a * &self.a) - &self.b * &self.b + &self.c * &self.c
    }

    pub fn imaginary_part(&self) -> SplitQuaternion {
        SplitQuaternion::imaginary(self.a.clone(), self.b.clone(), self.c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// `[[a₀+a, b+c], [b−c, a₀−a]]`.
    pub fn to_matrix(&self) -> MatR {
        MatR::from_vec(
            2,
            2,
            vec![
                &self.a0 + &self.a,
                &self.b + &self.c,
                &self.b - &self.c,
                &self.a0 - &self.a,
            ],
        )
    }

    /// Inverse of [`to_matrix`](Self::to_matrix); every 2×2 matrix is hit.
    pub fn from_matrix(m: &MatR) -> SplitQuaternion {
        let half = Rat::new(1, 2);
        SplitQuaternion {
            a0: (&m[(0, 0)] + &m[(1, 1)]) * &half,
            a: (&m[(0, 0)] - &m[(1, 1)]) * &half,
            b: (&m[(0, 1)] + &m[(1, 0)]) * &half,
            c: (&m[(0, 1)] - &m[(1, 0)]) * &half,
        }
    }
}

/// Right multiplication by the imaginary part of `q`.
pub fn act_on_h(q: &SplitQuaternion, x: &MatR) -> MatR {
    x.matmul(&q.imaginary_part().to_matrix())
}

/// The endomorphisms `I, J, K` of `g₋₁`, stored as the 2×2 matrices they
/// multiply by from the right. The standard choice uses the matrices above;
/// conjugating all three by one invertible matrix gives another admissible
/// basis with the same relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatStructureOnH {
    n: usize,
    pub i: MatR,
    pub j: MatR,
    pub k: MatR,
}

impl QuatStructureOnH {
    pub fn standard(n: usize) -> Self {
        QuatStructureOnH {
            n,
            i: SplitQuaternion::i().to_matrix(),
            j: SplitQuaternion::j().to_matrix(),
            k: SplitQuaternion::k().to_matrix(),
        }
    }

    /// Conjugate the basis by `P`: each generator `M` becomes `P⁻¹MP`.
    pub fn conjugated(&self, p: &MatR) -> Result<Self> {
        let pinv = p.inverse().ok_or(Error::Singular)?;
        let conj = |m: &MatR| pinv.matmul(m).matmul(p);
        Ok(QuatStructureOnH {
            n: self.n,
            i: conj(&self.i),
            j: conj(&self.j),
            k: conj(&self.k),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply_i(&self, x: &MatR) -> MatR {
        x.matmul(&self.i)
    }

    pub fn apply_j(&self, x: &MatR) -> MatR {
        x.matmul(&self.j)
    }

    pub fn apply_k(&self, x: &MatR) -> MatR {
        x.matmul(&self.k)
    }

    /// Right multiplication by `aI + bJ + cK`.
    pub fn apply(&self, a: &Rat, b: &Rat, c: &Rat, x: &MatR) -> MatR {
        let m = &(&self.i.scale(a) + &self.j.scale(b)) + &self.k.scale(c);
        x.matmul(&m)
    }

    /// The endomorphism `x ↦ x·M` of the `2n`-dimensional space, in the
    /// column-major coordinates of `n×2` matrices.
    fn operator(&self, m: &MatR) -> MatR {
        let n = self.n;
        let dim = 2 * n;
        let mut op = MatR::zeros(dim, dim);
        for col in 0..dim {
            let mut v = vec![Rat::zero(); dim];
            v[col] = Rat::one();
            let img = MatR::from_col_major(n, 2, &v).matmul(m).vec_col_major();
            for (row, val) in img.into_iter().enumerate() {
                op[(row, col)] = val;
            }
        }
        op
    }

    /// Bases of the `+1` and `−1` eigenspaces of `I`.
    pub fn eigenspace_decompose(&self) -> (Vec<MatR>, Vec<MatR>) {
        let n = self.n;
        let op = self.operator(&self.i);
        let id = MatR::identity(2 * n);
        let to_mats = |vs: Vec<MatR>| -> Vec<MatR> {
            vs.into_iter()
                .map(|v| MatR::from_col_major(n, 2, v.entries()))
                .collect()
        };
        let (_, plus) = rank_kernel(&(&op - &id));
        let (_, minus) = rank_kernel(&(&op + &id));
        (to_mats(plus), to_mats(minus))
    }

    /// Split `ξ = υ₁ + J·υ₂` with `υ₁, υ₂` in the `+1` eigenspace of `I`.
    pub fn split_by_j(&self, x: &MatR) -> (MatR, MatR) {
        let half = Rat::new(1, 2);
        let ix = self.apply_i(x);
        let plus = (x + &ix).scale(&half);
        let minus = (x - &ix).scale(&half);
        // J swaps the eigenspaces and squares to the identity.
        (plus, self.apply_j(&minus))
    }
}

/// A skew reflection `A = aI + bJ + cK` with `|A|² = −1` fixing `x`, if `x`
/// has rank one; `None` if it has rank two.
pub fn rank_one_witness(x: &MatR) -> Result<Option<SplitQuaternion>> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    if x.cols() != 2 {
        return Err(Error::Dimension("g₋₁ elements have two columns".into()));
    }
    let (rank, kernel) = rank_kernel(x);
    if rank != 1 {
        return Ok(None);
    }
    let v = kernel[0].entries().to_vec();
    Ok(Some(skew_reflection_negating(&v)))
}

/// The reflection of `ℝ²` negating `v` and fixing `(−v₁, v₀)`, written as
/// an imaginary split quaternion.
pub fn skew_reflection_negating(v: &[Rat]) -> SplitQuaternion {
    let w = [-&v[1], v[0].clone()];
    let norm = &v[0] * &v[0] + &v[1] * &v[1];
    let m = MatR::from_fn(2, 2, |r, c| (&w[r] * &w[c] - &v[r] * &v[c]) / &norm);
    let q = SplitQuaternion::from_matrix(&m);
    debug_assert!(q.a0.is_zero());
    q
}

/// Basis of the maximal Levi-isotropic subspace `{x : ker x ⊇ ℓ}` of `g₋₁`
/// for the line `ℓ = span(l)`.
pub fn max_subspace_for_line(l: &[Rat], n: usize) -> Result<Vec<MatR>> {
    if l.len() != 2 {
        return Err(Error::Dimension("line in ℝ² needs two coordinates".into()));
    }
    if l.iter().all(Rat::is_zero) {
        return Err(Error::ZeroElement);
    }
    let f = [l[1].clone(), -&l[0]];
    Ok((0..n)
        .map(|r| MatR::from_fn(n, 2, |i, j| if i == r { f[j].clone() } else { Rat::zero() }))
        .collect())
}

/// `ℒ(Ax, Ay) − |A|²·ℒ(x, y)` for imaginary `A`.
pub fn levi_compat_residual(sig: Signature, a: &SplitQuaternion, x: &MatR, y: &MatR) -> Rat {
    let lhs = bracket_gm1(sig, &act_on_h(a, x), &act_on_h(a, y));
    lhs - a.imaginary_norm2() * bracket_gm1(sig, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::sampling::{gm1, small_rat, trial_rng};

    fn col2(u: &[i64], v: &[i64]) -> MatR {
        MatR::from_fn(u.len(), 2, |i, j| Rat::from_int(if j == 0 { u[i] } else { v[i] }))
    }

    #[test]
    fn multiplication_table() {
        let (one, i, j, k) = (
            SplitQuaternion::one(),
            SplitQuaternion::i(),
            SplitQuaternion::j(),
            SplitQuaternion::k(),
        );
        assert_eq!(i.mul(&i), one);
        assert_eq!(j.mul(&j), one);
        assert_eq!(k.mul(&k), one.scale(&rat(-1, 1)));
        assert_eq!(i.mul(&j), k);
        assert_eq!(j.mul(&i), k.scale(&rat(-1, 1)));
        assert_eq!(i.norm2(), rat(-1, 1));
        assert_eq!(j.norm2(), rat(-1, 1));
        assert_eq!(k.norm2(), rat(1, 1));
        let zd = SplitQuaternion::from_ints(1, 1, 0, 0).mul(&SplitQuaternion::from_ints(1, -1, 0, 0));
        assert!(zd.is_zero());
    }

    #[test]
    fn matrix_map_is_multiplicative() {
        let mut rng = trial_rng(0, "quat", 0);
        for _ in 0..50 {
            let mut q = || SplitQuaternion::new(small_rat(&mut rng, 5, 3), small_rat(&mut rng, 5, 3), small_rat(&mut rng, 5, 3), small_rat(&mut rng, 5, 3));
            let (p, r) = (q(), q());
            assert_eq!(p.mul(&r).to_matrix(), p.to_matrix().matmul(&r.to_matrix()));
            assert_eq!(p.norm2(), p.to_matrix().det());
            assert_eq!(SplitQuaternion::from_matrix(&p.to_matrix()), p);
        }
    }

    #[test]
    fn action_images() {
        let x = col2(&[1, 2, 3], &[4, 5, 6]);
        assert_eq!(act_on_h(&SplitQuaternion::i(), &x), col2(&[1, 2, 3], &[-4, -5, -6]));
        assert_eq!(act_on_h(&SplitQuaternion::j(), &x), col2(&[4, 5, 6], &[1, 2, 3]));
        assert_eq!(act_on_h(&SplitQuaternion::k(), &x), col2(&[-4, -5, -6], &[1, 2, 3]));
        let kk = act_on_h(&SplitQuaternion::k(), &act_on_h(&SplitQuaternion::k(), &x));
        assert_eq!(kk, -&x);
    }

    #[test]
    fn witnesses() {
        let u = col2(&[1, -2, 3], &[0, 0, 0]);
        assert_eq!(rank_one_witness(&u).unwrap(), Some(SplitQuaternion::i()));
        let uu = col2(&[1, -2, 3], &[1, -2, 3]);
        assert_eq!(rank_one_witness(&uu).unwrap(), Some(SplitQuaternion::j()));
        let e12 = col2(&[1, 0, 0], &[0, 1, 0]);
        assert_eq!(rank_one_witness(&e12).unwrap(), None);
        assert_eq!(rank_one_witness(&MatR::zeros(3, 2)), Err(Error::ZeroElement));
    }

    #[test]
    fn eigenspaces_and_j_split() {
        let s = QuatStructureOnH::standard(3);
        let (plus, minus) = s.eigenspace_decompose();
        assert_eq!((plus.len(), minus.len()), (3, 3));
        for v in &plus {
            assert!(v.col(1).iter().all(Rat::is_zero));
            let jv = s.apply_j(v);
            assert_eq!(s.apply_i(&jv), -&jv);
        }
        let mut rng = trial_rng(0, "split", 0);
        let x = gm1(&mut rng, Signature::new(2, 1).unwrap());
        let (u1, u2) = s.split_by_j(&x);
        assert_eq!(s.apply_i(&u1), u1);
        assert_eq!(s.apply_i(&u2), u2);
        assert_eq!(&u1 + &s.apply_j(&u2), x);
    }

    #[test]
    fn max_subspaces() {
        let sig = Signature::new(2, 1).unwrap();
        let b = max_subspace_for_line(&[rat(0, 1), rat(1, 1)], 3).unwrap();
        assert_eq!(b[1], col2(&[0, 1, 0], &[0, 0, 0]));
        let b = max_subspace_for_line(&[rat(1, 1), rat(1, 1)], 3).unwrap();
        assert_eq!(b[0], col2(&[1, 0, 0], &[-1, 0, 0]));
        let a = skew_reflection_negating(&[rat(1, 1), rat(1, 1)]);
        for x in &b {
            assert_eq!(act_on_h(&a, x), *x);
            for y in &b {
                assert!(bracket_gm1(sig, x, y).is_zero());
            }
        }
        assert!(max_subspace_for_line(&[rat(0, 1), rat(0, 1)], 3).is_err());
    }

    #[test]
    fn levi_compatibility_examples() {
        let sig = Signature::new(2, 2).unwrap();
        let mut rng = trial_rng(0, "levi", 0);
        let (x, y) = (gm1(&mut rng, sig), gm1(&mut rng, sig));
        for q in [SplitQuaternion::i(), SplitQuaternion::j(), SplitQuaternion::k()] {
            assert!(levi_compat_residual(sig, &q, &x, &y).is_zero());
        }
        assert_eq!(SplitQuaternion::k().imaginary_norm2(), rat(1, 1));
    }
}
