//! Seeded random generators for exact property checks.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, check, trial)`,
//! so results do not depend on how trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{exp_nilpotent, MatR};
use crate::rat::Rat;
use crate::so_contact::{QGroupElement, Signature, SoElement};

/// FNV-1a, used only to turn a check name into stream key bytes.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Independent stream for one trial of one named check.
pub fn trial_rng(seed: u64, check: &str, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(check).to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Rational `a/b` with `|a| ≤ max_num`, `1 ≤ b ≤ max_den`.
pub fn small_rat<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rat {
    Rat::new(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn nonzero_rat<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rat {
    loop {
        let r = small_rat(rng, max_num, max_den);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn rat_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, max_num: i64, max_den: i64) -> MatR {
    MatR::from_fn(rows, cols, |_, _| small_rat(rng, max_num, max_den))
}

/// Random element of `g₋₁`, an `n×2` matrix.
pub fn gm1<R: Rng>(rng: &mut R, sig: Signature) -> MatR {
    rat_matrix(rng, sig.n(), 2, 5, 4)
}

/// Random element of `so(p,q)`, written as `𝕀K` with `K` antisymmetric.
pub fn so_pq<R: Rng>(rng: &mut R, sig: Signature, max_num: i64) -> MatR {
    let n = sig.n();
    let mut k = MatR::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = small_rat(rng, max_num, 3);
            k[(j, i)] = -&v;
            k[(i, j)] = v;
        }
    }
    sig.ipq().matmul(&k)
}

/// Random rational element of `O(p,q)`: a Cayley transform, optionally
/// composed with a coordinate reflection.
pub fn orthogonal_pq<R: Rng>(rng: &mut R, sig: Signature) -> MatR {
    let n = sig.n();
    let id = MatR::identity(n);
    let c = loop {
        let d = so_pq(rng, sig, 2);
        if let Some(inv) = (&id - &d).inverse() {
            break inv.matmul(&(&id + &d));
        }
    };
    if rng.gen_bool(0.5) {
        let mut r = MatR::identity(n);
        let k = rng.gen_range(0..n);
        r[(k, k)] = -Rat::one();
        r.matmul(&c)
    } else {
        c
    }
}

/// Random invertible rational 2×2 matrix.
pub fn gl2<R: Rng>(rng: &mut R) -> MatR {
    loop {
        let b = rat_matrix(rng, 2, 2, 4, 3);
        if !b.det().is_zero() {
            return b;
        }
    }
}

/// Random rational 2×2 matrix of determinant `±1`.
pub fn gl2_unimodular<R: Rng>(rng: &mut R) -> MatR {
    let shear_u = MatR::from_vec(2, 2, vec![Rat::one(), small_rat(rng, 3, 2), Rat::zero(), Rat::one()]);
    let shear_l = MatR::from_vec(2, 2, vec![Rat::one(), Rat::zero(), small_rat(rng, 3, 2), Rat::one()]);
    let r = nonzero_rat(rng, 3, 2);
    let stretch = MatR::diag(&[r.clone(), r.recip().unwrap()]);
    let m = shear_u.matmul(&stretch).matmul(&shear_l);
    if rng.gen_bool(0.5) {
        m.matmul(&MatR::from_i64(2, 2, &[0, 1, 1, 0]))
    } else {
        m
    }
}

/// Random invertible 2×2 matrix whose determinant has a rational square
/// root in absolute value, with either sign.
pub fn gl2_square_det<R: Rng>(rng: &mut R) -> MatR {
    let m = nonzero_rat(rng, 3, 2);
    let square = MatR::diag(&[&m * &m, Rat::one()]);
    let s = nonzero_rat(rng, 2, 2);
    gl2_unimodular(rng).matmul(&square).scale(&s)
}

/// Random `h ∈ Q`; with `square_det` the determinant of `B` has a rational
/// square root in absolute value, so the exact extension map applies.
pub fn q_element<R: Rng>(rng: &mut R, sig: Signature, square_det: bool) -> QGroupElement {
    let b = if square_det { gl2_square_det(rng) } else { gl2(rng) };
    let c = orthogonal_pq(rng, sig);
    let w = small_rat(rng, 4, 3);
    QGroupElement::new(sig, b, c, w).expect("sampled Q data is valid")
}

/// Random element of `so(p+2,q+2)` with small coordinates.
pub fn so_element<R: Rng>(rng: &mut R, sig: Signature) -> SoElement {
    let c: Vec<Rat> = (0..sig.algebra_dim()).map(|_| small_rat(rng, 5, 3)).collect();
    SoElement::from_coords(sig, &c)
}

/// Random element of `g₋ ⊕ g₁` or a single graded piece, as an `SoElement`.
pub fn graded_element<R: Rng>(rng: &mut R, sig: Signature, degrees: &[i32]) -> SoElement {
    let x = so_element(rng, sig);
    degrees
        .iter()
        .fold(SoElement::zero(sig), |acc, d| acc.add(&x.part(*d)))
}

/// Random group element `exp(N)·h·exp(U)` of `O(FormS)` with `N ∈ g₋`,
/// `h ∈ Q` and `U ∈ g₁`, built exactly from nilpotent exponentials.
pub fn g_element<R: Rng>(rng: &mut R, sig: Signature) -> MatR {
    // Small coordinates keep the entries of products of samples manageable.
    let mut small = |degrees: &[i32]| {
        let c: Vec<Rat> = (0..sig.algebra_dim()).map(|_| small_rat(rng, 2, 2)).collect();
        let x = SoElement::from_coords(sig, &c);
        degrees
            .iter()
            .fold(SoElement::zero(sig), |acc, d| acc.add(&x.part(*d)))
            .to_matrix()
    };
    let neg = small(&[-2, -1]);
    let pos = small(&[1]);
    let h = q_element(rng, sig, false).to_matrix();
    let en = exp_nilpotent(&neg, 5).expect("g₋ is nilpotent");
    let ep = exp_nilpotent(&pos, 5).expect("g₁ is nilpotent");
    en.matmul(&h).matmul(&ep)
}

/// Kinds of `g₋₁` samples used in rank-one classification checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    /// `u·fᵗ` with `u, f` nonzero.
    RankOne,
    /// Dense random matrix (almost always rank 2).
    Generic,
    /// Rank 2 with both columns null and mutually orthogonal, so every
    /// Levi pairing with `ξ` under `I, J, K` vanishes. Needs `p, q ≥ 2`;
    /// falls back to a rank-one null sample otherwise.
    Isotropic,
}

pub fn segre_sample<R: Rng>(rng: &mut R, sig: Signature, kind: SampleKind) -> MatR {
    let n = sig.n();
    match kind {
        SampleKind::RankOne => loop {
            let u: Vec<Rat> = (0..n).map(|_| small_rat(rng, 4, 3)).collect();
            let f = [small_rat(rng, 4, 3), small_rat(rng, 4, 3)];
            let x = MatR::from_fn(n, 2, |i, j| &u[i] * &f[j]);
            if !x.is_zero() {
                return x;
            }
        },
        SampleKind::Generic => loop {
            let x = gm1(rng, sig);
            if !x.is_zero() {
                return x;
            }
        },
        SampleKind::Isotropic => {
            let (p, q) = (sig.p, sig.q);
            let mut x = MatR::zeros(n, 2);
            if p >= 2 && q >= 2 {
                // e₁+e_{p+1} and e₂+e_{p+2} are null and orthogonal.
                x[(0, 0)] = Rat::one();
                x[(p, 0)] = Rat::one();
                x[(1, 1)] = Rat::one();
                x[(p + 1, 1)] = Rat::one();
            } else if p >= 1 && q >= 1 {
                x[(0, 0)] = Rat::one();
                x[(p, 0)] = Rat::one();
                x[(0, 1)] = Rat::from_int(2);
                x[(p, 1)] = Rat::from_int(2);
            } else {
                x[(0, 0)] = Rat::one();
            }
            // Hide the structure behind a random O(p,q) rotation and GL(2) change.
            let c = orthogonal_pq(rng, sig);
            c.matmul(&x).matmul(&gl2(rng))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig21() -> Signature {
        Signature::new(2, 1).unwrap()
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(7, "x", 3).gen();
        let b: u64 = trial_rng(7, "x", 3).gen();
        let c: u64 = trial_rng(7, "x", 4).gen();
        let d: u64 = trial_rng(7, "y", 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn orthogonal_samples_are_orthogonal() {
        for (p, q) in [(2, 1), (3, 0), (2, 2)] {
            let sig = Signature::new(p, q).unwrap();
            let mut rng = trial_rng(1, "orth", 0);
            for _ in 0..10 {
                assert!(sig.is_orthogonal_pq(&orthogonal_pq(&mut rng, sig)));
            }
        }
    }

    #[test]
    fn square_determinants() {
        let mut rng = trial_rng(2, "sq", 0);
        let mut saw_negative = false;
        for _ in 0..30 {
            let b = gl2_square_det(&mut rng);
            let d = b.det();
            saw_negative |= d.is_negative();
            assert!(d.abs().sqrt_exact().is_some(), "{d}");
        }
        assert!(saw_negative);
    }

    #[test]
    fn group_samples_preserve_form() {
        let sig = sig21();
        let mut rng = trial_rng(3, "g", 0);
        for _ in 0..5 {
            assert!(sig.is_orthogonal(&g_element(&mut rng, sig)));
        }
    }

    #[test]
    fn isotropic_samples_have_rank_two_when_possible() {
        let sig = Signature::new(2, 2).unwrap();
        let mut rng = trial_rng(4, "iso", 0);
        let x = segre_sample(&mut rng, sig, SampleKind::Isotropic);
        assert_eq!(x.rank(), 2);
        let g = x.transpose().matmul(&sig.ipq()).matmul(&x);
        assert!(g.is_zero());
    }
}
