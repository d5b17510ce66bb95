//! Structure constants of a matrix Lie algebra with a fixed ordered basis.

use crate::exec::Strategy;
use crate::matrix::MatR;
use crate::rat::Rat;

/// Sparse table of `[e_i, e_j] = Σ_k c_ij^k e_k`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    dim: usize,
    table: Vec<Vec<(usize, Rat)>>,
}

/// A Jacobi failure: basis indices and the nonzero coordinate vector.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiWitness {
    pub triple: (usize, usize, usize),
    pub residual: Vec<Rat>,
}

impl StructureConstants {
    /// Bracket every pair of basis matrices by commutator and decode the
    /// result with `coords`, which must return coordinates in the same basis.
    pub fn from_basis<F>(basis: &[MatR], coords: F, strategy: Strategy) -> Self
    where
        F: Fn(&MatR) -> Vec<Rat> + Sync + Send,
    {
        let dim = basis.len();
        let table = strategy.map_range(dim * dim, |idx| {
            let (i, j) = (idx / dim, idx % dim);
            let c = coords(&basis[i].commutator(&basis[j]));
            debug_assert_eq!(c.len(), dim);
            c.into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect()
        });
        StructureConstants { dim, table }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.table[i * self.dim + j]
    }

    fn accumulate_nested(&self, out: &mut [Rat], i: usize, j: usize, k: usize) {
        // [[e_i, e_j], e_k]
        for (m, c) in self.get(i, j) {
            for (l, d) in self.get(*m, k) {
                out[*l] += c * d;
            }
        }
    }

    /// Jacobiator of a basis triple in coordinates.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        self.accumulate_nested(&mut out, i, j, k);
        self.accumulate_nested(&mut out, j, k, i);
        self.accumulate_nested(&mut out, k, i, j);
        out
    }

    /// Check the Jacobi identity on all ordered basis triples. Returns the
    /// number of triples checked and the first failure, if any.
    pub fn check_jacobi(&self, strategy: Strategy) -> (usize, Option<JacobiWitness>) {
        let d = self.dim;
        let total = d * d * d;
        let first = strategy.find_first(d, |i| {
            for j in 0..d {
                for k in 0..d {
                    let r = self.jacobiator(i, j, k);
                    if r.iter().any(|v| !v.is_zero()) {
                        return Some(JacobiWitness {
                            triple: (i, j, k),
                            residual: r,
                        });
                    }
                }
            }
            None
        });
        (total, first.map(|(_, w)| w))
    }

    /// Check that `[e_i, e_j]` only has components of degree `deg_i + deg_j`.
    /// Returns the first offending pair.
    pub fn check_grading(&self, degrees: &[i32]) -> Option<(usize, usize)> {
        assert_eq!(degrees.len(), self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let want = degrees[i] + degrees[j];
                if self.get(i, j).iter().any(|(k, _)| degrees[*k] != want) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2_basis() -> Vec<MatR> {
        (0..4)
            .map(|k| {
                let mut m = MatR::zeros(2, 2);
                m[(k / 2, k % 2)] = Rat::one();
                m
            })
            .collect()
    }

    #[test]
    fn gl2_satisfies_jacobi() {
        let basis = gl2_basis();
        let sc = StructureConstants::from_basis(&basis, |m| m.entries().to_vec(), Strategy::Sequential);
        let (n, fail) = sc.check_jacobi(Strategy::Parallel);
        assert_eq!(n, 64);
        assert!(fail.is_none());
        // [E_01, E_10] = E_00 - E_11
        let c = sc.get(1, 2);
        assert_eq!(c, &[(0, Rat::one()), (3, -Rat::one())]);
    }

    #[test]
    fn broken_bracket_is_caught() {
        // Doubling one decoded coordinate breaks Jacobi.
        let basis = gl2_basis();
        let sc = StructureConstants::from_basis(
            &basis,
            |m| {
                let mut v = m.entries().to_vec();
                v[1] = &v[1] * &Rat::from_int(2);
                v
            },
            Strategy::Sequential,
        );
        assert!(sc.check_jacobi(Strategy::Sequential).1.is_some());
    }
}
