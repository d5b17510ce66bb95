//! `sl(2n+2)` with the path-geometry grading.
//!
//! Rows and columns are split into blocks of sizes `1, 1, 2n` (indices 0, 1, 2)
//! and an entry in block position `(r, c)` has degree `c − r`:
//!
//! ```text
//!        col 0     col 1      cols 2..
//! row 0  g̃₀        g̃₁ᴱ        g̃₂
//! row 1  g̃₋₁ᴱ      g̃₀         g̃₁ⱽ
//! rows   g̃₋₂       g̃₋₁ⱽ       g̃₀
//! ```
//!
//! The `2n` block is two stacked `n`-blocks. The negative part `g̃₋` has basis
//! (in this order) the `g̃₋₁ᴱ` entry `(1,0)`, the `g̃₋₂` entries `(2+r, 0)` and
//! the `g̃₋₁ⱽ` entries `(2+r, 1)`, `r < 2n`; it is identified with `g̃/p̃`.

use crate::error::{Error, Result};
use crate::matrix::MatR;
use crate::rat::Rat;

/// The seven grading slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Minus2,
    Minus1E,
    Minus1V,
    Zero,
    Plus1E,
    Plus1V,
    Plus2,
}

impl Slot {
    pub fn degree(self) -> i32 {
        match self {
            Slot::Minus2 => -2,
            Slot::Minus1E | Slot::Minus1V => -1,
            Slot::Zero => 0,
            Slot::Plus1E | Slot::Plus1V => 1,
            Slot::Plus2 => 2,
        }
    }

    pub const ALL: [Slot; 7] = [
        Slot::Minus2,
        Slot::Minus1E,
        Slot::Minus1V,
        Slot::Zero,
        Slot::Plus1E,
        Slot::Plus1V,
        Slot::Plus2,
    ];
}

fn block_index(i: usize) -> usize {
    i.min(2)
}

/// Slot of the matrix entry `(r, c)`.
pub fn slot_of(r: usize, c: usize) -> Slot {
    match (block_index(r), block_index(c)) {
        (1, 0) => Slot::Minus1E,
        (2, 0) => Slot::Minus2,
        (2, 1) => Slot::Minus1V,
        (0, 1) => Slot::Plus1E,
        (1, 2) => Slot::Plus1V,
        (0, 2) => Slot::Plus2,
        _ => Slot::Zero,
    }
}

/// Degree of the matrix entry `(r, c)`.
pub fn degree_of(r: usize, c: usize) -> i32 {
    block_index(c) as i32 - block_index(r) as i32
}

/// Trace-free `(2n+2)×(2n+2)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlElement {
    n: usize,
    m: MatR,
}

impl SlElement {
    pub fn zero(n: usize) -> Self {
        SlElement {
            n,
            m: MatR::zeros(2 * n + 2, 2 * n + 2),
        }
    }

    pub fn new(n: usize, m: MatR) -> Result<Self> {
        let size = 2 * n + 2;
        if (m.rows(), m.cols()) != (size, size) {
            return Err(Error::Dimension(format!(
                "expected {size}x{size}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.trace().is_zero() {
            return Err(Error::NotInAlgebra("sl(2n+2)"));
        }
        Ok(SlElement { n, m })
    }

    /// Single entry `1` at `(r, c)`, `r ≠ c`.
    pub fn unit(n: usize, r: usize, c: usize) -> Self {
        assert_ne!(r, c, "diagonal units are not trace-free");
        let mut m = MatR::zeros(2 * n + 2, 2 * n + 2);
        m[(r, c)] = Rat::one();
        SlElement { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        2 * self.n + 2
    }

    pub fn matrix(&self) -> &MatR {
        &self.m
    }

    pub fn into_matrix(self) -> MatR {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn add(&self, o: &SlElement) -> SlElement {
        assert_eq!(self.n, o.n);
        SlElement {
            n: self.n,
            m: &self.m + &o.m,
        }
    }

    pub fn sub(&self, o: &SlElement) -> SlElement {
        assert_eq!(self.n, o.n);
        SlElement {
            n: self.n,
            m: &self.m - &o.m,
        }
    }

    pub fn scale(&self, s: &Rat) -> SlElement {
        SlElement {
            n: self.n,
            m: self.m.scale(s),
        }
    }

    pub fn bracket(&self, o: &SlElement) -> Result<SlElement> {
        if self.n != o.n {
            return Err(Error::Dimension(format!("sl sizes {} and {}", self.size(), o.size())));
        }
        Ok(SlElement {
            n: self.n,
            m: self.m.commutator(&o.m),
        })
    }

    fn filtered(&self, keep: impl Fn(usize, usize) -> bool) -> SlElement {
        let m = MatR::from_fn(self.size(), self.size(), |r, c| {
            if keep(r, c) {
                self.m[(r, c)].clone()
            } else {
                Rat::zero()
            }
        });
        SlElement { n: self.n, m }
    }

    /// Component of degree `d`; zero outside `−2..=2`.
    pub fn grade_project(&self, d: i32) -> SlElement {
        self.filtered(|r, c| degree_of(r, c) == d)
    }

    pub fn slot_project(&self, s: Slot) -> SlElement {
        self.filtered(|r, c| slot_of(r, c) == s)
    }

    /// Degrees with a nonzero component.
    pub fn degrees_present(&self) -> Vec<i32> {
        (-2..=2).filter(|d| !self.grade_project(*d).is_zero()).collect()
    }

    /// Whether all components have nonnegative degree, i.e. the element lies in `p̃`.
    pub fn in_p(&self) -> bool {
        (-2..0).all(|d| self.grade_project(d).is_zero())
    }

    /// The `g̃₋₂` column `(2.., 0)` as a `2n`-vector.
    pub fn minus2_vector(&self) -> Vec<Rat> {
        (0..2 * self.n).map(|r| self.m[(2 + r, 0)].clone()).collect()
    }

    /// Element of `g̃₋₂` with the given column.
    pub fn from_minus2(n: usize, v: &[Rat]) -> SlElement {
        assert_eq!(v.len(), 2 * n);
        let mut m = MatR::zeros(2 * n + 2, 2 * n + 2);
        for (r, x) in v.iter().enumerate() {
            m[(2 + r, 0)] = x.clone();
        }
        SlElement { n, m }
    }

    /// Element of `g̃₋₁ⱽ` with the given column.
    pub fn from_minus1v(n: usize, v: &[Rat]) -> SlElement {
        assert_eq!(v.len(), 2 * n);
        let mut m = MatR::zeros(2 * n + 2, 2 * n + 2);
        for (r, x) in v.iter().enumerate() {
            m[(2 + r, 1)] = x.clone();
        }
        SlElement { n, m }
    }

    /// Coordinates of the class in `g̃/p̃ ≅ g̃₋`, in basis order.
    pub fn minus_coords(&self) -> Vec<Rat> {
        minus_positions(self.n)
            .into_iter()
            .map(|(r, c)| self.m[(r, c)].clone())
            .collect()
    }
}

/// Matrix positions of the `g̃₋` basis, in basis order.
pub fn minus_positions(n: usize) -> Vec<(usize, usize)> {
    let mut v = vec![(1, 0)];
    v.extend((0..2 * n).map(|r| (2 + r, 0)));
    v.extend((0..2 * n).map(|r| (2 + r, 1)));
    v
}

/// Basis of `g̃₋`, of dimension `4n+1`.
pub fn minus_basis(n: usize) -> Vec<SlElement> {
    minus_positions(n)
        .into_iter()
        .map(|(r, c)| SlElement::unit(n, r, c))
        .collect()
}

/// Basis of `p̃₊` dual to [`minus_basis`] under the trace pairing:
/// the dual of the unit at `(r, c)` is the unit at `(c, r)`.
pub fn plus_dual_basis(n: usize) -> Vec<SlElement> {
    minus_positions(n)
        .into_iter()
        .map(|(r, c)| SlElement::unit(n, c, r))
        .collect()
}

/// `W₀`: the unit at `(0, 1)`, spanning `g̃₁ᴱ`.
pub fn w0(n: usize) -> SlElement {
    SlElement::unit(n, 0, 1)
}

/// Trace-free lower-right `2n×2n` block, the `g̃₀ˢˢ ≅ sl(2n)` part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsPart {
    pub block: MatR,
}

impl SsPart {
    /// Extract the lower block if `x` lies in `g̃₀ˢˢ` (zero outside the block
    /// and trace-free block), else `None`.
    pub fn from_sl(x: &SlElement) -> Option<SsPart> {
        let n = x.n;
        let block = x.m.block(2, 2, 2 * n, 2 * n);
        let mut rest = x.m.clone();
        rest.set_block(2, 2, &MatR::zeros(2 * n, 2 * n));
        if rest.is_zero() && block.trace().is_zero() {
            Some(SsPart { block })
        } else {
            None
        }
    }

    /// The four `n×n` quadrants `[[Q₁₁, Q₁₂], [Q₂₁, Q₂₂]]` in row-major order.
    pub fn quadrants(&self) -> [MatR; 4] {
        let n = self.block.rows() / 2;
        [
            self.block.block(0, 0, n, n),
            self.block.block(0, n, n, n),
            self.block.block(n, 0, n, n),
            self.block.block(n, n, n, n),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::StructureConstants;
    use crate::exec::Strategy;

    fn sample(n: usize) -> SlElement {
        let size = 2 * n + 2;
        let mut m = MatR::from_fn(size, size, |r, c| Rat::new((r * 7 + c * 3) as i64 % 11 - 5, 1 + (r % 3) as i64));
        let t = m.trace();
        m[(0, 0)] = &m[(0, 0)] - &t;
        SlElement::new(n, m).unwrap()
    }

    #[test]
    fn projections_partition() {
        let x = sample(3);
        let sum = (-2..=2).fold(SlElement::zero(3), |acc, d| acc.add(&x.grade_project(d)));
        assert_eq!(sum, x);
        let sum = Slot::ALL.iter().fold(SlElement::zero(3), |acc, s| acc.add(&x.slot_project(*s)));
        assert_eq!(sum, x);
    }

    #[test]
    fn trace_is_enforced() {
        assert!(SlElement::new(1, MatR::identity(4)).is_err());
        assert!(SlElement::new(1, MatR::zeros(3, 3)).is_err());
    }

    #[test]
    fn w0_moves_minus2_to_minus1v() {
        let n = 3;
        let w = w0(n);
        assert_eq!(w.slot_project(Slot::Plus1E), w);
        assert!(w.bracket(&w).unwrap().is_zero());
        let v: Vec<Rat> = (0..2 * n).map(|k| Rat::from_int(k as i64 - 2)).collect();
        let z = SlElement::from_minus2(n, &v);
        let b = z.bracket(&w).unwrap();
        assert_eq!(b, SlElement::from_minus1v(n, &v));
        // ad(W₀) is injective on g̃₋₂: the image of the basis has full rank.
        let cols: Vec<Vec<Rat>> = (0..2 * n)
            .map(|k| {
                let mut e = vec![Rat::zero(); 2 * n];
                e[k] = Rat::one();
                SlElement::from_minus2(n, &e).bracket(&w).unwrap().minus_coords()
            })
            .collect();
        let m = MatR::from_fn(4 * n + 1, 2 * n, |r, c| cols[c][r].clone());
        assert_eq!(m.rank(), 2 * n);
    }

    #[test]
    fn minus2_is_abelian() {
        let a = SlElement::from_minus2(2, &[1, 2, 3, 4].map(Rat::from_int));
        let b = SlElement::from_minus2(2, &[0, -1, 5, 2].map(Rat::from_int));
        assert!(a.bracket(&b).unwrap().is_zero());
        assert!(a.bracket(&SlElement::zero(3)).is_err());
    }

    #[test]
    fn slot_basis_jacobi_and_grading() {
        let n = 3;
        let size = 2 * n + 2;
        // Off-diagonal units plus the diagonal differences E_ii − E_{i+1,i+1}.
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        for r in 0..size {
            for c in 0..size {
                if r != c {
                    basis.push(SlElement::unit(n, r, c).into_matrix());
                    degrees.push(degree_of(r, c));
                }
            }
        }
        for i in 0..size - 1 {
            let mut m = MatR::zeros(size, size);
            m[(i, i)] = Rat::one();
            m[(i + 1, i + 1)] = -Rat::one();
            basis.push(m);
            degrees.push(0);
        }
        let coords = |m: &MatR| {
            let mut v = Vec::new();
            for r in 0..size {
                for c in 0..size {
                    if r != c {
                        v.push(m[(r, c)].clone());
                    }
                }
            }
            // Diagonal d = Σ h_i (E_ii − E_{i+1,i+1}) gives h_i = d_0 + … + d_i.
            let mut acc = Rat::zero();
            for i in 0..size - 1 {
                acc += &m[(i, i)];
                v.push(acc.clone());
            }
            v
        };
        let sc = StructureConstants::from_basis(&basis, coords, Strategy::Parallel);
        assert_eq!(sc.dim(), size * size - 1);
        assert!(sc.check_jacobi(Strategy::Parallel).1.is_none());
        assert_eq!(sc.check_grading(&degrees), None);
        // p̃ is a subalgebra.
        for i in 0..sc.dim() {
            for j in 0..sc.dim() {
                if degrees[i] >= 0 && degrees[j] >= 0 {
                    assert!(sc.get(i, j).iter().all(|(k, _)| degrees[*k] >= 0));
                }
            }
        }
    }

    #[test]
    fn ss_part_extraction() {
        let n = 2;
        let mut m = MatR::zeros(6, 6);
        m[(2, 3)] = Rat::one();
        m[(4, 4)] = Rat::one();
        m[(5, 5)] = -Rat::one();
        let x = SlElement::new(n, m).unwrap();
        let ss = SsPart::from_sl(&x).unwrap();
        assert_eq!(ss.quadrants()[0][(0, 1)], Rat::one());
        assert_eq!(ss.quadrants()[3][(0, 0)], Rat::one());
        assert!(SsPart::from_sl(&w0(n)).is_none());
    }
}
