//! The extension pair `(i, α)` from the contact model into `sl(2n+2)`, the
//! induced curvature `Ψ_α`, and the cochain machinery used to test it.
//!
//! `α` is the linear map
//!
//! ```text
//!           [ (a+d)/2    −w            λU₁          λU₂       ]
//!   α(x) =  [ z          −(a+d)/2      −λX₂ᵗ𝕀       λX₁ᵗ𝕀     ]
//!           [ X₁         −𝕀U₂ᵗ         D+(d−a)/2    −c        ]
//!           [ X₂         𝕀U₁ᵗ          −b           D+(a−d)/2 ]
//! ```
//!
//! with `A = [[a,b],[c,d]]`, `U₁, U₂` the rows of `U`, scalars in the lower
//! block standing for multiples of the identity, and `λ = ½`. The
//! equivariance condition alone allows any `λ`; `½` is the only value for
//! which `Ψ_α` takes values in `g̃₀ˢˢ`.
//!
//! `i` sends `h = (B, C, w)` with `B = [[p,r],[s,q]]`, `β = det B`, to
//!
//! ```text
//!   [ β/√|β|   −wβ/√|β|   0                     ]
//!   [ 0        1/√|β|     0                     ]
//!   [ 0        0          (1/√|β|)[[qC, −sC],    ]
//!   [                              [−rC,  pC]]  ]
//! ```
//!
//! which is an exact group homomorphism for either sign of `β`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::matrix::{exp_float, MatF, MatR};
use crate::path_sl::{degree_of, minus_basis, minus_positions, plus_dual_basis, w0, SlElement, SsPart};
use crate::rat::Rat;
use crate::so_contact::{basis, basis_degrees, QGroupElement, Signature, SoElement};

/// `α` with a free coefficient `λ` on the top-right rows.
pub fn alpha_lambda(x: &SoElement, lambda: &Rat) -> SlElement {
    let sig = x.signature();
    let n = sig.n();
    let size = 2 * n + 2;
    let half = Rat::new(1, 2);
    let (a, b, c, d) = (&x.a[(0, 0)], &x.a[(0, 1)], &x.a[(1, 0)], &x.a[(1, 1)]);
    let tr = (a + d) * &half;
    let mut m = MatR::zeros(size, size);
    m[(0, 0)] = tr.clone();
    m[(0, 1)] = -&x.w;
    m[(1, 0)] = x.z.clone();
    m[(1, 1)] = -tr;
    for r in 0..n {
        let e = sig.eps(r);
        m[(2 + r, 0)] = x.x[(r, 0)].clone();
        m[(2 + n + r, 0)] = x.x[(r, 1)].clone();
        m[(2 + r, 1)] = -(&e * &x.u[(1, r)]);
        m[(2 + n + r, 1)] = &e * &x.u[(0, r)];
        m[(0, 2 + r)] = lambda * &x.u[(0, r)];
        m[(0, 2 + n + r)] = lambda * &x.u[(1, r)];
        m[(1, 2 + r)] = -(lambda * &x.x[(r, 1)] * &e);
        m[(1, 2 + n + r)] = lambda * &x.x[(r, 0)] * &e;
    }
    let shift = (d - a) * &half;
    for r in 0..n {
        for s in 0..n {
            m[(2 + r, 2 + s)] = x.d[(r, s)].clone();
            m[(2 + n + r, 2 + n + s)] = x.d[(r, s)].clone();
        }
        m[(2 + r, 2 + r)] += &shift;
        m[(2 + n + r, 2 + n + r)] -= &shift;
        m[(2 + r, 2 + n + r)] = -c;
        m[(2 + n + r, 2 + r)] = -b;
    }
    SlElement::new(n, m).expect("α is trace-free")
}

pub fn alpha(x: &SoElement) -> SlElement {
    alpha_lambda(x, &Rat::new(1, 2))
}

/// Exact `i(h)`; requires `|det B|` to be a rational square.
pub fn i_map(h: &QGroupElement) -> Result<MatR> {
    let beta = h.beta();
    let rt = beta
        .abs()
        .sqrt_exact()
        .ok_or_else(|| Error::NotPerfectSquare(beta.to_string()))?;
    let n = h.signature().n();
    let inv = rt.recip().ok_or(Error::Singular)?;
    let (p, r, s, q) = (&h.b[(0, 0)], &h.b[(0, 1)], &h.b[(1, 0)], &h.b[(1, 1)]);
    let mut m = MatR::zeros(2 * n + 2, 2 * n + 2);
    m[(0, 0)] = &beta * &inv;
    m[(0, 1)] = -(&h.w * &beta * &inv);
    m[(1, 1)] = inv.clone();
    let quads = [(0, 0, q * &inv), (0, 1, -(s * &inv)), (1, 0, -(r * &inv)), (1, 1, p * &inv)];
    for (bi, bj, f) in quads {
        m.set_block(2 + bi * n, 2 + bj * n, &h.c.scale(&f));
    }
    Ok(m)
}

/// `i` in floating point from raw `(B, C, w)` data; any nonzero `det B`.
pub fn i_map_float(b: &MatF, c: &MatF, w: f64) -> Result<MatF> {
    let n = c.rows();
    let beta = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
    if beta == 0.0 {
        return Err(Error::Singular);
    }
    let inv = 1.0 / beta.abs().sqrt();
    let (p, r, s, q) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
    let mut m = MatF::zeros(2 * n + 2, 2 * n + 2);
    m[(0, 0)] = beta * inv;
    m[(0, 1)] = -w * beta * inv;
    m[(1, 1)] = inv;
    let quads = [(0, 0, q * inv), (0, 1, -s * inv), (1, 0, -r * inv), (1, 1, p * inv)];
    for (bi, bj, f) in quads {
        m.set_block(2 + bi * n, 2 + bj * n, &c.scale(f));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(m)
}

pub fn i_map_float_q(h: &QGroupElement) -> Result<MatF> {
    i_map_float(&h.b.to_f64(), &h.c.to_f64(), h.w.to_f64())
}

fn require_q(xi: &SoElement) -> Result<()> {
    if xi.z.is_zero() && xi.x.is_zero() && xi.u.is_zero() {
        Ok(())
    } else {
        Err(Error::NotInAlgebra("q = g₀ ⊕ g₂"))
    }
}

/// Closed-form derivative of `t ↦ i(exp tξ)` at `t = 0` for `ξ ∈ 𝔮`, using
/// `d√|det B(t)|/dt = tr A/2`.
pub fn i_derivative(xi: &SoElement) -> Result<MatR> {
    require_q(xi)?;
    let n = xi.signature().n();
    let half = Rat::new(1, 2);
    let (a, b, c, d) = (&xi.a[(0, 0)], &xi.a[(0, 1)], &xi.a[(1, 0)], &xi.a[(1, 1)]);
    let ht = (a + d) * &half;
    let mut m = MatR::zeros(2 * n + 2, 2 * n + 2);
    m[(0, 0)] = ht.clone();
    m[(0, 1)] = -&xi.w;
    m[(1, 1)] = -&ht;
    let id = MatR::identity(n);
    let blocks = [
        (0, 0, &(&id.scale(&(d - &ht)) + &xi.d)),
        (0, 1, &id.scale(&(-c))),
        (1, 0, &id.scale(&(-b))),
        (1, 1, &(&id.scale(&(a - &ht)) + &xi.d)),
    ];
    for (bi, bj, blk) in blocks {
        m.set_block(2 + bi * n, 2 + bj * n, blk);
    }
    Ok(m)
}

/// Central difference of `t ↦ i(exp tξ)` at `0`, where `exp tξ` is taken in
/// the defining representation and decomposed back into `(B, C, w)`.
pub fn i_derivative_fd(xi: &SoElement, h: f64) -> Result<MatF> {
    require_q(xi)?;
    let n = xi.signature().n();
    let m = xi.to_matrix().to_f64();
    let at = |t: f64| -> Result<MatF> {
        let g = exp_float(&m.scale(t))?;
        let b = g.block(0, 0, 2, 2);
        let c = g.block(2, 2, n, n);
        let tr = g.block(0, n + 2, 2, 2);
        let binv = b.inverse().ok_or(Error::Singular)?;
        // top-right = w·B·𝕁 and 𝕁⁻¹ = −𝕁, so w = (B⁻¹·TR)[0][1].
        let w = binv.matmul(&tr)[(0, 1)];
        i_map_float(&b, &c, w)
    };
    Ok(at(h)?.sub(&at(-h)?).scale(1.0 / (2.0 * h)))
}

/// Lifts of `g̃/p̃` into `g₋ ⊕ g₁` together with the data of `α`.
#[derive(Clone, Debug)]
pub struct ExtensionModel {
    sig: Signature,
    lift_basis: Vec<SoElement>,
    lift_matrix: MatR,
    lift_inverse: MatR,
}

impl ExtensionModel {
    pub fn new(sig: Signature) -> Result<Self> {
        let degrees = basis_degrees(sig);
        let lift_basis: Vec<SoElement> = basis(sig)
            .into_iter()
            .zip(degrees)
            .filter(|(_, d)| matches!(d, -2 | -1 | 1))
            .map(|(b, _)| b)
            .collect();
        let dim = lift_basis.len();
        let cols: Vec<Vec<Rat>> = lift_basis.iter().map(|b| alpha(b).minus_coords()).collect();
        let rows = cols[0].len();
        let lift_matrix = MatR::from_fn(rows, dim, |r, c| cols[c][r].clone());
        let lift_inverse = lift_matrix.inverse().ok_or(Error::InconsistentLift)?;
        Ok(ExtensionModel {
            sig,
            lift_basis,
            lift_matrix,
            lift_inverse,
        })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn n(&self) -> usize {
        self.sig.n()
    }

    /// Matrix of `g₋ ⊕ g₁ → g̃/p̃`, `x ↦ α(x) mod p̃`.
    pub fn lift_matrix(&self) -> &MatR {
        &self.lift_matrix
    }

    /// The unique `ẑ ∈ g₋ ⊕ g₁` with `α(ẑ) ≡ z mod p̃`.
    pub fn hat_lift(&self, z: &SlElement) -> Result<SoElement> {
        if z.n() != self.n() {
            return Err(Error::Dimension("sl size does not match signature".into()));
        }
        let coords = self.lift_inverse.matmul(&MatR::column(z.minus_coords()));
        Ok(self
            .lift_basis
            .iter()
            .zip(coords.entries())
            .filter(|(_, c)| !c.is_zero())
            .fold(SoElement::zero(self.sig), |acc, (b, c)| acc.add(&b.scale(c))))
    }

    /// `Ψ_α(z₁, z₂) = [α(ẑ₁), α(ẑ₂)] − α([ẑ₁, ẑ₂])`.
    pub fn psi_alpha(&self, z1: &SlElement, z2: &SlElement) -> Result<SlElement> {
        psi_g(&self.hat_lift(z1)?, &self.hat_lift(z2)?)
    }

    /// Ψ_α on all basis pairs of `g̃₋`.
    pub fn psi_cochain(&self, strategy: Strategy) -> Result<Cochain2> {
        let n = self.n();
        let mb = minus_basis(n);
        let hats: Vec<SoElement> = mb.iter().map(|z| self.hat_lift(z)).collect::<Result<_>>()?;
        let pairs = pair_list(mb.len());
        let values = strategy.map_range(pairs.len(), |k| {
            let (i, j) = pairs[k];
            psi_g(&hats[i], &hats[j])
        });
        Ok(Cochain2 {
            n,
            dim: mb.len(),
            values: values.into_iter().collect::<Result<_>>()?,
        })
    }

    /// `(X, Y, Z) ↦ [Ψ_α(X, [Y, W₀]), Z]` on `g̃₋₂ ≅ ℝ²ⁿ`.
    pub fn psi_trilinear(&self, x: &[Rat], y: &[Rat], z: &[Rat]) -> Result<Vec<Rat>> {
        let n = self.n();
        let ye = SlElement::from_minus2(n, y).bracket(&w0(n))?;
        let psi = self.psi_alpha(&SlElement::from_minus2(n, x), &ye)?;
        let out = psi.bracket(&SlElement::from_minus2(n, z))?;
        Ok(out.minus2_vector())
    }

    /// Lower `2n×2n` block of `Ψ_α(X, [Y, W₀])`.
    pub fn psi_block(&self, x: &[Rat], y: &[Rat]) -> Result<MatR> {
        let n = self.n();
        let ye = SlElement::from_minus2(n, y).bracket(&w0(n))?;
        let psi = self.psi_alpha(&SlElement::from_minus2(n, x), &ye)?;
        SsPart::from_sl(&psi)
            .map(|s| s.block)
            .ok_or(Error::NotInAlgebra("sl(2n) block"))
    }
}

/// `[α(x), α(y)] − α([x, y])` on `g`.
pub fn psi_g(x: &SoElement, y: &SoElement) -> Result<SlElement> {
    let lhs = alpha(x).bracket(&alpha(y))?;
    Ok(lhs.sub(&alpha(&x.bracket(y)?)))
}

fn pair_list(dim: usize) -> Vec<(usize, usize)> {
    (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .collect()
}

fn split(v: &[Rat]) -> (&[Rat], &[Rat]) {
    v.split_at(v.len() / 2)
}

/// `(X, Y, Z) ↦ (⟨X₁,Y₂⟩Z₁ − ⟨X₁,Y₁⟩Z₂ ; ⟨X₂,Y₂⟩Z₁ − ⟨X₁,Y₂⟩Z₂)` for
/// `2n`-vectors stacked as `(V₁; V₂)`.
pub fn psi_reference_term(sig: Signature, x: &[Rat], y: &[Rat], z: &[Rat]) -> Vec<Rat> {
    let (x1, x2) = split(x);
    let (y1, y2) = split(y);
    let (z1, z2) = split(z);
    let (a, b, c) = (sig.inner(x1, y2), sig.inner(x1, y1), sig.inner(x2, y2));
    let top = z1.iter().zip(z2).map(|(u, v)| &a * u - &b * v);
    let bottom = z1.iter().zip(z2).map(|(u, v)| &c * u - &a * v);
    top.chain(bottom).collect()
}

/// Sum of [`psi_reference_term`] over all six orderings of the arguments.
pub fn psi_reference(sig: Signature, x: &[Rat], y: &[Rat], z: &[Rat]) -> Vec<Rat> {
    let perms: [[&[Rat]; 3]; 6] = [[x, y, z], [x, z, y], [y, x, z], [y, z, x], [z, x, y], [z, y, x]];
    let mut out = vec![Rat::zero(); x.len()];
    for [a, b, c] in perms {
        for (o, t) in out.iter_mut().zip(psi_reference_term(sig, a, b, c)) {
            *o += t;
        }
    }
    out
}

/// The block matrix built from `R₁₁ = (X₁Y₁ᵗ+Y₁X₁ᵗ)𝕀`, `R₂₂ = (X₂Y₂ᵗ+Y₂X₂ᵗ)𝕀`,
/// `R₁₂ = (X₁Y₂ᵗ+Y₁X₂ᵗ)𝕀`, `R₂₁ = (X₂Y₁ᵗ+Y₂X₁ᵗ)𝕀`:
///
/// ```text
/// [ ½(R₁₂ + tr R₁₂) − R₂₁     ½(R₁₁ − tr R₁₁)          ]
/// [ −½(R₂₂ − tr R₂₂)          R₁₂ − ½(R₂₁ + tr R₂₁)    ]
/// ```
///
/// (traces standing for multiples of the identity). The lower block of
/// `Ψ_α(X, [Y, W₀])` is a fixed multiple of it.
pub fn r_block(sig: Signature, x: &[Rat], y: &[Rat]) -> MatR {
    let n = sig.n();
    let ipq = sig.ipq();
    let (x1, x2) = split(x);
    let (y1, y2) = split(y);
    let outer = |u: &[Rat], v: &[Rat]| MatR::from_fn(n, n, |i, j| &u[i] * &v[j]);
    let sym = |u1: &[Rat], v1: &[Rat], u2: &[Rat], v2: &[Rat]| (&outer(u1, v1) + &outer(u2, v2)).matmul(&ipq);
    let r11 = sym(x1, y1, y1, x1);
    let r22 = sym(x2, y2, y2, x2);
    let r12 = sym(x1, y2, y1, x2);
    let r21 = sym(x2, y1, y2, x1);
    let half = Rat::new(1, 2);
    let id = MatR::identity(n);
    let with_tr = |r: &MatR, s: i64| -> MatR { &r.scale(&half) + &id.scale(&(r.trace() * &half * Rat::from_int(s))) };
    let q11 = &with_tr(&r12, 1) - &r21;
    let q12 = with_tr(&r11, -1);
    let q21 = -&with_tr(&r22, -1);
    let q22 = &r12 - &with_tr(&r21, 1);
    let mut m = MatR::zeros(2 * n, 2 * n);
    m.set_block(0, 0, &q11);
    m.set_block(0, n, &q12);
    m.set_block(n, 0, &q21);
    m.set_block(n, n, &q22);
    m
}

/// The scalar `c` with `a = c·b`, if `b ≠ 0` and such a scalar exists.
pub fn proportionality(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    assert_eq!(a.len(), b.len());
    let k = b.iter().position(|v| !v.is_zero())?;
    let c = &a[k] / &b[k];
    a.iter().zip(b).all(|(u, v)| *u == &c * v).then_some(c)
}

/// Antisymmetric 2-cochain on `g̃₋` with values in `g̃`, stored on pairs `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain2 {
    n: usize,
    dim: usize,
    values: Vec<SlElement>,
}

impl Cochain2 {
    pub fn zero(n: usize) -> Self {
        let dim = 4 * n + 1;
        Cochain2 {
            n,
            dim,
            values: vec![SlElement::zero(n); dim * (dim - 1) / 2],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.dim);
        i * self.dim - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Value on the basis pair `(i, j)`; antisymmetric, zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> SlElement {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.values[self.index(i, j)].clone(),
            Greater => self.values[self.index(j, i)].scale(&-Rat::one()),
            Equal => SlElement::zero(self.n),
        }
    }

    /// Set the value on `(i, j)`, `i ≠ j`; `(j, i)` gets the negative.
    pub fn set(&mut self, i: usize, j: usize, v: SlElement) {
        assert_ne!(i, j);
        if i < j {
            let k = self.index(i, j);
            self.values[k] = v;
        } else {
            let k = self.index(j, i);
            self.values[k] = v.scale(&-Rat::one());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(SlElement::is_zero)
    }

    /// Homogeneities `d₀ − d₁ − d₂` of all nonzero components.
    pub fn homogeneities(&self) -> BTreeSet<i32> {
        let deg: Vec<i32> = minus_positions(self.n)
            .into_iter()
            .map(|(r, c)| degree_of(r, c))
            .collect();
        let mut out = BTreeSet::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for d0 in self.get(i, j).degrees_present() {
                    out.insert(d0 - deg[i] - deg[j]);
                }
            }
        }
        out
    }
}

/// Linear map `g̃₋ → g̃`, indexed by the `p̃₊` dual basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain1 {
    pub values: Vec<SlElement>,
}

impl Cochain1 {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(SlElement::is_zero)
    }
}

/// Kostant codifferential, with `g̃₋` dualized to `p̃₊` by the trace pairing and
/// `∂*(Z₁∧Z₂⊗W) = Z₂⊗[Z₁,W] − Z₁⊗[Z₂,W] − [Z₁,Z₂]⊗W`.
pub fn codifferential(phi: &Cochain2) -> Result<Cochain1> {
    let n = phi.n;
    let dual = plus_dual_basis(n);
    let positions = minus_positions(n);
    let mut out = vec![SlElement::zero(n); phi.dim];
    for a in 0..phi.dim {
        for b in a + 1..phi.dim {
            let w = phi.get(a, b);
            if w.is_zero() {
                continue;
            }
            out[b] = out[b].add(&dual[a].bracket(&w)?);
            out[a] = out[a].sub(&dual[b].bracket(&w)?);
            let p = dual[a].bracket(&dual[b])?;
            for (c, (r, col)) in positions.iter().enumerate() {
                // Coefficient of the dual of e_c is tr(P·e_c) = P[col][r].
                let coeff = &p.matrix()[(*col, *r)];
                if !coeff.is_zero() {
                    out[c] = out[c].sub(&w.scale(coeff));
                }
            }
        }
    }
    Ok(Cochain1 { values: out })
}

pub fn is_normal(phi: &Cochain2) -> Result<bool> {
    Ok(codifferential(phi)?.is_zero())
}

/// Summary of a curvature cochain.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CurvatureReport {
    pub homogeneities: BTreeSet<i32>,
    pub torsion_free: bool,
    pub regular: bool,
    pub nonzero: bool,
}

pub fn curvature_report(phi: &Cochain2) -> CurvatureReport {
    let homogeneities = phi.homogeneities();
    CurvatureReport {
        torsion_free: phi.values.iter().all(SlElement::in_p),
        regular: homogeneities.iter().all(|h| *h > 0),
        nonzero: !phi.is_zero(),
        homogeneities,
    }
}
