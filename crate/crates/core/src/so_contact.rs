//! The contact grading of `so(p+2,q+2)`.
//!
//! Elements are stored as blocks `(z, X, A, D, U, w)` of degrees
//! `−2, −1, 0, 0, 1, 2` and assembled on demand into the `(n+4)×(n+4)` matrix
//!
//! ```text
//! [ A     U        w𝕁   ]
//! [ X     D        𝕀Uᵗ  ]
//! [ z𝕁    Xᵗ𝕀     −Aᵗ   ]
//! ```
//!
//! with `𝕁 = [[0,1],[−1,0]]` and `𝕀 = 𝕀_{p,q}`, which is skew for the form
//! `FormS = [[0,0,−𝕀₂],[0,𝕀,0],[−𝕀₂,0,0]]`.
//!
//! Basis order (coordinates): `z`; `X` column-major; `A` row-major; `D` as
//! `𝕀(E_ij − E_ji)` for `i<j` lexicographic; `U` row-major; `w`.

use crate::error::{Error, Result};
use crate::matrix::MatR;
use crate::rat::Rat;

/// Signature `(p, q)` of the metric on the auxiliary rank-`n` bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::InvalidSignature { p, q });
        }
        Ok(Signature { p, q })
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Dimension of the contact manifold, `2n+1`.
    pub fn manifold_dim(&self) -> usize {
        2 * self.n() + 1
    }

    /// Size of the defining representation, `n+4`.
    pub fn size(&self) -> usize {
        self.n() + 4
    }

    /// `dim so(p+2,q+2)`.
    pub fn algebra_dim(&self) -> usize {
        let m = self.size();
        m * (m - 1) / 2
    }

    /// Diagonal entry `±1` of `𝕀_{p,q}`.
    pub fn eps(&self, i: usize) -> Rat {
        if i < self.p {
            Rat::one()
        } else {
            -Rat::one()
        }
    }

    pub fn ipq(&self) -> MatR {
        let d: Vec<Rat> = (0..self.n()).map(|i| self.eps(i)).collect();
        MatR::diag(&d)
    }

    /// `⟨u, v⟩ = uᵗ𝕀_{p,q}v`.
    pub fn inner(&self, u: &[Rat], v: &[Rat]) -> Rat {
        assert_eq!(u.len(), self.n());
        assert_eq!(v.len(), self.n());
        u.iter()
            .zip(v)
            .enumerate()
            .filter(|(_, (a, b))| !a.is_zero() && !b.is_zero())
            .map(|(i, (a, b))| {
                let t = a * b;
                if i < self.p {
                    t
                } else {
                    -t
                }
            })
            .sum()
    }

    /// The symmetric form on `ℝⁿ⁺⁴` of signature `(p+2, q+2)`.
    pub fn form_s(&self) -> MatR {
        let n = self.n();
        let mut s = MatR::zeros(n + 4, n + 4);
        s.set_block(0, n + 2, &(-&MatR::identity(2)));
        s.set_block(n + 2, 0, &(-&MatR::identity(2)));
        s.set_block(2, 2, &self.ipq());
        s
    }

    /// Whether `g` preserves `FormS`: `gᵗ·S·g = S`.
    pub fn is_orthogonal(&self, g: &MatR) -> bool {
        let s = self.form_s();
        g.rows() == self.size() && g.cols() == self.size() && g.transpose().matmul(&s).matmul(g) == s
    }

    /// Whether `c` lies in `O(p,q)`.
    pub fn is_orthogonal_pq(&self, c: &MatR) -> bool {
        let i = self.ipq();
        c.rows() == self.n() && c.cols() == self.n() && c.transpose().matmul(&i).matmul(c) == i
    }

    fn check(&self, other: &Signature) -> Result<()> {
        if self != other {
            return Err(Error::SignatureMismatch(self.p, self.q, other.p, other.q));
        }
        Ok(())
    }
}

/// `𝕁 = [[0,1],[−1,0]]`.
pub fn jay() -> MatR {
    MatR::from_i64(2, 2, &[0, 1, -1, 0])
}

/// Element of `so(p+2,q+2)` in graded block form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoElement {
    sig: Signature,
    pub z: Rat,
    pub x: MatR,
    pub a: MatR,
    pub d: MatR,
    pub u: MatR,
    pub w: Rat,
}

impl SoElement {
    pub fn zero(sig: Signature) -> Self {
        let n = sig.n();
        SoElement {
            sig,
            z: Rat::zero(),
            x: MatR::zeros(n, 2),
            a: MatR::zeros(2, 2),
            d: MatR::zeros(n, n),
            u: MatR::zeros(2, n),
            w: Rat::zero(),
        }
    }

    /// Build from blocks, checking shapes and `D ∈ so(p,q)`.
    pub fn new(sig: Signature, z: Rat, x: MatR, a: MatR, d: MatR, u: MatR, w: Rat) -> Result<Self> {
        let n = sig.n();
        let shapes = [
            (x.rows(), x.cols(), n, 2, "X"),
            (a.rows(), a.cols(), 2, 2, "A"),
            (d.rows(), d.cols(), n, n, "D"),
            (u.rows(), u.cols(), 2, n, "U"),
        ];
        for (r, c, wr, wc, name) in shapes {
            if (r, c) != (wr, wc) {
                return Err(Error::Dimension(format!("{name} is {r}x{c}, expected {wr}x{wc}")));
            }
        }
        let ipq = sig.ipq();
        if !(&d.transpose().matmul(&ipq) + &ipq.matmul(&d)).is_zero() {
            return Err(Error::NotInAlgebra("so(p,q)"));
        }
        Ok(SoElement { sig, z, x, a, d, u, w })
    }

    /// The generator `e` of `g₋₂` (`z = 1`).
    pub fn e(sig: Signature) -> Self {
        let mut s = SoElement::zero(sig);
        s.z = Rat::one();
        s
    }

    pub fn from_x(sig: Signature, x: MatR) -> Self {
        assert_eq!((x.rows(), x.cols()), (sig.n(), 2));
        let mut s = SoElement::zero(sig);
        s.x = x;
        s
    }

    pub fn from_u(sig: Signature, u: MatR) -> Self {
        assert_eq!((u.rows(), u.cols()), (2, sig.n()));
        let mut s = SoElement::zero(sig);
        s.u = u;
        s
    }

    pub fn from_w(sig: Signature, w: Rat) -> Self {
        let mut s = SoElement::zero(sig);
        s.w = w;
        s
    }

    pub fn from_a(sig: Signature, a: MatR) -> Self {
        let mut s = SoElement::zero(sig);
        s.a = a;
        s
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn to_matrix(&self) -> MatR {
        let n = self.sig.n();
        let ipq = self.sig.ipq();
        let j = jay();
        let mut m = MatR::zeros(n + 4, n + 4);
        m.set_block(0, 0, &self.a);
        m.set_block(0, 2, &self.u);
        m.set_block(0, n + 2, &j.scale(&self.w));
        m.set_block(2, 0, &self.x);
        m.set_block(2, 2, &self.d);
        m.set_block(2, n + 2, &ipq.matmul(&self.u.transpose()));
        m.set_block(n + 2, 0, &j.scale(&self.z));
        m.set_block(n + 2, 2, &self.x.transpose().matmul(&ipq));
        m.set_block(n + 2, n + 2, &(-&self.a.transpose()));
        m
    }

    /// Decompose a matrix of `so(FormS)` into blocks.
    pub fn from_matrix(sig: Signature, m: &MatR) -> Result<Self> {
        let n = sig.n();
        if (m.rows(), m.cols()) != (n + 4, n + 4) {
            return Err(Error::Dimension(format!(
                "expected {}x{}, got {}x{}",
                n + 4,
                n + 4,
                m.rows(),
                m.cols()
            )));
        }
        let s = sig.form_s();
        if !(&m.transpose().matmul(&s) + &s.matmul(m)).is_zero() {
            return Err(Error::NotInAlgebra("so(p+2,q+2)"));
        }
        let el = SoElement {
            sig,
            z: m[(n + 2, 1)].clone(),
            x: m.block(2, 0, n, 2),
            a: m.block(0, 0, 2, 2),
            d: m.block(2, 2, n, n),
            u: m.block(0, 2, 2, n),
            w: m[(0, n + 3)].clone(),
        };
        debug_assert_eq!(&el.to_matrix(), m);
        Ok(el)
    }

    /// Commutator in the defining representation, decomposed back into blocks.
    pub fn bracket(&self, other: &SoElement) -> Result<SoElement> {
        self.sig.check(&other.sig)?;
        let c = self.to_matrix().commutator(&other.to_matrix());
        SoElement::from_matrix(self.sig, &c)
    }

    pub fn add(&self, other: &SoElement) -> SoElement {
        assert_eq!(self.sig, other.sig);
        SoElement {
            sig: self.sig,
            z: &self.z + &other.z,
            x: &self.x + &other.x,
            a: &self.a + &other.a,
            d: &self.d + &other.d,
            u: &self.u + &other.u,
            w: &self.w + &other.w,
        }
    }

    pub fn scale(&self, s: &Rat) -> SoElement {
        SoElement {
            sig: self.sig,
            z: &self.z * s,
            x: self.x.scale(s),
            a: self.a.scale(s),
            d: self.d.scale(s),
            u: self.u.scale(s),
            w: &self.w * s,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.z.is_zero()
            && self.x.is_zero()
            && self.a.is_zero()
            && self.d.is_zero()
            && self.u.is_zero()
            && self.w.is_zero()
    }

    /// Component of the given degree in `−2..=2`; zero outside that range.
    pub fn part(&self, degree: i32) -> SoElement {
        let mut out = SoElement::zero(self.sig);
        match degree {
            -2 => out.z = self.z.clone(),
            -1 => out.x = self.x.clone(),
            0 => {
                out.a = self.a.clone();
                out.d = self.d.clone();
            }
            1 => out.u = self.u.clone(),
            2 => out.w = self.w.clone(),
            _ => {}
        }
        out
    }

    /// Coordinates in the documented basis order.
    pub fn coords(&self) -> Vec<Rat> {
        let n = self.sig.n();
        let mut v = Vec::with_capacity(self.sig.algebra_dim());
        v.push(self.z.clone());
        v.extend(self.x.vec_col_major());
        v.extend(self.a.entries().iter().cloned());
        for i in 0..n {
            for j in i + 1..n {
                // D = 𝕀K with K antisymmetric, so K_ij = ε_i D_ij.
                v.push(&self.sig.eps(i) * &self.d[(i, j)]);
            }
        }
        v.extend(self.u.entries().iter().cloned());
        v.push(self.w.clone());
        v
    }

    pub fn from_coords(sig: Signature, c: &[Rat]) -> SoElement {
        let n = sig.n();
        assert_eq!(c.len(), sig.algebra_dim(), "coordinate count");
        let mut k = 0;
        let mut take = |len: usize| {
            let s = &c[k..k + len];
            k += len;
            s.to_vec()
        };
        let z = take(1).pop().unwrap();
        let x = MatR::from_col_major(n, 2, &take(2 * n));
        let a = MatR::from_vec(2, 2, take(4));
        let kd = take(n * (n - 1) / 2);
        let mut d = MatR::zeros(n, n);
        let mut idx = 0;
        for i in 0..n {
            for j in i + 1..n {
                d[(i, j)] = &sig.eps(i) * &kd[idx];
                d[(j, i)] = -(&sig.eps(j) * &kd[idx]);
                idx += 1;
            }
        }
        let u = MatR::from_vec(2, n, take(2 * n));
        let w = take(1).pop().unwrap();
        SoElement { sig, z, x, a, d, u, w }
    }
}

/// Basis of `so(p+2,q+2)` in coordinate order.
pub fn basis(sig: Signature) -> Vec<SoElement> {
    let dim = sig.algebra_dim();
    (0..dim)
        .map(|k| {
            let mut c = vec![Rat::zero(); dim];
            c[k] = Rat::one();
            SoElement::from_coords(sig, &c)
        })
        .collect()
}

/// Grading degree of each basis element.
pub fn basis_degrees(sig: Signature) -> Vec<i32> {
    let n = sig.n();
    let mut d = vec![-2];
    d.extend(std::iter::repeat_n(-1, 2 * n));
    d.extend(std::iter::repeat_n(0, 4 + n * (n - 1) / 2));
    d.extend(std::iter::repeat_n(1, 2 * n));
    d.push(2);
    d
}

/// `[X, Y] = (⟨X₁,Y₂⟩ − ⟨X₂,Y₁⟩)·e` on `g₋₁`, returned as the coefficient of `e`.
pub fn bracket_gm1(sig: Signature, x: &MatR, y: &MatR) -> Rat {
    let (x1, x2) = (x.col(0), x.col(1));
    let (y1, y2) = (y.col(0), y.col(1));
    sig.inner(&x1, &y2) - sig.inner(&x2, &y1)
}

/// Residuals of `[CX,CY] = [X,Y]` and `[XA,YA] = det A·[X,Y]`.
pub fn equivariance_checks(sig: Signature, c: &MatR, a: &MatR, x: &MatR, y: &MatR) -> Result<(Rat, Rat)> {
    if !sig.is_orthogonal_pq(c) {
        return Err(Error::NotOrthogonal("O(p,q)"));
    }
    let base = bracket_gm1(sig, x, y);
    let r1 = bracket_gm1(sig, &c.matmul(x), &c.matmul(y)) - &base;
    let r2 = bracket_gm1(sig, &x.matmul(a), &y.matmul(a)) - a.det() * &base;
    Ok((r1, r2))
}

/// Element `(B, C)` of `G₀ ≅ (GL(2) × O(p,q))/{±1}`.
#[derive(Clone, Debug)]
pub struct G0Element {
    sig: Signature,
    pub b: MatR,
    pub c: MatR,
}

impl G0Element {
    pub fn new(sig: Signature, b: MatR, c: MatR) -> Result<Self> {
        if (b.rows(), b.cols()) != (2, 2) {
            return Err(Error::Dimension("B must be 2x2".into()));
        }
        if b.det().is_zero() {
            return Err(Error::Singular);
        }
        if !sig.is_orthogonal_pq(&c) {
            return Err(Error::NotOrthogonal("O(p,q)"));
        }
        Ok(G0Element { sig, b, c })
    }

    pub fn identity(sig: Signature) -> Self {
        G0Element {
            sig,
            b: MatR::identity(2),
            c: MatR::identity(sig.n()),
        }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// `diag(B, C, (B⁻¹)ᵗ)`.
    pub fn to_matrix(&self) -> MatR {
        let n = self.sig.n();
        let mut m = MatR::zeros(n + 4, n + 4);
        m.set_block(0, 0, &self.b);
        m.set_block(2, 2, &self.c);
        m.set_block(n + 2, n + 2, &self.b.inverse().expect("B invertible").transpose());
        m
    }

    pub fn negated(&self) -> Self {
        G0Element {
            sig: self.sig,
            b: -&self.b,
            c: -&self.c,
        }
    }
}

impl PartialEq for G0Element {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig
            && ((self.b == other.b && self.c == other.c) || (self.b == -&other.b && self.c == -&other.c))
    }
}

/// `Ad(B,C)(z, X) = (z / det B, C·X·B⁻¹)`.
pub fn ad_g0(g: &G0Element, z: &Rat, x: &MatR) -> (Rat, MatR) {
    let det = g.b.det();
    let binv = g.b.inverse().expect("B invertible");
    (z / &det, g.c.matmul(x).matmul(&binv))
}

/// Element of the stabilizer `Q` of the line `g₋₂`, stored as `(B, C, w)`
/// with matrix `[[B, 0, wB𝕁], [0, C, 0], [0, 0, (B⁻¹)ᵗ]]`, up to sign.
#[derive(Clone, Debug)]
pub struct QGroupElement {
    sig: Signature,
    pub b: MatR,
    pub c: MatR,
    pub w: Rat,
}

impl QGroupElement {
    pub fn new(sig: Signature, b: MatR, c: MatR, w: Rat) -> Result<Self> {
        let g0 = G0Element::new(sig, b, c)?;
        Ok(QGroupElement {
            sig,
            b: g0.b,
            c: g0.c,
            w,
        })
    }

    pub fn identity(sig: Signature) -> Self {
        QGroupElement {
            sig,
            b: MatR::identity(2),
            c: MatR::identity(sig.n()),
            w: Rat::zero(),
        }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// `β = det B`.
    pub fn beta(&self) -> Rat {
        self.b.det()
    }

    pub fn to_matrix(&self) -> MatR {
        let n = self.sig.n();
        let mut m = G0Element {
            sig: self.sig,
            b: self.b.clone(),
            c: self.c.clone(),
        }
        .to_matrix();
        m.set_block(0, n + 2, &self.b.matmul(&jay()).scale(&self.w));
        m
    }

    /// Recover `(B, C, w)` from a matrix of the `Q` shape.
    pub fn from_matrix(sig: Signature, m: &MatR) -> Result<Self> {
        let n = sig.n();
        if (m.rows(), m.cols()) != (n + 4, n + 4) {
            return Err(Error::Dimension("Q element size".into()));
        }
        let b = m.block(0, 0, 2, 2);
        let c = m.block(2, 2, n, n);
        let binv = b.inverse().ok_or(Error::Singular)?;
        // top-right = w·B·𝕁, so B⁻¹·TR·𝕁⁻¹ = w·𝕀₂ with 𝕁⁻¹ = −𝕁.
        let wm = binv.matmul(&m.block(0, n + 2, 2, 2)).matmul(&(-&jay()));
        let w = wm[(0, 0)].clone();
        let q = QGroupElement::new(sig, b, c, w)?;
        if &q.to_matrix() != m {
            return Err(Error::NotInAlgebra("Q"));
        }
        Ok(q)
    }

    /// Group product `self·other`, computed on `(B, C, w)` data:
    /// `(B₁B₂, C₁C₂, w₂ + w₁/β₂)`.
    pub fn compose(&self, other: &QGroupElement) -> QGroupElement {
        assert_eq!(self.sig, other.sig);
        QGroupElement {
            sig: self.sig,
            b: self.b.matmul(&other.b),
            c: self.c.matmul(&other.c),
            w: &other.w + &(&self.w / &other.beta()),
        }
    }

    pub fn negated(&self) -> Self {
        QGroupElement {
            sig: self.sig,
            b: -&self.b,
            c: -&self.c,
            w: self.w.clone(),
        }
    }

    /// `Ad(h)x = h·x·h⁻¹` on the assembled matrices.
    pub fn adjoint(&self, x: &SoElement) -> SoElement {
        let h = self.to_matrix();
        let hinv = h.inverse().expect("Q element invertible");
        SoElement::from_matrix(self.sig, &h.matmul(&x.to_matrix()).matmul(&hinv)).expect("Ad preserves so(p+2,q+2)")
    }
}

impl PartialEq for QGroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig
            && self.w == other.w
            && ((self.b == other.b && self.c == other.c) || (self.b == -&other.b && self.c == -&other.c))
    }
}

/// Rank of `X ∈ g₋₁` as a linear map `ℝ² → ℝⁿ`.
pub fn segre_rank(x: &MatR) -> usize {
    x.rank()
}

/// Closed form `[f₁⊗u₁, f₂⊗u₂] = |f₁,f₂|·⟨u₁,u₂⟩` for covectors `f` (length 2)
/// and vectors `u` (length n); the element `f⊗u` is the matrix `u·fᵗ`.
pub fn rank_one_bracket(sig: Signature, f1: &[Rat], f2: &[Rat], u1: &[Rat], u2: &[Rat]) -> Rat {
    assert_eq!(f1.len(), 2);
    assert_eq!(f2.len(), 2);
    let wedge = &f1[0] * &f2[1] - &f1[1] * &f2[0];
    wedge * sig.inner(u1, u2)
}

/// The element `u⊗f` of `g₋₁` as the `n×2` matrix `u·fᵗ`.
pub fn outer(u: &[Rat], f: &[Rat]) -> MatR {
    MatR::from_fn(u.len(), f.len(), |i, j| &u[i] * &f[j])
}
