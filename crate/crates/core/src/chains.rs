//! The homogeneous model of isotropic planes, chain curves through it, and
//! the cubic tensor `S` on `g₋₁` that detects the Segre cone.
//!
//! A chain is `t ↦ g·exp(tE)·o` where `o` is the plane spanned by the first
//! two basis vectors and `E` the matrix of the generator `e` of `g₋₂`. Since
//! `E² = 0`, `exp(tE) = I + tE` and chains are exact degree-one curves in
//! homogeneous coordinates.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::extension::ExtensionModel;
use crate::matrix::{solve_linear, MatF, MatR};
use crate::rat::Rat;
use crate::so_contact::{bracket_gm1, Signature, SoElement};
use crate::split_quat::QuatStructureOnH;

/// An isotropic 2-plane in `ℝⁿ⁺⁴`, given by a spanning `(n+4)×2` matrix.
#[derive(Clone, Debug)]
pub struct ModelPoint {
    sig: Signature,
    span: MatR,
}

impl ModelPoint {
    pub fn new(sig: Signature, span: MatR) -> Result<Self> {
        if (span.rows(), span.cols()) != (sig.size(), 2) {
            return Err(Error::InvalidPoint(format!(
                "span must be {}x2, got {}x{}",
                sig.size(),
                span.rows(),
                span.cols()
            )));
        }
        if span.rank() != 2 {
            return Err(Error::InvalidPoint("span has rank < 2".into()));
        }
        if !isotropy_residual(sig, &span).is_zero() {
            return Err(Error::InvalidPoint("span is not isotropic".into()));
        }
        Ok(ModelPoint { sig, span })
    }

    pub fn span(&self) -> &MatR {
        &self.span
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }
}

impl PartialEq for ModelPoint {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.span.hstack(&other.span).rank() == 2
    }
}

/// `spanᵗ·FormS·span`, zero exactly for isotropic planes.
pub fn isotropy_residual(sig: Signature, span: &MatR) -> MatR {
    span.transpose().matmul(&sig.form_s()).matmul(span)
}

/// The base point, spanned by the first two standard basis vectors.
pub fn origin(sig: Signature) -> ModelPoint {
    let span = MatR::from_fn(sig.size(), 2, |r, c| if r == c { Rat::one() } else { Rat::zero() });
    ModelPoint { sig, span }
}

fn check_group(sig: Signature, g: &MatR) -> Result<()> {
    if sig.is_orthogonal(g) {
        Ok(())
    } else {
        Err(Error::NotOrthogonal("O(p+2,q+2)"))
    }
}

pub fn act(g: &MatR, pt: &ModelPoint) -> Result<ModelPoint> {
    check_group(pt.sig, g)?;
    ModelPoint::new(pt.sig, g.matmul(&pt.span))
}

/// The matrix `E` of the generator `e` of `g₋₂`.
pub fn e_matrix(sig: Signature) -> MatR {
    SoElement::e(sig).to_matrix()
}

/// The chain `t ↦ g·exp(tE)·o`.
#[derive(Clone, Debug)]
pub struct ChainCurve {
    sig: Signature,
    g: MatR,
}

impl ChainCurve {
    pub fn new(sig: Signature, g: MatR) -> Result<Self> {
        check_group(sig, &g)?;
        Ok(ChainCurve { sig, g })
    }

    /// Spanning matrix of `c(t)`: the first two columns of `g·(I + tE)`.
    pub fn span_at(&self, t: &Rat) -> MatR {
        let e = e_matrix(self.sig);
        let flow = &MatR::identity(self.sig.size()) + &e.scale(t);
        self.g.matmul(&flow).block(0, 0, self.sig.size(), 2)
    }

    pub fn eval(&self, t: &Rat) -> Result<ModelPoint> {
        ModelPoint::new(self.sig, self.span_at(t))
    }

    /// Derivative of the spanning matrix, `g·E` restricted to the first two columns.
    pub fn velocity(&self) -> MatR {
        self.g.matmul(&e_matrix(self.sig)).block(0, 0, self.sig.size(), 2)
    }
}

pub fn chain_eval(sig: Signature, g: &MatR, t: &Rat) -> Result<ModelPoint> {
    ChainCurve::new(sig, g.clone())?.eval(t)
}

/// Class in `g/p ≅ g₋` of the velocity `dc` of a curve of frames `c` at the
/// point `k·o`, returned as the `g₋₂` coefficient and the `g₋₁` part.
pub fn velocity_class(sig: Signature, k: &MatR, c: &MatR, dc: &MatR) -> Result<(Rat, MatR)> {
    let n = sig.n();
    let kinv = k.inverse().ok_or(Error::Singular)?;
    let f0 = kinv.matmul(c);
    if !f0.block(2, 0, n + 2, 2).is_zero() {
        return Err(Error::InvalidPoint("frame does not lie over k·o".into()));
    }
    let m = f0.block(0, 0, 2, 2).inverse().ok_or(Error::Singular)?;
    let d = kinv.matmul(dc).matmul(&m);
    Ok((d[(n + 2, 1)].clone(), d.block(2, 0, n, 2)))
}

/// Whether the velocity of a curve is transverse to the contact distribution.
pub fn is_transverse(sig: Signature, k: &MatR, c: &MatR, dc: &MatR) -> Result<bool> {
    Ok(!velocity_class(sig, k, c, dc)?.0.is_zero())
}

/// Transversality of the chain through the origin at parameter `t`.
pub fn chain_transversality(sig: Signature, t: &Rat) -> Result<bool> {
    let curve = ChainCurve::new(sig, MatR::identity(sig.size()))?;
    let k = &MatR::identity(sig.size()) + &e_matrix(sig).scale(t);
    is_transverse(sig, &k, &curve.span_at(t), &curve.velocity())
}

/// The cubic tensor `S` on `g₋₁`, the cyclic sum of
/// `(ξ,η,ζ) ↦ ℒ(ξ,Iη)Iζ + ℒ(ξ,Jη)Jζ − ℒ(ξ,Kη)Kζ`, times a scale.
#[derive(Clone, Debug)]
pub struct STensorEval {
    sig: Signature,
    scale: Rat,
    quat: QuatStructureOnH,
}

impl STensorEval {
    pub fn new(sig: Signature) -> Self {
        STensorEval {
            sig,
            scale: Rat::one(),
            quat: QuatStructureOnH::standard(sig.n()),
        }
    }

    pub fn scaled(&self, s: &Rat) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::DegenerateTensor);
        }
        Ok(STensorEval {
            scale: &self.scale * s,
            ..self.clone()
        })
    }

    /// Change the quaternion basis by conjugating `I, J, K` with `P`.
    pub fn with_basis_change(&self, p: &MatR) -> Result<Self> {
        Ok(STensorEval {
            quat: self.quat.conjugated(p)?,
            ..self.clone()
        })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    fn base(&self, a: &MatR, b: &MatR, c: &MatR) -> MatR {
        let q = &self.quat;
        let l = |m: &MatR| bracket_gm1(self.sig, a, &b.matmul(m));
        let ti = c.matmul(&q.i).scale(&l(&q.i));
        let tj = c.matmul(&q.j).scale(&l(&q.j));
        let tk = c.matmul(&q.k).scale(&l(&q.k));
        &(&ti + &tj) - &tk
    }

    pub fn eval(&self, xi: &MatR, eta: &MatR, zeta: &MatR) -> MatR {
        let s = &(&self.base(xi, eta, zeta) + &self.base(eta, zeta, xi)) + &self.base(zeta, xi, eta);
        s.scale(&self.scale)
    }

    /// Whether `S` vanishes on every basis triple.
    pub fn is_degenerate(&self) -> bool {
        let b = gm1_basis(self.sig.n());
        for i in 0..b.len() {
            for j in i..b.len() {
                for k in j..b.len() {
                    if !self.eval(&b[i], &b[j], &b[k]).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn s_tensor(eval: &STensorEval, xi: &MatR, eta: &MatR, zeta: &MatR) -> MatR {
    eval.eval(xi, eta, zeta)
}

/// Unit basis of `g₋₁` in column-major order.
pub fn gm1_basis(n: usize) -> Vec<MatR> {
    (0..2 * n)
        .map(|k| {
            let mut v = vec![Rat::zero(); 2 * n];
            v[k] = Rat::one();
            MatR::from_col_major(n, 2, &v)
        })
        .collect()
}

/// `S` obtained from `Ψ_α` by identifying `g₋₁` with `g̃₋₂` through
/// `(X₁|X₂) ↦ (X₁; X₂)`.
pub fn pipeline_s(model: &ExtensionModel, xi: &MatR, eta: &MatR, zeta: &MatR) -> Result<MatR> {
    let n = model.n();
    let v = model.psi_trilinear(&xi.vec_col_major(), &eta.vec_col_major(), &zeta.vec_col_major())?;
    Ok(MatR::from_col_major(n, 2, &v))
}

/// Whether `ℒ(ξ, Aξ) = 0` for every `A` in the span of `I, J, K`.
pub fn is_q_isotropic(eval: &STensorEval, xi: &MatR) -> bool {
    let q = &eval.quat;
    [&q.i, &q.j, &q.k]
        .iter()
        .all(|m| bracket_gm1(eval.sig, xi, &xi.matmul(m)).is_zero())
}

/// Whether `S(ξ, ξ, η) = ξ` has a solution `η`.
pub fn s_reaches_xi(eval: &STensorEval, xi: &MatR) -> Result<bool> {
    let basis = gm1_basis(eval.sig.n());
    let cols: Vec<Vec<Rat>> = basis.iter().map(|eta| eval.eval(xi, xi, eta).vec_col_major()).collect();
    let dim = cols.len();
    let m = MatR::from_fn(dim, dim, |r, c| cols[c][r].clone());
    Ok(solve_linear(&m, &MatR::column(xi.vec_col_major()))?.is_some())
}

/// Rank-one test through `S`.
///
/// If `ξ` is not `𝒬`-isotropic, it has rank one exactly when `S(ξ,ξ,ξ) = 0`.
/// If it is, the cubic vanishes identically and rank one is equivalent to
/// `S(ξ,ξ,η) = ξ` being solvable. Neither condition alone suffices: for a
/// generic rank-two `ξ` the map `η ↦ S(ξ,ξ,η)` is onto, and for `ξ = u⊗f`
/// with `⟨u,u⟩ ≠ 0` its image is `u^⊥⊗f`, which misses `ξ`.
pub fn rank_one_by_s(eval: &STensorEval, xi: &MatR) -> Result<bool> {
    if xi.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !eval.eval(xi, xi, xi).is_zero() {
        return Ok(false);
    }
    if !is_q_isotropic(eval, xi) {
        return Ok(true);
    }
    s_reaches_xi(eval, xi)
}

/// Outcome of classifying samples with [`rank_one_by_s`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ConeReport {
    pub total: usize,
    pub rank_one: usize,
    pub classification: Vec<bool>,
    /// Indices where the `S` classification disagrees with the matrix rank.
    pub misclassified: Vec<usize>,
}

pub fn reconstruct_cone(eval: &STensorEval, samples: &[MatR], strategy: Strategy) -> Result<ConeReport> {
    if eval.is_degenerate() {
        return Err(Error::DegenerateTensor);
    }
    let results = strategy.map_slice(samples, |x| rank_one_by_s(eval, x).map(|f| (f, x.rank() == 1)));
    let results: Vec<(bool, bool)> = results.into_iter().collect::<Result<_>>()?;
    Ok(ConeReport {
        total: samples.len(),
        rank_one: results.iter().filter(|r| r.0).count(),
        classification: results.iter().map(|r| r.0).collect(),
        misclassified: results
            .iter()
            .enumerate()
            .filter(|(_, r)| r.0 != r.1)
            .map(|(i, _)| i)
            .collect(),
    })
}

/// One sample of a chain trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    /// Normalized `(n+4)×2` spanning matrix, row-major.
    pub span: Vec<f64>,
}

/// Euclidean Gram–Schmidt on the two columns, then each column's first
/// nonzero entry made positive.
pub fn normalize_span(span: &MatF) -> MatF {
    let rows = span.rows();
    let c0: Vec<f64> = (0..rows).map(|r| span[(r, 0)]).collect();
    let c1: Vec<f64> = (0..rows).map(|r| span[(r, 1)]).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let n0 = dot(&c0, &c0).sqrt();
    let u0: Vec<f64> = c0.iter().map(|x| x / n0).collect();
    let p = dot(&u0, &c1);
    let r1: Vec<f64> = c1.iter().zip(&u0).map(|(x, u)| x - p * u).collect();
    let n1 = dot(&r1, &r1).sqrt();
    let u1: Vec<f64> = r1.iter().map(|x| x / n1).collect();
    let fix = |v: Vec<f64>| -> Vec<f64> {
        let s = v.iter().find(|x| x.abs() > 1e-300).map_or(1.0, |x| x.signum());
        v.into_iter().map(|x| x * s).collect()
    };
    let (u0, u1) = (fix(u0), fix(u1));
    MatF::from_fn(rows, 2, |r, c| if c == 0 { u0[r] } else { u1[r] })
}

/// Sample `steps` equally spaced points of the chain `g·exp(tE)·o` on
/// `[t_min, t_max]`; each span is computed exactly before conversion.
pub fn emit_trajectory(sig: Signature, g: &MatR, t_min: f64, t_max: f64, steps: usize) -> Result<Vec<TrajectoryRow>> {
    if steps < 2 {
        return Err(Error::Usage("trajectory needs at least 2 steps".into()));
    }
    if !(t_min.is_finite() && t_max.is_finite()) {
        return Err(Error::NonFinite);
    }
    let curve = ChainCurve::new(sig, g.clone())?;
    (0..steps)
        .map(|k| {
            let t = if k == steps - 1 {
                t_max
            } else {
                t_min + (t_max - t_min) * k as f64 / (steps - 1) as f64
            };
            let tr = Rat::from(BigRational::from_float(t).ok_or(Error::NonFinite)?);
            let point = curve.eval(&tr)?;
            let span = normalize_span(&point.span.to_f64());
            Ok(TrajectoryRow {
                t,
                span: span.entries().to_vec(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::exp_nilpotent;
    use crate::rat::rat;
    use crate::sampling::{g_element, gm1, graded_element, trial_rng};

    fn sig21() -> Signature {
        Signature::new(2, 1).unwrap()
    }

    #[test]
    fn e_squares_to_zero() {
        let e = e_matrix(sig21());
        assert!(e.matmul(&e).is_zero());
        assert_eq!(exp_nilpotent(&e, 2).unwrap(), &MatR::identity(7) + &e);
    }

    #[test]
    fn identity_chain_closed_form() {
        let sig = sig21();
        let t = rat(-5, 3);
        let pt = chain_eval(sig, &MatR::identity(7), &t).unwrap();
        let mut want = MatR::zeros(7, 2);
        want[(0, 0)] = Rat::one();
        want[(6, 0)] = -&t;
        want[(1, 1)] = Rat::one();
        want[(5, 1)] = t.clone();
        assert_eq!(pt.span(), &want);
        assert_eq!(chain_eval(sig, &MatR::identity(7), &Rat::zero()).unwrap(), origin(sig));
    }

    #[test]
    fn act_checks_group_and_stabilizer() {
        let sig = sig21();
        let o = origin(sig);
        assert_eq!(act(&MatR::identity(7), &o).unwrap(), o);
        let mut rng = trial_rng(0, "act", 0);
        let h = crate::sampling::q_element(&mut rng, sig, false);
        assert_eq!(act(&h.to_matrix(), &o).unwrap(), o);
        let g = g_element(&mut rng, sig);
        assert!(act(&g, &o).is_ok());
        assert!(matches!(act(&MatR::identity(7).scale(&rat(2, 1)), &o), Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn chain_equivariance() {
        let sig = sig21();
        let mut rng = trial_rng(0, "eq", 0);
        let g = g_element(&mut rng, sig);
        let h = g_element(&mut rng, sig);
        let t = rat(7, 4);
        let lhs = chain_eval(sig, &g.matmul(&h), &t).unwrap();
        let rhs = act(&g, &chain_eval(sig, &h, &t).unwrap()).unwrap();
        assert_eq!(lhs.span(), rhs.span());
    }

    #[test]
    fn transversality_cases() {
        let sig = sig21();
        assert!(chain_transversality(sig, &Rat::zero()).unwrap());
        assert!(chain_transversality(sig, &rat(3, 2)).unwrap());
        let mut rng = trial_rng(0, "tr", 0);
        let x = graded_element(&mut rng, sig, &[-1]).to_matrix();
        let ex = exp_nilpotent(&x, 5).unwrap();
        let t = rat(2, 3);
        // Translated chain.
        let e = e_matrix(sig);
        let k = ex.matmul(&(&MatR::identity(7) + &e.scale(&t)));
        let c = k.block(0, 0, 7, 2);
        let dc = ex.matmul(&e).block(0, 0, 7, 2);
        assert!(is_transverse(sig, &k, &c, &dc).unwrap());
        // Contact direction.
        let k = exp_nilpotent(&x.scale(&t), 5).unwrap();
        let c = k.block(0, 0, 7, 2);
        let dc = x.matmul(&k).block(0, 0, 7, 2);
        let (z, xc) = velocity_class(sig, &k, &c, &dc).unwrap();
        assert!(z.is_zero());
        assert_eq!(xc, SoElement::from_matrix(sig, &x).unwrap().x);
    }

    #[test]
    fn s_symmetry_and_pipeline() {
        let sig = sig21();
        let s = STensorEval::new(sig);
        let model = ExtensionModel::new(sig).unwrap();
        let mut rng = trial_rng(0, "s", 0);
        let (a, b, c) = (gm1(&mut rng, sig), gm1(&mut rng, sig), gm1(&mut rng, sig));
        let v = s.eval(&a, &b, &c);
        assert_eq!(v, s.eval(&b, &a, &c));
        assert_eq!(v, s.eval(&c, &b, &a));
        let p = pipeline_s(&model, &a, &b, &c).unwrap();
        let ratio = crate::extension::proportionality(&v.vec_col_major(), &p.vec_col_major());
        assert!(ratio.is_some());
    }

    #[test]
    fn rank_one_examples() {
        let sig = Signature::new(3, 0).unwrap();
        let s = STensorEval::new(sig);
        let u = MatR::from_fn(3, 2, |i, j| rat((i as i64 + 1) * (2 * j as i64 - 1), 1));
        assert!(rank_one_by_s(&s, &u).unwrap());
        let e12 = MatR::from_fn(3, 2, |i, j| if i == j { Rat::one() } else { Rat::zero() });
        assert!(!rank_one_by_s(&s, &e12).unwrap());
        let scaled = s.scaled(&rat(7, 3)).unwrap();
        assert!(!rank_one_by_s(&scaled, &e12).unwrap());
        assert_eq!(rank_one_by_s(&s, &MatR::zeros(3, 2)), Err(Error::ZeroElement));
    }

    #[test]
    fn trajectory_rows() {
        let sig = sig21();
        let rows = emit_trajectory(sig, &MatR::identity(7), -1.0, 1.0, 5).unwrap();
        assert_eq!(rows.len(), 5);
        let last = &rows[4];
        assert_eq!(last.t, 1.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // span{e₁ − e₇, e₂ + e₆}, row-major (7×2).
        let mut want = vec![0.0; 14];
        want[0] = h;
        want[12] = -h;
        want[3] = h;
        want[11] = h;
        for (a, b) in last.span.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(emit_trajectory(sig, &MatR::identity(7), 0.0, 1.0, 1).is_err());
    }
}
