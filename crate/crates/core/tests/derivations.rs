//! Re-derivations of choices the implementation depends on: the top rows of
//! `α`, the form of the rank-one test through `S`, and the normalizing
//! constants between the closed forms and the pipelines.

use liecontact::chains::{pipeline_s, rank_one_by_s, s_reaches_xi, STensorEval};
use liecontact::extension::{alpha_lambda, i_map, proportionality, psi_reference, r_block, ExtensionModel};
use liecontact::path_sl::{Slot, SsPart};
use liecontact::sampling::{gm1, q_element, small_rat, trial_rng};
use liecontact::so_contact::{basis, basis_degrees, outer, segre_rank, QGroupElement, SoElement};
use liecontact::{rank_kernel, rat, MatR, Rat, Signature};

const SIGNATURES: [(usize, usize); 3] = [(2, 1), (3, 0), (2, 2)];

fn sig(p: usize, q: usize) -> Signature {
    Signature::new(p, q).unwrap()
}

/// Matrix positions of the `g̃₂` and `g̃₁ⱽ` rows, in order.
fn top_slots(n: usize) -> Vec<(usize, usize)> {
    (0..2).flat_map(|r| (0..2 * n).map(move |j| (r, 2 + j))).collect()
}

/// Equivariance equations `α(Ad h x_k) = Ad(i(h)) α(x_k)` for the ansatz
/// that replaces the top rows of `α₀(x)` by `L·coords(x)`. Unknown
/// `L[m][j]` sits at index `m·dim + j`; the system is homogeneous because
/// `α₀` is already equivariant.
fn ansatz_rows(sig: Signature, h: &QGroupElement, slots: &[(usize, usize)]) -> Vec<Vec<Rat>> {
    let n = sig.n();
    let dim = sig.algebra_dim();
    let zero = Rat::zero();
    let ih = i_map(h).unwrap();
    let ih_inv = ih.inverse().unwrap();
    // Conjugates of the unit matrices at the top slots.
    let conj: Vec<MatR> = slots
        .iter()
        .map(|&(r, c)| {
            let mut e = MatR::zeros(2 * n + 2, 2 * n + 2);
            e[(r, c)] = Rat::one();
            ih.matmul(&e).matmul(&ih_inv)
        })
        .collect();
    let mut rows = Vec::new();
    for (k, xk) in basis(sig).iter().enumerate() {
        let y = h.adjoint(xk);
        let lhs = alpha_lambda(&y, &zero);
        let rhs = ih.matmul(alpha_lambda(xk, &zero).matrix()).matmul(&ih_inv);
        assert!((lhs.matrix() - &rhs).is_zero(), "alpha_0 is not equivariant on basis {k}");
        let yc = y.coords();
        for (mp, &(r, c)) in slots.iter().enumerate() {
            let mut row = vec![Rat::zero(); slots.len() * dim];
            for (j, v) in yc.iter().enumerate() {
                row[mp * dim + j] += v;
            }
            for (m, cm) in conj.iter().enumerate() {
                row[m * dim + k] -= &cm[(r, c)];
            }
            if row.iter().any(|v| !v.is_zero()) {
                rows.push(row);
            }
        }
    }
    rows
}

#[test]
fn alpha_top_rows_forced_by_equivariance() {
    let sig = sig(2, 1);
    let n = sig.n();
    let slots = top_slots(n);
    let unknowns = slots.len() * sig.algebra_dim();
    // A diagonal torus element separates weights: every equation has one
    // unknown, and unknowns with mismatched weights vanish.
    let torus = QGroupElement::new(sig, MatR::diag(&[rat(2, 1), rat(8, 1)]), MatR::identity(n), Rat::zero()).unwrap();
    let mut alive = vec![true; unknowns];
    for row in ansatz_rows(sig, &torus, &slots) {
        let nz: Vec<usize> = (0..unknowns).filter(|&u| !row[u].is_zero()).collect();
        assert_eq!(nz.len(), 1);
        alive[nz[0]] = false;
    }
    let cols: Vec<usize> = (0..unknowns).filter(|&u| alive[u]).collect();
    let mut rows = Vec::new();
    for t in 0..2 {
        let h = q_element(&mut trial_rng(9, "ansatz", t), sig, true);
        rows.extend(ansatz_rows(sig, &h, &slots));
    }
    let system = MatR::from_fn(rows.len(), cols.len(), |r, c| rows[r][cols[c]].clone());
    let (_, kernel) = rank_kernel(&system);
    assert_eq!(kernel.len(), 1, "equivariance leaves {} free parameters", kernel.len());
    let mut solution = vec![Rat::zero(); unknowns];
    for (c, v) in cols.iter().zip(kernel[0].entries()) {
        solution[*c] = v.clone();
    }
    // The one-dimensional solution is the λ-direction of the displayed α.
    let b = basis(sig);
    let top = |lambda: Rat| -> Vec<Rat> {
        let images: Vec<MatR> = b.iter().map(|x| alpha_lambda(x, &lambda).into_matrix()).collect();
        slots
            .iter()
            .flat_map(|&(r, c)| images.iter().map(move |m| m[(r, c)].clone()))
            .collect()
    };
    let expected: Vec<Rat> = top(Rat::one()).iter().zip(top(Rat::zero())).map(|(a, b)| a - &b).collect();
    assert!(proportionality(&solution, &expected).is_some());
}

/// Only `λ = ½` keeps `Ψ` inside `g̃₀ˢˢ`; otherwise a `g̃₋₁ᴱ` part appears.
#[test]
fn half_is_the_only_normalization_with_semisimple_values() {
    let sig = sig(2, 1);
    let lifts: Vec<SoElement> = basis(sig)
        .into_iter()
        .zip(basis_degrees(sig))
        .filter(|(_, d)| matches!(d, -2 | -1 | 1))
        .map(|(x, _)| x)
        .collect();
    for lambda in [rat(0, 1), rat(1, 2), rat(1, 1), rat(-3, 2)] {
        let mut semisimple = true;
        let mut minus1e = false;
        for x in &lifts {
            for y in &lifts {
                let lhs = alpha_lambda(x, &lambda).bracket(&alpha_lambda(y, &lambda)).unwrap();
                let psi = lhs.sub(&alpha_lambda(&x.bracket(y).unwrap(), &lambda));
                semisimple &= psi.is_zero() || SsPart::from_sl(&psi).is_some();
                minus1e |= !psi.slot_project(Slot::Minus1E).is_zero();
            }
        }
        let is_half = lambda == rat(1, 2);
        assert_eq!(semisimple, is_half, "λ = {lambda}");
        assert_eq!(minus1e, !is_half, "λ = {lambda}");
    }
}

fn literal_or(eval: &STensorEval, xi: &MatR) -> bool {
    eval.eval(xi, xi, xi).is_zero() || s_reaches_xi(eval, xi).unwrap()
}

fn and_variant(eval: &STensorEval, xi: &MatR) -> bool {
    eval.eval(xi, xi, xi).is_zero() && s_reaches_xi(eval, xi).unwrap()
}

#[test]
fn disjunctive_test_accepts_generic_rank_two() {
    for (p, q) in SIGNATURES {
        let sig = sig(p, q);
        let eval = STensorEval::new(sig);
        let xi = MatR::from_fn(sig.n(), 2, |i, j| if i == j { Rat::one() } else { Rat::zero() });
        assert_eq!(segre_rank(&xi), 2);
        assert!(literal_or(&eval, &xi), "({p},{q})");
        assert!(!rank_one_by_s(&eval, &xi).unwrap());
    }
}

#[test]
fn conjunctive_test_rejects_non_null_rank_one() {
    for (p, q) in SIGNATURES {
        let sig = sig(p, q);
        let eval = STensorEval::new(sig);
        let mut u = vec![Rat::zero(); sig.n()];
        u[0] = Rat::one();
        u[1] = rat(2, 3);
        let xi = outer(&u, &[rat(1, 1), rat(-1, 1)]);
        assert_eq!(segre_rank(&xi), 1);
        assert!(!and_variant(&eval, &xi), "({p},{q})");
        assert!(rank_one_by_s(&eval, &xi).unwrap());
    }
}

#[test]
fn constants_are_fixed_across_signatures() {
    for (p, q) in SIGNATURES {
        let sig = sig(p, q);
        let n = sig.n();
        let model = ExtensionModel::new(sig).unwrap();
        let eval = STensorEval::new(sig);
        let mut rng = trial_rng(17, "constants", (p * 10 + q) as u64);
        let mut v = || (0..2 * n).map(|_| small_rat(&mut rng, 4, 3)).collect::<Vec<_>>();
        for _ in 0..5 {
            let (x, y, z) = (v(), v(), v());
            let got = model.psi_trilinear(&x, &y, &z).unwrap();
            let reference: Vec<Rat> = psi_reference(sig, &x, &y, &z).iter().map(|r| r * &rat(-1, 2)).collect();
            assert_eq!(got, reference, "c* at ({p},{q})");
            assert_eq!(model.psi_block(&x, &y).unwrap(), r_block(sig, &x, &y).scale(&rat(-1, 1)));
        }
        let mut rng = trial_rng(17, "constants-s", (p * 10 + q) as u64);
        for _ in 0..5 {
            let (a, b, c) = (gm1(&mut rng, sig), gm1(&mut rng, sig), gm1(&mut rng, sig));
            let pipe = pipeline_s(&model, &a, &b, &c).unwrap();
            assert_eq!(eval.eval(&a, &b, &c), pipe.scale(&rat(2, 1)), "c** at ({p},{q})");
        }
    }
}

#[test]
fn psi_support_counts() {
    // Ordered pairs (g̃₋₁ⱽ, g̃₋₂) with nonzero value.
    for ((p, q), want) in SIGNATURES.into_iter().zip([72, 72, 128]) {
        let sig = sig(p, q);
        let phi = ExtensionModel::new(sig).unwrap().psi_cochain(Default::default()).unwrap();
        let mut count = 0;
        for i in 0..phi.dim() {
            for j in 0..phi.dim() {
                count += usize::from(!phi.get(i, j).is_zero());
            }
        }
        assert_eq!(count, want, "({p},{q})");
    }
}
