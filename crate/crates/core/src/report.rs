//! Verification suites, the JSON report, and chain trajectory export.
//!
//! Each check draws its trials from independent seeded streams and reports
//! the lowest failing trial, so the report bytes depend only on the
//! configuration and never on scheduling.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chains::{
    chain_eval, chain_transversality, e_matrix, gm1_basis, is_transverse, isotropy_residual, origin, act,
    pipeline_s, rank_one_by_s, reconstruct_cone, velocity_class, emit_trajectory, ChainCurve, STensorEval,
};
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::extension::{
    alpha, curvature_report, i_derivative, i_derivative_fd, i_map, i_map_float_q, is_normal, proportionality,
    psi_g, psi_reference, r_block, ExtensionModel,
};
use crate::lie::StructureConstants;
use crate::matrix::{exp_nilpotent, MatR};
use crate::path_sl::{degree_of, minus_positions, slot_of, SlElement, Slot, SsPart};
use crate::rat::Rat;
use crate::sampling::{
    g_element, gl2, gl2_unimodular, gm1, graded_element, nonzero_rat, orthogonal_pq, q_element, rat_matrix,
    segre_sample, small_rat, so_element, trial_rng, SampleKind,
};
use crate::so_contact::{
    ad_g0, basis, basis_degrees, bracket_gm1, equivariance_checks, outer, rank_one_bracket, segre_rank,
    G0Element, Signature, SoElement,
};
use crate::split_quat::{
    act_on_h, levi_compat_residual, max_subspace_for_line, rank_one_witness, skew_reflection_negating,
    QuatStructureOnH, SplitQuaternion,
};

/// Entrywise tolerance of the float homomorphism check for `i`.
pub const I_FLOAT_TOL: f64 = 1e-10;
/// Tolerance between the closed-form and finite-difference derivative of `i`.
pub const I_FD_TOL: f64 = 1e-6;
/// Step of the central difference.
pub const I_FD_STEP: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Quaternion,
    Extension,
    Normality,
    Chains,
    Reconstruction,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Algebra,
        Suite::Quaternion,
        Suite::Extension,
        Suite::Normality,
        Suite::Chains,
        Suite::Reconstruction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Quaternion => "quaternion",
            Suite::Extension => "extension",
            Suite::Normality => "normality",
            Suite::Chains => "chains",
            Suite::Reconstruction => "reconstruction",
        }
    }

    /// Suites built on the extension to `sl(2n+2)` need `n ≥ 3`.
    pub fn min_n(self) -> usize {
        match self {
            Suite::Algebra | Suite::Quaternion => 1,
            _ => 3,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::Usage(format!("unknown suite '{s}' (known: {})", known.join(", ")))
            })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub p: usize,
    pub q: usize,
    pub seed: u64,
    pub trials: u64,
    pub suites: Vec<Suite>,
    /// Record wall-clock time per check. Off by default, since timings make
    /// reports differ between runs.
    pub timing: bool,
    pub strategy: Strategy,
}

impl SuiteConfig {
    pub fn new(p: usize, q: usize, seed: u64, trials: u64, suites: Vec<Suite>) -> Self {
        SuiteConfig {
            p,
            q,
            seed,
            trials,
            suites,
            timing: false,
            strategy: Strategy::default(),
        }
    }

    /// Check the configuration; returns the signature and the selected
    /// suites deduplicated in declaration order.
    pub fn validate(&self) -> Result<(Signature, Vec<Suite>)> {
        let sig = Signature::new(self.p, self.q).map_err(|e| Error::Usage(e.to_string()))?;
        if self.trials == 0 {
            return Err(Error::Usage("trials must be at least 1".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::Usage("no suite selected".into()));
        }
        let chosen: BTreeSet<Suite> = self.suites.iter().copied().collect();
        for s in &chosen {
            if sig.n() < s.min_n() {
                return Err(Error::Usage(format!(
                    "suite '{}' needs p+q >= {}, got {}",
                    s.name(),
                    s.min_n(),
                    sig.n()
                )));
            }
        }
        Ok((sig, chosen.into_iter().collect()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub name: String,
    /// Plain statement of the certified claim.
    pub anchor: String,
    pub status: Status,
    pub trials: u64,
    pub witness: Option<Value>,
    pub wall_time: Option<f64>,
}

impl Record {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub p: usize,
    pub q: usize,
    pub seed: u64,
    pub trials: u64,
    pub suites: Vec<Suite>,
    pub records: Vec<Record>,
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed())
    }
}

/// Run the selected suites. Suites run under the configured strategy and
/// are merged in declaration order.
pub fn run(cfg: &SuiteConfig) -> Result<Report> {
    let (sig, suites) = cfg.validate()?;
    let ctx = Ctx {
        sig,
        seed: cfg.seed,
        trials: cfg.trials,
        timing: cfg.timing,
        strategy: cfg.strategy,
    };
    let per_suite = cfg.strategy.map_slice(&suites, |s| ctx.run_suite(*s));
    let records: Vec<Record> = per_suite.into_iter().flatten().collect();
    Ok(Report {
        schema: 1,
        p: cfg.p,
        q: cfg.q,
        seed: cfg.seed,
        trials: cfg.trials,
        passed: records.iter().all(Record::passed),
        suites,
        records,
    })
}

type Outcome = Result<Option<Value>>;

struct Ctx {
    sig: Signature,
    seed: u64,
    trials: u64,
    timing: bool,
    strategy: Strategy,
}

fn fail(w: Value) -> Outcome {
    Ok(Some(w))
}

fn ok() -> Outcome {
    Ok(None)
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(r.to_string())).collect())
}

fn mat(m: &MatR) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| rats(&(0..m.cols()).map(|c| m[(r, c)].clone()).collect::<Vec<_>>()))
            .collect(),
    )
}

fn ratv(r: &Rat) -> Value {
    Value::String(r.to_string())
}

impl Ctx {
    fn finish(&self, suite: Suite, name: &str, anchor: &str, trials: u64, start: Instant, out: Outcome) -> Record {
        let witness = match out {
            Ok(w) => w,
            Err(e) => Some(json!({ "error": e.to_string() })),
        };
        Record {
            suite,
            name: name.to_string(),
            anchor: anchor.to_string(),
            status: if witness.is_none() { Status::Pass } else { Status::Fail },
            trials,
            witness,
            wall_time: self.timing.then(|| start.elapsed().as_secs_f64()),
        }
    }

    /// A randomized check; `f` gets the stream of one trial.
    fn trials<F>(&self, suite: Suite, name: &str, anchor: &str, trials: u64, f: F) -> Record
    where
        F: Fn(&mut ChaCha8Rng) -> Outcome + Sync + Send,
    {
        let start = Instant::now();
        let first = self.strategy.find_first(trials as usize, |t| {
            let mut rng = trial_rng(self.seed, name, t as u64);
            match f(&mut rng) {
                Ok(None) => None,
                Ok(Some(w)) => Some(json!({ "trial": t, "detail": w })),
                Err(e) => Some(json!({ "trial": t, "error": e.to_string() })),
            }
        });
        self.finish(suite, name, anchor, trials, start, Ok(first.map(|(_, w)| w)))
    }

    /// A deterministic check that reports its own trial count.
    fn single<F>(&self, suite: Suite, name: &str, anchor: &str, f: F) -> Record
    where
        F: FnOnce() -> Result<(u64, Option<Value>)>,
    {
        let start = Instant::now();
        let (trials, out) = match f() {
            Ok((t, w)) => (t, Ok(w)),
            Err(e) => (1, Err(e)),
        };
        self.finish(suite, name, anchor, trials, start, out)
    }

    /// A global constant fitted on the first trial with a nonzero reference,
    /// then asserted on `trials` further trials.
    fn fitted<G, F>(&self, suite: Suite, name: &str, anchor: &str, fit: G, check: F) -> Record
    where
        G: Fn(&mut ChaCha8Rng) -> Result<Option<Rat>>,
        F: Fn(&mut ChaCha8Rng, &Rat) -> Outcome + Sync + Send,
    {
        let start = Instant::now();
        let fit_name = format!("{name}/fit");
        let mut constant = None;
        for t in 0..64 {
            match fit(&mut trial_rng(self.seed, &fit_name, t)) {
                Ok(Some(c)) => {
                    constant = Some(c);
                    break;
                }
                Ok(None) => {}
                Err(e) => return self.finish(suite, name, anchor, 0, start, Err(e)),
            }
        }
        let Some(c) = constant else {
            let w = json!({ "fit": "no nondegenerate trial in 64 attempts" });
            return self.finish(suite, name, anchor, 0, start, fail(w));
        };
        let first = self.strategy.find_first(self.trials as usize, |t| {
            let mut rng = trial_rng(self.seed, name, t as u64);
            match check(&mut rng, &c) {
                Ok(None) => None,
                Ok(Some(w)) => Some(json!({ "trial": t, "constant": ratv(&c), "detail": w })),
                Err(e) => Some(json!({ "trial": t, "error": e.to_string() })),
            }
        });
        self.finish(suite, name, anchor, self.trials, start, Ok(first.map(|(_, w)| w)))
    }

    fn run_suite(&self, suite: Suite) -> Vec<Record> {
        match suite {
            Suite::Algebra => self.algebra(),
            Suite::Quaternion => self.quaternion(),
            Suite::Extension => match ExtensionModel::new(self.sig) {
                Ok(model) => self.extension(&model),
                Err(e) => vec![self.finish(suite, "extension model", "the lift system is solvable", 1, Instant::now(), Err(e))],
            },
            Suite::Normality => vec![self.normality()],
            Suite::Chains => self.chains(),
            Suite::Reconstruction => match ExtensionModel::new(self.sig) {
                Ok(model) => self.reconstruction(&model),
                Err(e) => vec![self.finish(suite, "extension model", "the lift system is solvable", 1, Instant::now(), Err(e))],
            },
        }
    }

    fn algebra(&self) -> Vec<Record> {
        let sig = self.sig;
        let s = Suite::Algebra;
        let t = self.trials;
        let mats: Vec<MatR> = basis(sig).iter().map(SoElement::to_matrix).collect();
        let coords = move |m: &MatR| {
            SoElement::from_matrix(sig, m)
                .map(|x| x.coords())
                .unwrap_or_else(|_| vec![Rat::zero(); sig.algebra_dim()])
        };
        let sc = StructureConstants::from_basis(&mats, coords, self.strategy);
        let degrees = basis_degrees(sig);
        vec![
            self.single(s, "jacobi identity", "so(p+2,q+2) satisfies the Jacobi identity on every basis triple", || {
                let (n, w) = sc.check_jacobi(self.strategy);
                Ok((n as u64, w.map(|w| json!({ "triple": w.triple, "residual": rats(&w.residual) }))))
            }),
            self.single(s, "grading compatibility", "[g_i, g_j] lies in g_{i+j} for the contact grading", || {
                let d = sc.dim();
                Ok(((d * d) as u64, sc.check_grading(&degrees).map(|p| json!({ "pair": p }))))
            }),
            self.trials(s, "levi bracket closed form", "the bracket g-1 x g-1 -> g-2 is (<X1,Y2> - <X2,Y1>) e", 2 * t, |rng| {
                let (x, y) = (gm1(rng, sig), gm1(rng, sig));
                let got = SoElement::from_x(sig, x.clone()).bracket(&SoElement::from_x(sig, y.clone()))?;
                let want = SoElement::e(sig).scale(&bracket_gm1(sig, &x, &y));
                if got != want {
                    return fail(json!({ "x": mat(&x), "y": mat(&y) }));
                }
                let u1: Vec<Rat> = (0..sig.n()).map(|_| small_rat(rng, 4, 3)).collect();
                let u2: Vec<Rat> = (0..sig.n()).map(|_| small_rat(rng, 4, 3)).collect();
                let f1 = [small_rat(rng, 4, 3), small_rat(rng, 4, 3)];
                let f2 = [small_rat(rng, 4, 3), small_rat(rng, 4, 3)];
                let closed = rank_one_bracket(sig, &f1, &f2, &u1, &u2);
                if closed != bracket_gm1(sig, &outer(&u1, &f1), &outer(&u2, &f2)) {
                    return fail(json!({ "u1": rats(&u1), "u2": rats(&u2), "f1": rats(&f1), "f2": rats(&f2) }));
                }
                ok()
            }),
            self.trials(s, "orthogonal invariance", "[CX, CY] = [X, Y] for C in O(p,q)", t, |rng| {
                let (x, y) = (gm1(rng, sig), gm1(rng, sig));
                let c = orthogonal_pq(rng, sig);
                let (r1, _) = equivariance_checks(sig, &c, &MatR::identity(2), &x, &y)?;
                if r1.is_zero() {
                    ok()
                } else {
                    fail(json!({ "c": mat(&c), "x": mat(&x), "y": mat(&y), "residual": ratv(&r1) }))
                }
            }),
            self.trials(s, "conformal scaling", "[XA, YA] = det A [X, Y] for A in gl(2)", t, |rng| {
                let (x, y) = (gm1(rng, sig), gm1(rng, sig));
                let a = rat_matrix(rng, 2, 2, 4, 3);
                let (_, r2) = equivariance_checks(sig, &MatR::identity(sig.n()), &a, &x, &y)?;
                if r2.is_zero() {
                    ok()
                } else {
                    fail(json!({ "a": mat(&a), "x": mat(&x), "y": mat(&y), "residual": ratv(&r2) }))
                }
            }),
            self.trials(s, "g0 adjoint action", "Ad(B,C)(z,X) = (z / det B, C X B^-1), independent of sign", t, |rng| {
                let g = G0Element::new(sig, gl2(rng), orthogonal_pq(rng, sig))?;
                let z = small_rat(rng, 4, 3);
                let x = gm1(rng, sig);
                let (z2, x2) = ad_g0(&g, &z, &x);
                let mut el = SoElement::from_x(sig, x.clone());
                el.z = z.clone();
                let gm = g.to_matrix();
                let conj = gm.matmul(&el.to_matrix()).matmul(&gm.inverse().ok_or(Error::Singular)?);
                let conj = SoElement::from_matrix(sig, &conj)?;
                if conj.z != z2 || conj.x != x2 || !conj.part(0).is_zero() {
                    return fail(json!({ "b": mat(&g.b), "c": mat(&g.c), "z": ratv(&z), "x": mat(&x) }));
                }
                if ad_g0(&g.negated(), &z, &x) != (z2.clone(), x2.clone()) {
                    return fail(json!({ "sign": "negated representative acts differently" }));
                }
                let y = gm1(rng, sig);
                let (_, y2) = ad_g0(&g, &Rat::zero(), &y);
                if bracket_gm1(sig, &x2, &y2) != bracket_gm1(sig, &x, &y) / g.b.det() {
                    return fail(json!({ "bracket": "Ad does not intertwine the Levi bracket", "y": mat(&y) }));
                }
                ok()
            }),
            self.single(s, "levi bracket nondegenerate", "every nonzero X in g-1 pairs nontrivially with some Y", || {
                let b = gm1_basis(sig.n());
                let bad = b
                    .iter()
                    .position(|x| b.iter().all(|y| bracket_gm1(sig, x, y).is_zero()));
                Ok((b.len() as u64, bad.map(|i| json!({ "basis_index": i }))))
            }),
        ]
    }

    fn quaternion(&self) -> Vec<Record> {
        let sig = self.sig;
        let n = sig.n();
        let s = Suite::Quaternion;
        let t = self.trials;
        let quat = |rng: &mut ChaCha8Rng| {
            SplitQuaternion::new(small_rat(rng, 4, 3), small_rat(rng, 4, 3), small_rat(rng, 4, 3), small_rat(rng, 4, 3))
        };
        let structure = QuatStructureOnH::standard(n);
        vec![
            self.trials(s, "split quaternion matrix homomorphism", "q -> 2x2 matrix is an injective algebra map with |q|^2 = det", t, |rng| {
                let (a, b) = (quat(rng), quat(rng));
                let (ma, mb) = (a.to_matrix(), b.to_matrix());
                if a.mul(&b).to_matrix() != ma.matmul(&mb) {
                    return fail(json!({ "a": format!("{a:?}"), "b": format!("{b:?}") }));
                }
                if a.norm2() != ma.det() || SplitQuaternion::from_matrix(&ma) != a {
                    return fail(json!({ "a": format!("{a:?}") }));
                }
                ok()
            }),
            self.trials(s, "quaternion relations on H", "I^2 = J^2 = id, K = IJ = -JI, and A A = -|A|^2 id on g-1", t, |rng| {
                let x = gm1(rng, sig);
                let q = &structure;
                let (ix, jx, kx) = (q.apply_i(&x), q.apply_j(&x), q.apply_k(&x));
                let rel = q.apply_i(&ix) == x
                    && q.apply_j(&jx) == x
                    && q.apply_k(&kx) == -&x
                    && q.apply_j(&ix) == kx
                    && q.apply_i(&jx) == -&kx;
                let a = SplitQuaternion::imaginary(small_rat(rng, 3, 2), small_rat(rng, 3, 2), small_rat(rng, 3, 2));
                let ax = act_on_h(&a, &act_on_h(&a, &x));
                if !rel || ax != x.scale(&-a.imaginary_norm2()) {
                    return fail(json!({ "x": mat(&x), "a": format!("{a:?}") }));
                }
                ok()
            }),
            self.trials(s, "levi bracket compatibility", "L(AX, AY) = |A|^2 L(X, Y) for imaginary A", t, |rng| {
                let a = SplitQuaternion::imaginary(small_rat(rng, 4, 3), small_rat(rng, 4, 3), small_rat(rng, 4, 3));
                let (x, y) = (gm1(rng, sig), gm1(rng, sig));
                let r = levi_compat_residual(sig, &a, &x, &y);
                if r.is_zero() {
                    ok()
                } else {
                    fail(json!({ "a": format!("{a:?}"), "x": mat(&x), "y": mat(&y), "residual": ratv(&r) }))
                }
            }),
            self.trials(s, "rank one witness", "X has rank one iff a skew reflection A with |A|^2 = -1 fixes it", 2 * t, |rng| {
                let kind = [SampleKind::RankOne, SampleKind::Generic, SampleKind::Isotropic][rng.gen_range(0..3)];
                let x = segre_sample(rng, sig, kind);
                let w = rank_one_witness(&x)?;
                let good = match (&w, segre_rank(&x)) {
                    (Some(a), 1) => act_on_h(a, &x) == x && a.imaginary_norm2() == -Rat::one() && a.a0.is_zero(),
                    (None, r) => r == 2,
                    _ => false,
                };
                if good {
                    ok()
                } else {
                    fail(json!({ "x": mat(&x), "witness": format!("{w:?}") }))
                }
            }),
            self.trials(s, "eigenspace decomposition", "g-1 = H+ (+) H-, J swaps them, and X = v1 + J v2 with v1, v2 in H+", t, |rng| {
                let (plus, minus) = structure.eigenspace_decompose();
                if plus.len() != n || minus.len() != n {
                    return fail(json!({ "dims": [plus.len(), minus.len()] }));
                }
                let minus_span = minus.iter().fold(MatR::zeros(2 * n, 0), |acc, m| acc.hstack(&MatR::column(m.vec_col_major())));
                for v in &plus {
                    let jv = MatR::column(structure.apply_j(v).vec_col_major());
                    if minus_span.hstack(&jv).rank() != n {
                        return fail(json!({ "swap": mat(v) }));
                    }
                }
                let x = gm1(rng, sig);
                let (v1, v2) = structure.split_by_j(&x);
                if structure.apply_i(&v1) != v1 || structure.apply_i(&v2) != v2 || &v1 + &structure.apply_j(&v2) != x {
                    return fail(json!({ "x": mat(&x) }));
                }
                ok()
            }),
            self.trials(s, "maximal isotropic subspaces", "maps killing a line form an n-dim isotropic subspace fixed by the skew reflection of the line", t, |rng| {
                let l = loop {
                    let l = [small_rat(rng, 4, 3), small_rat(rng, 4, 3)];
                    if !l.iter().all(Rat::is_zero) {
                        break l;
                    }
                };
                let b = max_subspace_for_line(&l, n)?;
                let a = skew_reflection_negating(&l);
                let lc = MatR::column(l.to_vec());
                let stacked = b.iter().fold(MatR::zeros(2 * n, 0), |acc, m| acc.hstack(&MatR::column(m.vec_col_major())));
                let good = b.len() == n
                    && stacked.rank() == n
                    && b.iter().all(|x| segre_rank(x) == 1 && x.matmul(&lc).is_zero() && act_on_h(&a, x) == *x)
                    && b.iter().all(|x| b.iter().all(|y| bracket_gm1(sig, x, y).is_zero()));
                if good {
                    ok()
                } else {
                    fail(json!({ "line": rats(&l) }))
                }
            }),
        ]
    }

    fn extension(&self, model: &ExtensionModel) -> Vec<Record> {
        let sig = self.sig;
        let n = sig.n();
        let s = Suite::Extension;
        let t = self.trials;
        let dim_minus = 4 * n + 1;
        let vec2n = |rng: &mut ChaCha8Rng| -> Vec<Rat> { (0..2 * n).map(|_| small_rat(rng, 4, 3)).collect() };
        let in_p_tilde = |m: &MatR| {
            (0..m.rows()).all(|r| (0..m.cols()).all(|c| degree_of(r, c) >= 0 || m[(r, c)].is_zero()))
        };
        let q_degrees: Vec<(SoElement, i32)> = basis(sig).into_iter().zip(basis_degrees(sig)).collect();
        vec![
            self.trials(s, "i homomorphism exact", "i: Q -> P~ is a group homomorphism into the parabolic", t, |rng| {
                let (h1, h2) = (q_element(rng, sig, true), q_element(rng, sig, true));
                let (i1, i2) = (i_map(&h1)?, i_map(&h2)?);
                let i12 = i_map(&h1.compose(&h2))?;
                if i12 != i1.matmul(&i2) && i12 != -&i1.matmul(&i2) {
                    return fail(json!({ "h1": mat(&h1.to_matrix()), "h2": mat(&h2.to_matrix()) }));
                }
                if !in_p_tilde(&i1) {
                    return fail(json!({ "not_in_parabolic": mat(&h1.to_matrix()) }));
                }
                ok()
            }),
            self.trials(s, "i homomorphism float", "i(h1 h2) = i(h1) i(h2) for generic determinants, entrywise within 1e-10", t, |rng| {
                let (h1, h2) = (q_element(rng, sig, false), q_element(rng, sig, false));
                let prod = i_map_float_q(&h1)?.matmul(&i_map_float_q(&h2)?);
                let direct = i_map_float_q(&h1.compose(&h2))?;
                let d = direct.max_abs_diff(&prod).min(direct.max_abs_diff(&prod.scale(-1.0)));
                if d <= I_FLOAT_TOL {
                    ok()
                } else {
                    fail(json!({ "h1": mat(&h1.to_matrix()), "h2": mat(&h2.to_matrix()), "max_abs_diff": d }))
                }
            }),
            self.trials(s, "alpha equivariance", "alpha(Ad(h) x) = Ad(i(h)) alpha(x) for h in Q", t, |rng| {
                let h = q_element(rng, sig, true);
                let x = so_element(rng, sig);
                let ih = i_map(&h)?;
                let lhs = alpha(&h.adjoint(&x));
                let rhs = ih.matmul(alpha(&x).matrix()).matmul(&ih.inverse().ok_or(Error::Singular)?);
                if lhs.matrix() == &rhs {
                    ok()
                } else {
                    fail(json!({ "h": mat(&h.to_matrix()), "x": rats(&x.coords()) }))
                }
            }),
            self.single(s, "alpha on q is derivative of i", "alpha restricted to q is the derivative of i, exactly and by central differences within 1e-6", || {
                let mut count = 0;
                for (k, (b, d)) in q_degrees.iter().enumerate() {
                    if *d != 0 && *d != 2 {
                        continue;
                    }
                    count += 1;
                    let exact = i_derivative(b)?;
                    if &exact != alpha(b).matrix() {
                        return Ok((count, Some(json!({ "basis_index": k, "path": "exact" }))));
                    }
                    let diff = i_derivative_fd(b, I_FD_STEP)?.max_abs_diff(&exact.to_f64());
                    if diff > I_FD_TOL {
                        return Ok((count, Some(json!({ "basis_index": k, "path": "finite difference", "max_abs_diff": diff }))));
                    }
                }
                Ok((count, None))
            }),
            self.single(s, "alpha induces isomorphism", "alpha induces a linear isomorphism g/q -> g~/p~ of dimension 4n+1", || {
                let m = model.lift_matrix();
                let r = m.rank();
                let good = m.rows() == dim_minus && m.cols() == dim_minus && r == dim_minus;
                Ok((1, (!good).then(|| json!({ "rank": r, "rows": m.rows(), "cols": m.cols() }))))
            }),
            self.trials(s, "hat lift section", "the lift into g- (+) g1 is a two-sided inverse of alpha mod p~", t, |rng| {
                let u = graded_element(rng, sig, &[-2, -1, 1]);
                if model.hat_lift(&alpha(&u))? != u {
                    return fail(json!({ "u": rats(&u.coords()) }));
                }
                let z: Vec<Rat> = (0..dim_minus).map(|_| small_rat(rng, 4, 3)).collect();
                let zel = minus_positions(n)
                    .into_iter()
                    .zip(&z)
                    .fold(SlElement::zero(n), |acc, ((r, c), v)| acc.add(&SlElement::unit(n, r, c).scale(v)));
                if alpha(&model.hat_lift(&zel)?).minus_coords() != z {
                    return fail(json!({ "z": rats(&z) }));
                }
                ok()
            }),
            self.single(s, "psi support", "Psi_alpha vanishes off (g~-1V x g~-2) and takes values in g~0ss", || {
                let phi = model.psi_cochain(self.strategy)?;
                let slots: Vec<Slot> = minus_positions(n).into_iter().map(|(r, c)| slot_of(r, c)).collect();
                let d = phi.dim();
                for i in 0..d {
                    for j in 0..d {
                        let v = phi.get(i, j);
                        let allowed = matches!(
                            (slots[i], slots[j]),
                            (Slot::Minus1V, Slot::Minus2) | (Slot::Minus2, Slot::Minus1V)
                        );
                        if (!allowed && !v.is_zero()) || (allowed && SsPart::from_sl(&v).is_none()) {
                            return Ok(((d * d) as u64, Some(json!({ "pair": [i, j], "value": mat(v.matrix()) }))));
                        }
                    }
                }
                Ok(((d * d) as u64, None))
            }),
            self.fitted(
                s,
                "psi symmetrization",
                "(X,Y,Z) -> [Psi_alpha(X,[Y,W0]),Z] is a fixed multiple of the complete symmetrization of the reference map",
                |rng| {
                    let (x, y, z) = (vec2n(rng), vec2n(rng), vec2n(rng));
                    let got = model.psi_trilinear(&x, &y, &z)?;
                    let reference = psi_reference(sig, &x, &y, &z);
                    if reference.iter().all(Rat::is_zero) {
                        return Ok(None);
                    }
                    proportionality(&got, &reference).map(Some).ok_or(Error::DegenerateTensor)
                },
                |rng, c| {
                    let (x, y, z) = (vec2n(rng), vec2n(rng), vec2n(rng));
                    let got = model.psi_trilinear(&x, &y, &z)?;
                    let want: Vec<Rat> = psi_reference(sig, &x, &y, &z).iter().map(|v| v * c).collect();
                    if got == want {
                        ok()
                    } else {
                        fail(json!({ "x": rats(&x), "y": rats(&y), "z": rats(&z) }))
                    }
                },
            ),
            self.fitted(
                s,
                "r-block agreement",
                "the sl(2n) block of Psi_alpha(X,[Y,W0]) is a fixed multiple of the R-block matrix",
                |rng| {
                    let (x, y) = (vec2n(rng), vec2n(rng));
                    let r = r_block(sig, &x, &y);
                    if r.is_zero() {
                        return Ok(None);
                    }
                    let block = model.psi_block(&x, &y)?;
                    proportionality(block.entries(), r.entries()).map(Some).ok_or(Error::DegenerateTensor)
                },
                |rng, c| {
                    let (x, y) = (vec2n(rng), vec2n(rng));
                    if model.psi_block(&x, &y)? == r_block(sig, &x, &y).scale(c) {
                        ok()
                    } else {
                        fail(json!({ "x": rats(&x), "y": rats(&y) }))
                    }
                },
            ),
            self.trials(s, "psi q-equivariance", "Psi on g vanishes on q and is Q-equivariant, so it factors through g/q", t, |rng| {
                let xi = graded_element(rng, sig, &[0, 2]);
                let y = so_element(rng, sig);
                if !psi_g(&xi, &y)?.is_zero() {
                    return fail(json!({ "xi": rats(&xi.coords()), "y": rats(&y.coords()) }));
                }
                let h = q_element(rng, sig, true);
                let x = so_element(rng, sig);
                let ih = i_map(&h)?;
                let lhs = psi_g(&h.adjoint(&x), &h.adjoint(&y))?;
                let rhs = ih.matmul(psi_g(&x, &y)?.matrix()).matmul(&ih.inverse().ok_or(Error::Singular)?);
                if lhs.matrix() == &rhs {
                    ok()
                } else {
                    fail(json!({ "h": mat(&h.to_matrix()), "x": rats(&x.coords()), "y": rats(&y.coords()) }))
                }
            }),
            self.single(s, "psi curvature type", "Psi_alpha is nonzero, torsion free and of homogeneity exactly three", || {
                let phi = model.psi_cochain(self.strategy)?;
                let rep = curvature_report(&phi);
                let good = rep.homogeneities == BTreeSet::from([3]) && rep.torsion_free && rep.regular && rep.nonzero;
                Ok((1, (!good).then(|| serde_json::to_value(&rep).expect("serializable"))))
            }),
        ]
    }

    fn normality(&self) -> Record {
        self.single(Suite::Normality, "codifferential of Ψ_α", "the Kostant codifferential of Psi_alpha vanishes", || {
            let model = ExtensionModel::new(self.sig)?;
            let phi = model.psi_cochain(self.strategy)?;
            let normal = is_normal(&phi)?;
            Ok((1, (!normal).then(|| json!({ "normal": false }))))
        })
    }

    fn chains(&self) -> Vec<Record> {
        let sig = self.sig;
        let s = Suite::Chains;
        let t = self.trials;
        let size = sig.size();
        let e = e_matrix(sig);
        let id = MatR::identity(size);
        vec![
            self.trials(s, "chain exponential", "E^2 = 0, so exp(tE) = I + tE exactly", t, |rng| {
                let tt = small_rat(rng, 9, 4);
                let te = e.scale(&tt);
                let ex = exp_nilpotent(&te, 2)?;
                if !e.matmul(&e).is_zero() || ex != &id + &te {
                    return fail(json!({ "t": ratv(&tt) }));
                }
                ok()
            }),
            self.trials(s, "chain isotropy", "every chain point g exp(tE) o is an isotropic plane", t, |rng| {
                let g = g_element(rng, sig);
                let tt = small_rat(rng, 9, 4);
                let curve = ChainCurve::new(sig, g.clone())?;
                let span = curve.span_at(&tt);
                if !isotropy_residual(sig, &span).is_zero() || span.rank() != 2 {
                    return fail(json!({ "g": mat(&g), "t": ratv(&tt) }));
                }
                // Closed form through the origin: span{e1 - t e_{n+4}, e2 + t e_{n+3}}.
                let base = chain_eval(sig, &id, &tt)?;
                let mut want = MatR::zeros(size, 2);
                want[(0, 0)] = Rat::one();
                want[(size - 1, 0)] = -&tt;
                want[(1, 1)] = Rat::one();
                want[(size - 2, 1)] = tt.clone();
                if base.span() != &want {
                    return fail(json!({ "t": ratv(&tt), "closed_form": false }));
                }
                ok()
            }),
            self.trials(s, "chain equivariance", "chain(g h, t) = g . chain(h, t)", t, |rng| {
                let (g, h) = (g_element(rng, sig), g_element(rng, sig));
                let tt = small_rat(rng, 9, 4);
                let lhs = chain_eval(sig, &g.matmul(&h), &tt)?;
                let rhs = act(&g, &chain_eval(sig, &h, &tt)?)?;
                if lhs != rhs || chain_eval(sig, &g, &Rat::zero())? != act(&g, &origin(sig))? {
                    return fail(json!({ "g": mat(&g), "h": mat(&h), "t": ratv(&tt) }));
                }
                ok()
            }),
            self.trials(s, "chain transversality", "chains are transverse to the contact distribution; g-1 flow lines are not", t, |rng| {
                let tt = small_rat(rng, 9, 4);
                if !chain_transversality(sig, &tt)? {
                    return fail(json!({ "t": ratv(&tt), "curve": "identity chain" }));
                }
                let g = g_element(rng, sig);
                let k = g.matmul(&(&id + &e.scale(&tt)));
                let c = k.block(0, 0, size, 2);
                let dc = g.matmul(&e).block(0, 0, size, 2);
                if !is_transverse(sig, &k, &c, &dc)? {
                    return fail(json!({ "t": ratv(&tt), "g": mat(&g) }));
                }
                let x = graded_element(rng, sig, &[-1]);
                if x.is_zero() {
                    return ok();
                }
                let xm = x.to_matrix();
                let k = exp_nilpotent(&xm.scale(&tt), 5)?;
                let c = k.block(0, 0, size, 2);
                let dc = xm.matmul(&k).block(0, 0, size, 2);
                let (z, xc) = velocity_class(sig, &k, &c, &dc)?;
                if !z.is_zero() || xc != x.x {
                    return fail(json!({ "t": ratv(&tt), "x": mat(&x.x), "contact": "velocity class wrong" }));
                }
                ok()
            }),
        ]
    }

    fn reconstruction(&self, model: &ExtensionModel) -> Vec<Record> {
        let sig = self.sig;
        let n = sig.n();
        let s = Suite::Reconstruction;
        let t = self.trials;
        let eval = STensorEval::new(sig);
        let kinds = [SampleKind::RankOne, SampleKind::Generic, SampleKind::Isotropic];
        vec![
            self.trials(s, "s tensor symmetry", "S is totally symmetric", t, |rng| {
                let (a, b, c) = (gm1(rng, sig), gm1(rng, sig), gm1(rng, sig));
                let v = eval.eval(&a, &b, &c);
                let perms = [
                    eval.eval(&a, &c, &b),
                    eval.eval(&b, &a, &c),
                    eval.eval(&b, &c, &a),
                    eval.eval(&c, &a, &b),
                    eval.eval(&c, &b, &a),
                ];
                if perms.iter().all(|p| *p == v) {
                    ok()
                } else {
                    fail(json!({ "a": mat(&a), "b": mat(&b), "c": mat(&c) }))
                }
            }),
            self.fitted(
                s,
                "s tensor dual path",
                "the closed-form S is a fixed multiple of the tensor read off Psi_alpha",
                |rng| {
                    let (a, b, c) = (gm1(rng, sig), gm1(rng, sig), gm1(rng, sig));
                    let pipe = pipeline_s(model, &a, &b, &c)?;
                    if pipe.is_zero() {
                        return Ok(None);
                    }
                    let closed = eval.eval(&a, &b, &c);
                    proportionality(closed.entries(), pipe.entries()).map(Some).ok_or(Error::DegenerateTensor)
                },
                |rng, k| {
                    let (a, b, c) = (gm1(rng, sig), gm1(rng, sig), gm1(rng, sig));
                    if eval.eval(&a, &b, &c) == pipeline_s(model, &a, &b, &c)?.scale(k) {
                        ok()
                    } else {
                        fail(json!({ "a": mat(&a), "b": mat(&b), "c": mat(&c) }))
                    }
                },
            ),
            self.trials(s, "rank one by S", "the S-tensor test recovers exactly the rank-one elements of g-1", 2 * t, |rng| {
                let kind = kinds[rng.gen_range(0..3)];
                let x = segre_sample(rng, sig, kind);
                let by_s = rank_one_by_s(&eval, &x)?;
                if by_s == (segre_rank(&x) == 1) {
                    ok()
                } else {
                    fail(json!({ "x": mat(&x), "kind": format!("{kind:?}"), "by_s": by_s }))
                }
            }),
            self.trials(s, "cone reconstruction invariance", "rescaling S and changing the quaternion basis leave the cone classification unchanged", t, |rng| {
                let scale = nonzero_rat(rng, 9, 4);
                let p = gl2_unimodular(rng);
                let changed = eval.scaled(&scale)?.with_basis_change(&p)?;
                let samples: Vec<MatR> = kinds.iter().map(|k| segre_sample(rng, sig, *k)).collect();
                let base = reconstruct_cone(&eval, &samples, Strategy::Sequential)?;
                let moved = reconstruct_cone(&changed, &samples, Strategy::Sequential)?;
                let (a, b, c) = (gm1(rng, sig), gm1(rng, sig), gm1(rng, sig));
                let s0 = eval.eval(&a, &b, &c);
                let ratio = proportionality(changed.eval(&a, &b, &c).entries(), s0.entries());
                let proportional = s0.is_zero() || ratio.is_some_and(|r| !r.is_zero());
                if base.classification == moved.classification && base.misclassified.is_empty() && proportional {
                    ok()
                } else {
                    fail(json!({ "scale": ratv(&scale), "p": mat(&p), "base": base, "moved": moved }))
                }
            }),
            self.trials(s, "maximal subspaces on the cone", "every element of a maximal isotropic subspace is classified rank one by S", t, |rng| {
                let l = [nonzero_rat(rng, 4, 3), small_rat(rng, 4, 3)];
                let b = max_subspace_for_line(&l, n)?;
                let coeffs: Vec<Rat> = (0..n).map(|_| nonzero_rat(rng, 4, 3)).collect();
                let combo = b.iter().zip(&coeffs).fold(MatR::zeros(n, 2), |acc, (m, c)| &acc + &m.scale(c));
                let mut samples = b.clone();
                samples.push(combo);
                let rep = reconstruct_cone(&eval, &samples, Strategy::Sequential)?;
                if rep.rank_one == samples.len() {
                    ok()
                } else {
                    fail(json!({ "line": rats(&l), "report": rep }))
                }
            }),
            self.single(s, "s tensor nonzero", "the harmonic curvature tensor S does not vanish", || {
                Ok((1, eval.is_degenerate().then(|| json!({ "degenerate": true }))))
            }),
        ]
    }
}

/// Group element defining an exported chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GSpec {
    Identity,
    /// Drawn from the `chains-export` stream of the seed.
    Random,
}

impl FromStr for GSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(GSpec::Identity),
            "random" => Ok(GSpec::Random),
            _ => Err(Error::Usage(format!("unknown g '{s}' (known: identity, random)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExportConfig {
    pub p: usize,
    pub q: usize,
    pub seed: u64,
    pub g: GSpec,
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
}

/// The group element selected by `cfg`.
pub fn export_group_element(cfg: &ExportConfig) -> Result<MatR> {
    let sig = Signature::new(cfg.p, cfg.q).map_err(|e| Error::Usage(e.to_string()))?;
    Ok(match cfg.g {
        GSpec::Identity => MatR::identity(sig.size()),
        GSpec::Random => g_element(&mut trial_rng(cfg.seed, "chains-export", 0), sig),
    })
}

/// CSV text of a sampled chain: header `t,c11,c12,...` with the normalized
/// span matrix row-major.
pub fn chains_export(cfg: &ExportConfig) -> Result<String> {
    let sig = Signature::new(cfg.p, cfg.q).map_err(|e| Error::Usage(e.to_string()))?;
    if cfg.t_min > cfg.t_max {
        return Err(Error::Usage("t-min must not exceed t-max".into()));
    }
    let g = export_group_element(cfg)?;
    let rows = emit_trajectory(sig, &g, cfg.t_min, cfg.t_max, cfg.steps)?;
    Ok(trajectory_csv(sig, &rows))
}

pub fn trajectory_csv(sig: Signature, rows: &[crate::chains::TrajectoryRow]) -> String {
    let mut out = String::from("t");
    for r in 1..=sig.size() {
        for c in 1..=2 {
            let _ = write!(out, ",c{r}{c}");
        }
    }
    out.push('\n');
    for row in rows {
        let _ = write!(out, "{}", row.t);
        for v in &row.span {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("foo".parse::<Suite>(), Err(Error::Usage(_))));
    }

    #[test]
    fn config_validation() {
        let bad = SuiteConfig::new(0, 0, 1, 5, vec![Suite::Algebra]);
        assert!(matches!(run(&bad), Err(Error::Usage(_))));
        let bad = SuiteConfig::new(2, 1, 1, 0, vec![Suite::Algebra]);
        assert!(matches!(run(&bad), Err(Error::Usage(_))));
        let bad = SuiteConfig::new(1, 1, 1, 5, vec![Suite::Extension]);
        assert!(matches!(run(&bad), Err(Error::Usage(_))));
        let dup = SuiteConfig::new(2, 1, 1, 1, vec![Suite::Quaternion, Suite::Algebra, Suite::Quaternion]);
        assert_eq!(dup.validate().unwrap().1, vec![Suite::Algebra, Suite::Quaternion]);
    }

    #[test]
    fn small_algebra_run_passes() {
        let cfg = SuiteConfig::new(2, 1, 3, 5, vec![Suite::Algebra, Suite::Quaternion]);
        let rep = run(&cfg).unwrap();
        for r in &rep.records {
            assert!(r.passed(), "{} {:?}", r.name, r.witness);
        }
        assert!(rep.passed);
        assert_eq!(rep.schema, 1);
        assert!(rep.records.iter().all(|r| r.wall_time.is_none()));
    }

    #[test]
    fn csv_shape() {
        let cfg = ExportConfig {
            p: 2,
            q: 1,
            seed: 0,
            g: GSpec::Identity,
            t_min: -1.0,
            t_max: 1.0,
            steps: 5,
        };
        let csv = chains_export(&cfg).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("t,c11,c12,c21"));
        assert_eq!(lines[0].split(',').count(), 15);
        assert!(lines[5].starts_with("1,"));
    }
}
