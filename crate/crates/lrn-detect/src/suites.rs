//! Invariant suites checked against the exact dense oracles.
//!
//! Every suite is a pure function of its parameters and seed; cases run in
//! parallel on the current rayon pool and are reported in case order.

use std::f64::consts::PI;

use lrn_core::criteria::{
    counterexample_entropy, counterexample_exact_weights, counterexample_t_star, counterexample_weights,
    ghz_classify, theorem1_check, theorem2_check, typicality_log_ratio, ExactWeight, GhzClass, Status,
    TypicalityParams, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT,
};
use lrn_core::dense::{
    causal_cone_reduce, dense_clifford_state, fannes_check, flatness_check, lemma_invariance_sweep,
    lift_fixed_point, materialize_fixed_point, materialize_mps, mps_amplitudes, mutual_information,
    random_density, reduced_density, region_entropy, stabilizer_residual, BrickworkCircuit, DenseState, Partition,
    SiteView, AMP_CAP,
};
use lrn_core::linalg::{self, CMat};
use lrn_core::mps::{
    block_tensor, fixtures, rg_fixed_point, rg_step, sorted_eigenvalues, transfer_matrix, FixedPointState,
    MpsTensor, WeightSpectrum, DEFAULT_RG_MAX_ITER, DEFAULT_RG_TOL, DEFAULT_TAU_RANK,
};
use lrn_core::stabilizer::{random_clifford_circuit, StabilizerTableau};
use lrn_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// GHZ-family classification against the entropy criterion.
    Ghz,
    /// Four-branch state with an irrational weight ratio.
    Counterexample,
    /// Integer entropies of random stabilizer states.
    Stabilizer,
    /// Mutual information before and after shallow circuits.
    Invariance,
    /// Light-cone reduction of a shallow circuit.
    Cone,
    /// Blocking, RG flow and fixed-point materialization.
    Mps,
    /// Entropy continuity bound.
    Fannes,
    /// Circuit-counting estimate.
    Typicality,
    /// Consistency of the input tableau.
    Tableau,
}

impl Suite {
    /// The suites run when none is selected.
    pub const DEFAULT: [Suite; 8] = [
        Suite::Ghz,
        Suite::Counterexample,
        Suite::Stabilizer,
        Suite::Invariance,
        Suite::Cone,
        Suite::Mps,
        Suite::Fannes,
        Suite::Typicality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ghz => "ghz",
            Suite::Counterexample => "counterexample",
            Suite::Stabilizer => "stabilizer",
            Suite::Invariance => "invariance",
            Suite::Cone => "cone",
            Suite::Mps => "mps",
            Suite::Fannes => "fannes",
            Suite::Typicality => "typicality",
            Suite::Tableau => "tableau",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub case: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    /// What `value` measures.
    pub metric: String,
    /// Worst finite value of `metric` over the cases.
    pub value: Option<f64>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Sizes and tolerances of the suites. The defaults are the acceptance sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub seed: u64,
    pub ghz_points: usize,
    pub tau_int: f64,
    pub flatness_qubits: usize,
    pub stabilizer_samples: usize,
    pub clifford_circuits: usize,
    pub clifford_max_qubits: usize,
    pub clifford_max_depth: usize,
    pub invariance_sites: usize,
    pub depth: usize,
    pub invariance_seeds: usize,
    pub invariance_ghz_points: usize,
    pub cone_sites: usize,
    pub cone_seeds: usize,
    pub mps_trials: usize,
    pub materialize_max_n: usize,
    pub fannes_pairs: usize,
    pub typicality_n: (u32, u32),
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            seed: 0,
            ghz_points: 101,
            tau_int: 1e-6,
            flatness_qubits: 12,
            stabilizer_samples: 100,
            clifford_circuits: 1000,
            clifford_max_qubits: 12,
            clifford_max_depth: 24,
            invariance_sites: 16,
            depth: 1,
            invariance_seeds: 20,
            invariance_ghz_points: 21,
            cone_sites: 16,
            cone_seeds: 10,
            mps_trials: 200,
            materialize_max_n: 10,
            fannes_pairs: 1000,
            typicality_n: (20, 40),
        }
    }
}

impl SuiteParams {
    /// Scales the randomized sample counts to `trials`.
    pub fn with_trials(mut self, trials: usize) -> Self {
        self.stabilizer_samples = trials;
        self.clifford_circuits = trials;
        self.invariance_seeds = trials;
        self.cone_seeds = trials;
        self.mps_trials = trials;
        self.fannes_pairs = trials;
        self
    }
}

fn case_rng(seed: u64, suite: Suite, case: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(suite.tag());
    r.set_word_pos((case as u128) << 32);
    r
}

fn case_seed(seed: u64, suite: Suite, case: usize) -> u64 {
    case_rng(seed, suite, case).random()
}

/// One case outcome: the metric value and an optional failure message.
type Outcome = (f64, Option<String>);

fn collect(suite: Suite, metric: &str, worst_is_min: bool, outcomes: Vec<Outcome>) -> SuiteReport {
    let init = if worst_is_min { f64::INFINITY } else { f64::NEG_INFINITY };
    let value = outcomes
        .iter()
        .map(|o| o.0)
        .filter(|v| v.is_finite())
        .fold(init, |acc, v| if worst_is_min { acc.min(v) } else { acc.max(v) });
    let failures = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(case, (_, f))| f.map(|detail| Failure { case, detail }))
        .collect::<Vec<_>>();
    SuiteReport { suite, cases: 0, metric: metric.into(), value: value.is_finite().then_some(value), failures }
}

fn finish(mut r: SuiteReport, cases: usize) -> SuiteReport {
    r.cases = cases;
    r
}

fn error_outcome(e: impl std::fmt::Display) -> Outcome {
    (f64::NAN, Some(format!("error: {e}")))
}

pub fn run_suite(suite: Suite, p: &SuiteParams) -> SuiteReport {
    match suite {
        Suite::Ghz => ghz_suite(p.ghz_points, p.tau_int),
        Suite::Counterexample => counterexample_suite(p.flatness_qubits, p.stabilizer_samples, p.seed),
        Suite::Stabilizer => {
            stabilizer_suite(p.clifford_circuits, p.clifford_max_qubits, p.clifford_max_depth, p.seed)
        }
        Suite::Invariance => {
            invariance_suite(p.invariance_sites, p.depth, p.invariance_seeds, p.invariance_ghz_points, p.seed)
        }
        Suite::Cone => cone_suite(p.cone_sites, p.depth, p.cone_seeds, p.seed),
        Suite::Mps => mps_suite(p.mps_trials, p.materialize_max_n, p.seed),
        Suite::Fannes => fannes_suite(p.fannes_pairs, p.seed),
        Suite::Typicality => typicality_suite(p.typicality_n.0, p.typicality_n.1),
        Suite::Tableau => SuiteReport {
            suite,
            cases: 0,
            metric: "stabilizer residual".into(),
            value: None,
            failures: vec![Failure { case: 0, detail: "the tableau suite needs an input tableau".into() }],
        },
    }
}

/// `ghz_classify` and the entropy criterion agree on `|α|² = k/(points−1)`,
/// with long-range magic certified exactly off `{0, 1/2, 1}`.
pub fn ghz_suite(points: usize, tau_int: f64) -> SuiteReport {
    let last = points.max(2) - 1;
    let outcomes = (0..=last)
        .into_par_iter()
        .map(|k| -> Outcome {
            let a = k as f64 / last as f64;
            let exact = match ExactWeight::rational(k as i64, last as i64).and_then(|w| ghz_classify(&w)) {
                Ok(c) => c,
                Err(e) => return error_outcome(e),
            };
            let float = match ghz_classify(&ExactWeight::Float(a)) {
                Ok(c) => c,
                Err(e) => return error_outcome(e),
            };
            let spectrum = WeightSpectrum::constant(&[a.sqrt(), (1.0 - a).sqrt()]);
            let verdict = match theorem1_check(&spectrum, 1..=1, tau_int) {
                Ok(v) => v,
                Err(e) => return error_outcome(e),
            };
            let gap = verdict.evidence.min_integer_distance.unwrap_or(0.0);
            let special = 2 * k == last || k == 0 || k == last;
            let expected = if k == 0 || k == last {
                GhzClass::Stabilizer
            } else if 2 * k == last {
                GhzClass::Srn
            } else {
                GhzClass::Lrn
            };
            let certified = verdict.status == Status::LrnCertified;
            let msg = if exact != expected || float != expected {
                Some(format!("|α|² = {a}: classified {} / {}", exact.label(), float.label()))
            } else if certified == special {
                Some(format!("|α|² = {a}: entropy criterion says {} (gap {gap:e})", verdict.status.label()))
            } else {
                None
            };
            (if special { f64::INFINITY } else { gap }, msg)
        })
        .collect();
    finish(collect(Suite::Ghz, "smallest entropy gap off {0, 1/2, 1}", true, outcomes), last + 1)
}

/// Fixed point made of product blocks with `|α_k|² = weights[k]`.
pub fn product_fixed_point(weights: &[f64]) -> FixedPointState {
    let amps: Vec<f64> = weights.iter().map(|w| w.max(0.0).sqrt()).collect();
    FixedPointState::product_blocks(WeightSpectrum::constant(&amps))
}

fn split_region(qubits: usize) -> (Vec<usize>, Vec<usize>) {
    let k = qubits / 4;
    let a: Vec<usize> = (0..k).collect();
    let b: Vec<usize> = (qubits / 2..qubits / 2 + k).collect();
    (a, b)
}

fn flat_on_split(psi: &DenseState) -> lrn_core::Result<bool> {
    let (a, b) = split_region(psi.n_sites());
    let region: Vec<usize> = a.iter().chain(&b).copied().collect();
    let rho = reduced_density(psi, &region)?;
    let dims = vec![2; region.len()];
    let transposed: Vec<usize> = (0..a.len()).collect();
    flatness_check(&rho, &dims, &transposed, 1e-9)
}

/// `t*`, the irrational ratio, and partial-transpose flatness on `qubits`
/// qubits for the four-branch state and for random stabilizer states.
pub fn counterexample_suite(qubits: usize, stabilizer_samples: usize, seed: u64) -> SuiteReport {
    let mut outcomes: Vec<Outcome> = Vec::new();
    match counterexample_t_star().and_then(|t| Ok((t, counterexample_entropy(t)?))) {
        Ok((t, h)) => {
            let ok = (h - 1.0).abs() < 1e-6 && (t - 0.023).abs() < 1e-3;
            outcomes.push(((h - 1.0).abs(), (!ok).then(|| format!("t* = {t}, H(t*) = {h}"))));
            let v = theorem2_check(&counterexample_exact_weights(t), DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT);
            let sqrt3 = v.evidence.ratios.iter().find_map(|r| r.exact.as_ref().filter(|s| !s.is_rational()));
            let msg = match (v.status, sqrt3) {
                (Status::ExactSrnExcluded, Some(s)) if s.display() == "3^(1/2)" => None,
                (status, s) => Some(format!(
                    "exact ratio test gave {} with offending ratio {:?}",
                    status.label(),
                    s.map(|s| s.display())
                )),
            };
            outcomes.push((0.0, msg));
            let state = (|| {
                if qubits % 2 != 0 {
                    return Err(lrn_core::Error::GeometryMismatch("need an even number of qubits".into()));
                }
                let f = product_fixed_point(&counterexample_weights(t));
                materialize_fixed_point(&f, qubits / 2)?.as_qubits()
            })();
            outcomes.push(match state.and_then(|psi| flat_on_split(&psi)) {
                Ok(false) => (0.0, None),
                Ok(true) => (0.0, Some("four-branch state passes the flatness test".into())),
                Err(e) => error_outcome(e),
            });
        }
        Err(e) => outcomes.push(error_outcome(e)),
    }
    let stab: Vec<Outcome> = (0..stabilizer_samples)
        .into_par_iter()
        .map(|i| {
            let mut r = case_rng(seed, Suite::Counterexample, i);
            let depth = r.random_range(1..=2 * qubits);
            let gates = random_clifford_circuit(qubits, depth, &mut r);
            match dense_clifford_state(qubits, &gates).and_then(|psi| flat_on_split(&psi)) {
                Ok(true) => (0.0, None),
                Ok(false) => (0.0, Some(format!("stabilizer state {i} fails the flatness test"))),
                Err(e) => error_outcome(e),
            }
        })
        .collect();
    outcomes.extend(stab);
    let n = outcomes.len();
    finish(collect(Suite::Counterexample, "|H(t*) - 1|", false, outcomes), n)
}

fn random_disjoint(n: usize, r: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for q in 0..n {
        match r.random_range(0..3) {
            0 => a.push(q),
            1 => b.push(q),
            _ => {}
        }
    }
    (a, b)
}

/// Tableau entropies and mutual informations are integers equal to the dense values.
pub fn stabilizer_suite(circuits: usize, max_qubits: usize, max_depth: usize, seed: u64) -> SuiteReport {
    let outcomes = (0..circuits)
        .into_par_iter()
        .map(|i| -> Outcome {
            let mut r = case_rng(seed, Suite::Stabilizer, i);
            let n = r.random_range(1..=max_qubits.max(1));
            let depth = r.random_range(0..=max_depth);
            let gates = random_clifford_circuit(n, depth, &mut r);
            let mut t = StabilizerTableau::zero_state(n);
            if let Err(e) = t.apply_circuit(&gates) {
                return error_outcome(e);
            }
            let psi = match dense_clifford_state(n, &gates) {
                Ok(p) => p,
                Err(e) => return error_outcome(e),
            };
            let mut worst = 0.0f64;
            for _ in 0..3 {
                let (a, b) = random_disjoint(n, &mut r);
                let pairs = [
                    (t.entropy(&a).map(|s| s as f64), region_entropy(&psi, &a)),
                    (t.mutual_information(&a, &b).map(|s| s as f64), mutual_information(&psi, &a, &b)),
                ];
                for (exact, dense) in pairs {
                    match (exact, dense) {
                        (Ok(x), Ok(y)) => {
                            let err = (x - y).abs();
                            worst = worst.max(err);
                            if err >= 1e-9 {
                                return (err, Some(format!("n = {n}, depth {depth}, A = {a:?}, B = {b:?}: {x} vs {y}")));
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => return error_outcome(e),
                    }
                }
            }
            (worst, None)
        })
        .collect();
    finish(collect(Suite::Stabilizer, "max |tableau - dense| entropy", false, outcomes), circuits)
}

/// Named fixed points used by the invariance suite, with their circuit view.
pub fn invariance_states(ghz_points: usize) -> lrn_core::Result<Vec<(String, FixedPointState, SiteView)>> {
    let mut out = Vec::new();
    let last = ghz_points.max(2) - 1;
    for k in 0..=last {
        let a = k as f64 / last as f64;
        out.push((format!("ghz |α|²={a}"), product_fixed_point(&[a, 1.0 - a]), SiteView::Native));
    }
    for (name, phi) in [("π/2", PI / 2.0), ("π/3", PI / 3.0), ("2π/5", 2.0 * PI / 5.0)] {
        let f = rg_fixed_point(&fixtures::chi3_example(phi), DEFAULT_RG_TOL, DEFAULT_RG_MAX_ITER)?;
        out.push((format!("chi3 φ={name}"), f, SiteView::Native));
    }
    let t = counterexample_t_star()?;
    out.push(("four-branch t*".into(), product_fixed_point(&counterexample_weights(t)), SiteView::Qubits));
    Ok(out)
}

/// `I(A:B)` is unchanged by depth-`D` brickwork circuits and equals `H({p_k})`.
pub fn invariance_suite(n: usize, depth: usize, seeds: usize, ghz_points: usize, seed: u64) -> SuiteReport {
    let states = match invariance_states(ghz_points) {
        Ok(s) => s,
        Err(e) => return finish(collect(Suite::Invariance, "max deviation", false, vec![error_outcome(e)]), 1),
    };
    let outcomes: Vec<Outcome> = (0..states.len())
        .into_par_iter()
        .flat_map_iter(|s| {
            let (name, f, view) = &states[s];
            let circuit_seeds: Vec<u64> =
                (0..seeds).map(|k| case_seed(seed, Suite::Invariance, s * seeds + k)).collect();
            let reports = match lemma_invariance_sweep(f, n, depth, &circuit_seeds, *view) {
                Ok(r) => r,
                Err(e) => return vec![error_outcome(format!("{name}: {e}"))],
            };
            reports
                .into_iter()
                .map(|rep| -> Outcome {
                    let geometry = rep.partition.validate(depth).is_ok()
                        && (depth == 0 || rep.partition.satisfies_size_window(depth));
                    let msg = if !geometry {
                        Some(format!("{name}: partition violates the size window"))
                    } else if !rep.passes(1e-8) {
                        Some(format!(
                            "{name}, circuit seed {}: I before {} after {} H {}",
                            rep.seed, rep.before, rep.after, rep.shannon
                        ))
                    } else {
                        None
                    };
                    (rep.max_deviation(), msg)
                })
                .collect()
        })
        .collect();
    let cases = states.len() * seeds;
    finish(collect(Suite::Invariance, "max |I_before - I_after|, |I - H|", false, outcomes), cases)
}

/// `σ_AB` built from the boundary channels equals the reduced state of the
/// evolved state conjugated by `U_A ⊗ U_B`.
pub fn cone_suite(n: usize, depth: usize, seeds: usize, seed: u64) -> SuiteReport {
    let base = match Partition::for_depth(n, depth) {
        Ok(p) => p,
        Err(e) => return finish(collect(Suite::Cone, "max σ mismatch", false, vec![error_outcome(e)]), 1),
    };
    let partitions = [base.clone(), base.rotated(1)];
    let cases: Vec<(usize, usize)> = (0..seeds).flat_map(|k| (0..2).map(move |p| (k, p))).collect();
    let outcomes = cases
        .par_iter()
        .map(|&(k, pi)| -> Outcome {
            let mut r = case_rng(seed, Suite::Cone, k);
            let circuit_seed: u64 = r.random();
            let q = BrickworkCircuit::random(n, 2, depth, circuit_seed);
            let mut run = || -> lrn_core::Result<(f64, f64)> {
                let cone = causal_cone_reduce(&q, &partitions[pi])?;
                let psi = DenseState::random(n, 2, &mut r)?;
                let direct = cone.sigma_from_channels(&psi)?;
                let reference = cone.sigma_reference(&q, &psi)?;
                Ok((linalg::frobenius(&(direct - reference)), cone.cptp_defect()))
            };
            match run() {
                Ok((err, cptp)) if err < 1e-10 && cptp < 1e-12 => (err, None),
                Ok((err, cptp)) => (
                    err,
                    Some(format!("circuit seed {circuit_seed}, shift {pi}: mismatch {err:e}, CPTP defect {cptp:e}")),
                ),
                Err(e) => error_outcome(e),
            }
        })
        .collect();
    finish(collect(Suite::Cone, "max ‖σ_direct − σ_reference‖_F", false, outcomes), cases.len())
}

/// `A^{(a,b)} = √λ_a E_{ab}` dressed with a random physical unitary and a
/// random gauge: a normal tensor already at its fixed point.
pub fn dressed_fixed_point(lambda: &[f64], seed: u64) -> MpsTensor {
    let chi = lambda.len();
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let u = linalg::haar_unitary(chi * chi, &mut r);
    let x = linalg::complex_gaussian_matrix(chi, chi, &mut r) + CMat::identity(chi, chi).scale(2.0);
    let x_inv = linalg::inverse(&x).expect("shifted Gaussian matrix is invertible");
    let mats = (0..chi * chi)
        .map(|i| {
            let m = CMat::from_fn(chi, chi, |a, b| u[(i, a * chi + b)] * lambda[a].sqrt());
            &x_inv * m * &x
        })
        .collect();
    MpsTensor::new(mats).expect("square matrices of equal size")
}

/// Tensors whose fixed points are materialized by the mps suite.
pub fn materialization_fixtures() -> Vec<(String, MpsTensor)> {
    let dressed = dressed_fixed_point(&[0.7, 0.3], 11);
    let mut out: Vec<(String, MpsTensor)> = vec![
        ("product".into(), fixtures::product()),
        ("ghz".into(), fixtures::ghz()),
        ("ghz 1+2".into(), fixtures::ghz_multiplicity(1, 2)),
        ("chi3 π/2".into(), fixtures::chi3_example(PI / 2.0)),
        ("chi3 π/3".into(), fixtures::chi3_example(PI / 3.0)),
        ("chi3 2π/5".into(), fixtures::chi3_example(2.0 * PI / 5.0)),
        ("four-branch".into(), fixtures::four_branch()),
    ];
    out.push(("dressed fixed point".into(), dressed));
    out
}

fn blocking_case(r: &mut ChaCha8Rng) -> Outcome {
    let (d, chi, q) = (r.random_range(1..=3), r.random_range(1..=4), r.random_range(1..=4));
    let a = MpsTensor::random(d, chi, r);
    let blocked = match block_tensor(&a, q) {
        Ok(b) => transfer_matrix(&b).matrix,
        Err(e) => return error_outcome(e),
    };
    let t = transfer_matrix(&a).matrix;
    let mut power = CMat::identity(chi * chi, chi * chi);
    for _ in 0..q {
        power = &power * &t;
    }
    let scale = power.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let err = linalg::frobenius(&(blocked - power)) / scale;
    let msg = (err > 1e-10 * (chi * chi) as f64).then(|| format!("blocking d={d} χ={chi} q={q}: error {err:e}"));
    (err, msg)
}

fn squaring_case(r: &mut ChaCha8Rng) -> Outcome {
    let (d, chi) = (r.random_range(2..=3), r.random_range(1..=3));
    let mut run = || -> lrn_core::Result<Option<f64>> {
        let a = MpsTensor::random(d, chi, r);
        let rho = sorted_eigenvalues(&transfer_matrix(&a).matrix)?[0].norm();
        let a = a.scaled(C64::new(1.0 / rho.sqrt(), 0.0));
        let ev = sorted_eigenvalues(&transfer_matrix(&a).matrix)?;
        let step = match rg_step(&a, DEFAULT_TAU_RANK) {
            Ok(s) => s,
            Err(lrn_core::Error::RankTolerance { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let after = sorted_eigenvalues(&transfer_matrix(&step.tensor).matrix)?;
        let mut used = vec![false; ev.len()];
        let mut worst = 0.0f64;
        for x in &after {
            let target = ev.iter().enumerate().filter(|(k, _)| !used[*k]).min_by(|(_, p), (_, q)| {
                ((**p * **p) - x).norm().total_cmp(&((**q * **q) - x).norm())
            });
            match target {
                Some((k, y)) => {
                    used[k] = true;
                    worst = worst.max((y * y - x).norm());
                }
                None => return Ok(Some(f64::INFINITY)),
            }
        }
        Ok(Some(worst.max(linalg::unitarity_defect(&step.isometry))))
    };
    match run() {
        Ok(None) => (0.0, None),
        Ok(Some(err)) => (err, (err >= 1e-8).then(|| format!("RG step d={d} χ={chi}: spectrum error {err:e}"))),
        Err(e) => error_outcome(e),
    }
}

fn materialization_case(name: &str, a: &MpsTensor, max_n: usize) -> Outcome {
    let f = match rg_fixed_point(a, DEFAULT_RG_TOL, DEFAULT_RG_MAX_ITER) {
        Ok(f) => f,
        Err(e) => return error_outcome(format!("{name}: {e}")),
    };
    let cf = f.cf_sites_per_site as usize;
    let mut worst = 0.0f64;
    for n in 1..=max_n {
        let sites = n * cf * f.blocking;
        if (a.d() as f64).powi(sites as i32) > AMP_CAP as f64 {
            break;
        }
        let run = || -> lrn_core::Result<Option<f64>> {
            let lifted = lift_fixed_point(&materialize_fixed_point(&f, n)?, &f)?;
            let direct = match materialize_mps(&block_tensor(a, f.blocking)?, n * cf) {
                Ok(d) => d,
                Err(lrn_core::Error::ZeroState) => return Ok(None),
                Err(e) => return Err(e),
            };
            Ok(Some(1.0 - lifted.overlap(&direct)?.norm()))
        };
        match run() {
            Ok(Some(loss)) => {
                worst = worst.max(loss);
                if loss > 1e-8 {
                    return (loss, Some(format!("{name}, N = {n}: overlap {}", 1.0 - loss)));
                }
            }
            Ok(None) => {}
            Err(e) => return error_outcome(format!("{name}, N = {n}: {e}")),
        }
    }
    (worst, None)
}

fn chi3_ratio_case(phi: f64) -> Outcome {
    let a = fixtures::chi3_example(phi);
    let mut worst = 0.0f64;
    for n in 1..=10usize {
        let amps = match mps_amplitudes(&a, n) {
            Ok(v) => v,
            Err(e) => return error_outcome(e),
        };
        let ratio = amps[amps.len() - 1] / amps[0];
        let err = (ratio - C64::new(2.0 * (phi * n as f64).cos(), 0.0)).norm();
        worst = worst.max(err);
        if err >= 1e-10 {
            return (err, Some(format!("φ = {phi}, N = {n}: ratio {ratio}")));
        }
    }
    (worst, None)
}

/// Blocking homomorphism, spectrum squaring under the RG step, fixed-point
/// materialization and the `2cos(φN)` amplitude ratio.
pub fn mps_suite(trials: usize, max_n: usize, seed: u64) -> SuiteReport {
    let fixtures = materialization_fixtures();
    let phis = [PI / 2.0, PI / 3.0, 2.0 * PI / 5.0];
    let total = 2 * trials + fixtures.len() + phis.len();
    let outcomes = (0..total)
        .into_par_iter()
        .map(|i| {
            let mut r = case_rng(seed, Suite::Mps, i);
            if i < trials {
                blocking_case(&mut r)
            } else if i < 2 * trials {
                squaring_case(&mut r)
            } else if i < 2 * trials + fixtures.len() {
                let (name, a) = &fixtures[i - 2 * trials];
                materialization_case(name, a, max_n)
            } else {
                chi3_ratio_case(phis[i - 2 * trials - fixtures.len()])
            }
        })
        .collect();
    finish(collect(Suite::Mps, "max error", false, outcomes), total)
}

/// `|S(ρ) − S(σ)| ≤ δ|R| + H_bin(δ)` on random pairs of at most three qubits.
pub fn fannes_suite(pairs: usize, seed: u64) -> SuiteReport {
    let outcomes = (0..pairs)
        .into_par_iter()
        .map(|i| -> Outcome {
            let mut r = case_rng(seed, Suite::Fannes, i);
            let qubits = r.random_range(1..=3);
            let dim = 1 << qubits;
            let rho = random_density(dim, r.random_range(1..=dim), &mut r);
            let sigma = random_density(dim, r.random_range(1..=dim), &mut r);
            match fannes_check(&rho, &sigma, qubits) {
                Ok(rep) if rep.holds() => (rep.slack(), None),
                Ok(rep) => (rep.slack(), Some(format!("{qubits} qubits: slack {:e}", rep.slack()))),
                Err(e) => error_outcome(e),
            }
        })
        .collect();
    finish(collect(Suite::Fannes, "min bound slack", true, outcomes), pairs)
}

/// The log-ratio is negative and strictly decreasing on `n_min..=n_max`.
pub fn typicality_suite(n_min: u32, n_max: u32) -> SuiteReport {
    let p = TypicalityParams::default();
    let values: Vec<f64> = (n_min..=n_max).map(|n| typicality_log_ratio(n, &p)).collect();
    let outcomes = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let n = n_min + i as u32;
            let msg = if v >= 0.0 {
                Some(format!("N = {n}: log-ratio {v} is not negative"))
            } else if i > 0 && v >= values[i - 1] {
                Some(format!("N = {n}: log-ratio {v} does not decrease"))
            } else {
                None
            };
            (v, msg)
        })
        .collect();
    finish(collect(Suite::Typicality, "largest log-ratio", false, outcomes), values.len())
}

/// Validates a tableau and, for at most 12 qubits, checks it against its dense state.
pub fn tableau_suite(text: &str) -> SuiteReport {
    let outcome = match crate::format::parse_tableau(text) {
        Err(e) => error_outcome(e),
        Ok(t) if t.n() > 12 => (0.0, None),
        Ok(t) => {
            let run = || -> lrn_core::Result<(f64, Option<String>)> {
                let psi = lrn_core::dense::stabilizer_dense_state(&t)?;
                let res = stabilizer_residual(&t, &psi);
                if res > 1e-9 {
                    return Ok((res, Some(format!("stabilizer residual {res:e}"))));
                }
                for q in 0..t.n() {
                    let region: Vec<usize> = (0..=q).collect();
                    let (x, y) = (t.entropy(&region)? as f64, region_entropy(&psi, &region)?);
                    if (x - y).abs() >= 1e-9 {
                        return Ok((res, Some(format!("entropy of qubits 0..={q}: {x} vs {y}"))));
                    }
                }
                Ok((res, None))
            };
            run().unwrap_or_else(error_outcome)
        }
    };
    finish(collect(Suite::Tableau, "stabilizer residual", false, vec![outcome]), 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let p = SuiteParams { ghz_points: 11, invariance_ghz_points: 3, flatness_qubits: 8, ..SuiteParams::default() }
            .with_trials(3);
        for s in Suite::DEFAULT {
            let r = run_suite(s, &p);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn deterministic() {
        let p = SuiteParams::default().with_trials(5);
        assert_eq!(run_suite(Suite::Fannes, &p), run_suite(Suite::Fannes, &p));
        let q = SuiteParams { seed: 1, ..p.clone() };
        assert_ne!(run_suite(Suite::Fannes, &p).value, run_suite(Suite::Fannes, &q).value);
    }

    #[test]
    fn dependent_tableau_fails() {
        let r = tableau_suite("+XX\n+XX\n");
        assert!(!r.passed());
        assert!(r.failures[0].detail.contains("dependent"), "{r:?}");
        assert!(tableau_suite("+XX\n+ZZ\n").passed());
    }
}
