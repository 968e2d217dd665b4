//! Verification suites: each suite certifies one family of identities as
//! truncated-series equalities at generic rational points, reporting the
//! certified window, the seeds used and the first mismatch if any.
//!
//! Convention constants that the literature leaves ambiguous are calibrated
//! rather than assumed: the `calibration` suite scans the candidate
//! conventions and the other suites assert the calibrated ones. The record
//! of calibrated choices is embedded in every report.

use crate::error::Result;
use crate::fock::{
    contraction_oracle, graded_trace_engine, graded_trace_oracle, principal_spec, rr_h_diagonal,
    rr_h_trace, rr_v_trace, vacuum_element_engine, AlphabetFamily, FockSpace, OpSign, RrCaps,
    VertexOpSpec, WordOp,
};
use crate::instanton::{chi_y_genus, chi_y_ratio, chi_y_ratio_formal, tangent_character, TangentConvention};
use crate::params::{random_param_point, ParamPoint};
use crate::partitions::{Partition, PartitionTuple};
use crate::rat::{pow_i, rat, Rat};
use crate::series::{Monomial, MultiSeries, Shape, Var};
use crate::symfun::{framing_p, h_eigen, macdonald_norm_o, skew_schur, PowerSumSpec,
    PrincipalAlphabet, PrincipalKind};
use crate::vertex::{normalized_zr, zr_fixed_legs, zr_full, Direction, NetworkConfig};
use num::traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const DEFAULT_SEEDS: [u64; 3] = [3, 5, 11];

/// The verification suites exposed by the command surface.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SuiteId {
    Prop34,
    Thm35,
    Thm317,
    PrefDir,
    Lemma39,
    Lemma310,
    Identity316,
    OracleContraction,
    OracleTrace,
    Calibration,
}

impl SuiteId {
    pub const ALL: [SuiteId; 10] = [
        SuiteId::Prop34,
        SuiteId::Thm35,
        SuiteId::Thm317,
        SuiteId::PrefDir,
        SuiteId::Lemma39,
        SuiteId::Lemma310,
        SuiteId::Identity316,
        SuiteId::OracleContraction,
        SuiteId::OracleTrace,
        SuiteId::Calibration,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteId::Prop34 => "prop-3-4",
            SuiteId::Thm35 => "thm-3-5",
            SuiteId::Thm317 => "thm-3-17",
            SuiteId::PrefDir => "pref-dir",
            SuiteId::Lemma39 => "lemma-3-9",
            SuiteId::Lemma310 => "lemma-3-10",
            SuiteId::Identity316 => "identity-3-16",
            SuiteId::OracleContraction => "oracle-contraction",
            SuiteId::OracleTrace => "oracle-trace",
            SuiteId::Calibration => "calibration",
        }
    }

    pub fn parse(s: &str) -> Option<SuiteId> {
        SuiteId::ALL.iter().copied().find(|id| id.name() == s)
    }
}

/// Options shared by the suite runners; unset fields take per-suite
/// defaults.
#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub rank: Option<usize>,
    pub cap_q: Option<u32>,
    pub cap_a: Option<u32>,
    pub cap_b: Option<u32>,
    pub cap_m: Option<u32>,
    pub seeds: Vec<u64>,
}

impl SuiteOptions {
    fn seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            DEFAULT_SEEDS.to_vec()
        } else {
            self.seeds.clone()
        }
    }
}

/// Outcome of one suite run.
#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub pass: bool,
    pub cases: usize,
    pub seeds: Vec<u64>,
    pub window: String,
    pub first_mismatch: Option<String>,
    pub calibration: BTreeMap<String, String>,
}

impl Report {
    fn new(id: SuiteId, seeds: Vec<u64>, window: String) -> Report {
        Report {
            suite: id.name().to_string(),
            pass: true,
            cases: 0,
            seeds,
            window,
            first_mismatch: None,
            calibration: calibration_record(),
        }
    }

    fn fail(&mut self, msg: String) {
        if self.pass {
            self.pass = false;
            self.first_mismatch = Some(msg);
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "pass": self.pass,
            "cases": self.cases,
            "seeds": self.seeds,
            "window": self.window,
            "first_mismatch": self.first_mismatch,
            "calibration": self.calibration,
        })
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}: {} ({} cases, window {})",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" },
            self.cases,
            self.window
        )
    }
}

/// The calibrated convention constants asserted by the suites. Each entry
/// was selected by the `calibration` scan; the literature leaves these
/// choices ambiguous or quotes them with monomial slips, so they are pinned
/// here and re-verified on every run.
pub fn calibration_record() -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("cell_index_base".into(), "0-based, row exponent on q".into());
    m.insert("identity_3_16_rhs".into(), "(-1)^{|λ|}".into());
    m.insert("thm_3_5_normalizer".into(), "(-1)^{|λ⃗|}, gluing variables unsubstituted".into());
    m.insert("eq_3_9_q_match".into(), "Q ↦ -Q".into());
    m.insert("thm_3_17_match".into(), "B ↦ -B".into());
    m.insert("prop_3_4_match".into(), "Q ↦ -√(qt) Q, m = -√(qt) A".into());
    m.insert("tangent_convention".into(), "arm-t".into());
    m.insert("framing_encoding".into(), "a_{k+1}/a_k = A·B_k".into());
    m
}

fn point_for(seed: u64, r: usize, cap_q: u32, cap_a: u32, cap_b: u32, max_leg: u32) -> ParamPoint {
    let g = 4 * (cap_q + cap_a + (r.saturating_sub(1) as u32) * cap_b + max_leg);
    random_param_point(seed, r, g.max(24))
}

/// First differing coefficient of two series over a window predicate on the
/// exponent vectors (shapes must list the same variables in the same
/// order).
fn first_mismatch(
    a: &MultiSeries,
    b: &MultiSeries,
    pred: impl Fn(&[i32]) -> bool,
) -> Option<(Vec<i32>, Rat, Rat)> {
    let mut keys: Vec<Vec<i32>> = a.iter().map(|(e, _)| e.clone()).collect();
    keys.extend(b.iter().map(|(e, _)| e.clone()));
    keys.sort();
    keys.dedup();
    for k in keys {
        if !pred(&k) {
            continue;
        }
        let ca = a.coeff(&k);
        let cb = b.coeff(&k);
        if ca != cb {
            return Some((k, ca, cb));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// identity-3-16: framing/norm calibration
// ---------------------------------------------------------------------------

/// (qt)^{(‖λᵗ‖²-‖λ‖²)/2} P_{λᵗ}(q,t^{-1}) P_λ(t^{-1},q) · ⟨O_λ|O_λ⟩ = (-1)^{|λ|}.
/// The commonly quoted variant carries an extra (qt)^{|λ|/2}; the calibrated
/// constant is re-verified here and the other variant is reported.
pub fn run_identity_316(opts: &SuiteOptions) -> Result<Report> {
    let seeds = opts.seeds();
    let max = 5u32;
    let mut report = Report::new(SuiteId::Identity316, seeds.clone(), format!("|λ| ≤ {max}"));
    let mut alt_variant_holds = true;
    for &seed in &seeds {
        let p = point_for(seed, 1, 0, 0, 0, max + 2);
        let pair1 = p.pair_q_tinv();
        let pair2 = p.pair_tinv_q();
        for lam in Partition::enumerate_up_to(max) {
            let lam_t = lam.conjugate();
            let product = p.qt_half_pow(lam_t.norm_sq() - lam.norm_sq())
                * framing_p(&lam, &pair1)?
                * framing_p(&lam_t, &pair2)?
                * macdonald_norm_o(&lam, &p);
            let sign = crate::rat::sign_pow(lam.size() as i64);
            report.cases += 1;
            if product != sign {
                report.fail(format!(
                    "λ={lam} seed={seed}: product·norm = {product} ≠ (-1)^{{|λ|}}"
                ));
            }
            if product != sign * p.qt_half_pow(lam.size() as i64) {
                alt_variant_holds = false;
            }
        }
    }
    report
        .calibration
        .insert("identity_3_16_alt_variant".into(), format!("holds: {alt_variant_holds}"));
    Ok(report)
}

// ---------------------------------------------------------------------------
// lemma-3-9 / lemma-3-10: skew-Schur operator lemmas
// ---------------------------------------------------------------------------

pub fn run_lemma_39(opts: &SuiteOptions) -> Result<Report> {
    use rand::{Rng, SeedableRng};
    let seeds = opts.seeds();
    let mut report = Report::new(SuiteId::Lemma39, seeds.clone(), "|λ|,|μ| ≤ 5".into());
    let d = 5usize;
    let fock = FockSpace::new(d);
    let shape = Shape::scalar();
    for &seed in &seeds {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pvals: Vec<Rat> =
            (0..d).map(|_| rat(rng.gen_range(-6..=6).max(1), rng.gen_range(1..=5))).collect();
        let spec_ps = PowerSumSpec::new(pvals.clone());
        let plus = VertexOpSpec {
            sign: OpSign::Plus,
            coeffs: pvals.iter().map(|c| MultiSeries::constant(&shape, c.clone())).collect(),
        };
        let minus = VertexOpSpec {
            sign: OpSign::Minus,
            coeffs: pvals.iter().map(|c| MultiSeries::constant(&shape, c.clone())).collect(),
        };
        for lam in Partition::enumerate_up_to(d as u32) {
            for mu in Partition::enumerate_up_to(d as u32) {
                let expect = skew_schur(&lam, &mu, &spec_ps)?;
                let ket = crate::fock::apply_word(
                    &fock,
                    &[WordOp::Exp(plus.clone())],
                    &crate::fock::schur_vector(&fock, &shape, &lam),
                );
                let got =
                    crate::fock::hall_pair(&fock, &crate::fock::schur_vector(&fock, &shape, &mu), &ket)
                        .constant_term();
                report.cases += 1;
                if got != expect {
                    report.fail(format!("⟨s_{mu}|E₊|s_{lam}⟩ = {got} ≠ {expect} (seed {seed})"));
                }
                // transposed variant
                let ket2 = crate::fock::apply_word(
                    &fock,
                    &[WordOp::Exp(minus.clone())],
                    &crate::fock::schur_vector(&fock, &shape, &mu),
                );
                let got2 =
                    crate::fock::hall_pair(&fock, &crate::fock::schur_vector(&fock, &shape, &lam), &ket2)
                        .constant_term();
                report.cases += 1;
                if got2 != expect {
                    report.fail(format!("⟨s_{lam}|E₋|s_{mu}⟩ = {got2} ≠ {expect} (seed {seed})"));
                }
            }
        }
    }
    Ok(report)
}

pub fn run_lemma_310(opts: &SuiteOptions) -> Result<Report> {
    let seeds = opts.seeds();
    let mut report =
        Report::new(SuiteId::Lemma310, seeds.clone(), "|ν| ≤ 5, n ≤ 6; elements |λ|,|μ|,|ν| ≤ 4".into());
    for &seed in &seeds {
        let p = point_for(seed, 1, 0, 0, 0, 8);
        let pair = p.pair_qt();
        // Closed forms for the principal power sums.
        for nu in Partition::enumerate_up_to(5) {
            let up = PrincipalAlphabet::of_kind(PrincipalKind::QRhoTNu, &nu, &pair, Rat::one())
                .power_sums(6)?;
            let down =
                PrincipalAlphabet::of_kind(PrincipalKind::TRhoQNegNuT, &nu, &pair, Rat::one())
                    .power_sums(6)?;
            for n in 1..=6i64 {
                let tfac = pow_i(p.t_half(), n) - pow_i(p.t_half(), -n);
                let qfac = pow_i(p.q_half(), n) - pow_i(p.q_half(), -n);
                let up_expect = -p.qt_half_pow(n) * &tfac * h_eigen(n, &nu, &p);
                let down_expect = -p.qt_half_pow(-n) * &qfac * h_eigen(-n, &nu, &p);
                report.cases += 2;
                if up.p(n as usize) != &up_expect {
                    report.fail(format!("p_{n}(q^-ρ t^ν) closed form, ν={nu}, seed={seed}"));
                }
                if down.p(n as usize) != &down_expect {
                    report.fail(format!("p_{n}(q^-ν^t t^ρ) closed form, ν={nu}, seed={seed}"));
                }
            }
        }
        // Eigenvalue-reduced exponentials reproduce skew Schur values at the
        // principal specializations.
        let d = 4usize;
        let fock = FockSpace::new(d);
        let shape = Shape::scalar();
        let z = Monomial::constant(&shape, Rat::one());
        for nu in Partition::enumerate_up_to(4) {
            let spec_x = principal_spec(OpSign::Plus, AlphabetFamily::X, &nu, &z, &p, d, &shape);
            let spec_y = principal_spec(OpSign::Plus, AlphabetFamily::Y, &nu, &z, &p, d, &shape);
            let ps_x = PrincipalAlphabet::of_kind(PrincipalKind::QRhoTNu, &nu, &pair, Rat::one())
                .power_sums(d)?;
            let ps_y =
                PrincipalAlphabet::of_kind(PrincipalKind::TRhoQNegNuT, &nu, &pair, Rat::one())
                    .power_sums(d)?;
            for lam in Partition::enumerate_up_to(d as u32) {
                for mu in Partition::enumerate_up_to(lam.size() as u32) {
                    for (spec, ps, tag) in
                        [(&spec_x, &ps_x, "q^-ρ t^ν"), (&spec_y, &ps_y, "q^-ν^t t^ρ")]
                    {
                        let expect = skew_schur(&lam, &mu, ps)?;
                        let ket = crate::fock::apply_word(
                            &fock,
                            &[WordOp::Exp((*spec).clone())],
                            &crate::fock::schur_vector(&fock, &shape, &lam),
                        );
                        let got = crate::fock::hall_pair(
                            &fock,
                            &crate::fock::schur_vector(&fock, &shape, &mu),
                            &ket,
                        )
                        .constant_term();
                        report.cases += 1;
                        if got != expect {
                            report.fail(format!(
                                "matrix element vs s_{{λ/μ}}({tag}): λ={lam} μ={mu} ν={nu} seed={seed}"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

pub fn run_oracle_contraction(opts: &SuiteOptions) -> Result<Report> {
    use rand::{Rng, SeedableRng};
    let seeds = opts.seeds();
    let mut report =
        Report::new(SuiteId::OracleContraction, seeds.clone(), "D ≤ 6, words of 4 exponentials".into());
    let d = 6usize;
    let fock = FockSpace::new(d);
    let shape = Shape::new(vec![(Var::Q, 0, d as i32)]);
    for &seed in &seeds {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(7919));
        for case in 0..4 {
            let mut word = Vec::new();
            let mut specs = Vec::new();
            for k in 0..4usize {
                let sign = if (k + case) % 2 == 0 { OpSign::Plus } else { OpSign::Minus };
                let coeffs: Vec<MultiSeries> = (1..=d as i32)
                    .map(|n| {
                        let mut s = MultiSeries::zero(&shape);
                        s.add_term(vec![n], rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
                        s
                    })
                    .collect();
                let spec = VertexOpSpec { sign, coeffs };
                specs.push(spec.clone());
                word.push(WordOp::Exp(spec));
            }
            let engine = vacuum_element_engine(&fock, &shape, &word);
            let oracle = contraction_oracle(&specs, &shape)?;
            report.cases += 1;
            if engine != oracle {
                report.fail(format!("contraction word seed={seed} case={case}"));
            }
        }
    }
    Ok(report)
}

pub fn run_oracle_trace(opts: &SuiteOptions) -> Result<Report> {
    use rand::{Rng, SeedableRng};
    let seeds = opts.seeds();
    let mut report = Report::new(SuiteId::OracleTrace, seeds.clone(), "D ≤ 5".into());
    let d = 5usize;
    let fock = FockSpace::new(d);
    let shape = Shape::new(vec![(Var::Q, 0, d as i32)]);
    let grading = Monomial::var(&shape, Var::Q, Rat::one());
    for &seed in &seeds {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(104729));
        for case in 0..4 {
            // Annihilation coefficients carry Q^n so every contraction is
            // graded and the truncations agree term by term.
            let plus = VertexOpSpec {
                sign: OpSign::Plus,
                coeffs: (1..=d as i32)
                    .map(|n| {
                        let mut s = MultiSeries::zero(&shape);
                        s.add_term(vec![n], rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
                        s
                    })
                    .collect(),
            };
            let minus = VertexOpSpec {
                sign: OpSign::Minus,
                coeffs: (1..=d)
                    .map(|_| {
                        MultiSeries::constant(
                            &shape,
                            rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
                        )
                    })
                    .collect(),
            };
            let word = vec![
                WordOp::Grade(grading.clone()),
                WordOp::Exp(plus.clone()),
                WordOp::Exp(minus.clone()),
            ];
            let engine = graded_trace_engine(&fock, &shape, &word);
            let oracle = graded_trace_oracle(&plus, &minus, &grading, &shape, d)?;
            report.cases += 1;
            if engine != oracle {
                report.fail(format!("graded trace seed={seed} case={case}"));
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// thm-3-5 / thm-3-17 / pref-dir: operator identities and slicing
// ---------------------------------------------------------------------------

fn thm35_config(seed: u64, r: usize, opts: &SuiteOptions) -> Result<(NetworkConfig, RrCaps)> {
    let cap_a = opts.cap_a.unwrap_or(4);
    let cap_b = opts.cap_b.unwrap_or(2);
    let max_leg = 3;
    let point = point_for(seed, r, 0, cap_a, cap_b, max_leg);
    let cfg = NetworkConfig::new(
        r,
        Direction::Horizontal,
        0,
        cap_a,
        vec![cap_b; r - 1],
        max_leg,
        point,
    )?;
    let caps = RrCaps { cap_q: 0, cap_a, cap_b: vec![cap_b; r - 1] };
    Ok((cfg, caps))
}

/// Horizontal operator diagonal elements against the network chain:
/// rr_h_diagonal(λ⃗) = (-1)^{|λ⃗|} Z_r(q,t^{-1}; A, B⃗)_{λ⃗}.
pub fn run_thm_35(opts: &SuiteOptions) -> Result<Report> {
    let seeds = opts.seeds();
    let ranks: Vec<usize> = match opts.rank {
        Some(r) => vec![r],
        None => vec![1, 2],
    };
    let cap_a = opts.cap_a.unwrap_or(4);
    let cap_b = opts.cap_b.unwrap_or(2);
    let mut report = Report::new(
        SuiteId::Thm35,
        seeds.clone(),
        format!("r ∈ {ranks:?}, |λ⃗| ≤ 3, A ≤ {cap_a}, B ≤ {cap_b}"),
    );
    for &seed in &seeds {
        for &r in &ranks {
            let (cfg, caps) = thm35_config(seed, r, opts)?;
            for legs in PartitionTuple::tuples_up_to(r, 3) {
                let net = zr_fixed_legs(&legs, &cfg)?;
                let operator = rr_h_diagonal(&legs, &cfg.point, &caps)?;
                let expect = net.scale(&crate::rat::sign_pow(legs.size() as i64));
                report.cases += 1;
                if let Some((e, a, b)) = first_mismatch(&operator, &expect, |_| true) {
                    report.fail(format!(
                        "r={r} λ⃗={legs:?} seed={seed} exp {e:?}: operator {a} ≠ network {b}"
                    ));
                }
            }
        }
    }
    Ok(report)
}

fn map_v_flip(shape: &Shape, r: usize) -> Vec<Monomial> {
    let mut map = vec![
        Monomial::var(shape, Var::Q, Rat::one()),
        Monomial::var(shape, Var::A, Rat::one()),
    ];
    for k in 1..r {
        map.push(Monomial::var(shape, Var::B(k as u8), -Rat::one()));
    }
    map
}

/// Trace identities: rr_h_trace = zr_full∘(Q ↦ -Q) and
/// rr_v_trace = zr_full∘(B ↦ -B); the two traces therefore agree after the
/// composite matching (Q ↦ -Q, B ↦ -B), which is also checked directly.
pub fn run_thm_317(opts: &SuiteOptions) -> Result<Report> {
    let seeds = opts.seeds();
    let ranks: Vec<usize> = match opts.rank {
        Some(r) => vec![r],
        None => vec![1, 2],
    };
    let cap_q = opts.cap_q.unwrap_or(3).min(3);
    let cap_a = opts.cap_a.unwrap_or(3).min(3);
    let cap_b = opts.cap_b.unwrap_or(3).min(3);
    let mut report = Report::new(
        SuiteId::Thm317,
        seeds.clone(),
        format!("r ∈ {ranks:?}, Q ≤ {cap_q}, A ≤ {cap_a}, B ≤ {cap_b}"),
    );
    for &seed in &seeds {
        for &r in &ranks {
            let point = point_for(seed, r, cap_q, cap_a, cap_b, cap_q);
            let cfg = NetworkConfig::new(
                r,
                Direction::Horizontal,
                cap_q,
                cap_a,
                vec![cap_b; r - 1],
                cap_q,
                point.clone(),
            )?;
            let caps = RrCaps { cap_q, cap_a, cap_b: vec![cap_b; r - 1] };
            let net = zr_full(&cfg)?;

            // Horizontal trace: Q ↦ -Q.
            let h_trace = rr_h_trace(r, &point, &caps)?;
            let h_shape = h_trace.shape().clone();
            let mut map_h = vec![Monomial::var(&h_shape, Var::Q, -Rat::one())];
            map_h.push(Monomial::var(&h_shape, Var::A, Rat::one()));
            for k in 1..r {
                map_h.push(Monomial::var(&h_shape, Var::B(k as u8), Rat::one()));
            }
            let net_h = net.substitute(&h_shape, &map_h);
            report.cases += 1;
            if let Some((e, a, b)) = first_mismatch(&h_trace, &net_h, |_| true) {
                report.fail(format!(
                    "H-trace r={r} seed={seed} exp {e:?}: trace {a} ≠ network {b}"
                ));
            }

            // Vertical trace: B ↦ -B; compare on the window certified on the
            // network side (A-exp ≤ capA; the trace's own A window is wider).
            let v_trace = rr_v_trace(r, &point, &caps)?;
            let v_shape = v_trace.shape().clone();
            let mut map_v = vec![
                Monomial::var(&v_shape, Var::Q, Rat::one()),
                Monomial::var(&v_shape, Var::A, Rat::one()),
            ];
            for k in 1..r {
                map_v.push(Monomial::var(&v_shape, Var::B(k as u8), -Rat::one()));
            }
            let net_v = net.substitute(&v_shape, &map_v);
            report.cases += 1;
            let ok_window = |e: &[i32]| e[1] <= cap_a as i32;
            if let Some((e, a, b)) = first_mismatch(&v_trace, &net_v, ok_window) {
                report.fail(format!(
                    "V-trace r={r} seed={seed} exp {e:?}: trace {a} ≠ network {b}"
                ));
            }

            // Direct trace agreement after the composite matching:
            // rr_h_trace ∘ (Q ↦ -Q) = rr_v_trace ∘ (B ↦ -B).
            let mut map_hv = vec![
                Monomial::var(&v_shape, Var::Q, -Rat::one()),
                Monomial::var(&v_shape, Var::A, Rat::one()),
            ];
            for k in 1..r {
                map_hv.push(Monomial::var(&v_shape, Var::B(k as u8), Rat::one()));
            }
            let h_matched = h_trace.substitute(&v_shape, &map_hv);
            let v_matched = v_trace.substitute(&v_shape, &map_v_flip(&v_shape, r));
            report.cases += 1;
            if let Some((e, a, b)) = first_mismatch(&h_matched, &v_matched, ok_window) {
                report.fail(format!(
                    "H-vs-V traces r={r} seed={seed} exp {e:?}: H {a} ≠ V {b}"
                ));
            }
        }
    }
    Ok(report)
}

/// Preferred-direction independence: horizontal and vertical assemblies of
/// the same chain agree coefficient-exactly.
pub fn run_pref_dir(opts: &SuiteOptions) -> Result<Report> {
    let seeds = opts.seeds();
    let ranks: Vec<usize> = match opts.rank {
        Some(r) => vec![r],
        None => vec![1, 2],
    };
    let cap_q = opts.cap_q.unwrap_or(3).min(3);
    let cap_a = opts.cap_a.unwrap_or(3).min(3);
    let cap_b = opts.cap_b.unwrap_or(2);
    let mut report = Report::new(
        SuiteId::PrefDir,
        seeds.clone(),
        format!("r ∈ {ranks:?}, Q ≤ {cap_q}, A ≤ {cap_a}, B ≤ {cap_b}"),
    );
    for &seed in &seeds {
        for &r in &ranks {
            let point = point_for(seed, r, cap_q, cap_a, cap_b, cap_q);
            let mk = |dir| {
                NetworkConfig::new(r, dir, cap_q, cap_a, vec![cap_b; r - 1], cap_q, point.clone())
            };
            let h = zr_full(&mk(Direction::Horizontal)?)?;
            let v = zr_full(&mk(Direction::Vertical)?)?;
            report.cases += 1;
            if let Some((e, a, b)) = first_mismatch(&h, &v, |_| true) {
                report.fail(format!("r={r} seed={seed} exp {e:?}: H {a} ≠ V {b}"));
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// prop-3-4: localization genus vs network
// ---------------------------------------------------------------------------

/// Per-size factor and genus-variable rescale matching the network to the
/// localization genus: Z_λ/Z_∅(A) = (-1/√qt)^{|λ|} ∧-ratio(m)|_{m = -√qt A},
/// equivalently χ(Q, m) = normalizedZr ∘ (Q ↦ -√qt Q, A ↦ -m/√qt).
fn prop34_q_factor(p: &ParamPoint) -> Rat {
    -Rat::one() / (p.q_half() * p.t_half())
}

fn prop34_m_rescale(p: &ParamPoint) -> Rat {
    -(p.q_half() * p.t_half())
}

pub fn run_prop_34(opts: &SuiteOptions) -> Result<Report> {
    let seeds = opts.seeds();
    let conv = crate::instanton::CALIBRATED_CONVENTION;
    let mut report = Report::new(
        SuiteId::Prop34,
        seeds.clone(),
        "r=1: Q ≤ 3, m ≤ 3, exact; r=2: framing ratios are not finitely expandable (diagnostic)".into(),
    );
    for &seed in &seeds {
        // Rank 1: per-leg ratios and the assembled genus, coefficient-exact.
        let cap_q = opts.cap_q.unwrap_or(3);
        let cap_m = opts.cap_m.unwrap_or(3).max(opts.cap_a.unwrap_or(3));
        let point = point_for(seed, 1, cap_q, cap_m, 0, cap_q);
        let cfg = NetworkConfig::new(
            1,
            Direction::Horizontal,
            cap_q,
            cap_m,
            vec![],
            cap_q,
            point.clone(),
        )?;
        let factor = prop34_q_factor(&point);
        let rescale = prop34_m_rescale(&point);
        let pert_inv = zr_fixed_legs(&PartitionTuple::empty(1), &cfg)?.invert()?;
        for lam in Partition::enumerate_up_to(cap_q) {
            let legs = PartitionTuple::new(vec![lam.clone()]);
            let net_ratio = zr_fixed_legs(&legs, &cfg)?.mul(&pert_inv);
            let chi = chi_y_ratio(&legs, &point, cap_m, conv)?;
            let scale = pow_i(&factor, lam.size() as i64);
            report.cases += 1;
            let mut detail = String::new();
            for a in 0..=cap_m as i32 {
                let lhs = net_ratio.coeff(&[a]);
                let rhs = chi.coeff(&[a]) * &scale * pow_i(&rescale, a as i64);
                if lhs != rhs {
                    let _ = write!(detail, "A^{a}: net {lhs} vs χ {rhs}");
                    break;
                }
            }
            if !detail.is_empty() {
                report.fail(format!("r=1 λ={lam} seed={seed}: {detail}"));
            }
        }
        // Genus level: χ(Q, m) = normalizedZr ∘ (Q ↦ -√qt Q, A ↦ -√qt·m)
        // compared in the common {Q, genus-variable} grid.
        let genus = chi_y_genus(1, cap_q, cap_m, &point, conv)?;
        let net = normalized_zr(&cfg)?;
        report.cases += 1;
        let mut genus_detail = String::new();
        for n in 0..=cap_q as i32 {
            for a in 0..=cap_m as i32 {
                let lhs = genus.coeff(&[n, a]);
                let rhs = net.coeff(&[n, a])
                    * pow_i(&(Rat::one() / &factor), n as i64)
                    * pow_i(&(Rat::one() / &rescale), a as i64);
                if lhs != rhs && genus_detail.is_empty() {
                    let _ = write!(genus_detail, "Q^{n} m^{a}: χ {lhs} vs net {rhs}");
                }
            }
        }
        if !genus_detail.is_empty() {
            report.fail(format!("r=1 genus seed={seed}: {genus_detail}"));
        }
    }
    // Rank 2 diagnostic: the fixed-point factors carry framing-ratio weights
    // a_{k+1}/a_k = A·B_k whose localization factors have no constant term
    // in any (A, B)-power-series direction, while the network ratio does;
    // the identity therefore holds as a rational-function identity after
    // resummation but has no finite coefficient-exact bigraded form. The
    // diagnostic confirms the obstruction is present (and would flag a
    // change in behavior).
    {
        let seed = seeds[0];
        let point = point_for(seed, 2, 1, 2, 2, 1);
        let cfg =
            NetworkConfig::new(2, Direction::Horizontal, 1, 2, vec![2], 1, point.clone())?;
        let shape = cfg.fixed_leg_shape();
        let pert_inv = zr_fixed_legs(&PartitionTuple::empty(2), &cfg)?.invert()?;
        let legs = PartitionTuple::new(vec![Partition::empty(), Partition::of(&[1])]);
        let net_ratio = zr_fixed_legs(&legs, &cfg)?.mul(&pert_inv);
        let chi = chi_y_ratio_formal(&legs, &point, &shape, conv)?;
        report.cases += 1;
        let net00 = net_ratio.coeff(&shape.zero_exps());
        let chi00 = chi.coeff(&shape.zero_exps());
        if net00.is_zero() || !chi00.is_zero() {
            report.fail(format!(
                "rank-2 obstruction changed shape: net00 {net00}, χ00 {chi00}"
            ));
        }
        report.calibration.insert(
            "prop_3_4_rank2".into(),
            "no finite bigraded form: framing factors vanish at a_{k+1}/a_k → 0 or ∞ \
             while the network ratio has a nonzero constant term; rank-2 content is \
             certified through thm-3-5, thm-3-17 and pref-dir instead"
                .into(),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

/// Scan the candidate conventions and report which ones pass their oracles.
/// The constants asserted by the other suites must come out as recorded by
/// `calibration_record`.
pub fn run_calibration(opts: &SuiteOptions) -> Result<Report> {
    let seeds = opts.seeds();
    let mut report = Report::new(SuiteId::Calibration, seeds.clone(), "desk-size scans".into());
    let seed = seeds[0];

    // identity (3.16) constant: scan (qt)^{e |λ|/2} for e ∈ {0, 1}.
    {
        let p = point_for(seed, 1, 0, 0, 0, 6);
        let pair1 = p.pair_q_tinv();
        let pair2 = p.pair_tinv_q();
        let mut passing = Vec::new();
        for e in [0i64, 1, -1] {
            let mut ok = true;
            for lam in Partition::enumerate_up_to(4) {
                let lam_t = lam.conjugate();
                let product = p.qt_half_pow(lam_t.norm_sq() - lam.norm_sq())
                    * framing_p(&lam, &pair1)?
                    * framing_p(&lam_t, &pair2)?
                    * macdonald_norm_o(&lam, &p);
                let rhs =
                    crate::rat::sign_pow(lam.size() as i64) * p.qt_half_pow(e * lam.size() as i64);
                if product != rhs {
                    ok = false;
                    break;
                }
            }
            if ok {
                passing.push(format!("(qt)^{{{e}|λ|/2}}"));
            }
            report.cases += 1;
        }
        report
            .calibration
            .insert("identity_3_16_scan".into(), format!("passing: {passing:?}"));
        if passing != vec!["(qt)^{0|λ|/2}".to_string()] {
            report.fail(format!("identity 3.16 scan unexpected: {passing:?}"));
        }
    }

    // thm-3-5 normalizer: scan sign (±1) and (qt)^{e|λ⃗|/2}, e ∈ {-1,0,1},
    // and the gluing substitution (B vs AB) at r = 2, |λ⃗| = 1.
    {
        let r = 2;
        let (cfg, caps) = thm35_config(seed, r, &SuiteOptions {
            cap_a: Some(2),
            cap_b: Some(2),
            ..Default::default()
        })?;
        let legs = PartitionTuple::new(vec![Partition::of(&[1]), Partition::empty()]);
        let net = zr_fixed_legs(&legs, &cfg)?;
        let operator = rr_h_diagonal(&legs, &cfg.point, &caps)?;
        let shape = operator.shape().clone();
        let mut passing = Vec::new();
        for (sname, s) in [("-1", -Rat::one()), ("+1", Rat::one())] {
            for e in [-1i64, 0, 1] {
                for (bname, bsub) in [("B", false), ("AB", true)] {
                    let scale = pow_i(&s, legs.size() as i64)
                        * cfg.point.qt_half_pow(e * legs.size() as i64);
                    let candidate = if bsub {
                        // B_k ↦ A·B_k on the network side.
                        let mut map = vec![Monomial::var(&shape, Var::A, Rat::one())];
                        for k in 1..r {
                            let mut exps = shape.zero_exps();
                            exps[shape.index_of(Var::A).unwrap()] = 1;
                            exps[shape.index_of(Var::B(k as u8)).unwrap()] = 1;
                            map.push(Monomial { coeff: Rat::one(), exps });
                        }
                        net.substitute(&shape, &map)
                    } else {
                        net.clone()
                    }
                    .scale(&scale);
                    report.cases += 1;
                    if first_mismatch(&operator, &candidate, |_| true).is_none() {
                        passing.push(format!("{sname}^|λ⃗| (qt)^{{{e}|λ⃗|/2}} with {bname}"));
                    }
                }
            }
        }
        report.calibration.insert("thm_3_5_scan".into(), format!("passing: {passing:?}"));
        if !passing.contains(&"-1^|λ⃗| (qt)^{0|λ⃗|/2} with B".to_string()) {
            report.fail(format!("thm 3.5 scan unexpected: {passing:?}"));
        }
    }

    // Tangent-character convention: Hilb¹, symplectic pairing and the
    // localization oracle at rank 1, |λ| ≤ 2.
    {
        let cap_a = 3u32;
        let point = point_for(seed, 1, 2, cap_a, 0, 2);
        let cfg =
            NetworkConfig::new(1, Direction::Horizontal, 2, cap_a, vec![], 2, point.clone())?;
        let pert_inv = zr_fixed_legs(&PartitionTuple::empty(1), &cfg)?.invert()?;
        let factor = prop34_q_factor(&point);
        let mut passing = Vec::new();
        for conv in TangentConvention::ALL {
            let mut ok = true;
            // Hilb¹ tangent = {q, t}.
            let one_box = PartitionTuple::new(vec![Partition::of(&[1])]);
            let mut exps: Vec<(i64, i64)> = tangent_character(&one_box, conv)
                .weights()
                .iter()
                .map(|w| (w.e_q, w.e_t))
                .collect();
            exps.sort();
            ok &= exps == vec![(0, 1), (1, 0)];
            // Localization oracle with the calibrated m-rescale.
            let rescale = -(point.q_half() * point.t_half());
            for lam in Partition::enumerate_up_to(2) {
                let legs = PartitionTuple::new(vec![lam.clone()]);
                let net_ratio = zr_fixed_legs(&legs, &cfg)?.mul(&pert_inv);
                let chi = chi_y_ratio(&legs, &point, cap_a, conv)?;
                let scale = pow_i(&factor, lam.size() as i64);
                for a in 0..=cap_a as i32 {
                    let rhs = chi.coeff(&[a]) * &scale * pow_i(&rescale, a as i64);
                    if net_ratio.coeff(&[a]) != rhs {
                        ok = false;
                        break;
                    }
                }
            }
            report.cases += 1;
            if ok {
                passing.push(conv.name().to_string());
            }
        }
        report
            .calibration
            .insert("tangent_convention_scan".into(), format!("passing: {passing:?}"));
        if !passing.contains(&crate::instanton::CALIBRATED_CONVENTION.name().to_string()) {
            report.fail(format!("tangent convention scan unexpected: {passing:?}"));
        }
    }

    Ok(report)
}

pub fn run_suite(id: SuiteId, opts: &SuiteOptions) -> Result<Report> {
    match id {
        SuiteId::Identity316 => run_identity_316(opts),
        SuiteId::Lemma39 => run_lemma_39(opts),
        SuiteId::Lemma310 => run_lemma_310(opts),
        SuiteId::OracleContraction => run_oracle_contraction(opts),
        SuiteId::OracleTrace => run_oracle_trace(opts),
        SuiteId::Thm35 => run_thm_35(opts),
        SuiteId::Thm317 => run_thm_317(opts),
        SuiteId::PrefDir => run_pref_dir(opts),
        SuiteId::Prop34 => run_prop_34(opts),
        SuiteId::Calibration => run_calibration(opts),
    }
}
