//! The refined vertex and glued networks: four-point functions for both
//! preferred directions, the rank-r adjoint chain, and normalization by the
//! perturbative term.
//!
//! Formulas are coded with the literal printed argument orders. The chain
//! object evaluated here is Z_r(q, t^{-1}; Q, A, B⃗): the first vertex of
//! each block takes the pair (q, t^{-1}) and the second (t^{-1}, q), with
//! (q, t) the values of the ambient parameter point. Nothing substitutes
//! t -> t^{-1} behind the caller's back.

use crate::error::{EngineError, Result};
use crate::params::{ParamPair, ParamPoint};
use crate::partitions::{Partition, PartitionTuple};
use crate::rat::{pow_i, Rat};
use crate::series::{Monomial, MultiSeries, Shape, Var};
use crate::symfun::{framing_p, skew_schur, PrincipalAlphabet, PrincipalKind};
use num::traits::{One, Zero};
use std::collections::HashMap;

/// Which legs of the four-point blocks are preferred when the chain is
/// assembled.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// Caps and parameters for a network computation.
#[derive(Clone, Debug)]
pub struct NetworkConfig {
    pub rank: usize,
    pub direction: Direction,
    pub cap_q: u32,
    pub cap_a: u32,
    /// One cap per internal gluing variable B_1..B_{r-1}.
    pub cap_b: Vec<u32>,
    /// Largest external leg size the computation will see.
    pub max_leg: u32,
    pub point: ParamPoint,
}

impl NetworkConfig {
    pub fn new(
        rank: usize,
        direction: Direction,
        cap_q: u32,
        cap_a: u32,
        cap_b: Vec<u32>,
        max_leg: u32,
        point: ParamPoint,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(EngineError::InvalidConfig("rank must be at least 1".into()));
        }
        if cap_b.len() + 1 != rank {
            return Err(EngineError::InvalidConfig(format!(
                "need {} B-caps for rank {rank}",
                rank - 1
            )));
        }
        let needed = 4 * (cap_q + cap_a + cap_b.iter().sum::<u32>() + max_leg);
        if point.genericity_bound() < needed {
            return Err(EngineError::InvalidConfig(format!(
                "genericity bound {} below required {needed}",
                point.genericity_bound()
            )));
        }
        Ok(NetworkConfig { rank, direction, cap_q, cap_a, cap_b, max_leg, point })
    }

    pub fn cap_b_total(&self) -> u32 {
        self.cap_b.iter().sum()
    }

    fn pair1(&self) -> ParamPair {
        self.point.pair_q_tinv()
    }

    fn pair2(&self) -> ParamPair {
        self.point.pair_tinv_q()
    }

    /// Result shape of the fixed-leg chain: {A, B_1..B_{r-1}}.
    pub fn fixed_leg_shape(&self) -> Shape {
        let mut spec = vec![(Var::A, 0, self.cap_a as i32)];
        for (k, &cb) in self.cap_b.iter().enumerate() {
            spec.push((Var::B(k as u8 + 1), 0, cb as i32));
        }
        Shape::new(spec)
    }

    /// Result shape of the full chain: {Q, A, B_1..B_{r-1}}.
    pub fn full_shape(&self) -> Shape {
        let mut spec = vec![(Var::Q, 0, self.cap_q as i32), (Var::A, 0, self.cap_a as i32)];
        for (k, &cb) in self.cap_b.iter().enumerate() {
            spec.push((Var::B(k as u8 + 1), 0, cb as i32));
        }
        Shape::new(spec)
    }
}

/// External legs of the chain; the tuple length must equal the rank.
#[derive(Clone, Debug)]
pub struct LegAssignment {
    pub legs: PartitionTuple,
}

impl LegAssignment {
    pub fn new(legs: PartitionTuple, rank: usize) -> Result<Self> {
        if legs.rank() != rank {
            return Err(EngineError::RankMismatch { got: legs.rank(), want: rank });
        }
        Ok(LegAssignment { legs })
    }
}

/// The refined vertex
/// C_{λμν}(q,t) = (t/q)^{(‖μ‖²+‖ν‖²)/2} q^{κ(μ)/2} P_{ν^t}(q,t)
///                 Σ_η (t/q)^{(|η|+|λ|-|μ|)/2} s_{λ^t/η}(q^{-ρ}t^{-ν}) s_{μ/η}(t^{-ρ}q^{-ν^t}),
/// evaluated exactly at the given argument pair.
pub fn refined_vertex(
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    pair: &ParamPair,
) -> Result<Rat> {
    let t_over_q_half = &pair.t_half / &pair.q_half;
    let mut pref = pow_i(&t_over_q_half, mu.norm_sq() + nu.norm_sq());
    pref *= pair.q_half_pow(mu.kappa());
    pref *= framing_p(nu, pair)?;

    let lam_t = lambda.conjugate();
    let deg = lambda.size().max(mu.size()) as usize;
    let x_spec = PrincipalAlphabet::of_kind(PrincipalKind::QRhoTNegNu, nu, pair, Rat::one())
        .power_sums(deg)?;
    let y_spec = PrincipalAlphabet::of_kind(PrincipalKind::TNegRhoQNegNuT, nu, pair, Rat::one())
        .power_sums(deg)?;

    let mut sum = Rat::zero();
    let envelope = lam_t.meet(mu);
    for eta in Partition::sub_partitions(&envelope) {
        let s1 = skew_schur(&lam_t, &eta, &x_spec)?;
        if s1.is_zero() {
            continue;
        }
        let s2 = skew_schur(mu, &eta, &y_spec)?;
        if s2.is_zero() {
            continue;
        }
        let e = eta.size() as i64 + lambda.size() as i64 - mu.size() as i64;
        sum += pow_i(&t_over_q_half, e) * s1 * s2;
    }
    Ok(pref * sum)
}

/// Memoized vertex evaluations for the two printed argument pairs of a
/// chain computation.
pub struct VertexCache {
    pair1: ParamPair,
    pair2: ParamPair,
    memo: HashMap<(Partition, Partition, Partition, bool), Rat>,
}

impl VertexCache {
    pub fn new(point: &ParamPoint) -> Self {
        VertexCache {
            pair1: point.pair_q_tinv(),
            pair2: point.pair_tinv_q(),
            memo: HashMap::new(),
        }
    }

    fn get(
        &mut self,
        lambda: &Partition,
        mu: &Partition,
        nu: &Partition,
        second_pair: bool,
    ) -> Result<Rat> {
        let key = (lambda.clone(), mu.clone(), nu.clone(), second_pair);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let pair = if second_pair { &self.pair2 } else { &self.pair1 };
        let v = refined_vertex(lambda, mu, nu, pair)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }
}

/// Horizontal-preferred four-point block:
/// Z^H_{ν₁,ν₂ᵗ}(q,t^{-1};Q,A) = Σ_{λ,μ} A^{|μ|} Q^{|λ|} C_{μν₁λ}(q,t^{-1}) C_{μᵗν₂ᵗλᵗ}(t^{-1},q).
pub fn four_point_h(nu1: &Partition, nu2t: &Partition, cfg: &NetworkConfig) -> Result<MultiSeries> {
    let shape = Shape::new(vec![(Var::Q, 0, cfg.cap_q as i32), (Var::A, 0, cfg.cap_a as i32)]);
    let mut cache = VertexCache::new(&cfg.point);
    let mut out = MultiSeries::zero(&shape);
    for lam in Partition::enumerate_up_to(cfg.cap_q) {
        let lam_t = lam.conjugate();
        for mu in Partition::enumerate_up_to(cfg.cap_a) {
            let c1 = cache.get(&mu, nu1, &lam, false)?;
            let c2 = cache.get(&mu.conjugate(), nu2t, &lam_t, true)?;
            out.add_term(vec![lam.size() as i32, mu.size() as i32], c1 * c2);
        }
    }
    Ok(out)
}

/// The same block assembled from the skew-Schur reorganization: per λ a
/// Macdonald-norm factor times Cauchy-type sums over μ, η₁, η₂ at the
/// λ-dependent principal alphabets. The reorganized display drops a
/// leg-dependent monomial that telescopes along the chain; it is restored
/// here so the two code paths agree term by term.
pub fn four_point_h_skew(
    nu1: &Partition,
    nu2t: &Partition,
    cfg: &NetworkConfig,
) -> Result<MultiSeries> {
    let shape = Shape::new(vec![(Var::Q, 0, cfg.cap_q as i32), (Var::A, 0, cfg.cap_a as i32)]);
    let point = &cfg.point;
    let qt_pair = point.pair_qt();
    let pair1 = cfg.pair1();
    let pair2 = cfg.pair2();
    let nu1_t = nu1.conjugate();
    let nu2 = nu2t.conjugate();

    // Restored leg prefactor q^{(‖ν₂ᵗ‖²-‖ν₁ᵗ‖²)/2} t^{(‖ν₂‖²-‖ν₁‖²)/2}.
    let leg_pref = pow_i(point.q_half(), nu2t.norm_sq() - nu1_t.norm_sq())
        * pow_i(point.t_half(), nu2.norm_sq() - nu1.norm_sq());

    let mut out = MultiSeries::zero(&shape);
    for lam in Partition::enumerate_up_to(cfg.cap_q) {
        let lam_t = lam.conjugate();
        // (qt)^{(‖λᵗ‖²-‖λ‖²)/2} P_{λᵗ}(q,t^{-1}) P_λ(t^{-1},q)
        let mac = point.qt_half_pow(lam_t.norm_sq() - lam.norm_sq())
            * framing_p(&lam, &pair1)?
            * framing_p(&lam_t, &pair2)?;

        let deg = (cfg.cap_a.max(cfg.max_leg) + cfg.max_leg) as usize;
        let up = PrincipalAlphabet::of_kind(PrincipalKind::QRhoTNu, &lam, &qt_pair, Rat::one())
            .power_sums(deg)?;
        let down =
            PrincipalAlphabet::of_kind(PrincipalKind::TRhoQNegNuT, &lam, &qt_pair, Rat::one())
                .power_sums(deg)?;

        for mu in Partition::enumerate_up_to(cfg.cap_a) {
            let mu_t = mu.conjugate();
            let mut inner = Rat::zero();
            for eta1 in Partition::sub_partitions(&mu_t.meet(nu1)) {
                let f1 = skew_schur(&mu_t, &eta1, &up)?;
                if f1.is_zero() {
                    continue;
                }
                let f2 = skew_schur(nu1, &eta1, &down)?;
                if f2.is_zero() {
                    continue;
                }
                for eta2 in Partition::sub_partitions(&mu.meet(nu2t)) {
                    let f3 = skew_schur(&mu, &eta2, &down)?;
                    if f3.is_zero() {
                        continue;
                    }
                    let f4 = skew_schur(nu2t, &eta2, &up)?;
                    if f4.is_zero() {
                        continue;
                    }
                    let e = eta2.size() as i64 - eta1.size() as i64 + nu1.size() as i64
                        - nu2t.size() as i64;
                    inner += point.qt_half_pow(e) * &f1 * &f2 * &f3 * &f4;
                }
            }
            out.add_term(
                vec![lam.size() as i32, mu.size() as i32],
                &leg_pref * &mac * inner,
            );
        }
    }
    Ok(out)
}

/// Vertical-preferred four-point block:
/// Z^V_{ν₁,ν₂ᵗ}(q,t^{-1};Q,A) = Σ_{λ,μ} Q^{|λ|} A^{|μ|} C_{λμν₁}(q,t^{-1}) C_{λᵗμᵗν₂ᵗ}(t^{-1},q).
pub fn four_point_v(nu1: &Partition, nu2t: &Partition, cfg: &NetworkConfig) -> Result<MultiSeries> {
    let shape = Shape::new(vec![(Var::Q, 0, cfg.cap_q as i32), (Var::A, 0, cfg.cap_a as i32)]);
    let mut cache = VertexCache::new(&cfg.point);
    let mut out = MultiSeries::zero(&shape);
    for lam in Partition::enumerate_up_to(cfg.cap_q) {
        let lam_t = lam.conjugate();
        for mu in Partition::enumerate_up_to(cfg.cap_a) {
            let c1 = cache.get(&lam, &mu, nu1, false)?;
            let c2 = cache.get(&lam_t, &mu.conjugate(), nu2t, true)?;
            out.add_term(vec![lam.size() as i32, mu.size() as i32], c1 * c2);
        }
    }
    Ok(out)
}

/// Vertical block via the skew-Schur form: prefactor
/// (qt)^{(‖ν₂ᵗ‖²-‖ν₁‖²)/2} P_{ν₁ᵗ}(q,t^{-1}) P_{ν₂}(t^{-1},q) times four skew
/// Schur factors at the ν-dependent alphabets.
pub fn four_point_v_skew(
    nu1: &Partition,
    nu2t: &Partition,
    cfg: &NetworkConfig,
) -> Result<MultiSeries> {
    let shape = Shape::new(vec![(Var::Q, 0, cfg.cap_q as i32), (Var::A, 0, cfg.cap_a as i32)]);
    let point = &cfg.point;
    let qt_pair = point.pair_qt();
    let nu2 = nu2t.conjugate();

    let pref = point.qt_half_pow(nu2t.norm_sq() - nu1.norm_sq())
        * framing_p(nu1, &cfg.pair1())?
        * framing_p(nu2t, &cfg.pair2())?;

    let deg = (cfg.cap_q.max(cfg.cap_a) + cfg.max_leg) as usize;
    let up1 = PrincipalAlphabet::of_kind(PrincipalKind::QRhoTNu, nu1, &qt_pair, Rat::one())
        .power_sums(deg)?;
    let down1 = PrincipalAlphabet::of_kind(PrincipalKind::TRhoQNegNuT, nu1, &qt_pair, Rat::one())
        .power_sums(deg)?;
    let up2 = PrincipalAlphabet::of_kind(PrincipalKind::QRhoTNu, &nu2, &qt_pair, Rat::one())
        .power_sums(deg)?;
    let down2 = PrincipalAlphabet::of_kind(PrincipalKind::TRhoQNegNuT, &nu2, &qt_pair, Rat::one())
        .power_sums(deg)?;

    let mut out = MultiSeries::zero(&shape);
    for lam in Partition::enumerate_up_to(cfg.cap_q) {
        let lam_t = lam.conjugate();
        for mu in Partition::enumerate_up_to(cfg.cap_a) {
            let mu_t = mu.conjugate();
            let mut inner = Rat::zero();
            for eta1 in Partition::sub_partitions(&lam_t.meet(&mu)) {
                let f1 = skew_schur(&lam_t, &eta1, &up1)?;
                if f1.is_zero() {
                    continue;
                }
                let f2 = skew_schur(&mu, &eta1, &down1)?;
                if f2.is_zero() {
                    continue;
                }
                for eta2 in Partition::sub_partitions(&lam.meet(&mu_t)) {
                    let f3 = skew_schur(&lam, &eta2, &down2)?;
                    if f3.is_zero() {
                        continue;
                    }
                    let f4 = skew_schur(&mu_t, &eta2, &up2)?;
                    if f4.is_zero() {
                        continue;
                    }
                    let e = eta2.size() as i64 - eta1.size() as i64;
                    inner += point.qt_half_pow(e) * &f1 * &f2 * &f3 * &f4;
                }
            }
            out.add_term(vec![lam.size() as i32, mu.size() as i32], &pref * inner);
        }
    }
    Ok(out)
}

/// Enumerate the internal vertical legs ν^{(1)}..ν^{(r-1)} within the B caps.
fn internal_leg_tuples(cap_b: &[u32]) -> Vec<Vec<Partition>> {
    let mut acc: Vec<Vec<Partition>> = vec![vec![]];
    for &cb in cap_b {
        let options = Partition::enumerate_up_to(cb);
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for prefix in &acc {
            for nu in &options {
                let mut v = prefix.clone();
                v.push(nu.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// The Q^{|λ⃗|} coefficient of the chain attached to fixed horizontal legs:
/// a chain of r four-point blocks with the horizontal legs pinned to λ⃗,
/// internal vertical legs summed with weight B_i^{|ν^{(i)}|} and internal
/// A-edges summed with weight A^{|μ⃗|}. Boundary legs are empty.
pub fn zr_fixed_legs(legs: &PartitionTuple, cfg: &NetworkConfig) -> Result<MultiSeries> {
    zr_fixed_legs_cached(legs, cfg, &mut VertexCache::new(&cfg.point))
}

fn zr_fixed_legs_cached(
    legs: &PartitionTuple,
    cfg: &NetworkConfig,
    cache: &mut VertexCache,
) -> Result<MultiSeries> {
    if legs.rank() != cfg.rank {
        return Err(EngineError::RankMismatch { got: legs.rank(), want: cfg.rank });
    }
    if legs.entries().iter().any(|p| p.size() > cfg.max_leg as u64) {
        return Err(EngineError::InvalidConfig("leg exceeds configured max_leg".into()));
    }
    let r = cfg.rank;
    let shape = cfg.fixed_leg_shape();
    let mut out = MultiSeries::zero(&shape);

    let mu_tuples = PartitionTuple::tuples_up_to(r, cfg.cap_a);
    let empty = Partition::empty();
    for nus in internal_leg_tuples(&cfg.cap_b) {
        // ν^{(0)} = ν^{(r)} = ∅ around the chain.
        let nu_ref = |i: usize| -> &Partition {
            if i == 0 || i == r {
                &empty
            } else {
                &nus[i - 1]
            }
        };
        for mus in &mu_tuples {
            let mut term = Rat::one();
            let mut ok = true;
            for i in 1..=r {
                let lam = legs.entry(i - 1);
                let mu = mus.entry(i - 1);
                let (c1, c2) = match cfg.direction {
                    Direction::Horizontal => (
                        cache.get(mu, nu_ref(i - 1), lam, false)?,
                        cache.get(&mu.conjugate(), &nu_ref(i).conjugate(), &lam.conjugate(), true)?,
                    ),
                    Direction::Vertical => (
                        cache.get(lam, mu, nu_ref(i - 1), false)?,
                        cache.get(&lam.conjugate(), &mu.conjugate(), &nu_ref(i).conjugate(), true)?,
                    ),
                };
                term *= c1;
                if term.is_zero() {
                    ok = false;
                    break;
                }
                term *= c2;
                if term.is_zero() {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let mut exps = vec![mus.size() as i32];
            for nu in &nus {
                exps.push(nu.size() as i32);
            }
            out.add_term(exps, term);
        }
    }
    Ok(out)
}

/// Full truncated chain Z_r(q, t^{-1}; Q, A, B⃗) = Σ_{λ⃗} Q^{|λ⃗|} Z_r(...)_{λ⃗}.
/// The fixed-point contributions are evaluated in parallel; exact arithmetic
/// makes the ordered reduction independent of scheduling.
pub fn zr_full(cfg: &NetworkConfig) -> Result<MultiSeries> {
    use rayon::prelude::*;
    let shape = cfg.full_shape();
    let tuples = PartitionTuple::tuples_up_to(cfg.rank, cfg.cap_q.min(cfg.max_leg));
    let parts: Vec<Result<MultiSeries>> = tuples
        .par_iter()
        .map(|legs| {
            let mut cache = VertexCache::new(&cfg.point);
            zr_fixed_legs_cached(legs, cfg, &mut cache)
        })
        .collect();
    let mut out = MultiSeries::zero(&shape);
    for (legs, part) in tuples.iter().zip(parts) {
        let embedded = part?.embed(&shape);
        let q_mono = Monomial {
            coeff: Rat::one(),
            exps: {
                let mut e = shape.zero_exps();
                e[shape.index_of(Var::Q).unwrap()] = legs.size() as i32;
                e
            },
        };
        out = out.add(&embedded.mul_monomial(&q_mono));
    }
    Ok(out)
}

/// zr_full divided by the all-empty-legs (perturbative) term; the constant
/// term of the result is 1.
pub fn normalized_zr(cfg: &NetworkConfig) -> Result<MultiSeries> {
    let shape = cfg.full_shape();
    let full = zr_full(cfg)?;
    let pert = zr_fixed_legs(&PartitionTuple::empty(cfg.rank), cfg)?.embed(&shape);
    Ok(full.mul(&pert.invert()?))
}
