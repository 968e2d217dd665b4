//! Truncated Fock-space operator engine.
//!
//! The Fock space is the algebra of symmetric functions truncated at a
//! degree cap, in the power-sum monomial basis p_μ. Heisenberg generators
//! act as α_n = n ∂/∂p_n and α_{-n} = p_n·(-). Every operator needed here
//! is a product of exponentials exp(Σ c_n α_{±n}/n) with scalar-series
//! coefficients, grading twists g^{|·|} and the ω involution; such words are
//! applied to vectors directly, never materialized as matrix products.
//!
//! Each vacuum element and graded trace is computed twice: once through the
//! truncated matrix engine and once through closed-form normal-ordering
//! oracles. Disagreement is a hard error.

use crate::error::{EngineError, Result};
use crate::params::ParamPoint;
use crate::partitions::{Partition, PartitionTuple};
use crate::rat::{pow_i, rat_i, Rat};
use crate::series::{Monomial, MultiSeries, Shape, Var};
use crate::symfun::{h_eigen, macdonald_norm_o, schur_in_p, z_factor};
use num::traits::One;
use std::collections::HashMap;

/// Degree-truncated Fock space with the p_μ monomial basis, ordered by
/// degree and then by the deterministic partition enumeration order.
pub struct FockSpace {
    max_degree: usize,
    basis: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl FockSpace {
    pub fn new(max_degree: usize) -> FockSpace {
        let basis = Partition::enumerate_up_to(max_degree as u32);
        let index = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        FockSpace { max_degree, basis, index }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Partition] {
        &self.basis
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn vacuum(&self) -> usize {
        0
    }

    fn degree(&self, idx: usize) -> usize {
        self.basis[idx].size() as usize
    }

    /// Index of p_μ with one part n added, if still within the cap.
    fn raise(&self, idx: usize, n: u32) -> Option<usize> {
        let mu = &self.basis[idx];
        if mu.size() + n as u64 > self.max_degree as u64 {
            return None;
        }
        let mut parts: Vec<u32> = mu.parts().to_vec();
        let pos = parts.iter().position(|&p| p <= n).unwrap_or(parts.len());
        parts.insert(pos, n);
        self.index_of(&Partition::new(parts).expect("sorted insert"))
    }

    /// Index of p_μ with one part n removed, with the multiplicity of n in μ.
    fn lower(&self, idx: usize, n: u32) -> Option<(usize, u64)> {
        let mu = &self.basis[idx];
        let mult = mu.parts().iter().filter(|&&p| p == n).count() as u64;
        if mult == 0 {
            return None;
        }
        let mut parts: Vec<u32> = mu.parts().to_vec();
        let pos = parts.iter().position(|&p| p == n).expect("part present");
        parts.remove(pos);
        let target = self.index_of(&Partition::new(parts).expect("still sorted")).unwrap();
        Some((target, mult))
    }
}

/// A materialized degree-graded operator: sparse columns of series entries.
/// The engine applies operator words to vectors directly; this form exists
/// for operators that are inspected entrywise (generator matrices,
/// commutator checks) and for composing small blocks.
pub struct TruncOperator {
    dim: usize,
    shape: Shape,
    /// cols[j] maps row index -> entry (i, j).
    cols: Vec<Vec<(usize, MultiSeries)>>,
}

impl TruncOperator {
    pub fn identity(fock: &FockSpace, shape: &Shape) -> TruncOperator {
        TruncOperator {
            dim: fock.dim(),
            shape: shape.clone(),
            cols: (0..fock.dim()).map(|j| vec![(j, MultiSeries::one(shape))]).collect(),
        }
    }

    /// Materialize a word by applying it to every basis vector.
    pub fn from_word(fock: &FockSpace, shape: &Shape, word: &[WordOp]) -> TruncOperator {
        let cols = (0..fock.dim())
            .map(|j| {
                let image = apply_word(fock, word, &basis_vector(fock, shape, j));
                image
                    .into_iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .collect()
            })
            .collect();
        TruncOperator { dim: fock.dim(), shape: shape.clone(), cols }
    }

    pub fn entry(&self, row: usize, col: usize) -> MultiSeries {
        self.cols[col]
            .iter()
            .find(|(i, _)| *i == row)
            .map(|(_, e)| e.clone())
            .unwrap_or_else(|| MultiSeries::zero(&self.shape))
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = vec![MultiSeries::zero(&self.shape); self.dim];
        for (j, entry) in v.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            for (i, coeff) in &self.cols[j] {
                out[*i] = out[*i].add(&coeff.mul(entry));
            }
        }
        out
    }

    /// self ∘ other.
    pub fn compose(&self, other: &TruncOperator) -> TruncOperator {
        let cols = (0..self.dim)
            .map(|j| {
                let mut img = vec![MultiSeries::zero(&self.shape); self.dim];
                for (k, c) in &other.cols[j] {
                    for (i, a) in &self.cols[*k] {
                        img[*i] = img[*i].add(&a.mul(c));
                    }
                }
                img.into_iter().enumerate().filter(|(_, e)| !e.is_zero()).collect()
            })
            .collect();
        TruncOperator { dim: self.dim, shape: self.shape.clone(), cols }
    }

    pub fn sub(&self, other: &TruncOperator) -> TruncOperator {
        let cols = (0..self.dim)
            .map(|j| {
                let mut img = vec![MultiSeries::zero(&self.shape); self.dim];
                for (i, a) in &self.cols[j] {
                    img[*i] = img[*i].add(a);
                }
                for (i, b) in &other.cols[j] {
                    img[*i] = img[*i].sub(b);
                }
                img.into_iter().enumerate().filter(|(_, e)| !e.is_zero()).collect()
            })
            .collect();
        TruncOperator { dim: self.dim, shape: self.shape.clone(), cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn scale(&self, c: &Rat) -> TruncOperator {
        TruncOperator {
            dim: self.dim,
            shape: self.shape.clone(),
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|(i, e)| (*i, e.scale(c))).collect())
                .collect(),
        }
    }
}

/// The Heisenberg generator α_n as a matrix on the truncated Fock space:
/// n ∂/∂p_n for n > 0, multiplication by p_{|n|} for n < 0.
pub fn alpha_matrix(n: i64, fock: &FockSpace, shape: &Shape) -> TruncOperator {
    assert!(n != 0, "α_0 is not a generator here");
    let mut cols: Vec<Vec<(usize, MultiSeries)>> = vec![Vec::new(); fock.dim()];
    for (j, col) in cols.iter_mut().enumerate() {
        if n > 0 {
            if let Some((i, mult)) = fock.lower(j, n as u32) {
                col.push((i, MultiSeries::constant(shape, rat_i(n * mult as i64))));
            }
        } else if let Some(i) = fock.raise(j, (-n) as u32) {
            col.push((i, MultiSeries::one(shape)));
        }
    }
    TruncOperator { dim: fock.dim(), shape: shape.clone(), cols }
}

/// Which Heisenberg half an exponential uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OpSign {
    /// α_n (annihilation side).
    Plus,
    /// α_{-n} (creation side).
    Minus,
}

/// exp(Σ_{n>0} c_n α_{±n} / n) with scalar-series coefficients c_1..c_D.
#[derive(Clone, Debug)]
pub struct VertexOpSpec {
    pub sign: OpSign,
    pub coeffs: Vec<MultiSeries>,
}

impl VertexOpSpec {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// The inverse exponential: negate every coefficient.
    pub fn inverse(&self) -> VertexOpSpec {
        VertexOpSpec { sign: self.sign, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    /// Conjugate by a grading twist g^{|·|} (creation picks up g^{n},
    /// annihilation g^{-n}) and optionally by ω (factor (-1)^{n-1}).
    pub fn conjugated(&self, mono: &Monomial, omega_parity: bool) -> VertexOpSpec {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let n = i as i64 + 1;
                let e = match self.sign {
                    OpSign::Minus => n,
                    OpSign::Plus => -n,
                };
                let mut out = c.mul_monomial(&mono.pow(e));
                if omega_parity && n % 2 == 0 {
                    out = out.neg();
                }
                out
            })
            .collect();
        VertexOpSpec { sign: self.sign, coeffs }
    }
}

/// One letter of an operator word.
#[derive(Clone, Debug)]
pub enum WordOp {
    Exp(VertexOpSpec),
    /// Diagonal grading g^{|·|} by a monomial (possibly a plain scalar).
    Grade(Monomial),
    /// The ω involution: p_μ -> (-1)^{|μ|-ℓ(μ)} p_μ.
    Omega,
}

pub type Vector = Vec<MultiSeries>;

pub fn zero_vector(fock: &FockSpace, shape: &Shape) -> Vector {
    vec![MultiSeries::zero(shape); fock.dim()]
}

pub fn basis_vector(fock: &FockSpace, shape: &Shape, idx: usize) -> Vector {
    let mut v = zero_vector(fock, shape);
    v[idx] = MultiSeries::one(shape);
    v
}

/// Coordinates of the Schur function s_λ in the p_μ basis.
pub fn schur_vector(fock: &FockSpace, shape: &Shape, lambda: &Partition) -> Vector {
    let mut v = zero_vector(fock, shape);
    for (mu, c) in schur_in_p(lambda).terms() {
        if let Some(i) = fock.index_of(mu) {
            v[i] = MultiSeries::constant(shape, c.clone());
        }
    }
    v
}

/// Hall pairing of a coordinate vector against a rational bra vector:
/// Σ_μ f_μ g_μ z_μ.
pub fn hall_pair(fock: &FockSpace, bra: &Vector, ket: &Vector) -> MultiSeries {
    let shape = ket[0].shape().clone();
    let mut out = MultiSeries::zero(&shape);
    for i in 0..fock.dim() {
        if bra[i].is_zero() || ket[i].is_zero() {
            continue;
        }
        let z = z_factor(&fock.basis()[i]);
        out = out.add(&bra[i].mul(&ket[i]).scale(&z));
    }
    out
}

fn apply_alpha_sum(fock: &FockSpace, spec: &VertexOpSpec, v: &Vector) -> Vector {
    let shape = v[0].shape().clone();
    let mut out = zero_vector(fock, &shape);
    for (idx, entry) in v.iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        for (i, c_n) in spec.coeffs.iter().enumerate() {
            if c_n.is_zero() {
                continue;
            }
            let n = i as u32 + 1;
            match spec.sign {
                OpSign::Plus => {
                    // (c_n/n) α_n p_μ = c_n m_n(μ) p_{μ \ n}
                    if let Some((tgt, mult)) = fock.lower(idx, n) {
                        let add = entry.mul(c_n).scale(&rat_i(mult as i64));
                        out[tgt] = out[tgt].add(&add);
                    }
                }
                OpSign::Minus => {
                    // (c_n/n) α_{-n} p_μ = (c_n/n) p_{μ ∪ n}
                    if let Some(tgt) = fock.raise(idx, n) {
                        let add = entry.mul(c_n).scale(&(Rat::one() / rat_i(n as i64)));
                        out[tgt] = out[tgt].add(&add);
                    }
                }
            }
        }
    }
    out
}

fn apply_exp(fock: &FockSpace, spec: &VertexOpSpec, v: &Vector) -> Vector {
    let mut acc = v.clone();
    let mut cur = v.clone();
    for k in 1..=(fock.max_degree + 1) as i64 {
        cur = apply_alpha_sum(fock, spec, &cur);
        let scale = Rat::one() / rat_i(k);
        let mut all_zero = true;
        for e in cur.iter_mut() {
            *e = e.scale(&scale);
            if !e.is_zero() {
                all_zero = false;
            }
        }
        if all_zero {
            break;
        }
        for (a, c) in acc.iter_mut().zip(&cur) {
            *a = a.add(c);
        }
    }
    acc
}

fn apply_word_op(fock: &FockSpace, op: &WordOp, v: &Vector) -> Vector {
    match op {
        WordOp::Exp(spec) => apply_exp(fock, spec, v),
        WordOp::Grade(mono) => v
            .iter()
            .enumerate()
            .map(|(idx, e)| {
                if e.is_zero() {
                    e.clone()
                } else {
                    e.mul_monomial(&mono.pow(fock.degree(idx) as i64))
                }
            })
            .collect(),
        WordOp::Omega => v
            .iter()
            .enumerate()
            .map(|(idx, e)| {
                let mu = &fock.basis()[idx];
                if (mu.size() as i64 - mu.len() as i64) % 2 == 0 {
                    e.clone()
                } else {
                    e.neg()
                }
            })
            .collect(),
    }
}

/// Apply a word (leftmost op outermost) to a ket vector.
pub fn apply_word(fock: &FockSpace, word: &[WordOp], v: &Vector) -> Vector {
    let mut cur = v.clone();
    for op in word.iter().rev() {
        cur = apply_word_op(fock, op, &cur);
    }
    cur
}

/// ⟨∅| word |∅⟩ through the matrix engine.
pub fn vacuum_element_engine(fock: &FockSpace, shape: &Shape, word: &[WordOp]) -> MultiSeries {
    let v = apply_word(fock, word, &basis_vector(fock, shape, fock.vacuum()));
    v[fock.vacuum()].clone()
}

/// tr word through the matrix engine; any grading must be part of the word.
pub fn graded_trace_engine(fock: &FockSpace, shape: &Shape, word: &[WordOp]) -> MultiSeries {
    let mut out = MultiSeries::zero(shape);
    for idx in 0..fock.dim() {
        let v = apply_word(fock, word, &basis_vector(fock, shape, idx));
        out = out.add(&v[idx]);
    }
    out
}

/// Pairwise product of two spec coefficients accumulated into a target
/// shape by raw exponent addition. The source coefficients may live in a
/// different (typically wider) shape with the same variable order; products
/// landing outside the target window are dropped, which is exact whenever
/// downstream arithmetic only grows exponents. Negative-exponent products
/// are rejected: assembled contractions must stay in the positive orthant.
fn accumulate_pair(
    acc: &mut MultiSeries,
    a: &MultiSeries,
    b: &MultiSeries,
    scale: &Rat,
    context: &str,
) -> Result<()> {
    for (ea, ca) in a.iter() {
        for (eb, cb) in b.iter() {
            let exps: Vec<i32> = ea.iter().zip(eb).map(|(&x, &y)| x + y).collect();
            if exps.iter().any(|&e| e < 0) {
                return Err(EngineError::SupportViolation(format!(
                    "{context}: contraction product with negative exponents {exps:?}"
                )));
            }
            acc.add_term(exps, ca * cb * scale);
        }
    }
    Ok(())
}

/// ⟨∅| Π_i exp(Σ_n c_{i,n} α_{±n}/n) |∅⟩ by normal ordering: every
/// annihilation exponential left of a creation exponential contracts,
/// giving exp( Σ_{i<j, i:+, j:-} Σ_n a_{i,n} b_{j,n} / n ). The result is
/// assembled in `target`, which may be narrower than the spec storage
/// shape.
pub fn contraction_oracle(specs: &[VertexOpSpec], target: &Shape) -> Result<MultiSeries> {
    let mut exponent = MultiSeries::zero(target);
    for i in 0..specs.len() {
        if specs[i].sign != OpSign::Plus {
            continue;
        }
        for j in (i + 1)..specs.len() {
            if specs[j].sign != OpSign::Minus {
                continue;
            }
            let d = specs[i].degree().min(specs[j].degree());
            for n in 1..=d {
                let scale = Rat::one() / rat_i(n as i64);
                accumulate_pair(
                    &mut exponent,
                    &specs[i].coeffs[n - 1],
                    &specs[j].coeffs[n - 1],
                    &scale,
                    "vacuum contraction",
                )?;
            }
        }
    }
    exponent.exp()
}

/// tr g^{|·|} Π_i exp(...) by normal ordering inside the trace:
/// the word reduces to exp(S₀) E_-(v) E_+(u) with S₀ the vacuum
/// contraction, and
///   tr g^{|·|} E_-(v) E_+(u)
///     = Π_{k≥1} (1-g^k)^{-1} exp( Σ_n u_n v_n g^n / (n (1-g^n)) ).
pub fn graded_trace_word_oracle(
    specs: &[VertexOpSpec],
    grading: &Monomial,
    target: &Shape,
    max_mode: usize,
) -> Result<MultiSeries> {
    // Vacuum contraction of the ordered word, assembled in the target shape.
    let mut exponent = MultiSeries::zero(target);
    for i in 0..specs.len() {
        if specs[i].sign != OpSign::Plus {
            continue;
        }
        for j in (i + 1)..specs.len() {
            if specs[j].sign != OpSign::Minus {
                continue;
            }
            let d = specs[i].degree().min(specs[j].degree());
            for n in 1..=d {
                let scale = Rat::one() / rat_i(n as i64);
                accumulate_pair(
                    &mut exponent,
                    &specs[i].coeffs[n - 1],
                    &specs[j].coeffs[n - 1],
                    &scale,
                    "trace contraction",
                )?;
            }
        }
    }
    // Wrap-around contractions: Σ_n u_n v_n Σ_{j≥1} g^{nj} / n over the
    // creation/annihilation totals, where the grading monomial lives in the
    // target shape already.
    for n in 1..=max_mode {
        let gn = grading.pow(n as i64);
        let mut tail = MultiSeries::geometric_inverse(target, &gn)?;
        tail = tail.sub(&MultiSeries::one(target));
        if tail.is_zero() {
            continue;
        }
        let scale = Rat::one() / rat_i(n as i64);
        for i in 0..specs.len() {
            if specs[i].sign != OpSign::Plus || specs[i].degree() < n {
                continue;
            }
            for j in 0..specs.len() {
                if specs[j].sign != OpSign::Minus || specs[j].degree() < n {
                    continue;
                }
                let mut pair = MultiSeries::zero(target);
                accumulate_pair(
                    &mut pair,
                    &specs[i].coeffs[n - 1],
                    &specs[j].coeffs[n - 1],
                    &scale,
                    "trace tail contraction",
                )?;
                exponent = exponent.add(&pair.mul(&tail));
            }
        }
    }
    // Partition-function factor Π (1-g^k)^{-1}.
    let mut out = exponent.exp()?;
    for k in 1..=max_mode {
        let gk = grading.pow(k as i64);
        let factor = MultiSeries::geometric_inverse(target, &gk)?;
        if factor == MultiSeries::one(target) && k > 1 {
            break;
        }
        out = out.mul(&factor);
    }
    Ok(out)
}

/// The spec-shaped two-exponential trace oracle
/// tr Q^{|·|} exp(Σ a_n α_n/n) exp(Σ b_n α_{-n}/n).
pub fn graded_trace_oracle(
    plus: &VertexOpSpec,
    minus: &VertexOpSpec,
    grading: &Monomial,
    shape: &Shape,
    max_mode: usize,
) -> Result<MultiSeries> {
    graded_trace_word_oracle(
        &[plus.clone(), minus.clone()],
        grading,
        shape,
        max_mode,
    )
}

/// The two principal-specialization alphabet families of the network
/// formulas, reduced to H-eigenvalues at a fixed point ν:
///   X(ν): p_n = -(qt)^{n/2} (t^{n/2}-t^{-n/2}) h_n(ν)     (alphabet q^{-ρ} t^{ν})
///   Y(ν): p_n = -(qt)^{-n/2} (q^{n/2}-q^{-n/2}) h_{-n}(ν) (alphabet q^{-ν^t} t^{ρ})
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphabetFamily {
    X,
    Y,
}

fn family_value(family: AlphabetFamily, n: i64, nu: &Partition, p: &ParamPoint) -> Rat {
    match family {
        AlphabetFamily::X => {
            let tfac = pow_i(p.t_half(), n) - pow_i(p.t_half(), -n);
            -p.qt_half_pow(n) * tfac * h_eigen(n, nu, p)
        }
        AlphabetFamily::Y => {
            let qfac = pow_i(p.q_half(), n) - pow_i(p.q_half(), -n);
            -p.qt_half_pow(-n) * qfac * h_eigen(-n, nu, p)
        }
    }
}

/// exp(Σ_n p_fam(n, ν) z^n α_{±n}/n): the eigenvalue-reduced exponential for
/// an alphabet scaled by the monomial z.
pub fn principal_spec(
    sign: OpSign,
    family: AlphabetFamily,
    nu: &Partition,
    z: &Monomial,
    p: &ParamPoint,
    d: usize,
    shape: &Shape,
) -> VertexOpSpec {
    let coeffs = (1..=d as i64)
        .map(|n| {
            let zn = z.pow(n);
            let val = family_value(family, n, nu, p) * &zn.coeff;
            let mut s = MultiSeries::zero(shape);
            s.add_term(zn.exps, val);
            s
        })
        .collect();
    VertexOpSpec { sign, coeffs }
}

/// The printed vertex operators reduced at a fixed point ν:
///   Γ₊(z)|_ν : c_n =  (qt)^{n/2} (t^{n/2}-t^{-n/2}) h_n(ν) z^{n}
///   Γ₋(z)|_ν : c_n = -(qt)^{-n/2} (q^{n/2}-q^{-n/2}) h_{-n}(ν) z^{-n}
/// The Minus coefficient equals the Y-family power sum, so Γ₋ is the
/// creation-side Cauchy exponential for that alphabet.
pub fn gamma_eigen(
    sign: OpSign,
    z: &Monomial,
    nu: &Partition,
    p: &ParamPoint,
    d: usize,
    shape: &Shape,
) -> VertexOpSpec {
    let coeffs = (1..=d as i64)
        .map(|n| {
            let (val, zn) = match sign {
                OpSign::Plus => (-family_value(AlphabetFamily::X, n, nu, p), z.pow(n)),
                OpSign::Minus => (family_value(AlphabetFamily::Y, n, nu, p), z.pow(-n)),
            };
            let mut s = MultiSeries::zero(shape);
            s.add_term(zn.exps, val * zn.coeff);
            s
        })
        .collect();
    VertexOpSpec { sign, coeffs }
}

/// ⟨Õ_λ|D|Õ_λ⟩ = ⟨O_λ|O_λ⟩^{-1}.
pub fn d_entry(lambda: &Partition, p: &ParamPoint) -> Rat {
    Rat::one() / macdonald_norm_o(lambda, p)
}

/// Chain several per-factor blocks into one word, inserting the grading
/// twists for the gluing variables between consecutive blocks.
pub fn fusion_compose(blocks: Vec<Vec<WordOp>>, glue: Vec<Vec<WordOp>>) -> Vec<WordOp> {
    assert_eq!(glue.len() + 1, blocks.len(), "one glue word between consecutive blocks");
    let mut word = Vec::new();
    for (i, block) in blocks.into_iter().enumerate() {
        if i > 0 {
            word.extend(glue[i - 1].iter().cloned());
        }
        word.extend(block);
    }
    word
}

/// Caps for the operator-side chain computations.
#[derive(Clone, Debug)]
pub struct RrCaps {
    pub cap_q: u32,
    pub cap_a: u32,
    pub cap_b: Vec<u32>,
}

impl RrCaps {
    pub fn cap_b_total(&self) -> u32 {
        self.cap_b.iter().sum()
    }
}

// Storage shape for conjugated oracle coefficients: wide enough for the
// transient monomials (up to ±(d·rank) on A, ±d on each B). No series
// arithmetic happens here; pair products are accumulated directly into the
// claim shape, which is exact because contraction products only grow
// non-negative exponents.
fn rr_h_wide_shape(caps: &RrCaps, d: usize, rank: usize) -> Shape {
    let bt = caps.cap_b_total() as i32;
    let wide = (d * rank) as i32 + bt + 4;
    let mut spec = vec![(Var::A, -wide, wide)];
    for (k, _) in caps.cap_b.iter().enumerate() {
        spec.push((Var::B(k as u8 + 1), -(d as i32 + 2), d as i32 + 2));
    }
    Shape::new(spec)
}

fn rr_h_claim_shape(caps: &RrCaps) -> Shape {
    let mut spec = vec![(Var::A, 0, caps.cap_a as i32)];
    for (k, &cb) in caps.cap_b.iter().enumerate() {
        spec.push((Var::B(k as u8 + 1), 0, cb as i32));
    }
    Shape::new(spec)
}

/// The per-factor block of the horizontal-direction chain at the fixed
/// point ν, as a word on the auxiliary Fock factor:
///   E_-((qt)^{-1/2} x) E_+(y) A^{|·|} ω E_-(x) E_+((qt)^{1/2} y),
/// with x, y the X/Y alphabets at ν.
fn rr_h_block(nu: &Partition, p: &ParamPoint, d: usize, shape: &Shape) -> Vec<WordOp> {
    let one = |c: Rat| Monomial::constant(shape, c);
    let qt_half = p.q_half() * p.t_half();
    vec![
        WordOp::Exp(principal_spec(
            OpSign::Minus,
            AlphabetFamily::X,
            nu,
            &one(Rat::one() / &qt_half),
            p,
            d,
            shape,
        )),
        WordOp::Exp(principal_spec(OpSign::Plus, AlphabetFamily::Y, nu, &one(Rat::one()), p, d, shape)),
        WordOp::Grade(Monomial::var(shape, Var::A, Rat::one())),
        WordOp::Omega,
        WordOp::Exp(principal_spec(OpSign::Minus, AlphabetFamily::X, nu, &one(Rat::one()), p, d, shape)),
        WordOp::Exp(principal_spec(OpSign::Plus, AlphabetFamily::Y, nu, &one(qt_half.clone()), p, d, shape)),
    ]
}

/// Flatten a word into exponential specs with every grading/ω twist pushed
/// to the right of the word (where it acts trivially on the vacuum),
/// conjugating the specs it passes.
fn flatten_word_for_oracle(word: &[WordOp], shape: &Shape) -> Vec<VertexOpSpec> {
    let mut acc_mono = Monomial::constant(shape, Rat::one());
    let mut acc_parity = false;
    let mut out = Vec::new();
    for op in word {
        match op {
            WordOp::Exp(spec) => out.push(spec.conjugated(&acc_mono, acc_parity)),
            WordOp::Grade(m) => {
                acc_mono = Monomial {
                    coeff: &acc_mono.coeff * &m.coeff,
                    exps: acc_mono.exps.iter().zip(&m.exps).map(|(&x, &y)| x + y).collect(),
                };
            }
            WordOp::Omega => acc_parity = !acc_parity,
        }
    }
    out
}

/// Diagonal matrix element of the chained horizontal operator at the fixed
/// point tuple λ⃗: the product of norm factors D with the vacuum element of
/// the glued block word, dual-path checked.
pub fn rr_h_diagonal(legs: &PartitionTuple, p: &ParamPoint, caps: &RrCaps) -> Result<MultiSeries> {
    let r = legs.rank();
    if caps.cap_b.len() + 1 != r {
        return Err(EngineError::RankMismatch { got: caps.cap_b.len() + 1, want: r });
    }
    let d = (caps.cap_a + caps.cap_b_total() + 1) as usize;
    let claim = rr_h_claim_shape(caps);
    let wide = rr_h_wide_shape(caps, d, r);
    let fock = FockSpace::new(d);

    // Blocks enter the word right-to-left: factor 1 is applied first. The
    // same word is built once per shape: the engine works in the claim
    // window (all its intermediates are non-negative), while the oracle
    // stores conjugated coefficients in the wide window.
    let build_word = |shape: &Shape| {
        let mut blocks = Vec::new();
        let mut glue = Vec::new();
        for i in (0..r).rev() {
            blocks.push(rr_h_block(legs.entry(i), p, d, shape));
            if i > 0 {
                glue.push(vec![
                    WordOp::Grade(Monomial::var(shape, Var::B(i as u8), Rat::one())),
                    WordOp::Omega,
                ]);
            }
        }
        fusion_compose(blocks, glue)
    };

    let engine = vacuum_element_engine(&fock, &claim, &build_word(&claim));
    let oracle = contraction_oracle(&flatten_word_for_oracle(&build_word(&wide), &wide), &claim)?;
    // The matrix engine truncates by Fock degree, the oracle by the window;
    // both are complete on the claim window, which is where they must agree.
    if engine != oracle {
        return Err(EngineError::OracleDisagreement {
            context: format!("rr_h_diagonal at {legs:?}"),
            detail: format!("engine {engine:?} vs oracle {oracle:?}"),
        });
    }

    let mut norm_factor = Rat::one();
    for lam in legs.entries() {
        norm_factor *= d_entry(lam, p);
    }
    Ok(oracle.scale(&norm_factor))
}

/// tr Q^{|·|} of the chained horizontal operator: the fixed-point sum
/// Σ_{λ⃗} Q^{|λ⃗|} rr_h_diagonal(λ⃗).
pub fn rr_h_trace(r: usize, p: &ParamPoint, caps: &RrCaps) -> Result<MultiSeries> {
    let mut spec = vec![(Var::Q, 0, caps.cap_q as i32), (Var::A, 0, caps.cap_a as i32)];
    for (k, &cb) in caps.cap_b.iter().enumerate() {
        spec.push((Var::B(k as u8 + 1), 0, cb as i32));
    }
    let shape = Shape::new(spec);
    let mut out = MultiSeries::zero(&shape);
    for legs in PartitionTuple::tuples_up_to(r, caps.cap_q) {
        let diag = rr_h_diagonal(&legs, p, caps)?.embed(&shape);
        let mut exps = shape.zero_exps();
        exps[0] = legs.size() as i32;
        out = out.add(&diag.mul_monomial(&Monomial { coeff: Rat::one(), exps }));
    }
    Ok(out)
}

fn rr_v_wide_shape(caps: &RrCaps, d: usize) -> Shape {
    let wide = d as i32 + 2;
    let mut spec = vec![(Var::Q, -wide, wide), (Var::A, -wide, wide)];
    for (k, _) in caps.cap_b.iter().enumerate() {
        spec.push((Var::B(k as u8 + 1), 0, d as i32));
    }
    Shape::new(spec)
}

fn rr_v_claim_shape(caps: &RrCaps) -> Shape {
    let mut spec = vec![
        (Var::Q, 0, caps.cap_q as i32),
        (Var::A, 0, caps.cap_a as i32),
    ];
    for (k, &cb) in caps.cap_b.iter().enumerate() {
        spec.push((Var::B(k as u8 + 1), 0, cb as i32));
    }
    Shape::new(spec)
}

/// One factor of the vertical-direction trace: the Q-graded trace on the
/// auxiliary Fock factor carrying the eigenvalue pairs of the two adjacent
/// fixed points. Dual-path checked.
fn rr_v_word(
    nu_prev: &Partition,
    nu_cur: &Partition,
    p: &ParamPoint,
    d: usize,
    shape: &Shape,
) -> Vec<WordOp> {
    let qt_half = p.q_half() * p.t_half();
    let one = |c: Rat| Monomial::constant(shape, c);
    vec![
        WordOp::Grade(one(qt_half.clone())),
        WordOp::Exp(principal_spec(OpSign::Plus, AlphabetFamily::Y, nu_cur, &one(Rat::one()), p, d, shape)),
        WordOp::Grade(Monomial::var(shape, Var::Q, Rat::one())),
        WordOp::Omega,
        WordOp::Exp(principal_spec(OpSign::Minus, AlphabetFamily::X, nu_prev, &one(Rat::one()), p, d, shape)),
        WordOp::Grade(one(Rat::one() / &qt_half)),
        WordOp::Exp(principal_spec(OpSign::Plus, AlphabetFamily::Y, nu_prev, &one(Rat::one()), p, d, shape)),
        WordOp::Grade(Monomial::var(shape, Var::A, Rat::one())),
        WordOp::Omega,
        WordOp::Exp(principal_spec(OpSign::Minus, AlphabetFamily::X, nu_cur, &one(Rat::one()), p, d, shape)),
    ]
}

fn rr_v_factor(
    nu_prev: &Partition,
    nu_cur: &Partition,
    p: &ParamPoint,
    d: usize,
    wide: &Shape,
    claim: &Shape,
    fock: &FockSpace,
) -> Result<MultiSeries> {
    // Engine path in the claim window: the word's own coefficients are
    // plain rationals and the grading twists only raise exponents.
    let engine = graded_trace_engine(fock, claim, &rr_v_word(nu_prev, nu_cur, p, d, claim));

    // Oracle path: push the twists around the trace cyclically; the
    // accumulated grading (QA)^{|·|} remains, conjugated coefficients live
    // in the wide window and contract straight into the claim window.
    let word = rr_v_word(nu_prev, nu_cur, p, d, wide);
    let specs = flatten_word_for_oracle(&word, wide);
    let mut grading = Monomial::constant(claim, Rat::one());
    for op in &word {
        if let WordOp::Grade(m) = op {
            grading = Monomial {
                coeff: &grading.coeff * &m.coeff,
                exps: grading.exps.iter().zip(&m.exps).map(|(&x, &y)| x + y).collect(),
            };
        }
    }
    let oracle = graded_trace_word_oracle(&specs, &grading, claim, d)?;
    if engine != oracle {
        return Err(EngineError::OracleDisagreement {
            context: format!("rr_v_factor at ({nu_prev}, {nu_cur})"),
            detail: format!("engine {engine:?} vs oracle {oracle:?}"),
        });
    }
    Ok(oracle)
}

/// tr Q^{|·|} of the chained vertical operator: internal fixed-point sums
/// around each mixing insertion, boundary pinned to the vacuum:
/// Σ_{ν⃗} Π_k B_k^{|ν^{(k)}|} ⟨O_{ν^{(k)}}|O_{ν^{(k)}}⟩^{-1} Π_i tr-factor(ν^{(i-1)}, ν^{(i)}).
pub fn rr_v_trace(r: usize, p: &ParamPoint, caps: &RrCaps) -> Result<MultiSeries> {
    if caps.cap_b.len() + 1 != r {
        return Err(EngineError::RankMismatch { got: caps.cap_b.len() + 1, want: r });
    }
    let d = caps.cap_q.max(caps.cap_a) as usize + 1;
    let wide = rr_v_wide_shape(caps, d);
    let claim = rr_v_claim_shape(caps);
    let fock = FockSpace::new(d);
    let empty = Partition::empty();

    // Enumerate the internal fixed points ν^{(1)}..ν^{(r-1)}.
    let mut combos: Vec<Vec<Partition>> = vec![vec![]];
    for &cb in &caps.cap_b {
        let opts = Partition::enumerate_up_to(cb);
        let mut next = Vec::new();
        for prefix in &combos {
            for nu in &opts {
                let mut v = prefix.clone();
                v.push(nu.clone());
                next.push(v);
            }
        }
        combos = next;
    }

    let mut factor_cache: HashMap<(Partition, Partition), MultiSeries> = HashMap::new();
    let mut out = MultiSeries::zero(&claim);
    for nus in combos {
        let nu_ref = |i: usize| -> &Partition {
            if i == 0 || i == r {
                &empty
            } else {
                &nus[i - 1]
            }
        };
        let mut term = MultiSeries::one(&claim);
        for i in 1..=r {
            let key = (nu_ref(i - 1).clone(), nu_ref(i).clone());
            let factor = match factor_cache.get(&key) {
                Some(f) => f.clone(),
                None => {
                    let f = rr_v_factor(&key.0, &key.1, p, d, &wide, &claim, &fock)?;
                    factor_cache.insert(key.clone(), f.clone());
                    f
                }
            };
            term = term.mul(&factor);
        }
        let mut weight = Rat::one();
        let mut exps = claim.zero_exps();
        for (k, nu) in nus.iter().enumerate() {
            weight *= d_entry(nu, p);
            exps[claim.index_of(Var::B(k as u8 + 1)).unwrap()] = nu.size() as i32;
        }
        out = out.add(&term.scale(&weight).mul_monomial(&Monomial { coeff: Rat::one(), exps }));
    }
    Ok(out)
}
