//! Equivariant localization on instanton moduli: tangent characters at
//! torus fixed points, the χ_y-genus, ψ-eigenvalues and the q-character
//! trace.
//!
//! The tangent character pairs every weight w with qt/w (the torus scales
//! the symplectic form by ħ = qt). The genus factors are therefore grouped
//! and expanded pairwise:
//!     (1 - m w^{-1})(1 - m w/ħ) / [(1 - w^{-1})(1 - w/ħ)]
//!       = (w - m)(ħ - m w) / [(w - 1)(ħ - w)],
//! a form symmetric under w -> ħ/w, which keeps every expansion inside the
//! non-negative exponent window even when the framing ratios are treated as
//! formal Kähler monomials.

use crate::error::{EngineError, Result};
use crate::params::ParamPoint;
use crate::partitions::{Partition, PartitionTuple};
use crate::rat::{pow_i, Rat};
use crate::series::{Monomial, MultiSeries, Shape, Var};
use num::traits::{One, Zero};
use serde_json::{json, Value};

/// Exponent-orientation choices for the fixed-point tangent character. The
/// literature disagrees on the (row, column) to (q, t) assignment and on the
/// direction of the framing ratio; the engine validates the candidates and
/// records the calibrated one in its output metadata.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TangentConvention {
    /// arm exponents on t, legs on q, frame a_j/a_i.
    ArmT,
    /// arm exponents on q, legs on t, frame a_j/a_i.
    ArmQ,
    /// arm on t, legs on q, frame a_i/a_j.
    ArmTFrameInv,
    /// arm on q, legs on t, frame a_i/a_j.
    ArmQFrameInv,
}

impl TangentConvention {
    pub const ALL: [TangentConvention; 4] = [
        TangentConvention::ArmT,
        TangentConvention::ArmQ,
        TangentConvention::ArmTFrameInv,
        TangentConvention::ArmQFrameInv,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TangentConvention::ArmT => "arm-t",
            TangentConvention::ArmQ => "arm-q",
            TangentConvention::ArmTFrameInv => "arm-t-frame-inv",
            TangentConvention::ArmQFrameInv => "arm-q-frame-inv",
        }
    }
}

/// The convention validated by the localization-versus-network oracle; see
/// the calibration verify suite.
pub const CALIBRATED_CONVENTION: TangentConvention = TangentConvention::ArmT;

/// One K-theory weight q^{e_q} t^{e_t} a_{num}/a_{den} with multiplicity
/// sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TangentWeight {
    pub sign: i8,
    pub e_q: i64,
    pub e_t: i64,
    /// 0-based framing indices (numerator, denominator); equal for the
    /// frame-trivial weights.
    pub frame: (usize, usize),
}

impl TangentWeight {
    pub fn eval(&self, p: &ParamPoint) -> Rat {
        let mut w = pow_i(&p.q(), self.e_q) * pow_i(&p.t(), self.e_t);
        if self.frame.0 != self.frame.1 {
            w *= &p.framing()[self.frame.0] / &p.framing()[self.frame.1];
        }
        w
    }

    /// The symplectic partner ħ/w with ħ = qt.
    pub fn dual(&self) -> TangentWeight {
        TangentWeight {
            sign: self.sign,
            e_q: 1 - self.e_q,
            e_t: 1 - self.e_t,
            frame: (self.frame.1, self.frame.0),
        }
    }
}

/// The tangent character at a fixed point, stored as symplectic pairs
/// (w, qt/w).
#[derive(Clone, Debug)]
pub struct TangentChar {
    pairs: Vec<TangentWeight>,
}

impl TangentChar {
    /// Every weight, pairs unfolded; length is 2 r |λ⃗|.
    pub fn weights(&self) -> Vec<TangentWeight> {
        let mut out = Vec::with_capacity(2 * self.pairs.len());
        for w in &self.pairs {
            out.push(*w);
            out.push(w.dual());
        }
        out
    }

    pub fn pair_representatives(&self) -> &[TangentWeight] {
        &self.pairs
    }

    pub fn to_json(&self, p: &ParamPoint) -> Value {
        let ws: Vec<Value> = self
            .weights()
            .iter()
            .map(|w| {
                json!({
                    "sign": w.sign,
                    "e_q": w.e_q,
                    "e_t": w.e_t,
                    "frame_num": w.frame.0 + 1,
                    "frame_den": w.frame.1 + 1,
                    "value_num": w.eval(p).numer().to_string(),
                    "value_den": w.eval(p).denom().to_string(),
                })
            })
            .collect();
        json!(ws)
    }
}

/// The Nekrasov fixed-point tangent character
/// T_{λ⃗} = Σ_{i,j} (a_j/a_i) N_{λ^{(i)}, λ^{(j)}} with the arm/leg pairing.
/// Only one representative per symplectic pair is generated; the partner is
/// ħ/w.
pub fn tangent_character(legs: &PartitionTuple, conv: TangentConvention) -> TangentChar {
    let r = legs.rank();
    let mut pairs = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let lam_i = legs.entry(i);
            let lam_j = legs.entry(j);
            for s in lam_i.cells() {
                let arm = lam_i.signed_arm(s);
                let leg = lam_j.signed_leg(s);
                let (e_q, e_t, frame) = match conv {
                    TangentConvention::ArmT => (-leg, arm + 1, (j, i)),
                    TangentConvention::ArmQ => (arm + 1, -leg, (j, i)),
                    TangentConvention::ArmTFrameInv => (-leg, arm + 1, (i, j)),
                    TangentConvention::ArmQFrameInv => (arm + 1, -leg, (i, j)),
                };
                pairs.push(TangentWeight { sign: 1, e_q, e_t, frame });
            }
        }
    }
    TangentChar { pairs }
}

/// (w - m)(ħ - m w) / [(w - 1)(ħ - w)] as a polynomial in m over exact
/// denominators; numeric weight.
fn pair_ratio_numeric(w: &Rat, hbar: &Rat, shape: &Shape, m_var: Var) -> Result<MultiSeries> {
    let den = (w - Rat::one()) * (hbar - w);
    if den.is_zero() {
        return Err(EngineError::NonGeneric("tangent weight hits 1 or qt".into()));
    }
    let mut out = MultiSeries::zero(shape);
    let inv = Rat::one() / den;
    let mi = shape.index_of(m_var).expect("m variable in shape");
    let mut e0 = shape.zero_exps();
    out.add_term(e0.clone(), w * hbar * &inv);
    e0[mi] = 1;
    out.add_term(e0.clone(), -(w * w + hbar) * &inv);
    e0[mi] = 2;
    out.add_term(e0, w * &inv);
    Ok(out)
}

/// The pairwise genus factor with the framing ratio carried as a formal
/// monomial (m is the A variable). `frame_mono` is the monomial of w; it
/// must have all-non-negative or all-non-positive exponents.
fn pair_ratio_formal(
    u: &Rat,
    frame_mono: &[i32],
    hbar: &Rat,
    shape: &Shape,
) -> Result<MultiSeries> {
    if frame_mono.iter().all(|&e| e == 0) {
        return pair_ratio_numeric(u, hbar, shape, Var::A);
    }
    // Normalize to the representative with non-negative monomial; the pair
    // factor is symmetric under w -> ħ/w.
    if frame_mono.iter().any(|&e| e < 0) {
        if frame_mono.iter().any(|&e| e > 0) {
            return Err(EngineError::InvalidConfig("mixed-sign framing monomial".into()));
        }
        let dual_u = hbar / u;
        let dual_mono: Vec<i32> = frame_mono.iter().map(|&e| -e).collect();
        return pair_ratio_formal(&dual_u, &dual_mono, hbar, shape);
    }
    let w = Monomial { coeff: u.clone(), exps: frame_mono.to_vec() };
    let w_over_h = Monomial { coeff: u / hbar, exps: frame_mono.to_vec() };
    let a_var = Monomial::var(shape, Var::A, Rat::one());

    // (w - A)
    let mut f1 = MultiSeries::from_monomial(shape, &w);
    f1.add_term(a_var.exps.clone(), -Rat::one());
    // (ħ - A w)
    let mut f2 = MultiSeries::constant(shape, hbar.clone());
    let aw = Monomial {
        coeff: -w.coeff.clone(),
        exps: w.exps.iter().zip(&a_var.exps).map(|(&x, &y)| x + y).collect(),
    };
    f2.add_term(aw.exps, aw.coeff);
    // -(1 - w)^{-1} and ħ^{-1} (1 - w/ħ)^{-1}
    let g1 = MultiSeries::geometric_inverse(shape, &w)?.neg();
    let g2 = MultiSeries::geometric_inverse(shape, &w_over_h)?.scale(&(Rat::one() / hbar));

    Ok(f1.mul(&f2).mul(&g1).mul(&g2))
}

/// Π over tangent weights of (1 - m w^{-1}) / (1 - w^{-1}) as a truncated
/// series in m, at numeric framing values.
pub fn chi_y_ratio(
    legs: &PartitionTuple,
    p: &ParamPoint,
    cap_m: u32,
    conv: TangentConvention,
) -> Result<MultiSeries> {
    let shape = Shape::new(vec![(Var::M, 0, cap_m as i32)]);
    let hbar = p.q() * p.t();
    let mut out = MultiSeries::one(&shape);
    for w in tangent_character(legs, conv).pair_representatives() {
        let factor = pair_ratio_numeric(&w.eval(p), &hbar, &shape, Var::M)?;
        out = out.mul(&factor);
    }
    Ok(out)
}

/// The same ratio with the adjacent framing ratios a_{k+1}/a_k carried as
/// formal monomials A·B_k and the genus variable m identified with A. The
/// result is asserted to lie in the non-negative orthant.
pub fn chi_y_ratio_formal(
    legs: &PartitionTuple,
    p: &ParamPoint,
    shape: &Shape,
    conv: TangentConvention,
) -> Result<MultiSeries> {
    let hbar = p.q() * p.t();
    let mut out = MultiSeries::one(shape);
    for w in tangent_character(legs, conv).pair_representatives() {
        let u = pow_i(&p.q(), w.e_q) * pow_i(&p.t(), w.e_t);
        // a_j/a_i with j > i unfolds to Π_{k=i..j-1} (A B_k).
        let mut mono = shape.zero_exps();
        let (num, den) = w.frame;
        if num != den {
            let (lo, hi, dir) = if num > den { (den, num, 1) } else { (num, den, -1) };
            let ai = shape.index_of(Var::A).expect("A in shape");
            mono[ai] += dir * (hi - lo) as i32;
            for k in lo..hi {
                let bi = shape
                    .index_of(Var::B(k as u8 + 1))
                    .expect("B_k in shape for formal framing");
                mono[bi] += dir;
            }
        }
        let factor = pair_ratio_formal(&u, &mono, &hbar, shape)?;
        out = out.mul(&factor);
    }
    if !out.has_only_nonnegative_exponents() {
        return Err(EngineError::SupportViolation(
            "formal χ_y ratio left the non-negative orthant".into(),
        ));
    }
    Ok(out)
}

/// χ_{T,m}(M_r; Q) truncated: Σ_{|λ⃗| ≤ capQ} Q^{|λ⃗|} chi_y_ratio(λ⃗).
pub fn chi_y_genus(
    r: usize,
    cap_q: u32,
    cap_m: u32,
    p: &ParamPoint,
    conv: TangentConvention,
) -> Result<MultiSeries> {
    let shape = Shape::new(vec![(Var::Q, 0, cap_q as i32), (Var::M, 0, cap_m as i32)]);
    let mut out = MultiSeries::zero(&shape);
    for legs in PartitionTuple::tuples_up_to(r, cap_q) {
        let ratio = chi_y_ratio(&legs, p, cap_m, conv)?;
        let embedded = ratio.embed(&shape);
        let mut exps = shape.zero_exps();
        exps[0] = legs.size() as i32;
        out = out.add(&embedded.mul_monomial(&Monomial { coeff: Rat::one(), exps }));
    }
    Ok(out)
}

/// Eigenvalue of ψ(u) on the fixed point λ (rank 1): the multiplicative
/// genus Ŝ^•((1 - ħ^{-1}) u χ_λ) = Π_w [w^{1/2}/(1-w)]^{±} over the signed
/// monomials of the class. `u_half` is u^{1/2}; supplying the square root
/// keeps every w^{1/2} rational.
pub fn psi_eigenvalue(lambda: &Partition, u_half: &Rat, p: &ParamPoint) -> Result<Rat> {
    let u = u_half * u_half;
    let mut val = Rat::one();
    for c in lambda.cells() {
        // +u q^i t^j and -u q^{i-1} t^{j-1}
        let w_plus = &u * pow_i(&p.q(), c.row as i64) * pow_i(&p.t(), c.col as i64);
        let w_minus = &u * pow_i(&p.q(), c.row as i64 - 1) * pow_i(&p.t(), c.col as i64 - 1);
        let den_plus = Rat::one() - &w_plus;
        let den_minus = Rat::one() - &w_minus;
        if den_plus.is_zero() || den_minus.is_zero() {
            return Err(EngineError::NonGeneric("ψ(u) pole: 1 - w vanishes".into()));
        }
        let root_plus =
            u_half * pow_i(p.q_half(), c.row as i64) * pow_i(p.t_half(), c.col as i64);
        let root_minus =
            u_half * pow_i(p.q_half(), c.row as i64 - 1) * pow_i(p.t_half(), c.col as i64 - 1);
        val *= root_plus / den_plus;
        val *= den_minus / root_minus;
    }
    Ok(val)
}

/// tr Q^{|·|} ψ(u) over the rank-1 fixed points: Σ_{|λ| ≤ capQ} Q^{|λ|} ψ_λ(u).
pub fn q_character_trace(cap_q: u32, u_half: &Rat, p: &ParamPoint) -> Result<MultiSeries> {
    let shape = Shape::new(vec![(Var::Q, 0, cap_q as i32)]);
    let mut out = MultiSeries::zero(&shape);
    for lam in Partition::enumerate_up_to(cap_q) {
        let v = psi_eigenvalue(&lam, u_half, p)?;
        out.add_term(vec![lam.size() as i32], v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::random_param_point;
    use crate::rat::rat;

    #[test]
    fn hilbert_scheme_one_point_is_plane() {
        // Hilb^1 ≅ ℂ²: tangent weights {q, t}.
        let legs = PartitionTuple::new(vec![Partition::of(&[1])]);
        for conv in [TangentConvention::ArmT, TangentConvention::ArmQ] {
            let ws = tangent_character(&legs, conv).weights();
            assert_eq!(ws.len(), 2);
            let mut exps: Vec<(i64, i64)> = ws.iter().map(|w| (w.e_q, w.e_t)).collect();
            exps.sort();
            assert_eq!(exps, vec![(0, 1), (1, 0)]);
        }
    }

    #[test]
    fn weight_count_is_2r_size() {
        for (r, n) in [(1usize, 4u32), (2, 4)] {
            for legs in PartitionTuple::tuples_up_to(r, n) {
                let ws = tangent_character(&legs, CALIBRATED_CONVENTION).weights();
                assert_eq!(ws.len() as u64, 2 * r as u64 * legs.size(), "λ⃗={legs:?}");
            }
        }
    }

    #[test]
    fn symplectic_pairing_holds() {
        // T = ħ T^∨ as multisets of evaluated weights.
        let p = random_param_point(9, 2, 16);
        let hbar = p.q() * p.t();
        for legs in PartitionTuple::tuples_up_to(2, 4) {
            let mut evals: Vec<Rat> = tangent_character(&legs, CALIBRATED_CONVENTION)
                .weights()
                .iter()
                .map(|w| w.eval(&p))
                .collect();
            let mut duals: Vec<Rat> = evals.iter().map(|w| &hbar / w).collect();
            evals.sort();
            duals.sort();
            assert_eq!(evals, duals, "λ⃗={legs:?}");
        }
    }

    #[test]
    fn ratio_at_m_one_is_one() {
        // The ratio is a polynomial in m of degree 2 r |λ⃗| (the denominator
        // carries no m), so a cap at full degree captures it exactly and the
        // m = 1 specialization must collapse to 1.
        let p = random_param_point(4, 2, 16);
        for legs in PartitionTuple::tuples_up_to(2, 3) {
            let full_deg = 2 * 2 * legs.size() as u32;
            let ratio = chi_y_ratio(&legs, &p, full_deg.max(1), CALIBRATED_CONVENTION).unwrap();
            let at_one: Rat = ratio.iter().map(|(_, c)| c.clone()).fold(Rat::zero(), |a, b| a + b);
            assert_eq!(at_one, Rat::one(), "λ⃗={legs:?}");
            // m = 0 coefficient is 1/∧_{-1}: nonzero by genericity.
            assert!(!ratio.constant_term().is_zero());
        }
    }

    #[test]
    fn empty_ratio_is_one() {
        let p = random_param_point(4, 1, 16);
        let legs = PartitionTuple::empty(1);
        let ratio = chi_y_ratio(&legs, &p, 3, CALIBRATED_CONVENTION).unwrap();
        let shape = Shape::new(vec![(Var::M, 0, 3)]);
        assert_eq!(ratio, MultiSeries::one(&shape));
    }

    #[test]
    fn hilb1_ratio_matches_direct_product() {
        // r=1, λ=(1): weights {q, t}; compare against the direct two-factor
        // product expanded by hand.
        let p = random_param_point(6, 1, 16);
        let legs = PartitionTuple::new(vec![Partition::of(&[1])]);
        let ratio = chi_y_ratio(&legs, &p, 2, CALIBRATED_CONVENTION).unwrap();
        let q = p.q();
        let t = p.t();
        let direct = |m: &Rat| -> Rat {
            (Rat::one() - m / &q) * (Rat::one() - m / &t)
                / ((Rat::one() - Rat::one() / &q) * (Rat::one() - Rat::one() / &t))
        };
        // Compare the quadratic polynomial coefficients via evaluation at
        // three points.
        for mv in [rat(1, 3), rat(2, 5), rat(3, 7)] {
            let mut series_val = Rat::zero();
            for (e, c) in ratio.iter() {
                series_val += c * pow_i(&mv, e[0] as i64);
            }
            assert_eq!(series_val, direct(&mv));
        }
    }

    #[test]
    fn psi_eigenvalue_examples() {
        let p = random_param_point(8, 1, 16);
        let u_half = rat(3, 7);
        assert_eq!(psi_eigenvalue(&Partition::empty(), &u_half, &p).unwrap(), Rat::one());
        // λ = (1): (u^{1/2}/(1-u)) · ((1-u/ħ)/(u/ħ)^{1/2}).
        let u = &u_half * &u_half;
        let hbar = p.q() * p.t();
        let expect = (&u_half / (Rat::one() - &u))
            * ((Rat::one() - &u / &hbar) / (&u_half / (p.q_half() * p.t_half())));
        assert_eq!(psi_eigenvalue(&Partition::of(&[1]), &u_half, &p).unwrap(), expect);
    }

    #[test]
    fn tangent_char_json_dump() {
        let p = random_param_point(3, 2, 16);
        let legs = PartitionTuple::new(vec![Partition::of(&[1]), Partition::empty()]);
        let v = tangent_character(&legs, CALIBRATED_CONVENTION).to_json(&p);
        let ws = v.as_array().unwrap();
        assert_eq!(ws.len(), 4);
        for w in ws {
            assert!(w["value_num"].as_str().is_some());
            assert!(w["frame_num"].as_i64().unwrap() >= 1);
        }
    }

    #[test]
    fn q_character_trace_low_orders() {
        let p = random_param_point(8, 1, 16);
        let u_half = rat(3, 7);
        let tr = q_character_trace(2, &u_half, &p).unwrap();
        assert_eq!(tr.coeff(&[0]), Rat::one());
        let expect_q1 = psi_eigenvalue(&Partition::of(&[1]), &u_half, &p).unwrap();
        assert_eq!(tr.coeff(&[1]), expect_q1);
        let expect_q2 = psi_eigenvalue(&Partition::of(&[2]), &u_half, &p).unwrap()
            + psi_eigenvalue(&Partition::of(&[1, 1]), &u_half, &p).unwrap();
        assert_eq!(tr.coeff(&[2]), expect_q2);
    }
}
