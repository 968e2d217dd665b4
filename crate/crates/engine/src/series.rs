//! Truncated multivariate Laurent series in the Kähler variables, with
//! exact rational coefficients.
//!
//! A series carries an explicit per-variable truncation window `[lo, hi]`;
//! every arithmetic result is re-truncated to the window. Windows with
//! `lo < 0` are permitted (the A variable is carried as a Laurent window
//! internally). Binary operations require identical shapes and panic
//! otherwise; shapes are fixed per computation by the callers.

use crate::error::{EngineError, Result};
use crate::rat::Rat;
use num::traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// A formal Kähler variable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Q,
    A,
    B(u8),
    M,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Q => write!(f, "Q"),
            Var::A => write!(f, "A"),
            Var::B(k) => write!(f, "B{k}"),
            Var::M => write!(f, "m"),
        }
    }
}

impl Var {
    pub fn parse(s: &str) -> Option<Var> {
        match s {
            "Q" => Some(Var::Q),
            "A" => Some(Var::A),
            "m" => Some(Var::M),
            _ => s.strip_prefix('B').and_then(|k| k.parse().ok().map(Var::B)),
        }
    }
}

/// Ordered variable list with truncation windows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Shape {
    vars: Vec<Var>,
    lo: Vec<i32>,
    hi: Vec<i32>,
}

impl Shape {
    pub fn new(spec: Vec<(Var, i32, i32)>) -> Shape {
        let mut vars = Vec::new();
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for (v, l, h) in spec {
            assert!(l <= h, "empty window for {v}");
            assert!(!vars.contains(&v), "duplicate variable {v}");
            vars.push(v);
            lo.push(l);
            hi.push(h);
        }
        Shape { vars, lo, hi }
    }

    /// The empty variable set: plain scalars.
    pub fn scalar() -> Shape {
        Shape { vars: vec![], lo: vec![], hi: vec![] }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn window(&self, i: usize) -> (i32, i32) {
        (self.lo[i], self.hi[i])
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }

    fn in_window(&self, exps: &[i32]) -> bool {
        exps.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&e, (&l, &h))| l <= e && e <= h)
    }

    /// Exponent vector of the unit monomial.
    pub fn zero_exps(&self) -> Vec<i32> {
        vec![0; self.vars.len()]
    }

    /// Total width of all windows; used as an iteration bound for
    /// nilpotent series loops.
    fn span(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| (h as i64 - l as i64) as usize)
            .sum()
    }
}

/// One monomial `coeff * Π v_i^{exps[i]}` relative to a shape.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: Rat,
    pub exps: Vec<i32>,
}

impl Monomial {
    pub fn constant(shape: &Shape, coeff: Rat) -> Monomial {
        Monomial { coeff, exps: shape.zero_exps() }
    }

    pub fn var(shape: &Shape, v: Var, coeff: Rat) -> Monomial {
        let mut exps = shape.zero_exps();
        let i = shape.index_of(v).expect("variable not in shape");
        exps[i] = 1;
        Monomial { coeff, exps }
    }

    /// The n-th power (n may be negative when the coefficient is nonzero).
    pub fn pow(&self, n: i64) -> Monomial {
        Monomial {
            coeff: crate::rat::pow_i(&self.coeff, n),
            exps: self.exps.iter().map(|&e| (e as i64 * n) as i32).collect(),
        }
    }
}

/// Sparse truncated series: exponent vector -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiSeries {
    shape: Shape,
    terms: BTreeMap<Vec<i32>, Rat>,
}

impl MultiSeries {
    pub fn zero(shape: &Shape) -> MultiSeries {
        MultiSeries { shape: shape.clone(), terms: BTreeMap::new() }
    }

    pub fn one(shape: &Shape) -> MultiSeries {
        MultiSeries::constant(shape, Rat::one())
    }

    pub fn constant(shape: &Shape, c: Rat) -> MultiSeries {
        let mut s = MultiSeries::zero(shape);
        s.add_term(shape.zero_exps(), c);
        s
    }

    pub fn from_monomial(shape: &Shape, m: &Monomial) -> MultiSeries {
        let mut s = MultiSeries::zero(shape);
        s.add_term(m.exps.clone(), m.coeff.clone());
        s
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i32>, &Rat)> {
        self.terms.iter()
    }

    /// Coefficient of the given exponent vector (zero if absent).
    pub fn coeff(&self, exps: &[i32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&self.shape.zero_exps())
    }

    /// Add `c` at `exps`, dropping the entry if it cancels or lies outside
    /// the window.
    pub fn add_term(&mut self, exps: Vec<i32>, c: Rat) {
        if c.is_zero() || !self.shape.in_window(&exps) {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_shape(&self, other: &MultiSeries, op: &str) {
        assert!(
            self.shape == other.shape,
            "series {op}: mismatched variable sets or windows"
        );
    }

    pub fn add(&self, other: &MultiSeries) -> MultiSeries {
        self.assert_same_shape(other, "add");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiSeries) -> MultiSeries {
        self.assert_same_shape(other, "sub");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiSeries {
        let mut out = MultiSeries::zero(&self.shape);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MultiSeries {
        if c.is_zero() {
            return MultiSeries::zero(&self.shape);
        }
        let mut out = MultiSeries::zero(&self.shape);
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &MultiSeries) -> MultiSeries {
        self.assert_same_shape(other, "mul");
        let mut out = MultiSeries::zero(&self.shape);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<i32> = ea.iter().zip(eb).map(|(&x, &y)| x + y).collect();
                if self.shape.in_window(&exps) {
                    out.add_term(exps, ca * cb);
                }
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiSeries {
        let mut out = MultiSeries::zero(&self.shape);
        if m.coeff.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            let exps: Vec<i32> = e.iter().zip(&m.exps).map(|(&x, &y)| x + y).collect();
            out.add_term(exps, c * &m.coeff);
        }
        out
    }

    /// Multiplicative inverse within the window. The constant term must be
    /// nonzero and every other term must have non-negative exponents, so the
    /// geometric iteration terminates.
    pub fn invert(&self) -> Result<MultiSeries> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(EngineError::ZeroConstantTerm);
        }
        for e in self.terms.keys() {
            if e.iter().any(|&x| x < 0) {
                return Err(EngineError::SupportViolation(
                    "invert requires non-negative exponents beyond the constant".into(),
                ));
            }
        }
        // f = c0 (1 - g);  f^{-1} = c0^{-1} Σ g^k.
        let inv_c0 = Rat::one() / &c0;
        let mut g = self.scale(&inv_c0).neg();
        g.add_term(self.shape.zero_exps(), Rat::one());
        let mut acc = MultiSeries::one(&self.shape);
        let mut pow = MultiSeries::one(&self.shape);
        for _ in 0..=self.shape.span() + 1 {
            pow = pow.mul(&g);
            if pow.is_zero() {
                return Ok(acc.scale(&inv_c0));
            }
            acc = acc.add(&pow);
        }
        Err(EngineError::WindowOverflow)
    }

    /// exp of a series with zero constant term. Terminates because the
    /// window is finite and every power eventually truncates to zero.
    pub fn exp(&self) -> Result<MultiSeries> {
        if !self.constant_term().is_zero() {
            return Err(EngineError::InvalidConfig("exp needs zero constant term".into()));
        }
        let mut acc = MultiSeries::one(&self.shape);
        let mut term = MultiSeries::one(&self.shape);
        for k in 1..=(self.shape.span() as i64 + 2) {
            term = term.mul(self).scale(&(Rat::one() / crate::rat::rat_i(k)));
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&term);
        }
        Err(EngineError::WindowOverflow)
    }

    /// Geometric series 1/(1 - m) for a monomial with positive total degree,
    /// truncated to the window.
    pub fn geometric_inverse(shape: &Shape, m: &Monomial) -> Result<MultiSeries> {
        if m.exps.iter().all(|&e| e == 0) {
            return Err(EngineError::InvalidConfig(
                "geometric inverse needs a non-constant monomial".into(),
            ));
        }
        let mut acc = MultiSeries::one(shape);
        let mut pow = Monomial::constant(shape, Rat::one());
        for _ in 0..=shape.span() + 1 {
            pow = Monomial {
                coeff: &pow.coeff * &m.coeff,
                exps: pow.exps.iter().zip(&m.exps).map(|(&x, &y)| x + y).collect(),
            };
            if !shape.in_window(&pow.exps) {
                return Ok(acc);
            }
            acc.add_term(pow.exps.clone(), pow.coeff.clone());
        }
        Err(EngineError::WindowOverflow)
    }

    /// Substitute each source variable by a coefficient times a monomial of
    /// the target shape. Terms landing outside the target window are
    /// dropped; callers size windows so the certified region is complete.
    pub fn substitute(&self, target: &Shape, map: &[Monomial]) -> MultiSeries {
        assert_eq!(map.len(), self.shape.arity(), "substitution map arity");
        let mut out = MultiSeries::zero(target);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = target.zero_exps();
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let m = map[i].pow(ei as i64);
                coeff *= m.coeff;
                for (x, y) in exps.iter_mut().zip(&m.exps) {
                    *x += y;
                }
            }
            out.add_term(exps, coeff);
        }
        out
    }

    /// Re-embed into a larger shape (every source variable must exist in the
    /// target). Terms outside the target window are dropped.
    pub fn embed(&self, target: &Shape) -> MultiSeries {
        let map: Vec<Monomial> = self
            .shape
            .vars
            .iter()
            .map(|&v| Monomial::var(target, v, Rat::one()))
            .collect();
        self.substitute(target, &map)
    }

    /// True if every exponent of every term is non-negative.
    pub fn has_only_nonnegative_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Restrict to the sub-window of the same shape (drops terms outside).
    pub fn restricted(&self, shape: &Shape) -> MultiSeries {
        assert_eq!(shape.vars, self.shape.vars, "restrict: same variables required");
        let mut out = MultiSeries::zero(shape);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// JSON per the external schema:
    /// `{"vars":[..],"caps":{"Q":[lo,hi],..},"terms":[{"exp":[..],"num":"..","den":".."},..]}`,
    /// terms in lexicographic exponent order.
    pub fn to_json(&self) -> Value {
        let vars: Vec<Value> = self.shape.vars.iter().map(|v| json!(v.to_string())).collect();
        let mut caps = serde_json::Map::new();
        for (i, v) in self.shape.vars.iter().enumerate() {
            caps.insert(v.to_string(), json!([self.shape.lo[i], self.shape.hi[i]]));
        }
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                json!({
                    "exp": e,
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        json!({ "vars": vars, "caps": caps, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<MultiSeries> {
        let bad = |m: &str| EngineError::InvalidConfig(format!("series json: {m}"));
        let vars: Vec<Var> = v["vars"]
            .as_array()
            .ok_or_else(|| bad("vars"))?
            .iter()
            .map(|s| s.as_str().and_then(Var::parse).ok_or_else(|| bad("var name")))
            .collect::<Result<_>>()?;
        let caps = v["caps"].as_object().ok_or_else(|| bad("caps"))?;
        let mut spec = Vec::new();
        for var in &vars {
            let w = caps
                .get(&var.to_string())
                .and_then(|x| x.as_array())
                .ok_or_else(|| bad("cap entry"))?;
            let l = w[0].as_i64().ok_or_else(|| bad("cap lo"))? as i32;
            let h = w[1].as_i64().ok_or_else(|| bad("cap hi"))? as i32;
            spec.push((*var, l, h));
        }
        let shape = Shape::new(spec);
        let mut out = MultiSeries::zero(&shape);
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let exps: Vec<i32> = t["exp"]
                .as_array()
                .ok_or_else(|| bad("exp"))?
                .iter()
                .map(|x| x.as_i64().map(|y| y as i32).ok_or_else(|| bad("exp entry")))
                .collect::<Result<_>>()?;
            let num: num::BigInt =
                t["num"].as_str().ok_or_else(|| bad("num"))?.parse().map_err(|_| bad("num"))?;
            let den: num::BigInt =
                t["den"].as_str().ok_or_else(|| bad("den"))?.parse().map_err(|_| bad("den"))?;
            out.add_term(exps, Rat::new(num, den));
        }
        Ok(out)
    }

    /// CSV rows: one per term, exponents then numerator then denominator,
    /// lexicographic order. The header lists the variable names.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for v in &self.shape.vars {
            s.push_str(&v.to_string());
            s.push(',');
        }
        s.push_str("num,den\n");
        for (e, c) in &self.terms {
            for x in e {
                s.push_str(&x.to_string());
                s.push(',');
            }
            s.push_str(&c.numer().to_string());
            s.push(',');
            s.push_str(&c.denom().to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    write!(f, " {}^{}", self.shape.vars[i], x)?;
                }
            }
        }
        Ok(())
    }
}
