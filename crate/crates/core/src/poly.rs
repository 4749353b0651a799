//! Exact multivariate polynomial arithmetic over the rationals.
//!
//! All symbolic data in the engine lives in one [`Ring`]: a fixed set of
//! commuting indeterminates containing `D` (the module derivation), a pool of
//! lambda variables `L1..L6`, the conformal-map variable `MU`, a scratch
//! variable used for `-D - lambda` substitutions, the deformation parameter
//! `T`, and any user-declared parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::Error;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Index of a variable in its ring's registered order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

/// Number of lambda slots available for cochain indices and fresh variables.
pub const N_LAMBDA: usize = 6;

const FIXED_VARS: usize = 1 + N_LAMBDA + 4; // D, L1..L6, MU, S, T, S2

/// The shared variable context. Variable order (graded-lex significance):
/// `D < L1 < ... < L6 < MU < S < T < S2 < params`.
#[derive(Debug, PartialEq, Eq)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    pub const D: VarId = VarId(0);
    pub const MU: VarId = VarId(1 + N_LAMBDA);
    /// Scratch slot for `-D - lambda` style substitutions; never user visible.
    pub const SCRATCH: VarId = VarId(2 + N_LAMBDA);
    pub const T: VarId = VarId(3 + N_LAMBDA);
    /// Second scratch slot, reserved for the innermost conjugate
    /// evaluation so that it cannot collide with an outer use of `SCRATCH`.
    pub const SCRATCH2: VarId = VarId(4 + N_LAMBDA);

    /// The i-th lambda variable, 1-based (`lambda(1)` houses the outer λ,
    /// `lambda(2)` μ, and so on).
    pub fn lambda(i: usize) -> VarId {
        assert!(i >= 1 && i <= N_LAMBDA, "lambda index out of range: {i}");
        VarId(i)
    }

    pub fn new(params: &[&str]) -> Result<Arc<Ring>, Error> {
        let mut vars: Vec<String> = vec!["D".into()];
        for i in 1..=N_LAMBDA {
            vars.push(format!("L{i}"));
        }
        vars.push("MU".into());
        vars.push("S".into());
        vars.push("T".into());
        vars.push("S2".into());
        for p in params {
            if Self::is_reserved(p) {
                return Err(Error::ReservedName(p.to_string()));
            }
            if vars.iter().any(|v| v == p) {
                return Err(Error::DuplicateName(p.to_string()));
            }
            vars.push(p.to_string());
        }
        Ok(Arc::new(Ring { vars }))
    }

    pub fn is_reserved(name: &str) -> bool {
        matches!(name, "D" | "L" | "M" | "T" | "S" | "S2" | "MU")
            || (name.len() >= 2
                && name.starts_with('L')
                && name[1..].chars().all(|c| c.is_ascii_digit()))
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_params(&self) -> usize {
        self.vars.len() - FIXED_VARS
    }

    pub fn params(&self) -> &[String] {
        &self.vars[FIXED_VARS..]
    }

    pub fn param(&self, name: &str) -> Option<VarId> {
        self.vars[FIXED_VARS..]
            .iter()
            .position(|v| v == name)
            .map(|i| VarId(FIXED_VARS + i))
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.vars[v.0]
    }

    /// Resolve a source-language variable name. `L` is an alias for `L1` and
    /// `M` for `L2`.
    pub fn resolve(&self, name: &str) -> Option<VarId> {
        match name {
            "D" => Some(Self::D),
            "L" => Some(Self::lambda(1)),
            "M" => Some(Self::lambda(2)),
            "T" => Some(Self::T),
            _ => {
                if let Some(rest) = name.strip_prefix('L') {
                    if let Ok(i) = rest.parse::<usize>() {
                        if (1..=N_LAMBDA).contains(&i) {
                            return Some(Self::lambda(i));
                        }
                    }
                }
                self.param(name)
            }
        }
    }
}

/// Exponent vector with graded-lex ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(Vec<u16>);

impl Mono {
    fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }

    fn var(n: usize, v: VarId) -> Mono {
        let mut e = vec![0; n];
        e[v.0] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, v: VarId) -> u16 {
        self.0[v.0]
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    fn without(&self, v: VarId) -> Mono {
        let mut e = self.0.clone();
        e[v.0] = 0;
        Mono(e)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in canonical normal form: a map from monomials to nonzero
/// rational coefficients. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<Ring>,
    pub(crate) terms: BTreeMap<Mono, Rat>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Rat) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Mono::one(ring.n_vars()), c);
        }
        p
    }

    pub fn int(ring: &Arc<Ring>, n: i64) -> Poly {
        Poly::constant(ring, rat_int(n))
    }

    pub fn var(ring: &Arc<Ring>, v: VarId) -> Poly {
        let mut p = Poly::zero(ring);
        p.terms
            .insert(Mono::var(ring.n_vars(), v), Rat::one());
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    fn same_ring(&self, other: &Poly) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "polynomials from different ring contexts"
        );
    }

    fn insert_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let mut out = Poly::zero(&self.ring);
        for (m, k) in &self.terms {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::int(&self.ring, 1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Single-variable substitution `var -> repl`, performed in one pass.
    pub fn substitute(&self, var: VarId, repl: &Poly) -> Poly {
        self.same_ring(repl);
        let mut powers: Vec<Poly> = vec![Poly::int(&self.ring, 1)];
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(repl);
                powers.push(next);
            }
            let mut base = Poly::zero(&self.ring);
            base.terms.insert(m.without(var), c.clone());
            out = out.add(&base.mul(&powers[e]));
        }
        out
    }

    /// Simultaneous substitution of several distinct variables.
    pub fn substitute_many(&self, subs: &[(VarId, Poly)]) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut factor = Poly::constant(&self.ring, c.clone());
            for (v, repl) in subs {
                let e = rest.exp(*v);
                if e > 0 {
                    rest = rest.without(*v);
                    factor = factor.mul(&repl.pow(e as u32));
                }
            }
            let mut base = Poly::zero(&self.ring);
            base.terms.insert(rest, Rat::one());
            out = out.add(&base.mul(&factor));
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarId) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// Decompose by powers of `v`: returns `q` with `self = sum q[k] v^k`,
    /// every `q[k]` free of `v`.
    pub fn coeffs_of(&self, v: VarId) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out[e].insert_term(m.without(v), c.clone());
        }
        out
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Mono::one(self.ring.n_vars()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// True when the polynomial is a (possibly zero) rational constant.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn fmt_with(&self, name_of: &dyn Fn(VarId) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                if abs.is_integer() {
                    factors.push(abs.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            for (vi, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let n = name_of(VarId(vi));
                if e == 1 {
                    factors.push(n);
                } else {
                    factors.push(format!("{n}^{e}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.ring.clone();
        write!(f, "{}", self.fmt_with(&|v| ring.var_name(v).to_string()))
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}
impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}
impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}
impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::new(&["c"]).unwrap()
    }

    #[test]
    fn add_cancels() {
        let r = ring();
        let d = Poly::var(&r, Ring::D);
        let l = Poly::var(&r, Ring::lambda(1));
        let sum = &(&d + &l) + &l.neg();
        assert_eq!(sum, d);
    }

    #[test]
    fn square_expansion() {
        let r = ring();
        let d = Poly::var(&r, Ring::D);
        let l = Poly::var(&r, Ring::lambda(1));
        let s = &d + &l;
        let sq = &s * &s;
        let expect = &(&(&d * &d) + &(&d * &l).scale(&rat_int(2))) + &(&l * &l);
        assert_eq!(sq, expect);
        assert_eq!(sq.to_string(), "D^2 + 2*D*L1 + L1^2");
    }

    #[test]
    fn rational_scale() {
        let r = ring();
        let d = Poly::var(&r, Ring::D);
        assert_eq!(d.scale(&rat_int(2)).scale(&rat(1, 2)), d);
    }

    #[test]
    fn substitute_identity_and_shift() {
        let r = ring();
        let d = Poly::var(&r, Ring::D);
        let l = Poly::var(&r, Ring::lambda(1));
        let c = Poly::var(&r, r.param("c").unwrap());
        // substitute(D + L + c, L, -D - L) = c - L
        let p = &(&d + &l) + &c;
        let repl = &d.neg() - &l;
        assert_eq!(p.substitute(Ring::lambda(1), &repl), &c - &l);
        // identity substitution
        assert_eq!(p.substitute(Ring::lambda(1), &l), p);
        // L^2 with L -> -D-L gives the full square
        let sq = (&l * &l).substitute(Ring::lambda(1), &repl);
        let expect = &(&(&d * &d) + &(&d * &l).scale(&rat_int(2))) + &(&l * &l);
        assert_eq!(sq, expect);
    }

    #[test]
    fn zero_tests() {
        let r = ring();
        let d = Poly::var(&r, Ring::D);
        assert!(Poly::zero(&r).is_zero());
        assert!((&d - &d).is_zero());
        let c = Poly::var(&r, r.param("c").unwrap());
        let l = Poly::var(&r, Ring::lambda(1));
        assert!(!(&c * &l).is_zero());
    }

    #[test]
    fn coeff_split_roundtrip() {
        let r = ring();
        let d = Poly::var(&r, Ring::D);
        let l = Poly::var(&r, Ring::lambda(1));
        let p = &(&(&d * &d) + &(&d * &l).scale(&rat_int(3))) + &Poly::int(&r, 7);
        let parts = p.coeffs_of(Ring::D);
        let mut back = Poly::zero(&r);
        for (k, q) in parts.iter().enumerate() {
            back = back.add(&q.mul(&d.pow(k as u32)));
        }
        assert_eq!(back, p);
    }
}
