//! Free finite-rank modules over the polynomial ring in `D`, lambda-indexed
//! structure tables, and the sesquilinear evaluation engine.
//!
//! A [`LambdaMap`] stores, for each basis pair, the coefficients of the
//! lambda-product with the formal lambda held in slot `L1`. Evaluation at an
//! arbitrary lambda polynomial applies the sesquilinearity rules: a
//! coefficient `p(D)` on the left argument contributes `p(-lambda)`, on the
//! right `p(D + lambda)`.

use std::sync::Arc;

use crate::poly::{Poly, Ring, VarId};

/// A free finite-rank module over the ring generated by `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    pub name: String,
    pub basis: Vec<String>,
}

impl FreeModule {
    pub fn new(name: &str, basis: &[&str]) -> Arc<FreeModule> {
        let basis: Vec<String> = basis.iter().map(|s| s.to_string()).collect();
        assert!(!basis.is_empty(), "module must have positive rank");
        let mut seen = basis.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), basis.len(), "basis names must be distinct");
        Arc::new(FreeModule {
            name: name.to_string(),
            basis,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// The conformal dual module, with starred basis names.
    pub fn dual(self: &Arc<Self>) -> Arc<FreeModule> {
        Arc::new(FreeModule {
            name: format!("{}*", self.name),
            basis: self.basis.iter().map(|b| format!("{b}*")).collect(),
        })
    }

    /// Direct sum, used by semidirect products and T*-extensions.
    pub fn direct_sum(self: &Arc<Self>, other: &Arc<FreeModule>) -> Arc<FreeModule> {
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        Arc::new(FreeModule {
            name: format!("{}+{}", self.name, other.name),
            basis,
        })
    }
}

/// An element of a free module: one coefficient polynomial per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub module: Arc<FreeModule>,
    pub coeffs: Vec<Poly>,
}

/// Elements of the conformal dual are stored over the dual basis with the
/// same coefficient contract.
pub type DualElement = Element;

impl Element {
    pub fn zero(ring: &Arc<Ring>, module: &Arc<FreeModule>) -> Element {
        Element {
            module: module.clone(),
            coeffs: vec![Poly::zero(ring); module.rank()],
        }
    }

    pub fn basis(ring: &Arc<Ring>, module: &Arc<FreeModule>, i: usize) -> Element {
        let mut e = Element::zero(ring, module);
        e.coeffs[i] = Poly::int(ring, 1);
        e
    }

    pub fn new(module: &Arc<FreeModule>, coeffs: Vec<Poly>) -> Element {
        assert_eq!(coeffs.len(), module.rank(), "coefficient vector length");
        Element {
            module: module.clone(),
            coeffs,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.coeffs[0].ring()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &Element) -> Element {
        assert!(self.module == other.module, "module mismatch");
        Element {
            module: self.module.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        self.map(|p| p.neg())
    }

    pub fn scale(&self, p: &Poly) -> Element {
        self.map(|c| c.mul(p))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Element {
        Element {
            module: self.module.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Multiply by `D`, the action of the derivation.
    pub fn apply_d(&self) -> Element {
        let d = Poly::var(self.ring(), Ring::D);
        self.scale(&d)
    }

    pub fn substitute(&self, var: VarId, repl: &Poly) -> Element {
        self.map(|p| p.substitute(var, repl))
    }

    pub fn fmt_with(&self, name_of: &dyn Fn(VarId) -> String) -> String {
        let mut parts = Vec::new();
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            parts.push(format!("({}) {}", p.fmt_with(name_of), self.module.basis[i]));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ring = self.ring().clone();
        write!(f, "{}", self.fmt_with(&|v| ring.var_name(v).to_string()))
    }
}

/// A lambda-indexed bilinear structure table `U x V -> W[lambda]`, with the
/// formal lambda stored as `L1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMap {
    pub left: Arc<FreeModule>,
    pub right: Arc<FreeModule>,
    pub target: Arc<FreeModule>,
    /// `table[i][j]` is the value on `(e_i, f_j)` as a target element.
    pub table: Vec<Vec<Element>>,
}

impl LambdaMap {
    pub fn zero(
        ring: &Arc<Ring>,
        left: &Arc<FreeModule>,
        right: &Arc<FreeModule>,
        target: &Arc<FreeModule>,
    ) -> LambdaMap {
        LambdaMap {
            left: left.clone(),
            right: right.clone(),
            target: target.clone(),
            table: vec![vec![Element::zero(ring, target); right.rank()]; left.rank()],
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.table[0][0].ring()
    }

    pub fn set(&mut self, i: usize, j: usize, value: Element) {
        assert!(value.module == self.target, "target module mismatch");
        self.table[i][j] = value;
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.table[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().flatten().all(|e| e.is_zero())
    }

    pub fn map_entries(&self, f: impl Fn(&Element) -> Element) -> LambdaMap {
        LambdaMap {
            left: self.left.clone(),
            right: self.right.clone(),
            target: self.target.clone(),
            table: self
                .table
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &LambdaMap) -> LambdaMap {
        assert!(self.left == other.left && self.right == other.right && self.target == other.target);
        LambdaMap {
            left: self.left.clone(),
            right: self.right.clone(),
            target: self.target.clone(),
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a.add(b)).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &LambdaMap) -> LambdaMap {
        self.add(&other.map_entries(|e| e.neg()))
    }

    /// Evaluate `x_out y` by bilinear extension with sesquilinearity. `out`
    /// must be free of `D`.
    pub fn eval(&self, x: &Element, y: &Element, out: &Poly) -> Element {
        assert!(x.module == self.left, "left argument module mismatch");
        assert!(y.module == self.right, "right argument module mismatch");
        assert!(!out.contains_var(Ring::D), "evaluation point must be D-free");
        let ring = self.ring();
        let d = Poly::var(ring, Ring::D);
        let d_plus = d.add(out);
        let minus = out.neg();
        let mut res = Element::zero(ring, &self.target);
        for (i, p) in x.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let pl = p.substitute(Ring::D, &minus);
            for (j, q) in y.coeffs.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let entry = &self.table[i][j];
                if entry.is_zero() {
                    continue;
                }
                let qr = q.substitute(Ring::D, &d_plus);
                let factor = pl.mul(&qr);
                let shifted = entry.substitute(Ring::lambda(1), out);
                res = res.add(&shifted.scale(&factor));
            }
        }
        res
    }

    /// Evaluate `y_{-D-out} x` style conjugate values: evaluate at a fresh
    /// scratch variable and substitute it by `-D - out` afterwards.
    pub fn eval_conjugate(&self, x: &Element, y: &Element, out: &Poly) -> Element {
        // Uses the innermost scratch slot: callers may themselves be
        // evaluating at SCRATCH.
        let ring = self.ring();
        let s = Poly::var(ring, Ring::SCRATCH2);
        let v = self.eval(x, y, &s);
        let repl = Poly::var(ring, Ring::D).neg().sub(out);
        v.substitute(Ring::SCRATCH2, &repl)
    }
}

/// Pairing of a dual element against a module element: `f_out(v)`. On the
/// trivial target the dual coefficient `p(D)` evaluates as `p(-out)` and the
/// element coefficient as `p(out)`; `D` does not survive.
pub fn dual_pair(f: &DualElement, v: &Element, out: &Poly) -> Poly {
    assert_eq!(
        f.module.rank(),
        v.module.rank(),
        "dual pairing rank mismatch"
    );
    let minus = out.neg();
    let mut res = Poly::zero(f.ring());
    for (p, q) in f.coeffs.iter().zip(&v.coeffs) {
        if p.is_zero() || q.is_zero() {
            continue;
        }
        let pf = p.substitute(Ring::D, &minus);
        let qv = q.substitute(Ring::D, out);
        res = res.add(&pf.mul(&qv));
    }
    res
}

/// A module homomorphism commuting with `D`: a matrix of polynomials in `D`
/// (and parameters). Also houses Nijenhuis candidates and the maps `theta`
/// and `phi_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: Arc<FreeModule>,
    pub target: Arc<FreeModule>,
    /// `mat[i]` is the image of source basis `i` as a target element.
    pub mat: Vec<Element>,
}

impl ModuleMap {
    pub fn zero(ring: &Arc<Ring>, source: &Arc<FreeModule>, target: &Arc<FreeModule>) -> ModuleMap {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            mat: vec![Element::zero(ring, target); source.rank()],
        }
    }

    pub fn identity(ring: &Arc<Ring>, module: &Arc<FreeModule>) -> ModuleMap {
        let mut m = ModuleMap::zero(ring, module, module);
        for i in 0..module.rank() {
            m.mat[i] = Element::basis(ring, module, i);
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(ring: &Arc<Ring>, module: &Arc<FreeModule>, k: &Poly) -> ModuleMap {
        let mut m = ModuleMap::identity(ring, module);
        m.mat = m.mat.iter().map(|e| e.scale(k)).collect();
        m
    }

    pub fn from_images(source: &Arc<FreeModule>, images: Vec<Element>) -> ModuleMap {
        assert_eq!(images.len(), source.rank());
        let target = images[0].module.clone();
        ModuleMap {
            source: source.clone(),
            target,
            mat: images,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.mat[0].ring()
    }

    pub fn apply(&self, x: &Element) -> Element {
        assert!(x.module == self.source, "map source mismatch");
        let mut res = Element::zero(self.ring(), &self.target);
        for (i, p) in x.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            res = res.add(&self.mat[i].scale(p));
        }
        res
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        assert!(self.source == other.source && self.target == other.target);
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            mat: self
                .mat
                .iter()
                .zip(&other.mat)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, p: &Poly) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            mat: self.mat.iter().map(|e| e.scale(p)).collect(),
        }
    }

    pub fn compose(&self, inner: &ModuleMap) -> ModuleMap {
        assert!(inner.target == self.source);
        ModuleMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            mat: inner.mat.iter().map(|e| self.apply(e)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|e| e.is_zero())
    }
}

/// A concrete conformal linear map value `f` in CHom(source, target), finitely
/// presented: per source basis element, a target element whose coefficients
/// may involve the map's own variable `MU`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalMapValue {
    pub source: Arc<FreeModule>,
    pub target: Arc<FreeModule>,
    pub table: Vec<Element>,
}

impl ConformalMapValue {
    pub fn zero(
        ring: &Arc<Ring>,
        source: &Arc<FreeModule>,
        target: &Arc<FreeModule>,
    ) -> ConformalMapValue {
        ConformalMapValue {
            source: source.clone(),
            target: target.clone(),
            table: vec![Element::zero(ring, target); source.rank()],
        }
    }

    pub fn from_table(
        source: &Arc<FreeModule>,
        target: &Arc<FreeModule>,
        table: Vec<Element>,
    ) -> ConformalMapValue {
        assert_eq!(table.len(), source.rank());
        ConformalMapValue {
            source: source.clone(),
            target: target.clone(),
            table,
        }
    }

    /// Lift a `D`-module map to a conformal map value (no `MU` dependence).
    pub fn from_module_map(m: &ModuleMap) -> ConformalMapValue {
        ConformalMapValue {
            source: m.source.clone(),
            target: m.target.clone(),
            table: m.mat.clone(),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.table[0].ring()
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &ConformalMapValue) -> ConformalMapValue {
        assert!(self.source == other.source && self.target == other.target);
        ConformalMapValue {
            source: self.source.clone(),
            target: self.target.clone(),
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> ConformalMapValue {
        self.map(|e| e.neg())
    }

    pub fn sub(&self, other: &ConformalMapValue) -> ConformalMapValue {
        self.add(&other.neg())
    }

    pub fn scale(&self, p: &Poly) -> ConformalMapValue {
        self.map(|e| e.scale(p))
    }

    pub fn map(&self, f: impl Fn(&Element) -> Element) -> ConformalMapValue {
        ConformalMapValue {
            source: self.source.clone(),
            target: self.target.clone(),
            table: self.table.iter().map(&f).collect(),
        }
    }

    /// The derivation on CHom: `(D f)_mu = -mu f_mu`.
    pub fn apply_d(&self) -> ConformalMapValue {
        let mu = Poly::var(self.ring(), Ring::MU).neg();
        self.scale(&mu)
    }

    /// Evaluate `f_at(x)` with conformal linearity: a coefficient `p(D)` on
    /// `x` contributes `p(D + at)`. `at` must be free of `D`; it may mention
    /// `MU` itself (shifted evaluation points like `MU - L1`), since the
    /// substitution is single-pass.
    pub fn apply(&self, x: &Element, at: &Poly) -> Element {
        assert!(x.module == self.source, "map source mismatch");
        assert!(!at.contains_var(Ring::D));
        let ring = self.ring();
        let d_plus = Poly::var(ring, Ring::D).add(at);
        let mut res = Element::zero(ring, &self.target);
        for (i, p) in x.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let entry = self.table[i].substitute(Ring::MU, at);
            res = res.add(&entry.scale(&p.substitute(Ring::D, &d_plus)));
        }
        res
    }
}
