//! Cochains, the two coboundary operators (the left-symmetric `delta` and
//! the Lie `d`), the reindexing isomorphism `Phi`, and bounded-degree
//! cocycle / coboundary linear algebra.
//!
//! An `n`-cochain is stored by its values on basis tuples: a target element
//! whose coefficients are polynomials in `D`, the explicit lambdas
//! `L1..L(n-1)`, and parameters. The implicit last lambda is handled through
//! the evaluation rules. Map-valued Lie cochains additionally carry the map
//! variable `MU` in their values; the derivation acts on those values as
//! multiplication by `-MU`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{LieConformalAlgebra, LscAlgebra};
use crate::conformal::{ConformalMapValue, Element, FreeModule, LambdaMap, ModuleMap};
use num::{One, Zero};

use crate::linalg::{intersection_dim, Matrix};
use crate::poly::{Mono, Poly, Rat, Ring, VarId, N_LAMBDA};
use crate::rep::{hom_module_act, RepPair};
use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Flavor {
    Lie,
    Lsc,
}

/// Iterate all `n`-tuples over `0..rank` in flat-index order.
pub fn tuples(rank: usize, n: usize) -> Vec<Vec<usize>> {
    let count = rank.pow(n as u32);
    (0..count)
        .map(|mut idx| {
            let mut t = vec![0usize; n];
            for s in (0..n).rev() {
                t[s] = idx % rank;
                idx /= rank;
            }
            t
        })
        .collect()
}

pub fn tuple_index(t: &[usize], rank: usize) -> usize {
    t.iter().fold(0, |acc, &i| acc * rank + i)
}

/// Operations a cochain value must support so that evaluation and the Lie
/// coboundary can be written once for module-valued and map-valued tables.
pub trait Value: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, p: &Poly) -> Self;
    fn subst(&self, subs: &[(VarId, Poly)]) -> Self;
    fn is_zero(&self) -> bool;
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl Value for Element {
    fn zero_like(&self) -> Element {
        Element::zero(self.ring(), &self.module)
    }
    fn add(&self, o: &Element) -> Element {
        Element::add(self, o)
    }
    fn neg(&self) -> Element {
        Element::neg(self)
    }
    fn scale(&self, p: &Poly) -> Element {
        Element::scale(self, p)
    }
    fn subst(&self, subs: &[(VarId, Poly)]) -> Element {
        self.map(|q| q.substitute_many(subs))
    }
    fn is_zero(&self) -> bool {
        Element::is_zero(self)
    }
}

impl Value for ConformalMapValue {
    fn zero_like(&self) -> ConformalMapValue {
        ConformalMapValue::zero(self.ring(), &self.source, &self.target)
    }
    fn add(&self, o: &ConformalMapValue) -> ConformalMapValue {
        ConformalMapValue::add(self, o)
    }
    fn neg(&self) -> ConformalMapValue {
        ConformalMapValue::neg(self)
    }
    fn scale(&self, p: &Poly) -> ConformalMapValue {
        ConformalMapValue::scale(self, p)
    }
    fn subst(&self, subs: &[(VarId, Poly)]) -> ConformalMapValue {
        self.map(|e| e.map(|q| q.substitute_many(subs)))
    }
    fn is_zero(&self) -> bool {
        ConformalMapValue::is_zero(self)
    }
}

/// Evaluate a stored table on general arguments. `lams` are the `n-1`
/// explicit evaluation points (any `D`-free polynomials); `partial` is what
/// the derivation acts as on values (`D` for module values, `-MU` for map
/// values): a coefficient `p(D)` in slot `i < n` contributes `p(-lams[i])`,
/// in the last slot `p(partial + sum lams)`.
fn eval_table<V: Value>(
    table: &[V],
    n: usize,
    rank: usize,
    partial: &Poly,
    args: &[Element],
    lams: &[Poly],
) -> V {
    assert_eq!(args.len(), n);
    assert_eq!(lams.len(), n - 1);
    let ring = partial.ring();
    let mut sum_l = Poly::zero(ring);
    for l in lams {
        sum_l = sum_l.add(l);
    }
    let op_point = partial.add(&sum_l);
    let subs: Vec<(VarId, Poly)> = lams
        .iter()
        .enumerate()
        .map(|(s, l)| (Ring::lambda(s + 1), l.clone()))
        .collect();
    let mut out = table[0].zero_like();
    for t in tuples(rank, n) {
        let mut factor = Poly::int(ring, 1);
        let mut skip = false;
        for s in 0..n {
            let p = &args[s].coeffs[t[s]];
            if p.is_zero() {
                skip = true;
                break;
            }
            factor = factor.mul(&if s + 1 < n {
                p.substitute(Ring::D, &lams[s].neg())
            } else {
                p.substitute(Ring::D, &op_point)
            });
        }
        if skip || factor.is_zero() {
            continue;
        }
        let v = &table[tuple_index(&t, rank)];
        if v.is_zero() {
            continue;
        }
        out = out.add(&v.subst(&subs).scale(&factor));
    }
    out
}

/// Skew residuals shared by module- and map-valued cochains. `partial` is
/// the derivation on values. Returns `(label, residual)` pairs; all zero iff
/// the table defines a cochain of the given flavor.
fn skew_residuals_generic<V: Value>(
    table: &[V],
    n: usize,
    rank: usize,
    flavor: Flavor,
    partial: &Poly,
) -> Vec<(String, V)> {
    let ring = partial.ring();
    let mut out = Vec::new();
    // antisymmetry under simultaneous swap of arguments and lambdas, within
    // the first n-1 slots
    for t in tuples(rank, n) {
        for s in 0..n.saturating_sub(1) {
            for u in s + 1..n - 1 {
                let mut tw = t.clone();
                tw.swap(s, u);
                let subs = vec![
                    (Ring::lambda(s + 1), Poly::var(ring, Ring::lambda(u + 1))),
                    (Ring::lambda(u + 1), Poly::var(ring, Ring::lambda(s + 1))),
                ];
                let r = table[tuple_index(&tw, rank)]
                    .subst(&subs)
                    .add(&table[tuple_index(&t, rank)]);
                if !r.is_zero() {
                    out.push((format!("swap({},{}) at {:?}", s + 1, u + 1, t), r));
                }
            }
        }
        if flavor == Flavor::Lie && n >= 2 {
            // swapping slot i with the last slot sends lambda_i to
            // -partial - lambda_1 - ... - lambda_(n-1)
            let mut star = partial.neg();
            for k in 1..n {
                star = star.sub(&Poly::var(ring, Ring::lambda(k)));
            }
            for s in 0..n - 1 {
                let mut tw = t.clone();
                tw.swap(s, n - 1);
                let r = table[tuple_index(&tw, rank)]
                    .subst(&[(Ring::lambda(s + 1), star.clone())])
                    .add(&table[tuple_index(&t, rank)]);
                if !r.is_zero() {
                    out.push((format!("swap-last({}) at {:?}", s + 1, t), r));
                }
            }
        }
    }
    out
}

fn reserved_var_residuals<V: Value>(
    table: &[V],
    n: usize,
    probe: impl Fn(&V, VarId) -> bool,
) -> Vec<String> {
    let mut bad: Vec<VarId> = (n..=N_LAMBDA).map(Ring::lambda).collect();
    bad.push(Ring::SCRATCH);
    bad.push(Ring::SCRATCH2);
    bad.push(Ring::T);
    let mut out = Vec::new();
    for (idx, v) in table.iter().enumerate() {
        for &b in &bad {
            if probe(v, b) {
                out.push(format!("entry {idx} mentions a reserved variable"));
            }
        }
    }
    out
}

/// A module-valued cochain: values on basis tuples in `D`, `L1..L(n-1)`,
/// params.
#[derive(Clone, Debug)]
pub struct Cochain {
    pub n: usize,
    pub flavor: Flavor,
    pub source: Arc<FreeModule>,
    pub target: Arc<FreeModule>,
    pub table: Vec<Element>,
}

impl Cochain {
    pub fn zero(
        ring: &Arc<Ring>,
        source: &Arc<FreeModule>,
        target: &Arc<FreeModule>,
        n: usize,
        flavor: Flavor,
    ) -> Cochain {
        assert!(n >= 1 && n - 1 <= N_LAMBDA);
        let count = source.rank().pow(n as u32);
        Cochain {
            n,
            flavor,
            source: source.clone(),
            target: target.clone(),
            table: vec![Element::zero(ring, target); count],
        }
    }

    pub fn from_fn(
        ring: &Arc<Ring>,
        source: &Arc<FreeModule>,
        target: &Arc<FreeModule>,
        n: usize,
        flavor: Flavor,
        f: impl Fn(&[usize]) -> Element,
    ) -> Cochain {
        let mut c = Cochain::zero(ring, source, target, n, flavor);
        for t in tuples(source.rank(), n) {
            c.table[tuple_index(&t, source.rank())] = f(&t);
        }
        c
    }

    /// A 1-cochain from a `D`-module homomorphism given by its basis images.
    pub fn from_module_map(m: &ModuleMap, flavor: Flavor) -> Cochain {
        Cochain {
            n: 1,
            flavor,
            source: m.source.clone(),
            target: m.target.clone(),
            table: m.mat.clone(),
        }
    }

    /// A 2-cochain from a lambda-table (e.g. the product itself).
    pub fn from_lambda_map(m: &LambdaMap, flavor: Flavor) -> Cochain {
        assert!(m.left == m.right);
        let rank = m.left.rank();
        let mut table = Vec::with_capacity(rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                table.push(m.entry(i, j).clone());
            }
        }
        Cochain {
            n: 2,
            flavor,
            source: m.left.clone(),
            target: m.target.clone(),
            table,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.table[0].ring()
    }

    pub fn get(&self, t: &[usize]) -> &Element {
        &self.table[tuple_index(t, self.source.rank())]
    }

    pub fn set(&mut self, t: &[usize], v: Element) {
        self.table[tuple_index(t, self.source.rank())] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(Element::is_zero)
    }

    pub fn add(&self, o: &Cochain) -> Cochain {
        assert!(self.n == o.n && self.flavor == o.flavor);
        let mut c = self.clone();
        for (a, b) in c.table.iter_mut().zip(&o.table) {
            *a = a.add(b);
        }
        c
    }

    pub fn sub(&self, o: &Cochain) -> Cochain {
        self.add(&o.map(Element::neg))
    }

    pub fn map(&self, f: impl Fn(&Element) -> Element) -> Cochain {
        let mut c = self.clone();
        for v in c.table.iter_mut() {
            *v = f(v);
        }
        c
    }

    pub fn scale(&self, p: &Poly) -> Cochain {
        self.map(|v| v.scale(p))
    }

    /// Evaluate on general arguments at the given `n-1` lambda polynomials.
    pub fn eval(&self, args: &[Element], lams: &[Poly]) -> Element {
        let d = Poly::var(self.ring(), Ring::D);
        eval_table(&self.table, self.n, self.source.rank(), &d, args, lams)
    }

    pub fn validate(&self) -> CheckReport {
        let mut rep = CheckReport::default();
        for msg in reserved_var_residuals(&self.table, self.n, |v, b| {
            v.coeffs.iter().any(|p| p.contains_var(b))
        }) {
            rep.push(msg, "reserved".into());
        }
        if self
            .table
            .iter()
            .any(|v| v.coeffs.iter().any(|p| p.contains_var(Ring::MU)))
        {
            rep.push("entries mention MU".into(), "reserved".into());
        }
        let d = Poly::var(self.ring(), Ring::D);
        for (label, r) in
            skew_residuals_generic(&self.table, self.n, self.source.rank(), self.flavor, &d)
        {
            rep.push(label, r.to_string());
        }
        rep
    }

    /// All table entries flattened to component polynomials.
    pub(crate) fn component_polys(&self) -> Vec<Poly> {
        self.table.iter().flat_map(|v| v.coeffs.clone()).collect()
    }
}

/// A Lie conformal module: the bracket together with one action table.
#[derive(Clone, Debug)]
pub struct LieModule {
    pub lie: LieConformalAlgebra,
    pub action: LambdaMap,
}

impl LieModule {
    pub fn adjoint(lie: &LieConformalAlgebra) -> LieModule {
        LieModule {
            lie: lie.clone(),
            action: lie.bracket.clone(),
        }
    }

    pub fn module(&self) -> &Arc<FreeModule> {
        &self.action.target
    }

    /// Residuals of `[a_L b]_{L+M} v = a_L(b_M v) - b_M(a_L v)`.
    pub fn check(&self) -> CheckReport {
        let ring = self.action.ring().clone();
        let l1 = Poly::var(&ring, Ring::lambda(1));
        let l2 = Poly::var(&ring, Ring::lambda(2));
        let lm = l1.add(&l2);
        let mut rep = CheckReport::default();
        for i in 0..self.lie.rank() {
            for j in 0..self.lie.rank() {
                for k in 0..self.module().rank() {
                    let a = Element::basis(&ring, &self.lie.module, i);
                    let b = Element::basis(&ring, &self.lie.module, j);
                    let v = Element::basis(&ring, self.module(), k);
                    let t1 = self
                        .action
                        .eval(&self.lie.bracket.eval(&a, &b, &l1), &v, &lm);
                    let t2 = self.action.eval(&a, &self.action.eval(&b, &v, &l2), &l1);
                    let t3 = self.action.eval(&b, &self.action.eval(&a, &v, &l1), &l2);
                    let r = t1.sub(&t2).add(&t3);
                    if !r.is_zero() {
                        rep.push(format!("lie-module({i},{j},{k})"), r.to_string());
                    }
                }
            }
        }
        rep
    }
}

/// An abstract Lie action on cochain values.
trait LieAct {
    type V: Value;
    fn ring(&self) -> &Arc<Ring>;
    fn partial(&self) -> Poly;
    fn act(&self, x: &Element, v: &Self::V, lam: &Poly) -> Self::V;
    /// `x_{-partial-shift} v` via a scratch evaluation point.
    fn act_conj(&self, x: &Element, v: &Self::V, shift: &Poly) -> Self::V {
        let s = Poly::var(self.ring(), Ring::SCRATCH);
        let w = self.act(x, v, &s);
        let repl = self.partial().neg().sub(shift);
        w.subst(&[(Ring::SCRATCH, repl)])
    }
}

struct ElementAct<'a> {
    action: &'a LambdaMap,
}

impl LieAct for ElementAct<'_> {
    type V = Element;
    fn ring(&self) -> &Arc<Ring> {
        self.action.ring()
    }
    fn partial(&self) -> Poly {
        Poly::var(self.ring(), Ring::D)
    }
    fn act(&self, x: &Element, v: &Element, lam: &Poly) -> Element {
        self.action.eval(x, v, lam)
    }
}

struct MapAct<'a> {
    algebra: &'a LscAlgebra,
    rep: &'a RepPair,
}

impl LieAct for MapAct<'_> {
    type V = ConformalMapValue;
    fn ring(&self) -> &Arc<Ring> {
        self.algebra.ring()
    }
    fn partial(&self) -> Poly {
        Poly::var(self.ring(), Ring::MU).neg()
    }
    fn act(&self, x: &Element, v: &ConformalMapValue, lam: &Poly) -> ConformalMapValue {
        hom_module_act(self.algebra, self.rep, x, v, lam)
    }
}

/// The Lie coboundary display on an abstract value table. The final
/// displayed term runs with its index over `1..n`; its lambda list is the
/// full permuted list with the redundant last entry dropped.
fn d_generic<A: LieAct>(
    bracket: &LambdaMap,
    act: &A,
    n: usize,
    table: &[A::V],
) -> Vec<A::V> {
    let ring = act.ring().clone();
    let rank = bracket.left.rank();
    let partial = act.partial();
    let lam: Vec<Poly> = (1..=n + 1).map(|k| Poly::var(&ring, Ring::lambda(k))).collect();
    let basis: Vec<Element> = (0..rank)
        .map(|i| Element::basis(&ring, &bracket.left, i))
        .collect();
    let sign = |k: usize| {
        if k % 2 == 0 {
            1i64
        } else {
            -1i64
        }
    };
    let signed = |v: A::V, s: i64| if s >= 0 { v } else { v.neg() };
    let mut out = Vec::new();
    for t in tuples(rank, n + 1) {
        let a: Vec<&Element> = t.iter().map(|&i| &basis[i]).collect();
        let mut acc = table[0].zero_like();
        // sum_i (-1)^(i+1) a_i acting on gamma with slot i removed
        for i in 0..n {
            let args: Vec<Element> = (0..=n).filter(|&k| k != i).map(|k| a[k].clone()).collect();
            let lams: Vec<Poly> = (0..n).filter(|&k| k != i).map(|k| lam[k].clone()).collect();
            let inner = eval_table(table, n, rank, &partial, &args, &lams[..n - 1]);
            acc = acc.add(&signed(act.act(a[i], &inner, &lam[i]), sign(i)));
        }
        // (-1)^n a_(n+1) at -partial-(L1+..+Ln) acting on gamma(a_1..a_n)
        {
            let args: Vec<Element> = (0..n).map(|k| a[k].clone()).collect();
            let inner = eval_table(table, n, rank, &partial, &args, &lam[..n - 1]);
            let mut shift = Poly::zero(&ring);
            for l in &lam[..n] {
                shift = shift.add(l);
            }
            acc = acc.add(&signed(act.act_conj(a[n], &inner, &shift), sign(n)));
        }
        // sum_(i<j<=n) (-1)^(i+j) gamma([a_i a_j], rest)
        for i in 0..n {
            for j in i + 1..n {
                let mut args = vec![bracket.eval(a[i], a[j], &lam[i])];
                let mut lams = vec![lam[i].add(&lam[j])];
                for k in 0..=n {
                    if k != i && k != j {
                        args.push(a[k].clone());
                        if k < n {
                            lams.push(lam[k].clone());
                        }
                    }
                }
                let inner = eval_table(table, n, rank, &partial, &args, &lams[..n - 1]);
                acc = acc.add(&signed(inner, sign(i + j)));
            }
        }
        // sum_i (-1)^(i+n+1) gamma([a_i a_(n+1)], rest) with the first
        // lambda at -partial - sum of the others
        for i in 0..n {
            let s = Poly::var(&ring, Ring::SCRATCH);
            let mut args = vec![bracket.eval(a[i], a[n], &lam[i])];
            let mut full = vec![s.clone()];
            for k in 0..n {
                if k != i {
                    args.push(a[k].clone());
                    full.push(lam[k].clone());
                }
            }
            full.pop();
            let mut inner = eval_table(table, n, rank, &partial, &args, &full[..n - 1]);
            if n >= 2 {
                let mut shift = partial.neg();
                for k in 0..n {
                    if k != i {
                        shift = shift.sub(&lam[k]);
                    }
                }
                inner = inner.subst(&[(Ring::SCRATCH, shift)]);
            }
            acc = acc.add(&signed(inner, sign(i + n)));
        }
        out.push(acc);
        let _ = t;
    }
    out
}

/// The Lie coboundary on a module-valued cochain.
pub fn d_lie(m: &LieModule, g: &Cochain) -> Cochain {
    assert_eq!(g.flavor, Flavor::Lie);
    assert!(g.source == m.lie.module && g.target == *m.module());
    let act = ElementAct { action: &m.action };
    let table = d_generic(&m.lie.bracket, &act, g.n, &g.table);
    Cochain {
        n: g.n + 1,
        flavor: Flavor::Lie,
        source: g.source.clone(),
        target: g.target.clone(),
        table,
    }
}

/// A Lie cochain valued in concrete conformal maps `A -> M` (the `CHom`
/// coefficients of the diagram lemma). Entries carry `MU` as the map
/// variable.
#[derive(Clone, Debug)]
pub struct MapCochain {
    pub n: usize,
    pub source: Arc<FreeModule>,
    pub table: Vec<ConformalMapValue>,
}

impl MapCochain {
    pub fn zero(
        ring: &Arc<Ring>,
        source: &Arc<FreeModule>,
        map_source: &Arc<FreeModule>,
        map_target: &Arc<FreeModule>,
        n: usize,
    ) -> MapCochain {
        let count = source.rank().pow(n as u32);
        MapCochain {
            n,
            source: source.clone(),
            table: vec![ConformalMapValue::zero(ring, map_source, map_target); count],
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.table[0].ring()
    }

    pub fn get(&self, t: &[usize]) -> &ConformalMapValue {
        &self.table[tuple_index(t, self.source.rank())]
    }

    pub fn set(&mut self, t: &[usize], v: ConformalMapValue) {
        self.table[tuple_index(t, self.source.rank())] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(ConformalMapValue::is_zero)
    }

    pub fn sub(&self, o: &MapCochain) -> MapCochain {
        assert_eq!(self.n, o.n);
        let mut c = self.clone();
        for (a, b) in c.table.iter_mut().zip(&o.table) {
            *a = a.sub(b);
        }
        c
    }

    pub fn validate(&self) -> CheckReport {
        let mut rep = CheckReport::default();
        for msg in reserved_var_residuals(&self.table, self.n, |v, b| {
            v.table.iter().any(|e| e.coeffs.iter().any(|p| p.contains_var(b)))
        }) {
            rep.push(msg, "reserved".into());
        }
        let partial = Poly::var(self.ring(), Ring::MU).neg();
        for (label, r) in
            skew_residuals_generic(&self.table, self.n, self.source.rank(), Flavor::Lie, &partial)
        {
            let text = r
                .table
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            rep.push(label, text);
        }
        rep
    }
}

/// The Lie coboundary on a map-valued cochain, with the action given by the
/// sub-adjacent bracket on `CHom(A, M)`.
pub fn d_lie_map(a: &LscAlgebra, rep: &RepPair, g: &MapCochain) -> MapCochain {
    let lie = a.sub_adjacent();
    let act = MapAct { algebra: a, rep };
    let table = d_generic(&lie.bracket, &act, g.n, &g.table);
    MapCochain {
        n: g.n + 1,
        source: g.source.clone(),
        table,
    }
}

/// The left-symmetric coboundary display.
pub fn delta_lsc(rep: &RepPair, g: &Cochain) -> Cochain {
    assert_eq!(g.flavor, Flavor::Lsc);
    assert!(g.source == rep.algebra.module && g.target == rep.module);
    let ring = g.ring().clone();
    let n = g.n;
    let rank = g.source.rank();
    let bracket = rep.algebra.sub_adjacent().bracket;
    let lam: Vec<Poly> = (1..=n).map(|k| Poly::var(&ring, Ring::lambda(k))).collect();
    let basis: Vec<Element> = (0..rank)
        .map(|i| Element::basis(&ring, &g.source, i))
        .collect();
    let mut sum_all = Poly::zero(&ring);
    for l in &lam {
        sum_all = sum_all.add(l);
    }
    let signed = |v: Element, odd: bool| if odd { v.neg() } else { v };
    let mut out = Cochain::zero(&ring, &g.source, &g.target, n + 1, Flavor::Lsc);
    for t in tuples(rank, n + 1) {
        let a: Vec<&Element> = t.iter().map(|&i| &basis[i]).collect();
        let mut acc = Element::zero(&ring, &g.target);
        for i in 0..n {
            let odd = i % 2 == 1; // (-1)^(i+1) with 1-based i
            let rest: Vec<Element> = (0..n).filter(|&k| k != i).map(|k| a[k].clone()).collect();
            let lams: Vec<Poly> = (0..n).filter(|&k| k != i).map(|k| lam[k].clone()).collect();
            // a_i acting on gamma(.., a_(n+1))
            let mut args = rest.clone();
            args.push(a[n].clone());
            let inner = g.eval(&args, &lams);
            acc = acc.add(&signed(rep.l.eval(a[i], &inner, &lam[i]), odd));
            // gamma(.., a_i) acting on a_(n+1) at the total lambda
            let mut args = rest.clone();
            args.push(a[i].clone());
            let inner = g.eval(&args, &lams);
            acc = acc.add(&signed(rep.right_act(&inner, a[n], &sum_all), odd));
            // - gamma(.., a_i acting on a_(n+1))
            let mut args = rest;
            args.push(rep.algebra.product.eval(a[i], a[n], &lam[i]));
            acc = acc.add(&signed(g.eval(&args, &lams), !odd));
        }
        for i in 0..n {
            for j in i + 1..n {
                let odd = (i + j) % 2 == 1; // (-1)^(i+j) with 1-based indices
                let mut args = vec![bracket.eval(a[i], a[j], &lam[i])];
                let mut lams = vec![lam[i].add(&lam[j])];
                for k in 0..=n {
                    if k != i && k != j {
                        args.push(a[k].clone());
                        if k < n {
                            lams.push(lam[k].clone());
                        }
                    }
                }
                acc = acc.add(&signed(g.eval(&args, &lams), odd));
            }
        }
        out.set(&t, acc);
    }
    out
}

/// `Phi`: a map-valued Lie `(n-1)`-cochain becomes the left-symmetric
/// `n`-cochain `(g(a_1..a_(n-1)))_{L1+..+L(n-1)}(a_n)`.
pub fn phi(g: &MapCochain) -> Cochain {
    let ring = g.ring().clone();
    let rank = g.source.rank();
    let n = g.n + 1;
    let mut sum = Poly::zero(&ring);
    for k in 1..n {
        sum = sum.add(&Poly::var(&ring, Ring::lambda(k)));
    }
    let target = g.table[0].target.clone();
    let mut out = Cochain::zero(&ring, &g.source, &target, n, Flavor::Lsc);
    for t in tuples(rank, n) {
        let v = g.get(&t[..n - 1]);
        out.set(&t, v.table[t[n - 1]].substitute(Ring::MU, &sum));
    }
    out
}

/// `Phi` inverse: reintroduce the map variable via
/// `L(n-1) -> MU - L1 - .. - L(n-2)`. Requires `n >= 2`.
pub fn phi_inv(c: &Cochain) -> MapCochain {
    assert!(c.n >= 2);
    let ring = c.ring().clone();
    let rank = c.source.rank();
    let n = c.n;
    let mut repl = Poly::var(&ring, Ring::MU);
    for k in 1..n - 1 {
        repl = repl.sub(&Poly::var(&ring, Ring::lambda(k)));
    }
    let mut out = MapCochain::zero(&ring, &c.source, &c.source, &c.target, n - 1);
    for t in tuples(rank, n - 1) {
        let table: Vec<Element> = (0..rank)
            .map(|j| {
                let mut full = t.clone();
                full.push(j);
                c.get(&full).substitute(Ring::lambda(n - 1), &repl)
            })
            .collect();
        out.set(&t, ConformalMapValue::from_table(&c.source, &c.target, table));
    }
    out
}

pub fn is_lsc_cocycle(rep: &RepPair, g: &Cochain) -> bool {
    delta_lsc(rep, g).is_zero()
}

pub fn is_lie_cocycle(m: &LieModule, g: &Cochain) -> bool {
    d_lie(m, g).is_zero()
}

/// The finite-dimensional coefficient space of candidate cochains: every
/// basis tuple, target component, and monomial in `D, L1..L(n-1)` of total
/// degree at most `cap` (parameters are not used in candidates).
pub struct CochainSpace {
    pub n: usize,
    pub flavor: Flavor,
    pub cap: u32,
    pub ring: Arc<Ring>,
    pub source: Arc<FreeModule>,
    pub target: Arc<FreeModule>,
    pub monos: Vec<Poly>,
}

impl CochainSpace {
    pub fn new(
        ring: &Arc<Ring>,
        source: &Arc<FreeModule>,
        target: &Arc<FreeModule>,
        n: usize,
        flavor: Flavor,
        cap: u32,
    ) -> CochainSpace {
        let mut vars = vec![Ring::D];
        for k in 1..n {
            vars.push(Ring::lambda(k));
        }
        let mut monos = Vec::new();
        let mut exps = vec![0u32; vars.len()];
        gen_monos(ring, &vars, &mut exps, 0, cap, &mut monos);
        CochainSpace {
            n,
            flavor,
            cap,
            ring: ring.clone(),
            source: source.clone(),
            target: target.clone(),
            monos,
        }
    }

    pub fn dim(&self) -> usize {
        self.source.rank().pow(self.n as u32) * self.target.rank() * self.monos.len()
    }

    pub fn cochain(&self, coeffs: &[Rat]) -> Cochain {
        assert_eq!(coeffs.len(), self.dim());
        let mut c = Cochain::zero(&self.ring, &self.source, &self.target, self.n, self.flavor);
        let m = self.monos.len();
        let tr = self.target.rank();
        for (idx, v) in c.table.iter_mut().enumerate() {
            let mut comps = Vec::with_capacity(tr);
            for comp in 0..tr {
                let mut p = Poly::zero(&self.ring);
                for (k, mono) in self.monos.iter().enumerate() {
                    let coeff = &coeffs[(idx * tr + comp) * m + k];
                    if !coeff.is_zero() {
                        p = p.add(&mono.scale(coeff));
                    }
                }
                comps.push(p);
            }
            *v = Element::new(&self.target, comps);
        }
        c
    }

    pub fn unit(&self, k: usize) -> Cochain {
        let mut coeffs = vec![Rat::zero(); self.dim()];
        coeffs[k] = Rat::one();
        self.cochain(&coeffs)
    }
}

fn gen_monos(
    ring: &Arc<Ring>,
    vars: &[VarId],
    exps: &mut Vec<u32>,
    pos: usize,
    budget: u32,
    out: &mut Vec<Poly>,
) {
    if pos == vars.len() {
        let mut p = Poly::int(ring, 1);
        for (v, &e) in vars.iter().zip(exps.iter()) {
            p = p.mul(&Poly::var(ring, *v).pow(e));
        }
        out.push(p);
        return;
    }
    for e in 0..=budget {
        exps[pos] = e;
        gen_monos(ring, vars, exps, pos + 1, budget - e, out);
    }
    exps[pos] = 0;
}

/// Stack polynomial equation systems into an exact rational matrix: one row
/// per (equation index, monomial) pair that appears in any column or in the
/// right-hand side.
pub(crate) fn vectorize(cols: &[Vec<Poly>], rhs: Option<&[Poly]>) -> (Matrix, Vec<Rat>) {
    let eqs = if let Some(r) = rhs {
        r.len()
    } else {
        cols.first().map(|c| c.len()).unwrap_or(0)
    };
    let mut rows: BTreeSet<(usize, Mono)> = BTreeSet::new();
    for col in cols {
        assert_eq!(col.len(), eqs);
        for (e, p) in col.iter().enumerate() {
            for m in p.terms.keys() {
                rows.insert((e, m.clone()));
            }
        }
    }
    if let Some(r) = rhs {
        for (e, p) in r.iter().enumerate() {
            for m in p.terms.keys() {
                rows.insert((e, m.clone()));
            }
        }
    }
    let rows: Vec<(usize, Mono)> = rows.into_iter().collect();
    let mut mat = Matrix::zero(rows.len(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, (e, m)) in rows.iter().enumerate() {
            if let Some(c) = col[*e].terms.get(m) {
                mat[(i, j)] = c.clone();
            }
        }
    }
    let b = match rhs {
        Some(r) => rows
            .iter()
            .map(|(e, m)| r[*e].terms.get(m).cloned().unwrap_or_else(Rat::zero))
            .collect(),
        None => vec![Rat::zero(); rows.len()],
    };
    (mat, b)
}

/// Solve `delta(eta) = omega` for an `(n-1)`-cochain with entries of total
/// degree at most `cap`. Validity of `eta` is part of the linear system.
/// `None` means no witness exists at this cap.
pub fn coboundary_solve(rep: &RepPair, omega: &Cochain, cap: u32) -> Option<Cochain> {
    assert!(omega.n >= 2, "a 1-cochain has no potential");
    let space = CochainSpace::new(
        omega.ring(),
        &omega.source,
        &omega.target,
        omega.n - 1,
        Flavor::Lsc,
        cap,
    );
    let cols: Vec<Vec<Poly>> = (0..space.dim())
        .map(|k| {
            let eta = space.unit(k);
            let mut col = delta_lsc(rep, &eta).component_polys();
            col.extend(eta.skew_polys_padded());
            col
        })
        .collect();
    let mut rhs = omega.component_polys();
    let pad = cols.first().map(|c| c.len()).unwrap_or(rhs.len()) - rhs.len();
    rhs.extend(vec![Poly::zero(omega.ring()); pad]);
    let (mat, b) = vectorize(&cols, Some(&rhs));
    mat.solve(&b).map(|sol| space.cochain(&sol))
}

impl Cochain {
    /// Skew residuals on the full constraint list (not only the nonzero
    /// ones), so columns of a linear system line up across unit cochains.
    fn skew_polys_padded(&self) -> Vec<Poly> {
        let ring = self.ring().clone();
        let d = Poly::var(&ring, Ring::D);
        let rank = self.source.rank();
        let n = self.n;
        let mut out = Vec::new();
        for t in tuples(rank, n) {
            for s in 0..n.saturating_sub(1) {
                for u in s + 1..n - 1 {
                    let mut tw = t.clone();
                    tw.swap(s, u);
                    let subs = vec![
                        (Ring::lambda(s + 1), Poly::var(&ring, Ring::lambda(u + 1))),
                        (Ring::lambda(u + 1), Poly::var(&ring, Ring::lambda(s + 1))),
                    ];
                    let r = self.table[tuple_index(&tw, rank)]
                        .map(|q| q.substitute_many(&subs))
                        .add(&self.table[tuple_index(&t, rank)]);
                    out.extend(r.coeffs);
                }
            }
            if self.flavor == Flavor::Lie && n >= 2 {
                let mut star = d.neg();
                for k in 1..n {
                    star = star.sub(&Poly::var(&ring, Ring::lambda(k)));
                }
                for s in 0..n - 1 {
                    let mut tw = t.clone();
                    tw.swap(s, n - 1);
                    let r = self.table[tuple_index(&tw, rank)]
                        .substitute(Ring::lambda(s + 1), &star)
                        .add(&self.table[tuple_index(&t, rank)]);
                    out.extend(r.coeffs);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub n: usize,
    pub degree_z: u32,
    pub degree_b: u32,
    /// dim of cocycles with entries of total degree <= degree_z
    pub dim_z: usize,
    /// dim of (delta of valid cochains of degree <= degree_b) within that
    /// cocycle space
    pub dim_b: usize,
    /// upper bound on the capped cohomology; non-increasing in degree_b
    pub estimate: usize,
}

/// Bounded-degree surrogate for `H^n(A, M)`: exact dimensions of the
/// degree-capped cocycle space and of the capped coboundaries inside it.
/// The complex starts at n = 1, so there are no 1-coboundaries.
pub fn h_dim_bounded(
    rep: &RepPair,
    n: usize,
    degree_z: u32,
    degree_b: u32,
) -> CohomologyReport {
    let ring = rep.algebra.ring().clone();
    let space = CochainSpace::new(
        &ring,
        &rep.algebra.module,
        &rep.module,
        n,
        Flavor::Lsc,
        degree_z,
    );
    let cols: Vec<Vec<Poly>> = (0..space.dim())
        .map(|k| {
            let g = space.unit(k);
            let mut col = delta_lsc(rep, &g).component_polys();
            col.extend(g.skew_polys_padded());
            col
        })
        .collect();
    let (mat, _) = vectorize(&cols, None);
    let z_basis = mat.nullspace();
    let dim_z = z_basis.len();

    let dim_b = if n == 1 || dim_z == 0 {
        0
    } else {
        let bspace = CochainSpace::new(
            &ring,
            &rep.algebra.module,
            &rep.module,
            n - 1,
            Flavor::Lsc,
            degree_b,
        );
        let valid_cols: Vec<Vec<Poly>> = (0..bspace.dim())
            .map(|k| bspace.unit(k).skew_polys_padded())
            .collect();
        let (vmat, _) = vectorize(&valid_cols, None);
        let eta_basis = vmat.nullspace();
        // compare images and cocycles in one shared polynomial coordinate
        // system
        let image_polys: Vec<Vec<Poly>> = eta_basis
            .iter()
            .map(|v| delta_lsc(rep, &bspace.cochain(v)).component_polys())
            .collect();
        let z_polys: Vec<Vec<Poly>> = z_basis
            .iter()
            .map(|v| space.cochain(v).component_polys())
            .collect();
        let mut all = image_polys.clone();
        all.extend(z_polys.clone());
        let (joint, _) = vectorize(&all, None);
        let columns: Vec<Vec<Rat>> = (0..all.len())
            .map(|j| (0..joint.rows).map(|i| joint[(i, j)].clone()).collect())
            .collect();
        let (im, zc) = columns.split_at(image_polys.len());
        intersection_dim(im, zc)
    };
    CohomologyReport {
        n,
        degree_z,
        degree_b,
        dim_z,
        dim_b,
        estimate: dim_z - dim_b,
    }
}
