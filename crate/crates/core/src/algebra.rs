//! Left-symmetric and Lie conformal algebras: constructors, axiom checkers,
//! the sub-adjacent functor, current algebras and homomorphism checking.

use std::sync::Arc;

use crate::conformal::{Element, FreeModule, LambdaMap, ModuleMap};
use crate::poly::{Poly, Rat, Ring};
use crate::report::CheckReport;
use crate::Error;

/// A left-symmetric conformal algebra: a free module with a lambda-product
/// whose associator is symmetric in its first two arguments.
#[derive(Clone, Debug)]
pub struct LscAlgebra {
    pub module: Arc<FreeModule>,
    pub product: LambdaMap,
}

impl LscAlgebra {
    /// Validating constructor.
    pub fn new(module: Arc<FreeModule>, product: LambdaMap) -> Result<LscAlgebra, Error> {
        let a = LscAlgebra { module, product };
        let rep = a.check_axioms();
        if rep.pass() {
            Ok(a)
        } else {
            Err(Error::InvalidStructure(format!(
                "left-symmetric identity fails: {}",
                rep.residuals[0].label
            )))
        }
    }

    /// Escape hatch for candidate tables that are checked later (or expected
    /// to fail).
    pub fn new_unchecked(module: Arc<FreeModule>, product: LambdaMap) -> LscAlgebra {
        LscAlgebra { module, product }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.product.ring()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    /// The residual of the left-symmetric identity on basis triple
    /// `(e_i, e_j, e_k)` with fresh variables `L1` (lambda) and `L2` (mu):
    /// `(a_L b)_{L+M} c - a_L (b_M c) - (b_M a)_{L+M} c + b_M (a_L c)`.
    pub fn associator_asymmetry(&self, i: usize, j: usize, k: usize) -> Element {
        let ring = self.ring();
        let l = Poly::var(ring, Ring::lambda(1));
        let m = Poly::var(ring, Ring::lambda(2));
        let lm = l.add(&m);
        let a = Element::basis(ring, &self.module, i);
        let b = Element::basis(ring, &self.module, j);
        let c = Element::basis(ring, &self.module, k);
        let p = &self.product;
        let t1 = p.eval(&p.eval(&a, &b, &l), &c, &lm);
        let t2 = p.eval(&a, &p.eval(&b, &c, &m), &l);
        let t3 = p.eval(&p.eval(&b, &a, &m), &c, &lm);
        let t4 = p.eval(&b, &p.eval(&a, &c, &l), &m);
        t1.sub(&t2).sub(&t3).add(&t4)
    }

    pub fn check_axioms(&self) -> CheckReport {
        let mut rep = CheckReport::default();
        let names = &self.module.basis;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                for k in 0..self.rank() {
                    let r = self.associator_asymmetry(i, j, k);
                    if !r.is_zero() {
                        rep.push(
                            format!("left-symmetric({},{},{})", names[i], names[j], names[k]),
                            r.to_string(),
                        );
                    }
                }
            }
        }
        rep
    }

    /// The sub-adjacent Lie conformal algebra: bracket
    /// `[a_L b] = a_L b - b_{-D-L} a`.
    pub fn sub_adjacent(&self) -> LieConformalAlgebra {
        let ring = self.ring();
        let l = Poly::var(ring, Ring::lambda(1));
        let mut bracket = LambdaMap::zero(ring, &self.module, &self.module, &self.module);
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let a = Element::basis(ring, &self.module, i);
                let b = Element::basis(ring, &self.module, j);
                let v = self
                    .product
                    .eval(&a, &b, &l)
                    .sub(&self.product.eval_conjugate(&b, &a, &l));
                bracket.set(i, j, v);
            }
        }
        LieConformalAlgebra {
            module: self.module.clone(),
            bracket,
        }
    }
}

/// A Lie conformal algebra: a free module with a skew lambda-bracket
/// satisfying the conformal Jacobi identity.
#[derive(Clone, Debug)]
pub struct LieConformalAlgebra {
    pub module: Arc<FreeModule>,
    pub bracket: LambdaMap,
}

impl LieConformalAlgebra {
    pub fn new(module: Arc<FreeModule>, bracket: LambdaMap) -> Result<LieConformalAlgebra, Error> {
        let r = LieConformalAlgebra { module, bracket };
        let rep = r.check_axioms();
        if rep.pass() {
            Ok(r)
        } else {
            Err(Error::InvalidStructure(format!(
                "Lie conformal axioms fail: {}",
                rep.residuals[0].label
            )))
        }
    }

    pub fn new_unchecked(module: Arc<FreeModule>, bracket: LambdaMap) -> LieConformalAlgebra {
        LieConformalAlgebra { module, bracket }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.bracket.ring()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    /// `[a_L b] + [b_{-D-L} a]` on a basis pair.
    pub fn skew_residual(&self, i: usize, j: usize) -> Element {
        let ring = self.ring();
        let l = Poly::var(ring, Ring::lambda(1));
        let a = Element::basis(ring, &self.module, i);
        let b = Element::basis(ring, &self.module, j);
        self.bracket
            .eval(&a, &b, &l)
            .add(&self.bracket.eval_conjugate(&b, &a, &l))
    }

    /// `[a_L [b_M c]] - [[a_L b]_{L+M} c] - [b_M [a_L c]]` on a basis triple.
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> Element {
        let ring = self.ring();
        let l = Poly::var(ring, Ring::lambda(1));
        let m = Poly::var(ring, Ring::lambda(2));
        let lm = l.add(&m);
        let a = Element::basis(ring, &self.module, i);
        let b = Element::basis(ring, &self.module, j);
        let c = Element::basis(ring, &self.module, k);
        let br = &self.bracket;
        br.eval(&a, &br.eval(&b, &c, &m), &l)
            .sub(&br.eval(&br.eval(&a, &b, &l), &c, &lm))
            .sub(&br.eval(&b, &br.eval(&a, &c, &l), &m))
    }

    pub fn check_axioms(&self) -> CheckReport {
        let mut rep = CheckReport::default();
        let names = &self.module.basis;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let r = self.skew_residual(i, j);
                if !r.is_zero() {
                    rep.push(
                        format!("skew-symmetry({},{})", names[i], names[j]),
                        r.to_string(),
                    );
                }
            }
        }
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                for k in 0..self.rank() {
                    let r = self.jacobi_residual(i, j, k);
                    if !r.is_zero() {
                        rep.push(
                            format!("jacobi({},{},{})", names[i], names[j], names[k]),
                            r.to_string(),
                        );
                    }
                }
            }
        }
        rep
    }
}

/// Classical finite-dimensional left-symmetric identity residual for a
/// lambda- and `D`-free structure constant table `c[i][j]` (entries are
/// coefficient vectors over the basis).
pub fn classical_left_symmetric_residuals(constants: &[Vec<Vec<Rat>>]) -> Vec<(usize, usize, usize)> {
    let n = constants.len();
    let prod = |x: &[Rat], y: &[Rat]| -> Vec<Rat> {
        let mut out = vec![Rat::from_integer(0.into()); n];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                for k in 0..n {
                    out[k] = &out[k] + &(&(xi * yj) * &constants[i][j][k]);
                }
            }
        }
        out
    };
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ei: Vec<Rat> = (0..n)
                    .map(|t| Rat::from_integer(if t == i { 1 } else { 0 }.into()))
                    .collect();
                let ej: Vec<Rat> = (0..n)
                    .map(|t| Rat::from_integer(if t == j { 1 } else { 0 }.into()))
                    .collect();
                let ek: Vec<Rat> = (0..n)
                    .map(|t| Rat::from_integer(if t == k { 1 } else { 0 }.into()))
                    .collect();
                // (ab)c - a(bc) - (ba)c + b(ac)
                let lhs = prod(&prod(&ei, &ej), &ek);
                let r1 = prod(&ei, &prod(&ej, &ek));
                let r2 = prod(&prod(&ej, &ei), &ek);
                let r3 = prod(&ej, &prod(&ei, &ek));
                let residual: Vec<Rat> = (0..n)
                    .map(|t| &(&lhs[t] - &r1[t]) - &(&r2[t] - &r3[t]))
                    .collect();
                if residual.iter().any(|r| !num::Zero::is_zero(r)) {
                    bad.push((i, j, k));
                }
            }
        }
    }
    bad
}

/// Current left-symmetric conformal algebra of a finite-dimensional
/// left-symmetric algebra: the lambda-product is the constant table
/// `a_L b = a . b`.
pub fn current_algebra(
    ring: &Arc<Ring>,
    basis: &[&str],
    constants: &[Vec<Vec<Rat>>],
) -> Result<LscAlgebra, Error> {
    let n = basis.len();
    if constants.len() != n || constants.iter().any(|r| r.len() != n) {
        return Err(Error::Input("structure constant table shape mismatch".into()));
    }
    let bad = classical_left_symmetric_residuals(constants);
    if let Some((i, j, k)) = bad.first() {
        return Err(Error::InvalidStructure(format!(
            "constants fail the left-symmetric identity on ({},{},{})",
            basis[*i], basis[*j], basis[*k]
        )));
    }
    let module = FreeModule::new("Cur", basis);
    let mut product = LambdaMap::zero(ring, &module, &module, &module);
    for i in 0..n {
        for j in 0..n {
            let coeffs: Vec<Poly> = constants[i][j]
                .iter()
                .map(|c| Poly::constant(ring, c.clone()))
                .collect();
            product.set(i, j, Element::new(&module, coeffs));
        }
    }
    Ok(LscAlgebra::new_unchecked(module, product))
}

/// Residuals of `phi(a_L b) - phi(a)_L phi(b)` over basis pairs.
pub fn homomorphism_residuals(
    phi: &ModuleMap,
    source: &LscAlgebra,
    target: &LscAlgebra,
) -> CheckReport {
    assert!(phi.source == source.module && phi.target == target.module);
    let ring = source.ring();
    let l = Poly::var(ring, Ring::lambda(1));
    let mut rep = CheckReport::default();
    for i in 0..source.rank() {
        for j in 0..source.rank() {
            let a = Element::basis(ring, &source.module, i);
            let b = Element::basis(ring, &source.module, j);
            let lhs = phi.apply(&source.product.eval(&a, &b, &l));
            let rhs = target.product.eval(&phi.apply(&a), &phi.apply(&b), &l);
            let r = lhs.sub(&rhs);
            if !r.is_zero() {
                rep.push(
                    format!(
                        "homomorphism({},{})",
                        source.module.basis[i], source.module.basis[j]
                    ),
                    r.to_string(),
                );
            }
        }
    }
    rep
}

pub fn check_homomorphism(phi: &ModuleMap, source: &LscAlgebra, target: &LscAlgebra) -> bool {
    homomorphism_residuals(phi, source, target).pass()
}
