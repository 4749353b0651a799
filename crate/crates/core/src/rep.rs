//! Conformal modules over a left-symmetric conformal algebra as `(l, r)`
//! pairs, the adjoint / coadjoint / dual-left representations, semidirect
//! products, and the action of the sub-adjacent algebra on concrete
//! conformal maps.

use std::sync::Arc;

use crate::algebra::LscAlgebra;
use crate::conformal::{ConformalMapValue, Element, FreeModule, LambdaMap};
use crate::poly::{Poly, Ring};
use crate::report::CheckReport;
use crate::Error;

/// A conformal module `(M, l, r)`: two lambda-action tables of the algebra on
/// a free module. The right action is stored as the map `r` with the
/// convention `v_L a = r(a)_{-D-L} v`.
#[derive(Clone, Debug)]
pub struct RepPair {
    pub algebra: LscAlgebra,
    pub module: Arc<FreeModule>,
    pub l: LambdaMap,
    pub r: LambdaMap,
}

impl RepPair {
    pub fn new(algebra: LscAlgebra, l: LambdaMap, r: LambdaMap) -> Result<RepPair, Error> {
        let module = l.right.clone();
        assert!(l.left == algebra.module && r.left == algebra.module);
        assert!(l.target == module && r.right == module && r.target == module);
        let rep = RepPair {
            algebra,
            module,
            l,
            r,
        };
        let check = rep.check();
        if check.pass() {
            Ok(rep)
        } else {
            Err(Error::InvalidStructure(format!(
                "module identities fail: {}",
                check.residuals[0].label
            )))
        }
    }

    pub fn new_unchecked(algebra: LscAlgebra, l: LambdaMap, r: LambdaMap) -> RepPair {
        let module = l.right.clone();
        RepPair {
            algebra,
            module,
            l,
            r,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.l.ring()
    }

    /// First compatibility residual on `(e_i, e_j, v_k)`:
    /// `l(a_L b)_{L+M} v - l(a)_L l(b)_M v - l(b_M a)_{L+M} v + l(b)_M l(a)_L v`.
    pub fn left_residual(&self, i: usize, j: usize, k: usize) -> Element {
        let ring = self.ring();
        let l1 = Poly::var(ring, Ring::lambda(1));
        let l2 = Poly::var(ring, Ring::lambda(2));
        let lm = l1.add(&l2);
        let a = Element::basis(ring, &self.algebra.module, i);
        let b = Element::basis(ring, &self.algebra.module, j);
        let v = Element::basis(ring, &self.module, k);
        let prod = &self.algebra.product;
        let t1 = self.l.eval(&prod.eval(&a, &b, &l1), &v, &lm);
        let t2 = self.l.eval(&a, &self.l.eval(&b, &v, &l2), &l1);
        let t3 = self.l.eval(&prod.eval(&b, &a, &l2), &v, &lm);
        let t4 = self.l.eval(&b, &self.l.eval(&a, &v, &l1), &l2);
        t1.sub(&t2).sub(&t3).add(&t4)
    }

    /// Second compatibility residual on `(e_i, e_j, v_k)`:
    /// `r(b)_{-D-L-M}(l(a)_L v) - l(a)_L(r(b)_{-D-M} v)
    ///  - r(b)_{-D-L-M}(r(a)_L v) + r(a_L b)_{-D-M} v`.
    pub fn right_residual(&self, i: usize, j: usize, k: usize) -> Element {
        let ring = self.ring();
        let l1 = Poly::var(ring, Ring::lambda(1));
        let l2 = Poly::var(ring, Ring::lambda(2));
        let lm = l1.add(&l2);
        let a = Element::basis(ring, &self.algebra.module, i);
        let b = Element::basis(ring, &self.algebra.module, j);
        let v = Element::basis(ring, &self.module, k);
        let prod = &self.algebra.product;
        let t1 = self.r.eval_conjugate(&b, &self.l.eval(&a, &v, &l1), &lm);
        let t2 = self.l.eval(&a, &self.r.eval_conjugate(&b, &v, &l2), &l1);
        let t3 = self.r.eval_conjugate(&b, &self.r.eval(&a, &v, &l1), &lm);
        let t4 = self.r.eval_conjugate(&prod.eval(&a, &b, &l1), &v, &l2);
        t1.sub(&t2).sub(&t3).add(&t4)
    }

    pub fn check(&self) -> CheckReport {
        let mut rep = CheckReport::default();
        let an = &self.algebra.module.basis;
        let mn = &self.module.basis;
        for i in 0..self.algebra.rank() {
            for j in 0..self.algebra.rank() {
                for k in 0..self.module.rank() {
                    let r1 = self.left_residual(i, j, k);
                    if !r1.is_zero() {
                        rep.push(
                            format!("module-left({},{},{})", an[i], an[j], mn[k]),
                            r1.to_string(),
                        );
                    }
                    let r2 = self.right_residual(i, j, k);
                    if !r2.is_zero() {
                        rep.push(
                            format!("module-right({},{},{})", an[i], an[j], mn[k]),
                            r2.to_string(),
                        );
                    }
                }
            }
        }
        rep
    }

    /// The right action evaluated the way it appears in formulas:
    /// `v_out a = r(a)_{-D-out} v`.
    pub fn right_act(&self, v: &Element, a: &Element, out: &Poly) -> Element {
        self.r.eval_conjugate(a, v, out)
    }
}

/// The adjoint module `(A, L_A, R_A)`.
pub fn adjoint_rep(a: &LscAlgebra) -> RepPair {
    let ring = a.ring();
    let l = a.product.clone();
    let lam = Poly::var(ring, Ring::lambda(1));
    let mut r = LambdaMap::zero(ring, &a.module, &a.module, &a.module);
    for i in 0..a.rank() {
        for j in 0..a.rank() {
            // R_A(e_i)_L e_j = (e_j)_{-D-L} e_i
            let ei = Element::basis(ring, &a.module, i);
            let ej = Element::basis(ring, &a.module, j);
            r.set(i, j, a.product.eval_conjugate(&ej, &ei, &lam));
        }
    }
    RepPair::new_unchecked(a.clone(), l, r)
}

/// The dual-left module `(A^{*c}, L*_A, 0)`.
///
/// The defining pairing `(L*_A(a)_L f)_{L+M} b = -f_M(a_L b)` is solved for
/// the structure coefficients: with `a_L e_j = sum_k c_k(D, L) e_k`,
/// `L*_A(e_i)_L e_k^* = sum_j -c_k(-D-L, L) e_j^*` where `c` runs over the
/// `(i, j)` table entries.
pub fn dual_left_rep(a: &LscAlgebra) -> RepPair {
    let ring = a.ring();
    let dual = a.module.dual();
    let l = dual_left_action(a);
    let r = LambdaMap::zero(ring, &a.module, &dual, &dual);
    RepPair::new_unchecked(a.clone(), l, r)
}

fn dual_left_action(a: &LscAlgebra) -> LambdaMap {
    let ring = a.ring();
    let dual = a.module.dual();
    let mut l = LambdaMap::zero(ring, &a.module, &dual, &dual);
    let min_d_l = Poly::var(ring, Ring::D)
        .neg()
        .sub(&Poly::var(ring, Ring::lambda(1)));
    for i in 0..a.rank() {
        for k in 0..a.rank() {
            let coeffs: Vec<Poly> = (0..a.rank())
                .map(|j| {
                    a.product.entry(i, j).coeffs[k]
                        .substitute(Ring::D, &min_d_l)
                        .neg()
                })
                .collect();
            l.set(i, k, Element::new(&dual, coeffs));
        }
    }
    l
}

/// `R*_A` on the dual: `(R*_A(a)_L f)_{L+M} b = -f_M(b_{-D-L} a)`, again
/// solved coefficientwise.
fn dual_right_action(a: &LscAlgebra) -> LambdaMap {
    let ring = a.ring();
    let dual = a.module.dual();
    let mut r = LambdaMap::zero(ring, &a.module, &dual, &dual);
    let d = Poly::var(ring, Ring::D);
    let lam = Poly::var(ring, Ring::lambda(1));
    let subs = vec![
        (Ring::D, d.neg().sub(&lam)),
        (Ring::lambda(1), d.clone()),
    ];
    for i in 0..a.rank() {
        for k in 0..a.rank() {
            let coeffs: Vec<Poly> = (0..a.rank())
                .map(|j| {
                    a.product.entry(j, i).coeffs[k]
                        .substitute_many(&subs)
                        .neg()
                })
                .collect();
            r.set(i, k, Element::new(&dual, coeffs));
        }
    }
    r
}

/// The coadjoint module `(A^{*c}, L*_A - R*_A, -R*_A)`.
pub fn coadjoint_rep(a: &LscAlgebra) -> RepPair {
    let lstar = dual_left_action(a);
    let rstar = dual_right_action(a);
    let l = lstar.sub(&rstar);
    let r = rstar.map_entries(|e| e.neg());
    RepPair::new_unchecked(a.clone(), l, r)
}

/// Semidirect product `A ⋉_{l,r} M` on `A ⊕ M`:
/// `(a+u)_L (b+v) = a_L b + l(a)_L v + r(b)_{-D-L} u`.
pub fn semidirect(a: &LscAlgebra, rep: &RepPair) -> LscAlgebra {
    let ring = a.ring();
    let ra = a.rank();
    let rm = rep.module.rank();
    let combined = a.module.direct_sum(&rep.module);
    let lam = Poly::var(ring, Ring::lambda(1));
    let embed_a = |e: &Element| -> Element {
        let mut coeffs = e.coeffs.clone();
        coeffs.extend(vec![Poly::zero(ring); rm]);
        Element::new(&combined, coeffs)
    };
    let embed_m = |e: &Element| -> Element {
        let mut coeffs = vec![Poly::zero(ring); ra];
        coeffs.extend(e.coeffs.clone());
        Element::new(&combined, coeffs)
    };
    let mut table = LambdaMap::zero(ring, &combined, &combined, &combined);
    for i in 0..ra {
        for j in 0..ra {
            table.set(i, j, embed_a(a.product.entry(i, j)));
        }
    }
    for i in 0..ra {
        for j in 0..rm {
            let ai = Element::basis(ring, &a.module, i);
            let vj = Element::basis(ring, &rep.module, j);
            table.set(i, ra + j, embed_m(&rep.l.eval(&ai, &vj, &lam)));
        }
    }
    for i in 0..rm {
        for j in 0..ra {
            let ui = Element::basis(ring, &rep.module, i);
            let bj = Element::basis(ring, &a.module, j);
            table.set(ra + i, j, embed_m(&rep.right_act(&ui, &bj, &lam)));
        }
    }
    LscAlgebra::new_unchecked(combined, table)
}

/// The action of the sub-adjacent algebra on a concrete conformal map value:
/// `(x_L f)_MU(b) = x_L(f_{MU-L}(b)) + (f_{MU-L}(x))_MU b - f_{MU-L}(x_L b)`.
/// The acting lambda is `lam` (any `D`-free polynomial); the result's own
/// variable is `MU`.
pub fn hom_module_act(
    a: &LscAlgebra,
    rep: &RepPair,
    x: &Element,
    f: &ConformalMapValue,
    lam: &Poly,
) -> ConformalMapValue {
    assert!(f.source == a.module && f.target == rep.module);
    let ring = a.ring();
    let lam = lam.clone();
    let nu = Poly::var(ring, Ring::MU);
    let mu = nu.sub(&lam);
    let mut table = Vec::with_capacity(a.rank());
    for j in 0..a.rank() {
        let b = Element::basis(ring, &a.module, j);
        let t1 = rep.l.eval(x, &f.apply(&b, &mu), &lam);
        let t2 = rep.right_act(&f.apply(x, &mu), &b, &nu);
        let t3 = f.apply(&a.product.eval(x, &b, &lam), &mu);
        table.push(t1.add(&t2).sub(&t3));
    }
    ConformalMapValue::from_table(&a.module, &rep.module, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_c() -> LscAlgebra {
        let ring = Ring::new(&["c"]).unwrap();
        let m = FreeModule::new("A", &["a"]);
        let mut p = LambdaMap::zero(&ring, &m, &m, &m);
        let coeff = Poly::var(&ring, Ring::D)
            .add(&Poly::var(&ring, Ring::lambda(1)))
            .add(&Poly::var(&ring, ring.param("c").unwrap()));
        p.set(0, 0, Element::new(&m, vec![coeff]));
        LscAlgebra::new_unchecked(m, p)
    }

    #[test]
    fn adjoint_module_passes() {
        let a = a_c();
        let rep = adjoint_rep(&a);
        assert!(rep.check().pass());
        let ring = a.ring();
        // L_A(a)_L a = (D + L + c) a, R_A(a)_L a = (c - L) a
        let c = Poly::var(ring, ring.param("c").unwrap());
        let l = Poly::var(ring, Ring::lambda(1));
        let expect_l = Poly::var(ring, Ring::D).add(&l).add(&c);
        assert_eq!(rep.l.entry(0, 0).coeffs[0], expect_l);
        assert_eq!(rep.r.entry(0, 0).coeffs[0], c.sub(&l));
    }

    #[test]
    fn zero_product_adjoint_is_zero() {
        let ring = Ring::new(&[]).unwrap();
        let m = FreeModule::new("A", &["a"]);
        let p = LambdaMap::zero(&ring, &m, &m, &m);
        let a = LscAlgebra::new_unchecked(m, p);
        let rep = adjoint_rep(&a);
        assert!(rep.l.is_zero() && rep.r.is_zero());
        assert!(rep.check().pass());
    }

    #[test]
    fn rank_one_module_example() {
        // a_L m = (D + c1 L + c2) m with r = 0 is a module over A_c
        let ring = Ring::new(&["c", "c1", "c2"]).unwrap();
        let am = FreeModule::new("A", &["a"]);
        let mut p = LambdaMap::zero(&ring, &am, &am, &am);
        p.set(
            0,
            0,
            Element::new(
                &am,
                vec![Poly::var(&ring, Ring::D)
                    .add(&Poly::var(&ring, Ring::lambda(1)))
                    .add(&Poly::var(&ring, ring.param("c").unwrap()))],
            ),
        );
        let a = LscAlgebra::new_unchecked(am, p);
        let mm = FreeModule::new("M", &["m"]);
        let mut l = LambdaMap::zero(&ring, &a.module, &mm, &mm);
        let coeff = Poly::var(&ring, Ring::D)
            .add(
                &Poly::var(&ring, Ring::lambda(1))
                    .mul(&Poly::var(&ring, ring.param("c1").unwrap())),
            )
            .add(&Poly::var(&ring, ring.param("c2").unwrap()));
        l.set(0, 0, Element::new(&mm, vec![coeff]));
        let r = LambdaMap::zero(&ring, &a.module, &mm, &mm);
        let rep = RepPair::new_unchecked(a, l, r);
        assert!(rep.check().pass());
    }

    #[test]
    fn dual_left_action_on_a_c() {
        // L*_A(a)_L a* = (D - c) a*
        let a = a_c();
        let rep = dual_left_rep(&a);
        let ring = a.ring();
        let expect = Poly::var(ring, Ring::D).sub(&Poly::var(ring, ring.param("c").unwrap()));
        assert_eq!(rep.l.entry(0, 0).coeffs[0], expect);
        assert!(rep.check().pass());
    }

    #[test]
    fn coadjoint_action_on_a_c() {
        // (L* - R*)(a)_L a* = (D - L) a*
        let a = a_c();
        let rep = coadjoint_rep(&a);
        let ring = a.ring();
        let expect = Poly::var(ring, Ring::D).sub(&Poly::var(ring, Ring::lambda(1)));
        assert_eq!(rep.l.entry(0, 0).coeffs[0], expect);
        assert!(rep.check().pass());
    }

    #[test]
    fn semidirect_with_adjoint_and_dual_left() {
        let a = a_c();
        let ring = a.ring().clone();
        let sd = semidirect(&a, &adjoint_rep(&a));
        assert_eq!(sd.rank(), 2);
        assert!(sd.check_axioms().pass());

        let sd = semidirect(&a, &dual_left_rep(&a));
        assert!(sd.check_axioms().pass());
        // a_L a* = (D - c) a*, a*_L a = 0, a*_L a* = 0
        let expect = Poly::var(&ring, Ring::D).sub(&Poly::var(&ring, ring.param("c").unwrap()));
        assert_eq!(sd.product.entry(0, 1).coeffs[1], expect);
        assert!(sd.product.entry(1, 0).is_zero());
        assert!(sd.product.entry(1, 1).is_zero());
    }

    #[test]
    fn semidirect_with_zero_rep_has_square_zero_ideal() {
        let a = a_c();
        let ring = a.ring();
        let mm = FreeModule::new("M", &["m"]);
        let l = LambdaMap::zero(ring, &a.module, &mm, &mm);
        let r = LambdaMap::zero(ring, &a.module, &mm, &mm);
        let rep = RepPair::new_unchecked(a.clone(), l, r);
        let sd = semidirect(&a, &rep);
        assert!(sd.check_axioms().pass());
        assert!(sd.product.entry(1, 1).is_zero());
        assert!(sd.product.entry(0, 1).is_zero());
        assert!(sd.product.entry(1, 0).is_zero());
    }

    #[test]
    fn invalid_reps_are_detected() {
        let ring = Ring::new(&[]).unwrap();
        let am = FreeModule::new("A", &["a"]);
        let mut p = LambdaMap::zero(&ring, &am, &am, &am);
        let lam = Poly::var(&ring, Ring::lambda(1));
        p.set(
            0,
            0,
            Element::new(&am, vec![Poly::var(&ring, Ring::D).add(&lam)]),
        );
        let a = LscAlgebra::new_unchecked(am, p);
        let mm = FreeModule::new("M", &["m"]);

        // l: a_L m = L^2 m, r = 0 fails the first module identity, and the
        // semidirect table then fails the left-symmetric identity.
        let mut l = LambdaMap::zero(&ring, &a.module, &mm, &mm);
        l.set(0, 0, Element::new(&mm, vec![lam.mul(&lam)]));
        let r = LambdaMap::zero(&ring, &a.module, &mm, &mm);
        let rep = RepPair::new_unchecked(a.clone(), l, r);
        assert!(!rep.left_residual(0, 0, 0).is_zero());
        assert!(rep.right_residual(0, 0, 0).is_zero());
        assert!(!rep.check().pass());
        assert!(!semidirect(&a, &rep).check_axioms().pass());
        assert!(RepPair::new(a.clone(), rep.l.clone(), rep.r.clone()).is_err());

        // l = r = (D + L) m fails only the second identity.
        let mut l2 = LambdaMap::zero(&ring, &a.module, &mm, &mm);
        l2.set(
            0,
            0,
            Element::new(&mm, vec![Poly::var(&ring, Ring::D).add(&lam)]),
        );
        let rep2 = RepPair::new_unchecked(a.clone(), l2.clone(), l2);
        assert!(rep2.left_residual(0, 0, 0).is_zero());
        assert!(!rep2.right_residual(0, 0, 0).is_zero());
        assert!(!rep2.check().pass());
    }

    #[test]
    fn hom_act_zero_cases() {
        let a = a_c();
        let rep = adjoint_rep(&a);
        let ring = a.ring();
        let x = Element::basis(ring, &a.module, 0);
        let lam = Poly::var(ring, Ring::lambda(1));
        let zero = ConformalMapValue::zero(ring, &a.module, &a.module);
        assert!(hom_module_act(&a, &rep, &x, &zero, &lam).is_zero());
        let id = ConformalMapValue::from_table(
            &a.module,
            &a.module,
            vec![Element::basis(ring, &a.module, 0)],
        );
        let z = Element::zero(ring, &a.module);
        assert!(hom_module_act(&a, &rep, &z, &id, &lam).is_zero());
    }
}
