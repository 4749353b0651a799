//! Property suites: algebraic laws of the polynomial layer, sesquilinearity
//! of the lambda-product, the coboundary identities on randomized cochains,
//! and parser round-trips.

use std::sync::Arc;

use proptest::prelude::*;

use conformal::algebra::LscAlgebra;
use conformal::cohomology::{
    d_lie, d_lie_map, delta_lsc, phi, phi_inv, tuples, Cochain, Flavor, LieModule,
};
use conformal::lang::{parse_definition, render_definition};
use conformal::rep::adjoint_rep;
use conformal::{Element, FreeModule, LambdaMap, Poly, Ring};

fn ring() -> Arc<Ring> {
    Ring::new(&["c"]).unwrap()
}

fn a_c(ring: &Arc<Ring>) -> LscAlgebra {
    let m = FreeModule::new("A", &["a"]);
    let mut p = LambdaMap::zero(ring, &m, &m, &m);
    let coeff = Poly::var(ring, Ring::D)
        .add(&Poly::var(ring, Ring::lambda(1)))
        .add(&Poly::var(ring, ring.param("c").unwrap()));
    p.set(0, 0, Element::new(&m, vec![coeff]));
    LscAlgebra::new_unchecked(m, p)
}

/// A random polynomial in the given variables: a term list of small integer
/// coefficients and exponents.
fn poly_strategy(vars: &'static [&'static str], deg: u32) -> impl Strategy<Value = Poly> {
    let nv = vars.len();
    prop::collection::vec(
        (-4i64..=4, prop::collection::vec(0..=deg, nv)),
        0..5,
    )
    .prop_map(move |terms| {
        let ring = ring();
        let mut acc = Poly::zero(&ring);
        for (c, exps) in terms {
            let mut t = Poly::int(&ring, c);
            for (name, e) in vars.iter().zip(exps) {
                let v = ring.resolve(name).unwrap();
                t = t.mul(&Poly::var(&ring, v).pow(e));
            }
            acc = acc.add(&t);
        }
        acc
    })
}

fn full_poly() -> impl Strategy<Value = Poly> {
    poly_strategy(&["D", "L1", "L2", "c"], 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in full_poly(), q in full_poly(), r in full_poly()) {
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.sub(&p), Poly::zero(p.ring()));
    }

    #[test]
    fn substitution_is_a_homomorphism(p in full_poly(), q in full_poly(), s in poly_strategy(&["L1", "c"], 2)) {
        let d = Ring::D;
        prop_assert_eq!(
            p.add(&q).substitute(d, &s),
            p.substitute(d, &s).add(&q.substitute(d, &s))
        );
        prop_assert_eq!(
            p.mul(&q).substitute(d, &s),
            p.substitute(d, &s).mul(&q.substitute(d, &s))
        );
    }

    #[test]
    fn conjugation_is_an_involution(p in full_poly()) {
        let ring = p.ring().clone();
        let conj = Poly::var(&ring, Ring::D).neg().sub(&Poly::var(&ring, Ring::lambda(1)));
        let twice = p.substitute(Ring::lambda(1), &conj).substitute(Ring::lambda(1), &conj);
        prop_assert_eq!(twice, p);
    }

    #[test]
    fn product_is_sesquilinear(p in poly_strategy(&["D"], 3)) {
        // (p(D) a)_L b = p(-L) a_L b and a_L (p(D) b) = p(D + L) a_L b
        let ring = ring();
        let a = a_c(&ring);
        let l = Poly::var(&ring, Ring::lambda(1));
        let x = Element::basis(&ring, &a.module, 0);
        let px = x.scale(&p);
        let base = a.product.eval(&x, &x, &l);
        prop_assert_eq!(
            a.product.eval(&px, &x, &l),
            base.scale(&p.substitute(Ring::D, &l.neg()))
        );
        let shifted = p.substitute(Ring::D, &Poly::var(&ring, Ring::D).add(&l));
        prop_assert_eq!(a.product.eval(&x, &px, &l), base.scale(&shifted));
    }

    #[test]
    fn delta_squared_vanishes(p in poly_strategy(&["D", "L1"], 3), n in 1usize..=2) {
        let ring = ring();
        let a = a_c(&ring);
        let rep = adjoint_rep(&a);
        // degree-1 cochains are polynomial in D alone
        let q = if n == 1 { p.substitute(Ring::lambda(1), &Poly::zero(&ring)) } else { p.clone() };
        let mut g = Cochain::zero(&ring, &a.module, &a.module, n, Flavor::Lsc);
        for t in tuples(1, n) {
            g.set(&t, Element::basis(&ring, &a.module, 0).scale(&q));
        }
        prop_assert!(delta_lsc(&rep, &delta_lsc(&rep, &g)).is_zero());
    }

    #[test]
    fn d_squared_vanishes(p in poly_strategy(&["D", "L1"], 3), n in 1usize..=2) {
        let ring = ring();
        let a = a_c(&ring);
        let lie = LieModule::adjoint(&a.sub_adjacent());
        let conj = Poly::var(&ring, Ring::D).neg().sub(&Poly::var(&ring, Ring::lambda(1)));
        // skew-symmetrize degree-2 tables into valid Lie cochains; degree-1
        // cochains are polynomial in D alone
        let q = if n == 2 {
            p.sub(&p.substitute(Ring::lambda(1), &conj))
        } else {
            p.substitute(Ring::lambda(1), &Poly::zero(&ring))
        };
        let mut g = Cochain::zero(&ring, &a.module, &a.module, n, Flavor::Lie);
        for t in tuples(1, n) {
            g.set(&t, Element::basis(&ring, &a.module, 0).scale(&q));
        }
        prop_assert!(g.validate().pass());
        prop_assert!(d_lie(&lie, &d_lie(&lie, &g)).is_zero());
    }

    #[test]
    fn diagram_commutes(p in poly_strategy(&["D", "L1"], 2)) {
        let ring = ring();
        let a = a_c(&ring);
        let rep = adjoint_rep(&a);
        let mut c = Cochain::zero(&ring, &a.module, &a.module, 2, Flavor::Lsc);
        c.set(&[0, 0], Element::basis(&ring, &a.module, 0).scale(&p));
        let gamma = phi_inv(&c);
        let lhs = delta_lsc(&rep, &c);
        let rhs = phi(&d_lie_map(&a, &rep, &gamma));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn parse_render_parse_is_the_identity(p in poly_strategy(&["D", "L1", "c"], 2), q in poly_strategy(&["D", "L1", "c"], 2)) {
        let text = format!(
            "param c;\nalgebra A {{ basis e1 e2; product e1 e1 = ({p}) e1 + ({q}) e2; e2 e1 = ({q}) e1; }}"
        );
        let once = render_definition(&parse_definition(&text).unwrap());
        let twice = render_definition(&parse_definition(&once).unwrap());
        prop_assert_eq!(once, twice);
    }
}
