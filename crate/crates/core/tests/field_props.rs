mod common;

use proptest::prelude::*;
use rsrepair::{Elem, FieldContext};

use common::naive_trace;

const FIELDS: &[(u32, usize)] = &[(2, 1), (2, 2), (2, 3), (2, 4), (2, 8), (3, 1), (3, 2), (3, 3), (5, 2), (5, 3)];

#[test]
fn dual_basis_relations_hold_exhaustively() {
    for &(q, ell) in FIELDS {
        let ctx = FieldContext::new(q, ell).unwrap();
        for (i, &b) in ctx.basis().iter().enumerate() {
            for (j, &g) in ctx.dual_basis().iter().enumerate() {
                assert_eq!(naive_trace(&ctx, ctx.mul(b, g)), (i == j) as u8, "q={q} ell={ell}");
            }
        }
    }
}

#[test]
fn custom_basis_duality_and_reconstruction() {
    let ctx = FieldContext::with_options(3, 3, None, Some(vec![Elem::new(5), Elem::new(9), Elem::new(22)]))
        .unwrap();
    for (i, &b) in ctx.basis().iter().enumerate() {
        for (j, &g) in ctx.dual_basis().iter().enumerate() {
            assert_eq!(ctx.trace(ctx.mul(b, g)), (i == j) as u8);
        }
    }
    for a in ctx.elements() {
        let v = ctx.phi(a);
        let rebuilt = v
            .iter()
            .zip(ctx.basis())
            .fold(Elem::ZERO, |acc, (&c, &b)| ctx.add(acc, ctx.scale(c, b)));
        assert_eq!(rebuilt, a);
    }
}

#[test]
fn phi_is_a_bijection_exhaustively() {
    for &(q, ell) in FIELDS {
        let ctx = FieldContext::new(q, ell).unwrap();
        let mut seen = std::collections::HashSet::new();
        for a in ctx.elements() {
            let v = ctx.phi(a);
            assert_eq!(ctx.phi_inv(&v).unwrap(), a);
            assert!(seen.insert(v));
        }
    }
}

#[test]
fn phi_of_basis_is_unit_vector() {
    let ctx = FieldContext::new(2, 4).unwrap();
    for (i, &b) in ctx.basis().iter().enumerate() {
        let mut e = vec![0; 4];
        e[i] = 1;
        assert_eq!(ctx.phi(b), e);
        let mut e = vec![0; 4];
        e[i] = 1;
        assert_eq!(ctx.phi_hat(ctx.dual_basis()[i]), e);
    }
    assert_eq!(ctx.phi(Elem::ZERO), vec![0; 4]);
}

#[test]
fn table_trace_matches_definition() {
    for &(q, ell) in FIELDS {
        let ctx = FieldContext::new(q, ell).unwrap();
        for a in ctx.elements().take(600) {
            assert_eq!(ctx.trace(a), naive_trace(&ctx, a));
        }
    }
}

#[test]
fn inverse_every_nonzero() {
    for &(q, ell) in FIELDS {
        let ctx = FieldContext::new(q, ell).unwrap();
        for a in ctx.elements().skip(1).take(500) {
            assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Elem::ONE);
        }
    }
}

fn ctx_and_elems() -> impl Strategy<Value = (FieldContext, u32, u32, u8)> {
    prop::sample::select(FIELDS.to_vec()).prop_flat_map(|(q, ell)| {
        let ctx = FieldContext::new(q, ell).unwrap();
        let order = ctx.order();
        (Just(ctx), 0..order, 0..order, 0..q as u8)
    })
}

proptest! {
    #[test]
    fn phi_is_base_linear((ctx, a, b, c) in ctx_and_elems()) {
        let (a, b) = (Elem::new(a), Elem::new(b));
        let f = ctx.base();
        let sum: Vec<u8> = ctx.phi(a).iter().zip(ctx.phi(b)).map(|(&x, y)| f.add(x, y)).collect();
        prop_assert_eq!(ctx.phi(ctx.add(a, b)), sum);
        let scaled: Vec<u8> = ctx.phi(a).iter().map(|&x| f.mul(c, x)).collect();
        prop_assert_eq!(ctx.phi(ctx.scale(c, a)), scaled);
    }

    #[test]
    fn trace_is_frobenius_invariant((ctx, a, _b, _c) in ctx_and_elems()) {
        let a = Elem::new(a);
        prop_assert_eq!(ctx.trace(ctx.frobenius(a, 1)), ctx.trace(a));
    }

    #[test]
    fn frobenius_is_an_automorphism((ctx, a, b, _c) in ctx_and_elems(), i in 0usize..6) {
        let (a, b) = (Elem::new(a), Elem::new(b));
        prop_assert_eq!(ctx.frobenius(ctx.mul(a, b), i), ctx.mul(ctx.frobenius(a, i), ctx.frobenius(b, i)));
        prop_assert_eq!(ctx.frobenius(ctx.add(a, b), i), ctx.add(ctx.frobenius(a, i), ctx.frobenius(b, i)));
        prop_assert_eq!(ctx.frobenius(ctx.frobenius(a, i), ctx.ell() - i % ctx.ell()), a);
    }

    #[test]
    fn ring_laws((ctx, a, b, c) in ctx_and_elems()) {
        let (a, b, c) = (Elem::new(a), Elem::new(b), ctx.scalar(c));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.add(a, ctx.neg(a)), Elem::ZERO);
    }

    #[test]
    fn digit_encoding_round_trips((ctx, a, _b, _c) in ctx_and_elems()) {
        let a = Elem::new(a);
        let d = ctx.digits(a);
        prop_assert!(d.iter().all(|&x| x < ctx.q()));
        prop_assert_eq!(ctx.from_digits(&d).unwrap(), a);
    }
}
