//! Property tests for the expression layer: exact ring laws, derivation
//! rules and the chain-rule compatibility with sections.

use proptest::prelude::*;
use varseq_core::gen;
use varseq_core::poly::JetVariable;
use varseq_core::{Ctx, Expr, JetContext, MultiIndex};

fn ctx22() -> Ctx {
    JetContext::simple(2, 2, 2)
}

fn expr_from_seed(seed: u64, ctx: &Ctx) -> Expr {
    let mut rng = gen::rng(seed);
    gen::rand_expr(&mut rng, ctx, 2, 3, 3)
}

proptest! {
    #[test]
    fn addition_and_multiplication_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let ctx = ctx22();
        let (x, y, z) = (expr_from_seed(a, &ctx), expr_from_seed(b, &ctx), expr_from_seed(c, &ctx));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn partial_derivative_is_a_derivation(a in any::<u64>(), b in any::<u64>(), field in 0usize..2, len in 0usize..3) {
        let ctx = ctx22();
        let (x, y) = (expr_from_seed(a, &ctx), expr_from_seed(b, &ctx));
        let mut rng = gen::rng(a ^ b);
        let idx = {
            use rand::Rng;
            MultiIndex::new((0..len).map(|_| rng.gen_range(0..2)).collect())
        };
        let v = JetVariable::fiber(field, idx);
        let lhs = x.mul(&y).partial_derivative(&v);
        let rhs = x.partial_derivative(&v).mul(&y).add(&x.mul(&y.partial_derivative(&v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivatives_commute(a in any::<u64>(), i in 0usize..2, j in 0usize..2) {
        let ctx = ctx22();
        let x = expr_from_seed(a, &ctx);
        let lhs = x.total_derivative(i).total_derivative(j);
        let rhs = x.total_derivative(j).total_derivative(i);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivative_is_a_derivation(a in any::<u64>(), b in any::<u64>(), i in 0usize..2) {
        let ctx = ctx22();
        let (x, y) = (expr_from_seed(a, &ctx), expr_from_seed(b, &ctx));
        let lhs = x.mul(&y).total_derivative(i);
        let rhs = x.total_derivative(i).mul(&y).add(&x.mul(&y.total_derivative(i)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn section_pullback_chain_rule(a in any::<u64>(), s in any::<u64>(), i in 0usize..2) {
        let ctx = ctx22();
        let x = expr_from_seed(a, &ctx);
        let mut rng = gen::rng(s);
        let section = gen::rand_section(&mut rng, &ctx, 2);
        let lhs = section.pull_back(&x.total_derivative(i));
        let rhs = section.pull_back(&x).partial_derivative(&JetVariable::Base(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(a in any::<u64>(), p in 1usize..3, q in 1usize..3) {
        let ctx = ctx22();
        let mut rng = gen::rng(a);
        let alpha = gen::rand_form(&mut rng, &ctx, 2, p);
        let beta = gen::rand_form(&mut rng, &ctx, 2, q);
        let ab = alpha.wedge(&beta).unwrap();
        let ba = beta.wedge(&alpha).unwrap();
        let signed = if (p * q) % 2 == 1 { ba.neg() } else { ba };
        prop_assert!(ab.equiv(&signed));
    }

    #[test]
    fn exterior_differential_is_nilpotent(a in any::<u64>(), deg in 1usize..3) {
        let ctx = ctx22();
        let mut rng = gen::rng(a);
        let rho = gen::rand_form(&mut rng, &ctx, 2, deg);
        prop_assert!(rho.exterior_differential().exterior_differential().is_zero());
    }
}
