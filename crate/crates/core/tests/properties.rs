use fewweight::codes::{self, CodeKind};
use fewweight::fexpr::{Bindings, Node};
use fewweight::lowfactor::{brute_factor_type, quartic_type};
use fewweight::walsh;
use fewweight::{Ctx, FieldElt, FieldSpec, FuncExpr};
use num_integer::Integer;
use proptest::prelude::*;

fn field(n: u32) -> FieldSpec {
    FieldSpec::standard(n).unwrap()
}

/// (n, a, b, c) with a, b, c in GF(2^n).
fn triple() -> impl Strategy<Value = (u32, u32, u32, u32)> {
    (2u32..=16).prop_flat_map(|n| {
        let q = 1u32 << n;
        (Just(n), 0..q, 0..q, 0..q)
    })
}

/// A random polynomial with f(0) = 0 over GF(2^n), n in 3..=7.
fn poly() -> impl Strategy<Value = FuncExpr> {
    (3u32..=7).prop_flat_map(|n| {
        let q = 1u32 << n;
        prop::collection::vec((1..q, 1..q), 1..5).prop_map(move |terms| {
            let f = field(n);
            let root = Node::Sum(terms.into_iter().map(|(c, e)| Node::mono(FieldElt(c), e)).collect());
            FuncExpr::new(f, root).unwrap()
        })
    })
}

/// (x^(2^t) + x)^e with gcd(t, n) = 1 and gcd(e, 2^n - 1) = 1: two-to-one.
fn power_two_to_one() -> impl Strategy<Value = FuncExpr> {
    (3u32..=9)
        .prop_flat_map(|n| (Just(n), 1..n, 1u64..(1 << n) - 1))
        .prop_filter("coprime", |&(n, t, e)| t.gcd(&n) == 1 && e.gcd(&((1 << n) - 1)) == 1)
        .prop_map(|(n, t, e)| {
            let mut vars = Bindings::new();
            vars.insert('t', t as i64);
            vars.insert('e', e as i64);
            FuncExpr::parse(field(n), "(x^(2^t)+x)^e", &vars).unwrap()
        })
}

/// A Dembowski-Ostrom polynomial plus a linear part.
fn quadratic() -> impl Strategy<Value = FuncExpr> {
    (3u32..=7).prop_flat_map(|n| {
        let q = 1u32 << n;
        prop::collection::vec((0..q, 0..n, 0..n), 1..5).prop_map(move |terms| {
            let root = Node::Sum(
                terms
                    .into_iter()
                    .map(|(c, i, j)| Node::mono(FieldElt(c), (1u64 << i) + (1u64 << j)))
                    .chain([Node::x()])
                    .collect(),
            );
            FuncExpr::new(field(n), root).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms((n, a, b, c) in triple()) {
        let f = field(n);
        let (a, b, c) = (FieldElt(a), FieldElt(b), FieldElt(c));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
        prop_assert_eq!(f.square(a + b), f.square(a) + f.square(b));
        prop_assert_eq!(f.trace(a + b), f.trace(a) ^ f.trace(b));
        prop_assert_eq!(f.frobenius(a, n), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElt::ONE);
            prop_assert_eq!(f.pow_u64(a, f.group_order()), FieldElt::ONE);
        }
    }

    #[test]
    fn fwht_is_an_involution_up_to_scale(v in prop::collection::vec(-50i32..50, 64)) {
        let mut w = v.clone();
        walsh::fwht(&mut w).unwrap();
        // Parseval
        let energy: i64 = w.iter().map(|&x| (x as i64) * (x as i64)).sum();
        prop_assert_eq!(energy, 64 * v.iter().map(|&x| (x as i64) * (x as i64)).sum::<i64>());
        walsh::fwht(&mut w).unwrap();
        prop_assert!(w.iter().zip(&v).all(|(&x, &y)| x == 64 * y));
    }

    #[test]
    fn display_reparses_to_the_same_function(f in poly()) {
        let g = FuncExpr::parse(*f.field(), &f.to_string(), &Bindings::new()).unwrap();
        prop_assert_eq!(f.value_table(), g.value_table());
    }

    #[test]
    fn cf_spectrum_matches_enumeration(f in poly()) {
        let ctx = Ctx::default();
        let spec = walsh::spectrum_full(&f, &ctx).unwrap();
        prop_assert_eq!(spec.total(), f.field().order() * f.field().order());
        let (wd, dk1) = codes::wd_cf_from_spectrum(&spec).unwrap();
        let (brute, distinct) = codes::wd_bruteforce_cf(&f, &ctx).unwrap();
        prop_assert_eq!(&wd, &brute);
        let dim = 2 * f.field().degree() - dk1;
        prop_assert_eq!(distinct, 1u64 << dim);
        // Every coordinate of C_f is nonzero somewhere, so the first moment
        // is 2^(dim-1) times the length.
        let moment: u64 = wd.entries.iter().map(|(w, a)| w * a).sum();
        prop_assert_eq!(moment, (1u64 << (dim - 1)) * wd.length);
    }

    #[test]
    fn power_maps_of_two_to_one_linearized(f in power_two_to_one()) {
        prop_assert!(f.is_two_to_one().is_two_to_one());
        let ctx = Ctx::default();
        let wd = codes::wd_cdf(&f, &ctx).unwrap();
        let (brute, _) = codes::wd_bruteforce_cdf(&f, &ctx).unwrap();
        prop_assert_eq!(&wd, &brute);
        prop_assert_eq!(wd.length, (f.field().order() / 2) - 1);
        let r = codes::dual_analysis(&f, CodeKind::CDf, wd.dimension().unwrap(), &ctx).unwrap();
        prop_assert!(r.oracle_agrees());
    }

    #[test]
    fn execution_strategy_does_not_change_results(f in poly()) {
        let par = walsh::spectrum_full(&f, &Ctx::default()).unwrap();
        let seq = walsh::spectrum_full(&f, &Ctx::sequential()).unwrap();
        prop_assert_eq!(par, seq);
    }

    #[test]
    fn quadratic_law_holds(f in quadratic()) {
        prop_assert!(f.is_quadratic());
        prop_assert_eq!(walsh::check_quadratic_law(&f, &Ctx::default()).unwrap(), None);
    }

    #[test]
    fn quartic_type_matches_brute_force(
        (m, a2, a1, a0) in (2u32..=9).prop_flat_map(|m| {
            let q = 1u32 << m;
            (Just(m), 0..q, 1..q, 1..q)
        })
    ) {
        let f = field(m);
        let (a2, a1, a0) = (FieldElt(a2), FieldElt(a1), FieldElt(a0));
        let brute = brute_factor_type(&[a0, a1, a2, FieldElt::ZERO, FieldElt::ONE], &f);
        prop_assert_eq!(quartic_type(a2, a1, a0, &f).unwrap(), brute);
    }
}
