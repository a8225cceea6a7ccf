use proptest::prelude::*;

use sboxlab_core::quadratic::{check_qform_theorem, h_gamma, QForm};
use sboxlab_core::tables::SumIdentities;
use sboxlab_core::{
    bct_boura_canteaut, bct_definition, bct_paircount, boomerang_uniformity, ddt,
    differential_uniformity, random_affine_permutation, random_permutation, Field, SBox,
};

fn field_and_elems() -> impl Strategy<Value = (Field, u32, u32, u32)> {
    (7u32..=16).prop_flat_map(|n| {
        let f = Field::with_default_poly(n).unwrap();
        let m = f.mask();
        (Just(f), 0..=m, 0..=m, 0..=m)
    })
}

proptest! {
    #[test]
    fn field_axioms_sampled((f, a, b, c) in field_and_elems()) {
        prop_assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.square(a ^ b), f.square(a) ^ f.square(b));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn pow_is_additive_in_exponent((f, a, _, _) in field_and_elems(), e1 in 0u64..1 << 20, e2 in 0u64..1 << 20) {
        prop_assume!(a != 0);
        prop_assert_eq!(f.pow(a, e1 + e2), f.mul(f.pow(a, e1), f.pow(a, e2)));
        prop_assert_eq!(f.pow(a, e1), f.pow(a, e1 % f.group_order()));
    }

    #[test]
    fn trace_is_linear_and_lands_in_subfield((f, a, b, _) in field_and_elems()) {
        for r in (1..=f.degree()).filter(|r| f.degree() % r == 0) {
            let ta = f.trace(a, r).unwrap();
            prop_assert_eq!(f.trace(a ^ b, r).unwrap(), ta ^ f.trace(b, r).unwrap());
            prop_assert_eq!(f.pow(ta, 1 << r), ta);
        }
    }

    #[test]
    fn bct_methods_agree(n in 3u32..=6, seed in any::<u64>()) {
        let field = Field::with_default_poly(n).unwrap();
        let f = random_permutation(field, seed);
        let def = bct_definition(&f).unwrap();
        prop_assert_eq!(&bct_paircount(&f), &def);
        prop_assert_eq!(&bct_boura_canteaut(&f).unwrap(), &def);
    }

    #[test]
    fn duality_and_lower_bound(n in 3u32..=6, seed in any::<u64>()) {
        let field = Field::with_default_poly(n).unwrap();
        let f = random_permutation(field, seed);
        let inv = f.inverse().unwrap();
        prop_assert_eq!(bct_paircount(&inv), bct_paircount(&f).transpose());
        prop_assert_eq!(ddt(&inv), ddt(&f).transpose());
        prop_assert!(boomerang_uniformity(&f).unwrap() >= differential_uniformity(&f));
    }

    #[test]
    fn sum_identities_hold(n in 3u32..=5, seed in any::<u64>()) {
        let field = Field::with_default_poly(n).unwrap();
        let f = random_permutation(field, seed);
        let sums = SumIdentities::new(&f).unwrap();
        for a in 1..=field.mask() {
            prop_assert!(sums.row(a).unwrap().agrees());
            prop_assert!(sums.column(a).unwrap().agrees());
        }
    }

    #[test]
    fn affine_equivalence_keeps_uniformities(seed1 in any::<u64>(), seed2 in any::<u64>()) {
        let field = Field::with_default_poly(6).unwrap();
        let gold = SBox::power(field, 5);
        let a1 = random_affine_permutation(field, seed1);
        let a2 = random_affine_permutation(field, seed2);
        let g = a2.compose(&gold.compose(&a1).unwrap()).unwrap();
        prop_assert_eq!(boomerang_uniformity(&g).unwrap(), 4);
        prop_assert_eq!(differential_uniformity(&g), 4);
    }

    #[test]
    fn h_gamma_is_additive_and_semilinear(
        coeffs in proptest::collection::vec(((0u32..3, 0u32..3), 0u32..64), 1..5),
        gamma in 1u32..64,
    ) {
        let field = Field::with_default_poly(6).unwrap();
        let sub = field.subfield(2).unwrap();
        let coeffs = coeffs.into_iter().map(|((i, j), c)| ((i.min(j), i.max(j)), c));
        let form = QForm::new(field, sub, coeffs).unwrap();
        let f = form.to_sbox();
        prop_assert!(f.algebraic_degree() <= 2);
        let h = h_gamma(&f, gamma).unwrap();
        for x in 0..64 {
            for y in 0..64 {
                prop_assert_eq!(h.apply(x ^ y), h.apply(x) ^ h.apply(y));
            }
        }
        for c in field.subfield_elements(sub).into_iter().skip(1) {
            let hc = h_gamma(&f, field.mul(c, gamma)).unwrap();
            for x in 0..64 {
                prop_assert_eq!(hc.apply(x), field.mul(c, h.apply(x)));
            }
            prop_assert_eq!(f.apply(field.mul(c, gamma)), field.mul(field.square(c), f.apply(gamma)));
        }
        let report = check_qform_theorem(&f, sub);
        prop_assert!(report.passed(), "{}", report);
    }
}

#[test]
fn apn_cubes_have_boomerang_uniformity_two() {
    for n in [3, 5, 7] {
        let f = SBox::power(Field::with_default_poly(n).unwrap(), 3);
        assert_eq!(differential_uniformity(&f), 2);
        assert_eq!(boomerang_uniformity(&f).unwrap(), 2);
    }
}
