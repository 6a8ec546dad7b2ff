use bruhat_core::scalars::{canonicalize, subgroup_member, FieldSpec, Scalar, SubgroupSpec};
use num_bigint::BigInt;
use proptest::prelude::*;

const Q: FieldSpec = FieldSpec::Rationals;

fn frac(n: i64, d: i64, field: FieldSpec) -> Scalar {
    canonicalize(&BigInt::from(n), &BigInt::from(d), field).unwrap()
}

fn nonzero() -> impl Strategy<Value = i64> {
    (-40i64..=40).prop_filter("nonzero", |x| *x != 0)
}

#[test]
fn display_round_trips_through_parse() {
    for field in [Q, FieldSpec::Prime(7)] {
        for (n, d) in [(4, -6), (0, 5), (3, 2), (-12, 4)] {
            let x = frac(n, d, field);
            assert_eq!(field.parse_scalar(&x.to_string()).unwrap(), x);
        }
    }
    assert_eq!(frac(4, -6, Q).to_string(), "-2/3");
    assert_eq!(frac(3, 2, FieldSpec::Prime(7)).to_string(), "5");
}

#[test]
fn subgroup_membership_in_f7_matches_enumeration() {
    let f7 = FieldSpec::Prime(7);
    for g in 1..7 {
        let gen = f7.from_i64(g);
        let mut powers = vec![f7.one()];
        let mut x = gen.clone();
        while !x.is_one() {
            powers.push(x.clone());
            x = &x * &gen;
        }
        let spec = SubgroupSpec::new(vec![gen]).unwrap();
        for y in 1..7 {
            let y = f7.from_i64(y);
            assert_eq!(subgroup_member(&y, &spec, f7).unwrap(), powers.contains(&y));
        }
    }
}

proptest! {
    #[test]
    fn canonicalize_ignores_common_factors(a in -50i64..50, b in nonzero(), c in nonzero()) {
        for field in [Q, FieldSpec::Prime(101)] {
            if field == Q || (b % 101 != 0 && c % 101 != 0) {
                prop_assert_eq!(frac(a * c, b * c, field), frac(a, b, field));
            }
        }
    }

    #[test]
    fn rational_field_operations_round_trip(a in -50i64..50, b in nonzero(), c in nonzero(), d in nonzero()) {
        let x = frac(a, b, Q);
        let y = frac(c, d, Q);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&(&x * &y) / &y, x);
    }

    #[test]
    fn subgroup_is_closed(e1 in -3i64..=3, e2 in -3i64..=3, f1 in -3i64..=3, f2 in -3i64..=3) {
        let g = SubgroupSpec::new(vec![frac(6, 1, Q), frac(-5, 3, Q)]).unwrap();
        let x = &g.generators()[0].pow(e1) * &g.generators()[1].pow(e2);
        let y = &g.generators()[0].pow(f1) * &g.generators()[1].pow(f2);
        prop_assert!(subgroup_member(&x, &g, Q).unwrap());
        prop_assert!(subgroup_member(&(&x * &y), &g, Q).unwrap());
        prop_assert!(subgroup_member(&x.inv().unwrap(), &g, Q).unwrap());
        // 2 alone is not reachable from 6 and -5/3.
        let two = &x * &frac(2, 1, Q);
        prop_assert!(!subgroup_member(&two, &g, Q).unwrap());
    }
}
