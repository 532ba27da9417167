use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use zigzag::cli::parse_ap;
use zigzag::field::ResidueField;
use zigzag::galois::{GaloisRep, Lambda, Summand};
use zigzag::gamma::{act, Mat2};
use zigzag::hecke::{CoeffRing, QMat, TreeFunction};
use zigzag::llc::{ll_inverse, ll_map};
use zigzag::padic::{PadicContext, PadicElement};

fn rep_strategy() -> impl Strategy<Value = GaloisRep> {
    let prime = prop_oneof![Just(5u64), Just(7), Just(11)];
    (prime, any::<bool>(), 0i64..200, 0i64..200, 1u64..1000, 1u64..1000).prop_map(
        |(p, irreducible, c, c2, l, l2)| {
            let field = ResidueField::new(p, 2).unwrap();
            let q = field.order() - 1;
            // nonzero field elements by index
            let unit = |n: u64| field.elements().filter(|&x| x != field.zero()).nth((n % q) as usize).unwrap();
            if irreducible {
                let c = if c % (p as i64 + 1) == 0 { c + 1 } else { c };
                GaloisRep::irreducible(&field, c, Lambda::Known(unit(l))).unwrap()
            } else {
                GaloisRep::reducible(
                    &field,
                    Summand { a: c, lambda: Lambda::Known(unit(l)) },
                    Summand { a: c2, lambda: Lambda::Known(unit(l2)) },
                )
            }
        },
    )
}

fn ap_text_strategy() -> impl Strategy<Value = String> {
    let coeff = prop_oneof![
        (1i64..50).prop_map(|n| n.to_string()),
        Just("u".to_string()),
        (1i64..9, 1i64..9, any::<bool>()).prop_map(|(a, b, neg)| {
            format!("({a}{}{b}*sqrt(p))", if neg { "-" } else { "+" })
        }),
    ];
    let term = (proptest::option::of(coeff), 1i64..7).prop_map(|(c, twice)| {
        let power = if twice == 2 {
            "p".to_string()
        } else if twice % 2 == 0 {
            format!("p^{}", twice / 2)
        } else {
            format!("p^({twice}/2)")
        };
        match c {
            Some(c) => format!("{c}*{power}"),
            None => power,
        }
    });
    (proptest::collection::vec((term, any::<bool>()), 1..4)).prop_map(|terms| {
        let mut out = String::new();
        for (i, (t, neg)) in terms.into_iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&t);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn llc_round_trip(rep in rep_strategy()) {
        let labels = ll_map(&rep).unwrap();
        let back = ll_inverse(rep.field(), &labels).unwrap();
        prop_assert_eq!(back, rep.canonical_form());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ap_print_parse(text in ap_text_strategy()) {
        let parsed = parse_ap(&text).unwrap();
        let printed = parsed.to_string();
        let again = parse_ap(&printed).unwrap();
        prop_assert_eq!(&again.terms, &parsed.terms);
        prop_assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn ap_evaluation_is_additive(a in ap_text_strategy(), b in ap_text_strategy()) {
        let ctx = PadicContext::new(7, 2, 10).unwrap();
        let joined = format!("{a} + {}", b.trim_start_matches('-'));
        let (Ok(x), Ok(y), Ok(z)) = (
            parse_ap(&a).unwrap().evaluate(&ctx),
            parse_ap(b.trim_start_matches('-')).unwrap().evaluate(&ctx),
            parse_ap(&joined).unwrap().evaluate(&ctx),
        ) else {
            return Ok(());
        };
        prop_assert!(x.add(&y).unwrap().sub(&z).unwrap().is_zero_to_precision());
    }

    #[test]
    fn integers_embed(x in -10_000i64..10_000, y in -10_000i64..10_000, d in 1i64..50) {
        let p = 5u64;
        let ctx = PadicContext::new(p, 1, 12).unwrap();
        let q = |n: i64| PadicElement::from_int(&ctx, n);
        let sum = q(x).add(&q(y)).unwrap();
        prop_assert!(sum.sub(&q(x + y)).unwrap().is_zero_to_precision());
        let prod = q(x).mul(&q(y)).unwrap();
        prop_assert!(prod.sub(&q(x * y)).unwrap().is_zero_to_precision());
        let frac = BigRational::new(BigInt::from(x), BigInt::from(d));
        let e = PadicElement::from_rational(&ctx, &frac).unwrap();
        prop_assert!(e.mul_int(d).unwrap().sub(&q(x)).unwrap().is_zero_to_precision());
    }

    #[test]
    fn gamma_action_composes(
        p in prop_oneof![Just(3u64), Just(5), Just(7)],
        g in proptest::array::uniform4(0i64..50),
        h in proptest::array::uniform4(0i64..50),
        poly in proptest::collection::vec(0u64..50, 1..12),
    ) {
        let g = Mat2::new(p, g[0], g[1], g[2], g[3]);
        let h = Mat2::new(p, h[0], h[1], h[2], h[3]);
        let poly: Vec<u64> = poly.into_iter().map(|x| x % p).collect();
        let lhs = act(p, &act(p, &poly, &h), &g);
        let rhs = act(p, &poly, &g.mul(&h, p));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hecke_is_linear(
        coeffs in proptest::collection::vec(0i64..25, 3),
        shifts in proptest::collection::vec((0i64..25, -1i32..=1), 1..4),
        s in 0i64..25,
    ) {
        let p = 5u64;
        let ring = CoeffRing::mod_prime_power(p, 2).unwrap();
        let v: Vec<u64> = coeffs.iter().map(|&c| ring.from_int(c)).collect();
        let mut f = TreeFunction::zero(ring.clone(), 2);
        for (c, e) in shifts {
            let pe = BigRational::from_integer(BigInt::from(p)).pow(e);
            let g = QMat::new(pe, BigRational::from_integer(BigInt::from(c)), BigInt::from(0).into(), BigInt::from(1).into());
            f = f.add(&TreeFunction::elementary(ring.clone(), &g, &v).unwrap());
        }
        let s = ring.from_int(s);
        let lhs = f.scale(s).apply_t().unwrap();
        let rhs = f.apply_t().unwrap().scale(s);
        prop_assert_eq!(lhs, rhs);
        let twice = f.add(&f).apply_t().unwrap();
        let tf = f.apply_t().unwrap();
        prop_assert_eq!(twice, tf.add(&tf));
    }
}
