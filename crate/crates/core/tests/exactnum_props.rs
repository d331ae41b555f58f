use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use succinct::exactnum::*;

type R = BigRational;

fn sqrt_approx(x: &R) -> R {
    // floor(√(x·10¹⁶⁰))/10⁸⁰, error below 1e-79
    let scale = BigInt::from(10).pow(80);
    let n = (x * R::from_integer(&scale * &scale)).floor().to_integer();
    R::new(n.sqrt(), scale)
}

/// Numeric value of an algebraic element, as a pair of close rationals.
fn approx(a: &Algebraic) -> (R, R) {
    let s2 = sqrt_approx(&R::from_integer(BigInt::from(2)));
    let sr = sqrt_approx(&R::from_integer(BigInt::from(a.r.clone())));
    let re = (&a.z.a.re + &a.z.b.re * &s2) * &sr;
    let im = (&a.z.a.im + &a.z.b.im * &s2) * &sr;
    (re, im)
}

fn close(x: &(R, R), y: &(R, R)) -> bool {
    let tol = R::new(BigInt::one(), BigInt::from(10).pow(40));
    (&x.0 - &y.0).abs() < tol && (&x.1 - &y.1).abs() < tol
}

fn small() -> impl Strategy<Value = R> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| R::new(BigInt::from(n), BigInt::from(d)))
}

fn element() -> impl Strategy<Value = Algebraic> {
    (small(), small(), small(), small(), prop::sample::select(vec![1u32, 3, 5, 7, 15])).prop_map(|(a, b, c, d, r)| {
        let z = Zeta8::new(Gauss::new(a, b), Gauss::new(c, d));
        Algebraic::from_zeta(z).mul(&Algebraic::sqrt_rational(&R::from_integer(BigInt::from(r))).unwrap())
    })
}

fn literal_in(cls: ClassDescriptor) -> impl Strategy<Value = BitString> {
    let w = cls.width();
    prop::collection::vec(any::<bool>(), w).prop_map(BitString)
}

proptest! {
    #[test]
    fn ring_ops_match_numeric_oracle(x in element(), y in element()) {
        let (xr, xi) = approx(&x);
        let (yr, yi) = approx(&y);
        let prod = x.mul(&y);
        prop_assert!(close(&approx(&prod), &(&xr * &yr - &xi * &yi, &xr * &yi + &xi * &yr)));
        if x.r == y.r {
            let sum = x.add(&y).unwrap();
            prop_assert!(close(&approx(&sum), &(&xr + &yr, &xi + &yi)));
        }
        if !y.is_zero() {
            let q = x.div(&y).unwrap();
            let n = &yr * &yr + &yi * &yi;
            let expect = ((&xr * &yr + &xi * &yi) / &n, (&xi * &yr - &xr * &yi) / &n);
            prop_assert!(close(&approx(&q), &expect));
        }
    }

    #[test]
    fn real_sign_matches_numeric_oracle(a in -200i64..200, b in -200i64..200) {
        let v = Algebraic::from_zeta(Zeta8::new(
            Gauss::real(R::from_integer(BigInt::from(a))),
            Gauss::real(R::from_integer(BigInt::from(b))),
        ));
        let (re, _) = approx(&v);
        prop_assert_eq!(v.real_sign().unwrap(), re.cmp(&R::zero()));
    }

    #[test]
    fn complex_bits_round_trip(bits in literal_in(ClassDescriptor::new(Family::C, 4))) {
        let cls = ClassDescriptor::new(Family::C, 4);
        match decode(&bits, &cls) {
            Ok(v) => prop_assert_eq!(encode(&v, &cls).unwrap(), bits),
            Err(e) => prop_assert_eq!(e, ExactError::ZeroDenominator),
        }
    }

    #[test]
    fn flagged_bits_round_trip(
        fam in prop::sample::select(vec![Family::N, Family::QPlus, Family::Q, Family::C]),
        p in 1u32..6,
        seed in any::<u64>(),
    ) {
        let mut cls = ClassDescriptor::new(fam, p).with_flag(Flag::Omega).with_flag(Flag::SqrtHalf(2));
        if fam == Family::C { cls = cls.with_flag(Flag::Sqrt(2)); } else { cls = cls.with_flag(Flag::Sqrt(1)); }
        let bits = BitString((0..cls.width()).map(|i| (seed.rotate_left(i as u32 % 64) ^ (i as u64 * 0x9e37)) & 1 == 1).collect());
        if let Ok(v) = decode(&bits, &cls) {
            prop_assert_eq!(encode(&v, &cls).unwrap(), bits);
        }
    }

    #[test]
    fn values_round_trip(n in 0u64..1024, d in 1u64..1024, neg in any::<bool>(), dneg in any::<bool>()) {
        let re = SignedRational::new(neg, BigUint::from(n), dneg, BigUint::from(d)).unwrap();
        let im = SignedRational::new(dneg, BigUint::from(d), neg, BigUint::from(n.max(1))).unwrap();
        let v = ExactValue::complex(re, im);
        let cls = ClassDescriptor::new(Family::C, 10);
        let back = decode(&encode(&v, &cls).unwrap(), &cls).unwrap();
        prop_assert_eq!(back.literal(), v.literal());
    }

    #[test]
    fn complex_ratio_is_exact_quotient(
        a in -7i64..8, b in 1i64..8, c in -7i64..8, d in 1i64..8,
        e in -7i64..8, f in 1i64..8, g in -7i64..8, h in 1i64..8,
    ) {
        let cls = ClassDescriptor::new(Family::C, 3);
        let z = ExactValue::complex(SignedRational::from_i64(a, b).unwrap(), SignedRational::from_i64(c, d).unwrap());
        let w = ExactValue::complex(SignedRational::from_i64(e, f).unwrap(), SignedRational::from_i64(g, h).unwrap());
        match ratio(&z, &w, &cls) {
            Ok((q, out)) => {
                prop_assert_eq!(out.width(), 32 * 3 + 12);
                prop_assert!(encode(&q, &out).is_ok());
                // independent route: plain rational complex division
                let (zr, zi) = (R::new(a.into(), b.into()), R::new(c.into(), d.into()));
                let (wr, wi) = (R::new(e.into(), f.into()), R::new(g.into(), h.into()));
                let n = &wr * &wr + &wi * &wi;
                let expect = ExactValue::complex(
                    SignedRational::from_rational(&((&zr * &wr + &zi * &wi) / &n)),
                    SignedRational::from_rational(&((&zi * &wr - &zr * &wi) / &n)),
                );
                prop_assert_eq!(q, expect);
            }
            Err(err) => prop_assert_eq!(err, ExactError::DivisionByZero),
        }
    }
}

#[test]
fn signed_ratio_xors_sign_bits() {
    let cls = ClassDescriptor::new(Family::Q, 3);
    let x = ExactValue::complex("-3/5".parse().unwrap(), SignedRational::zero());
    let y = ExactValue::complex("2/-7".parse().unwrap(), SignedRational::zero());
    let (q, out) = ratio(&x, &y, &cls).unwrap();
    assert_eq!(out.width(), 4 * 3 + 2);
    let l = q.literal().unwrap();
    // num sign = sgn(n_x) xor sgn(m_y), den sign = sgn(m_x) xor sgn(n_y)
    assert!(!l.re.num_neg && !l.re.den_neg);
    assert_eq!(l.re.to_string(), "21/10");
    assert_eq!(q, ExactValue::from_ratio(21, 10).unwrap());
    let y = ExactValue::complex("-2/-7".parse().unwrap(), SignedRational::zero());
    let (q, _) = ratio(&x, &y, &cls).unwrap();
    let l = q.literal().unwrap();
    assert!(!l.re.num_neg && l.re.den_neg);
    assert_eq!(l.re.to_string(), "21/-10");
}

#[test]
fn omega_ratio_subtracts_tags() {
    let cls = ClassDescriptor::new(Family::C, 2).with_flag(Flag::Omega);
    let (q, out) = ratio(&ExactValue::omega(1), &ExactValue::omega(3), &cls).unwrap();
    assert_eq!(out.width(), 32 * 2 + 15);
    assert_eq!(q.literal().unwrap().omega, Some(6));
    assert_eq!(q, ExactValue::omega(6));
}

#[test]
fn ratio_widths_for_all_p() {
    for p in 1..=16u32 {
        let w = |f| ClassDescriptor::new(f, p).ratio_class().unwrap().width();
        assert_eq!(w(Family::N), 2 * p as usize);
        assert_eq!(w(Family::QPlus), 4 * p as usize);
        assert_eq!(w(Family::Q), 4 * p as usize + 2);
        assert_eq!(w(Family::C), 32 * p as usize + 12);
    }
}
