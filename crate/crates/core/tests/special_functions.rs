mod oracle;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use deltamass_core::special_functions::{
    bessel_j, bessel_j_derivatives, bessel_j_prime, bessel_y, bessel_y_prime, bessel_zero,
    BesselOrder,
};
use proptest::prelude::*;

// Reference values from 40-digit mpmath evaluations.
const J_REFERENCE: &[(f64, f64, f64)] = &[
    (0.0, 0.001, 0.999999750000015625),
    (0.0, 0.5, 0.93846980724081290423),
    (0.0, 1.0, 0.76519768655796655145),
    (0.0, 2.5, -0.048383776468197996327),
    (0.0, 10.0, -0.2459357644513483352),
    (0.0, 30.5, -0.019389754517762152066),
    (0.0, 1000.0, 0.024786686152420174561),
    (1.0, 0.001, 0.00049999993750000261457),
    (1.0, 1.0, 0.44005058574493351596),
    (1.0, 7.5, 0.13524842757970550518),
    (1.0, 100.0, -0.077145352014112158033),
    (2.0, 0.3, 0.011165861949063963219),
    (2.0, 50.0, -0.059712800794258820511),
    (5.0, 3.0, 0.043028434877047583925),
    (5.0, 20.0, 0.15116976798239497461),
    (10.0, 0.1, 2.690532895434217073e-20),
    (10.0, 12.0, 0.30047603527126931073),
    (10.0, 400.0, 0.037384306121093367871),
    (20.0, 15.0, 0.0073602340792234852583),
    (20.0, 25.0, 0.05199404922830323178),
    (50.0, 0.001, 2.9202857026040639948e-230),
    (50.0, 10.0, 1.7845136078715953063e-30),
    (50.0, 49.0, 0.092045794377933449676),
    (50.0, 60.0, -0.13798273148535212047),
    (50.0, 1000.0, -0.0033360489606152764062),
    (0.5, 3.0, 0.065008182877375778114),
    (1.5, 0.7, 0.14826350832010160956),
    (2.25, 4.4, 0.32948238903429257687),
    (7.3, 9.1, 0.33138003362937867803),
    (13.7, 2.5, 4.8754926667527345253e-10),
    (33.3, 40.0, -0.037808974177842643941),
];

const Y_REFERENCE: &[(f64, f64, f64)] = &[
    (0.0, 0.001, -4.4714166113759232557),
    (0.0, 1.0, 0.088256964215676957983),
    (0.0, 2.5, 0.49807035961523188783),
    (0.0, 10.0, 0.055671167283599391424),
    (0.0, 1000.0, 0.0047159179776228133998),
    (1.0, 0.001, -636.62216723113941482),
    (1.0, 1.0, -0.78121282130028871655),
    (1.0, 7.5, -0.2591285104861162518),
    (2.0, 0.3, -14.480094011452341896),
    (5.0, 3.0, -1.9059459538286737322),
    (5.0, 20.0, -0.10003576788953242697),
    (10.0, 12.0, -0.022876314070499700888),
    (10.0, 400.0, 0.013944871099990970529),
    (20.0, 25.0, 0.19804074776289243611),
    (50.0, 60.0, 0.0086417699626744902868),
    (0.5, 3.0, 0.45604882079463317885),
    (1.5, 0.7, -1.6563541503977834683),
    (2.25, 4.4, 0.23662350068238718647),
    (7.3, 9.1, -0.030271383449663466135),
    (0.3, 1.2, -0.080229328231670177964),
    (0.3, 5.0, -0.19705687911614494825),
];

fn order(nu: f64) -> BesselOrder {
    BesselOrder::new(nu).unwrap()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn j_matches_reference_to_1e10_relative() {
    for &(nu, x, expected) in J_REFERENCE {
        let got = bessel_j(order(nu), x).unwrap();
        assert_relative_eq!(got, expected, max_relative = 1e-10);
    }
}

#[test]
fn y_matches_reference_to_1e10_relative() {
    for &(nu, x, expected) in Y_REFERENCE {
        let got = bessel_y(order(nu), x).unwrap();
        assert_relative_eq!(got, expected, max_relative = 1e-10);
    }
}

#[test]
fn j_agrees_with_series_oracle() {
    for n in 0..=10 {
        for &x in &[0.01, 0.5, 1.9, 2.1, 4.0, 8.0] {
            let got = bessel_j(n.into(), x).unwrap();
            assert!(
                (got - oracle::series_j(n, x)).abs() < 1e-13,
                "J_{n}({x}) = {got} vs series {}",
                oracle::series_j(n, x)
            );
        }
    }
}

#[test]
fn j_agrees_with_hankel_expansion_at_large_argument() {
    for &nu in &[0.0, 1.0, 2.5, 7.0] {
        for &x in &[500.0, 1000.0] {
            let got = bessel_j(order(nu), x).unwrap();
            assert!((got - oracle::hankel_j(nu, x)).abs() < 1e-12, "nu={nu} x={x}: {got} vs {}", oracle::hankel_j(nu, x));
        }
    }
}

#[test]
fn order_one_first_zero_is_a_root() {
    let v = bessel_j(1.into(), 3.8317059702).unwrap();
    assert!(v.abs() < 1e-9, "{v}");
}

#[test]
fn derivative_identities_agree_at_first_zero() {
    // J_1' from the two-sided recurrence versus J_0 − J_1/x (which is J_0 at a zero).
    let z = 3.8317059702;
    let lhs = bessel_j_prime(1.into(), z).unwrap();
    let j0 = bessel_j(0.into(), z).unwrap();
    let j1 = bessel_j(1.into(), z).unwrap();
    assert!((lhs - (j0 - j1 / z)).abs() < 1e-9);
    assert!((lhs - j0).abs() < 1e-9);
    // −J_2-based form: J_1' = J_1/x − J_2.
    let j2 = bessel_j(2.into(), z).unwrap();
    assert!((lhs - (j1 / z - j2)).abs() < 1e-9);
}

#[test]
fn wronskian_at_two_matches_series_oracle() {
    let x = 2.0;
    for n in 0..=3u32 {
        let w = bessel_j(n.into(), x).unwrap() * bessel_y_prime(n.into(), x).unwrap()
            - bessel_j_prime(n.into(), x).unwrap() * bessel_y(n.into(), x).unwrap();
        assert!((w - 2.0 / (PI * x)).abs() < 1e-9);
        let w_oracle = oracle::series_j(n, x) * oracle::series_y_prime(n, x)
            - oracle::series_j_prime(n, x) * oracle::series_y(n, x);
        assert!((w - w_oracle).abs() < 1e-9, "n = {n}: {w} vs oracle {w_oracle}");
        assert!((bessel_y(n.into(), x).unwrap() - oracle::series_y(n, x)).abs() < 1e-12);
    }
}

#[test]
fn wronskian_and_recurrence_on_log_grid() {
    for n in 0..=10u32 {
        for x in log_grid(0.1, 100.0, 61) {
            let nu: BesselOrder = n.into();
            let w = bessel_j(nu, x).unwrap() * bessel_y_prime(nu, x).unwrap()
                - bessel_j_prime(nu, x).unwrap() * bessel_y(nu, x).unwrap();
            let target = 2.0 / (PI * x);
            // Y grows like x^{-n} near 0.1; compare relative to the scale of the products.
            let scale = (bessel_y(nu, x).unwrap().abs() * bessel_j(nu, x).unwrap().abs()).max(1.0);
            assert!((w - target).abs() < 1e-9 * scale, "Wronskian n={n} x={x}: {w} vs {target}");
            if n >= 1 {
                let r = bessel_j((n - 1).into(), x).unwrap() + bessel_j((n + 1).into(), x).unwrap()
                    - 2.0 * n as f64 / x * bessel_j(nu, x).unwrap();
                assert!(r.abs() < 1e-9, "recurrence n={n} x={x}: {r}");
            }
        }
    }
}

#[test]
fn integer_order_j_is_bounded_by_one() {
    for n in 0..=20u32 {
        for i in 0..400 {
            let x = i as f64 * 0.25;
            assert!(bessel_j(n.into(), x).unwrap().abs() <= 1.0);
        }
    }
}

#[test]
fn zeros_match_series_bisection_oracle() {
    for (n, index, expected) in [(1, 1, 3.8317059702), (1, 2, 7.0155866698), (2, 1, 5.1356223018)] {
        let z = bessel_zero(n, index).unwrap();
        assert!((z - expected).abs() < 1e-10);
    }
    for n in 1..=2 {
        for index in 1..=3 {
            let z = bessel_zero(n, index).unwrap();
            let reference = oracle::series_zero(n, index);
            assert!((z - reference).abs() < 1e-10, "j_{n},{index}: {z} vs {reference}");
        }
    }
}

#[test]
fn zeros_match_high_precision_values() {
    let table: [(u32, [f64; 5]); 3] = [
        (1, [3.8317059702075123156, 7.0155866698156187535, 10.173468135062722077, 13.323691936314223032, 16.470630050877632813]),
        (2, [5.1356223018406825563, 8.4172441403998648578, 11.619841172149059427, 14.795951782351260747, 17.959819494987826455]),
        (3, [6.3801618959239835062, 9.7610231299816696785, 13.01520072169843442, 16.223466160318768122, 19.409415226435011554]),
    ];
    for (n, zeros) in table {
        for (i, expected) in zeros.iter().enumerate() {
            let z = bessel_zero(n, i as u32 + 1).unwrap();
            assert!((z - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn zeros_interlace() {
    for n in 1..=8u32 {
        for index in 1..=8u32 {
            let a = bessel_zero(n, index).unwrap();
            let b = bessel_zero(n + 1, index).unwrap();
            let c = bessel_zero(n, index + 1).unwrap();
            assert!(a < b && b < c, "n={n} N={index}: {a} {b} {c}");
        }
    }
}

#[test]
fn high_index_zero_is_near_mcmahon() {
    let z = bessel_zero(4, 60).unwrap();
    assert!(bessel_j(4.into(), z).unwrap().abs() < 1e-12, "{z} {}", bessel_j(4.into(), z).unwrap());
    assert!((z - 193.95274280822859222).abs() < 1e-11);
    assert!((z - deltamass_core::special_functions::mcmahon_estimate(4, 60)).abs() < 1e-6);
}

#[test]
fn second_derivative_satisfies_bessel_equation() {
    for &nu in &[0.0, 0.4, 1.0, 1.7, 3.0, 6.5] {
        for &z in &[0.5, 2.0, 7.3, 15.0] {
            let (j, jp, jpp) = bessel_j_derivatives(order(nu), z).unwrap();
            let residual = z * z * jpp + z * jp + (z * z - nu * nu) * j;
            assert!(residual.abs() < 1e-11, "nu={nu} z={z}: {residual}");
        }
    }
}

proptest! {
    #[test]
    fn recurrence_holds_for_real_orders(nu in 1.0f64..40.0, x in 0.05f64..200.0) {
        let jm = bessel_j(order(nu - 1.0), x).unwrap();
        let j = bessel_j(order(nu), x).unwrap();
        let jp = bessel_j(order(nu + 1.0), x).unwrap();
        let scale = jm.abs().max(jp.abs()).max(1e-300);
        prop_assert!(((jm + jp - 2.0 * nu / x * j) / scale).abs() < 1e-9 || (jm + jp - 2.0 * nu / x * j).abs() < 1e-12);
    }

    #[test]
    fn wronskian_holds_for_real_orders(nu in 0.0f64..20.0, x in 0.5f64..300.0) {
        let o = order(nu);
        let w = bessel_j(o, x).unwrap() * bessel_y_prime(o, x).unwrap()
            - bessel_j_prime(o, x).unwrap() * bessel_y(o, x).unwrap();
        let target = 2.0 / (PI * x);
        let scale = (bessel_y(o, x).unwrap().abs() * bessel_j(o, x).unwrap().abs()).max(1.0);
        prop_assert!((w - target).abs() < 1e-9 * scale);
    }
}
