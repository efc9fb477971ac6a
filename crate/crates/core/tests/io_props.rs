mod common;

use approxhad::certify::{certify, CERTIFY_KEYS, CERTIFY_SCHEMA_VERSION};
use approxhad::io::{
    format_hex, format_sig10, parse_hex, parse_real_csv, parse_sign_auto, parse_sign_csv, parse_sign_matrix,
    write_real_csv, write_sign_matrix,
};
use approxhad::poly::IntPolynomial;
use approxhad::SignMatrix;
use common::sized_sign_matrix;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn to_csv(a: &SignMatrix) -> String {
    a.rows()
        .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
}

proptest! {
    #![proptest_config(common::config(512))]

    #[test]
    fn sign_text_round_trips(a in sized_sign_matrix(1, 40)) {
        let text = write_sign_matrix(&a);
        prop_assert!(text.ends_with('\n'));
        prop_assert_eq!(&parse_sign_matrix(&text).unwrap(), &a);
        prop_assert_eq!(&parse_sign_auto(&text.replace('\n', "\r\n")).unwrap(), &a);
        prop_assert_eq!(write_sign_matrix(&parse_sign_matrix(&text).unwrap()), text);
    }

    #[test]
    fn sign_csv_parses_to_the_same_matrix(a in sized_sign_matrix(1, 20)) {
        prop_assert_eq!(&parse_sign_csv(&to_csv(&a)).unwrap(), &a);
        prop_assert_eq!(&parse_sign_auto(&to_csv(&a)).unwrap(), &a);
    }

    #[test]
    fn hex_floats_are_exact(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        let back = parse_hex(&format_hex(x)).unwrap();
        if x.is_nan() {
            prop_assert!(back.is_nan());
        } else {
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn sig10_keeps_ten_digits(x in prop::num::f64::NORMAL) {
        let s = format_sig10(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!(((back - x) / x).abs() <= 5.0000001e-10, "{} -> {}", x, s);
        let digits = s.trim_start_matches('-').split(['e', 'E']).next().unwrap().replace('.', "");
        prop_assert_eq!(digits.trim_start_matches('0').len().max(10), 10);
    }

    #[test]
    fn real_csv_round_trips(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-1e6f64..1e6, 36)) {
        let m = DMatrix::from_fn(rows, cols, |i, j| seed[i * 6 + j] / 7.0);
        let back = parse_real_csv(&write_real_csv(&m)).unwrap();
        prop_assert_eq!(back, m);
    }
}

#[test]
fn certify_schema_is_stable() {
    let barba = SignMatrix::circulant(&[1, 1, 1, 1, -1]).unwrap();
    let report = certify(&barba, Some(IntPolynomial::from_i64(&[-3, 2])), Some(0.5)).unwrap();
    let text = serde_json::to_string_pretty(&report.json()).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["schema_version"], CERTIFY_SCHEMA_VERSION);
    let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = CERTIFY_KEYS.to_vec();
    want.sort();
    assert_eq!(keys, want);
    common::golden::check("certify_barba5.json", &(text + "\n"));
}
