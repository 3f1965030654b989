use num_bigint::BigInt;
use richlines::affine::{concurrency_determinant, general_position_check};
use richlines::construct::folner::folner_line;
use richlines::construct::folner_det;
use richlines::{Field, Scalar};

fn sarrus(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * m[1][1] * m[2][2] + m[0][1] * m[1][2] * m[2][0] + m[0][2] * m[1][0] * m[2][1]
        - m[0][2] * m[1][1] * m[2][0]
        - m[0][0] * m[1][2] * m[2][1]
        - m[0][1] * m[1][0] * m[2][2]
}

fn triples(n: u32) -> impl Iterator<Item = (u32, u32, u32)> {
    (1..n).flat_map(move |i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
}

#[test]
fn closed_form_matches_direct_determinant() {
    for n in 4..=9u32 {
        let pw = |e: u32| (n as i128).pow(e);
        for (i, j, k) in triples(n) {
            let direct = sarrus([[1, 1, 1], [pw(i), pw(j), pw(k)], [i as i128, j as i128, k as i128]]);
            let formula = folner_det(i, j, k, n).unwrap();
            assert_eq!(formula, BigInt::from(direct), "N={n} ({i},{j},{k})");
            assert!(direct < 0);
        }
    }
}

#[test]
fn line_determinant_is_scaled_closed_form() {
    for n in 4..=7u32 {
        let scale = BigInt::from(n).pow(n - 1);
        for (i, j, k) in triples(n) {
            let d = concurrency_determinant(&folner_line(n, i), &folner_line(n, j), &folner_line(n, k));
            let expected = Scalar::from_bigint(&scale * folner_det(i, j, k, n).unwrap(), Field::Rational);
            assert_eq!(d, expected);
        }
    }
}

#[test]
fn full_families_in_general_position() {
    for n in 4..=9u32 {
        let lines: Vec<_> = (1..n).map(|k| folner_line(n, k)).collect();
        assert!(general_position_check(&lines).unwrap().is_empty(), "N={n}");
    }
}

#[test]
fn bad_indices_rejected() {
    assert!(folner_det(0, 1, 2, 5).is_err());
    assert!(folner_det(2, 1, 3, 5).is_err());
    assert!(folner_det(1, 2, 6, 5).is_err());
}
