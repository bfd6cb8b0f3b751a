// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use ktlab::owf::{
    brute_force_inverter, eval_f, eval_f_padded, heuristic_from_inverter, input_len, inverter_failure, kt_lengths,
    make_failing_inverter, reduction_accounting, BruteForceInverter, OwfImage, OwfInput, OwfOutput, TimeSchedule,
};
use ktlab::stats::rational;
use ktlab::tinyvm::run;
use ktlab::{BitString, Rational};
use num_bigint::BigInt;

fn direct_census(n: usize, t: u64) -> BTreeMap<OwfOutput, u64> {
    let m = input_len(n);
    let mut counts = BTreeMap::new();
    for v in 0..1u64 << m {
        let input = OwfInput::from_bits(n, &BitString::from_u64(v, m)).unwrap();
        *counts.entry(eval_f(&input, t)).or_insert(0) += 1;
    }
    counts
}

#[test]
fn image_matches_direct_enumeration() {
    let image = OwfImage::build(4, 16).unwrap();
    let direct = direct_census(4, 16);
    assert_eq!(image.image_size(), direct.len());
    for (y, c) in &direct {
        assert_eq!(image.mass(y), *c);
        let pre = image.invert(y).unwrap();
        assert_eq!(eval_f(&pre, 16), *y);
    }
}

#[test]
fn padding_keeps_the_image() {
    // every padded input behaves like its valid prefix, so the image is unchanged
    let n = (2..8).find(|&n| input_len(n + 1) > input_len(n) + 1).expect("a gap in the length ladder");
    let t = 4 * n as u64;
    let m = input_len(n);
    let mut padded = BTreeMap::new();
    for v in 0..1u64 << (m + 1) {
        let (k, y) = eval_f_padded(&BitString::from_u64(v, m + 1), TimeSchedule::Fixed(t)).unwrap();
        assert_eq!(k, n);
        *padded.entry(y).or_insert(0u64) += 1;
    }
    let direct = direct_census(n, t);
    assert_eq!(padded.keys().collect::<Vec<_>>(), direct.keys().collect::<Vec<_>>());
    assert!(padded.iter().all(|(y, c)| *c == 2 * direct[y]));
}

#[test]
fn full_inversion_at_n6() {
    let inv = BruteForceInverter::new(6, 24).unwrap();
    assert_eq!(inverter_failure(&inv, inv.image()), rational(0, 1));
    let missing = OwfOutput { ell: 3, y: Some(BitString::ones(40)) };
    assert_eq!(brute_force_inverter(6, 24, &missing).unwrap(), None);
}

#[test]
fn perfect_inverter_recovers_kt_at_n8() {
    let (n, t) = (8, 32);
    let inv = BruteForceInverter::new(n, t).unwrap();
    let kt = kt_lengths(n, t).unwrap();
    for (z, &k) in BitString::all(n).zip(&kt) {
        let (h, witness) = heuristic_from_inverter(&inv, &z, t);
        assert_eq!(h, k, "z = {z}");
        assert_eq!(run(&witness.unwrap(), t).output(), Some(&z));
    }
}

#[test]
fn deny_mass_is_the_failure_probability() {
    let (n, t) = (6, 24);
    let image = Arc::new(OwfImage::build(n, t).unwrap());
    let mut outputs: Vec<OwfOutput> = image.outputs().map(|(y, _)| y.clone()).collect();
    outputs.sort();
    let deny: HashSet<OwfOutput> = outputs.iter().step_by(3).cloned().collect();
    let mass: u64 = deny.iter().map(|y| image.mass(y)).sum();
    let inv = make_failing_inverter(BruteForceInverter::from_image(image.clone()), deny);
    let expected = Rational::new(BigInt::from(mass), BigInt::from(1u64 << image.input_len()));
    assert_eq!(inverter_failure(&inv, &image), expected);
}

#[test]
fn denying_one_compressible_string() {
    let (n, t) = (8, 32);
    let image = Arc::new(OwfImage::build(n, t).unwrap());
    let kt = kt_lengths(n, t).unwrap();
    let z = BitString::ones(n);
    let w = kt[z.to_u64() as usize];
    assert!(w < n + 1, "1^n should compress");
    let inv = make_failing_inverter(
        BruteForceInverter::from_image(image.clone()),
        HashSet::from([OwfOutput { ell: w, y: Some(z) }]),
    );
    let report = reduction_accounting(&inv, &image, &kt).unwrap();
    assert!(report.fail_r >= rational(1, 256));
    assert!(report.bound_holds);
    // 2^{2c+3}·n·p² with p = 256, c = 1
    assert_eq!(report.q_target.unwrap(), Rational::from_integer(BigInt::from(32 * 8 * 256 * 256)));
}

#[test]
fn deny_all_has_full_failure() {
    let (n, t) = (5, 20);
    let image = Arc::new(OwfImage::build(n, t).unwrap());
    let kt = kt_lengths(n, t).unwrap();
    let deny: HashSet<OwfOutput> = image.outputs().map(|(y, _)| y.clone()).collect();
    let inv = make_failing_inverter(BruteForceInverter::from_image(image.clone()), deny);
    let report = reduction_accounting(&inv, &image, &kt).unwrap();
    assert_eq!(report.inverter_fail, rational(1, 1));
    assert!(report.bound_holds);
}
