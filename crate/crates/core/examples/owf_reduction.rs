// SPDX-License-Identifier: Apache-2.0

//! The `K^t` candidate OWF and the inverter-to-heuristic reduction, counted exactly.

use std::collections::HashSet;
use std::sync::Arc;

use ktlab::owf::{
    heuristic_from_inverter, kt_lengths, make_failing_inverter, output_mass_check, reduction_accounting,
    BruteForceInverter, OwfImage, OwfOutput,
};
use ktlab::BitString;

fn main() -> ktlab::Result<()> {
    let (n, t) = (8, 32);
    let image = Arc::new(OwfImage::build(n, t)?);
    let kt = kt_lengths(n, t)?;
    println!("n = {n}: {} inputs, {} distinct outputs", 1u64 << image.input_len(), image.image_size());

    let perfect = BruteForceInverter::from_image(image.clone());
    let z = BitString::zeros(n);
    let (k, witness) = heuristic_from_inverter(&perfect, &z, t);
    println!("perfect inverter on {z}: k = {k}, witness {:?}", witness.map(|p| p.bits().to_string()));

    // deny the one output the heuristic needs for z
    let deny = HashSet::from([OwfOutput { ell: kt[0], y: Some(z.clone()) }]);
    let weak = make_failing_inverter(BruteForceInverter::from_image(image.clone()), deny);
    for (name, report) in [
        ("perfect", reduction_accounting(&perfect, &image, &kt)?),
        ("deny (K^t(z) ‖ z)", reduction_accounting(&weak, &image, &kt)?),
    ] {
        println!(
            "{name:>18}: fail_r = {}, inverter_fail = {}, required = {}, holds = {}",
            report.fail_r, report.inverter_fail, report.required_fail, report.bound_holds
        );
    }

    let mass = output_mass_check(&image, &kt);
    println!("output mass: field width {}, counting form {}, 1/(n+c) form {}", mass.holds_field_width, mass.holds_counting, mass.holds_uniform_length);
    Ok(())
}
