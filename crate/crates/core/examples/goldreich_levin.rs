// SPDX-License-Identifier: Apache-2.0

//! Inner-product hardcore bits and their exact bias.

use ktlab::hardcore::{gl, gl_bias_census, GlSeed, GlSeedDistribution};
use ktlab::{BitString, ExactDistribution};

fn main() -> ktlab::Result<()> {
    let x = BitString::parse("10110")?;
    let seed = GlSeed::new(vec![BitString::parse("11000")?, BitString::parse("00111")?, BitString::parse("10101")?])?;
    println!("GL({x}) = {}", gl(&x, &seed)?);

    let source = ExactDistribution::uniform(5);
    let seeds = GlSeedDistribution::Joint { k: 2, seeds: ExactDistribution::uniform(10) };
    for (i, p) in gl_bias_census(&source, &seeds)?.iter().enumerate() {
        println!("Pr[bit {i} = 1] = {p}");
    }
    Ok(())
}
