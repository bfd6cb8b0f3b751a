// SPDX-License-Identifier: Apache-2.0

//! The three report-producing commands, called as a library.

use ktlab::distinguisher::HeuristicSpec;
use ktlab::experiments::{cmd_distinguish, cmd_owf_experiment, cmd_prg_experiment, DistinguishArgs, InverterSpec, Mode, PrgArgs};
use ktlab::owf::TimeSchedule;

fn main() -> ktlab::Result<()> {
    let owf = cmd_owf_experiment(8, &"deny-z:00".parse::<InverterSpec>()?, TimeSchedule::Linear4n, 0)?;
    print!("{}", owf.to_json());

    let prg = cmd_prg_experiment(&PrgArgs {
        owf: "clear-last-bit".into(),
        n: 6,
        alpha_prime: 0,
        gamma: 2,
        delta: 1,
        mode: Mode::Sampled,
        seed: 42,
        samples: 200,
        gl_k: None,
    })?;
    println!("prg verdicts: {:?}", prg.verdicts);

    let dist = cmd_distinguish(&DistinguishArgs {
        n: 4,
        gamma: 8,
        d: 1,
        heuristic: HeuristicSpec::ExactKt,
        t: TimeSchedule::Fixed(64),
        seed: 0,
    })?;
    println!("distinguish verdicts: {:?} (exit code {})", dist.verdicts, dist.exit_code());
    dist.write_plot(std::io::stdout().lock())
}
