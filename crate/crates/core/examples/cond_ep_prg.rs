// SPDX-License-Identifier: Apache-2.0

//! The conditional generator on a toy function: lengths, one evaluation and
//! the exact density and entropy checks.

use ktlab::prg::exact::{density_exact, entropy_exact, event_mass, expansion_check};
use ktlab::prg::{CondEpPrg, PrgConfig, ToyOwf};
use ktlab::BitString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ktlab::Result<()> {
    let prg = CondEpPrg::build(ToyOwf::by_name("identity", 4)?, &PrgConfig::default())?;
    let p = &prg.params;
    println!("n = {}, r = {}, w1 = {}, w2 = {}, k = {}, n' = {}, l' = {}", p.n, p.r, p.w1, p.w2, p.gl_k, p.n_prime, p.ell_prime);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let seed: BitString = (0..p.n_prime).map(|_| rng.gen::<bool>()).collect();
    println!("G(seed) = {}", prg.eval(&seed)?.to_hex());

    println!("Pr[E] = {}", event_mass(&prg));
    let d = density_exact(&prg)?;
    println!("SD(REAL, U) = {}, SD(REAL, HYB1) = {}, SD(HYB1, HYB2) = {}", d.sd_real_uniform, d.sd_real_hyb1, d.sd_hyb1_hyb2);
    let e = entropy_exact(&prg)?;
    println!("H(G(U|E)) = {:.6} (l - 2 = {}), loss = {:.6} <= {}", e.output_entropy, e.ell - 2, e.loss, e.loss_bound);
    let x = expansion_check(p);
    println!("expansion {} >= {}: {}", x.expansion, x.required, x.holds);
    Ok(())
}
