// SPDX-License-Identifier: Apache-2.0

//! Exact `K^t` for every string of one length, plus a few witnesses.
//!
//! ```bash
//! cargo run --release --example kt_table -- 8 32
//! ```

use ktlab::kolmogorov::{kt, write_kt_table, DEFAULT_BUDGET_BITS};
use ktlab::tinyvm::run;
use ktlab::BitString;

fn main() -> ktlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(8);
    let t: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(32);

    for x in [BitString::zeros(n), BitString::ones(n), BitString::from_u64(0b1011, n)] {
        let r = kt(&x, t)?;
        println!("K^{t}({x}) = {}  witness {}  runs to {:?}", r.length, r.witness.bits(), run(&r.witness, t));
    }

    println!();
    write_kt_table(n, t, DEFAULT_BUDGET_BITS, std::io::stdout().lock())
}
