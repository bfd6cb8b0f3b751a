// SPDX-License-Identifier: Apache-2.0

//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use ktlab::distinguisher::{
    distinguisher_row, eq2_census, eq2_census_for, random_table_function, DistinguisherParams, ExactKt,
};
use ktlab::experiments::{
    cmd_distinguish, cmd_kt_table, cmd_owf_experiment, cmd_prg_experiment, DistinguishArgs, ExperimentReport,
    InverterSpec, Mode, PrgArgs,
};
use ktlab::hashing::{lhl_check, pairwise_census};
use ktlab::kolmogorov::{count_low_complexity, kt, KtCensus};
use ktlab::owf::{
    heuristic_from_inverter, kt_lengths, make_failing_inverter, reduction_accounting, BruteForceInverter, OwfImage,
    OwfOutput, TimeSchedule,
};
use ktlab::prg::exact::{density_exact, entropy_exact};
use ktlab::prg::{find_regularity, regularity_check, CondEpPrg, PrgConfig, ToyOwf, TOY_OWF_NAMES};
use ktlab::stats::{rational, sd_entropy_lemma_check};
use ktlab::tinyvm::{expander_id, run};
use ktlab::{BitString, ExactDistribution, Rational};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = ktlab::Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn c1() -> Outcome {
    let mut worst = 0i64;
    for n in 0..=12 {
        for x in BitString::all(n) {
            let k = kt(&x, n as u64)?.length as i64;
            worst = worst.max(k - n as i64);
        }
    }
    Ok((worst <= 1, format!("max kt(x,|x|) - |x| = {worst} over |x| <= 12")))
}

fn c2() -> Outcome {
    let (n, t) = (10, 64);
    let mut ok = true;
    let mut counts = Vec::new();
    for k in 1..=7 {
        let count = count_low_complexity(n, t, n - k)?;
        ok &= count < 1 << (n - k);
        counts.push(count);
    }
    Ok((ok, format!("counts for k = 1..7 at n = 10: {counts:?}")))
}

fn c3() -> Outcome {
    let (gamma, t) = (8u32, 64);
    let g = eq2_census(expander_id(gamma, 0)?, 8, t, gamma as i32)?;
    let control = eq2_census_for(random_table_function(8, g.m, 3), 8, t, gamma as i32)?;
    let ok = g.holds && !g.vacuous && g.within_framing == g.seeds && !control.holds;
    Ok((
        ok,
        format!(
            "builtin: max kt {:?} < {} on {}/{} seeds; control: {}/{} below",
            g.max_kt, g.threshold, g.below_threshold, g.seeds, control.below_threshold, control.seeds
        ),
    ))
}

fn c4() -> Outcome {
    let (n, t) = (8, 32);
    let image = Arc::new(OwfImage::build(n, t)?);
    let kt = kt_lengths(n, t)?;
    let targets: Vec<OwfOutput> = BitString::all(n).zip(&kt).map(|(z, &w)| OwfOutput { ell: w, y: Some(z) }).collect();
    let mut inverters = vec![InverterSpec::Perfect.build(&image, &kt, 0)?, InverterSpec::DenyAll.build(&image, &kt, 0)?];
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if seed % 2 == 0 {
            // random over the whole image, at a seeded rate
            let p = [0.001, 0.01, 0.1, 0.5][(seed / 2 % 4) as usize];
            inverters.push(InverterSpec::DenyRandom(p).build(&image, &kt, seed)?);
        } else {
            // only outputs the heuristic asks about
            let k = rng.gen_range(1..=16);
            let deny: HashSet<OwfOutput> = targets.choose_multiple(&mut rng, k).cloned().collect();
            inverters.push(make_failing_inverter(BruteForceInverter::from_image(image.clone()), deny));
        }
    }
    let mut failures = 0;
    let mut tightest: Option<Rational> = None;
    for inv in &inverters {
        let r = reduction_accounting(inv, &image, &kt)?;
        failures += usize::from(!r.bound_holds);
        if let Some(s) = r.slack {
            tightest = Some(tightest.map_or(s.clone(), |m| m.min(s)));
        }
    }
    let slack = tightest.map_or("none".into(), |s| s.to_string());
    Ok((failures == 0, format!("{} inverters, {failures} violations, smallest slack {slack}", inverters.len())))
}

fn c5() -> Outcome {
    let (n, t) = (8, 32);
    let inv = BruteForceInverter::new(n, t)?;
    let kt = kt_lengths(n, t)?;
    let mut bad = 0;
    for (z, &k) in BitString::all(n).zip(&kt) {
        let (h, w) = heuristic_from_inverter(&inv, &z, t);
        let reproduces = w.is_some_and(|w| run(&w, t).output() == Some(&z));
        bad += usize::from(h != k || !reproduces);
    }
    Ok((bad == 0, format!("{bad} of 256 strings disagree")))
}

fn c6() -> Outcome {
    let mut ok = true;
    let mut seen = Vec::new();
    for j in 1..=3 {
        let p = pairwise_census(3, j)?.probability;
        ok &= p.as_ref() == Some(&rational(1, 1 << (2 * j)));
        seen.push(p.map_or("varies".into(), |p| p.to_string()));
    }
    Ok((ok, format!("collision probabilities {}", seen.join(", "))))
}

fn c7() -> Outcome {
    let mut worst = rational(0, 1);
    let mut ok = true;
    let all: Vec<BitString> = BitString::all(6).collect();
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let subset: Vec<BitString> = all.choose_multiple(&mut rng, 16).cloned().collect();
        let v = lhl_check(&ExactDistribution::uniform_over(6, subset)?, 4, 2)?;
        ok &= v.holds;
        worst = worst.max(v.measured_sd);
    }
    Ok((ok, format!("largest SD {worst} <= 1/2")))
}

/// Mass `≤ T/n²` taken from seeded donors and handed to a few recipients.
fn near_uniform(n: usize, seed: u64) -> ktlab::Result<ExactDistribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = (n * n * 64) as u128;
    let mut w = vec![base; 1 << n];
    let total = base << n;
    let frac = if seed.is_multiple_of(4) { 1.0 } else { rng.gen_range(0.05..1.0) };
    let mut budget = ((total as f64 * frac) as u128) / (n * n) as u128;
    let moved = budget;
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.shuffle(&mut rng);
    for &i in &order {
        let take = budget.min(w[i]);
        w[i] -= take;
        budget -= take;
        if budget == 0 {
            break;
        }
    }
    let recipients = rng.gen_range(1..=4usize);
    for r in 0..recipients {
        let share = moved / recipients as u128 + u128::from(r == 0) * (moved % recipients as u128);
        let at = rng.gen_range(0..w.len());
        w[at] += share;
    }
    ExactDistribution::from_weights(n, w.into_iter().enumerate().map(|(x, c)| (BitString::from_u64(x as u64, n), c)))
}

fn c8() -> Outcome {
    let mut ok = true;
    let mut margin = f64::INFINITY;
    for n in [4, 6, 8] {
        for seed in 0..100 {
            let v = sd_entropy_lemma_check(&near_uniform(n, seed * 31 + n as u64)?)?;
            ok &= v.premise && v.holds;
            margin = margin.min(v.entropy - (n as f64 - 2.0));
        }
    }
    Ok((ok, format!("300 distributions, smallest H - (n-2) = {margin:.4}")))
}

fn identity_prg() -> ktlab::Result<CondEpPrg> {
    CondEpPrg::build(ToyOwf::by_name("identity", 4)?, &PrgConfig::default())
}

fn c9() -> Outcome {
    let d = density_exact(&identity_prg()?)?;
    Ok((
        d.holds(),
        format!(
            "SD(REAL,U) = {}, SD(REAL,HYB1) = {}, SD(HYB1,HYB2) = {} against {:?}",
            d.sd_real_uniform, d.sd_real_hyb1, d.sd_hyb1_hyb2, d.bounds
        ),
    ))
}

fn c10() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=12 {
        for name in TOY_OWF_NAMES {
            let f = ToyOwf::by_name(name, n)?;
            checked += 1;
            if !regularity_check(&f, &find_regularity(&f)).holds() {
                bad.push(format!("{name}@{n}"));
            }
        }
    }
    Ok((bad.is_empty(), format!("{checked} functions, failing: {bad:?}")))
}

fn c11() -> Outcome {
    let e = entropy_exact(&identity_prg()?)?;
    Ok((
        e.holds(),
        format!("H = {:.6} >= {}, loss {:.6} <= {}", e.output_entropy, e.ell as i64 - 2, e.loss, e.loss_bound),
    ))
}

fn c12() -> Outcome {
    let (n, gamma, t) = (4, 8, 64);
    let p = DistinguisherParams::new(n, gamma, 0, 1)?;
    let census = KtCensus::build(t, p.m)?;
    let row = distinguisher_row(&p, &ExactKt(&census))?;
    let target = Rational::new(BigInt::from(1), BigInt::from(n * n));
    let ok = row.uniform_accepted && row.acceptance_prg == rational(0, 1) && row.advantage > target;
    Ok((
        ok,
        format!("Pr[D(U)] = {}, Pr[D(G)] = {}, advantage vs 1/16", row.acceptance_uniform, row.acceptance_prg),
    ))
}

fn normalized(mut r: ExperimentReport) -> String {
    r.runtime_ms = 0;
    r.to_json()
}

fn c13() -> Outcome {
    let dir = tempfile::tempdir()?;
    let mut same = true;
    let tables: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("kt{i}.csv"));
            cmd_kt_table(6, TimeSchedule::Fixed(40), &path)?;
            Ok(std::fs::read(path)?)
        })
        .collect::<ktlab::Result<_>>()?;
    same &= tables[0] == tables[1];
    let mut runs = 0;
    let mut twice = |f: &dyn Fn() -> ktlab::Result<ExperimentReport>| -> ktlab::Result<()> {
        same &= normalized(f()?) == normalized(f()?);
        runs += 1;
        Ok(())
    };
    for inv in ["perfect", "deny-random:0.2", "deny-z:00"] {
        let spec: InverterSpec = inv.parse()?;
        twice(&|| cmd_owf_experiment(8, &spec, TimeSchedule::Linear4n, 17))?;
    }
    for mode in [Mode::Exact, Mode::Sampled] {
        let args = PrgArgs {
            owf: "identity".into(),
            n: 4,
            alpha_prime: 0,
            gamma: 2,
            delta: 1,
            mode,
            seed: 5,
            samples: 500,
            gl_k: None,
        };
        twice(&|| cmd_prg_experiment(&args))?;
    }
    let args = DistinguishArgs {
        n: 4,
        gamma: 8,
        d: 1,
        heuristic: "perturbed-kt:0.1".parse()?,
        t: TimeSchedule::Fixed(64),
        seed: 9,
    };
    twice(&|| cmd_distinguish(&args))?;
    Ok((same, format!("kt table and {runs} reports compared byte for byte")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("kt(x,|x|) <= |x| + 1", c1),
        ("low-complexity counting", c2),
        ("builtin generator outputs compress", c3),
        ("inverter failure bound", c4),
        ("perfect inverter recovers kt", c5),
        ("pairwise independence", c6),
        ("leftover hash lemma", c7),
        ("near-uniform entropy", c8),
        ("density and hybrids", c9),
        ("regularity of toy functions", c10),
        ("entropy preservation", c11),
        ("distinguisher", c12),
        ("reproducible reports", c13),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        println!("{} criterion {}: {name}: {detail} ({secs:.1}s)", if ok { "PASS" } else { "FAIL" }, i + 1);
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
