// SPDX-License-Identifier: Apache-2.0

//! Exact and sampled measurements of the construction at toy scale.
//!
//! The seeds `σ1, σ2, σ_GL` appear verbatim in the output, so every statistic
//! of `G(U | E)` is an average over seeds of a statistic of the remaining
//! bits with only `x ∈ S_n` random. For the hardcore bits the seed is a
//! `k × n` matrix `M`, and the joint law of `(f_i(x), Mx)` depends on `M`
//! only through `ker M`; matrices are therefore grouped by kernel, with
//! `∏_{j < n − dim K} (2^k − 2^j)` matrices sharing kernel `K`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::ceil_log2;
use crate::error::{Error, Result};
use crate::hashing::{modulus, truncate_u32, HashSeed};
use crate::prg::{CondEpPrg, PrgParams};
use crate::stats::{hoeffding_epsilon, le_scaled_inverse_power, rational, rational_to_f64, Rational, ENTROPY_SLACK};

/// Largest `n` with enumerable subspace lattices.
pub const MAX_KERNEL_BITS: usize = 6;

/// Cap on `(seed pairs) × (kernel classes) × |S_n|` for exact mode.
pub const EXACT_WORK_LIMIT: u128 = 1 << 31;

/// A linear subspace of GF(2)^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub dim: usize,
    pub elements: Vec<u32>,
}

/// Every subspace of GF(2)^n, ordered by dimension then element set.
pub fn subspaces(n: usize) -> Result<Vec<Subspace>> {
    if n > MAX_KERNEL_BITS {
        return Err(Error::BudgetExceeded(format!("subspace lattice of GF(2)^{n}")));
    }
    let size = 1u32 << n;
    let elements_of = |mask: u64| -> Vec<u32> { (0..size).filter(|&e| mask >> e & 1 == 1).collect() };
    let mut seen: BTreeSet<u64> = BTreeSet::from([1]);
    let mut frontier = vec![1u64];
    while let Some(mask) = frontier.pop() {
        let elems = elements_of(mask);
        for v in (0..size).filter(|&v| mask >> v & 1 == 0) {
            let grown = elems.iter().fold(mask, |m, &e| m | 1 << (e ^ v));
            if seen.insert(grown) {
                frontier.push(grown);
            }
        }
    }
    let mut out: Vec<Subspace> = seen
        .into_iter()
        .map(|mask| Subspace { dim: mask.count_ones().trailing_zeros() as usize, elements: elements_of(mask) })
        .collect();
    out.sort_by(|a, b| (a.dim, &a.elements).cmp(&(b.dim, &b.elements)));
    Ok(out)
}

/// Number of `k × n` matrices over GF(2) whose kernel is one fixed subspace of dimension `dim`.
pub fn matrices_with_kernel(n: usize, k: usize, dim: usize) -> BigUint {
    let rank = n - dim;
    if rank > k {
        return BigUint::from(0u8);
    }
    (0..rank).fold(BigUint::one(), |acc, j| acc * ((BigUint::one() << k) - (BigUint::one() << j)))
}

#[derive(Clone, Debug)]
pub struct KernelClass {
    pub subspace: Subspace,
    pub count: BigUint,
    pub prob: f64,
    /// `rep[x]` is the smallest element of `x + K`.
    pub rep: Vec<u32>,
}

/// Kernel classes of uniform `k × n` matrices with nonzero mass.
pub fn kernel_classes(n: usize, k: usize) -> Result<Vec<KernelClass>> {
    let total = BigInt::from(BigUint::one() << (k * n));
    Ok(subspaces(n)?
        .into_iter()
        .filter_map(|s| {
            let count = matrices_with_kernel(n, k, s.dim);
            if count == BigUint::from(0u8) {
                return None;
            }
            let prob = rational_to_f64(&Rational::new(BigInt::from(count.clone()), total.clone()));
            let rep = (0..1u32 << n).map(|x| s.elements.iter().map(|&e| x ^ e).min().expect("0 ∈ K")).collect();
            Some(KernelClass { subspace: s, count, prob, rep })
        })
        .collect())
}

/// `f(x)` for each member, alongside the member itself.
struct Census {
    members: Vec<u32>,
    images: Vec<u32>,
}

impl Census {
    fn new(prg: &CondEpPrg) -> Self {
        let members = prg.profile.members.clone();
        let images = members.iter().map(|&x| prg.f.eval_u32(x)).collect();
        Self { members, images }
    }

    fn size(&self) -> u64 {
        self.members.len() as u64
    }

    /// `[h_{σ1}(x)]_{w1} ‖ [h_{σ2}(f(x))]_{w2}` as one integer per member.
    fn dense_bits(&self, p: &PrgParams, s1: &HashSeed, s2: &HashSeed) -> Vec<u32> {
        self.members
            .iter()
            .zip(&self.images)
            .map(|(&x, &fx)| {
                let y1 = truncate_u32(s1.apply_u32(x), p.n, p.w1);
                let y2 = truncate_u32(s2.apply_u32(fx), p.n, p.w2);
                (y1 << p.w2) | y2
            })
            .collect()
    }

    fn hashed_images(&self, p: &PrgParams, s2: &HashSeed) -> Vec<u32> {
        self.images.iter().map(|&fx| truncate_u32(s2.apply_u32(fx), p.n, p.w2)).collect()
    }
}

fn seeds(n: usize) -> Vec<HashSeed> {
    HashSeed::all(n).expect("modulus checked").collect()
}

fn histogram(values: &[u32], bits: usize) -> Vec<u64> {
    let mut h = vec![0u64; 1 << bits];
    for &v in values {
        h[v as usize] += 1;
    }
    h
}

/// `Σ_v |h[v]·scale − reference(v)|`.
fn l1_gap(h: &[u64], scale: u64, reference: impl Fn(usize) -> u64) -> u128 {
    h.iter().enumerate().map(|(v, &c)| u128::from((c * scale).abs_diff(reference(v)))).sum()
}

/// The density claim and the two hybrid gaps, with exact distances.
#[derive(Clone, Debug)]
pub struct DensityReport {
    /// `SD(REAL, U)`.
    pub sd_real_uniform: Rational,
    /// `SD(REAL, HYB_1)`.
    pub sd_real_hyb1: Rational,
    /// `SD(HYB_1, HYB_2)`; `HYB_2` is uniform.
    pub sd_hyb1_hyb2: Rational,
    /// `3/n^{α′/2}`, `2/n^{α′/2}` and `1/n^{α′/2}` for display.
    pub bounds: [f64; 3],
    pub real_uniform_holds: bool,
    pub real_hyb1_holds: bool,
    pub hyb1_hyb2_holds: bool,
}

impl DensityReport {
    pub fn holds(&self) -> bool {
        self.real_uniform_holds && self.real_hyb1_holds && self.hyb1_hyb2_holds
    }
}

fn check_feasible(p: &PrgParams, members: usize, classes: usize) -> Result<()> {
    let work = (1u128 << (4 * p.n)) * classes as u128 * members as u128;
    if work > EXACT_WORK_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "exact census needs {work} steps at n = {} (limit {EXACT_WORK_LIMIT}); use sampled mode",
            p.n
        )));
    }
    modulus(p.n).map(|_| ())
}

fn density_bounds(p: &PrgParams) -> [f64; 3] {
    let s = (p.n as f64).powf(-(p.alpha_prime as f64) / 2.0);
    [3.0 * s, 2.0 * s, s]
}

fn density_verdicts(p: &PrgParams, sds: [&Rational; 3]) -> [bool; 3] {
    let coeffs = [3, 2, 1];
    std::array::from_fn(|j| le_scaled_inverse_power(sds[j], &rational(coeffs[j], 1), p.n as u64, p.alpha_prime, 2))
}

pub fn density_exact(prg: &CondEpPrg) -> Result<DensityReport> {
    let p = &prg.params;
    let census = Census::new(prg);
    check_feasible(p, census.members.len(), 1)?;
    let s = census.size();
    let (w, w1, w2) = (p.w1 + p.w2, p.w1, p.w2);
    let all = seeds(p.n);
    let per_s1: Vec<(u128, u128)> = all
        .par_iter()
        .map(|s1| {
            let mut real = 0u128;
            let mut hyb = 0u128;
            for s2 in &all {
                let joint = histogram(&census.dense_bits(p, s1, s2), w);
                let second = histogram(&census.hashed_images(p, s2), w2);
                real += l1_gap(&joint, 1 << w, |_| s);
                hyb += l1_gap(&joint, 1 << w1, |v| second[v & ((1 << w2) - 1)]);
            }
            (real, hyb)
        })
        .collect();
    let (real, hyb): (u128, u128) = per_s1.iter().fold((0, 0), |(a, b), &(x, y)| (a + x, b + y));
    let hyb2: u128 =
        all.iter().map(|s2| l1_gap(&histogram(&census.hashed_images(p, s2), w2), 1 << w2, |_| s)).sum();
    let pairs = BigInt::from(all.len()).pow(2);
    let den = |width: usize, seeds: &BigInt| seeds * BigInt::from(2 * s) * (BigInt::one() << width);
    let sd_real_uniform = Rational::new(BigInt::from(real), den(w, &pairs));
    let sd_real_hyb1 = Rational::new(BigInt::from(hyb), den(w1, &pairs));
    let sd_hyb1_hyb2 = Rational::new(BigInt::from(hyb2), den(w2, &BigInt::from(all.len())));
    let [a, b, c] = density_verdicts(p, [&sd_real_uniform, &sd_real_hyb1, &sd_hyb1_hyb2]);
    Ok(DensityReport {
        sd_real_uniform,
        sd_real_hyb1,
        sd_hyb1_hyb2,
        bounds: density_bounds(p),
        real_uniform_holds: a,
        real_hyb1_holds: b,
        hyb1_hyb2_holds: c,
    })
}

/// Entropy preservation of `G(U_{n′} | E_{n′})`.
#[derive(Clone, Debug)]
pub struct EntropyReport {
    /// `H(U_{n′} | E_{n′})`.
    pub input_entropy: f64,
    pub output_entropy: f64,
    pub ell: usize,
    /// `H ≥ ℓ − 2`.
    pub entropy_holds: bool,
    /// `n′ − H(G(U_{n′} | E_{n′}))`.
    pub loss: f64,
    /// `(2α′ + 4)⌈log n′⌉`.
    pub loss_bound: usize,
    pub loss_holds: bool,
    /// `SD(f′_r ‖ GL, f′_r ‖ U_k)` under the event, in floating point.
    pub gl_sd: f64,
    pub kernel_classes: usize,
}

impl EntropyReport {
    pub fn holds(&self) -> bool {
        self.entropy_holds && self.loss_holds
    }
}

fn xlogx_table(max: usize) -> Vec<f64> {
    (0..=max).map(|c| if c == 0 { 0.0 } else { c as f64 * (c as f64).log2() }).collect()
}

/// Entropy of `(y, class(x))` over uniform members and the GL distance for
/// one kernel; `keys` holds `(y, class)` pairs packed as `y << n | class`.
fn kernel_stats(keys: &mut [u64], n: usize, k: usize, xlogx: &[f64]) -> (f64, f64) {
    keys.sort_unstable();
    let s = keys.len() as f64;
    let mut entropy_acc = 0.0;
    let mut gl_acc = 0.0;
    let unit = (-(k as f64)).exp2();
    let mut i = 0;
    while i < keys.len() {
        // one y-group: runs of equal keys are cosets
        let y = keys[i] >> n;
        let mut j = i;
        let mut runs: Vec<usize> = Vec::new();
        while j < keys.len() && keys[j] >> n == y {
            let mut e = j;
            while e < keys.len() && keys[e] == keys[j] {
                e += 1;
            }
            runs.push(e - j);
            j = e;
        }
        let t = (j - i) as f64;
        let hit: f64 = runs.iter().map(|&c| (c as f64 / t - unit).abs()).sum();
        let missed = (k as f64).exp2() - runs.len() as f64;
        gl_acc += t / s * 0.5 * (hit + missed * unit);
        entropy_acc += runs.iter().map(|&c| xlogx[c]).sum::<f64>();
        i = j;
    }
    (s.log2() - entropy_acc / s, gl_acc)
}

pub fn entropy_exact(prg: &CondEpPrg) -> Result<EntropyReport> {
    let p = &prg.params;
    let census = Census::new(prg);
    let classes = kernel_classes(p.n, p.gl_k)?;
    check_feasible(p, census.members.len(), classes.len())?;
    let xlogx = xlogx_table(census.members.len());
    let all = seeds(p.n);
    let per_s1: Vec<(f64, f64)> = all
        .par_iter()
        .map(|s1| {
            let mut keys = vec![0u64; census.members.len()];
            let (mut h, mut g) = (0.0, 0.0);
            for s2 in &all {
                let ys = census.dense_bits(p, s1, s2);
                for class in &classes {
                    for (slot, (&y, &x)) in keys.iter_mut().zip(ys.iter().zip(&census.members)) {
                        *slot = (u64::from(y) << p.n) | u64::from(class.rep[x as usize]);
                    }
                    let (hk, gk) = kernel_stats(&mut keys, p.n, p.gl_k, &xlogx);
                    h += class.prob * hk;
                    g += class.prob * gk;
                }
            }
            (h, g)
        })
        .collect();
    let pairs = (all.len() * all.len()) as f64;
    let inner_h = per_s1.iter().map(|v| v.0).sum::<f64>() / pairs;
    let gl_sd = per_s1.iter().map(|v| v.1).sum::<f64>() / pairs;
    Ok(entropy_report(p, census.members.len(), inner_h, gl_sd, classes.len()))
}

fn entropy_report(p: &PrgParams, members: usize, inner_h: f64, gl_sd: f64, kernel_classes: usize) -> EntropyReport {
    let seed_bits = (2 * p.hash_seed_bits + p.gl_seed_bits) as f64;
    let output_entropy = seed_bits + inner_h;
    let loss = p.n_prime as f64 - output_entropy;
    let loss_bound = (2 * p.alpha_prime as usize + 4) * ceil_log2(p.n_prime as u64) as usize;
    EntropyReport {
        input_entropy: seed_bits + (members as f64).log2(),
        output_entropy,
        ell: p.ell,
        entropy_holds: output_entropy >= p.ell as f64 - 2.0 - ENTROPY_SLACK,
        loss,
        loss_bound,
        loss_holds: loss <= loss_bound as f64 + ENTROPY_SLACK,
        gl_sd,
        kernel_classes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub ell_prime: usize,
    pub n_prime: usize,
    pub expansion: i64,
    /// `γ⌈log n′⌉`.
    pub required: usize,
    pub holds: bool,
}

pub fn expansion_check(p: &PrgParams) -> ExpansionReport {
    let required = p.gamma as usize * ceil_log2(p.n_prime as u64) as usize;
    ExpansionReport {
        ell_prime: p.ell_prime,
        n_prime: p.n_prime,
        expansion: p.expansion(),
        required,
        holds: p.expansion() >= required as i64,
    }
}

/// `Pr[E]` over uniform bundles: `Pr[i = r] · |S_n| / 2^n`.
pub fn event_mass(prg: &CondEpPrg) -> Rational {
    &prg.profile.weight / Rational::from_integer(BigInt::one() << prg.params.log_n)
}

/// Monte Carlo estimates over the seeds, with exact enumeration of `x`.
#[derive(Clone, Debug)]
pub struct SampledReport {
    pub seed: u64,
    pub count: u64,
    /// Two-sided 99% Hoeffding radius for quantities in `[0, 1]`.
    pub epsilon: f64,
    pub sd_real_uniform: f64,
    pub sd_real_hyb1: f64,
    pub sd_hyb1_hyb2: f64,
    pub output_entropy: f64,
    /// Hoeffding radius for the entropy, scaled by `log |S_n|`.
    pub entropy_epsilon: f64,
    pub loss: f64,
    pub loss_bound: usize,
}

fn random_seed(rng: &mut ChaCha8Rng, n: usize) -> HashSeed {
    HashSeed::new(rng.gen_range(0..1u32 << n), rng.gen_range(0..1u32 << n), n).expect("in range")
}

pub fn sampled(prg: &CondEpPrg, seed: u64, count: u64) -> Result<SampledReport> {
    let p = &prg.params;
    if count == 0 {
        return Err(Error::InvalidParams("sample count must be at least 1".into()));
    }
    if p.gl_k > 64 {
        return Err(Error::BudgetExceeded(format!("{} GL bits do not fit a packed key", p.gl_k)));
    }
    modulus(p.n)?;
    let census = Census::new(prg);
    let s = census.size() as f64;
    let xlogx = xlogx_table(census.members.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(HashSeed, HashSeed, Vec<u64>)> = (0..count)
        .map(|_| {
            let s1 = random_seed(&mut rng, p.n);
            let s2 = random_seed(&mut rng, p.n);
            let rows = (0..p.gl_k).map(|_| rng.gen_range(0..1u64 << p.n)).collect();
            (s1, s2, rows)
        })
        .collect();
    let per_draw: Vec<[f64; 4]> = draws
        .par_iter()
        .map(|(s1, s2, rows)| {
            let ys = census.dense_bits(p, s1, s2);
            let (w, w1, w2) = (p.w1 + p.w2, p.w1, p.w2);
            let joint = histogram(&ys, w);
            let second = histogram(&census.hashed_images(p, s2), w2);
            let sd = |gap: u128, width: usize| gap as f64 / (2.0 * s * (width as f64).exp2());
            let real = sd(l1_gap(&joint, 1 << w, |_| s as u64), w);
            let hyb = sd(l1_gap(&joint, 1 << w1, |v| second[v & ((1 << w2) - 1)]), w1);
            let hyb2 = sd(l1_gap(&second, 1 << w2, |_| s as u64), w2);
            // Mx itself labels the coset of x
            let mut keys: Vec<u128> = ys
                .iter()
                .zip(&census.members)
                .map(|(&y, &x)| {
                    let mx = rows.iter().fold(0u64, |acc, &row| acc << 1 | u64::from((row & u64::from(x)).count_ones() & 1));
                    (u128::from(y) << 64) | u128::from(mx)
                })
                .collect();
            keys.sort_unstable();
            let mut h = 0.0;
            let mut i = 0;
            while i < keys.len() {
                let e = keys[i..].iter().take_while(|&&k| k == keys[i]).count();
                h += xlogx[e];
                i += e;
            }
            [real, hyb, hyb2, s.log2() - h / s]
        })
        .collect();
    let mean = |j: usize| per_draw.iter().map(|v| v[j]).sum::<f64>() / count as f64;
    let epsilon = hoeffding_epsilon(count);
    let report = entropy_report(p, census.members.len(), mean(3), f64::NAN, 0);
    Ok(SampledReport {
        seed,
        count,
        epsilon,
        sd_real_uniform: mean(0),
        sd_real_hyb1: mean(1),
        sd_hyb1_hyb2: mean(2),
        output_entropy: report.output_entropy,
        entropy_epsilon: epsilon * s.log2(),
        loss: report.loss,
        loss_bound: report.loss_bound,
    })
}

/// Density verdicts that sampling cannot reject at 99% confidence.
pub fn sampled_density_verdicts(p: &PrgParams, r: &SampledReport) -> [bool; 3] {
    let b = density_bounds(p);
    [
        r.sd_real_uniform - r.epsilon <= b[0],
        r.sd_real_hyb1 - r.epsilon <= b[1],
        r.sd_hyb1_hyb2 - r.epsilon <= b[2],
    ]
}


/// Entropy verdicts (`H ≥ ℓ − 2`, loss within bound) that sampling cannot reject.
pub fn sampled_entropy_verdicts(p: &PrgParams, r: &SampledReport) -> [bool; 2] {
    [
        r.output_entropy + r.entropy_epsilon >= p.ell as f64 - 2.0 - ENTROPY_SLACK,
        r.loss - r.entropy_epsilon <= r.loss_bound as f64 + ENTROPY_SLACK,
    ]
}
