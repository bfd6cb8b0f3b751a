// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::bits::{ceil_log2, BitString};
use crate::error::{Error, Result};
use crate::hardcore::{gl, GlSeed};
use crate::hashing::{hash, truncate, HashSeed};
use crate::prg::{RegularityProfile, ToyOwf};

/// User-facing knobs; everything else in [`PrgParams`] is derived.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrgConfig {
    pub gamma: u32,
    pub alpha_prime: u32,
    /// The exponent `c` with hash seeds of at most `n^c` bits.
    pub c_hash: u32,
    /// Defaults to `n − ⌈log n⌉`.
    pub s_n: Option<usize>,
    /// Replaces `γ′⌈log n⌉` GL bits; only for enumeration at test scale.
    pub gl_k: Option<usize>,
}

impl Default for PrgConfig {
    fn default() -> Self {
        Self { gamma: 2, alpha_prime: 0, c_hash: 2, s_n: None, gl_k: None }
    }
}

/// Every length in the construction, resolved for one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrgParams {
    pub n: usize,
    pub log_n: usize,
    pub c_hash: u32,
    pub gamma: u32,
    pub alpha_prime: u32,
    /// `(c+1)γ + 2α′ + 3`.
    pub gamma_prime: u32,
    pub r: usize,
    pub s_n: usize,
    /// `r − α′⌈log n⌉` and `s_n − r − α′⌈log n⌉`.
    pub w1: usize,
    pub w2: usize,
    pub hash_seed_bits: usize,
    pub gl_k: usize,
    pub gl_seed_bits: usize,
    /// Length of `f′_r`: `s_n + 2·hash_seed_bits + gl_seed_bits − 2α′⌈log n⌉`.
    pub ell: usize,
    /// `ℓ + gl_k`.
    pub ell_prime: usize,
    /// Length of a seed bundle: `⌈log n⌉ + n + 2·hash_seed_bits + gl_seed_bits`.
    pub n_prime: usize,
}

impl PrgParams {
    pub fn derive(profile: &RegularityProfile, cfg: &PrgConfig) -> Result<Self> {
        let n = profile.n;
        if n < 2 {
            return Err(Error::InvalidParams("the construction needs n >= 2".into()));
        }
        let log_n = ceil_log2(n as u64) as usize;
        let r = profile.r;
        if r >= 1 << log_n {
            return Err(Error::InvalidParams(format!("regularity r = {r} does not fit the {log_n}-bit i field")));
        }
        let s_n = cfg.s_n.unwrap_or(n - log_n);
        if s_n > profile.log_size_floor() {
            return Err(Error::InvalidParams(format!(
                "s_n = {s_n} exceeds log|S_n| (|S_n| = {})",
                profile.members.len()
            )));
        }
        let slack = cfg.alpha_prime as usize * log_n;
        let w1 = r.checked_sub(slack);
        let w2 = s_n.checked_sub(r + slack);
        let (Some(w1), Some(w2)) = (w1, w2) else {
            return Err(Error::InvalidParams(format!(
                "negative truncation width: r = {r}, s_n = {s_n}, alpha' * ceil(log n) = {slack}"
            )));
        };
        let gamma_prime = (cfg.c_hash + 1) * cfg.gamma + 2 * cfg.alpha_prime + 3;
        let gl_k = cfg.gl_k.unwrap_or(gamma_prime as usize * log_n);
        let hash_seed_bits = 2 * n;
        let gl_seed_bits = gl_k * n;
        let ell = s_n + 2 * hash_seed_bits + gl_seed_bits - 2 * slack;
        Ok(Self {
            n,
            log_n,
            c_hash: cfg.c_hash,
            gamma: cfg.gamma,
            alpha_prime: cfg.alpha_prime,
            gamma_prime,
            r,
            s_n,
            w1,
            w2,
            hash_seed_bits,
            gl_k,
            gl_seed_bits,
            ell,
            ell_prime: ell + gl_k,
            n_prime: log_n + n + 2 * hash_seed_bits + gl_seed_bits,
        })
    }

    /// Truncation widths used for an arbitrary `i`; equals `(w1, w2)` at `i = r`.
    pub fn widths_for(&self, i: usize) -> (usize, usize) {
        let total = self.w1 + self.w2;
        let a = i.saturating_sub(self.alpha_prime as usize * self.log_n).min(total);
        (a, total - a)
    }

    /// `ℓ′ − n′`, which may be negative for small parameters.
    pub fn expansion(&self) -> i64 {
        self.ell_prime as i64 - self.n_prime as i64
    }
}

/// `(i, x, σ1, σ2, σ_GL)`, serialized in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedBundle {
    pub i: usize,
    pub x: BitString,
    pub sigma1: HashSeed,
    pub sigma2: HashSeed,
    pub sigma_gl: GlSeed,
}

impl SeedBundle {
    pub fn from_bits(params: &PrgParams, bits: &BitString) -> Result<Self> {
        if bits.len() != params.n_prime {
            return Err(Error::LengthMismatch { expected: params.n_prime, actual: bits.len() });
        }
        let (n, h) = (params.n, params.hash_seed_bits);
        let mut at = 0;
        let mut take = |len: usize| {
            let part = bits.slice(at, at + len);
            at += len;
            part
        };
        let i = take(params.log_n).to_u64() as usize;
        let x = take(n);
        let sigma1 = HashSeed::from_bits(&take(h))?;
        let sigma2 = HashSeed::from_bits(&take(h))?;
        let sigma_gl = GlSeed::from_bits(&take(params.gl_seed_bits), params.gl_k, n)?;
        Ok(Self { i, x, sigma1, sigma2, sigma_gl })
    }

    pub fn to_bits(&self, params: &PrgParams) -> BitString {
        let mut out = BitString::from_u64(self.i as u64, params.log_n);
        out.extend_from(&self.x);
        out.extend_from(&self.sigma1.to_bits());
        out.extend_from(&self.sigma2.to_bits());
        out.extend_from(&self.sigma_gl.to_bits());
        out
    }
}

/// `E = {bundles : i = r, x ∈ S_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSpec {
    pub required_i: usize,
    pub required_set: Vec<u32>,
}

impl EventSpec {
    pub fn from_profile(profile: &RegularityProfile) -> Self {
        Self { required_i: profile.r, required_set: profile.members.clone() }
    }
}

pub fn event_member(bundle: &SeedBundle, event: &EventSpec) -> bool {
    bundle.i == event.required_i && event.required_set.binary_search(&(bundle.x.to_u64() as u32)).is_ok()
}

/// Target constants of a condEP-PRG.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CondEpPrgSpec {
    pub gamma: u32,
    pub delta: u32,
    /// Entropy-loss constant, `2α′ + 4`.
    pub alpha: u32,
    /// `1/n′^δ`.
    pub mu: f64,
}

impl CondEpPrgSpec {
    pub fn for_params(params: &PrgParams, delta: u32) -> Self {
        Self {
            gamma: params.gamma,
            delta,
            alpha: 2 * params.alpha_prime + 4,
            mu: (params.n_prime as f64).powi(-(delta as i32)),
        }
    }
}

fn f_i(f: &ToyOwf, params: &PrgParams, i: usize, x: &BitString, s1: &HashSeed, s2: &HashSeed) -> Result<BitString> {
    let (a, b) = params.widths_for(i);
    let mut out = s1.to_bits();
    out.extend_from(&s2.to_bits());
    out.extend_from(&truncate(&hash(s1, x)?, a)?);
    out.extend_from(&truncate(&hash(s2, &f.eval(x)?)?, b)?);
    Ok(out)
}

/// `σ1 ‖ σ2 ‖ [h_{σ1}(x)]_{w1} ‖ [h_{σ2}(f(x))]_{w2}` at `i = r`.
pub fn dense_f(
    f: &ToyOwf,
    profile: &RegularityProfile,
    params: &PrgParams,
    x: &BitString,
    sigma1: &HashSeed,
    sigma2: &HashSeed,
) -> Result<BitString> {
    if profile.r != params.r {
        return Err(Error::InvalidParams("profile and params disagree on r".into()));
    }
    f_i(f, params, params.r, x, sigma1, sigma2)
}

/// `σ_GL ‖ f_i(x, σ1, σ2) ‖ GL(x, σ_GL)` with `i` taken from the bundle.
pub fn cond_ep_prg(f: &ToyOwf, params: &PrgParams, bundle: &SeedBundle) -> Result<BitString> {
    if bundle.x.len() != params.n || bundle.sigma_gl.k() != params.gl_k {
        return Err(Error::InvalidParams("bundle does not match the parameters".into()));
    }
    let mut out = bundle.sigma_gl.to_bits();
    out.extend_from(&f_i(f, params, bundle.i, &bundle.x, &bundle.sigma1, &bundle.sigma2)?);
    out.extend_from(&gl(&bundle.x, &bundle.sigma_gl)?);
    Ok(out)
}

/// A function, its profile and resolved parameters, bundled for evaluation.
#[derive(Clone, Debug)]
pub struct CondEpPrg {
    pub f: ToyOwf,
    pub profile: RegularityProfile,
    pub params: PrgParams,
}

impl CondEpPrg {
    pub fn new(f: ToyOwf, profile: RegularityProfile, cfg: &PrgConfig) -> Result<Self> {
        let params = PrgParams::derive(&profile, cfg)?;
        Ok(Self { f, profile, params })
    }

    /// Profiles `f` and derives parameters in one go.
    pub fn build(f: ToyOwf, cfg: &PrgConfig) -> Result<Self> {
        let profile = crate::prg::find_regularity(&f);
        Self::new(f, profile, cfg)
    }

    pub fn event(&self) -> EventSpec {
        EventSpec::from_profile(&self.profile)
    }

    pub fn eval_bundle(&self, bundle: &SeedBundle) -> Result<BitString> {
        cond_ep_prg(&self.f, &self.params, bundle)
    }

    pub fn eval(&self, bits: &BitString) -> Result<BitString> {
        self.eval_bundle(&SeedBundle::from_bits(&self.params, bits)?)
    }
}
