// SPDX-License-Identifier: Apache-2.0

//! Experiment drivers behind the `ktlab` binary.
//!
//! Each `cmd_*` function resolves its inputs, runs the module-level censuses
//! and packs the results into an [`ExperimentReport`]. Verdicts are copied
//! from module results; nothing is decided here.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bits::BitString;
use crate::distinguisher::{
    distinguisher_row, eq1_census, eq2_census, DistinguisherParams, HeuristicSpec, MAX_UNIFORM_BITS,
};
use crate::error::{Error, Result};
use crate::kolmogorov::{write_kt_table, KtCensus, DEFAULT_BUDGET_BITS};
use crate::owf::{
    heuristic_from_inverter, kt_lengths, make_failing_inverter, output_mass_check, reduction_accounting,
    BruteForceInverter, FailingInverter, OwfImage, OwfOutput, TimeSchedule,
};
use crate::prg::exact::{
    density_exact, entropy_exact, event_mass, expansion_check, sampled, sampled_density_verdicts,
    sampled_entropy_verdicts,
};
use crate::prg::{find_regularity, regularity_check, CondEpPrg, CondEpPrgSpec, PrgConfig, ToyOwf};
use crate::stats::Rational;
use crate::tinyvm::{expander_id, run, MACHINE_VERSION};

pub const SCHEMA_VERSION: u32 = 1;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FALSE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// An exact rational as it appears in report JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactValue {
    pub num: serde_json::Number,
    pub den: serde_json::Number,
}

impl From<&Rational> for ExactValue {
    fn from(r: &Rational) -> Self {
        let big = |v: &num_bigint::BigInt| serde_json::Number::from_str(&v.to_string()).expect("integer literal");
        Self { num: big(r.numer()), den: big(r.denom()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Measurement {
    Exact(ExactValue),
    Int(i64),
    Float(f64),
}

impl Measurement {
    pub fn exact(r: &Rational) -> Self {
        Measurement::Exact(r.into())
    }
}

/// One point of plot data; written as `x,y,series`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    pub series: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment_id: String,
    pub machine_version: String,
    pub parameters: Value,
    pub rng_seed: u64,
    pub measurements: BTreeMap<String, Measurement>,
    pub verdicts: BTreeMap<String, bool>,
    pub runtime_ms: u64,
    #[serde(skip)]
    pub plot: Vec<PlotPoint>,
}

impl ExperimentReport {
    fn new(experiment_id: &str, parameters: Value, rng_seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment_id: experiment_id.into(),
            machine_version: MACHINE_VERSION.into(),
            parameters,
            rng_seed,
            measurements: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            runtime_ms: 0,
            plot: Vec::new(),
        }
    }

    fn exact(&mut self, name: &str, r: &Rational) {
        self.measurements.insert(name.into(), Measurement::exact(r));
    }

    fn float(&mut self, name: &str, v: f64) {
        self.measurements.insert(name.into(), Measurement::Float(v));
    }

    fn int(&mut self, name: &str, v: i64) {
        self.measurements.insert(name.into(), Measurement::Int(v));
    }

    fn verdict(&mut self, name: &str, v: bool) {
        self.verdicts.insert(name.into(), v);
    }

    fn point(&mut self, x: f64, y: f64, series: &str) {
        self.plot.push(PlotPoint { x, y, series: series.into() });
    }

    pub fn all_verdicts_hold(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_verdicts_hold() {
            EXIT_OK
        } else {
            EXIT_VERDICT_FALSE
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_plot<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y,series")?;
        for p in &self.plot {
            writeln!(w, "{},{},{}", p.x, p.y, p.series)?;
        }
        Ok(())
    }
}

fn finish(mut report: ExperimentReport, start: Instant) -> ExperimentReport {
    report.runtime_ms = start.elapsed().as_millis() as u64;
    report
}

/// Writes the kt table for all `2^n` strings to `out`.
pub fn cmd_kt_table(n: usize, t: TimeSchedule, out: &Path) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("kt table needs n >= 1".into()));
    }
    let mut w = BufWriter::new(File::create(out)?);
    write_kt_table(n, t.t(n), DEFAULT_BUDGET_BITS, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Inverter test doubles, all built from the brute-force inverter.
#[derive(Clone, Debug, PartialEq)]
pub enum InverterSpec {
    Perfect,
    DenyAll,
    /// Each image point denied independently with this probability.
    DenyRandom(f64),
    /// Denies `(K^t(z) ‖ z)` for one `z`, given in hex.
    DenyZ(String),
}

impl FromStr for InverterSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("inverter {s:?} (expected perfect, deny-all, deny-random[:p] or deny-z:<hex>)"));
        match s.split_once(':') {
            None if s == "perfect" => Ok(InverterSpec::Perfect),
            None if s == "deny-all" => Ok(InverterSpec::DenyAll),
            None if s == "deny-random" => Ok(InverterSpec::DenyRandom(0.25)),
            Some(("deny-random", p)) => match p.parse::<f64>() {
                Ok(p) if (0.0..=1.0).contains(&p) => Ok(InverterSpec::DenyRandom(p)),
                _ => Err(bad()),
            },
            Some(("deny-z", hex)) if !hex.is_empty() => Ok(InverterSpec::DenyZ(hex.into())),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for InverterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InverterSpec::Perfect => write!(f, "perfect"),
            InverterSpec::DenyAll => write!(f, "deny-all"),
            InverterSpec::DenyRandom(p) => write!(f, "deny-random:{p}"),
            InverterSpec::DenyZ(hex) => write!(f, "deny-z:{hex}"),
        }
    }
}

impl InverterSpec {
    pub fn build(
        &self,
        image: &Arc<OwfImage>,
        kt: &[usize],
        seed: u64,
    ) -> Result<FailingInverter<BruteForceInverter>> {
        let mut outputs: Vec<&OwfOutput> = image.outputs().map(|(y, _)| y).collect();
        outputs.sort();
        let deny: HashSet<OwfOutput> = match self {
            InverterSpec::Perfect => HashSet::new(),
            InverterSpec::DenyAll => outputs.into_iter().cloned().collect(),
            InverterSpec::DenyRandom(p) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                outputs.into_iter().filter(|_| rng.gen_bool(*p)).cloned().collect()
            }
            InverterSpec::DenyZ(hex) => {
                let z = BitString::from_hex(hex, image.n)?;
                let w = kt[z.to_u64() as usize];
                HashSet::from([OwfOutput { ell: w, y: Some(z) }])
            }
        };
        Ok(make_failing_inverter(BruteForceInverter::from_image(image.clone()), deny))
    }
}

/// The inverter-to-heuristic reduction, with both sides counted exactly.
pub fn cmd_owf_experiment(n: usize, inverter: &InverterSpec, schedule: TimeSchedule, seed: u64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let t = schedule.t(n);
    let image = Arc::new(OwfImage::build(n, t)?);
    let kt = kt_lengths(n, t)?;
    let inv = inverter.build(&image, &kt, seed)?;
    let acc = reduction_accounting(&inv, &image, &kt)?;
    let mass = output_mass_check(&image, &kt);
    let parameters = json!({
        "n": n,
        "t": schedule.label(),
        "t_steps": t,
        "inverter": inverter.to_string(),
        "c": acc.c,
        "input_bits": image.input_len(),
    });
    let mut report = ExperimentReport::new("owf-reduction", parameters, seed);
    report.exact("fail_r", &acc.fail_r);
    report.exact("inverter_fail", &acc.inverter_fail);
    report.exact("required_fail", &acc.required_fail);
    if let Some(p) = &acc.p_target {
        report.exact("p_target", p);
    }
    if let Some(q) = &acc.q_target {
        report.exact("q_target", q);
    }
    if let Some(s) = &acc.slack {
        report.exact("slack", s);
    }
    report.int("image_size", image.image_size() as i64);
    report.int("mass_bound_uniform_length", i64::from(mass.holds_uniform_length));
    report.verdict("bound_holds", acc.bound_holds);
    report.verdict("output_mass_field_width", mass.holds_field_width);
    report.verdict("output_mass_counting", mass.holds_counting);
    for (z, &k) in BitString::all(n).zip(&kt) {
        let x = z.to_u64() as f64;
        report.point(x, k as f64, "kt");
        report.point(x, heuristic_from_inverter(&inv, &z, t).0 as f64, "heuristic");
    }
    if *inverter == InverterSpec::Perfect {
        // the constructive variant: every returned witness prints z
        let witnesses_ok = BitString::all(n).zip(&kt).all(|(z, &k)| match heuristic_from_inverter(&inv, &z, t) {
            (h, Some(p)) => h == k && run(&p, t).output() == Some(&z),
            (_, None) => false,
        });
        report.verdict("perfect_inverter_witnesses", witnesses_ok);
    }
    Ok(finish(report, start))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Sampled,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "sampled" => Ok(Mode::Sampled),
            _ => Err(Error::Parse(format!("mode {s:?} (expected exact or sampled)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrgArgs {
    pub owf: String,
    pub n: usize,
    pub alpha_prime: u32,
    pub gamma: u32,
    pub delta: u32,
    pub mode: Mode,
    pub seed: u64,
    pub samples: u64,
    pub gl_k: Option<usize>,
}

/// Density, entropy and expansion of the conditional generator on a toy function.
pub fn cmd_prg_experiment(args: &PrgArgs) -> Result<ExperimentReport> {
    let start = Instant::now();
    let f = ToyOwf::by_name(&args.owf, args.n)?;
    let cfg = PrgConfig { gamma: args.gamma, alpha_prime: args.alpha_prime, gl_k: args.gl_k, ..PrgConfig::default() };
    let profile = find_regularity(&f);
    let regularity = regularity_check(&f, &profile);
    let prg = CondEpPrg::new(f, profile, &cfg)?;
    let p = &prg.params;
    let spec = CondEpPrgSpec::for_params(p, args.delta);
    let parameters = json!({
        "owf": args.owf,
        "n": args.n,
        "gamma": args.gamma,
        "alpha_prime": args.alpha_prime,
        "delta": args.delta,
        "mode": args.mode.to_string(),
        "samples": (args.mode == Mode::Sampled).then_some(args.samples),
        "derived": p,
        "spec": spec,
    });
    let mut report = ExperimentReport::new("prg", parameters, args.seed);
    report.exact("event_mass", &event_mass(&prg));
    report.exact("regularity_weight", &prg.profile.weight);
    report.int("regularity_r", p.r as i64);
    report.int("support_size", prg.profile.members.len() as i64);
    report.verdict("regularity_weight", regularity.weight_holds);
    report.verdict("regularity_preimages", regularity.preimage_holds);
    let expansion = expansion_check(p);
    report.int("expansion", expansion.expansion);
    report.int("expansion_required", expansion.required as i64);
    report.verdict("expansion", expansion.holds);
    let bounds = density_bound_values(p.n, p.alpha_prime);
    let sds: [f64; 3] = match args.mode {
        Mode::Exact => {
            let d = density_exact(&prg)?;
            let e = entropy_exact(&prg)?;
            report.exact("sd_real_uniform", &d.sd_real_uniform);
            report.exact("sd_real_hyb1", &d.sd_real_hyb1);
            report.exact("sd_hyb1_hyb2", &d.sd_hyb1_hyb2);
            report.float("input_entropy", e.input_entropy);
            report.float("output_entropy", e.output_entropy);
            report.float("entropy_loss", e.loss);
            report.int("entropy_loss_bound", e.loss_bound as i64);
            report.float("gl_sd", e.gl_sd);
            report.int("kernel_classes", e.kernel_classes as i64);
            report.verdict("density_real_uniform", d.real_uniform_holds);
            report.verdict("density_real_hyb1", d.real_hyb1_holds);
            report.verdict("density_hyb1_hyb2", d.hyb1_hyb2_holds);
            report.verdict("entropy_at_least_ell_minus_2", e.entropy_holds);
            report.verdict("entropy_loss", e.loss_holds);
            [&d.sd_real_uniform, &d.sd_real_hyb1, &d.sd_hyb1_hyb2].map(crate::stats::rational_to_f64)
        }
        Mode::Sampled => {
            let s = sampled(&prg, args.seed, args.samples)?;
            let dv = sampled_density_verdicts(p, &s);
            let ev = sampled_entropy_verdicts(p, &s);
            report.float("sd_real_uniform", s.sd_real_uniform);
            report.float("sd_real_hyb1", s.sd_real_hyb1);
            report.float("sd_hyb1_hyb2", s.sd_hyb1_hyb2);
            report.float("epsilon", s.epsilon);
            report.float("output_entropy", s.output_entropy);
            report.float("entropy_epsilon", s.entropy_epsilon);
            report.float("entropy_loss", s.loss);
            report.int("entropy_loss_bound", s.loss_bound as i64);
            report.verdict("density_real_uniform", dv[0]);
            report.verdict("density_real_hyb1", dv[1]);
            report.verdict("density_hyb1_hyb2", dv[2]);
            report.verdict("entropy_at_least_ell_minus_2", ev[0]);
            report.verdict("entropy_loss", ev[1]);
            [s.sd_real_uniform, s.sd_real_hyb1, s.sd_hyb1_hyb2]
        }
    };
    for (j, (sd, bound)) in sds.iter().zip(bounds).enumerate() {
        report.point(j as f64, *sd, "measured");
        report.point(j as f64, bound, "bound");
    }
    Ok(finish(report, start))
}

fn density_bound_values(n: usize, alpha_prime: u32) -> [f64; 3] {
    let s = (n as f64).powf(-(alpha_prime as f64) / 2.0);
    [3.0 * s, 2.0 * s, s]
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistinguishArgs {
    pub n: usize,
    pub gamma: u32,
    pub d: u32,
    pub heuristic: HeuristicSpec,
    pub t: TimeSchedule,
    pub seed: u64,
}

/// The distinguisher against the builtin expander, swept over every truncation.
pub fn cmd_distinguish(args: &DistinguishArgs) -> Result<ExperimentReport> {
    let start = Instant::now();
    let t = args.t.t(args.n);
    let rows_params: Vec<DistinguisherParams> = (0..=args.gamma as usize + 1)
        .map_while(|c| DistinguisherParams::new(args.n, args.gamma, c, args.d).ok())
        .collect();
    // surfaces the parameter error when not even c = 0 is admissible
    let first = match rows_params.first() {
        Some(p) => p.clone(),
        None => DistinguisherParams::new(args.n, args.gamma, 0, args.d)?,
    };
    if first.m > MAX_UNIFORM_BITS {
        return Err(Error::BudgetExceeded(format!("m = {} exceeds {MAX_UNIFORM_BITS} enumerable bits", first.m)));
    }
    let census = KtCensus::build(t, first.m)?;
    let heuristic = args.heuristic.build(&census, args.seed);
    let parameters = json!({
        "n": args.n,
        "gamma": args.gamma,
        "d": args.d,
        "heuristic": heuristic_label(&args.heuristic),
        "t": args.t.label(),
        "t_steps": t,
        "truncations": rows_params.iter().map(|p| p.truncation_c).collect::<Vec<_>>(),
        "m": rows_params.iter().map(|p| p.m).collect::<Vec<_>>(),
        "threshold": rows_params.iter().map(|p| p.threshold).collect::<Vec<_>>(),
    });
    let mut report = ExperimentReport::new("distinguish", parameters, args.seed);
    let (mut eq1_all, mut eq2_all, mut accepted_all, mut rejected_some, mut wins_some) = (true, true, true, false, false);
    for p in &rows_params {
        let c = p.truncation_c;
        let row = distinguisher_row(p, heuristic.as_ref())?;
        let eq1 = eq1_census(p.n, t, p.gamma, c)?;
        let eq2 = eq2_census(expander_id(p.gamma, c)?, p.n, t, p.gamma as i32)?;
        report.exact(&format!("c{c}.acceptance_uniform"), &row.acceptance_uniform);
        report.exact(&format!("c{c}.acceptance_prg"), &row.acceptance_prg);
        report.exact(&format!("c{c}.advantage"), &row.advantage);
        report.exact(&format!("c{c}.eq1_fraction"), &eq1.fraction);
        report.int(&format!("c{c}.eq2_below_threshold"), eq2.below_threshold as i64);
        report.int(&format!("c{c}.eq2_seeds"), eq2.seeds as i64);
        if let Some(k) = eq2.max_kt {
            report.int(&format!("c{c}.eq2_max_kt"), k as i64);
        }
        report.point(c as f64, crate::stats::rational_to_f64(&row.advantage), "advantage");
        report.point(c as f64, crate::stats::rational_to_f64(&row.acceptance_uniform), "acceptance_uniform");
        report.point(c as f64, crate::stats::rational_to_f64(&row.acceptance_prg), "acceptance_prg");
        eq1_all &= eq1.holds;
        eq2_all &= eq2.holds;
        accepted_all &= row.uniform_accepted;
        rejected_some |= row.prg_rejected;
        wins_some |= row.prg_rejected && row.beats_target;
    }
    report.verdict("eq1_all_c", eq1_all);
    report.verdict("eq2_all_c", eq2_all);
    report.verdict("uniform_accepted_all_c", accepted_all);
    report.verdict("prg_rejected_some_c", rejected_some);
    report.verdict("distinguishes_some_c", wins_some);
    Ok(finish(report, start))
}

fn heuristic_label(h: &HeuristicSpec) -> String {
    match h {
        HeuristicSpec::ExactKt => "exact-kt".into(),
        HeuristicSpec::Const(w) => format!("const:{w}"),
        HeuristicSpec::Length => "length".into(),
        HeuristicSpec::PerturbedKt(f) => format!("perturbed-kt:{f}"),
    }
}

/// Settings shared by every subcommand. The JSON config file uses the same
/// keys as the long flags; flags win.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    pub n: Option<usize>,
    pub t: Option<String>,
    pub gamma: Option<u32>,
    pub delta: Option<u32>,
    #[serde(alias = "alpha_prime")]
    pub alpha_prime: Option<u32>,
    pub d: Option<u32>,
    pub owf: Option<String>,
    pub inverter: Option<String>,
    pub heuristic: Option<String>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    #[serde(alias = "gl_k")]
    pub gl_k: Option<usize>,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl Settings {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fields set in `self` override `file`.
    pub fn over(self, file: Settings) -> Settings {
        Settings {
            n: self.n.or(file.n),
            t: self.t.or(file.t),
            gamma: self.gamma.or(file.gamma),
            delta: self.delta.or(file.delta),
            alpha_prime: self.alpha_prime.or(file.alpha_prime),
            d: self.d.or(file.d),
            owf: self.owf.or(file.owf),
            inverter: self.inverter.or(file.inverter),
            heuristic: self.heuristic.or(file.heuristic),
            mode: self.mode.or(file.mode),
            seed: self.seed.or(file.seed),
            samples: self.samples.or(file.samples),
            gl_k: self.gl_k.or(file.gl_k),
            out: self.out.or(file.out),
            plot: self.plot.or(file.plot),
        }
    }

    fn schedule(&self, default: &str) -> Result<TimeSchedule> {
        self.t.as_deref().unwrap_or(default).parse()
    }

    pub fn owf_inputs(&self) -> Result<(usize, InverterSpec, TimeSchedule, u64)> {
        Ok((
            self.n.unwrap_or(8),
            self.inverter.as_deref().unwrap_or("perfect").parse()?,
            self.schedule("4n")?,
            self.seed.unwrap_or(0),
        ))
    }

    pub fn prg_args(&self) -> Result<PrgArgs> {
        Ok(PrgArgs {
            owf: self.owf.clone().unwrap_or_else(|| "identity".into()),
            n: self.n.unwrap_or(4),
            alpha_prime: self.alpha_prime.unwrap_or(0),
            gamma: self.gamma.unwrap_or(2),
            delta: self.delta.unwrap_or(1),
            mode: self.mode.as_deref().unwrap_or("exact").parse()?,
            seed: self.seed.unwrap_or(0),
            samples: self.samples.unwrap_or(1000),
            gl_k: self.gl_k,
        })
    }

    pub fn distinguish_args(&self) -> Result<DistinguishArgs> {
        Ok(DistinguishArgs {
            n: self.n.unwrap_or(4),
            gamma: self.gamma.unwrap_or(8),
            d: self.d.unwrap_or(1),
            heuristic: self.heuristic.as_deref().unwrap_or("exact-kt").parse()?,
            t: self.schedule("64")?,
            seed: self.seed.unwrap_or(0),
        })
    }

    pub fn kt_table_inputs(&self) -> Result<(usize, TimeSchedule, PathBuf)> {
        let out = self.out.clone().ok_or_else(|| Error::InvalidParams("kt-table needs --out".into()))?;
        Ok((self.n.unwrap_or(4), self.schedule("64")?, out))
    }
}

/// Writes the report (to `out` or stdout) and the plot CSV if requested.
pub fn emit(report: &ExperimentReport, settings: &Settings) -> Result<()> {
    match &settings.out {
        Some(path) => std::fs::write(path, report.to_json())?,
        None => std::io::stdout().write_all(report.to_json().as_bytes())?,
    }
    if let Some(path) = &settings.plot {
        let mut w = BufWriter::new(File::create(path)?);
        report.write_plot(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::rational;

    #[test]
    fn exact_values_serialize_as_integers() {
        let m = Measurement::exact(&rational(-6, 8));
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"num":-3,"den":4}"#);
        let big = Rational::new(num_bigint::BigInt::from(1u8) << 100, 3.into());
        let s = serde_json::to_string(&Measurement::exact(&big)).unwrap();
        assert_eq!(s, r#"{"num":1267650600228229401496703205376,"den":3}"#);
    }

    #[test]
    fn inverter_specs_parse() {
        assert_eq!("perfect".parse::<InverterSpec>().unwrap(), InverterSpec::Perfect);
        assert_eq!("deny-random:0.5".parse::<InverterSpec>().unwrap(), InverterSpec::DenyRandom(0.5));
        assert_eq!("deny-z:a5".parse::<InverterSpec>().unwrap(), InverterSpec::DenyZ("a5".into()));
        assert!("deny-random:2".parse::<InverterSpec>().is_err());
        assert!("maybe".parse::<InverterSpec>().is_err());
        for s in ["perfect", "deny-all", "deny-random:0.25", "deny-z:3"] {
            assert_eq!(s.parse::<InverterSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn flags_win_over_file() {
        let file: Settings = serde_json::from_str(r#"{"n": 6, "gamma": 12, "alpha-prime": 1}"#).unwrap();
        let flags = Settings { n: Some(4), ..Settings::default() };
        let merged = flags.over(file);
        assert_eq!((merged.n, merged.gamma, merged.alpha_prime), (Some(4), Some(12), Some(1)));
        assert!(serde_json::from_str::<Settings>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn owf_experiment_small() {
        let r = cmd_owf_experiment(4, &InverterSpec::Perfect, TimeSchedule::Linear4n, 0).unwrap();
        assert!(r.all_verdicts_hold(), "{:?}", r.verdicts);
        assert_eq!(r.measurements["fail_r"], Measurement::exact(&rational(0, 1)));
        let all = cmd_owf_experiment(4, &InverterSpec::DenyAll, TimeSchedule::Linear4n, 0).unwrap();
        assert_eq!(all.measurements["inverter_fail"], Measurement::exact(&rational(1, 1)));
        assert_eq!(all.exit_code(), EXIT_OK);
    }

    #[test]
    fn constant_owf_is_a_config_error() {
        let args = Settings { owf: Some("constant".into()), ..Settings::default() }.prg_args().unwrap();
        assert!(matches!(cmd_prg_experiment(&args), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn plot_csv_header() {
        let mut r = ExperimentReport::new("x", json!({}), 0);
        r.point(1.0, 0.5, "s");
        let mut buf = Vec::new();
        r.write_plot(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,y,series\n1,0.5,s\n");
    }
}
