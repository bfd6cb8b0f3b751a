// SPDX-License-Identifier: Apache-2.0

//! A fixed, deterministic, step-counted two-mode universal machine.
//!
//! Program layout (bits, MSB-first):
//!
//! ```text
//! 0 ‖ payload                 literal mode: emit `payload`, one step per bit
//! 1 ‖ id:8 ‖ args             builtin call; every id starts with `11`
//! 1 ‖ body                    general instructions (body does not start with `11`)
//! ```
//!
//! General instructions use a 2-bit opcode:
//!
//! | bits     | name  | effect                                                   |
//! |----------|-------|----------------------------------------------------------|
//! | `00 kk`  | LOOP  | jump to the first instruction; after `2^{k+1} − 1` jumps fall through and re-arm |
//! | `01 b`   | EMIT  | emit the literal bit `b`                                 |
//! | `10 0`   | OUT   | emit the tape cell under the head                        |
//! | `10 1`   | FLIP  | flip the tape cell under the head                        |
//! | `11 00`  | RIGHT | move the head right                                      |
//! | `11 01`  | LEFT  | move the head left                                       |
//! | `11 10`  | SKIP0 | if cell = 0, skip the next instruction                   |
//! | `11 11`  | HALT  | stop                                                     |
//!
//! Because `11` in first position selects a builtin, a general body never
//! opens with RIGHT, LEFT, SKIP0 or HALT. Every executed instruction costs
//! one step and every emitted bit one more. Running off the end of the body
//! halts; a body that does not split into whole instructions is malformed.
//! A builtin call costs `8` dispatch steps, `|args|` steps to read its
//! argument and one step per output bit.

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::prg::expander::Expander;

/// Version tag recorded in every experiment report.
pub const MACHINE_VERSION: &str = "tinyvm-1";

/// Leading bits of every builtin id.
pub const BUILTIN_ID_PREFIX: u8 = 0b11;

/// Bits of framing in front of a builtin argument: mode bit plus op byte.
pub const BUILTIN_FRAMING_BITS: usize = 9;

/// A bitstring interpreted as a program for the machine.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Program(BitString);

impl Program {
    pub fn new(bits: BitString) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidParams("programs have at least one bit".into()));
        }
        Ok(Self(bits))
    }

    pub fn bits(&self) -> &BitString {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_literal(&self) -> bool {
        !self.0.get(0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RunResult {
    Output(BitString),
    Timeout,
    Malformed,
}

impl RunResult {
    pub fn output(&self) -> Option<&BitString> {
        match self {
            RunResult::Output(y) => Some(y),
            _ => None,
        }
    }
}

/// The pure functions reachable through builtin calls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinKind {
    /// The toy generator `s ↦ s ‖ GL(s)` with `gamma·⌈log |s|⌉` extra bits,
    /// minus its last `trunc` bits.
    Expander { gamma: u32, trunc: usize },
}

#[derive(Clone, Debug)]
pub struct Builtin {
    pub id: u8,
    pub name: String,
    pub kind: BuiltinKind,
}

impl Builtin {
    pub fn apply(&self, args: &BitString) -> BitString {
        match self.kind {
            BuiltinKind::Expander { gamma, trunc } => Expander::new(gamma, trunc).eval(args),
        }
    }

    /// Steps charged for the computation itself, excluding dispatch and emission.
    pub fn cost(&self, args: &BitString) -> u64 {
        args.len() as u64
    }
}

/// Expansion constants with a registered expander family.
pub const EXPANDER_GAMMAS: [u32; 3] = [8, 12, 16];

fn expander_base(gamma: u32) -> Option<u8> {
    match gamma {
        8 => Some(0xC0),
        12 => Some(0xD0),
        16 => Some(0xE0),
        _ => None,
    }
}

/// Builtin id of the expander with expansion constant `gamma` truncated by `trunc` bits.
pub fn expander_id(gamma: u32, trunc: usize) -> Result<u8> {
    let base = expander_base(gamma).ok_or_else(|| {
        Error::InvalidParams(format!("no expander registered for gamma = {gamma} (have {EXPANDER_GAMMAS:?})"))
    })?;
    if trunc > gamma as usize + 1 {
        return Err(Error::InvalidParams(format!(
            "truncation {trunc} outside 0..={} for gamma = {gamma}",
            gamma + 1
        )));
    }
    Ok(base + trunc as u8)
}

#[derive(Clone, Debug)]
pub struct MachineConfig {
    pub version: &'static str,
    /// Overhead of the literal encoding: the mode bit.
    pub literal_overhead_c: usize,
    pub dispatch_cost: u64,
    builtins: Vec<Builtin>,
    by_id: [Option<usize>; 256],
}

impl MachineConfig {
    fn build() -> Self {
        let mut builtins = Vec::new();
        for gamma in EXPANDER_GAMMAS {
            for trunc in 0..=gamma as usize + 1 {
                let id = expander_id(gamma, trunc).expect("registered gamma");
                builtins.push(Builtin {
                    id,
                    name: format!("expander-g{gamma}-c{trunc}"),
                    kind: BuiltinKind::Expander { gamma, trunc },
                });
            }
        }
        let mut by_id = [None; 256];
        for (i, b) in builtins.iter().enumerate() {
            assert!(b.id >> 6 == BUILTIN_ID_PREFIX && by_id[b.id as usize].is_none());
            by_id[b.id as usize] = Some(i);
        }
        Self {
            version: MACHINE_VERSION,
            literal_overhead_c: 1,
            dispatch_cost: 8,
            builtins,
            by_id,
        }
    }

    /// The one machine every experiment runs on.
    pub fn standard() -> &'static MachineConfig {
        static CONFIG: OnceLock<MachineConfig> = OnceLock::new();
        CONFIG.get_or_init(Self::build)
    }

    pub fn builtins(&self) -> &[Builtin] {
        &self.builtins
    }

    pub fn builtin(&self, id: u8) -> Option<&Builtin> {
        self.by_id[id as usize].map(|i| &self.builtins[i])
    }

    /// Registered builtin ids in increasing order.
    pub fn live_ops(&self) -> Vec<u8> {
        let mut ops: Vec<u8> = self.builtins.iter().map(|b| b.id).collect();
        ops.sort_unstable();
        ops
    }
}

/// `0 ‖ x`.
pub fn encode_literal(x: &BitString) -> Program {
    let mut bits = BitString::zeros(1);
    bits.extend_from(x);
    Program(bits)
}

/// `1 ‖ id ‖ args`.
pub fn builtin_program(id: u8, args: &BitString) -> Result<Program> {
    if MachineConfig::standard().builtin(id).is_none() {
        return Err(Error::UnknownBuiltin(id));
    }
    let mut bits = BitString::ones(1);
    bits.push_u64(u64::from(id), 8);
    bits.extend_from(args);
    Ok(Program(bits))
}

/// Exact number of steps a builtin call takes to halt.
pub fn builtin_steps(id: u8, args: &BitString) -> Result<u64> {
    let config = MachineConfig::standard();
    let b = config.builtin(id).ok_or(Error::UnknownBuiltin(id))?;
    Ok(config.dispatch_cost + b.cost(args) + b.apply(args).len() as u64)
}

/// Instruction mode with the builtin prefix `11` after the mode bit.
fn is_builtin_call(bits: &BitString) -> bool {
    bits.len() >= 3 && bits.get(1) && bits.get(2)
}

/// Runs `p` for at most `t` steps.
pub fn run(p: &Program, t: u64) -> RunResult {
    let bits = &p.0;
    if !bits.get(0) {
        let payload_len = bits.len() - 1;
        if payload_len as u64 > t {
            return RunResult::Timeout;
        }
        return RunResult::Output(bits.slice(1, bits.len()));
    }
    if !is_builtin_call(bits) {
        return match parse_body(&bits.slice(1, bits.len())) {
            Some(body) => execute(&body, t),
            None => RunResult::Malformed,
        };
    }
    if bits.len() < BUILTIN_FRAMING_BITS {
        return RunResult::Malformed;
    }
    let op = bits.slice(1, BUILTIN_FRAMING_BITS).to_u64() as u8;
    let rest = bits.slice(BUILTIN_FRAMING_BITS, bits.len());
    let config = MachineConfig::standard();
    let Some(builtin) = config.builtin(op) else {
        return RunResult::Malformed;
    };
    // Reading the argument and dispatching must fit before any output is produced.
    let pre = config.dispatch_cost + builtin.cost(&rest);
    if pre > t {
        return RunResult::Timeout;
    }
    let out = builtin.apply(&rest);
    if pre + out.len() as u64 > t {
        return RunResult::Timeout;
    }
    RunResult::Output(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Instr {
    Loop(u32),
    Emit(bool),
    Out,
    Flip,
    Right,
    Left,
    SkipIfZero,
    Halt,
}

fn parse_body(body: &BitString) -> Option<Vec<Instr>> {
    let mut instrs = Vec::new();
    let mut i = 0;
    let mut take = |n: usize| -> Option<u64> {
        if i + n > body.len() {
            return None;
        }
        let v = body.slice(i, i + n).to_u64();
        i += n;
        Some(v)
    };
    while let Some(op) = take(2) {
        let instr = match op {
            0b00 => Instr::Loop(take(2)? as u32),
            0b01 => Instr::Emit(take(1)? == 1),
            0b10 => {
                if take(1)? == 0 {
                    Instr::Out
                } else {
                    Instr::Flip
                }
            }
            _ => match take(2)? {
                0b00 => Instr::Right,
                0b01 => Instr::Left,
                0b10 => Instr::SkipIfZero,
                _ => Instr::Halt,
            },
        };
        instrs.push(instr);
    }
    // a dangling single bit cannot start an instruction
    (i == body.len()).then_some(instrs)
}

fn loop_jumps(k: u32) -> u32 {
    (2 << k) - 1
}

fn execute(body: &[Instr], t: u64) -> RunResult {
    let mut tape: VecDeque<bool> = VecDeque::from([false]);
    let mut head = 0usize;
    let mut pc = 0usize;
    let mut steps = 0u64;
    let mut out = BitString::new();
    let mut remaining: Vec<u32> =
        body.iter().map(|i| if let Instr::Loop(k) = *i { loop_jumps(k) } else { 0 }).collect();
    while pc < body.len() {
        let instr = body[pc];
        let cost = match instr {
            Instr::Emit(_) | Instr::Out => 2,
            _ => 1,
        };
        steps += cost;
        if steps > t {
            return RunResult::Timeout;
        }
        match instr {
            Instr::Halt => break,
            Instr::Emit(b) => out.push(b),
            Instr::Out => out.push(tape[head]),
            Instr::Flip => tape[head] = !tape[head],
            Instr::Right => {
                head += 1;
                if head == tape.len() {
                    tape.push_back(false);
                }
            }
            Instr::Left => {
                if head == 0 {
                    tape.push_front(false);
                } else {
                    head -= 1;
                }
            }
            Instr::SkipIfZero => {
                if !tape[head] {
                    pc += 1;
                }
            }
            Instr::Loop(k) => {
                if remaining[pc] > 0 {
                    remaining[pc] -= 1;
                    pc = 0;
                    continue;
                }
                remaining[pc] = loop_jumps(k);
            }
        }
        pc += 1;
    }
    RunResult::Output(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn prog(s: &str) -> Program {
        Program::new(b(s)).unwrap()
    }

    #[test]
    fn literal_examples() {
        assert_eq!(encode_literal(&BitString::new()).bits().to_string(), "0");
        assert_eq!(run(&prog("0"), 0), RunResult::Output(BitString::new()));
        let p = encode_literal(&b("1011"));
        assert_eq!(p.bits().to_string(), "01011");
        assert_eq!(run(&p, 4), RunResult::Output(b("1011")));
        assert_eq!(run(&p, 3), RunResult::Timeout);
    }

    #[test]
    fn literal_length_is_one_more_for_all_short_strings() {
        for n in 0..=10 {
            for x in BitString::all(n) {
                assert_eq!(encode_literal(&x).len(), x.len() + 1);
            }
        }
    }

    #[test]
    fn builtin_program_framing() {
        let id = expander_id(8, 0).unwrap();
        let s = BitString::from_u64(0xA5, 8);
        let p = builtin_program(id, &s).unwrap();
        assert_eq!(p.len(), 17);
        assert!(matches!(builtin_program(0xFF, &s), Err(Error::UnknownBuiltin(0xFF))));
    }

    #[test]
    fn builtin_run_matches_direct_generator() {
        let id = expander_id(8, 0).unwrap();
        for v in 0..256u64 {
            let s = BitString::from_u64(v, 8);
            let direct = Expander::new(8, 0).eval(&s);
            let p = builtin_program(id, &s).unwrap();
            assert_eq!(run(&p, 1_000), RunResult::Output(direct.clone()));
            let exact = builtin_steps(id, &s).unwrap();
            assert_eq!(exact, 8 + 8 + direct.len() as u64);
            assert_eq!(run(&p, exact), RunResult::Output(direct));
            assert_eq!(run(&p, exact - 1), RunResult::Timeout);
        }
    }

    #[test]
    fn unregistered_op_is_malformed() {
        let mut bits = BitString::ones(1);
        bits.push_u64(0xFF, 8);
        bits.push_u64(0b1010, 4);
        assert_eq!(run(&Program::new(bits).unwrap(), 100), RunResult::Malformed);
        // builtin prefix without a whole id
        assert_eq!(run(&prog("1110000"), 100), RunResult::Malformed);
        // a lone bit after the mode bit is not an instruction
        assert_eq!(run(&prog("11"), 100), RunResult::Malformed);
    }

    fn general(body: &str) -> Program {
        Program::new(BitString::ones(1).concat(&b(body))).unwrap()
    }

    #[test]
    fn general_instructions() {
        assert_eq!(run(&general(""), 0), RunResult::Output(BitString::new()));
        // EMIT 1, EMIT 0
        assert_eq!(run(&general("011010"), 4), RunResult::Output(b("10")));
        assert_eq!(run(&general("011010"), 3), RunResult::Timeout);
        // FLIP, OUT, RIGHT, OUT
        assert_eq!(run(&general("1011001100100"), 6), RunResult::Output(b("10")));
        // truncated EMIT operand
        assert_eq!(run(&general("01"), 10), RunResult::Malformed);
        // FLIP, FLIP, SKIP0, EMIT 1: the zero cell skips the emit
        assert_eq!(run(&general("1011011110011"), 10), RunResult::Output(BitString::new()));
        assert_eq!(run(&general("1011110011"), 10), RunResult::Output(b("1")));
        // EMIT 0, HALT, EMIT 1
        assert_eq!(run(&general("0101111011"), 10), RunResult::Output(b("0")));
        // FLIP, LEFT, OUT, RIGHT, OUT
        assert_eq!(run(&general("1011101100 1100100".replace(' ', "").as_str()), 20), RunResult::Output(b("01")));
    }

    #[test]
    fn loops_rearm_and_nest() {
        // EMIT 0, LOOP 2: eight passes, three steps each
        let zeros = general("0100010");
        assert_eq!(zeros.len(), 8);
        assert_eq!(run(&zeros, 24), RunResult::Output(BitString::zeros(8)));
        assert_eq!(run(&zeros, 23), RunResult::Timeout);
        // EMIT 1, LOOP 0, LOOP 1: 2 × 4 passes
        assert_eq!(run(&general("01100000001"), 100), RunResult::Output(BitString::ones(8)));
        // FLIP, OUT, LOOP 1 alternates
        assert_eq!(run(&general("1011000001"), 100), RunResult::Output(b("1010")));
    }

    fn arb_program() -> impl Strategy<Value = Program> {
        proptest::collection::vec(any::<bool>(), 1..40)
            .prop_map(|v| Program::new(BitString::from_bools(&v)).unwrap())
    }

    proptest! {
        #[test]
        fn deterministic_and_step_monotone(p in arb_program(), t in 0u64..80, extra in 0u64..200) {
            let r = run(&p, t);
            prop_assert_eq!(&r, &run(&p, t));
            if let RunResult::Output(y) = r {
                prop_assert_eq!(run(&p, t + extra), RunResult::Output(y));
            }
        }

        #[test]
        fn literal_completeness(v in proptest::collection::vec(any::<bool>(), 0..64)) {
            let x = BitString::from_bools(&v);
            prop_assert_eq!(run(&encode_literal(&x), x.len() as u64), RunResult::Output(x));
        }

        #[test]
        fn builtin_faithfulness(
            gi in 0usize..3,
            c in 0usize..10,
            v in proptest::collection::vec(any::<bool>(), 0..24),
        ) {
            let gamma = EXPANDER_GAMMAS[gi];
            let id = expander_id(gamma, c).unwrap();
            let args = BitString::from_bools(&v);
            let g = MachineConfig::standard().builtin(id).unwrap();
            let out = g.apply(&args);
            let t = 9 + g.cost(&args) + out.len() as u64;
            prop_assert_eq!(run(&builtin_program(id, &args).unwrap(), t), RunResult::Output(out));
        }
    }
}
