use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use landauer_core::circuits::{complexity_drift_report, max_exhaustive_width, ReversibleCircuit, DEFAULT_DRIFT_SLACK};
use landauer_core::clausius::{clausius_experiment, ClausiusConfig};
use landauer_core::compress::{default_family, estimate_complexity, Codec};
use landauer_core::demon::{
    rom_generator, run_erase_then_extract, run_extract, run_extract_then_erase, run_xor_copy_extract, DemonConfig,
};
use landauer_core::irrev::IrreversibleCircuit;
use landauer_core::prbox::{generate_pr_quadruple, pr_report};
use landauer_core::synth::{
    bennett_compile_with, build_fig1_compressor, encode_block_frame, to_toffoli_only, verify_compiled, BennettConfig,
    CompiledReversible, FrameMode,
};
use landauer_core::thermo::{erasure_cost_interval, work_value_interval, BoundReport, JouleConfig};
use landauer_core::{BitString, Error};
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{
    BoundsArgs, Cli, ClausiusArgs, CodecArgs, Command, CompileArgs, DemonArgs, PrboxArgs, Scenario, SimulateArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Output {
    pub report: Value,
    /// Replaces the rendered report in text mode (bit-string streams).
    pub text: Option<String>,
}

impl From<Value> for Output {
    fn from(report: Value) -> Self {
        Self { report, text: None }
    }
}

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Compile(_) => "compile",
        Command::Simulate(_) => "simulate",
        Command::Compress(_) => "compress",
        Command::Decompress(_) => "decompress",
        Command::Bounds(_) => "bounds",
        Command::Demon(_) => "demon",
        Command::Clausius(_) => "clausius",
        Command::Prbox(_) => "prbox",
    }
}

pub fn dispatch(cli: &Cli) -> Result<Output> {
    let joules = JouleConfig::new(cli.temperature)?;
    match &cli.command {
        Command::Compile(a) => compile(a).map(Output::from),
        Command::Simulate(a) => simulate(a).map(Output::from),
        Command::Compress(a) => compress(a),
        Command::Decompress(a) => decompress(a),
        Command::Bounds(a) => bounds(a, &joules).map(Output::from),
        Command::Demon(a) => demon(a, joules).map(Output::from),
        Command::Clausius(a) => clausius(a, cli.seed).map(Output::from),
        Command::Prbox(a) => prbox(a, cli.seed).map(Output::from),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn parse_bits(text: &str) -> Result<BitString> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    Ok(cleaned.parse()?)
}

fn read_bits(path: &Path) -> Result<BitString> {
    parse_bits(&read_text(path)?)
}

fn read_optional_bits(path: Option<&PathBuf>) -> Result<BitString> {
    path.map_or_else(|| Ok(BitString::new()), |p| read_bits(p))
}

fn read_input(path: Option<&PathBuf>) -> Result<BitString> {
    match path {
        Some(p) => read_bits(p),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
            parse_bits(&s)
        }
    }
}

fn compiled_summary(c: &CompiledReversible) -> Value {
    json!({
        "width": c.circuit.width(),
        "gates": c.circuit.gates().len(),
        "toffoli_only": c.circuit.is_toffoli_only(),
        "input_lines": c.input_lines,
        "output_lines": c.output_lines,
        "helper_lines": c.helper_lines,
        "ancilla_lines": c.ancilla_lines.len(),
        "const_one_lines": c.const_one_lines,
        "junk_restored": c.junk_restored,
    })
}

fn compile(a: &CompileArgs) -> Result<Value> {
    let (source, compiled, verify) = if let Some(path) = &a.netlist {
        let src = IrreversibleCircuit::from_json(&read_text(path)?)?;
        let config = BennettConfig { ancilla_factor: a.ancilla_factor, max_lines: a.max_lines };
        let mut c = bennett_compile_with(&src, config)?;
        if a.toffoli_only {
            c = to_toffoli_only(&c);
        }
        let verify = if a.verify {
            let oracle = |x: &BitString| src.evaluate(x).expect("input width matches the netlist");
            Some(verify_compiled(&c, oracle, max_exhaustive_width())?)
        } else {
            None
        };
        ("netlist", c, verify)
    } else {
        let helper = parse_bits(a.helper.as_deref().unwrap_or(""))?;
        let codec = a.codec.codec();
        let mode = FrameMode::from(a.mode);
        let c = build_fig1_compressor(codec, a.block, &helper, mode)?;
        let verify = if a.verify {
            let block = a.block;
            let oracle = |x: &BitString| {
                encode_block_frame(codec, &x.slice(0..block), &helper, mode).expect("frames were built for every block")
            };
            Some(verify_compiled(&c, oracle, max_exhaustive_width())?)
        } else {
            None
        };
        ("fig1", c, verify)
    };
    let mut report = compiled_summary(&compiled);
    report["source"] = json!(source);
    if let Some(v) = verify {
        report["verify"] = json!({
            "inputs_checked": v.inputs_checked,
            "mismatches": v.mismatches.len(),
            "ancilla_violations": v.ancilla_violations.len(),
            "bijective_on_domain": v.bijective_on_domain,
            "clean": v.is_clean(),
        });
    }
    let doc = compiled.circuit.to_json();
    match &a.out {
        Some(path) => {
            fs::write(path, doc + "\n").map_err(|source| CliError::Io { path: path.clone(), source })?;
            report["out"] = json!(path);
        }
        None => report["circuit"] = serde_json::from_str(&doc).expect("circuit JSON round-trips"),
    }
    Ok(report)
}

fn simulate(a: &SimulateArgs) -> Result<Value> {
    let c = ReversibleCircuit::from_json(&read_text(&a.circuit)?)?;
    let input = match (&a.input, &a.input_file) {
        (Some(bits), _) => parse_bits(bits)?,
        (None, Some(path)) => read_bits(path)?,
        (None, None) => unreachable!("clap requires one input source"),
    };
    let output = c.simulate(&input)?;
    let mut report = json!({
        "width": c.width(),
        "gates": c.gates().len(),
        "input": input,
        "output": output,
    });
    if a.trajectory || a.drift {
        let t = c.trajectory(&input)?;
        if a.drift {
            report["drift"] = json!(complexity_drift_report(&t, &default_family(), DEFAULT_DRIFT_SLACK)?);
        }
        if a.trajectory {
            report["trajectory"] = json!(t.states);
        }
    }
    Ok(report)
}

fn compress(a: &CodecArgs) -> Result<Output> {
    let codec = a.codec.codec();
    let helper = read_optional_bits(a.helper_file.as_ref())?;
    let data = read_input(a.input.as_ref())?;
    let code = codec.compress(&data, &helper);
    let delimited = landauer_core::compress::coded_len(codec, &data, &helper);
    let text = code.to_string();
    Ok(Output {
        report: json!({
            "codec": codec.name(),
            "input_bits": data.len(),
            "helper_bits": helper.len(),
            "code": code,
            "code_bits": code.len(),
            "self_delimited_bits": delimited,
        }),
        text: Some(text),
    })
}

fn decompress(a: &CodecArgs) -> Result<Output> {
    let codec = a.codec.codec();
    let helper = read_optional_bits(a.helper_file.as_ref())?;
    let code = read_input(a.input.as_ref())?;
    let data = codec.decompress(&code, &helper)?;
    let text = data.to_string();
    Ok(Output {
        report: json!({
            "codec": codec.name(),
            "code_bits": code.len(),
            "helper_bits": helper.len(),
            "data": data,
            "data_bits": data.len(),
        }),
        text: Some(text),
    })
}

fn interval(r: &BoundReport, joules: &JouleConfig) -> Result<Value> {
    let mut v = json!(r);
    v["joules"] = json!(r.joules(joules)?);
    Ok(v)
}

fn bounds(a: &BoundsArgs, joules: &JouleConfig) -> Result<Value> {
    let s = read_bits(&a.s_file)?;
    let x = read_optional_bits(a.x_file.as_ref())?;
    let fam = default_family();
    let codec: &dyn Codec = a.codec.codec();
    let ec = erasure_cost_interval(&s, &x, codec, &fam)?;
    let wv = work_value_interval(&s, &x, codec, &fam)?;
    Ok(json!({
        "len_s": s.len(),
        "len_x": x.len(),
        "complexity": estimate_complexity(&s, &x, &fam)?,
        "intervals": [interval(&ec, joules)?, interval(&wv, joules)?],
    }))
}

fn demon(a: &DemonArgs, joules: JouleConfig) -> Result<Value> {
    let s = read_bits(&a.s_file)?;
    let x = read_optional_bits(a.x_file.as_ref())?;
    let cfg = DemonConfig { joules, mode: a.mode.into() };
    let r = match a.scenario {
        Scenario::Extract => run_extract(&s, &x, a.codec, &cfg)?,
        Scenario::ExtractErase => run_extract_then_erase(&s, &x, a.codec, &cfg)?,
        Scenario::EraseExtract => run_erase_then_extract(&s, &x, a.codec, &cfg)?,
        Scenario::XorCopy => run_xor_copy_extract(&s, &x, &rom_generator(&x, &s)?, &cfg)?,
    };
    let replayed = r.replay_backward()?;
    Ok(json!({
        "scenario": r.scenario,
        "codec": if a.scenario == Scenario::XorCopy { Value::Null } else { json!(a.codec) },
        "len_s": s.len(),
        "wv_bits": r.wv_bits,
        "ec_bits": r.ec_bits,
        "raw_mode": r.raw_mode,
        "ledger": {
            "entries": r.ledger.entries,
            "total_bits": r.ledger.total_bits(),
            "total_joules": r.ledger.total_joules()?,
            "T": r.ledger.temperature,
        },
        "initial_digest": r.initial_tape.digest(),
        "final_digest": r.final_tape.digest(),
        "final_tape": r.final_tape,
        "catalyst_intact": r.catalyst_intact(),
        "work_regions_clean": r.work_regions_clean(),
        "replay_restores_initial": replayed == r.initial_tape,
        "transcript_steps": r.transcript.len(),
    }))
}

fn rational(s: &str) -> BigRational {
    s.parse().expect("validated while parsing arguments")
}

fn clausius(a: &ClausiusArgs, seed: u64) -> Result<Value> {
    let cfg = ClausiusConfig {
        n: a.n,
        w: rational(&a.w),
        delta: rational(&a.delta),
        circuits: a.circuits,
        gates_per_circuit: a.gates,
        seed,
    };
    Ok(json!(clausius_experiment(&cfg)?))
}

fn prbox(a: &PrboxArgs, seed: u64) -> Result<Value> {
    let q = generate_pr_quadruple(a.n, seed)?;
    let mut report = json!(pr_report(&q, &default_family())?);
    report["quadruple_digest"] = json!(q.digest());
    Ok(report)
}
