use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use dodgson::bijection::{verify_alice_formal, verify_alice_numeric, BijectionError};
use dodgson::condensation::{
    bareiss_det, condensation_det, leibniz_det, rational_det, LEIBNIZ_MAX_N,
};
use dodgson::{
    classify, enumerate_class, gen_matrix, pairing_weight, CondensationConfig, MapOp, Matrix,
    MatrixKind, Method, Pairing, PairingClass,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn verification(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<BijectionError> for CliError {
    fn from(e: BijectionError) -> Self {
        match e {
            BijectionError::NotInImage
            | BijectionError::NotBad
            | BijectionError::WrongClass { .. } => CliError::domain(e.to_string()),
            BijectionError::Internal(_) => CliError::verification(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

type CmdResult = Result<(), CliError>;

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }
}

fn require_n(n: u32) -> CmdResult {
    if n < 2 {
        return Err(CliError::input("n must be >= 2"));
    }
    Ok(())
}

pub fn det(
    file: &Path,
    method: Method,
    retries: usize,
    seed: u64,
    trace: Option<&Path>,
) -> CmdResult {
    let matrix =
        Matrix::parse_text(&read_input(file)?).map_err(|e| CliError::input(e.to_string()))?;
    let config = CondensationConfig { retries, seed };
    let outcome =
        rational_det(&matrix, method, &config).map_err(|e| CliError::input(e.to_string()))?;
    if let Some(path) = trace {
        let Some(t) = &outcome.trace else {
            return Err(CliError::input(
                "--trace is only available with --method condensation",
            ));
        };
        let mut doc = t.to_json();
        doc["scale"] = Value::String(outcome.scale.to_string());
        doc["determinant"] = Value::String(outcome.value.to_string());
        fs::write(path, serde_json::to_string(&doc).expect("json") + "\n")?;
    }
    if let Some(t) = &outcome.trace {
        if t.fallback_used {
            eprintln!(
                "condensation fell back to bareiss after {} repairs",
                t.repairs.len()
            );
        }
    }
    println!("{}", outcome.value);
    Ok(())
}

pub fn verify(
    n: u32,
    formal: bool,
    random: Option<u32>,
    bound: u64,
    seed: u64,
    max_n: u32,
) -> CmdResult {
    require_n(n)?;
    match (formal, random) {
        (true, _) => {
            if n > max_n {
                return Err(CliError::input(format!(
                    "formal mode is limited to n <= {max_n}"
                )));
            }
            let report = verify_alice_formal(n, max_n)?;
            println!("{report}");
            if !report.passed {
                return Err(CliError::verification(format!(
                    "identity fails formally at n = {n}"
                )));
            }
        }
        (false, Some(trials)) => {
            let mut failures = 0;
            for t in 0..trials as u64 {
                let m = gen_matrix(MatrixKind::Random, n as usize, bound, seed.wrapping_add(t));
                let r = verify_alice_numeric(&m)?;
                if !r.passed {
                    failures += 1;
                    eprintln!("seed {}: lhs {} rhs {}", seed.wrapping_add(t), r.lhs, r.rhs);
                }
            }
            let status = if failures == 0 { "PASS" } else { "FAIL" };
            println!(
                "n={n} trials={trials} bound={bound} seed={seed} failures={failures} {status}"
            );
            if failures > 0 {
                return Err(CliError::verification(format!("{failures} trials failed")));
            }
        }
        (false, None) => {
            return Err(CliError::input(
                "one of --formal or --random TRIALS is required",
            ))
        }
    }
    Ok(())
}

pub fn map(op: MapOp, input: &Path, emit_pairing: bool) -> CmdResult {
    let text = read_input(input)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("invalid JSON: {e}")))?;
    // a trace from a previous map call is accepted in place of a bare pairing
    let pairing_value = match value.get("output") {
        Some(out) => out.clone(),
        None => value,
    };
    let pairing: Pairing =
        serde_json::from_value(pairing_value).map_err(|e| CliError::input(e.to_string()))?;
    let trace = op.apply(&pairing)?;
    let out = if emit_pairing {
        serde_json::to_string(&trace.output)
    } else {
        serde_json::to_string(&trace)
    }
    .expect("json");
    println!("{out}");
    Ok(())
}

pub fn enumerate(n: u32, class: PairingClass, json: bool, only_bad: bool, max_n: u32) -> CmdResult {
    require_n(n)?;
    if n > max_n {
        return Err(CliError::input(format!(
            "enumeration is limited to n <= {max_n}"
        )));
    }
    let members = enumerate_class(n, class).map_err(|e| CliError::input(e.to_string()))?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut rows = Vec::new();
    if !json {
        writeln!(out, "# idx class marriages affairs weight status")?;
    }
    for (idx, p) in members.enumerate() {
        let status = match class {
            PairingClass::A => None,
            _ => Some(if classify(&p)?.is_good() {
                "good"
            } else {
                "bad"
            }),
        };
        if only_bad && status != Some("bad") {
            continue;
        }
        let weight = pairing_weight(&p);
        if json {
            rows.push(json!({ "index": idx, "pairing": p, "weight": weight, "status": status }));
        } else {
            writeln!(
                out,
                "{idx} {} {} {} {weight} {}",
                p.class(),
                p.marriages(),
                p.affairs(),
                status.unwrap_or("-")
            )?;
        }
    }
    if json {
        writeln!(out, "{}", Value::Array(rows))?;
    }
    out.flush()?;
    Ok(())
}

pub struct BenchArgs {
    pub sizes: Vec<usize>,
    pub methods: Vec<Method>,
    pub entry_bits: u32,
    pub seed: u64,
    pub trials: u64,
    pub corpus: MatrixKind,
    pub retries: usize,
    pub out: Option<PathBuf>,
}

pub fn bench(args: &BenchArgs) -> CmdResult {
    for &n in &args.sizes {
        if n == 0 {
            return Err(CliError::input("sizes must be positive"));
        }
        if n > LEIBNIZ_MAX_N && args.methods.contains(&Method::Leibniz) {
            return Err(CliError::input(format!(
                "leibniz is limited to n <= {LEIBNIZ_MAX_N}, got n = {n}"
            )));
        }
    }
    if args.entry_bits == 0 || args.entry_bits > 62 {
        return Err(CliError::input("--entry-bits must be in 1..=62"));
    }
    let bound = (1u64 << args.entry_bits) - 1;
    let config = CondensationConfig {
        retries: args.retries,
        seed: args.seed,
    };
    let mut csv = String::from("n,seed,method,corpus,wall_us,repairs,fallbacks,digest\n");
    for &n in &args.sizes {
        for t in 0..args.trials {
            let seed = args.seed.wrapping_add(t);
            let m = gen_matrix(args.corpus, n, bound, seed);
            for &method in &args.methods {
                let start = Instant::now();
                let (value, repairs, fallbacks): (BigInt, usize, usize) = match method {
                    Method::Condensation => {
                        let (d, trace) = condensation_det(&m, &config)
                            .map_err(|e| CliError::input(e.to_string()))?;
                        (d, trace.repairs.len(), usize::from(trace.fallback_used))
                    }
                    Method::Bareiss => (
                        bareiss_det(&m).map_err(|e| CliError::input(e.to_string()))?,
                        0,
                        0,
                    ),
                    Method::Leibniz => (
                        leibniz_det(&m).map_err(|e| CliError::input(e.to_string()))?,
                        0,
                        0,
                    ),
                };
                let micros = start.elapsed().as_micros();
                csv.push_str(&format!(
                    "{n},{seed},{method},{},{micros},{repairs},{fallbacks},{value}\n",
                    args.corpus
                ));
            }
        }
    }
    match &args.out {
        Some(path) => fs::write(path, csv)?,
        None => io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(())
}

pub fn gen(kind: MatrixKind, n: usize, bound: u64, seed: u64) -> CmdResult {
    if n == 0 {
        return Err(CliError::input("n must be positive"));
    }
    let m = gen_matrix(kind, n, bound, seed);
    print!("# {kind} n={n} bound={bound} seed={seed}\n{m}");
    Ok(())
}
