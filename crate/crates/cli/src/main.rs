use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polpoisson::dynamics::{conservation_report, rk4_flow, State};
use polpoisson::geometry::{contract_theta, differential, hamiltonian_field, pair};
use polpoisson::poisson::{homomorphism_defect, jacobi_witness, verify_axioms, AxiomReport};
use polpoisson::problem::{HamiltonianSpec, LieAlgebraSpec, Problem, ProblemFile};
use polpoisson::sampling::{random_hamiltonian, rng};
use polpoisson::{BracketKind, FoliateField, LieAlgebra, PolarizedHamiltonian};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "polpoisson", version)]
#[command(about = "Polarized k-symplectic geometry and vector-valued Poisson brackets, in exact arithmetic")]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a problem file parses and is consistent
    Validate { file: PathBuf },
    /// Bracket two named Hamiltonians
    Bracket {
        #[command(flatten)]
        pair: PairArgs,
        /// Use the linear bracket of the file's Lie algebra
        #[arg(long)]
        linear: bool,
    },
    /// Same as `bracket --linear`
    Lbracket {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Print the Hamiltonian vector field of a named Hamiltonian
    Field {
        file: PathBuf,
        name: String,
        /// Field of the linear bracket instead of the subordinate one
        #[arg(long)]
        linear: bool,
    },
    /// Integrate Hamilton's equations with RK4
    Flow {
        file: PathBuf,
        name: String,
        /// Initial x, row-major k×n, comma-separated (default zeros)
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Initial y, comma-separated (default zeros)
        #[arg(long, allow_hyphen_values = true)]
        y0: Option<String>,
        /// End time
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Step size
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Write the CSV trajectory here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact identity suites on seeded random Hamiltonians
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Check the linear bracket of the file's Lie algebra
        #[arg(long)]
        linear: bool,
    },
    /// Print the catalog Lie algebras
    Examples,
}

#[derive(Args, Debug)]
struct PairArgs {
    file: PathBuf,
    h: String,
    k: String,
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<polpoisson::Error> for Failure {
    fn from(e: polpoisson::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

struct Output {
    json: bool,
    color: bool,
}

impl Output {
    fn paint(&self, text: &str, ok: bool) -> String {
        if self.color {
            let code = if ok { "32" } else { "31" };
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn json(&self, v: &Value) {
        println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let out = Output {
        json: cli.json,
        color: std::io::stdout().is_terminal()
            && std::env::var("POLPOISSON_COLOR").map_or(true, |v| v != "0"),
    };
    let result = match cli.command {
        Command::Validate { file } => cmd_validate(&out, &file),
        Command::Bracket { pair, linear } => cmd_bracket(&out, &pair, linear),
        Command::Lbracket { pair } => cmd_bracket(&out, &pair, true),
        Command::Field { file, name, linear } => cmd_field(&out, &file, &name, linear),
        Command::Flow {
            file,
            name,
            x0,
            y0,
            t,
            dt,
            out: path,
        } => cmd_flow(&out, &file, &name, x0.as_deref(), y0.as_deref(), t, dt, path.as_deref()),
        Command::Verify {
            file,
            samples,
            seed,
            linear,
        } => cmd_verify(&out, &file, samples, seed, linear),
        Command::Examples => cmd_examples(&out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> Result<ProblemFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    ProblemFile::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Problem, Failure> {
    read_file(path)?.resolve().map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(ToString::to_string).collect();
        Failure::Input(format!("{} is invalid:\n{}", path.display(), lines.join("\n")))
    })
}

fn bracket_kind(problem: &Problem, linear: bool) -> Result<BracketKind, Failure> {
    if !linear {
        return Ok(BracketKind::Subordinate);
    }
    let algebra = problem
        .algebra
        .clone()
        .ok_or_else(|| Failure::Input("the linear bracket needs a `lie_algebra` in the file".into()))?;
    Ok(BracketKind::linear(algebra)?)
}

fn hamiltonian_text(h: &PolarizedHamiltonian) -> String {
    let names = h.manifold().y_names();
    let mut lines = Vec::new();
    for (j, a) in h.a().iter().enumerate() {
        lines.push(format!("a[{}] = {}", j + 1, a.display_with(&names)));
    }
    for (p, b) in h.b().iter().enumerate() {
        lines.push(format!("b[{}] = {}", p + 1, b.display_with(&names)));
    }
    lines.join("\n")
}

fn field_json(x: &FoliateField) -> Value {
    let m = x.manifold();
    let names = m.y_names();
    let xi: Vec<Vec<String>> = (0..m.k())
        .map(|p| (0..m.n()).map(|i| x.xi(p, i).to_string()).collect())
        .collect();
    let eta: Vec<String> = x
        .eta_all()
        .iter()
        .map(|e| e.display_with(&names).to_string())
        .collect();
    json!({"k": m.k(), "n": m.n(), "xi": xi, "eta": eta})
}

fn cmd_validate(out: &Output, path: &Path) -> CmdResult {
    let file = read_file(path)?;
    let diags = match file.resolve() {
        Ok(problem) => {
            if out.json {
                out.json(&json!({"ok": true, "diagnostics": []}));
            } else {
                let algebra = problem
                    .algebra
                    .as_ref()
                    .map_or("none".to_string(), |l| l.to_string());
                println!(
                    "{} manifold k={}, n={}; algebra: {}; {} Hamiltonian(s)",
                    out.paint("ok:", true),
                    problem.manifold.k(),
                    problem.manifold.n(),
                    algebra,
                    problem.hamiltonians.len()
                );
            }
            return Ok(());
        }
        Err(d) => d,
    };
    let mut lines: Vec<String> = diags.iter().map(ToString::to_string).collect();
    if let Some(spec) = &file.lie_algebra {
        if let Ok(l) = spec.resolve() {
            if let Ok(Some((triple, jac))) = jacobi_witness(&l, file.manifold.k.max(1)) {
                let a: Vec<String> = triple
                    .iter()
                    .map(|h| {
                        let pos = h.a().iter().position(|f| !f.is_zero()).unwrap_or(0);
                        format!("e{}", pos + 1)
                    })
                    .collect();
                lines.push(format!(
                    "lie_algebra: jacobiator witness with a = ({}): {}",
                    a.join(", "),
                    jac
                ));
            }
        }
    }
    if out.json {
        let items: Vec<Value> = diags
            .iter()
            .map(|d| json!({"path": d.path, "message": d.message}))
            .collect();
        out.json(&json!({"ok": false, "diagnostics": items}));
    }
    Err(Failure::Input(format!("{} is invalid:\n{}", path.display(), lines.join("\n"))))
}

fn cmd_bracket(out: &Output, args: &PairArgs, linear: bool) -> CmdResult {
    let problem = load(&args.file)?;
    let kind = bracket_kind(&problem, linear)?;
    let h = problem.hamiltonian(&args.h)?;
    let k = problem.hamiltonian(&args.k)?;
    let result = kind.bracket(h, k)?;
    if out.json {
        let spec = serde_json::to_value(HamiltonianSpec::from_hamiltonian(&result)).expect("serializable");
        out.json(&spec);
    } else {
        println!("{}", hamiltonian_text(&result));
    }
    Ok(())
}

fn cmd_field(out: &Output, path: &Path, name: &str, linear: bool) -> CmdResult {
    let problem = load(path)?;
    let kind = bracket_kind(&problem, linear)?;
    let x = kind.field(problem.hamiltonian(name)?)?;
    if out.json {
        out.json(&field_json(&x));
    } else {
        println!("{x}");
    }
    Ok(())
}

fn parse_floats(text: Option<&str>, len: usize, flag: &str) -> Result<Vec<f64>, Failure> {
    let Some(text) = text else {
        return Ok(vec![0.0; len]);
    };
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Input(format!("--{flag}: `{}` is not a number", s.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != len {
        return Err(Failure::Input(format!(
            "--{flag} needs {len} values, got {}",
            values.len()
        )));
    }
    Ok(values)
}

#[allow(clippy::too_many_arguments)]
fn cmd_flow(
    out: &Output,
    path: &Path,
    name: &str,
    x0: Option<&str>,
    y0: Option<&str>,
    t: f64,
    dt: f64,
    csv_path: Option<&Path>,
) -> CmdResult {
    let problem = load(path)?;
    let h = problem.hamiltonian(name)?;
    let m = problem.manifold;
    let s0 = State::new(
        m,
        parse_floats(x0, m.k() * m.n(), "x0")?,
        parse_floats(y0, m.n(), "y0")?,
    )?;
    let traj = rk4_flow(h, &s0, t, dt)?;
    let csv = traj.to_csv()?;
    let drift = conservation_report(&traj)?;
    let (t_last, last) = traj.last();
    match csv_path {
        Some(p) => std::fs::write(p, &csv)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))?,
        None if !out.json => print!("{csv}"),
        None => {}
    }
    if out.json {
        out.json(&json!({
            "steps": traj.times().len() - 1,
            "t_end": t_last,
            "overflow": traj.overflowed(),
            "drift": drift,
            "final": {"x": last.x, "y": last.y},
        }));
    } else {
        let report = format!(
            "steps: {}; t_end: {t_last}; overflow: {}; drift: [{}]",
            traj.times().len() - 1,
            traj.overflowed(),
            drift.iter().map(|d| format!("{d:e}")).collect::<Vec<_>>().join(", ")
        );
        if csv_path.is_some() {
            println!("{report}");
        } else {
            eprintln!("{report}");
        }
    }
    Ok(())
}

struct Suite {
    name: &'static str,
    cases: usize,
    witness: Option<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }
}

fn identity_suites(kind: &BracketKind, samples: &[PolarizedHamiltonian]) -> Result<Vec<Suite>, Failure> {
    let mut contraction = Suite::new("contraction i(X_H)θ = -dH");
    let mut homomorphism = Suite::new("homomorphism [X_H,X_K] = X_{K,H}");
    let mut duality = Suite::new("duality <dH,X_K> = {H,K}");
    let len = samples.len();
    for i in 0..len {
        let (h, k) = (&samples[i], &samples[(i + 1) % len]);
        let xh = hamiltonian_field(h)?;
        contraction.record(contract_theta(&xh)? == differential(h)?.negated(), || {
            format!("sample {i}")
        });
        homomorphism.record(homomorphism_defect(kind, h, k)?.is_zero(), || {
            format!("samples ({i}, {})", (i + 1) % len)
        });
        if matches!(kind, BracketKind::Subordinate) {
            let hk = kind.bracket(h, k)?;
            let forward = pair(&differential(h)?, &hamiltonian_field(k)?)? == hk.components();
            let backward = pair(&differential(k)?, &xh)? == hk.negated().components();
            duality.record(forward && backward, || format!("samples ({i}, {})", (i + 1) % len));
        }
    }
    let mut suites = vec![contraction, homomorphism];
    if duality.cases > 0 {
        suites.push(duality);
    }
    Ok(suites)
}

fn cmd_verify(out: &Output, path: &Path, samples: usize, seed: u64, linear: bool) -> CmdResult {
    if samples == 0 {
        return Err(Failure::Input("--samples must be at least 1".into()));
    }
    let problem = load(path)?;
    let kind = bracket_kind(&problem, linear)?;
    let m = problem.manifold;
    let mut r = rng(seed);
    let set: Vec<PolarizedHamiltonian> = (0..samples).map(|_| random_hamiltonian(&mut r, m, 2)).collect();
    let report: AxiomReport = verify_axioms(&kind, m, &set)?;
    let suites = identity_suites(&kind, &set)?;

    let mut rows: Vec<(&str, usize, Option<String>)> = report
        .checks
        .iter()
        .map(|c| (c.name, c.cases, c.witness.clone()))
        .collect();
    rows.extend(suites.into_iter().map(|s| (s.name, s.cases, s.witness)));
    let failed: Vec<String> = rows
        .iter()
        .filter_map(|(name, _, w)| w.as_ref().map(|w| format!("{name}: {w}")))
        .collect();

    if out.json {
        let checks: Vec<Value> = rows
            .iter()
            .map(|(name, cases, w)| json!({"name": name, "cases": cases, "passed": w.is_none(), "witness": w}))
            .collect();
        out.json(&json!({
            "bracket": kind.name(),
            "samples": samples,
            "seed": seed,
            "ok": failed.is_empty(),
            "checks": checks,
        }));
    } else {
        println!("bracket: {}; samples: {samples}; seed: {seed}", kind.name());
        for (name, cases, w) in &rows {
            match w {
                None => println!("{} {name} ({cases} cases)", out.paint("pass", true)),
                Some(w) => println!("{} {name}: {w}", out.paint("FAIL", false)),
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join("; ")))
    }
}

fn cmd_examples(out: &Output) -> CmdResult {
    let catalog = LieAlgebra::catalog();
    if out.json {
        let items: Vec<Value> = catalog
            .iter()
            .map(|(name, l)| {
                json!({
                    "name": name,
                    "algebra": serde_json::to_value(LieAlgebraSpec::from_algebra(l)).expect("serializable"),
                    "valid": l.is_valid(),
                })
            })
            .collect();
        out.json(&Value::Array(items));
    } else {
        for (name, l) in &catalog {
            println!("{name} (dim {}): {l}", l.dim());
        }
    }
    Ok(())
}
