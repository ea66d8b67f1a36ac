mod report;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use raqm::exact::{itc_verdict, niven_cosine};
use raqm::exec::Execution;
use raqm::experiments::bell::{bell_run, parse_angles, BellConfig};
use raqm::experiments::interference::{delayed_choice, mz_simulate};
use raqm::experiments::nominal::{sg_counterfactual, NominalSetting};
use raqm::experiments::uncertainty::{
    position_momentum_aggregate, uncertainty_check, uncertainty_obstruction, DirectionCosines,
};
use raqm::lattice::{build_spinorial_circle, canonical_bitstring, lattice_points, write_lattice_csv, BitString, LatticePoint};
use raqm::qubit::{change_singlet_angle, make_qubit, make_singlet, swap_perspective, HiddenPermutation};
use raqm::reduction::{born_sample, measure};
use raqm::{RaqmError, Rational, RationalAngle};

use report::{envelope, to_pretty, write_file, RunManifest};

#[derive(Parser)]
#[command(name = "raqm", version, about = "Bit-string qubits on the rationally discretised sphere")]
struct Cli {
    /// Print the versioned JSON report instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write a run manifest (arguments, seed, version, outputs) here.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,
    /// Run Monte Carlo loops on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice points and bit strings of the L-sphere.
    Sphere(SphereArgs),
    /// Exact cos φ for a rational angle.
    Niven(NivenArgs),
    /// Can a spherical triangle have three rational side cosines?
    Itc(ItcArgs),
    /// Build a one-qubit state or a singlet.
    State(StateArgs),
    /// Measure by halving reduction, or sample outcomes over many ξ.
    Measure(MeasureArgs),
    /// Mach-Zehnder definability and output probabilities.
    Mz(NivenArgs),
    /// Which rationality condition the second beamsplitter demands.
    DelayedChoice(DelayedArgs),
    /// Uncertainty bound for a direction, an aggregate, or the obstruction.
    Uncertainty(UncertaintyArgs),
    /// Can two Stern-Gerlach stages be counterfactually swapped?
    Sg(SgArgs),
    /// Bell inequality harness.
    Bell(BellArgs),
}

#[derive(Args, Serialize)]
struct SphereArgs {
    #[arg(long = "L")]
    l: usize,
    /// Also list the 2L strings of the φ ∈ {0, π} circle (L a power of two).
    #[arg(long)]
    spinorial: bool,
    /// Write all lattice points as CSV.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct NivenArgs {
    /// Angle as a fraction of a turn, e.g. 1/6.
    #[arg(long, allow_hyphen_values = true)]
    turns: RationalAngle,
}

#[derive(Args, Serialize)]
struct ItcArgs {
    #[arg(long, allow_hyphen_values = true)]
    cos_ab: Rational,
    #[arg(long, allow_hyphen_values = true)]
    cos_bc: Rational,
    /// Interior angle at C in turns.
    #[arg(long, allow_hyphen_values = true)]
    phi: RationalAngle,
}

#[derive(Args, Serialize)]
struct StateArgs {
    #[arg(long = "L")]
    l: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, required_unless_present = "singlet")]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Build a singlet at this cos θ_AB instead of a single qubit.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "m")]
    singlet: Option<Rational>,
    /// Also show the pair with B as the block string.
    #[arg(long, requires = "singlet")]
    swap: bool,
    /// Also rebuild B for this cos θ_AB under the same ξ.
    #[arg(long, allow_hyphen_values = true, requires = "singlet")]
    change_to: Option<Rational>,
}

#[derive(Args, Serialize)]
struct MeasureArgs {
    #[arg(long = "L", required_unless_present = "bits")]
    l: Option<usize>,
    #[arg(long, required_unless_present = "bits")]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Measure this string directly, e.g. "{1,-1,-1,1}".
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["m", "l"])]
    bits: Option<String>,
    /// Sample this many independent ξ instead of tracing one.
    #[arg(long, conflicts_with = "bits")]
    samples: Option<u64>,
    /// Write the reduction trace as JSON lines.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
enum Mirror {
    In,
    Out,
}

#[derive(Args, Serialize)]
struct DelayedArgs {
    #[arg(long, allow_hyphen_values = true)]
    turns: RationalAngle,
    #[arg(long, value_enum)]
    mirror: Mirror,
}

#[derive(Args, Serialize)]
struct UncertaintyArgs {
    /// Exact direction cosines "c,c′,c″".
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["samples", "cos_theta"])]
    cos: Option<String>,
    /// Size of the uniform position/momentum aggregate.
    #[arg(long, conflicts_with = "cos_theta")]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// cos θ for the obstruction check (with --phi).
    #[arg(long, allow_hyphen_values = true, requires = "phi")]
    cos_theta: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<RationalAngle>,
}

#[derive(Args, Serialize)]
struct SgArgs {
    #[arg(long, allow_hyphen_values = true)]
    cos_ab: Rational,
    #[arg(long, allow_hyphen_values = true)]
    cos_bc: Rational,
    /// Interior angle at B in turns.
    #[arg(long, allow_hyphen_values = true)]
    phi_b: RationalAngle,
}

#[derive(Args, Serialize)]
struct BellArgs {
    /// Key-value config file; flags given on the command line win.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Nominal directions A,B,C in turns, e.g. 0,1/6,1/3.
    #[arg(long)]
    angles: Option<String>,
    /// Lattice size; must be even.
    #[arg(long = "L")]
    l: Option<usize>,
    /// Trials per pair (at least 100).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Neighbourhood on cos θ (default 2/L).
    #[arg(long)]
    tolerance: Option<Rational>,
    /// Write per-pair statistics as CSV.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

enum Failure {
    Invalid(String),
    Unrealisable(String),
    Io(String),
}

impl From<RaqmError> for Failure {
    fn from(e: RaqmError) -> Self {
        if e.is_unrealisable() {
            Failure::Unrealisable(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

struct Outcome {
    report: Value,
    summary: String,
    config: Value,
    seed: Option<u64>,
    outputs: Vec<PathBuf>,
}

impl Outcome {
    fn new<T: Serialize>(command: &str, report: &T, summary: String, config: Value) -> Self {
        Outcome {
            report: envelope(command, report),
            summary,
            config,
            seed: None,
            outputs: Vec::new(),
        }
    }

    fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

fn snapshot<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialise")
}

fn sphere(a: &SphereArgs) -> Result<Outcome, Failure> {
    LatticePoint::new(0, 0, a.l)?;
    let points: Vec<Value> = lattice_points(a.l)
        .map(|p| json!({"m": p.m(), "n": p.n(), "cos_theta": p.cos_theta(), "bits": canonical_bitstring(&p)}))
        .collect();
    let spinorial = if a.spinorial { Some(build_spinorial_circle(a.l)?) } else { None };
    let mut summary = format!("L = {}: {} lattice points\n", a.l, points.len());
    if let Some(c) = &spinorial {
        summary.push_str("spinorial circle:\n");
        for s in c {
            let _ = writeln!(summary, "  {s}");
        }
    }
    let mut out = Outcome::new(
        "sphere",
        &json!({"L": a.l, "point_count": points.len(), "points": points, "spinorial_circle": spinorial}),
        summary,
        snapshot(a),
    );
    if let Some(path) = &a.csv {
        let mut buf = Vec::new();
        write_lattice_csv(a.l, &mut buf)?;
        write_file(path, &buf).map_err(Failure::Io)?;
        out.outputs.push(path.clone());
    }
    Ok(out)
}

fn niven(a: &NivenArgs) -> Result<Outcome, Failure> {
    let c = niven_cosine(&a.turns);
    let summary = format!("cos φ = {}\n", c.describe());
    Ok(Outcome::new("niven", &json!({"turns": a.turns, "cosine": c}), summary, snapshot(a)))
}

fn itc(a: &ItcArgs) -> Result<Outcome, Failure> {
    let v = itc_verdict(&a.cos_ab, &a.cos_bc, &a.phi)?;
    let summary = format!(
        "cos θ_AC = {}\npossible: {}{}\n{}\n",
        v.third_side.describe(),
        v.possible,
        if v.degenerate { " (degenerate)" } else { "" },
        v.reason
    );
    Ok(Outcome::new("itc", &v, summary, snapshot(a)))
}

fn state(a: &StateArgs) -> Result<Outcome, Failure> {
    let xi = HiddenPermutation::from_seed(a.seed, a.l);
    if let Some(cos) = &a.singlet {
        let s = make_singlet(cos, a.l, xi)?;
        let mut summary = format!("top    {}\nbottom {}\nmean product {}\n", s.top, s.bottom, s.mean_product());
        let swapped = a.swap.then(|| swap_perspective(&s));
        if let Some(w) = &swapped {
            let _ = writeln!(summary, "swapped: top {} bottom {}", w.top, w.bottom);
        }
        let changed = a.change_to.as_ref().map(|c| change_singlet_angle(&s, c)).transpose()?;
        if let Some(c) = &changed {
            let _ = writeln!(summary, "after change: bottom {} (top unchanged)", c.bottom);
        }
        let report = json!({
            "state": s.record(),
            "outcomes": s.outcomes(),
            "mean_product": s.mean_product(),
            "swapped": swapped.map(|w| w.record()),
            "changed": changed.map(|c| c.record()),
        });
        return Ok(Outcome::new("state", &report, summary, snapshot(a)).seed(a.seed));
    }
    let m = a.m.expect("clap requires --m without --singlet");
    let q = make_qubit(LatticePoint::new(m, a.n, a.l)?, xi)?;
    let summary = format!("{}\nclass representative {}\n", q.string, q.class_representative());
    let report = json!({"point": q.point, "xi_seed": a.seed, "string": q.string, "class_representative": q.class_representative()});
    Ok(Outcome::new("state", &report, summary, snapshot(a)).seed(a.seed))
}

fn measure_cmd(a: &MeasureArgs, exec: Execution) -> Result<Outcome, Failure> {
    if let Some(samples) = a.samples {
        let (l, m) = (a.l.expect("clap"), a.m.expect("clap"));
        let s = born_sample(LatticePoint::new(m, a.n, l)?, samples, a.seed, exec);
        let summary = format!(
            "+1 in {} of {} samples: frequency {:.6}, expected {} ({:+.2}σ)\n",
            s.plus_count,
            s.samples,
            s.frequency(),
            s.point.cos2_half(),
            s.z_score()
        );
        let report = json!({"sample": s, "frequency": s.frequency(), "z_score": s.z_score()});
        return Ok(Outcome::new("measure", &report, summary, snapshot(a)).seed(a.seed));
    }
    let string: BitString = match &a.bits {
        Some(b) => b.parse()?,
        None => {
            let (l, m) = (a.l.expect("clap"), a.m.expect("clap"));
            make_qubit(LatticePoint::new(m, a.n, l)?, HiddenPermutation::from_seed(a.seed, l))?.string
        }
    };
    let t = measure(&string)?;
    let mut summary = format!("{string}\n");
    for (k, step) in t.rendered().iter().enumerate() {
        let _ = writeln!(summary, "{}{step}", if k == 0 { "  " } else { "↦ " });
    }
    let _ = writeln!(summary, "outcome {:+} after {} steps", t.outcome, t.step_count);
    let report = json!({
        "string": string,
        "steps": t.rendered(),
        "outcome": t.outcome,
        "step_count": t.step_count,
    });
    let mut out = Outcome::new("measure", &report, summary, snapshot(a));
    if a.bits.is_none() {
        out = out.seed(a.seed);
    }
    if let Some(path) = &a.trace {
        let mut buf = Vec::new();
        t.write_json_lines(&mut buf).map_err(|e| Failure::Io(e.to_string()))?;
        write_file(path, &buf).map_err(Failure::Io)?;
        out.outputs.push(path.clone());
    }
    Ok(out)
}

fn mz(a: &NivenArgs) -> Result<Outcome, Failure> {
    let r = mz_simulate(&a.turns);
    let p = &r.output_probabilities;
    let show = |x: &raqm::experiments::interference::Probability| match &x.exact {
        Some(e) => e.to_string(),
        None => format!("{:.12}", x.numeric),
    };
    let summary = format!(
        "inside definable: {}\noutput definable: {} (cos φ = {})\nprobabilities: {}, {}\n{}",
        r.inside_definable,
        r.output_definable,
        r.output_certificate.describe(),
        show(&p[0]),
        show(&p[1]),
        if r.niven_conflict { "both stages cannot be definable at once\n" } else { "" }
    );
    Ok(Outcome::new("mz", &r, summary, snapshot(a)))
}

fn delayed(a: &DelayedArgs) -> Result<Outcome, Failure> {
    let r = delayed_choice(&a.turns, matches!(a.mirror, Mirror::In));
    let summary = format!("demand {}: {} ({})\n", r.demand, if r.satisfied { "satisfied" } else { "not satisfied" }, r.certificate);
    Ok(Outcome::new("delayed-choice", &r, summary, snapshot(a)))
}

fn uncertainty(a: &UncertaintyArgs, exec: Execution) -> Result<Outcome, Failure> {
    if let Some(text) = &a.cos {
        let parts: Vec<Rational> = text
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<_, _>>()?;
        let triple: [Rational; 3] = parts
            .try_into()
            .map_err(|_| Failure::Invalid("--cos needs three fractions".into()))?;
        let rec = uncertainty_check(&DirectionCosines::Exact(triple))?;
        let summary = format!(
            "σ′σ″ = {:.6} ≥ |μ| = {:.6}: {}{}\n",
            rec.sigma_product,
            rec.abs_mean,
            rec.holds,
            if rec.equality { " (equality)" } else { "" }
        );
        return Ok(Outcome::new("uncertainty", &rec, summary, snapshot(a)));
    }
    if let (Some(c), Some(phi)) = (&a.cos_theta, &a.phi) {
        let v = uncertainty_obstruction(c, phi)?;
        let summary = format!("cos θ′ = {}\n", v.describe());
        return Ok(Outcome::new("uncertainty", &json!({"cos_theta": c, "phi": phi, "cos_theta_prime": v}), summary, snapshot(a)));
    }
    let samples = a
        .samples
        .ok_or_else(|| Failure::Invalid("give --cos, --samples or --cos-theta with --phi".into()))?;
    let rec = position_momentum_aggregate(samples, a.seed, exec)?;
    let summary = format!(
        "√⟨σ′²⟩·√⟨σ″²⟩ = {:.6} ≥ 1/2: {}\nmean |cos θ| = {:.6}\n",
        rec.bound, rec.holds, rec.mean_abs_cos
    );
    Ok(Outcome::new("uncertainty", &rec, summary, snapshot(a)).seed(a.seed))
}

fn sg(a: &SgArgs) -> Result<Outcome, Failure> {
    let v = sg_counterfactual(&NominalSetting::exact(&a.cos_ab)?, &NominalSetting::exact(&a.cos_bc)?, &a.phi_b)?;
    let summary = format!(
        "swapped order definable: {}\ncos θ_AC = {}\n{}\n",
        v.swapped_definable,
        v.verdict.third_side.describe(),
        v.verdict.reason
    );
    Ok(Outcome::new("sg", &v, summary, snapshot(a)))
}

fn bell_config(a: &BellArgs) -> Result<BellConfig, Failure> {
    let base = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
            Some(BellConfig::parse(&text)?)
        }
        None => None,
    };
    let missing = |k: &str| Failure::Invalid(format!("--{k} is required without a config file"));
    let angles = match &a.angles {
        Some(s) => parse_angles(s)?,
        None => base.as_ref().map(|b| b.angles.clone()).ok_or_else(|| missing("angles"))?,
    };
    Ok(BellConfig {
        angles,
        l: a.l.or(base.as_ref().map(|b| b.l)).ok_or_else(|| missing("L"))?,
        trials: a.trials.or(base.as_ref().map(|b| b.trials)).ok_or_else(|| missing("trials"))?,
        seed: a.seed.or(base.as_ref().map(|b| b.seed)).ok_or_else(|| missing("seed"))?,
        tolerance: a.tolerance.clone().or(base.and_then(|b| b.tolerance)),
    })
}

fn bell(a: &BellArgs, exec: Execution) -> Result<Outcome, Failure> {
    let config = bell_config(a)?;
    let r = bell_run(&config, exec)?;
    let mut summary = String::from("pair  nominal_cos  snapped_cos  correlation   std_err    −cos θ      z\n");
    for p in &r.pairs {
        let _ = writeln!(
            summary,
            "{:<4}  {:>11.6}  {:>11}  {:>11.6}  {:>8.6}  {:>9}  {:>+6.2}",
            p.pair, p.nominal_cos, p.snapped_cos.to_string(), p.correlation, p.std_error, p.prediction_snapped.to_string(), p.z_score
        );
    }
    let _ = writeln!(
        summary,
        "Bell quantity {:.6} ± {:.6} (snapped prediction {:.6}, nominal {:.6}); violates ≤ 1: {}",
        r.bell_quantity, r.bell_quantity_std_error, r.bell_quantity_snapped, r.bell_quantity_nominal, r.violates
    );
    let mut out = Outcome::new("bell", &r, summary, snapshot(&config)).seed(config.seed);
    if let Some(path) = &a.csv {
        let mut buf = Vec::new();
        r.write_csv(&mut buf)?;
        write_file(path, &buf).map_err(Failure::Io)?;
        out.outputs.push(path.clone());
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<(&'static str, Outcome), Failure> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    Ok(match &cli.command {
        Command::Sphere(a) => ("sphere", sphere(a)?),
        Command::Niven(a) => ("niven", niven(a)?),
        Command::Itc(a) => ("itc", itc(a)?),
        Command::State(a) => ("state", state(a)?),
        Command::Measure(a) => ("measure", measure_cmd(a, exec)?),
        Command::Mz(a) => ("mz", mz(a)?),
        Command::DelayedChoice(a) => ("delayed-choice", delayed(a)?),
        Command::Uncertainty(a) => ("uncertainty", uncertainty(a, exec)?),
        Command::Sg(a) => ("sg", sg(a)?),
        Command::Bell(a) => ("bell", bell(a, exec)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, mut out) = match run(&cli) {
        Ok(x) => x,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Unrealisable(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(3);
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let text = to_pretty(&out.report);
    if cli.json {
        print!("{text}");
    } else {
        print!("{}", out.summary);
    }
    let mut io = Vec::new();
    if let Some(path) = &cli.out {
        io.push(write_file(path, text.as_bytes()));
        out.outputs.insert(0, path.clone());
    }
    if let Some(path) = &cli.manifest {
        let args = std::env::args().skip(1).collect();
        let m = RunManifest::new(command, args, out.config, out.seed, out.outputs);
        io.push(write_file(path, to_pretty(&serde_json::to_value(m).expect("manifest serialises")).as_bytes()));
    }
    for r in io {
        if let Err(msg) = r {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}
