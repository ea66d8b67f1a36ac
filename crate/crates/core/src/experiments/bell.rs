//! Bell inequality harness and the definability of the Bell sum.
//!
//! Each of the three setting pairs is an independent sub-ensemble. A trial
//! draws ξ, builds the singlet at the snapped relative angle and reads both
//! strings at the position ξ selects.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{RaqmError, Result};
use crate::exact::{itc_verdict, ItcVerdict};
use crate::exec::{derive_seed, map_chunks, Execution};
use crate::experiments::nominal::snap_to_lattice;
use crate::numeric::Real;
use crate::qubit::{make_singlet, HiddenPermutation};
use crate::rational::{Rational, RationalAngle};

pub const MIN_TRIALS: u64 = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellConfig {
    /// Nominal analyser directions A, B, C in turns.
    pub angles: [RationalAngle; 3],
    #[serde(rename = "L")]
    pub l: usize,
    pub trials: u64,
    pub seed: u64,
    /// Neighbourhood on cos θ; one singlet lattice step (2/L) when absent.
    pub tolerance: Option<Rational>,
}

impl BellConfig {
    pub fn tolerance_or_default(&self) -> Rational {
        self.tolerance
            .clone()
            .unwrap_or_else(|| Rational::new(2, self.l.max(1) as i64))
    }

    /// Reads `key = value` lines; `#` starts a comment. Keys: angles
    /// (comma-separated turns), L, trials, seed, tolerance.
    pub fn parse(text: &str) -> Result<BellConfig> {
        let (mut angles, mut l, mut trials, mut seed, mut tolerance) = (None, None, None, None, None);
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| RaqmError::Config(format!("line {}: expected key = value", no + 1)))?;
            let value = value.trim();
            let bad = |what: &str| RaqmError::Config(format!("line {}: bad {what} '{value}'", no + 1));
            match key.trim() {
                "angles" => angles = Some(parse_angles(value)?),
                "L" => l = Some(value.parse().map_err(|_| bad("L"))?),
                "trials" => trials = Some(value.parse().map_err(|_| bad("trials"))?),
                "seed" => seed = Some(value.parse().map_err(|_| bad("seed"))?),
                "tolerance" => tolerance = Some(value.parse().map_err(|_| bad("tolerance"))?),
                other => return Err(RaqmError::Config(format!("line {}: unknown key '{other}'", no + 1))),
            }
        }
        let missing = |k: &str| RaqmError::Config(format!("missing key '{k}'"));
        Ok(BellConfig {
            angles: angles.ok_or_else(|| missing("angles"))?,
            l: l.ok_or_else(|| missing("L"))?,
            trials: trials.ok_or_else(|| missing("trials"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
            tolerance,
        })
    }
}

/// "0,1/6,1/3" as three angles in turns.
pub fn parse_angles(s: &str) -> Result<[RationalAngle; 3]> {
    let parts: Vec<RationalAngle> = s
        .split(',')
        .map(|p| p.trim().parse::<RationalAngle>())
        .collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<_>| RaqmError::Config(format!("need three angles, got {}", v.len())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairStats {
    pub pair: String,
    /// Relative angle between the two analysers, in turns.
    pub nominal_turns: Rational,
    pub nominal_cos: f64,
    pub snapped_cos: Rational,
    pub trials: u64,
    pub sum_products: i64,
    pub correlation: f64,
    pub std_error: f64,
    /// −cos θ at the snapped angle.
    pub prediction_snapped: Rational,
    /// −cos θ at the nominal angle.
    pub prediction_nominal: f64,
    /// (correlation − prediction_snapped) in binomial standard errors.
    pub z_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedSchedule {
    pub base: u64,
    /// ξ for trial t of pair p is seeded by derive_seed(base, p, t).
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellReport {
    pub config: BellConfig,
    pub tolerance: Rational,
    pub pairs: Vec<PairStats>,
    /// |Co(A,B) − Co(A,C)| − Co(B,C) from the simulated correlations.
    pub bell_quantity: f64,
    pub bell_quantity_std_error: f64,
    pub bell_quantity_snapped: f64,
    pub bell_quantity_nominal: f64,
    pub violates: bool,
    pub seeds: SeedSchedule,
}

impl BellReport {
    /// Per-pair CSV table with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| RaqmError::Parse(e.to_string());
        w.write_record([
            "pair",
            "nominal_turns",
            "nominal_cos",
            "snapped_cos",
            "trials",
            "correlation",
            "std_error",
            "prediction_snapped",
            "prediction_nominal",
            "z_score",
        ])
        .map_err(io)?;
        for p in &self.pairs {
            w.write_record([
                p.pair.clone(),
                p.nominal_turns.to_string(),
                p.nominal_cos.to_string(),
                p.snapped_cos.to_string(),
                p.trials.to_string(),
                p.correlation.to_string(),
                p.std_error.to_string(),
                p.prediction_snapped.to_string(),
                p.prediction_nominal.to_string(),
                p.z_score.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| RaqmError::Parse(e.to_string()))
    }
}

fn bell_quantity(ab: f64, ac: f64, bc: f64) -> f64 {
    (ab - ac).abs() - bc
}

/// Sum of A·B over `trials` singlets at `cos` for pair `stream`.
fn run_pair(cos: &Rational, l: usize, trials: u64, seed: u64, stream: u64, exec: Execution) -> Result<i64> {
    let sums = map_chunks(exec, trials as usize, |range| -> Result<i64> {
        let mut s = 0i64;
        for t in range {
            let xi = HiddenPermutation::from_seed(derive_seed(seed, stream, t as u64), l);
            let (a, b) = make_singlet(cos, l, xi)?.outcomes();
            s += i64::from(a * b);
        }
        Ok(s)
    });
    sums.into_iter().sum()
}

pub fn bell_run(config: &BellConfig, exec: Execution) -> Result<BellReport> {
    let l = config.l;
    if config.trials < MIN_TRIALS {
        return Err(RaqmError::Config(format!(
            "{} trials per pair is too few; at least {MIN_TRIALS} are needed",
            config.trials
        )));
    }
    if l < 2 || l % 2 != 0 {
        return Err(RaqmError::Unrealisable(format!("singlet needs even L ≥ 2, got {l}")));
    }
    let tolerance = config.tolerance_or_default();
    let [a, b, c] = &config.angles;
    let pairs = [("AB", a, b), ("AC", a, c), ("BC", b, c)];
    let n = config.trials as f64;
    let mut stats = Vec::with_capacity(3);
    for (stream, (label, x, y)) in pairs.into_iter().enumerate() {
        let rel = y.turns() - x.turns();
        let nominal_cos = Real::cos_turns(&rel).to_f64();
        // singlet-realisable cosines are 4j/L − 1: the L/2 lattice
        let setting = snap_to_lattice(nominal_cos, l / 2, &tolerance)?;
        let snapped = setting.exact_cos();
        let sum = run_pair(&snapped, l, config.trials, config.seed, stream as u64, exec)?;
        let corr = sum as f64 / n;
        let pred = -&snapped;
        let p = pred.to_f64();
        let sd_pred = ((1.0 - p * p) / n).sqrt();
        let z_score = if sd_pred > 0.0 {
            (corr - p) / sd_pred
        } else if corr == p {
            0.0
        } else {
            f64::INFINITY
        };
        stats.push(PairStats {
            pair: label.into(),
            nominal_turns: rel,
            nominal_cos,
            snapped_cos: snapped,
            trials: config.trials,
            sum_products: sum,
            correlation: corr,
            std_error: ((1.0 - corr * corr) / n).sqrt(),
            prediction_snapped: pred,
            prediction_nominal: -nominal_cos,
            z_score,
        });
    }
    let q = |f: &dyn Fn(&PairStats) -> f64| bell_quantity(f(&stats[0]), f(&stats[1]), f(&stats[2]));
    let bell = q(&|p| p.correlation);
    let se = stats.iter().map(|p| p.std_error.powi(2)).sum::<f64>().sqrt();
    Ok(BellReport {
        config: config.clone(),
        tolerance,
        bell_quantity: bell,
        bell_quantity_std_error: se,
        bell_quantity_snapped: q(&|p| p.prediction_snapped.to_f64()),
        bell_quantity_nominal: q(&|p| p.prediction_nominal),
        violates: bell > 1.0,
        pairs: stats,
        seeds: SeedSchedule {
            base: config.seed,
            rule: "derive_seed(base, pair_index, trial_index) with pairs AB=0, AC=1, BC=2".into(),
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BellsumReport {
    pub cos_ab: Rational,
    pub cos_ac: Rational,
    pub phi_a: RationalAngle,
    pub real_world_definable: bool,
    /// Free choice of an exact C near the nominal one: always possible.
    pub first_counterfactual_definable: bool,
    /// cos θ_BC must also be rational with interior angle φ_A.
    pub second_counterfactual: ItcVerdict,
    /// The per-λ triple product in the Bell sum is defined.
    pub bellsum_defined: bool,
    pub degenerate: bool,
}

/// The Bell sum multiplies outcomes for (A,B), (A,C) and (B,C) on the same
/// λ. With cos θ_AB and cos θ_AC rational and φ_A a rational angle, the
/// third pair is definable only if the triangle admits a rational cos θ_BC.
pub fn bellsum_definability(cos_ab: &Rational, cos_ac: &Rational, phi_a: &RationalAngle) -> Result<BellsumReport> {
    let verdict = itc_verdict(cos_ab, cos_ac, phi_a)?;
    Ok(BellsumReport {
        cos_ab: cos_ab.clone(),
        cos_ac: cos_ac.clone(),
        phi_a: phi_a.clone(),
        real_world_definable: true,
        first_counterfactual_definable: true,
        bellsum_defined: verdict.possible,
        degenerate: verdict.degenerate,
        second_counterfactual: verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MiCandidate {
    pub phi_a: RationalAngle,
    /// λ values (hidden permutations) for which all three terms are defined.
    pub defined_lambdas: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasurementIndependence {
    pub lambdas: u64,
    pub candidates: Vec<MiCandidate>,
    /// The λ schedule is the same whatever the nominal setting.
    pub nominal_independent: bool,
    /// The defined-λ set is the same for every exact setting.
    pub exact_independent: bool,
}

/// Samples λ from a schedule that never looks at the settings, then counts
/// for each exact φ_A the λ on which the Bell sum's three terms are all
/// defined. Definability depends on the exact setting, so the defined set
/// changes across candidates inside one nominal neighbourhood.
pub fn measurement_independence_scan(
    cos_ab: &Rational,
    cos_ac: &Rational,
    candidates: &[RationalAngle],
    lambdas: u64,
    l: usize,
    seed: u64,
) -> Result<MeasurementIndependence> {
    let schedule = |_: &RationalAngle| -> Vec<HiddenPermutation> {
        (0..lambdas)
            .map(|i| HiddenPermutation::from_seed(derive_seed(seed, 3, i), l))
            .collect()
    };
    let reference = candidates.first().map(schedule);
    let mut nominal_independent = true;
    let mut out = Vec::with_capacity(candidates.len());
    for phi in candidates {
        let lam = schedule(phi);
        nominal_independent &= reference.as_ref() == Some(&lam);
        let defined = bellsum_definability(cos_ab, cos_ac, phi)?.bellsum_defined;
        out.push(MiCandidate {
            phi_a: phi.clone(),
            defined_lambdas: if defined { lam.len() as u64 } else { 0 },
        });
    }
    let exact_independent = out.windows(2).all(|w| w[0].defined_lambdas == w[1].defined_lambdas);
    Ok(MeasurementIndependence {
        lambdas,
        candidates: out,
        nominal_independent,
        exact_independent,
    })
}
