//! Seeded random sweeps comparing the exact extremum count with the sampling
//! oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::extrema::{count_extrema, oracle_extrema, ExtremaError, ORACLE_EPSILON};
use crate::scalar::{fmt_rational, rat};
use crate::{Rational, RationalCubic};

/// Uniform rational in `[lo, hi]` on a grid of `steps` equal parts.
pub fn random_rational(rng: &mut impl Rng, lo: &Rational, hi: &Rational, steps: u64) -> Rational {
    let k = rng.gen_range(0..=steps);
    lo + (hi - lo) * Rational::new(BigInt::from(k), BigInt::from(steps))
}

/// Like [`random_rational`] but never returns `lo`.
pub fn random_rational_open_lo(rng: &mut impl Rng, lo: &Rational, hi: &Rational, steps: u64) -> Rational {
    let k = rng.gen_range(1..=steps);
    lo + (hi - lo) * Rational::new(BigInt::from(k), BigInt::from(steps))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub n: usize,
    pub seed: u64,
    /// Exclusive lower end of the blend range.
    pub a_lo: Rational,
    /// Inclusive upper end of the blend range.
    pub a_hi: Rational,
    pub b_max: Rational,
    pub h_max: Rational,
    pub samples: usize,
}

impl SweepSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        SweepSpec {
            n,
            seed,
            a_lo: rat(2, 3),
            a_hi: rat(1, 1),
            b_max: rat(10, 1),
            h_max: rat(10, 1),
            samples: 100_000,
        }
    }

    /// The whole blend range lies inside `(2/3, 1]`.
    pub fn in_theorem_regime(&self) -> bool {
        self.a_lo >= rat(2, 3) && self.a_hi <= rat(1, 1)
    }

    /// Canonical `(b, h, a)` triples, deterministic in the seed.
    pub fn configs(&self) -> Vec<(Rational, Rational, Rational)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let zero = rat(0, 1);
        (0..self.n)
            .map(|_| {
                let b = random_rational(&mut rng, &zero, &self.b_max, 100_000);
                let h = random_rational_open_lo(&mut rng, &zero, &self.h_max, 100_000);
                let a = random_rational_open_lo(&mut rng, &self.a_lo, &self.a_hi, 1_000_000);
                (b, h, a)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepWitness {
    pub index: usize,
    pub b: String,
    pub h: String,
    pub a: String,
    pub count: Option<usize>,
    pub oracle: Option<usize>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n: usize,
    pub seed: u64,
    pub a_range: [String; 2],
    pub samples: usize,
    pub theorem_regime: bool,
    pub max_count: usize,
    pub violations: usize,
    pub mismatches: usize,
    pub boundary_exemptions: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub witnesses: Vec<SweepWitness>,
}

impl SweepSummary {
    /// A count above one inside the regime, or an unexplained disagreement
    /// with the oracle.
    pub fn property_violated(&self) -> bool {
        self.theorem_regime && (self.violations > 0 || self.mismatches > 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Outcome {
    Agree(usize),
    Exempt(usize),
    Mismatch { count: usize, oracle: usize },
    Violation { count: usize },
    Failed(String),
}

/// Oracle may only miss extrema lying within `ε` of an end.
fn compare(exact: &[f64], oracle: usize) -> Outcome {
    let total = exact.len();
    let interior = exact
        .iter()
        .filter(|&&t| (ORACLE_EPSILON..=1.0 - ORACLE_EPSILON).contains(&t))
        .count();
    if oracle == total {
        Outcome::Agree(total)
    } else if (interior..=total).contains(&oracle) {
        Outcome::Exempt(total)
    } else {
        Outcome::Mismatch { count: total, oracle }
    }
}

fn evaluate(b: &Rational, h: &Rational, a: &Rational, samples: usize) -> Outcome {
    let cubic = match RationalCubic::canonical(b.clone(), h.clone(), a.clone()) {
        Ok(c) => c,
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    let report = match count_extrema(&cubic) {
        Ok(r) => r,
        Err(ExtremaError::TheoremViolation { count, .. }) => return Outcome::Violation { count },
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    let exact: Vec<f64> = report.locations.iter().map(|l| l.t).collect();
    match oracle_extrema(&cubic, samples) {
        Ok(found) => compare(&exact, found.len()),
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

const MAX_WITNESSES: usize = 20;

/// Runs the sweep on the current rayon pool. Results are aggregated in
/// config order, so the summary does not depend on the worker count.
pub fn run_sweep(spec: &SweepSpec) -> SweepSummary {
    let configs = spec.configs();
    let outcomes: Vec<Outcome> = configs
        .par_iter()
        .map(|(b, h, a)| evaluate(b, h, a, spec.samples))
        .collect();

    let mut summary = SweepSummary {
        n: spec.n,
        seed: spec.seed,
        a_range: [fmt_rational(&spec.a_lo), fmt_rational(&spec.a_hi)],
        samples: spec.samples,
        theorem_regime: spec.in_theorem_regime(),
        max_count: 0,
        violations: 0,
        mismatches: 0,
        boundary_exemptions: 0,
        histogram: BTreeMap::new(),
        witnesses: Vec::new(),
    };
    for (index, ((b, h, a), outcome)) in configs.iter().zip(outcomes).enumerate() {
        let witness = |count, oracle, note: &str| SweepWitness {
            index,
            b: fmt_rational(b),
            h: fmt_rational(h),
            a: fmt_rational(a),
            count,
            oracle,
            note: note.to_string(),
        };
        let (count, w) = match outcome {
            Outcome::Agree(c) => (Some(c), None),
            Outcome::Exempt(c) => {
                summary.boundary_exemptions += 1;
                (Some(c), None)
            }
            Outcome::Mismatch { count, oracle } => {
                summary.mismatches += 1;
                (
                    Some(count),
                    Some(witness(Some(count), Some(oracle), "oracle disagrees")),
                )
            }
            Outcome::Violation { count } => {
                summary.violations += 1;
                (Some(count), Some(witness(Some(count), None, "more than one extremum")))
            }
            Outcome::Failed(msg) => {
                summary.mismatches += 1;
                (None, Some(witness(None, None, &msg)))
            }
        };
        if let Some(c) = count {
            *summary.histogram.entry(c).or_default() += 1;
            summary.max_count = summary.max_count.max(c);
        }
        if let Some(w) = w {
            if summary.witnesses.len() < MAX_WITNESSES {
                summary.witnesses.push(w);
            }
        }
    }
    summary
}
