//! Per-instance reports: all verdicts, their witnesses, and replay.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraError, FiniteDimAlgebra};
use crate::biserial::{
    is_biserial_fuller_with, is_nakayama_with, is_special_biserial, verify_fuller_certificate, FullerCertificate,
};
use crate::bisected::{verify_bisected_witness, BisectedWitness};
use crate::criteria::{
    certify_obstruction, decide_biserial, subalgebra_criterion, NeighborVariant, SubalgebraReport, Witness,
};
use crate::instance::{print_instance, Instance};
use crate::quiver::Bisection;

pub const TOOL: &str = "biserial";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 of the printed form of the instance, as lowercase hex.
pub fn instance_hash(inst: &Instance) -> String {
    hex::encode(Sha256::digest(print_instance(inst).as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub algebra: usize,
    pub nilpotency_index: usize,
    /// `dim rad^i A` for `i = 0..=m`.
    pub radical_powers: Vec<usize>,
    pub left_projectives: Vec<usize>,
    pub right_projectives: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub fuller: Option<bool>,
    pub subalgebra_full: Option<bool>,
    pub subalgebra_d4: Option<bool>,
    pub decide: Option<bool>,
    pub nakayama: Option<bool>,
    pub special_biserial: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub fuller: Option<FullerCertificate>,
    pub decide: Option<Witness>,
    pub decide_unavailable: Option<String>,
    /// Bisection under which every bad product of arrows vanishes.
    pub special_biserial: Option<Bisection>,
    pub subalgebra_full: Option<SubalgebraReport>,
    pub subalgebra_d4: Option<SubalgebraReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub instance: String,
    pub p: u32,
    pub dims: Dims,
    pub verdicts: Verdicts,
    pub witnesses: Witnesses,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings_ms: Option<BTreeMap<String, f64>>,
    pub disagreements: Vec<String>,
    /// Methods that stopped on a budget.
    pub errors: Vec<String>,
    pub tool: String,
    pub version: String,
    pub instance_hash: String,
}

impl Report {
    pub fn budget_exhausted(&self) -> bool {
        !self.errors.is_empty()
    }
}

fn projective_dims(alg: &FiniteDimAlgebra) -> Vec<usize> {
    (0..alg.quiver().num_vertices())
        .map(|v| alg.basis().iter().filter(|p| p.source() == v).count())
        .collect()
}

/// Pairwise comparison of the verdicts that are present.
pub fn disagreements(v: &Verdicts) -> Vec<String> {
    let named = [
        ("fuller", v.fuller),
        ("subalgebra_full", v.subalgebra_full),
        ("subalgebra_d4", v.subalgebra_d4),
        ("decide", v.decide),
    ];
    let mut out = Vec::new();
    for (k, (n1, a)) in named.iter().enumerate() {
        for (n2, b) in &named[k + 1..] {
            if let (Some(a), Some(b)) = (a, b) {
                if a != b {
                    out.push(format!("{}={} but {}={}", n1, a, n2, b));
                }
            }
        }
    }
    out
}

/// Runs every method on the instance.
pub fn run_check(inst: &Instance, timings: bool) -> Result<Report, AlgebraError> {
    let opts = inst.options;
    let mut times = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, times: &mut BTreeMap<String, f64>| {
        times.insert(name.to_string(), clock.elapsed().as_secs_f64() * 1e3);
        clock = Instant::now();
    };

    let alg = FiniteDimAlgebra::build(&inst.presentation, opts.max_nilpotency)?;
    let op = alg.opposite();
    lap("build", &mut times);

    let mut verdicts = Verdicts::default();
    let mut witnesses = Witnesses::default();
    let mut errors = Vec::new();

    match is_biserial_fuller_with(&alg, &op, opts.fuller_bound) {
        Ok(out) => {
            verdicts.fuller = Some(out.biserial);
            witnesses.fuller = out.certificate;
        }
        Err(e) => errors.push(format!("fuller: {}", e)),
    }
    lap("fuller", &mut times);

    for (variant, name) in [(NeighborVariant::Full, "subalgebra_full"), (NeighborVariant::D4, "subalgebra_d4")] {
        match subalgebra_criterion(&alg, variant, opts.fuller_bound) {
            Ok(r) => {
                let verdict = Some(r.biserial);
                if variant == NeighborVariant::Full {
                    verdicts.subalgebra_full = verdict;
                    witnesses.subalgebra_full = Some(r);
                } else {
                    verdicts.subalgebra_d4 = verdict;
                    witnesses.subalgebra_d4 = Some(r);
                }
            }
            Err(e) => errors.push(format!("{}: {}", name, e)),
        }
        lap(name, &mut times);
    }

    match decide_biserial(&alg, &op, &opts.decide_options()) {
        Ok(d) => {
            verdicts.decide = d.witness_verdict;
            witnesses.decide = d.witness;
            witnesses.decide_unavailable = d.witness_unavailable;
        }
        Err(e) => errors.push(format!("decide: {}", e)),
    }
    lap("decide", &mut times);

    verdicts.nakayama = Some(is_nakayama_with(&alg, &op));
    let sb = is_special_biserial(&alg);
    verdicts.special_biserial = Some(sb.is_some());
    witnesses.special_biserial = sb;
    lap("special", &mut times);

    let rad = alg.radical_dims();
    Ok(Report {
        instance: print_instance(inst),
        p: alg.field().modulus(),
        dims: Dims {
            algebra: alg.dim(),
            nilpotency_index: alg.nilpotency_index(),
            radical_powers: rad,
            left_projectives: projective_dims(&alg),
            right_projectives: projective_dims(&op),
        },
        disagreements: disagreements(&verdicts),
        verdicts,
        witnesses,
        timings_ms: timings.then_some(times),
        errors,
        tool: TOOL.to_string(),
        version: VERSION.to_string(),
        instance_hash: instance_hash(inst),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayOutcome {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ReplayOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-verifies a bisected witness; empty when valid.
pub fn replay_bisected(alg: &FiniteDimAlgebra, w: &BisectedWitness) -> Vec<String> {
    verify_bisected_witness(alg, w).iter().map(|d| format!("{:?}", d)).collect()
}

/// Re-verifies every witness in the report against the instance.
pub fn replay_report(report: &Report, inst: &Instance) -> ReplayOutcome {
    let mut out = ReplayOutcome::default();
    if report.instance_hash != instance_hash(inst) {
        out.failures.push("instance hash does not match".to_string());
        return out;
    }
    let alg = match FiniteDimAlgebra::build(&inst.presentation, inst.options.max_nilpotency) {
        Ok(a) => a,
        Err(e) => {
            out.failures.push(e.to_string());
            return out;
        }
    };
    let op = alg.opposite();
    let v = &report.verdicts;
    let w = &report.witnesses;
    if let Some(cert) = &w.fuller {
        out.checked += 1;
        if v.fuller != Some(true) {
            out.failures.push("fuller certificate attached to a negative verdict".to_string());
        }
        if let Err(e) = verify_fuller_certificate(&alg, &op, cert) {
            out.failures.push(format!("fuller: {}", e));
        }
    }
    match &w.decide {
        Some(Witness::Bisected(bw)) => {
            out.checked += 1;
            if v.decide != Some(true) {
                out.failures.push("bisected witness attached to a negative verdict".to_string());
            }
            out.failures.extend(replay_bisected(&alg, bw).into_iter().map(|d| format!("bisected: {}", d)));
        }
        Some(Witness::Obstruction(ow)) => {
            out.checked += 1;
            if v.decide != Some(false) {
                out.failures.push("obstruction attached to a positive verdict".to_string());
            }
            let rep = certify_obstruction(&alg, &op, ow);
            out.failures.extend(rep.diagnostics.into_iter().map(|d| format!("obstruction: {}", d)));
            if let Some(t) = &ow.triple {
                if t.transcript != rep.transcript {
                    out.failures.push("obstruction: search transcript differs".to_string());
                }
            }
        }
        None => {}
    }
    if let Some(b) = &w.special_biserial {
        out.checked += 1;
        out.failures.extend(
            replay_bisected(&alg, &BisectedWitness::identity(&alg, b.clone()))
                .into_iter()
                .map(|d| format!("special biserial: {}", d)),
        );
    }
    out
}
