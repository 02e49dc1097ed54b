//! Evaluation of fuzzed instances: bound reports, invariant checks and the
//! `(k, t)` observations for `D = Der(L)`.
//!
//! With the `parallel` feature instances are evaluated on the rayon pool;
//! [`evaluate_all_sequential`] is always available. Both return results
//! sorted by instance index, so rendered output is identical.

use std::fmt::Write as _;

use num_bigint::BigUint;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::bounds::{
    abelianization_step, verify_corollaries, verify_theorem_a, verify_theorem_b, BoundReport,
};
use crate::derivations::DerivationSet;
use crate::fuzz::{
    fuzz_generate, instance_rng, pair_derivation_sets, DerivationKind, FuzzConfig, FuzzError,
    FuzzItem,
};
use crate::invariants::{
    check_algebra, check_basis_invariance, check_derivation_set, InvariantFailure,
};
use crate::report::render_kv;

/// Knobs for the per-instance work beyond the bound reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Corollaries are evaluated for `series_index` in `1..=max_series_index`.
    pub max_series_index: usize,
    pub invariants: bool,
    pub basis_changes: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_series_index: 3,
            invariants: true,
            basis_changes: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetOutcome {
    pub kind: DerivationKind,
    pub dim: usize,
    pub reports: Vec<BoundReport>,
    /// `(lhs, rhs)` of the abelianization step.
    pub step: Option<(usize, BigUint)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub index: usize,
    pub origin: String,
    pub dim: usize,
    pub lie: bool,
    pub sets: Vec<SetOutcome>,
    /// Corollary reports, one batch per series index.
    pub corollaries: Vec<BoundReport>,
    /// `(k, t)` for `D = Der(L)`, `t = codim A_L(Der(L))`.
    pub der_k_t: (usize, usize),
    /// `dim ζ^l, dim ζ^r, dim ζ`.
    pub centers: [usize; 3],
    pub invariant_failures: Vec<InvariantFailure>,
    pub invariants_checked: usize,
    pub errors: Vec<String>,
}

impl InstanceOutcome {
    pub fn violations(&self) -> usize {
        self.sets
            .iter()
            .flat_map(|s| &s.reports)
            .chain(&self.corollaries)
            .filter(|r| r.is_violation())
            .count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0 && self.invariant_failures.is_empty() && self.errors.is_empty()
    }
}

pub fn evaluate(item: &FuzzItem, seed: u64, opts: EvalOptions) -> InstanceOutcome {
    let a = &item.algebra;
    let mut rng = instance_rng(seed, item.index);
    let mut errors = Vec::new();
    let mut failures = Vec::new();
    let mut checked = 0;

    let pairs = pair_derivation_sets(&mut rng, a);
    let mut sets = Vec::with_capacity(pairs.len());
    let mut der_k_t = (0, 0);
    for (kind, d) in &pairs {
        let mut reports = Vec::new();
        match verify_theorem_a(d) {
            Ok(r) => {
                if *kind == DerivationKind::Der {
                    let q = |n: &str| {
                        r.quantity(n)
                            .and_then(|v| usize::try_from(v).ok())
                            .unwrap_or(0)
                    };
                    der_k_t = (q("k"), q("t"));
                }
                reports.push(r);
            }
            Err(e) => errors.push(format!("{}: theorem_a: {e}", kind.name())),
        }
        match verify_theorem_b(d) {
            Ok(r) => reports.push(r),
            Err(e) => errors.push(format!("{}: theorem_b: {e}", kind.name())),
        }
        let step = match abelianization_step(d) {
            Ok((lhs, rhs)) => {
                if BigUint::from(lhs) > rhs {
                    failures.push(InvariantFailure {
                        name: "abelianization_step",
                        detail: format!("{}: {lhs} > {rhs}", kind.name()),
                    });
                }
                Some((lhs, rhs))
            }
            Err(e) => {
                errors.push(format!("{}: abelianization_step: {e}", kind.name()));
                None
            }
        };
        if opts.invariants {
            let r = check_derivation_set(d);
            checked += r.checked;
            failures.extend(r.failures);
        }
        sets.push(SetOutcome {
            kind: *kind,
            dim: d.dim(),
            reports,
            step,
        });
    }

    let mut corollaries = Vec::new();
    for s in 1..=opts.max_series_index {
        match verify_corollaries(a, s) {
            Ok(rs) => corollaries.extend(rs),
            Err(e) => errors.push(format!("corollaries({s}): {e}")),
        }
    }
    if opts.invariants {
        let r = check_algebra(&mut rng, a);
        checked += r.checked;
        failures.extend(r.failures);
        let all: Vec<&DerivationSet> = pairs.iter().map(|(_, d)| d).collect();
        let r = check_basis_invariance(&mut rng, &all, opts.basis_changes);
        checked += r.checked;
        failures.extend(r.failures);
    }

    let c = a.centers();
    InstanceOutcome {
        index: item.index,
        centers: [c.left.dim(), c.right.dim(), c.center.dim()],
        origin: item.origin.clone(),
        dim: a.dim(),
        lie: a.is_lie(),
        sets,
        corollaries,
        der_k_t,
        invariant_failures: failures,
        invariants_checked: checked,
        errors,
    }
}

pub fn evaluate_all_sequential(
    items: &[FuzzItem],
    seed: u64,
    opts: EvalOptions,
) -> Vec<InstanceOutcome> {
    let mut out: Vec<_> = items.iter().map(|i| evaluate(i, seed, opts)).collect();
    out.sort_by_key(|o| o.index);
    out
}

#[cfg(feature = "parallel")]
pub fn evaluate_all_parallel(
    items: &[FuzzItem],
    seed: u64,
    opts: EvalOptions,
) -> Vec<InstanceOutcome> {
    let mut out: Vec<_> = items.par_iter().map(|i| evaluate(i, seed, opts)).collect();
    out.sort_by_key(|o| o.index);
    out
}

/// Parallel when the `parallel` feature is on, sequential otherwise.
pub fn evaluate_all(items: &[FuzzItem], seed: u64, opts: EvalOptions) -> Vec<InstanceOutcome> {
    #[cfg(feature = "parallel")]
    {
        evaluate_all_parallel(items, seed, opts)
    }
    #[cfg(not(feature = "parallel"))]
    {
        evaluate_all_sequential(items, seed, opts)
    }
}

/// A whole fuzz run: generated instances, their outcomes and the
/// generator's acceptance counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzRun {
    pub config: FuzzConfig,
    pub outcomes: Vec<InstanceOutcome>,
    pub accepted: usize,
    pub attempts: usize,
}

impl FuzzRun {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(InstanceOutcome::passed)
    }

    pub fn violations(&self) -> usize {
        self.outcomes.iter().map(InstanceOutcome::violations).sum()
    }
}

pub fn run_fuzz(cfg: FuzzConfig, opts: EvalOptions) -> Result<FuzzRun, FuzzError> {
    let mut stream = fuzz_generate(cfg)?;
    let items: Vec<FuzzItem> = stream.by_ref().collect();
    let (accepted, attempts) = stream.acceptance();
    Ok(FuzzRun {
        config: cfg,
        outcomes: evaluate_all(&items, cfg.seed, opts),
        accepted,
        attempts,
    })
}

/// `key = value` rendering of a run; byte-identical for identical configs.
pub fn render_run_kv(run: &FuzzRun) -> String {
    let mut out = String::new();
    let c = &run.config;
    let _ = writeln!(out, "config.dim = {}", c.dim);
    let _ = writeln!(out, "config.field = {}", c.field);
    let _ = writeln!(out, "config.count = {}", c.count);
    let _ = writeln!(out, "config.seed = {}", c.seed);
    let _ = writeln!(out, "config.strategy = {}", c.strategy);
    for o in &run.outcomes {
        let p = format!("instance.{}", o.index);
        let _ = writeln!(out, "{p}.origin = {}", o.origin);
        let _ = writeln!(out, "{p}.lie = {}", o.lie);
        let _ = writeln!(
            out,
            "{p}.centers = {} {} {}",
            o.centers[0], o.centers[1], o.centers[2]
        );
        for s in &o.sets {
            let sp = format!("{p}.{}.", s.kind.name());
            let _ = writeln!(out, "{sp}dim_d = {}", s.dim);
            out.push_str(&render_kv(&s.reports, &sp));
            if let Some((lhs, rhs)) = &s.step {
                let _ = writeln!(out, "{sp}abelianization_step.lhs = {lhs}");
                let _ = writeln!(out, "{sp}abelianization_step.rhs = {rhs}");
            }
        }
        for (i, chunk) in o.corollaries.chunks(6).enumerate() {
            out.push_str(&render_kv(chunk, &format!("{p}.series_index.{}.", i + 1)));
        }
        let _ = writeln!(out, "{p}.der.k_t = {} {}", o.der_k_t.0, o.der_k_t.1);
        let _ = writeln!(out, "{p}.invariants.checked = {}", o.invariants_checked);
        let _ = writeln!(
            out,
            "{p}.invariants.failed = {}",
            o.invariant_failures.len()
        );
        for f in &o.invariant_failures {
            let _ = writeln!(out, "{p}.invariants.failure = {}", f.name);
        }
        for e in &o.errors {
            let _ = writeln!(out, "{p}.error = {e}");
        }
    }
    out.push_str(&render_summary(run));
    out
}

fn render_summary(run: &FuzzRun) -> String {
    let mut out = String::new();
    let os = &run.outcomes;
    let pairs: usize = os.iter().map(|o| o.sets.len()).sum();
    let applicable = os
        .iter()
        .flat_map(|o| o.sets.iter().flat_map(|s| &s.reports).chain(&o.corollaries))
        .filter(|r| r.applicable)
        .count();
    let lie = os.iter().filter(|o| o.lie).count();
    let k_le_t = os.iter().filter(|o| o.der_k_t.0 <= o.der_k_t.1).count();
    let lr_mismatch = os.iter().filter(|o| o.centers[0] != o.centers[1]).count();
    let _ = writeln!(out, "summary.instances = {}", os.len());
    let _ = writeln!(out, "summary.pairs = {pairs}");
    let _ = writeln!(out, "summary.lie = {lie}");
    let _ = writeln!(out, "summary.lr_dim_mismatch = {lr_mismatch}");
    let _ = writeln!(out, "summary.applicable_reports = {applicable}");
    let _ = writeln!(out, "summary.violations = {}", run.violations());
    let _ = writeln!(
        out,
        "summary.invariant_failures = {}",
        os.iter().map(|o| o.invariant_failures.len()).sum::<usize>()
    );
    let _ = writeln!(
        out,
        "summary.errors = {}",
        os.iter().map(|o| o.errors.len()).sum::<usize>()
    );
    let _ = writeln!(out, "summary.der_k_le_t = {k_le_t}/{}", os.len());
    let _ = writeln!(
        out,
        "summary.acceptance = {}/{}",
        run.accepted, run.attempts
    );
    let _ = writeln!(out, "summary.passed = {}", run.passed());
    out
}

/// Short human-readable summary.
pub fn render_run_text(run: &FuzzRun) -> String {
    let mut out = String::new();
    let c = &run.config;
    let _ = writeln!(
        out,
        "fuzz: {} instances, dim {}, field {}, seed {}, strategy {}",
        run.outcomes.len(),
        c.dim,
        c.field,
        c.seed,
        c.strategy
    );
    for o in &run.outcomes {
        if o.passed() {
            continue;
        }
        let _ = writeln!(out, "instance {} ({}): FAILED", o.index, o.origin);
        for r in o.sets.iter().flat_map(|s| &s.reports).chain(&o.corollaries) {
            if r.is_violation() {
                let _ = writeln!(out, "  {} violated: {} > {}", r.claim, r.lhs, r.rhs);
            }
        }
        for f in &o.invariant_failures {
            let _ = writeln!(out, "  {f}");
        }
        for e in &o.errors {
            let _ = writeln!(out, "  error: {e}");
        }
    }
    let _ = writeln!(
        out,
        "violations {}, acceptance {}/{}, {}",
        run.violations(),
        run.accepted,
        run.attempts,
        if run.passed() {
            "all checks passed"
        } else {
            "FAILED"
        }
    );
    out
}
