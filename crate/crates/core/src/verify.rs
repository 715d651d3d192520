//! Named verification suites with machine-readable reports.
//!
//! Every check runs independently; a failing or panicking check is recorded
//! and the remaining checks still run.

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::braid::{
    braid_relation_residual, braid_relations_exact, build_exact, build_numeric, closed_form_burau,
    closed_form_distinguished, closed_form_lkb, compare_formulas, compare_matrices, corrjk_change_of_basis,
    full_space_matrices, full_space_matrices_printed, inverse_residual, is_exact_inverse, BraidMatrices, BuildOptions,
    Route,
};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::oscillator::{
    apply_generator, apply_o, casimir_action, coproduct_action, inner_product, operator_matrix, star_adjoint_check,
    ActionScope, ExactModel, Generator, LabelSet, Model, NumericModel, RepLabel, TensorState, WeightVector,
};
use crate::params::{Draw, ParamSampler};
use crate::weightspace::{
    apply_monomial, counts, enumerate_weight_basis, exact_span_equal, lowering_residual, lowest_weight_kernel,
    lowest_weight_kernel_exact, lowest_weight_monomials, lowest_weight_monomials_exact, monomial_exponents,
    mutual_projection_residual, two_slot_descendants, verify_decomposition, SectorChoice,
};

/// Outcome of one check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Largest residual observed; `0` for purely structural checks.
    pub residual: f64,
    pub tolerance: f64,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub parameters: Value,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    pub max_residual: f64,
    pub runtime_seconds: f64,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Spaces,
    Braid,
    All,
}

impl Suite {
    pub fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Algebra, Suite::Spaces, Suite::Braid],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "spaces" => Ok(Suite::Spaces),
            "braid" => Ok(Suite::Braid),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse(format!("unknown suite {s:?} (algebra, spaces, braid, all)"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Algebra => "algebra",
            Suite::Spaces => "spaces",
            Suite::Braid => "braid",
            Suite::All => "all",
        })
    }
}

/// Runs the requested suites in order.
pub fn run(suite: Suite, seed: u64, tol: &Tolerances) -> Vec<SuiteReport> {
    suite
        .members()
        .into_iter()
        .map(|s| match s {
            Suite::Algebra => suite_algebra(seed, tol),
            Suite::Spaces => suite_spaces(seed, tol),
            Suite::Braid => suite_braid(seed, tol),
            Suite::All => unreachable!(),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// check plumbing

struct Outcome {
    passed: bool,
    residual: f64,
    tolerance: f64,
    detail: Value,
}

impl Outcome {
    fn within(residual: f64, tolerance: f64, detail: Value) -> Self {
        Self { passed: residual.is_finite() && residual <= tolerance, residual, tolerance, detail }
    }

    fn flag(passed: bool, detail: Value) -> Self {
        Self { passed, residual: 0.0, tolerance: 0.0, detail }
    }
}

type CheckFn = Box<dyn Fn() -> Result<Outcome> + Send + Sync>;

struct Check {
    name: String,
    run: CheckFn,
}

fn check(name: impl Into<String>, f: impl Fn() -> Result<Outcome> + Send + Sync + 'static) -> Check {
    Check { name: name.into(), run: Box::new(f) }
}

fn execute(suite: &str, seed: u64, parameters: Value, checks: Vec<Check>) -> SuiteReport {
    let start = Instant::now();
    let results: Vec<CheckResult> = checks
        .par_iter()
        .map(|c| {
            let outcome = catch_unwind(AssertUnwindSafe(|| (c.run)()));
            match outcome {
                Ok(Ok(o)) => CheckResult {
                    name: c.name.clone(),
                    passed: o.passed,
                    residual: o.residual,
                    tolerance: o.tolerance,
                    detail: o.detail,
                },
                Ok(Err(e)) => CheckResult {
                    name: c.name.clone(),
                    passed: false,
                    residual: f64::INFINITY,
                    tolerance: 0.0,
                    detail: json!({ "error": e.to_string() }),
                },
                Err(p) => {
                    let msg = p
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_else(|| "panic".into());
                    CheckResult {
                        name: c.name.clone(),
                        passed: false,
                        residual: f64::INFINITY,
                        tolerance: 0.0,
                        detail: json!({ "panic": msg }),
                    }
                }
            }
        })
        .collect();
    let max_residual = results.iter().map(|r| r.residual).fold(0.0, f64::max);
    SuiteReport {
        suite: suite.into(),
        seed,
        parameters,
        passed: results.iter().all(|r| r.passed),
        checks: results,
        max_residual,
        runtime_seconds: start.elapsed().as_secs_f64(),
    }
}

fn draw_json(d: &Draw) -> Value {
    json!({ "q": d.q, "labels": d.labels.to_json() })
}

fn model_of(d: &Draw) -> Result<NumericModel> {
    NumericModel::new(d.q, d.labels.clone())
}

// ---------------------------------------------------------------------------
// algebra

/// Largest `|lhs(e) - rhs(e)| / max(1, |lhs(e)|, |rhs(e)|)` over basis states.
fn identity_residual<F, G>(states: &[TensorState], lhs: F, rhs: G) -> f64
where
    F: Fn(&WeightVector<f64>) -> WeightVector<f64>,
    G: Fn(&WeightVector<f64>) -> WeightVector<f64>,
{
    states
        .iter()
        .map(|s| {
            let e = WeightVector::basis(s.clone());
            let (l, r) = (lhs(&e), rhs(&e));
            l.sub(&r).norm() / l.norm().max(r.norm()).max(1.0)
        })
        .fold(0.0, f64::max)
}

fn commutator<A, B>(a: A, b: B) -> impl Fn(&WeightVector<f64>) -> WeightVector<f64>
where
    A: Fn(&WeightVector<f64>) -> WeightVector<f64>,
    B: Fn(&WeightVector<f64>) -> WeightVector<f64>,
{
    move |v| a(&b(v)).sub(&b(&a(v)))
}

fn zero_map(_: &WeightVector<f64>) -> WeightVector<f64> {
    WeightVector::zero()
}

/// Multiplies each term by `[gamma]` of the label sitting in `slot`.
fn slot_qnum(model: &NumericModel, slot: usize, v: &WeightVector<f64>) -> WeightVector<f64> {
    v.map_states(|s, c, out| out.add_term(s.clone(), c * model.qnum(s.assignment[slot])))
}

/// Multiplies each term by `[gamma_k + gamma_{k+1}]` of the pair at `k`.
fn pair_qnum(model: &NumericModel, k: usize, v: &WeightVector<f64>) -> WeightVector<f64> {
    v.map_states(|s, c, out| {
        let g = model.label(s.assignment[k]).gamma + model.label(s.assignment[k + 1]).gamma;
        out.add_term(s.clone(), c * model.q_number(g));
    })
}

/// Residuals of the defining relations, slot-wise and through the coproduct,
/// and of the intertwiner relations, on every weight space up to `max_total`.
fn algebra_residuals(model: &NumericModel, max_total: u32) -> Result<Value> {
    let n = model.labels().n();
    let mut out = serde_json::Map::new();
    let mut record = |name: String, r: f64| {
        let e = out.entry(name).or_insert(json!(0.0));
        *e = json!(e.as_f64().unwrap_or(0.0).max(r));
    };
    let gen = |g: Generator, j: usize| move |v: &WeightVector<f64>| apply_generator(model, g, j, v);
    let cop = |g: Generator| move |v: &WeightVector<f64>| coproduct_action(model, g, v);
    for total in 0..=max_total {
        let states = enumerate_weight_basis(model.labels(), total, &SectorChoice::All)?.states;
        for j in 0..n {
            record(
                "lower_raise_is_qnum".into(),
                identity_residual(&states, commutator(gen(Generator::Lower, j), gen(Generator::Raise, j)), |v| {
                    slot_qnum(model, j, v)
                }),
            );
            for (g, sign) in [(Generator::Raise, 1.0), (Generator::Lower, -1.0)] {
                record(
                    "energy_ladder".into(),
                    identity_residual(&states, commutator(gen(Generator::Energy, j), gen(g, j)), |v| {
                        apply_generator(model, g, j, v).scaled(&sign)
                    }),
                );
                for p in [-1, 1] {
                    record(
                        "q_gamma_central".into(),
                        identity_residual(&states, commutator(gen(Generator::QHalf(p), j), gen(g, j)), zero_map),
                    );
                }
            }
        }
        record(
            "coproduct_lower_raise".into(),
            identity_residual(&states, commutator(cop(Generator::Lower), cop(Generator::Raise)), |v| {
                v.scaled(&model.qnum_total())
            }),
        );
        for (g, sign) in [(Generator::Raise, 1.0), (Generator::Lower, -1.0)] {
            record(
                "coproduct_energy_ladder".into(),
                identity_residual(&states, commutator(cop(Generator::Energy), cop(g)), |v| {
                    coproduct_action(model, g, v).scaled(&sign)
                }),
            );
        }
        record(
            "energy_eigenvalue".into(),
            identity_residual(&states, cop(Generator::Energy), |v| {
                v.scaled(&(model.labels().c_total() + f64::from(total)))
            }),
        );
        for k in 0..n - 1 {
            let o = move |v: &WeightVector<f64>| apply_o(model, k, v);
            record(
                "lower_commutes_with_o".into(),
                identity_residual(&states, commutator(cop(Generator::Lower), o), zero_map),
            );
            record(
                "raise_commutes_with_o".into(),
                identity_residual(&states, commutator(cop(Generator::Raise), o), zero_map),
            );
            record("energy_raises_o".into(), identity_residual(&states, commutator(cop(Generator::Energy), o), o));
            record(
                "q_gamma_commutes_with_o".into(),
                identity_residual(&states, commutator(cop(Generator::QHalf(1)), o), zero_map),
            );
            record("o_adjoint_commutator".into(), o_adjoint_residual(model, k, total)?);
            for k2 in k + 1..n - 1 {
                let o2 = move |v: &WeightVector<f64>| apply_o(model, k2, v);
                record("o_commute".into(), identity_residual(&states, commutator(o, o2), zero_map));
            }
        }
    }
    Ok(Value::Object(out))
}

/// `O* O - O O* = [gamma_k + gamma_{k+1}]` on the weight space at `total`,
/// with `O*` the transpose of `O` in the orthonormal occupation basis.
fn o_adjoint_residual(model: &NumericModel, k: usize, total: u32) -> Result<f64> {
    let labels = model.labels();
    let here = enumerate_weight_basis(labels, total, &SectorChoice::All)?.states;
    let up = enumerate_weight_basis(labels, total + 1, &SectorChoice::All)?.states;
    let o = |v: &WeightVector<f64>| apply_o(model, k, v);
    let a = operator_matrix(&here, &up, o);
    let mut lhs = a.transpose().mul(&a);
    if total > 0 {
        let down = enumerate_weight_basis(labels, total - 1, &SectorChoice::All)?.states;
        let b = operator_matrix(&down, &here, o);
        lhs = lhs.sub(&b.mul(&b.transpose()));
    }
    let rhs = operator_matrix(&here, &here, |v| pair_qnum(model, k, v));
    Ok(lhs.sub(&rhs).max_abs() / rhs.max_abs().max(1.0))
}

/// Casimir eigenvalue `[Gamma](sum c + j)` on `(Delta alpha+)^m v_0` for
/// lowest-weight vectors at levels `j <= max_level`, `m <= max_m`.
fn casimir_descendants(model: &NumericModel, max_level: u32, max_m: u32) -> Result<(f64, Value)> {
    let labels = model.labels();
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for level in 0..=max_level {
        let expected = model.qnum_total() * (labels.c_total() + f64::from(level));
        for exps in monomial_exponents(labels.n(), level) {
            let mut v = apply_monomial(model, &exps, &WeightVector::basis(TensorState::vacuum(labels.initial())));
            for m in 0..=max_m {
                let cv = casimir_action(model, &v);
                let r = cv.sub(&v.scaled(&expected)).norm() / (expected.abs() * v.norm()).max(f64::MIN_POSITIVE);
                worst = worst.max(r);
                rows.push(json!({ "exponents": exps, "m": m, "expected": expected, "residual": r }));
                v = coproduct_action(model, Generator::Raise, &v);
            }
        }
    }
    Ok((worst, json!(rows)))
}

/// `<v_i^{(j)}, v_{i'}^{(j')}> = delta delta` for `i, j <= max` on two slots.
pub fn two_slot_orthonormality(model: &NumericModel, max: u32) -> Result<f64> {
    let mut vs = Vec::new();
    for total in 0..=2 * max {
        for (j, v) in two_slot_descendants(model, total)?.into_iter().enumerate() {
            let i = total - j as u32;
            if i <= max && j as u32 <= max {
                vs.push(v);
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (a, u) in vs.iter().enumerate() {
        for (b, v) in vs.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((inner_product(u, v)? - want).abs());
        }
    }
    Ok(worst)
}

fn hermiticity(tol: f64) -> Result<Outcome> {
    let l = RepLabel::new(1.0, 1.0)?;
    let model = NumericModel::new(0.5, LabelSet::homogeneous(2, l)?)?;
    let single: Vec<WeightVector<f64>> =
        (0..=5).map(|m| TensorState::new(vec![0, 0], vec![m, 0]).map(WeightVector::basis)).collect::<Result<_>>()?;
    let mut pair = Vec::new();
    for total in 0..=4 {
        for s in enumerate_weight_basis(model.labels(), total, &SectorChoice::All)?.states {
            pair.push(WeightVector::basis(s));
        }
    }
    let slot_ladder = star_adjoint_check(&model, Generator::Raise, ActionScope::Slot(0), &single, tol)?;
    let slot_energy = star_adjoint_check(&model, Generator::Energy, ActionScope::Slot(0), &single, tol)?;
    let coproduct = star_adjoint_check(&model, Generator::Raise, ActionScope::Coproduct, &pair, tol)?;
    Ok(Outcome::flag(
        slot_ladder && slot_energy && coproduct,
        json!({ "q": 0.5, "gamma": 1.0, "c": 1.0, "single_slot_ladder": slot_ladder,
                "single_slot_energy": slot_energy, "two_slot_coproduct": coproduct }),
    ))
}

pub fn suite_algebra(seed: u64, tol: &Tolerances) -> SuiteReport {
    let tol = *tol;
    let mut sampler = ParamSampler::new(seed);
    let mut draws = Vec::new();
    for n in [2, 3] {
        draws.push((format!("n{n}_homogeneous"), sampler.homogeneous(n)));
        draws.push((format!("n{n}_distinct"), sampler.distinct(n)));
    }
    let mut checks = Vec::new();
    let mut params = serde_json::Map::new();
    for (tag, draw) in draws {
        let draw = match draw {
            Ok(d) => d,
            Err(e) => {
                let msg = e.to_string();
                checks.push(check(format!("draw_{tag}"), move || Err(Error::InvalidParameter(msg.clone()))));
                continue;
            }
        };
        params.insert(tag.clone(), draw_json(&draw));
        let d = draw.clone();
        checks.push(check(format!("operator_identities_{tag}"), move || {
            let model = model_of(&d)?;
            let table = algebra_residuals(&model, 4)?;
            let worst =
                table.as_object().map(|m| m.values().filter_map(Value::as_f64).fold(0.0, f64::max)).unwrap_or(0.0);
            Ok(Outcome::within(worst, tol.algebra, json!({ "max_total": 4, "residuals": table })))
        }));
        let d = draw.clone();
        checks.push(check(format!("casimir_on_descendants_{tag}"), move || {
            let model = model_of(&d)?;
            let (worst, rows) = casimir_descendants(&model, 2, 3)?;
            Ok(Outcome::within(worst, tol.casimir, rows))
        }));
        if draw.labels.n() == 2 {
            let d = draw.clone();
            checks.push(check(format!("two_slot_orthonormality_{tag}"), move || {
                let r = two_slot_orthonormality(&model_of(&d)?, 2)?;
                Ok(Outcome::within(r, tol.algebra, json!({ "max_index": 2 })))
            }));
        }
    }
    checks.push(check("hermiticity", move || hermiticity(tol.algebra)));
    execute("algebra", seed, Value::Object(params), checks)
}

// ---------------------------------------------------------------------------
// spaces

pub fn suite_spaces(seed: u64, tol: &Tolerances) -> SuiteReport {
    let tol = *tol;
    let mut sampler = ParamSampler::new(seed);
    let mut checks = Vec::new();
    let mut params = serde_json::Map::new();

    checks.push(check("counting_identity", || {
        let mut bad = Vec::new();
        for n in 2..=6 {
            for total in 0..=5 {
                let c = counts(n, total)?;
                if c.weight_dim != c.lowest.iter().sum::<u128>() {
                    bad.push(json!([n, total]));
                }
            }
        }
        Ok(Outcome::flag(bad.is_empty(), json!({ "n_max": 6, "N_max": 5, "violations": bad })))
    }));

    for n in 2..=5 {
        let draw = sampler.distinct(n);
        let Ok(draw) = draw else { continue };
        params.insert(format!("dims_n{n}"), draw_json(&draw));
        for total in 0..=4 {
            let d = draw.clone();
            checks.push(check(format!("dimensions_n{n}_N{total}"), move || {
                let model = model_of(&d)?;
                let sector = SectorChoice::One(d.labels.initial().to_vec());
                let c = counts(n, total)?;
                let weight = enumerate_weight_basis(&d.labels, total, &sector)?.dim();
                let kernel = lowest_weight_kernel(&model, total, &sector, &tol)?.len();
                let expected = c.lowest[total as usize] as usize;
                let ok = weight as u128 == c.weight_dim && kernel == expected;
                Ok(Outcome::flag(
                    ok,
                    json!({ "weight_dim": weight, "expected_weight_dim": c.weight_dim as u64,
                            "kernel_dim": kernel, "expected_kernel_dim": expected }),
                ))
            }));
        }
    }

    for n in 2..=4 {
        let Ok(draw) = sampler.distinct(n) else { continue };
        params.insert(format!("span_n{n}"), draw_json(&draw));
        for total in 1..=3 {
            let d = draw.clone();
            checks.push(check(format!("monomials_span_kernel_n{n}_N{total}"), move || {
                let model = model_of(&d)?;
                let sector = SectorChoice::One(d.labels.initial().to_vec());
                let k = lowest_weight_kernel(&model, total, &sector, &tol)?;
                let m = lowest_weight_monomials(&model, total, &sector, &tol)?;
                let span = mutual_projection_residual(&k.vectors, &m.vectors, tol.kernel_rel)?;
                let lw = m.vectors.iter().map(|v| lowering_residual(&model, v)).fold(0.0, f64::max);
                let ok = span <= tol.span_residual && lw <= tol.lowest_weight_residual;
                Ok(Outcome {
                    passed: ok,
                    residual: span,
                    tolerance: tol.span_residual,
                    detail: json!({ "span_residual": span, "lowering_residual": lw }),
                })
            }));
        }
    }

    for n in [3, 4] {
        for total in 1..=2 {
            checks.push(check(format!("monomials_span_kernel_exact_n{n}_N{total}"), move || {
                let model = ExactModel::new(LabelSet::homogeneous(n, RepLabel::new(1.0, 0.5)?)?)?;
                let k = lowest_weight_kernel_exact(&model, total)?;
                let m = lowest_weight_monomials_exact(&model, total)?;
                Ok(Outcome::flag(exact_span_equal(&k.vectors, &m.vectors)?, json!({ "dim": m.len() })))
            }));
        }
    }

    if let Ok(draw) = sampler.distinct(3) {
        params.insert("decomposition_n3".into(), draw_json(&draw));
        checks.push(check("decomposition_n3_N3", move || {
            let model = model_of(&draw)?;
            let rep = verify_decomposition(&model, 3, &tol)?;
            let worst = rep.casimir_residuals.iter().copied().fold(0.0, f64::max);
            let per_sector: Vec<usize> = rep.multiplicities.iter().map(|m| m / rep.sectors.max(1)).collect();
            let ok = rep.passed
                && per_sector == vec![1, 2, 3, 4]
                && rep.expected_dims.iter().map(|&d| d as usize).eq(per_sector.iter().copied());
            Ok(Outcome {
                passed: ok,
                residual: worst,
                tolerance: tol.casimir,
                detail: serde_json::to_value(&rep).unwrap_or(Value::Null),
            })
        }));
    }

    if let Ok(draw) = sampler.distinct(2) {
        params.insert("orthonormality_n2".into(), draw_json(&draw));
        checks.push(check("two_slot_orthonormality", move || {
            let r = two_slot_orthonormality(&model_of(&draw)?, 2)?;
            Ok(Outcome::within(r, tol.algebra, json!({ "max_index": 2 })))
        }));
    }

    execute("spaces", seed, Value::Object(params), checks)
}

// ---------------------------------------------------------------------------
// braid

fn exact_model(n: usize) -> Result<ExactModel> {
    ExactModel::new(LabelSet::homogeneous(n, RepLabel::new(1.0, 0.5)?)?)
}

fn rewrite(model: &NumericModel, total: u32, inverse: bool, tol: &Tolerances) -> Result<BraidMatrices<f64>> {
    build_numeric(model, total, BuildOptions { route: Route::Rewrite, inverse, ..Default::default() }, tol)
}

/// Braid relation and inverse residuals of one numeric family.
fn family_residuals(model: &NumericModel, total: u32, tol: &Tolerances) -> Result<(f64, f64, usize)> {
    let fwd = rewrite(model, total, false, tol)?;
    let bwd = rewrite(model, total, true, tol)?;
    let braid = braid_relation_residual(&fwd.matrices);
    let inv = fwd.matrices.iter().zip(&bwd.matrices).map(|(a, b)| inverse_residual(a, b)).fold(0.0, f64::max);
    Ok((braid, inv, fwd.dim()))
}

/// Five draws mixing homogeneous and inhomogeneous labels.
fn mixed_draws(sampler: &mut ParamSampler, n: usize) -> Vec<(String, Draw)> {
    let kinds = ["homogeneous", "distinguished", "distinct", "homogeneous", "distinguished"];
    kinds
        .iter()
        .enumerate()
        .filter_map(|(i, &kind)| {
            let d = match kind {
                "homogeneous" => sampler.homogeneous(n),
                "distinct" if n <= 4 => sampler.distinct(n),
                _ => sampler.one_distinguished(n),
            };
            d.ok().map(|d| (format!("{kind}{i}"), d))
        })
        .collect()
}

/// `Delta alpha-` and the Casimir commute with the full-space braid matrices.
fn intertwining_residual(model: &NumericModel, total: u32) -> Result<f64> {
    let (states, sig) = full_space_matrices(model, total)?;
    let (below, sig_below) = full_space_matrices(model, total - 1)?;
    let lower = operator_matrix(&states, &below, |v| coproduct_action(model, Generator::Lower, v));
    let cas = operator_matrix(&states, &states, |v| casimir_action(model, v));
    let mut worst: f64 = 0.0;
    for (s, sb) in sig.iter().zip(&sig_below) {
        let a = lower.mul(s).sub(&sb.mul(&lower)).max_abs() / lower.max_abs().max(1.0);
        let b = cas.mul(s).sub(&s.mul(&cas)).max_abs() / cas.max_abs().max(1.0);
        worst = worst.max(a).max(b);
    }
    Ok(worst)
}

pub fn suite_braid(seed: u64, tol: &Tolerances) -> SuiteReport {
    let tol = *tol;
    let mut sampler = ParamSampler::new(seed);
    let mut checks = Vec::new();
    let mut params = serde_json::Map::new();

    for n in 3..=6 {
        checks.push(check(format!("burau_exact_n{n}"), move || {
            let m = build_exact(&exact_model(n)?, 1, BuildOptions::default())?;
            Ok(Outcome::flag(m.matrices == closed_form_burau(n)?, json!({ "dim": m.dim() })))
        }));
    }
    for n in 3..=5 {
        checks.push(check(format!("lkb_exact_n{n}"), move || {
            let m = build_exact(&exact_model(n)?, 2, BuildOptions::default())?;
            Ok(Outcome::flag(m.matrices == closed_form_lkb(n)?, json!({ "dim": m.dim() })))
        }));
    }

    for i in 0..3 {
        let Ok(draw) = sampler.one_distinguished(3) else { continue };
        params.insert(format!("distinguished_n3_{i}"), draw_json(&draw));
        checks.push(check(format!("distinguished_n3_N1_draw{i}"), move || {
            let model = model_of(&draw)?;
            let built = rewrite(&model, 1, false, &tol)?;
            let closed = closed_form_distinguished(&model)?;
            let cmp = compare_matrices(&built.matrices, &closed, tol.fixture_rel, tol.entry_floor)?;
            Ok(Outcome::within(
                cmp.max_relative_error,
                tol.fixture_rel,
                json!({ "dim": built.dim(), "first_mismatch": cmp.first_mismatch }),
            ))
        }));
    }
    for n in 4..=6 {
        let Ok(draw) = sampler.one_distinguished(n) else { continue };
        params.insert(format!("distinguished_n{n}"), draw_json(&draw));
        checks.push(check(format!("distinguished_n{n}_N1"), move || {
            let model = model_of(&draw)?;
            let built = rewrite(&model, 1, false, &tol)?;
            let closed = closed_form_distinguished(&model)?;
            let cmp = compare_matrices(&built.matrices, &closed, tol.fixture_rel, tol.entry_floor)?;
            Ok(Outcome::within(
                cmp.max_relative_error,
                tol.fixture_rel,
                json!({ "dim": built.dim(), "first_mismatch": cmp.first_mismatch }),
            ))
        }));
    }

    for n in 3..=5 {
        for total in 0..=3 {
            checks.push(check(format!("braid_relations_exact_n{n}_N{total}"), move || {
                let model = exact_model(n)?;
                let fwd = build_exact(&model, total, BuildOptions::default())?;
                let bwd = build_exact(&model, total, BuildOptions { inverse: true, ..Default::default() })?;
                let rel = braid_relations_exact(&fwd.matrices);
                let inv = fwd.matrices.iter().zip(&bwd.matrices).all(|(a, b)| is_exact_inverse(a, b));
                Ok(Outcome::flag(rel && inv, json!({ "dim": fwd.dim(), "braid": rel, "inverse": inv })))
            }));
        }
    }

    for n in 3..=5 {
        let draws = mixed_draws(&mut sampler, n);
        for (tag, d) in &draws {
            params.insert(format!("braid_n{n}_{tag}"), draw_json(d));
        }
        for total in 0..=3 {
            for (tag, d) in draws.clone() {
                checks.push(check(format!("braid_relations_n{n}_N{total}_{tag}"), move || {
                    let model = model_of(&d)?;
                    let (braid, inv, dim) = family_residuals(&model, total, &tol)?;
                    let ok = braid <= tol.braid_rel && inv <= tol.inverse;
                    Ok(Outcome {
                        passed: ok,
                        residual: braid.max(inv),
                        tolerance: tol.braid_rel.min(tol.inverse),
                        detail: json!({ "dim": dim, "braid_residual": braid, "inverse_residual": inv }),
                    })
                }));
            }
        }
    }

    for n in 2..=4 {
        let draws = mixed_draws(&mut sampler, n);
        for (tag, d) in &draws {
            params.insert(format!("routes_n{n}_{tag}"), draw_json(d));
        }
        for total in 0..=2 {
            for (tag, d) in draws.clone() {
                checks.push(check(format!("route_equivalence_n{n}_N{total}_{tag}"), move || {
                    let model = model_of(&d)?;
                    let direct = build_numeric(
                        &model,
                        total,
                        BuildOptions { route: Route::Direct, ..Default::default() },
                        &tol,
                    )?;
                    let rw = rewrite(&model, total, false, &tol)?;
                    let cmp = compare_matrices(&direct.matrices, &rw.matrices, tol.route_rel, tol.entry_floor)?;
                    Ok(Outcome::within(
                        cmp.max_relative_error,
                        tol.route_rel,
                        json!({
                            "dim": rw.dim(), "solve_residual": direct.solve_residual,
                            "first_mismatch": cmp.first_mismatch,
                        }),
                    ))
                }));
            }
        }
    }

    for n in [3, 4] {
        for total in 0..=2 {
            checks.push(check(format!("route_equivalence_exact_n{n}_N{total}"), move || {
                let model = exact_model(n)?;
                let build = |route| build_exact(&model, total, BuildOptions { route, ..Default::default() });
                let (d, r, c) = (build(Route::Direct)?, build(Route::Rewrite)?, build(Route::ClosedForm)?);
                let ok = d.matrices == r.matrices && r.matrices == c.matrices;
                Ok(Outcome::flag(ok, json!({ "dim": r.dim() })))
            }));
        }
    }

    if let Ok(draw) = sampler.distinct(3) {
        params.insert("series_vs_printed".into(), draw_json(&draw));
        let d = draw.clone();
        checks.push(check("series_vs_printed_n3", move || {
            let model = model_of(&d)?;
            let mut worst: f64 = 0.0;
            let mut first = Value::Null;
            for total in 1..=3 {
                let cmp = compare_formulas(&model, total, tol.series_vs_printed)?;
                worst = worst.max(cmp.max_deviation_k_le_1);
                if first.is_null() {
                    if let Some(m) = cmp.first_mismatch {
                        first = json!({ "N": total, "mismatch": m });
                    }
                }
            }
            Ok(Outcome::within(worst, tol.series_vs_printed, json!({ "first_k_ge_2_mismatch": first })))
        }));
        let d = draw.clone();
        checks.push(check("full_space_braid_relations_n3_N2", move || {
            let model = model_of(&d)?;
            let (_, series) = full_space_matrices(&model, 2)?;
            let (_, printed) = full_space_matrices_printed(&model, 2)?;
            let s = braid_relation_residual(&series);
            let p = braid_relation_residual(&printed);
            Ok(Outcome::within(s, tol.braid_rel, json!({ "series": s, "printed": p })))
        }));
        checks.push(check("intertwining_n3_N2", move || {
            let r = intertwining_residual(&model_of(&draw)?, 2)?;
            Ok(Outcome::within(r, tol.algebra.max(tol.casimir), json!({})))
        }));
    }

    if let Ok(draw) = sampler.homogeneous(3) {
        params.insert("vacuum".into(), draw_json(&draw));
        checks.push(check("vacuum_scalar_n3_N0", move || {
            let model = model_of(&draw)?;
            let m = build_numeric(&model, 0, BuildOptions { raw: true, ..Default::default() }, &tol)?;
            let l = draw.labels.class(0);
            let want = draw.q.powf(-2.0 * l.c * l.gamma);
            let worst = m.matrices.iter().map(|x| (x.get(0, 0) - want).abs() / want).fold(0.0, f64::max);
            Ok(Outcome::within(worst, tol.fixture_rel, json!({ "dim": m.dim(), "expected": want })))
        }));
    }

    for n in 3..=5 {
        checks.push(check(format!("corrjk_invertible_n{n}"), move || {
            let c = corrjk_change_of_basis(n, 0.7, tol.kernel_rel)?;
            Ok(Outcome::flag(c.invertible, json!({ "s": c.s, "sigma_min": c.sigma_min, "sigma_max": c.sigma_max })))
        }));
    }

    execute("braid", seed, Value::Object(params), checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("braid".parse::<Suite>().unwrap(), Suite::Braid);
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!(Suite::All.members().len(), 3);
    }

    #[test]
    fn failing_check_does_not_abort() {
        let checks = vec![
            check("bad", || Err(Error::InvalidParameter("x".into()))),
            check("panics", || panic!("boom")),
            check("good", || Ok(Outcome::within(0.0, 1.0, Value::Null))),
        ];
        let r = execute("t", 1, Value::Null, checks);
        assert!(!r.passed);
        assert_eq!(r.checks.len(), 3);
        assert!(r.check("good").unwrap().passed);
        assert_eq!(r.failures().count(), 2);
    }

    #[test]
    fn algebra_suite_passes() {
        let r = suite_algebra(7, &Tolerances::default());
        let failed: Vec<String> = r.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}
