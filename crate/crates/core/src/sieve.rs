//! Cyclic sieving verification: sweep a group, count fixed points by brute
//! force, evaluate the weight polynomials at the matching roots of unity and
//! compare. Also home to the standalone identity checks.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinat::{join, partitions_in_box};
use crate::error::{Error, Result};
use crate::eval::{
    eval_exact_modular, eval_sum, eval_sum_with, magnitude_bound, RootAssignment, UnitCircle, DEFAULT_TOLERANCE,
};
use crate::ffield::{build_field, torus_elements, torus_order, BlockOrder, ExtElem, FieldTower, RootOfUnity, TorusElement};
use crate::fqlinalg::{cecioni_frobenius_dim, sylvester_solution_count, MatFq};
use crate::geometry::{
    count_fixed_flags, count_fixed_flags_matrix, count_fixed_grassmannian, count_fixed_grassmannian_matrix,
    count_fixed_labelings, cycle_power_permutation, random_block_invertible, random_invertible, setflag_labelings,
    conjugate, CountOptions, DEFAULT_CAP,
};
use crate::weightalg::{
    factored_refinement, flag_factored_refinement, grassmannian_csp_poly, grassmannian_refined, q_multinomial,
    qt_multinomial, qt_multinomial_sum, upper_block_product, vandermonde_rhs, wt_lambda_maximally_split,
    x_1n_beta, x_alpha_beta, x_alpha_beta_refined, y_alpha_beta, WeightProduct, WeightSum,
};

/// Torus sweeps above this size are sampled.
pub const DEFAULT_MAX_TORUS: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Grassmannian,
    Flag,
    Setflag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { limit: usize, seed: u64 },
}

/// One CSP triple to verify.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CspInstance {
    pub kind: Kind,
    pub q: u32,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub alpha: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<usize>>,
    pub mode: Mode,
    #[serde(skip)]
    pub tolerance: f64,
    #[serde(skip)]
    pub cap: u64,
    #[serde(skip)]
    pub max_torus: u64,
    /// Also evaluate every prediction on the modular path.
    #[serde(skip)]
    pub modular_cross_check: bool,
    #[serde(skip)]
    pub check_structure: bool,
}

impl CspInstance {
    fn base(kind: Kind, q: u32, alpha: &[usize]) -> Self {
        CspInstance {
            kind,
            q,
            n: alpha.iter().sum(),
            k: None,
            alpha: alpha.to_vec(),
            beta: None,
            mode: Mode::Exhaustive,
            tolerance: DEFAULT_TOLERANCE,
            cap: DEFAULT_CAP,
            max_torus: DEFAULT_MAX_TORUS,
            modular_cross_check: false,
            check_structure: true,
        }
    }

    pub fn grassmannian(q: u32, alpha: &[usize], k: usize) -> Self {
        CspInstance {
            k: Some(k),
            ..Self::base(Kind::Grassmannian, q, alpha)
        }
    }

    pub fn flag(q: u32, alpha: &[usize], beta: &[usize]) -> Self {
        CspInstance {
            beta: Some(beta.to_vec()),
            ..Self::base(Kind::Flag, q, alpha)
        }
    }

    /// Set-flags are combinatorial; q is recorded as 1.
    pub fn setflag(alpha: &[usize], beta: &[usize]) -> Self {
        CspInstance {
            beta: Some(beta.to_vec()),
            ..Self::base(Kind::Setflag, 1, alpha)
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_cross_check(mut self, on: bool) -> Self {
        self.modular_cross_check = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if self.alpha.is_empty() || self.alpha.contains(&0) {
            return bad("α must be a composition with positive parts".into());
        }
        if self.alpha.iter().sum::<usize>() != self.n {
            return bad(format!("α does not sum to n = {}", self.n));
        }
        match self.kind {
            Kind::Grassmannian => match self.k {
                Some(k) if k <= self.n => {}
                _ => return bad("k must satisfy 0 ≤ k ≤ n".into()),
            },
            Kind::Flag | Kind::Setflag => match &self.beta {
                Some(b) if !b.is_empty() && !b.contains(&0) && b.iter().sum::<usize>() == self.n => {}
                _ => return bad(format!("β must be a composition of n = {}", self.n)),
            },
        }
        if self.kind != Kind::Setflag && !crate::poly::is_prime(self.q as u64) {
            return Err(Error::InvalidField(format!("q = {} is not prime", self.q)));
        }
        if let Mode::Sampled { limit, .. } = self.mode {
            if limit == 0 {
                return bad("sample size must be positive".into());
            }
        }
        Ok(())
    }
}

/// Prediction against count for one refinement class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinedRecord {
    pub predicted: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factored: Option<i64>,
    pub counted: u64,
}

/// One group element of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    /// Per-block discrete logs (torus) or cycle powers (set-flags).
    pub u: Vec<u64>,
    pub assignment: Vec<RootOfUnity>,
    pub predicted: i64,
    pub counted: u64,
    pub residual: f64,
    pub exact: bool,
    /// A second closed form of the total, when one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate: Option<i64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub refined: BTreeMap<String, RefinedRecord>,
    pub structure_violations: u64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CspReport {
    pub schema: u32,
    pub instance: CspInstance,
    pub group_order: u64,
    pub exhaustive: bool,
    pub cases: Vec<CaseRecord>,
    /// Σ of fixed counts divisible by the group order; exhaustive sweeps only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burnside: Option<bool>,
    pub structure_violations: u64,
    pub evaluations: u64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CspReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

/// A prepared sweep. Cases are independent, so callers may evaluate them in
/// any order or in parallel and hand them back to [`assemble`].
pub trait Verifier: Sync {
    fn instance(&self) -> &CspInstance;
    fn group_order(&self) -> u64;
    fn exhaustive(&self) -> bool;
    fn elements(&self) -> &[Vec<u64>];
    fn evaluations_per_case(&self) -> u64;
    fn case(&self, element: &[u64]) -> Result<CaseRecord>;
}

pub fn prepare(inst: &CspInstance) -> Result<Box<dyn Verifier>> {
    inst.validate()?;
    Ok(match inst.kind {
        Kind::Grassmannian => Box::new(GrassmannVerifier::new(inst)?),
        Kind::Flag => Box::new(FlagVerifier::new(inst)?),
        Kind::Setflag => Box::new(SetFlagVerifier::new(inst)?),
    })
}

/// Collect cases (in element order) into a report.
pub fn assemble(v: &dyn Verifier, cases: Vec<CaseRecord>) -> CspReport {
    let exhaustive = v.exhaustive();
    let order = v.group_order();
    let burnside = exhaustive.then(|| cases.iter().map(|c| c.counted as u128).sum::<u128>() % order as u128 == 0);
    let pass = cases.iter().all(|c| c.pass);
    CspReport {
        schema: 1,
        instance: v.instance().clone(),
        group_order: order,
        exhaustive,
        structure_violations: cases.iter().map(|c| c.structure_violations).sum(),
        evaluations: v.evaluations_per_case() * cases.len() as u64,
        cases,
        burnside,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        elapsed_ms: None,
    }
}

/// Sequential sweep.
pub fn run(inst: &CspInstance) -> Result<CspReport> {
    let v = prepare(inst)?;
    let cases = v.elements().iter().map(|e| v.case(e)).collect::<Result<Vec<_>>>()?;
    Ok(assemble(v.as_ref(), cases))
}

pub fn verify_grassmannian(inst: &CspInstance) -> Result<CspReport> {
    expect_kind(inst, Kind::Grassmannian)?;
    run(inst)
}

pub fn verify_flag(inst: &CspInstance) -> Result<CspReport> {
    expect_kind(inst, Kind::Flag)?;
    run(inst)
}

pub fn verify_setflag(inst: &CspInstance) -> Result<CspReport> {
    expect_kind(inst, Kind::Setflag)?;
    run(inst)
}

fn expect_kind(inst: &CspInstance, kind: Kind) -> Result<()> {
    if inst.kind != kind {
        return Err(Error::InvalidParameters(format!("expected a {kind:?} instance")));
    }
    Ok(())
}

/// An evaluated prediction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub value: i64,
    pub residual: f64,
    pub exact: bool,
    /// The complex and modular paths disagreed.
    pub conflict: bool,
}

fn to_i64(v: BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::TooLarge(format!("value {v} does not fit in 64 bits")))
}

/// Evaluate in double precision, falling back to the exact modular path on
/// a residual breach. With `cross_check` the modular path always runs.
pub fn predict(sum: &WeightSum, a: &RootAssignment, tolerance: f64, cross_check: bool) -> Result<Prediction> {
    match eval_sum(sum, a, tolerance) {
        Ok(r) => {
            let mut p = Prediction {
                value: r.rounded,
                residual: r.residual,
                exact: false,
                conflict: false,
            };
            if cross_check {
                let m = to_i64(eval_exact_modular(sum, a)?)?;
                p.conflict = m != r.rounded;
                p.value = m;
                p.exact = true;
            }
            Ok(p)
        }
        Err(Error::NumericInstability { residual, .. }) => Ok(Prediction {
            value: to_i64(eval_exact_modular(sum, a)?)?,
            residual,
            exact: true,
            conflict: false,
        }),
        Err(e) => Err(e),
    }
}

fn single(q: u64, p: WeightProduct) -> WeightSum {
    WeightSum::single(q, "", p)
}

/// Torus elements to sweep, as per-block discrete logs.
fn torus_sample(tower: &FieldTower, inst: &CspInstance) -> (Vec<Vec<u64>>, bool) {
    let order = torus_order(inst.q, &inst.alpha);
    let sampled = match inst.mode {
        Mode::Sampled { limit, seed } => Some((limit, seed)),
        Mode::Exhaustive if order > inst.max_torus => Some((64, 0)),
        Mode::Exhaustive => None,
    };
    match sampled {
        None => {
            let all = torus_elements(tower, &inst.alpha)
                .iter()
                .map(|u| u.logs(tower))
                .collect();
            (all, true)
        }
        Some((limit, seed)) => {
            let orders: Vec<u64> = inst.alpha.iter().map(|&a| tower.field(a).unit_order()).collect();
            (sample_logs(&orders, limit, seed), false)
        }
    }
}

/// Identity, the generator tuple, then distinct seeded random tuples until
/// `limit` are collected (or the group is exhausted).
pub fn sample_logs(orders: &[u64], limit: usize, seed: u64) -> Vec<Vec<u64>> {
    let total = orders.iter().fold(1u128, |a, &b| a * b as u128);
    let want = (limit as u128).min(total) as usize;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |v: Vec<u64>, out: &mut Vec<Vec<u64>>| {
        if out.len() < want && seen.insert(v.clone()) {
            out.push(v);
        }
    };
    push(vec![0; orders.len()], &mut out);
    push(orders.iter().map(|&o| 1 % o).collect(), &mut out);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < want {
        let v = orders.iter().map(|&o| rng.random_range(0..o)).collect();
        push(v, &mut out);
    }
    out
}

fn element_from_logs(tower: &FieldTower, alpha: &[usize], logs: &[u64]) -> Result<TorusElement> {
    let comps: Vec<ExtElem> = alpha.iter().zip(logs).map(|(&a, &e)| tower.field(a).exp_of(e)).collect();
    TorusElement::new(alpha.to_vec(), comps)
}

fn tower_for(q: u32, alpha: &[usize]) -> Result<FieldTower> {
    FieldTower::with_degrees(q, alpha.iter().copied())
}

struct GrassmannVerifier {
    inst: CspInstance,
    tower: FieldTower,
    k: usize,
    poly: WeightSum,
    /// β -> (refined sum, factored form).
    refined: BTreeMap<Vec<usize>, (WeightSum, WeightSum)>,
    alternate: Option<WeightSum>,
    elements: Vec<Vec<u64>>,
    exhaustive: bool,
}

impl GrassmannVerifier {
    fn new(inst: &CspInstance) -> Result<Self> {
        let q = inst.q as u64;
        let k = inst.k.expect("validated");
        let tower = tower_for(inst.q, &inst.alpha)?;
        let poly = grassmannian_csp_poly(q, &inst.alpha, k)?;
        let mut refined = BTreeMap::new();
        for (beta, sum) in grassmannian_refined(q, &inst.alpha, k)? {
            let f = single(q, factored_refinement(q, &inst.alpha, &beta)?);
            refined.insert(beta, (sum, f));
        }
        let alternate = inst.alpha.iter().all(|&a| a == 1).then(|| {
            let mut s = WeightSum::new(q);
            for lam in partitions_in_box(k, inst.n - k) {
                s.push(lam.to_string(), wt_lambda_maximally_split(&lam));
            }
            s
        });
        let (elements, exhaustive) = torus_sample(&tower, inst);
        Ok(GrassmannVerifier {
            inst: inst.clone(),
            tower,
            k,
            poly,
            refined,
            alternate,
            elements,
            exhaustive,
        })
    }
}

impl Verifier for GrassmannVerifier {
    fn instance(&self) -> &CspInstance {
        &self.inst
    }
    fn group_order(&self) -> u64 {
        torus_order(self.inst.q, &self.inst.alpha)
    }
    fn exhaustive(&self) -> bool {
        self.exhaustive
    }
    fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }
    fn evaluations_per_case(&self) -> u64 {
        let alt = self.alternate.as_ref().map_or(0, |s| s.len());
        (self.poly.len() * 2 + self.refined.len() + alt) as u64
    }

    fn case(&self, logs: &[u64]) -> Result<CaseRecord> {
        let inst = &self.inst;
        let u = element_from_logs(&self.tower, &inst.alpha, logs)?;
        let a = RootAssignment::new(u.omegas(&self.tower))?;
        let opts = CountOptions {
            cap: inst.cap,
            check_structure: inst.check_structure,
        };
        let counts = count_fixed_grassmannian(&self.tower, &inst.alpha, self.k, &u, &opts)?;
        let (tol, cross) = (inst.tolerance, inst.modular_cross_check);
        let total = predict(&self.poly, &a, tol, cross)?;
        let mut pass = !total.conflict && total.value == counts.total as i64;
        let mut refined = BTreeMap::new();
        for (beta, (sum, fact)) in &self.refined {
            let p = predict(sum, &a, tol, cross)?;
            let f = predict(fact, &a, tol, cross)?;
            let counted = counts.by_beta.get(beta).copied().unwrap_or(0);
            pass &= !p.conflict && !f.conflict && p.value == counted as i64 && f.value == counted as i64;
            refined.insert(
                join(beta, ","),
                RefinedRecord {
                    predicted: p.value,
                    factored: Some(f.value),
                    counted,
                },
            );
        }
        let alternate = match &self.alternate {
            Some(s) => {
                let p = predict(s, &a, tol, cross)?;
                pass &= !p.conflict && p.value == total.value;
                Some(p.value)
            }
            None => None,
        };
        Ok(CaseRecord {
            u: logs.to_vec(),
            assignment: a.roots,
            predicted: total.value,
            counted: counts.total,
            residual: total.residual,
            exact: total.exact,
            alternate,
            refined,
            structure_violations: counts.structure_violations,
            pass,
        })
    }
}

fn coset_key(beta_s: &[Vec<usize>]) -> String {
    beta_s.iter().map(|b| join(b, ",")).collect::<Vec<_>>().join("|")
}

struct FlagVerifier {
    inst: CspInstance,
    tower: FieldTower,
    beta: Vec<usize>,
    poly: WeightSum,
    refined: BTreeMap<Vec<Vec<usize>>, (WeightSum, WeightSum)>,
    alternate: Option<WeightSum>,
    elements: Vec<Vec<u64>>,
    exhaustive: bool,
}

impl FlagVerifier {
    fn new(inst: &CspInstance) -> Result<Self> {
        let q = inst.q as u64;
        let beta = inst.beta.clone().expect("validated");
        let tower = tower_for(inst.q, &inst.alpha)?;
        let poly = x_alpha_beta(q, &inst.alpha, &beta)?;
        let refined = x_alpha_beta_refined(q, &inst.alpha, &beta)?
            .into_iter()
            .map(|(key, sum)| {
                let f = single(q, flag_factored_refinement(q, &key));
                (key, (sum, f))
            })
            .collect();
        let alternate = inst.alpha.iter().all(|&a| a == 1).then(|| x_1n_beta(q, &beta));
        let (elements, exhaustive) = torus_sample(&tower, inst);
        Ok(FlagVerifier {
            inst: inst.clone(),
            tower,
            beta,
            poly,
            refined,
            alternate,
            elements,
            exhaustive,
        })
    }
}

impl Verifier for FlagVerifier {
    fn instance(&self) -> &CspInstance {
        &self.inst
    }
    fn group_order(&self) -> u64 {
        torus_order(self.inst.q, &self.inst.alpha)
    }
    fn exhaustive(&self) -> bool {
        self.exhaustive
    }
    fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }
    fn evaluations_per_case(&self) -> u64 {
        let alt = self.alternate.as_ref().map_or(0, |s| s.len());
        (self.poly.len() * 2 + self.refined.len() + alt) as u64
    }

    fn case(&self, logs: &[u64]) -> Result<CaseRecord> {
        let inst = &self.inst;
        let u = element_from_logs(&self.tower, &inst.alpha, logs)?;
        let a = RootAssignment::new(u.omegas(&self.tower))?;
        let opts = CountOptions {
            cap: inst.cap,
            check_structure: inst.check_structure,
        };
        let counts = count_fixed_flags(&self.tower, &inst.alpha, &self.beta, &u, &opts)?;
        let (tol, cross) = (inst.tolerance, inst.modular_cross_check);
        let total = predict(&self.poly, &a, tol, cross)?;
        let mut pass = !total.conflict && total.value == counts.total as i64;
        let mut refined = BTreeMap::new();
        for (key, (sum, fact)) in &self.refined {
            let p = predict(sum, &a, tol, cross)?;
            let f = predict(fact, &a, tol, cross)?;
            let counted = counts.by_coset.get(key).copied().unwrap_or(0);
            pass &= !p.conflict && !f.conflict && p.value == counted as i64 && f.value == counted as i64;
            refined.insert(
                coset_key(key),
                RefinedRecord {
                    predicted: p.value,
                    factored: Some(f.value),
                    counted,
                },
            );
        }
        let alternate = match &self.alternate {
            Some(s) => {
                let p = predict(s, &a, tol, cross)?;
                pass &= !p.conflict && p.value == total.value;
                Some(p.value)
            }
            None => None,
        };
        Ok(CaseRecord {
            u: logs.to_vec(),
            assignment: a.roots,
            predicted: total.value,
            counted: counts.total,
            residual: total.residual,
            exact: total.exact,
            alternate,
            refined,
            structure_violations: counts.structure_violations,
            pass,
        })
    }
}

struct SetFlagVerifier {
    inst: CspInstance,
    poly: WeightSum,
    labels: Vec<Vec<u8>>,
    elements: Vec<Vec<u64>>,
    exhaustive: bool,
}

impl SetFlagVerifier {
    fn new(inst: &CspInstance) -> Result<Self> {
        let beta = inst.beta.clone().expect("validated");
        let poly = y_alpha_beta(&inst.alpha, &beta)?;
        let orders: Vec<u64> = inst.alpha.iter().map(|&a| a as u64).collect();
        let order: u64 = orders.iter().product();
        let (elements, exhaustive) = match inst.mode {
            Mode::Exhaustive if order <= inst.max_torus => (all_tuples(&orders), true),
            Mode::Exhaustive => (sample_logs(&orders, 64, 0), false),
            Mode::Sampled { limit, seed } => (sample_logs(&orders, limit, seed), false),
        };
        Ok(SetFlagVerifier {
            inst: inst.clone(),
            poly,
            labels: setflag_labelings(&beta),
            elements,
            exhaustive,
        })
    }
}

/// Every tuple (j_1, ..., j_l) with 0 ≤ j_r < orders[r], last fastest.
fn all_tuples(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &o in orders {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u64>| {
                (0..o).map(move |j| {
                    let mut v = p.clone();
                    v.push(j);
                    v
                })
            })
            .collect();
    }
    out
}

impl Verifier for SetFlagVerifier {
    fn instance(&self) -> &CspInstance {
        &self.inst
    }
    fn group_order(&self) -> u64 {
        self.inst.alpha.iter().map(|&a| a as u64).product()
    }
    fn exhaustive(&self) -> bool {
        self.exhaustive
    }
    fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }
    fn evaluations_per_case(&self) -> u64 {
        self.poly.len() as u64
    }

    fn case(&self, powers: &[u64]) -> Result<CaseRecord> {
        let inst = &self.inst;
        let js: Vec<usize> = powers.iter().map(|&j| j as usize).collect();
        let sigma = cycle_power_permutation(&inst.alpha, &js)?;
        let counted = count_fixed_labelings(&self.labels, &sigma);
        let roots = inst
            .alpha
            .iter()
            .zip(powers)
            .map(|(&a, &j)| RootOfUnity {
                order: a as u64,
                exponent: j,
            })
            .collect();
        let a = RootAssignment::new(roots)?;
        let p = predict(&self.poly, &a, inst.tolerance, inst.modular_cross_check)?;
        Ok(CaseRecord {
            u: powers.to_vec(),
            assignment: a.roots,
            predicted: p.value,
            counted,
            residual: p.residual,
            exact: p.exact,
            alternate: None,
            refined: BTreeMap::new(),
            structure_violations: 0,
            pass: !p.conflict && p.value == counted as i64,
        })
    }
}

/// Outcome of a standalone identity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub parameters: String,
    pub ok: bool,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    pub checks: u64,
}

/// [n; β]_q against the sum over composition tuples.
pub fn check_vandermonde(q: u64, alpha: &[usize], beta: &[usize]) -> IdentityReport {
    let lhs = q_multinomial(beta, q);
    let rhs = vandermonde_rhs(q, alpha, beta);
    IdentityReport {
        identity: "vandermonde".into(),
        parameters: format!("q={q} alpha={} beta={}", join(alpha, ","), join(beta, ",")),
        ok: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        max_error: None,
        checks: 1,
    }
}

/// Tree-weight sum against the ratio form of the (q,t)-multinomial at
/// `points` seeded points of the unit circle. The error is measured
/// relative to the value at t = 1, which bounds every term sum.
pub fn check_qt_sum(beta: &[usize], q: u64, points: usize, seed: u64, tolerance: f64) -> Result<IdentityReport> {
    let sum = qt_multinomial_sum(q, beta);
    let prod = single(q, qt_multinomial(q, beta));
    let scale = magnitude_bound(&sum)?.to_f64().unwrap_or(f64::MAX).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let ev = UnitCircle::new(vec![rng.random::<f64>()]);
        let x = eval_sum_with(&ev, &sum)?;
        let y = eval_sum_with(&ev, &prod)?;
        worst = worst.max((x - y).norm() / scale);
    }
    let ones = RootAssignment::ones(1);
    let at_one = (eval_exact_modular(&sum, &ones)?, eval_exact_modular(&prod, &ones)?);
    let expected = BigInt::from(q_multinomial(beta, q));
    let ok = worst < tolerance && at_one.0 == expected && at_one.1 == expected;
    Ok(IdentityReport {
        identity: "qt-sum".into(),
        parameters: format!("q={q} beta={}", join(beta, ",")),
        ok,
        lhs: at_one.0.to_string(),
        rhs: at_one.1.to_string(),
        max_error: Some(worst),
        checks: points as u64 + 1,
    })
}

/// [n; β]_{q, ω(u)} for every u ∈ F_{q^n}^x of degree d: equal to
/// [n/d; β/d]_{q^d} when d divides every β_i, and 0 otherwise.
pub fn check_qt_eval(beta: &[usize], q: u32, d: usize, tolerance: f64) -> Result<IdentityReport> {
    let n: usize = beta.iter().sum();
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::InvalidParameters(format!("d = {d} does not divide n = {n}")));
    }
    let field = build_field(q, n)?;
    let sum = single(q as u64, qt_multinomial(q as u64, beta));
    let expected: BigUint = if beta.iter().all(|b| b % d == 0) {
        let reduced: Vec<usize> = beta.iter().map(|b| b / d).collect();
        q_multinomial(&reduced, (q as u64).pow(d as u32))
    } else {
        BigUint::default()
    };
    let expected = BigInt::from(expected);
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    let mut last = BigInt::default();
    for u in field.units().filter(|&u| field.subfield_degree(u) == d) {
        let a = RootAssignment::new(vec![field.omega(u)?])?;
        let value = match eval_sum(&sum, &a, tolerance) {
            Ok(r) => {
                worst = worst.max(r.residual);
                BigInt::from(r.rounded)
            }
            Err(Error::NumericInstability { .. }) => eval_exact_modular(&sum, &a)?,
            Err(e) => return Err(e),
        };
        ok &= value == expected;
        last = value;
        checks += 1;
    }
    Ok(IdentityReport {
        identity: "qt-eval".into(),
        parameters: format!("q={q} beta={} d={d}", join(beta, ",")),
        ok: ok && checks > 0,
        lhs: last.to_string(),
        rhs: expected.to_string(),
        max_error: Some(worst),
        checks,
    })
}

/// The number of m1 x m2 solutions X of diag(U_1) X = X diag(U_2), three
/// ways: the product formula at ω(u_1), ω(u_2) (both conventions), the
/// kernel of the Sylvester operator, and the Cecioni-Frobenius invariant
/// factor count. u_1, u_2 are given by discrete log in one field F_{q^a}
/// so a single embedding ω serves both.
pub fn check_upper_block(q: u32, a: usize, logs: (u64, u64), m1: usize, m2: usize) -> Result<IdentityReport> {
    let field = build_field(q, a)?;
    let (u1, u2) = (field.exp_of(logs.0), field.exp_of(logs.1));
    let (d1, d2) = (field.subfield_degree(u1), field.subfield_degree(u2));
    if m1 == 0 || m2 == 0 || !m1.is_multiple_of(d1) || !m2.is_multiple_of(d2) {
        return Err(Error::InvalidParameters(format!(
            "m1 = {m1}, m2 = {m2} must be positive multiples of d1 = {d1}, d2 = {d2}"
        )));
    }
    let big = |u: ExtElem, m: usize| {
        let c = crate::ffield::companion_matrix(&field.minimal_polynomial(u));
        let d = c.rows();
        MatFq::block_diag(q, &vec![c; m / d])
    };
    let (a1, a2) = (big(u1, m1), big(u2, m2));
    let (dim, count) = sylvester_solution_count(&a1, &a2);
    let cf = cecioni_frobenius_dim(&a1, &a2);
    let roots = RootAssignment::new(vec![field.omega(u1)?, field.omega(u2)?])?;
    let zero = eval_exact_modular(&single(q as u64, upper_block_product(m1, m2, false)), &roots)?;
    let one = eval_exact_modular(&single(q as u64, upper_block_product(m1, m2, true)), &roots)?;
    let count = BigInt::from(count);
    Ok(IdentityReport {
        identity: "upper-block".into(),
        parameters: format!("q={q} a={a} u=g^{},g^{} m={m1},{m2}", logs.0, logs.1),
        ok: zero == count && one == count && dim == cf,
        lhs: zero.to_string(),
        rhs: count.to_string(),
        max_error: None,
        checks: 3,
    })
}

/// Sylvester kernel dimension against Σ deg gcd of invariant factors.
pub fn check_cecioni(a: &MatFq, b: &MatFq) -> IdentityReport {
    let (dim, _) = sylvester_solution_count(a, b);
    let cf = cecioni_frobenius_dim(a, b);
    IdentityReport {
        identity: "cecioni".into(),
        parameters: format!("q={} a={} b={}", a.q(), a.rows(), b.rows()),
        ok: dim == cf,
        lhs: dim.to_string(),
        rhs: cf.to_string(),
        max_error: None,
        checks: 1,
    }
}

/// Conjugation trials on one instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConjugationReport {
    pub trials: u64,
    /// Totals agreed under a random g ∈ GL_n.
    pub total_agree: u64,
    /// Refined counts agreed under a random block-diagonal g.
    pub refined_agree: u64,
}

impl ConjugationReport {
    pub fn ok(&self) -> bool {
        self.total_agree == self.trials && self.refined_agree == self.trials
    }
}

/// For random torus elements u and random g, compare fixed counts of the
/// torus matrix M and of g M g^{-1}: totals for arbitrary g, refined counts
/// for g respecting the block decomposition.
pub fn conjugation_suite(inst: &CspInstance, trials: usize, seed: u64) -> Result<ConjugationReport> {
    inst.validate()?;
    let (q, alpha) = (inst.q, inst.alpha.as_slice());
    let tower = tower_for(q, alpha)?;
    let orders: Vec<u64> = alpha.iter().map(|&a| tower.field(a).unit_order()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ConjugationReport::default();
    for _ in 0..trials {
        let logs: Vec<u64> = orders.iter().map(|&o| rng.random_range(0..o)).collect();
        let u = element_from_logs(&tower, alpha, &logs)?;
        let g = random_invertible(q, inst.n, &mut rng);
        match inst.kind {
            Kind::Grassmannian => {
                let k = inst.k.expect("validated");
                let m = u.matrix(&tower, BlockOrder::Descending);
                let rev: Vec<usize> = alpha.iter().rev().copied().collect();
                let h = random_block_invertible(q, &rev, &mut rng);
                let base = count_fixed_grassmannian_matrix(alpha, k, &m, None, inst.cap)?;
                let full = count_fixed_grassmannian_matrix(alpha, k, &conjugate(&m, &g)?, None, inst.cap)?;
                let block = count_fixed_grassmannian_matrix(alpha, k, &conjugate(&m, &h)?, None, inst.cap)?;
                rep.total_agree += u64::from(base.total == full.total);
                rep.refined_agree += u64::from(base.by_beta == block.by_beta);
            }
            Kind::Flag => {
                let beta = inst.beta.as_deref().expect("validated");
                let m = u.matrix(&tower, BlockOrder::Ascending);
                let h = random_block_invertible(q, alpha, &mut rng);
                let base = count_fixed_flags_matrix(alpha, beta, &m, None, inst.cap)?;
                let full = count_fixed_flags_matrix(alpha, beta, &conjugate(&m, &g)?, None, inst.cap)?;
                let block = count_fixed_flags_matrix(alpha, beta, &conjugate(&m, &h)?, None, inst.cap)?;
                rep.total_agree += u64::from(base.total == full.total);
                rep.refined_agree += u64::from(base.by_coset == block.by_coset);
            }
            Kind::Setflag => {
                return Err(Error::InvalidParameters("conjugation applies to torus actions".into()));
            }
        }
        rep.trials += 1;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line() {
        let r = verify_grassmannian(&CspInstance::grassmannian(2, &[2], 1)).unwrap();
        assert!(r.passed());
        let counts: Vec<(i64, u64)> = r.cases.iter().map(|c| (c.predicted, c.counted)).collect();
        assert_eq!(counts, vec![(3, 3), (0, 0), (0, 0)]);
        assert_eq!(r.burnside, Some(true));
    }

    #[test]
    fn small_grassmannians_agree() {
        for (alpha, k) in [(vec![2, 2], 2), (vec![1, 1, 1, 1], 2), (vec![3, 1], 1), (vec![4], 2)] {
            let inst = CspInstance::grassmannian(2, &alpha, k).with_cross_check(true);
            let r = verify_grassmannian(&inst).unwrap();
            assert!(r.passed(), "{alpha:?} {:?}", r.failures().next());
            assert_eq!(r.structure_violations, 0);
            assert_eq!(r.burnside, Some(true));
        }
        let r = verify_grassmannian(&CspInstance::grassmannian(2, &[2, 2], 2)).unwrap();
        assert_eq!(r.cases.len(), 9);
    }

    #[test]
    fn small_flags_agree() {
        for (alpha, beta) in [
            (vec![2], vec![1, 1]),
            (vec![1, 1, 1], vec![1, 2]),
            (vec![2, 2], vec![1, 3]),
            (vec![1, 1, 1, 1], vec![1, 1, 2]),
            (vec![3, 1], vec![2, 1, 1]),
        ] {
            let r = verify_flag(&CspInstance::flag(2, &alpha, &beta).with_cross_check(true)).unwrap();
            assert!(r.passed(), "{alpha:?} {beta:?} {:?}", r.failures().next());
        }
    }

    #[test]
    fn flag_two_step_matches_grassmannian() {
        let g = verify_grassmannian(&CspInstance::grassmannian(2, &[1, 2], 1)).unwrap();
        let f = verify_flag(&CspInstance::flag(2, &[2, 1], &[1, 2])).unwrap();
        let a: Vec<u64> = g.cases.iter().map(|c| c.counted).collect();
        let mut b: Vec<u64> = f.cases.iter().map(|c| c.counted).collect();
        // blocks are listed in the opposite order for the two conventions
        let mut a2 = a.clone();
        a2.sort();
        b.sort();
        assert_eq!(a2, b);
    }

    #[test]
    fn set_flags_agree() {
        for (alpha, beta) in [(vec![4], vec![2, 2]), (vec![2], vec![1, 1]), (vec![2, 3], vec![1, 2, 2])] {
            let r = verify_setflag(&CspInstance::setflag(&alpha, &beta)).unwrap();
            assert!(r.passed(), "{alpha:?} {beta:?}");
        }
        let r = verify_setflag(&CspInstance::setflag(&[4], &[2, 2])).unwrap();
        assert_eq!(r.cases[2].counted, 2);
        assert_eq!(r.cases[2].predicted, 2);
    }

    #[test]
    fn identities() {
        assert!(check_vandermonde(2, &[2, 2], &[2, 2]).ok);
        assert_eq!(check_vandermonde(2, &[2, 2], &[2, 2]).lhs, "35");
        assert!(check_vandermonde(3, &[3, 2, 2], &[2, 2, 3]).ok);
        assert!(check_qt_sum(&[2, 1], 2, 20, 1, 1e-8).unwrap().ok);
        assert!(check_qt_eval(&[2, 2], 2, 2, 1e-8).unwrap().ok);
        assert!(check_qt_eval(&[1, 3], 2, 2, 1e-8).unwrap().ok);
        // f1 != f2: a unique solution
        let r = check_upper_block(2, 2, (0, 1), 1, 2).unwrap();
        assert!(r.ok && r.lhs == "1", "{r:?}");
        // conjugate roots of one quadratic
        let r = check_upper_block(2, 2, (1, 2), 2, 2).unwrap();
        assert!(r.ok && r.lhs == "4", "{r:?}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_logs(&[15, 15], 10, 4);
        assert_eq!(a, sample_logs(&[15, 15], 10, 4));
        assert_eq!(a[0], vec![0, 0]);
        assert_eq!(a[1], vec![1, 1]);
        assert_eq!(sample_logs(&[3], 10, 0).len(), 3);
    }

    #[test]
    fn conjugation() {
        let r = conjugation_suite(&CspInstance::grassmannian(2, &[2, 2], 2), 5, 9).unwrap();
        assert!(r.ok(), "{r:?}");
        let r = conjugation_suite(&CspInstance::flag(2, &[1, 2], &[1, 1, 1]), 5, 9).unwrap();
        assert!(r.ok(), "{r:?}");
    }
}
