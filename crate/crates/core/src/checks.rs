//! Closed-form consequences that a computed signature must satisfy.
//!
//! Each check is evaluated in exact arithmetic and reported with a status
//! and a short human-readable explanation. Checks whose hypotheses are not
//! met (wrong base, word not homologically closed, hyperellipticity denied,
//! achiral word) report [`CheckStatus::NotApplicable`] instead of failing.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cycle::VanishingCycle;
use crate::error::{Error, Result};
use crate::fibration::{compute_signature, Base, FibrationReport, FibrationSpec, HyperellipticStatus};
use crate::homology::{GenusContext, HomologyClass};
use crate::linalg::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The local formula gives a non-integer, so the fibration cannot be
    /// hyperelliptic.
    NotInteger,
    NotApplicable,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotInteger => "not-integer",
            CheckStatus::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CheckResult {
    pub status: CheckStatus,
    pub details: String,
}

impl CheckResult {
    fn new(status: CheckStatus, details: impl Into<String>) -> Self {
        CheckResult {
            status,
            details: details.into(),
        }
    }

    fn pass_if(ok: bool, details: impl Into<String>) -> Self {
        Self::new(if ok { CheckStatus::Pass } else { CheckStatus::Fail }, details)
    }

    fn na(details: impl Into<String>) -> Self {
        Self::new(CheckStatus::NotApplicable, details)
    }
}

pub const CLOSURE: &str = "closure";
pub const LOCAL_SIGNATURE: &str = "local_signature";
pub const ENDO_CONGRUENCE: &str = "endo_congruence";
pub const SIGNATURE_BOUND: &str = "signature_bound";
pub const HYPERELLIPTIC_BOUND: &str = "hyperelliptic_bound";
pub const REDUCIBLE_FIBERS: &str = "reducible_fibers";
pub const GEOGRAPHY_CONSTANTS: &str = "geography_constants";
pub const GEOGRAPHY: &str = "geography";

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Whether the total monodromy acts as the identity on `H_1`.
///
/// This is necessary for the word to close up over the sphere but not
/// sufficient; it never certifies isotopy to the identity.
pub fn closure_check(spec: &FibrationSpec) -> Result<bool> {
    let m = crate::cycle::word_monodromy(spec.ctx(), spec.word(), spec.word().len())?;
    Ok(m.is_identity())
}

/// Local signature formula for hyperelliptic fibrations over the sphere:
/// `-(g+1)/(2g+1)·n + Σ_h (4h(g-h)/(2g+1) - 1)·s_h`.
pub fn local_signature_formula(g: usize, n: usize, s_by_genus: &BTreeMap<usize, usize>) -> Rational {
    let g = g as i64;
    let d = 2 * g + 1;
    let mut total = frac(-(g + 1), d) * rat(n as i64);
    for (&h, &count) in s_by_genus {
        let h = h as i64;
        total += (frac(4 * h * (g - h), d) - rat(1)) * rat(count as i64);
    }
    total
}

/// Compares the local formula with a signature obtained some other way.
///
/// A non-integral formula value is returned as [`CheckStatus::NotInteger`]:
/// no hyperelliptic fibration has those counts.
pub fn hyperelliptic_verdict(g: usize, n: usize, s_by_genus: &BTreeMap<usize, usize>, sigma: i64) -> CheckResult {
    let value = local_signature_formula(g, n, s_by_genus);
    if !value.is_integer() {
        return CheckResult::new(
            CheckStatus::NotInteger,
            format!("local formula gives {value}, not an integer: the fibration is not hyperelliptic"),
        );
    }
    let ok = value == rat(sigma);
    CheckResult::pass_if(ok, format!("local formula {value}, engine {sigma}"))
}

/// Local formula against the engine, for sphere fibrations.
pub fn hyperelliptic_cross_check(report: &FibrationReport, spec: &FibrationSpec) -> CheckResult {
    if let Some(reason) = sphere_precondition(report, spec) {
        return CheckResult::na(reason);
    }
    if spec.hyperelliptic_status() == HyperellipticStatus::Denied {
        return CheckResult::na("hyperellipticity denied");
    }
    hyperelliptic_verdict(report.genus, report.n, &report.s_by_genus, report.sigma)
}

/// `n + 4 Σ h(2h+1) s_h ≡ 0` modulo `4(2g+1)` for odd `g`, `2(2g+1)` for even `g`.
pub fn endo_congruence(g: usize, n: usize, s_by_genus: &BTreeMap<usize, usize>) -> CheckResult {
    let g = g as i64;
    let modulus = if g % 2 == 1 { 4 * (2 * g + 1) } else { 2 * (2 * g + 1) };
    let lhs = n as i64
        + 4 * s_by_genus
            .iter()
            .map(|(&h, &c)| {
                let h = h as i64;
                h * (2 * h + 1) * c as i64
            })
            .sum::<i64>();
    let residue = lhs.mod_floor(&modulus);
    CheckResult::pass_if(residue == 0, format!("{lhs} ≡ {residue} (mod {modulus})"))
}

/// Exact `k_g, l_g` with `c_1² ≤ k_g χ + l_g` for hyperelliptic fibrations
/// of genus `g` over the sphere.
pub fn geography_constants(g: usize) -> (Rational, Rational) {
    assert!(g >= 1, "genus must be positive");
    let g = g as i64;
    if g == 1 {
        return (rat(0), rat(0));
    }
    if g % 2 == 0 {
        let k = rat(10) - frac(6 * g + 4, g * g);
        let l = rat(2 * g - 10) + frac(4 * g + 4, g * g);
        (k, l)
    } else {
        let k = rat(10) - frac(6 * g + 4, g * g - 1);
        let l = rat(2 * g - 10) + frac(8, 2 * g + 1) + frac(6, (g * g - 1) * (2 * g + 1));
        (k, l)
    }
}

/// The uniform ceilings `k_g ≤ 10 - (6g+4)/g²` and `l_g ≤ 2g - 10 + (4g+4)/g²`.
pub fn geography_ceilings(g: usize) -> (Rational, Rational) {
    let gi = g as i64;
    (
        rat(10) - frac(6 * gi + 4, gi * gi),
        rat(2 * gi - 10) + frac(4 * gi + 4, gi * gi),
    )
}

fn geography_constants_check(g: usize) -> CheckResult {
    let (k, l) = geography_constants(g);
    let (kc, lc) = geography_ceilings(g);
    CheckResult::pass_if(k <= kc && l <= lc, format!("k_g = {k} ≤ {kc}, l_g = {l} ≤ {lc}"))
}

/// `c_1² ≤ k_g χ + l_g`, compared exactly.
pub fn geography_check(report: &FibrationReport, spec: &FibrationSpec) -> CheckResult {
    if let Some(reason) = hyperelliptic_precondition(report, spec) {
        return CheckResult::na(reason);
    }
    let (Some(c1), Some(chi)) = (&report.c1_squared, &report.chi) else {
        return CheckResult::na("geography needs a sphere base");
    };
    let (k, l) = geography_constants(report.genus);
    let rhs = &k * chi + &l;
    CheckResult::pass_if(
        *c1 <= rhs,
        format!("c1^2 = {c1} ≤ k_g·χ + l_g = {k}·{chi} + {l} = {rhs}"),
    )
}

/// `σ ≤ n - s` for every positive word, and `σ ≤ n - s - 4` for hyperelliptic
/// fibrations over the sphere. Returned as `(name, result)` pairs.
pub fn bound_checks(report: &FibrationReport, spec: &FibrationSpec) -> Vec<(&'static str, CheckResult)> {
    let n = report.n as i64;
    let s = report.s as i64;
    let general = if spec.is_achiral() {
        CheckResult::na("achiral word")
    } else {
        let bound = n - s;
        CheckResult::pass_if(
            report.sigma <= bound,
            format!("σ = {} ≤ n - s = {bound} (margin {})", report.sigma, bound - report.sigma),
        )
    };
    let hyper = match hyperelliptic_precondition(report, spec) {
        Some(reason) => CheckResult::na(reason),
        None => {
            let bound = n - s - 4;
            CheckResult::pass_if(
                report.sigma <= bound,
                format!("σ = {} ≤ n - s - 4 = {bound} (margin {})", report.sigma, bound - report.sigma),
            )
        }
    };
    vec![(SIGNATURE_BOUND, general), (HYPERELLIPTIC_BOUND, hyper)]
}

/// No hyperelliptic fibration over the sphere has only separating vanishing
/// cycles: the engine gives `σ = -s` while the local formula gives `-s/5`
/// in genus two and a non-negative value from genus three on.
pub fn reducible_fibers_check(report: &FibrationReport, spec: &FibrationSpec) -> CheckResult {
    if let Some(reason) = sphere_precondition(report, spec) {
        return CheckResult::na(reason);
    }
    if spec.hyperelliptic_status() == HyperellipticStatus::Denied {
        return CheckResult::na("hyperellipticity denied");
    }
    if report.n > 0 {
        return CheckResult::new(CheckStatus::Pass, format!("{} nonseparating twists", report.n));
    }
    let formula = local_signature_formula(report.genus, report.n, &report.s_by_genus);
    CheckResult::new(
        CheckStatus::Fail,
        format!(
            "contradiction: only separating twists, engine σ = {} but local formula {formula}; \
             no hyperelliptic fibration over S2 has only reducible fibers",
            report.sigma
        ),
    )
}

fn sphere_precondition(report: &FibrationReport, spec: &FibrationSpec) -> Option<String> {
    if spec.is_achiral() {
        Some("achiral word".into())
    } else if report.base != Base::Sphere {
        Some("needs a sphere base".into())
    } else if !report.closure {
        Some("total monodromy is not homologically trivial".into())
    } else {
        None
    }
}

/// Preconditions shared by the checks that assume hyperellipticity. With no
/// assertion in genus three and up, they run only once the local formula has
/// matched the engine.
fn hyperelliptic_precondition(report: &FibrationReport, spec: &FibrationSpec) -> Option<String> {
    if let Some(reason) = sphere_precondition(report, spec) {
        return Some(reason);
    }
    match spec.hyperelliptic_status() {
        HyperellipticStatus::Asserted => None,
        HyperellipticStatus::Denied => Some("hyperellipticity denied".into()),
        HyperellipticStatus::Unknown => {
            let verdict = hyperelliptic_verdict(report.genus, report.n, &report.s_by_genus, report.sigma);
            if verdict.status == CheckStatus::Pass {
                None
            } else {
                Some("hyperellipticity not asserted and local formula does not match".into())
            }
        }
    }
}

/// Every check, keyed by name.
pub fn run_checks(spec: &FibrationSpec, report: &FibrationReport) -> BTreeMap<String, CheckResult> {
    let mut out = BTreeMap::new();
    let closure = if report.base == Base::Sphere {
        CheckResult::pass_if(
            report.closure,
            if report.closure {
                "homologically closed"
            } else {
                "total monodromy is not the identity on H_1"
            },
        )
    } else {
        CheckResult::na("needs a sphere base")
    };
    out.insert(CLOSURE.to_string(), closure);
    out.insert(LOCAL_SIGNATURE.to_string(), hyperelliptic_cross_check(report, spec));
    let endo = match hyperelliptic_precondition(report, spec) {
        Some(reason) => CheckResult::na(reason),
        None => endo_congruence(report.genus, report.n, &report.s_by_genus),
    };
    out.insert(ENDO_CONGRUENCE.to_string(), endo);
    for (name, result) in bound_checks(report, spec) {
        out.insert(name.to_string(), result);
    }
    out.insert(REDUCIBLE_FIBERS.to_string(), reducible_fibers_check(report, spec));
    out.insert(GEOGRAPHY_CONSTANTS.to_string(), geography_constants_check(report.genus));
    out.insert(GEOGRAPHY.to_string(), geography_check(report, spec));
    out
}

/// Total signature for every cyclic rotation of a homologically closed word.
///
/// Per-step traces differ between rotations; only the totals are compared.
/// Words that are not homologically closed are not tested.
pub fn rotation_experiment(spec: &FibrationSpec) -> Result<CheckResult> {
    if !closure_check(spec)? {
        return Ok(CheckResult::na("word is not homologically closed"));
    }
    let base = compute_signature(spec)?.sigma;
    let mut differing = Vec::new();
    for k in 1..spec.word().len() {
        let sigma = compute_signature(&spec.rotated(k))?.sigma;
        if sigma != base {
            differing.push(format!("rotation {k}: {sigma}"));
        }
    }
    Ok(if differing.is_empty() {
        CheckResult::new(
            CheckStatus::Pass,
            format!("all {} rotations give σ = {base}", spec.word().len()),
        )
    } else {
        CheckResult::new(CheckStatus::Fail, format!("σ = {base} but {}", differing.join(", ")))
    })
}

/// Replaces the separating twist at 1-based `position` of a genus-2 word by
/// the twelve nonseparating twists `(c1 c2)^6`, where `[c1] = a1`,
/// `[c2] = b1`. Labels are taken fresh if `c1`/`c2` already name other
/// curves in the word.
pub fn substitute_separating(spec: &FibrationSpec, position: usize) -> Result<FibrationSpec> {
    if spec.genus() != 2 {
        return Err(Error::Validation(format!(
            "substitution is defined for genus 2, got genus {}",
            spec.genus()
        )));
    }
    let word = spec.word();
    if position == 0 || position > word.len() {
        return Err(Error::Validation(format!(
            "position {position} outside 1..={}",
            word.len()
        )));
    }
    let target = &word[position - 1];
    if !target.is_separating() || target.is_inverse() {
        return Err(Error::Validation(format!(
            "position {position} ({}) is not a positive separating twist",
            target.label()
        )));
    }
    let ctx: GenusContext = spec.ctx();
    let c1 = VanishingCycle::nonseparating(fresh_label(word, "c1", &HomologyClass::a(ctx, 1)), HomologyClass::a(ctx, 1))?;
    let c2 = VanishingCycle::nonseparating(fresh_label(word, "c2", &HomologyClass::b(ctx, 1)), HomologyClass::b(ctx, 1))?;
    let mut new_word = Vec::with_capacity(word.len() + 11);
    new_word.extend_from_slice(&word[..position - 1]);
    for _ in 0..6 {
        new_word.push(c1.clone());
        new_word.push(c2.clone());
    }
    new_word.extend_from_slice(&word[position..]);
    spec.with_word(new_word)
}

fn fresh_label(word: &[VanishingCycle], wanted: &str, class: &HomologyClass) -> String {
    let clashes = |label: &str| {
        word.iter()
            .any(|c| c.label() == label && (c.is_separating() || c.class() != *class))
    };
    let mut label = wanted.to_string();
    let mut k = 1;
    while clashes(&label) {
        label = format!("{wanted}_{k}");
        k += 1;
    }
    label
}

/// Whether `x` is a whole number.
pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one() || x.numer().is_zero()
}
