//! Accumulating relative signatures over a whole monodromy word.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::checks::{run_checks, CheckResult};
use crate::cycle::VanishingCycle;
use crate::error::{Error, Result};
use crate::homology::{GenusContext, HomologyClass, SymplecticMap};
use crate::linalg::Rational;
use crate::wall::{KernelLine, Prefix};

/// Base surface of the fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    Disk,
    Sphere,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Disk => "D2",
            Base::Sphere => "S2",
        })
    }
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D2" => Ok(Base::Disk),
            "S2" => Ok(Base::Sphere),
            other => Err(Error::Semantic(format!("unknown base {other:?}, expected D2 or S2"))),
        }
    }
}

/// What the user claims about hyperellipticity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Hyperelliptic {
    #[default]
    Auto,
    Asserted,
    Denied,
}

impl fmt::Display for Hyperelliptic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hyperelliptic::Auto => "auto",
            Hyperelliptic::Asserted => "yes",
            Hyperelliptic::Denied => "no",
        })
    }
}

/// Hyperellipticity after applying the genus rule: every fibration of
/// genus at most two is hyperelliptic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperellipticStatus {
    Asserted,
    Denied,
    /// Genus at least three and no assertion either way.
    Unknown,
}

/// A fibration given by its genus, base and ordered twist word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationSpec {
    ctx: GenusContext,
    base: Base,
    word: Vec<VanishingCycle>,
    hyperelliptic: Hyperelliptic,
    achiral: bool,
}

impl FibrationSpec {
    pub fn new(ctx: GenusContext, base: Base, word: Vec<VanishingCycle>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Validation("monodromy word must contain at least one twist".into()));
        }
        for cycle in &word {
            if cycle.ctx() != ctx {
                return Err(Error::ContextMismatch {
                    left: ctx.genus(),
                    right: cycle.ctx().genus(),
                });
            }
        }
        let achiral = word.iter().any(VanishingCycle::is_inverse);
        Ok(FibrationSpec {
            ctx,
            base,
            word,
            hyperelliptic: Hyperelliptic::Auto,
            achiral,
        })
    }

    pub fn with_hyperelliptic(mut self, h: Hyperelliptic) -> Self {
        self.hyperelliptic = h;
        self
    }

    pub fn ctx(&self) -> GenusContext {
        self.ctx
    }

    pub fn genus(&self) -> usize {
        self.ctx.genus()
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn word(&self) -> &[VanishingCycle] {
        &self.word
    }

    pub fn hyperelliptic(&self) -> Hyperelliptic {
        self.hyperelliptic
    }

    /// Whether the word contains negative twists.
    pub fn is_achiral(&self) -> bool {
        self.achiral
    }

    pub fn hyperelliptic_status(&self) -> HyperellipticStatus {
        match (self.hyperelliptic, self.genus() <= 2) {
            (Hyperelliptic::Denied, _) => HyperellipticStatus::Denied,
            (Hyperelliptic::Asserted, _) | (Hyperelliptic::Auto, true) => HyperellipticStatus::Asserted,
            (Hyperelliptic::Auto, false) => HyperellipticStatus::Unknown,
        }
    }

    /// Same fibration with a different word.
    pub fn with_word(&self, word: Vec<VanishingCycle>) -> Result<Self> {
        Ok(FibrationSpec::new(self.ctx, self.base, word)?.with_hyperelliptic(self.hyperelliptic))
    }

    /// The word rotated left by `k` positions.
    pub fn rotated(&self, k: usize) -> Self {
        let mut word = self.word.clone();
        let len = word.len();
        word.rotate_left(k % len);
        FibrationSpec { word, ..self.clone() }
    }

    /// Every twist conjugated by `s`: classes are replaced by their images.
    pub fn conjugated(&self, s: &SymplecticMap) -> Result<Self> {
        let word = self
            .word
            .iter()
            .map(|c| match c.kind() {
                crate::cycle::CycleKind::Separating { .. } => Ok(c.clone()),
                crate::cycle::CycleKind::Nonseparating(gamma) => {
                    let moved = VanishingCycle::nonseparating(c.label(), s.apply(gamma)?)?;
                    Ok(if c.is_inverse() { moved.inverted() } else { moved })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        self.with_word(word)
    }

    /// Number of nonseparating twists and separating twists by piece genus.
    pub fn counts(&self) -> (usize, BTreeMap<usize, usize>) {
        let mut n = 0;
        let mut s = BTreeMap::new();
        for c in &self.word {
            match c.piece_genus() {
                Some(h) => *s.entry(h).or_insert(0) += 1,
                None => n += 1,
            }
        }
        (n, s)
    }
}

/// Trace entry for one handle attachment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    /// 1-based position in the word.
    pub index: usize,
    pub label: String,
    /// `None` for nonseparating twists, the piece genus otherwise.
    pub piece_genus: Option<usize>,
    pub class: HomologyClass,
    pub inverse: bool,
    pub kernel: Option<KernelLine>,
    pub framed: Option<(BigInt, BigInt)>,
    pub increment: i32,
    pub running_sigma: i64,
}

/// Everything computed for one fibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationReport {
    pub genus: usize,
    pub base: Base,
    pub t: usize,
    pub sigma: i64,
    pub euler: i64,
    pub n: usize,
    pub s_by_genus: BTreeMap<usize, usize>,
    pub s: usize,
    /// `3σ + 2e`, only over the sphere.
    pub c1_squared: Option<Rational>,
    /// `(σ + e) / 4`, only over the sphere.
    pub chi: Option<Rational>,
    pub steps: Vec<StepRecord>,
    pub checks: BTreeMap<String, CheckResult>,
    /// Whether the total monodromy acts trivially on `H_1`.
    pub closure: bool,
    /// Set when the word contains negative twists.
    pub experimental: bool,
}

/// Signature and invariants of the fibration, with every applicable check.
pub fn compute(spec: &FibrationSpec) -> Result<FibrationReport> {
    let mut report = compute_signature(spec)?;
    report.checks = run_checks(spec, &report);
    Ok(report)
}

/// Like [`compute`] but leaves `checks` empty.
pub fn compute_signature(spec: &FibrationSpec) -> Result<FibrationReport> {
    let ctx = spec.ctx();
    let g = ctx.genus() as i64;
    let mut prefix = Prefix::identity(ctx);
    let mut running = 0i64;
    let mut steps = Vec::with_capacity(spec.word.len());
    for (i, cycle) in spec.word.iter().enumerate() {
        let outcome = prefix.step(cycle, spec.achiral)?;
        running += i64::from(outcome.increment);
        steps.push(StepRecord {
            index: i + 1,
            label: cycle.label().to_string(),
            piece_genus: cycle.piece_genus(),
            class: cycle.class(),
            inverse: cycle.is_inverse(),
            kernel: outcome.kernel,
            framed: outcome.framed,
            increment: outcome.increment,
            running_sigma: running,
        });
        prefix.push(cycle)?;
    }
    let t = spec.word.len();
    let (n, s_by_genus) = spec.counts();
    let s = s_by_genus.values().sum();
    let euler = match spec.base {
        Base::Disk => 2 - 2 * g + t as i64,
        Base::Sphere => 4 - 4 * g + t as i64,
    };
    let (c1_squared, chi) = match spec.base {
        Base::Sphere => (
            Some(Rational::from_integer(BigInt::from(3 * running + 2 * euler))),
            Some(Rational::new(BigInt::from(running + euler), BigInt::from(4))),
        ),
        Base::Disk => (None, None),
    };
    Ok(FibrationReport {
        genus: ctx.genus(),
        base: spec.base,
        t,
        sigma: running,
        euler,
        n,
        s_by_genus,
        s,
        c1_squared,
        chi,
        steps,
        checks: BTreeMap::new(),
        closure: prefix.is_identity(),
        experimental: spec.achiral,
    })
}
