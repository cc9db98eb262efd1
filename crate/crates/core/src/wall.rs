//! Relative signature of a single handle attachment.
//!
//! Attaching a 2-handle along a vanishing cycle `γ` to a 4-manifold whose
//! boundary is the mapping torus of `φ` changes the signature by an amount
//! in `{-1, 0, +1}`. Wall's non-additivity formula reduces that change to
//! the sign of a single product `p·q`, where `p[l] + q[m]` spans the kernel
//! `C` of `H_1(∂ν(γ)) → H_1(complement of ν(γ))` written in the
//! longitude/meridian basis of the attaching solid torus.
//!
//! The kernel is computed from an explicit presentation of the complement's
//! first homology. The presentation is written for `γ = a1`; a general
//! nonseparating class is first moved to `a1` by a symplectic change of basis
//! (see [`symplectic_completion`]).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cycle::{CycleKind, VanishingCycle};
use crate::error::{Error, Result};
use crate::homology::{symplectic_completion, GenusContext, HomologyClass, SymplecticMap};
use crate::linalg::{primitive_part, RatMatrix};
use crate::small::{self, SmallKernel, SmallMap};

/// First homology of the mapping torus minus a neighbourhood of `a1`.
///
/// Generators are `a1, b1, …, a_g, b_g, b1'` where `b1'` is the copy of `b1`
/// on the far side of the removed annulus. The free generator coming from
/// the circle direction appears in no relation and in neither image, so it
/// is left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementPresentation {
    pub ctx: GenusContext,
    /// One relation per basis class, in basis order, each of length `2g + 1`.
    pub relations: Vec<Vec<BigInt>>,
    /// Image of the pushed-off longitude `l'`.
    pub img_l: Vec<BigInt>,
    /// Image of the meridian `m'`.
    pub img_m: Vec<BigInt>,
}

/// Generator `u[l'] + v[m']` of the kernel line `C`.
///
/// Canonical form: `gcd(u, v) = 1`, `u ≥ 0`, and `v > 0` when `u = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KernelLine {
    pub u: BigInt,
    pub v: BigInt,
}

impl KernelLine {
    fn canonical(u: BigInt, v: BigInt) -> Self {
        let mut pair = primitive_part(&[u, v]);
        let v = pair.pop().expect("pair");
        let u = pair.pop().expect("pair");
        // primitive_part makes the first nonzero entry positive, which is
        // exactly u > 0, or u = 0 and v > 0.
        KernelLine { u, v }
    }
}

impl fmt::Display for KernelLine {
    /// Writes the generator the way hand computations usually do, meridian
    /// first: `<[m']+2[l']>`, `<-[m']+4[l']>`, `<[l']>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |c: &BigInt, name: &str, first: bool| -> String {
            let sign = match (c.is_negative(), first) {
                (true, _) => "-",
                (false, true) => "",
                (false, false) => "+",
            };
            let mag = c.abs();
            let mag = if mag.is_one() { String::new() } else { mag.to_string() };
            format!("{sign}{mag}[{name}]")
        };
        let mut out = String::new();
        if !self.v.is_zero() {
            out.push_str(&term(&self.v, "m'", true));
        }
        if !self.u.is_zero() {
            out.push_str(&term(&self.u, "l'", out.is_empty()));
        }
        write!(f, "<{out}>")
    }
}

/// Result of attaching one handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    /// Signature change, always in `{-1, 0, +1}`.
    pub increment: i32,
    /// Kernel generator in the `(l', m')` basis; absent for separating cycles.
    pub kernel: Option<KernelLine>,
    /// The same generator `p[l] + q[m]` after the framing identification.
    pub framed: Option<(BigInt, BigInt)>,
    /// Set for negative twists, whose conventions are not pinned by any
    /// worked example.
    pub experimental: bool,
}

/// Presentation of the complement of `a1` in the mapping torus of `phi`.
///
/// Relations: `e - φ(e)` for every basis class `e ≠ b1`, and `b1' - φ(b1)`.
/// Images: `l' ↦ a1`, `m' ↦ b1 - b1'`.
pub fn build_presentation(phi: &SymplecticMap) -> ComplementPresentation {
    let ctx = phi.ctx();
    let n = ctx.dim();
    let extra = n;
    let mut relations = Vec::with_capacity(n);
    for j in 0..n {
        let image = phi.column(j);
        let mut rel: Vec<BigInt> = image.into_iter().map(|x| -x).collect();
        rel.push(BigInt::zero());
        if j == 1 {
            rel[extra] += 1;
        } else {
            rel[j] += 1;
        }
        relations.push(rel);
    }
    let mut img_l = vec![BigInt::zero(); n + 1];
    img_l[0] = BigInt::one();
    let mut img_m = vec![BigInt::zero(); n + 1];
    img_m[1] = BigInt::one();
    img_m[extra] = BigInt::from(-1);
    ComplementPresentation {
        ctx,
        relations,
        img_l,
        img_m,
    }
}

/// The line of `(u, v)` with `u·img_l + v·img_m` in the span of the relations.
///
/// Solved as the null space of the matrix with columns
/// `img_l, img_m, r_1, …, r_2g`, projected onto its first two coordinates.
/// That projection is one-dimensional for every genuine input; anything
/// else is reported as [`Error::InternalInvariant`].
pub fn kernel_line(p: &ComplementPresentation) -> Result<KernelLine> {
    let rows = p.img_l.len();
    let mut columns = Vec::with_capacity(p.relations.len() + 2);
    columns.push(p.img_l.clone());
    columns.push(p.img_m.clone());
    columns.extend(p.relations.iter().cloned());
    let m = RatMatrix::from_int_columns(rows, &columns)?;
    let projections: Vec<Vec<BigInt>> = m
        .kernel_basis()
        .into_iter()
        .map(|k| vec![k[0].clone(), k[1].clone()])
        .filter(|uv| uv.iter().any(|x| !x.is_zero()))
        .collect();
    let dim = RatMatrix::from_int_rows(2, &projections)?.rank();
    if dim != 1 {
        return Err(Error::InternalInvariant(format!(
            "kernel of the boundary torus has dimension {dim}, expected 1"
        )));
    }
    let [u, v]: [BigInt; 2] = projections[0].clone().try_into().expect("pair");
    Ok(KernelLine::canonical(u, v))
}

fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Kernel line for a nonseparating class, using a caller-supplied change of
/// basis `s` with `s(γ) = a1`.
pub fn kernel_line_with_completion(
    phi: &SymplecticMap,
    gamma: &HomologyClass,
    s: &SymplecticMap,
) -> Result<KernelLine> {
    let a1 = HomologyClass::a(phi.ctx(), 1);
    if s.apply(gamma)? != a1 || !s.is_symplectic() {
        return Err(Error::Validation(format!(
            "change of basis does not send {gamma} to a1 symplectically"
        )));
    }
    let conjugated = phi.conjugate_by(s)?;
    kernel_line(&build_presentation(&conjugated))
}

/// Relative signature of a positive twist, using the given change of basis
/// for nonseparating cycles. [`relative_signature`] uses the canonical
/// completion; other completions must give the same increment.
pub fn relative_signature_with_completion(
    phi: &SymplecticMap,
    cycle: &VanishingCycle,
    s: &SymplecticMap,
) -> Result<StepOutcome> {
    match cycle.kind() {
        CycleKind::Separating { .. } => Ok(separating_outcome(false)),
        CycleKind::Nonseparating(gamma) => {
            let k = kernel_line_with_completion(phi, gamma, s)?;
            Ok(framed_outcome(k, false))
        }
    }
}

fn separating_outcome(negative: bool) -> StepOutcome {
    StepOutcome {
        increment: if negative { 1 } else { -1 },
        kernel: None,
        framed: None,
        experimental: negative,
    }
}

/// Applies the framing identification and the sign rule.
///
/// With framing `-1` the solid-torus classes are `[l] = [l'] - [m']`,
/// `[m] = [m']`, so `u[l'] + v[m'] = u[l] + (u + v)[m]`. With framing `+1`,
/// `[l] = [l'] + [m']` gives `u[l] + (v - u)[m]`. In both cases the
/// signature changes by `-sign(p·q)`.
fn framed_outcome(k: KernelLine, negative: bool) -> StepOutcome {
    let p = k.u.clone();
    let q = if negative { &k.v - &k.u } else { &k.u + &k.v };
    let increment = -(sign(&p) * sign(&q));
    StepOutcome {
        increment,
        kernel: Some(k),
        framed: Some((p, q)),
        experimental: negative,
    }
}

/// Signature change from attaching a `-1`-framed handle along `cycle` to a
/// manifold whose boundary monodromy acts on homology by `phi`.
///
/// Separating cycles always give `-1`. Negative twists are rejected here;
/// see [`relative_signature_achiral`].
pub fn relative_signature(phi: &SymplecticMap, cycle: &VanishingCycle) -> Result<StepOutcome> {
    step(phi.ctx(), small_map(phi).as_ref(), &|| phi.clone(), cycle, false)
}

/// Experimental extension to negative twists (`+1`-framed handles).
///
/// Positive twists go through [`relative_signature`] unchanged. For a
/// negative twist the kernel is computed from the same presentation, the
/// `+1` framing identification is used, and the sign rule is unchanged; a
/// negative separating twist contributes `+1`. Outcomes for negative twists
/// are flagged `experimental`.
pub fn relative_signature_achiral(phi: &SymplecticMap, cycle: &VanishingCycle) -> Result<StepOutcome> {
    step(phi.ctx(), small_map(phi).as_ref(), &|| phi.clone(), cycle, true)
}

fn small_map(phi: &SymplecticMap) -> Option<SmallMap<i128>> {
    let dim = phi.ctx().dim();
    let cols = (0..dim)
        .map(|j| phi.column(j).iter().map(ToPrimitive::to_i128).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some(SmallMap { dim, cols })
}

fn small_class(gamma: &HomologyClass) -> Option<Vec<i128>> {
    gamma.coeffs().iter().map(ToPrimitive::to_i128).collect()
}

/// Kernel in `i64` when everything fits, else in `i128`; `None` if both overflow.
fn small_kernel(phi: &SmallMap<i128>, gamma: &[i128]) -> Option<SmallKernel<i128>> {
    // Entries this small leave room for the products formed during elimination.
    const NARROW: i128 = 1 << 12;
    let fits = |x: &i128| x.abs() < NARROW;
    let narrow = (phi.cols.iter().flatten().all(fits) && gamma.iter().all(fits))
        .then(|| phi.cast::<i64>())
        .flatten()
        .zip(gamma.iter().map(|&x| i64::try_from(x).ok()).collect::<Option<Vec<_>>>());
    if let Some(found) = narrow.and_then(|(m, g)| small::kernel(&m, &g)) {
        return Some(match found {
            SmallKernel::Line(u, v) => SmallKernel::Line(u.into(), v.into()),
            SmallKernel::Degenerate(d) => SmallKernel::Degenerate(d),
        });
    }
    small::kernel(phi, gamma)
}

/// One handle step. Tries machine integers first and falls back to the
/// big-integer presentation when anything overflows.
fn step(
    ctx: GenusContext,
    small: Option<&SmallMap<i128>>,
    big: &dyn Fn() -> SymplecticMap,
    cycle: &VanishingCycle,
    achiral: bool,
) -> Result<StepOutcome> {
    if cycle.ctx() != ctx {
        return Err(Error::ContextMismatch {
            left: ctx.genus(),
            right: cycle.ctx().genus(),
        });
    }
    let negative = cycle.is_inverse();
    if negative && !achiral {
        return Err(Error::Validation(format!(
            "negative twist {} requires achiral mode",
            cycle.label()
        )));
    }
    let gamma = match cycle.kind() {
        CycleKind::Separating { .. } => return Ok(separating_outcome(negative)),
        CycleKind::Nonseparating(gamma) => gamma,
    };
    if let (Some(m), Some(g)) = (small, small_class(gamma)) {
        match small_kernel(m, &g) {
            Some(SmallKernel::Line(u, v)) => {
                return Ok(framed_outcome(KernelLine::canonical(u.into(), v.into()), negative))
            }
            Some(SmallKernel::Degenerate(dim)) => {
                return Err(Error::InternalInvariant(format!(
                    "kernel of the boundary torus has dimension {dim}, expected 1"
                )))
            }
            None => {}
        }
    }
    let s = symplectic_completion(gamma)?;
    let k = kernel_line_with_completion(&big(), gamma, &s)?;
    Ok(framed_outcome(k, negative))
}

/// Homology action of a growing prefix of a word, kept in machine integers
/// until an entry no longer fits.
#[derive(Debug, Clone)]
pub(crate) struct Prefix {
    ctx: GenusContext,
    small: Option<SmallMap<i128>>,
    big: Option<SymplecticMap>,
}

impl Prefix {
    pub fn identity(ctx: GenusContext) -> Self {
        Prefix {
            ctx,
            small: Some(SmallMap::identity(ctx.dim())),
            big: None,
        }
    }

    pub fn to_map(&self) -> SymplecticMap {
        match (&self.small, &self.big) {
            (_, Some(big)) => big.clone(),
            (Some(small), None) => {
                let n = small.dim;
                let rows = (0..n)
                    .map(|i| (0..n).map(|j| BigInt::from(small.cols[j][i])).collect())
                    .collect();
                SymplecticMap::from_matrix(self.ctx, rows).expect("products of transvections are symplectic")
            }
            (None, None) => unreachable!("prefix holds one representation"),
        }
    }

    /// Post-composes with the action of `cycle`.
    pub fn push(&mut self, cycle: &VanishingCycle) -> Result<()> {
        if let CycleKind::Nonseparating(gamma) = cycle.kind() {
            if let Some(small) = &mut self.small {
                let before = small.clone();
                let fits = small_class(gamma).and_then(|g| small.then_transvection(&g, cycle.is_inverse()));
                if fits.is_none() {
                    *small = before;
                    self.big = Some(self.to_map());
                    self.small = None;
                }
            }
            if let Some(big) = &self.big {
                self.big = Some(cycle.action().after(big)?);
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        match &self.small {
            Some(small) => small.is_identity(),
            None => self.to_map().is_identity(),
        }
    }

    /// Handle step for `cycle` attached after this prefix.
    pub fn step(&self, cycle: &VanishingCycle, achiral: bool) -> Result<StepOutcome> {
        step(self.ctx, self.small.as_ref(), &|| self.to_map(), cycle, achiral)
    }
}
