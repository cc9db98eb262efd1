//! First homology of a closed genus-g surface.
//!
//! Classes are integer vectors in the ordered basis `a1, b1, a2, b2, …`.
//! The intersection pairing is fixed by `Φ(a_i, b_i) = -1`,
//! `Φ(b_i, a_i) = +1`, all other basis pairings zero, and a positive Dehn
//! twist about `γ` acts by the transvection `x ↦ x + Φ(x, γ) γ`. These two
//! conventions are chosen together: flipping only one of them reverses the
//! sign of every relative signature the engine computes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{content, extended_gcd, primitive_part};

/// The genus of the surface, which fixes the rank `2g` of its first homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenusContext {
    genus: usize,
}

impl GenusContext {
    pub fn new(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::Validation("genus must be at least 1".into()));
        }
        Ok(GenusContext { genus })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    /// Gram matrix of the intersection pairing, `Φ(e_i, e_j)`.
    pub fn form(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        let mut j = vec![vec![0; n]; n];
        for i in 0..self.genus {
            j[2 * i][2 * i + 1] = -1;
            j[2 * i + 1][2 * i] = 1;
        }
        j
    }

    /// Intersection pairing on raw coefficient vectors.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(y.len(), self.dim());
        let mut acc = BigInt::zero();
        for i in 0..self.genus {
            let (xa, xb) = (&x[2 * i], &x[2 * i + 1]);
            let (ya, yb) = (&y[2 * i], &y[2 * i + 1]);
            acc += xb * ya - xa * yb;
        }
        acc
    }

    fn check(&self, other: &GenusContext) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch {
                left: self.genus,
                right: other.genus,
            });
        }
        Ok(())
    }

    fn unit(&self, index: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim()];
        v[index] = BigInt::one();
        v
    }
}

/// An integral homology class on the genus-g surface.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    ctx: GenusContext,
    coeffs: Vec<BigInt>,
}

impl HomologyClass {
    pub fn new(ctx: GenusContext, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != ctx.dim() {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim(),
                found: coeffs.len(),
            });
        }
        Ok(HomologyClass { ctx, coeffs })
    }

    pub fn from_i64(ctx: GenusContext, coeffs: &[i64]) -> Result<Self> {
        Self::new(ctx, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(ctx: GenusContext) -> Self {
        HomologyClass {
            ctx,
            coeffs: vec![BigInt::zero(); ctx.dim()],
        }
    }

    /// The basis class `a_i`, with `i` counted from 1.
    pub fn a(ctx: GenusContext, i: usize) -> Self {
        assert!((1..=ctx.genus()).contains(&i), "a_{i} out of range");
        HomologyClass {
            ctx,
            coeffs: ctx.unit(2 * (i - 1)),
        }
    }

    /// The basis class `b_i`, with `i` counted from 1.
    pub fn b(ctx: GenusContext, i: usize) -> Self {
        assert!((1..=ctx.genus()).contains(&i), "b_{i} out of range");
        HomologyClass {
            ctx,
            coeffs: ctx.unit(2 * (i - 1) + 1),
        }
    }

    pub fn ctx(&self) -> GenusContext {
        self.ctx
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_primitive(&self) -> bool {
        content(&self.coeffs).is_one()
    }

    pub fn pairing(&self, other: &HomologyClass) -> Result<BigInt> {
        self.ctx.check(&other.ctx)?;
        Ok(self.ctx.pair(&self.coeffs, &other.coeffs))
    }

    pub fn add(&self, other: &HomologyClass) -> Result<HomologyClass> {
        self.ctx.check(&other.ctx)?;
        Ok(HomologyClass {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> HomologyClass {
        HomologyClass {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|x| x * k).collect(),
        }
    }

    pub fn neg(&self) -> HomologyClass {
        self.scale(&BigInt::from(-1))
    }
}

/// Free function form of [`HomologyClass::pairing`].
pub fn pairing(x: &HomologyClass, y: &HomologyClass) -> Result<BigInt> {
    x.pairing(y)
}

/// Whether the class is a nonzero primitive lattice vector.
pub fn is_primitive(x: &HomologyClass) -> bool {
    x.is_primitive()
}

impl fmt::Display for HomologyClass {
    /// Formats as a linear combination, e.g. `a1 + 2b2 - b1`; zero prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = if idx % 2 == 0 { "a" } else { "b" };
            let sub = idx / 2 + 1;
            let mag = c.abs();
            let mag = if mag.is_one() { String::new() } else { mag.to_string() };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{mag}{name}{sub}")?,
                (true, true) => write!(f, "-{mag}{name}{sub}")?,
                (false, false) => write!(f, " + {mag}{name}{sub}")?,
                (false, true) => write!(f, " - {mag}{name}{sub}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomologyClass(g={}, {})", self.ctx.genus, self)
    }
}

/// An integral symplectic automorphism of `H_1`, acting on column vectors.
///
/// Column `j` of the matrix is the image of the `j`-th basis class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticMap {
    ctx: GenusContext,
    rows: Vec<Vec<BigInt>>,
}

impl SymplecticMap {
    pub fn identity(ctx: GenusContext) -> Self {
        let n = ctx.dim();
        SymplecticMap {
            ctx,
            rows: (0..n).map(|i| ctx.unit(i)).collect(),
        }
    }

    /// Builds a map from a row-major matrix, rejecting anything that does not
    /// preserve the intersection pairing.
    pub fn from_matrix(ctx: GenusContext, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = ctx.dim();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let map = SymplecticMap { ctx, rows };
        if !map.is_symplectic() {
            return Err(Error::Validation("matrix does not preserve the intersection form".into()));
        }
        Ok(map)
    }

    /// Builds a map from the images of the basis classes, in basis order.
    pub fn from_images(ctx: GenusContext, images: &[HomologyClass]) -> Result<Self> {
        if images.len() != ctx.dim() {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim(),
                found: images.len(),
            });
        }
        for img in images {
            ctx.check(&img.ctx)?;
        }
        let n = ctx.dim();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| images[j].coeffs[i].clone()).collect())
            .collect();
        Self::from_matrix(ctx, rows)
    }

    pub fn ctx(&self) -> GenusContext {
        self.ctx
    }

    /// Row-major matrix entries.
    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn apply_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply(&self, x: &HomologyClass) -> Result<HomologyClass> {
        self.ctx.check(&x.ctx)?;
        Ok(HomologyClass {
            ctx: self.ctx,
            coeffs: self.apply_vec(&x.coeffs),
        })
    }

    /// Image of the `j`-th basis class.
    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &SymplecticMap) -> Result<SymplecticMap> {
        self.ctx.check(&inner.ctx)?;
        let n = self.ctx.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.rows[i][k] * &inner.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(SymplecticMap { ctx: self.ctx, rows })
    }

    /// Exact inverse, computed as `J⁻¹ Mᵀ J`.
    pub fn inverse(&self) -> SymplecticMap {
        // For Mᵀ J M = J the inverse is -J Mᵀ J, and both J factors are
        // signed permutations, so this is a relabelling of Mᵀ entries.
        let n = self.ctx.dim();
        let partner = |i: usize| i ^ 1;
        let sign = |i: usize| if i.is_multiple_of(2) { -1i32 } else { 1 };
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                // (-J Mᵀ J)[i][j] = -J[i][p(i)] M[p(j)][p(i)] J[p(j)][j]
                let (pi, pj) = (partner(i), partner(j));
                let s = -sign(i) * sign(pj);
                let m = &self.rows[pj][pi];
                *entry = if s > 0 { m.clone() } else { -m.clone() };
            }
        }
        SymplecticMap { ctx: self.ctx, rows }
    }

    /// `s ∘ self ∘ s⁻¹`.
    pub fn conjugate_by(&self, s: &SymplecticMap) -> Result<SymplecticMap> {
        s.after(self)?.after(&s.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    /// Checks `Φ(M e_i, M e_j) = Φ(e_i, e_j)` for every basis pair.
    pub fn is_symplectic(&self) -> bool {
        let n = self.ctx.dim();
        let cols: Vec<Vec<BigInt>> = (0..n).map(|j| self.column(j)).collect();
        let form = self.ctx.form();
        (0..n).all(|i| (0..n).all(|j| self.ctx.pair(&cols[i], &cols[j]) == BigInt::from(form[i][j])))
    }
}

impl fmt::Debug for SymplecticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "SymplecticMap[{}]", rows.join("; "))
    }
}

/// Matrix product `outer ∘ inner`.
pub fn compose(outer: &SymplecticMap, inner: &SymplecticMap) -> Result<SymplecticMap> {
    outer.after(inner)
}

fn transvection(gamma: &HomologyClass, sign: i64) -> SymplecticMap {
    let ctx = gamma.ctx;
    let n = ctx.dim();
    // Column j: e_j + sign * Φ(e_j, γ) γ
    let mut rows: Vec<Vec<BigInt>> = (0..n).map(|i| ctx.unit(i)).collect();
    for j in 0..n {
        let mut k = ctx.pair(&ctx.unit(j), &gamma.coeffs);
        if k.is_zero() {
            continue;
        }
        k *= sign;
        for (i, row) in rows.iter_mut().enumerate() {
            row[j] += &k * &gamma.coeffs[i];
        }
    }
    SymplecticMap { ctx, rows }
}

/// Homology action of the positive Dehn twist about a curve in class `γ`.
///
/// `T_γ(x) = x + Φ(x, γ) γ`. The zero class (a separating curve) gives the
/// identity, and `T_γ = T_{-γ}`.
pub fn twist_action(gamma: &HomologyClass) -> SymplecticMap {
    transvection(gamma, 1)
}

/// Homology action of the negative Dehn twist, `x ↦ x - Φ(x, γ) γ`.
pub fn inverse_twist_action(gamma: &HomologyClass) -> SymplecticMap {
    transvection(gamma, -1)
}

/// A symplectic `S` with `S(γ) = a1`, for primitive nonzero `γ`.
///
/// Builds a symplectic basis `e1 = γ, f1, e2, f2, …` with `Φ(e_k, f_k) = -1`
/// by repeated extended-gcd steps on the orthogonal complement, then inverts
/// the change of basis. Ties are broken by lowest basis index, so equal inputs
/// give equal outputs.
pub fn symplectic_completion(gamma: &HomologyClass) -> Result<SymplecticMap> {
    if !gamma.is_primitive() {
        return Err(Error::Validation(format!(
            "symplectic completion needs a primitive nonzero class, got {gamma}"
        )));
    }
    let ctx = gamma.ctx;
    let n = ctx.dim();
    let mut spanning: Vec<Vec<BigInt>> = (0..n).map(|i| ctx.unit(i)).collect();
    let mut columns: Vec<Vec<BigInt>> = Vec::with_capacity(n);

    for k in 0..ctx.genus() {
        let e = if k == 0 {
            gamma.coeffs.clone()
        } else {
            let v = spanning
                .iter()
                .find(|v| v.iter().any(|x| !x.is_zero()))
                .ok_or_else(|| Error::InternalInvariant("orthogonal complement collapsed early".into()))?;
            primitive_part(v)
        };
        let pairings: Vec<BigInt> = spanning.iter().map(|s| ctx.pair(&e, s)).collect();
        let (g, coeffs) = extended_gcd(&pairings);
        if !g.is_one() {
            return Err(Error::InternalInvariant(format!(
                "complement is not unimodular (gcd {g}) while completing {gamma}"
            )));
        }
        // Φ(e, Σ c_j s_j) = 1, so f = -Σ c_j s_j has Φ(e, f) = -1.
        let mut f = vec![BigInt::zero(); n];
        for (c, s) in coeffs.iter().zip(&spanning) {
            if c.is_zero() {
                continue;
            }
            for (fi, si) in f.iter_mut().zip(s) {
                *fi -= c * si;
            }
        }
        // Project onto the complement of span(e, f): v + Φ(v, f) e - Φ(v, e) f.
        for s in spanning.iter_mut() {
            let pf = ctx.pair(s, &f);
            let pe = ctx.pair(s, &e);
            for i in 0..n {
                s[i] += &pf * &e[i] - &pe * &f[i];
            }
        }
        spanning.retain(|v| v.iter().any(|x| !x.is_zero()));
        columns.push(e);
        columns.push(f);
    }

    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let basis_change = SymplecticMap { ctx, rows };
    if !basis_change.is_symplectic() {
        return Err(Error::InternalInvariant(format!(
            "completion of {gamma} produced a non-symplectic basis"
        )));
    }
    Ok(basis_change.inverse())
}
