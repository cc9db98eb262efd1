//! Test-side helpers: random inputs and an oracle for the handle step that
//! shares no code with the engine beyond the public data types.

#![allow(dead_code)]

use lefschetz::homology::{GenusContext, HomologyClass, SymplecticMap};
use lefschetz::VanishingCycle;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn ctx(g: usize) -> GenusContext {
    GenusContext::new(g).unwrap()
}

/// `Φ(x, y) = Σ (x_b y_a - x_a y_b)` over the pairs `(a_i, b_i)`.
pub fn phi_pair(x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for i in (0..x.len()).step_by(2) {
        s += &x[i + 1] * &y[i] - &x[i] * &y[i + 1];
    }
    s
}

/// `x ↦ x + ε Φ(x, γ) γ` on a column vector.
pub fn transvect(x: &[BigInt], gamma: &[BigInt], eps: i32) -> Vec<BigInt> {
    let c = phi_pair(x, gamma) * BigInt::from(eps);
    x.iter().zip(gamma).map(|(xi, gi)| xi + &c * gi).collect()
}

/// Matrix columns as vectors, starting from the identity.
pub fn identity_columns(dim: usize) -> Vec<Vec<BigInt>> {
    (0..dim)
        .map(|j| (0..dim).map(|i| BigInt::from((i == j) as i32)).collect())
        .collect()
}

/// Applies the transvection to every column (post-composition).
pub fn then_twist(columns: &mut [Vec<BigInt>], gamma: &[BigInt], eps: i32) {
    for col in columns.iter_mut() {
        *col = transvect(col, gamma, eps);
    }
}

pub fn to_map(ctx: GenusContext, columns: &[Vec<BigInt>]) -> SymplecticMap {
    let n = columns.len();
    let rows: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| columns[j][i].clone()).collect()).collect();
    SymplecticMap::from_matrix(ctx, rows).unwrap()
}

pub fn columns_of(map: &SymplecticMap) -> Vec<Vec<BigInt>> {
    (0..map.ctx().dim()).map(|j| map.column(j)).collect()
}

/// A primitive nonzero class with entries drawn from `-r..=r` before
/// dividing by the content.
pub fn random_primitive(rng: &mut impl Rng, dim: usize, r: i64) -> Vec<BigInt> {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-r..=r)).collect();
        let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g != 0 {
            return v.into_iter().map(|x| BigInt::from(x / g)).collect();
        }
    }
}

pub fn class(ctx: GenusContext, v: &[BigInt]) -> HomologyClass {
    HomologyClass::new(ctx, v.to_vec()).unwrap()
}

pub fn basis(ctx: GenusContext, idx: usize) -> Vec<BigInt> {
    (0..ctx.dim()).map(|i| BigInt::from((i == idx) as i32)).collect()
}

/// Chain classes written out by hand: `a1, b1, a1+a2, b2, …, a_g`.
pub fn chain(ctx: GenusContext) -> Vec<Vec<BigInt>> {
    let g = ctx.genus();
    let mut out = vec![basis(ctx, 0)];
    for i in 0..g {
        out.push(basis(ctx, 2 * i + 1));
        let next = if i + 1 < g {
            basis(ctx, 2 * i)
                .iter()
                .zip(basis(ctx, 2 * i + 2))
                .map(|(x, y)| x + y)
                .collect()
        } else {
            basis(ctx, 2 * i)
        };
        out.push(next);
    }
    out
}

/// A random positive word: chain curves, random primitive classes and
/// (from genus two on) separating twists.
pub fn random_word(rng: &mut impl Rng, ctx: GenusContext, len: usize) -> Vec<VanishingCycle> {
    let chain = chain(ctx);
    let g = ctx.genus();
    (0..len)
        .map(|k| {
            let roll: f64 = rng.gen();
            if g >= 2 && roll < 0.1 {
                let h = rng.gen_range(1..=g / 2);
                VanishingCycle::separating(ctx, format!("s{h}"), h).unwrap()
            } else if roll < 0.75 {
                let i = rng.gen_range(0..chain.len());
                VanishingCycle::nonseparating(format!("c{}", i + 1), class(ctx, &chain[i])).unwrap()
            } else {
                let v = random_primitive(rng, ctx.dim(), 3);
                VanishingCycle::nonseparating(format!("x{k}"), class(ctx, &v)).unwrap()
            }
        })
        .collect()
}

/// Homology action of a random positive word of length `len`, built with
/// the test-side transvection.
pub fn random_monodromy(rng: &mut impl Rng, ctx: GenusContext, len: usize) -> SymplecticMap {
    let mut cols = identity_columns(ctx.dim());
    for c in random_word(rng, ctx, len) {
        if let lefschetz::CycleKind::Nonseparating(gamma) = c.kind() {
            then_twist(&mut cols, gamma.coeffs(), 1);
        }
    }
    to_map(ctx, &cols)
}

/// A random product of `k` transvections and inverse transvections.
pub fn random_symplectic(rng: &mut impl Rng, ctx: GenusContext, k: usize, fix_a1: bool) -> SymplecticMap {
    let mut cols = identity_columns(ctx.dim());
    for _ in 0..k {
        let mut x = random_primitive(rng, ctx.dim(), 2);
        if fix_a1 {
            // Φ(a1, x) = -x_{b1}; a zero b1-coefficient keeps a1 fixed.
            x[1] = BigInt::zero();
            if x.iter().all(Zero::is_zero) {
                continue;
            }
        }
        let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
        then_twist(&mut cols, &x, eps);
    }
    to_map(ctx, &cols)
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Residue of `v` modulo the rational span of `rows` (row echelon reduction).
pub fn residue(rows: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigRational> {
    let mut echelon: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for r in rows {
        let mut r: Vec<BigRational> = r.iter().map(rat).collect();
        reduce(&echelon, &mut r);
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            let lead = r[p].clone();
            r.iter_mut().for_each(|x| *x /= lead.clone());
            for (_, e) in echelon.iter_mut() {
                if !e[p].is_zero() {
                    let f = e[p].clone();
                    for (ei, ri) in e.iter_mut().zip(&r) {
                        *ei -= &f * ri;
                    }
                }
            }
            echelon.push((p, r));
        }
    }
    let mut out: Vec<BigRational> = v.iter().map(rat).collect();
    reduce(&echelon, &mut out);
    out
}

fn reduce(echelon: &[(usize, Vec<BigRational>)], r: &mut [BigRational]) {
    for (p, e) in echelon {
        if !r[*p].is_zero() {
            let f = r[*p].clone();
            for (ri, ei) in r.iter_mut().zip(e) {
                *ri -= &f * ei;
            }
        }
    }
}

/// Presentation for a basis curve `γ = a_i` (`is_a`) or `γ = b_i`, written
/// directly from the complement's generators without any change of basis.
/// Returns `(relations, img_l, img_m)` over `a1 … b_g, e'`.
pub fn basis_presentation(
    phi_columns: &[Vec<BigInt>],
    i: usize,
    is_a: bool,
) -> (Vec<Vec<BigInt>>, Vec<BigInt>, Vec<BigInt>) {
    let n = phi_columns.len();
    let (gamma_idx, dual_idx) = if is_a { (2 * i, 2 * i + 1) } else { (2 * i + 1, 2 * i) };
    let mut rels = Vec::new();
    for (j, image) in phi_columns.iter().enumerate() {
        let mut r: Vec<BigInt> = image.iter().map(|x| -x).collect();
        r.push(BigInt::zero());
        if j == dual_idx {
            r[n] += 1;
        } else {
            r[j] += 1;
        }
        rels.push(r);
    }
    let mut l = vec![BigInt::zero(); n + 1];
    l[gamma_idx] = BigInt::one();
    let mut m = vec![BigInt::zero(); n + 1];
    if is_a {
        m[dual_idx] = BigInt::one();
        m[n] = BigInt::from(-1);
    } else {
        m[dual_idx] = BigInt::from(-1);
        m[n] = BigInt::one();
    }
    (rels, l, m)
}

/// The `m'` image `(e - φ(e)) / Φ(e, γ)` for a basis class `e`, padded with
/// a zero coordinate for the extra generator. `None` when `Φ(e, γ) = 0`.
pub fn meridian_formula(phi_columns: &[Vec<BigInt>], e_idx: usize, gamma: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = phi_columns.len();
    let e: Vec<BigInt> = (0..n).map(|i| BigInt::from((i == e_idx) as i32)).collect();
    let d = phi_pair(&e, gamma);
    if d.is_zero() {
        return None;
    }
    let mut out: Vec<BigRational> = e
        .iter()
        .zip(&phi_columns[e_idx])
        .map(|(x, y)| BigRational::new(x - y, d.clone()))
        .collect();
    out.push(BigRational::zero());
    Some(out)
}

/// Whether a rational vector lies in the span of integer rows.
pub fn in_span_q(rows: &[Vec<BigInt>], v: &[BigRational]) -> bool {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * rat(&den)).to_integer()).collect();
    residue(rows, &scaled).iter().all(Zero::is_zero)
}

/// Canonical `(u, v)` with `u·l + v·m` in the span of `rels`, or `None` if
/// that set of pairs is not a line.
pub fn oracle_kernel(rels: &[Vec<BigInt>], l: &[BigInt], m: &[BigInt]) -> Option<(BigInt, BigInt)> {
    let rl = residue(rels, l);
    let rm = residue(rels, m);
    let zl = rl.iter().all(Zero::is_zero);
    let zm = rm.iter().all(Zero::is_zero);
    let (u, v) = match (zl, zm) {
        (true, true) => return None,
        (true, false) => (BigRational::one(), BigRational::zero()),
        (false, true) => (BigRational::zero(), BigRational::one()),
        (false, false) => {
            let k = rl.iter().position(|x| !x.is_zero())?;
            let (u, v) = (rm[k].clone(), -rl[k].clone());
            let ok = rl.iter().zip(&rm).all(|(a, b)| (&u * a + &v * b).is_zero());
            if !ok {
                return None;
            }
            (u, v)
        }
    };
    let den = u.denom().lcm(v.denom());
    let (mut u, mut v) = ((u * rat(&den)).to_integer(), (v * rat(&den)).to_integer());
    let g = u.gcd(&v);
    u /= &g;
    v /= &g;
    if u.is_negative() || (u.is_zero() && v.is_negative()) {
        u = -u;
        v = -v;
    }
    Some((u, v))
}

/// Increment after the `-1` framing change: `-sign(u (u + v))`.
pub fn oracle_increment(u: &BigInt, v: &BigInt) -> i32 {
    let pq = u * (u + v);
    if pq.is_positive() {
        -1
    } else if pq.is_negative() {
        1
    } else {
        0
    }
}
