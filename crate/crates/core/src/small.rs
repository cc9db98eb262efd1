//! Machine-integer version of the handle step.
//!
//! Everything here uses checked arithmetic and returns `None` on overflow;
//! callers then retry with a wider type or with big integers. The answers
//! are identical whenever two paths both succeed.

use num_traits::{PrimInt, Signed};

/// Checked machine integers usable by the fast path.
pub(crate) trait Int: PrimInt + Signed + std::fmt::Debug {}
impl Int for i64 {}
impl Int for i128 {}

/// Column-major `dim × dim` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SmallMap<T> {
    pub dim: usize,
    pub cols: Vec<Vec<T>>,
}

fn pair<T: Int>(x: &[T], y: &[T]) -> Option<T> {
    let mut s = T::zero();
    for i in (0..x.len()).step_by(2) {
        let t = x[i + 1].checked_mul(&y[i])?.checked_sub(&x[i].checked_mul(&y[i + 1])?)?;
        s = s.checked_add(&t)?;
    }
    Some(s)
}

fn neg<T: Int>(x: T) -> Option<T> {
    T::zero().checked_sub(&x)
}

fn abs<T: Int>(x: T) -> Option<T> {
    if x.is_negative() {
        neg(x)
    } else {
        Some(x)
    }
}

fn gcd<T: Int>(a: T, b: T) -> Option<T> {
    let (mut a, mut b) = (abs(a)?, abs(b)?);
    if let (Some(x), Some(y)) = (a.to_u64(), b.to_u64()) {
        return T::from(num_integer::gcd(x, y));
    }
    while !b.is_zero() {
        (a, b) = (b, a % b);
    }
    Some(a)
}

/// `(g, x, y)` with `g = x·a + y·b`.
fn ext_gcd<T: Int>(a: T, b: T) -> Option<(T, T, T)> {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let q = r0.checked_div(&r1)?;
        (r0, r1) = (r1, r0.checked_sub(&q.checked_mul(&r1)?)?);
        (s0, s1) = (s1, s0.checked_sub(&q.checked_mul(&s1)?)?);
        (t0, t1) = (t1, t0.checked_sub(&q.checked_mul(&t1)?)?);
    }
    Some((r0, s0, t0))
}

fn unit<T: Int>(n: usize, i: usize) -> Vec<T> {
    (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()
}

impl<T: Int> SmallMap<T> {
    pub fn identity(dim: usize) -> Self {
        SmallMap {
            dim,
            cols: (0..dim).map(|j| unit(dim, j)).collect(),
        }
    }

    pub fn apply(&self, x: &[T]) -> Option<Vec<T>> {
        let mut out = vec![T::zero(); self.dim];
        for (xj, col) in x.iter().zip(&self.cols) {
            if xj.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(col) {
                *o = o.checked_add(&xj.checked_mul(c)?)?;
            }
        }
        Some(out)
    }

    /// Post-composes with `x ↦ x + ε Φ(x, γ) γ`, `ε = ±1`.
    pub fn then_transvection(&mut self, gamma: &[T], negative: bool) -> Option<()> {
        for col in self.cols.iter_mut() {
            let mut k = pair(col, gamma)?;
            if negative {
                k = neg(k)?;
            }
            if k.is_zero() {
                continue;
            }
            for (c, g) in col.iter_mut().zip(gamma) {
                *c = c.checked_add(&k.checked_mul(g)?)?;
            }
        }
        Some(())
    }

    pub fn is_identity(&self) -> bool {
        *self == SmallMap::identity(self.dim)
    }

    /// The same matrix in another integer type, if every entry fits.
    pub fn cast<U: Int>(&self) -> Option<SmallMap<U>> {
        let cols = self
            .cols
            .iter()
            .map(|c| c.iter().map(|&x| U::from(x)).collect::<Option<Vec<U>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(SmallMap { dim: self.dim, cols })
    }
}

/// Columns `e1, f1, e2, f2, …` of a symplectic basis with `e1 = γ`, built
/// exactly as the big-integer completion builds them.
fn completion_basis<T: Int>(gamma: &[T]) -> Option<Vec<Vec<T>>> {
    let n = gamma.len();
    let mut spanning: Vec<Vec<T>> = (0..n).map(|i| unit(n, i)).collect();
    let mut columns = Vec::with_capacity(n);
    for k in 0..n / 2 {
        let e = if k == 0 {
            gamma.to_vec()
        } else {
            let v = spanning.iter().find(|v| v.iter().any(|x| !x.is_zero()))?;
            let mut c = T::zero();
            for &x in v {
                c = gcd(c, x)?;
            }
            let mut p: Vec<T> = v.iter().map(|&x| x / c).collect();
            if p.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                p = p.into_iter().map(neg).collect::<Option<Vec<_>>>()?;
            }
            p
        };
        let pairings = spanning.iter().map(|s| pair(&e, s)).collect::<Option<Vec<_>>>()?;
        let mut g = T::zero();
        let mut coeffs: Vec<T> = Vec::with_capacity(pairings.len());
        for &x in &pairings {
            if x.is_zero() {
                coeffs.push(T::zero());
                continue;
            }
            let (d, a, b) = ext_gcd(g, x)?;
            for c in coeffs.iter_mut() {
                *c = c.checked_mul(&a)?;
            }
            coeffs.push(b);
            g = d;
        }
        if g.is_negative() {
            g = neg(g)?;
            coeffs = coeffs.into_iter().map(neg).collect::<Option<Vec<_>>>()?;
        }
        if !g.is_one() {
            return None;
        }
        let mut f = vec![T::zero(); n];
        for (c, s) in coeffs.iter().zip(&spanning) {
            if c.is_zero() {
                continue;
            }
            for (fi, si) in f.iter_mut().zip(s) {
                *fi = fi.checked_sub(&c.checked_mul(si)?)?;
            }
        }
        for s in spanning.iter_mut() {
            let pf = pair(s, &f)?;
            let pe = pair(s, &e)?;
            for i in 0..n {
                s[i] = s[i]
                    .checked_add(&pf.checked_mul(&e[i])?)?
                    .checked_sub(&pe.checked_mul(&f[i])?)?;
            }
        }
        spanning.retain(|v| v.iter().any(|x| !x.is_zero()));
        columns.push(e);
        columns.push(f);
    }
    Some(columns)
}

/// Result of the fast kernel computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SmallKernel<T> {
    Line(T, T),
    /// The kernel projection had this dimension instead of one.
    Degenerate(usize),
}

fn make_primitive<T: Int>(row: &mut [T]) -> Option<()> {
    let mut c = T::zero();
    for &x in row.iter() {
        c = gcd(c, x)?;
    }
    if c > T::one() {
        row.iter_mut().for_each(|x| *x = *x / c);
    }
    Some(())
}

/// Kernel line of the boundary torus of the handle along `γ`.
///
/// Uses the presentation of the complement of `a1` for `S φ S⁻¹`, carried
/// back through `S⁻¹` (whose columns are the completion basis `B`):
/// relations `B_j - φ(B_j)` for `j ≠ 1` and `x' - φ(B_1)`, with
/// `l' ↦ γ` and `m' ↦ B_1 - x'`. The extra generator `x'` is the last
/// coordinate. Rows are reduced fraction-free and kept primitive; two
/// trailing columns record the `(u, v)` coefficients of `l'` and `m'`.
pub(crate) fn kernel<T: Int>(phi: &SmallMap<T>, gamma: &[T]) -> Option<SmallKernel<T>> {
    let n = phi.dim;
    let width = n + 3;
    let basis = completion_basis(gamma)?;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n + 2);
    for (j, b) in basis.iter().enumerate() {
        let image = phi.apply(b)?;
        let mut r = vec![T::zero(); width];
        for i in 0..n {
            r[i] = if j == 1 { neg(image[i])? } else { b[i].checked_sub(&image[i])? };
        }
        if j == 1 {
            r[n] = T::one();
        }
        rows.push(r);
    }
    let mut l = vec![T::zero(); width];
    l[..n].copy_from_slice(gamma);
    l[n + 1] = T::one();
    let mut m = vec![T::zero(); width];
    m[..n].copy_from_slice(&basis[1]);
    m[n] = neg(T::one())?;
    m[n + 2] = T::one();
    rows.push(l);
    rows.push(m);

    let mut echelon: Vec<(usize, Vec<T>)> = Vec::new();
    let mut kernel: Vec<(T, T)> = Vec::new();
    for mut r in rows {
        for (p, e) in &echelon {
            if r[*p].is_zero() {
                continue;
            }
            let (a, b) = (e[*p], r[*p]);
            let g = gcd(a, b)?;
            let (a, b) = (a / g, b / g);
            for k in 0..width {
                r[k] = r[k].checked_mul(&a)?.checked_sub(&e[k].checked_mul(&b)?)?;
            }
            make_primitive(&mut r)?;
        }
        match r[..=n].iter().position(|x| !x.is_zero()) {
            Some(p) => echelon.push((p, r)),
            None if !r[n + 1].is_zero() || !r[n + 2].is_zero() => kernel.push((r[n + 1], r[n + 2])),
            None => {}
        }
    }
    match kernel.as_slice() {
        [(u, v)] => {
            let g = gcd(*u, *v)?;
            let (mut u, mut v) = (*u / g, *v / g);
            if u.is_negative() || (u.is_zero() && v.is_negative()) {
                u = neg(u)?;
                v = neg(v)?;
            }
            Some(SmallKernel::Line(u, v))
        }
        other => Some(SmallKernel::Degenerate(if other.is_empty() { 0 } else { 2 })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        assert_eq!(pair(&[big, big], &[big, 3]), None);
        let mut m = SmallMap::<i64>::identity(2);
        assert_eq!(m.then_transvection(&[big, 1], false), None);
        assert_eq!(neg(i64::MIN), None);
        assert_eq!(gcd(i64::MIN, 2), None);
    }

    #[test]
    fn torus_kernels() {
        // φ = identity, γ = a: kernel <[m']>.
        let phi = SmallMap::<i64>::identity(2);
        assert_eq!(kernel(&phi, &[1, 0]), Some(SmallKernel::Line(0, 1)));
        // After T_b T_a: γ = a gives <[m'] + [l']>.
        let mut phi = SmallMap::<i64>::identity(2);
        phi.then_transvection(&[1, 0], false).unwrap();
        phi.then_transvection(&[0, 1], false).unwrap();
        assert_eq!(kernel(&phi, &[1, 0]), Some(SmallKernel::Line(1, 1)));
        let wide: SmallMap<i128> = phi.cast().unwrap();
        assert_eq!(kernel(&wide, &[1, 0]), Some(SmallKernel::Line(1, 1)));
    }
}
