//! Cumulant combinatorics (set partitions, moments <-> truncated
//! correlations) and a brute-force Grassmann-algebra engine serving as the
//! independent oracle for all fermionic formulas.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;

/// A partition of `[n] = {0, .., n-1}` into disjoint nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPartition {
    pub blocks: Vec<Vec<usize>>,
}

/// All set partitions of `[n]`, enumerated by restricted growth strings.
/// Exactly `Bell(n)` results.
pub fn set_partitions(n: usize) -> Result<Vec<SetPartition>> {
    if n == 0 {
        return Err(Error::Input("set_partitions requires n >= 1".into()));
    }
    if n > 12 {
        return Err(Error::Budget {
            context: format!("set_partitions({n}) would enumerate Bell({n}) partitions"),
            estimate: f64::NAN,
            error: f64::NAN,
        });
    }
    let mut out = Vec::new();
    // restricted growth string a with a[0] = 0, a[i] <= max(a[0..i]) + 1
    let mut a = vec![0usize; n];
    loop {
        let nblocks = a.iter().copied().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in a.iter().enumerate() {
            blocks[b].push(i);
        }
        out.push(SetPartition { blocks });
        // increment the growth string
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(out);
            }
            i -= 1;
            let cap = a[..i].iter().copied().max().unwrap() + 1;
            if a[i] < cap {
                a[i] += 1;
                for x in a[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
            a[i] = 0;
        }
    }
}

/// Moments indexed by nonempty subsets of `[n]` (bitmask keys).
pub type SubsetValues = HashMap<u32, Complex64>;

/// Truncated correlations (joint cumulants) from moments via the inductive
/// partition recursion: the cumulant of a subset is its moment minus the sum
/// over proper partitions of products of block cumulants.
///
/// Memoized on subsets; returns the cumulant for every nonempty subset.
pub fn moments_to_cumulants(n: usize, moments: &SubsetValues) -> Result<SubsetValues> {
    let full: u32 = if n >= 32 {
        return Err(Error::Input("n too large".into()));
    } else {
        (1u32 << n) - 1
    };
    for s in 1..=full {
        if !moments.contains_key(&s) {
            return Err(Error::Input(format!("missing moment for subset mask {s:#b}")));
        }
    }
    let mut cum: SubsetValues = HashMap::new();
    // process subsets in order of increasing popcount (any increasing-mask
    // order works since subsets of s are numerically smaller)
    for s in 1..=full {
        // cumulant(s) = moment(s) - sum over splits T ∋ lowest(s), T ⊊ s of
        // cumulant(T) * moment(s \ T), which unrolls the proper-partition sum.
        let lowest = s & s.wrapping_neg();
        let rest = s & !lowest;
        let mut acc = moments[&s];
        // iterate over subsets u of rest; T = lowest | u, T ⊊ s means u ⊊ rest
        let mut u = rest;
        loop {
            let t = lowest | u;
            if t != s {
                let comp = s & !t;
                acc -= cum[&t] * moments[&comp];
            }
            if u == 0 {
                break;
            }
            u = (u - 1) & rest;
        }
        cum.insert(s, acc);
    }
    Ok(cum)
}

/// Inverse of [`moments_to_cumulants`]: rebuild every subset moment from
/// cumulants by summing over partitions (first-element split form).
pub fn cumulants_to_moments(n: usize, cumulants: &SubsetValues) -> Result<SubsetValues> {
    let full: u32 = (1u32 << n) - 1;
    let mut mom: SubsetValues = HashMap::new();
    for s in 1..=full {
        let lowest = s & s.wrapping_neg();
        let rest = s & !lowest;
        let mut acc = cumulants
            .get(&s)
            .copied()
            .ok_or_else(|| Error::Input(format!("missing cumulant for mask {s:#b}")))?;
        let mut u = rest;
        loop {
            let t = lowest | u;
            if t != s {
                let comp = s & !t;
                acc += cumulants[&t] * mom[&comp];
            }
            if u == 0 {
                break;
            }
            u = (u - 1) & rest;
        }
        mom.insert(s, acc);
    }
    Ok(mom)
}

/// Direct evaluation of the truncated correlation of the full set `[n]` by
/// the explicit partition sum; used as the oracle for the memoized recursion.
pub fn truncated_by_partition_sum(n: usize, moments: &SubsetValues) -> Result<Complex64> {
    // cumulant([n]) computed recursively with the literal definition
    fn go(mask: u32, moments: &SubsetValues, memo: &mut SubsetValues) -> Complex64 {
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let idx: Vec<u32> = (0..32).filter(|i| mask & (1 << i) != 0).collect();
        let k = idx.len();
        let mut acc = moments[&mask];
        if k > 1 {
            for p in set_partitions(k).unwrap() {
                if p.blocks.len() == 1 {
                    continue; // proper partitions only
                }
                let mut prod = Complex64::new(1.0, 0.0);
                for b in &p.blocks {
                    let bm: u32 = b.iter().map(|&i| 1u32 << idx[i]).sum();
                    prod *= go(bm, moments, memo);
                }
                acc -= prod;
            }
        }
        memo.insert(mask, acc);
        acc
    }
    let mut memo = SubsetValues::new();
    Ok(go((1u32 << n) - 1, moments, &mut memo))
}

// ---------------------------------------------------------------------------
// Grassmann algebra
// ---------------------------------------------------------------------------

/// Element of the exterior algebra on `2N` generators
/// `psibar_1, psi_1, ..., psibar_N, psi_N`, stored as coefficients over
/// canonically ordered monomials (bitmask-indexed, bit `2i` = psibar_{i+1},
/// bit `2i+1` = psi_{i+1}).
#[derive(Debug, Clone)]
pub struct GrassmannElement {
    pub n_pairs: usize,
    /// coefficient of the monomial whose generator set is the index mask,
    /// with generators written in increasing mask-bit order
    pub coeff: Vec<Complex64>,
}

impl GrassmannElement {
    pub fn zero(n_pairs: usize) -> Self {
        Self {
            n_pairs,
            coeff: vec![Complex64::new(0.0, 0.0); 1 << (2 * n_pairs)],
        }
    }

    pub fn one(n_pairs: usize) -> Self {
        let mut e = Self::zero(n_pairs);
        e.coeff[0] = Complex64::new(1.0, 0.0);
        e
    }

    /// Generator psibar_i (1-based).
    pub fn psibar(n_pairs: usize, i: usize) -> Self {
        let mut e = Self::zero(n_pairs);
        e.coeff[1 << (2 * (i - 1))] = Complex64::new(1.0, 0.0);
        e
    }

    /// Generator psi_i (1-based).
    pub fn psi(n_pairs: usize, i: usize) -> Self {
        let mut e = Self::zero(n_pairs);
        e.coeff[1 << (2 * (i - 1) + 1)] = Complex64::new(1.0, 0.0);
        e
    }

    /// Sign of merging two disjoint ordered monomials: (-1)^inversions where
    /// an inversion is a generator pair (a in x, b in y) with a > b.
    fn merge_sign(x: u32, y: u32) -> f64 {
        let mut inversions = 0u32;
        let mut yy = y;
        while yy != 0 {
            let b = yy.trailing_zeros();
            // generators of x strictly above bit b must hop over this one
            inversions += (x >> (b + 1)).count_ones();
            yy &= yy - 1;
        }
        if inversions.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n_pairs, other.n_pairs);
        let mut out = Self::zero(self.n_pairs);
        for (mx, &cx) in self.coeff.iter().enumerate() {
            if cx == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (my, &cy) in other.coeff.iter().enumerate() {
                if cy == Complex64::new(0.0, 0.0) {
                    continue;
                }
                if (mx & my) != 0 {
                    continue; // repeated generator annihilates
                }
                let sign = Self::merge_sign(mx as u32, my as u32);
                out.coeff[mx | my] += cx * cy * sign;
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Self, s: Complex64) {
        for (c, &o) in self.coeff.iter_mut().zip(other.coeff.iter()) {
            *c += o * s;
        }
    }

    /// Grassmann integral: the coefficient of the top monomial in the order
    /// fixed by `int dpsi dpsibar`, i.e. the canonical coefficient times the
    /// sign of reordering into psibar_1 psi_1 ... psibar_N psi_N.
    pub fn integral(&self) -> Complex64 {
        // Canonical storage order for the top monomial is mask-bit order
        // psibar_1 < psi_1 < psibar_2 < ..., which is exactly the order
        // psibar_1 psi_1 psibar_2 psi_2 ...; applying the antiderivations
        // d_{psi_N} d_{psibar_N} ... d_{psi_1} d_{psibar_1} to it yields +1
        // (innermost pair first, each removal acts on the leading factor).
        self.coeff[(1usize << (2 * self.n_pairs)) - 1]
    }

    /// Degree <= 2N truncated exponential of an even element.
    pub fn exp_even(&self) -> Self {
        let mut out = Self::one(self.n_pairs);
        let mut power = Self::one(self.n_pairs);
        let mut fact = 1.0;
        for k in 1..=(2 * self.n_pairs) {
            power = power.mul(self);
            fact *= k as f64;
            let mut any = false;
            for &c in &power.coeff {
                if c.norm_sqr() != 0.0 {
                    any = true;
                    break;
                }
            }
            if !any {
                break;
            }
            out.add_scaled(&power, Complex64::new(1.0 / fact, 0.0));
        }
        out
    }
}

/// Complex LU with partial pivoting; returns (det, inverse). Errors on a
/// numerically singular matrix.
pub fn lu_det_inverse(a: &[Vec<Complex64>]) -> Result<(Complex64, Vec<Vec<Complex64>>)> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut inv: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let (piv, mx) = (col..n)
            .map(|r| (r, m[r][col].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if mx < 1e-300 {
            return Err(Error::Input("singular matrix".into()));
        }
        if piv != col {
            m.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f.norm_sqr() != 0.0 {
                    for j in 0..n {
                        let mc = m[col][j];
                        let ic = inv[col][j];
                        m[r][j] -= f * mc;
                        inv[r][j] -= f * ic;
                    }
                }
            }
        }
    }
    Ok((det, inv))
}

/// Determinant of a complex matrix by LU with partial pivoting.
pub fn lu_determinant(a: &[Vec<Complex64>]) -> Complex64 {
    match lu_det_inverse(a) {
        Ok((d, _)) => d,
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// 1-norm condition number estimate ||A||_1 ||A^-1||_1 (exact inverse; the
/// matrices here are desk-scale).
pub fn condition_number(a: &[Vec<Complex64>]) -> f64 {
    let norm1 = |m: &[Vec<Complex64>]| -> f64 {
        let n = m.len();
        (0..n)
            .map(|j| (0..n).map(|i| m[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    match lu_det_inverse(a) {
        Ok((_, inv)) => norm1(a) * norm1(&inv),
        Err(_) => f64::INFINITY,
    }
}

/// det K * int dpsi dpsibar (prod_i psibar_{alpha_i} psi_{beta_i}) e^{-psi K^{-1} psibar}
/// by literal antiderivation; equals det(K_{alpha_i beta_j}).
///
/// `word` lists the factor pairs (alpha_i, beta_i), 1-based generator indices.
pub fn grassmann_gaussian_expectation(
    k: &[Vec<Complex64>],
    word: &[(usize, usize)],
) -> Result<Complex64> {
    let n = k.len();
    if n > 6 {
        return Err(Error::Budget {
            context: format!("grassmann engine limited to N <= 6, got {n}"),
            estimate: f64::NAN,
            error: f64::NAN,
        });
    }
    let (det, kinv) = lu_det_inverse(k)?;
    // quadratic form -psi K^{-1} psibar
    let mut quad = GrassmannElement::zero(n);
    for i in 0..n {
        for j in 0..n {
            let term = GrassmannElement::psi(n, i + 1).mul(&GrassmannElement::psibar(n, j + 1));
            quad.add_scaled(&term, -kinv[i][j]);
        }
    }
    let weight = quad.exp_even();
    let mut prod = GrassmannElement::one(n);
    for &(a, b) in word {
        if a == 0 || a > n || b == 0 || b > n {
            return Err(Error::Input(format!("word index ({a},{b}) out of range 1..={n}")));
        }
        prod = prod
            .mul(&GrassmannElement::psibar(n, a))
            .mul(&GrassmannElement::psi(n, b));
    }
    let integrand = prod.mul(&weight);
    Ok(det * integrand.integral())
}

/// Truncated fermionic correlation via the cyclic-permutation sum
/// `(-1)^{n+1} sum_{pi in C_n} prod_i K_{alpha_{pi^i(1)} beta_{pi^{i+1}(1)}}`.
pub fn fermionic_truncated(k: &[Vec<Complex64>], insertions: &[(usize, usize)]) -> Result<Complex64> {
    let n = insertions.len();
    if n == 0 {
        return Err(Error::Input("need at least one insertion".into()));
    }
    if n > 9 {
        return Err(Error::Budget {
            context: format!("cyclic sum over (n-1)! with n = {n}"),
            estimate: f64::NAN,
            error: f64::NAN,
        });
    }
    // entry accessor; insertions index into k by their (alpha, beta)
    let entry = |i: usize, j: usize| -> Complex64 {
        let (a, _) = insertions[i];
        let (_, b) = insertions[j];
        k[a - 1][b - 1]
    };
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    // cycles written as 1 -> a_2 -> ... -> a_n -> 1 over permutations of 2..n
    let mut rest: Vec<usize> = (1..n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    permute(&mut rest, 0, &mut |order: &[usize]| {
        let mut cyc = Vec::with_capacity(n);
        cyc.push(0usize);
        cyc.extend_from_slice(order);
        let mut prod = Complex64::new(1.0, 0.0);
        for i in 0..n {
            prod *= entry(cyc[i], cyc[(i + 1) % n]);
        }
        total += prod;
    });
    Ok(total * sign)
}

fn permute(items: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// Number of cyclic permutations visited by [`fermionic_truncated`] for n
/// insertions: (n-1)!.
pub fn cyclic_count(n: usize) -> usize {
    (1..n).product()
}
