//! Hilbert series of graded modules presented by Groebner bases, and the
//! multiplicity bookkeeping downstream computations rely on.
//!
//! Series are stored as numer(t) / (1-t)^pole with a sparse Laurent
//! numerator. The leading-term module of a Groebner basis reduces every
//! Hilbert computation to monomial ideals, which are handled by the
//! pivot-variable recursion
//!   N(R/M) = N(R/(M + x)) + t * N(R/(M : x)).

use crate::field::FieldSpec;
use crate::modgb::{FreeModule, GBasis};
use crate::monomial::Monomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Number of monomials of total degree d in n variables (0 for d < 0).
pub fn monomial_count(n: usize, d: i64) -> u64 {
    if d < 0 {
        return 0;
    }
    if n == 0 {
        return if d == 0 { 1 } else { 0 };
    }
    binom(d as u64 + n as u64 - 1, n as u64 - 1)
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

#[derive(Clone, Debug)]
pub struct HilbertSeries {
    pub n: usize,
    /// exponent -> coefficient, zero coefficients pruned
    pub numer: BTreeMap<i64, i64>,
    pub pole: u32,
}

fn prune(m: &mut BTreeMap<i64, i64>) {
    m.retain(|_, c| *c != 0);
}

fn add_into(m: &mut BTreeMap<i64, i64>, k: i64, c: i64) {
    let e = m.entry(k).or_insert(0);
    *e = e.checked_add(c).expect("numerator overflow");
    if *e == 0 {
        m.remove(&k);
    }
}

impl HilbertSeries {
    pub fn zero(n: usize) -> HilbertSeries {
        HilbertSeries { n, numer: BTreeMap::new(), pole: 0 }
    }

    pub fn from_parts(n: usize, terms: &[(i64, i64)], pole: u32) -> HilbertSeries {
        let mut numer = BTreeMap::new();
        for &(k, c) in terms {
            add_into(&mut numer, k, c);
        }
        HilbertSeries { n, numer, pole }
    }

    /// Series of the free module itself: sum of t^shift / (1-t)^n.
    pub fn free_module(module: &FreeModule) -> HilbertSeries {
        let mut numer = BTreeMap::new();
        for &a in &module.shifts {
            add_into(&mut numer, a, 1);
        }
        HilbertSeries { n: module.n, numer, pole: module.n as u32 }
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_empty()
    }

    fn with_pole(&self, pole: u32) -> BTreeMap<i64, i64> {
        assert!(pole >= self.pole, "cannot lower the pole without dividing");
        let mut cur = self.numer.clone();
        for _ in self.pole..pole {
            cur = mul_one_minus_t(&cur);
        }
        cur
    }

    pub fn add(&self, other: &HilbertSeries) -> HilbertSeries {
        assert_eq!(self.n, other.n);
        let pole = self.pole.max(other.pole);
        let mut numer = self.with_pole(pole);
        for (k, c) in other.with_pole(pole) {
            add_into(&mut numer, k, c);
        }
        HilbertSeries { n: self.n, numer, pole }
    }

    pub fn sub(&self, other: &HilbertSeries) -> HilbertSeries {
        let mut neg = other.clone();
        neg.numer = neg.numer.into_iter().map(|(k, c)| (k, -c)).collect();
        self.add(&neg)
    }

    pub fn shift(&self, by: i64) -> HilbertSeries {
        HilbertSeries {
            n: self.n,
            numer: self.numer.iter().map(|(k, c)| (k + by, *c)).collect(),
            pole: self.pole,
        }
    }

    /// Unique form numer(1) != 0 (or zero numerator with pole 0).
    pub fn canonical(&self) -> HilbertSeries {
        let mut numer = self.numer.clone();
        let mut pole = self.pole;
        prune(&mut numer);
        if numer.is_empty() {
            return HilbertSeries::zero(self.n);
        }
        while pole > 0 && value_at_one(&numer) == 0 {
            numer = divide_one_minus_t(&numer);
            pole -= 1;
        }
        // pole exhausted but the numerator still vanishes at 1: keep dividing
        // is impossible, so this would mean the series is a polynomial with a
        // root at 1 — fine, leave as is.
        HilbertSeries { n: self.n, numer, pole }
    }

    pub fn series_eq(&self, other: &HilbertSeries) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.pole == b.pole && a.numer == b.numer
    }

    /// Rewrite over (1-t)^pole for pole >= the current one.
    pub fn at_pole(&self, pole: u32) -> HilbertSeries {
        HilbertSeries { n: self.n, numer: self.with_pole(pole), pole }
    }

    /// Numerator evaluated at t=1 (at the series' current pole order).
    pub fn numer_at_one(&self) -> i64 {
        value_at_one(&self.numer)
    }

    /// Numerator derivative at t=1 (at the current pole order).
    pub fn numer_derivative_at_one(&self) -> i64 {
        derivative_at_one(&self.numer)
    }

    /// Coefficient of t^T in the expansion.
    pub fn value_at(&self, t: i64) -> i64 {
        let mut acc: i64 = 0;
        for (&k, &c) in &self.numer {
            let cnt = monomial_count(self.pole as usize, t - k);
            let cnt = i64::try_from(cnt).expect("hilbert function overflow");
            acc = acc
                .checked_add(c.checked_mul(cnt).expect("hilbert function overflow"))
                .expect("hilbert function overflow");
        }
        acc
    }
}

fn value_at_one(numer: &BTreeMap<i64, i64>) -> i64 {
    numer
        .values()
        .fold(0i64, |a, c| a.checked_add(*c).expect("overflow"))
}

fn derivative_at_one(numer: &BTreeMap<i64, i64>) -> i64 {
    numer.iter().fold(0i64, |a, (k, c)| {
        a.checked_add(k.checked_mul(*c).expect("overflow"))
            .expect("overflow")
    })
}

fn mul_one_minus_t(numer: &BTreeMap<i64, i64>) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for (&k, &c) in numer {
        add_into(&mut out, k, c);
        add_into(&mut out, k + 1, -c);
    }
    out
}

/// numer / (1-t); caller guarantees numer(1) == 0 so this is exact.
fn divide_one_minus_t(numer: &BTreeMap<i64, i64>) -> BTreeMap<i64, i64> {
    // (1-t)*g = h  =>  g_k = h_k + g_{k-1}
    let mut out = BTreeMap::new();
    let Some((&lo, _)) = numer.first_key_value() else {
        return out;
    };
    let (&hi, _) = numer.last_key_value().unwrap();
    let mut carry = 0i64;
    for k in lo..hi {
        carry = carry
            .checked_add(numer.get(&k).copied().unwrap_or(0))
            .expect("overflow");
        if carry != 0 {
            out.insert(k, carry);
        }
    }
    debug_assert_eq!(
        carry + numer.get(&hi).copied().unwrap_or(0),
        0,
        "inexact division by (1-t)"
    );
    out
}

/// The standard invariants read off a series, all normalized to the fixed
/// pole order n-1 regardless of the module's actual dimension:
///   e0 — value at 1 of the pole-(n-1) numerator,
///   e1_raw — its derivative at 1,
///   e1 — e1_raw with the sign flipped when e0 == 0 (the convention used by
///        the multiplicity formulas downstream).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesInvariants {
    /// Krull dimension (canonical pole order); None for the zero module.
    pub dim: Option<u32>,
    /// Multiplicity at the module's own dimension.
    pub degree_at_dim: i64,
    pub e0: i64,
    pub e1_raw: i64,
    pub e1: i64,
}

pub fn coefficients(hs: &HilbertSeries) -> Result<SeriesInvariants, String> {
    let c = hs.canonical();
    if c.is_zero() {
        return Ok(SeriesInvariants { dim: None, degree_at_dim: 0, e0: 0, e1_raw: 0, e1: 0 });
    }
    let target = hs.n as u32 - 1;
    if c.pole > target {
        return Err(format!(
            "series has pole order {} > n-1 = {}",
            c.pole, target
        ));
    }
    let k = target - c.pole;
    let v = value_at_one(&c.numer);
    let e0 = if k == 0 { v } else { 0 };
    let e1_raw = match k {
        0 => derivative_at_one(&c.numer),
        1 => -v,
        _ => 0,
    };
    let e1 = if e0 == 0 { -e1_raw } else { e1_raw };
    Ok(SeriesInvariants { dim: Some(c.pole), degree_at_dim: v, e0, e1_raw, e1 })
}

/// Hilbert polynomial coefficients (ascending, exact rationals) from the
/// canonical form; empty for eventually-zero functions.
pub fn hilbert_polynomial(hs: &HilbertSeries) -> Vec<BigRational> {
    let c = hs.canonical();
    if c.is_zero() || c.pole == 0 {
        return Vec::new();
    }
    let d = c.pole as i64; // HP(T) = sum c_j * binom(T - j + d - 1, d - 1)
    let mut acc = vec![BigRational::zero(); c.pole as usize];
    for (&j, &cj) in &c.numer {
        // binom(T + d - 1 - j, d - 1) as a polynomial in T
        let mut poly = vec![BigRational::one()];
        for i in 0..(d - 1) {
            // multiply by (T + d - 1 - j - i)
            let a = BigRational::from_integer(BigInt::from(d - 1 - j - i));
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (k, ck) in poly.iter().enumerate() {
                next[k + 1] += ck;
                next[k] += ck * &a;
            }
            poly = next;
        }
        let mut fact = BigRational::one();
        for i in 1..d {
            fact *= BigRational::from_integer(BigInt::from(i));
        }
        let scale = BigRational::from_integer(BigInt::from(cj)) / fact;
        for (k, ck) in poly.into_iter().enumerate() {
            acc[k] += ck * &scale;
        }
    }
    while acc.last().is_some_and(|c| c.is_zero()) {
        acc.pop();
    }
    acc
}

/// Numerator (dense, index = exponent) of Hilb(R/M) * (1-t)^{-n} for a
/// monomial ideal M given by generators; generators need not be minimal.
pub fn monomial_quotient_numerator(gens: &[Monomial]) -> Vec<i64> {
    let min = minimalize(gens.to_vec());
    numer_rec(min)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|m| m.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn poly_sub_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize, sign: i64) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, c) in b.iter().enumerate() {
        a[i + shift] = a[i + shift].checked_add(sign * c).expect("overflow");
    }
}

fn numer_rec(gens: Vec<Monomial>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return vec![0];
    }
    if gens.len() == 1 {
        // principal: 1 - t^deg
        let d = gens[0].degree() as usize;
        let mut v = vec![0i64; d + 1];
        v[0] = 1;
        v[d] = -1;
        return v;
    }
    let pure = gens
        .iter()
        .all(|m| m.exps().iter().filter(|&&e| e > 0).count() == 1);
    if pure {
        // product of (1 - t^{a_i}) over the pure powers
        let mut acc = vec![1i64];
        for m in &gens {
            let d = m.degree() as usize;
            let mut next = vec![0i64; acc.len() + d];
            for (i, c) in acc.iter().enumerate() {
                next[i] = next[i].checked_add(*c).expect("overflow");
                next[i + d] = next[i + d].checked_sub(*c).expect("overflow");
            }
            acc = next;
        }
        return acc;
    }

    // pivot: most frequent variable among generators of degree >= 2, which
    // guarantees both branches shrink
    let n = gens[0].nvars();
    let mut counts = vec![0usize; n];
    for m in &gens {
        if m.degree() >= 2 {
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    counts[v] += 1;
                }
            }
        }
    }
    let pivot = (0..n).max_by_key(|&v| counts[v]).unwrap();
    assert!(counts[pivot] > 0, "pivot selection failed");

    // M + (x): drop everything x divides, add x itself
    let mut plus: Vec<Monomial> = gens.iter().filter(|m| m.exp(pivot) == 0).cloned().collect();
    plus.push(Monomial::var(n, pivot));

    // M : x — divide where possible, then re-minimalize
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            if m.exp(pivot) > 0 {
                let mut e = m.exps().to_vec();
                e[pivot] -= 1;
                Monomial::from_exps(e)
            } else {
                m.clone()
            }
        })
        .collect();

    let mut acc = numer_rec(minimalize(plus));
    let colon_num = numer_rec(minimalize(colon));
    poly_sub_shifted(&mut acc, &colon_num, 1, 1);
    acc
}

/// Series of F/N where N is given by a Groebner basis in F: by the Macaulay
/// principle the leading-term module decides, and it splits per component.
pub fn hilbert_of_quotient(module: &FreeModule, gb: &GBasis) -> HilbertSeries {
    let mut numer: BTreeMap<i64, i64> = BTreeMap::new();
    for (i, &shift) in module.shifts.iter().enumerate() {
        let comp_lts: Vec<Monomial> = gb
            .leading_terms()
            .iter()
            .filter(|(c, _)| *c == i)
            .map(|(_, m)| m.clone())
            .collect();
        let num = monomial_quotient_numerator(&comp_lts);
        for (k, &c) in num.iter().enumerate() {
            if c != 0 {
                add_into(&mut numer, shift + k as i64, c);
            }
        }
    }
    HilbertSeries { n: module.n, numer, pole: module.n as u32 }
}

/// Series of the submodule N itself.
pub fn hilbert_of_submodule(module: &FreeModule, gb: &GBasis) -> HilbertSeries {
    HilbertSeries::free_module(module).sub(&hilbert_of_quotient(module, gb))
}

/// Series of R/I for an ideal Groebner basis.
pub fn hilbert_of_ideal_quotient(n: usize, field: FieldSpec, gb: &GBasis) -> HilbertSeries {
    let module = FreeModule::new(n, field, vec![0]);
    hilbert_of_quotient(&module, gb)
}

/// Krull dimension of R/I; None for the zero ring (I = R).
pub fn krull_dimension_of_quotient(hs: &HilbertSeries) -> Option<u32> {
    let c = hs.canonical();
    if c.is_zero() {
        None
    } else {
        Some(c.pole)
    }
}

/// Height (codimension) of a proper ideal read off its quotient series.
pub fn height_from_series(n: usize, hs: &HilbertSeries) -> u32 {
    match krull_dimension_of_quotient(hs) {
        None => n as u32,
        Some(d) => n as u32 - d,
    }
}

/// Multiplicity at a fixed dimension: the usual degree when dim matches,
/// 0 when the module is smaller than the fixed dimension.
pub fn degree_at_fixed_dim(hs: &HilbertSeries, fixed_dim: u32) -> Result<i64, String> {
    let c = hs.canonical();
    if c.is_zero() {
        return Ok(0);
    }
    if c.pole > fixed_dim {
        return Err(format!(
            "module has dimension {} > expected {}",
            c.pole, fixed_dim
        ));
    }
    Ok(if c.pole == fixed_dim { value_at_one(&c.numer) } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgb::{ideal_gb, FreeModule};
    use crate::parse::parse_poly;

    fn qq(src: &str, n: usize) -> crate::poly::Polynomial {
        parse_poly(src, n, FieldSpec::QQ).unwrap()
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_count(3, 0), 1);
        assert_eq!(monomial_count(3, 1), 3);
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomial_count(3, -1), 0);
        assert_eq!(monomial_count(1, 5), 1);
    }

    #[test]
    fn full_ring_series() {
        let module = FreeModule::new(3, FieldSpec::QQ, vec![0]);
        let hs = HilbertSeries::free_module(&module);
        assert_eq!(hs.value_at(0), 1);
        assert_eq!(hs.value_at(2), 6);
        assert_eq!(hs.value_at(5), 21);
    }

    #[test]
    fn hypersurface_series() {
        let gb = ideal_gb(3, FieldSpec::QQ, &[qq("x1^2 + x2*x3", 3)]);
        let hs = hilbert_of_ideal_quotient(3, FieldSpec::QQ, &gb);
        // numerator 1 - t^2 over (1-t)^3
        let expect = HilbertSeries::from_parts(3, &[(0, 1), (2, -1)], 3);
        assert!(hs.series_eq(&expect));
        let inv = coefficients(&hs).unwrap();
        assert_eq!(inv.dim, Some(2));
        assert_eq!(inv.e0, 2);
        assert_eq!(inv.degree_at_dim, 2);
    }

    #[test]
    fn maximal_ideal_and_regular_sequences() {
        let gb = ideal_gb(3, FieldSpec::QQ, &[qq("x1", 3), qq("x2", 3), qq("x3", 3)]);
        let hs = hilbert_of_ideal_quotient(3, FieldSpec::QQ, &gb);
        assert_eq!(hs.value_at(0), 1);
        assert_eq!(hs.value_at(1), 0);
        let inv = coefficients(&hs).unwrap();
        assert_eq!(inv.dim, Some(0));
        assert_eq!(inv.e0, 0);
        assert_eq!(krull_dimension_of_quotient(&hs), Some(0));

        // two quadrics forming a regular sequence: numerator (1-t^2)^2
        let gb2 = ideal_gb(3, FieldSpec::QQ, &[qq("x1^2", 3), qq("x2^2 + x1*x3", 3)]);
        let hs2 = hilbert_of_ideal_quotient(3, FieldSpec::QQ, &gb2);
        let expect = HilbertSeries::from_parts(3, &[(0, 1), (2, -2), (4, 1)], 3);
        assert!(hs2.series_eq(&expect));
        assert_eq!(height_from_series(3, &hs2), 2);
    }

    #[test]
    fn non_trivial_monomial_numerator() {
        // M = (x1^2, x1*x2) in 2 vars: R/M has Hilbert function 1,2,1,1,...
        let num = monomial_quotient_numerator(&[
            Monomial::from_exps(vec![2, 0]),
            Monomial::from_exps(vec![1, 1]),
        ]);
        let hs = HilbertSeries::from_parts(
            2,
            &num.iter()
                .enumerate()
                .map(|(k, &c)| (k as i64, c))
                .collect::<Vec<_>>(),
            2,
        );
        assert_eq!(hs.value_at(0), 1);
        assert_eq!(hs.value_at(1), 2);
        assert_eq!(hs.value_at(2), 1);
        assert_eq!(hs.value_at(3), 1);
        assert_eq!(hs.value_at(9), 1);
    }

    #[test]
    fn invariants_at_fixed_pole() {
        // (2 + 2t)/(1-t)^5 read in an 8-variable ring: dim 5, multiplicity 4,
        // e0 = e1 = 0 at the fixed pole 7
        let hs = HilbertSeries::from_parts(8, &[(0, 2), (1, 2)], 5);
        let inv = coefficients(&hs).unwrap();
        assert_eq!(inv.dim, Some(5));
        assert_eq!(inv.degree_at_dim, 4);
        assert_eq!(inv.e0, 0);
        assert_eq!(inv.e1_raw, 0);
        assert_eq!(inv.e1, 0);

        // a dimension-(n-1) example: numerator t over (1-t)^3 in n=4
        let hs2 = HilbertSeries::from_parts(4, &[(1, 1)], 3);
        let inv2 = coefficients(&hs2).unwrap();
        assert_eq!(inv2.e0, 1);
        assert_eq!(inv2.e1_raw, 1); // derivative of t at 1
        assert_eq!(inv2.e1, 1);
    }

    #[test]
    fn series_arithmetic_and_shift() {
        let a = HilbertSeries::from_parts(2, &[(0, 1)], 2);
        let b = HilbertSeries::from_parts(2, &[(0, 1)], 1);
        let diff = a.sub(&b); // 1/(1-t)^2 - 1/(1-t) = t/(1-t)^2
        let expect = HilbertSeries::from_parts(2, &[(1, 1)], 2);
        assert!(diff.series_eq(&expect));
        assert!(diff.shift(3).series_eq(&HilbertSeries::from_parts(2, &[(4, 1)], 2)));
        assert!(a.sub(&a).series_eq(&HilbertSeries::zero(2)));
    }

    #[test]
    fn polynomial_from_series() {
        // 1/(1-t)^2 has HP(T) = T + 1
        let hs = HilbertSeries::from_parts(2, &[(0, 1)], 2);
        let hp = hilbert_polynomial(&hs);
        let expect: Vec<BigRational> = [1, 1]
            .iter()
            .map(|&k| BigRational::from_integer(BigInt::from(k)))
            .collect();
        assert_eq!(hp, expect);

        // eventually-zero functions give the empty polynomial
        let fin = HilbertSeries::from_parts(2, &[(0, 1), (1, 1)], 0);
        assert!(hilbert_polynomial(&fin).is_empty());

        // numerator t over (1-t)^2: HP(T) = T
        let hs2 = HilbertSeries::from_parts(2, &[(1, 1)], 2);
        let hp2 = hilbert_polynomial(&hs2);
        assert_eq!(
            hp2,
            vec![BigRational::zero(), BigRational::one()]
        );
    }
}
