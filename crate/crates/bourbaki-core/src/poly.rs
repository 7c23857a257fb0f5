//! Sparse homogeneous-friendly polynomial arithmetic over an exact field.

use crate::field::{FieldElement, FieldSpec};
use crate::monomial::{Monomial, MonomialOrder};
use std::collections::BTreeMap;
use std::fmt;

/// Terms are kept canonical: combined, zero-free, sorted descending under
/// degrevlex. Leading terms under other orders are located by scanning.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    n: usize,
    field: FieldSpec,
    terms: Vec<(Monomial, FieldElement)>,
}

impl Polynomial {
    pub fn zero(n: usize, field: FieldSpec) -> Polynomial {
        Polynomial { n, field, terms: Vec::new() }
    }

    pub fn constant(n: usize, c: FieldElement) -> Polynomial {
        let field = c.spec();
        if c.is_zero() {
            return Polynomial::zero(n, field);
        }
        Polynomial { n, field, terms: vec![(Monomial::one(n), c)] }
    }

    pub fn one(n: usize, field: FieldSpec) -> Polynomial {
        Polynomial::constant(n, field.one())
    }

    pub fn var(n: usize, i: usize, field: FieldSpec) -> Polynomial {
        Polynomial { n, field, terms: vec![(Monomial::var(n, i), field.one())] }
    }

    pub fn from_terms(
        n: usize,
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Polynomial {
        let mut map: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), n, "monomial arity mismatch");
            assert_eq!(c.spec(), field, "coefficient field mismatch");
            match map.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&c);
                    if s.is_zero() {
                        e.remove();
                    } else {
                        e.insert(s);
                    }
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial {
            n,
            field,
            terms: map.into_iter().rev().collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Max total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// All terms share one total degree (zero counts as homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &FieldElement)> {
        match order {
            // canonical storage is already degrevlex-descending
            MonomialOrder::DegRevLex => self.terms.first().map(|(m, c)| (m, c)),
            _ => self
                .terms
                .iter()
                .max_by(|(a, _), (b, _)| order.cmp(a, b))
                .map(|(m, c)| (m, c)),
        }
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_compat(other);
        // merge two descending term lists
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match mb.cmp(ma) {
                std::cmp::Ordering::Less => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = ca.add(cb);
                    if !s.is_zero() {
                        out.push((ma.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(other.terms[j..].iter().cloned());
        Polynomial { n: self.n, field: self.field, terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n, self.field);
        }
        Polynomial {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect(),
        }
    }

    /// self * (c * m) — the workhorse of reduction steps.
    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n, self.field);
        }
        if m.is_one() {
            return self.scale(c);
        }
        // multiplying by a fixed monomial preserves degrevlex ordering
        Polynomial {
            n: self.n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(t, k)| (t.mul(m), k.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_compat(other);
        let mut acc: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get().add(&c);
                        if s.is_zero() {
                            e.remove();
                        } else {
                            e.insert(s);
                        }
                    }
                }
            }
        }
        Polynomial {
            n: self.n,
            field: self.field,
            terms: acc.into_iter().rev().collect(),
        }
    }

    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            let k = c.mul(&self.field.from_int(e as i64));
            if !k.is_zero() {
                terms.push((Monomial::from_exps(exps), k));
            }
        }
        Polynomial::from_terms(self.n, self.field, terms)
    }

    /// Reinterpret in a ring with more variables (the new ones unused).
    pub fn extended(&self, new_n: usize) -> Polynomial {
        Polynomial {
            n: new_n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extended(new_n), c.clone()))
                .collect(),
        }
    }

    /// Inverse of `extended`; panics if trailing variables occur.
    pub fn truncated(&self, new_n: usize) -> Polynomial {
        Polynomial::from_terms(
            new_n,
            self.field,
            self.terms
                .iter()
                .map(|(m, c)| (m.truncated(new_n), c.clone())),
        )
    }

    /// Split into homogeneous parts, ascending by degree.
    pub fn homogeneous_components(&self) -> Vec<Polynomial> {
        let mut by_deg: BTreeMap<u32, Vec<(Monomial, FieldElement)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_deg.entry(m.degree()).or_default().push((m.clone(), c.clone()));
        }
        by_deg
            .into_values()
            .map(|ts| Polynomial::from_terms(self.n, self.field, ts))
            .collect()
    }

    fn check_compat(&self, other: &Polynomial) {
        assert_eq!(self.n, other.n, "variable count mismatch");
        assert_eq!(self.field, other.field, "field mismatch");
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::render_poly(self))
    }
}
