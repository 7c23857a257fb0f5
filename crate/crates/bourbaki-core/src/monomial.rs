//! Monomials in x1..xn and the monomial orders used by the engine.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector. `Ord` is the canonical degrevlex order so that monomials
/// can key a `BTreeMap`; order-sensitive code must go through `MonomialOrder`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial { exps: vec![0; n] }
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        assert!(i < n, "variable index out of range");
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u16>) -> Monomial {
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Same exponents, read in a ring with `new_n >= n` variables.
    pub fn extended(&self, new_n: usize) -> Monomial {
        assert!(new_n >= self.exps.len());
        let mut exps = self.exps.clone();
        exps.resize(new_n, 0);
        Monomial { exps }
    }

    /// Drop trailing variables; caller asserts they are unused.
    pub fn truncated(&self, new_n: usize) -> Monomial {
        assert!(self.exps[new_n..].iter().all(|&e| e == 0));
        Monomial {
            exps: self.exps[..new_n].to_vec(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// a vs b under degrevlex: degree first, ties broken so that the monomial
/// whose last nonzero exponent difference is negative wins.
fn degrevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        c => return c,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        degrevlex(&self.exps, &other.exps)
    }
}

/// Term orders. `Elim { split }` is a two-block order that eliminates the
/// variables with index >= split: their block is compared (degrevlex) first,
/// so a Groebner basis element free of them stays free of them.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    DegRevLex,
    Elim { split: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => degrevlex(&a.exps, &b.exps),
            MonomialOrder::Elim { split } => {
                match degrevlex(&a.exps[*split..], &b.exps[*split..]) {
                    Ordering::Equal => degrevlex(&a.exps[..*split], &b.exps[..*split]),
                    c => c,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u16]) -> Monomial {
        Monomial::from_exps(exps.to_vec())
    }

    #[test]
    fn degrevlex_examples() {
        // x1 > x2 > x3
        assert!(m(&[1, 0, 0]) > m(&[0, 1, 0]));
        assert!(m(&[0, 1, 0]) > m(&[0, 0, 1]));
        // x2^2 > x1*x3 and x2^2 > x2*x3 (classic degrevlex separations)
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
        assert!(m(&[0, 2, 0]) > m(&[0, 1, 1]));
        // degree dominates
        assert!(m(&[0, 0, 3]) > m(&[1, 1, 0]));
    }

    #[test]
    fn elimination_order_blocks() {
        // n = 3 with split 2: x3 is eliminated, so anything containing x3
        // beats anything that does not.
        let ord = MonomialOrder::Elim { split: 2 };
        assert_eq!(ord.cmp(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
        assert_eq!(ord.cmp(&m(&[3, 0, 1]), &m(&[0, 1, 2])), Ordering::Less);
        // ties in the eliminated block fall back to degrevlex in front
        assert_eq!(ord.cmp(&m(&[1, 0, 1]), &m(&[0, 1, 1])), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_quotient() {
        let a = m(&[1, 2, 0]);
        let b = m(&[2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_into(&b), m(&[1, 0, 1]));
        assert_eq!(a.lcm(&m(&[0, 3, 1])), m(&[1, 3, 1]));
        assert!(m(&[1, 0, 0]).gcd_is_one(&m(&[0, 2, 1])));
    }
}
