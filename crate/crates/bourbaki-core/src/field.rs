//! Exact coefficient arithmetic: arbitrary-precision rationals and prime fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Which coefficient field a computation runs over.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    QQ,
    Fp(u32),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<FieldSpec, String> {
        if s == "QQ" {
            return Ok(FieldSpec::QQ);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u32 = rest
                .parse()
                .map_err(|_| format!("bad prime in field spec `{s}`"))?;
            if !is_prime(p) {
                return Err(format!("{p} is not prime"));
            }
            return Ok(FieldSpec::Fp(p));
        }
        Err(format!("unknown field `{s}` (expected QQ or Fp:<prime>)"))
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            FieldSpec::QQ => FieldElement::Q(BigRational::zero()),
            FieldSpec::Fp(p) => FieldElement::Fp { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> FieldElement {
        match self {
            FieldSpec::QQ => FieldElement::Q(BigRational::from_integer(BigInt::from(k))),
            FieldSpec::Fp(p) => {
                let p64 = *p as i64;
                FieldElement::Fp {
                    p: *p,
                    v: k.rem_euclid(p64) as u32,
                }
            }
        }
    }

    pub fn from_bigint(&self, k: &BigInt) -> FieldElement {
        match self {
            FieldSpec::QQ => FieldElement::Q(BigRational::from_integer(k.clone())),
            FieldSpec::Fp(p) => {
                let m = k.mod_floor_u32(*p);
                FieldElement::Fp { p: *p, v: m }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::QQ => write!(f, "QQ"),
            FieldSpec::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

trait ModFloorU32 {
    fn mod_floor_u32(&self, p: u32) -> u32;
}

impl ModFloorU32 for BigInt {
    fn mod_floor_u32(&self, p: u32) -> u32 {
        use num_integer::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u32_digits();
        *digits.first().unwrap_or(&0)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of the active coefficient field. Values are kept canonical:
/// rationals fully reduced with positive denominator, residues in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FieldElement {
    Q(BigRational),
    Fp { p: u32, v: u32 },
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Q(_) => FieldSpec::QQ,
            FieldElement::Fp { p, .. } => FieldSpec::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Q(r) => r.is_zero(),
            FieldElement::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Q(r) => r.is_one(),
            FieldElement::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        match (self, other) {
            (FieldElement::Q(a), FieldElement::Q(b)) => FieldElement::Q(a + b),
            (FieldElement::Fp { p, v: a }, FieldElement::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                FieldElement::Fp {
                    p: *p,
                    v: ((*a as u64 + *b as u64) % *p as u64) as u32,
                }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Q(a) => FieldElement::Q(-a),
            FieldElement::Fp { p, v } => FieldElement::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        match (self, other) {
            (FieldElement::Q(a), FieldElement::Q(b)) => FieldElement::Q(a * b),
            (FieldElement::Fp { p, v: a }, FieldElement::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                FieldElement::Fp {
                    p: *p,
                    v: ((*a as u64 * *b as u64) % *p as u64) as u32,
                }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn inv(&self) -> FieldElement {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            FieldElement::Q(a) => FieldElement::Q(a.recip()),
            FieldElement::Fp { p, v } => FieldElement::Fp {
                p: *p,
                v: mod_inverse(*v, *p),
            },
        }
    }

    pub fn div(&self, other: &FieldElement) -> FieldElement {
        self.mul(&other.inv())
    }

    /// Comparison key used only for deterministic tie-breaking, not algebra.
    pub fn sort_key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    // extended Euclid over i64; p is prime and a != 0 mod p
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} not invertible mod {p}");
    t.rem_euclid(p as i64) as u32
}

/// True if the rational is negative (used by the renderer to pick `+`/`-`).
pub fn is_negative(x: &FieldElement) -> bool {
    match x {
        FieldElement::Q(r) => r.is_negative(),
        FieldElement::Fp { .. } => false,
    }
}

/// Absolute value for rendering; identity over a prime field.
pub fn abs(x: &FieldElement) -> FieldElement {
    match x {
        FieldElement::Q(r) => FieldElement::Q(r.abs()),
        other => other.clone(),
    }
}
