//! Exact coefficient rings: prime fields `F_p` (p prime, p <= 97), the
//! rationals and the integers. A [`Coefficient`] names the ring and carries
//! the arithmetic; a [`Scalar`] is a bare element and is only meaningful
//! relative to a coefficient ring.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Largest prime modulus accepted for `F_p`.
pub const MAX_PRIME: u64 = 97;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Coefficient {
    /// Prime field with `p` elements, `p` prime and `p <= 97`.
    Fp(u64),
    /// The ring of integers.
    Int,
    /// The field of rationals.
    Rat,
}

/// An element of one of the supported coefficient rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Fp(u64),
    Int(BigInt),
    Rat(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarError {
    NotPrime(u64),
    PrimeTooLarge(u64),
    KindMismatch,
    ParseError(String),
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::NotPrime(p) => write!(f, "{p} is not prime"),
            ScalarError::PrimeTooLarge(p) => write!(f, "prime {p} exceeds {MAX_PRIME}"),
            ScalarError::KindMismatch => write!(f, "scalar kind does not match coefficient ring"),
            ScalarError::ParseError(s) => write!(f, "cannot parse scalar from {s:?}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Coefficient {
    pub fn fp(p: u64) -> Result<Coefficient, ScalarError> {
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(ScalarError::PrimeTooLarge(p));
        }
        Ok(Coefficient::Fp(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Coefficient::Int)
    }

    /// Number of elements when the ring is finite.
    pub fn element_count(&self) -> Option<u64> {
        match self {
            Coefficient::Fp(p) => Some(*p),
            _ => None,
        }
    }

    /// The `i`-th element in the canonical enumeration order of a finite ring.
    pub fn nth_element(&self, i: u64) -> Scalar {
        match self {
            Coefficient::Fp(p) => {
                debug_assert!(i < *p);
                Scalar::Fp(i)
            }
            _ => panic!("nth_element on an infinite coefficient ring"),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Coefficient::Fp(_) => Scalar::Fp(0),
            Coefficient::Int => Scalar::Int(BigInt::zero()),
            Coefficient::Rat => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Coefficient::Fp(_) => Scalar::Fp(1),
            Coefficient::Int => Scalar::Int(BigInt::one()),
            Coefficient::Rat => Scalar::Rat(BigRational::one()),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Coefficient::Fp(p) => Scalar::Fp((n.rem_euclid(*p as i64)) as u64),
            Coefficient::Int => Scalar::Int(BigInt::from(n)),
            Coefficient::Rat => Scalar::Rat(BigRational::from(BigInt::from(n))),
        }
    }

    pub fn matches(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (Coefficient::Fp(_), Scalar::Fp(_))
                | (Coefficient::Int, Scalar::Int(_))
                | (Coefficient::Rat, Scalar::Rat(_))
        )
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Fp(a) => *a == 0,
            Scalar::Int(a) => a.is_zero(),
            Scalar::Rat(a) => a.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Coefficient::Fp(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            (Coefficient::Int, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (Coefficient::Rat, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar kind mismatch in add"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Coefficient::Fp(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            (Coefficient::Int, Scalar::Int(x)) => Scalar::Int(-x),
            (Coefficient::Rat, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar kind mismatch in neg"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Coefficient::Fp(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x * y) % p),
            (Coefficient::Int, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (Coefficient::Rat, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar kind mismatch in mul"),
        }
    }

    /// Multiplicative inverse. `None` for zero and for non-unit integers.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (Coefficient::Fp(p), Scalar::Fp(x)) => {
                if *x == 0 {
                    None
                } else {
                    // Fermat: x^(p-2) mod p.
                    let mut acc = 1u64;
                    let mut base = *x % p;
                    let mut e = p - 2;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = acc * base % p;
                        }
                        base = base * base % p;
                        e >>= 1;
                    }
                    Some(Scalar::Fp(acc))
                }
            }
            (Coefficient::Int, Scalar::Int(x)) => {
                if x.is_one() || (-x).is_one() {
                    Some(Scalar::Int(x.clone()))
                } else {
                    None
                }
            }
            (Coefficient::Rat, Scalar::Rat(x)) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(x.recip()))
                }
            }
            _ => panic!("scalar kind mismatch in inv"),
        }
    }

    /// Canonical text form: residues for `F_p`, integer strings for `Z`,
    /// `n/d` in lowest terms (d > 0) for `Q`.
    pub fn render(&self, s: &Scalar) -> String {
        match s {
            Scalar::Fp(x) => x.to_string(),
            Scalar::Int(x) => x.to_string(),
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    let mut out = x.numer().to_string();
                    out.push('/');
                    out.push_str(&x.denom().to_string());
                    out
                }
            }
        }
    }

    pub fn parse(&self, text: &str) -> Result<Scalar, ScalarError> {
        let bad = || ScalarError::ParseError(text.to_string());
        match self {
            Coefficient::Fp(p) => {
                let n: i64 = text.parse().map_err(|_| bad())?;
                Ok(Scalar::Fp(n.rem_euclid(*p as i64) as u64))
            }
            Coefficient::Int => {
                let n: BigInt = text.parse().map_err(|_| bad())?;
                Ok(Scalar::Int(n))
            }
            Coefficient::Rat => {
                let (ns, ds) = match text.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (text, "1"),
                };
                let n: BigInt = ns.parse().map_err(|_| bad())?;
                let d: BigInt = ds.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rat(BigRational::new(n, d)))
            }
        }
    }
}

/// Total order used for deterministic lexicographic tie-breaking. For `F_p`
/// this is the residue order 0 < 1 < ... < p-1.
pub fn scalar_cmp(a: &Scalar, b: &Scalar) -> Ordering {
    match (a, b) {
        (Scalar::Fp(x), Scalar::Fp(y)) => x.cmp(y),
        (Scalar::Int(x), Scalar::Int(y)) => x.cmp(y),
        (Scalar::Rat(x), Scalar::Rat(y)) => x.cmp(y),
        _ => panic!("scalar kind mismatch in comparison"),
    }
}

/// All vectors of length `len` over a finite coefficient ring, in
/// lexicographic order (leftmost coordinate most significant).
pub fn enumerate_vectors(coeff: &Coefficient, len: usize) -> VectorIter {
    let p = coeff
        .element_count()
        .expect("vector enumeration needs a finite coefficient ring");
    VectorIter { coeff: *coeff, p, state: Some(alloc::vec![0; len]) }
}

pub struct VectorIter {
    coeff: Coefficient,
    p: u64,
    state: Option<Vec<u64>>,
}

impl Iterator for VectorIter {
    type Item = Vec<Scalar>;

    fn next(&mut self) -> Option<Vec<Scalar>> {
        let state = self.state.as_mut()?;
        let out: Vec<Scalar> = state.iter().map(|&d| self.coeff.nth_element(d)).collect();
        // Increment with the last coordinate least significant.
        let mut i = state.len();
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            state[i] += 1;
            if state[i] < self.p {
                break;
            }
            state[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_gate() {
        assert!(Coefficient::fp(2).is_ok());
        assert!(Coefficient::fp(97).is_ok());
        assert!(Coefficient::fp(1).is_err());
        assert!(Coefficient::fp(91).is_err());
        assert!(Coefficient::fp(101).is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let f5 = Coefficient::fp(5).unwrap();
        let a = f5.from_i64(3);
        let b = f5.from_i64(4);
        assert_eq!(f5.add(&a, &b), Scalar::Fp(2));
        assert_eq!(f5.mul(&a, &b), Scalar::Fp(2));
        assert_eq!(f5.inv(&a), Some(Scalar::Fp(2)));
        assert_eq!(f5.from_i64(-1), Scalar::Fp(4));
    }

    #[test]
    fn rational_roundtrip() {
        let q = Coefficient::Rat;
        let x = q.parse("-3/6").unwrap();
        assert_eq!(q.render(&x), "-1/2");
        let y = q.inv(&x).unwrap();
        assert_eq!(q.render(&y), "-2");
    }

    #[test]
    fn vector_enumeration_is_lexicographic() {
        let f2 = Coefficient::fp(2).unwrap();
        let all: Vec<_> = enumerate_vectors(&f2, 2).collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all[0], alloc::vec![Scalar::Fp(0), Scalar::Fp(0)]);
        assert_eq!(all[1], alloc::vec![Scalar::Fp(0), Scalar::Fp(1)]);
        assert_eq!(all[3], alloc::vec![Scalar::Fp(1), Scalar::Fp(1)]);
    }
}
