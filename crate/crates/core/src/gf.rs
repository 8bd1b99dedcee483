//! Exact arithmetic in finite fields GF(p^m).
//!
//! Elements are stored in the polynomial basis as coefficient vectors of
//! length `m` with entries in `[0, p)`, constant term first. A canonical
//! total order (mixed-radix index, least-significant coefficient first)
//! makes every downstream enumeration deterministic.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard cap on the field size. Everything in this crate enumerates objects
/// polynomial in q, so a cap turns silent blowup into a clear error.
pub const MAX_Q: u64 = 1 << 16;

#[derive(Debug)]
struct SpecInner {
    p: u64,
    m: usize,
    /// Monic irreducible modulus, length m+1, constant term first.
    modulus: Vec<u64>,
    q: u64,
}

/// A finite field GF(p^m), shared cheaply by all its elements.
#[derive(Debug, Clone)]
pub struct FieldSpec(Arc<SpecInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.m == other.0.m
                && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.m.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "{}", self.0.p)
        } else {
            let cs: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
            write!(f, "{}^{} modulus {{{}}}", self.0.p, self.0.m, cs.join(","))
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

/// Remainder of polynomial division over F_p. Both inputs constant-first;
/// `divisor` must be monic.
fn poly_rem(mut a: Vec<u64>, divisor: &[u64], p: u64) -> Vec<u64> {
    let d = divisor.len() - 1;
    while a.len() > d {
        let lead = *a.last().unwrap();
        let deg = a.len() - 1;
        if lead != 0 {
            for j in 0..d {
                let idx = deg - d + j;
                a[idx] = (a[idx] + lead * (p - divisor[j])) % p;
            }
        }
        a.pop();
    }
    a
}

/// Monic polynomial of degree `m` over F_p, irreducible iff it has no monic
/// factor of degree 1..=m/2. Exhaustive trial division; fine for the field
/// sizes in scope.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    if modulus[0] == 0 {
        return false; // divisible by t
    }
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            // decode lower coefficients of a monic degree-d divisor
            let mut div = Vec::with_capacity(d + 1);
            let mut rem = idx;
            for _ in 0..d {
                div.push(rem % p);
                rem /= p;
            }
            div.push(1);
            let r = poly_rem(modulus.to_vec(), &div, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree m over F_p that is smallest in
/// mixed-radix order of its lower coefficients. For m = 1 this is `t`.
pub fn default_modulus(p: u64, m: usize) -> Result<Vec<u64>> {
    if m == 1 {
        return Ok(vec![0, 1]);
    }
    let count = p
        .checked_pow(m as u32)
        .ok_or_else(|| Error::ResourceLimit(format!("p^m overflows for p={p}, m={m}")))?;
    for idx in 0..count {
        let mut modulus = Vec::with_capacity(m + 1);
        let mut rem = idx;
        for _ in 0..m {
            modulus.push(rem % p);
            rem /= p;
        }
        modulus.push(1);
        if is_irreducible(&modulus, p) {
            return Ok(modulus);
        }
    }
    unreachable!("an irreducible of every degree exists over F_p")
}

impl FieldSpec {
    /// GF(p) for a prime p.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        FieldSpec::new(p, 1, None)
    }

    /// GF(p^m) with the default modulus.
    pub fn extension(p: u64, m: usize) -> Result<FieldSpec> {
        FieldSpec::new(p, m, None)
    }

    /// GF(p^m) with a caller-supplied monic irreducible modulus
    /// (length m+1, constant term first).
    pub fn with_modulus(p: u64, m: usize, modulus: Vec<u64>) -> Result<FieldSpec> {
        FieldSpec::new(p, m, Some(modulus))
    }

    fn new(p: u64, m: usize, modulus: Option<Vec<u64>>) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::usage(format!("{p} is not prime")));
        }
        if m < 1 {
            return Err(Error::usage("extension degree must be at least 1"));
        }
        let q = u32::try_from(m)
            .ok()
            .and_then(|e| p.checked_pow(e))
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| {
                Error::ResourceLimit(format!("q = {p}^{m} exceeds the cap of {MAX_Q}"))
            })?;
        let modulus = match modulus {
            Some(mv) => {
                if mv.len() != m + 1 {
                    return Err(Error::usage(format!(
                        "modulus must have {} coefficients, got {}",
                        m + 1,
                        mv.len()
                    )));
                }
                if mv[m] != 1 {
                    return Err(Error::usage("modulus must be monic"));
                }
                if mv.iter().any(|&c| c >= p) {
                    return Err(Error::usage("modulus coefficients must lie in [0, p)"));
                }
                if !is_irreducible(&mv, p) {
                    return Err(Error::usage("modulus is reducible over F_p"));
                }
                mv
            }
            None => default_modulus(p, m)?,
        };
        Ok(FieldSpec(Arc::new(SpecInner { p, m, modulus, q })))
    }

    /// Parse a field literal: `p`, `p^m`, or `p^m modulus {c0,c1,...,cm}`.
    pub fn parse(text: &str) -> Result<FieldSpec> {
        let text = text.trim();
        let err = |msg: &str| Error::usage(format!("bad field literal '{text}': {msg}"));
        let (head, modulus) = match text.split_once("modulus") {
            Some((h, tail)) => {
                let tail = tail.trim();
                let inner = tail
                    .strip_prefix('{')
                    .and_then(|s| s.strip_suffix('}'))
                    .ok_or_else(|| err("modulus must be {c0,c1,...}"))?;
                let coeffs = inner
                    .split(',')
                    .map(|c| c.trim().parse::<u64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| err("bad modulus coefficient"))?;
                (h.trim(), Some(coeffs))
            }
            None => (text, None),
        };
        let (p, m) = match head.split_once('^') {
            Some((ps, ms)) => (
                ps.trim().parse::<u64>().map_err(|_| err("bad prime"))?,
                ms.trim().parse::<usize>().map_err(|_| err("bad degree"))?,
            ),
            None => (head.parse::<u64>().map_err(|_| err("bad prime"))?, 1),
        };
        FieldSpec::new(p, m, modulus)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn m(&self) -> usize {
        self.0.m
    }
    pub fn q(&self) -> u64 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { spec: self.clone(), coeffs: vec![0; self.0.m] }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.0.m];
        coeffs[0] = 1;
        FieldElement { spec: self.clone(), coeffs }
    }

    /// Embed an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        let p = self.0.p as i64;
        let mut coeffs = vec![0; self.0.m];
        coeffs[0] = (v.rem_euclid(p)) as u64;
        FieldElement { spec: self.clone(), coeffs }
    }

    /// Element with the given polynomial-basis coefficients (reduced mod p).
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.0.m {
            return Err(Error::usage(format!(
                "element needs {} coefficients, got {}",
                self.0.m,
                coeffs.len()
            )));
        }
        let coeffs = coeffs.iter().map(|&c| c % self.0.p).collect();
        Ok(FieldElement { spec: self.clone(), coeffs })
    }

    /// Inverse of `FieldElement::index`.
    pub fn index_element(&self, i: u64) -> Result<FieldElement> {
        if i >= self.0.q {
            return Err(Error::usage(format!("index {i} out of range [0, {})", self.0.q)));
        }
        let mut coeffs = Vec::with_capacity(self.0.m);
        let mut rem = i;
        for _ in 0..self.0.m {
            coeffs.push(rem % self.0.p);
            rem /= self.0.p;
        }
        Ok(FieldElement { spec: self.clone(), coeffs })
    }

    /// All q elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |i| self.index_element(i).unwrap())
    }

    /// Parse an element literal: decimal integer (reduced mod p, prime
    /// subfield) or `{c0,c1,...}` with m coefficients.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('{') {
            let inner = inner
                .strip_suffix('}')
                .ok_or_else(|| Error::usage(format!("unterminated element literal '{text}'")))?;
            let coeffs = inner
                .split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::usage(format!("bad element literal '{text}'")))?;
            self.element(&coeffs)
        } else {
            let v = text
                .parse::<i64>()
                .map_err(|_| Error::usage(format!("bad element literal '{text}'")))?;
            Ok(self.from_int(v))
        }
    }
}

/// An element of a [`FieldSpec`], in reduced polynomial-basis form.
/// Representation is unique, so derived equality is field equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Mixed-radix encoding, least-significant coefficient first.
    pub fn index(&self) -> u64 {
        let p = self.spec.p();
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn check_spec(&self, other: &FieldElement) {
        assert!(
            self.spec == other.spec,
            "field mismatch: {} vs {}",
            self.spec,
            other.spec
        );
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.check_spec(other);
        let p = self.spec.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FieldElement { spec: self.spec.clone(), coeffs }
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.spec.p();
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElement { spec: self.spec.clone(), coeffs }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.check_spec(other);
        let p = self.spec.p();
        let m = self.spec.m();
        let modulus = self.spec.modulus();
        let mut buf = vec![0u64; 2 * m - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                buf[i + j] = (buf[i + j] + a * b) % p;
            }
        }
        // reduce mod the monic modulus, top down
        for d in (m..2 * m - 1).rev() {
            let factor = buf[d];
            if factor != 0 {
                buf[d] = 0;
                for j in 0..m {
                    buf[d - m + j] = (buf[d - m + j] + factor * (p - modulus[j])) % p;
                }
            }
        }
        buf.truncate(m);
        FieldElement { spec: self.spec.clone(), coeffs: buf }
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.spec.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(q-2).
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { q: self.spec.q() });
        }
        Ok(self.pow(self.spec.q() - 2))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&other.inv()?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.m() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
            write!(f, "{{{}}}", cs.join(","))
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                FieldElement::$inner(self, rhs)
            }
        }
        impl std::ops::$trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                FieldElement::$inner(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}
impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: &str) -> FieldSpec {
        FieldSpec::parse(q).unwrap()
    }

    #[test]
    fn add_examples() {
        let f2 = gf("2");
        assert!(f2.one().add(&f2.one()).is_zero());
        let f5 = gf("5");
        assert_eq!(f5.from_int(3).add(&f5.from_int(4)), f5.from_int(2));
        let f4 = gf("2^2 modulus {1,1,1}");
        let t = f4.element(&[0, 1]).unwrap();
        let t1 = f4.element(&[1, 1]).unwrap();
        assert_eq!(t.add(&t1), f4.one());
    }

    #[test]
    fn mul_examples() {
        let f4 = gf("2^2");
        let t = f4.element(&[0, 1]).unwrap();
        // t * t reduces to t + 1 mod t^2+t+1
        assert_eq!(t.mul(&t), f4.element(&[1, 1]).unwrap());
        let f5 = gf("5");
        assert_eq!(f5.from_int(2).mul(&f5.from_int(3)), f5.one());
        for a in gf("7").elements() {
            assert_eq!(a.mul(&a.spec().one()), a);
        }
    }

    #[test]
    fn inv_examples() {
        let f5 = gf("5");
        assert_eq!(f5.from_int(2).inv().unwrap(), f5.from_int(3));
        let f3 = gf("3");
        assert_eq!(f3.one().neg(), f3.from_int(2));
        // GF(4): exhaustive search confirms t^-1 = t+1
        let f4 = gf("2^2");
        let t = f4.element(&[0, 1]).unwrap();
        let found = f4
            .elements()
            .find(|b| t.mul(b).is_one())
            .unwrap();
        assert_eq!(t.inv().unwrap(), found);
        assert_eq!(found, f4.element(&[1, 1]).unwrap());
        assert_eq!(f4.zero().inv(), Err(Error::DivisionByZero { q: 4 }));
    }

    #[test]
    fn index_examples() {
        let f4 = gf("2^2");
        assert_eq!(f4.zero().index(), 0);
        assert_eq!(f4.element(&[1, 1]).unwrap().index(), 3);
        let f7 = gf("7");
        assert_eq!(f7.from_int(5).index(), 5);
        for a in f4.elements() {
            assert_eq!(f4.index_element(a.index()).unwrap(), a);
        }
        assert!(f4.index_element(4).is_err());
    }

    #[test]
    fn enumerate_order() {
        let f2 = gf("2");
        let els: Vec<_> = f2.elements().collect();
        assert_eq!(els, vec![f2.zero(), f2.one()]);
        let f4 = gf("2^2");
        let els: Vec<_> = f4.elements().collect();
        assert_eq!(
            els,
            vec![
                f4.zero(),
                f4.one(),
                f4.element(&[0, 1]).unwrap(),
                f4.element(&[1, 1]).unwrap()
            ]
        );
        assert_eq!(gf("3^2").elements().count(), 9);
    }

    #[test]
    fn default_modulus_examples() {
        assert_eq!(default_modulus(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 3).unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(3, 1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::with_modulus(2, 2, vec![0, 0, 1]).is_err()); // t^2 reducible
        assert!(FieldSpec::with_modulus(2, 2, vec![1, 1, 0]).is_err()); // not monic
        assert!(FieldSpec::extension(2, 17).is_err()); // over the q cap
    }

    fn small_fields() -> Vec<FieldSpec> {
        ["2", "3", "2^2", "5", "7", "2^3", "3^2"]
            .iter()
            .map(|s| gf(s))
            .collect()
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            let els: Vec<_> = f.elements().collect();
            for a in &els {
                for b in &els {
                    assert_eq!(a.add(b), b.add(a));
                    assert_eq!(a.mul(b), b.mul(a));
                    for c in &els {
                        assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
                        assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                        assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                    }
                }
                assert_eq!(a.add(&f.zero()), *a);
                assert_eq!(a.mul(&f.one()), *a);
                assert!(a.add(&a.neg()).is_zero());
                if !a.is_zero() {
                    assert!(a.mul(&a.inv().unwrap()).is_one());
                }
            }
        }
    }

    #[test]
    fn fermat_and_frobenius_exhaustive() {
        for f in small_fields() {
            let q = f.q();
            let p = f.p();
            for a in f.elements() {
                if !a.is_zero() {
                    assert!(a.pow(q - 1).is_one());
                }
                for b in f.elements() {
                    assert_eq!(a.add(&b).pow(p), a.pow(p).add(&b.pow(p)));
                }
            }
        }
    }

    #[test]
    fn index_is_bijection() {
        for f in small_fields() {
            let mut seen = vec![false; f.q() as usize];
            for a in f.elements() {
                let i = a.index() as usize;
                assert!(!seen[i]);
                seen[i] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn parse_field_literals() {
        assert_eq!(gf("7").q(), 7);
        assert_eq!(gf("2^4").q(), 16);
        let f4 = gf("2^2 modulus {1,1,1}");
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert!(FieldSpec::parse("6").is_err());
        assert!(FieldSpec::parse("2^2 modulus {1,1}").is_err());
    }

    #[test]
    fn parse_element_literals() {
        let f5 = gf("5");
        assert_eq!(f5.parse_element("7").unwrap(), f5.from_int(2));
        assert_eq!(f5.parse_element("-1").unwrap(), f5.from_int(4));
        let f4 = gf("2^2");
        assert_eq!(
            f4.parse_element("{1,1}").unwrap(),
            f4.element(&[1, 1]).unwrap()
        );
        assert!(f4.parse_element("{1").is_err());
    }
}
