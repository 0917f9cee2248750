//! Exact scalar arithmetic: prime fields F_p, the rationals (the
//! characteristic-zero scalar field), and small Galois fields GF(p^k).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Trial-division primality test. Adequate for the characteristics used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `(p, m)` with `q = p^m` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A field of scalars in which all matrix entries live.
///
/// Two field values compare equal iff they describe the same field; sparse
/// matrix operations refuse to mix unequal fields.
#[allow(clippy::wrong_self_convention)]
pub trait ScalarField: Clone + PartialEq + Eq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn from_bigint(&self, x: &BigInt) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }
}

/// The prime field F_p. Elements are canonical representatives in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
}

impl ScalarField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, x: i64) -> u64 {
        self.reduce(x)
    }

    fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor_big(self.p)
    }

    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }

    fn add(&self, x: &u64, y: &u64) -> u64 {
        let s = x + y;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn mul(&self, x: &u64, y: &u64) -> u64 {
        ((*x as u128 * *y as u128) % self.p as u128) as u64
    }

    fn neg(&self, x: &u64) -> u64 {
        if *x == 0 {
            0
        } else {
            self.p - x
        }
    }

    fn inv(&self, x: &u64) -> Result<u64> {
        let x = x % self.p;
        if x == 0 {
            return Err(Error::NonInvertible(format!("0 in F_{}", self.p)));
        }
        // Extended Euclid on (x, p).
        let (mut r0, mut r1) = (self.p as i128, x as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, p: u64) -> u64;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }
}

/// The rationals Q, used as the characteristic-zero scalar field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl ScalarField for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    fn from_bigint(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }

    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }

    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }

    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }

    fn sub(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x - y
    }

    fn inv(&self, x: &BigRational) -> Result<BigRational> {
        if x.is_zero() {
            return Err(Error::NonInvertible(String::from("0 in Q")));
        }
        Ok(x.recip())
    }
}

/// Renders a rational as `a` or `a/b` with a positive denominator.
pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else if x.denom().is_negative() {
        format!("{}/{}", -x.numer(), -x.denom())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// An element of GF(p^k): coefficients of a polynomial of degree `< k`,
/// constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfElem(pub Vec<u64>);

impl fmt::Display for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(&self.0))
    }
}

fn poly_to_string(c: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let t = match (i, a) {
            (0, a) => format!("{a}"),
            (1, 1) => String::from("x"),
            (1, a) => format!("{a}x"),
            (i, 1) => format!("x^{i}"),
            (i, a) => format!("{a}x^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        String::from("0")
    } else {
        terms.join(" + ")
    }
}

/// GF(p^k) realized as F_p[x] / (modulus).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u64,
    k: usize,
    /// Monic, constant term first, length `k + 1`.
    modulus: Vec<u64>,
    primitive: GfElem,
}

/// Remainder of `a` modulo the monic polynomial `b` over F_p. Both are
/// coefficient lists with the constant term first.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * bc) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Monic polynomial of the given degree whose lower coefficients are the
/// base-p digits of `index`.
fn monic_from_index(index: u64, degree: usize, p: u64) -> Vec<u64> {
    let mut c = digits(index, degree, p);
    c.push(1);
    c
}

fn digits(mut index: u64, len: usize, p: u64) -> Vec<u64> {
    let mut c = vec![0u64; len];
    for slot in c.iter_mut() {
        *slot = index % p;
        index /= p;
    }
    c
}

fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let k = modulus.len() - 1;
    if modulus[0] == 0 && k > 1 {
        return false;
    }
    for d in 1..=k / 2 {
        for idx in 0..p.pow(d as u32) {
            let f = monic_from_index(idx, d, p);
            if poly_rem(modulus, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    /// Builds GF(p^k). Without an explicit modulus the smallest irreducible
    /// monic polynomial of degree `k` is used, ordering candidates by the
    /// integer whose base-p digits are the lower coefficients (so `x³+x+1`
    /// precedes `x³+x²+1`).
    pub fn new(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidArgument(String::from("extension degree must be >= 1")));
        }
        let order = (p as u128).checked_pow(k as u32).filter(|&o| o <= 1 << 24).ok_or_else(|| {
            Error::InvalidArgument(format!("GF({p}^{k}) is too large"))
        })?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k + 1 || m[k] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidArgument(format!(
                        "modulus must be a monic degree-{k} polynomial over F_{p}"
                    )));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::Reducible(poly_to_string(&m)));
                }
                m
            }
            None => (0..p.pow(k as u32))
                .map(|idx| monic_from_index(idx, k, p))
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists"),
        };
        let mut field = Self {
            p,
            k,
            modulus,
            primitive: GfElem(vec![0; k]),
        };
        let group_order = order as u64 - 1;
        let factors = prime_factors(group_order);
        field.primitive = (1..order as u64)
            .map(|i| field.from_index(i))
            .find(|g| field.has_full_order(g, group_order, &factors))
            .expect("the multiplicative group is cyclic");
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The deterministic generator of the multiplicative group: the
    /// element of smallest index with order `p^k - 1`.
    pub fn primitive_element(&self) -> &GfElem {
        &self.primitive
    }

    /// Element whose coefficients are the base-p digits of `index`.
    pub fn from_index(&self, index: u64) -> GfElem {
        GfElem(digits(index, self.k, self.p))
    }

    pub fn index_of(&self, x: &GfElem) -> u64 {
        x.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElem> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn zero(&self) -> GfElem {
        GfElem(vec![0; self.k])
    }

    pub fn one(&self) -> GfElem {
        self.from_scalar(1)
    }

    /// Embeds an element of the prime subfield.
    pub fn from_scalar(&self, c: u64) -> GfElem {
        let mut v = vec![0; self.k];
        v[0] = c % self.p;
        GfElem(v)
    }

    pub fn is_zero(&self, x: &GfElem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &GfElem, y: &GfElem) -> GfElem {
        GfElem(x.0.iter().zip(&y.0).map(|(a, b)| (a + b) % self.p).collect())
    }

    pub fn neg(&self, x: &GfElem) -> GfElem {
        GfElem(x.0.iter().map(|&a| (self.p - a) % self.p).collect())
    }

    pub fn sub(&self, x: &GfElem, y: &GfElem) -> GfElem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &GfElem, y: &GfElem) -> GfElem {
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &a) in x.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % self.p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.k, 0);
        GfElem(r)
    }

    pub fn pow(&self, x: &GfElem, mut e: u64) -> GfElem {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &GfElem) -> Result<GfElem> {
        if self.is_zero(x) {
            return Err(Error::NonInvertible(format!("0 in GF({}^{})", self.p, self.k)));
        }
        Ok(self.pow(x, self.order() - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: &GfElem) -> Result<u64> {
        if self.is_zero(x) {
            return Err(Error::NonInvertible(String::from("0 has no multiplicative order")));
        }
        let mut ord = self.order() - 1;
        for r in prime_factors(ord) {
            while ord.is_multiple_of(r) && self.pow(x, ord / r) == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }

    fn has_full_order(&self, g: &GfElem, group_order: u64, factors: &[u64]) -> bool {
        !self.is_zero(g) && factors.iter().all(|r| self.pow(g, group_order / r) != self.one())
    }

    /// Frobenius `x ↦ x^p`.
    pub fn frobenius(&self, x: &GfElem) -> GfElem {
        self.pow(x, self.p)
    }

    /// Whether `x` lies in the subfield of order `p^sub_degree`.
    pub fn in_subfield(&self, x: &GfElem, sub_degree: usize) -> bool {
        self.pow(x, self.p.pow(sub_degree as u32)) == *x
    }

    /// Trace to the subfield F_q, q = p^sub_degree:
    /// `x + x^q + ... + x^{q^{k/sub_degree - 1}}`.
    pub fn trace_to_subfield(&self, x: &GfElem, sub_degree: usize) -> Result<GfElem> {
        if sub_degree == 0 || !self.k.is_multiple_of(sub_degree) {
            return Err(Error::InvalidArgument(format!(
                "subfield degree {sub_degree} does not divide {}",
                self.k
            )));
        }
        let q = self.p.pow(sub_degree as u32);
        let mut term = x.clone();
        let mut acc = self.zero();
        for _ in 0..self.k / sub_degree {
            acc = self.add(&acc, &term);
            term = self.pow(&term, q);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.inv(&3).unwrap(), 5);
        assert_eq!(f7.reduce(-20), 1);
        for p in [2, 3, 5, 7, 11] {
            assert_eq!(PrimeField::new(p).unwrap().inv(&1).unwrap(), 1);
        }
        assert!(matches!(f7.inv(&0), Err(Error::NonInvertible(_))));
        assert!(matches!(f7.inv(&14), Err(Error::NonInvertible(_))));
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn prime_field_inverse_exhaustive() {
        for p in [2u64, 3, 5, 7, 13, 101] {
            let f = PrimeField::new(p).unwrap();
            for x in 1..p {
                assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), 1);
            }
        }
    }

    #[test]
    fn bigint_reduction_handles_negatives() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.from_bigint(&BigInt::from(-1)), 4);
        assert_eq!(f5.from_bigint(&BigInt::from(-10)), 0);
        assert_eq!(f5.from_bigint(&BigInt::from(12)), 2);
    }

    #[test]
    fn rational_inverse() {
        let q = Rationals;
        let three = q.from_i64(3);
        assert_eq!(q.mul(&three, &q.inv(&three).unwrap()), q.one());
        assert!(q.inv(&q.zero()).is_err());
        assert_eq!(rational_to_string(&q.inv(&q.from_i64(-4)).unwrap()), "-1/4");
    }

    #[test]
    fn default_moduli() {
        let gf8 = GaloisField::new(2, 3, None).unwrap();
        assert_eq!(gf8.modulus(), &[1, 1, 0, 1]);
        let f2 = GaloisField::new(2, 1, None).unwrap();
        assert_eq!(f2.order(), 2);
        let gf27 = GaloisField::new(3, 3, None).unwrap();
        assert_eq!(gf27.order() - 1, 26);
        assert_eq!(gf27.multiplicative_order(gf27.primitive_element()).unwrap(), 26);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(matches!(
            GaloisField::new(2, 2, Some(vec![1, 0, 1])),
            Err(Error::Reducible(_))
        ));
        assert!(GaloisField::new(3, 2, Some(vec![1, 0, 1])).is_ok());
        assert!(GaloisField::new(4, 2, None).is_err());
    }

    #[test]
    fn primitive_elements() {
        let gf8 = GaloisField::new(2, 3, None).unwrap();
        let x = gf8.from_index(2);
        assert_eq!(gf8.primitive_element(), &x);
        assert_eq!(gf8.multiplicative_order(&x).unwrap(), 7);

        let f2 = GaloisField::new(2, 1, None).unwrap();
        assert_eq!(f2.primitive_element(), &f2.one());
        assert_eq!(f2.multiplicative_order(&f2.one()).unwrap(), 1);

        let gf9 = GaloisField::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let x = gf9.from_index(3);
        assert_eq!(gf9.mul(&x, &x), gf9.from_scalar(2));
        assert_eq!(gf9.multiplicative_order(&x).unwrap(), 4);
        let g = gf9.primitive_element();
        assert_ne!(g, &x);
        assert_eq!(gf9.multiplicative_order(g).unwrap(), 8);
    }

    #[test]
    fn traces_in_gf8() {
        let gf8 = GaloisField::new(2, 3, None).unwrap();
        let x = gf8.from_index(2);
        assert_eq!(gf8.trace_to_subfield(&x, 1).unwrap(), gf8.zero());
        assert_eq!(gf8.trace_to_subfield(&gf8.zero(), 1).unwrap(), gf8.zero());
        assert_eq!(gf8.trace_to_subfield(&gf8.one(), 1).unwrap(), gf8.one());
        assert!(gf8.trace_to_subfield(&x, 2).is_err());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
