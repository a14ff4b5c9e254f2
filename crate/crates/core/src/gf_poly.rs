//! Arithmetic over a prime field F_b and the polynomial ring F_b[x].
//!
//! Polynomials are stored densely, lowest degree first, with trailing zero
//! coefficients stripped so that equality is structural. The zero polynomial
//! has no coefficients and reports its degree as `None`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};

/// A prime field F_b with b < 256.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    b: u32,
}

impl PrimeField {
    /// Validates primality by trial division.
    pub fn new(b: u32) -> Result<Self> {
        if b < 2 || (2..).take_while(|d| d * d <= b).any(|d| b % d == 0) {
            return Err(Error::NotPrime(b));
        }
        if b > 255 {
            return Err(Error::BaseTooLarge(b));
        }
        Ok(Self { b })
    }

    pub fn binary() -> Self {
        Self { b: 2 }
    }

    #[inline]
    pub fn order(self) -> u32 {
        self.b
    }

    #[inline]
    pub fn add(self, x: u8, y: u8) -> u8 {
        ((x as u32 + y as u32) % self.b) as u8
    }

    #[inline]
    pub fn sub(self, x: u8, y: u8) -> u8 {
        ((x as u32 + self.b - y as u32) % self.b) as u8
    }

    #[inline]
    pub fn neg(self, x: u8) -> u8 {
        ((self.b - x as u32) % self.b) as u8
    }

    #[inline]
    pub fn mul(self, x: u8, y: u8) -> u8 {
        ((x as u32 * y as u32) % self.b) as u8
    }

    /// Multiplicative inverse via Fermat's little theorem. `x` must be nonzero.
    pub fn inv(self, x: u8) -> u8 {
        debug_assert!(x as u32 % self.b != 0, "zero has no inverse");
        let mut acc = 1u32;
        let mut base = x as u32 % self.b;
        let mut e = self.b - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.b;
            }
            base = base * base % self.b;
            e >>= 1;
        }
        acc as u8
    }

    pub fn check_digit(self, d: u32) -> Result<u8> {
        if d < self.b {
            Ok(d as u8)
        } else {
            Err(Error::InvalidDigit { digit: d, base: self.b })
        }
    }

    fn same(self, other: Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BaseMismatch { left: self.b, right: other.b })
        }
    }

    /// b^e as u64, or `None` on overflow.
    pub fn pow(self, e: u32) -> Option<u64> {
        (self.b as u64).checked_pow(e)
    }
}

/// An element of F_b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GfScalar {
    value: u8,
    field: PrimeField,
}

impl GfScalar {
    pub fn new(value: u32, field: PrimeField) -> Result<Self> {
        Ok(Self { value: field.check_digit(value)?, field })
    }

    pub fn value(self) -> u32 {
        self.value as u32
    }

    pub fn field(self) -> PrimeField {
        self.field
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfPoly {
    field: PrimeField,
    coeffs: Vec<u8>,
}

impl GfPoly {
    pub fn zero(field: PrimeField) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self { field, coeffs: vec![1] }
    }

    /// The monomial x^e.
    pub fn monomial(field: PrimeField, e: usize) -> Self {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = 1;
        Self { field, coeffs }
    }

    /// Builds a polynomial from coefficients, lowest degree first.
    pub fn from_coeffs(field: PrimeField, coeffs: &[u32]) -> Result<Self> {
        let coeffs = coeffs
            .iter()
            .map(|&c| field.check_digit(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(field, coeffs))
    }

    pub(crate) fn from_raw(field: PrimeField, mut coeffs: Vec<u8>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    /// The polynomial k(x) = κ₀ + κ₁x + ⋯ whose coefficients are the base-b digits of k.
    pub fn from_index(field: PrimeField, mut k: u64) -> Self {
        let b = field.order() as u64;
        let mut coeffs = Vec::new();
        while k > 0 {
            coeffs.push((k % b) as u8);
            k /= b;
        }
        Self { field, coeffs }
    }

    /// Inverse of [`GfPoly::from_index`]. Saturates at `u64::MAX` for huge degrees.
    pub fn to_index(&self) -> u64 {
        let b = self.field.order() as u64;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc.saturating_mul(b).saturating_add(c as u64))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Degree, with `None` standing for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> GfScalar {
        GfScalar { value: self.coeffs.get(i).copied().unwrap_or(0), field: self.field }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.field.same(other.field)?;
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let x = self.coeffs.get(i).copied().unwrap_or(0);
                let y = other.coeffs.get(i).copied().unwrap_or(0);
                f.add(x, y)
            })
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.field.same(other.field)?;
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let x = self.coeffs.get(i).copied().unwrap_or(0);
                let y = other.coeffs.get(i).copied().unwrap_or(0);
                f.sub(x, y)
            })
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.field.same(other.field)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field));
        }
        let f = self.field;
        let mut out = vec![0u8; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Ok(Self::from_raw(f, out))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Euclidean division: returns (q, r) with self = q·d + r and deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        self.field.same(d.field)?;
        let f = self.field;
        let dd = d.degree().ok_or(Error::ZeroModulus)?;
        let lead_inv = f.inv(d.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![0u8; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let t = rem[top];
            if t == 0 {
                continue;
            }
            let q = f.mul(t, lead_inv);
            quot[top - dd] = q;
            for (i, &c) in d.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(q, c));
            }
        }
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }
}

impl fmt::Debug for GfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfPoly[F_{}]({self})", self.field.order())
    }
}

impl fmt::Display for GfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// (a·c) mod p.
pub fn poly_mulmod(a: &GfPoly, c: &GfPoly, p: &GfPoly) -> Result<GfPoly> {
    a.field.same(c.field)?;
    a.field.same(p.field)?;
    if p.is_zero() {
        return Err(Error::ZeroModulus);
    }
    a.mul(c)?.rem(p)
}

/// Reduces `buf` modulo the monic `divisor` in place and reports whether the
/// remainder is zero. Both are coefficient slices, lowest degree first.
fn divides_monic(field: PrimeField, buf: &mut [u8], divisor: &[u8]) -> bool {
    let dd = divisor.len() - 1;
    for top in (dd..buf.len()).rev() {
        let t = buf[top];
        if t == 0 {
            continue;
        }
        for (i, &c) in divisor.iter().enumerate() {
            let idx = top - dd + i;
            buf[idx] = field.sub(buf[idx], field.mul(t, c));
        }
    }
    buf[..dd].iter().all(|&c| c == 0)
}

/// Writes the base-b digits of `k` into `out` (lowest first).
fn fill_digits(b: u64, mut k: u64, out: &mut [u8]) {
    for slot in out.iter_mut() {
        *slot = (k % b) as u8;
        k /= b;
    }
}

/// Exhaustive trial division by every monic polynomial of degree 1..=deg(p)/2.
pub fn is_irreducible(p: &GfPoly) -> Result<bool> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::ConstantPolynomial),
    };
    let f = p.field;
    let b = f.order() as u64;
    let mut work = vec![0u8; p.coeffs.len()];
    for d in 1..=deg / 2 {
        let count = f
            .pow(d as u32)
            .ok_or_else(|| Error::TooLarge(format!("trial divisors of degree {d}")))?;
        let mut divisor = vec![0u8; d + 1];
        divisor[d] = 1;
        for low in 0..count {
            fill_digits(b, low, &mut divisor[..d]);
            work.copy_from_slice(&p.coeffs);
            if divides_monic(f, &mut work, &divisor) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All monic irreducible polynomials of a fixed degree, in increasing index order.
#[derive(Debug, Clone)]
pub struct ModulusSet {
    field: PrimeField,
    degree: usize,
    members: Vec<GfPoly>,
}

impl ModulusSet {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn members(&self) -> &[GfPoly] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Uniform draw from the members.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GfPoly {
        self.members[rng.gen_range(0..self.members.len())].clone()
    }
}

/// Largest b^m for which moduli are enumerated.
const MAX_ENUMERATION: u64 = 1 << 26;

type ModulusCache = Mutex<HashMap<(u32, usize), Arc<ModulusSet>>>;

fn modulus_cache() -> &'static ModulusCache {
    static CACHE: OnceLock<ModulusCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enumerates every monic irreducible polynomial of degree `m` over F_b.
///
/// The result is cached per (b, m). Candidates are trial-divided by the
/// irreducibles of degree at most m/2, which is equivalent to dividing by all
/// monic polynomials of those degrees.
pub fn enumerate_moduli(field: PrimeField, m: usize) -> Result<Arc<ModulusSet>> {
    if m == 0 {
        return Err(Error::Degree("modulus degree must be at least 1".into()));
    }
    let key = (field.order(), m);
    if let Some(hit) = modulus_cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(hit));
    }
    let count = field
        .pow(m as u32)
        .filter(|&c| c <= MAX_ENUMERATION)
        .ok_or_else(|| {
            Error::TooLarge(format!("enumerating degree-{m} moduli over F_{}", field.order()))
        })?;

    let mut divisors: Vec<Vec<u8>> = Vec::new();
    for d in 1..=m / 2 {
        divisors.extend(enumerate_moduli(field, d)?.members.iter().map(|p| p.coeffs.clone()));
    }

    let b = field.order() as u64;
    let mut cand = vec![0u8; m + 1];
    let mut work = vec![0u8; m + 1];
    let mut members = Vec::new();
    for low in 0..count {
        fill_digits(b, low, &mut cand[..m]);
        cand[m] = 1;
        let reducible = divisors.iter().any(|d| {
            work.copy_from_slice(&cand);
            divides_monic(field, &mut work, d)
        });
        if !reducible {
            members.push(GfPoly { field, coeffs: cand.clone() });
        }
    }
    let set = Arc::new(ModulusSet { field, degree: m, members });
    modulus_cache().lock().unwrap().insert(key, Arc::clone(&set));
    Ok(set)
}

/// Uniform draw from the monic irreducibles of degree `m`.
pub fn sample_modulus<R: Rng + ?Sized>(field: PrimeField, m: usize, rng: &mut R) -> Result<GfPoly> {
    Ok(enumerate_moduli(field, m)?.sample(rng))
}

/// The nonzero polynomials of degree below `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSet {
    field: PrimeField,
    degree_bound: usize,
}

impl GeneratorSet {
    pub fn new(field: PrimeField, degree_bound: usize) -> Result<Self> {
        if degree_bound == 0 {
            return Err(Error::Degree("generator degree bound must be at least 1".into()));
        }
        field
            .pow(degree_bound as u32)
            .ok_or_else(|| Error::TooLarge("generator set size overflows u64".into()))?;
        Ok(Self { field, degree_bound })
    }

    /// b^m − 1.
    pub fn len(&self) -> u64 {
        self.field.pow(self.degree_bound as u32).unwrap() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GfPoly {
        GfPoly::from_index(self.field, rng.gen_range(1..=self.len()))
    }

    pub fn iter(&self) -> impl Iterator<Item = GfPoly> + '_ {
        (1..=self.len()).map(move |k| GfPoly::from_index(self.field, k))
    }
}

/// First `count` coefficients u₁, u₂, … of the Laurent expansion
/// g/p = Σ uᵢ x⁻ⁱ, computed by long division.
pub fn laurent_digits(g: &GfPoly, p: &GfPoly, count: usize) -> Result<Vec<u8>> {
    g.field.same(p.field)?;
    let m = p.degree().ok_or(Error::ZeroModulus)?;
    if g.degree().is_some_and(|d| d >= m) {
        return Err(Error::Degree(format!(
            "numerator degree {} is not below modulus degree {m}",
            g.degree().unwrap()
        )));
    }
    if m == 0 {
        return Ok(vec![0; count]);
    }
    let f = g.field;
    let lead_inv = f.inv(p.coeffs[m]);
    let mut rem = vec![0u8; m];
    rem[..g.coeffs.len()].copy_from_slice(&g.coeffs);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        // rem <- x*rem; its x^m coefficient determines the next digit
        let top = rem[m - 1];
        rem.rotate_right(1);
        rem[0] = 0;
        let u = f.mul(top, lead_inv);
        if u != 0 {
            for (r, &c) in rem.iter_mut().zip(&p.coeffs[..m]) {
                *r = f.sub(*r, f.mul(u, c));
            }
        }
        out.push(u);
    }
    Ok(out)
}
