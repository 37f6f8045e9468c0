//! Exact arithmetic in prime fields `F_p` and in the quadratic extension
//! `F_p[tau]/(tau^2 - tau - 1)`.
//!
//! A [`FieldSpec`] is a small `Copy` context chosen at runtime, so the same
//! binary can repeat a computation under several primes. Elements are stored
//! as canonical residue pairs `a + b*tau` with `a, b` in `[0, p)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised by field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error(
        "tau^2 - tau - 1 has the root {root} modulo {p}; the quadratic extension needs \
         p = 2 or p = +-2 (mod 5), and p = 5 or p = +-1 (mod 5) is rejected"
    )]
    Reducible { p: u32, root: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("prime {0} is too large (must be below 2^31)")]
    PrimeTooLarge(u64),
    #[error("cannot parse field description {0:?}")]
    Parse(String),
}

/// Canonical residue pair `a + b*tau`. Meaningful only together with the
/// [`FieldSpec`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub(crate) struct Residue {
    pub(crate) a: u32,
    pub(crate) b: u32,
}

impl Residue {
    pub(crate) const ZERO: Residue = Residue { a: 0, b: 0 };
    pub(crate) const ONE: Residue = Residue { a: 1, b: 0 };

    #[inline]
    pub(crate) fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }
}

/// A validated field context: `F_p`, or `F_{p^2}` presented by adjoining a
/// root `tau` of `tau^2 - tau - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    extended: bool,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Builds a field context, checking primality and, for the extension,
    /// that `tau^2 - tau - 1` has no root in `F_p`.
    pub fn new(p: u64, extend: bool) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let p = p as u32;
        if extend {
            let pp = p as u64;
            if let Some(root) = (0..pp).find(|&t| (t * t + 2 * pp - t - 1).is_multiple_of(pp)) {
                return Err(FieldError::Reducible {
                    p,
                    root: root as u32,
                });
            }
        }
        Ok(FieldSpec {
            p,
            extended: extend,
        })
    }

    /// `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, false)
    }

    /// `F_p[tau]/(tau^2 - tau - 1)`.
    pub fn golden(p: u64) -> Result<Self, FieldError> {
        Self::new(p, true)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn is_extension(&self) -> bool {
        self.extended
    }

    /// Number of elements, `p` or `p^2`.
    pub fn order(&self) -> u64 {
        let p = self.p as u64;
        if self.extended {
            p * p
        } else {
            p
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(Residue::ZERO)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(Residue::ONE)
    }

    /// The adjoined root `tau`, or `None` over a prime field.
    pub fn tau(&self) -> Option<FieldElement> {
        self.extended.then(|| self.wrap(Residue { a: 0, b: 1 }))
    }

    /// Image of an integer.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.wrap(Residue {
            a: self.reduce_i64(n),
            b: 0,
        })
    }

    /// The element `a + b*tau`. Over a prime field `b` must reduce to zero.
    pub fn element(&self, a: i64, b: i64) -> Result<FieldElement, FieldError> {
        let b = self.reduce_i64(b);
        if b != 0 && !self.extended {
            return Err(FieldError::Parse(format!(
                "tau is not available in {}",
                self
            )));
        }
        Ok(self.wrap(Residue {
            a: self.reduce_i64(a),
            b,
        }))
    }

    /// Enumerates every element of the field in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let bmax = if self.extended { self.p } else { 1 };
        (0..bmax).flat_map(move |b| (0..self.p).map(move |a| self.wrap(Residue { a, b })))
    }

    #[inline]
    pub(crate) fn wrap(&self, r: Residue) -> FieldElement {
        FieldElement {
            field: *self,
            value: r,
        }
    }

    #[inline]
    fn reduce_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub(crate) fn r_add(&self, x: Residue, y: Residue) -> Residue {
        let p = self.p;
        let mut a = x.a + y.a;
        if a >= p {
            a -= p;
        }
        let mut b = x.b + y.b;
        if b >= p {
            b -= p;
        }
        Residue { a, b }
    }

    #[inline]
    pub(crate) fn r_neg(&self, x: Residue) -> Residue {
        let p = self.p;
        Residue {
            a: if x.a == 0 { 0 } else { p - x.a },
            b: if x.b == 0 { 0 } else { p - x.b },
        }
    }

    #[inline]
    pub(crate) fn r_sub(&self, x: Residue, y: Residue) -> Residue {
        self.r_add(x, self.r_neg(y))
    }

    #[inline]
    pub(crate) fn r_mul(&self, x: Residue, y: Residue) -> Residue {
        let p = self.p as u64;
        let (xa, xb, ya, yb) = (x.a as u64, x.b as u64, y.a as u64, y.b as u64);
        if x.b == 0 && y.b == 0 {
            return Residue {
                a: (xa * ya % p) as u32,
                b: 0,
            };
        }
        // (xa + xb t)(ya + yb t) with t^2 = t + 1
        let bd = xb * yb % p;
        let a = (xa * ya + bd) % p;
        let b = ((xa * yb + xb * ya) % p + bd) % p;
        Residue {
            a: a as u32,
            b: b as u32,
        }
    }

    /// `x - c*y`, the update at the heart of every reduction step.
    #[inline]
    pub(crate) fn r_sub_mul(&self, x: Residue, c: Residue, y: Residue) -> Residue {
        self.r_sub(x, self.r_mul(c, y))
    }

    fn r_pow_u32(&self, x: Residue, mut e: u64) -> Residue {
        let mut base = x;
        let mut acc = Residue::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.r_mul(acc, base);
            }
            base = self.r_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn r_inv(&self, x: Residue) -> Result<Residue, FieldError> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.p as u64;
        let inv_p = |n: u64| self.r_pow_u32(Residue { a: n as u32, b: 0 }, p - 2).a as u64;
        if x.b == 0 {
            return Ok(Residue {
                a: inv_p(x.a as u64) as u32,
                b: 0,
            });
        }
        // (a + b t)((a + b) - b t) = a^2 + ab - b^2 in F_p
        let (a, b) = (x.a as u64, x.b as u64);
        let norm = (a * a + a * b + p * p - b * b % p) % p;
        let ninv = inv_p(norm);
        Ok(Residue {
            a: ((a + b) % p * ninv % p) as u32,
            b: ((p - b) % p * ninv % p) as u32,
        })
    }

    /// Symmetric representative of a prime-field residue, in `(-p/2, p/2]`.
    pub(crate) fn signed(&self, r: u32) -> i64 {
        let p = self.p as i64;
        let r = r as i64;
        if r > p / 2 {
            r - p
        } else {
            r
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.extended {
            write!(f, "GF({}^2) tau^2-tau-1", self.p)
        } else {
            write!(f, "GF({})", self.p)
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `GF(p)` and `GF(p^2) tau^2-tau-1` (whitespace-insensitive).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || FieldError::Parse(s.to_string());
        let rest = compact.strip_prefix("GF(").ok_or_else(bad)?;
        let close = rest.find(')').ok_or_else(bad)?;
        let (inside, tail) = (&rest[..close], &rest[close + 1..]);
        let (p_str, extend) = match inside.strip_suffix("^2") {
            Some(p) => (p, true),
            None => (inside, false),
        };
        let p: u64 = p_str.parse().map_err(|_| bad())?;
        match (extend, tail) {
            (true, "tau^2-tau-1") | (false, "") => FieldSpec::new(p, extend),
            _ => Err(bad()),
        }
    }
}

/// An element `a + b*tau` of a [`FieldSpec`], always in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldSpec,
    value: Residue,
}

impl FieldElement {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Canonical residues `(a, b)` of `a + b*tau`.
    pub fn components(&self) -> (u32, u32) {
        (self.value.a, self.value.b)
    }

    pub(crate) fn residue(&self) -> Residue {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value == Residue::ONE
    }

    fn same_field(&self, other: &Self) -> Result<FieldSpec, FieldError> {
        if self.field == other.field {
            Ok(self.field)
        } else {
            Err(FieldError::FieldMismatch(self.field, other.field))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        let k = self.same_field(other)?;
        Ok(k.wrap(k.r_add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        let k = self.same_field(other)?;
        Ok(k.wrap(k.r_sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        let k = self.same_field(other)?;
        Ok(k.wrap(k.r_mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Ok(self.field.wrap(self.field.r_inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.field.wrap(self.field.r_pow_u32(self.value, e))
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("field mismatch")
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("field mismatch")
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("field mismatch")
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        self.field.wrap(self.field.r_neg(self.value))
    }
}

impl fmt::Display for FieldElement {
    /// Symmetric residues: `3`, `-tau`, `2 - 3*tau`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.field.signed(self.value.a);
        let b = self.field.signed(self.value.b);
        let tau_part = |f: &mut fmt::Formatter<'_>, b: i64| match b {
            1 => write!(f, "tau"),
            -1 => write!(f, "-tau"),
            b => write!(f, "{b}*tau"),
        };
        match (a, b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => tau_part(f, b),
            (a, b) if b < 0 => {
                write!(f, "{a} - ")?;
                tau_part(f, -b)
            }
            (a, b) => {
                write!(f, "{a} + ")?;
                tau_part(f, b)
            }
        }
    }
}
