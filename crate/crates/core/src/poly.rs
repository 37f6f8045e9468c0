//! Multivariate polynomials over a [`FieldSpec`], term orders, and invertible
//! linear changes of variables.
//!
//! Monomials are dense exponent vectors of at most [`MAX_VARS`] byte-sized
//! entries. Polynomials keep their terms strictly sorted in descending term
//! order with no zero coefficients, so equality is structural.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec, Residue};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials belong to different rings")]
    ContextMismatch,
    #[error("monomial has {found} variables but the ring has {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("expected a homogeneous linear form")]
    NotLinear,
    #[error("linear substitution is singular")]
    SingularSubstitution,
    #[error("exponent exceeds 255")]
    ExponentOverflow,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Supported term orders. Only `Grevlex` is accepted by the Lefschetz checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TermOrder {
    #[default]
    Grevlex,
    Lex,
}

impl TermOrder {
    pub fn name(&self) -> &'static str {
        match self {
            TermOrder::Grevlex => "grevlex",
            TermOrder::Lex => "lex",
        }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Grevlex => a.deg.cmp(&b.deg).then_with(|| {
                for i in (0..a.n as usize).rev() {
                    if a.exps[i] != b.exps[i] {
                        return b.exps[i].cmp(&a.exps[i]);
                    }
                }
                Ordering::Equal
            }),
            TermOrder::Lex => a.exps.cmp(&b.exps),
        }
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TermOrder {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "grevlex" => Ok(TermOrder::Grevlex),
            "lex" => Ok(TermOrder::Lex),
            other => Err(PolyError::InvalidRing(format!(
                "unknown term order {other:?}"
            ))),
        }
    }
}

/// `K[x_1, ..., x_n]` with variables ordered `x_1 > ... > x_n` and a term order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingContext {
    field: FieldSpec,
    vars: Vec<String>,
    order: TermOrder,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "tau"
}

impl RingContext {
    pub fn new<S: AsRef<str>>(
        field: FieldSpec,
        vars: &[S],
        order: TermOrder,
    ) -> Result<Arc<Self>, PolyError> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(PolyError::InvalidRing(format!(
                "need between 1 and {MAX_VARS} variables, got {}",
                vars.len()
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_identifier(v) {
                return Err(PolyError::InvalidRing(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::InvalidRing(format!("duplicate variable {v:?}")));
            }
        }
        Ok(Arc::new(RingContext { field, vars, order }))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same field and variables under a different term order.
    pub fn with_order(&self, order: TermOrder) -> Arc<Self> {
        Arc::new(RingContext {
            order,
            ..self.clone()
        })
    }

    /// Compares two monomials under this ring's order.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering, PolyError> {
        for m in [a, b] {
            if m.nvars() != self.nvars() {
                return Err(PolyError::ArityMismatch {
                    expected: self.nvars(),
                    found: m.nvars(),
                });
            }
        }
        Ok(self.order.cmp(a, b))
    }

    pub fn monomial_to_string(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, name) in self.vars.iter().enumerate() {
            match m.exponent(i) {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Exponent vector with cached total degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    deg: u16,
    n: u8,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        assert!(n <= MAX_VARS);
        Monomial {
            exps: [0; MAX_VARS],
            deg: 0,
            n: n as u8,
        }
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::InvalidRing(format!(
                "more than {MAX_VARS} variables"
            )));
        }
        let mut m = Self::one(exps.len());
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u8::try_from(e).map_err(|_| PolyError::ExponentOverflow)?;
            m.deg += e as u16;
        }
        Ok(m)
    }

    pub fn nvars(&self) -> usize {
        self.n as usize
    }

    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps[..self.n as usize]
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] = m.exps[i].checked_add(other.exps[i])?;
        }
        m.deg += other.deg;
        Some(m)
    }

    /// Product; panics if an exponent exceeds 255.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] -= other.exps[i];
        }
        m.deg -= other.deg;
        Some(m)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        m.deg = 0;
        for i in 0..MAX_VARS {
            m.exps[i] = m.exps[i].max(other.exps[i]);
            m.deg += m.exps[i] as u16;
        }
        m
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        m.deg = 0;
        for i in 0..MAX_VARS {
            m.exps[i] = m.exps[i].min(other.exps[i]);
            m.deg += m.exps[i] as u16;
        }
        m
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    /// `self * x_i^e`.
    pub fn mul_var(&self, i: usize, e: u32) -> Option<Monomial> {
        let mut m = *self;
        m.exps[i] = u8::try_from(m.exps[i] as u32 + e).ok()?;
        m.deg += e as u16;
        Some(m)
    }
}

/// A polynomial whose terms are strictly sorted in descending term order.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: Arc<RingContext>,
    terms: Vec<(Monomial, Residue)>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

fn same_ctx(a: &Arc<RingContext>, b: &Arc<RingContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Polynomial {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<RingContext>, c: FieldElement) -> Result<Self, PolyError> {
        Self::term(ctx, c, Monomial::one(ctx.nvars()))
    }

    pub fn var(ctx: &Arc<RingContext>, i: usize) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: vec![(Monomial::var(ctx.nvars(), i), Residue::ONE)],
        }
    }

    pub fn term(ctx: &Arc<RingContext>, c: FieldElement, m: Monomial) -> Result<Self, PolyError> {
        if c.field() != ctx.field() {
            return Err(FieldError::FieldMismatch(c.field(), ctx.field()).into());
        }
        if m.nvars() != ctx.nvars() {
            return Err(PolyError::ArityMismatch {
                expected: ctx.nvars(),
                found: m.nvars(),
            });
        }
        let terms = if c.is_zero() {
            vec![]
        } else {
            vec![(m, c.residue())]
        };
        Ok(Polynomial {
            ctx: ctx.clone(),
            terms,
        })
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(
        ctx: &Arc<RingContext>,
        terms: impl IntoIterator<Item = (FieldElement, Monomial)>,
    ) -> Result<Self, PolyError> {
        let mut raw = Vec::new();
        for (c, m) in terms {
            if c.field() != ctx.field() {
                return Err(FieldError::FieldMismatch(c.field(), ctx.field()).into());
            }
            if m.nvars() != ctx.nvars() {
                return Err(PolyError::ArityMismatch {
                    expected: ctx.nvars(),
                    found: m.nvars(),
                });
            }
            raw.push((m, c.residue()));
        }
        Ok(Self::from_raw_unsorted(ctx, raw))
    }

    /// A linear form `sum coeffs[i] * x_i`.
    pub fn linear(ctx: &Arc<RingContext>, coeffs: &[FieldElement]) -> Result<Self, PolyError> {
        if coeffs.len() != ctx.nvars() {
            return Err(PolyError::ArityMismatch {
                expected: ctx.nvars(),
                found: coeffs.len(),
            });
        }
        Self::from_terms(
            ctx,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, Monomial::var(ctx.nvars(), i))),
        )
    }

    pub(crate) fn from_raw_sorted(ctx: &Arc<RingContext>, terms: Vec<(Monomial, Residue)>) -> Self {
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        debug_assert!(terms
            .windows(2)
            .all(|w| ctx.order.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub(crate) fn from_raw_unsorted(
        ctx: &Arc<RingContext>,
        mut raw: Vec<(Monomial, Residue)>,
    ) -> Self {
        let order = ctx.order;
        let k = ctx.field;
        raw.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut terms: Vec<(Monomial, Residue)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == m => last.1 = k.r_add(last.1, c),
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|t| !t.1.is_zero());
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn field(&self) -> FieldSpec {
        self.ctx.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending order.
    pub fn terms(&self) -> impl Iterator<Item = (FieldElement, Monomial)> + '_ {
        let k = self.ctx.field;
        self.terms.iter().map(move |&(m, c)| (k.wrap(c), m))
    }

    pub(crate) fn raw_terms(&self) -> &[(Monomial, Residue)] {
        &self.terms
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.iter().map(|t| &t.0)
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading_coefficient(&self) -> Option<FieldElement> {
        self.terms.first().map(|t| self.ctx.field.wrap(t.1))
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        let order = self.ctx.order;
        let r = self
            .terms
            .binary_search_by(|t| order.cmp(m, &t.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(Residue::ZERO);
        self.ctx.field.wrap(r)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => self.terms.iter().all(|u| u.0.deg == t.0.deg),
        }
    }

    /// Homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial> {
        let mut parts: BTreeMap<u32, Vec<(Monomial, Residue)>> = BTreeMap::new();
        for &(m, c) in &self.terms {
            parts.entry(m.degree()).or_default().push((m, c));
        }
        parts
            .into_iter()
            .map(|(d, terms)| (d, Polynomial::from_raw_sorted(&self.ctx, terms)))
            .collect()
    }

    /// Coefficients of a homogeneous linear form.
    pub fn linear_coefficients(&self) -> Result<Vec<FieldElement>, PolyError> {
        if self.is_zero() || !self.is_homogeneous() || self.terms[0].0.degree() != 1 {
            return Err(PolyError::NotLinear);
        }
        let n = self.ctx.nvars();
        Ok((0..n)
            .map(|i| self.coefficient(&Monomial::var(n, i)))
            .collect())
    }

    fn check_ctx(&self, other: &Polynomial) -> Result<(), PolyError> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ctx(other)?;
        Ok(self.merge(other, Residue::ONE))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ctx(other)?;
        Ok(self.merge(other, self.ctx.field.r_neg(Residue::ONE)))
    }

    /// `self + c * other` by a sorted merge.
    fn merge(&self, other: &Polynomial, c: Residue) -> Polynomial {
        let k = self.ctx.field;
        let order = self.ctx.order;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, k.r_mul(c, b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = k.r_add(a[i].1, k.r_mul(c, b[j].1));
                    if !s.is_zero() {
                        out.push((a[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(m, d)| (m, k.r_mul(c, d))));
        out.retain(|t| !t.1.is_zero());
        Polynomial {
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial {
        let k = self.ctx.field;
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|&(m, c)| (m, k.r_neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Result<Polynomial, PolyError> {
        if c.field() != self.ctx.field {
            return Err(FieldError::FieldMismatch(c.field(), self.ctx.field).into());
        }
        Ok(self.scale_raw(c.residue()))
    }

    pub(crate) fn scale_raw(&self, c: Residue) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        let k = self.ctx.field;
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|&(m, d)| (m, k.r_mul(c, d)))
                .collect(),
        }
    }

    /// Multiplies by a monomial; the order is preserved since term orders are
    /// multiplicative.
    pub fn mul_monomial(&self, m: &Monomial) -> Result<Polynomial, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|&(t, c)| t.checked_mul(m).map(|u| (u, c)))
            .collect::<Option<Vec<_>>>()
            .ok_or(PolyError::ExponentOverflow)?;
        Ok(Polynomial {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    /// `self * l` for a linear form `l`, as one sorted merge per term of `l`.
    fn mul_linear(&self, l: &Polynomial) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::zero(&self.ctx);
        for &(m, c) in &l.terms {
            acc = acc.merge(&self.mul_monomial(&m)?, c);
        }
        Ok(acc)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ctx(other)?;
        let k = self.ctx.field;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(m1, c1) in &self.terms {
            for &(m2, c2) in &other.terms {
                let m = m1.checked_mul(&m2).ok_or(PolyError::ExponentOverflow)?;
                raw.push((m, k.r_mul(c1, c2)));
            }
        }
        Ok(Polynomial::from_raw_unsorted(&self.ctx, raw))
    }

    pub fn pow(&self, mut e: u32) -> Result<Polynomial, PolyError> {
        if self.terms.len() > 1 && self.terms.iter().all(|(m, _)| m.degree() == 1) {
            let mut acc = Polynomial::constant(&self.ctx, self.ctx.field.one())?;
            for _ in 0..e {
                acc = acc.mul_linear(self)?;
            }
            return Ok(acc);
        }
        let mut base = self.clone();
        let mut acc = Polynomial::constant(&self.ctx, self.ctx.field.one())?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, c)) => {
                let inv = self
                    .ctx
                    .field
                    .r_inv(c)
                    .expect("nonzero leading coefficient");
                self.scale_raw(inv)
            }
        }
    }

    /// Re-sorts the terms into another ring with the same field and arity.
    pub fn reinterpret(&self, ctx: &Arc<RingContext>) -> Result<Polynomial, PolyError> {
        if ctx.field != self.ctx.field || ctx.nvars() != self.ctx.nvars() {
            return Err(PolyError::ContextMismatch);
        }
        Ok(Polynomial::from_raw_unsorted(ctx, self.terms.clone()))
    }

    /// Parses the textual grammar: sums of products of integers, `tau`,
    /// variable names and parenthesised sub-expressions, with `^` powers and
    /// division by nonzero constants.
    pub fn parse(ctx: &Arc<RingContext>, src: &str) -> Result<Polynomial, PolyError> {
        let mut p = Parser {
            ctx,
            src: src.as_bytes(),
            pos: 0,
        };
        let f = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(f)
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        self.try_add(rhs).expect("context mismatch")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        self.try_sub(rhs).expect("context mismatch")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        self.try_mul(rhs).expect("context mismatch")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let k = self.ctx.field;
        for (idx, &(m, c)) in self.terms.iter().enumerate() {
            let (a, b) = (k.signed(c.a), k.signed(c.b));
            let compound = a != 0 && b != 0;
            let negative = !compound && (a < 0 || b < 0);
            let magnitude = if compound {
                format!("({})", k.wrap(c))
            } else if negative {
                k.wrap(k.r_neg(c)).to_string()
            } else {
                k.wrap(c).to_string()
            };
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.degree() == 0 {
                f.write_str(&magnitude)?;
            } else {
                if magnitude != "1" {
                    write!(f, "{magnitude}*")?;
                }
                f.write_str(&self.ctx.monomial_to_string(&m))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    ctx: &'a Arc<RingContext>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::zero(self.ctx);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.try_mul(&f)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.factor()?;
                    if f.is_zero() {
                        return Err(FieldError::DivisionByZero.into());
                    }
                    let c = match (f.degree(), f.leading_coefficient()) {
                        (Some(0), Some(c)) => c,
                        _ => {
                            return Err(PolyError::Parse {
                                pos: at,
                                msg: "division only by nonzero constants".into(),
                            })
                        }
                    };
                    acc = acc.scale(c.inv()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn primary(&mut self) -> Result<Polynomial, PolyError> {
        let k = self.ctx.field();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let r = (n % k.characteristic() as u64) as i64;
                Polynomial::constant(self.ctx, k.from_int(r))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "tau" {
                    let t = k.tau().ok_or(PolyError::Parse {
                        pos: start,
                        msg: "tau used over a prime field".into(),
                    })?;
                    return Polynomial::constant(self.ctx, t);
                }
                match self.ctx.var_index(name) {
                    Some(i) => Ok(Polynomial::var(self.ctx, i)),
                    None => Err(PolyError::Parse {
                        pos: start,
                        msg: format!("unknown variable {name:?}"),
                    }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// `sum_f f^e` over homogeneous linear forms.
pub fn power_sum(forms: &[Polynomial], e: u32) -> Result<Polynomial, PolyError> {
    let first = forms.first().ok_or(PolyError::NotLinear)?;
    let mut acc = Polynomial::zero(first.ctx());
    for f in forms {
        f.linear_coefficients()?;
        acc = acc.try_add(&f.pow(e)?)?;
    }
    Ok(acc)
}

/// An invertible change of variables `x_i = sum_j M[i][j] y_j`, taking
/// polynomials in the source ring (variables `x`) to the target ring
/// (variables `y`).
#[derive(Debug, Clone)]
pub struct LinearSubstitution {
    source: Arc<RingContext>,
    target: Arc<RingContext>,
    matrix: Vec<Vec<FieldElement>>,
    inverse: Vec<Vec<FieldElement>>,
}

/// Gauss-Jordan inverse over the field, `None` when singular.
pub(crate) fn invert_matrix(
    k: FieldSpec,
    m: &[Vec<FieldElement>],
) -> Option<Vec<Vec<FieldElement>>> {
    let n = m.len();
    let mut a: Vec<Vec<FieldElement>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { k.one() } else { k.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inv().ok()?;
        for x in a[col].iter_mut() {
            *x = *x * inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x = *x - f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl LinearSubstitution {
    /// `matrix[i]` holds the coefficients of old variable `i` as a linear
    /// form in the target variables.
    pub fn new(
        source: &Arc<RingContext>,
        target: &Arc<RingContext>,
        matrix: Vec<Vec<FieldElement>>,
    ) -> Result<Self, PolyError> {
        let n = source.nvars();
        if target.nvars() != n || source.field() != target.field() {
            return Err(PolyError::ContextMismatch);
        }
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(PolyError::ArityMismatch {
                expected: n,
                found: matrix.len(),
            });
        }
        if matrix.iter().flatten().any(|c| c.field() != source.field()) {
            return Err(PolyError::ContextMismatch);
        }
        let inverse =
            invert_matrix(source.field(), &matrix).ok_or(PolyError::SingularSubstitution)?;
        Ok(LinearSubstitution {
            source: source.clone(),
            target: target.clone(),
            matrix,
            inverse,
        })
    }

    /// Builds the substitution from the images of the old variables.
    pub fn from_images(
        source: &Arc<RingContext>,
        target: &Arc<RingContext>,
        images: &[Polynomial],
    ) -> Result<Self, PolyError> {
        let rows = images
            .iter()
            .map(|f| {
                if !same_ctx(f.ctx(), target) {
                    return Err(PolyError::ContextMismatch);
                }
                f.linear_coefficients()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, rows)
    }

    pub fn identity(ctx: &Arc<RingContext>) -> Self {
        let k = ctx.field();
        let n = ctx.nvars();
        let id: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { k.one() } else { k.zero() })
                    .collect()
            })
            .collect();
        LinearSubstitution {
            source: ctx.clone(),
            target: ctx.clone(),
            matrix: id.clone(),
            inverse: id,
        }
    }

    pub fn source(&self) -> &Arc<RingContext> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingContext> {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<FieldElement>] {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &[Vec<FieldElement>] {
        &self.inverse
    }

    pub fn inverse(&self) -> LinearSubstitution {
        LinearSubstitution {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    /// Image of old variable `i` in the target ring.
    pub fn image_of_var(&self, i: usize) -> Polynomial {
        Polynomial::linear(&self.target, &self.matrix[i]).expect("validated matrix")
    }

    /// `f(x) -> f(M y)`, expanded by Horner's scheme one variable at a time.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, PolyError> {
        if !same_ctx(f.ctx(), &self.source) {
            return Err(PolyError::ContextMismatch);
        }
        let n = self.source.nvars();
        let images: Vec<Polynomial> = (0..n).map(|i| self.image_of_var(i)).collect();
        let mut powers: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
        for (i, img) in images.iter().enumerate() {
            let maxe = f.monomials().map(|m| m.exponent(i)).max().unwrap_or(0);
            let mut pw = vec![Polynomial::constant(
                &self.target,
                self.target.field().one(),
            )?];
            for _ in 0..maxe {
                let next = pw.last().unwrap().try_mul(img)?;
                pw.push(next);
            }
            powers.push(pw);
        }
        self.horner(&f.terms, 0, &powers)
    }

    fn horner(
        &self,
        terms: &[(Monomial, Residue)],
        var: usize,
        powers: &[Vec<Polynomial>],
    ) -> Result<Polynomial, PolyError> {
        let k = self.target.field();
        if var == powers.len() {
            let c = terms.iter().fold(Residue::ZERO, |acc, t| k.r_add(acc, t.1));
            return Polynomial::constant(&self.target, k.wrap(c));
        }
        let mut groups: BTreeMap<u32, Vec<(Monomial, Residue)>> = BTreeMap::new();
        for &(m, c) in terms {
            let e = m.exponent(var);
            let mut rest = m;
            rest.exps[var] = 0;
            rest.deg -= e as u16;
            groups.entry(e).or_default().push((rest, c));
        }
        let mut acc = Polynomial::zero(&self.target);
        for (e, group) in groups {
            let inner = self.horner(&group, var + 1, powers)?;
            acc = acc.try_add(&powers[var][e as usize].try_mul(&inner)?)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> Arc<RingContext> {
        RingContext::new(FieldSpec::golden(13).unwrap(), vars, TermOrder::Grevlex).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    /// Textbook grevlex: compare degrees, then the rightmost nonzero entry of
    /// the exponent difference must be negative for the larger monomial.
    fn grevlex_by_difference(a: &[i32], b: &[i32]) -> Ordering {
        let da: i32 = a.iter().sum();
        let db: i32 = b.iter().sum();
        if da != db {
            return da.cmp(&db);
        }
        let diff: Vec<i32> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        match diff.iter().rev().find(|&&d| d != 0) {
            None => Ordering::Equal,
            Some(&d) if d < 0 => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    #[test]
    fn grevlex_matches_textbook_definition_on_low_degrees() {
        let mut all = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        if a + b + c + d <= 3 {
                            all.push(vec![a, b, c, d]);
                        }
                    }
                }
            }
        }
        for x in &all {
            for y in &all {
                let mx = mono(&x.iter().map(|&e| e as u32).collect::<Vec<_>>());
                let my = mono(&y.iter().map(|&e| e as u32).collect::<Vec<_>>());
                assert_eq!(
                    TermOrder::Grevlex.cmp(&mx, &my),
                    grevlex_by_difference(x, y)
                );
            }
        }
    }

    #[test]
    fn compare_examples() {
        let ctx = ring(&["x1", "x2", "x3", "x4"]);
        let x1x4 = mono(&[1, 0, 0, 1]);
        let x2x3 = mono(&[0, 1, 1, 0]);
        assert_eq!(ctx.compare(&x1x4, &x2x3), Ok(Ordering::Less));
        assert_eq!(
            ctx.compare(&mono(&[0, 0, 1, 0]), &mono(&[0, 0, 0, 1])),
            Ok(Ordering::Greater)
        );
        assert_eq!(
            ctx.compare(&mono(&[0, 0, 0, 2]), &mono(&[1, 0, 0, 0])),
            Ok(Ordering::Greater)
        );
        assert_eq!(
            ctx.compare(&mono(&[1, 0]), &x1x4),
            Err(PolyError::ArityMismatch {
                expected: 4,
                found: 2
            })
        );
    }

    #[test]
    fn lex_differs_from_grevlex() {
        let a = mono(&[1, 0, 0]);
        let b = mono(&[0, 2, 0]);
        assert_eq!(TermOrder::Lex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(TermOrder::Grevlex.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn arithmetic_examples() {
        let ctx = ring(&["x", "y"]);
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
        assert!((&p("x^3 + tau*y") * &p("0")).is_zero());
        assert_eq!(&p("tau*x") * &p("tau*x"), p("(tau + 1)*x^2"));
        assert_eq!((&p("x + y") * &p("x*y")).degree(), Some(3));
        assert!((&p("x + y") * &p("x*y")).is_homogeneous());
    }

    #[test]
    fn context_mismatch() {
        let a = Polynomial::var(&ring(&["x", "y"]), 0);
        let b = Polynomial::var(&ring(&["x", "z"]), 0);
        assert_eq!(a.try_add(&b), Err(PolyError::ContextMismatch));
        assert_eq!(a.try_mul(&b), Err(PolyError::ContextMismatch));
    }

    #[test]
    fn power_sum_examples() {
        let ctx = ring(&["x", "y"]);
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        assert_eq!(power_sum(&[p("x"), p("y")], 2).unwrap(), p("x^2 + y^2"));
        assert_eq!(power_sum(&[p("x + y")], 2).unwrap(), p("x^2 + 2*x*y + y^2"));
        assert_eq!(power_sum(&[p("x^2")], 2), Err(PolyError::NotLinear));
        assert_eq!(power_sum(&[p("x + 1")], 2), Err(PolyError::NotLinear));
    }

    #[test]
    fn display_round_trips() {
        let ctx = ring(&["v1", "v2", "v3", "l"]);
        for s in [
            "v2 - tau^2*v1",
            "-3*v1^2*l + (2 - tau)*v3 - tau*l + 5",
            "(1/tau)*v1 + v2",
            "(v1 + l)^3",
            "0",
            "-1",
        ] {
            let f = Polynomial::parse(&ctx, s).unwrap();
            let printed = f.to_string();
            assert_eq!(
                Polynomial::parse(&ctx, &printed).unwrap(),
                f,
                "{s} -> {printed}"
            );
        }
        assert_eq!(
            Polynomial::parse(&ctx, "v2 - tau^2*v1")
                .unwrap()
                .to_string(),
            "(-1 - tau)*v1 + v2"
        );
        assert_eq!(
            Polynomial::parse(&ctx, "l - v1").unwrap().to_string(),
            "-v1 + l"
        );
    }

    #[test]
    fn parse_errors() {
        let ctx = ring(&["x", "y"]);
        assert!(matches!(
            Polynomial::parse(&ctx, "x + z"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            Polynomial::parse(&ctx, "x / y"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            Polynomial::parse(&ctx, "x +"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(
            Polynomial::parse(&ctx, "(x"),
            Err(PolyError::Parse { .. })
        ));
        let prime =
            RingContext::new(FieldSpec::prime(7).unwrap(), &["x"], TermOrder::Grevlex).unwrap();
        assert!(matches!(
            Polynomial::parse(&prime, "tau*x"),
            Err(PolyError::Parse { .. })
        ));
        assert_eq!(
            Polynomial::parse(&prime, "x/0"),
            Err(PolyError::Field(FieldError::DivisionByZero))
        );
    }

    #[test]
    fn bad_rings_are_rejected() {
        let k = FieldSpec::prime(7).unwrap();
        assert!(RingContext::new(k, &["x", "x"], TermOrder::Grevlex).is_err());
        assert!(RingContext::new(k, &["tau"], TermOrder::Grevlex).is_err());
        assert!(RingContext::new::<&str>(k, &[], TermOrder::Grevlex).is_err());
        assert!(RingContext::new(k, &["1x"], TermOrder::Grevlex).is_err());
    }

    #[test]
    fn substitution_examples() {
        let src = ring(&["x1", "x2", "x3", "x4"]);
        let dst = ring(&["v1", "v2", "v3", "l"]);
        let p = |c: &Arc<RingContext>, s: &str| Polynomial::parse(c, s).unwrap();
        let s = LinearSubstitution::from_images(
            &src,
            &dst,
            &[
                p(&dst, "v1"),
                p(&dst, "v2 - tau*tau*v1"),
                p(&dst, "v3 - tau*tau*v2"),
                p(&dst, "l - v3 - (tau + 1)*v2 - (tau + 1)*v1"),
            ],
        )
        .unwrap();
        assert_eq!(s.apply(&p(&src, "x2")).unwrap(), p(&dst, "v2 - tau^2*v1"));
        let f = p(&src, "x1^3*x4 - tau*x1*x2*x3^2 + 4*x4^4");
        let g = s.apply(&f).unwrap();
        assert_eq!(g.degree(), Some(4));
        assert!(g.is_homogeneous());
        assert_eq!(s.inverse().apply(&g).unwrap(), f);

        let id = LinearSubstitution::identity(&src);
        assert_eq!(id.apply(&f).unwrap(), f);

        let k = src.field();
        let singular = vec![vec![k.one(); 4]; 4];
        assert_eq!(
            LinearSubstitution::new(&src, &dst, singular).unwrap_err(),
            PolyError::SingularSubstitution
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn ctx3() -> Arc<RingContext> {
            ring(&["x", "y", "z"])
        }

        fn monomial3(maxdeg: u32) -> impl Strategy<Value = Monomial> {
            (0..=maxdeg, 0..=maxdeg, 0..=maxdeg).prop_map(|(a, b, c)| mono(&[a, b, c]))
        }

        fn homogeneous(deg: u32) -> impl Strategy<Value = Polynomial> {
            proptest::collection::vec((0i64..13, 0i64..13, 0..=deg, 0..=deg), 1..6).prop_map(
                move |raw| {
                    let ctx = ctx3();
                    let k = ctx.field();
                    let mut terms = Vec::new();
                    for (a, b, e0, e1) in raw {
                        let e0 = e0.min(deg);
                        let e1 = e1.min(deg - e0);
                        terms.push((k.element(a, b).unwrap(), mono(&[e0, e1, deg - e0 - e1])));
                    }
                    Polynomial::from_terms(&ctx, terms).unwrap()
                },
            )
        }

        fn random_substitution() -> impl Strategy<Value = LinearSubstitution> {
            proptest::collection::vec((0i64..13, 0i64..13), 9).prop_filter_map("singular", |raw| {
                let ctx = ctx3();
                let k = ctx.field();
                let m: Vec<Vec<FieldElement>> = raw
                    .chunks(3)
                    .map(|r| r.iter().map(|&(a, b)| k.element(a, b).unwrap()).collect())
                    .collect();
                let dst = ring(&["u", "v", "w"]);
                LinearSubstitution::new(&ctx, &dst, m).ok()
            })
        }

        proptest! {
            #[test]
            fn grevlex_is_multiplicative(a in monomial3(4), b in monomial3(4), m in monomial3(4)) {
                let o = TermOrder::Grevlex;
                prop_assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&m), &b.mul(&m)));
                prop_assert!(o.cmp(&m, &Monomial::one(3)) != Ordering::Less);
            }

            #[test]
            fn leading_monomial_is_multiplicative(f in homogeneous(3), g in homogeneous(2)) {
                prop_assume!(!f.is_zero() && !g.is_zero());
                let fg = &f * &g;
                prop_assert_eq!(
                    fg.leading_monomial().unwrap(),
                    f.leading_monomial().unwrap().mul(&g.leading_monomial().unwrap())
                );
                prop_assert!(fg.is_homogeneous());
                prop_assert_eq!(fg.degree(), Some(5));
            }

            #[test]
            fn substitution_is_a_ring_homomorphism(
                s in random_substitution(), f in homogeneous(3), g in homogeneous(2)
            ) {
                let sf = s.apply(&f).unwrap();
                let sg = s.apply(&g).unwrap();
                prop_assert_eq!(s.apply(&(&f * &g)).unwrap(), &sf * &sg);
                prop_assert_eq!(s.apply(&(&f + &f)).unwrap(), &sf + &sf);
                prop_assert_eq!(s.inverse().apply(&sf).unwrap(), f);
            }

            #[test]
            fn parse_print_round_trip(f in homogeneous(4)) {
                let printed = f.to_string();
                prop_assert_eq!(Polynomial::parse(&ctx3(), &printed).unwrap(), f);
            }
        }
    }
}
