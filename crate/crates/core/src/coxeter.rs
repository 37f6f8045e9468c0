//! Coinvariant ideals: the H4 ideal in the coordinates that make the
//! candidate Lefschetz element the last variable, plus the small families
//! (type A, monomial complete intersections) used as desk-scale checks.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::poly::{
    power_sum, LinearSubstitution, Monomial, PolyError, Polynomial, RingContext, TermOrder,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("H4 needs the quadratic extension by tau, got {0}")]
    NeedsGoldenField(FieldSpec),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Positive roots of H4 as linear forms in `x1..x4`, one representative per
/// pair `{r, -r}`.
pub const H4_POSITIVE_ROOTS: [&str; 60] = [
    "2*x1",
    "2*x2",
    "2*x3",
    "2*x4",
    "x1+x2+x3+x4",
    "x1+x2+x3-x4",
    "x1+x2-x3+x4",
    "x1+x2-x3-x4",
    "x1-x2+x3+x4",
    "x1-x2+x3-x4",
    "x1-x2-x3+x4",
    "x1-x2-x3-x4",
    "tau*x1+(1/tau)*x2+x3",
    "tau*x1+(1/tau)*x2-x3",
    "tau*x1-(1/tau)*x2+x3",
    "tau*x1-(1/tau)*x2-x3",
    "tau*x1+(1/tau)*x3+x4",
    "tau*x1+(1/tau)*x3-x4",
    "tau*x1-(1/tau)*x3+x4",
    "tau*x1-(1/tau)*x3-x4",
    "tau*x1+(1/tau)*x4+x2",
    "tau*x1+(1/tau)*x4-x2",
    "tau*x1-(1/tau)*x4+x2",
    "tau*x1-(1/tau)*x4-x2",
    "tau*x2+(1/tau)*x4+x3",
    "tau*x2+(1/tau)*x4-x3",
    "tau*x2-(1/tau)*x4+x3",
    "tau*x2-(1/tau)*x4-x3",
    "(1/tau)*x1+x2+tau*x3",
    "(1/tau)*x1+x2-tau*x3",
    "(1/tau)*x1-x2+tau*x3",
    "(1/tau)*x1-x2-tau*x3",
    "(1/tau)*x1+x3+tau*x4",
    "(1/tau)*x1+x3-tau*x4",
    "(1/tau)*x1-x3+tau*x4",
    "(1/tau)*x1-x3-tau*x4",
    "(1/tau)*x1+x4+tau*x2",
    "(1/tau)*x1+x4-tau*x2",
    "(1/tau)*x1-x4+tau*x2",
    "(1/tau)*x1-x4-tau*x2",
    "(1/tau)*x2+x4+tau*x3",
    "(1/tau)*x2+x4-tau*x3",
    "(1/tau)*x2-x4+tau*x3",
    "(1/tau)*x2-x4-tau*x3",
    "x1+tau*x2+(1/tau)*x3",
    "x1+tau*x2-(1/tau)*x3",
    "x1-tau*x2+(1/tau)*x3",
    "x1-tau*x2-(1/tau)*x3",
    "x1+tau*x3+(1/tau)*x4",
    "x1+tau*x3-(1/tau)*x4",
    "x1-tau*x3+(1/tau)*x4",
    "x1-tau*x3-(1/tau)*x4",
    "x1+tau*x4+(1/tau)*x2",
    "x1+tau*x4-(1/tau)*x2",
    "x1-tau*x4+(1/tau)*x2",
    "x1-tau*x4-(1/tau)*x2",
    "x2+tau*x4+(1/tau)*x3",
    "x2+tau*x4-(1/tau)*x3",
    "x2-tau*x4+(1/tau)*x3",
    "x2-tau*x4-(1/tau)*x3",
];

/// Degrees of the fundamental invariants `I_2, I_12, I_20, I_30`.
pub const H4_DEGREES: [u32; 4] = [2, 12, 20, 30];

/// The basis `nu_1..nu_4` of linear forms in `x1..x4`.
const H4_NU: [&str; 4] = [
    "x1",
    "tau^2*x1 + x2",
    "tau^4*x1 + tau^2*x2 + x3",
    "(tau^3 + tau)*x1 + tau*x2 + x4",
];

/// `x1..x4` written in the variables `v1, v2, v3, l`, where `l` stands for
/// `lambda = nu_1 + nu_2 + nu_3 + nu_4`.
const H4_X_IN_V: [&str; 4] = [
    "v1",
    "v2 - tau*tau*v1",
    "v3 - tau*tau*v2",
    "(l - v1 - v2 - v3) - tau*v2 - tau*v1",
];

/// Linear forms of a root system, as polynomials of degree one.
#[derive(Debug, Clone)]
pub struct RootList {
    ctx: Arc<RingContext>,
    roots: Vec<Polynomial>,
}

impl RootList {
    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn roots(&self) -> &[Polynomial] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// A homogeneous ideal together with the element whose Lefschetz property
/// is under test.
#[derive(Debug, Clone)]
pub struct CoinvariantIdealSpec {
    pub name: String,
    pub ctx: Arc<RingContext>,
    pub generators: Vec<Polynomial>,
    /// Degree-one candidate; the last variable unless stated otherwise.
    pub candidate: Polynomial,
}

impl CoinvariantIdealSpec {
    pub fn new(
        name: impl Into<String>,
        ctx: Arc<RingContext>,
        generators: Vec<Polynomial>,
    ) -> Self {
        let candidate = Polynomial::var(&ctx, ctx.nvars() - 1);
        CoinvariantIdealSpec {
            name: name.into(),
            ctx,
            generators,
            candidate,
        }
    }

    /// True when the candidate is exactly the last variable.
    pub fn candidate_is_last_variable(&self) -> bool {
        self.candidate == Polynomial::var(&self.ctx, self.ctx.nvars() - 1)
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators
            .iter()
            .filter_map(Polynomial::degree)
            .collect()
    }
}

fn golden_only(field: FieldSpec) -> Result<(), CoxeterError> {
    if field.is_extension() {
        Ok(())
    } else {
        Err(CoxeterError::NeedsGoldenField(field))
    }
}

fn x_ring(field: FieldSpec, n: usize) -> Result<Arc<RingContext>, CoxeterError> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    Ok(RingContext::new(field, &names, TermOrder::Grevlex)?)
}

fn parse_all(ctx: &Arc<RingContext>, src: &[&str]) -> Result<Vec<Polynomial>, CoxeterError> {
    src.iter()
        .map(|s| Polynomial::parse(ctx, s).map_err(CoxeterError::from))
        .collect()
}

/// The 60 positive roots in `x1 > x2 > x3 > x4`, with `1/tau` normalized to
/// `tau - 1`.
pub fn h4_positive_roots(field: FieldSpec) -> Result<RootList, CoxeterError> {
    golden_only(field)?;
    let ctx = x_ring(field, 4)?;
    let roots = parse_all(&ctx, &H4_POSITIVE_ROOTS)?;
    Ok(RootList { ctx, roots })
}

/// `nu_1..nu_4` in the natural coordinates.
pub fn h4_nu_basis(field: FieldSpec) -> Result<Vec<Polynomial>, CoxeterError> {
    golden_only(field)?;
    parse_all(&x_ring(field, 4)?, &H4_NU)
}

/// The candidate `lambda = nu_1 + nu_2 + nu_3 + nu_4` in the natural
/// coordinates.
pub fn h4_lambda(field: FieldSpec) -> Result<Polynomial, CoxeterError> {
    let nu = h4_nu_basis(field)?;
    Ok(nu.iter().skip(1).fold(nu[0].clone(), |acc, f| &acc + f))
}

/// The change of variables from `x1..x4` to `v1, v2, v3, l` taking
/// `(nu_1, nu_2, nu_3, lambda)` to `(v1, v2, v3, l)`.
pub fn h4_substitution(field: FieldSpec) -> Result<LinearSubstitution, CoxeterError> {
    golden_only(field)?;
    let source = x_ring(field, 4)?;
    let target = RingContext::new(field, &["v1", "v2", "v3", "l"], TermOrder::Grevlex)?;
    let images = parse_all(&target, &H4_X_IN_V)?;
    Ok(LinearSubstitution::from_images(&source, &target, &images)?)
}

fn h4_invariants(roots: &[Polynomial]) -> Result<Vec<Polynomial>, CoxeterError> {
    H4_DEGREES
        .iter()
        .map(|&d| power_sum(roots, d).map_err(CoxeterError::from))
        .collect()
}

/// The coinvariant ideal `(I_2, I_12, I_20, I_30)` in the natural
/// coordinates `x1..x4`. The candidate is left as `x4`; pair it with
/// [`h4_lambda`] to test the element used for the certification.
pub fn h4_natural_ideal(field: FieldSpec) -> Result<CoinvariantIdealSpec, CoxeterError> {
    let roots = h4_positive_roots(field)?;
    let gens = h4_invariants(roots.roots())?;
    Ok(CoinvariantIdealSpec::new("h4-natural", roots.ctx, gens))
}

/// The coinvariant ideal in `v1 > v2 > v3 > l` (grevlex). The invariants are
/// power sums of the substituted roots, which equals substituting into the
/// power sums since substitution is a ring homomorphism.
pub fn h4_coinvariant_ideal(field: FieldSpec) -> Result<CoinvariantIdealSpec, CoxeterError> {
    let roots = h4_positive_roots(field)?;
    let s = h4_substitution(field)?;
    let moved = roots
        .roots()
        .iter()
        .map(|r| s.apply(r).map_err(CoxeterError::from))
        .collect::<Result<Vec<_>, _>>()?;
    let gens = h4_invariants(&moved)?;
    Ok(CoinvariantIdealSpec::new("h4", s.target().clone(), gens))
}

/// Elementary symmetric polynomials `e_1..e_n` in `x1..xn`; the quotient is
/// the coinvariant ring of the symmetric group, of dimension `n!`.
pub fn type_a_coinvariant_ideal(
    n: usize,
    field: FieldSpec,
) -> Result<CoinvariantIdealSpec, CoxeterError> {
    if n < 2 {
        return Err(CoxeterError::InvalidParameters(format!(
            "type A needs n >= 2, got {n}"
        )));
    }
    let ctx = x_ring(field, n)?;
    let k = field;
    // e_j via the recurrence on the generating product prod (1 + x_i t)
    let mut e: Vec<Polynomial> = vec![Polynomial::constant(&ctx, k.one())?];
    for i in 0..n {
        let xi = Polynomial::var(&ctx, i);
        let mut next = e.clone();
        next.push(Polynomial::zero(&ctx));
        for j in 1..next.len() {
            next[j] = &next[j] + &(&e[j - 1] * &xi);
        }
        e = next;
    }
    Ok(CoinvariantIdealSpec::new(
        format!("a{n}"),
        ctx,
        e.into_iter().skip(1).collect(),
    ))
}

/// `<x1^a1, ..., xn^an>`.
pub fn monomial_ci_ideal(
    exponents: &[u32],
    field: FieldSpec,
) -> Result<CoinvariantIdealSpec, CoxeterError> {
    if exponents.is_empty() || exponents.contains(&0) {
        return Err(CoxeterError::InvalidParameters(
            "complete intersection exponents must be positive".into(),
        ));
    }
    let n = exponents.len();
    let ctx = x_ring(field, n)?;
    let gens = exponents
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut e = vec![0u32; n];
            e[i] = a;
            Polynomial::term(&ctx, field.one(), Monomial::from_exponents(&e)?)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let name = format!(
        "ci:{}",
        exponents
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(CoinvariantIdealSpec::new(name, ctx, gens))
}
