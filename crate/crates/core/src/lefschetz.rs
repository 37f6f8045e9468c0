//! Strong and weak Lefschetz checks.
//!
//! With the candidate `l` as the last variable `x_n` of a grevlex order,
//! `rank(×x_n^s : (A/I)_i → (A/I)_{i+s})` equals the number of standard
//! monomials `m` of degree `i` with `m·x_n^s` still standard. The checkers
//! here reduce every rank question to that count. [`Quotient`] provides the
//! independent route: it builds the multiplication matrix from normal forms
//! and eliminates.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::coxeter::CoinvariantIdealSpec;
use crate::field::{FieldElement, FieldSpec};
use crate::groebner::{buchberger, GroebnerBasis, GroebnerError, StandardMonomialBasis};
use crate::poly::{LinearSubstitution, Monomial, PolyError, Polynomial, RingContext, TermOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error("the last-variable criterion needs grevlex, ring uses {0}")]
    WrongTermOrder(&'static str),
    #[error("quotient is not Artinian: no pure power of {0} in the initial ideal")]
    NotArtinian(String),
    #[error("candidate Lefschetz element is zero")]
    ZeroCandidate,
    #[error(transparent)]
    Groebner(GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<GroebnerError> for LefschetzError {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::NotArtinian(v) => LefschetzError::NotArtinian(v),
            GroebnerError::Poly(p) => LefschetzError::Poly(p),
            other => LefschetzError::Groebner(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strong,
    Weak,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Strong => "strong",
            Mode::Weak => "weak",
        }
    }
}

/// Which family of maps the strong check enumerates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Bijectivity of `×l^{c-2i}` for `i < c/2` when the Hilbert function
    /// is symmetric; every `(i, s)` otherwise.
    #[default]
    Auto,
    /// Every `(i, s)` with `s ≥ 1` and `i + s ≤ c`.
    Exhaustive,
}

/// A nonzero linear form to test as a Lefschetz element.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateElement {
    form: Polynomial,
    is_last_variable: bool,
}

impl CandidateElement {
    pub fn new(form: Polynomial) -> Result<Self, LefschetzError> {
        if form.is_zero() {
            return Err(LefschetzError::ZeroCandidate);
        }
        form.linear_coefficients()?;
        let n = form.ctx().nvars();
        let is_last_variable = form == Polynomial::var(form.ctx(), n - 1);
        Ok(CandidateElement {
            form,
            is_last_variable,
        })
    }

    /// The last variable of `ctx`.
    pub fn last_variable(ctx: &Arc<RingContext>) -> Self {
        CandidateElement {
            form: Polynomial::var(ctx, ctx.nvars() - 1),
            is_last_variable: true,
        }
    }

    pub fn form(&self) -> &Polynomial {
        &self.form
    }

    pub fn is_last_variable(&self) -> bool {
        self.is_last_variable
    }
}

/// Why a map failed to have full rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A standard monomial of the source whose image lies in the initial
    /// ideal, so the map is not injective.
    NotStandard,
    /// A standard monomial of the target outside the image, so the map is
    /// not surjective.
    Missed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub monomial: String,
}

/// Outcome for `×l^s : (A/I)_i → (A/I)_{i+s}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub i: u32,
    pub s: u32,
    pub pass: bool,
    pub rank: u64,
    /// `min(h_i, h_{i+s})`.
    pub full_rank: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GbSummary {
    pub size: usize,
    pub maxdeg: u32,
    pub pairs_created: usize,
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
}

/// Wall-clock seconds per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Timings {
    pub construction: f64,
    pub substitution: f64,
    pub groebner: f64,
    pub standard_monomials: f64,
    pub degree_checks: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LefschetzReport {
    pub mode: Mode,
    pub verdict: bool,
    /// The candidate as given, in the original variables.
    pub candidate: String,
    /// Variables of the ring the checks ran in; the candidate is the last.
    pub variables: Vec<String>,
    pub hilbert: Vec<u64>,
    pub symmetric: bool,
    pub socle: u32,
    pub dimension: u64,
    pub checks: Vec<DegreeCheck>,
    /// `(i, s)` of the first failing check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<(u32, u32)>,
    pub gb_stats: GbSummary,
    pub timings: Timings,
}

impl LefschetzReport {
    /// The report with all timings zeroed; equal across reruns.
    pub fn without_timings(&self) -> Self {
        LefschetzReport {
            timings: Timings::default(),
            ..self.clone()
        }
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }
}

/// `|{m ∈ S_i : m·x_var^s ∈ S_{i+s}}|`, the rank of `×x_var^s` when `x_var`
/// is the last grevlex variable.
pub fn combinatorial_rank(
    basis: &StandardMonomialBasis,
    var: usize,
    i: u32,
    s: u32,
) -> Result<usize, LefschetzError> {
    let mut count = 0;
    for m in basis.degree(i) {
        let image = m.mul_var(var, s).ok_or(PolyError::ExponentOverflow)?;
        if basis.contains(&image) {
            count += 1;
        }
    }
    Ok(count)
}

fn check_map(
    basis: &StandardMonomialBasis,
    var: usize,
    i: u32,
    s: u32,
) -> Result<DegreeCheck, LefschetzError> {
    let ctx = basis.ctx();
    let source = basis.degree(i);
    let target = basis.degree(i + s);
    let mut rank = 0u64;
    let mut lost = None;
    for m in source {
        let image = m.mul_var(var, s).ok_or(PolyError::ExponentOverflow)?;
        if basis.contains(&image) {
            rank += 1;
        } else if lost.is_none() {
            lost = Some(*m);
        }
    }
    let full_rank = source.len().min(target.len()) as u64;
    let pass = rank == full_rank;
    let witness = if pass {
        None
    } else if source.len() <= target.len() {
        lost.map(|m| Witness {
            kind: WitnessKind::NotStandard,
            monomial: ctx.monomial_to_string(&m),
        })
    } else {
        let mut exps = vec![0u32; ctx.nvars()];
        exps[var] = s;
        let step = Monomial::from_exponents(&exps)?;
        target
            .iter()
            .find(|t| t.div(&step).is_none_or(|q| !basis.contains(&q)))
            .map(|t| Witness {
                kind: WitnessKind::Missed,
                monomial: ctx.monomial_to_string(t),
            })
    };
    Ok(DegreeCheck {
        i,
        s,
        pass,
        rank,
        full_rank,
        witness,
    })
}

/// The `(i, s)` pairs examined for a Hilbert function with socle degree `c`.
fn planned_maps(mode: Mode, strategy: Strategy, symmetric: bool, c: u32) -> Vec<(u32, u32)> {
    match mode {
        Mode::Weak => (0..c).map(|i| (i, 1)).collect(),
        Mode::Strong if symmetric && strategy == Strategy::Auto => (0..c)
            .take_while(|i| 2 * i < c)
            .map(|i| (i, c - 2 * i))
            .collect(),
        Mode::Strong => (0..c)
            .flat_map(|i| (1..=c - i).map(move |s| (i, s)))
            .collect(),
    }
}

/// Runs the degree checks on standard monomials already computed, with the
/// candidate in variable `var`.
pub fn check_standard_monomials(
    basis: &StandardMonomialBasis,
    var: usize,
    mode: Mode,
    strategy: Strategy,
) -> Result<Vec<DegreeCheck>, LefschetzError> {
    let hf = basis.hilbert_function();
    let c = hf.socle_degree().unwrap_or(0);
    planned_maps(mode, strategy, hf.is_symmetric(), c)
        .into_iter()
        .map(|(i, s)| check_map(basis, var, i, s))
        .collect()
}

fn require_grevlex(ctx: &RingContext) -> Result<(), LefschetzError> {
    match ctx.order() {
        TermOrder::Grevlex => Ok(()),
        other => Err(LefschetzError::WrongTermOrder(other.name())),
    }
}

/// Full run on generators whose candidate is already the last variable.
pub fn check_last_variable(
    generators: &[Polynomial],
    ctx: &Arc<RingContext>,
    mode: Mode,
    strategy: Strategy,
) -> Result<LefschetzReport, LefschetzError> {
    require_grevlex(ctx)?;
    let t = Instant::now();
    let gb = buchberger(generators, ctx)?;
    let groebner = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let basis = gb.standard_monomials(None)?;
    let standard_monomials = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let checks = check_standard_monomials(&basis, ctx.nvars() - 1, mode, strategy)?;
    let degree_checks = t.elapsed().as_secs_f64();

    let hf = basis.hilbert_function();
    let stats = gb.stats();
    let first_failure = checks.iter().find(|c| !c.pass).map(|c| (c.i, c.s));
    Ok(LefschetzReport {
        mode,
        verdict: first_failure.is_none(),
        candidate: ctx.vars()[ctx.nvars() - 1].clone(),
        variables: ctx.vars().to_vec(),
        symmetric: hf.is_symmetric(),
        socle: hf.socle_degree().unwrap_or(0),
        dimension: hf.total(),
        hilbert: hf.values,
        checks,
        first_failure,
        gb_stats: GbSummary {
            size: gb.len(),
            maxdeg: gb.max_degree(),
            pairs_created: stats.pairs_created,
            pairs_reduced: stats.pairs_reduced,
            zero_reductions: stats.zero_reductions,
        },
        timings: Timings {
            groebner,
            standard_monomials,
            degree_checks,
            ..Timings::default()
        },
    })
}

/// Strong Lefschetz check for the last variable of a grevlex ring.
pub fn check_slp_last_variable(
    spec: &CoinvariantIdealSpec,
) -> Result<LefschetzReport, LefschetzError> {
    check_last_variable(&spec.generators, &spec.ctx, Mode::Strong, Strategy::Auto)
}

/// Weak Lefschetz check for the last variable of a grevlex ring.
pub fn check_wlp_last_variable(
    spec: &CoinvariantIdealSpec,
) -> Result<LefschetzReport, LefschetzError> {
    check_last_variable(&spec.generators, &spec.ctx, Mode::Weak, Strategy::Auto)
}

fn fresh_name(taken: &[&str], preferred: &str) -> String {
    if !taken.contains(&preferred) {
        return preferred.to_string();
    }
    (0..)
        .map(|k| format!("{preferred}{k}"))
        .find(|n| !taken.contains(&n.as_str()))
        .expect("unbounded")
}

/// A change of variables sending `l` to the last variable of a grevlex ring.
///
/// The new variables are the old ones except the pivot (the last variable
/// with a nonzero coefficient in `l`), followed by `l` itself.
pub fn candidate_substitution(
    candidate: &CandidateElement,
) -> Result<LinearSubstitution, LefschetzError> {
    let l = candidate.form();
    let ctx = l.ctx();
    let k = ctx.field();
    let n = ctx.nvars();
    let coeffs = l.linear_coefficients()?;
    let pivot = coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or(LefschetzError::ZeroCandidate)?;
    let kept: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
    let is_plain_variable =
        coeffs[pivot].is_one() && coeffs.iter().filter(|c| !c.is_zero()).count() == 1;
    let mut names: Vec<String> = kept.iter().map(|&j| ctx.vars()[j].clone()).collect();
    let last = if is_plain_variable {
        ctx.vars()[pivot].clone()
    } else {
        let taken: Vec<&str> = names.iter().map(String::as_str).collect();
        fresh_name(&taken, "l")
    };
    names.push(last);
    let target = RingContext::new(k, &names, TermOrder::Grevlex)?;
    // rows: new variables as linear forms in the old ones
    let mut rows: Vec<Vec<FieldElement>> = kept
        .iter()
        .map(|&j| {
            (0..n)
                .map(|c| if c == j { k.one() } else { k.zero() })
                .collect()
        })
        .collect();
    rows.push(coeffs);
    Ok(LinearSubstitution::new(&target, ctx, rows)?.inverse())
}

/// Lefschetz check of an arbitrary linear form: the generators are moved
/// to a ring where the candidate is the last variable and checked there.
/// The verdict is about `l` in the original ring.
pub fn check_candidate(
    generators: &[Polynomial],
    candidate: &CandidateElement,
    mode: Mode,
    strategy: Strategy,
) -> Result<LefschetzReport, LefschetzError> {
    let ctx = candidate.form().ctx();
    if candidate.is_last_variable() && ctx.order() == TermOrder::Grevlex {
        let mut report = check_last_variable(generators, ctx, mode, strategy)?;
        report.candidate = candidate.form().to_string();
        return Ok(report);
    }
    let t = Instant::now();
    let sub = candidate_substitution(candidate)?;
    let moved = generators
        .iter()
        .map(|g| sub.apply(g))
        .collect::<Result<Vec<_>, _>>()?;
    let substitution = t.elapsed().as_secs_f64();
    let mut report = check_last_variable(&moved, sub.target(), mode, strategy)?;
    report.candidate = candidate.form().to_string();
    report.timings.substitution = substitution;
    Ok(report)
}

/// Strong Lefschetz check of `l` for the ideal generated by `generators`.
pub fn check_slp_candidate(
    generators: &[Polynomial],
    candidate: &CandidateElement,
) -> Result<LefschetzReport, LefschetzError> {
    check_candidate(generators, candidate, Mode::Strong, Strategy::Auto)
}

/// An Artinian quotient `A/I` with its Gröbner basis and monomial basis, for
/// rank computations by linear algebra.
#[derive(Debug, Clone)]
pub struct Quotient {
    gb: GroebnerBasis,
    basis: StandardMonomialBasis,
    index: HashMap<Monomial, usize>,
}

impl Quotient {
    /// Works with any term order.
    pub fn new(generators: &[Polynomial], ctx: &Arc<RingContext>) -> Result<Self, LefschetzError> {
        let gb = buchberger(generators, ctx)?;
        let basis = gb.standard_monomials(None)?;
        let mut index = HashMap::new();
        for d in 0..=basis.socle_degree().unwrap_or(0) {
            for (pos, m) in basis.degree(d).iter().enumerate() {
                index.insert(*m, pos);
            }
        }
        Ok(Quotient { gb, basis, index })
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn basis(&self) -> &StandardMonomialBasis {
        &self.basis
    }

    pub fn field(&self) -> FieldSpec {
        self.gb.ctx().field()
    }

    /// Matrix of `×f` from degree `i` to degree `i + deg f`: one row per
    /// standard monomial of degree `i`, one column per standard monomial of
    /// the target degree.
    pub fn multiplication_matrix(
        &self,
        f: &Polynomial,
        i: u32,
    ) -> Result<Vec<Vec<FieldElement>>, LefschetzError> {
        let k = self.field();
        let e = match f.degree() {
            Some(e) => e,
            None => return Ok(vec![Vec::new(); self.basis.degree(i).len()]),
        };
        let width = self.basis.degree(i + e).len();
        self.basis
            .degree(i)
            .iter()
            .map(|m| {
                let nf = self.gb.normal_form(&f.mul_monomial(m)?)?;
                let mut row = vec![k.zero(); width];
                for (c, t) in nf.terms() {
                    row[self.index[&t]] = c;
                }
                Ok(row)
            })
            .collect()
    }

    /// `rank(×l^s : (A/I)_i → (A/I)_{i+s})` by Gaussian elimination.
    pub fn power_rank(&self, l: &Polynomial, i: u32, s: u32) -> Result<usize, LefschetzError> {
        if self.basis.degree(i).is_empty() || self.basis.degree(i + s).is_empty() {
            return Ok(0);
        }
        let power = l.pow(s)?;
        Ok(matrix_rank(self.multiplication_matrix(&power, i)?))
    }
}

/// Rank of a matrix over a finite field.
pub fn matrix_rank(mut rows: Vec<Vec<FieldElement>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        let pivot: Vec<FieldElement> = rows[rank].iter().map(|&x| x * inv).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col];
            if !f.is_zero() {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = *x - f * y;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// `rank(×l^s : (A/I)_i → (A/I)_{i+s})` computed from normal forms.
pub fn brute_force_rank(
    generators: &[Polynomial],
    ctx: &Arc<RingContext>,
    l: &Polynomial,
    i: u32,
    s: u32,
) -> Result<usize, LefschetzError> {
    Quotient::new(generators, ctx)?.power_rank(l, i, s)
}

/// Strong (or weak) Lefschetz verdict for `l` from ranks of explicit
/// multiplication matrices over every `(i, s)` with `i + s ≤ c`.
pub fn brute_force_verdict(
    quotient: &Quotient,
    l: &Polynomial,
    mode: Mode,
) -> Result<bool, LefschetzError> {
    let c = quotient.basis().socle_degree().unwrap_or(0);
    let maps = planned_maps(mode, Strategy::Exhaustive, false, c);
    for (i, s) in maps {
        let full = quotient
            .basis()
            .degree(i)
            .len()
            .min(quotient.basis().degree(i + s).len());
        if quotient.power_rank(l, i, s)? != full {
            return Ok(false);
        }
    }
    Ok(true)
}
