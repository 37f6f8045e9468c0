//! Reduced Gröbner bases of homogeneous ideals, normal forms, initial ideals,
//! standard monomials and Hilbert functions.
//!
//! Buchberger's algorithm runs degree by degree using the normal selection
//! strategy. Pairs are pruned with the Gebauer–Möller update, which applies
//! the product and chain criteria. Inside one degree every polynomial is
//! reduced in a dense coefficient array indexed by the rank of each monomial
//! among the monomials of that degree, so a reduction step is a handful of
//! table lookups per term.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::field::Residue;
use crate::poly::{Monomial, PolyError, Polynomial, RingContext, TermOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("generator {0} is not homogeneous")]
    NonHomogeneousInput(usize),
    #[error("polynomials belong to different rings")]
    ContextMismatch,
    #[error("quotient is not Artinian: no pure power of {0} in the initial ideal")]
    NotArtinian(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

const NONE: u32 = u32::MAX;

/// Ranks monomials of a fixed degree in descending term order.
#[derive(Debug, Clone)]
pub(crate) struct DegreeIndexer {
    n: usize,
    order: TermOrder,
    /// `counts[k][d]`: number of monomials of degree `d` in `k` variables.
    counts: Vec<Vec<usize>>,
    lists: Vec<Vec<Monomial>>,
}

impl DegreeIndexer {
    pub(crate) fn new(n: usize, order: TermOrder) -> Self {
        let mut counts = vec![vec![1usize]; n + 1];
        counts[0][0] = 1;
        DegreeIndexer {
            n,
            order,
            counts,
            lists: Vec::new(),
        }
    }

    fn ensure_counts(&mut self, d: usize) {
        while self.counts[0].len() <= d {
            let t = self.counts[0].len();
            self.counts[0].push(0);
            for k in 1..=self.n {
                let v = self.counts[k][t - 1] + self.counts[k - 1][t];
                self.counts[k].push(v);
            }
        }
    }

    /// Makes counts and monomial lists available up to degree `d`.
    pub(crate) fn ensure(&mut self, d: usize) {
        self.ensure_counts(d);
        while self.lists.len() <= d {
            let deg = self.lists.len();
            let mut all = Vec::with_capacity(self.len(deg));
            let mut exps = vec![0u32; self.n];
            compositions(&mut exps, 0, deg as u32, &mut all);
            let order = self.order;
            all.sort_by(|a, b| order.cmp(b, a));
            debug_assert!(all.iter().enumerate().all(|(i, m)| self.rank(m) == i));
            self.lists.push(all);
        }
    }

    #[inline]
    fn count(&self, k: usize, d: usize) -> usize {
        self.counts[k][d]
    }

    #[inline]
    pub(crate) fn len(&self, d: usize) -> usize {
        self.counts[self.n][d]
    }

    #[inline]
    pub(crate) fn rank(&self, m: &Monomial) -> usize {
        let e = m.exponents();
        let mut d = m.degree() as usize;
        let mut r = 0;
        match self.order {
            TermOrder::Grevlex => {
                for k in (2..=self.n).rev() {
                    let x = e[k - 1] as usize;
                    r += self.count(k, d) - self.count(k, d - x);
                    d -= x;
                }
            }
            TermOrder::Lex => {
                for (v, &x) in e.iter().enumerate().take(self.n.saturating_sub(1)) {
                    let x = x as usize;
                    if d > x {
                        r += self.count(self.n - v, d - x - 1);
                    }
                    d -= x;
                }
            }
        }
        r
    }

    pub(crate) fn monomials(&self, d: usize) -> &[Monomial] {
        &self.lists[d]
    }
}

fn compositions(exps: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Monomial>) {
    if i + 1 == exps.len() {
        exps[i] = left;
        out.push(Monomial::from_exponents(exps).expect("degree fits"));
        return;
    }
    for e in 0..=left {
        exps[i] = e;
        compositions(exps, i + 1, left - e, out);
    }
}

/// All monomials of degree `d` in `n` variables, descending in `order`.
pub fn monomials_of_degree(n: usize, d: u32, order: TermOrder) -> Vec<Monomial> {
    let mut idx = DegreeIndexer::new(n, order);
    idx.ensure(d as usize);
    idx.lists.swap_remove(d as usize)
}

/// A monomial ideal given by its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Minimalizes the given generators; the result is sorted ascending in
    /// grevlex so equal ideals compare equal.
    pub fn new(nvars: usize, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        all.sort_by(|a, b| TermOrder::Grevlex.cmp(a, b));
        all.dedup();
        let mut minimal: Vec<Monomial> = Vec::with_capacity(all.len());
        for m in all {
            if !minimal.iter().any(|g| g.divides(&m)) {
                minimal.push(m);
            }
        }
        MonomialIdeal {
            nvars,
            generators: minimal,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }

    /// `J : m = { u : u*m in J }`.
    pub fn colon(&self, m: &Monomial) -> MonomialIdeal {
        MonomialIdeal::new(
            self.nvars,
            self.generators
                .iter()
                .map(|g| g.div(&g.gcd(m)).expect("gcd divides")),
        )
    }

    /// Smallest `e` with `x_i^e` in the ideal, for each variable.
    pub fn pure_powers(&self) -> Vec<Option<u32>> {
        (0..self.nvars)
            .map(|i| {
                self.generators
                    .iter()
                    .filter(|g| g.degree() == g.exponent(i))
                    .map(|g| g.degree())
                    .min()
            })
            .collect()
    }

    pub fn is_artinian(&self) -> bool {
        self.pure_powers().iter().all(Option::is_some)
    }
}

/// Per-degree lists of standard monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardMonomialBasis {
    ctx: Arc<RingContext>,
    by_degree: Vec<Vec<Monomial>>,
    truncated: bool,
}

impl StandardMonomialBasis {
    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    /// `S_i`, sorted descending in the term order; empty past the socle.
    pub fn degree(&self, i: u32) -> &[Monomial] {
        self.by_degree
            .get(i as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Largest degree with a standard monomial.
    pub fn socle_degree(&self) -> Option<u32> {
        self.by_degree
            .iter()
            .rposition(|s| !s.is_empty())
            .map(|d| d as u32)
    }

    pub fn total(&self) -> usize {
        self.by_degree.iter().map(Vec::len).sum()
    }

    /// True when enumeration stopped at a caller-supplied degree bound.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        let order = self.ctx.order();
        self.by_degree
            .get(m.degree() as usize)
            .is_some_and(|s| s.binary_search_by(|x| order.cmp(m, x)).is_ok())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.by_degree.iter().flatten()
    }

    pub fn hilbert_function(&self) -> HilbertFunction {
        let values: Vec<u64> = match self.socle_degree() {
            Some(c) => self.by_degree[..=c as usize]
                .iter()
                .map(|s| s.len() as u64)
                .collect(),
            None => Vec::new(),
        };
        HilbertFunction { values }
    }
}

/// `h_i = dim (A/I)_i` for `i = 0..=c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertFunction {
    pub values: Vec<u64>,
}

impl HilbertFunction {
    pub fn socle_degree(&self) -> Option<u32> {
        self.values.len().checked_sub(1).map(|c| c as u32)
    }

    pub fn is_symmetric(&self) -> bool {
        let v = &self.values;
        v.iter().eq(v.iter().rev())
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }
}

/// Enumerates standard monomials of `A/J` degree by degree. A monomial of
/// degree `d` is standard exactly when all its degree `d-1` divisors are
/// standard and it is not itself a minimal generator.
pub fn standard_monomials(
    ideal: &MonomialIdeal,
    ctx: &Arc<RingContext>,
    max_degree: Option<u32>,
) -> Result<StandardMonomialBasis, GroebnerError> {
    let n = ctx.nvars();
    if ideal.nvars() != n {
        return Err(GroebnerError::ContextMismatch);
    }
    let powers = ideal.pure_powers();
    if max_degree.is_none() {
        if let Some(i) = powers.iter().position(Option::is_none) {
            return Err(GroebnerError::NotArtinian(ctx.vars()[i].clone()));
        }
    }
    let gens: HashSet<Monomial> = ideal.generators().iter().copied().collect();
    let order = ctx.order();
    let mut by_degree: Vec<Vec<Monomial>> = Vec::new();
    let one = Monomial::one(n);
    let mut prev: HashSet<Monomial> = HashSet::new();
    if !gens.contains(&one) {
        by_degree.push(vec![one]);
        prev.insert(one);
    }
    let mut truncated = false;
    let mut d = 1u32;
    while !prev.is_empty() {
        if max_degree.is_some_and(|cap| d > cap) {
            truncated = true;
            break;
        }
        let mut cur: HashSet<Monomial> = HashSet::new();
        for m in &prev {
            for i in 0..n {
                let u = m.mul_var(i, 1).ok_or(PolyError::ExponentOverflow)?;
                if cur.contains(&u) || gens.contains(&u) {
                    continue;
                }
                let all_standard = (0..n).all(|j| {
                    u.exponent(j) == 0
                        || prev.contains(&u.div(&Monomial::var(n, j)).expect("divides"))
                });
                if all_standard {
                    cur.insert(u);
                }
            }
        }
        let mut list: Vec<Monomial> = cur.iter().copied().collect();
        list.sort_by(|a, b| order.cmp(b, a));
        if !list.is_empty() {
            by_degree.push(list);
        }
        prev = cur;
        d += 1;
    }
    Ok(StandardMonomialBasis {
        ctx: ctx.clone(),
        by_degree,
        truncated,
    })
}

/// Options for [`buchberger_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuchbergerOptions {
    /// Skip all work above this degree. The result is then a Gröbner basis
    /// only up to that degree.
    pub degree_cap: Option<u32>,
}

/// Counters collected while running Buchberger's algorithm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuchbergerStats {
    pub pairs_created: usize,
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
}

#[derive(Debug, Clone)]
struct Element {
    lm: Monomial,
    /// Terms below the (unit) leading term, descending.
    tail: Vec<(Monomial, Residue)>,
}

#[derive(Debug, Clone, Copy)]
struct Pair {
    i: u32,
    j: u32,
    lcm: Monomial,
}

/// A reduced Gröbner basis of a homogeneous ideal.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ctx: Arc<RingContext>,
    elements: Vec<Polynomial>,
    reduced: bool,
    truncated_at: Option<u32>,
    stats: BuchbergerStats,
    /// Divisor tables per degree, indexing into `elements`.
    tables: Vec<Vec<u32>>,
    indexer: DegreeIndexer,
}

/// Reduced Gröbner basis of the ideal generated by `generators`.
pub fn buchberger(
    generators: &[Polynomial],
    ctx: &Arc<RingContext>,
) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_with(generators, ctx, BuchbergerOptions::default())
}

pub fn buchberger_with(
    generators: &[Polynomial],
    ctx: &Arc<RingContext>,
    options: BuchbergerOptions,
) -> Result<GroebnerBasis, GroebnerError> {
    let mut gens: Vec<(u32, Polynomial)> = Vec::new();
    for (idx, g) in generators.iter().enumerate() {
        if g.ctx() != ctx {
            return Err(GroebnerError::ContextMismatch);
        }
        if !g.is_homogeneous() {
            return Err(GroebnerError::NonHomogeneousInput(idx));
        }
        if let Some(d) = g.degree() {
            gens.push((d, g.reinterpret(ctx)?));
        }
    }
    gens.sort_by_key(|(d, _)| *d);
    let mut engine = Engine {
        ctx: ctx.clone(),
        indexer: DegreeIndexer::new(ctx.nvars(), ctx.order()),
        elements: Vec::new(),
        pairs: Vec::new(),
        tables: Vec::new(),
        stats: BuchbergerStats::default(),
    };
    let truncated_at = engine.run(gens, options)?;
    Ok(engine.finish(truncated_at))
}

struct Engine {
    ctx: Arc<RingContext>,
    indexer: DegreeIndexer,
    elements: Vec<Element>,
    pairs: Vec<Pair>,
    tables: Vec<Vec<u32>>,
    stats: BuchbergerStats,
}

impl Engine {
    fn run(
        &mut self,
        gens: Vec<(u32, Polynomial)>,
        options: BuchbergerOptions,
    ) -> Result<Option<u32>, GroebnerError> {
        let mut gens = gens.into_iter().peekable();
        let mut d: u32 = 0;
        self.build_table(0);
        loop {
            let next_gen = gens.peek().map(|g| g.0);
            let next_pair = self.pairs.iter().map(|p| p.lcm.degree()).min();
            let next = match (next_gen, next_pair) {
                (None, None) => return Ok(None),
                (a, b) => a.into_iter().chain(b).min().expect("one is some"),
            };
            if options.degree_cap.is_some_and(|cap| next > cap) {
                return Ok(options.degree_cap);
            }
            if next > u8::MAX as u32 {
                return Err(PolyError::ExponentOverflow.into());
            }
            // tables for every degree up to `next`
            while d < next {
                d += 1;
                self.build_table(d as usize);
            }
            let first_new = self.elements.len();
            while let Some((_, g)) = gens.next_if(|g| g.0 == d) {
                let mut acc = vec![Residue::ZERO; self.indexer.len(d as usize)];
                for &(m, c) in g.raw_terms() {
                    acc[self.indexer.rank(&m)] = c;
                }
                let start = self.indexer.rank(&g.leading_monomial().expect("nonzero"));
                self.reduce_and_insert(acc, start, d);
            }
            while let Some(pos) = self.next_pair(d) {
                let pair = self.pairs.swap_remove(pos);
                self.stats.pairs_reduced += 1;
                let acc = self.s_polynomial_dense(&pair);
                let start = self.indexer.rank(&pair.lcm) + 1;
                self.reduce_and_insert(acc, start, d);
            }
            self.back_substitute(first_new, d);
            if self.tables[d as usize].iter().all(|&t| t != NONE) {
                // every monomial of degree d is a leading monomial multiple, so
                // every remaining S-polynomial and generator reduces to zero
                self.pairs.clear();
                return Ok(None);
            }
        }
    }

    fn next_pair(&self, d: u32) -> Option<usize> {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.lcm.degree() == d)
            .min_by_key(|(_, p)| (p.i, p.j))
            .map(|(pos, _)| pos)
    }

    fn build_table(&mut self, d: usize) {
        self.indexer.ensure(d);
        let n = self.ctx.nvars();
        let mut table = vec![NONE; self.indexer.len(d)];
        if d > 0 {
            let prev = &self.tables[d - 1];
            for (idx, m) in self.indexer.monomials(d).iter().enumerate() {
                for i in 0..n {
                    if m.exponent(i) > 0 {
                        let q = m.div(&Monomial::var(n, i)).expect("divides");
                        let g = prev[self.indexer.rank(&q)];
                        if g != NONE {
                            table[idx] = g;
                            break;
                        }
                    }
                }
            }
        }
        debug_assert_eq!(self.tables.len(), d);
        self.tables.push(table);
    }

    fn s_polynomial_dense(&self, pair: &Pair) -> Vec<Residue> {
        let d = pair.lcm.degree() as usize;
        let k = self.ctx.field();
        let mut acc = vec![Residue::ZERO; self.indexer.len(d)];
        let gi = &self.elements[pair.i as usize];
        let gj = &self.elements[pair.j as usize];
        let mi = pair.lcm.div(&gi.lm).expect("lcm");
        let mj = pair.lcm.div(&gj.lm).expect("lcm");
        for &(t, c) in &gi.tail {
            acc[self.indexer.rank(&t.mul(&mi))] = c;
        }
        for &(t, c) in &gj.tail {
            let r = self.indexer.rank(&t.mul(&mj));
            acc[r] = k.r_sub(acc[r], c);
        }
        acc
    }

    /// Fully reduces `acc` from index `start` on; returns the remainder terms.
    fn reduce_dense(
        &self,
        acc: &mut [Residue],
        start: usize,
        d: usize,
    ) -> Vec<(Monomial, Residue)> {
        let k = self.ctx.field();
        let table = &self.tables[d];
        let monos = self.indexer.monomials(d);
        let mut out = Vec::new();
        for idx in start..acc.len() {
            let c = acc[idx];
            if c.is_zero() {
                continue;
            }
            let g = table[idx];
            if g == NONE {
                out.push((monos[idx], c));
                continue;
            }
            let el = &self.elements[g as usize];
            let mult = monos[idx].div(&el.lm).expect("table divisor");
            for &(t, ct) in &el.tail {
                let r = self.indexer.rank(&t.mul(&mult));
                acc[r] = k.r_sub_mul(acc[r], c, ct);
            }
            acc[idx] = Residue::ZERO;
        }
        out
    }

    fn reduce_and_insert(&mut self, mut acc: Vec<Residue>, start: usize, d: u32) {
        let rem = self.reduce_dense(&mut acc, start, d as usize);
        if rem.is_empty() {
            self.stats.zero_reductions += 1;
            return;
        }
        let k = self.ctx.field();
        let inv = k.r_inv(rem[0].1).expect("nonzero");
        let lm = rem[0].0;
        let tail = rem[1..]
            .iter()
            .map(|&(m, c)| (m, k.r_mul(inv, c)))
            .collect();
        self.insert(Element { lm, tail });
    }

    /// Adds a new basis element and updates the pair set (Gebauer–Möller).
    fn insert(&mut self, el: Element) {
        let h = self.elements.len() as u32;
        let lm_h = el.lm;
        let rank = self.indexer.rank(&lm_h);
        self.tables[lm_h.degree() as usize][rank] = h;

        let mut candidates: Vec<Pair> = self
            .elements
            .iter()
            .enumerate()
            .map(|(g, e)| Pair {
                i: g as u32,
                j: h,
                lcm: e.lm.lcm(&lm_h),
            })
            .collect();
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = candidates.pop() {
            let coprime = self.elements[p.i as usize].lm.is_coprime(&lm_h);
            if coprime
                || !candidates
                    .iter()
                    .chain(kept.iter())
                    .any(|q| q.lcm.divides(&p.lcm))
            {
                kept.push(p);
            }
        }
        kept.retain(|p| !self.elements[p.i as usize].lm.is_coprime(&lm_h));

        let elements = &self.elements;
        self.pairs.retain(|p| {
            let lcm_ih = elements[p.i as usize].lm.lcm(&lm_h);
            let lcm_jh = elements[p.j as usize].lm.lcm(&lm_h);
            !lm_h.divides(&p.lcm) || lcm_ih == p.lcm || lcm_jh == p.lcm
        });
        self.stats.pairs_created += kept.len();
        self.pairs.extend(kept);
        self.elements.push(el);
    }

    /// Clears leading monomials of later elements of degree `d` from the
    /// tails of earlier ones.
    fn back_substitute(&mut self, first: usize, d: u32) {
        let d = d as usize;
        for j in (first..self.elements.len()).rev() {
            let needs = self.elements[j]
                .tail
                .iter()
                .any(|(m, _)| self.tables[d][self.indexer.rank(m)] != NONE);
            if !needs {
                continue;
            }
            let mut acc = vec![Residue::ZERO; self.indexer.len(d)];
            let mut start = usize::MAX;
            for &(m, c) in &self.elements[j].tail {
                let r = self.indexer.rank(&m);
                acc[r] = c;
                start = start.min(r);
            }
            self.elements[j].tail = self.reduce_dense(&mut acc, start, d);
        }
    }

    fn finish(self, truncated_at: Option<u32>) -> GroebnerBasis {
        let ctx = self.ctx;
        let elements: Vec<Polynomial> = self
            .elements
            .into_iter()
            .map(|e| {
                let mut terms = Vec::with_capacity(e.tail.len() + 1);
                terms.push((e.lm, Residue::ONE));
                terms.extend(e.tail);
                Polynomial::from_raw_sorted(&ctx, terms)
            })
            .collect();
        GroebnerBasis {
            ctx,
            elements,
            reduced: true,
            truncated_at,
            stats: self.stats,
            tables: self.tables,
            indexer: self.indexer,
        }
    }
}

/// `S(f, g)` for monic or non-monic polynomials.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, GroebnerError> {
    let (lf, lg) = match (f.leading_monomial(), g.leading_monomial()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(Polynomial::zero(f.ctx())),
    };
    let l = lf.lcm(&lg);
    let a = f.mul_monomial(&l.div(&lf).expect("lcm"))?.scale(
        f.leading_coefficient()
            .expect("nonzero")
            .inv()
            .expect("nonzero"),
    )?;
    let b = g.mul_monomial(&l.div(&lg).expect("lcm"))?.scale(
        g.leading_coefficient()
            .expect("nonzero")
            .inv()
            .expect("nonzero"),
    )?;
    Ok(a.try_sub(&b)?)
}

impl GroebnerBasis {
    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    /// Elements in the order they were found (ascending degree).
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    /// Elements sorted ascending by leading monomial.
    pub fn sorted_elements(&self) -> Vec<&Polynomial> {
        let order = self.ctx.order();
        let mut v: Vec<&Polynomial> = self.elements.iter().collect();
        v.sort_by(|a, b| {
            order.cmp(
                &a.leading_monomial().expect("nonzero"),
                &b.leading_monomial().expect("nonzero"),
            )
        });
        v
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Degree bound at which the computation was cut off, if any.
    pub fn truncated_at(&self) -> Option<u32> {
        self.truncated_at
    }

    pub fn max_degree(&self) -> u32 {
        self.elements
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn stats(&self) -> BuchbergerStats {
        self.stats
    }

    fn find_divisor(&self, m: &Monomial) -> Option<usize> {
        let d = m.degree() as usize;
        if d < self.tables.len() {
            let g = self.tables[d][self.indexer.rank(m)];
            return (g != NONE).then_some(g as usize);
        }
        self.elements
            .iter()
            .position(|g| g.leading_monomial().expect("nonzero").divides(m))
    }

    /// Remainder of `f` on division by the basis; supported on standard
    /// monomials only.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, GroebnerError> {
        if f.ctx() != &self.ctx {
            return Err(GroebnerError::ContextMismatch);
        }
        let mut rest = f.clone();
        let mut rem: Vec<(Monomial, Residue)> = Vec::new();
        while let Some(&(m, c)) = rest.raw_terms().first() {
            match self.find_divisor(&m) {
                Some(g) => {
                    let g = &self.elements[g];
                    let q = m
                        .div(&g.leading_monomial().expect("nonzero"))
                        .expect("divisor");
                    let sub = g.mul_monomial(&q)?.scale_raw(c);
                    rest = rest.try_sub(&sub)?;
                }
                None => {
                    rem.push((m, c));
                    rest = Polynomial::from_raw_sorted(&self.ctx, rest.raw_terms()[1..].to_vec());
                }
            }
        }
        Ok(Polynomial::from_raw_sorted(&self.ctx, rem))
    }

    /// Membership test via the normal form.
    pub fn contains(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// The monomial ideal of leading monomials.
    pub fn initial_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(
            self.ctx.nvars(),
            self.elements
                .iter()
                .map(|g| g.leading_monomial().expect("nonzero")),
        )
    }

    /// Exhaustive Buchberger criterion: every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> Result<bool, GroebnerError> {
        for (a, f) in self.elements.iter().enumerate() {
            for g in &self.elements[a + 1..] {
                if !self.normal_form(&s_polynomial(f, g)?)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Reducedness checked from scratch: monic, and no term of any element
    /// divisible by another element's leading monomial.
    pub fn check_reduced(&self) -> bool {
        let lms: Vec<Monomial> = self
            .elements
            .iter()
            .map(|g| g.leading_monomial().expect("nonzero"))
            .collect();
        self.elements.iter().enumerate().all(|(i, g)| {
            g.leading_coefficient().is_some_and(|c| c.is_one())
                && g.monomials()
                    .all(|m| lms.iter().enumerate().all(|(j, l)| j == i || !l.divides(m)))
        })
    }

    /// Standard monomials of the quotient by this basis.
    pub fn standard_monomials(
        &self,
        max_degree: Option<u32>,
    ) -> Result<StandardMonomialBasis, GroebnerError> {
        standard_monomials(&self.initial_ideal(), &self.ctx, max_degree)
    }
}
