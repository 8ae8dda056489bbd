//! Case analysis of parametric polynomial systems.
//!
//! Given generators whose coefficients are polynomials in parameters, this
//! module splits the parameter space into finitely many segments — each a
//! union of irreducible closed sets minus excluded hypersurfaces — and on
//! each segment produces a polynomial basis whose specialization at every
//! point of the segment is (after scaling each element monic) the reduced
//! Gröbner basis of the specialized system. Leading main-variable monomials
//! are constant across a segment and no leading coefficient vanishes on it.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::constructible::RedSpec;
use crate::groebner::{cmp_polys_structural, Ideal};
use crate::polyring::{Monomial, OrderKind, Poly, TermOrder, VarSpace};
use crate::primdec::{minimal_primes_with, Factorizer};

/// Maximum number of nested coefficient splits before the analysis is
/// abandoned; reaching it indicates an internal loop rather than a hard
/// problem, since every split either grows a prime strictly or marks a
/// previously ambiguous coefficient as nonvanishing.
const MAX_SPLIT_DEPTH: usize = 64;

/// Cap on recorded intermediate polynomials per branch path.
const POOL_CAP: usize = 512;

// ---------------------------------------------------------------------------
// Segments of parameter space
// ---------------------------------------------------------------------------

/// A region of parameter space: the points of the variety of `primes`
/// (a union of irreducible components) where no polynomial in `nonnull`
/// vanishes.
#[derive(Debug, Clone)]
pub struct Segment {
    /// Irreducible components of the region's closure; inclusion-minimal,
    /// sorted. A single zero ideal denotes the whole parameter space.
    primes: Vec<Ideal>,
    /// The vanishing ideal of the closure: the intersection of `primes`.
    closure: Ideal,
    /// Scalar-normalized irreducible parameter polynomials excluded from
    /// the region, sorted, none lying in any member of `primes`.
    nonnull: Vec<Poly>,
}

impl Segment {
    /// The whole parameter space.
    pub fn full(space: &Arc<VarSpace>, order_a: &Arc<TermOrder>) -> Segment {
        Segment {
            primes: vec![Ideal::zero(space, order_a)],
            closure: Ideal::zero(space, order_a),
            nonnull: vec![],
        }
    }

    /// Normalizing constructor. Drops redundant components (contained in
    /// another, or wholly excluded by a `nonnull` polynomial) and duplicate
    /// excluded polynomials. `None` when the region is empty.
    pub fn new(primes: Vec<Ideal>, nonnull: Vec<Poly>) -> Option<Segment> {
        let mut ws: Vec<Poly> = vec![];
        for w in nonnull {
            let n = w.normalized_primitive();
            assert!(n.is_param_only(), "excluded polynomials must be parameter-only");
            if n.is_zero() {
                return None;
            }
            if n.is_constant() {
                continue;
            }
            if !ws.contains(&n) {
                ws.push(n);
            }
        }

        let mut kept: Vec<Ideal> = vec![];
        'cand: for p in primes {
            if p.is_unit() {
                continue;
            }
            // A component on which an excluded polynomial vanishes
            // identically contributes no points.
            if ws.iter().any(|w| p.contains_poly(w)) {
                continue;
            }
            let mut drop_idx: Vec<usize> = vec![];
            for (i, q) in kept.iter().enumerate() {
                if p.contains_ideal(q) {
                    // V(p) ⊆ V(q): p is redundant (covers equality too).
                    continue 'cand;
                }
                if q.contains_ideal(&p) {
                    drop_idx.push(i);
                }
            }
            for i in drop_idx.into_iter().rev() {
                kept.remove(i);
            }
            kept.push(p);
        }
        if kept.is_empty() {
            return None;
        }

        let order_a = kept[0].order().clone();
        kept.sort_by(|a, b| a.cmp_structural(b));
        ws.sort_by(|a, b| cmp_polys_structural(&order_a, a, b));
        let closure = kept
            .iter()
            .skip(1)
            .fold(kept[0].clone(), |acc, p| acc.intersect(p));
        Some(Segment {
            primes: kept,
            closure,
            nonnull: ws,
        })
    }

    pub fn primes(&self) -> &[Ideal] {
        &self.primes
    }

    /// The vanishing ideal of the region's closure.
    pub fn closure(&self) -> &Ideal {
        &self.closure
    }

    pub fn nonnull(&self) -> &[Poly] {
        &self.nonnull
    }

    /// True when the closure is the whole parameter space.
    pub fn is_generic(&self) -> bool {
        self.closure.is_zero()
    }

    /// Does a parameter polynomial vanish at every point of the region?
    /// Exact: the region is dense in its closure, whose vanishing ideal is
    /// the (radical) intersection of the component primes.
    pub fn is_null(&self, c: &Poly) -> bool {
        self.closure.contains_poly(c)
    }

    /// Does a parameter polynomial vanish at no point of the region?
    /// `c` avoids zero on the region exactly when every irreducible
    /// component of its zero set inside each `primes` member lies inside
    /// the zero set of some excluded polynomial. The second value reports
    /// whether every factorization involved was certified complete.
    pub fn is_unit(&self, c: &Poly, fz: &mut Factorizer) -> (bool, bool) {
        if c.is_zero() {
            return (false, true);
        }
        if c.is_constant() {
            return (true, true);
        }
        let mut certified = true;
        // Fast path: every irreducible factor of c is itself excluded.
        let fct = fz.factor(c);
        certified &= fct.certified;
        if fct.factors.iter().all(|(f, _)| self.nonnull.contains(f)) {
            return (true, certified);
        }
        for p in &self.primes {
            for (f, _) in &fct.factors {
                if self.nonnull.contains(f) {
                    continue;
                }
                let j = p.plus(std::slice::from_ref(f));
                if j.is_unit() {
                    continue;
                }
                let mp = minimal_primes_with(&j, fz);
                certified &= mp.certified;
                for q in &mp.primes {
                    if !self.nonnull.iter().any(|w| q.contains_poly(w)) {
                        return (false, certified);
                    }
                }
            }
        }
        (true, certified)
    }

    /// Is the point inside the region?
    pub fn contains_point(&self, vals: &[BigRational]) -> bool {
        self.primes.iter().any(|p| p.vanishes_at(vals))
            && self
                .nonnull
                .iter()
                .all(|w| !w.evaluate_params(vals).is_zero())
    }

    /// The region as a (vanishing ideal, excluded polynomials) pair for
    /// canonical-tree construction.
    pub fn to_red_spec(&self) -> RedSpec {
        RedSpec::new(self.closure.clone(), self.nonnull.clone())
    }
}

// ---------------------------------------------------------------------------
// Coefficient reduction over a segment
// ---------------------------------------------------------------------------

/// Verdict of coefficient reduction over a segment.
#[derive(Debug, Clone)]
pub enum CoeffOutcome {
    /// Every coefficient vanishes identically on the segment.
    Vanishes,
    /// The reduced polynomial; its leading main-variable coefficient
    /// vanishes nowhere on the segment.
    Determined(Poly),
    /// The reduced polynomial and its leading coefficient, which vanishes
    /// on part of the segment but not all of it.
    Split(Poly, Poly),
}

/// Reduce every parameter coefficient of `f` modulo the segment closure's
/// vanishing ideal, then classify the leading surviving coefficient.
/// The second value reports factorization certification.
pub fn reduce_on_segment(f: &Poly, seg: &Segment, fz: &mut Factorizer) -> (CoeffOutcome, bool) {
    if f.is_zero() {
        return (CoeffOutcome::Vanishes, true);
    }
    let r = seg.closure().coeff_nf(f);
    if r.is_zero() {
        return (CoeffOutcome::Vanishes, true);
    }
    let (_, clead) = r.leading_wrt_x().expect("nonzero polynomial has a leading term");
    let (unit, certified) = seg.is_unit(&clead, fz);
    if unit {
        (CoeffOutcome::Determined(r), certified)
    } else {
        (CoeffOutcome::Split(r, clead), certified)
    }
}

/// Outcome of splitting a segment at a coefficient `c` that vanishes on a
/// proper nonempty part of it.
pub struct SegmentSplit {
    /// The part where `c` is excluded from vanishing (same components,
    /// irreducible factors of `c` added to the excluded list); `None` when
    /// empty.
    pub keep: Option<Segment>,
    /// The part where `c` vanishes (components of each prime extended by
    /// each factor); `None` when empty.
    pub vanish: Option<Segment>,
    pub certified: bool,
}

/// Split a segment on a parameter polynomial.
pub fn split_segment(seg: &Segment, c: &Poly, fz: &mut Factorizer) -> SegmentSplit {
    assert!(!c.is_zero() && !c.is_constant(), "split needs a nonconstant polynomial");
    let mut certified = true;
    let order_a = seg.closure.order().clone();
    let fct = fz.factor(c);
    certified &= fct.certified;
    let factors: Vec<Poly> = fct
        .factors
        .into_iter()
        .map(|(f, _)| f.resort(&order_a))
        .filter(|f| !f.is_constant())
        .collect();
    for f in &factors {
        fz.note_irreducible(f);
    }

    let mut keep_ws = seg.nonnull.to_vec();
    keep_ws.extend(factors.iter().cloned());
    let keep = Segment::new(seg.primes.clone(), keep_ws);

    let mut vanish_primes: Vec<Ideal> = vec![];
    for f in &factors {
        if seg.nonnull.contains(f) {
            continue;
        }
        for p in &seg.primes {
            let j = p.plus(std::slice::from_ref(f));
            if j.is_unit() {
                continue;
            }
            let mp = minimal_primes_with(&j, fz);
            certified &= mp.certified;
            vanish_primes.extend(mp.primes);
        }
    }
    let vanish = Segment::new(vanish_primes, seg.nonnull.to_vec());

    SegmentSplit {
        keep,
        vanish,
        certified,
    }
}

// ---------------------------------------------------------------------------
// The case analysis driver
// ---------------------------------------------------------------------------

/// One finished case: a segment together with a basis specializing, at
/// every point of the segment, to the reduced Gröbner basis of the
/// specialized system (after making each element monic).
#[derive(Debug, Clone)]
pub struct Case {
    pub segment: Segment,
    /// Sorted ascending by leading main-variable monomial; leading
    /// coefficients vanish nowhere on the segment.
    pub basis: Vec<Poly>,
    /// Intermediate polynomials recorded along this case's branch path;
    /// candidate representatives when cases are merged later.
    pub pool: Vec<Poly>,
}

/// The full case analysis: segments are pairwise disjoint and cover the
/// region described by the initial constraints.
#[derive(Debug, Clone)]
pub struct Discussion {
    pub cases: Vec<Case>,
    /// False when some factorization or component decomposition along the
    /// way was not certified complete.
    pub certified: bool,
}

impl Discussion {
    /// The case whose segment closure is the whole parameter space, if any.
    pub fn generic_case(&self) -> Option<&Case> {
        self.cases.iter().find(|c| c.segment.is_generic())
    }
}

/// Leading main-variable monomials of a sorted basis, ascending.
pub fn lpp_set(basis: &[Poly]) -> Vec<Monomial> {
    basis
        .iter()
        .map(|b| b.leading_wrt_x().expect("basis elements are nonzero").0)
        .collect()
}

struct Task {
    seg: Segment,
    polys: Vec<Poly>,
    pool: Vec<Poly>,
    depth: usize,
}

enum StepOut {
    Leaf(Case),
    Split(Option<Task>, Option<Task>),
}

/// Analyze the system `sys` over the region of parameter space where every
/// polynomial of `null0` vanishes and no polynomial of `notnull0` does.
///
/// `order` must be a main-variables-first order for the arithmetic of
/// `sys`; `order_a` the matching parameter-block order used for parameter
/// ideals. The result lists the case with generic (whole-space closure)
/// segment first when present; the order is deterministic.
pub fn discuss(
    space: &Arc<VarSpace>,
    order: &Arc<TermOrder>,
    order_a: &Arc<TermOrder>,
    sys: &[Poly],
    null0: &[Poly],
    notnull0: &[Poly],
    fz: &mut Factorizer,
) -> Result<Discussion, String> {
    let mut certified = true;

    // Initial segment from the constraints.
    let null_gens: Vec<Poly> = null0
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            assert!(p.is_param_only(), "null constraints must be parameter-only");
            p.resort(order_a)
        })
        .collect();
    let primes0 = if null_gens.is_empty() {
        vec![Ideal::zero(space, order_a)]
    } else {
        let n0 = Ideal::new(space, order_a, &null_gens);
        if n0.is_unit() {
            return Ok(Discussion {
                cases: vec![],
                certified,
            });
        }
        let mp = minimal_primes_with(&n0, fz);
        certified &= mp.certified;
        mp.primes
    };
    let mut ws0: Vec<Poly> = vec![];
    for w in notnull0 {
        assert!(w.is_param_only(), "nonnull constraints must be parameter-only");
        if w.is_zero() {
            // Zero is excluded from vanishing nowhere: empty region.
            return Ok(Discussion {
                cases: vec![],
                certified,
            });
        }
        if w.is_constant() {
            continue;
        }
        let fct = fz.factor(&w.resort(order_a));
        certified &= fct.certified;
        for (f, _) in fct.factors {
            fz.note_irreducible(&f);
            ws0.push(f);
        }
    }
    let seg0 = match Segment::new(primes0, ws0) {
        Some(s) => s,
        None => {
            return Ok(Discussion {
                cases: vec![],
                certified,
            })
        }
    };

    let polys0: Vec<Poly> = sys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.resort(order))
        .collect();
    let mut pool0: Vec<Poly> = vec![];
    for p in &polys0 {
        push_pool(&mut pool0, p);
    }

    let mut stack: Vec<Task> = vec![Task {
        seg: seg0,
        polys: polys0,
        pool: pool0,
        depth: 0,
    }];
    let mut cases: Vec<Case> = vec![];
    while let Some(task) = stack.pop() {
        if task.depth > MAX_SPLIT_DEPTH {
            return Err(format!(
                "case split depth exceeded {MAX_SPLIT_DEPTH}; aborting analysis"
            ));
        }
        match step(task, space, order, fz, &mut certified) {
            StepOut::Leaf(case) => cases.push(case),
            StepOut::Split(keep, vanish) => {
                // The nonvanishing side is explored first.
                if let Some(t) = vanish {
                    stack.push(t);
                }
                if let Some(t) = keep {
                    stack.push(t);
                }
            }
        }
    }
    Ok(Discussion { cases, certified })
}

fn trace_on() -> bool {
    std::env::var_os("MCCGS_TRACE").is_some()
}

fn push_pool(pool: &mut Vec<Poly>, p: &Poly) {
    if pool.len() >= POOL_CAP {
        return;
    }
    let n = p.normalized_primitive();
    if n.is_zero() || n.is_param_only() {
        return;
    }
    if !pool.contains(&n) {
        pool.push(n);
    }
}

/// Advance one task: either finish it into a case or split its segment at
/// an ambiguous coefficient, restarting both children from the current
/// working set.
fn step(
    task: Task,
    space: &Arc<VarSpace>,
    order: &Arc<TermOrder>,
    fz: &mut Factorizer,
    certified: &mut bool,
) -> StepOut {
    let Task {
        seg,
        polys,
        mut pool,
        depth,
    } = task;
    if trace_on() {
        let comps: Vec<String> = seg
            .primes
            .iter()
            .map(|p| format!("{:?}", p.gb().iter().map(|g| format!("{g}")).collect::<Vec<_>>()))
            .collect();
        let ws: Vec<String> = seg.nonnull.iter().map(|w| format!("{w}")).collect();
        eprintln!(
            "[case d={depth}] {} polys, components {comps:?}, excluded {ws:?}",
            polys.len()
        );
    }

    // Phase 1: coefficient-reduce every working polynomial.
    let mut work: Vec<Poly> = vec![];
    for (k, f) in polys.iter().enumerate() {
        let (out, cok) = reduce_on_segment(f, &seg, fz);
        *certified &= cok;
        match out {
            CoeffOutcome::Vanishes => {}
            CoeffOutcome::Determined(r) => {
                push_pool(&mut pool, &r);
                work.push(r);
            }
            CoeffOutcome::Split(r, c) => {
                push_pool(&mut pool, &r);
                let mut next = work.clone();
                next.push(r);
                next.extend(polys[k + 1..].iter().cloned());
                return split_step(&seg, &c, next, pool, depth, fz, certified);
            }
        }
    }

    // A polynomial without main variables that vanishes nowhere on the
    // segment makes the specialized ideal trivial.
    if work.iter().any(|p| p.is_param_only()) {
        return StepOut::Leaf(unit_case(seg, pool, space, order));
    }
    if work.is_empty() {
        return StepOut::Leaf(Case {
            segment: seg,
            basis: vec![],
            pool,
        });
    }

    // Phase 2: completion. S-polynomials are formed with cross-multiplied
    // leading coefficients (vanishing nowhere on the segment) so every
    // reduction trace specializes to a valid reduction pointwise.
    work.sort_by(|a, b| cmp_work(order, a, b));
    let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
    for j in 1..work.len() {
        for i in 0..j {
            pairs.push_back((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop_front() {
        let (mi, _) = work[i].leading_wrt_x().unwrap();
        let (mj, _) = work[j].leading_wrt_x().unwrap();
        let m = mi.lcm(&mj);
        if m == mi.mul(&mj) {
            // Coprime leading monomials: the S-polynomial reduces to zero
            // at every specialization.
            continue;
        }
        let s = spair(&work[i], &work[j]);
        if s.is_zero() {
            continue;
        }
        if trace_on() {
            eprintln!(
                "    [pair ({i},{j})] s-poly {} terms, total degree {}",
                s.num_terms(),
                s.total_degree()
            );
        }
        match pseudo_reduce(s, &work, &seg, fz, certified) {
            Red::Zero => {}
            Red::Remainder(r) => {
                push_pool(&mut pool, &r);
                if trace_on() {
                    eprintln!("  [rem] {} terms, lead {:?}", r.num_terms(), r.leading_wrt_x().map(|(m, c)| format!("{} * {c}", crate::polyring::mono_to_text(&r, &m))));
                }
                if r.is_param_only() {
                    return StepOut::Leaf(unit_case(seg, pool, space, order));
                }
                let k = work.len();
                work.push(r);
                for i2 in 0..k {
                    pairs.push_back((i2, k));
                }
            }
            Red::Branch(r, c) => {
                push_pool(&mut pool, &r);
                if trace_on() {
                    eprintln!("  [branch on {c}] from pair ({i},{j}) remainder {r}");
                }
                let mut next = work.clone();
                next.push(r);
                return split_step(&seg, &c, next, pool, depth, fz, certified);
            }
        }
    }

    // Phase 3: normalization into the canonical segment basis.
    StepOut::Leaf(finish_case(seg, work, pool, order))
}

fn unit_case(seg: Segment, pool: Vec<Poly>, space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> Case {
    Case {
        segment: seg,
        basis: vec![Poly::one(space, order)],
        pool,
    }
}

fn split_step(
    seg: &Segment,
    c: &Poly,
    polys: Vec<Poly>,
    pool: Vec<Poly>,
    depth: usize,
    fz: &mut Factorizer,
    certified: &mut bool,
) -> StepOut {
    let split = split_segment(seg, c, fz);
    *certified &= split.certified;
    let mk = |s: Segment| Task {
        seg: s,
        polys: polys.clone(),
        pool: pool.clone(),
        depth: depth + 1,
    };
    StepOut::Split(split.keep.map(&mk), split.vanish.map(&mk))
}

/// Deterministic working order: ascending leading main-variable monomial,
/// then full structural comparison.
fn cmp_work(order: &Arc<TermOrder>, a: &Poly, b: &Poly) -> Ordering {
    let (ma, _) = a.leading_wrt_x().unwrap();
    let (mb, _) = b.leading_wrt_x().unwrap();
    match order.cmp(&ma, &mb) {
        Ordering::Equal => cmp_polys_structural(order, a, b),
        o => o,
    }
}

/// Cross-scaled S-polynomial: the leading terms cancel after multiplying
/// each polynomial by the other's leading main-variable coefficient.
fn spair(f: &Poly, g: &Poly) -> Poly {
    let (mf, cf) = f.leading_wrt_x().unwrap();
    let (mg, cg) = g.leading_wrt_x().unwrap();
    let m = mf.lcm(&mg);
    let df = m.checked_div(&mf).unwrap();
    let dg = m.checked_div(&mg).unwrap();
    let one = BigRational::one();
    f.mul(&cg)
        .mul_mono_scaled(&df, &one)
        .sub(&g.mul(&cf).mul_mono_scaled(&dg, &one))
        .normalized_primitive()
}

enum Red {
    Zero,
    Remainder(Poly),
    Branch(Poly, Poly),
}

/// Reduce `r` against the working set, multiplying by leading coefficients
/// (nonvanishing on the segment) as needed. A reduction step only requires
/// the divisor's leading coefficient to be a unit on the segment, so the
/// remainder's own leading coefficient is classified only once its monomial
/// escapes every divisor: unit gives a remainder, an ambiguous coefficient
/// (vanishing on a proper part) asks for a case split. Classifying before
/// the monomial escapes would split on coefficients that a further
/// reduction step was about to cancel anyway.
fn pseudo_reduce(
    r0: Poly,
    work: &[Poly],
    seg: &Segment,
    fz: &mut Factorizer,
    certified: &mut bool,
) -> Red {
    let mut r = r0;
    let mut steps = 0u64;
    loop {
        steps += 1;
        if trace_on() && (steps % 200 == 0 || r.num_terms() > 500) {
            eprintln!(
                "    [reduce step {steps}] {} terms, total degree {}",
                r.num_terms(),
                r.total_degree()
            );
        }
        let mut r2 = strip_excluded_content(seg.closure().coeff_nf(&r), seg);
        if r2.is_zero() {
            return Red::Zero;
        }
        // Classify any factor common to every coefficient now: such a factor
        // survives every further reduction step (multiplication preserves it
        // and each subtracted multiple of a divisor carries it), so it would
        // reach the final remainder unchanged. A unit content divides out; an
        // ambiguous one forces the same split it would force later, while the
        // polynomial is still small.
        if !r2.is_param_only() {
            let content = r2.content_wrt_x();
            if !content.is_constant() {
                let (unit, cok) = seg.is_unit(&content, fz);
                *certified &= cok;
                if unit {
                    r2 = r2
                        .div_exact(&content)
                        .expect("content divides the polynomial")
                        .normalized_primitive();
                } else {
                    return Red::Branch(r2, content);
                }
            }
        }
        let (mu, cr) = r2.leading_wrt_x().expect("nonzero polynomial has a leading term");
        let divisor = work.iter().find(|b| {
            let (nu, _) = b.leading_wrt_x().unwrap();
            nu.divides(&mu)
        });
        match divisor {
            None => {
                let (unit, cok) = seg.is_unit(&cr, fz);
                *certified &= cok;
                return if unit { Red::Remainder(r2) } else { Red::Branch(r2, cr) };
            }
            Some(b) => {
                let (nu, cb) = b.leading_wrt_x().unwrap();
                let delta = mu.checked_div(&nu).unwrap();
                let one = BigRational::one();
                r = r2
                    .mul(&cb)
                    .sub(&b.mul(&cr).mul_mono_scaled(&delta, &one));
            }
        }
    }
}

/// Divide out of `r` every excluded-polynomial factor common to all of its
/// coefficients, plus rational content. Each multiplication by a divisor's
/// leading coefficient during pseudo-reduction plants such a factor, and
/// their product compounds exponentially if left in place. Excluded
/// polynomials vanish nowhere on the region, so the quotient generates the
/// same specialized ideal with the same leading structure at every point
/// of the segment.
fn strip_excluded_content(r: Poly, seg: &Segment) -> Poly {
    if r.is_zero() || seg.nonnull.is_empty() {
        return r.normalized_primitive();
    }
    let order = r.order().clone();
    let ws: Vec<Poly> = seg.nonnull.iter().map(|w| w.resort(&order)).collect();
    let mut out = r;
    loop {
        let mut divided = false;
        for w in &ws {
            if let Some(q) = out.div_exact(w) {
                out = q;
                divided = true;
            }
        }
        if !divided {
            break;
        }
    }
    out.normalized_primitive()
}

/// Normalize a completed working set into the segment basis: keep one
/// element per minimal leading monomial, reduce tails, strip content over
/// the parameters, scale canonically, sort.
fn finish_case(seg: Segment, mut work: Vec<Poly>, mut pool: Vec<Poly>, order: &Arc<TermOrder>) -> Case {
    work.sort_by(|a, b| cmp_work(order, a, b));
    let mut kept: Vec<Poly> = vec![];
    for b in work {
        let (mb, _) = b.leading_wrt_x().unwrap();
        let redundant = kept.iter().any(|k| {
            let (mk, _) = k.leading_wrt_x().unwrap();
            mk.divides(&mb)
        });
        if !redundant {
            kept.push(b);
        }
    }

    // Tail reduction to the canonical form: repeat passes until stable.
    let mut passes = 0;
    loop {
        let mut changed = false;
        for i in 0..kept.len() {
            let others: Vec<Poly> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            let r = tail_reduce(&kept[i], &others, &seg);
            if r != kept[i] {
                kept[i] = r;
                changed = true;
            }
        }
        passes += 1;
        if !changed || passes > 64 {
            break;
        }
    }

    for b in &mut kept {
        *b = b.primitive_part_wrt_x().normalized_primitive();
        push_pool(&mut pool, b);
    }
    kept.sort_by(|a, b| cmp_work(order, a, b));

    // The leading coefficients stay nonvanishing through tail reduction
    // (each step scales by one) and content removal (the content divides
    // the leading coefficient), so the case invariants hold.
    Case {
        segment: seg,
        basis: kept,
        pool,
    }
}

/// Eliminate every tail monomial divisible by another element's leading
/// monomial, scaling by leading coefficients as needed.
fn tail_reduce(b: &Poly, others: &[Poly], seg: &Segment) -> Poly {
    let mut r = b.clone();
    'outer: loop {
        let (lead, _) = match r.leading_wrt_x() {
            Some(t) => t,
            None => break,
        };
        for mx in r.x_monomials() {
            if mx == lead {
                continue;
            }
            for o in others {
                let (no, co) = o.leading_wrt_x().unwrap();
                if no.divides(&mx) {
                    let ct = r.coeff_of_x_monomial(&mx);
                    let delta = mx.checked_div(&no).unwrap();
                    let one = BigRational::one();
                    r = r
                        .mul(&co)
                        .sub(&o.mul(&ct).mul_mono_scaled(&delta, &one));
                    r = seg.closure().coeff_nf(&r).normalized_primitive();
                    continue 'outer;
                }
            }
        }
        break;
    }
    r
}

// ---------------------------------------------------------------------------
// Cross-segment specialization test
// ---------------------------------------------------------------------------

/// Does `f` specialize, at every point of `seg`, to a nonzero scalar
/// multiple of the specialization of `target`? `target` is assumed to be a
/// basis element of `seg`'s case (coefficient-reduced, nonvanishing leading
/// coefficient). The second value reports factorization certification.
pub fn specializes_like(f: &Poly, target: &Poly, seg: &Segment, fz: &mut Factorizer) -> (bool, bool) {
    let fr = seg.closure().coeff_nf(f);
    let tr = seg.closure().coeff_nf(target);
    if fr.is_zero() || tr.is_zero() {
        return (false, true);
    }
    let fmx = fr.x_monomials();
    if fmx != tr.x_monomials() {
        return (false, true);
    }
    let (flead, fc) = fr.leading_wrt_x().unwrap();
    let (_, tc) = tr.leading_wrt_x().unwrap();
    let (unit, certified) = seg.is_unit(&fc, fz);
    if !unit {
        return (false, certified);
    }
    // All coefficient ratios must agree on the closure: cross products
    // against the leading pair must vanish identically.
    for mx in fmx {
        if mx == flead {
            continue;
        }
        let a = fr.coeff_of_x_monomial(&mx);
        let b = tr.coeff_of_x_monomial(&mx);
        let cross = a.mul(&tc).sub(&fc.mul(&b));
        if !seg.closure().contains_poly(&cross) {
            return (false, certified);
        }
    }
    (true, certified)
}

// ---------------------------------------------------------------------------
// Independent verification and sampling
// ---------------------------------------------------------------------------

/// Compare a case basis against a from-scratch Gröbner basis of the
/// specialized system at one parameter point. True when the monic
/// specialized basis equals the independently computed reduced basis.
pub fn oracle_check(sys: &[Poly], basis: &[Poly], point: &[BigRational]) -> bool {
    if sys.is_empty() && basis.is_empty() {
        return true;
    }
    let (space, order) = match sys.first().or_else(|| basis.first()) {
        Some(p) => (p.space().clone(), p.order().clone()),
        None => return true,
    };
    let specialized: Vec<Poly> = sys.iter().map(|p| p.evaluate_params(point)).collect();
    let mut expect = Ideal::new(&space, &order, &specialized).gb().to_vec();
    let mut got: Vec<Poly> = vec![];
    for b in basis {
        let e = b.evaluate_params(point);
        if e.is_zero() {
            // A leading coefficient vanished where it must not.
            return false;
        }
        got.push(e.monic());
    }
    expect.sort_by(|a, b| cmp_polys_structural(&order, a, b));
    got.sort_by(|a, b| cmp_polys_structural(&order, a, b));
    expect == got
}

/// Draw a random rational point on the region, or `None` when the attempts
/// are exhausted. Deterministic for a fixed generator state.
pub fn sample_segment<R: Rng>(
    seg: &Segment,
    rng: &mut R,
    fz: &mut Factorizer,
    attempts: usize,
) -> Option<Vec<BigRational>> {
    for _ in 0..attempts {
        let pi = rng.gen_range(0..seg.primes.len());
        if let Some(pt) = sample_on_variety(&seg.primes[pi], rng, fz) {
            if seg
                .nonnull
                .iter()
                .all(|w| !w.evaluate_params(&pt).is_zero())
            {
                return Some(pt);
            }
        }
    }
    None
}

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = if rng.gen_range(0..4) == 0 {
        rng.gen_range(2..=3)
    } else {
        1
    };
    BigRational::new(num.into(), den.into())
}

fn const_value(p: &Poly) -> Option<BigRational> {
    if p.is_zero() {
        return Some(BigRational::zero());
    }
    if p.is_constant() {
        return Some(p.lc().unwrap().clone());
    }
    None
}

/// Random rational point on the variety of a parameter ideal, by
/// triangular back-substitution under an elimination order; univariate
/// constraints are solved through their rational roots. `None` when the
/// draw fails (no rational root met, or the ideal is trivial).
fn sample_on_variety<R: Rng>(p: &Ideal, rng: &mut R, fz: &mut Factorizer) -> Option<Vec<BigRational>> {
    let space = p.space().clone();
    let nparams = space.nparams();
    let nx = space.nx();
    if p.is_unit() {
        return None;
    }
    if p.is_zero() {
        return Some((0..nparams).map(|_| small_rational(rng)).collect());
    }
    let lex = TermOrder::param_leading(OrderKind::Lex, nx, nparams);
    let tri = Ideal::new(&space, &lex, p.gb());

    let mut vals: Vec<Option<BigRational>> = vec![None; nparams];
    let substitute = |g: &Poly, vals: &[Option<BigRational>]| -> Poly {
        let mut q = g.clone();
        for (j, v) in vals.iter().enumerate() {
            if let Some(v) = v {
                let c = Poly::constant(&space, &lex, v.clone());
                q = q.substitute_var(nx + j, &c);
            }
        }
        q
    };

    for _ in 0..(2 * nparams + 4) {
        if vals.iter().all(|v| v.is_some()) {
            break;
        }
        let mut progressed = false;
        for g in tri.gb() {
            let q = substitute(g, &vals);
            if q.is_zero() {
                continue;
            }
            if q.is_constant() {
                return None; // contradictory draw
            }
            let pv = q.vars_present();
            if pv.len() == 1 && vals[pv[0] - nx].is_none() {
                let v = pv[0];
                let mut roots: Vec<BigRational> = vec![];
                let fct = fz.factor(&q);
                for (f, _) in fct.factors {
                    if f.degree_in_var(v) == 1 && f.vars_present() == vec![v] {
                        let at0 = const_value(&f.substitute_var(
                            v,
                            &Poly::constant(&space, &lex, BigRational::zero()),
                        ))?;
                        let at1 = const_value(&f.substitute_var(
                            v,
                            &Poly::constant(&space, &lex, BigRational::one()),
                        ))?;
                        let slope = at1 - &at0;
                        if !slope.is_zero() {
                            let root = -at0 / slope;
                            if !roots.contains(&root) {
                                roots.push(root);
                            }
                        }
                    }
                }
                if roots.is_empty() {
                    return None;
                }
                roots.sort();
                let pick = rng.gen_range(0..roots.len());
                vals[v - nx] = Some(roots[pick].clone());
                progressed = true;
            }
        }
        if !progressed {
            // Assign the least-precedence unset parameter freely.
            if let Some(j) = (0..nparams).rev().find(|j| vals[*j].is_none()) {
                vals[j] = Some(small_rational(rng));
            }
        }
    }

    let out: Vec<BigRational> = vals.into_iter().map(|v| v.unwrap_or_default()).collect();
    if p.vanishes_at(&out) {
        Some(out)
    } else {
        None
    }
}
