//! Merging the case discussion into its minimal canonical form.
//!
//! The case discussion returns one reduced basis per segment. Distinct
//! segments often share the same set of leading main-variable monomials, and
//! frequently a single polynomial family specializes to the reduced basis on
//! all of them at once; keeping such segments apart would be redundant. This
//! module groups the cases by leading-monomial set, searches for a common
//! representative basis for each group (drawing candidates from the member
//! bases and from the intermediate polynomials recorded during the
//! discussion), and hands every merged group the canonical tree of its
//! region. Groups of the same shape that admit no common representative are
//! genuinely different and stay separate; the result records those pairs.

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;

use crate::cgs::{discuss, lpp_set, specializes_like, Case, Discussion};
use crate::constructible::{gcs_with, PTree};
use crate::polyring::{Monomial, Poly, TermOrder, VarSpace};
use crate::primdec::Factorizer;

// ---------------------------------------------------------------------------
// Output form
// ---------------------------------------------------------------------------

/// A maximal family of cases sharing one representative basis.
#[derive(Debug, Clone)]
pub struct Group {
    /// Common leading main-variable monomials, ascending.
    pub lpps: Vec<Monomial>,
    /// One basis that specializes, up to a nonzero scalar per element, to
    /// the reduced basis at every point of the region.
    pub basis: Vec<Poly>,
    /// The member cases, each on its own segment with its own reduced basis.
    pub members: Vec<Case>,
    /// Canonical tree of the union of the member segments.
    pub tree: PTree,
    /// Whether the region contains the generic (dense open) segment.
    pub generic: bool,
}

impl Group {
    /// Membership of a rational parameter point in the group's region.
    pub fn contains_point(&self, vals: &[BigRational]) -> bool {
        self.members.iter().any(|c| c.segment.contains_point(vals))
    }
}

/// The minimal canonical system: disjoint groups covering the parameter
/// space, the group holding the generic segment first, the rest ordered by
/// their leading-monomial sets.
#[derive(Debug, Clone)]
pub struct CanonicalSystem {
    pub groups: Vec<Group>,
    /// Pairs of group indices with identical leading-monomial sets for which
    /// no common representative basis exists: intrinsically different
    /// specialization behavior, not a missed merge.
    pub unmerged: Vec<(usize, usize)>,
    /// False when an uncertified factorization influenced the analysis.
    pub certified: bool,
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

/// Run the case discussion on `sys` under the side conditions and merge the
/// outcome into the minimal canonical system.
#[allow(clippy::too_many_arguments)]
pub fn minimal_system(
    space: &Arc<VarSpace>,
    order: &Arc<TermOrder>,
    order_a: &Arc<TermOrder>,
    sys: &[Poly],
    null0: &[Poly],
    notnull0: &[Poly],
    fz: &mut Factorizer,
) -> Result<CanonicalSystem, String> {
    let discussion = discuss(space, order, order_a, sys, null0, notnull0, fz)?;
    Ok(merge_cases(space, order, order_a, &discussion, fz))
}

/// Merge the cases of a finished discussion. Grouping is by exact equality
/// of the leading-monomial sets; two groups of the same shape combine when
/// some candidate polynomial family behaves like the reduced basis on every
/// member segment of both. Merging runs to a fixpoint, so the result does
/// not depend on a lucky encounter order and re-merging it would change
/// nothing.
pub fn merge_cases(
    space: &Arc<VarSpace>,
    order: &Arc<TermOrder>,
    order_a: &Arc<TermOrder>,
    discussion: &Discussion,
    fz: &mut Factorizer,
) -> CanonicalSystem {
    let mut certified = discussion.certified;
    let mut buckets: Vec<Bucket> = Vec::new();

    // Greedy pass: absorb each case into the first group of its shape that
    // accepts it.
    for case in &discussion.cases {
        let fresh = Bucket::single(case.clone());
        let mut absorbed = false;
        for b in buckets.iter_mut() {
            if b.lpps != fresh.lpps {
                continue;
            }
            if let Some(basis) = common_basis(b, &fresh, fz, &mut certified) {
                b.basis = basis;
                b.cases.push(case.clone());
                b.generic |= fresh.generic;
                absorbed = true;
                break;
            }
        }
        if !absorbed {
            buckets.push(fresh);
        }
    }

    // Fixpoint pass: a group that grew may bridge two groups that could not
    // merge directly, because the candidate search spans the pools of every
    // member on both sides.
    'again: loop {
        for i in 0..buckets.len() {
            for j in (i + 1)..buckets.len() {
                if buckets[i].lpps != buckets[j].lpps {
                    continue;
                }
                if let Some(basis) = common_basis(&buckets[i], &buckets[j], fz, &mut certified) {
                    let absorbed = buckets.remove(j);
                    buckets[i].basis = basis;
                    buckets[i].cases.extend(absorbed.cases);
                    buckets[i].generic |= absorbed.generic;
                    continue 'again;
                }
            }
        }
        break;
    }

    // Presentation order: the generic group first, then ascending by the
    // leading-monomial sequence; groups of equal shape keep formation order.
    buckets.sort_by(|a, b| {
        b.generic
            .cmp(&a.generic)
            .then_with(|| cmp_lpps(order, &a.lpps, &b.lpps))
    });

    let unmerged: Vec<(usize, usize)> = (0..buckets.len())
        .flat_map(|i| ((i + 1)..buckets.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| buckets[i].lpps == buckets[j].lpps)
        .collect();

    let groups: Vec<Group> = buckets
        .into_iter()
        .map(|b| {
            let specs: Vec<_> = b.cases.iter().map(|c| c.segment.to_red_spec()).collect();
            let tree = gcs_with(space, order_a, &specs, fz);
            Group {
                lpps: b.lpps,
                basis: b.basis,
                members: b.cases,
                tree,
                generic: b.generic,
            }
        })
        .collect();

    CanonicalSystem {
        groups,
        unmerged,
        certified,
    }
}

// ---------------------------------------------------------------------------
// Representative search
// ---------------------------------------------------------------------------

struct Bucket {
    lpps: Vec<Monomial>,
    basis: Vec<Poly>,
    cases: Vec<Case>,
    generic: bool,
}

impl Bucket {
    fn single(case: Case) -> Bucket {
        Bucket {
            lpps: lpp_set(&case.basis),
            basis: case.basis.clone(),
            generic: case.segment.is_generic(),
            cases: vec![case],
        }
    }
}

/// A basis valid on every member segment of both groups, or `None` when some
/// position admits no shared representative. Candidates per position: the
/// two current representatives, every member's own basis element, then every
/// intermediate polynomial of the right leading monomial recorded by any
/// member. The first candidate accepted everywhere wins, which keeps the
/// result deterministic.
fn common_basis(
    a: &Bucket,
    b: &Bucket,
    fz: &mut Factorizer,
    certified: &mut bool,
) -> Option<Vec<Poly>> {
    debug_assert_eq!(a.lpps, b.lpps);
    let members: Vec<&Case> = a.cases.iter().chain(&b.cases).collect();
    let mut out = Vec::with_capacity(a.lpps.len());
    'position: for (k, lpp) in a.lpps.iter().enumerate() {
        // Polynomial equality ignores term order, so the dedup below treats
        // re-sorted copies of one candidate as a single entry.
        let mut cands: Vec<&Poly> = Vec::new();
        for h in [&a.basis[k], &b.basis[k]] {
            if !cands.iter().any(|q| *q == h) {
                cands.push(h);
            }
        }
        for c in &members {
            let h = &c.basis[k];
            if !cands.iter().any(|q| *q == h) {
                cands.push(h);
            }
        }
        for c in &members {
            for h in &c.pool {
                let Some((m, _)) = h.leading_wrt_x() else { continue };
                if &m == lpp && !cands.iter().any(|q| *q == h) {
                    cands.push(h);
                }
            }
        }
        'candidate: for h in cands {
            for c in &members {
                if h == &c.basis[k] {
                    // A reduced basis element trivially behaves like itself.
                    continue;
                }
                let (ok, cert) = specializes_like(h, &c.basis[k], &c.segment, fz);
                *certified &= cert;
                if !ok {
                    continue 'candidate;
                }
            }
            out.push(h.clone());
            continue 'position;
        }
        return None;
    }
    Some(out)
}

/// Ascending comparison of leading-monomial sequences: elementwise by the
/// term order, a shared prefix putting the shorter sequence first.
fn cmp_lpps(order: &TermOrder, a: &[Monomial], b: &[Monomial]) -> Ordering {
    for (ma, mb) in a.iter().zip(b.iter()) {
        match order.cmp(ma, mb) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}
