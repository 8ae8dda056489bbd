//! Buchberger's algorithm, reduced Gröbner bases, normal forms, and the
//! ideal operations built from elimination: intersection, saturation, and
//! radical membership.
//!
//! [`Ideal`] eagerly stores the reduced monic Gröbner basis under its order,
//! so equality, hashing, and containment tests are cheap and canonical —
//! the tree machinery compares ideals constantly.

use crate::polyring::{Monomial, Poly, TermOrder, VarSpace};
use num_rational::BigRational;
use num_traits::One;
use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

/// S-polynomial of two nonzero polynomials under their common order.
pub fn spoly(f: &Poly, g: &Poly) -> Poly {
    let (fm, fc) = f.lt().expect("spoly of zero");
    let (gm, gc) = g.lt().expect("spoly of zero");
    let l = fm.lcm(gm);
    let mf = l.checked_div(fm).unwrap();
    let mg = l.checked_div(gm).unwrap();
    f.mul_mono_scaled(&mf, &fc.recip())
        .sub(&g.mul_mono_scaled(&mg, &gc.recip()))
}

/// Full normal form: every term of the result is irreducible by the basis.
pub fn normal_form(p: &Poly, basis: &[Poly]) -> Poly {
    let mut rem: Vec<(Monomial, BigRational)> = vec![];
    let mut p = p.clone();
    'outer: while !p.is_zero() {
        let (pm, pc) = p.lt().unwrap();
        for g in basis {
            if let Some(gm) = g.lm() {
                if gm.divides(pm) {
                    let t = pm.checked_div(gm).unwrap();
                    let c = pc / g.lc().unwrap();
                    p = p.sub(&g.mul_mono_scaled(&t, &c));
                    continue 'outer;
                }
            }
        }
        rem.push((pm.clone(), pc.clone()));
        p = p.tail();
    }
    Poly::from_terms(
        basis
            .first()
            .map(|g| g.space())
            .unwrap_or_else(|| p.space()),
        basis
            .first()
            .map(|g| g.order())
            .unwrap_or_else(|| p.order()),
        rem,
    )
}

/// Interreduce a Gröbner basis into the unique reduced monic form,
/// sorted by descending leading monomial.
pub fn reduce_basis(mut basis: Vec<Poly>) -> Vec<Poly> {
    basis.retain(|p| !p.is_zero());
    if basis.is_empty() {
        return basis;
    }
    // Drop members whose leading monomial is divisible by another's.
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let mi = basis[i].lm().unwrap();
            let mj = basis[j].lm().unwrap();
            if mj.divides(mi) && (mj != mi || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut kept: Vec<Poly> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p.monic())
        .collect();
    // Tail-reduce each member against the others.
    for i in 0..kept.len() {
        let me = kept[i].clone();
        let others: Vec<Poly> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        kept[i] = normal_form(&me, &others).monic();
    }
    let order = kept[0].order().clone();
    kept.sort_by(|a, b| order.cmp(b.lm().unwrap(), a.lm().unwrap()));
    kept
}

/// Buchberger's algorithm with the coprimality and chain criteria and a
/// smallest-lcm selection strategy. Returns the reduced monic basis.
pub fn buchberger(gens: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.monic())
        .collect();
    if basis.is_empty() {
        return vec![];
    }
    let order = basis[0].order().clone();
    if basis.iter().any(|p| p.is_constant()) {
        return vec![Poly::one(basis[0].space(), &order)];
    }
    let mut pairs: Vec<(usize, usize)> = vec![];
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.push((i, j));
        }
    }
    let mut treated: HashSet<(usize, usize)> = HashSet::new();
    while !pairs.is_empty() {
        // Normal strategy: treat the pair with the smallest lcm first.
        let mut best = 0;
        let mut best_lcm = basis[pairs[0].0]
            .lm()
            .unwrap()
            .lcm(basis[pairs[0].1].lm().unwrap());
        for (k, &(i, j)) in pairs.iter().enumerate().skip(1) {
            let l = basis[i].lm().unwrap().lcm(basis[j].lm().unwrap());
            if order.cmp(&l, &best_lcm) == Ordering::Less {
                best = k;
                best_lcm = l;
            }
        }
        let (i, j) = pairs.swap_remove(best);
        treated.insert((i, j));

        let mi = basis[i].lm().unwrap();
        let mj = basis[j].lm().unwrap();
        // Coprimality criterion.
        if mi.mul(mj) == best_lcm {
            continue;
        }
        // Chain criterion.
        let mut skip = false;
        for (k, b) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            if b.lm().unwrap().divides(&best_lcm)
                && treated.contains(&(k.min(i), k.max(i)))
                && treated.contains(&(k.min(j), k.max(j)))
            {
                skip = true;
                break;
            }
        }
        if skip {
            continue;
        }

        let s = spoly(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![Poly::one(basis[0].space(), &order)];
        }
        let r = r.monic();
        let new = basis.len();
        for k in 0..new {
            pairs.push((k, new));
        }
        basis.push(r);
    }
    reduce_basis(basis)
}

/// Deterministic total order on polynomials sharing a term order: compare
/// term by term (monomial under the order, then coefficient), shorter
/// prefixes first. Used to sort ideals and tree children canonically.
pub fn cmp_polys_structural(order: &TermOrder, a: &Poly, b: &Poly) -> Ordering {
    let (ta, tb) = (a.terms(), b.terms());
    for k in 0..ta.len().min(tb.len()) {
        // Larger monomials first, so e.g. a + 1 sorts before b + 1.
        match order.cmp(&tb[k].0, &ta[k].0) {
            Ordering::Equal => {}
            o => return o,
        }
        match ta[k].1.cmp(&tb[k].1) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    ta.len().cmp(&tb.len())
}

/// An ideal represented by its eagerly computed reduced monic Gröbner basis.
#[derive(Debug, Clone)]
pub struct Ideal {
    space: Arc<VarSpace>,
    order: Arc<TermOrder>,
    gb: Vec<Poly>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Ideal) -> bool {
        self.gb == other.gb
    }
}
impl Eq for Ideal {}

impl std::hash::Hash for Ideal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for p in &self.gb {
            p.hash(state);
        }
    }
}

impl Ideal {
    /// Constructor; computes the reduced Gröbner basis under `order`.
    pub fn new(space: &Arc<VarSpace>, order: &Arc<TermOrder>, gens: &[Poly]) -> Ideal {
        let gens: Vec<Poly> = gens
            .iter()
            .map(|p| {
                if p.order() == order {
                    p.clone()
                } else {
                    p.resort(order)
                }
            })
            .collect();
        Ideal {
            space: space.clone(),
            order: order.clone(),
            gb: buchberger(&gens),
        }
    }

    pub fn zero(space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> Ideal {
        Ideal {
            space: space.clone(),
            order: order.clone(),
            gb: vec![],
        }
    }

    pub fn unit(space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> Ideal {
        Ideal {
            space: space.clone(),
            order: order.clone(),
            gb: vec![Poly::one(space, order)],
        }
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }
    pub fn order(&self) -> &Arc<TermOrder> {
        &self.order
    }
    pub fn gb(&self) -> &[Poly] {
        &self.gb
    }
    pub fn is_zero(&self) -> bool {
        self.gb.is_empty()
    }
    pub fn is_unit(&self) -> bool {
        self.gb.len() == 1 && self.gb[0].is_one()
    }

    /// Normal form of `p` modulo this ideal (resorted into the ideal's
    /// order first if needed; the result uses the ideal's order).
    pub fn nf(&self, p: &Poly) -> Poly {
        let p = if p.order() == &self.order {
            p.clone()
        } else {
            p.resort(&self.order)
        };
        if self.gb.is_empty() {
            return p;
        }
        normal_form(&p, &self.gb)
    }

    pub fn contains_poly(&self, p: &Poly) -> bool {
        self.nf(p).is_zero()
    }

    /// Is `other ⊆ self` as ideals (equivalently V(self) ⊆ V(other))?
    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gb.iter().all(|p| self.contains_poly(p))
    }

    /// Ideal sum, as a fresh reduced basis.
    pub fn plus(&self, extra: &[Poly]) -> Ideal {
        let mut gens = self.gb.clone();
        for p in extra {
            gens.push(if p.order() == &self.order {
                p.clone()
            } else {
                p.resort(&self.order)
            });
        }
        Ideal {
            space: self.space.clone(),
            order: self.order.clone(),
            gb: buchberger(&gens),
        }
    }

    pub fn plus_ideal(&self, other: &Ideal) -> Ideal {
        self.plus(&other.gb)
    }

    /// Eliminate one trailing auxiliary variable from generators given in
    /// the extended space, projecting the result back to this ideal's space.
    fn eliminate_aux(&self, ext_gens: Vec<Poly>, t: usize) -> Ideal {
        let gb_ext = buchberger(&ext_gens);
        let kept: Vec<Poly> = gb_ext
            .iter()
            .filter(|p| p.degree_in_var(t) == 0)
            .map(|p| {
                p.try_project(&self.space, &self.order)
                    .expect("projection after elimination")
            })
            .collect();
        Ideal {
            space: self.space.clone(),
            order: self.order.clone(),
            gb: reduce_basis(kept),
        }
    }

    /// Ideal intersection via the one-tag elimination.
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        if self.is_zero() || other.is_zero() {
            return Ideal::zero(&self.space, &self.order);
        }
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let ext_space = self.space.extended(1);
        let t = self.space.nvars();
        let ext_order = self.order.with_leading_aux(t, t + 1);
        let tv = Poly::var(&ext_space, &ext_order, t);
        let one = Poly::one(&ext_space, &ext_order);
        let omt = one.sub(&tv);
        let mut gens = vec![];
        for p in &self.gb {
            gens.push(p.embed(&ext_space, &ext_order).mul(&tv));
        }
        for p in &other.gb {
            gens.push(p.embed(&ext_space, &ext_order).mul(&omt));
        }
        self.eliminate_aux(gens, t)
    }

    /// Saturation `self : w^∞`.
    pub fn saturate_poly(&self, w: &Poly) -> Ideal {
        if w.is_zero() {
            return Ideal::unit(&self.space, &self.order);
        }
        let ext_space = self.space.extended(1);
        let t = self.space.nvars();
        let ext_order = self.order.with_leading_aux(t, t + 1);
        let tv = Poly::var(&ext_space, &ext_order, t);
        let one = Poly::one(&ext_space, &ext_order);
        let mut gens: Vec<Poly> = self
            .gb
            .iter()
            .map(|p| p.embed(&ext_space, &ext_order))
            .collect();
        gens.push(one.sub(&tv.mul(&w.embed(&ext_space, &ext_order))));
        self.eliminate_aux(gens, t)
    }

    /// Iterated saturation by each polynomial in turn.
    pub fn saturate_many(&self, ws: &[Poly]) -> Ideal {
        let mut acc = self.clone();
        for w in ws {
            acc = acc.saturate_poly(w);
            if acc.is_unit() {
                break;
            }
        }
        acc
    }

    /// Membership in the radical, by the auxiliary-variable trick:
    /// `p ∈ √I  ⟺  1 ∈ I + ⟨1 − t·p⟩`.
    pub fn radical_member(&self, p: &Poly) -> bool {
        if p.is_zero() {
            return true;
        }
        if p.is_constant() {
            return true; // nonzero constants are units
        }
        let ext_space = self.space.extended(1);
        let t = self.space.nvars();
        let ext_order = self.order.with_leading_aux(t, t + 1);
        let tv = Poly::var(&ext_space, &ext_order, t);
        let one = Poly::one(&ext_space, &ext_order);
        let mut gens: Vec<Poly> = self
            .gb
            .iter()
            .map(|g| g.embed(&ext_space, &ext_order))
            .collect();
        gens.push(one.sub(&tv.mul(&p.embed(&ext_space, &ext_order))));
        let gb = buchberger(&gens);
        gb.len() == 1 && gb[0].is_one()
    }

    /// For an ideal in the parameters only: do all basis elements vanish at
    /// the given parameter point?
    pub fn vanishes_at(&self, vals: &[BigRational]) -> bool {
        self.gb.iter().all(|p| {
            debug_assert!(p.is_param_only());
            p.evaluate_params(vals).is_zero()
        })
    }

    /// Deterministic total order on ideals sharing a term order, via the
    /// structural order on their reduced bases.
    pub fn cmp_structural(&self, other: &Ideal) -> Ordering {
        let (ga, gb) = (self.gb(), other.gb());
        for k in 0..ga.len().min(gb.len()) {
            match cmp_polys_structural(&self.order, &ga[k], &gb[k]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        ga.len().cmp(&gb.len())
    }

    /// Reduce, modulo this parameter ideal, each parameter-polynomial
    /// coefficient of `p` (a polynomial in main variables and parameters).
    /// The result is sorted under `p`'s order.
    pub fn coeff_nf(&self, p: &Poly) -> Poly {
        if self.gb.is_empty() {
            return p.clone();
        }
        let mut acc = Poly::zero(p.space(), p.order());
        for mx in p.x_monomials() {
            let c = p.coeff_of_x_monomial(&mx);
            let cr = self.nf(&c).resort(p.order());
            acc = acc.add(&cr.mul_mono_scaled(&mx, &BigRational::one()));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, OrderKind, VarSpace};

    fn xy_space() -> (Arc<VarSpace>, Arc<TermOrder>) {
        let space = VarSpace::new(&["x", "y"], &[]);
        let order = TermOrder::two_block(OrderKind::Lex, 2, OrderKind::Lex, 0);
        (space, order)
    }

    fn param_space() -> (Arc<VarSpace>, Arc<TermOrder>) {
        // Parameter-ring computations: no main variables in use.
        let space = VarSpace::new(&[], &["a", "b", "c"]);
        let order = TermOrder::param_leading(OrderKind::Lex, 0, 3);
        (space, order)
    }

    #[test]
    fn reduced_basis_of_circle_and_line() {
        let (space, order) = xy_space();
        let p = |s: &str| parse_poly(s, &space, &order).unwrap();
        let gb = buchberger(&[p("x^2 + y^2 - 1"), p("x - y")]);
        assert_eq!(gb, vec![p("x - y"), p("y^2 - 1/2")]);
    }

    #[test]
    fn normal_form_reduces_fully() {
        let (space, order) = xy_space();
        let p = |s: &str| parse_poly(s, &space, &order).unwrap();
        let basis = vec![p("x - y")];
        assert_eq!(normal_form(&p("x^2*y"), &basis), p("y^3"));
        assert!(normal_form(&p("x^2 - y^2"), &basis).is_zero());
    }

    #[test]
    fn unit_ideal_detected() {
        let (space, order) = xy_space();
        let p = |s: &str| parse_poly(s, &space, &order).unwrap();
        let i = Ideal::new(&space, &order, &[p("x"), p("x + 1")]);
        assert!(i.is_unit());
    }

    #[test]
    fn ideal_equality_ignores_generator_presentation() {
        let (space, order) = xy_space();
        let p = |s: &str| parse_poly(s, &space, &order).unwrap();
        let i = Ideal::new(&space, &order, &[p("x^2 + y^2 - 1"), p("x - y")]);
        let j = Ideal::new(&space, &order, &[p("x - y"), p("2*y^2 - 1"), p("0")]);
        assert_eq!(i, j);
        assert!(i.contains_ideal(&j) && j.contains_ideal(&i));
    }

    #[test]
    fn intersection_of_principal_ideals() {
        let (space, order) = xy_space();
        let p = |s: &str| parse_poly(s, &space, &order).unwrap();
        let ix = Ideal::new(&space, &order, &[p("x")]);
        let iy = Ideal::new(&space, &order, &[p("y")]);
        let got = ix.intersect(&iy);
        assert_eq!(got.gb(), &[p("x*y")]);
        // Intersection with the whole ring and the zero ideal.
        assert_eq!(ix.intersect(&Ideal::unit(&space, &order)), ix);
        assert!(ix.intersect(&Ideal::zero(&space, &order)).is_zero());
    }

    #[test]
    fn saturation_removes_a_component() {
        let (space, order) = param_space();
        let p = |s: &str| parse_poly(s, &space, &order).unwrap();
        let n = Ideal::new(&space, &order, &[p("a*b")]);
        let sat = n.saturate_poly(&p("a"));
        assert_eq!(sat.gb(), &[p("b")]);
        let sq = Ideal::new(&space, &order, &[p("a^2")]);
        assert!(sq.saturate_poly(&p("a")).is_unit());
        assert!(sq.saturate_poly(&p("0")).is_unit());
    }

    #[test]
    fn radical_membership() {
        let (space, order) = param_space();
        let p = |s: &str| parse_poly(s, &space, &order).unwrap();
        let sq = Ideal::new(&space, &order, &[p("a^2")]);
        assert!(sq.radical_member(&p("a")));
        assert!(!sq.radical_member(&p("b")));
        assert!(sq.radical_member(&p("7")));
        assert!(sq.radical_member(&p("0")));
        // A product lies in the radical when one factor does.
        let n = Ideal::new(&space, &order, &[p("b"), p("c")]);
        assert!(n.radical_member(&p("b*c")));
        assert!(n.radical_member(&p("c*a")));
        assert!(!n.radical_member(&p("a + 1")));
    }

    #[test]
    fn coefficient_normal_form_in_mixed_ring() {
        let space = VarSpace::new(&["x", "y"], &["b", "c", "d"]);
        let order = TermOrder::two_block(OrderKind::Lex, 2, OrderKind::Lex, 3);
        let aorder = TermOrder::param_leading(OrderKind::Lex, 2, 3);
        let p = |s: &str| parse_poly(s, &space, &order).unwrap();
        let f = p("x^2 + b*y^2 + 2*c*x*y + d*x");

        let nb = Ideal::new(&space, &aorder, &[p("b")]);
        assert_eq!(nb.coeff_nf(&f), p("x^2 + 2*c*x*y + d*x"));

        let nbc2 = Ideal::new(&space, &aorder, &[p("b - c^2")]);
        assert_eq!(nbc2.coeff_nf(&f), p("x^2 + c^2*y^2 + 2*c*x*y + d*x"));

        let zero = Ideal::zero(&space, &aorder);
        assert_eq!(zero.coeff_nf(&f), f);
    }

    #[test]
    fn vanishing_at_parameter_points() {
        let space = VarSpace::new(&["x", "y"], &["b", "c", "d"]);
        let aorder = TermOrder::param_leading(OrderKind::Lex, 2, 3);
        let two_block = TermOrder::two_block(OrderKind::Lex, 2, OrderKind::Lex, 3);
        let p = |s: &str| parse_poly(s, &space, &two_block).unwrap();
        let n = Ideal::new(&space, &aorder, &[p("b"), p("c*d")]);
        let q = |v: i64| BigRational::from_integer(v.into());
        assert!(n.vanishes_at(&[q(0), q(0), q(5)]));
        assert!(n.vanishes_at(&[q(0), q(3), q(0)]));
        assert!(!n.vanishes_at(&[q(1), q(0), q(0)]));
        assert!(!n.vanishes_at(&[q(0), q(2), q(3)]));
    }
}
