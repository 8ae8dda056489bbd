//! Multivariate factorization over Q, sized for the polynomials that arise
//! as leading coefficients and radical generators in parametric Gröbner
//! computations.
//!
//! Strategy, in dispatch order per squarefree input:
//! 1. trial division by the cache of already-known irreducibles,
//! 2. content splits with respect to each variable,
//! 3. a complete univariate engine (divisor-of-values search with budgets),
//! 4. a "linear in some variable and primitive there" irreducibility
//!    certificate,
//! 5. an exact treatment of arbitrary polynomials of total degree 2 via
//!    congruence diagonalization of the associated symmetric matrix
//!    (rank ≥ 3 certifies irreducibility; rank 2 splits exactly when
//!    −λ₂/λ₁ is a rational square),
//! 6. Kronecker substitution to one variable plus factor recombination.
//!
//! Every budget overflow degrades to `certified: false` on the result —
//! the returned factors always multiply back to the input, but one of them
//! might then be further reducible.

use super::upoly::{self, UPoly};
use crate::groebner::cmp_polys_structural;
use crate::polyring::{content_in_var, squarefree_part, Monomial, Poly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `p = unit · Π factorᵢ^multᵢ` with the factors scalar-normalized
/// (integer-primitive, positive leading coefficient) and pairwise distinct.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub unit: BigRational,
    pub factors: Vec<(Poly, u32)>,
    pub certified: bool,
}

impl Factorization {
    /// The product `unit · Π factorᵢ^multᵢ` (for verification).
    pub fn expand(&self, like: &Poly) -> Poly {
        let mut acc = Poly::constant(like.space(), like.order(), self.unit.clone());
        for (f, e) in &self.factors {
            acc = acc.mul(&f.pow(*e));
        }
        acc
    }
}

pub struct Factorizer {
    /// Candidate budget for each divisor-tuple search.
    candidate_budget: usize,
    /// Maximum dense length of a Kronecker substitution image.
    kronecker_cap: u64,
    /// Known irreducible polynomials, tried by division first.
    cache: Vec<Poly>,
    /// Set when any factorization in this run was not certified complete.
    pub uncertified_seen: bool,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer::new()
    }
}

impl Factorizer {
    pub fn new() -> Factorizer {
        Factorizer {
            candidate_budget: 200_000,
            kronecker_cap: 1 << 16,
            cache: vec![],
            uncertified_seen: false,
        }
    }

    pub fn with_budget(candidate_budget: usize, kronecker_cap: u64) -> Factorizer {
        Factorizer {
            candidate_budget,
            kronecker_cap,
            cache: vec![],
            uncertified_seen: false,
        }
    }

    /// Record a polynomial known to be irreducible so later factorizations
    /// can find it by trial division.
    pub fn note_irreducible(&mut self, p: &Poly) {
        let n = p.normalized_primitive();
        if n.is_constant() || self.cache.contains(&n) || self.cache.len() >= 512 {
            return;
        }
        self.cache.push(n);
    }

    /// Factor a nonzero polynomial into irreducibles over Q.
    pub fn factor(&mut self, p: &Poly) -> Factorization {
        assert!(!p.is_zero(), "cannot factor the zero polynomial");
        let np = p.normalized_primitive();
        if np.is_constant() {
            return Factorization {
                unit: p.lc().unwrap().clone(),
                factors: vec![],
                certified: true,
            };
        }
        let sf = squarefree_part(&np);
        let (irr, cert0) = self.factor_squarefree(&sf);
        let mut certified = cert0;
        let mut factors: Vec<(Poly, u32)> = vec![];
        let mut work = np.clone();
        for f in irr {
            let mut e = 0u32;
            while let Some(r) = work.div_exact(&f) {
                work = r;
                e += 1;
            }
            if e > 0 {
                merge_factor(&mut factors, f, e);
            }
        }
        if !work.is_constant() {
            // Only reachable via uncertified partial covers; finish honestly.
            if work == np && factors.is_empty() {
                merge_factor(&mut factors, work.normalized_primitive(), 1);
                certified = false;
            } else {
                let sub = self.factor(&work);
                certified &= sub.certified;
                for (f, e) in sub.factors {
                    merge_factor(&mut factors, f, e);
                }
            }
        }
        let order = np.order().clone();
        factors.sort_by(|a, b| cmp_polys_structural(&order, &a.0, &b.0));
        let mut prod_lc = BigRational::one();
        for (f, e) in &factors {
            for _ in 0..*e {
                prod_lc *= f.lc().unwrap();
            }
        }
        let unit = p.lc().unwrap() / prod_lc;
        debug_assert_eq!(
            Factorization {
                unit: unit.clone(),
                factors: factors.clone(),
                certified: true
            }
            .expand(p),
            *p
        );
        if !certified {
            self.uncertified_seen = true;
        }
        Factorization {
            unit,
            factors,
            certified,
        }
    }

    /// Irreducible factors (with repetition collapsed away by the caller)
    /// of a squarefree scalar-normalized polynomial.
    fn factor_squarefree(&mut self, q0: &Poly) -> (Vec<Poly>, bool) {
        let mut q = q0.normalized_primitive();
        let mut out: Vec<Poly> = vec![];
        if q.is_constant() {
            return (out, true);
        }

        // 1. Trial division by known irreducibles. Cache entries may have
        // been recorded under another term order; align them first.
        let snapshot = self.cache.clone();
        for f0 in &snapshot {
            if f0.space() != q.space() {
                continue;
            }
            let f = if f0.order() == q.order() {
                f0.clone()
            } else {
                f0.resort(q.order())
            };
            while !q.is_constant() {
                match q.div_exact(&f) {
                    Some(r) => {
                        out.push(f.clone());
                        q = r.normalized_primitive();
                    }
                    None => break,
                }
            }
        }
        if q.is_constant() {
            return (out, true);
        }

        // 2. Content split with respect to some variable.
        for v in q.vars_present() {
            let c = content_in_var(&q, v);
            if !c.is_constant() {
                let rest = q.div_exact(&c).expect("content divides");
                let (f1, c1) = self.factor_squarefree(&c);
                let (f2, c2) = self.factor_squarefree(&rest);
                out.extend(f1);
                out.extend(f2);
                return (out, c1 && c2);
            }
        }

        let vars = q.vars_present();

        // 3. One variable: the univariate engine is complete within budget.
        if vars.len() == 1 {
            let v = vars[0];
            let (u, _) = poly_to_upoly(&q, v);
            let r = upoly::factor_upoly(&u, self.candidate_budget);
            for f in &r.factors {
                let fp = upoly_to_poly(f, &q, v).normalized_primitive();
                if r.certified {
                    self.note_irreducible(&fp);
                }
                out.push(fp);
            }
            return (out, r.certified);
        }

        // 4. Linear in some variable with trivial content there.
        if vars.iter().any(|&v| q.degree_in_var(v) == 1) {
            self.note_irreducible(&q);
            out.push(q);
            return (out, true);
        }

        // 5. Total degree 2: exact via the symmetric-matrix method.
        if q.total_degree() == 2 {
            match quadratic_split(&q) {
                QuadOutcome::Irreducible => {
                    self.note_irreducible(&q);
                    out.push(q);
                    return (out, true);
                }
                QuadOutcome::Split(parts) => {
                    let mut cert = true;
                    for part in parts {
                        let (fs, c) = self.factor_squarefree(&part);
                        out.extend(fs);
                        cert &= c;
                    }
                    return (out, cert);
                }
                QuadOutcome::NotApplicable => {}
            }
        }

        // 6. Kronecker substitution with recombination.
        let (fs, cert) = self.kronecker(&q);
        out.extend(fs);
        (out, cert)
    }

    fn kronecker(&mut self, q: &Poly) -> (Vec<Poly>, bool) {
        let vars = q.vars_present();
        let degs: Vec<u32> = vars.iter().map(|&v| q.degree_in_var(v)).collect();
        let mut strides: Vec<u64> = vec![1];
        let mut total: u64 = 1;
        for (i, &d) in degs.iter().enumerate() {
            total = total.saturating_mul(d as u64 + 1);
            if total > self.kronecker_cap {
                self.uncertified_seen = true;
                return (vec![q.clone()], false);
            }
            if i + 1 < degs.len() {
                strides.push(total);
            }
        }
        // Build the dense univariate image.
        let mut image = vec![BigInt::zero(); total as usize];
        for (m, c) in q.terms() {
            debug_assert!(c.denom().is_one());
            let mut idx: u64 = 0;
            for (i, &v) in vars.iter().enumerate() {
                idx += m.deg_of(v) as u64 * strides[i];
            }
            image[idx as usize] += c.numer();
        }
        let image = upoly::trim(image);
        let r = upoly::factor_upoly(&image, self.candidate_budget);
        let n = r.factors.len();
        if n > 16 {
            self.uncertified_seen = true;
            return (vec![q.clone()], false);
        }
        // Recombine: try subsets ascending by size; a decodable divisor
        // found at minimal size is irreducible (given a certified image).
        let mut masks: Vec<u32> = (1u32..(1 << n)).collect();
        masks.sort_by_key(|m| m.count_ones());
        let mut remaining: u32 = (1 << n) - 1;
        let mut q_rem = q.clone();
        let mut out = vec![];
        'outer: loop {
            if q_rem.is_constant() || remaining == 0 {
                break;
            }
            for &mask in &masks {
                if mask & !remaining != 0 || mask == remaining {
                    continue;
                }
                if let Some(f) = self.try_candidate(q, &q_rem, mask, &r.factors, &vars, &strides, &degs) {
                    q_rem = q_rem.div_exact(&f).expect("candidate divides");
                    if r.certified {
                        self.note_irreducible(&f);
                    }
                    out.push(f);
                    remaining &= !mask;
                    continue 'outer;
                }
            }
            // No proper subset works: the remainder is irreducible
            // (or the image factorization was incomplete).
            let f = q_rem.normalized_primitive();
            if r.certified {
                self.note_irreducible(&f);
            }
            out.push(f);
            q_rem = Poly::one(q.space(), q.order());
            break;
        }
        debug_assert!(q_rem.is_constant());
        if !r.certified {
            self.uncertified_seen = true;
        }
        (out, r.certified)
    }

    #[allow(clippy::too_many_arguments)]
    fn try_candidate(
        &self,
        q: &Poly,
        q_rem: &Poly,
        mask: u32,
        ufactors: &[UPoly],
        vars: &[usize],
        strides: &[u64],
        degs: &[u32],
    ) -> Option<Poly> {
        let mut prod: UPoly = vec![BigInt::one()];
        for (i, f) in ufactors.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod = upoly::mul(&prod, f);
            }
        }
        // Decode digits back into a multivariate candidate.
        let nvars = q.space().nvars();
        let mut terms: Vec<(Monomial, BigRational)> = vec![];
        for (idx, c) in prod.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut rest = idx as u64;
            let mut exps = vec![0u32; nvars];
            for i in (0..vars.len()).rev() {
                let e = rest / strides[i];
                rest %= strides[i];
                if e > degs[i] as u64 {
                    return None;
                }
                exps[vars[i]] = e as u32;
            }
            terms.push((
                Monomial::from_exps(exps),
                BigRational::from_integer(c.clone()),
            ));
        }
        let cand = Poly::from_terms(q.space(), q.order(), terms).normalized_primitive();
        if cand.is_constant() {
            return None;
        }
        q_rem.div_exact(&cand)?;
        Some(cand)
    }
}

fn merge_factor(factors: &mut Vec<(Poly, u32)>, f: Poly, e: u32) {
    for (g, m) in factors.iter_mut() {
        if *g == f {
            *m += e;
            return;
        }
    }
    factors.push((f, e));
}

enum QuadOutcome {
    Split(Vec<Poly>),
    Irreducible,
    NotApplicable,
}

/// Exact factorization analysis for polynomials of total degree 2 (not
/// necessarily homogeneous): write q as a quadratic form on (variables, 1)
/// and diagonalize by completing squares. A product of two degree-≤1
/// polynomials is a rank-≤2 form, so rank ≥ 3 certifies irreducibility;
/// rank 2 splits over Q exactly when −λ₂/λ₁ is a square in Q.
fn quadratic_split(q: &Poly) -> QuadOutcome {
    let vars = q.vars_present();
    let n = vars.len();
    let dim = n + 1; // last slot is the constant coordinate
    let mut mat = vec![vec![BigRational::zero(); dim]; dim];
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for (m, c) in q.terms() {
        let mut present: Vec<(usize, u32)> = vec![];
        for (slot, &v) in vars.iter().enumerate() {
            let e = m.deg_of(v);
            if e > 0 {
                present.push((slot, e));
            }
        }
        match present.as_slice() {
            [] => mat[n][n] += c,
            [(i, 1)] => {
                let add = c * &half;
                mat[*i][n] += &add;
                mat[n][*i] += &add;
            }
            [(i, 2)] => mat[*i][*i] += c,
            [(i, 1), (j, 1)] => {
                let add = c * &half;
                mat[*i][*j] += &add;
                mat[*j][*i] += &add;
            }
            _ => return QuadOutcome::NotApplicable,
        }
    }

    // Completing squares: q = Σ λ_t (u_t · z)², z = (vars…, 1).
    let mut pieces: Vec<(BigRational, Vec<BigRational>)> = vec![];
    loop {
        if let Some(k) = (0..dim).find(|&k| !mat[k][k].is_zero()) {
            let lam = mat[k][k].clone();
            let u: Vec<BigRational> = (0..dim).map(|j| &mat[k][j] / &lam).collect();
            for i in 0..dim {
                for j in 0..dim {
                    let sub = &lam * &u[i] * &u[j];
                    mat[i][j] -= sub;
                }
            }
            pieces.push((lam, u));
        } else {
            let mut pivot = None;
            'find: for i in 0..dim {
                for j in (i + 1)..dim {
                    if !mat[i][j].is_zero() {
                        pivot = Some((i, j));
                        break 'find;
                    }
                }
            }
            let Some((i, j)) = pivot else { break };
            let a = mat[i][j].clone();
            let mut u1 = vec![BigRational::zero(); dim];
            let mut u2 = vec![BigRational::zero(); dim];
            for t in 0..dim {
                if t == i || t == j {
                    continue;
                }
                // Rows with positions i, j zeroed.
                u1[t] = &mat[i][t] + &mat[j][t];
                u2[t] = &mat[j][t] - &mat[i][t];
            }
            u1[i] = a.clone();
            u1[j] = a.clone();
            u2[i] = a.clone();
            u2[j] = -a.clone();
            let lam1 = BigRational::new(BigInt::one(), BigInt::from(2)) / &a;
            let lam2 = -lam1.clone();
            for (lam, u) in [(lam1.clone(), u1.clone()), (lam2.clone(), u2.clone())] {
                for r in 0..dim {
                    for s in 0..dim {
                        let sub = &lam * &u[r] * &u[s];
                        mat[r][s] -= sub;
                    }
                }
            }
            pieces.push((lam1, u1));
            pieces.push((lam2, u2));
        }
    }

    let form_to_poly = |u: &[BigRational]| -> Poly {
        let mut acc = Poly::constant(q.space(), q.order(), u[n].clone());
        for (slot, &v) in vars.iter().enumerate() {
            if !u[slot].is_zero() {
                let term = Poly::var(q.space(), q.order(), v).mul_scalar(&u[slot]);
                acc = acc.add(&term);
            }
        }
        acc
    };

    match pieces.len() {
        0 | 1 => QuadOutcome::NotApplicable,
        2 => {
            let (l1, u1) = &pieces[0];
            let (l2, u2) = &pieces[1];
            let ratio = -(l2 / l1);
            if ratio.is_positive() {
                let sn = upoly::perfect_square(ratio.numer());
                let sd = upoly::perfect_square(ratio.denom());
                if let (Some(sn), Some(sd)) = (sn, sd) {
                    let s = BigRational::new(sn, sd);
                    let p1 = form_to_poly(u1);
                    let p2 = form_to_poly(u2);
                    let f = p1.add(&p2.mul_scalar(&s));
                    let g = p1.sub(&p2.mul_scalar(&s)).mul_scalar(l1);
                    debug_assert_eq!(f.mul(&g), *q);
                    return QuadOutcome::Split(vec![
                        f.normalized_primitive(),
                        g.normalized_primitive(),
                    ]);
                }
            }
            QuadOutcome::Irreducible
        }
        _ => QuadOutcome::Irreducible,
    }
}

fn poly_to_upoly(p: &Poly, v: usize) -> (UPoly, BigRational) {
    let np = p.normalized_primitive();
    let d = np.degree_in_var(v);
    let mut out = vec![BigInt::zero(); d as usize + 1];
    for (m, c) in np.terms() {
        debug_assert!(
            m.deg_of(v) as u64 == m.degree(),
            "poly_to_upoly requires a univariate polynomial"
        );
        out[m.deg_of(v) as usize] += c.numer();
    }
    let unit = p.lc().unwrap() / np.lc().unwrap();
    (upoly::trim(out), unit)
}

fn upoly_to_poly(u: &UPoly, like: &Poly, v: usize) -> Poly {
    let nvars = like.space().nvars();
    let terms: Vec<(Monomial, BigRational)> = u
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| {
            (
                Monomial::var(nvars, v, e as u32),
                BigRational::from_integer(c.clone()),
            )
        })
        .collect();
    Poly::from_terms(like.space(), like.order(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, OrderKind, TermOrder, VarSpace};
    use std::sync::Arc;

    fn setup4() -> (Arc<VarSpace>, Arc<TermOrder>) {
        let space = VarSpace::new(&[], &["a", "b", "c", "d"]);
        let order = TermOrder::param_leading(OrderKind::Lex, 0, 4);
        (space, order)
    }

    fn names(f: &Factorization) -> Vec<(String, u32)> {
        f.factors
            .iter()
            .map(|(p, e)| (p.to_string(), *e))
            .collect()
    }

    #[test]
    fn splits_difference_of_squares() {
        let (space, order) = setup4();
        let p = parse_poly("b^2 - c^2", &space, &order).unwrap();
        let mut fz = Factorizer::new();
        let f = fz.factor(&p);
        assert!(f.certified);
        let mut got = names(&f);
        got.sort();
        assert_eq!(
            got,
            vec![("b + c".to_string(), 1), ("b - c".to_string(), 1)]
        );
    }

    #[test]
    fn certifies_quadratic_irreducibles() {
        let (space, order) = setup4();
        let mut fz = Factorizer::new();
        for s in ["b - c^2", "a*d - b*c", "(a - c)^2 + (b - d)^2", "c^2 - 4*b"] {
            let p = parse_poly(s, &space, &order).unwrap();
            let f = fz.factor(&p);
            assert!(f.certified, "{s} should certify");
            assert_eq!(f.factors.len(), 1, "{s} should be irreducible");
            assert_eq!(f.factors[0].1, 1);
        }
    }

    #[test]
    fn multiplicities_and_units() {
        let (space, order) = setup4();
        let p = parse_poly("6*b^3*c^2", &space, &order).unwrap();
        let mut fz = Factorizer::new();
        let f = fz.factor(&p);
        assert!(f.certified);
        assert_eq!(f.unit, BigRational::from_integer(6.into()));
        let mut got = names(&f);
        got.sort();
        assert_eq!(got, vec![("b".to_string(), 3), ("c".to_string(), 2)]);
        assert_eq!(f.expand(&p), p);
    }

    #[test]
    fn factors_univariate_inside_parameter_ring() {
        let (space, order) = setup4();
        let p = parse_poly("c^3 - c", &space, &order).unwrap();
        let mut fz = Factorizer::new();
        let f = fz.factor(&p);
        assert!(f.certified);
        assert_eq!(f.factors.len(), 3);
        assert_eq!(f.expand(&p), p);
    }

    #[test]
    fn kronecker_recombination_recovers_factors() {
        let (space, order) = setup4();
        let f1 = parse_poly("b + c + 1", &space, &order).unwrap();
        let f2 = parse_poly("b*c - 2", &space, &order).unwrap();
        let p = f1.mul(&f2);
        let mut fz = Factorizer::new();
        let f = fz.factor(&p);
        assert!(f.certified);
        let mut got: Vec<String> = f.factors.iter().map(|(p, _)| p.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["b + c + 1".to_string(), "b*c - 2".to_string()]);
    }

    #[test]
    fn cache_short_circuits_known_irreducibles() {
        let (space, order) = setup4();
        let q = parse_poly("(a - c)^2 + (b - d)^2", &space, &order).unwrap();
        let lin = parse_poly("a + b + c + d + 1", &space, &order).unwrap();
        let mut fz = Factorizer::new();
        fz.note_irreducible(&q);
        let f = fz.factor(&q.mul(&lin));
        assert!(f.certified);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(&q.mul(&lin)), q.mul(&lin));
    }

    #[test]
    fn degree_one_total_is_irreducible() {
        let (space, order) = setup4();
        let p = parse_poly("2*a + 4*b + 6", &space, &order).unwrap();
        let mut fz = Factorizer::new();
        let f = fz.factor(&p);
        assert!(f.certified);
        assert_eq!(names(&f), vec![("a + 2*b + 3".to_string(), 1)]);
        assert_eq!(f.unit, BigRational::from_integer(2.into()));
    }
}
