//! Minimal primes of an ideal in a polynomial ring over Q.
//!
//! The decomposition recursion interleaves three moves:
//!
//! 1. **Factor split** — if a reduced-basis generator factors, the variety
//!    splits along the factors: minPrimes(J) = ∪ᵢ minPrimes(J + ⟨fᵢ⟩).
//!    Each branch ideal strictly contains J (no proper factor of a reduced
//!    basis member can already lie in the ideal), so this terminates.
//! 2. **Variable elimination** — a generator `A·v + B` that is linear in
//!    `v` with constant coefficient `A` pins `v = −B/A`; substituting into
//!    the remaining generators removes `v` entirely, and every minimal
//!    prime of the smaller ideal pulls back by re-adjoining the generator.
//! 3. **Base certificates** — the zero ideal and principal ideals on a
//!    certified-irreducible generator are prime. Anything else surviving
//!    the first two moves is reported as-is with `certified: false`.
//!
//! Results are deduplicated, pruned to inclusion-minimal ideals, and put
//! in a deterministic structural order.

mod factor;
mod upoly;

pub use factor::{Factorization, Factorizer};

use crate::groebner::Ideal;
use crate::polyring::Poly;

const MAX_DEPTH: usize = 64;

/// The inclusion-minimal prime ideals over an ideal. When `certified` is
/// false, some listed ideal could not be proven prime (or some
/// factorization was not proven complete); the list is still a cover of
/// the variety by closed irreducible-or-unknown components.
#[derive(Debug, Clone)]
pub struct MinimalPrimes {
    pub primes: Vec<Ideal>,
    pub certified: bool,
}

pub fn minimal_primes(ideal: &Ideal) -> MinimalPrimes {
    let mut fz = Factorizer::new();
    minimal_primes_with(ideal, &mut fz)
}

pub fn minimal_primes_with(ideal: &Ideal, fz: &mut Factorizer) -> MinimalPrimes {
    let mut primes: Vec<Ideal> = vec![];
    let mut certified = true;
    decompose(ideal, fz, 0, &mut primes, &mut certified);
    primes.dedup_by(|a, b| a == b);
    let mut unique: Vec<Ideal> = vec![];
    for p in primes {
        if !unique.contains(&p) {
            unique.push(p);
        }
    }
    // Keep only inclusion-minimal ideals (largest varieties).
    let keep: Vec<bool> = unique
        .iter()
        .enumerate()
        .map(|(i, p)| {
            !unique
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && p.contains_ideal(q) && !q.contains_ideal(p))
        })
        .collect();
    let mut primes: Vec<Ideal> = unique
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();
    primes.sort_by(|a, b| a.cmp_structural(b));
    MinimalPrimes { primes, certified }
}

fn decompose(j: &Ideal, fz: &mut Factorizer, depth: usize, out: &mut Vec<Ideal>, certified: &mut bool) {
    if j.is_unit() {
        return;
    }
    if j.is_zero() {
        out.push(j.clone());
        return;
    }
    if depth > MAX_DEPTH {
        out.push(j.clone());
        *certified = false;
        return;
    }

    // 1. Split along the factors of the first reducible generator.
    let mut generators_certified = true;
    for g in j.gb() {
        let f = fz.factor(g);
        let splits = f.factors.len() >= 2 || f.factors.iter().any(|(_, e)| *e >= 2);
        if splits {
            for (fi, _) in &f.factors {
                decompose(&j.plus(std::slice::from_ref(fi)), fz, depth + 1, out, certified);
            }
            return;
        }
        generators_certified &= f.certified;
    }

    // 2. Eliminate a variable pinned by a generator linear in it.
    for (gi, g) in j.gb().iter().enumerate() {
        for v in g.vars_present() {
            if g.degree_in_var(v) != 1 {
                continue;
            }
            let Some((coeff, rest)) = split_linear(g, v) else {
                continue;
            };
            if !coeff.is_constant() {
                continue;
            }
            let scale = -(coeff.lc().unwrap().recip());
            let value = rest.mul_scalar(&scale);
            let substituted: Vec<Poly> = j
                .gb()
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != gi)
                .map(|(_, h)| h.substitute_var(v, &value))
                .filter(|h| !h.is_zero())
                .collect();
            let smaller = Ideal::new(j.space(), j.order(), &substituted);
            let sub = {
                let mut acc = vec![];
                decompose(&smaller, fz, depth + 1, &mut acc, certified);
                acc
            };
            for q in sub {
                out.push(q.plus(std::slice::from_ref(g)));
            }
            return;
        }
    }

    // 3. Base cases.
    if j.gb().len() == 1 && generators_certified {
        // Principal on an irreducible generator: prime in a UFD.
        out.push(j.clone());
        return;
    }
    out.push(j.clone());
    *certified = false;
}

/// For `g` of degree exactly 1 in `v`, return `(A, B)` with `g = A·v + B`
/// and neither part involving `v`.
fn split_linear(g: &Poly, v: usize) -> Option<(Poly, Poly)> {
    let mut coeff_terms = vec![];
    let mut rest_terms = vec![];
    for (m, c) in g.terms() {
        match m.deg_of(v) {
            0 => rest_terms.push((m.clone(), c.clone())),
            1 => {
                let mut exps = m.exps().to_vec();
                exps[v] = 0;
                coeff_terms.push((crate::polyring::Monomial::from_exps(exps), c.clone()));
            }
            _ => return None,
        }
    }
    let coeff = Poly::from_terms(g.space(), g.order(), coeff_terms);
    let rest = Poly::from_terms(g.space(), g.order(), rest_terms);
    if coeff.is_zero() {
        return None;
    }
    Some((coeff, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, OrderKind, TermOrder, VarSpace};
    use std::sync::Arc;

    fn param_ring() -> (Arc<VarSpace>, Arc<TermOrder>) {
        let space = VarSpace::new(&[], &["a", "b", "c", "d"]);
        let order = TermOrder::param_leading(OrderKind::Lex, 0, 4);
        (space, order)
    }

    fn ideal_of(space: &Arc<VarSpace>, order: &Arc<TermOrder>, gens: &[&str]) -> Ideal {
        let polys: Vec<Poly> = gens
            .iter()
            .map(|s| parse_poly(s, space, order).unwrap())
            .collect();
        Ideal::new(space, order, &polys)
    }

    fn gb_strings(i: &Ideal) -> Vec<String> {
        i.gb().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn product_splits_into_two_primes() {
        let (space, order) = param_ring();
        let j = ideal_of(&space, &order, &["a*b"]);
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        let got: Vec<Vec<String>> = mp.primes.iter().map(gb_strings).collect();
        assert_eq!(got, vec![vec!["a".to_string()], vec!["b".to_string()]]);
    }

    #[test]
    fn radical_of_a_power_is_the_base() {
        let (space, order) = param_ring();
        let j = ideal_of(&space, &order, &["a^2"]);
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        let got: Vec<Vec<String>> = mp.primes.iter().map(gb_strings).collect();
        assert_eq!(got, vec![vec!["a".to_string()]]);
    }

    #[test]
    fn two_generators_with_common_factor() {
        let (space, order) = param_ring();
        let j = ideal_of(&space, &order, &["a*b", "a*c"]);
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        let got: Vec<Vec<String>> = mp.primes.iter().map(gb_strings).collect();
        assert_eq!(
            got,
            vec![vec!["a".to_string()], vec!["b".to_string(), "c".to_string()]]
        );
    }

    #[test]
    fn shifted_factors_split() {
        let (space, order) = param_ring();
        let j = ideal_of(&space, &order, &["a^2 + a"]);
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        let got: Vec<Vec<String>> = mp.primes.iter().map(gb_strings).collect();
        assert_eq!(got, vec![vec!["a".to_string()], vec!["a + 1".to_string()]]);
    }

    #[test]
    fn substitution_then_split() {
        let (space, order) = param_ring();
        let j = ideal_of(&space, &order, &["a - 1", "b^2 - a"]);
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        let got: Vec<Vec<String>> = mp.primes.iter().map(gb_strings).collect();
        assert_eq!(
            got,
            vec![
                vec!["a - 1".to_string(), "b - 1".to_string()],
                vec!["a - 1".to_string(), "b + 1".to_string()],
            ]
        );
    }

    #[test]
    fn curve_and_coordinate_component() {
        let (space, order) = param_ring();
        let j = ideal_of(&space, &order, &["b - c^2", "c*d"]);
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        let got: Vec<Vec<String>> = mp.primes.iter().map(gb_strings).collect();
        assert_eq!(
            got,
            vec![
                vec!["b".to_string(), "c".to_string()],
                vec!["b - c^2".to_string(), "d".to_string()],
            ]
        );
    }

    #[test]
    fn unit_ideal_has_no_primes() {
        let (space, order) = param_ring();
        let j = ideal_of(&space, &order, &["a", "a + 1"]);
        assert!(j.is_unit());
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        assert!(mp.primes.is_empty());
    }

    #[test]
    fn zero_ideal_is_its_own_minimal_prime() {
        let (space, order) = param_ring();
        let j = Ideal::zero(&space, &order);
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        assert_eq!(mp.primes.len(), 1);
        assert!(mp.primes[0].is_zero());
    }

    #[test]
    fn containment_prunes_embedded_branches() {
        let (space, order) = param_ring();
        // a·b and a·(b − 1): components ⟨a⟩, and ⟨b, b−1⟩ = unit.
        let j = ideal_of(&space, &order, &["a*b", "a*b - a"]);
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        let got: Vec<Vec<String>> = mp.primes.iter().map(gb_strings).collect();
        assert_eq!(got, vec![vec!["a".to_string()]]);
    }

    #[test]
    fn irreducible_quadric_stays_whole() {
        let (space, order) = param_ring();
        let j = ideal_of(&space, &order, &["a*d - b*c"]);
        let mp = minimal_primes(&j);
        assert!(mp.certified);
        let got: Vec<Vec<String>> = mp.primes.iter().map(gb_strings).collect();
        assert_eq!(got, vec![vec!["a*d - b*c".to_string()]]);
    }
}
