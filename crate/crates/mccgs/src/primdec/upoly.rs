//! Dense integer univariate polynomials and their factorization over Q,
//! used as the base engine by the multivariate factorizer.
//!
//! Representation: `Vec<BigInt>` with index = degree and a nonzero leading
//! (last) entry. Factorization searches degree-k divisors by enumerating
//! divisor tuples of the values at small integer points and interpolating
//! (a complete method, guarded by explicit candidate budgets — a blown
//! budget degrades to an uncertified result, never a wrong one).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type UPoly = Vec<BigInt>;

pub fn trim(mut p: Vec<BigInt>) -> UPoly {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn deg(p: &UPoly) -> usize {
    debug_assert!(!p.is_empty() && !p.last().unwrap().is_zero());
    p.len() - 1
}

pub fn eval(p: &UPoly, t: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

pub fn eval_rational(p: &UPoly, t: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * t + BigRational::from_integer(c.clone());
    }
    acc
}

/// Divide out the integer content and make the leading coefficient positive.
pub fn primitive_positive(p: &UPoly) -> UPoly {
    let p = trim(p.clone());
    if p.is_empty() {
        return p;
    }
    let mut g = BigInt::zero();
    for c in &p {
        g = g.gcd(c);
    }
    if p.last().unwrap().is_negative() {
        g = -g;
    }
    p.iter().map(|c| c / &g).collect()
}

pub fn mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    trim(out)
}

/// Exact division over Q with an integrality check on the quotient;
/// `None` when `b` does not divide `a` over Q (or quotient not integral,
/// which for primitive inputs cannot happen by Gauss's lemma).
pub fn div_exact(a: &UPoly, b: &UPoly) -> Option<UPoly> {
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(vec![]);
    }
    if a.len() < b.len() {
        return None;
    }
    let mut rem: Vec<BigRational> = a
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let bl = BigRational::from_integer(b.last().unwrap().clone());
    let qlen = a.len() - b.len() + 1;
    let mut q = vec![BigRational::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = &rem[k + b.len() - 1] / &bl;
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                let sub = &c * BigRational::from_integer(bc.clone());
                rem[k + j] -= sub;
            }
        }
        q[k] = c;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut out = Vec::with_capacity(qlen);
    for c in q {
        if !c.denom().is_one() {
            return None;
        }
        out.push(c.numer().clone());
    }
    Some(trim(out))
}

/// `Some(s)` when `n = s^2` with `n ≥ 0`.
pub fn perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

/// All positive divisors of `n ≠ 0`, or `None` when complete enumeration
/// cannot be certified within the budgets (too-large prime cofactor, or
/// more than `max_count` divisors).
pub fn divisors(n: &BigInt, max_count: usize) -> Option<Vec<BigInt>> {
    let mut m = n.abs();
    assert!(!m.is_zero());
    let mut pf: Vec<(BigInt, u32)> = vec![];
    let mut d: u64 = 2;
    while d <= 1_000_000 {
        let db = BigInt::from(d);
        if &db * &db > m {
            break;
        }
        if (&m % &db).is_zero() {
            let mut e = 0;
            while (&m % &db).is_zero() {
                m /= &db;
                e += 1;
            }
            pf.push((db, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        // No factor up to 10^6, so a composite m would exceed 10^12.
        if m < BigInt::from(1_000_000_000_000u64) {
            pf.push((m, 1));
        } else {
            return None;
        }
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in pf {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        let mut pe = BigInt::one();
        for _ in 0..=e {
            for q in &divs {
                next.push(q * &pe);
            }
            pe *= &p;
        }
        divs = next;
        if divs.len() > max_count {
            return None;
        }
    }
    divs.sort();
    Some(divs)
}

/// Lagrange interpolation through `(t_i, y_i)`; coefficients ascending.
fn interpolate(points: &[(BigInt, BigInt)]) -> Vec<BigRational> {
    let n = points.len();
    let mut acc = vec![BigRational::zero(); n];
    for (i, (ti, yi)) in points.iter().enumerate() {
        // Build the basis polynomial Π_{j≠i} (x − t_j) / (t_i − t_j).
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (tj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            // basis *= (x − t_j)
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRational::from_integer(tj.clone());
            }
            basis = next;
            denom *= BigRational::from_integer(ti - tj);
        }
        let scale = BigRational::from_integer(yi.clone()) / denom;
        for (k, c) in basis.iter().enumerate() {
            acc[k] += c * &scale;
        }
    }
    acc
}

/// The evaluation points 0, 1, −1, 2, −2, …
fn point(i: usize) -> BigInt {
    let half = ((i + 1) / 2) as i64;
    if i % 2 == 1 {
        BigInt::from(half)
    } else {
        BigInt::from(-half)
    }
}

enum Search {
    Found(UPoly),
    NotFound { complete: bool },
}

/// Search for a degree-`k` divisor of `p` (which has no rational roots, so
/// no integer point evaluates to zero).
fn find_divisor(p: &UPoly, k: usize, candidate_budget: usize) -> Search {
    let mut pts: Vec<BigInt> = vec![];
    let mut i = 0;
    while pts.len() < k + 1 {
        let t = point(i);
        i += 1;
        if !eval(p, &t).is_zero() {
            pts.push(t);
        }
    }
    let vals: Vec<BigInt> = pts.iter().map(|t| eval(p, t)).collect();
    let mut div_sets: Vec<Vec<BigInt>> = vec![];
    let mut count: u128 = 1;
    for (idx, v) in vals.iter().enumerate() {
        match divisors(v, 4096) {
            None => return Search::NotFound { complete: false },
            Some(ds) => {
                // First point: positive divisors only (sign symmetry).
                let factor = if idx == 0 { ds.len() } else { 2 * ds.len() };
                count = count.saturating_mul(factor as u128);
                div_sets.push(ds);
            }
        }
    }
    if count > candidate_budget as u128 {
        return Search::NotFound { complete: false };
    }
    // Odometer over the candidate divisor tuples (with signs beyond index 0).
    let mut idxs = vec![0usize; div_sets.len()];
    loop {
        let mut ys = Vec::with_capacity(idxs.len());
        for (j, &ix) in idxs.iter().enumerate() {
            let ds = &div_sets[j];
            if j == 0 {
                ys.push(ds[ix].clone());
            } else {
                let half = ix / 2;
                let dv = ds[half].clone();
                ys.push(if ix % 2 == 0 { dv } else { -dv });
            }
        }
        let pointset: Vec<(BigInt, BigInt)> =
            pts.iter().cloned().zip(ys.into_iter()).collect();
        let coeffs = interpolate(&pointset);
        if coeffs.len() == k + 1 || coeffs.iter().skip(k + 1).all(|c| c.is_zero()) {
            let lead_ok = coeffs.get(k).map(|c| !c.is_zero()).unwrap_or(false);
            let integral = coeffs.iter().take(k + 1).all(|c| c.denom().is_one());
            if lead_ok && integral {
                let g: UPoly = trim(
                    coeffs
                        .iter()
                        .take(k + 1)
                        .map(|c| c.numer().clone())
                        .collect(),
                );
                if deg(&g) == k && div_exact(p, &g).is_some() {
                    return Search::Found(primitive_positive(&g));
                }
            }
        }
        // Advance the odometer.
        let mut j = 0;
        loop {
            if j == idxs.len() {
                return Search::NotFound { complete: true };
            }
            idxs[j] += 1;
            let limit = if j == 0 {
                div_sets[j].len()
            } else {
                2 * div_sets[j].len()
            };
            if idxs[j] < limit {
                break;
            }
            idxs[j] = 0;
            j += 1;
        }
    }
}

pub struct UFactorResult {
    pub factors: Vec<UPoly>,
    pub certified: bool,
}

/// Factor a primitive integer polynomial (any multiplicities) into
/// irreducible primitive factors with positive leading coefficients,
/// listed with repetition. `certified == false` means some returned factor
/// might be further reducible (a search budget was exceeded).
pub fn factor_upoly(p0: &UPoly, candidate_budget: usize) -> UFactorResult {
    let mut p = primitive_positive(p0);
    let mut factors: Vec<UPoly> = vec![];
    let mut certified = true;
    assert!(!p.is_empty(), "cannot factor the zero polynomial");

    // Powers of x.
    while p.len() > 1 && p[0].is_zero() {
        factors.push(vec![BigInt::zero(), BigInt::one()]);
        p.remove(0);
    }

    // Rational roots p/q: p | constant, q | leading.
    let mut roots_complete = true;
    if p.len() > 1 {
        let cands = match (divisors(&p[0], 4096), divisors(p.last().unwrap(), 4096)) {
            (Some(ps), Some(qs)) => Some((ps, qs)),
            _ => None,
        };
        match cands {
            None => roots_complete = false,
            Some((ps, qs)) => {
                let mut rs: Vec<BigRational> = vec![];
                for a in &ps {
                    for b in &qs {
                        rs.push(BigRational::new(a.clone(), b.clone()));
                        rs.push(BigRational::new(-a.clone(), b.clone()));
                    }
                }
                rs.sort();
                rs.dedup();
                for r in rs {
                    while p.len() > 1 && eval_rational(&p, &r).is_zero() {
                        // Divide by the primitive linear (q·x − p).
                        let lin = primitive_positive(&vec![
                            -r.numer().clone(),
                            r.denom().clone(),
                        ]);
                        p = div_exact(&p, &lin).expect("root divides");
                        factors.push(lin);
                    }
                }
            }
        }
    }

    loop {
        let d = if p.len() <= 1 { 0 } else { deg(&p) };
        if d == 0 {
            break;
        }
        if d == 1 {
            factors.push(primitive_positive(&p));
            break;
        }
        if d == 2 {
            // Quadratic formula over Z.
            let (c, b, a) = (p[0].clone(), p[1].clone(), p[2].clone());
            let disc = &b * &b - BigInt::from(4) * &a * &c;
            match perfect_square(&disc) {
                Some(s) => {
                    let two_a = BigInt::from(2) * &a;
                    let f1 = primitive_positive(&vec![&b - &s, two_a.clone()]);
                    let f2 = primitive_positive(&vec![&b + &s, two_a]);
                    let prod = mul(&f1, &f2);
                    debug_assert_eq!(primitive_positive(&prod), primitive_positive(&p));
                    factors.push(f1);
                    factors.push(f2);
                }
                None => factors.push(primitive_positive(&p)),
            }
            break;
        }
        if d == 3 && roots_complete {
            // A reducible cubic over Q has a rational root; none remain.
            factors.push(primitive_positive(&p));
            break;
        }
        let mut found: Option<UPoly> = None;
        let mut all_complete = roots_complete;
        let kmin = if roots_complete { 2 } else { 1 };
        for k in kmin..=d / 2 {
            match find_divisor(&p, k, candidate_budget) {
                Search::Found(g) => {
                    found = Some(g);
                    break;
                }
                Search::NotFound { complete } => all_complete &= complete,
            }
        }
        match found {
            Some(g) => {
                // Ascending-k search with complete lower levels makes g
                // irreducible; otherwise recurse to be safe.
                if all_complete {
                    p = div_exact(&p, &g).expect("divisor divides");
                    factors.push(g);
                } else {
                    let sub = factor_upoly(&g, candidate_budget);
                    certified &= sub.certified;
                    p = div_exact(&p, &g).expect("divisor divides");
                    factors.extend(sub.factors);
                }
            }
            None => {
                factors.push(primitive_positive(&p));
                certified &= all_complete;
                break;
            }
        }
    }

    UFactorResult { factors, certified }
}
