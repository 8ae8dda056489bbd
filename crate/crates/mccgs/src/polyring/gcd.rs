//! Multivariate polynomial gcd over the rationals via the primitive
//! polynomial remainder sequence, plus the squarefree part built on it.

use super::{Monomial, Poly};
use num_rational::BigRational;

fn deg_v(p: &Poly, v: usize) -> u32 {
    p.degree_in_var(v)
}

/// Coefficient of `v^e` when viewing `p` as univariate in variable `v`;
/// the result does not involve `v`.
fn coeff_of_var_power(p: &Poly, v: usize, e: u32) -> Poly {
    let terms: Vec<(Monomial, BigRational)> = p
        .terms()
        .iter()
        .filter(|(m, _)| m.deg_of(v) == e)
        .map(|(m, c)| {
            let mut exps = m.exps().to_vec();
            exps[v] = 0;
            (Monomial::from_exps(exps), c.clone())
        })
        .collect();
    Poly::from_terms(p.space(), p.order(), terms)
}

/// Gcd of the coefficients of `p` viewed as univariate in `v`.
pub fn content_in_var(p: &Poly, v: usize) -> Poly {
    let d = deg_v(p, v);
    let mut coeffs = Vec::with_capacity(d as usize + 1);
    for e in 0..=d {
        let c = coeff_of_var_power(p, v, e);
        if !c.is_zero() {
            coeffs.push(c);
        }
    }
    gcd_many(&coeffs)
}

/// Pseudo-remainder of `a` by `b` in variable `v`: repeatedly cancels the
/// leading `v`-term after cross-multiplying by the divisor's leading
/// coefficient. Any content the result picks up is stripped by the caller.
fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = deg_v(b, v);
    let lb = coeff_of_var_power(b, v, db);
    let nvars = a.space().nvars();
    let mut r = a.clone();
    while !r.is_zero() && deg_v(&r, v) >= db {
        let e = deg_v(&r, v);
        let lr = coeff_of_var_power(&r, v, e);
        let shift = Monomial::var(nvars, v, e - db);
        let step = b
            .mul(&lr)
            .mul_mono_scaled(&shift, &num_traits::One::one());
        r = r.mul(&lb).sub(&step);
    }
    r
}

/// Primitive-PRS gcd of two polynomials both involving `v`, both assumed
/// primitive with respect to `v`.
fn prs_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    if deg_v(&r0, v) < deg_v(&r1, v) {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !r1.is_zero() {
        let r2 = pseudo_rem(&r0, &r1, v);
        let r2 = if r2.is_zero() {
            r2
        } else {
            let c = content_in_var(&r2, v);
            r2.div_exact(&c).expect("content divides")
        };
        r0 = r1;
        r1 = r2;
    }
    r0.normalized_primitive()
}

/// Greatest common divisor over the rationals, returned in scalar-normalized
/// form (integer coefficients, positive leading coefficient). The gcd of a
/// nonzero constant with anything is 1; the gcd involving a zero polynomial
/// is the other argument.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized_primitive();
    }
    if b.is_zero() {
        return a.normalized_primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.space(), a.order());
    }
    let va = a.vars_present();
    let vb = b.vars_present();
    let v = *va.iter().chain(vb.iter()).max().unwrap();
    let a_has = va.contains(&v);
    let b_has = vb.contains(&v);
    if !a_has {
        return gcd(a, &content_in_var(b, v));
    }
    if !b_has {
        return gcd(&content_in_var(a, v), b);
    }
    let ca = content_in_var(a, v);
    let cb = content_in_var(b, v);
    let g0 = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let gp = prs_gcd(&pa, &pb, v);
    g0.mul(&gp).normalized_primitive()
}

/// Fold of [`gcd`] over a slice; zero for an empty slice or all-zero input.
pub fn gcd_many(polys: &[Poly]) -> Poly {
    let mut acc: Option<Poly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.normalized_primitive(),
            Some(g) => {
                if g.is_one() {
                    return g;
                }
                gcd(&g, p)
            }
        });
    }
    match (acc, polys.first()) {
        (Some(g), _) => g,
        (None, Some(p)) => Poly::zero(p.space(), p.order()),
        (None, None) => panic!("gcd_many of empty slice"),
    }
}

/// Product of the distinct irreducible factors, each to the first power
/// (characteristic zero: divide by the gcd with all partial derivatives).
pub fn squarefree_part(p: &Poly) -> Poly {
    if p.is_zero() || p.is_constant() {
        return p.normalized_primitive();
    }
    let mut g = p.clone();
    for v in p.vars_present() {
        let d = p.derivative(v);
        if !d.is_zero() {
            g = gcd(&g, &d);
        }
        if g.is_constant() {
            break;
        }
    }
    if g.is_constant() {
        return p.normalized_primitive();
    }
    p.div_exact(&g)
        .expect("gcd divides")
        .normalized_primitive()
}
