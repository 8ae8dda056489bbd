//! Exact multivariate polynomial arithmetic over the rationals, with
//! block term orders that distinguish main variables from parameters.
//!
//! Layout convention: a [`VarSpace`] holds the main variables first, then the
//! parameters, then any auxiliary (internal) variables appended by elimination
//! routines. A single exponent-vector layout is shared by every polynomial in
//! a computation; "a polynomial in the parameters only" is simply one whose
//! main-variable exponents are all zero. This keeps changes of viewpoint
//! (coefficient extraction, elimination, evaluation) index-stable.

mod display;
mod gcd;
mod parse;

pub use display::mono_to_text;
pub use gcd::{content_in_var, gcd, gcd_many, squarefree_part};
pub use parse::{parse_poly, ParseError};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::sync::Arc;

/// The set of named variables a polynomial lives over.
///
/// Main variables occupy indices `0..nx`, parameters `nx..nx+nparams`,
/// auxiliary variables (created internally for elimination) everything after.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpace {
    names: Vec<String>,
    nx: usize,
    nparams: usize,
}

impl VarSpace {
    /// Build a space from main-variable names and parameter names.
    /// Panics on empty or duplicate names.
    pub fn new(vars: &[&str], params: &[&str]) -> Arc<VarSpace> {
        let names: Vec<String> = vars
            .iter()
            .chain(params.iter())
            .map(|s| s.to_string())
            .collect();
        assert!(
            names.iter().all(|n| !n.is_empty()),
            "variable names must be nonempty"
        );
        for (i, n) in names.iter().enumerate() {
            assert!(
                !names[..i].contains(n),
                "duplicate variable name: {n}"
            );
        }
        Arc::new(VarSpace {
            names,
            nx: vars.len(),
            nparams: params.len(),
        })
    }

    /// A copy of this space with auxiliary variables appended.
    /// Auxiliary names use a `@` prefix so they can never collide with
    /// parseable user names.
    pub fn extended(self: &Arc<Self>, n_aux: usize) -> Arc<VarSpace> {
        let mut names = self.names.clone();
        let base = self.names.len();
        for k in 0..n_aux {
            names.push(format!("@t{}", base + k));
        }
        Arc::new(VarSpace {
            names,
            nx: self.nx,
            nparams: self.nparams,
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn nparams(&self) -> usize {
        self.nparams
    }
    /// First index that is an auxiliary variable.
    pub fn aux_start(&self) -> usize {
        self.nx + self.nparams
    }
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
    pub fn is_main(&self, i: usize) -> bool {
        i < self.nx
    }
    pub fn is_param(&self, i: usize) -> bool {
        i >= self.nx && i < self.nx + self.nparams
    }
    pub fn is_aux(&self, i: usize) -> bool {
        i >= self.nx + self.nparams
    }

    /// True if `other` is this space, or this space with extra auxiliaries.
    pub fn extends(&self, other: &VarSpace) -> bool {
        self.nx == other.nx
            && self.nparams == other.nparams
            && self.names.len() >= other.names.len()
            && self.names[..other.names.len()] == other.names[..]
    }
}

/// Monomial comparison rule inside one block of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    Lex,
    Grevlex,
}

/// A product (block) term order. Blocks are half-open index ranges compared
/// in sequence; earlier blocks dominate. Every variable of the space a
/// polynomial uses must be covered by some block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrder {
    blocks: Vec<(usize, usize, OrderKind)>,
}

impl TermOrder {
    /// Main variables dominate parameters: blocks `[0,nx)` then `[nx,nx+np)`.
    pub fn two_block(kx: OrderKind, nx: usize, ka: OrderKind, nparams: usize) -> Arc<TermOrder> {
        Arc::new(TermOrder {
            blocks: vec![(0, nx, kx), (nx, nx + nparams, ka)],
        })
    }

    /// Parameters dominate: used for computations in the parameter ring.
    /// The trailing main-variable block keeps the order total on the shared
    /// layout; parameter-only polynomials never reach it.
    pub fn param_leading(ka: OrderKind, nx: usize, nparams: usize) -> Arc<TermOrder> {
        Arc::new(TermOrder {
            blocks: vec![(nx, nx + nparams, ka), (0, nx, OrderKind::Lex)],
        })
    }

    /// This order preceded by a lexicographic block `[lo,hi)` of auxiliary
    /// variables, which therefore get eliminated first.
    pub fn with_leading_aux(self: &Arc<Self>, lo: usize, hi: usize) -> Arc<TermOrder> {
        let mut blocks = vec![(lo, hi, OrderKind::Lex)];
        blocks.extend_from_slice(&self.blocks);
        Arc::new(TermOrder { blocks })
    }

    /// True when the blocks cover every index in `0..nvars`.
    pub fn covers(&self, nvars: usize) -> bool {
        let mut seen = vec![false; nvars];
        for &(lo, hi, _) in &self.blocks {
            for s in seen.iter_mut().take(hi.min(nvars)).skip(lo) {
                *s = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &(lo, hi, kind) in &self.blocks {
            let o = match kind {
                OrderKind::Lex => Self::cmp_lex(a, b, lo, hi),
                OrderKind::Grevlex => Self::cmp_grevlex(a, b, lo, hi),
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }

    fn cmp_lex(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
        for i in lo..hi {
            match a.exps[i].cmp(&b.exps[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    fn cmp_grevlex(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
        let da: u64 = a.exps[lo..hi].iter().map(|&e| e as u64).sum();
        let db: u64 = b.exps[lo..hi].iter().map(|&e| e as u64).sum();
        if da != db {
            return da.cmp(&db);
        }
        for i in (lo..hi).rev() {
            if a.exps[i] != b.exps[i] {
                // Smaller exponent on the rightmost differing variable wins.
                return b.exps[i].cmp(&a.exps[i]);
            }
        }
        Ordering::Equal
    }
}

/// An exponent vector over a fixed [`VarSpace`] layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }
    pub fn deg_of(&self, i: usize) -> u32 {
        self.exps[i]
    }
    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }
    pub fn deg_in(&self, lo: usize, hi: usize) -> u64 {
        self.exps[lo..hi].iter().map(|&e| e as u64).sum()
    }
    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    /// Does `self` divide `other`?
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// `self / other`, if divisible.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial { exps })
    }

    /// Copy with every exponent outside `[lo,hi)` set to zero.
    pub fn restrict(&self, lo: usize, hi: usize) -> Monomial {
        let mut exps = vec![0; self.exps.len()];
        exps[lo..hi].copy_from_slice(&self.exps[lo..hi]);
        Monomial { exps }
    }

    /// All nonzero exponents lie within `[lo,hi)`.
    pub fn supported_within(&self, lo: usize, hi: usize) -> bool {
        self.exps
            .iter()
            .enumerate()
            .all(|(i, &e)| e == 0 || (i >= lo && i < hi))
    }

    /// Extend the layout with trailing zero exponents.
    pub fn extended(&self, nvars: usize) -> Monomial {
        debug_assert!(nvars >= self.exps.len());
        let mut exps = self.exps.clone();
        exps.resize(nvars, 0);
        Monomial { exps }
    }

    /// Shrink the layout; the dropped trailing exponents must be zero.
    pub fn truncated(&self, nvars: usize) -> Option<Monomial> {
        if self.exps[nvars..].iter().any(|&e| e != 0) {
            return None;
        }
        Some(Monomial {
            exps: self.exps[..nvars].to_vec(),
        })
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }
}

/// A polynomial with exact rational coefficients, stored as a strictly
/// descending term list under its own term order, with no zero coefficients.
#[derive(Debug, Clone)]
pub struct Poly {
    space: Arc<VarSpace>,
    order: Arc<TermOrder>,
    terms: Vec<(Monomial, BigRational)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        // Orders may differ; compare as coefficient maps.
        self.terms
            .iter()
            .all(|(m, c)| other.terms.iter().any(|(n, d)| n == m && d == c))
    }
}
impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        // Order-insensitive: combine per-term hashes commutatively.
        let mut acc: u64 = self.terms.len() as u64;
        for (m, c) in &self.terms {
            let mut h = std::collections::hash_map::DefaultHasher::new();
            use std::hash::Hasher;
            m.hash(&mut h);
            c.hash(&mut h);
            acc = acc.wrapping_add(h.finish());
        }
        state.write_u64(acc);
    }
}

impl Poly {
    pub fn zero(space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> Poly {
        Poly {
            space: space.clone(),
            order: order.clone(),
            terms: vec![],
        }
    }

    pub fn constant(space: &Arc<VarSpace>, order: &Arc<TermOrder>, c: BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(space, order);
        }
        Poly {
            space: space.clone(),
            order: order.clone(),
            terms: vec![(Monomial::one(space.nvars()), c)],
        }
    }

    pub fn one(space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> Poly {
        Poly::constant(space, order, BigRational::one())
    }

    pub fn var(space: &Arc<VarSpace>, order: &Arc<TermOrder>, i: usize) -> Poly {
        Poly {
            space: space.clone(),
            order: order.clone(),
            terms: vec![(Monomial::var(space.nvars(), i, 1), BigRational::one())],
        }
    }

    /// Normalizing constructor: sorts descending, merges duplicate monomials,
    /// drops zero coefficients.
    pub fn from_terms(
        space: &Arc<VarSpace>,
        order: &Arc<TermOrder>,
        mut terms: Vec<(Monomial, BigRational)>,
    ) -> Poly {
        debug_assert!(order.covers(space.nvars()), "order must cover the space");
        debug_assert!(terms.iter().all(|(m, _)| m.nvars() == space.nvars()));
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += c;
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly {
            space: space.clone(),
            order: order.clone(),
            terms: out,
        }
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }
    pub fn order(&self) -> &Arc<TermOrder> {
        &self.order
    }
    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// All terms supported by the parameter block only.
    pub fn is_param_only(&self) -> bool {
        let lo = self.space.nx();
        let hi = self.space.aux_start();
        self.terms.iter().all(|(m, _)| m.supported_within(lo, hi))
    }

    /// Leading term under the polynomial's own order.
    pub fn lt(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }
    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }
    pub fn lc(&self) -> Option<&BigRational> {
        self.terms.first().map(|(_, c)| c)
    }

    fn compatible(&self, other: &Poly) -> bool {
        (Arc::ptr_eq(&self.space, &other.space) || self.space == other.space)
            && (Arc::ptr_eq(&self.order, &other.order) || self.order == other.order)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            space: self.space.clone(),
            order: self.order.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(self.compatible(other));
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.order.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly {
            space: self.space.clone(),
            order: self.order.clone(),
            terms: out,
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert!(self.compatible(other));
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                acc.push((m.mul(n), c * d));
            }
        }
        Poly::from_terms(&self.space, &self.order, acc)
    }

    /// `c * m * self`; preserves the sorted invariant without a resort.
    pub fn mul_mono_scaled(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.space, &self.order);
        }
        Poly {
            space: self.space.clone(),
            order: self.order.clone(),
            terms: self
                .terms
                .iter()
                .map(|(n, d)| (n.mul(m), d * c))
                .collect(),
        }
    }

    pub fn mul_scalar(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.space, &self.order);
        }
        Poly {
            space: self.space.clone(),
            order: self.order.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(&self.space, &self.order);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact polynomial division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let mut q: Vec<(Monomial, BigRational)> = vec![];
        let (dm, dc) = (d.lm().unwrap().clone(), d.lc().unwrap().clone());
        while !r.is_zero() {
            let (rm, rc) = r.lt().unwrap();
            let t = rm.checked_div(&dm)?;
            let c = rc / &dc;
            r = r.sub(&d.mul_mono_scaled(&t, &c));
            q.push((t, c));
        }
        Some(Poly::from_terms(&self.space, &self.order, q))
    }

    /// Total degree across all variables.
    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in_var(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.deg_of(i)).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn vars_present(&self) -> Vec<usize> {
        let n = self.space.nvars();
        let mut present = vec![false; n];
        for (m, _) in &self.terms {
            for (i, &e) in m.exps().iter().enumerate() {
                if e != 0 {
                    present[i] = true;
                }
            }
        }
        (0..n).filter(|&i| present[i]).collect()
    }

    /// Largest main-variable monomial and its parameter-polynomial
    /// coefficient. Works under any covering order by scanning all terms,
    /// so it is safe even when the order does not put main variables first.
    pub fn leading_wrt_x(&self) -> Option<(Monomial, Poly)> {
        let nx = self.space.nx();
        let nv = self.space.nvars();
        let mut best: Option<Monomial> = None;
        for (m, _) in &self.terms {
            let mx = m.restrict(0, nx);
            match &best {
                None => best = Some(mx),
                Some(b) => {
                    if self.order.cmp(&mx, b) == Ordering::Greater {
                        best = Some(mx);
                    }
                }
            }
        }
        let bx = best?;
        let cterms: Vec<(Monomial, BigRational)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.restrict(0, nx) == bx)
            .map(|(m, c)| (m.restrict(nx, nv), c.clone()))
            .collect();
        Some((bx, Poly::from_terms(&self.space, &self.order, cterms)))
    }

    /// The parameter-polynomial coefficient of the given main-variable
    /// monomial.
    pub fn coeff_of_x_monomial(&self, mx: &Monomial) -> Poly {
        let nx = self.space.nx();
        let nv = self.space.nvars();
        let cterms: Vec<(Monomial, BigRational)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.restrict(0, nx) == *mx)
            .map(|(m, c)| (m.restrict(nx, nv), c.clone()))
            .collect();
        Poly::from_terms(&self.space, &self.order, cterms)
    }

    /// Distinct main-variable monomials present, descending.
    pub fn x_monomials(&self) -> Vec<Monomial> {
        let nx = self.space.nx();
        let mut out: Vec<Monomial> = vec![];
        for (m, _) in &self.terms {
            let mx = m.restrict(0, nx);
            if !out.contains(&mx) {
                out.push(mx);
            }
        }
        out.sort_by(|a, b| self.order.cmp(b, a));
        out
    }

    /// Greatest common divisor, over the parameter ring, of the coefficients
    /// of the main-variable monomials. Zero polynomial for zero input; a
    /// polynomial with rational (constant) coefficients has content 1.
    pub fn content_wrt_x(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero(&self.space, &self.order);
        }
        let coeffs: Vec<Poly> = self
            .x_monomials()
            .into_iter()
            .map(|mx| self.coeff_of_x_monomial(&mx))
            .collect();
        gcd_many(&coeffs)
    }

    /// `self` divided by its main-variable content.
    pub fn primitive_part_wrt_x(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_wrt_x();
        self.div_exact(&c)
            .expect("content must divide the polynomial")
    }

    /// Substitute rational values for the parameters; auxiliaries must be
    /// absent. The result involves main variables only.
    pub fn evaluate_params(&self, vals: &[BigRational]) -> Poly {
        assert_eq!(vals.len(), self.space.nparams());
        let nx = self.space.nx();
        let mut acc = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            debug_assert!(
                m.supported_within(0, self.space.aux_start()),
                "cannot evaluate a polynomial containing auxiliary variables"
            );
            let mut coeff = c.clone();
            for (j, v) in vals.iter().enumerate() {
                let e = m.deg_of(nx + j);
                for _ in 0..e {
                    coeff *= v;
                }
            }
            acc.push((m.restrict(0, nx), coeff));
        }
        Poly::from_terms(&self.space, &self.order, acc)
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut acc = vec![];
        for (m, c) in &self.terms {
            let e = m.deg_of(i);
            if e > 0 {
                let mut exps = m.exps().to_vec();
                exps[i] = e - 1;
                acc.push((
                    Monomial::from_exps(exps),
                    c * BigRational::from_integer(BigInt::from(e)),
                ));
            }
        }
        Poly::from_terms(&self.space, &self.order, acc)
    }

    /// Scalar-normalized form: integer coefficients with trivial common
    /// divisor and positive leading coefficient. The canonical representative
    /// of the polynomial up to nonzero rational scaling.
    pub fn normalized_primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        let mut numer_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            denom_lcm = denom_lcm.lcm(c.denom());
            numer_gcd = numer_gcd.gcd(c.numer());
        }
        let mut scale = BigRational::new(denom_lcm, numer_gcd);
        if self.terms[0].1.clone() * &scale < BigRational::zero() {
            scale = -scale;
        }
        self.mul_scalar(&scale)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.lc() {
            None => self.clone(),
            Some(c) => self.mul_scalar(&c.recip()),
        }
    }

    /// Re-embed into an extended space (same names prefix) under an order
    /// covering it.
    pub fn embed(&self, space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> Poly {
        assert!(space.extends(&self.space), "embed target must extend space");
        let nv = space.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.extended(nv), c.clone()))
            .collect();
        Poly::from_terms(space, order, terms)
    }

    /// Project back to a smaller space; `None` if a dropped variable occurs.
    pub fn try_project(&self, space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> Option<Poly> {
        assert!(self.space.extends(space), "project target must be a prefix");
        let nv = space.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.truncated(nv)?, c.clone()));
        }
        Some(Poly::from_terms(space, order, terms))
    }

    /// The same polynomial re-sorted under a different order.
    pub fn resort(&self, order: &Arc<TermOrder>) -> Poly {
        Poly::from_terms(&self.space, order, self.terms.clone())
    }

    /// Equal up to a nonzero rational scalar.
    pub fn associate_of(&self, other: &Poly) -> bool {
        self.normalized_primitive() == other.normalized_primitive()
    }

    /// Substitute a polynomial for one variable (all occurrences).
    pub fn substitute_var(&self, v: usize, r: &Poly) -> Poly {
        let dmax = self.degree_in_var(v);
        if dmax == 0 {
            return self.clone();
        }
        // Precompute powers of the replacement.
        let mut powers = vec![Poly::one(&self.space, &self.order)];
        for e in 1..=dmax {
            powers.push(powers[(e - 1) as usize].mul(r));
        }
        let mut acc = Poly::zero(&self.space, &self.order);
        for e in 0..=dmax {
            let coeff_terms: Vec<(Monomial, BigRational)> = self
                .terms
                .iter()
                .filter(|(m, _)| m.deg_of(v) == e)
                .map(|(m, c)| {
                    let mut exps = m.exps().to_vec();
                    exps[v] = 0;
                    (Monomial::from_exps(exps), c.clone())
                })
                .collect();
            if coeff_terms.is_empty() {
                continue;
            }
            let coeff = Poly::from_terms(&self.space, &self.order, coeff_terms);
            acc = acc.add(&coeff.mul(&powers[e as usize]));
        }
        acc
    }

    /// Everything but the leading term.
    pub fn tail(&self) -> Poly {
        Poly {
            space: self.space.clone(),
            order: self.order.clone(),
            terms: self.terms.get(1..).unwrap_or(&[]).to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn conic_setup() -> (Arc<VarSpace>, Arc<TermOrder>) {
        let space = VarSpace::new(&["x", "y"], &["b", "c", "d"]);
        let order = TermOrder::two_block(OrderKind::Lex, 2, OrderKind::Lex, 3);
        (space, order)
    }

    #[test]
    fn lex_order_basics() {
        let _space = VarSpace::new(&["x", "y", "z"], &[]);
        let order = TermOrder::two_block(OrderKind::Lex, 3, OrderKind::Lex, 0);
        let m = |a: u32, b: u32, c: u32| Monomial::from_exps(vec![a, b, c]);
        // x^2 y > x z^3 > x > y^5
        assert_eq!(order.cmp(&m(2, 1, 0), &m(1, 0, 3)), Ordering::Greater);
        assert_eq!(order.cmp(&m(1, 0, 3), &m(1, 0, 0)), Ordering::Greater);
        assert_eq!(order.cmp(&m(1, 0, 0), &m(0, 5, 0)), Ordering::Greater);
        assert_eq!(order.cmp(&m(1, 2, 3), &m(1, 2, 3)), Ordering::Equal);
    }

    #[test]
    fn grevlex_order_basics() {
        let space = VarSpace::new(&["x", "y", "z"], &[]);
        let order = TermOrder::two_block(OrderKind::Grevlex, 3, OrderKind::Lex, 0);
        let m = |a: u32, b: u32, c: u32| Monomial::from_exps(vec![a, b, c]);
        let _ = space;
        // Degree dominates.
        assert_eq!(order.cmp(&m(0, 0, 3), &m(1, 1, 0)), Ordering::Greater);
        // Among degree 2: x^2 > xy > y^2 > xz > yz > z^2.
        let seq = [
            m(2, 0, 0),
            m(1, 1, 0),
            m(0, 2, 0),
            m(1, 0, 1),
            m(0, 1, 1),
            m(0, 0, 2),
        ];
        for w in seq.windows(2) {
            assert_eq!(order.cmp(&w[0], &w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn block_order_puts_main_variables_first() {
        let (space, order) = conic_setup();
        let _ = space;
        // y > b^7 because main variables dominate parameters.
        let y = Monomial::from_exps(vec![0, 1, 0, 0, 0]);
        let b7 = Monomial::from_exps(vec![0, 0, 7, 0, 0]);
        assert_eq!(order.cmp(&y, &b7), Ordering::Greater);
    }

    #[test]
    fn param_only_polys_sort_the_same_under_both_orders() {
        let (space, two_block) = conic_setup();
        let param = TermOrder::param_leading(OrderKind::Lex, 2, 3);
        let p = parse_poly("b^2*c + b*d^2 + c*d + 1", &space, &two_block).unwrap();
        let r = p.resort(&param);
        let seq1: Vec<_> = p.terms().iter().map(|(m, _)| m.clone()).collect();
        let seq2: Vec<_> = r.terms().iter().map(|(m, _)| m.clone()).collect();
        assert_eq!(seq1, seq2);
    }

    #[test]
    fn arithmetic_identities() {
        let (space, order) = conic_setup();
        let p = parse_poly("x^2 + b*y^2 + 2*c*x*y + d*x", &space, &order).unwrap();
        let g = parse_poly("2*x + 2*c*y + d", &space, &order).unwrap();
        assert_eq!(p.add(&g).sub(&g), p);
        assert_eq!(p.mul(&g), g.mul(&p));
        let pg = p.mul(&g);
        assert_eq!(pg.div_exact(&g).unwrap(), p);
        assert!(p.add(&p.neg()).is_zero());
        assert_eq!(p.pow(2), p.mul(&p));
    }

    #[test]
    fn division_fails_cleanly_when_not_exact() {
        let (space, order) = conic_setup();
        let p = parse_poly("x^2 + 1", &space, &order).unwrap();
        let g = parse_poly("x + 1", &space, &order).unwrap();
        assert!(p.div_exact(&g).is_none());
    }

    #[test]
    fn leading_with_respect_to_main_variables() {
        let (space, order) = conic_setup();
        let f = parse_poly("x^2 + b*y^2 + 2*c*x*y + d*x", &space, &order).unwrap();
        let (mx, coeff) = f.leading_wrt_x().unwrap();
        assert_eq!(mx, Monomial::from_exps(vec![2, 0, 0, 0, 0]));
        assert!(coeff.is_one());

        let fy = parse_poly("2*b*y + 2*c*x", &space, &order).unwrap();
        let (mx, coeff) = fy.leading_wrt_x().unwrap();
        assert_eq!(mx, Monomial::from_exps(vec![1, 0, 0, 0, 0]));
        assert_eq!(coeff, parse_poly("2*c", &space, &order).unwrap());

        // A parameter-only polynomial has main-variable leading monomial 1.
        let d = parse_poly("d", &space, &order).unwrap();
        let (mx, coeff) = d.leading_wrt_x().unwrap();
        assert!(mx.is_one());
        assert_eq!(coeff, parse_poly("d", &space, &order).unwrap());
    }

    #[test]
    fn content_and_primitive_part() {
        let (space, order) = conic_setup();
        let p = parse_poly("b*x + b*c*y", &space, &order).unwrap();
        assert_eq!(p.content_wrt_x(), parse_poly("b", &space, &order).unwrap());
        assert_eq!(
            p.primitive_part_wrt_x(),
            parse_poly("x + c*y", &space, &order).unwrap()
        );
        // Constant coefficients: content is 1 (integer content is a scalar).
        let r = parse_poly("2*x + 4*y", &space, &order).unwrap();
        assert!(r.content_wrt_x().is_one());
    }

    #[test]
    fn evaluation_at_parameter_point() {
        let (space, order) = conic_setup();
        let f = parse_poly("x^2 + b*y^2 + 2*c*x*y + d*x", &space, &order).unwrap();
        let vals = vec![q(1), q(0), q(1)];
        let got = f.evaluate_params(&vals);
        assert_eq!(got, parse_poly("x^2 + y^2 + x", &space, &order).unwrap());
    }

    #[test]
    fn normalized_primitive_and_monic() {
        let (space, order) = conic_setup();
        let p = parse_poly("4*x + 6*y", &space, &order).unwrap();
        assert_eq!(
            p.normalized_primitive(),
            parse_poly("2*x + 3*y", &space, &order).unwrap()
        );
        let n = parse_poly("0 - 4*x - 6*y", &space, &order).unwrap();
        assert_eq!(
            n.normalized_primitive(),
            parse_poly("2*x + 3*y", &space, &order).unwrap()
        );
        let frac = parse_poly("1/2*x + 1/3*y", &space, &order).unwrap();
        assert_eq!(
            frac.normalized_primitive(),
            parse_poly("3*x + 2*y", &space, &order).unwrap()
        );
        assert_eq!(
            p.monic(),
            parse_poly("x + 3/2*y", &space, &order).unwrap()
        );
        assert!(p.associate_of(&n));
    }

    #[test]
    fn derivative_matches_calculus() {
        let (space, order) = conic_setup();
        let f = parse_poly("x^2 + b*y^2 + 2*c*x*y + d*x", &space, &order).unwrap();
        let fx = f.derivative(0);
        let fy = f.derivative(1);
        assert_eq!(fx, parse_poly("2*x + 2*c*y + d", &space, &order).unwrap());
        assert_eq!(fy, parse_poly("2*b*y + 2*c*x", &space, &order).unwrap());
    }

    #[test]
    fn embed_and_project_round_trip() {
        let (space, order) = conic_setup();
        let f = parse_poly("x^2 + b*y^2", &space, &order).unwrap();
        let big = space.extended(1);
        let big_order = order.with_leading_aux(5, 6);
        let up = f.embed(&big, &big_order);
        assert_eq!(up.try_project(&space, &order).unwrap(), f);
        let t = Poly::var(&big, &big_order, 5);
        assert!(t.try_project(&space, &order).is_none());
    }
}
