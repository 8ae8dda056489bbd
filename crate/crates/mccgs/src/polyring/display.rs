//! Canonical text rendering of polynomials. The output round-trips through
//! the parser and is byte-stable: terms in the polynomial's sorted order,
//! variables within a term by index, `" + "`/`" - "` separators, and
//! rationals as `n` or `n/d`.

use super::{Monomial, Poly};
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::fmt;

fn mono_body(p: &Poly, m: &Monomial) -> Option<String> {
    if m.is_one() {
        return None;
    }
    // Parameters (and auxiliaries) print before main variables so a term
    // reads as "coefficient * main monomial", e.g. `2*c*x*y`.
    let mut idx: Vec<usize> = (0..m.nvars()).filter(|&i| m.deg_of(i) != 0).collect();
    idx.sort_by_key(|&i| (p.space().is_main(i), i));
    let mut parts = vec![];
    for i in idx {
        let e = m.deg_of(i);
        if e == 1 {
            parts.push(p.space().name(i).to_string());
        } else {
            parts.push(format!("{}^{}", p.space().name(i), e));
        }
    }
    Some(parts.join("*"))
}

fn coeff_body(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            match (mono_body(self, m), abs.is_one()) {
                (None, _) => write!(f, "{}", coeff_body(&abs))?,
                (Some(b), true) => write!(f, "{b}")?,
                (Some(b), false) => write!(f, "{}*{}", coeff_body(&abs), b)?,
            }
        }
        Ok(())
    }
}

/// Render a single monomial using the names of `like`'s space (coefficient 1).
pub fn mono_to_text(like: &Poly, m: &Monomial) -> String {
    match mono_body(like, m) {
        None => "1".to_string(),
        Some(b) => b,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_poly, OrderKind, TermOrder, VarSpace};
    use super::*;

    #[test]
    fn renders_canonical_text() {
        let space = VarSpace::new(&["x", "y"], &["b", "c", "d"]);
        let order = TermOrder::two_block(OrderKind::Lex, 2, OrderKind::Lex, 3);
        let p = |s: &str| parse_poly(s, &space, &order).unwrap();
        assert_eq!(p("x^2 + b*y^2 + 2*c*x*y + d*x").to_string(),
            "x^2 + 2*c*x*y + d*x + b*y^2");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("-x - 1").to_string(), "-x - 1");
        assert_eq!(p("1/2*x - 3/4").to_string(), "1/2*x - 3/4");
        assert_eq!(p("y^3").to_string(), "y^3");
        assert_eq!(p("-1*b").to_string(), "-b");
    }

    #[test]
    fn round_trips_through_parser() {
        let space = VarSpace::new(&["x", "y"], &["b", "c", "d"]);
        let order = TermOrder::two_block(OrderKind::Lex, 2, OrderKind::Lex, 3);
        let samples = [
            "x^2 + 2*c*x*y + d*x + b*y^2",
            "-x - 1",
            "1/2*x - 3/4",
            "b^2*c - b*d + 7",
            "0",
        ];
        for s in samples {
            let p = parse_poly(s, &space, &order).unwrap();
            let text = p.to_string();
            let q = parse_poly(&text, &space, &order).unwrap();
            assert_eq!(p, q, "round trip changed {s}");
        }
    }

    #[test]
    fn mono_text_uses_variable_names() {
        let space = VarSpace::new(&["x", "y"], &["b", "c", "d"]);
        let order = TermOrder::two_block(OrderKind::Lex, 2, OrderKind::Lex, 3);
        let p = parse_poly("x^2*y", &space, &order).unwrap();
        assert_eq!(mono_to_text(&p, p.lm().unwrap()), "x^2*y");
        let one = parse_poly("1", &space, &order).unwrap();
        assert_eq!(mono_to_text(&one, one.lm().unwrap()), "1");
    }
}
