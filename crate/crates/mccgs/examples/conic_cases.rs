//! Case analysis for a parametric conic section.
//!
//! The system describes the singular locus of `x^2 + b*y^2 + 2*c*x*y + d*x`
//! together with the curve itself. Depending on the parameters `(b, c, d)`
//! the specialized ideal is trivial, a single line, or the origin; the case
//! discussion recovers those regimes with an explicit segment for each.
//!
//! Run with `MCCGS_TRACE=1` to watch the case splits as they happen.

use mccgs::{discuss, parse_poly, Factorizer, OrderKind, TermOrder, VarSpace};

fn main() {
    let space = VarSpace::new(&["x", "y"], &["b", "c", "d"]);
    let order = TermOrder::two_block(OrderKind::Lex, 2, OrderKind::Lex, 3);
    let order_a = TermOrder::param_leading(OrderKind::Lex, 2, 3);
    let system: Vec<_> = ["x^2 + b*y^2 + 2*c*x*y + d*x", "2*x + 2*c*y + d", "2*b*y + 2*c*x"]
        .iter()
        .map(|s| parse_poly(s, &space, &order).expect("fixed input parses"))
        .collect();

    let mut factorizer = Factorizer::new();
    let discussion = discuss(&space, &order, &order_a, &system, &[], &[], &mut factorizer)
        .expect("the discussion terminates on this system");

    println!("{} cases", discussion.cases.len());
    for case in &discussion.cases {
        let basis: Vec<String> = case.basis.iter().map(|p| p.to_string()).collect();
        let components: Vec<String> = case
            .segment
            .primes()
            .iter()
            .map(|p| {
                if p.is_zero() {
                    return "the whole parameter space".to_string();
                }
                let gens: Vec<String> = p.gb().iter().map(|g| g.to_string()).collect();
                format!("V({})", gens.join(", "))
            })
            .collect();
        let excluded: Vec<String> =
            case.segment.nonnull().iter().map(|w| w.to_string()).collect();
        println!(
            "  on {} minus zeros of {:?}: basis {:?}",
            components.join(" u "),
            excluded,
            basis
        );
    }
}
