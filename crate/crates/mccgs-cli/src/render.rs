//! Output rendering: a three-column text table, a JSON document whose trees
//! round-trip through the library parser, and a DOT digraph with one cluster
//! per segment. All three are byte-deterministic for a fixed input.

use serde_json::{json, Value};

use mccgs::{mono_to_text, CanonicalSystem, Group, PTree};

use crate::problem::Problem;

/// Leading monomials as `[m1, m2, ...]`, using a basis polynomial for
/// variable names.
fn lpp_text(g: &Group) -> String {
    let parts: Vec<String> = g
        .lpps
        .iter()
        .zip(&g.basis)
        .map(|(m, like)| mono_to_text(like, m))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn basis_line(g: &Group) -> String {
    let parts: Vec<String> = g.basis.iter().map(|p| p.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Children that are not structural padding.
fn real_children<'t>(tree: &'t PTree, ix: usize) -> Vec<usize> {
    tree.children(ix)
        .iter()
        .copied()
        .filter(|&c| !tree.is_pad(c))
        .collect()
}

fn variety_text(tree: &PTree, ix: usize) -> String {
    let ideal = tree.ideal(ix);
    if ideal.is_zero() {
        return "whole space".to_string();
    }
    let gens: Vec<String> = ideal.gb().iter().map(|p| p.to_string()).collect();
    format!("V({})", gens.join(", "))
}

fn node_description(tree: &PTree, ix: usize) -> String {
    let v = variety_text(tree, ix);
    let kids = real_children(tree, ix);
    if kids.is_empty() {
        return v;
    }
    let inner: Vec<String> = kids.iter().map(|&k| node_description(tree, k)).collect();
    if inner.len() == 1 {
        format!("({v} - {})", inner[0])
    } else {
        format!("({v} - ({}))", inner.join(" u "))
    }
}

/// The region of a group as a set expression read off its canonical tree.
pub fn describe(tree: &PTree) -> String {
    let kids = real_children(tree, tree.root());
    if kids.is_empty() {
        return "empty".to_string();
    }
    let parts: Vec<String> = kids.iter().map(|&k| node_description(tree, k)).collect();
    parts.join(" u ")
}

pub fn text(system: &CanonicalSystem, problem: &Problem) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "minimal canonical comprehensive system: {} segment{}\n",
        system.groups.len(),
        if system.groups.len() == 1 { "" } else { "s" },
    ));
    out.push_str(&format!(
        "variables [{}], parameters [{}], orders {}/{}\n\n",
        problem.vars.join(", "),
        problem.params.join(", "),
        problem.order_x_name,
        problem.order_a_name,
    ));

    let header = ("lpp", "basis", "description");
    let rows: Vec<(String, String, String)> = system
        .groups
        .iter()
        .map(|g| {
            let mut lpp = lpp_text(g);
            if g.generic {
                lpp.push_str(" (generic)");
            }
            (lpp, basis_line(g), describe(&g.tree))
        })
        .collect();
    let w0 = rows.iter().map(|r| r.0.len()).chain([header.0.len()]).max().unwrap();
    let w1 = rows.iter().map(|r| r.1.len()).chain([header.1.len()]).max().unwrap();
    out.push_str(&format!(
        "{:<w0$} | {:<w1$} | {}\n",
        header.0, header.1, header.2
    ));
    let w2 = rows.iter().map(|r| r.2.len()).chain([header.2.len()]).max().unwrap();
    out.push_str(&format!("{}-+-{}-+-{}\n", "-".repeat(w0), "-".repeat(w1), "-".repeat(w2)));
    for (a, b, c) in &rows {
        out.push_str(&format!("{a:<w0$} | {b:<w1$} | {c}\n"));
    }

    if !system.unmerged.is_empty() {
        out.push('\n');
        for &(i, j) in &system.unmerged {
            out.push_str(&format!(
                "note: segments {} and {} share leading monomials but admit no common basis\n",
                i + 1,
                j + 1
            ));
        }
    }
    out.push_str(&format!(
        "\ncertified: {}\n",
        if system.certified { "yes" } else { "no (an uncertified factorization was used)" }
    ));
    out
}

pub fn json(system: &CanonicalSystem, problem: &Problem) -> String {
    let segments: Vec<Value> = system
        .groups
        .iter()
        .map(|g| {
            let lpps: Vec<String> = g
                .lpps
                .iter()
                .zip(&g.basis)
                .map(|(m, like)| mono_to_text(like, m))
                .collect();
            let basis: Vec<String> = g.basis.iter().map(|p| p.to_string()).collect();
            json!({
                "lpp": lpps,
                "basis": basis,
                "generic": g.generic,
                "description": describe(&g.tree),
                "tree": g.tree.to_json(),
            })
        })
        .collect();
    let unmerged: Vec<Value> = system
        .unmerged
        .iter()
        .map(|&(i, j)| json!([i, j]))
        .collect();
    let doc = json!({
        "vars": problem.vars,
        "params": problem.params,
        "order_x": problem.order_x_name,
        "order_a": problem.order_a_name,
        "segments": segments,
        "unmerged": unmerged,
        "certified": system.certified,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("rendering cannot fail");
    s.push('\n');
    s
}

pub fn dot(system: &CanonicalSystem, _problem: &Problem) -> String {
    let mut out = String::from("digraph mccgs {\n  node [shape=box];\n");
    for (gi, g) in system.groups.iter().enumerate() {
        out.push_str(&format!("  subgraph cluster_{gi} {{\n"));
        let mut label = format!("segment {}: lpp {}", gi + 1, lpp_text(g));
        if g.generic {
            label.push_str(" (generic)");
        }
        out.push_str(&format!("    label=\"{}\";\n", escape(&label)));
        dot_nodes(&g.tree, g.tree.root(), gi, None, &mut out);
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

fn dot_nodes(tree: &PTree, ix: usize, gi: usize, parent: Option<usize>, out: &mut String) {
    let label = if ix == tree.root() {
        "union".to_string()
    } else if tree.is_pad(ix) {
        "(all of it)".to_string()
    } else {
        variety_text(tree, ix)
    };
    out.push_str(&format!("    s{gi}_n{ix} [label=\"{}\"];\n", escape(&label)));
    if let Some(p) = parent {
        out.push_str(&format!("    s{gi}_n{p} -> s{gi}_n{ix};\n"));
    }
    for &c in tree.children(ix) {
        dot_nodes(tree, c, gi, Some(ix), out);
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
