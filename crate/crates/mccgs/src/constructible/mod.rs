//! Canonical trees of prime ideals representing constructible subsets of
//! parameter space.
//!
//! A constructible set is entered as a union of locally closed segments
//! V(N) ∖ V(h). The canonical representation is a tree whose non-root
//! nodes carry prime ideals, strictly growing along every arc, with the
//! set semantics
//!
//! * root: the union of its children's sets,
//! * any other node P: V(P) minus the union of its children's sets,
//! * a childless node P: all of V(P).
//!
//! Odd-depth nodes therefore contribute regions and even-depth nodes cut
//! holes. Every root-to-leaf path has even length; a unit-ideal padding
//! node fills the last level when a hole is empty. The tree for a given
//! set is unique once sibling lists are put in a deterministic order, so
//! structural equality of canonicalized trees decides equality of
//! constructible sets.

use crate::groebner::Ideal;
use crate::polyring::{parse_poly, Poly, TermOrder, VarSpace};
use crate::primdec::{minimal_primes_with, Factorizer};
use num_rational::BigRational;
use serde_json::{json, Value};
use std::sync::Arc;

/// A locally closed segment V(N) ∖ V(∏ W) given by its radical null ideal
/// and the irreducible polynomials assumed nonzero.
#[derive(Debug, Clone)]
pub struct RedSpec {
    pub null: Ideal,
    pub nonnull: Vec<Poly>,
}

impl RedSpec {
    pub fn new(null: Ideal, nonnull: Vec<Poly>) -> RedSpec {
        RedSpec { null, nonnull }
    }

    /// The product of the nonnull polynomials (1 for an empty list).
    pub fn exclusion_poly(&self) -> Poly {
        let mut h = Poly::one(self.null.space(), self.null.order());
        for w in &self.nonnull {
            h = h.mul(w);
        }
        h
    }

    /// The pair (N, M) with M = N + ⟨∏w⟩, denoting V(N) ∖ V(M).
    pub fn to_diff(&self) -> (Ideal, Ideal) {
        let h = self.exclusion_poly();
        (self.null.clone(), self.null.plus(std::slice::from_ref(&h)))
    }
}

#[derive(Debug, Clone)]
struct PNode {
    ideal: Ideal,
    parent: Option<usize>,
    children: Vec<usize>,
}

/// Arena-backed tree of prime ideals over the parameter ring. Node 0 is
/// the root and carries the zero ideal as a placeholder.
#[derive(Debug, Clone)]
pub struct PTree {
    space: Arc<VarSpace>,
    order: Arc<TermOrder>,
    nodes: Vec<PNode>,
    /// False when some prime decomposition along the way was not certified
    /// complete; the tree is still sound but may be non-minimal.
    pub certified: bool,
}

impl PTree {
    pub fn new(space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> PTree {
        PTree {
            space: space.clone(),
            order: order.clone(),
            nodes: vec![PNode {
                ideal: Ideal::zero(space, order),
                parent: None,
                children: vec![],
            }],
            certified: true,
        }
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }
    pub fn order(&self) -> &Arc<TermOrder> {
        &self.order
    }
    pub fn root(&self) -> usize {
        0
    }
    pub fn ideal(&self, ix: usize) -> &Ideal {
        &self.nodes[ix].ideal
    }
    pub fn children(&self, ix: usize) -> &[usize] {
        &self.nodes[ix].children
    }
    pub fn parent(&self, ix: usize) -> Option<usize> {
        self.nodes[ix].parent
    }
    /// A padding node: carries the unit ideal, cuts an empty hole.
    pub fn is_pad(&self, ix: usize) -> bool {
        self.nodes[ix].ideal.is_unit()
    }
    /// The tree denoting the empty set: a bare root.
    pub fn is_empty(&self) -> bool {
        self.nodes[0].children.is_empty()
    }

    fn add_node(&mut self, ideal: Ideal, parent: usize) -> usize {
        let ix = self.nodes.len();
        self.nodes.push(PNode {
            ideal,
            parent: Some(parent),
            children: vec![],
        });
        self.nodes[parent].children.push(ix);
        ix
    }

    fn detach(&mut self, ix: usize) {
        if let Some(p) = self.nodes[ix].parent {
            self.nodes[p].children.retain(|&c| c != ix);
            self.nodes[ix].parent = None;
        }
    }

    /// Membership of a rational parameter point, by the set semantics.
    pub fn member(&self, point: &[BigRational]) -> bool {
        assert_eq!(
            point.len(),
            self.space.nparams(),
            "point dimension must match the parameter count"
        );
        self.nodes[0]
            .children
            .iter()
            .any(|&c| self.member_at(c, point))
    }

    fn member_at(&self, ix: usize, point: &[BigRational]) -> bool {
        let n = &self.nodes[ix];
        n.ideal.vanishes_at(point) && !n.children.iter().any(|&c| self.member_at(c, point))
    }

    /// The Zariski closure of the represented set: the intersection of the
    /// depth-1 ideals (unit for the empty set).
    pub fn closure_ideal(&self) -> Ideal {
        let mut acc = Ideal::unit(&self.space, &self.order);
        for &c in &self.nodes[0].children {
            acc = acc.intersect(&self.nodes[c].ideal);
        }
        acc
    }

    /// Put every sibling list in the canonical order and rebuild the arena
    /// in preorder so serialization is deterministic.
    pub fn canonicalize(&mut self) {
        let mut fresh: Vec<PNode> = vec![];
        let space = self.space.clone();
        let order = self.order.clone();
        self.copy_canonical(0, None, &mut fresh);
        if fresh.is_empty() {
            fresh.push(PNode {
                ideal: Ideal::zero(&space, &order),
                parent: None,
                children: vec![],
            });
        }
        self.nodes = fresh;
    }

    fn copy_canonical(&self, ix: usize, parent: Option<usize>, out: &mut Vec<PNode>) -> usize {
        let new_ix = out.len();
        out.push(PNode {
            ideal: self.nodes[ix].ideal.clone(),
            parent,
            children: vec![],
        });
        let mut kids = self.nodes[ix].children.clone();
        kids.sort_by(|&a, &b| self.nodes[a].ideal.cmp_structural(&self.nodes[b].ideal));
        for k in kids {
            let child_ix = self.copy_canonical(k, Some(new_ix), out);
            out[new_ix].children.push(child_ix);
        }
        new_ix
    }

    /// Equality of the represented sets, via the canonical form: compares
    /// structure with sibling lists sorted, so it is insensitive to the
    /// stored child order.
    pub fn tree_equal(&self, other: &PTree) -> bool {
        self.eq_at(0, other, 0)
    }

    fn eq_at(&self, a: usize, other: &PTree, b: usize) -> bool {
        if self.nodes[a].ideal != other.nodes[b].ideal {
            return false;
        }
        let mut ka = self.nodes[a].children.clone();
        let mut kb = other.nodes[b].children.clone();
        if ka.len() != kb.len() {
            return false;
        }
        ka.sort_by(|&x, &y| self.nodes[x].ideal.cmp_structural(&self.nodes[y].ideal));
        kb.sort_by(|&x, &y| other.nodes[x].ideal.cmp_structural(&other.nodes[y].ideal));
        ka.iter()
            .zip(kb.iter())
            .all(|(&x, &y)| self.eq_at(x, other, y))
    }

    /// Give every childless odd-depth node a padding child so all
    /// root-to-leaf paths have even length.
    pub fn repad(&mut self) {
        let mut stack: Vec<(usize, bool)> = vec![(0, true)]; // (node, even level)
        while let Some((ix, even)) = stack.pop() {
            let kids = self.nodes[ix].children.clone();
            if !even && kids.is_empty() && !self.is_pad(ix) {
                let unit = Ideal::unit(&self.space, &self.order);
                self.add_node(unit, ix);
                continue;
            }
            for k in kids {
                stack.push((k, !even));
            }
        }
    }

    /// Check the structural invariants; returns a description of the first
    /// violation, if any.
    pub fn validate(&self) -> Result<(), String> {
        self.validate_at(0, true)
    }

    fn validate_at(&self, ix: usize, even: bool) -> Result<(), String> {
        let n = &self.nodes[ix];
        if !even && n.children.is_empty() {
            return Err(format!("odd-depth node {ix} is a leaf"));
        }
        for &c in &n.children {
            if ix != 0 && !self.is_pad(c) && !self.strictly_contains(c, ix) {
                return Err(format!("arc {ix} -> {c} is not a strict inclusion"));
            }
        }
        for (i, &a) in n.children.iter().enumerate() {
            for &b in n.children.iter().skip(i + 1) {
                if self.nodes[a].ideal.contains_ideal(&self.nodes[b].ideal)
                    || self.nodes[b].ideal.contains_ideal(&self.nodes[a].ideal)
                {
                    return Err(format!("siblings {a} and {b} under {ix} are not irredundant"));
                }
            }
        }
        for &c in &n.children {
            self.validate_at(c, !even)?;
        }
        Ok(())
    }

    fn strictly_contains(&self, big: usize, small: usize) -> bool {
        self.nodes[big].ideal.contains_ideal(&self.nodes[small].ideal)
            && self.nodes[big].ideal != self.nodes[small].ideal
    }

    /// Add the segment V(N) ∖ V(∏w) of a red-specification into the tree,
    /// starting at the even-depth vertex `u` (normally the root).
    pub fn add_case(&mut self, spec: &RedSpec, u: usize, fz: &mut Factorizer) -> bool {
        let (n, m) = spec.to_diff();
        self.add_case_diff(&n, &m, u, fz)
    }

    /// Core insertion over a difference specification (N, M), N ⊆ M,
    /// denoting V(N) ∖ V(M). Post-order over even-depth descendants, then
    /// a merged hang at `u`; returns false when the case cannot concern
    /// any ancestor of `u` because P_parent(u) ⊆ N.
    fn add_case_diff(&mut self, n: &Ideal, m: &Ideal, u: usize, fz: &mut Factorizer) -> bool {
        let mut test = true;
        let odd_children = self.nodes[u].children.clone();
        for v in odd_children {
            if self.nodes[v].parent != Some(u) {
                continue; // dropped by an earlier merge in this sweep
            }
            let even_children = self.nodes[v].children.clone();
            for w in even_children {
                if self.nodes[w].parent != Some(v) {
                    continue;
                }
                if !self.add_case_diff(n, m, w, fz) {
                    test = false;
                }
            }
            self.simplify_sons(v);
        }
        if test {
            let u_ideal = self.nodes[u].ideal.clone();
            let r = n.plus_ideal(&u_ideal);
            let s = m.plus_ideal(&u_ideal);
            let parts = self.difference_parts(&r, &s, fz);
            self.hang_merged(u, parts, fz);
            if let Some(p) = self.nodes[u].parent {
                if n.contains_ideal(&self.nodes[p].ideal) {
                    test = false;
                }
            }
        }
        test
    }

    /// The two-level canonical decomposition of V(I) ∖ V(J): pairs of a
    /// minimal prime P of I with J ⊄ P, and the minimal primes of J + P
    /// (empty when J + P is the unit ideal, to become a padding node).
    fn difference_parts(
        &mut self,
        i: &Ideal,
        j: &Ideal,
        fz: &mut Factorizer,
    ) -> Vec<(Ideal, Vec<Ideal>)> {
        let mut parts = vec![];
        let mp = minimal_primes_with(i, fz);
        self.certified &= mp.certified;
        for p in mp.primes {
            if p.contains_ideal(j) {
                continue; // V(P) ⊆ V(J): nothing of the difference here
            }
            let jp = j.plus_ideal(&p);
            if jp.is_unit() {
                parts.push((p, vec![]));
            } else {
                let sub = minimal_primes_with(&jp, fz);
                self.certified &= sub.certified;
                parts.push((p, sub.primes));
            }
        }
        parts
    }

    /// Hang the decomposition under `u`, merging with the rest of the
    /// tree. A new prime dominated by (or equal to) an existing sibling
    /// is dropped — its region is already represented after the
    /// post-order sweep. A new prime dominating existing siblings absorbs
    /// them: their segment decompositions move into the fresh subtree.
    /// Finally every region kept elsewhere in the tree is replayed into
    /// the fresh subtree, so that its holes exclude the whole represented
    /// set and not merely the segment being added; replays that do not
    /// reach into a hole reduce to no-ops.
    fn hang_merged(&mut self, u: usize, parts: Vec<(Ideal, Vec<Ideal>)>, fz: &mut Factorizer) {
        for (p_ideal, kids) in parts {
            let existing = self.nodes[u].children.clone();
            if existing
                .iter()
                .any(|&q| p_ideal.contains_ideal(&self.nodes[q].ideal))
            {
                continue;
            }
            let mut replay: Vec<(Ideal, Ideal)> = vec![];
            for &q in &existing {
                if self.nodes[q].ideal.contains_ideal(&p_ideal) {
                    self.collect_segments(q, &mut replay);
                    self.detach(q);
                }
            }
            for &v in &self.nodes[0].children.clone() {
                self.collect_segments(v, &mut replay);
            }
            let pi = self.add_node(p_ideal, u);
            if kids.is_empty() {
                let unit = Ideal::unit(&self.space, &self.order);
                self.add_node(unit, pi);
            } else {
                for k in kids {
                    self.add_node(k, pi);
                }
            }
            for (n2, m2) in replay {
                let evens = self.nodes[pi].children.clone();
                for w in evens {
                    if self.nodes[w].parent == Some(pi) {
                        self.add_case_diff(&n2, &m2, w, fz);
                    }
                }
                self.simplify_sons(pi);
            }
        }
    }

    /// Decompose the subtree at an odd-depth node into difference
    /// specifications: each odd descendant Z contributes
    /// V(P_Z) ∖ ⋃ V(P_w) over its children w, and these pieces union to
    /// the subtree's represented region.
    fn collect_segments(&self, top_odd: usize, out: &mut Vec<(Ideal, Ideal)>) {
        let z = &self.nodes[top_odd];
        let mut m = Ideal::unit(&self.space, &self.order);
        for &w in &z.children {
            m = m.intersect(&self.nodes[w].ideal);
        }
        out.push((z.ideal.clone(), m));
        for &w in &z.children {
            for &z2 in &self.nodes[w].children {
                self.collect_segments(z2, out);
            }
        }
    }

    /// Restore the sibling invariants below the odd-depth vertex `v`:
    /// splice out an even child whose sole child repeats its ideal, and
    /// drop an even sibling whose ideal contains another's. Runs to a
    /// fixed point; the result is independent of rule application order.
    pub fn simplify_sons(&mut self, v: usize) {
        loop {
            let mut changed = false;
            // Splice: even child c with a single odd child of equal ideal.
            let kids = self.nodes[v].children.clone();
            for c in kids {
                if self.nodes[c].parent != Some(v) {
                    continue;
                }
                if self.nodes[c].children.len() == 1 {
                    let d = self.nodes[c].children[0];
                    if self.nodes[c].ideal == self.nodes[d].ideal {
                        let pos = self.nodes[v].children.iter().position(|&x| x == c).unwrap();
                        let grand = self.nodes[d].children.clone();
                        for (off, g) in grand.iter().enumerate() {
                            self.nodes[*g].parent = Some(v);
                            self.nodes[v].children.insert(pos + off, *g);
                        }
                        self.nodes[d].children.clear();
                        self.detach(c);
                        changed = true;
                    }
                }
            }
            // Containment: drop the sibling with the larger ideal.
            let kids = self.nodes[v].children.clone();
            'pairs: for (i, &a) in kids.iter().enumerate() {
                for &b in kids.iter().skip(i + 1) {
                    if self.nodes[a].parent != Some(v) || self.nodes[b].parent != Some(v) {
                        continue;
                    }
                    if self.nodes[b].ideal.contains_ideal(&self.nodes[a].ideal) {
                        self.detach(b);
                        changed = true;
                        continue 'pairs;
                    }
                    if self.nodes[a].ideal.contains_ideal(&self.nodes[b].ideal) {
                        self.detach(a);
                        changed = true;
                        continue 'pairs;
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// JSON form: nested nodes with reduced-basis generator strings.
    pub fn to_json(&self) -> Value {
        self.node_json(0)
    }

    fn node_json(&self, ix: usize) -> Value {
        let gens: Vec<String> = self.nodes[ix]
            .ideal
            .gb()
            .iter()
            .map(|p| p.to_string())
            .collect();
        let children: Vec<Value> = self.nodes[ix]
            .children
            .iter()
            .map(|&c| self.node_json(c))
            .collect();
        json!({ "ideal": gens, "children": children })
    }

    /// Rebuild a tree from its JSON form. Generators must involve only
    /// parameters; odd-depth leaves are padded.
    pub fn from_json(
        space: &Arc<VarSpace>,
        order: &Arc<TermOrder>,
        v: &Value,
    ) -> Result<PTree, String> {
        let mut tree = PTree::new(space, order);
        let root_gens = v
            .get("ideal")
            .and_then(|g| g.as_array())
            .ok_or("node must have an \"ideal\" array")?;
        if !root_gens.is_empty() {
            return Err("the root node must have an empty \"ideal\" array".into());
        }
        let children = v
            .get("children")
            .and_then(|c| c.as_array())
            .ok_or("node must have a \"children\" array")?;
        for c in children {
            tree.node_from_json(c, 0)?;
        }
        tree.repad();
        tree.canonicalize();
        Ok(tree)
    }

    fn node_from_json(&mut self, v: &Value, parent: usize) -> Result<(), String> {
        let gens = v
            .get("ideal")
            .and_then(|g| g.as_array())
            .ok_or("node must have an \"ideal\" array")?;
        let mut polys = vec![];
        for g in gens {
            let s = g.as_str().ok_or("generators must be strings")?;
            let p = parse_poly(s, &self.space, &self.order).map_err(|e| e.to_string())?;
            if !p.is_param_only() {
                return Err(format!("generator {s} involves a main variable"));
            }
            polys.push(p);
        }
        let ideal = Ideal::new(&self.space, &self.order, &polys);
        let ix = self.add_node(ideal, parent);
        let children = v
            .get("children")
            .and_then(|c| c.as_array())
            .ok_or("node must have a \"children\" array")?;
        for c in children {
            self.node_from_json(c, ix)?;
        }
        Ok(())
    }

    /// GraphViz rendering, deterministic for a canonicalized tree.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ptree {\n  node [shape=box];\n");
        self.dot_at(0, &mut out);
        out.push_str("}\n");
        out
    }

    fn dot_at(&self, ix: usize, out: &mut String) {
        let label = if ix == 0 {
            "root".to_string()
        } else if self.is_pad(ix) {
            "[1]".to_string()
        } else if self.nodes[ix].ideal.is_zero() {
            "(0)".to_string()
        } else {
            let gens: Vec<String> = self.nodes[ix]
                .ideal
                .gb()
                .iter()
                .map(|p| p.to_string())
                .collect();
            format!("({})", gens.join(", "))
        };
        out.push_str(&format!("  n{} [label=\"{}\"];\n", ix, label.replace('"', "\\\"")));
        for &c in &self.nodes[ix].children {
            out.push_str(&format!("  n{} -> n{};\n", ix, c));
            self.dot_at(c, out);
        }
    }
}

/// The canonical tree of V(I) ∖ V(J).
pub fn difftocantree(i: &Ideal, j: &Ideal, fz: &mut Factorizer) -> PTree {
    let mut tree = PTree::new(i.space(), i.order());
    let parts = tree.difference_parts(i, j, fz);
    for (p, kids) in parts {
        let pi = tree.add_node(p, 0);
        if kids.is_empty() {
            let unit = Ideal::unit(tree.space(), tree.order());
            tree.nodes.push(PNode {
                ideal: unit,
                parent: Some(pi),
                children: vec![],
            });
            let last = tree.nodes.len() - 1;
            tree.nodes[pi].children.push(last);
        } else {
            for k in kids {
                tree.add_node(k, pi);
            }
        }
    }
    tree.canonicalize();
    tree
}

/// The canonical tree of the union of the given segments. The result is
/// independent of the list order.
pub fn gcs(space: &Arc<VarSpace>, order: &Arc<TermOrder>, specs: &[RedSpec]) -> PTree {
    let mut fz = Factorizer::new();
    gcs_with(space, order, specs, &mut fz)
}

pub fn gcs_with(
    space: &Arc<VarSpace>,
    order: &Arc<TermOrder>,
    specs: &[RedSpec],
    fz: &mut Factorizer,
) -> PTree {
    let mut tree = PTree::new(space, order);
    for s in specs {
        let (n, m) = s.to_diff();
        tree.add_case_diff(&n, &m, 0, fz);
    }
    tree.canonicalize();
    tree
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::OrderKind;

    fn ring3() -> (Arc<VarSpace>, Arc<TermOrder>) {
        let space = VarSpace::new(&[], &["a", "b", "c"]);
        let order = TermOrder::param_leading(OrderKind::Lex, 0, 3);
        (space, order)
    }

    fn ideal_of(space: &Arc<VarSpace>, order: &Arc<TermOrder>, gens: &[&str]) -> Ideal {
        let polys: Vec<Poly> = gens
            .iter()
            .map(|s| parse_poly(s, space, order).unwrap())
            .collect();
        Ideal::new(space, order, &polys)
    }

    fn spec(space: &Arc<VarSpace>, order: &Arc<TermOrder>, null: &[&str], nonnull: &[&str]) -> RedSpec {
        RedSpec::new(
            ideal_of(space, order, null),
            nonnull
                .iter()
                .map(|s| parse_poly(s, space, order).unwrap())
                .collect(),
        )
    }

    fn gens(t: &PTree, ix: usize) -> Vec<String> {
        t.ideal(ix).gb().iter().map(|p| p.to_string()).collect()
    }

    fn pt(vals: &[i64]) -> Vec<BigRational> {
        vals.iter().map(|&v| BigRational::from_integer(v.into())).collect()
    }

    fn s1_specs(space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> Vec<RedSpec> {
        vec![
            spec(space, order, &["a"], &["b", "c"]),
            spec(space, order, &["b + 1"], &[]),
            spec(space, order, &["a", "b", "c"], &[]),
        ]
    }

    fn s2_specs(space: &Arc<VarSpace>, order: &Arc<TermOrder>) -> Vec<RedSpec> {
        vec![
            spec(space, order, &["a"], &["b", "c"]),
            spec(space, order, &["b + 1"], &["a"]),
            spec(space, order, &["b + 1", "a"], &["c"]),
            spec(space, order, &["a", "b", "c"], &[]),
        ]
    }

    #[test]
    fn red_spec_to_difference_pair() {
        let (space, order) = ring3();
        let s = spec(&space, &order, &["a"], &["b", "c"]);
        let (n, m) = s.to_diff();
        assert_eq!(n.gb().len(), 1);
        assert_eq!(n.gb()[0].to_string(), "a");
        let mgens: Vec<String> = m.gb().iter().map(|p| p.to_string()).collect();
        assert_eq!(mgens, vec!["a", "b*c"]);

        let s = spec(&space, &order, &["b + 1"], &[]);
        let (_, m) = s.to_diff();
        assert!(m.is_unit());

        let s = spec(&space, &order, &[], &["c"]);
        let (n, m) = s.to_diff();
        assert!(n.is_zero());
        assert_eq!(m.gb()[0].to_string(), "c");
    }

    #[test]
    fn difference_tree_of_plane_minus_lines() {
        let (space, order) = ring3();
        let i = ideal_of(&space, &order, &["a"]);
        let j = ideal_of(&space, &order, &["a", "b*c"]);
        let mut fz = Factorizer::new();
        let t = difftocantree(&i, &j, &mut fz);
        assert!(t.certified);
        let r = t.root();
        assert_eq!(t.children(r).len(), 1);
        let a = t.children(r)[0];
        assert_eq!(gens(&t, a), vec!["a"]);
        let kids: Vec<Vec<String>> = t.children(a).iter().map(|&k| gens(&t, k)).collect();
        assert_eq!(
            kids,
            vec![vec!["a".to_string(), "b".to_string()], vec!["a".to_string(), "c".to_string()]]
        );
    }

    #[test]
    fn empty_difference_yields_bare_root() {
        let (space, order) = ring3();
        let i = ideal_of(&space, &order, &["a"]);
        let mut fz = Factorizer::new();
        let t = difftocantree(&i, &i, &mut fz);
        assert!(t.is_empty());
    }

    #[test]
    fn full_variety_gets_padding_child() {
        let (space, order) = ring3();
        let i = ideal_of(&space, &order, &["b + 1"]);
        let j = Ideal::unit(&space, &order);
        let mut fz = Factorizer::new();
        let t = difftocantree(&i, &j, &mut fz);
        let top = t.children(t.root())[0];
        assert_eq!(gens(&t, top), vec!["b + 1"]);
        assert_eq!(t.children(top).len(), 1);
        assert!(t.is_pad(t.children(top)[0]));
    }

    #[test]
    fn union_tree_matches_hand_derivation() {
        let (space, order) = ring3();
        let t = gcs(&space, &order, &s1_specs(&space, &order));
        assert!(t.certified);
        assert!(t.validate().is_ok());
        let r = t.root();
        let top: Vec<Vec<String>> = t.children(r).iter().map(|&k| gens(&t, k)).collect();
        assert_eq!(top, vec![vec!["a".to_string()], vec!["b + 1".to_string()]]);
        let a = t.children(r)[0];
        let b1 = t.children(r)[1];
        // Under the plane: the two removed lines, each with the patched
        // point(s) hanging below.
        let holes: Vec<Vec<String>> = t.children(a).iter().map(|&k| gens(&t, k)).collect();
        assert_eq!(
            holes,
            vec![vec!["a".to_string(), "b".to_string()], vec!["a".to_string(), "c".to_string()]]
        );
        let ab = t.children(a)[0];
        let ac = t.children(a)[1];
        let ab_patches: Vec<Vec<String>> = t.children(ab).iter().map(|&k| gens(&t, k)).collect();
        assert_eq!(ab_patches, vec![vec!["a".to_string(), "b".to_string(), "c".to_string()]]);
        let ac_patches: Vec<Vec<String>> = t.children(ac).iter().map(|&k| gens(&t, k)).collect();
        assert_eq!(
            ac_patches,
            vec![
                vec!["a".to_string(), "b".to_string(), "c".to_string()],
                vec!["a".to_string(), "b + 1".to_string(), "c".to_string()]
            ]
        );
        // The isolated-plane component is fully covered: padded leaf.
        assert_eq!(t.children(b1).len(), 1);
        assert!(t.is_pad(t.children(b1)[0]));
    }

    #[test]
    fn union_membership_matches_segment_semantics() {
        let (space, order) = ring3();
        let specs = s1_specs(&space, &order);
        let t = gcs(&space, &order, &specs);
        // Chosen points: on the plane a=0 off the lines, on each removed
        // line, the re-added origin, the second component, and far off.
        let cases: Vec<(Vec<BigRational>, bool)> = vec![
            (pt(&[0, 2, 3]), true),   // plane, off both lines
            (pt(&[0, 0, 3]), false),  // removed line b=0
            (pt(&[0, 2, 0]), false),  // removed line c=0
            (pt(&[0, 0, 0]), true),   // patched origin
            (pt(&[5, -1, 7]), true),  // plane b=-1
            (pt(&[0, -1, 0]), true),  // point on b=-1 inside V(a,c)
            (pt(&[1, 1, 1]), false),
        ];
        for (p, want) in cases {
            assert_eq!(t.member(&p), want, "point {:?}", p);
            let direct = specs.iter().any(|s| {
                s.null.vanishes_at(&p) && !s.exclusion_poly().evaluate_params(&p).is_zero()
            });
            assert_eq!(direct, want, "direct evaluation at {:?}", p);
        }
    }

    #[test]
    fn union_is_independent_of_insertion_order() {
        let (space, order) = ring3();
        let specs = s1_specs(&space, &order);
        let base = gcs(&space, &order, &specs);
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        for perm in perms {
            let shuffled: Vec<RedSpec> = perm.iter().map(|&i| specs[i].clone()).collect();
            let t = gcs(&space, &order, &shuffled);
            assert!(base.tree_equal(&t), "order {:?} changed the tree", perm);
        }
    }

    #[test]
    fn reduced_union_drops_the_removed_point() {
        let (space, order) = ring3();
        let s1 = gcs(&space, &order, &s1_specs(&space, &order));
        let s2 = gcs(&space, &order, &s2_specs(&space, &order));
        assert!(!s1.tree_equal(&s2));
        let p = pt(&[0, -1, 0]);
        assert!(s1.member(&p));
        assert!(!s2.member(&p));
        // Everywhere else they agree on a small grid.
        for a in -2..=2 {
            for b in -2..=2 {
                for c in -2..=2 {
                    let q = pt(&[a, b, c]);
                    if q != p {
                        assert_eq!(s1.member(&q), s2.member(&q), "at {:?}", q);
                    }
                }
            }
        }
    }

    #[test]
    fn second_union_tree_shape() {
        let (space, order) = ring3();
        let t = gcs(&space, &order, &s2_specs(&space, &order));
        assert!(t.validate().is_ok());
        let r = t.root();
        let top: Vec<Vec<String>> = t.children(r).iter().map(|&k| gens(&t, k)).collect();
        assert_eq!(top, vec![vec!["a".to_string()], vec!["b + 1".to_string()]]);
        let b1 = t.children(r)[1];
        // The b=-1 component now excludes the single point (0,-1,0).
        let b1_holes: Vec<Vec<String>> = t.children(b1).iter().map(|&k| gens(&t, k)).collect();
        assert_eq!(
            b1_holes,
            vec![vec!["a".to_string(), "b + 1".to_string(), "c".to_string()]]
        );
        let hole = t.children(b1)[0];
        assert!(t.children(hole).is_empty());
    }

    #[test]
    fn permutations_of_the_four_segment_union_agree() {
        let (space, order) = ring3();
        let specs = s2_specs(&space, &order);
        let base = gcs(&space, &order, &specs);
        let mut idx = vec![0, 1, 2, 3];
        let mut perms: Vec<Vec<usize>> = vec![];
        permute(&mut idx, 0, &mut perms);
        assert_eq!(perms.len(), 24);
        for perm in perms {
            let shuffled: Vec<RedSpec> = perm.iter().map(|&i| specs[i].clone()).collect();
            let t = gcs(&space, &order, &shuffled);
            assert!(base.tree_equal(&t), "order {:?} changed the tree", perm);
        }
    }

    fn permute(idx: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == idx.len() {
            out.push(idx.clone());
            return;
        }
        for i in k..idx.len() {
            idx.swap(k, i);
            permute(idx, k + 1, out);
            idx.swap(k, i);
        }
    }

    #[test]
    fn closure_is_the_product_component() {
        let (space, order) = ring3();
        let t = gcs(&space, &order, &s1_specs(&space, &order));
        let cl = t.closure_ideal();
        assert_eq!(cl.gb().len(), 1);
        assert_eq!(cl.gb()[0].to_string(), "a*b + a");
    }

    #[test]
    fn simplification_is_idempotent_on_finished_trees() {
        let (space, order) = ring3();
        let mut t = gcs(&space, &order, &s1_specs(&space, &order));
        let before = t.to_json();
        let odd: Vec<usize> = t.children(t.root()).to_vec();
        for v in odd {
            t.simplify_sons(v);
        }
        t.canonicalize();
        assert_eq!(t.to_json(), before);
    }

    #[test]
    fn generic_segment_with_zero_null_ideal() {
        let (space, order) = ring3();
        let specs = vec![spec(&space, &order, &[], &["c"])];
        let t = gcs(&space, &order, &specs);
        let r = t.root();
        assert_eq!(t.children(r).len(), 1);
        let g = t.children(r)[0];
        assert!(t.ideal(g).is_zero());
        let holes: Vec<Vec<String>> = t.children(g).iter().map(|&k| gens(&t, k)).collect();
        assert_eq!(holes, vec![vec!["c".to_string()]]);
        assert!(t.member(&pt(&[4, 5, 1])));
        assert!(!t.member(&pt(&[4, 5, 0])));
    }

    #[test]
    fn duplicate_segment_changes_nothing() {
        let (space, order) = ring3();
        let one = vec![spec(&space, &order, &["a"], &["b", "c"])];
        let twice = vec![
            spec(&space, &order, &["a"], &["b", "c"]),
            spec(&space, &order, &["a"], &["b", "c"]),
        ];
        let t1 = gcs(&space, &order, &one);
        let t2 = gcs(&space, &order, &twice);
        assert!(t1.tree_equal(&t2));
    }

    #[test]
    fn overlapping_sub_and_super_segments_merge() {
        let (space, order) = ring3();
        // V(a)∖V(b) together with V(ac): the union is V(a) ∪ V(c) with
        // nothing removed from V(a) (its removed line returns via V(ac)).
        let specs = vec![
            spec(&space, &order, &["a"], &["b"]),
            spec(&space, &order, &["a*c"], &[]),
        ];
        let t = gcs(&space, &order, &specs);
        assert!(t.validate().is_ok());
        let top: Vec<Vec<String>> = t.children(t.root()).iter().map(|&k| gens(&t, k)).collect();
        assert_eq!(top, vec![vec!["a".to_string()], vec!["c".to_string()]]);
        for &k in t.children(t.root()) {
            assert_eq!(t.children(k).len(), 1);
            assert!(t.is_pad(t.children(k)[0]));
        }
        let rev: Vec<RedSpec> = specs.iter().rev().cloned().collect();
        assert!(t.tree_equal(&gcs(&space, &order, &rev)));
    }

    #[test]
    fn json_round_trip_preserves_the_tree() {
        let (space, order) = ring3();
        let t = gcs(&space, &order, &s1_specs(&space, &order));
        let j = t.to_json();
        let back = PTree::from_json(&space, &order, &j).unwrap();
        assert!(t.tree_equal(&back));
        assert_eq!(serde_json::to_string(&j).unwrap(), serde_json::to_string(&back.to_json()).unwrap());
    }

    #[test]
    fn json_rejects_malformed_input() {
        let (space, order) = ring3();
        let bad = json!({"ideal": ["a"], "children": []});
        assert!(PTree::from_json(&space, &order, &bad).is_err());
        let bad = json!({"ideal": [], "children": [{"ideal": ["?"], "children": []}]});
        assert!(PTree::from_json(&space, &order, &bad).is_err());
    }

    #[test]
    fn random_unions_agree_with_direct_evaluation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let (space, order) = ring3();
        let pool: Vec<Poly> = ["a", "b", "c", "a - 1", "b + 1", "c - 2", "a + b", "b - c*c"]
            .iter()
            .map(|s| parse_poly(s, &space, &order).unwrap())
            .collect();
        let coords: Vec<BigRational> = [(0, 1), (1, 1), (-1, 1), (2, 1), (1, 2), (-2, 1), (4, 1)]
            .iter()
            .map(|&(n, d)| BigRational::new(n.into(), d.into()))
            .collect();
        for _ in 0..6 {
            let nsegs = rng.gen_range(1..=3);
            let specs: Vec<RedSpec> = (0..nsegs)
                .map(|_| {
                    let nn = rng.gen_range(0..=2);
                    let nw = rng.gen_range(0..=2);
                    let null: Vec<Poly> = (0..nn)
                        .map(|_| pool[rng.gen_range(0..pool.len())].clone())
                        .collect();
                    let nonnull: Vec<Poly> = (0..nw)
                        .map(|_| pool[rng.gen_range(0..pool.len())].clone())
                        .collect();
                    RedSpec::new(Ideal::new(&space, &order, &null), nonnull)
                })
                .collect();
            let t = gcs(&space, &order, &specs);
            assert!(t.validate().is_ok());
            for _ in 0..220 {
                let p: Vec<BigRational> = (0..3)
                    .map(|_| coords[rng.gen_range(0..coords.len())].clone())
                    .collect();
                let direct = specs.iter().any(|s| {
                    s.null.vanishes_at(&p)
                        && !s.exclusion_poly().evaluate_params(&p).is_zero()
                });
                assert_eq!(t.member(&p), direct, "at {:?} for {} segments", p, nsegs);
            }
        }
    }

    #[test]
    fn dot_rendering_is_deterministic() {
        let (space, order) = ring3();
        let t = gcs(&space, &order, &s1_specs(&space, &order));
        let d1 = t.to_dot();
        let d2 = t.to_dot();
        assert_eq!(d1, d2);
        assert!(d1.contains("digraph"));
        assert!(d1.contains("[1]"));
        assert!(d1.contains("(a, b + 1, c)"));
    }
}
