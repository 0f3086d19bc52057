//! Reduced dual resolution graph.
//!
//! Only vertices of valence != 2 are materialized: the first divisor, dead
//! ends, dead-arc stars and proper stars, with chains of ordinary vertices
//! collapsed into single edges. Every special vertex carries its value
//! vector `v^P`, realized as the intersection vector of a curvette at `P`
//! with the branches; curvettes are explicit truncation curves, so all
//! values reduce to contact-pair arithmetic.
//!
//! Each vertex also stores the pairing `d_P` of two generic curvettes at
//! `P`. For the separation vertex `R` of two branches this gives the exact
//! reproduction identity `[C_i, C_j] * d_R = v^R_i * v^R_j`, which is the
//! cross-check that the graph values encode the input intersection table.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::equisingularity::{
    free_capacity, intersection_from_contact, topological_model, validate_and_order, ContactPair,
    EquisigError, EquisigType, PackageNode, PuiseuxTerm, StarKind, TermKind, TopologicalModel,
};
use crate::semigroup::{chars_from_pairs, gens_from_char, CharExponents, PlaneBranch};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error(transparent)]
    Equisig(#[from] EquisigError),
    #[error("internal graph inconsistency: {0}")]
    Internal(String),
}

impl From<crate::semigroup::SemigroupError> for GraphError {
    fn from(e: crate::semigroup::SemigroupError) -> Self {
        GraphError::Equisig(EquisigError::Semigroup(e))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VertexKind {
    /// The first exceptional divisor.
    Origin,
    /// End of a dead arc.
    DeadEnd,
    /// Star to which a dead arc attaches.
    DeadArcStar,
    /// Separation point without a dead arc.
    ProperStar,
}

impl VertexKind {
    pub fn name(self) -> &'static str {
        match self {
            VertexKind::Origin => "origin",
            VertexKind::DeadEnd => "dead-end",
            VertexKind::DeadArcStar => "dead-arc-star",
            VertexKind::ProperStar => "proper-star",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vertex {
    pub id: usize,
    pub kind: VertexKind,
    /// Value vector `v^P` over the branches in good order.
    pub value: Vec<i128>,
    /// Valence: incident edges plus arrows (plus one at the origin when it
    /// is the first separation point).
    pub valence: usize,
    /// The star contributes `(t^v - 1)^{s-1}` beyond its structural factors.
    pub s: usize,
    /// For dead ends: the integer with `v^sigma = (n + 1) v^rho`.
    pub n_rho: Option<i128>,
    /// Intersection of two generic curvettes at this vertex.
    pub self_pairing: i128,
}

/// Dead arc, collapsed: its end, its star, and the multiple `n_L + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DeadArc {
    pub rho: usize,
    pub sigma: usize,
    pub multiple: i128,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualGraph {
    r: usize,
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    /// Branch index (good order) to the vertex its arrow attaches to.
    arrows: Vec<usize>,
    origin: usize,
    sigma0: usize,
    /// Dead arcs at or below the first separation point, in order.
    below_arcs: Vec<DeadArc>,
    /// Dead arcs past the first separation point.
    tilde_arcs: Vec<DeadArc>,
    /// Separation vertex of each branch pair.
    separation: Vec<Vec<usize>>,
}

impl DualGraph {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn sigma0(&self) -> usize {
        self.sigma0
    }

    pub fn below_arcs(&self) -> &[DeadArc] {
        &self.below_arcs
    }

    pub fn tilde_arcs(&self) -> &[DeadArc] {
        &self.tilde_arcs
    }

    /// Separation vertex of a branch pair.
    pub fn separation_vertex(&self, i: usize, j: usize) -> usize {
        self.separation[i][j]
    }

    /// Checks `[C_i, C_j] * d_R = v^R_i * v^R_j` at every pair's separation
    /// vertex against the given (good-ordered) intersection table.
    pub fn check_intersections(&self, et: &EquisigType) -> Result<(), GraphError> {
        for i in 0..self.r {
            for j in (i + 1)..self.r {
                let rv = &self.vertices[self.separation[i][j]];
                let lhs = et.intersection(i, j) * rv.self_pairing;
                let rhs = rv.value[i] * rv.value[j];
                if lhs != rhs {
                    return Err(GraphError::Internal(format!(
                        "intersection [{}][{}] not reproduced at vertex {}",
                        i, j, rv.id
                    )));
                }
            }
        }
        Ok(())
    }

    /// Deterministic DOT rendering: vertices sorted by id, arrows as
    /// arrow-shaped terminal nodes, collapsed arcs as labeled edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph dual_graph {\n");
        for v in &self.vertices {
            let vals: Vec<String> = v.value.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                out,
                "  n{} [shape=circle, label=\"{} {} v=({})\"];",
                v.id,
                v.id,
                v.kind.name(),
                vals.join(",")
            );
        }
        for i in 0..self.arrows.len() {
            let _ = writeln!(out, "  b{} [shape=rarrow, label=\"C{}\"];", i + 1, i + 1);
        }
        let mut edges = self.edges.clone();
        edges.sort();
        for (a, b) in edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"...\"];", a, b);
        }
        for (i, &at) in self.arrows.iter().enumerate() {
            let _ = writeln!(out, "  n{} -> b{};", at, i + 1);
        }
        out.push_str("}\n");
        out
    }
}

struct Builder<'a> {
    et: &'a EquisigType,
    model: &'a TopologicalModel,
    next: Vec<usize>,
    chars_done: Vec<usize>,
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    arrows: Vec<Option<usize>>,
    below_arcs: Vec<DeadArc>,
    tilde_arcs: Vec<DeadArc>,
    sigma0: Option<usize>,
    separation: Vec<Vec<usize>>,
}

impl<'a> Builder<'a> {
    fn term(&self, j: usize) -> Option<&PuiseuxTerm> {
        self.model.terms[j].get(self.next[j])
    }

    fn skip_stale(&mut self, lo: usize, hi: usize) {
        for j in lo..hi {
            while let Some(t) = self.model.terms[j].get(self.next[j]) {
                match &t.kind {
                    TermKind::Separation(targets)
                        if !targets.iter().any(|&x| x >= lo && x < hi) =>
                    {
                        self.next[j] += 1;
                    }
                    _ => break,
                }
            }
        }
    }

    fn add_vertex(
        &mut self,
        kind: VertexKind,
        value: Vec<i128>,
        n_rho: Option<i128>,
        self_pairing: i128,
    ) -> usize {
        let id = self.vertices.len();
        self.vertices.push(Vertex {
            id,
            kind,
            value,
            valence: 0,
            s: 0,
            n_rho,
            self_pairing,
        });
        id
    }

    fn connect(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    fn mark_separation(&mut self, xs: &[usize], ys: &[usize], vertex: usize) {
        for &i in xs {
            for &j in ys {
                self.separation[i][j] = vertex;
                self.separation[j][i] = vertex;
            }
        }
    }

    /// Truncation of a branch to its consumed characteristic terms.
    fn trunc(&self, rep: usize) -> Result<PlaneBranch, GraphError> {
        let pairs: Vec<(i128, i128)> = self.model.terms[rep][..self.next[rep]]
            .iter()
            .filter(|t| matches!(t.kind, TermKind::Characteristic(_)))
            .map(|t| (t.winding, t.numer))
            .collect();
        let chars = if pairs.is_empty() {
            CharExponents::smooth()
        } else {
            chars_from_pairs(&pairs)?
        };
        Ok(gens_from_char(&chars))
    }

    /// Value vector of a curvette: coordinate `i` is its intersection with
    /// branch `i` at the supplied contact.
    fn values<F: Fn(usize) -> ContactPair>(
        &self,
        theta: &PlaneBranch,
        contact_of: F,
    ) -> Result<Vec<i128>, GraphError> {
        (0..self.et.r())
            .map(|i| {
                intersection_from_contact(self.et.branch(i), theta, contact_of(i))
                    .map_err(GraphError::from)
            })
            .collect()
    }

    fn consume(&mut self, lo: usize, hi: usize) {
        for j in lo..hi {
            let is_char = matches!(
                self.model.terms[j][self.next[j]].kind,
                TermKind::Characteristic(_)
            );
            self.next[j] += 1;
            if is_char {
                self.chars_done[j] += 1;
            }
        }
    }

    /// Dead-arc pair for a consumed characteristic term of `[lo, hi)`,
    /// chained below `attach`; returns the star.
    fn generator_arc(&mut self, lo: usize, hi: usize, attach: usize) -> Result<usize, GraphError> {
        let rep = lo;
        let term = self.term(rep).expect("characteristic term").clone();
        let p = term.winding;
        let qp = self.chars_done[rep];
        let theta = self.trunc(rep)?;
        let cap = free_capacity(self.et.branch(rep), qp).expect("term bounds the free run");
        let rho_value = self.values(&theta, |i| {
            if i >= lo && i < hi {
                ContactPair::new(qp, cap + 1)
            } else {
                self.et.contact(rep, i)
            }
        })?;
        let rho_pairing = intersection_from_contact(&theta, &theta, ContactPair::new(qp, cap + 1))?;
        let sigma_value: Vec<i128> = rho_value.iter().map(|v| v * p).collect();
        let mut sigma_pairs: Vec<(i128, i128)> = self.model.terms[rep][..self.next[rep]]
            .iter()
            .filter(|t| matches!(t.kind, TermKind::Characteristic(_)))
            .map(|t| (t.winding, t.numer))
            .collect();
        sigma_pairs.push((term.winding, term.numer));
        let theta_sigma = gens_from_char(&chars_from_pairs(&sigma_pairs)?);
        let sigma_pairing =
            intersection_from_contact(&theta_sigma, &theta_sigma, ContactPair::new(qp + 1, 0))?;
        let rho = self.add_vertex(VertexKind::DeadEnd, rho_value, Some(p - 1), rho_pairing);
        let sigma = self.add_vertex(VertexKind::DeadArcStar, sigma_value, None, sigma_pairing);
        self.connect(attach, sigma);
        self.connect(sigma, rho);
        let arc = DeadArc {
            rho,
            sigma,
            multiple: p,
        };
        if self.sigma0.is_none() {
            self.below_arcs.push(arc);
        } else {
            self.tilde_arcs.push(arc);
        }
        self.consume(lo, hi);
        Ok(sigma)
    }

    fn process(&mut self, node: &PackageNode, attach: usize) -> Result<(), GraphError> {
        let lo = node.branches[0];
        let hi = lo + node.branches.len();
        let mut attach = attach;
        if node.is_leaf() {
            loop {
                self.skip_stale(lo, hi);
                match self.term(lo) {
                    Some(t) if matches!(t.kind, TermKind::Characteristic(_)) => {
                        attach = self.generator_arc(lo, hi, attach)?;
                    }
                    Some(_) => {
                        return Err(GraphError::Internal(format!(
                            "live separation term on finished branch {}",
                            lo
                        )))
                    }
                    None => break,
                }
            }
            self.arrows[lo] = Some(attach);
            return Ok(());
        }
        let ContactPair { q, c } = node.contact.unwrap();
        let shared = if c == 0 { q - 1 } else { q };
        while self.chars_done[lo] < shared {
            self.skip_stale(lo, hi);
            attach = self.generator_arc(lo, hi, attach)?;
        }
        self.skip_stale(lo, hi);
        let qp = self.chars_done[lo];
        let theta_prefix = self.trunc(lo)?;
        let in_node = |i: usize| i >= lo && i < hi;
        let child_sets: Vec<Vec<usize>> =
            node.children.iter().map(|c| c.branches.clone()).collect();
        match node.star_kind.unwrap() {
            StarKind::OrdinarySeparation => {
                let center = if qp == 0 && c == 1 {
                    // separation at the first divisor itself
                    0
                } else {
                    let value = self.values(&theta_prefix, |i| {
                        if in_node(i) {
                            ContactPair::new(qp, c)
                        } else {
                            self.et.contact(lo, i)
                        }
                    })?;
                    let pairing = intersection_from_contact(
                        &theta_prefix,
                        &theta_prefix,
                        ContactPair::new(qp, c),
                    )?;
                    let v = self.add_vertex(VertexKind::ProperStar, value, None, pairing);
                    self.connect(attach, v);
                    v
                };
                if self.sigma0.is_none() {
                    self.sigma0 = Some(center);
                }
                for (a, xs) in child_sets.iter().enumerate() {
                    for ys in &child_sets[a + 1..] {
                        self.mark_separation(xs, ys, center);
                    }
                }
                for child in &node.children {
                    self.consume(child.branches[0], child.branches[0] + child.branches.len());
                }
                for child in &node.children {
                    self.process(child, center)?;
                }
            }
            StarKind::DeadArcStar => {
                let t = node.smooth_count;
                debug_assert!(node.children.len() > t);
                let cap_sing = free_capacity(self.et.branch(node.children[t].branches[0]), qp)
                    .expect("singular package has a bounded run");
                // The shared maximal-contact point.
                let t_value = self.values(&theta_prefix, |i| {
                    if in_node(i) {
                        let cap = free_capacity(self.et.branch(i), qp);
                        match cap {
                            Some(l) if l <= cap_sing => ContactPair::new(qp, l + 1),
                            _ => ContactPair::new(qp, cap_sing + 1),
                        }
                    } else {
                        self.et.contact(lo, i)
                    }
                })?;
                let t_pairing = intersection_from_contact(
                    &theta_prefix,
                    &theta_prefix,
                    ContactPair::new(qp, cap_sing + 1),
                )?;
                // Singular children grouped into blocks of equal terms.
                struct Block {
                    winding: i128,
                    numer: i128,
                    children: Vec<usize>,
                    rep: usize,
                }
                let mut blocks: Vec<Block> = Vec::new();
                for (k, child) in node.children.iter().enumerate().skip(t) {
                    let rep = child.branches[0];
                    let term = self.term(rep).expect("singular term");
                    match blocks.last_mut() {
                        Some(b) if b.winding == term.winding && b.numer == term.numer => {
                            b.children.push(k)
                        }
                        _ => blocks.push(Block {
                            winding: term.winding,
                            numer: term.numer,
                            children: vec![k],
                            rep,
                        }),
                    }
                }
                // Star chain from the root side inwards.
                let mut block_vertices = vec![0usize; blocks.len()];
                for (b, block) in blocks.iter().enumerate().rev() {
                    let mut theta_pairs: Vec<(i128, i128)> = self.model.terms[block.rep]
                        [..self.next[block.rep]]
                        .iter()
                        .filter(|tm| matches!(tm.kind, TermKind::Characteristic(_)))
                        .map(|tm| (tm.winding, tm.numer))
                        .collect();
                    theta_pairs.push((block.winding, block.numer));
                    let theta = gens_from_char(&chars_from_pairs(&theta_pairs)?);
                    let block_set: BTreeSet<usize> = block
                        .children
                        .iter()
                        .flat_map(|&k| node.children[k].branches.iter().copied())
                        .collect();
                    let value = self.values(&theta, |i| {
                        if block_set.contains(&i) {
                            ContactPair::new(qp + 1, 0)
                        } else if in_node(i) {
                            self.et.contact(block.rep, i)
                        } else {
                            self.et.contact(lo, i)
                        }
                    })?;
                    let pairing =
                        intersection_from_contact(&theta, &theta, ContactPair::new(qp + 1, 0))?;
                    let v = self.add_vertex(VertexKind::ProperStar, value, None, pairing);
                    self.connect(attach, v);
                    attach = v;
                    block_vertices[b] = v;
                    if self.sigma0.is_none() {
                        self.sigma0 = Some(v);
                    }
                }
                // The dead end exists when no smooth package passes through.
                let smooth_attach = if t == 0 {
                    let p1 = blocks[0].winding;
                    let expect: Vec<i128> = t_value.iter().map(|v| v * p1).collect();
                    if self.vertices[block_vertices[0]].value != expect {
                        return Err(GraphError::Internal(
                            "dead-arc multiple law fails at a separation".into(),
                        ));
                    }
                    let rho =
                        self.add_vertex(VertexKind::DeadEnd, t_value, Some(p1 - 1), t_pairing);
                    self.vertices[block_vertices[0]].kind = VertexKind::DeadArcStar;
                    self.connect(block_vertices[0], rho);
                    let arc = DeadArc {
                        rho,
                        sigma: block_vertices[0],
                        multiple: p1,
                    };
                    if Some(block_vertices[0]) == self.sigma0 {
                        self.below_arcs.push(arc);
                    } else {
                        self.tilde_arcs.push(arc);
                    }
                    None
                } else if t >= 2 {
                    let tv = self.add_vertex(VertexKind::ProperStar, t_value, None, t_pairing);
                    self.connect(block_vertices[0], tv);
                    Some(tv)
                } else {
                    Some(block_vertices[0])
                };
                // Separation vertices of crossing pairs.
                let block_of_child = |k: usize| -> Option<usize> {
                    blocks.iter().position(|b| b.children.contains(&k))
                };
                for a in 0..node.children.len() {
                    for bidx in (a + 1)..node.children.len() {
                        let vertex = match (block_of_child(a), block_of_child(bidx)) {
                            (None, None) => smooth_attach.expect("two smooth children"),
                            (None, Some(b)) | (Some(b), None) => block_vertices[b],
                            (Some(b1), Some(b2)) => block_vertices[b1.max(b2)],
                        };
                        self.mark_separation(&child_sets[a], &child_sets[bidx], vertex);
                    }
                }
                for child in &node.children {
                    self.consume(child.branches[0], child.branches[0] + child.branches.len());
                }
                for (k, child) in node.children.iter().enumerate() {
                    let at = match block_of_child(k) {
                        None => smooth_attach.expect("smooth child has a pass-through point"),
                        Some(b) => block_vertices[b],
                    };
                    self.process(child, at)?;
                }
            }
        }
        Ok(())
    }
}

/// Builds the reduced dual graph. Branch coordinates follow the refined good
/// order of the input.
pub fn build(et: &EquisigType) -> Result<DualGraph, GraphError> {
    let (perm, _) = validate_and_order(et)?;
    let ordered = et.reordered(&perm);
    let (_, tree) = validate_and_order(&ordered)?;
    let model = topological_model(&ordered)?;
    let r = ordered.r();
    let mut b = Builder {
        et: &ordered,
        model: &model,
        next: vec![0; r],
        chars_done: vec![0; r],
        vertices: Vec::new(),
        edges: Vec::new(),
        arrows: vec![None; r],
        below_arcs: Vec::new(),
        tilde_arcs: Vec::new(),
        sigma0: None,
        separation: vec![vec![0; r]; r],
    };
    let origin_value: Vec<i128> = (0..r).map(|i| ordered.branch(i).multiplicity()).collect();
    let origin = b.add_vertex(VertexKind::Origin, origin_value, None, 1);
    b.process(&tree.root, origin)?;
    let sigma0 = match b.sigma0 {
        Some(s) => s,
        None => b.arrows[0].expect("arrow placed"),
    };
    let mut g = DualGraph {
        r,
        vertices: b.vertices,
        edges: b.edges,
        arrows: b.arrows.into_iter().map(Option::unwrap).collect(),
        origin,
        sigma0,
        below_arcs: b.below_arcs,
        tilde_arcs: b.tilde_arcs,
        separation: b.separation,
    };
    let mut degree = vec![0usize; g.vertices.len()];
    for &(a, bb) in &g.edges {
        degree[a] += 1;
        degree[bb] += 1;
    }
    for &at in &g.arrows {
        degree[at] += 1;
    }
    if g.sigma0 == g.origin {
        degree[g.origin] += 1;
    }
    let has_arc: BTreeSet<usize> = g
        .below_arcs
        .iter()
        .chain(&g.tilde_arcs)
        .map(|a| a.sigma)
        .collect();
    for v in g.vertices.iter_mut() {
        v.valence = degree[v.id];
        let base = if v.id == g.sigma0 {
            v.valence.saturating_sub(2)
        } else {
            v.valence.saturating_sub(1)
        };
        v.s = if has_arc.contains(&v.id) {
            base.saturating_sub(1)
        } else {
            base
        };
    }
    for arc in g.below_arcs.iter().chain(&g.tilde_arcs) {
        let rho = &g.vertices[arc.rho].value;
        let sigma = &g.vertices[arc.sigma].value;
        let ok = rho
            .iter()
            .zip(sigma)
            .all(|(r0, s0)| *s0 == r0 * arc.multiple);
        if !ok {
            return Err(GraphError::Internal(format!(
                "dead-arc multiple law fails at vertex {}",
                arc.sigma
            )));
        }
    }
    if r > 1 {
        g.check_intersections(&ordered)?;
    }
    Ok(g)
}
