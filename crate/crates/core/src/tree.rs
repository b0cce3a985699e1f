use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::io;

use crate::axioms::check_axioms;
use crate::bits::BitSet;
use crate::dset::{ColorId, DSet, ElementId, Quad};
use crate::error::{Error, Result};
use crate::splitting::{induced_splitting, Splitting};

pub type NodeId = usize;

/// A finite tree whose labelled nodes (leaves) carry the element ids
/// `0..leaf_count()`. Unlabelled nodes have degree at least three, labelled
/// nodes degree at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafTree {
    adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
    labels: BTreeMap<NodeId, ElementId>,
    leaf_of: Vec<NodeId>,
}

impl LeafTree {
    pub fn empty() -> LeafTree {
        LeafTree { adj: BTreeMap::new(), labels: BTreeMap::new(), leaf_of: Vec::new() }
    }

    /// Validating constructor.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        labels: BTreeMap<NodeId, ElementId>,
    ) -> Result<LeafTree> {
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        for v in nodes {
            if adj.insert(v, BTreeSet::new()).is_some() {
                return Err(Error::InvalidTree(format!("node {v} listed twice")));
            }
        }
        let mut edge_count = 0;
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at {u}")));
            }
            if !adj.contains_key(&u) || !adj.contains_key(&v) {
                return Err(Error::InvalidTree(format!("edge {u}-{v} mentions an unknown node")));
            }
            if !adj.get_mut(&u).unwrap().insert(v) {
                return Err(Error::InvalidTree(format!("edge {u}-{v} listed twice")));
            }
            adj.get_mut(&v).unwrap().insert(u);
            edge_count += 1;
        }
        let tree = LeafTree { adj, labels, leaf_of: Vec::new() };
        tree.finish(edge_count)
    }

    fn finish(mut self, edge_count: usize) -> Result<LeafTree> {
        let n_nodes = self.adj.len();
        if n_nodes > 0 && edge_count != n_nodes - 1 {
            return Err(Error::InvalidTree(format!("{n_nodes} nodes but {edge_count} edges")));
        }
        if let Some(&start) = self.adj.keys().next() {
            if self.bfs_parents(start).len() != n_nodes {
                return Err(Error::InvalidTree("graph is not connected".into()));
            }
        }
        let mut leaf_of = vec![usize::MAX; self.labels.len()];
        for (&node, &e) in &self.labels {
            if !self.adj.contains_key(&node) {
                return Err(Error::InvalidTree(format!("label on unknown node {node}")));
            }
            if e >= leaf_of.len() || leaf_of[e] != usize::MAX {
                return Err(Error::InvalidTree(format!(
                    "leaf labels must be exactly 0..{} without repeats",
                    leaf_of.len()
                )));
            }
            leaf_of[e] = node;
        }
        for (&v, nb) in &self.adj {
            let labelled = self.labels.contains_key(&v);
            if labelled && nb.len() > 1 {
                return Err(Error::InvalidTree(format!("labelled node {v} has degree {}", nb.len())));
            }
            if !labelled && nb.len() < 3 {
                return Err(Error::InvalidTree(format!("unlabelled node {v} has degree {}", nb.len())));
            }
        }
        self.leaf_of = leaf_of;
        Ok(self)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.adj
            .iter()
            .flat_map(|(&u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn internal_nodes(&self) -> Vec<NodeId> {
        self.adj.keys().copied().filter(|v| !self.labels.contains_key(v)).collect()
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj[&v].iter().copied()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn label(&self, v: NodeId) -> Option<ElementId> {
        self.labels.get(&v).copied()
    }

    pub fn labels(&self) -> &BTreeMap<NodeId, ElementId> {
        &self.labels
    }

    pub fn leaf_node(&self, e: ElementId) -> NodeId {
        self.leaf_of[e]
    }

    fn fresh_id(&self) -> NodeId {
        self.adj.keys().next_back().map_or(0, |&m| m + 1)
    }

    fn bfs_parents(&self, start: NodeId) -> BTreeMap<NodeId, Option<NodeId>> {
        let mut parent = BTreeMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[&u] {
                if !parent.contains_key(&v) {
                    parent.insert(v, Some(u));
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Nodes on the path from `u` to `v`, inclusive, starting at `u`.
    pub fn path(&self, u: NodeId, v: NodeId) -> Vec<NodeId> {
        let parent = self.bfs_parents(v);
        let mut out = vec![u];
        let mut cur = u;
        while let Some(Some(p)) = parent.get(&cur) {
            out.push(*p);
            cur = *p;
        }
        out
    }

    /// Leaves in the component of `start` after deleting node `cut`.
    fn leaves_beyond(&self, cut: NodeId, start: NodeId) -> Vec<ElementId> {
        let mut seen = BTreeSet::from([cut, start]);
        let mut stack = vec![start];
        let mut out = Vec::new();
        while let Some(u) = stack.pop() {
            if let Some(e) = self.label(u) {
                out.push(e);
            }
            for &v in &self.adj[&u] {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The partition of the leaves cut out by deleting node `v`.
    pub fn node_partition(&self, v: NodeId) -> Vec<Vec<ElementId>> {
        self.neighbors(v).map(|w| self.leaves_beyond(v, w)).collect()
    }

    /// The two leaf sets on either side of edge `u`-`v`.
    pub fn edge_partition(&self, u: NodeId, v: NodeId) -> (Vec<ElementId>, Vec<ElementId>) {
        (self.leaves_beyond(v, u), self.leaves_beyond(u, v))
    }

    /// Attaches a new leaf, labelled `leaf_count()`, at inner node `at`.
    pub fn attach_leaf(&mut self, at: NodeId) -> Result<ElementId> {
        if !self.contains_node(at) || self.labels.contains_key(&at) {
            return Err(Error::Precondition(format!("node {at} is not an inner node")));
        }
        let leaf = self.fresh_id();
        self.link_new_leaf(leaf, at);
        Ok(self.leaf_count() - 1)
    }

    /// Subdivides edge `u`-`v` by a new inner node and hangs a new leaf there.
    pub fn attach_leaf_on_edge(&mut self, u: NodeId, v: NodeId) -> Result<(NodeId, ElementId)> {
        let m = self.subdivide(u, v)?;
        let leaf = self.fresh_id();
        self.link_new_leaf(leaf, m);
        Ok((m, self.leaf_count() - 1))
    }

    fn subdivide(&mut self, u: NodeId, v: NodeId) -> Result<NodeId> {
        if !self.adj.get(&u).is_some_and(|nb| nb.contains(&v)) {
            return Err(Error::Precondition(format!("{u}-{v} is not an edge")));
        }
        let m = self.fresh_id();
        self.adj.get_mut(&u).unwrap().remove(&v);
        self.adj.get_mut(&v).unwrap().remove(&u);
        self.adj.insert(m, BTreeSet::from([u, v]));
        self.adj.get_mut(&u).unwrap().insert(m);
        self.adj.get_mut(&v).unwrap().insert(m);
        Ok(m)
    }

    fn link_new_leaf(&mut self, leaf: NodeId, at: NodeId) {
        let e = self.leaf_of.len();
        self.adj.insert(leaf, BTreeSet::from([at]));
        self.adj.get_mut(&at).unwrap().insert(leaf);
        self.labels.insert(leaf, e);
        self.leaf_of.push(leaf);
    }

    /// Same tree with element `e` renamed to `perm[e]`.
    pub fn relabeled(&self, perm: &[ElementId]) -> Result<LeafTree> {
        if perm.len() != self.leaf_count() {
            return Err(Error::Precondition("permutation length differs from leaf count".into()));
        }
        let labels = self.labels.iter().map(|(&v, &e)| (v, perm[e])).collect();
        LeafTree::from_parts(self.nodes(), self.edges(), labels)
    }
}

/// The D-relation of path disjointness on the leaves of `t`.
pub fn d_from_tree(t: &LeafTree) -> DSet {
    let n = t.leaf_count();
    let index: BTreeMap<NodeId, usize> = t.nodes().enumerate().map(|(i, v)| (v, i)).collect();
    let mut paths = vec![vec![BitSet::new(index.len()); n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let mut bits = BitSet::new(index.len());
            for v in t.path(t.leaf_node(a), t.leaf_node(b)) {
                bits.set(index[&v]);
            }
            paths[a][b] = bits.clone();
            paths[b][a] = bits;
        }
    }
    let mut positives = BTreeSet::new();
    for w in 0..n {
        for x in w + 1..n {
            for y in w + 1..n {
                if y == x {
                    continue;
                }
                for z in y + 1..n {
                    if z != x && paths[w][x].is_disjoint(&paths[y][z]) {
                        positives.insert(Quad::canonical(w, x, y, z));
                    }
                }
            }
        }
    }
    DSet::from_canonical(n, positives)
}

fn hull_nodes(t: &LeafTree, sector: &[ElementId]) -> BTreeSet<NodeId> {
    let first = t.leaf_node(sector[0]);
    let mut hull = BTreeSet::from([first]);
    for &e in &sector[1..] {
        hull.extend(t.path(first, t.leaf_node(e)));
    }
    hull
}

/// Rebuilds the tree of a finite D-set by inserting elements in increasing
/// order. Element `e` becomes the leaf node `e`; inner nodes get ids from
/// `n` upwards in creation order.
pub fn tree_from_dset(d: &DSet) -> Result<LeafTree> {
    let n = d.len();
    let mut t = LeafTree::empty();
    if n == 0 {
        return Ok(t);
    }
    t.adj.insert(0, BTreeSet::new());
    t.labels.insert(0, 0);
    t.leaf_of.push(0);
    if n >= 2 {
        t.adj.insert(1, BTreeSet::from([0]));
        t.adj.get_mut(&0).unwrap().insert(1);
        t.labels.insert(1, 1);
        t.leaf_of.push(1);
    }
    let mut next_inner = n;
    for e in 2..n {
        let prev: Vec<ElementId> = (0..e).collect();
        let split = induced_splitting(d, &prev, e).map_err(|err| not_representable(d, err.to_string()))?;
        let hulls: Vec<BTreeSet<NodeId>> = split.sectors().iter().map(|s| hull_nodes(&t, s)).collect();
        let attach_at = if split.len() == 2 {
            let free: Vec<(NodeId, NodeId)> = t
                .edges()
                .into_iter()
                .filter(|(u, v)| !hulls.iter().any(|h| h.contains(u) && h.contains(v)))
                .collect();
            let [(u, v)] = free[..] else {
                return Err(not_representable(d, format!("{} edges outside the sector hulls for {e}", free.len())));
            };
            t.adj.get_mut(&u).unwrap().remove(&v);
            t.adj.get_mut(&v).unwrap().remove(&u);
            t.adj.insert(next_inner, BTreeSet::from([u, v]));
            t.adj.get_mut(&u).unwrap().insert(next_inner);
            t.adj.get_mut(&v).unwrap().insert(next_inner);
            next_inner += 1;
            next_inner - 1
        } else {
            let free: Vec<NodeId> = t.nodes().filter(|v| !hulls.iter().any(|h| h.contains(v))).collect();
            match free[..] {
                [v] if !t.labels.contains_key(&v) => v,
                _ => {
                    return Err(not_representable(d, format!("{} nodes outside the sector hulls for {e}", free.len())))
                }
            }
        };
        t.adj.insert(e, BTreeSet::from([attach_at]));
        t.adj.get_mut(&attach_at).unwrap().insert(e);
        t.labels.insert(e, e);
        t.leaf_of.push(e);
    }
    if d_from_tree(&t).positives() != d.positives() {
        return Err(not_representable(d, "reconstructed tree does not reproduce the relation".into()));
    }
    Ok(t)
}

fn not_representable(d: &DSet, context: String) -> Error {
    let report = check_axioms(d);
    let failing = report
        .verdicts()
        .into_iter()
        .take(4)
        .find_map(|(name, v)| v.witness().map(|w| format!("{name} fails at {w:?}")));
    match failing {
        Some(f) => Error::NotRepresentable(format!("{f} ({context})")),
        None => Error::NotRepresentable(context),
    }
}

/// Splittings read off a tree: one per inner node and one per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCorrespondence {
    pub node_splittings: BTreeMap<NodeId, Splitting>,
    pub edge_splittings: BTreeMap<(NodeId, NodeId), Splitting>,
}

impl TreeCorrespondence {
    /// All splittings, sorted and without repeats.
    pub fn all(&self) -> Vec<Splitting> {
        let set: BTreeSet<Splitting> =
            self.node_splittings.values().chain(self.edge_splittings.values()).cloned().collect();
        set.into_iter().collect()
    }
}

pub fn splittings_from_tree(t: &LeafTree) -> TreeCorrespondence {
    let node_splittings =
        t.internal_nodes().into_iter().map(|v| (v, Splitting::from_sectors(t.node_partition(v)))).collect();
    let edge_splittings = t
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = t.edge_partition(u, v);
            ((u, v), Splitting::from_sectors(vec![a, b]))
        })
        .collect();
    TreeCorrespondence { node_splittings, edge_splittings }
}

fn centers(t: &LeafTree) -> Vec<NodeId> {
    let mut deg: BTreeMap<NodeId, usize> = t.adj.iter().map(|(&v, nb)| (v, nb.len())).collect();
    let mut removed = BTreeSet::new();
    let mut layer: Vec<NodeId> = deg.iter().filter(|(_, &k)| k <= 1).map(|(&v, _)| v).collect();
    let mut remaining = deg.len();
    while remaining > 2 {
        remaining -= layer.len();
        removed.extend(layer.iter().copied());
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &t.adj[&v] {
                if !removed.contains(&w) {
                    let k = deg.get_mut(&w).unwrap();
                    *k -= 1;
                    if *k == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    t.nodes().filter(|v| !removed.contains(v)).collect()
}

/// Canonical string for `t`, rooted at its center. `key` names a leaf; two
/// trees get equal strings iff they are isomorphic by a map that preserves
/// those names.
pub fn canonical_form(t: &LeafTree, key: &dyn Fn(ElementId) -> String) -> String {
    let c = centers(t);
    match c[..] {
        [] => String::new(),
        [r] => rooted_code(t, r, None, key),
        [u, v] => {
            let mut sides = [rooted_code(t, u, Some(v), key), rooted_code(t, v, Some(u), key)];
            sides.sort();
            format!("[{}|{}]", sides[0], sides[1])
        }
        _ => unreachable!("a tree has at most two centers"),
    }
}

fn rooted_code(t: &LeafTree, v: NodeId, parent: Option<NodeId>, key: &dyn Fn(ElementId) -> String) -> String {
    if let Some(e) = t.label(v) {
        return format!("L{}", key(e));
    }
    let mut kids: Vec<String> =
        t.neighbors(v).filter(|&w| Some(w) != parent).map(|w| rooted_code(t, w, Some(v), key)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Canonical form ignoring leaf labels.
pub fn shape_form(t: &LeafTree) -> String {
    canonical_form(t, &|_| String::new())
}

/// Canonical form keeping leaf labels.
pub fn labeled_form(t: &LeafTree) -> String {
    canonical_form(t, &|e| format!("{e},"))
}

/// Leaves in the order met by a depth-first walk of the canonical rooting,
/// children visited in canonical-code order.
pub fn canonical_leaf_order(t: &LeafTree) -> Vec<ElementId> {
    fn walk(t: &LeafTree, v: NodeId, parent: Option<NodeId>, out: &mut Vec<ElementId>) {
        if let Some(e) = t.label(v) {
            out.push(e);
            return;
        }
        let mut kids: Vec<(String, NodeId)> = t
            .neighbors(v)
            .filter(|&w| Some(w) != parent)
            .map(|w| (rooted_code(t, w, Some(v), &|_| String::new()), w))
            .collect();
        kids.sort();
        for (_, w) in kids {
            walk(t, w, Some(v), out);
        }
    }
    let mut out = Vec::new();
    match centers(t)[..] {
        [] => {}
        [r] => walk(t, r, None, &mut out),
        [u, v] => {
            let key = |_: ElementId| String::new();
            let (a, b) = if rooted_code(t, u, Some(v), &key) <= rooted_code(t, v, Some(u), &key) { (u, v) } else { (v, u) };
            walk(t, a, Some(b), &mut out);
            walk(t, b, Some(a), &mut out);
        }
        _ => unreachable!("a tree has at most two centers"),
    }
    out
}

/// Graphviz rendering. Leaves show their element id and, when colours are
/// supplied, their colour index.
pub fn export_dot(t: &LeafTree, colors: Option<&[ColorId]>, out: &mut impl io::Write) -> io::Result<()> {
    writeln!(out, "graph tree {{")?;
    for v in t.nodes() {
        match t.label(v) {
            Some(e) => match colors.and_then(|c| c.get(e)) {
                Some(c) => writeln!(
                    out,
                    "  n{v} [shape=box, label=\"{e}\", color_index={c}, style=filled, colorscheme=set19, fillcolor={}];",
                    c % 9 + 1
                )?,
                None => writeln!(out, "  n{v} [shape=box, label=\"{e}\"];")?,
            },
            None => writeln!(out, "  n{v} [shape=point];")?,
        }
    }
    for (u, v) in t.edges() {
        writeln!(out, "  n{u} -- n{v};")?;
    }
    writeln!(out, "}}")
}

pub fn to_dot(t: &LeafTree, colors: Option<&[ColorId]>) -> String {
    let mut buf = Vec::new();
    export_dot(t, colors, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("dot output is ascii")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cat4() -> LeafTree {
        LeafTree::from_parts(
            0..6,
            [(0, 4), (1, 4), (4, 5), (5, 2), (5, 3)],
            BTreeMap::from([(0, 0), (1, 1), (2, 2), (3, 3)]),
        )
        .unwrap()
    }

    fn star(k: usize) -> LeafTree {
        LeafTree::from_parts(0..=k, (0..k).map(|i| (i, k)), (0..k).map(|i| (i, i)).collect()).unwrap()
    }

    #[test]
    fn validation_rejects_bad_trees() {
        let bin = LeafTree::from_parts(0..3, [(0, 2), (1, 2)], BTreeMap::from([(0, 0), (1, 1)]));
        assert!(matches!(bin, Err(Error::InvalidTree(_))));
        let cyc = LeafTree::from_parts(0..3, [(0, 1), (1, 2), (2, 0)], BTreeMap::new());
        assert!(cyc.is_err());
        let gap = LeafTree::from_parts(0..2, [(0, 1)], BTreeMap::from([(0, 0), (1, 2)]));
        assert!(gap.is_err());
    }

    #[test]
    fn cat4_relation() {
        let d = d_from_tree(&cat4());
        assert_eq!(d.positives().iter().map(|q| q.as_array()).collect::<Vec<_>>(), vec![[0, 1, 2, 3]]);
        assert!(d_from_tree(&star(4)).positives().is_empty());
    }

    #[test]
    fn cat4_splittings() {
        let c = splittings_from_tree(&cat4());
        let nodes: BTreeSet<Splitting> = c.node_splittings.values().cloned().collect();
        assert_eq!(
            nodes,
            BTreeSet::from([
                Splitting::from_sectors(vec![vec![0], vec![1], vec![2, 3]]),
                Splitting::from_sectors(vec![vec![0, 1], vec![2], vec![3]]),
            ])
        );
        assert_eq!(c.edge_splittings.len(), 5);
        let s = splittings_from_tree(&star(4));
        assert_eq!((s.node_splittings.len(), s.edge_splittings.len()), (1, 4));
        let two = LeafTree::from_parts(0..2, [(0, 1)], BTreeMap::from([(0, 0), (1, 1)])).unwrap();
        let t = splittings_from_tree(&two);
        assert_eq!((t.node_splittings.len(), t.edge_splittings.len()), (0, 1));
    }

    #[test]
    fn reconstruction_round_trip() {
        for t in [cat4(), star(3), star(5)] {
            let back = tree_from_dset(&d_from_tree(&t)).unwrap();
            assert_eq!(labeled_form(&back), labeled_form(&t));
        }
    }

    #[test]
    fn non_dset_is_rejected() {
        let d = DSet::new(4, [[0, 1, 2, 3], [0, 2, 1, 3]]).unwrap();
        assert!(matches!(tree_from_dset(&d), Err(Error::NotRepresentable(_))));
    }

    #[test]
    fn shapes_distinguish_cat_and_star() {
        assert_ne!(shape_form(&cat4()), shape_form(&star(4)));
        let swapped = cat4().relabeled(&[2, 3, 0, 1]).unwrap();
        assert_eq!(shape_form(&swapped), shape_form(&cat4()));
        assert_ne!(labeled_form(&cat4().relabeled(&[0, 2, 1, 3]).unwrap()), labeled_form(&cat4()));
        assert_eq!(labeled_form(&swapped), labeled_form(&cat4()));
    }

    #[test]
    fn dot_output() {
        let dot = to_dot(&cat4(), None);
        assert_eq!(dot.lines().filter(|l| l.contains("shape=")).count(), 6);
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 5);
        let dot = to_dot(&star(4), Some(&[0, 0, 1, 1]));
        for (e, c) in [(0, 0), (1, 0), (2, 1), (3, 1)] {
            assert!(dot.contains(&format!("label=\"{e}\", color_index={c}")));
        }
    }

    #[test]
    fn attach_keeps_validity() {
        let mut t = cat4();
        let e = t.attach_leaf(4).unwrap();
        assert_eq!(e, 4);
        let (_, x) = t.attach_leaf_on_edge(4, 5).unwrap();
        assert_eq!(x, 5);
        let rebuilt = LeafTree::from_parts(t.nodes(), t.edges(), t.labels().clone()).unwrap();
        assert_eq!(rebuilt, t);
    }
}
