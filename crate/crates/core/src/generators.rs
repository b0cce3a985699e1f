use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dset::{DSet, ElementId};
use crate::error::{Error, Result};
use crate::indiscernible::{classify_sequence, SequenceWindow, WindowClass};
use crate::splitting::enumerate_splittings;
use crate::tree::{canonical_leaf_order, d_from_tree, shape_form, LeafTree, NodeId};

/// Default bound on `enum_trees`.
pub const ENUM_LIMIT: usize = 8;

/// Tree whose leaves `0..leaves` are the nodes of the same id; inner nodes
/// are the remaining ids in `edges`.
fn build(leaves: usize, edges: &[(NodeId, NodeId)]) -> LeafTree {
    let nodes: BTreeSet<NodeId> = edges.iter().flat_map(|&(u, v)| [u, v]).chain(0..leaves).collect();
    let labels = (0..leaves).map(|e| (e, e)).collect();
    LeafTree::from_parts(nodes, edges.iter().copied(), labels).expect("fixture trees are valid")
}

fn flower_tree(k: usize) -> LeafTree {
    match k {
        0 => LeafTree::empty(),
        1 => build(1, &[]),
        2 => build(2, &[(0, 1)]),
        _ => build(k, &(0..k).map(|i| (i, k)).collect::<Vec<_>>()),
    }
}

pub const FIXTURE_NAMES: &[&str] =
    &["STAR3", "STAR4", "CAT4", "CAT4E", "CAT4M", "CAT5", "CAT5X", "CAT5Y", "CAT5L", "CAT6", "MIX", "FLW<k>"];

/// Named fixture trees. Leaves are numbered in the order listed in the
/// catalogue (`a, b, c, …` or `a0, a1, …`, then any extra points).
pub fn fixture_tree(name: &str) -> Result<LeafTree> {
    let t = match name {
        "STAR3" => flower_tree(3),
        "STAR4" => flower_tree(4),
        "CAT4" => build(4, &[(0, 4), (1, 4), (4, 5), (5, 2), (5, 3)]),
        "CAT4E" => build(5, &[(0, 5), (1, 5), (4, 5), (5, 6), (6, 2), (6, 3)]),
        "CAT4M" => build(5, &[(0, 5), (1, 5), (5, 7), (7, 6), (7, 4), (6, 2), (6, 3)]),
        "CAT5" | "CAT6" => build(5, &[(0, 5), (1, 5), (5, 6), (6, 2), (6, 7), (7, 3), (7, 4)]),
        "CAT5X" => build(6, &[(0, 6), (1, 6), (6, 9), (9, 5), (9, 7), (7, 2), (7, 8), (8, 3), (8, 4)]),
        "CAT5Y" => build(6, &[(0, 6), (1, 6), (5, 6), (6, 7), (7, 2), (7, 8), (8, 3), (8, 4)]),
        "CAT5L" => build(7, &[(0, 7), (1, 7), (7, 10), (10, 5), (10, 6), (7, 8), (8, 2), (8, 9), (9, 3), (9, 4)]),
        "MIX" => build(5, &[(0, 5), (1, 5), (5, 6), (6, 2), (6, 3), (6, 4)]),
        _ => {
            let k = name
                .strip_prefix("FLW")
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
            flower_tree(k)
        }
    };
    Ok(t)
}

pub fn gen_fixture(name: &str) -> Result<(LeafTree, DSet)> {
    let t = fixture_tree(name)?;
    let d = d_from_tree(&t);
    Ok((t, d))
}

/// Renumbers nodes: leaf of element `e` becomes node `e`, inner nodes follow
/// in their previous order.
pub fn normalize_ids(t: &LeafTree) -> LeafTree {
    let k = t.leaf_count();
    let mut map = BTreeMap::new();
    let mut next = k;
    for v in t.nodes() {
        let id = match t.label(v) {
            Some(e) => e,
            None => {
                next += 1;
                next - 1
            }
        };
        map.insert(v, id);
    }
    let edges: Vec<(NodeId, NodeId)> = t.edges().iter().map(|(u, v)| (map[u], map[v])).collect();
    let labels = (0..k).map(|e| (e, e)).collect();
    LeafTree::from_parts(map.values().copied(), edges, labels).expect("renumbering keeps validity")
}

/// Relabels leaves along the canonical walk and renumbers nodes.
fn canonical_labeling(t: &LeafTree) -> LeafTree {
    let order = canonical_leaf_order(t);
    let mut perm = vec![0; order.len()];
    for (pos, &e) in order.iter().enumerate() {
        perm[e] = pos;
    }
    normalize_ids(&t.relabeled(&perm).expect("permutation of the leaves"))
}

/// One tree per shape with exactly `leaves` leaves, canonically labelled,
/// ordered by number of inner nodes and then by shape.
pub fn enum_trees_exact(leaves: usize) -> Vec<LeafTree> {
    if leaves <= 3 {
        return if leaves == 0 { Vec::new() } else { vec![flower_tree(leaves)] };
    }
    let mut shapes: BTreeMap<(usize, String), LeafTree> = BTreeMap::new();
    for t in enum_trees_exact(leaves - 1) {
        let mut grown = Vec::new();
        for v in t.internal_nodes() {
            let mut g = t.clone();
            g.attach_leaf(v).expect("inner node");
            grown.push(g);
        }
        for (u, v) in t.edges() {
            let mut g = t.clone();
            g.attach_leaf_on_edge(u, v).expect("edge");
            grown.push(g);
        }
        for g in grown {
            shapes.entry((g.internal_nodes().len(), shape_form(&g))).or_insert(g);
        }
    }
    shapes.into_values().map(|t| canonical_labeling(&t)).collect()
}

/// Every shape with exactly `leaves` leaves, bounded by `ENUM_LIMIT`.
pub fn enum_trees(leaves: usize) -> Result<Vec<LeafTree>> {
    enum_trees_with_limit(leaves, ENUM_LIMIT)
}

pub fn enum_trees_with_limit(leaves: usize, limit: usize) -> Result<Vec<LeafTree>> {
    if leaves > limit {
        return Err(Error::TooLarge { n: leaves, limit });
    }
    Ok(enum_trees_exact(leaves))
}

/// Every shape with 1 to `max_leaves` leaves, by increasing leaf count.
pub fn enum_trees_up_to(max_leaves: usize) -> Result<Vec<LeafTree>> {
    if max_leaves > ENUM_LIMIT {
        return Err(Error::TooLarge { n: max_leaves, limit: ENUM_LIMIT });
    }
    Ok((1..=max_leaves).flat_map(enum_trees_exact).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeSpec {
    Star { leaves: usize },
    /// Spine of inner nodes, two leaves at each end node and one at every
    /// other; leaves numbered along the spine.
    Caterpillar { leaves: usize },
    /// Every inner node of the given degree.
    DRegular { degree: usize, leaves: usize },
    /// Random insertions at inner nodes and edges, then a random relabelling.
    Random { leaves: usize },
    /// Shape number `index` (mod the count) among `enum_trees_exact(leaves)`.
    Enumerated { leaves: usize, index: usize },
}

impl TreeSpec {
    /// Parses `star:5`, `caterpillar:7`, `d_regular:3:6`, `random:9`,
    /// `enumerated:6:2`.
    pub fn parse(s: &str) -> Result<TreeSpec> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| Error::Malformed(format!("bad tree spec {s:?}")))
        };
        let spec = match parts[0] {
            "star" => TreeSpec::Star { leaves: num(1)? },
            "caterpillar" => TreeSpec::Caterpillar { leaves: num(1)? },
            "d_regular" => TreeSpec::DRegular { degree: num(1)?, leaves: num(2)? },
            "random" => TreeSpec::Random { leaves: num(1)? },
            "enumerated" => TreeSpec::Enumerated { leaves: num(1)?, index: num(2)? },
            _ => return Err(Error::Malformed(format!("unknown tree kind in {s:?}"))),
        };
        Ok(spec)
    }
}

pub fn caterpillar(leaves: usize) -> Result<LeafTree> {
    if leaves < 3 {
        return Err(Error::Infeasible("a caterpillar needs at least three leaves".into()));
    }
    let spine: Vec<NodeId> = (0..leaves - 2).map(|i| leaves + i).collect();
    let mut edges: Vec<(NodeId, NodeId)> = spine.windows(2).map(|w| (w[0], w[1])).collect();
    for e in 0..leaves {
        let at = spine[e.saturating_sub(1).min(spine.len() - 1)];
        edges.push((e, at));
    }
    Ok(build(leaves, &edges))
}

fn d_regular(degree: usize, leaves: usize, rng: &mut ChaCha8Rng) -> Result<LeafTree> {
    if degree < 3 || leaves < degree || (leaves - 2) % (degree - 2) != 0 {
        return Err(Error::Infeasible(format!("no tree with {leaves} leaves has all inner degrees {degree}")));
    }
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new()];
    for _ in 0..degree {
        let v = adj.len();
        adj.push(vec![0]);
        adj[0].push(v);
    }
    let mut leaf_count = degree;
    while leaf_count < leaves {
        let ls: Vec<NodeId> = (0..adj.len()).filter(|&v| adj[v].len() == 1).collect();
        let l = *ls.choose(rng).expect("a tree has leaves");
        for _ in 0..degree - 1 {
            let v = adj.len();
            adj.push(vec![l]);
            adj[l].push(v);
        }
        leaf_count += degree - 2;
    }
    let leaf_nodes: Vec<NodeId> = (0..adj.len()).filter(|&v| adj[v].len() == 1).collect();
    let labels = leaf_nodes.iter().enumerate().map(|(e, &v)| (v, e)).collect();
    let edges = (0..adj.len()).flat_map(|u| adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
    let t = LeafTree::from_parts(0..adj.len(), edges.collect::<Vec<_>>(), labels)?;
    Ok(normalize_ids(&t))
}

fn random_tree(leaves: usize, rng: &mut ChaCha8Rng) -> Result<LeafTree> {
    if leaves <= 3 {
        return Ok(flower_tree(leaves));
    }
    let mut t = flower_tree(3);
    while t.leaf_count() < leaves {
        let inner = t.internal_nodes();
        let edges = t.edges();
        let pick = rng.gen_range(0..inner.len() + edges.len());
        if pick < inner.len() {
            t.attach_leaf(inner[pick])?;
        } else {
            let (u, v) = edges[pick - inner.len()];
            t.attach_leaf_on_edge(u, v)?;
        }
    }
    let mut perm: Vec<ElementId> = (0..leaves).collect();
    perm.shuffle(rng);
    Ok(normalize_ids(&t.relabeled(&perm)?))
}

/// Deterministic in `(spec, seed)`.
pub fn gen_random(spec: TreeSpec, seed: u64) -> Result<LeafTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec {
        TreeSpec::Star { leaves } => Ok(flower_tree(leaves)),
        TreeSpec::Caterpillar { leaves } => caterpillar(leaves),
        TreeSpec::DRegular { degree, leaves } => d_regular(degree, leaves, &mut rng),
        TreeSpec::Random { leaves } => random_tree(leaves, &mut rng),
        TreeSpec::Enumerated { leaves, index } => {
            if leaves > ENUM_LIMIT {
                return Err(Error::TooLarge { n: leaves, limit: ENUM_LIMIT });
            }
            let all = enum_trees_exact(leaves);
            if all.is_empty() {
                return Err(Error::Infeasible("no tree with zero leaves".into()));
            }
            Ok(all[index % all.len()].clone())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coloring {
    Uniform,
    RoundRobin { colors: u32 },
    /// Colour a seeded choice of sector with 0 and everything else with 1,
    /// choosing only sectors where a swap-type witness exists.
    StarveSector,
}

impl Coloring {
    pub fn parse(s: &str) -> Result<Coloring> {
        match s.split(':').collect::<Vec<_>>()[..] {
            ["uniform"] => Ok(Coloring::Uniform),
            ["starve"] => Ok(Coloring::StarveSector),
            ["round_robin", k] => k
                .parse()
                .ok()
                .filter(|&k| k > 0)
                .map(|colors| Coloring::RoundRobin { colors })
                .ok_or_else(|| Error::Malformed(format!("bad colouring {s:?}"))),
            _ => Err(Error::Malformed(format!("unknown colouring {s:?}"))),
        }
    }
}

fn starvable(d: &DSet, sector: &[ElementId]) -> bool {
    let inside = |e: ElementId| sector.binary_search(&e).is_ok();
    d.elements().filter(|&b| !inside(b)).any(|b0| {
        sector.iter().any(|&a1| {
            sector.iter().any(|&a2| a1 != a2 && d.elements().any(|a3| a3 != a1 && a3 != a2 && d.holds(b0, a1, a2, a3)))
        })
    })
}

pub fn apply_coloring(d: &DSet, coloring: Coloring, seed: u64) -> Result<DSet> {
    let colors = match coloring {
        Coloring::Uniform => vec![0; d.len()],
        Coloring::RoundRobin { colors } => d.elements().map(|e| e as u32 % colors.max(1)).collect(),
        Coloring::StarveSector => {
            let sectors: BTreeSet<Vec<ElementId>> = enumerate_splittings(d)?
                .iter()
                .flat_map(|s| s.sectors().to_vec())
                .filter(|s| s.len() >= 2 && s.len() < d.len())
                .collect();
            let candidates: Vec<Vec<ElementId>> = sectors.into_iter().filter(|s| starvable(d, s)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let chosen = candidates
                .choose(&mut rng)
                .ok_or_else(|| Error::Infeasible("no sector can be starved".into()))?;
            d.elements().map(|e| if chosen.binary_search(&e).is_ok() { 0 } else { 1 }).collect()
        }
    };
    d.clone().with_colors(colors)
}

/// Where the extra point of a hull fixture sits on the caterpillar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum Attachment {
    /// Subdividing the spine edge after spine node `i`.
    SpineEdge { i: usize },
    /// On spine node `i`.
    SpineNode { i: usize },
    /// Subdividing the leaf edge of window element `j`.
    LeafEdge { j: usize },
    /// A new inner node next to an end spine node, carrying two leaves.
    EndBranch { right: bool },
    /// A new inner node on the leaf edge of an end element, carrying two more leaves.
    BeyondEnd { right: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HullFamily {
    /// Points on spine edges.
    SpineEdges,
    /// Points on spine nodes and leaf edges.
    NodesAndLeaves,
    /// Branches at or beyond the ends.
    Ends,
}

#[derive(Debug, Clone)]
pub struct HullFixture {
    pub tree: LeafTree,
    pub dset: DSet,
    pub window: Vec<ElementId>,
    pub attached: Vec<ElementId>,
    pub attachment: Attachment,
}

/// Caterpillar on `spine_len` window leaves with one attachment per fixture.
pub fn hull_family(family: HullFamily, spine_len: usize) -> Result<Vec<HullFixture>> {
    let base = caterpillar(spine_len)?;
    let spine: Vec<NodeId> = (0..spine_len - 2).map(|i| spine_len + i).collect();
    let attachments: Vec<Attachment> = match family {
        HullFamily::SpineEdges => (0..spine.len() - 1).map(|i| Attachment::SpineEdge { i }).collect(),
        HullFamily::NodesAndLeaves => (0..spine.len())
            .map(|i| Attachment::SpineNode { i })
            .chain((0..spine_len).map(|j| Attachment::LeafEdge { j }))
            .collect(),
        HullFamily::Ends => [false, true]
            .into_iter()
            .flat_map(|right| [Attachment::EndBranch { right }, Attachment::BeyondEnd { right }])
            .collect(),
    };
    attachments
        .into_iter()
        .map(|attachment| {
            let mut t = base.clone();
            let mut attached = Vec::new();
            match attachment {
                Attachment::SpineEdge { i } => attached.push(t.attach_leaf_on_edge(spine[i], spine[i + 1])?.1),
                Attachment::SpineNode { i } => attached.push(t.attach_leaf(spine[i])?),
                Attachment::LeafEdge { j } => {
                    let leaf = t.leaf_node(j);
                    let at = t.neighbors(leaf).next().expect("leaf has a neighbour");
                    attached.push(t.attach_leaf_on_edge(leaf, at)?.1);
                }
                Attachment::EndBranch { right } => {
                    let end = if right { spine[spine.len() - 1] } else { spine[0] };
                    let y1 = t.attach_leaf(end)?;
                    let (_, y2) = t.attach_leaf_on_edge(t.leaf_node(y1), end)?;
                    attached.extend([y1, y2]);
                }
                Attachment::BeyondEnd { right } => {
                    let leaf = t.leaf_node(if right { spine_len - 1 } else { 0 });
                    let at = t.neighbors(leaf).next().expect("leaf has a neighbour");
                    let (m, y1) = t.attach_leaf_on_edge(leaf, at)?;
                    let y2 = t.attach_leaf(m)?;
                    attached.extend([y1, y2]);
                }
            }
            let dset = d_from_tree(&t);
            Ok(HullFixture { tree: t, dset, window: (0..spine_len).collect(), attached, attachment })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct WindowPair {
    pub dset: DSet,
    pub first: SequenceWindow,
    pub second: SequenceWindow,
}

fn pick_window(d: &DSet, order: &[ElementId], len: usize, rng: &mut ChaCha8Rng, monotone: bool) -> Vec<ElementId> {
    let mut idx: Vec<usize> = (0..order.len()).collect();
    idx.shuffle(rng);
    let mut chosen: Vec<usize> = idx[..len].to_vec();
    if monotone {
        chosen.sort_unstable();
    }
    let w: Vec<ElementId> = chosen.iter().map(|&i| order[i]).collect();
    debug_assert!(matches!(
        classify_sequence(d, &w),
        Ok(WindowClass::Petaled | WindowClass::Monotonic | WindowClass::Constant)
    ));
    w
}

/// Two indiscernible windows of length 5 or 6 in one fixture: petaled windows
/// in a flower, monotonic windows along a caterpillar spine (sometimes in
/// separate stretches), or windows taken from a random tree's node splitting
/// and spine paths.
pub fn window_pair(seed: u64) -> Result<WindowPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(5..=6);
    match seed % 3 {
        0 => {
            let k = rng.gen_range(10..=12);
            let d = DSet::flower(k);
            let order: Vec<ElementId> = (0..k).collect();
            let first = pick_window(&d, &order, len, &mut rng, false);
            let second = pick_window(&d, &order, len, &mut rng, false);
            Ok(WindowPair { dset: d, first: SequenceWindow::singletons(&first), second: SequenceWindow::singletons(&second) })
        }
        1 => {
            let k = rng.gen_range(2 * len..=2 * len + 2);
            let d = d_from_tree(&caterpillar(k)?);
            let order: Vec<ElementId> = (0..k).collect();
            let (first, second) = if rng.gen_bool(0.5) {
                let cut = rng.gen_range(len..=k - len);
                let (lo, hi) = order.split_at(cut);
                (pick_window(&d, lo, len, &mut rng, true), pick_window(&d, hi, len, &mut rng, true))
            } else {
                (pick_window(&d, &order, len, &mut rng, true), pick_window(&d, &order, len, &mut rng, true))
            };
            Ok(WindowPair { dset: d, first: SequenceWindow::singletons(&first), second: SequenceWindow::singletons(&second) })
        }
        _ => {
            // A caterpillar spine with extra random leaves hung on it.
            let k = rng.gen_range(8..=10);
            let mut t = caterpillar(k)?;
            for _ in 0..rng.gen_range(1..=3) {
                let inner = t.internal_nodes();
                let v = inner[rng.gen_range(0..inner.len())];
                t.attach_leaf(v)?;
            }
            let d = d_from_tree(&t);
            let order: Vec<ElementId> = (0..k).collect();
            let mut candidates = Vec::new();
            for _ in 0..2 {
                let w = pick_window(&d, &order, len, &mut rng, true);
                candidates.push(w);
            }
            let first = candidates[0].clone();
            let second = candidates[1].clone();
            Ok(WindowPair { dset: d, first: SequenceWindow::singletons(&first), second: SequenceWindow::singletons(&second) })
        }
    }
}
