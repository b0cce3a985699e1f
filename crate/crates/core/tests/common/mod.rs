//! Brute-force oracles shared by the integration tests. None of these call
//! the library routine they are used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use dset_core::tree::LeafTree;
use dset_core::{DSet, ElementId, Splitting};

/// Node set of the path between the leaves of two elements, by BFS over the
/// edge list.
pub fn leaf_path(t: &LeafTree, a: ElementId, b: ElementId) -> BTreeSet<usize> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (u, v) in t.edges() {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let (start, goal) = (t.leaf_node(a), t.leaf_node(b));
    let mut parent = BTreeMap::from([(start, start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in adj.get(&u).into_iter().flatten() {
            if !parent.contains_key(&v) {
                parent.insert(v, u);
                queue.push_back(v);
            }
        }
    }
    let mut path = BTreeSet::from([goal]);
    let mut cur = goal;
    while cur != start {
        cur = parent[&cur];
        path.insert(cur);
    }
    path
}

/// Path disjointness, including degenerate quadruples.
pub fn path_relation(t: &LeafTree, w: ElementId, x: ElementId, y: ElementId, z: ElementId) -> bool {
    leaf_path(t, w, x).is_disjoint(&leaf_path(t, y, z))
}

/// Every quadruple agrees with path disjointness.
pub fn matches_tree(d: &DSet, t: &LeafTree) -> bool {
    let n = d.len();
    all_quads(n).all(|[w, x, y, z]| d.holds(w, x, y, z) == path_relation(t, w, x, y, z))
}

pub fn all_quads(n: usize) -> impl Iterator<Item = [ElementId; 4]> {
    (0..n).flat_map(move |w| (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| [w, x, y, z]))))
}

/// The two splitting conditions, quadruple by quadruple.
pub fn splitting_oracle(d: &DSet, sectors: &[Vec<ElementId>]) -> bool {
    if sectors.len() < 2 {
        return false;
    }
    let mut sector_of = BTreeMap::new();
    for (i, s) in sectors.iter().enumerate() {
        for &e in s {
            sector_of.insert(e, i);
        }
    }
    let universe: Vec<ElementId> = sector_of.keys().copied().collect();
    for &a in &universe {
        for &b in &universe {
            for &c in &universe {
                for &e in &universe {
                    let same = sector_of[&a] == sector_of[&b];
                    let out = sector_of[&c] != sector_of[&a] && sector_of[&e] != sector_of[&a];
                    if same && out && !d.holds(a, b, c, e) {
                        return false;
                    }
                    let distinct: BTreeSet<usize> = [a, b, c, e].iter().map(|v| sector_of[v]).collect();
                    if distinct.len() == 4 && d.holds(a, b, c, e) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All set partitions of `universe` with at least two blocks.
pub fn partitions(universe: &[ElementId]) -> Vec<Vec<Vec<ElementId>>> {
    fn go(rest: &[ElementId], acc: &mut Vec<Vec<ElementId>>, out: &mut Vec<Vec<Vec<ElementId>>>) {
        let Some((&first, tail)) = rest.split_first() else {
            if acc.len() >= 2 {
                let mut p = acc.clone();
                p.sort();
                out.push(p);
            }
            return;
        };
        for i in 0..acc.len() {
            acc[i].push(first);
            go(tail, acc, out);
            acc[i].pop();
        }
        acc.push(vec![first]);
        go(tail, acc, out);
        acc.pop();
    }
    let mut out = Vec::new();
    go(universe, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn splittings_oracle(d: &DSet) -> BTreeSet<Vec<Vec<ElementId>>> {
    let universe: Vec<ElementId> = d.elements().collect();
    partitions(&universe).into_iter().filter(|p| splitting_oracle(d, p)).collect()
}

pub fn sectors_of(s: &Splitting) -> Vec<Vec<ElementId>> {
    s.sectors().to_vec()
}

/// `a ~ b` iff some `x` in the set has `ab|ex`; classes by closure.
pub fn induced_oracle(d: &DSet, subset: &[ElementId], e: ElementId) -> Vec<Vec<ElementId>> {
    let mut classes: Vec<Vec<ElementId>> = Vec::new();
    for &a in subset {
        let related: Vec<usize> = (0..classes.len())
            .filter(|&i| classes[i].iter().any(|&b| a == b || subset.iter().any(|&x| d.holds(a, b, e, x))))
            .collect();
        let mut merged = vec![a];
        for &i in related.iter().rev() {
            merged.extend(classes.remove(i));
        }
        merged.sort_unstable();
        classes.push(merged);
    }
    classes.sort();
    classes
}

/// A slot in a test atom: parameter or window variable.
#[derive(Clone, Copy, Debug)]
pub enum Slot {
    Param(ElementId),
    Var(usize),
}

/// Weak indiscernibility of a single-column window over `params`: every atom
/// has one truth value over all strictly increasing row tuples.
pub fn weakly_indiscernible_oracle(d: &DSet, s: &[ElementId], params: &[ElementId]) -> bool {
    for m in 1..=4usize {
        let mut slots: Vec<Slot> = params.iter().map(|&p| Slot::Param(p)).collect();
        slots.extend((0..m).map(Slot::Var));
        let rows: Vec<Vec<usize>> = increasing(s.len(), m);
        for t in all_quads(slots.len()) {
            let atom = t.map(|i| slots[i]);
            let mut seen = None;
            for r in &rows {
                let v = atom.map(|sl| match sl {
                    Slot::Param(p) => p,
                    Slot::Var(i) => s[r[i]],
                });
                let h = d.holds(v[0], v[1], v[2], v[3]);
                match seen {
                    None => seen = Some(h),
                    Some(prev) if prev != h => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

pub fn increasing(len: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, m: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == m {
            out.push(acc.clone());
            return;
        }
        for i in start..len {
            acc.push(i);
            go(i + 1, len, m, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, m, &mut Vec::new(), &mut out);
    out
}

/// All maps `m ∪ {x ↦ y}` that preserve colours and every atom, by direct
/// evaluation over the domain.
pub fn extensions_oracle(d: &DSet, pairs: &[(ElementId, ElementId)], x: ElementId) -> Vec<ElementId> {
    let range: BTreeSet<ElementId> = pairs.iter().map(|p| p.1).collect();
    d.elements()
        .filter(|y| !range.contains(y))
        .filter(|&y| {
            let mut all = pairs.to_vec();
            all.push((x, y));
            all.iter().all(|&(a, b)| d.color(a) == d.color(b))
                && all_quads(all.len()).all(|[i, j, k, l]| {
                    let (p, q, r, s) = (all[i], all[j], all[k], all[l]);
                    d.holds(p.0, q.0, r.0, s.0) == d.holds(p.1, q.1, r.1, s.1)
                })
        })
        .collect()
}
