use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::dset::{DSet, ElementId};
use crate::error::{Error, Result};
use crate::splitting::{extend_splitting, node_splittings, EdgePolicy, Splitting};

/// A finite sequence of k-tuples; row order is the index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceWindow {
    rows: Vec<Vec<ElementId>>,
}

impl SequenceWindow {
    pub fn new(rows: Vec<Vec<ElementId>>) -> Result<SequenceWindow> {
        let arity = rows.first().map_or(1, Vec::len);
        if arity == 0 {
            return Err(Error::Malformed("rows must be non-empty".into()));
        }
        if rows.iter().any(|r| r.len() != arity) {
            return Err(Error::Malformed("rows have different arities".into()));
        }
        Ok(SequenceWindow { rows })
    }

    pub fn singletons(ids: &[ElementId]) -> SequenceWindow {
        SequenceWindow { rows: ids.iter().map(|&e| vec![e]).collect() }
    }

    pub fn rows(&self) -> &[Vec<ElementId>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.rows.first().map_or(1, Vec::len)
    }

    pub fn column(&self, c: usize) -> Vec<ElementId> {
        self.rows.iter().map(|r| r[c]).collect()
    }

    pub fn elements(&self) -> BTreeSet<ElementId> {
        self.rows.iter().flatten().copied().collect()
    }

    fn check(&self, d: &DSet) -> Result<()> {
        self.rows.iter().try_for_each(|r| d.check_ids(r))
    }
}

/// Why a window is not order-indiscernible. Index tuples refer to window
/// positions; relation tuples are in atom order `D(a_i a_j; a_k a_l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderWitness {
    /// `a_i = a_j` at `equal` but not at `unequal`.
    Equality { equal: [usize; 2], unequal: [usize; 2] },
    /// Same order type, different truth values.
    Relation { first: [usize; 4], second: [usize; 4], first_holds: bool },
    /// Order-invariant, but with a positive pattern other than `a_i a_j|a_k a_l`
    /// for `i < j < k < l`.
    Pattern { indices: [usize; 4] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum WindowClass {
    Constant,
    Petaled,
    Monotonic,
    NotIndiscernible { witness: OrderWitness },
}

const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

fn increasing_quads(len: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..len).flat_map(move |i| {
        (i + 1..len).flat_map(move |j| (j + 1..len).flat_map(move |k| (k + 1..len).map(move |l| [i, j, k, l])))
    })
}

/// Classifies a window of single elements.
pub fn classify_window(d: &DSet, w: &SequenceWindow) -> Result<WindowClass> {
    if w.arity() != 1 {
        return Err(Error::Precondition("classification needs a window of single elements".into()));
    }
    w.check(d)?;
    classify_sequence(d, &w.column(0))
}

pub fn classify_sequence(d: &DSet, s: &[ElementId]) -> Result<WindowClass> {
    d.check_ids(s)?;
    if s.len() < 4 {
        return Err(Error::Precondition(format!("window of length {} is shorter than 4", s.len())));
    }
    if s.iter().all(|&e| e == s[0]) {
        return Ok(WindowClass::Constant);
    }
    let pairs = || (0..s.len()).flat_map(|i| (i + 1..s.len()).map(move |j| [i, j]));
    if let Some(equal) = pairs().find(|&[i, j]| s[i] == s[j]) {
        let unequal = pairs().find(|&[i, j]| s[i] != s[j]).expect("window is not constant");
        return Ok(WindowClass::NotIndiscernible { witness: OrderWitness::Equality { equal, unequal } });
    }
    let atom = |q: [usize; 4], p: [usize; 4]| -> ([usize; 4], bool) {
        let idx = [q[p[0]], q[p[1]], q[p[2]], q[p[3]]];
        (idx, d.holds(s[idx[0]], s[idx[1]], s[idx[2]], s[idx[3]]))
    };
    let base: Vec<([usize; 4], bool)> = PAIRINGS.iter().map(|&p| atom([0, 1, 2, 3], p)).collect();
    for q in increasing_quads(s.len()).skip(1) {
        for (pi, &p) in PAIRINGS.iter().enumerate() {
            let (second, v) = atom(q, p);
            if v != base[pi].1 {
                let witness = OrderWitness::Relation { first: base[pi].0, second, first_holds: base[pi].1 };
                return Ok(WindowClass::NotIndiscernible { witness });
            }
        }
    }
    Ok(match (base[0].1, base[1].1, base[2].1) {
        (false, false, false) => WindowClass::Petaled,
        (true, false, false) => WindowClass::Monotonic,
        _ => {
            let i = if base[1].1 { 1 } else { 2 };
            WindowClass::NotIndiscernible { witness: OrderWitness::Pattern { indices: base[i].0 } }
        }
    })
}

/// Every witness placing `x` in the hull of the monotonic sequence `s`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HullWitnesses {
    /// `(i, j, k)` with `a_i a_k | a_j x`.
    pub h1: Vec<[usize; 3]>,
    /// `(i, j, k)` with no relation on `{a_i, a_j, a_k, x}`.
    pub h2: Vec<[usize; 3]>,
    /// `(i, j, k, l)` with `a_i x | a_k a_l` and `a_i a_j | x a_l`.
    pub h3: Vec<[usize; 4]>,
}

impl HullWitnesses {
    pub fn is_empty(&self) -> bool {
        self.h1.is_empty() && self.h2.is_empty() && self.h3.is_empty()
    }
}

pub fn monotonic_witnesses(d: &DSet, s: &[ElementId], x: ElementId) -> HullWitnesses {
    let mut out = HullWitnesses::default();
    if s.contains(&x) {
        return out;
    }
    let n = s.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (s[i], s[j], s[k]);
                if d.holds(a, c, b, x) {
                    out.h1.push([i, j, k]);
                }
                if !d.holds(a, b, c, x) && !d.holds(a, c, b, x) && !d.holds(a, x, b, c) {
                    out.h2.push([i, j, k]);
                }
            }
        }
    }
    for [i, j, k, l] in increasing_quads(n) {
        if d.holds(s[i], x, s[k], s[l]) && d.holds(s[i], s[j], x, s[l]) {
            out.h3.push([i, j, k, l]);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HullParts {
    Constant,
    Petaled { splitting: Splitting, sectors: Vec<Vec<ElementId>> },
    /// First witness for each member outside the window.
    Monotonic {
        h1: BTreeMap<ElementId, [usize; 3]>,
        h2: BTreeMap<ElementId, [usize; 3]>,
        h3: BTreeMap<ElementId, [usize; 4]>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Frontiers {
    pub left: Vec<ElementId>,
    pub right: Vec<ElementId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnHull {
    pub class: WindowClass,
    pub hull: Vec<ElementId>,
    pub parts: HullParts,
    pub frontiers: Option<Frontiers>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HullResult {
    pub hull: Vec<ElementId>,
    pub columns: Vec<ColumnHull>,
}

/// Minimum window length for the hull of a monotonic column.
pub const MIN_MONOTONIC_HULL_LEN: usize = 5;

pub fn hull_window(d: &DSet, w: &SequenceWindow) -> Result<HullResult> {
    w.check(d)?;
    let mut columns = Vec::new();
    let mut total = BTreeSet::new();
    for c in 0..w.arity() {
        let col = w.column(c);
        let column = column_hull(d, &col)?;
        total.extend(column.hull.iter().copied());
        columns.push(column);
    }
    Ok(HullResult { hull: total.into_iter().collect(), columns })
}

fn column_hull(d: &DSet, s: &[ElementId]) -> Result<ColumnHull> {
    let class = classify_sequence(d, s)?;
    match class {
        WindowClass::Constant => {
            Ok(ColumnHull { class, hull: Vec::new(), parts: HullParts::Constant, frontiers: None })
        }
        WindowClass::Petaled => {
            let splitting = extend_splitting(d, s, &Splitting::singletons(s), EdgePolicy::default())?;
            let sectors: Vec<Vec<ElementId>> =
                splitting.sectors().iter().filter(|sec| sec.iter().any(|e| s.contains(e))).cloned().collect();
            let mut hull: Vec<ElementId> = sectors.concat();
            hull.sort_unstable();
            Ok(ColumnHull { class, hull, parts: HullParts::Petaled { splitting, sectors }, frontiers: None })
        }
        WindowClass::Monotonic => {
            if s.len() < MIN_MONOTONIC_HULL_LEN {
                return Err(Error::Precondition(format!(
                    "monotonic column of length {} is shorter than {MIN_MONOTONIC_HULL_LEN}",
                    s.len()
                )));
            }
            let (mut h1, mut h2, mut h3) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
            let mut hull: BTreeSet<ElementId> = s.iter().copied().collect();
            for x in d.elements() {
                let wit = monotonic_witnesses(d, s, x);
                if let Some(&t) = wit.h1.first() {
                    h1.insert(x, t);
                }
                if let Some(&t) = wit.h2.first() {
                    h2.insert(x, t);
                }
                if let Some(&t) = wit.h3.first() {
                    h3.insert(x, t);
                }
                if !wit.is_empty() {
                    hull.insert(x);
                }
            }
            let frontiers = Some(frontiers(d, s)?);
            Ok(ColumnHull {
                class,
                hull: hull.into_iter().collect(),
                parts: HullParts::Monotonic { h1, h2, h3 },
                frontiers,
            })
        }
        WindowClass::NotIndiscernible { witness } => {
            Err(Error::Precondition(format!("column is not indiscernible: {witness:?}")))
        }
    }
}

/// Elements beyond either end of a monotonic window. For each triple
/// `i < j < k` take the node splitting separating `a_i, a_j, a_k`; the left
/// frontier is the intersection of the sectors of `a_i`, the right one of
/// the sectors of `a_k`, both without the window itself.
pub fn frontiers(d: &DSet, s: &[ElementId]) -> Result<Frontiers> {
    if classify_sequence(d, s)? != WindowClass::Monotonic {
        return Err(Error::Precondition("frontiers need a monotonic window".into()));
    }
    if s.len() < MIN_MONOTONIC_HULL_LEN {
        return Err(Error::Precondition("frontiers need a window of length at least 5".into()));
    }
    let outside: BTreeSet<ElementId> = d.elements().filter(|e| !s.contains(e)).collect();
    let (mut left, mut right) = (outside.clone(), outside);
    let n = s.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let triple = [s[i], s[j], s[k]];
                let c = extend_splitting(d, &triple, &Splitting::singletons(&triple), EdgePolicy::default())?;
                let li = c.sector_containing(s[i]).expect("extension covers the window");
                let rk = c.sector_containing(s[k]).expect("extension covers the window");
                left.retain(|&e| li.contains(e));
                right.retain(|&e| rk.contains(e));
            }
        }
    }
    Ok(Frontiers { left: left.into_iter().collect(), right: right.into_iter().collect() })
}

/// A slot of an atom: a parameter or a window variable at some column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Param(ElementId),
    Var { var: usize, column: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomWitness {
    pub atom: [Term; 4],
    pub first_rows: Vec<usize>,
    pub first_elements: [ElementId; 4],
    pub first_holds: bool,
    pub second_rows: Vec<usize>,
    pub second_elements: [ElementId; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndiscVerdict {
    pub indiscernible: bool,
    pub witness: Option<AtomWitness>,
}

/// Minimum window length for indiscernibility tests.
pub const MIN_INDISC_LEN: usize = 5;

const SYMMETRIES: [[usize; 4]; 8] =
    [[0, 1, 2, 3], [1, 0, 2, 3], [0, 1, 3, 2], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 0, 1], [2, 3, 1, 0], [3, 2, 1, 0]];

fn order_type(rows: &[usize]) -> usize {
    rows.iter().fold(0, |acc, &r| acc * 4 + rows.iter().filter(|&&o| o < r).count())
}

/// Order-invariance of every atom built from window variables and
/// parameters from `params`. Four-variable atoms carry no parameter, so they
/// check the window itself.
pub fn weakly_indiscernible_over(d: &DSet, w: &SequenceWindow, params: &[ElementId]) -> Result<IndiscVerdict> {
    w.check(d)?;
    d.check_ids(params)?;
    if w.len() < MIN_INDISC_LEN {
        return Err(Error::Precondition(format!("window of length {} is shorter than {MIN_INDISC_LEN}", w.len())));
    }
    let params: BTreeSet<ElementId> = params.iter().copied().collect();
    let len = w.len();
    for m in 1..=4usize {
        let mut options: Vec<Term> = params.iter().map(|&b| Term::Param(b)).collect();
        for var in 0..m {
            for column in 0..w.arity() {
                options.push(Term::Var { var, column });
            }
        }
        let k = options.len();
        for code in 0..k.pow(4) {
            let t = [code / k.pow(3), code / k.pow(2) % k, code / k % k, code % k];
            if SYMMETRIES.iter().any(|p| [t[p[0]], t[p[1]], t[p[2]], t[p[3]]] < t) {
                continue;
            }
            let atom = t.map(|i| options[i]);
            let used: BTreeSet<usize> = atom
                .iter()
                .filter_map(|term| match term {
                    Term::Var { var, .. } => Some(*var),
                    Term::Param(_) => None,
                })
                .collect();
            if used.len() != m {
                continue;
            }
            if let Some(witness) = scan_atom(d, w, &atom, m, len) {
                return Ok(IndiscVerdict { indiscernible: false, witness: Some(witness) });
            }
        }
    }
    Ok(IndiscVerdict { indiscernible: true, witness: None })
}

fn scan_atom(d: &DSet, w: &SequenceWindow, atom: &[Term; 4], m: usize, len: usize) -> Option<AtomWitness> {
    let mut seen: [Option<(bool, [usize; 4])>; 256] = [None; 256];
    let mut rows = [0usize; 4];
    let resolve = |rows: &[usize; 4]| -> [ElementId; 4] {
        atom.map(|term| match term {
            Term::Param(b) => b,
            Term::Var { var, column } => w.rows()[rows[var]][column],
        })
    };
    for code in 0..len.pow(m as u32) {
        let mut c = code;
        for slot in (0..m).rev() {
            rows[slot] = c % len;
            c /= len;
        }
        let ot = order_type(&rows[..m]);
        let e = resolve(&rows);
        let v = d.holds(e[0], e[1], e[2], e[3]);
        match seen[ot] {
            None => seen[ot] = Some((v, rows)),
            Some((first, first_rows)) if first != v => {
                return Some(AtomWitness {
                    atom: *atom,
                    first_rows: first_rows[..m].to_vec(),
                    first_elements: resolve(&first_rows),
                    first_holds: first,
                    second_rows: rows[..m].to_vec(),
                    second_elements: e,
                });
            }
            Some(_) => {}
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutualVerdict {
    pub mutual: bool,
    /// First window over the elements of the second.
    pub first_over_second: IndiscVerdict,
    pub second_over_first: IndiscVerdict,
}

pub fn mutually_indiscernible(d: &DSet, s1: &SequenceWindow, s2: &SequenceWindow) -> Result<MutualVerdict> {
    let e1: Vec<ElementId> = s1.elements().into_iter().collect();
    let e2: Vec<ElementId> = s2.elements().into_iter().collect();
    let first_over_second = weakly_indiscernible_over(d, s1, &e2)?;
    let second_over_first = weakly_indiscernible_over(d, s2, &e1)?;
    Ok(MutualVerdict {
        mutual: first_over_second.indiscernible && second_over_first.indiscernible,
        first_over_second,
        second_over_first,
    })
}

/// The lexicographically least `k` elements lying in `k` distinct sectors of
/// one node splitting.
pub fn detect_petaled(d: &DSet, k: usize) -> Result<Option<Vec<ElementId>>> {
    if k < 3 {
        return Err(Error::Precondition("k must be at least 3".into()));
    }
    if d.len() < k {
        return Ok(None);
    }
    Ok(node_splittings(d)?
        .iter()
        .filter(|s| s.len() >= k)
        .map(|s| s.sectors()[..k].iter().map(|sec| sec[0]).collect::<Vec<_>>())
        .min())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_types_distinguish_patterns() {
        assert_eq!(order_type(&[0, 1, 2]), order_type(&[3, 5, 7]));
        assert_ne!(order_type(&[0, 1, 2]), order_type(&[1, 0, 2]));
        assert_eq!(order_type(&[4, 4, 1]), order_type(&[2, 2, 0]));
        assert_ne!(order_type(&[4, 4, 1]), order_type(&[4, 1, 1]));
    }

    #[test]
    fn flower_windows() {
        let f = DSet::flower(5);
        assert_eq!(classify_sequence(&f, &[0, 1, 2, 3, 4]).unwrap(), WindowClass::Petaled);
        assert_eq!(classify_sequence(&f, &[2, 2, 2, 2]).unwrap(), WindowClass::Constant);
        let h = hull_window(&f, &SequenceWindow::singletons(&[0, 1, 2, 3])).unwrap();
        assert_eq!(h.hull, vec![0, 1, 2, 3]);
        assert_eq!(detect_petaled(&f, 4).unwrap(), Some(vec![0, 1, 2, 3]));
        assert_eq!(detect_petaled(&f, 6).unwrap(), None);
    }

    #[test]
    fn repeated_element_is_witnessed() {
        let f = DSet::flower(5);
        match classify_sequence(&f, &[0, 1, 0, 2]).unwrap() {
            WindowClass::NotIndiscernible { witness: OrderWitness::Equality { equal, unequal } } => {
                assert_eq!(equal, [0, 2]);
                assert_eq!(unequal, [0, 1]);
            }
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn constant_window_is_indiscernible_over_anything() {
        let d = DSet::new(5, [[0, 1, 2, 3], [0, 1, 2, 4], [0, 1, 3, 4], [0, 2, 3, 4], [1, 2, 3, 4]]);
        let d = d.unwrap_or_else(|_| DSet::flower(5));
        let w = SequenceWindow::singletons(&[3; 6]);
        assert!(weakly_indiscernible_over(&d, &w, &[0, 1, 2, 4]).unwrap().indiscernible);
    }

    #[test]
    fn short_windows_are_rejected() {
        let f = DSet::flower(5);
        assert!(classify_sequence(&f, &[0, 1, 2]).is_err());
        assert!(weakly_indiscernible_over(&f, &SequenceWindow::singletons(&[0, 1, 2, 3]), &[4]).is_err());
        assert!(SequenceWindow::new(vec![vec![0, 1], vec![2]]).is_err());
    }
}
