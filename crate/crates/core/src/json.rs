//! JSON documents for D-sets, trees, splittings, partial maps and windows.
//!
//! Element and node ids used as object keys are decimal strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dset::{ColorId, DSet, ElementId};
use crate::error::{Error, Result};
use crate::homtypes::PartialIso;
use crate::indiscernible::SequenceWindow;
use crate::splitting::Splitting;
use crate::tree::{LeafTree, NodeId};

#[derive(Serialize, Deserialize)]
struct DSetDoc {
    n: usize,
    #[serde(default)]
    colors: Option<BTreeMap<String, ColorId>>,
    positives: Vec<[ElementId; 4]>,
}

#[derive(Serialize, Deserialize)]
struct TreeDoc {
    nodes: Vec<NodeId>,
    edges: Vec<[NodeId; 2]>,
    leaves: BTreeMap<String, ElementId>,
}

#[derive(Deserialize)]
struct SplittingDoc {
    sectors: Vec<Vec<ElementId>>,
}

#[derive(Deserialize)]
struct PartialIsoDoc {
    pairs: Vec<[ElementId; 2]>,
}

#[derive(Deserialize)]
struct WindowDoc {
    rows: Vec<Vec<ElementId>>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(format!("{what}: {e}")))
}

fn parse_key(key: &str, what: &str) -> Result<usize> {
    key.parse().map_err(|_| Error::Malformed(format!("{what} key {key:?} is not an id")))
}

pub fn dset_to_value(d: &DSet) -> Value {
    let colors = d.elements().map(|e| (e.to_string(), d.color(e))).collect();
    let doc = DSetDoc { n: d.len(), colors: Some(colors), positives: d.positives().iter().map(|q| q.as_array()).collect() };
    serde_json::to_value(doc).expect("plain data serializes")
}

/// Quads are re-canonicalized; duplicates after canonicalization are
/// rejected. Missing colours mean colour 0 everywhere, otherwise every
/// element needs one.
pub fn dset_from_str(text: &str) -> Result<DSet> {
    let doc: DSetDoc = parse(text, "dset")?;
    let d = DSet::new(doc.n, doc.positives)?;
    match doc.colors {
        None => Ok(d),
        Some(map) => {
            let mut colors = vec![None; doc.n];
            for (key, c) in map {
                let e = parse_key(&key, "colors")?;
                d.check_id(e)?;
                colors[e] = Some(c);
            }
            let colors = colors
                .into_iter()
                .enumerate()
                .map(|(e, c)| c.ok_or_else(|| Error::Malformed(format!("element {e} has no colour"))))
                .collect::<Result<Vec<_>>>()?;
            d.with_colors(colors)
        }
    }
}

pub fn tree_to_value(t: &LeafTree) -> Value {
    let doc = TreeDoc {
        nodes: t.nodes().collect(),
        edges: t.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        leaves: t.labels().iter().map(|(v, e)| (v.to_string(), *e)).collect(),
    };
    serde_json::to_value(doc).expect("plain data serializes")
}

pub fn tree_from_str(text: &str) -> Result<LeafTree> {
    let doc: TreeDoc = parse(text, "tree")?;
    let labels = doc
        .leaves
        .iter()
        .map(|(k, &e)| Ok((parse_key(k, "leaves")?, e)))
        .collect::<Result<BTreeMap<NodeId, ElementId>>>()?;
    LeafTree::from_parts(doc.nodes, doc.edges.into_iter().map(|[u, v]| (u, v)), labels)
}

pub fn splitting_from_str(text: &str) -> Result<Splitting> {
    let doc: SplittingDoc = parse(text, "splitting")?;
    let mut seen = std::collections::BTreeSet::new();
    for s in &doc.sectors {
        if s.is_empty() {
            return Err(Error::NotAPartition("empty sector".into()));
        }
        for &e in s {
            if !seen.insert(e) {
                return Err(Error::NotAPartition(format!("element {e} appears twice")));
            }
        }
    }
    Ok(Splitting::from_sectors(doc.sectors))
}

pub fn partial_iso_from_str(text: &str) -> Result<PartialIso> {
    let doc: PartialIsoDoc = parse(text, "partial map")?;
    PartialIso::new(doc.pairs.into_iter().map(|[x, y]| (x, y)))
}

pub fn window_from_str(text: &str) -> Result<SequenceWindow> {
    let doc: WindowDoc = parse(text, "window")?;
    SequenceWindow::new(doc.rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{d_from_tree, labeled_form};

    #[test]
    fn dset_round_trip() {
        let d = DSet::new(5, [[3, 4, 0, 1], [0, 2, 3, 4]]).unwrap().with_colors(vec![0, 1, 0, 1, 2]).unwrap();
        let text = dset_to_value(&d).to_string();
        assert_eq!(dset_from_str(&text).unwrap(), d);
    }

    #[test]
    fn dset_loader_checks() {
        let plain = dset_from_str(r#"{"n":4,"positives":[[2,3,1,0]]}"#).unwrap();
        assert!(plain.holds(0, 1, 2, 3));
        assert_eq!(plain.colors(), &[0, 0, 0, 0]);
        let dup = dset_from_str(r#"{"n":4,"positives":[[0,1,2,3],[3,2,1,0]]}"#);
        assert!(matches!(dup, Err(Error::DuplicateQuad(_))));
        let partial = dset_from_str(r#"{"n":2,"colors":{"0":1},"positives":[]}"#);
        assert!(matches!(partial, Err(Error::Malformed(_))));
        assert!(matches!(dset_from_str("{"), Err(Error::Malformed(_))));
    }

    #[test]
    fn tree_round_trip() {
        let t = crate::generators::fixture_tree("CAT4").unwrap();
        let back = tree_from_str(&tree_to_value(&t).to_string()).unwrap();
        assert_eq!(labeled_form(&back), labeled_form(&t));
        assert_eq!(d_from_tree(&back), d_from_tree(&t));
    }

    #[test]
    fn small_documents() {
        assert_eq!(splitting_from_str(r#"{"sectors":[[2,3],[0,1]]}"#).unwrap().sectors(), &[vec![0, 1], vec![2, 3]]);
        assert!(splitting_from_str(r#"{"sectors":[[0,1],[1]]}"#).is_err());
        assert_eq!(partial_iso_from_str(r#"{"pairs":[[0,2]]}"#).unwrap().get(0), Some(2));
        assert_eq!(window_from_str(r#"{"rows":[[1],[2]]}"#).unwrap().len(), 2);
    }
}
