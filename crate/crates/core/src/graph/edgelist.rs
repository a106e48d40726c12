use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use super::{Network, NodeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadWarning {
    SelfLoop { line: usize, label: String },
    DuplicateEdge { line: usize, a: String, b: String },
    /// The file was disconnected; only the largest component was kept.
    Disconnected { kept_nodes: usize, dropped_nodes: usize },
}

#[derive(Debug, Clone)]
pub struct LoadedNetwork {
    pub network: Network,
    /// Original label of each dense node id.
    pub labels: Vec<String>,
    pub warnings: Vec<LoadWarning>,
}

pub fn load_edgelist(path: impl AsRef<Path>) -> Result<LoadedNetwork> {
    let text = std::fs::read_to_string(path)?;
    parse_edgelist(&text)
}

/// Parses whitespace-separated `u v` pairs, one per line; `#` starts a
/// comment and extra columns are ignored. Labels become dense ids in order
/// of first appearance.
pub fn parse_edgelist(text: &str) -> Result<LoadedNetwork> {
    let mut ids: HashMap<&str, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut warnings = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Parse { line, message: format!("expected two node labels, got {content:?}") }),
        };
        let mut intern = |label| -> NodeId {
            *ids.entry(label).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let (u, v) = (intern(a), intern(b));
        if u == v {
            warnings.push(LoadWarning::SelfLoop { line, label: a.to_string() });
            continue;
        }
        if !seen.insert((u.min(v), u.max(v))) {
            warnings.push(LoadWarning::DuplicateEdge { line, a: a.to_string(), b: b.to_string() });
            continue;
        }
        edges.push((u, v));
    }

    if edges.is_empty() {
        return Err(Error::Empty("edge list contains no edges"));
    }
    let full = Network::new(labels.len(), edges.iter().copied())?;
    if full.is_connected() {
        return Ok(LoadedNetwork { network: full, labels, warnings });
    }

    let mut best: Vec<NodeId> = Vec::new();
    let mut assigned = vec![false; full.node_count()];
    for start in 0..full.node_count() {
        if assigned[start] {
            continue;
        }
        let comp = full.component_of(start);
        for &v in &comp {
            assigned[v] = true;
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best.sort_unstable();
    let mut remap = vec![usize::MAX; full.node_count()];
    for (new, &old) in best.iter().enumerate() {
        remap[old] = new;
    }
    let kept_edges = edges
        .iter()
        .filter(|&&(u, _)| remap[u] != usize::MAX)
        .map(|&(u, v)| (remap[u], remap[v]));
    let network = Network::connected(best.len(), kept_edges)?;
    warnings.push(LoadWarning::Disconnected { kept_nodes: best.len(), dropped_nodes: full.node_count() - best.len() });
    let labels = best.iter().map(|&old| labels[old].clone()).collect();
    Ok(LoadedNetwork { network, labels, warnings })
}

/// Serializes a network as `u v` lines preceded by `#`-prefixed header lines.
pub fn write_edgelist(net: &Network, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    for &(u, v) in net.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_path() {
        let loaded = parse_edgelist("a b\nb c\n").unwrap();
        assert_eq!(loaded.network.node_count(), 3);
        assert_eq!(loaded.network.edge_count(), 2);
        assert!(loaded.warnings.is_empty());
        assert_eq!(loaded.labels, vec!["a", "b", "c"]);
    }

    #[test]
    fn duplicates_and_self_loops_are_dropped_with_warnings() {
        let loaded = parse_edgelist("a b\na b\na a\n").unwrap();
        assert_eq!(loaded.network.node_count(), 2);
        assert_eq!(loaded.network.edge_count(), 1);
        assert_eq!(loaded.warnings.len(), 2);
    }

    #[test]
    fn reversed_duplicate_is_a_duplicate() {
        let loaded = parse_edgelist("a b\nb a\n").unwrap();
        assert_eq!(loaded.network.edge_count(), 1);
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn comments_and_extra_columns() {
        let loaded = parse_edgelist("# header\n\n1 2 0.5\n2 3 # trailing\n").unwrap();
        assert_eq!(loaded.network.edge_count(), 2);
        assert_eq!(loaded.labels, vec!["1", "2", "3"]);
    }

    #[test]
    fn keeps_largest_component() {
        let loaded = parse_edgelist("x y\na b\nb c\nc d\n").unwrap();
        assert_eq!(loaded.network.node_count(), 4);
        assert_eq!(loaded.network.edge_count(), 3);
        assert_eq!(loaded.labels, vec!["a", "b", "c", "d"]);
        assert!(loaded.network.is_connected());
        assert!(matches!(
            loaded.warnings.last(),
            Some(LoadWarning::Disconnected { kept_nodes: 4, dropped_nodes: 2 })
        ));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_edgelist("# nothing\n"), Err(Error::Empty(_))));
        assert!(matches!(parse_edgelist("a a\n"), Err(Error::Empty(_))));
        assert!(matches!(parse_edgelist("a b\nlonely\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edgelist("/nonexistent/netcap.txt"), Err(Error::Io(_))));
    }

    #[test]
    fn write_then_parse() {
        let net = Network::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let text = write_edgelist(&net, &["model=test".to_string()]);
        assert!(text.starts_with("# model=test\n"));
        let back = parse_edgelist(&text).unwrap();
        assert_eq!(back.network, net);
    }
}
