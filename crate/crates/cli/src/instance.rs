use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context};
use netcap::graph::{generate_ba, generate_ws, load_edgelist};
use netcap::Network;
use serde::{Deserialize, Serialize};

/// Where a network comes from: `ba:N:M[:SEED]`, `ws:N:K:P[:SEED]` or an edge-list path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Instance {
    Ba { n: usize, m: usize, seed: u64 },
    Ws { n: usize, k: usize, p: f64, seed: u64 },
    File(PathBuf),
}

impl Instance {
    pub fn build(&self) -> anyhow::Result<Network> {
        Ok(match self {
            Self::Ba { n, m, seed } => generate_ba(*n, *m, *seed)?,
            Self::Ws { n, k, p, seed } => generate_ws(*n, *k, *p, *seed)?,
            Self::File(path) => {
                let loaded = load_edgelist(path).with_context(|| format!("loading {}", path.display()))?;
                for w in &loaded.warnings {
                    log::warn!("{}: {w:?}", path.display());
                }
                loaded.network
            }
        })
    }
}

impl FromStr for Instance {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let seed = |i: usize| -> anyhow::Result<u64> { Ok(parts.get(i).map(|v| v.parse()).transpose()?.unwrap_or(1)) };
        match parts[0] {
            "ba" if (3..=4).contains(&parts.len()) => {
                Ok(Self::Ba { n: parts[1].parse()?, m: parts[2].parse()?, seed: seed(3)? })
            }
            "ws" if (4..=5).contains(&parts.len()) => Ok(Self::Ws {
                n: parts[1].parse()?,
                k: parts[2].parse()?,
                p: parts[3].parse()?,
                seed: seed(4)?,
            }),
            "ba" | "ws" => bail!("expected ba:N:M[:SEED] or ws:N:K:P[:SEED], got {s:?}"),
            _ => Ok(Self::File(PathBuf::from(s))),
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ba { n, m, seed } => write!(f, "ba:{n}:{m}:{seed}"),
            Self::Ws { n, k, p, seed } => write!(f, "ws:{n}:{k}:{p}:{seed}"),
            Self::File(path) => write!(f, "{}", path.display()),
        }
    }
}

impl TryFrom<String> for Instance {
    type Error = anyhow::Error;

    fn try_from(s: String) -> anyhow::Result<Self> {
        s.parse()
    }
}

impl From<Instance> for String {
    fn from(i: Instance) -> String {
        i.to_string()
    }
}

/// Size and a content hash of the edge list, used to refuse comparing
/// results from different networks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub nodes: usize,
    pub edges: usize,
    pub hash: String,
}

impl Fingerprint {
    pub fn of(net: &Network) -> Self {
        // FNV-1a over the edge list.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &(u, v) in net.edges() {
            for b in (u as u64).to_le_bytes().into_iter().chain((v as u64).to_le_bytes()) {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        Self { nodes: net.node_count(), edges: net.edge_count(), hash: format!("{h:016x}") }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generator_specs() {
        assert_eq!("ba:50:2".parse::<Instance>().unwrap(), Instance::Ba { n: 50, m: 2, seed: 1 });
        assert_eq!(
            "ws:50:4:0.1:9".parse::<Instance>().unwrap(),
            Instance::Ws { n: 50, k: 4, p: 0.1, seed: 9 }
        );
        assert!("ba:50".parse::<Instance>().is_err());
        assert!("ws:50:4:x".parse::<Instance>().is_err());
        assert_eq!("nets/bus.txt".parse::<Instance>().unwrap(), Instance::File("nets/bus.txt".into()));
    }

    #[test]
    fn display_round_trips() {
        for s in ["ba:50:2:1", "ws:30:4:0.25:3"] {
            assert_eq!(s.parse::<Instance>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn fingerprint_tracks_edges() {
        let a = Instance::Ba { n: 20, m: 2, seed: 1 }.build().unwrap();
        let b = Instance::Ba { n: 20, m: 2, seed: 2 }.build().unwrap();
        assert_eq!(Fingerprint::of(&a), Fingerprint::of(&a.clone()));
        assert_ne!(Fingerprint::of(&a), Fingerprint::of(&b));
    }
}
