//! Named ranking methods, as selected on the command line.

use std::fmt;

use serde::Serialize;

use crate::centrality;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rank::RankResult;
use crate::walk::{self, WalkOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Method {
    Horw { s: f64 },
    Degree,
    Closeness,
    Betweenness,
    Eigenvector,
    PageRank { damping: f64 },
    Coreness,
    CoreHd,
}

impl Method {
    pub const NAMES: [&'static str; 8] = [
        "horw",
        "degree",
        "closeness",
        "betweenness",
        "eigenvector",
        "pagerank",
        "coreness",
        "corehd",
    ];

    /// `s` applies to `horw` and `damping` to `pagerank`; both are checked.
    pub fn parse(name: &str, s: f64, damping: f64) -> Result<Self> {
        let method = match name.to_ascii_lowercase().as_str() {
            "horw" => Method::Horw { s },
            "degree" => Method::Degree,
            "closeness" => Method::Closeness,
            "betweenness" => Method::Betweenness,
            "eigenvector" => Method::Eigenvector,
            "pagerank" => Method::PageRank { damping },
            "coreness" => Method::Coreness,
            "corehd" => Method::CoreHd,
            other => {
                return Err(Error::InvalidParameter {
                    name: "method",
                    message: format!("unknown method {other:?}"),
                })
            }
        };
        method.validate()?;
        Ok(method)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Method::Horw { s } if !(0.0..=1.0).contains(&s) => Err(Error::OutOfRange {
                name: "s",
                range: "[0,1]",
            }),
            Method::PageRank { damping } if !(0.0..=1.0).contains(&damping) => Err(Error::OutOfRange {
                name: "damping",
                range: "[0,1]",
            }),
            _ => Ok(()),
        }
    }

    pub fn rank(&self, g: &Graph, opts: WalkOptions) -> Result<RankResult> {
        match *self {
            Method::Horw { s } => walk::rank(g, s, opts),
            Method::Degree => Ok(centrality::degree_centrality(g)),
            Method::Closeness => centrality::closeness_centrality(g),
            Method::Betweenness => Ok(centrality::betweenness_centrality(g)),
            Method::Eigenvector => centrality::eigenvector_centrality(g, opts),
            Method::PageRank { damping } => centrality::pagerank(g, damping, opts),
            Method::Coreness => Ok(centrality::coreness(g)),
            Method::CoreHd => {
                // score n - position, so the ranking is the removal order
                let order = centrality::corehd_order(g);
                let n = order.len();
                let mut raw = vec![0.0; n];
                for (pos, &v) in order.iter().enumerate() {
                    raw[v] = (n - pos) as f64;
                }
                Ok(RankResult::from_raw("corehd", raw, g.labels()))
            }
        }
    }

    pub fn removal_order(&self, g: &Graph, opts: WalkOptions) -> Result<Vec<NodeId>> {
        match self {
            Method::CoreHd => Ok(centrality::corehd_order(g)),
            _ => Ok(self.rank(g, opts)?.order),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Horw { s } => write!(f, "horw(s={s})"),
            Method::Degree => f.write_str("degree"),
            Method::Closeness => f.write_str("closeness"),
            Method::Betweenness => f.write_str("betweenness"),
            Method::Eigenvector => f.write_str("eigenvector"),
            Method::PageRank { damping } => write!(f, "pagerank(a={damping})"),
            Method::Coreness => f.write_str("coreness"),
            Method::CoreHd => f.write_str("corehd"),
        }
    }
}
