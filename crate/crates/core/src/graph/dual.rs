use std::collections::BTreeMap;

use super::{AttributedGraph, Edge};
use crate::error::{Error, Result};

/// Line graph of `primal`: one node per primal edge, adjacent when the two
/// primal edges share an endpoint. A dual edge has length equal to the mean of
/// the two primal edge lengths; parallel dual edges keep the shorter length.
///
/// Dual node `e` corresponds to `primal.edges()[e]`. The dual carries a uniform
/// measure and no attributes.
pub fn dual_graph(primal: &AttributedGraph) -> Result<AttributedGraph> {
    let edges = primal.edges();
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); primal.node_count()];
    for (idx, e) in edges.iter().enumerate() {
        incident[e.i].push(idx);
        incident[e.j].push(idx);
    }

    let mut dual: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for around in &incident {
        for (a, &ea) in around.iter().enumerate() {
            for &eb in &around[a + 1..] {
                if ea == eb {
                    continue;
                }
                let key = (ea.min(eb), ea.max(eb));
                let len = 0.5 * (edges[ea].length + edges[eb].length);
                dual.entry(key)
                    .and_modify(|l| *l = l.min(len))
                    .or_insert(len);
            }
        }
    }
    let dual_edges = dual
        .into_iter()
        .map(|((i, j), length)| Edge { i, j, length })
        .collect();
    AttributedGraph::new(edges.len(), dual_edges)
}
