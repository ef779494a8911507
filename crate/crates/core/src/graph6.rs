//! graph6 encoding for graphs on at most 16 vertices.
//!
//! The graph6 bit order (upper triangle, column by column) is the same as the
//! pair-slot order of [`Graph::edge_bits`], so encoding is a straight repack
//! of the bitset into 6-bit groups.

use crate::graph::{slot_count, Graph, GraphError, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let bits = g.edge_bits();
    let slots = slot_count(n);
    let mut out = String::with_capacity(1 + slots.div_ceil(6));
    out.push((n as u8 + 63) as char);
    for start in (0..slots).step_by(6) {
        let mut word = 0u8;
        for k in 0..6 {
            let slot = start + k;
            let bit = slot < slots && (bits >> slot) & 1 == 1;
            word |= (bit as u8) << (5 - k);
        }
        out.push((word + 63) as char);
    }
    out
}

pub fn decode(s: &str) -> Result<Graph, GraphError> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    let err = |msg: &str| GraphError::Graph6(format!("{msg}: {s:?}"));
    let first = *bytes.first().ok_or_else(|| err("empty string"))?;
    if !(63..=126).contains(&first) {
        return Err(err("bad size byte"));
    }
    let n = (first - 63) as usize;
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    let slots = slot_count(n);
    let body = &bytes[1..];
    if body.len() != slots.div_ceil(6) {
        return Err(err("wrong length"));
    }
    let mut bits = 0u128;
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err("byte outside printable range"));
        }
        let word = b - 63;
        for k in 0..6 {
            let slot = i * 6 + k;
            if (word >> (5 - k)) & 1 == 1 {
                if slot >= slots {
                    return Err(err("nonzero padding"));
                }
                bits |= 1 << slot;
            }
        }
    }
    Graph::from_edge_bits(n, bits)
}
