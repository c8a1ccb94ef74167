use crate::error::{Error, Result};
use crate::mesh::NodeMap;

const MAGIC: &[u8; 4] = b"NMAP";
const VERSION: u32 = 1;

/// Binary sidecar: `NMAP`, version (u32), node count (u64), then per node
/// the centerline index (u64) and the growth layer (u32). Little endian.
pub fn encode_node_map(map: &NodeMap) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + map.len() * 12);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(map.len() as u64).to_le_bytes());
    for &i in &map.index {
        out.extend_from_slice(&(i as u64).to_le_bytes());
    }
    for &l in &map.layer {
        out.extend_from_slice(&l.to_le_bytes());
    }
    out
}

pub fn decode_node_map(bytes: &[u8], source: &str) -> Result<NodeMap> {
    let bad = |msg: &str| Error::parse(source, 0, msg.to_string());
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(bad("not a node map file"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(bad(&format!("unsupported node map version {version}")));
    }
    let n = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let body = &bytes[16..];
    if n.checked_mul(12) != Some(body.len()) {
        return Err(bad("node map length does not match its header"));
    }
    let (index, layer) = body.split_at(n * 8);
    Ok(NodeMap {
        index: index.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")) as usize).collect(),
        layer: layer.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes"))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let map = NodeMap { index: vec![3, 0, 1 << 40, 2], layer: vec![0, 1, 7, 2] };
        let bytes = encode_node_map(&map);
        assert_eq!(decode_node_map(&bytes, "s").unwrap(), map);
        assert!(decode_node_map(&bytes[..bytes.len() - 1], "s").is_err());
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        assert!(decode_node_map(&wrong, "s").unwrap_err().is_parse());
    }
}
