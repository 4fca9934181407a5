//! Canonical keys for colored rooted trees.
//!
//! A node encodes as `'(' varint(len) color children ')'` with the child
//! encodings sorted bytewise. The encoding is self-delimiting, so two balls
//! get equal bytes exactly when a color-preserving isomorphism fixes their
//! roots. A SHA-256 digest rides along for hashing; equality always compares
//! the full bytes.

use std::fmt;
use std::hash::{Hash, Hasher};

use sha2::{Digest, Sha256};

use crate::cover::ColoredBall;
use crate::error::{Error, Result};

#[derive(Clone, Eq)]
pub struct CanonicalKey {
    bytes: Vec<u8>,
    digest: [u8; 32],
}

impl CanonicalKey {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        let digest = Sha256::digest(&bytes).into();
        CanonicalKey { bytes, digest }
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn digest(&self) -> &[u8; 32] {
        &self.digest
    }

    /// Hex digest, for golden files and reports.
    pub fn hex(&self) -> String {
        hex::encode(self.digest)
    }

    pub fn short_hex(&self) -> String {
        hex::encode(&self.digest[..6])
    }
}

impl PartialEq for CanonicalKey {
    fn eq(&self, other: &Self) -> bool {
        self.digest == other.digest && self.bytes == other.bytes
    }
}

impl Hash for CanonicalKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write(&self.digest[..8]);
    }
}

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bytes.cmp(&other.bytes)
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({}, {} bytes)", self.short_hex(), self.bytes.len())
    }
}

fn push_varint(out: &mut Vec<u8>, mut x: usize) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn color_tokens(ball: &ColoredBall) -> Vec<Vec<u8>> {
    ball.alphabet()
        .iter()
        .map(|a| {
            let mut t = vec![b'('];
            push_varint(&mut t, a.len());
            t.extend_from_slice(a.as_bytes());
            t
        })
        .collect()
}

/// Encodes the subtree of every node, truncated at absolute depth `depth`.
/// Returns the per-node encodings of the nodes at depth `<= depth`, with
/// children's buffers consumed.
fn encode_truncated(ball: &ColoredBall, depth: usize) -> Vec<Vec<u8>> {
    let tokens = color_tokens(ball);
    // BFS order means nodes above the cut form a prefix
    let live = ball
        .nodes()
        .iter()
        .position(|n| n.depth as usize > depth)
        .unwrap_or(ball.len());
    let mut enc: Vec<Vec<u8>> = vec![Vec::new(); live];
    let mut kids: Vec<Vec<u8>> = Vec::new();
    for i in (0..live).rev() {
        let node = ball.node(i as u32);
        let mut out = tokens[node.color.0 as usize].clone();
        if (node.depth as usize) < depth {
            kids.clear();
            for c in ball.children(i as u32) {
                kids.push(std::mem::take(&mut enc[c as usize]));
            }
            kids.sort_unstable();
            for k in &kids {
                out.extend_from_slice(k);
            }
        }
        out.push(b')');
        enc[i] = out;
    }
    enc
}

pub fn canonical_key(ball: &ColoredBall) -> CanonicalKey {
    truncated_key(ball, ball.radius())
}

/// Key of the radius-`n` ball around the root, read off a larger ball.
pub fn truncated_key(ball: &ColoredBall, n: usize) -> CanonicalKey {
    let n = n.min(ball.radius());
    let mut enc = encode_truncated(ball, n);
    CanonicalKey::from_bytes(std::mem::take(&mut enc[0]))
}

/// Keys of the root's balls for every radius `0..=ball.radius()`.
pub fn keys_by_radius(ball: &ColoredBall) -> Vec<CanonicalKey> {
    (0..=ball.radius()).map(|n| truncated_key(ball, n)).collect()
}

pub fn balls_equivalent(b1: &ColoredBall, b2: &ColoredBall) -> Result<bool> {
    if b1.radius() != b2.radius() {
        return Err(Error::RadiusMismatch(format!(
            "cannot compare a radius-{} ball with a radius-{} ball",
            b1.radius(),
            b2.radius()
        )));
    }
    Ok(canonical_key(b1) == canonical_key(b2))
}

/// One key per root neighbor: the root as a marked degree-one vertex joined
/// to the neighbor's subtree. Returned sorted, so equal multisets compare
/// equal.
pub fn branches(ball: &ColoredBall) -> Result<Vec<CanonicalKey>> {
    if ball.radius() == 0 {
        return Err(Error::RadiusMismatch("branches need radius >= 1".into()));
    }
    let tokens = color_tokens(ball);
    let mut out = Vec::new();
    for c in ball.children(ball.root()) {
        let sub = subtree_encoding(ball, c, &tokens);
        let mut bytes = vec![b'<'];
        bytes.extend_from_slice(&tokens[ball.node(ball.root()).color.0 as usize]);
        bytes.push(b')');
        bytes.extend_from_slice(&sub);
        bytes.push(b'>');
        out.push(CanonicalKey::from_bytes(bytes));
    }
    out.sort();
    Ok(out)
}

fn subtree_encoding(ball: &ColoredBall, id: u32, tokens: &[Vec<u8>]) -> Vec<u8> {
    let node = ball.node(id);
    let mut out = tokens[node.color.0 as usize].clone();
    let mut kids: Vec<Vec<u8>> = ball
        .children(id)
        .map(|c| subtree_encoding(ball, c, tokens))
        .collect();
    kids.sort_unstable();
    for k in &kids {
        out.extend_from_slice(k);
    }
    out.push(b')');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example;
    use crate::cover::lift_ball;

    #[test]
    fn varint() {
        let mut v = Vec::new();
        push_varint(&mut v, 300);
        assert_eq!(v, [0xac, 0x02]);
    }

    #[test]
    fn radius_mismatch() {
        let p = example("constant").unwrap();
        let a = lift_ball(&p, 0, 1).unwrap();
        let b = lift_ball(&p, 0, 2).unwrap();
        assert!(balls_equivalent(&a, &a).unwrap());
        assert!(matches!(balls_equivalent(&a, &b), Err(Error::RadiusMismatch(_))));
        assert!(branches(&lift_ball(&p, 0, 0).unwrap()).is_err());
    }

    #[test]
    fn truncation_matches_direct_lift() {
        let p = example("ex31-ray2").unwrap();
        for pos in 0..8 {
            let big = lift_ball(&p, pos, 5).unwrap();
            for n in 0..=5 {
                assert_eq!(truncated_key(&big, n), canonical_key(&lift_ball(&p, pos, n).unwrap()));
            }
        }
    }

    #[test]
    fn constant_branches_equal() {
        let p = example("constant").unwrap();
        let br = branches(&lift_ball(&p, 0, 1).unwrap()).unwrap();
        assert_eq!(br.len(), 3);
        assert!(br.windows(2).all(|w| w[0] == w[1]));
        let p = example("ex31-sturmian").unwrap();
        let br = branches(&lift_ball(&p, 0, 1).unwrap()).unwrap();
        assert!(br.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn sturmian_centers_zero_and_one_differ() {
        let p = example("ex31-sturmian").unwrap();
        let b0 = lift_ball(&p, 0, 2).unwrap();
        let b1 = lift_ball(&p, 1, 2).unwrap();
        assert!(!balls_equivalent(&b0, &b1).unwrap());
    }
}
