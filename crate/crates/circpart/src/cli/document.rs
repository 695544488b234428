//! JSON document schema for partitions: a flat disk list in a fixed order
//! (central, corners, then gap disks edge-major in recursion preorder) with
//! parent links that encode the gap recursion forest.

use serde::{Deserialize, Serialize};

use crate::construct::Partition;
use crate::edgecover::{EdgeCovering, RecursionNode};
use crate::error::{Error, Result};
use crate::geom::{CoverPair, Disk, Point2};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Central,
    Corner,
    Gap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

impl From<Disk> for Circle {
    fn from(d: Disk) -> Self {
        Circle { cx: d.center.x, cy: d.center.y, r: d.radius }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskEntry {
    pub role: Role,
    pub indisk: Circle,
    pub outcircle: Circle,
    /// Document index of the gap disk whose subdivision produced this one;
    /// none for the central disk, corners, and each covering's seed disk.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionDocument {
    pub schema_version: String,
    pub k: u32,
    pub gamma: f64,
    pub disks: Vec<DiskEntry>,
    pub piece_count: u64,
    pub terminated: bool,
}

impl PartitionDocument {
    pub fn from_partition(partition: &Partition) -> Self {
        let mut disks = Vec::with_capacity(partition.piece_count as usize);
        disks.push(DiskEntry {
            role: Role::Central,
            indisk: partition.central.indisk.into(),
            outcircle: partition.central.outcircle.into(),
            parent: None,
        });
        for corner in &partition.corners {
            disks.push(DiskEntry {
                role: Role::Corner,
                indisk: corner.indisk.into(),
                outcircle: corner.outcircle.into(),
                parent: None,
            });
        }
        for cover in &partition.gap_covers {
            // Gap disks occupy pair indices 2.. in recursion preorder, so
            // pair index i lands at document index base + i - 2.
            let base = disks.len();
            let mut parents = vec![None; cover.pairs.len().saturating_sub(2)];
            for node in &cover.recursion {
                for child in [node.left, node.right].into_iter().flatten() {
                    parents[cover.recursion[child].pair - 2] = Some(base + node.pair - 2);
                }
            }
            for (local, pair) in cover.pairs[2..].iter().enumerate() {
                disks.push(DiskEntry {
                    role: Role::Gap,
                    indisk: pair.indisk.into(),
                    outcircle: pair.outcircle.into(),
                    parent: parents[local],
                });
            }
        }
        PartitionDocument {
            schema_version: SCHEMA_VERSION.into(),
            k: partition.k,
            gamma: partition.gamma,
            disks,
            piece_count: partition.piece_count,
            terminated: partition.terminated,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("malformed partition document: {e}")))
    }

    /// Rebuild the partition. Geometry is taken at face value (a corrupted
    /// document should fail verification, not reconstruction); only the
    /// structure is validated.
    pub fn to_partition(&self) -> Result<Partition> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        let k = self.k as usize;
        if self.k < 3 {
            return Err(Error::InvalidArgument(format!(
                "document needs k >= 3, got {}",
                self.k
            )));
        }
        if self.disks.len() < 1 + k {
            return Err(Error::InvalidArgument(
                "document is missing central or corner disks".into(),
            ));
        }
        if self.piece_count != self.disks.len() as u64 {
            return Err(Error::InvalidArgument(format!(
                "piece count {} disagrees with {} disks",
                self.piece_count,
                self.disks.len()
            )));
        }
        for (i, entry) in self.disks.iter().enumerate() {
            let expected = match i {
                0 => Role::Central,
                j if j <= k => Role::Corner,
                _ => Role::Gap,
            };
            if entry.role != expected {
                return Err(Error::InvalidArgument(format!(
                    "disk {i} has role {:?}, expected {:?}",
                    entry.role, expected
                )));
            }
            for circle in [entry.indisk, entry.outcircle] {
                if !(circle.r.is_finite() && circle.r > 0.0)
                    || !circle.cx.is_finite()
                    || !circle.cy.is_finite()
                {
                    return Err(Error::InvalidArgument(format!("disk {i} is degenerate")));
                }
            }
        }

        let pair_of = |entry: &DiskEntry| CoverPair {
            indisk: Disk { center: Point2::new(entry.indisk.cx, entry.indisk.cy), radius: entry.indisk.r },
            outcircle: Disk {
                center: Point2::new(entry.outcircle.cx, entry.outcircle.cy),
                radius: entry.outcircle.r,
            },
            gamma: entry.outcircle.r / entry.indisk.r,
        };
        let central = pair_of(&self.disks[0]);
        let corners: Vec<CoverPair> = self.disks[1..=k].iter().map(pair_of).collect();

        // Split the gap disks into per-covering runs at parentless entries.
        let gap_base = 1 + k;
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for (offset, entry) in self.disks[gap_base..].iter().enumerate() {
            if entry.parent.is_none() {
                runs.push((gap_base + offset, gap_base + offset));
            } else {
                let run = runs.last_mut().ok_or_else(|| {
                    Error::InvalidArgument("first gap disk must be a covering seed".into())
                })?;
                run.1 = gap_base + offset;
            }
        }
        if !runs.is_empty() && runs.len() != 2 * k {
            return Err(Error::InvalidArgument(format!(
                "{} gap coverings in document, expected {}",
                runs.len(),
                2 * k
            )));
        }

        let mut gap_covers = Vec::with_capacity(2 * k);
        for g in 0..2 * k {
            let edge = g / 2;
            let near_vertex = if g % 2 == 0 { edge } else { (edge + 1) % k };
            let mut pairs = vec![corners[near_vertex], central];
            let mut recursion: Vec<RecursionNode> = Vec::new();
            if let Some(&(start, end)) = runs.get(g) {
                for doc_index in start..=end {
                    let local = doc_index - start;
                    pairs.push(pair_of(&self.disks[doc_index]));
                    let level = match self.disks[doc_index].parent {
                        None => 1,
                        Some(p) => {
                            if p < start || p >= doc_index {
                                return Err(Error::InvalidArgument(format!(
                                    "disk {doc_index} has parent {p} outside its covering"
                                )));
                            }
                            let parent = p - start;
                            let slot = if recursion[parent].left.is_none() {
                                &mut recursion[parent].left
                            } else if recursion[parent].right.is_none() {
                                &mut recursion[parent].right
                            } else {
                                return Err(Error::InvalidArgument(format!(
                                    "disk {p} has more than two children"
                                )));
                            };
                            *slot = Some(local);
                            recursion[parent].level + 1
                        }
                    };
                    recursion.push(RecursionNode {
                        pair: 2 + local,
                        level,
                        left: None,
                        right: None,
                    });
                }
            }
            let depth = recursion.iter().map(|n| n.level).max().unwrap_or(0);
            let root = if recursion.is_empty() { None } else { Some(0) };
            gap_covers.push(EdgeCovering {
                pairs,
                depth,
                terminated: self.terminated,
                recursion,
                root,
            });
        }

        let depth = gap_covers.iter().map(|c| c.depth).max().unwrap_or(0);
        let achieved_ratio = self
            .disks
            .iter()
            .map(|d| d.outcircle.r / d.indisk.r)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Partition {
            k: self.k,
            gamma: self.gamma,
            central,
            corners,
            gap_covers,
            piece_count: self.piece_count,
            achieved_ratio,
            terminated: self.terminated,
            depth,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_partition;

    #[test]
    fn document_round_trips_byte_identically() {
        let partition = build_partition(4, 1.20711).unwrap();
        let doc = PartitionDocument::from_partition(&partition);
        let json = doc.to_json();
        let parsed = PartitionDocument::from_json(&json).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.to_json(), json);
    }

    #[test]
    fn document_preserves_counts_and_order() {
        let partition = build_partition(4, 1.20711).unwrap();
        let doc = PartitionDocument::from_partition(&partition);
        assert_eq!(doc.disks.len() as u64, partition.piece_count);
        assert_eq!(doc.disks[0].role, Role::Central);
        assert!(doc.disks[1..=4].iter().all(|d| d.role == Role::Corner));
        assert!(doc.disks[5..].iter().all(|d| d.role == Role::Gap));
        // Depth-1 coverings: every gap disk is a covering seed.
        assert!(doc.disks[5..].iter().all(|d| d.parent.is_none()));
        assert_eq!(doc.disks[5..].len(), 8);
    }

    #[test]
    fn gap_parents_encode_the_recursion_tree() {
        let partition = build_partition(6, 1.112).unwrap();
        assert_eq!(partition.depth, 2);
        let doc = PartitionDocument::from_partition(&partition);
        let gaps: Vec<&DiskEntry> = doc.disks[7..].iter().collect();
        assert_eq!(gaps.len(), 12 * 3);
        // Preorder per covering: seed, then two children pointing at it.
        for (run_index, run) in gaps.chunks(3).enumerate() {
            let seed_index = 7 + 3 * run_index;
            assert_eq!(run[0].parent, None);
            assert_eq!(run[1].parent, Some(seed_index));
            assert_eq!(run[2].parent, Some(seed_index));
        }
    }

    #[test]
    fn reconstruction_matches_the_original() {
        for (k, gamma) in [(3, 1.5), (4, 1.20711), (6, 1.112)] {
            let partition = build_partition(k, gamma).unwrap();
            let doc = PartitionDocument::from_partition(&partition);
            let rebuilt = doc.to_partition().unwrap();
            assert_eq!(rebuilt.piece_count, partition.piece_count);
            assert_eq!(rebuilt.depth, partition.depth);
            assert_eq!(rebuilt.terminated, partition.terminated);
            assert_eq!(rebuilt.gap_covers.len(), partition.gap_covers.len());
            // Boundary pairs go through the edge frame on one side only, so
            // compare disks within rounding rather than bit for bit.
            let close = |a: &Disk, b: &Disk| {
                (a.center.x - b.center.x).abs() < 1e-12
                    && (a.center.y - b.center.y).abs() < 1e-12
                    && (a.radius - b.radius).abs() < 1e-12
            };
            for (a, b) in rebuilt.gap_covers.iter().zip(&partition.gap_covers) {
                assert_eq!(a.pairs.len(), b.pairs.len());
                assert_eq!(a.depth, b.depth);
                for (pa, pb) in a.pairs.iter().zip(&b.pairs) {
                    assert!(close(&pa.indisk, &pb.indisk));
                    assert!(close(&pa.outcircle, &pb.outcircle));
                }
            }
            let json = PartitionDocument::from_partition(&rebuilt).to_json();
            assert_eq!(json, doc.to_json());
        }
    }

    #[test]
    fn reconstruction_rejects_structural_damage() {
        let partition = build_partition(4, 1.20711).unwrap();
        let mut doc = PartitionDocument::from_partition(&partition);
        doc.piece_count += 1;
        assert!(doc.to_partition().is_err());

        let mut doc = PartitionDocument::from_partition(&partition);
        doc.disks[0].role = Role::Gap;
        assert!(doc.to_partition().is_err());

        let mut doc = PartitionDocument::from_partition(&partition);
        doc.disks[6].indisk.r = 0.0;
        assert!(doc.to_partition().is_err());

        let mut doc = PartitionDocument::from_partition(&partition);
        doc.disks.pop();
        doc.piece_count -= 1;
        assert!(doc.to_partition().is_err());
    }
}
