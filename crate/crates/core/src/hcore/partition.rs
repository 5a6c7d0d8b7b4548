use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint vertex blocks over a subset of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<Option<usize>>,
}

impl VertexPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![None; n];
        let mut blocks = blocks;
        for (i, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            for &v in b.iter() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if block_of[v].is_some() {
                    return Err(Error::Precondition(format!("vertex {v} lies in two blocks")));
                }
                block_of[v] = Some(i);
            }
        }
        Ok(VertexPartition { blocks, block_of })
    }

    /// Partition from a block label per vertex (labels need not be contiguous).
    pub fn from_labels(labels: &[usize]) -> Self {
        let m = labels.iter().copied().max().map_or(0, |x| x + 1);
        let mut blocks = vec![Vec::new(); m];
        for (v, &l) in labels.iter().enumerate() {
            blocks[l].push(v);
        }
        let block_of = labels.iter().map(|&l| Some(l)).collect();
        VertexPartition { blocks, block_of }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.block_of.get(v).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.block_of.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn covers_all(&self) -> bool {
        self.block_of.iter().all(|b| b.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_overlap_and_range() {
        assert!(VertexPartition::new(4, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(VertexPartition::new(3, vec![vec![0, 3]]).is_err());
        let p = VertexPartition::new(4, vec![vec![2, 0], vec![3]]).unwrap();
        assert_eq!(p.block(0), &[0, 2]);
        assert_eq!(p.block_of(1), None);
        assert!(!p.covers_all());
    }

    #[test]
    fn labels_roundtrip() {
        let p = VertexPartition::from_labels(&[1, 0, 1, 2]);
        assert_eq!(p.blocks(), &[vec![1], vec![0, 2], vec![3]]);
        assert!(p.covers_all());
    }
}
