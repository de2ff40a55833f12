// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Planted-partition graphs: equal blocks, dense inside, sparse between.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Partition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid planted partition: {0}")]
pub struct PlantedError(String);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedPartition {
    pub blocks: usize,
    pub block_size: usize,
    /// Edge probability inside a block.
    pub p_in: f64,
    /// Edge probability between blocks.
    pub p_out: f64,
}

impl PlantedPartition {
    pub fn new(blocks: usize, block_size: usize, p_in: f64, p_out: f64) -> Result<Self, PlantedError> {
        let planted = Self {
            blocks,
            block_size,
            p_in,
            p_out,
        };
        planted.validate()?;
        Ok(planted)
    }

    fn validate(&self) -> Result<(), PlantedError> {
        if self.blocks == 0 || self.block_size == 0 {
            return Err(PlantedError("blocks and size must be positive".into()));
        }
        for p in [self.p_in, self.p_out] {
            if !(0.0..=1.0).contains(&p) {
                return Err(PlantedError(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.blocks * self.block_size
    }

    /// Samples a graph. Node `i` is named `i` and belongs to block
    /// `i / block_size`.
    pub fn generate(&self, seed: u64) -> (Graph, Partition) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let n = self.node_count();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let p = if u / self.block_size == v / self.block_size {
                    self.p_in
                } else {
                    self.p_out
                };
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let graph = Graph::from_index_edges(n, edges).expect("generated pairs are distinct");
        let truth = Partition::from_labels((0..n).map(|i| i / self.block_size));
        (graph, truth)
    }
}

/// Parses `blocks=K,size=N,pin=P,pout=Q`.
impl FromStr for PlantedPartition {
    type Err = PlantedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mut blocks, mut size, mut p_in, mut p_out) = (None, None, None, None);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| PlantedError(format!("expected key=value, got {part:?}")))?;
            let bad = || PlantedError(format!("bad value for {key}: {value:?}"));
            let value = value.trim();
            match key.trim() {
                "blocks" => blocks = Some(value.parse::<usize>().map_err(|_| bad())?),
                "size" => size = Some(value.parse::<usize>().map_err(|_| bad())?),
                "pin" => p_in = Some(value.parse::<f64>().map_err(|_| bad())?),
                "pout" => p_out = Some(value.parse::<f64>().map_err(|_| bad())?),
                other => return Err(PlantedError(format!("unknown key {other:?}"))),
            }
        }
        let missing = |k: &str| PlantedError(format!("missing {k}"));
        Self::new(
            blocks.ok_or_else(|| missing("blocks"))?,
            size.ok_or_else(|| missing("size"))?,
            p_in.ok_or_else(|| missing("pin"))?,
            p_out.ok_or_else(|| missing("pout"))?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse() {
        let p: PlantedPartition = "blocks=2,size=16,pin=0.5,pout=0.05".parse().unwrap();
        assert_eq!(p, PlantedPartition::new(2, 16, 0.5, 0.05).unwrap());
        assert!("blocks=2,size=16,pin=0.5".parse::<PlantedPartition>().is_err());
        assert!("blocks=2,size=16,pin=1.5,pout=0".parse::<PlantedPartition>().is_err());
        assert!("blocks=x,size=16,pin=0.5,pout=0".parse::<PlantedPartition>().is_err());
    }

    #[test]
    fn extreme_probabilities() {
        let full = PlantedPartition::new(2, 4, 1.0, 0.0).unwrap();
        let (g, truth) = full.generate(1);
        assert_eq!(g.edge_count(), 2 * 6);
        assert_eq!(truth.community_count(), 2);
        assert!(g.edges().iter().all(|&(u, v)| u / 4 == v / 4));
    }

    #[test]
    fn seeded() {
        let p = PlantedPartition::new(2, 16, 0.5, 0.05).unwrap();
        assert_eq!(p.generate(5).0, p.generate(5).0);
        assert_ne!(p.generate(5).0, p.generate(6).0);
    }
}
