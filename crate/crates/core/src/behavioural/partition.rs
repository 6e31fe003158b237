use std::collections::BTreeMap;

use serde::Serialize;

use crate::coalgebra::{Coalgebra, FunctorValue, State};
use crate::error::{Error, Result};
use crate::relation::Relation;

/// Block assignment over the disjoint union `X ⊎ Y`; left states come
/// first, right state `y` sits at index `|X| + y`. Block ids are dense and
/// numbered in order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    left: usize,
    blocks: Vec<usize>,
}

impl Partition {
    pub fn trivial(left: usize, right: usize) -> Self {
        Partition {
            left,
            blocks: vec![0; left + right],
        }
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().max().map_or(0, |b| b + 1)
    }

    pub fn left_block(&self, x: State) -> usize {
        self.blocks[x]
    }

    pub fn right_block(&self, y: State) -> usize {
        self.blocks[self.left + y]
    }

    pub fn left_map(&self) -> &[usize] {
        &self.blocks[..self.left]
    }

    pub fn right_map(&self) -> &[usize] {
        &self.blocks[self.left..]
    }

    /// Restriction to `X × Y`.
    pub fn restrict(&self) -> Relation {
        let right = self.blocks.len() - self.left;
        Relation::new(
            self.left,
            right,
            (0..self.left).flat_map(|x| {
                (0..right)
                    .filter(move |&y| self.left_block(x) == self.right_block(y))
                    .map(move |y| (x, y))
            }),
        )
    }

    /// Members of each block as `(is_right, state)`.
    pub fn members(&self) -> Vec<Vec<(bool, State)>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.blocks.iter().enumerate() {
            out[b].push(if i < self.left {
                (false, i)
            } else {
                (true, i - self.left)
            });
        }
        out
    }
}

fn same_kind(c: &Coalgebra, d: &Coalgebra) -> Result<()> {
    if c.tag() != d.tag() {
        return Err(Error::KindMismatch {
            expected: c.tag(),
            found: d.tag(),
        });
    }
    Ok(())
}

/// One step of the terminal sequence: group states whose transition values
/// agree after relabeling successors by their current block.
fn step(c: &Coalgebra, d: &Coalgebra, p: &Partition) -> Result<Partition> {
    let mut ids: BTreeMap<FunctorValue, usize> = BTreeMap::new();
    let mut blocks = Vec::with_capacity(p.blocks.len());
    let values = c
        .carrier()
        .map(|x| c.transition(x).relabel(p.left_map()))
        .chain(d.carrier().map(|y| d.transition(y).relabel(p.right_map())));
    for value in values {
        let value = value?;
        let next = ids.len();
        blocks.push(*ids.entry(value).or_insert(next));
    }
    Ok(Partition {
        left: p.left,
        blocks,
    })
}

/// `P_n` over `X ⊎ Y`; its restriction to `X × Y` is n-step equivalence.
pub fn n_step_partition(c: &Coalgebra, d: &Coalgebra, n: usize) -> Result<Partition> {
    same_kind(c, d)?;
    let mut p = Partition::trivial(c.len(), d.len());
    for _ in 0..n {
        p = step(c, d, &p)?;
    }
    Ok(p)
}

/// Iterates until the block count stops growing, at most `|X| + |Y|`
/// rounds. Returns the partition and the number of rounds taken.
pub fn stable_partition(c: &Coalgebra, d: &Coalgebra) -> Result<(Partition, usize)> {
    same_kind(c, d)?;
    let mut p = Partition::trivial(c.len(), d.len());
    let mut rounds = 0;
    loop {
        let next = step(c, d, &p)?;
        rounds += 1;
        if next.block_count() == p.block_count() {
            return Ok((next, rounds));
        }
        p = next;
    }
}
