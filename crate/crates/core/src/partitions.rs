//! Set partitions of `{0, .., n-1}` with bounded block sizes.
//!
//! Enumeration walks restricted-growth strings in lexicographic order; a
//! string `a` assigns element `i` to block `a[i]`, so blocks come out ordered
//! by their smallest element. Counting uses a separate recurrence and never
//! touches the enumerator.

use std::fmt;
use std::str::FromStr;

use crate::config::DEFAULT_MAX_PARTITION_N;
use crate::error::{Error, Result};

/// Largest register the bitmask representation supports.
pub const MAX_ENUM_N: usize = 64;

/// A set partition in canonical form: ascending indices within each block,
/// blocks ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Canonicalizes `blocks` and checks that they are disjoint and cover `0..n`.
    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidSubsystems("empty block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= n || seen[i] {
                    return Err(Error::InvalidSubsystems(format!(
                        "element {} is out of range or repeated",
                        i + 1
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSubsystems("blocks do not cover the register".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    fn from_rgs(rgs: &[usize]) -> Self {
        let m = rgs.iter().max().map_or(0, |&x| x + 1);
        let mut blocks = vec![Vec::new(); m];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        Self {
            n: rgs.len(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Block membership as bitmasks over the register.
    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.blocks.iter().map(|b| b.iter().fold(0u64, |m, &i| m | 1 << i))
    }

    pub fn is_canonical(&self) -> bool {
        let ascending = self.blocks.iter().all(|b| b.windows(2).all(|w| w[0] < w[1]));
        let ordered = self.blocks.windows(2).all(|w| w[0][0] < w[1][0]);
        let mut seen = vec![false; self.n];
        let disjoint = self
            .blocks
            .iter()
            .flatten()
            .all(|&i| i < self.n && !std::mem::replace(&mut seen[i], true));
        ascending && ordered && disjoint && seen.iter().all(|&s| s)
    }
}

/// `1,2|3|4` with 1-based element labels.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (bi, block) in self.blocks.iter().enumerate() {
            if bi > 0 {
                f.write_str("|")?;
            }
            for (i, e) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", e + 1)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let block = part
                .split(',')
                .map(|e| match e.trim().parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::InvalidSubsystems(format!("bad element `{e}` in `{s}`"))),
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().map(Vec::len).sum();
        Partition::from_blocks(n, blocks)
    }
}

fn check_bound(n: usize, k: usize) -> Result<()> {
    if k < 1 || k >= n {
        return Err(Error::BoundOutOfRange { n, k });
    }
    if n > MAX_ENUM_N {
        return Err(Error::RegisterTooLarge { n, cap: MAX_ENUM_N });
    }
    Ok(())
}

/// Iterator over partitions with every block of size at most `k`.
#[derive(Debug, Clone)]
pub struct BoundedPartitions {
    k: usize,
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<usize>,
    counts: Vec<usize>,
    fresh: bool,
    done: bool,
}

impl BoundedPartitions {
    fn new(n: usize, k: usize) -> Self {
        let mut it = Self {
            k,
            rgs: vec![0; n],
            prefix_max: vec![0; n],
            counts: vec![0; n],
            fresh: true,
            done: false,
        };
        it.counts[0] = 1;
        it.fill_from(1);
        it
    }

    /// Lexicographically smallest valid suffix starting at `start`.
    fn fill_from(&mut self, start: usize) {
        for i in start..self.rgs.len() {
            let limit = self.prefix_max[i - 1] + 1;
            let v = (0..=limit)
                .find(|&v| self.counts[v] < self.k)
                .expect("a fresh block is always available");
            self.rgs[i] = v;
            self.counts[v] += 1;
            self.prefix_max[i] = self.prefix_max[i - 1].max(v);
        }
    }

    fn advance(&mut self) -> bool {
        for i in (1..self.rgs.len()).rev() {
            let cur = self.rgs[i];
            self.counts[cur] -= 1;
            let limit = self.prefix_max[i - 1] + 1;
            if let Some(v) = (cur + 1..=limit).find(|&v| self.counts[v] < self.k) {
                self.rgs[i] = v;
                self.counts[v] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(v);
                self.fill_from(i + 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for BoundedPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(Partition::from_rgs(&self.rgs))
    }
}

/// All partitions of `0..n` whose blocks have size at most `k`, in
/// restricted-growth lexicographic order. Requires `1 <= k <= n - 1`.
pub fn enumerate_bounded(n: usize, k: usize) -> Result<BoundedPartitions> {
    check_bound(n, k)?;
    Ok(BoundedPartitions::new(n, k))
}

/// The bounded stream restricted to partitions with a block of size exactly `k`.
pub fn enumerate_genuine(n: usize, k: usize) -> Result<impl Iterator<Item = Partition> + Clone> {
    Ok(enumerate_bounded(n, k)?.filter(move |p| p.max_block_size() == k))
}

/// Partitions collected, bounded or genuine.
pub fn family(n: usize, k: usize, genuine: bool) -> Result<Vec<Partition>> {
    if genuine {
        Ok(enumerate_genuine(n, k)?.collect())
    } else {
        Ok(enumerate_bounded(n, k)?.collect())
    }
}

fn binomials(n: usize, k: usize) -> Result<Vec<Vec<u64>>> {
    let mut c = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1]
                .checked_add(if j < i { c[i - 1][j] } else { 0 })
                .ok_or(Error::CountOverflow { n, k })?;
        }
    }
    Ok(c)
}

/// `(bounded, genuine)` counts for every size `0..=n`.
///
/// Conditioning on the block that contains the first element (size `j`):
/// `B(m) = sum_j C(m-1, j-1) B(m-j)` and
/// `G(m) = sum_j C(m-1, j-1) [j == k ? B(m-j) : G(m-j)]`.
fn count_tables(n: usize, k: usize) -> Result<(Vec<u64>, Vec<u64>)> {
    let c = binomials(n, k)?;
    let mut bounded = vec![0u64; n + 1];
    let mut genuine = vec![0u64; n + 1];
    bounded[0] = 1;
    for m in 1..=n {
        let (mut b, mut g) = (0u64, 0u64);
        for j in 1..=k.min(m) {
            let ways = c[m - 1][j - 1];
            let rest_g = if j == k { bounded[m - j] } else { genuine[m - j] };
            b = ways
                .checked_mul(bounded[m - j])
                .and_then(|t| b.checked_add(t))
                .ok_or(Error::CountOverflow { n, k })?;
            g = ways
                .checked_mul(rest_g)
                .and_then(|t| g.checked_add(t))
                .ok_or(Error::CountOverflow { n, k })?;
        }
        bounded[m] = b;
        genuine[m] = g;
    }
    Ok((bounded, genuine))
}

fn check_count_args(n: usize, k: usize, cap: usize) -> Result<()> {
    if k < 1 || k >= n {
        return Err(Error::BoundOutOfRange { n, k });
    }
    if n > cap {
        return Err(Error::RegisterTooLarge { n, cap });
    }
    Ok(())
}

/// Number of partitions of `n` elements with all blocks of size at most `k`.
pub fn count_bounded(n: usize, k: usize) -> Result<u64> {
    count_bounded_capped(n, k, DEFAULT_MAX_PARTITION_N)
}

/// Number of bounded partitions with at least one block of size exactly `k`.
pub fn count_genuine(n: usize, k: usize) -> Result<u64> {
    count_genuine_capped(n, k, DEFAULT_MAX_PARTITION_N)
}

pub fn count_bounded_capped(n: usize, k: usize, cap: usize) -> Result<u64> {
    check_count_args(n, k, cap)?;
    Ok(count_tables(n, k)?.0[n])
}

pub fn count_genuine_capped(n: usize, k: usize, cap: usize) -> Result<u64> {
    check_count_args(n, k, cap)?;
    Ok(count_tables(n, k)?.1[n])
}

/// Unordered two-part splits of `block`; the first part always holds the
/// block's first element. Yields `2^(s-1) - 1` splits for a block of size `s`.
pub fn block_bipartitions(block: &[usize]) -> Result<impl Iterator<Item = (Vec<usize>, Vec<usize>)> + '_> {
    if block.len() < 2 {
        return Err(Error::InvalidSubsystems(
            "a bipartition needs a block of at least two elements".into(),
        ));
    }
    if block.len() > MAX_ENUM_N {
        return Err(Error::RegisterTooLarge {
            n: block.len(),
            cap: MAX_ENUM_N,
        });
    }
    let rest = &block[1..];
    let full = (1u64 << rest.len()) - 1;
    Ok((0..full).map(move |mask| {
        let mut first = vec![block[0]];
        let mut second = Vec::new();
        for (i, &e) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                first.push(e);
            } else {
                second.push(e);
            }
        }
        (first, second)
    }))
}
