//! Disjoint additive pattern databases.
//!
//! Each group's table is indexed by the mixed-radix rank of the group tiles'
//! positions together with the blank position, and holds the exact number of
//! group-tile moves needed to bring the group home. Moves of tiles outside the
//! group are free in that group's abstraction, so the per-group values add up
//! to an admissible and consistent estimate.

use std::collections::VecDeque;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::PuzzleError;

use super::state::{TileState, MAX_CELLS};

const MAX_TABLE_ENTRIES: u64 = 1 << 27;
const UNSEEN: u8 = u8::MAX;
const FILE_MAGIC: &[u8; 8] = b"HDAPDB\0\0";
pub const PDB_FORMAT_VERSION: u32 = 1;

/// Disjoint tile groups covering every numbered tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternPartition {
    groups: Vec<Vec<u8>>,
}

impl PatternPartition {
    pub fn new(groups: Vec<Vec<u8>>) -> Self {
        PatternPartition { groups }
    }

    /// Parse `"1,2,3,4;5,6,7,8"`.
    pub fn parse(spec: &str) -> Result<Self, PuzzleError> {
        let mut groups = Vec::new();
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let group = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| PuzzleError::InvalidPartition(format!("bad tile {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            groups.push(group);
        }
        Ok(PatternPartition { groups })
    }

    pub fn groups(&self) -> &[Vec<u8>] {
        &self.groups
    }

    pub fn validate(&self, cells: usize) -> Result<(), PuzzleError> {
        let mut seen = vec![false; cells];
        for g in &self.groups {
            if g.is_empty() {
                return Err(PuzzleError::InvalidPartition("empty group".into()));
            }
            for &t in g {
                let t = t as usize;
                if t == 0 || t >= cells {
                    return Err(PuzzleError::InvalidPartition(format!("tile {t} not a numbered tile")));
                }
                if seen[t] {
                    return Err(PuzzleError::InvalidPartition(format!("tile {t} in two groups")));
                }
                seen[t] = true;
            }
        }
        if let Some(missing) = (1..cells).find(|&t| !seen[t]) {
            return Err(PuzzleError::InvalidPartition(format!("tile {missing} not covered")));
        }
        Ok(())
    }
}

impl fmt::Display for PatternPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .groups
            .iter()
            .map(|g| g.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&text.join(";"))
    }
}

#[derive(Clone)]
pub struct PatternDatabase {
    width: usize,
    height: usize,
    partition: PatternPartition,
    tables: Vec<Vec<u8>>,
}

impl fmt::Debug for PatternDatabase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PatternDatabase")
            .field("board", &(self.width, self.height))
            .field("partition", &self.partition.to_string())
            .finish()
    }
}

/// Placements of the blank plus `group_len` tiles on distinct cells.
fn table_size(cells: usize, group_len: usize) -> u64 {
    (0..=group_len as u64).fold(1u64, |acc, i| acc.saturating_mul((cells as u64).saturating_sub(i)))
}

impl PatternDatabase {
    pub fn build(partition: &PatternPartition, width: usize, height: usize) -> Result<Self, PuzzleError> {
        let cells = width * height;
        partition.validate(cells)?;
        for g in partition.groups() {
            let entries = table_size(cells, g.len());
            if entries > MAX_TABLE_ENTRIES {
                return Err(PuzzleError::PdbTooLarge { entries });
            }
        }
        let tables = partition
            .groups()
            .iter()
            .map(|g| build_group(g, width, height))
            .collect();
        Ok(PatternDatabase { width, height, partition: partition.clone(), tables })
    }

    pub fn partition(&self) -> &PatternPartition {
        &self.partition
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Value contributed by one group.
    pub fn group_value(&self, group: usize, s: &TileState) -> u32 {
        let pos = s.positions();
        let tiles = &self.partition.groups()[group];
        let idx = rank(tiles.iter().map(|&t| pos[t as usize] as usize), s.blank(), self.width * self.height);
        self.tables[group][idx] as u32
    }

    pub fn lookup(&self, s: &TileState) -> u32 {
        debug_assert_eq!((s.width(), s.height()), (self.width, self.height));
        let pos = s.positions();
        let cells = self.width * self.height;
        self.partition
            .groups()
            .iter()
            .zip(&self.tables)
            .map(|(tiles, table)| {
                let idx = rank(tiles.iter().map(|&t| pos[t as usize] as usize), s.blank(), cells);
                table[idx] as u32
            })
            .sum()
    }

    /// File name used by the on-disk cache for this board and partition.
    pub fn cache_file_name(partition: &PatternPartition, width: usize, height: usize) -> String {
        let groups: Vec<String> = partition
            .groups()
            .iter()
            .map(|g| g.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("-"))
            .collect();
        format!("pdb_v{PDB_FORMAT_VERSION}_{width}x{height}_{}.bin", groups.join("_"))
    }

    pub fn save(&self, path: &Path) -> Result<(), PuzzleError> {
        let io = |e: std::io::Error| PuzzleError::PdbFile(e.to_string());
        let mut f = fs::File::create(path).map_err(io)?;
        let mut header = Vec::new();
        header.extend_from_slice(FILE_MAGIC);
        header.extend_from_slice(&PDB_FORMAT_VERSION.to_le_bytes());
        header.push(self.width as u8);
        header.push(self.height as u8);
        header.push(self.partition.groups().len() as u8);
        for g in self.partition.groups() {
            header.push(g.len() as u8);
            header.extend_from_slice(g);
        }
        f.write_all(&header).map_err(io)?;
        for t in &self.tables {
            f.write_all(&(t.len() as u64).to_le_bytes()).map_err(io)?;
            f.write_all(t).map_err(io)?;
        }
        Ok(())
    }

    /// Load a cached table, checking that it was built for this board and
    /// partition with the current format version.
    pub fn load(path: &Path, partition: &PatternPartition, width: usize, height: usize) -> Result<Self, PuzzleError> {
        let bad = |m: &str| PuzzleError::PdbFile(m.to_string());
        let mut bytes = Vec::new();
        fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| PuzzleError::PdbFile(e.to_string()))?;
        let mut cur = bytes.as_slice();
        let mut take = |n: usize| -> Result<&[u8], PuzzleError> {
            if cur.len() < n {
                return Err(bad("truncated file"));
            }
            let (head, rest) = cur.split_at(n);
            cur = rest;
            Ok(head)
        };
        if take(8)? != FILE_MAGIC {
            return Err(bad("not a pattern database file"));
        }
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if version != PDB_FORMAT_VERSION {
            return Err(bad("format version mismatch"));
        }
        let dims = take(3)?;
        if dims[0] as usize != width || dims[1] as usize != height {
            return Err(bad("board size mismatch"));
        }
        let mut groups = Vec::new();
        for _ in 0..dims[2] {
            let len = take(1)?[0] as usize;
            groups.push(take(len)?.to_vec());
        }
        if groups != partition.groups() {
            return Err(bad("partition mismatch"));
        }
        let cells = width * height;
        let mut tables = Vec::new();
        for g in &groups {
            let len = u64::from_le_bytes(take(8)?.try_into().unwrap());
            if len != table_size(cells, g.len()) {
                return Err(bad("table length mismatch"));
            }
            tables.push(take(len as usize)?.to_vec());
        }
        Ok(PatternDatabase { width, height, partition: partition.clone(), tables })
    }

    /// Load from `dir` when a matching cache file exists, otherwise build and
    /// write one.
    pub fn load_or_build(dir: &Path, partition: &PatternPartition, width: usize, height: usize) -> Result<Self, PuzzleError> {
        let path: PathBuf = dir.join(Self::cache_file_name(partition, width, height));
        if let Ok(db) = Self::load(&path, partition, width, height) {
            return Ok(db);
        }
        let db = Self::build(partition, width, height)?;
        fs::create_dir_all(dir).map_err(|e| PuzzleError::PdbFile(e.to_string()))?;
        db.save(&path)?;
        Ok(db)
    }
}

/// Mixed-radix rank of the distinct cells (blank, p0, p1, ...): each digit
/// counts the still-free cells below the next position.
fn rank(positions: impl Iterator<Item = usize>, blank: usize, cells: usize) -> usize {
    let mut used = [false; MAX_CELLS];
    let mut idx = 0usize;
    let mut radix = cells;
    for p in std::iter::once(blank).chain(positions) {
        let digit = (0..p).filter(|&q| !used[q]).count();
        idx = idx * radix + digit;
        used[p] = true;
        radix -= 1;
    }
    idx
}

fn unrank(mut idx: usize, cells: usize, positions: &mut [usize]) -> usize {
    let k = positions.len() + 1;
    let mut digits = [0usize; MAX_CELLS];
    for i in (0..k).rev() {
        let radix = cells - i;
        digits[i] = idx % radix;
        idx /= radix;
    }
    let mut used = [false; MAX_CELLS];
    let mut place = |digit: usize| {
        let p = (0..cells).filter(|&q| !used[q]).nth(digit).expect("digit within radix");
        used[p] = true;
        p
    };
    let blank = place(digits[0]);
    for (i, p) in positions.iter_mut().enumerate() {
        *p = place(digits[i + 1]);
    }
    blank
}

/// 0-1 breadth-first search outward from the goal abstraction.
fn build_group(tiles: &[u8], width: usize, height: usize) -> Vec<u8> {
    let cells = width * height;
    let k = tiles.len();
    let mut dist = vec![UNSEEN; table_size(cells, k) as usize];
    let start = rank(tiles.iter().map(|&t| t as usize), 0, cells);
    dist[start] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(start);
    let mut pos = vec![0usize; k];
    let mut owner = vec![usize::MAX; cells];
    while let Some(idx) = queue.pop_front() {
        let d = dist[idx];
        let blank = unrank(idx, cells, &mut pos);
        owner.iter_mut().for_each(|o| *o = usize::MAX);
        for (i, &p) in pos.iter().enumerate() {
            owner[p] = i;
        }
        let (row, col) = (blank / width, blank % width);
        let mut neighbours = [usize::MAX; 4];
        if row > 0 {
            neighbours[0] = blank - width;
        }
        if row + 1 < height {
            neighbours[1] = blank + width;
        }
        if col > 0 {
            neighbours[2] = blank - 1;
        }
        if col + 1 < width {
            neighbours[3] = blank + 1;
        }
        for &c in neighbours.iter().filter(|&&c| c != usize::MAX) {
            let (next, cost) = match owner[c] {
                usize::MAX => (rank(pos.iter().copied(), c, cells), 0u8),
                i => {
                    let mut moved = pos.clone();
                    moved[i] = blank;
                    (rank(moved.into_iter(), c, cells), 1u8)
                }
            };
            let nd = d + cost;
            if dist[next] == UNSEEN || nd < dist[next] {
                dist[next] = nd;
                if cost == 0 {
                    queue.push_front(next);
                } else {
                    queue.push_back(next);
                }
            }
        }
    }
    dist
}
