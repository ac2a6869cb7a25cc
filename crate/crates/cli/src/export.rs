//! The JSON interchange format (version 1) and the build manifest.
//!
//! The cell array lists the full index set in canonical order, each entry
//! carrying its formal degree; the boundary matrices are those of the full
//! formal complex, grouped by degree, with 1-based entries sorted by
//! (row, col). Serialization is deterministic, so files are byte-stable per
//! format version.

use qah_core::cells::CellComplex;
use qah_core::combinatorics::Rel;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct CellRecord {
    pub flag: Vec<Vec<usize>>,
    pub j_le: Vec<usize>,
    pub j_ge: Vec<usize>,
    pub rel: String,
    pub tau: i8,
    pub degree: i64,
}

#[derive(Serialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

#[derive(Serialize)]
pub struct BoundaryRecord {
    pub degree: i64,
    pub matrix: MatrixRecord,
}

#[derive(Serialize)]
pub struct ComplexFile {
    pub format: u32,
    pub n: usize,
    pub cells: Vec<CellRecord>,
    pub boundaries: Vec<BoundaryRecord>,
}

pub fn complex_file(cx: &CellComplex) -> ComplexFile {
    let cells = cx
        .cells
        .iter()
        .enumerate()
        .map(|(pos, (cell, tau))| CellRecord {
            flag: cell.flag.subsets().iter().map(|s| s.labels()).collect(),
            j_le: cell.j_le.labels(),
            j_ge: cell.j_ge.labels(),
            rel: match cell.rel {
                Rel::Le => "le".into(),
                Rel::Eq => "eq".into(),
            },
            tau: *tau,
            degree: cx.degree_of(pos),
        })
        .collect();

    // positions per formal degree, in canonical order
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for pos in 0..cx.len() {
        by_degree.entry(cx.degree_of(pos)).or_default().push(pos);
    }
    let mut boundaries = Vec::new();
    for (&degree, cols) in &by_degree {
        let Some(rows) = by_degree.get(&(degree - 1)) else {
            continue;
        };
        let row_pos: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut entries = Vec::new();
        for (j, &p) in cols.iter().enumerate() {
            for &(target, v) in cx.boundary_of(p) {
                let i = row_pos[&target];
                entries.push((i + 1, j + 1, v));
            }
        }
        entries.sort_unstable();
        boundaries.push(BoundaryRecord {
            degree,
            matrix: MatrixRecord {
                rows: rows.len(),
                cols: cols.len(),
                entries,
            },
        });
    }
    ComplexFile {
        format: FORMAT_VERSION,
        n: cx.n,
        cells,
        boundaries,
    }
}

pub fn to_json_bytes(file: &ComplexFile) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(file).expect("serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

/// Summary printed by `build`: per-degree counts and the canonical-order hash
/// of the exported bytes.
pub struct Manifest {
    pub n: usize,
    pub format: u32,
    pub total: usize,
    pub per_degree: BTreeMap<i64, usize>,
    pub sha256: String,
}

pub fn manifest(cx: &CellComplex, bytes: &[u8]) -> Manifest {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    Manifest {
        n: cx.n,
        format: FORMAT_VERSION,
        total: cx.len(),
        per_degree: cx.cells_per_degree(),
        sha256: hex::encode(hasher.finalize()),
    }
}

impl Manifest {
    pub fn render(&self) -> String {
        let mut s = format!(
            "complex n={} format={} cells={}\n",
            self.n, self.format, self.total
        );
        for (degree, count) in &self.per_degree {
            s.push_str(&format!("degree {degree}: {count}\n"));
        }
        s.push_str(&format!("sha256 {}\n", self.sha256));
        s
    }
}

#[derive(Serialize)]
pub struct ManifestJson<'a> {
    pub n: usize,
    pub format: u32,
    pub total: usize,
    pub per_degree: &'a BTreeMap<i64, usize>,
    pub sha256: &'a str,
}
