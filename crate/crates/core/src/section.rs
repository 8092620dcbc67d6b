//! The section `g`: for each radius-R central patch, a position in the
//! reference tiling `T0` where the same patch occurs.
//!
//! Occurrences are chosen by scanning the nested supertiles of `T0` level by
//! level, and within a level in lexicographic cell order; the first match
//! wins. The choice depends only on the translation class, so `T` and
//! `T0 - g(T)` agree exactly on `B_R(0)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patch::{canonicalize, central_patch, enumerate_patch_classes, PatchClass};
use crate::rational::{Cell, Rational, Vector};
use crate::system::{Label, SubstitutionSystem, Supertile};
use crate::tiling::{reference_tiling, Placed, Tiling};

/// Upper bound on the number of cells in a scanned reference supertile.
const MAX_SCAN_VOLUME: u64 = 1 << 22;

/// Side of the square (or length of the word) used to index reference positions.
const KEY_SIDE: i64 = 4;

type BlockIndex = HashMap<Vec<Label>, Vec<u32>>;

/// Nested supertiles of the reference tiling, expanded on demand.
struct ReferenceScan {
    sys: Arc<SubstitutionSystem>,
    reference: Tiling,
    levels: Mutex<Vec<Arc<(Cell, Supertile)>>>,
    indexes: Mutex<HashMap<usize, Arc<BlockIndex>>>,
}

impl ReferenceScan {
    fn new(sys: Arc<SubstitutionSystem>, reference: Tiling) -> Self {
        ReferenceScan {
            sys,
            reference,
            levels: Mutex::new(Vec::new()),
            indexes: Mutex::new(HashMap::new()),
        }
    }

    fn level(&self, k: usize) -> Option<Arc<(Cell, Supertile)>> {
        let mut levels = self.levels.lock().unwrap();
        while levels.len() <= k {
            let j = levels.len();
            let side = (self.sys.expansion as u64).pow(j as u32);
            if side.pow(self.sys.dim as u32) > MAX_SCAN_VOLUME {
                return None;
            }
            let (origin, _) = self.reference.supertile_box(&self.sys, j);
            let label = self.reference.address.entry(j).label;
            let tile = self.sys.expand_supertile(label, j as u32);
            levels.push(Arc::new((origin, tile)));
        }
        Some(levels[k].clone())
    }

    fn key_side(&self) -> [i64; 2] {
        if self.sys.dim == 1 {
            [KEY_SIDE * KEY_SIDE, 1]
        } else {
            [KEY_SIDE, KEY_SIDE]
        }
    }

    /// Positions of every key block in the level-k supertile, in scan order.
    fn index(&self, k: usize, tile: &Supertile) -> Arc<BlockIndex> {
        if let Some(ix) = self.indexes.lock().unwrap().get(&k) {
            return ix.clone();
        }
        let [kx, ky] = self.key_side();
        let side = tile.side as i64;
        let rows = tile.rows() as i64;
        let mut ix = BlockIndex::new();
        for px in 0..=(side - kx) {
            for py in 0..=(rows - ky) {
                let mut key = Vec::with_capacity((kx * ky) as usize);
                for x in 0..kx {
                    for y in 0..ky {
                        key.push(tile.get((px + x) as usize, (py + y) as usize));
                    }
                }
                ix.entry(key).or_default().push((px * rows + py) as u32);
            }
        }
        let ix = Arc::new(ix);
        self.indexes.lock().unwrap().insert(k, ix.clone());
        ix
    }

    /// First position `q` (in `T0` cells) with `T0(q + c) = label` for every tile of the class.
    fn first_occurrence(&self, class: &PatchClass) -> Option<Cell> {
        let (lo, hi) = class.bounds();
        let lookup: HashMap<Cell, Label> = class.tiles.iter().cloned().collect();
        let [kx, ky] = self.key_side();
        let k0 = [
            (lo[0] + hi[0] + 1 - kx).div_euclid(2),
            (lo[1] + hi[1] + 1 - ky).div_euclid(2),
        ];
        let key: Option<Vec<Label>> = (0..kx)
            .flat_map(|x| (0..ky).map(move |y| [k0[0] + x, k0[1] + y]))
            .map(|c| lookup.get(&c).copied())
            .collect();
        for k in 0.. {
            let level = self.level(k)?;
            let (origin, tile) = (&level.0, &level.1);
            let side = tile.side as i64;
            let rows = tile.rows() as i64;
            if hi[0] - lo[0] >= side || hi[1] - lo[1] >= rows {
                continue;
            }
            let fits = |bx: i64, by: i64| {
                (0..=(side - 1 - (hi[0] - lo[0]))).contains(&bx) && (0..=(rows - 1 - (hi[1] - lo[1]))).contains(&by)
            };
            let matches = |bx: i64, by: i64| {
                class
                    .tiles
                    .iter()
                    .all(|(c, l)| tile.get((bx + c[0] - lo[0]) as usize, (by + c[1] - lo[1]) as usize) == *l)
            };
            let found = match &key {
                Some(key) if side >= kx && rows >= ky => {
                    let ix = self.index(k, tile);
                    ix.get(key).and_then(|positions| {
                        positions.iter().find_map(|&p| {
                            let (px, py) = (p as i64 / rows, p as i64 % rows);
                            let (bx, by) = (px - (k0[0] - lo[0]), py - (k0[1] - lo[1]));
                            (fits(bx, by) && matches(bx, by)).then_some((bx, by))
                        })
                    })
                }
                _ => (0..=(side - 1 - (hi[0] - lo[0])))
                    .flat_map(|bx| (0..=(rows - 1 - (hi[1] - lo[1]))).map(move |by| (bx, by)))
                    .find(|&(bx, by)| matches(bx, by)),
            };
            if let Some((bx, by)) = found {
                return Some([origin[0] + bx - lo[0], origin[1] + by - lo[1]]);
            }
        }
        None
    }
}

/// The section table `g = h∘π` at a fixed radius, with lazily filled occurrences.
pub struct Section {
    sys: Arc<SubstitutionSystem>,
    radius: Rational,
    reference: Tiling,
    reference_placed: Placed,
    scan: ReferenceScan,
    occurrence: RwLock<HashMap<PatchClass, Cell>>,
    /// When set, lookups outside the prebuilt table fail instead of scanning.
    strict: bool,
}

impl Section {
    /// A section that finds occurrences on first use.
    pub fn lazy(sys: Arc<SubstitutionSystem>, radius: Rational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::parameter(format!(
                "section radius must be positive, got {radius}"
            )));
        }
        let reference = reference_tiling(&sys);
        let reference_placed = reference.place(&sys)?;
        Ok(Section {
            scan: ReferenceScan::new(sys.clone(), reference.clone()),
            sys,
            radius,
            reference,
            reference_placed,
            occurrence: RwLock::new(HashMap::new()),
            strict: false,
        })
    }

    pub fn system(&self) -> &Arc<SubstitutionSystem> {
        &self.sys
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn reference(&self) -> &Tiling {
        &self.reference
    }

    pub fn reference_placed(&self) -> &Placed {
        &self.reference_placed
    }

    pub fn census(&self) -> usize {
        self.occurrence.read().unwrap().len()
    }

    pub fn occurrence(&self, class: &PatchClass) -> Result<Cell> {
        if let Some(q) = self.occurrence.read().unwrap().get(class) {
            return Ok(*q);
        }
        if self.strict {
            return Err(Error::SectionIncomplete(format!(
                "class with {} tiles is not in the table",
                class.len()
            )));
        }
        let q = self.scan.first_occurrence(class).ok_or_else(|| {
            Error::SectionIncomplete(format!(
                "class with {} tiles not found in reference supertiles",
                class.len()
            ))
        })?;
        self.occurrence.write().unwrap().insert(class.clone(), q);
        Ok(q)
    }

    /// `g(T)`: the vector with `[B_R(0)]^T = [B_R(0)]^(T0 - g(T))`.
    pub fn g_of(&self, t: &Placed) -> Result<Vector> {
        let patch = central_patch(t, &self.radius)?;
        let (class, anchor) = canonicalize(&patch)?;
        let q = self.occurrence(&class)?;
        Ok(&Vector::from_cell(q, self.sys.dim) - &anchor)
    }

    /// `T0 - g(T)`.
    pub fn representative(&self, t: &Placed) -> Result<Placed> {
        Ok(self.reference_placed.minus(&self.g_of(t)?))
    }

    /// Sorted snapshot of the occurrence table.
    pub fn entries(&self) -> Vec<(PatchClass, Cell)> {
        let mut v: Vec<_> = self
            .occurrence
            .read()
            .unwrap()
            .iter()
            .map(|(c, q)| (c.clone(), *q))
            .collect();
        v.sort();
        v
    }

    pub fn export(&self) -> SectionFile {
        let dim = self.sys.dim;
        let classes = self
            .entries()
            .into_iter()
            .map(|(class, q)| SectionClassFile {
                cells: class.tiles.iter().map(|(c, _)| c[..dim].to_vec()).collect(),
                labels: class
                    .tiles
                    .iter()
                    .map(|(_, l)| self.sys.label_name(*l).to_string())
                    .collect(),
                occurrence: q[..dim].to_vec(),
            })
            .collect::<Vec<_>>();
        SectionFile {
            space: self.sys.name.clone(),
            radius: self.radius.clone(),
            census: classes.len(),
            classes,
        }
    }

    /// Strict table from an export, checked against the reference tiling.
    pub fn import(sys: Arc<SubstitutionSystem>, file: &SectionFile) -> Result<Self> {
        let mut section = Section::lazy(sys.clone(), file.radius.clone())?;
        let mut table = HashMap::new();
        for (i, c) in file.classes.iter().enumerate() {
            let ctx = format!("classes[{i}]");
            if c.cells.len() != c.labels.len() || c.occurrence.len() != sys.dim {
                return Err(Error::parse(ctx, "cells, labels and occurrence disagree in shape"));
            }
            let mut tiles = Vec::new();
            for (cell, name) in c.cells.iter().zip(&c.labels) {
                let label = sys
                    .label_index(name)
                    .ok_or_else(|| Error::parse(&ctx, format!("unknown label '{name}'")))?;
                tiles.push((to_cell(cell, &ctx)?, label));
            }
            table.insert(PatchClass { tiles }, to_cell(&c.occurrence, &ctx)?);
        }
        section.occurrence = RwLock::new(table);
        section.strict = true;
        section.check_table()?;
        Ok(section)
    }

    /// Every stored occurrence reproduces its class in `T0` (via address lookups, not the scan arrays).
    pub fn check_table(&self) -> Result<()> {
        for (class, q) in self.entries() {
            for (c, l) in &class.tiles {
                let got = self.reference_placed.label_at([q[0] + c[0], q[1] + c[1]])?;
                if got != *l {
                    return Err(Error::Internal(format!(
                        "occurrence {q:?} does not reproduce its class at offset {c:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn to_cell(v: &[i64], ctx: &str) -> Result<Cell> {
    match v {
        [x] => Ok([*x, 0]),
        [x, y] => Ok([*x, *y]),
        _ => Err(Error::parse(ctx, "cells must have 1 or 2 coordinates")),
    }
}

/// Eager table covering every enumerated class at radius R.
pub fn build_section(sys: Arc<SubstitutionSystem>, radius: Rational) -> Result<Section> {
    let census = enumerate_patch_classes(&sys, &radius)?;
    let mut section = Section::lazy(sys, radius)?;
    for class in census.classes.keys() {
        section.occurrence(class)?;
    }
    section.check_table()?;
    section.strict = true;
    Ok(section)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionClassFile {
    pub cells: Vec<Vec<i64>>,
    pub labels: Vec<String>,
    pub occurrence: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionFile {
    pub space: String,
    pub radius: Rational,
    pub classes: Vec<SectionClassFile>,
    pub census: usize,
}

/// Cell structure of the approximant over each translation class.
#[derive(Clone, Debug, Serialize)]
pub struct ApproximantSummary {
    pub space: String,
    pub radius: Rational,
    pub census: usize,
    pub classes: Vec<ClassCells>,
    /// Unordered pairs of class indices related by an infinitesimal shift crossing.
    pub adjacency: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassCells {
    pub tiles: usize,
    /// `(representative shift, cell dimension)` of every region realizing the class.
    pub regions: Vec<(Vector, usize)>,
}

impl ApproximantSummary {
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency.contains(&(a.min(b), a.max(b)))
    }
}

/// Census, shift-region cells and crossing adjacency of the radius-R approximant.
pub fn approximant_summary(sys: &SubstitutionSystem, radius: &Rational) -> Result<ApproximantSummary> {
    let census = enumerate_patch_classes(sys, radius)?;
    let index: BTreeMap<&PatchClass, usize> = census.classes.keys().enumerate().map(|(i, c)| (c, i)).collect();
    let classes = census
        .classes
        .iter()
        .map(|(c, regions)| ClassCells {
            tiles: c.len(),
            regions: regions
                .iter()
                .map(|&r| (census.regions[r].representative.clone(), census.regions[r].dim))
                .collect(),
        })
        .collect();

    let tile = sys.expand_supertile(0, census.scan_level);
    let regions = &census.regions;
    // neighbouring sample points along each axis; the last wraps to the first with a cell step
    let per_axis = |axis: usize| -> Vec<Rational> {
        let mut v: Vec<Rational> = regions.iter().map(|r| r.representative.0[axis].clone()).collect();
        v.sort();
        v.dedup();
        v
    };
    let axes: Vec<Vec<Rational>> = (0..sys.dim).map(per_axis).collect();
    let find = |rep: &Vector| regions.iter().position(|r| &r.representative == rep);
    let mut adjacency = BTreeSet::new();
    let class_at = |base: Cell, region: usize| -> Option<PatchClass> {
        let cells: Vec<Cell> = regions[region]
            .cells
            .iter()
            .map(|c| [c[0] + base[0], c[1] + base[1]])
            .collect();
        let rows = tile.rows() as i64;
        let side = tile.side as i64;
        if cells
            .iter()
            .any(|c| c[0] < 0 || c[0] >= side || c[1] < 0 || c[1] >= rows)
        {
            return None;
        }
        let least = cells[0];
        Some(PatchClass {
            tiles: cells
                .iter()
                .map(|c| {
                    (
                        [c[0] - least[0], c[1] - least[1]],
                        tile.get(c[0] as usize, c[1] as usize),
                    )
                })
                .collect::<Vec<(Cell, Label)>>(),
        })
    };
    for (r, region) in regions.iter().enumerate() {
        for axis in 0..sys.dim {
            let samples = &axes[axis];
            let pos = samples
                .iter()
                .position(|s| s == &region.representative.0[axis])
                .expect("representative on its axis grid");
            let (next_value, step) = if pos + 1 < samples.len() {
                (samples[pos + 1].clone(), 0)
            } else {
                (samples[0].clone(), 1)
            };
            let mut rep = region.representative.clone();
            rep.0[axis] = next_value;
            let Some(r2) = find(&rep) else { continue };
            if regions[r2].cells.len() == region.cells.len()
                && regions[r2].cells.iter().zip(&region.cells).all(|(a, b)| a == b)
                && step == 0
            {
                continue;
            }
            let rows = tile.rows() as i64;
            for by in 0..rows {
                for bx in 0..tile.side as i64 {
                    let base = [bx, by];
                    let mut base2 = base;
                    base2[axis] += step;
                    let (Some(c1), Some(c2)) = (class_at(base, r), class_at(base2, r2)) else {
                        continue;
                    };
                    let (i, j) = (index[&c1], index[&c2]);
                    if i != j {
                        adjacency.insert((i.min(j), i.max(j)));
                    }
                }
            }
        }
    }
    Ok(ApproximantSummary {
        space: sys.name.clone(),
        radius: radius.clone(),
        census: census.count(),
        classes,
        adjacency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::system::{chair, period_doubling};
    use crate::tiling::sample_hull;

    #[test]
    fn table_covers_census_and_is_deterministic() {
        let sys = Arc::new(period_doubling());
        let sec = build_section(sys.clone(), q(2, 1)).unwrap();
        let census = enumerate_patch_classes(&sys, &q(2, 1)).unwrap();
        assert_eq!(sec.census(), census.count());
        let again = build_section(sys, q(2, 1)).unwrap();
        assert_eq!(sec.entries(), again.entries());
    }

    fn scan_first(scan: &ReferenceScan, class: &PatchClass) -> Option<Cell> {
        let (lo, hi) = class.bounds();
        for k in 0.. {
            let level = scan.level(k)?;
            let (origin, tile) = (&level.0, &level.1);
            let side = tile.side as i64;
            let rows = tile.rows() as i64;
            if hi[0] - lo[0] >= side || hi[1] - lo[1] >= rows {
                continue;
            }
            for bx in 0..=(side - 1 - (hi[0] - lo[0])) {
                for by in 0..=(rows - 1 - (hi[1] - lo[1])) {
                    let hit = class
                        .tiles
                        .iter()
                        .all(|(c, l)| tile.get((bx + c[0] - lo[0]) as usize, (by + c[1] - lo[1]) as usize) == *l);
                    if hit {
                        return Some([origin[0] + bx - lo[0], origin[1] + by - lo[1]]);
                    }
                }
            }
        }
        None
    }

    #[test]
    fn indexed_search_matches_full_scan() {
        for (sys, radius) in [(Arc::new(period_doubling()), q(9, 1)), (Arc::new(chair()), q(5, 2))] {
            let sec = Section::lazy(sys.clone(), radius.clone()).unwrap();
            for t in sample_hull(&sys, 30, 12) {
                let t = t.place(&sys).unwrap();
                let (class, _) = canonicalize(&central_patch(&t, &radius).unwrap()).unwrap();
                assert_eq!(sec.scan.first_occurrence(&class), scan_first(&sec.scan, &class));
            }
        }
    }

    #[test]
    fn g_reproduces_patches_exactly() {
        let sys = Arc::new(period_doubling());
        let sec = build_section(sys.clone(), q(2, 1)).unwrap();
        for t in sample_hull(&sys, 100, 1) {
            let t = t.place(&sys).unwrap();
            let rep = sec.representative(&t).unwrap();
            assert_eq!(
                central_patch(&t, &q(2, 1)).unwrap(),
                central_patch(&rep, &q(2, 1)).unwrap()
            );
        }
    }

    #[test]
    fn g_of_reference_agrees() {
        let sys = Arc::new(chair());
        let sec = Section::lazy(sys, q(3, 1)).unwrap();
        let t0 = sec.reference_placed().clone();
        let rep = sec.representative(&t0).unwrap();
        assert_eq!(
            central_patch(&t0, &q(3, 1)).unwrap(),
            central_patch(&rep, &q(3, 1)).unwrap()
        );
    }

    #[test]
    fn g_is_affine_inside_a_class() {
        let sys = Arc::new(period_doubling());
        let sec = Section::lazy(sys.clone(), q(5, 2)).unwrap();
        for t in sample_hull(&sys, 40, 8) {
            let t = t.place(&sys).unwrap();
            let (c0, _) = canonicalize(&central_patch(&t, &q(5, 2)).unwrap()).unwrap();
            let w = Vector(vec![q(1, 64)]);
            let moved = t.minus(&w);
            let (c1, _) = canonicalize(&central_patch(&moved, &q(5, 2)).unwrap()).unwrap();
            if c0 == c1 {
                let g0 = sec.g_of(&t).unwrap();
                let g1 = sec.g_of(&moved).unwrap();
                assert_eq!(&g1 - &g0, w);
            }
        }
    }

    #[test]
    fn strict_table_rejects_unknown_class() {
        let sys = Arc::new(period_doubling());
        let sec = build_section(sys.clone(), q(1, 1)).unwrap();
        let bogus = PatchClass {
            tiles: vec![([0, 0], 1), ([1, 0], 1), ([2, 0], 1)],
        };
        assert!(matches!(sec.occurrence(&bogus), Err(Error::SectionIncomplete(_))));
    }

    #[test]
    fn export_import_round_trip() {
        let sys = Arc::new(period_doubling());
        let sec = build_section(sys.clone(), q(3, 2)).unwrap();
        let file = sec.export();
        let back = Section::import(sys, &file).unwrap();
        assert_eq!(back.entries(), sec.entries());
    }

    #[test]
    fn summary_1d() {
        let sys = period_doubling();
        let s = approximant_summary(&sys, &q(1, 1)).unwrap();
        assert_eq!(s.census, enumerate_patch_classes(&sys, &q(1, 1)).unwrap().count());
        assert!(s.classes.iter().all(|c| c.regions.iter().all(|(_, d)| *d <= 1)));
        assert!(!s.adjacency.is_empty());
        for &(a, b) in &s.adjacency {
            assert!(s.adjacent(b, a));
        }
    }
}
