//! Central patches, translation classes, and exhaustive class enumeration.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::rational::{Cell, Rational, Vector};
use crate::system::{Label, SubstitutionSystem, Supertile};
use crate::tiling::{candidate_box, Placed, SHIFT_GRID};

/// Finite set of tiles `(cell, label)` sharing a common fractional shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Patch {
    pub shift: Vector,
    pub tiles: BTreeMap<Cell, Label>,
}

impl Patch {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Ambient translation by `+x`.
    pub fn translated(&self, x: &Vector) -> Patch {
        let total = &self.shift - x;
        let m = total.floor_cell();
        Patch {
            shift: total.fract(),
            tiles: self
                .tiles
                .iter()
                .map(|(c, &l)| ([c[0] - m[0], c[1] - m[1]], l))
                .collect(),
        }
    }

    /// Ambient lower corner of the tile at `cell`.
    pub fn corner(&self, cell: Cell) -> Vector {
        &Vector::from_cell(cell, self.shift.dim()) - &self.shift
    }

    /// True when every tile of `self` is a tile of `other` at the same ambient position.
    pub fn is_subpatch_of(&self, other: &Patch) -> bool {
        self.shift == other.shift && self.tiles.iter().all(|(c, l)| other.tiles.get(c) == Some(l))
    }
}

/// Translation class of a patch: cells shifted so the lexicographically least one is the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatchClass {
    pub tiles: Vec<(Cell, Label)>,
}

impl PatchClass {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Inclusive bounding box of the class cells (the least corner is not always the origin in 2D).
    pub fn bounds(&self) -> (Cell, Cell) {
        bounds(self.tiles.iter().map(|(c, _)| *c))
    }
}

fn bounds(cells: impl Iterator<Item = Cell>) -> (Cell, Cell) {
    let mut lo = [i64::MAX, i64::MAX];
    let mut hi = [i64::MIN, i64::MIN];
    for c in cells {
        for i in 0..2 {
            lo[i] = lo[i].min(c[i]);
            hi[i] = hi[i].max(c[i]);
        }
    }
    (lo, hi)
}

/// Squared distance from point `p` to the closed cube `[z, z+1]` along one axis.
fn axis_gap_sq(z: i64, p: &Rational) -> Rational {
    let zr = Rational::from_int(z);
    if p < &zr {
        let d = &zr - p;
        &d * &d
    } else {
        let d = p - &(zr + Rational::one());
        if d.is_positive() {
            &d * &d
        } else {
            Rational::zero()
        }
    }
}

/// Cells whose cube `z - shift + [0,1]^d` meets the closed ball `B_radius(0)`, in lexicographic order.
pub fn ball_cells(shift: &Vector, radius: &Rational) -> Vec<Cell> {
    let dim = shift.dim();
    let (lo, hi) = candidate_box(shift, radius);
    if dim == 1 {
        return (lo[0]..=hi[0]).map(|x| [x, 0]).collect();
    }
    let r2 = radius * radius;
    let gx: Vec<Rational> = (lo[0]..=hi[0]).map(|z| axis_gap_sq(z, &shift.0[0])).collect();
    let gy: Vec<Rational> = (lo[1]..=hi[1]).map(|z| axis_gap_sq(z, &shift.0[1])).collect();
    let mut cells = Vec::new();
    for (i, x) in (lo[0]..=hi[0]).enumerate() {
        for (j, y) in (lo[1]..=hi[1]).enumerate() {
            if &gx[i] + &gy[j] <= r2 {
                cells.push([x, y]);
            }
        }
    }
    cells
}

/// `[B_R(0)]^T`: every tile meeting the closed ball of radius `radius`.
pub fn central_patch(t: &Placed, radius: &Rational) -> Result<Patch> {
    if radius.is_negative() {
        return Err(Error::Domain(format!("negative radius {radius}")));
    }
    let mut tiles = BTreeMap::new();
    for cell in ball_cells(t.shift(), radius) {
        tiles.insert(cell, t.label_at(cell)?);
    }
    Ok(Patch {
        shift: t.shift().clone(),
        tiles,
    })
}

/// Translation class of `p` and the ambient position of its anchor-cell corner.
pub fn canonicalize(p: &Patch) -> Result<(PatchClass, Vector)> {
    let (&least, _) = p
        .tiles
        .iter()
        .next()
        .ok_or_else(|| Error::Domain("cannot canonicalize the empty patch".into()))?;
    let tiles = p
        .tiles
        .iter()
        .map(|(c, &l)| ([c[0] - least[0], c[1] - least[1]], l))
        .collect();
    Ok((PatchClass { tiles }, p.corner(least)))
}

/// A set of shifts on which the radius-R cell set is constant (exactly in 1D).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftRegion {
    pub representative: Vector,
    /// Dimension of the region in shift space (0 for points).
    pub dim: usize,
    /// Cells meeting the ball at this shift, in tiling coordinates.
    pub cells: Vec<Cell>,
}

/// Per-axis breakpoints where the ball boundary crosses a cube face, in `[0,1)`.
fn face_thresholds(radius: &Rational) -> Vec<Rational> {
    let mut t: Vec<Rational> = vec![Rational::zero(), (-radius).fract(), radius.fract()];
    t.sort();
    t.dedup();
    t
}

/// Sample points on one axis: breakpoints as points and an interior point of every gap.
fn axis_samples(points: &[Rational]) -> Vec<(Rational, usize)> {
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        out.push((p.clone(), 0));
        let next = points.get(i + 1).cloned().unwrap_or_else(Rational::one);
        if &next > p {
            out.push(((p + &next) / Rational::from_int(2), 1));
        }
    }
    out
}

/// Shift-space decomposition for radius R. Exact in 1D; in 2D the face
/// thresholds are refined by the sampler's shift grid.
pub fn shift_regions(dim: usize, radius: &Rational) -> Vec<ShiftRegion> {
    let mut points = face_thresholds(radius);
    if dim == 2 {
        points.extend((0..SHIFT_GRID).map(|j| Rational::new(j, SHIFT_GRID)));
        points.sort();
        points.dedup();
    }
    let axis = axis_samples(&points);
    let mut regions = Vec::new();
    if dim == 1 {
        for (s, d) in axis {
            let rep = Vector(vec![s]);
            let cells = ball_cells(&rep, radius);
            regions.push(ShiftRegion {
                representative: rep,
                dim: d,
                cells,
            });
        }
    } else {
        for (sx, dx) in &axis {
            for (sy, dy) in &axis {
                let rep = Vector(vec![sx.clone(), sy.clone()]);
                let cells = ball_cells(&rep, radius);
                regions.push(ShiftRegion {
                    representative: rep,
                    dim: dx + dy,
                    cells,
                });
            }
        }
    }
    regions
}

/// Legal `2 x ... x 2` blocks of the language, flattened x fastest.
pub fn legal_blocks(sys: &SubstitutionSystem) -> BTreeSet<Vec<Label>> {
    let blocks_in = |tile: &Supertile| -> Vec<Vec<Label>> {
        let rows = tile.rows();
        let mut out = Vec::new();
        for y in 0..rows.saturating_sub(if sys.dim == 2 { 1 } else { 0 }) {
            for x in 0..tile.side - 1 {
                if sys.dim == 1 {
                    out.push(vec![tile.get(x, 0), tile.get(x + 1, 0)]);
                } else {
                    out.push(vec![
                        tile.get(x, y),
                        tile.get(x + 1, y),
                        tile.get(x, y + 1),
                        tile.get(x + 1, y + 1),
                    ]);
                }
            }
        }
        out
    };
    let mut found: BTreeSet<Vec<Label>> = BTreeSet::new();
    for a in 0..sys.alphabet_size() as Label {
        found.extend(blocks_in(&sys.expand_supertile(a, 1)));
    }
    loop {
        let mut next = found.clone();
        for b in &found {
            let side = 2;
            let tile = Supertile {
                dim: sys.dim,
                side,
                data: b.clone(),
            };
            next.extend(blocks_in(&sys.substitute(&tile)));
        }
        if next.len() == found.len() {
            return found;
        }
        found = next;
    }
}

/// Least level `l` such that every legal block occurs in every level-`l` supertile.
pub fn block_saturation_level(sys: &SubstitutionSystem) -> Result<u32> {
    let legal = legal_blocks(sys);
    for level in 1..=16u32 {
        let all = (0..sys.alphabet_size() as Label).all(|a| {
            let tile = sys.expand_supertile(a, level);
            let mut seen = HashSet::new();
            let rows = tile.rows();
            for y in 0..if sys.dim == 2 { rows - 1 } else { 1 } {
                for x in 0..tile.side - 1 {
                    let b = if sys.dim == 1 {
                        vec![tile.get(x, 0), tile.get(x + 1, 0)]
                    } else {
                        vec![
                            tile.get(x, y),
                            tile.get(x + 1, y),
                            tile.get(x, y + 1),
                            tile.get(x + 1, y + 1),
                        ]
                    };
                    seen.insert(b);
                }
            }
            legal.iter().all(|b| seen.contains(b))
        });
        if all {
            return Ok(level);
        }
    }
    Err(Error::Size(
        "legal blocks do not saturate by level 16 (not primitive?)".into(),
    ))
}

/// Supertile level whose every instance contains each legal patch of the given extent (in cells per axis).
pub fn scan_level(sys: &SubstitutionSystem, extent: i64) -> Result<u32> {
    let mut k = 0u32;
    let mut side = 1i64;
    while side < extent {
        side *= sys.expansion;
        k += 1;
    }
    Ok(k + block_saturation_level(sys)?)
}

/// The finite set of radius-R translation classes with the shift regions realizing each.
#[derive(Clone, Debug)]
pub struct PatchCensus {
    pub radius: Rational,
    pub regions: Vec<ShiftRegion>,
    pub classes: BTreeMap<PatchClass, BTreeSet<usize>>,
    pub scan_level: u32,
}

impl PatchCensus {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn contains(&self, class: &PatchClass) -> bool {
        self.classes.contains_key(class)
    }
}

/// Every placement of `cells` (translated by `q`) inside `tile`, as `(q, class)`.
pub(crate) fn occurrences<'a>(tile: &'a Supertile, cells: &'a [Cell]) -> impl Iterator<Item = (Cell, PatchClass)> + 'a {
    let (lo, hi) = bounds(cells.iter().copied());
    let least = cells[0];
    let side = tile.side as i64;
    let ymax = if tile.dim == 1 { 0 } else { side - 1 - (hi[1] - lo[1]) };
    let xmax = side - 1 - (hi[0] - lo[0]);
    (0..=ymax.max(-1)).flat_map(move |qy| {
        (0..=xmax.max(-1)).map(move |qx| {
            // translate so the bounding-box corner lands at (qx, qy)
            let q = [qx - lo[0], qy - lo[1]];
            let tiles = cells
                .iter()
                .map(|c| {
                    let x = (c[0] + q[0]) as usize;
                    let y = (c[1] + q[1]) as usize;
                    ([c[0] - least[0], c[1] - least[1]], tile.get(x, y))
                })
                .collect();
            (q, PatchClass { tiles })
        })
    })
}

/// Exhaustive radius-R translation classes of the hull, by scanning a supertile
/// large enough to contain every legal configuration of the ball's extent.
pub fn enumerate_patch_classes(sys: &SubstitutionSystem, radius: &Rational) -> Result<PatchCensus> {
    if radius.is_negative() {
        return Err(Error::Domain(format!("negative radius {radius}")));
    }
    let regions = shift_regions(sys.dim, radius);
    let extent = regions
        .iter()
        .map(|r| {
            let (lo, hi) = bounds(r.cells.iter().copied());
            (hi[0] - lo[0]).max(hi[1] - lo[1]) + 1
        })
        .max()
        .unwrap_or(1);
    let level = scan_level(sys, extent)?;
    let tile_side = (sys.expansion as u64).pow(level);
    let volume = tile_side.pow(sys.dim as u32);
    if volume > 1 << 24 {
        return Err(Error::Size(format!(
            "scan needs a level-{level} supertile ({volume} cells)"
        )));
    }
    let tile = sys.expand_supertile(0, level);
    let mut classes: BTreeMap<PatchClass, BTreeSet<usize>> = BTreeMap::new();
    let mut seen_shapes: BTreeMap<Vec<Cell>, Vec<usize>> = BTreeMap::new();
    for (i, r) in regions.iter().enumerate() {
        let least = r.cells[0];
        let shape: Vec<Cell> = r.cells.iter().map(|c| [c[0] - least[0], c[1] - least[1]]).collect();
        seen_shapes.entry(shape).or_default().push(i);
    }
    for (shape, region_ids) in &seen_shapes {
        let mut local: HashSet<PatchClass> = HashSet::new();
        for (_, class) in occurrences(&tile, shape) {
            local.insert(class);
        }
        for class in local {
            classes.entry(class).or_default().extend(region_ids.iter().copied());
        }
    }
    Ok(PatchCensus {
        radius: radius.clone(),
        regions,
        classes,
        scan_level: level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::system::{chair, period_doubling};
    use crate::tiling::{reference_tiling, sample_hull};
    use std::sync::Arc;

    fn pd_patch(shift: Rational, radius: Rational) -> Patch {
        let sys = Arc::new(period_doubling());
        let mut t = reference_tiling(&sys);
        t.shift = Vector(vec![shift]);
        central_patch(&t.place(&sys).unwrap(), &radius).unwrap()
    }

    #[test]
    fn central_patch_1d_examples() {
        let cells: Vec<i64> = pd_patch(q(0, 1), q(3, 2)).tiles.keys().map(|c| c[0]).collect();
        assert_eq!(cells, vec![-2, -1, 0, 1]);
        let cells: Vec<i64> = pd_patch(q(1, 4), q(3, 2)).tiles.keys().map(|c| c[0]).collect();
        assert_eq!(cells, vec![-2, -1, 0, 1]);
    }

    #[test]
    fn tangency_counts_as_meeting() {
        // shift 0, radius 1: the cube [-2,-1] touches the ball at -1
        let cells: Vec<i64> = pd_patch(q(0, 1), q(1, 1)).tiles.keys().map(|c| c[0]).collect();
        assert_eq!(cells, vec![-2, -1, 0, 1]);
        let cells: Vec<i64> = pd_patch(q(1, 2), q(1, 1)).tiles.keys().map(|c| c[0]).collect();
        assert_eq!(cells, vec![-1, 0, 1]);
    }

    #[test]
    fn radius_zero_2d_corner() {
        // the origin is a lattice vertex at shift 0: four tiles meet it
        let cells = ball_cells(&Vector::zero(2), &Rational::zero());
        assert_eq!(cells, vec![[-1, -1], [-1, 0], [0, -1], [0, 0]]);
        let cells = ball_cells(&Vector(vec![q(1, 2), q(1, 2)]), &Rational::zero());
        assert_eq!(cells, vec![[0, 0]]);
    }

    #[test]
    fn canonicalize_examples() {
        let p = Patch {
            shift: Vector::zero(1),
            tiles: [([3, 0], 0), ([4, 0], 1), ([5, 0], 0)].into_iter().collect(),
        };
        let (class, anchor) = canonicalize(&p).unwrap();
        assert_eq!(class.tiles.iter().map(|(c, _)| c[0]).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(anchor, Vector::from_ints(&[3]));

        let p = Patch {
            shift: Vector(vec![q(1, 4)]),
            tiles: [([0, 0], 0), ([1, 0], 1)].into_iter().collect(),
        };
        let (_, anchor) = canonicalize(&p).unwrap();
        assert_eq!(anchor, Vector(vec![q(-1, 4)]));

        let empty = Patch {
            shift: Vector::zero(1),
            tiles: BTreeMap::new(),
        };
        assert!(matches!(canonicalize(&empty), Err(Error::Domain(_))));
    }

    #[test]
    fn translates_share_a_class() {
        let p = pd_patch(q(1, 4), q(5, 2));
        let (c0, a0) = canonicalize(&p).unwrap();
        for x in [q(1, 3), q(-7, 5), q(4, 1)] {
            let (c1, a1) = canonicalize(&p.translated(&Vector(vec![x.clone()]))).unwrap();
            assert_eq!(c0, c1);
            assert_eq!(&a1 - &a0, Vector(vec![x]));
        }
    }

    #[test]
    fn period_doubling_fixed_point_labels() {
        // all-zero child indices from 'a' would be a one-sided fixed point, so compare
        // against the level-5 expansion of the reference address instead
        let sys = Arc::new(period_doubling());
        let t0 = reference_tiling(&sys);
        let (origin, _) = t0.supertile_box(&sys, 6);
        let top = sys.expand_supertile(t0.address.entry(6).label, 6);
        let p = central_patch(&t0.place(&sys).unwrap(), &q(3, 2)).unwrap();
        for (c, &l) in &p.tiles {
            assert_eq!(l, top.data[(c[0] - origin[0]) as usize]);
        }
    }

    #[test]
    fn census_is_complete_on_samples() {
        for sys in [period_doubling(), chair()] {
            let sys = Arc::new(sys);
            let census = enumerate_patch_classes(&sys, &q(1, 1)).unwrap();
            for t in sample_hull(&sys, 200, 5) {
                let p = central_patch(&t.place(&sys).unwrap(), &q(1, 1)).unwrap();
                let (class, _) = canonicalize(&p).unwrap();
                assert!(census.contains(&class), "{} missing {:?}", sys.name, class);
            }
        }
    }

    #[test]
    fn legal_blocks_period_doubling() {
        let blocks = legal_blocks(&period_doubling());
        // aa, ab, ba occur; bb never does
        assert_eq!(blocks.len(), 3);
        assert!(!blocks.contains(&vec![1, 1]));
    }
}
