//! Hull points as eventually periodic supertile addresses, and placed views.
//!
//! A [`Tiling`] is the serializable description. A [`Placed`] is what every
//! map and patch operation works with: a lazily evaluated label field over
//! `Z^d`, an integer re-rooting offset and a fractional shift. The tile at
//! cell `z` of a placed tiling occupies `z - shift + [0,1]^d`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Cell, Rational, Vector};
use crate::system::{Label, Rotation, RotationAction, SubstitutionSystem};

/// One level of an address: the child index of the level-k supertile inside
/// its parent, and the label of the level-k supertile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub child: Cell,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Address {
    pub head: Vec<Entry>,
    pub cycle: Vec<Entry>,
}

impl Address {
    pub fn entry(&self, level: usize) -> &Entry {
        if level < self.head.len() {
            &self.head[level]
        } else {
            &self.cycle[(level - self.head.len()) % self.cycle.len()]
        }
    }

    /// Levels after which the address provably repeats.
    pub fn period_bound(&self) -> usize {
        self.head.len() + self.cycle.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "TilingFile", try_from = "TilingFile")]
pub struct Tiling {
    pub space: String,
    pub address: Address,
    pub shift: Vector,
}

/// On-disk form: entries are `[child index..., label index]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TilingFile {
    pub space: String,
    pub address: AddressFile,
    pub shift: Vector,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AddressFile {
    pub head: Vec<Vec<i64>>,
    pub cycle: Vec<Vec<i64>>,
}

impl From<Tiling> for TilingFile {
    fn from(t: Tiling) -> Self {
        let dim = t.shift.dim();
        let enc = |e: &Entry| {
            let mut v: Vec<i64> = e.child[..dim].to_vec();
            v.push(e.label as i64);
            v
        };
        TilingFile {
            space: t.space,
            address: AddressFile {
                head: t.address.head.iter().map(enc).collect(),
                cycle: t.address.cycle.iter().map(enc).collect(),
            },
            shift: t.shift,
        }
    }
}

impl TryFrom<TilingFile> for Tiling {
    type Error = String;

    fn try_from(f: TilingFile) -> std::result::Result<Self, String> {
        let dim = f.shift.dim();
        if dim != 1 && dim != 2 {
            return Err(format!("shift has dimension {dim}"));
        }
        let dec = |v: &Vec<i64>| -> std::result::Result<Entry, String> {
            if v.len() != dim + 1 {
                return Err(format!("address entry {v:?} needs {} integers", dim + 1));
            }
            let label = Label::try_from(v[dim]).map_err(|_| format!("label index {} out of range", v[dim]))?;
            let child = if dim == 1 { [v[0], 0] } else { [v[0], v[1]] };
            Ok(Entry { child, label })
        };
        let head = f
            .address
            .head
            .iter()
            .map(dec)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let cycle = f
            .address
            .cycle
            .iter()
            .map(dec)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if cycle.is_empty() {
            return Err("address cycle is empty".into());
        }
        Ok(Tiling::new(f.space, Address { head, cycle }, f.shift))
    }
}

/// Largest supertile level materialized for label lookups.
const MAX_SIDE_BITS: u32 = 40;

impl Tiling {
    pub fn new(space: impl Into<String>, address: Address, shift: Vector) -> Self {
        Tiling {
            space: space.into(),
            address,
            shift,
        }
    }

    /// Checks label consistency, cycle closure, plane coverage and the shift range.
    pub fn check(&self, sys: &SubstitutionSystem) -> Result<()> {
        let addr = &self.address;
        if addr.cycle.is_empty() {
            return Err(Error::structural("address cycle is empty"));
        }
        if self.shift.dim() != sys.dim {
            return Err(Error::structural("shift has the wrong dimension"));
        }
        for x in &self.shift.0 {
            if x.is_negative() || *x >= Rational::one() {
                return Err(Error::structural(format!("shift coordinate {x} outside [0,1)")));
            }
        }
        let n = sys.expansion;
        for e in addr.head.iter().chain(&addr.cycle) {
            let bad_child = (0..2).any(|i| {
                let c = e.child[i];
                if i < sys.dim {
                    !(0..n).contains(&c)
                } else {
                    c != 0
                }
            });
            if bad_child || e.label as usize >= sys.alphabet_size() {
                return Err(Error::structural(format!("address entry {e:?} out of range")));
            }
        }
        for k in 0..addr.period_bound() {
            let here = addr.entry(k);
            let parent = addr.entry(k + 1);
            if sys.child(parent.label, here.child) != here.label {
                let what = if k >= addr.head.len() {
                    "address cycle inconsistency"
                } else {
                    "address inconsistency"
                };
                return Err(Error::structural(format!("{what} at level {k}")));
            }
        }
        for axis in 0..sys.dim {
            let low = addr.cycle.iter().any(|e| e.child[axis] > 0);
            let high = addr.cycle.iter().any(|e| e.child[axis] < n - 1);
            if !(low && high) {
                return Err(Error::structural(format!(
                    "address cycle does not cover the plane along axis {axis}"
                )));
            }
        }
        Ok(())
    }

    pub fn place(&self, sys: &Arc<SubstitutionSystem>) -> Result<Placed> {
        self.check(sys)?;
        Ok(Placed::new(
            Arc::new(AddressField::new(sys.clone(), &self.address)),
            self.shift.clone(),
        ))
    }

    /// `T - p` for an integer vector `p`: the same tiling re-rooted at cell `p`.
    pub fn rerooted(&self, sys: &SubstitutionSystem, p: Cell) -> Result<Tiling> {
        let n = sys.expansion;
        let mut level = 0;
        let (origin, side) = loop {
            let (origin, side) = self.supertile_box(sys, level);
            if (0..sys.dim).all(|i| origin[i] <= p[i] && p[i] < origin[i] + side) {
                break (origin, side);
            }
            if side.ilog2() >= MAX_SIDE_BITS {
                return Err(Error::structural("re-rooting offset beyond addressable supertiles"));
            }
            level += 1;
        };
        // digits of p inside the level-`level` supertile, top-down
        let mut pos = [p[0] - origin[0], p[1] - origin[1]];
        let mut label = self.address.entry(level).label;
        let mut sub = side;
        let mut lower = Vec::with_capacity(level);
        for _ in 0..level {
            sub /= n;
            let child = [pos[0] / sub, pos[1] / sub];
            pos = [pos[0] % sub, pos[1] % sub];
            label = sys.child(label, child);
            lower.push(Entry { child, label });
        }
        lower.reverse();
        let h = self.address.head.len();
        let c = self.address.cycle.len();
        let top = level.max(h);
        let mut head = lower;
        head.extend((level..top).map(|k| *self.address.entry(k)));
        let cycle = (0..c).map(|i| *self.address.entry(top + i)).collect();
        Ok(Tiling::new(
            self.space.clone(),
            Address { head, cycle },
            self.shift.clone(),
        ))
    }

    /// Lower corner (in cells) and side length of the level-k supertile containing the origin tile.
    pub fn supertile_box(&self, sys: &SubstitutionSystem, level: usize) -> (Cell, i64) {
        let mut origin = [0i64, 0];
        let mut side = 1i64;
        for k in 0..level {
            let c = self.address.entry(k).child;
            origin[0] -= c[0] * side;
            origin[1] -= c[1] * side;
            side *= sys.expansion;
        }
        (origin, side)
    }

    /// Minimal level whose supertile contains every cell that can meet `B_radius(0)`.
    pub fn covering_level(&self, sys: &SubstitutionSystem, radius: &Rational) -> Result<usize> {
        let (lo, hi) = candidate_box(&self.shift, radius);
        let mut origin = [0i64, 0];
        let mut side = 1i64;
        for k in 0.. {
            let inside = (0..sys.dim).all(|i| origin[i] <= lo[i] && hi[i] < origin[i] + side);
            if inside {
                return Ok(k);
            }
            if side.ilog2() >= MAX_SIDE_BITS {
                return Err(Error::structural("radius exceeds addressable supertile range"));
            }
            let c = self.address.entry(k).child;
            origin[0] -= c[0] * side;
            origin[1] -= c[1] * side;
            side *= sys.expansion;
        }
        unreachable!()
    }
}

/// Inclusive per-axis bounds on the cells whose cube can meet `B_radius(0)` at this shift.
pub fn candidate_box(shift: &Vector, radius: &Rational) -> (Cell, Cell) {
    let mut lo = [0i64, 0];
    let mut hi = [0i64, 0];
    for (i, s) in shift.0.iter().enumerate() {
        lo[i] = (s - radius - Rational::one()).ceil_i64();
        hi[i] = (s + radius).floor_i64();
    }
    (lo, hi)
}

/// A label for every cell of `Z^d`.
pub trait LabelField: Send + Sync {
    fn label(&self, cell: Cell) -> Result<Label>;
}

/// Label field of an address: nested supertiles around the origin tile.
pub struct AddressField {
    sys: Arc<SubstitutionSystem>,
    /// `(lower corner, label)` of the level-k supertile, for k = 0, 1, ...
    levels: Vec<(Cell, Label)>,
}

impl AddressField {
    pub fn new(sys: Arc<SubstitutionSystem>, address: &Address) -> Self {
        let mut levels = Vec::new();
        let mut origin = [0i64, 0];
        let mut side = 1i64;
        let mut k = 0;
        loop {
            let e = address.entry(k);
            levels.push((origin, e.label));
            if side.ilog2() >= MAX_SIDE_BITS {
                break;
            }
            origin[0] -= e.child[0] * side;
            origin[1] -= e.child[1] * side;
            side *= sys.expansion;
            k += 1;
        }
        AddressField { sys, levels }
    }
}

impl LabelField for AddressField {
    fn label(&self, cell: Cell) -> Result<Label> {
        let n = self.sys.expansion;
        let dim = self.sys.dim;
        let mut side = 1i64;
        for (k, &(origin, top)) in self.levels.iter().enumerate() {
            if (0..dim).all(|i| origin[i] <= cell[i] && cell[i] < origin[i] + side) {
                let mut pos = [cell[0] - origin[0], cell[1] - origin[1]];
                let mut label = top;
                let mut sub = side;
                for _ in 0..k {
                    sub /= n;
                    let digit = [pos[0] / sub, pos[1] / sub];
                    pos = [pos[0] % sub, pos[1] % sub];
                    label = self.sys.child(label, digit);
                }
                return Ok(label);
            }
            side *= n;
        }
        Err(Error::structural(format!(
            "cell {cell:?} beyond addressable supertiles"
        )))
    }
}

/// A tiling presented through a label field: the tile at cell `z` carries
/// `field(z + offset)` and sits at `z - shift + [0,1]^d`.
#[derive(Clone)]
pub struct Placed {
    field: Arc<dyn LabelField>,
    offset: Cell,
    shift: Vector,
}

impl fmt::Debug for Placed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Placed")
            .field("offset", &self.offset)
            .field("shift", &self.shift)
            .finish()
    }
}

impl Placed {
    pub fn new(field: Arc<dyn LabelField>, shift: Vector) -> Self {
        Placed {
            field,
            offset: [0, 0],
            shift,
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.dim()
    }

    pub fn shift(&self) -> &Vector {
        &self.shift
    }

    /// True when both views read the same field at the same offset and shift.
    pub fn same_as(&self, other: &Placed) -> bool {
        Arc::ptr_eq(&self.field, &other.field) && self.offset == other.offset && self.shift == other.shift
    }

    pub fn label_at(&self, cell: Cell) -> Result<Label> {
        self.field.label([cell[0] + self.offset[0], cell[1] + self.offset[1]])
    }

    /// `T - x`: every tile moves by `-x`.
    pub fn minus(&self, x: &Vector) -> Placed {
        let total = &self.shift + x;
        let m = total.floor_cell();
        Placed {
            field: self.field.clone(),
            offset: [self.offset[0] + m[0], self.offset[1] + m[1]],
            shift: total.fract(),
        }
    }

    /// `T + x`.
    pub fn plus(&self, x: &Vector) -> Placed {
        self.minus(&-x)
    }

    /// `g·T` for the given group element: tiles rotate about the origin and labels follow the action.
    pub fn rotated(&self, action: &RotationAction, element: usize) -> Placed {
        let rot = action.rotation(element);
        if rot == Rotation::IDENTITY && element == 0 {
            return self.clone();
        }
        let u = rot.apply_vector(&self.shift);
        let fl = u.floor_cell();
        let corner = rot.unit_corner();
        let field = RotatedField {
            inner: self.clone(),
            inverse: rot.inverse(),
            translate: [corner[0] - fl[0], corner[1] - fl[1]],
            labels: action.label_map[element].clone(),
        };
        Placed::new(Arc::new(field), u.fract())
    }
}

struct RotatedField {
    inner: Placed,
    inverse: Rotation,
    translate: Cell,
    labels: Vec<Label>,
}

impl LabelField for RotatedField {
    fn label(&self, cell: Cell) -> Result<Label> {
        let pre = self
            .inverse
            .apply_cell([cell[0] - self.translate[0], cell[1] - self.translate[1]]);
        Ok(self.labels[self.inner.label_at(pre)? as usize])
    }
}

/// Denominator of the shift grid used by the samplers.
pub const SHIFT_GRID: i64 = 16;

fn random_child(sys: &SubstitutionSystem, rng: &mut ChaCha8Rng) -> Cell {
    let n = sys.expansion;
    let x = rng.gen_range(0..n);
    let y = if sys.dim == 2 { rng.gen_range(0..n) } else { 0 };
    [x, y]
}

/// Downward walk from `top` of at least `min_len` steps ending at `target`;
/// entries are returned bottom-up.
fn walk_to(
    sys: &SubstitutionSystem,
    top: Label,
    target: Label,
    min_len: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Entry>> {
    let mut current = top;
    let mut steps = Vec::new();
    for step in 1..=96 {
        let c = random_child(sys, rng);
        current = sys.child(current, c);
        steps.push(Entry {
            child: c,
            label: current,
        });
        if step >= min_len && current == target {
            steps.reverse();
            return Some(steps);
        }
    }
    None
}

fn covers(sys: &SubstitutionSystem, cycle: &[Entry]) -> bool {
    (0..sys.dim)
        .all(|axis| cycle.iter().any(|e| e.child[axis] > 0) && cycle.iter().any(|e| e.child[axis] < sys.expansion - 1))
}

fn random_cycle(sys: &SubstitutionSystem, rng: &mut ChaCha8Rng) -> Vec<Entry> {
    loop {
        let start = rng.gen_range(0..sys.alphabet_size()) as Label;
        let min_len = rng.gen_range(1..=4);
        if let Some(cycle) = walk_to(sys, start, start, min_len, rng) {
            if covers(sys, &cycle) {
                return cycle;
            }
        }
    }
}

fn random_shift(sys: &SubstitutionSystem, rng: &mut ChaCha8Rng) -> Vector {
    Vector(
        (0..sys.dim)
            .map(|_| Rational::new(rng.gen_range(0..SHIFT_GRID), SHIFT_GRID))
            .collect(),
    )
}

fn random_tiling(sys: &SubstitutionSystem, rng: &mut ChaCha8Rng) -> Tiling {
    let cycle = random_cycle(sys, rng);
    let head_len = rng.gen_range(0..=12);
    let mut head = Vec::new();
    let mut current = cycle[0].label;
    for _ in 0..head_len {
        let c = random_child(sys, rng);
        current = sys.child(current, c);
        head.push(Entry {
            child: c,
            label: current,
        });
    }
    head.reverse();
    Tiling::new(sys.name.clone(), Address { head, cycle }, random_shift(sys, rng))
}

/// Deterministic pseudo-random hull points with eventually periodic addresses and grid shifts.
pub fn sample_hull(sys: &SubstitutionSystem, n: usize, seed: u64) -> Vec<Tiling> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_tiling(sys, &mut rng)).collect()
}

/// Seeded pairs agreeing on `B_radius(0)`. Even indices share shift and every
/// address level up to a supertile covering the ball, with differing tails
/// above it. Odd indices are `(T, T - p)` for an integer return vector `p` of
/// the central configuration, which usually disagree just outside the ball.
pub fn sample_agreeing_pairs(
    sys: &SubstitutionSystem,
    radius: &Rational,
    n: usize,
    seed: u64,
) -> Result<Vec<(Tiling, Tiling)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut pairs = Vec::with_capacity(n);
    while pairs.len() < n {
        let t1 = random_tiling(sys, &mut rng);
        let pair = if pairs.len() % 2 == 1 {
            return_partner(sys, &t1, radius, &mut rng)?
        } else {
            None
        };
        let t2 = match pair {
            Some(t2) => t2,
            None => {
                let k = t1.covering_level(sys, radius)?;
                match diverge_above(sys, &t1, k, &mut rng) {
                    Some(t2) => t2,
                    None => continue,
                }
            }
        };
        pairs.push((t1, t2));
    }
    Ok(pairs)
}

/// `T - p` for a uniformly chosen nonzero return vector `p` of the cells meeting `B_radius(0)`.
fn return_partner(
    sys: &SubstitutionSystem,
    t: &Tiling,
    radius: &Rational,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Tiling>> {
    let cells = crate::patch::ball_cells(&t.shift, radius);
    let width = 2 * radius.ceil_i64() + 3;
    let reach = if sys.dim == 1 { 16 * width } else { 4 * width };
    let field = AddressField::new(Arc::new(sys.clone()), &t.address);
    let here: Vec<Label> = cells.iter().map(|&c| field.label(c)).collect::<Result<_>>()?;
    let ys: Vec<i64> = if sys.dim == 1 {
        vec![0]
    } else {
        (-reach..=reach).collect()
    };
    let mut returns = Vec::new();
    for x in -reach..=reach {
        for &y in &ys {
            if (x, y) == (0, 0) {
                continue;
            }
            let mut same = true;
            for (c, l) in cells.iter().zip(&here) {
                if field.label([c[0] + x, c[1] + y])? != *l {
                    same = false;
                    break;
                }
            }
            if same {
                returns.push([x, y]);
            }
        }
    }
    if returns.is_empty() {
        return Ok(None);
    }
    let p = returns[rng.gen_range(0..returns.len())];
    Ok(Some(t.rerooted(sys, p)?))
}

/// A tiling identical to `t` below level `k` (same level-k supertile) with an independent tail.
pub fn diverge_above(sys: &SubstitutionSystem, t: &Tiling, k: usize, rng: &mut ChaCha8Rng) -> Option<Tiling> {
    let keep: Vec<Entry> = (0..k).map(|j| *t.address.entry(j)).collect();
    let level_label = t.address.entry(k).label;
    for _ in 0..64 {
        let cycle = random_cycle(sys, rng);
        let Some(walk) = walk_to(sys, cycle[0].label, level_label, 1, rng) else {
            continue;
        };
        let mut head = keep.clone();
        head.extend(walk);
        let address = Address { head, cycle };
        let horizon = k + 2 * (address.period_bound() + t.address.period_bound());
        let differs = (k..horizon).any(|j| address.entry(j) != t.address.entry(j));
        if differs {
            return Some(Tiling::new(t.space.clone(), address, t.shift.clone()));
        }
    }
    None
}

/// The reference tiling `T0`: shortest covering cycle from the first label,
/// lexicographically least child indices, empty head, zero shift.
pub fn reference_tiling(sys: &SubstitutionSystem) -> Tiling {
    let children = sys.child_indices();
    for len in 1..=16usize {
        let mut digits = vec![0usize; len];
        loop {
            let mut current: Label = 0;
            let mut steps = Vec::with_capacity(len);
            for &d in &digits {
                current = sys.child(current, children[d]);
                steps.push(Entry {
                    child: children[d],
                    label: current,
                });
            }
            if current == 0 {
                steps.reverse();
                if covers(sys, &steps) {
                    return Tiling::new(
                        sys.name.clone(),
                        Address {
                            head: Vec::new(),
                            cycle: steps,
                        },
                        Vector::zero(sys.dim),
                    );
                }
            }
            // odometer increment, last digit fastest
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < children.len() {
                    break;
                }
                digits[i] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    panic!("no covering cycle of length <= 16 for {}", sys.name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{chair, period_doubling};

    #[test]
    fn samples_are_deterministic_and_valid() {
        for sys in [period_doubling(), chair()] {
            let a = sample_hull(&sys, 5, 42);
            assert_eq!(a, sample_hull(&sys, 5, 42));
            for t in &a {
                t.check(&sys).unwrap();
            }
        }
    }

    #[test]
    fn reference_tiling_period_doubling() {
        let sys = period_doubling();
        let t0 = reference_tiling(&sys);
        t0.check(&sys).unwrap();
        assert_eq!(t0.address.cycle.len(), 2);
    }

    #[test]
    fn corrupt_cycle_is_rejected() {
        let sys = period_doubling();
        let mut t0 = reference_tiling(&sys);
        t0.address.cycle[1].label = 0;
        let err = t0.check(&sys).unwrap_err().to_string();
        assert!(err.contains("inconsistency"), "{err}");
    }

    #[test]
    fn non_covering_cycle_is_rejected() {
        let sys = period_doubling();
        let t = Tiling::new(
            "period-doubling",
            Address {
                head: vec![],
                cycle: vec![Entry {
                    child: [0, 0],
                    label: 0,
                }],
            },
            Vector::zero(1),
        );
        assert!(t.check(&sys).unwrap_err().to_string().contains("cover"));
    }

    #[test]
    fn address_field_matches_expansion() {
        let sys = Arc::new(period_doubling());
        let t0 = reference_tiling(&sys);
        let placed = t0.place(&sys).unwrap();
        let (origin, side) = t0.supertile_box(&sys, 8);
        let top = t0.address.entry(8).label;
        let expanded = sys.expand_supertile(top, 8);
        assert_eq!(expanded.side as i64, side);
        for x in 0..side {
            assert_eq!(placed.label_at([origin[0] + x, 0]).unwrap(), expanded.data[x as usize]);
        }
    }

    #[test]
    fn rerooting_matches_integer_translation() {
        let sys = Arc::new(period_doubling());
        let c = Arc::new(chair());
        for (sys, p) in [(sys, [37, 0]), (c, [-9, 21])] {
            for t in sample_hull(&sys, 10, 21) {
                let moved = t.rerooted(&sys, p).unwrap();
                moved.check(&sys).unwrap();
                let a = t.place(&sys).unwrap();
                let b = moved.place(&sys).unwrap();
                for z in [[0, 0], [3, 0], [-5, 0], [40, 0]] {
                    let z = if sys.dim == 2 { [z[0], z[0] - 2] } else { z };
                    assert_eq!(b.label_at(z).unwrap(), a.label_at([z[0] + p[0], z[1] + p[1]]).unwrap());
                }
            }
        }
    }

    #[test]
    fn minus_then_plus_is_identity() {
        let sys = Arc::new(chair());
        let t = sample_hull(&sys, 1, 3).remove(0).place(&sys).unwrap();
        let x = Vector(vec![Rational::new(7, 3), Rational::new(-5, 4)]);
        let back = t.minus(&x).plus(&x);
        assert_eq!(back.shift(), t.shift());
        for cell in [[0, 0], [3, -2], [-4, 5]] {
            assert_eq!(back.label_at(cell).unwrap(), t.label_at(cell).unwrap());
        }
    }

    #[test]
    fn four_quarter_turns_are_identity() {
        let sys = Arc::new(chair());
        let g = sys.group.clone().unwrap();
        let t = sample_hull(&sys, 1, 9).remove(0).place(&sys).unwrap();
        let mut r = t.clone();
        for _ in 0..4 {
            r = r.rotated(&g, 1);
        }
        assert_eq!(r.shift(), t.shift());
        for cell in [[0, 0], [2, -1], [-3, 4]] {
            assert_eq!(r.label_at(cell).unwrap(), t.label_at(cell).unwrap());
        }
    }
}
