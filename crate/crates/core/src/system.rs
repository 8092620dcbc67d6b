//! Block substitution systems and their rotation actions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{Cell, Rational, Vector};

/// Index into a system's alphabet.
pub type Label = u8;

/// A rotation of the plane by a multiple of a quarter turn (counterclockwise).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rotation {
    pub quarter_turns: u8,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation { quarter_turns: 0 };

    pub fn new(quarter_turns: u8) -> Self {
        Rotation {
            quarter_turns: quarter_turns % 4,
        }
    }

    pub fn inverse(self) -> Self {
        Rotation::new(4 - self.quarter_turns)
    }

    pub fn compose(self, other: Rotation) -> Self {
        Rotation::new(self.quarter_turns + other.quarter_turns)
    }

    pub fn apply_cell(self, c: Cell) -> Cell {
        let [x, y] = c;
        match self.quarter_turns {
            0 => [x, y],
            1 => [-y, x],
            2 => [-x, -y],
            _ => [y, -x],
        }
    }

    pub fn apply_vector(self, v: &Vector) -> Vector {
        if v.dim() < 2 {
            assert_eq!(self.quarter_turns % 2, 0, "odd rotation of a 1D vector");
            return if self.quarter_turns == 0 { v.clone() } else { -v };
        }
        let (x, y) = (&v.0[0], &v.0[1]);
        Vector(match self.quarter_turns {
            0 => vec![x.clone(), y.clone()],
            1 => vec![-y, x.clone()],
            2 => vec![-x, -y],
            _ => vec![y.clone(), -x],
        })
    }

    /// Lower corner of the rotated unit square `g·[0,1]^2`.
    pub fn unit_corner(self) -> Cell {
        match self.quarter_turns {
            0 => [0, 0],
            1 => [-1, 0],
            2 => [-1, -1],
            _ => [0, -1],
        }
    }
}

/// Action of a finite rotation group `C_n` (n ∈ {1, 2, 4}) on labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationAction {
    pub order: u8,
    /// `label_map[k][a]` is the image of label `a` under the k-th element.
    pub label_map: Vec<Vec<Label>>,
}

impl RotationAction {
    pub fn trivial(alphabet: usize) -> Self {
        RotationAction {
            order: 1,
            label_map: vec![(0..alphabet as Label).collect()],
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order as usize
    }

    pub fn rotation(&self, element: usize) -> Rotation {
        Rotation::new((element * (4 / self.order as usize)) as u8)
    }

    pub fn inverse(&self, element: usize) -> usize {
        (self.order as usize - element) % self.order as usize
    }

    pub fn act(&self, element: usize, label: Label) -> Label {
        self.label_map[element][label as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub rule_shapes_ok: bool,
    pub primitive: bool,
    /// Least k with `M^k > 0` entrywise, if primitive.
    pub primitivity_exponent: Option<usize>,
    pub group_compatible: Option<bool>,
    /// Always `false`: aperiodicity is asserted by the catalog, never checked.
    pub aperiodicity_verified: bool,
}

/// A d-dimensional block substitution with integer expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionSystem {
    pub name: String,
    pub dim: usize,
    pub expansion: i64,
    pub labels: Vec<String>,
    /// `rules[a][x + N*y]` is the child label at child index `(x, y)`.
    pub rules: Vec<Vec<Label>>,
    pub group: Option<RotationAction>,
}

impl SubstitutionSystem {
    pub fn alphabet_size(&self) -> usize {
        self.labels.len()
    }

    pub fn block_size(&self) -> usize {
        (self.expansion as usize).pow(self.dim as u32)
    }

    pub fn label_index(&self, name: &str) -> Option<Label> {
        self.labels.iter().position(|l| l == name).map(|i| i as Label)
    }

    pub fn label_name(&self, label: Label) -> &str {
        &self.labels[label as usize]
    }

    pub fn child_offset(&self, child: Cell) -> usize {
        (child[0] + self.expansion * child[1]) as usize
    }

    pub fn child(&self, parent: Label, child: Cell) -> Label {
        self.rules[parent as usize][self.child_offset(child)]
    }

    /// All child indices in `{0..N}^d`, x fastest.
    pub fn child_indices(&self) -> Vec<Cell> {
        let n = self.expansion;
        if self.dim == 1 {
            (0..n).map(|x| [x, 0]).collect()
        } else {
            (0..n).flat_map(|y| (0..n).map(move |x| [x, y])).collect()
        }
    }

    pub fn group_or_trivial(&self) -> RotationAction {
        self.group
            .clone()
            .unwrap_or_else(|| RotationAction::trivial(self.alphabet_size()))
    }

    /// Substitution matrix: `m[a][b]` counts label `b` in the rule of `a`.
    pub fn substitution_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.alphabet_size();
        self.rules
            .iter()
            .map(|rule| {
                let mut row = vec![0u64; n];
                for &b in rule {
                    row[b as usize] += 1;
                }
                row
            })
            .collect()
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        let n = self.alphabet_size();
        if n == 0 || n > Label::MAX as usize {
            return Err(Error::structural("alphabet must have between 1 and 255 labels"));
        }
        if self.expansion < 2 {
            return Err(Error::structural("expansion must be at least 2"));
        }
        if !(1..=2).contains(&self.dim) {
            return Err(Error::structural("dimension must be 1 or 2"));
        }
        if self.rules.len() != n {
            return Err(Error::structural(format!(
                "expected {n} rules, found {}",
                self.rules.len()
            )));
        }
        for (a, rule) in self.rules.iter().enumerate() {
            if rule.len() != self.block_size() || rule.iter().any(|&b| b as usize >= n) {
                return Err(Error::structural(format!(
                    "malformed rule array for label '{}'",
                    self.labels[a]
                )));
            }
        }
        let primitivity_exponent = primitivity_exponent(&self.substitution_matrix());
        let group_compatible = match &self.group {
            None => None,
            Some(g) => {
                self.check_group(g)?;
                Some(true)
            }
        };
        Ok(ValidationReport {
            rule_shapes_ok: true,
            primitive: primitivity_exponent.is_some(),
            primitivity_exponent,
            group_compatible,
            aperiodicity_verified: false,
        })
    }

    fn check_group(&self, g: &RotationAction) -> Result<()> {
        let n = self.alphabet_size();
        if !matches!(g.order, 1 | 2 | 4) || (self.dim == 1 && g.order != 1) {
            return Err(Error::structural(format!(
                "group order {} not supported in dimension {}",
                g.order, self.dim
            )));
        }
        if g.label_map.len() != g.order as usize
            || g.label_map
                .iter()
                .any(|m| m.len() != n || m.iter().any(|&b| b as usize >= n))
        {
            return Err(Error::structural("label_map has the wrong shape"));
        }
        for a in 0..n as Label {
            if g.act(0, a) != a {
                return Err(Error::structural(format!(
                    "identity moves label '{}'",
                    self.label_name(a)
                )));
            }
        }
        let order = g.order as usize;
        for e in 0..order {
            for f in 0..order {
                for a in 0..n as Label {
                    if g.act((e + f) % order, a) != g.act(e, g.act(f, a)) {
                        return Err(Error::structural(format!(
                            "label_map is not a group action at ({e}, {f}, '{}')",
                            self.label_name(a)
                        )));
                    }
                }
            }
        }
        let big_n = self.expansion;
        for e in 0..order {
            let rot = g.rotation(e);
            let corner = rot.unit_corner();
            for a in 0..n as Label {
                let ga = g.act(e, a);
                for c in self.child_indices() {
                    let rc = rot.apply_cell(c);
                    let gc = [rc[0] + (1 - big_n) * corner[0], rc[1] + (1 - big_n) * corner[1]];
                    if self.child(ga, gc) != g.act(e, self.child(a, c)) {
                        return Err(Error::structural(format!(
                            "group-compatibility violated at (g={e}, label='{}')",
                            self.label_name(a)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Level-fold substitution of a single label.
    pub fn expand_supertile(&self, label: Label, level: u32) -> Supertile {
        let mut tile = Supertile {
            dim: self.dim,
            side: 1,
            data: vec![label],
        };
        for _ in 0..level {
            tile = self.substitute(&tile);
        }
        tile
    }

    /// One application of the rules to every entry of `tile`.
    pub fn substitute(&self, tile: &Supertile) -> Supertile {
        let n = self.expansion as usize;
        let side = tile.side * n;
        let rows = if self.dim == 1 { 1 } else { side };
        let mut data = vec![0 as Label; side * rows];
        for (idx, &lab) in tile.data.iter().enumerate() {
            let (px, py) = (idx % tile.side, idx / tile.side);
            for c in self.child_indices() {
                let x = px * n + c[0] as usize;
                let y = py * n + c[1] as usize;
                data[x + side * y] = self.child(lab, c);
            }
        }
        Supertile {
            dim: self.dim,
            side,
            data,
        }
    }

    pub fn from_file(file: &SystemFile) -> Result<Self> {
        let labels = file.labels.clone();
        let index = |name: &str, ctx: &str| -> Result<Label> {
            labels
                .iter()
                .position(|l| l == name)
                .map(|i| i as Label)
                .ok_or_else(|| Error::parse(ctx, format!("unknown label '{name}'")))
        };
        let n = file.expansion;
        if n < 2 {
            return Err(Error::parse("expansion", "must be at least 2"));
        }
        let mut rules = Vec::with_capacity(labels.len());
        for a in &labels {
            let ctx = format!("rules.{a}");
            let value = file
                .rules
                .get(a)
                .ok_or_else(|| Error::structural(format!("missing rule for label '{a}'")))?;
            let rows: Vec<Vec<String>> = match file.dimension {
                1 => vec![serde_json::from_value(value.clone()).map_err(|e| Error::parse(&ctx, e.to_string()))?],
                2 => serde_json::from_value(value.clone()).map_err(|e| Error::parse(&ctx, e.to_string()))?,
                d => return Err(Error::parse("dimension", format!("unsupported dimension {d}"))),
            };
            let expected_rows = if file.dimension == 1 { 1 } else { n as usize };
            if rows.len() != expected_rows || rows.iter().any(|r| r.len() != n as usize) {
                return Err(Error::structural(format!("malformed rule array for label '{a}'")));
            }
            let mut flat = Vec::new();
            for row in &rows {
                for name in row {
                    flat.push(index(name, &ctx)?);
                }
            }
            rules.push(flat);
        }
        let group = match &file.group {
            None => None,
            Some(g) => {
                let mut label_map = Vec::new();
                for (k, m) in g.label_map.iter().enumerate() {
                    let ctx = format!("group.label_map[{k}]");
                    let mut row = Vec::new();
                    for a in &labels {
                        let image = m
                            .get(a)
                            .ok_or_else(|| Error::parse(&ctx, format!("missing image of '{a}'")))?;
                        row.push(index(image, &ctx)?);
                    }
                    label_map.push(row);
                }
                Some(RotationAction {
                    order: g.order,
                    label_map,
                })
            }
        };
        Ok(SubstitutionSystem {
            name: file.name.clone(),
            dim: file.dimension,
            expansion: n,
            labels,
            rules,
            group,
        })
    }

    pub fn to_file(&self) -> SystemFile {
        let n = self.expansion as usize;
        let rules = self
            .rules
            .iter()
            .enumerate()
            .map(|(a, rule)| {
                let names: Vec<Value> = rule
                    .iter()
                    .map(|&b| Value::String(self.labels[b as usize].clone()))
                    .collect();
                let value = if self.dim == 1 {
                    Value::Array(names)
                } else {
                    Value::Array(names.chunks(n).map(|r| Value::Array(r.to_vec())).collect())
                };
                (self.labels[a].clone(), value)
            })
            .collect();
        let group = self.group.as_ref().map(|g| GroupFile {
            order: g.order,
            label_map: g
                .label_map
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .map(|(a, &b)| (self.labels[a].clone(), self.labels[b as usize].clone()))
                        .collect()
                })
                .collect(),
        });
        SystemFile {
            name: self.name.clone(),
            dimension: self.dim,
            expansion: self.expansion,
            labels: self.labels.clone(),
            rules,
            group,
        }
    }

    pub fn expansion_rational(&self) -> Rational {
        Rational::from_int(self.expansion)
    }
}

/// Square (or 1D) array of labels produced by iterated substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Supertile {
    pub dim: usize,
    pub side: usize,
    /// Row-major with x fastest; rows only in 2D.
    pub data: Vec<Label>,
}

impl Supertile {
    pub fn get(&self, x: usize, y: usize) -> Label {
        self.data[x + self.side * y]
    }

    pub fn rows(&self) -> usize {
        if self.dim == 1 {
            1
        } else {
            self.side
        }
    }
}

/// Boolean matrix powers up to `n^2`; returns the least exponent with an entrywise positive power.
fn primitivity_exponent(m: &[Vec<u64>]) -> Option<usize> {
    let n = m.len();
    let base: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
    let mut power = base.clone();
    for k in 1..=(n * n).max(1) {
        if power.iter().all(|r| r.iter().all(|&x| x)) {
            return Some(k);
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).any(|l| power[i][l] && base[l][j]);
            }
        }
        power = next;
    }
    None
}

/// On-disk form of a substitution system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub name: String,
    pub dimension: usize,
    pub expansion: i64,
    pub labels: Vec<String>,
    pub rules: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: u8,
    pub label_map: Vec<BTreeMap<String, String>>,
}

const PERIOD_DOUBLING_JSON: &str = include_str!("../data/period-doubling.json");
const CHAIR_JSON: &str = include_str!("../data/chair.json");

/// The bundled systems, by name.
pub fn catalog() -> Vec<SubstitutionSystem> {
    [PERIOD_DOUBLING_JSON, CHAIR_JSON]
        .iter()
        .map(|src| {
            let file: SystemFile = serde_json::from_str(src).expect("bundled system parses");
            SubstitutionSystem::from_file(&file).expect("bundled system is well formed")
        })
        .collect()
}

pub fn builtin(name: &str) -> Option<SubstitutionSystem> {
    catalog().into_iter().find(|s| s.name == name)
}

pub fn period_doubling() -> SubstitutionSystem {
    builtin("period-doubling").unwrap()
}

/// Arrowed-square recoding of the chair tiling, with its C4 action.
pub fn chair() -> SubstitutionSystem {
    builtin("chair").unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_doubling_is_primitive() {
        let pd = period_doubling();
        assert_eq!(pd.substitution_matrix(), vec![vec![1, 1], vec![2, 0]]);
        let report = pd.validate().unwrap();
        assert!(report.primitive);
        assert_eq!(report.primitivity_exponent, Some(2));
        assert!(!report.aperiodicity_verified);
    }

    #[test]
    fn block_diagonal_is_not_primitive() {
        let mut sys = period_doubling();
        sys.rules = vec![vec![0, 0], vec![1, 1]];
        assert!(!sys.validate().unwrap().primitive);
    }

    #[test]
    fn malformed_rule_names_label() {
        let mut sys = period_doubling();
        sys.rules[1] = vec![0];
        let err = sys.validate().unwrap_err().to_string();
        assert!(err.contains("'b'"), "{err}");
    }

    #[test]
    fn chair_is_c4_compatible() {
        let report = chair().validate().unwrap();
        assert!(report.primitive);
        assert_eq!(report.group_compatible, Some(true));
    }

    #[test]
    fn asymmetric_rules_are_rejected_with_witness() {
        let mut sys = chair();
        // swap two children of NE only
        sys.rules[0].swap(0, 1);
        let err = sys.validate().unwrap_err().to_string();
        assert!(err.contains("group-compatibility violated at (g="), "{err}");
        assert!(err.contains("label="), "{err}");
    }

    #[test]
    fn expand_examples() {
        let pd = period_doubling();
        assert_eq!(pd.expand_supertile(0, 0).data, vec![0]);
        assert_eq!(pd.expand_supertile(0, 1).data, vec![0, 1]);
        assert_eq!(pd.expand_supertile(0, 2).data, vec![0, 1, 0, 0]);
        assert_eq!(chair().expand_supertile(2, 3).data.len(), 64);
    }

    #[test]
    fn expand_is_a_homomorphism() {
        for sys in catalog() {
            for a in 0..sys.alphabet_size() as Label {
                for (j, k) in [(1, 2), (2, 1), (2, 2), (0, 3)] {
                    let direct = sys.expand_supertile(a, j + k);
                    let mut staged = sys.expand_supertile(a, j);
                    for _ in 0..k {
                        staged = sys.substitute(&staged);
                    }
                    assert_eq!(direct, staged);
                }
            }
        }
    }

    #[test]
    fn file_round_trip() {
        for sys in catalog() {
            let back = SubstitutionSystem::from_file(&sys.to_file()).unwrap();
            assert_eq!(back, sys);
        }
    }

    #[test]
    fn rotation_group_laws() {
        let r = Rotation::new(1);
        assert_eq!(r.apply_cell([2, 1]), [-1, 2]);
        assert_eq!(r.compose(r.inverse()), Rotation::IDENTITY);
        assert_eq!(r.compose(r).apply_cell([2, 1]), [-2, -1]);
    }
}
