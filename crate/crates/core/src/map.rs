//! Representable continuous maps between hulls.
//!
//! A [`MapPipeline`] is a finite composition of stages, each evaluable to any
//! radius and each carrying a uniform-continuity certificate. Images are
//! [`Placed`] tilings, so stages compose lazily: only the cells a caller
//! inspects are ever computed.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::patch::{central_patch, scan_level, Patch};
use crate::rational::{q, Cell, Rational, Vector};
use crate::system::{Label, RotationAction, SubstitutionSystem};
use crate::tiling::{LabelField, Placed};

/// Anything that sends tilings of a source hull to tilings.
pub trait TilingMap: Send + Sync {
    fn source(&self) -> &Arc<SubstitutionSystem>;
    fn image(&self, t: &Placed) -> Result<Placed>;

    fn apply(&self, t: &Placed, out_radius: &Rational) -> Result<Patch> {
        central_patch(&self.image(t)?, out_radius)
    }
}

/// Sliding block code: each output tile's label is read off the input tiles
/// whose cubes lie within `radius` of its own cube.
#[derive(Clone, Debug)]
pub struct LocalTable {
    pub radius: Rational,
    pub output: Arc<SubstitutionSystem>,
    pub offsets: Arc<Vec<Cell>>,
    pub table: Arc<HashMap<Vec<Label>, Label>>,
}

impl LocalTable {
    /// Offsets `v` whose unit cube is within distance `radius` of the unit cube at 0; the origin comes first.
    pub fn window_offsets(dim: usize, radius: &Rational) -> Vec<Cell> {
        let reach = radius.floor_i64() + 1;
        let r2 = radius * radius;
        let gap = |v: i64| Rational::from_int((v.abs() - 1).max(0));
        let mut offsets = vec![[0, 0]];
        let ys: Vec<i64> = if dim == 1 { vec![0] } else { (-reach..=reach).collect() };
        for x in -reach..=reach {
            for &y in &ys {
                if [x, y] == [0, 0] {
                    continue;
                }
                let d2 = &gap(x) * &gap(x) + &gap(y) * &gap(y);
                if d2 <= r2 {
                    offsets.push([x, y]);
                }
            }
        }
        offsets
    }

    /// Table built from `rule`, evaluated on every legal window of the source language.
    pub fn from_fn(
        source: &SubstitutionSystem,
        output: Arc<SubstitutionSystem>,
        radius: Rational,
        rule: impl Fn(&[Label]) -> Label,
    ) -> Result<Self> {
        let offsets = Self::window_offsets(source.dim, &radius);
        let reach = radius.floor_i64() + 1;
        let level = scan_level(source, 2 * reach + 1)?;
        let tile = source.expand_supertile(0, level);
        let side = tile.side as i64;
        let rows = tile.rows() as i64;
        let mut table = HashMap::new();
        let ylo = if source.dim == 1 { 0 } else { reach };
        for y in ylo..rows - ylo {
            for x in reach..side - reach {
                let window: Vec<Label> = offsets
                    .iter()
                    .map(|o| tile.get((x + o[0]) as usize, (y + o[1]) as usize))
                    .collect();
                table.entry(window).or_insert_with_key(|w| rule(w));
            }
        }
        Ok(LocalTable {
            radius,
            output,
            offsets: Arc::new(offsets),
            table: Arc::new(table),
        })
    }

    /// Table over every window of labels, legal or not; usable on any labelling.
    pub fn complete(
        source: &SubstitutionSystem,
        output: Arc<SubstitutionSystem>,
        radius: Rational,
        rule: impl Fn(&[Label]) -> Label,
    ) -> Result<Self> {
        let offsets = Self::window_offsets(source.dim, &radius);
        let a = source.alphabet_size();
        let size = (a as u64).checked_pow(offsets.len() as u32).filter(|&n| n <= 1 << 16);
        let Some(size) = size else {
            return Err(Error::Size(format!(
                "complete table over {} cells is too large",
                offsets.len()
            )));
        };
        let mut table = HashMap::with_capacity(size as usize);
        for code in 0..size {
            let mut c = code;
            let window: Vec<Label> = (0..offsets.len())
                .map(|_| {
                    let l = (c % a as u64) as Label;
                    c /= a as u64;
                    l
                })
                .collect();
            let out = rule(&window);
            table.insert(window, out);
        }
        Ok(LocalTable {
            radius,
            output,
            offsets: Arc::new(offsets),
            table: Arc::new(table),
        })
    }

    pub fn identity(sys: Arc<SubstitutionSystem>) -> Result<Self> {
        LocalTable::from_fn(&sys.clone(), sys, Rational::zero(), |w| w[0])
    }
}

/// One term of a wiggle feature: `direction` times the fraction of the unit
/// box centred at `center` covered by tiles labelled `label`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageTerm {
    pub center: Vector,
    pub label: Label,
    pub direction: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Feature {
    pub terms: Vec<CoverageTerm>,
}

impl Feature {
    /// Upper bound on `|value|` (sum of l1 norms of directions).
    pub fn bound(&self) -> Rational {
        self.terms.iter().map(|t| t.direction.norm_upper()).sum()
    }

    /// Largest radius this feature reads.
    pub fn support(&self) -> Rational {
        let half_diag =
            Rational::new(1, 2) * Rational::from_int(self.terms.first().map_or(1, |t| t.center.dim() as i64));
        self.terms
            .iter()
            .map(|t| t.center.norm_upper() + &half_diag)
            .fold(Rational::zero(), Rational::max)
    }

    pub fn evaluate(&self, t: &Placed) -> Result<Vector> {
        let dim = t.dim();
        let mut acc = Vector::zero(dim);
        for term in &self.terms {
            let c = coverage(t, &term.center, term.label)?;
            if !c.is_zero() {
                acc = &acc + &term.direction.scale(&c);
            }
        }
        Ok(acc)
    }
}

/// Measure of `center + [-1/2, 1/2]^d` covered by tiles of `t` with the given label.
pub fn coverage(t: &Placed, center: &Vector, label: Label) -> Result<Rational> {
    let dim = t.dim();
    let half = Rational::new(1, 2);
    let shift = t.shift();
    // per axis: candidate cells and their overlap lengths with the box
    let mut axes: Vec<Vec<(i64, Rational)>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let lo = &center.0[i] - &half;
        let hi = &center.0[i] + &half;
        let first = (&lo + &shift.0[i]).floor_i64();
        let last = (&hi + &shift.0[i]).ceil_i64() - 1;
        let mut cells = Vec::new();
        for z in first..=last {
            let a = Rational::from_int(z) - &shift.0[i];
            let b = &a + Rational::one();
            let len = b.min(hi.clone()) - a.max(lo.clone());
            if len.is_positive() {
                cells.push((z, len));
            }
        }
        axes.push(cells);
    }
    let mut total = Rational::zero();
    if dim == 1 {
        for (x, lx) in &axes[0] {
            if t.label_at([*x, 0])? == label {
                total += lx;
            }
        }
    } else {
        for (x, lx) in &axes[0] {
            for (y, ly) in &axes[1] {
                if t.label_at([*x, *y])? == label {
                    total += &(lx * ly);
                }
            }
        }
    }
    Ok(total)
}

/// Translation-Lipschitz constant of a single coverage value (per unit of motion).
const COVERAGE_LIPSCHITZ: i64 = 3;

/// `T ↦ T - s(T)` with `s(T) = Σ_k c_k ψ_k(T)`; `ψ_k` reads only `B_k(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wiggle {
    pub coeffs: Vec<Rational>,
    pub features: Vec<Feature>,
    /// Declared decay bound `|c_k| <= C λ^k`.
    pub decay: (Rational, Rational),
}

impl Wiggle {
    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    pub fn check(&self, sys: &SubstitutionSystem) -> Result<()> {
        if self.coeffs.len() != self.features.len() {
            return Err(Error::structural("wiggle needs one feature per coefficient"));
        }
        let (c, lambda) = &self.decay;
        if c.is_negative() || lambda.is_negative() || *lambda >= Rational::one() {
            return Err(Error::parameter("wiggle decay needs C >= 0 and 0 <= λ < 1"));
        }
        let mut total = Rational::zero();
        for (i, (ck, f)) in self.coeffs.iter().zip(&self.features).enumerate() {
            let k = (i + 1) as i64;
            if ck.abs() > c * &lambda.pow(k as i32) {
                return Err(Error::parameter(format!(
                    "coefficient c_{k} = {ck} violates the decay bound"
                )));
            }
            if f.support() > Rational::from_int(k) {
                return Err(Error::parameter(format!("feature ψ_{k} reads beyond radius {k}")));
            }
            if f.bound() > Rational::one() {
                return Err(Error::parameter(format!("feature ψ_{k} is not bounded by 1")));
            }
            for term in &f.terms {
                if term.label as usize >= sys.alphabet_size() || term.center.dim() != sys.dim {
                    return Err(Error::structural(format!("feature ψ_{k} does not fit the space")));
                }
            }
            total += &(ck.abs() * f.bound());
        }
        if total > Rational::one() {
            return Err(Error::parameter("wiggle amplitude Σ|c_k| exceeds 1"));
        }
        Ok(())
    }

    pub fn displacement(&self, t: &Placed) -> Result<Vector> {
        let mut s = Vector::zero(t.dim());
        for (c, f) in self.coeffs.iter().zip(&self.features) {
            if c.is_zero() {
                continue;
            }
            s = &s + &f.evaluate(t)?.scale(c);
        }
        Ok(s)
    }

    /// Upper bound on `|s(T)|`.
    pub fn amplitude(&self) -> Rational {
        self.coeffs
            .iter()
            .zip(&self.features)
            .map(|(c, f)| c.abs() * f.bound())
            .sum()
    }

    pub fn lipschitz(&self) -> Rational {
        Rational::one() + self.amplitude() * Rational::from_int(COVERAGE_LIPSCHITZ)
    }

    /// Least m with `Σ_{k>m} 2|c_k| |ψ_k| <= budget`.
    pub fn tail_index(&self, budget: &Rational) -> usize {
        let weights: Vec<Rational> = self
            .coeffs
            .iter()
            .zip(&self.features)
            .map(|(c, f)| Rational::from_int(2) * c.abs() * f.bound())
            .collect();
        (0..=weights.len())
            .find(|&m| weights[m..].iter().cloned().sum::<Rational>() <= *budget)
            .unwrap_or(weights.len())
    }

    /// 1D wiggle with `c_k = ratio^k` and `ψ_k` the coverage of `[k-1, k]` by `label`.
    pub fn geometric_1d(depth: usize, ratio: Rational, label: Label) -> Self {
        let coeffs = (1..=depth).map(|k| ratio.pow(k as i32)).collect();
        let features = (1..=depth)
            .map(|k| Feature {
                terms: vec![CoverageTerm {
                    center: Vector(vec![Rational::from_int(k as i64) - Rational::new(1, 2)]),
                    label,
                    direction: Vector::from_ints(&[1]),
                }],
            })
            .collect();
        Wiggle {
            coeffs,
            features,
            decay: (Rational::one(), ratio),
        }
    }

    /// C_n-equivariant 2D wiggle: `ψ_k = (1/n) Σ_g g·e1 · cov(g·p_k, g·label)` with `p_k = (k-1, 0)`.
    pub fn equivariant_2d(depth: usize, ratio: Rational, label: Label, group: &RotationAction) -> Self {
        let n = group.order as i64;
        let coeffs = (1..=depth).map(|k| ratio.pow(k as i32)).collect();
        let e1 = Vector::from_ints(&[1, 0]);
        let features = (1..=depth)
            .map(|k| {
                let p = Vector::from_ints(&[k as i64 - 1, 0]);
                Feature {
                    terms: group
                        .elements()
                        .map(|g| {
                            let rot = group.rotation(g);
                            CoverageTerm {
                                center: rot.apply_vector(&p),
                                label: group.act(g, label),
                                direction: rot.apply_vector(&e1).scale(&Rational::new(1, n)),
                            }
                        })
                        .collect(),
                }
            })
            .collect();
        Wiggle {
            coeffs,
            features,
            decay: (Rational::one(), ratio),
        }
    }

    /// Coefficients scaled by `t` (a time slice of a linear family).
    pub fn scaled(&self, t: &Rational) -> Self {
        Wiggle {
            coeffs: self.coeffs.iter().map(|c| c * t).collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub enum Stage {
    Translate { v: Vector },
    LocalTable(LocalTable),
    Substitute,
    Wiggle(Wiggle),
}

struct TableField {
    inner: Placed,
    offsets: Arc<Vec<Cell>>,
    table: Arc<HashMap<Vec<Label>, Label>>,
}

impl LabelField for TableField {
    fn label(&self, cell: Cell) -> Result<Label> {
        let window = self
            .offsets
            .iter()
            .map(|o| self.inner.label_at([cell[0] + o[0], cell[1] + o[1]]))
            .collect::<Result<Vec<_>>>()?;
        self.table
            .get(&window)
            .copied()
            .ok_or_else(|| Error::TableIncomplete(format!("no entry for window {window:?}")))
    }
}

struct SubstitutedField {
    inner: Placed,
    sys: Arc<SubstitutionSystem>,
    offset: Cell,
}

impl LabelField for SubstitutedField {
    fn label(&self, cell: Cell) -> Result<Label> {
        let n = self.sys.expansion;
        let p = [cell[0] + self.offset[0], cell[1] + self.offset[1]];
        let parent = [p[0].div_euclid(n), p[1].div_euclid(n)];
        let child = [p[0].rem_euclid(n), p[1].rem_euclid(n)];
        Ok(self.sys.child(self.inner.label_at(parent)?, child))
    }
}

impl Stage {
    pub fn apply(&self, sys: &Arc<SubstitutionSystem>, t: &Placed) -> Result<Placed> {
        match self {
            Stage::Translate { v } => Ok(t.minus(v)),
            Stage::LocalTable(lt) => Ok(Placed::new(
                Arc::new(TableField {
                    inner: t.clone(),
                    offsets: lt.offsets.clone(),
                    table: lt.table.clone(),
                }),
                t.shift().clone(),
            )),
            Stage::Substitute => {
                let scaled = t.shift().scale(&sys.expansion_rational());
                let m = scaled.floor_cell();
                Ok(Placed::new(
                    Arc::new(SubstitutedField {
                        inner: t.clone(),
                        sys: sys.clone(),
                        offset: m,
                    }),
                    scaled.fract(),
                ))
            }
            Stage::Wiggle(w) => Ok(t.minus(&w.displacement(t)?)),
        }
    }

    pub fn lipschitz(&self, sys: &SubstitutionSystem) -> Rational {
        match self {
            Stage::Translate { .. } | Stage::LocalTable(_) => Rational::one(),
            Stage::Substitute => sys.expansion_rational(),
            Stage::Wiggle(w) => w.lipschitz(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Stage::Translate { .. } => "translate",
            Stage::LocalTable(_) => "local_table",
            Stage::Substitute => "substitute",
            Stage::Wiggle(_) => "wiggle",
        }
    }
}

/// Uniform-continuity data for a pipeline at given output tolerances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusCertificate {
    /// Inputs agreeing exactly on `B_{1/δ}` have images agreeing on `B_{1/ε_ball}`
    /// up to a translation of size at most `ε_move`.
    pub delta: Rational,
    /// `f(T - y) = f(T) - y'` with `|y'| <= lipschitz · |y|`.
    pub lipschitz: Rational,
    /// Tail index `m*` of each wiggle stage, in stage order.
    pub wiggle_tails: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct MapPipeline {
    pub source: Arc<SubstitutionSystem>,
    pub target: Arc<SubstitutionSystem>,
    pub stages: Vec<Stage>,
}

impl MapPipeline {
    pub fn identity(sys: Arc<SubstitutionSystem>) -> Self {
        MapPipeline {
            source: sys.clone(),
            target: sys,
            stages: Vec::new(),
        }
    }

    pub fn single(sys: Arc<SubstitutionSystem>, stage: Stage) -> Self {
        MapPipeline {
            source: sys.clone(),
            target: sys,
            stages: vec![stage],
        }
    }

    pub fn then(mut self, stage: Stage) -> Self {
        if let Stage::LocalTable(lt) = &stage {
            self.target = lt.output.clone();
        }
        self.stages.push(stage);
        self
    }

    /// Space in force before each stage, then the final space.
    fn spaces(&self) -> Vec<Arc<SubstitutionSystem>> {
        let mut out = vec![self.source.clone()];
        for s in &self.stages {
            let next = match s {
                Stage::LocalTable(lt) => lt.output.clone(),
                _ => out.last().unwrap().clone(),
            };
            out.push(next);
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let spaces = self.spaces();
        for (i, stage) in self.stages.iter().enumerate() {
            let sys = &spaces[i];
            match stage {
                Stage::Translate { v } if v.dim() != sys.dim => {
                    return Err(Error::structural(format!(
                        "stage {i}: translation has the wrong dimension"
                    )));
                }
                Stage::LocalTable(lt) if lt.output.dim != sys.dim => {
                    return Err(Error::structural(format!("stage {i}: table output dimension differs")));
                }
                Stage::Wiggle(w) => w.check(sys)?,
                _ => {}
            }
        }
        if spaces.last().unwrap().name != self.target.name {
            return Err(Error::structural("pipeline stages do not end in the target space"));
        }
        Ok(())
    }

    pub fn lipschitz(&self) -> Rational {
        let spaces = self.spaces();
        self.stages
            .iter()
            .enumerate()
            .map(|(i, s)| s.lipschitz(&spaces[i]))
            .fold(Rational::one(), |a, b| a * b)
    }

    /// Composes the per-stage certificates from the output back to the input.
    pub fn modulus(&self, eps_ball: &Rational, eps_move: &Rational) -> Result<ModulusCertificate> {
        if !eps_ball.is_positive() || !eps_move.is_positive() {
            return Err(Error::parameter("ε_ball and ε_move must be positive"));
        }
        if *eps_move >= q(1, 2) {
            return Err(Error::parameter(format!(
                "ε_move = {eps_move} is not below the alignment-uniqueness bound 1/2"
            )));
        }
        let spaces = self.spaces();
        let mut ball = eps_ball.recip();
        let mut motion = eps_move.clone();
        let mut tails = Vec::new();
        for (i, stage) in self.stages.iter().enumerate().rev() {
            let sys = &spaces[i];
            match stage {
                Stage::Translate { v } => ball = ball + v.norm_upper(),
                Stage::LocalTable(lt) => {
                    ball = ball + &lt.radius + Rational::from_int(sys.dim as i64);
                }
                Stage::Substitute => {
                    let n = sys.expansion_rational();
                    ball = &ball / &n + Rational::one();
                    motion = &motion / &n;
                }
                Stage::Wiggle(w) => {
                    // half the motion budget absorbs the unread tail, half the upstream motion
                    let half = &motion / &Rational::from_int(2);
                    let m_star = w.tail_index(&half);
                    tails.push(m_star);
                    ball = Rational::from_int(m_star as i64).max(ball + Rational::one());
                    motion = &half / &w.lipschitz();
                }
            }
        }
        tails.reverse();
        Ok(ModulusCertificate {
            delta: ball.recip(),
            lipschitz: self.lipschitz(),
            wiggle_tails: tails,
        })
    }
}

impl TilingMap for MapPipeline {
    fn source(&self) -> &Arc<SubstitutionSystem> {
        &self.source
    }

    fn image(&self, t: &Placed) -> Result<Placed> {
        let spaces = self.spaces();
        let mut x = t.clone();
        for (i, stage) in self.stages.iter().enumerate() {
            x = stage.apply(&spaces[i], &x)?;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::period_doubling;
    use crate::tiling::{reference_tiling, sample_hull};

    fn pd() -> Arc<SubstitutionSystem> {
        Arc::new(period_doubling())
    }

    #[test]
    fn modulus_examples() {
        let sys = pd();
        let f = MapPipeline::single(
            sys.clone(),
            Stage::Translate {
                v: Vector(vec![q(1, 4)]),
            },
        );
        assert_eq!(f.modulus(&q(1, 8), &q(1, 32)).unwrap().delta, q(4, 33));
        let id = MapPipeline::identity(sys.clone());
        assert_eq!(id.modulus(&q(1, 8), &q(1, 32)).unwrap().delta, q(1, 8));
        let w = MapPipeline::single(sys, Stage::Wiggle(Wiggle::geometric_1d(10, q(1, 4), 0)));
        let cert = w.modulus(&q(1, 16), &q(1, 32)).unwrap();
        assert_eq!(cert.wiggle_tails, vec![3]);
        assert_eq!(cert.delta, q(1, 17));
        let long = MapPipeline::single(pd(), Stage::Wiggle(Wiggle::geometric_1d(40, q(1, 4), 0)));
        let cert = long.modulus(&q(1, 64), &q(1, 32)).unwrap();
        assert_eq!(cert.delta, q(1, 65));
    }

    #[test]
    fn modulus_rejects_large_motion() {
        let id = MapPipeline::identity(pd());
        assert!(matches!(id.modulus(&q(1, 8), &q(1, 2)), Err(Error::Parameter(_))));
        assert!(matches!(id.modulus(&q(0, 1), &q(1, 8)), Err(Error::Parameter(_))));
    }

    #[test]
    fn zero_wiggle_is_identity() {
        let sys = pd();
        let w = Wiggle::geometric_1d(10, q(1, 4), 0).scaled(&Rational::zero());
        let f = MapPipeline::single(sys.clone(), Stage::Wiggle(w));
        for t in sample_hull(&sys, 10, 2) {
            let t = t.place(&sys).unwrap();
            assert_eq!(f.apply(&t, &q(3, 1)).unwrap(), central_patch(&t, &q(3, 1)).unwrap());
        }
    }

    #[test]
    fn translate_moves_tiles_back() {
        let sys = pd();
        let v = Vector(vec![q(5, 8)]);
        let f = MapPipeline::single(sys.clone(), Stage::Translate { v: v.clone() });
        for t in sample_hull(&sys, 10, 4) {
            let t = t.place(&sys).unwrap();
            let out = f.apply(&t, &q(2, 1)).unwrap().translated(&v);
            let big = central_patch(&t, &q(4, 1)).unwrap();
            assert!(out.is_subpatch_of(&big));
        }
    }

    #[test]
    fn substitute_matches_expansion() {
        let sys = pd();
        let t0 = reference_tiling(&sys).place(&sys).unwrap();
        let f = MapPipeline::single(sys.clone(), Stage::Substitute);
        let img = f.image(&t0).unwrap();
        for x in -8..8 {
            let parent = t0.label_at([x, 0]).unwrap();
            let kids = sys.expand_supertile(parent, 1).data;
            assert_eq!(img.label_at([2 * x, 0]).unwrap(), kids[0]);
            assert_eq!(img.label_at([2 * x + 1, 0]).unwrap(), kids[1]);
        }
    }

    #[test]
    fn identity_table_is_identity() {
        let sys = pd();
        let lt = LocalTable::identity(sys.clone()).unwrap();
        let f = MapPipeline::single(sys.clone(), Stage::LocalTable(lt));
        for t in sample_hull(&sys, 10, 6) {
            let t = t.place(&sys).unwrap();
            assert_eq!(f.apply(&t, &q(5, 1)).unwrap(), central_patch(&t, &q(5, 1)).unwrap());
        }
    }

    #[test]
    fn window_offsets_1d() {
        assert_eq!(LocalTable::window_offsets(1, &q(1, 1)).len(), 5);
        assert_eq!(LocalTable::window_offsets(1, &Rational::zero()).len(), 3);
    }

    #[test]
    fn wiggle_displacement_by_hand() {
        // shift 0: ψ_k is the indicator of label 'a' at cell k-1
        let sys = pd();
        let t0 = reference_tiling(&sys).place(&sys).unwrap();
        let w = Wiggle::geometric_1d(10, q(1, 4), 0);
        let mut expected = Rational::zero();
        for k in 1..=10 {
            if t0.label_at([k - 1, 0]).unwrap() == 0 {
                expected = expected + q(1, 4).pow(k as i32);
            }
        }
        assert_eq!(w.displacement(&t0).unwrap(), Vector(vec![expected]));
    }
}
