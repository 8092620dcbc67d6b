//! Localization: from a continuous pipeline `f` to a local map `f_ε` that
//! differs from `f` by a translation smaller than `ε`.
//!
//! For each node `y` of a finite mollifier, `ρ(T, y)` is the small vector with
//! `f(T) - ρ(T, y)` agreeing with `f(T - y) - s̃(T - y)`, and `s̃` aligns `f`
//! with its value on the section representative `T0 - g(T)`. The weighted
//! average `s_ε(T) = Σ w_y ρ(T, y)` defines `f_ε(T) = f(T) - s_ε(T)`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::locality::{align_views, check_uniformly_local};
use crate::map::{MapPipeline, Stage, TilingMap};
use crate::patch::central_patch;
use crate::rational::{q, Rational, Vector};
use crate::section::Section;
use crate::system::{RotationAction, SubstitutionSystem};
use crate::tiling::{sample_hull, Placed};

const WEIGHT_DENOM: i64 = 1_000_000;

/// Finite mollifier on the unit ball: node `u` stands for `y = δ·u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MollifierScheme {
    pub nodes: Vec<Vector>,
    pub weights: Vec<Rational>,
}

fn bump(r2: f64) -> f64 {
    if r2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r2)).exp()
    }
}

impl MollifierScheme {
    /// Grid `j/4`, `|j| < 4` in 1D; `(i, j)/2` with `i² + j² < 4` in 2D.
    pub fn standard(dim: usize) -> Self {
        let nodes: Vec<Vector> = if dim == 1 {
            (-3..=3).map(|j| Vector(vec![q(j, 4)])).collect()
        } else {
            let mut v = Vec::new();
            for i in -1i64..=1 {
                for j in -1i64..=1 {
                    if i * i + j * j < 4 {
                        v.push(Vector(vec![q(i, 2), q(j, 2)]));
                    }
                }
            }
            v
        };
        // weights depend on |u|² only, so rounding keeps every symmetry of the grid
        let raw: Vec<Rational> = nodes
            .iter()
            .map(|u| Rational::from_f64_with_denom(bump(u.norm_sq().to_f64()), WEIGHT_DENOM))
            .collect();
        let total: Rational = raw.iter().cloned().sum();
        MollifierScheme {
            nodes,
            weights: raw.iter().map(|w| w / &total).collect(),
        }
    }

    pub fn new(nodes: Vec<Vector>, weights: Vec<Rational>) -> Result<Self> {
        let s = MollifierScheme { nodes, weights };
        s.validate()?;
        Ok(s)
    }

    /// A scheme that skips validation; used to exercise the verification suites.
    pub fn unchecked(nodes: Vec<Vector>, weights: Vec<Rational>) -> Self {
        MollifierScheme { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> Rational {
        self.weights.iter().cloned().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.weights.len() || self.nodes.is_empty() {
            return Err(Error::parameter("scheme needs one weight per node"));
        }
        if self.weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::parameter("scheme weights must be positive"));
        }
        if self.total_weight() != Rational::one() {
            return Err(Error::parameter(format!(
                "scheme weights sum to {}",
                self.total_weight()
            )));
        }
        if self.nodes.iter().any(|u| !u.norm_le(&Rational::one())) {
            return Err(Error::parameter("scheme node outside the unit ball"));
        }
        if !self.invariant_under(|u| -u) {
            return Err(Error::parameter("scheme is not symmetric under y -> -y"));
        }
        Ok(())
    }

    fn invariant_under(&self, map: impl Fn(&Vector) -> Vector) -> bool {
        self.nodes.iter().zip(&self.weights).all(|(u, w)| {
            let image = map(u);
            self.nodes
                .iter()
                .zip(&self.weights)
                .any(|(v, w2)| *v == image && w2 == w)
        })
    }

    pub fn is_group_invariant(&self, group: &RotationAction) -> bool {
        group.elements().all(|g| {
            let rot = group.rotation(g);
            self.invariant_under(|u| rot.apply_vector(u))
        })
    }
}

/// Tolerances and radii of one localization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationParams {
    pub epsilon: Rational,
    pub eps_ball: Rational,
    pub eps_move: Rational,
    pub delta: Rational,
    pub radius: Rational,
    pub lipschitz: Rational,
}

impl LocalizationParams {
    /// Radius of the ball on which images are compared.
    pub fn ball(&self) -> Rational {
        self.eps_ball.recip()
    }

    /// Alignment bound used for `ρ`.
    pub fn rho_bound(&self) -> Rational {
        &self.lipschitz * &self.delta + Rational::from_int(2) * &self.eps_move
    }

    /// A-priori bound on `|s_ε|`: every `|ρ(T, y)|` is at most `L|y| + ε_move` with `|y| < δ`.
    pub fn s_bound(&self) -> Rational {
        &self.lipschitz * &self.delta + &self.eps_move
    }

    pub fn locality_radius(&self, node_scale: &Rational) -> Rational {
        &self.radius + node_scale * &self.delta
    }
}

pub fn radius_for_delta(delta: &Rational) -> Rational {
    Rational::from_int(2) / delta
}

/// `ε_move = ε/4`, `ε_ball = ε/2`, `δ <= min(modulus, ε/(2L))` a unit fraction, `R = 2/δ`.
pub fn choose_parameters(f: &MapPipeline, epsilon: &Rational) -> Result<LocalizationParams> {
    if !epsilon.is_positive() || *epsilon >= q(1, 2) {
        return Err(Error::parameter(format!("ε = {epsilon} must lie in (0, 1/2)")));
    }
    let eps_ball = epsilon / Rational::from_int(2);
    let eps_move = epsilon / Rational::from_int(4);
    let cert = f.modulus(&eps_ball, &eps_move)?;
    let lip_cap = epsilon / (Rational::from_int(2) * &cert.lipschitz);
    // rounded down to a unit fraction so that R = 2/δ is an integer
    let delta = Rational::new(1, cert.delta.min(lip_cap).recip().ceil_i64());
    let params = LocalizationParams {
        epsilon: epsilon.clone(),
        eps_ball,
        eps_move,
        radius: radius_for_delta(&delta),
        delta,
        lipschitz: cert.lipschitz,
    };
    if params.rho_bound() > *epsilon || params.s_bound() >= *epsilon {
        return Err(Error::Internal("translation budget exceeds ε".into()));
    }
    Ok(params)
}

/// `f_ε`, optionally with nodes scaled by `node_scale` (a connector slice) and
/// optionally averaged over a rotation group.
#[derive(Clone)]
pub struct LocalizedMap {
    pub base: Arc<MapPipeline>,
    pub section: Arc<Section>,
    pub scheme: Arc<MollifierScheme>,
    pub params: LocalizationParams,
    pub node_scale: Rational,
    pub group: Option<RotationAction>,
}

impl LocalizedMap {
    pub fn new(
        base: Arc<MapPipeline>,
        section: Arc<Section>,
        scheme: Arc<MollifierScheme>,
        params: LocalizationParams,
    ) -> Result<Self> {
        if section.radius() != &params.radius {
            return Err(Error::parameter("section radius differs from R"));
        }
        if !Arc::ptr_eq(section.system(), &base.source) && section.system().name != base.source.name {
            return Err(Error::parameter("section is for a different space"));
        }
        Ok(LocalizedMap {
            base,
            section,
            scheme,
            params,
            node_scale: Rational::one(),
            group: None,
        })
    }

    /// The same construction with every node scaled by `u`.
    pub fn connector(&self, u: &Rational) -> Self {
        LocalizedMap {
            node_scale: u.clone(),
            ..self.clone()
        }
    }

    pub fn locality_radius(&self) -> Rational {
        self.params.locality_radius(&self.node_scale)
    }

    /// Translation vectors `y = u·δ·node`.
    pub fn nodes(&self) -> Vec<Vector> {
        let k = &self.node_scale * &self.params.delta;
        self.scheme.nodes.iter().map(|u| u.scale(&k)).collect()
    }

    fn violation(&self, what: &str, t: &Placed) -> Error {
        Error::ModulusViolation(format!(
            "{what}: no alignment within the certified bound (shift {:?})",
            t.shift()
        ))
    }

    /// `s̃(T)`: aligns `f(T)` with `f(T0 - g(T))` on the comparison ball.
    pub fn s_tilde(&self, t: &Placed) -> Result<Vector> {
        let ft = self.base.image(t)?;
        self.s_tilde_with(t, &ft)
    }

    fn s_tilde_with(&self, t: &Placed, ft: &Placed) -> Result<Vector> {
        let rep = self.section.representative(t)?;
        let frep = self.base.image(&rep)?;
        align_views(ft, &frep, &self.params.ball(), &self.params.eps_move)?.ok_or_else(|| self.violation("s̃", t))
    }

    /// `ρ(T, y)`: aligns `f(T)` with `f(T-y) - s̃(T-y)`.
    pub fn rho(&self, t: &Placed, y: &Vector) -> Result<Vector> {
        let ft = self.base.image(t)?;
        self.rho_with(t, &ft, y)
    }

    fn rho_with(&self, t: &Placed, ft: &Placed, y: &Vector) -> Result<Vector> {
        let ty = t.minus(y);
        let fty = self.base.image(&ty)?;
        let st = self.s_tilde_with(&ty, &fty)?;
        align_views(ft, &fty.minus(&st), &self.params.ball(), &self.params.rho_bound())?
            .ok_or_else(|| self.violation("ρ", t))
    }

    /// `ρ(T, y)` for every node, in scheme order.
    pub fn rho_all(&self, t: &Placed) -> Result<Vec<Vector>> {
        let ft = self.base.image(t)?;
        self.nodes().iter().map(|y| self.rho_with(t, &ft, y)).collect()
    }

    /// `s_ε(T) = Σ w_y ρ(T, y)`, without group averaging.
    pub fn s_eps(&self, t: &Placed) -> Result<Vector> {
        let rhos = self.rho_all(t)?;
        let mut s = Vector::zero(t.dim());
        for (w, r) in self.scheme.weights.iter().zip(&rhos) {
            s = &s + &r.scale(w);
        }
        Ok(s)
    }

    /// The translation actually applied: `s_ε`, or its group average.
    pub fn displacement(&self, t: &Placed) -> Result<Vector> {
        let s = match &self.group {
            None => self.s_eps(t)?,
            Some(group) => {
                let mut acc = Vector::zero(t.dim());
                for g in group.elements() {
                    let sg = self.s_eps(&t.rotated(group, g))?;
                    acc = &acc + &group.rotation(g).inverse().apply_vector(&sg);
                }
                acc.scale(&Rational::new(1, group.order as i64))
            }
        };
        if !s.norm_le(&self.params.s_bound()) || !s.norm_lt(&self.params.epsilon) {
            return Err(Error::Internal(format!(
                "translation bound violated: |s| with s = {s:?}"
            )));
        }
        Ok(s)
    }
}

impl TilingMap for LocalizedMap {
    fn source(&self) -> &Arc<SubstitutionSystem> {
        &self.base.source
    }

    fn image(&self, t: &Placed) -> Result<Placed> {
        let s = self.displacement(t)?;
        Ok(self.base.image(t)?.minus(&s))
    }
}

pub fn localize(f: MapPipeline, epsilon: &Rational) -> Result<LocalizedMap> {
    f.check()?;
    let params = choose_parameters(&f, epsilon)?;
    let section = Arc::new(Section::lazy(f.source.clone(), params.radius.clone())?);
    let scheme = Arc::new(MollifierScheme::standard(f.source.dim));
    LocalizedMap::new(Arc::new(f), section, scheme, params)
}

/// Sample count and seed of precondition spot checks.
const PRECONDITION_SAMPLES: usize = 40;
const PRECONDITION_SEED: u64 = 0x5eed;

/// Graded locality as needed for exact endpoints: inputs agreeing on `B_R`
/// give images agreeing on the comparison ball.
pub fn check_endpoint(f: &MapPipeline, params: &LocalizationParams) -> Result<()> {
    let b = params.ball();
    let r = &params.radius - &b + Rational::one();
    if !r.is_positive() {
        return Err(Error::Precondition("comparison ball exceeds R".into()));
    }
    let verdict = check_uniformly_local(
        f,
        &r,
        &[Rational::zero(), &b - Rational::one()],
        PRECONDITION_SAMPLES,
        PRECONDITION_SEED,
    )?;
    match verdict.counterexample {
        None => Ok(()),
        Some((t1, t2)) => Err(Error::Precondition(format!(
            "endpoint is not graded-local at radius {r}: witness pair {} / {}",
            serde_json::to_string(&t1)?,
            serde_json::to_string(&t2)?
        ))),
    }
}

/// `T ↦ f(T) - Σ w_y ρ(T, u·y)`: equals `f` at `u = 0` and `localized` at `u = 1`.
pub fn connect_endpoint(f_local: &MapPipeline, localized: &LocalizedMap, u: &Rational) -> Result<LocalizedMap> {
    if u.is_negative() || *u > Rational::one() {
        return Err(Error::parameter("connector parameter must lie in [0, 1]"));
    }
    check_endpoint(f_local, &localized.params)?;
    Ok(localized.connector(u))
}

/// Pipelines at breakpoints; translations and wiggle coefficients interpolate linearly.
#[derive(Clone, Debug)]
pub struct HomotopyFamily {
    pub breakpoints: Vec<Rational>,
    pub pipelines: Vec<MapPipeline>,
}

impl HomotopyFamily {
    /// `t ↦ wiggle with coefficients t·c_k`, for `t ∈ [0, 1]`.
    pub fn linear_wiggle(sys: Arc<SubstitutionSystem>, wiggle: crate::map::Wiggle) -> Self {
        let start = MapPipeline::single(sys.clone(), Stage::Wiggle(wiggle.scaled(&Rational::zero())));
        let end = MapPipeline::single(sys, Stage::Wiggle(wiggle));
        HomotopyFamily {
            breakpoints: vec![Rational::zero(), Rational::one()],
            pipelines: vec![start, end],
        }
    }

    pub fn constant(f: MapPipeline) -> Self {
        HomotopyFamily {
            breakpoints: vec![Rational::zero(), Rational::one()],
            pipelines: vec![f.clone(), f],
        }
    }

    pub fn check(&self) -> Result<()> {
        let bp = &self.breakpoints;
        if bp.len() < 2 || bp.len() != self.pipelines.len() {
            return Err(Error::parameter(
                "family needs at least two breakpoints, one pipeline each",
            ));
        }
        if bp[0] != Rational::zero() || bp[bp.len() - 1] != Rational::one() || bp.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parameter("breakpoints must increase from 0 to 1"));
        }
        let first = &self.pipelines[0];
        for p in &self.pipelines {
            p.check()?;
            if p.source.name != first.source.name || p.target.name != first.target.name {
                return Err(Error::parameter("family slices change spaces"));
            }
            if p.stages.len() != first.stages.len() {
                return Err(Error::parameter("family slices differ in shape"));
            }
            for (a, b) in p.stages.iter().zip(&first.stages) {
                let same = match (a, b) {
                    (Stage::Translate { .. }, Stage::Translate { .. }) | (Stage::Substitute, Stage::Substitute) => true,
                    (Stage::LocalTable(x), Stage::LocalTable(y)) => {
                        Arc::ptr_eq(&x.table, &y.table) || (x.table == y.table && x.radius == y.radius)
                    }
                    (Stage::Wiggle(x), Stage::Wiggle(y)) => x.features == y.features && x.depth() == y.depth(),
                    _ => false,
                };
                if !same {
                    return Err(Error::parameter("family slices differ in shape"));
                }
            }
        }
        Ok(())
    }

    pub fn at(&self, t: &Rational) -> Result<MapPipeline> {
        if t.is_negative() || *t > Rational::one() {
            return Err(Error::parameter("family parameter must lie in [0, 1]"));
        }
        let bp = &self.breakpoints;
        let i = (0..bp.len() - 1).find(|&i| *t <= bp[i + 1]).unwrap_or(bp.len() - 2);
        let lam = (t - &bp[i]) / (&bp[i + 1] - &bp[i]);
        let (a, b) = (&self.pipelines[i], &self.pipelines[i + 1]);
        let lerp = |x: &Rational, y: &Rational| x + &(&lam * &(y - x));
        let stages = a
            .stages
            .iter()
            .zip(&b.stages)
            .map(|(sa, sb)| match (sa, sb) {
                (Stage::Translate { v }, Stage::Translate { v: w }) => Stage::Translate {
                    v: Vector(v.0.iter().zip(&w.0).map(|(x, y)| lerp(x, y)).collect()),
                },
                (Stage::Wiggle(x), Stage::Wiggle(y)) => {
                    let mut out = x.clone();
                    out.coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(c, d)| lerp(c, d)).collect();
                    out.decay = (
                        x.decay.0.clone().max(y.decay.0.clone()),
                        x.decay.1.clone().max(y.decay.1.clone()),
                    );
                    Stage::Wiggle(out)
                }
                _ => sa.clone(),
            })
            .collect();
        Ok(MapPipeline {
            source: a.source.clone(),
            target: a.target.clone(),
            stages,
        })
    }

    /// Stagewise maxima of `|v|` and `|c_k|` over breakpoints; bounds every slice's modulus.
    pub fn envelope(&self) -> MapPipeline {
        let mut env = self.pipelines[0].clone();
        for p in &self.pipelines[1..] {
            for (e, s) in env.stages.iter_mut().zip(&p.stages) {
                match (e, s) {
                    (Stage::Translate { v }, Stage::Translate { v: w }) => {
                        if w.norm_upper() > v.norm_upper() {
                            *v = w.clone();
                        }
                    }
                    (Stage::Wiggle(x), Stage::Wiggle(y)) => {
                        for (c, d) in x.coeffs.iter_mut().zip(&y.coeffs) {
                            if d.abs() > c.abs() {
                                *c = d.clone();
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        for s in env.stages.iter_mut() {
            if let Stage::Wiggle(w) = s {
                w.coeffs = w.coeffs.iter().map(Rational::abs).collect();
            }
        }
        env
    }
}

/// Localized slices of a family sharing one section and scheme.
pub struct LocalizedHomotopy {
    pub family: HomotopyFamily,
    pub params: LocalizationParams,
    pub section: Arc<Section>,
    pub scheme: Arc<MollifierScheme>,
    pub slices: Vec<(Rational, LocalizedMap)>,
}

impl LocalizedHomotopy {
    /// Localized slice at family time `t`.
    pub fn slice(&self, t: &Rational) -> Result<LocalizedMap> {
        LocalizedMap::new(
            Arc::new(self.family.at(t)?),
            self.section.clone(),
            self.scheme.clone(),
            self.params.clone(),
        )
    }

    /// Reparameterized homotopy: connector of `F(0)` on `[0, 1/4]`, localized
    /// family on `[1/4, 3/4]`, reversed connector of `F(1)` on `[3/4, 1]`.
    pub fn at(&self, tau: &Rational) -> Result<LocalizedMap> {
        if tau.is_negative() || *tau > Rational::one() {
            return Err(Error::parameter("homotopy parameter must lie in [0, 1]"));
        }
        let four = Rational::from_int(4);
        if *tau <= q(1, 4) {
            Ok(self.slice(&Rational::zero())?.connector(&(&four * tau)))
        } else if *tau >= q(3, 4) {
            Ok(self
                .slice(&Rational::one())?
                .connector(&(&four * &(Rational::one() - tau))))
        } else {
            self.slice(&(Rational::from_int(2) * &(tau - &q(1, 4))))
        }
    }
}

pub fn homotopy_localize(family: HomotopyFamily, epsilon: &Rational, grid: usize) -> Result<LocalizedHomotopy> {
    family.check()?;
    if grid < 2 {
        return Err(Error::parameter("time grid needs at least two points"));
    }
    let envelope = family.envelope();
    let params = choose_parameters(&envelope, epsilon)?;
    for endpoint in [family.pipelines.first().unwrap(), family.pipelines.last().unwrap()] {
        check_endpoint(endpoint, &params)?;
    }
    let source = envelope.source.clone();
    let section = Arc::new(Section::lazy(source.clone(), params.radius.clone())?);
    let scheme = Arc::new(MollifierScheme::standard(source.dim));
    let mut out = LocalizedHomotopy {
        family,
        params,
        section,
        scheme,
        slices: Vec::new(),
    };
    for j in 0..grid {
        let t = Rational::new(j as i64, grid as i64 - 1);
        let slice = out.slice(&t)?;
        out.slices.push((t, slice));
    }
    Ok(out)
}

/// `f_ε` with `s̄_ε(T) = (1/|G|) Σ_g g⁻¹ s_ε(gT)` and a G-invariant scheme.
pub fn equivariant_localize(f: MapPipeline, epsilon: &Rational, group: &RotationAction) -> Result<LocalizedMap> {
    if f.source.dim != 2 {
        return Err(Error::parameter("rotation equivariance needs dimension 2"));
    }
    if group.label_map.len() != group.order as usize || f.source.alphabet_size() != group.label_map[0].len() {
        return Err(Error::parameter("group action does not match the space"));
    }
    check_intertwining(&f, group)?;
    let mut fe = localize(f, epsilon)?;
    if !fe.scheme.is_group_invariant(group) {
        return Err(Error::Internal("standard scheme is not group invariant".into()));
    }
    fe.group = Some(group.clone());
    Ok(fe)
}

/// Spot check that `f(gT)` and `g·f(T)` share central radius-2 patches.
pub fn check_intertwining(f: &MapPipeline, group: &RotationAction) -> Result<()> {
    let sys = f.source.clone();
    let radius = Rational::from_int(2);
    for t in sample_hull(&sys, PRECONDITION_SAMPLES / 4, PRECONDITION_SEED) {
        let placed = t.place(&sys)?;
        let ft = f.image(&placed)?;
        for g in group.elements() {
            let lhs = central_patch(&f.image(&placed.rotated(group, g))?, &radius)?;
            let rhs = central_patch(&ft.rotated(group, g), &radius)?;
            if lhs != rhs {
                return Err(Error::Precondition(format!(
                    "map does not intertwine group element {g}: witness {}",
                    serde_json::to_string(&t)?
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::Wiggle;
    use crate::system::{chair, period_doubling};

    #[test]
    fn standard_schemes_are_valid() {
        let s1 = MollifierScheme::standard(1);
        assert_eq!(s1.len(), 7);
        s1.validate().unwrap();
        let s2 = MollifierScheme::standard(2);
        assert_eq!(s2.len(), 9);
        s2.validate().unwrap();
        assert!(s2.is_group_invariant(&chair().group.unwrap()));
    }

    #[test]
    fn corrupted_scheme_is_rejected() {
        let s = MollifierScheme::standard(1);
        let w: Vec<Rational> = s.weights.iter().map(|w| w * &q(9, 10)).collect();
        assert!(MollifierScheme::new(s.nodes.clone(), w).is_err());
    }

    #[test]
    fn radius_example() {
        assert_eq!(radius_for_delta(&q(1, 10)), q(20, 1));
    }

    #[test]
    fn parameters_for_identity_and_wiggle() {
        let sys = Arc::new(period_doubling());
        let id = MapPipeline::identity(sys.clone());
        let p = choose_parameters(&id, &q(1, 8)).unwrap();
        assert_eq!(p.delta, q(1, 16));
        assert!(p.delta.clone() + p.eps_move.clone() < q(1, 8));
        assert!(matches!(choose_parameters(&id, &q(1, 2)), Err(Error::Parameter(_))));
        let w = MapPipeline::single(sys, Stage::Wiggle(Wiggle::geometric_1d(10, q(1, 4), 0)));
        let p = choose_parameters(&w, &q(1, 8)).unwrap();
        assert!(p.delta <= q(1, 26));
        assert!(p.rho_bound() <= q(1, 8));
        assert!(p.s_bound() < q(1, 8));
        assert!(p.delta.clone() + q(2, 1) * p.eps_move.clone() < q(1, 8));
    }

    #[test]
    fn translation_has_zero_s_tilde_and_rho_equal_to_y() {
        let sys = Arc::new(period_doubling());
        let f = MapPipeline::single(
            sys.clone(),
            Stage::Translate {
                v: Vector(vec![q(1, 4)]),
            },
        );
        let fe = localize(f, &q(1, 8)).unwrap();
        for t in sample_hull(&sys, 20, 3) {
            let t = t.place(&sys).unwrap();
            assert!(fe.s_tilde(&t).unwrap().is_zero());
            for y in fe.nodes() {
                assert_eq!(fe.rho(&t, &y).unwrap(), y);
            }
            assert!(fe.s_eps(&t).unwrap().is_zero());
        }
    }

    #[test]
    fn wiggle_closed_forms() {
        let sys = Arc::new(period_doubling());
        let w = Wiggle::geometric_1d(10, q(1, 4), 0);
        let f = MapPipeline::single(sys.clone(), Stage::Wiggle(w.clone()));
        let fe = localize(f, &q(1, 8)).unwrap();
        for t in sample_hull(&sys, 20, 4) {
            let t = t.place(&sys).unwrap();
            let rep = fe.section.representative(&t).unwrap();
            let st = &w.displacement(&rep).unwrap() - &w.displacement(&t).unwrap();
            assert_eq!(fe.s_tilde(&t).unwrap(), st);
            for y in fe.nodes() {
                let ty = t.minus(&y);
                let rep_y = fe.section.representative(&ty).unwrap();
                let expected = &(&y + &w.displacement(&rep_y).unwrap()) - &w.displacement(&t).unwrap();
                assert_eq!(fe.rho(&t, &y).unwrap(), expected);
            }
        }
    }

    #[test]
    fn connector_endpoints() {
        let sys = Arc::new(period_doubling());
        let f = MapPipeline::single(sys.clone(), Stage::Wiggle(Wiggle::geometric_1d(10, q(1, 4), 0)));
        let fe = localize(f.clone(), &q(1, 8)).unwrap();
        let c0 = connect_endpoint(&f, &fe, &Rational::zero()).unwrap();
        let c1 = connect_endpoint(&f, &fe, &Rational::one()).unwrap();
        let r = q(3, 1);
        for t in sample_hull(&sys, 10, 5) {
            let t = t.place(&sys).unwrap();
            assert_eq!(c0.apply(&t, &r).unwrap(), f.apply(&t, &r).unwrap());
            assert_eq!(c1.apply(&t, &r).unwrap(), fe.apply(&t, &r).unwrap());
        }
    }

    #[test]
    fn family_interpolates_and_bounds() {
        let sys = Arc::new(period_doubling());
        let fam = HomotopyFamily::linear_wiggle(sys, Wiggle::geometric_1d(4, q(1, 4), 0));
        fam.check().unwrap();
        let mid = fam.at(&q(1, 2)).unwrap();
        let Stage::Wiggle(w) = &mid.stages[0] else { panic!() };
        assert_eq!(w.coeffs[0], q(1, 8));
        let Stage::Wiggle(e) = &fam.envelope().stages[0] else {
            panic!()
        };
        assert_eq!(e.coeffs[1], q(1, 16));
    }
}
